//! Dense complex matrices and the `su(m)` layer.
//!
//! Everything here is value-typed and pure. Matrices are small (m ≤ 8 in
//! every caller), so clarity wins over blocking or in-place tricks.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector, Schur};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for `su(m)` membership.
pub const SU_TOL: f64 = 1e-12;
/// Relative singular-value cutoff used for the commutant nullity.
pub const RANK_TOL: f64 = 1e-9;
/// Real parts of skew-hermitian spectra are expected below this.
pub const EIG_TOL: f64 = 1e-10;

const SCHUR_EPS: f64 = 1e-15;
const SCHUR_MAX_ITER: usize = 10_000;

pub(crate) const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
pub(crate) const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
pub(crate) const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Square complex matrix with finite entries.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixFile", into = "MatrixFile")]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        for col in 0..m.ncols() {
            for row in 0..m.nrows() {
                let z = m[(row, col)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::NonFinite { row, col });
                }
            }
        }
        Ok(Self(m))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        Self(DMatrix::from_diagonal(&DVector::from_column_slice(diag)))
    }

    /// Builds a matrix from row-major entries. Panics if `entries.len() != dim²`.
    pub fn from_row_slice(dim: usize, entries: &[Complex64]) -> Result<Self> {
        assert_eq!(entries.len(), dim * dim, "expected {dim}x{dim} entries");
        Self::new(DMatrix::from_row_slice(dim, dim, entries))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn conj(&self) -> Self {
        Self(self.0.map(|z| z.conj()))
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self(self.0.scale(c))
    }

    pub fn scale_complex(&self, c: Complex64) -> Self {
        Self(&self.0 * c)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn determinant(&self) -> Complex64 {
        self.0.clone().determinant()
    }

    /// Applies the matrix to a complex vector given as a slice.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim());
        (0..self.dim())
            .map(|row| (0..self.dim()).map(|col| self.0[(row, col)] * v[col]).sum())
            .collect()
    }

    /// `‖A Aᴴ − I‖_max`
    pub fn unitarity_defect(&self) -> f64 {
        let prod = &self.0 * self.0.adjoint();
        (prod - DMatrix::identity(self.dim(), self.dim()))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn commutator(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0 - &other.0 * &self.0)
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(())
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix{}", self.0)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}

/// On-disk matrix layout: `{"dim": m, "re": [[..]], "im": [[..]]}`, row-major.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixFile {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl TryFrom<MatrixFile> for ComplexMatrix {
    type Error = Error;

    fn try_from(file: MatrixFile) -> Result<Self> {
        let dim = file.dim;
        if dim == 0 {
            return Err(Error::NotSquare { rows: 0, cols: 0 });
        }
        let check_rows = |rows: &Vec<Vec<f64>>| -> Result<()> {
            if rows.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: rows.len(),
                });
            }
            for row in rows {
                if row.len() != dim {
                    return Err(Error::NotSquare {
                        rows: dim,
                        cols: row.len(),
                    });
                }
            }
            Ok(())
        };
        check_rows(&file.re)?;
        check_rows(&file.im)?;
        let m = DMatrix::from_fn(dim, dim, |r, c| {
            Complex64::new(file.re[r][c], file.im[r][c])
        });
        Self::new(m)
    }
}

impl From<ComplexMatrix> for MatrixFile {
    fn from(m: ComplexMatrix) -> Self {
        let dim = m.dim();
        let rows = |f: fn(&Complex64) -> f64| -> Vec<Vec<f64>> {
            (0..dim)
                .map(|r| (0..dim).map(|c| f(&m.0[(r, c)])).collect())
                .collect()
        };
        MatrixFile {
            dim,
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
    }
}

/// Traceless skew-hermitian matrix, i.e. an element of `su(m)`.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexMatrix", into = "ComplexMatrix")]
pub struct SuElement(ComplexMatrix);

impl SuElement {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        let (skew, trace) = su_defect(&mat);
        if skew > SU_TOL || trace > SU_TOL {
            return Err(Error::NotSu {
                dim: mat.dim(),
                skew,
                trace,
            });
        }
        Ok(Self(mat))
    }

    pub fn zero(dim: usize) -> Self {
        Self(ComplexMatrix::zeros(dim))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    /// Real-linear combination `a·self + b·other`; stays in `su(m)`.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Self {
        Self(&self.0.scale(a) + &other.0.scale(b))
    }

    /// Lie bracket `[self, other]`.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.0.check_same_dim(&other.0)?;
        Self::new(self.0.commutator(&other.0))
    }

    /// Conjugation by a unitary `A`; the result is again in `su(m)` up to rounding.
    pub fn conjugate_by(&self, a: &ComplexMatrix) -> Result<Self> {
        let mat = conjugate(a, &self.0)?;
        Ok(Self(project_su(&mat)))
    }

    /// Entrywise complex conjugate; `su(m)` is closed under it.
    pub fn conj(&self) -> Self {
        Self(self.0.conj())
    }
}

impl fmt::Debug for SuElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SuElement{}", self.0.as_matrix())
    }
}

impl From<SuElement> for ComplexMatrix {
    fn from(s: SuElement) -> Self {
        s.0
    }
}

impl TryFrom<ComplexMatrix> for SuElement {
    type Error = Error;
    fn try_from(m: ComplexMatrix) -> Result<Self> {
        Self::new(m)
    }
}

/// `(‖M + Mᴴ‖_max, |tr M|)`
pub fn su_defect(m: &ComplexMatrix) -> (f64, f64) {
    let skew = (m.as_matrix() + m.as_matrix().adjoint())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    (skew, m.trace().norm())
}

/// Orthogonal projection onto `su(m)`: skew-hermitian part minus its trace.
pub fn project_su(m: &ComplexMatrix) -> ComplexMatrix {
    let dim = m.dim();
    let skew = (m.as_matrix() - m.as_matrix().adjoint()) * Complex64::new(0.5, 0.0);
    let shift = skew.trace() / dim as f64;
    ComplexMatrix(skew - DMatrix::identity(dim, dim) * shift)
}

/// Real basis of `su(m)` (dimension m² − 1): `E_ab − E_ba`, `i(E_ab + E_ba)` for
/// a < b, and `i(E_kk − E_{k+1,k+1})`.
pub fn su_basis(dim: usize) -> Vec<SuElement> {
    let mut basis = Vec::with_capacity(dim * dim - 1);
    for a in 0..dim {
        for b in (a + 1)..dim {
            let mut re = DMatrix::zeros(dim, dim);
            re[(a, b)] = ONE;
            re[(b, a)] = -ONE;
            basis.push(SuElement(ComplexMatrix(re)));
            let mut im = DMatrix::zeros(dim, dim);
            im[(a, b)] = I;
            im[(b, a)] = I;
            basis.push(SuElement(ComplexMatrix(im)));
        }
    }
    for k in 0..dim.saturating_sub(1) {
        let mut d = DMatrix::zeros(dim, dim);
        d[(k, k)] = I;
        d[(k + 1, k + 1)] = -I;
        basis.push(SuElement(ComplexMatrix(d)));
    }
    basis
}

/// Monic characteristic polynomial `λ^m + c_{m−1}λ^{m−1} + … + c_0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharPoly {
    /// `c_0, …, c_m` with `c_m = 1`.
    pub coefficients: Vec<Complex64>,
}

impl CharPoly {
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Coefficient of `λ^k`.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coefficients[k]
    }

    pub fn eval(&self, lambda: Complex64) -> Complex64 {
        self.coefficients
            .iter()
            .rev()
            .fold(ZERO, |acc, &c| acc * lambda + c)
    }

    /// Largest coefficient-wise distance; `∞` for different degrees.
    pub fn max_distance(&self, other: &Self) -> f64 {
        if self.degree() != other.degree() {
            return f64::INFINITY;
        }
        self.coefficients
            .iter()
            .zip(&other.coefficients)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Faddeev–LeVerrier recursion.
///
/// `N_0 = I`, `c_{m−k} = −tr(M N_{k−1}) / k`, `N_k = M N_{k−1} + c_{m−k} I`.
pub fn char_poly(m: &ComplexMatrix) -> CharPoly {
    let dim = m.dim();
    let a = m.as_matrix();
    let id = DMatrix::<Complex64>::identity(dim, dim);
    let mut coefficients = vec![ZERO; dim + 1];
    coefficients[dim] = ONE;
    let mut n = id.clone();
    for k in 1..=dim {
        let an = a * &n;
        let c = -an.trace() / k as f64;
        coefficients[dim - k] = c;
        n = an + &id * c;
    }
    CharPoly { coefficients }
}

/// Eigenvalues with multiplicity, sorted by `(imaginary, real)`.
pub fn eigenvalue_multiset(m: &ComplexMatrix) -> Result<Vec<Complex64>> {
    let dim = m.dim();
    let schur =
        Schur::try_new(m.as_matrix().clone(), SCHUR_EPS, SCHUR_MAX_ITER).ok_or_else(|| {
            Error::EigenNoConvergence {
                dim,
                entries: format!("{:?}", m.as_matrix().as_slice()),
            }
        })?;
    let (_, t) = schur.unpack();
    let scale = m.max_abs().max(f64::MIN_POSITIVE);
    let mut eig = Vec::with_capacity(dim);
    let mut k = 0;
    while k < dim {
        if k + 1 < dim && t[(k + 1, k)].norm() > 1e-14 * scale {
            // Unreduced 2x2 block left by the QR sweep.
            let (a, b, c, d) = (t[(k, k)], t[(k, k + 1)], t[(k + 1, k)], t[(k + 1, k + 1)]);
            let half_tr = (a + d) * 0.5;
            let disc = ((a - d) * 0.5 * ((a - d) * 0.5) + b * c).sqrt();
            eig.push(half_tr + disc);
            eig.push(half_tr - disc);
            k += 2;
        } else {
            eig.push(t[(k, k)]);
            k += 1;
        }
    }
    sort_spectrum(&mut eig);
    Ok(eig)
}

pub(crate) fn sort_spectrum(eig: &mut [Complex64]) {
    eig.sort_by(|a, b| a.im.total_cmp(&b.im).then(a.re.total_cmp(&b.re)));
}

/// Largest distance between two sorted multisets, `∞` on length mismatch.
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Real dimension of `{X ∈ su(m) : [X, G] = 0 for every generator G}`.
///
/// Nullity of the real-linear map `X ↦ ([X, G_1], …, [X, G_k])` over
/// [`su_basis`]; singular values below `RANK_TOL·σ_max` count as zero.
pub fn commutant_dimension(generators: &[&ComplexMatrix]) -> Result<usize> {
    let Some(first) = generators.first() else {
        return Ok(0);
    };
    let dim = first.dim();
    for g in generators {
        first.check_same_dim(g)?;
    }
    let basis = su_basis(dim);
    let rows = 2 * dim * dim * generators.len();
    let mut system = DMatrix::<f64>::zeros(rows, basis.len());
    for (col, x) in basis.iter().enumerate() {
        let mut row = 0;
        for g in generators {
            let br = x.matrix().commutator(g);
            for z in br.as_matrix().iter() {
                system[(row, col)] = z.re;
                system[(row + 1, col)] = z.im;
                row += 2;
            }
        }
    }
    let sv = system.singular_values();
    let sigma_max = sv.iter().cloned().fold(0.0, f64::max);
    if sigma_max == 0.0 {
        return Ok(basis.len());
    }
    let rank = sv.iter().filter(|&&s| s > RANK_TOL * sigma_max).count();
    Ok(basis.len() - rank)
}

/// `A·M·A⁻¹`; unitary `A` is inverted by its adjoint.
pub fn conjugate(a: &ComplexMatrix, m: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.check_same_dim(m)?;
    let inv = if a.unitarity_defect() <= 1e-12 {
        a.as_matrix().adjoint()
    } else {
        a.as_matrix().clone().try_inverse().ok_or(Error::Singular)?
    };
    let scale = a.max_abs();
    if inv.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) || scale == 0.0 {
        return Err(Error::Singular);
    }
    ComplexMatrix::new(a.as_matrix() * m.as_matrix() * inv)
}

/// Rescales a unitary matrix by a global phase so that its determinant is 1.
pub fn normalize_determinant(a: &ComplexMatrix) -> ComplexMatrix {
    let det = a.determinant();
    let phase = Complex64::from_polar(1.0, -det.arg() / a.dim() as f64);
    a.scale_complex(phase)
}
