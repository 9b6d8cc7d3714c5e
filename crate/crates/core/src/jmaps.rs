//! Linear maps `j: z ≅ R² → su(m)` and the isospectral / equivalent / generic
//! predicates on pairs of them.

use std::f64::consts::PI;
use std::path::Path;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mat::{
    self, commutant_dimension, eigenvalue_multiset, multiset_distance, ComplexMatrix, SuElement, I,
    ZERO,
};

/// Tolerance for matching eigenvalue multisets of a pair.
pub const PAIR_TOL: f64 = 1e-9;
/// Minimal eigenvalue gap for [`conjugator_for`].
pub const GAP_TOL: f64 = 1e-8;
/// Default number of unit half-circle samples in [`is_isospectral_pair`].
pub const DEFAULT_Z_SAMPLES: usize = 64;

/// An element `Z = z1·Z1 + z2·Z2` of the torus Lie algebra.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZVector {
    pub z1: f64,
    pub z2: f64,
}

impl ZVector {
    pub const Z1: Self = Self { z1: 1.0, z2: 0.0 };
    pub const Z2: Self = Self { z1: 0.0, z2: 1.0 };

    pub fn new(z1: f64, z2: f64) -> Self {
        Self { z1, z2 }
    }

    pub fn unit(theta: f64) -> Self {
        Self::new(theta.cos(), theta.sin())
    }
}

/// Integer weight `μ ∈ L*` in the dual basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DualWeight {
    pub mu1: i64,
    pub mu2: i64,
}

impl DualWeight {
    pub fn new(mu1: i64, mu2: i64) -> Self {
        Self { mu1, mu2 }
    }

    /// The `Z` paired with `μ` through the basis `{Z1, Z2}` and its dual.
    pub fn to_z(self) -> ZVector {
        ZVector::new(self.mu1 as f64, self.mu2 as f64)
    }

    /// `μ(v1·Z1 + v2·Z2)`
    pub fn apply(self, v: (f64, f64)) -> f64 {
        self.mu1 as f64 * v.0 + self.mu2 as f64 * v.1
    }
}

/// The ordered pair `(j_{Z1}, j_{Z2})`.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "JMapFile", into = "JMapFile")]
pub struct JMapPair {
    z1: SuElement,
    z2: SuElement,
}

impl std::fmt::Debug for JMapPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("JMapPair")
            .field("jZ1", &self.z1)
            .field("jZ2", &self.z2)
            .finish()
    }
}

impl JMapPair {
    pub fn new(z1: SuElement, z2: SuElement) -> Result<Self> {
        if z1.dim() != z2.dim() {
            return Err(Error::DimensionMismatch {
                expected: z1.dim(),
                got: z2.dim(),
            });
        }
        Ok(Self { z1, z2 })
    }

    pub fn zero(m: usize) -> Self {
        Self {
            z1: SuElement::zero(m),
            z2: SuElement::zero(m),
        }
    }

    pub fn m(&self) -> usize {
        self.z1.dim()
    }

    pub fn j_z1(&self) -> &SuElement {
        &self.z1
    }

    pub fn j_z2(&self) -> &SuElement {
        &self.z2
    }

    /// Component `k ∈ {1, 2}`.
    pub fn component(&self, k: usize) -> &SuElement {
        match k {
            1 => &self.z1,
            2 => &self.z2,
            _ => panic!("torus Lie algebra has components 1 and 2, got {k}"),
        }
    }

    /// `j_Z = z1·j_{Z1} + z2·j_{Z2}`
    pub fn eval(&self, z: ZVector) -> SuElement {
        self.z1.combine(z.z1, &self.z2, z.z2)
    }

    /// Componentwise `A j A⁻¹`.
    pub fn conjugate_by(&self, a: &ComplexMatrix) -> Result<Self> {
        Self::new(self.z1.conjugate_by(a)?, self.z2.conjugate_by(a)?)
    }

    /// Componentwise complex conjugation (the map `Q j Q`).
    pub fn conj(&self) -> Self {
        Self {
            z1: self.z1.conj(),
            z2: self.z2.conj(),
        }
    }

    /// `j ∘ Ψ`
    pub fn compose(&self, psi: SignedPermutation) -> Self {
        Self {
            z1: self.eval(psi.apply(ZVector::Z1)),
            z2: self.eval(psi.apply(ZVector::Z2)),
        }
    }

    pub fn read_json(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| Error::Json {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).expect("pair serializes");
        std::fs::write(path, text + "\n").map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })
    }
}

/// `{"m": 3, "jZ1": <matrix>, "jZ2": <matrix>}`
#[derive(Serialize, Deserialize)]
struct JMapFile {
    m: usize,
    #[serde(rename = "jZ1")]
    j_z1: ComplexMatrix,
    #[serde(rename = "jZ2")]
    j_z2: ComplexMatrix,
}

impl TryFrom<JMapFile> for JMapPair {
    type Error = Error;
    fn try_from(f: JMapFile) -> Result<Self> {
        for mat in [&f.j_z1, &f.j_z2] {
            if mat.dim() != f.m {
                return Err(Error::DimensionMismatch {
                    expected: f.m,
                    got: mat.dim(),
                });
            }
        }
        JMapPair::new(SuElement::new(f.j_z1)?, SuElement::new(f.j_z2)?)
    }
}

impl From<JMapPair> for JMapFile {
    fn from(j: JMapPair) -> Self {
        JMapFile {
            m: j.m(),
            j_z1: j.z1.into(),
            j_z2: j.z2.into(),
        }
    }
}

/// Automorphism of `z` preserving `{±Z1, ±Z2}`; column `k` is the image of `Z_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedPermutation([[i8; 2]; 2]);

impl SignedPermutation {
    pub const IDENTITY: Self = Self([[1, 0], [0, 1]]);

    pub fn new(m: [[i8; 2]; 2]) -> Option<Self> {
        let entries_ok = m.iter().flatten().all(|e| (-1..=1).contains(e));
        let rows_ok = m.iter().all(|r| r.iter().filter(|e| **e != 0).count() == 1);
        let cols_ok = (0..2).all(|c| m.iter().filter(|r| r[c] != 0).count() == 1);
        let det = m[0][0] as i32 * m[1][1] as i32 - m[0][1] as i32 * m[1][0] as i32;
        (entries_ok && rows_ok && cols_ok && det.abs() == 1).then_some(Self(m))
    }

    /// All eight elements of the group.
    pub fn all() -> Vec<Self> {
        let mut out = Vec::with_capacity(8);
        for (a, b) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
            out.push(Self([[a, 0], [0, b]]));
            out.push(Self([[0, a], [b, 0]]));
        }
        out
    }

    pub fn matrix(&self) -> [[i8; 2]; 2] {
        self.0
    }

    pub fn apply(&self, z: ZVector) -> ZVector {
        let m = self.0;
        ZVector::new(
            m[0][0] as f64 * z.z1 + m[0][1] as f64 * z.z2,
            m[1][0] as f64 * z.z1 + m[1][1] as f64 * z.z2,
        )
    }
}

/// The explicit isospectral family on `su(3)`.
///
/// `j_{Z2} = diag(4i, i, −5i)` and `j_{Z1}(t)` is real skew-symmetric with
/// upper entries `(sin t, √3 cos t, √2 sin t)` at `(1,2), (1,3), (2,3)`.
pub fn schueth_family(t: f64) -> JMapPair {
    let (s, c) = t.sin_cos();
    let (u, w, v) = (s, 3f64.sqrt() * c, 2f64.sqrt() * s);
    let r = |x: f64| Complex64::new(x, 0.0);
    let z1 = ComplexMatrix::from_row_slice(
        3,
        &[ZERO, r(u), r(w), r(-u), ZERO, r(v), r(-w), r(-v), ZERO],
    )
    .expect("finite entries");
    let z2 = ComplexMatrix::from_diagonal(&[I * 4.0, I, I * -5.0]);
    JMapPair::new(
        SuElement::new(z1).expect("real skew-symmetric"),
        SuElement::new(z2).expect("traceless imaginary diagonal"),
    )
    .expect("both 3x3")
}

/// The family block-embedded in `su(m)`, `m ≥ 3`, plus fixed diagonal
/// shifts of the form `i·diag(c, c, c, d_4, …, d_m)`. The shifts commute
/// with every `diag(A, 1, …)`, so isospectrality is kept, and they separate
/// the eigenvalues the zero padding would otherwise repeat. Not generic for
/// `m > 3`.
pub fn padded_family(t: f64, m: usize) -> JMapPair {
    assert!(m >= 3, "padded family needs m >= 3");
    let base = schueth_family(t);
    if m == 3 {
        return base;
    }
    let extra = m - 3;
    let shift = |c: f64, spread: f64| {
        let mid = (extra as f64 - 1.0) / 2.0;
        let mut d = vec![c; 3];
        d.extend((0..extra).map(|k| -3.0 * c / extra as f64 + spread * (k as f64 - mid)));
        d
    };
    let embed = |block: &SuElement, diag: Vec<f64>| {
        let mut mat = DMatrix::from_fn(m, m, |r, c| {
            if r < 3 && c < 3 {
                block.matrix().get(r, c)
            } else {
                ZERO
            }
        });
        for (k, d) in diag.into_iter().enumerate() {
            mat[(k, k)] += I * d;
        }
        SuElement::new(ComplexMatrix::new(mat).expect("finite")).expect("traceless skew")
    };
    JMapPair::new(
        embed(base.j_z1(), shift(0.5, 0.37)),
        embed(base.j_z2(), shift(0.25, -0.29)),
    )
    .expect("same dimension")
}

/// Outcome of a sampled isospectrality test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsospectralReport {
    pub isospectral: bool,
    pub max_residual: f64,
    pub samples: usize,
}

/// Compares spectra of `j(Z)` and `j2(Z)` at `Z = (cos θ_k, sin θ_k)`,
/// `θ_k = kπ/samples`. Homogeneity makes the half circle sufficient.
pub fn is_isospectral_pair(
    j: &JMapPair,
    j2: &JMapPair,
    samples: usize,
) -> Result<IsospectralReport> {
    if j.m() != j2.m() {
        return Err(Error::DimensionMismatch {
            expected: j.m(),
            got: j2.m(),
        });
    }
    let mut worst = 0.0f64;
    for k in 0..samples {
        let z = ZVector::unit(PI * k as f64 / samples as f64);
        let a = eigenvalue_multiset(j.eval(z).matrix())?;
        let b = eigenvalue_multiset(j2.eval(z).matrix())?;
        worst = worst.max(multiset_distance(&a, &b));
    }
    Ok(IsospectralReport {
        isospectral: worst <= PAIR_TOL,
        max_residual: worst,
        samples,
    })
}

/// `tr((j_{Z1}² + j_{Z2}²)²)`. Real for skew-hermitian input.
pub fn equivalence_obstruction(j: &JMapPair) -> f64 {
    let a = j.z1.matrix();
    let b = j.z2.matrix();
    let s = &(a * a) + &(b * b);
    let tr = (&s * &s).trace();
    debug_assert!(
        tr.im.abs() <= 1e-12 * tr.re.abs().max(1.0),
        "trace of a hermitian square has imaginary part {}",
        tr.im
    );
    tr.re
}

pub fn commutant_dim(j: &JMapPair) -> usize {
    commutant_dimension(&[j.z1.matrix(), j.z2.matrix()]).expect("components share a dimension")
}

/// No nonzero element of `su(m)` commutes with both components.
pub fn is_generic(j: &JMapPair) -> bool {
    commutant_dim(j) == 0
}

/// Eigen-decomposition of a skew-hermitian `M = U diag(iλ) Uᴴ`, eigenvalues ascending.
fn skew_hermitian_eigen(m: &ComplexMatrix) -> (Vec<f64>, DMatrix<Complex64>) {
    // −iM is hermitian with eigenvalues λ.
    let h = m.as_matrix() * (-I);
    let h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..m.dim()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(m.dim(), m.dim(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// A special-unitary `A_Z` with `j2(Z) = A_Z j(Z) A_Z⁻¹`.
///
/// Requires simple spectrum; eigenbases are matched by sorted eigenvalue and
/// the determinant is fixed to 1 by a global phase.
pub fn conjugator_for(j: &JMapPair, j2: &JMapPair, z: ZVector) -> Result<ComplexMatrix> {
    if j.m() != j2.m() {
        return Err(Error::DimensionMismatch {
            expected: j.m(),
            got: j2.m(),
        });
    }
    let jz = j.eval(z);
    let j2z = j2.eval(z);
    let (ev1, u1) = skew_hermitian_eigen(jz.matrix());
    let (ev2, u2) = skew_hermitian_eigen(j2z.matrix());
    let mismatch = ev1
        .iter()
        .zip(&ev2)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if mismatch > PAIR_TOL * (1.0 + jz.matrix().max_abs()) {
        return Err(Error::SpectrumMismatch { distance: mismatch });
    }
    let gap = ev1
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    if gap <= GAP_TOL {
        return Err(Error::DegenerateSpectrum { gap, tol: GAP_TOL });
    }
    let a = ComplexMatrix::new(&u2 * u1.adjoint())?;
    Ok(mat::normalize_determinant(&a))
}

/// Cheap necessary conditions for equivalence.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceProfile {
    pub obstruction: f64,
    /// For each `Ψ` in [`SignedPermutation::all`] order: spectra of
    /// `j_{Ψ(Z1)}` and `j_{Ψ(Z2)}`.
    pub spectra: Vec<(SignedPermutation, Vec<Complex64>, Vec<Complex64>)>,
}

impl EquivalenceProfile {
    /// Entry for `Ψ = identity`.
    pub fn identity_entry(&self) -> (&[Complex64], &[Complex64]) {
        let (_, a, b) = self
            .spectra
            .iter()
            .find(|(p, _, _)| *p == SignedPermutation::IDENTITY)
            .expect("identity is in the group");
        (a, b)
    }

    /// Entrywise comparison (same `Ψ` order); returns the worst distance.
    pub fn distance(&self, other: &Self) -> f64 {
        let mut worst = (self.obstruction - other.obstruction).abs();
        for ((_, a1, a2), (_, b1, b2)) in self.spectra.iter().zip(&other.spectra) {
            worst = worst
                .max(multiset_distance(a1, b1))
                .max(multiset_distance(a2, b2));
        }
        worst
    }

    /// Whether `other` could be equivalent to `self`: obstructions agree and the
    /// identity spectra of `other` appear among `self`'s `Ψ`-entries, possibly
    /// complex-conjugated.
    pub fn compatible_with(&self, other: &Self, tol: f64) -> bool {
        if (self.obstruction - other.obstruction).abs() > tol * (1.0 + self.obstruction.abs()) {
            return false;
        }
        let (o1, o2) = other.identity_entry();
        let conj = |v: &[Complex64]| {
            let mut c: Vec<Complex64> = v.iter().map(|z| z.conj()).collect();
            mat::sort_spectrum(&mut c);
            c
        };
        let (c1, c2) = (conj(o1), conj(o2));
        self.spectra.iter().any(|(_, a, b)| {
            let direct = multiset_distance(a, o1) <= tol && multiset_distance(b, o2) <= tol;
            let conjugated = multiset_distance(a, &c1) <= tol && multiset_distance(b, &c2) <= tol;
            direct || conjugated
        })
    }
}

pub fn equivalence_invariant_profile(j: &JMapPair) -> Result<EquivalenceProfile> {
    let mut spectra = Vec::with_capacity(8);
    for psi in SignedPermutation::all() {
        let a = eigenvalue_multiset(j.eval(psi.apply(ZVector::Z1)).matrix())?;
        let b = eigenvalue_multiset(j.eval(psi.apply(ZVector::Z2)).matrix())?;
        spectra.push((psi, a, b));
    }
    Ok(EquivalenceProfile {
        obstruction: equivalence_obstruction(j),
        spectra,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::char_poly;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn family_components_are_su3() {
        for t in [0.0, 0.3, PI / 2.0, 2.0] {
            let j = schueth_family(t);
            assert_eq!(j.m(), 3);
            let (skew, tr) = mat::su_defect(j.j_z1().matrix());
            assert!(skew == 0.0 && tr == 0.0);
        }
    }

    #[test]
    fn j_z1_spectrum_is_zero_and_plus_minus_i_sqrt3() {
        let r3 = 3f64.sqrt();
        for t in [0.0, 0.4, 1.3, PI / 2.0] {
            let eig = eigenvalue_multiset(schueth_family(t).j_z1().matrix()).unwrap();
            let d = multiset_distance(&eig, &[c(0.0, -r3), c(0.0, 0.0), c(0.0, r3)]);
            assert!(d < 1e-12, "t={t}: {eig:?}");
        }
    }

    #[test]
    fn obstruction_endpoints() {
        assert!((equivalence_obstruction(&schueth_family(0.0)) - 1146.0).abs() < 1e-9);
        assert!((equivalence_obstruction(&schueth_family(PI / 2.0)) - 1038.0).abs() < 1e-9);
        assert_eq!(equivalence_obstruction(&JMapPair::zero(3)), 0.0);
    }

    #[test]
    fn genericity_examples() {
        assert!(is_generic(&schueth_family(PI / 3.0)));
        assert!(!is_generic(&schueth_family(0.0)));
        assert!(!is_generic(&JMapPair::zero(3)));
        assert_eq!(commutant_dim(&schueth_family(PI / 2.0)), 0);
    }

    #[test]
    fn commuting_element_at_t_zero_by_direct_bracket() {
        let j = schueth_family(0.0);
        let x = SuElement::new(ComplexMatrix::from_diagonal(&[I, I * -2.0, I])).unwrap();
        // At t = 0 only the (1,3) entry of j_{Z1} survives, and x_11 = x_33.
        assert!(x.matrix().commutator(j.j_z1().matrix()).max_abs() < 1e-15);
        assert!(x.matrix().commutator(j.j_z2().matrix()).max_abs() < 1e-15);
        assert!(commutant_dim(&j) >= 1);
    }

    #[test]
    fn self_pair_is_isospectral_with_zero_residual() {
        let j = schueth_family(0.7);
        let rep = is_isospectral_pair(&j, &j, DEFAULT_Z_SAMPLES).unwrap();
        assert!(rep.isospectral);
        assert_eq!(rep.max_residual, 0.0);
    }

    #[test]
    fn modified_diagonal_breaks_isospectrality() {
        // diag(5i, 0, −5i) has char poly λ³ + 25λ vs λ³ + 21λ − 20i at Z = (0,1).
        let j = schueth_family(PI / 2.0);
        let d = SuElement::new(ComplexMatrix::from_diagonal(&[
            I * 5.0,
            c(0.0, 0.0),
            I * -5.0,
        ]))
        .unwrap();
        let j2 = JMapPair::new(j.j_z1().clone(), d).unwrap();
        let p1 = char_poly(j.j_z2().matrix());
        let p2 = char_poly(j2.j_z2().matrix());
        assert!((p1.coeff(1) - c(21.0, 0.0)).norm() < 1e-12);
        assert!((p2.coeff(1) - c(25.0, 0.0)).norm() < 1e-12);
        let rep = is_isospectral_pair(&j, &j2, DEFAULT_Z_SAMPLES).unwrap();
        assert!(!rep.isospectral);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let r = is_isospectral_pair(&JMapPair::zero(3), &JMapPair::zero(4), 8);
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn conjugator_on_shared_diagonal() {
        let (j, j2) = (schueth_family(0.4), schueth_family(1.2));
        let a = conjugator_for(&j, &j2, ZVector::Z2).unwrap();
        let img = mat::conjugate(&a, j.eval(ZVector::Z2).matrix()).unwrap();
        assert!((&img - j2.eval(ZVector::Z2).matrix()).max_abs() <= 1e-8);
    }

    #[test]
    fn conjugator_between_slices_along_z1() {
        let (j, j2) = (schueth_family(0.4), schueth_family(1.2));
        let a = conjugator_for(&j, &j2, ZVector::Z1).unwrap();
        assert!(a.unitarity_defect() <= 1e-10);
        assert!((a.determinant() - c(1.0, 0.0)).norm() <= 1e-10);
        let img = mat::conjugate(&a, j.eval(ZVector::Z1).matrix()).unwrap();
        assert!((&img - j2.eval(ZVector::Z1).matrix()).max_abs() <= 1e-8);
    }

    #[test]
    fn conjugator_self_commutes() {
        let j = schueth_family(0.9);
        let z = ZVector::new(0.3, -0.8);
        let a = conjugator_for(&j, &j, z).unwrap();
        let img = mat::conjugate(&a, j.eval(z).matrix()).unwrap();
        assert!((&img - j.eval(z).matrix()).max_abs() <= 1e-10);
    }

    #[test]
    fn conjugator_rejects_degenerate_and_mismatched() {
        let z = JMapPair::zero(3);
        assert!(matches!(
            conjugator_for(&z, &z, ZVector::Z1),
            Err(Error::DegenerateSpectrum { .. })
        ));
        let j = schueth_family(0.5);
        assert!(matches!(
            conjugator_for(&j, &z, ZVector::Z2),
            Err(Error::SpectrumMismatch { .. })
        ));
    }

    #[test]
    fn signed_permutations() {
        let all = SignedPermutation::all();
        assert_eq!(all.len(), 8);
        for p in &all {
            assert_eq!(SignedPermutation::new(p.matrix()), Some(*p));
        }
        assert!(SignedPermutation::new([[1, 1], [0, 1]]).is_none());
        assert!(SignedPermutation::new([[2, 0], [0, 1]]).is_none());
        let swap = SignedPermutation::new([[0, 1], [1, 0]]).unwrap();
        assert_eq!(swap.apply(ZVector::Z1), ZVector::Z2);
    }

    #[test]
    fn profile_identity_entry_reproduces_components() {
        let j = schueth_family(0.6);
        let prof = equivalence_invariant_profile(&j).unwrap();
        let (a, b) = prof.identity_entry();
        assert_eq!(
            a,
            eigenvalue_multiset(j.j_z1().matrix()).unwrap().as_slice()
        );
        assert_eq!(
            b,
            eigenvalue_multiset(j.j_z2().matrix()).unwrap().as_slice()
        );
        assert_eq!(prof.obstruction, equivalence_obstruction(&j));
    }

    #[test]
    fn profiles_separate_family_members_with_different_cos_squared() {
        let p = equivalence_invariant_profile(&schueth_family(PI / 2.0)).unwrap();
        let q = equivalence_invariant_profile(&schueth_family(PI / 4.0)).unwrap();
        assert!(!p.compatible_with(&q, 1e-9));
        assert!(p.compatible_with(&p, 1e-9));
        // t and π − t share cos² t, so the cheap profile cannot tell them apart.
        let r = equivalence_invariant_profile(&schueth_family(PI - 0.7)).unwrap();
        let s = equivalence_invariant_profile(&schueth_family(0.7)).unwrap();
        assert!(r.compatible_with(&s, 1e-9));
    }

    #[test]
    fn pair_json_round_trip() {
        let j = schueth_family(0.25);
        let s = serde_json::to_string(&j).unwrap();
        assert!(s.contains("\"jZ1\"") && s.contains("\"m\":3"));
        let back: JMapPair = serde_json::from_str(&s).unwrap();
        assert_eq!(back, j);
    }

    #[test]
    fn pair_json_rejects_non_su_component() {
        let s = r#"{"m": 2,
            "jZ1": {"dim": 2, "re": [[1,0],[0,1]], "im": [[0,0],[0,0]]},
            "jZ2": {"dim": 2, "re": [[0,0],[0,0]], "im": [[0,0],[0,0]]}}"#;
        assert!(serde_json::from_str::<JMapPair>(s).is_err());
        let wrong_m = r#"{"m": 3,
            "jZ1": {"dim": 2, "re": [[0,0],[0,0]], "im": [[0,0],[0,0]]},
            "jZ2": {"dim": 2, "re": [[0,0],[0,0]], "im": [[0,0],[0,0]]}}"#;
        assert!(serde_json::from_str::<JMapPair>(wrong_m).is_err());
    }
}
