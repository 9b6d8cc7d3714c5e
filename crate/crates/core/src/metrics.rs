//! The deformed metrics `g_λ` (sphere, real projective quotient) and `g_η̄`
//! (`CP^n`), their Gram matrices, and the orbit geometry of the torus action.
//!
//! `CP^n` tangent vectors are represented by their `S¹`-invariant
//! Hopf-horizontal lifts; the quotient-level objects are never built.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{
    eta_form, lambda_form, norm_sqr, rp_lambda, rp_z_star, z_star, z_star_hopf_horizontal, RpPoint,
    SpherePoint, TangentVector, ZValuedCovector, GEOM_TOL,
};
use crate::jmaps::{conjugator_for, DualWeight, JMapPair, ZVector};
use crate::mat::{ComplexMatrix, I, ONE, ZERO};
use crate::sampling;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Manifold {
    /// `S^{2n+1}` with `g_λ`.
    Sphere,
    /// `CP^n` with `g_η̄`.
    CPn,
    /// `S^{2m+1}` with the antipodally invariant `g_λ`, covering `RP^{2m+1}`.
    RPodd,
}

/// Which metric to evaluate, for which `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSpec {
    manifold: Manifold,
    j: JMapPair,
    dim: usize,
}

impl MetricSpec {
    /// `(S^{2n+1}, g_λ)`; needs `j.m() = n − 1`, `n ≥ 4`.
    pub fn sphere(j: JMapPair, n: usize) -> Result<Self> {
        Self::new(Manifold::Sphere, j, n)
    }

    /// `(CP^n, g_η̄)`; needs `j.m() = n − 1`, `n ≥ 4`.
    pub fn cpn(j: JMapPair, n: usize) -> Result<Self> {
        Self::new(Manifold::CPn, j, n)
    }

    /// `(S^{2m+1}, g_λ)` over `RP^{2m+1}`; needs `j.m() = m ≥ 3`.
    pub fn rp(j: JMapPair, m: usize) -> Result<Self> {
        Self::new(Manifold::RPodd, j, m)
    }

    pub fn new(manifold: Manifold, j: JMapPair, dim: usize) -> Result<Self> {
        let ok = match manifold {
            Manifold::Sphere | Manifold::CPn => dim >= 4 && j.m() == dim - 1,
            Manifold::RPodd => dim >= 3 && j.m() == dim,
        };
        if !ok {
            return Err(Error::Config(format!(
                "{manifold:?} with dimension parameter {dim} needs a compatible j (got su({}))",
                j.m()
            )));
        }
        Ok(Self { manifold, j, dim })
    }

    pub fn manifold(&self) -> Manifold {
        self.manifold
    }

    pub fn j(&self) -> &JMapPair {
        &self.j
    }

    /// `n` for sphere and `CP^n`, `m` for the real projective case.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of complex coordinates of the ambient `C^N`.
    pub fn ambient_len(&self) -> usize {
        self.dim + 1
    }

    /// Same manifold and dimension with a different `j`.
    pub fn with_j(&self, j: JMapPair) -> Result<Self> {
        Self::new(self.manifold, j, self.dim)
    }

    fn check_point(&self, p: &SpherePoint) -> Result<()> {
        if p.coords().len() != self.ambient_len() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_len(),
                got: p.coords().len(),
            });
        }
        Ok(())
    }

    fn check_vector(&self, p: &SpherePoint, x: &TangentVector) -> Result<()> {
        let t = TangentVector::new(p, x.comps().to_vec())?;
        if self.manifold == Manifold::CPn {
            let v = t.dot(&p.fiber());
            if v.abs() > GEOM_TOL * (1.0 + t.norm_sqr().sqrt()) {
                return Err(Error::NotTangent(v));
            }
        }
        Ok(())
    }

    /// The two orbit directions used by the deformation: `Z1*, Z2*` on the
    /// spheres, `Z_{h,1}*, Z_{h,2}*` on `CP^n`.
    pub fn orbit_frame(&self, p: &SpherePoint) -> [TangentVector; 2] {
        match self.manifold {
            Manifold::Sphere => [z_star(ZVector::Z1, p), z_star(ZVector::Z2, p)],
            Manifold::CPn => [z_star_hopf_horizontal(1, p), z_star_hopf_horizontal(2, p)],
            Manifold::RPodd => {
                let pt = rp_view(p);
                [rp_z_star(ZVector::Z1, &pt), rp_z_star(ZVector::Z2, &pt)]
            }
        }
    }

    /// The admissible form `λ` (or `η` on `CP^n`) at `p`.
    pub fn form(&self, p: &SpherePoint, x: &TangentVector) -> Result<ZValuedCovector> {
        match self.manifold {
            Manifold::Sphere => lambda_form(&self.j, p, x),
            Manifold::CPn => eta_form(&self.j, p, x),
            Manifold::RPodd => rp_lambda(&self.j, &rp_view(p), x),
        }
    }

    /// `X + λ¹(X) F1 + λ²(X) F2`.
    pub fn deform(&self, p: &SpherePoint, x: &TangentVector) -> Result<TangentVector> {
        self.deform_along(p, &self.orbit_frame(p), x)
    }

    fn deform_along(
        &self,
        p: &SpherePoint,
        [f1, f2]: &[TangentVector; 2],
        x: &TangentVector,
    ) -> Result<TangentVector> {
        let l = self.form(p, x)?;
        Ok(x.axpy(l.value1, f1).axpy(l.value2, f2))
    }

    /// `X − λ¹(X) F1 − λ²(X) F2`, the inverse of [`Self::deform`].
    pub fn undeform(&self, p: &SpherePoint, x: &TangentVector) -> Result<TangentVector> {
        let [f1, f2] = self.orbit_frame(p);
        let l = self.form(p, x)?;
        Ok(x.axpy(-l.value1, &f1).axpy(-l.value2, &f2))
    }
}

fn rp_view(p: &SpherePoint) -> RpPoint {
    RpPoint::from_coords(p.coords().to_vec()).expect("sphere point is unit")
}

/// `g(X, Y) = ⟨X + λ(X)*, Y + λ(Y)*⟩` on lifts.
pub fn metric_eval(
    spec: &MetricSpec,
    p: &SpherePoint,
    x: &TangentVector,
    y: &TangentVector,
) -> Result<f64> {
    spec.check_point(p)?;
    spec.check_vector(p, x)?;
    spec.check_vector(p, y)?;
    Ok(spec.deform(p, x)?.dot(&spec.deform(p, y)?))
}

/// Real symmetric Gram matrix of a frame.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix(DMatrix<f64>);

impl GramMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        let scale = m.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1.0);
        for r in 0..m.nrows() {
            for c in 0..r {
                if (m[(r, c)] - m[(c, r)]).abs() > 1e-12 * scale {
                    return Err(Error::Config(format!(
                        "Gram matrix not symmetric at ({r}, {c})"
                    )));
                }
            }
        }
        Ok(Self(m))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.0[(r, c)]
    }

    pub fn determinant(&self) -> f64 {
        self.0.determinant()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.0.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    pub fn condition_number(&self) -> f64 {
        let ev = self.eigenvalues();
        ev[ev.len() - 1].abs() / ev[0].abs()
    }

    pub fn is_positive_definite(&self, floor: f64) -> bool {
        self.min_eigenvalue() > floor
    }
}

/// Pairwise [`metric_eval`] over a frame.
pub fn gram(spec: &MetricSpec, p: &SpherePoint, frame: &[TangentVector]) -> Result<GramMatrix> {
    spec.check_point(p)?;
    let orbit = spec.orbit_frame(p);
    let deformed = frame
        .iter()
        .map(|x| {
            spec.check_vector(p, x)?;
            spec.deform_along(p, &orbit, x)
        })
        .collect::<Result<Vec<_>>>()?;
    GramMatrix::new(gram_of(&deformed))
}

/// Euclidean Gram matrix of raw vectors.
pub fn gram_of(frame: &[TangentVector]) -> DMatrix<f64> {
    let k = frame.len();
    let mut g = DMatrix::zeros(k, k);
    for a in 0..k {
        for b in a..k {
            let v = frame[a].dot(&frame[b]);
            g[(a, b)] = v;
            g[(b, a)] = v;
        }
    }
    g
}

/// Orthonormal (Euclidean) real basis of the tangent space the spec lives on:
/// `T_p S^{2N+1}` for the spheres, the Hopf-horizontal space for `CP^n`.
pub fn tangent_frame(spec: &MetricSpec, p: &SpherePoint) -> Vec<TangentVector> {
    let mut constraints = vec![TangentVector::from_components(p.coords().to_vec())];
    if spec.manifold == Manifold::CPn {
        constraints.push(p.fiber());
    }
    complement_basis(p.coords().len(), &constraints)
}

/// Orthonormal basis of the `g₀`-orthogonal complement of the orbit directions
/// inside [`tangent_frame`].
pub fn horizontal_frame(spec: &MetricSpec, p: &SpherePoint) -> Vec<TangentVector> {
    let mut constraints = vec![TangentVector::from_components(p.coords().to_vec())];
    if spec.manifold == Manifold::CPn {
        constraints.push(p.fiber());
    }
    constraints.extend(spec.orbit_frame(p));
    complement_basis(p.coords().len(), &constraints)
}

/// Gram–Schmidt of the real coordinate basis of `C^len` against `constraints`.
fn complement_basis(len: usize, constraints: &[TangentVector]) -> Vec<TangentVector> {
    let mut ortho: Vec<TangentVector> = Vec::new();
    for c in constraints {
        if let Some(v) = orthonormalize(c.clone(), &ortho) {
            ortho.push(v);
        }
    }
    let fixed = ortho.len();
    for k in 0..len {
        for unit in [ONE, I] {
            let mut e = vec![ZERO; len];
            e[k] = unit;
            if let Some(v) = orthonormalize(TangentVector::from_components(e), &ortho) {
                ortho.push(v);
            }
        }
    }
    ortho.split_off(fixed)
}

fn orthonormalize(mut v: TangentVector, basis: &[TangentVector]) -> Option<TangentVector> {
    for _ in 0..2 {
        for b in basis {
            v = v.axpy(-v.dot(b), b);
        }
    }
    let n = v.norm_sqr().sqrt();
    (n > 1e-8).then(|| v.scale(1.0 / n))
}

/// Squared area of the torus orbit through `[p]` in the round quotient metric:
/// `|r|²|s|²(1 − |r|² − |s|²)`.
pub fn orbit_area_sq(p: &SpherePoint) -> Result<f64> {
    let (r2, s2) = (p.r().norm_sqr(), p.s().norm_sqr());
    if !p.in_free_locus() {
        return Err(Error::DegenerateOrbit(format!(
            "|r|² = {r2:.3e}, |s|² = {s2:.3e}, |q|² = {:.3e}",
            p.q_norm_sqr()
        )));
    }
    Ok(r2 * s2 * (1.0 - r2 - s2))
}

/// Angle between the orbit fields on the shell `|r| = |s| = a`:
/// `arccos(−a²/(1 − a²))`.
pub fn orbit_angle(a: f64) -> Result<f64> {
    if !(a > 0.0 && a < std::f64::consts::FRAC_1_SQRT_2) {
        return Err(Error::Config(format!(
            "orbit angle needs 0 < a < 1/√2, got {a}"
        )));
    }
    let a2 = a * a;
    Ok((-a2 / (1.0 - a2)).acos())
}

/// Coordinates of `[p]` in the orbit space: `([q], |r|, |s|)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuotientCoords {
    /// Representative of `[q]`, phase chosen so its largest entry is real positive.
    pub q: Vec<Complex64>,
    pub a: f64,
    pub b: f64,
}

impl QuotientCoords {
    /// Max of `|a − a'|`, `|b − b'|` and `min_φ ‖q − e^{iφ} q'‖_∞`.
    pub fn distance(&self, other: &Self) -> f64 {
        let overlap: Complex64 = self.q.iter().zip(&other.q).map(|(x, y)| x.conj() * y).sum();
        let phase = if overlap.norm() > 0.0 {
            overlap.conj() / overlap.norm()
        } else {
            ONE
        };
        let dq = self
            .q
            .iter()
            .zip(&other.q)
            .fold(0.0f64, |acc, (x, y)| acc.max((x - phase * y).norm()));
        (self.a - other.a)
            .abs()
            .max((self.b - other.b).abs())
            .max(dq)
    }
}

pub fn quotient_coords(p: &SpherePoint) -> Result<QuotientCoords> {
    if !p.in_free_locus() {
        return Err(Error::DegenerateOrbit(
            "point outside the free locus".into(),
        ));
    }
    let q = p.q();
    let pivot = q
        .iter()
        .max_by(|x, y| x.norm().total_cmp(&y.norm()))
        .copied()
        .expect("q is nonempty");
    let phase = pivot.conj() / pivot.norm();
    Ok(QuotientCoords {
        q: q.iter().map(|z| z * phase).collect(),
        a: p.r().norm(),
        b: p.s().norm(),
    })
}

/// `G_μ = diag(A, 1, …)` acting on ambient coordinates; `A` acts on the first
/// `A.dim()` slots.
pub fn block_act(a: &ComplexMatrix, v: &[Complex64]) -> Vec<Complex64> {
    let m = a.dim();
    let mut out = a.apply(&v[..m]);
    out.extend_from_slice(&v[m..]);
    out
}

/// Residuals of the intertwining identity `μ∘η = G_μ*(μ∘η')`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionIReport {
    /// `CP^n`: `max |(μ∘η)_p(X) − (μ∘η')_{Gp}(GX)|`.
    pub eta_residual: f64,
    /// Sphere `S^{2n+1}` with `λ`.
    pub lambda_residual: f64,
    /// Sphere `S^{2m+1}` with the real projective `λ`.
    pub rp_residual: f64,
    /// `‖A Aᴴ − I‖_max` and `|det A − 1|` of the conjugator.
    pub conjugator_defect: f64,
    pub samples: usize,
}

impl ConditionIReport {
    pub fn max_residual(&self) -> f64 {
        self.eta_residual
            .max(self.lambda_residual)
            .max(self.rp_residual)
            .max(self.conjugator_defect)
    }
}

/// Builds `A_Z` for `Z ↔ μ`, sets `G_μ = diag(A_Z, 1, 1)` and samples the
/// pullback identity for `η` (on `CP^n`), `λ` (on `S^{2n+1}`) and the real
/// projective `λ` (on `S^{2m+1}`).
pub fn condition_i_check(
    j: &JMapPair,
    j2: &JMapPair,
    mu: DualWeight,
    samples: usize,
    seed: u64,
) -> Result<ConditionIReport> {
    let m = j.m();
    let n = m + 1;
    let cp = MetricSpec::cpn(j.clone(), n)?;
    let cp2 = cp.with_j(j2.clone())?;
    let sp = MetricSpec::sphere(j.clone(), n)?;
    let sp2 = sp.with_j(j2.clone())?;
    let rp = MetricSpec::rp(j.clone(), m)?;
    let rp2 = rp.with_j(j2.clone())?;

    let a = conjugator_for(j, j2, mu.to_z())?;
    let conjugator_defect = a.unitarity_defect().max((a.determinant() - ONE).norm());

    let mut rng = sampling::stream_rng(seed, 0);
    let mut report = ConditionIReport {
        eta_residual: 0.0,
        lambda_residual: 0.0,
        rp_residual: 0.0,
        conjugator_defect,
        samples,
    };
    let pullback_residual =
        |s1: &MetricSpec, s2: &MetricSpec, p: &SpherePoint, x: &TangentVector| {
            let gp = SpherePoint::from_coords(block_act(&a, p.coords()))?;
            let gx = TangentVector::from_components(block_act(&a, x.comps()));
            let lhs = mu.apply(s1.form(p, x)?.as_pair());
            let rhs = mu.apply(s2.form(&gp, &gx)?.as_pair());
            Ok::<f64, Error>((lhs - rhs).abs())
        };
    for _ in 0..samples {
        let p = sampling::sphere_point(&mut rng, n);
        let xh = sampling::hopf_horizontal(&mut rng, &p);
        let x = sampling::tangent(&mut rng, &p);
        report.eta_residual = report
            .eta_residual
            .max(pullback_residual(&cp, &cp2, &p, &xh)?);
        report.lambda_residual = report
            .lambda_residual
            .max(pullback_residual(&sp, &sp2, &p, &x)?);

        let pr = sampling::rp_point(&mut rng, m).as_sphere_point();
        let xr = sampling::tangent(&mut rng, &pr);
        report.rp_residual = report
            .rp_residual
            .max(pullback_residual(&rp, &rp2, &pr, &xr)?);
    }
    Ok(report)
}

/// Real Gram matrix of the Fubini–Study metric in the affine chart `p_0 = 1`,
/// coordinates ordered `(Re p_1, Im p_1, …, Re p_n, Im p_n)`.
///
/// `g(v, w) = Re Σ g_{ij̄} v_i conj(w_j)` with
/// `g_{ij̄} = δ_ij/(1+|p|²) − conj(p_i) p_j/(1+|p|²)²`.
pub fn fubini_study_chart(p: &[Complex64]) -> Result<GramMatrix> {
    if p.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite { row: 0, col: 0 });
    }
    let n = p.len();
    let w = 1.0 + norm_sqr(p);
    let h = |i: usize, k: usize| {
        let delta = if i == k { 1.0 / w } else { 0.0 };
        Complex64::new(delta, 0.0) - p[i].conj() * p[k] / (w * w)
    };
    // Real basis vector 2i is e_i, 2i+1 is i·e_i.
    let unit = |a: usize| if a.is_multiple_of(2) { ONE } else { I };
    let g = DMatrix::from_fn(2 * n, 2 * n, |a, b| {
        (h(a / 2, b / 2) * unit(a) * unit(b).conj()).re
    });
    GramMatrix::new(g)
}
