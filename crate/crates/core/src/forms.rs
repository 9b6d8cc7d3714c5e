//! Points and tangent vectors on `S^{2n+1} ⊂ C^{n+1}`, the torus and Hopf
//! actions, and the `z`-valued 1-forms built from a [`JMapPair`].
//!
//! Coordinates are split as `p = (q, r, s) ∈ C^{n−1} × C × C`. The torus acts
//! on `r` and `s`, the `su(n−1)` maps act on `q`. All inner products are the
//! real part of the hermitian product, `⟨X, Y⟩ = Σ Re(X_i · conj(Y_i))`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jmaps::{JMapPair, ZVector};
use crate::mat::{I, ZERO};

/// Unit-norm tolerance for points and tangency tolerance for vectors.
pub const GEOM_TOL: f64 = 1e-12;

/// Real inner product `Σ Re(x_i conj(y_i))`.
pub fn inner(x: &[Complex64], y: &[Complex64]) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    x.iter()
        .zip(y)
        .map(|(a, b)| a.re * b.re + a.im * b.im)
        .sum()
}

pub fn norm_sqr(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum()
}

fn times_i(x: &[Complex64]) -> Vec<Complex64> {
    x.iter().map(|z| Complex64::new(-z.im, z.re)).collect()
}

/// A point `(q, r, s)` of the unit sphere in `C^{n+1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint {
    coords: Vec<Complex64>,
}

impl SpherePoint {
    pub fn new(q: &[Complex64], r: Complex64, s: Complex64) -> Result<Self> {
        let mut coords = q.to_vec();
        coords.push(r);
        coords.push(s);
        Self::from_coords(coords)
    }

    /// `coords = (q_1 … q_{n−1}, r, s)`, at least three entries.
    pub fn from_coords(coords: Vec<Complex64>) -> Result<Self> {
        if coords.len() < 3 {
            return Err(Error::DimensionMismatch {
                expected: 3,
                got: coords.len(),
            });
        }
        let defect = norm_sqr(&coords) - 1.0;
        if !defect.is_finite() || defect.abs() > GEOM_TOL {
            return Err(Error::NotOnSphere(defect));
        }
        Ok(Self { coords })
    }

    /// Normalizes a nonzero vector onto the sphere.
    pub fn normalized(mut coords: Vec<Complex64>) -> Result<Self> {
        let n = norm_sqr(&coords).sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NotOnSphere(-1.0));
        }
        coords.iter_mut().for_each(|z| *z /= n);
        Self::from_coords(coords)
    }

    /// The `n` of `S^{2n+1}`.
    pub fn n(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn q(&self) -> &[Complex64] {
        &self.coords[..self.coords.len() - 2]
    }

    pub fn r(&self) -> Complex64 {
        self.coords[self.coords.len() - 2]
    }

    pub fn s(&self) -> Complex64 {
        self.coords[self.coords.len() - 1]
    }

    pub fn q_norm_sqr(&self) -> f64 {
        norm_sqr(self.q())
    }

    /// `ip`, the Hopf fiber direction.
    pub fn fiber(&self) -> TangentVector {
        TangentVector(times_i(&self.coords))
    }

    /// Whether `r`, `s` and `q` are all nonzero, i.e. the torus orbit is free.
    pub fn in_free_locus(&self) -> bool {
        self.r().norm() > 0.0 && self.s().norm() > 0.0 && self.q_norm_sqr() > 0.0
    }
}

/// Real tangent vector `X = (X_q, X_r, X_s)`; the base point is carried by the caller.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TangentVector(Vec<Complex64>);

impl TangentVector {
    /// Validates `Re⟨X, p⟩ = 0`.
    pub fn new(p: &SpherePoint, comps: Vec<Complex64>) -> Result<Self> {
        if comps.len() != p.coords.len() {
            return Err(Error::DimensionMismatch {
                expected: p.coords.len(),
                got: comps.len(),
            });
        }
        let t = inner(&comps, &p.coords);
        if t.abs() > GEOM_TOL * (1.0 + norm_sqr(&comps).sqrt()) {
            return Err(Error::NotTangent(t));
        }
        Ok(Self(comps))
    }

    /// No tangency check; for ambient vectors and internal constructions.
    pub fn from_components(comps: Vec<Complex64>) -> Self {
        Self(comps)
    }

    pub fn zero(len: usize) -> Self {
        Self(vec![ZERO; len])
    }

    /// Projects an ambient vector onto `T_p S`.
    pub fn project(p: &SpherePoint, mut comps: Vec<Complex64>) -> Self {
        let c = inner(&comps, &p.coords);
        comps
            .iter_mut()
            .zip(&p.coords)
            .for_each(|(x, pi)| *x -= pi * c);
        Self(comps)
    }

    /// Removes the component along the Hopf fiber `ip`.
    pub fn hopf_horizontal_part(&self, p: &SpherePoint) -> Self {
        let ip = p.fiber();
        let c = inner(&self.0, &ip.0) / norm_sqr(&ip.0);
        self.axpy(-c, &ip)
    }

    pub fn comps(&self) -> &[Complex64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `X_q`, given the base point layout.
    pub fn xq(&self) -> &[Complex64] {
        &self.0[..self.0.len() - 2]
    }

    pub fn xr(&self) -> Complex64 {
        self.0[self.0.len() - 2]
    }

    pub fn xs(&self) -> Complex64 {
        self.0[self.0.len() - 1]
    }

    pub fn dot(&self, other: &Self) -> f64 {
        inner(&self.0, &other.0)
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.0)
    }

    /// `self + c·other`
    pub fn axpy(&self, c: f64, other: &Self) -> Self {
        Self(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b * c)
                .collect(),
        )
    }

    pub fn scale(&self, c: f64) -> Self {
        Self(self.0.iter().map(|z| z * c).collect())
    }

    pub fn neg(&self) -> Self {
        self.scale(-1.0)
    }

    /// Multiplication by a complex scalar (pushforward of the Hopf action).
    pub fn rotate(&self, tau: Complex64) -> Self {
        Self(self.0.iter().map(|z| z * tau).collect())
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Value `(λ¹(X), λ²(X))` of a `z`-valued 1-form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZValuedCovector {
    pub value1: f64,
    pub value2: f64,
}

impl ZValuedCovector {
    pub const ZERO: Self = Self {
        value1: 0.0,
        value2: 0.0,
    };

    pub fn new(value1: f64, value2: f64) -> Self {
        Self { value1, value2 }
    }

    pub fn as_pair(self) -> (f64, f64) {
        (self.value1, self.value2)
    }

    pub fn scale(self, c: f64) -> Self {
        Self::new(self.value1 * c, self.value2 * c)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(self, other: Self) -> Self {
        Self::new(self.value1 - other.value1, self.value2 - other.value2)
    }

    pub fn max_abs(self) -> f64 {
        self.value1.abs().max(self.value2.abs())
    }
}

/// `exp(aZ1 + bZ2) · (q, r, s) = (q, e^{ia} r, e^{ib} s)`
pub fn torus_act(a: f64, b: f64, p: &SpherePoint) -> SpherePoint {
    SpherePoint {
        coords: torus_apply(a, b, &p.coords),
    }
}

/// Pushforward of a tangent vector under [`torus_act`]; the action is linear.
pub fn torus_push(a: f64, b: f64, x: &TangentVector) -> TangentVector {
    TangentVector(torus_apply(a, b, &x.0))
}

fn torus_apply(a: f64, b: f64, v: &[Complex64]) -> Vec<Complex64> {
    let k = v.len();
    let mut out = v.to_vec();
    out[k - 2] *= Complex64::from_polar(1.0, a);
    out[k - 1] *= Complex64::from_polar(1.0, b);
    out
}

/// `τ · p` for `|τ| = 1`.
pub fn hopf_act(tau: Complex64, p: &SpherePoint) -> SpherePoint {
    SpherePoint {
        coords: p.coords.iter().map(|z| z * tau).collect(),
    }
}

/// `Z* = (0, i z1 r, i z2 s)`
pub fn z_star(z: ZVector, p: &SpherePoint) -> TangentVector {
    let mut v = vec![ZERO; p.coords.len()];
    v[p.coords.len() - 2] = I * p.r() * z.z1;
    v[p.coords.len() - 1] = I * p.s() * z.z2;
    TangentVector(v)
}

/// Hopf-horizontal part of `Z_k*`: `(0, ir, 0) − |r|² ip` or `(0, 0, is) − |s|² ip`.
pub fn z_star_hopf_horizontal(k: usize, p: &SpherePoint) -> TangentVector {
    let (z, weight) = match k {
        1 => (ZVector::Z1, p.r().norm_sqr()),
        2 => (ZVector::Z2, p.s().norm_sqr()),
        _ => panic!("torus Lie algebra has components 1 and 2, got {k}"),
    };
    z_star(z, p).axpy(-weight, &p.fiber())
}

fn check_dims(j: &JMapPair, p: &SpherePoint) -> Result<()> {
    if j.m() != p.n() - 1 {
        return Err(Error::DimensionMismatch {
            expected: p.n() - 1,
            got: j.m(),
        });
    }
    Ok(())
}

/// `λ^k(X) = ⟨(j_{Zk} q, 0, 0), X⟩ = ⟨j_{Zk} q, X_q⟩`
pub fn lambda_form(j: &JMapPair, p: &SpherePoint, x: &TangentVector) -> Result<ZValuedCovector> {
    check_dims(j, p)?;
    let value = |k: usize| inner(&j.component(k).matrix().apply(p.q()), x.xq());
    Ok(ZValuedCovector::new(value(1), value(2)))
}

/// `η^k(X) = |q|² ⟨j_{Zk} q, X_q⟩ − ⟨j_{Zk} q, iq⟩ ⟨iq, X_q⟩`
pub fn eta_form(j: &JMapPair, p: &SpherePoint, x: &TangentVector) -> Result<ZValuedCovector> {
    check_dims(j, p)?;
    Ok(eta_raw(j, p.q(), x.xq()))
}

/// [`eta_form`] on raw `q`, `X_q` slices, with no normalization assumed.
pub(crate) fn eta_raw(j: &JMapPair, q: &[Complex64], xq: &[Complex64]) -> ZValuedCovector {
    let q2 = norm_sqr(q);
    let iq = times_i(q);
    let iq_x = inner(&iq, xq);
    let value = |k: usize| {
        let jq = j.component(k).matrix().apply(q);
        q2 * inner(&jq, xq) - inner(&jq, &iq) * iq_x
    };
    ZValuedCovector::new(value(1), value(2))
}

/// Makes a `T`-invariant form vanish on the orbit directions `F1`, `F2`:
///
/// `λ_h(X) = ‖F1∧F2‖² λ(X) − ⟨X∧F2, F1∧F2⟩ λ(F1) − ⟨F1∧X, F1∧F2⟩ λ(F2)`
///
/// with `⟨a∧b, c∧d⟩ = ⟨a,c⟩⟨b,d⟩ − ⟨a,d⟩⟨b,c⟩`.
pub fn horizontalize<F>(
    form: F,
    x: &TangentVector,
    frame: [&TangentVector; 2],
) -> Result<ZValuedCovector>
where
    F: Fn(&TangentVector) -> Result<ZValuedCovector>,
{
    let [f1, f2] = frame;
    let (g11, g12, g22) = (f1.dot(f1), f1.dot(f2), f2.dot(f2));
    let area = g11 * g22 - g12 * g12;
    if area <= 1e-12 * g11 * g22 || area <= 0.0 {
        return Err(Error::DegenerateOrbit(format!(
            "‖F1∧F2‖² = {area:.3e} for frame norms² {g11:.3e}, {g22:.3e}"
        )));
    }
    let (x1, x2) = (x.dot(f1), x.dot(f2));
    let c1 = x1 * g22 - x2 * g12;
    let c2 = g11 * x2 - g12 * x1;
    let (lx, l1, l2) = (form(x)?, form(f1)?, form(f2)?);
    Ok(ZValuedCovector::new(
        area * lx.value1 - c1 * l1.value1 - c2 * l2.value1,
        area * lx.value2 - c1 * l1.value2 - c2 * l2.value2,
    ))
}

/// Closed-form exterior derivative of `η`:
///
/// `dη^k(X,Y) = 2⟨X_q,q⟩⟨j q, Y_q⟩ − 2⟨Y_q,q⟩⟨j q, X_q⟩ + 2|q|²⟨j X_q, Y_q⟩
///            − 2⟨j X_q, iq⟩⟨iq, Y_q⟩ + 2⟨j Y_q, iq⟩⟨iq, X_q⟩ − 2⟨j q, iq⟩⟨iX_q, Y_q⟩`
pub fn d_eta(
    j: &JMapPair,
    p: &SpherePoint,
    x: &TangentVector,
    y: &TangentVector,
) -> Result<ZValuedCovector> {
    check_dims(j, p)?;
    let q = p.q();
    let (xq, yq) = (x.xq(), y.xq());
    let (iq, ixq) = (times_i(q), times_i(xq));
    let (xq_q, yq_q) = (inner(xq, q), inner(yq, q));
    let (iq_x, iq_y) = (inner(&iq, xq), inner(&iq, yq));
    let ixq_y = inner(&ixq, yq);
    let q2 = norm_sqr(q);
    let value = |k: usize| {
        let jm = j.component(k).matrix();
        let (jq, jx, jy) = (jm.apply(q), jm.apply(xq), jm.apply(yq));
        2.0 * xq_q * inner(&jq, yq) - 2.0 * yq_q * inner(&jq, xq) + 2.0 * q2 * inner(&jx, yq)
            - 2.0 * inner(&jx, &iq) * iq_y
            + 2.0 * inner(&jy, &iq) * iq_x
            - 2.0 * inner(&jq, &iq) * ixq_y
    };
    Ok(ZValuedCovector::new(value(1), value(2)))
}

/// Four-term form of [`d_eta`], valid when `⟨X_q, q⟩ = ⟨Y_q, q⟩ = 0`
/// (vectors tangent to a shell `|r| = a, |s| = b`).
pub fn d_eta_restricted(
    j: &JMapPair,
    p: &SpherePoint,
    x: &TangentVector,
    y: &TangentVector,
) -> Result<ZValuedCovector> {
    check_dims(j, p)?;
    let q = p.q();
    let (xq, yq) = (x.xq(), y.xq());
    let (iq, ixq) = (times_i(q), times_i(xq));
    let q2 = norm_sqr(q);
    let value = |k: usize| {
        let jm = j.component(k).matrix();
        let (jq, jx, jy) = (jm.apply(q), jm.apply(xq), jm.apply(yq));
        2.0 * q2 * inner(&jx, yq) - 2.0 * inner(&jx, &iq) * inner(&iq, yq)
            + 2.0 * inner(&jy, &iq) * inner(&iq, xq)
            - 2.0 * inner(&jq, &iq) * inner(&ixq, yq)
    };
    Ok(ZValuedCovector::new(value(1), value(2)))
}

fn orbit_weights(p: &SpherePoint) -> Result<(f64, f64)> {
    let (r2, s2) = (p.r().norm_sqr(), p.s().norm_sqr());
    if r2 == 0.0 || s2 == 0.0 || r2 >= 1.0 || s2 >= 1.0 {
        return Err(Error::DegenerateOrbit(format!(
            "|r|² = {r2:.3e}, |s|² = {s2:.3e}"
        )));
    }
    Ok((r2, s2))
}

/// Connection form of the round metric for the torus action on `CP^n`,
/// evaluated on a Hopf-horizontal lift `X`.
///
/// Returns the `z`-coordinates of the orbit component of `X`, i.e. the
/// solution `ω` of `G ω = (⟨X, Z_{h,1}⟩, ⟨X, Z_{h,2}⟩)` with `G` the Gram
/// matrix of `Z_{h,1}, Z_{h,2}`. Since `⟨X, ip⟩ = 0` the right-hand side is
/// `(⟨X_r, ir⟩, ⟨X_s, is⟩)`.
pub fn omega0(p: &SpherePoint, x: &TangentVector) -> Result<ZVector> {
    let (r2, s2) = orbit_weights(p)?;
    let (g11, g22, g12) = (r2 * (1.0 - r2), s2 * (1.0 - s2), -r2 * s2);
    let b1 = inner(&[x.xr()], &[I * p.r()]);
    let b2 = inner(&[x.xs()], &[I * p.s()]);
    let det = g11 * g22 - g12 * g12;
    Ok(ZVector::new(
        (g22 * b1 - g12 * b2) / det,
        (g11 * b2 - g12 * b1) / det,
    ))
}

/// `ω₀` as a form on the sphere: [`omega0`] of the Hopf-horizontal part.
pub fn omega0_form(p: &SpherePoint, x: &TangentVector) -> Result<ZValuedCovector> {
    let w = omega0(p, &x.hopf_horizontal_part(p))?;
    Ok(ZValuedCovector::new(w.z1, w.z2))
}

/// `dω₀` on Hopf-horizontal vectors tangent to a shell `|r| = a, |s| = b`:
/// `−2⟨iX, Y⟩/|q|² · (Z1 + Z2)`.
///
/// The horizontal lift couples `X_r` to `⟨X, ip⟩`, whose exterior derivative
/// is `2⟨iX, Y⟩`; the diagonal subtorus acts on `q` as the Hopf action, so the
/// restricted connection carries the curvature of the Hopf bundle over `[q]`.
pub fn d_omega0_restricted(
    p: &SpherePoint,
    x: &TangentVector,
    y: &TangentVector,
) -> Result<ZValuedCovector> {
    orbit_weights(p)?;
    let v = -2.0 * inner(&times_i(x.comps()), y.comps()) / p.q_norm_sqr();
    Ok(ZValuedCovector::new(v, v))
}

/// Same for [`omega0_diagonal`]: `−2⟨iX, Y⟩ · (1/(1−|r|²), 1/(1−|s|²))`.
pub fn d_omega0_diagonal_restricted(
    p: &SpherePoint,
    x: &TangentVector,
    y: &TangentVector,
) -> Result<ZValuedCovector> {
    let (r2, s2) = orbit_weights(p)?;
    let w = -2.0 * inner(&times_i(x.comps()), y.comps());
    Ok(ZValuedCovector::new(w / (1.0 - r2), w / (1.0 - s2)))
}

/// Exterior derivative of a `z`-valued 1-form on the sphere by central
/// differences along `Φ(s,t) = (p + sX + tY)/|p + sX + tY|`:
/// `dβ(X,Y) = ∂_s β(∂_tΦ)|_{t=0} − ∂_t β(∂_sΦ)|_{s=0}`.
pub fn exterior_derivative_fd<F>(
    form: F,
    p: &SpherePoint,
    x: &TangentVector,
    y: &TangentVector,
    h: f64,
) -> Result<ZValuedCovector>
where
    F: Fn(&SpherePoint, &TangentVector) -> Result<ZValuedCovector>,
{
    // β at Φ(s) = (p + sV)/|p + sV| applied to dΦ/dt in direction W
    let along = |v: &TangentVector, w: &TangentVector, s: f64| {
        let moved: Vec<Complex64> = p
            .coords()
            .iter()
            .zip(v.comps())
            .map(|(a, b)| a + b * s)
            .collect();
        let len = norm_sqr(&moved).sqrt();
        let u: Vec<Complex64> = moved.iter().map(|z| z / len).collect();
        let c = inner(&u, w.comps());
        let dw = w
            .comps()
            .iter()
            .zip(&u)
            .map(|(wi, ui)| (wi - ui * c) / len)
            .collect();
        form(
            &SpherePoint::from_coords(u)?,
            &TangentVector::from_components(dw),
        )
    };
    let dx = along(x, y, h)?.sub(along(x, y, -h)?).scale(0.5 / h);
    let dy = along(y, x, h)?.sub(along(y, x, -h)?).scale(0.5 / h);
    Ok(dx.sub(dy))
}

/// Slotwise-normalized variant
/// `⟨X_r, ir⟩/(|r|²(1−|r|²)) Z1 + ⟨X_s, is⟩/(|s|²(1−|s|²)) Z2`.
///
/// Agrees with [`omega0`] only on vectors orthogonal to both `Z_{h,k}`.
pub fn omega0_diagonal(p: &SpherePoint, x: &TangentVector) -> Result<ZVector> {
    let (r2, s2) = orbit_weights(p)?;
    Ok(ZVector::new(
        inner(&[x.xr()], &[I * p.r()]) / (r2 * (1.0 - r2)),
        inner(&[x.xs()], &[I * p.s()]) / (s2 * (1.0 - s2)),
    ))
}

/// A point `(p, q) ∈ C^m ⊕ C` on `S^{2m+1}`, used for the real projective quotient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RpPoint {
    coords: Vec<Complex64>,
}

impl RpPoint {
    pub fn new(p: &[Complex64], q: Complex64) -> Result<Self> {
        let mut coords = p.to_vec();
        coords.push(q);
        Self::from_coords(coords)
    }

    pub fn from_coords(coords: Vec<Complex64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: coords.len(),
            });
        }
        let defect = norm_sqr(&coords) - 1.0;
        if !defect.is_finite() || defect.abs() > GEOM_TOL {
            return Err(Error::NotOnSphere(defect));
        }
        Ok(Self { coords })
    }

    pub fn normalized(mut coords: Vec<Complex64>) -> Result<Self> {
        let n = norm_sqr(&coords).sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NotOnSphere(-1.0));
        }
        coords.iter_mut().for_each(|z| *z /= n);
        Self::from_coords(coords)
    }

    pub fn m(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn p(&self) -> &[Complex64] {
        &self.coords[..self.coords.len() - 1]
    }

    pub fn q(&self) -> Complex64 {
        self.coords[self.coords.len() - 1]
    }

    pub fn antipode(&self) -> Self {
        Self {
            coords: self.coords.iter().map(|z| -z).collect(),
        }
    }

    /// `(e^{ia} p, e^{ib} q)`
    pub fn torus_act(&self, a: f64, b: f64) -> Self {
        Self {
            coords: rp_torus_apply(a, b, &self.coords),
        }
    }

    /// As a generic sphere point, for tangent-space helpers.
    pub fn as_sphere_point(&self) -> SpherePoint {
        SpherePoint {
            coords: self.coords.clone(),
        }
    }
}

fn rp_torus_apply(a: f64, b: f64, v: &[Complex64]) -> Vec<Complex64> {
    let k = v.len();
    let ea = Complex64::from_polar(1.0, a);
    let mut out: Vec<Complex64> = v.iter().map(|z| z * ea).collect();
    out[k - 1] = v[k - 1] * Complex64::from_polar(1.0, b);
    out
}

/// Pushforward of `(X, U)` under the torus action on `C^m ⊕ C`.
pub fn rp_torus_push(a: f64, b: f64, x: &TangentVector) -> TangentVector {
    TangentVector(rp_torus_apply(a, b, &x.0))
}

/// Orbit fields of the `C^m ⊕ C` torus action: `Z1* = (ip, 0)`, `Z2* = (0, iq)`.
pub fn rp_z_star(z: ZVector, pt: &RpPoint) -> TangentVector {
    let k = pt.coords.len();
    let mut v: Vec<Complex64> = pt.coords.iter().map(|c| I * c * z.z1).collect();
    v[k - 1] = I * pt.q() * z.z2;
    TangentVector(v)
}

/// `λ^k(X, U) = |p|² ⟨j_{Zk} p, X⟩ − ⟨X, ip⟩ ⟨j_{Zk} p, ip⟩`
pub fn rp_lambda(j: &JMapPair, pt: &RpPoint, xu: &TangentVector) -> Result<ZValuedCovector> {
    if j.m() != pt.m() || xu.len() != pt.coords.len() {
        return Err(Error::DimensionMismatch {
            expected: pt.m(),
            got: j.m(),
        });
    }
    let p = pt.p();
    let x = &xu.0[..p.len()];
    let p2 = norm_sqr(p);
    let ip = times_i(p);
    let x_ip = inner(x, &ip);
    let value = |k: usize| {
        let jp = j.component(k).matrix().apply(p);
        p2 * inner(&jp, x) - x_ip * inner(&jp, &ip)
    };
    Ok(ZValuedCovector::new(value(1), value(2)))
}
