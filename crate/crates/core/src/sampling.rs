//! Seeded random points, tangent vectors and unitaries.
//!
//! Every consumer derives its generator from `(seed, stream)` so that results
//! do not depend on evaluation order or thread count.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::forms::{inner, norm_sqr, RpPoint, SpherePoint, TangentVector};
use crate::mat::{self, ComplexMatrix, SuElement};

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<Complex64> {
    (0..len).map(|_| gaussian_complex(rng)).collect()
}

/// Uniform point on `S^{2n+1}` (normalized Gaussian).
pub fn sphere_point<R: Rng + ?Sized>(rng: &mut R, n: usize) -> SpherePoint {
    loop {
        if let Ok(p) = SpherePoint::normalized(gaussian_vector(rng, n + 1)) {
            return p;
        }
    }
}

/// Uniform point conditioned on `|r|², |s|², |q|² ≥ floor`.
pub fn free_point<R: Rng + ?Sized>(rng: &mut R, n: usize, floor: f64) -> SpherePoint {
    loop {
        let p = sphere_point(rng, n);
        if p.r().norm_sqr() >= floor && p.s().norm_sqr() >= floor && p.q_norm_sqr() >= floor {
            return p;
        }
    }
}

/// Point with `|r| = |s| = a` and random `q`, phases of `r`, `s`.
pub fn shell_point<R: Rng + ?Sized>(rng: &mut R, n: usize, a: f64) -> SpherePoint {
    assert!(a > 0.0 && 2.0 * a * a < 1.0, "need 0 < a < 1/√2");
    let mut q = gaussian_vector(rng, n - 1);
    let scale = ((1.0 - 2.0 * a * a) / norm_sqr(&q)).sqrt();
    q.iter_mut().for_each(|z| *z *= scale);
    let r = Complex64::from_polar(a, rng.random_range(0.0..std::f64::consts::TAU));
    let s = Complex64::from_polar(a, rng.random_range(0.0..std::f64::consts::TAU));
    let mut coords = q;
    coords.push(r);
    coords.push(s);
    SpherePoint::normalized(coords).expect("unit by construction")
}

pub fn tangent<R: Rng + ?Sized>(rng: &mut R, p: &SpherePoint) -> TangentVector {
    TangentVector::project(p, gaussian_vector(rng, p.coords().len()))
}

pub fn hopf_horizontal<R: Rng + ?Sized>(rng: &mut R, p: &SpherePoint) -> TangentVector {
    tangent(rng, p).hopf_horizontal_part(p)
}

/// Hopf-horizontal vector tangent to the shell through `p`:
/// `⟨X_q, q⟩ = ⟨X_r, r⟩ = ⟨X_s, s⟩ = 0`.
pub fn shell_tangent<R: Rng + ?Sized>(rng: &mut R, p: &SpherePoint) -> TangentVector {
    let q = p.q();
    let mut xq = gaussian_vector(rng, q.len());
    let c = inner(&xq, q) / norm_sqr(q);
    xq.iter_mut().zip(q).for_each(|(x, qi)| *x -= qi * c);
    let i = Complex64::new(0.0, 1.0);
    let xr = i * p.r() * rng.sample::<f64, _>(StandardNormal);
    let xs = i * p.s() * rng.sample::<f64, _>(StandardNormal);
    let mut comps = xq;
    comps.push(xr);
    comps.push(xs);
    TangentVector::from_components(comps).hopf_horizontal_part(p)
}

pub fn rp_point<R: Rng + ?Sized>(rng: &mut R, m: usize) -> RpPoint {
    loop {
        if let Ok(p) = RpPoint::normalized(gaussian_vector(rng, m + 1)) {
            return p;
        }
    }
}

/// Haar-distributed unitary via QR with phase correction.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, m: usize) -> ComplexMatrix {
    let g = DMatrix::from_fn(m, m, |_, _| {
        gaussian_complex(rng) * std::f64::consts::FRAC_1_SQRT_2
    });
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for k in 0..m {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for row in 0..m {
            q[(row, k)] *= phase;
        }
    }
    ComplexMatrix::new(q).expect("finite")
}

pub fn special_unitary<R: Rng + ?Sized>(rng: &mut R, m: usize) -> ComplexMatrix {
    mat::normalize_determinant(&unitary(rng, m))
}

pub fn su_element<R: Rng + ?Sized>(rng: &mut R, m: usize) -> SuElement {
    let g = DMatrix::from_fn(m, m, |_, _| gaussian_complex(rng));
    let g = ComplexMatrix::new(g).expect("finite");
    SuElement::new(mat::project_su(&g)).expect("projected onto su(m)")
}
