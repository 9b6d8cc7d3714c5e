//! Total scalar curvature of `(CP^n, g_η̄)` by Monte Carlo over finite-difference
//! curvature in affine charts.
//!
//! Chart `k` is `[P] ↦ (P_i / P_k)_{i ≠ k}` in real coordinates
//! `(Re p_1, Im p_1, …)`. The coordinate frame is lifted along the section
//! `x ↦ (1, p)/|(1, p)|` (1 inserted at slot `k`) to Hopf-horizontal vectors
//! and fed to [`metrics::gram`].

use std::path::Path;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{SpherePoint, TangentVector};
use crate::mat::{I, ONE};
use crate::metrics::{self, GramMatrix, Manifold, MetricSpec};
use crate::sampling;

/// Step for the curvature stencils.
pub const DEFAULT_STEP: f64 = 1e-3;
/// Metric inverse is refused above this condition number.
pub const MAX_CONDITION: f64 = 1e10;
/// Fraction of failed curvature samples tolerated before aborting.
pub const MAX_FAILURE_RATE: f64 = 0.01;

/// Affine chart of `CP^n`: the homogeneous coordinate set to one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chart {
    pub n: usize,
    pub pivot: usize,
}

impl Chart {
    pub fn new(n: usize, pivot: usize) -> Result<Self> {
        if pivot > n {
            return Err(Error::Config(format!(
                "chart pivot {pivot} out of range for CP^{n}"
            )));
        }
        Ok(Self { n, pivot })
    }

    /// The chart with the largest `|P_k|` and the coordinates of `[p]` in it.
    pub fn best_for(p: &SpherePoint) -> (Self, Vec<f64>) {
        let coords = p.coords();
        let pivot = (0..coords.len())
            .max_by(|&a, &b| coords[a].norm_sqr().total_cmp(&coords[b].norm_sqr()))
            .expect("nonempty");
        let chart = Self {
            n: coords.len() - 1,
            pivot,
        };
        let x = chart.coordinates(p);
        (chart, x)
    }

    pub fn coordinates(&self, p: &SpherePoint) -> Vec<f64> {
        let c = p.coords();
        let d = c[self.pivot];
        c.iter()
            .enumerate()
            .filter(|&(k, _)| k != self.pivot)
            .flat_map(|(_, z)| {
                let w = z / d;
                [w.re, w.im]
            })
            .collect()
    }

    fn homogeneous(&self, v: &[Complex64], at_pivot: Complex64) -> Vec<Complex64> {
        let mut out = v.to_vec();
        out.insert(self.pivot, at_pivot);
        out
    }

    /// The section point and the Hopf-horizontal lifts of `∂/∂x_a`.
    pub fn lift(&self, x: &[f64]) -> Result<(SpherePoint, Vec<TangentVector>)> {
        if x.len() != 2 * self.n {
            return Err(Error::DimensionMismatch {
                expected: 2 * self.n,
                got: x.len(),
            });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row: 0, col: 0 });
        }
        let p: Vec<Complex64> = x.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
        let w = 1.0 + p.iter().map(|z| z.norm_sqr()).sum::<f64>();
        let nrm = w.sqrt();
        let unit = self.homogeneous(&p, ONE);
        let pt = SpherePoint::from_coords(unit.iter().map(|z| z / nrm).collect())?;
        let mut frame = Vec::with_capacity(2 * self.n);
        for a in 0..2 * self.n {
            let mut v = vec![Complex64::new(0.0, 0.0); self.n];
            v[a / 2] = if a % 2 == 0 { ONE } else { I };
            // Re⟨v, p⟩
            let vp = (v[a / 2] * p[a / 2].conj()).re;
            let dv = self.homogeneous(&v, Complex64::new(0.0, 0.0));
            let comps = dv
                .iter()
                .zip(&unit)
                .map(|(d, u)| d / nrm - u * (vp / (w * nrm)))
                .collect();
            frame.push(TangentVector::from_components(comps).hopf_horizontal_part(&pt));
        }
        Ok((pt, frame))
    }
}

/// Gram matrix of `g_η̄` on the chart coordinate frame.
pub fn chart_metric(spec: &MetricSpec, chart: Chart, x: &[f64]) -> Result<GramMatrix> {
    if spec.manifold() != Manifold::CPn || spec.dim() != chart.n {
        return Err(Error::Config(
            "chart_metric needs a CP^n spec matching the chart".into(),
        ));
    }
    let (p, frame) = chart.lift(x)?;
    metrics::gram(spec, &p, &frame)
}

/// Finite-difference scheme for the metric derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stencil {
    /// Second-order central differences with step `h`.
    Central,
    /// `(4 S(h) − S(2h)) / 3` of the central result; fourth order.
    Richardson,
}

/// Scalar curvature at `x` of the metric `g(x)` with the [`Stencil::Richardson`] scheme.
pub fn scalar_curvature<F>(metric: F, x: &[f64], h: f64) -> Result<f64>
where
    F: Fn(&[f64]) -> Result<DMatrix<f64>>,
{
    scalar_curvature_with(metric, x, h, Stencil::Richardson)
}

pub fn scalar_curvature_with<F>(metric: F, x: &[f64], h: f64, stencil: Stencil) -> Result<f64>
where
    F: Fn(&[f64]) -> Result<DMatrix<f64>>,
{
    match stencil {
        Stencil::Central => central_scalar_curvature(&metric, x, h),
        Stencil::Richardson => {
            let fine = central_scalar_curvature(&metric, x, h)?;
            let coarse = central_scalar_curvature(&metric, x, 2.0 * h)?;
            Ok((4.0 * fine - coarse) / 3.0)
        }
    }
}

/// Central differences of step `h`: Christoffel symbols, Riemann tensor,
/// double contraction.
fn central_scalar_curvature<F>(metric: &F, x: &[f64], h: f64) -> Result<f64>
where
    F: Fn(&[f64]) -> Result<DMatrix<f64>>,
{
    let d = x.len();
    let at = |shifts: &[(usize, f64)]| {
        let mut y = x.to_vec();
        for &(k, s) in shifts {
            y[k] += s;
        }
        metric(&y)
    };
    let g0 = at(&[])?;
    let eig = SymmetricEigen::new(g0.clone()).eigenvalues;
    let (lo, hi) = eig.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), v| {
        (lo.min(*v), hi.max(v.abs()))
    });
    if lo.is_nan() || lo <= 0.0 || hi / lo > MAX_CONDITION {
        return Err(Error::IllConditioned(hi / lo));
    }
    let ginv = g0
        .clone()
        .cholesky()
        .ok_or(Error::IllConditioned(hi / lo))?
        .inverse();

    let plus = (0..d).map(|a| at(&[(a, h)])).collect::<Result<Vec<_>>>()?;
    let minus = (0..d).map(|a| at(&[(a, -h)])).collect::<Result<Vec<_>>>()?;
    // dg[c] = ∂_c g, ddg[c * d + e] = ∂_c ∂_e g
    let dg: Vec<DMatrix<f64>> = (0..d).map(|c| (&plus[c] - &minus[c]) / (2.0 * h)).collect();
    let mut ddg = vec![DMatrix::zeros(d, d); d * d];
    for c in 0..d {
        ddg[c * d + c] = (&plus[c] - &g0 * 2.0 + &minus[c]) / (h * h);
        for e in 0..c {
            let pp = at(&[(c, h), (e, h)])?;
            let pm = at(&[(c, h), (e, -h)])?;
            let mp = at(&[(c, -h), (e, h)])?;
            let mm = at(&[(c, -h), (e, -h)])?;
            let v = (pp - pm - mp + mm) / (4.0 * h * h);
            ddg[e * d + c] = v.clone();
            ddg[c * d + e] = v;
        }
    }
    let dgv = |c: usize, a: usize, b: usize| dg[c][(a, b)];
    let ddgv = |c: usize, e: usize, a: usize, b: usize| ddg[c * d + e][(a, b)];

    // first kind Γ_{k,ij} and second kind Γ^k_ij
    let mut gamma1 = vec![0.0; d * d * d];
    for k in 0..d {
        for i in 0..d {
            for j in 0..d {
                gamma1[(k * d + i) * d + j] = 0.5 * (dgv(i, j, k) + dgv(j, i, k) - dgv(k, i, j));
            }
        }
    }
    let mut gamma2 = vec![0.0; d * d * d];
    for k in 0..d {
        for i in 0..d {
            for j in 0..d {
                gamma2[(k * d + i) * d + j] = (0..d)
                    .map(|l| ginv[(k, l)] * gamma1[(l * d + i) * d + j])
                    .sum();
            }
        }
    }
    let g1 = |k: usize, i: usize, j: usize| gamma1[(k * d + i) * d + j];
    let g2 = |k: usize, i: usize, j: usize| gamma2[(k * d + i) * d + j];

    let mut scal = 0.0;
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                let gac = ginv[(a, c)];
                if gac == 0.0 {
                    continue;
                }
                for e in 0..d {
                    let r = 0.5
                        * (ddgv(b, c, a, e) + ddgv(a, e, b, c)
                            - ddgv(a, c, b, e)
                            - ddgv(b, e, a, c))
                        + (0..d)
                            .map(|q| g1(q, a, e) * g2(q, b, c) - g1(q, a, c) * g2(q, b, e))
                            .sum::<f64>();
                    scal += gac * ginv[(b, e)] * r;
                }
            }
        }
    }
    Ok(scal)
}

pub fn scalar_curvature_fd(spec: &MetricSpec, chart: Chart, x: &[f64], h: f64) -> Result<f64> {
    scalar_curvature_fd_with(spec, chart, x, h, Stencil::Richardson)
}

pub fn scalar_curvature_fd_with(
    spec: &MetricSpec,
    chart: Chart,
    x: &[f64],
    h: f64,
    stencil: Stencil,
) -> Result<f64> {
    let metric = |y: &[f64]| chart_metric(spec, chart, y).map(|g| g.matrix().clone());
    scalar_curvature_with(metric, x, h, stencil)
}

/// One curvature evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureSample {
    pub pivot: usize,
    pub chart_point: Vec<f64>,
    pub scalar_curvature: f64,
    pub metric_det: f64,
    /// Determinant of the Fubini–Study chart metric at the same point.
    pub fs_det: f64,
}

/// Curvature of `spec` at `[p]`, in the chart best suited to `p`.
pub fn curvature_sample(spec: &MetricSpec, p: &SpherePoint, h: f64) -> Result<CurvatureSample> {
    let (chart, x) = Chart::best_for(p);
    let metric_det = chart_metric(spec, chart, &x)?.determinant();
    let fs_det = fs_chart(&x)?.determinant();
    let scalar_curvature = scalar_curvature_fd(spec, chart, &x, h)?;
    if !scalar_curvature.is_finite() || metric_det.is_nan() || metric_det <= 0.0 {
        return Err(Error::IllConditioned(f64::INFINITY));
    }
    Ok(CurvatureSample {
        pivot: chart.pivot,
        chart_point: x,
        scalar_curvature,
        metric_det,
        fs_det,
    })
}

/// The closed form has the same shape in every affine chart.
fn fs_chart(x: &[f64]) -> Result<GramMatrix> {
    let p: Vec<Complex64> = x.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
    metrics::fubini_study_chart(&p)
}

/// Monte Carlo estimate with its sampling metadata.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MCEstimate {
    pub value: f64,
    pub std_error: f64,
    pub n_samples: usize,
    pub seed: u64,
}

impl MCEstimate {
    /// `vol · mean` and `vol · std/√N` of the given integrand values.
    pub fn from_values(values: &[f64], scale: f64, seed: u64) -> Self {
        let n = values.len();
        let mean = pairwise_sum(values) / n as f64;
        let dev: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
        let var = if n > 1 {
            pairwise_sum(&dev) / (n - 1) as f64
        } else {
            0.0
        };
        Self {
            value: scale * mean,
            std_error: scale * (var / n as f64).sqrt(),
            n_samples: n,
            seed,
        }
    }

    /// `|Δ| / sqrt(σ₁² + σ₂²)`.
    pub fn z_score(&self, other: &Self) -> f64 {
        let sigma = self.std_error.hypot(other.std_error);
        let delta = (self.value - other.value).abs();
        if sigma > 0.0 {
            delta / sigma
        } else if delta == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

/// Result of a curvature Monte Carlo run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureRun {
    pub total_scalar_curvature: MCEstimate,
    pub volume: MCEstimate,
    pub failures: usize,
    pub samples: Vec<CurvatureSample>,
}

impl CurvatureRun {
    /// `max |det g / det g_FS − 1|` over the samples.
    pub fn max_det_defect(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| (s.metric_det / s.fs_det - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn scalar_curvature_range(&self) -> (f64, f64) {
        self.samples
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| {
                (lo.min(s.scalar_curvature), hi.max(s.scalar_curvature))
            })
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        write_curvature_csv(&self.samples, path)
    }
}

/// `vol(CP^n, g_FS) = π^n / n!` for the quotient of the unit sphere.
pub fn cpn_volume(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * std::f64::consts::PI / k as f64)
}

/// Samples `[p]` uniformly (Gaussian on `S^{2n+1}`, pushed to `CP^n`); sample
/// `i` draws from stream `(seed, i)` and redraws from it on failure.
pub fn curvature_run(
    spec: &MetricSpec,
    n_samples: usize,
    seed: u64,
    h: f64,
) -> Result<CurvatureRun> {
    if spec.manifold() != Manifold::CPn {
        return Err(Error::Config(
            "the curvature probe needs a CP^n spec".into(),
        ));
    }
    if n_samples == 0 {
        return Err(Error::Config(
            "the curvature probe needs at least one sample".into(),
        ));
    }
    let n = spec.dim();
    let max_failures = (MAX_FAILURE_RATE * n_samples as f64).floor() as usize;
    let draws: Vec<(Option<CurvatureSample>, usize)> = (0..n_samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = sampling::stream_rng(seed, i);
            let mut failed = 0;
            while failed <= max_failures {
                let p = sampling::sphere_point(&mut rng, n);
                match curvature_sample(spec, &p, h) {
                    Ok(s) => return (Some(s), failed),
                    Err(_) => failed += 1,
                }
            }
            (None, failed)
        })
        .collect();
    let failures: usize = draws.iter().map(|d| d.1).sum();
    if failures > max_failures || draws.iter().any(|d| d.0.is_none()) {
        return Err(Error::TooManyFailures {
            failures,
            samples: n_samples,
        });
    }
    let samples: Vec<CurvatureSample> = draws.into_iter().filter_map(|d| d.0).collect();
    let vol = cpn_volume(n);
    let scal: Vec<f64> = samples.iter().map(|s| s.scalar_curvature).collect();
    let ratio: Vec<f64> = samples
        .iter()
        .map(|s| (s.metric_det / s.fs_det).sqrt())
        .collect();
    Ok(CurvatureRun {
        total_scalar_curvature: MCEstimate::from_values(&scal, vol, seed),
        volume: MCEstimate::from_values(&ratio, vol, seed),
        failures,
        samples,
    })
}

/// `∫ scal dvol` over `(CP^n, g_η̄)`.
pub fn total_scalar_curvature_mc(
    spec: &MetricSpec,
    n_samples: usize,
    seed: u64,
) -> Result<MCEstimate> {
    Ok(curvature_run(spec, n_samples, seed, DEFAULT_STEP)?.total_scalar_curvature)
}

/// Columns `x0 … x{2n−1}, scal, det`.
pub fn write_curvature_csv(samples: &[CurvatureSample], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    if let Some(first) = samples.first() {
        let mut header: Vec<String> = (0..first.chart_point.len())
            .map(|k| format!("x{k}"))
            .collect();
        header.push("scal".into());
        header.push("det".into());
        w.write_record(&header)?;
    }
    for s in samples {
        let mut row: Vec<String> = s.chart_point.iter().map(|v| format!("{v:?}")).collect();
        row.push(format!("{:?}", s.scalar_curvature));
        row.push(format!("{:?}", s.metric_det));
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })
}

/// Recursive pairwise summation; the result depends only on the order of `v`.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 8 {
        v.iter().sum()
    } else {
        let mid = v.len() / 2;
        pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jmaps::{schueth_family, JMapPair};
    use crate::sampling::stream_rng;

    fn fs(n: usize) -> MetricSpec {
        MetricSpec::cpn(JMapPair::zero(n - 1), n).unwrap()
    }

    #[test]
    fn chart_coordinates_round_trip_through_lift() {
        let p = sampling::sphere_point(&mut stream_rng(1, 0), 4);
        let (chart, x) = Chart::best_for(&p);
        let (q, _) = chart.lift(&x).unwrap();
        let back = chart.coordinates(&q);
        for (a, b) in x.iter().zip(&back) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn lifts_are_derivatives_of_the_section() {
        let chart = Chart::new(4, 2).unwrap();
        let x = [0.3, -0.1, 0.2, 0.5, -0.4, 0.1, 0.0, 0.2];
        let (p, frame) = chart.lift(&x).unwrap();
        let h = 1e-6;
        for a in 0..8 {
            let mut xp = x;
            let mut xm = x;
            xp[a] += h;
            xm[a] -= h;
            let (pp, _) = chart.lift(&xp).unwrap();
            let (pm, _) = chart.lift(&xm).unwrap();
            let diff: Vec<Complex64> = pp
                .coords()
                .iter()
                .zip(pm.coords())
                .map(|(u, v)| (u - v) / (2.0 * h))
                .collect();
            let fd = TangentVector::from_components(diff).hopf_horizontal_part(&p);
            let err = fd.axpy(-1.0, &frame[a]).max_abs();
            assert!(err < 1e-8, "direction {a}: {err}");
        }
    }

    #[test]
    fn round_two_sphere_has_curvature_two() {
        // graph chart of the upper hemisphere
        let graph = |y: &[f64]| {
            let w = 1.0 - y[0] * y[0] - y[1] * y[1];
            Ok(DMatrix::from_fn(2, 2, |i, j| {
                (if i == j { 1.0 } else { 0.0 }) + y[i] * y[j] / w
            }))
        };
        // stereographic chart
        let stereo = |y: &[f64]| {
            let c = 4.0 / (1.0 + y[0] * y[0] + y[1] * y[1]).powi(2);
            Ok(DMatrix::identity(2, 2) * c)
        };
        for x in [[0.1, 0.2], [-0.3, 0.4], [0.0, 0.0]] {
            let (a, b) = (
                scalar_curvature(graph, &x, 1e-3).unwrap(),
                scalar_curvature(stereo, &x, 1e-3).unwrap(),
            );
            assert!((a - 2.0).abs() < 1e-5 && (b - 2.0).abs() < 1e-5, "{a} {b}");
        }
    }

    #[test]
    fn central_stencil_is_second_order() {
        let spec = MetricSpec::cpn(schueth_family(1.0), 4).unwrap();
        let p = sampling::free_point(&mut stream_rng(5, 0), 4, 0.02);
        let (chart, x) = Chart::best_for(&p);
        let s = |h| scalar_curvature_fd_with(&spec, chart, &x, h, Stencil::Central).unwrap();
        let (s2, s1, s05) = (s(2e-3), s(1e-3), s(5e-4));
        let coarse = (s2 - s1).abs();
        let fine = (s1 - s05).abs();
        // h² scaling predicts fine = coarse / 4
        assert!(fine <= coarse + 1e-7, "{coarse:e} {fine:e}");
        let rich = scalar_curvature_fd(&spec, chart, &x, 1e-3).unwrap();
        assert!((rich - s05).abs() < fine);
    }

    #[test]
    fn flat_metric_has_zero_curvature() {
        let flat = |_: &[f64]| Ok(DMatrix::identity(3, 3));
        assert_eq!(scalar_curvature(flat, &[0.1, 0.2, 0.3], 1e-3).unwrap(), 0.0);
    }

    #[test]
    fn fubini_study_curvature_constant() {
        // holomorphic sectional curvature 4 in this normalization: scal = 4n(n+1)
        let spec = fs(4);
        let mut rng = stream_rng(2, 0);
        for _ in 0..3 {
            let p = sampling::sphere_point(&mut rng, 4);
            let s = curvature_sample(&spec, &p, DEFAULT_STEP).unwrap();
            assert!(
                (s.scalar_curvature - 80.0).abs() < 80.0 * 1e-4,
                "{}",
                s.scalar_curvature
            );
            assert!((s.metric_det / s.fs_det - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn chart_metric_for_zero_map_is_fubini_study() {
        let spec = fs(4);
        let mut rng = stream_rng(3, 0);
        for pivot in 0..5 {
            let p = sampling::sphere_point(&mut rng, 4);
            let chart = Chart::new(4, pivot).unwrap();
            let x = chart.coordinates(&p);
            let g = chart_metric(&spec, chart, &x).unwrap();
            let f = fs_chart(&x).unwrap();
            assert!((g.matrix() - f.matrix()).abs().max() < 1e-9);
        }
    }

    #[test]
    fn deformed_curvature_is_torus_invariant() {
        let spec = MetricSpec::cpn(schueth_family(std::f64::consts::FRAC_PI_2), 4).unwrap();
        let p = sampling::free_point(&mut stream_rng(4, 0), 4, 0.02);
        let a = curvature_sample(&spec, &p, DEFAULT_STEP).unwrap();
        let b =
            curvature_sample(&spec, &crate::forms::torus_act(0.7, -2.1, &p), DEFAULT_STEP).unwrap();
        assert!(
            (a.scalar_curvature - b.scalar_curvature).abs() < 1e-5,
            "{} {}",
            a.scalar_curvature,
            b.scalar_curvature
        );
        assert!((a.metric_det / a.fs_det - 1.0).abs() < 1e-8);
    }

    #[test]
    fn mc_constant_integrand_and_determinism() {
        let spec = fs(4);
        let run = curvature_run(&spec, 16, 9, DEFAULT_STEP).unwrap();
        let est = run.total_scalar_curvature;
        assert!((est.value - 80.0 * cpn_volume(4)).abs() < 1e-3 * est.value);
        assert!(run.volume.std_error < 1e-8);
        assert_eq!(curvature_run(&spec, 16, 9, DEFAULT_STEP).unwrap(), run);
    }

    #[test]
    fn pairwise_sum_matches_naive() {
        let v: Vec<f64> = (0..1000).map(|k| (k as f64).sin()).collect();
        assert!((pairwise_sum(&v) - v.iter().sum::<f64>()).abs() < 1e-12);
        assert_eq!(pairwise_sum(&[]), 0.0);
    }

    #[test]
    fn csv_has_spec_columns() {
        let spec = fs(4);
        let run = curvature_run(&spec, 2, 1, DEFAULT_STEP).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.csv");
        run.write_csv(&path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "x0,x1,x2,x3,x4,x5,x6,x7,scal,det");
        assert_eq!(lines.count(), 2);
    }
}
