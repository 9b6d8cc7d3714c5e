//! Runs every check on a family pair `(j(t), j(t′))` and assembles a JSON
//! certificate.
//!
//! Non-isometry is only ever reported as evidence (differing obstruction plus
//! genericity), never as a proven fact.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{
    d_eta, d_eta_restricted, d_omega0_diagonal_restricted, d_omega0_restricted, eta_form,
    exterior_derivative_fd, hopf_act, horizontalize, lambda_form, omega0_diagonal, omega0_form,
    rp_lambda, rp_torus_push, rp_z_star, torus_act, torus_push, z_star, z_star_hopf_horizontal,
    SpherePoint, TangentVector, ZValuedCovector,
};
use crate::heatprobe::{self, Chart};
use crate::jmaps::{
    commutant_dim, equivalence_obstruction, is_isospectral_pair, padded_family, schueth_family,
    DualWeight, JMapPair, ZVector,
};
use crate::mat::{char_poly, I, ONE};
use crate::metrics::{
    self, condition_i_check, gram, horizontal_frame, orbit_angle, orbit_area_sq, tangent_frame,
    Manifold, MetricSpec,
};
use crate::sampling;

pub const CHAR_POLY_TOL: f64 = 1e-9;
pub const OBSTRUCTION_TOL: f64 = 1e-9;
pub const ISOSPECTRAL_TOL: f64 = 1e-9;
pub const CONDITION_I_TOL: f64 = 1e-8;
pub const ADMISSIBILITY_TOL: f64 = 1e-10;
pub const METRIC_TOL: f64 = 1e-10;
pub const CLOSED_FORM_TOL: f64 = 1e-12;
pub const D_ETA_REL_TOL: f64 = 1e-6;
pub const D_ETA_STEP: f64 = 1e-5;
pub const RESTRICTED_TOL: f64 = 1e-10;
pub const D_OMEGA_TOL: f64 = 1e-6;
pub const ANTIPODAL_TOL: f64 = 1e-14;
pub const MIN_EIGENVALUE: f64 = 1e-10;
/// `|Δ obstruction|` below this is treated as "equal".
pub const NON_EQUIVALENCE_GAP: f64 = 1e-6;
pub const FS_CHART_TOL: f64 = 1e-9;
pub const FS_CONSTANCY_TOL: f64 = 1e-4;
pub const HEAT_DET_TOL: f64 = 1e-8;
pub const HEAT_Z_TOL: f64 = 3.0;
/// Z-samples for the family and pair checks.
pub const Z_SAMPLES: usize = 64;
/// Chart points for the Fubini–Study chart self-test.
pub const FS_CHART_POINTS: usize = 50;
/// Curvature samples for the Fubini–Study constancy self-test.
pub const FS_CURVATURE_SAMPLES: usize = 64;

pub fn default_mu() -> Vec<[i64; 2]> {
    vec![[1, 0], [0, 1], [1, 1], [2, -1]]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub t: f64,
    pub tprime: f64,
    pub n: usize,
    pub mu: Vec<[i64; 2]>,
    pub samples: usize,
    pub seed: u64,
    pub heatprobe: bool,
    pub mc_samples: usize,
    pub out: Option<PathBuf>,
    pub dump_curvature: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            t: PI / 2.0,
            tprime: PI / 4.0,
            n: 4,
            mu: default_mu(),
            samples: 100,
            seed: 42,
            heatprobe: false,
            mc_samples: 20_000,
            out: None,
            dump_curvature: None,
        }
    }
}

impl Config {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        let cfg: Self = serde_json::from_str(&text).map_err(|source| Error::Json {
            path: path.display().to_string(),
            source,
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !self.t.is_finite() || !self.tprime.is_finite() {
            return bad(format!(
                "t = {}, t' = {} must be finite",
                self.t, self.tprime
            ));
        }
        if self.n < 4 {
            return bad(format!("n = {} but the family needs n >= 4", self.n));
        }
        if self.samples == 0 {
            return bad("samples must be positive".into());
        }
        if self.mu.is_empty() || self.mu.contains(&[0, 0]) {
            return bad("mu list must be nonempty and must not contain (0, 0)".into());
        }
        if self.heatprobe && self.mc_samples < 2 {
            return bad("mc_samples must be at least 2".into());
        }
        Ok(())
    }

    pub fn weights(&self) -> Vec<DualWeight> {
        self.mu
            .iter()
            .map(|&[a, b]| DualWeight::new(a, b))
            .collect()
    }
}

/// Parses `"1,0;0,1;1,1;2,-1"`.
pub fn parse_mu_list(s: &str) -> Result<Vec<[i64; 2]>> {
    s.split(';')
        .filter(|part| !part.trim().is_empty())
        .map(|part| {
            let nums: Vec<&str> = part.split(',').map(str::trim).collect();
            match nums.as_slice() {
                [a, b] => match (a.parse(), b.parse()) {
                    (Ok(a), Ok(b)) => Ok([a, b]),
                    _ => Err(Error::Config(format!("bad weight {part:?}"))),
                },
                _ => Err(Error::Config(format!("weight {part:?} needs two entries"))),
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: String,
    pub status: Status,
    /// `None` when the check was skipped or errored.
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub samples: usize,
    pub seed: u64,
    pub notes: String,
}

impl CheckResult {
    fn measured(
        id: &str,
        residual: f64,
        tolerance: f64,
        samples: usize,
        seed: u64,
        notes: String,
    ) -> Self {
        let status = if residual <= tolerance {
            Status::Pass
        } else {
            Status::Fail
        };
        Self {
            id: id.into(),
            status,
            residual: Some(residual),
            tolerance,
            samples,
            seed,
            notes,
        }
    }

    fn from_outcome(
        id: &str,
        tolerance: f64,
        samples: usize,
        seed: u64,
        outcome: Result<(f64, String)>,
    ) -> Self {
        match outcome {
            Ok((r, notes)) if r.is_finite() => {
                Self::measured(id, r, tolerance, samples, seed, notes)
            }
            Ok((r, notes)) => Self {
                id: id.into(),
                status: Status::Fail,
                residual: None,
                tolerance,
                samples,
                seed,
                notes: format!("non-finite residual {r}; {notes}"),
            },
            Err(e) => Self {
                id: id.into(),
                status: Status::Fail,
                residual: None,
                tolerance,
                samples,
                seed,
                notes: format!("error: {e}"),
            },
        }
    }

    fn skipped(id: &str, tolerance: f64, notes: &str) -> Self {
        Self {
            id: id.into(),
            status: Status::Skipped,
            residual: None,
            tolerance,
            samples: 0,
            seed: 0,
            notes: notes.into(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Which spaces the checks ran on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifoldEcho {
    /// `CP^n`, and the sphere `S^{2n+1}`.
    pub n: usize,
    /// `RP^{2m+1}`, `m = n − 1`.
    pub m: usize,
    /// `"su(3) family"` or the padded variant for `n > 4`.
    pub family: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub version: String,
    pub timestamp: String,
    pub config: Config,
    pub manifold: ManifoldEcho,
    pub checks: Vec<CheckResult>,
    pub verdict: Verdict,
    pub summary: String,
}

impl Certificate {
    pub fn check(&self, id: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn failures(&self) -> Vec<&CheckResult> {
        self.checks
            .iter()
            .filter(|c| c.status == Status::Fail)
            .collect()
    }

    /// 0 on pass, 2 on a failed verdict.
    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Verdict::Pass => 0,
            Verdict::Fail => 2,
        }
    }

    /// Copy with the timestamp blanked, for determinism comparisons.
    pub fn without_timestamp(&self) -> Self {
        Self {
            timestamp: String::new(),
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|source| Error::Json {
            path: "<certificate>".into(),
            source,
        })
    }

    pub fn read_json(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| Error::Json {
            path: path.display().to_string(),
            source,
        })
    }
}

pub fn emit_report(cert: &Certificate, path: &Path) -> Result<()> {
    let mut text = cert.to_json()?;
    text.push('\n');
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Per-check seed: SplitMix64 of the run seed mixed with an FNV-1a hash of
/// the check id.
pub fn derive_seed(seed: u64, id: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in id.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    let mut z = (seed ^ h).wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// The pair actually compared: the su(3) family for `n = 4`, padded otherwise.
pub fn family_pair(config: &Config) -> (JMapPair, JMapPair) {
    let m = config.n - 1;
    (padded_family(config.t, m), padded_family(config.tprime, m))
}

/// `λ³ + (3a² + 21b²)λ − i(3a²b + 20b³)` as `[c0, c1, c2, c3]`.
pub fn family_char_poly_closed_form(z: ZVector) -> [num_complex::Complex64; 4] {
    let (a, b) = (z.z1, z.z2);
    [
        -I * (3.0 * a * a * b + 20.0 * b * b * b),
        ONE * (3.0 * a * a + 21.0 * b * b),
        ONE * 0.0,
        ONE,
    ]
}

/// `1038 + 108 cos² t`.
pub fn family_obstruction_closed_form(t: f64) -> f64 {
    1038.0 + 108.0 * t.cos().powi(2)
}

struct Ctx<'a> {
    config: &'a Config,
    j: JMapPair,
    j2: JMapPair,
    n: usize,
}

impl Ctx<'_> {
    fn pair(&self) -> [&JMapPair; 2] {
        [&self.j, &self.j2]
    }
}

struct Runner<'a> {
    ctx: Ctx<'a>,
    checks: Vec<CheckResult>,
}

impl Runner<'_> {
    /// Runs `f` with a generator seeded for `id`; errors become failures.
    fn run<F>(&mut self, id: &str, tolerance: f64, samples: usize, f: F)
    where
        F: FnOnce(&Ctx, &mut ChaCha8Rng, u64) -> Result<(f64, String)>,
    {
        let seed = derive_seed(self.ctx.config.seed, id);
        let mut rng = sampling::stream_rng(seed, 0);
        let outcome = f(&self.ctx, &mut rng, seed);
        self.checks.push(CheckResult::from_outcome(
            id, tolerance, samples, seed, outcome,
        ));
    }
}

fn max_over<F>(samples: usize, mut f: F) -> Result<f64>
where
    F: FnMut() -> Result<f64>,
{
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let v = f()?;
        if v.is_nan() {
            return Ok(f64::NAN);
        }
        worst = worst.max(v);
    }
    Ok(worst)
}

fn diff(a: ZValuedCovector, b: ZValuedCovector) -> f64 {
    a.sub(b).max_abs()
}

fn angle(rng: &mut ChaCha8Rng) -> f64 {
    rng.random_range(0.0..2.0 * PI)
}

fn unit_tangent(rng: &mut ChaCha8Rng, p: &SpherePoint) -> TangentVector {
    let x = sampling::tangent(rng, p);
    x.scale(1.0 / x.norm_sqr().sqrt())
}

/// Torus action matching the manifold: `(q, e^{ia}r, e^{ib}s)` or `(e^{ia}p, e^{ib}q)`.
fn act(spec: &MetricSpec, a: f64, b: f64, p: &SpherePoint) -> SpherePoint {
    match spec.manifold() {
        Manifold::RPodd => {
            let pt = crate::forms::RpPoint::from_coords(p.coords().to_vec()).expect("unit");
            pt.torus_act(a, b).as_sphere_point()
        }
        _ => torus_act(a, b, p),
    }
}

fn push(spec: &MetricSpec, a: f64, b: f64, x: &TangentVector) -> TangentVector {
    match spec.manifold() {
        Manifold::RPodd => rp_torus_push(a, b, x),
        _ => torus_push(a, b, x),
    }
}

/// Random point and vector appropriate for `spec`.
fn sample_for(spec: &MetricSpec, rng: &mut ChaCha8Rng) -> SpherePoint {
    match spec.manifold() {
        Manifold::RPodd => sampling::rp_point(rng, spec.dim()).as_sphere_point(),
        _ => sampling::free_point(rng, spec.dim(), 1e-3),
    }
}

fn volume_residual(spec: &MetricSpec, rng: &mut ChaCha8Rng, samples: usize) -> Result<f64> {
    max_over(samples, || {
        let p = sample_for(spec, rng);
        // orthonormal for g₀, so det g₀ = 1
        let g = gram(spec, &p, &tangent_frame(spec, &p))?;
        Ok((g.determinant() - 1.0).abs())
    })
}

fn submersion_residual(spec: &MetricSpec, rng: &mut ChaCha8Rng, samples: usize) -> Result<f64> {
    max_over(samples, || {
        let p = sample_for(spec, rng);
        let frame = horizontal_frame(spec, &p);
        let shifted = frame
            .iter()
            .map(|x| spec.undeform(&p, x))
            .collect::<Result<Vec<_>>>()?;
        let g = gram(spec, &p, &shifted)?;
        let mut worst = 0.0f64;
        for a in 0..frame.len() {
            for b in 0..frame.len() {
                worst = worst.max((g.get(a, b) - frame[a].dot(&frame[b])).abs());
            }
        }
        // orbit directions keep their g₀ inner products
        let orbit = spec.orbit_frame(&p);
        let go = gram(spec, &p, &orbit)?;
        for a in 0..2 {
            for b in 0..2 {
                worst = worst.max((go.get(a, b) - orbit[a].dot(&orbit[b])).abs());
            }
        }
        Ok(worst)
    })
}

fn torus_invariance_residual(
    spec: &MetricSpec,
    rng: &mut ChaCha8Rng,
    samples: usize,
) -> Result<f64> {
    max_over(samples, || {
        let p = sample_for(spec, rng);
        let (x, y) = if spec.manifold() == Manifold::CPn {
            (
                sampling::hopf_horizontal(rng, &p),
                sampling::hopf_horizontal(rng, &p),
            )
        } else {
            (sampling::tangent(rng, &p), sampling::tangent(rng, &p))
        };
        let (a, b) = (angle(rng), angle(rng));
        let here = metrics::metric_eval(spec, &p, &x, &y)?;
        let there = metrics::metric_eval(
            spec,
            &act(spec, a, b, &p),
            &push(spec, a, b, &x),
            &push(spec, a, b, &y),
        )?;
        Ok((here - there).abs())
    })
}

fn min_eigenvalue(spec: &MetricSpec, rng: &mut ChaCha8Rng, samples: usize) -> Result<f64> {
    let mut lo = f64::INFINITY;
    for _ in 0..samples {
        let p = sample_for(spec, rng);
        lo = lo.min(gram(spec, &p, &tangent_frame(spec, &p))?.min_eigenvalue());
    }
    Ok(lo)
}

/// Per-`j` maxima of a residual over both members of the pair.
fn over_pair<F>(ctx: &Ctx, rng: &mut ChaCha8Rng, mut f: F) -> Result<f64>
where
    F: FnMut(&JMapPair, &mut ChaCha8Rng) -> Result<f64>,
{
    let mut worst = 0.0f64;
    for j in ctx.pair() {
        worst = worst.max(f(j, rng)?);
    }
    Ok(worst)
}

fn specs(ctx: &Ctx, manifold: Manifold) -> Result<[MetricSpec; 2]> {
    let dim = if manifold == Manifold::RPodd {
        ctx.n - 1
    } else {
        ctx.n
    };
    Ok([
        MetricSpec::new(manifold, ctx.j.clone(), dim)?,
        MetricSpec::new(manifold, ctx.j2.clone(), dim)?,
    ])
}

pub fn run_certification(config: &Config) -> Result<Certificate> {
    config.validate()?;
    let (j, j2) = family_pair(config);
    let n = config.n;
    let samples = config.samples;
    let mut r = Runner {
        ctx: Ctx { config, j, j2, n },
        checks: Vec::new(),
    };
    let ts = [config.t, config.tprime];

    // family invariants
    r.run(
        "family.char_poly",
        CHAR_POLY_TOL,
        2 * Z_SAMPLES,
        |_, _, _| {
            let mut worst = 0.0f64;
            for t in ts {
                let fam = schueth_family(t);
                for k in 0..Z_SAMPLES {
                    let z = ZVector::unit(2.0 * PI * k as f64 / Z_SAMPLES as f64);
                    let cp = char_poly(fam.eval(z).matrix());
                    let expected = family_char_poly_closed_form(z);
                    for (c, e) in cp.coefficients.iter().zip(expected) {
                        worst = worst.max((c - e).norm());
                    }
                }
            }
            Ok((worst, "λ³ + (3a²+21b²)λ − i(3a²b+20b³) at t and t′".into()))
        },
    );
    r.run("family.obstruction", OBSTRUCTION_TOL, 2, |_, _, _| {
        let mut worst = 0.0f64;
        let mut values = Vec::new();
        for t in ts {
            let o = equivalence_obstruction(&schueth_family(t));
            values.push(o);
            worst = worst.max((o - family_obstruction_closed_form(t)).abs());
        }
        Ok((
            worst,
            format!(
                "tr((j1²+j2²)²) = {:?} at t, {:?} at t′",
                values[0], values[1]
            ),
        ))
    });
    r.run("family.genericity", 0.0, 1, |ctx, _, _| {
        let d = commutant_dim(&ctx.j);
        let d2 = commutant_dim(&ctx.j2);
        Ok((
            d as f64,
            format!("commutant dimension {d} at t ({d2} at t′); generic iff 0"),
        ))
    });

    // the pair
    r.run(
        "pair.isospectral",
        ISOSPECTRAL_TOL,
        Z_SAMPLES,
        |ctx, _, _| {
            let rep = is_isospectral_pair(&ctx.j, &ctx.j2, Z_SAMPLES)?;
            Ok((
                rep.max_residual,
                "eigenvalue multisets of j(Z), j′(Z)".into(),
            ))
        },
    );
    r.run("pair.non_equivalence", 0.0, 1, |ctx, _, _| {
        let delta = equivalence_obstruction(&ctx.j) - equivalence_obstruction(&ctx.j2);
        let residual = (NON_EQUIVALENCE_GAP - delta.abs()).max(0.0);
        let notes = if residual == 0.0 {
            format!("obstruction delta {delta:?}: evidence that j, j′ are not equivalent")
        } else {
            format!("obstruction delta {delta:?}: pair not certified non-equivalent")
        };
        Ok((residual, notes))
    });

    // condition (I)
    for mu in config.weights() {
        let id = format!("condition_i.mu[{},{}]", mu.mu1, mu.mu2);
        r.run(&id, CONDITION_I_TOL, samples, |ctx, _, seed| {
            let rep = condition_i_check(&ctx.j, &ctx.j2, mu, samples, seed)?;
            Ok((
                rep.max_residual(),
                format!(
                    "η {:.3e}, λ {:.3e}, RP λ {:.3e}, conjugator {:.3e}",
                    rep.eta_residual, rep.lambda_residual, rep.rp_residual, rep.conjugator_defect
                ),
            ))
        });
    }

    run_admissibility(&mut r, samples);
    run_metric_identities(&mut r, samples);
    run_derivatives(&mut r, samples);
    run_rp(&mut r, samples);
    let mut runs = None;
    if config.heatprobe {
        runs = run_heatprobe(&mut r);
    } else {
        for (id, tol) in [
            ("heatprobe.fs_chart", FS_CHART_TOL),
            ("heatprobe.fs_constancy", FS_CONSTANCY_TOL),
            ("heatprobe.volume", HEAT_DET_TOL),
            ("heatprobe.total_scalar_curvature", HEAT_Z_TOL),
        ] {
            r.checks
                .push(CheckResult::skipped(id, tol, "heatprobe disabled"));
        }
    }
    if let (Some(path), Some((a, b))) = (&config.dump_curvature, runs) {
        let id = "heatprobe.csv_dump";
        let outcome = a
            .write_csv(path)
            .and_then(|_| b.write_csv(&tprime_path(path)))
            .map(|_| {
                (
                    0.0,
                    format!(
                        "wrote {} and {}",
                        path.display(),
                        tprime_path(path).display()
                    ),
                )
            });
        r.checks.push(CheckResult::from_outcome(
            id,
            0.0,
            a.samples.len(),
            config.seed,
            outcome,
        ));
    }

    let checks = r.checks;
    let verdict = if checks.iter().all(CheckResult::passed) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    let summary = summarize(&checks, verdict);
    Ok(Certificate {
        version: env!("CARGO_PKG_VERSION").into(),
        timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        config: config.clone(),
        manifold: ManifoldEcho {
            n,
            m: n - 1,
            family: if n == 4 {
                "su(3) family".into()
            } else {
                format!("su(3) family padded to su({})", n - 1)
            },
        },
        checks,
        verdict,
        summary,
    })
}

/// `curv.csv` → `curv.tprime.csv`.
pub fn tprime_path(path: &Path) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}.tprime.{}", ext.to_string_lossy()),
        None => format!("{stem}.tprime"),
    };
    path.with_file_name(name)
}

fn summarize(checks: &[CheckResult], verdict: Verdict) -> String {
    let ok = |prefix: &str| {
        checks
            .iter()
            .filter(|c| c.id.starts_with(prefix))
            .all(|c| c.status != Status::Fail)
    };
    let mut parts = Vec::new();
    if ok("pair.isospectral") && ok("condition_i") {
        parts.push("isospectral: condition (I) holds for every tested weight".to_string());
    } else {
        parts.push("isospectrality not certified".to_string());
    }
    if ok("pair.non_equivalence") && ok("family.genericity") {
        parts.push("evidence of non-isometry: obstruction differs and j(t) is generic".to_string());
    } else if !ok("pair.non_equivalence") {
        parts.push("pair not certified non-equivalent".to_string());
    } else {
        parts.push("j(t) not generic; non-isometry argument does not apply".to_string());
    }
    let failed: Vec<&str> = checks
        .iter()
        .filter(|c| c.status == Status::Fail)
        .map(|c| c.id.as_str())
        .collect();
    if verdict == Verdict::Fail {
        parts.push(format!("failed: {}", failed.join(", ")));
    }
    parts.join("; ")
}

fn run_admissibility(r: &mut Runner, samples: usize) {
    r.run(
        "admissibility.lambda.torus_invariance",
        ADMISSIBILITY_TOL,
        samples,
        |ctx, rng, _| {
            let v = over_pair(ctx, rng, |j, rng| {
                max_over(samples, || {
                    let p = sampling::sphere_point(rng, ctx.n);
                    let x = sampling::tangent(rng, &p);
                    let (a, b) = (angle(rng), angle(rng));
                    Ok(diff(
                        lambda_form(j, &torus_act(a, b, &p), &torus_push(a, b, &x))?,
                        lambda_form(j, &p, &x)?,
                    ))
                })
            })?;
            Ok((v, String::new()))
        },
    );
    r.run(
        "admissibility.lambda.orbit_vanishing",
        ADMISSIBILITY_TOL,
        samples,
        |ctx, rng, _| {
            let v = over_pair(ctx, rng, |j, rng| {
                max_over(samples, || {
                    let p = sampling::sphere_point(rng, ctx.n);
                    let z = ZVector::unit(angle(rng));
                    Ok(lambda_form(j, &p, &z_star(z, &p))?.max_abs())
                })
            })?;
            Ok((v, "λ(Z*) for unit Z".into()))
        },
    );
    r.run(
        "admissibility.eta.hopf_invariance",
        ADMISSIBILITY_TOL,
        samples,
        |ctx, rng, _| {
            let v = over_pair(ctx, rng, |j, rng| {
                max_over(samples, || {
                    let p = sampling::sphere_point(rng, ctx.n);
                    let x = sampling::tangent(rng, &p);
                    let tau = num_complex::Complex64::from_polar(1.0, angle(rng));
                    Ok(diff(
                        eta_form(j, &hopf_act(tau, &p), &x.rotate(tau))?,
                        eta_form(j, &p, &x)?,
                    ))
                })
            })?;
            Ok((v, "S¹-invariance".into()))
        },
    );
    r.run(
        "admissibility.eta.hopf_horizontal",
        ADMISSIBILITY_TOL,
        samples,
        |ctx, rng, _| {
            let v = over_pair(ctx, rng, |j, rng| {
                max_over(samples, || {
                    let p = sampling::sphere_point(rng, ctx.n);
                    Ok(eta_form(j, &p, &p.fiber())?.max_abs())
                })
            })?;
            Ok((v, "η(ip)".into()))
        },
    );
    r.run(
        "admissibility.eta.torus_invariance",
        ADMISSIBILITY_TOL,
        samples,
        |ctx, rng, _| {
            let v = over_pair(ctx, rng, |j, rng| {
                max_over(samples, || {
                    let p = sampling::sphere_point(rng, ctx.n);
                    let x = sampling::hopf_horizontal(rng, &p);
                    let (a, b) = (angle(rng), angle(rng));
                    Ok(diff(
                        eta_form(j, &torus_act(a, b, &p), &torus_push(a, b, &x))?,
                        eta_form(j, &p, &x)?,
                    ))
                })
            })?;
            Ok((v, String::new()))
        },
    );
    r.run(
        "admissibility.eta.orbit_vanishing",
        ADMISSIBILITY_TOL,
        samples,
        |ctx, rng, _| {
            let v = over_pair(ctx, rng, |j, rng| {
                max_over(samples, || {
                    let p = sampling::sphere_point(rng, ctx.n);
                    let a = eta_form(j, &p, &z_star_hopf_horizontal(1, &p))?.max_abs();
                    let b = eta_form(j, &p, &z_star_hopf_horizontal(2, &p))?.max_abs();
                    Ok(a.max(b))
                })
            })?;
            Ok((v, "η(Z_h,k)".into()))
        },
    );
    r.run(
        "admissibility.factorization",
        ADMISSIBILITY_TOL,
        samples,
        |ctx, rng, _| {
            let v = over_pair(ctx, rng, |j, rng| {
                max_over(samples, || {
                    let p = sampling::free_point(rng, ctx.n, 1e-3);
                    let x = sampling::hopf_horizontal(rng, &p);
                    let (h1, h2) = (z_star_hopf_horizontal(1, &p), z_star_hopf_horizontal(2, &p));
                    let lam_h = horizontalize(|v| lambda_form(j, &p, v), &x, [&h1, &h2])?;
                    let scale = p.r().norm_sqr() * p.s().norm_sqr();
                    Ok(diff(lam_h, eta_form(j, &p, &x)?.scale(scale)))
                })
            })?;
            Ok((v, "λ̄_h = |r|²|s|² η̄".into()))
        },
    );
}

fn run_metric_identities(r: &mut Runner, samples: usize) {
    for (label, manifold) in [("sphere", Manifold::Sphere), ("cpn", Manifold::CPn)] {
        r.run(
            &format!("metrics.volume.{label}"),
            METRIC_TOL,
            samples,
            |ctx, rng, _| {
                let mut worst = 0.0f64;
                for spec in specs(ctx, manifold)? {
                    worst = worst.max(volume_residual(&spec, rng, samples)?);
                }
                Ok((
                    worst,
                    "|det g / det g₀ − 1| on a g₀-orthonormal frame".into(),
                ))
            },
        );
        r.run(
            &format!("metrics.submersion.{label}"),
            METRIC_TOL,
            samples,
            |ctx, rng, _| {
                let mut worst = 0.0f64;
                for spec in specs(ctx, manifold)? {
                    worst = worst.max(submersion_residual(&spec, rng, samples)?);
                }
                Ok((
                    worst,
                    "g(X − λ(X)*, Y − λ(Y)*) = g₀(X, Y) on the horizontal frame".into(),
                ))
            },
        );
        r.run(
            &format!("metrics.torus_invariance.{label}"),
            METRIC_TOL,
            samples,
            |ctx, rng, _| {
                let mut worst = 0.0f64;
                for spec in specs(ctx, manifold)? {
                    worst = worst.max(torus_invariance_residual(&spec, rng, samples)?);
                }
                Ok((worst, String::new()))
            },
        );
        r.run(
            &format!("metrics.positive_definite.{label}"),
            0.0,
            samples,
            |ctx, rng, _| {
                let mut lo = f64::INFINITY;
                for spec in specs(ctx, manifold)? {
                    lo = lo.min(min_eigenvalue(&spec, rng, samples)?);
                }
                Ok((
                    (MIN_EIGENVALUE - lo).max(0.0),
                    format!("smallest Gram eigenvalue {lo:.6e}"),
                ))
            },
        );
    }
    r.run(
        "metrics.zh_gram",
        CLOSED_FORM_TOL,
        samples,
        |ctx, rng, _| {
            let spec = MetricSpec::cpn(ctx.j.clone(), ctx.n)?;
            let v = max_over(samples, || {
                let p = sampling::free_point(rng, ctx.n, 1e-3);
                let (r2, s2) = (p.r().norm_sqr(), p.s().norm_sqr());
                // the deformed metric keeps the g₀ values on the orbit directions
                let g = gram(&spec, &p, &spec.orbit_frame(&p))?;
                Ok((g.get(0, 0) - r2 * (1.0 - r2))
                    .abs()
                    .max((g.get(1, 1) - s2 * (1.0 - s2)).abs())
                    .max((g.get(0, 1) + r2 * s2).abs()))
            })?;
            Ok((v, "‖Z_h,1‖², ‖Z_h,2‖², ⟨Z_h,1, Z_h,2⟩".into()))
        },
    );
    r.run(
        "metrics.orbit_area",
        CLOSED_FORM_TOL,
        samples,
        |ctx, rng, _| {
            let v = max_over(samples, || {
                let p = sampling::free_point(rng, ctx.n, 1e-3);
                let frame = [z_star_hopf_horizontal(1, &p), z_star_hopf_horizontal(2, &p)];
                let g = metrics::gram_of(&frame);
                let det = g[(0, 0)] * g[(1, 1)] - g[(0, 1)] * g[(1, 0)];
                Ok((orbit_area_sq(&p)? - det).abs())
            })?;
            Ok((v, "|r|²|s|²(1−|r|²−|s|²) vs Gram determinant".into()))
        },
    );
    r.run(
        "metrics.orbit_angle",
        CLOSED_FORM_TOL,
        samples,
        |ctx, rng, _| {
            let v = max_over(samples, || {
                let a = rng.random_range(0.05..0.65);
                let p = sampling::shell_point(rng, ctx.n, a);
                let (h1, h2) = (z_star_hopf_horizontal(1, &p), z_star_hopf_horizontal(2, &p));
                let cos = h1.dot(&h2) / (h1.norm_sqr() * h2.norm_sqr()).sqrt();
                Ok((orbit_angle(a)? - cos.acos()).abs())
            })?;
            Ok((
                v,
                "arccos(−a²/(1−a²)) vs Gram angle on |r| = |s| = a".into(),
            ))
        },
    );
}

fn run_derivatives(r: &mut Runner, samples: usize) {
    r.run(
        "derivatives.d_eta",
        D_ETA_REL_TOL,
        samples,
        |ctx, rng, _| {
            let v = over_pair(ctx, rng, |j, rng| {
                max_over(samples, || {
                    let p = sampling::sphere_point(rng, ctx.n);
                    let (x, y) = (unit_tangent(rng, &p), unit_tangent(rng, &p));
                    let fd =
                        exterior_derivative_fd(|p, v| eta_form(j, p, v), &p, &x, &y, D_ETA_STEP)?;
                    let closed = d_eta(j, &p, &x, &y)?;
                    Ok(diff(fd, closed) / closed.max_abs().max(1.0))
                })
            })?;
            Ok((
                v,
                format!("relative to max(|dη(X,Y)|, 1), unit X, Y, h = {D_ETA_STEP:e}"),
            ))
        },
    );
    r.run(
        "derivatives.d_eta_restricted",
        RESTRICTED_TOL,
        samples,
        |ctx, rng, _| {
            let v = over_pair(ctx, rng, |j, rng| {
                max_over(samples, || {
                    let a = rng.random_range(0.05..0.65);
                    let p = sampling::shell_point(rng, ctx.n, a);
                    let (x, y) = (
                        sampling::shell_tangent(rng, &p),
                        sampling::shell_tangent(rng, &p),
                    );
                    Ok(diff(
                        d_eta_restricted(j, &p, &x, &y)?,
                        d_eta(j, &p, &x, &y)?,
                    ))
                })
            })?;
            Ok((
                v,
                "four-term vs six-term formula on shell-tangent data".into(),
            ))
        },
    );
    r.run(
        "derivatives.d_omega0",
        D_OMEGA_TOL,
        samples,
        |ctx, rng, _| {
            let (worst, size) = d_omega0_on_shells(ctx.n, samples, rng)?;
            Ok((
                worst,
                format!(
                    "finite differences vs −2⟨iX,Y⟩/|q|²·(Z1+Z2) (both ω₀ variants); \
                 max |dω₀^L| = {size:.3e}, so dω₀^L does not vanish"
                ),
            ))
        },
    );
}

/// Max deviation of finite-difference `dω₀` (and of the slotwise variant) from
/// the closed forms on shell-tangent pairs, and the largest `|dω₀^L|` seen.
pub fn d_omega0_on_shells<R: Rng>(n: usize, samples: usize, rng: &mut R) -> Result<(f64, f64)> {
    let diag = |p: &SpherePoint, v: &TangentVector| {
        let w = omega0_diagonal(p, &v.hopf_horizontal_part(p))?;
        Ok(ZValuedCovector::new(w.z1, w.z2))
    };
    let mut worst = 0.0f64;
    let mut size = 0.0f64;
    for _ in 0..samples {
        let a = rng.random_range(0.2..0.6);
        let p = sampling::shell_point(rng, n, a);
        let (x, y) = (
            sampling::shell_tangent(rng, &p),
            sampling::shell_tangent(rng, &p),
        );
        let fd = exterior_derivative_fd(omega0_form, &p, &x, &y, D_ETA_STEP)?;
        let closed = d_omega0_restricted(&p, &x, &y)?;
        let fd_diag = exterior_derivative_fd(diag, &p, &x, &y, D_ETA_STEP)?;
        let closed_diag = d_omega0_diagonal_restricted(&p, &x, &y)?;
        worst = worst.max(diff(fd, closed)).max(diff(fd_diag, closed_diag));
        size = size.max(fd.max_abs());
    }
    Ok((worst, size))
}

fn run_rp(r: &mut Runner, samples: usize) {
    r.run("rp.antipodal", ANTIPODAL_TOL, samples, |ctx, rng, _| {
        let m = ctx.n - 1;
        let v = over_pair(ctx, rng, |j, rng| {
            max_over(samples, || {
                let pt = sampling::rp_point(rng, m);
                let x = sampling::tangent(rng, &pt.as_sphere_point());
                Ok(diff(
                    rp_lambda(j, &pt.antipode(), &x.neg())?,
                    rp_lambda(j, &pt, &x)?,
                ))
            })
        })?;
        Ok((v, "λ(−p)(−X) = λ(p)(X)".into()))
    });
    r.run(
        "rp.lambda.torus_invariance",
        ADMISSIBILITY_TOL,
        samples,
        |ctx, rng, _| {
            let m = ctx.n - 1;
            let v = over_pair(ctx, rng, |j, rng| {
                max_over(samples, || {
                    let pt = sampling::rp_point(rng, m);
                    let x = sampling::tangent(rng, &pt.as_sphere_point());
                    let (a, b) = (angle(rng), angle(rng));
                    Ok(diff(
                        rp_lambda(j, &pt.torus_act(a, b), &rp_torus_push(a, b, &x))?,
                        rp_lambda(j, &pt, &x)?,
                    ))
                })
            })?;
            Ok((v, String::new()))
        },
    );
    r.run(
        "rp.lambda.orbit_vanishing",
        ADMISSIBILITY_TOL,
        samples,
        |ctx, rng, _| {
            let m = ctx.n - 1;
            let v = over_pair(ctx, rng, |j, rng| {
                max_over(samples, || {
                    let pt = sampling::rp_point(rng, m);
                    let z = ZVector::unit(angle(rng));
                    Ok(rp_lambda(j, &pt, &rp_z_star(z, &pt))?.max_abs())
                })
            })?;
            Ok((v, "λ(Z*) for unit Z".into()))
        },
    );
    r.run("rp.volume", METRIC_TOL, samples, |ctx, rng, _| {
        let mut worst = 0.0f64;
        for spec in specs(ctx, Manifold::RPodd)? {
            worst = worst.max(volume_residual(&spec, rng, samples)?);
        }
        Ok((worst, String::new()))
    });
    r.run("rp.submersion", METRIC_TOL, samples, |ctx, rng, _| {
        let mut worst = 0.0f64;
        for spec in specs(ctx, Manifold::RPodd)? {
            worst = worst.max(submersion_residual(&spec, rng, samples)?);
        }
        Ok((worst, String::new()))
    });
    r.run("rp.torus_invariance", METRIC_TOL, samples, |ctx, rng, _| {
        let mut worst = 0.0f64;
        for spec in specs(ctx, Manifold::RPodd)? {
            worst = worst.max(torus_invariance_residual(&spec, rng, samples)?);
        }
        Ok((worst, String::new()))
    });
    r.run("rp.positive_definite", 0.0, samples, |ctx, rng, _| {
        let mut lo = f64::INFINITY;
        for spec in specs(ctx, Manifold::RPodd)? {
            lo = lo.min(min_eigenvalue(&spec, rng, samples)?);
        }
        Ok((
            (MIN_EIGENVALUE - lo).max(0.0),
            format!("smallest Gram eigenvalue {lo:.6e}"),
        ))
    });
}

fn run_heatprobe(r: &mut Runner) -> Option<(heatprobe::CurvatureRun, heatprobe::CurvatureRun)> {
    let n = r.ctx.n;
    let fs = MetricSpec::cpn(JMapPair::zero(n - 1), n).expect("valid dimension");
    r.run(
        "heatprobe.fs_chart",
        FS_CHART_TOL,
        FS_CHART_POINTS,
        |_, rng, _| {
            let v = max_over(FS_CHART_POINTS, || {
                let p = sampling::sphere_point(rng, n);
                let (chart, x) = Chart::best_for(&p);
                let lifted = heatprobe::chart_metric(&fs, chart, &x)?;
                let pc: Vec<_> = x
                    .chunks(2)
                    .map(|c| num_complex::Complex64::new(c[0], c[1]))
                    .collect();
                let closed = metrics::fubini_study_chart(&pc)?;
                Ok((lifted.matrix() - closed.matrix()).abs().max())
            })?;
            Ok((v, "lifted chart frame vs closed form".into()))
        },
    );
    r.run(
        "heatprobe.fs_constancy",
        FS_CONSTANCY_TOL,
        FS_CURVATURE_SAMPLES,
        |_, _, seed| {
            let run =
                heatprobe::curvature_run(&fs, FS_CURVATURE_SAMPLES, seed, heatprobe::DEFAULT_STEP)?;
            let (lo, hi) = run.scalar_curvature_range();
            let mid = 0.5 * (lo + hi);
            Ok((
                (hi - lo) / mid.abs(),
                format!("Fubini–Study scal in [{lo:?}, {hi:?}]"),
            ))
        },
    );

    let config = r.ctx.config;
    let mc_seed = derive_seed(config.seed, "heatprobe.mc");
    let specs = [
        MetricSpec::cpn(r.ctx.j.clone(), n).expect("valid"),
        MetricSpec::cpn(r.ctx.j2.clone(), n).expect("valid"),
    ];
    // both metrics see the same sample points
    let runs: Result<Vec<_>> = specs
        .iter()
        .map(|s| heatprobe::curvature_run(s, config.mc_samples, mc_seed, heatprobe::DEFAULT_STEP))
        .collect();
    let runs = match runs {
        Ok(v) => v,
        Err(e) => {
            let msg = e.to_string();
            for (id, tol) in [
                ("heatprobe.volume", HEAT_DET_TOL),
                ("heatprobe.total_scalar_curvature", HEAT_Z_TOL),
            ] {
                r.checks.push(CheckResult::from_outcome(
                    id,
                    tol,
                    config.mc_samples,
                    mc_seed,
                    Err(Error::Config(msg.clone())),
                ));
            }
            return None;
        }
    };
    let (a, b) = (&runs[0], &runs[1]);
    let det = a.max_det_defect().max(b.max_det_defect());
    r.checks.push(CheckResult::measured(
        "heatprobe.volume",
        det,
        HEAT_DET_TOL,
        config.mc_samples,
        mc_seed,
        format!(
            "pointwise |det g / det g_FS − 1|; volumes {:?} ± {:.3e} and {:?} ± {:.3e}",
            a.volume.value, a.volume.std_error, b.volume.value, b.volume.std_error
        ),
    ));
    let (ea, eb) = (a.total_scalar_curvature, b.total_scalar_curvature);
    r.checks.push(CheckResult::measured(
        "heatprobe.total_scalar_curvature",
        ea.z_score(&eb),
        HEAT_Z_TOL,
        config.mc_samples,
        mc_seed,
        format!(
            "∫scal: {:?} ± {:.3e} (t) vs {:?} ± {:.3e} (t′); residual in combined standard errors; {} + {} redrawn samples",
            ea.value, ea.std_error, eb.value, eb.std_error, a.failures, b.failures
        ),
    ));
    let mut it = runs.into_iter();
    Some((it.next().expect("two runs"), it.next().expect("two runs")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(t: f64, tprime: f64) -> Config {
        Config {
            t,
            tprime,
            samples: 10,
            ..Config::default()
        }
    }

    #[test]
    fn mu_list_parsing() {
        assert_eq!(parse_mu_list("1,0;0,1;1,1;2,-1").unwrap(), default_mu());
        assert_eq!(parse_mu_list(" 3 , -2 ").unwrap(), vec![[3, -2]]);
        assert!(parse_mu_list("1;2").is_err());
        assert!(parse_mu_list("a,b").is_err());
    }

    #[test]
    fn config_validation() {
        assert!(Config::default().validate().is_ok());
        assert!(Config {
            n: 3,
            ..Config::default()
        }
        .validate()
        .is_err());
        assert!(Config {
            mu: vec![[0, 0]],
            ..Config::default()
        }
        .validate()
        .is_err());
        assert!(Config {
            t: f64::NAN,
            ..Config::default()
        }
        .validate()
        .is_err());
        let e: std::result::Result<Config, _> = serde_json::from_str(r#"{"tee": 1}"#);
        assert!(e.is_err());
        let c: Config = serde_json::from_str(r#"{"t": 1.0, "mu": [[1, 0]]}"#).unwrap();
        assert_eq!((c.t, c.n, c.samples), (1.0, 4, 100));
    }

    #[test]
    fn seeds_differ_per_check() {
        assert_ne!(derive_seed(42, "a"), derive_seed(42, "b"));
        assert_ne!(derive_seed(42, "a"), derive_seed(43, "a"));
        assert_eq!(derive_seed(42, "a"), derive_seed(42, "a"));
    }

    #[test]
    fn closed_forms_at_sample_values() {
        assert_eq!(family_obstruction_closed_form(PI / 2.0).round(), 1038.0);
        assert!(
            (family_obstruction_closed_form(PI / 2.0) - family_obstruction_closed_form(PI / 4.0)
                + 54.0)
                .abs()
                < 1e-9
        );
        let c = family_char_poly_closed_form(ZVector::Z2);
        assert_eq!(c[1], ONE * 21.0);
        assert_eq!(c[0], -I * 20.0);
    }

    #[test]
    fn default_pair_passes() {
        let cert = run_certification(&quick(PI / 2.0, PI / 4.0)).unwrap();
        assert_eq!(cert.verdict, Verdict::Pass, "{:#?}", cert.failures());
        let noneq = cert.check("pair.non_equivalence").unwrap();
        assert!(noneq.notes.contains("-54"), "{}", noneq.notes);
        assert!(cert.summary.contains("evidence of non-isometry"));
        assert_eq!(
            cert.check("heatprobe.volume").unwrap().status,
            Status::Skipped
        );
    }

    #[test]
    fn identical_parameters_are_not_certified() {
        let cert = run_certification(&quick(1.0, 1.0)).unwrap();
        assert_eq!(cert.verdict, Verdict::Fail);
        assert_eq!(cert.check("pair.isospectral").unwrap().status, Status::Pass);
        assert_eq!(
            cert.check("condition_i.mu[1,0]").unwrap().status,
            Status::Pass
        );
        assert_eq!(
            cert.check("pair.non_equivalence").unwrap().status,
            Status::Fail
        );
        assert!(cert.summary.contains("pair not certified non-equivalent"));
        assert_eq!(cert.exit_code(), 2);
    }

    #[test]
    fn nongeneric_parameter_fails_genericity() {
        let cert = run_certification(&quick(0.0, 1.0)).unwrap();
        let g = cert.check("family.genericity").unwrap();
        assert_eq!(g.status, Status::Fail);
        assert!(g.residual.unwrap() >= 1.0);
    }

    #[test]
    fn round_trip_and_determinism() {
        let cfg = quick(PI / 2.0, 1.0);
        let a = run_certification(&cfg).unwrap();
        let b = run_certification(&cfg).unwrap();
        assert_eq!(
            a.without_timestamp().to_json().unwrap(),
            b.without_timestamp().to_json().unwrap()
        );
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cert.json");
        emit_report(&a, &path).unwrap();
        assert_eq!(Certificate::read_json(&path).unwrap(), a);
    }

    #[test]
    fn tprime_dump_name() {
        assert_eq!(
            tprime_path(Path::new("/x/c.csv")),
            PathBuf::from("/x/c.tprime.csv")
        );
        assert_eq!(tprime_path(Path::new("c")), PathBuf::from("c.tprime"));
    }
}
