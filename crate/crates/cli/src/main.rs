use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use isospec_core::certify::{self, Config};
use isospec_core::jmaps::{self, JMapPair};
use isospec_core::Error;

const EXIT_FAIL: u8 = 2;
const EXIT_CONFIG: u8 = 3;
const EXIT_RUNTIME: u8 = 1;

#[derive(Parser)]
#[command(
    name = "isospec",
    version,
    about = "Isospectral metrics on spheres and projective spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check on the pair (j(t), j(t')) and write a certificate.
    Certify(CertifyArgs),
    /// Inspect j-map files.
    Jmap {
        #[command(subcommand)]
        command: JmapCommand,
    },
    /// Emit members of the su(3) family.
    Family {
        #[command(subcommand)]
        command: FamilyCommand,
    },
}

#[derive(Args)]
struct CertifyArgs {
    /// JSON config; flags given on the command line override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    t: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    tprime: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
    /// Dual weights, e.g. "1,0;0,1;1,1;2,-1".
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<String>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    heatprobe: bool,
    #[arg(long)]
    mc_samples: Option<usize>,
    /// Certificate path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// CSV of curvature samples for t; t' goes to <stem>.tprime.<ext>.
    #[arg(long)]
    dump_curvature: Option<PathBuf>,
}

#[derive(Subcommand)]
enum JmapCommand {
    /// Validate a j-map file and report its invariants.
    Verify {
        pair: PathBuf,
        /// Second file to test for isospectrality against the first.
        #[arg(long)]
        against: Option<PathBuf>,
        #[arg(long, default_value_t = 64)]
        samples: usize,
    },
}

#[derive(Subcommand)]
enum FamilyCommand {
    Emit {
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        /// Matrix size; values above 3 use the padded family.
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_CONFIG);
    }
    let result = match cli.command {
        Command::Certify(args) => certify_cmd(args),
        Command::Jmap {
            command:
                JmapCommand::Verify {
                    pair,
                    against,
                    samples,
                },
        } => verify_cmd(pair, against, samples),
        Command::Family {
            command: FamilyCommand::Emit { t, m, out },
        } => emit_cmd(t, m, out),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::Json { .. } | Error::Io { .. } => EXIT_CONFIG,
        _ => EXIT_RUNTIME,
    }
}

fn init_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("ISOSPEC_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("ISOSPEC_THREADS = {raw:?} is not a positive integer"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn build_config(args: CertifyArgs) -> Result<Config, Error> {
    let mut cfg = match &args.config {
        Some(path) => Config::from_json_file(path)?,
        None => Config::default(),
    };
    if let Some(t) = args.t {
        cfg.t = t;
    }
    if let Some(t) = args.tprime {
        cfg.tprime = t;
    }
    if let Some(n) = args.n {
        cfg.n = n;
    }
    if let Some(mu) = &args.mu {
        cfg.mu = certify::parse_mu_list(mu)?;
    }
    if let Some(s) = args.samples {
        cfg.samples = s;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if args.heatprobe {
        cfg.heatprobe = true;
    }
    if let Some(s) = args.mc_samples {
        cfg.mc_samples = s;
    }
    if args.out.is_some() {
        cfg.out = args.out;
    }
    if args.dump_curvature.is_some() {
        cfg.dump_curvature = args.dump_curvature;
    }
    if args.config.is_none() && (args.t.is_none() || args.tprime.is_none()) {
        return Err(Error::Config(
            "--t and --tprime are required without --config".into(),
        ));
    }
    cfg.validate()?;
    Ok(cfg)
}

fn certify_cmd(args: CertifyArgs) -> Result<u8, Error> {
    let cfg = build_config(args)?;
    let cert = certify::run_certification(&cfg)?;
    match &cfg.out {
        Some(path) => certify::emit_report(&cert, path)?,
        None => println!("{}", cert.to_json()?),
    }
    for c in cert.failures() {
        eprintln!("FAIL {}: {}", c.id, c.notes);
    }
    eprintln!("{}", cert.summary);
    Ok(cert.exit_code() as u8)
}

fn verify_cmd(pair: PathBuf, against: Option<PathBuf>, samples: usize) -> Result<u8, Error> {
    let j = JMapPair::read_json(&pair)?;
    let mut report = serde_json::json!({
        "file": pair.display().to_string(),
        "m": j.m(),
        "obstruction": jmaps::equivalence_obstruction(&j),
        "commutant_dim": jmaps::commutant_dim(&j),
        "generic": jmaps::is_generic(&j),
    });
    let mut code = 0;
    if let Some(other) = against {
        let j2 = JMapPair::read_json(&other)?;
        let rep = jmaps::is_isospectral_pair(&j, &j2, samples)?;
        let delta = jmaps::equivalence_obstruction(&j) - jmaps::equivalence_obstruction(&j2);
        report["against"] = serde_json::json!({
            "file": other.display().to_string(),
            "isospectral": rep.isospectral,
            "max_residual": rep.max_residual,
            "samples": rep.samples,
            "obstruction_delta": delta,
        });
        if !rep.isospectral {
            code = EXIT_FAIL;
        }
    }
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("report serializes")
    );
    Ok(code)
}

fn emit_cmd(t: f64, m: usize, out: PathBuf) -> Result<u8, Error> {
    if m < 3 {
        return Err(Error::Config(format!(
            "m = {m} but the family needs m >= 3"
        )));
    }
    if !t.is_finite() {
        return Err(Error::Config(format!("t = {t} must be finite")));
    }
    let j = if m == 3 {
        jmaps::schueth_family(t)
    } else {
        jmaps::padded_family(t, m)
    };
    j.write_json(&out)?;
    Ok(0)
}
