//! Command-line front end: verification suites, parameter sweeps, and
//! construction export. Every run emits a `{command, params, checks,
//! summary}` report (JSON or CSV) and exits 0 when nothing failed, 1 on any
//! failure, 2 on usage errors. Runs are deterministic given the seed.

pub mod checks;
pub mod report;

use checks::{field_from_q, DistanceParams, EnergyParams, ExtensionParams};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fflab::distance::{self, SharpKind};
use fflab::field::Fq;
use report::{Check, ConstructionPayload, Report};
use std::collections::BTreeMap;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "fflab", version, about = "Exact checks for harmonic analysis over F_q")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report to this path instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one verification suite.
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
    /// Build a construction and verify it in-process.
    Construct {
        #[command(subcommand)]
        what: ConstructCmd,
    },
    /// Run suites over a grid of parameters.
    Sweep(SweepArgs),
    /// Re-render an existing JSON report.
    Report(ReportArgs),
}

#[derive(Debug, Subcommand)]
pub enum Suite {
    /// Gauss sum closed forms and character identities.
    Gauss {
        /// Largest field order checked.
        #[arg(long, default_value_t = 121)]
        qmax: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Transforms: Plancherel, inversion, closed-form variety transforms.
    Fourier {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        d: usize,
        /// Sphere radius (all radii when omitted).
        #[arg(long)]
        j: Option<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Additive energy bounds, zero-pair counts, incidences.
    Energy {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Configured constant for the `<<`-type bounds.
        #[arg(long, default_value_t = 8.0)]
        ctest: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Association scheme axioms, degree, spectrum, edge bound.
    Scheme {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Distance-set theorems, second moments, sharpness constructions.
    Distance {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        j: Option<u32>,
        #[arg(long, default_value_t = 300)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Extension/restriction norm-ratio probes and exponent arithmetic.
    Extension {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        j: Option<u32>,
        #[arg(long, default_value_t = 40)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8.0)]
        ctest: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum ConstructCmd {
    /// Span-plus-shells sharpness pair with `Delta(A, B) = R` exactly.
    Sharp {
        /// Construction kind.
        #[arg(long, value_enum)]
        kind: SharpKindArg,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        d: usize,
        /// Sphere radius (sphere kind only; defaults to 1).
        #[arg(long)]
        j: Option<u32>,
        /// Number of radii in R.
        #[arg(long, default_value_t = 2)]
        rsize: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SharpKindArg {
    Para,
    Sphere,
    Zerosphere,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Comma-separated field orders.
    #[arg(long, value_delimiter = ',', required = true)]
    pub q: Vec<u64>,
    /// Comma-separated dimensions.
    #[arg(long, value_delimiter = ',', required = true)]
    pub d: Vec<usize>,
    /// Comma-separated scheme parameters (adds scheme jobs).
    #[arg(long, value_delimiter = ',')]
    pub m: Vec<usize>,
    /// Suites to run per grid point.
    #[arg(long, value_delimiter = ',', default_values_t = [SweepSuite::Fourier, SweepSuite::Energy, SweepSuite::Distance, SweepSuite::Extension])]
    pub suites: Vec<SweepSuite>,
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 8.0)]
    pub ctest: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepSuite {
    Fourier,
    Energy,
    Distance,
    Extension,
    Scheme,
}

impl std::fmt::Display for SweepSuite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SweepSuite::Fourier => "fourier",
            SweepSuite::Energy => "energy",
            SweepSuite::Distance => "distance",
            SweepSuite::Extension => "extension",
            SweepSuite::Scheme => "scheme",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Path of an existing JSON report.
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn params(entries: &[(&str, String)]) -> BTreeMap<String, String> {
    entries.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

/// Runs a parsed command and returns the report plus the chosen output args.
pub fn execute(command: Command) -> Result<(Report, Format, Option<PathBuf>), String> {
    match command {
        Command::Verify { suite } => execute_verify(suite),
        Command::Construct { what } => execute_construct(what),
        Command::Sweep(args) => execute_sweep(args),
        Command::Report(args) => execute_report(args),
    }
}

fn execute_verify(suite: Suite) -> Result<(Report, Format, Option<PathBuf>), String> {
    let (report, output) = match suite {
        Suite::Gauss { qmax, output } => {
            let mut r = Report::new("verify gauss", params(&[("qmax", qmax.to_string())]));
            for c in checks::suite_gauss(qmax) {
                r.push(c);
            }
            (r, output)
        }
        Suite::Fourier { q, d, j, seed, output } => {
            let f = field_from_q(q)?;
            let j = j.map(|j| validate_elem(&f, j)).transpose()?;
            let mut r = Report::new(
                "verify fourier",
                params(&[
                    ("q", q.to_string()),
                    ("d", d.to_string()),
                    ("j", j.map(|j| j.0.to_string()).unwrap_or_else(|| "all".into())),
                    ("seed", seed.to_string()),
                ]),
            );
            for c in checks::suite_fourier(&f, d, j, seed) {
                r.push(c);
            }
            (r, output)
        }
        Suite::Energy { q, d, trials, seed, ctest, output } => {
            let f = field_from_q(q)?;
            let prm = EnergyParams { trials, seed, c_test: ctest, ..Default::default() };
            let mut r = Report::new(
                "verify energy",
                params(&[
                    ("q", q.to_string()),
                    ("d", d.to_string()),
                    ("trials", trials.to_string()),
                    ("seed", seed.to_string()),
                    ("ctest", ctest.to_string()),
                ]),
            );
            for c in checks::suite_energy(&f, d, &prm) {
                r.push(c);
            }
            (r, output)
        }
        Suite::Scheme { q, m, trials, seed, output } => {
            let f = field_from_q(q)?;
            let mut r = Report::new(
                "verify scheme",
                params(&[
                    ("q", q.to_string()),
                    ("m", m.to_string()),
                    ("trials", trials.to_string()),
                    ("seed", seed.to_string()),
                ]),
            );
            for c in checks::suite_scheme(&f, m, trials, seed) {
                r.push(c);
            }
            (r, output)
        }
        Suite::Distance { q, d, j, trials, seed, output } => {
            let f = field_from_q(q)?;
            let j = j.map(|j| validate_elem(&f, j)).transpose()?;
            let prm = DistanceParams { trials, seed };
            let mut r = Report::new(
                "verify distance",
                params(&[
                    ("q", q.to_string()),
                    ("d", d.to_string()),
                    ("j", j.map(|j| j.0.to_string()).unwrap_or_else(|| "default".into())),
                    ("trials", trials.to_string()),
                    ("seed", seed.to_string()),
                ]),
            );
            for c in checks::suite_distance(&f, d, j, &prm) {
                r.push(c);
            }
            (r, output)
        }
        Suite::Extension { q, d, j, trials, seed, ctest, output } => {
            let f = field_from_q(q)?;
            let j = j.map(|j| validate_elem(&f, j)).transpose()?;
            let prm = ExtensionParams { trials, seed, c_test: ctest };
            let mut r = Report::new(
                "verify extension",
                params(&[
                    ("q", q.to_string()),
                    ("d", d.to_string()),
                    ("j", j.map(|j| j.0.to_string()).unwrap_or_else(|| "default".into())),
                    ("trials", trials.to_string()),
                    ("seed", seed.to_string()),
                    ("ctest", ctest.to_string()),
                ]),
            );
            for c in checks::suite_extension(&f, d, j, &prm) {
                r.push(c);
            }
            (r, output)
        }
    };
    Ok((report, output.format, output.out))
}

fn validate_elem(f: &fflab::FiniteField, v: u32) -> Result<Fq, String> {
    if v >= f.q() {
        return Err(format!("element {v} out of range for q = {}", f.q()));
    }
    Ok(Fq(v))
}

fn execute_construct(what: ConstructCmd) -> Result<(Report, Format, Option<PathBuf>), String> {
    let ConstructCmd::Sharp { kind, q, d, j, rsize, output } = what;
    let f = field_from_q(q)?;
    let sharp_kind = match kind {
        SharpKindArg::Para => SharpKind::Paraboloid,
        SharpKindArg::Sphere => {
            let j = validate_elem(&f, j.unwrap_or(1))?;
            SharpKind::Sphere(j)
        }
        SharpKindArg::Zerosphere => SharpKind::ZeroSphere,
    };
    let kind_name = match kind {
        SharpKindArg::Para => "para",
        SharpKindArg::Sphere => "sphere",
        SharpKindArg::Zerosphere => "zerosphere",
    };
    let mut r = Report::new(
        "construct sharp",
        params(&[
            ("kind", kind_name.to_string()),
            ("q", q.to_string()),
            ("d", d.to_string()),
            ("j", j.map(|j| j.to_string()).unwrap_or_else(|| "-".into())),
            ("rsize", rsize.to_string()),
        ]),
    );

    let built = distance::sharp_construction(&f, sharp_kind, d, rsize).map_err(|e| e.to_string())?;
    let check = Check::start(format!("sharpness[{kind_name},q={q},d={d},rsize={rsize}]"));
    match distance::verify_sharp_construction(&f, &built) {
        Ok(profile) => {
            r.push(check.done_exact(true, profile.delta_size() as u128, rsize as u128));
        }
        Err(e) => {
            let mut rec = check.done_exact(false, 0, rsize as u128);
            rec.note = Some(e.to_string());
            r.push(rec);
        }
    }

    const POINT_DUMP_CAP: usize = 1000;
    let coords_of = |s: &fflab::PointSet| -> Option<Vec<Vec<u32>>> {
        if s.len() <= POINT_DUMP_CAP {
            Some(s.coords(&f).into_iter().map(|p| p.into_iter().map(|c| c.0).collect()).collect())
        } else {
            None
        }
    };
    r.construction = Some(ConstructionPayload {
        kind: kind_name.to_string(),
        q: f.q(),
        d,
        a_size: built.a.len() as u64,
        b_size: built.b.len() as u64,
        radii: built.radii.iter().map(|r| r.0).collect(),
        span_dim: built.span_dim,
        section_dim: built.section_dim,
        epsilon_implied: report::sig12(built.epsilon_implied),
        a_points: coords_of(&built.a),
        b_points: coords_of(&built.b),
    });
    Ok((r, output.format, output.out))
}

fn execute_sweep(args: SweepArgs) -> Result<(Report, Format, Option<PathBuf>), String> {
    use rayon::prelude::*;

    #[derive(Clone)]
    enum Job {
        Qd(SweepSuite, u64, usize),
        Qm(u64, usize),
    }

    let mut jobs: Vec<Job> = Vec::new();
    for &q in &args.q {
        for &d in &args.d {
            for &s in &args.suites {
                if s == SweepSuite::Scheme {
                    continue;
                }
                jobs.push(Job::Qd(s, q, d));
            }
        }
        for &m in &args.m {
            jobs.push(Job::Qm(q, m));
        }
    }

    let trials = args.trials;
    let ctest = args.ctest;
    let seed = args.seed;
    // one worker per job, merged in job-index order for determinism
    let results: Vec<Result<Vec<report::CheckRecord>, String>> = jobs
        .par_iter()
        .enumerate()
        .map(|(idx, job)| {
            let job_seed = seed ^ (idx as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
            match job {
                Job::Qd(suite, q, d) => {
                    let f = field_from_q(*q)?;
                    Ok(match suite {
                        SweepSuite::Fourier => checks::suite_fourier(&f, *d, None, job_seed),
                        SweepSuite::Energy => {
                            let prm = EnergyParams {
                                trials,
                                seed: job_seed,
                                c_test: ctest,
                                ..Default::default()
                            };
                            checks::suite_energy(&f, *d, &prm)
                        }
                        SweepSuite::Distance => {
                            let prm = DistanceParams { trials, seed: job_seed };
                            checks::suite_distance(&f, *d, None, &prm)
                        }
                        SweepSuite::Extension => {
                            let prm =
                                ExtensionParams { trials, seed: job_seed, c_test: ctest };
                            checks::suite_extension(&f, *d, None, &prm)
                        }
                        SweepSuite::Scheme => unreachable!("scheme jobs use m"),
                    })
                }
                Job::Qm(q, m) => {
                    let f = field_from_q(*q)?;
                    Ok(checks::suite_scheme(&f, *m, trials, job_seed))
                }
            }
        })
        .collect();

    let mut r = Report::new(
        "sweep",
        params(&[
            ("q", args.q.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")),
            ("d", args.d.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")),
            ("m", args.m.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")),
            (
                "suites",
                args.suites.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(","),
            ),
            ("trials", trials.to_string()),
            ("seed", seed.to_string()),
            ("ctest", ctest.to_string()),
        ]),
    );
    for res in results {
        for c in res? {
            r.push(c);
        }
    }
    Ok((r, args.output.format, args.output.out))
}

fn execute_report(args: ReportArgs) -> Result<(Report, Format, Option<PathBuf>), String> {
    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| format!("cannot read {}: {e}", args.input.display()))?;
    let report: Report =
        serde_json::from_str(&text).map_err(|e| format!("invalid report JSON: {e}"))?;
    Ok((report, args.output.format, args.output.out))
}

/// Renders and writes the report; returns the process exit code.
pub fn emit(report: &Report, format: Format, out: Option<&PathBuf>) -> i32 {
    let text = match format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("cannot write {}: {e}", path.display());
                return 2;
            }
        }
        None => println!("{text}"),
    }
    report.exit_code()
}
