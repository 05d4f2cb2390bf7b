use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use isogeo::families::{principal_spectrum, Family, FamilySpec, DEFAULT_CLUSTER_TOL};
use isogeo::kac::bipoly::{ratio, Rat};
use isogeo::report::{CheckResult, Report};
use isogeo::runner::{self, RunConfig};
use isogeo::spaceforms::mix_seed;
use isogeo::{Error, Result};

#[derive(Parser)]
#[command(
    name = "isogeo",
    version,
    about = "Verification suite for isoparametric hypersurfaces in products of space forms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Base seed for all sampled checks
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Sample count for the identity checks
    #[arg(long, global = true, default_value_t = 1000)]
    samples: usize,
    /// Residual tolerance; overrides ISOGEO_TOL_RESIDUAL and the 1e-9 default
    #[arg(long, global = true)]
    tol_residual: Option<f64>,
    /// Worker threads (default: all cores); results are ordered either way
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Generate or verify anticommuting matrix systems
    Clifford {
        #[command(subcommand)]
        action: CliffordCmd,
    },
    /// Defining identities, angle, spectrum, rigidity and slice checks
    Verify {
        #[command(flatten)]
        fam: FamilyArgs,
    },
    /// Principal curvature clusters against the closed forms
    Spectrum {
        #[command(flatten)]
        fam: FamilyArgs,
    },
    /// Focal distances, curvature evolution, volume balance, tangential flow
    Flow {
        #[command(flatten)]
        fam: FamilyArgs,
    },
    /// Exact ladder-matrix identities
    Kac {
        #[command(subcommand)]
        action: KacCmd,
    },
    /// Exact series expansions, cubics and the multiplicity enumeration
    Series {
        #[command(subcommand)]
        action: SeriesCmd,
    },
    /// Every battery over the default instance grids
    All,
}

#[derive(Subcommand)]
enum CliffordCmd {
    /// Emit a system as JSON {p, k, l, e, pmats?}
    Gen {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        k: usize,
    },
    /// Check the defining relations, either for generated or loaded matrices
    Verify {
        #[arg(long)]
        p: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        /// JSON file produced by `clifford gen`
        #[arg(long, value_name = "FILE", conflicts_with_all = ["p", "k"])]
        input: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum KacCmd {
    /// Exact row-power, determinant, coefficient and rank identities
    Verify {
        #[arg(long, requires = "n")]
        m: Option<usize>,
        #[arg(long, requires = "m")]
        n: Option<usize>,
        /// Highest matrix power to compare (default 2mn+4)
        #[arg(long)]
        kmax: Option<usize>,
        /// Ladder parameter for the rank checks, as a rational like -1/2
        #[arg(long, default_value = "2")]
        tau1: String,
        #[arg(long, default_value = "3")]
        tau2: String,
    },
}

#[derive(Subcommand)]
enum SeriesCmd {
    /// Expansion tables, summation identity, cubics, balanced pairs
    Check,
}

#[derive(Args)]
struct FamilyArgs {
    /// Family tag: mt, mhat, graph, mtf; without further flags, runs the
    /// whole default grid for that family
    #[arg(long)]
    family: Option<String>,
    /// JSON instance description {tag, params...}; overrides inline flags
    #[arg(long, value_name = "FILE")]
    spec: Option<PathBuf>,
    /// Sphere dimension parameter (mt, mtf)
    #[arg(long)]
    n: Option<usize>,
    /// Hyperbolic dimension parameter (graph)
    #[arg(long)]
    m: Option<usize>,
    /// Level value
    #[arg(long)]
    t: Option<f64>,
    /// Slope parameter (graph)
    #[arg(long)]
    a: Option<f64>,
    /// Symmetric-matrix count (mhat)
    #[arg(long)]
    p: Option<usize>,
    /// Module multiplicity (mhat)
    #[arg(long)]
    k: Option<usize>,
    /// Base field for mtf: r, c, h
    #[arg(long)]
    field: Option<String>,
    /// Lightlike direction for graph, comma separated, length m+1
    #[arg(long, value_delimiter = ',')]
    u: Option<Vec<f64>>,
    /// Use the decreasing height branch (graph)
    #[arg(long)]
    negative_branch: bool,
}

impl FamilyArgs {
    fn inline(&self) -> bool {
        self.n.is_some()
            || self.m.is_some()
            || self.t.is_some()
            || self.a.is_some()
            || self.p.is_some()
            || self.k.is_some()
            || self.field.is_some()
            || self.u.is_some()
            || self.negative_branch
    }

    /// Missing inline parameters fall back to a representative instance so
    /// that e.g. `verify --family mt --n 4` works without spelling out t.
    fn fill_defaults(&self, spec: &mut FamilySpec) {
        match spec.tag.as_str() {
            "mt" => {
                spec.n.get_or_insert(3);
                spec.t.get_or_insert(0.2);
            }
            "mhat" => {
                spec.p.get_or_insert(2);
                spec.k.get_or_insert(2);
                spec.t.get_or_insert(0.5);
            }
            "graph" | "graphsh" | "graph_sh" => {
                spec.m.get_or_insert(3);
                spec.a.get_or_insert(1.0);
                spec.t.get_or_insert(0.25);
            }
            "mtf" => {
                spec.field.get_or_insert_with(|| "c".into());
                spec.n.get_or_insert(2);
                spec.t.get_or_insert(0.5);
            }
            _ => {}
        }
    }

    fn resolve(&self) -> Result<Vec<Family>> {
        if let Some(path) = &self.spec {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))?;
            let spec: FamilySpec = serde_json::from_str(&text)
                .map_err(|e| Error::Usage(format!("bad family json: {e}")))?;
            return Ok(vec![spec.build()?]);
        }
        let tag = self
            .family
            .as_deref()
            .ok_or_else(|| Error::Usage("pass --family <mt|mhat|graph|mtf> or --spec <file>".into()))?
            .to_ascii_lowercase();
        if !self.inline() {
            return runner::families_by_tag(&tag);
        }
        let mut spec = FamilySpec {
            tag,
            n: self.n,
            m: self.m,
            t: self.t,
            a: self.a,
            p: self.p,
            k: self.k,
            field: self.field.clone(),
            u: self.u.clone(),
            negative_branch: self.negative_branch.then_some(true),
            clifford_ref: None,
        };
        self.fill_defaults(&mut spec);
        Ok(vec![spec.build()?])
    }
}

fn parse_rational(s: &str) -> Result<Rat> {
    let parse_int = |part: &str| -> Result<i64> {
        part.trim()
            .parse::<i64>()
            .map_err(|_| Error::Usage(format!("'{s}' is not a rational (use a or a/b)")))
    };
    match s.split_once('/') {
        None => Ok(ratio(parse_int(s)?, 1)),
        Some((num, den)) => {
            let d = parse_int(den)?;
            if d == 0 {
                return Err(Error::Usage("rational denominator must be nonzero".into()));
            }
            Ok(ratio(parse_int(num)?, d))
        }
    }
}

fn spectrum_checks(cfg: &RunConfig, fam: &Family) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let instance = fam.instance_label();
    if let Err(e) = fam.validate() {
        out.push(CheckResult::failed("spectrum_closed_form", &instance, &e.to_string()));
        return out;
    }
    let closed = fam.closed_form_spectrum();
    let count = cfg.samples.clamp(1, 25);
    let mut worst = 0.0f64;
    let mut mults_ok = true;
    let mut measured = String::new();
    for i in 0..count {
        let res = fam
            .sample_on_level(mix_seed(cfg.seed, i as u64))
            .and_then(|p| principal_spectrum(fam, &p, DEFAULT_CLUSTER_TOL));
        match res {
            Ok(spec) => {
                if measured.is_empty() {
                    let parts: Vec<String> = spec
                        .clusters
                        .iter()
                        .map(|(v, m)| format!("{v:.9}x{m}"))
                        .collect();
                    measured = parts.join(", ");
                }
                if spec.clusters.len() != closed.len() {
                    mults_ok = false;
                    worst = f64::INFINITY;
                    continue;
                }
                for ((v, mv), (cv, cm)) in spec.clusters.iter().zip(&closed) {
                    worst = worst.max((v - cv).abs());
                    if mv != cm {
                        mults_ok = false;
                    }
                }
            }
            Err(e) => {
                out.push(CheckResult::failed("spectrum_closed_form", &instance, &e.to_string()));
                return out;
            }
        }
    }
    let expected: Vec<String> = closed.iter().map(|(v, m)| format!("{v:.9}x{m}")).collect();
    out.push(
        CheckResult::numeric("spectrum_closed_form", &instance, worst, 1e-6)
            .and_require(mults_ok)
            .with_witness(format!(
                "measured: [{measured}] expected: [{}]",
                expected.join(", ")
            )),
    );
    out
}

fn run(cli: &Cli) -> Result<u8> {
    if let Some(w) = cli.workers {
        if w == 0 {
            return Err(Error::Usage("--workers must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
            .map_err(|e| Error::Usage(format!("cannot configure worker pool: {e}")))?;
    }
    if cli.samples == 0 {
        return Err(Error::Usage("--samples must be positive".into()));
    }
    let tol_residual = match cli.tol_residual {
        Some(v) if v > 0.0 => v,
        Some(v) => return Err(Error::Usage(format!("--tol-residual must be positive, got {v}"))),
        None => runner::default_residual_tolerance(),
    };
    let cfg = RunConfig {
        samples: cli.samples,
        seed: cli.seed,
        tol_residual,
    };

    let checks: Vec<CheckResult> = match &cli.command {
        Command::Clifford { action: CliffordCmd::Gen { p, k } } => {
            let sys = isogeo::clifford::gen_system(*p, *k)?;
            let text = serde_json::to_string_pretty(&sys.to_dto())
                .map_err(|e| Error::Numerical(format!("serialization failed: {e}")))?;
            emit(cli, &text)?;
            return Ok(0);
        }
        Command::Clifford { action: CliffordCmd::Verify { p, k, input } } => {
            let sys = match (input, p, k) {
                (Some(path), _, _) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))?;
                    let dto: isogeo::clifford::CliffordSystemDto = serde_json::from_str(&text)
                        .map_err(|e| Error::Usage(format!("bad clifford json: {e}")))?;
                    isogeo::clifford::CliffordSystem::from_dto(&dto)?
                }
                (None, Some(p), Some(k)) => isogeo::clifford::gen_system(*p, *k)?,
                _ => return Err(Error::Usage("pass --p and --k, or --input <file>".into())),
            };
            let rel = isogeo::clifford::verify_system(&sys);
            let instance = format!("p={} k={} l={}", sys.p, sys.k, sys.l);
            rel.checks
                .iter()
                .map(|c| CheckResult::exact(&format!("clifford_{}", c.name), &instance, c.pass))
                .collect()
        }
        Command::Verify { fam } => {
            let mut checks = Vec::new();
            for f in fam.resolve()? {
                checks.extend(runner::family_battery(&cfg, &f));
            }
            checks
        }
        Command::Spectrum { fam } => {
            let mut checks = Vec::new();
            for f in fam.resolve()? {
                checks.extend(spectrum_checks(&cfg, &f));
            }
            checks
        }
        Command::Flow { fam } => {
            let mut checks = Vec::new();
            for f in fam.resolve()? {
                checks.extend(runner::flow_battery(&cfg, &f));
            }
            checks
        }
        Command::Kac { action: KacCmd::Verify { m, n, kmax, tau1, tau2 } } => match (m, n) {
            (Some(m), Some(n)) => {
                let t1 = parse_rational(tau1)?;
                let t2 = parse_rational(tau2)?;
                let kmax = kmax.unwrap_or(2 * m * n + 4);
                runner::kac_pair_battery(*m, *n, kmax, &t1, &t2)?
            }
            _ => runner::kac_battery(&cfg),
        },
        Command::Series { action: SeriesCmd::Check } => runner::series_battery(&cfg),
        Command::All => {
            let report = runner::run_all(&cfg);
            let ok = report.all_pass();
            emit_report(cli, &report)?;
            return Ok(if ok { 0 } else { 1 });
        }
    };

    let mut report = Report::new(cfg.seed);
    report.extend(checks);
    report.sort();
    let ok = report.all_pass();
    emit_report(cli, &report)?;
    Ok(if ok { 0 } else { 1 })
}

fn emit_report(cli: &Cli, report: &Report) -> Result<()> {
    let text = match cli.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    emit(cli, &text)
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, format!("{text}\n"))
            .map_err(|e| Error::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
