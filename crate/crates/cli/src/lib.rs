//! Command implementations behind the `cartan` binary.
//!
//! Every command produces a [`Report`] (the JSON written by `--json` and
//! `--out`) and a human-readable summary. Exit codes: 0 pass, 1 fail,
//! 2 malformed input or exceeded caps, 3 classifier disagreement.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use cartan_core::domain::{
    on_shilov, perturb_off_shilov, sample_shilov_with, shilov_defect, DomainDescriptor,
};
use cartan_core::hereditary::identity_set;
use cartan_core::io::{MatrixFile, ModelFile, TupleFile};
use cartan_core::lifting::{check_intertwiner, intertwiner_space, LiftCheck};
use cartan_core::linalg::haar::complex_normal;
use cartan_core::linalg::{
    seeded_rng, youla_canonical, youla_residual, ComplexMatrix, Spectrum, C64,
};
use cartan_core::verify::{
    classify_identities, classify_spectral, verify_equivalence, ConstraintResidual,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_MALFORMED: i32 = 2;
pub const EXIT_DISAGREE: i32 = 3;

/// Rendered polynomials longer than this are cut in text output.
const EXPLAIN_WIDTH: usize = 240;

#[derive(Debug, Parser)]
#[command(
    name = "cartan",
    version,
    about = "Cartan-domain isometry checks for commuting matrix tuples"
)]
pub struct Cli {
    /// Print the JSON report on stdout instead of the text summary.
    #[arg(long, global = true)]
    pub json: bool,
    /// Numerical tolerance.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample Shilov boundary points, optionally scaled into the interior.
    Sample(SampleArgs),
    /// Classify a tuple file spectrally, by identities, or both.
    Classify(ClassifyArgs),
    /// Random sweep comparing the spectral and identity classifiers.
    Equiv(EquivArgs),
    /// Unitary congruence canonical form of an antisymmetric matrix.
    Canonical(CanonicalArgs),
    /// Lift every intertwiner between two atomic models.
    Lift(LiftArgs),
    /// List the identity set of a domain.
    Explain(ExplainArgs),
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long)]
    pub domain: String,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    /// Multiply every sample by this factor in (0, 1).
    #[arg(long)]
    pub off_shilov_scale: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Spectral,
    Identities,
    Both,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// Defaults to the descriptor stored in the file.
    #[arg(long)]
    pub domain: Option<String>,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Both)]
    pub mode: Mode,
}

#[derive(Debug, Args)]
pub struct EquivArgs {
    #[arg(long)]
    pub domain: String,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
}

#[derive(Debug, Args)]
pub struct CanonicalArgs {
    #[arg(long)]
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct LiftArgs {
    #[arg(long)]
    pub model_s: PathBuf,
    #[arg(long)]
    pub model_t: PathBuf,
}

#[derive(Debug, Args)]
pub struct ExplainArgs {
    #[arg(long)]
    pub domain: String,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] cartan_core::Error),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed JSON in {path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("{0}")]
    Usage(String),
}

type CliResult<T> = std::result::Result<T, CliError>;

/// The machine-readable record of one invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: Vec<String>,
    pub seed: Option<u64>,
    pub tol: f64,
    pub results: Value,
    pub summary: Value,
    pub exit_status: i32,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub text: String,
}

impl Outcome {
    pub fn exit_status(&self) -> i32 {
        self.report.exit_status
    }
}

struct Done {
    results: Value,
    summary: Value,
    text: String,
    exit: i32,
}

/// Runs a parsed command line. `argv` is echoed into the report.
pub fn execute(cli: &Cli, argv: &[String]) -> Outcome {
    let result = match &cli.command {
        Command::Sample(a) => cmd_sample(a, cli),
        Command::Classify(a) => cmd_classify(a, cli),
        Command::Equiv(a) => cmd_equiv(a, cli),
        Command::Canonical(a) => cmd_canonical(a, cli),
        Command::Lift(a) => cmd_lift(a, cli),
        Command::Explain(a) => cmd_explain(a),
    };
    let done = result.unwrap_or_else(|e| Done {
        results: Value::Null,
        summary: json!({ "error": e.to_string() }),
        text: format!("error: {e}"),
        exit: EXIT_MALFORMED,
    });
    Outcome {
        report: Report {
            command: argv.iter().skip(1).cloned().collect(),
            seed: cli.seed,
            tol: cli.tol,
            results: done.results,
            summary: done.summary,
            exit_status: done.exit,
        },
        text: done.text,
    }
}

/// Parses and runs `argv` (program name first). Parse failures come back as
/// the clap error so the caller decides how to print them.
pub fn run<I, S>(argv: I) -> Result<Outcome, clap::Error>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = Cli::try_parse_from(&argv)?;
    Ok(execute(&cli, &argv))
}

fn descriptor(s: &str) -> CliResult<DomainDescriptor> {
    Ok(s.parse()?)
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.into(),
        source,
    })
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn fmt_c(z: C64) -> String {
    if z.im >= 0.0 {
        format!("{:.6}+{:.6}i", z.re, z.im)
    } else {
        format!("{:.6}-{:.6}i", z.re, -z.im)
    }
}

fn fmt_point(p: &[C64]) -> String {
    format!(
        "[{}]",
        p.iter().map(|&z| fmt_c(z)).collect::<Vec<_>>().join(", ")
    )
}

#[derive(Serialize)]
struct SamplePoint {
    index: usize,
    point: Vec<C64>,
    on_shilov: bool,
    shilov_defect: f64,
}

fn cmd_sample(a: &SampleArgs, cli: &Cli) -> CliResult<Done> {
    let d = descriptor(&a.domain)?;
    if let Some(s) = a.off_shilov_scale {
        if !(s > 0.0 && s < 1.0) {
            return Err(CliError::Usage(format!(
                "--off-shilov-scale must lie in (0, 1), got {s}"
            )));
        }
    }
    let mut rng = seeded_rng(cli.seed.unwrap_or(0));
    let mut points = Vec::with_capacity(a.count);
    let mut text = format!("{} point(s) of {d}\n", a.count);
    for index in 0..a.count {
        let mut z = sample_shilov_with(&d, &mut rng);
        if let Some(s) = a.off_shilov_scale {
            z = perturb_off_shilov(&d, &z, s, cli.tol)?;
        }
        let p = SamplePoint {
            index,
            on_shilov: on_shilov(&d, &z, cli.tol)?,
            shilov_defect: shilov_defect(&d, &z)?,
            point: z,
        };
        let _ = writeln!(
            text,
            "{index:>4}  on_shilov={:<5}  {}",
            p.on_shilov,
            fmt_point(&p.point)
        );
        points.push(p);
    }
    let on = points.iter().filter(|p| p.on_shilov).count();
    Ok(Done {
        summary: json!({ "descriptor": d, "count": a.count, "on_shilov": on }),
        results: to_value(&points),
        text,
        exit: EXIT_PASS,
    })
}

#[derive(Serialize, Default)]
struct ClassifyResult {
    mode: Option<Mode>,
    size: usize,
    commuting: bool,
    normal: bool,
    spectral_pass: Option<bool>,
    spectral_defect: Option<f64>,
    spectrum: Option<Spectrum>,
    identity_pass: Option<bool>,
    identity_residuals: Option<Vec<ConstraintResidual>>,
    agreement: Option<bool>,
    marginal: bool,
    note: Option<String>,
}

fn cmd_classify(a: &ClassifyArgs, cli: &Cli) -> CliResult<Done> {
    let file: TupleFile = read_json(&a.input)?;
    let d = match &a.domain {
        Some(s) => {
            let d = descriptor(s)?;
            if d != file.descriptor {
                return Err(CliError::Usage(format!(
                    "--domain {d} does not match the file's descriptor {}",
                    file.descriptor
                )));
            }
            d
        }
        None => file.descriptor.clone(),
    };
    let s = file.to_tuple()?;
    let tol = cli.tol;
    let mut r = ClassifyResult {
        mode: Some(a.mode),
        size: s.size(),
        ..Default::default()
    };
    let (defect, i, j) = s.commutator_defect();
    r.commuting = s.check_commuting(tol);
    r.normal = s.check_normal(tol);
    if !r.commuting {
        r.note = Some(format!(
            "coordinates {i} and {j} do not commute (defect {defect:.3e})"
        ));
    } else if a.mode == Mode::Spectral {
        if r.normal {
            let (pass, spectrum) = classify_spectral(&s, &d, tol)?;
            r.spectral_defect = Some(cartan_core::verify::spectral_defect(&s, &d, tol)?.0);
            r.spectral_pass = Some(pass);
            r.spectrum = Some(spectrum);
        } else {
            let (defect, index) = s.normality_defect();
            r.spectral_pass = Some(false);
            r.note = Some(cartan_core::Error::NotNormal { index, defect }.to_string());
        }
    } else {
        let v = classify_identities(&s, &d, tol)?;
        r.identity_pass = Some(v.identity_pass);
        r.identity_residuals = Some(v.identity_residuals);
        if a.mode == Mode::Both {
            r.spectral_pass = v.spectral_pass;
            r.spectral_defect = v.spectral_defect;
            r.spectrum = v.spectrum;
            r.agreement = v.agreement;
            r.marginal = v.marginal;
            if !v.normal {
                r.note = Some("tuple is not normal; spectral classifier skipped".into());
            }
        }
    }

    let verdicts: Vec<bool> = [r.spectral_pass, r.identity_pass]
        .into_iter()
        .flatten()
        .collect();
    let pass = r.commuting && !verdicts.is_empty() && verdicts.iter().all(|&v| v);
    let exit = if r.agreement == Some(false) && !r.marginal {
        EXIT_DISAGREE
    } else if pass {
        EXIT_PASS
    } else {
        EXIT_FAIL
    };

    let mut text = format!(
        "{d}, {}x{} tuple, commuting={} normal={}\n",
        r.size, r.size, r.commuting, r.normal
    );
    if let Some(p) = r.spectral_pass {
        let _ = writeln!(
            text,
            "spectral:   {}{}",
            verdict(p),
            r.spectral_defect
                .map(|x| format!(" (Shilov defect {x:.3e})"))
                .unwrap_or_default()
        );
    }
    if let (Some(p), Some(res)) = (r.identity_pass, &r.identity_residuals) {
        let worst = res.iter().map(|c| c.residual).fold(0.0, f64::max);
        let _ = writeln!(
            text,
            "identities: {} (max residual {worst:.3e} over {} constraints)",
            verdict(p),
            res.len()
        );
    }
    if let Some(ag) = r.agreement {
        let _ = writeln!(
            text,
            "agreement:  {ag}{}",
            if r.marginal { " (marginal)" } else { "" }
        );
    }
    if let Some(n) = &r.note {
        let _ = writeln!(text, "note: {n}");
    }
    Ok(Done {
        summary: json!({ "descriptor": d, "pass": pass, "agreement": r.agreement, "marginal": r.marginal }),
        results: to_value(&r),
        text,
        exit,
    })
}

fn verdict(p: bool) -> &'static str {
    if p {
        "pass"
    } else {
        "fail"
    }
}

fn cmd_equiv(a: &EquivArgs, cli: &Cli) -> CliResult<Done> {
    let d = descriptor(&a.domain)?;
    let seed = cli.seed.unwrap_or(0);
    let r = verify_equivalence(&d, a.trials, seed, cli.tol)?;
    let exit = if r.disagreements > 0 || r.block_mismatches > 0 {
        EXIT_DISAGREE
    } else if r.errors > 0 {
        EXIT_FAIL
    } else {
        EXIT_PASS
    };
    let positives = r.outcomes.iter().filter(|o| o.all_shilov).count();
    let text = format!(
        "{d}: {} trials (seed {seed}, {positives} all-Shilov)\n  disagreements {}  marginal {}  block mismatches {}  ground-truth mismatches {}  errors {}\n",
        r.trials, r.disagreements, r.marginal, r.block_mismatches, r.truth_mismatches, r.errors
    );
    Ok(Done {
        summary: json!({
            "descriptor": d,
            "trials": r.trials,
            "all_shilov_trials": positives,
            "disagreements": r.disagreements,
            "marginal": r.marginal,
            "block_mismatches": r.block_mismatches,
            "truth_mismatches": r.truth_mismatches,
            "errors": r.errors,
        }),
        results: to_value(&r.outcomes),
        text,
        exit,
    })
}

fn cmd_canonical(a: &CanonicalArgs, cli: &Cli) -> CliResult<Done> {
    let file: MatrixFile = read_json(&a.input)?;
    let z = file.to_matrix()?;
    let form = youla_canonical(&z, cli.tol)?;
    let residual = youla_residual(&z, &form);
    let pass = residual <= cli.tol * z.norm_fro().max(1.0);
    let sig = form
        .sigmas
        .iter()
        .map(|s| format!("{s:.12}"))
        .collect::<Vec<_>>()
        .join(", ");
    let text = format!("{}x{} antisymmetric matrix\nsigmas: [{sig}]\nresidual ||U Z U^t - K||_F = {residual:.3e}\n", z.rows(), z.cols());
    Ok(Done {
        summary: json!({ "n": z.rows(), "sigmas": form.sigmas, "residual": residual, "pass": pass }),
        results: json!({ "u": MatrixFile::from(&form.u), "canonical": MatrixFile::from(&form.canonical()) }),
        text,
        exit: if pass { EXIT_PASS } else { EXIT_FAIL },
    })
}

fn cmd_lift(a: &LiftArgs, cli: &Cli) -> CliResult<Done> {
    let fs: ModelFile = read_json(&a.model_s)?;
    let ft: ModelFile = read_json(&a.model_t)?;
    if fs.descriptor != ft.descriptor {
        return Err(CliError::Usage(format!(
            "models live over different domains: {} and {}",
            fs.descriptor, ft.descriptor
        )));
    }
    let tol = cli.tol;
    let ms = fs.build(tol)?;
    let mt = ft.build(tol)?;
    let basis = intertwiner_space(&ms.s, &mt.s, tol)?;
    let mut checks: Vec<LiftCheck> = basis
        .iter()
        .enumerate()
        .map(|(k, x)| check_intertwiner(format!("basis {k}"), x, &ms, &mt, tol))
        .collect();
    if let (Some(seed), false) = (cli.seed, basis.is_empty()) {
        let mut rng = seeded_rng(seed);
        let mut x = ComplexMatrix::zeros(mt.s.size(), ms.s.size());
        for b in &basis {
            x.axpy(complex_normal(&mut rng), b);
        }
        checks.push(check_intertwiner("combination".into(), &x, &ms, &mt, tol));
    }
    let all_ok = checks.iter().all(LiftCheck::ok);
    let mut text = format!(
        "{}: dim H = {}, dim J = {}, intertwiner space dimension {}\n",
        fs.descriptor,
        ms.s.size(),
        mt.s.size(),
        basis.len()
    );
    if !checks.is_empty() {
        let _ = writeln!(
            text,
            "{:<12} {:>10} {:>10} {:>6} {:>11} {:>11} {:>6}",
            "source", "||X||", "dominated", "lifted", "norm gap", "restrict", "ok"
        );
    }
    for c in &checks {
        let opt = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.2e}"));
        let _ = writeln!(
            text,
            "{:<12} {:>10.6} {:>10} {:>6} {:>11} {:>11} {:>6}",
            c.source,
            c.norm_x,
            c.domination,
            c.lifted,
            opt(c.norm_gap),
            opt(c.restriction_residual),
            c.ok()
        );
        if let Some(e) = &c.error {
            let _ = writeln!(text, "    {e}");
        }
    }
    Ok(Done {
        summary: json!({
            "descriptor": fs.descriptor,
            "dim_h": ms.s.size(),
            "dim_j": mt.s.size(),
            "intertwiner_dimension": basis.len(),
            "checks": checks.len(),
            "dominations_passed": checks.iter().filter(|c| c.domination).count(),
            "lifts": checks.iter().filter(|c| c.lifted).count(),
            "all_ok": all_ok,
        }),
        results: to_value(&checks),
        text,
        exit: if all_ok { EXIT_PASS } else { EXIT_FAIL },
    })
}

/// Cuts a rendered polynomial at a term boundary.
fn truncate_poly(s: &str, terms: usize) -> String {
    if s.len() <= EXPLAIN_WIDTH {
        return s.to_string();
    }
    let head = &s[..s.floor_char_boundary(EXPLAIN_WIDTH)];
    let cut = head
        .rfind(" + ")
        .into_iter()
        .chain(head.rfind(" - "))
        .max()
        .unwrap_or(head.len());
    format!("{} + ... ({terms} terms)", &s[..cut])
}

fn cmd_explain(a: &ExplainArgs) -> CliResult<Done> {
    let d = descriptor(&a.domain)?;
    let set = identity_set(&d)?;
    let names = set.variable_names();
    let factors = d.factors();
    let mut text = format!(
        "{d}: {} variables, {} constraints\n",
        set.nvars(),
        set.constraints().len()
    );
    let mut rows = Vec::new();
    for c in set.constraints() {
        let poly = c.poly.display_with(names);
        let target = if c.target.im == 0.0 {
            format!("{}", c.target.re)
        } else {
            fmt_c(c.target)
        };
        let _ = writeln!(
            text,
            "[{}] {}: {} = {target}·I",
            factors[c.factor],
            c.label,
            truncate_poly(&poly, c.poly.num_terms())
        );
        rows.push(json!({
            "factor": c.factor,
            "label": c.label,
            "polynomial": poly,
            "terms": c.poly.num_terms(),
            "degree": c.poly.total_degree(),
            "target": c.target,
        }));
    }
    Ok(Done {
        summary: json!({ "descriptor": d, "variables": names, "constraints": rows.len() }),
        results: Value::Array(rows),
        text,
        exit: EXIT_PASS,
    })
}
