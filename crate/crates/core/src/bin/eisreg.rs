use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use eisreg::coset::{self, Flavor, IntMat};
use eisreg::eisenstein::{EisSpec, Evaluator, Point, Variant};
use eisreg::lattice::{Field, LatticeSpec};
use eisreg::mellin;
use eisreg::regint::{phi_by_name, Engine};
use eisreg::report::{CheckRecord, Report, RunConfig, RunReport};
use eisreg::scalars;
use eisreg::suites;

#[derive(Parser)]
#[command(
    name = "eisreg",
    about = "Verified numerics for regularized integrals on the modular surface",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Tolerance scaling applied to every suite (1.0 = defaults).
    #[arg(long)]
    tol: Option<f64>,
    /// Seed of the random corpora.
    #[arg(long)]
    seed: Option<u64>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the scalar Laurent data as JSON (12 significant digits).
    Constants(CommonOpts),
    /// Eisenstein-series evaluation.
    Eisenstein {
        #[command(subcommand)]
        cmd: EisCmd,
    },
    /// Identity verification suites.
    Verify {
        #[command(subcommand)]
        cmd: VerifyCmd,
    },
    /// Regularized integral of a named built-in function.
    RegInt {
        #[arg(long)]
        phi: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Unipotent normal form of a unimodular matrix.
    Coset {
        #[arg(long)]
        r: usize,
        #[arg(long = "N")]
        modulus: u64,
        /// Row-major entries, e.g. "0,-1;1,0".
        #[arg(long)]
        matrix: String,
        /// Use the lower-triangular mirror subgroup.
        #[arg(long, default_value_t = false)]
        lower: bool,
    },
    /// Exact p-adic Schwartz-calculus checks.
    Padic {
        #[command(subcommand)]
        cmd: PadicCmd,
    },
    /// Archimedean Whittaker value through both routes.
    Whittaker {
        #[arg(long)]
        s: String,
        #[arg(long)]
        y: f64,
    },
    /// Archimedean Mellin machinery.
    Mellin {
        #[command(subcommand)]
        cmd: MellinCmd,
    },
    /// Lattice-sum verification as CSV of (t, sum, bound, ratio).
    Lattice {
        #[arg(long, value_parser = parse_field)]
        field: Field,
        #[arg(long, default_value_t = 1)]
        m: u64,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        out: Option<String>,
    },
    /// Run verification suites and emit one JSON report.
    Run {
        /// JSON config file.
        #[arg(long)]
        config: Option<String>,
        /// Suites to run (default: all).
        #[arg(long)]
        suite: Vec<String>,
        #[arg(long)]
        jobs: Option<usize>,
        #[command(flatten)]
        common: CommonOpts,
    },
}

#[derive(Subcommand)]
enum EisCmd {
    /// Evaluate E, E* or E_reg (or an s-derivative) at a point.
    Eval {
        #[arg(long)]
        s: String,
        /// Point as x+yi, e.g. "0.3+1.1i".
        #[arg(long)]
        z: String,
        #[arg(long, default_value_t = 0)]
        deriv: usize,
        #[arg(long, default_value = "plain", value_parser = parse_variant)]
        variant: Variant,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Two-sided check of the truncation identity for R*.
    FundamentalIdentity {
        #[arg(long)]
        phi: String,
        /// Spectral grid points (repeatable).
        #[arg(long)]
        s: Vec<String>,
        /// Truncation heights (repeatable).
        #[arg(long = "T")]
        heights: Vec<f64>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Hecke eigenvalue and regularizing-series shift checks.
    Hecke(CommonOpts),
    /// Product identities and singular-case statements.
    Products(CommonOpts),
}

#[derive(Subcommand)]
enum PadicCmd {
    /// Index identities, norm inequalities, Mellin pair, Whittaker values.
    Verify {
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[command(flatten)]
        common: CommonOpts,
    },
}

#[derive(Subcommand)]
enum MellinCmd {
    /// Forward/inverse round trip on the smooth corpus.
    Roundtrip(CommonOpts),
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    match s {
        "plain" => Ok(Variant::Plain),
        "star" => Ok(Variant::Star),
        "reg" => Ok(Variant::Regularized),
        other => Err(format!("unknown variant '{other}' (plain|star|reg)")),
    }
}

fn parse_field(s: &str) -> Result<Field, String> {
    match s {
        "Q" | "q" | "rational" => Ok(Field::Rational),
        "Qi" | "qi" | "gaussian" => Ok(Field::Gaussian),
        other => Err(format!("unknown field '{other}' (Q|Qi)")),
    }
}

/// Parse "a", "bi", "a+bi", "a-bi" into a complex number.
fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t = s.trim().replace(' ', "");
    if let Ok(re) = t.parse::<f64>() {
        return Ok(Complex64::new(re, 0.0));
    }
    if let Some(body) = t.strip_suffix('i') {
        let bytes = body.as_bytes();
        let mut split = None;
        for i in (1..bytes.len()).rev() {
            let c = bytes[i] as char;
            if (c == '+' || c == '-') && !matches!(bytes[i - 1] as char, 'e' | 'E') {
                split = Some(i);
                break;
            }
        }
        return match split {
            Some(i) => {
                let re: f64 = body[..i].parse().map_err(|e| format!("{e}"))?;
                let im = match &body[i..] {
                    "+" => 1.0,
                    "-" => -1.0,
                    other => other.parse().map_err(|e| format!("{e}"))?,
                };
                Ok(Complex64::new(re, im))
            }
            None => {
                let im = match body {
                    "" => 1.0,
                    "-" => -1.0,
                    other => other.parse().map_err(|e| format!("{e}"))?,
                };
                Ok(Complex64::new(0.0, im))
            }
        };
    }
    Err(format!("cannot parse '{s}' as a complex number"))
}

fn sig12(x: f64) -> f64 {
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn emit(out: &Option<String>, value: &serde_json::Value) -> std::io::Result<()> {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    match out {
        Some(path) => std::fs::write(path, text + "\n"),
        None => {
            let stdout = std::io::stdout();
            writeln!(stdout.lock(), "{text}")
        }
    }
}

fn config_from(common: &CommonOpts) -> Result<RunConfig, String> {
    let mut cfg = RunConfig::default();
    if let Some(t) = common.tol {
        if !(t > 0.0) {
            return Err(format!("tolerance must be positive, got {t}"));
        }
        for name in suites::SUITE_NAMES {
            cfg.tolerances.insert(name.to_string(), t);
        }
        cfg.tolerances.insert("lattice".into(), t);
    }
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    cfg.out = common.out.clone();
    Ok(cfg)
}

fn report_exit(report: &Report, out: &Option<String>) -> ExitCode {
    let value = serde_json::to_value(report).expect("serializable");
    if emit(out, &value).is_err() {
        return ExitCode::from(2);
    }
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Constants(common) => {
            let cfg = match config_from(&common) {
                Ok(c) => c,
                Err(e) => return fail(e),
            };
            let constants = match collect_constants() {
                Ok(c) => c,
                Err(e) => return fail(e),
            };
            let report = match suites::suite_constants(&cfg) {
                Ok(r) => r,
                Err(e) => return fail(e),
            };
            let value = serde_json::json!({
                "constants": constants,
                "checks": serde_json::to_value(&report).expect("serializable"),
            });
            if emit(&common.out, &value).is_err() {
                return ExitCode::from(2);
            }
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Command::Eisenstein { cmd } => match cmd {
            EisCmd::Eval {
                s,
                z,
                deriv,
                variant,
            } => {
                let s = match parse_complex(&s) {
                    Ok(v) => v,
                    Err(e) => return fail(e),
                };
                let zc = match parse_complex(&z) {
                    Ok(v) => v,
                    Err(e) => return fail(e),
                };
                let point = match Point::new(zc.re, zc.im) {
                    Ok(p) => p,
                    Err(e) => return fail(e),
                };
                let spec = EisSpec {
                    s0: s,
                    deriv,
                    variant,
                    fourier_terms: 0,
                };
                let result = Evaluator::new(spec).and_then(|ev| ev.eval(point));
                match result {
                    Ok(v) => {
                        let value = serde_json::json!({
                            "value": { "re": v.re, "im": v.im },
                            "error_bound": 1e-9,
                        });
                        let _ = emit(&None, &value);
                        ExitCode::SUCCESS
                    }
                    Err(e) => fail(e),
                }
            }
        },
        Command::Verify { cmd } => match cmd {
            VerifyCmd::FundamentalIdentity {
                phi,
                s,
                heights,
                common,
            } => {
                let cfg = match config_from(&common) {
                    Ok(c) => c,
                    Err(e) => return fail(e),
                };
                let phi = match phi_by_name(&phi) {
                    Ok(p) => p,
                    Err(e) => return fail(e),
                };
                let s_grid: Vec<Complex64> = if s.is_empty() {
                    vec![
                        Complex64::new(0.8, 0.0),
                        Complex64::new(0.9, 0.0),
                        Complex64::new(0.65, 0.3),
                    ]
                } else {
                    match s.iter().map(|x| parse_complex(x)).collect() {
                        Ok(v) => v,
                        Err(e) => return fail(e),
                    }
                };
                let t_list = if heights.is_empty() {
                    vec![2.0, 4.0]
                } else {
                    heights
                };
                let engine = match Engine::with_defaults() {
                    Ok(e) => e,
                    Err(e) => return fail(e),
                };
                let start = Instant::now();
                match engine.verify_fundamental_identity(&phi, &s_grid, &t_list) {
                    Ok(rep) => {
                        let records = vec![
                            CheckRecord::residual(
                                "two-sided",
                                "truncated pairing plus tails equals R* plus incomplete-Mellin terms",
                                rep.max_residual,
                                cfg.tol("fundamental-identity", 1e-5),
                            ),
                            CheckRecord::residual(
                                "t-independence",
                                "R* does not depend on the truncation height",
                                rep.t_independence,
                                cfg.tol("fundamental-identity", 1e-6),
                            ),
                            CheckRecord::residual(
                                "functional-equation",
                                "R*(s) = R*(-s)",
                                rep.functional_equation,
                                cfg.tol("fundamental-identity", 1e-6),
                            ),
                        ];
                        let report = Report::from_records("fundamental-identity", records, start);
                        report_exit(&report, &common.out)
                    }
                    Err(e) => fail(e),
                }
            }
            VerifyCmd::Hecke(common) => dispatch_suite("hecke", &common),
            VerifyCmd::Products(common) => dispatch_suite("products", &common),
        },
        Command::RegInt { phi, common } => {
            let phi = match phi_by_name(&phi) {
                Ok(p) => p,
                Err(e) => return fail(e),
            };
            let engine = match Engine::with_defaults() {
                Ok(e) => e,
                Err(e) => return fail(e),
            };
            match engine.reg_integral(&phi) {
                Ok(reg) => {
                    let value = serde_json::json!({
                        "phi": phi.name,
                        "principal": { "re": sig12(reg.principal.re), "im": sig12(reg.principal.im) },
                        "degenerate": { "re": sig12(reg.degenerate.re), "im": sig12(reg.degenerate.im) },
                        "value": { "re": sig12(reg.value.re), "im": sig12(reg.value.im) },
                    });
                    if emit(&common.out, &value).is_err() {
                        return ExitCode::from(2);
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
        Command::Coset {
            r,
            modulus,
            matrix,
            lower,
        } => {
            let entries = match parse_matrix(&matrix, r) {
                Ok(m) => m,
                Err(e) => return fail(e),
            };
            let mat = IntMat::from_i64(&entries);
            let flavor = if lower {
                Flavor::Gamma0Minus
            } else {
                Flavor::Gamma0
            };
            match coset::decompose(&mat, modulus, flavor) {
                Ok(rep) => {
                    let to_json = |m: &IntMat| {
                        m.rows
                            .iter()
                            .map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>())
                            .collect::<Vec<_>>()
                    };
                    let verified = coset::verify(&mat, &rep);
                    let value = serde_json::json!({
                        "n_minus": to_json(&rep.n_minus),
                        "n_plus": to_json(&rep.n_plus),
                        "verified": verified,
                    });
                    let _ = emit(&None, &value);
                    if verified {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    }
                }
                Err(e) => fail(e),
            }
        }
        Command::Padic { cmd } => match cmd {
            PadicCmd::Verify { p, trials, common } => {
                if ![2u64, 3, 5, 7, 11, 13].contains(&p) {
                    return fail(format!("p = {p} is not a supported prime"));
                }
                let cfg = match config_from(&common) {
                    Ok(c) => c,
                    Err(e) => return fail(e),
                };
                match suites::suite_padic(&cfg, p, trials) {
                    Ok(rep) => report_exit(&rep, &common.out),
                    Err(e) => fail(e),
                }
            }
        },
        Command::Whittaker { s, y } => {
            let s = match parse_complex(&s) {
                Ok(v) => v,
                Err(e) => return fail(e),
            };
            let direct = mellin::whittaker_arch_direct(s, y);
            let bessel = mellin::whittaker_arch_bessel(s, y);
            match (direct, bessel) {
                (Ok(a), Ok(b)) => {
                    let value = serde_json::json!({
                        "direct": { "re": sig12(a.re), "im": sig12(a.im) },
                        "bessel": { "re": sig12(b.re), "im": sig12(b.im) },
                        "agreement": (a - b).norm(),
                    });
                    let _ = emit(&None, &value);
                    ExitCode::SUCCESS
                }
                (Err(e), _) | (_, Err(e)) => fail(e),
            }
        }
        Command::Mellin { cmd } => match cmd {
            MellinCmd::Roundtrip(common) => dispatch_suite("mellin", &common),
        },
        Command::Lattice { field, m, c, out } => {
            let spec = match LatticeSpec::new(field, m, c, 5000) {
                Ok(s) => s,
                Err(e) => return fail(e),
            };
            let grid = vec![10.0, 20.0, 40.0, 80.0, 160.0];
            match eisreg::lattice::verify_lemma(&spec, &grid) {
                Ok(rep) => {
                    let mut csv = String::from("part,t,sum,bound,ratio\n");
                    for (t, s, b, r) in &rep.part1 {
                        csv += &format!("1,{t},{s:.12e},{b:.12e},{r:.12e}\n");
                    }
                    for (t, s, b, r) in &rep.part2 {
                        csv += &format!("2,{t},{s:.12e},{b:.12e},{r:.12e}\n");
                    }
                    csv += &format!(
                        "# part1_slope={:.6} part2_slope={:.6}\n",
                        rep.part1_slope, rep.part2_slope
                    );
                    match out {
                        Some(path) => {
                            if std::fs::write(path, csv).is_err() {
                                return ExitCode::from(2);
                            }
                        }
                        None => print!("{csv}"),
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
        Command::Run {
            config,
            suite,
            jobs,
            common,
        } => {
            let mut cfg = if let Some(path) = config {
                match std::fs::read_to_string(&path)
                    .map_err(|e| e.to_string())
                    .and_then(|s| serde_json::from_str::<RunConfig>(&s).map_err(|e| e.to_string()))
                {
                    Ok(c) => c,
                    Err(e) => return fail(format!("config '{path}': {e}")),
                }
            } else {
                RunConfig::default()
            };
            if let Some(t) = common.tol {
                if !(t > 0.0) {
                    return fail(format!("tolerance must be positive, got {t}"));
                }
                for name in suites::SUITE_NAMES {
                    cfg.tolerances.insert(name.to_string(), t);
                }
                cfg.tolerances.insert("lattice".into(), t);
            }
            if let Some(seed) = common.seed {
                cfg.seed = seed;
            }
            if let Some(j) = jobs {
                cfg.jobs = j;
            }
            if !suite.is_empty() {
                cfg.suites = suite;
            }
            if common.out.is_some() {
                cfg.out = common.out.clone();
            }
            if let Err(e) = cfg.validate() {
                return fail(e);
            }
            let names: Vec<String> = if cfg.suites.is_empty() {
                let mut all: Vec<String> =
                    suites::SUITE_NAMES.iter().map(|s| s.to_string()).collect();
                all.push("lattice".to_string());
                all
            } else {
                cfg.suites.clone()
            };
            let start = Instant::now();
            let reports = run_all(&names, &cfg);
            let pass = reports.iter().all(|r| r.pass);
            let run = RunReport {
                suites: reports,
                pass,
                wall_ms: start.elapsed().as_millis(),
            };
            let value = serde_json::to_value(&run).expect("serializable");
            if emit(&cfg.out, &value).is_err() {
                return ExitCode::from(2);
            }
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn dispatch_suite(name: &str, common: &CommonOpts) -> ExitCode {
    let cfg = match config_from(common) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    match suites::run_suite(name, &cfg) {
        Ok(rep) => report_exit(&rep, &common.out),
        Err(e) => fail(e),
    }
}

/// Run suites sequentially or across worker threads; a failed suite is
/// recorded and the others continue.
fn run_all(names: &[String], cfg: &RunConfig) -> Vec<Report> {
    let run_one = |name: &str| -> Report {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| {
            suites::run_suite(name, cfg)
        }));
        match outcome {
            Ok(Ok(rep)) => rep,
            Ok(Err(e)) => Report::from_records(
                name,
                vec![CheckRecord::exact(
                    "suite-error",
                    format!("suite failed to run: {e}"),
                    false,
                )],
                start,
            ),
            Err(_) => Report::from_records(
                name,
                vec![CheckRecord::exact("suite-panic", "suite panicked", false)],
                start,
            ),
        }
    };
    if cfg.jobs <= 1 || names.len() <= 1 {
        return names.iter().map(|n| run_one(n)).collect();
    }
    let mut reports: Vec<Option<Report>> = (0..names.len()).map(|_| None).collect();
    let next = std::sync::atomic::AtomicUsize::new(0);
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for _ in 0..cfg.jobs.min(names.len()) {
            handles.push(scope.spawn(|| {
                let mut done = Vec::new();
                loop {
                    let i = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                    if i >= names.len() {
                        break;
                    }
                    done.push((i, run_one(&names[i])));
                }
                done
            }));
        }
        for h in handles {
            for (i, rep) in h.join().expect("worker") {
                reports[i] = Some(rep);
            }
        }
    });
    reports
        .into_iter()
        .map(|r| r.expect("all slots filled"))
        .collect()
}

fn collect_constants() -> eisreg::Result<serde_json::Value> {
    use eisreg::jet::ZERO;
    let lam = scalars::lambda_jet(2)?;
    let (vol, _) = scalars::volume_pgl2()?;
    let (c_phi, b_phi) = scalars::functionals_bc()?;
    let m = scalars::m_scalar_jet(ZERO, 3)?;
    let defect = scalars::mv_defect(2)?;
    Ok(serde_json::json!({
        "lambda_residue": sig12(lam.residue().re),
        "lambda_finite_part": sig12(lam.value().re),
        "lambda_d2": sig12(lam.df(2).re),
        "volume": sig12(vol),
        "functional_C": sig12(c_phi),
        "functional_B": sig12(b_phi),
        "m_center": sig12(m.value().re),
        "m_d1": sig12(m.df(1).re),
        "m_d2": sig12(m.df(2).re),
        "m_d3": sig12(m.df(3).re),
        "dilation_defect_q2": sig12(defect.re),
        "zeta_star": 1.0,
        "discriminant": 1,
        "r1": 1,
        "r2": 0,
    }))
}

fn parse_matrix(s: &str, r: usize) -> Result<Vec<Vec<i64>>, String> {
    let rows: Vec<&str> = s.split(';').collect();
    if rows.len() != r {
        return Err(format!("expected {r} rows, got {}", rows.len()));
    }
    let mut out = Vec::new();
    for row in rows {
        let entries: Vec<i64> = row
            .split(|c| c == ',' || c == ' ')
            .filter(|t| !t.trim().is_empty())
            .map(|t| t.trim().parse::<i64>().map_err(|e| format!("{e}")))
            .collect::<Result<_, _>>()?;
        if entries.len() != r {
            return Err(format!(
                "expected {r} entries per row, got {}",
                entries.len()
            ));
        }
        out.push(entries);
    }
    Ok(out)
}
