use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use e0_core::classifier::{check_point, classify_general, ClassificationReport, GroupStructure};
use e0_core::curve::WeierstrassCurve;
use e0_core::descriptor::CurveDescriptor;
use e0_core::formal_group::{
    format_series, format_series2, g_polynomial, generic_g_description, generic_group_law, generic_mult_by_n,
    mult_by_n, series2_json, series_json,
};
use e0_core::local_field::LocalRing;
use e0_core::oracle;
use e0_core::Error;

/// Largest truncation degree for generic (symbolic) series.
const MAX_GENERIC_DEGREE: usize = 24;
/// Largest truncation degree for series specialized to a curve.
const MAX_SPECIALIZED_DEGREE: usize = 200;

#[derive(Parser)]
#[command(name = "e0", version, about = "Z_p-module structure of E_0(K) for additive reduction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Working precision M (absolute, in powers of the uniformizer).
    #[arg(long, global = true)]
    precision: Option<i64>,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized self-checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for the brute-force oracle (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct Input {
    /// Curve descriptor (JSON); reads standard input when absent or "-".
    file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Classify E_0(K) as a Z_p-module.
    Classify(Input),
    /// Report the reduction type and a model with all a_i in m_K.
    Normalize(Input),
    /// Print the formal group law, [n](T) and the reduction polynomial g.
    FormalGroup {
        /// Specialize to this curve instead of printing generic series.
        file: Option<PathBuf>,
        /// Print [n](T) for this n.
        #[arg(long = "n")]
        n: Option<u64>,
        /// Print [p](T) and g for this prime.
        #[arg(long)]
        p: Option<u64>,
        /// Truncation degree.
        #[arg(long, default_value_t = 6)]
        degree: usize,
    },
    /// Check the descriptor's points: on the curve, in E_0, level and order.
    VerifyPoint(Input),
    /// Compare the classification with the brute-force finite quotient.
    Oracle {
        #[command(flatten)]
        input: Input,
        /// Level M of the quotient O_K / m^M (default: chosen from the field).
        #[arg(long)]
        level: Option<i64>,
        /// Replace the predicted torsion rank (negative control).
        #[arg(long)]
        expect_torsion_rank: Option<usize>,
        /// Also check that the finite group law is well defined and satisfies
        /// the group axioms on seeded samples.
        #[arg(long)]
        self_check: bool,
    },
}

/// Outcome of a command: printed output plus exit status.
struct Outcome {
    text: String,
    json: Value,
    code: u8,
}

fn read_input(file: &Option<PathBuf>) -> anyhow::Result<String> {
    let mut s = String::new();
    match file {
        Some(p) if p.as_os_str() != "-" => {
            s = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
        }
        _ => {
            io::stdin().read_to_string(&mut s).context("reading standard input")?;
        }
    }
    Ok(s)
}

fn load(cli: &Cli, file: &Option<PathBuf>) -> anyhow::Result<(CurveDescriptor, WeierstrassCurve)> {
    let d = CurveDescriptor::parse(&read_input(file)?)?;
    let e = d.curve(cli.precision)?;
    Ok((d, e))
}

fn classify(cli: &Cli, input: &Input) -> anyhow::Result<Outcome> {
    let (_, e) = load(cli, &input.file)?;
    let r = classify_general(&e)?;
    let status = if r.certified { "certified" } else { "exploratory" };
    Ok(Outcome {
        text: format!("{}\nmethod: {}, {status}", r.human(), r.method.as_str()),
        json: r.to_json(),
        code: if r.certified { 0 } else { 2 },
    })
}

fn normalize(cli: &Cli, input: &Input) -> anyhow::Result<Outcome> {
    let (_, e) = load(cli, &input.file)?;
    let rt = e.reduction_type()?;
    let (model, t) = e.normalize_additive()?;
    let singular = rt.singular_point.as_ref().map(|(x, y)| format!("({x}, {y})"));
    Ok(Outcome {
        text: format!(
            "reduction: {}\ntransform: {t}\nmodel: {model}",
            rt.kind.name()
        ),
        json: json!({
            "reduction": rt.kind.name(),
            "singular_point": singular,
            "transform": t.to_json(),
            "model": model.to_json(),
        }),
        code: 0,
    })
}

fn formal_group(cli: &Cli, file: &Option<PathBuf>, n: Option<u64>, p: Option<u64>, degree: usize) -> anyhow::Result<Outcome> {
    if degree == 0 {
        bail!("degree must be at least 1");
    }
    let n_series = n.or(p);
    if let Some(p) = p {
        if !e0_core::arith::is_prime(p) {
            return Err(Error::NotPrime(p).into());
        }
    }
    if let Some(file) = file {
        if degree > MAX_SPECIALIZED_DEGREE {
            bail!("degree {degree} exceeds the bound {MAX_SPECIALIZED_DEGREE}");
        }
        let (_, e) = load(cli, &Some(file.clone()))?;
        let ring = LocalRing(e.field().clone());
        let m = n_series.unwrap_or(e.field().p());
        let s = mult_by_n(&ring, e.a(), m, degree);
        let coeffs: Vec<String> = s.coeffs().iter().map(|c| c.to_string()).collect();
        let mut lines = vec![format!("[{m}](T) coefficients:")];
        for (i, c) in coeffs.iter().enumerate().skip(1) {
            lines.push(format!("  T^{i}: {c}"));
        }
        let mut out = json!({
            "n": m,
            "degree": degree,
            "coefficients": s.coeffs().iter().map(|c| c.to_json()).collect::<Vec<_>>(),
        });
        if e.field().is_unramified() && e.is_normalized() && m == e.field().p() {
            let g = g_polynomial(e.a())?;
            lines.push(format!("g = {g}"));
            out["g"] = json!(g.to_string());
        }
        return Ok(Outcome {
            text: lines.join("\n"),
            json: out,
            code: 0,
        });
    }
    if degree > MAX_GENERIC_DEGREE {
        bail!("degree {degree} exceeds the symbolic bound {MAX_GENERIC_DEGREE}");
    }
    let mut lines = Vec::new();
    let mut out = json!({"degree": degree});
    match n_series {
        None => {
            let f = generic_group_law(degree);
            lines.push(format!("F(X,Y) = {}", format_series2(&f)));
            out["group_law"] = series2_json(&f);
        }
        Some(m) => {
            let s = generic_mult_by_n(m, degree);
            lines.push(format!("[{m}](T) = {}", format_series(&s, "T")));
            out["n"] = json!(m);
            out["series"] = series_json(&s);
        }
    }
    if let Some(p) = p.filter(|&p| p <= 7) {
        let g = generic_g_description(p)?;
        lines.push(format!("g = {g}"));
        out["g"] = json!(g);
    }
    Ok(Outcome {
        text: lines.join("\n"),
        json: out,
        code: 0,
    })
}

fn verify_point(cli: &Cli, input: &Input) -> anyhow::Result<Outcome> {
    let (d, e) = load(cli, &input.file)?;
    if d.points.is_empty() {
        bail!("the descriptor lists no points");
    }
    let report = classify_general(&e)?;
    let points = d.curve_points(e.field())?;
    let mut lines = Vec::new();
    let mut results = Vec::new();
    let mut code = 0;
    for (i, pt) in points.iter().enumerate() {
        match check_point(&report, &e, pt) {
            Ok(c) => {
                lines.push(format!("{pt}: {}", c.human(&report)));
                results.push(c.to_json());
            }
            Err(Error::NotOnCurve(why)) => {
                code = 1;
                lines.push(format!("{pt}: not on curve ({why})"));
                results.push(json!({"point": pt.to_json(), "on_curve": false, "error": why, "index": i}));
            }
            Err(err) => return Err(err.into()),
        }
    }
    Ok(Outcome {
        text: lines.join("\n"),
        json: json!({
            "structure": report.structure.to_json(),
            "certified": report.certified,
            "points": results,
        }),
        code,
    })
}

fn run_oracle(
    cli: &Cli,
    input: &Input,
    level: Option<i64>,
    expect: Option<usize>,
    self_check: bool,
) -> anyhow::Result<Outcome> {
    let (_, e) = load(cli, &input.file)?;
    let mut report: ClassificationReport = classify_general(&e)?;
    if let Some(b) = expect {
        let s = &report.structure;
        report.structure = GroupStructure::new(s.p, s.free_rank, b);
    }
    let field = report.model.field().clone();
    let level = level.unwrap_or_else(|| oracle::default_level(&field));
    if level > field.precision() {
        bail!("level {level} exceeds the working precision {}", field.precision());
    }
    let v = oracle::compare(&report, level)?;
    let mut out = v.to_json();
    out["expected"] = report.structure.to_json();
    if self_check {
        let model = oracle::FiniteModel::new(&report.model, level)?;
        model.check_well_defined(&report.model, 200, cli.seed)?;
        model.check_axioms(200, cli.seed)?;
        out["self_check"] = json!("pass");
    }
    let text = format!(
        "level {}: order {}, p-rank {}, kernel size {} (expected {}): {}",
        v.level,
        v.order,
        v.p_rank,
        v.kernel_size,
        v.expected_kernel_size,
        if v.pass { "pass" } else { "fail" }
    );
    Ok(Outcome {
        text,
        json: out,
        code: if v.pass { 0 } else { 1 },
    })
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    if let Some(j) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
            .map_err(|e| anyhow!("--jobs: {e}"))?;
    }
    match &cli.command {
        Command::Classify(i) => classify(cli, i),
        Command::Normalize(i) => normalize(cli, i),
        Command::FormalGroup { file, n, p, degree } => formal_group(cli, file, *n, *p, *degree),
        Command::VerifyPoint(i) => verify_point(cli, i),
        Command::Oracle {
            input,
            level,
            expect_torsion_rank,
            self_check,
        } => run_oracle(cli, input, *level, *expect_torsion_rank, *self_check),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(o) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&o.json).expect("JSON values serialize"));
            } else {
                println!("{}", o.text);
            }
            ExitCode::from(o.code)
        }
        Err(err) => {
            if cli.json {
                println!("{}", json!({"error": err.to_string()}));
            }
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
