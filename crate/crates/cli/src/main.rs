//! Command-line front end: JSON in, JSON (or CSV) out, deterministic given
//! (input, seed, flags).
//!
//! Exit codes: 0 success, 2 invalid input, 3 numerical failure,
//! 4 infeasible or inconsistent (e.g. the direction solve fails, or no
//! feasible capacity start exists).

use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use serde_json::{json, Value};

use lorentz_core::capacity::{capacity_estimate, CapacityConfig};
use lorentz_core::hyperbolic::{
    cone_membership, direction_for_matrix, is_hyperbolic, ConeSpec, DEFAULT_SAMPLES,
};
use lorentz_core::lps;
use lorentz_core::mixed_disc::{md_via_coefficients, mixed_discriminant};
use lorentz_core::permanent::{
    generating_polynomial, permanent_naive, permanent_ryser, permanent_via_derivatives,
};
use lorentz_core::scalar::{format_rational, Coeff};
use lorentz_core::spectra::eigen_signature;
use lorentz_core::{Error, Mat, MultiPoly, SymMatrix};

#[derive(Parser)]
#[command(
    name = "lorentz",
    version,
    about = "Lorentzian-signature polynomial toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact or approximate matrix permanents.
    Permanent(PermanentArgs),
    /// Polynomial capacity over a cone-constrained positive orthant.
    Capacity(CapacityArgs),
    /// Hessian inertia and Lorentzian signature class at a point.
    Signature(SignatureArgs),
    /// Monte-Carlo hyperbolicity certificate and cone membership.
    Hyperbolic(HyperbolicArgs),
    /// Mixed discriminant of a matrix tuple with multiplicities.
    MixedDisc(MixedDiscArgs),
    /// The G(n,k) family: exact permanents, sign predicate, nesting.
    Gnk(GnkArgs),
    /// Boundary-adjacent samples of a hyperbolicity cone, as CSV.
    ConeSample(ConeSampleArgs),
}

#[derive(Args)]
struct InputArg {
    /// Input file; "-" reads stdin.
    #[arg(long, default_value = "-")]
    input: String,
}

#[derive(Args)]
struct PermanentArgs {
    #[command(flatten)]
    input: InputArg,
    #[arg(long, value_parser = ["ryser", "naive", "derivatives", "capacity"], default_value = "ryser")]
    method: String,
    /// Exact rational arithmetic.
    #[arg(long)]
    exact: bool,
    /// Multi-start count for the capacity method.
    #[arg(long, default_value_t = 16)]
    starts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct CapacityArgs {
    #[command(flatten)]
    input: InputArg,
    /// Comma-separated exponent vector; defaults to all ones.
    #[arg(long)]
    alpha: Option<String>,
    /// "orthant", "hyperbolicity:e1,e2,..." or "file:PATH" (cone JSON).
    #[arg(long, default_value = "orthant")]
    cone: String,
    #[arg(long, default_value_t = 16)]
    starts: usize,
    #[arg(long, default_value_t = 500)]
    max_iter: usize,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SignatureArgs {
    #[command(flatten)]
    input: InputArg,
    /// Evaluation point for polynomial input (comma-separated).
    #[arg(long)]
    point: Option<String>,
    /// Zero-band override.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct HyperbolicArgs {
    #[command(flatten)]
    input: InputArg,
    /// Comma-separated direction vector.
    #[arg(long)]
    direction: String,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Optional point for a cone-membership check.
    #[arg(long)]
    point: Option<String>,
}

#[derive(Args)]
struct MixedDiscArgs {
    #[command(flatten)]
    input: InputArg,
    #[arg(long)]
    exact: bool,
    /// Also expand the determinantal polynomial and compare coefficients.
    #[arg(long)]
    cross_check: bool,
}

#[derive(Args)]
struct GnkArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    /// Use the trace-normalized matrix G(n,k)/n.
    #[arg(long)]
    normalized: bool,
    /// Report the positivity predicate alongside the exact permanent.
    #[arg(long)]
    check_sign: bool,
    /// Verify the nested permanent chain for this n.
    #[arg(long)]
    nested: bool,
}

#[derive(Args)]
struct ConeSampleArgs {
    #[command(flatten)]
    input: InputArg,
    #[arg(long)]
    direction: String,
    #[arg(long, default_value_t = 100)]
    points: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    // LORENTZ_THREADS caps worker parallelism; the current implementation is
    // single-threaded, which satisfies any cap >= 1.
    let _ = std::env::var("LORENTZ_THREADS");
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::EigenFailure | Error::Numerical(_) => 3,
        Error::InconsistentSystem { .. } | Error::ConeSampling(_) => 4,
        _ => 2,
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Permanent(args) => cmd_permanent(args),
        Command::Capacity(args) => cmd_capacity(args),
        Command::Signature(args) => cmd_signature(args),
        Command::Hyperbolic(args) => cmd_hyperbolic(args),
        Command::MixedDisc(args) => cmd_mixed_disc(args),
        Command::Gnk(args) => cmd_gnk(args),
        Command::ConeSample(args) => cmd_cone_sample(args),
    }
}

fn read_input(arg: &InputArg) -> Result<Value, Error> {
    let text = if arg.input == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::InvalidInput(format!("reading stdin: {e}")))?;
        buf
    } else {
        std::fs::read_to_string(&arg.input)
            .map_err(|e| Error::InvalidInput(format!("reading {}: {e}", arg.input)))?
    };
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("bad JSON: {e}")))
}

fn parse_vector(text: &str) -> Result<Vec<f64>, Error> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::InvalidInput(format!("bad vector entry {s:?}: {e}")))
        })
        .collect()
}

fn emit(value: &Value) {
    println!("{value}");
}

fn cmd_permanent(args: PermanentArgs) -> Result<ExitCode, Error> {
    let input = read_input(&args.input)?;
    if args.method == "capacity" {
        let a = Mat::<f64>::from_json(&input)?;
        let solved = direction_for_matrix(&a)?;
        let f = generating_polynomial(&a)?;
        let cfg = CapacityConfig {
            starts: args.starts,
            seed: args.seed,
            ..CapacityConfig::default()
        };
        // f is hyperbolic along -e whenever it is along e, and only one of
        // the two opposite cones can meet the positive orthant; try both.
        let negated: Vec<f64> = solved.iter().map(|v| -v).collect();
        let mut chosen = None;
        for e in [solved, negated] {
            if f.evaluate(&e)? <= 0.0 {
                continue;
            }
            let cone = ConeSpec::hyperbolicity(f.clone(), e.clone(), 128, args.seed)?;
            let result = capacity_estimate(&f, &vec![1.0; a.nrows()], &cone, &cfg)?;
            let feasible = result.feasible;
            chosen = Some((e, result));
            if feasible {
                break;
            }
        }
        let Some((e, result)) = chosen else {
            return Err(Error::InconsistentSystem { residual: f64::NAN });
        };
        let feasible = result.feasible;
        emit(&json!({
            "value": result.value,
            "method": "capacity",
            "diagnostics": {
                "note": "capacity upper bound for the x_1...x_n coefficient",
                "direction": e,
                "log_value": result.log_value,
                "argmin": result.argmin,
                "iterations": result.iterations,
                "starts": result.starts,
                "converged": result.converged,
                "feasible": result.feasible,
                "seed": args.seed,
            }
        }));
        return Ok(if feasible {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(4)
        });
    }
    let value = if args.exact {
        let a = Mat::<BigRational>::from_json(&input)?;
        let value = match args.method.as_str() {
            "ryser" => permanent_ryser(&a)?,
            "naive" => permanent_naive(&a)?,
            "derivatives" => permanent_via_derivatives(&a)?,
            _ => unreachable!("clap restricts methods"),
        };
        Value::String(format_rational(&value))
    } else {
        let a = Mat::<f64>::from_json(&input)?;
        let value = match args.method.as_str() {
            "ryser" => permanent_ryser(&a)?,
            "naive" => permanent_naive(&a)?,
            "derivatives" => permanent_via_derivatives(&a)?,
            _ => unreachable!("clap restricts methods"),
        };
        json!(value)
    };
    emit(&json!({
        "value": value,
        "method": args.method,
        "diagnostics": { "exact": args.exact }
    }));
    Ok(ExitCode::SUCCESS)
}

/// Polynomial from either polynomial JSON or matrix JSON (via the generating
/// polynomial).
fn polynomial_input(input: &Value) -> Result<MultiPoly<f64>, Error> {
    if input.get("terms").is_some() {
        MultiPoly::from_json(input)
    } else if input.get("rows").is_some() {
        generating_polynomial(&Mat::<f64>::from_json(input)?)
    } else {
        Err(Error::InvalidInput(
            "expected polynomial JSON (\"terms\") or matrix JSON (\"rows\")".into(),
        ))
    }
}

fn cmd_capacity(args: CapacityArgs) -> Result<ExitCode, Error> {
    let input = read_input(&args.input)?;
    let f = polynomial_input(&input)?;
    let alpha = match &args.alpha {
        Some(text) => parse_vector(text)?,
        None => vec![1.0; f.nvars()],
    };
    let cone = if args.cone == "orthant" {
        ConeSpec::orthant(f.nvars())
    } else if let Some(dir) = args.cone.strip_prefix("hyperbolicity:") {
        ConeSpec::hyperbolicity(f.clone(), parse_vector(dir)?, 128, args.seed)?
    } else if let Some(path) = args.cone.strip_prefix("file:") {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("reading cone {path}: {e}")))?;
        let value: Value = serde_json::from_str(&text)
            .map_err(|e| Error::InvalidInput(format!("bad cone JSON: {e}")))?;
        ConeSpec::from_json(&value)?
    } else {
        return Err(Error::InvalidInput(format!(
            "unknown cone {:?}; use orthant, hyperbolicity:DIR, or file:PATH",
            args.cone
        )));
    };
    let cfg = CapacityConfig {
        starts: args.starts,
        max_iter: args.max_iter,
        tol: args.tol,
        seed: args.seed,
    };
    let result = capacity_estimate(&f, &alpha, &cone, &cfg)?;
    let feasible = result.feasible;
    let mut value = serde_json::to_value(&result)
        .map_err(|e| Error::Numerical(format!("serializing result: {e}")))?;
    value["seed"] = json!(args.seed);
    value["note"] = json!("best local value: an upper bound on the capacity");
    emit(&value);
    Ok(if feasible {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(4)
    })
}

fn cmd_signature(args: SignatureArgs) -> Result<ExitCode, Error> {
    let input = read_input(&args.input)?;
    let q: SymMatrix<f64> = if input.get("terms").is_some() {
        let f = MultiPoly::<f64>::from_json(&input)?;
        let point = args.point.as_deref().ok_or_else(|| {
            Error::InvalidInput("polynomial input needs --point for the Hessian".into())
        })?;
        f.hessian_at(&parse_vector(point)?)?
    } else {
        SymMatrix::from_json(&input)?
    };
    let sig = eigen_signature(&q, args.tol)?;
    let class = sig.classify();
    emit(&json!({
        "class": class,
        "inertia": [sig.n_pos, sig.n_zero, sig.n_neg],
        "eigenvalues": sig.eigenvalues,
        "tolerance": sig.tolerance,
    }));
    Ok(ExitCode::SUCCESS)
}

fn cmd_hyperbolic(args: HyperbolicArgs) -> Result<ExitCode, Error> {
    let input = read_input(&args.input)?;
    let f = polynomial_input(&input)?;
    let e = parse_vector(&args.direction)?;
    let hyperbolic = is_hyperbolic(&f, &e, args.samples, args.seed)?;
    let mut out = json!({
        "hyperbolic": hyperbolic,
        "direction": e,
        "samples": args.samples,
        "seed": args.seed,
        "note": "Monte-Carlo certificate: no counterexample among the samples",
    });
    if let Some(point) = &args.point {
        let x = parse_vector(point)?;
        out["point_in_cone"] = json!(cone_membership(&f, &e, &x)?);
        out["point"] = json!(x);
    }
    emit(&out);
    Ok(ExitCode::SUCCESS)
}

fn parse_matrix_tuple<T: Coeff>(input: &Value) -> Result<Vec<(Mat<T>, usize)>, Error> {
    let list = input
        .get("matrices")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::InvalidInput("mixed-disc input needs a \"matrices\" array".into()))?;
    list.iter()
        .map(|entry| {
            let mat = Mat::from_json(entry)?;
            let mult = entry
                .get("multiplicity")
                .map(|m| {
                    m.as_u64().ok_or_else(|| {
                        Error::InvalidInput("multiplicity must be a nonnegative integer".into())
                    })
                })
                .transpose()?
                .unwrap_or(1) as usize;
            Ok((mat, mult))
        })
        .collect()
}

fn cmd_mixed_disc(args: MixedDiscArgs) -> Result<ExitCode, Error> {
    let input = read_input(&args.input)?;
    if args.exact {
        let tuple = parse_matrix_tuple::<BigRational>(&input)?;
        let value = mixed_discriminant(&tuple)?;
        let mut out = json!({
            "value": format_rational(&value),
            "method": "definition",
            "exact": true,
        });
        if args.cross_check {
            let via = md_via_coefficients(&tuple)?;
            out["cross_check"] = json!({
                "value": format_rational(&via),
                "method": "determinant expansion",
                "agree": via == value,
            });
        }
        emit(&out);
    } else {
        let tuple = parse_matrix_tuple::<f64>(&input)?;
        let value = mixed_discriminant(&tuple)?;
        let mut out = json!({
            "value": value,
            "method": "definition",
            "exact": false,
        });
        if args.cross_check {
            let via = md_via_coefficients(&tuple)?;
            out["cross_check"] = json!({
                "value": via,
                "method": "determinant expansion",
                "agree": (via - value).abs() <= 1e-9 * value.abs().max(1.0),
            });
        }
        emit(&out);
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_gnk(args: GnkArgs) -> Result<ExitCode, Error> {
    let (matrix, per) = if args.normalized {
        let norm = lps::gnk_normalized(args.n, args.k)?;
        (norm.matrix, norm.per)
    } else {
        (
            lps::gnk(args.n, args.k)?,
            lps::gnk_per_closed_form(args.n, args.k)?,
        )
    };
    let rows: Vec<Vec<String>> = (0..matrix.n())
        .map(|i| {
            (0..matrix.n())
                .map(|j| format_rational(&matrix[(i, j)]))
                .collect()
        })
        .collect();
    let mut out = json!({
        "n": args.n,
        "k": args.k,
        "normalized": args.normalized,
        "per": format_rational(&per),
        "matrix": { "rows": rows },
    });
    if args.check_sign {
        let verdict = lps::nls_positivity_predicate(args.n, args.k)?;
        out["guaranteed_positive"] = json!(verdict.guaranteed_positive);
        out["reason"] = json!(verdict.reason);
    }
    if args.nested {
        let (k_min, k_max) = lps::nested_k_range(args.n);
        out["nested_decreasing"] = json!(lps::gnk_nested_check(args.n)?);
        out["nested_k_range"] = json!([k_min, k_max]);
    }
    emit(&out);
    Ok(ExitCode::SUCCESS)
}

fn cmd_cone_sample(args: ConeSampleArgs) -> Result<ExitCode, Error> {
    use rand::Rng;
    use rand::SeedableRng;

    let input = read_input(&args.input)?;
    let f = polynomial_input(&input)?;
    let e = parse_vector(&args.direction)?;
    if !is_hyperbolic(&f, &e, 128, args.seed)? {
        return Err(Error::Precondition(
            "input failed the sampled hyperbolicity certificate".into(),
        ));
    }
    let n = f.nvars();
    let header: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    println!("{},on_boundary", header.join(","));
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(args.seed);
    let mut written = 0usize;
    while written < args.points {
        let dir: Vec<f64> = (0..n)
            .map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal))
            .collect();
        let at = |t: f64| -> Vec<f64> { e.iter().zip(&dir).map(|(ei, di)| ei + t * di).collect() };
        // Expand until the ray leaves the cone or hits the cap.
        let mut t_in = 0.0_f64;
        let mut t_out = None;
        let mut t = 1.0_f64;
        while t < 1e6 {
            if cone_membership(&f, &e, &at(t))? {
                t_in = t;
            } else {
                t_out = Some(t);
                break;
            }
            t *= 2.0;
        }
        let (point, on_boundary) = match t_out {
            Some(mut hi) => {
                // Bisect to the largest t still inside.
                let mut lo = t_in;
                for _ in 0..80 {
                    let mid = 0.5 * (lo + hi);
                    if cone_membership(&f, &e, &at(mid))? {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                (at(lo), true)
            }
            None => (at(t_in), false),
        };
        let row: Vec<String> = point.iter().map(|v| format!("{v}")).collect();
        println!("{},{}", row.join(","), u8::from(on_boundary));
        written += 1;
    }
    Ok(ExitCode::SUCCESS)
}
