//! `holomet` — distance queries, geodesic solving, verification, convexity
//! modulus sweeps and curvature tables on `l^p` balls, polydiscs and
//! two-block direct sums.
//!
//! Exit codes: 0 success, 2 bad input (contract/domain errors), 3
//! non-convergence or precision loss, 4 verification failure. With JSON
//! output, errors additionally emit `{"error": ...}` on stderr. All numeric
//! output carries 12 significant digits; identical arguments and seed give
//! byte-identical output.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use holomet_core::{
    geodesic::polydisc_distance,
    metric::{curvature, modulus_sweep, CurvatureConfig},
    sig12,
    solver::{solve, solve_direct_sum},
    verify::{verify_geodesic, VerifyConfig},
    BetaStrategy, ComplexVector, Error, GeodesicParams, SolveConfig, SpaceSignature,
};

#[derive(Parser)]
#[command(
    name = "holomet",
    version,
    about = "Invariant hyperbolic metrics and complex geodesics on lp balls"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum BetaArg {
    Ones,
    Enum,
    Adaptive,
}

impl From<BetaArg> for BetaStrategy {
    fn from(b: BetaArg) -> Self {
        match b {
            BetaArg::Ones => BetaStrategy::AllOnes,
            BetaArg::Enum => BetaStrategy::Enumerate,
            BetaArg::Adaptive => BetaStrategy::Adaptive,
        }
    }
}

#[derive(Args)]
struct SpaceArgs {
    /// lp exponent (a number >= 1, or "inf" for the polydisc)
    #[arg(long)]
    p: Option<String>,
    /// dimension of the lp space
    #[arg(long)]
    n: Option<usize>,
    /// direct sum: first block exponent
    #[arg(long, requires_all = ["n1", "p2", "n2", "r"])]
    p1: Option<f64>,
    /// direct sum: first block dimension
    #[arg(long)]
    n1: Option<usize>,
    /// direct sum: second block exponent
    #[arg(long)]
    p2: Option<f64>,
    /// direct sum: second block dimension
    #[arg(long)]
    n2: Option<usize>,
    /// direct sum: outer exponent
    #[arg(long)]
    r: Option<f64>,
}

impl SpaceArgs {
    fn build(&self) -> Result<SpaceSignature, CliError> {
        if let (Some(p1), Some(n1), Some(p2), Some(n2), Some(r)) =
            (self.p1, self.n1, self.p2, self.n2, self.r)
        {
            return Ok(SpaceSignature::direct_sum(p1, n1, p2, n2, r)?);
        }
        let p_raw = self
            .p
            .as_deref()
            .ok_or_else(|| CliError::bad_input("missing --p (or the direct-sum flags)"))?;
        let p = if p_raw.eq_ignore_ascii_case("inf") {
            f64::INFINITY
        } else {
            p_raw
                .parse::<f64>()
                .map_err(|_| CliError::bad_input(format!("cannot parse exponent {p_raw:?}")))?
        };
        let n = self
            .n
            .ok_or_else(|| CliError::bad_input("missing --n"))?;
        Ok(SpaceSignature::lp(n, p)?)
    }
}

#[derive(Args)]
struct SolveArgs {
    /// residual tolerance
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// number of multistart runs
    #[arg(long, default_value_t = 16)]
    multistarts: usize,
    /// Blaschke-bit strategy
    #[arg(long, value_enum, default_value_t = BetaArg::Adaptive)]
    beta: BetaArg,
    /// random seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl SolveArgs {
    fn config(&self) -> SolveConfig {
        SolveConfig {
            tolerance: self.tol,
            multistarts: self.multistarts,
            beta_strategy: self.beta.into(),
            seed: self.seed,
            ..Default::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Invariant (Caratheodory = Kobayashi) distance between two points
    Distance {
        #[command(flatten)]
        space: SpaceArgs,
        /// first point, comma-separated entries like "0.5,0" or "0.1+0.2i,0.3"
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        /// second point
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        #[command(flatten)]
        solve: SolveArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Solve for the normalized complex geodesic joining two points
    Solve {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        #[command(flatten)]
        solve: SolveArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Verify a geodesic parameter file against the dual criterion
    Verify {
        /// parameter file (the JSON emitted by `solve`)
        #[arg(long)]
        params: PathBuf,
        /// boundary grid size
        #[arg(long, default_value_t = 256)]
        grid: usize,
        /// number of random polynomial competitors
        #[arg(long, default_value_t = 20)]
        competitors: usize,
        /// check tolerance
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Modulus of complex convexity sweep (with the companion quantity)
    Modulus {
        #[command(flatten)]
        space: SpaceArgs,
        /// comma-separated epsilon values; default sweeps 1e-1 .. 1e-3
        #[arg(long)]
        eps: Option<String>,
        #[arg(long, default_value_t = 16)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Holomorphic sectional curvature of the Kobayashi metric
    Curvature {
        #[command(flatten)]
        space: SpaceArgs,
        /// base point
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        /// direction
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[command(flatten)]
        solve: SolveArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Polydisc distance (max of coordinatewise Poincaré distances)
    Polydisc {
        /// dimension
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

// --- error handling ------------------------------------------------------------

#[derive(Debug)]
struct CliError {
    message: String,
    code: u8,
}

impl CliError {
    fn bad_input(msg: impl Into<String>) -> Self {
        CliError {
            message: msg.into(),
            code: 2,
        }
    }

    fn verification(msg: impl Into<String>) -> Self {
        CliError {
            message: msg.into(),
            code: 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Domain(_) | Error::Contract(_) | Error::Inadmissible { .. } => 2,
            Error::NonConvergence { .. } | Error::Eval { .. } | Error::Precision(_) => 3,
        };
        CliError {
            message: e.to_string(),
            code,
        }
    }
}

// --- parsing and formatting -------------------------------------------------------

/// Parse one complex literal: `re`, `re+imi`, `re-imi`, or `imi`.
fn parse_complex(s: &str) -> Result<Complex64, CliError> {
    let t = s.trim();
    if t.is_empty() {
        return Err(CliError::bad_input("empty complex literal"));
    }
    if let Ok(re) = t.parse::<f64>() {
        return Ok(Complex64::new(re, 0.0));
    }
    if let Some(im_part) = t.strip_suffix(['i', 'I']) {
        // find the split between real and imaginary parts: the last +/- that
        // is not leading and not part of an exponent
        let bytes = im_part.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            let ch = bytes[k];
            if (ch == b'+' || ch == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
                split = Some(k);
                break;
            }
        }
        let (re_str, im_str) = match split {
            Some(k) => (&im_part[..k], &im_part[k..]),
            None => ("0", im_part),
        };
        let re = if re_str.is_empty() {
            0.0
        } else {
            re_str
                .parse::<f64>()
                .map_err(|_| CliError::bad_input(format!("cannot parse {s:?}")))?
        };
        let im = match im_str {
            "" | "+" => 1.0,
            "-" => -1.0,
            other => other
                .parse::<f64>()
                .map_err(|_| CliError::bad_input(format!("cannot parse {s:?}")))?,
        };
        return Ok(Complex64::new(re, im));
    }
    Err(CliError::bad_input(format!("cannot parse {s:?}")))
}

fn parse_point(space: SpaceSignature, s: &str) -> Result<ComplexVector, CliError> {
    let entries: Vec<Complex64> = s
        .split(',')
        .map(parse_complex)
        .collect::<Result<_, _>>()?;
    Ok(ComplexVector::new(space, entries)?)
}

/// Round every number in a JSON tree to 12 significant digits.
fn round_json(v: &mut serde_json::Value) {
    match v {
        serde_json::Value::Number(n) => {
            if let Some(f) = n.as_f64() {
                if n.is_f64() {
                    if let Some(r) = serde_json::Number::from_f64(sig12(f)) {
                        *n = r;
                    }
                }
            }
        }
        serde_json::Value::Array(items) => items.iter_mut().for_each(round_json),
        serde_json::Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

fn emit_json(mut v: serde_json::Value) {
    round_json(&mut v);
    println!("{v}");
}

fn fmt_num(x: f64) -> String {
    format!("{}", sig12(x))
}

// --- command implementations ----------------------------------------------------

fn run() -> Result<(), CliError> {
    let cli = Cli::parse();
    match cli.command {
        Command::Distance {
            space,
            x,
            y,
            solve: solve_args,
            format,
        } => {
            let sig = space.build()?;
            let xv = parse_point(sig, &x)?;
            let yv = parse_point(sig, &y)?;
            let (distance, s, experimental) = match sig {
                SpaceSignature::Lp { p, .. } if p.is_infinite() => {
                    let d = polydisc_distance(&xv, &yv)?;
                    (d, d.tanh(), false)
                }
                SpaceSignature::Lp { .. } => {
                    let sol = solve(&xv, &yv, &solve_args.config())?;
                    (sol.distance(), sol.s, false)
                }
                SpaceSignature::DirectSum { .. } => {
                    let sol = solve_direct_sum(&xv, &yv, &solve_args.config())?;
                    (sol.distance(), sol.s, true)
                }
            };
            match format {
                Format::Json => {
                    let mut v = serde_json::json!({"distance": distance, "s": s});
                    if experimental {
                        v["experimental"] = serde_json::json!(true);
                    }
                    emit_json(v);
                }
                Format::Csv => {
                    println!("distance,s");
                    println!("{},{}", fmt_num(distance), fmt_num(s));
                }
            }
            Ok(())
        }
        Command::Solve {
            space,
            x,
            y,
            solve: solve_args,
            format,
        } => {
            let sig = space.build()?;
            let xv = parse_point(sig, &x)?;
            let yv = parse_point(sig, &y)?;
            let value = match sig {
                SpaceSignature::Lp { p, .. } if p.is_infinite() => {
                    return Err(CliError::bad_input(
                        "the polydisc has no geodesic solver; use `distance --p inf` or `polydisc`",
                    ))
                }
                SpaceSignature::Lp { .. } => {
                    let sol = solve(&xv, &yv, &solve_args.config())?;
                    serde_json::to_value(&sol).expect("solution serializes")
                }
                SpaceSignature::DirectSum { .. } => {
                    let sol = solve_direct_sum(&xv, &yv, &solve_args.config())?;
                    serde_json::json!({
                        "space": sig,
                        "gamma": [sol.params.gamma.re, sol.params.gamma.im],
                        "block_gamma": sol.params.block_gamma.iter()
                            .map(|g| vec![g.re, g.im]).collect::<Vec<_>>(),
                        "alpha": sol.params.alpha.iter().map(|a| vec![a.re, a.im]).collect::<Vec<_>>(),
                        "beta": sol.params.beta,
                        "c": sol.params.c.iter().map(|a| vec![a.re, a.im]).collect::<Vec<_>>(),
                        "s": sol.s,
                        "distance": sol.distance(),
                        "residual": sol.residual_norm,
                        "experimental": true,
                    })
                }
            };
            match format {
                Format::Json => emit_json(value),
                Format::Csv => {
                    println!("distance,s,residual");
                    println!(
                        "{},{},{}",
                        fmt_num(value["distance"].as_f64().unwrap_or(f64::NAN)),
                        fmt_num(value["s"].as_f64().unwrap_or(f64::NAN)),
                        fmt_num(value["residual"].as_f64().unwrap_or(f64::NAN)),
                    );
                }
            }
            Ok(())
        }
        Command::Verify {
            params,
            grid,
            competitors,
            tol,
            seed,
            format,
        } => {
            let text = std::fs::read_to_string(&params).map_err(|e| {
                CliError::bad_input(format!("cannot read {}: {e}", params.display()))
            })?;
            let parsed: GeodesicParams = serde_json::from_str(&text)
                .map_err(|e| CliError::bad_input(format!("bad parameter file: {e}")))?;
            let report = verify_geodesic(
                &parsed,
                &VerifyConfig {
                    grid,
                    competitors,
                    tolerance: tol,
                    seed,
                    ..Default::default()
                },
            )?;
            let pass = report.pass;
            match format {
                Format::Json => {
                    emit_json(serde_json::to_value(&report).expect("report serializes"))
                }
                Format::Csv => {
                    println!("check,value,verdict");
                    println!(
                        "constraints,{},{}",
                        fmt_num(report.constraint_scalar_residual.max(report.constraint_vector_residual)),
                        report.checks.constraints
                    );
                    println!(
                        "boundary,{},{}",
                        fmt_num(report.boundary_norm_max_dev),
                        report.checks.boundary
                    );
                    println!(
                        "alignment,{},{}",
                        fmt_num(report.alignment_max_dev),
                        report.checks.alignment
                    );
                    println!(
                        "poisson,{},{}",
                        fmt_num(report.poisson_min_real),
                        report.checks.poisson
                    );
                }
            }
            if pass {
                Ok(())
            } else {
                Err(CliError::verification("verification failed"))
            }
        }
        Command::Modulus {
            space,
            eps,
            trials,
            seed,
            format,
        } => {
            let sig = space.build()?;
            let eps_list: Vec<f64> = match eps {
                Some(list) => list
                    .split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<f64>()
                            .map_err(|_| CliError::bad_input(format!("bad epsilon {t:?}")))
                    })
                    .collect::<Result<_, _>>()?,
                None => (0..5).map(|k| 10f64.powf(-1.0 - 0.5 * k as f64)).collect(),
            };
            let rows = modulus_sweep(sig, &eps_list, trials, seed)?;
            match format {
                Format::Json => {
                    emit_json(serde_json::to_value(&rows).expect("rows serialize"))
                }
                Format::Csv => {
                    println!("epsilon,delta,omega_c,slope_so_far");
                    for row in rows {
                        println!(
                            "{},{},{},{}",
                            fmt_num(row.epsilon),
                            fmt_num(row.delta),
                            fmt_num(row.omega_c),
                            fmt_num(row.slope_so_far)
                        );
                    }
                }
            }
            Ok(())
        }
        Command::Curvature {
            space,
            x,
            v,
            solve: solve_args,
            format,
        } => {
            let sig = space.build()?;
            let xv = parse_point(sig, &x)?;
            let vv = parse_point(sig, &v)?;
            let kappa = curvature(
                &xv,
                &vv,
                &CurvatureConfig {
                    solve: solve_args.config(),
                    ..Default::default()
                },
            )?;
            match format {
                Format::Json => emit_json(serde_json::json!({"curvature": kappa})),
                Format::Csv => {
                    println!("curvature");
                    println!("{}", fmt_num(kappa));
                }
            }
            Ok(())
        }
        Command::Polydisc { n, x, y, format } => {
            let sig = SpaceSignature::lp(n, f64::INFINITY)?;
            let xv = parse_point(sig, &x)?;
            let yv = parse_point(sig, &y)?;
            let d = polydisc_distance(&xv, &yv)?;
            match format {
                Format::Json => emit_json(serde_json::json!({"distance": d})),
                Format::Csv => {
                    println!("distance");
                    println!("{}", fmt_num(d));
                }
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", serde_json::json!({"error": e.message}));
            ExitCode::from(e.code)
        }
    }
}
