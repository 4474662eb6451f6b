//! Command-line interface: JSON in, JSON out.
//!
//! Exit codes: 0 success, 1 verification failure or mathematical error,
//! 2 usage or parse error.

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::algebra::{set_tolerance, MPoly, Matrix, Mode, RatFun, Scalar, DEFAULT_DEPTH};
use crate::cmspace::{canonicalize, CMPoint, Quadruple};
use crate::flows::{flow_closed, flow_numeric};
use crate::grass::{
    baker_point, beta, lattice_basis, psi2_det, stationary_ansatz_order2, stationary_baker, tau32,
    AnsatzReport, GrPoint, GrassError,
};
use crate::opcalc::{b_map, intertwines, theta, Space};
use crate::verify::{self, Mutation, RunConfig, Suite};
use crate::wire::{self, WireError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Numeric,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Numeric => Mode::Numeric,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "cmgrass",
    version,
    about = "Calogero-Moser spaces, Baker functions and bispectral operators"
)]
pub struct Cli {
    /// Arithmetic used for sampled and converted inputs.
    #[arg(long, global = true, value_enum, default_value = "exact")]
    pub mode: ModeArg,
    /// Numeric comparison tolerance.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,
    /// Truncation depth of pseudodifferential operators.
    #[arg(long, global = true, default_value_t = DEFAULT_DEPTH)]
    pub depth: usize,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,
    /// Also write the JSON result to this file.
    #[arg(long, global = true)]
    pub json_out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

/// JSON given inline, as a file path, or `-` for standard input.
type Payload = String;

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run verification suites.
    Verify {
        /// Comma-separated suites, or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Flip the sign of the loop-action correction term.
        #[arg(long, hide = true)]
        inject_action_sign_error: bool,
    },
    /// Construct and transform points.
    #[command(subcommand)]
    Point(PointCommand),
    /// Flow of the Hamiltonian `tr(Y^k v α w)`.
    Flow {
        #[arg(long)]
        point: Payload,
        #[arg(long)]
        k: u32,
        /// The `r×r` matrix `α` as JSON.
        #[arg(long)]
        alpha_json: String,
        #[arg(long)]
        t: String,
        /// Integrate numerically with this many Runge-Kutta steps.
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Reduced Baker function of a point.
    Baker(BakerArgs),
    /// The partition-(3,2) τ-function.
    Tau {
        #[arg(long)]
        t1: Option<String>,
        #[arg(long)]
        t2: Option<String>,
        #[arg(long)]
        t3: Option<String>,
        #[arg(long)]
        t4: Option<String>,
    },
    /// Bounded search for the leading-coefficient lattice.
    Lattice {
        /// A subspace or a point.
        #[arg(long)]
        point: Payload,
        #[arg(long, default_value_t = 2)]
        order_bound: usize,
        #[arg(long, default_value_t = 3)]
        degree_bound: usize,
    },
    /// Order-2 stationary ansatz at sampled `x`.
    Ansatz {
        #[arg(long)]
        point: Payload,
        /// Comma-separated values of `x`.
        #[arg(long, default_value = "-2,-1,0,1,2")]
        x: String,
    },
    /// The intertwiner Θ of an operator and its bispectral image.
    Bispect {
        /// Target point `V`.
        #[arg(long)]
        point: Payload,
        /// Operator in the pseudodifferential JSON schema.
        #[arg(long)]
        op: Payload,
        /// Source point `U`; the base point when omitted.
        #[arg(long)]
        source: Option<Payload>,
    },
}

#[derive(Debug, Subcommand)]
pub enum PointCommand {
    /// Validate coordinates and return the canonical point.
    New {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        alpha: String,
        /// Rows `v_i` as a JSON array of arrays.
        #[arg(long)]
        v: String,
        /// Columns `w_i` as a JSON array of arrays.
        #[arg(long)]
        w: String,
    },
    /// Canonical coordinates of a point.
    Canon { payload: Payload },
    /// `[X, Y] + vw + I`.
    Moment { payload: Payload },
    /// Bispectral involution.
    B { payload: Payload },
    /// Embedding into rank `r + 1`.
    Embed { payload: Payload },
}

#[derive(Debug, Args)]
pub struct BakerArgs {
    #[arg(long)]
    pub point: Payload,
    /// Stationary Baker function at this `x`.
    #[arg(long, conflicts_with = "jet")]
    pub x: Option<String>,
    /// Loop jet along the spectrum, for the general Baker function.
    #[arg(long)]
    pub jet: Option<Payload>,
    /// Use the determinant formula (rank one).
    #[arg(long)]
    pub psi2: bool,
    /// Comma-separated `z` at which to evaluate.
    #[arg(long)]
    pub z: Option<String>,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub body: Value,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure {
            code: 2,
            body: json!({"error": "usage", "message": msg.into()}),
        }
    }

    fn math(kind: &str, msg: impl Into<String>) -> Self {
        Failure {
            code: 1,
            body: json!({"error": kind, "message": msg.into()}),
        }
    }
}

impl From<WireError> for Failure {
    fn from(e: WireError) -> Self {
        Failure {
            code: 2,
            body: json!({"error": "parse", "path": e.path, "message": e.msg}),
        }
    }
}

impl From<GrassError> for Failure {
    fn from(e: GrassError) -> Self {
        match e {
            GrassError::OutsideBigCell(det) => Failure {
                code: 1,
                body: json!({"error": "OutsideBigCell", "det": wire::scalar_to_json(&det), "message": "det(xI + X) = 0"}),
            },
            other => Failure::math("grassmannian", other.to_string()),
        }
    }
}

fn read_payload(p: &str) -> Result<Value, Failure> {
    let text = if p == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::usage(format!("stdin: {e}")))?;
        s
    } else if p.trim_start().starts_with(['{', '[']) {
        p.to_string()
    } else {
        std::fs::read_to_string(p).map_err(|e| Failure::usage(format!("{p}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::usage(format!("invalid JSON: {e}")))
}

/// JSON text, or a bare rational such as `3/2`.
fn parse_json_arg(s: &str) -> Value {
    serde_json::from_str(s).unwrap_or_else(|_| Value::String(s.to_string()))
}

fn parse_scalar(s: &str, path: &str) -> Result<Scalar, Failure> {
    Ok(wire::scalar_from_json(&parse_json_arg(s), path)?)
}

fn parse_scalars(s: &str, path: &str) -> Result<Vec<Scalar>, Failure> {
    s.split(',')
        .enumerate()
        .map(|(i, x)| parse_scalar(x.trim(), &format!("{path}[{i}]")))
        .collect()
}

fn to_mode_point(p: CMPoint, mode: Mode) -> CMPoint {
    match mode {
        Mode::Numeric => p.to_numeric(),
        Mode::Exact => p,
    }
}

fn to_mode_quadruple(q: Quadruple, mode: Mode) -> Quadruple {
    match mode {
        Mode::Numeric => q.to_numeric(),
        Mode::Exact => q,
    }
}

fn cm_or_quadruple(v: &Value, mode: Mode) -> Result<Quadruple, Failure> {
    Ok(to_mode_quadruple(wire::any_point_from_json(v)?, mode))
}

fn canonical(q: &Quadruple) -> Result<CMPoint, Failure> {
    canonicalize(q).map_err(|e| Failure::math("canonicalize", e.to_string()))
}

fn grpoint_or_beta(v: &Value) -> Result<GrPoint, Failure> {
    if v.get("sites").is_some() {
        Ok(wire::grpoint_from_json(v)?)
    } else {
        Ok(beta(&wire::cmpoint_from_json(v)?))
    }
}

fn sampled(psi: &Matrix<RatFun>, zs: &[Scalar]) -> Vec<Value> {
    zs.iter()
        .map(|z| {
            let vals: Option<Vec<Scalar>> = psi.entries().iter().map(|f| f.eval(z)).collect();
            match vals {
                Some(v) => json!({"z": wire::scalar_to_json(z), "value": wire::matrix_to_json(&Matrix::new(psi.rows(), psi.cols(), v))}),
                None => json!({"z": wire::scalar_to_json(z), "value": Value::Null, "pole": true}),
            }
        })
        .collect()
}

/// Runs a parsed command; `Ok` carries the JSON result and exit code.
pub fn execute(cli: &Cli) -> Result<(Value, i32), Failure> {
    if cli.tol.is_nan() || cli.tol <= 0.0 {
        return Err(Failure::usage("--tol must be positive"));
    }
    if cli.depth == 0 {
        return Err(Failure::usage("--depth must be at least 1"));
    }
    let mode: Mode = cli.mode.into();
    match &cli.command {
        Command::Verify {
            suite,
            inject_action_sign_error,
        } => {
            let suites = Suite::parse_list(suite).map_err(Failure::usage)?;
            let mut cfg = RunConfig::new(mode, cli.tol, cli.depth, cli.seed, suites)
                .map_err(Failure::usage)?;
            if *inject_action_sign_error {
                cfg.mutation = Some(Mutation::ActionSign);
            }
            let rep = verify::run(&cfg);
            let mut err = std::io::stderr();
            for line in rep.lines() {
                let _ = writeln!(err, "{line}");
            }
            let _ = writeln!(err, "seed {}", rep.seed);
            Ok((rep.to_json(), if rep.passed() { 0 } else { 1 }))
        }
        Command::Point(pc) => point(pc, mode).map(|v| (v, 0)),
        Command::Flow {
            point,
            k,
            alpha_json,
            t,
            steps,
        } => {
            let p = to_mode_point(wire::cmpoint_from_json(&read_payload(point)?)?, mode);
            let alpha = wire::matrix_from_json(&parse_json_arg(alpha_json), p.r, "$alpha")?;
            let t = parse_scalar(t, "$t")?;
            let out = match steps {
                Some(n) => {
                    let q = flow_numeric(&p.to_quadruple(), *k, &alpha, &t, *n)
                        .map_err(|e| Failure::math("flow", e.to_string()))?;
                    canonical(&q)?
                }
                None => flow_closed(&p, *k, &alpha, &t)
                    .map_err(|e| Failure::math("flow", e.to_string()))?,
            };
            Ok((wire::cmpoint_to_json(&out), 0))
        }
        Command::Baker(args) => baker_cmd(args, mode).map(|v| (v, 0)),
        Command::Tau { t1, t2, t3, t4 } => {
            let given = [t1, t2, t3, t4];
            if given.iter().all(|t| t.is_some()) {
                let v: Vec<Scalar> = given
                    .iter()
                    .enumerate()
                    .map(|(i, t)| {
                        parse_scalar(t.as_deref().unwrap_or("0"), &format!("$t{}", i + 1))
                    })
                    .collect::<Result<_, _>>()?;
                return Ok((
                    json!({"tau": wire::scalar_to_json(&tau32(&v[0], &v[1], &v[2], &v[3]))}),
                    0,
                ));
            }
            if given.iter().any(|t| t.is_some()) {
                return Err(Failure::usage("give all of --t1 --t2 --t3 --t4, or none"));
            }
            let t: Vec<MPoly> = (0..4).map(MPoly::var).collect();
            Ok((
                json!({"tau": tau32(&t[0], &t[1], &t[2], &t[3]).display_in("t")}),
                0,
            ))
        }
        Command::Lattice {
            point,
            order_bound,
            degree_bound,
        } => {
            let w = grpoint_or_beta(&read_payload(point)?)?;
            let rep = lattice_basis(&w, *order_bound, *degree_bound);
            Ok((
                json!({
                    "order_bound": rep.order_bound,
                    "degree_bound": rep.degree_bound,
                    "standard": rep.is_standard(w.r),
                    "z_stable": w.z_stable(),
                    "generators": rep.generators.iter().map(|g| g.iter().map(wire::ratfun_to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
                    "generators_text": rep.generators.iter().map(|g| g.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
                    "members_per_order": rep.members.iter().map(Vec::len).collect::<Vec<_>>(),
                }),
                0,
            ))
        }
        Command::Ansatz { point, x } => {
            let w = grpoint_or_beta(&read_payload(point)?)?;
            let xs = parse_scalars(x, "$x")?;
            let out: Vec<Value> = stationary_ansatz_order2(&w, &xs)?
                .into_iter()
                .map(|(x, rep)| match rep {
                    AnsatzReport::Solvable { a, b, unique } => json!({
                        "x": wire::scalar_to_json(&x), "solvable": true, "unique": unique,
                        "A": wire::matrix_to_json(&a), "B": wire::matrix_to_json(&b),
                    }),
                    AnsatzReport::NoSolution => {
                        json!({"x": wire::scalar_to_json(&x), "solvable": false})
                    }
                })
                .collect();
            Ok((json!(out), 0))
        }
        Command::Bispect { point, op, source } => {
            let v = Space::Point(cm_or_quadruple(&read_payload(point)?, mode)?);
            let d = wire::pdo_from_json(&read_payload(op)?)?;
            let u = match source {
                Some(s) => Space::Point(cm_or_quadruple(&read_payload(s)?, mode)?),
                None => Space::Base(d.shape().0),
            };
            let th = theta(&d, &u, &v, cli.depth);
            let body = match th {
                Ok(th) => {
                    let ok = intertwines(&th, &d, &u, &v, cli.depth).unwrap_or(false);
                    let bm = b_map(&d, &u, &v, cli.depth).ok();
                    json!({
                        "differential": true,
                        "theta": wire::pdo_to_json(&th),
                        "theta_text": th.to_string(),
                        "intertwines": ok,
                        "b_map": bm.as_ref().map(|b| wire::pdo_to_json(&b.op)),
                        "b_map_reverified": bm.as_ref().and_then(|b| b.reverified),
                    })
                }
                Err(crate::opcalc::OpError::NotDifferential { order, coefficient }) => json!({
                    "differential": false,
                    "order": order,
                    "coefficient": wire::ratmatrix_to_json(&coefficient),
                }),
                Err(e) => return Err(Failure::math("operator", e.to_string())),
            };
            let ok = body["differential"].as_bool().unwrap_or(false);
            Ok((body, if ok { 0 } else { 1 }))
        }
    }
}

fn point(pc: &PointCommand, mode: Mode) -> Result<Value, Failure> {
    match pc {
        PointCommand::New {
            lambda,
            alpha,
            v,
            w,
        } => {
            let rows = |s: &str, path: &str| -> Result<Vec<Vec<Scalar>>, Failure> {
                let m = wire::matrix_from_json(&parse_json_arg(s), 0, path)?;
                Ok(m.to_rows())
            };
            let lam =
                wire::matrix_from_json(&json!([parse_json_arg(lambda)]), 0, "$lambda")?.row(0);
            let al = wire::matrix_from_json(&json!([parse_json_arg(alpha)]), 0, "$alpha")?.row(0);
            let p = CMPoint::new(lam, al, rows(v, "$v")?, rows(w, "$w")?).map_err(|e| {
                Failure::from(WireError {
                    path: "$".into(),
                    msg: e.to_string(),
                })
            })?;
            Ok(wire::cmpoint_to_json(&to_mode_point(p, mode)))
        }
        PointCommand::Canon { payload } => {
            let q = cm_or_quadruple(&read_payload(payload)?, mode)?;
            Ok(wire::cmpoint_to_json(&canonical(&q)?))
        }
        PointCommand::Moment { payload } => {
            let q = cm_or_quadruple(&read_payload(payload)?, mode)?;
            Ok(
                json!({"residual": wire::matrix_to_json(&q.moment_residual()), "on_fiber": q.is_on_fiber()}),
            )
        }
        PointCommand::B { payload } => {
            let v = read_payload(payload)?;
            let q = to_mode_quadruple(wire::quadruple_from_json(&v)?, mode);
            Ok(wire::quadruple_to_json(&q.bisp_involution()))
        }
        PointCommand::Embed { payload } => {
            let v = read_payload(payload)?;
            if v.get("X").is_some() {
                Ok(wire::quadruple_to_json(
                    &to_mode_quadruple(wire::quadruple_from_json(&v)?, mode).embed_rank(),
                ))
            } else {
                Ok(wire::cmpoint_to_json(
                    &to_mode_point(wire::cmpoint_from_json(&v)?, mode).embed_rank(),
                ))
            }
        }
    }
}

fn baker_cmd(args: &BakerArgs, mode: Mode) -> Result<Value, Failure> {
    let payload = read_payload(&args.point)?;
    let zs = match &args.z {
        Some(z) => parse_scalars(z, "$z")?,
        None => Vec::new(),
    };
    let psi = match (&args.x, &args.jet) {
        (Some(x), None) => {
            let q = cm_or_quadruple(&payload, mode)?;
            let x = parse_scalar(x, "$x")?;
            if args.psi2 {
                Matrix::new(1, 1, vec![psi2_det(&q, &x)?])
            } else {
                stationary_baker(&q, &x)?
            }
        }
        (None, Some(j)) => {
            let p = to_mode_point(wire::cmpoint_from_json(&payload)?, mode);
            let jet = wire::jet_from_json(&read_payload(j)?)?;
            baker_point(&p, &jet)?
        }
        _ => return Err(Failure::usage("give exactly one of --x or --jet")),
    };
    Ok(json!({
        "psi": wire::ratmatrix_to_json(&psi),
        "text": psi.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "samples": sampled(&psi, &zs),
    }))
}

/// Parses arguments, runs, prints, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    set_tolerance(cli.tol);
    let (body, code) = match execute(&cli) {
        Ok(x) => x,
        Err(f) => (f.body, f.code),
    };
    let text = serde_json::to_string(&body).expect("JSON values serialize");
    let _ = writeln!(std::io::stdout(), "{text}");
    if let Some(path) = &cli.json_out {
        if let Err(e) = std::fs::write(path, &text) {
            eprintln!("cannot write {}: {e}", path.display());
            return 2;
        }
    }
    code
}
