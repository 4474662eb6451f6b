//! Seeded verification suites over the library's identities, with
//! machine-readable reports.

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::algebra::{MPoly, MatPDO, Matrix, Mode, Poly, RatFun, Ring, Scalar};
use crate::cmspace::{canonicalize, CMPoint, Quadruple};
use crate::flows::{
    flow_closed, flow_nilpotent, flow_numeric, flow_scalar, hamiltonian, poisson_bracket,
};
use crate::grass::{
    baker, beta, cell_baker, cell_to_point, deinterleave, deinterleave_point, interleave,
    lattice_basis, psi2_det, rows_satisfy_at_jet, stationary_ansatz_order2, stationary_baker,
    stationary_baker_in_x, tau32, AnsatzReport, CellPoint, GrPoint, GrassError, Provenance, Site,
};
use crate::loopgroup::{act_coordinates, jet_mul, jet_of_polymat, GammaJet, LoopError};
use crate::opcalc::{d_membership_direct, kbw, kw, latt_witness, theta, Space};
use crate::sample::Sampler;
use crate::wire;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Moment,
    Flows,
    Action,
    Baker,
    Bispectral,
    Lattice,
    Tau,
    Examples,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Moment,
        Suite::Flows,
        Suite::Action,
        Suite::Baker,
        Suite::Bispectral,
        Suite::Lattice,
        Suite::Tau,
        Suite::Examples,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Moment => "moment",
            Suite::Flows => "flows",
            Suite::Action => "action",
            Suite::Baker => "baker",
            Suite::Bispectral => "bispectral",
            Suite::Lattice => "lattice",
            Suite::Tau => "tau",
            Suite::Examples => "examples",
        }
    }

    /// Parses a comma-separated list; `all` selects every suite.
    pub fn parse_list(s: &str) -> Result<Vec<Suite>, String> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if part == "all" {
                out.extend(Suite::ALL);
            } else {
                out.push(part.parse()?);
            }
        }
        out.sort();
        out.dedup();
        if out.is_empty() {
            return Err("no suite selected".into());
        }
        Ok(out)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

/// Deliberate defects, used to check that the suites can fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    /// Flips the sign of the `α` correction term of the loop action.
    ActionSign,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub mode: Mode,
    pub tol: f64,
    pub depth: usize,
    pub seed: u64,
    pub suites: Vec<Suite>,
    pub mutation: Option<Mutation>,
}

impl RunConfig {
    pub fn new(
        mode: Mode,
        tol: f64,
        depth: usize,
        seed: u64,
        suites: Vec<Suite>,
    ) -> Result<Self, String> {
        if tol.is_nan() || tol <= 0.0 {
            return Err(format!("tolerance must be positive, got {tol}"));
        }
        if depth == 0 {
            return Err("depth must be at least 1".into());
        }
        Ok(RunConfig {
            mode,
            tol,
            depth,
            seed,
            suites,
            mutation: None,
        })
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            mode: Mode::Exact,
            tol: 1e-8,
            depth: crate::algebra::DEFAULT_DEPTH,
            seed: 7,
            suites: Suite::ALL.to_vec(),
            mutation: None,
        }
    }
}

/// One named property, checked over one or more cases.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub cases: usize,
    pub passed: bool,
    /// The first counterexample, replayable from its inputs.
    pub counterexample: Option<Value>,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub seed: u64,
    pub mode: Mode,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "seed": self.seed,
            "mode": self.mode.to_string(),
            "passed": self.passed(),
            "checks": self.checks.iter().map(|c| json!({
                "suite": c.suite.name(),
                "name": c.name,
                "cases": c.cases,
                "passed": c.passed,
                "counterexample": c.counterexample,
            })).collect::<Vec<_>>(),
        })
    }

    /// One line per check.
    pub fn lines(&self) -> Vec<String> {
        self.checks
            .iter()
            .map(|c| {
                let status = if c.passed { "PASS" } else { "FAIL" };
                format!("{status} {}/{} ({} cases)", c.suite, c.name, c.cases)
            })
            .collect()
    }
}

/// Runs the selected suites, each on its own thread, and merges the
/// results in suite order.
pub fn run(cfg: &RunConfig) -> Report {
    let mut checks: Vec<Check> = std::thread::scope(|scope| {
        let handles: Vec<_> = cfg
            .suites
            .iter()
            .map(|&suite| scope.spawn(move || run_suite(suite, cfg)))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("suite thread panicked"))
            .collect()
    });
    checks.sort_by_key(|c| c.suite);
    Report {
        seed: cfg.seed,
        mode: cfg.mode,
        checks,
    }
}

pub fn run_suite(suite: Suite, cfg: &RunConfig) -> Vec<Check> {
    let seed = cfg.seed ^ (suite as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    let mut ctx = Ctx {
        suite,
        cfg,
        rng: Sampler::new(seed),
        checks: Vec::new(),
    };
    match suite {
        Suite::Moment => moment(&mut ctx),
        Suite::Flows => flows(&mut ctx),
        Suite::Action => action(&mut ctx),
        Suite::Baker => baker_suite(&mut ctx),
        Suite::Bispectral => bispectral(&mut ctx),
        Suite::Lattice => lattice(&mut ctx),
        Suite::Tau => tau(&mut ctx),
        Suite::Examples => examples(&mut ctx),
    }
    ctx.checks
}

type CaseResult = Result<(), Value>;

struct Ctx<'a> {
    suite: Suite,
    cfg: &'a RunConfig,
    rng: Sampler,
    checks: Vec<Check>,
}

impl Ctx<'_> {
    /// Runs `count` cases and records the first failure.
    fn cases(
        &mut self,
        name: &str,
        count: usize,
        mut f: impl FnMut(&mut Sampler, usize) -> CaseResult,
    ) {
        let mut counterexample = None;
        for i in 0..count {
            if let Err(payload) = f(&mut self.rng, i) {
                counterexample =
                    Some(json!({"case": i, "seed": self.cfg.seed, "payload": payload}));
                break;
            }
        }
        self.checks.push(Check {
            suite: self.suite,
            name: name.to_string(),
            cases: count,
            passed: counterexample.is_none(),
            counterexample,
        });
    }

    fn single(&mut self, name: &str, f: impl FnOnce() -> CaseResult) {
        let mut f = Some(f);
        self.cases(name, 1, |_, _| (f.take().expect("called once"))());
    }

    fn numeric(&self) -> bool {
        self.cfg.mode == Mode::Numeric
    }
}

fn ensure(ok: bool, payload: impl FnOnce() -> Value) -> CaseResult {
    if ok {
        Ok(())
    } else {
        Err(payload())
    }
}

fn failure(e: impl fmt::Display, inputs: Value) -> Value {
    json!({"error": e.to_string(), "inputs": inputs})
}

fn s(n: i64) -> Scalar {
    Scalar::from_int(n)
}

fn dims(rng: &mut Sampler, max_n: usize, max_r: usize) -> (usize, usize) {
    (
        rng.int(1, max_n as i64) as usize,
        rng.int(1, max_r as i64) as usize,
    )
}

/// Largest coordinate difference of two points in canonical gauge.
pub fn point_distance(a: &CMPoint, b: &CMPoint) -> f64 {
    if a.n != b.n || a.r != b.r {
        return f64::INFINITY;
    }
    let d = |x: &[Scalar], y: &[Scalar]| {
        x.iter()
            .zip(y)
            .map(|(p, q)| (p - q).abs())
            .fold(0.0, f64::max)
    };
    let mut m = d(&a.lambda, &b.lambda).max(d(&a.alpha, &b.alpha));
    for i in 0..a.n {
        m = m
            .max(d(&a.vrow[i], &b.vrow[i]))
            .max(d(&a.wcol[i], &b.wcol[i]));
    }
    m
}

fn on_fiber(q: &Quadruple, tol: f64) -> bool {
    if q.mode() == Mode::Exact {
        q.is_on_fiber()
    } else {
        q.moment_residual().max_abs() <= tol
    }
}

fn moment(ctx: &mut Ctx) {
    let tol = ctx.cfg.tol;
    let numeric = ctx.numeric();
    ctx.cases("fiber", 40, |rng, _| {
        let (n, r) = dims(rng, 5, 3);
        let p = if numeric {
            rng.cm_point_numeric(n, r)
        } else {
            rng.cm_point(n, r)
        };
        let q = p.from_cd_coords();
        ensure(on_fiber(&q, tol), || wire::cmpoint_to_json(&p))
    });
    ctx.single("two-point example", || {
        let p = CMPoint::new(
            vec![s(0), s(1)],
            vec![s(0), s(0)],
            vec![vec![s(1)], vec![s(1)]],
            vec![vec![s(-1)], vec![s(-1)]],
        )
        .map_err(|e| failure(e, Value::Null))?;
        let q = p.from_cd_coords();
        ensure(
            q.x == Matrix::from_ints(&[&[0, 1], &[-1, 0]]) && q.is_on_fiber(),
            || wire::quadruple_to_json(&q),
        )
    });
    ctx.cases("gauge invariance", 20, |rng, _| {
        let (n, r) = dims(rng, 4, 3);
        let p = rng.cm_point(n, r);
        let mut g = Matrix::zeros(n, n);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.rotate_left(rng.int(0, n as i64 - 1) as usize);
        for (i, &j) in perm.iter().enumerate() {
            g[(i, j)] = rng.nonzero_scalar(3);
        }
        let moved = p
            .to_quadruple()
            .gl_conjugate(&g)
            .and_then(|q| canonicalize(&q));
        ensure(
            moved.as_ref() == Ok(&p),
            || json!({"point": wire::cmpoint_to_json(&p), "g": wire::matrix_to_json(&g)}),
        )
    });
    ctx.cases("involution and embedding", 20, |rng, _| {
        let (n, r) = dims(rng, 4, 3);
        let q = rng.cm_point(n, r).to_quadruple();
        let b = q.bisp_involution();
        let e = q.embed_rank();
        ensure(
            b.bisp_involution() == q && b.is_on_fiber() && e.is_on_fiber() && e.r == r + 1,
            || wire::quadruple_to_json(&q),
        )
    });
}

fn nilpotent(rng: &mut Sampler) -> Matrix<Scalar> {
    let c = rng.nonzero_scalar(2);
    let d = rng.scalar(2);
    // [[d c, -d²], [c², -c d]] squares to zero.
    Matrix::from_rows(vec![
        vec![&d * &c, (&d * &d).negated()],
        vec![&c * &c, (&c * &d).negated()],
    ])
}

fn flows(ctx: &mut Ctx) {
    let tol = ctx.cfg.tol;
    ctx.cases("nilpotent flow keeps Y and the fiber", 20, |rng, _| {
        let (n, _) = dims(rng, 4, 1);
        let q = rng.cm_point(n, 2).to_quadruple();
        let alpha = nilpotent(rng);
        let k = rng.int(0, 3) as u32;
        let t = rng.scalar(3);
        let out = flow_nilpotent(&q, k, &alpha, &t).map_err(|e| failure(e, wire::quadruple_to_json(&q)))?;
        ensure(out.y == q.y && out.is_on_fiber(), || {
            json!({"point": wire::quadruple_to_json(&q), "alpha": wire::matrix_to_json(&alpha), "k": k})
        })
    });
    ctx.cases("closed form matches the nilpotent flow", 20, |rng, _| {
        let (n, _) = dims(rng, 4, 1);
        let p = rng.cm_point(n, 2);
        let alpha = nilpotent(rng);
        let k = rng.int(0, 3) as u32;
        let t = rng.scalar(3);
        let payload = || json!({"point": wire::cmpoint_to_json(&p), "alpha": wire::matrix_to_json(&alpha), "k": k});
        let closed = flow_closed(&p, k, &alpha, &t).map_err(|e| failure(e, payload()))?;
        let direct = flow_nilpotent(&p.to_quadruple(), k, &alpha, &t)
            .map_err(|e| failure(e, payload()))
            .and_then(|q| canonicalize(&q).map_err(|e| failure(e, payload())))?;
        ensure(closed == direct, payload)
    });
    ctx.cases("one-parameter group", 20, |rng, _| {
        let (n, _) = dims(rng, 4, 1);
        let p = rng.cm_point(n, 2);
        let alpha = nilpotent(rng);
        let k = rng.int(0, 3) as u32;
        let (t1, t2) = (rng.scalar(3), rng.scalar(3));
        let payload = || json!({"point": wire::cmpoint_to_json(&p), "alpha": wire::matrix_to_json(&alpha), "k": k});
        let two = flow_closed(&p, k, &alpha, &t1)
            .and_then(|a| flow_closed(&a, k, &alpha, &t2))
            .map_err(|e| failure(e, payload()))?;
        let one = flow_closed(&p, k, &alpha, &(&t1 + &t2)).map_err(|e| failure(e, payload()))?;
        ensure(one == two, payload)
    });
    ctx.cases("scalar flows compose", 20, |rng, _| {
        let (n, r) = dims(rng, 4, 3);
        let q = rng.cm_point(n, r).to_quadruple();
        let (a, b) = (rng.poly(3, 3), rng.poly(3, 3));
        let lhs = flow_scalar(&flow_scalar(&q, &a), &b);
        ensure(lhs == flow_scalar(&q, &(&a + &b)), || {
            wire::quadruple_to_json(&q)
        })
    });
    ctx.cases("closed form matches Runge-Kutta", 6, |rng, _| {
        let (n, _) = dims(rng, 3, 1);
        let p = rng.cm_point_numeric(n, 2);
        let alpha = rng.numeric_matrix(2, 2);
        let k = rng.int(0, 2) as u32;
        let t = Scalar::numeric(rng.unit_f64(), 0.0);
        let payload = || json!({"point": wire::cmpoint_to_json(&p), "alpha": wire::matrix_to_json(&alpha), "k": k, "t": wire::scalar_to_json(&t)});
        let closed = flow_closed(&p, k, &alpha, &t).map_err(|e| failure(e, payload()))?;
        let rk = flow_numeric(&p.to_quadruple(), k, &alpha, &t, 2000)
            .map_err(|e| failure(e, payload()))
            .and_then(|q| canonicalize(&q).map_err(|e| failure(e, payload())))?;
        ensure(point_distance(&closed, &rk) <= tol.max(1e-8), payload)
    });
    ctx.cases("Poisson relations", 6, |rng, _| {
        let (n, _) = dims(rng, 3, 1);
        let q = rng.cm_point_numeric(n, 2).to_quadruple();
        let (a, b) = (rng.numeric_matrix(2, 2), rng.numeric_matrix(2, 2));
        for k in 0..=2 {
            for l in 0..=2 {
                let lhs = poisson_bracket(&q, (k, &a), (l, &b), 1e-4);
                let rhs = hamiltonian(&q, k + l, &a.commutator(&b));
                if (&lhs - &rhs).abs() > 1e-6 * rhs.abs().max(1.0) {
                    return Err(json!({"point": wire::quadruple_to_json(&q), "k": k, "l": l,
                        "alpha": wire::matrix_to_json(&a), "beta": wire::matrix_to_json(&b)}));
                }
            }
        }
        Ok(())
    });
}

fn action(ctx: &mut Ctx) {
    let sign = match ctx.cfg.mutation {
        Some(Mutation::ActionSign) => -1,
        None => 1,
    };
    let apply = move |p: &CMPoint, j: &GammaJet| -> Result<CMPoint, LoopError> {
        let (alpha, vrow, wcol) = act_coordinates(p, j, sign)?;
        Ok(CMPoint::new(p.lambda.clone(), alpha, vrow, wcol)?)
    };
    let numeric = ctx.numeric();
    let sample = move |rng: &mut Sampler, n: usize, r: usize| {
        if numeric {
            rng.cm_point_numeric(n, r)
        } else {
            rng.cm_point(n, r)
        }
    };
    let payload = |p: &CMPoint, j: &GammaJet| json!({"point": wire::cmpoint_to_json(p), "jet": wire::jet_to_json(j)});
    ctx.single("n=1 jet (1,3) against the scalar subgroup", || {
        let p = CMPoint::new(vec![s(0)], vec![s(2)], vec![vec![s(1)]], vec![vec![s(-1)]])
            .expect("valid point");
        let j = GammaJet::new(
            vec![s(0)],
            vec![Matrix::from_ints(&[&[1]])],
            vec![Matrix::from_ints(&[&[3]])],
        )
        .expect("valid jet");
        let got = apply(&p, &j).map_err(|e| failure(e, payload(&p, &j)))?;
        let oracle = canonicalize(&flow_scalar(&p.to_quadruple(), &Poly::from_ints(&[0, 3])));
        ensure(
            oracle.as_ref() == Ok(&got),
            || json!({"inputs": payload(&p, &j), "got": wire::cmpoint_to_json(&got)}),
        )
    });
    ctx.cases("scalar loops act as the scalar flow", 20, |rng, _| {
        let (n, r) = dims(rng, 4, 3);
        let p = sample(rng, n, r);
        let poly = rng.poly(3, 3);
        let j = GammaJet::scalar_exp_reduced(&poly, &p.lambda, r);
        let got = apply(&p, &j).map_err(|e| failure(e, payload(&p, &j)))?;
        let oracle = canonicalize(&flow_scalar(&p.to_quadruple(), &poly));
        ensure(oracle.as_ref() == Ok(&got), || payload(&p, &j))
    });
    ctx.cases("composition", 30, |rng, _| {
        let (n, _) = dims(rng, 4, 1);
        let r = rng.int(1, 3) as usize;
        let p = sample(rng, n, r);
        let g1 = jet_of_polymat(&rng.unimodular(r, 3, 2), &p.lambda).expect("unimodular");
        let g2 = jet_of_polymat(&rng.unimodular(r, 3, 2), &p.lambda).expect("unimodular");
        let lhs = apply(&p, &g1).and_then(|a| apply(&a, &g2));
        let rhs = jet_mul(&g1, &g2).and_then(|g| apply(&p, &g));
        ensure(lhs.is_ok() && lhs == rhs, || {
            json!({"point": wire::cmpoint_to_json(&p), "first": wire::jet_to_json(&g1), "second": wire::jet_to_json(&g2)})
        })
    });
    ctx.cases("pairing preserved", 20, |rng, _| {
        let (n, r) = dims(rng, 4, 3);
        let p = rng.cm_point(n, r);
        let j = rng.polynomial_jet(&p.lambda, r);
        let (_, vrow, wcol) =
            act_coordinates(&p, &j, sign).map_err(|e| failure(e, payload(&p, &j)))?;
        let ok = vrow
            .iter()
            .zip(&wcol)
            .all(|(v, w)| v.iter().zip(w).fold(s(0), |acc, (a, b)| &acc + &(a * b)) == s(-1));
        ensure(ok, || payload(&p, &j))
    });
}

/// Each entry of `ψ - I` vanishes at infinity.
fn is_normalized(psi: &Matrix<RatFun>) -> bool {
    let id: Matrix<RatFun> = Matrix::identity(psi.rows());
    psi.sub(&id)
        .entries()
        .iter()
        .all(|e| e.is_zero() || e.order_at_infinity() > 0)
}

fn baker_suite(ctx: &mut Ctx) {
    ctx.cases("rows lie in W", 20, |rng, _| {
        let (n, r) = dims(rng, 3, 2);
        let p = rng.cm_point(n, r);
        let w = beta(&p);
        let j = rng.polynomial_jet(&p.lambda, r);
        let payload = || json!({"point": wire::cmpoint_to_json(&p), "jet": wire::jet_to_json(&j)});
        match baker(&w, &j) {
            Ok(psi) => {
                let ok = rows_satisfy_at_jet(&w, &psi, &j).map_err(|e| failure(e, payload()))?;
                ensure(ok && is_normalized(&psi), payload)
            }
            Err(GrassError::OutsideBigCell(_)) => Ok(()),
            Err(e) => Err(failure(e, payload())),
        }
    });
    ctx.cases("equivariance", 12, |rng, _| {
        let (n, _) = dims(rng, 3, 1);
        let p = rng.cm_point(n, 2);
        let gamma = rng.unimodular(2, 3, 2);
        let g = rng.polynomial_loop(2);
        let jg = jet_of_polymat(&g, &p.lambda).expect("invertible loop");
        let jgamma = jet_of_polymat(&gamma, &p.lambda).expect("unimodular");
        let payload = || {
            json!({"point": wire::cmpoint_to_json(&p), "g": wire::jet_to_json(&jg), "gamma": wire::jet_to_json(&jgamma)})
        };
        let left = jgamma
            .inverse()
            .and_then(|inv| jet_mul(&jg, &inv))
            .map_err(|e| failure(e, payload()))
            .map(|j| baker(&beta(&p), &j))?;
        let moved = crate::loopgroup::act(&p, &jgamma).map_err(|e| failure(e, payload()))?;
        let right = baker(&beta(&moved), &jg);
        match (left, right) {
            (Ok(a), Ok(b)) => ensure(a == b, payload),
            (Err(GrassError::OutsideBigCell(_)), Err(GrassError::OutsideBigCell(_))) => Ok(()),
            _ => Err(payload()),
        }
    });
    ctx.cases("rank-one determinant formula", 12, |rng, _| {
        let n = rng.int(1, 6) as usize;
        let q = rng.cm_point(n, 1).to_quadruple();
        let x = rng.scalar(5);
        match (stationary_baker(&q, &x), psi2_det(&q, &x)) {
            (Ok(a), Ok(b)) => ensure(a[(0, 0)] == b, || wire::quadruple_to_json(&q)),
            (Err(GrassError::OutsideBigCell(_)), Err(GrassError::OutsideBigCell(_))) => Ok(()),
            _ => Err(wire::quadruple_to_json(&q)),
        }
    });
}

fn bispectral(ctx: &mut Ctx) {
    let depth = ctx.cfg.depth;
    ctx.cases("kernel symmetry", 12, |rng, _| {
        let (n, r) = dims(rng, 4, 3);
        let q = rng.cm_point(n, r).to_quadruple();
        let x0 = rng.scalar(9);
        let x0 = if x0.is_zero_value() { s(11) } else { x0 };
        let payload =
            || json!({"point": wire::quadruple_to_json(&q), "x": wire::scalar_to_json(&x0)});
        let a = stationary_baker(&q.bisp_involution(), &x0);
        let b = stationary_baker_in_x(&q, &x0).map(|m| m.transpose());
        match (a, b) {
            (Ok(a), Ok(b)) => ensure(a == b, payload),
            (Err(_), Err(_)) => Ok(()),
            _ => Err(payload()),
        }
    });
    ctx.cases("involution", 12, |rng, _| {
        let (n, r) = dims(rng, 5, 3);
        let q = rng.cm_point(n, r).to_quadruple();
        ensure(q.bisp_involution().bisp_involution() == q, || {
            wire::quadruple_to_json(&q)
        })
    });
    ctx.cases("K-operator of the dual point", 4, |rng, _| {
        let (n, r) = dims(rng, 3, 2);
        let q = rng.cm_point(n, r).to_quadruple();
        ensure(
            kbw(&q, depth)
                .op
                .equals_through(&kw(&q.bisp_involution(), depth).op, depth),
            || wire::quadruple_to_json(&q),
        )
    });
    ctx.single("Θ of multiplication by z", || {
        let q = CMPoint::new(vec![s(0)], vec![s(0)], vec![vec![s(1)]], vec![vec![s(-1)]])
            .expect("valid point")
            .to_quadruple();
        let z = MatPDO::scalar(depth, [(0, RatFun::x())]);
        let expected = MatPDO::scalar(
            depth,
            [(1, RatFun::one()), (0, RatFun::pole(s(1), &s(0), 1))],
        );
        let got = theta(&z, &Space::Base(1), &Space::Point(q.clone()), depth)
            .map_err(|e| failure(e, wire::quadruple_to_json(&q)))?;
        ensure(got.equals_through(&expected, depth), || {
            wire::pdo_to_json(&got)
        })
    });
}

fn shifted_cell_space() -> GrPoint {
    let site = Site {
        lambda: s(0),
        pole_order: 0,
        window_top: 1,
        conditions: vec![vec![s(1), s(0), s(0), s(0)], vec![s(0), s(1), s(-1), s(0)]],
    };
    GrPoint::new(
        2,
        vec![site],
        Provenance::Custom("z W for the ba = 0 cell".into()),
    )
    .expect("valid conditions")
}

fn lattice(ctx: &mut Ctx) {
    ctx.single("generators of z W for the ba = 0 cell", || {
        let v = shifted_cell_space();
        let rep = lattice_basis(&v, 1, 2);
        let z = RatFun::x();
        let expected = vec![vec![z.clone(), RatFun::one()], vec![RatFun::zero(), z]];
        ensure(rep.generators == expected, || {
            json!(rep
                .generators
                .iter()
                .map(|g| g.iter().map(wire::ratfun_to_json).collect::<Vec<_>>())
                .collect::<Vec<_>>())
        })
    });
    ctx.cases("beta-image lattices are standard", 3, |rng, _| {
        let p = rng.cm_point(1, 1);
        let rep = lattice_basis(&beta(&p), 1, 1);
        ensure(rep.is_standard(1), || wire::cmpoint_to_json(&p))
    });
    ctx.cases("witness operators", 8, |rng, _| {
        let (n, r) = dims(rng, 3, 2);
        let p = rng.cm_point(n, r);
        let polys: Vec<Poly> = (0..r).map(|_| rng.poly(3, 3)).collect();
        let t = latt_witness(&p.to_quadruple(), &polys);
        let payload = || {
            json!({"point": wire::cmpoint_to_json(&p), "p": polys.iter().map(wire::poly_to_json).collect::<Vec<_>>()})
        };
        let lead_ok = t.order().is_some_and(|k| {
            let lead = t.coeff(k);
            (0..r).all(|a| lead[(a, 0)].as_poly().as_ref() == Some(&polys[a]))
        });
        let member = d_membership_direct(&t.transpose(), &beta(&p)).map_err(|e| failure(e, payload()))?;
        ensure(t.first_negative_order(0).is_none() && lead_ok && member, payload)
    });
    ctx.single("∂ and ∂ - 1/z against a one-point W", || {
        let p = CMPoint::new(vec![s(0)], vec![s(0)], vec![vec![s(1)]], vec![vec![s(-1)]])
            .expect("valid point");
        let w = beta(&p);
        let d = MatPDO::partial(1, 1, 0);
        let e = MatPDO::scalar(0, [(1, RatFun::one()), (0, RatFun::pole(s(-1), &s(0), 1))]);
        let a = d_membership_direct(&d, &w).map_err(|e| failure(e, Value::Null))?;
        let b = d_membership_direct(&e, &w).map_err(|e| failure(e, Value::Null))?;
        ensure(!a && b, || json!({"d": a, "d_minus_inverse": b}))
    });
}

/// Schur polynomial `s_λ` in the variables `t`, by Jacobi-Trudi with
/// `h_k` from Newton's identities `k h_k = Σ p_i h_{k-i}` and `p_k = -k t_k`.
pub fn schur_jacobi_trudi(partition: &[usize], nvars: usize) -> MPoly {
    let top = partition.iter().sum::<usize>() + partition.len();
    let p: Vec<MPoly> = (0..=top)
        .map(|k| match k {
            0 => MPoly::zero(),
            k if k <= nvars => MPoly::var(k - 1).scale(&s(-(k as i64))),
            _ => MPoly::zero(),
        })
        .collect();
    let mut h = vec![MPoly::one()];
    for k in 1..=top {
        let sum = (1..=k).fold(MPoly::zero(), |acc, i| acc.plus(&p[i].times(&h[k - i])));
        h.push(sum.scale(&Scalar::from_ratio(1, k as i64)));
    }
    let l = partition.len();
    let m = Matrix::from_fn(l, l, |i, j| {
        let idx = partition[i] as i64 - i as i64 + j as i64;
        if idx < 0 {
            MPoly::zero()
        } else {
            h[idx as usize].clone()
        }
    });
    m.det_expansion()
}

fn tau(ctx: &mut Ctx) {
    let t: Vec<MPoly> = (0..4).map(MPoly::var).collect();
    let zero = MPoly::zero();
    let full = tau32(&t[0], &t[1], &t[2], &t[3]);
    ctx.single("tau(0, t2, 0, 0) = 0", || {
        let v = tau32(&zero, &t[1], &zero, &zero);
        ensure(v.is_zero(), || json!(format!("{v:?}")))
    });
    ctx.single("tau(t1, 0, t3, 0) = t1^5 - 12 t3 t1^2", || {
        let v = tau32(&t[0], &zero, &t[2], &zero);
        let expected = MPoly::monomial(s(1), &[5]).plus(&MPoly::monomial(s(-12), &[2, 0, 1]));
        ensure(v == expected, || json!(format!("{v:?}")))
    });
    ctx.single("tau = -24 s_(3,2)", || {
        let schur = schur_jacobi_trudi(&[3, 2], 4).scale(&s(-24));
        ensure(schur == full, || json!(format!("{schur:?}")))
    });
}

fn exp_jet(x: &Scalar, r: usize) -> GammaJet {
    GammaJet::new(
        vec![s(0)],
        vec![Matrix::identity(r)],
        vec![Matrix::scalar(r, x)],
    )
    .expect("valid jet")
}

fn examples(ctx: &mut Ctx) {
    ctx.single("one-point Baker function", || {
        let p = CMPoint::new(vec![s(0)], vec![s(0)], vec![vec![s(1)]], vec![vec![s(-1)]])
            .expect("valid point");
        let psi =
            stationary_baker(&p.to_quadruple(), &s(1)).map_err(|e| failure(e, Value::Null))?;
        let expected = RatFun::new(Poly::from_ints(&[-1, 1]), Poly::from_ints(&[0, 1]));
        ensure(psi[(0, 0)] == expected, || {
            wire::ratfun_to_json(&psi[(0, 0)])
        })
    });
    ctx.single("outside the big cell", || {
        let q = CMPoint::new(vec![s(0)], vec![s(0)], vec![vec![s(1)]], vec![vec![s(-1)]])
            .expect("valid point")
            .to_quadruple();
        match stationary_baker(&q, &s(0)) {
            Err(GrassError::OutsideBigCell(d)) if d.is_zero_value() => Ok(()),
            other => Err(json!(format!("{other:?}"))),
        }
    });
    ctx.cases("cell with B = I", 6, |rng, _| {
        let r = rng.int(1, 3) as usize;
        let a = rng.matrix(r, r, 3);
        let x = rng.scalar(4);
        let payload = || json!({"A": wire::matrix_to_json(&a), "x": wire::scalar_to_json(&x)});
        let c =
            CellPoint::new(a.clone(), Matrix::identity(r)).map_err(|e| failure(e, payload()))?;
        let q = cell_to_point(&c).map_err(|e| failure(e, payload()))?;
        match (stationary_baker(&q, &x), cell_baker(&c, &exp_jet(&x, r))) {
            (Ok(st), Ok(psi)) => ensure(st == psi, payload),
            (Err(GrassError::OutsideBigCell(_)), Err(GrassError::OutsideBigCell(_))) => Ok(()),
            (Err(e), _) | (_, Err(e)) => Err(failure(e, payload())),
        }
    });
    ctx.cases("rank-one cells", 6, |rng, _| {
        let r = rng.int(2, 3) as usize;
        let mut a: Vec<Scalar> = (0..r).map(|_| rng.scalar(2)).collect();
        let mut b: Vec<Scalar> = (0..r).map(|_| rng.scalar(2)).collect();
        a[0] = rng.nonzero_scalar(2);
        b[r - 1] = rng.nonzero_scalar(2);
        let payload = || json!({"a": a.iter().map(wire::scalar_to_json).collect::<Vec<_>>(), "b": b.iter().map(wire::scalar_to_json).collect::<Vec<_>>()});
        let Ok(c) = CellPoint::rank_one(&a, &b) else {
            return Ok(());
        };
        let ba = b.iter().zip(&a).fold(s(0), |acc, (p, q)| &acc + &(p * q));
        let xs = [s(2), s(5)];
        let psis: Vec<_> = xs.iter().map(|x| cell_baker(&c, &exp_jet(x, r))).collect();
        if ba.is_zero_value() {
            let indep = matches!((&psis[0], &psis[1]), (Ok(u), Ok(v)) if u == v);
            let degenerate = matches!(cell_to_point(&c), Err(GrassError::NotInBetaImage));
            return ensure(indep && degenerate && c.to_grpoint().z_stable(), payload);
        }
        let q = cell_to_point(&c).map_err(|e| failure(e, payload()))?;
        for (x, psi) in xs.iter().zip(psis) {
            match (stationary_baker(&q, x), psi) {
                (Ok(u), Ok(v)) if u == v => {}
                (Err(GrassError::OutsideBigCell(_)), Err(GrassError::OutsideBigCell(_))) => {}
                _ => return Err(payload()),
            }
        }
        Ok(())
    });
    ctx.single("interleaved S point has no order-2 Baker function", || {
        let w = GrPoint::from_exponents(&[-3, -1], 2)
            .and_then(|p| deinterleave_point(&p))
            .map_err(|e| failure(e, Value::Null))?;
        let xs: Vec<Scalar> = (-4..6).map(s).collect();
        let reps = stationary_ansatz_order2(&w, &xs).map_err(|e| failure(e, Value::Null))?;
        ensure(
            reps.iter().all(|(_, r)| *r == AnsatzReport::NoSolution),
            || {
                json!(reps
                    .iter()
                    .map(|(x, r)| json!([wire::scalar_to_json(x), format!("{r:?}")]))
                    .collect::<Vec<_>>())
            },
        )
    });
    ctx.cases("interleaving", 10, |rng, _| {
        let f = [
            RatFun::new(rng.poly(3, 3), Poly::from_ints(&[0, 0, 1])),
            RatFun::new(rng.poly(3, 3), Poly::from_ints(&[0, 1])),
        ];
        let back = deinterleave(&interleave(&f));
        ensure(back == f, || {
            json!(f.iter().map(wire::ratfun_to_json).collect::<Vec<_>>())
        })
    });
    ctx.cases(
        "no x-independent Baker function for n >= 1",
        10,
        |rng, _| {
            let (n, r) = dims(rng, 3, 2);
            let q = rng.cm_point(n, r).to_quadruple();
            let a = stationary_baker(&q, &s(7));
            let b = stationary_baker(&q, &s(13));
            ensure(!matches!((&a, &b), (Ok(u), Ok(v)) if u == v), || {
                wire::quadruple_to_json(&q)
            })
        },
    );
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(suites: &[Suite]) -> RunConfig {
        RunConfig {
            suites: suites.to_vec(),
            ..RunConfig::default()
        }
    }

    #[test]
    fn suite_names() {
        assert_eq!(Suite::parse_list("all").unwrap().len(), 8);
        assert_eq!(
            Suite::parse_list("tau,moment").unwrap(),
            vec![Suite::Moment, Suite::Tau]
        );
        assert!(Suite::parse_list("nope").is_err());
        assert!(RunConfig::new(Mode::Exact, 0.0, 8, 1, vec![]).is_err());
    }

    #[test]
    fn tau_suite_has_three_passes() {
        let rep = run(&cfg(&[Suite::Tau]));
        assert_eq!(rep.checks.len(), 3);
        assert!(rep.passed());
    }

    #[test]
    fn action_mutation_is_caught() {
        let mut c = cfg(&[Suite::Action]);
        assert!(run(&c).passed());
        c.mutation = Some(Mutation::ActionSign);
        let rep = run(&c);
        let first = rep.failures().next().expect("mutation must fail");
        assert!(first.name.contains("(1,3)"));
        assert!(first.counterexample.is_some());
    }
}
