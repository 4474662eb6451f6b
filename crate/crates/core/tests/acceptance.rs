//! Acceptance criteria, one test per criterion. Each prints a PASS/FAIL line
//! directly to stderr so that it shows in the test log whether or not it
//! fails.

use std::io::Write;

use cmgrass::algebra::{MPoly, MatPDO, Matrix, Poly, RatFun, Ring, Scalar};
use cmgrass::cmspace::{canonicalize, CMPoint, Quadruple};
use cmgrass::flows::{
    flow_closed, flow_nilpotent, flow_numeric, flow_scalar, hamiltonian, poisson_bracket,
    vector_field,
};
use cmgrass::grass::{
    baker, baker_point, beta, cell_baker, cell_to_point, deinterleave_point, lattice_basis, member,
    psi2_det, stationary_ansatz_order2, stationary_baker, stationary_baker_in_x, tau32,
    AnsatzReport, CellPoint, GrPoint, GrassError, Provenance, Site,
};
use cmgrass::loopgroup::{act, jet_mul, jet_of_polymat, GammaJet, PolyMat};
use cmgrass::opcalc::{d_membership_direct, kbw, kw, latt_witness, theta, Space};
use cmgrass::sample::Sampler;

fn s(n: i64) -> Scalar {
    Scalar::from_int(n)
}

fn report(n: u32, title: &str, outcome: Result<String, String>) {
    let line = match &outcome {
        Ok(detail) => format!("criterion {n:>2} PASS  {title}: {detail}"),
        Err(detail) => format!("criterion {n:>2} FAIL  {title}: {detail}"),
    };
    let _ = writeln!(std::io::stderr(), "{line}");
    if let Err(detail) = outcome {
        panic!("criterion {n} ({title}) failed: {detail}");
    }
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn dims(rng: &mut Sampler, max_n: i64, max_r: i64) -> (usize, usize) {
    (rng.int(1, max_n) as usize, rng.int(1, max_r) as usize)
}

fn one_point(alpha: i64) -> CMPoint {
    CMPoint::new(
        vec![s(0)],
        vec![s(alpha)],
        vec![vec![s(1)]],
        vec![vec![s(-1)]],
    )
    .unwrap()
}

fn max_distance(a: &CMPoint, b: &CMPoint) -> f64 {
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

#[test]
fn criterion_01_moment_fiber() {
    let run = || -> Result<String, String> {
        let mut rng = Sampler::new(101);
        for case in 0..200 {
            let (n, r) = dims(&mut rng, 5, 3);
            let q = rng.cm_point(n, r).from_cd_coords();
            let residual =
                q.x.commutator(&q.y)
                    .add(&q.v.mul(&q.w))
                    .add(&Matrix::identity(n));
            check(residual.is_zero(), || {
                format!("case {case}: residual {residual}")
            })?;
        }
        Ok("200 points, [X,Y] + vw = -I exactly".into())
    };
    report(1, "moment fiber", run());
}

#[test]
fn criterion_02_poisson_relations() {
    let run = || -> Result<String, String> {
        let mut rng = Sampler::new(102);
        let mut worst: f64 = 0.0;
        for case in 0..20 {
            let (n, r) = dims(&mut rng, 3, 2);
            let q = rng.cm_point_numeric(n, r).to_quadruple();
            let a = rng.numeric_matrix(r, r);
            let b = rng.numeric_matrix(r, r);
            for k in 0..=3 {
                for l in 0..=3 {
                    let lhs = poisson_bracket(&q, (k, &a), (l, &b), 1e-4);
                    let rhs = hamiltonian(&q, k + l, &a.commutator(&b));
                    let rel = (&lhs - &rhs).abs() / rhs.abs().max(1.0);
                    worst = worst.max(rel);
                    check(rel <= 1e-6, || {
                        format!("case {case}, k={k}, l={l}: relative error {rel:e}")
                    })?;
                }
            }
        }
        Ok(format!(
            "20 triples, k,l <= 3, worst relative error {worst:.1e}"
        ))
    };
    report(2, "Poisson relations", run());
}

#[test]
fn criterion_03_flow_consistency() {
    let run = || -> Result<String, String> {
        let mut rng = Sampler::new(103);
        let mut worst: f64 = 0.0;
        for case in 0..20 {
            let n = rng.int(1, 3) as usize;
            let p = rng.cm_point_numeric(n, 2);
            let alpha = rng.numeric_matrix(2, 2);
            let k = rng.int(0, 2) as u32;
            let t = Scalar::numeric(rng.unit_f64(), 0.0);
            let closed = flow_closed(&p, k, &alpha, &t).map_err(|e| e.to_string())?;
            let rk = flow_numeric(&p.to_quadruple(), k, &alpha, &t, 10_000)
                .map_err(|e| e.to_string())?;
            let rk = canonicalize(&rk).map_err(|e| e.to_string())?;
            let d = max_distance(&closed, &rk);
            worst = worst.max(d);
            check(d <= 1e-8, || format!("case {case}: distance {d:e}"))?;
        }
        for case in 0..10 {
            let n = rng.int(1, 4) as usize;
            let p = rng.cm_point(n, 2);
            let c = rng.nonzero_scalar(2);
            let alpha = Matrix::from_rows(vec![vec![s(0), c], vec![s(0), s(0)]]);
            let k = rng.int(0, 3) as u32;
            let t = rng.scalar(3);
            let q = p.to_quadruple();
            let line = flow_nilpotent(&q, k, &alpha, &t).map_err(|e| e.to_string())?;
            // The field is constant along the straight line, so the line is the flow.
            let f0 = vector_field(&q, k, &alpha);
            let f1 = vector_field(&line, k, &alpha);
            check(f0 == f1, || {
                format!("nilpotent case {case}: field not constant")
            })?;
            let closed = flow_closed(&p, k, &alpha, &t).map_err(|e| e.to_string())?;
            check(canonicalize(&line) == Ok(closed), || {
                format!("nilpotent case {case}: closed form differs")
            })?;
        }
        Ok(format!(
            "20 RK4 comparisons, worst {worst:.1e}; 10 exact nilpotent cases"
        ))
    };
    report(3, "flow consistency", run());
}

#[test]
fn criterion_04_right_action() {
    let run = || -> Result<String, String> {
        let mut rng = Sampler::new(104);
        for case in 0..50 {
            let (n, r) = dims(&mut rng, 4, 3);
            let p = rng.cm_point(n, r);
            let g1 = jet_of_polymat(&rng.unimodular(r, 3, 2), &p.lambda).unwrap();
            let g2 = jet_of_polymat(&rng.unimodular(r, 3, 2), &p.lambda).unwrap();
            let two = act(&p, &g1)
                .and_then(|a| act(&a, &g2))
                .map_err(|e| e.to_string())?;
            let one = act(&p, &jet_mul(&g1, &g2).unwrap()).map_err(|e| e.to_string())?;
            check(one == two, || format!("case {case}: composition differs"))?;
            for i in 0..n {
                let dot = two.vrow[i]
                    .iter()
                    .zip(&two.wcol[i])
                    .fold(s(0), |acc, (a, b)| &acc + &(a * b));
                check(dot == s(-1), || format!("case {case}: v_{i} w_{i} = {dot}"))?;
            }
        }
        Ok("50 cases, exact".into())
    };
    report(4, "right action", run());
}

#[test]
fn criterion_05_scalar_subgroup() {
    let run = || -> Result<String, String> {
        let mut rng = Sampler::new(105);
        for case in 0..20 {
            let (n, r) = dims(&mut rng, 4, 3);
            let q = rng.cm_point(n, r).to_quadruple();
            let x = rng.scalar(5);
            let moved = flow_scalar(&q, &Poly::new(vec![s(0), x.clone()]));
            let expected = Quadruple {
                x: q.x.sub(&Matrix::scalar(n, &x)),
                ..q.clone()
            };
            check(moved == expected, || format!("case {case}: p = xz"))?;
        }
        for case in 0..20 {
            let (n, r) = dims(&mut rng, 3, 2);
            let p = rng.cm_point(n, r);
            let raw = rng.poly(3, 2);
            // Keep |p(λ)| moderate so that e^{p(λ)} stays well inside floating-point range.
            let size = p
                .lambda
                .iter()
                .map(|l| raw.eval(l).abs())
                .fold(1.0, f64::max)
                .ceil() as i64;
            let poly = raw.scale(&Scalar::from_ratio(1, size));
            let oracle =
                canonicalize(&flow_scalar(&p.to_quadruple(), &poly)).map_err(|e| e.to_string())?;
            // The true loop e^{p(z)} I, evaluated in floating point.
            let jet = GammaJet::scalar_exp(&poly, &p.lambda, r);
            let got = act(&p.to_numeric(), &jet).map_err(|e| e.to_string())?;
            let d = max_distance(&got, &oracle.to_numeric());
            check(d < 1e-9, || format!("case {case}: distance {d:e}"))?;
        }
        Ok("20 exact p = xz cases, 20 general p against e^{p(z)}".into())
    };
    report(5, "scalar subgroup", run());
}

/// `h(z) = (z - λ) f(z)`; returns the residue `h(λ)` and constant term `h'(λ)`.
fn residue_and_constant(f: &RatFun, lam: &Scalar) -> (Scalar, Scalar) {
    let h = f.times(&RatFun::from_poly(Poly::linear(lam)));
    (h.eval(lam).unwrap(), h.derivative().eval(lam).unwrap())
}

#[test]
fn criterion_06_baker_validity() {
    let run = || -> Result<String, String> {
        let mut rng = Sampler::new(106);
        let mut skipped = 0;
        for case in 0..50 {
            let (n, r) = dims(&mut rng, 4, 3);
            let p = rng.cm_point(n, r);
            let g: PolyMat = rng.polynomial_loop(r);
            let jet = jet_of_polymat(&g, &p.lambda).unwrap();
            let psi = match baker(&beta(&p), &jet) {
                Ok(psi) => psi,
                Err(GrassError::OutsideBigCell(_)) => {
                    skipped += 1;
                    continue;
                }
                Err(e) => return Err(format!("case {case}: {e}")),
            };
            let id: Matrix<RatFun> = Matrix::identity(r);
            let tail_ok = psi
                .sub(&id)
                .entries()
                .iter()
                .all(|e| e.is_zero() || e.order_at_infinity() >= 1);
            check(tail_ok, || format!("case {case}: not I + O(1/z)"))?;
            let gz = g.map(|e| RatFun::from_poly(e.clone()));
            let rows = psi.mul(&gz);
            for a in 0..r {
                for i in 0..n {
                    let pairs: Vec<(Scalar, Scalar)> = (0..r)
                        .map(|b| residue_and_constant(&rows[(a, b)], &p.lambda[i]))
                        .collect();
                    // Residue proportional to v_i.
                    let v = &p.vrow[i];
                    for b in 0..r {
                        for c in 0..r {
                            let cross = &(&pairs[b].0 * &v[c]) - &(&pairs[c].0 * &v[b]);
                            check(cross.is_zero_value(), || {
                                format!("case {case}: residue not along v")
                            })?;
                        }
                    }
                    // (α_i c_{-1} + c_0) w_i = 0.
                    let val = (0..r).fold(s(0), |acc, b| {
                        let t = &(&p.alpha[i] * &pairs[b].0) + &pairs[b].1;
                        &acc + &(&t * &p.wcol[i][b])
                    });
                    check(val.is_zero_value(), || {
                        format!("case {case}: constant-term condition gives {val}")
                    })?;
                }
            }
        }
        Ok(format!(
            "{} of 50 cases inside the big cell, all rows in W",
            50 - skipped
        ))
    };
    report(6, "Baker validity", run());
}

#[test]
fn criterion_07_equivariance() {
    let run = || -> Result<String, String> {
        let mut rng = Sampler::new(107);
        let mut compared = 0;
        for case in 0..20 {
            let (n, r) = dims(&mut rng, 3, 3);
            let p = rng.cm_point(n, r);
            let gamma = jet_of_polymat(&rng.unimodular(r, 3, 2), &p.lambda).unwrap();
            let g = rng.polynomial_jet(&p.lambda, r);
            let left = baker(&beta(&p), &jet_mul(&g, &gamma.inverse().unwrap()).unwrap());
            let right = baker(&beta(&act(&p, &gamma).unwrap()), &g);
            match (left, right) {
                (Ok(a), Ok(b)) => {
                    check(a == b, || format!("case {case}: Baker functions differ"))?;
                    compared += 1;
                }
                (Err(GrassError::OutsideBigCell(_)), Err(GrassError::OutsideBigCell(_))) => {}
                (a, b) => return Err(format!("case {case}: {a:?} vs {b:?}")),
            }
        }
        check(compared >= 15, || {
            format!("only {compared} cases in the big cell")
        })?;
        Ok(format!("20 cases ({compared} in the big cell), exact"))
    };
    report(7, "equivariance", run());
}

#[test]
fn criterion_08_determinant_formula() {
    let run = || -> Result<String, String> {
        let mut rng = Sampler::new(108);
        for case in 0..20 {
            let n = rng.int(1, 6) as usize;
            let q = rng.cm_point(n, 1).to_quadruple();
            let x = rng.scalar(6);
            match (stationary_baker(&q, &x), psi2_det(&q, &x)) {
                (Ok(a), Ok(b)) => {
                    check(a[(0, 0)] == b, || format!("case {case}: formulas differ"))?
                }
                (Err(GrassError::OutsideBigCell(_)), Err(GrassError::OutsideBigCell(_))) => {}
                (a, b) => return Err(format!("case {case}: {a:?} vs {b:?}")),
            }
        }
        Ok("20 cases, n <= 6, exact rational identity".into())
    };
    report(8, "rank-one determinant formula", run());
}

#[test]
fn criterion_09_bispectrality() {
    let run = || -> Result<String, String> {
        let mut rng = Sampler::new(109);
        let mut compared = 0;
        for case in 0..20 {
            let (n, r) = dims(&mut rng, 3, 2);
            let q = rng.cm_point(n, r).to_quadruple();
            let qb = q.bisp_involution();
            check(qb.bisp_involution() == q, || {
                format!("case {case}: b∘b != id")
            })?;
            let x0 = Scalar::from_ratio(rng.int(1, 40), 3);
            let a = stationary_baker(&qb, &x0);
            let b = stationary_baker_in_x(&q, &x0).map(|m| m.transpose());
            match (a, b) {
                (Ok(a), Ok(b)) => {
                    check(a == b, || format!("case {case}: kernels differ"))?;
                    compared += 1;
                }
                // x0 in the spectrum of Y: both sides are undefined there.
                (Err(_), Err(_)) => {}
                (a, b) => return Err(format!("case {case}: {a:?} vs {b:?}")),
            }
            check(kbw(&q, 8).op.equals_through(&kw(&qb, 8).op, 8), || {
                format!("case {case}: K operators differ")
            })?;
        }
        check(compared >= 15, || {
            format!("only {compared} kernels defined")
        })?;
        Ok(format!("20 cases ({compared} kernel comparisons), symmetry exact, K operators equal through depth 8"))
    };
    report(9, "bispectrality", run());
}

fn exp_jet(x: &Scalar, r: usize) -> GammaJet {
    GammaJet::new(
        vec![s(0)],
        vec![Matrix::identity(r)],
        vec![Matrix::scalar(r, x)],
    )
    .unwrap()
}

fn with_pole(m: &Matrix<Scalar>) -> Matrix<RatFun> {
    let id: Matrix<RatFun> = Matrix::identity(m.rows());
    id.add(&m.map(|c| RatFun::pole(c.clone(), &s(0), 1)))
}

#[test]
fn criterion_10_cell_examples() {
    let run = || -> Result<String, String> {
        let mut rng = Sampler::new(110);
        let mut checked = 0;
        for case in 0..10 {
            let r = rng.int(1, 3) as usize;
            let a = rng.matrix(r, r, 3);
            let g0 = rng.polynomial_loop(r);
            let jet = jet_of_polymat(&g0, &[s(0)]).unwrap();
            let (v, d) = (&jet.values[0], &jet.derivs[0]);
            let vi = v.inverse().unwrap();
            let c = CellPoint::new(a.clone(), Matrix::identity(r)).unwrap();
            // I - g(0) {g(0)^{-1} g'(0) + A}^{-1} z^{-1} g(0)^{-1}
            let Some(inner) = vi.mul(d).add(&a).inverse() else {
                continue;
            };
            let expected = with_pole(&v.mul(&inner).mul(&vi).neg());
            let got = cell_baker(&c, &jet).map_err(|e| format!("case {case}: {e}"))?;
            check(got == expected, || format!("B = I case {case}"))?;
            checked += 1;
        }
        for case in 0..10 {
            let r = rng.int(2, 3) as usize;
            let mut a: Vec<Scalar> = (0..r).map(|_| rng.scalar(2)).collect();
            let mut b: Vec<Scalar> = (0..r).map(|_| rng.scalar(2)).collect();
            a[0] = rng.nonzero_scalar(2);
            b[0] = rng.nonzero_scalar(2);
            let ba = b.iter().zip(&a).fold(s(0), |acc, (p, q)| &acc + &(p * q));
            if ba.is_zero_value() {
                continue;
            }
            let cell = CellPoint::rank_one(&a, &b).unwrap();
            let alpha = ba.recip();
            let w: Vec<Scalar> = a.iter().map(|x| -&(&alpha * x)).collect();
            let point = CMPoint::new(vec![s(0)], vec![alpha], vec![b.clone()], vec![w]).unwrap();
            let jet = rng.polynomial_jet(&[s(0)], r);
            match (cell_baker(&cell, &jet), baker_point(&point, &jet)) {
                (Ok(x), Ok(y)) => check(x == y, || format!("rank-one case {case}"))?,
                (Err(GrassError::OutsideBigCell(_)), Err(GrassError::OutsideBigCell(_))) => {}
                (x, y) => return Err(format!("rank-one case {case}: {x:?} vs {y:?}")),
            }
            check(cell_to_point(&cell).is_ok(), || {
                format!("rank-one case {case}: no point")
            })?;
            checked += 1;
        }
        let degenerate = CellPoint::rank_one(&[s(1), s(0)], &[s(0), s(1)]).unwrap();
        let ab = Matrix::from_ints(&[&[0, 1], &[0, 0]]);
        for x in [-3, 0, 2, 7] {
            let psi = cell_baker(&degenerate, &exp_jet(&s(x), 2)).map_err(|e| e.to_string())?;
            check(psi == with_pole(&ab.neg()), || {
                format!("ba = 0 at x = {x}: {psi}")
            })?;
        }
        check(degenerate.to_grpoint().z_stable(), || {
            "ba = 0 space is not z-stable".into()
        })?;
        check(
            cell_to_point(&degenerate) == Err(GrassError::NotInBetaImage),
            || "ba = 0 has a point".into(),
        )?;
        Ok(format!(
            "{checked} formula comparisons; ba = 0 gives I - ab/z for all x and is z-stable"
        ))
    };
    report(10, "cell examples", run());
}

fn shifted_cell_space() -> GrPoint {
    let site = Site {
        lambda: s(0),
        pole_order: 0,
        window_top: 1,
        conditions: vec![vec![s(1), s(0), s(0), s(0)], vec![s(0), s(1), s(-1), s(0)]],
    };
    GrPoint::new(2, vec![site], Provenance::Custom("V".into())).unwrap()
}

fn rat_rows(rows: &[&[RatFun]]) -> Vec<Vec<RatFun>> {
    rows.iter().map(|r| r.to_vec()).collect()
}

#[test]
fn criterion_11_cell_lattice() {
    let run = || -> Result<String, String> {
        let z = RatFun::x();
        let zi = RatFun::pole(s(1), &s(0), 1);
        let (one, zero) = (RatFun::one(), RatFun::zero());
        let v = lattice_basis(&shifted_cell_space(), 2, 3);
        let expected_v = rat_rows(&[&[z.clone(), one.clone()], &[zero.clone(), z.clone()]]);
        check(v.generators == expected_v, || {
            format!("V generators {:?}", v.generators)
        })?;
        // f = (0,c) z^{-1} + (c,d) + O(z), i.e. the cell with b = (0,-1).
        let w = CellPoint::rank_one(&[s(1), s(0)], &[s(0), s(-1)])
            .unwrap()
            .to_grpoint();
        let lw = lattice_basis(&w, 2, 3);
        let expected_w = rat_rows(&[&[one.clone(), zi.clone()], &[zero.clone(), one.clone()]]);
        check(lw.generators == expected_w, || {
            format!("W generators {:?}", lw.generators)
        })?;
        // The condition f_{-1} + f_0 ab = 0 with b = (0,1) flips the sign of the pole.
        let w2 = CellPoint::rank_one(&[s(1), s(0)], &[s(0), s(1)])
            .unwrap()
            .to_grpoint();
        let lw2 = lattice_basis(&w2, 2, 3);
        let expected_w2 = rat_rows(&[&[one.clone(), zi.negated()], &[zero, one]]);
        check(lw2.generators == expected_w2, || {
            format!("ab-cell generators {:?}", lw2.generators)
        })?;
        Ok("V: (z,1), (0,z); W: (1,1/z), (0,1) at order bound 2, degree bound 3".into())
    };
    report(11, "lattice of the ba = 0 cell", run());
}

#[test]
fn criterion_12_witness() {
    let run = || -> Result<String, String> {
        let mut rng = Sampler::new(112);
        for case in 0..20 {
            let (n, r) = dims(&mut rng, 3, 2);
            let p = rng.cm_point(n, r);
            let polys: Vec<Poly> = (0..r)
                .map(|_| {
                    let deg = rng.int(0, 3) as usize;
                    rng.poly(deg, 3)
                })
                .collect();
            if polys.iter().all(Poly::is_zero) {
                continue;
            }
            let t = latt_witness(&p.to_quadruple(), &polys);
            check(t.first_negative_order(64).is_none(), || {
                format!("case {case}: not differential")
            })?;
            let lead = t.coeff(t.order().unwrap());
            for (a, pa) in polys.iter().enumerate() {
                check(lead[(a, 0)].as_poly().as_ref() == Some(pa), || {
                    format!("case {case}: leading coefficient")
                })?;
            }
            let ok = d_membership_direct(&t.transpose(), &beta(&p)).map_err(|e| e.to_string())?;
            check(ok, || format!("case {case}: transpose not in M_W"))?;
        }
        Ok("20 cases, exactly differential with leading coefficient p, transpose in M_W".into())
    };
    report(12, "lattice witness", run());
}

/// Operators `Σ c_k(z) ∂^k` from integer coefficient lists, lowest order first.
fn scalar_op(terms: &[&[i64]], depth: usize) -> MatPDO {
    MatPDO::scalar(
        depth,
        terms
            .iter()
            .enumerate()
            .map(|(k, c)| (k as i64, RatFun::from_poly(Poly::from_ints(c)))),
    )
}

#[test]
fn criterion_13_three_equivalences() {
    let run = || -> Result<String, String> {
        let depth = 8;
        let two = CMPoint::new(
            vec![s(0), s(1)],
            vec![s(0), s(0)],
            vec![vec![s(1)], vec![s(1)]],
            vec![vec![s(-1)], vec![s(-1)]],
        )
        .unwrap();
        let points = [one_point(0), one_point(1), one_point(-2), two];
        let ops: [&[&[i64]]; 5] = [
            &[&[1]],
            &[&[0, 1]],
            &[&[0, 0, 1]],
            &[&[0, 0, 1], &[]],
            &[&[0], &[1]],
        ];
        let mut agree = 0;
        let (mut members, mut non_members) = (0, 0);
        for (pi, p) in points.iter().enumerate() {
            let v = Space::Point(p.to_quadruple());
            for (oi, o) in ops.iter().enumerate() {
                let d = scalar_op(o, depth);
                let direct = d_membership_direct(&d, &beta(p)).map_err(|e| e.to_string())?;
                let via_theta = theta(&d, &Space::Base(1), &v, depth).is_ok();
                check(direct == via_theta, || {
                    format!("point {pi}, operator {oi}: jets {direct}, theta {via_theta}")
                })?;
                agree += 1;
                if direct {
                    members += 1;
                } else {
                    non_members += 1;
                }
            }
        }
        let th = theta(
            &scalar_op(&[&[0, 1]], depth),
            &Space::Base(1),
            &Space::Point(one_point(0).to_quadruple()),
            depth,
        )
        .map_err(|e| e.to_string())?;
        let worked = MatPDO::scalar(
            depth,
            [(1, RatFun::one()), (0, RatFun::pole(s(1), &s(0), 1))],
        );
        check(th.equals_through(&worked, depth), || format!("Θ(z) = {th}"))?;
        Ok(format!(
            "{agree} cases agree ({members} members, {non_members} non-members); Θ(z) = ∂ + 1/x"
        ))
    };
    report(13, "three equivalent membership tests", run());
}

/// `s_(3,2) = h3 h2 - h4 h1` with `Σ h_k u^k = exp(-Σ t_k u^k)`, i.e. `p_k = -k t_k`.
fn schur32_oracle() -> MPoly {
    let top = 5;
    let t: Vec<MPoly> = (0..4).map(MPoly::var).collect();
    let mut arg = vec![MPoly::zero(); top + 1];
    for k in 1..=4 {
        arg[k] = t[k - 1].scale(&s(-1));
    }
    let mul = |a: &[MPoly], b: &[MPoly]| {
        let mut out = vec![MPoly::zero(); top + 1];
        for i in 0..=top {
            for j in 0..=top - i {
                out[i + j] = out[i + j].plus(&a[i].times(&b[j]));
            }
        }
        out
    };
    let mut h = vec![MPoly::zero(); top + 1];
    h[0] = MPoly::one();
    let mut power = h.clone();
    let mut factorial = 1i64;
    for m in 1..=top {
        power = mul(&power, &arg);
        factorial *= m as i64;
        let inv = Scalar::from_ratio(1, factorial);
        for k in 0..=top {
            h[k] = h[k].plus(&power[k].scale(&inv));
        }
    }
    h[3].times(&h[2]).minus(&h[4].times(&h[1]))
}

#[test]
fn criterion_14_tau_identities() {
    let run = || -> Result<String, String> {
        let t: Vec<MPoly> = (0..4).map(MPoly::var).collect();
        let z = MPoly::zero();
        check(tau32(&z, &t[1], &z, &z).is_zero(), || {
            "tau(0,t2,0,0) != 0".into()
        })?;
        let expected = MPoly::monomial(s(1), &[5]).plus(&MPoly::monomial(s(-12), &[2, 0, 1]));
        check(tau32(&t[0], &z, &t[2], &z) == expected, || {
            "tau(t1,0,t3,0)".into()
        })?;
        let full = tau32(&t[0], &t[1], &t[2], &t[3]);
        let oracle = schur32_oracle().scale(&s(-24));
        check(full == oracle, || {
            format!("-24 s = {}", oracle.display_in("t"))
        })?;
        Ok("three polynomial identities; -24 s_(3,2) matches with p_k = -k t_k".into())
    };
    report(14, "tau identities", run());
}

#[test]
fn criterion_15_outside_big_cell() {
    let run = || -> Result<String, String> {
        let w =
            deinterleave_point(&GrPoint::from_exponents(&[-3, -1], 2).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
        let xs: Vec<Scalar> = (-5..5).map(|k| Scalar::from_ratio(2 * k + 1, 2)).collect();
        let reps = stationary_ansatz_order2(&w, &xs).map_err(|e| e.to_string())?;
        check(
            reps.len() == 10 && reps.iter().all(|(_, r)| *r == AnsatzReport::NoSolution),
            || format!("{reps:?}"),
        )?;
        let mut rng = Sampler::new(115);
        for case in 0..30 {
            let (n, r) = dims(&mut rng, 4, 3);
            let q = rng.cm_point(n, r).to_quadruple();
            let (a, b) = (stationary_baker(&q, &s(5)), stationary_baker(&q, &s(-7)));
            check(!matches!((&a, &b), (Ok(u), Ok(v)) if u == v), || {
                format!("case {case}: x-independent")
            })?;
        }
        Ok("S point: NoSolution at 10 x; 30 beta-image points all depend on x".into())
    };
    report(15, "outside the big cell", run());
}

/// Whether `f` is a `ℂ[z]`-combination of Hermite-form rows.
fn in_module(f: &[RatFun], gens: &[Vec<RatFun>]) -> bool {
    let mut rest = f.to_vec();
    for g in gens {
        let Some(col) = g.iter().position(|e| !e.is_zero()) else {
            continue;
        };
        let q = rest[col].times(&g[col].recip());
        if !q.is_polynomial() {
            return false;
        }
        for (e, ge) in rest.iter_mut().zip(g) {
            *e = e.minus(&q.times(ge));
        }
    }
    rest.iter().all(RatFun::is_zero)
}

#[test]
fn criterion_16_z_stable_spaces() {
    let run = || -> Result<String, String> {
        let degenerate = |a: &[i64], b: &[i64]| {
            let f = |v: &[i64]| v.iter().map(|&x| s(x)).collect::<Vec<_>>();
            CellPoint::rank_one(&f(a), &f(b)).unwrap().to_grpoint()
        };
        let examples = [
            GrPoint::base(1),
            GrPoint::base(2),
            degenerate(&[1, 0], &[0, 1]),
            degenerate(&[1, 1], &[1, -1]),
            degenerate(&[1, 0, 2], &[2, 1, -1]),
            shifted_cell_space(),
            GrPoint::from_exponents(&[-3, -1], 2).unwrap(),
        ];
        let mut stable = 0;
        for (i, w) in examples.iter().enumerate() {
            if !w.z_stable() {
                continue;
            }
            stable += 1;
            let rep = lattice_basis(w, 1, 2);
            for g in &rep.generators {
                check(member(g, w), || format!("example {i}: generator outside W"))?;
            }
            for m in &rep.members[0] {
                let row = m.coeff(0).row(0);
                check(in_module(&row, &rep.generators), || {
                    format!("example {i}: element of W outside L_W")
                })?;
            }
        }
        check(stable >= 5, || format!("only {stable} z-stable examples"))?;
        let mut rng = Sampler::new(116);
        for case in 0..30 {
            let (n, r) = dims(&mut rng, 4, 3);
            let w = beta(&rng.cm_point(n, r));
            check(!w.z_stable(), || format!("beta case {case} is z-stable"))?;
        }
        check(beta(&CMPoint::base(2)).z_stable(), || {
            "base point is not z-stable".into()
        })?;
        Ok(format!(
            "{stable} z-stable examples with W = L_W; among beta-image points only the base point"
        ))
    };
    report(16, "z-stable spaces", run());
}
