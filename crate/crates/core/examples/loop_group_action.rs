//! The right action of polynomial loops on points, via jets at the spectrum.

use cmgrass::algebra::{Matrix, Scalar};
use cmgrass::flows::flow_closed;
use cmgrass::loopgroup::{act, jet_mul, jet_of_polymat, GammaJet};
use cmgrass::sample::Sampler;

fn main() {
    let mut rng = Sampler::new(9);
    let p = rng.cm_point(3, 2);
    let g1 = jet_of_polymat(&rng.unimodular(2, 3, 2), &p.lambda).unwrap();
    let g2 = jet_of_polymat(&rng.unimodular(2, 3, 2), &p.lambda).unwrap();

    let stepwise = act(&act(&p, &g1).unwrap(), &g2).unwrap();
    let at_once = act(&p, &jet_mul(&g1, &g2).unwrap()).unwrap();
    println!("(P.g1).g2 = P.(g1 g2): {}", stepwise == at_once);
    for i in 0..p.n {
        let dot = stepwise.vrow[i]
            .iter()
            .zip(&stepwise.wcol[i])
            .fold(Scalar::from_int(0), |acc, (a, b)| &acc + &(a * b));
        println!("  v_{i} w_{i} = {dot}");
    }

    // The loop exp(α z^k t) traces the Hamiltonian flow.
    let s = Scalar::from_int;
    let alpha = Matrix::from_rows(vec![vec![s(0), s(2)], vec![s(0), s(0)]]);
    let t = Scalar::from_ratio(-1, 3);
    let jet = GammaJet::exp_loop(&alpha, 1, &t, &p.lambda);
    println!(
        "action of exp(alpha z t) = flow: {}",
        act(&p, &jet).unwrap() == flow_closed(&p, 1, &alpha, &t).unwrap()
    );
}
