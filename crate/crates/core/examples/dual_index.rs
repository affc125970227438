//! Most damaging shock of each size: exhaustive, greedy, and the tree DP.

use contagion::dual::{dual_exact_bruteforce, dual_exact_in_arborescence, dual_greedy};
use contagion::stability::BruteForce;
use contagion::{fixtures, Horizon};

fn main() {
    let spec = fixtures::non_monotone();
    for kappa in 1..=spec.n() {
        let best = dual_exact_bruteforce(&spec, Horizon::Unbounded, kappa, BruteForce::default()).unwrap();
        let greedy = dual_greedy(&spec, Horizon::Unbounded, kappa).unwrap();
        println!(
            "kappa={kappa}: best {} via {:?}, greedy {}",
            best.value,
            best.shock.ids(&spec),
            greedy.value
        );
    }

    let chain = contagion::NetworkSpec::homogeneous(
        ["r", "x", "y", "z"],
        [("x", "r"), ("y", "x"), ("z", "x")],
        contagion::amount::dec("0.1"),
        contagion::amount::dec("0.4"),
        contagion::amount::dec("3"),
        contagion::amount::dec("8"),
    )
    .unwrap();
    let dp = dual_exact_in_arborescence(&chain, Horizon::Unbounded, 1).unwrap();
    println!("\ntree, kappa=1: {} failures from {:?}", dp.failed.len(), dp.shock.ids(&chain));
}
