//! Two-step stability through the covering program: coefficients, greedy
//! selection, and comparison with the optimum.

use contagion::cover::{build_cover_instance, stab_greedy_t2};
use contagion::generate::{gen_random_dag, RandomParams};
use contagion::stability::{stab_exact_bruteforce, BruteForce};
use contagion::Horizon;
use contagion::amount::dec;

fn main() {
    let params = RandomParams::new(dec("0.1"), dec("0.6"), dec("16"));
    let spec = gen_random_dag(16, 0.25, &params, 11).unwrap();

    let cover = build_cover_instance(&spec);
    println!("{} candidate nodes, guarantee factor {:.2}", cover.candidates().len(), cover.approximation_ratio());

    let greedy = stab_greedy_t2(&spec).unwrap();
    let exact = stab_exact_bruteforce(&spec, Horizon::Steps(2), BruteForce::default()).unwrap();
    println!("greedy:  {} ({:?})", greedy.index, greedy.shock.map(|s| s.ids(&spec)));
    println!("optimum: {} ({:?})", exact.index, exact.shock.map(|s| s.ids(&spec)));
}
