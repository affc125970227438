//! Polynomial-time stability index on in-arborescences, checked against
//! brute force, with the closed-form lower bound.

use contagion::amount::dec;
use contagion::arborescence::{arborescence_lower_bound, every_node_fails_when_shocked, stab_exact_in_arborescence};
use contagion::generate::{gen_random_in_arborescence, RandomParams};
use contagion::stability::{stab_exact_bruteforce, BruteForce};
use contagion::Horizon;

fn main() {
    let params = RandomParams::new(dec("0.1"), dec("0.35"), dec("36"));
    for seed in 0..6 {
        let spec = gen_random_in_arborescence(12, 3, &params, seed).unwrap();
        if !every_node_fails_when_shocked(&spec) {
            continue;
        }
        let dp = stab_exact_in_arborescence(&spec, Horizon::Unbounded).unwrap();
        let bf = stab_exact_bruteforce(&spec, Horizon::Unbounded, BruteForce::default()).unwrap();
        println!(
            "seed {seed}: dp {}  brute {}  lower bound {}",
            dp.index,
            bf.index,
            arborescence_lower_bound(&spec).unwrap()
        );
    }
}
