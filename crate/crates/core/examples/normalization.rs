//! Rescaling a homogeneous network to unit loans leaves every cascade
//! unchanged.

use contagion::amount::dec;
use contagion::generate::{gen_random_dag, RandomParams};
use contagion::{propagate, Horizon, ShockSet};

fn main() {
    let mut params = RandomParams::new(dec("0.1"), dec("0.4"), dec("24"));
    params.edge_weight = dec("2.5");
    let spec = gen_random_dag(8, 0.4, &params, 5).unwrap();
    let unit = spec.normalize_homogeneous().unwrap();
    println!("I: {} -> {}   E: {} -> {}", spec.interbank_total(), unit.interbank_total(), spec.external_total(), unit.external_total());

    for v in 0..spec.n() {
        let shock = ShockSet::from_indices(spec.n(), [v]).unwrap();
        let a = propagate(&spec, &shock, Horizon::Unbounded).unwrap().failure_steps(spec.n());
        let b = propagate(&unit, &shock, Horizon::Unbounded).unwrap().failure_steps(spec.n());
        println!("shock {}: {:?} identical={}", spec.node_id(v), a, a == b);
    }
}
