//! Exact stability index by exhaustive search, for both horizons.

use contagion::stability::{stab_exact_bruteforce, BruteForce};
use contagion::{fixtures, Horizon};

fn main() {
    let spec = fixtures::non_monotone();
    for horizon in [Horizon::Steps(2), Horizon::Steps(3), Horizon::Unbounded] {
        let res = stab_exact_bruteforce(&spec, horizon, BruteForce::default()).unwrap();
        let shock = res.shock.as_ref().map(|s| s.ids(&spec));
        println!("T={horizon}: vi* = {}  shock = {shock:?}", res.index);
    }
}
