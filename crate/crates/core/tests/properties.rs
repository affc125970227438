mod common;

use common::*;
use contagion::amount::{dec, ratio};
use contagion::arborescence::{
    arborescence_lower_bound, every_node_fails_when_shocked, influence_zone, influence_zone_bound,
    influence_zone_recurrence, stab_exact_in_arborescence, Tree,
};
use contagion::cascade::{horizon_bound, is_acyclic};
use contagion::cover::{build_cover_instance, stab_greedy_t2};
use contagion::dual::{dual_exact_bruteforce, dual_exact_in_arborescence, dual_greedy};
use contagion::generate::{gen_random_dag, gen_random_in_arborescence, RandomParams};
use contagion::io::NetworkFile;
use contagion::stability::{stab_exact_bruteforce, BruteForce, StabilityIndex};
use contagion::{propagate, Horizon, Mode, NetworkSpec, ShockSet};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::Rng;

const REGIMES: [(&str, &str); 5] = [("0.1", "0.4"), ("0.1", "0.35"), ("0.2", "0.5"), ("0.05", "0.3"), ("0.1", "0.15")];

/// Random simple digraph (cycles allowed), homogeneous or heterogeneous.
fn random_spec(n: usize, seed: u64, heterogeneous: bool) -> NetworkSpec {
    let mut r = rng(seed);
    let ids: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != b && r.gen_bool(0.35) {
                edges.push((a, b));
            }
        }
    }
    let (g, p) = REGIMES[r.gen_range(0..REGIMES.len())];
    let external = ratio(r.gen_range(1..=60), 4) * int(n);
    if !heterogeneous {
        let w = ratio(r.gen_range(1..=6), r.gen_range(1..=3));
        let pairs: Vec<(String, String)> = edges.iter().map(|&(a, b)| (ids[a].clone(), ids[b].clone())).collect();
        return NetworkSpec::homogeneous(ids, pairs, dec(g), dec(p), w * int(edges.len()), external).unwrap();
    }
    let shares: Vec<i64> = (0..n).map(|_| r.gen_range(1..=9)).collect();
    let total: i64 = shares.iter().sum();
    let nodes: Vec<(String, BigRational)> = ids.iter().cloned().zip(shares.iter().map(|&s| ratio(s, total))).collect();
    let weighted: Vec<(String, String, BigRational)> = edges
        .iter()
        .map(|&(a, b)| (ids[a].clone(), ids[b].clone(), ratio(r.gen_range(1..=12), 4)))
        .collect();
    NetworkSpec::heterogeneous(nodes, weighted, dec(g), dec(p), external).unwrap()
}

fn random_tree(n: usize, seed: u64) -> NetworkSpec {
    let mut r = rng(seed);
    let (g, p, ebar) = TREE_REGIMES[r.gen_range(0..TREE_REGIMES.len())];
    let params = RandomParams::new(dec(g), dec(p), dec(ebar) * int(n));
    gen_random_in_arborescence(n, r.gen_range(1..=4), &params, seed).unwrap()
}

fn random_dag(n: usize, seed: u64) -> NetworkSpec {
    let mut r = rng(seed);
    let (g, p) = REGIMES[r.gen_range(0..REGIMES.len())];
    let params = RandomParams::new(dec(g), dec(p), ratio(r.gen_range(1..=40), 4) * int(n));
    gen_random_dag(n, r.gen_range(0.1..0.8), &params, seed).unwrap()
}

fn shock_of(n: usize, bits: u64) -> Vec<usize> {
    let s = members(bits % (1 << n), n);
    if s.is_empty() {
        vec![(bits as usize) % n]
    } else {
        s
    }
}

fn to_horizon(h: Option<usize>) -> Horizon {
    h.map_or(Horizon::Unbounded, Horizon::Steps)
}

fn integer_ratio(spec: &NetworkSpec) -> bool {
    (spec.phi() / spec.gamma()).is_integer()
}

fn sum(xs: impl Iterator<Item = BigRational>) -> BigRational {
    xs.fold(BigRational::zero(), |a, b| a + b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn balance_sheet_identities(n in 1usize..8, seed in any::<u64>(), het in any::<bool>()) {
        let spec = random_spec(n, seed, het);
        let s = spec.exact_balance_sheets();
        let b = spec.balance_sheets();
        let r = |v: &contagion::Amount| v.as_rational().unwrap().clone();
        prop_assert_eq!(sum((0..n).map(|v| r(&b.borrowing[v]) - r(&b.interbank_asset[v]))), BigRational::zero());
        prop_assert_eq!(sum(b.external_asset.iter().map(r)), spec.external_total().clone());
        prop_assert_eq!(sum(b.total_asset.iter().map(r)), spec.external_total() + spec.interbank_total());
        for v in 0..n {
            prop_assert_eq!(r(&b.equity[v]), spec.gamma() * r(&b.total_asset[v]));
        }
        prop_assert_eq!(s, spec.exact_balance_sheets());
    }

    #[test]
    fn homogeneous_sheets_match_their_heterogeneous_encoding(n in 1usize..8, seed in any::<u64>()) {
        let spec = random_spec(n, seed, false);
        let het = spec.to_heterogeneous();
        prop_assert_eq!(het.mode(), Mode::Heterogeneous);
        prop_assert_eq!(spec.balance_sheets(), het.balance_sheets());
    }

    #[test]
    fn normalization_is_idempotent(n in 1usize..8, seed in any::<u64>()) {
        let spec = random_spec(n, seed, false);
        let once = spec.normalize_homogeneous().unwrap();
        prop_assert!(once.weights().iter().all(|w| w.is_one()));
        prop_assert_eq!(once.normalize_homogeneous().unwrap(), once);
    }

    #[test]
    fn traces_are_well_formed(n in 1usize..9, seed in any::<u64>(), het in any::<bool>(), bits in any::<u64>(), t in 1usize..6, unbounded in any::<bool>()) {
        let spec = random_spec(n, seed, het);
        let shock = ShockSet::from_indices(n, shock_of(n, bits)).unwrap();
        let h = if unbounded { Horizon::Unbounded } else { Horizon::Steps(t) };
        let trace = propagate(&spec, &shock, h).unwrap();
        let cap = if unbounded { n } else { t.min(n) };
        prop_assert!(trace.steps.len() <= cap);
        let mut seen = std::collections::BTreeSet::new();
        for step in &trace.steps {
            prop_assert!(!step.failed.is_empty());
            for &v in &step.failed {
                prop_assert!(seen.insert(v));
            }
        }
        prop_assert_eq!(trace.dead, trace.survivors.is_empty());
        prop_assert_eq!(seen.len() + trace.survivors.len(), n);
        prop_assert_eq!(propagate(&spec, &shock, h).unwrap(), trace);
    }

    #[test]
    fn engine_matches_reference_simulator(n in 1usize..9, seed in any::<u64>(), het in any::<bool>(), bits in any::<u64>(), t in prop::option::of(1usize..5)) {
        let spec = random_spec(n, seed, het);
        let shock = shock_of(n, bits);
        let trace = propagate(&spec, &ShockSet::from_indices(n, shock.clone()).unwrap(), to_horizon(t)).unwrap();
        prop_assert_eq!(trace.failure_steps(n), reference_fail_steps(&spec, &shock, t));
    }

    #[test]
    fn transmitted_loss_is_conserved(n in 2usize..9, seed in any::<u64>(), het in any::<bool>(), bits in any::<u64>()) {
        let spec = random_spec(n, seed, het);
        let trace = propagate(&spec, &ShockSet::from_indices(n, shock_of(n, bits)).unwrap(), Horizon::Unbounded).unwrap();
        let b = spec.balance_sheets();
        for step in &trace.steps {
            for tx in &step.transmissions {
                let c = step.equity_before[tx.debtor].as_ref().unwrap().as_rational().unwrap().abs();
                let borrowed = b.borrowing[tx.debtor].as_rational().unwrap().clone();
                let total = tx.per_creditor.as_rational().unwrap() * int(tx.creditors.len());
                prop_assert_eq!(total, c.min(borrowed));
            }
        }
    }

    #[test]
    fn sinks_fail_only_when_shocked_in_dags(n in 1usize..10, seed in any::<u64>(), bits in any::<u64>()) {
        let spec = random_dag(n, seed);
        let out = spec.out_degrees();
        let shock: Vec<usize> = shock_of(n, bits).into_iter().filter(|&v| out[v] > 0).collect();
        prop_assume!(!shock.is_empty());
        let steps = propagate(&spec, &ShockSet::from_indices(n, shock).unwrap(), Horizon::Unbounded).unwrap().failure_steps(n);
        for v in (0..n).filter(|&v| out[v] == 0) {
            prop_assert!(steps[v].is_none());
        }
    }

    #[test]
    fn dag_cascades_stop_by_the_horizon_bound(n in 1usize..10, seed in any::<u64>(), bits in any::<u64>()) {
        let spec = random_dag(n, seed);
        prop_assert!(is_acyclic(&spec));
        let trace = propagate(&spec, &ShockSet::from_indices(n, shock_of(n, bits)).unwrap(), Horizon::Unbounded).unwrap();
        prop_assert!(trace.last_step().unwrap_or(0) <= horizon_bound(&spec) + 1);
    }

    #[test]
    fn brute_force_is_sound_and_optimal(n in 1usize..7, seed in any::<u64>(), het in any::<bool>(), t in prop::option::of(1usize..4)) {
        let spec = random_spec(n, seed, het);
        let res = stab_exact_bruteforce(&spec, to_horizon(t), BruteForce::default()).unwrap();
        prop_assert_eq!(res.size(), reference_stab_size(&spec, t));
        if let Some(shock) = &res.shock {
            prop_assert!(reference_kills(&spec, shock.indices(), t));
        }
    }

    #[test]
    fn greedy_t2_is_feasible_and_covers_strictly(n in 1usize..8, seed in any::<u64>(), het in any::<bool>()) {
        let spec = random_spec(n, seed, het);
        let res = stab_greedy_t2(&spec).unwrap();
        let opt = reference_stab_size(&spec, Some(2));
        match &res.shock {
            Some(shock) => {
                prop_assert!(reference_kills(&spec, shock.indices(), Some(2)));
                prop_assert!(build_cover_instance(&spec).is_cover(shock.indices()));
                prop_assert!(shock.len() >= opt.unwrap());
            }
            None => prop_assert_eq!(res.index, StabilityIndex::Infinite),
        }
        if opt.is_some() {
            prop_assert!(res.shock.is_some());
        }
    }

    #[test]
    fn dual_brute_force_is_reproduced_and_dominates_greedy(n in 1usize..7, seed in any::<u64>(), het in any::<bool>(), t in prop::option::of(1usize..4), k in 1usize..7) {
        let spec = random_spec(n, seed, het);
        let kappa = k.min(n);
        let best = dual_exact_bruteforce(&spec, to_horizon(t), kappa, BruteForce::default()).unwrap();
        prop_assert_eq!(best.shock.len(), kappa);
        prop_assert_eq!(reference_failed(&spec, best.shock.indices(), t), best.failed.len());
        prop_assert_eq!(best.failed.len(), reference_dual_failed(&spec, kappa, t));
        prop_assert_eq!(best.value.clone(), ratio(best.failed.len() as i64, kappa as i64));
        let greedy = dual_greedy(&spec, to_horizon(t), kappa).unwrap();
        prop_assert!(greedy.value <= best.value);
        prop_assert_eq!(reference_failed(&spec, greedy.shock.indices(), t), greedy.failed.len());
    }

    #[test]
    fn json_round_trip(n in 1usize..8, seed in any::<u64>(), het in any::<bool>()) {
        let spec = random_spec(n, seed, het);
        let json = serde_json::to_string(&NetworkFile::from_spec(&spec)).unwrap();
        prop_assert_eq!(NetworkFile::parse(&json).unwrap().to_spec().unwrap(), spec);
    }

    #[test]
    fn generated_networks_validate(n in 1usize..30, seed in any::<u64>()) {
        prop_assert!(random_tree(n, seed).validate().is_ok());
        prop_assert!(random_dag(n, seed).validate().is_ok());
        prop_assert_eq!(random_tree(n, seed), random_tree(n, seed));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tree_solvers_match_exhaustive_search(n in 1usize..11, seed in any::<u64>(), t in prop::option::of(1usize..4)) {
        let spec = random_tree(n, seed);
        prop_assume!(every_node_fails_when_shocked(&spec));
        let h = to_horizon(t);
        let dp = stab_exact_in_arborescence(&spec, h).unwrap();
        prop_assert!(dp.confirmed);
        prop_assert_eq!(dp.size(), reference_stab_size(&spec, t));
        if let Some(literal) = influence_zone_recurrence(&spec, h).unwrap() {
            prop_assert!(literal >= dp.size().unwrap());
        }
        let lb = arborescence_lower_bound(&spec).unwrap();
        if let StabilityIndex::Finite(v) = &dp.index {
            prop_assert!(*v >= lb);
            if !integer_ratio(&spec) && Tree::of(&spec).unwrap().max_in_degree() > 0 {
                prop_assert!(*v > lb);
            }
        }
        for kappa in 1..=n {
            let dual = dual_exact_in_arborescence(&spec, h, kappa).unwrap();
            prop_assert!(dual.confirmed);
            prop_assert_eq!(dual.failed.len(), reference_dual_failed(&spec, kappa, t));
        }
    }

    #[test]
    fn influence_zones_respect_the_bound(n in 1usize..15, seed in any::<u64>()) {
        let spec = random_tree(n, seed);
        prop_assume!(every_node_fails_when_shocked(&spec));
        let din = spec.in_degrees();
        let tree = Tree::of(&spec).unwrap();
        for u in 0..n {
            let iz = influence_zone(&spec, u, Horizon::Unbounded).unwrap();
            prop_assert!(iz.contains(&u));
            prop_assert!(iz.is_subset(&tree.subtree(u)));
            let size = int(iz.len());
            let bound = influence_zone_bound(&spec, u);
            prop_assert!(size <= bound);
            if din[u] > 0 && !integer_ratio(&spec) {
                prop_assert!(size < bound);
            }
        }
    }
}
