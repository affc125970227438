//! Hard instances built from classic problems, each solved on the network
//! side and mapped back.

use contagion::dual::dual_exact_bruteforce;
use contagion::generate::{
    gen_from_densest_subhypergraph, gen_from_dominating_set, gen_from_max_coverage, gen_from_node_cover_3regular,
    gen_from_set_cover, Graph, Hypergraph, SetCoverOptions, SetSystem,
};
use contagion::stability::{stab_exact_bruteforce, BruteForce};

fn main() {
    let cycle = Graph::from_indices(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
    let inst = gen_from_dominating_set(&cycle).unwrap();
    let res = stab_exact_bruteforce(&inst.spec, inst.certificate.horizon, BruteForce::default()).unwrap();
    println!("C5 dominating set: {} network nodes, vi* = {}", inst.spec.n(), res.index);

    let k4 = Graph::from_indices(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
    let inst = gen_from_node_cover_3regular(&k4).unwrap();
    let res = stab_exact_bruteforce(&inst.spec, inst.certificate.horizon, BruteForce::default()).unwrap();
    println!(
        "K4 node cover: {} checks hold, death set of {} = 4 twins + cover of 3",
        inst.certificate.checks.len(),
        res.size().unwrap()
    );

    let sets = SetSystem::from_indices(3, &[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
    let inst = gen_from_set_cover(&sets, &SetCoverOptions::default()).unwrap();
    let res = stab_exact_bruteforce(&inst.spec, inst.certificate.horizon, BruteForce::default()).unwrap();
    println!("triangle set cover: death set {:?}", res.shock.unwrap().ids(&inst.spec));

    let inst = gen_from_max_coverage(&sets, 2).unwrap();
    let res = dual_exact_bruteforce(&inst.spec, inst.certificate.horizon, 2, BruteForce::default()).unwrap();
    println!("max coverage, two sets: {} failures", res.failed.len());

    let h = Hypergraph::from_indices(4, &[vec![0, 1], vec![1, 2], vec![0, 2], vec![2, 3]]).unwrap();
    let inst = gen_from_densest_subhypergraph(&h, 3).unwrap();
    let res = dual_exact_bruteforce(&inst.spec, inst.certificate.horizon, 3, BruteForce::default()).unwrap();
    println!("densest 3 vertices: shock {:?}", res.shock.ids(&inst.spec));
}
