//! Seeded random topologies.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::GenError;
use crate::network::NetworkSpec;

/// Homogeneous parameters for random networks. Every loan has weight
/// `edge_weight`, so `I = m · edge_weight`.
#[derive(Clone, Debug, PartialEq)]
pub struct RandomParams {
    pub gamma: BigRational,
    pub phi: BigRational,
    pub external_total: BigRational,
    pub edge_weight: BigRational,
}

impl RandomParams {
    pub fn new(gamma: BigRational, phi: BigRational, external_total: BigRational) -> Self {
        RandomParams {
            gamma,
            phi,
            external_total,
            edge_weight: BigRational::from_integer(BigInt::from(1)),
        }
    }

    fn build(&self, n: usize, prefix: &str, edges: Vec<(usize, usize)>) -> Result<NetworkSpec, GenError> {
        let ids: Vec<String> = (0..n).map(|i| format!("{prefix}{i}")).collect();
        let interbank = &self.edge_weight * BigRational::from_integer(BigInt::from(edges.len()));
        let pairs: Vec<(String, String)> = edges
            .into_iter()
            .map(|(s, d)| (ids[s].clone(), ids[d].clone()))
            .collect();
        Ok(NetworkSpec::homogeneous(
            ids,
            pairs,
            self.gamma.clone(),
            self.phi.clone(),
            interbank,
            self.external_total.clone(),
        )?)
    }
}

/// Random rooted in-arborescence on nodes `t0..`, rooted at `t0`. Each later
/// node lends to a uniformly chosen earlier node that still has fewer than
/// `max_in_degree` creditors.
pub fn gen_random_in_arborescence(
    n: usize,
    max_in_degree: usize,
    params: &RandomParams,
    seed: u64,
) -> Result<NetworkSpec, GenError> {
    if n == 0 {
        return Err(GenError::Precondition("n must be at least 1".into()));
    }
    if max_in_degree == 0 && n > 1 {
        return Err(GenError::Precondition("in-degree cap must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut open: Vec<usize> = vec![0];
    let mut degree = vec![0usize; n];
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for v in 1..n {
        let slot = rng.gen_range(0..open.len());
        let p = open[slot];
        edges.push((v, p));
        degree[p] += 1;
        if degree[p] == max_in_degree {
            open.swap_remove(slot);
        }
        open.push(v);
    }
    params.build(n, "t", edges)
}

/// Random DAG on nodes `d0..`: a random topological order, with each
/// forward pair made a loan with probability `edge_prob`.
pub fn gen_random_dag(n: usize, edge_prob: f64, params: &RandomParams, seed: u64) -> Result<NetworkSpec, GenError> {
    if n == 0 {
        return Err(GenError::Precondition("n must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&edge_prob) {
        return Err(GenError::Precondition("edge probability must lie in [0,1]".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(edge_prob) {
                edges.push((order[i], order[j]));
            }
        }
    }
    params.build(n, "d", edges)
}
