//! The stability index: the smallest fraction of banks whose shock kills the
//! whole network within the horizon.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cascade::{mask_of, CascadeError, Horizon, ShockSet, Simulator};
use crate::network::NetworkSpec;

pub const DEFAULT_NODE_LIMIT: usize = 20;

#[derive(Debug, Error)]
pub enum StabilityError {
    #[error("network has {n} nodes, above the enumeration limit {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error(transparent)]
    Cascade(#[from] CascadeError),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("kappa must lie in 1..={n}, got {kappa}")]
    Kappa { kappa: usize, n: usize },
    #[error("thread pool: {0}")]
    Threads(String),
}

/// `|V'|/n`, or infinity when no admissible shock set kills the network.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum StabilityIndex {
    Finite(BigRational),
    Infinite,
}

impl StabilityIndex {
    pub fn is_finite(&self) -> bool {
        matches!(self, StabilityIndex::Finite(_))
    }
}

impl fmt::Display for StabilityIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StabilityIndex::Finite(r) => f.write_str(&crate::amount::format_rational(r)),
            StabilityIndex::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StabilityMethod {
    BruteForce,
    GreedyT2,
    DpArborescence,
}

impl fmt::Display for StabilityMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StabilityMethod::BruteForce => "brute-force",
            StabilityMethod::GreedyT2 => "greedy-t2",
            StabilityMethod::DpArborescence => "dp-arborescence",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilityResult {
    pub method: StabilityMethod,
    pub horizon: Horizon,
    pub n: usize,
    /// The shock set; `None` when the index is infinite.
    pub shock: Option<ShockSet>,
    pub index: StabilityIndex,
    /// Re-simulating `shock` kills the network (vacuously true when infinite).
    pub confirmed: bool,
    /// Closed-form lower bound attached by the arborescence solver.
    pub lower_bound: Option<BigRational>,
}

impl StabilityResult {
    pub(crate) fn finish(
        spec: &NetworkSpec,
        method: StabilityMethod,
        horizon: Horizon,
        shock: Option<ShockSet>,
    ) -> Result<Self, StabilityError> {
        let n = spec.n();
        let (index, confirmed) = match &shock {
            Some(s) => {
                let sim = Simulator::new(spec);
                let dead = sim.kills(&mask_of(n, s.indices()), horizon)?;
                (StabilityIndex::Finite(fraction(s.len(), n)), dead)
            }
            None => (StabilityIndex::Infinite, true),
        };
        Ok(StabilityResult {
            method,
            horizon,
            n,
            shock,
            index,
            confirmed,
            lower_bound: None,
        })
    }

    pub fn size(&self) -> Option<usize> {
        self.shock.as_ref().map(ShockSet::len)
    }
}

pub(crate) fn fraction(p: usize, q: usize) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// `|V'|/n` if shocking `V'` kills the network within the horizon, else ∞.
pub fn vi(spec: &NetworkSpec, shock: &ShockSet, horizon: Horizon) -> Result<StabilityIndex, CascadeError> {
    let sim = Simulator::new(spec);
    if sim.kills(&mask_of(spec.n(), shock.indices()), horizon)? {
        Ok(StabilityIndex::Finite(fraction(shock.len(), spec.n())))
    } else {
        Ok(StabilityIndex::Infinite)
    }
}

/// Enumeration settings shared by the brute-force solvers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BruteForce {
    pub node_limit: usize,
    pub threads: usize,
}

impl Default for BruteForce {
    fn default() -> Self {
        BruteForce {
            node_limit: DEFAULT_NODE_LIMIT,
            threads: 1,
        }
    }
}

impl BruteForce {
    pub(crate) fn check(&self, n: usize) -> Result<(), StabilityError> {
        if n > self.node_limit {
            Err(StabilityError::TooLarge {
                n,
                limit: self.node_limit,
            })
        } else {
            Ok(())
        }
    }

    pub(crate) fn pool(&self) -> Result<Option<rayon::ThreadPool>, StabilityError> {
        if self.threads <= 1 {
            return Ok(None);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads)
            .build()
            .map(Some)
            .map_err(|e| StabilityError::Threads(e.to_string()))
    }
}

/// Lexicographic `k`-combinations of `0..m`.
#[derive(Clone, Debug)]
pub struct Combinations {
    m: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub fn new(m: usize, k: usize) -> Self {
        Combinations {
            m,
            current: (k <= m).then(|| (0..k).collect()),
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.current.as_mut()?;
        let out = cur.clone();
        let k = cur.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if cur[i] < self.m - k + i {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// First item of `items` (in order) satisfying `pred`, optionally searched in
/// parallel.
pub(crate) fn find_first<T, F>(pool: Option<&rayon::ThreadPool>, items: Combinations, pred: F) -> Option<T>
where
    T: Send,
    F: Fn(Vec<usize>) -> Option<T> + Sync + Send,
{
    match pool {
        None => items.into_iter().find_map(pred),
        Some(pool) => {
            let all: Vec<Vec<usize>> = items.collect();
            pool.install(|| all.into_par_iter().find_map_first(pred))
        }
    }
}

/// Exact stability index by enumeration in order of size, then
/// lexicographically.
///
/// Nodes that lend to nobody can only fail by being shocked, so they are
/// always included.
pub fn stab_exact_bruteforce(
    spec: &NetworkSpec,
    horizon: Horizon,
    opts: BruteForce,
) -> Result<StabilityResult, StabilityError> {
    let n = spec.n();
    opts.check(n)?;
    horizon.resolve(0)?;
    let sim = Simulator::new(spec);
    let dout = spec.out_degrees();
    let mandatory: Vec<usize> = (0..n).filter(|&v| dout[v] == 0).collect();
    let free: Vec<usize> = (0..n).filter(|&v| dout[v] > 0).collect();
    let pool = opts.pool()?;
    let mut found = None;
    for k in 0..=free.len() {
        if mandatory.is_empty() && k == 0 {
            continue;
        }
        let hit = find_first(pool.as_ref(), Combinations::new(free.len(), k), |combo| {
            let mut mask = mask_of(n, &mandatory);
            for &i in &combo {
                mask[free[i]] = true;
            }
            sim.kills(&mask, horizon)
                .ok()
                .filter(|&d| d)
                .map(|_| combo)
        });
        if let Some(combo) = hit {
            let members = mandatory.iter().copied().chain(combo.iter().map(|&i| free[i]));
            found = Some(ShockSet::from_indices(n, members)?);
            break;
        }
    }
    StabilityResult::finish(spec, StabilityMethod::BruteForce, horizon, found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amount::{dec, ratio};
    use crate::fixtures;

    #[test]
    fn combinations_are_lexicographic() {
        let all: Vec<Vec<usize>> = Combinations::new(4, 2).collect();
        assert_eq!(
            all,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(Combinations::new(3, 0).count(), 1);
        assert_eq!(Combinations::new(2, 3).count(), 0);
    }

    #[test]
    fn vi_on_non_monotone() {
        let spec = fixtures::non_monotone();
        let ab = ShockSet::from_ids(&spec, ["a", "b"]).unwrap();
        assert_eq!(
            vi(&spec, &ab, Horizon::Steps(3)).unwrap(),
            StabilityIndex::Finite(ratio(2, 5))
        );
        assert_eq!(
            vi(&spec, &ab, Horizon::Steps(2)).unwrap(),
            StabilityIndex::Infinite
        );
        assert_eq!(
            vi(&spec, &ShockSet::all(&spec), Horizon::Unbounded).unwrap(),
            StabilityIndex::Infinite
        );
    }

    #[test]
    fn brute_force_non_monotone() {
        let spec = fixtures::non_monotone();
        let r = stab_exact_bruteforce(&spec, Horizon::Unbounded, BruteForce::default()).unwrap();
        assert_eq!(r.index, StabilityIndex::Finite(ratio(2, 5)));
        assert_eq!(r.shock.unwrap().ids(&spec), vec!["a", "b"]);
        assert!(r.confirmed);
        let t2 = stab_exact_bruteforce(&spec, Horizon::Steps(2), BruteForce::default()).unwrap();
        // d and e can only die at step 3.
        assert_eq!(t2.index, StabilityIndex::Infinite);
        assert!(t2.shock.is_none());
    }

    #[test]
    fn brute_force_single_node() {
        let spec = fixtures::single_node(dec("10"), dec("0.2"), dec("0.5"));
        let r = stab_exact_bruteforce(&spec, Horizon::Unbounded, BruteForce::default()).unwrap();
        assert_eq!(r.index, StabilityIndex::Finite(ratio(1, 1)));
    }

    #[test]
    fn parallel_matches_sequential() {
        let spec = fixtures::five_banks_uniform();
        for t in [Horizon::Steps(1), Horizon::Steps(2), Horizon::Unbounded] {
            let a = stab_exact_bruteforce(&spec, t, BruteForce::default()).unwrap();
            let b = stab_exact_bruteforce(
                &spec,
                t,
                BruteForce {
                    threads: 3,
                    ..BruteForce::default()
                },
            )
            .unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn node_limit_enforced() {
        let spec = fixtures::non_monotone();
        let err = stab_exact_bruteforce(
            &spec,
            Horizon::Unbounded,
            BruteForce {
                node_limit: 4,
                threads: 1,
            },
        )
        .unwrap_err();
        assert!(matches!(err, StabilityError::TooLarge { n: 5, limit: 4 }));
    }
}
