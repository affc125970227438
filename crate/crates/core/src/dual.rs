//! The dual stability index: the largest number of failures per shocked
//! node over shock sets of a fixed size `κ`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::amount::Amount;
use crate::arborescence::{Tree, TreeModel};
use crate::cascade::{mask_of, Horizon, ShockSet, Simulator};
use crate::network::NetworkSpec;
use crate::stability::{fraction, BruteForce, Combinations, StabilityError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DualMethod {
    BruteForce,
    Greedy,
    DpArborescence,
}

impl fmt::Display for DualMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DualMethod::BruteForce => "brute-force",
            DualMethod::Greedy => "greedy",
            DualMethod::DpArborescence => "dp-arborescence",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DualResult {
    pub method: DualMethod,
    pub horizon: Horizon,
    pub kappa: usize,
    pub shock: ShockSet,
    /// Nodes that fail, recomputed by simulation.
    pub failed: Vec<usize>,
    /// `|failed| / κ`.
    pub value: BigRational,
    /// The solver's own failure count agrees with the simulation.
    pub confirmed: bool,
}

impl DualResult {
    fn finish(
        spec: &NetworkSpec,
        method: DualMethod,
        horizon: Horizon,
        shock: ShockSet,
        claimed: usize,
    ) -> Result<Self, StabilityError> {
        let steps = Simulator::new(spec).fail_steps(&mask_of(spec.n(), shock.indices()), horizon)?;
        let failed: Vec<usize> = (0..spec.n()).filter(|&v| steps[v].is_some()).collect();
        let kappa = shock.len();
        Ok(DualResult {
            method,
            horizon,
            kappa,
            value: fraction(failed.len(), kappa),
            confirmed: failed.len() == claimed,
            failed,
            shock,
        })
    }
}

fn check_kappa(kappa: usize, n: usize) -> Result<(), StabilityError> {
    if kappa == 0 || kappa > n {
        Err(StabilityError::Kappa { kappa, n })
    } else {
        Ok(())
    }
}

/// Exact maximum over all `C(n, κ)` shock sets; ties go to the
/// lexicographically smallest set.
pub fn dual_exact_bruteforce(
    spec: &NetworkSpec,
    horizon: Horizon,
    kappa: usize,
    opts: BruteForce,
) -> Result<DualResult, StabilityError> {
    let n = spec.n();
    opts.check(n)?;
    check_kappa(kappa, n)?;
    horizon.resolve(0)?;
    let sim = Simulator::new(spec);
    let score = |combo: &Vec<usize>| sim.failed_count(&mask_of(n, combo), horizon).unwrap_or(0);
    let pick = |a: (usize, Vec<usize>), b: (usize, Vec<usize>)| {
        if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
            b
        } else {
            a
        }
    };
    let best = match opts.pool()? {
        None => Combinations::new(n, kappa)
            .map(|c| (score(&c), c))
            .reduce(pick),
        Some(pool) => {
            let all: Vec<Vec<usize>> = Combinations::new(n, kappa).collect();
            pool.install(|| all.into_par_iter().map(|c| (score(&c), c)).reduce_with(pick))
        }
    };
    let (count, set) = best.expect("at least one subset");
    DualResult::finish(spec, DualMethod::BruteForce, horizon, ShockSet::from_indices(n, set)?, count)
}

/// Adds, `κ` times, the node whose addition fails the most nodes; ties go to
/// the lowest index.
pub fn dual_greedy(spec: &NetworkSpec, horizon: Horizon, kappa: usize) -> Result<DualResult, StabilityError> {
    let n = spec.n();
    check_kappa(kappa, n)?;
    let sim = Simulator::new(spec);
    let mut mask = vec![false; n];
    let mut count = 0;
    for _ in 0..kappa {
        let mut best: Option<(usize, usize)> = None;
        for v in 0..n {
            if mask[v] {
                continue;
            }
            mask[v] = true;
            let c = sim.failed_count(&mask, horizon)?;
            mask[v] = false;
            if best.is_none_or(|(bc, _)| c > bc) {
                best = Some((c, v));
            }
        }
        let (c, v) = best.expect("κ ≤ n leaves a candidate");
        mask[v] = true;
        count = c;
    }
    let shock = ShockSet::from_indices(n, (0..n).filter(|&v| mask[v]))?;
    DualResult::finish(spec, DualMethod::Greedy, horizon, shock, count)
}

/// `κ/n · (1 + d_max (Φ/γ − 1))`.
pub fn dual_arborescence_upper_bound(spec: &NetworkSpec, kappa: usize) -> Result<BigRational, StabilityError> {
    let tree = Tree::of(spec)
        .ok_or_else(|| StabilityError::Precondition("network is not an in-arborescence".into()))?;
    let d = BigRational::from_integer(BigInt::from(tree.max_in_degree()));
    let amp = spec.phi() / spec.gamma() - BigRational::one();
    Ok(fraction(kappa, spec.n()) * (BigRational::one() + d * amp))
}

/// Failures inside a subtree and the shocked nodes achieving them.
#[derive(Clone, Debug)]
struct Val {
    failed: usize,
    shocked: Vec<usize>,
}

/// Indexed by the number of shocked nodes; `None` marks infeasible budgets.
type Table = Vec<Option<Val>>;

fn keep_best(slot: &mut Option<Val>, cand: Val) {
    if slot.as_ref().is_none_or(|v| cand.failed > v.failed) {
        *slot = Some(cand);
    }
}

fn join(a: &Val, b: &Val) -> Val {
    let mut shocked = a.shocked.clone();
    shocked.extend(&b.shocked);
    Val {
        failed: a.failed + b.failed,
        shocked,
    }
}

fn elementwise_best(a: &Table, b: &Table) -> Table {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let mut slot = x.clone();
            if let Some(y) = y {
                keep_best(&mut slot, y.clone());
            }
            slot
        })
        .collect()
}

struct DualDp<'m, 'a> {
    model: &'m TreeModel<'a>,
    size: Vec<usize>,
    shocked_memo: Vec<Option<Table>>,
    /// Keyed by the total `u` passes on when it fails (if it does).
    unshocked_memo: HashMap<(usize, Option<Amount>, usize), Table>,
}

impl DualDp<'_, '_> {
    fn empty(&self, u: usize) -> Table {
        vec![None; self.size[u] + 1]
    }

    /// Best outcome in `Δ(u)` with `u` shocked, for each budget.
    fn shocked(&mut self, u: usize) -> Table {
        if let Some(t) = &self.shocked_memo[u] {
            return t.clone();
        }
        let model = self.model;
        let share = model.shocked_share(u);
        let mut acc: Table = vec![Some(Val {
            failed: 1,
            shocked: vec![u],
        })];
        for &v in &model.tree.children[u] {
            let own = self.shocked(v);
            let passive = self.unshocked(v, share.as_ref(), 2);
            acc = convolve(&acc, &elementwise_best(&passive, &own));
        }
        let mut table = vec![None];
        table.extend(acc);
        table.resize(self.size[u] + 1, None);
        self.shocked_memo[u] = Some(table.clone());
        table
    }

    /// Best outcome in `Δ(u)` with `u` unshocked, hit by `loss` at step `s`.
    fn unshocked(&mut self, u: usize, loss: Option<&Amount>, s: usize) -> Table {
        let model = self.model;
        let out = loss.and_then(|l| model.failure_output(u, l, s));
        let key = (u, out.clone(), if out.is_some() { s } else { 0 });
        if let Some(t) = self.unshocked_memo.get(&key) {
            return t.clone();
        }
        let kids = &model.tree.children[u];
        let d = kids.len();
        let mut table = self.empty(u);
        match out {
            None => {
                let mut acc: Table = vec![Some(Val {
                    failed: 0,
                    shocked: Vec::new(),
                })];
                for &v in kids {
                    let own = self.shocked(v);
                    let passive = self.unshocked(v, None, 0);
                    acc = convolve(&acc, &elementwise_best(&passive, &own));
                }
                for (k, val) in acc.into_iter().enumerate() {
                    if let Some(val) = val {
                        keep_best(&mut table[k], val);
                    }
                }
            }
            Some(out) => {
                // u fails at step s; children shocked at step one are gone,
                // so with j shocked children each other child receives
                // out/(d − j).
                for j in 0..=d {
                    let share = (j < d).then(|| model.split(&out, d - j));
                    // by_count[c][k]: c shocked children so far, k shocks total.
                    let mut by_count: Vec<Table> = vec![vec![Some(Val {
                        failed: 1,
                        shocked: Vec::new(),
                    })]];
                    for &v in kids {
                        let own = self.shocked(v);
                        let passive = match &share {
                            Some(l) => self.unshocked(v, Some(l), s + 1),
                            None => vec![None; self.size[v] + 1],
                        };
                        let mut next: Vec<Table> = vec![Vec::new(); by_count.len() + 1];
                        for (c, row) in by_count.iter().enumerate() {
                            merge_into(&mut next[c], &convolve(row, &passive));
                            merge_into(&mut next[c + 1], &convolve(row, &own));
                        }
                        by_count = next;
                    }
                    if let Some(row) = by_count.get(j) {
                        for (k, val) in row.iter().enumerate() {
                            if let (Some(val), Some(slot)) = (val, table.get_mut(k)) {
                                keep_best(slot, val.clone());
                            }
                        }
                    }
                }
            }
        }
        self.unshocked_memo.insert(key, table.clone());
        table
    }
}

fn merge_into(dst: &mut Table, src: &Table) {
    if dst.len() < src.len() {
        dst.resize(src.len(), None);
    }
    for (k, val) in src.iter().enumerate() {
        if let Some(val) = val {
            keep_best(&mut dst[k], val.clone());
        }
    }
}

fn convolve(a: &Table, b: &Table) -> Table {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out: Table = vec![None; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        let Some(x) = x else { continue };
        for (j, y) in b.iter().enumerate() {
            if let Some(y) = y {
                keep_best(&mut out[i + j], join(x, y));
            }
        }
    }
    out
}

/// Exact dual index of an in-arborescence in which every node fails when
/// shocked, by a knapsack over children with exactly-`κ` budgets.
pub fn dual_exact_in_arborescence(
    spec: &NetworkSpec,
    horizon: Horizon,
    kappa: usize,
) -> Result<DualResult, StabilityError> {
    check_kappa(kappa, spec.n())?;
    let model = TreeModel::new(spec, horizon)?;
    let mut dp = DualDp {
        model: &model,
        size: model.tree.subtree_sizes(),
        shocked_memo: vec![None; model.n()],
        unshocked_memo: HashMap::new(),
    };
    let root = model.tree.root;
    let mut slot = dp.shocked(root)[kappa].clone();
    if let Some(v) = dp.unshocked(root, None, 0)[kappa].clone() {
        keep_best(&mut slot, v);
    }
    let best = slot.ok_or(StabilityError::Kappa {
        kappa,
        n: spec.n(),
    })?;
    let shock = ShockSet::from_indices(spec.n(), best.shocked)?;
    DualResult::finish(spec, DualMethod::DpArborescence, horizon, shock, best.failed)
}
