//! In-arborescences: rooted trees whose loans all point toward the root.
//!
//! Losses travel from a failed node to its creditors, so in such a tree a
//! failure moves away from the root, one level per step.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::amount::Amount;
use crate::cascade::{CascadeError, Horizon, ShockSet, Simulator};
use crate::network::NetworkSpec;
use crate::stability::{StabilityError, StabilityMethod, StabilityResult};

/// Parent/children structure of an in-arborescence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tree {
    pub root: usize,
    /// The debtor each node lends to; `None` for the root.
    pub parent: Vec<Option<usize>>,
    /// The creditors of each node, in index order.
    pub children: Vec<Vec<usize>>,
}

impl Tree {
    pub fn of(spec: &NetworkSpec) -> Option<Tree> {
        let n = spec.n();
        if n == 0 || spec.m() + 1 != n {
            return None;
        }
        let mut parent = vec![None; n];
        for e in spec.edges() {
            if parent[e.src].replace(e.dst).is_some() {
                return None;
            }
        }
        let roots: Vec<usize> = (0..n).filter(|&v| parent[v].is_none()).collect();
        let [root] = roots[..] else { return None };
        // With n − 1 edges and one parentless node, the graph is a tree iff
        // every node reaches the root.
        let mut reaches = vec![false; n];
        reaches[root] = true;
        for start in 0..n {
            let mut path = Vec::new();
            let mut v = start;
            while !reaches[v] {
                if path.len() > n {
                    return None;
                }
                path.push(v);
                v = parent[v]?;
            }
            for p in path {
                reaches[p] = true;
            }
        }
        let mut children = vec![Vec::new(); n];
        for (v, p) in parent.iter().enumerate() {
            if let Some(p) = p {
                children[*p].push(v);
            }
        }
        Some(Tree {
            root,
            parent,
            children,
        })
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    /// Nodes ordered so that every child precedes its parent.
    pub fn post_order(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.n());
        let mut stack = vec![(self.root, false)];
        while let Some((v, expanded)) = stack.pop() {
            if expanded {
                order.push(v);
            } else {
                stack.push((v, true));
                for &c in self.children[v].iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        order
    }

    /// `u` together with everything below it.
    pub fn subtree(&self, u: usize) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        let mut stack = vec![u];
        while let Some(v) = stack.pop() {
            out.insert(v);
            stack.extend(&self.children[v]);
        }
        out
    }

    pub fn subtree_sizes(&self) -> Vec<usize> {
        let mut size = vec![1; self.n()];
        for v in self.post_order() {
            if let Some(p) = self.parent[v] {
                size[p] += size[v];
            }
        }
        size
    }

    pub fn max_in_degree(&self) -> usize {
        self.children.iter().map(Vec::len).max().unwrap_or(0)
    }
}

pub fn is_in_arborescence(spec: &NetworkSpec) -> bool {
    Tree::of(spec).is_some()
}

/// `Φ e_v > c_v` for every node.
pub fn every_node_fails_when_shocked(spec: &NetworkSpec) -> bool {
    let sheets = spec.balance_sheets();
    let phi = spec.backend().amount(spec.phi());
    let tol = spec.backend().tolerance();
    sheets
        .external_asset
        .iter()
        .zip(&sheets.equity)
        .all(|(e, c)| (&phi * e).exceeds(c, tol))
}

fn not_tree() -> StabilityError {
    StabilityError::Precondition("network is not an in-arborescence".into())
}

/// Nodes below or at `u` that fail when only `u` is shocked.
pub fn influence_zone(spec: &NetworkSpec, u: usize, horizon: Horizon) -> Result<BTreeSet<usize>, StabilityError> {
    let tree = Tree::of(spec).ok_or_else(not_tree)?;
    let shock = ShockSet::from_indices(spec.n(), [u])?;
    let failed = Simulator::new(spec).propagate(&shock, horizon)?.failed();
    Ok(tree.subtree(u).intersection(&failed).copied().collect())
}

/// `Φ/γ − 1`.
fn amplification(spec: &NetworkSpec) -> BigRational {
    spec.phi() / spec.gamma() - BigRational::one()
}

/// `1 / (1 + d_max (Φ/γ − 1))`.
pub fn arborescence_lower_bound(spec: &NetworkSpec) -> Result<BigRational, StabilityError> {
    let tree = Tree::of(spec).ok_or_else(not_tree)?;
    let d = BigRational::from_integer(BigInt::from(tree.max_in_degree()));
    Ok(BigRational::one() / (BigRational::one() + d * amplification(spec)))
}

/// `1 + din(u)(Φ/γ − 1)`, the strict upper bound on `|iz(u)|`.
pub fn influence_zone_bound(spec: &NetworkSpec, u: usize) -> BigRational {
    let din = spec.in_degrees()[u];
    BigRational::one() + BigRational::from_integer(BigInt::from(din)) * amplification(spec)
}

/// Loss arithmetic shared by the tree solvers.
pub(crate) struct TreeModel<'a> {
    pub tree: Tree,
    spec: &'a NetworkSpec,
    equity: Vec<Amount>,
    borrowing: Vec<Amount>,
    shock_excess: Vec<Amount>,
    tol: f64,
    pub t_max: usize,
}

impl<'a> TreeModel<'a> {
    pub fn new(spec: &'a NetworkSpec, horizon: Horizon) -> Result<Self, StabilityError> {
        let tree = Tree::of(spec).ok_or_else(not_tree)?;
        if !every_node_fails_when_shocked(spec) {
            return Err(StabilityError::Precondition(
                "some node survives its own shock".into(),
            ));
        }
        let t_max = horizon.resolve(tree.n().saturating_sub(1))?;
        let sheets = spec.balance_sheets();
        let phi = spec.backend().amount(spec.phi());
        let shock_excess = sheets
            .external_asset
            .iter()
            .zip(&sheets.equity)
            .map(|(e, c)| &(&phi * e) - c)
            .collect();
        Ok(TreeModel {
            tree,
            spec,
            equity: sheets.equity,
            borrowing: sheets.borrowing,
            shock_excess,
            tol: spec.backend().tolerance(),
            t_max,
        })
    }

    pub fn n(&self) -> usize {
        self.tree.n()
    }

    fn count(&self, k: usize) -> Amount {
        self.spec.backend().count(k)
    }

    /// Loss passed to each child when `u` is shocked (all children alive).
    pub fn shocked_share(&self, u: usize) -> Option<Amount> {
        let d = self.tree.children[u].len();
        (d > 0).then(|| self.shock_excess[u].clone().min(self.borrowing[u].clone()) / self.count(d))
    }

    /// If an unshocked `u` receiving `loss` at step `s` fails, the total it
    /// passes on.
    pub fn failure_output(&self, u: usize, loss: &Amount, s: usize) -> Option<Amount> {
        if s > self.t_max {
            return None;
        }
        let left = &self.equity[u] - loss;
        left.is_negative(self.tol)
            .then(|| (-left).min(self.borrowing[u].clone()))
    }

    /// `total / alive` shared among `alive` children.
    pub fn split(&self, total: &Amount, alive: usize) -> Amount {
        total / &self.count(alive)
    }
}

/// `Some(count)` or infinity.
type Cost = Option<usize>;

fn add(a: Cost, b: Cost) -> Cost {
    Some(a? + b?)
}

/// The recurrence over `ssvi*(u)` and `snsvi*(u, u')`, where an unshocked
/// node counts as failed iff it lies in the influence zone of the shocked
/// ancestor `u'`.
///
/// Returns the minimum number of shocked nodes, or `None` for infinity.
pub fn influence_zone_recurrence(spec: &NetworkSpec, horizon: Horizon) -> Result<Option<usize>, StabilityError> {
    let model = TreeModel::new(spec, horizon)?;
    let tree = &model.tree;
    let n = tree.n();
    let zones: Vec<BTreeSet<usize>> = (0..n)
        .map(|u| influence_zone(spec, u, horizon))
        .collect::<Result<_, _>>()?;
    // ancestors[u] = proper ancestors of u.
    let mut ancestors = vec![Vec::new(); n];
    for (u, anc) in ancestors.iter_mut().enumerate() {
        let mut v = tree.parent[u];
        while let Some(p) = v {
            anc.push(p);
            v = tree.parent[p];
        }
    }
    let mut ss: Vec<Cost> = vec![None; n];
    let mut sns: Vec<HashMap<usize, Cost>> = vec![HashMap::new(); n];
    for u in tree.post_order() {
        let kids = &tree.children[u];
        let mut total = Some(1);
        for &v in kids {
            total = add(total, ss[v].min_cost(sns[v].get(&u).copied().flatten()));
        }
        ss[u] = total;
        for &a in &ancestors[u] {
            let value = if !zones[a].contains(&u) {
                None
            } else {
                let mut total = Some(0);
                for &v in kids {
                    total = add(total, ss[v].min_cost(sns[v].get(&a).copied().flatten()));
                }
                total
            };
            sns[u].insert(a, value);
        }
    }
    Ok(ss[tree.root])
}

trait MinCost {
    fn min_cost(self, other: Cost) -> Cost;
}

impl MinCost for Cost {
    fn min_cost(self, other: Cost) -> Cost {
        match (self, other) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, None) => a,
            (None, b) => b,
        }
    }
}

/// A subtree solution: its number of shocked nodes and which they are.
#[derive(Clone, Debug)]
struct Plan {
    cost: usize,
    shocked: Vec<usize>,
}

fn better(a: Option<Plan>, b: Option<Plan>) -> Option<Plan> {
    match (a, b) {
        (Some(a), Some(b)) => Some(if b.cost < a.cost { b } else { a }),
        (a, None) => a,
        (None, b) => b,
    }
}

struct StabDp<'m, 'a> {
    model: &'m TreeModel<'a>,
    shocked_memo: Vec<Option<Plan>>,
    unshocked_memo: HashMap<(usize, Amount, usize), Option<Plan>>,
}

impl StabDp<'_, '_> {
    /// Cheapest plan for `Δ(u)` with `u` shocked.
    fn shocked(&mut self, u: usize) -> Plan {
        if let Some(p) = &self.shocked_memo[u] {
            return p.clone();
        }
        let mut plan = Plan {
            cost: 1,
            shocked: vec![u],
        };
        let share = self.model.shocked_share(u);
        for &v in &self.model.tree.children[u].clone() {
            let own = Some(self.shocked(v));
            let passive = share.as_ref().and_then(|l| self.unshocked(v, l, 2));
            // Ties go to leaving the child unshocked.
            let best = better(passive, own).expect("shocking always works");
            plan.cost += best.cost;
            plan.shocked.extend(best.shocked);
        }
        self.shocked_memo[u] = Some(plan.clone());
        plan
    }

    /// Cheapest plan for `Δ(u)` with `u` unshocked and hit by `loss` at step
    /// `s`; `None` if `u` survives.
    fn unshocked(&mut self, u: usize, loss: &Amount, s: usize) -> Option<Plan> {
        let key = (u, loss.clone(), s);
        if let Some(p) = self.unshocked_memo.get(&key) {
            return p.clone();
        }
        let result = self.unshocked_uncached(u, loss, s);
        self.unshocked_memo.insert(key, result.clone());
        result
    }

    fn unshocked_uncached(&mut self, u: usize, loss: &Amount, s: usize) -> Option<Plan> {
        let out = self.model.failure_output(u, loss, s)?;
        let kids = self.model.tree.children[u].clone();
        let d = kids.len();
        let own: Vec<Plan> = kids.iter().map(|&v| self.shocked(v)).collect();
        let mut best: Option<Plan> = None;
        for k in 0..=d {
            // Shocked children fail at step one, so `d − k` remain to share
            // u's loss at step `s`.
            let passive: Vec<Option<Plan>> = if k < d {
                let share = self.model.split(&out, d - k);
                kids.iter().map(|&v| self.unshocked(v, &share, s + 1)).collect()
            } else {
                vec![None; d]
            };
            let forced: Vec<usize> = (0..d).filter(|&i| passive[i].is_none()).collect();
            if forced.len() > k {
                continue;
            }
            let mut optional: Vec<usize> = (0..d).filter(|&i| passive[i].is_some()).collect();
            let extra = |i: &usize| {
                own[*i].cost as isize - passive[*i].as_ref().map_or(0, |p| p.cost as isize)
            };
            optional.sort_by_key(|i| (extra(i), *i));
            let mut pick = vec![false; d];
            for &i in forced.iter().chain(optional.iter().take(k - forced.len())) {
                pick[i] = true;
            }
            let mut plan = Plan {
                cost: 0,
                shocked: Vec::new(),
            };
            for i in 0..d {
                let part = if pick[i] {
                    &own[i]
                } else {
                    passive[i].as_ref().expect("unforced child has a plan")
                };
                plan.cost += part.cost;
                plan.shocked.extend(part.shocked.iter().copied());
            }
            best = better(best, Some(plan));
        }
        best
    }
}

/// Exact stability index of an in-arborescence in which every node fails
/// when shocked.
///
/// Each subtree is solved for "shocked" and for "unshocked, hit by a given
/// loss at a given step". A node failing without being shocked splits its
/// loss among the children still alive, which excludes children that were
/// shocked (they fail at step one), so the number of shocked children is
/// chosen jointly with the loss the others receive.
pub fn stab_exact_in_arborescence(spec: &NetworkSpec, horizon: Horizon) -> Result<StabilityResult, StabilityError> {
    let model = TreeModel::new(spec, horizon)?;
    let mut dp = StabDp {
        model: &model,
        shocked_memo: vec![None; model.n()],
        unshocked_memo: HashMap::new(),
    };
    let plan = dp.shocked(model.tree.root);
    let shock = ShockSet::from_indices(spec.n(), plan.shocked)?;
    let mut result = StabilityResult::finish(spec, StabilityMethod::DpArborescence, horizon, Some(shock))?;
    result.lower_bound = Some(arborescence_lower_bound(spec)?);
    Ok(result)
}

/// `|iz(u)|` for every node.
pub fn influence_zone_sizes(spec: &NetworkSpec, horizon: Horizon) -> Result<Vec<usize>, CascadeError> {
    let Some(tree) = Tree::of(spec) else {
        return Ok(Vec::new());
    };
    let sim = Simulator::new(spec);
    (0..spec.n())
        .map(|u| {
            let mut mask = vec![false; spec.n()];
            mask[u] = true;
            let steps = sim.fail_steps(&mask, horizon)?;
            Ok(tree.subtree(u).iter().filter(|&&v| steps[v].is_some()).count())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amount::{dec, ratio};
    use crate::fixtures;
    use crate::stability::{stab_exact_bruteforce, BruteForce, StabilityIndex};

    fn path(n: usize, gamma: &str, phi: &str, external: i64) -> NetworkSpec {
        let ids: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
        let edges: Vec<(String, String)> =
            (1..n).map(|i| (ids[i].clone(), ids[i - 1].clone())).collect();
        NetworkSpec::homogeneous(
            ids,
            edges,
            dec(gamma),
            dec(phi),
            ratio(n as i64 - 1, 1),
            ratio(external, 1),
        )
        .unwrap()
    }

    #[test]
    fn recognizes_arborescences() {
        assert!(is_in_arborescence(&path(4, "0.1", "0.4", 8)));
        assert!(!is_in_arborescence(&fixtures::non_monotone()));
        let out_star = NetworkSpec::homogeneous(
            ["r", "x", "y"],
            [("r", "x"), ("r", "y")],
            dec("0.1"),
            dec("0.4"),
            ratio(2, 1),
            ratio(3, 1),
        )
        .unwrap();
        assert!(!is_in_arborescence(&out_star));
        assert!(is_in_arborescence(&fixtures::single_node(
            dec("1"),
            dec("0.1"),
            dec("0.4")
        )));
    }

    #[test]
    fn lower_bound_closed_form() {
        let star = NetworkSpec::homogeneous(
            ["r", "x", "y", "z"],
            [("x", "r"), ("y", "r"), ("z", "r")],
            dec("0.1"),
            dec("0.15"),
            ratio(3, 1),
            ratio(40, 1),
        )
        .unwrap();
        assert_eq!(arborescence_lower_bound(&star).unwrap(), dec("0.4"));
        let single = fixtures::single_node(dec("1"), dec("0.1"), dec("0.4"));
        assert_eq!(arborescence_lower_bound(&single).unwrap(), ratio(1, 1));
    }

    #[test]
    fn single_node_dp() {
        let spec = fixtures::single_node(dec("10"), dec("0.2"), dec("0.5"));
        let r = stab_exact_in_arborescence(&spec, Horizon::Unbounded).unwrap();
        assert_eq!(r.index, StabilityIndex::Finite(ratio(1, 1)));
        assert_eq!(influence_zone(&spec, 0, Horizon::Unbounded).unwrap().len(), 1);
    }

    #[test]
    fn dp_matches_brute_force_on_paths() {
        for n in 1..7 {
            for ext in [n as i64 * 3, n as i64 * 10, n as i64 * 40] {
                let spec = path(n, "0.1", "0.4", ext);
                if !every_node_fails_when_shocked(&spec) {
                    continue;
                }
                for h in [Horizon::Steps(1), Horizon::Steps(2), Horizon::Unbounded] {
                    let dp = stab_exact_in_arborescence(&spec, h).unwrap();
                    let bf = stab_exact_bruteforce(&spec, h, BruteForce::default()).unwrap();
                    assert_eq!(dp.index, bf.index, "n={n} E={ext} T={h}");
                    assert!(dp.confirmed);
                }
            }
        }
    }

    #[test]
    fn preconditions_enforced() {
        assert!(matches!(
            stab_exact_in_arborescence(&fixtures::non_monotone(), Horizon::Unbounded),
            Err(StabilityError::Precondition(_))
        ));
    }
}
