//! Discrete-time synchronous shock propagation.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::amount::Amount;
use crate::network::{BalanceSheets, NetworkSpec};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CascadeError {
    #[error("horizon must be at least 1")]
    ZeroHorizon,
    #[error("shock set must be non-empty")]
    EmptyShock,
    #[error("unknown node {0:?}")]
    UnknownNode(String),
    #[error("node index {0} out of range")]
    IndexOutOfRange(usize),
}

/// A non-empty set of shocked nodes, kept sorted by index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ShockSet(Vec<usize>);

impl ShockSet {
    pub fn from_indices(
        n: usize,
        indices: impl IntoIterator<Item = usize>,
    ) -> Result<Self, CascadeError> {
        let set: BTreeSet<usize> = indices.into_iter().collect();
        if let Some(&bad) = set.iter().find(|&&i| i >= n) {
            return Err(CascadeError::IndexOutOfRange(bad));
        }
        if set.is_empty() {
            return Err(CascadeError::EmptyShock);
        }
        Ok(ShockSet(set.into_iter().collect()))
    }

    pub fn from_ids<S: AsRef<str>>(
        spec: &NetworkSpec,
        ids: impl IntoIterator<Item = S>,
    ) -> Result<Self, CascadeError> {
        let idx = ids
            .into_iter()
            .map(|id| {
                spec.node_index(id.as_ref())
                    .ok_or_else(|| CascadeError::UnknownNode(id.as_ref().to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_indices(spec.n(), idx)
    }

    /// Every node of `spec`.
    pub fn all(spec: &NetworkSpec) -> Self {
        ShockSet((0..spec.n()).collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn ids(&self, spec: &NetworkSpec) -> Vec<String> {
        self.0.iter().map(|&v| spec.node_id(v).to_string()).collect()
    }
}

/// Propagation deadline `T`. Serialized as `"3"` or `"inf"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Horizon {
    Steps(usize),
    Unbounded,
}

impl Horizon {
    /// The finite step budget to run on `spec`.
    pub fn resolve(self, bound: usize) -> Result<usize, CascadeError> {
        match self {
            Horizon::Steps(0) => Err(CascadeError::ZeroHorizon),
            Horizon::Steps(t) => Ok(t.min(bound + 1)),
            Horizon::Unbounded => Ok(bound + 1),
        }
    }
}

impl fmt::Display for Horizon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Horizon::Steps(t) => write!(f, "{t}"),
            Horizon::Unbounded => f.write_str("inf"),
        }
    }
}

impl FromStr for Horizon {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("unbounded") {
            return Ok(Horizon::Unbounded);
        }
        match s.parse::<usize>() {
            Ok(0) => Err("horizon must be at least 1".into()),
            Ok(t) => Ok(Horizon::Steps(t)),
            Err(_) => Err(format!("invalid horizon {s:?}")),
        }
    }
}

impl From<Horizon> for String {
    fn from(h: Horizon) -> String {
        h.to_string()
    }
}

impl TryFrom<String> for Horizon {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// Loss charged by one failed node to each of its alive creditors.
#[derive(Clone, Debug, PartialEq)]
pub struct Transmission {
    pub debtor: usize,
    pub creditors: Vec<usize>,
    pub per_creditor: Amount,
}

/// One propagation step that produced failures.
#[derive(Clone, Debug, PartialEq)]
pub struct Step {
    pub t: usize,
    pub failed: Vec<usize>,
    /// `c_v(t)` for nodes alive at the start of the step.
    pub equity_before: Vec<Option<Amount>>,
    /// `c_v(t+1)` for nodes still alive after the step.
    pub equity_after: Vec<Option<Amount>>,
    pub transmissions: Vec<Transmission>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CascadeTrace {
    pub horizon: Horizon,
    pub shock: ShockSet,
    pub steps: Vec<Step>,
    pub survivors: Vec<usize>,
    pub dead: bool,
}

impl CascadeTrace {
    /// Union of every newly-failed set.
    pub fn failed(&self) -> BTreeSet<usize> {
        self.steps.iter().flat_map(|s| s.failed.iter().copied()).collect()
    }

    /// Failure step of every node, `None` for survivors.
    pub fn failure_steps(&self, n: usize) -> Vec<Option<usize>> {
        let mut out = vec![None; n];
        for s in &self.steps {
            for &v in &s.failed {
                out[v] = Some(s.t);
            }
        }
        out
    }

    pub fn last_step(&self) -> Option<usize> {
        self.steps.last().map(|s| s.t)
    }
}

/// Precomputed adjacency and balance sheets for repeated cascades on one
/// network.
#[derive(Clone, Debug)]
pub struct Simulator<'a> {
    spec: &'a NetworkSpec,
    sheets: BalanceSheets,
    shocked_equity: Vec<Amount>,
    creditors: Vec<Vec<usize>>,
    debtors: Vec<Vec<usize>>,
    in_degree: Vec<usize>,
    tol: f64,
    bound: usize,
}

impl<'a> Simulator<'a> {
    pub fn new(spec: &'a NetworkSpec) -> Self {
        let sheets = spec.balance_sheets();
        let phi = spec.backend().amount(spec.phi());
        let shocked_equity = sheets
            .equity
            .iter()
            .zip(&sheets.external_asset)
            .map(|(c, e)| c - &(&phi * e))
            .collect();
        Simulator {
            spec,
            shocked_equity,
            creditors: spec.creditors(),
            debtors: spec.debtors(),
            in_degree: spec.in_degrees(),
            tol: spec.backend().tolerance(),
            bound: horizon_bound(spec),
            sheets,
        }
    }

    pub fn spec(&self) -> &NetworkSpec {
        self.spec
    }

    pub fn sheets(&self) -> &BalanceSheets {
        &self.sheets
    }

    pub fn horizon_bound(&self) -> usize {
        self.bound
    }

    pub fn n(&self) -> usize {
        self.spec.n()
    }

    /// Failure step of every node when `shocked` (a membership mask) is hit.
    pub fn fail_steps(&self, shocked: &[bool], horizon: Horizon) -> Result<Vec<Option<usize>>, CascadeError> {
        let t_max = horizon.resolve(self.bound)?;
        let mut out = vec![None; self.n()];
        self.run(shocked, t_max, false, |step, _, _, _| {
            for &v in &step.failed {
                out[v] = Some(step.t);
            }
        });
        Ok(out)
    }

    /// Number of failed nodes.
    pub fn failed_count(&self, shocked: &[bool], horizon: Horizon) -> Result<usize, CascadeError> {
        Ok(self
            .fail_steps(shocked, horizon)?
            .iter()
            .filter(|s| s.is_some())
            .count())
    }

    pub fn kills(&self, shocked: &[bool], horizon: Horizon) -> Result<bool, CascadeError> {
        Ok(self.failed_count(shocked, horizon)? == self.n())
    }

    pub fn propagate(&self, shock: &ShockSet, horizon: Horizon) -> Result<CascadeTrace, CascadeError> {
        let t_max = horizon.resolve(self.bound)?;
        let mask = mask_of(self.n(), shock.indices());
        let mut steps = Vec::new();
        let alive = self.run(&mask, t_max, true, |step, before, after, tx| {
            steps.push(Step {
                t: step.t,
                failed: step.failed.clone(),
                equity_before: before.to_vec(),
                equity_after: after.to_vec(),
                transmissions: tx.to_vec(),
            });
        });
        let survivors: Vec<usize> = (0..self.n()).filter(|&v| alive[v]).collect();
        Ok(CascadeTrace {
            horizon,
            shock: shock.clone(),
            steps,
            dead: survivors.is_empty(),
            survivors,
        })
    }

    /// Runs the loop, calling `on_step` after every step with failures.
    /// Returns the final alive mask.
    fn run<F>(&self, shocked: &[bool], t_max: usize, record: bool, mut on_step: F) -> Vec<bool>
    where
        F: FnMut(&StepFailures, &[Option<Amount>], &[Option<Amount>], &[Transmission]),
    {
        let n = self.n();
        let mut equity: Vec<Amount> = (0..n)
            .map(|v| {
                if shocked[v] {
                    self.shocked_equity[v].clone()
                } else {
                    self.sheets.equity[v].clone()
                }
            })
            .collect();
        let mut alive = vec![true; n];
        let mut alive_count = n;
        let mut din = self.in_degree.clone();
        let mut t = 1;
        while t <= t_max && alive_count > 0 {
            let failed: Vec<usize> = (0..n)
                .filter(|&v| alive[v] && equity[v].is_negative(self.tol))
                .collect();
            if failed.is_empty() {
                break;
            }
            let before: Vec<Option<Amount>> = if record {
                (0..n).map(|v| alive[v].then(|| equity[v].clone())).collect()
            } else {
                Vec::new()
            };
            let mut next = equity.clone();
            let mut tx = Vec::new();
            for &v in &failed {
                if din[v] == 0 {
                    continue;
                }
                let loss = equity[v].abs().min(self.sheets.borrowing[v].clone());
                let share = loss / self.spec.backend().count(din[v]);
                let creditors: Vec<usize> =
                    self.creditors[v].iter().copied().filter(|&u| alive[u]).collect();
                for &u in &creditors {
                    next[u] -= &share;
                }
                if record {
                    tx.push(Transmission {
                        debtor: v,
                        creditors,
                        per_creditor: share,
                    });
                }
            }
            for &v in &failed {
                alive[v] = false;
                alive_count -= 1;
                for &w in &self.debtors[v] {
                    din[w] -= 1;
                }
            }
            equity = next;
            let after: Vec<Option<Amount>> = if record {
                (0..n).map(|v| alive[v].then(|| equity[v].clone())).collect()
            } else {
                Vec::new()
            };
            on_step(&StepFailures { t, failed }, &before, &after, &tx);
            t += 1;
        }
        alive
    }
}

struct StepFailures {
    t: usize,
    failed: Vec<usize>,
}

pub(crate) fn mask_of(n: usize, members: &[usize]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &v in members {
        m[v] = true;
    }
    m
}

pub fn propagate(spec: &NetworkSpec, shock: &ShockSet, horizon: Horizon) -> Result<CascadeTrace, CascadeError> {
    Simulator::new(spec).propagate(shock, horizon)
}

/// Every node that fails within the horizon.
pub fn infl(spec: &NetworkSpec, shock: &ShockSet, horizon: Horizon) -> Result<BTreeSet<usize>, CascadeError> {
    Ok(propagate(spec, shock, horizon)?.failed())
}

pub fn is_dead(trace: &CascadeTrace) -> bool {
    trace.survivors.is_empty()
}

/// A topological order of the nodes, or `None` if there is a directed cycle.
pub fn topological_order(spec: &NetworkSpec) -> Option<Vec<usize>> {
    let n = spec.n();
    let debtors = spec.debtors();
    let mut indeg = spec.in_degrees();
    let mut order: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for &w in &debtors[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                order.push(w);
            }
        }
    }
    (order.len() == n).then_some(order)
}

pub fn is_acyclic(spec: &NetworkSpec) -> bool {
    topological_order(spec).is_some()
}

/// Step after which no new failure can occur: the longest directed path
/// (in edges) for a DAG, `n − 1` otherwise.
pub fn horizon_bound(spec: &NetworkSpec) -> usize {
    let Some(order) = topological_order(spec) else {
        return spec.n().saturating_sub(1);
    };
    let debtors = spec.debtors();
    let mut depth = vec![0usize; spec.n()];
    for &v in &order {
        for &w in &debtors[v] {
            depth[w] = depth[w].max(depth[v] + 1);
        }
    }
    depth.into_iter().max().unwrap_or(0)
}
