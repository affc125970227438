//! Two-step deaths as a covering problem, and its greedy solver.
//!
//! With `T = 2` a node `u` dies exactly when the loss it takes from its own
//! shock plus what its failed borrowers pass on at step one exceeds `c_u`.
//! Each shocked node `v` contributes a fixed amount `δ_{v,u}` to every such
//! constraint, which turns the problem into a covering integer program.

use crate::amount::Amount;
use crate::cascade::{mask_of, Horizon, ShockSet, Simulator};
use crate::network::NetworkSpec;
use crate::stability::{StabilityError, StabilityMethod, StabilityResult};

#[derive(Clone, Debug, PartialEq)]
pub struct CoverInstance {
    /// Non-zero coefficients `(u, δ_{v,u})` of each row `v`, sorted by `u`.
    rows: Vec<Vec<(usize, Amount)>>,
    /// `c_u`.
    thresholds: Vec<Amount>,
    tol: f64,
}

impl CoverInstance {
    pub fn n(&self) -> usize {
        self.thresholds.len()
    }

    pub fn row(&self, v: usize) -> &[(usize, Amount)] {
        &self.rows[v]
    }

    pub fn thresholds(&self) -> &[Amount] {
        &self.thresholds
    }

    pub fn delta(&self, v: usize, u: usize) -> Amount {
        self.rows[v]
            .iter()
            .find(|(w, _)| *w == u)
            .map(|(_, d)| d.clone())
            .unwrap_or_else(|| self.thresholds[u].zero_like())
    }

    /// Nodes whose shock contributes to some constraint.
    pub fn candidates(&self) -> Vec<usize> {
        (0..self.n()).filter(|&v| !self.rows[v].is_empty()).collect()
    }

    /// Coverage `Σ_v δ_{v,u} x_v` of every constraint.
    pub fn coverage(&self, chosen: &[usize]) -> Vec<Amount> {
        let mut cov: Vec<Amount> = self.thresholds.iter().map(Amount::zero_like).collect();
        for &v in chosen {
            for (u, d) in &self.rows[v] {
                cov[*u] += d;
            }
        }
        cov
    }

    /// Every constraint `Σ_v δ_{v,u} x_v > c_u` holds.
    pub fn is_cover(&self, chosen: &[usize]) -> bool {
        self.coverage(chosen)
            .iter()
            .zip(&self.thresholds)
            .all(|(c, t)| c.exceeds(t, self.tol))
    }

    /// Smallest positive coefficient or threshold.
    pub fn zeta(&self) -> Option<f64> {
        self.rows
            .iter()
            .flatten()
            .map(|(_, d)| d.to_f64())
            .chain(self.thresholds.iter().map(Amount::to_f64))
            .filter(|x| *x > 0.0)
            .min_by(f64::total_cmp)
    }

    /// A-priori greedy guarantee `2 + ln n + ln(max_v Σ_u δ_{v,u} / ζ)`.
    pub fn approximation_ratio(&self) -> f64 {
        let Some(zeta) = self.zeta() else {
            return 2.0 + (self.n() as f64).ln();
        };
        let widest = self
            .rows
            .iter()
            .map(|r| r.iter().map(|(_, d)| d.to_f64()).sum::<f64>())
            .fold(0.0, f64::max);
        let mut ratio = 2.0 + (self.n() as f64).ln();
        if widest > 0.0 {
            ratio += (widest / zeta).ln();
        }
        ratio
    }
}

/// Covering coefficients of `spec`:
/// `δ_{u,u} = max(0, Φ e_u)`, and for a loan `(u, v)` with `Φ e_v > c_v`,
/// `δ_{v,u} = min(Φ e_v − c_v, b_v) / din(v)`.
pub fn build_cover_instance(spec: &NetworkSpec) -> CoverInstance {
    let backend = spec.backend();
    let tol = backend.tolerance();
    let sheets = spec.balance_sheets();
    let phi = backend.amount(spec.phi());
    let creditors = spec.creditors();
    let n = spec.n();
    let mut rows = Vec::with_capacity(n);
    for v in 0..n {
        let hit = &phi * &sheets.external_asset[v];
        let mut row = Vec::new();
        if hit.is_positive(tol) {
            row.push((v, hit.clone()));
        }
        let excess = &hit - &sheets.equity[v];
        if excess.is_positive(tol) && !creditors[v].is_empty() {
            let per = excess.min(sheets.borrowing[v].clone()) / backend.count(creditors[v].len());
            if per.is_positive(tol) {
                for &u in &creditors[v] {
                    row.push((u, per.clone()));
                }
            }
        }
        row.sort_by_key(|(u, _)| *u);
        rows.push(row);
    }
    CoverInstance {
        rows,
        thresholds: sheets.equity,
        tol,
    }
}

/// Greedy covering for `T = 2`.
///
/// Each round picks the node with the largest residual gain
/// `Σ_u min(δ_{v,u}, c_u − covered_u)` over unsatisfied `u`, then the most
/// newly satisfied constraints, then the lowest index.
pub fn greedy_cover(instance: &CoverInstance) -> Option<Vec<usize>> {
    let candidates = instance.candidates();
    if !instance.is_cover(&candidates) {
        return None;
    }
    let tol = instance.tol;
    let thresholds = &instance.thresholds;
    let mut covered = instance.coverage(&[]);
    let satisfied = |cov: &Amount, u: usize| cov.exceeds(&thresholds[u], tol);
    let mut chosen: Vec<usize> = Vec::new();
    let mut taken = vec![false; instance.n()];
    while (0..instance.n()).any(|u| !satisfied(&covered[u], u)) {
        let mut best: Option<(Amount, usize, usize)> = None;
        for &v in &candidates {
            if taken[v] {
                continue;
            }
            let mut gain = thresholds[0].zero_like();
            let mut newly = 0;
            for (u, d) in instance.row(v) {
                if satisfied(&covered[*u], *u) {
                    continue;
                }
                let residual = &thresholds[*u] - &covered[*u];
                gain += &d.clone().min(residual);
                if satisfied(&(&covered[*u] + d), *u) {
                    newly += 1;
                }
            }
            if newly == 0 && !gain.is_positive(tol) {
                continue;
            }
            let better = match &best {
                None => true,
                Some((g, k, _)) => gain.exceeds(g, tol) || (!g.exceeds(&gain, tol) && newly > *k),
            };
            if better {
                best = Some((gain, newly, v));
            }
        }
        let (_, _, v) = best?;
        taken[v] = true;
        chosen.push(v);
        for (u, d) in instance.row(v) {
            covered[*u] += d;
        }
    }
    chosen.sort_unstable();
    Some(chosen)
}

/// Approximate stability index for `T = 2` via [`greedy_cover`], confirmed
/// by simulation.
pub fn stab_greedy_t2(spec: &NetworkSpec) -> Result<StabilityResult, StabilityError> {
    let instance = build_cover_instance(spec);
    let horizon = Horizon::Steps(2);
    let shock = match greedy_cover(&instance) {
        Some(set) if !set.is_empty() => Some(ShockSet::from_indices(spec.n(), set)?),
        _ => None,
    };
    if let Some(s) = &shock {
        let sim = Simulator::new(spec);
        if !sim.kills(&mask_of(spec.n(), s.indices()), horizon)? {
            return Err(StabilityError::Precondition(
                "greedy cover does not kill the network when simulated".into(),
            ));
        }
    }
    StabilityResult::finish(spec, StabilityMethod::GreedyT2, horizon, shock)
}
