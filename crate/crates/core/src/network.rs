//! Banking networks, their balance sheets and structural transformations.
//!
//! An edge `(u, v)` means bank `u` lends to bank `v`: it is an interbank
//! asset of `u` and an interbank liability of `v`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::amount::{format_rational, Amount, Backend};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Homogeneous,
    Heterogeneous,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Homogeneous => "homogeneous",
            Mode::Heterogeneous => "heterogeneous",
        })
    }
}

/// A directed lending relation between two node indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
}

/// One violated constraint of a [`NetworkSpec`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    GammaOutOfRange,
    PhiOutOfRange,
    PhiNotAboveGamma,
    NegativeExternalTotal,
    NegativeInterbankTotal,
    SelfLoop { node: String },
    ParallelEdge { src: String, dst: String },
    NonPositiveWeight { src: String, dst: String },
    WeightSumMismatch { sum: String, expected: String },
    NegativeAlpha { node: String },
    AlphaSumNotOne { sum: String },
    NonUniformWeight { src: String, dst: String },
    NonUniformAlpha { node: String },
    InterbankWithoutEdges,
    LengthMismatch { what: &'static str },
    DuplicateNode { node: String },
    NoNodes,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::GammaOutOfRange => write!(f, "gamma must lie in (0,1)"),
            Violation::PhiOutOfRange => write!(f, "phi must lie in (0,1]"),
            Violation::PhiNotAboveGamma => write!(f, "phi must exceed gamma"),
            Violation::NegativeExternalTotal => write!(f, "external total must be non-negative"),
            Violation::NegativeInterbankTotal => write!(f, "interbank total must be non-negative"),
            Violation::SelfLoop { node } => write!(f, "self-loop on node {node}"),
            Violation::ParallelEdge { src, dst } => write!(f, "parallel edge {src}->{dst}"),
            Violation::NonPositiveWeight { src, dst } => {
                write!(f, "weight of edge {src}->{dst} must be positive")
            }
            Violation::WeightSumMismatch { sum, expected } => {
                write!(f, "edge weights sum to {sum}, expected interbank total {expected}")
            }
            Violation::NegativeAlpha { node } => write!(f, "alpha of node {node} is negative"),
            Violation::AlphaSumNotOne { sum } => write!(f, "alpha shares sum to {sum}, expected 1"),
            Violation::NonUniformWeight { src, dst } => {
                write!(f, "homogeneous network: weight of {src}->{dst} differs from I/m")
            }
            Violation::NonUniformAlpha { node } => {
                write!(f, "homogeneous network: alpha of {node} differs from 1/n")
            }
            Violation::InterbankWithoutEdges => {
                write!(f, "interbank total must be zero when there are no edges")
            }
            Violation::LengthMismatch { what } => write!(f, "{what} length does not match"),
            Violation::DuplicateNode { node } => write!(f, "duplicate node id {node}"),
            Violation::NoNodes => write!(f, "network has no nodes"),
        }
    }
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid network: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("unknown node {0:?}")]
    UnknownNode(String),
    #[error("operation requires a homogeneous network")]
    NotHomogeneous,
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

/// The full parameter tuple of a (homogeneous or heterogeneous) network.
///
/// Parameters are stored exactly; `backend` decides how derived quantities
/// are computed. Node indices follow input order.
#[derive(Clone, Debug, PartialEq)]
pub struct NetworkSpec {
    nodes: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<Edge>,
    gamma: BigRational,
    phi: BigRational,
    external_total: BigRational,
    interbank_total: BigRational,
    weights: Vec<BigRational>,
    alpha: Vec<BigRational>,
    mode: Mode,
    backend: Backend,
}

/// Per-node balance sheets.
#[derive(Clone, Debug, PartialEq)]
pub struct BalanceSheets {
    /// ι_v: total lent to other banks.
    pub interbank_asset: Vec<Amount>,
    /// b_v: total borrowed from other banks.
    pub borrowing: Vec<Amount>,
    /// e_v = (b_v − ι_v) + α_v E.
    pub external_asset: Vec<Amount>,
    /// a_v = b_v + α_v E.
    pub total_asset: Vec<Amount>,
    /// c_v = γ a_v.
    pub equity: Vec<Amount>,
}

impl BalanceSheets {
    pub fn len(&self) -> usize {
        self.equity.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equity.is_empty()
    }
}

fn rat(n: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl NetworkSpec {
    /// Assemble a spec from raw parts without validating it.
    ///
    /// Node references in `edges` are resolved against `nodes`; every other
    /// constraint is left to [`NetworkSpec::validate`].
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        nodes: Vec<String>,
        edges: Vec<(String, String)>,
        gamma: BigRational,
        phi: BigRational,
        external_total: BigRational,
        interbank_total: BigRational,
        weights: Vec<BigRational>,
        alpha: Vec<BigRational>,
        mode: Mode,
    ) -> Result<Self, ModelError> {
        let mut index = HashMap::with_capacity(nodes.len());
        for (i, id) in nodes.iter().enumerate() {
            index.entry(id.clone()).or_insert(i);
        }
        let edges = edges
            .into_iter()
            .map(|(s, d)| {
                let src = *index.get(&s).ok_or_else(|| ModelError::UnknownNode(s.clone()))?;
                let dst = *index.get(&d).ok_or_else(|| ModelError::UnknownNode(d.clone()))?;
                Ok(Edge { src, dst })
            })
            .collect::<Result<Vec<_>, ModelError>>()?;
        Ok(NetworkSpec {
            nodes,
            index,
            edges,
            gamma,
            phi,
            external_total,
            interbank_total,
            weights,
            alpha,
            mode,
            backend: Backend::Exact,
        })
    }

    /// Homogeneous network `⟨G, γ, I, E, Φ⟩`: every edge carries `I/m`, every
    /// node an equal share of `E`.
    pub fn homogeneous<S: Into<String>>(
        nodes: impl IntoIterator<Item = S>,
        edges: impl IntoIterator<Item = (S, S)>,
        gamma: BigRational,
        phi: BigRational,
        interbank_total: BigRational,
        external_total: BigRational,
    ) -> Result<Self, ModelError> {
        let nodes: Vec<String> = nodes.into_iter().map(Into::into).collect();
        let edges: Vec<(String, String)> =
            edges.into_iter().map(|(a, b)| (a.into(), b.into())).collect();
        let m = edges.len();
        let n = nodes.len();
        let w = if m == 0 {
            BigRational::zero()
        } else {
            &interbank_total / rat(m)
        };
        let a = if n == 0 {
            BigRational::zero()
        } else {
            BigRational::one() / rat(n)
        };
        let spec = Self::from_parts(
            nodes,
            edges,
            gamma,
            phi,
            external_total,
            interbank_total,
            vec![w; m],
            vec![a; n],
            Mode::Homogeneous,
        )?;
        spec.validated()
    }

    /// Heterogeneous network `⟨G, γ, I, E, Φ, w, α⟩`; `I = Σ w(e)`.
    pub fn heterogeneous<S: Into<String>>(
        nodes: impl IntoIterator<Item = (S, BigRational)>,
        edges: impl IntoIterator<Item = (S, S, BigRational)>,
        gamma: BigRational,
        phi: BigRational,
        external_total: BigRational,
    ) -> Result<Self, ModelError> {
        let (nodes, alpha): (Vec<String>, Vec<BigRational>) =
            nodes.into_iter().map(|(id, a)| (id.into(), a)).unzip();
        let mut pairs = Vec::new();
        let mut weights = Vec::new();
        for (s, d, w) in edges {
            pairs.push((s.into(), d.into()));
            weights.push(w);
        }
        let interbank_total = weights.iter().fold(BigRational::zero(), |acc, w| acc + w);
        let spec = Self::from_parts(
            nodes,
            pairs,
            gamma,
            phi,
            external_total,
            interbank_total,
            weights,
            alpha,
            Mode::Heterogeneous,
        )?;
        spec.validated()
    }

    pub fn validated(self) -> Result<Self, ModelError> {
        self.validate().map_err(ModelError::Invalid)?;
        Ok(self)
    }

    pub fn with_backend(mut self, backend: Backend) -> Self {
        self.backend = backend;
        self
    }

    pub fn n(&self) -> usize {
        self.nodes.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn node_id(&self, i: usize) -> &str {
        &self.nodes[i]
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn gamma(&self) -> &BigRational {
        &self.gamma
    }

    pub fn phi(&self) -> &BigRational {
        &self.phi
    }

    pub fn external_total(&self) -> &BigRational {
        &self.external_total
    }

    pub fn interbank_total(&self) -> &BigRational {
        &self.interbank_total
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    pub fn alpha(&self) -> &[BigRational] {
        &self.alpha
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    /// For each node, the creditors lending to it (sources of its in-edges).
    pub fn creditors(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n()];
        for e in &self.edges {
            out[e.dst].push(e.src);
        }
        out
    }

    /// For each node, the debtors it lends to (targets of its out-edges).
    pub fn debtors(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n()];
        for e in &self.edges {
            out[e.src].push(e.dst);
        }
        out
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n()];
        for e in &self.edges {
            d[e.dst] += 1;
        }
        d
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n()];
        for e in &self.edges {
            d[e.src] += 1;
        }
        d
    }

    /// Every violated invariant, or `Ok(())`.
    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let mut out = Vec::new();
        let zero = BigRational::zero();
        let one = BigRational::one();
        if self.nodes.is_empty() {
            out.push(Violation::NoNodes);
        }
        let mut seen = BTreeSet::new();
        for id in &self.nodes {
            if !seen.insert(id.as_str()) {
                out.push(Violation::DuplicateNode { node: id.clone() });
            }
        }
        if !(self.gamma > zero && self.gamma < one) {
            out.push(Violation::GammaOutOfRange);
        }
        if !(self.phi > zero && self.phi <= one) {
            out.push(Violation::PhiOutOfRange);
        }
        if self.phi <= self.gamma {
            out.push(Violation::PhiNotAboveGamma);
        }
        if self.external_total.is_negative() {
            out.push(Violation::NegativeExternalTotal);
        }
        if self.interbank_total.is_negative() {
            out.push(Violation::NegativeInterbankTotal);
        }
        if self.weights.len() != self.edges.len() {
            out.push(Violation::LengthMismatch { what: "edge weight" });
        }
        if self.alpha.len() != self.nodes.len() {
            out.push(Violation::LengthMismatch { what: "alpha" });
        }
        if !out.is_empty() && out.iter().any(|v| matches!(v, Violation::LengthMismatch { .. })) {
            return Err(out);
        }

        let mut pairs = BTreeSet::new();
        for (e, w) in self.edges.iter().zip(&self.weights) {
            let (src, dst) = (self.nodes[e.src].clone(), self.nodes[e.dst].clone());
            if e.src == e.dst {
                out.push(Violation::SelfLoop { node: src.clone() });
            } else if !pairs.insert((e.src, e.dst)) {
                out.push(Violation::ParallelEdge {
                    src: src.clone(),
                    dst: dst.clone(),
                });
            }
            if !w.is_positive() {
                out.push(Violation::NonPositiveWeight { src, dst });
            }
        }
        if self.edges.is_empty() {
            if !self.interbank_total.is_zero() {
                out.push(Violation::InterbankWithoutEdges);
            }
        } else {
            let sum = self.weights.iter().fold(BigRational::zero(), |acc, w| acc + w);
            if sum != self.interbank_total {
                out.push(Violation::WeightSumMismatch {
                    sum: format_rational(&sum),
                    expected: format_rational(&self.interbank_total),
                });
            }
        }
        for (id, a) in self.nodes.iter().zip(&self.alpha) {
            if a.is_negative() {
                out.push(Violation::NegativeAlpha { node: id.clone() });
            }
        }
        let alpha_sum = self.alpha.iter().fold(BigRational::zero(), |acc, a| acc + a);
        if !self.nodes.is_empty() && alpha_sum != one {
            out.push(Violation::AlphaSumNotOne {
                sum: format_rational(&alpha_sum),
            });
        }
        if self.mode == Mode::Homogeneous {
            if !self.edges.is_empty() {
                let w = &self.interbank_total / rat(self.m());
                for (e, x) in self.edges.iter().zip(&self.weights) {
                    if *x != w {
                        out.push(Violation::NonUniformWeight {
                            src: self.nodes[e.src].clone(),
                            dst: self.nodes[e.dst].clone(),
                        });
                    }
                }
            }
            if !self.nodes.is_empty() {
                let a = BigRational::one() / rat(self.n());
                for (id, x) in self.nodes.iter().zip(&self.alpha) {
                    if *x != a {
                        out.push(Violation::NonUniformAlpha { node: id.clone() });
                    }
                }
            }
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    /// Exact balance sheets, independent of the backend.
    pub fn exact_balance_sheets(&self) -> ExactSheets {
        let n = self.n();
        let mut iota = vec![BigRational::zero(); n];
        let mut b = vec![BigRational::zero(); n];
        for (e, w) in self.edges.iter().zip(&self.weights) {
            iota[e.src] += w;
            b[e.dst] += w;
        }
        let share: Vec<BigRational> = self.alpha.iter().map(|a| a * &self.external_total).collect();
        let external: Vec<BigRational> = (0..n).map(|v| &b[v] - &iota[v] + &share[v]).collect();
        let total: Vec<BigRational> = (0..n).map(|v| &b[v] + &share[v]).collect();
        let equity: Vec<BigRational> = total.iter().map(|a| a * &self.gamma).collect();
        ExactSheets {
            interbank_asset: iota,
            borrowing: b,
            external_asset: external,
            total_asset: total,
            equity,
        }
    }

    /// Balance sheets of every node under the spec's backend.
    pub fn balance_sheets(&self) -> BalanceSheets {
        let exact = self.exact_balance_sheets();
        let lift = |xs: &[BigRational]| xs.iter().map(|x| self.backend.amount(x)).collect();
        BalanceSheets {
            interbank_asset: lift(&exact.interbank_asset),
            borrowing: lift(&exact.borrowing),
            external_asset: lift(&exact.external_asset),
            total_asset: lift(&exact.total_asset),
            equity: lift(&exact.equity),
        }
    }

    /// The same network expressed with explicit per-edge weights and
    /// per-node shares.
    pub fn to_heterogeneous(&self) -> NetworkSpec {
        let mut spec = self.clone();
        spec.mode = Mode::Heterogeneous;
        spec
    }

    /// Rescale a homogeneous network so that every edge weight is one.
    ///
    /// Interbank totals, borrowing and the external total are divided by
    /// `w = I/m`; every equity scales by the same factor, so failure traces
    /// are unchanged.
    pub fn normalize_homogeneous(&self) -> Result<NetworkSpec, ModelError> {
        if self.mode != Mode::Homogeneous {
            return Err(ModelError::NotHomogeneous);
        }
        if self.edges.is_empty() {
            return Ok(self.clone());
        }
        let w = &self.interbank_total / rat(self.m());
        if w.is_one() {
            return Ok(self.clone());
        }
        let mut spec = self.clone();
        spec.interbank_total = rat(self.m());
        spec.external_total = &self.external_total / &w;
        spec.weights = vec![BigRational::one(); self.m()];
        Ok(spec)
    }

    /// Split into weakly connected components.
    ///
    /// Each component keeps its induced edges, γ, Φ and backend; its external
    /// total is the component's share `(Σ α_v) E` and its shares are rescaled
    /// to sum to one, so every node keeps its balance sheet.
    pub fn weakly_connected_components(&self) -> Vec<NetworkSpec> {
        let n = self.n();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.src), find(&mut parent, e.dst));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut slot: HashMap<usize, usize> = HashMap::new();
        for v in 0..n {
            let r = find(&mut parent, v);
            let k = *slot.entry(r).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[k].push(v);
        }
        if groups.len() <= 1 {
            return vec![self.clone()];
        }
        groups.iter().map(|members| self.induced(members)).collect()
    }

    fn induced(&self, members: &[usize]) -> NetworkSpec {
        let local: HashMap<usize, usize> =
            members.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let nodes: Vec<String> = members.iter().map(|&v| self.nodes[v].clone()).collect();
        let mut edges = Vec::new();
        let mut weights = Vec::new();
        for (e, w) in self.edges.iter().zip(&self.weights) {
            if local.contains_key(&e.src) && local.contains_key(&e.dst) {
                edges.push(Edge {
                    src: local[&e.src],
                    dst: local[&e.dst],
                });
                weights.push(w.clone());
            }
        }
        let share: BigRational = members.iter().fold(BigRational::zero(), |acc, &v| acc + &self.alpha[v]);
        let alpha: Vec<BigRational> = if share.is_zero() {
            vec![BigRational::one() / rat(members.len()); members.len()]
        } else {
            members.iter().map(|&v| &self.alpha[v] / &share).collect()
        };
        let interbank_total = weights.iter().fold(BigRational::zero(), |acc, w| acc + w);
        let index = nodes.iter().enumerate().map(|(i, id)| (id.clone(), i)).collect();
        NetworkSpec {
            nodes,
            index,
            edges,
            gamma: self.gamma.clone(),
            phi: self.phi.clone(),
            external_total: &self.external_total * &share,
            interbank_total,
            weights,
            alpha,
            mode: self.mode,
            backend: self.backend,
        }
    }
}

/// Exact-rational balance sheets (see [`BalanceSheets`]).
#[derive(Clone, Debug, PartialEq)]
pub struct ExactSheets {
    pub interbank_asset: Vec<BigRational>,
    pub borrowing: Vec<BigRational>,
    pub external_asset: Vec<BigRational>,
    pub total_asset: Vec<BigRational>,
    pub equity: Vec<BigRational>,
}

/// Balance sheets of `spec` (free-function form).
pub fn derive_balance_sheets(spec: &NetworkSpec) -> BalanceSheets {
    spec.balance_sheets()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amount::{dec, ratio};
    use crate::fixtures;

    #[test]
    fn five_banks_uniform_sheets_are_exact() {
        let spec = fixtures::five_banks_uniform();
        let s = spec.exact_balance_sheets();
        let d = |xs: &[&str]| xs.iter().map(|x| dec(x)).collect::<Vec<_>>();
        assert_eq!(s.interbank_asset, d(&["1", "1", "2", "1", "2"]));
        assert_eq!(s.borrowing, d(&["2", "1", "1", "3", "0"]));
        assert_eq!(s.external_asset, d(&["3.8", "2.8", "1.8", "4.8", "0.8"]));
        assert_eq!(s.total_asset, d(&["4.8", "3.8", "3.8", "5.8", "2.8"]));
        assert_eq!(s.equity, d(&["0.48", "0.38", "0.38", "0.58", "0.28"]));
    }

    #[test]
    fn single_isolated_node() {
        let spec = NetworkSpec::homogeneous(
            ["v"],
            Vec::<(&str, &str)>::new(),
            dec("0.2"),
            dec("0.5"),
            ratio(0, 1),
            ratio(10, 1),
        )
        .unwrap();
        let s = spec.exact_balance_sheets();
        assert_eq!(s.interbank_asset[0], ratio(0, 1));
        assert_eq!(s.borrowing[0], ratio(0, 1));
        assert_eq!(s.external_asset[0], ratio(10, 1));
        assert_eq!(s.total_asset[0], ratio(10, 1));
        assert_eq!(s.equity[0], ratio(2, 1));
    }

    #[test]
    fn heterogeneous_encoding_matches_homogeneous() {
        let spec = fixtures::five_banks_uniform();
        assert_eq!(
            spec.balance_sheets(),
            spec.to_heterogeneous().balance_sheets()
        );
        assert!(spec.to_heterogeneous().validate().is_ok());
    }

    #[test]
    fn conservation_of_interbank_flows() {
        let spec = fixtures::five_banks_skewed();
        let s = spec.exact_balance_sheets();
        let sum = |xs: &[BigRational]| xs.iter().fold(BigRational::zero(), |a, x| a + x);
        assert_eq!(sum(&s.interbank_asset), *spec.interbank_total());
        assert_eq!(sum(&s.borrowing), *spec.interbank_total());
        assert_eq!(sum(&s.external_asset), *spec.external_total());
        assert_eq!(
            sum(&s.total_asset),
            spec.external_total() + spec.interbank_total()
        );
    }

    #[test]
    fn phi_equal_to_gamma_is_rejected() {
        let err = NetworkSpec::homogeneous(
            ["a", "b"],
            [("a", "b")],
            dec("0.1"),
            dec("0.1"),
            ratio(1, 1),
            ratio(2, 1),
        )
        .unwrap_err();
        match err {
            ModelError::Invalid(v) => assert!(v.contains(&Violation::PhiNotAboveGamma)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn alpha_sum_must_be_one() {
        let err = NetworkSpec::heterogeneous(
            [("a", dec("0.5")), ("b", dec("0.49"))],
            [("a", "b", ratio(1, 1))],
            dec("0.1"),
            dec("0.4"),
            ratio(5, 1),
        )
        .unwrap_err();
        let ModelError::Invalid(v) = err else { panic!() };
        assert_eq!(v, vec![Violation::AlphaSumNotOne { sum: "99/100".into() }]);
    }

    #[test]
    fn structural_violations_are_all_reported() {
        let spec = NetworkSpec::from_parts(
            vec!["a".into(), "b".into()],
            vec![("a".into(), "a".into()), ("a".into(), "b".into()), ("a".into(), "b".into())],
            dec("0.1"),
            dec("0.4"),
            ratio(2, 1),
            ratio(3, 1),
            vec![ratio(1, 1), ratio(1, 1), ratio(1, 1)],
            vec![ratio(1, 2), ratio(1, 2)],
            Mode::Heterogeneous,
        )
        .unwrap();
        let v = spec.validate().unwrap_err();
        assert!(v.contains(&Violation::SelfLoop { node: "a".into() }));
        assert!(v.contains(&Violation::ParallelEdge {
            src: "a".into(),
            dst: "b".into()
        }));
    }

    #[test]
    fn unknown_edge_endpoint() {
        let err = NetworkSpec::homogeneous(
            ["a"],
            [("a", "z")],
            dec("0.1"),
            dec("0.4"),
            ratio(1, 1),
            ratio(1, 1),
        )
        .unwrap_err();
        assert!(matches!(err, ModelError::UnknownNode(id) if id == "z"));
    }

    #[test]
    fn normalization_fixed_point_and_idempotence() {
        let spec = fixtures::five_banks_uniform();
        assert_eq!(spec.normalize_homogeneous().unwrap(), spec);
        let doubled = NetworkSpec::homogeneous(
            spec.nodes().to_vec(),
            spec.edges()
                .iter()
                .map(|e| (spec.node_id(e.src).to_string(), spec.node_id(e.dst).to_string()))
                .collect::<Vec<_>>(),
            dec("0.1"),
            dec("0.4"),
            ratio(14, 1),
            ratio(14, 1),
        )
        .unwrap();
        let norm = doubled.normalize_homogeneous().unwrap();
        assert_eq!(*norm.external_total(), ratio(7, 1));
        assert_eq!(*norm.interbank_total(), ratio(7, 1));
        assert_eq!(norm.normalize_homogeneous().unwrap(), norm);
        assert!(norm.validate().is_ok());
        assert!(matches!(
            fixtures::five_banks_skewed().normalize_homogeneous(),
            Err(ModelError::NotHomogeneous)
        ));
    }

    #[test]
    fn components_of_disjoint_copies() {
        let spec = fixtures::five_banks_uniform();
        assert_eq!(spec.weakly_connected_components().len(), 1);
        let twin = fixtures::disjoint_union(&spec, &spec);
        let parts = twin.weakly_connected_components();
        assert_eq!(parts.len(), 2);
        for p in &parts {
            assert_eq!(*p.external_total(), ratio(14, 1));
            assert!(p.validate().is_ok());
            assert_eq!(p.balance_sheets(), spec.balance_sheets());
        }
    }
}
