//! Instance generators: networks built from combinatorial objects, whose
//! stability solutions correspond to the objects' optima, plus seeded
//! random topologies.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::amount::format_rational;
use crate::cascade::{CascadeError, Horizon, ShockSet};
use crate::network::{ModelError, NetworkSpec};

mod random;
mod reductions;

pub use random::{gen_random_dag, gen_random_in_arborescence, RandomParams};
pub use reductions::{
    gen_from_densest_subhypergraph, gen_from_dominating_set, gen_from_max_coverage,
    gen_from_node_cover_3regular, gen_from_set_cover, SetCoverOptions, MAX_HYPEREDGE_ARITY,
};

#[derive(Debug, Error)]
pub enum GenError {
    #[error("generator precondition failed: {0}")]
    Precondition(String),
    #[error("parameter check failed: {0}")]
    Inequality(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Cascade(#[from] CascadeError),
}

/// Simple undirected graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
}

impl Graph {
    pub fn new<S: Into<String>>(
        vertices: impl IntoIterator<Item = S>,
        edges: impl IntoIterator<Item = (S, S)>,
    ) -> Result<Self, GenError> {
        let g = Graph {
            vertices: vertices.into_iter().map(Into::into).collect(),
            edges: edges.into_iter().map(|(a, b)| (a.into(), b.into())).collect(),
        };
        g.check()?;
        Ok(g)
    }

    /// Graph on `0..n` named by index.
    pub fn from_indices(n: usize, edges: &[(usize, usize)]) -> Result<Self, GenError> {
        Graph::new(
            (0..n).map(|i| i.to_string()),
            edges.iter().map(|&(a, b)| (a.to_string(), b.to_string())),
        )
    }

    fn check(&self) -> Result<(), GenError> {
        let names: BTreeSet<&str> = self.vertices.iter().map(String::as_str).collect();
        if names.len() != self.vertices.len() {
            return Err(GenError::Precondition("duplicate vertex".into()));
        }
        let mut seen = BTreeSet::new();
        for (a, b) in &self.edges {
            for x in [a, b] {
                if !names.contains(x.as_str()) {
                    return Err(GenError::Precondition(format!("edge endpoint {x:?} is not a vertex")));
                }
            }
            if a == b {
                return Err(GenError::Precondition(format!("self-loop at {a:?}")));
            }
            let key = if a < b { (a, b) } else { (b, a) };
            if !seen.insert(key) {
                return Err(GenError::Precondition(format!("repeated edge {{{a}, {b}}}")));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn index(&self, v: &str) -> usize {
        self.vertices.iter().position(|x| x == v).expect("checked vertex")
    }

    /// Edges as index pairs.
    pub fn index_edges(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|(a, b)| (self.index(a), self.index(b))).collect()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n()];
        for (a, b) in self.index_edges() {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }
}

/// Named sets over a universe.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetSystem {
    pub universe: Vec<String>,
    pub sets: Vec<(String, Vec<String>)>,
}

impl SetSystem {
    pub fn new<S: Into<String>>(
        universe: impl IntoIterator<Item = S>,
        sets: impl IntoIterator<Item = (S, Vec<S>)>,
    ) -> Result<Self, GenError> {
        let s = SetSystem {
            universe: universe.into_iter().map(Into::into).collect(),
            sets: sets
                .into_iter()
                .map(|(name, members)| (name.into(), members.into_iter().map(Into::into).collect()))
                .collect(),
        };
        s.check()?;
        Ok(s)
    }

    /// Sets named `S0..` over the universe `0..universe`.
    pub fn from_indices(universe: usize, sets: &[Vec<usize>]) -> Result<Self, GenError> {
        SetSystem::new(
            (0..universe).map(|i| i.to_string()),
            sets.iter()
                .enumerate()
                .map(|(j, s)| (format!("S{j}"), s.iter().map(|i| i.to_string()).collect())),
        )
    }

    fn check(&self) -> Result<(), GenError> {
        if self.universe.is_empty() || self.sets.is_empty() {
            return Err(GenError::Precondition("empty universe or set family".into()));
        }
        let names: BTreeSet<&str> = self.universe.iter().map(String::as_str).collect();
        if names.len() != self.universe.len() {
            return Err(GenError::Precondition("duplicate element".into()));
        }
        let set_names: BTreeSet<&str> = self.sets.iter().map(|(s, _)| s.as_str()).collect();
        if set_names.len() != self.sets.len() {
            return Err(GenError::Precondition("duplicate set name".into()));
        }
        for (name, members) in &self.sets {
            let distinct: BTreeSet<&str> = members.iter().map(String::as_str).collect();
            if distinct.len() != members.len() {
                return Err(GenError::Precondition(format!("set {name:?} repeats an element")));
            }
            if let Some(x) = members.iter().find(|x| !names.contains(x.as_str())) {
                return Err(GenError::Precondition(format!("set {name:?} contains unknown element {x:?}")));
            }
        }
        Ok(())
    }

    /// Member indices of every set.
    pub fn index_sets(&self) -> Vec<Vec<usize>> {
        self.sets
            .iter()
            .map(|(_, m)| {
                m.iter()
                    .map(|x| self.universe.iter().position(|u| u == x).expect("checked element"))
                    .collect()
            })
            .collect()
    }

    /// Number of sets containing each element.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut k = vec![0; self.universe.len()];
        for s in self.index_sets() {
            for u in s {
                k[u] += 1;
            }
        }
        k
    }
}

/// Uniform hypergraph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypergraph {
    pub vertices: Vec<String>,
    pub edges: Vec<Vec<String>>,
}

impl Hypergraph {
    pub fn new<S: Into<String>>(
        vertices: impl IntoIterator<Item = S>,
        edges: impl IntoIterator<Item = Vec<S>>,
    ) -> Result<Self, GenError> {
        let h = Hypergraph {
            vertices: vertices.into_iter().map(Into::into).collect(),
            edges: edges
                .into_iter()
                .map(|e| e.into_iter().map(Into::into).collect())
                .collect(),
        };
        h.check()?;
        Ok(h)
    }

    pub fn from_indices(n: usize, edges: &[Vec<usize>]) -> Result<Self, GenError> {
        Hypergraph::new(
            (0..n).map(|i| i.to_string()),
            edges.iter().map(|e| e.iter().map(|i| i.to_string()).collect()),
        )
    }

    fn check(&self) -> Result<(), GenError> {
        let names: BTreeSet<&str> = self.vertices.iter().map(String::as_str).collect();
        if names.len() != self.vertices.len() {
            return Err(GenError::Precondition("duplicate vertex".into()));
        }
        let mut seen = BTreeSet::new();
        for e in &self.edges {
            let set: BTreeSet<&str> = e.iter().map(String::as_str).collect();
            if set.len() != e.len() {
                return Err(GenError::Precondition(format!("hyperedge {e:?} repeats a vertex")));
            }
            if let Some(x) = e.iter().find(|x| !names.contains(x.as_str())) {
                return Err(GenError::Precondition(format!("hyperedge contains unknown vertex {x:?}")));
            }
            if !seen.insert(set) {
                return Err(GenError::Precondition(format!("repeated hyperedge {e:?}")));
            }
        }
        Ok(())
    }

    pub fn arity(&self) -> Option<usize> {
        self.edges.first().map(Vec::len)
    }

    pub fn index_edges(&self) -> Vec<Vec<usize>> {
        self.edges
            .iter()
            .map(|e| {
                e.iter()
                    .map(|x| self.vertices.iter().position(|v| v == x).expect("checked vertex"))
                    .collect()
            })
            .collect()
    }
}

/// The combinatorial object a network was built from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum SourceObject {
    Graph(Graph),
    SetSystem(SetSystem),
    Hypergraph(Hypergraph),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorKind {
    DominatingSet,
    NodeCover3Reg,
    SetCover,
    MaxCoverage,
    DensestHypergraph,
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GeneratorKind::DominatingSet => "dominating-set",
            GeneratorKind::NodeCover3Reg => "node-cover-3reg",
            GeneratorKind::SetCover => "set-cover",
            GeneratorKind::MaxCoverage => "max-coverage",
            GeneratorKind::DensestHypergraph => "densest-hypergraph",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Comparison {
    #[serde(rename = ">")]
    Greater,
    #[serde(rename = ">=")]
    GreaterEq,
    #[serde(rename = "<")]
    Less,
    #[serde(rename = "<=")]
    LessEq,
}

impl Comparison {
    fn holds(self, lhs: &BigRational, rhs: &BigRational) -> bool {
        match self {
            Comparison::Greater => lhs > rhs,
            Comparison::GreaterEq => lhs >= rhs,
            Comparison::Less => lhs < rhs,
            Comparison::LessEq => lhs <= rhs,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Comparison::Greater => ">",
            Comparison::GreaterEq => ">=",
            Comparison::Less => "<",
            Comparison::LessEq => "<=",
        }
    }
}

/// One exact parameter inequality evaluated at generation time.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub lhs: String,
    pub op: Comparison,
    pub rhs: String,
    pub holds: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, lhs: &BigRational, op: Comparison, rhs: &BigRational) -> Self {
        Check {
            name: name.into(),
            lhs: format_rational(lhs),
            op,
            rhs: format_rational(rhs),
            holds: op.holds(lhs, rhs),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} {} {}", self.name, self.lhs, self.op.symbol(), self.rhs)
    }
}

/// A source item and the network node that stands for it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Correspondence {
    pub source: String,
    pub node: String,
}

/// What a generated network is expected to satisfy, and the evidence that
/// its parameters put it in the regime where that holds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: GeneratorKind,
    /// The expected equivalence, in words.
    pub relation: String,
    pub horizon: Horizon,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub kappa: Option<usize>,
    /// Nodes every killing shock set must contain.
    pub mandatory: Vec<String>,
    pub correspondence: Vec<Correspondence>,
    pub parameters: BTreeMap<String, String>,
    pub checks: Vec<Check>,
}

impl Certificate {
    pub fn all_checks_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    /// The node standing for `source`.
    pub fn node_of(&self, source: &str) -> Option<&str> {
        self.correspondence
            .iter()
            .find(|c| c.source == source)
            .map(|c| c.node.as_str())
    }
}

/// A network together with the object it encodes.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratedInstance {
    pub spec: NetworkSpec,
    pub source: SourceObject,
    pub certificate: Certificate,
}

impl GeneratedInstance {
    /// Shock set standing for a source solution, mandatory nodes included.
    pub fn shock_for<S: AsRef<str>>(&self, solution: &[S]) -> Result<ShockSet, GenError> {
        let mut ids: Vec<&str> = self.certificate.mandatory.iter().map(String::as_str).collect();
        for item in solution {
            let node = self
                .certificate
                .node_of(item.as_ref())
                .ok_or_else(|| GenError::Precondition(format!("unknown source item {:?}", item.as_ref())))?;
            ids.push(node);
        }
        Ok(ShockSet::from_ids(&self.spec, &ids)?)
    }
}

/// Fails loudly when any check is violated.
fn require(checks: &[Check]) -> Result<(), GenError> {
    let failed: Vec<String> = checks.iter().filter(|c| !c.holds).map(|c| c.to_string()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(GenError::Inequality(failed.join("; ")))
    }
}
