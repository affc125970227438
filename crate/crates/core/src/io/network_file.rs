use std::io::Read;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::IoError;
use crate::amount::{format_rational, parse_rational};
use crate::network::{Mode, NetworkSpec};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeEntry {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeEntry {
    pub src: String,
    pub dst: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<String>,
}

/// On-disk network. Rationals are strings, either `"p/q"` or decimals
/// parsed exactly. `alpha` and `weight` may be omitted in homogeneous mode.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkFile {
    pub mode: Mode,
    pub gamma: String,
    pub phi: String,
    pub external_total: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interbank_total: Option<String>,
    pub nodes: Vec<NodeEntry>,
    pub edges: Vec<EdgeEntry>,
}

fn field(name: &str, value: &str) -> Result<BigRational, IoError> {
    parse_rational(value).map_err(|source| IoError::Rational {
        field: name.to_string(),
        source,
    })
}

impl NetworkFile {
    pub fn parse(json: &str) -> Result<Self, IoError> {
        Ok(serde_json::from_str(json)?)
    }

    /// Homogeneous specs omit the derived per-node and per-edge shares.
    pub fn from_spec(spec: &NetworkSpec) -> Self {
        let explicit = spec.mode() == Mode::Heterogeneous;
        NetworkFile {
            mode: spec.mode(),
            gamma: format_rational(spec.gamma()),
            phi: format_rational(spec.phi()),
            external_total: format_rational(spec.external_total()),
            interbank_total: Some(format_rational(spec.interbank_total())),
            nodes: spec
                .nodes()
                .iter()
                .zip(spec.alpha())
                .map(|(id, a)| NodeEntry {
                    id: id.clone(),
                    alpha: explicit.then(|| format_rational(a)),
                })
                .collect(),
            edges: spec
                .edges()
                .iter()
                .zip(spec.weights())
                .map(|(e, w)| EdgeEntry {
                    src: spec.node_id(e.src).to_string(),
                    dst: spec.node_id(e.dst).to_string(),
                    weight: explicit.then(|| format_rational(w)),
                })
                .collect(),
        }
    }

    /// Build and validate the spec.
    pub fn to_spec(&self) -> Result<NetworkSpec, IoError> {
        let gamma = field("gamma", &self.gamma)?;
        let phi = field("phi", &self.phi)?;
        let external = field("external_total", &self.external_total)?;
        let n = self.nodes.len();
        let m = self.edges.len();
        let heterogeneous = self.mode == Mode::Heterogeneous;

        let mut weights = Vec::with_capacity(m);
        for (i, e) in self.edges.iter().enumerate() {
            match &e.weight {
                Some(w) => weights.push(Some(field(&format!("edges[{i}].weight"), w)?)),
                None if heterogeneous => {
                    return Err(IoError::Format(format!(
                        "edges[{i}] needs a weight in heterogeneous mode"
                    )))
                }
                None => weights.push(None),
            }
        }
        let mut alpha = Vec::with_capacity(n);
        for (i, v) in self.nodes.iter().enumerate() {
            match &v.alpha {
                Some(a) => alpha.push(Some(field(&format!("nodes[{i}].alpha"), a)?)),
                None if heterogeneous => {
                    return Err(IoError::Format(format!(
                        "node {:?} needs alpha in heterogeneous mode",
                        v.id
                    )))
                }
                None => alpha.push(None),
            }
        }
        let given_sum = weights
            .iter()
            .flatten()
            .fold(BigRational::zero(), |acc, w| acc + w);
        let interbank = match &self.interbank_total {
            Some(s) => field("interbank_total", s)?,
            None if weights.iter().all(Option::is_some) => given_sum,
            None => {
                return Err(IoError::Format(
                    "interbank_total is required when edge weights are omitted".into(),
                ))
            }
        };
        let share_w = if m == 0 {
            BigRational::zero()
        } else {
            &interbank / BigRational::from_integer(m.into())
        };
        let share_a = if n == 0 {
            BigRational::zero()
        } else {
            BigRational::one() / BigRational::from_integer(n.into())
        };
        let weights = weights.into_iter().map(|w| w.unwrap_or_else(|| share_w.clone())).collect();
        let alpha = alpha.into_iter().map(|a| a.unwrap_or_else(|| share_a.clone())).collect();
        let spec = NetworkSpec::from_parts(
            self.nodes.iter().map(|v| v.id.clone()).collect(),
            self.edges.iter().map(|e| (e.src.clone(), e.dst.clone())).collect(),
            gamma,
            phi,
            external,
            interbank,
            weights,
            alpha,
            self.mode,
        )?;
        Ok(spec.validated()?)
    }
}

/// Parameters an edge list does not carry.
#[derive(Clone, Debug, PartialEq)]
pub struct CsvDefaults {
    pub gamma: BigRational,
    pub phi: BigRational,
    pub external_total: BigRational,
}

#[derive(Deserialize)]
struct CsvRow {
    src: String,
    dst: String,
    #[serde(default)]
    weight: Option<String>,
}

/// Lower an edge list with header `src,dst,weight` into a network file.
///
/// Nodes appear in first-mention order. Missing weights count as `1`. If
/// every weight is equal the network is homogeneous, otherwise it is
/// heterogeneous with external assets split evenly.
pub fn read_edges_csv<R: Read>(reader: R, defaults: &CsvDefaults) -> Result<NetworkFile, IoError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let mut ids: Vec<String> = Vec::new();
    let mut edges = Vec::new();
    let mut weights = Vec::new();
    for (i, row) in rdr.deserialize::<CsvRow>().enumerate() {
        let row = row?;
        for id in [&row.src, &row.dst] {
            if !ids.contains(id) {
                ids.push(id.clone());
            }
        }
        let w = match row.weight.as_deref().filter(|s| !s.is_empty()) {
            Some(s) => field(&format!("row {} weight", i + 1), s)?,
            None => BigRational::one(),
        };
        edges.push((row.src, row.dst));
        weights.push(w);
    }
    let uniform = weights.windows(2).all(|p| p[0] == p[1]);
    let total = weights.iter().fold(BigRational::zero(), |acc, w| acc + w);
    let n = ids.len().max(1);
    let alpha = format_rational(&(BigRational::one() / BigRational::from_integer(n.into())));
    Ok(NetworkFile {
        mode: if uniform {
            Mode::Homogeneous
        } else {
            Mode::Heterogeneous
        },
        gamma: format_rational(&defaults.gamma),
        phi: format_rational(&defaults.phi),
        external_total: format_rational(&defaults.external_total),
        interbank_total: Some(format_rational(&total)),
        nodes: ids
            .into_iter()
            .map(|id| NodeEntry {
                id,
                alpha: (!uniform).then(|| alpha.clone()),
            })
            .collect(),
        edges: edges
            .into_iter()
            .zip(weights)
            .map(|((src, dst), w)| EdgeEntry {
                src,
                dst,
                weight: (!uniform).then(|| format_rational(&w)),
            })
            .collect(),
    })
}
