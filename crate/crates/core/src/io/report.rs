use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::IoError;
use crate::amount::{format_rational, Amount};
use crate::cascade::{CascadeTrace, Horizon};
use crate::dual::{DualMethod, DualResult};
use crate::network::NetworkSpec;
use crate::stability::{StabilityIndex, StabilityMethod, StabilityResult};

/// Exact decimal when the denominator divides a power of ten, `p/q`
/// otherwise.
pub fn format_decimal(r: &BigRational) -> String {
    let mut q = r.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let mut digits = 0usize;
    let (mut twos, mut fives) = (0usize, 0usize);
    while q.is_even() {
        q /= &two;
        twos += 1;
    }
    while (&q % &five).is_zero() {
        q /= &five;
        fives += 1;
    }
    if !q.is_one() {
        return format_rational(r);
    }
    digits += twos.max(fives);
    if digits == 0 {
        return r.numer().to_string();
    }
    let scaled = r.abs() * BigRational::from_integer(BigInt::from(10).pow(digits as u32));
    let s = scaled.to_integer().to_string();
    let s = format!("{s:0>width$}", width = digits + 1);
    let (int, frac) = s.split_at(s.len() - digits);
    let frac = frac.trim_end_matches('0');
    let sign = if r.is_negative() { "-" } else { "" };
    format!("{sign}{int}.{frac}")
}

pub fn format_amount(a: &Amount) -> String {
    match a {
        Amount::Exact(r) => format_decimal(r),
        Amount::Float(x) => x.to_string(),
    }
}

/// Balance sheets as CSV with header `node,iota,b,e,a,c`.
pub fn balance_csv(spec: &NetworkSpec) -> Result<String, IoError> {
    let sheets = spec.balance_sheets();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["node", "iota", "b", "e", "a", "c"])?;
    for v in 0..spec.n() {
        w.write_record([
            spec.node_id(v).to_string(),
            format_amount(&sheets.interbank_asset[v]),
            format_amount(&sheets.borrowing[v]),
            format_amount(&sheets.external_asset[v]),
            format_amount(&sheets.total_asset[v]),
            format_amount(&sheets.equity[v]),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| IoError::Format(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| IoError::Format(e.to_string()))
}

fn names(spec: &NetworkSpec, idx: &[usize]) -> Vec<String> {
    idx.iter().map(|&v| spec.node_id(v).to_string()).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransmissionEntry {
    pub debtor: String,
    pub creditors: Vec<String>,
    pub per_creditor: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepEntry {
    pub t: usize,
    pub failed: Vec<String>,
    pub transmissions: Vec<TransmissionEntry>,
    /// Equity of every node still alive after the step.
    pub equity_after: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceFile {
    pub horizon: Horizon,
    pub shock: Vec<String>,
    pub dead: bool,
    pub last_step: Option<usize>,
    pub steps: Vec<StepEntry>,
    pub failed: Vec<String>,
    pub survivors: Vec<String>,
}

impl TraceFile {
    pub fn new(spec: &NetworkSpec, trace: &CascadeTrace) -> Self {
        let failed: Vec<usize> = trace.failed().into_iter().collect();
        TraceFile {
            horizon: trace.horizon,
            shock: trace.shock.ids(spec),
            dead: trace.dead,
            last_step: trace.last_step(),
            steps: trace
                .steps
                .iter()
                .map(|s| StepEntry {
                    t: s.t,
                    failed: names(spec, &s.failed),
                    transmissions: s
                        .transmissions
                        .iter()
                        .map(|x| TransmissionEntry {
                            debtor: spec.node_id(x.debtor).to_string(),
                            creditors: names(spec, &x.creditors),
                            per_creditor: format_amount(&x.per_creditor),
                        })
                        .collect(),
                    equity_after: s
                        .equity_after
                        .iter()
                        .enumerate()
                        .filter_map(|(v, c)| c.as_ref().map(|c| (spec.node_id(v).to_string(), format_amount(c))))
                        .collect(),
                })
                .collect(),
            failed: names(spec, &failed),
            survivors: names(spec, &trace.survivors),
        }
    }
}

const PALETTE: [&str; 6] = ["#b2182b", "#d6604d", "#f4a582", "#fddbc7", "#d1e5f0", "#92c5de"];

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\\\""))
}

/// Graphviz rendering of a cascade: failed nodes are filled by failure
/// step, shocked nodes drawn bold, survivors left white.
pub fn trace_to_dot(spec: &NetworkSpec, trace: &CascadeTrace) -> String {
    let steps = trace.failure_steps(spec.n());
    let mut out = String::from("digraph cascade {\n  rankdir=LR;\n  node [shape=circle, style=filled];\n");
    for v in 0..spec.n() {
        let id = spec.node_id(v);
        let (fill, label) = match steps[v] {
            Some(t) => (PALETTE[(t - 1) % PALETTE.len()], format!("{id}\\nt={t}")),
            None => ("#ffffff", id.to_string()),
        };
        let pen = if trace.shock.contains(v) { 3 } else { 1 };
        let _ = writeln!(
            out,
            "  {} [label={}, fillcolor=\"{fill}\", penwidth={pen}];",
            quote(id),
            quote(&label)
        );
    }
    for (e, w) in spec.edges().iter().zip(spec.weights()) {
        let _ = writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(spec.node_id(e.src)),
            quote(spec.node_id(e.dst)),
            quote(&format_rational(w))
        );
    }
    out.push_str("}\n");
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub method: StabilityMethod,
    pub horizon: Horizon,
    /// `finite` or `infeasible-infinity`.
    pub status: String,
    /// `|V'|/n` in lowest terms, or `inf`.
    pub value: String,
    pub shock: Option<Vec<String>>,
    pub size: Option<usize>,
    pub n: usize,
    pub confirmed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower_bound: Option<String>,
}

impl StabilityReport {
    pub fn new(spec: &NetworkSpec, r: &StabilityResult) -> Self {
        StabilityReport {
            method: r.method,
            horizon: r.horizon,
            status: match r.index {
                StabilityIndex::Finite(_) => "finite",
                StabilityIndex::Infinite => "infeasible-infinity",
            }
            .into(),
            value: r.index.to_string(),
            shock: r.shock.as_ref().map(|s| s.ids(spec)),
            size: r.size(),
            n: r.n,
            confirmed: r.confirmed,
            lower_bound: r.lower_bound.as_ref().map(format_rational),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualReport {
    pub method: DualMethod,
    pub horizon: Horizon,
    pub kappa: usize,
    /// `|infl|/κ` in lowest terms.
    pub value: String,
    pub shock: Vec<String>,
    pub failed: Vec<String>,
    pub confirmed: bool,
}

impl DualReport {
    pub fn new(spec: &NetworkSpec, r: &DualResult) -> Self {
        DualReport {
            method: r.method,
            horizon: r.horizon,
            kappa: r.kappa,
            value: format_rational(&r.value),
            shock: r.shock.ids(spec),
            failed: names(spec, &r.failed),
            confirmed: r.confirmed,
        }
    }
}
