//! Networks encoding classical combinatorial problems.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use super::{
    require, Certificate, Check, Comparison, Correspondence, GenError, GeneratedInstance, GeneratorKind, Graph,
    Hypergraph, SetSystem, SourceObject,
};
use crate::amount::{format_rational, ratio};
use crate::cascade::Horizon;
use crate::network::{ExactSheets, NetworkSpec};

/// Largest hyperedge arity for which a node missing one shocked member
/// still survives (`d − 1 ≤ 0.995 d`).
pub const MAX_HYPEREDGE_ARITY: usize = 200;

fn int(n: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn params(pairs: &[(&str, &BigRational)]) -> BTreeMap<String, String> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), format_rational(v)))
        .collect()
}

/// Loss a node hands each creditor at step one when shocked alone:
/// `min(Φ e − c, b) / din`.
fn first_transmission(spec: &NetworkSpec, sheets: &ExactSheets, v: usize, din: usize) -> BigRational {
    let excess = spec.phi() * &sheets.external_asset[v] - &sheets.equity[v];
    excess.min(sheets.borrowing[v].clone()) / int(din)
}

fn fails_when_shocked(spec: &NetworkSpec, sheets: &ExactSheets, v: usize) -> Check {
    Check::new(
        format!("{} fails when shocked", spec.node_id(v)),
        &(spec.phi() * &sheets.external_asset[v]),
        Comparison::Greater,
        &sheets.equity[v],
    )
}

fn identity_map(items: &[String], node: impl Fn(&str) -> String) -> Vec<Correspondence> {
    items
        .iter()
        .map(|s| Correspondence {
            source: s.clone(),
            node: node(s),
        })
        .collect()
}

/// Bidirected copy of `g` with `E = 10n`, `γ = n⁻²`, `Φ = 1`.
///
/// For `n ≤ 3` the edge transmissions `δ = 1` do not exceed `c = γ(deg+10)`
/// under `γ = n⁻²`, so `γ = (n+10)⁻²` is used whenever the failure checks
/// would otherwise not hold.
pub fn gen_from_dominating_set(g: &Graph) -> Result<GeneratedInstance, GenError> {
    let n = g.n();
    if let Some(v) = g.degrees().iter().position(|&d| d == 0) {
        return Err(GenError::Precondition(format!(
            "vertex {:?} is isolated",
            g.vertices[v]
        )));
    }
    let mut edges = Vec::with_capacity(2 * g.edges.len());
    for (a, b) in &g.edges {
        edges.push((a.clone(), b.clone()));
        edges.push((b.clone(), a.clone()));
    }
    let interbank = int(edges.len());
    let external = int(10 * n);
    let phi = BigRational::one();
    let mut last_err = None;
    for (rule, base) in [("n^-2", n), ("(n+10)^-2", n + 10)] {
        let gamma = BigRational::one() / int(base * base);
        let spec = NetworkSpec::homogeneous(
            g.vertices.clone(),
            edges.clone(),
            gamma.clone(),
            phi.clone(),
            interbank.clone(),
            external.clone(),
        )?;
        let sheets = spec.exact_balance_sheets();
        let din = spec.in_degrees();
        let mut checks: Vec<Check> = (0..n).map(|v| fails_when_shocked(&spec, &sheets, v)).collect();
        for e in spec.edges() {
            // e.src lends to e.dst, so a failing e.dst hits e.src.
            let (debtor, creditor) = (e.dst, e.src);
            checks.push(Check::new(
                format!(
                    "{} failing kills {} at step two",
                    spec.node_id(debtor),
                    spec.node_id(creditor)
                ),
                &first_transmission(&spec, &sheets, debtor, din[debtor]),
                Comparison::Greater,
                &sheets.equity[creditor],
            ));
        }
        if let Err(e) = require(&checks) {
            last_err = Some(e);
            continue;
        }
        let mut parameters = params(&[
            ("gamma", &gamma),
            ("phi", &phi),
            ("external_total", &external),
            ("interbank_total", &interbank),
        ]);
        parameters.insert("gamma_rule".into(), rule.into());
        let certificate = Certificate {
            kind: GeneratorKind::DominatingSet,
            relation: "V' dominates G iff shocking V' kills the network within T = 2; \
                       n * vi*(T=2) = minimum dominating set size"
                .into(),
            horizon: Horizon::Steps(2),
            kappa: None,
            mandatory: Vec::new(),
            correspondence: identity_map(&g.vertices, str::to_string),
            parameters,
            checks,
        };
        return Ok(GeneratedInstance {
            spec,
            source: SourceObject::Graph(g.clone()),
            certificate,
        });
    }
    Err(last_err.expect("at least one attempt"))
}

/// Node-cover network of a 3-regular graph: per vertex `v` a node `u.v`
/// lending to a super-source `u'.v`, per edge `{a, b}` a sink `e.a.b`
/// lending to `u.a` and `u.b`. Homogeneous with unit weights, `E = |V⃗|`,
/// `γ = 0.23`, `Φ = 0.7`.
pub fn gen_from_node_cover_3regular(g: &Graph) -> Result<GeneratedInstance, GenError> {
    if let Some(v) = g.degrees().iter().position(|&d| d != 3) {
        return Err(GenError::Precondition(format!(
            "graph is not 3-regular: {:?} has degree {}",
            g.vertices[v],
            g.degrees()[v]
        )));
    }
    if g.n() == 0 {
        return Err(GenError::Precondition("empty graph".into()));
    }
    let u = |v: &str| format!("u.{v}");
    let up = |v: &str| format!("u'.{v}");
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    for v in &g.vertices {
        nodes.push(u(v));
        nodes.push(up(v));
        edges.push((u(v), up(v)));
    }
    for (a, b) in &g.edges {
        let (a, b) = if g.index(a) < g.index(b) { (a, b) } else { (b, a) };
        let sink = format!("e.{a}.{b}");
        nodes.push(sink.clone());
        edges.push((sink.clone(), u(a)));
        edges.push((sink, u(b)));
    }
    let gamma = ratio(23, 100);
    let phi = ratio(7, 10);
    let external = int(nodes.len());
    let interbank = int(edges.len());
    let spec = NetworkSpec::homogeneous(
        nodes.clone(),
        edges,
        gamma.clone(),
        phi.clone(),
        interbank.clone(),
        external.clone(),
    )?;
    let share = &external / int(nodes.len());
    let (p, c, e) = (&phi, &gamma, &share);
    let one = BigRational::one();
    let checks = vec![
        Check::new("shocked super-source fails", p, Comparison::Greater, c),
        Check::new("shocked sink survives", e, Comparison::Less, &int(2)),
        Check::new(
            "shocked u node fails its sinks",
            &(p * (int(2) + e)),
            Comparison::Greater,
            &(c * (int(3) + int(4) * e)),
        ),
        Check::new("sink equity below unit loss", &(c * e), Comparison::Less, &one),
        Check::new(
            "failed super-source fails its u node",
            &(p * (&one + e)),
            Comparison::Greater,
            &(c * (int(4) + int(2) * e)),
        ),
        Check::new(
            "super-source loss cap exceeds u equity",
            c,
            Comparison::Less,
            &(&one / (int(3) + e)),
        ),
        Check::new(
            "sink survives both u nodes failing",
            &(p * (&one + e)),
            Comparison::LessEq,
            &(c * (int(4) + int(5) * e / int(2))),
        ),
        Check::new(
            "sink survives capped losses",
            c,
            Comparison::GreaterEq,
            &(int(2) / (int(6) + int(3) * e)),
        ),
    ];
    require(&checks)?;
    let mut parameters = params(&[
        ("gamma", &gamma),
        ("phi", &phi),
        ("external_total", &external),
        ("interbank_total", &interbank),
        ("external_per_node", &share),
    ]);
    parameters.insert("vertices".into(), g.n().to_string());
    let certificate = Certificate {
        kind: GeneratorKind::NodeCover3Reg,
        relation: "C is a node cover of G iff shocking every u' node plus {u.v : v in C} kills the network \
                   within T = 2; minimum death set size = |V| + minimum node cover size"
            .into(),
        horizon: Horizon::Steps(2),
        kappa: None,
        mandatory: g.vertices.iter().map(|v| up(v)).collect(),
        correspondence: identity_map(&g.vertices, u),
        parameters,
        checks,
    };
    Ok(GeneratedInstance {
        spec,
        source: SourceObject::Graph(g.clone()),
        certificate,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SetCoverOptions {
    /// `Φ = 0.4 + epsilon`.
    pub epsilon: BigRational,
    /// Reject systems with an element contained in fewer than two sets.
    pub require_double_cover: bool,
}

impl Default for SetCoverOptions {
    fn default() -> Self {
        SetCoverOptions {
            epsilon: BigRational::one() / BigRational::from_integer(BigInt::from(10).pow(9u32)),
            require_double_cover: true,
        }
    }
}

/// Three-layer set-cover network: element `u.x` lends `3/|S|` to every set
/// node `S.name` containing it, every set lends `1` to the sink `B`.
/// Heterogeneous; only elements hold external assets (`1/(100|U|)` each),
/// `γ = 0.1`, `Φ = 0.4 + ε`.
pub fn gen_from_set_cover(system: &SetSystem, opts: &SetCoverOptions) -> Result<GeneratedInstance, GenError> {
    let mult = system.multiplicities();
    let floor = if opts.require_double_cover { 2 } else { 1 };
    if let Some(x) = mult.iter().position(|&k| k < floor) {
        return Err(GenError::Precondition(format!(
            "element {:?} lies in {} set(s), need at least {floor}",
            system.universe[x], mult[x]
        )));
    }
    if let Some((name, _)) = system.sets.iter().find(|(_, m)| m.is_empty()) {
        return Err(GenError::Precondition(format!("set {name:?} is empty")));
    }
    if opts.epsilon <= BigRational::zero() {
        return Err(GenError::Precondition("epsilon must be positive".into()));
    }
    let n_el = system.universe.len();
    let m = system.sets.len();
    let set_node = |s: &str| format!("S.{s}");
    let el_node = |x: &str| format!("u.{x}");
    let zero = BigRational::zero();
    let el_share = BigRational::one() / int(n_el);
    let mut nodes = vec![("B".to_string(), zero.clone())];
    nodes.extend(system.sets.iter().map(|(s, _)| (set_node(s), zero.clone())));
    nodes.extend(system.universe.iter().map(|x| (el_node(x), el_share.clone())));
    let mut edges = Vec::new();
    for (s, members) in &system.sets {
        edges.push((set_node(s), "B".to_string(), BigRational::one()));
        let w = int(3) / int(members.len());
        for x in members {
            edges.push((el_node(x), set_node(s), w.clone()));
        }
    }
    let external = ratio(1, 100);
    let gamma = ratio(1, 10);
    let phi = ratio(2, 5) + &opts.epsilon;
    let spec = NetworkSpec::heterogeneous(nodes, edges, gamma.clone(), phi.clone(), external.clone())?;

    let (p, c) = (&phi, &gamma);
    let e_s = zero.clone();
    let e_b = zero.clone();
    let e_u = &external * &el_share;
    let one = BigRational::one();
    let b_share = &one + &e_b / int(m);
    let mut checks = vec![Check::new("shocked B fails", p, Comparison::Greater, c)];
    let sizes: BTreeSet<usize> = system.sets.iter().map(|(_, s)| s.len()).collect();
    for k in sizes {
        checks.push(Check::new(
            format!("shocked set of size {k} fails its elements"),
            &(p * (int(2) + &e_s)),
            Comparison::Greater,
            &(c * (int(3) + &e_s + int(k) * &e_u)),
        ));
    }
    checks.extend([
        Check::new(
            "set loss within its borrowing",
            &(p * (int(2) + &e_s) - c * (int(3) + &e_s)),
            Comparison::LessEq,
            &int(3),
        ),
        Check::new(
            "failed B fails every set",
            &(p * &b_share),
            Comparison::Greater,
            &(c * (int(4) + &e_s + &e_b / int(m))),
        ),
        Check::new(
            "B loss cap exceeds set equity",
            c,
            Comparison::Less,
            &(&one / (int(3) + &e_s)),
        ),
        Check::new(
            "elements survive B alone",
            &(p * &b_share),
            Comparison::LessEq,
            &(c * (int(4) + &e_s + &e_b / int(m) + &e_u / int(n_el))),
        ),
        Check::new(
            "B loss within its borrowing",
            c,
            Comparison::GreaterEq,
            &(p - &one / &b_share),
        ),
    ]);
    // Sets killed by B at step two pass on what exceeds their equity. In
    // the worst case each hands all of it to a single surviving element.
    let spill = ((p - c) * &b_share).min(one.clone()) - c * (int(3) + &e_s);
    let spill = spill.max(zero.clone()).min(int(3));
    for (x, k) in system.universe.iter().zip(&mult) {
        checks.push(Check::new(
            format!("uncovered element {x} survives its sets failing"),
            &(&spill * int(*k)),
            Comparison::LessEq,
            &(c * &e_u),
        ));
    }
    require(&checks)?;
    let mut parameters = params(&[
        ("gamma", &gamma),
        ("phi", &phi),
        ("epsilon", &opts.epsilon),
        ("external_total", &external),
        ("external_per_element", &e_u),
    ]);
    parameters.insert("require_double_cover".into(), opts.require_double_cover.to_string());
    let names: Vec<String> = system.sets.iter().map(|(s, _)| s.clone()).collect();
    let certificate = Certificate {
        kind: GeneratorKind::SetCover,
        relation: "S' covers U iff shocking {B} plus {S.s : s in S'} kills the network; \
                   minimum death set size = minimum cover size + 1"
            .into(),
        horizon: Horizon::Unbounded,
        kappa: None,
        mandatory: vec!["B".into()],
        correspondence: identity_map(&names, set_node),
        parameters,
        checks,
    };
    Ok(GeneratedInstance {
        spec,
        source: SourceObject::SetSystem(system.clone()),
        certificate,
    })
}

/// Max-coverage network: element `u.x` lends `1` to every set node `S.name`
/// containing it. Homogeneous, `E = n`, `γ = n⁻²`, `Φ = 1`.
pub fn gen_from_max_coverage(system: &SetSystem, kappa: usize) -> Result<GeneratedInstance, GenError> {
    let m = system.sets.len();
    if kappa == 0 || kappa > m {
        return Err(GenError::Precondition(format!("kappa must lie in 1..={m}, got {kappa}")));
    }
    let set_node = |s: &str| format!("S.{s}");
    let el_node = |x: &str| format!("u.{x}");
    let mut nodes: Vec<String> = system.universe.iter().map(|x| el_node(x)).collect();
    nodes.extend(system.sets.iter().map(|(s, _)| set_node(s)));
    let mut edges = Vec::new();
    for (s, members) in &system.sets {
        for x in members {
            edges.push((el_node(x), set_node(s)));
        }
    }
    let n = nodes.len();
    let gamma = BigRational::one() / int(n * n);
    let phi = BigRational::one();
    let external = int(n);
    let interbank = int(edges.len());
    let spec = NetworkSpec::homogeneous(
        nodes,
        edges,
        gamma.clone(),
        phi.clone(),
        interbank.clone(),
        external.clone(),
    )?;
    let sheets = spec.exact_balance_sheets();
    let din = spec.in_degrees();
    let dout = spec.out_degrees();
    let mut checks = Vec::new();
    for v in 0..spec.n() {
        let is_set = v >= system.universe.len();
        if is_set {
            checks.push(fails_when_shocked(&spec, &sheets, v));
        } else if dout[v] > 0 {
            checks.push(Check::new(
                format!("{} survives when shocked", spec.node_id(v)),
                &(&phi * &sheets.external_asset[v]),
                Comparison::LessEq,
                &sheets.equity[v],
            ));
        }
    }
    for e in spec.edges() {
        checks.push(Check::new(
            format!("{} failing kills {}", spec.node_id(e.dst), spec.node_id(e.src)),
            &first_transmission(&spec, &sheets, e.dst, din[e.dst]),
            Comparison::Greater,
            &sheets.equity[e.src],
        ));
    }
    require(&checks)?;
    let names: Vec<String> = system.sets.iter().map(|(s, _)| s.clone()).collect();
    let certificate = Certificate {
        kind: GeneratorKind::MaxCoverage,
        relation: "shocking kappa set nodes fails them and exactly the elements they cover; \
                   dvi*(T=2, kappa) * kappa = max kappa-coverage + kappa"
            .into(),
        horizon: Horizon::Steps(2),
        kappa: Some(kappa),
        mandatory: Vec::new(),
        correspondence: identity_map(&names, set_node),
        parameters: params(&[
            ("gamma", &gamma),
            ("phi", &phi),
            ("external_total", &external),
            ("interbank_total", &interbank),
        ]),
        checks,
    };
    Ok(GeneratedInstance {
        spec,
        source: SourceObject::SetSystem(system.clone()),
        certificate,
    })
}

/// Densest-subhypergraph network: hyperedge node `h{i}` lends `2` to each of
/// its `d` vertex nodes `v.x`. Heterogeneous, `E_h = 1.99 d`, `E_v = 0`,
/// `Φ = 1`, `γ = 1/2`.
pub fn gen_from_densest_subhypergraph(h: &Hypergraph, kappa: usize) -> Result<GeneratedInstance, GenError> {
    let d = h
        .arity()
        .ok_or_else(|| GenError::Precondition("hypergraph has no hyperedges".into()))?;
    if h.edges.iter().any(|e| e.len() != d) {
        return Err(GenError::Precondition("hypergraph is not uniform".into()));
    }
    if d < 2 {
        return Err(GenError::Precondition("hyperedge arity must be at least 2".into()));
    }
    if d > MAX_HYPEREDGE_ARITY {
        return Err(GenError::Precondition(format!(
            "hyperedge arity {d} exceeds {MAX_HYPEREDGE_ARITY}"
        )));
    }
    let covered: BTreeSet<&str> = h.edges.iter().flatten().map(String::as_str).collect();
    if let Some(v) = h.vertices.iter().find(|v| !covered.contains(v.as_str())) {
        return Err(GenError::Precondition(format!("vertex {v:?} lies in no hyperedge")));
    }
    let nv = h.vertices.len();
    if kappa == 0 || kappa > nv {
        return Err(GenError::Precondition(format!("kappa must lie in 1..={nv}, got {kappa}")));
    }
    let mh = h.edges.len();
    let vnode = |x: &str| format!("v.{x}");
    let e_h = ratio(199, 100) * int(d);
    let external = &e_h * int(mh);
    let zero = BigRational::zero();
    let mut nodes: Vec<(String, BigRational)> = h.vertices.iter().map(|x| (vnode(x), zero.clone())).collect();
    let alpha_h = &e_h / &external;
    nodes.extend((0..mh).map(|i| (format!("h{i}"), alpha_h.clone())));
    let mut edges = Vec::new();
    for (i, e) in h.edges.iter().enumerate() {
        for x in e {
            edges.push((format!("h{i}"), vnode(x), int(2)));
        }
    }
    let gamma = ratio(1, 2);
    let phi = BigRational::one();
    let spec = NetworkSpec::heterogeneous(nodes, edges, gamma.clone(), phi.clone(), external.clone())?;
    let sheets = spec.exact_balance_sheets();
    let din = spec.in_degrees();
    let mut checks: Vec<Check> = (0..nv).map(|v| fails_when_shocked(&spec, &sheets, v)).collect();
    let delta: Vec<BigRational> = (0..nv)
        .map(|v| first_transmission(&spec, &sheets, v, din[v]))
        .collect();
    for (i, e) in h.index_edges().iter().enumerate() {
        let node = nv + i;
        let full = e.iter().fold(zero.clone(), |acc, &v| acc + &delta[v]);
        let weakest = e.iter().map(|&v| delta[v].clone()).min().expect("non-empty hyperedge");
        checks.push(Check::new(
            format!("h{i} survives when shocked"),
            &(&phi * &sheets.external_asset[node]),
            Comparison::LessEq,
            &sheets.equity[node],
        ));
        checks.push(Check::new(
            format!("h{i} fails when fully contained"),
            &full,
            Comparison::Greater,
            &sheets.equity[node],
        ));
        checks.push(Check::new(
            format!("h{i} survives when partially contained"),
            &(&full - &weakest),
            Comparison::LessEq,
            &sheets.equity[node],
        ));
    }
    require(&checks)?;
    let mut parameters = params(&[
        ("gamma", &gamma),
        ("phi", &phi),
        ("external_total", &external),
        ("external_per_hyperedge", &e_h),
    ]);
    parameters.insert("arity".into(), d.to_string());
    let certificate = Certificate {
        kind: GeneratorKind::DensestHypergraph,
        relation: "shocking kappa vertex nodes fails them and exactly the hyperedge nodes whose members are all \
                   shocked; dvi*(T=2, kappa) * kappa = kappa + max hyperedges inside a kappa-subset"
            .into(),
        horizon: Horizon::Steps(2),
        kappa: Some(kappa),
        mandatory: Vec::new(),
        correspondence: identity_map(&h.vertices, vnode),
        parameters,
        checks,
    };
    Ok(GeneratedInstance {
        spec,
        source: SourceObject::Hypergraph(h.clone()),
        certificate,
    })
}
