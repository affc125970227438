//! Small reference networks used by examples, tests and documentation.

use num_rational::BigRational;
use num_traits::Zero;

use crate::amount::{dec, ratio};
use crate::network::{Mode, NetworkSpec};

/// Five banks `a..e`; `c` lends to `a` and `b`, `d` and `e` lend to `c`.
/// Homogeneous with `Φ = 0.4`, `γ = 0.1`, `E = 5`, `I = 4`.
pub fn non_monotone() -> NetworkSpec {
    NetworkSpec::homogeneous(
        ["a", "b", "c", "d", "e"],
        [("c", "b"), ("c", "a"), ("e", "c"), ("d", "c")],
        dec("0.1"),
        dec("0.4"),
        ratio(4, 1),
        ratio(5, 1),
    )
    .expect("valid fixture")
}

const FIVE_BANK_EDGES: [(&str, &str); 7] = [
    ("v2", "v1"),
    ("v1", "v4"),
    ("v4", "v2"),
    ("v3", "v1"),
    ("v3", "v4"),
    ("v5", "v4"),
    ("v5", "v3"),
];

/// Five banks and seven loans, `I = 7`, `E = 14`, `γ = 0.1`, `Φ = 0.4`.
pub fn five_banks_uniform() -> NetworkSpec {
    NetworkSpec::homogeneous(
        ["v1", "v2", "v3", "v4", "v5"],
        FIVE_BANK_EDGES,
        dec("0.1"),
        dec("0.4"),
        ratio(7, 1),
        ratio(14, 1),
    )
    .expect("valid fixture")
}

/// The same topology with 95% of `E` on `v1, v2` and 95% of `I` on the
/// first three loans.
pub fn five_banks_skewed() -> NetworkSpec {
    let big_alpha = dec("0.475");
    let small_alpha = dec("0.05") / ratio(3, 1);
    let big_w = dec("0.95") * ratio(7, 3);
    let small_w = dec("0.05") * ratio(7, 4);
    let alpha = [
        big_alpha.clone(),
        big_alpha,
        small_alpha.clone(),
        small_alpha.clone(),
        small_alpha,
    ];
    let nodes = ["v1", "v2", "v3", "v4", "v5"].into_iter().zip(alpha);
    let edges = FIVE_BANK_EDGES.iter().enumerate().map(|(i, &(s, d))| {
        let w = if i < 3 { big_w.clone() } else { small_w.clone() };
        (s, d, w)
    });
    NetworkSpec::heterogeneous(nodes, edges, dec("0.1"), dec("0.4"), ratio(14, 1))
        .expect("valid fixture")
}

/// One bank with no loans.
pub fn single_node(external: BigRational, gamma: BigRational, phi: BigRational) -> NetworkSpec {
    NetworkSpec::homogeneous(
        ["v"],
        Vec::<(&str, &str)>::new(),
        gamma,
        phi,
        BigRational::zero(),
        external,
    )
    .expect("valid fixture")
}

/// Disjoint union of two networks sharing `γ` and `Φ`. Node ids get the
/// prefixes `L:` and `R:`; every node keeps its balance sheet.
pub fn disjoint_union(left: &NetworkSpec, right: &NetworkSpec) -> NetworkSpec {
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    let mut weights = Vec::new();
    let mut shares = Vec::new();
    for (tag, part) in [("L:", left), ("R:", right)] {
        for (id, a) in part.nodes().iter().zip(part.alpha()) {
            nodes.push(format!("{tag}{id}"));
            shares.push(a * part.external_total());
        }
        for (e, w) in part.edges().iter().zip(part.weights()) {
            edges.push((
                format!("{tag}{}", part.node_id(e.src)),
                format!("{tag}{}", part.node_id(e.dst)),
            ));
            weights.push(w.clone());
        }
    }
    let external = left.external_total() + right.external_total();
    let alpha: Vec<BigRational> = if external.is_zero() {
        vec![ratio(1, nodes.len() as i64); nodes.len()]
    } else {
        shares.iter().map(|s| s / &external).collect()
    };
    let interbank = left.interbank_total() + right.interbank_total();
    let build = |mode| {
        NetworkSpec::from_parts(
            nodes.clone(),
            edges.clone(),
            left.gamma().clone(),
            left.phi().clone(),
            external.clone(),
            interbank.clone(),
            weights.clone(),
            alpha.clone(),
            mode,
        )
        .expect("ids resolve")
    };
    let homogeneous = build(Mode::Homogeneous);
    if left.mode() == Mode::Homogeneous
        && right.mode() == Mode::Homogeneous
        && homogeneous.validate().is_ok()
    {
        homogeneous
    } else {
        build(Mode::Heterogeneous)
    }
}
