//! Step-by-step cascade on the five-bank chain, and the shock set that
//! kills fewer banks despite being larger.

use contagion::io::{trace_to_dot, TraceFile};
use contagion::{fixtures, propagate, Horizon, ShockSet};

fn main() {
    let spec = fixtures::non_monotone();

    let pair = ShockSet::from_ids(&spec, ["a", "b"]).unwrap();
    let trace = propagate(&spec, &pair, Horizon::Unbounded).unwrap();
    for step in &trace.steps {
        let failed: Vec<&str> = step.failed.iter().map(|&v| spec.node_id(v)).collect();
        println!("t={}: {:?} fail", step.t, failed);
        for tx in &step.transmissions {
            println!(
                "    {} passes {} to each of {} creditor(s)",
                spec.node_id(tx.debtor),
                tx.per_creditor,
                tx.creditors.len()
            );
        }
    }
    println!("dead: {}", trace.dead);

    let all = propagate(&spec, &ShockSet::all(&spec), Horizon::Unbounded).unwrap();
    let file = TraceFile::new(&spec, &all);
    println!("\nshocking every bank leaves {:?} standing", file.survivors);

    println!("\n{}", trace_to_dot(&spec, &trace));
}
