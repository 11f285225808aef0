//! Exact maximum flow by shortest augmenting paths.
//!
//! Breadth-first search over the residual graph visits each node's arcs in
//! edge-id order, so the augmenting path, the witness flow and the residual
//! source side are reproducible for a fixed input. Each augmentation
//! saturates at least one residual arc, which bounds the number of rounds
//! independently of the (rational) capacities.

use std::collections::VecDeque;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::game::Coalition;
use crate::network::FlowNetwork;
use crate::rational::{serde_str, serde_vec, zero, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlowResult {
    #[serde(with = "serde_str")]
    pub value: Rational,
    #[serde(serialize_with = "serde_vec::serialize")]
    pub edge_flows: Vec<Rational>,
    /// Node mask: reachable from the source in the final residual graph.
    pub source_side: Vec<bool>,
}

impl FlowResult {
    pub fn source_nodes(&self) -> Vec<usize> {
        (0..self.source_side.len())
            .filter(|&v| self.source_side[v])
            .collect()
    }
}

/// Maximum flow with per-edge capacities `caps` (zero means absent).
pub fn max_flow(net: &FlowNetwork, caps: &[Rational]) -> FlowResult {
    debug_assert_eq!(caps.len(), net.edge_count());
    debug_assert!(caps.iter().all(|c| !c.is_negative()));
    let m = net.edge_count();
    let n = net.node_count();
    let (s, t) = (net.source(), net.sink());
    let mut residual: Vec<Rational> = caps.to_vec();
    let mut flow: Vec<Rational> = vec![zero(); m];

    loop {
        // parent[v] = (edge, forward?) used to reach v
        let mut parent: Vec<Option<(usize, bool)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        'bfs: while let Some(u) = queue.pop_front() {
            for &(k, forward) in net.residual_arcs(u) {
                let e = net.edge(k);
                let (open, v) = if forward {
                    (residual[k].is_positive(), e.head)
                } else {
                    (flow[k].is_positive(), e.tail)
                };
                if open && !seen[v] {
                    seen[v] = true;
                    parent[v] = Some((k, forward));
                    if v == t {
                        break 'bfs;
                    }
                    queue.push_back(v);
                }
            }
        }
        if !seen[t] || s == t {
            let value = net
                .out_edges(s)
                .iter()
                .fold(zero(), |acc, &k| acc + &flow[k])
                - net
                    .in_edges(s)
                    .iter()
                    .fold(zero(), |acc, &k| acc + &flow[k]);
            return FlowResult {
                value,
                edge_flows: flow,
                source_side: seen,
            };
        }

        let mut path = Vec::new();
        let mut v = t;
        while v != s {
            let (k, forward) = parent[v].expect("bfs tree reaches sink");
            path.push((k, forward));
            v = if forward {
                net.edge(k).tail
            } else {
                net.edge(k).head
            };
        }
        let bottleneck = path
            .iter()
            .map(|&(k, forward)| if forward { &residual[k] } else { &flow[k] })
            .min()
            .cloned()
            .expect("non-empty path");
        for (k, forward) in path {
            if forward {
                residual[k] -= &bottleneck;
                flow[k] += &bottleneck;
            } else {
                residual[k] += &bottleneck;
                flow[k] -= &bottleneck;
            }
        }
    }
}

pub fn max_flow_value(net: &FlowNetwork, caps: &[Rational]) -> Rational {
    max_flow(net, caps).value
}

/// Capacity vector restricted to a coalition: members keep their report, the rest get 0.
pub fn restrict(reports: &[Rational], coalition: Coalition) -> Vec<Rational> {
    reports
        .iter()
        .enumerate()
        .map(|(k, r)| {
            if coalition.contains(k) {
                r.clone()
            } else {
                zero()
            }
        })
        .collect()
}

/// v(S): max flow using only the edges of `coalition` at their reports.
pub fn coalition_value(net: &FlowNetwork, reports: &[Rational], coalition: Coalition) -> Rational {
    if coalition.is_empty() {
        return zero();
    }
    max_flow_value(net, &restrict(reports, coalition))
}

/// F_ij(x, y): capacities of `i` and `j` set to `x` and `y`, others from `rest`.
pub fn two_parameter_flow(
    net: &FlowNetwork,
    i: usize,
    j: usize,
    x: &Rational,
    y: &Rational,
    rest: &[Rational],
) -> Rational {
    assert_ne!(i, j, "two_parameter_flow needs distinct edges");
    let mut caps = rest.to_vec();
    caps[i] = x.clone();
    caps[j] = y.clone();
    max_flow_value(net, &caps)
}

/// Checks capacity and conservation constraints of a witness flow exactly.
pub fn is_feasible_flow(net: &FlowNetwork, caps: &[Rational], flows: &[Rational]) -> bool {
    let capacity_ok = flows
        .iter()
        .zip(caps)
        .all(|(f, c)| !f.is_negative() && f <= c);
    let conservation_ok = (0..net.node_count())
        .filter(|&v| v != net.source() && v != net.sink())
        .all(|v| {
            let inflow: Rational = net.in_edges(v).iter().fold(zero(), |a, &k| a + &flows[k]);
            let outflow: Rational = net.out_edges(v).iter().fold(zero(), |a, &k| a + &flows[k]);
            (inflow - outflow).is_zero()
        });
    capacity_ok && conservation_ok
}
