//! Minimal s-t cuts, the minimum cut nearest the source, critical values and
//! the independent / inclusive classification of edge pairs.
//!
//! Every minimal cut of an acyclic graph is `δ⁺(X)` for `X` the set of nodes
//! still reachable from `s` once the cut is removed, so enumerating node sets
//! `X ∋ s, X ∌ t`, collecting the crossing edges and keeping the
//! inclusion-minimal ones yields exactly the minimal cuts. The cost is
//! exponential in the node count; a guard keeps it at desk scale.

use std::collections::VecDeque;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{FlowError, Result};
use crate::exec::Execution;
use crate::flow::{max_flow, max_flow_value};
use crate::limits::{guard, Limits};
use crate::network::{edges_on_paths, FlowNetwork};
use crate::rational::{format_rational, int, one, serde_str, sum, zero, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cut {
    /// Edge indices in ascending order.
    pub edges: Vec<usize>,
    #[serde(with = "serde_str")]
    pub capacity: Rational,
}

impl Cut {
    pub fn contains(&self, k: usize) -> bool {
        self.edges.binary_search(&k).is_ok()
    }

    pub fn mask(&self) -> u64 {
        self.edges.iter().fold(0, |m, &k| m | 1u64 << k)
    }

    /// Edge ids in lexicographic order.
    pub fn ids(&self, net: &FlowNetwork) -> Vec<String> {
        let mut ids: Vec<String> = self.edges.iter().map(|&k| net.edge(k).id.clone()).collect();
        ids.sort();
        ids
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinimalCutFamily {
    /// Sorted lexicographically by the cuts' sorted edge-id lists.
    pub cuts: Vec<Cut>,
    /// Max-flow value of the graph the family was computed on.
    #[serde(with = "serde_str")]
    pub remaining_flow_value: Rational,
}

impl MinimalCutFamily {
    pub fn len(&self) -> usize {
        self.cuts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cuts.is_empty()
    }

    pub fn containing(&self, k: usize) -> impl Iterator<Item = &Cut> {
        self.cuts.iter().filter(move |c| c.contains(k))
    }

    pub fn min_capacity(&self) -> Option<&Rational> {
        self.cuts.iter().map(|c| &c.capacity).min()
    }

    pub fn masks(&self) -> Vec<u64> {
        self.cuts.iter().map(Cut::mask).collect()
    }
}

/// Reports with every s-t edge set to zero (the "remaining graph").
pub fn strip_source_sink_edges(net: &FlowNetwork, reports: &[Rational]) -> Vec<Rational> {
    reports
        .iter()
        .enumerate()
        .map(|(k, r)| {
            if net.is_source_sink_edge(k) {
                zero()
            } else {
                r.clone()
            }
        })
        .collect()
}

/// Does removing the edges in `removed` (plus all zero-capacity edges) separate s from t?
pub fn is_cut(net: &FlowNetwork, caps: &[Rational], removed: u64) -> bool {
    let (s, t) = (net.source(), net.sink());
    let mut seen = vec![false; net.node_count()];
    seen[s] = true;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        for &k in net.out_edges(u) {
            if removed >> k & 1 == 1 || !caps[k].is_positive() {
                continue;
            }
            let v = net.edge(k).head;
            if v == t {
                return false;
            }
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    true
}

fn build_family(net: &FlowNetwork, caps: &[Rational], mut masks: Vec<u64>) -> MinimalCutFamily {
    let mut cuts: Vec<Cut> = masks
        .drain(..)
        .map(|mask| {
            let edges: Vec<usize> = (0..net.edge_count())
                .filter(|&k| mask >> k & 1 == 1)
                .collect();
            let capacity = sum(edges.iter().map(|&k| &caps[k]));
            Cut { edges, capacity }
        })
        .collect();
    cuts.sort_by_cached_key(|c| c.ids(net));
    MinimalCutFamily {
        cuts,
        remaining_flow_value: max_flow_value(net, caps),
    }
}

/// Minimal cuts among the edges with positive capacity in `caps` (no s-t stripping).
pub fn minimal_cuts_with(
    net: &FlowNetwork,
    caps: &[Rational],
    exec: Execution,
) -> Result<MinimalCutFamily> {
    net.check_reports(caps)?;
    guard("cut enumeration edges", net.edge_count(), 63)?;
    let (s, t) = (net.source(), net.sink());
    if is_cut(net, caps, 0) {
        return Ok(build_family(net, caps, Vec::new()));
    }
    let on_path = edges_on_paths(net, |k| caps[k].is_positive());
    let mut relevant = vec![false; net.node_count()];
    for k in (0..net.edge_count()).filter(|&k| on_path[k]) {
        relevant[net.edge(k).tail] = true;
        relevant[net.edge(k).head] = true;
    }
    let free: Vec<usize> = (0..net.node_count())
        .filter(|&v| relevant[v] && v != s && v != t)
        .collect();
    guard(
        "cut enumeration nodes",
        free.len(),
        Limits::from_env().cut_nodes,
    )?;

    let path_edges: Vec<usize> = (0..net.edge_count()).filter(|&k| on_path[k]).collect();
    let candidates = exec.map_range(1usize << free.len(), |subset| {
        let mut inside = vec![false; net.node_count()];
        inside[s] = true;
        for (bit, &v) in free.iter().enumerate() {
            inside[v] = subset >> bit & 1 == 1;
        }
        let mut mask = 0u64;
        for &k in &path_edges {
            let e = net.edge(k);
            if inside[e.tail] && !inside[e.head] {
                mask |= 1u64 << k;
            }
        }
        mask
    });
    let mut candidates = candidates;
    candidates.sort_unstable();
    candidates.dedup();
    let minimal = exec.map_slice(&candidates, |&mask| {
        let is_minimal = (0..64)
            .filter(|&k| mask >> k & 1 == 1)
            .all(|k| !is_cut(net, caps, mask & !(1u64 << k)));
        is_minimal.then_some(mask)
    });
    Ok(build_family(
        net,
        caps,
        minimal.into_iter().flatten().collect(),
    ))
}

/// Minimal cuts of the graph left after removing s-t edges and zero reports.
pub fn enumerate_minimal_cuts(net: &FlowNetwork, reports: &[Rational]) -> Result<MinimalCutFamily> {
    enumerate_minimal_cuts_with(net, reports, Execution::default())
}

pub fn enumerate_minimal_cuts_with(
    net: &FlowNetwork,
    reports: &[Rational],
    exec: Execution,
) -> Result<MinimalCutFamily> {
    net.check_reports(reports)?;
    minimal_cuts_with(net, &strip_source_sink_edges(net, reports), exec)
}

/// Oracle: test every subset of positive-report edges for being a cut and
/// keep the inclusion-minimal ones. Does not strip s-t edges.
pub fn minimal_cuts_bruteforce(
    net: &FlowNetwork,
    reports: &[Rational],
) -> Result<MinimalCutFamily> {
    net.check_reports(reports)?;
    let active: Vec<usize> = (0..net.edge_count())
        .filter(|&k| reports[k].is_positive())
        .collect();
    guard(
        "brute-force cut edges",
        active.len(),
        Limits::from_env().subset_edges,
    )?;
    let expand = |sub: usize| -> u64 {
        active
            .iter()
            .enumerate()
            .filter(|(bit, _)| sub >> bit & 1 == 1)
            .fold(0u64, |m, (_, &k)| m | 1u64 << k)
    };
    let count = 1usize << active.len();
    let cut_table: Vec<bool> = (0..count)
        .map(|sub| is_cut(net, reports, expand(sub)))
        .collect();
    if cut_table[0] {
        return Ok(build_family(net, reports, Vec::new()));
    }
    let masks = (0..count)
        .filter(|&sub| {
            cut_table[sub]
                && (0..active.len()).all(|bit| sub >> bit & 1 == 0 || !cut_table[sub & !(1 << bit)])
        })
        .map(expand)
        .collect();
    Ok(build_family(net, reports, masks))
}

/// Edge indices of `δ⁺(X)`, `X` the residual source side of a maximum flow.
pub fn min_cut_nearest_source(net: &FlowNetwork, reports: &[Rational]) -> Vec<usize> {
    let flow = max_flow(net, reports);
    (0..net.edge_count())
        .filter(|&k| {
            let e = net.edge(k);
            reports[k].is_positive() && flow.source_side[e.tail] && !flow.source_side[e.head]
        })
        .collect()
}

/// Capacity beyond which raising an edge no longer raises the max flow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CriticalValue {
    Finite(Rational),
    Unbounded,
}

impl CriticalValue {
    /// `capacity <= x*`, with `Unbounded` above everything.
    pub fn admits(&self, capacity: &Rational) -> bool {
        match self {
            CriticalValue::Finite(x) => capacity <= x,
            CriticalValue::Unbounded => true,
        }
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            CriticalValue::Finite(x) => Some(x),
            CriticalValue::Unbounded => None,
        }
    }
}

impl std::fmt::Display for CriticalValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CriticalValue::Finite(x) => f.write_str(&format_rational(x)),
            CriticalValue::Unbounded => f.write_str("unbounded"),
        }
    }
}

impl Serialize for CriticalValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Finite stand-in for an infinite capacity: exceeds every bottleneck.
pub fn capacity_proxy(reports: &[Rational]) -> Rational {
    one() + sum(reports)
}

/// `F_e(+∞) − F_e(0)`, with `+∞` replaced by [`capacity_proxy`].
pub fn critical_value(net: &FlowNetwork, reports: &[Rational], e: usize) -> CriticalValue {
    let proxy = capacity_proxy(reports);
    let mut caps = reports.to_vec();
    caps[e] = zero();
    let at_zero = max_flow_value(net, &caps);
    caps[e] = proxy.clone();
    let at_proxy = max_flow_value(net, &caps);
    caps[e] = proxy + int(1);
    let beyond = max_flow_value(net, &caps);
    if beyond != at_proxy {
        CriticalValue::Unbounded
    } else {
        CriticalValue::Finite(at_proxy - at_zero)
    }
}

pub fn is_essential(net: &FlowNetwork, reports: &[Rational], e: usize) -> bool {
    critical_value(net, reports, e).admits(&reports[e])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PairStructure {
    Independent,
    Inclusive,
    Neither,
}

/// Classifies the ordered pair `(e1, e2)` against the current reports.
///
/// Inclusiveness condition (ii) compares each cut's capacity without `e1`
/// to the max flow of the remaining graph with `e1` deleted, so the answer
/// is report-relative.
pub fn classify_pair_structure(
    net: &FlowNetwork,
    reports: &[Rational],
    e1: usize,
    e2: usize,
) -> Result<PairStructure> {
    if e1 == e2 {
        return Err(FlowError::Precondition(
            "pair needs two distinct edges".into(),
        ));
    }
    for k in [e1, e2] {
        if net.is_source_sink_edge(k) {
            return Err(FlowError::SourceSinkEdge(net.edge(k).id.clone()));
        }
    }
    let family = enumerate_minimal_cuts(net, reports)?;
    Ok(classify_in_family(net, reports, &family, e1, e2))
}

pub(crate) fn classify_in_family(
    net: &FlowNetwork,
    reports: &[Rational],
    family: &MinimalCutFamily,
    e1: usize,
    e2: usize,
) -> PairStructure {
    if !family.cuts.iter().any(|c| c.contains(e1) && c.contains(e2)) {
        return PairStructure::Independent;
    }
    let mut without_e1 = strip_source_sink_edges(net, reports);
    without_e1[e1] = zero();
    let flow_without_e1 = max_flow_value(net, &without_e1);
    let inclusive = family
        .containing(e2)
        .all(|cut| cut.contains(e1) && (&cut.capacity - &reports[e1] - &flow_without_e1).is_zero());
    if inclusive {
        PairStructure::Inclusive
    } else {
        PairStructure::Neither
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::ratio;

    fn ids(net: &FlowNetwork, family: &MinimalCutFamily) -> Vec<Vec<String>> {
        family.cuts.iter().map(|c| c.ids(net)).collect()
    }

    #[test]
    fn diamond_has_two_minimal_cuts() {
        let net = fixtures::fig1();
        let caps = net.capacities();
        let family = enumerate_minimal_cuts(&net, &caps).unwrap();
        assert_eq!(ids(&net, &family), vec![vec!["e1", "e2"], vec!["e3", "e4"]]);
        assert_eq!(family.remaining_flow_value, int(2));
        assert_eq!(family.min_capacity(), Some(&int(2)));
        assert_eq!(minimal_cuts_bruteforce(&net, &caps).unwrap(), family);
    }

    #[test]
    fn path_cuts_are_singletons() {
        let net = FlowNetwork::from_edges(
            "s",
            "t",
            &[("a", "s", "A", int(1)), ("b", "A", "t", int(2))],
        )
        .unwrap();
        let family = enumerate_minimal_cuts(&net, &net.capacities()).unwrap();
        assert_eq!(ids(&net, &family), vec![vec!["a"], vec!["b"]]);
    }

    #[test]
    fn source_sink_edge_is_stripped() {
        let net = fixtures::fig5();
        let family = enumerate_minimal_cuts(&net, &net.capacities()).unwrap();
        assert_eq!(ids(&net, &family), vec![vec!["e1"], vec!["e2"]]);
        assert_eq!(family.remaining_flow_value, int(1));
    }

    #[test]
    fn bruteforce_on_raw_single_edge_and_empty_graph() {
        let net = FlowNetwork::from_edges("s", "t", &[("e", "s", "t", int(1))]).unwrap();
        let family = minimal_cuts_bruteforce(&net, &[int(1)]).unwrap();
        assert_eq!(ids(&net, &family), vec![vec!["e"]]);
        // all reports zero: nothing left to cut
        let family = minimal_cuts_bruteforce(&net, &[zero()]).unwrap();
        assert!(family.is_empty());
        let family = enumerate_minimal_cuts(&net, &[int(1)]).unwrap();
        assert!(family.is_empty());
        assert_eq!(family.remaining_flow_value, zero());
    }

    #[test]
    fn nearest_source_cut() {
        let net = fixtures::fig1();
        assert_eq!(
            min_cut_nearest_source(&net, &[int(2), int(1), int(1), int(1)]),
            vec![2, 3]
        );
        assert_eq!(
            min_cut_nearest_source(&net, &[int(1), int(1), int(1), int(1)]),
            vec![0, 1]
        );
        let single = FlowNetwork::from_edges("s", "t", &[("e", "s", "t", int(4))]).unwrap();
        assert_eq!(min_cut_nearest_source(&single, &[int(4)]), vec![0]);
    }

    #[test]
    fn critical_values() {
        let net = fixtures::fig4();
        let reports = net.capacities();
        assert_eq!(
            critical_value(&net, &reports, 0),
            CriticalValue::Finite(ratio(3, 2))
        );
        assert!(is_essential(&net, &reports, 0));

        let single = FlowNetwork::from_edges("s", "t", &[("e", "s", "t", int(1))]).unwrap();
        assert_eq!(
            critical_value(&single, &[int(1)], 0),
            CriticalValue::Unbounded
        );
        assert!(is_essential(&single, &[int(1)], 0));

        let path = FlowNetwork::from_edges(
            "s",
            "t",
            &[("a", "s", "A", int(1)), ("b", "A", "t", int(2))],
        )
        .unwrap();
        assert_eq!(
            critical_value(&path, &path.capacities(), 0),
            CriticalValue::Finite(int(2))
        );

        let fig5 = fixtures::fig5();
        let caps = fig5.capacities();
        assert_eq!(
            critical_value(&fig5, &caps, 1),
            CriticalValue::Finite(int(1))
        );
        assert!(!is_essential(&fig5, &caps, 1));
    }

    #[test]
    fn pair_structures() {
        let net = fixtures::fig1();
        let caps = net.capacities();
        assert_eq!(
            classify_pair_structure(&net, &caps, 0, 2).unwrap(),
            PairStructure::Independent
        );

        let half = [ratio(1, 2), ratio(1, 2), int(1), int(1)];
        assert_eq!(
            classify_pair_structure(&net, &half, 0, 1).unwrap(),
            PairStructure::Inclusive
        );

        let w = fixtures::neither();
        let caps = w.capacities();
        // cuts: {e1,e3} {e1,e4} {e2,e3,e5} {e2,e4}
        assert_eq!(
            classify_pair_structure(&w, &caps, 0, 3).unwrap(),
            PairStructure::Neither
        );
        assert_eq!(
            classify_pair_structure(&w, &caps, 0, 1).unwrap(),
            PairStructure::Independent
        );

        // e0 parallel to e1 into A; e2 alone out of A
        let g = FlowNetwork::from_edges(
            "s",
            "t",
            &[
                ("e0", "s", "A", int(1)),
                ("e1", "s", "A", int(1)),
                ("e2", "A", "t", int(1)),
            ],
        )
        .unwrap();
        assert_eq!(
            classify_pair_structure(&g, &g.capacities(), 1, 2).unwrap(),
            PairStructure::Independent
        );

        let fig5 = fixtures::fig5();
        let err = classify_pair_structure(&fig5, &fig5.capacities(), 0, 2).unwrap_err();
        assert_eq!(err, FlowError::SourceSinkEdge("e3".into()));
    }

    #[test]
    fn neither_witness_cut_family() {
        let w = fixtures::neither();
        let family = enumerate_minimal_cuts(&w, &w.capacities()).unwrap();
        assert_eq!(
            ids(&w, &family),
            vec![
                vec!["e1", "e3"],
                vec!["e1", "e4"],
                vec!["e2", "e3", "e5"],
                vec!["e2", "e4"]
            ]
        );
    }

    #[test]
    fn execution_modes_agree() {
        let w = fixtures::neither();
        let caps = w.capacities();
        assert_eq!(
            enumerate_minimal_cuts_with(&w, &caps, Execution::Sequential).unwrap(),
            enumerate_minimal_cuts_with(&w, &caps, Execution::Parallel).unwrap()
        );
    }
}
