//! Seeded generator of small layered networks for fuzzing the audits.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{FlowError, Result};
use crate::network::{FlowNetwork, NetworkBuilder};
use crate::rational::ratio;

/// Capacities are `k / denominator` with `k` uniform in `1..=max_numerator`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapLattice {
    pub denominator: i64,
    pub max_numerator: i64,
}

impl Default for CapLattice {
    fn default() -> Self {
        CapLattice {
            denominator: 4,
            max_numerator: 8,
        }
    }
}

/// A DAG from `s` through internal nodes `v1..vk` to `t`, nodes in
/// topological order. Every internal node gets one edge from an earlier
/// node and one to a later node, so every edge lies on an s-t path; the
/// remaining budget goes to random forward edges (parallel edges allowed).
pub fn random_network(
    seed: u64,
    max_nodes: usize,
    max_edges: usize,
    lattice: CapLattice,
) -> Result<FlowNetwork> {
    if max_nodes < 2 || max_edges < 1 || lattice.denominator < 1 || lattice.max_numerator < 1 {
        return Err(FlowError::Precondition(
            "random networks need at least 2 nodes, 1 edge and a positive lattice".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let most_internal = (max_nodes - 2).min(max_edges / 2);
    let internal = rng.gen_range(0..=most_internal);
    let n = internal + 2;
    let name = |v: usize| match v {
        0 => "s".to_string(),
        v if v == n - 1 => "t".to_string(),
        v => format!("v{v}"),
    };

    let mut arcs: Vec<(usize, usize)> = Vec::new();
    if internal == 0 {
        arcs.push((0, 1));
    }
    for v in 1..=internal {
        arcs.push((rng.gen_range(0..v), v));
        arcs.push((v, rng.gen_range(v + 1..n)));
    }
    let extra = rng.gen_range(0..=max_edges - arcs.len());
    for _ in 0..extra {
        let a = rng.gen_range(0..n - 1);
        let b = rng.gen_range(a + 1..n);
        arcs.push((a, b));
    }

    let mut builder = NetworkBuilder::default();
    for v in 0..n {
        builder.node(&name(v));
    }
    for (k, (a, b)) in arcs.into_iter().enumerate() {
        let cap = ratio(
            rng.gen_range(1..=lattice.max_numerator),
            lattice.denominator,
        );
        builder.edge(&format!("e{}", k + 1), &name(a), &name(b), cap)?;
    }
    builder.source("s").sink("t");
    builder.build()
}

/// Random reports `0 < r <= c`: each capacity scaled by `k / 4`, `k` in `1..=4`.
pub fn random_reports(rng: &mut impl Rng, net: &FlowNetwork) -> Vec<crate::Rational> {
    net.capacities()
        .into_iter()
        .map(|c| c * ratio(rng.gen_range(1..=4), 4))
        .collect()
}
