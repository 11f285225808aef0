//! The cooperative game induced by a network and a report vector.

use num_traits::Signed;

use crate::error::{FlowError, Result};
use crate::exec::Execution;
use crate::flow::coalition_value;
use crate::limits::{guard, Limits};
use crate::network::FlowNetwork;
use crate::rational::{format_rational, Rational};

/// A set of players (edges) as a bit mask over the network's edge order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Coalition(pub u64);

impl Coalition {
    pub const EMPTY: Coalition = Coalition(0);

    pub fn full(n: usize) -> Coalition {
        assert!(n < 64, "coalitions are limited to 63 players");
        Coalition((1u64 << n) - 1)
    }

    pub fn singleton(k: usize) -> Coalition {
        Coalition(1u64 << k)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Coalition {
        Coalition(indices.into_iter().fold(0u64, |m, k| m | (1u64 << k)))
    }

    pub fn contains(self, k: usize) -> bool {
        self.0 >> k & 1 == 1
    }

    pub fn with(self, k: usize) -> Coalition {
        Coalition(self.0 | (1u64 << k))
    }

    pub fn without(self, k: usize) -> Coalition {
        Coalition(self.0 & !(1u64 << k))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(self, other: Coalition) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn members(self) -> impl Iterator<Item = usize> {
        let mask = self.0;
        (0..64).filter(move |&k| mask >> k & 1 == 1)
    }

    pub fn ids(self, net: &FlowNetwork) -> Vec<String> {
        self.members().map(|k| net.edge(k).id.clone()).collect()
    }
}

/// Serialized as the list of member edge indices.
impl serde::Serialize for Coalition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.members())
    }
}

/// Memo table of v̂(S) for every coalition, filled eagerly then read-only.
#[derive(Debug, Clone)]
pub struct CharacteristicCache {
    players: usize,
    values: Vec<Rational>,
}

impl CharacteristicCache {
    pub fn build(net: &FlowNetwork, reports: &[Rational]) -> Result<Self> {
        Self::build_with(net, reports, Execution::default())
    }

    pub fn build_with(net: &FlowNetwork, reports: &[Rational], exec: Execution) -> Result<Self> {
        net.check_reports(reports)?;
        let n = net.edge_count();
        guard("coalition table edges", n, Limits::from_env().subset_edges)?;
        let values = exec.map_range(1usize << n, |mask| {
            coalition_value(net, reports, Coalition(mask as u64))
        });
        Ok(CharacteristicCache { players: n, values })
    }

    pub fn players(&self) -> usize {
        self.players
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, coalition: Coalition) -> &Rational {
        &self.values[coalition.0 as usize]
    }

    pub fn grand_value(&self) -> &Rational {
        self.value(Coalition::full(self.players))
    }
}

/// True capacities together with the reported ones, `0 <= report <= truth`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportProfile {
    truth: Vec<Rational>,
    reported: Vec<Rational>,
}

impl ReportProfile {
    pub fn truthful(net: &FlowNetwork) -> Self {
        let truth = net.capacities();
        ReportProfile {
            reported: truth.clone(),
            truth,
        }
    }

    pub fn new(net: &FlowNetwork, reported: Vec<Rational>) -> Result<Self> {
        net.check_reports(&reported)?;
        let truth = net.capacities();
        for (k, (r, c)) in reported.iter().zip(&truth).enumerate() {
            if r.is_negative() || r > c {
                return Err(FlowError::ReportOutOfRange {
                    edge: net.edge(k).id.clone(),
                    report: format_rational(r),
                    truth: format_rational(c),
                });
            }
        }
        Ok(ReportProfile { truth, reported })
    }

    /// Applies `(edge id, report)` overrides on top of truthful reports.
    pub fn with_overrides(net: &FlowNetwork, overrides: &[(String, Rational)]) -> Result<Self> {
        let mut reported = net.capacities();
        for (id, value) in overrides {
            let k = net.require_edge(id)?;
            reported[k] = value.clone();
        }
        Self::new(net, reported)
    }

    pub fn truth(&self) -> &[Rational] {
        &self.truth
    }

    pub fn reported(&self) -> &[Rational] {
        &self.reported
    }
}
