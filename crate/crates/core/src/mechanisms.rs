//! Payoff mechanisms: Shapley value, the minimal-cut (MC) mechanism, and a
//! core-selecting mechanism, plus exact core membership and core bounds.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cuts::{
    enumerate_minimal_cuts_with, min_cut_nearest_source, minimal_cuts_with, MinimalCutFamily,
};
use crate::error::{FlowError, Result};
use crate::exec::Execution;
use crate::flow::{coalition_value, max_flow_value};
use crate::game::{CharacteristicCache, Coalition};
use crate::limits::{guard, Limits};
use crate::network::FlowNetwork;
use crate::rational::{one, serde_str, serde_vec, sum, zero, Rational};
use crate::simplex::{maximize, LpOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mechanism {
    Shapley,
    Mc,
    /// MC without paying s-t edges up front. Not individually rational;
    /// kept only as a diagnostic and left out of [`Mechanism::REGISTRY`].
    McNoStepOne,
    CoreNearestCut,
}

impl Mechanism {
    pub const REGISTRY: [Mechanism; 3] =
        [Mechanism::Shapley, Mechanism::Mc, Mechanism::CoreNearestCut];

    pub fn label(self) -> &'static str {
        match self {
            Mechanism::Shapley => "shapley",
            Mechanism::Mc => "mc",
            Mechanism::McNoStepOne => "mc-no-step-one",
            Mechanism::CoreNearestCut => "core-nearest-cut",
        }
    }

    pub fn allocate(self, net: &FlowNetwork, reports: &[Rational]) -> Result<Allocation> {
        self.allocate_with(net, reports, Execution::default())
    }

    pub fn allocate_with(
        self,
        net: &FlowNetwork,
        reports: &[Rational],
        exec: Execution,
    ) -> Result<Allocation> {
        match self {
            Mechanism::Shapley => shapley_with(net, reports, exec),
            Mechanism::Mc => mc_allocate_with(net, reports, exec),
            Mechanism::McNoStepOne => mc_no_step_one_with(net, reports, exec),
            Mechanism::CoreNearestCut => core_select_nearest_cut(net, reports),
        }
    }
}

impl fmt::Display for Mechanism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Mechanism {
    type Err = FlowError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "shapley" => Ok(Mechanism::Shapley),
            "mc" => Ok(Mechanism::Mc),
            "mc-no-step-one" => Ok(Mechanism::McNoStepOne),
            "core" | "core-nearest-cut" => Ok(Mechanism::CoreNearestCut),
            other => Err(FlowError::Precondition(format!(
                "unknown mechanism `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Allocation {
    pub mechanism: Mechanism,
    #[serde(serialize_with = "serde_vec::serialize")]
    pub payoffs: Vec<Rational>,
    #[serde(with = "serde_str")]
    pub total: Rational,
}

impl Allocation {
    pub fn new(mechanism: Mechanism, payoffs: Vec<Rational>) -> Self {
        let total = sum(&payoffs);
        Allocation {
            mechanism,
            payoffs,
            total,
        }
    }

    pub fn payoff(&self, k: usize) -> &Rational {
        &self.payoffs[k]
    }
}

fn factorials(n: usize) -> Vec<BigInt> {
    let mut f = vec![BigInt::one()];
    for k in 1..=n {
        let next = &f[k - 1] * BigInt::from(k);
        f.push(next);
    }
    f
}

pub fn shapley(net: &FlowNetwork, reports: &[Rational]) -> Result<Allocation> {
    shapley_with(net, reports, Execution::default())
}

/// `Sh_i = Σ_{S ∌ i} |S|! (n-|S|-1)! / n! · (v(S ∪ i) − v(S))`.
pub fn shapley_with(
    net: &FlowNetwork,
    reports: &[Rational],
    exec: Execution,
) -> Result<Allocation> {
    let cache = CharacteristicCache::build_with(net, reports, exec)?;
    Ok(shapley_from_cache(&cache, exec))
}

pub fn shapley_from_cache(cache: &CharacteristicCache, exec: Execution) -> Allocation {
    let n = cache.players();
    if n == 0 {
        return Allocation::new(Mechanism::Shapley, Vec::new());
    }
    let fact = factorials(n);
    let weights: Vec<Rational> = (0..n)
        .map(|s| Rational::new(&fact[s] * &fact[n - s - 1], fact[n].clone()))
        .collect();
    let payoffs = exec.map_range(n, |i| {
        let bit = 1u64 << i;
        let mut by_size = vec![zero(); n];
        for mask in 0..(1u64 << n) {
            if mask & bit != 0 {
                continue;
            }
            let gain = cache.value(Coalition(mask | bit)) - cache.value(Coalition(mask));
            if !gain.is_zero() {
                by_size[mask.count_ones() as usize] += gain;
            }
        }
        by_size.iter().zip(&weights).map(|(g, w)| g * w).sum()
    });
    Allocation::new(Mechanism::Shapley, payoffs)
}

/// Oracle: average marginal contribution over all `n!` arrival orders,
/// evaluating coalitions through its own memo rather than the shared cache.
pub fn shapley_permutation_oracle(net: &FlowNetwork, reports: &[Rational]) -> Result<Allocation> {
    net.check_reports(reports)?;
    let n = net.edge_count();
    guard(
        "permutation oracle edges",
        n,
        Limits::from_env().permutation_edges,
    )?;
    let mut memo: HashMap<u64, Rational> = HashMap::new();
    let mut value = |mask: u64| -> Rational {
        memo.entry(mask)
            .or_insert_with(|| coalition_value(net, reports, Coalition(mask)))
            .clone()
    };
    let mut totals = vec![zero(); n];
    let mut order: Vec<usize> = (0..n).collect();
    let mut visit = |order: &[usize]| {
        let mut mask = 0u64;
        let mut before = zero();
        for &i in order {
            mask |= 1u64 << i;
            let after = value(mask);
            totals[i] += &after - &before;
            before = after;
        }
    };
    // Heap's algorithm, iterative form
    let mut c = vec![0usize; n];
    visit(&order);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                order.swap(0, i);
            } else {
                order.swap(c[i], i);
            }
            visit(&order);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    let count = Rational::from_integer(factorials(n)[n].clone());
    Ok(Allocation::new(
        Mechanism::Shapley,
        totals.into_iter().map(|t| t / &count).collect(),
    ))
}

/// Splits `F̂ / |𝐌|` to every cut and then within the cut by report share.
fn distribute(family: &MinimalCutFamily, reports: &[Rational], payoffs: &mut [Rational]) {
    if family.is_empty() {
        return;
    }
    let per_cut = &family.remaining_flow_value / Rational::from_integer(BigInt::from(family.len()));
    for cut in &family.cuts {
        let scale = &per_cut / &cut.capacity;
        for &k in &cut.edges {
            payoffs[k] += &reports[k] * &scale;
        }
    }
}

pub fn mc_allocate(net: &FlowNetwork, reports: &[Rational]) -> Result<Allocation> {
    mc_allocate_with(net, reports, Execution::default())
}

pub fn mc_allocate_with(
    net: &FlowNetwork,
    reports: &[Rational],
    exec: Execution,
) -> Result<Allocation> {
    let family = enumerate_minimal_cuts_with(net, reports, exec)?;
    let mut payoffs: Vec<Rational> = (0..net.edge_count())
        .map(|k| {
            if net.is_source_sink_edge(k) {
                reports[k].clone()
            } else {
                zero()
            }
        })
        .collect();
    distribute(&family, reports, &mut payoffs);
    Ok(Allocation::new(Mechanism::Mc, payoffs))
}

pub fn mc_no_step_one(net: &FlowNetwork, reports: &[Rational]) -> Result<Allocation> {
    mc_no_step_one_with(net, reports, Execution::default())
}

pub fn mc_no_step_one_with(
    net: &FlowNetwork,
    reports: &[Rational],
    exec: Execution,
) -> Result<Allocation> {
    let family = minimal_cuts_with(net, reports, exec)?;
    let mut payoffs = vec![zero(); net.edge_count()];
    distribute(&family, reports, &mut payoffs);
    Ok(Allocation::new(Mechanism::McNoStepOne, payoffs))
}

/// Pays every edge of the minimum cut nearest the source its report.
pub fn core_select_nearest_cut(net: &FlowNetwork, reports: &[Rational]) -> Result<Allocation> {
    net.check_reports(reports)?;
    let mut payoffs = vec![zero(); net.edge_count()];
    for k in min_cut_nearest_source(net, reports) {
        payoffs[k] = reports[k].clone();
    }
    Ok(Allocation::new(Mechanism::CoreNearestCut, payoffs))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum CoreVerdict {
    InCore,
    Inefficient {
        #[serde(with = "serde_str")]
        allocated: Rational,
        #[serde(with = "serde_str")]
        value: Rational,
    },
    /// The violated coalition with the smallest bit mask.
    Violation {
        coalition: Coalition,
        #[serde(with = "serde_str")]
        value: Rational,
        #[serde(with = "serde_str")]
        allocated: Rational,
    },
}

pub fn core_check(net: &FlowNetwork, reports: &[Rational], x: &[Rational]) -> Result<CoreVerdict> {
    net.check_reports(x)?;
    let cache = CharacteristicCache::build(net, reports)?;
    Ok(core_check_cached(&cache, x))
}

pub fn core_check_cached(cache: &CharacteristicCache, x: &[Rational]) -> CoreVerdict {
    let n = cache.players();
    let grand = cache.grand_value();
    let allocated = sum(x);
    if &allocated != grand {
        return CoreVerdict::Inefficient {
            allocated,
            value: grand.clone(),
        };
    }
    let full = Coalition::full(n).0;
    for mask in 1..full {
        let coalition = Coalition(mask);
        let value = cache.value(coalition);
        let share = sum(coalition.members().map(|k| &x[k]));
        if &share < value {
            return CoreVerdict::Violation {
                coalition,
                value: value.clone(),
                allocated: share,
            };
        }
    }
    CoreVerdict::InCore
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeCoreRange {
    #[serde(with = "serde_str")]
    pub min: Rational,
    #[serde(with = "serde_str")]
    pub max: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoreBounds {
    pub feasible: bool,
    pub ranges: Vec<EdgeCoreRange>,
}

/// The LP `min wᵀx` over the core, solved through its dual, which starts
/// feasible at the origin because `w >= 0`:
///
/// `max Σ v(S) y_S + v(N)(z⁺ − z⁻)  s.t.  Σ_{S ∋ i} y_S + z⁺ − z⁻ <= w_i,  y, z >= 0`.
///
/// Returns the optimum and a minimizing core point, or `None` if the core is empty.
pub fn core_minimize(
    cache: &CharacteristicCache,
    weights: &[Rational],
) -> Result<Option<(Rational, Vec<Rational>)>> {
    let n = cache.players();
    if weights.len() != n || weights.iter().any(Signed::is_negative) {
        return Err(FlowError::Precondition(
            "core weights must be non-negative, one per edge".into(),
        ));
    }
    let full = Coalition::full(n).0;
    // coalitions with v(S) = 0 have zero objective and only tighten nothing
    let columns: Vec<u64> = (1..full)
        .filter(|&m| cache.value(Coalition(m)).is_positive())
        .collect();
    let grand = cache.grand_value().clone();
    let mut a: Vec<Vec<Rational>> = vec![Vec::with_capacity(columns.len() + 2); n];
    for (i, row) in a.iter_mut().enumerate() {
        row.extend(
            columns
                .iter()
                .map(|&m| if m >> i & 1 == 1 { one() } else { zero() }),
        );
        row.push(one());
        row.push(-one());
    }
    let mut c: Vec<Rational> = columns
        .iter()
        .map(|&m| cache.value(Coalition(m)).clone())
        .collect();
    c.push(grand.clone());
    c.push(-grand);
    match maximize(&a, weights, &c)? {
        LpOutcome::Optimal { value, dual, .. } => Ok(Some((value, dual))),
        LpOutcome::Unbounded => Ok(None),
    }
}

/// `(min, max)` of `x_e` over the core.
pub fn core_bounds(
    net: &FlowNetwork,
    reports: &[Rational],
    e: usize,
) -> Result<(Rational, Rational)> {
    net.check_reports(reports)?;
    guard(
        "core bounds edges",
        net.edge_count(),
        Limits::from_env().core_bounds_edges,
    )?;
    let cache = CharacteristicCache::build(net, reports)?;
    edge_bounds(&cache, e)?.ok_or_else(|| FlowError::Precondition("the core is empty".into()))
}

fn edge_bounds(cache: &CharacteristicCache, e: usize) -> Result<Option<(Rational, Rational)>> {
    let n = cache.players();
    let unit: Vec<Rational> = (0..n)
        .map(|k| if k == e { one() } else { zero() })
        .collect();
    let rest: Vec<Rational> = (0..n)
        .map(|k| if k == e { zero() } else { one() })
        .collect();
    let Some((lo, _)) = core_minimize(cache, &unit)? else {
        return Ok(None);
    };
    let Some((others, _)) = core_minimize(cache, &rest)? else {
        return Ok(None);
    };
    Ok(Some((lo, cache.grand_value() - others)))
}

pub fn core_bounds_all(net: &FlowNetwork, reports: &[Rational]) -> Result<CoreBounds> {
    core_bounds_all_with(net, reports, Execution::default())
}

pub fn core_bounds_all_with(
    net: &FlowNetwork,
    reports: &[Rational],
    exec: Execution,
) -> Result<CoreBounds> {
    net.check_reports(reports)?;
    guard(
        "core bounds edges",
        net.edge_count(),
        Limits::from_env().core_bounds_edges,
    )?;
    let cache = CharacteristicCache::build_with(net, reports, exec)?;
    let ranges = exec.map_range(net.edge_count(), |e| edge_bounds(&cache, e));
    let mut out = Vec::with_capacity(ranges.len());
    for r in ranges {
        match r? {
            Some((min, max)) => out.push(EdgeCoreRange { min, max }),
            None => {
                return Ok(CoreBounds {
                    feasible: false,
                    ranges: Vec::new(),
                })
            }
        }
    }
    Ok(CoreBounds {
        feasible: true,
        ranges: out,
    })
}

/// v̂(N) for a report vector, the efficiency target of every mechanism.
pub fn grand_value(net: &FlowNetwork, reports: &[Rational]) -> Rational {
    max_flow_value(net, reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::{int, ratio};

    fn q(values: &[(i64, i64)]) -> Vec<Rational> {
        values.iter().map(|&(n, d)| ratio(n, d)).collect()
    }

    #[test]
    fn shapley_fan_and_split_fan() {
        let a = fixtures::fig2a();
        let sh = shapley(&a, &a.capacities()).unwrap();
        assert_eq!(sh.payoffs[0], ratio(1, 30));
        assert_eq!(sh.total, int(1));
        let b = fixtures::fig2b();
        let sh = shapley(&b, &b.capacities()).unwrap();
        assert_eq!(sh.payoffs[0], ratio(1, 42));
        assert_eq!(sh.payoffs[1], ratio(1, 42));
    }

    #[test]
    fn shapley_parallel_and_merged() {
        let a = fixtures::fig3a();
        assert_eq!(
            shapley(&a, &a.capacities()).unwrap().payoffs,
            q(&[(1, 6), (1, 6), (2, 3)])
        );
        let b = fixtures::fig3b();
        assert_eq!(
            shapley(&b, &b.capacities()).unwrap().payoffs,
            q(&[(1, 2), (1, 2)])
        );
    }

    #[test]
    fn shapley_half_diamond() {
        let net = fixtures::fig4();
        let before = shapley(&net, &q(&[(1, 2), (1, 2), (1, 1), (1, 1)])).unwrap();
        let after = shapley(&net, &q(&[(3, 5), (1, 2), (1, 1), (1, 1)])).unwrap();
        assert_eq!(before.payoffs[1], ratio(1, 3));
        assert_eq!(after.payoffs[1], ratio(19, 60));
    }

    #[test]
    fn oracle_agrees_with_subset_formula() {
        for (_, net) in fixtures::all() {
            let caps = net.capacities();
            let fast = shapley_with(&net, &caps, Execution::Sequential).unwrap();
            assert_eq!(fast, shapley_permutation_oracle(&net, &caps).unwrap());
            assert_eq!(
                fast,
                shapley_with(&net, &caps, Execution::Parallel).unwrap()
            );
        }
        let single = FlowNetwork::from_edges("s", "t", &[("e", "s", "t", ratio(3, 7))]).unwrap();
        assert_eq!(
            shapley_permutation_oracle(&single, &[ratio(3, 7)])
                .unwrap()
                .payoffs,
            vec![ratio(3, 7)]
        );
        let unit = fixtures::fig9();
        assert_eq!(
            shapley_permutation_oracle(&unit, &unit.capacities())
                .unwrap()
                .payoffs,
            vec![ratio(1, 2); 4]
        );
    }

    #[test]
    fn mc_examples() {
        let fig5 = fixtures::fig5();
        assert_eq!(
            mc_allocate(&fig5, &fig5.capacities()).unwrap().payoffs,
            q(&[(1, 2), (1, 2), (1, 1)])
        );
        assert_eq!(
            mc_no_step_one(&fig5, &fig5.capacities()).unwrap().payoffs[2],
            ratio(5, 6)
        );

        let fig1 = fixtures::fig1();
        let mc = mc_allocate(&fig1, &fig1.capacities()).unwrap();
        assert_eq!(mc.payoffs, q(&[(2, 3), (1, 3), (1, 2), (1, 2)]));
        assert_eq!(mc.total, int(2));
        assert_eq!(
            mc_no_step_one(&fig1, &fig1.capacities()).unwrap().payoffs,
            mc.payoffs
        );

        let single = FlowNetwork::from_edges("s", "t", &[("e", "s", "t", ratio(5, 4))]).unwrap();
        assert_eq!(
            mc_allocate(&single, &[ratio(5, 4)]).unwrap().payoffs,
            vec![ratio(5, 4)]
        );
        assert_eq!(
            mc_no_step_one(&single, &[ratio(5, 4)]).unwrap().payoffs,
            vec![ratio(5, 4)]
        );
    }

    #[test]
    fn core_membership() {
        let fig1 = fixtures::fig1();
        let caps = fig1.capacities();
        assert_eq!(
            core_check(&fig1, &caps, &q(&[(0, 1), (0, 1), (1, 1), (1, 1)])).unwrap(),
            CoreVerdict::InCore
        );
        let mc = mc_allocate(&fig1, &caps).unwrap();
        assert!(matches!(
            core_check(&fig1, &caps, &mc.payoffs).unwrap(),
            CoreVerdict::Violation { .. }
        ));

        let fig9 = fixtures::fig9();
        let caps = fig9.capacities();
        assert_eq!(
            core_check(&fig9, &caps, &vec![ratio(1, 2); 4]).unwrap(),
            CoreVerdict::InCore
        );
        assert_eq!(
            core_check(&fig9, &caps, &[int(2), zero(), zero(), zero()]).unwrap(),
            CoreVerdict::Violation {
                coalition: Coalition::from_indices([1, 2]),
                value: int(1),
                allocated: zero()
            }
        );
        assert!(matches!(
            core_check(&fig9, &caps, &[int(1), zero(), zero(), zero()]).unwrap(),
            CoreVerdict::Inefficient { .. }
        ));
    }

    #[test]
    fn core_ranges() {
        let fig9 = fixtures::fig9();
        assert_eq!(
            core_bounds(&fig9, &fig9.capacities(), 0).unwrap(),
            (zero(), int(1))
        );
        let fig1 = fixtures::fig1();
        let all = core_bounds_all(&fig1, &fig1.capacities()).unwrap();
        assert!(all.feasible);
        let pinned: Vec<(Rational, Rational)> =
            all.ranges.into_iter().map(|r| (r.min, r.max)).collect();
        assert_eq!(
            pinned,
            vec![
                (zero(), zero()),
                (zero(), zero()),
                (int(1), int(1)),
                (int(1), int(1))
            ]
        );
        let single = FlowNetwork::from_edges("s", "t", &[("e", "s", "t", ratio(2, 3))]).unwrap();
        assert_eq!(
            core_bounds(&single, &[ratio(2, 3)], 0).unwrap(),
            (ratio(2, 3), ratio(2, 3))
        );
    }

    #[test]
    fn core_minimizer_is_a_core_point() {
        let net = fixtures::neither();
        let cache = CharacteristicCache::build(&net, &net.capacities()).unwrap();
        let w = q(&[(1, 1), (2, 1), (0, 1), (1, 3), (5, 1)]);
        let (value, x) = core_minimize(&cache, &w).unwrap().unwrap();
        assert_eq!(core_check_cached(&cache, &x), CoreVerdict::InCore);
        assert_eq!(
            value,
            x.iter().zip(&w).map(|(a, b)| a * b).sum::<Rational>()
        );
    }

    #[test]
    fn nearest_cut_selection() {
        let fig1 = fixtures::fig1();
        let sel = core_select_nearest_cut(&fig1, &fig1.capacities()).unwrap();
        assert_eq!(sel.payoffs, q(&[(0, 1), (0, 1), (1, 1), (1, 1)]));
        let sel = core_select_nearest_cut(&fig1, &[int(1), int(1), int(1), int(1)]).unwrap();
        assert_eq!(sel.payoffs, q(&[(1, 1), (1, 1), (0, 1), (0, 1)]));
        let single = FlowNetwork::from_edges("s", "t", &[("e", "s", "t", int(3))]).unwrap();
        assert_eq!(
            core_select_nearest_cut(&single, &[int(3)]).unwrap().payoffs,
            vec![int(3)]
        );
    }

    #[test]
    fn mechanism_labels_round_trip() {
        for m in [
            Mechanism::Shapley,
            Mechanism::Mc,
            Mechanism::McNoStepOne,
            Mechanism::CoreNearestCut,
        ] {
            assert_eq!(m.label().parse::<Mechanism>().unwrap(), m);
        }
        assert!("nucleolus".parse::<Mechanism>().is_err());
    }
}
