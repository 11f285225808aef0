//! Property audits: deviation search, individual rationality, split/merge
//! resistance, cross monotonicity, cross-effect sweeps for the MC mechanism
//! and the complementarity-driven monotonicity of Shapley payoffs.
//!
//! Audits search for witnesses on finite grids. A `Pass` means no witness
//! was found on the grid, not a proof.

use num_traits::{Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complementarity::{
    probe_constant_relation_with, sample_configuration, ConstantClaim, Relation, StructuralPattern,
};
use crate::cuts::{classify_pair_structure, critical_value, CriticalValue, PairStructure};
use crate::error::{FlowError, Result};
use crate::exec::Execution;
use crate::flow::{coalition_value, max_flow_value};
use crate::game::Coalition;
use crate::mechanisms::{mc_allocate_with, shapley_with, Allocation, Mechanism};
use crate::network::{edges_on_paths, Edge, FlowNetwork};
use crate::random::{random_network, random_reports, CapLattice};
use crate::rational::{one, ratio, serde_str, serde_vec, zero, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Property {
    #[serde(rename = "DSIC")]
    Dsic,
    #[serde(rename = "SIR")]
    Sir,
    #[serde(rename = "SP")]
    Sp,
    #[serde(rename = "MP")]
    Mp,
    #[serde(rename = "CM")]
    Cm,
    #[serde(rename = "cross-effect")]
    CrossEffect,
    #[serde(rename = "shapley-monotonicity")]
    ShapleyMonotonicity,
}

impl Property {
    pub const MECHANISM_PROPERTIES: [Property; 5] = [
        Property::Dsic,
        Property::Sir,
        Property::Sp,
        Property::Mp,
        Property::Cm,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Property::Dsic => "DSIC",
            Property::Sir => "SIR",
            Property::Sp => "SP",
            Property::Mp => "MP",
            Property::Cm => "CM",
            Property::CrossEffect => "cross-effect",
            Property::ShapleyMonotonicity => "shapley-monotonicity",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeviationWitness {
    pub player: String,
    #[serde(with = "serde_str")]
    pub truth: Rational,
    #[serde(with = "serde_str")]
    pub truthful_payoff: Rational,
    #[serde(with = "serde_str")]
    pub best_report: Rational,
    #[serde(with = "serde_str")]
    pub best_payoff: Rational,
    #[serde(with = "serde_str")]
    pub gain: Rational,
    #[serde(serialize_with = "serde_vec::serialize")]
    pub others_reports: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Transformation {
    SplitEdge {
        edge: String,
        #[serde(with = "serde_str")]
        report_a: Rational,
        #[serde(with = "serde_str")]
        report_b: Rational,
        #[serde(with = "serde_str")]
        truth_a: Rational,
        #[serde(with = "serde_str")]
        truth_b: Rational,
    },
    MergeParallel {
        edge_a: String,
        edge_b: String,
        merged: String,
    },
}

/// A transformed network with reports; see [`split_edge`] and [`merge_parallel`]
/// for where the new edges sit in the edge order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transformed {
    pub net: FlowNetwork,
    pub reports: Vec<Rational>,
    pub transformation: Transformation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepPoint {
    #[serde(with = "serde_str")]
    pub report: Rational,
    #[serde(with = "serde_str")]
    pub max_flow: Rational,
    #[serde(with = "serde_str")]
    pub observed: Rational,
    pub allocation: Allocation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepTrace {
    pub swept: String,
    pub observed: String,
    pub structure: Option<PairStructure>,
    pub critical_value: Option<CriticalValue>,
    pub points: Vec<SweepPoint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    Deviation(DeviationWitness),
    Rationality {
        player: String,
        #[serde(with = "serde_str")]
        payoff: Rational,
        #[serde(with = "serde_str")]
        stand_alone: Rational,
        reason: String,
    },
    Split {
        transformation: Transformation,
        #[serde(with = "serde_str")]
        before: Rational,
        #[serde(with = "serde_str")]
        after: Rational,
        #[serde(with = "serde_str")]
        gain: Rational,
    },
    Merge {
        transformation: Transformation,
        #[serde(with = "serde_str")]
        before: Rational,
        #[serde(with = "serde_str")]
        after: Rational,
        #[serde(with = "serde_str")]
        gain: Rational,
    },
    CrossMonotonicity {
        raised: String,
        #[serde(with = "serde_str")]
        from: Rational,
        #[serde(with = "serde_str")]
        to: Rational,
        #[serde(with = "serde_str")]
        flow_before: Rational,
        #[serde(with = "serde_str")]
        flow_after: Rational,
        player: String,
        #[serde(with = "serde_str")]
        payoff_before: Rational,
        #[serde(with = "serde_str")]
        payoff_after: Rational,
    },
    Sweep {
        expected: String,
        #[serde(with = "serde_str")]
        left: Rational,
        #[serde(with = "serde_str")]
        right: Rational,
        #[serde(with = "serde_str")]
        left_value: Rational,
        #[serde(with = "serde_str")]
        right_value: Rational,
    },
    Monotonicity {
        #[serde(serialize_with = "serde_vec::serialize")]
        configuration: Vec<Rational>,
        expected: Relation,
        #[serde(with = "serde_str")]
        left: Rational,
        #[serde(with = "serde_str")]
        right: Rational,
        #[serde(with = "serde_str")]
        left_value: Rational,
        #[serde(with = "serde_str")]
        right_value: Rational,
    },
    PatternMismatch {
        pattern: StructuralPattern,
        observed: Relation,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Violation { witness: Box<Witness> },
    NotTested { reason: String },
}

impl Verdict {
    pub fn violation(witness: Witness) -> Verdict {
        Verdict::Violation {
            witness: Box::new(witness),
        }
    }

    pub fn is_violation(&self) -> bool {
        matches!(self, Verdict::Violation { .. })
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Violation { witness } => Some(witness),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub property: Property,
    pub mechanism: Option<Mechanism>,
    pub verdict: Verdict,
    pub trace: Option<SweepTrace>,
    /// The audited network in the line format, so a witness can be replayed.
    pub network: String,
    #[serde(serialize_with = "serde_vec::serialize")]
    pub reports: Vec<Rational>,
    pub notes: Vec<String>,
}

impl AuditReport {
    fn new(
        property: Property,
        mechanism: Option<Mechanism>,
        net: &FlowNetwork,
        reports: &[Rational],
        verdict: Verdict,
    ) -> Self {
        AuditReport {
            property,
            mechanism,
            verdict,
            trace: None,
            network: net.render(),
            reports: reports.to_vec(),
            notes: Vec::new(),
        }
    }

    pub fn is_violation(&self) -> bool {
        self.verdict.is_violation()
    }
}

fn allocate(mechanism: Mechanism, net: &FlowNetwork, reports: &[Rational]) -> Result<Allocation> {
    mechanism.allocate_with(net, reports, Execution::Sequential)
}

fn push_unique(values: &mut Vec<Rational>, v: Rational) {
    if !values.contains(&v) {
        values.push(v);
    }
}

/// Reports tried for `player`: `grid_size` even steps over `(0, truth]`,
/// the truth, the critical value and the other reports, all clipped to
/// `(0, truth]`. Sorted ascending.
pub fn deviation_grid(
    net: &FlowNetwork,
    player: usize,
    truth: &Rational,
    reports: &[Rational],
    grid_size: usize,
) -> Vec<Rational> {
    let mut grid = Vec::new();
    let steps = grid_size.max(1) as i64;
    for k in 1..=steps {
        push_unique(&mut grid, truth * ratio(k, steps));
    }
    push_unique(&mut grid, truth.clone());
    if let CriticalValue::Finite(x) = critical_value(net, reports, player) {
        if x.is_positive() && &x <= truth {
            push_unique(&mut grid, x);
        }
    }
    for (k, r) in reports.iter().enumerate() {
        if k != player && r.is_positive() {
            push_unique(&mut grid, r.clone().min(truth.clone()));
        }
    }
    grid.sort();
    grid
}

/// Best unilateral report of `player` against `reports` (whose entry for the
/// player is ignored). Ties keep the truthful report.
pub fn best_deviation(
    net: &FlowNetwork,
    mechanism: Mechanism,
    player: usize,
    truth: &Rational,
    reports: &[Rational],
    grid_size: usize,
) -> Result<DeviationWitness> {
    if grid_size < 2 {
        return Err(FlowError::Precondition(
            "deviation grid needs at least 2 points".into(),
        ));
    }
    net.check_reports(reports)?;
    let grid = deviation_grid(net, player, truth, reports, grid_size);
    let payoff_at = |r: &Rational| -> Result<Rational> {
        let mut profile = reports.to_vec();
        profile[player] = r.clone();
        Ok(allocate(mechanism, net, &profile)?.payoffs[player].clone())
    };
    let truthful_payoff = payoff_at(truth)?;
    let mut best_report = truth.clone();
    let mut best_payoff = truthful_payoff.clone();
    for r in &grid {
        if r == truth {
            continue;
        }
        let p = payoff_at(r)?;
        if p > best_payoff {
            best_payoff = p;
            best_report = r.clone();
        }
    }
    let mut others = reports.to_vec();
    others[player] = truth.clone();
    Ok(DeviationWitness {
        player: net.edge(player).id.clone(),
        truth: truth.clone(),
        gain: &best_payoff - &truthful_payoff,
        truthful_payoff,
        best_report,
        best_payoff,
        others_reports: others,
    })
}

/// Deviation search for every player against fixed reports of the others.
/// Each player's truth is the network capacity.
pub fn check_dsic(
    net: &FlowNetwork,
    mechanism: Mechanism,
    reports: &[Rational],
    grid_size: usize,
) -> Result<AuditReport> {
    let caps = net.capacities();
    let mut verdict = Verdict::Pass;
    for k in 0..net.edge_count() {
        let w = best_deviation(net, mechanism, k, &caps[k], reports, grid_size)?;
        if w.gain.is_positive() {
            verdict = Verdict::violation(Witness::Deviation(w));
            break;
        }
    }
    Ok(AuditReport::new(
        Property::Dsic,
        Some(mechanism),
        net,
        reports,
        verdict,
    ))
}

/// (i) every payoff covers the player's stand-alone value; (ii) every edge on
/// an s-t path of positive-report edges is paid strictly positively.
pub fn check_sir(
    net: &FlowNetwork,
    mechanism: Mechanism,
    reports: &[Rational],
) -> Result<AuditReport> {
    let alloc = allocate(mechanism, net, reports)?;
    let on_path = edges_on_paths(net, |k| reports[k].is_positive());
    let mut verdict = Verdict::Pass;
    for k in 0..net.edge_count() {
        let stand_alone = coalition_value(net, reports, Coalition::singleton(k));
        let payoff = &alloc.payoffs[k];
        let reason = if payoff < &stand_alone {
            Some("payoff below stand-alone value")
        } else if on_path[k] && !payoff.is_positive() {
            Some("edge on an s-t path is not paid")
        } else {
            None
        };
        if let Some(reason) = reason {
            verdict = Verdict::violation(Witness::Rationality {
                player: net.edge(k).id.clone(),
                payoff: payoff.clone(),
                stand_alone,
                reason: reason.into(),
            });
            break;
        }
    }
    Ok(AuditReport::new(
        Property::Sir,
        Some(mechanism),
        net,
        reports,
        verdict,
    ))
}

fn rebuild(net: &FlowNetwork, edges: Vec<Edge>) -> Result<FlowNetwork> {
    FlowNetwork::new(net.nodes().to_vec(), edges, net.source(), net.sink())
}

/// Replaces edge `e` by parallel edges `{id}.1` and `{id}.2` at positions
/// `e` and `e + 1` with reports `report_a + report_b = reports[e]`. The true
/// capacity is split in the same proportion (evenly if the report is 0); a
/// zero-report half therefore gets zero capacity.
pub fn split_edge(
    net: &FlowNetwork,
    reports: &[Rational],
    e: usize,
    report_a: &Rational,
    report_b: &Rational,
) -> Result<Transformed> {
    net.check_reports(reports)?;
    let original = net.edge(e);
    if report_a.is_negative() || report_b.is_negative() || (report_a + report_b) != reports[e] {
        return Err(FlowError::SplitMismatch {
            a: crate::rational::format_rational(report_a),
            b: crate::rational::format_rational(report_b),
            total: crate::rational::format_rational(&reports[e]),
        });
    }
    let (truth_a, truth_b) = if reports[e].is_zero() {
        let half = &original.capacity * ratio(1, 2);
        (half.clone(), half)
    } else {
        let a = &original.capacity * report_a / &reports[e];
        let b = &original.capacity - &a;
        (a, b)
    };
    let mut edges = Vec::with_capacity(net.edge_count() + 1);
    let mut new_reports = Vec::with_capacity(net.edge_count() + 1);
    for (k, edge) in net.edges().iter().enumerate() {
        if k == e {
            for (suffix, truth, report) in [(".1", &truth_a, report_a), (".2", &truth_b, report_b)]
            {
                edges.push(Edge {
                    id: format!("{}{}", edge.id, suffix),
                    tail: edge.tail,
                    head: edge.head,
                    capacity: truth.clone(),
                });
                new_reports.push(report.clone());
            }
        } else {
            edges.push(edge.clone());
            new_reports.push(reports[k].clone());
        }
    }
    Ok(Transformed {
        net: rebuild(net, edges)?,
        reports: new_reports,
        transformation: Transformation::SplitEdge {
            edge: original.id.clone(),
            report_a: report_a.clone(),
            report_b: report_b.clone(),
            truth_a,
            truth_b,
        },
    })
}

/// Replaces parallel edges `a` and `b` by one edge `{id_a}+{id_b}` at the
/// position of the earlier of the two.
pub fn merge_parallel(
    net: &FlowNetwork,
    reports: &[Rational],
    a: usize,
    b: usize,
) -> Result<Transformed> {
    net.check_reports(reports)?;
    if !net.are_parallel(a, b) {
        return Err(FlowError::NotParallel(
            net.edge(a).id.clone(),
            net.edge(b).id.clone(),
        ));
    }
    let (first, second) = (a.min(b), a.max(b));
    let (ea, eb) = (net.edge(a), net.edge(b));
    let merged_id = format!("{}+{}", ea.id, eb.id);
    let mut edges = Vec::with_capacity(net.edge_count() - 1);
    let mut new_reports = Vec::with_capacity(net.edge_count() - 1);
    for (k, edge) in net.edges().iter().enumerate() {
        if k == first {
            edges.push(Edge {
                id: merged_id.clone(),
                tail: edge.tail,
                head: edge.head,
                capacity: &ea.capacity + &eb.capacity,
            });
            new_reports.push(&reports[a] + &reports[b]);
        } else if k != second {
            edges.push(edge.clone());
            new_reports.push(reports[k].clone());
        }
    }
    Ok(Transformed {
        net: rebuild(net, edges)?,
        reports: new_reports,
        transformation: Transformation::MergeParallel {
            edge_a: ea.id.clone(),
            edge_b: eb.id.clone(),
            merged: merged_id,
        },
    })
}

/// Split points for `report_a`: `k · report / 8` for `k = 1..7`, which holds
/// the even split and `report/2 ± k·report/8`.
pub fn default_split_grid(report: &Rational) -> Vec<Rational> {
    (1..=7).map(|k| report * ratio(k, 8)).collect()
}

/// Compares `φ_e` before a split with the successors' summed payoff after.
/// `split_grid` lists values of the first half's report.
pub fn check_sp(
    net: &FlowNetwork,
    mechanism: Mechanism,
    reports: &[Rational],
    e: usize,
    split_grid: &[Rational],
) -> Result<AuditReport> {
    let before = allocate(mechanism, net, reports)?.payoffs[e].clone();
    let mut best: Option<Witness> = None;
    let mut best_gain = zero();
    for a in split_grid {
        if a.is_negative() || a > &reports[e] {
            continue;
        }
        let b = &reports[e] - a;
        let t = split_edge(net, reports, e, a, &b)?;
        let alloc = allocate(mechanism, &t.net, &t.reports)?;
        let after = &alloc.payoffs[e] + &alloc.payoffs[e + 1];
        let gain = &after - &before;
        if gain > best_gain {
            best_gain = gain.clone();
            best = Some(Witness::Split {
                transformation: t.transformation,
                before: before.clone(),
                after,
                gain,
            });
        }
    }
    let verdict = best.map_or(Verdict::Pass, Verdict::violation);
    Ok(AuditReport::new(
        Property::Sp,
        Some(mechanism),
        net,
        reports,
        verdict,
    ))
}

pub fn check_mp(
    net: &FlowNetwork,
    mechanism: Mechanism,
    reports: &[Rational],
    a: usize,
    b: usize,
) -> Result<AuditReport> {
    let t = merge_parallel(net, reports, a, b)?;
    let alloc = allocate(mechanism, net, reports)?;
    let before = &alloc.payoffs[a] + &alloc.payoffs[b];
    let after = allocate(mechanism, &t.net, &t.reports)?.payoffs[a.min(b)].clone();
    let gain = &after - &before;
    let verdict = if gain.is_positive() {
        Verdict::violation(Witness::Merge {
            transformation: t.transformation,
            before,
            after,
            gain,
        })
    } else {
        Verdict::Pass
    };
    Ok(AuditReport::new(
        Property::Mp,
        Some(mechanism),
        net,
        reports,
        verdict,
    ))
}

/// Which raises of a report are judged for cross monotonicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CmCriterion {
    /// Raises that lift the max flow by the whole raise, i.e. the new report
    /// stays at or below the critical value.
    #[default]
    FullIncrease,
    /// Every raise that lifts the max flow at all.
    AnyIncrease,
}

/// Raises `reports[i]` to each larger grid value; where the max flow rises
/// (per `criterion`) no other player's payoff may fall. Other grid points
/// are recorded in the trace but not judged.
pub fn check_cm(
    net: &FlowNetwork,
    mechanism: Mechanism,
    reports: &[Rational],
    i: usize,
    increase_grid: &[Rational],
    criterion: CmCriterion,
) -> Result<AuditReport> {
    net.check_reports(reports)?;
    let base = allocate(mechanism, net, reports)?;
    let flow_before = max_flow_value(net, reports);
    let mut grid: Vec<Rational> = increase_grid
        .iter()
        .filter(|r| *r > &reports[i])
        .cloned()
        .collect();
    grid.sort();
    grid.dedup();
    let mut points = vec![SweepPoint {
        report: reports[i].clone(),
        max_flow: flow_before.clone(),
        observed: base.payoffs[i].clone(),
        allocation: base.clone(),
    }];
    let mut verdict = Verdict::Pass;
    let mut skipped = 0usize;
    for r in grid {
        let mut raised = reports.to_vec();
        raised[i] = r.clone();
        let flow_after = max_flow_value(net, &raised);
        let alloc = allocate(mechanism, net, &raised)?;
        let rise = &flow_after - &flow_before;
        let judged = match criterion {
            CmCriterion::FullIncrease => rise.is_positive() && rise == &r - &reports[i],
            CmCriterion::AnyIncrease => rise.is_positive(),
        };
        if judged && !verdict.is_violation() {
            if let Some(j) =
                (0..net.edge_count()).find(|&j| j != i && alloc.payoffs[j] < base.payoffs[j])
            {
                verdict = Verdict::violation(Witness::CrossMonotonicity {
                    raised: net.edge(i).id.clone(),
                    from: reports[i].clone(),
                    to: r.clone(),
                    flow_before: flow_before.clone(),
                    flow_after: flow_after.clone(),
                    player: net.edge(j).id.clone(),
                    payoff_before: base.payoffs[j].clone(),
                    payoff_after: alloc.payoffs[j].clone(),
                });
            }
        } else if !judged {
            skipped += 1;
        }
        points.push(SweepPoint {
            report: r,
            max_flow: flow_after,
            observed: alloc.payoffs[i].clone(),
            allocation: alloc,
        });
    }
    let mut report = AuditReport::new(Property::Cm, Some(mechanism), net, reports, verdict);
    if skipped > 0 {
        report.notes.push(format!(
            "{skipped} grid point(s) not judged: max flow did not rise by the criterion"
        ));
    }
    report.trace = Some(SweepTrace {
        swept: net.edge(i).id.clone(),
        observed: net.edge(i).id.clone(),
        structure: None,
        critical_value: Some(critical_value(net, reports, i)),
        points,
    });
    Ok(report)
}

/// Raises used by the corpus: fractions of the headroom up to the critical
/// value plus fractions of the report itself.
pub fn default_increase_grid(net: &FlowNetwork, reports: &[Rational], i: usize) -> Vec<Rational> {
    let mut grid = Vec::new();
    if let CriticalValue::Finite(x) = critical_value(net, reports, i) {
        let headroom = &x - &reports[i];
        if headroom.is_positive() {
            for k in 1..=4 {
                push_unique(&mut grid, &reports[i] + &headroom * ratio(k, 4));
            }
        }
    }
    for k in [1, 2] {
        push_unique(&mut grid, &reports[i] + &reports[i] * ratio(k, 2));
    }
    push_unique(&mut grid, &reports[i] + one());
    grid.sort();
    grid
}

/// Sweep points: `k·x*/P` for `k = 1..P`, then `x* + k·span/P` with
/// `span = max(x*, 1)`.
pub fn cross_effect_grid(
    x_star: &Rational,
    points_per_interval: usize,
) -> (Vec<Rational>, Vec<Rational>) {
    let p = points_per_interval as i64;
    let span = x_star.clone().max(one());
    let first = if x_star.is_positive() {
        (1..=p).map(|k| x_star * ratio(k, p)).collect()
    } else {
        Vec::new()
    };
    let second = (1..=p).map(|k| x_star + &span * ratio(k, p)).collect();
    (first, second)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Trend {
    Increasing,
    Constant,
    Decreasing,
}

impl Trend {
    fn holds(self, left: &Rational, right: &Rational) -> bool {
        match self {
            Trend::Increasing => left < right,
            Trend::Constant => left == right,
            Trend::Decreasing => left > right,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Trend::Increasing => "strictly increasing",
            Trend::Constant => "constant",
            Trend::Decreasing => "strictly decreasing",
        }
    }
}

/// Sweeps `ĉ_{e1}` and checks the trajectory of `MC_{e2}` against the pair's
/// structure: independent pairs rise up to the critical value and stay flat
/// after it, inclusive pairs stay flat then fall, other pairs rise then fall.
/// Pairs involving an s-t edge must leave `MC_{e2}` unchanged throughout.
pub fn cross_effect_sweep(
    net: &FlowNetwork,
    reports: &[Rational],
    e1: usize,
    e2: usize,
    points_per_interval: usize,
) -> Result<AuditReport> {
    if e1 == e2 {
        return Err(FlowError::Precondition(
            "pair needs two distinct edges".into(),
        ));
    }
    if points_per_interval == 0 {
        return Err(FlowError::Precondition(
            "sweep needs at least one point per interval".into(),
        ));
    }
    net.check_reports(reports)?;
    let trivial = net.is_source_sink_edge(e1) || net.is_source_sink_edge(e2);
    let x_star = critical_value(net, reports, e1);
    let structure = if trivial {
        None
    } else {
        Some(classify_pair_structure(net, reports, e1, e2)?)
    };
    let anchor = match &x_star {
        CriticalValue::Finite(x) => x.clone(),
        CriticalValue::Unbounded => reports[e1].clone().max(one()),
    };
    let (first, second) = cross_effect_grid(&anchor, points_per_interval);
    let (before, after) = match structure {
        None => (Trend::Constant, Trend::Constant),
        Some(PairStructure::Independent) => (Trend::Increasing, Trend::Constant),
        Some(PairStructure::Inclusive) => (Trend::Constant, Trend::Decreasing),
        Some(PairStructure::Neither) => (Trend::Increasing, Trend::Decreasing),
    };

    let mut points = Vec::new();
    for r in first.iter().chain(&second) {
        let mut profile = reports.to_vec();
        profile[e1] = r.clone();
        let alloc = mc_allocate_with(net, &profile, Execution::Sequential)?;
        points.push(SweepPoint {
            report: r.clone(),
            max_flow: max_flow_value(net, &profile),
            observed: alloc.payoffs[e2].clone(),
            allocation: alloc,
        });
    }
    // pair (k-1, k) uses the rule of the interval containing point k
    let mut verdict = Verdict::Pass;
    for k in 1..points.len() {
        let trend = if k < first.len() { before } else { after };
        let (l, r) = (&points[k - 1], &points[k]);
        if !trend.holds(&l.observed, &r.observed) {
            verdict = Verdict::violation(Witness::Sweep {
                expected: trend.label().into(),
                left: l.report.clone(),
                right: r.report.clone(),
                left_value: l.observed.clone(),
                right_value: r.observed.clone(),
            });
            break;
        }
    }
    let mut report = AuditReport::new(
        Property::CrossEffect,
        Some(Mechanism::Mc),
        net,
        reports,
        verdict,
    );
    if trivial {
        report
            .notes
            .push("pair involves an s-t edge: expecting no change".into());
    }
    if structure == Some(PairStructure::Inclusive) || structure == Some(PairStructure::Neither) {
        report
            .notes
            .push("inclusiveness is judged against the current reports".into());
    }
    if first.is_empty() {
        report
            .notes
            .push("critical value is 0: no points below it".into());
    }
    report.trace = Some(SweepTrace {
        swept: net.edge(e1).id.clone(),
        observed: net.edge(e2).id.clone(),
        structure,
        critical_value: Some(x_star),
        points,
    });
    Ok(report)
}

/// Own-report values swept by [`shapley_monotonicity_probe`]: the sampling lattice.
pub fn shapley_monotonicity_grid() -> Vec<Rational> {
    (1..=crate::complementarity::SAMPLE_MAX_NUMERATOR)
        .map(|k| ratio(k, crate::complementarity::SAMPLE_DENOMINATOR))
        .collect()
}

/// Samples configurations as [`crate::complementarity::probe_constant_relation`]
/// does and, for each, sweeps `ĉ_i` checking that `Sh_j` moves in the
/// direction of the sampled relation. A structural pattern that disagrees
/// with the sampled relation is reported as a violation.
pub fn shapley_monotonicity_probe(
    net: &FlowNetwork,
    i: usize,
    j: usize,
    sample_count: usize,
    seed: u64,
) -> Result<AuditReport> {
    shapley_monotonicity_probe_with(net, i, j, sample_count, seed, Execution::default())
}

pub fn shapley_monotonicity_probe_with(
    net: &FlowNetwork,
    i: usize,
    j: usize,
    sample_count: usize,
    seed: u64,
    exec: Execution,
) -> Result<AuditReport> {
    let caps = net.capacities();
    let verdict_of_pair = probe_constant_relation_with(net, i, j, sample_count, seed, exec)?;
    let make = |verdict: Verdict| {
        AuditReport::new(
            Property::ShapleyMonotonicity,
            Some(Mechanism::Shapley),
            net,
            &caps,
            verdict,
        )
    };

    if let Some(pattern) = verdict_of_pair.pattern {
        if !pattern.admits(verdict_of_pair.relation) {
            return Ok(make(Verdict::violation(Witness::PatternMismatch {
                pattern,
                observed: verdict_of_pair.relation,
            })));
        }
    }
    if verdict_of_pair.constant_claim != ConstantClaim::Supported
        || verdict_of_pair.relation == Relation::Degenerate
    {
        let reason = match verdict_of_pair.constant_claim {
            ConstantClaim::Refuted { .. } => "relation is not constant across samples",
            _ => "quotient vanished on every sample",
        };
        return Ok(make(Verdict::NotTested {
            reason: reason.into(),
        }));
    }
    let expected = verdict_of_pair.relation;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let configs: Vec<Vec<Rational>> = (0..sample_count)
        .map(|_| sample_configuration(&mut rng, net.edge_count()))
        .collect();
    let grid = shapley_monotonicity_grid();
    let failures = exec.map_slice(&configs, |config| -> Result<Option<Witness>> {
        let mut previous: Option<(Rational, Rational)> = None;
        for r in &grid {
            let mut profile = config.clone();
            profile[i] = r.clone();
            let sh = shapley_with(net, &profile, Execution::Sequential)?.payoffs[j].clone();
            if let Some((left, left_value)) = &previous {
                let ok = match expected {
                    Relation::Complementary => left_value <= &sh,
                    _ => left_value >= &sh,
                };
                if !ok {
                    return Ok(Some(Witness::Monotonicity {
                        configuration: config.clone(),
                        expected,
                        left: left.clone(),
                        right: r.clone(),
                        left_value: left_value.clone(),
                        right_value: sh,
                    }));
                }
            }
            previous = Some((r.clone(), sh));
        }
        Ok(None)
    });
    for f in failures {
        if let Some(w) = f? {
            return Ok(make(Verdict::violation(w)));
        }
    }
    let mut report = make(Verdict::Pass);
    report.notes.push(format!(
        "{} sample(s), relation {:?}{}",
        sample_count,
        expected,
        verdict_of_pair
            .pattern
            .map(|p| format!(", pattern {}", p.label()))
            .unwrap_or_default()
    ));
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CorpusConfig {
    pub networks: usize,
    pub seed: u64,
    pub max_nodes: usize,
    pub max_edges: usize,
    pub grid_size: usize,
    pub lattice: CapLattice,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            networks: 100,
            seed: 1,
            max_nodes: 6,
            max_edges: 8,
            grid_size: 4,
            lattice: CapLattice::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyTally {
    pub property: Property,
    pub checks: usize,
    pub violations: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusSummary {
    pub mechanism: Mechanism,
    pub config: CorpusConfig,
    pub tallies: Vec<PropertyTally>,
    /// Every violating report, in corpus order.
    pub violations: Vec<AuditReport>,
}

impl CorpusSummary {
    pub fn violations_of(&self, property: Property) -> usize {
        self.tallies
            .iter()
            .find(|t| t.property == property)
            .map_or(0, |t| t.violations)
    }
}

/// Runs the requested mechanism properties on one network.
pub fn audit_network(
    net: &FlowNetwork,
    mechanism: Mechanism,
    properties: &[Property],
    grid_size: usize,
    seed: u64,
) -> Result<Vec<AuditReport>> {
    let caps = net.capacities();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let under = random_reports(&mut rng, net);
    let mut out = Vec::new();
    for &p in properties {
        match p {
            Property::Dsic => {
                out.push(check_dsic(net, mechanism, &caps, grid_size)?);
                out.push(check_dsic(net, mechanism, &under, grid_size)?);
            }
            Property::Sir => {
                out.push(check_sir(net, mechanism, &caps)?);
                out.push(check_sir(net, mechanism, &under)?);
            }
            Property::Sp => {
                for e in 0..net.edge_count() {
                    out.push(check_sp(
                        net,
                        mechanism,
                        &caps,
                        e,
                        &default_split_grid(&caps[e]),
                    )?);
                }
            }
            Property::Mp => {
                for a in 0..net.edge_count() {
                    for b in a + 1..net.edge_count() {
                        if net.are_parallel(a, b) {
                            out.push(check_mp(net, mechanism, &caps, a, b)?);
                        }
                    }
                }
            }
            Property::Cm => {
                for i in 0..net.edge_count() {
                    let grid = default_increase_grid(net, &under, i);
                    out.push(check_cm(
                        net,
                        mechanism,
                        &under,
                        i,
                        &grid,
                        CmCriterion::FullIncrease,
                    )?);
                }
            }
            Property::CrossEffect => {
                for e1 in 0..net.edge_count() {
                    for e2 in 0..net.edge_count() {
                        if e1 != e2 && !net.is_source_sink_edge(e1) && !net.is_source_sink_edge(e2)
                        {
                            out.push(cross_effect_sweep(net, &caps, e1, e2, 8)?);
                        }
                    }
                }
            }
            Property::ShapleyMonotonicity => {
                return Err(FlowError::Precondition(
                    "complementarity probes are run per pair, not per network".into(),
                ))
            }
        }
    }
    Ok(out)
}

/// Audits `config.networks` seeded random networks, fanning out across
/// networks; tallies are merged in seed order.
pub fn audit_corpus(
    config: &CorpusConfig,
    mechanism: Mechanism,
    properties: &[Property],
    exec: Execution,
) -> Result<CorpusSummary> {
    let per_network = exec.map_range(config.networks, |k| -> Result<Vec<AuditReport>> {
        let seed = config.seed.wrapping_add(k as u64);
        let net = random_network(seed, config.max_nodes, config.max_edges, config.lattice)?;
        audit_network(&net, mechanism, properties, config.grid_size, seed)
    });
    let mut tallies: Vec<PropertyTally> = properties
        .iter()
        .map(|&property| PropertyTally {
            property,
            checks: 0,
            violations: 0,
        })
        .collect();
    let mut violations = Vec::new();
    for reports in per_network {
        for r in reports? {
            if let Some(t) = tallies.iter_mut().find(|t| t.property == r.property) {
                t.checks += 1;
                if r.is_violation() {
                    t.violations += 1;
                }
            }
            if r.is_violation() {
                violations.push(r);
            }
        }
    }
    Ok(CorpusSummary {
        mechanism,
        config: *config,
        tallies,
        violations,
    })
}

/// Seeds used by the corpus for a given config, in order.
pub fn corpus_seeds(config: &CorpusConfig) -> impl Iterator<Item = u64> + '_ {
    (0..config.networks).map(|k| config.seed.wrapping_add(k as u64))
}
