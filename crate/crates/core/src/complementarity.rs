//! Complementarity and substitutability of edge pairs through the sign of the
//! second-order difference quotient of the two-parameter max-flow function.

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{FlowError, Result};
use crate::exec::Execution;
use crate::flow::two_parameter_flow;
use crate::network::FlowNetwork;
use crate::rational::{format_rational, one, ratio, serde_str, serde_vec, sum, zero, Rational};

/// Denominator of the lattice other capacities are drawn from when sampling.
pub const SAMPLE_DENOMINATOR: i64 = 4;
/// Sampled capacities lie in `{1/4, 2/4, ..., 8/4}`.
pub const SAMPLE_MAX_NUMERATOR: i64 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Complementary,
    Substitutable,
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Probe {
    #[serde(with = "serde_str")]
    pub x: Rational,
    #[serde(with = "serde_str")]
    pub y: Rational,
    #[serde(with = "serde_str")]
    pub a: Rational,
    #[serde(with = "serde_str")]
    pub b: Rational,
    #[serde(with = "serde_str")]
    pub q: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "claim", rename_all = "lowercase")]
pub enum ConstantClaim {
    Supported,
    /// Two configurations of the other capacities with opposite signs.
    Refuted {
        #[serde(serialize_with = "serde_vec::serialize")]
        first: Vec<Rational>,
        first_relation: Relation,
        #[serde(serialize_with = "serde_vec::serialize")]
        witness: Vec<Rational>,
        witness_relation: Relation,
    },
    NotTested,
}

/// Fixed shapes whose relation does not depend on the other capacities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StructuralPattern {
    /// Series pair through a node carrying no other edge.
    #[serde(rename = "C-I")]
    SeriesChain,
    /// One edge leaves the source, the other enters the sink.
    #[serde(rename = "C-II")]
    SourceOutSinkIn,
    /// Same tail and same head.
    #[serde(rename = "S-I")]
    Parallel,
    /// Same tail.
    #[serde(rename = "S-II")]
    CommonTail,
    /// Same head.
    #[serde(rename = "S-III")]
    CommonHead,
}

impl StructuralPattern {
    pub fn label(self) -> &'static str {
        match self {
            StructuralPattern::SeriesChain => "C-I",
            StructuralPattern::SourceOutSinkIn => "C-II",
            StructuralPattern::Parallel => "S-I",
            StructuralPattern::CommonTail => "S-II",
            StructuralPattern::CommonHead => "S-III",
        }
    }

    pub fn expected(self) -> Relation {
        match self {
            StructuralPattern::SeriesChain | StructuralPattern::SourceOutSinkIn => {
                Relation::Complementary
            }
            _ => Relation::Substitutable,
        }
    }

    /// Does an observed relation fit the pattern? Identically zero quotients fit either sign.
    pub fn admits(self, relation: Relation) -> bool {
        relation == Relation::Degenerate || relation == self.expected()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplementarityVerdict {
    pub relation: Relation,
    pub probes: Vec<Probe>,
    pub constant_claim: ConstantClaim,
    pub pattern: Option<StructuralPattern>,
    pub samples: usize,
}

#[allow(clippy::too_many_arguments)]
pub fn difference_quotient(
    net: &FlowNetwork,
    i: usize,
    j: usize,
    x: &Rational,
    y: &Rational,
    a: &Rational,
    b: &Rational,
    rest: &[Rational],
) -> Rational {
    debug_assert!(a.is_positive() && b.is_positive());
    let xa = x + a;
    let yb = y + b;
    let f = |p: &Rational, q: &Rational| two_parameter_flow(net, i, j, p, q, rest);
    (f(&xa, &yb) - f(&xa, y) - f(x, &yb) + f(x, y)) / (a * b)
}

fn grid_values(rest: &[Rational], i: usize, j: usize) -> Vec<Rational> {
    let half = ratio(1, 2);
    let mut v = vec![
        zero(),
        &rest[i] * &half,
        &rest[j] * &half,
        rest[i].clone(),
        rest[j].clone(),
        &rest[i] + &rest[j],
        sum(rest),
    ];
    v.sort();
    v.dedup();
    v
}

fn grid_steps(rest: &[Rational]) -> Vec<Rational> {
    let mut steps = vec![one()];
    if let Some(min) = rest.iter().filter(|c| c.is_positive()).min() {
        steps.push(min * ratio(1, 2));
    }
    steps.sort();
    steps.dedup();
    steps
}

/// Probes `Q_ij` on a fixed grid at the capacities `rest` of the other edges.
///
/// Observing both a positive and a negative quotient at one configuration
/// contradicts the complementary-or-substitutable dichotomy and is an error.
pub fn classify_complementarity(
    net: &FlowNetwork,
    i: usize,
    j: usize,
    rest: &[Rational],
) -> Result<ComplementarityVerdict> {
    if i == j {
        return Err(FlowError::Precondition(
            "pair needs two distinct edges".into(),
        ));
    }
    net.check_reports(rest)?;
    let values = grid_values(rest, i, j);
    let steps = grid_steps(rest);
    let mut probes = Vec::new();
    for x in &values {
        for y in &values {
            for a in &steps {
                for b in &steps {
                    let q = difference_quotient(net, i, j, x, y, a, b, rest);
                    probes.push(Probe {
                        x: x.clone(),
                        y: y.clone(),
                        a: a.clone(),
                        b: b.clone(),
                        q,
                    });
                }
            }
        }
    }
    let positive = probes.iter().find(|p| p.q.is_positive());
    let negative = probes.iter().find(|p| p.q.is_negative());
    let relation = match (positive, negative) {
        (Some(p), Some(n)) => {
            let show = |p: &Probe| {
                format!(
                    "Q({}, {}, {}, {}) = {}",
                    format_rational(&p.x),
                    format_rational(&p.y),
                    format_rational(&p.a),
                    format_rational(&p.b),
                    format_rational(&p.q)
                )
            };
            return Err(FlowError::SignConflict {
                i: net.edge(i).id.clone(),
                j: net.edge(j).id.clone(),
                detail: format!("{} and {}", show(p), show(n)),
            });
        }
        (Some(_), None) => Relation::Complementary,
        (None, Some(_)) => Relation::Substitutable,
        (None, None) => Relation::Degenerate,
    };
    Ok(ComplementarityVerdict {
        relation,
        probes,
        constant_claim: ConstantClaim::NotTested,
        pattern: structural_pattern(net, i, j),
        samples: 1,
    })
}

/// A capacity configuration drawn from the sampling lattice.
pub fn sample_configuration(rng: &mut impl Rng, edges: usize) -> Vec<Rational> {
    (0..edges)
        .map(|_| ratio(rng.gen_range(1..=SAMPLE_MAX_NUMERATOR), SAMPLE_DENOMINATOR))
        .collect()
}

pub fn probe_constant_relation(
    net: &FlowNetwork,
    i: usize,
    j: usize,
    sample_count: usize,
    seed: u64,
) -> Result<ComplementarityVerdict> {
    probe_constant_relation_with(net, i, j, sample_count, seed, Execution::default())
}

/// Classifies the pair under `sample_count` seeded configurations of all
/// capacities. Degenerate samples are compatible with either sign; the claim
/// is refuted only when both a complementary and a substitutable sample occur.
pub fn probe_constant_relation_with(
    net: &FlowNetwork,
    i: usize,
    j: usize,
    sample_count: usize,
    seed: u64,
    exec: Execution,
) -> Result<ComplementarityVerdict> {
    if sample_count == 0 {
        return Err(FlowError::Precondition(
            "sample count must be at least 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let configs: Vec<Vec<Rational>> = (0..sample_count)
        .map(|_| sample_configuration(&mut rng, net.edge_count()))
        .collect();
    let verdicts = exec.map_slice(&configs, |rest| classify_complementarity(net, i, j, rest));
    let mut verdicts = verdicts.into_iter().collect::<Result<Vec<_>>>()?;

    let first_signed = |rel: Relation| verdicts.iter().position(|v| v.relation == rel);
    let comp = first_signed(Relation::Complementary);
    let subst = first_signed(Relation::Substitutable);
    let (relation, claim, shown) = match (comp, subst) {
        (Some(c), Some(s)) => {
            let (first, witness) = (c.min(s), c.max(s));
            let claim = ConstantClaim::Refuted {
                first: configs[first].clone(),
                first_relation: verdicts[first].relation,
                witness: configs[witness].clone(),
                witness_relation: verdicts[witness].relation,
            };
            (verdicts[witness].relation, claim, witness)
        }
        (Some(c), None) => (Relation::Complementary, ConstantClaim::Supported, c),
        (None, Some(s)) => (Relation::Substitutable, ConstantClaim::Supported, s),
        (None, None) => (Relation::Degenerate, ConstantClaim::Supported, 0),
    };
    let probes = std::mem::take(&mut verdicts[shown].probes);
    Ok(ComplementarityVerdict {
        relation,
        probes,
        constant_claim: claim,
        pattern: structural_pattern(net, i, j),
        samples: sample_count,
    })
}

/// Labels the pair if it matches one of the fixed shapes. Checked in the
/// order S-I, C-I, C-II, S-II, S-III; both edge orders are accepted.
pub fn structural_pattern(net: &FlowNetwork, i: usize, j: usize) -> Option<StructuralPattern> {
    if i == j {
        return None;
    }
    let (ei, ej) = (net.edge(i), net.edge(j));
    if net.are_parallel(i, j) {
        return Some(StructuralPattern::Parallel);
    }
    let pure_junction = |v: usize| net.in_edges(v).len() == 1 && net.out_edges(v).len() == 1;
    if (ei.head == ej.tail && pure_junction(ei.head))
        || (ej.head == ei.tail && pure_junction(ej.head))
    {
        return Some(StructuralPattern::SeriesChain);
    }
    let (s, t) = (net.source(), net.sink());
    if (ei.tail == s && ej.head == t) || (ej.tail == s && ei.head == t) {
        return Some(StructuralPattern::SourceOutSinkIn);
    }
    if ei.tail == ej.tail {
        return Some(StructuralPattern::CommonTail);
    }
    if ei.head == ej.head {
        return Some(StructuralPattern::CommonHead);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::int;

    fn pair_net(edges: &[(&str, &str, &str)]) -> FlowNetwork {
        let list: Vec<(&str, &str, &str, Rational)> =
            edges.iter().map(|&(id, a, b)| (id, a, b, int(1))).collect();
        FlowNetwork::from_edges("s", "t", &list).unwrap()
    }

    #[test]
    fn quotient_examples() {
        let parallel = pair_net(&[("a", "s", "t"), ("b", "s", "t")]);
        let rest = parallel.capacities();
        for (x, y) in [(zero(), zero()), (ratio(1, 3), int(2))] {
            assert_eq!(
                difference_quotient(&parallel, 0, 1, &x, &y, &one(), &ratio(1, 2), &rest),
                zero()
            );
        }
        let series = pair_net(&[("a", "s", "A"), ("b", "A", "t")]);
        let rest = series.capacities();
        assert_eq!(
            difference_quotient(&series, 0, 1, &zero(), &zero(), &one(), &one(), &rest),
            one()
        );
        let sii = fixtures::fig7_sii();
        let rest = sii.capacities();
        assert_eq!(
            difference_quotient(&sii, 0, 1, &zero(), &zero(), &one(), &one(), &rest),
            int(-1)
        );
    }

    #[test]
    fn classification_on_patterns() {
        let ci = fixtures::fig6_ci();
        let v = classify_complementarity(&ci, 0, 1, &ci.capacities()).unwrap();
        assert_eq!(v.relation, Relation::Complementary);
        assert_eq!(v.pattern, Some(StructuralPattern::SeriesChain));

        let si = fixtures::fig7_si();
        let v = classify_complementarity(&si, 0, 1, &si.capacities()).unwrap();
        assert_eq!(v.relation, Relation::Substitutable);
        assert_eq!(v.pattern, Some(StructuralPattern::Parallel));

        // separate s-t paths: flows add up
        let v = classify_complementarity(&ci, 0, 2, &ci.capacities()).unwrap();
        assert_eq!(v.relation, Relation::Degenerate);

        let lone_parallel = pair_net(&[("a", "s", "t"), ("b", "s", "t")]);
        let v =
            classify_complementarity(&lone_parallel, 0, 1, &lone_parallel.capacities()).unwrap();
        assert_eq!(v.relation, Relation::Degenerate);
    }

    #[test]
    fn pattern_labels() {
        assert_eq!(
            structural_pattern(&fixtures::fig6_cii(), 0, 1),
            Some(StructuralPattern::SourceOutSinkIn)
        );
        assert_eq!(
            structural_pattern(&fixtures::fig7_sii(), 0, 1),
            Some(StructuralPattern::CommonTail)
        );
        assert_eq!(
            structural_pattern(&fixtures::fig7_siii(), 0, 1),
            Some(StructuralPattern::CommonHead)
        );
        assert_eq!(
            structural_pattern(&fixtures::fig6_ci(), 1, 0),
            Some(StructuralPattern::SeriesChain)
        );
        assert_eq!(
            structural_pattern(&fixtures::fig4(), 0, 1),
            Some(StructuralPattern::Parallel)
        );
        // A carries four edges, so e1 -> e3 is not a pure chain
        assert_eq!(
            structural_pattern(&fixtures::fig1(), 0, 2),
            Some(StructuralPattern::SourceOutSinkIn)
        );
        assert_eq!(structural_pattern(&fixtures::neither(), 0, 4), None);
    }

    #[test]
    fn sampled_claims() {
        let ci = fixtures::fig6_ci();
        let v = probe_constant_relation(&ci, 0, 1, 40, 7).unwrap();
        assert_eq!(v.constant_claim, ConstantClaim::Supported);
        assert_eq!(v.relation, Relation::Complementary);

        let siii = fixtures::fig7_siii();
        let v = probe_constant_relation(&siii, 0, 1, 40, 7).unwrap();
        assert_eq!(v.constant_claim, ConstantClaim::Supported);
        assert_eq!(v.relation, Relation::Substitutable);

        let seq = probe_constant_relation_with(&ci, 0, 1, 10, 3, Execution::Sequential).unwrap();
        let par = probe_constant_relation_with(&ci, 0, 1, 10, 3, Execution::Parallel).unwrap();
        assert_eq!(seq, par);
        assert!(probe_constant_relation(&ci, 0, 1, 0, 3).is_err());
    }
}
