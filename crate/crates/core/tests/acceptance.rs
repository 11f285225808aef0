//! Acceptance criteria, all exact (tolerance 0). Each test prints one
//! `PASS`/`FAIL` line; run with `--nocapture` to see them.

use flowmech::audits::{
    audit_corpus, best_deviation, check_cm, check_mp, check_sir, check_sp, cross_effect_sweep,
    shapley_monotonicity_probe, CmCriterion, CorpusConfig, Property, Verdict, Witness,
};
use flowmech::complementarity::{
    probe_constant_relation, ConstantClaim, Relation, StructuralPattern,
};
use flowmech::cuts::{
    enumerate_minimal_cuts, minimal_cuts_bruteforce, strip_source_sink_edges, PairStructure,
};
use flowmech::fixtures;
use flowmech::flow::max_flow_value;
use flowmech::mechanisms::{
    core_bounds, core_bounds_all, core_select_nearest_cut, mc_allocate, mc_no_step_one, shapley,
    shapley_permutation_oracle, Mechanism,
};
use flowmech::random::{random_network, CapLattice};
use flowmech::rational::{format_rational, int, ratio, zero};
use flowmech::{Execution, FlowNetwork, Rational};

struct Criterion {
    number: u32,
    title: &'static str,
    failures: Vec<String>,
    checks: usize,
}

impl Criterion {
    fn new(number: u32, title: &'static str) -> Self {
        Criterion {
            number,
            title,
            failures: Vec::new(),
            checks: 0,
        }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        self.checks += 1;
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn eq(&mut self, actual: &Rational, expected: &Rational, what: &str) {
        self.check(
            actual == expected,
            format!(
                "{what}: got {}, want {}",
                format_rational(actual),
                format_rational(expected)
            ),
        );
    }

    fn finish(self) {
        if self.failures.is_empty() {
            println!(
                "PASS criterion {:>2}: {} ({} checks)",
                self.number, self.title, self.checks
            );
        } else {
            println!("FAIL criterion {:>2}: {}", self.number, self.title);
            for f in &self.failures {
                println!("    - {f}");
            }
            panic!(
                "criterion {} failed: {}",
                self.number,
                self.failures.join("; ")
            );
        }
    }
}

fn q(v: &[(i64, i64)]) -> Vec<Rational> {
    v.iter().map(|&(n, d)| ratio(n, d)).collect()
}

#[test]
fn criterion_01_split_fan_shapley() {
    let mut c = Criterion::new(1, "split-proofness of Shapley on the fan");
    let a = fixtures::fig2a();
    let b = fixtures::fig2b();
    c.eq(
        &shapley(&a, &a.capacities()).unwrap().payoffs[0],
        &ratio(1, 30),
        "Sh_e1 on the fan",
    );
    let split = shapley(&b, &b.capacities()).unwrap();
    c.eq(&split.payoffs[0], &ratio(1, 42), "Sh_e1.1 after the split");
    c.eq(&split.payoffs[1], &ratio(1, 42), "Sh_e1.2 after the split");
    let report = check_sp(&a, Mechanism::Shapley, &a.capacities(), 0, &[int(1)]).unwrap();
    match report.verdict.witness() {
        Some(Witness::Split { gain, .. }) => {
            c.eq(
                gain,
                &(ratio(2, 42) - ratio(1, 30)),
                "split gain 2/42 - 1/30",
            );
        }
        other => c.check(false, format!("expected a split violation, got {other:?}")),
    }
    c.finish();
}

#[test]
fn criterion_02_merge_parallel_shapley() {
    let mut c = Criterion::new(2, "merge-proofness of Shapley on parallel edges");
    let a = fixtures::fig3a();
    let b = fixtures::fig3b();
    let sh = shapley(&a, &a.capacities()).unwrap();
    c.eq(&sh.payoffs[0], &ratio(1, 6), "Sh_e1");
    c.eq(&sh.payoffs[1], &ratio(1, 6), "Sh_e2");
    c.eq(
        &shapley(&b, &b.capacities()).unwrap().payoffs[0],
        &ratio(1, 2),
        "merged edge payoff",
    );
    let report = check_mp(&a, Mechanism::Shapley, &a.capacities(), 0, 1).unwrap();
    match report.verdict.witness() {
        Some(Witness::Merge { gain, .. }) => c.eq(gain, &(ratio(1, 2) - ratio(1, 3)), "merge gain"),
        other => c.check(false, format!("expected a merge violation, got {other:?}")),
    }
    c.finish();
}

#[test]
fn criterion_03_shapley_cross_monotonicity() {
    let mut c = Criterion::new(3, "Shapley fails cross monotonicity, MC keeps it");
    let net = fixtures::fig4();
    let before = q(&[(1, 2), (1, 2), (1, 1), (1, 1)]);
    let after = q(&[(3, 5), (1, 2), (1, 1), (1, 1)]);
    c.eq(&max_flow_value(&net, &before), &int(1), "max flow before");
    c.eq(
        &max_flow_value(&net, &after),
        &ratio(11, 10),
        "max flow after",
    );
    let sh_before = shapley_permutation_oracle(&net, &before).unwrap().payoffs[1].clone();
    let sh_after = shapley_permutation_oracle(&net, &after).unwrap().payoffs[1].clone();
    c.eq(&sh_before, &ratio(1, 3), "oracle Sh_e2 before");
    c.eq(&sh_after, &ratio(19, 60), "oracle Sh_e2 after");
    c.check(sh_after < sh_before, "Sh_e2 strictly decreases");
    c.eq(
        &shapley(&net, &before).unwrap().payoffs[1],
        &sh_before,
        "subset formula agrees before",
    );
    c.eq(
        &shapley(&net, &after).unwrap().payoffs[1],
        &sh_after,
        "subset formula agrees after",
    );
    let step = [ratio(3, 5)];
    let sh_cm = check_cm(
        &net,
        Mechanism::Shapley,
        &before,
        0,
        &step,
        CmCriterion::FullIncrease,
    )
    .unwrap();
    c.check(sh_cm.is_violation(), "check_cm flags Shapley");
    let mc_before = mc_allocate(&net, &before).unwrap();
    let mc_after = mc_allocate(&net, &after).unwrap();
    for j in 1..4 {
        c.check(
            mc_after.payoffs[j] >= mc_before.payoffs[j],
            format!("MC payoff of player {} non-decreasing", j + 1),
        );
    }
    let mc_cm = check_cm(
        &net,
        Mechanism::Mc,
        &before,
        0,
        &step,
        CmCriterion::FullIncrease,
    )
    .unwrap();
    c.check(mc_cm.verdict == Verdict::Pass, "check_cm passes MC");
    c.finish();
}

#[test]
fn criterion_04_core_selection_incentives() {
    let mut c = Criterion::new(
        4,
        "core selection: singleton core, SIR failure, profitable lie",
    );
    let net = fixtures::fig1();
    let caps = net.capacities();
    let bounds = core_bounds_all(&net, &caps).unwrap();
    c.check(bounds.feasible, "core non-empty");
    let expected = q(&[(0, 1), (0, 1), (1, 1), (1, 1)]);
    for (k, range) in bounds.ranges.iter().enumerate() {
        c.eq(&range.min, &expected[k], &format!("core min of e{}", k + 1));
        c.eq(&range.max, &expected[k], &format!("core max of e{}", k + 1));
    }
    let sel = core_select_nearest_cut(&net, &caps).unwrap();
    c.eq(&sel.payoffs[0], &zero(), "core selection pays e1");
    let sir = check_sir(&net, Mechanism::CoreNearestCut, &caps).unwrap();
    c.check(
        matches!(sir.verdict.witness(), Some(Witness::Rationality { player, .. }) if player == "e1"),
        "SIR violation names e1",
    );
    let lie = best_deviation(&net, Mechanism::CoreNearestCut, 0, &int(2), &caps, 8).unwrap();
    c.eq(&lie.best_report, &int(1), "best report of e1");
    c.check(
        lie.gain >= int(1),
        format!("deviation gain {} >= 1", format_rational(&lie.gain)),
    );
    for m in [Mechanism::Mc, Mechanism::Shapley] {
        for k in 0..net.edge_count() {
            let w = best_deviation(&net, m, k, &caps[k], &caps, 16).unwrap();
            c.eq(
                &w.gain,
                &zero(),
                &format!("{m} deviation gain of e{}", k + 1),
            );
        }
    }
    c.finish();
}

#[test]
fn criterion_05_source_sink_step() {
    let mut c = Criterion::new(5, "paying s-t edges first is needed for rationality");
    let net = fixtures::fig5();
    let caps = net.capacities();
    c.eq(
        &mc_no_step_one(&net, &caps).unwrap().payoffs[2],
        &ratio(5, 6),
        "MC_e3 without the first step",
    );
    c.eq(
        &mc_allocate(&net, &caps).unwrap().payoffs[2],
        &int(1),
        "MC_e3",
    );
    c.check(
        check_sir(&net, Mechanism::Mc, &caps).unwrap().verdict == Verdict::Pass,
        "MC passes SIR",
    );
    c.finish();
}

#[test]
fn criterion_06_core_cross_monotonicity() {
    let mut c = Criterion::new(
        6,
        "core selection fails cross monotonicity on the unit diamond",
    );
    let net = fixtures::fig9();
    let caps = net.capacities();
    let (lo, hi) = core_bounds(&net, &caps, 0).unwrap();
    c.eq(&lo, &zero(), "core min of e1");
    c.eq(&hi, &int(1), "core max of e1");
    let without = vec![zero(), int(1), int(1), int(1)];
    let bounds = core_bounds_all(&net, &without).unwrap();
    let expected = q(&[(0, 1), (1, 1), (0, 1), (0, 1)]);
    for (k, range) in bounds.ranges.iter().enumerate() {
        c.check(
            range.min == expected[k] && range.max == expected[k],
            format!(
                "core of e{} with c1 = 0 pinned to {}",
                k + 1,
                format_rational(&expected[k])
            ),
        );
    }
    let report = check_cm(
        &net,
        Mechanism::CoreNearestCut,
        &without,
        0,
        &[int(1)],
        CmCriterion::FullIncrease,
    )
    .unwrap();
    let before = core_select_nearest_cut(&net, &without).unwrap();
    let after = core_select_nearest_cut(&net, &caps).unwrap();
    let show = |v: &[Rational]| v.iter().map(format_rational).collect::<Vec<_>>().join(", ");
    c.check(
        report.is_violation(),
        format!(
            "check_cm violation for c1: 0 -> 1 (payoffs ({}) -> ({}))",
            show(&before.payoffs),
            show(&after.payoffs)
        ),
    );
    // the mirrored step on the sink side, for the record
    let sink_side = vec![int(1), int(1), zero(), int(1)];
    let mirrored = check_cm(
        &net,
        Mechanism::CoreNearestCut,
        &sink_side,
        2,
        &[int(1)],
        CmCriterion::FullIncrease,
    )
    .unwrap();
    println!(
        "    note: c3: 0 -> 1 gives a violation: {}",
        mirrored.is_violation()
    );
    c.finish();
}

fn cut_oracle_agrees(c: &mut Criterion, label: &str, net: &FlowNetwork) {
    let reports = net.capacities();
    let fast = enumerate_minimal_cuts(net, &reports).unwrap();
    let oracle = minimal_cuts_bruteforce(net, &strip_source_sink_edges(net, &reports)).unwrap();
    c.check(fast == oracle, format!("{label}: cut families differ"));
    let min = fast.min_capacity().cloned().unwrap_or_else(zero);
    c.check(
        min == fast.remaining_flow_value,
        format!("{label}: min cut capacity differs from max flow"),
    );
}

#[test]
fn criterion_07_cut_enumeration_oracle() {
    let mut c = Criterion::new(7, "minimal cuts match the brute-force oracle");
    for (name, net) in fixtures::all() {
        cut_oracle_agrees(&mut c, name, &net);
    }
    for seed in 0..200 {
        let net = random_network(seed, 6, 8, CapLattice::default()).unwrap();
        cut_oracle_agrees(&mut c, &format!("seed {seed}"), &net);
    }
    c.finish();
}

#[test]
fn criterion_08_cross_effect_sweeps() {
    let mut c = Criterion::new(8, "MC cross-effect sweeps follow the pair structure");
    let net = fixtures::fig4();
    let reports = net.capacities();
    for (e2, structure) in [
        (2, PairStructure::Independent),
        (1, PairStructure::Inclusive),
    ] {
        let r = cross_effect_sweep(&net, &reports, 0, e2, 8).unwrap();
        let trace = r.trace.as_ref().unwrap();
        c.check(
            trace.structure == Some(structure),
            format!("pair (e1, e{}) is {structure:?}", e2 + 1),
        );
        c.check(
            trace.critical_value.as_ref().and_then(|x| x.finite()) == Some(&ratio(3, 2)),
            "critical value 3/2",
        );
        c.check(trace.points.len() >= 16, "at least 8 points per interval");
        c.check(
            r.verdict == Verdict::Pass,
            format!("pair (e1, e{}): {:?}", e2 + 1, r.verdict),
        );
    }
    let w = fixtures::neither();
    let r = cross_effect_sweep(&w, &w.capacities(), 0, 3, 8).unwrap();
    c.check(
        r.trace.as_ref().unwrap().structure == Some(PairStructure::Neither),
        "witness pair is neither",
    );
    c.check(
        r.verdict == Verdict::Pass,
        format!("witness sweep: {:?}", r.verdict),
    );
    c.finish();
}

#[test]
fn criterion_09_property_fuzzing() {
    let mut c = Criterion::new(
        9,
        "random corpus: MC clean on all five properties, Shapley on DSIC and SIR",
    );
    let config = CorpusConfig {
        networks: 100,
        ..CorpusConfig::default()
    };
    let mc = audit_corpus(
        &config,
        Mechanism::Mc,
        &Property::MECHANISM_PROPERTIES,
        Execution::default(),
    )
    .unwrap();
    for t in &mc.tallies {
        c.check(
            t.checks > 0 && t.violations == 0,
            format!(
                "MC {:?}: {} of {} checks violated",
                t.property, t.violations, t.checks
            ),
        );
    }
    let sh = audit_corpus(
        &config,
        Mechanism::Shapley,
        &[Property::Dsic, Property::Sir],
        Execution::default(),
    )
    .unwrap();
    for t in &sh.tallies {
        c.check(
            t.checks > 0 && t.violations == 0,
            format!(
                "Shapley {:?}: {} of {} checks violated",
                t.property, t.violations, t.checks
            ),
        );
    }
    c.finish();
}

#[test]
fn criterion_10_complementarity_probes() {
    let mut c = Criterion::new(
        10,
        "Shapley moves with series and against parallel partners",
    );
    let cases = [
        (
            "series chain",
            fixtures::fig6_ci(),
            StructuralPattern::SeriesChain,
            Relation::Complementary,
        ),
        (
            "parallel pair",
            fixtures::fig7_si(),
            StructuralPattern::Parallel,
            Relation::Substitutable,
        ),
    ];
    for (label, net, pattern, relation) in cases {
        for (i, j) in [(0, 1), (1, 0)] {
            let v = probe_constant_relation(&net, i, j, 50, 11).unwrap();
            c.check(
                v.pattern == Some(pattern),
                format!("{label} ({i},{j}): pattern {:?}", v.pattern),
            );
            c.check(
                v.constant_claim == ConstantClaim::Supported,
                format!("{label} ({i},{j}): {:?}", v.constant_claim),
            );
            c.check(
                v.relation == relation,
                format!("{label} ({i},{j}): relation {:?}", v.relation),
            );
            let probe = shapley_monotonicity_probe(&net, i, j, 50, 11).unwrap();
            c.check(
                probe.verdict == Verdict::Pass,
                format!("{label} ({i},{j}): {:?}", probe.verdict),
            );
        }
    }
    c.finish();
}
