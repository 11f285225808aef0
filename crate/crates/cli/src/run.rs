use std::fs;
use std::path::Path;

use flowmech::audits::{
    audit_corpus, best_deviation, check_cm, check_dsic, check_mp, check_sir, check_sp,
    cross_effect_sweep, default_increase_grid, default_split_grid, shapley_monotonicity_probe,
    AuditReport, CmCriterion, CorpusConfig, Property, Verdict,
};
use flowmech::complementarity::{classify_complementarity, probe_constant_relation};
use flowmech::cuts::{
    classify_pair_structure, critical_value, enumerate_minimal_cuts, min_cut_nearest_source,
    minimal_cuts_bruteforce, strip_source_sink_edges, PairStructure,
};
use flowmech::fixtures;
use flowmech::flow::{max_flow, max_flow_value};
use flowmech::game::ReportProfile;
use flowmech::mechanisms::{
    core_bounds_all, core_check, core_select_nearest_cut, mc_allocate, mc_no_step_one, shapley,
    shapley_permutation_oracle, Allocation, CoreVerdict, Mechanism,
};
use flowmech::network::{parse_network, prune, validate, Severity, ValidationReport};
use flowmech::rational::{format_rational, zero};
use flowmech::{Execution, FlowError, FlowNetwork, Rational};
use serde_json::{json, Value};
use thiserror::Error;

use crate::args::{AuditArgs, AuditTarget, Cli, CmMode, Command, Pair};
use crate::output::{InputDigest, Text};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(
        "`{path}` is not a valid network (rerun with --prune to drop off-path edges):\n{details}"
    )]
    Invalid { path: String, details: String },
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Default)]
pub struct Outcome {
    pub input: Option<InputDigest>,
    pub results: Value,
    pub violations: usize,
    pub text: Text,
    pub exit: i32,
}

struct Loaded {
    net: FlowNetwork,
    reports: Vec<Rational>,
    digest: InputDigest,
    pruned: Vec<String>,
}

fn q(x: &Rational) -> String {
    format_rational(x)
}

fn read(path: &Path) -> Result<(String, InputDigest)> {
    let shown = path.display().to_string();
    let bytes = fs::read(path).map_err(|source| CliError::Io {
        path: shown.clone(),
        source,
    })?;
    let digest = InputDigest::of(&shown, &bytes);
    let text = String::from_utf8(bytes)
        .map_err(|_| CliError::Usage(format!("`{shown}` is not UTF-8 text")))?;
    Ok((text, digest))
}

fn diagnostics_text(report: &ValidationReport) -> String {
    report
        .diagnostics
        .iter()
        .map(|d| {
            let level = match d.severity {
                Severity::Error => "error",
                Severity::Warning => "warning",
            };
            format!("  {level}: {}", d.message)
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn load(path: &Path, cli: &Cli) -> Result<Loaded> {
    let (text, digest) = read(path)?;
    let mut net = parse_network(&text)?;
    let mut pruned = Vec::new();
    let report = validate(&net);
    if !report.ok {
        if !cli.prune {
            return Err(CliError::Invalid {
                path: digest.path,
                details: diagnostics_text(&report),
            });
        }
        let (smaller, report) = prune(&net)?;
        if !report.ok {
            return Err(CliError::Invalid {
                path: digest.path,
                details: diagnostics_text(&report),
            });
        }
        pruned = report
            .diagnostics
            .iter()
            .filter(|d| d.severity == Severity::Warning)
            .map(|d| d.entity.clone())
            .collect();
        net = smaller;
    }
    let reports = ReportProfile::with_overrides(&net, &cli.reports)?
        .reported()
        .to_vec();
    Ok(Loaded {
        net,
        reports,
        digest,
        pruned,
    })
}

impl Loaded {
    fn outcome(&self, text: &mut Text) -> Outcome {
        if !self.pruned.is_empty() {
            text.line(format!("pruned: {}", self.pruned.join(", ")));
        }
        Outcome {
            input: Some(self.digest.clone()),
            ..Outcome::default()
        }
    }

    fn edge(&self, id: &str) -> Result<usize> {
        Ok(self.net.require_edge(id)?)
    }

    fn pair(&self, pair: &Pair) -> Result<(usize, usize)> {
        let (a, b) = (self.edge(&pair.edge)?, self.edge(&pair.edge2)?);
        if a == b {
            return Err(CliError::Usage("--edge and --edge2 must differ".into()));
        }
        Ok((a, b))
    }

    fn id(&self, k: usize) -> &str {
        &self.net.edge(k).id
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Validate(input) => run_validate(&input.network, cli),
        Command::Maxflow(input) => run_maxflow(&load(&input.network, cli)?),
        Command::Cuts(input) => run_cuts(&load(&input.network, cli)?, cli.oracle),
        Command::Shapley(input) => {
            let l = load(&input.network, cli)?;
            let alloc = if cli.oracle {
                shapley_permutation_oracle(&l.net, &l.reports)?
            } else {
                shapley(&l.net, &l.reports)?
            };
            Ok(allocation(&l, &alloc, Vec::new()))
        }
        Command::Mc { input, no_step_one } => {
            let l = load(&input.network, cli)?;
            let alloc = if *no_step_one {
                mc_no_step_one(&l.net, &l.reports)?
            } else {
                mc_allocate(&l.net, &l.reports)?
            };
            Ok(allocation(&l, &alloc, Vec::new()))
        }
        Command::CoreCheck {
            input,
            payoffs,
            mechanism,
        } => run_core_check(&load(&input.network, cli)?, payoffs, *mechanism),
        Command::CoreBounds(input) => run_core_bounds(&load(&input.network, cli)?),
        Command::CoreSelect(input) => {
            let l = load(&input.network, cli)?;
            let alloc = core_select_nearest_cut(&l.net, &l.reports)?;
            let cut: Vec<String> = min_cut_nearest_source(&l.net, &l.reports)
                .into_iter()
                .map(|k| l.id(k).to_string())
                .collect();
            Ok(allocation(&l, &alloc, vec![("cut", json!(cut))]))
        }
        Command::ClassifyPair {
            input,
            pair,
            samples,
            seed,
        } => run_classify(&load(&input.network, cli)?, pair, *samples, *seed),
        Command::Deviate {
            input,
            mechanism,
            edge,
            grid,
        } => run_deviate(&load(&input.network, cli)?, *mechanism, edge, *grid),
        Command::Audit(args) => run_audit(args, cli),
        Command::Sweep {
            input,
            pair,
            points,
        } => run_sweep(&load(&input.network, cli)?, pair, *points),
        Command::Fixtures { name, out } => run_fixtures(name.as_deref(), out.as_deref()),
    }
}

fn run_validate(path: &Path, cli: &Cli) -> Result<Outcome> {
    let (source, digest) = read(path)?;
    let net = parse_network(&source)?;
    let mut report = validate(&net);
    let mut pruned_network = None;
    if !report.ok && cli.prune {
        let (smaller, after) = prune(&net)?;
        pruned_network = Some(smaller.render());
        report = after;
    }
    let mut text = Text::default();
    text.line(format!(
        "{}: {} nodes, {} edges, {}",
        digest.path,
        net.node_count(),
        net.edge_count(),
        if report.ok { "ok" } else { "invalid" }
    ));
    if !report.diagnostics.is_empty() {
        text.line(diagnostics_text(&report));
    }
    Ok(Outcome {
        input: Some(digest),
        results: json!({
            "ok": report.ok,
            "diagnostics": report.diagnostics,
            "pruned_network": pruned_network,
        }),
        exit: if report.ok { EXIT_OK } else { EXIT_ERROR },
        text,
        violations: 0,
    })
}

fn run_maxflow(l: &Loaded) -> Result<Outcome> {
    let mut text = Text::default();
    let mut out = l.outcome(&mut text);
    let flow = max_flow(&l.net, &l.reports);
    text.line(format!("max flow: {}", q(&flow.value)));
    text.blank();
    let rows: Vec<Vec<String>> = (0..l.net.edge_count())
        .map(|k| {
            vec![
                l.id(k).to_string(),
                q(&l.reports[k]),
                q(&flow.edge_flows[k]),
            ]
        })
        .collect();
    text.table(&["edge", "report", "flow"], &rows);
    let source_side: Vec<&str> = flow
        .source_nodes()
        .into_iter()
        .map(|v| l.net.node_name(v))
        .collect();
    out.results = json!({
        "value": q(&flow.value),
        "edges": rows.iter().map(|r| json!({"edge": r[0], "report": r[1], "flow": r[2]})).collect::<Vec<_>>(),
        "source_side": source_side,
    });
    out.text = text;
    Ok(out)
}

fn run_cuts(l: &Loaded, oracle: bool) -> Result<Outcome> {
    let mut text = Text::default();
    let mut out = l.outcome(&mut text);
    let family = if oracle {
        minimal_cuts_bruteforce(&l.net, &strip_source_sink_edges(&l.net, &l.reports))?
    } else {
        enumerate_minimal_cuts(&l.net, &l.reports)?
    };
    let st: Vec<&str> = (0..l.net.edge_count())
        .filter(|&k| l.net.is_source_sink_edge(k))
        .map(|k| l.id(k))
        .collect();
    if !st.is_empty() {
        text.line(format!("s-t edges (excluded): {}", st.join(", ")));
    }
    text.line(format!(
        "{} minimal cut(s), remaining max flow {}",
        family.len(),
        q(&family.remaining_flow_value)
    ));
    text.blank();
    let rows: Vec<Vec<String>> = family
        .cuts
        .iter()
        .map(|c| vec![format!("{{{}}}", c.ids(&l.net).join(", ")), q(&c.capacity)])
        .collect();
    text.table(&["cut", "capacity"], &rows);
    out.results = json!({
        "source_sink_edges": st,
        "remaining_flow_value": q(&family.remaining_flow_value),
        "cuts": family.cuts.iter().map(|c| json!({"edges": c.ids(&l.net), "capacity": q(&c.capacity)})).collect::<Vec<_>>(),
    });
    out.text = text;
    Ok(out)
}

fn allocation(l: &Loaded, alloc: &Allocation, extra: Vec<(&str, Value)>) -> Outcome {
    let mut text = Text::default();
    let mut out = l.outcome(&mut text);
    let value = max_flow_value(&l.net, &l.reports);
    text.line(format!(
        "{}: total {} (max flow {})",
        alloc.mechanism,
        q(&alloc.total),
        q(&value)
    ));
    for (key, v) in &extra {
        if let Value::Array(items) = v {
            let parts: Vec<&str> = items.iter().filter_map(Value::as_str).collect();
            text.line(format!("{key}: {}", parts.join(", ")));
        }
    }
    text.blank();
    let rows: Vec<Vec<String>> = (0..l.net.edge_count())
        .map(|k| vec![l.id(k).to_string(), q(&l.reports[k]), q(&alloc.payoffs[k])])
        .collect();
    text.table(&["edge", "report", "payoff"], &rows);
    let mut results = json!({
        "mechanism": alloc.mechanism,
        "max_flow": q(&value),
        "total": q(&alloc.total),
        "payoffs": rows.iter().map(|r| json!({"edge": r[0], "report": r[1], "payoff": r[2]})).collect::<Vec<_>>(),
    });
    for (key, v) in extra {
        results[key] = v;
    }
    out.results = results;
    out.text = text;
    out
}

fn run_core_check(
    l: &Loaded,
    payoffs: &[(String, Rational)],
    mechanism: Mechanism,
) -> Result<Outcome> {
    let mut text = Text::default();
    let mut out = l.outcome(&mut text);
    let (x, source) = if payoffs.is_empty() {
        let alloc = mechanism.allocate(&l.net, &l.reports)?;
        (alloc.payoffs, mechanism.label().to_string())
    } else {
        let mut x = vec![zero(); l.net.edge_count()];
        for (id, v) in payoffs {
            x[l.edge(id)?] = v.clone();
        }
        (x, "given".to_string())
    };
    let verdict = core_check(&l.net, &l.reports, &x)?;
    let verdict_json = match &verdict {
        CoreVerdict::InCore => {
            text.line(format!("payoffs ({source}) are in the core"));
            json!({"verdict": "in-core"})
        }
        CoreVerdict::Inefficient { allocated, value } => {
            text.line(format!(
                "payoffs ({source}) are not in the core: they distribute {} but the grand coalition is worth {}",
                q(allocated),
                q(value)
            ));
            json!({"verdict": "inefficient", "allocated": q(allocated), "value": q(value)})
        }
        CoreVerdict::Violation {
            coalition,
            value,
            allocated,
        } => {
            let ids = coalition.ids(&l.net);
            text.line(format!(
                "payoffs ({source}) are not in the core: coalition {{{}}} is worth {} but receives {}",
                ids.join(", "),
                q(value),
                q(allocated)
            ));
            json!({"verdict": "violation", "coalition": ids, "value": q(value), "allocated": q(allocated)})
        }
    };
    text.blank();
    let rows: Vec<Vec<String>> = (0..l.net.edge_count())
        .map(|k| vec![l.id(k).to_string(), q(&l.reports[k]), q(&x[k])])
        .collect();
    text.table(&["edge", "report", "payoff"], &rows);
    out.results = json!({
        "source": source,
        "payoffs": rows.iter().map(|r| json!({"edge": r[0], "report": r[1], "payoff": r[2]})).collect::<Vec<_>>(),
        "core": verdict_json,
    });
    out.text = text;
    Ok(out)
}

fn run_core_bounds(l: &Loaded) -> Result<Outcome> {
    let mut text = Text::default();
    let mut out = l.outcome(&mut text);
    let bounds = core_bounds_all(&l.net, &l.reports)?;
    if !bounds.feasible {
        text.line("the core is empty");
        out.results = json!({"feasible": false, "ranges": []});
        out.text = text;
        return Ok(out);
    }
    let rows: Vec<Vec<String>> = bounds
        .ranges
        .iter()
        .enumerate()
        .map(|(k, r)| vec![l.id(k).to_string(), q(&l.reports[k]), q(&r.min), q(&r.max)])
        .collect();
    text.table(&["edge", "report", "core min", "core max"], &rows);
    out.results = json!({
        "feasible": true,
        "ranges": rows.iter().map(|r| json!({"edge": r[0], "report": r[1], "min": r[2], "max": r[3]})).collect::<Vec<_>>(),
    });
    out.text = text;
    Ok(out)
}

fn run_classify(
    l: &Loaded,
    pair: &Pair,
    samples: Option<usize>,
    seed: Option<u64>,
) -> Result<Outcome> {
    let mut text = Text::default();
    let mut out = l.outcome(&mut text);
    let (i, j) = l.pair(pair)?;
    let (a, b) = (l.id(i).to_string(), l.id(j).to_string());
    let mut notes = Vec::new();

    let structure = if l.net.is_source_sink_edge(i) || l.net.is_source_sink_edge(j) {
        notes.push("s-t edges lie in no minimal cut; cut structure not classified".to_string());
        None
    } else {
        let s = classify_pair_structure(&l.net, &l.reports, i, j)?;
        if s == PairStructure::Inclusive {
            notes.push(
                "inclusive is report-relative: the capacity condition was checked against the current reports only"
                    .to_string(),
            );
        }
        Some(s)
    };
    let local = classify_complementarity(&l.net, i, j, &l.reports)?;
    let constant = match samples {
        Some(n) => {
            let seed = seed.ok_or_else(|| CliError::Usage("--samples needs --seed".into()))?;
            Some(probe_constant_relation(&l.net, i, j, n, seed)?)
        }
        None => None,
    };

    let structure_label = structure.map_or("-".to_string(), |s| format!("{s:?}").to_lowercase());
    let mut rows = vec![
        vec!["pair".to_string(), format!("({a}, {b})")],
        vec!["cut structure".to_string(), structure_label],
        vec![
            "relation at reports".to_string(),
            format!("{:?}", local.relation).to_lowercase(),
        ],
        vec![
            "pattern".to_string(),
            local
                .pattern
                .map_or("-".to_string(), |p| p.label().to_string()),
        ],
        vec!["probes".to_string(), local.probes.len().to_string()],
    ];
    if let Some(c) = &constant {
        rows.push(vec![
            "sampled relation".to_string(),
            format!("{:?}", c.relation).to_lowercase(),
        ]);
        rows.push(vec![
            "constant claim".to_string(),
            serde_json::to_value(&c.constant_claim).expect("claims serialize")["claim"]
                .as_str()
                .unwrap_or("-")
                .to_string(),
        ]);
    }
    text.table(&["", "value"], &rows);
    for n in &notes {
        text.line(format!("note: {n}"));
    }
    out.results = json!({
        "pair": [a, b],
        "structure": structure,
        "relation": local.relation,
        "pattern": local.pattern,
        "probes": local.probes.len(),
        "sampled": constant.as_ref().map(|c| json!({
            "samples": c.samples,
            "seed": seed,
            "relation": c.relation,
            "constant_claim": c.constant_claim,
        })),
        "notes": notes,
    });
    out.text = text;
    Ok(out)
}

fn run_deviate(l: &Loaded, mechanism: Mechanism, edge: &str, grid: usize) -> Result<Outcome> {
    let mut text = Text::default();
    let mut out = l.outcome(&mut text);
    let k = l.edge(edge)?;
    let truth = l.net.capacities()[k].clone();
    let w = best_deviation(&l.net, mechanism, k, &truth, &l.reports, grid)?;
    if w.gain > zero() {
        text.line(format!(
            "{mechanism}: {} gains {} by reporting {} instead of {}",
            w.player,
            q(&w.gain),
            q(&w.best_report),
            q(&w.truth)
        ));
    } else {
        text.line(format!(
            "{mechanism}: no profitable report for {} on the grid",
            w.player
        ));
    }
    let value = serde_json::to_value(&w).expect("witnesses serialize");
    text.fields(&value, 2);
    out.results = json!({"mechanism": mechanism, "deviation": value});
    out.text = text;
    Ok(out)
}

struct Audited {
    subject: String,
    report: AuditReport,
}

fn render_audits(text: &mut Text, audits: &[Audited]) {
    for a in audits {
        let r = &a.report;
        let mech = r.mechanism.map_or(String::new(), |m| format!(" {m}"));
        let head = format!("{}{} {}", r.property.label(), mech, a.subject);
        match &r.verdict {
            Verdict::Pass => text.line(format!("PASS       {head}")),
            Verdict::NotTested { reason } => text.line(format!("NOT TESTED {head}: {reason}")),
            Verdict::Violation { witness } => {
                text.line(format!("VIOLATION  {head}"));
                text.fields(
                    &serde_json::to_value(witness).expect("witnesses serialize"),
                    4,
                );
            }
        }
        for n in &r.notes {
            text.line(format!("    note: {n}"));
        }
    }
}

fn audit_json(audits: &[Audited]) -> Value {
    Value::Array(
        audits
            .iter()
            .map(|a| json!({"subject": a.subject, "report": a.report}))
            .collect(),
    )
}

fn target_properties(target: AuditTarget) -> Vec<Property> {
    match target {
        AuditTarget::Dsic => vec![Property::Dsic],
        AuditTarget::Sir => vec![Property::Sir],
        AuditTarget::Sp => vec![Property::Sp],
        AuditTarget::Mp => vec![Property::Mp],
        AuditTarget::Cm => vec![Property::Cm],
        AuditTarget::CrossEffect => vec![Property::CrossEffect],
        AuditTarget::Complementarity => vec![Property::ShapleyMonotonicity],
        AuditTarget::All => Property::MECHANISM_PROPERTIES.to_vec(),
    }
}

fn run_audit(args: &AuditArgs, cli: &Cli) -> Result<Outcome> {
    let properties = target_properties(args.property);
    if let Some(networks) = args.corpus {
        return run_corpus(args, networks, &properties);
    }
    let path = args
        .network
        .as_deref()
        .ok_or_else(|| CliError::Usage("audit needs a network file or --corpus N".into()))?;
    let l = load(path, cli)?;
    let mut text = Text::default();
    let mut out = l.outcome(&mut text);
    let m = args.mechanism;
    let edges: Vec<usize> = match &args.edge {
        Some(id) => vec![l.edge(id)?],
        None => (0..l.net.edge_count()).collect(),
    };
    let pairs =
        |keep: &dyn Fn(usize, usize) -> bool, ordered: bool| -> Result<Vec<(usize, usize)>> {
            match (&args.edge, &args.edge2) {
                (Some(a), Some(b)) => {
                    let p = Pair {
                        edge: a.clone(),
                        edge2: b.clone(),
                    };
                    Ok(vec![l.pair(&p)?])
                }
                (None, Some(_)) => Err(CliError::Usage("--edge2 needs --edge".into())),
                _ => {
                    let n = l.net.edge_count();
                    Ok((0..n)
                        .flat_map(|a| (0..n).map(move |b| (a, b)))
                        .filter(|&(a, b)| a != b && (ordered || a < b))
                        .filter(|&(a, _)| args.edge.as_ref().is_none_or(|id| l.id(a) == id))
                        .filter(|&(a, b)| keep(a, b))
                        .collect())
                }
            }
        };

    let mut audits = Vec::new();
    let mut push = |subject: String, report: AuditReport| audits.push(Audited { subject, report });
    for p in &properties {
        match p {
            Property::Dsic => push(
                "all players".into(),
                check_dsic(&l.net, m, &l.reports, args.grid)?,
            ),
            Property::Sir => push("all players".into(), check_sir(&l.net, m, &l.reports)?),
            Property::Sp => {
                for &e in &edges {
                    let grid = default_split_grid(&l.reports[e]);
                    push(
                        l.id(e).to_string(),
                        check_sp(&l.net, m, &l.reports, e, &grid)?,
                    );
                }
            }
            Property::Mp => {
                let found = pairs(&|a, b| l.net.are_parallel(a, b), false)?;
                if found.is_empty() {
                    text.line(format!("MP {m}: no parallel edge pairs"));
                }
                for (a, b) in found {
                    push(
                        format!("({}, {})", l.id(a), l.id(b)),
                        check_mp(&l.net, m, &l.reports, a, b)?,
                    );
                }
            }
            Property::Cm => {
                let criterion = match args.cm {
                    CmMode::Full => CmCriterion::FullIncrease,
                    CmMode::Any => CmCriterion::AnyIncrease,
                };
                for &i in &edges {
                    let grid = default_increase_grid(&l.net, &l.reports, i);
                    push(
                        format!("raising {}", l.id(i)),
                        check_cm(&l.net, m, &l.reports, i, &grid, criterion)?,
                    );
                }
            }
            Property::CrossEffect => {
                let st = |k| l.net.is_source_sink_edge(k);
                for (a, b) in pairs(&|a, b| !st(a) && !st(b), true)? {
                    let mut report = cross_effect_sweep(&l.net, &l.reports, a, b, args.points)?;
                    report.trace = None;
                    push(format!("({}, {})", l.id(a), l.id(b)), report);
                }
            }
            Property::ShapleyMonotonicity => {
                let seed = args
                    .seed
                    .ok_or_else(|| CliError::Usage("audit complementarity needs --seed".into()))?;
                for (a, b) in pairs(&|_, _| true, true)? {
                    push(
                        format!("({}, {})", l.id(a), l.id(b)),
                        shapley_monotonicity_probe(&l.net, a, b, args.samples, seed)?,
                    );
                }
            }
        }
    }
    render_audits(&mut text, &audits);
    let violations = audits.iter().filter(|a| a.report.is_violation()).count();
    text.line(summary_line(audits.len(), violations));
    out.results = json!({"mechanism": m, "audits": audit_json(&audits)});
    out.violations = violations;
    out.exit = if violations > 0 {
        EXIT_VIOLATION
    } else {
        EXIT_OK
    };
    out.text = text;
    Ok(out)
}

fn summary_line(checks: usize, violations: usize) -> String {
    format!("{checks} check(s), {violations} violation(s)")
}

fn run_corpus(args: &AuditArgs, networks: usize, properties: &[Property]) -> Result<Outcome> {
    if args.network.is_some() {
        return Err(CliError::Usage(
            "--corpus replaces the network file; give one or the other".into(),
        ));
    }
    let seed = args
        .seed
        .ok_or_else(|| CliError::Usage("--corpus needs --seed".into()))?;
    if properties.contains(&Property::ShapleyMonotonicity) {
        return Err(CliError::Usage(
            "complementarity probes run on a network file, not a corpus".into(),
        ));
    }
    if args.cm == CmMode::Any || args.edge.is_some() || args.edge2.is_some() {
        return Err(CliError::Usage(
            "--cm any, --edge and --edge2 apply to a single network, not a corpus".into(),
        ));
    }
    let config = CorpusConfig {
        networks,
        seed,
        max_nodes: args.max_nodes,
        max_edges: args.max_edges,
        grid_size: args.grid,
        ..CorpusConfig::default()
    };
    let summary = audit_corpus(&config, args.mechanism, properties, Execution::default())?;
    let mut text = Text::default();
    text.line(format!(
        "{} random networks from seed {}, mechanism {}",
        networks, seed, args.mechanism
    ));
    text.blank();
    let rows: Vec<Vec<String>> = summary
        .tallies
        .iter()
        .map(|t| {
            vec![
                t.property.label().to_string(),
                t.checks.to_string(),
                t.violations.to_string(),
            ]
        })
        .collect();
    text.table(&["property", "checks", "violations"], &rows);
    if !summary.violations.is_empty() {
        text.blank();
        let audits: Vec<Audited> = summary
            .violations
            .iter()
            .map(|r| Audited {
                subject: String::new(),
                report: r.clone(),
            })
            .collect();
        render_audits(&mut text, &audits);
    }
    let violations = summary.violations.len();
    Ok(Outcome {
        input: None,
        results: serde_json::to_value(&summary).expect("summaries serialize"),
        violations,
        text,
        exit: if violations > 0 {
            EXIT_VIOLATION
        } else {
            EXIT_OK
        },
    })
}

fn run_sweep(l: &Loaded, pair: &Pair, points: usize) -> Result<Outcome> {
    let mut text = Text::default();
    let mut out = l.outcome(&mut text);
    let (a, b) = l.pair(pair)?;
    let report = cross_effect_sweep(&l.net, &l.reports, a, b, points)?;
    let x = critical_value(&l.net, &l.reports, a);
    let mut audits = vec![Audited {
        subject: format!("({}, {})", l.id(a), l.id(b)),
        report,
    }];
    render_audits(&mut text, &audits);
    let trace = audits[0].report.trace.take();
    if let Some(trace) = &trace {
        text.line(format!(
            "structure {}, critical value of {}: {}",
            trace
                .structure
                .map_or("-".to_string(), |s| format!("{s:?}").to_lowercase()),
            l.id(a),
            x
        ));
        text.blank();
        let rows: Vec<Vec<String>> = trace
            .points
            .iter()
            .map(|p| vec![q(&p.report), q(&p.max_flow), q(&p.observed)])
            .collect();
        let h1 = format!("report {}", l.id(a));
        let h3 = format!("MC {}", l.id(b));
        text.table(&[&h1, "max flow", &h3], &rows);
    }
    let violations = usize::from(audits[0].report.is_violation());
    out.results = json!({"audit": audit_json(&audits)[0], "trace": trace});
    out.violations = violations;
    out.exit = if violations > 0 {
        EXIT_VIOLATION
    } else {
        EXIT_OK
    };
    out.text = text;
    Ok(out)
}

fn run_fixtures(name: Option<&str>, out_dir: Option<&Path>) -> Result<Outcome> {
    let chosen: Vec<(&str, &str)> = match name {
        Some(n) => {
            let text = fixtures::text(n).ok_or_else(|| {
                let names: Vec<&str> = fixtures::FIXTURES.iter().map(|(n, _)| *n).collect();
                CliError::Usage(format!(
                    "unknown fixture `{n}`; known: {}",
                    names.join(", ")
                ))
            })?;
            vec![(n, text)]
        }
        None => fixtures::FIXTURES.to_vec(),
    };
    let mut text = Text::default();
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.display().to_string(),
            source,
        })?;
        for (n, body) in &chosen {
            let path = dir.join(format!("{n}.net"));
            fs::write(&path, body).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?;
            text.line(format!("wrote {}", path.display()));
        }
    } else if chosen.len() == 1 {
        text = Text::default();
        for line in chosen[0].1.lines() {
            text.line(line);
        }
    } else {
        for (n, body) in &chosen {
            text.line(format!("# ==> {n}.net"));
            for line in body.lines() {
                text.line(line);
            }
            text.blank();
        }
    }
    Ok(Outcome {
        input: None,
        results: json!({
            "fixtures": chosen.iter().map(|(n, body)| json!({"name": n, "network": body})).collect::<Vec<_>>(),
        }),
        violations: 0,
        text,
        exit: EXIT_OK,
    })
}
