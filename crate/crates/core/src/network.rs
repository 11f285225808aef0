//! Flow networks: representation, text formats and structural validation.
//!
//! Two equivalent text encodings are accepted by [`parse_network`]:
//!
//! ```text
//! # line format
//! source s
//! sink t
//! node A
//! edge e1 s A 3/2
//! s -e2:0.5-> A
//! A -e3:2-> t
//! ```
//!
//! and a JSON object `{"nodes": [..], "edges": [{"id", "from", "to", "cap"}],
//! "source", "sink"}` with capacities given as strings (`"p/q"`) or integers.
//! When `source`/`sink` are omitted they are inferred by degree.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{FlowError, Result};
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub tail: usize,
    pub head: usize,
    pub capacity: Rational,
}

/// Directed graph with one source, one sink and exact capacities.
///
/// Immutable once built. Structural assumptions (acyclic, every edge on an
/// s-t path, positive capacities) are checked by [`validate`], not here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowNetwork {
    nodes: Vec<String>,
    edges: Vec<Edge>,
    source: usize,
    sink: usize,
    out_edges: Vec<Vec<usize>>,
    in_edges: Vec<Vec<usize>>,
    // Residual arcs per node ordered by edge id: (edge index, forward?).
    arcs: Vec<Vec<(usize, bool)>>,
}

impl FlowNetwork {
    /// Builds a network from already-resolved node indices.
    pub fn new(nodes: Vec<String>, edges: Vec<Edge>, source: usize, sink: usize) -> Result<Self> {
        let n = nodes.len();
        let mut seen_nodes = HashMap::new();
        for (i, name) in nodes.iter().enumerate() {
            if seen_nodes.insert(name.as_str(), i).is_some() {
                return Err(FlowError::Precondition(format!("duplicate node `{name}`")));
            }
        }
        if source >= n {
            return Err(FlowError::MissingTerminal("source"));
        }
        if sink >= n {
            return Err(FlowError::MissingTerminal("sink"));
        }
        let mut seen_edges = HashMap::new();
        for e in &edges {
            if seen_edges.insert(e.id.as_str(), ()).is_some() {
                return Err(FlowError::DuplicateEdge(e.id.clone()));
            }
            if e.tail >= n || e.head >= n {
                return Err(FlowError::UnknownNode(format!("index in edge `{}`", e.id)));
            }
        }
        let mut out_edges = vec![Vec::new(); n];
        let mut in_edges = vec![Vec::new(); n];
        for (k, e) in edges.iter().enumerate() {
            out_edges[e.tail].push(k);
            in_edges[e.head].push(k);
        }
        let mut arcs: Vec<Vec<(usize, bool)>> = vec![Vec::new(); n];
        for (k, e) in edges.iter().enumerate() {
            arcs[e.tail].push((k, true));
            arcs[e.head].push((k, false));
        }
        for list in &mut arcs {
            list.sort_by(|a, b| edges[a.0].id.cmp(&edges[b.0].id).then(b.1.cmp(&a.1)));
        }
        Ok(FlowNetwork {
            nodes,
            edges,
            source,
            sink,
            out_edges,
            in_edges,
            arcs,
        })
    }

    /// Convenience constructor from `(id, tail, head, capacity)` tuples.
    /// Nodes are created in order of first appearance.
    pub fn from_edges(
        source: &str,
        sink: &str,
        edges: &[(&str, &str, &str, Rational)],
    ) -> Result<Self> {
        let mut builder = NetworkBuilder::default();
        builder.node(source);
        for (id, tail, head, cap) in edges {
            builder.edge(id, tail, head, cap.clone())?;
        }
        builder.node(sink);
        builder.source(source).sink(sink);
        builder.build()
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, k: usize) -> &Edge {
        &self.edges[k]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    pub fn node_name(&self, v: usize) -> &str {
        &self.nodes[v]
    }

    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n == name)
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    pub fn require_edge(&self, id: &str) -> Result<usize> {
        self.edge_index(id)
            .ok_or_else(|| FlowError::UnknownEdge(id.to_string()))
    }

    pub fn edge_ids(&self) -> Vec<String> {
        self.edges.iter().map(|e| e.id.clone()).collect()
    }

    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out_edges[v]
    }

    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.in_edges[v]
    }

    pub(crate) fn residual_arcs(&self, v: usize) -> &[(usize, bool)] {
        &self.arcs[v]
    }

    /// True capacities in edge order.
    pub fn capacities(&self) -> Vec<Rational> {
        self.edges.iter().map(|e| e.capacity.clone()).collect()
    }

    pub fn is_source_sink_edge(&self, k: usize) -> bool {
        let e = &self.edges[k];
        e.tail == self.source && e.head == self.sink
    }

    pub fn are_parallel(&self, a: usize, b: usize) -> bool {
        a != b
            && self.edges[a].tail == self.edges[b].tail
            && self.edges[a].head == self.edges[b].head
    }

    /// Checks a report vector's shape and sign (reports may be zero).
    pub fn check_reports(&self, reports: &[Rational]) -> Result<()> {
        if reports.len() != self.edges.len() {
            return Err(FlowError::ReportLength {
                expected: self.edges.len(),
                actual: reports.len(),
            });
        }
        for (e, r) in self.edges.iter().zip(reports) {
            if r.is_negative() {
                return Err(FlowError::Precondition(format!(
                    "edge `{}`: negative report {}",
                    e.id,
                    format_rational(r)
                )));
            }
        }
        Ok(())
    }

    /// Same topology with a different capacity vector.
    pub fn with_capacities(&self, caps: &[Rational]) -> FlowNetwork {
        let mut net = self.clone();
        for (e, c) in net.edges.iter_mut().zip(caps) {
            e.capacity = c.clone();
        }
        net
    }

    /// Renders the line format; `parse_network(&net.render())` reproduces `net`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "source {}", self.nodes[self.source]);
        let _ = writeln!(out, "sink {}", self.nodes[self.sink]);
        for n in &self.nodes {
            let _ = writeln!(out, "node {n}");
        }
        for e in &self.edges {
            let _ = writeln!(
                out,
                "edge {} {} {} {}",
                e.id,
                self.nodes[e.tail],
                self.nodes[e.head],
                format_rational(&e.capacity)
            );
        }
        out
    }

    /// JSON document in the structured input format.
    pub fn to_document(&self) -> NetworkDocument {
        NetworkDocument {
            nodes: Some(self.nodes.clone()),
            edges: self
                .edges
                .iter()
                .map(|e| DocumentEdge {
                    id: e.id.clone(),
                    from: self.nodes[e.tail].clone(),
                    to: self.nodes[e.head].clone(),
                    cap: serde_json::Value::String(format_rational(&e.capacity)),
                })
                .collect(),
            source: Some(self.nodes[self.source].clone()),
            sink: Some(self.nodes[self.sink].clone()),
        }
    }
}

/// Incremental construction by node name.
#[derive(Debug, Default)]
pub struct NetworkBuilder {
    nodes: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<Edge>,
    edge_ids: HashMap<String, usize>,
    source: Option<String>,
    sink: Option<String>,
    closed: bool,
}

impl NetworkBuilder {
    pub fn node(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        self.nodes.push(name.to_string());
        self.index.insert(name.to_string(), self.nodes.len() - 1);
        self.nodes.len() - 1
    }

    /// After this, edges may only reference declared nodes.
    pub fn close_node_set(&mut self) {
        self.closed = true;
    }

    fn resolve(&mut self, name: &str) -> Result<usize> {
        match self.index.get(name) {
            Some(&i) => Ok(i),
            None if self.closed => Err(FlowError::UnknownNode(name.to_string())),
            None => Ok(self.node(name)),
        }
    }

    pub fn edge(
        &mut self,
        id: &str,
        tail: &str,
        head: &str,
        capacity: Rational,
    ) -> Result<&mut Self> {
        if self.edge_ids.contains_key(id) {
            return Err(FlowError::DuplicateEdge(id.to_string()));
        }
        if !capacity.is_positive() {
            return Err(FlowError::NonPositiveCapacity {
                edge: id.to_string(),
                value: format_rational(&capacity),
            });
        }
        let tail = self.resolve(tail)?;
        let head = self.resolve(head)?;
        self.edge_ids.insert(id.to_string(), self.edges.len());
        self.edges.push(Edge {
            id: id.to_string(),
            tail,
            head,
            capacity,
        });
        Ok(self)
    }

    pub fn source(&mut self, name: &str) -> &mut Self {
        self.source = Some(name.to_string());
        self
    }

    pub fn sink(&mut self, name: &str) -> &mut Self {
        self.sink = Some(name.to_string());
        self
    }

    pub fn build(self) -> Result<FlowNetwork> {
        let n = self.nodes.len();
        let mut indeg = vec![0usize; n];
        let mut outdeg = vec![0usize; n];
        for e in &self.edges {
            outdeg[e.tail] += 1;
            indeg[e.head] += 1;
        }
        let lookup = |name: &str| {
            self.index
                .get(name)
                .copied()
                .ok_or_else(|| FlowError::UnknownNode(name.to_string()))
        };
        let source = match &self.source {
            Some(name) => lookup(name)?,
            None => (0..n)
                .find(|&v| indeg[v] == 0 && outdeg[v] > 0)
                .ok_or(FlowError::MissingTerminal("source"))?,
        };
        let sink = match &self.sink {
            Some(name) => lookup(name)?,
            None => (0..n)
                .find(|&v| outdeg[v] == 0 && indeg[v] > 0)
                .ok_or(FlowError::MissingTerminal("sink"))?,
        };
        FlowNetwork::new(self.nodes, self.edges, source, sink)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NetworkDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<Vec<String>>,
    pub edges: Vec<DocumentEdge>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sink: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DocumentEdge {
    pub id: String,
    pub from: String,
    pub to: String,
    pub cap: serde_json::Value,
}

/// Parses either text encoding. Does not validate.
pub fn parse_network(text: &str) -> Result<FlowNetwork> {
    if text.trim_start().starts_with('{') {
        parse_document(text)
    } else {
        parse_lines(text)
    }
}

fn syntax(line: usize, message: impl Into<String>) -> FlowError {
    FlowError::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_capacity(line: usize, id: &str, text: &str) -> Result<Rational> {
    let cap = parse_rational(text)
        .map_err(|_| syntax(line, format!("edge `{id}`: malformed capacity `{text}`")))?;
    if !cap.is_positive() {
        return Err(FlowError::NonPositiveCapacity {
            edge: id.to_string(),
            value: format_rational(&cap),
        });
    }
    Ok(cap)
}

fn parse_lines(text: &str) -> Result<FlowNetwork> {
    struct PendingEdge {
        line: usize,
        id: String,
        tail: String,
        head: String,
        cap: Rational,
    }
    let mut declared = Vec::new();
    let mut pending = Vec::new();
    let mut source = None;
    let mut sink = None;

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens.as_slice() {
            ["node", name] => declared.push((*name).to_string()),
            ["source", name] => source = Some((*name).to_string()),
            ["sink", name] => sink = Some((*name).to_string()),
            ["edge", id, tail, head, cap] => {
                let cap = parse_capacity(line, id, cap)?;
                pending.push(PendingEdge {
                    line,
                    id: (*id).to_string(),
                    tail: (*tail).to_string(),
                    head: (*head).to_string(),
                    cap,
                });
            }
            ["edge", ..] => {
                return Err(syntax(
                    line,
                    "expected `edge <id> <tail> <head> <capacity>`",
                ));
            }
            [tail, arrow, head]
                if arrow.starts_with('-') && arrow.ends_with("->") && arrow.len() > 3 =>
            {
                let inner = &arrow[1..arrow.len() - 2];
                let (id, cap) = inner
                    .split_once(':')
                    .ok_or_else(|| syntax(line, "expected `<tail> -<id>:<capacity>-> <head>`"))?;
                if id.is_empty() {
                    return Err(syntax(line, "empty edge id"));
                }
                let cap = parse_capacity(line, id, cap)?;
                pending.push(PendingEdge {
                    line,
                    id: id.to_string(),
                    tail: (*tail).to_string(),
                    head: (*head).to_string(),
                    cap,
                });
            }
            _ => return Err(syntax(line, format!("unrecognised line `{content}`"))),
        }
    }

    let mut builder = NetworkBuilder::default();
    let closed = !declared.is_empty();
    for name in &declared {
        builder.node(name);
    }
    if closed {
        builder.close_node_set();
    }
    for p in pending {
        builder
            .edge(&p.id, &p.tail, &p.head, p.cap)
            .map_err(|e| match e {
                FlowError::UnknownNode(n) => syntax(p.line, format!("unknown node `{n}`")),
                other => other,
            })?;
    }
    if let Some(s) = &source {
        builder.source(s);
    }
    if let Some(t) = &sink {
        builder.sink(t);
    }
    builder.build()
}

fn parse_document(text: &str) -> Result<FlowNetwork> {
    let doc: NetworkDocument =
        serde_json::from_str(text).map_err(|e| syntax(e.line(), e.to_string()))?;
    let mut builder = NetworkBuilder::default();
    if let Some(nodes) = &doc.nodes {
        for n in nodes {
            builder.node(n);
        }
        builder.close_node_set();
    }
    for (k, e) in doc.edges.iter().enumerate() {
        let cap_text = match &e.cap {
            serde_json::Value::String(s) => s.clone(),
            serde_json::Value::Number(n) => n.to_string(),
            other => {
                return Err(syntax(
                    0,
                    format!("edge #{k} `{}`: bad capacity {other}", e.id),
                ))
            }
        };
        let cap = parse_capacity(0, &e.id, &cap_text)?;
        builder.edge(&e.id, &e.from, &e.to, cap)?;
    }
    if let Some(s) = &doc.source {
        builder.source(s);
    }
    if let Some(t) = &doc.sink {
        builder.sink(t);
    }
    builder.build()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagnosticCode {
    CycleDetected,
    MultipleSources,
    MultipleSinks,
    BadSource,
    BadSink,
    SourceIsSink,
    NonPositiveCapacity,
    EdgeOffPath,
    PrunedEdge,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: DiagnosticCode,
    pub message: String,
    pub entity: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Default)]
pub struct ValidationReport {
    pub ok: bool,
    pub diagnostics: Vec<Diagnostic>,
}

impl ValidationReport {
    fn push(&mut self, severity: Severity, code: DiagnosticCode, entity: &str, message: String) {
        self.diagnostics.push(Diagnostic {
            severity,
            code,
            message,
            entity: entity.to_string(),
        });
    }

    fn finish(mut self) -> Self {
        self.ok = !self
            .diagnostics
            .iter()
            .any(|d| d.severity == Severity::Error);
        self
    }

    pub fn errors(&self) -> impl Iterator<Item = &Diagnostic> {
        self.diagnostics
            .iter()
            .filter(|d| d.severity == Severity::Error)
    }

    pub fn has(&self, code: DiagnosticCode) -> bool {
        self.diagnostics.iter().any(|d| d.code == code)
    }
}

/// Nodes reachable from `start` along edges accepted by `keep`, forwards or backwards.
pub(crate) fn reach(
    net: &FlowNetwork,
    start: usize,
    forward: bool,
    keep: impl Fn(usize) -> bool,
) -> Vec<bool> {
    let mut seen = vec![false; net.node_count()];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(u) = queue.pop_front() {
        let list = if forward {
            net.out_edges(u)
        } else {
            net.in_edges(u)
        };
        for &k in list {
            if !keep(k) {
                continue;
            }
            let e = net.edge(k);
            let v = if forward { e.head } else { e.tail };
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    seen
}

/// Edges lying on at least one s-t path among the edges accepted by `keep`.
pub(crate) fn edges_on_paths(net: &FlowNetwork, keep: impl Fn(usize) -> bool + Copy) -> Vec<bool> {
    let fwd = reach(net, net.source(), true, keep);
    let bwd = reach(net, net.sink(), false, keep);
    (0..net.edge_count())
        .map(|k| keep(k) && fwd[net.edge(k).tail] && bwd[net.edge(k).head])
        .collect()
}

/// Checks every structural assumption and reports all failures.
pub fn validate(net: &FlowNetwork) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n = net.node_count();
    let (s, t) = (net.source(), net.sink());

    if s == t {
        report.push(
            Severity::Error,
            DiagnosticCode::SourceIsSink,
            net.node_name(s),
            "source and sink are the same node".into(),
        );
    }
    if !net.in_edges(s).is_empty() {
        report.push(
            Severity::Error,
            DiagnosticCode::BadSource,
            net.node_name(s),
            "source has incoming edges".into(),
        );
    }
    if !net.out_edges(t).is_empty() {
        report.push(
            Severity::Error,
            DiagnosticCode::BadSink,
            net.node_name(t),
            "sink has outgoing edges".into(),
        );
    }
    for v in 0..n {
        if v != s && net.in_edges(v).is_empty() {
            report.push(
                Severity::Error,
                DiagnosticCode::MultipleSources,
                net.node_name(v),
                format!(
                    "node `{}` has no incoming edges but is not the source",
                    net.node_name(v)
                ),
            );
        }
        if v != t && net.out_edges(v).is_empty() {
            report.push(
                Severity::Error,
                DiagnosticCode::MultipleSinks,
                net.node_name(v),
                format!(
                    "node `{}` has no outgoing edges but is not the sink",
                    net.node_name(v)
                ),
            );
        }
    }
    for e in net.edges() {
        if !e.capacity.is_positive() {
            report.push(
                Severity::Error,
                DiagnosticCode::NonPositiveCapacity,
                &e.id,
                format!("non-positive capacity {}", format_rational(&e.capacity)),
            );
        }
    }

    // Kahn's algorithm; leftovers sit on or behind a cycle.
    let mut indeg: Vec<usize> = (0..n).map(|v| net.in_edges(v).len()).collect();
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut done = 0;
    while let Some(u) = queue.pop_front() {
        done += 1;
        for &k in net.out_edges(u) {
            let h = net.edge(k).head;
            indeg[h] -= 1;
            if indeg[h] == 0 {
                queue.push_back(h);
            }
        }
    }
    if done < n {
        let culprit = net
            .edges()
            .iter()
            .find(|e| indeg[e.tail] > 0 && indeg[e.head] > 0)
            .map(|e| e.id.clone())
            .unwrap_or_default();
        report.push(
            Severity::Error,
            DiagnosticCode::CycleDetected,
            &culprit,
            format!("cycle detected through edge `{culprit}`"),
        );
    }

    let on_path = edges_on_paths(net, |_| true);
    for (k, e) in net.edges().iter().enumerate() {
        if !on_path[k] {
            report.push(
                Severity::Error,
                DiagnosticCode::EdgeOffPath,
                &e.id,
                format!("edge `{}` is off all s-t paths", e.id),
            );
        }
    }
    report.finish()
}

/// Drops edges off every s-t path (and nodes left without edges), then validates.
pub fn prune(net: &FlowNetwork) -> Result<(FlowNetwork, ValidationReport)> {
    let on_path = edges_on_paths(net, |_| true);
    let mut pruned = Vec::new();
    let mut builder = NetworkBuilder::default();
    let mut used = vec![false; net.node_count()];
    used[net.source()] = true;
    used[net.sink()] = true;
    for (k, e) in net.edges().iter().enumerate() {
        if on_path[k] {
            used[e.tail] = true;
            used[e.head] = true;
        }
    }
    for (v, name) in net.nodes().iter().enumerate() {
        if used[v] {
            builder.node(name);
        }
    }
    for (k, e) in net.edges().iter().enumerate() {
        if on_path[k] {
            builder.edge(
                &e.id,
                net.node_name(e.tail),
                net.node_name(e.head),
                e.capacity.clone(),
            )?;
        } else {
            pruned.push(e.id.clone());
        }
    }
    builder.source(net.node_name(net.source()));
    builder.sink(net.node_name(net.sink()));
    let result = builder.build()?;
    let mut report = validate(&result);
    for id in pruned {
        report.push(
            Severity::Warning,
            DiagnosticCode::PrunedEdge,
            &id,
            format!("pruned edge `{id}` (off all s-t paths)"),
        );
    }
    Ok((result, report.finish()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    const FIG1: &str = include_str!("../../../fixtures/fig1.net");

    #[test]
    fn parses_arrow_shorthand() {
        let net = parse_network("s -e1:3/2-> t").unwrap();
        assert_eq!(net.node_count(), 2);
        assert_eq!(net.edge_count(), 1);
        assert_eq!(net.edge(0).capacity, ratio(3, 2));
        assert_eq!(net.node_name(net.source()), "s");
        assert_eq!(net.node_name(net.sink()), "t");
    }

    #[test]
    fn parses_diamond_fixture() {
        let net = parse_network(FIG1).unwrap();
        assert_eq!(net.node_count(), 3);
        assert_eq!(net.edge_count(), 4);
        assert_eq!(net.capacities(), vec![int(2), int(1), int(1), int(1)]);
        assert!(validate(&net).ok);
    }

    #[test]
    fn parses_json_with_inferred_terminals() {
        let text = r#"{"nodes": ["s","A","t"], "edges": [
            {"id": "e1", "from": "s", "to": "A", "cap": "1/2"},
            {"id": "e2", "from": "A", "to": "t", "cap": 2},
            {"id": "e3", "from": "A", "to": "t", "cap": "0.25"}]}"#;
        let net = parse_network(text).unwrap();
        assert_eq!(net.node_name(net.source()), "s");
        assert_eq!(net.node_name(net.sink()), "t");
        assert_eq!(net.capacities(), vec![ratio(1, 2), int(2), ratio(1, 4)]);
    }

    #[test]
    fn rejects_zero_capacity() {
        let err = parse_network("edge e1 s t 0").unwrap_err();
        assert!(matches!(err, FlowError::NonPositiveCapacity { .. }));
        assert!(err.to_string().contains("non-positive capacity"));
    }

    #[test]
    fn reports_syntax_location() {
        let err = parse_network("edge e1 s t 1\nedge e2 s t one\n").unwrap_err();
        assert_eq!(
            err,
            FlowError::Syntax {
                line: 2,
                message: "edge `e2`: malformed capacity `one`".into()
            }
        );
        let err = parse_network("edge e1 s t 1\nwhat is this\n").unwrap_err();
        assert!(matches!(err, FlowError::Syntax { line: 2, .. }));
    }

    #[test]
    fn rejects_duplicates_and_unknown_nodes() {
        let err = parse_network("edge e1 s t 1\nedge e1 s t 2").unwrap_err();
        assert_eq!(err, FlowError::DuplicateEdge("e1".into()));
        let err = parse_network("node s\nnode t\nedge e1 s X 1").unwrap_err();
        assert!(matches!(err, FlowError::Syntax { line: 3, .. }));
        let err = parse_network("source q\nedge e1 s t 1").unwrap_err();
        assert_eq!(err, FlowError::UnknownNode("q".into()));
    }

    #[test]
    fn self_loop_is_a_cycle() {
        let net =
            parse_network("source s\nsink t\nedge a s A 1\nedge b A t 1\nedge c A A 1").unwrap();
        let report = validate(&net);
        assert!(!report.ok);
        assert!(report.has(DiagnosticCode::CycleDetected));
        assert!(report
            .diagnostics
            .iter()
            .any(|d| d.message.contains("cycle detected")));
    }

    #[test]
    fn dangling_edge_is_off_path_and_all_failures_reported() {
        let text = format!("{FIG1}edge e5 A B 1\n");
        let net = parse_network(&text).unwrap();
        let report = validate(&net);
        assert!(!report.ok);
        let off: Vec<_> = report
            .diagnostics
            .iter()
            .filter(|d| d.code == DiagnosticCode::EdgeOffPath)
            .collect();
        assert_eq!(off.len(), 1);
        assert_eq!(off[0].entity, "e5");
        assert!(off[0].message.contains("off all s-t paths"));
        // B is also a second sink
        assert!(report.has(DiagnosticCode::MultipleSinks));
    }

    #[test]
    fn prune_drops_dangling_edges() {
        let text = format!("{FIG1}edge e5 A B 1\n");
        let net = parse_network(&text).unwrap();
        let (pruned, report) = prune(&net).unwrap();
        assert!(report.ok);
        assert!(report.has(DiagnosticCode::PrunedEdge));
        assert_eq!(pruned, parse_network(FIG1).unwrap());
    }

    #[test]
    fn render_round_trips() {
        let net = parse_network(FIG1).unwrap();
        assert_eq!(parse_network(&net.render()).unwrap(), net);
        let doc = serde_json::to_string(&net.to_document()).unwrap();
        assert_eq!(parse_network(&doc).unwrap(), net);
    }
}
