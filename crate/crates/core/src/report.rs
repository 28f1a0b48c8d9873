//! Structured report documents: a `key: value` header followed by
//! comma-separated table blocks.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use crate::chains::{diameter, ChainComponentSet};
use crate::entourage::Point;
use crate::hyperbolic::StabilityReport;
use crate::metric::Metric;
use crate::shadowing::{PseudoOrbit, TracingResult};
use crate::spectral::{Evidence, SpectralDecomposition, Verdict};

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Values of one column.
    pub fn column(&self, name: &str) -> Option<Vec<&str>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i].as_str()).collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub kind: String,
    pub header: Vec<(String, String)>,
    pub tables: Vec<Table>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("malformed report at line {line}: {reason}")]
pub struct ReportParseError {
    pub line: usize,
    pub reason: String,
}

fn one_line(s: &str) -> String {
    s.replace('\n', " ")
}

impl Report {
    pub fn new(kind: &str) -> Self {
        Report {
            kind: kind.to_string(),
            header: Vec::new(),
            tables: Vec::new(),
            verdict: Verdict::Pass,
        }
    }

    pub fn kv(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.header.push((key.to_string(), one_line(&value.to_string())));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.header.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn render(&self) -> String {
        let mut out = format!("report: {}\n", self.kind);
        for (k, v) in &self.header {
            let _ = writeln!(out, "{k}: {v}");
        }
        let _ = writeln!(out, "verdict: {}", self.verdict.label());
        if !self.verdict.detail().is_empty() {
            let _ = writeln!(out, "detail: {}", one_line(self.verdict.detail()));
        }
        for t in &self.tables {
            let _ = writeln!(out, "\n[table {}]", t.name);
            let _ = writeln!(out, "{}", t.columns.join(","));
            for r in &t.rows {
                let _ = writeln!(out, "{}", r.join(","));
            }
            out.push_str("[end]\n");
        }
        out
    }

    pub fn parse(text: &str) -> Result<Report, ReportParseError> {
        let bad = |line: usize, reason: &str| ReportParseError {
            line: line + 1,
            reason: reason.to_string(),
        };
        let mut lines = text.lines().enumerate().peekable();
        let (_, first) = lines.next().ok_or_else(|| bad(0, "empty report"))?;
        let kind = first.strip_prefix("report: ").ok_or_else(|| bad(0, "missing `report:` line"))?;
        let mut rep = Report::new(kind);
        let (mut verdict, mut detail) = (None, String::new());
        while let Some(&(i, l)) = lines.peek() {
            if l.starts_with("[table ") {
                break;
            }
            lines.next();
            if l.trim().is_empty() {
                continue;
            }
            let (k, v) = l.split_once(": ").ok_or_else(|| bad(i, "header line without `: `"))?;
            match k {
                "verdict" => verdict = Some((i, v.to_string())),
                "detail" => detail = v.to_string(),
                _ => rep.header.push((k.to_string(), v.to_string())),
            }
        }
        rep.verdict = match verdict {
            Some((_, v)) if v == "pass" => Verdict::Pass,
            Some((_, v)) if v == "fail" => Verdict::Fail { witness: detail },
            Some((_, v)) if v == "resolution-limited" => Verdict::ResolutionLimited { reason: detail },
            Some((i, _)) => return Err(bad(i, "unknown verdict")),
            None => return Err(bad(0, "missing verdict")),
        };
        while let Some((i, l)) = lines.next() {
            if l.trim().is_empty() {
                continue;
            }
            let name = l
                .strip_prefix("[table ")
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| bad(i, "expected a table block"))?;
            let (_, cols) = lines.next().ok_or_else(|| bad(i, "table without columns"))?;
            let mut t = Table {
                name: name.to_string(),
                columns: cols.split(',').map(str::to_string).collect(),
                rows: Vec::new(),
            };
            loop {
                let (j, row) = lines.next().ok_or_else(|| bad(i, "unterminated table"))?;
                if row == "[end]" {
                    break;
                }
                let cells: Vec<String> = row.split(',').map(str::to_string).collect();
                if cells.len() != t.columns.len() {
                    return Err(bad(j, "row width differs from the column count"));
                }
                t.rows.push(cells);
            }
            rep.tables.push(t);
        }
        Ok(rep)
    }
}

/// Writes to a sibling temporary file, then renames it over `path`.
pub fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)
}

fn vec2(v: [f64; 2]) -> [String; 2] {
    [format!("{:?}", v[0]), format!("{:?}", v[1])]
}

/// A tracing result with its per-index gap table.
pub fn tracing_report<P: Point>(
    system: &str,
    delta: f64,
    seed: u64,
    po: &PseudoOrbit<P>,
    r: &TracingResult<P>,
    bound: f64,
) -> Report {
    let mut rep = Report::new("trace");
    rep.kv("system", system)
        .kv("delta", delta)
        .kv("seed", seed)
        .kv("extension", po.extension.tag())
        .kv("length", po.len())
        .kv("defect_bound", po.defect_bound)
        .kv("error_bound", r.error_bound)
        .kv("derived_bound", bound)
        .kv("anchor", r.anchor)
        .kv("indices_checked", format!("{}..{}", r.indices_checked.0, r.indices_checked.1))
        .kv("unique", r.unique.label())
        .kv("period", r.period.map_or("none".to_string(), |p| p.to_string()));
    let mut t = Table::new("gaps", &["index", "gap"]);
    for (k, g) in r.gaps.iter().enumerate() {
        t.push(vec![(po.start + k as i64).to_string(), format!("{g:e}")]);
    }
    rep.tables.push(t);
    rep.verdict = Verdict::check(r.error_bound <= bound, || {
        format!("error {:e} exceeds the derived bound {bound:e}", r.error_bound)
    });
    rep
}

/// Parameters, residual, closeness, flags and the per-sample table.
pub fn stability_report(r: &StabilityReport, closeness_target: f64, residual_target: f64) -> Report {
    let mut rep = Report::new("stability");
    rep.kv("system", &r.system)
        .kv("perturbation", &r.perturbation)
        .kv("window", r.window)
        .kv("samples", r.samples.len())
        .kv("d_radius", r.d_radius)
        .kv("defect_bound", r.defect_bound)
        .kv("b_radius", r.b_radius)
        .kv("expansive_radius", r.expansive_radius)
        .kv("semiconjugacy_residual", r.semiconjugacy_residual)
        .kv("residual_target", residual_target)
        .kv("closeness", r.closeness)
        .kv("closeness_target", closeness_target)
        .kv("unique", r.unique)
        .kv("injective", r.injective)
        .kv("injectivity_tolerance", r.injectivity_tolerance);
    let mut t = Table::new("samples", &["x1", "x2", "h1", "h2", "hg1", "hg2"]);
    for ((x, h), hg) in r.samples.iter().zip(&r.h).zip(&r.h_of_g) {
        let row: Vec<String> = [vec2(*x), vec2(*h), vec2(*hg)].concat().to_vec();
        t.push(row);
    }
    rep.tables.push(t);
    let mut problems = Vec::new();
    if r.semiconjugacy_residual > residual_target {
        problems.push(format!("residual {:e} > {residual_target:e}", r.semiconjugacy_residual));
    }
    if r.closeness > closeness_target {
        problems.push(format!("closeness {:e} > {closeness_target:e}", r.closeness));
    }
    if !r.unique {
        problems.push("uniqueness check failed".into());
    }
    if !r.injective {
        problems.push("injectivity check failed".into());
    }
    rep.verdict = Verdict::check(problems.is_empty(), || problems.join("; "));
    rep
}

/// Component id, node count, stabilization index and diameter per component.
pub fn components_report<P: Point>(system: &str, set: &ChainComponentSet, nodes: &[P], metric: &Metric<P>) -> Report {
    let mut rep = Report::new("chain-components");
    rep.kv("system", system)
        .kv("nodes", nodes.len())
        .kv("recurrent_nodes", set.recurrent_nodes.len())
        .kv("components", set.components.len())
        .kv("ladder", set.ladder.join(" > "))
        .kv("stabilization_index", set.stabilization_index);
    let mut t = Table::new("components", &["id", "node_count", "stabilization_index", "diameter"]);
    for (i, c) in set.components.iter().enumerate() {
        t.push(vec![
            i.to_string(),
            c.len().to_string(),
            set.stabilization_index.to_string(),
            format!("{:e}", diameter(metric, nodes, c)),
        ]);
    }
    rep.tables.push(t);
    rep
}

/// Ladder partitions, basic sets and their certificates.
pub fn decomposition_report<P: Point>(dec: &SpectralDecomposition<P>) -> Report {
    let mut rep = Report::new("spectral-decomposition");
    rep.kv("system", &dec.system)
        .kv("resolution", dec.config.resolution)
        .kv("word_length", dec.config.word_length)
        .kv("seed", dec.config.seed)
        .kv("nodes", dec.node_count)
        .kv("recurrent_nodes", dec.recurrent_nodes.len())
        .kv("basic_sets", dec.basic_sets.len())
        .kv("stabilization_index", dec.stabilization_index)
        .kv("certificate_rung", dec.certificate_rung)
        .kv("finite", dec.finite_flag)
        .kv(
            "expected_basic_sets",
            dec.expected_count.map_or("not determined by the sample".to_string(), |n| n.to_string()),
        )
        .kv("partition_holds", dec.partition_holds())
        .kv(
            "noncompact_note",
            "infinitely many basic sets are possible on noncompact spaces; no catalog system realizes this",
        );
    let mut rungs = Table::new("ladder", &["rung", "entourage", "radius", "below_floor", "parts", "sizes"]);
    for (k, r) in dec.rungs.iter().enumerate() {
        let sizes: Vec<String> = r.partition.iter().map(|p| p.len().to_string()).collect();
        rungs.push(vec![
            k.to_string(),
            r.label.replace(',', ";"),
            r.radius.map_or("-".into(), |x| format!("{x:e}")),
            r.below_floor.to_string(),
            r.partition.len().to_string(),
            sizes.join(" "),
        ]);
    }
    rep.tables.push(rungs);
    let mut sets = Table::new(
        "basic_sets",
        &["id", "nodes", "invariant", "transitivity", "transit_radius", "transit_max_gap", "density", "density_radius", "density_checked", "density_max_gap"],
    );
    let mut pairs = Table::new("transit_pairs", &["set", "x", "y", "period", "hit", "gap_x", "gap_y", "verdict"]);
    for b in &dec.basic_sets {
        let checked = match &b.density.evidence {
            Evidence::PeriodicDensity { entries, total_nodes } => format!("{}/{}", entries.len(), total_nodes),
            _ => "-".into(),
        };
        sets.push(vec![
            b.id.to_string(),
            b.nodes.len().to_string(),
            b.invariant.to_string(),
            b.transitivity.verdict.label().into(),
            format!("{:e}", b.transitivity.radius),
            format!("{:e}", b.transitivity.max_gap()),
            b.density.verdict.label().into(),
            format!("{:e}", b.density.radius),
            checked,
            format!("{:e}", b.density.max_gap()),
        ]);
        if let Evidence::Transitivity { pairs: ps, .. } = &b.transitivity.evidence {
            for p in ps {
                pairs.push(vec![
                    b.id.to_string(),
                    p.x.to_string(),
                    p.y.to_string(),
                    p.period.map_or("none".into(), |n| n.to_string()),
                    p.hit.to_string(),
                    format!("{:e}", p.gap_x),
                    format!("{:e}", p.gap_y),
                    p.verdict.label().into(),
                ]);
            }
        }
    }
    rep.tables.push(sets);
    rep.tables.push(pairs);
    rep.verdict = dec.verdict.clone();
    rep
}
