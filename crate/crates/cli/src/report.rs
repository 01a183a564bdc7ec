//! Report sections and their text, CSV and JSON renderings.
//!
//! Text output rounds to two decimals for display. CSV and JSON carry full
//! precision (shortest round-trip form) so the two parse to identical values.

use std::fmt::Write as _;

use peerstat_core::format::two;
use peerstat_core::{
    BoxPlotSummary, ConfidenceInterval, CorrelationEstimate, Counterfactual, DifferenceResult,
    GroupSummary, Quality, StackedHistogram, ValidationReport,
};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct Table1Section {
    pub rows: Vec<GroupSummary>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RatioClaim {
    pub group_hi: Quality,
    pub group_lo: Quality,
    pub mean_hi: f64,
    pub mean_lo: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiffsSection {
    pub differences: Vec<DifferenceResult>,
    pub ratio: Option<RatioClaim>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Redraws {
    pub spearman: usize,
    pub adler: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CorrelationsSection {
    pub n: usize,
    pub spearman: CorrelationEstimate,
    pub adler: CorrelationEstimate,
    pub redraws: Redraws,
}

#[derive(Debug, Clone, Serialize)]
pub struct FiguresSection {
    pub boxplots: Vec<BoxPlotSummary>,
    pub histogram: StackedHistogram,
}

/// Everything one invocation computed; absent sections are omitted.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Report {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table1: Option<Table1Section>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diffs: Option<DiffsSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub correlations: Option<CorrelationsSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterfactual: Option<Counterfactual>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub figures: Option<FiguresSection>,
}

impl Report {
    fn section_count(&self) -> usize {
        [
            self.validation.is_some(),
            self.table1.is_some(),
            self.diffs.is_some(),
            self.correlations.is_some(),
            self.counterfactual.is_some(),
            self.figures.is_some(),
        ]
        .iter()
        .filter(|&&b| b)
        .count()
    }

    /// A single-section report renders as that section alone; `all` renders
    /// an object keyed by section name.
    pub fn to_json(&self) -> serde_json::Result<String> {
        let value = if self.section_count() == 1 {
            let serde_json::Value::Object(map) = serde_json::to_value(self)? else {
                unreachable!("report serializes to an object")
            };
            map.into_iter().next().map(|(_, v)| v).unwrap_or_default()
        } else {
            serde_json::to_value(self)?
        };
        let mut out = serde_json::to_string_pretty(&value)?;
        out.push('\n');
        Ok(out)
    }

    pub fn to_csv(&self) -> String {
        let mut tables: Vec<(&str, CsvTable)> = Vec::new();
        if let Some(v) = &self.validation {
            tables.push(("validation", validation_csv(v)));
        }
        if let Some(t) = &self.table1 {
            tables.push(("table1", table1_csv(&t.rows)));
        }
        if let Some(d) = &self.diffs {
            tables.push(("differences", differences_csv(&d.differences)));
            tables.push(("ratio", ratio_csv(d.ratio.as_ref())));
        }
        if let Some(c) = &self.correlations {
            tables.push(("correlations", correlations_csv(c)));
        }
        if let Some(c) = &self.counterfactual {
            let (groups, diffs) = counterfactual_csv(c);
            tables.push(("counterfactual_groups", groups));
            tables.push(("counterfactual_differences", diffs));
        }
        if let Some(f) = &self.figures {
            tables.push(("boxplots", boxplots_csv(&f.boxplots)));
            tables.push(("histogram", histogram_csv(&f.histogram)));
        }
        if let [(_, only)] = tables.as_slice() {
            return only.render();
        }
        tables
            .iter()
            .map(|(name, table)| format!("# {name}\n{}", table.render()))
            .collect::<Vec<_>>()
            .join("\n")
    }

    pub fn to_text(&self) -> String {
        let mut blocks = Vec::new();
        if let Some(v) = &self.validation {
            blocks.push(validation_text(v));
        }
        if let Some(t) = &self.table1 {
            blocks.push(table1_text(&t.rows));
        }
        if let Some(d) = &self.diffs {
            blocks.push(diffs_text(d));
        }
        if let Some(c) = &self.correlations {
            blocks.push(correlations_text(c));
        }
        if let Some(c) = &self.counterfactual {
            blocks.push(counterfactual_text(c));
        }
        if let Some(f) = &self.figures {
            blocks.push(figures_text(f));
        }
        blocks.join("\n")
    }
}

struct CsvTable {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl CsvTable {
    fn new(header: &[&str]) -> Self {
        CsvTable {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn render(&self) -> String {
        let mut out = String::new();
        for line in std::iter::once(&self.header).chain(&self.rows) {
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

fn num(v: f64) -> String {
    v.to_string()
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn ci_fields(ci: &ConfidenceInterval) -> [String; 4] {
    [num(ci.low), num(ci.high), num(ci.level), ci.replicates_used.to_string()]
}

fn validation_csv(v: &ValidationReport) -> CsvTable {
    let mut t = CsvTable::new(&["key", "value"]);
    t.rows.push(vec!["total".into(), v.total.to_string()]);
    t.rows.push(vec!["min_indicator".into(), num(v.min_indicator)]);
    t.rows.push(vec!["max_indicator".into(), num(v.max_indicator)]);
    for (q, count) in &v.counts_by_quality {
        t.rows.push(vec![format!("count_{q}"), count.to_string()]);
    }
    t
}

fn table1_csv(rows: &[GroupSummary]) -> CsvTable {
    let mut t = CsvTable::new(&[
        "quality_label",
        "n",
        "median",
        "mean",
        "sd",
        "ci_low",
        "ci_high",
        "ci_level",
        "replicates_used",
    ]);
    for r in rows {
        let mut row = vec![r.quality_label.to_string(), r.n.to_string(), num(r.median), num(r.mean), opt(r.sd)];
        row.extend(ci_fields(&r.mean_ci));
        t.rows.push(row);
    }
    t
}

fn differences_csv(diffs: &[DifferenceResult]) -> CsvTable {
    let mut t = CsvTable::new(&[
        "group_hi",
        "group_lo",
        "mean_difference",
        "ci_low",
        "ci_high",
        "ci_level",
        "replicates_used",
    ]);
    for d in diffs {
        let mut row = vec![d.group_hi.to_string(), d.group_lo.to_string(), num(d.mean_difference)];
        row.extend(ci_fields(&d.ci));
        t.rows.push(row);
    }
    t
}

fn ratio_csv(ratio: Option<&RatioClaim>) -> CsvTable {
    let mut t = CsvTable::new(&["group_hi", "group_lo", "mean_hi", "mean_lo", "ratio"]);
    if let Some(r) = ratio {
        t.rows.push(vec![
            r.group_hi.to_string(),
            r.group_lo.to_string(),
            num(r.mean_hi),
            num(r.mean_lo),
            num(r.ratio),
        ]);
    }
    t
}

fn correlations_csv(c: &CorrelationsSection) -> CsvTable {
    let mut t = CsvTable::new(&[
        "method",
        "estimate",
        "ci_low",
        "ci_high",
        "ci_level",
        "replicates_used",
        "redraws",
    ]);
    for (name, est, redraws) in [
        ("spearman", &c.spearman, c.redraws.spearman),
        ("adler", &c.adler, c.redraws.adler),
    ] {
        let mut row = vec![name.to_string(), num(est.estimate)];
        match &est.ci {
            Some(ci) => row.extend(ci_fields(ci)),
            None => row.extend(std::iter::repeat(String::new()).take(4)),
        }
        row.push(redraws.to_string());
        t.rows.push(row);
    }
    t
}

fn counterfactual_csv(c: &Counterfactual) -> (CsvTable, CsvTable) {
    let mut groups = CsvTable::new(&["quality", "n", "mean"]);
    for g in &c.groups {
        groups.rows.push(vec![g.quality.to_string(), g.n.to_string(), num(g.mean)]);
    }
    let mut diffs = CsvTable::new(&["group_hi", "group_lo", "difference"]);
    for d in &c.differences {
        diffs.rows.push(vec![d.group_hi.to_string(), d.group_lo.to_string(), num(d.difference)]);
    }
    (groups, diffs)
}

fn boxplots_csv(boxes: &[BoxPlotSummary]) -> CsvTable {
    let mut t = CsvTable::new(&[
        "quality_label",
        "n",
        "minimum",
        "q1",
        "median",
        "q3",
        "maximum",
        "whisker_low",
        "whisker_high",
        "outliers",
    ]);
    for b in boxes {
        t.rows.push(vec![
            b.quality_label.to_string(),
            b.n.to_string(),
            num(b.minimum),
            num(b.q1),
            num(b.median),
            num(b.q3),
            num(b.maximum),
            num(b.whisker_low),
            num(b.whisker_high),
            b.outliers.iter().map(|v| num(*v)).collect::<Vec<_>>().join(";"),
        ]);
    }
    t
}

fn histogram_labels(h: &StackedHistogram) -> Vec<Quality> {
    h.bins
        .first()
        .map(|b| b.counts.keys().copied().collect())
        .unwrap_or_default()
}

fn histogram_csv(h: &StackedHistogram) -> CsvTable {
    let labels = histogram_labels(h);
    let mut header = vec!["lower".to_string(), "upper".to_string()];
    header.extend(labels.iter().map(|q| format!("count_{q}")));
    let mut t = CsvTable { header, rows: Vec::new() };
    for bin in &h.bins {
        let mut row = vec![num(bin.lower), num(bin.upper)];
        row.extend(labels.iter().map(|q| bin.counts[q].to_string()));
        t.rows.push(row);
    }
    t
}

/// Left-aligned columns separated by two spaces.
fn aligned(header: &[String], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    for line in std::iter::once(header).chain(rows.iter().map(Vec::as_slice)) {
        let cells: Vec<String> = line
            .iter()
            .zip(&widths)
            .map(|(cell, &w)| format!("{cell:<w$}"))
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn headers(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn level_label(level: f64) -> String {
    let pct = level * 100.0;
    if (pct - pct.round()).abs() < 1e-9 {
        format!("{}%", pct.round())
    } else {
        format!("{pct}%")
    }
}

fn ci_text(ci: &ConfidenceInterval) -> String {
    format!("{}\u{2013}{}", two(ci.low), two(ci.high))
}

fn validation_text(v: &ValidationReport) -> String {
    let mut out = String::from("Dataset\n");
    let _ = writeln!(out, "  observations: {}", v.total);
    let _ = writeln!(out, "  indicator range: {} to {}", two(v.min_indicator), two(v.max_indicator));
    let rows: Vec<Vec<String>> = v
        .counts_by_quality
        .iter()
        .map(|(q, c)| vec![q.to_string(), c.to_string()])
        .collect();
    out.push_str(&aligned(&headers(&["Quality score", "No. of research groups"]), &rows));
    out
}

fn table1_text(rows: &[GroupSummary]) -> String {
    let level = rows.first().map(|r| r.mean_ci.level).unwrap_or(0.95);
    let header = vec![
        "Quality score".to_string(),
        "No. of research groups".to_string(),
        "Median".to_string(),
        "Mean".to_string(),
        "St. dev.".to_string(),
        format!("{} conf. int.", level_label(level)),
    ];
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.quality_label.to_string(),
                r.n.to_string(),
                two(r.median),
                two(r.mean),
                r.sd.map(two).unwrap_or_else(|| "-".into()),
                ci_text(&r.mean_ci),
            ]
        })
        .collect();
    format!("Descriptive statistics\n{}", aligned(&header, &body))
}

fn diffs_text(d: &DiffsSection) -> String {
    let mut out = String::from("Differences in mean\n");
    for diff in &d.differences {
        let _ = writeln!(
            out,
            "  {} vs {}: {} ({} conf. int.: {})",
            diff.group_hi,
            diff.group_lo,
            two(diff.mean_difference),
            level_label(diff.ci.level),
            ci_text(&diff.ci)
        );
    }
    if let Some(r) = &d.ratio {
        let _ = writeln!(
            out,
            "  ratio {} / {} - 1: {} ({} vs. {})",
            r.group_hi,
            r.group_lo,
            two(r.ratio),
            two(r.mean_hi),
            two(r.mean_lo)
        );
    }
    out
}

fn correlations_text(c: &CorrelationsSection) -> String {
    let mut out = format!("Rank correlations (n = {})\n", c.n);
    for (name, est) in [("Spearman", &c.spearman), ("Adler tau", &c.adler)] {
        match &est.ci {
            Some(ci) => {
                let _ = writeln!(
                    out,
                    "  {name}: {} ({} conf. int.: {})",
                    two(est.estimate),
                    level_label(ci.level),
                    ci_text(ci)
                );
            }
            None => {
                let _ = writeln!(out, "  {name}: {}", two(est.estimate));
            }
        }
    }
    out
}

fn counterfactual_text(c: &Counterfactual) -> String {
    let mut out = String::from("Sorted assignment benchmark\n");
    let rows: Vec<Vec<String>> = c
        .groups
        .iter()
        .map(|g| vec![g.quality.to_string(), g.n.to_string(), two(g.mean)])
        .collect();
    out.push_str(&aligned(&headers(&["Quality score", "No. of research groups", "Mean"]), &rows));
    for d in &c.differences {
        let _ = writeln!(out, "  {} vs {}: {}", d.group_hi, d.group_lo, two(d.difference));
    }
    out
}

fn figures_text(f: &FiguresSection) -> String {
    let mut out = String::from("Box plots\n");
    let rows: Vec<Vec<String>> = f
        .boxplots
        .iter()
        .map(|b| {
            vec![
                b.quality_label.to_string(),
                b.n.to_string(),
                two(b.whisker_low),
                two(b.q1),
                two(b.median),
                two(b.q3),
                two(b.whisker_high),
                b.outliers.iter().map(|v| two(*v)).collect::<Vec<_>>().join(" "),
            ]
        })
        .collect();
    out.push_str(&aligned(
        &headers(&["Quality score", "n", "Whisker low", "Q1", "Median", "Q3", "Whisker high", "Outliers"]),
        &rows,
    ));
    out.push_str("\nHistogram\n");
    let labels = histogram_labels(&f.histogram);
    let mut header = headers(&["Bin"]);
    header.extend(labels.iter().map(|q| format!("Quality {q}")));
    let rows: Vec<Vec<String>> = f
        .histogram
        .bins
        .iter()
        .map(|bin| {
            let mut row = vec![format!("[{}, {})", two(bin.lower), two(bin.upper))];
            row.extend(labels.iter().map(|q| bin.counts[q].to_string()));
            row
        })
        .collect();
    out.push_str(&aligned(&header, &rows));
    out
}
