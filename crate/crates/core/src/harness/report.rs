//! Report tables: TSV and LaTeX rendering of per-confusion-set results.

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Correct/total counts behind one accuracy figure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Tally {
    pub correct: usize,
    pub total: usize,
}

impl Tally {
    pub fn record(&mut self, predicted: usize, gold: usize) {
        self.total += 1;
        if predicted == gold {
            self.correct += 1;
        }
    }

    /// Accuracy in percent; NaN when empty.
    pub fn percent(&self) -> f64 {
        100.0 * self.correct as f64 / self.total as f64
    }
}

impl std::ops::Add for Tally {
    type Output = Tally;

    fn add(self, rhs: Tally) -> Tally {
        Tally {
            correct: self.correct + rhs.correct,
            total: self.total + rhs.total,
        }
    }
}

/// Percentage of predictions that equal the gold labels.
pub fn accuracy(predictions: &[usize], gold: &[usize]) -> Result<f64> {
    if predictions.is_empty() {
        return Err(Error::Empty("no predictions to score"));
    }
    if predictions.len() != gold.len() {
        return Err(Error::InvalidArgument(format!(
            "{} predictions against {} gold labels",
            predictions.len(),
            gold.len()
        )));
    }
    let correct = predictions.iter().zip(gold).filter(|(p, g)| p == g).count();
    Ok(100.0 * correct as f64 / predictions.len() as f64)
}

/// One-decimal rendering used in every report.
pub fn format_percent(value: f64) -> String {
    format!("{value:.1}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnKind {
    TestCases,
    Features,
    Accuracy,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Column {
    pub group: String,
    pub name: String,
    pub kind: ColumnKind,
}

impl Column {
    pub fn new(group: impl Into<String>, name: impl Into<String>, kind: ColumnKind) -> Self {
        Self {
            group: group.into(),
            name: name.into(),
            kind,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cell {
    Count(usize),
    Accuracy(Tally),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowOutcome {
    Scored(Vec<Cell>),
    Skipped(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportRow {
    pub set: String,
    pub outcome: RowOutcome,
}

impl ReportRow {
    pub fn cells(&self) -> Option<&[Cell]> {
        match &self.outcome {
            RowOutcome::Scored(cells) => Some(cells),
            RowOutcome::Skipped(_) => None,
        }
    }
}

/// A per-confusion-set results table with grouped column headers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalReport {
    pub columns: Vec<Column>,
    pub rows: Vec<ReportRow>,
}

pub const OVERALL: &str = "Overall";

impl EvalReport {
    pub fn row(&self, set: &str) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.set == set)
    }

    /// Index of the column with this group and name.
    pub fn column(&self, group: &str, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.group == group && c.name == name)
    }

    pub fn accuracy(&self, set: &str, group: &str, name: &str) -> Option<f64> {
        let col = self.column(group, name)?;
        match self.row(set)?.cells()?.get(col)? {
            Cell::Accuracy(t) => Some(t.percent()),
            Cell::Count(_) => None,
        }
    }

    pub fn count(&self, set: &str, group: &str, name: &str) -> Option<usize> {
        let col = self.column(group, name)?;
        match self.row(set)?.cells()?.get(col)? {
            Cell::Count(n) => Some(*n),
            Cell::Accuracy(_) => None,
        }
    }

    /// Pooled row: summed test cases and accuracy over all scored sets.
    pub fn overall(&self) -> Option<Vec<Option<Cell>>> {
        let scored: Vec<&[Cell]> = self.rows.iter().filter_map(ReportRow::cells).collect();
        if scored.is_empty() {
            return None;
        }
        Some(
            self.columns
                .iter()
                .enumerate()
                .map(|(i, col)| match col.kind {
                    ColumnKind::Features => None,
                    ColumnKind::TestCases => Some(Cell::Count(
                        scored.iter().map(|c| if let Cell::Count(n) = c[i] { n } else { 0 }).sum(),
                    )),
                    ColumnKind::Accuracy => Some(Cell::Accuracy(
                        scored
                            .iter()
                            .map(|c| if let Cell::Accuracy(t) = c[i] { t } else { Tally::default() })
                            .fold(Tally::default(), |a, b| a + b),
                    )),
                })
                .collect(),
        )
    }

    fn header_rows(&self) -> (Vec<String>, Vec<String>) {
        let mut groups = vec!["Confusion set".to_string()];
        let mut names = vec![String::new()];
        let mut previous: Option<&str> = None;
        for col in &self.columns {
            groups.push(if previous == Some(col.group.as_str()) {
                String::new()
            } else {
                col.group.clone()
            });
            previous = Some(&col.group);
            names.push(col.name.clone());
        }
        (groups, names)
    }

    fn body_rows(&self) -> Vec<Vec<String>> {
        let render = |cell: Option<&Cell>| match cell {
            Some(Cell::Count(n)) => n.to_string(),
            Some(Cell::Accuracy(t)) => format_percent(t.percent()),
            None => "-".to_string(),
        };
        let mut out: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|row| {
                let mut line = vec![row.set.clone()];
                match &row.outcome {
                    RowOutcome::Scored(cells) => line.extend(cells.iter().map(|c| render(Some(c)))),
                    RowOutcome::Skipped(_) => line.extend(self.columns.iter().map(|_| render(None))),
                }
                line
            })
            .collect();
        if let Some(overall) = self.overall() {
            let mut line = vec![OVERALL.to_string()];
            line.extend(overall.iter().map(|c| render(c.as_ref())));
            out.push(line);
        }
        out
    }

    fn skipped(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.rows.iter().filter_map(|r| match &r.outcome {
            RowOutcome::Skipped(reason) => Some((r.set.as_str(), reason.as_str())),
            RowOutcome::Scored(_) => None,
        })
    }

    pub fn to_tsv(&self) -> String {
        let (groups, names) = self.header_rows();
        let mut out = String::new();
        let _ = writeln!(out, "{}", groups.join("\t"));
        let _ = writeln!(out, "{}", names.join("\t"));
        for line in self.body_rows() {
            let _ = writeln!(out, "{}", line.join("\t"));
        }
        for (set, reason) in self.skipped() {
            let _ = writeln!(out, "# skipped {set}: {reason}");
        }
        out
    }

    pub fn to_latex(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "\\begin{{tabular}}{{l{}}}", "r".repeat(self.columns.len()));
        out.push_str("\\hline\n");
        let mut spans: Vec<(String, usize)> = Vec::new();
        for col in &self.columns {
            match spans.last_mut() {
                Some((group, n)) if *group == col.group => *n += 1,
                _ => spans.push((col.group.clone(), 1)),
            }
        }
        let mut first = vec!["Confusion set".to_string()];
        for (group, n) in &spans {
            first.push(if *n == 1 {
                latex_escape(group)
            } else {
                format!("\\multicolumn{{{n}}}{{c}}{{{}}}", latex_escape(group))
            });
        }
        let _ = writeln!(out, "{} \\\\", first.join(" & "));
        let (_, names) = self.header_rows();
        let names: Vec<String> = names.iter().map(|n| latex_escape(n)).collect();
        let _ = writeln!(out, "{} \\\\", names.join(" & "));
        out.push_str("\\hline\n");
        for line in self.body_rows() {
            let cells: Vec<String> = line.iter().map(|c| latex_escape(c)).collect();
            let _ = writeln!(out, "{} \\\\", cells.join(" & "));
        }
        out.push_str("\\hline\n\\end{tabular}\n");
        for (set, reason) in self.skipped() {
            let _ = writeln!(out, "% skipped {set}: {reason}");
        }
        out
    }
}

pub fn latex_escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' | '%' | '$' | '#' | '_' | '{' | '}' => {
                out.push('\\');
                out.push(c);
            }
            '~' => out.push_str("\\textasciitilde{}"),
            '^' => out.push_str("\\textasciicircum{}"),
            '\\' => out.push_str("\\textbackslash{}"),
            _ => out.push(c),
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub set: String,
    pub percent: f64,
    pub series: String,
    pub accuracy: Tally,
}

/// Accuracy per corruption percentage, in long (plot-ready) form.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub skipped: Vec<(String, String)>,
}

impl SweepReport {
    pub fn series(&self, set: &str, series: &str) -> Vec<(f64, f64)> {
        self.rows
            .iter()
            .filter(|r| r.set == set && r.series == series)
            .map(|r| (r.percent, r.accuracy.percent()))
            .collect()
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("Confusion set\tPercent\tSeries\tAccuracy\n");
        for r in &self.rows {
            let _ = writeln!(out, "{}\t{}\t{}\t{}", r.set, r.percent, r.series, format_percent(r.accuracy.percent()));
        }
        for (set, reason) in &self.skipped {
            let _ = writeln!(out, "# skipped {set}: {reason}");
        }
        out
    }

    pub fn to_latex(&self) -> String {
        let mut out = String::from("\\begin{tabular}{lrlr}\n\\hline\nConfusion set & Percent & Series & Accuracy \\\\\n\\hline\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{} & {} & {} & {} \\\\",
                latex_escape(&r.set),
                r.percent,
                latex_escape(&r.series),
                format_percent(r.accuracy.percent())
            );
        }
        out.push_str("\\hline\n\\end{tabular}\n");
        for (set, reason) in &self.skipped {
            let _ = writeln!(out, "% skipped {set}: {reason}");
        }
        out
    }
}
