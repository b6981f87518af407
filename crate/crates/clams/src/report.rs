//! Evaluation records, multi-run aggregation per language, and report
//! rendering.
//!
//! An evaluation record is one construction's result for one run:
//!
//! ```json
//! {"language":"en","run_id":"seed1","construction_id":"simple_agreement","evaluated":50,"correct":50,"skipped":0,"no_variants":0,"accuracy":1.0}
//! ```
//!
//! `accuracy` is `null` when nothing was evaluated; tables print it as `-`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{self, BufRead, Write};

use clams_core::eval::EvalResult;
use clams_core::metrics::{
    aggregate_runs, c_wals, spearman, AggregateReport, ComplexityProfile, ConstructionSummary,
    MetricsError, RunResults,
};
use serde::{Deserialize, Serialize};

use crate::FormatError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub language: String,
    pub run_id: String,
    pub construction_id: String,
    pub evaluated: usize,
    pub correct: usize,
    pub skipped: usize,
    pub no_variants: usize,
    pub accuracy: Option<f64>,
}

impl EvalRecord {
    pub fn new(language: &str, run_id: &str, r: &EvalResult) -> Self {
        EvalRecord {
            language: language.into(),
            run_id: run_id.into(),
            construction_id: r.construction_id.clone(),
            evaluated: r.evaluated,
            correct: r.correct,
            skipped: r.skipped,
            no_variants: r.no_variants,
            accuracy: r.accuracy(),
        }
    }

    pub fn to_result(&self) -> EvalResult {
        EvalResult {
            construction_id: self.construction_id.clone(),
            evaluated: self.evaluated,
            correct: self.correct,
            skipped: self.skipped,
            no_variants: self.no_variants,
        }
    }
}

pub fn write_eval_records<W: Write>(records: &[EvalRecord], mut sink: W) -> io::Result<()> {
    for r in records {
        let line = serde_json::to_string(r).map_err(io::Error::other)?;
        writeln!(sink, "{line}")?;
    }
    sink.flush()
}

pub fn read_eval_records<R: BufRead>(source: R) -> Result<Vec<EvalRecord>, FormatError> {
    let mut out = Vec::new();
    for (i, line) in source.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: EvalRecord = serde_json::from_str(&line)
            .map_err(|e| FormatError::malformed(i + 1, e.to_string()))?;
        if rec.correct > rec.evaluated {
            return Err(FormatError::malformed(i + 1, "correct exceeds evaluated"));
        }
        out.push(rec);
    }
    Ok(out)
}

/// Aggregated results for one language (or model column).
#[derive(Debug, Clone, PartialEq)]
pub struct LanguageReport {
    pub language: String,
    pub report: AggregateReport,
}

/// Groups records by language, then by run, and aggregates each language.
pub fn build_reports(records: &[EvalRecord]) -> Result<Vec<LanguageReport>, MetricsError> {
    let mut grouped: BTreeMap<&str, BTreeMap<&str, Vec<EvalResult>>> = BTreeMap::new();
    for r in records {
        grouped
            .entry(&r.language)
            .or_default()
            .entry(&r.run_id)
            .or_default()
            .push(r.to_result());
    }
    grouped
        .into_iter()
        .map(|(language, runs)| {
            let runs: Vec<RunResults> = runs
                .into_iter()
                .map(|(run_id, results)| RunResults::new(run_id, results))
                .collect();
            Ok(LanguageReport {
                language: language.to_string(),
                report: aggregate_runs(&runs)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Complexity {
    pub language: String,
    pub c_wals: f64,
    pub n: usize,
}

pub fn complexities(profiles: &[ComplexityProfile]) -> Result<Vec<Complexity>, MetricsError> {
    profiles
        .iter()
        .map(|p| {
            Ok(Complexity {
                language: p.language.clone(),
                c_wals: c_wals(p)?,
                n: p.n(),
            })
        })
        .collect()
}

/// Rank correlation between complexity and average accuracy over the
/// languages that have both.
#[derive(Debug, Clone, PartialEq)]
pub struct Correlation {
    pub languages: Vec<String>,
    pub rho: f64,
}

pub fn correlate(
    reports: &[LanguageReport],
    complexity: &[Complexity],
) -> Result<Correlation, MetricsError> {
    let mut languages = Vec::new();
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for r in reports {
        let (Some(avg), Some(c)) = (
            r.report.average,
            complexity.iter().find(|c| c.language == r.language),
        ) else {
            continue;
        };
        languages.push(r.language.clone());
        xs.push(c.c_wals);
        ys.push(avg);
    }
    Ok(Correlation {
        rho: spearman(&xs, &ys)?,
        languages,
    })
}

fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |v| format!("{v:.2}"))
}

/// Constructions as rows, one accuracy column per language (plus a standard
/// deviation column when a language has several runs), two decimals, `-`
/// for undefined cells.
pub fn render_table(
    reports: &[LanguageReport],
    complexity: &[Complexity],
    correlation: Option<&Correlation>,
) -> String {
    let mut rows: Vec<&str> = reports
        .iter()
        .flat_map(|r| {
            r.report
                .constructions
                .iter()
                .map(|c| c.construction_id.as_str())
        })
        .collect();
    rows.sort_unstable();
    rows.dedup();

    const AVERAGE: &str = "Average accuracy";
    const COMPLEXITY: &str = "C_WALS";
    let label_width = rows
        .iter()
        .map(|r| r.chars().count())
        .chain([AVERAGE.len()])
        .max()
        .unwrap_or(0);

    struct Column<'a> {
        header: String,
        report: &'a LanguageReport,
        std: bool,
    }
    let mut columns = Vec::new();
    for r in reports {
        columns.push(Column {
            header: r.language.clone(),
            report: r,
            std: false,
        });
        if r.report.run_count >= 2 {
            columns.push(Column {
                header: format!("{} sd", r.language),
                report: r,
                std: true,
            });
        }
    }
    let widths: Vec<usize> = columns
        .iter()
        .map(|c| c.header.chars().count().max(6))
        .collect();

    let mut out = String::new();
    let _ = write!(out, "{:label_width$}", "construction");
    for (c, w) in columns.iter().zip(&widths) {
        let _ = write!(out, "  {:>w$}", c.header);
    }
    out.push('\n');

    for row in &rows {
        let _ = write!(out, "{:label_width$}", row);
        for (c, w) in columns.iter().zip(&widths) {
            let summary: Option<&ConstructionSummary> = c
                .report
                .report
                .constructions
                .iter()
                .find(|s| s.construction_id == *row);
            let v = summary.and_then(|s| if c.std { s.std } else { s.mean });
            let _ = write!(out, "  {:>w$}", cell(v));
        }
        out.push('\n');
    }

    let _ = write!(out, "{:label_width$}", AVERAGE);
    for (c, w) in columns.iter().zip(&widths) {
        let text = if c.std {
            String::new()
        } else {
            cell(c.report.report.average)
        };
        let _ = write!(out, "  {:>w$}", text);
    }
    out.push('\n');

    if !complexity.is_empty() {
        let _ = write!(out, "{:label_width$}", COMPLEXITY);
        for (c, w) in columns.iter().zip(&widths) {
            let text = if c.std {
                String::new()
            } else {
                cell(
                    complexity
                        .iter()
                        .find(|x| x.language == c.report.language)
                        .map(|x| x.c_wals),
                )
            };
            let _ = write!(out, "  {:>w$}", text);
        }
        out.push('\n');
    }

    let runs: Vec<String> = reports
        .iter()
        .map(|r| format!("{}={}", r.language, r.report.run_count))
        .collect();
    let _ = writeln!(out, "runs: {}", runs.join(", "));
    if let Some(c) = correlation {
        let _ = writeln!(
            out,
            "Spearman rho (C_WALS vs average accuracy, {} languages): {:.2}",
            c.languages.len(),
            c.rho
        );
    }
    out.lines().map(|l| format!("{}\n", l.trim_end())).collect()
}

/// Machine-readable report lines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReportRecord {
    Construction {
        language: String,
        construction_id: String,
        run_count: usize,
        defined: usize,
        mean: Option<f64>,
        std: Option<f64>,
    },
    Average {
        language: String,
        run_count: usize,
        average: Option<f64>,
    },
    Complexity {
        language: String,
        c_wals: f64,
        n: usize,
    },
    Correlation {
        languages: Vec<String>,
        rho: f64,
    },
}

pub fn render_records(
    reports: &[LanguageReport],
    complexity: &[Complexity],
    correlation: Option<&Correlation>,
) -> String {
    let mut records = Vec::new();
    for r in reports {
        for c in &r.report.constructions {
            records.push(ReportRecord::Construction {
                language: r.language.clone(),
                construction_id: c.construction_id.clone(),
                run_count: r.report.run_count,
                defined: c.defined,
                mean: c.mean,
                std: c.std,
            });
        }
        records.push(ReportRecord::Average {
            language: r.language.clone(),
            run_count: r.report.run_count,
            average: r.report.average,
        });
    }
    for c in complexity {
        records.push(ReportRecord::Complexity {
            language: c.language.clone(),
            c_wals: c.c_wals,
            n: c.n,
        });
    }
    if let Some(c) = correlation {
        records.push(ReportRecord::Correlation {
            languages: c.languages.clone(),
            rho: c.rho,
        });
    }
    let mut out = String::new();
    for r in &records {
        out.push_str(&serde_json::to_string(r).expect("report records serialize"));
        out.push('\n');
    }
    out
}

/// Rebuilds per-language reports from [`render_records`] output. Complexity
/// and correlation lines are skipped.
pub fn read_report_records<R: BufRead>(source: R) -> Result<Vec<LanguageReport>, FormatError> {
    fn slot(
        reports: &mut Vec<LanguageReport>,
        language: String,
        run_count: usize,
    ) -> &mut AggregateReport {
        let i = match reports.iter().position(|r| r.language == language) {
            Some(i) => i,
            None => {
                reports.push(LanguageReport {
                    language,
                    report: AggregateReport {
                        run_count,
                        constructions: Vec::new(),
                        average: None,
                    },
                });
                reports.len() - 1
            }
        };
        &mut reports[i].report
    }

    let mut reports: Vec<LanguageReport> = Vec::new();
    for (i, line) in source.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: ReportRecord = serde_json::from_str(&line)
            .map_err(|e| FormatError::malformed(i + 1, e.to_string()))?;
        match rec {
            ReportRecord::Construction {
                language,
                construction_id,
                run_count,
                defined,
                mean,
                std,
            } => {
                slot(&mut reports, language, run_count)
                    .constructions
                    .push(ConstructionSummary {
                        construction_id,
                        mean,
                        std,
                        defined,
                    });
            }
            ReportRecord::Average {
                language,
                run_count,
                average,
            } => {
                slot(&mut reports, language, run_count).average = average;
            }
            ReportRecord::Complexity { .. } | ReportRecord::Correlation { .. } => {}
        }
    }
    Ok(reports)
}
