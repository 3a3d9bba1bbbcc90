//! Instructor-facing analytics: per-assessment pass/fail counts, notable
//! patterns, and the list of students the model predicts to fail.

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::model::TrainedModel;
use crate::schema::Category;
use crate::tree::{classify, TreeNode};

/// Pass/fail tally of one assessment column.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AssessmentSummary {
    pub attribute: String,
    pub pass_count: usize,
    pub fail_count: usize,
    pub fail_rate: f64,
}

impl AssessmentSummary {
    fn of(attribute: &str, pass_count: usize, fail_count: usize) -> Self {
        let total = pass_count + fail_count;
        AssessmentSummary {
            attribute: attribute.to_string(),
            pass_count,
            fail_count,
            fail_rate: if total == 0 {
                0.0
            } else {
                fail_count as f64 / total as f64
            },
        }
    }

    pub fn total(&self) -> usize {
        self.pass_count + self.fail_count
    }
}

/// Tallies every schema attribute, in schema order.
pub fn summarize(dataset: &Dataset) -> Vec<AssessmentSummary> {
    dataset
        .schema
        .attribute_names()
        .map(|name| {
            let mut pass = 0;
            let mut fail = 0;
            for record in &dataset.records {
                match record.value(name) {
                    Some(Category::Pass) => pass += 1,
                    Some(Category::Fail) => fail += 1,
                    None => {}
                }
            }
            AssessmentSummary::of(name, pass, fail)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PatternKind {
    AllPass,
    AllFail,
    HighFailure,
}

/// A notable aggregate the instructor should look at.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Pattern {
    pub kind: PatternKind,
    pub attribute: String,
    pub detail: String,
}

fn pattern_detail(kind: PatternKind, pass_count: usize, fail_count: usize) -> String {
    match kind {
        PatternKind::AllPass => "100% passing rate".to_string(),
        PatternKind::AllFail => "100% failure rate".to_string(),
        PatternKind::HighFailure => {
            format!("{fail_count} of {} failed", pass_count + fail_count)
        }
    }
}

/// Flags assessments that everyone passed, that everyone failed, or whose
/// failure rate reaches `fail_rate_threshold`. One assessment can fire
/// several kinds; output follows summary order.
pub fn detect_patterns(
    summaries: &[AssessmentSummary],
    fail_rate_threshold: f64,
) -> Result<Vec<Pattern>> {
    if !(fail_rate_threshold > 0.0 && fail_rate_threshold <= 1.0) {
        return Err(Error::InvalidFailRateThreshold(fail_rate_threshold));
    }
    let mut patterns = Vec::new();
    for summary in summaries {
        if summary.total() == 0 {
            continue;
        }
        let mut push = |kind| {
            patterns.push(Pattern {
                kind,
                attribute: summary.attribute.clone(),
                detail: pattern_detail(kind, summary.pass_count, summary.fail_count),
            })
        };
        if summary.fail_count == 0 {
            push(PatternKind::AllPass);
        }
        if summary.pass_count == 0 {
            push(PatternKind::AllFail);
        }
        if summary.fail_rate >= fail_rate_threshold {
            push(PatternKind::HighFailure);
        }
    }
    Ok(patterns)
}

/// One student the model predicts to fail.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RiskEntry {
    pub student_id: String,
    pub label: Category,
    pub path: Vec<(String, Category)>,
}

/// Classifies the cohort and keeps the students predicted Fail, in
/// cohort order, each with the decision path that flagged them.
pub fn risk_list(tree: &TreeNode, cohort: &Dataset) -> Result<Vec<RiskEntry>> {
    let mut entries = Vec::new();
    for record in &cohort.records {
        let outcome = classify(tree, record)?;
        if outcome.at_risk {
            entries.push(RiskEntry {
                student_id: record.student_id.clone(),
                label: outcome.label,
                path: outcome.path,
            });
        }
    }
    Ok(entries)
}

/// Everything the instructor sees for one course.
#[derive(Clone, Debug, PartialEq)]
pub struct RiskReport {
    pub course_id: String,
    pub summaries: Vec<AssessmentSummary>,
    pub patterns: Vec<Pattern>,
    pub at_risk: Vec<RiskEntry>,
    pub model_criterion: String,
    pub generated_at: String,
}

/// Builds the report for a cohort. The pattern threshold defaults to the
/// model schema's; `generated_at` is supplied by the caller so rendering
/// stays a pure function.
pub fn build_report(
    model: &TrainedModel,
    cohort: &Dataset,
    course_id: impl Into<String>,
    fail_rate_threshold: Option<f64>,
    generated_at: impl Into<String>,
) -> Result<RiskReport> {
    let summaries = summarize(cohort);
    let threshold = fail_rate_threshold.unwrap_or_else(|| model.schema.fail_rate_threshold());
    let patterns = detect_patterns(&summaries, threshold)?;
    let at_risk = risk_list(&model.tree, cohort)?;
    Ok(RiskReport {
        course_id: course_id.into(),
        summaries,
        patterns,
        at_risk,
        model_criterion: model.criterion.to_string(),
        generated_at: generated_at.into(),
    })
}

fn render_path(path: &[(String, Category)]) -> String {
    if path.is_empty() {
        return "(none)".to_string();
    }
    path.iter()
        .map(|(attribute, value)| format!("{attribute} = {value}"))
        .collect::<Vec<_>>()
        .join(", ")
}

impl RiskReport {
    /// Cohort size, read off the summaries.
    fn cohort_size(&self) -> usize {
        self.summaries
            .iter()
            .map(AssessmentSummary::total)
            .max()
            .unwrap_or(self.at_risk.len())
    }

    /// Human-readable report: summaries, then patterns, then the risk
    /// list. Deterministic for identical inputs.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("Course: {}\n", self.course_id));
        out.push_str(&format!("Criterion: {}\n", self.model_criterion));
        out.push_str(&format!("Generated: {}\n", self.generated_at));

        out.push_str("\nAssessments\n");
        let name_width = self
            .summaries
            .iter()
            .map(|s| s.attribute.len())
            .chain(["Attribute".len()])
            .max()
            .unwrap_or(0);
        let count_width = self
            .summaries
            .iter()
            .flat_map(|s| [s.pass_count, s.fail_count])
            .map(|n| n.to_string().len())
            .chain([4])
            .max()
            .unwrap_or(4);
        out.push_str(&format!(
            "  {:<name_width$}  {:>count_width$}  {:>count_width$}  {:>9}\n",
            "Attribute", "Pass", "Fail", "Fail rate"
        ));
        for summary in &self.summaries {
            out.push_str(&format!(
                "  {:<name_width$}  {:>count_width$}  {:>count_width$}  {:>9.3}\n",
                summary.attribute, summary.pass_count, summary.fail_count, summary.fail_rate
            ));
        }

        out.push_str("\nPatterns\n");
        if self.patterns.is_empty() {
            out.push_str("  (none)\n");
        }
        for pattern in &self.patterns {
            out.push_str(&format!("  {}: {}\n", pattern.attribute, pattern.detail));
        }

        out.push_str(&format!(
            "\nAt risk ({} of {})\n",
            self.at_risk.len(),
            self.cohort_size()
        ));
        if self.at_risk.is_empty() {
            out.push_str("  (none)\n");
        }
        for entry in &self.at_risk {
            out.push_str(&format!(
                "  {}: {}\n",
                entry.student_id,
                render_path(&entry.path)
            ));
        }
        out
    }

    /// Machine format, pretty-printed JSON.
    pub fn to_json(&self) -> String {
        let repr = ReportRepr {
            course_id: self.course_id.clone(),
            summaries: self
                .summaries
                .iter()
                .map(|s| SummaryRepr {
                    attribute: s.attribute.clone(),
                    pass: s.pass_count,
                    fail: s.fail_count,
                })
                .collect(),
            patterns: self
                .patterns
                .iter()
                .map(|p| PatternRepr {
                    kind: p.kind,
                    attribute: p.attribute.clone(),
                })
                .collect(),
            at_risk: self
                .at_risk
                .iter()
                .map(|e| RiskRepr {
                    student_id: e.student_id.clone(),
                    path: e.path.clone(),
                })
                .collect(),
            criterion: self.model_criterion.clone(),
            generated_at: self.generated_at.clone(),
        };
        serde_json::to_string_pretty(&repr).expect("report serializes")
    }

    /// Parses the machine format back. Derived fields (fail rates,
    /// pattern details, risk labels) are reconstructed.
    pub fn from_json(text: &str) -> Result<Self> {
        let repr: ReportRepr = serde_json::from_str(text)
            .map_err(|e| Error::Report(format!("not a valid machine report: {e}")))?;
        let summaries: Vec<AssessmentSummary> = repr
            .summaries
            .iter()
            .map(|s| AssessmentSummary::of(&s.attribute, s.pass, s.fail))
            .collect();
        let patterns = repr
            .patterns
            .into_iter()
            .map(|p| {
                let summary = summaries
                    .iter()
                    .find(|s| s.attribute == p.attribute)
                    .ok_or_else(|| {
                        Error::Report(format!(
                            "pattern refers to `{}`, which has no summary",
                            p.attribute
                        ))
                    })?;
                Ok(Pattern {
                    kind: p.kind,
                    attribute: p.attribute,
                    detail: pattern_detail(p.kind, summary.pass_count, summary.fail_count),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let at_risk = repr
            .at_risk
            .into_iter()
            .map(|e| RiskEntry {
                student_id: e.student_id,
                label: Category::Fail,
                path: e.path,
            })
            .collect();
        Ok(RiskReport {
            course_id: repr.course_id,
            summaries,
            patterns,
            at_risk,
            model_criterion: repr.criterion,
            generated_at: repr.generated_at,
        })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReportRepr {
    course_id: String,
    summaries: Vec<SummaryRepr>,
    patterns: Vec<PatternRepr>,
    at_risk: Vec<RiskRepr>,
    criterion: String,
    generated_at: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SummaryRepr {
    attribute: String,
    pass: usize,
    fail: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PatternRepr {
    kind: PatternKind,
    attribute: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RiskRepr {
    student_id: String,
    path: Vec<(String, Category)>,
}
