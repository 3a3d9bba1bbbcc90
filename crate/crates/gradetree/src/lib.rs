//! Gain-ratio decision trees over coursework grade sheets.
//!
//! The pipeline: parse a course schema and a grade-sheet CSV, discretize
//! raw marks into Pass/Fail against per-assessment thresholds, score
//! attributes by information gain / split information / gain ratio, grow
//! a decision tree predicting the final-exam outcome, read the tree back
//! as IF-THEN rules, and report which students in a cohort the tree
//! predicts to fail.
//!
//! ```
//! use gradetree::{
//!     build_report, induce_tree, parse_csv, parse_schema, Criterion, InductionParams,
//!     ParseMode, TrainedModel,
//! };
//!
//! let schema = parse_schema(
//!     "course_type = with_practical\n\
//!      attribute.Quiz 1.kind = quiz\n\
//!      attribute.Quiz 2.kind = quiz\n",
//! )?;
//! let training = parse_csv(
//!     "student_id,Quiz 1,Quiz 2,Final\n\
//!      a,Pass,Pass,Pass\n\
//!      b,Pass,Fail,Fail\n\
//!      c,Fail,Pass,Pass\n",
//!     &schema,
//!     ParseMode::Categorical,
//! )?;
//! let tree = induce_tree(&training, Criterion::GainRatio, InductionParams::default())?;
//! let model = TrainedModel::new(Criterion::GainRatio, schema.clone(), tree)?;
//!
//! let cohort = parse_csv(
//!     "student_id,Quiz 1,Quiz 2\nd,Pass,Fail\n",
//!     &schema,
//!     ParseMode::Categorical,
//! )?;
//! let report = build_report(&model, &cohort, "CS101", None, "1970-01-01T00:00:00Z")?;
//! assert_eq!(report.at_risk.len(), 1);
//! assert_eq!(report.at_risk[0].student_id, "d");
//! # Ok::<(), gradetree::Error>(())
//! ```

pub mod analytics;
pub mod dataset;
pub mod error;
pub mod metrics;
pub mod model;
pub mod schema;
pub mod tree;

pub use analytics::{
    build_report, detect_patterns, risk_list, summarize, AssessmentSummary, Pattern, PatternKind,
    RiskEntry, RiskReport,
};
pub use dataset::{discretize_mark, parse_csv, Dataset, ParseMode, StudentRecord, Violation};
pub use error::{Error, Result};
pub use metrics::{
    class_counts, class_counts_attribute, entropy, gain_ratio, information_gain, score_all,
    split_info, AttributeScore, ClassCounts,
};
pub use model::{TrainedModel, MODEL_FORMAT_VERSION};
pub use schema::{
    parse_schema, AttributeDescriptor, AttributeKind, AttributeSchema, Category, CourseType,
};
pub use tree::{
    apply_rules, classify, extract_rules, induce_tree, select_attribute, Classification, Criterion,
    InductionParams, Rule, TreeNode,
};
