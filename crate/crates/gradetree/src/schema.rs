//! Course schema: declared assessments, pass thresholds and course metadata.
//!
//! A schema is normally loaded from a line-oriented `key = value` config
//! file. Attributes are declared with `attribute.<name>.kind`; a pass
//! threshold comes either from an explicit `attribute.<name>.threshold`
//! override or from the standard norms for the attribute kind and course
//! type (quizzes 6, assignment 1 at 4.8/6, assignment 2 at 7.2/6, mid-term
//! 12, for courses with/without practical lessons respectively).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_TARGET: &str = "Final";
pub const DEFAULT_COURSEWORK_MAX: f64 = 60.0;
pub const DEFAULT_FINAL_MAX: f64 = 40.0;
pub const DEFAULT_TOTAL_PASS_MARK: f64 = 60.0;
pub const DEFAULT_FAIL_RATE_THRESHOLD: f64 = 0.4;

/// Categorical outcome of an assessment or of the final exam.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Category {
    Pass,
    Fail,
}

impl Category {
    /// Branch/category order used everywhere: Pass before Fail.
    pub const ALL: [Category; 2] = [Category::Pass, Category::Fail];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Pass => "Pass",
            Category::Fail => "Fail",
        }
    }

    /// Parses a CSV cell, case-insensitively.
    pub fn from_cell(cell: &str) -> Option<Self> {
        if cell.eq_ignore_ascii_case("pass") {
            Some(Category::Pass)
        } else if cell.eq_ignore_ascii_case("fail") {
            Some(Category::Fail)
        } else {
            None
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CourseType {
    WithPractical,
    WithoutPractical,
}

impl CourseType {
    pub fn as_str(self) -> &'static str {
        match self {
            CourseType::WithPractical => "with_practical",
            CourseType::WithoutPractical => "without_practical",
        }
    }

    fn from_config(value: &str) -> Option<Self> {
        match value {
            "with_practical" => Some(CourseType::WithPractical),
            "without_practical" => Some(CourseType::WithoutPractical),
            _ => None,
        }
    }
}

impl fmt::Display for CourseType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// What kind of assessment an attribute is; decides its default threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttributeKind {
    Quiz,
    Assignment1,
    Assignment2,
    Midterm,
    Other,
}

impl AttributeKind {
    /// Standard-norm pass threshold for this kind, if one is defined.
    ///
    /// `Other` has no standard norm; such attributes need an explicit
    /// threshold before raw marks can be discretized.
    pub fn default_threshold(self, course_type: CourseType) -> Option<f64> {
        let with_practical = course_type == CourseType::WithPractical;
        match self {
            AttributeKind::Quiz => Some(6.0),
            AttributeKind::Assignment1 => Some(if with_practical { 4.8 } else { 6.0 }),
            AttributeKind::Assignment2 => Some(if with_practical { 7.2 } else { 6.0 }),
            AttributeKind::Midterm => Some(12.0),
            AttributeKind::Other => None,
        }
    }

    fn from_config(value: &str) -> Option<Self> {
        match value {
            "quiz" => Some(AttributeKind::Quiz),
            "assignment1" => Some(AttributeKind::Assignment1),
            "assignment2" => Some(AttributeKind::Assignment2),
            "midterm" => Some(AttributeKind::Midterm),
            "other" => Some(AttributeKind::Other),
            _ => None,
        }
    }
}

/// One declared assessment attribute. Its position in the schema's
/// attribute list is the declaration order, which drives tie-breaking
/// and all rendered output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttributeDescriptor {
    pub name: String,
    pub kind: AttributeKind,
}

/// Declared assessment attributes, their pass thresholds and course
/// metadata. Immutable after construction; invariants (unique non-empty
/// attribute names, target distinct from predictors) are enforced by the
/// constructors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttributeSchema {
    attributes: Vec<AttributeDescriptor>,
    course_type: CourseType,
    thresholds: BTreeMap<String, f64>,
    #[serde(rename = "target")]
    target_name: String,
    coursework_max: f64,
    final_max: f64,
    total_pass_mark: f64,
    fail_rate_threshold: f64,
}

impl AttributeSchema {
    /// Builds a schema with default thresholds for the course type,
    /// applying `threshold_overrides` on top.
    pub fn new(
        attributes: Vec<AttributeDescriptor>,
        course_type: CourseType,
        threshold_overrides: BTreeMap<String, f64>,
        target_name: impl Into<String>,
    ) -> Result<Self> {
        let mut thresholds = BTreeMap::new();
        for attr in &attributes {
            if let Some(default) = attr.kind.default_threshold(course_type) {
                thresholds.insert(attr.name.clone(), default);
            }
        }
        for (name, value) in threshold_overrides {
            thresholds.insert(name, value);
        }
        let schema = AttributeSchema {
            attributes,
            course_type,
            thresholds,
            target_name: target_name.into(),
            coursework_max: DEFAULT_COURSEWORK_MAX,
            final_max: DEFAULT_FINAL_MAX,
            total_pass_mark: DEFAULT_TOTAL_PASS_MARK,
            fail_rate_threshold: DEFAULT_FAIL_RATE_THRESHOLD,
        };
        schema.validate()?;
        Ok(schema)
    }

    pub(crate) fn validate(&self) -> Result<()> {
        let mut seen = std::collections::BTreeSet::new();
        for attr in &self.attributes {
            if attr.name.is_empty() {
                return Err(Error::Schema("attribute name is empty".into()));
            }
            if !seen.insert(attr.name.as_str()) {
                return Err(Error::Schema(format!(
                    "duplicate attribute `{}`",
                    attr.name
                )));
            }
        }
        if self.target_name.is_empty() {
            return Err(Error::Schema("target name is empty".into()));
        }
        if seen.contains(self.target_name.as_str()) {
            return Err(Error::Schema(format!(
                "target `{}` is also declared as a predictor attribute",
                self.target_name
            )));
        }
        for name in self.thresholds.keys() {
            if !seen.contains(name.as_str()) {
                return Err(Error::Schema(format!(
                    "threshold for undeclared attribute `{name}`"
                )));
            }
        }
        for (name, value) in &self.thresholds {
            if !value.is_finite() {
                return Err(Error::Schema(format!(
                    "threshold for `{name}` is not finite"
                )));
            }
        }
        if !(self.fail_rate_threshold > 0.0 && self.fail_rate_threshold <= 1.0) {
            return Err(Error::InvalidFailRateThreshold(self.fail_rate_threshold));
        }
        Ok(())
    }

    pub fn attributes(&self) -> &[AttributeDescriptor] {
        &self.attributes
    }

    pub fn attribute_names(&self) -> impl Iterator<Item = &str> {
        self.attributes.iter().map(|a| a.name.as_str())
    }

    pub fn contains(&self, name: &str) -> bool {
        self.attributes.iter().any(|a| a.name == name)
    }

    /// Declaration index of an attribute, the tie-breaking order.
    pub fn position(&self, name: &str) -> Option<usize> {
        self.attributes.iter().position(|a| a.name == name)
    }

    pub fn threshold(&self, name: &str) -> Option<f64> {
        self.thresholds.get(name).copied()
    }

    pub fn course_type(&self) -> CourseType {
        self.course_type
    }

    pub fn target_name(&self) -> &str {
        &self.target_name
    }

    pub fn coursework_max(&self) -> f64 {
        self.coursework_max
    }

    pub fn final_max(&self) -> f64 {
        self.final_max
    }

    pub fn total_pass_mark(&self) -> f64 {
        self.total_pass_mark
    }

    pub fn fail_rate_threshold(&self) -> f64 {
        self.fail_rate_threshold
    }
}

impl FromStr for AttributeSchema {
    type Err = Error;

    fn from_str(config_text: &str) -> Result<Self> {
        parse_schema(config_text)
    }
}

/// Parses the line-oriented `key = value` schema config.
///
/// Recognized keys: `course_type`, `target`, `coursework_max`, `final_max`,
/// `total_pass_mark`, `pattern.fail_rate_threshold`, `attribute.<name>.kind`
/// and `attribute.<name>.threshold`. Blank lines and lines starting with
/// `#` are skipped; any other key is an error.
pub fn parse_schema(config_text: &str) -> Result<AttributeSchema> {
    let mut course_type: Option<CourseType> = None;
    let mut target: Option<String> = None;
    let mut coursework_max: Option<f64> = None;
    let mut final_max: Option<f64> = None;
    let mut total_pass_mark: Option<f64> = None;
    let mut fail_rate_threshold: Option<f64> = None;
    // Declaration order is the order of first mention.
    let mut order: Vec<String> = Vec::new();
    let mut kinds: BTreeMap<String, AttributeKind> = BTreeMap::new();
    let mut overrides: BTreeMap<String, f64> = BTreeMap::new();

    for (idx, raw_line) in config_text.lines().enumerate() {
        let line = idx + 1;
        let text = raw_line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let (key, value) = text.split_once('=').ok_or_else(|| Error::Config {
            line,
            message: format!("expected `key = value`, got `{text}`"),
        })?;
        let key = key.trim();
        let value = value.trim();
        if value.is_empty() {
            return Err(Error::Config {
                line,
                message: format!("empty value for key `{key}`"),
            });
        }

        match key {
            "course_type" => {
                if course_type.is_some() {
                    return Err(duplicate_key(line, key));
                }
                course_type = Some(CourseType::from_config(value).ok_or_else(|| Error::Config {
                    line,
                    message: format!(
                        "unknown course_type `{value}` (expected with_practical or without_practical)"
                    ),
                })?);
            }
            "target" => {
                if target.is_some() {
                    return Err(duplicate_key(line, key));
                }
                target = Some(value.to_string());
            }
            "coursework_max" => set_number(line, key, value, &mut coursework_max)?,
            "final_max" => set_number(line, key, value, &mut final_max)?,
            "total_pass_mark" => set_number(line, key, value, &mut total_pass_mark)?,
            "pattern.fail_rate_threshold" => {
                set_number(line, key, value, &mut fail_rate_threshold)?;
                let t = fail_rate_threshold.unwrap();
                if !(t > 0.0 && t <= 1.0) {
                    return Err(Error::InvalidFailRateThreshold(t));
                }
            }
            _ => {
                if let Some(rest) = key.strip_prefix("attribute.") {
                    parse_attribute_key(line, rest, value, &mut order, &mut kinds, &mut overrides)?;
                } else {
                    return Err(Error::Config {
                        line,
                        message: format!("unknown key `{key}`"),
                    });
                }
            }
        }
    }

    let course_type = course_type.ok_or(Error::ConfigMissingKey("course_type"))?;
    let attributes = order
        .into_iter()
        .map(|name| {
            let kind = kinds.get(&name).copied().unwrap_or(AttributeKind::Other);
            AttributeDescriptor { name, kind }
        })
        .collect();

    let mut schema = AttributeSchema::new(
        attributes,
        course_type,
        overrides,
        target.unwrap_or_else(|| DEFAULT_TARGET.to_string()),
    )?;
    if let Some(v) = coursework_max {
        schema.coursework_max = v;
    }
    if let Some(v) = final_max {
        schema.final_max = v;
    }
    if let Some(v) = total_pass_mark {
        schema.total_pass_mark = v;
    }
    if let Some(v) = fail_rate_threshold {
        schema.fail_rate_threshold = v;
    }
    Ok(schema)
}

fn parse_attribute_key(
    line: usize,
    rest: &str,
    value: &str,
    order: &mut Vec<String>,
    kinds: &mut BTreeMap<String, AttributeKind>,
    overrides: &mut BTreeMap<String, f64>,
) -> Result<()> {
    let (name, property) = if let Some(name) = rest.strip_suffix(".kind") {
        (name, "kind")
    } else if let Some(name) = rest.strip_suffix(".threshold") {
        (name, "threshold")
    } else {
        return Err(Error::Config {
            line,
            message: format!(
                "unknown attribute property in `attribute.{rest}` (expected .kind or .threshold)"
            ),
        });
    };
    if name.is_empty() {
        return Err(Error::Config {
            line,
            message: "empty attribute name".into(),
        });
    }
    if !kinds.contains_key(name) && !overrides.contains_key(name) {
        order.push(name.to_string());
    }
    match property {
        "kind" => {
            let kind = AttributeKind::from_config(value).ok_or_else(|| Error::Config {
                line,
                message: format!(
                    "unknown kind `{value}` (expected quiz, assignment1, assignment2, midterm or other)"
                ),
            })?;
            if kinds.insert(name.to_string(), kind).is_some() {
                return Err(Error::DuplicateAttribute {
                    line,
                    name: name.to_string(),
                });
            }
        }
        _ => {
            let threshold = parse_number(line, "threshold", value)?;
            if overrides.insert(name.to_string(), threshold).is_some() {
                return Err(duplicate_key(line, &format!("attribute.{name}.threshold")));
            }
        }
    }
    Ok(())
}

fn duplicate_key(line: usize, key: &str) -> Error {
    Error::Config {
        line,
        message: format!("duplicate key `{key}`"),
    }
}

fn parse_number(line: usize, key: &str, value: &str) -> Result<f64> {
    let parsed: f64 = value.parse().map_err(|_| Error::Config {
        line,
        message: format!("expected a number for `{key}`, got `{value}`"),
    })?;
    if !parsed.is_finite() {
        return Err(Error::Config {
            line,
            message: format!("`{key}` must be finite"),
        });
    }
    Ok(parsed)
}

fn set_number(line: usize, key: &str, value: &str, slot: &mut Option<f64>) -> Result<()> {
    if slot.is_some() {
        return Err(duplicate_key(line, key));
    }
    *slot = Some(parse_number(line, key, value)?);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const FULL_CONFIG: &str = "\
course_type = with_practical

attribute.Quiz 1.kind = quiz
attribute.Quiz 2.kind = quiz
attribute.Mid-Term.kind = midterm
attribute.Assignment 1.kind = assignment1
attribute.Assignment 2.kind = assignment2
";

    #[test]
    fn with_practical_defaults() {
        let schema = parse_schema(FULL_CONFIG).unwrap();
        assert_eq!(schema.threshold("Quiz 1"), Some(6.0));
        assert_eq!(schema.threshold("Quiz 2"), Some(6.0));
        assert_eq!(schema.threshold("Assignment 1"), Some(4.8));
        assert_eq!(schema.threshold("Assignment 2"), Some(7.2));
        assert_eq!(schema.threshold("Mid-Term"), Some(12.0));
        assert_eq!(schema.target_name(), "Final");
        assert_eq!(schema.coursework_max(), 60.0);
        assert_eq!(schema.final_max(), 40.0);
        assert_eq!(schema.total_pass_mark(), 60.0);
        assert_eq!(schema.fail_rate_threshold(), 0.4);
    }

    #[test]
    fn without_practical_defaults() {
        let cfg = "\
course_type = without_practical
attribute.Assignment 1.kind = assignment1
attribute.Assignment 2.kind = assignment2
";
        let schema = parse_schema(cfg).unwrap();
        assert_eq!(schema.threshold("Assignment 1"), Some(6.0));
        assert_eq!(schema.threshold("Assignment 2"), Some(6.0));
    }

    #[test]
    fn declaration_order_is_preserved() {
        let schema = parse_schema(FULL_CONFIG).unwrap();
        let names: Vec<&str> = schema.attribute_names().collect();
        assert_eq!(
            names,
            [
                "Quiz 1",
                "Quiz 2",
                "Mid-Term",
                "Assignment 1",
                "Assignment 2"
            ]
        );
        assert_eq!(schema.position("Mid-Term"), Some(2));
    }

    #[test]
    fn threshold_override_wins() {
        let cfg = "\
course_type = with_practical
attribute.Quiz 1.kind = quiz
attribute.Quiz 1.threshold = 5.5
";
        let schema = parse_schema(cfg).unwrap();
        assert_eq!(schema.threshold("Quiz 1"), Some(5.5));
    }

    #[test]
    fn other_kind_has_no_default_threshold() {
        let cfg = "\
course_type = with_practical
attribute.Lab.kind = other
";
        let schema = parse_schema(cfg).unwrap();
        assert_eq!(schema.threshold("Lab"), None);
    }

    #[test]
    fn threshold_only_attribute_defaults_to_other_kind() {
        let cfg = "\
course_type = with_practical
attribute.Lab.threshold = 3.0
";
        let schema = parse_schema(cfg).unwrap();
        assert_eq!(schema.attributes()[0].kind, AttributeKind::Other);
        assert_eq!(schema.threshold("Lab"), Some(3.0));
    }

    #[test]
    fn duplicate_attribute_is_rejected() {
        let cfg = "\
course_type = with_practical
attribute.Quiz 1.kind = quiz
attribute.Quiz 1.kind = quiz
";
        let err = parse_schema(cfg).unwrap_err();
        assert!(matches!(
            err,
            Error::DuplicateAttribute { line: 3, ref name } if name == "Quiz 1"
        ));
    }

    #[test]
    fn unknown_key_is_rejected() {
        let err = parse_schema("course_type = with_practical\nfoo = bar\n").unwrap_err();
        assert!(matches!(err, Error::Config { line: 2, .. }));
        assert!(err.to_string().contains("unknown key `foo`"));
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let err = parse_schema("course_type = with_practical\nnot a key value\n").unwrap_err();
        assert!(matches!(err, Error::Config { line: 2, .. }));
    }

    #[test]
    fn missing_course_type_is_rejected() {
        let err = parse_schema("attribute.Quiz 1.kind = quiz\n").unwrap_err();
        assert!(matches!(err, Error::ConfigMissingKey("course_type")));
    }

    #[test]
    fn target_clashing_with_attribute_is_rejected() {
        let cfg = "\
course_type = with_practical
target = Quiz 1
attribute.Quiz 1.kind = quiz
";
        let err = parse_schema(cfg).unwrap_err();
        assert!(err.to_string().contains("Quiz 1"));
    }

    #[test]
    fn fail_rate_threshold_must_be_in_unit_interval() {
        let cfg = "\
course_type = with_practical
pattern.fail_rate_threshold = 1.5
attribute.Quiz 1.kind = quiz
";
        let err = parse_schema(cfg).unwrap_err();
        assert!(matches!(err, Error::InvalidFailRateThreshold(t) if t == 1.5));
    }

    #[test]
    fn metadata_overrides_are_applied() {
        let cfg = "\
course_type = without_practical
target = Outcome
coursework_max = 50
final_max = 50
total_pass_mark = 55
pattern.fail_rate_threshold = 0.25
attribute.Quiz 1.kind = quiz
";
        let schema = parse_schema(cfg).unwrap();
        assert_eq!(schema.target_name(), "Outcome");
        assert_eq!(schema.coursework_max(), 50.0);
        assert_eq!(schema.final_max(), 50.0);
        assert_eq!(schema.total_pass_mark(), 55.0);
        assert_eq!(schema.fail_rate_threshold(), 0.25);
    }

    #[test]
    fn category_cells_parse_case_insensitively() {
        assert_eq!(Category::from_cell("PASS"), Some(Category::Pass));
        assert_eq!(Category::from_cell("fail"), Some(Category::Fail));
        assert_eq!(Category::from_cell("Pass "), None);
        assert_eq!(Category::from_cell("ok"), None);
    }
}
