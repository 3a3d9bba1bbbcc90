//! Grade sheets: CSV parsing, mark discretization and dataset validation.
//!
//! A sheet's first column is `student_id`, followed by one column per
//! schema attribute and optionally a target column. Raw sheets carry
//! numeric marks that are discretized against each attribute's threshold;
//! categorical sheets carry `Pass`/`Fail` cells directly. The target
//! column is always categorical, in either mode.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::schema::{AttributeSchema, Category};

pub const STUDENT_ID_COLUMN: &str = "student_id";

/// Turns a numeric mark into a category: pass iff `mark >= threshold`.
pub fn discretize_mark(mark: f64, threshold: f64) -> Result<Category> {
    if !mark.is_finite() || mark < 0.0 {
        return Err(Error::InvalidMark(mark));
    }
    if mark >= threshold {
        Ok(Category::Pass)
    } else {
        Ok(Category::Fail)
    }
}

/// How CSV cells are interpreted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseMode {
    /// Numeric marks, discretized against the schema thresholds.
    RawMarks,
    /// `Pass`/`Fail` cells, taken as-is.
    Categorical,
}

/// One student's row: a category per schema attribute, plus the target
/// outcome when the sheet is labeled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StudentRecord {
    pub student_id: String,
    pub values: BTreeMap<String, Category>,
    pub target: Option<Category>,
}

impl StudentRecord {
    pub fn value(&self, attribute: &str) -> Option<Category> {
        self.values.get(attribute).copied()
    }
}

/// A schema plus the records parsed against it.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub schema: AttributeSchema,
    pub records: Vec<StudentRecord>,
}

impl Dataset {
    pub fn new(schema: AttributeSchema, records: Vec<StudentRecord>) -> Self {
        Dataset { schema, records }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Checks schema/record consistency without failing fast; one
    /// violation per problem found. `require_labels` additionally flags
    /// records with no target outcome.
    pub fn validate(&self, require_labels: bool) -> Vec<Violation> {
        let mut violations = Vec::new();
        if let Err(err) = self.schema.validate() {
            violations.push(Violation {
                record_index: None,
                student_id: None,
                message: err.to_string(),
            });
        }
        for (index, record) in self.records.iter().enumerate() {
            for name in self.schema.attribute_names() {
                if !record.values.contains_key(name) {
                    violations.push(Violation {
                        record_index: Some(index),
                        student_id: Some(record.student_id.clone()),
                        message: format!("missing value for attribute `{name}`"),
                    });
                }
            }
            for name in record.values.keys() {
                if !self.schema.contains(name) {
                    violations.push(Violation {
                        record_index: Some(index),
                        student_id: Some(record.student_id.clone()),
                        message: format!("value for undeclared attribute `{name}`"),
                    });
                }
            }
            if require_labels && record.target.is_none() {
                violations.push(Violation {
                    record_index: Some(index),
                    student_id: Some(record.student_id.clone()),
                    message: format!("no `{}` outcome", self.schema.target_name()),
                });
            }
        }
        violations
    }

    /// Renders the records as a categorical CSV in schema column order.
    /// The target column is included only when every record is labeled.
    pub fn to_csv(&self) -> String {
        let with_target =
            !self.records.is_empty() && self.records.iter().all(|r| r.target.is_some());
        let mut writer = csv::Writer::from_writer(Vec::new());
        let mut header = vec![STUDENT_ID_COLUMN];
        header.extend(self.schema.attribute_names());
        if with_target {
            header.push(self.schema.target_name());
        }
        writer.write_record(&header).expect("csv write to memory");
        for record in &self.records {
            let mut row = vec![record.student_id.as_str()];
            for name in self.schema.attribute_names() {
                row.push(record.values.get(name).map_or("", |c| c.as_str()));
            }
            if with_target {
                row.push(record.target.map_or("", |c| c.as_str()));
            }
            writer.write_record(&row).expect("csv write to memory");
        }
        String::from_utf8(writer.into_inner().expect("csv flush")).expect("csv output is utf-8")
    }
}

/// One consistency problem found by [`Dataset::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// Index into `records`, or `None` for schema-level problems.
    pub record_index: Option<usize>,
    pub student_id: Option<String>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.record_index, &self.student_id) {
            (Some(index), Some(id)) => {
                write!(f, "record {index} (student {id}): {}", self.message)
            }
            _ => f.write_str(&self.message),
        }
    }
}

/// Parses a grade sheet against `schema`.
///
/// The header must start with `student_id` and contain exactly the schema
/// attributes, in any order, plus at most the target column. Row numbers
/// in errors are 1-based data rows (the header is row 0).
pub fn parse_csv(text: &str, schema: &AttributeSchema, mode: ParseMode) -> Result<Dataset> {
    schema.validate()?;
    if mode == ParseMode::RawMarks {
        for name in schema.attribute_names() {
            if schema.threshold(name).is_none() {
                return Err(Error::Schema(format!(
                    "attribute `{name}` has no threshold; raw marks cannot be discretized"
                )));
            }
        }
    }

    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(false)
        .from_reader(text.as_bytes());

    let header = reader
        .headers()
        .map_err(|e| Error::Schema(format!("csv header: {e}")))?
        .clone();
    if header.is_empty() || header.get(0) != Some(STUDENT_ID_COLUMN) {
        return Err(Error::MissingColumn(STUDENT_ID_COLUMN.into()));
    }

    // Map each schema attribute (and the target) to its column index.
    let mut attr_columns: BTreeMap<usize, String> = BTreeMap::new();
    let mut target_column: Option<usize> = None;
    let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
    for (idx, column) in header.iter().enumerate().skip(1) {
        if seen.insert(column, idx).is_some() || column == STUDENT_ID_COLUMN {
            return Err(Error::Schema(format!("duplicate column `{column}`")));
        }
        if schema.contains(column) {
            attr_columns.insert(idx, column.to_string());
        } else if column == schema.target_name() {
            target_column = Some(idx);
        } else {
            return Err(Error::UnexpectedColumn(column.to_string()));
        }
    }
    for name in schema.attribute_names() {
        if !seen.contains_key(name) {
            return Err(Error::MissingColumn(name.to_string()));
        }
    }

    let mut records = Vec::new();
    for (row_idx, row) in reader.records().enumerate() {
        let row_number = row_idx + 1;
        let row = row.map_err(|e| Error::Row {
            row: row_number,
            message: e.to_string(),
        })?;
        let student_id = row.get(0).unwrap_or("");
        if student_id.is_empty() {
            return Err(Error::MissingValue {
                row: row_number,
                column: STUDENT_ID_COLUMN.into(),
            });
        }

        let mut values = BTreeMap::new();
        for (&idx, name) in &attr_columns {
            let cell = row.get(idx).unwrap_or("");
            if cell.is_empty() {
                return Err(Error::MissingValue {
                    row: row_number,
                    column: name.clone(),
                });
            }
            let category = match mode {
                ParseMode::Categorical => parse_category_cell(row_number, name, cell)?,
                ParseMode::RawMarks => {
                    let mark: f64 = cell.parse().map_err(|_| Error::Cell {
                        row: row_number,
                        column: name.clone(),
                        message: format!("expected a numeric mark, got `{cell}`"),
                    })?;
                    let threshold = schema.threshold(name).expect("checked above");
                    discretize_mark(mark, threshold).map_err(|e| Error::Cell {
                        row: row_number,
                        column: name.clone(),
                        message: e.to_string(),
                    })?
                }
            };
            values.insert(name.clone(), category);
        }

        let target = match target_column {
            Some(idx) => {
                let cell = row.get(idx).unwrap_or("");
                if cell.is_empty() {
                    return Err(Error::MissingValue {
                        row: row_number,
                        column: schema.target_name().to_string(),
                    });
                }
                Some(parse_category_cell(row_number, schema.target_name(), cell)?)
            }
            None => None,
        };

        records.push(StudentRecord {
            student_id: student_id.to_string(),
            values,
            target,
        });
    }

    Ok(Dataset::new(schema.clone(), records))
}

fn parse_category_cell(row: usize, column: &str, cell: &str) -> Result<Category> {
    Category::from_cell(cell).ok_or_else(|| Error::Cell {
        row,
        column: column.to_string(),
        message: format!("expected Pass or Fail, got `{cell}`"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::parse_schema;

    fn schema() -> AttributeSchema {
        parse_schema(
            "course_type = with_practical\n\
             attribute.Quiz 1.kind = quiz\n\
             attribute.Assignment 1.kind = assignment1\n",
        )
        .unwrap()
    }

    #[test]
    fn discretize_pass_iff_at_threshold_or_above() {
        assert_eq!(discretize_mark(6.0, 6.0).unwrap(), Category::Pass);
        assert_eq!(discretize_mark(5.999, 6.0).unwrap(), Category::Fail);
        assert_eq!(discretize_mark(0.0, 6.0).unwrap(), Category::Fail);
        assert_eq!(discretize_mark(10.0, 6.0).unwrap(), Category::Pass);
    }

    #[test]
    fn discretize_rejects_bad_marks() {
        assert!(matches!(
            discretize_mark(-0.5, 6.0),
            Err(Error::InvalidMark(_))
        ));
        assert!(matches!(
            discretize_mark(f64::NAN, 6.0),
            Err(Error::InvalidMark(_))
        ));
        assert!(matches!(
            discretize_mark(f64::INFINITY, 6.0),
            Err(Error::InvalidMark(_))
        ));
    }

    #[test]
    fn parses_categorical_sheet_with_target() {
        let csv = "student_id,Quiz 1,Assignment 1,Final\n1,Pass,Fail,Pass\n2,fail,PASS,Fail\n";
        let dataset = parse_csv(csv, &schema(), ParseMode::Categorical).unwrap();
        assert_eq!(dataset.len(), 2);
        assert_eq!(dataset.records[0].student_id, "1");
        assert_eq!(dataset.records[0].value("Quiz 1"), Some(Category::Pass));
        assert_eq!(
            dataset.records[0].value("Assignment 1"),
            Some(Category::Fail)
        );
        assert_eq!(dataset.records[0].target, Some(Category::Pass));
        assert_eq!(dataset.records[1].value("Quiz 1"), Some(Category::Fail));
        assert_eq!(dataset.records[1].target, Some(Category::Fail));
    }

    #[test]
    fn parses_raw_sheet_at_boundaries() {
        let csv = "student_id,Quiz 1,Assignment 1\ns1,6,4.8\ns2,5.9,4.79\n";
        let dataset = parse_csv(csv, &schema(), ParseMode::RawMarks).unwrap();
        assert_eq!(dataset.records[0].value("Quiz 1"), Some(Category::Pass));
        assert_eq!(
            dataset.records[0].value("Assignment 1"),
            Some(Category::Pass)
        );
        assert_eq!(dataset.records[1].value("Quiz 1"), Some(Category::Fail));
        assert_eq!(
            dataset.records[1].value("Assignment 1"),
            Some(Category::Fail)
        );
        assert!(dataset.records[0].target.is_none());
    }

    #[test]
    fn raw_target_column_stays_categorical() {
        let csv = "student_id,Quiz 1,Assignment 1,Final\n1,6,5,Pass\n";
        let dataset = parse_csv(csv, &schema(), ParseMode::RawMarks).unwrap();
        assert_eq!(dataset.records[0].target, Some(Category::Pass));

        let csv = "student_id,Quiz 1,Assignment 1,Final\n1,6,5,37\n";
        let err = parse_csv(csv, &schema(), ParseMode::RawMarks).unwrap_err();
        assert!(matches!(err, Error::Cell { row: 1, ref column, .. } if column == "Final"));
    }

    #[test]
    fn header_must_start_with_student_id() {
        let err = parse_csv(
            "id,Quiz 1,Assignment 1\n",
            &schema(),
            ParseMode::Categorical,
        )
        .unwrap_err();
        assert!(matches!(err, Error::MissingColumn(ref c) if c == STUDENT_ID_COLUMN));
        let err = parse_csv("", &schema(), ParseMode::Categorical).unwrap_err();
        assert!(matches!(err, Error::MissingColumn(ref c) if c == STUDENT_ID_COLUMN));
    }

    #[test]
    fn missing_attribute_column_is_named() {
        let err = parse_csv(
            "student_id,Quiz 1\n1,Pass\n",
            &schema(),
            ParseMode::Categorical,
        )
        .unwrap_err();
        assert!(matches!(err, Error::MissingColumn(ref c) if c == "Assignment 1"));
    }

    #[test]
    fn unexpected_column_is_rejected() {
        let csv = "student_id,Quiz 1,Assignment 1,Lab\n1,Pass,Pass,Pass\n";
        let err = parse_csv(csv, &schema(), ParseMode::Categorical).unwrap_err();
        assert!(matches!(err, Error::UnexpectedColumn(ref c) if c == "Lab"));
    }

    #[test]
    fn duplicate_column_is_rejected() {
        let csv = "student_id,Quiz 1,Quiz 1,Assignment 1\n1,Pass,Pass,Pass\n";
        let err = parse_csv(csv, &schema(), ParseMode::Categorical).unwrap_err();
        assert!(err.to_string().contains("duplicate column"));
    }

    #[test]
    fn empty_cells_are_missing_values() {
        let csv = "student_id,Quiz 1,Assignment 1\n1,,Pass\n";
        let err = parse_csv(csv, &schema(), ParseMode::Categorical).unwrap_err();
        assert!(matches!(
            err,
            Error::MissingValue { row: 1, ref column } if column == "Quiz 1"
        ));

        let csv = "student_id,Quiz 1,Assignment 1,Final\n1,Pass,Pass,\n";
        let err = parse_csv(csv, &schema(), ParseMode::Categorical).unwrap_err();
        assert!(matches!(
            err,
            Error::MissingValue { row: 1, ref column } if column == "Final"
        ));

        let csv = "student_id,Quiz 1,Assignment 1\n,Pass,Pass\n";
        let err = parse_csv(csv, &schema(), ParseMode::Categorical).unwrap_err();
        assert!(matches!(
            err,
            Error::MissingValue { row: 1, ref column } if column == STUDENT_ID_COLUMN
        ));
    }

    #[test]
    fn bad_categorical_cell_reports_row_and_column() {
        let csv = "student_id,Quiz 1,Assignment 1\n1,Pass,Pass\n2,Pass,maybe\n";
        let err = parse_csv(csv, &schema(), ParseMode::Categorical).unwrap_err();
        assert!(matches!(
            err,
            Error::Cell { row: 2, ref column, .. } if column == "Assignment 1"
        ));
    }

    #[test]
    fn raw_mode_requires_thresholds_everywhere() {
        let schema =
            parse_schema("course_type = with_practical\nattribute.Lab.kind = other\n").unwrap();
        let err = parse_csv("student_id,Lab\n1,5\n", &schema, ParseMode::RawMarks).unwrap_err();
        assert!(err.to_string().contains("Lab"));
    }

    #[test]
    fn columns_may_be_reordered() {
        let csv = "student_id,Final,Assignment 1,Quiz 1\n1,Fail,Pass,Fail\n";
        let dataset = parse_csv(csv, &schema(), ParseMode::Categorical).unwrap();
        assert_eq!(dataset.records[0].value("Quiz 1"), Some(Category::Fail));
        assert_eq!(
            dataset.records[0].value("Assignment 1"),
            Some(Category::Pass)
        );
        assert_eq!(dataset.records[0].target, Some(Category::Fail));
    }

    #[test]
    fn csv_round_trip_is_stable() {
        let csv = "student_id,Quiz 1,Assignment 1,Final\n1,Pass,Fail,Pass\n2,Fail,Pass,Fail\n";
        let dataset = parse_csv(csv, &schema(), ParseMode::Categorical).unwrap();
        let rendered = dataset.to_csv();
        assert_eq!(rendered, csv);
        let reparsed = parse_csv(&rendered, &schema(), ParseMode::Categorical).unwrap();
        assert_eq!(reparsed.records, dataset.records);
    }

    #[test]
    fn unlabeled_records_drop_target_column_on_render() {
        let csv = "student_id,Quiz 1,Assignment 1\n1,Pass,Fail\n";
        let dataset = parse_csv(csv, &schema(), ParseMode::Categorical).unwrap();
        assert_eq!(dataset.to_csv(), csv);
    }

    #[test]
    fn validate_flags_missing_and_extra_values() {
        let schema = schema();
        let mut dataset = parse_csv(
            "student_id,Quiz 1,Assignment 1\n1,Pass,Fail\n",
            &schema,
            ParseMode::Categorical,
        )
        .unwrap();
        assert!(dataset.validate(false).is_empty());

        let labeled = dataset.validate(true);
        assert_eq!(labeled.len(), 1);
        assert!(labeled[0].message.contains("Final"));

        dataset.records[0].values.remove("Quiz 1");
        dataset.records[0]
            .values
            .insert("Lab".into(), Category::Pass);
        let violations = dataset.validate(false);
        assert_eq!(violations.len(), 2);
        assert!(violations[0].message.contains("Quiz 1"));
        assert!(violations[1].message.contains("Lab"));
        assert_eq!(violations[0].record_index, Some(0));
    }
}
