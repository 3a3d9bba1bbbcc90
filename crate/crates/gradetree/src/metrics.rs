//! Entropy-based attribute scoring.
//!
//! All quantities are in bits. Entropy of a class distribution is
//! `-sum(p * log2 p)` with `0 * log2 0 = 0`; information gain is the
//! parent entropy minus the weighted entropy of the partition an
//! attribute induces; split information is the entropy of the partition
//! proportions themselves; gain ratio divides gain by split information
//! and is absent when the split information is zero.

use std::collections::BTreeMap;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dataset::{Dataset, StudentRecord};
use crate::error::{Error, Result};
use crate::schema::Category;

/// How many records fall in each class. Zero counts are never stored,
/// so two counts built from the same records compare equal regardless
/// of insertion history.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClassCounts {
    counts: BTreeMap<Category, usize>,
    total: usize,
}

impl ClassCounts {
    pub fn new() -> Self {
        ClassCounts::default()
    }

    pub fn of(pass: usize, fail: usize) -> Self {
        let mut counts = ClassCounts::new();
        if pass > 0 {
            counts.counts.insert(Category::Pass, pass);
        }
        if fail > 0 {
            counts.counts.insert(Category::Fail, fail);
        }
        counts.total = pass + fail;
        counts
    }

    pub fn add(&mut self, category: Category) {
        *self.counts.entry(category).or_insert(0) += 1;
        self.total += 1;
    }

    pub fn count(&self, category: Category) -> usize {
        self.counts.get(&category).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// Non-zero classes in Pass-before-Fail order.
    pub fn iter(&self) -> impl Iterator<Item = (Category, usize)> + '_ {
        self.counts.iter().map(|(&c, &n)| (c, n))
    }

    /// The single class present, if the counts are pure and non-empty.
    pub fn pure_class(&self) -> Option<Category> {
        if self.counts.len() == 1 {
            self.counts.keys().next().copied()
        } else {
            None
        }
    }

    /// Majority class; ties resolve to Fail, the risk-conservative
    /// label. Empty counts have no majority.
    pub fn majority(&self) -> Option<Category> {
        if self.is_empty() {
            None
        } else if self.count(Category::Fail) >= self.count(Category::Pass) {
            Some(Category::Fail)
        } else {
            Some(Category::Pass)
        }
    }
}

impl FromIterator<Category> for ClassCounts {
    fn from_iter<I: IntoIterator<Item = Category>>(iter: I) -> Self {
        let mut counts = ClassCounts::new();
        for category in iter {
            counts.add(category);
        }
        counts
    }
}

impl Serialize for ClassCounts {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(Some(self.counts.len()))?;
        for (category, count) in &self.counts {
            map.serialize_entry(category.as_str(), count)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for ClassCounts {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = BTreeMap::<String, usize>::deserialize(deserializer)?;
        let mut counts = ClassCounts::new();
        for (key, value) in raw {
            let category = Category::from_cell(&key)
                .ok_or_else(|| D::Error::custom(format!("unknown class `{key}`")))?;
            if counts.counts.insert(category, value).is_some() {
                return Err(D::Error::custom(format!("duplicate class `{key}`")));
            }
            counts.total += value;
        }
        counts.counts.retain(|_, n| *n > 0);
        Ok(counts)
    }
}

/// Shannon entropy of the class distribution, in bits.
pub fn entropy(counts: &ClassCounts) -> f64 {
    if counts.total() == 0 {
        return 0.0;
    }
    let total = counts.total() as f64;
    let mut h = 0.0;
    for (_, n) in counts.iter() {
        let p = n as f64 / total;
        h -= p * p.log2();
    }
    h
}

/// Class counts of the target outcome over the whole dataset.
pub fn class_counts(dataset: &Dataset) -> Result<ClassCounts> {
    let refs: Vec<&StudentRecord> = dataset.records.iter().collect();
    counts_over_target(&refs)
}

/// Class counts of an attribute's own values over the whole dataset.
pub fn class_counts_attribute(dataset: &Dataset, attribute: &str) -> Result<ClassCounts> {
    if !dataset.schema.contains(attribute) {
        return Err(Error::UnknownAttribute(attribute.to_string()));
    }
    let refs: Vec<&StudentRecord> = dataset.records.iter().collect();
    counts_over_attribute(&refs, attribute)
}

/// Information gain of partitioning the dataset by `attribute`, clamped
/// at zero against floating-point cancellation.
pub fn information_gain(dataset: &Dataset, attribute: &str) -> Result<f64> {
    if !dataset.schema.contains(attribute) {
        return Err(Error::UnknownAttribute(attribute.to_string()));
    }
    let refs: Vec<&StudentRecord> = dataset.records.iter().collect();
    Ok(gain_and_split(&refs, attribute)?.0)
}

/// Entropy of the partition proportions induced by `attribute`.
pub fn split_info(dataset: &Dataset, attribute: &str) -> Result<f64> {
    if !dataset.schema.contains(attribute) {
        return Err(Error::UnknownAttribute(attribute.to_string()));
    }
    let refs: Vec<&StudentRecord> = dataset.records.iter().collect();
    Ok(gain_and_split(&refs, attribute)?.1)
}

/// Gain ratio, or `None` when the split information is zero (single
/// partition, so the ratio is undefined).
pub fn gain_ratio(gain: f64, split: f64) -> Option<f64> {
    if split == 0.0 {
        None
    } else {
        Some(gain / split)
    }
}

/// Scores for one attribute.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AttributeScore {
    pub attribute: String,
    pub gain: f64,
    pub split_info: f64,
    pub gain_ratio: Option<f64>,
}

/// Scores every schema attribute, in schema order.
pub fn score_all(dataset: &Dataset) -> Result<Vec<AttributeScore>> {
    let refs: Vec<&StudentRecord> = dataset.records.iter().collect();
    let mut scores = Vec::new();
    for name in dataset.schema.attribute_names() {
        let (gain, split) = gain_and_split(&refs, name)?;
        scores.push(AttributeScore {
            attribute: name.to_string(),
            gain,
            split_info: split,
            gain_ratio: gain_ratio(gain, split),
        });
    }
    Ok(scores)
}

pub(crate) fn counts_over_target(records: &[&StudentRecord]) -> Result<ClassCounts> {
    let mut counts = ClassCounts::new();
    for (index, record) in records.iter().enumerate() {
        match record.target {
            Some(category) => counts.add(category),
            None => {
                return Err(Error::UnlabeledRecord {
                    index,
                    student_id: record.student_id.clone(),
                })
            }
        }
    }
    Ok(counts)
}

pub(crate) fn counts_over_attribute(
    records: &[&StudentRecord],
    attribute: &str,
) -> Result<ClassCounts> {
    let mut counts = ClassCounts::new();
    for record in records {
        match record.value(attribute) {
            Some(category) => counts.add(category),
            None => return Err(Error::MissingAttribute(attribute.to_string())),
        }
    }
    Ok(counts)
}

/// Gain and split information of partitioning `records` by `attribute`.
pub(crate) fn gain_and_split(records: &[&StudentRecord], attribute: &str) -> Result<(f64, f64)> {
    let parent = counts_over_target(records)?;
    if parent.is_empty() {
        return Ok((0.0, 0.0));
    }
    let total = parent.total() as f64;

    let mut partitions: BTreeMap<Category, ClassCounts> = BTreeMap::new();
    for record in records {
        let value = record
            .value(attribute)
            .ok_or_else(|| Error::MissingAttribute(attribute.to_string()))?;
        let target = record.target.expect("counted above");
        partitions.entry(value).or_default().add(target);
    }

    let mut weighted = 0.0;
    let mut split = 0.0;
    for subset in partitions.values() {
        let proportion = subset.total() as f64 / total;
        weighted += proportion * entropy(subset);
        split -= proportion * proportion.log2();
    }
    let gain = (entropy(&parent) - weighted).max(0.0);
    Ok((gain, split))
}
