//! Decision-tree induction, classification and rule extraction.
//!
//! Trees are grown top-down: the best-scoring attribute splits the node,
//! each category gets a branch, and recursion stops on pure subsets, on
//! exhausted candidates, or when no candidate improves on the parent.
//! There is no pruning. Trees are immutable once built, so classifying
//! from several threads needs no synchronization.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, StudentRecord};
use crate::error::{Error, Result};
use crate::metrics::{counts_over_target, gain_and_split, ClassCounts};
use crate::schema::Category;

/// Attribute-selection criterion.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    #[default]
    GainRatio,
    InfoGain,
}

impl Criterion {
    pub fn as_str(self) -> &'static str {
        match self {
            Criterion::GainRatio => "gain-ratio",
            Criterion::InfoGain => "info-gain",
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gain-ratio" => Ok(Criterion::GainRatio),
            "info-gain" => Ok(Criterion::InfoGain),
            _ => Err(Error::Model(format!(
                "unknown criterion `{s}` (expected gain-ratio or info-gain)"
            ))),
        }
    }
}

/// Stopping controls for induction. Defaults grow the full tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InductionParams {
    /// A node with fewer records becomes a majority leaf.
    pub min_support: usize,
    /// Number of splits allowed on any path; `None` is unlimited.
    pub max_depth: Option<usize>,
}

impl Default for InductionParams {
    fn default() -> Self {
        InductionParams {
            min_support: 1,
            max_depth: None,
        }
    }
}

impl InductionParams {
    pub fn validate(&self) -> Result<()> {
        if self.min_support == 0 {
            return Err(Error::InvalidParams("min_support must be >= 1".into()));
        }
        if self.max_depth == Some(0) {
            return Err(Error::InvalidParams("max_depth must be >= 1".into()));
        }
        Ok(())
    }
}

/// A node of an induced tree. Branch keys iterate Pass before Fail.
#[derive(Clone, Debug, PartialEq)]
pub enum TreeNode {
    Internal {
        attribute: String,
        branches: BTreeMap<Category, TreeNode>,
        support: ClassCounts,
    },
    Leaf {
        label: Category,
        support: ClassCounts,
        purity: f64,
    },
}

impl TreeNode {
    pub fn support(&self) -> &ClassCounts {
        match self {
            TreeNode::Internal { support, .. } => support,
            TreeNode::Leaf { support, .. } => support,
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, TreeNode::Leaf { .. })
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Internal { branches, .. } => {
                branches.values().map(TreeNode::leaf_count).sum()
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Internal { branches, .. } => {
                1 + branches.values().map(TreeNode::depth).max().unwrap_or(0)
            }
        }
    }
}

/// Fraction of a leaf's support carried by its label; 0 for an empty leaf.
pub(crate) fn label_purity(support: &ClassCounts, label: Category) -> f64 {
    if support.total() == 0 {
        0.0
    } else {
        support.count(label) as f64 / support.total() as f64
    }
}

/// Picks the candidate with the highest criterion value, or `None` when
/// no candidate has positive gain (under gain ratio, candidates whose
/// split information is zero are excluded). Ties go to the candidate
/// declared earliest in the schema.
pub fn select_attribute(
    dataset: &Dataset,
    candidates: &[&str],
    criterion: Criterion,
) -> Result<Option<String>> {
    if candidates.is_empty() {
        return Ok(None);
    }
    if dataset.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let refs: Vec<&StudentRecord> = dataset.records.iter().collect();
    select_over(&refs, &ordered_candidates(dataset, candidates)?, criterion)
}

/// Candidate names sorted by schema position, deduplicated.
fn ordered_candidates<'a>(dataset: &Dataset, candidates: &[&'a str]) -> Result<Vec<&'a str>> {
    let mut positioned = Vec::with_capacity(candidates.len());
    for &name in candidates {
        let position = dataset
            .schema
            .position(name)
            .ok_or_else(|| Error::UnknownAttribute(name.to_string()))?;
        positioned.push((position, name));
    }
    positioned.sort_unstable();
    positioned.dedup();
    Ok(positioned.into_iter().map(|(_, name)| name).collect())
}

fn select_over(
    records: &[&StudentRecord],
    ordered: &[&str],
    criterion: Criterion,
) -> Result<Option<String>> {
    let mut best: Option<(&str, f64)> = None;
    for &name in ordered {
        let (gain, split) = gain_and_split(records, name)?;
        if gain <= 0.0 {
            continue;
        }
        let value = match criterion {
            Criterion::InfoGain => gain,
            Criterion::GainRatio => {
                if split == 0.0 {
                    continue;
                }
                gain / split
            }
        };
        // Strict comparison keeps the earliest candidate on ties.
        if best.is_none_or(|(_, current)| value > current) {
            best = Some((name, value));
        }
    }
    Ok(best.map(|(name, _)| name.to_string()))
}

/// Grows a tree over the labeled dataset.
pub fn induce_tree(
    dataset: &Dataset,
    criterion: Criterion,
    params: InductionParams,
) -> Result<TreeNode> {
    params.validate()?;
    dataset.schema.validate()?;
    if dataset.is_empty() {
        return Err(Error::EmptyDataset);
    }
    for (index, record) in dataset.records.iter().enumerate() {
        if record.target.is_none() {
            return Err(Error::UnlabeledRecord {
                index,
                student_id: record.student_id.clone(),
            });
        }
        for name in dataset.schema.attribute_names() {
            if record.value(name).is_none() {
                return Err(Error::MissingAttribute(name.to_string()));
            }
        }
    }

    let refs: Vec<&StudentRecord> = dataset.records.iter().collect();
    let candidates: Vec<&str> = dataset.schema.attribute_names().collect();
    grow(&refs, &candidates, criterion, params, 0)
}

fn grow(
    records: &[&StudentRecord],
    candidates: &[&str],
    criterion: Criterion,
    params: InductionParams,
    depth: usize,
) -> Result<TreeNode> {
    let support = counts_over_target(records)?;
    if let Some(label) = support.pure_class() {
        return Ok(TreeNode::Leaf {
            label,
            purity: 1.0,
            support,
        });
    }

    let depth_reached = params.max_depth.is_some_and(|limit| depth >= limit);
    let too_small = records.len() < params.min_support;
    let selected = if depth_reached || too_small || candidates.is_empty() {
        None
    } else {
        select_over(records, candidates, criterion)?
    };
    let Some(attribute) = selected else {
        let label = support.majority().expect("node has records");
        return Ok(TreeNode::Leaf {
            label,
            purity: label_purity(&support, label),
            support,
        });
    };

    let majority = support.majority().expect("node has records");
    let remaining: Vec<&str> = candidates
        .iter()
        .copied()
        .filter(|&c| c != attribute)
        .collect();
    let mut branches = BTreeMap::new();
    for category in Category::ALL {
        let subset: Vec<&StudentRecord> = records
            .iter()
            .copied()
            .filter(|r| r.value(&attribute) == Some(category))
            .collect();
        let branch = if subset.is_empty() {
            // Value unseen in this partition: predict the parent majority.
            TreeNode::Leaf {
                label: majority,
                support: ClassCounts::new(),
                purity: 0.0,
            }
        } else {
            grow(&subset, &remaining, criterion, params, depth + 1)?
        };
        branches.insert(category, branch);
    }

    Ok(TreeNode::Internal {
        attribute,
        branches,
        support,
    })
}

/// Outcome of classifying one record.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Classification {
    pub label: Category,
    pub at_risk: bool,
    pub path: Vec<(String, Category)>,
}

/// Walks the record down the tree. A value with no branch at some node
/// falls back to that node's majority class with the path walked so far.
pub fn classify(tree: &TreeNode, record: &StudentRecord) -> Result<Classification> {
    let mut node = tree;
    let mut path = Vec::new();
    loop {
        match node {
            TreeNode::Leaf { label, .. } => {
                return Ok(done(*label, path));
            }
            TreeNode::Internal {
                attribute,
                branches,
                support,
            } => {
                let value = record
                    .value(attribute)
                    .ok_or_else(|| Error::MissingAttribute(attribute.clone()))?;
                path.push((attribute.clone(), value));
                match branches.get(&value) {
                    Some(next) => node = next,
                    None => {
                        let label = support.majority().unwrap_or(Category::Fail);
                        return Ok(done(label, path));
                    }
                }
            }
        }
    }
}

fn done(label: Category, path: Vec<(String, Category)>) -> Classification {
    Classification {
        label,
        at_risk: label == Category::Fail,
        path,
    }
}

/// One IF-THEN rule read off a root-to-leaf path.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Rule {
    pub conditions: Vec<(String, Category)>,
    pub conclusion: Category,
    pub support: ClassCounts,
}

impl Rule {
    pub fn matches(&self, record: &StudentRecord) -> bool {
        self.conditions
            .iter()
            .all(|(attribute, value)| record.value(attribute) == Some(*value))
    }

    /// Renders the rule as text, e.g.
    /// `IF Quiz 2 = "Fail" THEN Final = "Fail"`.
    pub fn render(&self, target: &str) -> String {
        let conclusion = format!("THEN {} = \"{}\"", target, self.conclusion);
        if self.conditions.is_empty() {
            return conclusion;
        }
        let conditions: Vec<String> = self
            .conditions
            .iter()
            .map(|(attribute, value)| format!("{attribute} = \"{value}\""))
            .collect();
        format!("IF {} {}", conditions.join(" AND "), conclusion)
    }
}

/// One rule per leaf, depth-first with Pass branches before Fail.
pub fn extract_rules(tree: &TreeNode) -> Vec<Rule> {
    let mut rules = Vec::new();
    let mut path = Vec::new();
    collect_rules(tree, &mut path, &mut rules);
    rules
}

fn collect_rules(node: &TreeNode, path: &mut Vec<(String, Category)>, rules: &mut Vec<Rule>) {
    match node {
        TreeNode::Leaf { label, support, .. } => rules.push(Rule {
            conditions: path.clone(),
            conclusion: *label,
            support: support.clone(),
        }),
        TreeNode::Internal {
            attribute,
            branches,
            ..
        } => {
            for (category, branch) in branches {
                path.push((attribute.clone(), *category));
                collect_rules(branch, path, rules);
                path.pop();
            }
        }
    }
}

/// Conclusion of the first matching rule, if any.
pub fn apply_rules(rules: &[Rule], record: &StudentRecord) -> Option<Category> {
    rules
        .iter()
        .find(|rule| rule.matches(record))
        .map(|rule| rule.conclusion)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{parse_csv, ParseMode};
    use crate::schema::parse_schema;

    const COURSE_CONFIG: &str = "\
course_type = with_practical
attribute.Quiz 1.kind = quiz
attribute.Quiz 2.kind = quiz
attribute.Mid-Term.kind = midterm
attribute.Assignment 1.kind = assignment1
attribute.Assignment 2.kind = assignment2
";

    const TRAINING_CSV: &str = "\
student_id,Quiz 1,Quiz 2,Mid-Term,Assignment 1,Assignment 2,Final
1,Pass,Pass,Pass,Pass,Pass,Pass
2,Pass,Pass,Pass,Pass,Pass,Pass
3,Fail,Pass,Fail,Pass,Pass,Fail
4,Pass,Pass,Pass,Pass,Pass,Pass
5,Fail,Fail,Fail,Pass,Fail,Fail
6,Fail,Fail,Pass,Pass,Pass,Fail
7,Pass,Fail,Pass,Pass,Pass,Fail
8,Pass,Pass,Pass,Pass,Pass,Pass
9,Pass,Pass,Pass,Pass,Pass,Pass
10,Fail,Fail,Pass,Pass,Pass,Fail
11,Pass,Pass,Pass,Pass,Pass,Pass
12,Pass,Pass,Fail,Pass,Pass,Pass
13,Pass,Pass,Pass,Pass,Pass,Pass
14,Pass,Pass,Pass,Pass,Pass,Pass
15,Pass,Fail,Pass,Pass,Pass,Fail
16,Pass,Pass,Pass,Pass,Pass,Pass
17,Pass,Pass,Pass,Pass,Pass,Pass
18,Pass,Fail,Fail,Pass,Fail,Fail
19,Pass,Pass,Pass,Pass,Pass,Pass
20,Pass,Pass,Pass,Pass,Pass,Pass
";

    fn training_data() -> Dataset {
        let schema = parse_schema(COURSE_CONFIG).unwrap();
        parse_csv(TRAINING_CSV, &schema, ParseMode::Categorical).unwrap()
    }

    fn trained_tree(criterion: Criterion) -> TreeNode {
        induce_tree(&training_data(), criterion, InductionParams::default()).unwrap()
    }

    #[test]
    fn cohort_tree_roots_on_second_quiz() {
        for criterion in [Criterion::GainRatio, Criterion::InfoGain] {
            let tree = trained_tree(criterion);
            let TreeNode::Internal {
                attribute,
                branches,
                support,
            } = &tree
            else {
                panic!("root must split");
            };
            assert_eq!(attribute, "Quiz 2");
            assert_eq!(support.count(Category::Pass), 13);
            assert_eq!(support.count(Category::Fail), 7);

            let fail_branch = &branches[&Category::Fail];
            assert_eq!(
                *fail_branch,
                TreeNode::Leaf {
                    label: Category::Fail,
                    support: ClassCounts::of(0, 6),
                    purity: 1.0,
                }
            );

            let TreeNode::Internal {
                attribute,
                branches,
                ..
            } = &branches[&Category::Pass]
            else {
                panic!("pass branch must split");
            };
            assert_eq!(attribute, "Quiz 1");
            assert_eq!(
                branches[&Category::Pass],
                TreeNode::Leaf {
                    label: Category::Pass,
                    support: ClassCounts::of(13, 0),
                    purity: 1.0,
                }
            );
            assert_eq!(
                branches[&Category::Fail],
                TreeNode::Leaf {
                    label: Category::Fail,
                    support: ClassCounts::of(0, 1),
                    purity: 1.0,
                }
            );
        }
    }

    #[test]
    fn selection_on_cohort_and_its_pass_subset() {
        let dataset = training_data();
        let candidates: Vec<&str> = dataset.schema.attribute_names().collect();
        let best = select_attribute(&dataset, &candidates, Criterion::GainRatio).unwrap();
        assert_eq!(best.as_deref(), Some("Quiz 2"));

        let subset = Dataset::new(
            dataset.schema.clone(),
            dataset
                .records
                .iter()
                .filter(|r| r.value("Quiz 2") == Some(Category::Pass))
                .cloned()
                .collect(),
        );
        assert_eq!(subset.len(), 14);
        let remaining: Vec<&str> = candidates
            .iter()
            .copied()
            .filter(|&c| c != "Quiz 2")
            .collect();
        let best = select_attribute(&subset, &remaining, Criterion::GainRatio).unwrap();
        assert_eq!(best.as_deref(), Some("Quiz 1"));
    }

    #[test]
    fn selection_edge_cases() {
        let dataset = training_data();
        assert_eq!(
            select_attribute(&dataset, &[], Criterion::GainRatio).unwrap(),
            None
        );

        let pure = Dataset::new(
            dataset.schema.clone(),
            dataset
                .records
                .iter()
                .filter(|r| r.target == Some(Category::Pass))
                .cloned()
                .collect(),
        );
        let candidates: Vec<&str> = dataset.schema.attribute_names().collect();
        assert_eq!(
            select_attribute(&pure, &candidates, Criterion::GainRatio).unwrap(),
            None
        );

        let empty = Dataset::new(dataset.schema.clone(), Vec::new());
        assert!(matches!(
            select_attribute(&empty, &candidates, Criterion::GainRatio),
            Err(Error::EmptyDataset)
        ));
        assert!(matches!(
            select_attribute(&dataset, &["Quiz 9"], Criterion::GainRatio),
            Err(Error::UnknownAttribute(_))
        ));
    }

    #[test]
    fn record_order_does_not_change_the_tree() {
        let dataset = training_data();
        let tree = induce_tree(&dataset, Criterion::GainRatio, InductionParams::default()).unwrap();
        let mut reversed = dataset.clone();
        reversed.records.reverse();
        let tree_reversed =
            induce_tree(&reversed, Criterion::GainRatio, InductionParams::default()).unwrap();
        assert_eq!(tree, tree_reversed);
    }

    #[test]
    fn single_record_gives_single_leaf() {
        let dataset = training_data();
        let one = Dataset::new(dataset.schema.clone(), vec![dataset.records[0].clone()]);
        let tree = induce_tree(&one, Criterion::GainRatio, InductionParams::default()).unwrap();
        assert_eq!(
            tree,
            TreeNode::Leaf {
                label: Category::Pass,
                support: ClassCounts::of(1, 0),
                purity: 1.0,
            }
        );
    }

    #[test]
    fn perfect_predictor_dominates() {
        let mut dataset = training_data();
        for record in &mut dataset.records {
            record.target = record.value("Quiz 1");
        }
        for criterion in [Criterion::GainRatio, Criterion::InfoGain] {
            let tree = induce_tree(&dataset, criterion, InductionParams::default()).unwrap();
            let TreeNode::Internal {
                attribute,
                branches,
                ..
            } = &tree
            else {
                panic!("root must split");
            };
            assert_eq!(attribute, "Quiz 1");
            assert!(branches.values().all(TreeNode::is_leaf));
        }
    }

    #[test]
    fn induction_rejects_bad_inputs() {
        let dataset = training_data();
        let empty = Dataset::new(dataset.schema.clone(), Vec::new());
        assert!(matches!(
            induce_tree(&empty, Criterion::GainRatio, InductionParams::default()),
            Err(Error::EmptyDataset)
        ));

        let mut unlabeled = dataset.clone();
        unlabeled.records[2].target = None;
        assert!(matches!(
            induce_tree(&unlabeled, Criterion::GainRatio, InductionParams::default()),
            Err(Error::UnlabeledRecord { index: 2, .. })
        ));

        let mut nonconforming = dataset.clone();
        nonconforming.records[0].values.remove("Quiz 2");
        assert!(matches!(
            induce_tree(&nonconforming, Criterion::GainRatio, InductionParams::default()),
            Err(Error::MissingAttribute(ref a)) if a == "Quiz 2"
        ));

        assert!(matches!(
            induce_tree(
                &dataset,
                Criterion::GainRatio,
                InductionParams {
                    min_support: 0,
                    max_depth: None
                }
            ),
            Err(Error::InvalidParams(_))
        ));
        assert!(matches!(
            induce_tree(
                &dataset,
                Criterion::GainRatio,
                InductionParams {
                    min_support: 1,
                    max_depth: Some(0)
                }
            ),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn depth_limit_truncates_to_majority_leaves() {
        let tree = induce_tree(
            &training_data(),
            Criterion::GainRatio,
            InductionParams {
                min_support: 1,
                max_depth: Some(1),
            },
        )
        .unwrap();
        let TreeNode::Internal {
            attribute,
            branches,
            ..
        } = &tree
        else {
            panic!("root must split");
        };
        assert_eq!(attribute, "Quiz 2");
        assert_eq!(
            branches[&Category::Pass],
            TreeNode::Leaf {
                label: Category::Pass,
                support: ClassCounts::of(13, 1),
                purity: 13.0 / 14.0,
            }
        );
        assert!(branches[&Category::Fail].is_leaf());
    }

    #[test]
    fn min_support_truncates_small_nodes() {
        let tree = induce_tree(
            &training_data(),
            Criterion::GainRatio,
            InductionParams {
                min_support: 15,
                max_depth: None,
            },
        )
        .unwrap();
        // The root has 20 records; both children fall under 15.
        assert_eq!(tree.depth(), 1);
        assert_eq!(tree.leaf_count(), 2);
    }

    #[test]
    fn classify_follows_paths() {
        let dataset = training_data();
        let tree = trained_tree(Criterion::GainRatio);

        let student7 = &dataset.records[6];
        assert_eq!(student7.student_id, "7");
        let outcome = classify(&tree, student7).unwrap();
        assert_eq!(outcome.label, Category::Fail);
        assert!(outcome.at_risk);
        assert_eq!(outcome.path, vec![("Quiz 2".to_string(), Category::Fail)]);

        let student1 = &dataset.records[0];
        let outcome = classify(&tree, student1).unwrap();
        assert_eq!(outcome.label, Category::Pass);
        assert!(!outcome.at_risk);
        assert_eq!(
            outcome.path,
            vec![
                ("Quiz 2".to_string(), Category::Pass),
                ("Quiz 1".to_string(), Category::Pass),
            ]
        );
    }

    #[test]
    fn classify_reproduces_every_training_label() {
        let dataset = training_data();
        let tree = trained_tree(Criterion::GainRatio);
        for record in &dataset.records {
            let outcome = classify(&tree, record).unwrap();
            assert_eq!(
                Some(outcome.label),
                record.target,
                "student {}",
                record.student_id
            );
        }
    }

    #[test]
    fn classify_requires_queried_attributes() {
        let dataset = training_data();
        let tree = trained_tree(Criterion::GainRatio);
        let mut record = dataset.records[0].clone();
        record.values.remove("Quiz 2");
        let err = classify(&tree, &record).unwrap_err();
        assert!(matches!(err, Error::MissingAttribute(ref a) if a == "Quiz 2"));
    }

    #[test]
    fn missing_branch_falls_back_to_node_majority() {
        let tree = TreeNode::Internal {
            attribute: "Quiz 1".into(),
            branches: BTreeMap::from([(
                Category::Pass,
                TreeNode::Leaf {
                    label: Category::Pass,
                    support: ClassCounts::of(3, 0),
                    purity: 1.0,
                },
            )]),
            support: ClassCounts::of(3, 1),
        };
        let record = StudentRecord {
            student_id: "x".into(),
            values: BTreeMap::from([("Quiz 1".to_string(), Category::Fail)]),
            target: None,
        };
        let outcome = classify(&tree, &record).unwrap();
        assert_eq!(outcome.label, Category::Pass);
        assert_eq!(outcome.path, vec![("Quiz 1".to_string(), Category::Fail)]);
    }

    #[test]
    fn rules_come_out_depth_first_pass_before_fail() {
        let tree = trained_tree(Criterion::GainRatio);
        let rules = extract_rules(&tree);
        assert_eq!(rules.len(), tree.leaf_count());
        assert_eq!(
            rules[0].conditions,
            vec![
                ("Quiz 2".to_string(), Category::Pass),
                ("Quiz 1".to_string(), Category::Pass),
            ]
        );
        assert_eq!(rules[0].conclusion, Category::Pass);
        assert_eq!(rules[0].support, ClassCounts::of(13, 0));
        assert_eq!(
            rules[1].conditions,
            vec![
                ("Quiz 2".to_string(), Category::Pass),
                ("Quiz 1".to_string(), Category::Fail),
            ]
        );
        assert_eq!(rules[1].conclusion, Category::Fail);
        assert_eq!(
            rules[2].conditions,
            vec![("Quiz 2".to_string(), Category::Fail)]
        );
        assert_eq!(rules[2].conclusion, Category::Fail);
    }

    #[test]
    fn rules_render_as_if_then_text() {
        let rules = extract_rules(&trained_tree(Criterion::GainRatio));
        assert_eq!(
            rules[0].render("Final"),
            "IF Quiz 2 = \"Pass\" AND Quiz 1 = \"Pass\" THEN Final = \"Pass\""
        );
        assert_eq!(
            rules[2].render("Final"),
            "IF Quiz 2 = \"Fail\" THEN Final = \"Fail\""
        );
        let unconditional = Rule {
            conditions: Vec::new(),
            conclusion: Category::Pass,
            support: ClassCounts::of(1, 0),
        };
        assert_eq!(unconditional.render("Final"), "THEN Final = \"Pass\"");
    }

    #[test]
    fn rule_predictions_equal_tree_predictions() {
        let dataset = training_data();
        let tree = trained_tree(Criterion::GainRatio);
        let rules = extract_rules(&tree);
        for record in &dataset.records {
            let by_tree = classify(&tree, record).unwrap().label;
            let by_rules = apply_rules(&rules, record).unwrap();
            assert_eq!(by_tree, by_rules);
        }
    }

    #[test]
    fn single_leaf_tree_yields_one_unconditional_rule() {
        let leaf = TreeNode::Leaf {
            label: Category::Fail,
            support: ClassCounts::of(0, 2),
            purity: 1.0,
        };
        let rules = extract_rules(&leaf);
        assert_eq!(rules.len(), 1);
        assert!(rules[0].conditions.is_empty());
        assert_eq!(rules[0].conclusion, Category::Fail);
    }

    #[test]
    fn no_attribute_repeats_on_any_path() {
        fn check(node: &TreeNode, seen: &mut Vec<String>) {
            if let TreeNode::Internal {
                attribute,
                branches,
                ..
            } = node
            {
                assert!(!seen.contains(attribute), "{attribute} repeated");
                seen.push(attribute.clone());
                for branch in branches.values() {
                    check(branch, seen);
                }
                seen.pop();
            }
        }
        check(&trained_tree(Criterion::GainRatio), &mut Vec::new());
    }
}
