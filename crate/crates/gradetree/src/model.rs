//! Trained-model persistence.
//!
//! A model file is UTF-8 JSON: `format_version`, the selection
//! `criterion`, the training `schema` and the `tree`. Node objects carry
//! a `"type"` tag of `"internal"` or `"leaf"`. Parsing is strict: unknown
//! keys anywhere are rejected, and the decoded tree is checked against
//! the structural invariants (no attribute repeated on a path, branch
//! supports summing to the parent's, leaf labels matching their support
//! majority) so a hand-edited file cannot smuggle in a malformed tree.

use std::collections::BTreeSet;
use std::str::FromStr;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::metrics::ClassCounts;
use crate::schema::{AttributeSchema, Category};
use crate::tree::{label_purity, Criterion, TreeNode};

pub const MODEL_FORMAT_VERSION: u64 = 1;

/// A tree together with the schema and criterion that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct TrainedModel {
    pub criterion: Criterion,
    pub schema: AttributeSchema,
    pub tree: TreeNode,
}

impl TrainedModel {
    pub fn new(criterion: Criterion, schema: AttributeSchema, tree: TreeNode) -> Result<Self> {
        schema.validate()?;
        check_tree(&tree, &schema)?;
        Ok(TrainedModel {
            criterion,
            schema,
            tree,
        })
    }

    /// Renders the model as pretty-printed JSON with deterministic
    /// (alphabetical) key order.
    pub fn to_json(&self) -> String {
        let value = json!({
            "format_version": MODEL_FORMAT_VERSION,
            "criterion": self.criterion.as_str(),
            "schema": serde_json::to_value(&self.schema).expect("schema serializes"),
            "tree": node_to_value(&self.tree),
        });
        serde_json::to_string_pretty(&value).expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| Error::Model(format!("not valid JSON: {e}")))?;
        let top = as_object(&value, "model")?;
        require_keys(
            top,
            "model",
            &["format_version", "criterion", "schema", "tree"],
        )?;

        let version = top["format_version"]
            .as_u64()
            .ok_or_else(|| Error::Model("format_version must be a non-negative integer".into()))?;
        if version != MODEL_FORMAT_VERSION {
            return Err(Error::Model(format!(
                "unsupported format_version {version} (expected {MODEL_FORMAT_VERSION})"
            )));
        }

        let criterion = Criterion::from_str(as_str(&top["criterion"], "criterion")?)?;
        let schema: AttributeSchema = serde_json::from_value(top["schema"].clone())
            .map_err(|e| Error::Model(format!("schema: {e}")))?;
        schema.validate()?;
        let tree = node_from_value(&top["tree"])?;
        check_tree(&tree, &schema)?;

        Ok(TrainedModel {
            criterion,
            schema,
            tree,
        })
    }
}

fn node_to_value(node: &TreeNode) -> Value {
    match node {
        TreeNode::Internal {
            attribute,
            branches,
            support,
        } => {
            let mut map = Map::new();
            for (category, branch) in branches {
                map.insert(category.as_str().to_string(), node_to_value(branch));
            }
            json!({
                "type": "internal",
                "attribute": attribute,
                "branches": Value::Object(map),
                "support": serde_json::to_value(support).expect("counts serialize"),
            })
        }
        TreeNode::Leaf { label, support, .. } => json!({
            "type": "leaf",
            "label": label.as_str(),
            "support": serde_json::to_value(support).expect("counts serialize"),
        }),
    }
}

fn node_from_value(value: &Value) -> Result<TreeNode> {
    let object = as_object(value, "tree node")?;
    let kind = as_str(
        object
            .get("type")
            .ok_or_else(|| Error::Model("tree node is missing `type`".into()))?,
        "type",
    )?;
    match kind {
        "internal" => {
            require_keys(
                object,
                "internal node",
                &["type", "attribute", "branches", "support"],
            )?;
            let attribute = as_str(&object["attribute"], "attribute")?.to_string();
            let branch_map = as_object(&object["branches"], "branches")?;
            if branch_map.is_empty() {
                return Err(Error::Model(format!(
                    "internal node `{attribute}` has no branches"
                )));
            }
            let mut branches = std::collections::BTreeMap::new();
            for (key, child) in branch_map {
                let category = Category::from_cell(key)
                    .ok_or_else(|| Error::Model(format!("branch key `{key}` is not a category")))?;
                branches.insert(category, node_from_value(child)?);
            }
            Ok(TreeNode::Internal {
                attribute,
                branches,
                support: counts_from_value(&object["support"])?,
            })
        }
        "leaf" => {
            require_keys(object, "leaf node", &["type", "label", "support"])?;
            let label_text = as_str(&object["label"], "label")?;
            let label = Category::from_cell(label_text)
                .ok_or_else(|| Error::Model(format!("label `{label_text}` is not a category")))?;
            let support = counts_from_value(&object["support"])?;
            Ok(TreeNode::Leaf {
                label,
                purity: label_purity(&support, label),
                support,
            })
        }
        other => Err(Error::Model(format!("unknown node type `{other}`"))),
    }
}

fn counts_from_value(value: &Value) -> Result<ClassCounts> {
    serde_json::from_value(value.clone()).map_err(|e| Error::Model(format!("support: {e}")))
}

fn as_object<'a>(value: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    value
        .as_object()
        .ok_or_else(|| Error::Model(format!("{what} must be a JSON object")))
}

fn as_str<'a>(value: &'a Value, what: &str) -> Result<&'a str> {
    value
        .as_str()
        .ok_or_else(|| Error::Model(format!("{what} must be a string")))
}

fn require_keys(object: &Map<String, Value>, what: &str, keys: &[&str]) -> Result<()> {
    for key in keys {
        if !object.contains_key(*key) {
            return Err(Error::Model(format!("{what} is missing `{key}`")));
        }
    }
    for key in object.keys() {
        if !keys.contains(&key.as_str()) {
            return Err(Error::Model(format!("{what} has unknown key `{key}`")));
        }
    }
    Ok(())
}

/// Structural invariants every stored tree must satisfy.
fn check_tree(tree: &TreeNode, schema: &AttributeSchema) -> Result<()> {
    let mut path = BTreeSet::new();
    check_node(tree, schema, &mut path)
}

fn check_node<'a>(
    node: &'a TreeNode,
    schema: &AttributeSchema,
    path: &mut BTreeSet<&'a str>,
) -> Result<()> {
    match node {
        TreeNode::Leaf { label, support, .. } => {
            if !support.is_empty() && support.majority() != Some(*label) {
                return Err(Error::Model(format!(
                    "leaf labeled {label} but its support majority is {}",
                    support.majority().expect("non-empty").as_str()
                )));
            }
            Ok(())
        }
        TreeNode::Internal {
            attribute,
            branches,
            support,
        } => {
            if !schema.contains(attribute) {
                return Err(Error::Model(format!(
                    "tree tests `{attribute}`, which the schema does not declare"
                )));
            }
            if !path.insert(attribute) {
                return Err(Error::Model(format!(
                    "attribute `{attribute}` tested twice on one path"
                )));
            }
            if branches.is_empty() {
                return Err(Error::Model(format!(
                    "internal node `{attribute}` has no branches"
                )));
            }
            for category in Category::ALL {
                let branch_total: usize = branches
                    .values()
                    .map(|branch| branch.support().count(category))
                    .sum();
                if branch_total != support.count(category) {
                    return Err(Error::Model(format!(
                        "support of `{attribute}` does not equal the sum of its branches"
                    )));
                }
            }
            for branch in branches.values() {
                check_node(branch, schema, path)?;
            }
            path.remove(attribute.as_str());
            Ok(())
        }
    }
}
