//! Labels for supervised tasks.
//!
//! Method-name extraction hides the name everywhere the model could copy it
//! from: the declaration itself and every recursive call site.

use crate::ast::AstNode;
use crate::cst::CstKind;
use crate::error::ConfigError;

pub const METHOD_NAME_TOKEN: &str = "METHOD_NAME";
pub const SELF_TOKEN: &str = "SELF";
pub const NO_LABEL: &str = "NO_LABEL";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledTree {
    pub label: String,
    pub tree: AstNode,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelExtractor {
    MethodName {
        method_name_token: String,
        self_token: String,
    },
    None,
}

impl Default for LabelExtractor {
    fn default() -> Self {
        LabelExtractor::method_name()
    }
}

impl LabelExtractor {
    pub fn method_name() -> Self {
        LabelExtractor::MethodName {
            method_name_token: METHOD_NAME_TOKEN.to_owned(),
            self_token: SELF_TOKEN.to_owned(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            LabelExtractor::MethodName { .. } => "method_name",
            LabelExtractor::None => "none",
        }
    }

    pub fn extract(&self, tree: AstNode) -> Result<LabeledTree, ConfigError> {
        match self {
            LabelExtractor::MethodName {
                method_name_token,
                self_token,
            } => extract_method_name_with(tree, method_name_token, self_token),
            LabelExtractor::None => Ok(extract_none(tree)),
        }
    }
}

/// Labels a method tree with its name, masking the declaration name as
/// `METHOD_NAME` and recursive call sites as `SELF`.
pub fn extract_method_name(tree: AstNode) -> Result<LabeledTree, ConfigError> {
    extract_method_name_with(tree, METHOD_NAME_TOKEN, SELF_TOKEN)
}

/// Same as [`extract_method_name`] with custom special tokens.
///
/// Constructors are accepted and labeled with the class name. A call is
/// recursive when its callee identifier equals the method name, whatever the
/// receiver; reads of a variable with the same name are left alone.
pub fn extract_method_name_with(
    mut tree: AstNode,
    method_name_token: &str,
    self_token: &str,
) -> Result<LabeledTree, ConfigError> {
    if !(tree.is(CstKind::MethodDecl) || tree.is(CstKind::ConstructorDecl)) {
        return Err(ConfigError::new(format!(
            "method_name extractor needs method granularity, got a {} tree",
            tree.node_type
        )));
    }
    let name_idx = tree.declared_name_index().ok_or_else(|| {
        ConfigError::new("method tree has no name identifier; is IDENTIFIER in ignore_node_kinds?")
    })?;
    let label = tree.children[name_idx]
        .token
        .replace(method_name_token.to_owned())
        .unwrap_or_default();
    for (i, child) in tree.children.iter_mut().enumerate() {
        if i != name_idx {
            mask_calls(child, &label, self_token);
        }
    }
    Ok(LabeledTree { label, tree })
}

fn mask_calls(node: &mut AstNode, name: &str, replacement: &str) {
    if node.is(CstKind::MethodCall) {
        if let Some(callee) = node.children.first_mut().and_then(callee_identifier) {
            if callee.token.as_deref() == Some(name) {
                callee.token = Some(replacement.to_owned());
            }
        }
    }
    for c in &mut node.children {
        mask_calls(c, name, replacement);
    }
}

/// The identifier naming the called method: `f` in `f(..)`, `a.f(..)`, `this.f(..)`.
fn callee_identifier(callee: &mut AstNode) -> Option<&mut AstNode> {
    if callee.is(CstKind::Identifier) && callee.is_leaf() {
        return Some(callee);
    }
    if !callee.is(CstKind::ReferenceExpr) {
        return None;
    }
    callee
        .children
        .last_mut()
        .filter(|c| c.is(CstKind::Identifier) && c.is_leaf())
}

pub fn extract_none(tree: AstNode) -> LabeledTree {
    LabeledTree {
        label: NO_LABEL.to_owned(),
        tree,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::{build_ast, count_nodes, IgnoreList};
    use crate::cst::parse_file;
    use crate::granularity::{split, Granularity};

    fn method(body: &str) -> AstNode {
        let src = format!("class A {{ {body} }}");
        let tree = build_ast(&parse_file(&src, "t").unwrap(), &IgnoreList::default());
        split(&tree, Granularity::Method).remove(0)
    }

    fn count(tree: &AstNode, token: &str) -> usize {
        tree.leaf_tokens().iter().filter(|t| **t == token).count()
    }

    #[test]
    fn factorial_is_fully_masked() {
        let m = method("int fact(int n){ if (n<2) return 1; return n*fact(n-1); }");
        let nodes = count_nodes(&m);
        let labeled = extract_method_name(m).unwrap();
        assert_eq!(labeled.label, "fact");
        assert_eq!(count(&labeled.tree, "METHOD_NAME"), 1);
        assert_eq!(count(&labeled.tree, "SELF"), 1);
        assert_eq!(count(&labeled.tree, "fact"), 0);
        assert_eq!(count_nodes(&labeled.tree), nodes);
    }

    #[test]
    fn non_recursive_getter() {
        let labeled = extract_method_name(method("int getX() { return x; }")).unwrap();
        assert_eq!(labeled.label, "getX");
        assert_eq!(count(&labeled.tree, "METHOD_NAME"), 1);
        assert_eq!(count(&labeled.tree, "SELF"), 0);
    }

    #[test]
    fn same_named_variable_is_not_masked() {
        let labeled =
            extract_method_name(method("int size() { int size = 0; size = size + 1; return size; }"))
                .unwrap();
        assert_eq!(count(&labeled.tree, "SELF"), 0);
        assert_eq!(count(&labeled.tree, "size"), 4);
    }

    #[test]
    fn qualified_and_nested_calls_are_masked() {
        let labeled = extract_method_name(method(
            "int f(A other, int n) { return this.f(other, f(other, n - 1)) + other.f(this, 0) + g(n); }",
        ))
        .unwrap();
        assert_eq!(count(&labeled.tree, "SELF"), 3);
        assert_eq!(count(&labeled.tree, "f"), 0);
        assert_eq!(count(&labeled.tree, "g"), 1);
    }

    #[test]
    fn custom_tokens_and_types_untouched() {
        let m = crate::types::annotate_types(method("int f(int n) { return f(n); }"));
        let labeled = extract_method_name_with(m.clone(), "<NAME>", "<REC>").unwrap();
        assert_eq!(count(&labeled.tree, "<NAME>"), 1);
        assert_eq!(count(&labeled.tree, "<REC>"), 1);
        let types = |t: &AstNode| {
            let mut v = Vec::new();
            t.visit(&mut |n| v.push(n.resolved_type.clone()));
            v
        };
        assert_eq!(types(&m), types(&labeled.tree));
    }

    #[test]
    fn constructor_labeled_with_class_name() {
        let labeled = extract_method_name(method("A(int x) { }")).unwrap();
        assert_eq!(labeled.label, "A");
    }

    #[test]
    fn non_method_root_is_config_error() {
        let tree = AstNode::leaf("IDENTIFIER", "x");
        assert!(extract_method_name(tree).is_err());
    }

    #[test]
    fn none_extractor_is_identity() {
        let leaf = AstNode::leaf("IDENTIFIER", "x");
        assert_eq!(
            extract_none(leaf.clone()),
            LabeledTree {
                label: "NO_LABEL".into(),
                tree: leaf
            }
        );
        let m = method("int f() { return f(); }");
        let out = LabelExtractor::None.extract(m.clone()).unwrap();
        assert_eq!(out.tree, m);
        assert_eq!(count(&out.tree, "SELF"), 0);
    }
}
