//! Predicates that keep trees out of the dataset.

use std::fmt;

use crate::ast::{count_nodes, AstNode};
use crate::cst::{CstKind, SourceSpan};
use crate::error::ConfigError;
use crate::granularity::Granularity;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FilterSpec {
    TreeSize {
        max_nodes: usize,
        min_nodes: Option<usize>,
    },
    CodeLines {
        max_lines: usize,
    },
    AbstractMethod,
    /// Methods annotated `@Override`.
    OverrideMethod,
    Constructor,
}

impl FilterSpec {
    pub const NAMES: &'static [&'static str] = &[
        "tree_size",
        "code_lines",
        "abstract_method",
        "override_method",
        "constructor",
    ];

    pub fn name(&self) -> &'static str {
        match self {
            FilterSpec::TreeSize { .. } => "tree_size",
            FilterSpec::CodeLines { .. } => "code_lines",
            FilterSpec::AbstractMethod => "abstract_method",
            FilterSpec::OverrideMethod => "override_method",
            FilterSpec::Constructor => "constructor",
        }
    }

    pub fn method_only(&self) -> bool {
        matches!(
            self,
            FilterSpec::AbstractMethod | FilterSpec::OverrideMethod | FilterSpec::Constructor
        )
    }

    pub fn validate(&self, granularity: Granularity) -> Result<(), ConfigError> {
        let mut problems = Vec::new();
        match *self {
            FilterSpec::TreeSize {
                max_nodes,
                min_nodes,
            } => {
                if max_nodes == 0 {
                    problems.push("tree_size: max_nodes must be positive".to_owned());
                }
                match min_nodes {
                    Some(0) => problems.push("tree_size: min_nodes must be positive".to_owned()),
                    Some(min) if min > max_nodes => problems.push(format!(
                        "tree_size: min_nodes ({min}) exceeds max_nodes ({max_nodes})"
                    )),
                    _ => {}
                }
            }
            FilterSpec::CodeLines { max_lines: 0 } => {
                problems.push("code_lines: max_lines must be positive".to_owned())
            }
            _ => {}
        }
        if self.method_only() && granularity != Granularity::Method {
            problems.push(format!(
                "{} filter requires method granularity, got {granularity}",
                self.name()
            ));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(ConfigError::from_problems(problems))
        }
    }
}

impl fmt::Display for FilterSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FilterSpec::TreeSize {
                max_nodes,
                min_nodes: Some(min),
            } => write!(f, "tree_size({min}..={max_nodes})"),
            FilterSpec::TreeSize { max_nodes, .. } => write!(f, "tree_size(..={max_nodes})"),
            FilterSpec::CodeLines { max_lines } => write!(f, "code_lines(..={max_lines})"),
            other => f.write_str(other.name()),
        }
    }
}

fn is_method_like(tree: &AstNode) -> bool {
    tree.is(CstKind::MethodDecl) || tree.is(CstKind::ConstructorDecl)
}

fn has_modifier(tree: &AstNode, modifier: &str) -> bool {
    tree.child(CstKind::ModifierList).is_some_and(|list| {
        list.children
            .iter()
            .filter(|m| m.is(CstKind::Modifier))
            .any(|m| m.leaf_tokens().contains(&modifier))
    })
}

fn has_annotation(tree: &AstNode, name: &str) -> bool {
    tree.child(CstKind::ModifierList).is_some_and(|list| {
        list.children
            .iter()
            .filter(|a| a.is(CstKind::Annotation))
            .any(|a| {
                a.leaves()
                    .into_iter()
                    .rev()
                    .find(|l| l.is(CstKind::Identifier))
                    .and_then(|l| l.token.as_deref())
                    == Some(name)
            })
    })
}

/// `true` keeps the tree.
pub fn accept(tree: &AstNode, span: &SourceSpan, spec: &FilterSpec) -> Result<bool, ConfigError> {
    if spec.method_only() && !is_method_like(tree) {
        return Err(ConfigError::new(format!(
            "{} filter applied to a {} tree; it needs method granularity",
            spec.name(),
            tree.node_type
        )));
    }
    Ok(match *spec {
        FilterSpec::TreeSize {
            max_nodes,
            min_nodes,
        } => {
            let n = count_nodes(tree);
            n <= max_nodes && min_nodes.is_none_or(|min| n >= min)
        }
        FilterSpec::CodeLines { max_lines } => span.line_count() <= max_lines,
        FilterSpec::AbstractMethod => {
            tree.is(CstKind::ConstructorDecl)
                || (!has_modifier(tree, "abstract") && tree.child(CstKind::CodeBlock).is_some())
        }
        FilterSpec::OverrideMethod => !has_annotation(tree, "Override"),
        FilterSpec::Constructor => !tree.is(CstKind::ConstructorDecl),
    })
}

/// Conjunction of all specs; the empty list accepts everything.
pub fn apply_all(tree: &AstNode, span: &SourceSpan, specs: &[FilterSpec]) -> Result<bool, ConfigError> {
    Ok(rejections(tree, span, specs)?.is_empty())
}

/// Every spec that rejects `tree`, in spec order. All specs are evaluated
/// so that per-filter statistics do not depend on filter order.
pub fn rejections<'a>(
    tree: &AstNode,
    span: &SourceSpan,
    specs: &'a [FilterSpec],
) -> Result<Vec<&'a FilterSpec>, ConfigError> {
    let mut out = Vec::new();
    for spec in specs {
        if !accept(tree, span, spec)? {
            out.push(spec);
        }
    }
    Ok(out)
}
