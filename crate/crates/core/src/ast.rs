//! Simplified syntax trees.
//!
//! An [`AstNode`] keeps the structural nodes of the CST and the operand
//! leaves. Whitespace is always dropped; everything else is governed by an
//! [`IgnoreList`].

use std::collections::BTreeSet;

use crate::cst::{CstKind, CstNode, SourceSpan};
use crate::error::ConfigError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AstNode {
    pub node_type: String,
    /// Leaf token; present iff `children` is empty.
    pub token: Option<String>,
    pub resolved_type: Option<String>,
    pub span: SourceSpan,
    pub children: Vec<AstNode>,
}

impl AstNode {
    pub fn leaf(node_type: impl Into<String>, token: impl Into<String>) -> Self {
        Self {
            node_type: node_type.into(),
            token: Some(token.into()),
            resolved_type: None,
            span: SourceSpan::default(),
            children: Vec::new(),
        }
    }

    pub fn internal(node_type: impl Into<String>, children: Vec<AstNode>) -> Self {
        let span = match (children.first(), children.last()) {
            (Some(a), Some(b)) => a.span.cover(&b.span),
            _ => SourceSpan::default(),
        };
        Self {
            node_type: node_type.into(),
            token: None,
            resolved_type: None,
            span,
            children,
        }
    }

    pub fn with_type(mut self, resolved: impl Into<String>) -> Self {
        self.resolved_type = Some(resolved.into());
        self
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn is(&self, kind: CstKind) -> bool {
        self.node_type == kind.name()
    }

    /// Base kind name without an operator suffix (`BINARY_EXPR:+` -> `BINARY_EXPR`).
    pub fn base_type(&self) -> &str {
        self.node_type
            .split_once(':')
            .map_or(self.node_type.as_str(), |(base, _)| base)
    }

    pub fn child(&self, kind: CstKind) -> Option<&AstNode> {
        self.children.iter().find(|c| c.is(kind))
    }

    /// Child index of a declaration's name: the first identifier leaf after
    /// the declared type, or the first identifier leaf when there is no type.
    pub fn declared_name_index(&self) -> Option<usize> {
        let is_name = |c: &AstNode| c.is(CstKind::Identifier) && c.is_leaf();
        let after_type = self
            .children
            .iter()
            .position(|c| c.is(CstKind::TypeRef))
            .map_or(0, |i| i + 1);
        (after_type..self.children.len())
            .find(|&i| is_name(&self.children[i]))
            .or_else(|| self.children.iter().position(is_name))
    }

    pub fn leaves(&self) -> Vec<&AstNode> {
        let mut out = Vec::new();
        self.visit(&mut |n| {
            if n.is_leaf() {
                out.push(n);
            }
        });
        out
    }

    pub fn leaf_tokens(&self) -> Vec<&str> {
        self.leaves()
            .into_iter()
            .map(|n| n.token.as_deref().unwrap_or_default())
            .collect()
    }

    /// Preorder traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a AstNode)) {
        f(self);
        for c in &self.children {
            c.visit(f);
        }
    }

    pub fn visit_mut(&mut self, f: &mut impl FnMut(&mut AstNode)) {
        f(self);
        for c in &mut self.children {
            c.visit_mut(f);
        }
    }

    pub fn pretty(&self) -> String {
        fn go(node: &AstNode, depth: usize, out: &mut String) {
            out.push_str(&"  ".repeat(depth));
            out.push_str(&node.node_type);
            if let Some(tok) = &node.token {
                out.push_str(&format!(" {tok:?}"));
            }
            if let Some(ty) = &node.resolved_type {
                out.push_str(&format!(" : {ty}"));
            }
            out.push('\n');
            for c in &node.children {
                go(c, depth + 1, out);
            }
        }
        let mut out = String::new();
        go(self, 0, &mut out);
        out
    }
}

pub fn count_nodes(tree: &AstNode) -> usize {
    1 + tree.children.iter().map(count_nodes).sum::<usize>()
}

/// CST kinds removed while building the AST. `WHITE_SPACE` is always removed.
///
/// Comment kinds are dropped with their text; any other ignored kind is
/// dropped node-wise, its retained children moving up to its parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IgnoreList {
    kinds: BTreeSet<CstKind>,
}

impl IgnoreList {
    pub const DEFAULT_KINDS: &'static [CstKind] = &[
        CstKind::WhiteSpace,
        CstKind::Punctuation,
        CstKind::Keyword,
        CstKind::Operator,
    ];

    pub fn new(kinds: impl IntoIterator<Item = CstKind>) -> Self {
        let mut kinds: BTreeSet<CstKind> = kinds.into_iter().collect();
        kinds.insert(CstKind::WhiteSpace);
        Self { kinds }
    }

    /// Only whitespace is dropped.
    pub fn whitespace_only() -> Self {
        Self::new([])
    }

    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Result<Self, ConfigError> {
        let mut kinds = Vec::new();
        let mut problems = Vec::new();
        for name in names {
            match name.as_ref().parse::<CstKind>() {
                Ok(k) => kinds.push(k),
                Err(e) => problems.push(format!("ignore_node_kinds: {e}")),
            }
        }
        if problems.is_empty() {
            Ok(Self::new(kinds))
        } else {
            Err(ConfigError::from_problems(problems))
        }
    }

    pub fn with(mut self, kind: CstKind) -> Self {
        self.kinds.insert(kind);
        self
    }

    pub fn contains(&self, kind: CstKind) -> bool {
        self.kinds.contains(&kind)
    }

    pub fn contains_name(&self, name: &str) -> bool {
        name.parse::<CstKind>().is_ok_and(|k| self.contains(k))
    }

    pub fn kinds(&self) -> impl Iterator<Item = CstKind> + '_ {
        self.kinds.iter().copied()
    }
}

impl Default for IgnoreList {
    fn default() -> Self {
        Self::new(Self::DEFAULT_KINDS.iter().copied())
    }
}

/// Simplifies a CST into an AST by depth-first traversal.
///
/// Besides dropping ignored kinds:
/// - `TYPE_REF` becomes a leaf whose token is the type text without whitespace;
/// - a dropped operator of a binary, unary or compound-assignment expression
///   is kept as a node-type suffix (`BINARY_EXPR:+`);
/// - `PAREN_EXPR` left with a single child is replaced by that child;
/// - an internal node that loses all of its children becomes a leaf carrying
///   the text it lost (its keywords if it had any, e.g. `public`, `this`).
pub fn build_ast(root: &CstNode, ignore: &IgnoreList) -> AstNode {
    let mut out = convert(root, ignore);
    match out.len() {
        1 => out.pop().unwrap(),
        // Only reachable when the root kind itself is ignored.
        _ => AstNode::internal(root.kind.name(), out),
    }
}

fn convert(node: &CstNode, ignore: &IgnoreList) -> Vec<AstNode> {
    if let Some(text) = &node.text {
        if ignore.contains(node.kind) {
            return Vec::new();
        }
        return vec![AstNode {
            node_type: node.kind.name().to_owned(),
            token: Some(text.clone()),
            resolved_type: None,
            span: node.span,
            children: Vec::new(),
        }];
    }

    if node.kind == CstKind::TypeRef && !ignore.contains(CstKind::TypeRef) {
        return vec![AstNode {
            node_type: node.kind.name().to_owned(),
            token: Some(type_text(node)),
            resolved_type: None,
            span: node.span,
            children: Vec::new(),
        }];
    }

    let children: Vec<AstNode> = node
        .children
        .iter()
        .flat_map(|c| convert(c, ignore))
        .collect();

    if ignore.contains(node.kind) {
        return children;
    }
    if node.kind == CstKind::ParenExpr && children.len() == 1 {
        return children;
    }

    let node_type = match operator_suffix(node, ignore) {
        Some(op) => format!("{}:{op}", node.kind.name()),
        None => node.kind.name().to_owned(),
    };
    let token = children.is_empty().then(|| emptied_text(node));
    vec![AstNode {
        node_type,
        token,
        resolved_type: None,
        span: node.span,
        children,
    }]
}

fn operator_suffix<'a>(node: &'a CstNode, ignore: &IgnoreList) -> Option<&'a str> {
    if !matches!(
        node.kind,
        CstKind::BinaryExpr | CstKind::UnaryExpr | CstKind::AssignmentExpr
    ) || !ignore.contains(CstKind::Operator)
    {
        return None;
    }
    let op = node
        .children
        .iter()
        .find(|c| c.kind == CstKind::Operator)?
        .text
        .as_deref()?;
    // Plain assignment is the only assignment without an operator of its own.
    (!(node.kind == CstKind::AssignmentExpr && op == "=")).then_some(op)
}

/// Source text of a type with whitespace and comments removed.
pub(crate) fn type_text(node: &CstNode) -> String {
    node.leaves()
        .into_iter()
        .filter(|l| !l.kind.is_trivia())
        .filter_map(|l| l.text.as_deref())
        .collect()
}

fn emptied_text(node: &CstNode) -> String {
    let leaves: Vec<&CstNode> = node
        .leaves()
        .into_iter()
        .filter(|l| !l.kind.is_trivia())
        .collect();
    let keywords: Vec<&str> = leaves
        .iter()
        .filter(|l| l.kind == CstKind::Keyword)
        .filter_map(|l| l.text.as_deref())
        .collect();
    if keywords.is_empty() {
        leaves.iter().filter_map(|l| l.text.as_deref()).collect()
    } else {
        keywords.concat()
    }
}
