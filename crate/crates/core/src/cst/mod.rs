//! Lossless concrete syntax trees for a small Java-like language.
//!
//! Every byte of the input, including whitespace and comments, ends up in
//! exactly one leaf, so concatenating leaf texts in order gives back the
//! source file.

mod kind;
mod lexer;
mod parser;

pub use kind::CstKind;
pub use lexer::{tokenize, Token, KEYWORDS};
pub use parser::parse_file;

use serde::Serialize;

/// Byte range plus the 1-based lines of its first and last byte.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
pub struct SourceSpan {
    pub start: usize,
    /// Exclusive.
    pub end: usize,
    pub line_start: usize,
    pub line_end: usize,
}

impl SourceSpan {
    pub fn empty_at(offset: usize, line: usize) -> Self {
        Self {
            start: offset,
            end: offset,
            line_start: line,
            line_end: line,
        }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    pub fn line_count(&self) -> usize {
        self.line_end - self.line_start + 1
    }

    pub fn contains(&self, other: &SourceSpan) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    /// Smallest span covering both.
    pub fn cover(&self, other: &SourceSpan) -> SourceSpan {
        SourceSpan {
            start: self.start.min(other.start),
            end: self.end.max(other.end),
            line_start: self.line_start.min(other.line_start),
            line_end: self.line_end.max(other.line_end),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CstNode {
    pub kind: CstKind,
    pub span: SourceSpan,
    /// Token text, present on leaves only.
    pub text: Option<String>,
    pub children: Vec<CstNode>,
}

impl CstNode {
    pub fn leaf(token: Token) -> Self {
        Self {
            kind: token.kind,
            span: token.span,
            text: Some(token.text),
            children: Vec::new(),
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.text.is_some()
    }

    /// Leaves in source order.
    pub fn leaves(&self) -> Vec<&CstNode> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(node) = stack.pop() {
            if node.is_leaf() {
                out.push(node);
            } else {
                stack.extend(node.children.iter().rev());
            }
        }
        out
    }

    /// In-order concatenation of leaf texts.
    pub fn reconstruct(&self) -> String {
        let mut out = String::with_capacity(self.span.len());
        for leaf in self.leaves() {
            out.push_str(leaf.text.as_deref().unwrap_or_default());
        }
        out
    }

    pub fn find_child(&self, kind: CstKind) -> Option<&CstNode> {
        self.children.iter().find(|c| c.kind == kind)
    }

    pub fn count(&self) -> usize {
        1 + self.children.iter().map(CstNode::count).sum::<usize>()
    }

    /// Indented outline, one node per line. Handy in examples and test failures.
    pub fn pretty(&self) -> String {
        fn go(node: &CstNode, depth: usize, out: &mut String) {
            out.push_str(&"  ".repeat(depth));
            out.push_str(node.kind.name());
            if let Some(text) = &node.text {
                out.push_str(&format!(" {text:?}"));
            }
            out.push('\n');
            for child in &node.children {
                go(child, depth + 1, out);
            }
        }
        let mut out = String::new();
        go(self, 0, &mut out);
        out
    }
}
