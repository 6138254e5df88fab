use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::ast::AstNode;
use crate::cst::CstKind;

/// Unit of analysis: one sample per file, class, or method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Granularity {
    File,
    Class,
    Method,
}

impl Granularity {
    pub fn as_str(self) -> &'static str {
        match self {
            Granularity::File => "file",
            Granularity::Class => "class",
            Granularity::Method => "method",
        }
    }
}

impl FromStr for Granularity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "file" => Ok(Granularity::File),
            "class" => Ok(Granularity::Class),
            "method" => Ok(Granularity::Method),
            other => Err(format!(
                "unknown granularity `{other}` (expected file, class or method)"
            )),
        }
    }
}

impl fmt::Display for Granularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Cuts a file-level AST into units, in source order.
///
/// Method granularity yields constructors as well; dropping them is the
/// constructor filter's job.
pub fn split(tree: &AstNode, granularity: Granularity) -> Vec<AstNode> {
    let wanted: &[CstKind] = match granularity {
        Granularity::File => return vec![tree.clone()],
        Granularity::Class => &[CstKind::ClassDecl],
        Granularity::Method => &[CstKind::MethodDecl, CstKind::ConstructorDecl],
    };
    let mut out = Vec::new();
    collect(tree, wanted, &mut out);
    out
}

fn collect(node: &AstNode, wanted: &[CstKind], out: &mut Vec<AstNode>) {
    if wanted.iter().any(|&k| node.is(k)) {
        out.push(node.clone());
        return;
    }
    for c in &node.children {
        collect(c, wanted, out);
    }
}
