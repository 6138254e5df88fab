// Simplify a CST into an AST with a configurable ignore list.

use psiminer::ast::{build_ast, count_nodes, IgnoreList};
use psiminer::cst::{parse_file, CstKind};

const SOURCE: &str = "class A {\n  // keeps comments unless told otherwise\n  int f(int x) { x = (x + 1); return x; }\n}\n";

fn run_example() {
    let cst = parse_file(SOURCE, "A.java").unwrap();

    let ast = build_ast(&cst, &IgnoreList::default());
    println!("{}", ast.pretty());
    assert_eq!(ast.node_type, "FILE");

    // Operators move into the parent's node type; parentheses around a single
    // operand collapse.
    let mut types = Vec::new();
    ast.visit(&mut |n| types.push(n.node_type.clone()));
    assert!(types.iter().any(|t| t == "BINARY_EXPR:+"));
    assert!(types.iter().any(|t| t == "ASSIGNMENT_EXPR"));
    assert!(!types.iter().any(|t| t == "PAREN_EXPR" || t == "WHITE_SPACE" || t == "KEYWORD"));
    assert!(types.iter().any(|t| t == "LINE_COMMENT"));

    // Dropping comments as well shrinks the tree.
    let no_comments = IgnoreList::default().with(CstKind::LineComment);
    let smaller = build_ast(&cst, &no_comments);
    assert_eq!(count_nodes(&smaller) + 1, count_nodes(&ast));

    // Unknown kind names are configuration errors, all reported together.
    let err = IgnoreList::from_names(&["KEYWORD", "PsiWhiteSpace", "Comma"]).unwrap_err();
    println!("{err}");
    assert_eq!(err.problems.len(), 2);

    println!(
        "cst nodes: {}, ast nodes: {}, without comments: {}",
        cst.count(),
        count_nodes(&ast),
        count_nodes(&smaller)
    );
}

#[allow(dead_code)]
fn main() {
    run_example();
}
