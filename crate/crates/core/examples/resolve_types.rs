// Attach a resolved type to every identifier, literal and type reference.

use psiminer::ast::{build_ast, AstNode, IgnoreList};
use psiminer::cst::{parse_file, CstKind};
use psiminer::types::{annotate_types, literal_type, NO_TYPE};

const SOURCE: &str = r#"
class Account {
    private long balance;
    String owner;

    long deposit(long amount) {
        long before = balance;
        this.balance = before + amount;
        String note = "ok";
        return log(note, 1.5f);
    }

    long log(String msg, float weight) { return unknownHelper(msg); }
}
"#;

fn typed_identifiers(tree: &AstNode) -> Vec<(String, String)> {
    let mut out = Vec::new();
    tree.visit(&mut |n| {
        if n.is(CstKind::Identifier) {
            out.push((
                n.token.clone().unwrap_or_default(),
                n.resolved_type.clone().unwrap_or_default(),
            ));
        }
    });
    out
}

fn run_example() {
    let cst = parse_file(SOURCE, "Account.java").unwrap();
    let tree = annotate_types(build_ast(&cst, &IgnoreList::default()));

    let ids = typed_identifiers(&tree);
    for (name, ty) in &ids {
        println!("{name:>14} : {ty}");
    }
    let type_of = |name: &str| {
        ids.iter()
            .filter(|(n, _)| n == name)
            .map(|(_, t)| t.as_str())
            .collect::<Vec<_>>()
    };
    assert!(type_of("balance").iter().all(|t| *t == "long"));
    assert!(type_of("note").iter().all(|t| *t == "String"));
    assert_eq!(type_of("Account"), ["Account"]);
    // A call resolves to the callee's declared return type when it is known.
    assert!(type_of("log").iter().all(|t| *t == "long"));
    assert_eq!(type_of("unknownHelper"), [NO_TYPE]);

    for lit in ["42", "42L", "1.5f", "2.0", "'c'", "\"s\"", "true", "null"] {
        println!("{lit:>6} -> {}", literal_type(lit));
    }
    assert_eq!(literal_type("42L").as_str(), "long");
    assert_eq!(literal_type("null").as_str(), NO_TYPE);
}

#[allow(dead_code)]
fn main() {
    run_example();
}
