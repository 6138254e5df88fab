// Split a file into method trees, filter them, and label the survivors with
// their masked method names.

use psiminer::ast::{build_ast, IgnoreList};
use psiminer::cst::parse_file;
use psiminer::filters::{rejections, FilterSpec};
use psiminer::granularity::{split, Granularity};
use psiminer::label::{LabelExtractor, METHOD_NAME_TOKEN, SELF_TOKEN};
use psiminer::types::annotate_types;

const SOURCE: &str = r#"
abstract class Shapes {
    Shapes() { }

    abstract double area();

    @Override
    public String toString() { return "shape"; }

    int depth(Node n) {
        if (n == null) return 0;
        return 1 + depth(n.left) + this.depth(n.right);
    }

    int longOne(int x) {
        x = x + 1;
        x = x + 2;
        x = x + 3;
        return x;
    }
}
"#;

fn run_example() {
    let cst = parse_file(SOURCE, "Shapes.java").unwrap();
    let tree = annotate_types(build_ast(&cst, &IgnoreList::default()));

    let filters = [
        FilterSpec::Constructor,
        FilterSpec::AbstractMethod,
        FilterSpec::OverrideMethod,
        FilterSpec::CodeLines { max_lines: 4 },
    ];
    let extractor = LabelExtractor::method_name();

    let mut kept = Vec::new();
    for unit in split(&tree, Granularity::Method) {
        let rejected = rejections(&unit, &unit.span, &filters).unwrap();
        let name = unit.children[unit.declared_name_index().unwrap()]
            .token
            .clone()
            .unwrap();
        if !rejected.is_empty() {
            let names: Vec<_> = rejected.iter().map(|f| f.to_string()).collect();
            println!("drop {name:<10} by {}", names.join(", "));
            continue;
        }
        let labeled = extractor.extract(unit).unwrap();
        let tokens = labeled.tree.leaf_tokens();
        let masked_decl = tokens.iter().filter(|t| **t == METHOD_NAME_TOKEN).count();
        let masked_calls = tokens.iter().filter(|t| **t == SELF_TOKEN).count();
        println!(
            "keep {:<10} {masked_decl} {METHOD_NAME_TOKEN}, {masked_calls} {SELF_TOKEN}",
            labeled.label
        );
        assert!(!tokens.contains(&labeled.label.as_str()));
        kept.push((labeled.label, masked_calls));
    }
    // Both the plain and the `this.`-qualified recursive calls are masked.
    assert_eq!(kept, [("depth".to_owned(), 2)]);
}

#[allow(dead_code)]
fn main() {
    run_example();
}
