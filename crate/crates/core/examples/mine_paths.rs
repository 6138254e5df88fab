// Enumerate leaf-to-leaf path contexts under length/width limits and sample
// a deterministic subset.

use psiminer::ast::AstNode;
use psiminer::label::extract_method_name;
use psiminer::paths::{enumerate_paths, sample_contexts, tree_key, MinerLimits};
use psiminer::pipeline::validate_config;
use psiminer::storage::code2seq_line;

fn run_example() {
    // x = 1, hand-built with types.
    let tree = AstNode::internal(
        "ASSIGNMENT_EXPR",
        vec![
            AstNode::internal(
                "REFERENCE_EXPR",
                vec![AstNode::leaf("IDENTIFIER", "x").with_type("int")],
            ),
            AstNode::leaf("LITERAL", "1").with_type("int"),
        ],
    );
    let contexts = enumerate_paths(&tree, &MinerLimits::default());
    assert_eq!(contexts.len(), 1);
    assert_eq!(
        code2seq_line("getX", &contexts, false),
        "get|x x,IDENTIFIER|REFERENCE_EXPR|ASSIGNMENT_EXPR|LITERAL,1\n"
    );
    print!("{}", code2seq_line("getX", &contexts, true));

    // A real method: limits prune long and wide paths.
    let cst = psiminer::cst::parse_file(
        "class A { int sum(int a, int b, int c) { int t = a + b; t += c; return sum(t, 0, 0); } }",
        "A.java",
    )
    .unwrap();
    let file = psiminer::types::annotate_types(psiminer::ast::build_ast(
        &cst,
        &psiminer::ast::IgnoreList::default(),
    ));
    let method = psiminer::granularity::split(&file, psiminer::granularity::Granularity::Method)
        .remove(0);
    let labeled = extract_method_name(method).unwrap();
    let leaves = labeled.tree.leaves().len();

    let all = enumerate_paths(&labeled.tree, &MinerLimits::unlimited());
    let bounded = enumerate_paths(&labeled.tree, &MinerLimits::default());
    println!("{leaves} leaves: {} pairs, {} within 9 nodes / width 2", all.len(), bounded.len());
    assert_eq!(all.len(), leaves * (leaves - 1) / 2);
    assert!(bounded.len() < all.len());

    // Sampling depends only on the seed and the tree, never on run order.
    let limits = MinerLimits {
        max_contexts: 5,
        ..MinerLimits::default()
    };
    let key = tree_key(&labeled.label, &labeled.tree);
    let first = sample_contexts(bounded.clone(), &limits, &key);
    let again = sample_contexts(bounded.clone(), &limits, &key);
    assert_eq!(first, again);
    assert_eq!(first.len(), 5);
    print!("{}", code2seq_line(&labeled.label, &first, false));

    // Limits normally come from the run configuration.
    let config = validate_config(
        r#"{"input_dir": "in", "output_dir": "out", "granularity": "method",
            "label_extractor": "method_name", "storage": "code2seq",
            "miner": {"max_path_nodes": 7, "max_path_width": 1, "max_contexts": 50, "rng_seed": 7}}"#,
    )
    .unwrap();
    let narrow = enumerate_paths(&labeled.tree, &config.miner);
    println!("with {:?}: {} contexts", config.miner, narrow.len());
    assert!(narrow.len() <= bounded.len());
}

#[allow(dead_code)]
fn main() {
    run_example();
}
