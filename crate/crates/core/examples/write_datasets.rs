// Serialize labeled samples in all three storage formats and emit run statistics.

use psiminer::ast::{build_ast, IgnoreList};
use psiminer::cst::parse_file;
use psiminer::granularity::{split, Granularity};
use psiminer::label::{extract_none, LabelExtractor};
use psiminer::paths::{enumerate_paths, MinerLimits};
use psiminer::storage::{
    finalize, output_file_name, write_code2seq, write_jsonl_tree, RunStatistics, StorageFormat,
};
use psiminer::types::annotate_types;

const SOURCE: &str = "class P { int x; int getX() { return x; } void setX(int v) { x = v; } }";

fn run_example() {
    let cst = parse_file(SOURCE, "P.java").unwrap();
    let file = annotate_types(build_ast(&cst, &IgnoreList::default()));
    let extractor = LabelExtractor::method_name();
    let limits = MinerLimits::default();

    let mut stats = RunStatistics::with_filters(["tree_size"]);
    stats.files_seen = 1;
    stats.files_parsed = 1;
    let (mut plain, mut typed, mut jsonl) = (Vec::new(), Vec::new(), Vec::new());
    for unit in split(&file, Granularity::Method) {
        stats.trees_before_filters += 1;
        stats.trees_after_filters += 1;
        let sample = extractor.extract(unit).unwrap();
        let contexts = enumerate_paths(&sample.tree, &limits);
        stats.record_contexts(contexts.len());
        write_code2seq(&sample, &contexts, false, &mut plain).unwrap();
        write_code2seq(&sample, &contexts, true, &mut typed).unwrap();
        write_jsonl_tree(&sample, &mut jsonl).unwrap();
        stats.samples_written += 1;
    }
    let plain = String::from_utf8(plain).unwrap();
    let typed = String::from_utf8(typed).unwrap();
    let jsonl = String::from_utf8(jsonl).unwrap();
    println!("{}\n{plain}", output_file_name("demo", "train", StorageFormat::Code2seq));
    println!("{}\n{typed}", output_file_name("demo", "train", StorageFormat::Code2seqTyped));
    println!("{}\n{jsonl}", output_file_name("demo", "train", StorageFormat::JsonlTrees));

    for line in plain.lines() {
        assert!(line.split(' ').skip(1).all(|ctx| ctx.split(',').count() == 3));
    }
    for line in typed.lines() {
        assert!(line.split(' ').skip(1).all(|ctx| ctx.split(',').count() == 5));
    }
    for line in jsonl.lines() {
        let nodes: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(nodes[0]["label"].is_string());
    }

    // The smallest JSONL record: one unlabeled leaf.
    let leaf = extract_none(psiminer::ast::AstNode::leaf("IDENTIFIER", "x"));
    let mut one = Vec::new();
    write_jsonl_tree(&leaf, &mut one).unwrap();
    assert_eq!(one, b"[{\"type\":\"IDENTIFIER\",\"value\":\"x\",\"label\":\"NO_LABEL\"}]\n");

    let out = tempfile::tempdir().unwrap();
    let mut summary = Vec::new();
    finalize(&stats, out.path(), &mut summary).unwrap();
    print!("{}", String::from_utf8(summary).unwrap());
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.path().join("stats.json")).unwrap())
            .unwrap();
    assert_eq!(json["samples_written"], 2);
    assert_eq!(json["rejected_tree_size"], 0);
}

#[allow(dead_code)]
fn main() {
    run_example();
}
