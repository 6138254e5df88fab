use std::fs;
use std::io;
use std::path::Path;

use psiminer::granularity::Granularity;
use psiminer::label::LabelExtractor;
use psiminer::pipeline::{run_with_sink, PipelineConfig};
use psiminer::storage::StorageFormat;

fn put(root: &Path, rel: &str, text: &str) {
    let path = root.join(rel);
    fs::create_dir_all(path.parent().unwrap()).unwrap();
    fs::write(path, text).unwrap();
}

fn class_with(name: &str, methods: usize) -> String {
    let body: String = (0..methods)
        .map(|i| format!("int m{i}(int x) {{ return x + {i}; }}\n"))
        .collect();
    format!("class {name} {{\n{body}}}\n")
}

#[test]
fn peak_tree_count_is_bounded_by_the_largest_project() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in");
    // 20 projects of 1..=3 files, 2 methods each; the largest holds 6 trees.
    for p in 0..20 {
        for f in 0..(1 + p % 3) {
            put(&input, &format!("proj{p:02}/F{f}.java"), &class_with(&format!("F{f}"), 2));
        }
    }
    let config = PipelineConfig::new(
        &input,
        dir.path().join("out"),
        Granularity::Method,
        LabelExtractor::method_name(),
        StorageFormat::Code2seq,
    );
    let stats = run_with_sink(&config, &mut io::sink()).unwrap();
    assert_eq!(stats.trees_before_filters, 2 * (7 + 7 * 2 + 6 * 3));
    assert_eq!(stats.peak_project_trees, 6);
}

#[test]
fn malformed_file_only_affects_itself() {
    let dir = tempfile::tempdir().unwrap();
    let clean = dir.path().join("clean");
    let dirty = dir.path().join("dirty");
    for root in [&clean, &dirty] {
        put(root, "p/A.java", &class_with("A", 3));
        put(root, "p/C.java", &class_with("C", 2));
    }
    put(&dirty, "p/B.java", "class B { int f() { return 1 +; } }");
    put(&dirty, "p/D.java", "class D { char c = '\u{0}");

    let run = |input: &Path, out: &str| {
        let mut config = PipelineConfig::new(
            input,
            dir.path().join(out),
            Granularity::Method,
            LabelExtractor::method_name(),
            StorageFormat::Code2seqTyped,
        );
        config.parallelism = 3;
        let stats = run_with_sink(&config, &mut io::sink()).unwrap();
        (stats, fs::read(config.output_dir.join("dataset.data.c2s")).unwrap())
    };
    let (clean_stats, clean_out) = run(&clean, "out-clean");
    let (dirty_stats, dirty_out) = run(&dirty, "out-dirty");
    assert_eq!(clean_out, dirty_out);
    assert_eq!(dirty_stats.parse_failures, 2);
    assert_eq!(dirty_stats.samples_written, clean_stats.samples_written);
}

#[test]
fn file_level_jsonl_without_labels() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in");
    put(&input, "A.java", &class_with("A", 1));
    put(&input, "B.java", "class B { } class B2 { int x; }");
    let config = PipelineConfig::new(
        &input,
        dir.path().join("out"),
        Granularity::File,
        LabelExtractor::None,
        StorageFormat::JsonlTrees,
    );
    let stats = run_with_sink(&config, &mut io::sink()).unwrap();
    assert_eq!(stats.samples_written, 2);
    assert_eq!(stats.contexts_min, None);
    let text = fs::read_to_string(config.output_dir.join("dataset.data.jsonl")).unwrap();
    for line in text.lines() {
        let nodes: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(nodes[0]["type"], "FILE");
        assert_eq!(nodes[0]["label"], "NO_LABEL");
    }
}

#[test]
fn class_granularity_counts_every_class() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in");
    put(&input, "train/A.java", "class A { } class B { } class C { }");
    put(&input, "val/.keep", "");
    let config = PipelineConfig::new(
        &input,
        dir.path().join("out"),
        Granularity::Class,
        LabelExtractor::None,
        StorageFormat::Code2seq,
    );
    let stats = run_with_sink(&config, &mut io::sink()).unwrap();
    assert_eq!(stats.samples_written, 3);
    assert_eq!(fs::read_to_string(config.output_dir.join("dataset.val.c2s")).unwrap(), "");
    assert!(!config.output_dir.join("dataset.test.c2s").exists());
}
