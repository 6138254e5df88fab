// Drive a full run from a JSON config: train/val/test splits, projects,
// parallel mining, ordered output and `stats.json`.

use std::fs;
use std::path::Path;

use psiminer::pipeline::{discover, load_config, run_with_sink};

const CONFIG: &str = r#"{
    "input_dir": "corpus",
    "output_dir": "out",
    "dataset_name": "demo",
    "granularity": "method",
    "filters": [{"name": "tree_size", "max_nodes": 200}, "constructor"],
    "label_extractor": "method_name",
    "miner": {"max_path_nodes": 9, "max_path_width": 2, "max_contexts": 200, "rng_seed": 1},
    "storage": {"format": "code2seq_typed"},
    "parallelism": 4
}"#;

fn put(root: &Path, rel: &str, text: &str) {
    let path = root.join(rel);
    fs::create_dir_all(path.parent().unwrap()).unwrap();
    fs::write(path, text).unwrap();
}

fn run_example() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    put(root, "corpus/train/alpha/Stack.java",
        "class Stack { int n; Stack() { n = 0; } void push() { n++; } int size() { return n; } }");
    put(root, "corpus/train/alpha/util/Fact.java",
        "class Fact { long fact(int n) { if (n < 2) return 1; return n * fact(n - 1); } }");
    put(root, "corpus/train/beta/Broken.java", "class Broken { int f( }");
    put(root, "corpus/val/Gcd.java", "class Gcd { int gcd(int a, int b) { return b == 0 ? a : 0; } }");
    put(root, "corpus/test/Max.java", "class Max { int max(int a, int b) { if (a > b) return a; return b; } }");
    put(root, "corpus/test/README.md", "not a source file");
    let config_path = root.join("psiminer.json");
    fs::write(&config_path, CONFIG).unwrap();

    // Relative directories resolve against the config file's location.
    let config = load_config(&config_path).unwrap();
    print!("{}", discover(&config).unwrap());

    let mut summary = Vec::new();
    let stats = run_with_sink(&config, &mut summary).unwrap();
    print!("{}", String::from_utf8(summary).unwrap());

    // The `?:` operator is outside the grammar, so Gcd.java fails to parse.
    assert_eq!(stats.files_seen, 5);
    assert_eq!(stats.parse_failures, 2);
    assert_eq!(stats.trees_before_filters, 5);
    assert_eq!(stats.filter_rejections["constructor"], 1);
    assert_eq!(stats.samples_written, 4);

    let out = root.join("out");
    for split in ["train", "val", "test"] {
        let text = fs::read_to_string(out.join(format!("demo.{split}.c2s"))).unwrap();
        let labels: Vec<_> = text.lines().map(|l| l.split(' ').next().unwrap()).collect();
        println!("{split}: {labels:?}");
    }
    let stats_json = fs::read_to_string(out.join("stats.json")).unwrap();
    assert!(stats_json.contains("\"samples_written\": 4"));

    // Parallelism never changes the bytes.
    let mut serial = config.clone();
    serial.parallelism = 1;
    serial.output_dir = root.join("out-serial");
    run_with_sink(&serial, &mut std::io::sink()).unwrap();
    for name in ["demo.train.c2s", "demo.val.c2s", "demo.test.c2s", "stats.json"] {
        assert_eq!(
            fs::read(out.join(name)).unwrap(),
            fs::read(serial.output_dir.join(name)).unwrap()
        );
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
