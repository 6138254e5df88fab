// Parse a source file into a lossless CST and rebuild the exact text from its leaves.
//
// `cargo run --example parse_lossless [FILE...]` checks the given files;
// without arguments a built-in snippet is used.

use psiminer::cst::{parse_file, CstKind};

const SNIPPET: &str = "class Counter {\r\n  private int n = 0; // running total\n\tint next() { return ++n; }\n}";

fn check(path: &str, source: &str) -> Result<usize, String> {
    let cst = parse_file(source, path).map_err(|e| format!("{path}: {e}"))?;
    assert_eq!(cst.kind, CstKind::File);
    assert_eq!(cst.reconstruct(), source, "{path}: reconstruction differs");
    Ok(cst.count())
}

fn run_example() {
    let cst = parse_file(SNIPPET, "Counter.java").expect("snippet parses");
    println!("{}", cst.pretty());
    assert_eq!(cst.reconstruct(), SNIPPET);

    let comments = cst
        .leaves()
        .iter()
        .filter(|l| l.kind == CstKind::LineComment)
        .count();
    assert_eq!(comments, 1);

    // Parse failures carry a position instead of panicking.
    let err = parse_file("class A { int x = ; }", "Broken.java").unwrap_err();
    println!("broken input: {err}");
    assert_eq!(err.line(), 1);

    let nodes = check("Counter.java", SNIPPET).unwrap();
    println!("round trip ok, {nodes} nodes");
}

#[allow(dead_code)]
fn main() {
    let paths: Vec<String> = std::env::args().skip(1).collect();
    if paths.is_empty() {
        run_example();
        return;
    }
    let mut failed = false;
    for path in paths {
        let result = std::fs::read_to_string(&path)
            .map_err(|e| format!("{path}: {e}"))
            .and_then(|src| check(&path, &src));
        match result {
            Ok(n) => println!("ok    {path} ({n} nodes)"),
            Err(e) => {
                println!("FAIL  {e}");
                failed = true;
            }
        }
    }
    if failed {
        std::process::exit(1);
    }
}
