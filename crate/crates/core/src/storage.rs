//! Dataset writers and run statistics.
//!
//! Two line-oriented formats are supported:
//!
//! * code2seq: `label ctx1 ctx2 ...`, one sample per line. A context is
//!   `start,path,end` or, typed, `start,start_type,path,end,end_type`.
//!   Tokens are subtokens joined by `|`, paths are node types joined by `|`.
//! * JSONL trees: one JSON array of preorder-numbered nodes per line, in the
//!   shape of the Python150k corpus, with the label on the root object.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::ast::AstNode;
use crate::label::LabeledTree;
use crate::paths::PathContext;
use crate::subtokens::split_subtokens;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StorageFormat {
    Code2seq,
    Code2seqTyped,
    JsonlTrees,
}

impl StorageFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            StorageFormat::Code2seq => "code2seq",
            StorageFormat::Code2seqTyped => "code2seq_typed",
            StorageFormat::JsonlTrees => "jsonl_trees",
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            StorageFormat::Code2seq | StorageFormat::Code2seqTyped => "c2s",
            StorageFormat::JsonlTrees => "jsonl",
        }
    }

    /// Whether samples of this format are bags of path-contexts.
    pub fn needs_contexts(self) -> bool {
        !matches!(self, StorageFormat::JsonlTrees)
    }
}

impl FromStr for StorageFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "code2seq" => Ok(StorageFormat::Code2seq),
            "code2seq_typed" => Ok(StorageFormat::Code2seqTyped),
            "jsonl_trees" => Ok(StorageFormat::JsonlTrees),
            other => Err(format!(
                "unknown storage format `{other}` (expected code2seq, code2seq_typed or jsonl_trees)"
            )),
        }
    }
}

/// Output file of one split: `<output_dir>/<dataset_name>.<split>.<ext>`.
pub fn output_file_name(dataset_name: &str, split: &str, format: StorageFormat) -> String {
    format!("{dataset_name}.{split}.{}", format.extension())
}

fn node_type_field(node_type: &str) -> String {
    // `|` separates path elements, so it is percent-encoded inside a label.
    node_type
        .chars()
        .filter(|c| !c.is_whitespace() && *c != ',')
        .fold(String::new(), |mut s, c| {
            if c == '|' {
                s.push_str("%7C");
            } else {
                s.push(c);
            }
            s
        })
}

fn type_field(ty: &str) -> String {
    ty.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            ',' => ';',
            '|' => '/',
            c => c,
        })
        .collect()
}

fn token_field(subtokens: &[String]) -> String {
    subtokens.join("|")
}

/// One code2seq line, newline included.
pub fn code2seq_line(label: &str, contexts: &[PathContext], typed: bool) -> String {
    let mut line = token_field(&split_subtokens(label));
    line.push(' ');
    for (i, ctx) in contexts.iter().enumerate() {
        if i > 0 {
            line.push(' ');
        }
        let path = ctx
            .path
            .iter()
            .map(|t| node_type_field(t))
            .collect::<Vec<_>>()
            .join("|");
        let start = token_field(&ctx.start_token);
        let end = token_field(&ctx.end_token);
        if typed {
            let _ = write!(
                line,
                "{start},{},{path},{end},{}",
                type_field(&ctx.start_type),
                type_field(&ctx.end_type)
            );
        } else {
            let _ = write!(line, "{start},{path},{end}");
        }
    }
    line.push('\n');
    line
}

pub fn write_code2seq(
    sample: &LabeledTree,
    contexts: &[PathContext],
    typed: bool,
    sink: &mut impl Write,
) -> io::Result<()> {
    sink.write_all(code2seq_line(&sample.label, contexts, typed).as_bytes())
}

#[derive(Serialize)]
struct JsonNode<'a> {
    #[serde(rename = "type")]
    node_type: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    token_type: Option<&'a str>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    children: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<&'a str>,
}

/// One JSONL line, newline included.
pub fn jsonl_line(sample: &LabeledTree) -> String {
    fn number<'a>(node: &'a AstNode, out: &mut Vec<JsonNode<'a>>) -> usize {
        let id = out.len();
        out.push(JsonNode {
            node_type: &node.node_type,
            value: node.token.as_deref(),
            token_type: node.resolved_type.as_deref(),
            children: Vec::new(),
            label: None,
        });
        let kids: Vec<usize> = node.children.iter().map(|c| number(c, out)).collect();
        out[id].children = kids;
        id
    }
    let mut nodes = Vec::new();
    number(&sample.tree, &mut nodes);
    nodes[0].label = Some(&sample.label);
    let mut line = serde_json::to_string(&nodes).expect("tree serializes");
    line.push('\n');
    line
}

pub fn write_jsonl_tree(sample: &LabeledTree, sink: &mut impl Write) -> io::Result<()> {
    sink.write_all(jsonl_line(sample).as_bytes())
}

/// Counters accumulated over a run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunStatistics {
    pub files_seen: u64,
    pub files_parsed: u64,
    pub parse_failures: u64,
    pub trees_before_filters: u64,
    pub trees_after_filters: u64,
    pub samples_written: u64,
    /// Rejections per filter name. A tree rejected by two filters counts for both.
    pub filter_rejections: BTreeMap<String, u64>,
    pub contexts_min: Option<u64>,
    pub contexts_max: Option<u64>,
    pub contexts_total: u64,
    /// Largest number of trees held for a single project.
    pub peak_project_trees: u64,
}

impl RunStatistics {
    pub fn with_filters<'a>(names: impl IntoIterator<Item = &'a str>) -> Self {
        let mut stats = Self::default();
        for name in names {
            stats.filter_rejections.insert(name.to_owned(), 0);
        }
        stats
    }

    pub fn record_contexts(&mut self, n: usize) {
        let n = n as u64;
        self.contexts_min = Some(self.contexts_min.map_or(n, |m| m.min(n)));
        self.contexts_max = Some(self.contexts_max.map_or(n, |m| m.max(n)));
        self.contexts_total += n;
    }

    pub fn contexts_mean(&self) -> Option<f64> {
        self.contexts_min
            .map(|_| self.contexts_total as f64 / self.samples_written.max(1) as f64)
    }

    pub fn merge(&mut self, other: &RunStatistics) {
        self.files_seen += other.files_seen;
        self.files_parsed += other.files_parsed;
        self.parse_failures += other.parse_failures;
        self.trees_before_filters += other.trees_before_filters;
        self.trees_after_filters += other.trees_after_filters;
        self.samples_written += other.samples_written;
        for (name, n) in &other.filter_rejections {
            *self.filter_rejections.entry(name.clone()).or_default() += n;
        }
        if let Some(m) = other.contexts_min {
            self.contexts_min = Some(self.contexts_min.map_or(m, |x| x.min(m)));
        }
        if let Some(m) = other.contexts_max {
            self.contexts_max = Some(self.contexts_max.map_or(m, |x| x.max(m)));
        }
        self.contexts_total += other.contexts_total;
        self.peak_project_trees = self.peak_project_trees.max(other.peak_project_trees);
    }

    /// Flat JSON object; per-filter counts appear as `rejected_<filter>`.
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("files_seen".into(), self.files_seen.into());
        m.insert("files_parsed".into(), self.files_parsed.into());
        m.insert("parse_failures".into(), self.parse_failures.into());
        m.insert("trees_before_filters".into(), self.trees_before_filters.into());
        m.insert("trees_after_filters".into(), self.trees_after_filters.into());
        m.insert("samples_written".into(), self.samples_written.into());
        for (name, n) in &self.filter_rejections {
            m.insert(format!("rejected_{name}"), (*n).into());
        }
        m.insert("contexts_min".into(), self.contexts_min.into());
        m.insert("contexts_mean".into(), self.contexts_mean().into());
        m.insert("contexts_max".into(), self.contexts_max.into());
        m.insert("peak_project_trees".into(), self.peak_project_trees.into());
        Value::Object(m)
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "files seen:           {}", self.files_seen);
        let _ = writeln!(s, "files parsed:         {}", self.files_parsed);
        let _ = writeln!(s, "parse failures:       {}", self.parse_failures);
        let _ = writeln!(s, "trees before filters: {}", self.trees_before_filters);
        let _ = writeln!(s, "trees after filters:  {}", self.trees_after_filters);
        for (name, n) in &self.filter_rejections {
            let _ = writeln!(s, "  rejected by {name}: {n}");
        }
        let _ = writeln!(s, "samples written:      {}", self.samples_written);
        if let (Some(min), Some(max), Some(mean)) =
            (self.contexts_min, self.contexts_max, self.contexts_mean())
        {
            let _ = writeln!(s, "contexts per sample:  min {min}, mean {mean:.2}, max {max}");
        }
        s
    }
}

/// Prints the summary to `sink` and writes `stats.json` into `output_dir`.
pub fn finalize(stats: &RunStatistics, output_dir: &Path, sink: &mut impl Write) -> io::Result<()> {
    sink.write_all(stats.summary().as_bytes())?;
    let mut json = serde_json::to_string_pretty(&stats.to_json()).map_err(io::Error::other)?;
    json.push('\n');
    std::fs::write(output_dir.join("stats.json"), json)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::NO_LABEL;

    fn strs(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn assignment_ctx() -> PathContext {
        PathContext {
            start_token: strs(&["x"]),
            start_type: "int".into(),
            path: strs(&["IDENTIFIER", "REFERENCE_EXPR", "ASSIGNMENT_EXPR", "LITERAL"]),
            end_token: strs(&["1"]),
            end_type: "int".into(),
        }
    }

    fn sample(label: &str, tree: AstNode) -> LabeledTree {
        LabeledTree {
            label: label.into(),
            tree,
        }
    }

    #[test]
    fn code2seq_untyped() {
        let mut out = Vec::new();
        let s = sample("getX", AstNode::leaf("IDENTIFIER", "x"));
        write_code2seq(&s, &[assignment_ctx()], false, &mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "get|x x,IDENTIFIER|REFERENCE_EXPR|ASSIGNMENT_EXPR|LITERAL,1\n"
        );
    }

    #[test]
    fn code2seq_typed() {
        assert_eq!(
            code2seq_line("getX", &[assignment_ctx()], true),
            "get|x x,int,IDENTIFIER|REFERENCE_EXPR|ASSIGNMENT_EXPR|LITERAL,1,int\n"
        );
    }

    #[test]
    fn code2seq_empty_bag() {
        assert_eq!(code2seq_line("getX", &[], false), "get|x \n");
    }

    #[test]
    fn code2seq_delimiters_are_escaped() {
        let ctx = PathContext {
            start_token: strs(&["a"]),
            start_type: "Map<String, List<int>>".into(),
            path: strs(&["BINARY_EXPR:||", "X"]),
            end_token: strs(&["b"]),
            end_type: "int".into(),
        };
        let line = code2seq_line("f", &[ctx], true);
        assert_eq!(line, "f a,Map<String;List<int>>,BINARY_EXPR:%7C%7C|X,b,int\n");
        let fields: Vec<&str> = line.trim_end().split(' ').collect();
        assert_eq!(fields.len(), 2);
        assert_eq!(fields[1].split(',').count(), 5);
    }

    #[test]
    fn jsonl_single_leaf() {
        let line = jsonl_line(&sample(NO_LABEL, AstNode::leaf("IDENTIFIER", "x")));
        assert_eq!(line, "[{\"type\":\"IDENTIFIER\",\"value\":\"x\",\"label\":\"NO_LABEL\"}]\n");
    }

    #[test]
    fn jsonl_preorder_children() {
        let tree = AstNode::internal(
            "ASSIGNMENT_EXPR",
            vec![
                AstNode::leaf("IDENTIFIER", "x").with_type("int"),
                AstNode::leaf("LITERAL", "1"),
            ],
        );
        let line = jsonl_line(&sample("f", tree));
        let parsed: Vec<Value> = serde_json::from_str(&line).unwrap();
        assert_eq!(parsed.len(), 3);
        assert_eq!(parsed[0]["children"], serde_json::json!([1, 2]));
        assert_eq!(parsed[0]["label"], "f");
        assert_eq!(parsed[1]["token_type"], "int");
        assert!(parsed[2].get("token_type").is_none());
        assert!(parsed[2].get("children").is_none());
    }

    #[test]
    fn stats_json_is_flat() {
        let mut stats = RunStatistics::with_filters(["tree_size"]);
        stats.trees_before_filters = 3;
        stats.trees_after_filters = 2;
        *stats.filter_rejections.get_mut("tree_size").unwrap() = 1;
        stats.samples_written = 2;
        stats.record_contexts(4);
        stats.record_contexts(2);
        let json = stats.to_json();
        assert_eq!(json["rejected_tree_size"], 1);
        assert_eq!(json["trees_after_filters"], 2);
        assert_eq!(json["contexts_min"], 2);
        assert_eq!(json["contexts_max"], 4);
        assert_eq!(json["contexts_mean"], 3.0);
        assert!(json.as_object().unwrap().values().all(|v| !v.is_object()));
    }

    #[test]
    fn empty_stats() {
        let dir = tempfile::tempdir().unwrap();
        let mut out = Vec::new();
        finalize(&RunStatistics::default(), dir.path(), &mut out).unwrap();
        let json: Value =
            serde_json::from_str(&std::fs::read_to_string(dir.path().join("stats.json")).unwrap())
                .unwrap();
        for key in ["files_seen", "files_parsed", "samples_written", "trees_after_filters"] {
            assert_eq!(json[key], 0, "{key}");
        }
        assert!(json["contexts_mean"].is_null());
        assert!(String::from_utf8(out).unwrap().contains("samples written:      0"));
    }

    #[test]
    fn merge_adds_counters() {
        let mut a = RunStatistics::with_filters(["constructor"]);
        a.files_seen = 1;
        a.record_contexts(5);
        let mut b = RunStatistics::with_filters(["constructor"]);
        b.files_seen = 2;
        b.filter_rejections.insert("constructor".into(), 3);
        b.record_contexts(1);
        b.peak_project_trees = 4;
        a.merge(&b);
        assert_eq!(a.files_seen, 3);
        assert_eq!(a.filter_rejections["constructor"], 3);
        assert_eq!((a.contexts_min, a.contexts_max), (Some(1), Some(5)));
        assert_eq!(a.peak_project_trees, 4);
    }
}
