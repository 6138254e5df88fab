use std::path::{Path, PathBuf};

use serde_json::{Map, Value};

use crate::ast::IgnoreList;
use crate::error::{ConfigError, Error};
use crate::filters::FilterSpec;
use crate::granularity::Granularity;
use crate::label::{LabelExtractor, METHOD_NAME_TOKEN, SELF_TOKEN};
use crate::paths::MinerLimits;
use crate::storage::StorageFormat;

/// Everything one mining run needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineConfig {
    pub input_dir: PathBuf,
    pub output_dir: PathBuf,
    pub dataset_name: String,
    pub source_extensions: Vec<String>,
    pub ignore: IgnoreList,
    pub granularity: Granularity,
    pub filters: Vec<FilterSpec>,
    pub label_extractor: LabelExtractor,
    pub miner: MinerLimits,
    pub storage: StorageFormat,
    pub parallelism: usize,
}

pub const DEFAULT_DATASET_NAME: &str = "dataset";

impl PipelineConfig {
    /// A config with every optional field at its default.
    pub fn new(
        input_dir: impl Into<PathBuf>,
        output_dir: impl Into<PathBuf>,
        granularity: Granularity,
        label_extractor: LabelExtractor,
        storage: StorageFormat,
    ) -> Self {
        Self {
            input_dir: input_dir.into(),
            output_dir: output_dir.into(),
            dataset_name: DEFAULT_DATASET_NAME.to_owned(),
            source_extensions: vec![".java".to_owned()],
            ignore: IgnoreList::default(),
            granularity,
            filters: Vec::new(),
            label_extractor,
            miner: MinerLimits::default(),
            storage,
            parallelism: 1,
        }
    }

    /// Cross-field checks shared by the JSON loader and programmatic configs.
    pub fn check(&self) -> Result<(), ConfigError> {
        let mut problems = Vec::new();
        cross_check(self, &mut problems);
        if problems.is_empty() {
            Ok(())
        } else {
            Err(ConfigError::from_problems(problems))
        }
    }

    pub fn matches_extension(&self, path: &Path) -> bool {
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or_default();
        self.source_extensions.iter().any(|ext| name.ends_with(ext.as_str()))
    }
}

fn cross_check(config: &PipelineConfig, problems: &mut Vec<String>) {
    if matches!(config.label_extractor, LabelExtractor::MethodName { .. })
        && config.granularity != Granularity::Method
    {
        problems.push(format!(
            "label_extractor: method_name requires granularity `method`, got `{}`",
            config.granularity
        ));
    }
    for (i, f) in config.filters.iter().enumerate() {
        if let Err(e) = f.validate(config.granularity) {
            problems.extend(e.problems.into_iter().map(|p| format!("filters[{i}]: {p}")));
        }
    }
    if config.parallelism == 0 {
        problems.push("parallelism: must be a positive integer".to_owned());
    }
    if config.miner.max_path_nodes == 0 {
        problems.push("miner.max_path_nodes: must be a positive integer".to_owned());
    }
    if config.miner.max_contexts == 0 {
        problems.push("miner.max_contexts: must be a positive integer".to_owned());
    }
    if config.dataset_name.is_empty() || config.dataset_name.contains(['/', '\\']) {
        problems.push("dataset_name: must be a non-empty file name".to_owned());
    }
    if config.source_extensions.is_empty() {
        problems.push("source_extensions: must not be empty".to_owned());
    }
}

/// Collects problems instead of stopping at the first one.
#[derive(Default)]
struct Checker {
    problems: Vec<String>,
}

impl Checker {
    fn problem(&mut self, at: &str, msg: impl AsRef<str>) {
        self.problems.push(format!("{at}: {}", msg.as_ref()));
    }

    fn object<'v>(&mut self, value: &'v Value, at: &str, allowed: &[&str]) -> Option<&'v Map<String, Value>> {
        let Some(obj) = value.as_object() else {
            self.problem(at, "expected an object");
            return None;
        };
        for key in obj.keys() {
            if !allowed.contains(&key.as_str()) {
                self.problem(at, format!("unknown key `{key}`"));
            }
        }
        Some(obj)
    }

    fn string(&mut self, obj: &Map<String, Value>, key: &str, at: &str, required: bool) -> Option<String> {
        match obj.get(key) {
            None if required => {
                self.problem(at, format!("missing required key `{key}`"));
                None
            }
            None => None,
            Some(Value::String(s)) => Some(s.clone()),
            Some(_) => {
                self.problem(&join(at, key), "expected a string");
                None
            }
        }
    }

    fn uint(&mut self, obj: &Map<String, Value>, key: &str, at: &str, min: u64) -> Option<u64> {
        let value = obj.get(key)?;
        let at = join(at, key);
        match value.as_u64() {
            Some(n) if n >= min => Some(n),
            _ => {
                let what = if min == 0 { "non-negative" } else { "positive" };
                self.problem(&at, format!("must be a {what} integer, got {value}"));
                None
            }
        }
    }

    fn string_list(&mut self, obj: &Map<String, Value>, key: &str, at: &str) -> Option<Vec<String>> {
        let value = obj.get(key)?;
        let at = join(at, key);
        let Some(items) = value.as_array() else {
            self.problem(&at, "expected an array of strings");
            return None;
        };
        let mut out = Vec::new();
        for (i, item) in items.iter().enumerate() {
            match item.as_str() {
                Some(s) => out.push(s.to_owned()),
                None => self.problem(&format!("{at}[{i}]"), "expected a string"),
            }
        }
        Some(out)
    }
}

fn join(at: &str, key: &str) -> String {
    if at.is_empty() {
        key.to_owned()
    } else {
        format!("{at}.{key}")
    }
}

const TOP_KEYS: &[&str] = &[
    "input_dir",
    "output_dir",
    "dataset_name",
    "source_extensions",
    "ignore_node_kinds",
    "granularity",
    "filters",
    "label_extractor",
    "miner",
    "storage",
    "parallelism",
];

/// Parses and validates a JSON configuration, applying defaults.
///
/// All problems are reported together; unknown keys are errors.
pub fn validate_config(raw: &str) -> Result<PipelineConfig, ConfigError> {
    let value: Value = serde_json::from_str(raw)
        .map_err(|e| ConfigError::new(format!("invalid JSON: {e}")))?;
    let mut ck = Checker::default();
    let Some(top) = ck.object(&value, "config", TOP_KEYS) else {
        return Err(ConfigError::from_problems(ck.problems));
    };

    let input_dir = ck.string(top, "input_dir", "config", true);
    let output_dir = ck.string(top, "output_dir", "config", true);
    let dataset_name = ck
        .string(top, "dataset_name", "config", false)
        .unwrap_or_else(|| DEFAULT_DATASET_NAME.to_owned());

    let source_extensions = ck
        .string_list(top, "source_extensions", "")
        .map(|exts| {
            exts.into_iter()
                .map(|e| if e.starts_with('.') { e } else { format!(".{e}") })
                .collect()
        })
        .unwrap_or_else(|| vec![".java".to_owned()]);

    let ignore = match ck.string_list(top, "ignore_node_kinds", "") {
        Some(names) => match IgnoreList::from_names(&names) {
            Ok(list) => list,
            Err(e) => {
                ck.problems.extend(e.problems);
                IgnoreList::default()
            }
        },
        None => IgnoreList::default(),
    };

    let granularity = ck
        .string(top, "granularity", "config", true)
        .and_then(|g| match g.parse::<Granularity>() {
            Ok(g) => Some(g),
            Err(e) => {
                ck.problem("granularity", e);
                None
            }
        });

    let filters = match top.get("filters") {
        None => Vec::new(),
        Some(Value::Array(items)) => items
            .iter()
            .enumerate()
            .filter_map(|(i, f)| parse_filter(&mut ck, f, &format!("filters[{i}]")))
            .collect(),
        Some(_) => {
            ck.problem("filters", "expected an array");
            Vec::new()
        }
    };

    let label_extractor = match top.get("label_extractor") {
        None => {
            ck.problem("config", "missing required key `label_extractor`");
            None
        }
        Some(v) => parse_extractor(&mut ck, v),
    };

    let miner = match top.get("miner") {
        None => MinerLimits::default(),
        Some(v) => parse_miner(&mut ck, v),
    };

    let storage = match top.get("storage") {
        None => {
            ck.problem("config", "missing required key `storage`");
            None
        }
        Some(Value::String(s)) => parse_format(&mut ck, s),
        Some(v) => ck
            .object(v, "storage", &["format"])
            .and_then(|o| ck.string(o, "format", "storage", true))
            .and_then(|s| parse_format(&mut ck, &s)),
    };

    let parallelism = ck.uint(top, "parallelism", "", 1).unwrap_or(1) as usize;

    match (input_dir, output_dir, granularity, label_extractor, storage) {
        (Some(input), Some(output), Some(granularity), Some(extractor), Some(format))
            if ck.problems.is_empty() =>
        {
            let config = PipelineConfig {
                input_dir: input.into(),
                output_dir: output.into(),
                dataset_name,
                source_extensions,
                ignore,
                granularity,
                filters,
                label_extractor: extractor,
                miner,
                storage: format,
                parallelism,
            };
            config.check()?;
            Ok(config)
        }
        (_, _, granularity, extractor, _) => {
            // Still report cross-field problems we can see.
            if let (Some(g), Some(LabelExtractor::MethodName { .. })) = (granularity, &extractor) {
                if g != Granularity::Method {
                    ck.problem(
                        "label_extractor",
                        format!("method_name requires granularity `method`, got `{g}`"),
                    );
                }
            }
            Err(ConfigError::from_problems(ck.problems))
        }
    }
}

fn parse_format(ck: &mut Checker, s: &str) -> Option<StorageFormat> {
    match s.parse() {
        Ok(f) => Some(f),
        Err(e) => {
            ck.problem("storage.format", e);
            None
        }
    }
}

fn parse_filter(ck: &mut Checker, value: &Value, at: &str) -> Option<FilterSpec> {
    let obj = value.as_object();
    let name = match (value, obj) {
        (Value::String(s), _) => s.clone(),
        (_, Some(o)) => ck.string(o, "name", at, true)?,
        _ => {
            ck.problem(at, "expected a filter name or object");
            return None;
        }
    };
    let empty = Map::new();
    let params = obj.unwrap_or(&empty);
    let allowed: &[&str] = match name.as_str() {
        "tree_size" => &["name", "max_nodes", "min_nodes"],
        "code_lines" => &["name", "max_lines"],
        "abstract_method" | "override_method" | "constructor" => &["name"],
        other => {
            ck.problem(
                at,
                format!(
                    "unknown filter `{other}` (expected one of {})",
                    FilterSpec::NAMES.join(", ")
                ),
            );
            return None;
        }
    };
    if let Some(o) = obj {
        ck.object(&Value::Object(o.clone()), at, allowed);
    }
    let required = |ck: &mut Checker, key: &str| {
        if params.contains_key(key) {
            ck.uint(params, key, at, 1)
        } else {
            ck.problem(at, format!("{name} needs `{key}`"));
            None
        }
    };
    match name.as_str() {
        "tree_size" => {
            let max_nodes = required(ck, "max_nodes")? as usize;
            let min_nodes = ck.uint(params, "min_nodes", at, 1).map(|n| n as usize);
            Some(FilterSpec::TreeSize {
                max_nodes,
                min_nodes,
            })
        }
        "code_lines" => Some(FilterSpec::CodeLines {
            max_lines: required(ck, "max_lines")? as usize,
        }),
        "abstract_method" => Some(FilterSpec::AbstractMethod),
        "override_method" => Some(FilterSpec::OverrideMethod),
        _ => Some(FilterSpec::Constructor),
    }
}

fn parse_extractor(ck: &mut Checker, value: &Value) -> Option<LabelExtractor> {
    let at = "label_extractor";
    let (name, obj) = match value {
        Value::String(s) => (s.clone(), None),
        Value::Object(_) => {
            let o = ck.object(value, at, &["name", "method_name_token", "self_token"])?;
            (ck.string(o, "name", at, true)?, Some(o))
        }
        _ => {
            ck.problem(at, "expected a string or an object");
            return None;
        }
    };
    match name.as_str() {
        "method_name" => {
            let mut token = |key: &str, default: &str| {
                obj.and_then(|o| ck.string(o, key, at, false))
                    .unwrap_or_else(|| default.to_owned())
            };
            let method_name_token = token("method_name_token", METHOD_NAME_TOKEN);
            let self_token = token("self_token", SELF_TOKEN);
            if method_name_token.is_empty() || self_token.is_empty() {
                ck.problem(at, "special tokens must be non-empty");
            }
            Some(LabelExtractor::MethodName {
                method_name_token,
                self_token,
            })
        }
        "none" => {
            if let Some(o) = obj {
                if o.len() > 1 {
                    ck.problem(at, "the `none` extractor takes no options");
                }
            }
            Some(LabelExtractor::None)
        }
        other => {
            ck.problem(at, format!("unknown extractor `{other}` (expected method_name or none)"));
            None
        }
    }
}

fn parse_miner(ck: &mut Checker, value: &Value) -> MinerLimits {
    let at = "miner";
    let mut limits = MinerLimits::default();
    let Some(o) = ck.object(
        value,
        at,
        &["max_path_nodes", "max_path_width", "max_contexts", "rng_seed"],
    ) else {
        return limits;
    };
    if let Some(n) = ck.uint(o, "max_path_nodes", at, 1) {
        limits.max_path_nodes = n as usize;
    }
    if let Some(n) = ck.uint(o, "max_path_width", at, 0) {
        limits.max_path_width = n as usize;
    }
    if let Some(n) = ck.uint(o, "max_contexts", at, 1) {
        limits.max_contexts = n as usize;
    }
    if let Some(n) = ck.uint(o, "rng_seed", at, 0) {
        limits.rng_seed = n;
    }
    limits
}

/// Reads and validates a config file. Relative directories are taken
/// relative to the file's own directory.
pub fn load_config(path: &Path) -> Result<PipelineConfig, Error> {
    let raw = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut config = validate_config(&raw)?;
    let base = path.parent().unwrap_or(Path::new("."));
    for dir in [&mut config.input_dir, &mut config.output_dir] {
        if dir.is_relative() {
            *dir = base.join(&*dir);
        }
    }
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "input_dir": "in", "output_dir": "out",
        "granularity": "method",
        "label_extractor": "method_name",
        "storage": {"format": "code2seq"}
    }"#;

    fn problems(raw: &str) -> Vec<String> {
        validate_config(raw).unwrap_err().problems
    }

    #[test]
    fn minimal_config_gets_defaults() {
        let c = validate_config(MINIMAL).unwrap();
        assert_eq!(c.miner, MinerLimits::default());
        assert_eq!(
            (c.miner.max_path_nodes, c.miner.max_path_width, c.miner.max_contexts),
            (9, 2, 200)
        );
        assert_eq!(c.source_extensions, vec![".java"]);
        assert_eq!(c.dataset_name, "dataset");
        assert_eq!(c.ignore, IgnoreList::default());
        assert_eq!(c.parallelism, 1);
        assert_eq!(c.label_extractor, LabelExtractor::method_name());
        assert_eq!(c.storage, StorageFormat::Code2seq);
    }

    #[test]
    fn method_name_needs_method_granularity() {
        let raw = MINIMAL.replace("\"method\"", "\"file\"");
        let p = problems(&raw);
        assert_eq!(p.len(), 1, "{p:?}");
        assert!(p[0].contains("method_name requires granularity"));
    }

    #[test]
    fn negative_limit() {
        let raw = MINIMAL.replace("\"granularity\"", "\"miner\": {\"max_path_nodes\": -3}, \"granularity\"");
        let p = problems(&raw);
        assert!(p[0].contains("miner.max_path_nodes"), "{p:?}");
    }

    #[test]
    fn all_problems_reported_at_once() {
        let raw = r#"{
            "input_dir": "in", "output_dir": 3,
            "granularity": "statement",
            "label_extractor": {"name": "method_name", "colour": "red"},
            "filters": [{"name": "nope"}, {"name": "tree_size"}],
            "ignore_node_kinds": ["PsiWhiteSpace"],
            "storage": {"format": "csv"},
            "extra": true
        }"#;
        let p = problems(raw);
        let joined = p.join("\n");
        for needle in [
            "output_dir: expected a string",
            "unknown granularity",
            "unknown key `colour`",
            "unknown filter `nope`",
            "tree_size needs `max_nodes`",
            "PsiWhiteSpace",
            "unknown storage format",
            "unknown key `extra`",
        ] {
            assert!(joined.contains(needle), "missing {needle:?} in\n{joined}");
        }
    }

    #[test]
    fn full_config() {
        let raw = r#"{
            "input_dir": "in", "output_dir": "out", "dataset_name": "java-small",
            "source_extensions": ["java", ".jav"],
            "ignore_node_kinds": ["WHITE_SPACE", "PUNCTUATION", "KEYWORD", "OPERATOR", "LINE_COMMENT", "BLOCK_COMMENT"],
            "granularity": "method",
            "filters": [
                {"name": "tree_size", "max_nodes": 500, "min_nodes": 3},
                {"name": "code_lines", "max_lines": 100},
                "constructor",
                {"name": "abstract_method"},
                {"name": "override_method"}
            ],
            "label_extractor": {"name": "method_name", "method_name_token": "<M>", "self_token": "<S>"},
            "miner": {"max_path_nodes": 8, "max_path_width": 3, "max_contexts": 100, "rng_seed": 42},
            "storage": "code2seq_typed",
            "parallelism": 4
        }"#;
        let c = validate_config(raw).unwrap();
        assert_eq!(c.source_extensions, vec![".java", ".jav"]);
        assert_eq!(c.filters.len(), 5);
        assert_eq!(c.miner.rng_seed, 42);
        assert_eq!(c.storage, StorageFormat::Code2seqTyped);
        assert_eq!(c.parallelism, 4);
        assert!(c.ignore.contains(crate::cst::CstKind::LineComment));
    }

    #[test]
    fn method_filters_rejected_at_class_level() {
        let raw = MINIMAL
            .replace("\"method\"", "\"class\"")
            .replace("\"method_name\"", "\"none\"")
            .replace("\"granularity\"", "\"filters\": [\"constructor\"], \"granularity\"");
        let p = problems(&raw);
        assert!(p.iter().any(|p| p.contains("requires method granularity")), "{p:?}");
    }

    #[test]
    fn invalid_json() {
        assert!(problems("{").iter().any(|p| p.contains("invalid JSON")));
    }
}
