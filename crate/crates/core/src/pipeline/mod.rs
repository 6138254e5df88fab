//! End-to-end orchestration: discover, parse, build, enrich, split, filter,
//! label, mine and store, one project at a time.

mod config;

pub use config::{load_config, validate_config, PipelineConfig, DEFAULT_DATASET_NAME};

use std::fmt;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use walkdir::WalkDir;

use crate::ast::build_ast;
use crate::cst::parse_file;
use crate::error::{ConfigError, Error};
use crate::filters::rejections;
use crate::granularity::split;
use crate::paths::{enumerate_paths, sample_contexts, tree_key};
use crate::storage::{code2seq_line, finalize, jsonl_line, output_file_name, RunStatistics, StorageFormat};
use crate::types::annotate_types;

pub const SPLIT_NAMES: [&str; 3] = ["train", "val", "test"];
pub const SINGLE_SPLIT: &str = "data";

/// A unit of processing: all of its files are held in memory together.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Project {
    /// Relative to the split root; empty for loose files.
    pub name: String,
    /// Paths relative to the split root, sorted.
    pub files: Vec<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitPlan {
    pub name: String,
    pub root: PathBuf,
    pub output_file: PathBuf,
    pub projects: Vec<Project>,
}

impl SplitPlan {
    pub fn file_count(&self) -> usize {
        self.projects.iter().map(|p| p.files.len()).sum()
    }
}

/// What a run would read and write.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscoveryPlan {
    pub splits: Vec<SplitPlan>,
}

impl fmt::Display for DiscoveryPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for split in &self.splits {
            writeln!(
                f,
                "split {} ({} projects, {} files) -> {}",
                split.name,
                split.projects.len(),
                split.file_count(),
                split.output_file.display()
            )?;
            for project in &split.projects {
                let name = if project.name.is_empty() { "." } else { &project.name };
                writeln!(f, "  project {name}: {} files", project.files.len())?;
            }
        }
        Ok(())
    }
}

/// Lays out splits, projects and files without reading any source.
pub fn discover(config: &PipelineConfig) -> Result<DiscoveryPlan, Error> {
    let input = &config.input_dir;
    if !input.is_dir() {
        return Err(Error::io(
            input,
            io::Error::new(io::ErrorKind::NotFound, "input_dir is not a directory"),
        ));
    }
    let named: Vec<&str> = SPLIT_NAMES
        .iter()
        .copied()
        .filter(|s| input.join(s).is_dir())
        .collect();
    let roots: Vec<(String, PathBuf)> = if named.is_empty() {
        vec![(SINGLE_SPLIT.to_owned(), input.clone())]
    } else {
        named.iter().map(|s| (s.to_string(), input.join(s))).collect()
    };
    let mut splits = Vec::new();
    for (name, root) in roots {
        let projects = discover_projects(config, &root)?;
        splits.push(SplitPlan {
            output_file: config
                .output_dir
                .join(output_file_name(&config.dataset_name, &name, config.storage)),
            name,
            root,
            projects,
        });
    }
    Ok(DiscoveryPlan { splits })
}

fn discover_projects(config: &PipelineConfig, root: &Path) -> Result<Vec<Project>, Error> {
    let mut loose = Vec::new();
    let mut dirs = Vec::new();
    for entry in fs::read_dir(root).map_err(|e| Error::io(root, e))? {
        let entry = entry.map_err(|e| Error::io(root, e))?;
        let path = entry.path();
        if path.is_dir() {
            dirs.push(path);
        } else if config.matches_extension(&path) {
            loose.push(PathBuf::from(entry.file_name()));
        }
    }
    loose.sort();
    dirs.sort();

    let mut projects = Vec::new();
    if !loose.is_empty() {
        projects.push(Project {
            name: String::new(),
            files: loose,
        });
    }
    for dir in dirs {
        let mut files = Vec::new();
        for entry in WalkDir::new(&dir).sort_by_file_name() {
            let entry = entry.map_err(|e| {
                let path = e.path().unwrap_or(&dir).to_path_buf();
                Error::io(path, e.into())
            })?;
            if entry.file_type().is_file() && config.matches_extension(entry.path()) {
                let rel = entry.path().strip_prefix(root).unwrap_or(entry.path());
                files.push(rel.to_path_buf());
            }
        }
        files.sort();
        if !files.is_empty() {
            projects.push(Project {
                name: dir
                    .file_name()
                    .map(|n| n.to_string_lossy().into_owned())
                    .unwrap_or_default(),
                files,
            });
        }
    }
    Ok(projects)
}

/// Output of one file: serialized samples in unit order plus its counters.
struct FileOutcome {
    lines: Vec<String>,
    stats: RunStatistics,
    trees: u64,
}

fn empty_stats(config: &PipelineConfig) -> RunStatistics {
    RunStatistics::with_filters(config.filters.iter().map(|f| f.name()))
}

fn process_file(config: &PipelineConfig, root: &Path, rel: &Path) -> Result<FileOutcome, Error> {
    let path = root.join(rel);
    let mut stats = empty_stats(config);
    stats.files_seen = 1;
    let mut outcome = FileOutcome {
        lines: Vec::new(),
        stats,
        trees: 0,
    };
    let bytes = fs::read(&path).map_err(|e| Error::io(&path, e))?;
    let Ok(source) = String::from_utf8(bytes) else {
        log::warn!("{}: skipped, not valid UTF-8", path.display());
        outcome.stats.parse_failures = 1;
        return Ok(outcome);
    };
    let display = rel.to_string_lossy();
    let cst = match parse_file(&source, &display) {
        Ok(cst) => cst,
        Err(e) => {
            log::warn!("{}: skipped, {e}", path.display());
            outcome.stats.parse_failures = 1;
            return Ok(outcome);
        }
    };
    outcome.stats.files_parsed = 1;
    let tree = annotate_types(build_ast(&cst, &config.ignore));
    drop(cst);

    let units = split(&tree, config.granularity);
    outcome.trees = units.len() as u64;
    let stats = &mut outcome.stats;
    for unit in units {
        stats.trees_before_filters += 1;
        let rejected = rejections(&unit, &unit.span, &config.filters)?;
        for spec in &rejected {
            *stats.filter_rejections.entry(spec.name().to_owned()).or_default() += 1;
        }
        if !rejected.is_empty() {
            continue;
        }
        stats.trees_after_filters += 1;
        let sample = config
            .label_extractor
            .extract(unit)
            .map_err(|e| with_location(e, &display))?;
        let line = if config.storage.needs_contexts() {
            let contexts = enumerate_paths(&sample.tree, &config.miner);
            let key = tree_key(&sample.label, &sample.tree);
            let contexts = sample_contexts(contexts, &config.miner, &key);
            stats.record_contexts(contexts.len());
            code2seq_line(
                &sample.label,
                &contexts,
                config.storage == StorageFormat::Code2seqTyped,
            )
        } else {
            jsonl_line(&sample)
        };
        stats.samples_written += 1;
        outcome.lines.push(line);
    }
    Ok(outcome)
}

fn with_location(e: ConfigError, file: &str) -> ConfigError {
    ConfigError::from_problems(e.problems.into_iter().map(|p| format!("{file}: {p}")).collect())
}

/// Runs the whole pipeline and writes outputs plus `stats.json`.
///
/// The summary is printed to stdout.
pub fn run(config: &PipelineConfig) -> Result<RunStatistics, Error> {
    run_with_sink(config, &mut io::stdout().lock())
}

/// Like [`run`] with the summary sent to `sink`.
pub fn run_with_sink(config: &PipelineConfig, sink: &mut impl Write) -> Result<RunStatistics, Error> {
    config.check()?;
    let plan = discover(config)?;
    let out_dir = &config.output_dir;
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.parallelism)
        .build()
        .map_err(|e| Error::io(out_dir, io::Error::other(e)))?;

    let mut stats = empty_stats(config);
    for split_plan in &plan.splits {
        let out_path = &split_plan.output_file;
        let file = File::create(out_path).map_err(|e| Error::io(out_path, e))?;
        let mut writer = BufWriter::new(file);
        for project in &split_plan.projects {
            log::info!(
                "split {}: project {} ({} files)",
                split_plan.name,
                if project.name.is_empty() { "." } else { &project.name },
                project.files.len()
            );
            let outcomes: Vec<Result<FileOutcome, Error>> = pool.install(|| {
                project
                    .files
                    .par_iter()
                    .map(|rel| process_file(config, &split_plan.root, rel))
                    .collect()
            });
            let mut project_trees = 0;
            for outcome in outcomes {
                let outcome = outcome?;
                project_trees += outcome.trees;
                stats.merge(&outcome.stats);
                for line in &outcome.lines {
                    writer
                        .write_all(line.as_bytes())
                        .map_err(|e| Error::io(out_path, e))?;
                }
            }
            stats.peak_project_trees = stats.peak_project_trees.max(project_trees);
        }
        writer.flush().map_err(|e| Error::io(out_path, e))?;
    }
    finalize(&stats, out_dir, sink).map_err(|e| Error::io(out_dir.join("stats.json"), e))?;
    Ok(stats)
}
