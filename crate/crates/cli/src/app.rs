//! Orchestration: flags to files.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Cursor, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;
use scpm_core::{
    build_index, induced_view, load_graph, run_naive, run_scpm, AttributeIndex, AttributedGraph,
    MinerConfig, MiningOutput,
};

use crate::args::Cli;
use crate::config::RunConfig;
use crate::dot::export_pattern_dot;
use crate::error::CliError;
use crate::manifest::{default_path, BlockSummary, FileDigest, RunManifest};
use crate::output::{write_patterns_block, write_records_block, SET_SEPARATOR};

/// Parses `args` (program name first), runs, and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn millis(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn read_input(path: &Path, what: &str) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::Input(format!("cannot read {what} {}: {e}", path.display())))
}

/// Settings for this invocation, from a manifest or from the flags.
fn resolve(cli: &Cli) -> Result<(RunConfig, Option<RunManifest>), CliError> {
    let Some(path) = &cli.from_manifest else {
        return Ok((RunConfig::from_cli(cli)?, None));
    };
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read manifest {}: {e}", path.display())))?;
    let previous = RunManifest::from_json(&text)
        .map_err(|e| CliError::Input(format!("manifest {}: {e}", path.display())))?;
    let mut config = previous.config.clone();
    if cli.out_records.is_some() {
        config.out_records = cli.out_records.clone();
    }
    if cli.out_patterns.is_some() {
        config.out_patterns = cli.out_patterns.clone();
    }
    if cli.export_dot.is_some() {
        config.export_dot = cli.export_dot.clone();
    }
    Ok((config, Some(previous)))
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let (config, previous) = resolve(cli)?;
    let blocks = config.blocks()?;
    // Reject bad parameters before touching any file.
    let miner_configs = blocks
        .iter()
        .map(|(_, c)| c.miner_config())
        .collect::<Result<Vec<_>, _>>()?;
    if cli.threads == Some(0) {
        return Err(CliError::Usage("--threads must be at least 1".into()));
    }
    let pool = cli
        .threads
        .map(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build())
        .transpose()
        .map_err(|e| CliError::Usage(format!("--threads: {e}")))?;

    let mut manifest = RunManifest::new(config.clone(), cli.threads);
    let start = Instant::now();
    let edge_bytes = read_input(&config.graph, "graph")?;
    let attr_bytes = read_input(&config.attributes, "attributes")?;
    let graph_path = fs::canonicalize(&config.graph).unwrap_or_else(|_| config.graph.clone());
    let attr_path = fs::canonicalize(&config.attributes).unwrap_or_else(|_| config.attributes.clone());
    manifest.config.graph = graph_path.clone();
    manifest.config.attributes = attr_path.clone();
    manifest.inputs.push(FileDigest::of("graph", &graph_path, &edge_bytes));
    manifest.inputs.push(FileDigest::of("attributes", &attr_path, &attr_bytes));
    if let Some(prev) = &previous {
        for role in ["graph", "attributes"] {
            let (now, then) = (manifest.input(role), prev.input(role));
            if let (Some(now), Some(then)) = (now, then) {
                if now.sha256 != then.sha256 {
                    return Err(CliError::Input(format!(
                        "{role} file {} differs from the one recorded in the manifest",
                        now.path.display()
                    )));
                }
            }
        }
    }
    let (graph, report) = load_graph(Cursor::new(&edge_bytes), Cursor::new(&attr_bytes))
        .map_err(|e| CliError::Input(e.to_string()))?;
    if report.self_loops_dropped > 0 || report.duplicate_edges > 0 {
        log::info!(
            "dropped {} self-loops and {} duplicate edges",
            report.self_loops_dropped,
            report.duplicate_edges
        );
    }
    if let Some(bad) = (0..graph.dictionary().len() as u32)
        .filter_map(|a| graph.dictionary().token(a))
        .find(|t| t.contains(SET_SEPARATOR))
    {
        return Err(CliError::Input(format!(
            "attribute token `{bad}` contains `{SET_SEPARATOR}`, which separates tokens in the output"
        )));
    }
    manifest.timings_ms.insert("load".into(), millis(start));

    let start = Instant::now();
    let index = build_index(&graph);
    manifest.timings_ms.insert("index".into(), millis(start));

    let mut mine = || mine_blocks(&graph, &index, &config, &blocks, &miner_configs, &mut manifest);
    let results = match &pool {
        Some(pool) => pool.install(mine),
        None => mine(),
    }?;

    let start = Instant::now();
    write_outputs(&graph, &index, &config, &blocks, &results, &mut manifest)?;
    manifest.timings_ms.insert("write".into(), millis(start));

    let manifest_path = cli
        .manifest
        .clone()
        .or_else(|| config.out_records.as_deref().map(default_path));
    if let Some(path) = manifest_path {
        write_file(&path, manifest.to_json().as_bytes())?;
    }
    Ok(())
}

fn mine_blocks(
    graph: &AttributedGraph,
    index: &AttributeIndex,
    config: &RunConfig,
    blocks: &[(Option<String>, RunConfig)],
    miner_configs: &[MinerConfig],
    manifest: &mut RunManifest,
) -> Result<Vec<MiningOutput>, CliError> {
    let mut results = Vec::with_capacity(blocks.len());
    let mut total = 0.0;
    for ((label, block), cfg) in blocks.iter().zip(miner_configs) {
        let mut modes: Vec<bool> = vec![block.baseline];
        if config.compare {
            modes = vec![true, false];
        }
        let mut kept = None;
        for naive in modes {
            let start = Instant::now();
            let out = if naive {
                run_naive(graph, index, cfg)
            } else {
                run_scpm(graph, index, cfg)
            }
            .map_err(CliError::from_mining)?;
            let ms = millis(start);
            total += ms;
            let mode = if naive { "naive" } else { "scpm" };
            eprintln!(
                "{}{mode}: {} records, {} patterns, {} attribute sets, {} candidates, {:.1} ms",
                label.as_deref().map(|l| format!("[{l}] ")).unwrap_or_default(),
                out.records.len(),
                out.patterns.len(),
                out.stats.attribute_sets_visited,
                out.stats.candidates_visited,
                ms
            );
            if !out.stats.overflowed.is_empty() {
                eprintln!(
                    "warning: {} attribute sets skipped after exceeding the candidate limit",
                    out.stats.overflowed.len()
                );
            }
            manifest.blocks.push(BlockSummary {
                block: label.clone(),
                mode: mode.into(),
                records: out.records.len(),
                patterns: out.patterns.len(),
                attribute_sets_visited: out.stats.attribute_sets_visited,
                candidates_visited: out.stats.candidates_visited,
                skipped_sets: out.stats.overflowed.len(),
                mine_ms: ms,
            });
            kept = Some(out);
        }
        results.push(kept.expect("at least one mode runs"));
    }
    manifest.timings_ms.insert("mine".into(), total);
    Ok(results)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::Output(format!("cannot write {}: {e}", path.display())))
}

fn write_outputs(
    graph: &AttributedGraph,
    index: &AttributeIndex,
    config: &RunConfig,
    blocks: &[(Option<String>, RunConfig)],
    results: &[MiningOutput],
    manifest: &mut RunManifest,
) -> Result<(), CliError> {
    let io_err = |e: io::Error| CliError::Output(e.to_string());
    let mut records = Vec::new();
    let mut patterns = Vec::new();
    for ((label, block), out) in blocks.iter().zip(results) {
        write_records_block(
            &mut records,
            &block.header("records", label.as_deref()),
            graph,
            &out.records,
            &out.stats.overflowed,
        )
        .map_err(io_err)?;
        write_patterns_block(&mut patterns, &block.header("patterns", label.as_deref()), graph, &out.patterns)
            .map_err(io_err)?;
    }
    match &config.out_records {
        Some(path) => {
            write_file(path, &records)?;
            manifest.outputs.push(FileDigest::of("records", path, &records));
        }
        None => io::stdout().write_all(&records).map_err(io_err)?,
    }
    if let Some(path) = &config.out_patterns {
        write_file(path, &patterns)?;
        manifest.outputs.push(FileDigest::of("patterns", path, &patterns));
    }
    if let Some(dir) = &config.export_dot {
        fs::create_dir_all(dir)
            .map_err(|e| CliError::Output(format!("cannot create {}: {e}", dir.display())))?;
        let sweeping = blocks.len() > 1 || blocks[0].0.is_some();
        for (b, out) in results.iter().enumerate() {
            for (i, p) in out.patterns.iter().enumerate() {
                let members = index.vertex_set(&p.attribute_set).into_vec();
                let view = induced_view(graph, &members).map_err(|e| CliError::Output(e.to_string()))?;
                let text = export_pattern_dot(graph, p, &view);
                let name = if sweeping {
                    format!("pattern_{b:03}_{i:05}.dot")
                } else {
                    format!("pattern_{i:05}.dot")
                };
                let path: PathBuf = dir.join(name);
                write_file(&path, text.as_bytes())?;
                manifest.outputs.push(FileDigest::of("dot", &path, text.as_bytes()));
            }
        }
    }
    Ok(())
}
