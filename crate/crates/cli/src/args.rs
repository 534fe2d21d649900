//! Command-line flags.

use std::path::PathBuf;

use clap::Parser;

#[derive(Debug, Clone, Parser)]
#[command(
    name = "scpm",
    version,
    about = "Mine attribute sets that are correlated with dense subgraphs",
    long_about = "Reads an edge list and a vertex attribute file, scores every frequent \
                  attribute set by the fraction of its vertices that lie in quasi-cliques of \
                  its induced graph, and reports the significant sets with their largest \
                  quasi-cliques."
)]
pub struct Cli {
    /// Edge list: one `u v` pair per line, `#` starts a comment
    #[arg(long, value_name = "PATH", required_unless_present = "from_manifest")]
    pub graph: Option<PathBuf>,

    /// Vertex attributes: `vertex token token ...` per line
    #[arg(long, value_name = "PATH", required_unless_present = "from_manifest")]
    pub attributes: Option<PathBuf>,

    /// Minimum support of an attribute set
    #[arg(long, value_name = "N", required_unless_present = "from_manifest")]
    pub sigma_min: Option<usize>,

    /// Minimum quasi-clique density γ in (0, 1]
    #[arg(long, value_name = "FLOAT", required_unless_present = "from_manifest")]
    pub gamma_min: Option<String>,

    /// Minimum quasi-clique size
    #[arg(long, value_name = "N", required_unless_present = "from_manifest")]
    pub min_size: Option<usize>,

    /// Minimum structural correlation
    #[arg(long, value_name = "FLOAT", default_value_t = 0.0)]
    pub eps_min: f64,

    /// Minimum normalized structural correlation
    #[arg(long, value_name = "FLOAT", default_value_t = 0.0)]
    pub delta_min: f64,

    /// Patterns reported per attribute set: a count or `all`
    #[arg(long, value_name = "N|all", default_value = "5")]
    pub top_k: String,

    /// Quasi-clique search order: dfs or bfs
    #[arg(long, value_name = "dfs|bfs", default_value = "dfs")]
    pub strategy: String,

    /// Expected-correlation model: analytical or simulation
    #[arg(long, value_name = "MODEL", default_value = "analytical")]
    pub null_model: String,

    /// Random samples per support value for the simulation model
    #[arg(long, value_name = "N", default_value_t = 100)]
    pub samples: usize,

    /// Seed for the simulation model
    #[arg(long, value_name = "N", default_value_t = 0)]
    pub seed: u64,

    /// Use the unpruned reference miner
    #[arg(long)]
    pub baseline: bool,

    /// Run both miners and report their timings and candidate counts
    #[arg(long, conflicts_with = "baseline")]
    pub compare: bool,

    /// Largest attribute set size to explore
    #[arg(long, value_name = "N")]
    pub max_set_size: Option<usize>,

    /// Worker threads (default: all cores)
    #[arg(long, value_name = "N")]
    pub threads: Option<usize>,

    /// Candidate expansions allowed per quasi-clique search
    #[arg(long, value_name = "N")]
    pub candidate_limit: Option<u64>,

    /// Repeat the run over a parameter range, e.g. gamma_min=0.3:0.9:0.1
    #[arg(long, value_name = "PARAM=START:END:STEP")]
    pub sweep: Option<String>,

    /// Records file (default: standard output)
    #[arg(long, value_name = "PATH")]
    pub out_records: Option<PathBuf>,

    /// Patterns file
    #[arg(long, value_name = "PATH")]
    pub out_patterns: Option<PathBuf>,

    /// Write one Graphviz file per pattern into this directory
    #[arg(long, value_name = "DIR")]
    pub export_dot: Option<PathBuf>,

    /// Stop with exit code 3 on the first search that exceeds the candidate limit
    #[arg(long)]
    pub fail_fast: bool,

    /// Where to write the run manifest (default: next to the records file)
    #[arg(long, value_name = "PATH")]
    pub manifest: Option<PathBuf>,

    /// Repeat the run described by a manifest; output paths may be overridden
    #[arg(long, value_name = "PATH", conflicts_with_all = [
        "graph", "attributes", "sigma_min", "gamma_min", "min_size", "eps_min", "delta_min",
        "top_k", "strategy", "null_model", "samples", "seed", "baseline", "compare",
        "max_set_size", "candidate_limit", "sweep", "fail_fast",
    ])]
    pub from_manifest: Option<PathBuf>,
}
