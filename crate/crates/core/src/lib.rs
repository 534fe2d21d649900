//! Structural correlation pattern mining.
//!
//! Given an attributed graph, measures how strongly each attribute set is
//! associated with membership in dense subgraphs (γ-quasi-cliques), compares
//! that against a null model, and reports the largest and densest
//! quasi-cliques induced by the significant attribute sets.

pub mod error;
pub mod graph;
pub mod index;
pub mod miner;
pub mod nullmodel;
pub mod quasiclique;
pub mod synth;

pub use error::{Error, Result};
pub use graph::{
    degree_distribution, induced_view, load_graph, AttrId, AttributeDictionary, AttributedGraph,
    DegreeHistogram, GraphView, LoadReport, VertexId,
};
pub use index::{build_index, AttributeIndex, AttributeSet, PostingList};
pub use miner::{
    run_naive, run_scpm, structural_correlation, CorrelationRecord, MinerConfig, MiningOutput,
    MiningStats, PatternRecord, TopK,
};
pub use nullmodel::{
    binomial_term, max_eps_exp, normalized_delta, sample_prob, sim_eps_exp, ExpectedCorrelation,
    NullModel, NullModelConfig, NullModelKind,
};
pub use quasiclique::{
    covered_vertices, enumerate_maximal, is_gamma_dense, top_k_patterns, vertex_prune, Engine,
    Gamma, QuasiClique, QuasiCliqueParams, SearchStrategy,
};
