//! On-disk formats: CSV matrices and edge lists, JSON records, chain and path
//! artifact directories, DOT export.
//!
//! Node indices are 1-based in every file and 0-based in memory.

mod artifacts;
mod table;

pub use artifacts::{
    read_chain, read_draws, read_fdr_record, read_path, write_case1_report, write_chain, write_confusion,
    write_draws, write_fdr, write_path, write_roc, ChainRecord, Conventions, FdrRecord, PathManifest,
    StoredPath, CHAIN_META, DRAWS_FILE, DRAWS_MAGIC, DRAWS_VERSION, INCLUSION_FILE, OMEGA_MEAN_FILE,
    PATH_MANIFEST,
};
pub use table::{
    read_edges, read_json, read_matrix, read_vector, to_dot, write_dot, write_edges, write_json, write_matrix,
    write_vector,
};
