//! Files: experiment configs, graph inputs, CSV outputs and manifests.

pub mod config;
pub mod graph;
pub mod output;

pub use config::ConfigFile;
pub use graph::{read_dense, read_edge_list, read_graph, read_graph_dir, write_dense, write_dense_file, write_edge_list, GraphFileFormat};
pub use output::{write_mse_csv, write_scree_csv, EstimateSidecar, RunManifest};
