#[allow(dead_code)]
mod eigen_lowrank {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/eigen_lowrank.rs"));
}

#[test]
fn eigen_lowrank_runs() {
    eigen_lowrank::run_example().expect("eigen_lowrank example should run");
}

#[allow(dead_code)]
mod contaminated_wsbm {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/contaminated_wsbm.rs"));
}

#[test]
fn contaminated_wsbm_runs() {
    contaminated_wsbm::run_example().expect("contaminated_wsbm example should run");
}

#[allow(dead_code)]
mod mlqe_robustness {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/mlqe_robustness.rs"));
}

#[test]
fn mlqe_robustness_runs() {
    mlqe_robustness::run_example().expect("mlqe_robustness example should run");
}

#[allow(dead_code)]
mod low_rank_pipeline {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/low_rank_pipeline.rs"));
}

#[test]
fn low_rank_pipeline_runs() {
    low_rank_pipeline::run_example().expect("low_rank_pipeline example should run");
}

#[allow(dead_code)]
mod dimension_selection {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/dimension_selection.rs"));
}

#[test]
fn dimension_selection_runs() {
    dimension_selection::run_example().expect("dimension_selection example should run");
}

#[allow(dead_code)]
mod monte_carlo_contamination {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/monte_carlo_contamination.rs"));
}

#[test]
fn monte_carlo_contamination_runs() {
    monte_carlo_contamination::run_example().expect("monte_carlo_contamination example should run");
}

#[allow(dead_code)]
mod q_sweep {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/q_sweep.rs"));
}

#[test]
fn q_sweep_runs() {
    q_sweep::run_example().expect("q_sweep example should run");
}

#[allow(dead_code)]
mod variance_ratio {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/variance_ratio.rs"));
}

#[test]
fn variance_ratio_runs() {
    variance_ratio::run_example().expect("variance_ratio example should run");
}

#[allow(dead_code)]
mod graph_files {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/graph_files.rs"));
}

#[test]
fn graph_files_runs() {
    graph_files::run_example().expect("graph_files example should run");
}
