// Effect of the Lq parameter at a fixed contamination level, with and
// without the low-rank step.

use gre::eval::{run_experiment, Estimator, Grid, McConfig};
use gre::{ContaminationSpec, DimMode, PipelineConfig, QParam, WeightFamily, WsbmSpec};

pub fn run_example() -> gre::Result<()> {
    let cfg = McConfig {
        spec: WsbmSpec::new(
            vec![vec![4.0, 2.0], vec![2.0, 7.0]],
            vec![0.5, 0.5],
            WeightFamily::Exponential,
        )?,
        contamination: ContaminationSpec::new(vec![vec![9.0, 6.0], vec![6.0, 13.0]], 0.0)?,
        grid: Grid {
            epsilons: vec![0.1],
            qs: vec![0.5, 0.6, 0.7, 0.8, 0.9, 1.0],
            ns: vec![40],
            ms: vec![20],
        },
        replicates: 5,
        base_seed: 99,
        pipeline: PipelineConfig::new(QParam::MLE, DimMode::Fixed(2)),
    };
    let result = run_experiment(&cfg)?;
    println!("{:>5} {:>10} {:>10}", "q", "mlqe", "ase_mlqe");
    for cell in &result.cells {
        println!(
            "{:>5.2} {:>10.4} {:>10.4}",
            cell.q,
            cell.stats_for(Estimator::Mlqe).mse_mean,
            cell.stats_for(Estimator::AseMlqe).mse_mean
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> gre::Result<()> {
    run_example()
}
