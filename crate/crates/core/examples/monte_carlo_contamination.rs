// Paired Monte Carlo comparison of the four estimators across contamination
// levels, printed as the same CSV the `simulate` command writes.

use gre::eval::{run_experiment, Estimator, Grid, McConfig};
use gre::io::write_mse_csv;
use gre::{ContaminationSpec, DimMode, PipelineConfig, QParam, WeightFamily, WsbmSpec};

pub fn config(replicates: usize, n: usize) -> gre::Result<McConfig> {
    Ok(McConfig {
        spec: WsbmSpec::new(
            vec![vec![4.0, 2.0], vec![2.0, 7.0]],
            vec![0.5, 0.5],
            WeightFamily::Exponential,
        )?,
        contamination: ContaminationSpec::new(vec![vec![9.0, 6.0], vec![6.0, 13.0]], 0.0)?,
        grid: Grid {
            epsilons: vec![0.0, 0.1, 0.2, 0.4],
            qs: vec![0.9],
            ns: vec![n],
            ms: vec![20],
        },
        replicates,
        base_seed: 2024,
        pipeline: PipelineConfig::new(QParam::new(0.9)?, DimMode::Fixed(2)),
    })
}

pub fn run_example() -> gre::Result<()> {
    let result = run_experiment(&config(8, 40)?)?;
    write_mse_csv(std::io::stdout().lock(), &result)?;
    for cell in &result.cells {
        println!(
            "epsilon {:.2}: mlqe beats mle in {:.0}% of replicates",
            cell.epsilon,
            100.0 * cell.win_fraction(Estimator::Mlqe, Estimator::Mle)
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> gre::Result<()> {
    run_example()
}
