// Sample a population of contaminated weighted blockmodel graphs and compare
// the empirical edge means to the mixture mean.

use gre::{sample_population, ContaminationSpec, Stream, WeightFamily, WsbmSpec};

pub fn run_example() -> gre::Result<()> {
    let spec = WsbmSpec::new(
        vec![vec![4.0, 2.0], vec![2.0, 7.0]],
        vec![0.5, 0.5],
        WeightFamily::Exponential,
    )?;
    let cont = ContaminationSpec::new(vec![vec![9.0, 6.0], vec![6.0, 13.0]], 0.1)?;
    let pop = sample_population(&spec, &cont, 60, 200, Stream::new(7))?;

    let sizes = (0..2).map(|k| pop.tau.labels().iter().filter(|&&l| l == k).count());
    println!("block sizes: {:?}", sizes.collect::<Vec<_>>());

    let (i, j) = pop.tau.first_pair_in_block(0).expect("block 0 has two vertices");
    let mean = pop.graphs.iter().map(|g| g.get(i, j)).sum::<f64>() / pop.graphs.len() as f64;
    let eps = cont.epsilon();
    let mixture = (1.0 - eps) * pop.p.get(i, j) + eps * pop.c.get(i, j);
    println!("edge ({i},{j}): P = {}, C = {}, sample mean {mean:.3}, mixture mean {mixture:.3}",
        pop.p.get(i, j), pop.c.get(i, j));
    println!("draw digest {:016x}", pop.digest());
    Ok(())
}

#[allow(dead_code)]
fn main() -> gre::Result<()> {
    run_example()
}
