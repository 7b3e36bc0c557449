//! Perturbed leader on a sparse i.i.d. stream: the regret curve.

use online_pca::harness::{run, ExperimentConfig, LearnerKind, LearnerParams};
use online_pca::streams::{StreamKind, StreamSpec};

fn main() -> online_pca::Result<()> {
    let stream = StreamSpec::new(StreamKind::SparseIid { spike: 2.0 }, 16, 4000, 0);
    let mut cfg = ExperimentConfig::new(LearnerParams::new(LearnerKind::Fpl), stream, 2).with_seeds(0..10);
    cfg.report_every = 500;
    let out = run(&cfg)?;
    println!("sigma2 = {:.5}", out.resolved.sigma2.unwrap());
    println!("{:>6} {:>12} {:>10} {:>8}", "t", "comparator", "regret", "stderr");
    for r in &out.records {
        println!("{:>6} {:>12.2} {:>10.2} {:>8.2}", r.t, r.comparator, r.regret_mean, r.regret_stderr);
    }
    Ok(())
}
