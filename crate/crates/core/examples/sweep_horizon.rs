//! Final regret against the horizon, with the fitted log-log slope.

use online_pca::eigen::EigenConfig;
use online_pca::harness::{loglog_slope, sweep, ExperimentConfig, LearnerKind, LearnerParams, SweepAxis};
use online_pca::streams::{StreamKind, StreamSpec};

fn main() -> online_pca::Result<()> {
    let stream = StreamSpec::new(
        StreamKind::AdversarialAlternating {
            tie_break: EigenConfig::default(),
        },
        8,
        4000,
        0,
    );
    let cfg = ExperimentConfig::new(LearnerParams::new(LearnerKind::Fpl), stream, 1).with_seeds(0..10);
    let horizons = [500.0, 1000.0, 2000.0, 4000.0];
    let rows = sweep(&cfg, SweepAxis::Horizon, &horizons)?;
    for r in &rows {
        println!("T={:<5} regret {:6.2} ± {:.2}", r.horizon, r.regret_mean, r.regret_stderr);
    }
    let regrets: Vec<f64> = rows.iter().map(|r| r.regret_mean).collect();
    if let Some(s) = loglog_slope(&horizons, &regrets) {
        println!("slope {s:.3}");
    }
    Ok(())
}
