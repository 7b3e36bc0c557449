//! Follow the Skipping Leader next to plain FTL on the same stream.

use online_pca::harness::{run, ExperimentConfig, LearnerKind, LearnerParams};
use online_pca::streams::{StreamKind, StreamSpec};

fn main() -> online_pca::Result<()> {
    let stream = StreamSpec::new(StreamKind::SparseIid { spike: 1.0 }, 12, 2000, 5);
    for kind in [LearnerKind::Ftl, LearnerKind::Skip, LearnerKind::Fpl] {
        let cfg = ExperimentConfig::new(LearnerParams::new(kind), stream.clone(), 1).with_seeds(0..8);
        let last = *run(&cfg)?.last();
        println!("{kind}: regret {:.2} ± {:.2}", last.regret_mean, last.regret_stderr);
    }
    Ok(())
}
