//! The alternating adversary drives plain FTL to linear regret while the
//! perturbed leader stays sublinear.

use online_pca::eigen::EigenConfig;
use online_pca::harness::{run_on, ExperimentConfig, LearnerKind, LearnerParams};
use online_pca::streams::{generate, StreamKind, StreamSpec};

fn main() -> online_pca::Result<()> {
    let stream = StreamSpec::new(
        StreamKind::AdversarialAlternating {
            tie_break: EigenConfig::default(),
        },
        2,
        1000,
        0,
    );
    let instances = generate(&stream)?;
    for kind in [LearnerKind::Ftl, LearnerKind::Fpl] {
        let cfg = ExperimentConfig::new(LearnerParams::new(kind), stream.clone(), 1);
        let out = run_on(&cfg, &instances)?;
        let last = out.last();
        println!("{kind}: regret {:.1} of comparator {:.1}", last.regret_mean, last.comparator);
    }
    Ok(())
}
