//! Writes a dense stream to the text format, reads it back and runs on it.

use online_pca::harness::{run, ExperimentConfig, LearnerKind, LearnerParams};
use online_pca::streams::{generate, write_instance_file, StreamKind, StreamSpec};

fn main() -> online_pca::Result<()> {
    let dir = std::env::temp_dir().join("online-pca-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("dense.txt");
    let source = StreamSpec::new(
        StreamKind::DenseIid {
            profile: Some(vec![1.0, 0.5, 0.2, 0.05]),
            rotate_each_trial: false,
        },
        4,
        200,
        9,
    );
    write_instance_file(&path, &generate(&source)?)?;
    println!("wrote {}", path.display());

    let stream = StreamSpec::new(StreamKind::FromFile { path }, 4, 200, 0);
    let cfg = ExperimentConfig::new(LearnerParams::new(LearnerKind::Fpl), stream, 1).with_seeds(0..5);
    let last = *run(&cfg)?.last();
    println!("regret {:.2} ± {:.2} against {:.2}", last.regret_mean, last.regret_stderr, last.comparator);
    Ok(())
}
