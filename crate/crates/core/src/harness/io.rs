//! Result files: the regret CSV, the sweep CSV and the run manifest.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::Result;
use crate::harness::{ExperimentConfig, RegretRecord, Resolved, SweepAxis, SweepRow};
use crate::streams::StreamKind;

pub const CSV_HEADER: &str =
    "t,cumulative_gain_mean,cumulative_gain_stderr,comparator,regret_mean,regret_stderr,wall_ms_per_trial";

pub const SWEEP_HEADER: &str =
    "value,t,comparator,cumulative_gain_mean,regret_mean,regret_stderr,wall_ms_per_trial";

/// Decimal scientific notation with 17 significant digits.
pub fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn records_to_csv(records: &[RegretRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        let row = [
            r.cumulative_gain_mean,
            r.cumulative_gain_stderr,
            r.comparator,
            r.regret_mean,
            r.regret_stderr,
            r.wall_ms_per_trial,
        ]
        .map(fmt_real)
        .join(",");
        out.push_str(&format!("{},{row}\n", r.t));
    }
    out
}

pub fn write_records(path: &Path, records: &[RegretRecord]) -> Result<()> {
    fs::write(path, records_to_csv(records))?;
    Ok(())
}

pub fn sweep_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        let tail = [
            r.comparator,
            r.cumulative_gain_mean,
            r.regret_mean,
            r.regret_stderr,
            r.wall_ms_per_trial,
        ]
        .map(fmt_real)
        .join(",");
        out.push_str(&format!("{},{},{tail}\n", fmt_real(r.value), r.horizon));
    }
    out
}

pub fn write_sweep(path: &Path, rows: &[SweepRow]) -> Result<()> {
    fs::write(path, sweep_to_csv(rows))?;
    Ok(())
}

/// `<out>.manifest` beside the CSV.
pub fn manifest_path(csv: &Path) -> PathBuf {
    let mut s = csv.as_os_str().to_owned();
    s.push(".manifest");
    PathBuf::from(s)
}

fn stream_flag(kind: &StreamKind) -> String {
    match kind {
        StreamKind::SparseIid { .. } => "sparse-iid".into(),
        StreamKind::DenseIid { .. } => "dense-iid".into(),
        StreamKind::AdversarialAlternating { .. } => "adversarial".into(),
        StreamKind::DiagonalExpert { .. } => "diagonal".into(),
        StreamKind::FromFile { path } => format!("file:{}", path.display()),
    }
}

/// Key/value lines describing a run: every flag, the resolved defaults,
/// the library version and the platform.
pub fn manifest_entries(config: &ExperimentConfig, resolved: &Resolved) -> Vec<(String, String)> {
    let l = &config.learner;
    let s = &config.stream;
    let seeds: Vec<String> = config.seeds.iter().map(u64::to_string).collect();
    let mut e: Vec<(String, String)> = vec![
        ("learner".into(), l.kind.to_string()),
        ("stream".into(), stream_flag(&s.kind)),
        ("n".into(), s.n.to_string()),
        ("k".into(), config.k.to_string()),
        ("t_horizon".into(), s.horizon.to_string()),
        ("stream_seed".into(), s.seed.to_string()),
        ("sigma2".into(), l.sigma2.to_string()),
        ("noise_mode".into(), l.noise_mode.to_string()),
        ("seeds".into(), config.seeds.len().to_string()),
        ("seed_list".into(), seeds.join(" ")),
        ("report_every".into(), config.report_every.to_string()),
        ("eigen_max_iterations".into(), l.eigen.max_iterations.to_string()),
        ("eigen_convergence_tol".into(), l.eigen.convergence_tol.to_string()),
        ("eigen_tie_break_seed".into(), l.eigen.seed.to_string()),
        ("instances".into(), if resolved.sparse { "sparse" } else { "dense" }.into()),
    ];
    match &s.kind {
        StreamKind::SparseIid { spike } => e.push(("spike".into(), spike.to_string())),
        StreamKind::DenseIid {
            profile,
            rotate_each_trial,
        } => {
            let p = profile
                .as_ref()
                .map(|p| p.iter().map(f64::to_string).collect::<Vec<_>>().join(" "))
                .unwrap_or_else(|| "uniform".into());
            e.push(("eigenvalue_profile".into(), p));
            e.push(("rotate_each_trial".into(), rotate_each_trial.to_string()));
        }
        _ => {}
    }
    if let Some(v) = resolved.sigma2 {
        e.push(("resolved_sigma2".into(), fmt_real(v)));
    }
    if let Some(v) = resolved.eta {
        e.push(("resolved_eta".into(), fmt_real(v)));
        e.push(("baseline".into(), "reference".into()));
    }
    e.push(("library_version".into(), env!("CARGO_PKG_VERSION").into()));
    e.push((
        "platform".into(),
        format!("{}-{}", std::env::consts::ARCH, std::env::consts::OS),
    ));
    e
}

pub fn write_manifest(path: &Path, entries: &[(String, String)]) -> Result<()> {
    let body: String = entries.iter().map(|(k, v)| format!("{k}={v}\n")).collect();
    fs::write(path, body)?;
    Ok(())
}

/// Parses `key=value` lines back.
pub fn read_manifest(path: &Path) -> Result<Vec<(String, String)>> {
    Ok(fs::read_to_string(path)?
        .lines()
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect())
}

/// Appends a sweep-specific line to a manifest entry list.
pub fn with_sweep(mut entries: Vec<(String, String)>, axis: SweepAxis, values: &[f64]) -> Vec<(String, String)> {
    entries.push(("sweep_axis".into(), axis.to_string()));
    entries.push((
        "sweep_values".into(),
        values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "),
    ));
    entries
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let r = RegretRecord {
            t: 5,
            cumulative_gain_mean: 1.0 / 3.0,
            cumulative_gain_stderr: 0.0,
            comparator: 2.0,
            regret_mean: 5.0 / 3.0,
            regret_stderr: 0.0,
            wall_ms_per_trial: 0.25,
        };
        let csv = records_to_csv(&[r]);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row.len(), 7);
        assert_eq!(row[0], "5");
        let mantissa = row[1].split('e').next().unwrap().replace(['.', '-'], "");
        assert!(mantissa.len() >= 12);
        assert_eq!(row[1].parse::<f64>().unwrap(), 1.0 / 3.0);
    }

    #[test]
    fn manifest_path_appends_suffix() {
        assert_eq!(manifest_path(Path::new("out/run.csv")), PathBuf::from("out/run.csv.manifest"));
    }
}
