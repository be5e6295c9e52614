// Plot-ready CSV of profile samples.

use std::fs::File;
use std::path::Path;

use super::CliError;
use crate::criteria::{CriterionProfile, ProfileSample};

pub const CSV_HEADER: [&str; 6] = ["ray_index", "theta", "j", "r", "value", "fitted_exponent"];

fn number(x: f64) -> String {
    format!("{x:?}")
}

fn write_rows<'a>(
    profile: &CriterionProfile,
    rows: impl Iterator<Item = &'a ProfileSample>,
    path: &Path,
) -> Result<usize, CliError> {
    let rows: Vec<&ProfileSample> = rows.collect();
    if rows.is_empty() {
        return Err(CliError::Output {
            path: path.to_path_buf(),
            detail: "no samples to write".into(),
        });
    }
    let io = |e: std::io::Error| CliError::Output {
        path: path.to_path_buf(),
        detail: e.to_string(),
    };
    let file = File::create(path).map_err(io)?;
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(file);
    let csv_err = |e: csv::Error| CliError::Output {
        path: path.to_path_buf(),
        detail: e.to_string(),
    };
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for s in &rows {
        let exponent = profile
            .ray_fits
            .get(s.ray)
            .and_then(|f| f.exponent())
            .map(number)
            .unwrap_or_default();
        w.write_record([
            s.ray.to_string(),
            number(s.theta),
            s.j.to_string(),
            number(s.r),
            number(s.value),
            exponent,
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(io)?;
    Ok(rows.len())
}

/// One row per sample, ray-major. Returns the number of rows written.
pub fn emit_profile_csv(profile: &CriterionProfile, path: &Path) -> Result<usize, CliError> {
    write_rows(profile, profile.samples.iter(), path)
}

/// Only the samples in `D_N = {||T* K_z|| > n}`; an empty level set is an
/// error and no file is created.
pub fn emit_level_set_csv(profile: &CriterionProfile, n: f64, path: &Path) -> Result<usize, CliError> {
    write_rows(profile, profile.samples.iter().filter(|s| s.unweighted > n), path)
}
