//! CSV, binary snapshot and manifest writers.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::Result;
use crate::sim::{SimConfig, Trajectory};

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes a CSV file with a header row. Cells are written verbatim.
pub fn write_csv<I, R>(path: &Path, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = R>,
    R: AsRef<[String]>,
{
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "{}", header.join(","))?;
    for row in rows {
        writeln!(w, "{}", row.as_ref().join(","))?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `(x, y)` pairs with 17-digit floats.
pub fn write_series(path: &Path, header: [&str; 2], series: &[(f64, f64)]) -> Result<()> {
    write_csv(
        path,
        &header,
        series.iter().map(|&(a, b)| vec![fmt_f64(a), fmt_f64(b)]),
    )
}

/// Row-major little-endian `f64` values.
pub fn write_f64_le(path: &Path, values: &[f64]) -> Result<()> {
    let mut bytes = Vec::with_capacity(8 * values.len());
    for v in values {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    fs::write(path, bytes)?;
    Ok(())
}

pub fn read_f64_le(path: &Path) -> Result<Vec<f64>> {
    let bytes = fs::read(path)?;
    if bytes.len() % 8 != 0 {
        return Err(crate::Error::Config(format!(
            "{} is not a whole number of f64 values",
            path.display()
        )));
    }
    Ok(bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect())
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct SnapshotMeta {
    #[serde(rename = "M1")]
    pub m1: usize,
    #[serde(rename = "M2")]
    pub m2: usize,
    pub time: f64,
    pub alpha: f64,
    pub scheme: String,
}

/// Writes `energy.csv`, `maxval.csv`, `iters.csv` and one `u_t<label>.f64` plus
/// `u_t<label>.json` per snapshot into `dir`.
pub fn write_trajectory(dir: &Path, config: &SimConfig, tr: &Trajectory) -> Result<()> {
    fs::create_dir_all(dir)?;
    write_series(&dir.join("energy.csv"), ["t", "E"], &tr.energy_series)?;
    write_series(&dir.join("maxval.csv"), ["t", "max_abs_u"], &tr.max_series)?;
    write_csv(
        &dir.join("iters.csv"),
        &["step", "iterations"],
        tr.pcg_iters
            .iter()
            .enumerate()
            .map(|(k, it)| vec![(k + 1).to_string(), it.to_string()]),
    )?;
    let (m1, m2) = tr.shape;
    for snap in &tr.snapshots {
        write_f64_le(&dir.join(format!("u_t{}.f64", snap.label)), &snap.field)?;
        let meta = SnapshotMeta {
            m1,
            m2,
            time: snap.time,
            alpha: config.alpha.get(),
            scheme: config.scheme.to_string(),
        };
        write_json(&dir.join(format!("u_t{}.json", snap.label)), &meta)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let mantissa = s.split('e').next().unwrap().replace(['-', '.'], "");
            assert_eq!(mantissa.len(), 17);
        }
    }

    #[test]
    fn binary_round_trip() {
        let dir = std::env::temp_dir().join(format!("fracsolve-bin-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let p = dir.join("x.f64");
        let v = vec![1.5, -0.25, f64::MIN_POSITIVE];
        write_f64_le(&p, &v).unwrap();
        assert_eq!(fs::read(&p).unwrap()[..8], 1.5f64.to_le_bytes());
        assert_eq!(read_f64_le(&p).unwrap(), v);
        fs::remove_dir_all(&dir).unwrap();
    }
}
