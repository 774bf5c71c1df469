//! CSV reading and writing.
//!
//! Numbers are written as `{:.16e}` (17 significant digits), which reads back
//! to the identical `f64`.

use std::path::Path;

use anyhow::{bail, Context};
use ndarray::{Array2, ArrayView2};

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn header(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// Writes `header` followed by one row per matrix row and, when given, one
/// extra column per row.
pub fn write_matrix(
    path: &Path,
    header: &[String],
    m: ArrayView2<f64>,
    extra: Option<(&str, &[f64])>,
) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_path(path)
        .with_context(|| format!("cannot create {}", path.display()))?;
    let mut head = header.to_vec();
    if let Some((name, _)) = extra {
        head.push(name.to_string());
    }
    w.write_record(&head)?;
    for (i, row) in m.rows().into_iter().enumerate() {
        let mut rec: Vec<String> = row.iter().map(|&v| fmt_f64(v)).collect();
        if let Some((_, col)) = extra {
            rec.push(fmt_f64(col[i]));
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a numeric CSV with a header row.
pub fn read_matrix(path: &Path) -> anyhow::Result<Array2<f64>> {
    let mut r =
        csv::Reader::from_path(path).with_context(|| format!("cannot read {}", path.display()))?;
    let width = r.headers()?.len();
    let mut values = Vec::new();
    let mut rows = 0;
    for (line, rec) in r.records().enumerate() {
        let rec = rec.with_context(|| format!("{}: malformed row {}", path.display(), line + 1))?;
        if rec.len() != width {
            bail!(
                "{}: row {} has {} columns, header has {width}",
                path.display(),
                line + 1,
                rec.len()
            );
        }
        for field in rec.iter() {
            let v: f64 = field.trim().parse().with_context(|| {
                format!(
                    "{}: row {}: `{field}` is not a number",
                    path.display(),
                    line + 1
                )
            })?;
            values.push(v);
        }
        rows += 1;
    }
    if rows == 0 {
        bail!("{}: no data rows", path.display());
    }
    Ok(Array2::from_shape_vec((rows, width), values)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.csv");
        let m = ndarray::array![[0.1, 1.0 / 3.0], [f64::MIN_POSITIVE, -2.5e300]];
        write_matrix(&path, &header("f", 2), m.view(), None).unwrap();
        assert_eq!(read_matrix(&path).unwrap(), m);
    }

    #[test]
    fn rejects_ragged_and_empty_files() {
        let dir = tempfile::tempdir().unwrap();
        let ragged = dir.path().join("r.csv");
        std::fs::write(&ragged, "f1,f2\n1,2\n3\n").unwrap();
        assert!(read_matrix(&ragged).is_err());
        let empty = dir.path().join("e.csv");
        std::fs::write(&empty, "f1,f2\n").unwrap();
        assert!(read_matrix(&empty)
            .unwrap_err()
            .to_string()
            .contains("no data"));
    }
}
