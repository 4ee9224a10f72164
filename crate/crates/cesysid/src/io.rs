//! CSV and JSON persistence plus flat key=value configuration files.
//!
//! Trajectory CSVs carry a header row whose first column is time; report
//! JSON follows a versioned schema and both serializations are
//! byte-deterministic for identical inputs.

use crate::dynsys::StateTrajectory;
use crate::error::{Error, Result};
use crate::identify::IdentificationReport;
use ndarray::{Array1, Array2};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

/// Output format for identification reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    /// Long format: one row per (derivative, term) pair.
    Csv,
}

impl ReportFormat {
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(Error::Config(format!("unknown report format '{other}' (json or csv)"))),
        }
    }
}

/// Parse a decimal number, also accepting fractions like "8/3".
pub fn parse_number(text: &str) -> Result<f64> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let n: f64 = num
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad numerator in '{text}'")))?;
        let d: f64 = den
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad denominator in '{text}'")))?;
        if d == 0.0 {
            return Err(Error::Config(format!("zero denominator in '{text}'")));
        }
        return Ok(n / d);
    }
    text.parse().map_err(|_| Error::Config(format!("not a number: '{text}'")))
}

fn csv_err(path: &Path, line: u64, msg: impl Into<String>) -> Error {
    Error::CsvData { path: path.display().to_string(), line, msg: msg.into() }
}

/// A parsed data row with the 1-based file line it came from.
type NumberedRow = (u64, Vec<f64>);

fn read_rows(path: &Path) -> Result<(Vec<String>, Vec<NumberedRow>)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| match e.kind() {
            csv::ErrorKind::Io(_) => Error::InvalidInput(format!(
                "cannot open '{}': file missing or unreadable",
                path.display()
            )),
            _ => csv_err(path, 0, e.to_string()),
        })?;

    let mut records = reader.records();
    let header = match records.next() {
        Some(Ok(rec)) => rec.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        Some(Err(e)) => return Err(csv_err(path, 1, e.to_string())),
        None => return Err(csv_err(path, 1, "empty file, expected a header row")),
    };

    let mut rows = Vec::new();
    for (idx, record) in records.enumerate() {
        let line = (idx + 2) as u64;
        let record = record.map_err(|e| csv_err(path, line, e.to_string()))?;
        if record.len() != header.len() {
            return Err(csv_err(
                path,
                line,
                format!("expected {} fields, found {}", header.len(), record.len()),
            ));
        }
        let mut values = Vec::with_capacity(record.len());
        for (col, field) in record.iter().enumerate() {
            let v: f64 = field.parse().map_err(|_| {
                csv_err(path, line, format!("column '{}': not a number: '{field}'", header[col]))
            })?;
            if !v.is_finite() {
                return Err(csv_err(
                    path,
                    line,
                    format!("column '{}': non-finite value '{field}'", header[col]),
                ));
            }
            values.push(v);
        }
        rows.push((line, values));
    }
    Ok((header, rows))
}

/// Read a trajectory CSV: header row, time in the first column.
pub fn read_trajectory_csv(path: impl AsRef<Path>) -> Result<StateTrajectory> {
    let path = path.as_ref();
    let (header, rows) = read_rows(path)?;
    if header.len() < 2 {
        return Err(csv_err(path, 1, "need a time column and at least one state column"));
    }
    if rows.is_empty() {
        return Err(csv_err(path, 1, "no data rows"));
    }

    let t = rows.len();
    let dim = header.len() - 1;
    let mut times = Array1::zeros(t);
    let mut states = Array2::zeros((t, dim));
    for (i, (_, values)) in rows.iter().enumerate() {
        times[i] = values[0];
        for j in 0..dim {
            states[(i, j)] = values[j + 1];
        }
    }

    // Uniform-spacing check up front so the diagnostic can name the line.
    if t > 1 {
        // fields already validated finite
        let dt = times[1] - times[0];
        if dt <= 0.0 {
            return Err(csv_err(path, rows[1].0, "time column must be strictly increasing"));
        }
        for i in 1..t - 1 {
            let step = times[i + 1] - times[i];
            let scale = dt.abs().max(times[i + 1].abs()).max(1.0);
            if (step - dt).abs() > 1e-12 * scale {
                return Err(csv_err(
                    path,
                    rows[i + 1].0,
                    format!("time step {step} differs from expected {dt}"),
                ));
            }
        }
    }

    StateTrajectory::new(times, states, header[1..].to_vec())
}

/// Write a trajectory as CSV with a `t` column followed by the states.
pub fn write_trajectory_csv(traj: &StateTrajectory, path: impl AsRef<Path>) -> Result<()> {
    let mut writer = csv::Writer::from_path(path.as_ref())?;
    let mut header = vec!["t".to_string()];
    header.extend(traj.var_names().iter().cloned());
    writer.write_record(&header)?;
    for (i, row) in traj.states().rows().into_iter().enumerate() {
        let mut record = vec![format!("{}", traj.times()[i])];
        record.extend(row.iter().map(|v| format!("{v}")));
        writer.write_record(&record)?;
    }
    writer.flush()?;
    Ok(())
}

/// Read a plain numeric matrix CSV (header row, every column data).
pub fn read_matrix_csv(path: impl AsRef<Path>) -> Result<(Vec<String>, Array2<f64>)> {
    let path = path.as_ref();
    let (header, rows) = read_rows(path)?;
    if rows.is_empty() {
        return Err(csv_err(path, 1, "no data rows"));
    }
    let mut data = Array2::zeros((rows.len(), header.len()));
    for (i, (_, values)) in rows.iter().enumerate() {
        for (j, &v) in values.iter().enumerate() {
            data[(i, j)] = v;
        }
    }
    Ok((header, data))
}

/// Deterministic JSON rendering of a report.
pub fn report_to_json(report: &IdentificationReport) -> Result<String> {
    let mut out = serde_json::to_string_pretty(report)?;
    out.push('\n');
    Ok(out)
}

/// Long-format CSV rendering: `derivative,term,mi_nats,rank,p_value`,
/// empty fields for not-applicable values.
pub fn report_to_csv(report: &IdentificationReport) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(["derivative", "term", "mi_nats", "rank", "p_value"])?;
    for ranking in &report.derivatives {
        for term in &ranking.terms {
            writer.write_record([
                ranking.derivative.as_str(),
                term.term.as_str(),
                &term.mi_nats.map(|v| format!("{v}")).unwrap_or_default(),
                &term.rank.to_string(),
                &term.p_value.map(|v| format!("{v}")).unwrap_or_default(),
            ])?;
        }
    }
    let bytes = writer.into_inner().map_err(|e| Error::Config(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Write a report to `path` in the requested format.
pub fn write_report(
    report: &IdentificationReport,
    path: impl AsRef<Path>,
    format: ReportFormat,
) -> Result<()> {
    let rendered = match format {
        ReportFormat::Json => report_to_json(report)?,
        ReportFormat::Csv => report_to_csv(report)?,
    };
    let mut file = std::fs::File::create(path.as_ref())?;
    file.write_all(rendered.as_bytes())?;
    Ok(())
}

/// Parse a report back from its JSON rendering.
pub fn report_from_json(text: &str) -> Result<IdentificationReport> {
    Ok(serde_json::from_str(text)?)
}

/// Read a flat `key = value` configuration file. `#` starts a comment;
/// blank lines are ignored; later keys override earlier ones.
pub fn read_config_file(path: impl AsRef<Path>) -> Result<BTreeMap<String, String>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| {
        Error::Config(format!("cannot read config file '{}': {e}", path.display()))
    })?;
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Config(format!(
                "{}:{}: expected key=value, got '{raw}'",
                path.display(),
                idx + 1
            )));
        };
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identify::{identify, PermutationConfig};
    use crate::term_library::TermMode;
    use ndarray::array;
    use tempfile::tempdir;

    fn write_file(dir: &tempfile::TempDir, name: &str, body: &str) -> std::path::PathBuf {
        let path = dir.path().join(name);
        let mut f = std::fs::File::create(&path).unwrap();
        f.write_all(body.as_bytes()).unwrap();
        path
    }

    #[test]
    fn parses_a_small_trajectory() {
        let dir = tempdir().unwrap();
        let path = write_file(&dir, "t.csv", "t,x\n0,1\n0.01,2\n0.02,3\n");
        let traj = read_trajectory_csv(&path).unwrap();
        assert_eq!(traj.n_samples(), 3);
        assert!((traj.dt() - 0.01).abs() < 1e-15);
        assert_eq!(traj.var_names(), &["x".to_string()]);
    }

    #[test]
    fn time_jump_names_the_line() {
        let dir = tempdir().unwrap();
        let path = write_file(&dir, "t.csv", "t,x\n0,1\n0.01,2\n0.5,3\n0.51,4\n");
        match read_trajectory_csv(&path) {
            Err(Error::CsvData { line, .. }) => assert_eq!(line, 4),
            other => panic!("expected spacing error, got {other:?}"),
        }
    }

    #[test]
    fn bad_number_names_line_and_column() {
        let dir = tempdir().unwrap();
        let path = write_file(&dir, "t.csv", "t,x\n0,1\n0.01,oops\n");
        match read_trajectory_csv(&path) {
            Err(Error::CsvData { line, msg, .. }) => {
                assert_eq!(line, 3);
                assert!(msg.contains('x'), "{msg}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn missing_file_is_reported() {
        assert!(read_trajectory_csv("/nonexistent/nowhere.csv").is_err());
    }

    #[test]
    fn trajectory_round_trips_exactly() {
        let dir = tempdir().unwrap();
        let times = ndarray::Array1::from_iter((0..50).map(|i| i as f64 * 0.25));
        let states =
            Array2::from_shape_fn((50, 2), |(i, j)| ((i * 7 + j) as f64 * 0.37).sin() * 12.5);
        let traj = StateTrajectory::new(
            times,
            states,
            vec!["x".into(), "y".into()],
        )
        .unwrap();
        let path = dir.path().join("round.csv");
        write_trajectory_csv(&traj, &path).unwrap();
        let back = read_trajectory_csv(&path).unwrap();
        assert_eq!(traj, back);
    }

    #[test]
    fn matrix_reader_takes_all_columns() {
        let dir = tempdir().unwrap();
        let path = write_file(&dir, "m.csv", "a,b\n1,2\n3,4\n");
        let (names, data) = read_matrix_csv(&path).unwrap();
        assert_eq!(names, vec!["a".to_string(), "b".to_string()]);
        assert_eq!(data, array![[1.0, 2.0], [3.0, 4.0]]);
    }

    fn sample_report() -> IdentificationReport {
        let spec = crate::dynsys::SystemSpec::lorenz(10.0, 28.0, 8.0 / 3.0).unwrap();
        let config = crate::dynsys::SimConfig::new(vec![1.0, 2.0, 3.0], 3.0, 100);
        let traj = crate::dynsys::integrate_rk4(&spec, &config).unwrap();
        identify(
            &traj,
            &TermMode::Paper,
            3,
            Some(&PermutationConfig { count: 20, alpha: 0.05, seed: 1 }),
        )
        .unwrap()
    }

    #[test]
    fn json_round_trips_structurally() {
        let report = sample_report();
        let json = report_to_json(&report).unwrap();
        let back = report_from_json(&json).unwrap();
        assert_eq!(report, back);
    }

    #[test]
    fn csv_report_has_long_format_header() {
        let report = sample_report();
        let csv = report_to_csv(&report).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "derivative,term,mi_nats,rank,p_value");
        // 3 derivatives x 6 terms
        assert_eq!(csv.lines().count(), 1 + 18);
        // p-values populated when permutation testing ran
        let row = csv.lines().nth(1).unwrap();
        assert!(!row.ends_with(','), "expected a p_value field: {row}");
    }

    #[test]
    fn csv_report_leaves_p_empty_without_permutations() {
        let mut report = sample_report();
        for d in &mut report.derivatives {
            for t in &mut d.terms {
                t.p_value = None;
            }
        }
        let csv = report_to_csv(&report).unwrap();
        assert!(csv.lines().nth(1).unwrap().ends_with(','));
    }

    #[test]
    fn empty_term_list_still_serializes() {
        let mut report = sample_report();
        for d in &mut report.derivatives {
            d.terms.clear();
        }
        report.metadata.term_names.clear();
        let json = report_to_json(&report).unwrap();
        let back = report_from_json(&json).unwrap();
        assert!(back.derivatives.iter().all(|d| d.terms.is_empty()));
        assert_eq!(report_to_csv(&report).unwrap().lines().count(), 1);
    }

    #[test]
    fn config_file_parses_and_overrides() {
        let dir = tempdir().unwrap();
        let path = write_file(
            &dir,
            "run.conf",
            "# comment\nseed = 7\nhorizon=30 # trailing comment\nseed = 9\n",
        );
        let map = read_config_file(&path).unwrap();
        assert_eq!(map.get("seed"), Some(&"9".to_string()));
        assert_eq!(map.get("horizon"), Some(&"30".to_string()));
    }

    #[test]
    fn malformed_config_line_errors() {
        let dir = tempdir().unwrap();
        let path = write_file(&dir, "bad.conf", "this is not a pair\n");
        assert!(matches!(read_config_file(&path), Err(Error::Config(_))));
    }

    #[test]
    fn numbers_parse_with_fractions() {
        assert_eq!(parse_number("2.6667").unwrap(), 2.6667);
        assert_eq!(parse_number("8/3").unwrap(), 8.0 / 3.0);
        assert_eq!(parse_number(" 8 / 3 ").unwrap(), 8.0 / 3.0);
        assert!(parse_number("8/0").is_err());
        assert!(parse_number("abc").is_err());
    }
}
