//! Result, trace and benchmark-table serialization.
//!
//! Every file is delimited text with a single header line followed by one
//! record per line; a JSON document with the same fields is written alongside
//! for programmatic use. Numbers are printed with Rust's shortest round-trip
//! formatting (exponent form outside `[1e-4, 1e16)`), so parsing a field gives
//! back the exact value.
//!
//! Result columns: `objective, optimizer, seed, best_value, distance_to_optimum,
//! evaluations, steps, termination, wall_time_s, best_point, best_bits`.
//! `best_point` is `;`-separated. Empty fields mean "not applicable" (no known
//! optimum, no bit-string, timing disabled).
//!
//! Trace columns: `objective, optimizer, seed, run, iteration, event,
//! parent_value, best_value, evaluations, resolution_bits`.
//!
//! Bench columns: `objective, optimizer, seed, best_value, distance_to_optimum,
//! evaluations, wall_time_s, termination`.

use std::fs::OpenOptions;
use std::io::{self, BufRead, BufReader, Seek, SeekFrom, Write};
use std::path::Path;
use std::time::Duration;

use serde::Serialize;

use crate::objectives::KnownOptimum;
use crate::run::RunResult;
use crate::scalar::Scalar;

pub const RESULT_HEADER: &str = "objective,optimizer,seed,best_value,distance_to_optimum,evaluations,steps,termination,wall_time_s,best_point,best_bits";
pub const TRACE_HEADER: &str = "objective,optimizer,seed,run,iteration,event,parent_value,best_value,evaluations,resolution_bits";
pub const BENCH_HEADER: &str = "objective,optimizer,seed,best_value,distance_to_optimum,evaluations,wall_time_s,termination";

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}

/// Shortest round-trip decimal for `v`.
pub fn num<F: Scalar>(v: F) -> String {
    let a = v.abs();
    if a == F::zero() || !v.is_finite() || (a >= F::lit(1e-4) && a < F::lit(1e16)) {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

fn opt_num<F: Scalar>(v: &Option<F>) -> String {
    v.map(num).unwrap_or_default()
}

/// One optimization outcome as written to a result file.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRecord<F> {
    pub objective: String,
    pub optimizer: String,
    pub seed: u64,
    pub best_value: F,
    pub distance_to_optimum: Option<F>,
    pub evaluations: u64,
    pub steps: u64,
    pub termination: String,
    pub wall_time_s: Option<f64>,
    pub best_point: Vec<F>,
    pub best_bits: Option<String>,
}

impl<F: Scalar> ResultRecord<F> {
    pub fn new(
        objective: &str,
        optimizer: &str,
        seed: u64,
        result: &RunResult<F>,
        optimum: Option<&KnownOptimum<F>>,
        wall_time: Option<Duration>,
    ) -> Self {
        Self {
            objective: objective.to_string(),
            optimizer: optimizer.to_string(),
            seed,
            best_value: result.best_value,
            distance_to_optimum: optimum.map(|o| o.distance(&result.best_point)),
            evaluations: result.evaluations,
            steps: result.steps,
            termination: result.termination.to_string(),
            wall_time_s: wall_time.map(|d| d.as_secs_f64()),
            best_point: result.best_point.clone(),
            best_bits: result.best_bits.as_ref().map(ToString::to_string),
        }
    }

    pub fn csv_row(&self) -> String {
        let point = self
            .best_point
            .iter()
            .map(|&v| num(v))
            .collect::<Vec<_>>()
            .join(";");
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.objective,
            self.optimizer,
            self.seed,
            num(self.best_value),
            opt_num(&self.distance_to_optimum),
            self.evaluations,
            self.steps,
            self.termination,
            opt(&self.wall_time_s),
            point,
            opt(&self.best_bits),
        )
    }

    pub fn bench_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.objective,
            self.optimizer,
            self.seed,
            num(self.best_value),
            opt_num(&self.distance_to_optimum),
            self.evaluations,
            opt(&self.wall_time_s),
            self.termination,
        )
    }
}

/// Trace lines for one run (no header).
pub fn trace_rows<F: Scalar>(
    objective: &str,
    optimizer: &str,
    seed: u64,
    run: usize,
    result: &RunResult<F>,
) -> Vec<String> {
    result
        .trace
        .iter()
        .map(|r| {
            format!(
                "{objective},{optimizer},{seed},{run},{},{},{},{},{},{}",
                r.iteration,
                r.event,
                num(r.parent_value),
                num(r.best_value),
                r.evaluations_so_far,
                opt(&r.resolution_bits),
            )
        })
        .collect()
}

/// Header plus rows as one string, newline-terminated.
pub fn csv_document(header: &str, rows: &[String]) -> String {
    let mut out = String::with_capacity(header.len() + rows.iter().map(|r| r.len() + 1).sum::<usize>() + 1);
    out.push_str(header);
    out.push('\n');
    for r in rows {
        out.push_str(r);
        out.push('\n');
    }
    out
}

/// Writes `rows` under `header`.
///
/// With `append`, rows are added to an existing file; the header is written
/// only when the file is empty, and a file with a different header is rejected.
pub fn write_csv(path: &Path, header: &str, rows: &[String], append: bool) -> io::Result<()> {
    if !append {
        return std::fs::write(path, csv_document(header, rows));
    }
    let mut file = OpenOptions::new()
        .read(true)
        .append(true)
        .create(true)
        .open(path)?;
    let len = file.metadata()?.len();
    if len == 0 {
        writeln!(file, "{header}")?;
    } else {
        file.seek(SeekFrom::Start(0))?;
        let mut first = String::new();
        BufReader::new(&file).read_line(&mut first)?;
        if first.trim_end() != header {
            return Err(io::Error::new(
                io::ErrorKind::InvalidData,
                format!("{} has a different header", path.display()),
            ));
        }
    }
    for r in rows {
        writeln!(file, "{r}")?;
    }
    Ok(())
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::{optimize, DgoConfig};
    use crate::objectives::lookup;

    fn sample() -> (RunResult<f64>, ResultRecord<f64>) {
        let obj = lookup::<f64>("camel6_2d").unwrap();
        let r = optimize(&obj, obj.bounds(), &DgoConfig::default(), None).unwrap();
        let rec = ResultRecord::new("camel6_2d", "dgo", 1, &r, obj.known_optimum(), None);
        (r, rec)
    }

    #[test]
    fn result_row_matches_header() {
        let (r, rec) = sample();
        let row = rec.csv_row();
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), RESULT_HEADER.split(',').count());
        assert_eq!(fields[3].parse::<f64>().unwrap(), r.best_value);
        let point: Vec<f64> = fields[9].split(';').map(|s| s.parse().unwrap()).collect();
        assert_eq!(point, r.best_point);
        assert_eq!(fields[8], "");
        assert_eq!(fields[10].len(), 64);
        assert_eq!(rec.bench_row().split(',').count(), BENCH_HEADER.split(',').count());
    }

    #[test]
    fn trace_rows_match_header() {
        let (r, _) = sample();
        let rows = trace_rows("camel6_2d", "dgo", 1, 0, &r);
        assert_eq!(rows.len(), r.trace.len());
        assert!(rows[0].contains(",start,"));
        let n = TRACE_HEADER.split(',').count();
        assert!(rows.iter().all(|row| row.split(',').count() == n));
    }

    #[test]
    fn json_is_self_describing() {
        let (_, rec) = sample();
        let v: serde_json::Value = serde_json::from_str(&to_json(&rec)).unwrap();
        assert_eq!(v["objective"], "camel6_2d");
        assert!(v["wall_time_s"].is_null());
        assert_eq!(v["best_point"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn numbers_round_trip() {
        for v in [0.0f64, -0.0, 1.5, -1.9059611187157854, 1e-17, 1.0842021724855044e-17, 3e20, 1e-4, 123456.789] {
            let s = num(v);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits(), "{s}");
        }
        assert_eq!(num(1e-17), "1e-17");
        assert_eq!(num(0.25), "0.25");
        assert_eq!(num(2.5f32), "2.5");
    }

    #[test]
    fn append_writes_header_once() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        write_csv(&path, "a,b", &["1,2".into()], true).unwrap();
        write_csv(&path, "a,b", &["3,4".into()], true).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "a,b\n1,2\n3,4\n");
        let err = write_csv(&path, "x,y", &["5,6".into()], true).unwrap_err();
        assert_eq!(err.kind(), io::ErrorKind::InvalidData);
        write_csv(&path, "x,y", &[], false).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "x,y\n");
    }
}
