//! File formats.
//!
//! * Matrices: `{"dim": n, "re": [[..]], "im": [[..]]}`, row-major.
//! * Vectors (wavefunction snapshots): `{"dim": n, "re": [..], "im": [..]}`.
//! * Convergence reports: CSV `n,error` or a JSON object with every field.
//! * Trajectories: CSV `step,time,norm,mean_x,mean_p,energy_kinetic`.
//!
//! CSV floats are written with 17 significant digits, which round-trips any
//! `f64`. CSV files have a header row, comma delimiters and LF line endings.

use std::io::Write;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, StateVector};
use crate::scalar::Real;
use crate::schrodinger::{Observables, TrajectoryRow};
use crate::trotter::{ConvergenceReport, ErrorMetric};

/// `x` with 17 significant digits.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:.16e}")
    }
}

fn parse_float(field: &str) -> Result<f64> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|e| Error::Parse(format!("invalid number {field:?}: {e}")))
}

fn parse_int<I: std::str::FromStr>(field: &str) -> Result<I>
where
    I::Err: std::fmt::Display,
{
    field
        .trim()
        .parse::<I>()
        .map_err(|e| Error::Parse(format!("invalid integer {field:?}: {e}")))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix<T: Real>(m: &ComplexMatrix<T>) -> Self {
        let n = m.dim();
        let part = |f: fn(&Complex<T>) -> T| -> Vec<Vec<f64>> {
            (0..n)
                .map(|i| m.row(i).iter().map(|z| f(z).to_f64_lossy()).collect())
                .collect()
        };
        Self {
            dim: n,
            re: part(|z| z.re),
            im: part(|z| z.im),
        }
    }

    pub fn to_matrix<T: Real>(&self) -> Result<ComplexMatrix<T>> {
        let n = self.dim;
        if n == 0 {
            return Err(Error::Parse("matrix dim must be positive".into()));
        }
        if self.re.len() != n || self.im.len() != n {
            return Err(Error::Parse(format!("matrix must have {n} rows")));
        }
        let mut entries = Vec::with_capacity(n * n);
        for (row_re, row_im) in self.re.iter().zip(&self.im) {
            if row_re.len() != n || row_im.len() != n {
                return Err(Error::Parse(format!("matrix is not square: expected {n} columns")));
            }
            for (&re, &im) in row_re.iter().zip(row_im) {
                if !re.is_finite() || !im.is_finite() {
                    return Err(Error::Parse("matrix contains non-finite entries".into()));
                }
                entries.push(Complex::new(T::lit(re), T::lit(im)));
            }
        }
        ComplexMatrix::from_row_major(n, entries).map_err(|e| Error::Parse(e.to_string()))
    }
}

pub fn matrix_to_json<T: Real>(m: &ComplexMatrix<T>) -> String {
    serde_json::to_string(&MatrixJson::from_matrix(m)).expect("matrix serializes")
}

pub fn matrix_from_json<T: Real>(text: &str) -> Result<ComplexMatrix<T>> {
    let payload: MatrixJson =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("matrix JSON: {e}")))?;
    payload.to_matrix()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorJson {
    pub dim: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl VectorJson {
    pub fn from_values<T: Real>(values: &[Complex<T>]) -> Self {
        Self {
            dim: values.len(),
            re: values.iter().map(|z| z.re.to_f64_lossy()).collect(),
            im: values.iter().map(|z| z.im.to_f64_lossy()).collect(),
        }
    }

    pub fn to_values<T: Real>(&self) -> Result<Vec<Complex<T>>> {
        if self.dim == 0 || self.re.len() != self.dim || self.im.len() != self.dim {
            return Err(Error::Parse(format!(
                "vector payload must hold {} real and imaginary parts",
                self.dim
            )));
        }
        self.re
            .iter()
            .zip(&self.im)
            .map(|(&re, &im)| {
                if re.is_finite() && im.is_finite() {
                    Ok(Complex::new(T::lit(re), T::lit(im)))
                } else {
                    Err(Error::Parse("vector contains non-finite entries".into()))
                }
            })
            .collect()
    }
}

/// One wavefunction snapshot in a trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotJson {
    pub step: usize,
    pub time: f64,
    pub state: VectorJson,
}

pub fn snapshots_to_json(snapshots: &[SnapshotJson]) -> String {
    serde_json::to_string(snapshots).expect("snapshots serialize")
}

pub fn snapshots_from_json(text: &str) -> Result<Vec<SnapshotJson>> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("snapshot JSON: {e}")))
}

fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

fn csv_error(e: csv::Error) -> Error {
    Error::Parse(format!("CSV: {e}"))
}

fn write_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ASCII output")
}

/// Parses a CSV table and checks its header.
fn read_csv(text: &str, header: &[&str]) -> Result<Vec<csv::StringRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let found = reader.headers().map_err(csv_error)?.clone();
    if found.iter().collect::<Vec<_>>() != header {
        return Err(Error::Parse(format!(
            "unexpected CSV header {:?}, expected {:?}",
            found.iter().collect::<Vec<_>>(),
            header
        )));
    }
    reader
        .records()
        .map(|r| r.map_err(csv_error))
        .collect()
}

pub const REPORT_CSV_HEADER: [&str; 2] = ["n", "error"];

pub fn report_to_csv<T: Real>(report: &ConvergenceReport<T>) -> String {
    write_csv(
        &REPORT_CSV_HEADER,
        report
            .rows()
            .map(|(n, e)| vec![n.to_string(), format_float(e.to_f64_lossy())]),
    )
}

/// `(n, error)` rows from [`report_to_csv`] output.
pub fn report_rows_from_csv(text: &str) -> Result<Vec<(u64, f64)>> {
    read_csv(text, &REPORT_CSV_HEADER)?
        .iter()
        .map(|r| Ok((parse_int(&r[0])?, parse_float(&r[1])?)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub t: f64,
    pub metric: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<VectorJson>,
    pub step_counts: Vec<u64>,
    pub errors: Vec<f64>,
    /// `null` when the fit is undefined.
    pub fitted_order: Option<f64>,
    pub fitted_order_valid: bool,
}

impl ReportJson {
    pub fn from_report<T: Real>(report: &ConvergenceReport<T>) -> Self {
        Self {
            t: report.t.to_f64_lossy(),
            metric: report.metric.name().to_string(),
            xi: report.metric.xi().map(|x| VectorJson::from_values(x.amplitudes())),
            step_counts: report.step_counts.clone(),
            errors: report.errors.iter().map(|e| e.to_f64_lossy()).collect(),
            fitted_order: report
                .fitted_order_valid
                .then(|| report.fitted_order.to_f64_lossy()),
            fitted_order_valid: report.fitted_order_valid,
        }
    }

    pub fn to_report<T: Real>(&self) -> Result<ConvergenceReport<T>> {
        let metric = match (self.metric.as_str(), &self.xi) {
            ("operator_2norm", _) => ErrorMetric::Operator2Norm,
            ("state_vector_norm", Some(xi)) => ErrorMetric::StateVectorNorm(
                StateVector::from_amplitudes(xi.to_values()?)
                    .map_err(|e| Error::Parse(e.to_string()))?,
            ),
            ("state_vector_norm", None) => {
                return Err(Error::Parse("state_vector_norm report without xi".into()))
            }
            (other, _) => return Err(Error::Parse(format!("unknown metric {other:?}"))),
        };
        if self.step_counts.len() != self.errors.len() {
            return Err(Error::Parse("step_counts and errors differ in length".into()));
        }
        Ok(ConvergenceReport {
            t: T::lit(self.t),
            step_counts: self.step_counts.clone(),
            errors: self.errors.iter().map(|&e| T::lit(e)).collect(),
            fitted_order: self.fitted_order.map(T::lit).unwrap_or_else(T::nan),
            fitted_order_valid: self.fitted_order_valid,
            metric,
        })
    }
}

pub fn report_to_json<T: Real>(report: &ConvergenceReport<T>) -> String {
    serde_json::to_string_pretty(&ReportJson::from_report(report)).expect("report serializes")
}

pub fn report_from_json<T: Real>(text: &str) -> Result<ConvergenceReport<T>> {
    let payload: ReportJson =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("report JSON: {e}")))?;
    payload.to_report()
}

pub const TRAJECTORY_CSV_HEADER: [&str; 6] =
    ["step", "time", "norm", "mean_x", "mean_p", "energy_kinetic"];

pub fn trajectory_to_csv<T: Real>(rows: &[TrajectoryRow<T>]) -> String {
    write_csv(
        &TRAJECTORY_CSV_HEADER,
        rows.iter().map(|r| {
            let o = &r.observables;
            vec![
                r.step.to_string(),
                format_float(r.time.to_f64_lossy()),
                format_float(o.norm.to_f64_lossy()),
                format_float(o.mean_x.to_f64_lossy()),
                format_float(o.mean_p.to_f64_lossy()),
                format_float(o.energy_kinetic.to_f64_lossy()),
            ]
        }),
    )
}

pub fn trajectory_from_csv(text: &str) -> Result<Vec<TrajectoryRow<f64>>> {
    read_csv(text, &TRAJECTORY_CSV_HEADER)?
        .iter()
        .map(|r| {
            Ok(TrajectoryRow {
                step: parse_int(&r[0])?,
                time: parse_float(&r[1])?,
                observables: Observables {
                    norm: parse_float(&r[2])?,
                    mean_x: parse_float(&r[3])?,
                    mean_p: parse_float(&r[4])?,
                    energy_kinetic: parse_float(&r[5])?,
                },
            })
        })
        .collect()
}

/// One point of a defect sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DefectRow {
    pub step: f64,
    pub defect: f64,
    pub defect_supremum: f64,
}

pub const DEFECT_CSV_HEADER: [&str; 3] = ["step", "defect", "defect_supremum"];

pub fn defect_rows_to_csv(rows: &[DefectRow]) -> String {
    write_csv(
        &DEFECT_CSV_HEADER,
        rows.iter().map(|r| {
            vec![
                format_float(r.step),
                format_float(r.defect),
                format_float(r.defect_supremum),
            ]
        }),
    )
}

pub fn defect_rows_from_csv(text: &str) -> Result<Vec<DefectRow>> {
    read_csv(text, &DEFECT_CSV_HEADER)?
        .iter()
        .map(|r| {
            Ok(DefectRow {
                step: parse_float(&r[0])?,
                defect: parse_float(&r[1])?,
                defect_supremum: parse_float(&r[2])?,
            })
        })
        .collect()
}

pub const MATRIX_CSV_HEADER: [&str; 4] = ["row", "col", "re", "im"];

/// Sparse-style listing of every entry, row-major.
pub fn matrix_to_csv<T: Real>(m: &ComplexMatrix<T>) -> String {
    let n = m.dim();
    write_csv(
        &MATRIX_CSV_HEADER,
        (0..n).flat_map(|i| {
            (0..n).map(move |j| {
                let z = m[(i, j)];
                vec![
                    i.to_string(),
                    j.to_string(),
                    format_float(z.re.to_f64_lossy()),
                    format_float(z.im.to_f64_lossy()),
                ]
            })
        }),
    )
}

pub fn matrix_from_csv<T: Real>(text: &str) -> Result<ComplexMatrix<T>> {
    let records = read_csv(text, &MATRIX_CSV_HEADER)?;
    let dim = (records.len() as f64).sqrt().round() as usize;
    if dim * dim != records.len() || dim == 0 {
        return Err(Error::Parse(format!(
            "{} entries do not form a square matrix",
            records.len()
        )));
    }
    let mut m = ComplexMatrix::zeros(dim);
    let mut seen = vec![false; dim * dim];
    for r in &records {
        let (i, j): (usize, usize) = (parse_int(&r[0])?, parse_int(&r[1])?);
        if i >= dim || j >= dim || seen[i * dim + j] {
            return Err(Error::Parse(format!("bad or repeated matrix index ({i}, {j})")));
        }
        seen[i * dim + j] = true;
        let (re, im) = (parse_float(&r[2])?, parse_float(&r[3])?);
        if !re.is_finite() || !im.is_finite() {
            return Err(Error::Parse("matrix contains non-finite entries".into()));
        }
        m[(i, j)] = Complex::new(T::lit(re), T::lit(im));
    }
    Ok(m)
}

/// Output of the `expm` subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpmJson {
    pub t: f64,
    pub exact: MatrixJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub taylor: Option<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub taylor_terms: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frobenius_difference: Option<f64>,
}

pub fn expm_to_json(payload: &ExpmJson) -> String {
    serde_json::to_string_pretty(payload).expect("expm output serializes")
}

pub fn expm_from_json(text: &str) -> Result<ExpmJson> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("expm JSON: {e}")))
}
