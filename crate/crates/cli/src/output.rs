use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use polarchan::harness::MatrixFile;
use polarchan::matkit::ComplexMatrix;
use polarchan::search::{IterationRecord, IterationTrace};
use polarchan::tomo::ReconstructionReport;
use serde::Serialize;

pub const TRACE_HEADER: &str = "iter,objective,step_norm,residual";

/// CSV trace that flushes after every row.
pub struct TraceWriter {
    inner: BufWriter<File>,
}

impl TraceWriter {
    pub fn create(path: &Path) -> Result<Self> {
        let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        let mut inner = BufWriter::new(file);
        writeln!(inner, "{TRACE_HEADER}")?;
        Ok(Self { inner })
    }

    pub fn push(&mut self, r: &IterationRecord) -> Result<()> {
        writeln!(
            self.inner,
            "{},{:e},{:e},{:e}",
            r.iter, r.objective, r.step_norm, r.residual
        )?;
        self.inner.flush()?;
        Ok(())
    }
}

pub fn write_trace(path: &Path, trace: &IterationTrace) -> Result<()> {
    let mut w = TraceWriter::create(path)?;
    for r in &trace.records {
        w.push(r)?;
    }
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

pub fn read_matrix(path: &Path) -> Result<ComplexMatrix> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let m = MatrixFile::from_json(&text)
        .and_then(|f| f.to_matrix())
        .with_context(|| format!("parsing {}", path.display()))?;
    Ok(m)
}

/// Complex vector as separate real and imaginary arrays.
#[derive(Debug, Serialize)]
pub struct ComplexJson {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

fn matrix_json(m: &ComplexMatrix) -> MatrixFile {
    MatrixFile::from_matrix(m).expect("report matrices are square")
}

/// Report document: the reconstruction fields plus the comparison metric.
#[derive(Debug, Serialize)]
pub struct ReportJson {
    pub u0: MatrixFile,
    pub v: MatrixFile,
    pub d: ComplexJson,
    pub u_recovered: MatrixFile,
    pub budget_used: u64,
    pub eigengap: f64,
    pub residual_on_tests: f64,
    pub solver_status: String,
    pub trace: Vec<IterationRecord>,
    pub normalized_diff: f64,
}

impl ReportJson {
    pub fn new(report: &ReconstructionReport, normalized_diff: f64) -> Self {
        Self {
            u0: matrix_json(&report.u0),
            v: matrix_json(&report.v),
            d: ComplexJson {
                re: report.d.iter().map(|z| z.re).collect(),
                im: report.d.iter().map(|z| z.im).collect(),
            },
            u_recovered: matrix_json(&report.u_recovered),
            budget_used: report.budget_used,
            eigengap: report.eigengap,
            residual_on_tests: report.residual_on_tests,
            solver_status: report.solver_status.to_string(),
            trace: report.trace.records.clone(),
            normalized_diff,
        }
    }
}
