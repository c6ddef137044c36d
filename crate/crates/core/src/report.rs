//! JSON run reports.
//!
//! Reals are written in the shortest decimal form that parses back to the
//! same `f64`, so a report read back compares equal to the one written.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::conjugation::ConjugateSet;
use crate::factorize::{Decomposition, FactorMethod, FactorStep, NormAccounting, Termination};
use crate::linalg::{matrix_entrywise_norm, NormOrder, RealMatrix};
use crate::projections::ProjectionResult;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub name: String,
    pub rows: usize,
    pub cols: usize,
    pub l1_norm: f64,
    pub l2_norm: f64,
}

impl InputDigest {
    pub fn of(name: impl Into<String>, m: &RealMatrix) -> Self {
        InputDigest {
            name: name.into(),
            rows: m.rows(),
            cols: m.cols(),
            l1_norm: matrix_entrywise_norm(m, NormOrder::L1),
            l2_norm: matrix_entrywise_norm(m, NormOrder::L2),
        }
    }
}

/// One named pass/fail check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub method: FactorMethod,
    pub steps: Vec<FactorStep>,
    pub residual_trace: Vec<f64>,
    pub reconstruction_error: f64,
    pub termination: Termination,
    pub norm_accounting: NormAccounting,
}

impl DecompositionReport {
    pub fn new(d: &Decomposition, norm_accounting: NormAccounting) -> Self {
        DecompositionReport {
            method: d.method,
            steps: d.steps.clone(),
            residual_trace: d.residual_trace.clone(),
            reconstruction_error: d.reconstruction_error,
            termination: d.termination,
            norm_accounting,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub method: Option<String>,
    pub inputs: Vec<InputDigest>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub projection: Option<ProjectionResult>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub decompositions: Vec<DecompositionReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conjugate: Option<ConjugateSet>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub verdicts: Vec<CheckLine>,
    /// Only filled when asked for, since it breaks byte-for-byte reproducibility.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl RunReport {
    pub fn new(command: impl Into<String>, method: Option<String>) -> Self {
        RunReport {
            command: command.into(),
            method,
            inputs: Vec::new(),
            projection: None,
            decompositions: Vec::new(),
            conjugate: None,
            verdicts: Vec::new(),
            wall_time_ms: None,
        }
    }
}

pub fn write_report<W: Write>(report: &RunReport, mut out: W) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut out, report)?;
    writeln!(out)
}

pub fn read_report<R: Read>(input: R) -> serde_json::Result<RunReport> {
    serde_json::from_reader(input)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorize::{decompose, norm_accounting, FactorOptions};
    use crate::linalg::RealVector;
    use crate::projections::project_l1_min;

    #[test]
    fn round_trip_is_exact() {
        let x = RealMatrix::from_rows(vec![
            vec![0.1, 1.0 / 3.0, -2.0f64.sqrt()],
            vec![1e-300, 7.0, std::f64::consts::PI],
        ])
        .unwrap();
        let d = decompose(&x, FactorMethod::L1MinSvd, 2, &FactorOptions::default()).unwrap();
        let mut report = RunReport::new("decompose", Some("l1min".into()));
        report.inputs.push(InputDigest::of("x", &x));
        report.decompositions.push(DecompositionReport::new(&d, norm_accounting(&x, &d).unwrap()));
        let y = RealVector::from_slice(&[6.0, 8.0]).unwrap();
        let b = RealVector::from_slice(&[4.0, 2.0]).unwrap();
        report.projection = Some(project_l1_min(&y, &b).unwrap());
        report.wall_time_ms = Some(0.123456789);

        let mut buf = Vec::new();
        write_report(&report, &mut buf).unwrap();
        let back = read_report(buf.as_slice()).unwrap();
        assert_eq!(back, report);

        let mut again = Vec::new();
        write_report(&back, &mut again).unwrap();
        assert_eq!(buf, again);
    }
}
