//! Text serialization for harness results. Floats are written with 17
//! significant digits so every value round-trips exactly.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Result, UspError};
use crate::lds::SignalTrace;

use super::norms::NormRow;
use super::sweep::SweepSummary;

pub const SWEEP_HEADER: &str = "method,mode,degree,hyperparam,median,q25,q75,n_diverged";
pub const NORMS_HEADER: &str = "transform,degree,median,q25,q75";
pub const TRACE_HEADER: &str = "t,u,y,y_clean";

/// Scientific notation with a 16-digit mantissa fraction; `inf`/`-inf`/`NaN` for non-finite values.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn sweep_csv(summary: &SweepSummary) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for c in &summary.cells {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            c.method.name(),
            c.mode.name(),
            c.degree,
            fmt_float(c.hyperparam),
            fmt_float(c.median),
            fmt_float(c.q25),
            fmt_float(c.q75),
            c.n_diverged
        );
    }
    out
}

pub fn norms_csv(rows: &[NormRow]) -> String {
    let mut out = String::from(NORMS_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.transform.name(),
            r.degree,
            fmt_float(r.median),
            fmt_float(r.q25),
            fmt_float(r.q75)
        );
    }
    out
}

pub fn trace_csv(trace: &SignalTrace<f64>) -> String {
    let mut out = String::from(TRACE_HEADER);
    out.push('\n');
    for (k, ((u, y), yc)) in trace.inputs.iter().zip(&trace.outputs).zip(&trace.outputs_clean).enumerate() {
        let _ = writeln!(out, "{},{},{},{}", k + 1, fmt_float(*u), fmt_float(*y), fmt_float(*yc));
    }
    out
}

/// Pretty JSON with a trailing newline. Non-finite floats become `null`.
pub fn to_json<S: Serialize + ?Sized>(value: &S) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| UspError::InvalidArgument(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{Method, SweepCell};
    use crate::precondition::PreconditionMode;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, 1e-300, 123456789.12345679, -2.5e17, f64::MIN_POSITIVE] {
            assert_eq!(fmt_float(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_float(f64::INFINITY), "inf");
        assert_eq!(fmt_float(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn sweep_rows() {
        let s = SweepSummary {
            cells: vec![SweepCell {
                method: Method::Vaw,
                mode: PreconditionMode::ChebyshevFixed,
                degree: 3,
                hyperparam: 10.0,
                median: 0.5,
                q25: 0.25,
                q75: f64::INFINITY,
                n_diverged: 1,
            }],
        };
        let csv = sweep_csv(&s);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], SWEEP_HEADER);
        assert_eq!(
            lines[1],
            "vaw,chebyshev_fixed,3,1.0000000000000000e1,5.0000000000000000e-1,2.5000000000000000e-1,inf,1"
        );
    }
}
