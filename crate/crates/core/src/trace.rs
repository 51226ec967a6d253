//! Per-iteration convergence records and their CSV form.
//!
//! Floats are written with 17 significant digits so traces round-trip.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultabRow {
    pub iteration: usize,
    /// `S_M` before the correction of this iteration.
    pub s_m: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitRow {
    pub iteration: usize,
    pub s_m: f64,
    pub s_q: f64,
    /// `S_Q(prev) − S_Q(current)`; `+∞` on the first iteration.
    pub delta_s_q: f64,
    pub norm_r: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MultabTrace {
    pub rows: Vec<MultabRow>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTrace {
    pub rows: Vec<FitRow>,
}

pub fn fmt_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

impl MultabTrace {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn last_s_m(&self) -> Option<f64> {
        self.rows.last().map(|r| r.s_m)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("iteration,S_M\n");
        for r in &self.rows {
            let _ = writeln!(out, "{},{}", r.iteration, fmt_float(r.s_m));
        }
        out
    }
}

impl ConvergenceTrace {
    /// Multiplies `S_Q` and `ΔS_Q` by `factor`, e.g. to undo a unit change.
    pub fn scale_s_q(&mut self, factor: f64) {
        for r in &mut self.rows {
            r.s_q *= factor;
            r.delta_s_q *= factor;
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("iteration,S_M,S_Q,delta_S_Q,norm_R\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                r.iteration,
                fmt_float(r.s_m),
                fmt_float(r.s_q),
                fmt_float(r.delta_s_q),
                fmt_float(r.norm_r)
            );
        }
        out
    }
}
