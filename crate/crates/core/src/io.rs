//! Trajectory serialization.
//!
//! CSV layout (header fixed, one row per measurement event):
//!
//! ```text
//! cycle,time,information_nats,entropy_total,entropy_part_0,...,entropy_part_{n-1},correlation_surrendered
//! ```
//!
//! When several trials are written together a leading `trial` column is
//! added. Floats are written in scientific notation with 17 significant
//! digits, which round-trips every `f64` exactly.

use std::fmt::Write as _;

use crate::dynamics::Trajectory;

/// Scientific notation with 17 significant digits.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn csv_header(parts: usize, with_trial: bool) -> String {
    let mut h = String::new();
    if with_trial {
        h.push_str("trial,");
    }
    h.push_str("cycle,time,information_nats,entropy_total");
    for i in 0..parts {
        let _ = write!(h, ",entropy_part_{i}");
    }
    h.push_str(",correlation_surrendered");
    h
}

fn push_rows(out: &mut String, traj: &Trajectory, trial: Option<usize>) {
    for s in &traj.steps {
        if let Some(t) = trial {
            let _ = write!(out, "{t},");
        }
        let _ = write!(
            out,
            "{},{},{},{}",
            s.cycle,
            format_float(s.time),
            format_float(s.information),
            format_float(s.entropy_total)
        );
        for e in &s.entropy_parts {
            out.push(',');
            out.push_str(&format_float(*e));
        }
        out.push(',');
        out.push_str(&format_float(s.correlation_surrendered));
        out.push('\n');
    }
}

pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut out = csv_header(traj.dims.len(), false);
    out.push('\n');
    push_rows(&mut out, traj, None);
    out
}

/// One table for several trials, ordered by trial index. A single trial
/// produces exactly [`trajectory_csv`].
pub fn trials_csv(trials: &[Trajectory]) -> String {
    match trials {
        [single] => trajectory_csv(single),
        _ => {
            let parts = trials.first().map_or(0, |t| t.dims.len());
            let mut out = csv_header(parts, true);
            out.push('\n');
            for (k, traj) in trials.iter().enumerate() {
                push_rows(&mut out, traj, Some(k));
            }
            out
        }
    }
}

pub fn trajectory_json(traj: &Trajectory) -> String {
    serde_json::to_string_pretty(traj).expect("trajectory serializes") + "\n"
}

/// A single trial serializes as one object, several as an array.
pub fn trials_json(trials: &[Trajectory]) -> String {
    match trials {
        [single] => trajectory_json(single),
        _ => serde_json::to_string_pretty(trials).expect("trajectories serialize") + "\n",
    }
}
