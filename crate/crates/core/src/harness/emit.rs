use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::model::{simulate, Configuration, SimulationResult};
use crate::scalar::Scalar;

use super::HarnessError;

/// Long-form CSV `t,agent,coord,value` of a recorded run, followed by one
/// `# frozen=... freeze_time=... steps=...` line.
pub fn write_trajectory<W: Write, S: Scalar>(
    out: W,
    result: &SimulationResult<S>,
) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "agent", "coord", "value"])?;
    for (t, c) in result.trajectory.iter().enumerate() {
        for (agent, p) in c.points().enumerate() {
            for (coord, x) in p.iter().enumerate() {
                w.write_record([
                    t.to_string(),
                    agent.to_string(),
                    coord.to_string(),
                    x.to_string(),
                ])?;
            }
        }
    }
    w.flush()?;
    let mut out = w.into_inner().map_err(|e| e.into_error())?;
    let freeze = result
        .freeze_time
        .map(|t| t.to_string())
        .unwrap_or_else(|| "none".to_string());
    writeln!(
        out,
        "# frozen={} freeze_time={} steps={}",
        result.frozen, freeze, result.steps
    )?;
    out.flush()?;
    Ok(())
}

/// Simulates up to `steps` updates, recording every state, and writes the
/// trajectory CSV to `path`.
pub fn emit_trajectory<S: Scalar>(
    c: &Configuration<S>,
    steps: usize,
    path: impl AsRef<Path>,
) -> Result<SimulationResult<S>, HarnessError> {
    let result = simulate(c, steps, true);
    let file = BufWriter::new(File::create(path)?);
    write_trajectory(file, &result)?;
    Ok(result)
}

/// Rebuilds the configuration at time `t` from trajectory CSV text.
pub fn trajectory_slice<S: Scalar>(
    csv_text: &str,
    t: usize,
) -> Result<Configuration<S>, HarnessError> {
    let mut points: Vec<Vec<S>> = Vec::new();
    for (idx, line) in csv_text.lines().enumerate().skip(1) {
        let line_no = idx + 1;
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let bad = |reason: &str| HarnessError::BadTrajectory {
            line: line_no,
            reason: reason.to_string(),
        };
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 4 {
            return Err(bad("expected 4 columns"));
        }
        let row_t: usize = cells[0].parse().map_err(|_| bad("bad t"))?;
        if row_t != t {
            continue;
        }
        let agent: usize = cells[1].parse().map_err(|_| bad("bad agent"))?;
        let coord: usize = cells[2].parse().map_err(|_| bad("bad coord"))?;
        let value = S::parse_token(cells[3]).map_err(|e| bad(&e.to_string()))?;
        if agent == points.len() && coord == 0 {
            points.push(vec![value]);
        } else if agent + 1 == points.len() && coord == points[agent].len() {
            points[agent].push(value);
        } else {
            return Err(bad("rows out of order"));
        }
    }
    let dim = points.first().map_or(1, Vec::len);
    Configuration::new(dim, points).map_err(|e| HarnessError::BadTrajectory {
        line: 0,
        reason: format!("slice t={t}: {e}"),
    })
}
