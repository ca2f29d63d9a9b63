use std::io::{Read, Write};
use std::time::Instant;

use rayon::prelude::*;

use crate::configs::{Family, FamilySpec};
use crate::model::{default_max_steps, simulate, Configuration};
use crate::scalar::{NumericMode, Rational, Scalar, Tolerances};

use super::HarnessError;

/// One freezing-time measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub family: Family,
    pub n: usize,
    pub agents: usize,
    pub mode: &'static str,
    pub freeze_time: Option<usize>,
    pub steps_run: usize,
    pub frozen: bool,
    pub wall_time_ms: f64,
}

impl SweepRow {
    /// Row equality ignoring wall time.
    pub fn same_outcome(&self, other: &SweepRow) -> bool {
        SweepRow {
            wall_time_ms: 0.0,
            ..self.clone()
        } == SweepRow {
            wall_time_ms: 0.0,
            ..other.clone()
        }
    }
}

/// Exact arithmetic for small instances, floats beyond `n = 32`. The
/// polygon is float-only.
pub fn default_mode(family: Family, n: usize) -> NumericMode {
    if family == Family::Polygon || n > 32 {
        NumericMode::float()
    } else {
        NumericMode::Exact
    }
}

/// Step guard: `10 n^3` on the line, `10 n^2` in the plane (n = agents).
pub fn step_cap<S: Scalar>(c: &Configuration<S>) -> usize {
    default_max_steps(c).unwrap_or_else(|| 10 * c.len() * c.len())
}

/// Builds and runs one family member to freezing (or the step guard).
pub fn run_family(spec: &FamilySpec, mode: NumericMode) -> Result<SweepRow, HarnessError> {
    match mode {
        NumericMode::Exact => run_typed::<Rational>(spec, Tolerances::default()),
        NumericMode::Float(tol) => run_typed::<f64>(spec, tol),
    }
}

fn run_typed<S: Scalar>(spec: &FamilySpec, tol: Tolerances) -> Result<SweepRow, HarnessError> {
    let c = spec.build::<S>()?.with_tolerances(tol);
    let cap = step_cap(&c);
    let start = Instant::now();
    let result = simulate(&c, cap, false);
    let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(SweepRow {
        family: spec.family,
        n: spec.n,
        agents: c.len(),
        mode: S::mode_name(),
        freeze_time: result.freeze_time,
        steps_run: result.steps,
        frozen: result.frozen,
        wall_time_ms,
    })
}

fn sweep_spec(family: Family, n: usize, mode: Option<NumericMode>) -> (FamilySpec, NumericMode) {
    (
        FamilySpec::new(family, n),
        mode.unwrap_or_else(|| default_mode(family, n)),
    )
}

/// Runs every `n` independently on the rayon pool; rows come back in input order.
pub fn freeze_sweep(
    family: Family,
    ns: &[usize],
    mode: Option<NumericMode>,
) -> Result<Vec<SweepRow>, HarnessError> {
    ns.par_iter()
        .map(|&n| {
            let (spec, mode) = sweep_spec(family, n, mode);
            run_family(&spec, mode)
        })
        .collect()
}

pub fn freeze_sweep_serial(
    family: Family,
    ns: &[usize],
    mode: Option<NumericMode>,
) -> Result<Vec<SweepRow>, HarnessError> {
    ns.iter()
        .map(|&n| {
            let (spec, mode) = sweep_spec(family, n, mode);
            run_family(&spec, mode)
        })
        .collect()
}

const SWEEP_HEADER: [&str; 8] = [
    "family",
    "n",
    "agents",
    "mode",
    "freeze_time",
    "steps_run",
    "frozen",
    "wall_time_ms",
];

/// Writes rows as CSV. With `timing == false` the wall-time column is 0 so
/// that repeated runs produce identical bytes.
pub fn write_sweep_csv<W: Write>(
    out: W,
    rows: &[SweepRow],
    timing: bool,
) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER)?;
    for r in rows {
        w.write_record([
            r.family.name().to_string(),
            r.n.to_string(),
            r.agents.to_string(),
            r.mode.to_string(),
            r.freeze_time.map(|t| t.to_string()).unwrap_or_default(),
            r.steps_run.to_string(),
            r.frozen.to_string(),
            if timing {
                format!("{:.3}", r.wall_time_ms)
            } else {
                "0".to_string()
            },
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_sweep_csv<R: Read>(input: R) -> Result<Vec<SweepRow>, HarnessError> {
    let mut reader = csv::Reader::from_reader(input);
    let headers = reader.headers()?.clone();
    if headers.iter().ne(SWEEP_HEADER) {
        return Err(HarnessError::BadSweepCsv {
            record: 0,
            reason: format!(
                "unexpected header `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }
    let mut rows = Vec::new();
    for (idx, rec) in reader.records().enumerate() {
        let record = idx + 1;
        let rec = rec?;
        let bad = |reason: String| HarnessError::BadSweepCsv { record, reason };
        let num = |k: usize| -> Result<usize, HarnessError> {
            rec[k].parse().map_err(|_| {
                bad(format!(
                    "column {} is not an integer: `{}`",
                    SWEEP_HEADER[k], &rec[k]
                ))
            })
        };
        let family = rec[0].parse::<Family>().map_err(bad)?;
        let mode = match &rec[3] {
            "exact" => "exact",
            "float" => "float",
            other => return Err(bad(format!("unknown mode `{other}`"))),
        };
        let freeze_time = if rec[4].is_empty() {
            None
        } else {
            Some(num(4)?)
        };
        rows.push(SweepRow {
            family,
            n: num(1)?,
            agents: num(2)?,
            mode,
            freeze_time,
            steps_run: num(5)?,
            frozen: rec[6]
                .parse()
                .map_err(|_| bad(format!("bad frozen flag `{}`", &rec[6])))?,
            wall_time_ms: rec[7]
                .parse()
                .map_err(|_| bad(format!("bad wall time `{}`", &rec[7])))?,
        });
    }
    Ok(rows)
}
