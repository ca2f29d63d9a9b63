//! Verification suites. Each check reproduces one quantitative statement
//! about the dynamics at finite size, with its threshold fixed here.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::configs::{make_dumbbell_chain, plane_triple, Family};
use crate::gaps::check_phase_invariants;
use crate::model::{clusters, is_frozen, simulate, step, Configuration};
use crate::scalar::{NumericMode, Rational, Scalar};
use crate::walks::{
    claim1_identity, claim2_kappa, delta_closed_form, delta_recurrence, expected_hits, mc_hits,
    path_matrix, return_count_constant, HitAccumulator,
};

use super::{fit_exponent, freeze_sweep, HarnessError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    Core,
    Walks,
    Theorem1,
    Scaling,
}

impl Suite {
    pub fn checks(self) -> Vec<u8> {
        match self {
            Suite::All => (1..=12).collect(),
            Suite::Core => vec![1, 11, 12],
            Suite::Walks => vec![7, 8, 9, 10],
            Suite::Theorem1 => vec![3],
            Suite::Scaling => vec![2, 4, 5, 6],
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "all" => Ok(Suite::All),
            "core" => Ok(Suite::Core),
            "walks" => Ok(Suite::Walks),
            "theorem1" => Ok(Suite::Theorem1),
            "scaling" => Ok(Suite::Scaling),
            other => Err(format!(
                "unknown suite `{other}` (expected all|core|walks|theorem1|scaling)"
            )),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}\tC{:02}\t{}\t{:.2}s\t{}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    pub outcomes: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.outcomes {
            writeln!(f, "{o}")?;
        }
        let failed = self.outcomes.iter().filter(|o| !o.passed).count();
        write!(f, "{} checks, {} failed", self.outcomes.len(), failed)
    }
}

pub fn verify(suite: Suite) -> VerifyReport {
    VerifyReport {
        outcomes: suite.checks().into_iter().map(run_check).collect(),
    }
}

pub fn check_name(id: u8) -> &'static str {
    match id {
        1 => "frozen-iff-fixed-point",
        2 => "equal-spaced-freezing-time",
        3 => "dumbbell-gap-phase",
        4 => "dumbbell-quadratic-scaling",
        5 => "kurz-linear-scaling",
        6 => "polygon-lower-bound",
        7 => "cycle-folding-identity",
        8 => "return-count-sqrt-bound",
        9 => "binomial-decay-kappa",
        10 => "recurrence-triple-agreement",
        11 => "plane-reconnection",
        12 => "exact-float-agreement",
        _ => "unknown",
    }
}

/// Runs one numbered check; wall-time limits are part of the check.
pub fn run_check(id: u8) -> CheckOutcome {
    let start = Instant::now();
    let (result, limit) = match id {
        1 => (frozen_iff_fixed_point(), Some(1.0)),
        2 => (equal_spaced_freezing(), None),
        3 => (dumbbell_gap_phase(), Some(60.0)),
        4 => (dumbbell_scaling(), Some(120.0)),
        5 => (kurz_scaling(), None),
        6 => (polygon_lower_bound(), Some(60.0)),
        7 => (cycle_folding(), Some(1.0)),
        8 => (return_count_bound(), None),
        9 => (binomial_decay(), Some(5.0)),
        10 => (recurrence_agreement(), None),
        11 => (plane_reconnection(), None),
        12 => (mode_agreement(), None),
        _ => (Err(format!("no check numbered {id}")), None),
    };
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match result {
        Ok(detail) => (true, detail),
        Err(detail) => (false, detail),
    };
    if let Some(secs) = limit {
        if elapsed.as_secs_f64() > secs {
            passed = false;
            detail = format!("{detail}; exceeded {secs}s budget");
        }
    }
    CheckOutcome {
        id,
        name: check_name(id),
        passed,
        detail,
        elapsed,
    }
}

type CheckResult = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn harness_err(e: HarnessError) -> String {
    e.to_string()
}

fn random_line(rng: &mut ChaCha8Rng) -> Configuration<Rational> {
    let n = rng.random_range(1..=8);
    let denominators = [1i64, 2, 3, 4, 6];
    let mut x = Rational::from_int(rng.random_range(-3..=3));
    let mut values = vec![x.clone()];
    for _ in 1..n {
        let gap = match rng.random_range(0..4) {
            0 => Rational::zero(),
            1 => Rational::one(),
            _ => {
                let den = denominators[rng.random_range(0..denominators.len())];
                Rational::from_ratio(rng.random_range(0..=3 * den), den)
            }
        };
        x += gap;
        values.push(x.clone());
    }
    Configuration::line(values).expect("non-empty")
}

fn frozen_iff_fixed_point() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(0x4b_2014);
    let mut frozen = 0;
    for k in 0..200 {
        let c = random_line(&mut rng);
        let fixed = step(&c) == c;
        let f = is_frozen(&c);
        ensure(f == fixed, || {
            format!(
                "case {k}: is_frozen={f} but step-fixed={fixed} for {:?}",
                c.coords()
            )
        })?;
        frozen += usize::from(f);
    }
    ensure(frozen > 0 && frozen < 200, || {
        format!("degenerate sample: {frozen}/200 frozen")
    })?;
    Ok(format!(
        "200 configurations agree ({frozen} frozen, {} moving)",
        200 - frozen
    ))
}

fn equal_spaced_freezing() -> CheckResult {
    let ns = [12, 24, 48, 96, 300];
    let rows = freeze_sweep(Family::EqualSpaced, &ns, None).map_err(harness_err)?;
    let mut parts = Vec::new();
    for r in &rows {
        let t = r
            .freeze_time
            .ok_or_else(|| format!("E_{} did not freeze", r.n))?;
        let target = 5.0 * r.n as f64 / 6.0;
        ensure((t as f64 - target).abs() <= 4.0, || {
            format!("E_{}: T={t}, 5n/6={target:.1}", r.n)
        })?;
        ensure(2 * t >= r.n, || format!("E_{}: T={t} below n/2", r.n))?;
        parts.push(format!("T({})={t}", r.n));
    }
    Ok(parts.join(" "))
}

fn dumbbell_gap_phase() -> CheckResult {
    let mut parts = Vec::new();
    for n in [8usize, 16] {
        let d: Configuration<Rational> = make_dumbbell_chain(n).map_err(|e| e.to_string())?;
        let run = simulate(&d, n * n, true);
        let report = check_phase_invariants(n, &run.trajectory).map_err(|e| e.to_string())?;
        ensure(report.passed(), || {
            format!("n={n}: {}", report.first_violation.as_ref().unwrap())
        })?;
        let t_star = report
            .t_star
            .ok_or_else(|| format!("n={n}: no topology change within n^2 steps"))?;
        ensure(report.checked_steps == t_star, || {
            format!(
                "n={n}: checked {} of {t_star} phase steps",
                report.checked_steps
            )
        })?;
        ensure(report.band_until == n * n / 8, || {
            format!(
                "n={n}: delta_0 band only checked to t={}",
                report.band_until
            )
        })?;
        ensure(report.first_change_is_cluster_contact(), || {
            format!("n={n}: first change is {:?}", report.first_change)
        })?;
        ensure(report.chain_disconnects_next(), || {
            format!("n={n}: next change is {:?}", report.next_change)
        })?;
        parts.push(format!(
            "n={n}: t*={t_star}, {} exact M-steps",
            report.checked_steps
        ));
    }
    Ok(parts.join("; "))
}

fn dumbbell_scaling() -> CheckResult {
    let ns = [16, 32, 64, 128, 256];
    let rows = freeze_sweep(Family::DumbbellChain, &ns, Some(NumericMode::float()))
        .map_err(harness_err)?;
    for r in &rows {
        let t = r
            .freeze_time
            .ok_or_else(|| format!("D_{} did not freeze", r.n))?;
        ensure(8 * t >= r.n * r.n, || {
            format!("D_{}: T={t} below n^2/8", r.n)
        })?;
    }
    let fit = fit_exponent(&rows).map_err(harness_err)?;
    ensure((1.8..=2.2).contains(&fit.b), || {
        format!("exponent {:.3} outside [1.8, 2.2]", fit.b)
    })?;
    let last = rows.last().expect("rows");
    let ratio = last.freeze_time.unwrap() as f64 / (last.n * last.n) as f64;
    ensure((0.15..=0.35).contains(&ratio), || {
        format!("T(256)/256^2 = {ratio:.4} outside [0.15, 0.35]")
    })?;
    let times: Vec<String> = rows
        .iter()
        .map(|r| format!("{}", r.freeze_time.unwrap()))
        .collect();
    Ok(format!(
        "T = [{}], b = {:.3}, T(256)/n^2 = {ratio:.4}",
        times.join(", "),
        fit.b
    ))
}

fn kurz_scaling() -> CheckResult {
    let ns = [16, 32, 64, 128, 256];
    let rows = freeze_sweep(Family::Kurz, &ns, None).map_err(harness_err)?;
    let fit = fit_exponent(&rows).map_err(harness_err)?;
    ensure((0.8..=1.2).contains(&fit.b), || {
        format!("exponent {:.3} outside [0.8, 1.2]", fit.b)
    })?;
    let times: Vec<String> = rows
        .iter()
        .map(|r| format!("{}", r.freeze_time.unwrap()))
        .collect();
    Ok(format!("T = [{}], b = {:.3}", times.join(", "), fit.b))
}

fn polygon_lower_bound() -> CheckResult {
    let mut parts = Vec::new();
    for n in [8usize, 16, 32] {
        let c = crate::configs::make_polygon(n).map_err(|e| e.to_string())?;
        let run = simulate(&c, 10 * n * n, false);
        let t = run
            .freeze_time
            .ok_or_else(|| format!("F_{n} did not freeze within 10n^2"))?;
        ensure(28 * t >= n * n, || format!("F_{n}: T={t} below n^2/28"))?;
        let k = clusters(&run.final_config).len();
        ensure(k == 1, || format!("F_{n}: {k} final clusters"))?;
        parts.push(format!("T({n})={t}"));
    }
    Ok(parts.join(" "))
}

fn cycle_folding() -> CheckResult {
    for n in 2..=6 {
        let report = claim1_identity(n, 25).map_err(|e| e.to_string())?;
        if let Some(row) = report
            .rows
            .iter()
            .find(|r| !r.identity_holds() || !r.inequality_holds())
        {
            return Err(format!("n={n} t={}: {row:?}", row.t));
        }
    }
    Ok("n in 2..=6, t in 0..=25: identity and inequality exact".to_string())
}

fn return_count_bound() -> CheckResult {
    let mut constants = Vec::new();
    for n in [5usize, 10, 20] {
        let (c, t) = return_count_constant(n, n * n).map_err(|e| e.to_string())?;
        ensure(c <= 4.0, || {
            format!("n={n}: max h11/sqrt(t) = {c:.4} at t={t}")
        })?;
        constants.push(c);
    }
    let lo = constants.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = constants.iter().cloned().fold(0.0, f64::max);
    let spread = (hi - lo) / lo;
    ensure(spread < 0.25, || {
        format!("constants {constants:?} vary by {:.1}%", spread * 100.0)
    })?;

    let p = path_matrix(10).map_err(|e| e.to_string())?;
    let exact = Scalar::to_f64(&expected_hits(&p, 0, 50).map_err(|e| e.to_string())?.h[0]);
    let estimate = mc_hits(&p, 0, 0, 50, 100_000, 0x5eed).map_err(|e| e.to_string())?;
    ensure((estimate - exact).abs() <= 0.05, || {
        format!("Monte Carlo {estimate:.4} vs exact {exact:.4}")
    })?;
    Ok(format!(
        "c1 = [{:.4}, {:.4}, {:.4}] spread {:.1}%; MC {estimate:.4} vs {exact:.4}",
        constants[0],
        constants[1],
        constants[2],
        spread * 100.0
    ))
}

fn binomial_decay() -> CheckResult {
    let d = claim2_kappa(400, 5);
    ensure(d.kappa_below_one(), || {
        format!("kappa* = {} not below 1", d.kappa)
    })?;
    ensure(d.geometric_bound_holds, || {
        "geometric bound fails for some r <= 5".to_string()
    })?;
    let threshold = d.threshold_m.ok_or("ratio above e^{-1/2} at m = 400")?;
    Ok(format!(
        "kappa* = {} (m = {}), bound holds for r <= 5, ratio <= e^(-1/2) for m >= {threshold}",
        d.kappa, d.argmax_m
    ))
}

fn recurrence_agreement() -> CheckResult {
    let mut compared = 0;
    for n in 3..=10usize {
        let p = path_matrix(n).map_err(|e| e.to_string())?;
        for k in [1i64, 2] {
            let kappa = Rational::from_int(k);
            let states = delta_recurrence(n, &kappa, 50).map_err(|e| e.to_string())?;
            let mut walker = HitAccumulator::new(&p, 0).map_err(|e| e.to_string())?;
            for (t, state) in states.iter().enumerate().skip(1) {
                let closed = delta_closed_form(n, &kappa, t).map_err(|e| e.to_string())?;
                ensure(state.delta == closed, || {
                    format!("n={n} kappa={k} t={t}: recurrence != power sum")
                })?;
                // power sum up to P^{t-1} counts visits over times 0..=t-1
                let hits = walker.hits();
                let via_hits = &kappa * (&hits[0] + &hits[n - 1]);
                ensure(closed[0] == via_hits, || {
                    format!("n={n} kappa={k} t={t}: first coordinate != kappa * hits")
                })?;
                walker.advance();
                compared += 1;
            }
        }
    }
    Ok(format!("{compared} (n, kappa, t) triples agree exactly"))
}

fn plane_reconnection() -> CheckResult {
    let run = simulate(&plane_triple::<Rational>(), 10, false);
    ensure(run.freeze_time == Some(2), || {
        format!("freeze time {:?}", run.freeze_time)
    })?;
    let cl = clusters(&run.final_config);
    let target = vec![Rational::from_ratio(1, 3), Rational::zero()];
    ensure(cl.len() == 1 && cl[0].position == target, || {
        format!("final clusters {cl:?}")
    })?;
    Ok("single cluster at (1/3, 0) at t = 2".to_string())
}

fn mode_agreement() -> CheckResult {
    let mut compared = 0;
    for family in [Family::EqualSpaced, Family::DumbbellChain, Family::Kurz] {
        let start = if family == Family::DumbbellChain {
            4
        } else {
            2
        };
        let ns: Vec<usize> = (start..=32).step_by(2).collect();
        let exact = freeze_sweep(family, &ns, Some(NumericMode::Exact)).map_err(harness_err)?;
        let float = freeze_sweep(family, &ns, Some(NumericMode::float())).map_err(harness_err)?;
        for (e, f) in exact.iter().zip(&float) {
            ensure(
                e.freeze_time.is_some() && e.freeze_time == f.freeze_time,
                || {
                    format!(
                        "{family} n={}: exact {:?} vs float {:?}",
                        e.n, e.freeze_time, f.freeze_time
                    )
                },
            )?;
            compared += 1;
        }
    }
    Ok(format!(
        "{compared} family members freeze at the same step in both modes"
    ))
}
