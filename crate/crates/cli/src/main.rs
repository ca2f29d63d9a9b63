use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use hk_freeze::configs::{Family, FamilySpec};
use hk_freeze::gaps::{
    check_phase_invariants, exploratory_growth, write_gap_csv, write_growth_csv,
};
use hk_freeze::harness::{
    default_mode, fit_exponent, freeze_sweep, read_sweep_csv, step_cap, verify, write_sweep_csv,
    write_trajectory, Suite,
};
use hk_freeze::walks::{
    claim1_identity, claim2_kappa, delta_recurrence, expected_hits, mc_hits, path_matrix,
    write_delta_csv, write_hits_csv, write_return_csv,
};
use hk_freeze::{
    clusters, simulate, Configuration, NumericMode, Rational, Scalar, SimulationResult,
};

#[derive(Parser)]
#[command(
    name = "hkf",
    version,
    about = "Freezing-time experiments for bounded-confidence dynamics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one configuration until it freezes.
    Simulate {
        #[arg(long, default_value = "equal-spaced")]
        family: Family,
        #[arg(long, default_value_t = 8)]
        n: usize,
        /// Configuration file, used with `--family file`.
        #[arg(long)]
        file: Option<PathBuf>,
        /// exact or float; defaults by family and size.
        #[arg(long)]
        mode: Option<NumericMode>,
        #[arg(long)]
        max_steps: Option<usize>,
        /// Trajectory CSV (t,agent,coord,value).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Dumbbell chain only: gap CSV (t,i,y,delta).
        #[arg(long)]
        gaps_out: Option<PathBuf>,
        /// Dumbbell chain only: growth CSV (t,delta1,ratio).
        #[arg(long)]
        growth_out: Option<PathBuf>,
    },
    /// Freezing times over a list of sizes.
    Sweep {
        #[arg(long)]
        family: Family,
        #[arg(long, value_delimiter = ',', required = true)]
        ns: Vec<usize>,
        #[arg(long)]
        mode: Option<NumericMode>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Record wall-clock milliseconds (otherwise 0, keeping output reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// Fit T = a n^b to a sweep CSV.
    Fit {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Lazy random-walk quantities.
    Walk {
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        t: usize,
        #[arg(long, value_enum, default_value_t = WalkQuantity::Hits)]
        what: WalkQuantity,
        /// Monte Carlo samples for `hits`; 0 skips the estimate.
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 400)]
        m_max: u64,
        #[arg(long, default_value_t = 5)]
        r_max: u64,
    },
    /// Iterate the averaging recurrence with source term kappa.
    Delta {
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value = "2")]
        kappa: String,
        #[arg(long, default_value_t = 50)]
        t: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the acceptance checks.
    Verify {
        #[arg(long, default_value = "all")]
        suite: Suite,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum WalkQuantity {
    Hits,
    Q,
    Claim1,
    Claim2,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Simulate {
            family,
            n,
            file,
            mode,
            max_steps,
            out,
            gaps_out,
            growth_out,
        } => {
            let spec = match (family, file) {
                (Family::File, Some(path)) => FamilySpec::file(path),
                (Family::File, None) => bail!("--family file needs --file"),
                (f, _) => FamilySpec::new(f, n),
            };
            let mode = mode.unwrap_or_else(|| default_mode(family, n));
            let opts = SimOpts {
                max_steps,
                out,
                gaps_out,
                growth_out,
            };
            match mode {
                NumericMode::Exact => {
                    let run = simulate_cmd(spec.build::<Rational>()?, &spec, &opts)?;
                    if spec.family == Family::DumbbellChain {
                        println!("{}", check_phase_invariants(spec.n, &run.trajectory)?);
                    }
                }
                NumericMode::Float(tol) => {
                    simulate_cmd(spec.build::<f64>()?.with_tolerances(tol), &spec, &opts)?;
                }
            }
        }
        Command::Sweep {
            family,
            ns,
            mode,
            out,
            timing,
        } => {
            let rows = freeze_sweep(family, &ns, mode)?;
            write_sweep_csv(output(out.as_deref())?, &rows, timing)?;
        }
        Command::Fit { input } => {
            let file =
                File::open(&input).with_context(|| format!("opening {}", input.display()))?;
            let rows = read_sweep_csv(BufReader::new(file))?;
            let fit = fit_exponent(&rows)?;
            println!(
                "a={} b={} residual={} points={}",
                fit.a, fit.b, fit.residual, fit.points
            );
        }
        Command::Walk {
            n,
            t,
            what,
            samples,
            seed,
            out,
            m_max,
            r_max,
        } => walk_cmd(n, t, what, samples, seed, out.as_deref(), m_max, r_max)?,
        Command::Delta { n, kappa, t, out } => {
            let kappa = Rational::parse_token(&kappa).context("parsing --kappa")?;
            let states = delta_recurrence(n, &kappa, t)?;
            write_delta_csv(output(out.as_deref())?, &states)?;
        }
        Command::Verify { suite } => {
            let report = verify(suite);
            println!("{report}");
            if !report.passed() {
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

struct SimOpts {
    max_steps: Option<usize>,
    out: Option<PathBuf>,
    gaps_out: Option<PathBuf>,
    growth_out: Option<PathBuf>,
}

fn simulate_cmd<S: Scalar>(
    c: Configuration<S>,
    spec: &FamilySpec,
    opts: &SimOpts,
) -> Result<SimulationResult<S>> {
    let dumbbell = spec.family == Family::DumbbellChain;
    let record = opts.out.is_some()
        || (dumbbell && S::EXACT)
        || opts.gaps_out.is_some()
        || opts.growth_out.is_some();
    let cap = opts.max_steps.unwrap_or_else(|| step_cap(&c));
    let run = simulate(&c, cap, record);
    if let Some(path) = &opts.out {
        write_trajectory(output(Some(path))?, &run)?;
    }
    match run.freeze_time {
        Some(t) => println!(
            "agents={} mode={} freeze_time={t} clusters={}",
            c.len(),
            S::mode_name(),
            clusters(&run.final_config).len()
        ),
        None => println!(
            "agents={} mode={} not frozen after {} steps",
            c.len(),
            S::mode_name(),
            run.steps
        ),
    }
    for e in run.events.iter().take(3) {
        println!("  {e}");
    }
    if dumbbell {
        let n = spec.n;
        if let Some(path) = &opts.gaps_out {
            write_gap_csv(output(Some(path))?, n, &run.trajectory)?;
        }
        if let Some(path) = &opts.growth_out {
            write_growth_csv(output(Some(path))?, &exploratory_growth(n, &run.trajectory))?;
        }
    }
    Ok(run)
}

#[allow(clippy::too_many_arguments)]
fn walk_cmd(
    n: usize,
    t: usize,
    what: WalkQuantity,
    samples: usize,
    seed: u64,
    out: Option<&Path>,
    m_max: u64,
    r_max: u64,
) -> Result<()> {
    match what {
        WalkQuantity::Hits => {
            write_hits_csv(output(out)?, n, t)?;
            if samples > 0 {
                let p = path_matrix(n)?;
                let exact = expected_hits(&p, 0, t)?.h[0].clone();
                let estimate = mc_hits(&p, 0, 0, t, samples, seed)?;
                eprintln!(
                    "h11({t}) exact={exact} ({}) monte_carlo={estimate}",
                    Scalar::to_f64(&exact)
                );
            }
        }
        WalkQuantity::Q => write_return_csv(output(out)?, n, t)?,
        WalkQuantity::Claim1 => {
            let report = claim1_identity(n, t)?;
            let mut w = output(out)?;
            writeln!(w, "t,path_h11,cycle_h11,cycle_h1_last,identity,inequality")?;
            for r in &report.rows {
                writeln!(
                    w,
                    "{},{},{},{},{},{}",
                    r.t,
                    r.path_h11,
                    r.cycle_h11,
                    r.cycle_h1_last,
                    r.identity_holds(),
                    r.inequality_holds()
                )?;
            }
            w.flush()?;
        }
        WalkQuantity::Claim2 => {
            let d = claim2_kappa(m_max, r_max);
            let mut w = output(out)?;
            writeln!(w, "m,ratio")?;
            for (m, r) in &d.ratios {
                writeln!(w, "{m},{r}")?;
            }
            w.flush()?;
            let threshold = d.threshold_m.map_or("none".to_string(), |m| m.to_string());
            eprintln!(
                "kappa*={} ({}) at m={} geometric_bound={} threshold_m={threshold}",
                d.kappa,
                Scalar::to_f64(&d.kappa),
                d.argmax_m,
                d.geometric_bound_holds
            );
        }
    }
    Ok(())
}
