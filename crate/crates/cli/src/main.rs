mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use pilab_core::witness::Schedule;

use config::{Overrides, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "pilab", version, about = "Codimension, cocharacter and exponent computations for word algebras")]
struct Cli {
    #[command(flatten)]
    flags: Flags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Flags {
    /// Config file of `key = value` lines; flags override it
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    m: Option<usize>,
    /// `periodic:01101` or `mechanical:alpha=0.3819660113,rho=0`
    #[arg(long, global = true)]
    word: Option<String>,
    /// Adjoin a unit
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "true")]
    unital: Option<bool>,
    #[arg(long, global = true)]
    n_min: Option<usize>,
    #[arg(long, global = true)]
    n_max: Option<usize>,
    /// Maximal number of rows in cocharacter tables
    #[arg(long, global = true)]
    d: Option<usize>,
    #[arg(long, global = true)]
    eps: Option<f64>,
    #[arg(long, global = true)]
    delta: Option<f64>,
    /// Allow degrees above the built-in caps
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "true")]
    cap_override: Option<bool>,
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Seed for the modular primes and sampled verification cases
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory for CSV and JSON reports
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

impl Flags {
    fn overrides(&self) -> Overrides {
        Overrides {
            m: self.m,
            word: self.word.clone(),
            unital: self.unital,
            n_min: self.n_min,
            n_max: self.n_max,
            d: self.d,
            eps: self.eps,
            delta: self.delta,
            cap_override: self.cap_override,
            workers: self.workers,
            seed: self.seed,
            out: self.out.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ScheduleArg {
    Dense,
    Doubling,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Prefix, factor complexity and partial slopes of the word
    Word {
        #[arg(long, default_value_t = 16)]
        length: usize,
    },
    /// Codimensions c_n with rank certificates
    Codim,
    /// Cocharacter tables and their audits
    Cochar,
    /// c_n^(1/n) against the exponent formula
    Exponent,
    /// Verification suites (all when none is named)
    Verify {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(commands::SUITES))]
        suites: Vec<String>,
    },
    /// Witness partitions approaching the unital exponent
    Witness {
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, value_enum, default_value_t = ScheduleArg::Dense)]
        schedule: ScheduleArg,
        #[arg(long, default_value_t = 1)]
        r_start: usize,
    },
    /// Find (m, alpha) whose unital algebra has exponent gamma
    Realize {
        #[arg(long, allow_negative_numbers = true)]
        gamma: f64,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Word { .. } => "word",
            Command::Codim => "codim",
            Command::Cochar => "cochar",
            Command::Exponent => "exponent",
            Command::Verify { .. } => "verify",
            Command::Witness { .. } => "witness",
            Command::Realize { .. } => "realize",
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let started = Instant::now();
    let file = match &cli.flags.config {
        Some(path) => Overrides::from_file(path)?,
        None => Overrides::default(),
    };
    let cfg = RunConfig::resolve(file.merged(cli.flags.overrides()))?;
    if let Some(w) = cfg.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
            .context("configuring the worker pool")?;
    }
    let reports = match &cli.command {
        Command::Word { length } => commands::word(&cfg, *length)?,
        Command::Codim => commands::codim(&cfg)?,
        Command::Cochar => commands::cochar(&cfg)?,
        Command::Exponent => commands::exponent(&cfg)?,
        Command::Verify { suites } => commands::verify(&cfg, suites)?,
        Command::Witness {
            count,
            schedule,
            r_start,
        } => {
            let schedule = match schedule {
                ScheduleArg::Dense => Schedule::Dense,
                ScheduleArg::Doubling => Schedule::Doubling,
            };
            commands::witness_cmd(&cfg, *count, schedule, *r_start)?
        }
        Command::Realize { gamma } => commands::realize(&cfg, *gamma)?,
    };
    for r in &reports {
        let body = report::emit(&cfg, cli.command.name(), r, started)?;
        for n in &r.notes {
            println!("# {n}");
        }
        print!("{body}");
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
