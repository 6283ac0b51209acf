use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};
use qkdv::hierarchy::ENGINE_VERSION;
use qkdv_cli::commands::{cmd_hodge, cmd_spectrum, cmd_tables, cmd_verify, Outcome, Which};
use qkdv_cli::config::{OutputFormat, RunConfig};

#[derive(Parser)]
#[command(name = "qkdv", version, about = "Exact tables, spectra and checks for the quantum KdV hierarchy")]
struct Cli {
    /// TOML or JSON run configuration; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    kmax: Option<i64>,
    #[arg(long, global = true)]
    jmax: Option<u32>,
    #[arg(long, global = true)]
    nmax: Option<u32>,
    #[arg(long, global = true)]
    mmax: Option<u32>,
    /// Comma-separated separating levels.
    #[arg(long, global = true, value_delimiter = ',')]
    kset: Option<Vec<i64>>,
    #[arg(long, global = true, env = "QKDV_CACHE")]
    cache: Option<PathBuf>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Truncation order of q-series.
    #[arg(long, global = true)]
    qtrunc: Option<u32>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build or load the tables and write the densities.
    Tables,
    /// Eigenvalues and eigenvectors for every degree up to nMax.
    Spectrum,
    /// Run one of the checks, or all of them.
    Verify {
        #[arg(value_enum)]
        which: VerifyArg,
    },
    /// Hodge integrals for genus 2..=gmax.
    Hodge {
        #[arg(long, default_value_t = 4)]
        gmax: u32,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum VerifyArg {
    Thm1,
    Thm2,
    Commute,
    Oracle,
    Quasimod,
    Appendix,
    All,
}

impl Cli {
    fn config(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(v) = self.kmax {
            cfg.k_max = v;
        }
        if let Some(v) = self.jmax {
            cfg.j_max = v;
        }
        if let Some(v) = self.nmax {
            cfg.n_max = v;
        }
        if let Some(v) = self.mmax {
            cfg.m_max = v;
        }
        if let Some(v) = &self.kset {
            cfg.k_set = v.clone();
        }
        if let Some(v) = &self.cache {
            cfg.cache_dir = v.clone();
        }
        if let Some(v) = &self.out {
            cfg.out_dir = v.clone();
        }
        if let Some(v) = self.format {
            cfg.format = v;
        }
        if let Some(v) = self.jobs {
            cfg.jobs = v;
        }
        if let Some(v) = self.qtrunc {
            cfg.q_trunc = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn report(o: &Outcome) {
    for l in &o.lines {
        println!("{l}");
    }
    for f in &o.files {
        println!("wrote {}", f.display());
    }
}

fn run(cli: Cli) -> Result<bool> {
    let cfg = cli.config()?;
    if cfg.jobs > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs).build_global()?;
    }
    let outcomes = match cli.cmd {
        Cmd::Tables => vec![cmd_tables(&cfg, ENGINE_VERSION)?.0],
        Cmd::Spectrum => vec![cmd_spectrum(&cfg)?],
        Cmd::Hodge { gmax } => vec![cmd_hodge(&cfg, gmax)?],
        Cmd::Verify { which } => {
            let all = [Which::Thm1, Which::Thm2, Which::Commute, Which::Oracle, Which::Quasimod, Which::Appendix];
            let chosen: Vec<Which> = match which {
                VerifyArg::All => all.to_vec(),
                VerifyArg::Thm1 => vec![Which::Thm1],
                VerifyArg::Thm2 => vec![Which::Thm2],
                VerifyArg::Commute => vec![Which::Commute],
                VerifyArg::Oracle => vec![Which::Oracle],
                VerifyArg::Quasimod => vec![Which::Quasimod],
                VerifyArg::Appendix => vec![Which::Appendix],
            };
            chosen.into_iter().map(|w| cmd_verify(&cfg, w)).collect::<Result<_>>()?
        }
    };
    outcomes.iter().for_each(report);
    Ok(outcomes.iter().all(|o| o.passed))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
