use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use preab_core::backends::Backend;
use preab_core::conditions::{Check, ProbeParams};
use preab_core::report::{cmd_audit, cmd_check, cmd_decompose, AuditOverrides, CheckRequest, EXIT_ERROR};

/// Kernels, cokernels and semi-abelian condition audits in concrete categories.
#[derive(Parser)]
#[command(name = "preab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a randomized audit and write a JSON report.
    Audit {
        /// TOML audit configuration.
        #[arg(long)]
        config: PathBuf,
        /// Report destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the configured seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the configured backend.
        #[arg(long)]
        backend: Option<Backend>,
        /// Worker threads (does not affect the report).
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Run one check on a JSON instance, or replay a recorded check result.
    Check {
        /// VectQ, SubVect, FiltVect_<n> or LatZ; taken from a replayed record when omitted.
        #[arg(long)]
        backend: Option<Backend>,
        /// Check name, e.g. right_iii, left_vii, strict, lemma2.
        #[arg(long)]
        check: Option<Check>,
        /// Instance or check-result JSON file; stdin when omitted or `-`.
        #[arg(long)]
        instance: Option<PathBuf>,
        #[command(flatten)]
        probe: ProbeArgs,
    },
    /// Print kernel, cokernel, canonical decomposition and classification.
    Decompose {
        /// VectQ, SubVect, FiltVect_<n> or LatZ.
        #[arg(long)]
        backend: Backend,
        /// Morphism JSON file; stdin when omitted or `-`.
        #[arg(long)]
        morphism: Option<PathBuf>,
    },
}

/// Semi-stability probe parameters; all three must be given together.
#[derive(Args)]
struct ProbeArgs {
    /// Pushouts or pullbacks tried by a semi-stability probe.
    #[arg(long, requires_all = ["probe_seed", "probe_dim_bound"])]
    probe_samples: Option<usize>,
    /// Seed for the probe's test maps.
    #[arg(long, requires = "probe_samples")]
    probe_seed: Option<u64>,
    /// Dimension bound for the probe's test objects.
    #[arg(long, requires = "probe_samples")]
    probe_dim_bound: Option<usize>,
}

impl ProbeArgs {
    fn params(&self) -> Option<ProbeParams> {
        Some(ProbeParams { samples: self.probe_samples?, seed: self.probe_seed?, dim_bound: self.probe_dim_bound? })
    }
}

fn read_input(path: Option<&PathBuf>) -> std::io::Result<String> {
    match path {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p),
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn main() -> ExitCode {
    // usage errors exit with 1 so that 2 always means a failed check
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR as u8 } else { 0 });
        }
    };
    let mut stdout = std::io::stdout().lock();
    let mut stderr = std::io::stderr();
    let code = match cli.command {
        Command::Audit { config, out, seed, backend, workers } => {
            cmd_audit(&config, out.as_deref(), &AuditOverrides { seed, backend }, workers, &mut stdout, &mut stderr)
        }
        Command::Check { backend, check, instance, probe } => match read_input(instance.as_ref()) {
            Ok(text) => {
                cmd_check(&CheckRequest { backend, check, probe: probe.params() }, &text, &mut stdout, &mut stderr)
            }
            Err(e) => {
                eprintln!("error: cannot read instance: {e}");
                EXIT_ERROR
            }
        },
        Command::Decompose { backend, morphism } => match read_input(morphism.as_ref()) {
            Ok(text) => cmd_decompose(backend, &text, &mut stdout, &mut stderr),
            Err(e) => {
                eprintln!("error: cannot read morphism: {e}");
                EXIT_ERROR
            }
        },
    };
    ExitCode::from(code as u8)
}
