//! `shiftcalc`: verify, search and compare shift equivalences, and build
//! the corresponding concrete and homotopy shifts of graph correspondences.

mod commands;
mod io;
mod report;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::report::Exit;

#[derive(Parser, Debug)]
#[command(name = "shiftcalc", version, about = "Shift equivalence of nonnegative integer matrices and their graph correspondences")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Human-readable progress and timing on stderr.
    #[arg(long, global = true)]
    pub verbose: bool,
    /// Worker threads for parallel stages.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub jobs: u32,
    /// Numeric tolerance; defaults to $SHIFTCALC_TOL, then 1e-9.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the four shift equivalence equations of a witness, given as
    /// one witness file or as separate matrix files.
    VerifySe {
        #[arg(long, conflicts_with_all = ["a", "b", "r", "s", "lag"])]
        witness: Option<PathBuf>,
        #[arg(long, required_unless_present = "witness")]
        a: Option<PathBuf>,
        #[arg(long, required_unless_present = "witness")]
        b: Option<PathBuf>,
        #[arg(long, required_unless_present = "witness")]
        r: Option<PathBuf>,
        #[arg(long, required_unless_present = "witness")]
        s: Option<PathBuf>,
        #[arg(long, required_unless_present = "witness")]
        lag: Option<u32>,
    },
    /// Search for a witness with entries in [0, bound].
    SearchSe {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, default_value_t = 1)]
        lag: u32,
        #[arg(long)]
        bound: u64,
        /// Write the witness here when one is found.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Shift equivalence invariants of one matrix.
    Invariants {
        #[arg(long)]
        a: PathBuf,
    },
    /// Try to separate two matrices by invariants.
    Compare {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Graph correspondence operations.
    #[command(subcommand)]
    Corr(CorrCommand),
    /// Concrete shifts and their alignment.
    #[command(subcommand)]
    Aligned(AlignedCommand),
    /// Homotopy shift equivalence.
    #[command(subcommand)]
    Homotopy(HomotopyCommand),
    /// Run the built-in property suite on bundled fixtures.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
enum CorrCommand {
    /// Interior tensor product of two correspondences.
    Tensor {
        /// Left factor: a matrix or correspondence file.
        #[arg(long, visible_alias = "left")]
        r: PathBuf,
        /// Right factor.
        #[arg(long, visible_alias = "right")]
        s: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that psi is a 2-arrow between the 1-arrows f and g.
    #[command(name = "check-2arrow")]
    CheckTwoArrow {
        #[arg(long)]
        psi: PathBuf,
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum AlignedCommand {
    /// Check unitarity and both alignment equations of a shift file.
    Verify {
        #[arg(long)]
        data: PathBuf,
    },
    /// Build the concrete shift of a witness.
    FromSe {
        #[arg(long)]
        witness: PathBuf,
        #[arg(long)]
        phi_m: Option<PathBuf>,
        #[arg(long)]
        phi_n: Option<PathBuf>,
        #[arg(long)]
        psi_x: Option<PathBuf>,
        #[arg(long)]
        psi_y: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum HomotopyCommand {
    /// Concrete homotopy shift of a witness, with both homotopies sampled.
    FromSe {
        #[arg(long)]
        witness: PathBuf,
        #[arg(long, default_value_t = shiftcalc::homotopy::DEFAULT_STEPS)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { Exit::Usage } else { Exit::Ok };
            let _ = e.print();
            return code.into();
        }
    };
    let ctx = match commands::Context::new(&cli.global) {
        Ok(ctx) => ctx,
        Err(msg) => {
            eprintln!("shiftcalc: {msg}");
            return Exit::Usage.into();
        }
    };
    let outcome = match cli.command {
        Command::VerifySe { witness, a, b, r, s, lag } => {
            let source = match witness {
                Some(path) => commands::WitnessSource::File(path),
                // clap enforces that all five are present without --witness
                None => commands::WitnessSource::Parts {
                    a: a.unwrap_or_default(),
                    b: b.unwrap_or_default(),
                    r: r.unwrap_or_default(),
                    s: s.unwrap_or_default(),
                    lag: lag.unwrap_or_default(),
                },
            };
            commands::verify_se(&ctx, &source)
        }
        Command::SearchSe { a, b, lag, bound, out } => commands::search_se(&ctx, &a, &b, lag, bound, out.as_deref()),
        Command::Invariants { a } => commands::invariants(&ctx, &a),
        Command::Compare { a, b } => commands::compare(&ctx, &a, &b),
        Command::Corr(CorrCommand::Tensor { r, s, out }) => commands::corr_tensor(&ctx, &r, &s, out.as_deref()),
        Command::Corr(CorrCommand::CheckTwoArrow { psi, f, g }) => commands::check_two_arrow_cmd(&ctx, &psi, &f, &g),
        Command::Aligned(AlignedCommand::Verify { data }) => commands::aligned_verify(&ctx, &data),
        Command::Aligned(AlignedCommand::FromSe { witness, phi_m, phi_n, psi_x, psi_y, out }) => {
            let overrides = commands::OverridePaths { phi_m, phi_n, psi_x, psi_y };
            commands::aligned_from_se(&ctx, &witness, &overrides, out.as_deref())
        }
        Command::Homotopy(HomotopyCommand::FromSe { witness, steps, out }) => {
            commands::homotopy_from_se(&ctx, &witness, steps, out.as_deref())
        }
        Command::Selftest { seed } => selftest::run(&ctx, seed),
    };
    ctx.finish(outcome).into()
}
