use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use permcodec::enumeration::DEFAULT_NODE_BUDGET;

mod commands;

use commands::Failure;

#[derive(Parser, Debug)]
#[command(name = "permcodec", version, about = "Encode, decode and count M_k-avoiding permutations")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,

    /// Count cache (JSON lines).
    #[arg(long, global = true, env = "PERMCODEC_CACHE", default_value = "permcodec-cache.jsonl")]
    cache: PathBuf,

    /// Refuse runs estimated to visit more search nodes than this.
    #[arg(long, global = true, default_value_t = DEFAULT_NODE_BUDGET, value_parser = parse_budget)]
    budget: u128,

    /// Worker threads for enumeration.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Encode an M_k-avoiding permutation as a word pair.
    Encode {
        perm: String,
        #[arg(long)]
        k: usize,
    },
    /// Decode a word pair back into a permutation.
    Decode {
        w: String,
        wp: String,
        #[arg(long)]
        k: usize,
    },
    /// Number of length-n permutations avoiding a pattern.
    Count {
        #[arg(short = 'q', long = "pattern")]
        pattern: String,
        #[arg(short = 'n')]
        n: usize,
    },
    /// Size of a word family.
    Words {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        parity: String,
        #[arg(short = 'n')]
        n: usize,
    },
    /// Bound table for S_n(M_k), n = 0..=nmax.
    Bounds {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        nmax: usize,
    },
    /// Exhaustively check the encoder on Av_n(M_k).
    Verify {
        #[arg(long)]
        k: usize,
        #[arg(short = 'n')]
        n: usize,
    },
    /// Count S_n(q) for every symmetry class of length-k patterns.
    Scan {
        #[arg(long)]
        k: usize,
        #[arg(short = 'n')]
        n: usize,
    },
}

fn parse_budget(text: &str) -> Result<u128, String> {
    match text.parse::<u128>() {
        Ok(0) => Err("budget must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (stdout, code) = match commands::run(&cli) {
        Ok(out) => (out.text, out.code),
        Err(Failure { code, message, stdout }) => {
            eprintln!("error: {message}");
            (stdout.unwrap_or_default(), code)
        }
    };
    if !stdout.is_empty() {
        let mut lock = std::io::stdout().lock();
        let _ = lock.write_all(stdout.as_bytes());
        if !stdout.ends_with('\n') {
            let _ = lock.write_all(b"\n");
        }
    }
    ExitCode::from(code)
}
