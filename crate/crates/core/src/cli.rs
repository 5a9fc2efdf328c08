//! Command-line front end: `build`, `simulate`, `audit` and `analyze`.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_integer::Integer;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::audit;
use crate::scpir::{self, Method, RetrievalTranscript, Scheme};
use crate::sda;
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_AUDIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const ANALYSIS_HEADER: &str =
    "n,m,gcd,eta_equal,eta_greedy,eta_improved,eta_lower,f_equal,f_greedy,f_improved,f_lower,gap_bound";

#[derive(Debug, Parser)]
#[command(name = "scpir", version, about = "Storage design arrays and storage-constrained PIR")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a storage design array and write it in ASCII form.
    Build {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value = "greedy", value_parser = ["equal", "greedy", "improved"])]
        method: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one retrieval end to end and print its transcript.
    Simulate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        /// File length as a multiple of N(M-1)/gcd(N,M).
        #[arg(long, default_value_t = 1)]
        l_mult: usize,
        /// 1-based index of the requested file.
        #[arg(long)]
        theta: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "greedy", value_parser = ["equal", "greedy", "improved"])]
        method: String,
        /// Write the JSON transcript here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustively audit the greedy scheme at the minimal file length.
    Audit {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the report as CSV here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare constructions for every 2 <= m <= n <= n-max.
    Analyze {
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisRow {
    pub n: usize,
    pub m: usize,
    pub gcd: usize,
    pub eta_equal: usize,
    pub eta_greedy: usize,
    pub eta_improved: Option<usize>,
    pub eta_lower: usize,
    pub gap_bound: usize,
}

impl AnalysisRow {
    pub fn compute(n: usize, m: usize) -> Result<Self> {
        let gcd = n.gcd(&m);
        let eta_improved = match sda::eta_improved(n, m) {
            Some(_) => Some(sda::build_improved(n, m)?.eta()),
            None => None,
        };
        Ok(AnalysisRow {
            n,
            m,
            gcd,
            eta_equal: sda::build_equal_size(n, m)?.eta(),
            eta_greedy: sda::build_greedy(n, m)?.eta(),
            eta_improved,
            eta_lower: sda::eta_lower_bound(n, m)?,
            gap_bound: if m == n { 1 } else { m.min(n - m) / gcd },
        })
    }

    pub fn to_csv(&self) -> String {
        let f = |eta: usize| eta * (self.m - 1);
        let opt = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.n,
            self.m,
            self.gcd,
            self.eta_equal,
            self.eta_greedy,
            opt(self.eta_improved),
            self.eta_lower,
            f(self.eta_equal),
            f(self.eta_greedy),
            opt(self.eta_improved.map(f)),
            f(self.eta_lower),
            self.gap_bound
        )
    }
}

/// Rows for every `2 <= m <= n <= n_max`, sorted by `(n, m)`.
pub fn analyze(n_max: usize) -> Result<Vec<AnalysisRow>> {
    let pairs: Vec<(usize, usize)> = (2..=n_max).flat_map(|n| (2..=n).map(move |m| (n, m))).collect();
    pairs.into_par_iter().map(|(n, m)| AnalysisRow::compute(n, m)).collect()
}

pub fn analysis_csv(rows: &[AnalysisRow]) -> String {
    let mut out = String::from(ANALYSIS_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.to_csv());
        out.push('\n');
    }
    out
}

#[derive(Debug, Serialize)]
struct SimulationRecord<'a> {
    n: usize,
    m: usize,
    k: usize,
    file_len: usize,
    seed: u64,
    decode_match: bool,
    #[serde(flatten)]
    transcript: &'a RetrievalTranscript,
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn write_file(path: &PathBuf, contents: &str) -> Result<()> {
    std::fs::write(path, contents)
        .map_err(|e| Error::InvalidParameters(format!("cannot write {}: {e}", path.display())))
}

fn io(e: std::io::Error) -> Error {
    Error::InvalidParameters(format!("output failed: {e}"))
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Build { n, m, method, out: path } => {
            let sda = method.parse::<Method>()?.build(n, m)?;
            let ascii = sda.to_ascii();
            match path {
                Some(p) => write_file(&p, &ascii)?,
                None => out.write_all(ascii.as_bytes()).map_err(io)?,
            }
            writeln!(out, "eta={} F={}", sda.eta(), sda.eta() * (m - 1).max(1)).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Simulate {
            n,
            m,
            k,
            l_mult,
            theta,
            seed,
            method,
            out: path,
        } => {
            if theta == 0 || theta > k {
                return Err(Error::InvalidParameters(format!("theta must be in 1..={k} (1-based), got {theta}")));
            }
            if l_mult == 0 {
                return Err(Error::InvalidParameters("l-mult must be positive".into()));
            }
            let scheme = Scheme::build(n, m, k, l_mult, method.parse()?, seed)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(1);
            let bases = scpir::random_bases(&scheme.layout, k, &mut rng);
            let t = scpir::retrieve(theta, &scheme.plan, &scheme.layout, &scheme.library, &bases)?;
            let decode_match = t.decoded_file == scheme.library.file(theta)?;
            for g in &t.groups {
                writeln!(out, "group {} servers {} base {:?}", g.group, g.servers, g.base).map_err(io)?;
                for e in &g.exchanges {
                    if e.silent {
                        writeln!(out, "  server {} query {:?} SILENT", e.server, e.query).map_err(io)?;
                    } else {
                        writeln!(out, "  server {} query {:?} payload {}", e.server, e.query, e.payload_len)
                            .map_err(io)?;
                    }
                }
            }
            writeln!(out, "downloaded={}", t.downloaded_symbols).map_err(io)?;
            writeln!(out, "decode-match={decode_match}").map_err(io)?;
            if let Some(p) = path {
                let record = SimulationRecord {
                    n,
                    m,
                    k,
                    file_len: scheme.layout.file_len,
                    seed,
                    decode_match,
                    transcript: &t,
                };
                let json = serde_json::to_string_pretty(&record)
                    .map_err(|e| Error::InvalidParameters(format!("serialization failed: {e}")))?;
                write_file(&p, &json)?;
            }
            Ok(if decode_match { EXIT_OK } else { EXIT_AUDIT_FAIL })
        }
        Command::Audit { n, m, k, seed, out: path } => {
            let report = audit::run_all(n, m, k, seed)?;
            writeln!(out, "{report}").map_err(io)?;
            if let Some(p) = path {
                write_file(&p, &report.to_csv())?;
            }
            Ok(if report.pass() { EXIT_OK } else { EXIT_AUDIT_FAIL })
        }
        Command::Analyze { n_max, out: path } => {
            let csv = analysis_csv(&analyze(n_max)?);
            match path {
                Some(p) => write_file(&p, &csv)?,
                None => out.write_all(csv.as_bytes()).map_err(io)?,
            }
            Ok(EXIT_OK)
        }
    }
}
