//! Command-line front end.
//!
//! Every subcommand is translated into a [`JobSpec`], executed, and
//! reported as a canonical JSON certificate (sorted keys, exact data as
//! strings or integers). Exit codes: 0 verified/true, 1 invalid input,
//! 2 inconclusive bounded search, 3 definite negative verdict.

pub mod format;
pub mod job;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use format::{canonical_json, parse_family, parse_int_list, parse_int_set};
pub use job::{recheck_certificate, ExitStatus, JobFile, JobSpec, Outcome, Recheck};

#[derive(Debug, Parser)]
#[command(
    name = "spectile",
    version,
    about = "Exact checks and searches for spectral sets and tilings in dimension one",
    after_help = "EXAMPLES:\n\
                  \n  spectile utc-verify --p 2 --gamma 0,1 --n-max 5 --m-max 8\
                  \n  spectile check-spectrum --gamma 0,1/2 --b 0,1\
                  \n  spectile verify-omega --omega \"[0,3/4);[7/4,2)\" --t-residues 0 --t-period 1\
                  \n  spectile job job.json --output cert.json\
                  \n  spectile recheck cert.json"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the certificate JSON to this file (atomically)
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Print the certificate JSON to stdout instead of a summary
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads for parallel searches
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Is B a spectrum of the finite set Gamma?
    CheckSpectrum {
        /// Comma-separated rationals such as 0,1/2
        #[arg(long, value_name = "RATIONALS")]
        gamma: String,
        /// Candidate spectrum B
        #[arg(long, value_name = "RATIONALS")]
        b: String,
    },
    /// List every integer spectrum (1/p)A of Gamma with A in [0, n_max]
    EnumSpectra {
        /// Spectra live in (1/p)Z
        #[arg(long)]
        p: u64,
        /// Comma-separated rationals such as 0,1/2
        #[arg(long, value_name = "RATIONALS")]
        gamma: String,
        /// Spectra are searched in [0, n_max]
        #[arg(long)]
        n_max: u64,
        /// Cross-check against exhaustive enumeration
        #[arg(long)]
        oracle: bool,
    },
    /// List complements of one set mod m, or find a common complement of a family
    FindComplement(FindComplementArgs),
    /// Check one instance of the universal tiling question
    UtcVerify {
        /// Spectra live in (1/p)Z
        #[arg(long)]
        p: u64,
        /// Comma-separated rationals such as 0,1/2
        #[arg(long, value_name = "RATIONALS")]
        gamma: String,
        /// Spectra are searched in [0, n_max]
        #[arg(long)]
        n_max: u64,
        /// Largest complement period tried
        #[arg(long)]
        m_max: u64,
        /// Wall-clock limit for the complement search, in seconds
        #[arg(long)]
        time_limit: Option<u64>,
    },
    /// Glue a family into Omega = U ([r_i, r_{i+1}) + A_i / p)
    BuildOmega {
        /// Spectra live in (1/p)Z
        #[arg(long)]
        p: u64,
        /// Sets separated by ';', elements by ','
        #[arg(long, value_name = "FAMILY")]
        family: String,
        /// 0 = r_1 < ... < r_n+1 = 1/p
        #[arg(long, value_name = "RATIONALS")]
        breakpoints: String,
    },
    /// Does Omega tile the line by (1/p)(R + mZ)?
    VerifyOmega {
        /// Half-open intervals "[a,b);[c,d)"
        #[arg(long)]
        omega: String,
        /// Translates are (1/p)(R + mZ)
        #[arg(long, default_value_t = 1)]
        p: u64,
        /// Residues R of the complement
        #[arg(long, value_name = "INTEGERS")]
        t_residues: String,
        /// Period m of the complement
        #[arg(long)]
        t_period: u64,
    },
    /// Family -> Omega -> spectrum -> tiling of the line -> tilings of Z
    Roundtrip {
        /// Spectra live in (1/p)Z
        #[arg(long)]
        p: u64,
        /// Comma-separated rationals such as 0,1/2
        #[arg(long, value_name = "RATIONALS")]
        gamma: String,
        #[arg(long, value_name = "FAMILY")]
        family: String,
        /// 0 = r_1 < ... < r_n+1 = 1/p
        #[arg(long, value_name = "RATIONALS")]
        breakpoints: String,
        /// Largest complement period tried
        #[arg(long)]
        m_max: u64,
    },
    /// Exact spectral verdict for Gamma + pZ on Omega plus a truncated Gram check
    GramCheck {
        /// Half-open intervals "[a,b);[c,d)"
        #[arg(long)]
        omega: String,
        /// Comma-separated rationals such as 0,1/2
        #[arg(long, value_name = "RATIONALS")]
        gamma: String,
        /// Period of the spectrum Gamma + pZ
        #[arg(long)]
        p: u64,
        /// Frequencies in [-bound, bound] (default 3p)
        #[arg(long)]
        bound: Option<String>,
        /// Allowed float deviation of the Gram entries
        #[arg(long, default_value_t = job::DEFAULT_TOLERANCE)]
        tolerance: f64,
    },
    /// Run a JSON job file
    Job { file: PathBuf },
    /// Re-verify a certificate written by --output
    Recheck { file: PathBuf },
}

#[derive(Debug, Args)]
struct FindComplementArgs {
    /// A single tile (use with --m)
    #[arg(long, value_name = "INTEGERS", conflicts_with = "family")]
    a: Option<String>,
    /// Several tiles separated by ';' (use with --m-max)
    #[arg(long, value_name = "FAMILY")]
    family: Option<String>,
    /// List every complement with this period
    #[arg(long, conflicts_with = "m_max")]
    m: Option<u64>,
    /// Smallest common complement with period up to this bound
    #[arg(long)]
    m_max: Option<u64>,
}

fn split_strings(text: &str) -> Vec<String> {
    text.split(',').map(|s| s.trim().to_string()).collect()
}

impl Command {
    fn into_job(self) -> Result<Option<(JobSpec, Option<PathBuf>)>> {
        let job = match self {
            Command::CheckSpectrum { gamma, b } => JobSpec::CheckSpectrum {
                gamma: split_strings(&gamma),
                b: split_strings(&b),
            },
            Command::EnumSpectra { p, gamma, n_max, oracle } => JobSpec::EnumSpectra {
                p,
                gamma: split_strings(&gamma),
                n_max,
                oracle,
            },
            Command::FindComplement(args) => {
                let family = match (args.a, args.family) {
                    (Some(a), None) => vec![parse_int_set("a", &a)?],
                    (None, Some(f)) => parse_family("family", &f)?,
                    _ => {
                        return Err(Error::Parse {
                            field: "a".to_string(),
                            reason: "give --a or --family".to_string(),
                        })
                    }
                };
                JobSpec::FindComplement {
                    family,
                    m: args.m,
                    m_max: args.m_max,
                }
            }
            Command::UtcVerify { p, gamma, n_max, m_max, time_limit } => JobSpec::UtcVerify {
                p,
                gamma: split_strings(&gamma),
                n_max,
                m_max,
                time_limit_secs: time_limit,
            },
            Command::BuildOmega { p, family, breakpoints } => JobSpec::BuildOmega {
                p,
                family: parse_family("family", &family)?,
                breakpoints: split_strings(&breakpoints),
            },
            Command::VerifyOmega { omega, p, t_residues, t_period } => JobSpec::VerifyOmega {
                omega: omega.parse()?,
                p,
                t_residues: parse_int_list("t-residues", &t_residues)?,
                t_period,
            },
            Command::Roundtrip { p, gamma, family, breakpoints, m_max } => JobSpec::Roundtrip {
                p,
                gamma: split_strings(&gamma),
                family: parse_family("family", &family)?,
                breakpoints: split_strings(&breakpoints),
                m_max,
            },
            Command::GramCheck { omega, gamma, p, bound, tolerance } => JobSpec::GramCheck {
                omega: omega.parse()?,
                gamma: split_strings(&gamma),
                p,
                bound,
                tolerance,
            },
            Command::Job { file } => {
                let text = read(&file)?;
                let f: JobFile = serde_json::from_str(&text).map_err(|e| Error::Parse {
                    field: file.display().to_string(),
                    reason: e.to_string(),
                })?;
                return Ok(Some((f.job, f.output)));
            }
            Command::Recheck { .. } => return Ok(None),
        };
        Ok(Some((job, None)))
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse {
        field: path.display().to_string(),
        reason: e.to_string(),
    })
}

/// Writes via a temporary file in the target directory and renames it.
pub fn write_atomically(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitStatus::InvalidInput.code() } else { 0 };
        }
    };
    if let Some(n) = cli.jobs {
        // fails only if a pool already exists, e.g. when called twice in-process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitStatus::InvalidInput.code()
        }
    }
}

fn execute(cli: Cli) -> Result<i32> {
    if let Command::Recheck { file } = &cli.command {
        let text = read(file)?;
        let r = recheck_certificate(&text)?;
        println!(
            "input hash: {}\ncanonical encoding: {}\nsame result on re-run: {}\nindependent check: {}",
            ok_str(r.hash_ok),
            ok_str(r.canonical),
            ok_str(r.same_result),
            ok_str(r.independent_ok)
        );
        return Ok(if r.ok() { 0 } else { ExitStatus::Negative.code() });
    }
    let Some((job, file_output)) = cli.command.into_job()? else {
        unreachable!("recheck handled above")
    };
    let outcome = job.execute()?;
    let text = canonical_json(&outcome.certificate);
    if let Some(path) = cli.output.or(file_output) {
        write_atomically(&path, &text).map_err(|e| Error::Parse {
            field: "output".to_string(),
            reason: format!("{}: {e}", path.display()),
        })?;
    }
    if cli.json {
        print!("{text}");
    } else {
        println!("{}", outcome.summary);
        println!("verdict: {}", outcome.certificate["verdict"].as_str().unwrap_or("?"));
    }
    Ok(outcome.status.code())
}

fn ok_str(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAILED"
    }
}
