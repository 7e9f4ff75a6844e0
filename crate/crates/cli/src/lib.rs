//! `mmsym` command-line front end.
//!
//! Exit codes: 0 success, 1 a check failed or a multiset survived, 2 usage
//! error, 3 I/O or parse error. Every error is a single stderr line of the
//! form `error: <kind>: <message>`.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use mmsym_core::brent::{self, check_solution, generic_system, invariant_system, BrentSystem, ExportFormat};
use mmsym_core::catalog::family;
use mmsym_core::grammar::parse_cyclotomic;
use mmsym_core::group::{act_on_tensor, orbit_of, GroupElement};
use mmsym_core::invariants::{compute_classes, gamma_to_tensor, invariant_coords};
use mmsym_core::prover::{enumerate_multisets, verify_theorem, TypeMultiset, MAX_SUPPORTED_LENGTH};
use mmsym_core::tensor::Tensor;
use mmsym_core::{Cyclotomic, Error};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "mmsym",
    version,
    about = "Symmetric decompositions of the 3x3 matrix multiplication tensor"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Generic,
    Invariant,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
    M2,
}

impl From<Format> for ExportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => ExportFormat::Json,
            Format::Text => ExportFormat::Text,
            Format::M2 => ExportFormat::M2,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Re-derive every identity and certify all type multisets.
    Verify {
        #[arg(long, default_value_t = 23, value_parser = clap::value_parser!(u64).range(1..=MAX_SUPPORTED_LENGTH as u64))]
        max_length: u64,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        report: ReportFormat,
    },
    /// Orbit sum of one family instance.
    OrbitSum {
        #[arg(long = "type", value_parser = clap::value_parser!(u8).range(1..=44))]
        family: u8,
        /// Comma-separated field values; symbolic parameters when omitted.
        #[arg(long)]
        params: Option<String>,
        #[arg(long, conflicts_with = "full")]
        gamma: bool,
        #[arg(long)]
        full: bool,
    },
    /// The twelve classes of even basis indices.
    Classes,
    /// List type multisets up to a total length.
    Multisets {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=MAX_SUPPORTED_LENGTH as u64))]
        max_length: u64,
    },
    /// Emit a Brent equation system.
    Brent {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long, required_if_eq("mode", "generic"), conflicts_with = "types")]
        rank: Option<usize>,
        #[arg(long, required_if_eq("mode", "invariant"))]
        types: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Substitute an assignment into a system exported as JSON.
    CheckSolution {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        assignment: PathBuf,
    },
    /// Apply a group element to a tensor file.
    Act {
        #[arg(long = "g")]
        element: String,
        #[arg(long = "in")]
        input: PathBuf,
    },
}

/// A failure with its exit code and one-line kind.
#[derive(Debug)]
struct Failure {
    code: i32,
    kind: &'static str,
    msg: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            kind: "usage",
            msg: msg.into(),
        }
    }

    fn io(path: &std::path::Path, e: std::io::Error) -> Self {
        Failure {
            code: EXIT_INPUT,
            kind: "io",
            msg: format!("{}: {e}", path.display()),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::Parse { .. } | Error::Json(_) => (EXIT_INPUT, "parse"),
            Error::MissingVariable(_) => (EXIT_INPUT, "input"),
            Error::UnknownFamily(_) | Error::Arity { .. } | Error::UnknownFormat(_) | Error::Invalid(_) => {
                (EXIT_USAGE, "usage")
            }
            _ => (EXIT_CHECK_FAILED, "check"),
        };
        Failure {
            code,
            kind,
            msg: e.to_string(),
        }
    }
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Runs the CLI on `argv` (including the program name).
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("").trim_start_matches("error: ");
            let _ = writeln!(err, "error: usage: {}", one_line(first));
            return EXIT_USAGE;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}: {}", f.kind, one_line(&f.msg));
            f.code
        }
    }
}

fn emit(out: &mut dyn Write, s: &str) -> Result<(), Failure> {
    match out.write_all(s.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure {
            code: EXIT_INPUT,
            kind: "io",
            msg: e.to_string(),
        }),
        _ => Ok(()),
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::io(path, e))
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        Command::Verify { max_length, report } => {
            let r = verify_theorem(max_length as usize)?;
            match report {
                ReportFormat::Text => emit(out, &r.to_text())?,
                ReportFormat::Json => emit(out, &(r.to_json() + "\n"))?,
            }
            Ok(if r.verified() { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
        Command::OrbitSum {
            family: id,
            params,
            gamma: _,
            full,
        } => {
            let fam = family(id)?;
            let w = match params {
                None => fam.symbolic(0),
                Some(p) => {
                    let vals = p
                        .split(',')
                        .map(|s| parse_cyclotomic(s.trim()))
                        .collect::<mmsym_core::Result<Vec<Cyclotomic>>>()?;
                    fam.concrete(&vals)?
                }
            };
            let orbit = orbit_of(&w);
            let mut sum = Tensor::zero();
            for t in &orbit {
                sum.add_assign(t);
            }
            if orbit.len() != fam.length {
                emit(
                    out,
                    &format!("# orbit has {} elements (family length {})\n", orbit.len(), fam.length),
                )?;
            }
            let coords = invariant_coords(&sum);
            if gamma_to_tensor(&coords) != sum {
                return Err(Failure {
                    code: EXIT_CHECK_FAILED,
                    kind: "check",
                    msg: "orbit sum is not G-invariant".into(),
                });
            }
            if full {
                emit(out, &(sum.to_json() + "\n"))?;
            } else {
                emit(out, &format!("{coords}\n"))?;
            }
            Ok(EXIT_OK)
        }
        Command::Classes => {
            let classes = compute_classes()?;
            let mut s = String::from("class\tsize\trepresentative\tmembers\n");
            let mut total = 0;
            for c in &classes {
                total += c.size();
                let members: Vec<String> = c.members.iter().map(|a| a.to_string()).collect();
                s.push_str(&format!(
                    "Q{}\t{}\t{}\t{}\n",
                    c.id,
                    c.size(),
                    c.representative,
                    members.join(" ")
                ));
            }
            s.push_str(&format!("total\t{total}\n"));
            emit(out, &s)?;
            Ok(EXIT_OK)
        }
        Command::Multisets { max_length } => {
            let all = enumerate_multisets(max_length as usize);
            let mut s = String::new();
            for m in &all {
                s.push_str(&format!("{}\t{m}\n", m.total_length()));
            }
            s.push_str(&format!("# {} multisets\n", all.len()));
            emit(out, &s)?;
            Ok(EXIT_OK)
        }
        Command::Brent {
            mode,
            rank,
            types,
            format,
            out: path,
        } => {
            let system = match mode {
                Mode::Generic => {
                    let rank = rank.ok_or_else(|| Failure::usage("--rank is required with --mode generic"))?;
                    generic_system(rank)?
                }
                Mode::Invariant => {
                    if rank.is_some() {
                        return Err(Failure::usage("--rank only applies to --mode generic"));
                    }
                    let types = types.ok_or_else(|| Failure::usage("--types is required with --mode invariant"))?;
                    invariant_system(&TypeMultiset::parse(&types)?)?
                }
            };
            let text = system.export(format.into());
            match path {
                Some(p) => fs::write(&p, text).map_err(|e| Failure::io(&p, e))?,
                None => emit(out, &text)?,
            }
            Ok(EXIT_OK)
        }
        Command::CheckSolution { system, assignment } => {
            let sys = BrentSystem::from_json(&read(&system)?)?;
            let sol = brent::assignment_from_json(&read(&assignment)?)?;
            let outcome = check_solution(&sys, &sol)?;
            let n = sys.equations.len();
            if outcome.holds() {
                emit(out, &format!("OK: all {n} equations hold\n"))?;
                Ok(EXIT_OK)
            } else {
                let mut s = format!("FAILED: {} of {n} equations violated\n", outcome.failing.len());
                for k in &outcome.failing {
                    s.push_str(&format!("{k}\t{}\n", sys.label(*k)));
                }
                emit(out, &s)?;
                Ok(EXIT_CHECK_FAILED)
            }
        }
        Command::Act { element, input } => {
            let g = GroupElement::parse(&element)?;
            let t = Tensor::from_json(&read(&input)?)?;
            emit(out, &(act_on_tensor(&g, &t).to_json() + "\n"))?;
            Ok(EXIT_OK)
        }
    }
}
