//! Command-line front end.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};

use crate::algebraic::NumberField;
use crate::automaton::OrderedAutomaton;
use crate::beta::{beta_automaton, beta_polynomial, quasi_greedy_one_with, DEFAULT_CAP};
use crate::brs::{empirical_check, prop5_check, thm2_decide};
use crate::discrepancy::Discrepancy;
use crate::error::{Error, SpectralError};
use crate::numeration::{Numeration, Rank};
use crate::poly::{self, format_int_poly};
use crate::spectral::{charpoly, is_pisot_automaton, is_primitive, PerronEigen, SpectralData};
use crate::vdc::{ValuedWord, VdcSequence};
use crate::word::{format_word, parse_word, EpWord};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

const DIGITS: usize = 12;

#[derive(Debug, Parser)]
#[command(name = "avdc", version, about = "Abstract van der Corput sequences over totally ordered automata")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check an automaton file.
    Validate { file: PathBuf },
    /// Print the mirror automaton.
    Mirror { file: PathBuf },
    /// Characteristic polynomial, Pisot verdict and eigenvectors.
    Spectral { file: PathBuf },
    /// Rank of a word (comma-separated letters).
    Rank {
        file: PathBuf,
        word: String,
        /// Rank in the pruned mirror language instead of L.
        #[arg(long)]
        lprime: bool,
    },
    /// Word of a given rank.
    Unrank {
        file: PathBuf,
        n: Rank,
        #[arg(long)]
        lprime: bool,
    },
    /// The points x_0, …, x_{N-1} as `n,word,value` CSV.
    Sequence {
        file: PathBuf,
        #[arg(long)]
        n_max: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// `N,count,D` CSV for the interval [0, ⟨y⟩).
    Discrepancy {
        file: PathBuf,
        #[arg(long)]
        y: EpWord,
        #[arg(long)]
        n_max: u64,
        #[arg(long, default_value_t = 1)]
        stride: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Decide whether [0, ⟨u⟩) is a bounded remainder set.
    Brs {
        file: PathBuf,
        #[arg(long)]
        u: EpWord,
        /// Also run the empirical growth check up to this N.
        #[arg(long)]
        empirical: Option<u64>,
    },
    /// Quasi-greedy expansion of 1, β-polynomial and β-automaton.
    Beta {
        /// Minimal polynomial coefficients, constant term first.
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        /// Write the automaton here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        allow_non_pisot: bool,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
}

/// Parses `args` (program name first) and runs the command; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.cmd, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_internal() {
                EXIT_INTERNAL
            } else {
                EXIT_INVALID
            }
        }
    }
}

fn load(path: &Path) -> Result<OrderedAutomaton, Error> {
    Ok(OrderedAutomaton::parse(&fs::read_to_string(path)?)?)
}

fn show_word(w: &[usize]) -> String {
    if w.is_empty() {
        "ε".to_string()
    } else {
        format_word(w)
    }
}

fn execute(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Error> {
    match cmd {
        Command::Validate { file } => {
            let aut = load(&file)?;
            writeln!(out, "ok: d = {}, sigma = {}", aut.d(), aut.sigma())?;
            writeln!(out, "self-mirror: {}", aut.is_self_mirror())?;
            writeln!(out, "smallest letter increases states: {}", aut.smallest_letter_increases())?;
        }
        Command::Mirror { file } => {
            write!(out, "{}", load(&file)?.mirror())?;
        }
        Command::Spectral { file } => return spectral(&load(&file)?, out),
        Command::Rank { file, word, lprime } => {
            let n = Numeration::new(&load(&file)?);
            let w = parse_word(&word)?;
            let r = if lprime { n.lprime_rank(&w)? } else { n.rank(&w)? };
            writeln!(out, "{r}")?;
        }
        Command::Unrank { file, n, lprime } => {
            let num = Numeration::new(&load(&file)?);
            let w = if lprime { num.lprime_unrank(&n)? } else { num.unrank(&n)? };
            writeln!(out, "{}", show_word(&w))?;
        }
        Command::Sequence { file, n_max, csv } => {
            let seq = VdcSequence::new(&load(&file)?)?;
            let mut wtr = csv::Writer::from_writer(sink_or(&csv, out)?);
            wtr.write_record(["n", "word", "value"])?;
            for (n, p) in seq.points(n_max).enumerate() {
                let v = seq.finite_value(&p.word);
                wtr.write_record([n.to_string(), format_word(&p.word), v.to_decimal(DIGITS)])?;
            }
            wtr.flush()?;
        }
        Command::Discrepancy {
            file,
            y,
            n_max,
            stride,
            csv,
        } => {
            let disc = Discrepancy::new(&load(&file)?)?;
            let u = disc.valued(&y)?;
            let stats = disc.sweep(&u, n_max, stride, sink_or(&csv, out)?)?;
            writeln!(err, "y = {} ≈ {}", u.value(), u.value().to_decimal(DIGITS))?;
            writeln!(err, "rows: {}", stats.rows)?;
            writeln!(err, "max |D|: {:.6}", stats.max_abs_d)?;
            writeln!(err, "max |D| / ln N: {:.6}", stats.max_ratio)?;
        }
        Command::Brs { file, u, empirical } => return brs(&load(&file)?, &u, empirical, out),
        Command::Beta {
            poly,
            out: path,
            allow_non_pisot,
            cap,
        } => {
            let field = NumberField::new(poly::parse_int_poly(&poly)?)?;
            let e = quasi_greedy_one_with(&field, cap, allow_non_pisot)?;
            let t = e.digits();
            writeln!(out, "t: {t}")?;
            writeln!(out, "beta-polynomial: {}", format_int_poly(&beta_polynomial(t), "x"))?;
            let aut = beta_automaton(t)?;
            match path {
                Some(p) => {
                    fs::write(&p, aut.to_string())?;
                    writeln!(out, "automaton written to {}", p.display())?;
                }
                None => write!(out, "{aut}")?,
            }
        }
    }
    Ok(EXIT_OK)
}

/// A file sink when a path is given, otherwise `out`.
fn sink_or<'a>(path: &Option<PathBuf>, out: &'a mut dyn Write) -> Result<Box<dyn Write + 'a>, Error> {
    Ok(match path {
        Some(p) => Box::new(std::io::BufWriter::new(fs::File::create(p)?)),
        None => Box::new(out),
    })
}

fn spectral(aut: &OrderedAutomaton, out: &mut dyn Write) -> Result<i32, Error> {
    let cp = charpoly(&aut.incidence());
    writeln!(out, "charpoly: {}", format_int_poly(&cp, "x"))?;
    writeln!(out, "primitive: {}", is_primitive(&aut.incidence()))?;
    writeln!(out, "pisot: {}", is_pisot_automaton(aut)?)?;
    let eig = PerronEigen::new(aut)?;
    let field = eig.field();
    writeln!(out, "minpoly: {}", format_int_poly(field.minpoly(), "x"))?;
    writeln!(out, "beta = b ≈ {}", eig.beta().to_decimal(DIGITS))?;
    for q in 1..=aut.d() {
        let e = eig.eta(q);
        writeln!(out, "eta_{q} = {e} ≈ {}", e.to_decimal(DIGITS))?;
    }
    let sd = match SpectralData::new(aut) {
        Ok(sd) => sd,
        Err(e @ SpectralError::ReducibleCharpoly { .. }) => {
            writeln!(out, "theta: unavailable ({e})")?;
            return Ok(EXIT_INVALID);
        }
        Err(e) => return Err(e.into()),
    };
    for r in 1..=aut.d() {
        let t = sd.theta(r);
        writeln!(out, "theta_{r} = {t} ≈ {}", t.to_decimal(DIGITS))?;
    }
    Ok(EXIT_OK)
}

fn brs(aut: &OrderedAutomaton, u: &EpWord, empirical: Option<u64>, out: &mut dyn Write) -> Result<i32, Error> {
    let eig = Arc::new(PerronEigen::new(aut)?);
    let vu = ValuedWord::new(aut, &eig, u)?;
    writeln!(out, "u = {} ≈ {}", vu.word(), vu.value().to_decimal(DIGITS))?;
    let prop5 = prop5_check(aut, &eig, &vu);
    let sd = match SpectralData::new(aut) {
        Ok(sd) => sd,
        Err(e @ SpectralError::ReducibleCharpoly { .. }) => {
            writeln!(out, "verdict: undecided ({e})")?;
            write_prop5(out, prop5)?;
            writeln!(out, "pisot: {}", is_pisot_automaton(aut)?)?;
            return Ok(EXIT_INVALID);
        }
        Err(e) => return Err(e.into()),
    };
    let v = thm2_decide(aut, &sd, &vu)?;
    writeln!(out, "{v}")?;
    if let Some(w) = &v.witness {
        writeln!(
            out,
            "witness: v = {}, k = {}, expected {}, zeta = {}",
            show_word(&w.v),
            w.k,
            w.expected,
            w.zeta
        )?;
    }
    write_prop5(out, v.prop5)?;
    if let Some(n_max) = empirical {
        let disc = Discrepancy::new(aut)?;
        let r = empirical_check(&disc, &vu, n_max);
        writeln!(out, "empirical: N = {}, max |D| = {:.6}, slope vs ln N = {:.4}", r.n_max, r.max_abs_d, r.slope)?;
        writeln!(
            out,
            "empirical: {} (plateau by 10^4: {})",
            if r.looks_bounded() { "bounded" } else { "unbounded" },
            r.plateaued()
        )?;
    }
    Ok(EXIT_OK)
}

fn write_prop5(out: &mut dyn Write, p: Option<(usize, usize)>) -> Result<(), Error> {
    match p {
        Some((m, q)) => writeln!(out, "prop5: m = {m}, q = {q}")?,
        None => writeln!(out, "prop5: none")?,
    }
    Ok(())
}
