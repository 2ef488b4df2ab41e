//! `karyotest` subcommands. [`run`] takes explicit output streams so the
//! whole command line can be exercised in tests.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand};
use karyotype_core::axioms::{self, base_ontology};
use karyotype_core::band::{self, Chromosome};
use karyotype_core::iscn::{self, Band, Event, Karyotype};
use karyotype_core::ontology::TBox;
use karyotype_core::reasoner::{classify, TOP};

use crate::harness::run_suite;
use crate::{bands, facets, suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURES: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser)]
#[command(
    name = "karyotest",
    version,
    about = "Karyotype ontology tools and test runner"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an ISCN karyotype string and describe it
    Parse {
        #[arg(allow_hyphen_values = true)]
        karyotype: String,
    },
    /// Build the base ontology from a band table
    Build {
        #[arg(long)]
        bands: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Classify a serialized ontology
    Classify {
        file: PathBuf,
        /// Print whether SUB is subsumed by SUP
        #[arg(long, num_args = 2, value_names = ["SUB", "SUP"])]
        pair: Option<Vec<String>>,
    },
    /// Run the full test suite against a facet table
    Test {
        #[arg(long)]
        facets: PathBuf,
        #[arg(long)]
        bands: PathBuf,
        /// Omit the start time line, for byte-identical logs
        #[arg(long)]
        no_timestamp: bool,
    },
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
            let text = e.render().ansi().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let result = match cli.command {
        Command::Parse { karyotype } => cmd_parse(&karyotype, out),
        Command::Build { bands, output } => cmd_build(&bands, &output, out),
        Command::Classify { file, pair } => cmd_classify(&file, pair.as_deref(), out),
        Command::Test {
            facets,
            bands,
            no_timestamp,
        } => cmd_test(&facets, &bands, !no_timestamp, out),
    };
    match result {
        Ok(code) => code,
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_USAGE
        }
    }
}

type CmdResult = Result<i32, String>;

fn io(e: std::io::Error) -> String {
    e.to_string()
}

fn site(c: Chromosome, b: &Band) -> String {
    format!("{c}{b}")
}

fn describe(e: &Event) -> String {
    match e {
        Event::Gain(c) => format!("gain of chromosome {c}"),
        Event::Loss(c) => format!("loss of chromosome {c}"),
        Event::Translocation(a, b) => format!(
            "translocation between {} and {}",
            site(a.chromosome, &a.band),
            site(b.chromosome, &b.band)
        ),
        Event::Deletion {
            chromosome,
            band,
            end: None,
        } => format!("deletion at {}", site(*chromosome, band)),
        Event::Deletion {
            chromosome,
            band,
            end: Some(end),
        } => format!(
            "deletion from {} to {}",
            site(*chromosome, band),
            site(*chromosome, end)
        ),
        Event::Inversion {
            chromosome,
            from,
            to,
        } => {
            format!(
                "inversion from {} to {}",
                site(*chromosome, from),
                site(*chromosome, to)
            )
        }
        Event::Duplication {
            chromosome,
            from,
            to,
        } => {
            format!(
                "duplication from {} to {}",
                site(*chromosome, from),
                site(*chromosome, to)
            )
        }
    }
}

fn write_karyotype(k: &Karyotype, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "karyotype: {k}")?;
    writeln!(out, "total: {}", k.total)?;
    let sex: String = k.sex.iter().map(|s| s.symbol()).collect();
    writeln!(out, "sex chromosomes: {sex}")?;
    writeln!(out, "ploidy: {}", axioms::ploidy(k.total))?;
    match axioms::derivation_base(k) {
        Ok(base) => writeln!(out, "derived from: {}", base.name())?,
        Err(e) => writeln!(out, "derived from: none ({e})")?,
    }
    writeln!(out, "class: {}", axioms::karyotype_class_name(k))?;
    writeln!(out, "events: {}", k.events.len())?;
    for e in &k.events {
        writeln!(out, "  {e}  {}", describe(e))?;
    }
    Ok(())
}

fn cmd_parse(text: &str, out: &mut dyn Write) -> CmdResult {
    match iscn::parse(text) {
        Ok(k) => {
            write_karyotype(&k, out).map_err(io)?;
            Ok(EXIT_OK)
        }
        Err(e) => Err(format!(
            "cannot parse karyotype {text:?}: {e}\n  {text}\n  {:>width$}",
            "^",
            width = e.position + 1
        )),
    }
}

fn cmd_build(bands_path: &Path, output: &Path, out: &mut dyn Write) -> CmdResult {
    let trees = bands::load_band_table(bands_path).map_err(|e| e.to_string())?;
    let batch = band::expand_all(&trees).map_err(|e| e.to_string())?;
    let tbox = base_ontology(&batch).map_err(|e| e.to_string())?;
    fs::write(output, tbox.serialize()).map_err(|e| format!("{}: {e}", output.display()))?;
    writeln!(
        out,
        "wrote {}: {} classes, {} roles, {} axioms, {} band classes",
        output.display(),
        tbox.classes().len(),
        tbox.roles().len(),
        tbox.axioms().len(),
        batch.declarations.len()
    )
    .map_err(io)?;
    Ok(EXIT_OK)
}

fn load_ontology(path: &Path) -> Result<TBox, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    TBox::deserialize(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn cmd_classify(path: &Path, pair: Option<&[String]>, out: &mut dyn Write) -> CmdResult {
    let tbox = load_ontology(path)?;
    let map = classify(&tbox);
    match pair {
        Some([sub, sup]) => {
            let answer = map.is_subclass(sub, sup).map_err(|e| e.to_string())?;
            writeln!(out, "{answer}").map_err(io)?;
        }
        Some(_) => return Err("--pair takes exactly two class names".into()),
        None => {
            for (class, sups) in map.classes() {
                let sups: Vec<&str> = sups
                    .iter()
                    .map(String::as_str)
                    .filter(|s| *s != class && *s != TOP)
                    .collect();
                let sups = if sups.is_empty() {
                    TOP.to_string()
                } else {
                    sups.join(" ")
                };
                writeln!(out, "{class} ⊑ {sups}").map_err(io)?;
            }
        }
    }
    writeln!(out, "coherent: {}", map.coherent()).map_err(io)?;
    writeln!(out, "consistent: {}", map.consistent()).map_err(io)?;
    Ok(EXIT_OK)
}

fn cmd_test(
    facets_path: &Path,
    bands_path: &Path,
    timestamp: bool,
    out: &mut dyn Write,
) -> CmdResult {
    let table = facets::load_facet_table(facets_path).map_err(|e| e.to_string())?;
    let trees = bands::load_band_table(bands_path).map_err(|e| e.to_string())?;
    let mut tbox = suite::build_ontology(&trees, &table).map_err(|e| e.to_string())?;
    let cases = suite::standard_suite(&trees, &table, &tbox).map_err(|e| e.to_string())?;

    if timestamp {
        let secs = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        writeln!(out, "started: {secs}").map_err(io)?;
    }
    let report = run_suite(&cases, &mut tbox);
    for (r, message) in report.failures() {
        writeln!(out, "FAIL [{}] {}: {}: {message}", r.tier, r.group, r.id).map_err(io)?;
    }
    write!(out, "{}", report.table()).map_err(io)?;
    let status = if report.is_pass() { "pass" } else { "fail" };
    writeln!(
        out,
        "status: {status} ({} assertions, {} failed)",
        report.total(),
        report.failed()
    )
    .map_err(io)?;
    Ok(if report.is_pass() {
        EXIT_OK
    } else {
        EXIT_FAILURES
    })
}
