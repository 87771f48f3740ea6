use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use betweenness_core::classify::{
    classify, realize_by_bisection, realize_by_closing, realize_by_closing_search,
};
use betweenness_core::geometry::{parse_rational, rat, RPoint, Rational};
use betweenness_core::iso::{build_partial_iso, decide_iso, IsoVerdict};
use betweenness_core::{ClassLabel, ConfigK, SignatureVector, Word};
use clap::{Parser, Subcommand};

use crate::config::{parse_config, ConfigFile};
use crate::svg::{render_svg, Overlays, VerifiedCycle};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(
    name = "betweenness",
    version,
    about = "Reversion actions and betweenness classes of circles with interior points"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the cycle class of a three-point configuration.
    Classify {
        file: PathBuf,
        #[arg(long, default_value_t = 8)]
        bound: u64,
        /// Exit with status 3 when no cycle is found up to the bound.
        #[arg(long)]
        strict: bool,
    },
    /// Test whether a vector is a cycle.
    IsCycle {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_vector)]
        v: SignatureVector,
    },
    /// Construct a configuration with a prescribed cycle.
    Realize {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_vector)]
        v: SignatureVector,
        /// Close the cycle by placing the third point (needs v3 = -1).
        #[arg(long, conflicts_with = "bisect", required_unless_present = "bisect")]
        closing: bool,
        /// Bisect the position of the middle point.
        #[arg(long)]
        bisect: bool,
        /// Interval width for --bisect.
        #[arg(long, default_value = "1/1048576", value_parser = parse_positive_rational)]
        width: Rational,
    },
    /// Decide whether two configurations are betweenness isomorphic.
    Iso {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 8)]
        bound: u64,
        #[arg(long)]
        strict: bool,
        /// Also print a partial isomorphism table over words up to this length.
        #[arg(long)]
        table: Option<usize>,
        #[arg(long, default_value_t = 2)]
        seeds: usize,
    },
    /// List the orbit of a circle point.
    Orbit {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_point)]
        point: RPoint,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Word operations.
    Word {
        #[command(subcommand)]
        op: WordOp,
    },
    /// Draw a configuration, optionally with a verified cycle polygon.
    Render {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_vector)]
        cycle: Option<SignatureVector>,
        /// Start point of the cycle polygon.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_point)]
        point: Option<RPoint>,
        #[arg(long)]
        svg: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum WordOp {
    /// Reduce a raw letter sequence.
    Reduce(WordArgs),
    /// Alternating-sign letter counts.
    Signature(WordArgs),
    /// Canonical representative with the same signature.
    Normal(WordArgs),
}

#[derive(Debug, clap::Args)]
struct WordArgs {
    /// Comma-separated letters, or `e`.
    word: String,
    /// Number of letters; defaults to the largest letter used.
    #[arg(long)]
    alphabet: Option<usize>,
}

fn parse_vector(s: &str) -> Result<SignatureVector, String> {
    SignatureVector::parse(s).map_err(|e| e.to_string())
}

fn parse_point(s: &str) -> Result<RPoint, String> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| format!("expected x,y, got `{s}`"))?;
    let x = parse_rational(x.trim()).map_err(|e| e.to_string())?;
    let y = parse_rational(y.trim()).map_err(|e| e.to_string())?;
    Ok(RPoint::new(x, y))
}

fn parse_positive_rational(s: &str) -> Result<Rational, String> {
    let r = parse_rational(s).map_err(|e| e.to_string())?;
    if r <= Rational::default() {
        return Err(format!("`{s}` is not positive"));
    }
    Ok(r)
}

/// Failure of a command, with its exit status.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

fn invalid(e: impl ToString) -> Failure {
    Failure {
        code: EXIT_INVALID,
        message: e.to_string(),
    }
}

fn read_config(path: &Path) -> Result<ConfigK, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure {
        code: EXIT_FAILURE,
        message: format!("{}: {e}", path.display()),
    })?;
    parse_config(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure {
        code: EXIT_FAILURE,
        message: format!("{}: {e}", path.display()),
    })
}

/// Runs the command line `args` (program name first) and returns the exit
/// status. Reports go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    let mut say = |line: String| {
        let _ = writeln!(out, "{line}");
    };
    match command {
        Command::Classify {
            file,
            bound,
            strict,
        } => {
            let config = read_config(&file)?;
            let label = classify(&config, bound).map_err(invalid)?;
            say(label.to_string());
            let inconclusive = matches!(label, ClassLabel::NoCycleUpTo(_));
            Ok(if strict && inconclusive {
                EXIT_INCONCLUSIVE
            } else {
                EXIT_OK
            })
        }
        Command::IsCycle { file, v } => {
            let config = read_config(&file)?;
            let yes = config.is_cycle(&v).map_err(invalid)?;
            say(yes.to_string());
            Ok(EXIT_OK)
        }
        Command::Realize {
            v,
            closing,
            bisect,
            width,
        } => {
            if bisect {
                let iv = realize_by_bisection(&v, &width).map_err(invalid)?;
                say(iv.to_plain());
                return Ok(EXIT_OK);
            }
            debug_assert!(closing);
            let top = RPoint::from_ints(0, 1);
            let config =
                match realize_by_closing(&v, &rat(-1, 2), &rat(0, 1), &top).map_err(invalid)? {
                    Some(config) => Some(config),
                    None => realize_by_closing_search(&v)
                        .map_err(invalid)?
                        .map(|(c, _)| c),
                };
            match config {
                Some(config) => {
                    let _ = write!(out, "{}", ConfigFile::from_config(&config));
                    Ok(EXIT_OK)
                }
                None => Err(Failure {
                    code: EXIT_INCONCLUSIVE,
                    message: format!("no closing configuration found for {v}"),
                }),
            }
        }
        Command::Iso {
            a,
            b,
            bound,
            strict,
            table,
            seeds,
        } => {
            let (s, r) = (read_config(&a)?, read_config(&b)?);
            let verdict = decide_iso(&s, &r, bound).map_err(invalid)?;
            say(verdict.to_string());
            if let (Some(depth), true) = (table, verdict.is_isomorphic()) {
                let words = Word::all_up_to(depth, s.l());
                let t = build_partial_iso(&s, &r, &verdict, &words, seeds).map_err(invalid)?;
                let _ = write!(out, "{}", t.to_text());
            }
            let inconclusive = matches!(verdict, IsoVerdict::ConditionallyIsomorphic(_));
            Ok(if strict && inconclusive {
                EXIT_INCONCLUSIVE
            } else {
                EXIT_OK
            })
        }
        Command::Orbit {
            file,
            point,
            depth,
            svg,
        } => {
            let config = read_config(&file)?;
            let orbit = config.orbit(&point, depth).map_err(invalid)?;
            for p in &orbit {
                say(p.to_plain());
            }
            if let Some(path) = svg {
                let overlays = Overlays { orbit, cycle: None };
                write_file(&path, &render_svg(&config, &overlays))?;
            }
            Ok(EXIT_OK)
        }
        Command::Word { op } => {
            let (args, op_name) = match &op {
                WordOp::Reduce(a) => (a, "reduce"),
                WordOp::Signature(a) => (a, "signature"),
                WordOp::Normal(a) => (a, "normal"),
            };
            let letters = betweenness_core::word::parse_letters(&args.word).map_err(invalid)?;
            let alphabet = args
                .alphabet
                .unwrap_or_else(|| letters.iter().copied().max().unwrap_or(1));
            let g = Word::reduce(&letters, alphabet).map_err(invalid)?;
            say(match op_name {
                "reduce" => g.to_string(),
                "signature" => g.signature().to_plain(),
                _ => g.normal_form().to_string(),
            });
            Ok(EXIT_OK)
        }
        Command::Render {
            file,
            cycle,
            point,
            svg,
        } => {
            let config = read_config(&file)?;
            let cycle = match cycle {
                Some(v) => Some(VerifiedCycle::new(&config, &v, point.as_ref()).map_err(invalid)?),
                None => None,
            };
            write_file(
                &svg,
                &render_svg(
                    &config,
                    &Overlays {
                        orbit: Vec::new(),
                        cycle,
                    },
                ),
            )?;
            Ok(EXIT_OK)
        }
    }
}
