//! `mdc`: encode, decode, check, count, and analyze multidimensional
//! constrained arrays.
//!
//! Exit codes: 0 on success, 1 when `check` finds a violation, 2 on usage
//! errors, 3 on corrupted input or unsupported sizes.

use clap::{Args, Parser, Subcommand};
use mdc_core::analysis::{self, ParamRule};
use mdc_core::coord::CoordSet;
use mdc_core::error::Error;
use mdc_core::oracle::{
    exhaustive_count, find_identical_boxes, find_identical_cubes, find_zero_boxes,
    find_zero_cubes, ConstraintParams, Family,
};
use mdc_core::text::{format_array, parse_array};
use mdc_core::{minimal_boxes, squares_unique, zero_boxes, zero_cubes, NdArray};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::io::{Read, Write};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "mdc", version, about = "Multidimensional constrained-code toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Encode an array with one redundancy symbol
    Encode(CodecArgs),
    /// Invert an encoder output
    Decode(CodecArgs),
    /// Test an array against a constraint and print the violations
    Check(CheckArgs),
    /// Count satisfying arrays by exhaustive enumeration
    Count(CountArgs),
    /// List the minimal box shapes for a volume
    #[command(name = "minimal-boxes")]
    MinimalBoxes(MinimalBoxesArgs),
    /// Print the single-symbol-redundancy thresholds
    Bounds(BoundsArgs),
    /// Print a CSV table of exact counts and redundancies
    Report(ReportArgs),
}

#[derive(Args)]
struct CodecArgs {
    #[arg(long)]
    family: String,
    #[arg(short = 'd', long, default_value_t = 2)]
    dim: usize,
    #[arg(short = 'q', long, default_value_t = 2)]
    alphabet: usize,
    #[arg(short = 'n', long)]
    side: usize,
    /// Read the array from a file instead of stdin
    #[arg(long = "in")]
    input: Option<String>,
    /// Write the array to a file instead of stdout
    #[arg(long = "out")]
    output: Option<String>,
    /// Encode a uniformly random payload instead of reading one
    #[arg(long)]
    random: bool,
    /// Seed for --random
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Emit one line per elimination/expansion step on stderr
    #[arg(long)]
    trace: bool,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    family: String,
    #[arg(short = 'L')]
    cube_side: Option<usize>,
    #[arg(short = 'V')]
    volume: Option<usize>,
    #[arg(long = "in")]
    input: Option<String>,
}

#[derive(Args)]
struct CountArgs {
    #[arg(long)]
    family: String,
    #[arg(short = 'd', long, default_value_t = 2)]
    dim: usize,
    #[arg(short = 'q', long, default_value_t = 2)]
    alphabet: usize,
    #[arg(short = 'n', long)]
    side: usize,
    #[arg(short = 'L')]
    cube_side: Option<usize>,
    #[arg(short = 'V')]
    volume: Option<usize>,
    /// Largest number of arrays the enumeration may visit
    #[arg(long, default_value_t = 1u128 << 26)]
    budget: u128,
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Args)]
struct MinimalBoxesArgs {
    #[arg(short = 'd', long, default_value_t = 2)]
    dim: usize,
    #[arg(short = 'V')]
    volume: usize,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    family: String,
    #[arg(short = 'd', long, default_value_t = 2)]
    dim: usize,
    #[arg(short = 'q', long, default_value_t = 2)]
    alphabet: usize,
    #[arg(short = 'n', long)]
    side: usize,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long)]
    family: String,
    #[arg(short = 'd', long, default_value_t = 2)]
    dim: usize,
    #[arg(short = 'q', long, default_value_t = 2)]
    alphabet: usize,
    #[arg(long)]
    n_from: usize,
    #[arg(long)]
    n_to: usize,
    #[arg(short = 'L')]
    cube_side: Option<usize>,
    #[arg(short = 'V')]
    volume: Option<usize>,
    /// Derive the parameter per n: `threshold` or `codec`
    #[arg(long)]
    param_rule: Option<String>,
    #[arg(long, default_value_t = 1u128 << 26)]
    budget: u128,
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Corruption(_) | Error::UnsupportedSize(_) => 3,
        _ => 2,
    }
}

fn read_input(path: &Option<String>) -> Result<String, Error> {
    match path {
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| Error::Parse(format!("cannot read {p}: {e}"))),
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Error::Parse(format!("cannot read stdin: {e}")))?;
            Ok(buf)
        }
    }
}

fn write_output(path: &Option<String>, text: &str) -> Result<(), Error> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Error::Parse(format!("cannot write {p}: {e}"))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Error::Parse(format!("cannot write stdout: {e}"))),
    }
}

fn parse_family(s: &str) -> Result<Family, Error> {
    s.parse()
}

/// The parameter the family expects: -L for cube families, -V for box ones.
fn family_param(family: Family, l: Option<usize>, v: Option<usize>) -> Result<usize, Error> {
    match (family.is_box_family(), l, v) {
        (false, Some(l), None) => Ok(l),
        (true, None, Some(v)) => Ok(v),
        (false, None, None) => Err(Error::InvalidParameter(
            "cube families need -L <side>".into(),
        )),
        (true, None, None) => Err(Error::InvalidParameter(
            "box families need -V <volume>".into(),
        )),
        _ => Err(Error::InvalidParameter(
            "pass exactly the parameter the family expects (-L or -V)".into(),
        )),
    }
}

fn random_input(domain: CoordSet, q: usize, seed: u64) -> Result<NdArray, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = domain.len();
    let vals: Vec<u8> = (0..len).map(|_| rng.gen_range(0..q) as u8).collect();
    NdArray::new(domain, q, vals)
}

fn run_encode(args: &CodecArgs, decode: bool) -> Result<u8, Error> {
    let family = parse_family(&args.family)?;
    let (n, d, q) = (args.side, args.dim, args.alphabet);
    let input_domain = |decode: bool, minus_first: bool| -> CoordSet {
        if decode {
            CoordSet::Cube { d, n }
        } else if minus_first {
            CoordSet::CubeMinusFirst { d, n }
        } else {
            CoordSet::CubeMinusLast { d, n }
        }
    };

    let load = |domain: CoordSet| -> Result<NdArray, Error> {
        let arr = if args.random && !decode {
            random_input(domain.clone(), q, args.seed)?
        } else {
            parse_array(&read_input(&args.input)?)?
        };
        if *arr.domain() != domain {
            return Err(Error::InvalidParameter(format!(
                "expected domain {domain:?}, input has {:?}",
                arr.domain()
            )));
        }
        if arr.q() != q {
            return Err(Error::InvalidParameter(format!(
                "alphabet mismatch: -q {q} but input has q={}",
                arr.q()
            )));
        }
        Ok(arr)
    };

    let out = match family {
        Family::ZeroCubesFree => {
            let codec = zero_cubes::ZeroCubesCodec::new(n, d, q)?;
            let arr = load(input_domain(decode, false))?;
            if decode {
                codec.decode(&arr)?
            } else if args.trace {
                let (x, steps) = codec.encode_traced(&arr)?;
                for s in steps {
                    eprintln!("ELIM v=({})", fmt_pos(&s.pos));
                }
                x
            } else {
                codec.encode(&arr)?
            }
        }
        Family::CubesUnique => {
            if d != 2 || q != 2 {
                return Err(Error::UnsupportedSize(
                    "the squares-unique encoder is binary and two-dimensional".into(),
                ));
            }
            let codec = squares_unique::params(n)?;
            let arr = load(input_domain(decode, true))?;
            if decode {
                codec.decode(&arr)?
            } else if args.trace {
                let (x, events) = codec.encode_traced(&arr)?;
                for e in events {
                    eprintln!("{e}");
                }
                x
            } else {
                codec.encode(&arr)?
            }
        }
        Family::ZeroBoxesFree => {
            let codec = zero_boxes::ZeroBoxesCodec::new(n, d, q)?;
            let arr = load(input_domain(decode, true))?;
            if decode {
                codec.decode(&arr)?
            } else if args.trace {
                let (x, steps) = codec.encode_traced(&arr)?;
                for s in steps {
                    eprintln!("ELIM u=({}) shape=({})", fmt_pos(&s.pos), fmt_pos(&s.shape));
                }
                x
            } else {
                codec.encode(&arr)?
            }
        }
        Family::BoxesUnique => {
            return Err(Error::InvalidParameter(
                "boxes-unique has no encoder; use check/count/bounds".into(),
            ))
        }
    };
    write_output(&args.output, &format_array(&out))?;
    Ok(0)
}

fn fmt_pos(v: &[usize]) -> String {
    v.iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn run_check(args: &CheckArgs) -> Result<u8, Error> {
    let family = parse_family(&args.family)?;
    let param = family_param(family, args.cube_side, args.volume)?;
    let arr = parse_array(&read_input(&args.input)?)?;
    let report = match family {
        Family::ZeroCubesFree => find_zero_cubes(&arr, param)?,
        Family::CubesUnique => find_identical_cubes(&arr, param)?,
        Family::ZeroBoxesFree => find_zero_boxes(&arr, param)?,
        Family::BoxesUnique => find_identical_boxes(&arr, param)?,
    };
    print!("{report}");
    Ok(if report.is_empty() { 0 } else { 1 })
}

fn run_count(args: &CountArgs) -> Result<u8, Error> {
    let family = parse_family(&args.family)?;
    let param = family_param(family, args.cube_side, args.volume)?;
    let params = ConstraintParams::new(family, args.dim, args.alphabet, args.side, param)?;
    let count = exhaustive_count(&params, args.budget, args.workers)?;
    println!("{count}");
    Ok(0)
}

fn run_minimal_boxes(args: &MinimalBoxesArgs) -> Result<u8, Error> {
    let fam = minimal_boxes::enumerate_minimal(args.dim, args.volume)?;
    for shape in fam.shapes() {
        println!("{}", fmt_pos(shape.sides()).replace(',', " "));
    }
    Ok(0)
}

fn run_bounds(args: &BoundsArgs) -> Result<u8, Error> {
    let family = parse_family(&args.family)?;
    print!(
        "{}",
        analysis::bounds_report(family, args.side, args.dim, args.alphabet)?
    );
    Ok(0)
}

fn run_report(args: &ReportArgs) -> Result<u8, Error> {
    let family = parse_family(&args.family)?;
    let rule = match (&args.param_rule, args.cube_side, args.volume) {
        (Some(r), None, None) => match r.as_str() {
            "threshold" => ParamRule::Threshold,
            "codec" => ParamRule::Codec,
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown parameter rule {other:?}"
                )))
            }
        },
        (None, l, v) => ParamRule::Fixed(family_param(family, l, v)?),
        _ => {
            return Err(Error::InvalidParameter(
                "pass either a fixed parameter or --param-rule, not both".into(),
            ))
        }
    };
    let rows = analysis::redundancy_table(
        family,
        args.dim,
        args.alphabet,
        args.n_from,
        args.n_to,
        rule,
        args.budget,
        args.workers,
    )?;
    println!("{}", analysis::CSV_HEADER);
    for row in rows {
        println!("{}", row.csv());
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::Encode(a) => run_encode(a, false),
        Cmd::Decode(a) => run_encode(a, true),
        Cmd::Check(a) => run_check(a),
        Cmd::Count(a) => run_count(a),
        Cmd::MinimalBoxes(a) => run_minimal_boxes(a),
        Cmd::Bounds(a) => run_bounds(a),
        Cmd::Report(a) => run_report(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
