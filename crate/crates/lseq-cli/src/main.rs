//! `lseq` — generalized van der Corput (LS) sequence toolkit.
//!
//! Subcommands: `gen` (points), `partition` (refinement endpoints),
//! `verify` (reordering vs radical-inverse equivalence), `disc`
//! (prefix discrepancy), `regime` (discrepancy growth classification),
//! `qmc` (integration experiments). Every command is deterministic for a
//! fixed configuration, including `--seed`; output goes to stdout or
//! `--out PATH`.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid parameters or usage,
//! 3 verification mismatch.

use std::fmt::Write as FmtWrite;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use lseq::discrepancy::{regime_analysis, report, PointSet};
use lseq::lambda::verify_equivalence;
use lseq::partition::LsPartition;
use lseq::qmc::{integrate, standard_suite, Generator};
use lseq::sequence::{generate_points_f64, LsSequence};
use lseq::LsParams;

#[derive(Parser)]
#[command(name = "lseq", version, about = "Generalized van der Corput (LS) sequence toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Exact arithmetic in Q(gamma); floats derived from the exact values.
    Exact,
    /// Pure double-precision generation.
    Float,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the first points of the LS-sequence.
    Gen {
        #[arg(long = "L")]
        l: u32,
        #[arg(long = "S")]
        s: u32,
        /// Number of points.
        #[arg(long)]
        count: u64,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the depth-n partition and export its intervals.
    Partition {
        #[arg(long = "L")]
        l: u32,
        #[arg(long = "S")]
        s: u32,
        #[arg(long)]
        depth: u32,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that the reordered partition points equal the radical-inverse
    /// stream, entry by entry, up to the given depth.
    Verify {
        #[arg(long = "L")]
        l: u32,
        #[arg(long = "S")]
        s: u32,
        #[arg(long)]
        depth: u32,
    },
    /// Discrepancy of sequence prefixes.
    Disc {
        #[arg(long = "L")]
        l: u32,
        #[arg(long = "S")]
        s: u32,
        /// Largest prefix length.
        #[arg(long)]
        count: u64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Discrepancy growth classification over partition depths.
    Regime {
        #[arg(long = "L")]
        l: u32,
        #[arg(long = "S")]
        s: u32,
        #[arg(long = "max-depth")]
        max_depth: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Quasi-Monte Carlo integration experiments against baselines.
    Qmc {
        #[arg(long = "L")]
        l: u32,
        #[arg(long = "S")]
        s: u32,
        /// Largest sample size (powers of ten up to it are also reported).
        #[arg(long, default_value_t = 10_000)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    /// Bad parameters or an impossible request (exit 2).
    Params(String),
    /// I/O failure (exit 1).
    Io(String),
    /// Verification mismatch (exit 3).
    Mismatch(String),
}

impl Failure {
    fn exit_code(&self) -> ExitCode {
        match self {
            Failure::Io(_) => ExitCode::from(1),
            Failure::Params(_) => ExitCode::from(2),
            Failure::Mismatch(_) => ExitCode::from(3),
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Params(m) | Failure::Io(m) | Failure::Mismatch(m) => m,
        }
    }
}

impl From<lseq::Error> for Failure {
    fn from(err: lseq::Error) -> Self {
        Failure::Params(err.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(err: std::io::Error) -> Self {
        Failure::Io(err.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            failure.exit_code()
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Gen {
            l,
            s,
            count,
            mode,
            format,
            out,
        } => {
            let params = LsParams::new(l, s)?;
            let text = render_gen(params, count as usize, mode, format);
            emit(text, out)
        }
        Command::Partition {
            l,
            s,
            depth,
            format,
            out,
        } => {
            let params = LsParams::new(l, s)?;
            let partition = LsPartition::new(depth, params);
            let text = match format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    partition.write_csv(&mut buf)?;
                    String::from_utf8(buf).expect("csv is utf-8")
                }
                Format::Json => render_partition_json(&partition),
            };
            emit(text, out)
        }
        Command::Verify { l, s, depth } => {
            let params = LsParams::new(l, s)?;
            let report = verify_equivalence(depth, params);
            match report.first_mismatch {
                None => {
                    println!("t_{}={} points equal", report.depth, report.points);
                    Ok(())
                }
                Some(idx) => Err(Failure::Mismatch(format!(
                    "mismatch at index {idx} (depth {}, t_n={})",
                    report.depth, report.points
                ))),
            }
        }
        Command::Disc {
            l,
            s,
            count,
            format,
            out,
        } => {
            let params = LsParams::new(l, s)?;
            let text = render_disc(params, count as usize, format)?;
            emit(text, out)
        }
        Command::Regime {
            l,
            s,
            max_depth,
            format,
            out,
        } => {
            let params = LsParams::new(l, s)?;
            let report = regime_analysis(params, max_depth)?;
            let text = match format {
                Format::Json => report.to_json(),
                Format::Csv => {
                    let mut buf = Vec::new();
                    report.write_rows_csv(&mut buf)?;
                    String::from_utf8(buf).expect("csv is utf-8")
                }
            };
            emit(text, out)
        }
        Command::Qmc {
            l,
            s,
            count,
            seed,
            format,
            out,
        } => {
            let params = LsParams::new(l, s)?;
            let text = render_qmc(params, count as usize, seed, format)?;
            emit(text, out)
        }
    }
}

fn emit(text: String, out: Option<PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

#[derive(Serialize)]
struct GenRow {
    index: u64,
    n: u128,
    digits: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<String>,
    float: f64,
}

fn gen_rows(params: LsParams, count: usize, mode: Mode) -> Vec<GenRow> {
    match mode {
        Mode::Exact => LsSequence::new(params)
            .take(count)
            .map(|p| GenRow {
                index: p.rank,
                n: p.n,
                digits: p.digits.to_string_msb(),
                float: p.value.to_f64(),
                exact: Some(p.value.to_compact_string()),
            })
            .collect(),
        Mode::Float => {
            let mut counter = lseq::digits::AdmissibleCounter::new(params);
            let mut rows = Vec::with_capacity(count);
            for index in 1..=count as u64 {
                if index > 1 {
                    counter.advance();
                }
                let digits = counter.digits();
                rows.push(GenRow {
                    index,
                    n: digits.value(),
                    float: lseq::sequence::radical_inverse_f64_digits(&digits, &params),
                    digits: digits.to_string_msb(),
                    exact: None,
                });
            }
            rows
        }
    }
}

fn render_gen(params: LsParams, count: usize, mode: Mode, format: Format) -> String {
    let rows = gen_rows(params, count, mode);
    match format {
        Format::Csv => {
            let mut text = String::new();
            if mode == Mode::Exact {
                text.push_str("index,n,digits,exact,float\n");
                for r in rows {
                    writeln!(
                        text,
                        "{},{},{},{},{:?}",
                        r.index,
                        r.n,
                        r.digits,
                        r.exact.unwrap(),
                        r.float
                    )
                    .unwrap();
                }
            } else {
                text.push_str("index,n,digits,float\n");
                for r in rows {
                    writeln!(text, "{},{},{},{:?}", r.index, r.n, r.digits, r.float).unwrap();
                }
            }
            text
        }
        Format::Json => {
            #[derive(Serialize)]
            struct GenReport<'a> {
                #[serde(rename = "L")]
                l: u32,
                #[serde(rename = "S")]
                s: u32,
                mode: &'a str,
                points: Vec<GenRow>,
            }
            serde_json::to_string(&GenReport {
                l: params.l(),
                s: params.s(),
                mode: match mode {
                    Mode::Exact => "exact",
                    Mode::Float => "float",
                },
                points: rows,
            })
            .expect("gen report serializes")
        }
    }
}

fn render_partition_json(partition: &LsPartition) -> String {
    #[derive(Serialize)]
    struct IntervalRow {
        index: u64,
        left_exact: String,
        left_float: f64,
        label: &'static str,
        depth: u32,
    }
    #[derive(Serialize)]
    struct PartitionReport {
        #[serde(rename = "L")]
        l: u32,
        #[serde(rename = "S")]
        s: u32,
        depth: u32,
        intervals: Vec<IntervalRow>,
    }
    let floats = partition.left_endpoints_f64();
    let intervals = partition
        .left_endpoints_exact()
        .iter()
        .zip(partition.labels())
        .enumerate()
        .map(|(i, (left, label))| IntervalRow {
            index: i as u64 + 1,
            left_exact: left.to_compact_string(),
            left_float: floats[i],
            label: label.as_str(),
            depth: partition.depth(),
        })
        .collect();
    serde_json::to_string(&PartitionReport {
        l: partition.params().l(),
        s: partition.params().s(),
        depth: partition.depth(),
        intervals,
    })
    .expect("partition report serializes")
}

/// Prefix lengths reported by `disc`: every N up to 1000, then a geometric
/// ladder (about 20% steps) up to and including `count`.
fn disc_schedule(count: usize) -> Vec<usize> {
    let mut ns: Vec<usize> = (1..=count.min(1000)).collect();
    let mut n = 1000usize;
    while n < count {
        n = ((n as f64 * 1.2).ceil() as usize).min(count);
        ns.push(n);
    }
    ns
}

fn render_disc(params: LsParams, count: usize, format: Format) -> Result<String, Failure> {
    if count == 0 {
        return Err(Failure::Params("count must be at least 1".to_string()));
    }
    let points = generate_points_f64(count, params);
    let exponent = (params.s() >= params.l() + 2).then(|| {
        let g = params.gamma_f64();
        -(params.s() as f64 * g).ln() / g.ln()
    });
    #[derive(Serialize)]
    struct DiscRow {
        n: u64,
        d_star: f64,
        d_extreme: f64,
        n_d: f64,
        n_d_over_log: Option<f64>,
        n_d_over_power: Option<f64>,
    }
    let mut rows = Vec::new();
    for n in disc_schedule(count) {
        let ps = PointSet::new(points[..n].to_vec())?;
        let r = report(&ps, exponent);
        rows.push(DiscRow {
            n: r.n,
            d_star: r.star,
            d_extreme: r.extreme,
            n_d: r.scaled,
            n_d_over_log: r.scaled_over_log,
            n_d_over_power: r.scaled_power,
        });
    }
    Ok(match format {
        Format::Csv => {
            let mut text = String::from("N,D_star,D_extreme,N_D,N_D_over_logN,N_D_over_power\n");
            for r in rows {
                let opt = |v: Option<f64>| v.map(|x| format!("{x:?}")).unwrap_or_default();
                writeln!(
                    text,
                    "{},{:?},{:?},{:?},{},{}",
                    r.n,
                    r.d_star,
                    r.d_extreme,
                    r.n_d,
                    opt(r.n_d_over_log),
                    opt(r.n_d_over_power)
                )
                .unwrap();
            }
            text
        }
        Format::Json => serde_json::to_string(&rows).expect("disc rows serialize"),
    })
}

fn render_qmc(params: LsParams, count: usize, seed: u64, format: Format) -> Result<String, Failure> {
    if count == 0 {
        return Err(Failure::Params("count must be at least 1".to_string()));
    }
    // Sample sizes: powers of ten up to count, plus count itself.
    let mut ns = Vec::new();
    let mut n = 100usize;
    while n < count {
        ns.push(n);
        n *= 10;
    }
    ns.push(count);
    ns.dedup();

    let generators = [
        Generator::Ls(params),
        Generator::Knapowski,
        Generator::RandomReorder { params, seed },
        Generator::UniformRandom { seed },
    ];
    let suite = standard_suite(&params);
    let mut rows = Vec::new();
    for gen in &generators {
        for f in &suite {
            rows.extend(integrate(gen, f, &ns)?);
        }
    }
    Ok(match format {
        Format::Csv => {
            let mut buf = Vec::new();
            lseq::qmc::write_csv(&rows, &mut buf)?;
            String::from_utf8(buf).expect("csv is utf-8")
        }
        Format::Json => serde_json::to_string(&rows).expect("qmc rows serialize"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disc_schedule_is_dense_then_geometric() {
        assert_eq!(disc_schedule(5), vec![1, 2, 3, 4, 5]);
        let ns = disc_schedule(5000);
        assert_eq!(ns[999], 1000);
        assert!(ns.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(*ns.last().unwrap(), 5000);
    }

    #[test]
    fn golden_first_row() {
        let params = LsParams::new(1, 1).unwrap();
        let text = render_gen(params, 1, Mode::Exact, Format::Csv);
        assert_eq!(text, "index,n,digits,exact,float\n1,0,0,0/1+0/1*g,0.0\n");
    }
}
