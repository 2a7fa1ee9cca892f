use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context as _, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use conceptgauge::context::{
    generate_random_context, read_context, read_context_from_path, write_context, ContextFormat,
    RandomContextSpec,
};
use conceptgauge::experiments::{
    correlation_indices, default_rates, parse_range, run_approx_study, run_correlation_study,
    run_meta_demo, run_noise_study, ApproxStudySpec, CorrelationStudySpec, Matching,
    NoiseStudySpec, RandomDesign, Regressor, STUDY_BUDGET,
};
use conceptgauge::indices::{compute_index_table, parse_spec_list};
use conceptgauge::lattice::DEFAULT_BUDGET;
use conceptgauge::{fixtures, ConceptLattice, Error, FormalContext, LatticeOptions};

/// Concept lattices, interestingness indices and the studies comparing them.
#[derive(Parser)]
#[command(name = "cg", version)]
struct Cli {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file, written atomically; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Context file format, for reading and for writing.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// No progress or summary lines on stderr.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Cxt,
    Fimi,
    Csv,
}

impl From<Format> for ContextFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Cxt => ContextFormat::Cxt,
            Format::Fimi => ContextFormat::Fimi,
            Format::Csv => ContextFormat::Csv,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Enumerate all concepts and write the lattice as JSON.
    Mine {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        min_support: usize,
    },
    /// Tabulate indices for every concept of a context or lattice JSON.
    Index {
        #[arg(long)]
        input: PathBuf,
        /// Comma-separated `kind` or `kind:param=value` specs.
        #[arg(long)]
        indices: String,
    },
    /// Pairwise Kendall tau between indices over random contexts.
    Correlate {
        #[command(flatten)]
        design: DesignArgs,
        #[arg(long, default_value = "0.1,0.2,0.3,0.4")]
        densities: String,
        /// Defaults to the 26 columns of the published table.
        #[arg(long)]
        indices: Option<String>,
    },
    /// Regress stability on integral stability over a sweep of level rates.
    Approx {
        #[command(flatten)]
        design: DesignArgs,
        #[arg(long, default_value = "0.1,0.2,0.3")]
        densities: String,
        /// Defaults to 0.05, 0.10, ..., 0.95.
        #[arg(long)]
        rates: Option<String>,
        #[arg(long, value_enum, default_value_t = RegressorArg::Minor)]
        regressor: RegressorArg,
    },
    /// AUC of each index at telling original concepts from noise.
    Noise {
        /// Base context file; alternatively a bundled `--fixture`.
        #[arg(long, conflicts_with = "fixture")]
        input: Option<PathBuf>,
        #[arg(long, value_parser = ["blocks_3x100x2", "blocks_2x150x3", "blocks_2x200x2"])]
        fixture: Option<String>,
        #[arg(long, default_value = "0.01,0.03,0.05,0.1")]
        rates: String,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(
            long,
            default_value = "robustness:alpha=0.3,robustness:alpha=0.5,robustness:alpha=0.8,stability,separation,cv,cfc,cu,similarity,predictability"
        )]
        indices: String,
        #[arg(long, value_enum, default_value_t = MatchingArg::Intent)]
        matching: MatchingArg,
    },
    /// Write a random context with independent cells.
    Gen {
        #[arg(long)]
        objects: usize,
        #[arg(long)]
        attributes: usize,
        #[arg(long)]
        density: f64,
    },
    /// Emit a bundled context, or the ranking demo over the index context.
    Demo {
        #[arg(long, value_enum)]
        which: Which,
    },
    /// Summarise a study CSV written by correlate, approx or noise.
    Report {
        #[arg(long)]
        input: PathBuf,
        /// Rows to show for correlation reports.
        #[arg(long, default_value_t = 20)]
        top: usize,
    },
}

#[derive(Args)]
struct DesignArgs {
    #[arg(long, default_value_t = 100)]
    contexts: usize,
    /// Object count range, e.g. `40-80`.
    #[arg(long, default_value = "40-80")]
    objects: String,
    #[arg(long, default_value = "10-50")]
    attributes: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegressorArg {
    Minor,
    Levelwise,
}

#[derive(Clone, Copy, ValueEnum)]
enum MatchingArg {
    Intent,
    Extent,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Fig2,
    Table1,
    Meta,
}

fn budget(default: usize) -> Result<usize> {
    match std::env::var("CG_BUDGET") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("CG_BUDGET must be a count, got `{v}`")))
            .map_err(Into::into),
        Err(_) => Ok(default),
    }
}

fn parse_list(s: &str, what: &str) -> Result<Vec<f64>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidParameter(format!("bad {what} `{t}`")).into())
        })
        .collect()
}

fn design(args: &DesignArgs, densities: &str, seed: u64) -> Result<RandomDesign> {
    Ok(RandomDesign {
        densities: parse_list(densities, "density")?,
        contexts_per_density: args.contexts,
        object_range: parse_range(&args.objects)?,
        attribute_range: parse_range(&args.attributes)?,
        seed,
        budget: budget(STUDY_BUDGET)?,
    })
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        None => std::io::stdout().lock().write_all(bytes)?,
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)
                .with_context(|| format!("creating a temporary file in {}", dir.display()))?;
            tmp.write_all(bytes)?;
            tmp.persist(path)
                .with_context(|| format!("writing {}", path.display()))?;
        }
    }
    Ok(())
}

fn load_lattice(path: &Path, format: Option<ContextFormat>) -> Result<ConceptLattice> {
    let is_json = path.extension().is_some_and(|e| e == "json");
    if is_json {
        let text = std::fs::read_to_string(path)?;
        return Ok(ConceptLattice::from_json(&text)?);
    }
    let ctx = read_context_from_path(path, format)?;
    build(&ctx, 0)
}

fn build(ctx: &FormalContext, min_support: usize) -> Result<ConceptLattice> {
    let opts = LatticeOptions {
        min_support,
        budget: budget(DEFAULT_BUDGET)?,
    };
    Ok(ConceptLattice::build(ctx, &opts)?)
}

fn run(cli: Cli) -> Result<()> {
    let out = cli.out.as_deref();
    let format = cli.format.map(ContextFormat::from);
    let note = |msg: String| {
        if !cli.quiet {
            eprintln!("{msg}");
        }
    };
    match cli.cmd {
        Cmd::Mine { input, min_support } => {
            let ctx = read_context_from_path(&input, format)?;
            let lat = build(&ctx, min_support)?;
            note(format!("{} concepts", lat.len()));
            let mut json = lat.to_json();
            json.push('\n');
            emit(out, json.as_bytes())
        }
        Cmd::Index { input, indices } => {
            let specs = parse_spec_list(&indices)?;
            let lat = load_lattice(&input, format)?;
            let table = compute_index_table(&lat, &specs)?;
            emit(out, table.to_csv().as_bytes())
        }
        Cmd::Correlate {
            design: d,
            densities,
            indices,
        } => {
            let spec = CorrelationStudySpec {
                design: design(&d, &densities, cli.seed)?,
                indices: match indices {
                    Some(s) => parse_spec_list(&s)?,
                    None => correlation_indices(),
                },
            };
            let r = run_correlation_study(&spec)?;
            note(format!(
                "{} contexts regenerated over budget, {} degenerate pairs skipped",
                r.regenerated, r.degenerate_pairs
            ));
            emit(out, r.to_csv().as_bytes())
        }
        Cmd::Approx {
            design: d,
            densities,
            rates,
            regressor,
        } => {
            let spec = ApproxStudySpec {
                design: design(&d, &densities, cli.seed)?,
                rates: match rates {
                    Some(s) => parse_list(&s, "rate")?,
                    None => default_rates(),
                },
                regressor: match regressor {
                    RegressorArg::Minor => Regressor::MinorIntegral,
                    RegressorArg::Levelwise => Regressor::Levelwise,
                },
            };
            let r = run_approx_study(&spec)?;
            let skipped = r.cells.iter().filter(|c| c.fit.is_none()).count();
            note(format!(
                "{} contexts regenerated over budget, {skipped} cells skipped",
                r.regenerated
            ));
            emit(out, r.to_csv().as_bytes())
        }
        Cmd::Noise {
            input,
            fixture,
            rates,
            trials,
            indices,
            matching,
        } => {
            let base = match (input, fixture) {
                (Some(p), _) => read_context_from_path(&p, format)?,
                (None, Some(name)) => fixtures::noise_fixtures()
                    .into_iter()
                    .find(|(n, _)| *n == name)
                    .map(|(_, c)| c)
                    .expect("clap restricts fixture names"),
                (None, None) => bail!(Error::InvalidParameter(
                    "noise needs --input or --fixture".into()
                )),
            };
            let spec = NoiseStudySpec {
                base,
                noise_rates: parse_list(&rates, "noise rate")?,
                trials_per_rate: trials,
                indices: parse_spec_list(&indices)?,
                seed: cli.seed,
                matching: match matching {
                    MatchingArg::Intent => Matching::Intent,
                    MatchingArg::Extent => Matching::Extent,
                    MatchingArg::Both => Matching::Both,
                },
                budget: budget(STUDY_BUDGET)?,
            };
            let r = run_noise_study(&spec)?;
            for (rate, dropped) in &r.dropped {
                if *dropped > 0 {
                    note(format!(
                        "rate {rate}: {dropped} of {trials} trials dropped (all concepts share one label)"
                    ));
                }
            }
            emit(out, r.to_csv().as_bytes())
        }
        Cmd::Gen {
            objects,
            attributes,
            density,
        } => {
            let ctx = generate_random_context(&RandomContextSpec {
                n_objects: objects,
                n_attributes: attributes,
                density,
                seed: cli.seed,
            })?;
            emit(
                out,
                &write_context(&ctx, format.unwrap_or(ContextFormat::Cxt)),
            )
        }
        Cmd::Demo { which } => match which {
            Which::Fig2 | Which::Table1 => {
                let name = if matches!(which, Which::Fig2) {
                    "fig2"
                } else {
                    "table1"
                };
                let raw = fixtures::raw(name).expect("bundled fixture");
                match format {
                    None | Some(ContextFormat::Cxt) => emit(out, raw.as_bytes()),
                    Some(f) => {
                        let ctx = read_context(raw, ContextFormat::Cxt)?;
                        emit(out, &write_context(&ctx, f))
                    }
                }
            }
            Which::Meta => {
                let report = run_meta_demo()?;
                note(report.render());
                emit(out, report.rankings_csv().as_bytes())
            }
        },
        Cmd::Report { input, top } => {
            let text = std::fs::read_to_string(&input)
                .with_context(|| format!("reading {}", input.display()))?;
            emit(out, report(&text, top)?.as_bytes())
        }
    }
}

/// Re-reads a study CSV and renders a short plain-text summary.
fn report(text: &str, top: usize) -> Result<String> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = rd.headers()?.iter().map(str::to_string).collect();
    let rows: Vec<csv::StringRecord> = rd.records().collect::<std::result::Result<_, _>>()?;
    let num = |s: &str| -> Result<f64> {
        match s {
            "" | "nan" => Ok(f64::NAN),
            "inf" => Ok(f64::INFINITY),
            "-inf" => Ok(f64::NEG_INFINITY),
            _ => s.parse().map_err(|_| {
                Error::InvalidParameter(format!("bad number `{s}` in report input")).into()
            }),
        }
    };
    let mut out = String::new();
    match header.join(",").as_str() {
        "density,index_a,index_b,mean_tau,sd_tau" => {
            let mut pairs = Vec::new();
            for r in &rows {
                if &r[0] == "all" && r[1] < r[2] {
                    pairs.push((r[1].to_string(), r[2].to_string(), num(&r[3])?, num(&r[4])?));
                }
            }
            pairs.sort_by(|a, b| {
                b.2.total_cmp(&a.2)
                    .then_with(|| (&a.0, &a.1).cmp(&(&b.0, &b.1)))
            });
            out.push_str("pooled mean tau, strongest pairs\n");
            for (a, b, m, s) in pairs.iter().take(top) {
                out.push_str(&format!("{m:>7.3} ±{s:.3}  {a}  ~  {b}\n"));
            }
        }
        "density,rate,slope,intercept,r2,n_concepts" => {
            let mut best: Vec<(String, String, f64)> = Vec::new();
            for r in &rows {
                let r2 = num(&r[4])?;
                match best.iter_mut().find(|b| b.0 == r[0]) {
                    Some(b) if r2 > b.2 => *b = (r[0].to_string(), r[1].to_string(), r2),
                    Some(_) => {}
                    None => best.push((r[0].to_string(), r[1].to_string(), r2)),
                }
            }
            out.push_str("density  best rate  R²\n");
            for (d, rate, r2) in best {
                out.push_str(&format!("{d:<8} {rate:<10} {r2:.3}\n"));
            }
        }
        "rate,index,mean_auc,trials_used" => {
            let mut acc: Vec<(String, f64, usize)> = Vec::new();
            for r in &rows {
                let v = num(&r[2])?;
                if v.is_nan() {
                    continue;
                }
                match acc.iter_mut().find(|a| a.0 == r[1]) {
                    Some(a) => {
                        a.1 += v;
                        a.2 += 1;
                    }
                    None => acc.push((r[1].to_string(), v, 1)),
                }
            }
            out.push_str("mean AUC over noise rates\n");
            for (index, sum, n) in acc {
                out.push_str(&format!("{:.3}  {index}\n", sum / n as f64));
            }
        }
        other => bail!(Error::InvalidParameter(format!(
            "unrecognised study CSV header `{other}`"
        ))),
    }
    Ok(out)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<Error>() {
            return classify(e);
        }
    }
    1
}

fn classify(e: &Error) -> u8 {
    match e {
        Error::Index { source, .. } => classify(source),
        Error::BudgetExceeded { .. } => 3,
        Error::Invariant(_) => 4,
        Error::Io(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
