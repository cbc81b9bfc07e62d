//! `rheight`: Green's-relation heights of finite semigroups given as tables
//! or presentations.

use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use rheight::constructions;
use rheight::green::{self, GreensRelation};
use rheight::ideals;
use rheight::rewriting::{semigroup_from_presentation, Completeness, RewritingSystem, DEFAULT_CAP};
use rheight::search::{self, SearchConfig};
use rheight::semigroup::{ElementSet, FiniteSemigroup, SubsetKind};
use rheight::verify::{self, Suite, SuiteOptions};

/// Stdout writes that end the process quietly when the reader goes away.
macro_rules! out {
    ($($arg:tt)*) => { emit(format_args!($($arg)*)) };
}

macro_rules! outln {
    ($($arg:tt)*) => { emit(format_args!("{}\n", format_args!($($arg)*))) };
}

fn emit(args: std::fmt::Arguments<'_>) {
    use std::io::{ErrorKind, Write};
    if let Err(e) = std::io::stdout().lock().write_fmt(args) {
        if e.kind() == ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: writing to stdout: {e}");
        std::process::exit(2);
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "rheight",
    version,
    about = "Green's-relation heights of finite semigroups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum InputFormat {
    Auto,
    Table,
    Presentation,
}

#[derive(clap::Args, Debug)]
struct Input {
    /// Table or presentation file
    path: PathBuf,
    /// Input kind; `auto` looks at the first declaration
    #[arg(long, value_enum, default_value_t = InputFormat::Auto)]
    format: InputFormat,
    /// Maximum number of irreducible words for presentations
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    BiIdeal,
    LeftIdealCs,
    BrandtTower,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ExportFormat {
    Table,
    Presentation,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print heights of the class posets
    Height {
        #[command(flatten)]
        input: Input,
        /// Print only this relation's height
        #[arg(long)]
        relation: Option<GreensRelation>,
    },
    /// Export a class poset as Graphviz DOT
    Poset {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "R")]
        relation: GreensRelation,
        /// Output file; stdout when absent
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Use the poset of the substructure generated by these elements
        #[arg(long)]
        generators: Option<String>,
        #[arg(long, default_value = "bi")]
        kind: SubsetKind,
    },
    /// List the classes of a relation
    Classes {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "R")]
        relation: GreensRelation,
    },
    /// Check a presentation's rewriting system for completeness
    Complete {
        /// Presentation file
        path: PathBuf,
    },
    /// List the elements, one name per line
    Elements {
        #[command(flatten)]
        input: Input,
    },
    /// Height bound report for a generated substructure
    Bounds {
        #[command(flatten)]
        input: Input,
        /// Generating elements, separated by commas or spaces
        #[arg(long)]
        generators: String,
        /// bi, right, left or two_sided
        #[arg(long)]
        kind: SubsetKind,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run verification suites (or `all`)
    Verify {
        suite: String,
        /// Parameter range `A..B` (inclusive) or a single value
        #[arg(long, value_parser = parse_range)]
        n: Option<RangeInclusive<usize>>,
        /// Largest table order for the oracle suite
        #[arg(long)]
        order: Option<usize>,
        /// Random tables per sampled order
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Search small tables for bi-ideals reaching height 3n − 1
    #[command(name = "search-open1")]
    SearchOpen1 {
        #[arg(long, default_value_t = search::DEFAULT_MAX_ORDER)]
        max_order: usize,
        /// Number of tables to examine
        #[arg(long, default_value_t = search::DEFAULT_BUDGET)]
        budget: usize,
        /// Optional wall-clock limit in seconds
        #[arg(long)]
        time_limit: Option<f64>,
        #[arg(long, default_value_t = search::DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Write a family member as a table or presentation
    Export {
        #[arg(value_enum)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = ExportFormat::Table)]
        format: ExportFormat,
    },
}

fn parse_range(text: &str) -> Result<RangeInclusive<usize>, String> {
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
    let range = match text.split_once("..") {
        Some((a, b)) => parse(a)?..=parse(b.trim_start_matches('='))?,
        None => {
            let v = parse(text)?;
            v..=v
        }
    };
    if range.is_empty() {
        return Err(format!("empty range `{text}`"));
    }
    Ok(range)
}

/// Failure (exit 1) versus usage or input errors (exit 2).
enum Failure {
    Failed(anyhow::Error),
    Usage(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

type Outcome = Result<bool, Failure>;

struct Loaded {
    semigroup: Arc<FiniteSemigroup>,
    presentation: Option<rheight::rewriting::PresentedSemigroup>,
}

impl Loaded {
    fn element(&self, name: &str) -> anyhow::Result<usize> {
        if let Ok(a) = self.semigroup.element(name) {
            return Ok(a);
        }
        match &self.presentation {
            Some(p) => p
                .element(name)
                .map_err(|e| anyhow!("element `{name}`: {e}")),
            None => bail!("no element named `{name}`"),
        }
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn detect(text: &str) -> InputFormat {
    let first = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty());
    match first {
        Some(l) if l.starts_with("letters") => InputFormat::Presentation,
        _ => InputFormat::Table,
    }
}

fn parse_presentation(path: &Path) -> anyhow::Result<RewritingSystem> {
    read(path)?
        .parse::<RewritingSystem>()
        .map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn load(input: &Input) -> anyhow::Result<Loaded> {
    let text = read(&input.path)?;
    let format = match input.format {
        InputFormat::Auto => detect(&text),
        other => other,
    };
    match format {
        InputFormat::Presentation => {
            let system: RewritingSystem = text
                .parse()
                .map_err(|e| anyhow!("{}: {e}", input.path.display()))?;
            if let Completeness::NotConfluent { witness, .. } = system.is_complete() {
                bail!(
                    "{}: the rewriting system is not complete (critical pair at `{}` does not resolve)",
                    input.path.display(),
                    system.render(&witness.source)
                );
            }
            let presented = semigroup_from_presentation(&system, input.cap)?;
            Ok(Loaded {
                semigroup: Arc::new(presented.semigroup.clone()),
                presentation: Some(presented),
            })
        }
        _ => {
            let s: FiniteSemigroup = text
                .parse()
                .map_err(|e| anyhow!("{}: {e}", input.path.display()))?;
            Ok(Loaded {
                semigroup: Arc::new(s),
                presentation: None,
            })
        }
    }
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text)
            .with_context(|| format!("cannot write {}", p.display()))
            .map_err(Failure::Failed),
        None => {
            out!("{text}");
            Ok(())
        }
    }
}

/// Splits on commas and whitespace outside parentheses and brackets, so
/// names such as `(1,2)` stay whole.
fn split_generators(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut current = String::new();
    let mut depth = 0usize;
    for c in text.chars() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth = depth.saturating_sub(1),
            _ => {}
        }
        if depth == 0 && (c == ',' || c.is_whitespace()) {
            if !current.is_empty() {
                out.push(std::mem::take(&mut current));
            }
        } else {
            current.push(c);
        }
    }
    if !current.is_empty() {
        out.push(current);
    }
    out
}

fn generated(
    loaded: &Loaded,
    generators: &str,
    kind: SubsetKind,
) -> anyhow::Result<rheight::SubsetHandle> {
    let x: ElementSet = split_generators(generators)
        .iter()
        .map(|g| loaded.element(g))
        .collect::<anyhow::Result<_>>()?;
    if x.is_empty() {
        bail!("no generators given");
    }
    Ok(ideals::generate(&loaded.semigroup, &x, kind)?)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Height { input, relation } => {
            let s = load(&input)?.semigroup;
            match relation {
                Some(r) => outln!("{}", green::height(&s, r)),
                None => {
                    for r in GreensRelation::ALL {
                        outln!("{r}: {}", green::height(&s, r));
                    }
                }
            }
            Ok(true)
        }
        Command::Poset {
            input,
            relation,
            dot,
            generators,
            kind,
        } => {
            let loaded = load(&input)?;
            let target = match generators {
                None => loaded.semigroup.as_ref().clone(),
                Some(g) => generated(&loaded, &g, kind)?.restrict().semigroup,
            };
            let text = green::class_poset(&target, relation).to_dot(&target);
            write_or_print(dot.as_deref(), &text)?;
            Ok(true)
        }
        Command::Classes { input, relation } => {
            let s = load(&input)?.semigroup;
            let poset = green::class_poset(&s, relation);
            outln!("relation: {relation}");
            outln!("classes: {}", poset.len());
            outln!("height: {}", poset.height());
            for (i, class) in poset.classes().iter().enumerate() {
                outln!("class {i}: {{{}}}", s.names_of(class).join(", "));
            }
            for x in 0..poset.len() {
                for y in poset.lower_covers(x) {
                    outln!("cover: {x} > {y}");
                }
            }
            Ok(true)
        }
        Command::Complete { path } => {
            let system = parse_presentation(&path)?;
            outln!("critical_pairs: {}", system.critical_pairs().len());
            match system.is_complete() {
                Completeness::Complete => {
                    outln!("complete: true");
                    Ok(true)
                }
                Completeness::NotConfluent {
                    witness,
                    left_normal,
                    right_normal,
                } => {
                    outln!("complete: false");
                    outln!("witness: {}", system.render(&witness.source));
                    outln!(
                        "left: {} -> {}",
                        system.render(&witness.left),
                        system.render(&left_normal)
                    );
                    outln!(
                        "right: {} -> {}",
                        system.render(&witness.right),
                        system.render(&right_normal)
                    );
                    Ok(false)
                }
            }
        }
        Command::Elements { input } => {
            let s = load(&input)?.semigroup;
            outln!("order: {}", s.order());
            for name in s.names() {
                outln!("{name}");
            }
            Ok(true)
        }
        Command::Bounds {
            input,
            generators,
            kind,
            json,
        } => {
            let loaded = load(&input)?;
            let handle = generated(&loaded, &generators, kind)?;
            outln!("members: {{{}}}", handle.member_names().join(", "));
            let report = ideals::bound_report(&handle).map_err(|e| Failure::Usage(e.into()))?;
            out!("{}", report.to_record());
            let sanity = ideals::sanity_report(&handle).map_err(|e| Failure::Failed(e.into()))?;
            if let Some(s) = &sanity {
                out!("{}", s.to_record());
            }
            if let Some(path) = json {
                let mut all = vec![report.clone()];
                all.extend(sanity.clone());
                let text =
                    serde_json::to_string_pretty(&all).map_err(|e| Failure::Failed(e.into()))?;
                write_or_print(Some(&path), &text)?;
            }
            Ok(report.pass && sanity.is_none_or(|s| s.pass))
        }
        Command::Verify {
            suite,
            n,
            order,
            samples,
            seed,
            json,
        } => {
            let suites: Vec<Suite> = if suite == "all" {
                Suite::ALL.to_vec()
            } else {
                vec![suite
                    .parse::<Suite>()
                    .map_err(|e| Failure::Usage(e.into()))?]
            };
            let options = SuiteOptions {
                n,
                order,
                samples,
                seed,
            };
            let results: Vec<_> = suites
                .iter()
                .map(|&s| verify::run_suite(s, &options))
                .collect();
            for r in &results {
                out!("{}", r.to_text());
            }
            if let Some(path) = json {
                let text = if results.len() == 1 {
                    results[0].to_json()
                } else {
                    serde_json::to_string_pretty(&results).map_err(|e| Failure::Failed(e.into()))?
                };
                write_or_print(Some(&path), &text)?;
            }
            Ok(results.iter().all(|r| r.passed()))
        }
        Command::SearchOpen1 {
            max_order,
            budget,
            time_limit,
            seed,
            json,
        } => {
            if !(1..=rheight::oracle::SAMPLED_MAX_ORDER).contains(&max_order) {
                return Err(Failure::Usage(anyhow!(
                    "--max-order must lie in 1..={}",
                    rheight::oracle::SAMPLED_MAX_ORDER
                )));
            }
            let time_limit = match time_limit {
                Some(t) if !(t.is_finite() && t >= 0.0) => {
                    return Err(Failure::Usage(anyhow!(
                        "--time-limit must be a non-negative number"
                    )))
                }
                t => t.map(Duration::from_secs_f64),
            };
            let report = search::search_open1(&SearchConfig {
                max_order,
                budget,
                seed,
                time_limit,
            });
            out!("{}", report.to_record());
            if let Some(path) = json {
                write_or_print(Some(&path), &report.to_json())?;
            }
            Ok(true)
        }
        Command::Export { family, n, format } => {
            let instance = match family {
                Family::BiIdeal => constructions::bi_ideal_family(n),
                Family::LeftIdealCs => constructions::left_ideal_cs_family(n),
                Family::BrandtTower => constructions::right_ideal_tower(n),
            }
            .map_err(|e| Failure::Usage(e.into()))?;
            let text = match format {
                ExportFormat::Table => instance.table_text(),
                ExportFormat::Presentation => instance.presentation_text().ok_or_else(|| {
                    Failure::Usage(anyhow!("{} has no presentation", instance.family))
                })?,
            };
            out!("{text}");
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Failed(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
