//! Command line grammar and the resolved run configuration.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dpchroma_core::dpfunction::DEFAULT_BUDGET;
use dpchroma_core::generators::from_spec;
use dpchroma_core::graph::parse_edge_list;
use dpchroma_core::Graph;

use crate::error::CliError;

/// Environment variable that replaces `--cache` when set.
pub const CACHE_ENV: &str = "DPCHROMA_CACHE";

#[derive(Parser, Debug)]
#[command(name = "dpchroma", version, about = "Exact chromatic and DP color functions of small graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Subcommand, Debug)]
pub enum CliCommand {
    /// Chromatic polynomial by subset expansion and by deletion-contraction.
    Chrompoly(Options),
    /// Exact P_DP(G, m) with a witness cover for each m.
    Dpmin(Options),
    /// Run a verification suite on one graph or a built-in corpus.
    Verify {
        suite: Suite,
        #[command(flatten)]
        options: Options,
    },
    /// P(G, m) - P_DP(G, m) over a range of m.
    Gap(Options),
    /// P and P_DP of the cone K_1 + G over a range of m.
    Cone(Options),
}

#[derive(Args, Debug, Clone)]
pub struct Options {
    /// Generator spec (C4, K5, P6, W4, glue:3, cone:C4) or edge-list file.
    #[arg(long)]
    pub graph: Option<String>,
    /// A single fold `k` or an inclusive range `lo..hi`.
    #[arg(long)]
    pub m: Option<MRange>,
    /// Largest number of covers (orbits when reduced) a search may visit.
    #[arg(long, default_value_t = DEFAULT_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: u64,
    /// Write the output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Results cache directory. Overridden by DPCHROMA_CACHE.
    #[arg(long)]
    pub cache: Option<PathBuf>,
    /// Random covers per graph and fold in the verification suites.
    #[arg(long, default_value_t = 50)]
    pub covers: usize,
    /// Run the suite over a built-in corpus instead of --graph.
    #[arg(long, value_enum)]
    pub corpus: Option<Corpus>,
    /// Seed for sampled covers.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Corpus {
    Small,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    #[value(name = "lemma-formulas2")]
    LemmaFormulas2,
    #[value(name = "lemma-three")]
    LemmaThree,
    #[value(name = "lemma-lower")]
    LemmaLower,
    Coefficients,
    Oracle,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::LemmaFormulas2 => "lemma-formulas2",
            Suite::LemmaThree => "lemma-three",
            Suite::LemmaLower => "lemma-lower",
            Suite::Coefficients => "coefficients",
            Suite::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Chrompoly,
    Dpmin,
    Verify(Suite),
    Gap,
    Cone,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Chrompoly => "chrompoly",
            Command::Dpmin => "dpmin",
            Command::Verify(_) => "verify",
            Command::Gap => "gap",
            Command::Cone => "cone",
        }
    }
}

/// Inclusive range of folds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MRange {
    pub lo: usize,
    pub hi: usize,
}

impl MRange {
    pub fn single(m: usize) -> Self {
        MRange { lo: m, hi: m }
    }

    pub fn iter(self) -> std::ops::RangeInclusive<usize> {
        self.lo..=self.hi
    }
}

impl FromStr for MRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("expected a fold or lo..hi, got {s:?}"))
        };
        let range = match s.split_once("..") {
            Some((lo, hi)) => MRange {
                lo: num(lo)?,
                hi: num(hi.trim_start_matches('=')).map_err(|e| e.to_string())?,
            },
            None => MRange::single(num(s)?),
        };
        if range.lo == 0 || range.lo > range.hi {
            return Err(format!("empty or zero fold range {s:?}"));
        }
        Ok(range)
    }
}

impl fmt::Display for MRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "{}..{}", self.lo, self.hi)
        }
    }
}

/// Where the graph comes from: an existing file, else a generator spec.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphSource {
    File(PathBuf),
    Spec(String),
}

impl GraphSource {
    pub fn parse(s: &str) -> Self {
        if Path::new(s).is_file() {
            GraphSource::File(PathBuf::from(s))
        } else {
            GraphSource::Spec(s.to_string())
        }
    }

    pub fn load(&self) -> Result<Graph, CliError> {
        match self {
            GraphSource::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
                parse_edge_list(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
            }
            GraphSource::Spec(spec) => Ok(from_spec(spec)?),
        }
    }

    pub fn label(&self) -> String {
        match self {
            GraphSource::File(path) => path.display().to_string(),
            GraphSource::Spec(spec) => spec.clone(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub graph: Option<GraphSource>,
    pub m: Option<MRange>,
    pub budget: u64,
    pub jobs: usize,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub cache: Option<PathBuf>,
    pub covers: usize,
    pub corpus: Option<Corpus>,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            graph: None,
            m: None,
            budget: DEFAULT_BUDGET,
            jobs: 1,
            out: None,
            format: Format::Json,
            cache: None,
            covers: 50,
            corpus: None,
            seed: 0,
        }
    }

    pub fn from_cli(cli: Cli) -> Self {
        let (command, options) = match cli.command {
            CliCommand::Chrompoly(o) => (Command::Chrompoly, o),
            CliCommand::Dpmin(o) => (Command::Dpmin, o),
            CliCommand::Verify { suite, options } => (Command::Verify(suite), options),
            CliCommand::Gap(o) => (Command::Gap, o),
            CliCommand::Cone(o) => (Command::Cone, o),
        };
        let cache = std::env::var_os(CACHE_ENV)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
            .or(options.cache);
        RunConfig {
            command,
            graph: options.graph.as_deref().map(GraphSource::parse),
            m: options.m,
            budget: options.budget,
            jobs: options.jobs as usize,
            out: options.out,
            format: options.format,
            cache,
            covers: options.covers,
            corpus: options.corpus,
            seed: options.seed,
        }
    }

    pub fn with_graph(mut self, spec: &str) -> Self {
        self.graph = Some(GraphSource::parse(spec));
        self
    }

    pub fn with_m(mut self, lo: usize, hi: usize) -> Self {
        self.m = Some(MRange { lo, hi });
        self
    }

    pub fn load_graph(&self) -> Result<Graph, CliError> {
        self.graph
            .as_ref()
            .ok_or_else(|| CliError::Usage(format!("{} needs --graph", self.command.name())))?
            .load()
    }

    pub fn require_m(&self) -> Result<MRange, CliError> {
        self.m
            .ok_or_else(|| CliError::Usage(format!("{} needs --m", self.command.name())))
    }
}
