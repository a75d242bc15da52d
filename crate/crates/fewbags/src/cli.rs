//! The `fewbags` command line: `solve`, `validate`, `generate`, `bench`.
//!
//! Exit codes: 0 feasible or valid, 1 infeasible or invalid, 2 on any
//! parse or configuration error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fewbags_core::decomp::{validate_path, validate_tree};
use fewbags_core::gadgets::{self, ImplementSpec};
use fewbags_core::solver::{KeyMode, Search, Size, SolveStats, Solver, SolverConfig};
use fewbags_core::{Graph, VertexSet};

use crate::formats::{self, Metadata};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "fewbags", version, about = "Minimum-size path and tree decompositions of bounded width")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimum number of bags of a decomposition of width at most --width.
    Solve {
        graph: PathBuf,
        #[command(flatten)]
        run: RunConfig,
        /// Also print DECISION YES or NO for "at most this many bags".
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        max_bags: Option<u32>,
        /// Write an optimal decomposition to this .td file.
        #[arg(long)]
        witness: Option<PathBuf>,
        /// Print work counters as key=value lines.
        #[arg(long)]
        stats: bool,
        /// Only try these root bags, e.g. --root 1,2 --root 3 (1-based).
        #[arg(long = "root", value_parser = parse_root)]
        roots: Vec<Vec<usize>>,
    },
    /// Check a .td file against a graph.
    Validate {
        graph: PathBuf,
        decomposition: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Tree)]
        mode: Mode,
        #[arg(long)]
        width: usize,
        #[arg(long)]
        max_bags: Option<usize>,
    },
    /// Write a generated instance and its JSON sidecar.
    Generate {
        #[command(subcommand)]
        family: Family,
    },
    /// Solve every .gr file of a directory and print a TSV table.
    Bench {
        dir: PathBuf,
        #[command(flatten)]
        run: RunConfig,
        /// Solve in both modes, one row each.
        #[arg(long, conflicts_with = "mode")]
        both: bool,
    },
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    #[arg(long, value_enum, default_value_t = Mode::Path)]
    pub mode: Mode,
    #[arg(long)]
    pub width: usize,
    #[arg(long, value_enum, default_value_t = Keys::Canonical)]
    pub keys: Keys,
    #[arg(long, value_enum, default_value_t = SearchArg::Incremental)]
    pub search: SearchArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Path,
    Tree,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Keys {
    /// Canonical keys with the root bag fixed pointwise.
    Canonical,
    /// Canonical keys with the root bag fixed only as a set.
    Anonymous,
    /// No canonization.
    Plain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SearchArg {
    Incremental,
    Exhaustive,
}

#[derive(Debug, Subcommand)]
pub enum Family {
    /// Chain of cliques implementing a vector under bag capacity K.
    CliqueChain {
        #[arg(long)]
        capacity: usize,
        /// Comma-separated entries, each in (2K/3, K].
        #[arg(long, value_delimiter = ',', required = true)]
        w: Vec<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// String 3-Groups instance from a 3DM file.
    #[command(name = "s3g-from-3dm")]
    S3gFrom3dm {
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Capacity-53 path decomposition instance from an S3G file.
    MspdHard {
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Use the strings as given instead of palindromizing them.
        #[arg(long)]
        as_is: bool,
    },
    /// Random k-tree with each edge kept independently.
    PartialKtree {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1.0)]
        keep: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Center vertex with `legs` paths of `len` vertices.
    Spider {
        #[arg(long)]
        legs: usize,
        #[arg(long)]
        len: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_root(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .filter(|t| !t.is_empty())
        .map(|t| match t.trim().parse::<usize>() {
            Ok(v) if v >= 1 => Ok(v),
            _ => Err(format!("{t:?} is not a vertex id")),
        })
        .collect()
}

impl RunConfig {
    fn solver_config(&self) -> SolverConfig {
        let keys = match self.keys {
            Keys::Canonical => KeyMode::Canonical,
            Keys::Anonymous => KeyMode::Anonymous,
            Keys::Plain => KeyMode::Plain,
        };
        let search = match self.search {
            SearchArg::Incremental => Search::Incremental,
            SearchArg::Exhaustive => Search::Exhaustive,
        };
        SolverConfig::new(self.width).keys(keys).search(search)
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_ERROR
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Solve { graph, run, max_bags, witness, stats, roots } => {
            solve(&graph, &run, max_bags, witness.as_deref(), stats, roots, out)
        }
        Command::Validate { graph, decomposition, mode, width, max_bags } => {
            validate(&graph, &decomposition, mode, width, max_bags, out)
        }
        Command::Generate { family } => generate(family, out),
        Command::Bench { dir, run, both } => bench(&dir, &run, both, out, err),
    }
}

pub fn read_graph(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    formats::parse_gr(&text).with_context(|| format!("parsing {}", path.display()))
}

fn solve(
    path: &Path,
    run: &RunConfig,
    max_bags: Option<u32>,
    witness: Option<&Path>,
    stats: bool,
    roots: Vec<Vec<usize>>,
    out: &mut dyn Write,
) -> Result<i32> {
    let g = read_graph(path)?;
    let mut config = run.solver_config();
    if !roots.is_empty() {
        let mut sets = Vec::with_capacity(roots.len());
        for r in roots {
            if let Some(&v) = r.iter().find(|&&v| v > g.n()) {
                bail!("root vertex {v} is not in the graph");
            }
            if r.len() > run.width + 1 {
                bail!("root bag {r:?} has more than width + 1 = {} vertices", run.width + 1);
            }
            sets.push(r.iter().map(|v| v - 1).collect::<VertexSet>());
        }
        config = config.roots(sets);
    }
    let mut solver = Solver::new(&g, config)?;
    let outcome = match run.mode {
        Mode::Path => solver.mspd(),
        Mode::Tree => solver.mstd(),
    };
    match outcome.size {
        Size::Bags(s) => writeln!(out, "SIZE {s}")?,
        Size::Infeasible => writeln!(out, "INFEASIBLE")?,
    }
    if let Some(limit) = max_bags {
        let yes = outcome.size <= Size::Bags(limit);
        writeln!(out, "DECISION {}", if yes { "YES" } else { "NO" })?;
    }
    if let (Some(file), Some(root)) = (witness, &outcome.root) {
        let text = match run.mode {
            Mode::Path => formats::write_path_td(&solver.reconstruct_path(root, outcome.size)?, g.n()),
            Mode::Tree => formats::write_td(&solver.reconstruct_tree(root, outcome.size)?, g.n()),
        };
        fs::write(file, text).with_context(|| format!("writing {}", file.display()))?;
    }
    if stats {
        write_stats(out, &solver.stats())?;
    }
    Ok(if outcome.size.is_feasible() { EXIT_OK } else { EXIT_NO })
}

fn write_stats(out: &mut dyn Write, s: &SolveStats) -> std::io::Result<()> {
    writeln!(out, "memo_entries={}", s.memo_entries)?;
    writeln!(out, "memo_hits={}", s.memo_hits)?;
    writeln!(out, "subproblem_calls={}", s.subproblem_calls)?;
    writeln!(out, "canon_calls={}", s.canon_calls)?;
    writeln!(out, "candidate_bags_enumerated={}", s.candidate_bags_enumerated)?;
    writeln!(out, "branch_splits_enumerated={}", s.branch_splits_enumerated)
}

fn validate(
    graph: &Path,
    td_path: &Path,
    mode: Mode,
    width: usize,
    max_bags: Option<usize>,
    out: &mut dyn Write,
) -> Result<i32> {
    let g = read_graph(graph)?;
    let text = fs::read_to_string(td_path).with_context(|| format!("reading {}", td_path.display()))?;
    let file = formats::parse_td(&text).with_context(|| format!("parsing {}", td_path.display()))?;
    if file.n != g.n() {
        bail!("decomposition declares {} vertices, graph has {}", file.n, g.n());
    }
    let verdict = match mode {
        Mode::Tree => validate_tree(&g, &file.td, width, max_bags),
        Mode::Path => match file.td.to_path() {
            Some(pd) => validate_path(&g, &pd, width, max_bags),
            None => Err(fewbags_core::Violation::NotAPath),
        },
    };
    match verdict {
        Ok(()) => {
            writeln!(out, "VALID")?;
            Ok(EXIT_OK)
        }
        Err(v) => {
            writeln!(out, "INVALID: {}", v.clause())?;
            Ok(EXIT_NO)
        }
    }
}

/// Writes `text` to `out` and the sidecar next to it.
fn write_instance(out: &Path, text: &str, meta: &Metadata) -> Result<()> {
    fs::write(out, text).with_context(|| format!("writing {}", out.display()))?;
    let side = out.with_extension("json");
    fs::write(&side, meta.to_json()).with_context(|| format!("writing {}", side.display()))
}

fn generate(family: Family, out: &mut dyn Write) -> Result<i32> {
    match family {
        Family::CliqueChain { capacity, w, out: path } => {
            let spec = ImplementSpec::new(capacity, w.clone())?;
            let chain = gadgets::clique_chain(&spec);
            let mut meta = Metadata::new("clique-chain").param("w", &w);
            meta.capacity = Some(capacity);
            meta.width = Some(capacity - 1);
            meta.target_size = Some(w.len());
            meta.chain("", &chain.labeling);
            write_instance(&path, &formats::write_gr(&chain.graph), &meta)?;
            writeln!(out, "{} vertices, {} edges", chain.graph.n(), chain.graph.edge_count())?;
        }
        Family::S3gFrom3dm { input, out: path } => {
            let text = fs::read_to_string(&input).with_context(|| format!("reading {}", input.display()))?;
            let t = formats::parse_3dm(&text).with_context(|| format!("parsing {}", input.display()))?;
            let s = gadgets::s3g_from_3dm(&t)?;
            let meta = Metadata::new("s3g-from-3dm")
                .param("n", t.n)
                .param("triples", t.triples.len())
                .param("L", s.len());
            write_instance(&path, &formats::write_s3g(&s), &meta)?;
            writeln!(out, "{} strings per side of length {}", s.n(), s.len())?;
        }
        Family::MspdHard { input, out: path, as_is } => {
            let text = fs::read_to_string(&input).with_context(|| format!("reading {}", input.display()))?;
            let s = formats::parse_s3g(&text).with_context(|| format!("parsing {}", input.display()))?;
            let s = if as_is { s } else { s.palindromized(s.len()) };
            let h = gadgets::mspd_hard_instance(&s)?;
            write_instance(&path, &formats::write_gr(&h.graph), &Metadata::hard_instance(&h))?;
            writeln!(out, "capacity {} = width {}", h.capacity, h.capacity - 1)?;
            writeln!(out, "target size {}", h.size)?;
            writeln!(out, "{} vertices, {} edges", h.graph.n(), h.graph.edge_count())?;
        }
        Family::PartialKtree { n, k, keep, seed, out: path } => {
            let g = gadgets::random_partial_ktree(n, k, keep, seed)?;
            let meta = Metadata::new("partial-ktree")
                .param("n", n)
                .param("k", k)
                .param("keep", keep)
                .param("seed", seed);
            write_instance(&path, &formats::write_gr(&g), &meta)?;
            writeln!(out, "{} vertices, {} edges", g.n(), g.edge_count())?;
        }
        Family::Spider { legs, len, out: path } => {
            let g = gadgets::spider(legs, len);
            let mut meta = Metadata::new("spider").param("legs", legs).param("len", len);
            meta.parts.insert("center".into(), vec![vec![1]]);
            meta.parts.insert(
                "legs".into(),
                (0..legs).map(|j| (0..len).map(|i| 2 + j * len + i).collect()).collect(),
            );
            write_instance(&path, &formats::write_gr(&g), &meta)?;
            writeln!(out, "{} vertices, {} edges", g.n(), g.edge_count())?;
        }
    }
    Ok(EXIT_OK)
}

pub const BENCH_HEADER: &str =
    "instance\tmode\tn\tm\twidth\tresult\twall_ms\tmemo_entries\tmemo_hits\tcanon_calls";

fn bench(dir: &Path, run: &RunConfig, both: bool, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "gr"))
        .collect();
    files.sort();
    let modes = if both { vec![Mode::Path, Mode::Tree] } else { vec![run.mode] };
    writeln!(out, "{BENCH_HEADER}")?;
    for file in &files {
        let name = file.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let g = match read_graph(file) {
            Ok(g) => g,
            Err(e) => {
                writeln!(err, "skipping {name}: {e:#}")?;
                continue;
            }
        };
        for &mode in &modes {
            let start = Instant::now();
            let mut solver = match Solver::new(&g, run.solver_config()) {
                Ok(s) => s,
                Err(e) => {
                    writeln!(err, "skipping {name}: {e}")?;
                    break;
                }
            };
            let size = match mode {
                Mode::Path => solver.mspd().size,
                Mode::Tree => solver.mstd().size,
            };
            let ms = start.elapsed().as_secs_f64() * 1e3;
            let st = solver.stats();
            let mode = if mode == Mode::Path { "path" } else { "tree" };
            writeln!(
                out,
                "{name}\t{mode}\t{}\t{}\t{}\t{size}\t{ms:.1}\t{}\t{}\t{}",
                g.n(),
                g.edge_count(),
                run.width,
                st.memo_entries,
                st.memo_hits,
                st.canon_calls
            )?;
        }
    }
    Ok(EXIT_OK)
}
