use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use gridram::bridging::{
    ac_script, as_script, bridge, is_bridging_constructible, replay, Axis, BridgeStep,
    ConstructionScript,
};
use gridram::embed::{contains, count_embeddings, max_coclique};
use gridram::grid::GridSubgraph;
use gridram::hyper::{count_embeddings_3_bipartite, fg_to_grid, tight_cycle, ThreeGraph};
use gridram::mehcolor::{color_restricted_subset, column_coloring, find_colored_pattern};
use gridram::patterns::{aligned_staircase, alternating_cycle, named, Named};
use gridram::ramsey::{
    encode_cnf, find_ac6_or_coclique, gr_exact, parse_model, product_lower_bound, uniform_subgrid,
    Certificate, CnfInstance, GrStatus, GridColoring, SimpleGraph,
};
use gridram::Coord;

#[derive(Parser)]
#[command(name = "gridram", about = "Grid Ramsey workbench", version)]
struct Cli {
    /// Seed for randomized suites (reports record it; all runs are deterministic).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Parallelism degree; results are identical for any value.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    /// Directory prefix for relative --out paths.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a named pattern as grid JSON.
    Pattern {
        /// square | nz-stool | row-clique:m | col-clique:m | ac:t | as:d
        spec: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Embedding search between two grid JSON files.
    Embed {
        #[command(subcommand)]
        cmd: EmbedCmd,
    },
    /// Largest single-line independent set of a grid.
    Coclique {
        grid: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Bridging constructions.
    Bridge {
        #[command(subcommand)]
        cmd: BridgeCmd,
    },
    /// Exact grid Ramsey computations and certificates.
    Ramsey {
        #[command(subcommand)]
        cmd: RamseyCmd,
    },
    /// 3-uniform hypergraph correspondence.
    Hyper {
        #[command(subcommand)]
        cmd: HyperCmd,
    },
    /// Column colorings from row incidence.
    Meh {
        #[command(subcommand)]
        cmd: MehCmd,
    },
    /// Run the whole reproduction suite and print a pass/fail table.
    Reproduce,
}

#[derive(Subcommand)]
enum EmbedCmd {
    /// Count labeled embeddings of the pattern in the host.
    Count { pattern: PathBuf, host: PathBuf },
    /// Print the lexicographically least embedding, if any.
    Find { pattern: PathBuf, host: PathBuf },
}

#[derive(Subcommand)]
enum BridgeCmd {
    /// Apply one bridge step to a grid.
    Apply {
        grid: PathBuf,
        /// col | row
        #[arg(long)]
        axis: String,
        #[arg(long)]
        src: Coord,
        #[arg(long)]
        anchor: Coord,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether a pattern arises from a bridging script.
    Constructible {
        pattern: PathBuf,
        /// Require each prefix to match the pattern restriction exactly.
        #[arg(long)]
        exact: bool,
    },
    /// Emit the canned script for ac:t or as:d.
    Script {
        /// ac:t | as:d
        spec: String,
        /// Also replay the script and print the resulting grid.
        #[arg(long)]
        replay: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum RamseyCmd {
    /// Exhaustive gr computation with avoider witnesses.
    Exact {
        pattern: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        nmax: usize,
    },
    /// Export the avoidance formula as DIMACS CNF.
    Cnf {
        pattern: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: Coord,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decode a solver model against an exported formula.
    Decode { cnf: PathBuf, model: PathBuf },
    /// Product-construction lower bound from a column graph edge list.
    Lower {
        #[arg(long)]
        col_graph: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Constructive six-cycle-or-coclique certificate for a grid.
    FindAc6 {
        grid: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Uniformly colored subgrid of a 2-colored grid.
    Subgrid {
        coloring: PathBuf,
        #[arg(long)]
        m: usize,
    },
}

#[derive(Subcommand)]
enum HyperCmd {
    /// Convert a 3-graph (with Property-B bipartition) to grid JSON.
    Fg {
        hypergraph: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the tight cycle on t vertices as 3-graph JSON.
    Tight {
        t: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count side-respecting embeddings between two 3-graphs.
    Count { pattern: PathBuf, host: PathBuf },
}

#[derive(Subcommand)]
enum MehCmd {
    /// Print the column-pair coloring of a grid.
    Color { grid: PathBuf },
    /// Search for a color-compatible image of a one-row pattern.
    Find { grid: PathBuf, pattern: PathBuf },
    /// Largest column subset whose pairs all avoid a forbidden color set.
    Avoid {
        grid: PathBuf,
        /// Comma-separated forbidden rows, e.g. "1,3".
        #[arg(long)]
        color: String,
    },
}

fn read_grid(path: &Path) -> Result<GridSubgraph, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let g: GridSubgraph =
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let report = g.validate();
    if !report.is_ok() {
        return Err(format!("{}: {report}", path.display()));
    }
    Ok(g)
}

fn read_three_graph(path: &Path) -> Result<ThreeGraph, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit(out: &Option<PathBuf>, out_dir: &Option<PathBuf>, content: &str) -> Result<(), String> {
    match out {
        None => {
            println!("{content}");
            Ok(())
        }
        Some(p) => {
            let path = match out_dir {
                Some(dir) if p.is_relative() => dir.join(p),
                _ => p.clone(),
            };
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    fs::create_dir_all(parent).map_err(|e| e.to_string())?;
                }
            }
            fs::write(&path, content).map_err(|e| format!("{}: {e}", path.display()))?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
    }
}

fn parse_pattern_spec(spec: &str) -> Result<GridSubgraph, String> {
    let build = |res: gridram::Result<GridSubgraph>| res.map_err(|e| e.to_string());
    if let Some(rest) = spec.strip_prefix("ac:") {
        let t: Coord = rest.parse().map_err(|_| format!("bad cycle size {rest:?}"))?;
        return build(alternating_cycle(t));
    }
    if let Some(rest) = spec.strip_prefix("as:") {
        let d: Coord = rest.parse().map_err(|_| format!("bad staircase size {rest:?}"))?;
        return build(aligned_staircase(d));
    }
    if let Some(rest) = spec.strip_prefix("row-clique:") {
        let m: Coord = rest.parse().map_err(|_| format!("bad clique size {rest:?}"))?;
        return build(named(Named::RowClique(m)));
    }
    if let Some(rest) = spec.strip_prefix("col-clique:") {
        let m: Coord = rest.parse().map_err(|_| format!("bad clique size {rest:?}"))?;
        return build(named(Named::ColumnClique(m)));
    }
    match spec {
        "square" => build(named(Named::Square)),
        "nz-stool" => build(named(Named::NzStool)),
        other => Err(format!(
            "unknown pattern {other:?}; use square, nz-stool, row-clique:m, col-clique:m, ac:t, as:d"
        )),
    }
}

fn parse_script_spec(spec: &str) -> Result<ConstructionScript, String> {
    if let Some(rest) = spec.strip_prefix("ac:") {
        let t: Coord = rest.parse().map_err(|_| format!("bad cycle size {rest:?}"))?;
        return ac_script(t).map_err(|e| e.to_string());
    }
    if let Some(rest) = spec.strip_prefix("as:") {
        let d: Coord = rest.parse().map_err(|_| format!("bad staircase size {rest:?}"))?;
        return as_script(d).map_err(|e| e.to_string());
    }
    Err(format!("unknown script {spec:?}; use ac:t or as:d"))
}

fn parse_edge_list(path: &Path) -> Result<SimpleGraph, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut edges = std::collections::BTreeSet::new();
    let mut n: Coord = 0;
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 2 {
            return Err(format!("line {}: expected \"a b\"", i + 1));
        }
        let a: Coord = parts[0].parse().map_err(|_| format!("line {}: bad vertex", i + 1))?;
        let b: Coord = parts[1].parse().map_err(|_| format!("line {}: bad vertex", i + 1))?;
        if a == b || a == 0 || b == 0 {
            return Err(format!("line {}: bad edge {a} {b}", i + 1));
        }
        n = n.max(a).max(b);
        edges.insert((a.min(b), a.max(b)));
    }
    Ok(SimpleGraph { n, edges })
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string_pretty(value).map_err(|e| e.to_string())
}

/// Ok(true) = success, Ok(false) = verification failure (exit 1).
fn run(cli: Cli) -> Result<bool, String> {
    if cli.workers == 0 {
        return Err("--workers must be at least 1".into());
    }
    let out_dir = cli.out_dir.clone();
    match cli.command {
        Command::Pattern { spec, out } => {
            let g = parse_pattern_spec(&spec)?;
            emit(&out, &out_dir, &to_json(&g)?)?;
        }
        Command::Embed { cmd } => match cmd {
            EmbedCmd::Count { pattern, host } => {
                let p = read_grid(&pattern)?;
                let h = read_grid(&host)?;
                println!("{}", count_embeddings(&p, &h));
            }
            EmbedCmd::Find { pattern, host } => {
                let p = read_grid(&pattern)?;
                let h = read_grid(&host)?;
                match contains(&p, &h) {
                    Some(e) => println!("{}", to_json(&e)?),
                    None => {
                        println!("no embedding");
                        return Ok(false);
                    }
                }
            }
        },
        Command::Coclique { grid, k } => {
            let g = read_grid(&grid)?;
            let (size, witness) = max_coclique(&g).map_err(|e| e.to_string())?;
            println!("max coclique = {size}");
            println!("{}", to_json(&witness)?);
            if size < k {
                println!("no coclique of size {k}");
                return Ok(false);
            }
        }
        Command::Bridge { cmd } => match cmd {
            BridgeCmd::Apply { grid, axis, src, anchor, out } => {
                let g = read_grid(&grid)?;
                let axis = match axis.as_str() {
                    "col" | "column" => Axis::Column,
                    "row" => Axis::Row,
                    other => return Err(format!("bad axis {other:?}; use col or row")),
                };
                let step = BridgeStep { axis, source_index: src, anchor };
                let bridged = bridge(&g, step).map_err(|e| e.to_string())?;
                emit(&out, &out_dir, &to_json(&bridged)?)?;
            }
            BridgeCmd::Constructible { pattern, exact } => {
                let h = read_grid(&pattern)?;
                match is_bridging_constructible(&h, exact).map_err(|e| e.to_string())? {
                    Some(script) => println!("{}", to_json(&script)?),
                    None => println!("not constructible"),
                }
            }
            BridgeCmd::Script { spec, replay: do_replay, out } => {
                let script = parse_script_spec(&spec)?;
                emit(&out, &out_dir, &to_json(&script)?)?;
                if do_replay {
                    let g = replay(&script).map_err(|e| e.to_string())?;
                    println!("{}", to_json(&g)?);
                }
            }
        },
        Command::Ramsey { cmd } => match cmd {
            RamseyCmd::Exact { pattern, k, nmax } => {
                let p = read_grid(&pattern)?;
                let r = gr_exact(&p, k, nmax).map_err(|e| e.to_string())?;
                match r.status {
                    GrStatus::Exact(v) => println!("gr = {v}"),
                    GrStatus::AtLeast(v) => println!("gr >= {v}"),
                }
                for (n, w) in &r.witnesses {
                    println!("witness N={n}: {}", serde_json::to_string(w).map_err(|e| e.to_string())?);
                }
            }
            RamseyCmd::Cnf { pattern, k, n, out } => {
                let p = read_grid(&pattern)?;
                let cnf = encode_cnf(&p, k, n);
                emit(&out, &out_dir, &cnf.to_dimacs())?;
            }
            RamseyCmd::Decode { cnf, model } => {
                let text = fs::read_to_string(&cnf).map_err(|e| format!("{}: {e}", cnf.display()))?;
                let inst = CnfInstance::from_dimacs(&text).map_err(|e| e.to_string())?;
                let mtext =
                    fs::read_to_string(&model).map_err(|e| format!("{}: {e}", model.display()))?;
                let lits = parse_model(&mtext).map_err(|e| e.to_string())?;
                match inst.decode(&lits) {
                    Ok(grid) => println!("{}", to_json(&grid)?),
                    Err(e) => {
                        eprintln!("{e}");
                        return Ok(false);
                    }
                }
            }
            RamseyCmd::Lower { col_graph, k } => {
                let g = parse_edge_list(&col_graph)?;
                let report = product_lower_bound(&g, k).map_err(|e| e.to_string())?;
                println!("triangle-free: {}", report.triangle_free);
                println!("independence: {}", report.independence);
                println!("six-cycle-free: {}", report.ac6_free);
                println!("max coclique: {}", report.max_coclique);
                match report.gr_lower_bound {
                    Some((kk, bound)) => println!("gr(AC_6, K_{kk}) >= {bound}"),
                    None => {
                        println!("no lower bound certified");
                        return Ok(false);
                    }
                }
            }
            RamseyCmd::FindAc6 { grid, k } => {
                let g = read_grid(&grid)?;
                let cert = find_ac6_or_coclique(&g, k).map_err(|e| e.to_string())?;
                let ac6 = alternating_cycle(6).map_err(|e| e.to_string())?;
                if !cert.verify(&ac6, k, Some(&g)) {
                    eprintln!("certificate failed verification");
                    return Ok(false);
                }
                println!("{}", to_json(&cert)?);
                if matches!(cert, Certificate::Inconclusive) {
                    return Ok(false);
                }
            }
            RamseyCmd::Subgrid { coloring, m } => {
                let text = fs::read_to_string(&coloring)
                    .map_err(|e| format!("{}: {e}", coloring.display()))?;
                let chi: GridColoring =
                    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", coloring.display()))?;
                match uniform_subgrid(&chi, m).map_err(|e| e.to_string())? {
                    Some(s) => {
                        println!("columns: {:?}", s.columns);
                        println!("rows: {:?}", s.rows);
                        println!("colors: h={} v={}", s.h_color, s.v_color);
                    }
                    None => {
                        println!("no uniform subgrid");
                        return Ok(false);
                    }
                }
            }
        },
        Command::Hyper { cmd } => match cmd {
            HyperCmd::Fg { hypergraph, out } => {
                let h = read_three_graph(&hypergraph)?;
                let g = fg_to_grid(&h).map_err(|e| e.to_string())?;
                emit(&out, &out_dir, &to_json(&g)?)?;
            }
            HyperCmd::Tight { t, out } => {
                let h = tight_cycle(t).map_err(|e| e.to_string())?;
                emit(&out, &out_dir, &to_json(&h)?)?;
            }
            HyperCmd::Count { pattern, host } => {
                let p = read_three_graph(&pattern)?;
                let h = read_three_graph(&host)?;
                let n = count_embeddings_3_bipartite(&p, &h).map_err(|e| e.to_string())?;
                println!("{n}");
            }
        },
        Command::Meh { cmd } => match cmd {
            MehCmd::Color { grid } => {
                let g = read_grid(&grid)?;
                let chi = column_coloring(&g).map_err(|e| e.to_string())?;
                for x1 in 1..=g.columns {
                    for x2 in x1 + 1..=g.columns {
                        println!("{x1} {x2}: {:?}", chi.rows_of(x1, x2));
                    }
                }
            }
            MehCmd::Find { grid, pattern } => {
                let g = read_grid(&grid)?;
                let p = read_grid(&pattern)?;
                let chi = column_coloring(&g).map_err(|e| e.to_string())?;
                match find_colored_pattern(&chi, &p, false).map_err(|e| e.to_string())? {
                    Some(cols) => println!("columns: {cols:?}"),
                    None => {
                        println!("no compatible image");
                        return Ok(false);
                    }
                }
            }
            MehCmd::Avoid { grid, color } => {
                let g = read_grid(&grid)?;
                let chi = column_coloring(&g).map_err(|e| e.to_string())?;
                let mut mask: u32 = 0;
                for part in color.split(',') {
                    let part = part.trim();
                    if part.is_empty() {
                        continue;
                    }
                    let row: u32 = part.parse().map_err(|_| format!("bad row {part:?}"))?;
                    if row == 0 || row > g.rows as u32 {
                        return Err(format!("row {row} out of range"));
                    }
                    mask |= 1 << (row - 1);
                }
                let (subset, exact) = color_restricted_subset(&chi, mask);
                println!("columns: {subset:?}");
                println!("exact: {exact}");
            }
        },
        Command::Reproduce => {
            println!("seed: {} workers: {}", cli.seed, cli.workers);
            let mut all_pass = true;
            for (i, name, outcome) in gridram::acceptance::run_all_timed() {
                match outcome {
                    (Ok(msg), ms) => println!("criterion {i:2}: pass ({ms:>6} ms) {name}: {msg}"),
                    (Err(msg), ms) => {
                        all_pass = false;
                        println!("criterion {i:2}: FAIL ({ms:>6} ms) {name}: {msg}");
                    }
                }
            }
            return Ok(all_pass);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
