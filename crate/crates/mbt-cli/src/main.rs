//! `mbt`: command-line front end. JSON reports go to stdout (or `--out`),
//! human-readable notes to stderr.
//!
//! Exit codes: 0 success, 2 usage or unreadable input, 3 infeasible or
//! refused, 4 a witness or certificate failed validation.

use std::fs;
use std::io::Read as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use mbt_core::biperm::{gen_biperm, random_intervals, solve_biperm_with_cap, EXHAUSTIVE_CAP};
use mbt_core::dag_reductions::gadget::{build_color_gadget, coloring_to_tree, tree_to_coloring, Coloring};
use mbt_core::dag_reductions::{dir_boost_solve, dir_boost_solve_rounds, dir_boost_tree, dir_extract, dir_square};
use mbt_core::fpt::{search_k_binary_tree, Field, FptOptions};
use mbt_core::graph::{
    gen_random, read_graph, rng_from_seed, validate_dir_tree, validate_undir_tree, write_graph, Digraph, DirBinaryTree, Graph, GraphKind, TreeJson, UGraph,
    UndirBinaryTree,
};
use mbt_core::heapable::{is_heapable, longest_heapable, HeapSolver, Sequence};
use mbt_core::lp::{emit_lp, integrality_gap_report, verify_fractional, FractionalSolution, SolutionJson};
use mbt_core::oracle::{
    brute_mbt_dag_with_cap, brute_mbt_directed_with_cap, brute_mbt_undirected_rooted, brute_mbt_undirected_with_cap, OptResult, DAG_CAP, DIRECTED_CAP,
    UNDIRECTED_CAP,
};
use mbt_core::treewidth::{heuristic_td, read_gr, read_td, solve_rooted_tw, solve_unrooted_tw, validate_td, write_td};
use mbt_core::undirected::tsp::{tsp12_tour, Tsp12Instance};
use mbt_core::undirected::{undir_boost_solve, undir_boost_solve_rounds, undir_boost_tree, undir_extract, undir_square};

const DEFAULT_SEED: u64 = 0x5EED;

#[derive(Parser)]
#[command(name = "mbt", version, about = "Maximum binary tree solvers, reductions and certificate checkers")]
struct Cli {
    /// Seed for every randomized component.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a random instance.
    Gen(GenArgs),
    /// Solve MBT with the chosen algorithm.
    Solve(SolveArgs),
    /// Check a tree certificate against a graph.
    VerifyTree(TreeArgs),
    /// Build the squared graph.
    Square(GraphRootArgs),
    /// Map a tree of the squared graph back to the input graph.
    Extract(TreeArgs),
    /// Boost a tree into the squared graph, or run the boosting loop.
    Boost(BoostArgs),
    /// Build the 3-colouring gadget DAG.
    #[command(name = "gadget-3col")]
    Gadget3Col(GadgetArgs),
    /// Read a colouring off a gadget tree.
    ColorExtract(GadgetArgs),
    /// TSP with weights 1 and 2 through binary trees.
    Tsp12Tour(TspArgs),
    /// Write the cut-constraint model as an LP file.
    LpEmit(LpEmitArgs),
    /// Check a fractional point of the cut-constraint model exactly.
    LpVerify(LpVerifyArgs),
    /// Longest heapable subsequence.
    Heapable(HeapArgs),
    /// Validate a tree decomposition, or write a heuristic one.
    TdCheck(TdArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Dir,
    Dag,
    Undir,
    Biperm,
    Tsp12,
    Perm,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    m: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Brute,
    Fpt,
    Biperm,
    Treewidth,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "brute")]
    algo: Algo,
    #[arg(long)]
    root: Option<usize>,
    /// Target size for the FPT search; absent means grow k until it fails.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 1e-3)]
    delta: f64,
    /// PACE .td file for the treewidth solver.
    #[arg(long)]
    td: Option<PathBuf>,
    #[arg(long, default_value_t = 64)]
    field_bits: u32,
    /// Override the size cap of the chosen solver.
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Args)]
struct TreeArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    tree: PathBuf,
    #[arg(long)]
    root: Option<usize>,
}

#[derive(Args)]
struct GraphRootArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    root: Option<usize>,
}

#[derive(Args)]
struct BoostArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    root: Option<usize>,
    /// Tree of the input graph to boost once.
    #[arg(long)]
    tree: Option<PathBuf>,
    /// Number of squaring rounds for the loop.
    #[arg(long)]
    k: Option<u32>,
    #[arg(long, default_value_t = 0.5)]
    eps: f64,
    /// Approximation ratio assumed for the inner solver.
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Args)]
struct GadgetArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    eps: f64,
    /// JSON list of "R"/"G"/"B", one per vertex.
    #[arg(long)]
    coloring: Option<PathBuf>,
    /// Gadget tree (color-extract).
    #[arg(long)]
    tree: Option<PathBuf>,
}

#[derive(Args)]
struct TspArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    eps: f64,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Args)]
struct LpEmitArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = 0)]
    root: usize,
    #[arg(long)]
    integer: bool,
}

#[derive(Args)]
struct LpVerifyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = 0)]
    root: usize,
    #[arg(long)]
    sol: PathBuf,
    /// Known integral optimum (vertex count) for the gap ratio.
    #[arg(long)]
    opt: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum HeapAlgo {
    Brute,
    Fpt,
}

#[derive(Args)]
struct HeapArgs {
    /// Whitespace-separated integers; stdin when absent.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "brute")]
    algo: HeapAlgo,
    #[arg(long, default_value_t = 1e-3)]
    delta: f64,
}

#[derive(Args)]
struct TdArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    td: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Refused(String),
    Invalid(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Refused(_) => 3,
            Failure::Invalid(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Refused(m) | Failure::Invalid(m) => m,
        }
    }
}

type Res<T> = Result<T, Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn refused(e: impl std::fmt::Display) -> Failure {
    Failure::Refused(e.to_string())
}

fn invalid(e: impl std::fmt::Display) -> Failure {
    Failure::Invalid(e.to_string())
}

/// Reads inputs and remembers their bytes for the digest.
#[derive(Default)]
struct Inputs {
    hasher: Sha256,
}

impl Inputs {
    fn read(&mut self, path: &Path) -> Res<String> {
        let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        self.absorb(&text);
        Ok(text)
    }

    fn absorb(&mut self, text: &str) {
        self.hasher.update((text.len() as u64).to_le_bytes());
        self.hasher.update(text.as_bytes());
    }

    fn graph(&mut self, path: &Path) -> Res<Graph> {
        let text = self.read(path)?;
        let first = text.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('c') && !l.starts_with('#')).unwrap_or("");
        if first.starts_with("p tw") {
            return read_gr(&text).map(Graph::Undir).map_err(usage);
        }
        read_graph(&text).map_err(usage)
    }

    fn undirected(&mut self, path: &Path) -> Res<UGraph> {
        match self.graph(path)? {
            Graph::Undir(g) => Ok(g),
            Graph::Dir(_) => Err(usage("this command needs an undirected graph")),
        }
    }

    fn directed(&mut self, path: &Path) -> Res<Digraph> {
        match self.graph(path)? {
            Graph::Dir(g) => Ok(g),
            Graph::Undir(_) => Err(usage("this command needs a directed graph")),
        }
    }

    fn tree(&mut self, path: &Path) -> Res<TreeJson> {
        serde_json::from_str(&self.read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
    }

    fn digest(self) -> String {
        hex::encode(self.hasher.finalize())
    }
}

/// Main output: either a JSON report or a text artifact.
enum Output {
    Report(Value),
    /// Artifact text plus a summary printed when the artifact goes to a file.
    Artifact(String, Value),
}

fn undir_json(t: &UndirBinaryTree, root: Option<usize>) -> Value {
    json!({ "size": t.size(), "tree": t.to_json(root) })
}

fn dir_json(t: &DirBinaryTree) -> Value {
    json!({ "size": t.size(), "tree": t.to_json() })
}

fn field(bits: u32) -> Res<Field> {
    Field::new(bits).map_err(usage)
}

fn cmd_gen(a: &GenArgs, seed: u64) -> Res<Output> {
    let text = match a.kind {
        Kind::Dir | Kind::Dag | Kind::Undir => {
            let kind = match a.kind {
                Kind::Dir => GraphKind::Dir,
                Kind::Dag => GraphKind::Dag,
                _ => GraphKind::Undir,
            };
            write_graph(&gen_random(kind, a.n, a.m, seed).map_err(usage)?)
        }
        Kind::Biperm => {
            if a.n < 2 {
                return Err(usage("biperm needs n >= 2"));
            }
            let p = a.n.div_ceil(2);
            let iv = random_intervals(p, a.n - p, seed);
            let (g, _) = gen_biperm(&iv, seed).map_err(usage)?;
            write_graph(&Graph::Undir(g))
        }
        Kind::Tsp12 => {
            let Graph::Undir(light) = gen_random(GraphKind::Undir, a.n, a.m, seed).map_err(usage)? else { unreachable!() };
            Tsp12Instance::from_light_graph(&light).write()
        }
        Kind::Perm => {
            let mut vals: Vec<usize> = (1..=a.n).collect();
            vals.shuffle(&mut rng_from_seed(seed));
            vals.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ") + "\n"
        }
    };
    Ok(Output::Artifact(text, json!({ "n": a.n, "m": a.m })))
}

fn check_undir(g: &UGraph, t: &UndirBinaryTree, root: Option<usize>) -> Res<()> {
    validate_undir_tree(g, t, root).map_err(|e| invalid(format!("solver witness failed validation: {e}")))
}

fn check_dir(g: &Digraph, t: &DirBinaryTree) -> Res<()> {
    validate_dir_tree(g, t).map_err(|e| invalid(format!("solver witness failed validation: {e}")))
}

fn brute_directed(g: &Digraph, root: Option<usize>, cap: Option<usize>) -> Res<OptResult<DirBinaryTree>> {
    let acyclic = g.is_acyclic();
    let one = |r: usize| {
        if acyclic {
            brute_mbt_dag_with_cap(g, r, cap.unwrap_or(DAG_CAP))
        } else {
            brute_mbt_directed_with_cap(g, r, cap.unwrap_or(DIRECTED_CAP))
        }
    };
    match root {
        Some(r) => one(r).map_err(refused),
        None => {
            let mut best: Option<OptResult<DirBinaryTree>> = None;
            for r in 0..g.n() {
                let cand = one(r).map_err(refused)?;
                if best.as_ref().is_none_or(|b| cand.size > b.size) {
                    best = Some(cand);
                }
            }
            best.ok_or_else(|| refused("empty graph"))
        }
    }
}

/// Directed reading of an undirected graph: both orientations of every edge.
fn bidirected(g: &UGraph) -> Digraph {
    Digraph::new(g.n(), g.edges().iter().flat_map(|&(u, v)| [(u, v), (v, u)])).expect("orientations are distinct")
}

fn fpt_solve(g: &Digraph, k: Option<usize>, a: &SolveArgs, seed: u64) -> Res<Value> {
    let mut opts = FptOptions { field: field(a.field_bits)?, seed, ..FptOptions::default() };
    if let Some(c) = a.cap {
        opts.k_cap = c;
    }
    if g.n() == 0 {
        return Err(refused("empty graph"));
    }
    match k {
        Some(k) => match search_k_binary_tree(g, k, a.delta, &opts).map_err(refused)? {
            Some(t) => {
                check_dir(g, &t)?;
                Ok(json!({ "k": k, "found": true, "size": t.size(), "tree": t.to_json() }))
            }
            None => Err(refused(format!("no binary tree with {k} vertices detected"))),
        },
        None => {
            let mut best = DirBinaryTree::single(0);
            for k in 2..=g.n().min(opts.k_cap) {
                match search_k_binary_tree(g, k, a.delta, &opts).map_err(refused)? {
                    Some(t) => best = t,
                    None => break,
                }
            }
            check_dir(g, &best)?;
            Ok(json!({ "size": best.size(), "tree": best.to_json(), "k_cap": opts.k_cap }))
        }
    }
}

fn cmd_solve(a: &SolveArgs, inp: &mut Inputs, seed: u64) -> Res<Output> {
    let g = inp.graph(&a.input)?;
    let value = match (a.algo, &g) {
        (Algo::Brute, Graph::Undir(g)) => {
            let res = match a.root {
                Some(r) => brute_mbt_undirected_rooted(g, r, 3),
                None => brute_mbt_undirected_with_cap(g, 3, a.cap.unwrap_or(UNDIRECTED_CAP)),
            }
            .map_err(refused)?;
            check_undir(g, &res.tree, a.root)?;
            undir_json(&res.tree, a.root)
        }
        (Algo::Brute, Graph::Dir(g)) => {
            let res = brute_directed(g, a.root, a.cap)?;
            check_dir(g, &res.tree)?;
            dir_json(&res.tree)
        }
        (Algo::Fpt, _) if a.root.is_some() => return Err(usage("the FPT solver handles the unrooted problem only")),
        (Algo::Fpt, Graph::Dir(d)) => fpt_solve(d, a.k, a, seed)?,
        (Algo::Fpt, Graph::Undir(u)) => {
            // a directed tree of the bidirected graph is an undirected binary tree
            let mut v = fpt_solve(&bidirected(u), a.k, a, seed)?;
            let t = TreeJson::deserialize_value(&v["tree"]).to_undirected();
            check_undir(u, &t, None)?;
            v["tree"] = serde_json::to_value(t.to_json(None)).expect("serializable");
            v
        }
        (Algo::Biperm, Graph::Undir(g)) => {
            let res = solve_biperm_with_cap(g, a.cap.unwrap_or(EXHAUSTIVE_CAP)).map_err(refused)?;
            check_undir(g, &res.tree, None)?;
            json!({ "size": res.tree.size(), "edges": res.edges, "tree": res.tree.to_json(None), "orderings": res.orderings })
        }
        (Algo::Treewidth, Graph::Undir(g)) => {
            let td = match &a.td {
                Some(p) => read_td(&inp.read(p)?).map_err(usage)?,
                None => heuristic_td(g),
            };
            validate_td(g, &td).map_err(|e| invalid(format!("tree decomposition rejected: {e}")))?;
            let sol = match a.root {
                Some(r) if r >= g.n() => return Err(usage(format!("root {r} out of range"))),
                Some(r) => solve_rooted_tw(g, r, &td),
                None => solve_unrooted_tw(g, &td),
            }
            .map_err(invalid)?;
            check_undir(g, &sol.tree, a.root)?;
            json!({ "size": sol.tree.size(), "tree": sol.tree.to_json(a.root), "width": td.width(), "max_states": sol.max_states })
        }
        (Algo::Biperm | Algo::Treewidth, Graph::Dir(_)) => return Err(usage("this algorithm needs an undirected graph")),
    };
    Ok(Output::Report(value))
}

trait FromValue {
    fn deserialize_value(v: &Value) -> Self;
}

impl FromValue for TreeJson {
    fn deserialize_value(v: &Value) -> Self {
        serde_json::from_value(v.clone()).expect("tree JSON produced by this program")
    }
}

fn cmd_verify(a: &TreeArgs, inp: &mut Inputs) -> Res<Output> {
    let g = inp.graph(&a.input)?;
    let mut tj = inp.tree(&a.tree)?;
    if a.root.is_some() {
        tj.root = a.root;
    }
    let (size, outcome) = match &g {
        Graph::Undir(g) => {
            let t = tj.to_undirected();
            (t.size(), validate_undir_tree(g, &t, a.root).map_err(|e| e.to_string()))
        }
        Graph::Dir(g) => match tj.to_directed() {
            Some(t) => (t.size(), validate_dir_tree(g, &t).map_err(|e| e.to_string())),
            None => return Err(usage("directed trees need a root")),
        },
    };
    match outcome {
        Ok(()) => Ok(Output::Report(json!({ "valid": true, "size": size }))),
        Err(e) => Err(invalid(format!("invalid tree: {e}"))),
    }
}

fn need_root(root: Option<usize>) -> Res<usize> {
    root.ok_or_else(|| usage("directed graphs need --root"))
}

fn cmd_square(a: &GraphRootArgs, inp: &mut Inputs) -> Res<Output> {
    let (text, summary) = match inp.graph(&a.input)? {
        Graph::Dir(g) => {
            let sq = dir_square(&g, need_root(a.root)?).map_err(refused)?;
            let s = json!({ "n": g.n(), "squared_n": sq.squared.n(), "squared_m": sq.squared.m(), "root": sq.root });
            (write_graph(&Graph::Dir(sq.squared)), s)
        }
        Graph::Undir(g) => {
            let sq = undir_square(&g);
            let s = json!({ "n": g.n(), "m": g.m(), "squared_n": sq.squared.n(), "squared_m": sq.squared.m() });
            (write_graph(&Graph::Undir(sq.squared)), s)
        }
    };
    Ok(Output::Artifact(text, summary))
}

fn cmd_extract(a: &TreeArgs, inp: &mut Inputs) -> Res<Output> {
    let tj = inp.tree(&a.tree)?;
    let value = match inp.graph(&a.input)? {
        Graph::Dir(g) => {
            let sq = dir_square(&g, need_root(a.root)?).map_err(refused)?;
            let t2 = tj.to_directed().ok_or_else(|| usage("directed trees need a root"))?;
            let t = dir_extract(&sq, &t2).map_err(invalid)?;
            check_dir(&g, &t)?;
            dir_json(&t)
        }
        Graph::Undir(g) => {
            let sq = undir_square(&g);
            let t = undir_extract(&sq, &tj.to_undirected()).map_err(invalid)?;
            check_undir(&g, &t, None)?;
            undir_json(&t, None)
        }
    };
    Ok(Output::Report(value))
}

fn cmd_boost(a: &BoostArgs, inp: &mut Inputs) -> Res<Output> {
    let g = inp.graph(&a.input)?;
    let given = a.tree.as_ref().map(|p| inp.tree(p)).transpose()?;
    let value = match (g, given) {
        (Graph::Dir(g), Some(tj)) => {
            let sq = dir_square(&g, need_root(a.root)?).map_err(refused)?;
            let t1 = tj.to_directed().ok_or_else(|| usage("directed trees need a root"))?;
            let t2 = dir_boost_tree(&sq, &g, &t1).map_err(invalid)?;
            check_dir(&sq.squared, &t2)?;
            dir_json(&t2)
        }
        (Graph::Undir(g), Some(tj)) => {
            let sq = undir_square(&g);
            let b = undir_boost_tree(&sq, &tj.to_undirected()).map_err(invalid)?;
            check_undir(&sq.squared, &b.tree, None)?;
            json!({ "size": b.tree.size(), "tree": b.tree.to_json(None), "degraded": b.degraded })
        }
        (Graph::Dir(g), None) => {
            let r = need_root(a.root)?;
            let cap = a.cap.unwrap_or(DAG_CAP);
            let failed = std::cell::RefCell::new(None);
            let solver = |h: &Digraph, root: usize| match brute_directed(h, Some(root), Some(cap)) {
                Ok(res) => res.tree,
                Err(e) => {
                    failed.borrow_mut().get_or_insert(e.message().to_string());
                    DirBinaryTree::single(root)
                }
            };
            let out = match a.k {
                Some(k) => dir_boost_solve_rounds(&g, r, &solver, k),
                None => dir_boost_solve(&g, r, &solver, a.alpha, a.eps),
            }
            .map_err(refused)?;
            if let Some(msg) = failed.into_inner() {
                return Err(refused(msg));
            }
            check_dir(&g, &out.tree)?;
            json!({ "size": out.tree.size(), "tree": out.tree.to_json(), "k_requested": out.k_requested, "k_used": out.k_used })
        }
        (Graph::Undir(g), None) => {
            let cap = a.cap.unwrap_or(UNDIRECTED_CAP);
            let failed = std::cell::RefCell::new(None);
            let solver = |h: &UGraph| match brute_mbt_undirected_with_cap(h, 3, cap) {
                Ok(res) => res.tree,
                Err(e) => {
                    failed.borrow_mut().get_or_insert(e.to_string());
                    UndirBinaryTree::single(0)
                }
            };
            let out = match a.k {
                Some(k) => undir_boost_solve_rounds(&g, &solver, k),
                None => undir_boost_solve(&g, &solver, a.alpha, a.eps),
            }
            .map_err(refused)?;
            if let Some(msg) = failed.into_inner() {
                return Err(refused(msg));
            }
            check_undir(&g, &out.tree, None)?;
            json!({ "size": out.tree.size(), "tree": out.tree.to_json(None), "k_requested": out.k_requested, "k_used": out.k_used })
        }
    };
    Ok(Output::Report(value))
}

fn cmd_gadget(a: &GadgetArgs, inp: &mut Inputs, out: Option<&Path>) -> Res<Output> {
    let g = inp.undirected(&a.input)?;
    let gad = build_color_gadget(&g, a.eps).map_err(refused)?;
    let mut value = json!({
        "n": gad.n, "m": gad.m, "t": gad.t, "big_n": gad.big_n, "target_size": gad.target_size(),
        "dag_n": gad.dag.n(), "dag_m": gad.dag.m(),
    });
    if let Some(p) = &a.coloring {
        let sigma: Coloring = serde_json::from_str(&inp.read(p)?).map_err(usage)?;
        let t = coloring_to_tree(&gad, &sigma).map_err(refused)?;
        check_dir(&gad.dag, &t)?;
        value["tree"] = serde_json::to_value(t.to_json()).expect("serializable");
        value["size"] = json!(t.size());
    }
    if let Some(path) = out {
        fs::write(path, write_graph(&Graph::Dir(gad.dag))).map_err(usage)?;
    }
    Ok(Output::Report(value))
}

fn cmd_color_extract(a: &GadgetArgs, inp: &mut Inputs) -> Res<Output> {
    let g = inp.undirected(&a.input)?;
    let path = a.tree.as_ref().ok_or_else(|| usage("color-extract needs --tree"))?;
    let t = inp.tree(path)?.to_directed().ok_or_else(|| usage("gadget trees need a root"))?;
    let gad = build_color_gadget(&g, a.eps).map_err(refused)?;
    let rep = tree_to_coloring(&gad, &t).map_err(invalid)?;
    Ok(Output::Report(json!({
        "coloring": rep.coloring, "monochromatic_edges": rep.violations, "fallback": rep.fallback,
        "maximal_size": rep.maximal_tree.size(),
    })))
}

fn cmd_tsp(a: &TspArgs, inp: &mut Inputs) -> Res<Output> {
    let inst = Tsp12Instance::parse(&inp.read(&a.input)?).map_err(usage)?;
    let cap = a.cap.unwrap_or(20);
    let failed = std::cell::RefCell::new(None);
    let solver = |h: &UGraph| match brute_mbt_undirected_with_cap(h, 3, cap) {
        Ok(res) => res.tree,
        Err(e) => {
            failed.borrow_mut().get_or_insert(e.to_string());
            UndirBinaryTree::single(0)
        }
    };
    let tour = tsp12_tour(&inst, &solver, a.alpha, a.eps);
    if let Some(msg) = failed.into_inner() {
        return Err(refused(msg));
    }
    let tour = tour.map_err(invalid)?;
    Ok(Output::Report(json!({ "n": inst.n, "order": tour.order, "weight": tour.weight })))
}

fn cmd_lp_emit(a: &LpEmitArgs, inp: &mut Inputs) -> Res<Output> {
    let g = inp.directed(&a.input)?;
    let text = emit_lp(&g, a.root, a.integer).map_err(refused)?;
    Ok(Output::Artifact(text, json!({ "n": g.n(), "m": g.m(), "root": a.root, "integer": a.integer })))
}

fn cmd_lp_verify(a: &LpVerifyArgs, inp: &mut Inputs) -> Res<Output> {
    let g = inp.directed(&a.input)?;
    let js: SolutionJson = serde_json::from_str(&inp.read(&a.sol)?).map_err(usage)?;
    let sol = FractionalSolution::from_json(&g, &js).map_err(usage)?;
    let rep = verify_fractional(&g, a.root, &sol).map_err(usage)?;
    let mut value = serde_json::to_value(&rep).expect("serializable");
    if !rep.feasible {
        eprintln!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
        return Err(refused(format!("infeasible: {} violated constraints", rep.violations.len())));
    }
    if let Some(opt) = a.opt {
        value["gap_ratio"] = json!(integrality_gap_report(&g, a.root, &sol, opt).map_err(refused)?.to_string());
    }
    Ok(Output::Report(value))
}

fn cmd_heapable(a: &HeapArgs, inp: &mut Inputs, seed: u64) -> Res<Output> {
    let text = match &a.input {
        Some(p) => inp.read(p)?,
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(usage)?;
            inp.absorb(&s);
            s
        }
    };
    let seq = Sequence::parse(&text).map_err(usage)?;
    let solver = match a.algo {
        HeapAlgo::Brute => HeapSolver::Brute,
        HeapAlgo::Fpt => HeapSolver::Fpt { delta: a.delta, options: FptOptions { seed, ..FptOptions::default() } },
    };
    let res = longest_heapable(&seq, solver).map_err(refused)?;
    let values: Vec<i64> = res.positions.iter().map(|&p| seq.values()[p]).collect();
    let whole = is_heapable(&seq);
    Ok(Output::Report(json!({
        "length": res.length, "positions": res.positions, "values": values,
        "input_heapable": whole.heapable, "greedy_parents": whole.parents,
    })))
}

fn cmd_td(a: &TdArgs, inp: &mut Inputs) -> Res<Output> {
    let g = inp.undirected(&a.input)?;
    match &a.td {
        Some(p) => {
            let td = read_td(&inp.read(p)?).map_err(usage)?;
            validate_td(&g, &td).map_err(|e| invalid(format!("invalid decomposition: {e}")))?;
            Ok(Output::Report(json!({ "valid": true, "width": td.width(), "bags": td.bags.len() })))
        }
        None => {
            let td = heuristic_td(&g);
            Ok(Output::Artifact(write_td(&td, g.n()), json!({ "width": td.width(), "bags": td.bags.len() })))
        }
    }
}

fn name(cmd: &Cmd) -> &'static str {
    match cmd {
        Cmd::Gen(_) => "gen",
        Cmd::Solve(_) => "solve",
        Cmd::VerifyTree(_) => "verify-tree",
        Cmd::Square(_) => "square",
        Cmd::Extract(_) => "extract",
        Cmd::Boost(_) => "boost",
        Cmd::Gadget3Col(_) => "gadget-3col",
        Cmd::ColorExtract(_) => "color-extract",
        Cmd::Tsp12Tour(_) => "tsp12-tour",
        Cmd::LpEmit(_) => "lp-emit",
        Cmd::LpVerify(_) => "lp-verify",
        Cmd::Heapable(_) => "heapable",
        Cmd::TdCheck(_) => "td-check",
    }
}

fn run(cli: &Cli) -> Res<()> {
    let mut inp = Inputs::default();
    let seed = cli.seed;
    let out = match &cli.cmd {
        Cmd::Gen(a) => cmd_gen(a, seed),
        Cmd::Solve(a) => cmd_solve(a, &mut inp, seed),
        Cmd::VerifyTree(a) => cmd_verify(a, &mut inp),
        Cmd::Square(a) => cmd_square(a, &mut inp),
        Cmd::Extract(a) => cmd_extract(a, &mut inp),
        Cmd::Boost(a) => cmd_boost(a, &mut inp),
        Cmd::Gadget3Col(a) => cmd_gadget(a, &mut inp, cli.out.as_deref()),
        Cmd::ColorExtract(a) => cmd_color_extract(a, &mut inp),
        Cmd::Tsp12Tour(a) => cmd_tsp(a, &mut inp),
        Cmd::LpEmit(a) => cmd_lp_emit(a, &mut inp),
        Cmd::LpVerify(a) => cmd_lp_verify(a, &mut inp),
        Cmd::Heapable(a) => cmd_heapable(a, &mut inp, seed),
        Cmd::TdCheck(a) => cmd_td(a, &mut inp),
    }?;
    let report = |result: Value, digest: String| {
        let v = json!({ "subcommand": name(&cli.cmd), "inputs_digest": digest, "seed": seed, "result": result });
        serde_json::to_string_pretty(&v).expect("serializable") + "\n"
    };
    let write = |text: &str, path: Option<&Path>| -> Res<()> {
        match path {
            Some(p) => fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    };
    match out {
        Output::Report(v) => {
            // gadget-3col uses --out for the DAG itself
            let target = if matches!(cli.cmd, Cmd::Gadget3Col(_)) { None } else { cli.out.as_deref() };
            write(&report(v, inp.digest()), target)
        }
        Output::Artifact(text, summary) => match &cli.out {
            Some(p) => {
                write(&text, Some(p))?;
                write(&report(summary, inp.digest()), None)
            }
            None => write(&text, None),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = run(&cli);
    let ms = start.elapsed().as_millis();
    match outcome {
        Ok(()) => {
            eprintln!("mbt {}: ok in {ms} ms", name(&cli.cmd));
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("mbt {}: {}", name(&cli.cmd), f.message());
            ExitCode::from(f.code())
        }
    }
}
