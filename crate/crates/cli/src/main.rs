//! `cdt`: check, measure, compress and search condensed detachment proofs.
//!
//! Exit codes: 0 success, 1 verification failure or nothing found, 2 usage
//! or parse error, 3 resource limit.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use cdterm::calc::{check_proof, AxiomAssignment, MgtEngine};
use cdterm::compact::{compact, Body, CompactProof, Step};
use cdterm::dterm::{enumerate_prime, enumerate_tree_size, prime_count, subterms_of, Kind};
use cdterm::lemmas::{self, KeepOrder, Lemma, LoopConfig, Prune};
use cdterm::properties::{format_table, property_table, MinSizeOracle, PropertyConfig, PropertyRow, COLUMNS};
use cdterm::proof_file::{print_proof, read_proof};
use cdterm::reduction::{reduce_to_regular, rewrite_with_table, Objective as RewriteObjective};
use cdterm::search::{finish, prove_with_lemmas, Objective, SearchConfig};
use cdterm::table::SmallProofTable;
use cdterm::{DTerm, Formula, PrimSym};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

/// Environment variable naming the small-proof table cache directory.
const CACHE_ENV: &str = "CDT_TABLE_CACHE";

#[derive(Parser)]
#[command(name = "cdt", version, about = "Condensed detachment proofs as D-terms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify every step of a proof file.
    Check {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Properties of all subproofs of the goals.
    Table {
        file: PathBuf,
        /// Comma-separated column names, e.g. `DT,DC,MT`.
        #[arg(long, value_delimiter = ',')]
        columns: Vec<String>,
        #[arg(long)]
        json: bool,
        /// Tree-size bound of the enumeration behind MT.
        #[arg(long, default_value_t = 16)]
        mt_bound: u64,
        /// Compacted-size bound of the enumeration behind MC.
        #[arg(long, default_value_t = 7)]
        mc_bound: usize,
        /// Skip the MT/MC enumeration; those columns become intervals.
        #[arg(long)]
        no_oracle: bool,
    },
    /// Shorten the goals of a proof.
    Reduce {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = ReduceMode::Regular)]
        mode: ReduceMode,
        /// Small-proof table cache directory (default: $CDT_TABLE_CACHE).
        #[arg(long)]
        table_cache: Option<PathBuf>,
        /// Largest prime size in the small-proof table.
        #[arg(long, default_value_t = 16)]
        table_bound: u64,
        /// Measure that table rewriting must decrease.
        #[arg(long, value_enum, default_value_t = Measure::Tree)]
        objective: Measure,
    },
    /// Replace minor premises the goals do not depend on by `n`.
    Simpn { file: PathBuf },
    /// Compute lemmas for goal-directed search.
    Lemmas {
        #[command(subcommand)]
        method: LemmaMethod,
    },
    /// Goal-directed search for a proof.
    Prove(ProveArgs),
    /// Enumerate D-terms over the primitive 1 of a given tree size.
    Enumerate {
        #[arg(value_enum)]
        kind: EnumKind,
        /// The tree size.
        #[arg(long)]
        bound: u64,
        #[arg(long)]
        count_only: bool,
    },
    /// Graphviz DOT of the minimal DAG of one step's expansion.
    Dot {
        file: PathBuf,
        #[arg(long)]
        line: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ReduceMode {
    /// C-reduction to a C-regular proof.
    Regular,
    /// Rewriting single occurrences with small-proof table witnesses.
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum Measure {
    Tree,
    Compacted,
}

#[derive(Clone, Copy, ValueEnum)]
enum EnumKind {
    All,
    Prime,
}

#[derive(Clone, Copy, ValueEnum)]
enum Order {
    Fifo,
    Lifo,
    TreeSize,
    TheoremSize,
}

#[derive(Subcommand)]
enum LemmaMethod {
    /// The MGTs of the first prime D-term of the given size with the axiom's
    /// variable count and no smaller prime proof, and of its subterms.
    PrimeCore {
        #[arg(long)]
        axiom: Formula,
        #[arg(long, default_value_t = 17)]
        size: u64,
        /// Required variable count; defaults to that of the axiom.
        #[arg(long)]
        vars: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// The given-D-term loop combining proofs with their own subproofs.
    ProofSubproof {
        #[arg(long)]
        axiom: Formula,
        #[arg(long, default_value_t = 93)]
        iterations: usize,
        #[arg(long, default_value_t = 7)]
        dkl: u32,
        #[arg(long, value_enum, default_value_t = Order::Fifo)]
        order: Order,
        /// Drop lemmas subsumed by kept ones instead of only variants.
        #[arg(long)]
        subsume: bool,
        #[arg(long)]
        no_regularity: bool,
        #[arg(long)]
        no_organic: bool,
        #[arg(long)]
        no_n_minors: bool,
        #[arg(long)]
        max_theorem_size: Option<usize>,
        #[arg(long)]
        max_theorem_height: Option<usize>,
        #[arg(long)]
        max_theorem_vars: Option<usize>,
        #[arg(long)]
        max_theorem_c_size: Option<usize>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct ProveArgs {
    /// Axioms, numbered 1, 2, ... in the given order.
    #[arg(long = "axiom", required = true)]
    axioms: Vec<Formula>,
    #[arg(long)]
    goal: Formula,
    #[arg(long)]
    max_tree_size: u64,
    #[arg(long)]
    max_height: Option<u32>,
    #[arg(long)]
    max_dkl: Option<u32>,
    /// Lemma file with lines `formula = dterm`, over the first axiom.
    #[arg(long)]
    lemmas: Option<PathBuf>,
    /// Prune subgoal proofs that are not C-regular.
    #[arg(long)]
    regular: bool,
    /// Among up to this many minimal-tree-size solutions, return the one of
    /// least compacted size.
    #[arg(long)]
    min_compacted: Option<usize>,
    #[arg(long)]
    max_inferences: Option<u64>,
    /// Apply n-simplification to the result.
    #[arg(long)]
    simpn: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<cdterm::Error>() {
        Some(cdterm::Error::ResourceLimit(_)) => 3,
        Some(cdterm::Error::Parse(_) | cdterm::Error::ProofFile { .. } | cdterm::Error::Io(_)) => 2,
        Some(_) => 1,
        None => 2,
    }
}

fn run(cmd: Command) -> Result<u8> {
    match cmd {
        Command::Check { file, json } => check(&file, json),
        Command::Table { file, columns, json, mt_bound, mc_bound, no_oracle } => {
            table(&file, &columns, json, (!no_oracle).then_some((mt_bound, mc_bound)))
        }
        Command::Reduce { file, mode, table_cache, table_bound, objective } => {
            reduce(&file, mode, table_cache, table_bound, objective)
        }
        Command::Simpn { file } => simpn(&file),
        Command::Lemmas { method } => lemma_cmd(method),
        Command::Prove(args) => prove(args),
        Command::Enumerate { kind, bound, count_only } => enumerate(kind, bound, count_only),
        Command::Dot { file, line } => dot(&file, line),
    }
}

fn load(file: &Path) -> Result<(CompactProof, AxiomAssignment)> {
    let p = read_proof(file)?;
    let alpha = AxiomAssignment::from_proof(&p)?;
    Ok((p, alpha))
}

fn opt(f: &Option<Formula>) -> String {
    f.as_ref().map(|f| f.canonical().to_string()).unwrap_or_else(|| "-".into())
}

fn check(file: &Path, json: bool) -> Result<u8> {
    let (p, alpha) = load(file)?;
    let report = check_proof(&p, &alpha)?;
    if json {
        let steps: Vec<_> = report
            .steps
            .iter()
            .map(|s| {
                json!({
                    "index": s.index,
                    "goal": s.goal,
                    "axiom": s.axiom,
                    "stated": s.stated.as_ref().map(|f| f.to_string()),
                    "mgt": s.mgt.as_ref().map(|f| f.canonical().to_string()),
                    "verified": s.verified,
                    "dt": s.t_size,
                    "dc": s.c_size,
                    "dh": s.height,
                })
            })
            .collect();
        let out = json!({
            "schema": "cdt.check/1",
            "file": file.display().to_string(),
            "verified": report.verified,
            "goals_dc": report.goals_c_size,
            "steps": steps,
        });
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        for s in &report.steps {
            let mark = if s.goal { "*" } else { " " };
            let verdict = match (s.axiom, s.verified) {
                (true, _) => "axiom",
                (false, true) => "ok",
                (false, false) => "MISMATCH",
            };
            let mut line = format!("{mark}{:>3}. {verdict:<8} DC {:>3} DT {:>5} DH {:>3}", s.index, s.c_size, s.t_size, s.height);
            if !s.verified {
                let _ = write!(line, "  stated {} mgt {}", opt(&s.stated), opt(&s.mgt));
            }
            println!("{line}");
        }
        println!(
            "{}: {} steps, goals DC {}",
            if report.verified { "verified" } else { "NOT verified" },
            report.steps.len(),
            report.goals_c_size
        );
    }
    Ok(if report.verified { 0 } else { 1 })
}

fn table(file: &Path, columns: &[String], json: bool, oracle: Option<(u64, usize)>) -> Result<u8> {
    let (p, alpha) = load(file)?;
    let oracle = match oracle {
        Some((mt, mc)) => {
            let axioms: Vec<&Formula> = alpha.iter().map(|(_, f)| f).collect();
            match axioms.as_slice() {
                [a] => Some(MinSizeOracle::build(a, mt, mc)?),
                _ => None,
            }
        }
        None => None,
    };
    let rows = property_table(&p, oracle.as_ref(), &PropertyConfig::default())?;
    if json {
        let out = json!({ "schema": "cdt.table/1", "rows": rows });
        println!("{}", serde_json::to_string_pretty(&out)?);
        return Ok(0);
    }
    if columns.is_empty() {
        print!("{}", format_table(&rows));
        return Ok(0);
    }
    print!("{}", select_columns(&rows, columns)?);
    Ok(0)
}

fn select_columns(rows: &[PropertyRow], columns: &[String]) -> Result<String> {
    let idx: Vec<usize> = columns
        .iter()
        .map(|c| {
            let name = c.trim().to_uppercase().replace('_', "");
            COLUMNS.iter().position(|k| k.eq_ignore_ascii_case(&name)).ok_or_else(|| {
                anyhow!(cdterm::Error::Parse(cdterm::ParseError::new(0, format!("unknown column {c:?}"))))
            })
        })
        .collect::<Result<_>>()?;
    let mut cells: Vec<Vec<String>> = vec![idx.iter().map(|&i| COLUMNS[i].to_string()).collect()];
    for r in rows {
        let all = r.cells();
        cells.push(idx.iter().map(|&i| all[i].clone()).collect());
    }
    let widths: Vec<usize> = (0..idx.len()).map(|c| cells.iter().map(|r| r[c].chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for r in &cells {
        let line: Vec<String> = r.iter().zip(&widths).map(|(s, w)| format!("{s:>w$}", w = w)).collect();
        out.push_str(line.join(" ").trim_end());
        out.push('\n');
    }
    Ok(out)
}

/// A proof file for `roots` over the axioms of `alpha`, one step per distinct
/// compound subterm.
fn proof_of(roots: &[DTerm], alpha: &AxiomAssignment) -> Result<CompactProof> {
    let skeleton = compact(roots);
    let mut engine = MgtEngine::new(alpha);
    let mut steps: Vec<Step> = Vec::new();
    for s in skeleton.steps() {
        let formula = match &s.body {
            Body::Axiom => alpha.get(PrimSym::Num(s.index)).cloned(),
            Body::Derived(_) => engine.mgt(&skeleton.expand(s.index)?)?,
        };
        let formula = formula.ok_or(cdterm::Error::UndefinedMgt)?;
        steps.push(Step { formula: Some(formula.canonical()), ..s.clone() });
    }
    Ok(CompactProof::new(steps)?)
}

fn goal_terms(p: &CompactProof) -> Result<Vec<DTerm>> {
    p.goals().iter().map(|g| Ok(p.expand(g.index)?)).collect()
}

fn dims(d: &DTerm) -> String {
    format!("DC {} DT {} DH {}", d.c_size(), d.t_size(), d.height())
}

fn reduce(file: &Path, mode: ReduceMode, cache: Option<PathBuf>, bound: u64, objective: Measure) -> Result<u8> {
    let (p, alpha) = load(file)?;
    let goals = goal_terms(&p)?;
    let table = match mode {
        ReduceMode::Regular => None,
        ReduceMode::Table => {
            let axioms: Vec<&Formula> = alpha.iter().map(|(_, f)| f).collect();
            let [axiom] = axioms.as_slice() else {
                bail!(cdterm::Error::InvalidProof("table rewriting needs a single axiom".into()));
            };
            let dir = cache.or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from));
            Some(match dir {
                Some(dir) => SmallProofTable::cached(&dir, axiom, bound)?,
                None => SmallProofTable::build(axiom, bound)?,
            })
        }
    };
    let mut out = Vec::new();
    for d in &goals {
        let r = match &table {
            None => reduce_to_regular(d, &alpha)?,
            Some(t) => {
                let obj = match objective {
                    Measure::Tree => RewriteObjective::Tree,
                    Measure::Compacted => RewriteObjective::Compacted,
                };
                rewrite_with_table(d, &alpha, t, obj)?.0
            }
        };
        eprintln!("{} -> {}", dims(d), dims(&r));
        out.push(r);
    }
    print!("{}", print_proof(&proof_of(&out, &alpha)?));
    Ok(0)
}

fn simpn(file: &Path) -> Result<u8> {
    let (p, alpha) = load(file)?;
    let mut out = Vec::new();
    for d in goal_terms(&p)? {
        let s = cdterm::calc::simp_n(&d, &alpha)?;
        eprintln!("{} -> {}", dims(&d), dims(&s));
        out.push(s);
    }
    print!("{}", print_proof(&proof_of(&out, &alpha)?));
    Ok(0)
}

fn print_lemmas(ls: &[Lemma], json: bool) -> Result<()> {
    if json {
        println!("{}", serde_json::to_string_pretty(&lemmas::export_json(ls))?);
    } else {
        print!("{}", lemmas::export_text(ls));
    }
    Ok(())
}

fn lemma_cmd(method: LemmaMethod) -> Result<u8> {
    match method {
        LemmaMethod::PrimeCore { axiom, size, vars, json } => {
            let core = lemmas::prime_core(&axiom, size, vars.unwrap_or_else(|| axiom.var_count()))?;
            eprintln!("{} defined primes of size {size}, {} candidates", core.defined, core.candidates.len());
            for c in &core.candidates {
                eprintln!("candidate {c}");
            }
            print_lemmas(&core.lemmas, json)?;
        }
        LemmaMethod::ProofSubproof {
            axiom,
            iterations,
            dkl,
            order,
            subsume,
            no_regularity,
            no_organic,
            no_n_minors,
            max_theorem_size,
            max_theorem_height,
            max_theorem_vars,
            max_theorem_c_size,
            json,
        } => {
            let cfg = LoopConfig {
                iterations,
                dkl_limit: dkl,
                require_c_regular: !no_regularity,
                require_weakly_organic: !no_organic,
                keep_order: match order {
                    Order::Fifo => KeepOrder::Fifo,
                    Order::Lifo => KeepOrder::Lifo,
                    Order::TreeSize => KeepOrder::ByTreeSize,
                    Order::TheoremSize => KeepOrder::ByTheoremSize,
                },
                prune: if subsume { Prune::Subsume } else { Prune::Variant },
                n_minors: !no_n_minors,
                max_theorem_size,
                max_theorem_height,
                max_theorem_vars,
                max_theorem_c_size,
            };
            let ls = lemmas::proof_subproof(&axiom, &cfg)?;
            eprintln!("{} lemmas", ls.len());
            print_lemmas(&ls, json)?;
        }
    }
    Ok(0)
}

fn prove(args: ProveArgs) -> Result<u8> {
    let mut alpha = AxiomAssignment::new();
    for (i, a) in args.axioms.iter().enumerate() {
        alpha.insert(PrimSym::Num(i as u32 + 1), a);
    }
    let mut cfg = SearchConfig::new(args.max_tree_size);
    cfg.max_height = args.max_height;
    cfg.max_dkl = args.max_dkl;
    cfg.regularity_pruning = args.regular;
    cfg.max_inferences = args.max_inferences;
    if let Some(k) = args.min_compacted {
        cfg.objective = Objective::MinCompacted { max_solutions: k };
    }
    if let Some(path) = &args.lemmas {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let ls = lemmas::parse_text(&text)?;
        if !lemmas::verify(&args.axioms[0], &ls)? {
            eprintln!("lemma file {} does not verify against the first axiom", path.display());
            return Ok(1);
        }
        cfg.lemmas = ls;
    }
    let Some(found) = prove_with_lemmas(&args.goal, &alpha, &cfg)? else {
        eprintln!("no proof within tree size {}", args.max_tree_size);
        return Ok(1);
    };
    let d = if args.simpn { finish(&found, &alpha)? } else { found.expanded.clone() };
    eprintln!("found {} ({}), {} inferences", found.dterm, dims(&d), found.inferences);
    // The goal as stated, rather than the more general MGT, on the last line.
    let proof = proof_of(&[d], &alpha)?;
    let mut steps = proof.steps().to_vec();
    if let Some(last) = steps.last_mut() {
        last.goal = true;
    }
    print!("{}", print_proof(&CompactProof::new(steps)?));
    Ok(0)
}

fn enumerate(kind: EnumKind, n: u64, count_only: bool) -> Result<u8> {
    match (kind, count_only) {
        (EnumKind::Prime, true) => println!("{}", prime_count(n)),
        (EnumKind::Prime, false) => {
            for d in enumerate_prime(n) {
                println!("{d}");
            }
        }
        (EnumKind::All, _) => {
            if n > 14 {
                bail!(cdterm::Error::ResourceLimit(format!("listing all D-terms of tree size {n} is too large")));
            }
            let all = enumerate_tree_size(n);
            if count_only {
                println!("{}", all.len());
            } else {
                for d in all {
                    println!("{d}");
                }
            }
        }
    }
    Ok(0)
}

fn dot(file: &Path, line: u32) -> Result<u8> {
    let (p, _) = load(file)?;
    let d = p.expand(line)?;
    let subs = subterms_of(std::slice::from_ref(&d));
    let id = |e: &DTerm| subs.iter().position(|x| x == e).unwrap();
    let mut out = String::new();
    let _ = writeln!(out, "digraph step{line} {{");
    let _ = writeln!(out, "  node [shape=circle];");
    for (i, e) in subs.iter().enumerate() {
        match e.kind() {
            Kind::Prim(s) => {
                let _ = writeln!(out, "  n{i} [label=\"{s}\", shape=box];");
            }
            Kind::D(a, b) => {
                let _ = writeln!(out, "  n{i} [label=\"D\"];");
                let _ = writeln!(out, "  n{i} -> n{} [label=\"major\"];", id(a));
                let _ = writeln!(out, "  n{i} -> n{} [label=\"minor\"];", id(b));
            }
        }
    }
    out.push_str("}\n");
    print!("{out}");
    Ok(0)
}
