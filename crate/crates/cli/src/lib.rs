//! Batch driver for `springer-core`: every computation as a subcommand
//! with JSON or plain-table output.
//!
//! Exit codes: 0 success, 1 a `verify` check failed, 2 invalid arguments,
//! 3 point-count budget exceeded.

use std::ffi::OsString;
use std::fmt;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use itertools::Itertools;
use num_bigint::BigInt;
use rayon::prelude::*;
use serde_json::{json, Map, Value};
use springer_core::cohomology::{build_ideal, hilbert_series, osp_count, osp_formula, top_degree};
use springer_core::components::{
    bundle_type, dimension, dyck_from_pairs, intersect, poincare_pair, poincare_union, poincare_union_oracle,
    PairIndex, ORACLE_MAX_PAIRS,
};
use springer_core::nilpotent::{count_points_fp, flag_membership, NilpotentModel, DEFAULT_BUDGET};
use springer_core::shapes::{classify_filling, enumerate_components, enumerate_fillings, FillingRecord, GlobalParams};
use springer_core::QPoly;

pub const SCHEMA: &str = "1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Environment variable capping the worker threads.
pub const THREADS_VAR: &str = "DST_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Table,
}

#[derive(Debug, Parser)]
#[command(name = "dspringer", version, about = "Invariants of Delta-Springer fibers Y_{n,(1^{n-1}),s}")]
pub struct Cli {
    #[command(subcommand)]
    pub verb: Verb,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Cap on candidate lines examined by point counts.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
}

#[derive(Debug, Clone, Args)]
pub struct Shape {
    #[arg(long)]
    pub n: u32,
    /// Defaults to n - 1.
    #[arg(long)]
    pub s: Option<u32>,
}

impl Shape {
    fn params(&self) -> Result<GlobalParams, CliError> {
        let s = match self.s {
            Some(s) => s,
            None => self.n.checked_sub(1).ok_or(CliError::Usage("--n must be at least 2".into()))?,
        };
        Ok(GlobalParams::new(self.n, s)?)
    }
}

/// `i,j`, or `i` alone for `(i,i)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairArg(pub u32, pub u32);

impl FromStr for PairArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |t: &str| t.trim().parse::<u32>().map_err(|_| format!("bad pair token {s:?}"));
        match s.split_once(',') {
            Some((a, b)) => Ok(PairArg(num(a)?, num(b)?)),
            None => num(s).map(|i| PairArg(i, i)),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Verb {
    /// Component tableaux with their words, dimensions and Poincare polynomials.
    Components(Shape),
    /// All fillings (permutation flags) and the components containing each.
    Fillings(Shape),
    /// Filling classification against index-set membership.
    Classify {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        i: Option<u32>,
    },
    /// Dimension, bundle type and Poincare polynomial of K^{i,j} (all pairs if --i is absent).
    Poincare {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        i: Option<u32>,
        /// Defaults to i.
        #[arg(long)]
        j: Option<u32>,
    },
    /// Poincare polynomial of a union of intersections.
    Union {
        #[command(flatten)]
        shape: Shape,
        #[arg(long, num_args = 1.., required = true)]
        pairs: Vec<PairArg>,
    },
    /// Intersection of components or intersections.
    Intersect {
        #[command(flatten)]
        shape: Shape,
        #[arg(long, num_args = 1.., required = true)]
        pairs: Vec<PairArg>,
    },
    /// Inclusion poset of all K^{i,j}.
    Poset(Shape),
    /// Hilbert vector of the cohomology presentation (s = n - 1).
    Hilbert {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        i: Option<u32>,
    },
    /// F_p point counts of K^{i,j} against the Poincare polynomial at p.
    Pointcount {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        p: u32,
        #[arg(long, num_args = 1..)]
        pairs: Vec<PairArg>,
    },
    /// Every cross-check for one (n, s).
    Verify {
        #[command(flatten)]
        shape: Shape,
        #[arg(long, default_value_t = 2)]
        p: u32,
    },
}

impl Verb {
    fn name(&self) -> &'static str {
        match self {
            Verb::Components(_) => "components",
            Verb::Fillings(_) => "fillings",
            Verb::Classify { .. } => "classify",
            Verb::Poincare { .. } => "poincare",
            Verb::Union { .. } => "union",
            Verb::Intersect { .. } => "intersect",
            Verb::Poset(_) => "poset",
            Verb::Hilbert { .. } => "hilbert",
            Verb::Pointcount { .. } => "pointcount",
            Verb::Verify { .. } => "verify",
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] springer_core::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(springer_core::Error::BudgetExceeded { .. }) => EXIT_BUDGET,
            _ => EXIT_INVALID,
        }
    }
}

/// Exit code and captured streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Default)]
struct Table {
    headers: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(headers: &[&'static str]) -> Self {
        Table { headers: headers.to_vec(), rows: Vec::new() }
    }

    fn push<I: IntoIterator<Item = S>, S: ToString>(&mut self, row: I) {
        self.rows.push(row.into_iter().map(|c| c.to_string()).collect());
    }
}

impl fmt::Display for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.len()).collect();
        for row in &self.rows {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |cells: Vec<&str>| {
            cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).join("  ").trim_end().to_string()
        };
        writeln!(f, "{}", line(self.headers.clone()))?;
        let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
        writeln!(f, "{}", line(rule.iter().map(String::as_str).collect()))?;
        for row in &self.rows {
            writeln!(f, "{}", line(row.iter().map(String::as_str).collect()))?;
        }
        Ok(())
    }
}

struct Output {
    body: Map<String, Value>,
    table: Table,
    passed: bool,
}

impl Output {
    fn new(table: Table) -> Self {
        Output { body: Map::new(), table, passed: true }
    }

    fn set(&mut self, key: &str, v: Value) {
        self.body.insert(key.to_string(), v);
    }
}

fn poly_json(p: &QPoly) -> Value {
    serde_json::to_value(p).expect("polynomials serialize")
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn pair_json(p: PairIndex) -> Value {
    json!([p.i(), p.j()])
}

fn pair_record(p: PairIndex) -> Map<String, Value> {
    let bt = bundle_type(p);
    let mut m = Map::new();
    m.insert("pair".into(), pair_json(p));
    m.insert("dimension".into(), json!(dimension(p)));
    m.insert("poincare".into(), poly_json(&poincare_pair(p)));
    m.insert("bundle".into(), serde_json::to_value(&bt).expect("bundle types serialize"));
    m
}

fn to_pairs(params: GlobalParams, args: &[PairArg]) -> Result<Vec<PairIndex>, CliError> {
    args.iter().map(|&PairArg(i, j)| Ok(PairIndex::new(params, i, j)?)).collect()
}

fn cmd_components(params: GlobalParams) -> Result<Output, CliError> {
    let mut out = Output::new(Table::new(&["i", "word", "dimension", "poincare"]));
    let mut recs = Vec::new();
    for t in enumerate_components(params) {
        let pair = PairIndex::component(params, t.top_right())?;
        let word = t.partial_permutation();
        let poly = poincare_pair(pair);
        out.table.push([t.top_right().to_string(), word.to_string(), dimension(pair).to_string(), poly.to_string()]);
        recs.push(json!({
            "i": t.top_right(),
            "rows": t.rows(),
            "word": word,
            "word_string": word.to_string(),
            "dimension": dimension(pair),
            "poincare": poly_json(&poly),
        }));
    }
    out.set("components", Value::Array(recs));
    Ok(out)
}

fn rows_string(rows: &[[Option<u32>; 2]]) -> String {
    rows.iter().map(|r| r.iter().map(|c| c.map_or("-".to_string(), |x| x.to_string())).join(" ")).join(" / ")
}

fn cmd_fillings(params: GlobalParams) -> Result<Output, CliError> {
    let mut out = Output::new(Table::new(&["word", "rows", "components"]));
    let mut recs = Vec::new();
    let fillings = enumerate_fillings(params);
    for f in &fillings {
        let comps: Vec<u32> = params.components().filter(|&i| classify_filling(f, i).unwrap_or(false)).collect();
        let rec = FillingRecord::from(f);
        out.table.push([rec.word.to_string(), rows_string(&rec.rows), comps.iter().join(",")]);
        let mut v = serde_json::to_value(&rec).expect("records serialize");
        v["word_string"] = json!(rec.word.to_string());
        v["components"] = json!(comps);
        recs.push(v);
    }
    out.set("count", json!(fillings.len()));
    out.set("fillings", Value::Array(recs));
    Ok(out)
}

fn cmd_classify(params: GlobalParams, only: Option<u32>) -> Result<Output, CliError> {
    if let Some(i) = only {
        params.check_component(i)?;
    }
    let model = NilpotentModel::new(params);
    let fillings = enumerate_fillings(params);
    let mut out = Output::new(Table::new(&["i", "count", "agrees", "words"]));
    let mut recs = Vec::new();
    for i in params.components().filter(|i| only.is_none_or(|k| k == *i)) {
        let pair = PairIndex::component(params, i)?;
        let mut words = Vec::new();
        let mut agrees = true;
        for f in &fillings {
            let w = f.partial_permutation();
            let by_shape = classify_filling(f, i)?;
            agrees &= by_shape == flag_membership(&w, pair, &model)?;
            if by_shape {
                words.push(w.to_string());
            }
        }
        out.table.push([i.to_string(), words.len().to_string(), pass(agrees).to_string(), words.join(" ")]);
        recs.push(json!({"i": i, "count": words.len(), "agrees": pass(agrees), "words": words}));
    }
    out.set("total_fillings", json!(fillings.len()));
    out.set("components", Value::Array(recs));
    Ok(out)
}

fn cmd_poincare(params: GlobalParams, i: Option<u32>, j: Option<u32>) -> Result<Output, CliError> {
    let mut out = Output::new(Table::new(&["pair", "dimension", "bundle", "poincare"]));
    let pairs = match (i, j) {
        (Some(i), j) => vec![PairIndex::new(params, i, j.unwrap_or(i))?],
        (None, None) => PairIndex::all(params),
        (None, Some(_)) => return Err(CliError::Usage("--j needs --i".into())),
    };
    let mut recs = Vec::new();
    for &p in &pairs {
        out.table.push([
            p.to_string(),
            dimension(p).to_string(),
            bundle_type(p).to_string(),
            poincare_pair(p).to_string(),
        ]);
        recs.push(pair_record(p));
    }
    if recs.len() == 1 {
        out.body.extend(recs.pop().expect("one record"));
    } else {
        out.set("pairs", Value::Array(recs.into_iter().map(Value::Object).collect()));
    }
    Ok(out)
}

fn cmd_union(params: GlobalParams, args: &[PairArg]) -> Result<Output, CliError> {
    let pairs = to_pairs(params, args)?;
    let poly = poincare_union(&pairs)?;
    let dyck = dyck_from_pairs(&pairs)?;
    let oracle = if pairs.len() <= ORACLE_MAX_PAIRS { Some(poincare_union_oracle(&pairs)?) } else { None };
    let mut out = Output::new(Table::new(&["quantity", "value"]));
    out.table.push(["pairs".to_string(), pairs.iter().join(" ")]);
    out.table.push(["dyck cells".to_string(), dyck.cells().map(|(i, j)| format!("({i},{j})")).join(" ")]);
    out.table.push(["dyck sum".to_string(), dyck.weight().to_string()]);
    out.table.push(["poincare".to_string(), poly.to_string()]);
    out.table.push([
        "inclusion-exclusion".to_string(),
        oracle.as_ref().map_or("skipped".to_string(), |o| pass(*o == poly).to_string()),
    ]);
    out.set("pairs", Value::Array(pairs.iter().map(|&p| pair_json(p)).collect()));
    out.set("dimension", json!(poly.degree()));
    out.set("dyck_cells", serde_json::to_value(&dyck).expect("cells serialize"));
    out.set("dyck_sum", poly_json(&dyck.weight()));
    out.set("poincare", poly_json(&poly));
    out.set("oracle", oracle.as_ref().map_or(Value::Null, poly_json));
    out.set("oracle_agrees", json!(oracle.as_ref().map_or("SKIPPED", |o| pass(*o == poly))));
    Ok(out)
}

fn cmd_intersect(params: GlobalParams, args: &[PairArg]) -> Result<Output, CliError> {
    let pairs = to_pairs(params, args)?;
    let meet = intersect(&pairs)?;
    let mut out = Output::new(Table::new(&["pair", "dimension", "bundle", "poincare"]));
    out.table.push([
        meet.to_string(),
        dimension(meet).to_string(),
        bundle_type(meet).to_string(),
        poincare_pair(meet).to_string(),
    ]);
    out.set("inputs", Value::Array(pairs.iter().map(|&p| pair_json(p)).collect()));
    out.body.extend(pair_record(meet));
    Ok(out)
}

fn cmd_poset(params: GlobalParams) -> Result<Output, CliError> {
    let mut out = Output::new(Table::new(&["pair", "dimension", "covered by", "covers"]));
    let mut recs = Vec::new();
    for p in PairIndex::all(params) {
        let (lower, upper) = (p.lower_covers(), p.upper_covers());
        out.table.push([p.to_string(), dimension(p).to_string(), upper.iter().join(" "), lower.iter().join(" ")]);
        let mut rec = pair_record(p);
        rec.insert("lower_covers".into(), Value::Array(lower.into_iter().map(pair_json).collect()));
        rec.insert("upper_covers".into(), Value::Array(upper.into_iter().map(pair_json).collect()));
        recs.push(Value::Object(rec));
    }
    out.set("pairs", Value::Array(recs));
    Ok(out)
}

struct HilbertCheck {
    record: Map<String, Value>,
    row: Vec<String>,
    ok: bool,
}

fn hilbert_check(n: u32, i: u32) -> Result<HilbertCheck, CliError> {
    let params = GlobalParams::minimal(n)?;
    let spec = build_ideal(n, i)?;
    let h = hilbert_series(&spec);
    let predicted = poincare_pair(PairIndex::component(params, i)?);
    let osp = osp_count(n, i)?;
    let formula = osp_formula(n, i)?;
    let top = top_degree(n) as usize;
    let flags = [
        ("matches_poincare", h.matches(&predicted)),
        ("total_matches_osp", h.total() == osp),
        ("osp_matches_formula", osp == formula),
        ("palindromic", h.is_symmetric_about(top)),
        ("vanishes_above_top", h.vanishes_above(top)),
    ];
    let ok = flags.iter().all(|f| f.1);
    let mut record = Map::new();
    record.insert("i".into(), json!(i));
    record.insert("truncation".into(), json!(spec.truncation()));
    record.insert("generators".into(), json!(spec.generators().iter().map(|g| g.label()).collect::<Vec<_>>()));
    record.insert("hilbert".into(), serde_json::to_value(&h).expect("vectors serialize"));
    record.insert("predicted".into(), poly_json(&predicted));
    record.insert("osp_count".into(), json!(osp.to_string()));
    record.insert("osp_formula".into(), json!(formula.to_string()));
    for (k, v) in flags {
        record.insert(k.into(), json!(pass(v)));
    }
    let row = vec![i.to_string(), h.to_string(), osp.to_string(), pass(ok).to_string()];
    Ok(HilbertCheck { record, row, ok })
}

fn cmd_hilbert(n: u32, i: Option<u32>) -> Result<Output, CliError> {
    let params = GlobalParams::minimal(n)?;
    let is: Vec<u32> = match i {
        Some(i) => {
            params.check_component(i)?;
            vec![i]
        }
        None => params.components().collect(),
    };
    let checks: Vec<HilbertCheck> = is.par_iter().map(|&i| hilbert_check(n, i)).collect::<Result<_, _>>()?;
    let mut out = Output::new(Table::new(&["i", "hilbert", "osp", "checks"]));
    out.set("top_degree", json!(top_degree(n)));
    let mut recs = Vec::new();
    for c in checks {
        out.table.push(c.row);
        recs.push(c.record);
    }
    if recs.len() == 1 {
        out.body.extend(recs.pop().expect("one record"));
    } else {
        out.set("components", Value::Array(recs.into_iter().map(Value::Object).collect()));
    }
    Ok(out)
}

fn cmd_pointcount(params: GlobalParams, p: u32, args: &[PairArg], budget: u64) -> Result<Output, CliError> {
    let pairs = if args.is_empty() { PairIndex::all(params) } else { to_pairs(params, args)? };
    let model = NilpotentModel::new(params);
    let mut out = Output::new(Table::new(&["pair", "points", "poincare(p)", "agrees"]));
    let mut recs = Vec::new();
    for pair in pairs {
        let count = count_points_fp(pair, &model, p, budget)?;
        let expected = poincare_pair(pair).eval(&BigInt::from(p));
        out.table.push([
            pair.to_string(),
            count.to_string(),
            expected.to_string(),
            pass(count == expected).to_string(),
        ]);
        recs.push(json!({
            "pair": pair_json(pair),
            "count": count.to_string(),
            "poincare_at_p": expected.to_string(),
            "agrees": pass(count == expected),
        }));
    }
    out.set("p", json!(p));
    out.set("counts", Value::Array(recs));
    Ok(out)
}

/// Largest n whose Hilbert vectors `verify` computes.
pub const VERIFY_HILBERT_MAX_N: u32 = 5;

struct Check {
    name: &'static str,
    status: &'static str,
    detail: String,
}

impl Check {
    fn new(name: &'static str, ok: bool, detail: String) -> Self {
        Check { name, status: pass(ok), detail }
    }

    fn skipped(name: &'static str, why: &str) -> Self {
        Check { name, status: "SKIPPED", detail: why.to_string() }
    }
}

fn check_unions(params: GlobalParams) -> Result<Check, CliError> {
    const NAME: &str = "dyck_vs_inclusion_exclusion";
    if !params.is_minimal() {
        return Ok(Check::skipped(NAME, "union formula needs s = n-1"));
    }
    let all = PairIndex::all(params);
    let max = if params.n() <= 6 { 3 } else { 2 };
    let subsets: Vec<Vec<PairIndex>> =
        (1..=max.min(all.len())).flat_map(|k| all.iter().copied().combinations(k)).collect();
    let bad: Vec<String> = subsets
        .par_iter()
        .map(|s| Ok::<_, CliError>((s, poincare_union(s)? == poincare_union_oracle(s)?)))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .filter(|(_, ok)| !ok)
        .map(|(s, _)| s.iter().join(" "))
        .collect();
    Ok(Check::new(
        NAME,
        bad.is_empty(),
        format!("{} subsets of size <= {max}; mismatches: [{}]", subsets.len(), bad.join("; ")),
    ))
}

fn check_hilbert(params: GlobalParams) -> Result<Vec<Check>, CliError> {
    if !params.is_minimal() {
        return Ok(vec![
            Check::skipped("hilbert_vs_poincare", "presentation known only for s = n-1"),
            Check::skipped("osp_rank", "presentation known only for s = n-1"),
        ]);
    }
    let n = params.n();
    let osp: Vec<(u32, BigInt, BigInt)> =
        params.components().map(|i| Ok((i, osp_count(n, i)?, osp_formula(n, i)?))).collect::<Result<_, CliError>>()?;
    let osp_ok = osp.iter().all(|(_, c, f)| c == f);
    let osp_detail = osp.iter().map(|(i, c, f)| format!("i={i}: {c} vs {f}")).join(", ");
    if n > VERIFY_HILBERT_MAX_N {
        return Ok(vec![
            Check::skipped("hilbert_vs_poincare", &format!("n > {VERIFY_HILBERT_MAX_N}")),
            Check::new("osp_rank", osp_ok, osp_detail),
        ]);
    }
    let is: Vec<u32> = params.components().collect();
    let checks: Vec<HilbertCheck> = is.par_iter().map(|&i| hilbert_check(n, i)).collect::<Result<_, _>>()?;
    let failed: Vec<String> = checks.iter().filter(|c| !c.ok).map(|c| format!("i={}", c.row[0])).collect();
    Ok(vec![
        Check::new(
            "hilbert_vs_poincare",
            failed.is_empty(),
            format!("{} components; failing: [{}]", checks.len(), failed.join(", ")),
        ),
        Check::new("osp_rank", osp_ok, osp_detail),
    ])
}

fn check_points(params: GlobalParams, p: u32, budget: u64) -> Result<Check, CliError> {
    let model = NilpotentModel::new(params);
    let mut bad = Vec::new();
    let pairs = PairIndex::all(params);
    for &pair in &pairs {
        let count = count_points_fp(pair, &model, p, budget)?;
        let expected = poincare_pair(pair).eval(&BigInt::from(p));
        if count != expected {
            bad.push(format!("{pair}: {count} vs {expected}"));
        }
    }
    Ok(Check::new(
        "point_counts",
        bad.is_empty(),
        format!("{} pairs at p={p}; mismatches: [{}]", pairs.len(), bad.join("; ")),
    ))
}

fn check_classification(params: GlobalParams) -> Result<Check, CliError> {
    let model = NilpotentModel::new(params);
    let fillings = enumerate_fillings(params);
    let mut bad = Vec::new();
    for i in params.components() {
        let pair = PairIndex::component(params, i)?;
        for f in &fillings {
            let w = f.partial_permutation();
            if classify_filling(f, i)? != flag_membership(&w, pair, &model)? {
                bad.push(format!("{w} in K^{i}"));
            }
        }
    }
    Ok(Check::new(
        "classification_vs_membership",
        bad.is_empty(),
        format!("{} fillings; mismatches: [{}]", fillings.len(), bad.join(", ")),
    ))
}

fn cmd_verify(params: GlobalParams, p: u32, budget: u64) -> Result<Output, CliError> {
    let mut checks = vec![check_unions(params)?];
    checks.extend(check_hilbert(params)?);
    checks.push(check_points(params, p, budget)?);
    checks.push(check_classification(params)?);
    let mut out = Output::new(Table::new(&["check", "status", "detail"]));
    out.passed = checks.iter().all(|c| c.status != "FAIL");
    let mut recs = Vec::new();
    for c in checks {
        out.table.push([c.name.to_string(), c.status.to_string(), c.detail.clone()]);
        recs.push(json!({"name": c.name, "status": c.status, "detail": c.detail}));
    }
    out.set("p", json!(p));
    out.set("checks", Value::Array(recs));
    out.set("status", json!(pass(out.passed)));
    Ok(out)
}

fn shape_of(verb: &Verb) -> Option<&Shape> {
    match verb {
        Verb::Components(s) | Verb::Fillings(s) | Verb::Poset(s) => Some(s),
        Verb::Classify { shape, .. }
        | Verb::Poincare { shape, .. }
        | Verb::Union { shape, .. }
        | Verb::Intersect { shape, .. }
        | Verb::Pointcount { shape, .. }
        | Verb::Verify { shape, .. } => Some(shape),
        Verb::Hilbert { .. } => None,
    }
}

fn execute(cli: &Cli) -> Result<(Output, Map<String, Value>), CliError> {
    let mut head = Map::new();
    head.insert("schema".into(), json!(SCHEMA));
    head.insert("verb".into(), json!(cli.verb.name()));
    let params = shape_of(&cli.verb).map(Shape::params).transpose()?;
    if let Some(params) = params {
        head.insert("n".into(), json!(params.n()));
        head.insert("s".into(), json!(params.s()));
    }
    let params = || params.expect("verb has a shape");
    let out = match &cli.verb {
        Verb::Components(_) => cmd_components(params())?,
        Verb::Fillings(_) => cmd_fillings(params())?,
        Verb::Classify { i, .. } => cmd_classify(params(), *i)?,
        Verb::Poincare { i, j, .. } => cmd_poincare(params(), *i, *j)?,
        Verb::Union { pairs, .. } => cmd_union(params(), pairs)?,
        Verb::Intersect { pairs, .. } => cmd_intersect(params(), pairs)?,
        Verb::Poset(_) => cmd_poset(params())?,
        Verb::Hilbert { n, i } => {
            head.insert("n".into(), json!(n));
            head.insert("s".into(), json!(n.saturating_sub(1)));
            cmd_hilbert(*n, *i)?
        }
        Verb::Pointcount { p, pairs, .. } => cmd_pointcount(params(), *p, pairs, cli.budget)?,
        Verb::Verify { p, .. } => cmd_verify(params(), *p, cli.budget)?,
    };
    Ok((out, head))
}

fn thread_count() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_VAR) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(k) if k > 0 => Ok(Some(k)),
            _ => Err(CliError::Usage(format!("{THREADS_VAR} must be a positive integer, got {v:?}"))),
        },
    }
}

fn failure(err: &CliError, format: Format) -> Report {
    let stdout = match format {
        Format::Json => {
            let v = json!({"schema": SCHEMA, "error": err.to_string(), "exit_code": err.exit_code()});
            format!("{}\n", serde_json::to_string(&v).expect("json"))
        }
        Format::Table => String::new(),
    };
    Report { code: err.exit_code(), stdout, stderr: format!("error: {err}\n") }
}

/// Parses `args` (including the program name) and runs the request.
pub fn run<I, T>(args: I) -> Report
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Report { code: EXIT_INVALID, stdout: String::new(), stderr: text }
            } else {
                Report { code: EXIT_OK, stdout: text, stderr: String::new() }
            };
        }
    };
    let result = match thread_count() {
        Err(e) => Err(e),
        Ok(None) => execute(&cli),
        Ok(Some(k)) => match rayon::ThreadPoolBuilder::new().num_threads(k).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => Err(CliError::Usage(e.to_string())),
        },
    };
    match result {
        Err(e) => failure(&e, cli.format),
        Ok((out, mut head)) => {
            let code = if out.passed { EXIT_OK } else { EXIT_VERIFY_FAILED };
            let stdout = match cli.format {
                Format::Json => {
                    head.extend(out.body);
                    format!("{}\n", serde_json::to_string(&Value::Object(head)).expect("json"))
                }
                Format::Table => out.table.to_string(),
            };
            Report { code, stdout, stderr: String::new() }
        }
    }
}
