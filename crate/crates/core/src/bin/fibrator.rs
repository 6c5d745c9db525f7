use std::io::{self, BufWriter, Write};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{One, Zero};
use serde_json::{json, Value};

use fibrator::burnside::{butterfly, mackey_chain, mackey_product, BurnsideElt, Coeff, Ring};
use fibrator::fiber::FiberGroup;
use fibrator::functor::FunctorSpec;
use fibrator::group::{build_group, subgroups_of, GroupHandle, SubgroupRef};
use fibrator::oracle::oracle_product;
use fibrator::pairs::{all_pairs, pair_classes, FiberedPair};
use fibrator::plus::{eta, plus_act, plus_basis, plus_cross, plus_dot, PlusElt};
use fibrator::seed::{
    check_axioms, lift_plus, lift_upper, make_seed, open_seed, parse_family, restrict_minus, subgroup_closure, Rule,
    SeedData, Selector,
};
use fibrator::upper::{mark, nmap, upper_act, upper_cross, GhostElt};
use fibrator::verify::{mark_matrix, run_suite, Options, SUITES};
use fibrator::Error;

#[derive(Parser)]
#[command(name = "fibrator", version, about = "Fibered Burnside modules, plus constructions and mark maps on small groups")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Fiber group as a list of cyclic orders, e.g. `2` or `2,2`.
    #[arg(long, global = true, default_value = "2")]
    fiber: String,
    #[arg(long, global = true, value_enum, default_value = "z")]
    ring: RingArg,
    /// Seed for all sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Human-readable tables instead of JSON lines.
    #[arg(long, global = true)]
    pretty: bool,
    /// Comma list of group specs; `G-closure` adds all subgroups of G.
    #[arg(long, global = true)]
    family: Option<String>,
    #[arg(long, global = true)]
    group: Option<String>,
    /// Seed selector: `all` or `k2only`.
    #[arg(long, global = true)]
    selector: Option<String>,
    /// `trivial`, `burnside`, or a path to a JSON functor table.
    #[arg(long, global = true, default_value = "trivial")]
    functor: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum RingArg {
    Z,
    Q,
}

#[derive(Subcommand)]
enum Cmd {
    /// Summaries of groups: order, subgroup count, abelian flag.
    Groups { specs: Vec<String> },
    /// Fibered pairs over a product of two groups.
    Pairs {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        /// Conjugacy-class representatives instead of all pairs.
        #[arg(long)]
        classes: bool,
    },
    /// Mackey product of two basis classes, checked against the oracle.
    Product {
        #[arg(long)]
        left: String,
        #[arg(long)]
        middle: String,
        #[arg(long)]
        right: String,
        /// Class index over (left, middle), as listed by `pairs --classes`.
        #[arg(long)]
        u: usize,
        /// Class index over (middle, right).
        #[arg(long)]
        v: usize,
    },
    /// Five-factor decomposition of a class and its recomposition.
    Butterfly {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        class: usize,
    },
    /// Axiom verdicts for the seed given by `--family` and `--selector`.
    Axioms,
    /// Derived seeds and their axiom verdicts.
    Seed {
        #[arg(value_enum)]
        op: SeedOp,
    },
    /// The lower plus construction.
    Plus {
        #[arg(value_enum)]
        op: PlusOp,
        #[command(flatten)]
        elt: EltArgs,
    },
    /// The upper plus construction.
    Upper {
        #[arg(value_enum)]
        op: UpperOp,
        #[command(flatten)]
        elt: EltArgs,
    },
    /// Mark of an element of F₊(G), or the whole mark matrix.
    Mark {
        #[arg(long)]
        matrix: bool,
        #[arg(long)]
        x: Option<String>,
    },
    /// Möbius map of an element of F⁺(G) given by coordinates.
    Nmap {
        #[arg(long)]
        x: String,
    },
    /// Unit of the adjunction on an F(G)-vector.
    Eta {
        #[arg(long)]
        x: String,
    },
    /// Run a verification suite.
    Verify { suite: String },
}

#[derive(Args)]
struct EltArgs {
    #[arg(long)]
    left: Option<String>,
    #[arg(long)]
    right: Option<String>,
    #[arg(long)]
    class: Option<usize>,
    /// Terms `i=c,j=c` over the basis of the relevant module.
    #[arg(long)]
    x: Option<String>,
    #[arg(long)]
    y: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeedOp {
    LiftPlus,
    LiftUpper,
    RestrictMinus,
}

#[derive(Clone, Copy, ValueEnum)]
enum PlusOp {
    Eval,
    Act,
    Dot,
    Cross,
}

#[derive(Clone, Copy, ValueEnum)]
enum UpperOp {
    Act,
    Cross,
}

/// Failure modes mapped to exit codes.
enum Fail {
    Usage(String),
    Compute(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_)
            | Error::InvalidGroup(_)
            | Error::NotSubgroup(_)
            | Error::NotInSeed(_)
            | Error::Precondition(_)
            | Error::Bound(_)
            | Error::Unsupported(_)
            | Error::GroupMismatch(_)
            | Error::RingMismatch
            | Error::FiberMismatch
            | Error::InvalidFunctor(_)
            | Error::NoGreen => Fail::Usage(e.to_string()),
            _ => Fail::Compute(e.to_string()),
        }
    }
}

type Out = std::result::Result<bool, Fail>;

struct Ctx {
    fiber: FiberGroup,
    ring: Ring,
    c: Common,
    out: Vec<Value>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let fiber = match FiberGroup::parse(&cli.common.fiber) {
        Ok(a) => a,
        Err(e) => return usage(&e.to_string()),
    };
    let ring = match cli.common.ring {
        RingArg::Z => Ring::Z,
        RingArg::Q => Ring::Q,
    };
    let mut ctx = Ctx { fiber, ring, c: cli.common, out: Vec::new() };
    let res = run(&mut ctx, &cli.cmd);
    let stdout = io::stdout();
    let mut w = BufWriter::new(stdout.lock());
    for r in &ctx.out {
        let line = if ctx.c.pretty { pretty(r) } else { r.to_string() };
        let _ = writeln!(w, "{line}");
    }
    let _ = w.flush();
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Fail::Usage(m)) => usage(&m),
        Err(Fail::Compute(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

fn usage(m: &str) -> ExitCode {
    eprintln!("error: {m}");
    ExitCode::from(2)
}

fn run(ctx: &mut Ctx, cmd: &Cmd) -> Out {
    match cmd {
        Cmd::Groups { specs } => groups(ctx, specs),
        Cmd::Pairs { left, right, classes } => pairs(ctx, left, right, *classes),
        Cmd::Product { left, middle, right, u, v } => product(ctx, left, middle, right, *u, *v),
        Cmd::Butterfly { left, right, class } => butterfly_cmd(ctx, left, right, *class),
        Cmd::Axioms => axioms(ctx),
        Cmd::Seed { op } => seed_cmd(ctx, *op),
        Cmd::Plus { op, elt } => plus_cmd(ctx, *op, elt),
        Cmd::Upper { op, elt } => upper_cmd(ctx, *op, elt),
        Cmd::Mark { matrix, x } => mark_cmd(ctx, *matrix, x.as_deref()),
        Cmd::Nmap { x } => nmap_cmd(ctx, x),
        Cmd::Eta { x } => eta_cmd(ctx, x),
        Cmd::Verify { suite } => verify(ctx, suite),
    }
}

fn group(spec: &str) -> Result<SubgroupRef, Fail> {
    Ok(build_group(spec)?.whole())
}

fn need<'a>(v: &'a Option<String>, flag: &str) -> Result<&'a str, Fail> {
    v.as_deref().ok_or_else(|| Fail::Usage(format!("missing --{flag}")))
}

fn coeff(c: Coeff) -> Value {
    if c.is_integer() {
        json!(c.to_integer())
    } else {
        json!(c.to_string())
    }
}

fn pair_json(p: &FiberedPair) -> Value {
    let v = p.view();
    let els: Vec<(u32, u32)> = p.key.elems.iter().map(|&e| v.dec(e)).collect();
    json!({ "elements": els, "values": p.key.vals })
}

fn burnside_json(x: &BurnsideElt) -> Value {
    let terms: Vec<Value> = x.terms().map(|(p, c)| json!({ "pair": pair_json(&p), "coeff": coeff(c) })).collect();
    json!(terms)
}

/// Sorted `(H-elements, φ-values, basis index, coefficient)` rows.
fn plus_json(x: &PlusElt) -> Value {
    let mut rows: Vec<(Vec<u32>, Vec<u32>, usize, Coeff)> =
        x.terms().map(|(k, c)| (k.chi.domain.elements.clone(), k.chi.values.clone(), k.basis, c)).collect();
    rows.sort();
    json!(rows.into_iter().map(|(h, v, b, c)| json!([h, v, b, coeff(c)])).collect::<Vec<_>>())
}

/// Sorted `((K, λ) representative, vector)` rows.
fn ghost_json(x: &GhostElt) -> Value {
    let mut rows: Vec<(Vec<u32>, Vec<u32>, Vec<Coeff>)> = x
        .reps
        .iter()
        .zip(&x.entries)
        .map(|(&r, v)| {
            let c = &x.poset.nodes[r];
            (c.domain.elements.clone(), c.values.clone(), v.clone())
        })
        .collect();
    rows.sort();
    json!(rows.into_iter().map(|(k, l, v)| json!([[k, l], v.into_iter().map(coeff).collect::<Vec<_>>()])).collect::<Vec<_>>())
}

fn parse_coeff(s: &str, ring: Ring) -> Result<Coeff, Fail> {
    let bad = || Fail::Usage(format!("bad coefficient '{s}'"));
    let c = match s.split_once('/') {
        Some((n, d)) => {
            let (n, d): (i64, i64) = (n.trim().parse().map_err(|_| bad())?, d.trim().parse().map_err(|_| bad())?);
            if d == 0 {
                return Err(bad());
            }
            Coeff::new(n, d)
        }
        None => Coeff::from_integer(s.trim().parse().map_err(|_| bad())?),
    };
    if !ring.admits(c) {
        return Err(Fail::Usage(format!("coefficient {c} is not in the ring")));
    }
    Ok(c)
}

/// `i=c,j=c` (or bare `i` for coefficient 1) as a dense vector of length `n`.
fn parse_terms(s: &str, n: usize, ring: Ring) -> Result<Vec<Coeff>, Fail> {
    let mut v = vec![Coeff::zero(); n];
    for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (i, c) = match tok.split_once('=') {
            Some((i, c)) => (i, parse_coeff(c, ring)?),
            None => (tok, Coeff::one()),
        };
        let i: usize = i.trim().parse().map_err(|_| Fail::Usage(format!("bad index in '{tok}'")))?;
        if i >= n {
            return Err(Fail::Usage(format!("index {i} out of range 0..{n}")));
        }
        v[i] += c;
    }
    Ok(v)
}

fn class_at(g: &SubgroupRef, h: &SubgroupRef, a: &FiberGroup, i: usize) -> Result<FiberedPair, Fail> {
    let cl = pair_classes(g, h, a)?;
    cl.get(i)
        .map(|c| c.pair.clone())
        .ok_or_else(|| Fail::Usage(format!("class index {i} out of range 0..{}", cl.len())))
}

fn selector(ctx: &Ctx, default: Selector) -> Result<Selector, Fail> {
    match &ctx.c.selector {
        Some(s) => Ok(Selector::parse(s)?),
        None => Ok(default),
    }
}

fn family(ctx: &Ctx, groups: &[&SubgroupRef]) -> Result<Vec<SubgroupRef>, Fail> {
    match &ctx.c.family {
        Some(f) => Ok(parse_family(f)?),
        None => {
            let gs: Vec<SubgroupRef> = groups.iter().map(|g| (*g).clone()).collect();
            Ok(subgroup_closure(&gs)?)
        }
    }
}

/// The functor named by `--functor` on a seed over `fam`. The trivial
/// functor lives on `S₋`; `open` requests an open seed for cross products.
fn functor(ctx: &Ctx, fam: Vec<SubgroupRef>, default: Selector, open: bool) -> Result<Arc<FunctorSpec>, Fail> {
    let name = ctx.c.functor.as_str();
    if open {
        let s = open_seed(fam, &ctx.fiber, Rule::All);
        return match name {
            "trivial" => Ok(FunctorSpec::trivial(&restrict_minus(&s)?)?),
            "burnside" => Ok(FunctorSpec::burnside(&s)),
            _ => Err(Fail::Usage("cross products need the trivial or burnside functor".into())),
        };
    }
    match name {
        "trivial" => {
            let s = make_seed(fam, &ctx.fiber, selector(ctx, Selector::K2Only)?)?;
            Ok(FunctorSpec::trivial(&restrict_minus(&s)?)?)
        }
        "burnside" => Ok(FunctorSpec::burnside(&make_seed(fam, &ctx.fiber, selector(ctx, default)?)?)),
        path => {
            let text = std::fs::read_to_string(path).map_err(|e| Fail::Usage(format!("{path}: {e}")))?;
            let s = make_seed(fam, &ctx.fiber, selector(ctx, default)?)?;
            Ok(FunctorSpec::from_json(&s, &text)?)
        }
    }
}

fn the_group(ctx: &Ctx) -> Result<SubgroupRef, Fail> {
    group(need(&ctx.c.group, "group")?)
}

fn groups(ctx: &mut Ctx, specs: &[String]) -> Out {
    let mut names: Vec<String> = specs.to_vec();
    if let Some(g) = &ctx.c.group {
        names.push(g.clone());
    }
    if names.is_empty() {
        names = ["C1", "C2", "C3", "C4", "C2xC2", "S3", "C6", "D8", "Q8"].iter().map(|s| s.to_string()).collect();
    }
    for n in names {
        let g = build_group(&n)?;
        let subs = subgroups_of(&g.whole())?;
        ctx.out.push(json!({
            "kind": "group", "spec": n, "label": g.label(), "order": g.order(),
            "abelian": g.is_abelian(), "subgroups": subs.len(),
        }));
    }
    Ok(true)
}

fn pairs(ctx: &mut Ctx, left: &str, right: &str, classes: bool) -> Out {
    let (g, h) = (group(left)?, group(right)?);
    let list: Vec<FiberedPair> = if classes {
        pair_classes(&g, &h, &ctx.fiber)?.iter().map(|c| c.pair.clone()).collect()
    } else {
        all_pairs(&g, &h, &ctx.fiber)?
    };
    for (i, p) in list.iter().enumerate() {
        let mut r = json!({ "kind": "pair", "index": i, "order": p.order(), "pair": pair_json(p) });
        if classes {
            r["kind"] = json!("class");
            r["orbit"] = json!(pair_classes(&g, &h, &ctx.fiber)?[i].orbit);
        }
        ctx.out.push(r);
    }
    ctx.out.push(json!({ "kind": "count", "left": left, "right": right, "fiber": ctx.fiber.spec(), "classes": classes, "count": list.len() }));
    Ok(true)
}

fn product(ctx: &mut Ctx, left: &str, middle: &str, right: &str, u: usize, v: usize) -> Out {
    let (g, h, k) = (group(left)?, group(middle)?, group(right)?);
    let p = class_at(&g, &h, &ctx.fiber, u)?;
    let q = class_at(&h, &k, &ctx.fiber, v)?;
    let x = mackey_product(&BurnsideElt::basis(&p, ctx.ring), &BurnsideElt::basis(&q, ctx.ring))?;
    let o = oracle_product(&p, &q, ctx.ring)?;
    ctx.out.push(json!({
        "kind": "product", "u": pair_json(&p), "v": pair_json(&q),
        "terms": burnside_json(&x), "oracle_agrees": x == o,
    }));
    Ok(x == o)
}

fn butterfly_cmd(ctx: &mut Ctx, left: &str, right: &str, class: usize) -> Out {
    let (g, h) = (group(left)?, group(right)?);
    let p = class_at(&g, &h, &ctx.fiber, class)?;
    let parts = butterfly(&p, ctx.ring)?;
    for (name, f) in ["ind", "inf", "iso", "def", "res"].iter().zip(&parts) {
        ctx.out.push(json!({
            "kind": "factor", "name": name, "left": format!("{:?}", f.left), "right": format!("{:?}", f.right),
            "terms": burnside_json(f),
        }));
    }
    let back = mackey_chain(&parts)?;
    let ok = back == BurnsideElt::basis(&p, ctx.ring);
    ctx.out.push(json!({ "kind": "recomposition", "pair": pair_json(&p), "equal": ok }));
    Ok(ok)
}

fn seed_from_flags(ctx: &Ctx) -> Result<Arc<SeedData>, Fail> {
    let fam = parse_family(need(&ctx.c.family, "family")?)?;
    Ok(make_seed(fam, &ctx.fiber, selector(ctx, Selector::All)?)?)
}

fn emit_axioms(ctx: &mut Ctx, s: &SeedData) -> Out {
    let rep = check_axioms(s)?;
    for v in &rep.verdicts {
        ctx.out.push(json!({ "kind": "axiom", "seed": rep.seed, "axiom": v.axiom, "holds": v.holds, "witness": v.witness }));
    }
    Ok(true)
}

fn axioms(ctx: &mut Ctx) -> Out {
    let s = seed_from_flags(ctx)?;
    emit_axioms(ctx, &s)
}

fn seed_cmd(ctx: &mut Ctx, op: SeedOp) -> Out {
    let base = seed_from_flags(ctx)?;
    let s = match op {
        SeedOp::LiftPlus => lift_plus(&base)?,
        SeedOp::LiftUpper => lift_upper(&base)?,
        SeedOp::RestrictMinus => restrict_minus(&base)?,
    };
    for (gi, g) in s.family().iter().enumerate() {
        for (hi, h) in s.family().iter().enumerate() {
            let n = s.classes(g, h)?.len();
            ctx.out.push(json!({
                "kind": "seed-classes", "seed": s.name(), "left": gi, "right": hi,
                "left_group": format!("{g:?}"), "right_group": format!("{h:?}"), "classes": n,
            }));
        }
    }
    emit_axioms(ctx, &s)
}

fn plus_elt(f: &FunctorSpec, g: &SubgroupRef, s: &str, ring: Ring) -> Result<PlusElt, Fail> {
    let b = plus_basis(f, g)?;
    Ok(b.from_vector(g, &parse_terms(s, b.len(), ring)?))
}

fn ghost_elt(f: &FunctorSpec, g: &SubgroupRef, s: &str, ring: Ring) -> Result<GhostElt, Fail> {
    let n = GhostElt::zero(f, g)?.len();
    Ok(GhostElt::from_vector(f, g, &parse_terms(s, n, ring)?)?)
}

fn plus_cmd(ctx: &mut Ctx, op: PlusOp, e: &EltArgs) -> Out {
    let ring = ctx.ring;
    match op {
        PlusOp::Eval => {
            let g = the_group(ctx)?;
            let f = functor(ctx, family(ctx, &[&g])?, Selector::All, false)?;
            let b = plus_basis(&f, &g)?;
            for (i, k) in b.keys.iter().enumerate() {
                ctx.out.push(json!({ "kind": "plus-basis", "index": i, "subgroup": k.chi.domain.elements, "char": k.chi.values, "basis": k.basis, "label": k.label() }));
            }
            if let Some(x) = &e.x {
                ctx.out.push(json!({ "kind": "plus", "group": format!("{g:?}"), "elt": plus_json(&plus_elt(&f, &g, x, ring)?) }));
            }
            ctx.out.push(json!({ "kind": "rank", "functor": f.name(), "group": format!("{g:?}"), "rank": b.len() }));
        }
        PlusOp::Act => {
            let (g, h) = (group(need(&e.left, "left")?)?, group(need(&e.right, "right")?)?);
            let f = functor(ctx, family(ctx, &[&g, &h])?, Selector::All, false)?;
            let p = class_at(&g, &h, &ctx.fiber, e.class.ok_or_else(|| Fail::Usage("missing --class".into()))?)?;
            let x = plus_elt(&f, &h, need(&e.x, "x")?, ring)?;
            let y = plus_act(&f, &BurnsideElt::basis(&p, Ring::Z), &x)?;
            ctx.out.push(json!({ "kind": "plus", "class": pair_json(&p), "input": plus_json(&x), "elt": plus_json(&y) }));
        }
        PlusOp::Dot => {
            let g = the_group(ctx)?;
            let f = functor(ctx, family(ctx, &[&g])?, Selector::All, true)?;
            let x = plus_elt(&f, &g, need(&e.x, "x")?, ring)?;
            let y = plus_elt(&f, &g, need(&e.y, "y")?, ring)?;
            ctx.out.push(json!({ "kind": "plus", "group": format!("{g:?}"), "elt": plus_json(&plus_dot(&f, &x, &y)?) }));
        }
        PlusOp::Cross => {
            let (g, h) = (group(need(&e.left, "left")?)?, group(need(&e.right, "right")?)?);
            let f = functor(ctx, family(ctx, &[&g, &h])?, Selector::All, true)?;
            let x = plus_elt(&f, &g, need(&e.x, "x")?, ring)?;
            let y = plus_elt(&f, &h, need(&e.y, "y")?, ring)?;
            let z = plus_cross(&f, &x, &y)?;
            ctx.out.push(json!({ "kind": "plus", "group": format!("{:?}", z.group), "elt": plus_json(&z) }));
        }
    }
    Ok(true)
}

fn upper_cmd(ctx: &mut Ctx, op: UpperOp, e: &EltArgs) -> Out {
    let ring = ctx.ring;
    let (g, h) = (group(need(&e.left, "left")?)?, group(need(&e.right, "right")?)?);
    match op {
        UpperOp::Act => {
            let f = functor(ctx, family(ctx, &[&g, &h])?, Selector::K2Only, false)?;
            let p = class_at(&g, &h, &ctx.fiber, e.class.ok_or_else(|| Fail::Usage("missing --class".into()))?)?;
            let x = ghost_elt(&f, &h, need(&e.x, "x")?, ring)?;
            let y = upper_act(&f, &BurnsideElt::basis(&p, Ring::Z), &x)?;
            ctx.out.push(json!({ "kind": "ghost", "class": pair_json(&p), "input": ghost_json(&x), "elt": ghost_json(&y) }));
        }
        UpperOp::Cross => {
            let f = functor(ctx, family(ctx, &[&g, &h])?, Selector::All, true)?;
            let x = ghost_elt(&f, &g, need(&e.x, "x")?, ring)?;
            let y = ghost_elt(&f, &h, need(&e.y, "y")?, ring)?;
            let z = upper_cross(&f, &x, &y)?;
            ctx.out.push(json!({ "kind": "ghost", "group": format!("{:?}", z.group), "elt": ghost_json(&z) }));
        }
    }
    Ok(true)
}

fn mark_cmd(ctx: &mut Ctx, matrix: bool, x: Option<&str>) -> Out {
    let g = the_group(ctx)?;
    let f = functor(ctx, family(ctx, &[&g])?, Selector::All, false)?;
    if matrix {
        let m = mark_matrix(&f, &g)?;
        let rows = GhostElt::zero(&f, &g)?.labels(&f)?;
        let cols: Vec<String> = plus_basis(&f, &g)?.keys.iter().map(|k| k.label()).collect();
        let data: Vec<Vec<Value>> = m.to_rows().into_iter().map(|r| r.into_iter().map(coeff).collect()).collect();
        ctx.out.push(json!({
            "kind": "mark-matrix", "functor": f.name(), "group": format!("{g:?}"),
            "rows": rows, "cols": cols, "matrix": data,
        }));
    }
    if let Some(x) = x {
        let a = plus_elt(&f, &g, x, ctx.ring)?;
        ctx.out.push(json!({ "kind": "ghost", "input": plus_json(&a), "elt": ghost_json(&mark(&f, &a)?) }));
    }
    if !matrix && x.is_none() {
        return Err(Fail::Usage("mark needs --matrix or --x".into()));
    }
    Ok(true)
}

fn nmap_cmd(ctx: &mut Ctx, x: &str) -> Out {
    let g = the_group(ctx)?;
    let f = functor(ctx, family(ctx, &[&g])?, Selector::All, false)?;
    let a = ghost_elt(&f, &g, x, ctx.ring)?;
    ctx.out.push(json!({ "kind": "plus", "input": ghost_json(&a), "elt": plus_json(&nmap(&f, &a)?) }));
    Ok(true)
}

fn eta_cmd(ctx: &mut Ctx, x: &str) -> Out {
    let g = the_group(ctx)?;
    let f = functor(ctx, family(ctx, &[&g])?, Selector::All, false)?;
    let a = parse_terms(x, f.rank(&g)?, ctx.ring)?;
    ctx.out.push(json!({ "kind": "plus", "group": format!("{g:?}"), "elt": plus_json(&eta(&f, &g, &a)?) }));
    Ok(true)
}

fn verify(ctx: &mut Ctx, suite: &str) -> Out {
    if !SUITES.contains(&suite) {
        return Err(Fail::Usage(format!("unknown suite '{suite}'; expected one of {}", SUITES.join(", "))));
    }
    let o = Options {
        family: ctx.c.family.clone(),
        group: ctx.c.group.clone(),
        fiber: ctx.fiber.clone(),
        selector: ctx.c.selector.clone(),
        samples: ctx.c.samples,
        seed: ctx.c.seed,
    };
    let cases = run_suite(suite, &o)?;
    let mut ok = true;
    for c in cases {
        let mut r = serde_json::to_value(&c).map_err(|e| Fail::Compute(e.to_string()))?;
        r["kind"] = json!("case");
        if !c.pass {
            ok = false;
            r["reproduce"] = json!(reproduce(ctx, suite));
        }
        ctx.out.push(r);
    }
    Ok(ok)
}

fn reproduce(ctx: &Ctx, suite: &str) -> String {
    let mut s = format!("fibrator verify {suite} --fiber {} --seed {}", ctx.fiber.spec(), ctx.c.seed);
    for (flag, v) in [("family", &ctx.c.family), ("group", &ctx.c.group), ("selector", &ctx.c.selector)] {
        if let Some(v) = v {
            s.push_str(&format!(" --{flag} {v}"));
        }
    }
    if let Some(n) = ctx.c.samples {
        s.push_str(&format!(" --samples {n}"));
    }
    s
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn pretty(r: &Value) -> String {
    let Value::Object(m) = r else { return r.to_string() };
    if r["kind"] == "mark-matrix" {
        let rows: Vec<String> = r["rows"].as_array().into_iter().flatten().map(plain).collect();
        let cols: Vec<String> = r["cols"].as_array().into_iter().flatten().map(plain).collect();
        let w = rows.iter().map(|s| s.len()).max().unwrap_or(0);
        let mut out = format!("mark matrix of {} at {}\n", plain(&r["functor"]), plain(&r["group"]));
        for (j, c) in cols.iter().enumerate() {
            out.push_str(&format!("  col {j}: {c}\n"));
        }
        for (i, row) in r["matrix"].as_array().into_iter().flatten().enumerate() {
            let cells: Vec<String> = row.as_array().into_iter().flatten().map(|c| format!("{:>4}", plain(c))).collect();
            out.push_str(&format!("  {:<w$} |{}\n", rows.get(i).map(String::as_str).unwrap_or(""), cells.join("")));
        }
        return out.trim_end().to_string();
    }
    let kind = m.get("kind").map(plain).unwrap_or_default();
    let fields: Vec<String> = m.iter().filter(|(k, _)| *k != "kind").map(|(k, v)| format!("{k}={}", plain(v))).collect();
    format!("{kind:<14} {}", fields.join("  "))
}
