//! Acceptance criteria. Each test prints one PASS/FAIL line (visible with
//! `--nocapture`) and fails when its criterion does not hold.

use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use fibrator::verify::{run_suite, Case, Options};

fn z2() -> Options {
    Options::default()
}

fn run(suite: &str, o: &Options) -> (Vec<Case>, Duration) {
    let t = Instant::now();
    let cases = run_suite(suite, o).unwrap_or_else(|e| panic!("{suite}: {e}"));
    (cases, t.elapsed())
}

/// The mackey suite over {C2, C4, C2×C2, S3}, shared by criteria 1 to 3.
fn mackey() -> &'static (Vec<Case>, Duration) {
    static RUN: OnceLock<(Vec<Case>, Duration)> = OnceLock::new();
    RUN.get_or_init(|| run("mackey", &Options { family: Some("C2,C4,C2xC2,S3".into()), samples: Some(50), ..z2() }))
}

fn case<'a>(cases: &'a [Case], name: &str) -> &'a Case {
    cases.iter().find(|c| c.case == name).unwrap_or_else(|| panic!("no case '{name}'"))
}

/// Prints the criterion line and collects the reasons it fails.
struct Criterion {
    n: u32,
    title: &'static str,
    problems: Vec<String>,
    notes: Vec<String>,
}

impl Criterion {
    fn new(n: u32, title: &'static str) -> Self {
        Criterion { n, title, problems: Vec::new(), notes: Vec::new() }
    }

    fn require(&mut self, c: &Case, min_checked: usize) {
        if !c.pass {
            self.problems.push(format!("{}: {}", c.case, c.witness.as_deref().unwrap_or("failed")));
        } else if c.checked < min_checked {
            self.problems.push(format!("{}: only {} checks, want {min_checked}", c.case, c.checked));
        }
        self.notes.push(format!("{}={}", c.case, c.checked));
    }

    /// Requires every case to pass, noting only those not already noted.
    fn all(&mut self, cases: &[Case]) {
        for c in cases {
            if !self.notes.iter().any(|n| n.starts_with(&format!("{}=", c.case))) {
                self.require(c, 1);
            } else if !c.pass {
                self.problems.push(format!("{}: {}", c.case, c.witness.as_deref().unwrap_or("failed")));
            }
        }
    }

    fn within(&mut self, what: &str, took: Duration, limit: Duration) {
        if took > limit {
            self.problems.push(format!("{what} took {took:?}, limit {limit:?}"));
        }
        self.notes.push(format!("{what} {:.1}s", took.as_secs_f64()));
    }

    fn finish(self) {
        let verdict = if self.problems.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {verdict}: {} [{}]", self.n, self.title, self.notes.join(", "));
        assert!(self.problems.is_empty(), "criterion {} failed: {}", self.n, self.problems.join("; "));
    }
}

#[test]
fn criterion_01_mackey_matches_oracle() {
    let mut k = Criterion::new(1, "Mackey product equals the orbit oracle");
    let (cases, took) = mackey();
    k.require(case(cases, "exhaustive fiber 2"), 1);
    k.require(case(cases, "sampled fiber 4"), 50);
    k.within("suite", *took, Duration::from_secs(120));
    k.finish();
}

#[test]
fn criterion_02_category_laws() {
    let mut k = Criterion::new(2, "identity and associativity of the Mackey product");
    k.require(case(&mackey().0, "category laws"), 200);
    k.finish();
}

#[test]
fn criterion_03_butterfly() {
    let mut k = Criterion::new(3, "butterfly recomposition over (S3,S3) and (D8,C2xC2)");
    k.require(case(&mackey().0, "butterfly"), 1);
    k.finish();
}

#[test]
fn criterion_04_axioms() {
    let mut k = Criterion::new(4, "seed axioms, lifts, idempotence, minus then plus");
    let o = Options { family: Some("S3-closure".into()), ..z2() };
    let (cases, _) = run("axioms", &o);
    for name in ["all minus then plus", "k2only minus then plus", "all lift-plus idempotent", "all lift-upper idempotent"] {
        case(&cases, name);
    }
    k.all(&cases);
    k.finish();
}

#[test]
fn criterion_05_plus_functoriality() {
    let mut k = Criterion::new(5, "F₊ composition and the four closed forms");
    let (cases, _) = run("plus-functorial", &Options { samples: Some(100), ..z2() });
    k.require(case(&cases, "trivial composition"), 100);
    k.require(case(&cases, "burnside composition"), 100);
    for form in ["restriction", "induction", "inflation", "deflation"] {
        k.require(case(&cases, &format!("{form} closed form")), 1);
    }
    k.all(&cases);
    k.finish();
}

#[test]
fn criterion_06_upper_functoriality() {
    let mut k = Criterion::new(6, "F⁺ composition on the k2 seed");
    let (cases, _) = run("upper-functorial", &Options { samples: Some(100), ..z2() });
    k.require(case(&cases, "burnside composition on k2 seed"), 100);
    k.all(&cases);
    k.finish();
}

#[test]
fn criterion_07_mark_square() {
    let mut k = Criterion::new(7, "mark commutes with the actions");
    let (cases, _) = run("mark-square", &Options { samples: Some(50), ..z2() });
    // 50 classes times 20 inputs each.
    k.require(case(&cases, "trivial square"), 1000);
    k.require(case(&cases, "burnside square"), 1000);
    k.all(&cases);
    k.finish();
}

#[test]
fn criterion_08_mobius_inverse() {
    let mut k = Criterion::new(8, "n∘m = |G|·Id and m∘n = |G|·Id");
    let (cases, took) = run("mobius-inverse", &z2());
    for g in ["C2", "C3", "C2xC2", "S3"] {
        for f in ["trivial", "burnside"] {
            for what in ["n∘m", "m∘n", "rational inverse"] {
                k.require(case(&cases, &format!("{f} {g} {what}")), 1);
            }
        }
    }
    k.within("suite", took, Duration::from_secs(300));
    k.finish();
}

#[test]
fn criterion_09_monomial() {
    let mut k = Criterion::new(9, "F₊ of the trivial functor is the fibered Burnside functor");
    let (cases, _) = run("monomial", &z2());
    for (g, r) in [("C2", 3), ("C2xC2", 11), ("S3", 6)] {
        k.require(case(&cases, &format!("{g} rank {r}")), 1);
        k.require(case(&cases, &format!("{g} intertwining")), 1);
    }
    k.finish();
}

#[test]
fn criterion_10_green() {
    let mut k = Criterion::new(10, "Green structure, lifts, mark multiplicativity");
    let (cases, _) = run("green", &Options { samples: Some(50), ..z2() });
    k.require(case(&cases, "mark multiplicative for cross"), 50);
    k.all(&cases);
    k.finish();
}

#[test]
fn criterion_11_adjunction() {
    let mut k = Criterion::new(11, "η naturality and the extension of ψ");
    let (cases, _) = run("adjunction", &Options { samples: Some(20), ..z2() });
    for f in ["trivial", "burnside"] {
        k.require(case(&cases, &format!("{f} unit square")), 1);
        k.require(case(&cases, &format!("{f} extension is natural")), 20);
        let r = cases.iter().find(|c| c.case.starts_with(&format!("{f} extension restricts"))).expect("restriction case");
        k.require(r, 20);
    }
    k.all(&cases);
    k.finish();
}

#[test]
fn criterion_12_cli_determinism() {
    let mut k = Criterion::new(12, "CLI output is byte-identical across runs");
    let exe = env!("CARGO_BIN_EXE_fibrator");
    let commands: &[&[&str]] = &[
        &["groups"],
        &["pairs", "--left", "S3", "--right", "S3", "--fiber", "2", "--classes"],
        &["pairs", "--left", "C2", "--right", "C2"],
        &["product", "--left", "C2", "--middle", "C2", "--right", "C2", "--u", "3", "--v", "2"],
        &["butterfly", "--left", "S3", "--right", "S3", "--class", "10"],
        &["axioms", "--family", "S3-closure", "--selector", "all"],
        &["seed", "lift-plus", "--family", "C2-closure", "--selector", "k2only"],
        &["seed", "lift-upper", "--family", "C2-closure", "--selector", "k2only"],
        &["seed", "restrict-minus", "--family", "C2-closure"],
        &["plus", "eval", "--group", "S3", "--functor", "burnside"],
        &["plus", "act", "--left", "S3", "--right", "C2", "--class", "5", "--x", "0=2,1=-1"],
        &["plus", "dot", "--group", "C2", "--x", "2", "--y", "2"],
        &["plus", "cross", "--left", "C2", "--right", "C2", "--x", "1", "--y", "2", "--functor", "burnside"],
        &["upper", "act", "--left", "C2", "--right", "C1", "--class", "0", "--x", "0"],
        &["upper", "cross", "--left", "C2", "--right", "C2", "--x", "0", "--y", "1"],
        &["mark", "--group", "C2", "--fiber", "2", "--functor", "trivial", "--matrix"],
        &["mark", "--group", "S3", "--functor", "burnside", "--matrix", "--pretty"],
        &["nmap", "--group", "C2", "--x", "0"],
        &["eta", "--group", "C2", "--x", "0", "--functor", "burnside"],
        &["verify", "monomial", "--seed", "7"],
        &["verify", "mark-square", "--samples", "5", "--seed", "3"],
    ];
    for args in commands {
        let a = Command::new(exe).args(*args).output().expect("run fibrator");
        let b = Command::new(exe).args(*args).output().expect("run fibrator");
        let line = args.join(" ");
        if a.status.code() != Some(0) {
            k.problems.push(format!("`{line}` exited {:?}: {}", a.status.code(), String::from_utf8_lossy(&a.stderr)));
        }
        if a.stdout.is_empty() || a.stdout != b.stdout || a.status.code() != b.status.code() {
            k.problems.push(format!("`{line}` differs between runs"));
        }
    }
    k.notes.push(format!("{} commands", commands.len()));
    k.finish();
}
