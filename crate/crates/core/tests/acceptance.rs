//! One line per acceptance criterion. Exits non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use arboreal::doubling_prelie::leadsto;
use arboreal::grafting::{graft, Grafting};
use arboreal::oudom_guin::Enveloping;
use arboreal::text::{parse, parse_tree, to_forests};
use arboreal::{
    check_with, ck, closure_violations, enumerate_trees, replay, run_suite, Config, Forest, IdentityId, LinComb,
    MarkedTree, Mutation, Status, Tree,
};

const SUITE_BOUND: usize = 4;
const FAST: Duration = Duration::from_secs(1);
const ENUMERATION_LIMIT: Duration = Duration::from_secs(5);
const SUITE_LIMIT: Duration = Duration::from_secs(600);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn forest(s: &str) -> Forest {
    to_forests(&parse(s).unwrap()).unwrap().basis_elements().next().unwrap().clone()
}

fn tree(s: &str) -> Tree {
    Tree::try_from(parse_tree(s).unwrap()).unwrap()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let got = ck::coproduct(&forest("((())())"));
    let elapsed = start.elapsed();
    let expected: BTreeSet<&str> =
        ["((())()) # 1", "(()) # (())", "(()) () # ()", "() # ((()))", "() # (()())", "() () # (())", "1 # ((())())"]
            .into();
    let terms: BTreeSet<String> = got.iter().map(|(b, _)| b.to_string()).collect();
    let unit = got.iter().all(|(_, c)| *c == 1.into());
    let same = terms.iter().map(String::as_str).collect::<BTreeSet<_>>() == expected;
    outcome(
        same && unit && elapsed < FAST,
        format!("CK coproduct of ((())()) has {} unit terms, matches: {same}, {elapsed:?}", got.len()),
    )
}

fn criterion_2() -> Outcome {
    let got = graft(&LinComb::basis(Tree::leaf()), &LinComb::basis(Tree::ladder(2)));
    let expected = LinComb::basis(Tree::ladder(3)) + LinComb::basis(tree("(()())"));
    outcome(got == expected, format!("• → ℓ2 = {got}"))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let og = Enveloping::new(Grafting::default());
    let a = forest("(()) ()");
    let b = forest("(())");
    let ext = og.extended_product(&a, &b);
    let star = og.star(&a, &b);
    let elapsed = start.elapsed();
    let ext_ok = ext.len() == 4 && ext.iter().all(|(m, c)| *c == 1.into() && m.len() == 1 && m.vertex_count() == 5);
    let star_ok = star.len() == 9 && star.iter().all(|(_, c)| *c == 1.into());
    let subset = ext.basis_elements().all(|m| star.coeff(m) == 1.into());
    outcome(
        ext_ok && star_ok && subset && elapsed < FAST,
        format!("▷ has {} terms, ★ has {} terms, subset: {subset}, {elapsed:?}", ext.len(), star.len()),
    )
}

fn criterion_4() -> Outcome {
    let got = leadsto(&parse_tree("(()*)").unwrap(), &parse_tree("(()()*)").unwrap());
    let prunings: Vec<String> = got.basis_elements().map(|t| t.pruning().to_string()).collect();
    let ok = got.len() == 2 && got.iter().all(|(_, c)| *c == 1.into()) && prunings.iter().all(|p| p == "() ()");
    outcome(ok, format!("{got}; prunings {prunings:?}"))
}

/// Independent count: all parent arrays, deduplicated by a sorted-string canonical form.
fn brute_force_tree_count(n: usize) -> usize {
    fn encode(children: &[Vec<usize>], v: usize) -> String {
        let mut parts: Vec<String> = children[v].iter().map(|&c| encode(children, c)).collect();
        parts.sort();
        format!("({})", parts.concat())
    }
    let mut seen = BTreeSet::new();
    let mut parents = vec![0usize; n];
    loop {
        let mut children = vec![Vec::new(); n];
        for v in 1..n {
            children[parents[v]].push(v);
        }
        seen.insert(encode(&children, 0));
        // next parent array with parents[v] < v
        let mut v = n;
        loop {
            if v <= 1 {
                return seen.len();
            }
            v -= 1;
            parents[v] += 1;
            if parents[v] < v {
                break;
            }
            parents[v] = 0;
        }
    }
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let counts: Vec<usize> = (1..=6).map(|n| enumerate_trees(n).len()).collect();
    let oracle: Vec<usize> = (1..=6).map(brute_force_tree_count).collect();
    let elapsed = start.elapsed();
    let ok = counts == [1, 1, 2, 4, 9, 20] && counts == oracle && elapsed < ENUMERATION_LIMIT;
    outcome(ok, format!("|T_n| n=1..6 = {counts:?}, brute force {oracle:?}, {elapsed:?}"))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let reports = run_suite(SUITE_BOUND).expect("suite within case budget");
    let elapsed = start.elapsed();
    let failing: Vec<String> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| match &r.status {
            Status::Fail(c) => format!("{} on [{}]", r.identity, c.inputs.join(", ")),
            Status::Pass => unreachable!(),
        })
        .collect();
    let passed = reports.len() - failing.len();
    let mut detail = format!("{passed}/{} identities pass at bound {SUITE_BOUND}, {elapsed:?}", reports.len());
    if !failing.is_empty() {
        detail.push_str(&format!("; failing: {}", failing.join("; ")));
    }
    outcome(failing.is_empty() && elapsed < SUITE_LIMIT, detail)
}

fn criterion_7() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for mutation in [Mutation::FlipRule3Sign, Mutation::RootOnlyGrafting] {
        let config = Config { mutation, ..Config::new(SUITE_BOUND) };
        let caught: Vec<String> = [IdentityId::OgHopfCk, IdentityId::PrelieGraft]
            .into_iter()
            .filter_map(|id| {
                let report = check_with(id, &config).expect("within case budget");
                let replays = replay(&report).expect("counterexample parses");
                (!report.passed() && replays).then(|| id.to_string())
            })
            .collect();
        ok &= !caught.is_empty();
        lines.push(format!("{mutation:?} caught by {caught:?}"));
    }
    outcome(ok, lines.join(", "))
}

/// Re-runs the computations of criteria 1 through 6 and inspects every marked output.
fn criterion_8() -> Outcome {
    let before = closure_violations();
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_5();
    let outputs = leadsto(&parse_tree("(()*)").unwrap(), &parse_tree("(()()*)").unwrap());
    let open = outputs.basis_elements().filter(|t: &&MarkedTree| !t.is_closed()).count();
    let suite = run_suite(SUITE_BOUND).expect("suite within case budget");
    let closure = suite.iter().find(|r| r.identity == IdentityId::MarkClosure).expect("catalog entry");
    let violations = closure_violations() - before;
    outcome(
        violations == 0 && open == 0 && closure.passed(),
        format!("{violations} violations counted, MARK_CLOSURE {} cases", closure.cases_checked),
    )
}

fn main() {
    let criteria: [(usize, fn() -> Outcome); 8] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
    ];
    let mut failures = 0;
    for (n, run) in criteria {
        let o = run();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {n}: {}", o.detail);
        failures += usize::from(!o.pass);
    }
    println!("{} of {} criteria pass", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
