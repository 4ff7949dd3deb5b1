//! Library results against brute force over parent arrays and vertex subsets.
//! The oracles keep their own representation and canonical form (children
//! sorted as strings) and share nothing with the library but its text output.

use std::collections::{BTreeMap, BTreeSet};

use arboreal::doubling_prelie::leadsto;
use arboreal::grafting::graft_sum;
use arboreal::{ck, doubling, enumerate_marked_trees, enumerate_trees, Forest, MarkedForest, Tree};

/// Vertex 0 is the root; `parent[v] < v` is not assumed.
#[derive(Clone, Debug)]
struct Raw {
    parent: Vec<Option<usize>>,
    marked: Vec<bool>,
}

impl Raw {
    fn parse(text: &str) -> Raw {
        let mut raw = Raw { parent: Vec::new(), marked: Vec::new() };
        let mut stack: Vec<usize> = Vec::new();
        let bytes = text.as_bytes();
        let mut last = None;
        for &b in bytes {
            match b {
                b'(' => {
                    let v = raw.parent.len();
                    raw.parent.push(stack.last().copied());
                    raw.marked.push(false);
                    stack.push(v);
                }
                b')' => last = stack.pop(),
                b'*' => raw.marked[last.expect("mark after a vertex")] = true,
                _ => panic!("unexpected byte in {text}"),
            }
        }
        raw
    }

    fn children(&self, v: usize) -> Vec<usize> {
        (0..self.parent.len()).filter(|&c| self.parent[c] == Some(v)).collect()
    }

    fn encode_from(&self, v: usize, keep: &dyn Fn(usize) -> bool) -> String {
        let mut parts: Vec<String> =
            self.children(v).into_iter().filter(|&c| keep(c)).map(|c| self.encode_from(c, keep)).collect();
        parts.sort();
        format!("({}){}", parts.concat(), if self.marked[v] { "*" } else { "" })
    }

    fn encode(&self) -> String {
        self.encode_from(0, &|_| true)
    }
}

/// Oracle canonical text of a forest: component encodings, sorted, space separated.
fn forest_key(parts: Vec<String>) -> String {
    let mut parts = parts;
    parts.sort();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join(" ")
    }
}

fn recanonicalize_forest(text: &str) -> String {
    if text == "1" {
        return text.to_string();
    }
    forest_key(text.split(' ').map(|t| Raw::parse(t).encode()).collect())
}

fn recanonicalize_tensor(text: &str) -> (String, String) {
    let (a, b) = text.split_once(" # ").expect("tensor");
    (recanonicalize_forest(a), recanonicalize_forest(b))
}

/// `Σ over vertex subsets W closed under descendants: P_W ⊗ R_W`.
fn brute_cuts(raw: &Raw, keep_root: bool) -> BTreeMap<(String, String), usize> {
    let n = raw.parent.len();
    let mut out = BTreeMap::new();
    for mask in 0u32..(1 << n) {
        let taken = |v: usize| mask & (1 << v) != 0;
        if keep_root && taken(0) {
            continue;
        }
        if (0..n).any(|v| taken(v) && raw.children(v).into_iter().any(|c| !taken(c))) {
            continue;
        }
        let pieces: Vec<String> = (0..n)
            .filter(|&v| taken(v) && raw.parent[v].is_none_or(|p| !taken(p)))
            .map(|v| raw.encode_from(v, &|c| taken(c)))
            .collect();
        let rest = if taken(0) { Vec::new() } else { vec![raw.encode_from(0, &|c| !taken(c))] };
        *out.entry((forest_key(pieces), forest_key(rest))).or_insert(0) += 1;
    }
    out
}

fn library_terms(text: String) -> BTreeMap<(String, String), usize> {
    let mut out = BTreeMap::new();
    if text == "0" {
        return out;
    }
    for term in text.split(" + ") {
        let (c, body) = match term.split_once(' ') {
            // a leading `1` may be the unit forest rather than a coefficient
            Some((c, body)) if c.parse::<usize>().is_ok() && !body.starts_with('#') => (c.parse().unwrap(), body),
            _ => (1, term),
        };
        *out.entry(recanonicalize_tensor(body)).or_insert(0) += c;
    }
    out
}

fn parent_array_trees(n: usize) -> BTreeSet<String> {
    let mut seen = BTreeSet::new();
    let mut parents = vec![0usize; n];
    loop {
        let raw = Raw { parent: (0..n).map(|v| (v > 0).then(|| parents[v])).collect(), marked: vec![false; n] };
        seen.insert(raw.encode());
        let mut v = n;
        loop {
            if v <= 1 {
                return seen;
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

#[test]
fn enumeration_matches_parent_arrays_through_eight() {
    for n in 1..=8 {
        let library: BTreeSet<String> =
            enumerate_trees(n).iter().map(|t| Raw::parse(&t.to_string()).encode()).collect();
        assert_eq!(library.len(), enumerate_trees(n).len(), "duplicates at n={n}");
        assert_eq!(library, parent_array_trees(n), "n={n}");
    }
    let counts: Vec<usize> = (1..=8).map(|n| enumerate_trees(n).len()).collect();
    assert_eq!(counts, [1, 1, 2, 4, 9, 20, 48, 115]);
}

#[test]
fn marked_enumeration_matches_closed_subsets() {
    for n in 1..=6 {
        let mut oracle = BTreeSet::new();
        for t in parent_array_trees(n) {
            let raw = Raw::parse(&t);
            for mask in 0u32..(1 << n) {
                let marked: Vec<bool> = (0..n).map(|v| mask & (1 << v) != 0).collect();
                if (0..n).any(|v| marked[v] && raw.children(v).into_iter().any(|c| !marked[c])) {
                    continue;
                }
                oracle.insert(Raw { parent: raw.parent.clone(), marked }.encode());
            }
        }
        let library: BTreeSet<String> =
            enumerate_marked_trees(n).iter().map(|t| Raw::parse(&t.to_string()).encode()).collect();
        assert_eq!(library, oracle, "n={n}");
    }
}

#[test]
fn ck_coproduct_matches_vertex_subsets() {
    for n in 1..=7 {
        for t in enumerate_trees(n) {
            let raw = Raw::parse(&t.to_string());
            let expected = brute_cuts(&raw, false);
            let got = library_terms(ck::coproduct(&Forest::single(t.clone())).to_string());
            assert_eq!(got, expected, "{t}");
            let coaction = library_terms(ck::coaction(&Forest::single(t.clone())).to_string());
            assert_eq!(coaction, brute_cuts(&raw, true), "{t}");
        }
    }
}

#[test]
fn doubling_coproduct_matches_marked_subsets() {
    for n in 1..=6 {
        for p in enumerate_marked_trees(n) {
            let raw = Raw::parse(&p.to_string());
            // left leg: whole shape with the taken set as marks; right leg: the rest
            let mut expected = BTreeMap::new();
            for mask in 0u32..(1 << n) {
                let taken = |v: usize| mask & (1 << v) != 0;
                if (0..n).any(|v| taken(v) && (!raw.marked[v] || raw.children(v).into_iter().any(|c| !taken(c)))) {
                    continue;
                }
                let left = Raw { parent: raw.parent.clone(), marked: (0..n).map(taken).collect() }.encode();
                let right = if taken(0) { "1".to_string() } else { raw.encode_from(0, &|c| !taken(c)) };
                *expected.entry((left, right)).or_insert(0) += 1;
            }
            let got = library_terms(doubling::coproduct(&MarkedForest::single(p.clone())).to_string());
            assert_eq!(got, expected, "{p}");
        }
    }
}

#[test]
fn grafting_matches_attach_at_each_vertex() {
    for a in (1..=3).flat_map(enumerate_trees) {
        for b in (1..=4).flat_map(enumerate_trees) {
            let (ra, rb) = (Raw::parse(&a.to_string()), Raw::parse(&b.to_string()));
            let mut expected: BTreeMap<String, usize> = BTreeMap::new();
            for v in 0..rb.parent.len() {
                let offset = rb.parent.len();
                let mut parent = rb.parent.clone();
                parent.extend(ra.parent.iter().map(|p| Some(p.map_or(v, |p| p + offset))));
                let joined = Raw { marked: vec![false; parent.len()], parent };
                *expected.entry(joined.encode()).or_insert(0) += 1;
            }
            let mut got = BTreeMap::new();
            for (t, c) in graft_sum(&a, &b).iter() {
                *got.entry(Raw::parse(&t.to_string()).encode()).or_insert(0) += usize::try_from(c.clone()).unwrap();
            }
            assert_eq!(got, expected, "{a} -> {b}");
        }
    }
}

#[test]
fn leadsto_matches_attach_at_unmarked_vertices() {
    for p in (1..=3).flat_map(enumerate_marked_trees) {
        for q in (1..=3).flat_map(enumerate_marked_trees) {
            let (rp, rq) = (Raw::parse(&p.to_string()), Raw::parse(&q.to_string()));
            let mut expected: BTreeMap<String, usize> = BTreeMap::new();
            for v in (0..rq.parent.len()).filter(|&v| !rq.marked[v]) {
                let offset = rq.parent.len();
                let mut parent = rq.parent.clone();
                parent.extend(rp.parent.iter().map(|x| Some(x.map_or(v, |x| x + offset))));
                let marked = rq.marked.iter().chain(&rp.marked).copied().collect();
                *expected.entry(Raw { parent, marked }.encode()).or_insert(0) += 1;
            }
            let mut got = BTreeMap::new();
            for (t, c) in leadsto(&p, &q).iter() {
                *got.entry(Raw::parse(&t.to_string()).encode()).or_insert(0) += usize::try_from(c.clone()).unwrap();
            }
            assert_eq!(got, expected, "{p} ⤳ {q}");
        }
    }
}

#[test]
fn tree_text_is_already_canonical_up_to_child_order() {
    // the library's order differs from the oracle's, but both are canonical:
    // distinct library strings never collapse under the oracle encoding
    let all: Vec<Tree> = (1..=7).flat_map(enumerate_trees).collect();
    let keys: BTreeSet<String> = all.iter().map(|t| Raw::parse(&t.to_string()).encode()).collect();
    assert_eq!(keys.len(), all.len());
}
