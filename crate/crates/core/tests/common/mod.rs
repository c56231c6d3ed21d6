#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use cs4kit::formula::Formula;
use cs4kit::hilbert::{parse_proof, Proof};
use cs4kit::kripke::{Logic, Model, Relation};

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("data")
        .join(name)
}

pub fn load_model(name: &str) -> Model {
    Model::from_text(&std::fs::read_to_string(data(name)).unwrap()).unwrap()
}

pub struct SampleProof {
    pub name: &'static str,
    pub logic: Logic,
    pub proof: Proof,
}

/// Bundled proofs; the first comment line names the logic.
pub fn sample_proofs() -> Vec<SampleProof> {
    ["nec_chain", "modal_instances", "identity", "fs_is4"]
        .into_iter()
        .map(|name| {
            let text = std::fs::read_to_string(data(&format!("proofs/{name}.prf"))).unwrap();
            let logic = text
                .lines()
                .next()
                .and_then(|l| l.strip_prefix('#'))
                .unwrap()
                .trim()
                .parse()
                .unwrap();
            SampleProof {
                name,
                logic,
                proof: parse_proof(&text).unwrap(),
            }
        })
        .collect()
}

/// Paths (child indices from the root) of nodes in `f` whose single-node
/// mutation cannot leave `f` an instance of `pattern`: nodes of the schema
/// skeleton, and nodes inside one occurrence of a metavariable that occurs
/// more than once.
pub fn mutation_sites(pattern: &Formula, f: &Formula) -> Vec<Vec<usize>> {
    let mut counts = BTreeMap::new();
    count_vars(pattern, &mut counts);
    let mut seen = BTreeMap::new();
    let mut out = Vec::new();
    walk(pattern, f, &mut Vec::new(), &counts, &mut seen, &mut out);
    out
}

fn count_vars(p: &Formula, counts: &mut BTreeMap<String, usize>) {
    match p {
        Formula::Var(v) => *counts.entry(v.clone()).or_insert(0) += 1,
        _ => p.children().into_iter().for_each(|c| count_vars(c, counts)),
    }
}

fn walk(
    p: &Formula,
    f: &Formula,
    path: &mut Vec<usize>,
    counts: &BTreeMap<String, usize>,
    seen: &mut BTreeMap<String, bool>,
    out: &mut Vec<Vec<usize>>,
) {
    if let Formula::Var(m) = p {
        // only the first occurrence is mutable, so the others stay as witnesses
        if counts[m] >= 2 && !seen.contains_key(m) {
            seen.insert(m.clone(), true);
            all_nodes(f, path, out);
        }
        return;
    }
    out.push(path.clone());
    for (i, (pc, fc)) in p.children().into_iter().zip(f.children()).enumerate() {
        path.push(i);
        walk(pc, fc, path, counts, seen, out);
        path.pop();
    }
}

fn all_nodes(f: &Formula, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    out.push(path.clone());
    for (i, c) in f.children().into_iter().enumerate() {
        path.push(i);
        all_nodes(c, path, out);
        path.pop();
    }
}

/// Changes the node at `path` to a different one of the same arity.
pub fn mutate_at(f: &Formula, path: &[usize]) -> Formula {
    use Formula::*;
    let Some((&i, rest)) = path.split_first() else {
        return match f {
            Var(v) => Var(format!("{v}x")),
            Falsum => Var("m".into()),
            And(a, b) => Or(a.clone(), b.clone()),
            Or(a, b) => Implies(a.clone(), b.clone()),
            Implies(a, b) => And(a.clone(), b.clone()),
            Dia(a) => Box(a.clone()),
            Box(a) => Dia(a.clone()),
        };
    };
    let sub = |c: &Formula| std::boxed::Box::new(mutate_at(c, rest));
    match (f, i) {
        (And(a, b), 0) => And(sub(a), b.clone()),
        (And(a, b), _) => And(a.clone(), sub(b)),
        (Or(a, b), 0) => Or(sub(a), b.clone()),
        (Or(a, b), _) => Or(a.clone(), sub(b)),
        (Implies(a, b), 0) => Implies(sub(a), b.clone()),
        (Implies(a, b), _) => Implies(a.clone(), sub(b)),
        (Dia(a), _) => Dia(sub(a)),
        (Box(a), _) => Box(sub(a)),
        (Var(_) | Falsum, _) => panic!("path leads below a leaf"),
    }
}

/// All partitions of `0..n` as equivalence relations.
pub fn all_equivalences(n: usize) -> Vec<Relation> {
    // restricted growth strings
    fn go(i: usize, rgs: &mut Vec<usize>, max: usize, n: usize, out: &mut Vec<Relation>) {
        if i == n {
            let mut r = Relation::empty(n);
            for a in 0..n {
                for b in 0..n {
                    if rgs[a] == rgs[b] {
                        r.insert(a, b);
                    }
                }
            }
            out.push(r);
            return;
        }
        for c in 0..=max + 1 {
            rgs.push(c);
            go(i + 1, rgs, max.max(c), n, out);
            rgs.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut rgs = vec![0];
    go(1, &mut rgs, 0, n, &mut out);
    out
}
