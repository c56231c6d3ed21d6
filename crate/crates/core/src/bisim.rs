//! Greatest Σ-bisimulations and quotient models.
//!
//! A Σ-bisimulation relates worlds with equal Σ-labels and is forward and
//! backward confluent for ≼. A strong one is additionally downward
//! confluent in both directions. Both greatest relations are computed by
//! deleting violating pairs from label equality until nothing changes.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::formula::SubformulaSet;
use crate::kripke::{Diagnostics, Model, Relation, World};
use crate::semantics::{labels, SigmaLabel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BisimKind {
    Plain,
    Strong,
}

/// An equivalence relation on worlds, as a list of classes.
///
/// Classes are numbered in order of their lowest world, which is also the
/// class representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    class_of: Vec<usize>,
    classes: Vec<Vec<World>>,
}

impl Partition {
    pub fn identity(n: usize) -> Self {
        Partition {
            class_of: (0..n).collect(),
            classes: (0..n).map(|w| vec![w]).collect(),
        }
    }

    /// Builds a partition from any class assignment.
    pub fn from_assignment(keys: &[usize]) -> Self {
        let mut renumber = BTreeMap::new();
        let mut class_of = Vec::with_capacity(keys.len());
        let mut classes: Vec<Vec<World>> = Vec::new();
        for (w, k) in keys.iter().enumerate() {
            let next = renumber.len();
            let c = *renumber.entry(k).or_insert(next);
            if c == classes.len() {
                classes.push(Vec::new());
            }
            classes[c].push(w);
            class_of.push(c);
        }
        Partition { class_of, classes }
    }

    /// Reads off the classes of an equivalence relation.
    ///
    /// Panics if `r` is not an equivalence.
    pub fn from_equivalence(r: &Relation) -> Self {
        assert!(
            r.is_reflexive() && r.is_symmetric() && r.is_transitive(),
            "relation is not an equivalence"
        );
        let n = r.size();
        let keys: Vec<usize> = (0..n)
            .map(|w| r.successors(w).next().expect("reflexive"))
            .collect();
        Partition::from_assignment(&keys)
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn world_count(&self) -> usize {
        self.class_of.len()
    }

    pub fn class_of(&self, w: World) -> usize {
        self.class_of[w]
    }

    pub fn classes(&self) -> &[Vec<World>] {
        &self.classes
    }

    pub fn representative(&self, class: usize) -> World {
        self.classes[class][0]
    }

    pub fn same(&self, a: World, b: World) -> bool {
        self.class_of[a] == self.class_of[b]
    }

    pub fn is_identity(&self) -> bool {
        self.classes.len() == self.class_of.len()
    }

    pub fn as_relation(&self) -> Relation {
        let n = self.class_of.len();
        Relation::from_pairs(
            n,
            (0..n).flat_map(|a| {
                (0..n)
                    .filter(move |&b| self.same(a, b))
                    .map(move |b| (a, b))
            }),
        )
    }

    /// True if every class of `self` lies inside a class of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        self.classes
            .iter()
            .all(|c| c.iter().all(|&w| other.same(c[0], w)))
    }

    pub fn render(&self, m: &Model) -> String {
        self.classes
            .iter()
            .map(|c| {
                let names: Vec<&str> = c.iter().map(|&w| m.name(w)).collect();
                format!("{{{}}}", names.join(" "))
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Label plus fallibility; two worlds may only be related when these agree.
fn keys(m: &Model, sigma: &SubformulaSet) -> Vec<(SigmaLabel, bool)> {
    labels(m, sigma)
        .into_iter()
        .zip(m.fallible().iter().copied())
        .collect()
}

fn pair_survives(m: &Model, z: &Relation, w: World, v: World, kind: BisimKind) -> bool {
    let up = m.intuit();
    // forth: w ≼ w' needs v ≼ v' with w' Z v'
    let forth = up
        .successors(w)
        .all(|w2| up.successors(v).any(|v2| z.contains(w2, v2)));
    if !forth {
        return false;
    }
    // back: v ≼ v' needs w ≼ w' with w' Z v'
    let back = up
        .successors(v)
        .all(|v2| up.successors(w).any(|w2| z.contains(w2, v2)));
    if !back || kind == BisimKind::Plain {
        return back;
    }
    // Z downward: x ≼ w needs x Z y ≼ v
    let down = up
        .predecessors(w)
        .all(|x| up.predecessors(v).any(|y| z.contains(x, y)));
    // Z⁻¹ downward: x ≼ v needs y Z x with y ≼ w
    let down_inv = up
        .predecessors(v)
        .all(|x| up.predecessors(w).any(|y| z.contains(y, x)));
    down && down_inv
}

/// The greatest (strong) Σ-bisimulation as a relation.
pub fn greatest_relation(m: &Model, sigma: &SubformulaSet, kind: BisimKind) -> Relation {
    let n = m.len();
    let keys = keys(m, sigma);
    let mut z = Relation::empty(n);
    for w in 0..n {
        for v in 0..n {
            if keys[w] == keys[v] {
                z.insert(w, v);
            }
        }
    }
    loop {
        let doomed: Vec<(World, World)> = z
            .pairs()
            .filter(|&(w, v)| !pair_survives(m, &z, w, v, kind))
            .collect();
        if doomed.is_empty() {
            return z;
        }
        for (w, v) in doomed {
            z.remove(w, v);
        }
    }
}

/// `∼_Σ`.
pub fn greatest_bisim(m: &Model, sigma: &SubformulaSet) -> Partition {
    Partition::from_equivalence(&greatest_relation(m, sigma, BisimKind::Plain))
}

/// `≈_Σ`.
pub fn greatest_strong_bisim(m: &Model, sigma: &SubformulaSet) -> Partition {
    Partition::from_equivalence(&greatest_relation(m, sigma, BisimKind::Strong))
}

pub fn greatest(m: &Model, sigma: &SubformulaSet, kind: BisimKind) -> Partition {
    match kind {
        BisimKind::Plain => greatest_bisim(m, sigma),
        BisimKind::Strong => greatest_strong_bisim(m, sigma),
    }
}

/// Checks the defining conditions of a (strong) Σ-bisimulation directly,
/// via the general confluence checker.
pub fn is_bisimulation(m: &Model, sigma: &SubformulaSet, z: &Relation, kind: BisimKind) -> bool {
    use crate::kripke::{is_confluent, Confluence};
    let keys = keys(m, sigma);
    if z.pairs().any(|(a, b)| keys[a] != keys[b]) {
        return false;
    }
    let up = m.intuit();
    let basic =
        is_confluent(up, z, Confluence::Forward) && is_confluent(up, z, Confluence::Backward);
    match kind {
        BisimKind::Plain => basic,
        BisimKind::Strong => {
            basic
                && is_confluent(up, z, Confluence::Downward)
                && is_confluent(up, &z.inverse(), Confluence::Downward)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuotientError {
    #[error("partition covers {got} worlds but the model has {expected}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("worlds {0} and {1} share a class but have different labels")]
    UnequalLabels(String, String),
    #[error("worlds {0} and {1} share a class but differ in fallibility")]
    MixedFallibility(String, String),
    #[error("quotient is not a valid model: {0}")]
    Invalid(Diagnostics),
}

/// `M/∼`. Each class is named after its representative.
///
/// Truth of Σ-formulas is preserved when `M` is backward or downward
/// confluent. Without either, the transitive closure of the lifted `⊑` can
/// create new `⊑`-paths and a `□`-formula may fail in the quotient.
pub fn quotient(
    m: &Model,
    part: &Partition,
    sigma: &SubformulaSet,
) -> Result<Model, QuotientError> {
    if part.world_count() != m.len() {
        return Err(QuotientError::SizeMismatch {
            expected: m.len(),
            got: part.world_count(),
        });
    }
    let labels = labels(m, sigma);
    for class in part.classes() {
        let r = class[0];
        for &w in &class[1..] {
            if labels[w] != labels[r] {
                return Err(QuotientError::UnequalLabels(
                    m.name(r).into(),
                    m.name(w).into(),
                ));
            }
            if m.is_fallible(w) != m.is_fallible(r) {
                return Err(QuotientError::MixedFallibility(
                    m.name(r).into(),
                    m.name(w).into(),
                ));
            }
        }
    }
    let k = part.len();
    let lift = |rel: &Relation| {
        Relation::from_pairs(
            k,
            rel.pairs()
                .map(|(a, b)| (part.class_of(a), part.class_of(b))),
        )
    };
    let intuit = lift(m.intuit()).reflexive_transitive_closure();
    let modal = lift(m.modal()).reflexive_transitive_closure();
    let names = (0..k)
        .map(|c| m.name(part.representative(c)).to_string())
        .collect();
    let mut fallible = vec![false; k];
    for w in m.worlds() {
        if m.is_fallible(w) {
            fallible[part.class_of(w)] = true;
        }
    }
    let valuation = m
        .valuation()
        .iter()
        .map(|(var, set)| {
            let mut lifted = vec![false; k];
            for w in m.worlds().filter(|&w| set[w]) {
                lifted[part.class_of(w)] = true;
            }
            (var.clone(), lifted)
        })
        .collect();
    Model::from_parts(names, fallible, intuit, modal, valuation).map_err(QuotientError::Invalid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, subformulas};
    use crate::kripke::{fig1, Condition, RawModel};
    use crate::semantics::eval;

    fn sig(s: &str) -> SubformulaSet {
        subformulas(&parse(s).unwrap())
    }

    #[test]
    fn single_world_has_one_class() {
        let m = RawModel::new(["w"]).validate().unwrap();
        assert_eq!(greatest_bisim(&m, &sig("[]p -> <>q")).len(), 1);
        assert_eq!(greatest_strong_bisim(&m, &sig("[]p -> <>q")).len(), 1);
    }

    #[test]
    fn fig1_collapses_to_two_classes() {
        let m = fig1();
        let part = greatest_bisim(&m, &sig("p"));
        assert_eq!(part.render(&m), "{x y z t} {w}");
        let q = quotient(&m, &part, &sig("p")).unwrap();
        assert_eq!(q.len(), 2);
        let x = q.world("x").unwrap();
        let w = q.world("w").unwrap();
        assert!(q.modal().contains(x, w));
        assert!(!q.intuit().contains(x, w));
    }

    #[test]
    fn isomorphic_copies_merge() {
        let m = RawModel::new(["a", "b"])
            .val("p", [0, 1])
            .validate()
            .unwrap();
        assert_eq!(greatest_bisim(&m, &sig("p")).len(), 1);
    }

    #[test]
    fn identity_partition_quotient_is_isomorphic() {
        let m = fig1();
        let q = quotient(&m, &Partition::identity(m.len()), &sig("p")).unwrap();
        assert_eq!(q, m);
    }

    #[test]
    fn quotient_rejects_mixed_labels() {
        let m = fig1();
        let all = Partition::from_assignment(&[0, 0, 0, 0, 0]);
        assert!(matches!(
            quotient(&m, &all, &sig("p")),
            Err(QuotientError::UnequalLabels(..))
        ));
        assert!(matches!(
            quotient(&m, &Partition::identity(3), &sig("p")),
            Err(QuotientError::SizeMismatch { .. })
        ));
    }

    #[test]
    fn fallible_and_infallible_worlds_stay_apart() {
        // a is fallible, b satisfies p but sees a non-p world c through ⊑
        let m = RawModel::new(["a", "b", "c"])
            .fallible_world(0)
            .modal_edge(1, 2)
            .val("p", [0, 1])
            .validate()
            .unwrap();
        let part = greatest_bisim(&m, &sig("p"));
        assert!(!part.same(0, 1));
        quotient(&m, &part, &sig("p")).unwrap();
    }

    #[test]
    fn fixpoint_result_is_a_bisimulation() {
        let m = fig1();
        for kind in [BisimKind::Plain, BisimKind::Strong] {
            let z = greatest_relation(&m, &sig("[]p -> [][]p"), kind);
            assert!(is_bisimulation(&m, &sig("[]p -> [][]p"), &z, kind));
        }
    }

    #[test]
    fn strong_refines_plain() {
        let m = fig1();
        let s = sig("<>p");
        assert!(greatest_strong_bisim(&m, &s).refines(&greatest_bisim(&m, &s)));
    }

    #[test]
    fn box_can_fail_on_quotients_of_unconfluent_models() {
        let m = Model::from_text(
            "worlds: w0 w1 w2 w3 w4 w5 w6\n\
             fallible:\n\
             intuit: w2<=w0 w4<=w3 w5<=w0 w6<=w0\n\
             modal: w0<=w1 w0<=w4 w0<=w5 w0<=w6 w2<=w1 w2<=w4 w3<=w1 w3<=w4 w3<=w6 w4<=w1 w6<=w1 w6<=w4\n\
             val q: w0 w1 w3 w4 w6\n",
        )
        .unwrap();
        assert!(!m.holds(Condition::Backward) && !m.holds(Condition::Downward));
        let sigma = sig("[]<>q");
        let part = greatest_bisim(&m, &sigma);
        assert_eq!(part.render(&m), "{w0 w6} {w1 w3 w4} {w2} {w5}");
        let q = quotient(&m, &part, &sigma).unwrap();
        let w1 = m.world("w1").unwrap();
        let f = parse("[]<>q").unwrap();
        assert!(eval(&m, w1, &f).unwrap());
        // w3 ⊑ w6 ∼ w0 ⊑ w5 becomes a quotient path from [w1] to [w5]
        assert!(!eval(&q, part.class_of(w1), &f).unwrap());
    }

    #[test]
    fn partition_from_assignment_orders_classes_by_lowest_world() {
        let p = Partition::from_assignment(&[7, 3, 7, 3, 1]);
        assert_eq!(p.classes(), &[vec![0, 2], vec![1, 3], vec![4]]);
        assert_eq!(p.representative(1), 1);
        assert!(Partition::identity(5).refines(&p));
        assert!(!p.refines(&Partition::identity(5)));
    }
}
