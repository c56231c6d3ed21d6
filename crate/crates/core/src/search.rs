//! Random models, bounded countermodel search and the soundness harness.
//!
//! Everything here is deterministic in its seed. Parallel evaluation only
//! ever returns the lowest-indexed hit, so thread scheduling cannot change
//! an answer.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::formula::{subformulas, Formula};
use crate::hilbert::{axioms, AxiomSchema, Substitution};
use crate::kripke::{confluence_violation, Confluence, Logic, Model, Relation, World};
use crate::semantics::{falsifier, model_valid};

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Default variable names: `p q r s t u`, then `v6 v7 ...`.
pub fn var_name(i: usize) -> String {
    const NAMES: [&str; 6] = ["p", "q", "r", "s", "t", "u"];
    NAMES
        .get(i)
        .map(|s| s.to_string())
        .unwrap_or_else(|| format!("v{i}"))
}

/// A random formula of depth at most `depth` over the first `vars` variables.
pub fn random_formula(rng: &mut impl Rng, depth: usize, vars: usize) -> Formula {
    let leaf = |rng: &mut dyn rand::RngCore| {
        if rng.gen_ratio(1, 8) {
            Formula::Falsum
        } else {
            Formula::var(var_name(rng.gen_range(0..vars.max(1))))
        }
    };
    if depth == 0 || rng.gen_ratio(1, 3) {
        return leaf(rng);
    }
    let d = depth - 1;
    match rng.gen_range(0..5) {
        0 => Formula::and(random_formula(rng, d, vars), random_formula(rng, d, vars)),
        1 => Formula::or(random_formula(rng, d, vars), random_formula(rng, d, vars)),
        2 => Formula::implies(random_formula(rng, d, vars), random_formula(rng, d, vars)),
        3 => Formula::dia(random_formula(rng, d, vars)),
        _ => Formula::boxed(random_formula(rng, d, vars)),
    }
}

/// Substitutes random formulas for every metavariable of `schema`.
pub fn random_instance(
    rng: &mut impl Rng,
    schema: &AxiomSchema,
    depth: usize,
    vars: usize,
) -> Formula {
    let subst: Substitution = schema
        .metavariables()
        .into_iter()
        .map(|m| (m, random_formula(rng, depth, vars)))
        .collect();
    schema.instantiate(&subst)
}

/// Frame conditions the modal relation is repaired towards.
fn required_confluences(logic: Option<Logic>) -> &'static [Confluence] {
    match logic {
        None => &[],
        Some(Logic::CS4) => &[Confluence::Backward],
        Some(Logic::IS4) | Some(Logic::GS4) => &[Confluence::Backward, Confluence::Forward],
        Some(Logic::S4I) => &[Confluence::Forward, Confluence::Downward],
    }
}

fn allows_fallible(logic: Option<Logic>) -> bool {
    matches!(logic, None | Some(Logic::CS4))
}

/// Parameters for [`random_model`]. `logic: None` asks for an arbitrary
/// bi-intuitionistic model, fallible worlds included.
#[derive(Clone, Debug, PartialEq)]
pub struct GenParams {
    pub size: usize,
    pub edge_density: f64,
    pub variable_count: usize,
    pub logic: Option<Logic>,
    pub seed: u64,
}

impl GenParams {
    pub fn new(size: usize, logic: Option<Logic>, seed: u64) -> Self {
        GenParams {
            size,
            edge_density: 0.3,
            variable_count: 2,
            logic,
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("model size must be at least 1")]
    EmptyModel,
    #[error("edge density must lie in [0, 1]")]
    BadDensity,
    #[error("no model of the requested class after {0} attempts")]
    RepairOverflow(usize),
}

const GEN_RETRIES: usize = 16;

/// Adds ⊑-edges until every required confluence holds. Every repair adds a
/// pair that was missing, and the full relation satisfies all three
/// conditions, so this terminates.
fn repair_modal(intuit: &Relation, modal: &mut Relation, required: &[Confluence]) {
    loop {
        let mut changed = false;
        for &kind in required {
            if let Some((a, b, c)) = confluence_violation(intuit, modal, kind) {
                let fresh = match kind {
                    // w ≼ w', w ⊑ v: make w' ⊑ v
                    Confluence::Forward => modal.insert(b, c),
                    // w ⊑ v ≼ v': make w ⊑ v'
                    Confluence::Backward => modal.insert(a, c),
                    // w ≼ v ⊑ v': make w ⊑ v'
                    Confluence::Downward => modal.insert(a, c),
                };
                debug_assert!(fresh);
                *modal = modal.transitive_closure();
                changed = true;
            }
        }
        if !changed {
            return;
        }
    }
}

/// Disjoint union of ≼-chains of clusters.
fn chains_of_clusters(rng: &mut ChaCha8Rng, n: usize) -> Relation {
    let mut order: Vec<World> = (0..n).collect();
    order.shuffle(rng);
    let mut chains: Vec<Vec<Vec<World>>> = Vec::new();
    for w in order {
        if chains.is_empty() || rng.gen_ratio(1, 4) {
            chains.push(vec![vec![w]]);
            continue;
        }
        let c = rng.gen_range(0..chains.len());
        if rng.gen_ratio(3, 10) {
            chains[c].last_mut().expect("non-empty chain").push(w);
        } else {
            chains[c].push(vec![w]);
        }
    }
    let mut r = Relation::identity(n);
    for chain in &chains {
        for (i, lower) in chain.iter().enumerate() {
            for upper in &chain[i..] {
                for &a in lower {
                    for &b in upper {
                        r.insert(a, b);
                    }
                }
            }
        }
    }
    r
}

/// A random preorder: forward edges along a shuffled order, with rare back
/// edges so that proper clusters still occur.
fn random_relation(rng: &mut ChaCha8Rng, n: usize, density: f64) -> Relation {
    let mut order: Vec<World> = (0..n).collect();
    order.shuffle(rng);
    let mut r = Relation::identity(n);
    for i in 0..n {
        for j in 0..n {
            let p = if i < j { density } else { density / 8.0 };
            if i != j && rng.gen_bool(p) {
                r.insert(order[i], order[j]);
            }
        }
    }
    r.transitive_closure()
}

fn attempt(gp: &GenParams, rng: &mut ChaCha8Rng) -> Option<Model> {
    let n = gp.size;
    let intuit = if gp.logic == Some(Logic::GS4) {
        chains_of_clusters(rng, n)
    } else {
        random_relation(rng, n, gp.edge_density)
    };
    let mut modal = random_relation(rng, n, gp.edge_density);
    repair_modal(&intuit, &mut modal, required_confluences(gp.logic));

    let mut fallible = vec![false; n];
    if allows_fallible(gp.logic) {
        for f in fallible.iter_mut() {
            *f = rng.gen_ratio(1, 16);
        }
        let reach = intuit.union(&modal).transitive_closure();
        for w in 0..n {
            if fallible[w] {
                for v in reach.successors(w).collect::<Vec<_>>() {
                    fallible[v] = true;
                }
            }
        }
    }
    let mut valuation = BTreeMap::new();
    for i in 0..gp.variable_count {
        let mut set: Vec<bool> = (0..n).map(|w| fallible[w] || rng.gen_bool(0.3)).collect();
        for w in 0..n {
            if set[w] {
                for v in intuit.successors(w).collect::<Vec<_>>() {
                    set[v] = true;
                }
            }
        }
        valuation.insert(var_name(i), set);
    }
    let names = (0..n).map(|i| format!("w{i}")).collect();
    let m = Model::from_parts(names, fallible, intuit, modal, valuation).ok()?;
    match gp.logic {
        Some(l) if !m.in_class(l) => None,
        _ => Some(m),
    }
}

/// A random validated model in `gp.logic`'s frame class.
pub fn random_model(gp: &GenParams) -> Result<Model, GenError> {
    if gp.size == 0 {
        return Err(GenError::EmptyModel);
    }
    if !(0.0..=1.0).contains(&gp.edge_density) {
        return Err(GenError::BadDensity);
    }
    let mut rng = rng_for(gp.seed);
    for _ in 0..GEN_RETRIES {
        if let Some(m) = attempt(gp, &mut rng) {
            return Ok(m);
        }
    }
    Err(GenError::RepairOverflow(GEN_RETRIES))
}

/// Size in `1..=max_size`, density in `[0.1, 0.5)`, `vars` variables.
pub fn random_model_varied(
    logic: Option<Logic>,
    max_size: usize,
    vars: usize,
    seed: u64,
) -> Result<Model, GenError> {
    let mut rng = rng_for(seed ^ 0x9e37_79b9_7f4a_7c15);
    let gp = GenParams {
        size: rng.gen_range(1..=max_size.max(1)),
        edge_density: rng.gen_range(0.1..0.5),
        variable_count: vars,
        logic,
        seed,
    };
    random_model(&gp)
}

/// All preorders on `0..n`.
pub fn preorders(n: usize) -> Vec<Relation> {
    let offdiag: Vec<(World, World)> = (0..n)
        .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    assert!(offdiag.len() < 31, "too many worlds to enumerate");
    let mut out = Vec::new();
    for mask in 0u32..(1 << offdiag.len()) {
        let mut r = Relation::identity(n);
        for (i, &(a, b)) in offdiag.iter().enumerate() {
            if mask >> i & 1 == 1 {
                r.insert(a, b);
            }
        }
        if r.is_transitive() {
            out.push(r);
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn frame_code(intuit: &Relation, modal: &Relation, perm: &[usize]) -> Vec<bool> {
    let n = perm.len();
    let mut code = Vec::with_capacity(2 * n * n);
    // position (i, j) of the permuted frame holds the pair (perm[i], perm[j])
    for rel in [intuit, modal] {
        for i in 0..n {
            for j in 0..n {
                code.push(rel.contains(perm[i], perm[j]));
            }
        }
    }
    code
}

fn is_canonical(intuit: &Relation, modal: &Relation, perms: &[Vec<usize>]) -> bool {
    let own = frame_code(intuit, modal, &perms[0]);
    perms[1..]
        .iter()
        .all(|p| frame_code(intuit, modal, p) >= own)
}

/// A frame of the logic's class together with its admissible fallible sets.
#[derive(Clone, Debug)]
pub struct Frame {
    pub intuit: Relation,
    pub modal: Relation,
    pub fallible_sets: Vec<Vec<bool>>,
}

fn frame_in_class(intuit: &Relation, modal: &Relation, logic: Logic) -> bool {
    let ok = |k| confluence_violation(intuit, modal, k).is_none();
    match logic {
        Logic::CS4 => ok(Confluence::Backward),
        Logic::IS4 => ok(Confluence::Backward) && ok(Confluence::Forward),
        Logic::S4I => ok(Confluence::Forward) && ok(Confluence::Downward),
        Logic::GS4 => {
            ok(Confluence::Backward)
                && ok(Confluence::Forward)
                && (0..intuit.size()).all(|w| {
                    let up: Vec<World> = intuit.successors(w).collect();
                    up.iter().all(|&a| {
                        up.iter()
                            .all(|&b| intuit.contains(a, b) || intuit.contains(b, a))
                    })
                })
        }
    }
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<bool>> {
    (0u32..(1 << n)).map(move |mask| (0..n).map(|i| mask >> i & 1 == 1).collect())
}

fn upward_closed(set: &[bool], rel: &Relation) -> bool {
    rel.pairs().all(|(a, b)| !set[a] || set[b])
}

fn frame_height(intuit: &Relation) -> usize {
    let n = intuit.size();
    let strict = |a: World, b: World| intuit.contains(a, b) && !intuit.contains(b, a);
    let mut h = vec![0usize; n];
    // the strict order has length < n, so n rounds of relaxation settle it
    for _ in 0..n {
        for a in 0..n {
            for b in 0..n {
                if strict(a, b) {
                    h[a] = h[a].max(h[b] + 1);
                }
            }
        }
    }
    h.into_iter().max().unwrap_or(0)
}

/// Every frame of `logic`'s class on exactly `n` worlds, optionally only one
/// per isomorphism class, in a fixed order.
pub fn frames(
    n: usize,
    logic: Logic,
    prune_isomorphs: bool,
    height_cap: Option<usize>,
) -> Vec<Frame> {
    let pre = preorders(n);
    let perms = permutations(n);
    let infallible_only = !allows_fallible(Some(logic));
    let mut out = Vec::new();
    for intuit in &pre {
        if height_cap.is_some_and(|cap| frame_height(intuit) > cap) {
            continue;
        }
        for modal in &pre {
            if !frame_in_class(intuit, modal, logic) {
                continue;
            }
            if prune_isomorphs && !is_canonical(intuit, modal, &perms) {
                continue;
            }
            let fallible_sets = if infallible_only {
                vec![vec![false; n]]
            } else {
                subsets(n)
                    .filter(|s| s.iter().any(|b| !b))
                    .filter(|s| upward_closed(s, intuit) && upward_closed(s, modal))
                    .collect()
            };
            out.push(Frame {
                intuit: intuit.clone(),
                modal: modal.clone(),
                fallible_sets,
            });
        }
    }
    out
}

/// Up-sets of `intuit` containing `fallible`.
fn valuation_choices(intuit: &Relation, fallible: &[bool]) -> Vec<Vec<bool>> {
    let n = intuit.size();
    subsets(n)
        .filter(|s| (0..n).all(|w| !fallible[w] || s[w]) && upward_closed(s, intuit))
        .collect()
}

impl Frame {
    /// Number of models this frame contributes for `vars` variables.
    pub fn candidate_count(&self, vars: usize) -> u64 {
        self.fallible_sets
            .iter()
            .map(|f| (valuation_choices(&self.intuit, f).len() as u64).pow(vars as u32))
            .sum()
    }

    /// First model on this frame (in enumeration order) with a non-fallible
    /// world refuting `f`.
    pub fn find_countermodel(&self, f: &Formula, vars: &[String]) -> Option<(Model, World)> {
        let n = self.intuit.size();
        for fallible in &self.fallible_sets {
            let choices = valuation_choices(&self.intuit, fallible);
            let mut idx = vec![0usize; vars.len()];
            loop {
                let valuation: BTreeMap<String, Vec<bool>> = vars
                    .iter()
                    .zip(&idx)
                    .map(|(v, &i)| (v.clone(), choices[i].clone()))
                    .collect();
                let names = (0..n).map(|i| format!("w{i}")).collect();
                let m = Model::from_parts(
                    names,
                    fallible.clone(),
                    self.intuit.clone(),
                    self.modal.clone(),
                    valuation,
                )
                .expect("enumerated frames carry valid valuations");
                if let Some(w) = falsifier(&m, f) {
                    return Some((m, w));
                }
                // odometer over valuation choices
                let mut k = 0;
                loop {
                    if k == idx.len() {
                        break;
                    }
                    idx[k] += 1;
                    if idx[k] < choices.len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == idx.len() {
                    break;
                }
            }
        }
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HeightCap {
    /// `|sub(f)| + 1`.
    Auto,
    Fixed(usize),
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_worlds: usize,
    pub max_candidates: u64,
    pub height_cap: HeightCap,
    pub seed: u64,
    pub prune_isomorphs: Option<bool>,
}

impl SearchBudget {
    pub fn worlds(max_worlds: usize) -> Self {
        SearchBudget {
            max_worlds,
            max_candidates: u64::MAX,
            height_cap: HeightCap::Auto,
            seed: 0,
            prune_isomorphs: None,
        }
    }

    fn prune(&self, n: usize) -> bool {
        self.prune_isomorphs.unwrap_or(n >= 3)
    }
}

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Found {
        model: Model,
        world: World,
    },
    /// Every candidate within `max_worlds` was checked; not a validity claim.
    NoneFound {
        candidates: u64,
    },
    BudgetExhausted {
        candidates: u64,
    },
}

/// Bounded search for a model of `logic`'s class refuting `f`.
///
/// Models are enumerated by increasing size; within a size the frame order
/// is fixed and the first hit by that order is returned. A returned model is
/// re-validated, re-classified and re-evaluated before it is handed out.
pub fn find_countermodel(f: &Formula, logic: Logic, budget: &SearchBudget) -> SearchOutcome {
    let vars: Vec<String> = f.variables().into_iter().collect();
    let cap = match budget.height_cap {
        HeightCap::Auto => Some(subformulas(f).len() + 1),
        HeightCap::Fixed(c) => Some(c),
        HeightCap::Unbounded => None,
    };
    let mut spent: u64 = 0;
    for n in 1..=budget.max_worlds {
        let all = frames(n, logic, budget.prune(n), cap);
        let mut take = 0;
        let mut truncated = false;
        for fr in &all {
            let c = fr.candidate_count(vars.len());
            if spent.saturating_add(c) > budget.max_candidates {
                truncated = true;
                break;
            }
            spent += c;
            take += 1;
        }
        let hit = all[..take]
            .par_iter()
            .map(|fr| fr.find_countermodel(f, &vars))
            .find_first(|r| r.is_some())
            .flatten();
        if let Some((model, world)) = hit {
            let model = Model::from_parts(
                model.names().to_vec(),
                model.fallible().to_vec(),
                model.intuit().clone(),
                model.modal().clone(),
                model.valuation().clone(),
            )
            .expect("countermodel re-validates");
            assert!(model.in_class(logic), "countermodel outside {logic}");
            assert!(!model.is_fallible(world) && !model_valid(&model, f));
            return SearchOutcome::Found { model, world };
        }
        if truncated {
            return SearchOutcome::BudgetExhausted { candidates: spent };
        }
    }
    SearchOutcome::NoneFound { candidates: spent }
}

/// Refuting model of at most `n` worlds, searched exhaustively.
pub fn exhaustive_countermodel(f: &Formula, logic: Logic, n: usize) -> Option<(Model, World)> {
    let budget = SearchBudget {
        height_cap: HeightCap::Unbounded,
        ..SearchBudget::worlds(n)
    };
    match find_countermodel(f, logic, &budget) {
        SearchOutcome::Found { model, world } => Some((model, world)),
        _ => None,
    }
}

/// True iff `f` holds on every model of `logic`'s class with at most `n`
/// worlds (valuations over `f`'s variables only).
pub fn check_validity_upto(f: &Formula, logic: Logic, n: usize) -> bool {
    exhaustive_countermodel(f, logic, n).is_none()
}

#[derive(Clone, Debug)]
pub struct Violation {
    pub schema: String,
    pub instance: Formula,
    pub model_index: usize,
    pub model: Model,
    pub world: World,
}

#[derive(Clone, Debug)]
pub struct SchemaTally {
    pub schema: String,
    pub instances: usize,
    pub violations: usize,
}

#[derive(Clone, Debug)]
pub struct SoundnessReport {
    pub label: String,
    pub models: usize,
    pub tallies: Vec<SchemaTally>,
    pub violations: Vec<Violation>,
}

impl SoundnessReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    /// `OK`/`VIOLATION` lines, one per schema and one per violation; models
    /// are dumped after each violation with a `MODEL` prefix.
    pub fn to_tagged(&self) -> String {
        let mut out = String::new();
        for t in &self.tallies {
            let tag = if t.violations == 0 { "OK" } else { "VIOLATION" };
            out.push_str(&format!(
                "{tag} {} {} models={} instances={} violations={}\n",
                self.label, t.schema, self.models, t.instances, t.violations
            ));
        }
        for v in &self.violations {
            out.push_str(&format!(
                "VIOLATION {} {} model={} world={} instance={}\n",
                self.label,
                v.schema,
                v.model_index,
                v.model.name(v.world),
                v.instance
            ));
            for line in v.model.to_text().lines() {
                out.push_str(&format!("MODEL {line}\n"));
            }
        }
        out
    }
}

/// Evaluates `instances` random instances of every schema on every model.
/// Instances for model `i` come from a generator seeded by `(seed, i)`.
pub fn soundness_on_models(
    label: &str,
    schemas: &[&AxiomSchema],
    models: &[Model],
    instances: usize,
    seed: u64,
) -> SoundnessReport {
    let per_model: Vec<Vec<(usize, Option<Violation>)>> = models
        .par_iter()
        .enumerate()
        .map(|(i, m)| {
            let mut rng = rng_for(seed.wrapping_mul(0x0100_0000_01b3).wrapping_add(i as u64));
            let mut found = Vec::new();
            for (s_idx, s) in schemas.iter().enumerate() {
                for _ in 0..instances {
                    let inst = random_instance(&mut rng, s, 3, 3);
                    let v = falsifier(m, &inst).map(|world| Violation {
                        schema: s.name.to_string(),
                        instance: inst,
                        model_index: i,
                        model: m.clone(),
                        world,
                    });
                    found.push((s_idx, v));
                }
            }
            found
        })
        .collect();
    let mut tallies: Vec<SchemaTally> = schemas
        .iter()
        .map(|s| SchemaTally {
            schema: s.name.to_string(),
            instances: 0,
            violations: 0,
        })
        .collect();
    let mut violations = Vec::new();
    for (s_idx, v) in per_model.into_iter().flatten() {
        tallies[s_idx].instances += 1;
        if let Some(v) = v {
            tallies[s_idx].violations += 1;
            violations.push(v);
        }
    }
    SoundnessReport {
        label: label.to_string(),
        models: models.len(),
        tallies,
        violations,
    }
}

/// `count` random models of `logic`'s class with at most 8 worlds and 3
/// variables, seeded from `seed`.
pub fn random_models(logic: Option<Logic>, count: usize, seed: u64) -> Vec<Model> {
    (0..count)
        .into_par_iter()
        .map(|i| {
            random_model_varied(
                logic,
                8,
                3,
                seed.wrapping_add(i as u64).wrapping_mul(0x9e37_79b9),
            )
            .expect("generator reaches every class")
        })
        .collect()
}

/// Random-instance check of every axiom of `logic` on random models of its
/// class.
pub fn soundness_suite(
    logic: Logic,
    models: usize,
    instances_per_axiom: usize,
    seed: u64,
) -> SoundnessReport {
    let ms = random_models(Some(logic), models, seed);
    soundness_on_models(logic.name(), &axioms(logic), &ms, instances_per_axiom, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::kripke::{fig1, Condition};

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn preorder_counts() {
        // OEIS A000798
        let counts: Vec<usize> = (1..=4).map(|n| preorders(n).len()).collect();
        assert_eq!(counts, vec![1, 4, 29, 355]);
    }

    #[test]
    fn generated_models_land_in_their_class() {
        for logic in Logic::ALL {
            for seed in 0..40 {
                let m = random_model_varied(Some(logic), 8, 2, seed).unwrap();
                assert!(m.in_class(logic), "{logic} seed {seed}");
            }
        }
        let gs4 = random_model(&GenParams::new(1, Some(Logic::GS4), 3)).unwrap();
        assert_eq!(gs4.len(), 1);
        assert!(gs4.is_infallible());
    }

    #[test]
    fn generator_examples() {
        let cs4 = random_model(&GenParams::new(6, Some(Logic::CS4), 42)).unwrap();
        assert!(cs4.holds(Condition::Backward));
        let s4i = random_model(&GenParams::new(6, Some(Logic::S4I), 7)).unwrap();
        assert!(s4i.holds(Condition::Forward) && s4i.holds(Condition::Downward));
        assert_eq!(
            random_model(&GenParams::new(0, None, 1)),
            Err(GenError::EmptyModel)
        );
    }

    #[test]
    fn generator_is_deterministic() {
        let gp = GenParams::new(7, Some(Logic::IS4), 99);
        assert_eq!(random_model(&gp).unwrap(), random_model(&gp).unwrap());
    }

    #[test]
    fn fork_refutes_gd_in_is4() {
        let gd = f("(p -> q) | (q -> p)");
        let SearchOutcome::Found { model, world } =
            find_countermodel(&gd, Logic::IS4, &SearchBudget::worlds(3))
        else {
            panic!("expected a countermodel");
        };
        assert_eq!(model.len(), 3);
        assert!(model.in_class(Logic::IS4));
        assert!(!model.holds(Condition::LocallyLinear));
        assert_eq!(model.world_height(world), 1);
    }

    #[test]
    fn single_world_refutes_p() {
        let SearchOutcome::Found { model, world } =
            find_countermodel(&f("p"), Logic::CS4, &SearchBudget::worlds(1))
        else {
            panic!("expected a countermodel");
        };
        assert_eq!(model.len(), 1);
        assert!(model.is_infallible());
        assert!(!model.holds_var("p", world));
    }

    #[test]
    fn t_box_has_no_small_countermodel() {
        let out = find_countermodel(&f("[]p -> p"), Logic::CS4, &SearchBudget::worlds(4));
        assert!(matches!(out, SearchOutcome::NoneFound { .. }));
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let budget = SearchBudget {
            max_candidates: 3,
            ..SearchBudget::worlds(3)
        };
        let out = find_countermodel(&f("(p -> q) | (q -> p)"), Logic::IS4, &budget);
        assert!(matches!(out, SearchOutcome::BudgetExhausted { .. }));
    }

    #[test]
    fn exhaustive_examples() {
        let gd = f("(p -> q) | (q -> p)");
        assert!(check_validity_upto(&gd, Logic::GS4, 3));
        assert!(!check_validity_upto(&gd, Logic::IS4, 3));
        assert!(check_validity_upto(&f("false -> p"), Logic::CS4, 2));
    }

    #[test]
    fn pruning_does_not_change_answers() {
        for s in [
            "(p -> q) | (q -> p)",
            "[]p -> [][]p",
            "<>(p | q) -> <>p | <>q",
            "~<>false",
        ] {
            for logic in Logic::ALL {
                let mut pruned = SearchBudget::worlds(3);
                pruned.prune_isomorphs = Some(true);
                let mut full = SearchBudget::worlds(3);
                full.prune_isomorphs = Some(false);
                let a = matches!(
                    find_countermodel(&f(s), logic, &pruned),
                    SearchOutcome::Found { .. }
                );
                let b = matches!(
                    find_countermodel(&f(s), logic, &full),
                    SearchOutcome::Found { .. }
                );
                assert_eq!(a, b, "{s} in {logic}");
            }
        }
    }

    #[test]
    fn negative_control_on_fig1() {
        let x = fig1().world("x").unwrap();
        assert_eq!(falsifier(&fig1(), &f("[]p -> [][]p")), Some(x));
    }

    #[test]
    fn harness_detects_invalid_schemas() {
        let foreign: Vec<_> = ["GD", "FS", "N"]
            .into_iter()
            .map(|n| crate::hilbert::schema(n).unwrap())
            .collect();
        let models = random_models(Some(Logic::CS4), 200, 3);
        assert!(models.iter().any(|m| !m.is_infallible()));
        let report = soundness_on_models("CS4", &foreign, &models, 5, 3);
        assert!(
            report.tallies.iter().all(|t| t.violations > 0),
            "{}",
            report.to_tagged()
        );
        assert!(report.to_tagged().contains("\nMODEL worlds:"));
    }

    #[test]
    fn soundness_suite_small() {
        for logic in Logic::ALL {
            let r = soundness_suite(logic, 20, 2, 5);
            assert!(r.is_clean(), "{}", r.to_tagged());
        }
    }
}
