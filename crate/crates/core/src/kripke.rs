//! Finite bi-intuitionistic models.
//!
//! A [`Model`] carries two preorders over the same worlds: `intuit` for
//! implication and `modal` for the modalities. Both are stored closed under
//! reflexivity and transitivity; raw edges given to [`RawModel::validate`]
//! are closed before any other check runs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub type World = usize;

/// Dense binary relation on `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    n: usize,
    bits: Vec<bool>,
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        Relation {
            n,
            bits: vec![false; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut r = Self::empty(n);
        for i in 0..n {
            r.insert(i, i);
        }
        r
    }

    pub fn full(n: usize) -> Self {
        Relation {
            n,
            bits: vec![true; n * n],
        }
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (World, World)>) -> Self {
        let mut r = Self::empty(n);
        for (a, b) in pairs {
            r.insert(a, b);
        }
        r
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn contains(&self, a: World, b: World) -> bool {
        self.bits[a * self.n + b]
    }

    /// Returns true if the pair was new.
    pub fn insert(&mut self, a: World, b: World) -> bool {
        let slot = &mut self.bits[a * self.n + b];
        let fresh = !*slot;
        *slot = true;
        fresh
    }

    pub fn remove(&mut self, a: World, b: World) {
        self.bits[a * self.n + b] = false;
    }

    pub fn len(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn pairs(&self) -> impl Iterator<Item = (World, World)> + '_ {
        (0..self.n).flat_map(move |a| self.successors(a).map(move |b| (a, b)))
    }

    pub fn successors(&self, a: World) -> impl Iterator<Item = World> + '_ {
        let row = &self.bits[a * self.n..(a + 1) * self.n];
        row.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i)
    }

    pub fn predecessors(&self, b: World) -> impl Iterator<Item = World> + '_ {
        (0..self.n).filter(move |&a| self.contains(a, b))
    }

    /// `self ; other`: `a (self;other) c` iff `a self b other c` for some `b`.
    pub fn compose(&self, other: &Relation) -> Relation {
        assert_eq!(self.n, other.n);
        let mut out = Relation::empty(self.n);
        for (a, b) in self.pairs() {
            for c in other.successors(b) {
                out.insert(a, c);
            }
        }
        out
    }

    pub fn union(&self, other: &Relation) -> Relation {
        assert_eq!(self.n, other.n);
        Relation {
            n: self.n,
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(a, b)| *a || *b)
                .collect(),
        }
    }

    pub fn inverse(&self) -> Relation {
        Relation::from_pairs(self.n, self.pairs().map(|(a, b)| (b, a)))
    }

    /// `R⁺` (Warshall).
    pub fn transitive_closure(&self) -> Relation {
        let mut r = self.clone();
        let n = self.n;
        for k in 0..n {
            for i in 0..n {
                if r.contains(i, k) {
                    for j in 0..n {
                        if r.contains(k, j) {
                            r.insert(i, j);
                        }
                    }
                }
            }
        }
        r
    }

    pub fn reflexive_transitive_closure(&self) -> Relation {
        self.union(&Relation::identity(self.n)).transitive_closure()
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.n).all(|i| self.contains(i, i))
    }

    pub fn is_transitive(&self) -> bool {
        self.compose(self).is_subset(self)
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairs().all(|(a, b)| self.contains(b, a))
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| !*a || *b)
    }
}

/// The three ways a relation can commute with a preorder.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Confluence {
    /// `w ≼ w'` and `w R v` imply `v ≼ v'` and `w' R v'` for some `v'`.
    Forward,
    /// `w R v ≼ v'` implies `w ≼ w' R v'` for some `w'`.
    Backward,
    /// `w ≼ v R v'` implies `w R w' ≼ v'` for some `w'`.
    Downward,
}

/// Exhaustively checks a confluence condition of `r` against `preorder`.
///
/// On failure returns the violating triple: `(w, w', v)` for forward,
/// `(w, v, v')` for backward and downward, named in the order of the
/// hypotheses above.
pub fn confluence_violation(
    preorder: &Relation,
    r: &Relation,
    kind: Confluence,
) -> Option<(World, World, World)> {
    let n = preorder.size();
    match kind {
        Confluence::Forward => {
            for w in 0..n {
                for w2 in preorder.successors(w) {
                    for v in r.successors(w) {
                        let ok = preorder.successors(v).any(|v2| r.contains(w2, v2));
                        if !ok {
                            return Some((w, w2, v));
                        }
                    }
                }
            }
        }
        Confluence::Backward => {
            for w in 0..n {
                for v in r.successors(w) {
                    for v2 in preorder.successors(v) {
                        let ok = preorder.successors(w).any(|w2| r.contains(w2, v2));
                        if !ok {
                            return Some((w, v, v2));
                        }
                    }
                }
            }
        }
        Confluence::Downward => {
            for w in 0..n {
                for v in preorder.successors(w) {
                    for v2 in r.successors(v) {
                        let ok = r.successors(w).any(|w2| preorder.contains(w2, v2));
                        if !ok {
                            return Some((w, v, v2));
                        }
                    }
                }
            }
        }
    }
    None
}

pub fn is_confluent(preorder: &Relation, r: &Relation, kind: Confluence) -> bool {
    confluence_violation(preorder, r, kind).is_none()
}

/// The four constructive S4 variants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Logic {
    CS4,
    IS4,
    S4I,
    GS4,
}

impl Logic {
    pub const ALL: [Logic; 4] = [Logic::CS4, Logic::IS4, Logic::S4I, Logic::GS4];

    pub fn name(self) -> &'static str {
        match self {
            Logic::CS4 => "CS4",
            Logic::IS4 => "IS4",
            Logic::S4I => "S4I",
            Logic::GS4 => "GS4",
        }
    }
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown logic `{0}` (expected CS4, IS4, S4I or GS4)")]
pub struct UnknownLogic(pub String);

impl FromStr for Logic {
    type Err = UnknownLogic;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "CS4" => Ok(Logic::CS4),
            "IS4" => Ok(Logic::IS4),
            "S4I" => Ok(Logic::S4I),
            "GS4" => Ok(Logic::GS4),
            _ => Err(UnknownLogic(s.to_string())),
        }
    }
}

/// Which of the two preorders a diagnostic is about.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    Intuit,
    Modal,
}

impl fmt::Display for Which {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Which::Intuit => "intuit",
            Which::Modal => "modal",
        })
    }
}

/// One violated model constraint, with witnessing worlds (by name).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NoWorlds,
    DuplicateWorld(String),
    WorldOutOfRange(usize),
    FallibleNotClosed {
        relation: Which,
        from: String,
        to: String,
    },
    ValuationNotMonotone {
        var: String,
        from: String,
        to: String,
    },
    FallibleOutsideValuation {
        var: String,
        world: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoWorlds => write!(f, "model has no worlds"),
            Violation::DuplicateWorld(w) => write!(f, "world `{w}` declared twice"),
            Violation::WorldOutOfRange(i) => write!(f, "world index {i} out of range"),
            Violation::FallibleNotClosed { relation, from, to } => write!(
                f,
                "fallible not upward closed under {relation} at ({from},{to})"
            ),
            Violation::ValuationNotMonotone { var, from, to } => {
                write!(f, "valuation not monotone at ({from},{to}) for {var}")
            }
            Violation::FallibleOutsideValuation { var, world } => {
                write!(f, "fallible world {world} missing from valuation of {var}")
            }
        }
    }
}

/// Every constraint a raw model violates.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct Diagnostics(pub Vec<Violation>);

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msgs: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        f.write_str(&msgs.join("; "))
    }
}

/// Unvalidated model data. Edges are raw: closure happens in [`validate`].
///
/// [`validate`]: RawModel::validate
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawModel {
    pub worlds: Vec<String>,
    pub fallible: Vec<World>,
    pub intuit: Vec<(World, World)>,
    pub modal: Vec<(World, World)>,
    pub valuation: BTreeMap<String, Vec<World>>,
}

impl RawModel {
    pub fn new<S: Into<String>>(worlds: impl IntoIterator<Item = S>) -> Self {
        RawModel {
            worlds: worlds.into_iter().map(Into::into).collect(),
            ..Default::default()
        }
    }

    pub fn intuit_edge(mut self, a: World, b: World) -> Self {
        self.intuit.push((a, b));
        self
    }

    pub fn modal_edge(mut self, a: World, b: World) -> Self {
        self.modal.push((a, b));
        self
    }

    pub fn fallible_world(mut self, w: World) -> Self {
        self.fallible.push(w);
        self
    }

    pub fn val(mut self, var: &str, ws: impl IntoIterator<Item = World>) -> Self {
        self.valuation
            .entry(var.to_string())
            .or_default()
            .extend(ws);
        self
    }

    /// Closes both relations and checks fallible closure and monotonicity.
    pub fn validate(&self) -> Result<Model, Diagnostics> {
        let n = self.worlds.len();
        let mut errs = Vec::new();
        if n == 0 {
            errs.push(Violation::NoWorlds);
        }
        let mut seen = BTreeSet::new();
        for w in &self.worlds {
            if !seen.insert(w) {
                errs.push(Violation::DuplicateWorld(w.clone()));
            }
        }
        let in_range = |i: World, errs: &mut Vec<Violation>| {
            if i >= n {
                errs.push(Violation::WorldOutOfRange(i));
                false
            } else {
                true
            }
        };
        let mut intuit = Relation::empty(n);
        for &(a, b) in &self.intuit {
            if in_range(a, &mut errs) && in_range(b, &mut errs) {
                intuit.insert(a, b);
            }
        }
        let mut modal = Relation::empty(n);
        for &(a, b) in &self.modal {
            if in_range(a, &mut errs) && in_range(b, &mut errs) {
                modal.insert(a, b);
            }
        }
        let mut fallible = vec![false; n];
        for &w in &self.fallible {
            if in_range(w, &mut errs) {
                fallible[w] = true;
            }
        }
        let mut valuation = BTreeMap::new();
        for (var, ws) in &self.valuation {
            let mut set = vec![false; n];
            for &w in ws {
                if in_range(w, &mut errs) {
                    set[w] = true;
                }
            }
            valuation.insert(var.clone(), set);
        }
        if !errs.is_empty() {
            return Err(Diagnostics(errs));
        }
        Model::from_parts(
            self.worlds.clone(),
            fallible,
            intuit.reflexive_transitive_closure(),
            modal.reflexive_transitive_closure(),
            valuation,
        )
    }
}

/// A validated finite bi-intuitionistic model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    names: Vec<String>,
    fallible: Vec<bool>,
    intuit: Relation,
    modal: Relation,
    valuation: BTreeMap<String, Vec<bool>>,
}

impl Model {
    /// Builds a model from relations that must already be preorders; checks
    /// everything else.
    pub fn from_parts(
        names: Vec<String>,
        fallible: Vec<bool>,
        intuit: Relation,
        modal: Relation,
        valuation: BTreeMap<String, Vec<bool>>,
    ) -> Result<Model, Diagnostics> {
        let n = names.len();
        assert!(intuit.size() == n && modal.size() == n && fallible.len() == n);
        assert!(intuit.is_reflexive() && intuit.is_transitive());
        assert!(modal.is_reflexive() && modal.is_transitive());
        let mut errs = Vec::new();
        if n == 0 {
            errs.push(Violation::NoWorlds);
        }
        for (rel, which) in [(&intuit, Which::Intuit), (&modal, Which::Modal)] {
            for (a, b) in rel.pairs() {
                if fallible[a] && !fallible[b] {
                    errs.push(Violation::FallibleNotClosed {
                        relation: which,
                        from: names[a].clone(),
                        to: names[b].clone(),
                    });
                }
            }
        }
        for (var, set) in &valuation {
            for (a, b) in intuit.pairs() {
                if set[a] && !set[b] {
                    errs.push(Violation::ValuationNotMonotone {
                        var: var.clone(),
                        from: names[a].clone(),
                        to: names[b].clone(),
                    });
                }
            }
            for w in 0..n {
                if fallible[w] && !set[w] {
                    errs.push(Violation::FallibleOutsideValuation {
                        var: var.clone(),
                        world: names[w].clone(),
                    });
                }
            }
        }
        if errs.is_empty() {
            Ok(Model {
                names,
                fallible,
                intuit,
                modal,
                valuation,
            })
        } else {
            Err(Diagnostics(errs))
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn worlds(&self) -> std::ops::Range<World> {
        0..self.names.len()
    }

    pub fn name(&self, w: World) -> &str {
        &self.names[w]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn world(&self, name: &str) -> Option<World> {
        self.names.iter().position(|n| n == name)
    }

    pub fn is_fallible(&self, w: World) -> bool {
        self.fallible[w]
    }

    pub fn fallible(&self) -> &[bool] {
        &self.fallible
    }

    pub fn is_infallible(&self) -> bool {
        !self.fallible.iter().any(|f| *f)
    }

    pub fn intuit(&self) -> &Relation {
        &self.intuit
    }

    pub fn modal(&self) -> &Relation {
        &self.modal
    }

    pub fn valuation(&self) -> &BTreeMap<String, Vec<bool>> {
        &self.valuation
    }

    /// Truth of a variable. Variables without a valuation entry hold exactly
    /// on the fallible worlds.
    pub fn holds_var(&self, var: &str, w: World) -> bool {
        self.fallible[w] || self.valuation.get(var).is_some_and(|s| s[w])
    }

    pub fn check_condition(&self, cond: Condition) -> CheckResult {
        let witness = match cond {
            Condition::Forward => {
                confluence_violation(&self.intuit, &self.modal, Confluence::Forward)
                    .map(Witness::from)
            }
            Condition::Backward => {
                confluence_violation(&self.intuit, &self.modal, Confluence::Backward)
                    .map(Witness::from)
            }
            Condition::Downward => {
                confluence_violation(&self.intuit, &self.modal, Confluence::Downward)
                    .map(Witness::from)
            }
            Condition::LocallyLinear => incomparable_pair(&self.intuit, false),
            Condition::ForestLike => incomparable_pair(&self.intuit, true),
            Condition::Infallible => self.fallible.iter().position(|f| *f).map(Witness::World),
        };
        CheckResult {
            holds: witness.is_none(),
            witness,
        }
    }

    pub fn holds(&self, cond: Condition) -> bool {
        self.check_condition(cond).holds
    }

    pub fn classify(&self) -> FrameReport {
        FrameReport::new(
            self.holds(Condition::Forward),
            self.holds(Condition::Backward),
            self.holds(Condition::Downward),
            self.holds(Condition::LocallyLinear),
            self.holds(Condition::ForestLike),
            self.holds(Condition::Infallible),
        )
    }

    pub fn in_class(&self, logic: Logic) -> bool {
        self.classify().classes.contains(&logic)
    }

    /// Index of the ≼-cluster of each world; clusters are numbered by their
    /// lowest world.
    pub fn clusters(&self) -> Vec<usize> {
        let n = self.len();
        let mut id = vec![usize::MAX; n];
        let mut next = 0;
        for w in 0..n {
            if id[w] != usize::MAX {
                continue;
            }
            for (v, slot) in id.iter_mut().enumerate().skip(w) {
                if self.intuit.contains(w, v) && self.intuit.contains(v, w) {
                    *slot = next;
                }
            }
            next += 1;
        }
        id
    }

    /// Strict part of ≼: `w ≼ v` and not `v ≼ w`.
    pub fn strictly_below(&self, w: World, v: World) -> bool {
        self.intuit.contains(w, v) && !self.intuit.contains(v, w)
    }

    /// Heights of all worlds: longest strict ≼-chain starting at each.
    pub fn world_heights(&self) -> Vec<usize> {
        let clusters = self.clusters();
        let k = clusters.iter().copied().max().map_or(0, |m| m + 1);
        let mut rep = vec![0; k];
        for w in (0..self.len()).rev() {
            rep[clusters[w]] = w;
        }
        // condensed strict order over cluster representatives
        let mut memo: Vec<Option<usize>> = vec![None; k];
        fn visit(
            c: usize,
            rep: &[World],
            clusters: &[usize],
            m: &Model,
            memo: &mut Vec<Option<usize>>,
        ) -> usize {
            if let Some(h) = memo[c] {
                return h;
            }
            let w = rep[c];
            let mut best = 0;
            let succ: Vec<usize> = m
                .intuit
                .successors(w)
                .filter(|&v| clusters[v] != c)
                .map(|v| clusters[v])
                .collect();
            for d in succ {
                best = best.max(1 + visit(d, rep, clusters, m, memo));
            }
            memo[c] = Some(best);
            best
        }
        (0..self.len())
            .map(|w| visit(clusters[w], &rep, &clusters, self, &mut memo))
            .collect()
    }

    pub fn world_height(&self, w: World) -> usize {
        self.world_heights()[w]
    }

    pub fn height(&self) -> usize {
        self.world_heights().into_iter().max().unwrap_or(0)
    }

    /// Renames worlds to `w0, w1, ...`.
    pub fn with_default_names(mut self) -> Model {
        self.names = (0..self.len()).map(|i| format!("w{i}")).collect();
        self
    }

    /// Serializes to the line-based model format. Relations are written in
    /// full (minus reflexive pairs); reading back re-closes them.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("worlds: ");
        out.push_str(&self.names.join(" "));
        out.push('\n');
        out.push_str("fallible:");
        for w in self.worlds().filter(|&w| self.fallible[w]) {
            out.push(' ');
            out.push_str(&self.names[w]);
        }
        out.push('\n');
        for (key, rel) in [("intuit", &self.intuit), ("modal", &self.modal)] {
            out.push_str(key);
            out.push(':');
            for (a, b) in rel.pairs().filter(|(a, b)| a != b) {
                out.push_str(&format!(" {}<={}", self.names[a], self.names[b]));
            }
            out.push('\n');
        }
        for (var, set) in &self.valuation {
            out.push_str(&format!("val {var}:"));
            for w in self.worlds().filter(|&w| set[w]) {
                out.push(' ');
                out.push_str(&self.names[w]);
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Model, ModelTextError> {
        parse_model_text(text)?
            .validate()
            .map_err(ModelTextError::Invalid)
    }
}

fn incomparable_pair(intuit: &Relation, downward: bool) -> Option<Witness> {
    let n = intuit.size();
    for w in 0..n {
        let near: Vec<World> = if downward {
            intuit.predecessors(w).collect()
        } else {
            intuit.successors(w).collect()
        };
        for (i, &u) in near.iter().enumerate() {
            for &v in &near[i + 1..] {
                if !intuit.contains(u, v) && !intuit.contains(v, u) {
                    return Some(Witness::Triple(w, u, v));
                }
            }
        }
    }
    None
}

/// Frame conditions that [`Model::check_condition`] decides.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Condition {
    Forward,
    Backward,
    Downward,
    LocallyLinear,
    ForestLike,
    Infallible,
}

impl Condition {
    pub const ALL: [Condition; 6] = [
        Condition::Forward,
        Condition::Backward,
        Condition::Downward,
        Condition::LocallyLinear,
        Condition::ForestLike,
        Condition::Infallible,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Condition::Forward => "forward_confluent",
            Condition::Backward => "backward_confluent",
            Condition::Downward => "downward_confluent",
            Condition::LocallyLinear => "locally_linear",
            Condition::ForestLike => "forest_like",
            Condition::Infallible => "infallible",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Witness {
    Triple(World, World, World),
    World(World),
}

impl From<(World, World, World)> for Witness {
    fn from((a, b, c): (World, World, World)) -> Self {
        Witness::Triple(a, b, c)
    }
}

impl Witness {
    pub fn describe(&self, m: &Model) -> String {
        match *self {
            Witness::Triple(a, b, c) => format!("({}, {}, {})", m.name(a), m.name(b), m.name(c)),
            Witness::World(a) => format!("({})", m.name(a)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub holds: bool,
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameReport {
    pub forward_confluent: bool,
    pub backward_confluent: bool,
    pub downward_confluent: bool,
    pub locally_linear: bool,
    pub forest_like: bool,
    pub infallible: bool,
    pub classes: BTreeSet<Logic>,
}

impl FrameReport {
    pub fn new(
        forward_confluent: bool,
        backward_confluent: bool,
        downward_confluent: bool,
        locally_linear: bool,
        forest_like: bool,
        infallible: bool,
    ) -> Self {
        let mut classes = BTreeSet::new();
        let cs4 = backward_confluent;
        let is4 = cs4 && forward_confluent && infallible;
        if cs4 {
            classes.insert(Logic::CS4);
        }
        if is4 {
            classes.insert(Logic::IS4);
        }
        if forward_confluent && downward_confluent && infallible {
            classes.insert(Logic::S4I);
        }
        if is4 && locally_linear {
            classes.insert(Logic::GS4);
        }
        FrameReport {
            forward_confluent,
            backward_confluent,
            downward_confluent,
            locally_linear,
            forest_like,
            infallible,
            classes,
        }
    }

    pub fn flag(&self, cond: Condition) -> bool {
        match cond {
            Condition::Forward => self.forward_confluent,
            Condition::Backward => self.backward_confluent,
            Condition::Downward => self.downward_confluent,
            Condition::LocallyLinear => self.locally_linear,
            Condition::ForestLike => self.forest_like,
            Condition::Infallible => self.infallible,
        }
    }

    pub fn classes_string(&self) -> String {
        if self.classes.is_empty() {
            "(none)".to_string()
        } else {
            self.classes
                .iter()
                .map(|l| l.name())
                .collect::<Vec<_>>()
                .join(" ")
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelTextError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("invalid model: {0}")]
    Invalid(Diagnostics),
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses the line-based model format without validating it.
pub fn parse_model_text(text: &str) -> Result<RawModel, ModelTextError> {
    let mut raw = RawModel::default();
    let mut declared = false;
    let mut index: BTreeMap<String, World> = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let err = |message: String| ModelTextError::Syntax {
            line: lineno,
            message,
        };
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line
            .split_once(':')
            .ok_or_else(|| err("expected `key: values`".into()))?;
        let key = key.trim();
        let items: Vec<&str> = rest.split_whitespace().collect();
        let lookup = |name: &str| -> Result<World, ModelTextError> {
            index
                .get(name)
                .copied()
                .ok_or_else(|| err(format!("world `{name}` not declared")))
        };
        match key {
            "worlds" => {
                if declared {
                    return Err(err("worlds declared twice".into()));
                }
                declared = true;
                for name in items {
                    if !is_ident(name) {
                        return Err(err(format!("bad world name `{name}`")));
                    }
                    if index.insert(name.to_string(), raw.worlds.len()).is_some() {
                        return Err(err(format!("world `{name}` declared twice")));
                    }
                    raw.worlds.push(name.to_string());
                }
            }
            "fallible" => {
                for name in items {
                    raw.fallible.push(lookup(name)?);
                }
            }
            "intuit" | "modal" => {
                for edge in items {
                    let (a, b) = edge
                        .split_once("<=")
                        .ok_or_else(|| err(format!("bad edge `{edge}`, expected a<=b")))?;
                    let pair = (lookup(a)?, lookup(b)?);
                    if key == "intuit" {
                        raw.intuit.push(pair);
                    } else {
                        raw.modal.push(pair);
                    }
                }
            }
            _ => {
                let var = key
                    .strip_prefix("val ")
                    .map(str::trim)
                    .filter(|v| is_ident(v) && *v != "false")
                    .ok_or_else(|| err(format!("unknown key `{key}`")))?;
                if raw.valuation.contains_key(var) {
                    return Err(err(format!("valuation of `{var}` given twice")));
                }
                let ws = items
                    .into_iter()
                    .map(lookup)
                    .collect::<Result<Vec<_>, _>>()?;
                raw.valuation.insert(var.to_string(), ws);
            }
        }
    }
    if !declared {
        return Err(ModelTextError::Syntax {
            line: 0,
            message: "missing `worlds:` line".into(),
        });
    }
    Ok(raw)
}

/// The five-world model used as the standard counterexample to `[]p -> [][]p`.
pub fn fig1_text() -> &'static str {
    "# x<=y, z<=t intuitionistic; y<=z, t<=w modal\n\
     worlds: x y z t w\n\
     fallible:\n\
     intuit: x<=y z<=t\n\
     modal: y<=z t<=w\n\
     val p: x y z t\n"
}

pub fn fig1() -> Model {
    Model::from_text(fig1_text()).expect("built-in model is valid")
}
