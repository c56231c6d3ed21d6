//! Satisfaction on finite models, model validity and Σ-labels.
//!
//! Evaluation is bottom-up over the subformula closure: each subformula gets
//! one truth vector over all worlds, so every (world, subformula) pair is
//! computed once per call.

use thiserror::Error;

use crate::formula::{subformulas, Formula, SubformulaSet};
use crate::kripke::{Condition, Model, World};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("world index {0} out of range")]
    UnknownWorld(World),
}

/// Which one-step clauses the evaluator may use.
///
/// `forward` allows `<>a` to be read as "some ⊑-successor satisfies a" and
/// `downward` allows `[]a` to be read as "every ⊑-successor satisfies a".
/// Both are only sound when the model has the matching confluence.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Shortcuts {
    pub forward: bool,
    pub downward: bool,
}

impl Shortcuts {
    pub const NONE: Shortcuts = Shortcuts {
        forward: false,
        downward: false,
    };

    /// The shortcuts licensed by `m`'s frame conditions.
    pub fn for_model(m: &Model) -> Shortcuts {
        Shortcuts {
            forward: m.holds(Condition::Forward),
            downward: m.holds(Condition::Downward),
        }
    }
}

/// Truth vectors for every member of a subformula-closed set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruthTable {
    sets: Vec<Vec<bool>>,
}

impl TruthTable {
    /// Truth vector of the `i`-th member of the set it was built from.
    pub fn column(&self, i: usize) -> &[bool] {
        &self.sets[i]
    }

    pub fn holds(&self, i: usize, w: World) -> bool {
        self.sets[i][w]
    }
}

/// Evaluates every formula of `sigma` at every world. `sigma` must be closed
/// under subformulas.
pub fn truth_table(m: &Model, sigma: &SubformulaSet, shortcuts: Shortcuts) -> TruthTable {
    let n = m.len();
    let intuit = m.intuit();
    let modal = m.modal();
    let mut sets: Vec<Vec<bool>> = Vec::with_capacity(sigma.len());
    let col = |sets: &Vec<Vec<bool>>, f: &Formula| -> usize {
        let i = sigma
            .position(f)
            .expect("subformula set is not closed under subformulas");
        assert!(i < sets.len());
        i
    };
    for f in sigma.iter() {
        let v: Vec<bool> = match f {
            Formula::Var(name) => (0..n).map(|w| m.holds_var(name, w)).collect(),
            Formula::Falsum => m.fallible().to_vec(),
            Formula::And(a, b) => {
                let (a, b) = (col(&sets, a), col(&sets, b));
                (0..n).map(|w| sets[a][w] && sets[b][w]).collect()
            }
            Formula::Or(a, b) => {
                let (a, b) = (col(&sets, a), col(&sets, b));
                (0..n).map(|w| sets[a][w] || sets[b][w]).collect()
            }
            Formula::Implies(a, b) => {
                let (a, b) = (col(&sets, a), col(&sets, b));
                (0..n)
                    .map(|w| intuit.successors(w).all(|v| !sets[a][v] || sets[b][v]))
                    .collect()
            }
            Formula::Dia(a) => {
                let a = col(&sets, a);
                let reach: Vec<bool> = (0..n)
                    .map(|u| modal.successors(u).any(|v| sets[a][v]))
                    .collect();
                if shortcuts.forward {
                    reach
                } else {
                    (0..n)
                        .map(|w| intuit.successors(w).all(|u| reach[u]))
                        .collect()
                }
            }
            Formula::Box(a) => {
                let a = col(&sets, a);
                let every: Vec<bool> = (0..n)
                    .map(|u| modal.successors(u).all(|v| sets[a][v]))
                    .collect();
                if shortcuts.downward {
                    every
                } else {
                    (0..n)
                        .map(|w| intuit.successors(w).all(|u| every[u]))
                        .collect()
                }
            }
        };
        sets.push(v);
    }
    TruthTable { sets }
}

fn check_world(m: &Model, w: World) -> Result<(), EvalError> {
    if w < m.len() {
        Ok(())
    } else {
        Err(EvalError::UnknownWorld(w))
    }
}

/// Truth vector of `f` over all worlds.
pub fn extension(m: &Model, f: &Formula) -> Vec<bool> {
    let sigma = subformulas(f);
    let table = truth_table(m, &sigma, Shortcuts::NONE);
    table.column(sigma.len() - 1).to_vec()
}

/// `M, w ⊨ f` by the general clauses.
pub fn eval(m: &Model, w: World, f: &Formula) -> Result<bool, EvalError> {
    check_world(m, w)?;
    Ok(extension(m, f)[w])
}

/// `M, w ⊨ f` using the one-step modal clauses wherever `shortcuts` allow.
pub fn eval_with(
    m: &Model,
    w: World,
    f: &Formula,
    shortcuts: Shortcuts,
) -> Result<bool, EvalError> {
    check_world(m, w)?;
    let sigma = subformulas(f);
    let table = truth_table(m, &sigma, shortcuts);
    Ok(table.holds(sigma.len() - 1, w))
}

/// Like [`eval_with`], with the shortcuts decided from `m` itself.
pub fn eval_fast(m: &Model, w: World, f: &Formula) -> Result<bool, EvalError> {
    eval_with(m, w, f, Shortcuts::for_model(m))
}

/// First non-fallible world refuting `f`, if any.
pub fn falsifier(m: &Model, f: &Formula) -> Option<World> {
    let ext = extension(m, f);
    m.worlds().find(|&w| !m.is_fallible(w) && !ext[w])
}

/// `M ⊨ f`: every non-fallible world satisfies `f`.
pub fn model_valid(m: &Model, f: &Formula) -> bool {
    falsifier(m, f).is_none()
}

/// The Σ-label `(ℓ⁺(w); ℓ◇(w))` as membership vectors indexed like Σ.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SigmaLabel {
    pub pos: Vec<bool>,
    pub dia_blocked: Vec<bool>,
}

impl SigmaLabel {
    pub fn pos_formulas<'a>(&self, sigma: &'a SubformulaSet) -> Vec<&'a Formula> {
        members(&self.pos, sigma)
    }

    pub fn dia_blocked_formulas<'a>(&self, sigma: &'a SubformulaSet) -> Vec<&'a Formula> {
        members(&self.dia_blocked, sigma)
    }

    pub fn render(&self, sigma: &SubformulaSet) -> String {
        let show = |fs: Vec<&Formula>| fs.iter().map(|f| f.render()).collect::<Vec<_>>().join(", ");
        format!(
            "({{{}}}; {{{}}})",
            show(self.pos_formulas(sigma)),
            show(self.dia_blocked_formulas(sigma))
        )
    }
}

fn members<'a>(bits: &[bool], sigma: &'a SubformulaSet) -> Vec<&'a Formula> {
    bits.iter()
        .enumerate()
        .filter(|(_, b)| **b)
        .map(|(i, _)| sigma.get(i))
        .collect()
}

/// Σ-labels of all worlds.
pub fn labels(m: &Model, sigma: &SubformulaSet) -> Vec<SigmaLabel> {
    let table = truth_table(m, sigma, Shortcuts::NONE);
    m.worlds()
        .map(|w| SigmaLabel {
            pos: (0..sigma.len()).map(|i| table.holds(i, w)).collect(),
            dia_blocked: (0..sigma.len())
                .map(|i| m.modal().successors(w).all(|v| !table.holds(i, v)))
                .collect(),
        })
        .collect()
}

pub fn label(m: &Model, sigma: &SubformulaSet, w: World) -> Result<SigmaLabel, EvalError> {
    check_world(m, w)?;
    Ok(labels(m, sigma).swap_remove(w))
}
