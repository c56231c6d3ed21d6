//! Towers of twos, the quotient-size bound for shallow models, and
//! finitization by bisimulation quotient.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::bisim::{greatest, quotient, BisimKind, Partition, QuotientError};
use crate::formula::SubformulaSet;
use crate::kripke::{Condition, Logic, Model, Witness};

/// Largest number of bits [`Tower::materialize`] will produce by default.
pub const DEFAULT_THRESHOLD_BITS: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShallowError {
    #[error("value needs more than {threshold} bits")]
    ThresholdExceeded { threshold: u64 },
    #[error("arguments must be at least 1")]
    ZeroArgument,
}

/// `2^x_y`: a tower of `y` twos topped by `x`, so `2^x_0 = x` and
/// `2^x_{y+1} = 2^(2^x_y)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tower {
    pub base: BigUint,
    pub height: u32,
}

pub fn superexp(base: impl Into<BigUint>, height: u32) -> Tower {
    Tower {
        base: base.into(),
        height,
    }
}

impl Tower {
    pub fn materialize(&self) -> Result<BigUint, ShallowError> {
        self.materialize_within(DEFAULT_THRESHOLD_BITS)
    }

    pub fn materialize_within(&self, threshold_bits: u64) -> Result<BigUint, ShallowError> {
        let mut v = self.base.clone();
        if v.bits() > threshold_bits {
            return Err(ShallowError::ThresholdExceeded {
                threshold: threshold_bits,
            });
        }
        for _ in 0..self.height {
            // 2^v has v + 1 bits
            let shift = match v.to_u64() {
                Some(s) if s < threshold_bits => s,
                _ => {
                    return Err(ShallowError::ThresholdExceeded {
                        threshold: threshold_bits,
                    })
                }
            };
            v = BigUint::one() << shift;
        }
        Ok(v)
    }

    fn lower(&self) -> Tower {
        Tower {
            base: self.base.clone(),
            height: self.height - 1,
        }
    }
}

impl fmt::Display for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2^{}_{}", self.base, self.height)
    }
}

/// Decides `n ≤ 2^x_y` without building the tower.
///
/// For `y > 0`, `n ≤ 2^T` iff `n - 1 < 2^T` iff `bits(n - 1) ≤ T`, and the
/// bit length is exponentially smaller than `n`, so the recursion only ever
/// touches numbers no larger than `n`.
pub fn le_tower(n: &BigUint, t: &Tower) -> bool {
    if t.height == 0 {
        return *n <= t.base;
    }
    if n.is_zero() {
        return true;
    }
    let bits = BigUint::from((n - 1u32).bits());
    le_tower(&bits, &t.lower())
}

/// `2^m · 2_k^((n-1)m) ≤ 2_k^(nm)`, decided exactly.
///
/// The left side equals `2^(m + 2_(k-1)^((n-1)m))`, so only that exponent
/// is materialized and compared against `2_(k-1)^(nm)` with [`le_tower`].
pub fn check_superexp_inequality(m: u64, n: u64, k: u32) -> Result<bool, ShallowError> {
    if m == 0 || n == 0 || k == 0 {
        return Err(ShallowError::ZeroArgument);
    }
    let inner = superexp((n - 1) * m, k - 1).materialize()?;
    let exponent = inner + BigUint::from(m);
    Ok(le_tower(&exponent, &superexp(n * m, k - 1)))
}

/// Bound on the number of Σ-bisimulation classes of a model of height
/// `height` with `#Σ = sigma_size`: `2^(2(n+1)s)_(n+2)`.
pub fn bisim_bound(height: usize, sigma_size: usize) -> Tower {
    let base = 2 * (height as u64 + 1) * sigma_size as u64;
    superexp(base, height as u32 + 2)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FinitizeError {
    #[error("S4I finitization needs a forest-like model; predecessors of {0} are incomparable")]
    NotForestLike(String),
    #[error(transparent)]
    Quotient(#[from] QuotientError),
}

#[derive(Clone, Debug)]
pub struct Finitized {
    pub model: Model,
    pub partition: Partition,
    pub kind: BisimKind,
    pub bound: Tower,
    pub within_bound: bool,
}

/// Which bisimulation [`finitize`] quotients by.
pub fn kind_for(logic: Logic) -> BisimKind {
    match logic {
        Logic::S4I => BisimKind::Strong,
        _ => BisimKind::Plain,
    }
}

/// Quotients `m` by `∼_Σ`, or by `≈_Σ` for S4I (which requires a
/// forest-like model).
pub fn finitize(
    m: &Model,
    sigma: &SubformulaSet,
    logic: Logic,
) -> Result<Finitized, FinitizeError> {
    let kind = kind_for(logic);
    if kind == BisimKind::Strong {
        let check = m.check_condition(Condition::ForestLike);
        if let Some(Witness::Triple(w, _, _)) = check.witness {
            return Err(FinitizeError::NotForestLike(m.name(w).to_string()));
        }
    }
    finitize_with(m, sigma, kind)
}

pub fn finitize_with(
    m: &Model,
    sigma: &SubformulaSet,
    kind: BisimKind,
) -> Result<Finitized, FinitizeError> {
    let partition = greatest(m, sigma, kind);
    let model = quotient(m, &partition, sigma)?;
    let bound = bisim_bound(m.height(), sigma.len());
    let within_bound = le_tower(&BigUint::from(model.len()), &bound);
    Ok(Finitized {
        model,
        partition,
        kind,
        bound,
        within_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn superexp_values() {
        assert_eq!(superexp(3u32, 0).materialize().unwrap(), big(3));
        assert_eq!(superexp(1u32, 2).materialize().unwrap(), big(4));
        assert_eq!(superexp(2u32, 3).materialize().unwrap(), big(65536));
        assert_eq!(superexp(0u32, 1).materialize().unwrap(), big(1));
    }

    #[test]
    fn materialization_threshold() {
        let t = superexp(4u32, 3);
        let v = t.materialize().unwrap();
        assert_eq!(v.bits(), 65537);
        assert!(matches!(
            superexp(5u32, 3).materialize(),
            Err(ShallowError::ThresholdExceeded { .. })
        ));
        assert!(superexp(2u32, 3).materialize_within(16).is_err());
        assert!(superexp(2u32, 3).materialize_within(17).is_ok());
    }

    #[test]
    fn le_tower_examples() {
        assert!(le_tower(&big(16), &superexp(2u32, 2)));
        assert!(!le_tower(&big(17), &superexp(2u32, 2)));
        let googol = BigUint::from(10u32).pow(100);
        assert!(le_tower(&googol, &superexp(4u32, 3)));
        assert!(le_tower(&big(0), &superexp(0u32, 0)));
        assert!(!le_tower(&big(1), &superexp(0u32, 0)));
        assert!(le_tower(&big(1), &superexp(0u32, 1)));
        assert!(!le_tower(&big(2), &superexp(0u32, 1)));
    }

    #[test]
    fn le_tower_matches_materialized_comparison() {
        for base in 0u32..5 {
            for height in 0..4 {
                let t = superexp(base, height);
                let Ok(value) = t.materialize_within(1 << 12) else {
                    continue;
                };
                let limit = value.to_u64().unwrap_or(u64::MAX).min(70_000);
                for n in (0..=limit.saturating_add(3)).step_by(1 + limit as usize / 500) {
                    assert_eq!(le_tower(&big(n), &t), big(n) <= value, "{n} vs {t}");
                }
                assert!(le_tower(&value, &t));
                assert!(!le_tower(&(value + 1u32), &t));
            }
        }
    }

    #[test]
    fn inequality_examples() {
        assert!(check_superexp_inequality(1, 1, 1).unwrap());
        assert!(check_superexp_inequality(2, 2, 1).unwrap());
        assert!(check_superexp_inequality(2, 2, 2).unwrap());
        assert_eq!(
            check_superexp_inequality(0, 1, 1),
            Err(ShallowError::ZeroArgument)
        );
    }

    fn sig(s: &str) -> SubformulaSet {
        crate::formula::subformulas(&crate::formula::parse(s).unwrap())
    }

    fn disjoint_double(m: &Model) -> Model {
        let n = m.len();
        let double = |r: &crate::kripke::Relation| {
            crate::kripke::Relation::from_pairs(
                2 * n,
                r.pairs().flat_map(|(a, b)| [(a, b), (a + n, b + n)]),
            )
        };
        let names = (0..2 * n).map(|i| format!("c{i}")).collect();
        let twice = |v: &[bool]| v.iter().chain(v).copied().collect::<Vec<_>>();
        let valuation = m
            .valuation()
            .iter()
            .map(|(k, v)| (k.clone(), twice(v)))
            .collect();
        Model::from_parts(
            names,
            twice(m.fallible()),
            double(m.intuit()),
            double(m.modal()),
            valuation,
        )
        .unwrap()
    }

    #[test]
    fn fig1_quotient_merges_z_and_t() {
        let m = crate::kripke::fig1();
        let sigma = sig("[]p -> [][]p");
        let fin = finitize(&m, &sigma, Logic::CS4).unwrap();
        assert_eq!(fin.partition.render(&m), "{x} {y} {z t} {w}");
        assert!(fin.within_bound);
        // fig1 is neither backward nor downward confluent: the closed
        // quotient relation adds [y] ⊑ [w], so []p fails at [x] and the
        // implication becomes true there
        let x = m.world("x").unwrap();
        let f = crate::formula::parse("[]p -> [][]p").unwrap();
        assert!(!crate::semantics::eval(&m, x, &f).unwrap());
        assert!(crate::semantics::eval(&fin.model, fin.partition.class_of(x), &f).unwrap());
    }

    #[test]
    fn single_world_finitizes_to_itself() {
        let m = crate::kripke::RawModel::new(["a"]).validate().unwrap();
        for logic in Logic::ALL {
            let fin = finitize(&m, &sig("<>p -> []q"), logic).unwrap();
            assert_eq!(fin.model.len(), 1);
        }
    }

    #[test]
    fn disjoint_copies_collapse() {
        for seed in 0..30 {
            let m = crate::search::random_model_varied(Some(Logic::CS4), 6, 2, seed).unwrap();
            let sigma = sig("[](p | <>q) -> <>(q -> p)");
            let one = finitize(&m, &sigma, Logic::CS4).unwrap().model.len();
            let two = finitize(&disjoint_double(&m), &sigma, Logic::CS4).unwrap();
            assert!(two.model.len() <= one, "seed {seed}");
            assert!(two.model.in_class(Logic::CS4));
        }
    }

    #[test]
    fn s4i_needs_forest_like_models() {
        let zigzag = Model::from_text(
            "worlds: w0 v0 w1\nintuit: v0<=w0 v0<=w1\nmodal:\nfallible:\nval p: w0\n",
        )
        .unwrap();
        assert!(finitize(&zigzag, &sig("p"), Logic::S4I).is_ok());
        let join =
            Model::from_text("worlds: a b c\nintuit: a<=c b<=c\nmodal:\nfallible:\nval p: c\n")
                .unwrap();
        assert!(matches!(
            finitize(&join, &sig("p"), Logic::S4I),
            Err(FinitizeError::NotForestLike(_))
        ));
    }

    #[test]
    fn bound_examples() {
        assert_eq!(bisim_bound(0, 1), superexp(2u32, 2));
        assert_eq!(bisim_bound(0, 1).materialize().unwrap(), big(16));
        assert_eq!(bisim_bound(1, 1), superexp(4u32, 3));
        assert!(bisim_bound(1, 1).materialize().is_ok());
        assert_eq!(bisim_bound(2, 1), superexp(6u32, 4));
        assert!(bisim_bound(2, 1).materialize().is_err());
    }
}
