//! Hilbert-style proof checking.
//!
//! Intuitionistic tautologies are provided by the finite schema basis
//! `A1`-`A9`, which together with modus ponens is complete for intuitionistic
//! propositional logic. Schema patterns are ordinary formulas whose variables
//! (`phi`, `psi`, `chi`) act as metavariables.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::formula::{parse, Formula, ParseError};
use crate::kripke::Logic;

pub type Substitution = BTreeMap<String, Formula>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomSchema {
    pub name: &'static str,
    pub pattern: Formula,
}

impl AxiomSchema {
    fn new(name: &'static str, pattern: &str) -> Self {
        AxiomSchema {
            name,
            pattern: parse(pattern).expect("schema pattern parses"),
        }
    }

    pub fn metavariables(&self) -> Vec<String> {
        self.pattern.variables().into_iter().collect()
    }

    pub fn instantiate(&self, subst: &Substitution) -> Formula {
        self.pattern.substitute(subst)
    }
}

const SCHEMAS: &[(&str, &str)] = &[
    ("A1", "phi -> (psi -> phi)"),
    (
        "A2",
        "(phi -> (psi -> chi)) -> ((phi -> psi) -> (phi -> chi))",
    ),
    ("A3", "phi -> (psi -> (phi & psi))"),
    ("A4", "(phi & psi) -> phi"),
    ("A5", "(phi & psi) -> psi"),
    ("A6", "phi -> (phi | psi)"),
    ("A7", "psi -> (phi | psi)"),
    (
        "A8",
        "(phi -> chi) -> ((psi -> chi) -> ((phi | psi) -> chi))",
    ),
    ("A9", "false -> phi"),
    ("KBOX", "[](phi -> psi) -> ([]phi -> []psi)"),
    ("KDIA", "[](phi -> psi) -> (<>phi -> <>psi)"),
    ("TBOX", "[]phi -> phi"),
    ("TDIA", "phi -> <>phi"),
    ("4BOX", "[]phi -> [][]phi"),
    ("4DIA", "<><>phi -> <>phi"),
    ("DP", "<>(phi | psi) -> <>phi | <>psi"),
    ("GD", "(phi -> psi) | (psi -> phi)"),
    ("CD", "[](phi | psi) -> []phi | <>psi"),
    ("N", "<>false -> false"),
    ("FS", "(<>phi -> []psi) -> [](phi -> psi)"),
];

const CS4_AXIOMS: &[&str] = &[
    "A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "A9", "KBOX", "KDIA", "TBOX", "TDIA", "4BOX",
    "4DIA",
];

/// Every axiom schema known to the checker.
pub fn catalog() -> &'static [AxiomSchema] {
    static CATALOG: OnceLock<Vec<AxiomSchema>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        SCHEMAS
            .iter()
            .map(|(name, pat)| AxiomSchema::new(name, pat))
            .collect()
    })
}

pub fn schema(name: &str) -> Option<&'static AxiomSchema> {
    catalog().iter().find(|s| s.name == name)
}

/// Axiom names available in `logic`'s calculus.
pub fn axiom_names(logic: Logic) -> Vec<&'static str> {
    let mut names = CS4_AXIOMS.to_vec();
    match logic {
        Logic::CS4 => {}
        Logic::IS4 => names.extend(["FS", "DP", "N"]),
        Logic::S4I => names.extend(["DP", "N", "CD"]),
        Logic::GS4 => names.extend(["FS", "DP", "N", "GD"]),
    }
    names
}

pub fn axioms(logic: Logic) -> Vec<&'static AxiomSchema> {
    axiom_names(logic)
        .into_iter()
        .map(|n| schema(n).expect("catalog entry"))
        .collect()
}

/// Formulas derivable in CS4 that are not axioms of it.
pub fn cs4_derived() -> &'static [AxiomSchema] {
    static DERIVED: OnceLock<Vec<AxiomSchema>> = OnceLock::new();
    DERIVED.get_or_init(|| {
        vec![
            AxiomSchema::new("DIA_IMP", "<>(phi -> psi) -> ([]phi -> <>psi)"),
            AxiomSchema::new("DIA_AND", "<>(phi & psi) -> <>phi & <>psi"),
            AxiomSchema::new("BOX_OR", "[]phi | []psi -> [](phi | psi)"),
        ]
    })
}

/// Structural matching with metavariables on the pattern side only.
pub fn match_pattern(pattern: &Formula, f: &Formula) -> Option<Substitution> {
    let mut subst = Substitution::new();
    if unify(pattern, f, &mut subst) {
        Some(subst)
    } else {
        None
    }
}

fn unify(pattern: &Formula, f: &Formula, subst: &mut Substitution) -> bool {
    match (pattern, f) {
        (Formula::Var(meta), _) => match subst.get(meta) {
            Some(bound) => bound == f,
            None => {
                subst.insert(meta.clone(), f.clone());
                true
            }
        },
        (Formula::Falsum, Formula::Falsum) => true,
        (Formula::And(a, b), Formula::And(c, d))
        | (Formula::Or(a, b), Formula::Or(c, d))
        | (Formula::Implies(a, b), Formula::Implies(c, d)) => {
            unify(a, c, subst) && unify(b, d, subst)
        }
        (Formula::Dia(a), Formula::Dia(c)) | (Formula::Box(a), Formula::Box(c)) => {
            unify(a, c, subst)
        }
        _ => false,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown axiom schema `{0}`")]
pub struct UnknownSchema(pub String);

pub fn match_axiom(name: &str, f: &Formula) -> Result<Option<Substitution>, UnknownSchema> {
    let s = schema(name).ok_or_else(|| UnknownSchema(name.to_string()))?;
    Ok(match_pattern(&s.pattern, f))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    Axiom(String),
    /// Indices (1-based) of the implication and of its antecedent.
    Mp(usize, usize),
    Nec(usize),
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Axiom(name) => write!(f, "axiom {name}"),
            Justification::Mp(i, j) => write!(f, "mp {i} {j}"),
            Justification::Nec(i) => write!(f, "nec {i}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofLine {
    pub formula: Formula,
    pub justification: Justification,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Proof {
    pub lines: Vec<ProofLine>,
}

impl Proof {
    pub fn push(&mut self, formula: Formula, justification: Justification) -> usize {
        self.lines.push(ProofLine {
            formula,
            justification,
        });
        self.lines.len()
    }

    pub fn conclusion(&self) -> Option<&Formula> {
        self.lines.last().map(|l| &l.formula)
    }

    pub fn to_text(&self) -> String {
        self.lines
            .iter()
            .enumerate()
            .map(|(i, l)| format!("{}. {} ; {}\n", i + 1, l.formula, l.justification))
            .collect()
    }

    pub fn from_text(text: &str) -> Result<Proof, ProofParseError> {
        parse_proof(text)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Formula { line: usize, source: ParseError },
}

/// Reads `<n>. <formula> ; axiom NAME | mp i j | nec i` lines; blank lines
/// and `#` comments are skipped, and step numbers must run 1, 2, 3, ...
pub fn parse_proof(text: &str) -> Result<Proof, ProofParseError> {
    let mut proof = Proof::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |message: String| ProofParseError::Syntax { line, message };
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (num, rest) = content
            .split_once('.')
            .ok_or_else(|| err("expected `<n>.`".into()))?;
        let num: usize = num
            .trim()
            .parse()
            .map_err(|_| err(format!("bad step number `{}`", num.trim())))?;
        if num != proof.lines.len() + 1 {
            return Err(err(format!(
                "expected step {}, found {num}",
                proof.lines.len() + 1
            )));
        }
        let (formula, just) = rest
            .rsplit_once(';')
            .ok_or_else(|| err("expected `; <justification>`".into()))?;
        let formula =
            parse(formula.trim()).map_err(|source| ProofParseError::Formula { line, source })?;
        let words: Vec<&str> = just.split_whitespace().collect();
        let index = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| err(format!("bad line reference `{s}`")))
        };
        let justification = match words.as_slice() {
            ["axiom", name] => Justification::Axiom(name.to_string()),
            ["mp", a, b] => Justification::Mp(index(a)?, index(b)?),
            ["nec", a] => Justification::Nec(index(a)?),
            _ => return Err(err(format!("bad justification `{}`", just.trim()))),
        };
        proof.push(formula, justification);
    }
    Ok(proof)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rejection {
    UnknownAxiom(String),
    AxiomNotInLogic(String, Logic),
    NotAnInstance(String),
    BadReference(usize),
    MpMismatch(usize, usize),
    NecMismatch(usize),
    EmptyProof,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::UnknownAxiom(n) => write!(f, "unknown axiom {n}"),
            Rejection::AxiomNotInLogic(n, l) => write!(f, "axiom {n} is not available in {l}"),
            Rejection::NotAnInstance(n) => write!(f, "formula is not an instance of {n}"),
            Rejection::BadReference(i) => write!(f, "reference to line {i} is not an earlier line"),
            Rejection::MpMismatch(i, j) => {
                write!(
                    f,
                    "lines {i} and {j} do not yield this formula by modus ponens"
                )
            }
            Rejection::NecMismatch(i) => {
                write!(f, "formula is not the necessitation of line {i}")
            }
            Rejection::EmptyProof => write!(f, "proof has no lines"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accepted,
    /// First failing line (1-based) and why.
    Rejected {
        line: usize,
        reason: Rejection,
    },
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accepted)
    }
}

/// Checks every line in order against `logic`'s axioms, modus ponens and
/// necessitation.
pub fn check_proof(logic: Logic, proof: &Proof) -> Verdict {
    if proof.lines.is_empty() {
        return Verdict::Rejected {
            line: 0,
            reason: Rejection::EmptyProof,
        };
    }
    let available = axiom_names(logic);
    for (idx, line) in proof.lines.iter().enumerate() {
        let number = idx + 1;
        let earlier = |i: usize| -> Result<&Formula, Rejection> {
            if i >= 1 && i < number {
                Ok(&proof.lines[i - 1].formula)
            } else {
                Err(Rejection::BadReference(i))
            }
        };
        let outcome = match &line.justification {
            Justification::Axiom(name) => match schema(name) {
                None => Err(Rejection::UnknownAxiom(name.clone())),
                Some(_) if !available.contains(&name.as_str()) => {
                    Err(Rejection::AxiomNotInLogic(name.clone(), logic))
                }
                Some(s) => match_pattern(&s.pattern, &line.formula)
                    .map(|_| ())
                    .ok_or_else(|| Rejection::NotAnInstance(name.clone())),
            },
            Justification::Mp(i, j) => earlier(*i).and_then(|a| {
                let b = earlier(*j)?;
                let fits = |major: &Formula, minor: &Formula| {
                    matches!(major, Formula::Implies(ante, cons)
                        if **ante == *minor && **cons == line.formula)
                };
                if fits(a, b) || fits(b, a) {
                    Ok(())
                } else {
                    Err(Rejection::MpMismatch(*i, *j))
                }
            }),
            Justification::Nec(i) => earlier(*i).and_then(|a| match &line.formula {
                Formula::Box(body) if **body == *a => Ok(()),
                _ => Err(Rejection::NecMismatch(*i)),
            }),
        };
        if let Err(reason) = outcome {
            return Verdict::Rejected {
                line: number,
                reason,
            };
        }
    }
    Verdict::Accepted
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn catalog_is_complete() {
        assert_eq!(catalog().len(), 20);
        assert_eq!(axiom_names(Logic::CS4).len(), 15);
        assert_eq!(axiom_names(Logic::GS4).len(), 19);
        assert_eq!(
            schema("N").unwrap().pattern,
            Formula::not(Formula::dia(Formula::Falsum))
        );
    }

    #[test]
    fn match_examples() {
        let s = match_axiom("TBOX", &f("[]p -> p")).unwrap().unwrap();
        assert_eq!(s["phi"], f("p"));
        assert_eq!(match_axiom("TDIA", &f("<>p -> p")).unwrap(), None);
        let s = match_axiom("4DIA", &f("<><>(p & q) -> <>(p & q)"))
            .unwrap()
            .unwrap();
        assert_eq!(s["phi"], f("p & q"));
        assert!(match_axiom("4DIA", &f("<><>(p & q) -> <>(q & p)"))
            .unwrap()
            .is_none());
        assert!(match_axiom("K9", &f("p")).is_err());
        assert!(match_axiom("N", &f("~<>false")).unwrap().is_some());
    }

    #[test]
    fn instances_match_their_schema() {
        for s in catalog() {
            let mut sub = Substitution::new();
            for (i, m) in s.metavariables().into_iter().enumerate() {
                sub.insert(m, f(["[]a", "b | <>c", "a -> false"][i]));
            }
            let inst = s.instantiate(&sub);
            assert!(match_pattern(&s.pattern, &inst).is_some(), "{}", s.name);
        }
    }

    #[test]
    fn accepts_a1_with_necessitation() {
        let p = parse_proof("1. p -> (q -> p) ; axiom A1\n2. [](p -> (q -> p)) ; nec 1\n").unwrap();
        assert_eq!(check_proof(Logic::CS4, &p), Verdict::Accepted);
    }

    #[test]
    fn rejects_non_instance() {
        let p = parse_proof("1. <>p -> p ; axiom TDIA").unwrap();
        assert_eq!(
            check_proof(Logic::CS4, &p),
            Verdict::Rejected {
                line: 1,
                reason: Rejection::NotAnInstance("TDIA".into())
            }
        );
    }

    #[test]
    fn mp_needs_both_premises() {
        let p = parse_proof("1. []p -> p ; axiom TBOX\n2. p ; mp 1 1\n").unwrap();
        assert!(matches!(
            check_proof(Logic::CS4, &p),
            Verdict::Rejected { line: 2, .. }
        ));
        let p = parse_proof("1. []p -> p ; axiom TBOX\n2. p ; mp 1 2\n").unwrap();
        assert_eq!(
            check_proof(Logic::CS4, &p),
            Verdict::Rejected {
                line: 2,
                reason: Rejection::BadReference(2)
            }
        );
    }

    #[test]
    fn identity_from_a1_a2() {
        let text = "\
1. p -> ((p -> p) -> p) ; axiom A1
2. (p -> ((p -> p) -> p)) -> ((p -> (p -> p)) -> (p -> p)) ; axiom A2
3. (p -> (p -> p)) -> (p -> p) ; mp 2 1
4. p -> (p -> p) ; axiom A1
5. p -> p ; mp 3 4
";
        let p = parse_proof(text).unwrap();
        assert_eq!(check_proof(Logic::CS4, &p), Verdict::Accepted);
        assert_eq!(p.conclusion(), Some(&f("p -> p")));
        assert_eq!(parse_proof(&p.to_text()).unwrap(), p);
    }

    #[test]
    fn axiom_availability_follows_the_logic() {
        let p = parse_proof("1. (<>p -> []q) -> [](p -> q) ; axiom FS").unwrap();
        assert!(matches!(
            check_proof(Logic::CS4, &p),
            Verdict::Rejected {
                reason: Rejection::AxiomNotInLogic(..),
                ..
            }
        ));
        assert!(!check_proof(Logic::S4I, &p).is_accepted());
        assert!(check_proof(Logic::IS4, &p).is_accepted());
        assert!(check_proof(Logic::GS4, &p).is_accepted());
    }

    #[test]
    fn parse_errors() {
        assert!(parse_proof("2. p ; axiom A1").is_err());
        assert!(parse_proof("1. p axiom A1").is_err());
        assert!(parse_proof("1. p ; lemma").is_err());
        assert!(parse_proof("1. p -> ; axiom A1").is_err());
        assert!(parse_proof("1. p ; mp x 1").is_err());
        assert_eq!(
            check_proof(Logic::CS4, &Proof::default()),
            Verdict::Rejected {
                line: 0,
                reason: Rejection::EmptyProof
            }
        );
    }
}
