//! Command-line front end.
//!
//! Exit codes: 0 answered, 1 negative finding, 2 usage or input error,
//! 3 budget exhausted.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;

use crate::bisim::{greatest, quotient, BisimKind};
use crate::formula::{parse, subformulas, Formula, SubformulaSet};
use crate::hilbert::{check_proof, parse_proof, Verdict};
use crate::kripke::{Condition, Logic, Model};
use crate::search::{
    check_validity_upto, exhaustive_countermodel, find_countermodel, random_model, soundness_suite,
    GenParams, SearchBudget, SearchOutcome,
};
use crate::semantics::{eval, eval_fast, falsifier};
use crate::shallow::{bisim_bound, finitize, le_tower};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "cs4kit",
    version,
    about = "Constructive S4 model checking toolkit"
)]
pub struct Cli {
    /// Machine-readable `TAG value` lines.
    #[arg(long, global = true)]
    pub tagged: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct ModelArg {
    #[arg(long)]
    pub model: PathBuf,
}

#[derive(Args, Debug)]
pub struct SigmaArg {
    /// Formula whose subformula closure is Σ.
    #[arg(long)]
    pub sigma: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Truth of a formula at a world.
    Eval {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        world: String,
        #[arg(long)]
        formula: String,
        /// Use the one-step modal clauses where the frame allows it.
        #[arg(long)]
        fast: bool,
    },
    /// Truth of a formula at every non-fallible world.
    Validity {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        formula: String,
    },
    /// Frame conditions and frame classes.
    Classify {
        #[command(flatten)]
        model: ModelArg,
    },
    /// Height of the model and of each world.
    Height {
        #[command(flatten)]
        model: ModelArg,
    },
    /// Quotient by the greatest Σ-bisimulation.
    Quotient {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        sigma: SigmaArg,
        /// Use the strong bisimulation.
        #[arg(long)]
        strong: bool,
    },
    /// Quotient with the bisimulation suited to a logic, plus the size bound.
    Finitize {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        sigma: SigmaArg,
        #[arg(long)]
        logic: Logic,
    },
    /// Size bound for the quotient and whether the actual quotient meets it.
    Bound {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        sigma: SigmaArg,
        #[arg(long)]
        strong: bool,
    },
    /// Bounded search for a countermodel.
    Countermodel {
        #[arg(long)]
        logic: Logic,
        #[arg(long)]
        formula: String,
        #[arg(long, default_value_t = 3)]
        max_worlds: usize,
        #[arg(long)]
        max_candidates: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Validity on every model of the class up to a size.
    Exhaustive {
        #[arg(long)]
        logic: Logic,
        #[arg(long)]
        formula: String,
        #[arg(long, default_value_t = 3)]
        max_worlds: usize,
    },
    /// Random-instance check of a logic's axioms on random models.
    Soundness {
        #[arg(long)]
        logic: Logic,
        #[arg(long, default_value_t = 200)]
        models: usize,
        #[arg(long, default_value_t = 5)]
        instances: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Checks a Hilbert proof file.
    ProofCheck {
        #[arg(long)]
        logic: Logic,
        #[arg(long)]
        proof: PathBuf,
    },
    /// Prints a random model.
    Gen {
        #[arg(long, default_value_t = 5)]
        size: usize,
        #[arg(long)]
        logic: Option<Logic>,
        #[arg(long, default_value_t = 0.3)]
        density: f64,
        #[arg(long, default_value_t = 2)]
        vars: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

struct Out {
    tagged: bool,
    text: String,
}

impl Out {
    /// Emits `TAG value` in tagged mode and `human` otherwise.
    fn line(&mut self, tag: &str, value: impl AsRef<str>, human: impl AsRef<str>) {
        if self.tagged {
            self.text.push_str(&format!("{tag} {}\n", value.as_ref()));
        } else {
            self.text.push_str(human.as_ref());
            self.text.push('\n');
        }
    }

    fn model(&mut self, m: &Model) {
        for l in m.to_text().lines() {
            self.line("MODEL", l, l);
        }
    }
}

struct Failure(i32, String);

fn input_error(msg: impl std::fmt::Display) -> Failure {
    Failure(EXIT_USAGE, format!("error: {msg}\n"))
}

fn load_model(arg: &ModelArg) -> Result<Model, Failure> {
    let text = fs::read_to_string(&arg.model)
        .map_err(|e| input_error(format!("{}: {e}", arg.model.display())))?;
    Model::from_text(&text).map_err(|e| input_error(format!("{}: {e}", arg.model.display())))
}

fn load_formula(s: &str) -> Result<Formula, Failure> {
    parse(s).map_err(|e| input_error(format!("formula {s:?}: {e}")))
}

fn load_sigma(arg: &SigmaArg) -> Result<SubformulaSet, Failure> {
    Ok(subformulas(&load_formula(&arg.sigma)?))
}

fn world(m: &Model, name: &str) -> Result<usize, Failure> {
    m.world(name)
        .ok_or_else(|| input_error(format!("unknown world {name}")))
}

fn yes(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the exit code and everything that would be printed.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return (code, e.to_string());
        }
    };
    run_cli(&cli)
}

pub fn run_cli(cli: &Cli) -> (i32, String) {
    let mut out = Out {
        tagged: cli.tagged,
        text: String::new(),
    };
    match dispatch(&cli.command, &mut out) {
        Ok(code) => (code, out.text),
        Err(Failure(code, msg)) => (code, out.text + &msg),
    }
}

fn dispatch(cmd: &Command, out: &mut Out) -> Result<i32, Failure> {
    match cmd {
        Command::Eval {
            model,
            world: w,
            formula,
            fast,
        } => {
            let m = load_model(model)?;
            let w = world(&m, w)?;
            let f = load_formula(formula)?;
            let v = if *fast {
                eval_fast(&m, w, &f)
            } else {
                eval(&m, w, &f)
            }
            .map_err(input_error)?;
            out.line("VALUE", yes(v), yes(v));
            Ok(if v { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Validity { model, formula } => {
            let m = load_model(model)?;
            let f = load_formula(formula)?;
            match falsifier(&m, &f) {
                None => {
                    out.line("VALID", "true", "valid");
                    Ok(EXIT_OK)
                }
                Some(w) => {
                    out.line("VALID", "false", "not valid");
                    out.line("FALSIFIER", m.name(w), format!("refuted at {}", m.name(w)));
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Command::Classify { model } => {
            let m = load_model(model)?;
            let report = m.classify();
            for cond in Condition::ALL {
                let res = m.check_condition(cond);
                let mut value = yes(res.holds).to_string();
                if let Some(wit) = &res.witness {
                    value.push_str(&format!(" witness {}", wit.describe(&m)));
                }
                out.line(
                    "FLAG",
                    format!("{} {value}", cond.name()),
                    format!("{}: {value}", cond.name()),
                );
            }
            let classes = report.classes_string();
            out.line("CLASSES", &classes, format!("classes: {classes}"));
            Ok(EXIT_OK)
        }
        Command::Height { model } => {
            let m = load_model(model)?;
            let h = m.height();
            out.line("HEIGHT", h.to_string(), format!("height: {h}"));
            for w in m.worlds() {
                let hw = m.world_height(w);
                out.line(
                    "WORLD_HEIGHT",
                    format!("{} {hw}", m.name(w)),
                    format!("  {}: {hw}", m.name(w)),
                );
            }
            Ok(EXIT_OK)
        }
        Command::Quotient {
            model,
            sigma,
            strong,
        } => {
            let m = load_model(model)?;
            let sigma = load_sigma(sigma)?;
            let kind = if *strong {
                BisimKind::Strong
            } else {
                BisimKind::Plain
            };
            let part = greatest(&m, &sigma, kind);
            let q = quotient(&m, &part, &sigma).map_err(input_error)?;
            let classes = part.render(&m);
            out.line("CLASSES", &classes, format!("classes: {classes}"));
            out.line("SIZE", q.len().to_string(), format!("size: {}", q.len()));
            out.model(&q);
            Ok(EXIT_OK)
        }
        Command::Finitize {
            model,
            sigma,
            logic,
        } => {
            let m = load_model(model)?;
            let sigma = load_sigma(sigma)?;
            let fin = finitize(&m, &sigma, *logic).map_err(input_error)?;
            let classes = fin.partition.render(&m);
            out.line("CLASSES", &classes, format!("classes: {classes}"));
            out.line(
                "SIZE",
                fin.model.len().to_string(),
                format!("size: {}", fin.model.len()),
            );
            out.line(
                "BOUND",
                fin.bound.to_string(),
                format!("bound: {}", fin.bound),
            );
            out.line(
                "WITHIN_BOUND",
                yes(fin.within_bound),
                format!("within bound: {}", yes(fin.within_bound)),
            );
            out.model(&fin.model);
            Ok(if fin.within_bound {
                EXIT_OK
            } else {
                EXIT_NEGATIVE
            })
        }
        Command::Bound {
            model,
            sigma,
            strong,
        } => {
            let m = load_model(model)?;
            let sigma = load_sigma(sigma)?;
            let kind = if *strong {
                BisimKind::Strong
            } else {
                BisimKind::Plain
            };
            let classes = greatest(&m, &sigma, kind).len();
            let bound = bisim_bound(m.height(), sigma.len());
            let ok = le_tower(&BigUint::from(classes), &bound);
            out.line(
                "HEIGHT",
                m.height().to_string(),
                format!("height: {}", m.height()),
            );
            out.line(
                "SIGMA",
                sigma.len().to_string(),
                format!("|sigma|: {}", sigma.len()),
            );
            out.line("BOUND", bound.to_string(), format!("bound: {bound}"));
            out.line(
                "SIZE",
                classes.to_string(),
                format!("quotient size: {classes}"),
            );
            out.line(
                "WITHIN_BOUND",
                yes(ok),
                format!("within bound: {}", yes(ok)),
            );
            Ok(if ok { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Countermodel {
            logic,
            formula,
            max_worlds,
            max_candidates,
            seed,
        } => {
            let f = load_formula(formula)?;
            let mut budget = SearchBudget::worlds(*max_worlds);
            budget.seed = *seed;
            if let Some(c) = max_candidates {
                budget.max_candidates = *c;
            }
            match find_countermodel(&f, *logic, &budget) {
                SearchOutcome::Found { model, world } => {
                    out.line("RESULT", "countermodel", "countermodel found");
                    out.model(&model);
                    out.line(
                        "WORLD",
                        model.name(world),
                        format!("falsified at {}", model.name(world)),
                    );
                    Ok(EXIT_NEGATIVE)
                }
                SearchOutcome::NoneFound { candidates } => {
                    out.line(
                        "RESULT",
                        format!("none {candidates}"),
                        format!("no countermodel with at most {max_worlds} worlds ({candidates} candidates)"),
                    );
                    Ok(EXIT_OK)
                }
                SearchOutcome::BudgetExhausted { candidates } => {
                    out.line(
                        "RESULT",
                        format!("budget {candidates}"),
                        format!("budget exhausted after {candidates} candidates"),
                    );
                    Ok(EXIT_BUDGET)
                }
            }
        }
        Command::Exhaustive {
            logic,
            formula,
            max_worlds,
        } => {
            let f = load_formula(formula)?;
            match exhaustive_countermodel(&f, *logic, *max_worlds) {
                None => {
                    debug_assert!(check_validity_upto(&f, *logic, *max_worlds));
                    out.line(
                        "VALID",
                        "true",
                        format!("valid on all {logic} models with at most {max_worlds} worlds"),
                    );
                    Ok(EXIT_OK)
                }
                Some((model, world)) => {
                    out.line("VALID", "false", "not valid");
                    out.model(&model);
                    out.line(
                        "WORLD",
                        model.name(world),
                        format!("falsified at {}", model.name(world)),
                    );
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Command::Soundness {
            logic,
            models,
            instances,
            seed,
        } => {
            let report = soundness_suite(*logic, *models, *instances, *seed);
            out.text.push_str(&report.to_tagged());
            Ok(if report.is_clean() {
                EXIT_OK
            } else {
                EXIT_NEGATIVE
            })
        }
        Command::ProofCheck { logic, proof } => {
            let text = fs::read_to_string(proof)
                .map_err(|e| input_error(format!("{}: {e}", proof.display())))?;
            let p =
                parse_proof(&text).map_err(|e| input_error(format!("{}: {e}", proof.display())))?;
            match check_proof(*logic, &p) {
                Verdict::Accepted => {
                    let c = p.conclusion().map(|c| c.to_string()).unwrap_or_default();
                    out.line("ACCEPTED", &c, format!("accepted: {c}"));
                    Ok(EXIT_OK)
                }
                Verdict::Rejected { line, reason } => {
                    out.line(
                        "REJECTED",
                        format!("{line} {reason}"),
                        format!("rejected at line {line}: {reason}"),
                    );
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Command::Gen {
            size,
            logic,
            density,
            vars,
            seed,
        } => {
            let gp = GenParams {
                size: *size,
                edge_density: *density,
                variable_count: *vars,
                logic: *logic,
                seed: *seed,
            };
            let m = random_model(&gp).map_err(input_error)?;
            out.model(&m);
            Ok(EXIT_OK)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(["cs4kit"]).0, EXIT_USAGE);
        assert_eq!(run(["cs4kit", "frobnicate"]).0, EXIT_USAGE);
        assert_eq!(
            run(["cs4kit", "exhaustive", "--logic", "K", "--formula", "p"]).0,
            EXIT_USAGE
        );
        let (code, text) = run(["cs4kit", "exhaustive", "--logic", "CS4", "--formula", "p &"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(text.starts_with("error: formula"));
    }

    #[test]
    fn missing_model_file() {
        let (code, _) = run(["cs4kit", "classify", "--model", "/nonexistent/m.km"]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn gen_output_round_trips() {
        let (code, text) = run([
            "cs4kit", "gen", "--size", "6", "--logic", "IS4", "--seed", "3",
        ]);
        assert_eq!(code, EXIT_OK);
        let m = Model::from_text(&text).unwrap();
        assert!(m.in_class(Logic::IS4));
    }

    #[test]
    fn exhaustive_and_budget_codes() {
        let gd = "(p->q)|(q->p)";
        let args = [
            "cs4kit",
            "exhaustive",
            "--logic",
            "GS4",
            "--formula",
            gd,
            "--max-worlds",
            "2",
        ];
        assert_eq!(run(args).0, EXIT_OK);
        let args = [
            "cs4kit",
            "countermodel",
            "--logic",
            "IS4",
            "--formula",
            gd,
            "--max-candidates",
            "1",
        ];
        assert_eq!(run(args).0, EXIT_BUDGET);
    }
}
