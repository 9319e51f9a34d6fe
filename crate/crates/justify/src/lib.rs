//! An engine for tree-like justification frames over finite fact spaces.
//!
//! The crate builds and validates justification frames, complements rule
//! sets, computes supported values and models under the built-in supported
//! and Kripke-Kleene branch evaluations, constructs explanation witnesses
//! for a fact and its complement, and fuzzes the consistency property
//! `SV(~x, I) = ~SV(x, I)` on generated complementary frames.
//!
//! Modules, bottom up:
//!
//! - [`lattice`]: the three-valued lattice, signed facts, interpretations;
//! - [`frame`]: rules, frames, selection functions, complementation, the
//!   complementarity checker;
//! - [`justification`]: positional justifications, branch descriptors,
//!   branch evaluations;
//! - [`solver`]: supported values, the support operator, models,
//!   consistency sweeps;
//! - [`witness`]: prover/refuter strategies, dualization, witness pairs;
//! - [`parse`]: the rule-document language and interpretation files;
//! - [`generate`]: seeded frame generation and the consistency fuzzer.

pub mod frame;
pub mod generate;
pub mod justification;
pub mod lattice;
pub mod parse;
pub mod solver;
pub mod witness;

pub use frame::{
    check_complementarity, complement_rules, complementation, rule_intersection_check,
    FrameError, JustificationFrame, Rule, SelectionFunction, DEFAULT_SELECTION_CAP,
};
pub use generate::{fuzz_consistency, generate_random_frame, FuzzConfig, FuzzReport};
pub use justification::{
    enumerate_bounded_branches, eval_branch, jval_graph, verify_justification,
    BranchDescriptor, BranchEvaluation, Builtin, KripkeKleeneEval, PositionalJustification,
    SupportedEval,
};
pub use lattice::{
    truth_max, truth_min, AtomId, Fact, FactSpace, Interpretation, Sign, TruthValue,
};
pub use parse::{
    compile_document, document_from_frame, parse_interpretation, parse_rule_document,
    parse_rule_document_with, ParseOptions, RuleDocument,
};
pub use solver::{
    consistency_sweep, enumerate_models, is_model, support_operator, supported_value,
    supported_value_brute, supported_value_kk, supported_value_sp, RawValuation, SweepOptions,
};
pub use witness::{
    common_opposite_branch, dualize, extract_prover_strategy, extract_refuter_strategy,
    follow_refuter, witness_pair, RefuterStrategy, WitnessFormat, WitnessPair,
};
