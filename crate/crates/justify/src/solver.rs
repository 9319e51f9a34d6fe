//! Supported values, the support operator, models, and consistency sweeps
//! for the built-in branch evaluations.
//!
//! The supported evaluation admits a closed form per fact. The Kripke-Kleene
//! value is computed from two fixpoint regions: the least region whose facts
//! can be forced true through finite derivations, and the greatest region
//! whose facts can avoid false open facts forever. Both are certified
//! against the brute-force enumeration oracle by the test suites.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::ControlFlow;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::frame::JustificationFrame;
use crate::justification::{
    for_each_justification, jval_graph, Builtin, BranchEvaluation, EnumerationCapacity,
};
use crate::lattice::{truth_max, truth_min, Fact, Interpretation, TruthValue};
use crate::parse::document_from_frame;

/// Default cap on brute-force strategy enumeration.
pub const DEFAULT_STRATEGY_CAP: u64 = 10_000_000;
/// Default cap on the number of positive atoms for model enumeration.
pub const DEFAULT_MODEL_ATOM_CAP: u32 = 12;
/// Default cap on exhaustive interpretation sweeps: 3^12.
pub const DEFAULT_EXHAUSTIVE_CAP: u64 = 531_441;

/// A valuation of the defined facts with no involution constraint imposed.
/// This is the raw codomain of the support operator; on inconsistent systems
/// it can assign `t` to both signs of an atom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawValuation(BTreeMap<Fact, TruthValue>);

impl RawValuation {
    pub fn get(&self, fact: Fact) -> Option<TruthValue> {
        self.0.get(&fact).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Fact, TruthValue)> + '_ {
        self.0.iter().map(|(&f, &v)| (f, v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Positive facts whose value disagrees with the negation of their
    /// complement's value. Empty iff the valuation factors through an
    /// interpretation.
    pub fn involution_violations(&self) -> Vec<Fact> {
        self.0
            .keys()
            .filter(|f| f.is_positive_atom())
            .filter(|&&f| {
                let v = self.0[&f];
                self.0.get(&f.complement()) != Some(&v.negate())
            })
            .copied()
            .collect()
    }

    pub fn is_involution_compatible(&self) -> bool {
        self.involution_violations().is_empty()
    }
}

/// The two Kripke-Kleene fixpoint regions with their iteration ranks.
///
/// `true_rank` maps facts of the least forced-true region to the stage at
/// which they entered; `exit_rank` maps facts outside the greatest nonfalse
/// region to the stage at which they were removed.
#[derive(Debug, Clone)]
pub struct KkRegions {
    true_rank: BTreeMap<Fact, u32>,
    exit_rank: BTreeMap<Fact, u32>,
    safe: BTreeSet<Fact>,
}

impl KkRegions {
    pub fn in_true_region(&self, fact: Fact) -> bool {
        self.true_rank.contains_key(&fact)
    }

    pub fn true_rank(&self, fact: Fact) -> Option<u32> {
        self.true_rank.get(&fact).copied()
    }

    pub fn in_safe_region(&self, fact: Fact) -> bool {
        self.safe.contains(&fact)
    }

    pub fn exit_rank(&self, fact: Fact) -> Option<u32> {
        self.exit_rank.get(&fact).copied()
    }

    pub fn value(&self, fact: Fact) -> TruthValue {
        if self.in_true_region(fact) {
            TruthValue::True
        } else if self.in_safe_region(fact) {
            TruthValue::Unknown
        } else {
            TruthValue::False
        }
    }
}

/// Computes both Kripke-Kleene regions for a frame under an interpretation.
pub fn kk_regions(frame: &JustificationFrame, interp: &Interpretation) -> KkRegions {
    let defined = frame.defined_facts();

    let mut true_rank: BTreeMap<Fact, u32> = BTreeMap::new();
    let mut stage = 0u32;
    loop {
        stage += 1;
        let added: Vec<Fact> = defined
            .iter()
            .copied()
            .filter(|z| !true_rank.contains_key(z))
            .filter(|&z| {
                frame.cases(z).expect("defined fact").iter().any(|case| {
                    case.iter().all(|&y| {
                        if frame.is_defined(y) {
                            true_rank.contains_key(&y)
                        } else {
                            interp.value(y) == TruthValue::True
                        }
                    })
                })
            })
            .collect();
        if added.is_empty() {
            break;
        }
        for z in added {
            true_rank.insert(z, stage);
        }
    }

    let mut safe: BTreeSet<Fact> = defined.iter().copied().collect();
    let mut exit_rank: BTreeMap<Fact, u32> = BTreeMap::new();
    let mut stage = 0u32;
    loop {
        stage += 1;
        let removed: Vec<Fact> = safe
            .iter()
            .copied()
            .filter(|&z| {
                !frame.cases(z).expect("defined fact").iter().any(|case| {
                    case.iter().all(|&y| {
                        if frame.is_defined(y) {
                            safe.contains(&y)
                        } else {
                            interp.value(y) != TruthValue::False
                        }
                    })
                })
            })
            .collect();
        if removed.is_empty() {
            break;
        }
        for z in removed {
            safe.remove(&z);
            exit_rank.insert(z, stage);
        }
    }

    KkRegions {
        true_rank,
        exit_rank,
        safe,
    }
}

/// Supported value under the supported evaluation, in closed form:
/// `max` over the cases of `x` of the `min` of the body values.
/// Open facts evaluate to their interpretation value.
pub fn supported_value_sp(
    frame: &JustificationFrame,
    interp: &Interpretation,
    fact: Fact,
) -> TruthValue {
    if !frame.is_defined(fact) {
        return interp.value(fact);
    }
    let cases = frame.cases(fact).expect("defined fact");
    truth_max(
        cases
            .iter()
            .map(|case| truth_min(case.iter().map(|&y| interp.value(y)))),
    )
}

/// Supported value under the Kripke-Kleene evaluation, via the fixpoint
/// regions. Open facts evaluate to their interpretation value.
pub fn supported_value_kk(
    frame: &JustificationFrame,
    interp: &Interpretation,
    fact: Fact,
) -> TruthValue {
    if !frame.is_defined(fact) {
        return interp.value(fact);
    }
    kk_regions(frame, interp).value(fact)
}

/// Supported value for either built-in evaluation.
pub fn supported_value(
    frame: &JustificationFrame,
    interp: &Interpretation,
    fact: Fact,
    be: Builtin,
) -> TruthValue {
    match be {
        Builtin::Sp => supported_value_sp(frame, interp, fact),
        Builtin::Kk => supported_value_kk(frame, interp, fact),
    }
}

/// Brute-force supported value: the maximum graph value over every locally
/// complete positional justification rooted at `fact`. Works for any branch
/// evaluation with a graph evaluator; serves as the independent oracle for
/// the closed forms.
pub fn supported_value_brute(
    frame: &JustificationFrame,
    interp: &Interpretation,
    fact: Fact,
    be: &dyn BranchEvaluation,
    cap: u64,
) -> Result<TruthValue, SolverError> {
    if !frame.is_defined(fact) {
        return Ok(interp.value(fact));
    }
    let mut best: Option<TruthValue> = None;
    for_each_justification(frame, fact, cap, |j| {
        let value = jval_graph(frame, j, interp, be);
        best = Some(match best {
            Some(b) => b.max(value),
            None => value,
        });
        if value == TruthValue::True {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(best.expect("every defined fact has at least one justification"))
}

/// The support operator: maps an interpretation to the raw valuation
/// assigning each defined fact its supported value.
pub fn support_operator(
    frame: &JustificationFrame,
    interp: &Interpretation,
    be: Builtin,
) -> RawValuation {
    let mut values = BTreeMap::new();
    match be {
        Builtin::Sp => {
            for x in frame.defined_facts() {
                values.insert(x, supported_value_sp(frame, interp, x));
            }
        }
        Builtin::Kk => {
            let regions = kk_regions(frame, interp);
            for x in frame.defined_facts() {
                values.insert(x, regions.value(x));
            }
        }
    }
    RawValuation(values)
}

/// Support operator computed through the brute-force oracle.
pub fn support_operator_brute(
    frame: &JustificationFrame,
    interp: &Interpretation,
    be: &dyn BranchEvaluation,
    cap: u64,
) -> Result<RawValuation, SolverError> {
    let mut values = BTreeMap::new();
    for x in frame.defined_facts() {
        values.insert(x, supported_value_brute(frame, interp, x, be, cap)?);
    }
    Ok(RawValuation(values))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelViolation {
    pub fact: Fact,
    pub supported: TruthValue,
    pub assigned: TruthValue,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelCheck {
    pub violations: Vec<ModelViolation>,
}

impl ModelCheck {
    pub fn satisfied(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Whether `interp` is a model: the supported value of every defined fact
/// equals its interpretation value.
pub fn is_model(
    frame: &JustificationFrame,
    interp: &Interpretation,
    be: Builtin,
) -> ModelCheck {
    let valuation = support_operator(frame, interp, be);
    let violations = valuation
        .iter()
        .filter(|&(fact, supported)| supported != interp.value(fact))
        .map(|(fact, supported)| ModelViolation {
            fact,
            supported,
            assigned: interp.value(fact),
        })
        .collect();
    ModelCheck { violations }
}

/// All models over the frame's universe, in interpretation enumeration
/// order. Errors if the universe exceeds `atom_cap` atoms.
pub fn enumerate_models(
    frame: &JustificationFrame,
    be: Builtin,
    atom_cap: u32,
) -> Result<Vec<Interpretation>, SolverError> {
    let atoms = frame.space().atom_count();
    if atoms as u32 > atom_cap {
        return Err(SolverError::UniverseCapacity {
            atoms,
            cap: atom_cap,
        });
    }
    Ok(Interpretation::enumerate(atoms)
        .filter(|interp| is_model(frame, interp, be).satisfied())
        .collect())
}

/// One consistency failure: a defined fact and interpretation for which the
/// support operator's outputs at `x` and `~x` are not complementary (or the
/// one-sided bound fails).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyViolation {
    pub fact: Fact,
    pub interpretation: Interpretation,
    pub value: TruthValue,
    pub complement_value: TruthValue,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepOptions {
    /// Sweep every interpretation when `3^atoms` stays at or below this.
    pub max_exhaustive: u64,
    /// Number of sampled interpretations otherwise.
    pub samples: u32,
    /// Seed for sampled sweeps; echoed in the report.
    pub seed: u64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            max_exhaustive: DEFAULT_EXHAUSTIVE_CAP,
            samples: 50,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyReport {
    /// Failures of `SV(~x, I) = ~SV(x, I)`.
    pub equality_violations: Vec<ConsistencyViolation>,
    /// Failures of the one-sided bound `SV(x, I) <=t ~SV(~x, I)`,
    /// checked independently of the equality.
    pub inequality_violations: Vec<ConsistencyViolation>,
    pub interpretations_checked: u64,
    pub exhaustive: bool,
    pub seed: Option<u64>,
}

impl ConsistencyReport {
    pub fn consistent(&self) -> bool {
        self.equality_violations.is_empty()
    }

    pub fn all_pass(&self) -> bool {
        self.equality_violations.is_empty() && self.inequality_violations.is_empty()
    }

    pub fn to_json(&self, frame: &JustificationFrame, be: Builtin) -> Value {
        let space = frame.space();
        let violation_json = |v: &ConsistencyViolation, check: &str| {
            json!({
                "fact": space.render(v.fact),
                "interpretation": v.interpretation.render(space),
                "sv": v.value.symbol().to_string(),
                "svComplement": v.complement_value.symbol().to_string(),
                "check": check,
            })
        };
        let mut violations: Vec<Value> = self
            .equality_violations
            .iter()
            .map(|v| violation_json(v, "equality"))
            .collect();
        violations.extend(
            self.inequality_violations
                .iter()
                .map(|v| violation_json(v, "inequality")),
        );
        json!({
            "frame": document_from_frame(frame).render(),
            "be": be.tag(),
            "violations": violations,
            "exhaustive": self.exhaustive,
            "seed": self.seed,
        })
    }
}

/// Sweeps interpretations (exhaustively when small enough, sampled with a
/// recorded seed otherwise) and records, for every defined fact, failures of
/// the consistency equality and of the one-sided inequality.
pub fn consistency_sweep(
    frame: &JustificationFrame,
    be: Builtin,
    opts: SweepOptions,
) -> ConsistencyReport {
    let atoms = frame.space().atom_count();
    let exhaustive = (atoms as u32) <= 27
        && 3u128.pow(atoms as u32) <= u128::from(opts.max_exhaustive);

    let mut report = ConsistencyReport {
        equality_violations: Vec::new(),
        inequality_violations: Vec::new(),
        interpretations_checked: 0,
        exhaustive,
        seed: if exhaustive { None } else { Some(opts.seed) },
    };

    let defined = frame.defined_facts();
    let check = |interp: &Interpretation, report: &mut ConsistencyReport| {
        report.interpretations_checked += 1;
        let valuation = support_operator(frame, interp, be);
        for &x in &defined {
            let value = valuation.get(x).expect("defined fact");
            let complement_value = valuation.get(x.complement()).expect("defined fact");
            if complement_value != value.negate() {
                report.equality_violations.push(ConsistencyViolation {
                    fact: x,
                    interpretation: interp.clone(),
                    value,
                    complement_value,
                });
            }
            if value > complement_value.negate() {
                report.inequality_violations.push(ConsistencyViolation {
                    fact: x,
                    interpretation: interp.clone(),
                    value,
                    complement_value,
                });
            }
        }
    };

    if exhaustive {
        for interp in Interpretation::enumerate(atoms) {
            check(&interp, &mut report);
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        for _ in 0..opts.samples {
            let interp = Interpretation::sample(&mut rng, atoms);
            check(&interp, &mut report);
        }
    }
    report
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SolverError {
    #[error(transparent)]
    Strategy(#[from] EnumerationCapacity),
    #[error("universe of {atoms} atoms exceeds the cap of {cap}")]
    UniverseCapacity { atoms: usize, cap: u32 },
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{complementation, Rule, DEFAULT_SELECTION_CAP};
    use crate::lattice::{AtomId, FactSpace};

    /// Builds a frame from one-signed rules plus their complementation.
    fn cc_frame(atoms: &[&str], rules: &[(&str, &[&str])]) -> JustificationFrame {
        let space = FactSpace::new(atoms.iter().map(|s| s.to_string()));
        let rules: Vec<Rule> = rules
            .iter()
            .map(|(head, body)| {
                Rule::new(
                    space.parse_fact(head).unwrap(),
                    body.iter().map(|x| space.parse_fact(x).unwrap()),
                )
            })
            .collect();
        let completed = complementation(&space, &rules, DEFAULT_SELECTION_CAP).unwrap();
        let defined: BTreeSet<AtomId> = completed
            .iter()
            .filter_map(|r| r.head().atom())
            .collect();
        JustificationFrame::new(space, defined, completed).unwrap()
    }

    fn raw_frame(
        atoms: &[&str],
        defined: &[&str],
        rules: &[(&str, &[&str])],
    ) -> JustificationFrame {
        let space = FactSpace::new(atoms.iter().map(|s| s.to_string()));
        let defined: BTreeSet<AtomId> = defined.iter().map(|a| space.atom(a).unwrap()).collect();
        let rules = rules
            .iter()
            .map(|(head, body)| {
                Rule::new(
                    space.parse_fact(head).unwrap(),
                    body.iter().map(|x| space.parse_fact(x).unwrap()),
                )
            })
            .collect();
        JustificationFrame::new(space, defined, rules).unwrap()
    }

    fn interp(frame: &JustificationFrame, pairs: &[(&str, TruthValue)]) -> Interpretation {
        let space = frame.space();
        Interpretation::from_pairs(
            space,
            pairs
                .iter()
                .map(|(name, v)| (space.parse_fact(name).unwrap(), *v)),
        )
        .unwrap()
    }

    #[test]
    fn sp_closed_form_examples() {
        let frame = cc_frame(
            &["p", "q", "r", "s"],
            &[("p", &["q", "~r"]), ("p", &["s"])],
        );
        let i = interp(
            &frame,
            &[
                ("p", TruthValue::Unknown),
                ("q", TruthValue::True),
                ("r", TruthValue::False),
                ("s", TruthValue::False),
            ],
        );
        let p = frame.space().parse_fact("p").unwrap();
        assert_eq!(supported_value_sp(&frame, &i, p), TruthValue::True);

        let q = frame.space().parse_fact("q").unwrap();
        let i_open = interp(
            &frame,
            &[
                ("p", TruthValue::False),
                ("q", TruthValue::Unknown),
                ("r", TruthValue::False),
                ("s", TruthValue::False),
            ],
        );
        assert_eq!(supported_value_sp(&frame, &i_open, q), TruthValue::Unknown);

        let loop_frame = cc_frame(&["p"], &[("p", &["p"])]);
        let i_loop = interp(&loop_frame, &[("p", TruthValue::False)]);
        let p = loop_frame.space().parse_fact("p").unwrap();
        assert_eq!(supported_value_sp(&loop_frame, &i_loop, p), TruthValue::False);
    }

    #[test]
    fn kk_fixpoint_examples() {
        let loop_frame = cc_frame(&["p"], &[("p", &["p"])]);
        let p = loop_frame.space().parse_fact("p").unwrap();
        for i in Interpretation::enumerate(1) {
            assert_eq!(supported_value_kk(&loop_frame, &i, p), TruthValue::Unknown);
        }

        let chain = cc_frame(&["p", "q"], &[("p", &["q"])]);
        let p = chain.space().parse_fact("p").unwrap();
        let i_true = interp(
            &chain,
            &[("p", TruthValue::Unknown), ("q", TruthValue::True)],
        );
        assert_eq!(supported_value_kk(&chain, &i_true, p), TruthValue::True);
        let i_false = interp(
            &chain,
            &[("p", TruthValue::Unknown), ("q", TruthValue::False)],
        );
        assert_eq!(supported_value_kk(&chain, &i_false, p), TruthValue::False);
    }

    #[test]
    fn brute_force_examples() {
        let loop_frame = cc_frame(&["p"], &[("p", &["p"])]);
        let p = loop_frame.space().parse_fact("p").unwrap();
        let i = interp(&loop_frame, &[("p", TruthValue::True)]);
        assert_eq!(
            supported_value_brute(&loop_frame, &i, p, Builtin::Kk.evaluation(), 1000).unwrap(),
            TruthValue::Unknown
        );

        let repaired = raw_frame(
            &["p", "q", "r"],
            &["p"],
            &[("p", &["q", "~r"]), ("~p", &["~q"]), ("~p", &["r"])],
        );
        let i = interp(
            &repaired,
            &[
                ("p", TruthValue::Unknown),
                ("q", TruthValue::True),
                ("r", TruthValue::True),
            ],
        );
        let p = repaired.space().parse_fact("p").unwrap();
        assert_eq!(
            supported_value_brute(&repaired, &i, p, Builtin::Sp.evaluation(), 1000).unwrap(),
            TruthValue::False
        );
        assert_eq!(
            supported_value_brute(&repaired, &i, p.complement(), Builtin::Sp.evaluation(), 1000)
                .unwrap(),
            TruthValue::True
        );
    }

    #[test]
    fn closed_forms_match_brute_on_small_frames() {
        let frames = [
            cc_frame(&["p"], &[("p", &["p"])]),
            cc_frame(&["p", "q"], &[("p", &["q"])]),
            cc_frame(&["p", "q"], &[("p", &["q"]), ("q", &["p"])]),
            cc_frame(&["p", "q", "r"], &[("p", &["q", "~r"]), ("p", &["~q", "r"])]),
            cc_frame(&["a", "b", "o"], &[("a", &["~b", "o"]), ("b", &["a", "t"])]),
        ];
        for frame in &frames {
            for i in Interpretation::enumerate(frame.space().atom_count()) {
                for x in frame.defined_facts() {
                    for be in Builtin::ALL {
                        let closed = supported_value(frame, &i, x, be);
                        let brute =
                            supported_value_brute(frame, &i, x, be.evaluation(), 100_000).unwrap();
                        assert_eq!(
                            closed,
                            brute,
                            "{} disagrees with oracle at {} under {}",
                            be.tag(),
                            frame.space().render(x),
                            i.render(frame.space()),
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn support_operator_examples() {
        let frame = raw_frame(
            &["p", "q"],
            &["p"],
            &[("p", &["q"]), ("~p", &["~q"])],
        );
        let i = interp(
            &frame,
            &[("p", TruthValue::Unknown), ("q", TruthValue::True)],
        );
        let valuation = support_operator(&frame, &i, Builtin::Sp);
        let p = frame.space().parse_fact("p").unwrap();
        assert_eq!(valuation.get(p), Some(TruthValue::True));
        assert_eq!(valuation.get(p.complement()), Some(TruthValue::False));
        assert!(valuation.is_involution_compatible());

        // The contradictory frame maps both signs to t.
        let contradictory =
            raw_frame(&["x"], &["x"], &[("x", &["t"]), ("~x", &["t"])]);
        let x = contradictory.space().parse_fact("x").unwrap();
        for i in Interpretation::enumerate(1) {
            let valuation = support_operator(&contradictory, &i, Builtin::Sp);
            assert_eq!(valuation.get(x), Some(TruthValue::True));
            assert_eq!(valuation.get(x.complement()), Some(TruthValue::True));
            assert_eq!(valuation.involution_violations(), vec![x]);
        }

        let empty = raw_frame(&["q"], &[], &[]);
        let i = Interpretation::uniform(empty.space(), TruthValue::Unknown);
        assert!(support_operator(&empty, &i, Builtin::Sp).is_empty());
    }

    #[test]
    fn model_checking_examples() {
        let frame = cc_frame(&["p", "q"], &[("p", &["q"]), ("q", &["p"])]);
        let i_tt = interp(&frame, &[("p", TruthValue::True), ("q", TruthValue::True)]);
        assert!(is_model(&frame, &i_tt, Builtin::Sp).satisfied());

        let i_tf = interp(&frame, &[("p", TruthValue::True), ("q", TruthValue::False)]);
        let check = is_model(&frame, &i_tf, Builtin::Sp);
        assert!(!check.satisfied());
        let p = frame.space().parse_fact("p").unwrap();
        assert!(check.violations.iter().any(|v| v.fact == p
            && v.supported == TruthValue::False
            && v.assigned == TruthValue::True));

        let i_uu = interp(
            &frame,
            &[("p", TruthValue::Unknown), ("q", TruthValue::Unknown)],
        );
        assert!(is_model(&frame, &i_uu, Builtin::Kk).satisfied());
    }

    #[test]
    fn model_enumeration_examples() {
        let frame = cc_frame(&["p", "q"], &[("p", &["q"]), ("q", &["p"])]);
        let sp_models = enumerate_models(&frame, Builtin::Sp, 12).unwrap();
        assert_eq!(sp_models.len(), 3);
        let space = frame.space();
        let p = space.parse_fact("p").unwrap();
        let q = space.parse_fact("q").unwrap();
        for model in &sp_models {
            assert_eq!(model.value(p), model.value(q));
        }

        let kk_models = enumerate_models(&frame, Builtin::Kk, 12).unwrap();
        assert_eq!(kk_models.len(), 1);
        assert_eq!(kk_models[0].value(p), TruthValue::Unknown);

        // p <- t pins p to t; the extra open atom is free.
        let pinned = cc_frame(&["p", "z"], &[("p", &["t"])]);
        let models = enumerate_models(&pinned, Builtin::Sp, 12).unwrap();
        assert_eq!(models.len(), 3);
        let p = pinned.space().parse_fact("p").unwrap();
        assert!(models.iter().all(|m| m.value(p) == TruthValue::True));

        let err = enumerate_models(&pinned, Builtin::Sp, 1).unwrap_err();
        assert!(matches!(err, SolverError::UniverseCapacity { atoms: 2, cap: 1 }));
    }

    #[test]
    fn consistency_sweep_examples() {
        let repaired = raw_frame(
            &["p", "q", "r"],
            &["p"],
            &[("p", &["q", "~r"]), ("~p", &["~q"]), ("~p", &["r"])],
        );
        for be in Builtin::ALL {
            let report = consistency_sweep(&repaired, be, SweepOptions::default());
            assert!(report.exhaustive);
            assert_eq!(report.interpretations_checked, 27);
            assert!(report.all_pass(), "violations under {}", be.tag());
        }

        let contradictory =
            raw_frame(&["x"], &["x"], &[("x", &["t"]), ("~x", &["t"])]);
        let report = consistency_sweep(&contradictory, Builtin::Sp, SweepOptions::default());
        assert!(!report.consistent());
        let x = contradictory.space().parse_fact("x").unwrap();
        assert!(report.equality_violations.iter().any(|v| v.fact == x
            && v.value == TruthValue::True
            && v.complement_value == TruthValue::True));
        // The one-sided bound fails here too: t > ~t.
        assert!(!report.inequality_violations.is_empty());
    }

    #[test]
    fn sampled_sweep_records_its_seed() {
        let frame = cc_frame(&["p", "q"], &[("p", &["q"]), ("q", &["p"])]);
        let opts = SweepOptions {
            max_exhaustive: 3,
            samples: 10,
            seed: 99,
        };
        let report = consistency_sweep(&frame, Builtin::Sp, opts);
        assert!(!report.exhaustive);
        assert_eq!(report.seed, Some(99));
        assert_eq!(report.interpretations_checked, 10);
        assert!(report.all_pass());

        let again = consistency_sweep(&frame, Builtin::Sp, opts);
        assert_eq!(report, again);
    }

    #[test]
    fn sweep_report_json_shape() {
        let contradictory =
            raw_frame(&["x"], &["x"], &[("x", &["t"]), ("~x", &["t"])]);
        let report = consistency_sweep(&contradictory, Builtin::Sp, SweepOptions::default());
        let json = report.to_json(&contradictory, Builtin::Sp);
        assert_eq!(json["be"], "sp");
        assert_eq!(json["exhaustive"], true);
        assert_eq!(json["seed"], serde_json::Value::Null);
        assert!(json["frame"].as_str().unwrap().contains("x <- t."));
        let violations = json["violations"].as_array().unwrap();
        assert!(!violations.is_empty());
        for v in violations {
            assert!(v["fact"].is_string());
            assert!(v["interpretation"].is_string());
            assert!(v["sv"].is_string());
            assert!(v["svComplement"].is_string());
            assert!(v["check"] == "equality" || v["check"] == "inequality");
        }
    }

    #[test]
    fn brute_force_propagates_the_strategy_cap() {
        let frame = cc_frame(
            &["a", "b"],
            &[("a", &["b", "t"]), ("a", &["~b"]), ("b", &["a"]), ("b", &["u"])],
        );
        let a = frame.space().parse_fact("a").unwrap();
        let i = Interpretation::uniform(frame.space(), TruthValue::Unknown);
        let err =
            supported_value_brute(&frame, &i, a, Builtin::Sp.evaluation(), 1).unwrap_err();
        assert!(matches!(err, SolverError::Strategy(_)));
    }

    #[test]
    fn adding_a_case_never_decreases_the_brute_value() {
        // Monotonicity of max over a larger justification set, checked on an
        // arbitrary (non-complementary) frame.
        let base = raw_frame(
            &["p", "q", "r"],
            &["p"],
            &[("p", &["q"]), ("~p", &["~q", "r"])],
        );
        let extended = raw_frame(
            &["p", "q", "r"],
            &["p"],
            &[("p", &["q"]), ("p", &["r"]), ("~p", &["~q", "r"])],
        );
        let p = base.space().parse_fact("p").unwrap();
        for i in Interpretation::enumerate(3) {
            for be in Builtin::ALL {
                let before =
                    supported_value_brute(&base, &i, p, be.evaluation(), 100_000).unwrap();
                let after =
                    supported_value_brute(&extended, &i, p, be.evaluation(), 100_000).unwrap();
                assert!(after >= before);
            }
        }
    }
}
