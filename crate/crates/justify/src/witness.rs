//! Constructive explanations: prover strategies achieving the supported
//! value, refuter strategies bounding it from above, dualization of refuter
//! strategies into justifications for the complement, and the common
//! opposite-branch construction.
//!
//! A refuter strategy assigns a selection function to every defined fact.
//! It induces a branch selection: the branches all of whose steps land in
//! the image of the selection at the step's source. On complementary frames,
//! `dualize` turns the strategy into a justification for `~x` whose branches
//! all complement into that induced selection.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::frame::{JustificationFrame, SelectionFunction};
use crate::justification::{
    enumerate_bounded_branches, eval_branch, jval_graph, BranchDescriptor, Builtin,
    JustificationJsonError, PositionalJustification,
};
use crate::lattice::{complement_set, Fact, FactSpace, Interpretation, TruthValue};
use crate::solver::{kk_regions, supported_value, KkRegions};

/// A selection function for every defined fact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefuterStrategy {
    selections: BTreeMap<Fact, SelectionFunction>,
}

impl RefuterStrategy {
    pub fn new(selections: BTreeMap<Fact, SelectionFunction>) -> Self {
        RefuterStrategy { selections }
    }

    /// Builds a total strategy by picking one element from each case of each
    /// defined fact. `pick` receives the fact and one of its cases and must
    /// return a member of that case.
    pub fn from_picks<F>(frame: &JustificationFrame, mut pick: F) -> Self
    where
        F: FnMut(Fact, &BTreeSet<Fact>) -> Fact,
    {
        let mut selections = BTreeMap::new();
        for fact in frame.defined_facts() {
            let picks: Vec<Fact> = frame
                .cases(fact)
                .expect("defined fact")
                .iter()
                .map(|case| {
                    let choice = pick(fact, case);
                    debug_assert!(case.contains(&choice), "pick outside its case");
                    choice
                })
                .collect();
            selections.insert(fact, SelectionFunction::new(fact, picks));
        }
        RefuterStrategy { selections }
    }

    /// A uniformly random total strategy.
    pub fn random<R: Rng>(frame: &JustificationFrame, rng: &mut R) -> Self {
        Self::from_picks(frame, |_, case| {
            let members: Vec<Fact> = case.iter().copied().collect();
            members[rng.gen_range(0..members.len())]
        })
    }

    pub fn selections(&self) -> &BTreeMap<Fact, SelectionFunction> {
        &self.selections
    }

    pub fn selection_for(&self, fact: Fact) -> Option<&SelectionFunction> {
        self.selections.get(&fact)
    }

    pub fn image_at(&self, fact: Fact) -> Option<BTreeSet<Fact>> {
        self.selections.get(&fact).map(SelectionFunction::image)
    }

    pub fn is_total_for(&self, frame: &JustificationFrame) -> bool {
        frame.defined_facts().iter().all(|&fact| {
            self.selections
                .get(&fact)
                .is_some_and(|s| s.is_valid_for(frame))
        })
    }

    /// Membership test for the induced branch selection: every step `z -> y`
    /// of the branch must satisfy `y ∈ im(S_z)`. A branch with no steps is
    /// contained vacuously.
    pub fn induced_selection_contains(&self, branch: &BranchDescriptor) -> bool {
        branch.steps().iter().all(|&(source, target)| {
            self.selections
                .get(&source)
                .is_some_and(|s| s.image().contains(&target))
        })
    }
}

/// Plays the refuter strategy against a justification: from each defined
/// fact, moves to the element the strategy selects from the chosen case.
/// Ends in a finite branch at an open fact or wraps into a cycle on the
/// first revisit. The result is always a branch of the justification's
/// unfolding and is contained in the induced selection.
pub fn follow_refuter(
    frame: &JustificationFrame,
    justification: &PositionalJustification,
    strategy: &RefuterStrategy,
) -> BranchDescriptor {
    let mut path: Vec<Fact> = Vec::new();
    let mut seen: BTreeMap<Fact, usize> = BTreeMap::new();
    let mut current = justification.root();
    loop {
        let Some(body) = justification.case_for(current) else {
            return BranchDescriptor::finite(path, current);
        };
        if let Some(&i) = seen.get(&current) {
            return BranchDescriptor::periodic(path[..i].to_vec(), path[i..].to_vec());
        }
        seen.insert(current, path.len());
        path.push(current);
        let selection = strategy
            .selection_for(current)
            .expect("refuter strategy must be total");
        current = selection
            .pick_for(frame, body)
            .expect("chosen body must be a case of its fact");
    }
}

/// A prover strategy whose graph value equals the supported value of `fact`.
///
/// Supported evaluation: pick a case maximizing the closed form at the root;
/// below it any locally complete completion works. Kripke-Kleene: inside the
/// forced-true region follow rank-decreasing cases; inside the nonfalse
/// region stay there; otherwise any completion works.
pub fn extract_prover_strategy(
    frame: &JustificationFrame,
    interp: &Interpretation,
    be: Builtin,
    fact: Fact,
) -> PositionalJustification {
    let mut choice: BTreeMap<Fact, BTreeSet<Fact>> = BTreeMap::new();
    match be {
        Builtin::Sp => {
            let cases = frame.cases(fact).expect("defined fact");
            let mut best: Option<(TruthValue, &BTreeSet<Fact>)> = None;
            for case in cases {
                let value = crate::lattice::truth_min(case.iter().map(|&y| interp.value(y)));
                if best.is_none_or(|(b, _)| value > b) {
                    best = Some((value, case));
                }
            }
            let (_, case) = best.expect("defined facts have cases");
            choice.insert(fact, case.clone());
            complete_reachable(frame, fact, &mut choice, first_case);
        }
        Builtin::Kk => {
            let regions = kk_regions(frame, interp);
            match regions.value(fact) {
                TruthValue::True => {
                    complete_reachable(frame, fact, &mut choice, |frame, z| {
                        rank_decreasing_case(frame, interp, &regions, z)
                    });
                }
                TruthValue::Unknown => {
                    complete_reachable(frame, fact, &mut choice, |frame, z| {
                        safe_case(frame, interp, &regions, z)
                    });
                }
                TruthValue::False => {
                    complete_reachable(frame, fact, &mut choice, first_case);
                }
            }
        }
    }
    PositionalJustification::new(fact, choice)
}

fn first_case(frame: &JustificationFrame, fact: Fact) -> BTreeSet<Fact> {
    frame.cases(fact).expect("defined fact")[0].clone()
}

/// For a fact in the forced-true region: the first case whose members are
/// true open facts or region members of strictly smaller rank.
fn rank_decreasing_case(
    frame: &JustificationFrame,
    interp: &Interpretation,
    regions: &KkRegions,
    fact: Fact,
) -> BTreeSet<Fact> {
    let Some(rank) = regions.true_rank(fact) else {
        return first_case(frame, fact);
    };
    frame
        .cases(fact)
        .expect("defined fact")
        .iter()
        .find(|case| {
            case.iter().all(|&y| {
                if frame.is_defined(y) {
                    regions.true_rank(y).is_some_and(|r| r < rank)
                } else {
                    interp.value(y) == TruthValue::True
                }
            })
        })
        .expect("true-region facts have a rank-decreasing case")
        .clone()
}

/// For a fact in the nonfalse region: the first case staying inside it and
/// avoiding false open facts.
fn safe_case(
    frame: &JustificationFrame,
    interp: &Interpretation,
    regions: &KkRegions,
    fact: Fact,
) -> BTreeSet<Fact> {
    if !regions.in_safe_region(fact) {
        return first_case(frame, fact);
    }
    frame
        .cases(fact)
        .expect("defined fact")
        .iter()
        .find(|case| {
            case.iter().all(|&y| {
                if frame.is_defined(y) {
                    regions.in_safe_region(y)
                } else {
                    interp.value(y) != TruthValue::False
                }
            })
        })
        .expect("safe-region facts have a safe case")
        .clone()
}

fn complete_reachable<F>(
    frame: &JustificationFrame,
    root: Fact,
    choice: &mut BTreeMap<Fact, BTreeSet<Fact>>,
    mut pick: F,
) where
    F: FnMut(&JustificationFrame, Fact) -> BTreeSet<Fact>,
{
    let mut stack = vec![root];
    let mut seen = BTreeSet::new();
    while let Some(fact) = stack.pop() {
        if !seen.insert(fact) || !frame.is_defined(fact) {
            continue;
        }
        choice.entry(fact).or_insert_with(|| pick(frame, fact));
        stack.extend(choice[&fact].iter().copied());
    }
}

/// A refuter strategy simultaneously bounding every defined fact: playing it
/// against any justification rooted at `x` yields a branch whose value under
/// the evaluation is at most the supported value of `x`.
///
/// Supported evaluation: per case, a value-minimizing element. Kripke-Kleene:
/// outside the nonfalse region, a minimal-rank exit towards a false open
/// fact; outside the forced-true region, an element that is neither a true
/// open fact nor a true-region member; inside, anything.
pub fn extract_refuter_strategy(
    frame: &JustificationFrame,
    interp: &Interpretation,
    be: Builtin,
) -> RefuterStrategy {
    match be {
        Builtin::Sp => RefuterStrategy::from_picks(frame, |_, case| {
            *case
                .iter()
                .min_by_key(|&&y| (interp.value(y), y))
                .expect("nonempty case")
        }),
        Builtin::Kk => {
            let regions = kk_regions(frame, interp);
            RefuterStrategy::from_picks(frame, |fact, case| {
                if let Some(rank) = regions.exit_rank(fact) {
                    // Exits strictly decrease the rank, so refuter-forced
                    // plays reach a false open fact instead of cycling.
                    case.iter()
                        .filter_map(|&y| {
                            if frame.is_defined(y) {
                                regions.exit_rank(y).filter(|&r| r < rank).map(|r| (r, y))
                            } else if interp.value(y) == TruthValue::False {
                                Some((0, y))
                            } else {
                                None
                            }
                        })
                        .min()
                        .map(|(_, y)| y)
                        .expect("every case of an unsafe fact has an exit")
                } else if !regions.in_true_region(fact) {
                    *case
                        .iter()
                        .find(|&&y| {
                            if frame.is_defined(y) {
                                !regions.in_true_region(y)
                            } else {
                                interp.value(y) != TruthValue::True
                            }
                        })
                        .expect("every case of a non-true fact has a non-true member")
                } else {
                    *case.iter().next().expect("nonempty case")
                }
            })
        }
    }
}

/// Dualizes a refuter strategy for `x` into a justification rooted at `~x`:
/// at every reached defined fact `~z` it chooses the least case contained in
/// the complemented image of the strategy's selection at `z`. Existence of
/// such a case is exactly the first complementarity condition; on
/// non-complementary frames the offending fact and image are reported.
pub fn dualize(
    frame: &JustificationFrame,
    strategy: &RefuterStrategy,
    fact: Fact,
) -> Result<PositionalJustification, WitnessError> {
    let space = frame.space();
    let root = fact.complement();
    let mut choice: BTreeMap<Fact, BTreeSet<Fact>> = BTreeMap::new();
    let mut stack = vec![root];
    let mut seen = BTreeSet::new();
    while let Some(w) = stack.pop() {
        if !seen.insert(w) || !frame.is_defined(w) {
            continue;
        }
        let mirror = w.complement();
        let image = strategy
            .image_at(mirror)
            .ok_or_else(|| WitnessError::IncompleteStrategy {
                fact: space.render(mirror),
            })?;
        let negated_image = complement_set(&image);
        let body = frame
            .cases(w)
            .expect("defined fact")
            .iter()
            .find(|case| case.is_subset(&negated_image))
            .ok_or_else(|| WitnessError::NoCoveringBody {
                fact: space.render(mirror),
                image: space.render_set(&image),
            })?;
        choice.insert(w, body.clone());
        stack.extend(body.iter().copied());
    }
    Ok(PositionalJustification::new(root, choice))
}

/// The incremental opposite-branch construction: walks both unfoldings in
/// lockstep through facts common to a case and the complement of the paired
/// case, producing a branch of the first justification whose complement is a
/// branch of the second.
pub fn common_opposite_branch(
    jx: &PositionalJustification,
    jnx: &PositionalJustification,
) -> Result<BranchDescriptor, WitnessError> {
    if jnx.root() != jx.root().complement() {
        return Err(WitnessError::RootMismatch);
    }
    let mut path: Vec<Fact> = Vec::new();
    let mut seen: BTreeMap<Fact, usize> = BTreeMap::new();
    let mut current = jx.root();
    loop {
        let Some(case) = jx.case_for(current) else {
            return Ok(BranchDescriptor::finite(path, current));
        };
        if let Some(&i) = seen.get(&current) {
            return Ok(BranchDescriptor::periodic(
                path[..i].to_vec(),
                path[i..].to_vec(),
            ));
        }
        let mirror = current.complement();
        let paired_case = jnx
            .case_for(mirror)
            .ok_or(WitnessError::UnreachedPair)?;
        let next = case
            .iter()
            .copied()
            .find(|z| paired_case.contains(&z.complement()))
            .ok_or(WitnessError::EmptyIntersection)?;
        seen.insert(current, path.len());
        path.push(current);
        current = next;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Side {
    Positive,
    Negative,
}

impl Side {
    fn tag(self) -> &'static str {
        match self {
            Side::Positive => "positive",
            Side::Negative => "negative",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct AuditEntry {
    pub side: Side,
    pub branch: BranchDescriptor,
    pub value: TruthValue,
}

/// A fact's supported value together with the strategies witnessing it on
/// both sides: a prover strategy for the fact and the dual of a refuter
/// strategy for its complement, plus a bounded branch audit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessPair {
    pub fact: Fact,
    pub value: TruthValue,
    pub interpretation: Interpretation,
    pub evaluation: Builtin,
    pub positive: PositionalJustification,
    pub negative: PositionalJustification,
    pub audit: Vec<AuditEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessFormat {
    Dot,
    Json,
}

/// Builds the witness pair for a defined fact on a complementary frame.
/// The two strategies are re-evaluated after construction; a mismatch with
/// the supported value is an internal-consistency failure, never silently
/// accepted.
pub fn witness_pair(
    frame: &JustificationFrame,
    interp: &Interpretation,
    be: Builtin,
    fact: Fact,
) -> Result<WitnessPair, WitnessError> {
    let space = frame.space();
    let value = supported_value(frame, interp, fact, be);

    let positive = extract_prover_strategy(frame, interp, be, fact);
    let positive_value = jval_graph(frame, &positive, interp, be.evaluation());
    if positive_value != value {
        return Err(WitnessError::SelfCheck {
            side: Side::Positive.tag(),
            fact: space.render(fact),
            expected: value,
            actual: positive_value,
        });
    }

    let refuter = extract_refuter_strategy(frame, interp, be);
    let negative = dualize(frame, &refuter, fact)?;
    let negative_value = jval_graph(frame, &negative, interp, be.evaluation());
    if negative_value != value.negate() {
        return Err(WitnessError::SelfCheck {
            side: Side::Negative.tag(),
            fact: space.render(fact.complement()),
            expected: value.negate(),
            actual: negative_value,
        });
    }

    let mut audit = Vec::new();
    for (side, strategy) in [(Side::Positive, &positive), (Side::Negative, &negative)] {
        let depth = strategy.choices().len() + 1;
        for branch in enumerate_bounded_branches(strategy, depth) {
            let value = interp.value(eval_branch(be.evaluation(), &branch));
            audit.push(AuditEntry {
                side,
                branch,
                value,
            });
        }
    }
    audit.sort();

    Ok(WitnessPair {
        fact,
        value,
        interpretation: interp.clone(),
        evaluation: be,
        positive,
        negative,
        audit,
    })
}

impl WitnessPair {
    pub fn to_json(&self, space: &FactSpace) -> Value {
        let interpretation: serde_json::Map<String, Value> = self
            .interpretation
            .as_map(space)
            .into_iter()
            .map(|(name, value)| (name, Value::String(value.symbol().to_string())))
            .collect();
        let audit: Vec<Value> = self
            .audit
            .iter()
            .map(|entry| {
                json!({
                    "side": entry.side.tag(),
                    "branch": entry.branch.to_json(space),
                    "value": entry.value.symbol().to_string(),
                })
            })
            .collect();
        json!({
            "fact": space.render(self.fact),
            "value": self.value.symbol().to_string(),
            "interpretation": interpretation,
            "evaluation": self.evaluation.tag(),
            "positive": self.positive.to_json(space),
            "negative": self.negative.to_json(space),
            "audit": audit,
        })
    }

    pub fn from_json(space: &FactSpace, value: &Value) -> Result<Self, WitnessError> {
        let get_str = |field: &str| -> Result<&str, WitnessError> {
            value
                .get(field)
                .and_then(Value::as_str)
                .ok_or_else(|| WitnessError::Json(format!("missing field `{field}`")))
        };
        let fact = space
            .parse_fact(get_str("fact")?)
            .map_err(|e| WitnessError::Json(e.to_string()))?;
        let truth = parse_truth(get_str("value")?)?;
        let evaluation = Builtin::from_tag(get_str("evaluation")?)
            .ok_or_else(|| WitnessError::Json("unknown evaluation tag".into()))?;
        let interp_map = value
            .get("interpretation")
            .and_then(Value::as_object)
            .ok_or_else(|| WitnessError::Json("missing field `interpretation`".into()))?;
        let pairs: Vec<(Fact, TruthValue)> = interp_map
            .iter()
            .map(|(name, v)| {
                let fact = space
                    .parse_fact(name)
                    .map_err(|e| WitnessError::Json(e.to_string()))?;
                let value =
                    parse_truth(v.as_str().ok_or_else(|| {
                        WitnessError::Json("interpretation values must be strings".into())
                    })?)?;
                Ok((fact, value))
            })
            .collect::<Result<_, WitnessError>>()?;
        let interpretation = Interpretation::from_pairs(space, pairs)
            .map_err(|e| WitnessError::Json(e.to_string()))?;
        let strategy = |field: &str| -> Result<PositionalJustification, WitnessError> {
            let v = value
                .get(field)
                .ok_or_else(|| WitnessError::Json(format!("missing field `{field}`")))?;
            PositionalJustification::from_json(space, v).map_err(Into::into)
        };
        let positive = strategy("positive")?;
        let negative = strategy("negative")?;
        let audit = value
            .get("audit")
            .and_then(Value::as_array)
            .ok_or_else(|| WitnessError::Json("missing field `audit`".into()))?
            .iter()
            .map(|entry| {
                let side = match entry.get("side").and_then(Value::as_str) {
                    Some("positive") => Side::Positive,
                    Some("negative") => Side::Negative,
                    _ => return Err(WitnessError::Json("bad audit side".into())),
                };
                let branch = BranchDescriptor::from_json(
                    space,
                    entry
                        .get("branch")
                        .ok_or_else(|| WitnessError::Json("missing audit branch".into()))?,
                )?;
                let value = parse_truth(
                    entry
                        .get("value")
                        .and_then(Value::as_str)
                        .ok_or_else(|| WitnessError::Json("missing audit value".into()))?,
                )?;
                Ok(AuditEntry {
                    side,
                    branch,
                    value,
                })
            })
            .collect::<Result<Vec<_>, WitnessError>>()?;
        Ok(WitnessPair {
            fact,
            value: truth,
            interpretation,
            evaluation,
            positive,
            negative,
            audit,
        })
    }

    /// Two DOT digraphs, one per strategy.
    pub fn to_dot(&self, space: &FactSpace) -> String {
        format!(
            "{}{}",
            self.positive.to_dot(space, "positive"),
            self.negative.to_dot(space, "negative")
        )
    }

    pub fn export(&self, format: WitnessFormat, space: &FactSpace) -> String {
        match format {
            WitnessFormat::Dot => self.to_dot(space),
            WitnessFormat::Json => {
                serde_json::to_string_pretty(&self.to_json(space)).expect("serializable")
            }
        }
    }
}

fn parse_truth(text: &str) -> Result<TruthValue, WitnessError> {
    match (text.len(), text.chars().next()) {
        (1, Some(c)) => TruthValue::from_symbol(c)
            .ok_or_else(|| WitnessError::Json(format!("bad truth value `{text}`"))),
        _ => Err(WitnessError::Json(format!("bad truth value `{text}`"))),
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum WitnessError {
    #[error("no case of `~{fact}` lies inside the complemented image {image} (frame not complementary at `{fact}`)")]
    NoCoveringBody { fact: String, image: String },
    #[error("a case and its paired complement case have empty intersection (frame not complementary)")]
    EmptyIntersection,
    #[error("the opposite justification never reaches the paired fact (incomplete strategy)")]
    UnreachedPair,
    #[error("justifications are not rooted at complementary facts")]
    RootMismatch,
    #[error("refuter strategy has no selection for `{fact}`")]
    IncompleteStrategy { fact: String },
    #[error("{side} witness for `{fact}` evaluates to {actual}, expected {expected}")]
    SelfCheck {
        side: &'static str,
        fact: String,
        expected: TruthValue,
        actual: TruthValue,
    },
    #[error("malformed witness JSON: {0}")]
    Json(String),
}

impl From<JustificationJsonError> for WitnessError {
    fn from(e: JustificationJsonError) -> Self {
        WitnessError::Json(e.to_string())
    }
}
