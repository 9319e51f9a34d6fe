//! Positional justifications, branch descriptors, and branch evaluations.
//!
//! A positional justification fixes one case per defined fact; its unfolding
//! from the root is a tree-like justification, locally complete whenever
//! every reachable defined fact has a choice. Branches of the unfolding are
//! materialized as finite descriptors or ultimately periodic ones; the
//! built-in evaluations only ever distinguish finiteness and endpoints, so
//! nothing is lost by the periodic representation.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::ControlFlow;

use serde_json::{json, Value};
use thiserror::Error;

use crate::frame::JustificationFrame;
use crate::lattice::{truth_min, Fact, FactSpace, Interpretation, LatticeError, TruthValue};

/// A rule-choice strategy: a root plus one chosen case per defined fact.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PositionalJustification {
    root: Fact,
    choice: BTreeMap<Fact, BTreeSet<Fact>>,
}

impl PositionalJustification {
    pub fn new(root: Fact, choice: BTreeMap<Fact, BTreeSet<Fact>>) -> Self {
        PositionalJustification { root, choice }
    }

    pub fn root(&self) -> Fact {
        self.root
    }

    pub fn choices(&self) -> &BTreeMap<Fact, BTreeSet<Fact>> {
        &self.choice
    }

    pub fn case_for(&self, fact: Fact) -> Option<&BTreeSet<Fact>> {
        self.choice.get(&fact)
    }

    /// Facts with a choice that are reachable from the root, root included
    /// when it has one.
    pub fn reachable_chosen(&self) -> BTreeSet<Fact> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![self.root];
        while let Some(fact) = stack.pop() {
            if let Some(body) = self.choice.get(&fact) {
                if seen.insert(fact) {
                    stack.extend(body.iter().copied());
                }
            }
        }
        seen
    }

    /// Facts without a choice appearing in reachable chosen bodies (or the
    /// root itself when it has no choice): the leaves of the unfolding.
    pub fn reachable_leaves(&self) -> BTreeSet<Fact> {
        let chosen = self.reachable_chosen();
        if chosen.is_empty() {
            return [self.root].into_iter().collect();
        }
        chosen
            .iter()
            .flat_map(|fact| self.choice[fact].iter().copied())
            .filter(|fact| !self.choice.contains_key(fact))
            .collect()
    }

    /// Whether the choice graph reachable from the root contains a cycle,
    /// i.e. whether the unfolding has infinite branches.
    pub fn has_reachable_cycle(&self) -> bool {
        #[derive(Clone, Copy, PartialEq)]
        enum Color {
            Active,
            Done,
        }
        let mut colors: BTreeMap<Fact, Color> = BTreeMap::new();
        // Iterative DFS with explicit enter/leave events.
        let mut stack = vec![(self.root, false)];
        while let Some((fact, leaving)) = stack.pop() {
            if leaving {
                colors.insert(fact, Color::Done);
                continue;
            }
            match colors.get(&fact) {
                Some(Color::Active) => return true,
                Some(Color::Done) => continue,
                None => {}
            }
            let Some(body) = self.choice.get(&fact) else {
                continue;
            };
            colors.insert(fact, Color::Active);
            stack.push((fact, true));
            for &next in body {
                match colors.get(&next) {
                    Some(Color::Active) => return true,
                    Some(Color::Done) => {}
                    None => stack.push((next, false)),
                }
            }
        }
        false
    }

    /// DOT digraph of the reachable choice relation.
    pub fn to_dot(&self, space: &FactSpace, graph_name: &str) -> String {
        let chosen = self.reachable_chosen();
        let mut nodes: BTreeSet<Fact> = chosen.clone();
        nodes.insert(self.root);
        for fact in &chosen {
            nodes.extend(self.choice[fact].iter().copied());
        }
        let index: BTreeMap<Fact, usize> =
            nodes.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        let mut out = format!("digraph {graph_name} {{\n");
        for (&fact, &i) in &index {
            out.push_str(&format!("  n{i} [label=\"{}\"];\n", space.render(fact)));
        }
        for fact in &chosen {
            for next in &self.choice[fact] {
                out.push_str(&format!("  n{} -> n{};\n", index[fact], index[next]));
            }
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self, space: &FactSpace) -> Value {
        let choices: Vec<Value> = self
            .choice
            .iter()
            .map(|(head, body)| {
                json!({
                    "head": space.render(*head),
                    "body": body.iter().map(|&x| space.render(x)).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({ "root": space.render(self.root), "choices": choices })
    }

    pub fn from_json(space: &FactSpace, value: &Value) -> Result<Self, JustificationJsonError> {
        let root = space.parse_fact(str_field(value, "root")?)?;
        let mut choice = BTreeMap::new();
        let choices = value
            .get("choices")
            .and_then(Value::as_array)
            .ok_or_else(|| JustificationJsonError::Shape("choices".into()))?;
        for entry in choices {
            let head = space.parse_fact(str_field(entry, "head")?)?;
            let body = entry
                .get("body")
                .and_then(Value::as_array)
                .ok_or_else(|| JustificationJsonError::Shape("body".into()))?
                .iter()
                .map(|v| {
                    v.as_str()
                        .ok_or_else(|| JustificationJsonError::Shape("body".into()))
                        .and_then(|s| space.parse_fact(s).map_err(Into::into))
                })
                .collect::<Result<BTreeSet<Fact>, _>>()?;
            choice.insert(head, body);
        }
        Ok(PositionalJustification::new(root, choice))
    }
}

fn str_field<'v>(value: &'v Value, field: &str) -> Result<&'v str, JustificationJsonError> {
    value
        .get(field)
        .and_then(Value::as_str)
        .ok_or_else(|| JustificationJsonError::Shape(field.into()))
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum JustificationJsonError {
    #[error("missing or malformed field `{0}`")]
    Shape(String),
    #[error(transparent)]
    Fact(#[from] LatticeError),
}

/// A branch of an unfolding: a finite defined prefix ending in an open fact,
/// or an ultimately periodic infinite sequence of defined facts.
///
/// Periodic descriptors are kept canonical: primitive cycle, shortest prefix.
/// Two descriptors denote the same branch iff they are equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum BranchDescriptor {
    Finite { prefix: Vec<Fact>, terminal: Fact },
    Periodic { prefix: Vec<Fact>, cycle: Vec<Fact> },
}

impl BranchDescriptor {
    pub fn finite(prefix: Vec<Fact>, terminal: Fact) -> Self {
        BranchDescriptor::Finite { prefix, terminal }
    }

    /// Canonicalizing constructor: reduces the cycle to its primitive root
    /// and absorbs the prefix tail into cycle rotation. Panics on an empty
    /// cycle.
    pub fn periodic(mut prefix: Vec<Fact>, mut cycle: Vec<Fact>) -> Self {
        assert!(!cycle.is_empty(), "periodic branch with empty cycle");
        let n = cycle.len();
        for d in 1..=n / 2 {
            if n.is_multiple_of(d) && (0..n).all(|i| cycle[i] == cycle[i % d]) {
                cycle.truncate(d);
                break;
            }
        }
        while let Some(&last) = prefix.last() {
            if *cycle.last().expect("nonempty cycle") == last {
                prefix.pop();
                cycle.rotate_right(1);
            } else {
                break;
            }
        }
        BranchDescriptor::Periodic { prefix, cycle }
    }

    pub fn first(&self) -> Fact {
        match self {
            BranchDescriptor::Finite { prefix, terminal } => {
                prefix.first().copied().unwrap_or(*terminal)
            }
            BranchDescriptor::Periodic { prefix, cycle } => {
                prefix.first().copied().unwrap_or(cycle[0])
            }
        }
    }

    /// Number of facts in the representation: `|prefix| + 1` for finite
    /// branches, `|prefix| + |cycle|` for periodic ones.
    pub fn len(&self) -> usize {
        match self {
            BranchDescriptor::Finite { prefix, .. } => prefix.len() + 1,
            BranchDescriptor::Periodic { prefix, cycle } => prefix.len() + cycle.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The involution applied elementwise.
    pub fn complement(&self) -> Self {
        match self {
            BranchDescriptor::Finite { prefix, terminal } => BranchDescriptor::Finite {
                prefix: prefix.iter().map(|x| x.complement()).collect(),
                terminal: terminal.complement(),
            },
            BranchDescriptor::Periodic { prefix, cycle } => BranchDescriptor::Periodic {
                prefix: prefix.iter().map(|x| x.complement()).collect(),
                cycle: cycle.iter().map(|x| x.complement()).collect(),
            },
        }
    }

    /// Consecutive steps `(z, y)` of the branch, including the wrap-around
    /// step of a cycle. Finite single-fact branches have no steps.
    pub fn steps(&self) -> Vec<(Fact, Fact)> {
        let mut steps = Vec::new();
        match self {
            BranchDescriptor::Finite { prefix, terminal } => {
                for pair in prefix.windows(2) {
                    steps.push((pair[0], pair[1]));
                }
                if let Some(&last) = prefix.last() {
                    steps.push((last, *terminal));
                }
            }
            BranchDescriptor::Periodic { prefix, cycle } => {
                for pair in prefix.windows(2) {
                    steps.push((pair[0], pair[1]));
                }
                if let Some(&last) = prefix.last() {
                    steps.push((last, cycle[0]));
                }
                for pair in cycle.windows(2) {
                    steps.push((pair[0], pair[1]));
                }
                steps.push((*cycle.last().expect("nonempty cycle"), cycle[0]));
            }
        }
        steps
    }

    /// First `n` facts of the denoted sequence. Finite branches stop early.
    pub fn unroll(&self, n: usize) -> Vec<Fact> {
        match self {
            BranchDescriptor::Finite { prefix, terminal } => prefix
                .iter()
                .copied()
                .chain(std::iter::once(*terminal))
                .take(n)
                .collect(),
            BranchDescriptor::Periodic { prefix, cycle } => prefix
                .iter()
                .copied()
                .chain(cycle.iter().copied().cycle())
                .take(n)
                .collect(),
        }
    }

    pub fn render(&self, space: &FactSpace) -> String {
        let join = |facts: &[Fact]| {
            facts
                .iter()
                .map(|&x| space.render(x))
                .collect::<Vec<_>>()
                .join(" -> ")
        };
        match self {
            BranchDescriptor::Finite { prefix, terminal } => {
                if prefix.is_empty() {
                    space.render(*terminal)
                } else {
                    format!("{} -> {}", join(prefix), space.render(*terminal))
                }
            }
            BranchDescriptor::Periodic { prefix, cycle } => {
                let cycle_part = format!("({})^w", join(cycle));
                if prefix.is_empty() {
                    cycle_part
                } else {
                    format!("{} -> {}", join(prefix), cycle_part)
                }
            }
        }
    }

    pub fn to_json(&self, space: &FactSpace) -> Value {
        let render_all =
            |facts: &[Fact]| facts.iter().map(|&x| space.render(x)).collect::<Vec<_>>();
        match self {
            BranchDescriptor::Finite { prefix, terminal } => json!({
                "kind": "finite",
                "prefix": render_all(prefix),
                "terminal": space.render(*terminal),
            }),
            BranchDescriptor::Periodic { prefix, cycle } => json!({
                "kind": "periodic",
                "prefix": render_all(prefix),
                "cycle": render_all(cycle),
            }),
        }
    }

    pub fn from_json(space: &FactSpace, value: &Value) -> Result<Self, JustificationJsonError> {
        let parse_all = |field: &str| -> Result<Vec<Fact>, JustificationJsonError> {
            value
                .get(field)
                .and_then(Value::as_array)
                .ok_or_else(|| JustificationJsonError::Shape(field.into()))?
                .iter()
                .map(|v| {
                    v.as_str()
                        .ok_or_else(|| JustificationJsonError::Shape(field.into()))
                        .and_then(|s| space.parse_fact(s).map_err(Into::into))
                })
                .collect()
        };
        match str_field(value, "kind")? {
            "finite" => Ok(BranchDescriptor::finite(
                parse_all("prefix")?,
                space.parse_fact(str_field(value, "terminal")?)?,
            )),
            "periodic" => Ok(BranchDescriptor::periodic(
                parse_all("prefix")?,
                parse_all("cycle")?,
            )),
            other => Err(JustificationJsonError::Shape(format!("kind `{other}`"))),
        }
    }
}

/// A branch evaluation: maps branches to facts, plus a graph evaluator that
/// computes the value of a whole positional justification (the minimum over
/// all branches of its unfolding, periodic or not).
///
/// `eval_infinite` must be well defined on ultimately periodic
/// representations: descriptors with equal unrollings must evaluate equally.
pub trait BranchEvaluation {
    fn tag(&self) -> &'static str;

    fn eval_finite(&self, prefix: &[Fact], terminal: Fact) -> Fact;

    fn eval_infinite(&self, prefix: &[Fact], cycle: &[Fact]) -> Fact;

    fn jval_graph(
        &self,
        frame: &JustificationFrame,
        justification: &PositionalJustification,
        interp: &Interpretation,
    ) -> TruthValue;
}

/// The supported (completion) evaluation: a branch's value is its second
/// element; a branch consisting of a single open fact evaluates to itself.
#[derive(Debug, Clone, Copy, Default)]
pub struct SupportedEval;

impl BranchEvaluation for SupportedEval {
    fn tag(&self) -> &'static str {
        "sp"
    }

    fn eval_finite(&self, prefix: &[Fact], terminal: Fact) -> Fact {
        match prefix.len() {
            0 | 1 => terminal,
            _ => prefix[1],
        }
    }

    fn eval_infinite(&self, prefix: &[Fact], cycle: &[Fact]) -> Fact {
        match prefix.len() {
            0 => cycle[1 % cycle.len()],
            1 => cycle[0],
            _ => prefix[1],
        }
    }

    fn jval_graph(
        &self,
        _frame: &JustificationFrame,
        justification: &PositionalJustification,
        interp: &Interpretation,
    ) -> TruthValue {
        // Every branch's second element is a member of the root's case.
        match justification.case_for(justification.root()) {
            Some(body) => truth_min(body.iter().map(|&y| interp.value(y))),
            None => interp.value(justification.root()),
        }
    }
}

/// The Kripke-Kleene evaluation: finite branches map to their last element,
/// infinite branches to the logical fact `u`.
#[derive(Debug, Clone, Copy, Default)]
pub struct KripkeKleeneEval;

impl BranchEvaluation for KripkeKleeneEval {
    fn tag(&self) -> &'static str {
        "kk"
    }

    fn eval_finite(&self, _prefix: &[Fact], terminal: Fact) -> Fact {
        terminal
    }

    fn eval_infinite(&self, _prefix: &[Fact], _cycle: &[Fact]) -> Fact {
        Fact::Logical(TruthValue::Unknown)
    }

    fn jval_graph(
        &self,
        _frame: &JustificationFrame,
        justification: &PositionalJustification,
        interp: &Interpretation,
    ) -> TruthValue {
        let chosen = justification.reachable_chosen();
        if chosen.is_empty() {
            return interp.value(justification.root());
        }
        let mut values: Vec<TruthValue> = justification
            .reachable_leaves()
            .iter()
            .map(|&leaf| interp.value(leaf))
            .collect();
        if justification.has_reachable_cycle() {
            values.push(TruthValue::Unknown);
        }
        truth_min(values)
    }
}

/// The two built-in evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Builtin {
    Sp,
    Kk,
}

impl Builtin {
    pub const ALL: [Builtin; 2] = [Builtin::Sp, Builtin::Kk];

    pub fn evaluation(self) -> &'static dyn BranchEvaluation {
        match self {
            Builtin::Sp => &SupportedEval,
            Builtin::Kk => &KripkeKleeneEval,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Builtin::Sp => "sp",
            Builtin::Kk => "kk",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Builtin> {
        match tag {
            "sp" => Some(Builtin::Sp),
            "kk" => Some(Builtin::Kk),
            _ => None,
        }
    }
}

/// Applies a branch evaluation to a descriptor.
pub fn eval_branch(be: &dyn BranchEvaluation, branch: &BranchDescriptor) -> Fact {
    match branch {
        BranchDescriptor::Finite { prefix, terminal } => be.eval_finite(prefix, *terminal),
        BranchDescriptor::Periodic { prefix, cycle } => be.eval_infinite(prefix, cycle),
    }
}

/// Value of the justification under `interp`: the minimum over all branches
/// of the unfolding, computed by the evaluation's graph evaluator.
pub fn jval_graph(
    frame: &JustificationFrame,
    justification: &PositionalJustification,
    interp: &Interpretation,
    be: &dyn BranchEvaluation,
) -> TruthValue {
    be.jval_graph(frame, justification, interp)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NegationFailure {
    pub branch: BranchDescriptor,
    pub complemented_value: Fact,
    pub negated_value: Fact,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NegationReport {
    pub checked: usize,
    pub failures: Vec<NegationFailure>,
}

impl NegationReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Verifies `B(~b) = ~B(b)` on every sample descriptor.
pub fn check_respects_negation<'a, I>(be: &dyn BranchEvaluation, samples: I) -> NegationReport
where
    I: IntoIterator<Item = &'a BranchDescriptor>,
{
    let mut checked = 0;
    let mut failures = Vec::new();
    for branch in samples {
        checked += 1;
        let complemented_value = eval_branch(be, &branch.complement());
        let negated_value = eval_branch(be, branch).complement();
        if complemented_value != negated_value {
            failures.push(NegationFailure {
                branch: branch.clone(),
                complemented_value,
                negated_value,
            });
        }
    }
    NegationReport { checked, failures }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum JustificationIssue {
    /// The root carries no choice but is a defined fact.
    RootUnchosen { fact: Fact },
    /// A chosen body is not a case of its fact in the frame.
    NotACase { fact: Fact, body: BTreeSet<Fact> },
    /// A defined fact reachable through chosen bodies has no choice:
    /// the unfolding has a leaf with a defined label.
    MissingChoice { fact: Fact },
    /// A choice is recorded for a fact that is not defined.
    ChoiceForOpenFact { fact: Fact },
}

impl JustificationIssue {
    pub fn render(&self, space: &FactSpace) -> String {
        match self {
            JustificationIssue::RootUnchosen { fact } => {
                format!("defined root `{}` has no chosen case", space.render(*fact))
            }
            JustificationIssue::NotACase { fact, body } => format!(
                "chosen body {} is not a case of `{}`",
                space.render_set(body),
                space.render(*fact)
            ),
            JustificationIssue::MissingChoice { fact } => format!(
                "reachable defined fact `{}` has no chosen case",
                space.render(*fact)
            ),
            JustificationIssue::ChoiceForOpenFact { fact } => {
                format!("`{}` is open but carries a choice", space.render(*fact))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JustificationCheck {
    pub issues: Vec<JustificationIssue>,
}

impl JustificationCheck {
    pub fn valid(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Checks that every choice is a case of its fact and that every defined
/// fact reachable from the root has a choice (local completeness of the
/// unfolding).
pub fn verify_justification(
    frame: &JustificationFrame,
    justification: &PositionalJustification,
) -> JustificationCheck {
    let mut issues = Vec::new();
    for (&fact, body) in justification.choices() {
        if !frame.is_defined(fact) {
            issues.push(JustificationIssue::ChoiceForOpenFact { fact });
            continue;
        }
        let cases = frame.cases(fact).expect("defined fact has cases");
        if !cases.contains(body) {
            issues.push(JustificationIssue::NotACase {
                fact,
                body: body.clone(),
            });
        }
    }

    let root = justification.root();
    if frame.is_defined(root) && justification.case_for(root).is_none() {
        issues.push(JustificationIssue::RootUnchosen { fact: root });
    }
    let mut seen = BTreeSet::new();
    let mut stack = vec![root];
    while let Some(fact) = stack.pop() {
        if !seen.insert(fact) {
            continue;
        }
        if let Some(body) = justification.case_for(fact) {
            stack.extend(body.iter().copied());
        } else if frame.is_defined(fact) && fact != root {
            issues.push(JustificationIssue::MissingChoice { fact });
        }
    }
    issues.sort_by_key(|i| format!("{i:?}"));
    issues.dedup();
    JustificationCheck { issues }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GlueError {
    #[error("conflicting choices for `{fact}`")]
    ConflictingChoice { fact: String },
    #[error("child justification rooted at `{found}` attached under `{expected}`")]
    ChildRootMismatch { expected: String, found: String },
    #[error("child key `{fact}` is not a member of the glued body")]
    ChildOutsideBody { fact: String },
}

/// Merges child strategies under a new root with chosen case `body`.
/// Fails if two children (or a child and the root choice) disagree on the
/// case of a shared fact: positional strategies cannot express
/// history-dependent trees.
pub fn glue(
    space: &FactSpace,
    root: Fact,
    body: BTreeSet<Fact>,
    children: BTreeMap<Fact, PositionalJustification>,
) -> Result<PositionalJustification, GlueError> {
    let mut choice: BTreeMap<Fact, BTreeSet<Fact>> = BTreeMap::new();
    choice.insert(root, body.clone());
    for (child_root, child) in children {
        if !body.contains(&child_root) {
            return Err(GlueError::ChildOutsideBody {
                fact: space.render(child_root),
            });
        }
        if child.root() != child_root {
            return Err(GlueError::ChildRootMismatch {
                expected: space.render(child_root),
                found: space.render(child.root()),
            });
        }
        for (&fact, case) in child.choices() {
            match choice.get(&fact) {
                Some(existing) if existing != case => {
                    return Err(GlueError::ConflictingChoice {
                        fact: space.render(fact),
                    });
                }
                _ => {
                    choice.insert(fact, case.clone());
                }
            }
        }
    }
    Ok(PositionalJustification::new(root, choice))
}

/// All branch descriptors of size at most `depth` realized by the unfolding:
/// finite branches with `|prefix| + 1 <= depth` and periodic branches with
/// `|prefix| + |cycle| <= depth`, all edges following the choice map.
pub fn enumerate_bounded_branches(
    justification: &PositionalJustification,
    depth: usize,
) -> BTreeSet<BranchDescriptor> {
    let mut out = BTreeSet::new();
    let root = justification.root();
    if justification.case_for(root).is_none() {
        // Single-node unfolding: the branch is just the root.
        if depth >= 1 {
            out.insert(BranchDescriptor::finite(Vec::new(), root));
        }
        return out;
    }
    let mut path = vec![root];
    walk(justification, depth, &mut path, &mut out);
    out
}

fn walk(
    justification: &PositionalJustification,
    depth: usize,
    path: &mut Vec<Fact>,
    out: &mut BTreeSet<BranchDescriptor>,
) {
    let last = *path.last().expect("nonempty path");
    let body = justification
        .case_for(last)
        .expect("walk only extends through chosen facts");
    for &next in body {
        if justification.case_for(next).is_none() {
            if path.len() < depth {
                out.insert(BranchDescriptor::finite(path.clone(), next));
            }
            continue;
        }
        if path.len() <= depth {
            for i in 0..path.len() {
                if path[i] == next {
                    out.insert(BranchDescriptor::periodic(
                        path[..i].to_vec(),
                        path[i..].to_vec(),
                    ));
                }
            }
        }
        if path.len() < depth {
            path.push(next);
            walk(justification, depth, path, out);
            path.pop();
        }
    }
}

/// Visits every locally complete positional justification rooted at `root`,
/// enumerating choices only for facts reachable from the root. Returns the
/// number visited, or an error once more than `cap` justifications have been
/// produced. The visitor may break early.
pub fn for_each_justification<F>(
    frame: &JustificationFrame,
    root: Fact,
    cap: u64,
    mut visit: F,
) -> Result<u64, EnumerationCapacity>
where
    F: FnMut(&PositionalJustification) -> ControlFlow<()>,
{
    fn recurse<F>(
        frame: &JustificationFrame,
        root: Fact,
        choice: &mut BTreeMap<Fact, BTreeSet<Fact>>,
        pending: &mut BTreeSet<Fact>,
        count: &mut u64,
        cap: u64,
        visit: &mut F,
    ) -> Result<ControlFlow<()>, EnumerationCapacity>
    where
        F: FnMut(&PositionalJustification) -> ControlFlow<()>,
    {
        let Some(&fact) = pending.iter().next() else {
            *count += 1;
            if *count > cap {
                return Err(EnumerationCapacity { cap });
            }
            let justification = PositionalJustification::new(root, choice.clone());
            return Ok(visit(&justification));
        };
        pending.remove(&fact);
        let cases: Vec<BTreeSet<Fact>> = frame
            .cases(fact)
            .expect("pending facts are defined")
            .to_vec();
        for body in cases {
            // Insert the choice before collecting newly reachable facts so a
            // fact whose body mentions itself is not re-queued.
            choice.insert(fact, body);
            let newly_pending: Vec<Fact> = choice[&fact]
                .iter()
                .copied()
                .filter(|&y| frame.is_defined(y) && !choice.contains_key(&y) && !pending.contains(&y))
                .collect();
            pending.extend(newly_pending.iter().copied());
            let flow = recurse(frame, root, choice, pending, count, cap, visit)?;
            for y in &newly_pending {
                pending.remove(y);
            }
            choice.remove(&fact);
            if flow.is_break() {
                pending.insert(fact);
                return Ok(ControlFlow::Break(()));
            }
        }
        pending.insert(fact);
        Ok(ControlFlow::Continue(()))
    }

    let mut choice = BTreeMap::new();
    let mut pending = BTreeSet::new();
    if frame.is_defined(root) {
        pending.insert(root);
    }
    let mut count = 0;
    let _ = recurse(frame, root, &mut choice, &mut pending, &mut count, cap, &mut visit)?;
    Ok(count)
}

/// Materializes every justification rooted at `root`, up to `cap`.
pub fn enumerate_justifications(
    frame: &JustificationFrame,
    root: Fact,
    cap: u64,
) -> Result<Vec<PositionalJustification>, EnumerationCapacity> {
    let mut out = Vec::new();
    for_each_justification(frame, root, cap, |j| {
        out.push(j.clone());
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("more than {cap} justifications rooted at the queried fact")]
pub struct EnumerationCapacity {
    pub cap: u64,
}

/// Cross-checks a graph evaluator against bounded branch enumeration:
/// at depth `|choices| + 1` the enumerated minimum equals the graph value
/// for the built-in evaluations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphAudit {
    pub graph_value: TruthValue,
    pub enumerated_value: Option<TruthValue>,
}

impl GraphAudit {
    pub fn agrees(&self) -> bool {
        self.enumerated_value == Some(self.graph_value)
    }
}

pub fn audit_graph_evaluator(
    frame: &JustificationFrame,
    justification: &PositionalJustification,
    interp: &Interpretation,
    be: &dyn BranchEvaluation,
    depth: usize,
) -> GraphAudit {
    let graph_value = jval_graph(frame, justification, interp, be);
    let branches = enumerate_bounded_branches(justification, depth);
    let enumerated_value = if branches.is_empty() {
        None
    } else {
        Some(truth_min(
            branches
                .iter()
                .map(|b| interp.value(eval_branch(be, b))),
        ))
    };
    GraphAudit {
        graph_value,
        enumerated_value,
    }
}
