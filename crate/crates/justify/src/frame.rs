//! Rules, justification frames, selection functions, complementation, and the
//! complementarity checker.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::lattice::{complement_set, AtomId, Fact, FactSpace};

/// Default cap on selection-function enumeration per head.
pub const DEFAULT_SELECTION_CAP: u64 = 1_000_000;

/// A rule `head <- body`. Bodies are finite nonempty sets of facts;
/// emptiness is rejected at frame validation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    head: Fact,
    body: BTreeSet<Fact>,
}

impl Rule {
    pub fn new<I: IntoIterator<Item = Fact>>(head: Fact, body: I) -> Self {
        Rule {
            head,
            body: body.into_iter().collect(),
        }
    }

    pub fn head(&self) -> Fact {
        self.head
    }

    pub fn body(&self) -> &BTreeSet<Fact> {
        &self.body
    }

    pub fn render(&self, space: &FactSpace) -> String {
        let body: Vec<String> = self.body.iter().map(|&x| space.render(x)).collect();
        format!("{} <- {}", space.render(self.head), body.join(", "))
    }
}

/// A validated justification frame: an atom universe, a set of defined atoms
/// (both signs of a defined atom are defined facts), and a rule set indexed
/// by head.
///
/// Frames are immutable after validation; every accessor is pure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JustificationFrame {
    space: FactSpace,
    defined: BTreeSet<AtomId>,
    rules: Vec<Rule>,
    cases: BTreeMap<Fact, Vec<BTreeSet<Fact>>>,
}

impl JustificationFrame {
    /// Validates raw frame data. On failure returns every violated condition,
    /// not just the first.
    pub fn new(
        space: FactSpace,
        defined: BTreeSet<AtomId>,
        rules: Vec<Rule>,
    ) -> Result<Self, FrameError> {
        let mut violations = Vec::new();
        let mut rules: Vec<Rule> = rules;
        rules.sort();
        rules.dedup();

        let is_defined_fact = |fact: Fact| match fact {
            Fact::Logical(_) => false,
            Fact::Atom(id, _) => defined.contains(&id),
        };

        for id in &defined {
            if id.index() >= space.atom_count() {
                violations.push(FrameViolation::ForeignFact {
                    context: format!("defined atom id {} outside the universe", id.index()),
                });
            }
        }

        let mut cases: BTreeMap<Fact, Vec<BTreeSet<Fact>>> = BTreeMap::new();
        for rule in &rules {
            let head = rule.head();
            let head_name = if space.contains(head) {
                space.render(head)
            } else {
                format!("{head:?}")
            };
            if head.is_logical() {
                violations.push(FrameViolation::LogicalHead { head: head_name });
                continue;
            }
            if !space.contains(head) {
                violations.push(FrameViolation::ForeignFact {
                    context: format!("rule head {head_name} outside the universe"),
                });
                continue;
            }
            if !is_defined_fact(head) {
                violations.push(FrameViolation::UndefinedHead { head: head_name });
                continue;
            }
            if rule.body().is_empty() {
                violations.push(FrameViolation::EmptyBody { head: head_name });
                continue;
            }
            for &fact in rule.body() {
                if !space.contains(fact) {
                    violations.push(FrameViolation::ForeignFact {
                        context: format!("body fact of {head_name} outside the universe"),
                    });
                }
            }
            cases.entry(head).or_default().push(rule.body().clone());
        }

        for &id in &defined {
            if id.index() >= space.atom_count() {
                continue;
            }
            for fact in [Fact::positive(id), Fact::negative(id)] {
                if !cases.contains_key(&fact) {
                    violations.push(FrameViolation::MissingRules {
                        fact: space.render(fact),
                    });
                }
            }
        }

        if !violations.is_empty() {
            return Err(FrameError::Invalid(violations));
        }
        for bodies in cases.values_mut() {
            bodies.sort();
            bodies.dedup();
        }
        Ok(JustificationFrame {
            space,
            defined,
            rules,
            cases,
        })
    }

    pub fn space(&self) -> &FactSpace {
        &self.space
    }

    pub fn defined_atoms(&self) -> &BTreeSet<AtomId> {
        &self.defined
    }

    pub fn open_atoms(&self) -> Vec<AtomId> {
        self.space
            .atom_ids()
            .filter(|id| !self.defined.contains(id))
            .collect()
    }

    pub fn is_defined(&self, fact: Fact) -> bool {
        match fact {
            Fact::Logical(_) => false,
            Fact::Atom(id, _) => self.defined.contains(&id),
        }
    }

    /// Both signs of every defined atom, in atom order, positive first.
    pub fn defined_facts(&self) -> Vec<Fact> {
        self.defined
            .iter()
            .flat_map(|&id| [Fact::positive(id), Fact::negative(id)])
            .collect()
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// The cases of a defined fact, sorted and deduplicated.
    pub fn cases(&self, fact: Fact) -> Result<&[BTreeSet<Fact>], FrameError> {
        self.cases
            .get(&fact)
            .map(Vec::as_slice)
            .ok_or_else(|| FrameError::OpenFact(self.space.render(fact)))
    }

    /// Number of selection functions for a defined fact: the product of its
    /// body sizes.
    pub fn selection_count(&self, fact: Fact) -> Result<u128, FrameError> {
        let cases = self.cases(fact)?;
        let mut count: u128 = 1;
        for body in cases {
            count = count.saturating_mul(body.len() as u128);
        }
        Ok(count)
    }

    /// Lazily enumerates every selection function for `fact` in a fixed
    /// order (odometer over sorted bodies). Errors if the total count
    /// exceeds `cap`.
    pub fn selection_functions(
        &self,
        fact: Fact,
        cap: u64,
    ) -> Result<SelectionFunctions<'_>, FrameError> {
        let count = self.selection_count(fact)?;
        if count > cap as u128 {
            return Err(FrameError::SelectionCapacity {
                head: self.space.render(fact),
                count,
                cap,
            });
        }
        let cases: Vec<Vec<Fact>> = self.cases(fact)?
            .iter()
            .map(|body| body.iter().copied().collect())
            .collect();
        Ok(SelectionFunctions::new(fact, cases))
    }
}

/// A choice of one element from each case of a fixed head.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SelectionFunction {
    head: Fact,
    picks: Vec<Fact>,
}

impl SelectionFunction {
    /// `picks[i]` must be a member of the i-th case of `head` in the frame
    /// the selection is used with; [`JustificationFrame::cases`] fixes the
    /// case order.
    pub fn new(head: Fact, picks: Vec<Fact>) -> Self {
        SelectionFunction { head, picks }
    }

    pub fn head(&self) -> Fact {
        self.head
    }

    pub fn picks(&self) -> &[Fact] {
        &self.picks
    }

    /// The image: the set of all picked elements.
    pub fn image(&self) -> BTreeSet<Fact> {
        self.picks.iter().copied().collect()
    }

    /// The element this selection picks from `body`, resolved against the
    /// frame's case order for the head.
    pub fn pick_for(
        &self,
        frame: &JustificationFrame,
        body: &BTreeSet<Fact>,
    ) -> Option<Fact> {
        let cases = frame.cases(self.head).ok()?;
        let index = cases.iter().position(|case| case == body)?;
        self.picks.get(index).copied()
    }

    /// Checks `picks[i] ∈ cases[i]` against the frame.
    pub fn is_valid_for(&self, frame: &JustificationFrame) -> bool {
        match frame.cases(self.head) {
            Ok(cases) => {
                cases.len() == self.picks.len()
                    && cases
                        .iter()
                        .zip(&self.picks)
                        .all(|(case, pick)| case.contains(pick))
            }
            Err(_) => false,
        }
    }
}

/// Odometer iterator over all selection functions for one head.
#[derive(Debug)]
pub struct SelectionFunctions<'a> {
    head: Fact,
    cases: Vec<Vec<Fact>>,
    indices: Vec<usize>,
    done: bool,
    _marker: std::marker::PhantomData<&'a ()>,
}

impl<'a> SelectionFunctions<'a> {
    fn new(head: Fact, cases: Vec<Vec<Fact>>) -> Self {
        let done = cases.iter().any(Vec::is_empty);
        let indices = vec![0; cases.len()];
        SelectionFunctions {
            head,
            cases,
            indices,
            done,
            _marker: std::marker::PhantomData,
        }
    }
}

impl<'a> Iterator for SelectionFunctions<'a> {
    type Item = SelectionFunction;

    fn next(&mut self) -> Option<SelectionFunction> {
        if self.done {
            return None;
        }
        let picks: Vec<Fact> = self
            .indices
            .iter()
            .zip(&self.cases)
            .map(|(&i, case)| case[i])
            .collect();
        // Advance the odometer, last case fastest.
        let mut pos = self.cases.len();
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            self.indices[pos] += 1;
            if self.indices[pos] < self.cases[pos].len() {
                break;
            }
            self.indices[pos] = 0;
        }
        Some(SelectionFunction::new(self.head, picks))
    }
}

fn heads_by_fact(rules: &[Rule]) -> BTreeMap<Fact, Vec<&Rule>> {
    let mut by_head: BTreeMap<Fact, Vec<&Rule>> = BTreeMap::new();
    for rule in rules {
        by_head.entry(rule.head()).or_default().push(rule);
    }
    by_head
}

fn check_one_signed(space: &FactSpace, rules: &[Rule]) -> Result<(), FrameError> {
    let mut seen: BTreeMap<AtomId, Fact> = BTreeMap::new();
    for rule in rules {
        match rule.head() {
            Fact::Logical(_) => {
                return Err(FrameError::LogicalHead(space.render(rule.head())))
            }
            Fact::Atom(id, _) => {
                if let Some(&other) = seen.get(&id) {
                    if other != rule.head() {
                        return Err(FrameError::MixedSigns {
                            atom: space.name(id).to_string(),
                        });
                    }
                } else {
                    seen.insert(id, rule.head());
                }
            }
        }
    }
    Ok(())
}

/// The complement of a one-signed rule set: for each covered fact `x` and
/// each selection function `S` over its cases, one rule `~x <- ~im(S)`,
/// deduplicated as sets.
pub fn complement_rules(
    space: &FactSpace,
    rules: &[Rule],
    cap: u64,
) -> Result<Vec<Rule>, FrameError> {
    check_one_signed(space, rules)?;
    let mut out: BTreeSet<Rule> = BTreeSet::new();
    for (head, head_rules) in heads_by_fact(rules) {
        let cases: Vec<Vec<Fact>> = {
            let mut bodies: Vec<BTreeSet<Fact>> =
                head_rules.iter().map(|r| r.body().clone()).collect();
            bodies.sort();
            bodies.dedup();
            bodies
                .into_iter()
                .map(|b| b.into_iter().collect())
                .collect()
        };
        let count: u128 = cases
            .iter()
            .fold(1u128, |acc, c| acc.saturating_mul(c.len() as u128));
        if count > cap as u128 {
            return Err(FrameError::SelectionCapacity {
                head: space.render(head),
                count,
                cap,
            });
        }
        for selection in SelectionFunctions::new(head, cases) {
            let body = complement_set(&selection.image());
            out.insert(Rule::new(head.complement(), body));
        }
    }
    Ok(out.into_iter().collect())
}

/// Complementation: the input rules plus their complement.
pub fn complementation(
    space: &FactSpace,
    rules: &[Rule],
    cap: u64,
) -> Result<Vec<Rule>, FrameError> {
    let mut out: BTreeSet<Rule> = rules.iter().cloned().collect();
    out.extend(complement_rules(space, rules, cap)?);
    Ok(out.into_iter().collect())
}

/// Optional normalization: drops cases that are strict supersets of another
/// case with the same head. Redundant rules are legal, so this is never
/// applied implicitly.
pub fn drop_subsumed_cases(rules: &[Rule]) -> Vec<Rule> {
    let by_head = heads_by_fact(rules);
    let mut out = Vec::new();
    for (_, head_rules) in by_head {
        for rule in &head_rules {
            let subsumed = head_rules.iter().any(|other| {
                other.body() != rule.body() && other.body().is_subset(rule.body())
            });
            if !subsumed {
                out.push((*rule).clone());
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// One failed complementarity condition, with its witness.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum ComplementarityViolation {
    /// A selection function for `head` whose complemented image contains no
    /// case of `~head`.
    UncoveredSelection { head: Fact, image: BTreeSet<Fact> },
    /// A case of `head` matched by no selection function for `~head`.
    UnmatchedCase { head: Fact, body: BTreeSet<Fact> },
}

impl ComplementarityViolation {
    pub fn render(&self, space: &FactSpace) -> String {
        match self {
            ComplementarityViolation::UncoveredSelection { head, image } => format!(
                "selection {} for {} has no covering case of {}",
                space.render_set(image),
                space.render(*head),
                space.render(head.complement()),
            ),
            ComplementarityViolation::UnmatchedCase { head, body } => format!(
                "case {} of {} is matched by no selection for {}",
                space.render_set(body),
                space.render(*head),
                space.render(head.complement()),
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplementarityReport {
    pub violations: Vec<ComplementarityViolation>,
}

impl ComplementarityReport {
    pub fn complementary(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn render(&self, space: &FactSpace) -> String {
        if self.complementary() {
            "complementary".to_string()
        } else {
            let mut lines = vec!["not complementary".to_string()];
            for v in &self.violations {
                lines.push(format!("  {}", v.render(space)));
            }
            lines.join("\n")
        }
    }
}

/// Checks both complementarity conditions for every defined fact:
///
/// 1. each selection `S` for `x` is covered by some case `A` of `~x` with
///    `A ⊆ ~im(S)`;
/// 2. each case `A` of `x` admits a selection `S` for `~x` with
///    `~im(S) ⊆ A`; since selections pick independently per case, this is
///    equivalent to every case `B` of `~x` intersecting `~A`.
///
/// Condition 1 is symmetric in `x` and `~x`: an uncovered selection for one
/// side translates into an uncovered selection for the other (pick from each
/// case an element whose complement the given image misses). The checker
/// therefore searches the side with the smaller selection product,
/// depth-first with covered-prefix pruning, and translates the witness.
/// `cap` bounds the nodes that search may explore per head.
pub fn check_complementarity(
    frame: &JustificationFrame,
    cap: u64,
) -> Result<ComplementarityReport, FrameError> {
    let mut violations = Vec::new();
    for &atom in frame.defined_atoms() {
        let pos = Fact::positive(atom);
        let neg = Fact::negative(atom);

        let cheap = if frame.selection_count(pos)? <= frame.selection_count(neg)? {
            pos
        } else {
            neg
        };
        if let Some(image) = find_uncovered_selection(frame, cheap, cap)? {
            let translated = translate_uncovered_image(frame, cheap.complement(), &image);
            for (head, image) in [(cheap, image), (cheap.complement(), translated)] {
                debug_assert!(
                    !frame.cases(head.complement())?.iter().any(|case| {
                        case.iter().all(|a| image.contains(&a.complement()))
                    }),
                    "translated selection is covered"
                );
                violations.push(ComplementarityViolation::UncoveredSelection { head, image });
            }
        }

        for x in [pos, neg] {
            let complement_cases = frame.cases(x.complement())?;
            for case in frame.cases(x)? {
                let matched = complement_cases
                    .iter()
                    .all(|b| b.iter().any(|&y| case.contains(&y.complement())));
                if !matched {
                    violations.push(ComplementarityViolation::UnmatchedCase {
                        head: x,
                        body: case.clone(),
                    });
                }
            }
        }
    }
    violations.sort();
    violations.dedup();
    Ok(ComplementarityReport { violations })
}

/// Given an image witnessing a condition-1 failure at `~head`, builds the
/// image of an uncovered selection for `head`: from each case, the least
/// element whose complement the given image misses.
fn translate_uncovered_image(
    frame: &JustificationFrame,
    head: Fact,
    opposite_image: &BTreeSet<Fact>,
) -> BTreeSet<Fact> {
    frame
        .cases(head)
        .expect("defined fact")
        .iter()
        .map(|case| {
            case.iter()
                .copied()
                .find(|a| !opposite_image.contains(&a.complement()))
                .expect("an uncovered opposite image misses an element of every case")
        })
        .collect()
}

/// Depth-first search for a selection function for `x` whose complemented
/// image contains no case of `~x`. Returns the image of the first such
/// selection found. Extensions of an already-covered partial image stay
/// covered, so those subtrees are skipped.
fn find_uncovered_selection(
    frame: &JustificationFrame,
    x: Fact,
    cap: u64,
) -> Result<Option<BTreeSet<Fact>>, FrameError> {
    let complement_cases = frame.cases(x.complement())?;
    let cases: Vec<Vec<Fact>> = frame
        .cases(x)?
        .iter()
        .map(|body| body.iter().copied().collect())
        .collect();

    // The image is a multiset: backtracking may remove one occurrence of a
    // fact picked from several cases.
    fn covered(
        image: &BTreeMap<Fact, u32>,
        complement_cases: &[BTreeSet<Fact>],
    ) -> bool {
        complement_cases.iter().any(|case| {
            case.iter()
                .all(|a| image.contains_key(&a.complement()))
        })
    }

    fn search(
        cases: &[Vec<Fact>],
        complement_cases: &[BTreeSet<Fact>],
        level: usize,
        image: &mut BTreeMap<Fact, u32>,
        budget: &mut u64,
    ) -> Result<Option<BTreeSet<Fact>>, u64> {
        if *budget == 0 {
            return Err(0);
        }
        *budget -= 1;
        if covered(image, complement_cases) {
            return Ok(None);
        }
        if level == cases.len() {
            return Ok(Some(image.keys().copied().collect()));
        }
        for &pick in &cases[level] {
            *image.entry(pick).or_insert(0) += 1;
            let found = search(cases, complement_cases, level + 1, image, budget)?;
            let count = image.get_mut(&pick).expect("just inserted");
            *count -= 1;
            if *count == 0 {
                image.remove(&pick);
            }
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }

    let mut image = BTreeMap::new();
    let mut budget = cap;
    search(&cases, complement_cases, 0, &mut image, &mut budget).map_err(|_| {
        FrameError::SelectionCapacity {
            head: frame.space().render(x),
            count: frame.selection_count(x).unwrap_or(u128::MAX),
            cap,
        }
    })
}

/// A rule pair `x <- A`, `~x <- B` with `A ∩ ~B = ∅`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionFailure {
    pub fact: Fact,
    pub case: BTreeSet<Fact>,
    pub complement_case: BTreeSet<Fact>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionReport {
    pub failures: Vec<IntersectionFailure>,
}

impl IntersectionReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Verifies `A ∩ ~B ≠ ∅` for every rule pair `x <- A`, `~x <- B`: a fast
/// necessary condition for complementarity.
pub fn rule_intersection_check(frame: &JustificationFrame) -> IntersectionReport {
    let mut failures = Vec::new();
    for &id in frame.defined_atoms() {
        let x = Fact::positive(id);
        let nx = x.complement();
        let (Ok(cases), Ok(complement_cases)) = (frame.cases(x), frame.cases(nx)) else {
            continue;
        };
        for case in cases {
            for complement_case in complement_cases {
                let disjoint = case
                    .iter()
                    .all(|y| !complement_case.contains(&y.complement()));
                if disjoint {
                    failures.push(IntersectionFailure {
                        fact: x,
                        case: case.clone(),
                        complement_case: complement_case.clone(),
                    });
                }
            }
        }
    }
    IntersectionReport { failures }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FrameViolation {
    EmptyBody { head: String },
    LogicalHead { head: String },
    UndefinedHead { head: String },
    MissingRules { fact: String },
    ForeignFact { context: String },
}

impl fmt::Display for FrameViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrameViolation::EmptyBody { head } => write!(f, "rule for `{head}` has an empty body"),
            FrameViolation::LogicalHead { head } => {
                write!(f, "logical fact `{head}` cannot be defined")
            }
            FrameViolation::UndefinedHead { head } => {
                write!(f, "rule head `{head}` is not a defined fact")
            }
            FrameViolation::MissingRules { fact } => write!(f, "`{fact}` has no rules"),
            FrameViolation::ForeignFact { context } => write!(f, "{context}"),
        }
    }
}

fn format_violations(violations: &[FrameViolation]) -> String {
    violations
        .iter()
        .map(|v| format!("  {v}"))
        .collect::<Vec<_>>()
        .join("\n")
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FrameError {
    #[error("invalid justification frame:\n{}", format_violations(.0))]
    Invalid(Vec<FrameViolation>),
    #[error("`{0}` has no cases (open fact)")]
    OpenFact(String),
    #[error("rules cover both signs of atom `{atom}`")]
    MixedSigns { atom: String },
    #[error("rule head `{0}` is a logical fact")]
    LogicalHead(String),
    #[error("{count} selection functions for `{head}` exceed the cap of {cap}")]
    SelectionCapacity {
        head: String,
        count: u128,
        cap: u64,
    },
}

impl FrameError {
    pub fn violations(&self) -> &[FrameViolation] {
        match self {
            FrameError::Invalid(v) => v,
            _ => &[],
        }
    }
}
