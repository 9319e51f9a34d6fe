//! The three-valued truth lattice, signed facts over an interned atom
//! universe, and total interpretations.
//!
//! A fact space consists of the three logical facts `t`, `f`, `u` plus a
//! positive and a negative fact per atom. The complement operation `~` is an
//! involution swapping `t` and `f`, fixing `u`, and flipping atom signs.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

/// Truth values with the truth order `False < Unknown < True`.
///
/// The derived `Ord` instance *is* the truth order, so `min`/`max` over
/// `TruthValue`s compute lattice meet and join of chains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TruthValue {
    False,
    Unknown,
    True,
}

impl TruthValue {
    pub const ALL: [TruthValue; 3] = [TruthValue::False, TruthValue::Unknown, TruthValue::True];

    /// Negation on the lattice: swaps `True` and `False`, fixes `Unknown`.
    pub fn negate(self) -> Self {
        match self {
            TruthValue::True => TruthValue::False,
            TruthValue::False => TruthValue::True,
            TruthValue::Unknown => TruthValue::Unknown,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            TruthValue::True => 't',
            TruthValue::False => 'f',
            TruthValue::Unknown => 'u',
        }
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        match c {
            't' => Some(TruthValue::True),
            'f' => Some(TruthValue::False),
            'u' => Some(TruthValue::Unknown),
            _ => None,
        }
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Least element of a nonempty collection under the truth order.
///
/// Panics on an empty collection; callers own the nonemptiness contract.
pub fn truth_min<I: IntoIterator<Item = TruthValue>>(values: I) -> TruthValue {
    values
        .into_iter()
        .min()
        .expect("truth_min of an empty collection")
}

/// Greatest element of a nonempty collection under the truth order.
///
/// Panics on an empty collection; callers own the nonemptiness contract.
pub fn truth_max<I: IntoIterator<Item = TruthValue>>(values: I) -> TruthValue {
    values
        .into_iter()
        .max()
        .expect("truth_max of an empty collection")
}

/// Interned atom identifier. Ids are assigned in lexicographic name order by
/// [`FactSpace::new`], so the derived `Ord` agrees with name order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomId(u32);

impl AtomId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn flip(self) -> Self {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

/// A member of the fact space: a logical fact or a signed atom.
///
/// Logical facts are a distinguished variant rather than reserved atoms, so a
/// frame can never accidentally define them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Fact {
    Logical(TruthValue),
    Atom(AtomId, Sign),
}

impl Fact {
    pub fn positive(id: AtomId) -> Self {
        Fact::Atom(id, Sign::Positive)
    }

    pub fn negative(id: AtomId) -> Self {
        Fact::Atom(id, Sign::Negative)
    }

    /// The involution `~`: sign flip on atoms, negation on logical facts.
    pub fn complement(self) -> Self {
        match self {
            Fact::Logical(v) => Fact::Logical(v.negate()),
            Fact::Atom(id, sign) => Fact::Atom(id, sign.flip()),
        }
    }

    pub fn is_logical(self) -> bool {
        matches!(self, Fact::Logical(_))
    }

    pub fn atom(self) -> Option<AtomId> {
        match self {
            Fact::Logical(_) => None,
            Fact::Atom(id, _) => Some(id),
        }
    }

    pub fn is_positive_atom(self) -> bool {
        matches!(self, Fact::Atom(_, Sign::Positive))
    }
}

/// Applies the involution elementwise to a set of facts.
pub fn complement_set<'a, I: IntoIterator<Item = &'a Fact>>(
    facts: I,
) -> std::collections::BTreeSet<Fact> {
    facts.into_iter().map(|x| x.complement()).collect()
}

/// The atom universe backing a fact space.
///
/// Names are stored sorted and deduplicated, so iteration and rendering are
/// deterministic and `AtomId` order is lexicographic name order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactSpace {
    names: Vec<String>,
}

impl FactSpace {
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut names: Vec<String> = names.into_iter().map(Into::into).collect();
        names.sort();
        names.dedup();
        FactSpace { names }
    }

    pub fn atom_count(&self) -> usize {
        self.names.len()
    }

    pub fn atom_ids(&self) -> impl Iterator<Item = AtomId> + '_ {
        (0..self.names.len() as u32).map(AtomId)
    }

    pub fn atom(&self, name: &str) -> Option<AtomId> {
        self.names
            .binary_search_by(|n| n.as_str().cmp(name))
            .ok()
            .map(|i| AtomId(i as u32))
    }

    pub fn name(&self, id: AtomId) -> &str {
        &self.names[id.index()]
    }

    /// Whether the fact's atom belongs to this universe. Logical facts always do.
    pub fn contains(&self, fact: Fact) -> bool {
        match fact {
            Fact::Logical(_) => true,
            Fact::Atom(id, _) => id.index() < self.names.len(),
        }
    }

    pub fn render(&self, fact: Fact) -> String {
        match fact {
            Fact::Logical(v) => v.symbol().to_string(),
            Fact::Atom(id, Sign::Positive) => self.name(id).to_string(),
            Fact::Atom(id, Sign::Negative) => format!("~{}", self.name(id)),
        }
    }

    pub fn render_set<'a, I: IntoIterator<Item = &'a Fact>>(&self, facts: I) -> String {
        let parts: Vec<String> = facts.into_iter().map(|&x| self.render(x)).collect();
        format!("{{{}}}", parts.join(", "))
    }

    /// Parses `p`, `~p`, `t`, `f`, or `u` against this universe.
    pub fn parse_fact(&self, text: &str) -> Result<Fact, LatticeError> {
        let (negated, name) = match text.strip_prefix('~') {
            Some(rest) => (true, rest),
            None => (false, text),
        };
        if let Some(v) = single_logical(name) {
            let fact = Fact::Logical(v);
            return Ok(if negated { fact.complement() } else { fact });
        }
        let id = self
            .atom(name)
            .ok_or_else(|| LatticeError::UnknownName(text.to_string()))?;
        Ok(if negated {
            Fact::negative(id)
        } else {
            Fact::positive(id)
        })
    }
}

fn single_logical(name: &str) -> Option<TruthValue> {
    let mut chars = name.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => TruthValue::from_symbol(c),
        _ => None,
    }
}

/// A total three-valued interpretation of a fact space.
///
/// One value is stored per positive atom; the values of negative facts and
/// logical facts are forced by the involution, so `I(~x) = ~I(x)` holds by
/// construction.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interpretation {
    values: Vec<TruthValue>,
}

impl Interpretation {
    /// Builds an interpretation from a `positive atom -> value` assignment.
    /// The assignment must cover every atom of `space` exactly once.
    pub fn from_pairs<I>(space: &FactSpace, pairs: I) -> Result<Self, LatticeError>
    where
        I: IntoIterator<Item = (Fact, TruthValue)>,
    {
        let mut values: Vec<Option<TruthValue>> = vec![None; space.atom_count()];
        for (fact, value) in pairs {
            let id = match fact {
                Fact::Logical(_) => return Err(LatticeError::LogicalKey(space.render(fact))),
                Fact::Atom(_, Sign::Negative) => {
                    return Err(LatticeError::NegativeKey(space.render(fact)))
                }
                Fact::Atom(id, Sign::Positive) => id,
            };
            if !space.contains(fact) {
                return Err(LatticeError::ForeignFact);
            }
            let slot = &mut values[id.index()];
            if slot.is_some() {
                return Err(LatticeError::DuplicateAtom(space.name(id).to_string()));
            }
            *slot = Some(value);
        }
        let mut out = Vec::with_capacity(values.len());
        for (i, v) in values.into_iter().enumerate() {
            match v {
                Some(v) => out.push(v),
                None => {
                    return Err(LatticeError::MissingAtom(
                        space.name(AtomId(i as u32)).to_string(),
                    ))
                }
            }
        }
        Ok(Interpretation { values: out })
    }

    /// Every atom mapped to the same value.
    pub fn uniform(space: &FactSpace, value: TruthValue) -> Self {
        Interpretation {
            values: vec![value; space.atom_count()],
        }
    }

    pub fn atom_count(&self) -> usize {
        self.values.len()
    }

    /// Checked lookup. Fails on facts whose atom lies outside this universe.
    pub fn lookup(&self, fact: Fact) -> Result<TruthValue, LatticeError> {
        match fact {
            Fact::Logical(v) => Ok(v),
            Fact::Atom(id, sign) => {
                let v = self
                    .values
                    .get(id.index())
                    .copied()
                    .ok_or(LatticeError::ForeignFact)?;
                Ok(match sign {
                    Sign::Positive => v,
                    Sign::Negative => v.negate(),
                })
            }
        }
    }

    /// Unchecked lookup for facts known to live in this universe.
    /// Panics on foreign atoms.
    pub fn value(&self, fact: Fact) -> TruthValue {
        self.lookup(fact)
            .expect("fact outside the interpretation's universe")
    }

    pub fn atom_value(&self, id: AtomId) -> TruthValue {
        self.values[id.index()]
    }

    /// All `3^n` interpretations over `atom_count` atoms, in a fixed order:
    /// base-3 counting by atom id with digit order `f < u < t`.
    pub fn enumerate(atom_count: usize) -> impl Iterator<Item = Interpretation> {
        let total = 3u64.checked_pow(atom_count as u32).expect("universe too large to enumerate");
        (0..total).map(move |mut n| {
            let mut values = vec![TruthValue::False; atom_count];
            for slot in values.iter_mut() {
                *slot = TruthValue::ALL[(n % 3) as usize];
                n /= 3;
            }
            Interpretation { values }
        })
    }

    /// One interpretation sampled uniformly per atom.
    pub fn sample<R: rand::Rng>(rng: &mut R, atom_count: usize) -> Interpretation {
        let values = (0..atom_count)
            .map(|_| TruthValue::ALL[rng.gen_range(0..3)])
            .collect();
        Interpretation { values }
    }

    /// Renders as whitespace-separated `atom=value` pairs in atom order.
    pub fn render(&self, space: &FactSpace) -> String {
        let parts: Vec<String> = space
            .atom_ids()
            .map(|id| format!("{}={}", space.name(id), self.values[id.index()].symbol()))
            .collect();
        parts.join(" ")
    }

    pub fn as_map(&self, space: &FactSpace) -> BTreeMap<String, TruthValue> {
        space
            .atom_ids()
            .map(|id| (space.name(id).to_string(), self.values[id.index()]))
            .collect()
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("interpretation key `{0}` is not a positive atom")]
    NegativeKey(String),
    #[error("interpretation key `{0}` is a logical fact")]
    LogicalKey(String),
    #[error("atom `{0}` has no assigned value")]
    MissingAtom(String),
    #[error("atom `{0}` assigned more than once")]
    DuplicateAtom(String),
    #[error("fact lies outside this universe")]
    ForeignFact,
    #[error("unknown fact `{0}`")]
    UnknownName(String),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space_pq() -> FactSpace {
        FactSpace::new(["p", "q"])
    }

    #[test]
    fn negate_is_an_involution() {
        for v in TruthValue::ALL {
            assert_eq!(v.negate().negate(), v);
        }
        assert_eq!(TruthValue::True.negate(), TruthValue::False);
        assert_eq!(TruthValue::Unknown.negate(), TruthValue::Unknown);
        assert_eq!(TruthValue::False.negate(), TruthValue::True);
    }

    #[test]
    fn truth_order() {
        assert!(TruthValue::False < TruthValue::Unknown);
        assert!(TruthValue::Unknown < TruthValue::True);
        assert_eq!(
            truth_min([TruthValue::True, TruthValue::Unknown]),
            TruthValue::Unknown
        );
        assert_eq!(truth_min([TruthValue::True, TruthValue::True]), TruthValue::True);
        assert_eq!(
            truth_min([TruthValue::Unknown, TruthValue::False, TruthValue::True]),
            TruthValue::False
        );
        assert_eq!(
            truth_max([TruthValue::False, TruthValue::Unknown]),
            TruthValue::Unknown
        );
        assert_eq!(truth_max([TruthValue::False, TruthValue::False]), TruthValue::False);
        assert_eq!(
            truth_max([TruthValue::Unknown, TruthValue::True, TruthValue::False]),
            TruthValue::True
        );
    }

    #[test]
    fn min_max_laws_exhaustive() {
        for a in TruthValue::ALL {
            for b in TruthValue::ALL {
                assert_eq!(truth_min([a, b]), truth_min([b, a]));
                assert_eq!(truth_max([a, b]), truth_max([b, a]));
                assert_eq!(truth_min([a, a]), a);
                assert_eq!(truth_max([a, a]), a);
                // De Morgan over the truth order.
                assert_eq!(truth_min([a, b]).negate(), truth_max([a.negate(), b.negate()]));
                for c in TruthValue::ALL {
                    assert_eq!(
                        truth_min([truth_min([a, b]), c]),
                        truth_min([a, truth_min([b, c])])
                    );
                    assert_eq!(
                        truth_max([truth_max([a, b]), c]),
                        truth_max([a, truth_max([b, c])])
                    );
                }
            }
        }
    }

    #[test]
    #[should_panic(expected = "empty collection")]
    fn truth_min_empty_is_a_contract_violation() {
        truth_min(std::iter::empty());
    }

    #[test]
    fn fact_complement_is_an_involution() {
        let space = space_pq();
        let mut facts: Vec<Fact> = TruthValue::ALL.into_iter().map(Fact::Logical).collect();
        for id in space.atom_ids() {
            facts.push(Fact::positive(id));
            facts.push(Fact::negative(id));
        }
        for x in facts {
            assert_eq!(x.complement().complement(), x);
            if x != Fact::Logical(TruthValue::Unknown) {
                assert_ne!(x.complement(), x);
            }
        }
        assert_eq!(
            Fact::Logical(TruthValue::True).complement(),
            Fact::Logical(TruthValue::False)
        );
        assert_eq!(
            Fact::Logical(TruthValue::Unknown).complement(),
            Fact::Logical(TruthValue::Unknown)
        );
    }

    #[test]
    fn space_sorts_and_dedups() {
        let space = FactSpace::new(["q", "p", "q"]);
        assert_eq!(space.atom_count(), 2);
        assert_eq!(space.name(space.atom("p").unwrap()), "p");
        assert!(space.atom("p").unwrap() < space.atom("q").unwrap());
        assert_eq!(space.atom("r"), None);
    }

    #[test]
    fn parse_fact_forms() {
        let space = space_pq();
        let p = space.atom("p").unwrap();
        assert_eq!(space.parse_fact("p").unwrap(), Fact::positive(p));
        assert_eq!(space.parse_fact("~p").unwrap(), Fact::negative(p));
        assert_eq!(space.parse_fact("t").unwrap(), Fact::Logical(TruthValue::True));
        assert_eq!(space.parse_fact("~t").unwrap(), Fact::Logical(TruthValue::False));
        assert!(matches!(
            space.parse_fact("r"),
            Err(LatticeError::UnknownName(_))
        ));
    }

    #[test]
    fn interpretation_respects_involution() {
        let space = space_pq();
        let p = space.atom("p").unwrap();
        let q = space.atom("q").unwrap();
        let interp = Interpretation::from_pairs(
            &space,
            [
                (Fact::positive(p), TruthValue::True),
                (Fact::positive(q), TruthValue::Unknown),
            ],
        )
        .unwrap();
        assert_eq!(interp.value(Fact::negative(p)), TruthValue::False);
        assert_eq!(interp.value(Fact::negative(q)), TruthValue::Unknown);
        for v in TruthValue::ALL {
            assert_eq!(interp.value(Fact::Logical(v)), v);
        }
    }

    #[test]
    fn interpretation_on_empty_universe() {
        let space = FactSpace::new(Vec::<String>::new());
        let interp = Interpretation::from_pairs(&space, []).unwrap();
        assert_eq!(interp.value(Fact::Logical(TruthValue::Unknown)), TruthValue::Unknown);
    }

    #[test]
    fn interpretation_key_errors() {
        let space = space_pq();
        let p = space.atom("p").unwrap();
        let q = space.atom("q").unwrap();
        let negative_key = Interpretation::from_pairs(
            &space,
            [
                (Fact::positive(p), TruthValue::True),
                (Fact::negative(q), TruthValue::False),
            ],
        );
        assert_eq!(negative_key.unwrap_err(), LatticeError::NegativeKey("~q".into()));

        let missing = Interpretation::from_pairs(&space, [(Fact::positive(p), TruthValue::True)]);
        assert_eq!(missing.unwrap_err(), LatticeError::MissingAtom("q".into()));

        let duplicate = Interpretation::from_pairs(
            &space,
            [
                (Fact::positive(p), TruthValue::True),
                (Fact::positive(p), TruthValue::False),
            ],
        );
        assert_eq!(duplicate.unwrap_err(), LatticeError::DuplicateAtom("p".into()));
    }

    #[test]
    fn lookup_outside_the_universe_fails() {
        let space = space_pq();
        let interp = Interpretation::uniform(&space, TruthValue::True);
        let bigger = FactSpace::new(["p", "q", "r"]);
        let r = bigger.atom("r").unwrap();
        assert_eq!(interp.lookup(Fact::positive(r)), Err(LatticeError::ForeignFact));
    }

    #[test]
    fn lookup_negation_law_over_all_interpretations() {
        let space = space_pq();
        for interp in Interpretation::enumerate(space.atom_count()) {
            for id in space.atom_ids() {
                for fact in [Fact::positive(id), Fact::negative(id)] {
                    assert_eq!(
                        interp.value(fact.complement()),
                        interp.value(fact).negate()
                    );
                }
            }
        }
    }

    #[test]
    fn enumerate_counts_and_is_deterministic() {
        let all: Vec<Interpretation> = Interpretation::enumerate(2).collect();
        assert_eq!(all.len(), 9);
        let again: Vec<Interpretation> = Interpretation::enumerate(2).collect();
        assert_eq!(all, again);
        assert_eq!(all[0].values, vec![TruthValue::False, TruthValue::False]);
        assert_eq!(all[8].values, vec![TruthValue::True, TruthValue::True]);
    }

    #[test]
    fn render_is_sorted_by_atom() {
        let space = space_pq();
        let interp = Interpretation::uniform(&space, TruthValue::Unknown);
        assert_eq!(interp.render(&space), "p=u q=u");
    }
}
