//! Symbolic Einstein summation over a unitary frame.
//!
//! The metric is the Kronecker delta. Every tensor kind has a fixed slot
//! pattern of holomorphic (`H`) and antiholomorphic (`A`) positions:
//! `δ`, `r̃` and `r` are `(H, A)`, the curvature `R` is `(H, A, H, A)`.
//! A contracted index must occupy exactly one slot of each kind.

mod rules;
mod verify;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::exact::RationalFunctionN;

pub use rules::{contract, contract_with, Rule};
pub use verify::{
    build_p, build_p_with_coefficient, build_s, build_s_with_coefficient, certify, certify_with, curvature_tensor,
    ricci_tensor, verify_cross_terms, verify_cross_terms_with, verify_key_subcontraction, verify_norm_identities,
    verify_norm_identities_with, IdentityCheck, TensorCertificate, TensorModel,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TensorError {
    #[error("{kind} takes {expected} indices, got {got}")]
    Arity { kind: &'static str, expected: usize, got: usize },
    #[error("index {0:?} occurs {1} times; expected once (free) or twice (contracted)")]
    Multiplicity(String, usize),
    #[error("index {0:?} is contracted between two slots of the same type")]
    SlotMismatch(String),
    #[error("terms have different free indices")]
    FreeIndexMismatch,
    #[error("duplicate index names in {0:?}")]
    DuplicateIndex(Vec<String>),
    #[error("tensor verification failed: {0}")]
    VerificationFailed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FactorKind {
    Delta,
    TracelessRicci,
    Ricci,
    Curvature,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    Holo,
    Anti,
}

const TWO_SLOTS: [Slot; 2] = [Slot::Holo, Slot::Anti];
const FOUR_SLOTS: [Slot; 4] = [Slot::Holo, Slot::Anti, Slot::Holo, Slot::Anti];

impl FactorKind {
    pub fn slots(self) -> &'static [Slot] {
        match self {
            FactorKind::Curvature => &FOUR_SLOTS,
            _ => &TWO_SLOTS,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            FactorKind::Delta => "δ",
            FactorKind::TracelessRicci => "r̃",
            FactorKind::Ricci => "r",
            FactorKind::Curvature => "R",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexedFactor {
    kind: FactorKind,
    indices: Vec<String>,
}

impl IndexedFactor {
    pub fn new(kind: FactorKind, indices: &[&str]) -> Result<Self, TensorError> {
        let expected = kind.slots().len();
        if indices.len() != expected {
            return Err(TensorError::Arity { kind: kind.symbol(), expected, got: indices.len() });
        }
        Ok(IndexedFactor { kind, indices: indices.iter().map(|s| s.to_string()).collect() })
    }

    pub fn delta(a: &str, b: &str) -> Self {
        Self::new(FactorKind::Delta, &[a, b]).expect("arity")
    }

    pub fn traceless_ricci(a: &str, b: &str) -> Self {
        Self::new(FactorKind::TracelessRicci, &[a, b]).expect("arity")
    }

    pub fn ricci(a: &str, b: &str) -> Self {
        Self::new(FactorKind::Ricci, &[a, b]).expect("arity")
    }

    pub fn curvature(i: &str, j: &str, k: &str, l: &str) -> Self {
        Self::new(FactorKind::Curvature, &[i, j, k, l]).expect("arity")
    }

    pub fn kind(&self) -> FactorKind {
        self.kind
    }

    pub fn indices(&self) -> &[String] {
        &self.indices
    }
}

impl fmt::Display for IndexedFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.kind.symbol(), self.indices.join(","))
    }
}

/// Exponents of the formal scalars `s`, `|r̃|^2` and `|R|^2`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ScalarPowers {
    pub s: u32,
    pub rtilde_sq: u32,
    pub riem_sq: u32,
}

impl ScalarPowers {
    pub fn s(k: u32) -> Self {
        ScalarPowers { s: k, ..Default::default() }
    }

    pub fn rtilde_sq(k: u32) -> Self {
        ScalarPowers { rtilde_sq: k, ..Default::default() }
    }

    pub fn riem_sq(k: u32) -> Self {
        ScalarPowers { riem_sq: k, ..Default::default() }
    }

    fn combine(self, other: Self) -> Self {
        ScalarPowers {
            s: self.s + other.s,
            rtilde_sq: self.rtilde_sq + other.rtilde_sq,
            riem_sq: self.riem_sq + other.riem_sq,
        }
    }

    fn is_one(self) -> bool {
        self == ScalarPowers::default()
    }
}

impl fmt::Display for ScalarPowers {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (name, k) in [("s", self.s), ("|r̃|^2", self.rtilde_sq), ("|R|^2", self.riem_sq)] {
            match k {
                0 => {}
                1 => parts.push(name.to_string()),
                _ if name == "s" => parts.push(format!("s^{k}")),
                _ => parts.push(format!("({name})^{k}")),
            }
        }
        f.write_str(&parts.join("·"))
    }
}

/// `coeff · scalars · Π factors`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorTerm {
    coeff: RationalFunctionN,
    scalars: ScalarPowers,
    factors: Vec<IndexedFactor>,
}

type Occurrences = BTreeMap<String, Vec<(usize, usize)>>;

impl TensorTerm {
    pub fn new(coeff: RationalFunctionN, scalars: ScalarPowers, factors: Vec<IndexedFactor>) -> Result<Self, TensorError> {
        let term = TensorTerm { coeff, scalars, factors };
        term.validate()?;
        Ok(term)
    }

    pub fn scalar(coeff: RationalFunctionN, scalars: ScalarPowers) -> Self {
        TensorTerm { coeff, scalars, factors: Vec::new() }
    }

    pub fn coeff(&self) -> &RationalFunctionN {
        &self.coeff
    }

    pub fn scalars(&self) -> ScalarPowers {
        self.scalars
    }

    pub fn factors(&self) -> &[IndexedFactor] {
        &self.factors
    }

    /// Index name to the `(factor, slot)` positions where it occurs.
    fn occurrences(&self) -> Occurrences {
        let mut occ: Occurrences = BTreeMap::new();
        for (fi, factor) in self.factors.iter().enumerate() {
            for (si, name) in factor.indices.iter().enumerate() {
                occ.entry(name.clone()).or_default().push((fi, si));
            }
        }
        occ
    }

    fn slot_of(&self, (fi, si): (usize, usize)) -> Slot {
        self.factors[fi].kind.slots()[si]
    }

    fn validate(&self) -> Result<(), TensorError> {
        for (name, places) in self.occurrences() {
            match places.len() {
                1 => {}
                2 => {
                    if self.slot_of(places[0]) == self.slot_of(places[1]) {
                        return Err(TensorError::SlotMismatch(name));
                    }
                }
                k => return Err(TensorError::Multiplicity(name, k)),
            }
        }
        Ok(())
    }

    /// Free indices with the slot type each occupies.
    pub fn free_indices(&self) -> BTreeMap<String, Slot> {
        self.occurrences()
            .into_iter()
            .filter(|(_, places)| places.len() == 1)
            .map(|(name, places)| {
                let slot = self.slot_of(places[0]);
                (name, slot)
            })
            .collect()
    }

    pub fn is_scalar(&self) -> bool {
        self.factors.is_empty()
    }

    fn product(&self, other: &TensorTerm) -> Result<TensorTerm, TensorError> {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        TensorTerm::new(&self.coeff * &other.coeff, self.scalars.combine(other.scalars), factors)
    }

    /// Factor list in canonical order with bound indices renamed `#0, #1, ...`
    /// by first occurrence. Kähler symmetries of `R` are quotiented out.
    fn canonical_factors(&self) -> Vec<IndexedFactor> {
        let free: BTreeSet<String> = self.free_indices().into_keys().collect();
        let mut sorted = self.factors.clone();
        sorted.sort_by_key(|f| f.kind);
        let mut groups: Vec<Vec<IndexedFactor>> = Vec::new();
        for f in sorted {
            match groups.last_mut() {
                Some(g) if g[0].kind == f.kind => g.push(f),
                _ => groups.push(vec![f]),
            }
        }
        let mut best: Option<Vec<IndexedFactor>> = None;
        let group_perms: Vec<Vec<Vec<IndexedFactor>>> = groups.iter().map(|g| permutations(g)).collect();
        let mut choice = vec![0usize; groups.len()];
        loop {
            let ordered: Vec<IndexedFactor> =
                choice.iter().enumerate().flat_map(|(gi, &pi)| group_perms[gi][pi].iter().cloned()).collect();
            for candidate in symmetry_variants(&ordered) {
                let renamed = rename_bound(&candidate, &free);
                if best.as_ref().is_none_or(|b| renamed < *b) {
                    best = Some(renamed);
                }
            }
            // odometer over the per-group permutations
            let mut k = 0;
            loop {
                if k == choice.len() {
                    return best.unwrap_or_default();
                }
                choice[k] += 1;
                if choice[k] < group_perms[k].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
        }
    }
}

fn permutations(items: &[IndexedFactor]) -> Vec<Vec<IndexedFactor>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head.clone());
            out.push(tail);
        }
    }
    out
}

/// `R_{ijkl} = R_{kjil} = R_{ilkj} = R_{klij}` applied independently to each curvature factor.
fn symmetry_variants(factors: &[IndexedFactor]) -> Vec<Vec<IndexedFactor>> {
    let mut out = vec![factors.to_vec()];
    for (fi, f) in factors.iter().enumerate() {
        if f.kind != FactorKind::Curvature {
            continue;
        }
        let mut next = Vec::with_capacity(out.len() * 4);
        for base in &out {
            for perm in [[0, 1, 2, 3], [2, 1, 0, 3], [0, 3, 2, 1], [2, 3, 0, 1]] {
                let mut v = base.clone();
                v[fi].indices = perm.iter().map(|&p| f.indices[p].clone()).collect();
                next.push(v);
            }
        }
        out = next;
    }
    out
}

fn rename_bound(factors: &[IndexedFactor], free: &BTreeSet<String>) -> Vec<IndexedFactor> {
    let mut names: BTreeMap<String, String> = BTreeMap::new();
    factors
        .iter()
        .map(|f| IndexedFactor {
            kind: f.kind,
            indices: f
                .indices
                .iter()
                .map(|ix| {
                    if free.contains(ix) {
                        ix.clone()
                    } else {
                        let next = format!("#{}", names.len());
                        names.entry(ix.clone()).or_insert(next).clone()
                    }
                })
                .collect(),
        })
        .collect()
}

fn wrap_coeff(c: &RationalFunctionN) -> String {
    let text = c.to_string();
    if text.contains(' ') {
        format!("({text})")
    } else {
        text
    }
}

impl fmt::Display for TensorTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.scalars.is_one() {
            parts.push(self.scalars.to_string());
        }
        parts.extend(self.factors.iter().map(ToString::to_string));
        let body = parts.join("·");
        let one = RationalFunctionN::one();
        if body.is_empty() {
            write!(f, "{}", wrap_coeff(&self.coeff))
        } else if self.coeff == one {
            write!(f, "{body}")
        } else if self.coeff == -&one {
            write!(f, "-{body}")
        } else {
            write!(f, "{}·{body}", wrap_coeff(&self.coeff))
        }
    }
}

/// A sum of terms sharing one set of free indices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TensorExpr {
    terms: Vec<TensorTerm>,
}

impl TensorExpr {
    pub fn new(terms: Vec<TensorTerm>) -> Result<Self, TensorError> {
        let mut iter = terms.iter();
        if let Some(first) = iter.next() {
            first.validate()?;
            let free = first.free_indices();
            for t in iter {
                t.validate()?;
                if t.free_indices() != free {
                    return Err(TensorError::FreeIndexMismatch);
                }
            }
        }
        Ok(TensorExpr { terms })
    }

    pub fn zero() -> Self {
        TensorExpr { terms: Vec::new() }
    }

    pub fn scalar(coeff: RationalFunctionN, scalars: ScalarPowers) -> Self {
        TensorExpr { terms: vec![TensorTerm::scalar(coeff, scalars)] }
    }

    pub fn terms(&self) -> &[TensorTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.coeff.is_zero())
    }

    pub fn free_indices(&self) -> BTreeMap<String, Slot> {
        self.terms.first().map(TensorTerm::free_indices).unwrap_or_default()
    }

    pub fn scale(&self, c: &RationalFunctionN) -> Self {
        TensorExpr {
            terms: self
                .terms
                .iter()
                .map(|t| TensorTerm { coeff: &t.coeff * c, ..t.clone() })
                .collect(),
        }
    }

    pub fn add(&self, other: &TensorExpr) -> Result<Self, TensorError> {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        TensorExpr::new(terms)
    }

    pub fn sub(&self, other: &TensorExpr) -> Result<Self, TensorError> {
        self.add(&other.scale(&-RationalFunctionN::one()))
    }

    /// Distributes the product term by term; a shared index name becomes a contraction.
    pub fn product(&self, other: &TensorExpr) -> Result<Self, TensorError> {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(a.product(b)?);
            }
        }
        TensorExpr::new(terms)
    }

    /// Canonical form: like terms merged, zero terms dropped, deterministic order.
    /// Does not apply any contraction rule.
    pub fn canonical(&self) -> Self {
        let mut merged: BTreeMap<(ScalarPowers, Vec<IndexedFactor>), RationalFunctionN> = BTreeMap::new();
        for t in &self.terms {
            let key = (t.scalars, t.canonical_factors());
            let slot = merged.entry(key).or_insert_with(RationalFunctionN::zero);
            *slot = &*slot + &t.coeff;
        }
        TensorExpr {
            terms: merged
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|((scalars, factors), coeff)| TensorTerm { coeff, scalars, factors })
                .collect(),
        }
    }

    /// Coefficient of a fully contracted scalar monomial.
    pub fn scalar_coefficient(&self, powers: ScalarPowers) -> RationalFunctionN {
        self.terms
            .iter()
            .filter(|t| t.is_scalar() && t.scalars == powers)
            .fold(RationalFunctionN::zero(), |acc, t| &acc + &t.coeff)
    }
}

impl From<TensorTerm> for TensorExpr {
    fn from(term: TensorTerm) -> Self {
        TensorExpr { terms: vec![term] }
    }
}

impl fmt::Display for TensorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let text = t.to_string();
            if i == 0 {
                write!(f, "{text}")?;
            } else if let Some(rest) = text.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {text}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> RationalFunctionN {
        RationalFunctionN::one()
    }

    #[test]
    fn arity_is_checked() {
        assert_eq!(
            IndexedFactor::new(FactorKind::Curvature, &["i", "j"]),
            Err(TensorError::Arity { kind: "R", expected: 4, got: 2 })
        );
    }

    #[test]
    fn multiplicity_and_slots_are_checked() {
        let triple = vec![IndexedFactor::delta("a", "b"), IndexedFactor::delta("b", "c"), IndexedFactor::traceless_ricci("b", "d")];
        assert_eq!(
            TensorTerm::new(one(), ScalarPowers::default(), triple),
            Err(TensorError::Multiplicity("b".into(), 3))
        );
        // two holomorphic slots
        let clash = vec![IndexedFactor::delta("a", "b"), IndexedFactor::delta("a", "c")];
        assert_eq!(TensorTerm::new(one(), ScalarPowers::default(), clash), Err(TensorError::SlotMismatch("a".into())));
    }

    #[test]
    fn free_indices_must_agree() {
        let a = TensorTerm::new(one(), ScalarPowers::default(), vec![IndexedFactor::delta("i", "j")]).unwrap();
        let b = TensorTerm::new(one(), ScalarPowers::default(), vec![IndexedFactor::delta("i", "k")]).unwrap();
        assert_eq!(TensorExpr::new(vec![a, b]), Err(TensorError::FreeIndexMismatch));
    }

    #[test]
    fn canonical_form_ignores_bound_names_and_kahler_symmetry() {
        let t1 = TensorTerm::new(
            one(),
            ScalarPowers::default(),
            vec![IndexedFactor::curvature("i", "a", "c", "b"), IndexedFactor::curvature("a", "c", "b", "j")],
        )
        .unwrap();
        // rename bound, reorder factors, and swap the holomorphic slots of one R
        let t2 = TensorTerm::new(
            one(),
            ScalarPowers::default(),
            vec![IndexedFactor::curvature("y", "z", "x", "j"), IndexedFactor::curvature("z", "y", "i", "x")],
        )
        .unwrap();
        let sum = TensorExpr::new(vec![t1.clone(), t2]).unwrap().canonical();
        assert_eq!(sum.terms().len(), 1);
        assert_eq!(sum.terms()[0].coeff(), &RationalFunctionN::from_int(2));
        let diff = TensorExpr::from(t1.clone()).sub(&TensorExpr::from(t1)).unwrap().canonical();
        assert!(diff.is_zero());
        assert_eq!(diff.to_string(), "0");
    }

    #[test]
    fn display() {
        let n = RationalFunctionN::n();
        let t = TensorTerm::new(n + 2, ScalarPowers::rtilde_sq(1), vec![]).unwrap();
        assert_eq!(t.to_string(), "(n + 2)·|r̃|^2");
        let t = TensorTerm::new(one(), ScalarPowers::s(2), vec![IndexedFactor::delta("i", "j")]).unwrap();
        assert_eq!(t.to_string(), "s^2·δ(i,j)");
    }
}
