//! Contraction rules and the rewrite driver.

use super::{FactorKind, IndexedFactor, ScalarPowers, TensorExpr, TensorTerm};
use crate::exact::RationalFunctionN;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    /// `δ_{aa} → n`
    DeltaTrace,
    /// `δ_{ab}δ_{bc} → δ_{ac}`
    DeltaChain,
    /// `δ_{ab}T_{..b..} → T_{..a..}`
    DeltaSubstitute,
    /// `r̃_{aa} → 0`
    TracelessTrace,
    /// `r̃_{ab}r̃_{ba} → |r̃|^2`
    TracelessPair,
    /// `r_{ab} → r̃_{ab} + (s/2n)δ_{ab}`
    RicciSplit,
    /// `r_{aa} → s/2`
    RicciTrace,
    /// a trace of `R` over one holomorphic and one antiholomorphic slot gives `r`
    CurvatureTrace,
    /// `R_{ijkl}R_{jilk} → |R|^2`
    CurvaturePair,
}

impl Rule {
    pub const ALL: [Rule; 9] = [
        Rule::DeltaTrace,
        Rule::DeltaChain,
        Rule::DeltaSubstitute,
        Rule::TracelessTrace,
        Rule::TracelessPair,
        Rule::RicciSplit,
        Rule::RicciTrace,
        Rule::CurvatureTrace,
        Rule::CurvaturePair,
    ];
}

/// One place where a rule applies: the rule, a factor, and a rule-specific
/// partner (second factor or slot).
#[derive(Debug, Clone, Copy)]
struct Redex {
    rule: Rule,
    at: usize,
    with: usize,
    slot: usize,
}

fn is_traced(f: &IndexedFactor) -> bool {
    f.kind != FactorKind::Curvature && f.indices[0] == f.indices[1]
}

fn redexes(term: &TensorTerm) -> Vec<Redex> {
    let fs = &term.factors;
    let mut out = Vec::new();
    let occ = term.occurrences();
    let partner = |fi: usize, name: &str| -> Option<(usize, usize)> {
        occ.get(name).and_then(|places| places.iter().copied().find(|&(f, _)| f != fi))
    };
    for (fi, f) in fs.iter().enumerate() {
        match f.kind {
            FactorKind::Delta => {
                if is_traced(f) {
                    out.push(Redex { rule: Rule::DeltaTrace, at: fi, with: fi, slot: 0 });
                    continue;
                }
                for slot in 0..2 {
                    if let Some((gi, _)) = partner(fi, &f.indices[slot]) {
                        let rule = if fs[gi].kind == FactorKind::Delta { Rule::DeltaChain } else { Rule::DeltaSubstitute };
                        out.push(Redex { rule, at: fi, with: gi, slot });
                    }
                }
            }
            FactorKind::TracelessRicci => {
                if is_traced(f) {
                    out.push(Redex { rule: Rule::TracelessTrace, at: fi, with: fi, slot: 0 });
                    continue;
                }
                if let Some((gi, 0)) = partner(fi, &f.indices[1]) {
                    let g = &fs[gi];
                    if gi > fi && g.kind == FactorKind::TracelessRicci && g.indices[1] == f.indices[0] {
                        out.push(Redex { rule: Rule::TracelessPair, at: fi, with: gi, slot: 0 });
                    }
                }
            }
            FactorKind::Ricci => {
                if is_traced(f) {
                    out.push(Redex { rule: Rule::RicciTrace, at: fi, with: fi, slot: 0 });
                }
                out.push(Redex { rule: Rule::RicciSplit, at: fi, with: fi, slot: 0 });
            }
            FactorKind::Curvature => {
                for h in [0, 2] {
                    for a in [1, 3] {
                        if f.indices[h] == f.indices[a] {
                            out.push(Redex { rule: Rule::CurvatureTrace, at: fi, with: fi, slot: h * 4 + a });
                        }
                    }
                }
                for (gi, g) in fs.iter().enumerate().skip(fi + 1) {
                    if fully_paired(f, g) {
                        out.push(Redex { rule: Rule::CurvaturePair, at: fi, with: gi, slot: 0 });
                    }
                }
            }
        }
    }
    out
}

/// Two curvature factors sharing all four (distinct) indices, holomorphic
/// slots of one against antiholomorphic slots of the other.
fn fully_paired(f: &IndexedFactor, g: &IndexedFactor) -> bool {
    if g.kind != FactorKind::Curvature {
        return false;
    }
    let ix = &f.indices;
    let distinct = (0..4).all(|a| (a + 1..4).all(|b| ix[a] != ix[b]));
    let same_set = |x: [&String; 2], y: [&String; 2]| (x[0] == y[0] && x[1] == y[1]) || (x[0] == y[1] && x[1] == y[0]);
    distinct
        && same_set([&ix[0], &ix[2]], [&g.indices[1], &g.indices[3]])
        && same_set([&ix[1], &ix[3]], [&g.indices[0], &g.indices[2]])
}

fn without(factors: &[IndexedFactor], drop: &[usize]) -> Vec<IndexedFactor> {
    factors
        .iter()
        .enumerate()
        .filter(|(i, _)| !drop.contains(i))
        .map(|(_, f)| f.clone())
        .collect()
}

fn rebuild(term: &TensorTerm, coeff: RationalFunctionN, extra: ScalarPowers, factors: Vec<IndexedFactor>) -> TensorTerm {
    TensorTerm { coeff, scalars: term.scalars.combine(extra), factors }
}

fn apply(term: &TensorTerm, r: Redex) -> Vec<TensorTerm> {
    let n = RationalFunctionN::n();
    let none = ScalarPowers::default();
    let f = &term.factors[r.at];
    match r.rule {
        Rule::DeltaTrace => vec![rebuild(term, &term.coeff * &n, none, without(&term.factors, &[r.at]))],
        Rule::DeltaChain | Rule::DeltaSubstitute => {
            let gone = &f.indices[r.slot];
            let keep = &f.indices[1 - r.slot];
            let mut factors = term.factors.clone();
            for ix in factors[r.with].indices.iter_mut() {
                if ix == gone {
                    *ix = keep.clone();
                }
            }
            vec![rebuild(term, term.coeff.clone(), none, without(&factors, &[r.at]))]
        }
        Rule::TracelessTrace => Vec::new(),
        Rule::TracelessPair => {
            vec![rebuild(term, term.coeff.clone(), ScalarPowers::rtilde_sq(1), without(&term.factors, &[r.at, r.with]))]
        }
        Rule::RicciTrace => {
            let half = RationalFunctionN::one() / RationalFunctionN::from_int(2);
            vec![rebuild(term, &term.coeff * &half, ScalarPowers::s(1), without(&term.factors, &[r.at]))]
        }
        Rule::RicciSplit => {
            let (a, b) = (f.indices[0].as_str(), f.indices[1].as_str());
            let mut traceless = term.factors.clone();
            traceless[r.at] = IndexedFactor::traceless_ricci(a, b);
            let mut metric = term.factors.clone();
            metric[r.at] = IndexedFactor::delta(a, b);
            let s_part = RationalFunctionN::one() / (2 * n);
            vec![
                rebuild(term, term.coeff.clone(), none, traceless),
                rebuild(term, &term.coeff * &s_part, ScalarPowers::s(1), metric),
            ]
        }
        Rule::CurvatureTrace => {
            let (h, a) = (r.slot / 4, r.slot % 4);
            let (oh, oa) = (2 - h, 4 - a);
            let mut factors = term.factors.clone();
            factors[r.at] = IndexedFactor::ricci(&f.indices[oh], &f.indices[oa]);
            vec![rebuild(term, term.coeff.clone(), none, factors)]
        }
        Rule::CurvaturePair => {
            vec![rebuild(term, term.coeff.clone(), ScalarPowers::riem_sq(1), without(&term.factors, &[r.at, r.with]))]
        }
    }
}

/// Applies the rules until no redex remains; `choose(k)` picks which of the
/// `k` available redexes fires next. Returns the canonical form.
pub fn contract_with(expr: &TensorExpr, choose: &mut dyn FnMut(usize) -> usize) -> TensorExpr {
    let mut pending: Vec<TensorTerm> = expr.terms.iter().rev().cloned().collect();
    let mut done = Vec::new();
    while let Some(term) = pending.pop() {
        if term.coeff.is_zero() {
            continue;
        }
        let found = redexes(&term);
        if found.is_empty() {
            done.push(term);
            continue;
        }
        let pick = choose(found.len()).min(found.len() - 1);
        pending.extend(apply(&term, found[pick]).into_iter().rev());
    }
    TensorExpr { terms: done }.canonical()
}

/// Full reduction with a fixed rule order (first redex wins).
pub fn contract(expr: &TensorExpr) -> TensorExpr {
    contract_with(expr, &mut |_| 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn term(factors: Vec<IndexedFactor>) -> TensorExpr {
        TensorTerm::new(RationalFunctionN::one(), ScalarPowers::default(), factors).unwrap().into()
    }

    fn n() -> RationalFunctionN {
        RationalFunctionN::n()
    }

    #[test]
    fn delta_trace() {
        let e = term(vec![IndexedFactor::delta("a", "a")]);
        assert_eq!(contract(&e), TensorExpr::scalar(n(), ScalarPowers::default()));
    }

    #[test]
    fn delta_cycle() {
        let e = term(vec![
            IndexedFactor::delta("a", "b"),
            IndexedFactor::delta("b", "c"),
            IndexedFactor::delta("c", "a"),
        ]);
        assert_eq!(contract(&e), TensorExpr::scalar(n(), ScalarPowers::default()));
    }

    #[test]
    fn delta_chain_keeps_free_indices() {
        let e = term(vec![IndexedFactor::delta("i", "b"), IndexedFactor::delta("b", "j")]);
        assert_eq!(contract(&e), term(vec![IndexedFactor::delta("i", "j")]));
        let e = term(vec![
            IndexedFactor::delta("i", "a"),
            IndexedFactor::traceless_ricci("a", "b"),
            IndexedFactor::delta("b", "j"),
        ]);
        assert_eq!(contract(&e), term(vec![IndexedFactor::traceless_ricci("i", "j")]));
    }

    #[test]
    fn traceless_rules() {
        let e = term(vec![IndexedFactor::traceless_ricci("a", "a")]);
        assert!(contract(&e).is_zero());
        let e = term(vec![IndexedFactor::traceless_ricci("a", "b"), IndexedFactor::traceless_ricci("b", "a")]);
        assert_eq!(contract(&e), TensorExpr::scalar(RationalFunctionN::one(), ScalarPowers::rtilde_sq(1)));
    }

    #[test]
    fn ricci_trace_is_half_scalar() {
        let e = term(vec![IndexedFactor::ricci("a", "a")]);
        let half = RationalFunctionN::one() / RationalFunctionN::from_int(2);
        assert_eq!(contract(&e), TensorExpr::scalar(half, ScalarPowers::s(1)));
    }

    #[test]
    fn curvature_double_trace() {
        // R_{iikk} = r_{kk} = s/2, whichever pair is traced first
        for e in [
            term(vec![IndexedFactor::curvature("a", "a", "b", "b")]),
            term(vec![IndexedFactor::curvature("a", "b", "b", "a")]),
        ] {
            let half = RationalFunctionN::one() / RationalFunctionN::from_int(2);
            assert_eq!(contract(&e), TensorExpr::scalar(half, ScalarPowers::s(1)));
        }
    }

    #[test]
    fn curvature_self_pairing() {
        let e = term(vec![IndexedFactor::curvature("i", "j", "k", "l"), IndexedFactor::curvature("j", "i", "l", "k")]);
        assert_eq!(contract(&e), TensorExpr::scalar(RationalFunctionN::one(), ScalarPowers::riem_sq(1)));
        let e = term(vec![IndexedFactor::curvature("i", "j", "k", "l"), IndexedFactor::curvature("l", "k", "j", "i")]);
        assert_eq!(contract(&e), TensorExpr::scalar(RationalFunctionN::one(), ScalarPowers::riem_sq(1)));
    }
}
