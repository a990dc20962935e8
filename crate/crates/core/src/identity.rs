//! Pointwise curvature identities as exact rational functions of `n`.
//!
//! Apte's two density formulas are taken as axioms; everything else follows
//! by substituting the norm identities certified by the tensor engine.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Signed;

use crate::exact::{int, Rational, RationalFunctionN};
use crate::inequality::KahlerClassData;
use crate::tensor::{certify, ScalarPowers, TensorCertificate, TensorError, TensorExpr};

type RF = RationalFunctionN;

fn n() -> RF {
    RF::n()
}

fn one() -> RF {
    RF::one()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProverError {
    #[error("rewrite rules are cyclic through {0}")]
    CyclicRules(ScalarSymbol),
    #[error("more than one rule rewrites {0}")]
    DuplicateRule(ScalarSymbol),
    #[error("tensor verification did not pass: {0}")]
    TensorNotVerified(#[from] TensorError),
    #[error("tensor norm is not a quadratic curvature monomial: {0}")]
    NotQuadratic(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ScalarSymbol {
    SSq,
    RicSq,
    RtildeSq,
    RiemSq,
    SNormSq,
    PNormSq,
    BNormSq,
}

impl ScalarSymbol {
    pub const ALL: [ScalarSymbol; 7] = [
        ScalarSymbol::SSq,
        ScalarSymbol::RicSq,
        ScalarSymbol::RtildeSq,
        ScalarSymbol::RiemSq,
        ScalarSymbol::SNormSq,
        ScalarSymbol::PNormSq,
        ScalarSymbol::BNormSq,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ScalarSymbol::SSq => "s^2",
            ScalarSymbol::RicSq => "|Ric|^2",
            ScalarSymbol::RtildeSq => "|r̃|^2",
            ScalarSymbol::RiemSq => "|R|^2",
            ScalarSymbol::SNormSq => "|S|^2",
            ScalarSymbol::PNormSq => "|P|^2",
            ScalarSymbol::BNormSq => "|B|^2",
        }
    }

    /// Stable ASCII key for machine-readable output.
    pub fn key(self) -> &'static str {
        match self {
            ScalarSymbol::SSq => "s2",
            ScalarSymbol::RicSq => "ric2",
            ScalarSymbol::RtildeSq => "rtilde2",
            ScalarSymbol::RiemSq => "riem2",
            ScalarSymbol::SNormSq => "snorm2",
            ScalarSymbol::PNormSq => "pnorm2",
            ScalarSymbol::BNormSq => "bochner2",
        }
    }
}

impl fmt::Display for ScalarSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A linear combination of scalar symbols; never stores a zero coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Combo(BTreeMap<ScalarSymbol, RF>);

impl Combo {
    pub fn new() -> Self {
        Combo::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (ScalarSymbol, RF)>) -> Self {
        terms.into_iter().fold(Combo::new(), |acc, (s, c)| acc.plus_term(s, &c))
    }

    pub fn symbol(s: ScalarSymbol) -> Self {
        Combo::from_terms([(s, one())])
    }

    fn plus_term(mut self, s: ScalarSymbol, c: &RF) -> Self {
        let sum = self.coeff(s) + c;
        if sum.is_zero() {
            self.0.remove(&s);
        } else {
            self.0.insert(s, sum);
        }
        self
    }

    pub fn coeff(&self, s: ScalarSymbol) -> RF {
        self.0.get(&s).cloned().unwrap_or_else(RF::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (ScalarSymbol, &RF)> {
        self.0.iter().map(|(s, c)| (*s, c))
    }

    pub fn symbols(&self) -> BTreeSet<ScalarSymbol> {
        self.0.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn scale(&self, c: &RF) -> Self {
        Combo::from_terms(self.iter().map(|(s, x)| (s, x * c)))
    }

    pub fn add(&self, other: &Combo) -> Self {
        other.iter().fold(self.clone(), |acc, (s, c)| acc.plus_term(s, c))
    }

    pub fn sub(&self, other: &Combo) -> Self {
        self.add(&other.scale(&-one()))
    }

    /// Replaces `target` by `replacement` once.
    pub fn substitute(&self, target: ScalarSymbol, replacement: &Combo) -> Self {
        let c = self.coeff(target);
        if c.is_zero() {
            return self.clone();
        }
        let mut rest = self.clone();
        rest.0.remove(&target);
        rest.add(&replacement.scale(&c))
    }

    /// Reads a fully contracted, quadratic tensor scalar as a combination.
    pub fn from_tensor(expr: &TensorExpr) -> Result<Self, ProverError> {
        let mut out = Combo::new();
        for t in expr.terms() {
            let symbol = match t.scalars() {
                p if !t.is_scalar() => return Err(ProverError::NotQuadratic(p.to_string())),
                p if p == ScalarPowers::s(2) => ScalarSymbol::SSq,
                p if p == ScalarPowers::rtilde_sq(1) => ScalarSymbol::RtildeSq,
                p if p == ScalarPowers::riem_sq(1) => ScalarSymbol::RiemSq,
                p => return Err(ProverError::NotQuadratic(p.to_string())),
            };
            out = out.plus_term(symbol, t.coeff());
        }
        Ok(out)
    }
}

/// `c·x + ...` with signs pulled out of the coefficients.
fn signed_sum<'a>(terms: impl Iterator<Item = (&'a str, &'a RF)>) -> String {
    let mut out = String::new();
    for (i, (label, c)) in terms.enumerate() {
        let negative = c.numerator().leading().is_some_and(Signed::is_negative);
        let mag = if negative { -c } else { c.clone() };
        out.push_str(match (i, negative) {
            (0, true) => "-",
            (0, false) => "",
            (_, true) => " - ",
            (_, false) => " + ",
        });
        let text = mag.to_string();
        if mag == one() {
            out.push_str(label);
        } else if text.contains(' ') {
            out.push_str(&format!("({text})·{label}"));
        } else {
            out.push_str(&format!("{text}·{label}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for Combo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&signed_sum(self.iter().map(|(s, c)| (s.as_str(), c))))
    }
}

/// `lhs_label = combo · ω^n`, pointwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointwiseIdentity {
    pub name: String,
    pub lhs_label: String,
    pub combo: Combo,
}

impl PointwiseIdentity {
    pub fn new(name: &str, lhs_label: &str, combo: Combo) -> Self {
        PointwiseIdentity { name: name.to_string(), lhs_label: lhs_label.to_string(), combo }
    }

    pub fn coeff(&self, s: ScalarSymbol) -> RF {
        self.combo.coeff(s)
    }

    fn renamed(self, name: &str, lhs_label: &str) -> Self {
        PointwiseIdentity::new(name, lhs_label, self.combo)
    }
}

impl fmt::Display for PointwiseIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} = [{}]·ω^n", self.name, self.lhs_label, self.combo)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteRule {
    pub target: ScalarSymbol,
    pub replacement: Combo,
}

impl RewriteRule {
    pub fn new(target: ScalarSymbol, replacement: Combo) -> Self {
        RewriteRule { target, replacement }
    }
}

fn check_acyclic(rules: &[RewriteRule]) -> Result<BTreeMap<ScalarSymbol, &Combo>, ProverError> {
    let mut table = BTreeMap::new();
    for r in rules {
        if table.insert(r.target, &r.replacement).is_some() {
            return Err(ProverError::DuplicateRule(r.target));
        }
    }
    // 0 unvisited, 1 on stack, 2 done
    fn visit(
        s: ScalarSymbol,
        table: &BTreeMap<ScalarSymbol, &Combo>,
        state: &mut BTreeMap<ScalarSymbol, u8>,
    ) -> Result<(), ProverError> {
        match state.get(&s).copied().unwrap_or(0) {
            1 => return Err(ProverError::CyclicRules(s)),
            2 => return Ok(()),
            _ => {}
        }
        state.insert(s, 1);
        if let Some(rep) = table.get(&s) {
            for t in rep.symbols() {
                visit(t, table, state)?;
            }
        }
        state.insert(s, 2);
        Ok(())
    }
    let mut state = BTreeMap::new();
    for &s in table.keys() {
        visit(s, &table, &mut state)?;
    }
    Ok(table)
}

/// Substitutes rule targets until none remain; the rule set must be acyclic.
pub fn rewrite(id: &PointwiseIdentity, rules: &[RewriteRule]) -> Result<PointwiseIdentity, ProverError> {
    let table = check_acyclic(rules)?;
    let mut combo = id.combo.clone();
    while let Some(target) = combo.symbols().into_iter().find(|s| table.contains_key(s)) {
        combo = combo.substitute(target, table[&target]);
    }
    Ok(PointwiseIdentity { combo, ..id.clone() })
}

/// Apte's formulas for the `c1^2∧ω^{n-2}` and `c2∧ω^{n-2}` densities.
pub fn apte_axioms() -> (PointwiseIdentity, PointwiseIdentity) {
    let d = n() * (n() - 1);
    let first = Combo::from_terms([
        (ScalarSymbol::SSq, one() / (4 * d.clone())),
        (ScalarSymbol::RicSq, -one() / d.clone()),
    ]);
    let second = Combo::from_terms([
        (ScalarSymbol::SSq, one() / (8 * d.clone())),
        (ScalarSymbol::RicSq, -one() / d.clone()),
        (ScalarSymbol::RiemSq, one() / (2 * d)),
    ]);
    (
        PointwiseIdentity::new("apte1", "c1^2∧ω^{n-2} density", first),
        PointwiseIdentity::new("apte2", "c2∧ω^{n-2} density", second),
    )
}

pub const APTE_PROVENANCE: &str =
    "Apte's c1^2 and c2 density formulas are axioms (Chern-Weil derivation not performed)";

pub const CONVENTION_NOTE: &str = "Besse's Kähler form is 2πω (extra factor 4π^2) and Tian's is πω with half the \
     scalar curvature (extra factor π^2); these are display rescalings only";

/// The substitutions certified by the tensor engine:
/// `|Ric|^2`, `|S|^2`, `|P|^2` by their reduced norms and `|R|^2 = |S|^2 + |P|^2 + |B|^2`.
pub fn norm_rules(cert: &TensorCertificate) -> Result<Vec<RewriteRule>, ProverError> {
    Ok(vec![
        RewriteRule::new(ScalarSymbol::RicSq, Combo::from_tensor(cert.ric_norm())?),
        RewriteRule::new(ScalarSymbol::SNormSq, Combo::from_tensor(cert.s_norm())?),
        RewriteRule::new(ScalarSymbol::PNormSq, Combo::from_tensor(cert.p_norm())?),
        RewriteRule::new(
            ScalarSymbol::RiemSq,
            Combo::from_terms([
                (ScalarSymbol::SNormSq, one()),
                (ScalarSymbol::PNormSq, one()),
                (ScalarSymbol::BNormSq, one()),
            ]),
        ),
    ])
}

/// Derivations that only exist once the tensor identities have been certified.
#[derive(Debug, Clone)]
pub struct Prover {
    rules: Vec<RewriteRule>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BesseAudit {
    /// Bracket of `c1^2[ω]^{n-2}/(n-2)!` against `ω^n/n!`.
    pub c1_display: Combo,
    /// Bracket of `c2[ω]^{n-2}/(n-2)!` against `ω^n/n!`, after factoring out `1/2`.
    pub c2_display: Combo,
    pub corrected: RF,
    pub erroneous: RF,
    /// `corrected - erroneous`
    pub difference: RF,
    /// Dimensions `n >= 2` where the difference vanishes.
    pub vanishing_at: Vec<u32>,
    /// `|r̃|^2` coefficient of `n·c1^2 - (n+2)·c2` if the erroneous value were used.
    pub erroneous_combination_rtilde: RF,
    pub convention_note: &'static str,
}

/// A linear inequality `lhs <= rhs` between global quantities of a Kähler class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Quantity {
    /// `c1^2[ω]^{n-2}`
    C1Sq,
    /// `c2[ω]^{n-2}`
    C2,
    /// `(c1[ω]^{n-1})^2 / [ω]^n`
    Deg1SqOverVol,
    /// `s^2[ω]^n` for the cscK scalar curvature
    SSqVol,
}

impl Quantity {
    pub fn key(self) -> &'static str {
        match self {
            Quantity::C1Sq => "c1sq",
            Quantity::C2 => "c2",
            Quantity::Deg1SqOverVol => "deg1sq_over_vol",
            Quantity::SSqVol => "s2vol",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Quantity::C1Sq => "c1^2[ω]^{n-2}",
            Quantity::C2 => "c2[ω]^{n-2}",
            Quantity::Deg1SqOverVol => "(c1[ω]^{n-1})^2/[ω]^n",
            Quantity::SSqVol => "s^2[ω]^n",
        }
    }

    fn value(self, d: &KahlerClassData) -> Rational {
        match self {
            Quantity::C1Sq => d.chern11().clone(),
            Quantity::C2 => d.chern2().clone(),
            Quantity::Deg1SqOverVol => d.deg1() * d.deg1() / d.vol(),
            Quantity::SSqVol => {
                let s = d.csck_scalar();
                &s * &s * d.vol()
            }
        }
    }
}

pub type LinearForm = BTreeMap<Quantity, RF>;

fn form(terms: impl IntoIterator<Item = (Quantity, RF)>) -> LinearForm {
    let mut out = LinearForm::new();
    for (q, c) in terms {
        let sum = out.get(&q).cloned().unwrap_or_else(RF::zero) + c;
        if sum.is_zero() {
            out.remove(&q);
        } else {
            out.insert(q, sum);
        }
    }
    out
}

fn form_combine(a: &LinearForm, b: &LinearForm, cb: &RF) -> LinearForm {
    form(a.iter().map(|(q, c)| (*q, c.clone())).chain(b.iter().map(|(q, c)| (*q, c * cb))))
}

fn form_scale(a: &LinearForm, c: &RF) -> LinearForm {
    form(a.iter().map(|(q, x)| (*q, x * c)))
}

pub fn format_form(f: &LinearForm) -> String {
    signed_sum(f.iter().map(|(q, c)| (q.label(), c)))
}

pub fn evaluate_form(f: &LinearForm, d: &KahlerClassData) -> Rational {
    let k = int(i64::from(d.n()));
    f.iter().fold(int(0), |acc, (q, c)| acc + c.eval(&k).expect("no pole for n >= 2") * q.value(d))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiRewrite {
    /// The obstruction inequality as stated: `n·c1^2 - (n+2)·c2 <= n^2/(2(n+1))·deg1^2/vol`.
    pub obstruction: (LinearForm, LinearForm),
    /// After dividing by `n` and moving `c2`: `c1^2 - c2 <= ...`.
    pub rearranged: (LinearForm, LinearForm),
    /// After the cscK substitution `deg1^2/vol = s^2[ω]^n/(4n^2)`.
    pub csck: (LinearForm, LinearForm),
    /// Tian's upper bound for `c1^2 - c2`.
    pub tian_rhs: LinearForm,
    /// `csck.1 - tian_rhs`
    pub difference: LinearForm,
}

impl LiRewrite {
    pub fn s_coefficient(&self) -> RF {
        self.csck.1.get(&Quantity::SSqVol).cloned().unwrap_or_else(RF::zero)
    }

    pub fn c2_coefficient(&self) -> RF {
        self.csck.1.get(&Quantity::C2).cloned().unwrap_or_else(RF::zero)
    }

    /// The difference of the two upper bounds on concrete data.
    pub fn difference_on(&self, d: &KahlerClassData) -> Rational {
        evaluate_form(&self.difference, d)
    }
}

impl Prover {
    /// Runs the tensor verification first; refuses to build otherwise.
    pub fn new() -> Result<Self, ProverError> {
        Prover::from_certificate(&certify()?)
    }

    pub fn from_certificate(cert: &TensorCertificate) -> Result<Self, ProverError> {
        let rules = norm_rules(cert)?;
        check_acyclic(&rules)?;
        Ok(Prover { rules })
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    pub fn integral1(&self) -> PointwiseIdentity {
        let (a1, _) = apte_axioms();
        rewrite(&a1, &self.rules).expect("acyclic").renamed("integral1", "c1^2∧ω^{n-2} density")
    }

    pub fn integral2(&self) -> PointwiseIdentity {
        let (_, a2) = apte_axioms();
        rewrite(&a2, &self.rules).expect("acyclic").renamed("integral2", "c2∧ω^{n-2} density")
    }

    /// `n·integral1 - (n+2)·integral2`; its `|r̃|^2` coefficient cancels identically.
    pub fn combination(&self) -> PointwiseIdentity {
        let combo = self.integral1().combo.scale(&n()).sub(&self.integral2().combo.scale(&(n() + 2)));
        PointwiseIdentity::new("integral3", "(n·c1^2 - (n+2)·c2)∧ω^{n-2} density", combo)
    }

    pub fn besse_audit(&self) -> BesseAudit {
        let rescale = n() * (n() - 1);
        let c1_display = self.integral1().combo.scale(&rescale);
        let c2_display = self.integral2().combo.scale(&(2 * rescale));
        let corrected = c2_display.coeff(ScalarSymbol::RtildeSq);
        let erroneous = -2 * (n() - 1) / n();
        let difference = &corrected - &erroneous;
        let vanishing_at = difference
            .numerator()
            .rational_roots()
            .into_iter()
            .filter(|r| r.is_integer() && *r >= int(2))
            .filter_map(|r| u32::try_from(r.to_integer()).ok())
            .collect();
        // erroneous c2 density |r̃|^2 coefficient: (1/2)·erroneous/(n(n-1))
        let wrong_c2 = &erroneous / &(2 * n() * (n() - 1));
        let erroneous_combination_rtilde =
            n() * self.integral1().coeff(ScalarSymbol::RtildeSq) - (n() + 2) * wrong_c2;
        BesseAudit {
            c1_display,
            c2_display,
            corrected,
            erroneous,
            difference,
            vanishing_at,
            erroneous_combination_rtilde,
            convention_note: CONVENTION_NOTE,
        }
    }

    /// `integral1 - integral2`: the density of `(c1^2 - c2)∧ω^{n-2}`.
    pub fn tian_integrand(&self) -> PointwiseIdentity {
        let combo = self.integral1().combo.sub(&self.integral2().combo);
        PointwiseIdentity::new("tian", "(c1^2 - c2)∧ω^{n-2} density", combo)
    }

    /// `(2/n)·(integral2 - s^2/(8n(n+1)))`: the density of the difference of the two upper bounds.
    pub fn bound_difference(&self) -> PointwiseIdentity {
        let shift = Combo::from_terms([(ScalarSymbol::SSq, one() / (8 * n() * (n() + 1)))]);
        let combo = self.integral2().combo.sub(&shift).scale(&(2 / n()));
        PointwiseIdentity::new(
            "bound_difference",
            "(2/n)·c2∧ω^{n-2} - 2/(8n^2(n+1))·s^2·ω^n density",
            combo,
        )
    }

    /// Rewrites the obstruction inequality into Li's form and subtracts Tian's bound.
    pub fn li_rewrite(&self) -> LiRewrite {
        use Quantity::*;
        let obstruction = (
            form([(C1Sq, n()), (C2, -(n() + 2))]),
            form([(Deg1SqOverVol, n() * n() / (2 * (n() + 1)))]),
        );
        let inv_n = one() / n();
        // divide by n, then subtract c2 from both sides after moving (n+2)/n·c2 across
        let c2 = form([(C2, one())]);
        let lhs = form_combine(&form_scale(&obstruction.0, &inv_n), &c2, &((n() + 2) / n() - 1));
        let rhs = form_combine(&form_scale(&obstruction.1, &inv_n), &c2, &((n() + 2) / n() - 1));
        let rearranged = (lhs.clone(), rhs.clone());
        // s = 2n·deg1/vol, so deg1^2/vol = s^2·vol/(4n^2)
        let d = rhs.get(&Deg1SqOverVol).cloned().unwrap_or_else(RF::zero);
        let mut csck_rhs = rhs;
        csck_rhs.remove(&Deg1SqOverVol);
        let csck_rhs = form_combine(&csck_rhs, &form([(SSqVol, one() / (4 * n() * n()))]), &d);
        let tian_rhs = form([(SSqVol, (n() + 2) / (8 * n() * n() * (n() + 1)))]);
        let difference = form_combine(&csck_rhs, &tian_rhs, &-one());
        LiRewrite { obstruction, rearranged, csck: (lhs, csck_rhs), tian_rhs, difference }
    }
}

/// One derived coefficient set compared against its closed form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientCheck {
    pub identity: String,
    pub symbol: ScalarSymbol,
    pub derived: RF,
    pub expected: RF,
    pub symbolic: bool,
    /// Agreement of the evaluated values at every `n` in the numeric range.
    pub numeric: bool,
}

impl CoefficientCheck {
    pub fn passed(&self) -> bool {
        self.symbolic && self.numeric
    }
}

pub const NUMERIC_RANGE: std::ops::RangeInclusive<i64> = 2..=40;

fn check(identity: &PointwiseIdentity, expected: &[(ScalarSymbol, RF)]) -> Vec<CoefficientCheck> {
    let mut symbols: BTreeSet<ScalarSymbol> = identity.combo.symbols();
    symbols.extend(expected.iter().map(|(s, _)| *s));
    symbols
        .into_iter()
        .map(|symbol| {
            let derived = identity.coeff(symbol);
            let exp = expected.iter().find(|(s, _)| *s == symbol).map(|(_, c)| c.clone()).unwrap_or_else(RF::zero);
            let symbolic = (&derived - &exp).is_zero();
            let numeric = NUMERIC_RANGE.clone().all(|k| derived.eval(&int(k)).ok() == exp.eval(&int(k)).ok());
            CoefficientCheck { identity: identity.name.clone(), symbol, derived, expected: exp, symbolic, numeric }
        })
        .collect()
}

/// Every derived coefficient, against the displayed closed forms.
#[derive(Debug, Clone)]
pub struct IdentityReport {
    pub identities: Vec<PointwiseIdentity>,
    pub checks: Vec<CoefficientCheck>,
    pub besse: BesseAudit,
    pub li: LiRewrite,
    /// Extra named facts: (label, holds).
    pub facts: Vec<(&'static str, bool)>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CoefficientCheck::passed) && self.facts.iter().all(|(_, ok)| *ok)
    }
}

pub fn verify_identities(prover: &Prover) -> IdentityReport {
    use ScalarSymbol::*;
    let k = n();
    let i1 = prover.integral1();
    let i2 = prover.integral2();
    let i3 = prover.combination();
    let tian = prover.tian_integrand();
    let diff = prover.bound_difference();
    let (a1, a2) = apte_axioms();

    let mut checks = Vec::new();
    checks.extend(check(&a1, &[(SSq, one() / (4 * k.clone() * (k.clone() - 1))), (RicSq, -one() / (k.clone() * (k.clone() - 1)))]));
    checks.extend(check(
        &a2,
        &[
            (SSq, one() / (8 * k.clone() * (k.clone() - 1))),
            (RicSq, -one() / (k.clone() * (k.clone() - 1))),
            (RiemSq, one() / (2 * k.clone() * (k.clone() - 1))),
        ],
    ));
    checks.extend(check(&i1, &[(SSq, one() / (4 * k.clone() * k.clone())), (RtildeSq, -one() / (k.clone() * (k.clone() - 1)))]));
    checks.extend(check(
        &i2,
        &[
            (SSq, one() / (8 * k.clone() * (k.clone() + 1))),
            (RtildeSq, -one() / ((k.clone() + 2) * (k.clone() - 1))),
            (BNormSq, one() / (2 * k.clone() * (k.clone() - 1))),
        ],
    ));
    checks.extend(check(
        &i3,
        &[(SSq, one() / (8 * (k.clone() + 1))), (BNormSq, -(k.clone() + 2) / (2 * k.clone() * (k.clone() - 1)))],
    ));
    checks.extend(check(
        &tian,
        &[
            (SSq, (k.clone() + 2) / (8 * k.clone() * k.clone() * (k.clone() + 1))),
            (RtildeSq, -2 * one() / (k.clone() * (k.clone() + 2) * (k.clone() - 1))),
            (BNormSq, -one() / (2 * k.clone() * (k.clone() - 1))),
        ],
    ));
    checks.extend(check(
        &diff,
        &[
            (RtildeSq, -2 * one() / (k.clone() * (k.clone() + 2) * (k.clone() - 1))),
            (BNormSq, one() / (k.clone() * k.clone() * (k.clone() - 1))),
        ],
    ));

    let besse = prover.besse_audit();
    let li = prover.li_rewrite();
    let quarter_minus = one() / (4 * k.clone() * k.clone()) - one() / (8 * k.clone() * (k.clone() + 1));
    let facts = vec![
        ("integral3 has no |r̃|^2 term", i3.coeff(RtildeSq).is_zero()),
        (
            "1/(4n^2) - 1/(8n(n+1)) = (n+2)/(8n^2(n+1))",
            (quarter_minus - (k.clone() + 2) / (8 * k.clone() * k.clone() * (k.clone() + 1))).is_zero(),
        ),
        (
            "Besse c1 display = [(n-1)/(4n)·s^2 - |r̃|^2]",
            besse.c1_display == Combo::from_terms([(SSq, (k.clone() - 1) / (4 * k.clone())), (RtildeSq, -one())]),
        ),
        (
            "Besse c2 display = (1/2)[(n-1)/(4(n+1))·s^2 - 2n/(n+2)·|r̃|^2 + |B|^2]",
            besse.c2_display
                == Combo::from_terms([
                    (SSq, (k.clone() - 1) / (4 * (k.clone() + 1))),
                    (RtildeSq, -2 * k.clone() / (k.clone() + 2)),
                    (BNormSq, one()),
                ]),
        ),
        ("Besse corrected coefficient = -2n/(n+2)", besse.corrected == -2 * k.clone() / (k.clone() + 2)),
        (
            "Besse difference = (2n-4)/(n(n+2))",
            besse.difference == (2 * k.clone() - 4) / (k.clone() * (k.clone() + 2)),
        ),
        ("Besse difference vanishes only at n = 2", besse.vanishing_at == vec![2]),
        ("erroneous coefficient breaks the cancellation", !besse.erroneous_combination_rtilde.is_zero()),
        ("Li s^2[ω]^n coefficient = 1/(8n(n+1))", li.s_coefficient() == one() / (8 * k.clone() * (k.clone() + 1))),
        ("Li c2 coefficient = 2/n", li.c2_coefficient() == 2 / k.clone()),
    ];
    IdentityReport { identities: vec![a1, a2, i1, i2, i3, tian, diff], checks, besse, li, facts }
}

/// Evaluates a coefficient at an integer dimension `k >= 2`.
pub fn eval_at(c: &RF, k: u32) -> Rational {
    c.eval(&int(i64::from(k))).expect("no pole at n >= 2")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_forms::invariants_closed_form;
    use crate::exact::frac;
    use crate::inequality::bound_difference;
    use crate::tensor::{certify_with, TensorModel};
    use ScalarSymbol::*;

    fn prover() -> Prover {
        Prover::new().unwrap()
    }

    #[test]
    fn apte_coefficients() {
        let (a1, a2) = apte_axioms();
        assert_eq!(eval_at(&a1.coeff(SSq), 2), frac(1, 8));
        assert_eq!(eval_at(&a1.coeff(RicSq), 3), frac(-1, 6));
        assert_eq!(eval_at(&a2.coeff(RiemSq), 2), frac(1, 4));
    }

    #[test]
    fn empty_rules_leave_identity_unchanged() {
        let (a1, _) = apte_axioms();
        assert_eq!(rewrite(&a1, &[]).unwrap(), a1);
    }

    #[test]
    fn cyclic_and_duplicate_rules_are_rejected() {
        let (a1, _) = apte_axioms();
        let cyc = [
            RewriteRule::new(RicSq, Combo::symbol(RtildeSq)),
            RewriteRule::new(RtildeSq, Combo::symbol(RicSq)),
        ];
        assert!(matches!(rewrite(&a1, &cyc), Err(ProverError::CyclicRules(_))));
        let self_loop = [RewriteRule::new(RicSq, Combo::symbol(RicSq).add(&Combo::symbol(SSq)))];
        assert!(matches!(rewrite(&a1, &self_loop), Err(ProverError::CyclicRules(RicSq))));
        let dup = [RewriteRule::new(SSq, Combo::new()), RewriteRule::new(SSq, Combo::new())];
        assert_eq!(rewrite(&a1, &dup), Err(ProverError::DuplicateRule(SSq)));
    }

    #[test]
    fn integral_identities() {
        let p = prover();
        let i1 = p.integral1();
        assert_eq!(i1.combo.to_string(), "1/(4n^2)·s^2 - (1/(n^2 - n))·|r̃|^2");
        let i2 = p.integral2();
        assert_eq!(i2.coeff(BNormSq), one() / (2 * n() * (n() - 1)));
        assert!(i2.coeff(RiemSq).is_zero() && i2.coeff(RicSq).is_zero());
        let i3 = p.combination();
        assert!(i3.coeff(RtildeSq).is_zero());
        assert_eq!(i3.coeff(SSq), one() / (8 * (n() + 1)));
    }

    #[test]
    fn besse_audit_values() {
        let a = prover().besse_audit();
        assert_eq!(a.corrected.to_string(), "-2n/(n + 2)");
        assert_eq!(a.difference.to_string(), "(2n - 4)/(n^2 + 2n)");
        assert_eq!(a.vanishing_at, vec![2]);
        assert_eq!(eval_at(&a.difference, 2), int(0));
    }

    #[test]
    fn tian_and_bound_difference() {
        let p = prover();
        let t = p.tian_integrand();
        assert_eq!(eval_at(&t.coeff(SSq), 2), frac(1, 24));
        let d = p.bound_difference();
        assert!(d.coeff(SSq).is_zero());
        assert_eq!(eval_at(&d.coeff(BNormSq), 2), frac(1, 4));
    }

    #[test]
    fn li_rewrite_matches_inequality_suite() {
        let li = prover().li_rewrite();
        assert_eq!(li.s_coefficient(), one() / (8 * n() * (n() + 1)));
        assert_eq!(li.c2_coefficient(), 2 / n());
        for k in 2..12 {
            let inv = invariants_closed_form(k, &int(1), &frac(3, 2)).unwrap();
            let d = KahlerClassData::from(&inv);
            assert_eq!(li.difference_on(&d), bound_difference(&d));
        }
        let d = KahlerClassData::from(&invariants_closed_form(2, &int(1), &int(1)).unwrap());
        assert_eq!(li.difference_on(&d), frac(11, 9));
    }

    #[test]
    fn full_report_passes() {
        let r = verify_identities(&prover());
        for c in &r.checks {
            assert!(c.passed(), "{} {}: {} vs {}", c.identity, c.symbol, c.derived, c.expected);
        }
        for (label, ok) in &r.facts {
            assert!(ok, "{label}");
        }
    }

    #[test]
    fn prover_refuses_unverified_tensors() {
        let model = TensorModel { p_coefficient: one() / (n() + 3), ..TensorModel::default() };
        let err = certify_with(&model).map(|c| Prover::from_certificate(&c));
        assert!(err.is_err());
    }
}
