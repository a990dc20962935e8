//! Cohomological checks over the four intersection numbers of a Kähler class.
//!
//! Every report is oriented as `lhs >= rhs`, so `margin = lhs - rhs` is
//! positive exactly when the inequality holds strictly.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::closed_forms::BatyrevInvariants;
use crate::exact::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DataError {
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(u32),
    #[error("volume must be positive")]
    NonPositiveVolume,
}

/// `[ω]^n`, `c1[ω]^{n-1}`, `c1^2[ω]^{n-2}` and `c2[ω]^{n-2}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KahlerClassData {
    n: u32,
    vol: Rational,
    deg1: Rational,
    chern11: Rational,
    chern2: Rational,
}

impl KahlerClassData {
    pub fn new(n: u32, vol: Rational, deg1: Rational, chern11: Rational, chern2: Rational) -> Result<Self, DataError> {
        if n < 2 {
            return Err(DataError::DimensionTooSmall(n));
        }
        if !vol.is_positive() {
            return Err(DataError::NonPositiveVolume);
        }
        Ok(KahlerClassData { n, vol, deg1, chern11, chern2 })
    }

    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn vol(&self) -> &Rational {
        &self.vol
    }
    pub fn deg1(&self) -> &Rational {
        &self.deg1
    }
    pub fn chern11(&self) -> &Rational {
        &self.chern11
    }
    pub fn chern2(&self) -> &Rational {
        &self.chern2
    }

    /// Replaces `[ω]` by `λ[ω]`: each number scales by `λ` to the power of
    /// the number of `ω` factors it contains.
    pub fn rescale(&self, lambda: &Rational) -> Result<Self, DataError> {
        let p = |k: u32| num_traits::pow(lambda.clone(), k as usize);
        Self::new(
            self.n,
            &self.vol * p(self.n),
            &self.deg1 * p(self.n - 1),
            &self.chern11 * p(self.n - 2),
            &self.chern2 * p(self.n - 2),
        )
    }

    fn nn(&self) -> i64 {
        i64::from(self.n)
    }

    /// The constant scalar curvature forced by the class when it carries a
    /// cscK metric: `s·[ω]^n = 2n·c1[ω]^{n-1}`.
    pub fn csck_scalar(&self) -> Rational {
        int(2 * self.nn()) * &self.deg1 / &self.vol
    }
}

impl From<&BatyrevInvariants> for KahlerClassData {
    fn from(inv: &BatyrevInvariants) -> Self {
        KahlerClassData {
            n: inv.n,
            vol: inv.vol.clone(),
            deg1: inv.deg1.clone(),
            chern11: inv.chern11.clone(),
            chern2: inv.chern2.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Strict,
    Equality,
    Violated,
}

impl Verdict {
    pub fn from_margin(margin: &Rational) -> Self {
        match margin.cmp(&Rational::zero()) {
            Ordering::Greater => Verdict::Strict,
            Ordering::Equal => Verdict::Equality,
            Ordering::Less => Verdict::Violated,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Strict => "strict",
            Verdict::Equality => "equality",
            Verdict::Violated => "violated",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InequalityReport {
    pub name: &'static str,
    pub lhs: Rational,
    pub rhs: Rational,
    pub verdict: Verdict,
    pub margin: Rational,
    /// What the verdict means geometrically, when it means something.
    pub note: Option<&'static str>,
}

impl InequalityReport {
    fn new(name: &'static str, lhs: Rational, rhs: Rational, meaning: impl Fn(Verdict) -> Option<&'static str>) -> Self {
        let margin = &lhs - &rhs;
        let verdict = Verdict::from_margin(&margin);
        InequalityReport { name, lhs, rhs, verdict, margin, note: meaning(verdict) }
    }
}

/// `(2n·c1[ω]^{n-1})^2 / [ω]^n`, the Cauchy–Schwarz lower bound on `∫s^2ω^n`.
pub fn calabi_trivial_bound(d: &KahlerClassData) -> Rational {
    let x = int(2 * d.nn()) * &d.deg1;
    &x * &x / &d.vol
}

/// `8(n+1)(n·c1^2[ω]^{n-2} - (n+2)·c2[ω]^{n-2})`; vacuous when negative.
pub fn bochner_bound(d: &KahlerClassData) -> Rational {
    let n = d.nn();
    int(8 * (n + 1)) * (int(n) * &d.chern11 - int(n + 2) * &d.chern2)
}

/// `n^2(c1[ω]^{n-1})^2 >= 2(n+1)[ω]^n(n·c1^2[ω]^{n-2} - (n+2)c2[ω]^{n-2})`.
/// A violation rules out cscK metrics in the class.
pub fn csck_obstruction_check(d: &KahlerClassData) -> InequalityReport {
    let n = d.nn();
    let lhs = int(n * n) * &d.deg1 * &d.deg1;
    let rhs = int(2 * (n + 1)) * &d.vol * (int(n) * &d.chern11 - int(n + 2) * &d.chern2);
    InequalityReport::new("cscK obstruction", lhs, rhs, |v| match v {
        Verdict::Violated => Some("no cscK metric in this class"),
        Verdict::Equality => Some("consistent with a Bochner-Kähler metric in this class"),
        Verdict::Strict => None,
    })
}

/// Sign of `bochner_bound - calabi_trivial_bound`; `Greater` means the
/// Bochner bound is strictly sharper.
pub fn compare_lower_bounds(d: &KahlerClassData) -> Ordering {
    bochner_bound(d).cmp(&calabi_trivial_bound(d))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum YauMode {
    /// Data taken with `[ω] = -c1`.
    C1Negative,
    C1Zero,
}

pub fn yau_check(d: &KahlerClassData, mode: YauMode) -> InequalityReport {
    let n = d.nn();
    match mode {
        YauMode::C1Negative => InequalityReport::new(
            "Yau (c1 < 0)",
            int(2 * (n + 1)) * &d.chern2,
            int(n) * &d.vol,
            |v| (v == Verdict::Equality).then_some("covered by the unit ball"),
        ),
        YauMode::C1Zero => InequalityReport::new("Yau (c1 = 0)", d.chern2.clone(), Rational::zero(), |v| {
            (v == Verdict::Equality).then_some("covered by a complex torus")
        }),
    }
}

/// `(n+2)/(8n^2(n+1))`, the coefficient of `s^2[ω]^n` in the Tian bound.
pub fn tian_coefficient(n: u32) -> Rational {
    let n = i64::from(n);
    int(n + 2) / int(8 * n * n * (n + 1))
}

/// `c1^2[ω]^{n-2} - c2[ω]^{n-2} <= (n+2)/(8n^2(n+1))·s^2[ω]^n` with the
/// scalar curvature fixed by the cscK condition.
pub fn tian_check_csck(d: &KahlerClassData) -> InequalityReport {
    tian_check_with_scalar(d, &d.csck_scalar())
}

/// Same inequality with a caller-supplied constant `s`.
pub fn tian_check_with_scalar(d: &KahlerClassData, s: &Rational) -> InequalityReport {
    let bound = tian_coefficient(d.n) * s * s * &d.vol;
    InequalityReport::new("Tian", bound, &d.chern11 - &d.chern2, |v| {
        (v == Verdict::Equality).then_some("constant holomorphic sectional curvature")
    })
}

/// `(2/n)·c2[ω]^{n-2} - 2/(8n^2(n+1))·s^2[ω]^n` under the cscK substitution:
/// the gap between the rewritten obstruction bound and the Tian bound.
pub fn bound_difference(d: &KahlerClassData) -> Rational {
    let n = d.nn();
    let s = d.csck_scalar();
    int(2) / int(n) * &d.chern2 - int(2) / int(8 * n * n * (n + 1)) * &s * &s * &d.vol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_forms::{f_definition, invariants_closed_form};
    use crate::exact::frac;

    fn data(n: u32, vol: i64, deg1: i64, c11: i64, c2: i64) -> KahlerClassData {
        KahlerClassData::new(n, int(vol), int(deg1), int(c11), int(c2)).unwrap()
    }

    fn batyrev(n: u32) -> KahlerClassData {
        (&invariants_closed_form(n, &int(1), &int(1)).unwrap()).into()
    }

    #[test]
    fn rejects_nonpositive_volume() {
        assert_eq!(KahlerClassData::new(2, int(0), int(1), int(1), int(1)), Err(DataError::NonPositiveVolume));
        assert_eq!(KahlerClassData::new(1, int(1), int(1), int(1), int(1)), Err(DataError::DimensionTooSmall(1)));
    }

    #[test]
    fn trivial_bound() {
        assert_eq!(calabi_trivial_bound(&data(2, 3, 5, 8, 4)), frac(400, 3));
        assert_eq!(calabi_trivial_bound(&data(3, 7, 0, 1, 1)), int(0));
        // λ-scaling: (λ^{n-1})^2 / λ^n = λ^{n-2}
        let d = data(4, 85, 149, 261, 98);
        let scaled = d.rescale(&int(2)).unwrap();
        assert_eq!(calabi_trivial_bound(&scaled), calabi_trivial_bound(&d) * int(4));
    }

    #[test]
    fn bochner() {
        assert_eq!(bochner_bound(&data(2, 3, 5, 8, 4)), int(0));
        assert_eq!(bochner_bound(&data(3, 13, 22, 37, 15)), int(1152));
        assert_eq!(bochner_bound(&data(3, 13, 22, 0, 0)), int(0));
    }

    #[test]
    fn obstruction() {
        let r = csck_obstruction_check(&batyrev(4));
        assert_eq!(r.verdict, Verdict::Violated);
        assert_eq!(r.margin, int(-32384));
        assert_eq!(r.note, Some("no cscK metric in this class"));
        let r = csck_obstruction_check(&batyrev(2));
        assert_eq!(r.verdict, Verdict::Strict);
        assert_eq!(r.margin, int(100));
        let r = csck_obstruction_check(&data(3, 1, 0, 0, 0));
        assert_eq!(r.verdict, Verdict::Equality);
    }

    #[test]
    fn comparison_tracks_f() {
        assert_eq!(compare_lower_bounds(&batyrev(4)), Ordering::Greater);
        assert_eq!(compare_lower_bounds(&batyrev(2)), Ordering::Less);
        for n in 2..=12 {
            let inv = invariants_closed_form(n, &frac(2, 3), &int(1)).unwrap();
            let f = f_definition(&inv);
            let d = KahlerClassData::from(&inv);
            assert_eq!(compare_lower_bounds(&d), f.cmp(&Rational::zero()), "n = {n}");
            // vol·(bochner - trivial) = 4f
            assert_eq!(d.vol() * (bochner_bound(&d) - calabi_trivial_bound(&d)), int(4) * f);
        }
    }

    #[test]
    fn yau_cases() {
        let ball = yau_check(&data(2, 3, 0, 0, 1), YauMode::C1Negative);
        assert_eq!(ball.verdict, Verdict::Equality);
        assert_eq!((ball.lhs.clone(), ball.rhs.clone()), (int(6), int(6)));
        assert_eq!(ball.note, Some("covered by the unit ball"));
        let torus = yau_check(&data(3, 5, 0, 0, 0), YauMode::C1Zero);
        assert_eq!(torus.verdict, Verdict::Equality);
        assert_eq!(torus.note, Some("covered by a complex torus"));
        let r = yau_check(&data(3, 1, 0, 0, 1), YauMode::C1Negative);
        assert_eq!((r.verdict, r.lhs, r.rhs), (Verdict::Strict, int(8), int(3)));
        let r = yau_check(&data(3, 1, 0, 0, -1), YauMode::C1Zero);
        assert_eq!(r.verdict, Verdict::Violated);
    }

    #[test]
    fn tian() {
        let r = tian_check_csck(&data(2, 3, 5, 8, 4));
        assert_eq!(r.lhs, frac(50, 9));
        assert_eq!(r.rhs, int(4));
        assert_eq!(r.verdict, Verdict::Strict);
        // equality witness: pick chern2 so that chern11 - chern2 hits the bound exactly
        let base = data(2, 3, 5, 8, 0);
        let bound = tian_check_csck(&base).lhs;
        let eq = KahlerClassData::new(2, int(3), int(5), int(8), int(8) - bound).unwrap();
        let r = tian_check_csck(&eq);
        assert_eq!(r.verdict, Verdict::Equality);
        assert_eq!(r.note, Some("constant holomorphic sectional curvature"));
        let r = tian_check_csck(&data(3, 2, 0, 1, 1));
        assert_eq!(r.verdict, Verdict::Equality);
        assert_eq!(tian_check_csck(&data(3, 2, 0, 1, 4)).verdict, Verdict::Strict);
        assert_eq!(tian_check_with_scalar(&data(2, 3, 5, 8, 4), &int(0)).verdict, Verdict::Violated);
    }

    #[test]
    fn difference_of_upper_bounds() {
        assert_eq!(bound_difference(&data(2, 3, 5, 8, 4)), frac(11, 9));
        assert!(bound_difference(&data(3, 2, 7, 1, 0)).is_negative());
        assert!(bound_difference(&data(3, 2, 0, 1, 5)).is_positive());
    }

    #[test]
    fn verdicts_survive_rescaling() {
        let d = data(5, 781, 1406, 2531, 940);
        let s = d.rescale(&frac(3, 7)).unwrap();
        assert_eq!(csck_obstruction_check(&d).verdict, csck_obstruction_check(&s).verdict);
        assert_eq!(tian_check_csck(&d).verdict, tian_check_csck(&s).verdict);
        assert_eq!(compare_lower_bounds(&d), compare_lower_bounds(&s));
    }
}
