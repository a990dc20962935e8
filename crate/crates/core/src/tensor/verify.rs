//! The curvature-decomposition tensors `S`, `P` and the norm identities they satisfy.

use std::fmt;

use super::rules::contract;
use super::{IndexedFactor, ScalarPowers, TensorError, TensorExpr, TensorTerm};
use crate::exact::RationalFunctionN;

fn n() -> RationalFunctionN {
    RationalFunctionN::n()
}

fn one() -> RationalFunctionN {
    RationalFunctionN::one()
}

fn distinct(free: &[&str; 4]) -> Result<(), TensorError> {
    for a in 0..4 {
        for b in a + 1..4 {
            if free[a] == free[b] {
                return Err(TensorError::DuplicateIndex(free.iter().map(|s| s.to_string()).collect()));
            }
        }
    }
    Ok(())
}

fn terms(coeff: &RationalFunctionN, scalars: ScalarPowers, products: Vec<Vec<IndexedFactor>>) -> TensorExpr {
    let terms = products
        .into_iter()
        .map(|fs| TensorTerm::new(coeff.clone(), scalars, fs).expect("distinct free indices"))
        .collect();
    TensorExpr::new(terms).expect("shared free indices")
}

/// Coefficients of the two decomposition tensors; the defaults are
/// `s/(2n(n+1))` for `S` and `1/(n+2)` for `P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorModel {
    pub s_coefficient: RationalFunctionN,
    pub p_coefficient: RationalFunctionN,
}

impl Default for TensorModel {
    fn default() -> Self {
        TensorModel {
            s_coefficient: one() / (2 * n() * (n() + 1)),
            p_coefficient: one() / (n() + 2),
        }
    }
}

/// `S_{ijkl} = s/(2n(n+1))·(δ_{ij}δ_{kl} + δ_{il}δ_{kj})`
pub fn build_s(free: [&str; 4]) -> Result<TensorExpr, TensorError> {
    build_s_with_coefficient(free, &TensorModel::default().s_coefficient)
}

pub fn build_s_with_coefficient(free: [&str; 4], coeff: &RationalFunctionN) -> Result<TensorExpr, TensorError> {
    distinct(&free)?;
    let [i, j, k, l] = free;
    Ok(terms(
        coeff,
        ScalarPowers::s(1),
        vec![
            vec![IndexedFactor::delta(i, j), IndexedFactor::delta(k, l)],
            vec![IndexedFactor::delta(i, l), IndexedFactor::delta(k, j)],
        ],
    ))
}

/// `P_{ijkl} = 1/(n+2)·(δ_{ij}r̃_{kl} + δ_{kl}r̃_{ij} + δ_{il}r̃_{kj} + δ_{kj}r̃_{il})`
pub fn build_p(free: [&str; 4]) -> Result<TensorExpr, TensorError> {
    build_p_with_coefficient(free, &TensorModel::default().p_coefficient)
}

pub fn build_p_with_coefficient(free: [&str; 4], coeff: &RationalFunctionN) -> Result<TensorExpr, TensorError> {
    distinct(&free)?;
    let [i, j, k, l] = free;
    Ok(terms(
        coeff,
        ScalarPowers::default(),
        vec![
            vec![IndexedFactor::delta(i, j), IndexedFactor::traceless_ricci(k, l)],
            vec![IndexedFactor::delta(k, l), IndexedFactor::traceless_ricci(i, j)],
            vec![IndexedFactor::delta(i, l), IndexedFactor::traceless_ricci(k, j)],
            vec![IndexedFactor::delta(k, j), IndexedFactor::traceless_ricci(i, l)],
        ],
    ))
}

pub fn ricci_tensor(i: &str, j: &str) -> TensorExpr {
    terms(&one(), ScalarPowers::default(), vec![vec![IndexedFactor::ricci(i, j)]])
}

pub fn curvature_tensor(free: [&str; 4]) -> Result<TensorExpr, TensorError> {
    distinct(&free)?;
    let [i, j, k, l] = free;
    Ok(terms(&one(), ScalarPowers::default(), vec![vec![IndexedFactor::curvature(i, j, k, l)]]))
}

/// A reduced expression compared against its expected closed form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub reduced: TensorExpr,
    pub expected: TensorExpr,
    /// `reduced - expected` after contraction; zero on success.
    pub residual: TensorExpr,
}

impl IdentityCheck {
    fn new(name: &'static str, reduced: TensorExpr, expected: TensorExpr) -> Self {
        let residual = contract(&reduced.sub(&expected).expect("scalar expressions"));
        IdentityCheck { name, reduced, expected, residual }
    }

    pub fn passed(&self) -> bool {
        self.residual.is_zero()
    }
}

impl fmt::Display for IdentityCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            write!(f, "PASS  {} = {}", self.name, self.reduced)
        } else {
            write!(
                f,
                "FAIL  {} = {} (expected {}; residual {})",
                self.name, self.reduced, self.expected, self.residual
            )
        }
    }
}

fn scalar(coeff: RationalFunctionN, powers: ScalarPowers) -> TensorExpr {
    TensorExpr::scalar(coeff, powers)
}

fn pair(a: &TensorExpr, b: &TensorExpr) -> TensorExpr {
    contract(&a.product(b).expect("compatible pairing"))
}

const FRONT: [&str; 4] = ["i", "j", "k", "l"];
// X_{ijkl} Y_{jilk}: every holomorphic slot meets an antiholomorphic one
const BACK: [&str; 4] = ["j", "i", "l", "k"];

fn expected_s_norm() -> TensorExpr {
    scalar(one() / (2 * n() * (n() + 1)), ScalarPowers::s(2))
}

fn expected_p_norm() -> TensorExpr {
    scalar(4 * one() / (n() + 2), ScalarPowers::rtilde_sq(1))
}

pub fn verify_norm_identities() -> Vec<IdentityCheck> {
    verify_norm_identities_with(&TensorModel::default())
}

/// `|Ric|^2 = |r̃|^2 + s^2/(4n)`, `|S|^2 = s^2/(2n(n+1))`, `|P|^2 = 4/(n+2)·|r̃|^2`.
pub fn verify_norm_identities_with(model: &TensorModel) -> Vec<IdentityCheck> {
    let ric = pair(&ricci_tensor("i", "j"), &ricci_tensor("j", "i"));
    let ric_expected = scalar(one(), ScalarPowers::rtilde_sq(1))
        .add(&scalar(one() / (4 * n()), ScalarPowers::s(2)))
        .expect("scalars");

    let s_front = build_s_with_coefficient(FRONT, &model.s_coefficient).expect("distinct");
    let s_back = build_s_with_coefficient(BACK, &model.s_coefficient).expect("distinct");
    let p_front = build_p_with_coefficient(FRONT, &model.p_coefficient).expect("distinct");
    let p_back = build_p_with_coefficient(BACK, &model.p_coefficient).expect("distinct");

    vec![
        IdentityCheck::new("|Ric|^2", ric, ric_expected),
        IdentityCheck::new("|S|^2", pair(&s_front, &s_back), expected_s_norm()),
        IdentityCheck::new("|P|^2", pair(&p_front, &p_back), expected_p_norm()),
    ]
}

/// `δ_{ij}r̃_{kl}·(δ_{ji}r̃_{lk} + δ_{lk}r̃_{ji} + δ_{jk}r̃_{li} + δ_{li}r̃_{jk}) = (n+2)|r̃|^2`
pub fn verify_key_subcontraction() -> IdentityCheck {
    let head = terms(
        &one(),
        ScalarPowers::default(),
        vec![vec![IndexedFactor::delta("i", "j"), IndexedFactor::traceless_ricci("k", "l")]],
    );
    let tail = build_p_with_coefficient(BACK, &one()).expect("distinct");
    IdentityCheck::new(
        "δ_{ij}r̃_{kl}·(n+2)P_{jilk}",
        pair(&head, &tail),
        scalar(n() + 2, ScalarPowers::rtilde_sq(1)),
    )
}

pub fn verify_cross_terms() -> Vec<IdentityCheck> {
    verify_cross_terms_with(&TensorModel::default())
}

/// `<S,P> = 0`, `<R,S> = |S|^2`, `<R,P> = |P|^2`, so `|R - S - P|^2 = |R|^2 - |S|^2 - |P|^2`.
pub fn verify_cross_terms_with(model: &TensorModel) -> Vec<IdentityCheck> {
    let s_front = build_s_with_coefficient(FRONT, &model.s_coefficient).expect("distinct");
    let s_back = build_s_with_coefficient(BACK, &model.s_coefficient).expect("distinct");
    let p_back = build_p_with_coefficient(BACK, &model.p_coefficient).expect("distinct");
    let r_front = curvature_tensor(FRONT).expect("distinct");
    vec![
        IdentityCheck::new("<S,P>", pair(&s_front, &p_back), TensorExpr::zero()),
        IdentityCheck::new("<R,S>", pair(&r_front, &s_back), expected_s_norm()),
        IdentityCheck::new("<R,P>", pair(&r_front, &p_back), expected_p_norm()),
    ]
}

/// Proof that the norm identities and orthogonality relations hold; only
/// obtainable from a passing verification.
#[derive(Debug, Clone)]
pub struct TensorCertificate {
    ric_norm: TensorExpr,
    s_norm: TensorExpr,
    p_norm: TensorExpr,
    checks: Vec<IdentityCheck>,
}

impl TensorCertificate {
    pub fn ric_norm(&self) -> &TensorExpr {
        &self.ric_norm
    }

    pub fn s_norm(&self) -> &TensorExpr {
        &self.s_norm
    }

    pub fn p_norm(&self) -> &TensorExpr {
        &self.p_norm
    }

    pub fn checks(&self) -> &[IdentityCheck] {
        &self.checks
    }
}

pub fn certify() -> Result<TensorCertificate, TensorError> {
    certify_with(&TensorModel::default())
}

pub fn certify_with(model: &TensorModel) -> Result<TensorCertificate, TensorError> {
    let norms = verify_norm_identities_with(model);
    let mut checks = norms.clone();
    checks.push(verify_key_subcontraction());
    checks.extend(verify_cross_terms_with(model));
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed()).map(|c| c.name).collect();
    if !failed.is_empty() {
        return Err(TensorError::VerificationFailed(failed.join(", ")));
    }
    Ok(TensorCertificate {
        ric_norm: norms[0].reduced.clone(),
        s_norm: norms[1].reduced.clone(),
        p_norm: norms[2].reduced.clone(),
        checks,
    })
}
