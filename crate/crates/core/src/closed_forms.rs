//! Closed-form intersection numbers of `Ω = αL + βH` on the Batyrev manifold,
//! the obstruction polynomial `f(n, α, β)` and the first-positive scan.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};

use crate::exact::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DomainError {
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(u32),
    #[error("{0} must be positive")]
    NotPositive(&'static str),
}

fn check_params(n: u32, alpha: &Rational, beta: &Rational) -> Result<(), DomainError> {
    if n < 2 {
        return Err(DomainError::DimensionTooSmall(n));
    }
    if !alpha.is_positive() {
        return Err(DomainError::NotPositive("alpha"));
    }
    if !beta.is_positive() {
        return Err(DomainError::NotPositive("beta"));
    }
    Ok(())
}

/// `Ω^n`, `c1·Ω^{n-1}`, `c1^2·Ω^{n-2}` and `c2·Ω^{n-2}` for `Ω = αL + βH`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BatyrevInvariants {
    pub n: u32,
    pub alpha: Rational,
    pub beta: Rational,
    /// `(n-1)α + β`
    pub t: Rational,
    pub vol: Rational,
    pub deg1: Rational,
    pub chern11: Rational,
    pub chern2: Rational,
}

// powers of a reduced fraction stay reduced, so skip the gcd
fn pow(x: &Rational, k: u32) -> Rational {
    Rational::new_raw(x.numer().pow(k), x.denom().pow(k))
}

fn t_of(n: u32, alpha: &Rational, beta: &Rational) -> Rational {
    int(i64::from(n) - 1) * alpha + beta
}

pub fn invariants_closed_form(n: u32, alpha: &Rational, beta: &Rational) -> Result<BatyrevInvariants, DomainError> {
    check_params(n, alpha, beta)?;
    let t = t_of(n, alpha, beta);
    let nn = int(i64::from(n));
    let nm1 = int(i64::from(n) - 1);
    let two_n_m1 = int(2 * i64::from(n) - 1);

    let vol = (pow(&t, n) - pow(beta, n)) / &nm1;
    let deg1 = (&two_n_m1 * pow(&t, n - 1) - pow(beta, n - 1)) / &nm1;
    let chern11 = (&two_n_m1 * &two_n_m1 * pow(&t, n - 2) - pow(beta, n - 2)) / &nm1;
    let chern2 = nn / int(2) * (int(3) * pow(&t, n - 2) + pow(beta, n - 2));
    Ok(BatyrevInvariants { n, alpha: alpha.clone(), beta: beta.clone(), t, vol, deg1, chern11, chern2 })
}

/// `f = 2(n+1)·Ω^n·(n·c1^2Ω^{n-2} - (n+2)·c2Ω^{n-2}) - n^2·(c1Ω^{n-1})^2`.
pub fn f_definition(inv: &BatyrevInvariants) -> Rational {
    let n = i64::from(inv.n);
    int(2 * (n + 1)) * &inv.vol * (int(n) * &inv.chern11 - int(n + 2) * &inv.chern2)
        - int(n * n) * &inv.deg1 * &inv.deg1
}

/// `((n-1)^2 / n)·f` as the five-term polynomial in `t` and `β`.
pub fn f_expanded(n: u32, alpha: &Rational, beta: &Rational) -> Result<Rational, DomainError> {
    check_params(n, alpha, beta)?;
    let t = t_of(n, alpha, beta);
    let k = i64::from(n);
    let c_t = int(k * k * k - 2 * k * k - 4 * k + 8);
    let c_b = int(k * k * k + 2 * k * k);
    let c_mix = int(4 * k * k - 2 * k);
    let c_tn = int(k * (k + 1) * (k + 1));
    let c_bn = int((k + 1) * (5 * k * k - 11 * k + 8));
    Ok(c_t * pow(&t, 2 * n - 2) + c_b * pow(beta, 2 * n - 2) + c_mix * pow(&t, n - 1) * pow(beta, n - 1)
        - c_tn * pow(&t, n) * pow(beta, n - 2)
        - c_bn * pow(&t, n - 2) * pow(beta, n))
}

/// `f_expanded / (t^{n-1} β^{n-1})`, written in the ratio `x = t/β`.
///
/// The linear term carries `n(n+1)^2`, which is what dividing the expanded
/// form term by term produces.
pub fn f_normalized(n: u32, alpha: &Rational, beta: &Rational) -> Result<Rational, DomainError> {
    check_params(n, alpha, beta)?;
    let t = t_of(n, alpha, beta);
    let k = i64::from(n);
    let x = &t / beta;
    let xinv = beta / &t;
    Ok(int(k * k * k - 2 * k * k - 4 * k + 8) * pow(&x, n - 1) + int(k * k * k + 2 * k * k) * pow(&xinv, n - 1)
        + int(4 * k * k - 2 * k)
        - int(k * (k + 1) * (k + 1)) * &x
        - int((k + 1) * (5 * k * k - 11 * k + 8)) * &xinv)
}

/// The positive factor `n·t^{n-1}β^{n-1}/(n-1)^2` linking the normalized form to `f`.
pub fn normalization_factor(n: u32, alpha: &Rational, beta: &Rational) -> Result<Rational, DomainError> {
    check_params(n, alpha, beta)?;
    let t = t_of(n, alpha, beta);
    let k = i64::from(n);
    Ok(int(k) * pow(&t, n - 1) * pow(beta, n - 1) / int((k - 1) * (k - 1)))
}

pub fn sign_of(x: &Rational) -> Ordering {
    x.cmp(&Rational::zero())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanRow {
    pub n: u32,
    pub t: Rational,
    pub f: Rational,
}

impl ScanRow {
    pub fn sign(&self) -> Ordering {
        sign_of(&self.f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanResult {
    pub alpha: Rational,
    pub beta: Rational,
    pub n_max: u32,
    pub rows: Vec<ScanRow>,
    /// Least `n` in `[2, n_max]` with `f > 0`.
    pub first_positive: Option<u32>,
    /// Every `n` after `first_positive` where `f <= 0`.
    pub reversals: Vec<u32>,
}

/// Exact scan of `f(n, α, β)` for `n = 2..=n_max`. Certifies only what it computes.
pub fn scan_min_n(alpha: &Rational, beta: &Rational, n_max: u32) -> Result<ScanResult, DomainError> {
    check_params(2, alpha, beta)?;
    if n_max < 2 {
        return Err(DomainError::DimensionTooSmall(n_max));
    }
    let rows: Vec<ScanRow> = (2..=n_max)
        .map(|n| {
            let inv = invariants_closed_form(n, alpha, beta).expect("validated parameters");
            let f = f_definition(&inv);
            ScanRow { n, t: inv.t, f }
        })
        .collect();
    let first_positive = rows.iter().find(|r| r.f.is_positive()).map(|r| r.n);
    let reversals = match first_positive {
        Some(first) => rows.iter().filter(|r| r.n > first && !r.f.is_positive()).map(|r| r.n).collect(),
        None => Vec::new(),
    };
    Ok(ScanResult { alpha: alpha.clone(), beta: beta.clone(), n_max, rows, first_positive, reversals })
}

impl ScanResult {
    pub fn summary(&self) -> String {
        match self.first_positive {
            None => format!("none up to {}", self.n_max),
            Some(first) if self.reversals.is_empty() => {
                format!("first positive n = {first}; no sign reversal up to {}", self.n_max)
            }
            Some(first) => {
                let list: Vec<String> = self.reversals.iter().map(u32::to_string).collect();
                format!("first positive n = {first}; sign reversal at n = {}", list.join(", "))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::frac;

    fn ones(n: u32) -> BatyrevInvariants {
        invariants_closed_form(n, &int(1), &int(1)).unwrap()
    }

    #[test]
    fn closed_forms_small_cases() {
        let i2 = ones(2);
        assert_eq!((i2.vol.clone(), i2.deg1.clone(), i2.chern11.clone(), i2.chern2.clone()), (int(3), int(5), int(8), int(4)));
        let i3 = ones(3);
        assert_eq!((i3.vol, i3.deg1, i3.chern11, i3.chern2), (int(13), int(22), int(37), int(15)));
        assert_eq!(i2.t, int(2));
    }

    #[test]
    fn closed_forms_reject_bad_parameters() {
        assert_eq!(invariants_closed_form(2, &int(1), &int(0)), Err(DomainError::NotPositive("beta")));
        assert_eq!(invariants_closed_form(2, &int(-1), &int(1)), Err(DomainError::NotPositive("alpha")));
        assert_eq!(invariants_closed_form(1, &int(1), &int(1)), Err(DomainError::DimensionTooSmall(1)));
    }

    #[test]
    fn obstruction_values() {
        assert_eq!(f_definition(&ones(2)), int(-100));
        assert_eq!(f_definition(&ones(3)), int(-612));
        assert_eq!(f_definition(&ones(4)), int(32384));
        assert_eq!(f_expanded(2, &int(1), &int(1)).unwrap(), int(-50));
        assert_eq!(f_expanded(3, &int(1), &int(1)).unwrap(), int(-816));
        assert_eq!(f_expanded(4, &int(1), &int(1)).unwrap(), int(72864));
        assert_eq!(f_normalized(2, &int(1), &int(1)).unwrap(), int(-25));
        assert_eq!(f_normalized(3, &int(1), &int(1)).unwrap(), frac(-816, 9));
    }

    #[test]
    fn scan_examples() {
        let s = scan_min_n(&int(1), &int(1), 50).unwrap();
        assert_eq!(s.first_positive, Some(4));
        assert!(s.reversals.is_empty());
        assert_eq!(s.rows.len(), 49);
        assert_eq!(s.summary(), "first positive n = 4; no sign reversal up to 50");
        let s = scan_min_n(&int(1), &int(1), 3).unwrap();
        assert_eq!(s.first_positive, None);
        assert_eq!(s.summary(), "none up to 3");
        // values frozen from an independent binomial-sum computation
        assert_eq!(scan_min_n(&int(1_000_000), &int(1), 10).unwrap().first_positive, Some(3));
        assert_eq!(scan_min_n(&int(1), &int(100), 40).unwrap().first_positive, Some(15));
        assert!(scan_min_n(&int(0), &int(1), 10).is_err());
        assert!(f_expanded(1, &int(1), &int(1)).is_err());
        assert!(f_normalized(3, &int(1), &frac(-1, 2)).is_err());
        assert!(scan_min_n(&int(1), &int(1), 1).is_err());
    }
}
