//! Gaussian sums over odd colors in `Z[q]` and the matching Gaussian
//! integrals as power series in `h`.
//!
//! The cyclotomic sums carry a prefactor `K^{-1/2}` times an eighth root of
//! unity. Both are removed exactly by dividing by the Gauss element
//! `G_p = sum_{g=1}^{K} q^{p g^2}`, whose value is `(|p|/K)` times that same
//! prefactor inverse, so every result stays inside `Z[q]`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::cyclotomic::{gauss_element, quarter_power, CycInt};
use crate::error::{Error, Result};
use crate::hseries::{congruent_to_order, qpow_series, wedge, HSeries, LaurentSeries};
use crate::numtheory::{legendre, PrimeK, Rational};

/// Coefficients of `(q^{b/2} - q^{-b/2})^{2m+2} = sum_n a_n (q^{nb} + q^{-nb})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZBinomialRow {
    pub m: u32,
    pub a: Vec<BigInt>,
}

fn binomial(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

pub fn binom_row(m: u32) -> ZBinomialRow {
    let top = 2 * m as u64 + 2;
    let half = m as u64 + 1;
    let sign = |e: u64| if e.is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
    let (a0, rem) = binomial(top, half).div_rem(&BigInt::from(2));
    debug_assert!(rem.is_zero());
    let mut a = vec![sign(half) * a0];
    for n in 1..=half {
        a.push(sign(half - n) * binomial(top, half - n));
    }
    ZBinomialRow { m, a }
}

/// Sum over odd `0 < b < K` plus half the `b = K` term.
fn extended_odd_sum(k: PrimeK, mut term: impl FnMut(i64) -> CycInt) -> Result<CycInt> {
    let kk = k.get() as i64;
    let mut acc = CycInt::zero(k);
    for b in (1..kk).step_by(2) {
        acc += &term(b);
    }
    let edge = term(kk).div_integer(&BigInt::from(2))?;
    Ok(acc + edge)
}

/// `X_cycl(p, m)`, evaluated by direct summation over odd colors.
pub fn gauss_sum_x(p: i64, m: i64, k: PrimeK) -> Result<CycInt> {
    let g = gauss_element(p, k)?;
    let sum =
        extended_odd_sum(k, |b| quarter_power(p * b * b, k) * (CycInt::qpow(m * b, k) + CycInt::qpow(-m * b, k)))?;
    let x = g.divide(&sum)?;
    Ok(if g.legendre() < 0 { -x } else { x })
}

/// Closed form `(|p|/K) q^{-m^2 p*}`.
pub fn gauss_sum_x_closed_form(p: i64, m: i64, k: PrimeK) -> Result<CycInt> {
    let p_star = k.star(p).map_err(|_| Error::PrimeDividesP { k: k.get(), p })?;
    let mono = CycInt::qpow(-(m * m) * p_star as i64, k);
    Ok(if legendre(&BigInt::from(p.abs()), k) < 0 { -mono } else { mono })
}

/// `X_asympt(p, m) = q^{-m^2/p}`.
pub fn gauss_integral_x(p: i64, m: i64, trunc: usize) -> HSeries {
    assert!(p != 0, "p must be nonzero");
    qpow_series(&Rational::new(BigInt::from(-(m * m)), BigInt::from(p)), trunc)
}

/// `Y_cycl(p, m)` by direct summation of `q^{4* p b^2} (q^{b/2} - q^{-b/2})^{2m+2}`
/// over odd colors, normalized by `G_p` and `h`.
pub fn gauss_sum_y(p: i64, m: u32, k: PrimeK) -> Result<CycInt> {
    let g = gauss_element(p, k)?;
    let kk = k.get() as i64;
    let edge = CycInt::qhalf_diff(kk, k);
    assert!(edge.is_zero(), "q^{{K/2}} - q^{{-K/2}} must vanish");
    let sum = extended_odd_sum(k, |b| quarter_power(p * b * b, k) * CycInt::qhalf_diff(b, k).pow(2 * m + 2))?;
    let y = g.divide(&sum)?.div_h().ok_or(Error::NotDivisible { k: k.get() })?;
    Ok(if g.legendre() < 0 { -y } else { y })
}

/// `Y_cycl(p, m)` through the binomial row: `h Y = sum_n a_{m,n} X_cycl(p, n)`.
pub fn gauss_sum_y_from_rows(p: i64, m: u32, k: PrimeK) -> Result<CycInt> {
    let row = binom_row(m);
    let mut acc = CycInt::zero(k);
    for (n, a) in row.a.iter().enumerate() {
        acc += &gauss_sum_x(p, n as i64, k)?.scale(a);
    }
    acc.div_h().ok_or(Error::NotDivisible { k: k.get() })
}

/// `Y_asympt(p, m) = h^{-1} sum_n a_{m,n} q^{-n^2/p}`.
pub fn gauss_integral_y(p: i64, m: u32, trunc: usize) -> Result<HSeries> {
    let row = binom_row(m);
    let mut acc = HSeries::zero(trunc + 1);
    for (n, a) in row.a.iter().enumerate() {
        let term = gauss_integral_x(p, n as i64, trunc + 1).scale(&Rational::from_integer(a.clone()));
        acc = &acc + &term;
    }
    LaurentSeries::new(1, acc).into_series()
}

/// `Y_cycl = (|p|/K) (Y_asympt)^` modulo `h^{depth+1}`.
pub fn check_y_correspondence(p: i64, m: u32, k: PrimeK, depth: u32) -> Result<bool> {
    let cyc = gauss_sum_y(p, m, k)?;
    let asym = gauss_integral_y(p, m, depth as usize + 1)?;
    let mut w = wedge(&asym, k, depth)?;
    if legendre(&BigInt::from(p.abs()), k) < 0 {
        w = -w;
    }
    Ok(congruent_to_order(&cyc, &w, depth + 1))
}
