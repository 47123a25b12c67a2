//! Truncated power series in `h = q - 1` with exact rational coefficients,
//! and the map `h -> q - 1` into truncations of the K-adic completion of
//! `Z[q]`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cyclotomic::CycInt;
use crate::error::{Error, Result};
use crate::numtheory::{format_rational, parse_rational, remainder_mod, PrimeK, Rational};

/// `sum_{n < trunc} c_n h^n + O(h^trunc)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HSeries {
    coeffs: Vec<Rational>,
}

impl HSeries {
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        HSeries { coeffs }
    }

    pub fn zero(trunc: usize) -> Self {
        HSeries { coeffs: vec![Rational::zero(); trunc] }
    }

    pub fn constant(c: Rational, trunc: usize) -> Self {
        let mut s = Self::zero(trunc);
        if trunc > 0 {
            s.coeffs[0] = c;
        }
        s
    }

    pub fn one(trunc: usize) -> Self {
        Self::constant(Rational::one(), trunc)
    }

    #[inline]
    pub fn trunc(&self) -> usize {
        self.coeffs.len()
    }

    #[inline]
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &Rational {
        &self.coeffs[n]
    }

    pub fn truncate(&self, trunc: usize) -> Self {
        assert!(trunc <= self.trunc(), "cannot extend a truncated series");
        HSeries { coeffs: self.coeffs[..trunc].to_vec() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        HSeries { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Index of the first nonzero coefficient, if any is visible.
    pub fn order_of_vanishing(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.trunc();
        if n == 0 {
            return Ok(Self::zero(0));
        }
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::NotInvertibleSeries);
        }
        let a0_inv = a0.recip();
        let mut inv: Vec<Rational> = Vec::with_capacity(n);
        inv.push(a0_inv.clone());
        for k in 1..n {
            let s = (1..=k).fold(Rational::zero(), |acc, j| acc + &self.coeffs[j] * &inv[k - j]);
            inv.push(-s * &a0_inv);
        }
        Ok(HSeries { coeffs: inv })
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inverse()?)
    }

    /// Every denominator is a product of the given primes.
    pub fn denominators_supported_on(&self, primes: &[BigInt]) -> bool {
        self.coeffs.iter().all(|c| {
            let mut d = c.denom().clone();
            for p in primes {
                if p <= &BigInt::one() {
                    continue;
                }
                while (&d % p).is_zero() {
                    d /= p;
                }
            }
            d.is_one()
        })
    }

    /// Evaluate the truncated polynomial at a floating-point `h`.
    pub fn eval_f64(&self, h: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * h + c.to_f64().unwrap_or(f64::NAN))
    }
}

/// Prime factors of `n`, for denominator-support checks.
pub fn prime_factors(n: &BigInt) -> Vec<BigInt> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::from(2);
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            while (&n % &d).is_zero() {
                n /= &d;
            }
        }
        d += 1;
    }
    if n > BigInt::one() {
        out.push(n);
    }
    out
}

/// A rational power `q^r`, expanded on demand as `(1 + h)^r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPowExpr {
    pub exponent: Rational,
}

impl QPowExpr {
    pub fn new(exponent: Rational) -> Self {
        QPowExpr { exponent }
    }

    pub fn expand(&self, trunc: usize) -> HSeries {
        qpow_series(&self.exponent, trunc)
    }
}

impl Mul for &QPowExpr {
    type Output = QPowExpr;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &QPowExpr) -> QPowExpr {
        QPowExpr::new(&self.exponent + &rhs.exponent)
    }
}

/// `(1 + h)^r = sum_k binom(r, k) h^k`.
pub fn qpow_series(r: &Rational, trunc: usize) -> HSeries {
    let mut coeffs = Vec::with_capacity(trunc);
    let mut c = Rational::one();
    for k in 0..trunc {
        if k > 0 {
            let kk = Rational::from_integer(BigInt::from(k));
            c = c * (r - &kk + Rational::one()) / kk;
        }
        coeffs.push(c.clone());
    }
    HSeries { coeffs }
}

/// A power series multiplied by `h^{-shift}`. Converting back to an
/// [`HSeries`] checks that the first `shift` coefficients vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries {
    pub shift: u32,
    pub series: HSeries,
}

impl LaurentSeries {
    pub fn new(shift: u32, series: HSeries) -> Self {
        LaurentSeries { shift, series }
    }

    pub fn into_series(self) -> Result<HSeries> {
        let s = self.shift as usize;
        if s > self.series.trunc() {
            return Err(Error::Truncation { have: self.series.trunc(), need: s });
        }
        if let Some((index, coeff)) = self.series.coeffs[..s].iter().enumerate().find(|(_, c)| !c.is_zero()) {
            return Err(Error::LaurentShift { shift: self.shift, index, coeff: format_rational(coeff) });
        }
        Ok(HSeries { coeffs: self.series.coeffs[s..].to_vec() })
    }
}

/// `sum_{n <= depth} [a_n]_depth h^n` in `Z[q]`: the truncation of the image
/// of `s` in the K-adic completion, correct modulo `h^{depth+1}`.
pub fn wedge(s: &HSeries, k: PrimeK, depth: u32) -> Result<CycInt> {
    let need = depth as usize + 1;
    if s.trunc() < need {
        return Err(Error::Truncation { have: s.trunc(), need });
    }
    let h = CycInt::h(k);
    let mut hp = CycInt::one(k);
    let mut acc = CycInt::zero(k);
    for (n, c) in s.coeffs[..need].iter().enumerate() {
        if n > 0 {
            hp = &hp * &h;
        }
        let r = remainder_mod(c, k, depth)?;
        if !r.is_zero() {
            acc += &hp.scale(&r);
        }
    }
    Ok(acc)
}

/// `h^j | a - b` in `Z[q]`.
pub fn congruent_to_order(a: &CycInt, b: &CycInt, j: u32) -> bool {
    match (a - b).h_valuation() {
        None => true,
        Some(v) => v >= j,
    }
}

impl Add<&HSeries> for &HSeries {
    type Output = HSeries;
    fn add(self, rhs: &HSeries) -> HSeries {
        HSeries { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl Sub<&HSeries> for &HSeries {
    type Output = HSeries;
    fn sub(self, rhs: &HSeries) -> HSeries {
        HSeries { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect() }
    }
}

impl Mul<&HSeries> for &HSeries {
    type Output = HSeries;
    fn mul(self, rhs: &HSeries) -> HSeries {
        let n = self.trunc().min(rhs.trunc());
        let mut out = vec![Rational::zero(); n];
        for (i, a) in self.coeffs.iter().take(n).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(n - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        HSeries { coeffs: out }
    }
}

impl Neg for &HSeries {
    type Output = HSeries;
    fn neg(self) -> HSeries {
        HSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<HSeries> for HSeries {
            type Output = HSeries;
            fn $method(self, rhs: HSeries) -> HSeries {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&HSeries> for HSeries {
            type Output = HSeries;
            fn $method(self, rhs: &HSeries) -> HSeries {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for HSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match n {
                0 => write!(f, "{}", format_rational(c))?,
                1 => write!(f, "({})h", format_rational(c))?,
                _ => write!(f, "({})h^{n}", format_rational(c))?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(h^{})", self.trunc())
    }
}

#[derive(Serialize, Deserialize)]
struct HSeriesRepr {
    trunc: usize,
    coeffs: Vec<String>,
}

impl Serialize for HSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        HSeriesRepr { trunc: self.trunc(), coeffs: self.coeffs.iter().map(format_rational).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for HSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = HSeriesRepr::deserialize(d)?;
        if repr.coeffs.len() != repr.trunc {
            return Err(D::Error::custom("coefficient count does not match trunc"));
        }
        let coeffs = repr
            .coeffs
            .iter()
            .map(|s| parse_rational(s).map_err(D::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(HSeries { coeffs })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::mod_inverse;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn series(c: &[(i64, i64)]) -> HSeries {
        HSeries::from_coeffs(c.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    fn k(v: u32) -> PrimeK {
        PrimeK::new(v).unwrap()
    }

    #[test]
    fn qpow_series_examples() {
        assert_eq!(qpow_series(&rat(1, 1), 4), series(&[(1, 1), (1, 1), (0, 1), (0, 1)]));
        assert_eq!(qpow_series(&rat(-1, 1), 4), series(&[(1, 1), (-1, 1), (1, 1), (-1, 1)]));
        // binom(-1/2, k) = 1, -1/2, 3/8, -5/16
        assert_eq!(qpow_series(&rat(-1, 2), 4), series(&[(1, 1), (-1, 2), (3, 8), (-5, 16)]));
    }

    #[test]
    fn ring_operations() {
        let half = qpow_series(&rat(1, 2), 8);
        assert_eq!(&half * &half, qpow_series(&rat(1, 1), 8));
        let a = series(&[(2, 1), (3, 5), (-1, 7), (4, 1)]);
        assert_eq!(&a * &a.inverse().unwrap(), HSeries::one(4));
        let d = &qpow_series(&rat(1, 2), 6) - &qpow_series(&rat(-1, 2), 6);
        let shifted = LaurentSeries::new(1, d).into_series().unwrap();
        assert_eq!(shifted.div(&shifted).unwrap(), HSeries::one(5));
        assert_eq!(HSeries::zero(3).inverse(), Err(Error::NotInvertibleSeries));
        let short = series(&[(1, 1), (1, 1)]);
        assert_eq!((&short * &a).trunc(), 2);
    }

    #[test]
    fn laurent_shift_must_cancel() {
        let ok = LaurentSeries::new(2, series(&[(0, 1), (0, 1), (5, 1)])).into_series().unwrap();
        assert_eq!(ok, series(&[(5, 1)]));
        let bad = LaurentSeries::new(1, series(&[(1, 1), (0, 1)])).into_series();
        assert!(matches!(bad, Err(Error::LaurentShift { .. })));
    }

    #[test]
    fn wedge_examples() {
        for kk in PrimeK::up_to(13) {
            for depth in 1..4 {
                let s = series(&[(1, 1), (1, 1), (0, 1), (0, 1), (0, 1)]);
                assert_eq!(wedge(&s, kk, depth).unwrap(), CycInt::qpow(1, kk));
            }
        }
        // The K-adic image of q^{1/2} is q^{2*}, which is minus the complex
        // square root exp(pi i / K) = -q^{2*}.
        let kk = k(5);
        let s = qpow_series(&rat(1, 2), 3);
        let w = wedge(&s, kk, 2).unwrap();
        let half = crate::cyclotomic::half_power(kk);
        assert!(congruent_to_order(&w, &-&half, 3));
        assert!(!congruent_to_order(&w, &half, 1));
        assert!(wedge(&series(&[(1, 5)]), kk, 0).is_err());
        assert!(wedge(&series(&[(1, 1)]), kk, 1).is_err());
    }

    #[test]
    fn congruence_examples() {
        let kk = k(7);
        let x = CycInt::qpow(3, kk) + CycInt::one(kk);
        assert!(congruent_to_order(&x, &x, 100));
        let h3 = CycInt::h_pow(3, kk);
        assert!(congruent_to_order(&h3, &CycInt::zero(kk), 3));
        assert!(!congruent_to_order(&h3, &CycInt::zero(kk), 4));
        assert!(congruent_to_order(&CycInt::from_int(7, kk), &CycInt::zero(kk), 6));
    }

    #[test]
    fn rational_powers_map_to_roots_of_unity() {
        for kk in PrimeK::up_to(31) {
            for n in -10i64..=10 {
                if n == 0 || n.rem_euclid(kk.get() as i64) == 0 {
                    continue;
                }
                for m in -10i64..=10 {
                    let s = qpow_series(&rat(m, n), 5);
                    for depth in 0..=4u32 {
                        let w = wedge(&s, kk, depth).unwrap();
                        let n_star = mod_inverse(&BigInt::from(n), &kk.pow(depth + 1)).unwrap();
                        let expect = CycInt::qpow_big(&(BigInt::from(m) * n_star), kk);
                        assert!(congruent_to_order(&w, &expect, depth + 1), "K={kk} m={m} n={n} N={depth}");
                    }
                }
            }
        }
    }

    #[test]
    fn serde_shape() {
        let s = series(&[(1, 1), (-1, 2), (3, 8)]);
        let js = serde_json::to_value(&s).unwrap();
        assert_eq!(js, serde_json::json!({"trunc": 3, "coeffs": ["1", "-1/2", "3/8"]}));
        assert_eq!(serde_json::from_value::<HSeries>(js).unwrap(), s);
    }

    #[test]
    fn denominator_support() {
        let s = series(&[(1, 6), (5, 8), (1, 3)]);
        assert!(s.denominators_supported_on(&prime_factors(&BigInt::from(12))));
        assert!(!s.denominators_supported_on(&prime_factors(&BigInt::from(2))));
        assert_eq!(prime_factors(&BigInt::from(360)), vec![BigInt::from(2), BigInt::from(3), BigInt::from(5)]);
    }

    fn arb_rat() -> impl Strategy<Value = Rational> {
        (-30i64..30, 1i64..12).prop_map(|(n, d)| rat(n, d))
    }

    fn arb_series(len: usize) -> impl Strategy<Value = HSeries> {
        prop::collection::vec(arb_rat(), len).prop_map(HSeries::from_coeffs)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn exponent_additivity(r in arb_rat(), s in arb_rat(), trunc in 1usize..10) {
            prop_assert_eq!(&qpow_series(&r, trunc) * &qpow_series(&s, trunc), qpow_series(&(&r + &s), trunc));
        }

        #[test]
        fn wedge_is_multiplicative_to_order(a in arb_series(6), b in arb_series(6), idx in 0usize..5, depth in 0u32..5) {
            let kk = [k(5), k(7), k(11), k(13), k(17)][idx];
            prop_assume!(a.coeffs().iter().chain(b.coeffs()).all(|c| !(c.denom() % kk.big()).is_zero()));
            let lhs = wedge(&(&a * &b), kk, depth).unwrap();
            let rhs = &wedge(&a, kk, depth).unwrap() * &wedge(&b, kk, depth).unwrap();
            prop_assert!(congruent_to_order(&lhs, &rhs, depth + 1));
        }

        #[test]
        fn wedge_depths_agree(a in arb_series(7), idx in 0usize..4, depth in 0u32..5) {
            let kk = [k(3), k(5), k(7), k(11)][idx];
            prop_assume!(a.coeffs().iter().all(|c| !(c.denom() % kk.big()).is_zero()));
            let lo = wedge(&a, kk, depth).unwrap();
            let hi = wedge(&a, kk, depth + 1).unwrap();
            prop_assert!(congruent_to_order(&lo, &hi, depth + 1));
        }
    }
}
