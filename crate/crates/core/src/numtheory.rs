//! Elementary modular arithmetic over odd primes: Legendre symbols,
//! canonical inverses `n*`, the sign `kappa`, and K-adic truncations of
//! rationals whose denominators are prime to K.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rational number viewed as an element of the K-adic integers when its
/// denominator is prime to K.
pub type Rational = BigRational;

/// An odd prime `K >= 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct PrimeK(u32);

impl PrimeK {
    pub fn new(k: u32) -> Result<Self> {
        if k < 3 || k.is_multiple_of(2) || !is_prime(k as u64) {
            return Err(Error::NotOddPrime(k as u64));
        }
        Ok(PrimeK(k))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// `K` as a usize, handy for indexing coefficient vectors.
    #[inline]
    pub fn order(self) -> usize {
        self.0 as usize
    }

    pub fn big(self) -> BigInt {
        BigInt::from(self.0)
    }

    /// `K^e`.
    pub fn pow(self, e: u32) -> BigInt {
        num_traits::pow(self.big(), e as usize)
    }

    /// Canonical `n*` in `[0, K)` with `n * n* = 1 (mod K)`.
    pub fn star(self, n: i64) -> Result<u32> {
        let inv = mod_inverse(&BigInt::from(n), &self.big())?;
        Ok(inv.to_u32().expect("residue below K"))
    }

    /// Reduce an integer exponent into `[0, K)`.
    pub fn reduce(self, e: &BigInt) -> usize {
        e.mod_floor(&self.big()).to_usize().expect("residue below K")
    }

    /// All odd primes in `[3, bound]`.
    pub fn up_to(bound: u32) -> Vec<PrimeK> {
        (3..=bound).filter_map(|k| PrimeK::new(k).ok()).collect()
    }
}

impl TryFrom<u32> for PrimeK {
    type Error = Error;
    fn try_from(k: u32) -> Result<Self> {
        PrimeK::new(k)
    }
}

impl From<PrimeK> for u32 {
    fn from(k: PrimeK) -> u32 {
        k.0
    }
}

impl fmt::Display for PrimeK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Trial division; the CLI only ever ingests small moduli.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Legendre symbol `(x / K)`.
pub fn legendre(x: &BigInt, k: PrimeK) -> i8 {
    let kb = k.big();
    let r = x.mod_floor(&kb);
    if r.is_zero() {
        return 0;
    }
    let e = (&kb - 1u32) >> 1;
    if r.modpow(&e, &kb).is_one() {
        1
    } else {
        -1
    }
}

/// Canonical inverse of `n` modulo `m` in `[0, m)`.
pub fn mod_inverse(n: &BigInt, m: &BigInt) -> Result<BigInt> {
    assert!(m.is_positive(), "modulus must be positive");
    let r = n.mod_floor(m);
    let eg = r.extended_gcd(m);
    if !eg.gcd.is_one() {
        return Err(Error::NotInvertible { n: n.clone(), m: m.clone() });
    }
    Ok(eg.x.mod_floor(m))
}

/// `1` if `K = 1 (mod 4)`, `-1` if `K = -1 (mod 4)`.
pub fn kappa(k: PrimeK) -> i8 {
    if k.get() % 4 == 1 {
        1
    } else {
        -1
    }
}

/// `[x]_N`: the representative in `[0, K^{N+1})` of the K-adic integer `x`.
pub fn remainder_mod(x: &Rational, k: PrimeK, n: u32) -> Result<BigInt> {
    let modulus = k.pow(n + 1);
    let den = x.denom();
    if (den % k.big()).is_zero() {
        return Err(Error::DenominatorDivisible { den: den.clone(), k: k.get() });
    }
    let inv = mod_inverse(den, &modulus)?;
    Ok((x.numer() * inv).mod_floor(&modulus))
}

/// K-adic valuation of a nonzero rational.
pub fn padic_valuation(x: &Rational, k: PrimeK) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::ZeroValuation);
    }
    let kb = k.big();
    let count = |v: &BigInt| {
        let mut v = v.abs();
        let mut c = 0i64;
        while (&v % &kb).is_zero() {
            v /= &kb;
            c += 1;
        }
        c
    };
    Ok(count(x.numer()) - count(x.denom()))
}

/// Sign of a nonzero integer as `+1` / `-1`.
pub fn sign(p: i64) -> i64 {
    if p > 0 {
        1
    } else {
        -1
    }
}

/// Parse `"p/q"` or `"p"` into a rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Malformed(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// `"p/q"`, or `"p"` when integral.
pub fn format_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}
