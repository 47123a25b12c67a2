//! Exact arithmetic in `Z[q]`, `q = exp(2 pi i / K)` with `K` an odd prime.
//!
//! Elements are stored as coefficient vectors of length `K - 1` in the
//! monomial basis `1, q, ..., q^{K-2}`, reduced modulo the cyclotomic
//! polynomial `1 + q + ... + q^{K-1}`. The representation is unique, so
//! structural equality is ring equality.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numtheory::{legendre, PrimeK};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycInt {
    k: PrimeK,
    coeffs: Vec<BigInt>,
}

/// Fold an arbitrary-length coefficient vector into the reduced basis.
fn reduce(k: PrimeK, raw: Vec<BigInt>) -> Vec<BigInt> {
    let kk = k.order();
    let mut folded = vec![BigInt::zero(); kk];
    for (i, c) in raw.into_iter().enumerate() {
        folded[i % kk] += c;
    }
    let top = folded.pop().expect("K >= 3");
    if !top.is_zero() {
        for c in folded.iter_mut() {
            *c -= &top;
        }
    }
    folded
}

impl CycInt {
    pub fn zero(k: PrimeK) -> Self {
        CycInt { k, coeffs: vec![BigInt::zero(); k.order() - 1] }
    }

    pub fn one(k: PrimeK) -> Self {
        Self::from_int(BigInt::one(), k)
    }

    pub fn from_int(n: impl Into<BigInt>, k: PrimeK) -> Self {
        let mut z = Self::zero(k);
        z.coeffs[0] = n.into();
        z
    }

    /// Build from monomial coefficients of any length (`sum c_i q^i`).
    pub fn from_coeffs(k: PrimeK, raw: Vec<BigInt>) -> Self {
        CycInt { k, coeffs: reduce(k, raw) }
    }

    /// `q^e` for any integer `e`.
    pub fn qpow(e: i64, k: PrimeK) -> Self {
        Self::qpow_big(&BigInt::from(e), k)
    }

    pub fn qpow_big(e: &BigInt, k: PrimeK) -> Self {
        let mut raw = vec![BigInt::zero(); k.order()];
        raw[k.reduce(e)] = BigInt::one();
        Self::from_coeffs(k, raw)
    }

    /// The uniformizer `h = q - 1`.
    pub fn h(k: PrimeK) -> Self {
        Self::qpow(1, k) - Self::one(k)
    }

    /// `h^n`.
    pub fn h_pow(n: u32, k: PrimeK) -> Self {
        Self::h(k).pow(n)
    }

    /// `q^{e/2}` with `q^{1/2} = -q^{2*} = exp(pi i / K)`.
    pub fn qhalf(e: i64, k: PrimeK) -> Self {
        let two_star = k.star(2).expect("K odd") as i64;
        let mono = Self::qpow(two_star * e, k);
        if e.rem_euclid(2) == 1 {
            -mono
        } else {
            mono
        }
    }

    /// `q^{e/2} - q^{-e/2}`.
    pub fn qhalf_diff(e: i64, k: PrimeK) -> Self {
        Self::qhalf(e, k) - Self::qhalf(-e, k)
    }

    #[inline]
    pub fn k(&self) -> PrimeK {
        self.k
    }

    #[inline]
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// Some(n) when the element is the rational integer `n`.
    pub fn as_integer(&self) -> Option<&BigInt> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| &self.coeffs[0])
    }

    fn check_k(&self, other: &Self) {
        assert_eq!(self.k, other.k, "mixing elements of Z[q] for different K");
    }

    pub fn scale(&self, n: &BigInt) -> Self {
        CycInt { k: self.k, coeffs: self.coeffs.iter().map(|c| c * n).collect() }
    }

    pub fn pow(&self, mut n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.k);
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Galois action `q -> q^j` for `j` prime to K.
    pub fn galois(&self, j: i64) -> Self {
        let kk = self.k.order() as i64;
        assert!(j.rem_euclid(kk) != 0, "q -> q^0 is not an automorphism");
        let mut raw = vec![BigInt::zero(); kk as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            raw[((i as i64) * j).rem_euclid(kk) as usize] += c;
        }
        Self::from_coeffs(self.k, raw)
    }

    /// Complex conjugation `q -> q^{-1}`.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    /// Coefficients `a_0..a_{K-2}` with `self = sum a_n h^n`.
    pub fn to_h_basis(&self) -> Vec<BigInt> {
        let n = self.coeffs.len();
        let binom = pascal(n);
        (0..n).map(|j| (j..n).fold(BigInt::zero(), |acc, i| acc + &binom[i][j] * &self.coeffs[i])).collect()
    }

    /// Inverse of [`CycInt::to_h_basis`]. Longer inputs are reduced.
    pub fn from_h_basis(k: PrimeK, a: &[BigInt]) -> Self {
        let n = k.order() - 1;
        if a.len() > n {
            return a.iter().rev().fold(Self::zero(k), |acc, c| &acc * &Self::h(k) + Self::from_int(c.clone(), k));
        }
        let binom = pascal(a.len());
        let mut coeffs = vec![BigInt::zero(); n];
        for (j, aj) in a.iter().enumerate() {
            for i in 0..=j {
                let term = &binom[j][i] * aj;
                if (j - i) % 2 == 0 {
                    coeffs[i] += term;
                } else {
                    coeffs[i] -= term;
                }
            }
        }
        CycInt { k, coeffs }
    }

    /// Quotient by `h` when it exists in `Z[q]`.
    pub fn div_h(&self) -> Option<Self> {
        let kb = self.k.big();
        let total: BigInt = self.coeffs.iter().sum();
        let (t, r) = total.div_rem(&kb);
        if !r.is_zero() {
            return None;
        }
        // P = self - t * Phi_K vanishes at q = 1 as a polynomial of degree K - 1.
        let mut p: Vec<BigInt> = self.coeffs.iter().map(|c| c - &t).collect();
        p.push(-t);
        let deg = p.len() - 1;
        let mut quo = vec![BigInt::zero(); deg];
        quo[deg - 1] = p[deg].clone();
        for i in (1..deg).rev() {
            quo[i - 1] = &p[i] + &quo[i];
        }
        debug_assert!((&p[0] + &quo[0]).is_zero());
        Some(CycInt { k: self.k, coeffs: quo })
    }

    /// Largest `j` with `h^j | self`; `None` for zero.
    pub fn h_valuation(&self) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        let mut v = 0;
        let mut cur = self.clone();
        while let Some(next) = cur.div_h() {
            cur = next;
            v += 1;
        }
        Some(v)
    }

    /// Divide every coefficient by an integer, failing unless exact.
    pub fn div_integer(&self, n: &BigInt) -> Result<Self> {
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (q, r) = c.div_rem(n);
            if !r.is_zero() {
                return Err(Error::NotDivisible { k: self.k.get() });
            }
            coeffs.push(q);
        }
        Ok(CycInt { k: self.k, coeffs })
    }

    /// `c` with `self = b * c` in `Z[q]`.
    ///
    /// Computed as `self * N'(b) / N(b)` where `N'(b)` is the product of the
    /// nontrivial Galois conjugates of `b`; the quotient lies in `Z[q]` iff
    /// every coefficient of `self * N'(b)` is divisible by the norm `N(b)`.
    pub fn divide_exact(&self, b: &Self) -> Result<Self> {
        self.check_k(b);
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (cofactor, norm) = b.norm_cofactor();
        (self * &cofactor).div_integer(&norm)
    }

    /// `(N'(b), N(b))` with `b * N'(b) = N(b)` a rational integer.
    pub fn norm_cofactor(&self) -> (Self, BigInt) {
        let kk = self.k.order() as i64;
        let g = primitive_root(self.k) as i64;
        let rest = orbit_product(self, g, kk - 2).galois(g);
        let norm = (self * &rest).as_integer().cloned().expect("field norm is a rational integer");
        (rest, norm)
    }

    /// Evaluate at `q = exp(2 pi i / K)` in floating point.
    pub fn to_complex(&self) -> Complex64 {
        let kk = self.k.get() as f64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let c = c.to_f64().unwrap_or(f64::NAN);
                Complex64::from_polar(c, 2.0 * std::f64::consts::PI * i as f64 / kk)
            })
            .sum()
    }
}

/// `Pi_{i=0}^{t-1} sigma^i(b)` for `sigma: q -> q^g`, by doubling.
fn orbit_product(b: &CycInt, g: i64, t: i64) -> CycInt {
    let kk = b.k.order() as i64;
    let sigma_pow = |e: i64| {
        let mut r = 1i64;
        for _ in 0..e {
            r = r * g % kk;
        }
        r
    };
    let mut acc = CycInt::one(b.k);
    let mut len = 0i64;
    for bit in (0..64).rev().map(|s| (t >> s) & 1) {
        if len > 0 {
            acc = &acc * &acc.galois(sigma_pow(len));
            len *= 2;
        }
        if bit == 1 {
            acc = &acc * &b.galois(sigma_pow(len));
            len += 1;
        }
    }
    debug_assert_eq!(len, t);
    acc
}

fn primitive_root(k: PrimeK) -> u32 {
    let kk = k.get() as u64;
    let phi = kk - 1;
    let mut factors = Vec::new();
    let mut m = phi;
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            factors.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    let powmod = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        b %= kk;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % kk;
            }
            b = b * b % kk;
            e >>= 1;
        }
        r
    };
    (2..kk).find(|&g| factors.iter().all(|&f| powmod(g, phi / f) != 1)).expect("prime modulus has a primitive root")
        as u32
}

fn pascal(n: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = vec![BigInt::zero(); n];
        row[0] = BigInt::one();
        for j in 1..=i {
            row[j] = &rows[i - 1][j - 1] + &rows[i - 1][j];
        }
        rows.push(row);
    }
    rows
}

/// `q^{1/2}` as the exact element `-q^{2*}`.
pub fn half_power(k: PrimeK) -> CycInt {
    CycInt::qhalf(1, k)
}

/// `q^{4* e}`: the exact stand-in for `q^{e/4}` used with odd colors.
pub fn quarter_power(e: i64, k: PrimeK) -> CycInt {
    let four_star = k.star(4).expect("K odd") as i64;
    CycInt::qpow(four_star * e, k)
}

/// The quadratic Gauss sum `sum_{g=1}^{K} q^{p g^2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussElement {
    p: i64,
    value: CycInt,
}

impl GaussElement {
    pub fn new(p: i64, k: PrimeK) -> Result<Self> {
        if p.rem_euclid(k.get() as i64) == 0 {
            return Err(Error::PrimeDividesP { k: k.get(), p });
        }
        let kk = k.get() as i64;
        let mut raw = vec![BigInt::zero(); k.order()];
        for g in 1..=kk {
            raw[(p * g * g).rem_euclid(kk) as usize] += 1;
        }
        Ok(GaussElement { p, value: CycInt::from_coeffs(k, raw) })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn value(&self) -> &CycInt {
        &self.value
    }

    pub fn k(&self) -> PrimeK {
        self.value.k
    }

    /// `a / G_p`, using `G_p * conj(G_p) = K`.
    pub fn divide(&self, a: &CycInt) -> Result<CycInt> {
        (a * &self.value.conj()).div_integer(&self.k().big())
    }

    /// The sign `(|p| / K)` appearing in the closed form of `G_p`.
    pub fn legendre(&self) -> i8 {
        legendre(&BigInt::from(self.p.abs()), self.k())
    }
}

pub fn gauss_element(p: i64, k: PrimeK) -> Result<GaussElement> {
    GaussElement::new(p, k)
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycInt[K={}]({})", self.k, self)
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{mag}q")?,
                (_, true) => write!(f, "q^{i}")?,
                (_, false) => write!(f, "{mag}q^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add<&CycInt> for &CycInt {
    type Output = CycInt;
    fn add(self, rhs: &CycInt) -> CycInt {
        self.check_k(rhs);
        CycInt { k: self.k, coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl Sub<&CycInt> for &CycInt {
    type Output = CycInt;
    fn sub(self, rhs: &CycInt) -> CycInt {
        self.check_k(rhs);
        CycInt { k: self.k, coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect() }
    }
}

impl Mul<&CycInt> for &CycInt {
    type Output = CycInt;
    fn mul(self, rhs: &CycInt) -> CycInt {
        self.check_k(rhs);
        let kk = self.k.order();
        let mut raw = vec![BigInt::zero(); kk];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    raw[(i + j) % kk] += a * b;
                }
            }
        }
        CycInt::from_coeffs(self.k, raw)
    }
}

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt { k: self.k, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for CycInt {
    type Output = CycInt;
    fn neg(mut self) -> CycInt {
        for c in self.coeffs.iter_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<CycInt> for CycInt {
            type Output = CycInt;
            fn $method(self, rhs: CycInt) -> CycInt {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&CycInt> for CycInt {
            type Output = CycInt;
            fn $method(self, rhs: &CycInt) -> CycInt {
                (&self).$method(rhs)
            }
        }
        impl $tr<CycInt> for &CycInt {
            type Output = CycInt;
            fn $method(self, rhs: CycInt) -> CycInt {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&CycInt> for CycInt {
    fn add_assign(&mut self, rhs: &CycInt) {
        self.check_k(rhs);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl SubAssign<&CycInt> for CycInt {
    fn sub_assign(&mut self, rhs: &CycInt) {
        self.check_k(rhs);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

impl MulAssign<&CycInt> for CycInt {
    fn mul_assign(&mut self, rhs: &CycInt) {
        *self = &*self * rhs;
    }
}

#[derive(Serialize, Deserialize)]
struct CycIntRepr {
    #[serde(rename = "K")]
    k: u32,
    coeffs: Vec<String>,
}

impl Serialize for CycInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycIntRepr { k: self.k.get(), coeffs: self.coeffs.iter().map(|c| c.to_string()).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = CycIntRepr::deserialize(d)?;
        let k = PrimeK::new(repr.k).map_err(D::Error::custom)?;
        let raw = repr
            .coeffs
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(D::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(CycInt::from_coeffs(k, raw))
    }
}
