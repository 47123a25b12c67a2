//! Trivial connection contributions: Ohtsuki's `lambda_n` as an `h`-series,
//! obtained from stationary-phase surgery on knot data tables, with the
//! Casson-Walker surgery recursion as an independent check on `lambda_1`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauss::gauss_integral_y;
use crate::hseries::{prime_factors, qpow_series, HSeries, LaurentSeries};
use crate::invariants::SurgeryPresentation;
use crate::numtheory::{format_rational, parse_rational, sign, Rational};

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Multiply by `h^n`, keeping the truncation.
fn shift_up(s: &HSeries, n: usize) -> HSeries {
    let trunc = s.trunc();
    let mut coeffs = vec![Rational::zero(); trunc];
    for (i, c) in s.coeffs().iter().enumerate().take(trunc.saturating_sub(n)) {
        coeffs[i + n] = c.clone();
    }
    HSeries::from_coeffs(coeffs)
}

fn allowed_primes(h1: u64) -> Vec<BigInt> {
    let mut primes = prime_factors(&BigInt::from(h1));
    primes.push(BigInt::from(2));
    primes
}

/// Coefficients `d_{m;n}` of a knot in a rational homology sphere `M`,
/// expanded in `(q^{b/2} - q^{-b/2})^{2m}` and `h^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DTable {
    pub h1m: u64,
    pub self_linking: i64,
    pub entries: BTreeMap<(u32, u32), Rational>,
}

#[derive(Serialize, Deserialize)]
struct DEntry {
    m: u32,
    n: u32,
    d: String,
}

#[derive(Serialize, Deserialize)]
struct DTableRepr {
    #[serde(rename = "h1M")]
    h1m: u64,
    self_linking: i64,
    entries: Vec<DEntry>,
}

impl DTable {
    pub fn new(h1m: u64, self_linking: i64, entries: BTreeMap<(u32, u32), Rational>) -> Result<Self> {
        if h1m == 0 {
            return Err(Error::Malformed("h1M must be positive".into()));
        }
        let primes = allowed_primes(h1m);
        for ((m, n), d) in &entries {
            if !HSeries::from_coeffs(vec![d.clone()]).denominators_supported_on(&primes) {
                return Err(Error::Malformed(format!(
                    "d[{m};{n}] = {} has a denominator outside 2 and h1M = {h1m}",
                    format_rational(d)
                )));
            }
        }
        Ok(DTable { h1m, self_linking, entries })
    }

    pub fn with_self_linking(mut self, p: i64) -> Self {
        self.self_linking = p;
        self
    }

    pub fn d(&self, m: u32, n: u32) -> Rational {
        self.entries.get(&(m, n)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let repr: DTableRepr = serde_json::from_str(s).map_err(|e| Error::Malformed(e.to_string()))?;
        let mut entries = BTreeMap::new();
        for e in repr.entries {
            let d = parse_rational(&e.d)?;
            if entries.insert((e.m, e.n), d).is_some() {
                return Err(Error::Malformed(format!("duplicate entry ({}, {})", e.m, e.n)));
            }
        }
        DTable::new(repr.h1m, repr.self_linking, entries)
    }

    pub fn to_json(&self) -> String {
        let entries = self.entries.iter().map(|(&(m, n), d)| DEntry { m, n, d: format_rational(d) }).collect();
        let repr = DTableRepr { h1m: self.h1m, self_linking: self.self_linking, entries };
        serde_json::to_string_pretty(&repr).expect("plain data serializes")
    }
}

/// The unknot in `S^3`, framing 1.
pub fn dtable_unknot() -> DTable {
    let entries = BTreeMap::from([((0, 0), Rational::one())]);
    DTable { h1m: 1, self_linking: 1, entries }
}

/// An unknot split from the rest of `M`: only `m = 0` terms, carrying `M`'s
/// own series.
pub fn dtable_split_unknot(ambient: &OhtsukiSeries, p: i64) -> DTable {
    let entries = ambient
        .lambda
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(n, c)| ((0, n as u32), c.clone()))
        .collect();
    DTable { h1m: ambient.h1, self_linking: p, entries }
}

/// Coefficients of the Conway-normalized Alexander polynomial in `z^2`,
/// `Delta = h1M + a_1 z^2 + a_2 z^4 + ...` with `z = t^{1/2} - t^{-1/2}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlexanderData {
    #[serde(rename = "h1M")]
    pub h1m: u64,
    pub a: Vec<i64>,
}

/// `Delta''(1) = 2 a_1`.
pub fn alexander_second_derivative(a: &AlexanderData) -> Rational {
    Rational::from_integer(BigInt::from(2 * a.a.first().copied().unwrap_or(0)))
}

/// `h_1^{1/2} Z^tr` of a rational homology sphere as `sum lambda_n h^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OhtsukiSeries {
    pub h1: u64,
    pub lambda: HSeries,
}

#[derive(Serialize, Deserialize)]
struct OhtsukiRepr {
    h1: u64,
    lambda: Vec<String>,
}

impl Serialize for OhtsukiSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        OhtsukiRepr { h1: self.h1, lambda: self.lambda.coeffs().iter().map(format_rational).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for OhtsukiSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = OhtsukiRepr::deserialize(d)?;
        let coeffs = repr
            .lambda
            .iter()
            .map(|s| parse_rational(s).map_err(D::Error::custom))
            .collect::<std::result::Result<_, _>>()?;
        Ok(OhtsukiSeries { h1: repr.h1, lambda: HSeries::from_coeffs(coeffs) })
    }
}

impl OhtsukiSeries {
    pub fn sphere(trunc: usize) -> Self {
        OhtsukiSeries { h1: 1, lambda: HSeries::one(trunc) }
    }

    pub fn trunc(&self) -> usize {
        self.lambda.trunc()
    }

    pub fn is_sphere(&self) -> bool {
        self.h1 == 1 && self.lambda == HSeries::one(self.trunc())
    }

    pub fn lambda_n(&self, n: usize) -> &Rational {
        self.lambda.coeff(n)
    }

    /// Every `lambda_n` lies in `Z[1/2, 1/h1]`.
    pub fn denominators_ok(&self) -> bool {
        self.lambda.denominators_supported_on(&allowed_primes(self.h1))
    }
}

/// `|p|^{1/2} Z^tr(L(p,1))`:
/// `sign(p) q^{(p + 2/p - 3 sign p)/4} (q^{1/(2p)} - q^{-1/(2p)}) / (q^{1/2} - q^{-1/2})`.
pub fn tcc_lens(p: i64, trunc: usize) -> Result<OhtsukiSeries> {
    if p == 0 {
        return Err(Error::ZeroFraming);
    }
    let s = sign(p);
    let half = |r: Rational| {
        let lo = qpow_series(&-r.clone(), trunc + 1);
        LaurentSeries::new(1, qpow_series(&r, trunc + 1) - lo).into_series()
    };
    let num = half(rat(1, 2 * p))?;
    let den = half(rat(1, 2))?;
    let pre = qpow_series(&((rat(p, 1) + rat(2, p) - rat(3 * s, 1)) / rat(4, 1)), trunc);
    let mut lambda = pre * num.div(&den)?;
    if s < 0 {
        lambda = -&lambda;
    }
    Ok(OhtsukiSeries { h1: p.unsigned_abs(), lambda })
}

/// Surgery on the knot described by `d`:
/// `-sign(p) q^{(2 - p + 3 sign p)/4} sum_{m,n} d_{m;n} Y(p, m) h^n`.
///
/// `Y(p, m) = O(h^m)`, so only `m + n < trunc` contributes.
pub fn tcc_surgery(d: &DTable, trunc: usize) -> Result<OhtsukiSeries> {
    let p = d.self_linking;
    if p == 0 {
        return Err(Error::ZeroFraming);
    }
    let s = sign(p);
    let mut ys: BTreeMap<u32, HSeries> = BTreeMap::new();
    let mut sum = HSeries::zero(trunc);
    for (&(m, n), coeff) in &d.entries {
        if (m + n) as usize >= trunc || coeff.is_zero() {
            continue;
        }
        if let std::collections::btree_map::Entry::Vacant(e) = ys.entry(m) {
            e.insert(gauss_integral_y(p, m, trunc)?);
        }
        sum = sum + shift_up(&ys[&m], n as usize).scale(coeff);
    }
    let pre = qpow_series(&rat(2 - p + 3 * s, 4), trunc);
    let mut lambda = pre * sum;
    if s > 0 {
        lambda = -&lambda;
    }
    let h1 = d.h1m.checked_mul(p.unsigned_abs()).ok_or_else(|| Error::Malformed("h1 overflows u64".into()))?;
    let out = OhtsukiSeries { h1, lambda };
    debug_assert!(out.denominators_ok());
    Ok(out)
}

pub fn connected_sum(a: &OhtsukiSeries, b: &OhtsukiSeries) -> OhtsukiSeries {
    OhtsukiSeries { h1: a.h1 * b.h1, lambda: &a.lambda * &b.lambda }
}

/// `[a]` for odd `a` as an `h`-series.
pub fn quantum_integer_series(alpha: i64, trunc: usize) -> Result<HSeries> {
    if alpha <= 0 || alpha % 2 == 0 {
        return Err(Error::BadColor(alpha));
    }
    let top = (alpha - 1) / 2;
    let mut acc = HSeries::zero(trunc);
    for e in -top..=top {
        acc = acc + qpow_series(&rat(e, 1), trunc);
    }
    Ok(acc)
}

/// `lambda`-series of a surgery presentation, one unknot at a time, with
/// embedded colored unknots contributing `[a]`.
pub fn ohtsuki_series(pres: &SurgeryPresentation, trunc: usize) -> Result<OhtsukiSeries> {
    let mut series = OhtsukiSeries::sphere(trunc);
    for p in pres.framings() {
        series = tcc_surgery(&dtable_split_unknot(&series, p), trunc)?;
    }
    for &alpha in &pres.embedded {
        series.lambda = &series.lambda * &quantum_integer_series(alpha, trunc)?;
    }
    Ok(series)
}

/// Casson-Walker invariant after `p`-surgery on a knot in `M`:
/// `sign(p)/4 - p/12 - 1/(6p) - Delta''(1)/(p h1M) + lambda_CW(M)`.
pub fn casson_walker_surgery(lam_m: &Rational, h1m: u64, delta_pp: &Rational, p: i64) -> Result<Rational> {
    if p == 0 {
        return Err(Error::ZeroFraming);
    }
    let h1m = i64::try_from(h1m).map_err(|_| Error::Malformed("h1M too large".into()))?;
    Ok(rat(sign(p), 4) - rat(p, 12) - rat(1, 6 * p) - delta_pp / rat(p * h1m, 1) + lam_m)
}

/// `lambda_CW` of a presentation by iterating the surgery recursion from `S^3`.
pub fn casson_walker(pres: &SurgeryPresentation) -> Result<Rational> {
    let mut lam = Rational::zero();
    let mut h1 = 1u64;
    for p in pres.framings() {
        lam = casson_walker_surgery(&lam, h1, &Rational::zero(), p)?;
        h1 *= p.unsigned_abs();
    }
    Ok(lam)
}

/// `h1 lambda_1 / 3`, which should equal `lambda_CW`.
pub fn lambda1_casson_walker(series: &OhtsukiSeries) -> Option<Rational> {
    if series.trunc() < 2 {
        return None;
    }
    Some(series.lambda_n(1) * rat(series.h1 as i64, 3))
}
