//! SO(3) and SU(2) quantum invariants of manifolds obtained by surgery on
//! split framed unknots, possibly carrying split colored unknots.
//!
//! `Z'` is computed exactly in `Z[q]`; the full invariant `Z` only
//! numerically, since it lives outside `Z[q]`.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{gauss_element, quarter_power, CycInt};
use crate::error::{Error, Result};
use crate::numtheory::{kappa, legendre, sign, PrimeK};

/// One surgery component: an unknot with nonzero framing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub struct FramedUnknotComponent(i64);

impl FramedUnknotComponent {
    pub fn new(framing: i64) -> Result<Self> {
        if framing == 0 {
            return Err(Error::ZeroFraming);
        }
        Ok(FramedUnknotComponent(framing))
    }

    pub fn framing(self) -> i64 {
        self.0
    }
}

impl TryFrom<i64> for FramedUnknotComponent {
    type Error = Error;
    fn try_from(p: i64) -> Result<Self> {
        FramedUnknotComponent::new(p)
    }
}

impl From<FramedUnknotComponent> for i64 {
    fn from(c: FramedUnknotComponent) -> i64 {
        c.0
    }
}

/// Surgery on mutually unlinked framed unknots, plus split 0-framed
/// unknots with odd colors living in the result.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPresentation", into = "RawPresentation")]
pub struct SurgeryPresentation {
    pub surgery: Vec<FramedUnknotComponent>,
    pub embedded: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct RawPresentation {
    surgery_unknot_framings: Vec<FramedUnknotComponent>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    embedded_unknot_colors: Vec<i64>,
}

impl TryFrom<RawPresentation> for SurgeryPresentation {
    type Error = Error;
    fn try_from(raw: RawPresentation) -> Result<Self> {
        SurgeryPresentation::new(
            raw.surgery_unknot_framings.into_iter().map(i64::from).collect(),
            raw.embedded_unknot_colors,
        )
    }
}

impl From<SurgeryPresentation> for RawPresentation {
    fn from(p: SurgeryPresentation) -> Self {
        RawPresentation { surgery_unknot_framings: p.surgery, embedded_unknot_colors: p.embedded }
    }
}

impl SurgeryPresentation {
    pub fn new(framings: Vec<i64>, embedded: Vec<i64>) -> Result<Self> {
        let surgery = framings.into_iter().map(FramedUnknotComponent::new).collect::<Result<_>>()?;
        if let Some(&bad) = embedded.iter().find(|&&b| b <= 0 || b % 2 == 0) {
            return Err(Error::BadColor(bad));
        }
        Ok(SurgeryPresentation { surgery, embedded })
    }

    pub fn sphere() -> Self {
        Self::default()
    }

    /// The lens space `L(p, 1)`, obtained from framing `-p`.
    pub fn lens(p: i64) -> Result<Self> {
        Self::new(vec![-p], vec![])
    }

    pub fn framings(&self) -> impl Iterator<Item = i64> + '_ {
        self.surgery.iter().map(|c| c.framing())
    }

    /// Order of the first homology group.
    pub fn h1(&self) -> BigInt {
        self.framings().fold(BigInt::one(), |acc, p| acc * BigInt::from(p.abs()))
    }

    /// Signature of the (diagonal) linking matrix.
    pub fn signature(&self) -> i64 {
        self.framings().map(sign).sum()
    }

    fn require_coprime(&self, k: PrimeK) -> Result<()> {
        let h1 = self.h1();
        if (&h1 % k.big()).is_zero() {
            return Err(Error::PrimeDividesH1 { k: k.get(), h1 });
        }
        Ok(())
    }
}

/// Exact `Z'` together with the numeric `Z` at the same level.
#[derive(Debug, Clone, PartialEq)]
pub struct WrtValue {
    pub exact: CycInt,
    pub numeric: Complex64,
}

impl WrtValue {
    pub fn compute(pres: &SurgeryPresentation, k: PrimeK) -> Result<Self> {
        Ok(WrtValue { exact: so3_zprime(pres, k)?, numeric: wrt_z_numeric(pres, k.get()) })
    }
}

fn check_color(beta: i64) -> Result<()> {
    if beta <= 0 || beta % 2 == 0 {
        return Err(Error::BadColor(beta));
    }
    Ok(())
}

/// The quantum integer `[b] = sum_j q^{(b-1)/2 - j}` for odd `b`.
pub fn quantum_integer(beta: i64, k: PrimeK) -> Result<CycInt> {
    check_color(beta)?;
    let top = (beta - 1) / 2;
    let mut acc = CycInt::zero(k);
    for e in -top..=top {
        acc += &CycInt::qpow(e, k);
    }
    Ok(acc)
}

/// Colored Jones polynomial of the `p`-framed unknot: `q^{p(b^2-1)/4} [b]`.
pub fn jones_framed_unknot(beta: i64, p: i64, k: PrimeK) -> Result<CycInt> {
    let q = quantum_integer(beta, k)?;
    Ok(q * CycInt::qpow(p * (beta * beta - 1) / 4, k))
}

/// Remove the framing factor, leaving `[b]` whatever `p` was.
pub fn unframed_jones(beta: i64, p: i64, k: PrimeK) -> Result<CycInt> {
    Ok(jones_framed_unknot(beta, p, k)? * CycInt::qpow(-p * (beta * beta - 1) / 4, k))
}

/// Split union of framed unknots.
pub fn jones_split_union(components: &[(i64, i64)], k: PrimeK) -> Result<CycInt> {
    components.iter().try_fold(CycInt::one(k), |acc, &(beta, p)| Ok(acc * jones_framed_unknot(beta, p, k)?))
}

/// `J_b` of the framed unknot at `q = exp(2 pi i / K)`, any color.
pub fn jones_framed_unknot_numeric(beta: i64, p: i64, k: u32) -> Complex64 {
    let kf = k as f64;
    let framing = Complex64::from_polar(1.0, 2.0 * PI * (p * (beta * beta - 1)) as f64 / (4.0 * kf));
    let qint = (PI * beta as f64 / kf).sin() / (PI / kf).sin();
    framing * qint
}

/// `J_{K-b} = i^{kappa p} (-1)^{p b} J_b` for the `p`-framed unknot.
pub fn symmetry_principle_check(beta: i64, p: i64, k: PrimeK) -> bool {
    let kk = k.get() as i64;
    if beta <= 0 || beta >= kk {
        return false;
    }
    let lhs = jones_framed_unknot_numeric(kk - beta, p, k.get());
    let phase = Complex64::i().powi((kappa(k) as i64 * p).rem_euclid(4) as i32);
    let parity = if (p * beta).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let rhs = phase * parity * jones_framed_unknot_numeric(beta, p, k.get());
    (lhs - rhs).norm() < 1e-9
}

/// The full SU(2) invariant at level `K` (odd, primality not needed).
///
/// The color sum over `(0, K)^L` factorizes over the split components.
pub fn wrt_z_numeric(pres: &SurgeryPresentation, k: u32) -> Complex64 {
    assert!(k >= 3 && k % 2 == 1, "K must be odd and at least 3");
    let kf = k as f64;
    let qhalf = |e: f64| Complex64::from_polar(1.0, PI * e / kf);
    let mut z = Complex64::one();
    for p in pres.framings() {
        let s = sign(p) as f64;
        let mut sum = Complex64::new(0.0, 0.0);
        for beta in 1..k as i64 {
            let b = beta as f64;
            sum += (qhalf(b) - qhalf(-b)) * jones_framed_unknot_numeric(beta, p, k);
        }
        let pre = Complex64::new(0.0, -1.0) / (2.0 * kf).sqrt()
            * Complex64::from_polar(1.0, -3.0 * PI * s / 4.0)
            * qhalf(1.5 * s);
        z *= pre * sum;
    }
    for &alpha in &pres.embedded {
        z *= jones_framed_unknot_numeric(alpha, 0, k);
    }
    z
}

/// Exact `Z'` of `p`-framed surgery on one unknot.
fn surgery_factor(p: i64, k: PrimeK) -> Result<CycInt> {
    let g = gauss_element(p, k).map_err(|_| Error::PrimeDividesH1 { k: k.get(), h1: BigInt::from(p.abs()) })?;
    let mut sum = CycInt::zero(k);
    for beta in (1..k.get() as i64).step_by(2) {
        sum += &(CycInt::qhalf_diff(beta, k) * jones_framed_unknot(beta, p, k)?);
    }
    let z = g.divide(&sum)? * quarter_power(3 * sign(p), k);
    Ok(if g.legendre() as i64 * sign(p) < 0 { -z } else { z })
}

/// The SO(3) invariant `Z'(M; K)` as an exact element of `Z[q]`.
pub fn so3_zprime(pres: &SurgeryPresentation, k: PrimeK) -> Result<CycInt> {
    pres.require_coprime(k)?;
    let mut z = CycInt::one(k);
    for p in pres.framings() {
        z *= &surgery_factor(p, k)?;
    }
    for &alpha in &pres.embedded {
        z *= &quantum_integer(alpha, k)?;
    }
    Ok(z)
}

/// Closed form of `Z'(L(p,1); K)`:
/// `(|p|/K) sign(p) q^{4*(p + 2p* - 3 sign p)} (q^{2* p*} - q^{-2* p*}) / (q^{2*} - q^{-2*})`.
pub fn lens_zprime_closed_form(p: i64, k: PrimeK) -> Result<CycInt> {
    let p_star = k.star(p).map_err(|_| Error::PrimeDividesH1 { k: k.get(), h1: BigInt::from(p.abs()) })? as i64;
    let two_star = k.star(2)? as i64;
    let s = sign(p);
    let num = CycInt::qpow(two_star * p_star, k) - CycInt::qpow(-two_star * p_star, k);
    // q^{2*} - q^{-2*} = q^{-2*} h
    let ratio = num.div_h().ok_or(Error::NotDivisible { k: k.get() })? * CycInt::qpow(two_star, k);
    let z = ratio * quarter_power(p + 2 * p_star - 3 * s, k);
    let sgn = legendre(&BigInt::from(p.abs()), k) as i64 * s;
    Ok(if sgn < 0 { -z } else { z })
}

/// Ohtsuki's integers `a_n(M; K)`: coordinates of `Z'` in powers of `h`.
pub fn extract_a_n(z: &CycInt) -> Vec<BigInt> {
    z.to_h_basis()
}

/// `|Z(M;K) - Z(M;3) Z'(M;K)|`, conjugating `Z(M;3)` when `K = 1 (mod 4)`.
pub fn bridge_residual(pres: &SurgeryPresentation, k: PrimeK) -> Result<f64> {
    let zp = so3_zprime(pres, k)?.to_complex();
    let z3 = wrt_z_numeric(pres, 3);
    let z3 = if kappa(k) > 0 { z3.conj() } else { z3 };
    Ok((wrt_z_numeric(pres, k.get()) - z3 * zp).norm())
}

/// True when `1/z` lies in `Z[q]`.
pub fn zprime_is_unit(z: &CycInt) -> bool {
    CycInt::one(z.k()).divide_exact(z).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn k(v: u32) -> PrimeK {
        PrimeK::new(v).unwrap()
    }

    #[test]
    fn jones_examples() {
        let kk = k(7);
        assert!(jones_framed_unknot(1, 5, kk).unwrap().is_one());
        let three = CycInt::qpow(1, kk) + CycInt::one(kk) + CycInt::qpow(-1, kk);
        assert_eq!(jones_framed_unknot(3, 0, kk).unwrap(), three);
        assert_eq!(jones_framed_unknot(3, 1, kk).unwrap(), CycInt::qpow(2, kk) * &three);
        assert_eq!(jones_framed_unknot(2, 1, kk), Err(Error::BadColor(2)));
        assert_eq!(jones_framed_unknot(-1, 1, kk), Err(Error::BadColor(-1)));
    }

    #[test]
    fn jones_agrees_with_numeric_evaluation() {
        for kk in PrimeK::up_to(19) {
            for beta in (1..kk.get() as i64).step_by(2) {
                for p in -4..=4 {
                    let exact = jones_framed_unknot(beta, p, kk).unwrap().to_complex();
                    let numeric = jones_framed_unknot_numeric(beta, p, kk.get());
                    assert!((exact - numeric).norm() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn split_union_examples() {
        let kk = k(11);
        assert!(jones_split_union(&[], kk).unwrap().is_one());
        assert_eq!(jones_split_union(&[(5, 2)], kk).unwrap(), jones_framed_unknot(5, 2, kk).unwrap());
        let three = quantum_integer(3, kk).unwrap();
        assert_eq!(jones_split_union(&[(3, 0), (3, 0)], kk).unwrap(), &three * &three);
    }

    #[test]
    fn framing_independence() {
        for kk in [5, 7, 13].map(k) {
            assert_ne!(jones_framed_unknot(3, 1, kk).unwrap(), jones_framed_unknot(3, 0, kk).unwrap());
            for beta in [1, 3, 5, 9] {
                let base = quantum_integer(beta, kk).unwrap();
                for p in [-3, -1, 0, 2, 7] {
                    assert_eq!(unframed_jones(beta, p, kk).unwrap(), base);
                }
            }
        }
    }

    #[test]
    fn symmetry_principle() {
        for kk in PrimeK::up_to(13) {
            for p in -3..=3 {
                for beta in 1..kk.get() as i64 {
                    assert!(symmetry_principle_check(beta, p, kk), "K={kk} p={p} b={beta}");
                }
            }
        }
        assert!(symmetry_principle_check(3, 2, k(7)));
        assert!(symmetry_principle_check(1, 1, k(5)));
        assert!(!symmetry_principle_check(0, 1, k(5)));
    }

    #[test]
    fn numeric_z_normalization() {
        for kk in [3u32, 5, 7, 9, 15] {
            assert!((wrt_z_numeric(&SurgeryPresentation::sphere(), kk) - Complex64::one()).norm() < 1e-12);
            for p in [1, -1] {
                let pres = SurgeryPresentation::new(vec![p], vec![]).unwrap();
                assert!((wrt_z_numeric(&pres, kk) - Complex64::one()).norm() < 1e-9, "K={kk} p={p}");
            }
        }
    }

    #[test]
    fn sphere_and_unit_framings() {
        for kk in PrimeK::up_to(23) {
            assert!(so3_zprime(&SurgeryPresentation::sphere(), kk).unwrap().is_one());
            for p in [1, -1] {
                let pres = SurgeryPresentation::new(vec![p], vec![]).unwrap();
                assert!(so3_zprime(&pres, kk).unwrap().is_one(), "K={kk} p={p}");
            }
        }
    }

    #[test]
    fn lens_surgery_matches_closed_form() {
        for kk in [3, 5, 7, 11, 13].map(k) {
            for p in (-12i64..=12).filter(|p| p.rem_euclid(kk.get() as i64) != 0) {
                let surgery = so3_zprime(&SurgeryPresentation::lens(p).unwrap(), kk).unwrap();
                assert_eq!(surgery, lens_zprime_closed_form(p, kk).unwrap(), "K={kk} p={p}");
            }
        }
    }

    #[test]
    fn lens_inverse_is_integral() {
        for kk in [5, 7, 11, 13].map(k) {
            for p in (-12i64..=12).filter(|p| p.rem_euclid(kk.get() as i64) != 0) {
                let z = lens_zprime_closed_form(p, kk).unwrap();
                assert!(zprime_is_unit(&z), "K={kk} p={p}");
            }
        }
    }

    #[test]
    fn multiplicative_over_split_presentations() {
        for kk in [7, 11, 13].map(k) {
            for p1 in [2, 3, 5, -4] {
                for p2 in [-2, 3, 5] {
                    let both = SurgeryPresentation::new(vec![-p1, -p2], vec![3]).unwrap();
                    let expect = lens_zprime_closed_form(p1, kk).unwrap()
                        * lens_zprime_closed_form(p2, kk).unwrap()
                        * quantum_integer(3, kk).unwrap();
                    assert_eq!(so3_zprime(&both, kk).unwrap(), expect);
                }
            }
        }
    }

    #[test]
    fn divisibility_hypothesis_enforced() {
        let pres = SurgeryPresentation::lens(10).unwrap();
        assert!(matches!(so3_zprime(&pres, k(5)), Err(Error::PrimeDividesH1 { .. })));
        assert!(matches!(SurgeryPresentation::new(vec![0], vec![]), Err(Error::ZeroFraming)));
        assert!(matches!(SurgeryPresentation::new(vec![2], vec![4]), Err(Error::BadColor(4))));
    }

    #[test]
    fn a_n_low_coefficients() {
        assert_eq!(extract_a_n(&CycInt::one(k(7)))[0], BigInt::one());
        assert!(extract_a_n(&CycInt::one(k(7)))[1..].iter().all(Zero::is_zero));
        for kk in [5, 7, 11, 13].map(k) {
            for p in (2i64..=12).filter(|p| p % kk.get() as i64 != 0) {
                let pres = SurgeryPresentation::lens(p).unwrap();
                let z = so3_zprime(&pres, kk).unwrap();
                let a = extract_a_n(&z);
                assert_eq!(CycInt::from_h_basis(kk, &a), z);
                let h1 = pres.h1();
                let expect = legendre(&h1, kk) as i64 * kk.star(p).unwrap() as i64;
                assert_eq!((&a[0] - expect) % kk.big(), BigInt::zero(), "K={kk} p={p}");
            }
        }
    }

    #[test]
    fn bridge_to_full_invariant() {
        for kk in [5, 7, 11, 13].map(k) {
            for p in (-12i64..=12).filter(|p| p.rem_euclid(kk.get() as i64) != 0) {
                let r = bridge_residual(&SurgeryPresentation::lens(p).unwrap(), kk).unwrap();
                assert!(r < 1e-9, "K={kk} p={p}: residual {r}");
            }
        }
    }

    #[test]
    fn presentation_json() {
        let pres: SurgeryPresentation =
            serde_json::from_str(r#"{"surgery_unknot_framings": [-2, 3], "embedded_unknot_colors": [3]}"#).unwrap();
        assert_eq!(pres.h1(), BigInt::from(6));
        assert_eq!(pres.signature(), 0);
        let bare: SurgeryPresentation = serde_json::from_str(r#"{"surgery_unknot_framings": []}"#).unwrap();
        assert_eq!(bare, SurgeryPresentation::sphere());
        assert!(serde_json::from_str::<SurgeryPresentation>(r#"{"surgery_unknot_framings": [0]}"#).is_err());
        assert!(serde_json::from_str::<SurgeryPresentation>(
            r#"{"surgery_unknot_framings": [1], "embedded_unknot_colors": [2]}"#
        )
        .is_err());
        let back: SurgeryPresentation = serde_json::from_str(&serde_json::to_string(&pres).unwrap()).unwrap();
        assert_eq!(back, pres);
    }

    proptest! {
        #[test]
        fn zprime_is_multiplicative(
            a in prop::collection::vec(prop_oneof![-9i64..=-1, 1i64..=9], 0..3),
            b in prop::collection::vec(prop_oneof![-9i64..=-1, 1i64..=9], 0..3),
            kidx in 0usize..4,
        ) {
            let kk = [5, 7, 11, 13].map(k)[kidx];
            let pa = SurgeryPresentation::new(a.clone(), vec![]).unwrap();
            let pb = SurgeryPresentation::new(b.clone(), vec![]).unwrap();
            let pab = SurgeryPresentation::new([a, b].concat(), vec![]).unwrap();
            match (so3_zprime(&pa, kk), so3_zprime(&pb, kk), so3_zprime(&pab, kk)) {
                (Ok(x), Ok(y), Ok(xy)) => prop_assert_eq!(x * y, xy),
                (_, _, r) => prop_assert!(r.is_err()),
            }
        }
    }
}
