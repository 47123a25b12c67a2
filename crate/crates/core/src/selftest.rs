//! Desk-scale sweeps that exercise every identity and congruence the
//! library implements, each reported as one pass/fail line.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::cyclotomic::CycInt;
use crate::error::Result;
use crate::gauss::{check_y_correspondence, gauss_sum_x, gauss_sum_x_closed_form, gauss_sum_y};
use crate::hseries::{congruent_to_order, qpow_series, wedge};
use crate::invariants::{
    bridge_residual, extract_a_n, lens_zprime_closed_form, so3_zprime, symmetry_principle_check, SurgeryPresentation,
};
use crate::numtheory::{legendre, remainder_mod, PrimeK, Rational};
use crate::tcc::{
    casson_walker, casson_walker_surgery, dtable_unknot, lambda1_casson_walker, ohtsuki_series, tcc_lens, tcc_surgery,
};
use crate::verify::check_lawrence;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionOutcome {
    pub id: u32,
    pub title: &'static str,
    pub checked: usize,
    pub skipped: usize,
    pub failures: Vec<String>,
}

impl CriterionOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.checked > 0
    }
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "[{verdict}] {}. {} ({} checked, {} skipped)", self.id, self.title, self.checked, self.skipped)?;
        if let Some(first) = self.failures.first() {
            write!(f, "; first failure: {first}")?;
        }
        Ok(())
    }
}

fn primes(list: &[u32]) -> Vec<PrimeK> {
    list.iter().map(|&k| PrimeK::new(k).expect("listed primes are odd primes")).collect()
}

fn coprime(p: i64, k: PrimeK) -> bool {
    p.rem_euclid(k.get() as i64) != 0
}

fn nonzero(range: std::ops::RangeInclusive<i64>) -> impl Iterator<Item = i64> {
    range.filter(|&p| p != 0)
}

/// Run `check` over all cases; `None` means skipped, `Some(Err)` a failure.
fn sweep<C, F>(id: u32, title: &'static str, cases: Vec<C>, check: F) -> CriterionOutcome
where
    C: Send + Sync + fmt::Debug,
    F: Fn(&C) -> Option<Result<bool>> + Send + Sync,
{
    let results: Vec<(String, Option<std::result::Result<bool, String>>)> =
        cases.par_iter().map(|c| (format!("{c:?}"), check(c).map(|r| r.map_err(|e| e.to_string())))).collect();
    let mut out = CriterionOutcome { id, title, checked: 0, skipped: 0, failures: vec![] };
    for (case, r) in results {
        match r {
            None => out.skipped += 1,
            Some(Ok(true)) => out.checked += 1,
            Some(Ok(false)) => {
                out.checked += 1;
                out.failures.push(case);
            }
            Some(Err(e)) => {
                out.checked += 1;
                out.failures.push(format!("{case}: {e}"));
            }
        }
    }
    out
}

fn lens_family() -> Vec<(PrimeK, i64)> {
    primes(&[3, 5, 7, 11, 13]).into_iter().flat_map(|k| nonzero(-12..=12).map(move |p| (k, p))).collect()
}

fn sum_pairs() -> Vec<[i64; 2]> {
    [2, 3, 5].iter().flat_map(|&a| [2, 3, 5].map(|b| [a, b])).collect()
}

fn sum_family() -> Vec<(PrimeK, [i64; 2])> {
    primes(&[7, 11, 13]).into_iter().flat_map(|k| sum_pairs().into_iter().map(move |ps| (k, ps))).collect()
}

fn sum_presentation(ps: [i64; 2]) -> SurgeryPresentation {
    SurgeryPresentation::new(vec![-ps[0], -ps[1]], vec![]).expect("nonzero framings")
}

pub fn criterion_1() -> CriterionOutcome {
    let mut cases = vec![];
    for k in PrimeK::up_to(61) {
        for p in nonzero(-8..=8) {
            for m in 0..=6i64 {
                cases.push((k, p, m));
            }
        }
    }
    sweep(1, "Gauss sum X equals its closed form", cases, |&(k, p, m)| {
        if !coprime(p, k) {
            return None;
        }
        Some(gauss_sum_x(p, m, k).and_then(|x| Ok(x == gauss_sum_x_closed_form(p, m, k)?)))
    })
}

pub fn criterion_2() -> CriterionOutcome {
    let mut cases = vec![];
    for k in primes(&[3, 5, 7, 11, 13, 17]) {
        for p in nonzero(-6..=6) {
            for m in 0..=4u32 {
                cases.push((k, p, m));
            }
        }
    }
    sweep(2, "Gauss sum Y is O(h^m) and matches the integral to order m+4", cases, |&(k, p, m)| {
        if !coprime(p, k) {
            return None;
        }
        Some((|| {
            let y = gauss_sum_y(p, m, k)?;
            let small = y.h_valuation().is_none_or(|v| v >= m);
            Ok(small && check_y_correspondence(p, m, k, m + 3)?)
        })())
    })
}

pub fn criterion_3() -> CriterionOutcome {
    let mut cases = vec![];
    for k in PrimeK::up_to(31) {
        for m in -10..=10i64 {
            for n in nonzero(-10..=10) {
                cases.push((k, m, n));
            }
        }
    }
    sweep(3, "Rational q-powers map to q^{m n*}", cases, |&(k, m, n)| {
        if !coprime(n, k) {
            return None;
        }
        Some((|| {
            let target = CycInt::qpow(m * k.star(n)? as i64, k);
            let r = Rational::new(BigInt::from(m), BigInt::from(n));
            for depth in 0..=4u32 {
                let w = wedge(&qpow_series(&r, depth as usize + 1), k, depth)?;
                if !congruent_to_order(&w, &target, depth + 1) {
                    return Ok(false);
                }
            }
            Ok(true)
        })())
    })
}

pub fn criterion_4() -> CriterionOutcome {
    sweep(4, "Lens space surgery sum equals the closed form", lens_family(), |&(k, p)| {
        if !coprime(p, k) {
            return None;
        }
        Some((|| Ok(so3_zprime(&SurgeryPresentation::lens(p)?, k)? == lens_zprime_closed_form(p, k)?))())
    })
}

#[derive(Debug)]
enum Family {
    Lens(PrimeK, i64),
    Sum(PrimeK, [i64; 2]),
}

fn congruence_family() -> Vec<Family> {
    let mut cases: Vec<Family> = lens_family().into_iter().map(|(k, p)| Family::Lens(k, p)).collect();
    cases.extend(sum_family().into_iter().map(|(k, ps)| Family::Sum(k, ps)));
    cases
}

fn family_case(f: &Family) -> Option<(SurgeryPresentation, PrimeK, u32)> {
    match *f {
        Family::Lens(k, p) => coprime(p, k).then(|| (SurgeryPresentation::lens(p).unwrap(), k, k.get() - 2)),
        Family::Sum(k, ps) => Some((sum_presentation(ps), k, (k.get() - 3) / 2)),
    }
}

pub fn criterion_5() -> CriterionOutcome {
    sweep(5, "Z' is congruent to the lambda-series (Lawrence)", congruence_family(), |f| {
        let (pres, k, depth) = family_case(f)?;
        Some(check_lawrence(&pres, k, depth))
    })
}

pub fn criterion_6() -> CriterionOutcome {
    sweep(6, "a_0 and a_1 match h1* and 3 lambda_CW / h1 mod K", congruence_family(), |f| {
        let (pres, k, _) = family_case(f)?;
        Some((|| {
            let h1 = pres.h1();
            let leg = legendre(&h1, k) as i64;
            let a = extract_a_n(&so3_zprime(&pres, k)?);
            let kb = k.big();
            let h1_rat = Rational::from_integer(h1.clone());
            let lam0 = remainder_mod(&h1_rat.recip(), k, 0)?;
            let lam1 = remainder_mod(&(casson_walker(&pres)? * Rational::from_integer(3.into()) / h1_rat), k, 0)?;
            let ok0 = ((&a[0] - lam0 * leg) % &kb).is_zero();
            let ok1 = ((&a[1] - lam1 * leg) % &kb).is_zero();
            Ok(ok0 && ok1)
        })())
    })
}

pub fn criterion_7() -> CriterionOutcome {
    let cases: Vec<i64> = nonzero(-9..=9).collect();
    sweep(7, "Surgery on the unknot reproduces the lens series through h^8", cases, |&p| {
        Some((|| Ok(tcc_surgery(&dtable_unknot().with_self_linking(-p), 9)? == tcc_lens(p, 9)?))())
    })
}

#[derive(Debug)]
enum CwCase {
    Sphere(i64),
    Lens(i64),
    Sum([i64; 2]),
}

pub fn criterion_8() -> CriterionOutcome {
    let mut cases: Vec<CwCase> = vec![CwCase::Sphere(1), CwCase::Sphere(-1)];
    cases.extend(nonzero(-12..=12).map(CwCase::Lens));
    cases.extend(sum_pairs().into_iter().map(CwCase::Sum));
    sweep(8, "Casson-Walker recursion: S^3 gives 0, lambda_1 = 3 lambda_CW / h1", cases, |c| {
        Some((|| match *c {
            CwCase::Sphere(p) => Ok(casson_walker_surgery(&Rational::zero(), 1, &Rational::zero(), p)?.is_zero()),
            CwCase::Lens(p) => {
                let pres = SurgeryPresentation::lens(p)?;
                Ok(lambda1_casson_walker(&tcc_lens(p, 3)?) == Some(casson_walker(&pres)?))
            }
            CwCase::Sum(ps) => {
                let pres = sum_presentation(ps);
                Ok(lambda1_casson_walker(&ohtsuki_series(&pres, 3)?) == Some(casson_walker(&pres)?))
            }
        })())
    })
}

#[derive(Debug)]
enum NumericCase {
    Bridge(PrimeK, i64),
    Symmetry(PrimeK, i64, i64),
}

pub fn criterion_9() -> CriterionOutcome {
    let mut cases = vec![];
    for k in primes(&[5, 7, 11, 13]) {
        cases.extend(nonzero(-12..=12).map(|p| NumericCase::Bridge(k, p)));
    }
    for k in PrimeK::up_to(13) {
        for p in -3..=3 {
            cases.extend((1..k.get() as i64).map(|b| NumericCase::Symmetry(k, p, b)));
        }
    }
    sweep(9, "Numeric bridge to the SU(2) invariant and symmetry principle within 1e-9", cases, |c| match *c {
        NumericCase::Bridge(k, p) => {
            if !coprime(p, k) {
                return None;
            }
            Some((|| Ok(bridge_residual(&SurgeryPresentation::lens(p)?, k)? < 1e-9))())
        }
        NumericCase::Symmetry(k, p, b) => Some(Ok(symmetry_principle_check(b, p, k))),
    })
}

pub fn all_criteria() -> Vec<fn() -> CriterionOutcome> {
    vec![
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
    ]
}

pub fn run_all() -> Vec<CriterionOutcome> {
    all_criteria().into_iter().map(|c| c()).collect()
}
