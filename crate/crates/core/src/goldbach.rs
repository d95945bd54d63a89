//! Goldbach-side checks: the prime window of `F(p_x)`, unit-pair counts via
//! gcd arithmetic, the stringent form over `(p_x^2, p_{x+1}^2)`, the
//! all-evens scan, and the empirical audit of `C` as a lower bound.

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::bound::c_of;
use crate::primal::{primorial, PrimeBasis};
use crate::sieve::PrimeSieve;
use crate::{Error, Result};

fn require_sieve(sieve: &PrimeSieve, needed: u64) -> Result<()> {
    if sieve.limit() < needed {
        return Err(Error::SieveTooSmall {
            needed,
            have: sieve.limit(),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowReport {
    pub x: usize,
    pub prime: u64,
    pub next_prime: u64,
    pub units_checked: u64,
    /// Integers in `(p_x, p_{x+1}^2)` where unit-ness and primality disagree.
    pub counterexamples: Vec<u64>,
    /// Smallest composite unit above `p_x`, searched through `p_{x+1}^2`.
    pub first_composite_unit: Option<u64>,
}

impl WindowReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
            && self.first_composite_unit == Some(self.next_prime * self.next_prime)
    }
}

/// For `p_x < v < p_{x+1}^2`: `v` is coprime to `L(p_x)` iff `v` is prime.
pub fn prime_window_check(x: usize, sieve: &PrimeSieve) -> Result<WindowReport> {
    let next = PrimeBasis::new(x + 1)?;
    let basis = PrimeBasis::new(x)?;
    let p = basis.largest();
    let q = next.largest();
    let top = q * q;
    require_sieve(sieve, top)?;

    let mut units_checked = 0;
    let mut counterexamples = Vec::new();
    for v in p + 1..top {
        let unit = basis.is_unit(v);
        units_checked += unit as u64;
        if unit != sieve.is_prime(v) {
            counterexamples.push(v);
        }
    }
    let first_composite_unit = (p + 1..=top).find(|&v| basis.is_unit(v) && !sieve.is_prime(v));
    Ok(WindowReport {
        x,
        prime: p,
        next_prime: q,
        units_checked,
        counterexamples,
        first_composite_unit,
    })
}

/// `gcd(a, L) == 1` decided as `gcd(a, L mod a)`.
fn coprime_to(a: u64, l: &BigUint) -> bool {
    let rem = (l % a).to_u64().expect("remainder below a");
    a.gcd(&rem) == 1
}

fn check_even(e: u64) -> Result<()> {
    if e % 2 == 1 {
        return Err(Error::OddTarget(e));
    }
    if e < 4 {
        return Err(Error::TargetTooSmall { min: 4, got: e });
    }
    Ok(())
}

/// Unordered pairs `{a, e - a}` with `2 <= a <= e/2` and both coprime to
/// `L(p_x)`. Summand 1 is excluded.
pub fn unit_pair_count(e: u64, x: usize) -> Result<u64> {
    check_even(e)?;
    let l = primorial(x)?;
    Ok((2..=e / 2)
        .filter(|&a| coprime_to(a, &l) && coprime_to(e - a, &l))
        .count() as u64)
}

/// Unit table `[0, n]` by gcd against `L(p_x)`; index 0 is unused.
fn unit_table(n: u64, l: &BigUint) -> Vec<bool> {
    (0..=n).map(|a| a > 0 && coprime_to(a, l)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GoldbachWitness {
    pub e: u64,
    pub q: u64,
    pub r: u64,
    pub threshold: u64,
}

impl GoldbachWitness {
    pub fn stringent(&self) -> bool {
        self.q > self.threshold && self.r > self.threshold
    }
}

/// The lexicographically smallest `(q, r)` with `q <= r`, both prime and
/// both above `threshold`.
pub fn minimal_witness(e: u64, threshold: u64, sieve: &PrimeSieve) -> Option<GoldbachWitness> {
    (threshold + 1..=e / 2)
        .find(|&q| sieve.is_prime(q) && sieve.is_prime(e - q))
        .map(|q| GoldbachWitness {
            e,
            q,
            r: e - q,
            threshold,
        })
}

/// Every pair `(q, r)` with `threshold < q <= r`, both prime.
pub fn all_witnesses(e: u64, threshold: u64, sieve: &PrimeSieve) -> Vec<GoldbachWitness> {
    (threshold + 1..=e / 2)
        .filter(|&q| sieve.is_prime(q) && sieve.is_prime(e - q))
        .map(|q| GoldbachWitness {
            e,
            q,
            r: e - q,
            threshold,
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct StringentReport {
    pub x: usize,
    pub prime: u64,
    pub next_prime: u64,
    /// Minimal witness per even `e` in `(p_x^2, p_{x+1}^2)`, ascending.
    pub witnesses: Vec<GoldbachWitness>,
    pub violations: Vec<u64>,
}

impl StringentReport {
    pub fn evens_checked(&self) -> usize {
        self.witnesses.len() + self.violations.len()
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Every even `e` with `p_x^2 < e < p_{x+1}^2` as a sum of two primes
/// exceeding `p_x`.
pub fn stringent_check(x: usize, sieve: &PrimeSieve) -> Result<StringentReport> {
    let next = PrimeBasis::new(x + 1)?;
    let p = next.primes()[x - 1];
    let q = next.largest();
    require_sieve(sieve, q * q)?;
    let results: Vec<(u64, Option<GoldbachWitness>)> = (p * p / 2 + 1..=(q * q - 1) / 2)
        .into_par_iter()
        .map(|k| 2 * k)
        .map(|e| (e, minimal_witness(e, p, sieve)))
        .collect();
    let mut witnesses = Vec::new();
    let mut violations = Vec::new();
    for (e, w) in results {
        match w {
            Some(w) => witnesses.push(w),
            None => violations.push(e),
        }
    }
    Ok(StringentReport {
        x,
        prime: p,
        next_prime: q,
        witnesses,
        violations,
    })
}

/// `stringent_check` for every `x` with `p_{x+1}^2` within the sieve.
pub fn stringent_all(sieve: &PrimeSieve) -> Result<Vec<StringentReport>> {
    let primes: Vec<u64> = sieve
        .primes()
        .take_while(|&p| p.saturating_mul(p) <= sieve.limit())
        .collect();
    // x ranges over indices whose successor prime squared fits
    (1..primes.len())
        .map(|x| stringent_check(x, sieve))
        .collect()
}

#[derive(Debug, Clone)]
pub struct ScanReport {
    pub e_max: u64,
    pub checked: u64,
    /// Even numbers lacking a pair of primes above their threshold.
    pub violations: Vec<u64>,
    /// The even number whose minimal stringent witness has the largest `q`.
    pub hardest: Option<GoldbachWitness>,
}

impl ScanReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For every even `4 < e <= e_max`, with `P` the largest prime with
/// `P^2 < e`: `e` is a sum of two primes both exceeding `P`.
pub fn conjecture_scan(e_max: u64, sieve: &PrimeSieve) -> Result<ScanReport> {
    require_sieve(sieve, e_max.max(2))?;
    let small: Vec<u64> = sieve
        .primes()
        .take_while(|&p| p.saturating_mul(p) < e_max.max(6) + 1)
        .collect();
    let threshold = |e: u64| small[small.partition_point(|&p| p * p < e) - 1];

    const CHUNK: u64 = 1 << 14;
    let first = 3u64; // e = 6
    let last = e_max / 2;
    if last < first {
        return Ok(ScanReport {
            e_max,
            checked: 0,
            violations: Vec::new(),
            hardest: None,
        });
    }
    let chunks: Vec<(u64, u64)> = (first..=last)
        .step_by(CHUNK as usize)
        .map(|lo| (lo, (lo + CHUNK - 1).min(last)))
        .collect();
    let partial: Vec<(Vec<u64>, Option<GoldbachWitness>)> = chunks
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut violations = Vec::new();
            let mut hardest: Option<GoldbachWitness> = None;
            for k in lo..=hi {
                let e = 2 * k;
                match minimal_witness(e, threshold(e), sieve) {
                    Some(w) => {
                        if hardest.is_none_or(|h| w.q > h.q) {
                            hardest = Some(w);
                        }
                    }
                    None => violations.push(e),
                }
            }
            (violations, hardest)
        })
        .collect();

    let mut violations = Vec::new();
    let mut hardest: Option<GoldbachWitness> = None;
    for (v, h) in partial {
        violations.extend(v);
        if let Some(h) = h {
            if hardest.is_none_or(|cur| h.q > cur.q) {
                hardest = Some(h);
            }
        }
    }
    Ok(ScanReport {
        e_max,
        checked: last - first + 1,
        violations,
        hardest,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditRecord {
    pub e: u64,
    pub x: usize,
    pub empirical_pairs: u64,
    pub c_bound: BigRational,
}

impl AuditRecord {
    pub fn slack(&self) -> BigRational {
        BigRational::from_integer(self.empirical_pairs.into()) - &self.c_bound
    }
}

#[derive(Debug, Clone)]
pub struct BoundAudit {
    pub x: usize,
    pub records: Vec<AuditRecord>,
    /// `(e, unit pairs, prime pairs above p_x)` where the two counts differ;
    /// `None` when no sieve was supplied.
    pub bridge_mismatches: Option<Vec<(u64, u64, u64)>>,
}

impl BoundAudit {
    /// Record with the smallest slack (first on ties).
    pub fn tightest(&self) -> Option<&AuditRecord> {
        self.records
            .iter()
            .fold(None, |best: Option<&AuditRecord>, r| match best {
                Some(b) if b.slack() <= r.slack() => Some(b),
                _ => Some(r),
            })
    }

    pub fn claim_holds(&self) -> bool {
        self.records
            .iter()
            .all(|r| r.slack() >= BigRational::from_integer(0.into()))
    }

    pub fn bridge_holds(&self) -> Option<bool> {
        self.bridge_mismatches.as_ref().map(Vec::is_empty)
    }
}

/// Empirical unit-pair counts against `C(e, x)` for every even `e` in
/// `(p_x^2, p_{x+1}^2)`, optionally restricted to `only`. With a sieve the
/// unit pairs are also matched against prime pairs above `p_x`.
pub fn bound_audit(x: usize, only: Option<u64>, sieve: Option<&PrimeSieve>) -> Result<BoundAudit> {
    if x < 2 {
        return Err(Error::IndexTooSmall { min: 2, got: x });
    }
    let next = PrimeBasis::new(x + 1)?;
    let p = next.primes()[x - 1];
    let q = next.largest();
    let evens: Vec<u64> = match only {
        Some(e) => {
            check_even(e)?;
            vec![e]
        }
        None => (p * p + 1..q * q).filter(|e| e % 2 == 0).collect(),
    };
    let top = *evens.iter().max().expect("window holds at least one even");
    let l = primorial(x)?;
    let units = unit_table(top, &l);

    let records = evens
        .par_iter()
        .map(|&e| {
            let empirical_pairs = (2..=e / 2)
                .filter(|&a| units[a as usize] && units[(e - a) as usize])
                .count() as u64;
            c_of(e, x).map(|c| AuditRecord {
                e,
                x,
                empirical_pairs,
                c_bound: c.c,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let bridge_mismatches = match sieve {
        Some(s) => {
            require_sieve(s, top)?;
            Some(
                records
                    .iter()
                    .filter_map(|r| {
                        let primes = all_witnesses(r.e, p, s).len() as u64;
                        (primes != r.empirical_pairs).then_some((r.e, r.empirical_pairs, primes))
                    })
                    .collect(),
            )
        }
        None => None,
    };
    Ok(BoundAudit {
        x,
        records,
        bridge_mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Limits;

    fn sieve(limit: u64) -> PrimeSieve {
        PrimeSieve::new(limit, &Limits::default()).unwrap()
    }

    #[test]
    fn window_examples() {
        let s = sieve(10_000);
        let r = prime_window_check(3, &s).unwrap();
        assert!(r.passed());
        assert_eq!(r.units_checked, 12); // 7..47
        assert_eq!(r.first_composite_unit, Some(49));
        let r = prime_window_check(1, &s).unwrap();
        assert_eq!(r.units_checked, 3); // 3, 5, 7
        assert!(r.passed());
        assert!(matches!(
            prime_window_check(3, &sieve(40)),
            Err(Error::SieveTooSmall { .. })
        ));
    }

    #[test]
    fn window_detects_faults() {
        let mut s = sieve(100);
        s.inject_fault(11);
        let r = prime_window_check(3, &s).unwrap();
        assert_eq!(r.counterexamples, vec![11]);
        assert!(!r.passed());
    }

    #[test]
    fn unit_pair_examples() {
        assert_eq!(unit_pair_count(26, 3).unwrap(), 2);
        assert_eq!(unit_pair_count(10, 2).unwrap(), 1);
        assert_eq!(unit_pair_count(6, 1).unwrap(), 1);
        assert!(matches!(unit_pair_count(7, 2), Err(Error::OddTarget(7))));
        assert!(unit_pair_count(2, 2).is_err());
    }

    #[test]
    fn unit_pairs_by_enumeration() {
        // plain gcd against a machine-sized primorial
        for x in 1..=6 {
            let l: u64 = crate::primal::first_primes(x).unwrap().iter().product();
            for e in (4..400).step_by(2) {
                let brute = (2..=e / 2)
                    .filter(|&a| a.gcd(&l) == 1 && (e - a).gcd(&l) == 1)
                    .count() as u64;
                assert_eq!(unit_pair_count(e, x).unwrap(), brute);
            }
        }
    }

    #[test]
    fn stringent_examples() {
        let s = sieve(1000);
        let r = stringent_check(3, &s).unwrap();
        assert!(r.passed());
        assert_eq!(r.evens_checked(), 12);
        let w = |e: u64| r.witnesses.iter().find(|w| w.e == e).copied().unwrap();
        assert_eq!((w(26).q, w(26).r), (7, 19));
        assert_eq!((w(28).q, w(28).r), (11, 17));
        assert_eq!((w(48).q, w(48).r), (7, 41));
        assert!(all_witnesses(48, 5, &s)
            .iter()
            .any(|w| (w.q, w.r) == (11, 37)));
        assert!(r
            .witnesses
            .iter()
            .all(|w| w.stringent() && w.q + w.r == w.e));

        let r = stringent_check(2, &s).unwrap();
        let firsts: Vec<(u64, u64, u64)> = r.witnesses.iter().map(|w| (w.e, w.q, w.r)).collect();
        assert_eq!(firsts[0], (10, 5, 5));
        assert_eq!(firsts[1], (12, 5, 7));
        assert_eq!(*firsts.last().unwrap(), (24, 5, 19));

        let r = stringent_check(1, &s).unwrap();
        let firsts: Vec<(u64, u64, u64)> = r.witnesses.iter().map(|w| (w.e, w.q, w.r)).collect();
        assert_eq!(firsts, vec![(6, 3, 3), (8, 3, 5)]);
    }

    #[test]
    fn all_witness_enumeration() {
        let s = sieve(100);
        let all: Vec<(u64, u64)> = all_witnesses(24, 3, &s)
            .iter()
            .map(|w| (w.q, w.r))
            .collect();
        assert_eq!(all, vec![(5, 19), (7, 17), (11, 13)]);
    }

    #[test]
    fn scan_small_and_faulted() {
        let s = sieve(10_000);
        let r = conjecture_scan(10_000, &s).unwrap();
        assert!(r.passed());
        assert_eq!(r.checked, 4998);
        let mut bad = s.clone();
        bad.inject_fault(3);
        let r = conjecture_scan(100, &bad).unwrap();
        assert_eq!(r.violations.first(), Some(&6));
    }

    #[test]
    fn scan_is_worker_independent() {
        let s = sieve(200_000);
        let run = |n| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .unwrap()
                .install(|| conjecture_scan(200_000, &s).unwrap())
        };
        let (a, b) = (run(1), run(4));
        assert_eq!(a.violations, b.violations);
        assert_eq!(a.hardest, b.hardest);
    }

    #[test]
    fn audit_small() {
        let s = sieve(1000);
        let a = bound_audit(3, None, Some(&s)).unwrap();
        let r26 = a.records.iter().find(|r| r.e == 26).unwrap();
        assert_eq!(r26.empirical_pairs, 2);
        assert_eq!(r26.c_bound, BigRational::new((-37).into(), 10.into()));
        assert_eq!(a.bridge_holds(), Some(true));
        assert!(a.claim_holds());
        let a = bound_audit(2, None, Some(&s)).unwrap();
        assert_eq!(a.records.len(), 8);
        assert_eq!(a.bridge_holds(), Some(true));
    }

    #[test]
    fn audit_at_2810() {
        let a = bound_audit(16, Some(2810), None).unwrap();
        let r = &a.records[0];
        assert_eq!(r.empirical_pairs, unit_pair_count(2810, 16).unwrap());
        assert!(r.c_bound > BigRational::from_integer(1.into()));
    }
}
