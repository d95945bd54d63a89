//! Window counts over superposed "combs" of prime multiples.
//!
//! A comb is the progression of multiples of one prime. Sliding a window of
//! length `W` over `[1, L]` and counting teeth (or units, or unit pairs for a
//! fixed even target) at every offset gives a spread `max - min`. The
//! single-comb spread is a theorem and is checked as one; the superposed
//! bound `x` and the sum-comb bound `2x` are audited, never assumed.

use rayon::prelude::*;

use crate::primal::{fantom_direct, reduce_into, FantomSystem, PrimeBasis};
use crate::{Error, Limits, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ScanMode {
    /// Windows wrap around the period.
    Cyclic,
    /// Only windows lying entirely inside `[1, period]`.
    Linear,
}

impl ScanMode {
    pub fn label(self) -> &'static str {
        match self {
            ScanMode::Cyclic => "cyclic",
            ScanMode::Linear => "linear",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombMode {
    SingleComb { prime: u64 },
    Canceled,
    Units,
    SumComb { target: u64 },
}

impl CombMode {
    pub fn label(&self) -> String {
        match self {
            CombMode::SingleComb { prime } => format!("single-comb p={prime}"),
            CombMode::Canceled => "canceled".into(),
            CombMode::Units => "units".into(),
            CombMode::SumComb { target } => format!("sum-comb e={target}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowSpreadReport {
    pub x: Option<usize>,
    pub window: u64,
    pub period: u64,
    pub mode: CombMode,
    pub scan: ScanMode,
    pub offsets: u64,
    pub min_count: u64,
    pub max_count: u64,
    pub claim_bound: u64,
}

impl WindowSpreadReport {
    pub fn spread(&self) -> u64 {
        self.max_count - self.min_count
    }

    pub fn claim_holds(&self) -> bool {
        self.spread() <= self.claim_bound
    }
}

/// `(offsets, min, max)` of the window sums of `marks` over all offsets.
fn window_extremes(marks: &[u8], window: usize, scan: ScanMode) -> (u64, u64, u64) {
    let n = marks.len();
    debug_assert!(window >= 1 && window <= n);
    let mut sum: u64 = marks[..window].iter().map(|&m| m as u64).sum();
    let (mut lo, mut hi) = (sum, sum);
    let offsets = match scan {
        ScanMode::Cyclic => n,
        ScanMode::Linear => n - window + 1,
    };
    for s in 1..offsets {
        sum = sum + marks[(s + window - 1) % n] as u64 - marks[s - 1] as u64;
        lo = lo.min(sum);
        hi = hi.max(sum);
    }
    (offsets as u64, lo, hi)
}

fn check_window(window: u64, period: u64) -> Result<()> {
    if window == 0 || window > period {
        return Err(Error::InvalidWindow { window, period });
    }
    Ok(())
}

/// Multiples of `prime` in every window of length `window` over `[1, period]`.
pub fn tooth_spread(
    prime: u64,
    window: u64,
    period: u64,
    scan: ScanMode,
) -> Result<WindowSpreadReport> {
    check_window(window, period)?;
    if prime == 0 || prime > period {
        return Err(Error::InvalidWindow {
            window: prime,
            period,
        });
    }
    let marks: Vec<u8> = (1..=period).map(|v| (v % prime == 0) as u8).collect();
    let (offsets, min_count, max_count) = window_extremes(&marks, window as usize, scan);
    Ok(WindowSpreadReport {
        x: None,
        window,
        period,
        mode: CombMode::SingleComb { prime },
        scan,
        offsets,
        min_count,
        max_count,
        claim_bound: 1,
    })
}

/// Whether a single-comb report obeys the exact rule: spread at most 1, and
/// zero exactly when the prime divides the window (for cyclic scans of a
/// period the prime divides).
pub fn single_comb_rule_holds(r: &WindowSpreadReport) -> bool {
    let CombMode::SingleComb { prime } = r.mode else {
        return false;
    };
    if r.spread() > 1 {
        return false;
    }
    if r.scan == ScanMode::Cyclic && r.period.is_multiple_of(prime) {
        return (r.spread() == 0) == r.window.is_multiple_of(prime);
    }
    true
}

fn unit_marks(system: &FantomSystem) -> Vec<u8> {
    system.indicator().iter().map(|b| *b as u8).collect()
}

fn superposed_from(
    system: &FantomSystem,
    units: &[u8],
    window: u64,
    mode: CombMode,
    scan: ScanMode,
) -> Result<WindowSpreadReport> {
    let period = system.modulus();
    check_window(window, period)?;
    let flipped;
    let marks = match mode {
        CombMode::Units => units,
        CombMode::Canceled => {
            flipped = units.iter().map(|&m| 1 - m).collect::<Vec<_>>();
            &flipped[..]
        }
        _ => unreachable!("superposed scans count units or canceled numbers"),
    };
    let (offsets, min_count, max_count) = window_extremes(marks, window as usize, scan);
    let x = system.basis().x();
    Ok(WindowSpreadReport {
        x: Some(x),
        window,
        period,
        mode,
        scan,
        offsets,
        min_count,
        max_count,
        claim_bound: x as u64,
    })
}

/// Canceled (or unit) counts in every window of length `window` over one
/// period of `F(p_x)`. The claim bound is `x`.
pub fn superposed_spread(
    x: usize,
    window: u64,
    mode: CombMode,
    scan: ScanMode,
    limits: &Limits,
) -> Result<WindowSpreadReport> {
    let system = fantom_direct(x, limits)?;
    let units = unit_marks(&system);
    superposed_from(&system, &units, window, mode, scan)
}

fn sum_marks(system: &FantomSystem, target: u64) -> Vec<u8> {
    let l = system.modulus();
    let e = target % l;
    (1..=l)
        .map(|a| {
            let partner = reduce_into(e + l - a % l, l);
            (system.contains(a) && system.contains(partner)) as u8
        })
        .collect()
}

fn sum_comb_from(
    system: &FantomSystem,
    target: u64,
    window: u64,
    scan: ScanMode,
) -> Result<WindowSpreadReport> {
    let marks = sum_marks(system, target);
    sum_comb_with_marks(system, &marks, target, window, scan)
}

fn sum_comb_with_marks(
    system: &FantomSystem,
    marks: &[u8],
    target: u64,
    window: u64,
    scan: ScanMode,
) -> Result<WindowSpreadReport> {
    let period = system.modulus();
    check_window(window, period)?;
    let (offsets, min_count, max_count) = window_extremes(marks, window as usize, scan);
    let x = system.basis().x();
    Ok(WindowSpreadReport {
        x: Some(x),
        window,
        period,
        mode: CombMode::SumComb { target },
        scan,
        offsets,
        min_count,
        max_count,
        claim_bound: 2 * x as u64,
    })
}

/// Counts `a` in each window with both `a` and `e - a` (reduced into
/// `(0, L]`) units. The claim bound is `2x`.
pub fn sum_comb_spread(
    x: usize,
    target: u64,
    window: u64,
    scan: ScanMode,
    limits: &Limits,
) -> Result<WindowSpreadReport> {
    if target % 2 == 1 {
        return Err(Error::OddTarget(target));
    }
    if target == 0 {
        return Err(Error::TargetTooSmall { min: 2, got: 0 });
    }
    let system = fantom_direct(x, limits)?;
    sum_comb_from(&system, target, window, scan)
}

/// Window lengths used for the sum-comb audit: each `p_i`, `L(p_{x-1})`,
/// `p_x^2`, the stringent window length `p_{x+1}^2 - p_x^2`, and `L`, all
/// clipped to `[1, L]`.
pub fn audit_windows(x: usize, limits: &Limits) -> Result<Vec<u64>> {
    let next = PrimeBasis::new(x + 1)?;
    let l = next.primes()[..x].iter().product::<u64>();
    limits.check_l(x, &num_bigint::BigUint::from(l))?;
    let px = next.primes()[x - 1];
    let pn = next.largest();
    let mut w: Vec<u64> = next.primes()[..x].to_vec();
    w.push(l / px);
    w.push(px * px);
    w.push(pn * pn - px * px);
    w.push(l);
    w.retain(|&v| v >= 1 && v <= l);
    w.sort_unstable();
    w.dedup();
    Ok(w)
}

/// Everything the comb audit produces for one `x`.
#[derive(Debug, Clone)]
pub struct CombBattery {
    pub x: usize,
    pub period: u64,
    /// One report per prime, window and scan mode.
    pub single: Vec<WindowSpreadReport>,
    /// Canceled and unit counts for every window length in `[1, L]`.
    pub superposed: Vec<WindowSpreadReport>,
    /// Every even target in `[2, L]` against `audit_windows`.
    pub sum: Vec<WindowSpreadReport>,
}

impl CombBattery {
    pub fn single_rule_violations(&self) -> Vec<&WindowSpreadReport> {
        self.single
            .iter()
            .filter(|r| !single_comb_rule_holds(r))
            .collect()
    }
}

/// Exhaustive comb scans for one `x`. `windows` overrides the window lengths
/// of every family when given.
pub fn comb_battery(
    x: usize,
    scans: &[ScanMode],
    windows: Option<&[u64]>,
    limits: &Limits,
) -> Result<CombBattery> {
    let system = fantom_direct(x, limits)?;
    let l = system.modulus();
    let all: Vec<u64> = match windows {
        Some(w) => w.to_vec(),
        None => (1..=l).collect(),
    };
    for &w in &all {
        check_window(w, l)?;
    }
    let sum_windows = match windows {
        Some(w) => w.to_vec(),
        None => audit_windows(x, limits)?,
    };
    let units = unit_marks(&system);

    let single = system
        .basis()
        .primes()
        .iter()
        .flat_map(|&p| {
            all.iter()
                .flat_map(move |&w| scans.iter().map(move |&s| (p, w, s)))
        })
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(p, w, s)| tooth_spread(p, w, l, s))
        .collect::<Result<Vec<_>>>()?;

    let superposed = [CombMode::Canceled, CombMode::Units]
        .iter()
        .flat_map(|&m| {
            all.iter()
                .flat_map(move |&w| scans.iter().map(move |&s| (m, w, s)))
        })
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(m, w, s)| superposed_from(&system, &units, w, m, s))
        .collect::<Result<Vec<_>>>()?;

    let sum = (1..=l / 2)
        .into_par_iter()
        .map(|k| {
            let e = 2 * k;
            let marks = sum_marks(&system, e);
            sum_windows
                .iter()
                .flat_map(|&w| scans.iter().map(move |&s| (w, s)))
                .map(|(w, s)| sum_comb_with_marks(&system, &marks, e, w, s))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    Ok(CombBattery {
        x,
        period: l,
        single,
        superposed,
        sum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    // Brute force: count directly in each window, no sliding sums.
    fn brute(marks: impl Fn(u64) -> bool, window: u64, period: u64, scan: ScanMode) -> (u64, u64) {
        let offsets = match scan {
            ScanMode::Cyclic => period,
            ScanMode::Linear => period - window + 1,
        };
        let counts: Vec<u64> = (0..offsets)
            .map(|s| (0..window).filter(|i| marks((s + i) % period + 1)).count() as u64)
            .collect();
        (*counts.iter().min().unwrap(), *counts.iter().max().unwrap())
    }

    #[test]
    fn tooth_examples() {
        let r = tooth_spread(3, 7, 30, ScanMode::Cyclic).unwrap();
        assert_eq!((r.min_count, r.max_count, r.spread()), (2, 3, 1));
        assert_eq!(
            tooth_spread(3, 6, 30, ScanMode::Cyclic).unwrap().spread(),
            0
        );
        assert_eq!(
            tooth_spread(5, 5, 30, ScanMode::Cyclic).unwrap().spread(),
            0
        );
        assert!(tooth_spread(3, 0, 30, ScanMode::Cyclic).is_err());
        assert!(tooth_spread(3, 31, 30, ScanMode::Cyclic).is_err());
    }

    #[test]
    fn tooth_rule_exhaustive_mod_210() {
        for p in [2, 3, 5, 7] {
            for w in 1..=210 {
                for scan in [ScanMode::Cyclic, ScanMode::Linear] {
                    let r = tooth_spread(p, w, 210, scan).unwrap();
                    assert!(single_comb_rule_holds(&r), "p={p} w={w} {scan:?}");
                }
            }
        }
    }

    #[test]
    fn superposed_matches_brute_force() {
        let l = Limits::default();
        let f = fantom_direct(3, &l).unwrap();
        for w in 1..=30 {
            for scan in [ScanMode::Cyclic, ScanMode::Linear] {
                let r = superposed_spread(3, w, CombMode::Units, scan, &l).unwrap();
                assert_eq!(
                    (r.min_count, r.max_count),
                    brute(|v| f.contains(v), w, 30, scan)
                );
                let r = superposed_spread(3, w, CombMode::Canceled, scan, &l).unwrap();
                assert_eq!(
                    (r.min_count, r.max_count),
                    brute(|v| !f.contains(v), w, 30, scan)
                );
            }
        }
    }

    #[test]
    fn superposed_small_examples() {
        let l = Limits::default();
        let r = superposed_spread(2, 5, CombMode::Canceled, ScanMode::Cyclic, &l).unwrap();
        // canceled in [1,6] are 2,3,4,6; every 5-window misses exactly one number
        assert_eq!((r.min_count, r.max_count), (3, 4));
        assert!(r.claim_holds());
        let r = superposed_spread(1, 2, CombMode::Canceled, ScanMode::Cyclic, &l).unwrap();
        assert_eq!(r.spread(), 0);
        let r = superposed_spread(3, 15, CombMode::Units, ScanMode::Cyclic, &l).unwrap();
        assert_eq!(r.offsets, 30);
        assert_eq!(r.claim_bound, 3);
    }

    #[test]
    fn sum_comb_examples() {
        let l = Limits::default();
        let r = sum_comb_spread(2, 6, 6, ScanMode::Cyclic, &l).unwrap();
        assert_eq!((r.min_count, r.max_count), (2, 2));
        let r = sum_comb_spread(3, 30, 30, ScanMode::Cyclic, &l).unwrap();
        assert_eq!((r.spread(), r.max_count), (0, 8));
        let r = sum_comb_spread(3, 2, 10, ScanMode::Cyclic, &l).unwrap();
        assert_eq!(r.claim_bound, 6);
        let f = fantom_direct(3, &l).unwrap();
        let g = |a: u64| f.contains(a) && f.contains(reduce_into(2 + 30 - a, 30));
        assert_eq!(
            (r.min_count, r.max_count),
            brute(g, 10, 30, ScanMode::Cyclic)
        );
        assert!(matches!(
            sum_comb_spread(3, 7, 10, ScanMode::Cyclic, &l),
            Err(Error::OddTarget(7))
        ));
    }

    #[test]
    fn full_period_windows_are_flat() {
        let l = Limits::default();
        for x in 1..=4 {
            let period = fantom_direct(x, &l).unwrap().modulus();
            let r = superposed_spread(x, period, CombMode::Units, ScanMode::Cyclic, &l).unwrap();
            assert_eq!(r.spread(), 0);
            for e in (2..=period).step_by(2) {
                let r = sum_comb_spread(x, e, period, ScanMode::Cyclic, &l).unwrap();
                assert_eq!(r.spread(), 0);
            }
        }
    }

    #[test]
    fn battery_is_deterministic_across_pools() {
        let l = Limits::default();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| {
                    comb_battery(3, &[ScanMode::Cyclic, ScanMode::Linear], None, &l).unwrap()
                })
        };
        let (a, b) = (run(1), run(4));
        assert_eq!(a.single, b.single);
        assert_eq!(a.superposed, b.superposed);
        assert_eq!(a.sum, b.sum);
        assert!(a.single_rule_violations().is_empty());
        assert_eq!(a.sum.len(), 15 * audit_windows(3, &l).unwrap().len() * 2);
    }

    #[test]
    fn audit_window_family() {
        assert_eq!(
            audit_windows(3, &Limits::default()).unwrap(),
            vec![2, 3, 5, 6, 24, 25, 30]
        );
    }
}
