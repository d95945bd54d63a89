//! Primes, primorials and the fantom systems `F(p_x)`: the reduced residue
//! system of the primorial `L(p_x)`, built either by sieving `[1, L]`
//! directly or by lining up `p_x` copies of `F(p_{x-1})` and removing the
//! multiples of `p_x`.

use bitvec::prelude::*;
use num_bigint::BigUint;
use num_traits::One;

use crate::{Error, Limits, Result};

/// The first `x` primes ascending. `x` counts from `p_1 = 2`.
pub fn first_primes(x: usize) -> Result<Vec<u64>> {
    if x == 0 {
        return Err(Error::IndexTooSmall { min: 1, got: 0 });
    }
    // Rosser's bound p_n < n(ln n + ln ln n) holds for n >= 6.
    let n = x as f64;
    let mut bound = if x < 6 {
        15
    } else {
        (n * (n.ln() + n.ln().ln())).ceil() as usize + 1
    };
    loop {
        let primes = small_primes_upto(bound);
        if primes.len() >= x {
            return Ok(primes.into_iter().take(x).collect());
        }
        bound *= 2;
    }
}

/// Plain Eratosthenes for the small ranges used by index lookups.
pub fn small_primes_upto(limit: usize) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let mut composite = bitvec![0; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= limit {
            composite.set(j, true);
            j += i;
        }
    }
    out
}

/// `L(p_x)`, the product of the first `x` primes.
pub fn primorial(x: usize) -> Result<BigUint> {
    Ok(first_primes(x)?
        .into_iter()
        .fold(BigUint::one(), |acc, p| acc * p))
}

/// `A(p_x)`, the number of units below `L(p_x)`: the product of `p_i - 1`.
pub fn unit_count(x: usize) -> Result<BigUint> {
    Ok(first_primes(x)?
        .into_iter()
        .fold(BigUint::one(), |acc, p| acc * (p - 1)))
}

/// The first `x` primes together with their primorial and unit count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeBasis {
    x: usize,
    primes: Vec<u64>,
    primorial: BigUint,
    unit_count: BigUint,
}

impl PrimeBasis {
    pub fn new(x: usize) -> Result<Self> {
        let primes = first_primes(x)?;
        let primorial = primes.iter().fold(BigUint::one(), |acc, &p| acc * p);
        let unit_count = primes.iter().fold(BigUint::one(), |acc, &p| acc * (p - 1));
        Ok(PrimeBasis {
            x,
            primes,
            primorial,
            unit_count,
        })
    }

    pub fn x(&self) -> usize {
        self.x
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// `p_x`, the largest prime of the basis.
    pub fn largest(&self) -> u64 {
        *self.primes.last().expect("basis is never empty")
    }

    pub fn primorial(&self) -> &BigUint {
        &self.primorial
    }

    pub fn unit_count(&self) -> &BigUint {
        &self.unit_count
    }

    /// True iff `v` shares no prime factor with `L(p_x)`.
    pub fn is_unit(&self, v: u64) -> bool {
        self.primes.iter().all(|&p| !v.is_multiple_of(p))
    }

    /// The primorial as a machine integer, provided it passes the guard.
    pub fn materialized_len(&self, limits: &Limits) -> Result<u64> {
        limits.check_l(self.x, &self.primorial)
    }
}

/// `F(p_x)`: the units of `[1, L]` with a constant-time membership bitmap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FantomSystem {
    basis: PrimeBasis,
    modulus: u64,
    residues: Vec<u64>,
    // bit v-1 set iff v is a unit
    indicator: BitVec<u64, Lsb0>,
}

impl FantomSystem {
    fn from_indicator(basis: PrimeBasis, modulus: u64, indicator: BitVec<u64, Lsb0>) -> Self {
        let residues = indicator.iter_ones().map(|i| i as u64 + 1).collect();
        FantomSystem {
            basis,
            modulus,
            residues,
            indicator,
        }
    }

    fn from_residues(basis: PrimeBasis, modulus: u64, residues: Vec<u64>) -> Self {
        let mut indicator = bitvec![u64, Lsb0; 0; modulus as usize];
        for &r in &residues {
            indicator.set(r as usize - 1, true);
        }
        FantomSystem {
            basis,
            modulus,
            residues,
            indicator,
        }
    }

    pub fn basis(&self) -> &PrimeBasis {
        &self.basis
    }

    /// `L(p_x)` as a machine integer.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Ascending unit residues in `[1, L]`.
    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    pub fn len(&self) -> usize {
        self.residues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }

    /// Membership for `v` in `[1, L]`; anything outside is reduced into
    /// `(0, L]` first.
    pub fn contains(&self, v: u64) -> bool {
        let r = reduce_into(v, self.modulus);
        self.indicator[r as usize - 1]
    }

    pub fn indicator(&self) -> &BitSlice<u64, Lsb0> {
        &self.indicator
    }

    /// Drops the largest residue; used only to synthesize violating fixtures.
    #[doc(hidden)]
    pub fn inject_fault(&mut self) {
        if let Some(r) = self.residues.pop() {
            self.indicator.set(r as usize - 1, false);
        }
    }

    /// Residues violating `r in F <=> L - r in F`, reported as `(r, L - r)`.
    pub fn symmetry_violations(&self) -> Vec<(u64, u64)> {
        let l = self.modulus;
        self.residues
            .iter()
            .filter_map(|&r| {
                let mirror = l - r;
                (mirror == 0 || !self.indicator[mirror as usize - 1]).then_some((r, mirror))
            })
            .collect()
    }
}

/// Representative of `v mod l` in `(0, l]`.
pub fn reduce_into(v: u64, l: u64) -> u64 {
    match v % l {
        0 => l,
        r => r,
    }
}

/// Builds `F(p_x)` by crossing out every multiple of `p_1..p_x` in `[1, L]`.
pub fn fantom_direct(x: usize, limits: &Limits) -> Result<FantomSystem> {
    let basis = PrimeBasis::new(x)?;
    let l = basis.materialized_len(limits)?;
    let mut indicator = bitvec![u64, Lsb0; 1; l as usize];
    for &p in basis.primes() {
        let mut m = p;
        while m <= l {
            indicator.set(m as usize - 1, false);
            m += p;
        }
    }
    Ok(FantomSystem::from_indicator(basis, l, indicator))
}

/// Result of one presystem step `F(p_{x-1}) -> F(p_x)`.
#[derive(Debug, Clone)]
pub struct RecursiveConstruction {
    /// `PF(p_x)`: all `a * L(p_{x-1}) + r` with `0 <= a < p_x`, ascending.
    pub presystem: Vec<u64>,
    /// `K = { p_x * r : r in F(p_{x-1}) }`, ascending.
    pub canceling: Vec<u64>,
    pub system: FantomSystem,
}

/// Lines up `p_x` translated copies of `F(p_{x-1})` and removes the
/// products of `p_x` with the previous units. For `x = 1` the presystem is
/// `{1}` and nothing is canceled.
pub fn fantom_recursive(x: usize, limits: &Limits) -> Result<RecursiveConstruction> {
    let basis = PrimeBasis::new(x)?;
    let l = basis.materialized_len(limits)?;

    let mut units = vec![1u64];
    let mut presystem = vec![1u64];
    let mut canceling = Vec::new();
    let mut prev_len = 2u64;
    for &p in &basis.primes()[1..] {
        presystem = (0..p)
            .flat_map(|a| units.iter().map(move |&r| a * prev_len + r))
            .collect();
        canceling = units.iter().map(|&r| p * r).collect();
        canceling.sort_unstable();
        units = sorted_difference(&presystem, &canceling);
        prev_len *= p;
    }
    debug_assert_eq!(prev_len, l);
    Ok(RecursiveConstruction {
        presystem,
        canceling,
        system: FantomSystem::from_residues(basis, l, units),
    })
}

fn sorted_difference(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = Vec::with_capacity(a.len().saturating_sub(b.len()));
    let mut j = 0;
    for &v in a {
        while j < b.len() && b[j] < v {
            j += 1;
        }
        if j < b.len() && b[j] == v {
            continue;
        }
        out.push(v);
    }
    out
}

/// One entry `m * r = a * L + r'` of a product decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProductEntry {
    pub input: u64,
    pub raw: u128,
    pub quotient: u128,
    pub residue: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductDecomposition {
    pub factor: u64,
    pub modulus: u64,
    /// One entry per unit, in ascending order of the input residue.
    pub entries: Vec<ProductEntry>,
}

impl ProductDecomposition {
    pub fn residue_parts(&self) -> Vec<u64> {
        self.entries.iter().map(|e| e.residue).collect()
    }

    /// True iff the residue parts are exactly a rearrangement of `system`.
    pub fn is_permutation_of(&self, system: &FantomSystem) -> bool {
        if self.entries.len() != system.len() {
            return false;
        }
        let mut seen = bitvec![0; system.modulus() as usize];
        for e in &self.entries {
            let idx = e.residue as usize - 1;
            if !system.contains(e.residue) || seen[idx] {
                return false;
            }
            seen.set(idx, true);
        }
        true
    }
}

/// Multiplies every unit of `system` by the unit `m` and splits each product
/// into quotient and residue part.
pub fn multiply_residues(system: &FantomSystem, m: u64) -> Result<ProductDecomposition> {
    let l = system.modulus();
    if m == 0 || m > l || !system.contains(m) {
        return Err(Error::NotUnit {
            value: m,
            modulus: l,
        });
    }
    let entries = system
        .residues()
        .iter()
        .map(|&r| {
            let raw = m as u128 * r as u128;
            ProductEntry {
                input: r,
                raw,
                quotient: raw / l as u128,
                residue: (raw % l as u128) as u64,
            }
        })
        .collect();
    Ok(ProductDecomposition {
        factor: m,
        modulus: l,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn limits() -> Limits {
        Limits::default()
    }

    #[test]
    fn first_primes_small() {
        assert_eq!(first_primes(1).unwrap(), vec![2]);
        assert_eq!(first_primes(3).unwrap(), vec![2, 3, 5]);
        assert_eq!(*first_primes(16).unwrap().last().unwrap(), 53);
        assert!(matches!(first_primes(0), Err(Error::IndexTooSmall { .. })));
    }

    #[test]
    fn first_primes_matches_trial_division() {
        let by_trial: Vec<u64> = (2u64..)
            .filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
            .take(200)
            .collect();
        assert_eq!(first_primes(200).unwrap(), by_trial);
    }

    #[test]
    fn primorial_values() {
        assert_eq!(primorial(2).unwrap(), BigUint::from(6u32));
        assert_eq!(primorial(3).unwrap(), BigUint::from(30u32));
        assert_eq!(primorial(16).unwrap().to_string(), "32589158477190044730");
        assert!(primorial(16).unwrap() > BigUint::from(u64::MAX));
        assert!(primorial(0).is_err());
    }

    #[test]
    fn unit_count_values() {
        assert_eq!(unit_count(2).unwrap(), BigUint::from(2u32));
        assert_eq!(unit_count(3).unwrap(), BigUint::from(8u32));
        assert_eq!(unit_count(10).unwrap(), BigUint::from(1_021_870_080u64));
        assert_eq!(
            unit_count(16).unwrap(),
            BigUint::from(4_434_961_926_979_584_000u64)
        );
        assert!(unit_count(0).is_err());
    }

    #[test]
    fn direct_listings() {
        assert_eq!(fantom_direct(1, &limits()).unwrap().residues(), &[1]);
        assert_eq!(fantom_direct(2, &limits()).unwrap().residues(), &[1, 5]);
        assert_eq!(
            fantom_direct(3, &limits()).unwrap().residues(),
            &[1, 7, 11, 13, 17, 19, 23, 29]
        );
    }

    #[test]
    fn guard_refuses_and_names_required_l() {
        let tight = Limits {
            max_l: 100,
            ..Limits::default()
        };
        let err = fantom_direct(4, &tight).unwrap_err();
        match err {
            Error::GuardExceeded {
                required, limit, ..
            } => {
                assert_eq!(required, "210");
                assert_eq!(limit, 100);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn recursive_presystems() {
        let c = fantom_recursive(2, &limits()).unwrap();
        assert_eq!(c.presystem, vec![1, 3, 5]);
        assert_eq!(c.canceling, vec![3]);
        assert_eq!(c.system.residues(), &[1, 5]);

        let c = fantom_recursive(3, &limits()).unwrap();
        assert_eq!(c.presystem, vec![1, 5, 7, 11, 13, 17, 19, 23, 25, 29]);
        assert_eq!(c.canceling, vec![5, 25]);
        assert_eq!(c.system.residues(), &[1, 7, 11, 13, 17, 19, 23, 29]);

        let c = fantom_recursive(1, &limits()).unwrap();
        assert_eq!(c.system.residues(), &[1]);
        assert!(c.canceling.is_empty());
    }

    #[test]
    fn recursive_equals_direct_through_default_guard() {
        for x in 1..=8 {
            let direct = fantom_direct(x, &limits()).unwrap();
            let rec = fantom_recursive(x, &limits()).unwrap();
            assert_eq!(direct, rec.system, "x = {x}");
            let prev = if x > 1 {
                unit_count(x - 1).unwrap()
            } else {
                BigUint::from(0u32)
            };
            assert_eq!(BigUint::from(rec.canceling.len()), prev);
            assert_eq!(
                sorted_difference(&rec.presystem, rec.system.residues()),
                rec.canceling
            );
        }
    }

    #[test]
    fn multiply_by_seven() {
        let f = fantom_direct(3, &limits()).unwrap();
        let d = multiply_residues(&f, 7).unwrap();
        assert_eq!(d.residue_parts(), vec![7, 19, 17, 1, 29, 13, 11, 23]);
        assert!(d.is_permutation_of(&f));
        for e in &d.entries {
            assert_eq!(e.raw, e.quotient * 30 + e.residue as u128);
        }
    }

    #[test]
    fn multiply_identity_and_five() {
        let f = fantom_direct(3, &limits()).unwrap();
        let d = multiply_residues(&f, 1).unwrap();
        assert!(d
            .entries
            .iter()
            .all(|e| e.quotient == 0 && e.residue == e.input));

        let f = fantom_direct(2, &limits()).unwrap();
        let d = multiply_residues(&f, 5).unwrap();
        let raw: Vec<u128> = d.entries.iter().map(|e| e.raw).collect();
        assert_eq!(raw, vec![5, 25]);
        let split: Vec<(u128, u64)> = d.entries.iter().map(|e| (e.quotient, e.residue)).collect();
        assert_eq!(split, vec![(0, 5), (4, 1)]);
    }

    #[test]
    fn multiply_rejects_non_units() {
        let f = fantom_direct(3, &limits()).unwrap();
        for m in [0, 2, 5, 15, 30, 31] {
            assert!(
                matches!(multiply_residues(&f, m), Err(Error::NotUnit { .. })),
                "m = {m}"
            );
        }
    }

    #[test]
    fn symmetry_holds() {
        for x in 1..=6 {
            assert!(fantom_direct(x, &limits())
                .unwrap()
                .symmetry_violations()
                .is_empty());
        }
    }
}
