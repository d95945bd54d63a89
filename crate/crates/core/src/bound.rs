//! Exact-rational evaluation of the density `prod_{i=2}^x (1 - 2/p_i)` and of
//! the lower-bound expression
//!
//! ```text
//! C(e, x) = 1/2 * density(x) * (e / 2) - 1 - 2x + 2
//! ```
//!
//! whose canonical evaluation point is `e = p_x^2 + 1`. Every comparison is
//! made on exact rationals; decimal renderings are for display only.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::primal::PrimeBasis;
use crate::sums::min_count_bound;
use crate::{Error, Result};

fn ratio(n: impl Into<BigInt>, d: impl Into<BigInt>) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn require_odd_primes(x: usize) -> Result<()> {
    if x < 2 {
        return Err(Error::IndexTooSmall { min: 2, got: x });
    }
    Ok(())
}

/// `prod_{i=2}^{x} (p_i - 2) / p_i`, reduced.
pub fn density(x: usize) -> Result<BigRational> {
    require_odd_primes(x)?;
    let basis = PrimeBasis::new(x)?;
    Ok(basis.primes()[1..]
        .iter()
        .fold(BigRational::one(), |acc, &p| acc * ratio(p - 2, p)))
}

/// `prod_{i=2}^{x} p_i`, i.e. `L(p_x) / 2`: the number of even places.
pub fn places(x: usize) -> Result<BigUint> {
    let basis = PrimeBasis::new(x)?;
    Ok(basis.primorial() / 2u32)
}

/// `density(x)` recomputed as `min-count bound / places`.
pub fn density_from_counts(x: usize) -> Result<BigRational> {
    require_odd_primes(x)?;
    let basis = PrimeBasis::new(x)?;
    Ok(BigRational::new(
        BigInt::from(min_count_bound(&basis)),
        BigInt::from(places(x)?),
    ))
}

/// One evaluation of `C(e, x)` with each term kept separately.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub x: usize,
    pub prime: u64,
    pub e: u64,
    pub density: BigRational,
    /// `1/2`, for ordered pairs being counted twice.
    pub half_count: BigRational,
    /// `e / 2`; equals `(p_x^2 + 1) / 2` at the canonical point.
    pub places: BigRational,
    /// `-1`, the possible sum with summand 1.
    pub summand_one: BigInt,
    /// `-2x`, the maximum variance.
    pub variance: BigInt,
    /// `+2`, because only even numbers are considered.
    pub evenness: BigInt,
    pub c: BigRational,
}

impl BoundReport {
    pub fn main_term(&self) -> BigRational {
        &self.half_count * &self.density * &self.places
    }

    pub fn crossover(&self) -> bool {
        self.c > BigRational::one()
    }

    pub fn c_decimal(&self) -> String {
        render_decimal(&self.c, 6)
    }
}

/// `C(e, x)` for even `e`.
pub fn c_of(e: u64, x: usize) -> Result<BoundReport> {
    if e % 2 == 1 {
        return Err(Error::OddTarget(e));
    }
    let d = density(x)?;
    let prime = PrimeBasis::new(x)?.largest();
    let half_count = ratio(1, 2);
    let places = ratio(e, 2u32);
    let summand_one = BigInt::from(-1);
    let variance = BigInt::from(-2 * x as i64);
    let evenness = BigInt::from(2);
    let c = &half_count * &d * &places
        + BigRational::from_integer(&summand_one + &variance + &evenness);
    Ok(BoundReport {
        x,
        prime,
        e,
        density: d,
        half_count,
        places,
        summand_one,
        variance,
        evenness,
        c,
    })
}

/// `C` at the canonical even point `p_x^2 + 1`, whose place count is
/// `(p_x^2 + 1) / 2`.
pub fn c_canonical(x: usize) -> Result<BoundReport> {
    let p = PrimeBasis::new(x)?.largest();
    c_of(p * p + 1, x)
}

#[derive(Debug, Clone)]
pub struct CrossoverReport {
    pub x_max: usize,
    pub rows: Vec<BoundReport>,
}

impl CrossoverReport {
    /// First row with `C > 1`.
    pub fn first(&self) -> Option<&BoundReport> {
        self.rows.iter().find(|r| r.crossover())
    }

    /// True iff `C > 1` holds at every `x` from the first crossover on.
    pub fn persists(&self) -> bool {
        match self.rows.iter().position(BoundReport::crossover) {
            Some(i) => self.rows[i..].iter().all(BoundReport::crossover),
            None => true,
        }
    }

    /// Smallest `x` from which `C` is strictly increasing through `x_max`.
    pub fn monotone_suffix_start(&self) -> usize {
        let mut start = self.rows.len() - 1;
        while start > 0 && self.rows[start - 1].c < self.rows[start].c {
            start -= 1;
        }
        self.rows[start].x
    }

    /// `x` values at which `C` drops relative to the previous index.
    pub fn descents(&self) -> Vec<usize> {
        self.rows
            .windows(2)
            .filter(|w| w[1].c <= w[0].c)
            .map(|w| w[1].x)
            .collect()
    }
}

pub fn crossover_scan(x_max: usize) -> Result<CrossoverReport> {
    require_odd_primes(x_max)?;
    let rows = (2..=x_max).map(c_canonical).collect::<Result<_>>()?;
    Ok(CrossoverReport { x_max, rows })
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub x: usize,
    /// `(e, C(e, x))` for even `e` in `(p_x^2, p_{x+1}^2)`.
    pub rows: Vec<(u64, BigRational)>,
}

impl SweepReport {
    /// Common difference between successive rows, if they have one.
    pub fn step(&self) -> Option<BigRational> {
        let diffs: Vec<BigRational> = self.rows.windows(2).map(|w| &w[1].1 - &w[0].1).collect();
        match diffs.first() {
            Some(d) if diffs.iter().all(|v| v == d) => Some(d.clone()),
            _ => None,
        }
    }

    pub fn strictly_increasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].1 > w[0].1)
    }
}

pub fn c_sweep(x: usize) -> Result<SweepReport> {
    require_odd_primes(x)?;
    let next = PrimeBasis::new(x + 1)?;
    let p = next.primes()[x - 1];
    let q = next.largest();
    let rows = (p * p + 1..q * q)
        .filter(|e| e % 2 == 0)
        .map(|e| c_of(e, x).map(|r| (e, r.c)))
        .collect::<Result<_>>()?;
    Ok(SweepReport { x, rows })
}

/// Renders `v` with `sig` significant digits, rounding half away from zero.
/// Uses fixed notation for magnitudes in `[1e-4, 1e6)`, scientific otherwise.
pub fn render_decimal(v: &BigRational, sig: usize) -> String {
    assert!(sig >= 1);
    if v.is_zero() {
        return "0".into();
    }
    let negative = v.is_negative();
    let a = v.abs();
    let ten = BigInt::from(10);

    // exponent k with 10^k <= a < 10^(k+1)
    let mut k: i64 = a.numer().to_string().len() as i64 - a.denom().to_string().len() as i64;
    let pow = |e: i64| -> BigRational {
        if e >= 0 {
            BigRational::from_integer(ten.pow(e as u32))
        } else {
            BigRational::new(BigInt::one(), ten.pow((-e) as u32))
        }
    };
    while a >= pow(k + 1) {
        k += 1;
    }
    while a < pow(k) {
        k -= 1;
    }

    let shift = sig as i64 - 1 - k;
    let scaled = &a * pow(shift);
    let (q, r) = scaled.numer().div_rem(scaled.denom());
    let mut digits = if BigInt::from(2) * r >= *scaled.denom() {
        q + 1
    } else {
        q
    };
    if digits >= ten.pow(sig as u32) {
        digits /= 10;
        k += 1;
    }
    let digits = format!("{:0>width$}", digits.to_string(), width = sig);

    let body = if (-4..6).contains(&k) {
        if k >= 0 {
            let int_len = (k + 1) as usize;
            if int_len >= digits.len() {
                format!("{}{}", digits, "0".repeat(int_len - digits.len()))
            } else {
                format!("{}.{}", &digits[..int_len], &digits[int_len..])
            }
        } else {
            format!("0.{}{}", "0".repeat((-k - 1) as usize), digits)
        }
    } else if sig == 1 {
        format!("{digits}e{k:+03}")
    } else {
        format!("{}.{}e{:+03}", &digits[..1], &digits[1..], k)
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

/// `num/den` with the sign on the numerator.
pub fn fraction_string(v: &BigRational) -> String {
    format!("{}/{}", v.numer(), v.denom())
}
