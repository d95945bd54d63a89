//! Segmented, odd-only sieve of Eratosthenes.
//!
//! Bit `i` of the table stands for the odd number `2i + 1`. Segments are
//! word-aligned slices of the table and are sieved independently, so the
//! result is identical for any worker count.
//!
//! Cache file layout (little endian):
//!
//! ```text
//! magic   4 bytes  "GLPS"
//! version u32      1
//! limit   u64
//! words   u64 * ceil(ceil((limit + 1) / 2) / 64)
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use bitvec::prelude::*;
use rayon::prelude::*;

use crate::primal::small_primes_upto;
use crate::{Error, Limits, Result};

const MAGIC: &[u8; 4] = b"GLPS";
const VERSION: u32 = 1;
const SEGMENT_WORDS: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeSieve {
    limit: u64,
    odd_primes: BitVec<u64, Lsb0>,
}

fn odd_bits(limit: u64) -> usize {
    limit.div_ceil(2) as usize
}

impl PrimeSieve {
    /// All primes up to and including `limit`.
    pub fn new(limit: u64, limits: &Limits) -> Result<Self> {
        if limit < 2 {
            return Err(Error::TargetTooSmall { min: 2, got: limit });
        }
        limits.check_sieve(limit)?;
        let bits = odd_bits(limit);
        let base: Vec<u64> = small_primes_upto((limit as f64).sqrt() as usize + 1)
            .into_iter()
            .filter(|&p| p > 2 && p * p <= limit)
            .collect();

        let mut words = vec![!0u64; bits.div_ceil(64)];
        words
            .par_chunks_mut(SEGMENT_WORDS)
            .enumerate()
            .for_each(|(seg, chunk)| {
                let lo = (seg * SEGMENT_WORDS * 64) as u64;
                let hi = lo + chunk.len() as u64 * 64;
                let bv = chunk.view_bits_mut::<Lsb0>();
                for &p in &base {
                    // first odd multiple of p that is >= max(p^2, 2*lo + 1)
                    let start_val = (p * p).max({
                        let v = 2 * lo + 1;
                        let m = v.div_ceil(p) * p;
                        if m % 2 == 0 {
                            m + p
                        } else {
                            m
                        }
                    });
                    let mut i = (start_val - 1) / 2;
                    while i < hi {
                        bv.set((i - lo) as usize, false);
                        i += p;
                    }
                }
            });

        let mut odd_primes = BitVec::from_vec(words);
        odd_primes.truncate(bits);
        odd_primes.set(0, false);
        Ok(PrimeSieve { limit, odd_primes })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Primality for `n <= limit`.
    ///
    /// # Panics
    /// If `n` is beyond the sieve limit.
    pub fn is_prime(&self, n: u64) -> bool {
        assert!(
            n <= self.limit,
            "{n} is beyond the sieve limit {}",
            self.limit
        );
        match n {
            2 => true,
            _ if n.is_multiple_of(2) => false,
            _ => self.odd_primes[(n / 2) as usize],
        }
    }

    /// Ascending primes up to the limit.
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        std::iter::once(2).chain(self.odd_primes.iter_ones().map(|i| 2 * i as u64 + 1))
    }

    pub fn count(&self) -> usize {
        1 + self.odd_primes.count_ones()
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        w.write_all(MAGIC)?;
        w.write_all(&VERSION.to_le_bytes())?;
        w.write_all(&self.limit.to_le_bytes())?;
        for word in self.odd_primes.as_raw_slice() {
            w.write_all(&word.to_le_bytes())?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn load(path: &Path, limits: &Limits) -> Result<Self> {
        let mut r = BufReader::new(File::open(path)?);
        let mut head = [0u8; 16];
        r.read_exact(&mut head)
            .map_err(|_| Error::CacheFormat("truncated header".into()))?;
        if &head[..4] != MAGIC {
            return Err(Error::CacheFormat("bad magic".into()));
        }
        let version = u32::from_le_bytes(head[4..8].try_into().unwrap());
        if version != VERSION {
            return Err(Error::CacheFormat(format!("unsupported version {version}")));
        }
        let limit = u64::from_le_bytes(head[8..16].try_into().unwrap());
        if limit < 2 {
            return Err(Error::CacheFormat(format!("invalid limit {limit}")));
        }
        limits.check_sieve(limit)?;
        let bits = odd_bits(limit);
        let mut raw = Vec::new();
        r.read_to_end(&mut raw)?;
        if raw.len() != bits.div_ceil(64) * 8 {
            return Err(Error::CacheFormat(format!(
                "expected {} payload bytes, found {}",
                bits.div_ceil(64) * 8,
                raw.len()
            )));
        }
        let words = raw
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        let mut odd_primes = BitVec::from_vec(words);
        odd_primes.truncate(bits);
        Ok(PrimeSieve { limit, odd_primes })
    }

    /// Marks `n` composite; used only to synthesize violating fixtures.
    #[doc(hidden)]
    pub fn inject_fault(&mut self, n: u64) {
        if n % 2 == 1 && n <= self.limit {
            self.odd_primes.set((n / 2) as usize, false);
        }
    }
}
