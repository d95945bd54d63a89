//! Exact cyclic pair counting through a number-theoretic transform.
//!
//! Every set convolved here (units, presystems, canceling summands) is a set
//! of odd integers in `[1, L]` with `L` even. Writing `v = 2i + 1` halves the
//! problem: `v + w = 2(i + j + 1)`, and reducing into `(0, L]` is a cyclic
//! fold of `i + j` modulo `L / 2`. Key `k` of the result counts the even
//! residue `e = 2(k + 1)`.
//!
//! The transform runs over `Z/pZ` with `p = 15 * 2^27 + 1`. Each output
//! coefficient is a count bounded by `min(|A|, |B|)`, which is checked to be
//! below `p`, so the modular result is the exact integer.

const MODULUS: u64 = 2_013_265_921;
const GENERATOR: u64 = 31;
const MAX_LOG_LEN: u32 = 27;

fn pow_mod(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1u64;
    base %= MODULUS;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % MODULUS;
        }
        base = base * base % MODULUS;
        exp >>= 1;
    }
    acc
}

fn transform(values: &mut [u64], inverse: bool) {
    let n = values.len();
    debug_assert!(n.is_power_of_two());
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            values.swap(i, j);
        }
    }

    let mut len = 2;
    while len <= n {
        let mut root = pow_mod(GENERATOR, (MODULUS - 1) / len as u64);
        if inverse {
            root = pow_mod(root, MODULUS - 2);
        }
        let half = len / 2;
        let mut twiddles = Vec::with_capacity(half);
        let mut w = 1u64;
        for _ in 0..half {
            twiddles.push(w);
            w = w * root % MODULUS;
        }
        for chunk in values.chunks_exact_mut(len) {
            let (lo, hi) = chunk.split_at_mut(half);
            for ((u, v), &w) in lo.iter_mut().zip(hi.iter_mut()).zip(&twiddles) {
                let a = *u;
                let b = *v * w % MODULUS;
                *u = if a + b >= MODULUS {
                    a + b - MODULUS
                } else {
                    a + b
                };
                *v = if a >= b { a - b } else { a + MODULUS - b };
            }
        }
        len <<= 1;
    }

    if inverse {
        let inv_n = pow_mod(n as u64, MODULUS - 2);
        for v in values.iter_mut() {
            *v = *v * inv_n % MODULUS;
        }
    }
}

fn halved_indicator(set: &[u64], l: u64, size: usize) -> Vec<u64> {
    let mut buf = vec![0u64; size];
    for &v in set {
        assert!(
            v % 2 == 1 && v <= l,
            "pair counting needs odd members of [1, L], got {v}"
        );
        buf[(v / 2) as usize] = 1;
    }
    buf
}

fn padded_len(half: usize) -> usize {
    let n = (2 * half).max(2).next_power_of_two();
    assert!(
        n.trailing_zeros() <= MAX_LOG_LEN,
        "transform length {n} exceeds 2^{MAX_LOG_LEN}"
    );
    n
}

fn fold(product: &[u64], half: usize) -> Vec<u64> {
    let mut out = vec![0u64; half];
    for (t, &c) in product.iter().enumerate().take(2 * half - 1) {
        out[t % half] += c;
    }
    out
}

/// Number of ordered pairs `(a, b)` in `A x B` whose sum reduces to each even
/// residue in `(0, L]`. Both sets must hold distinct odd integers in `[1, L]`.
pub fn cyclic_pair_counts(a: &[u64], b: &[u64], l: u64) -> Vec<u64> {
    assert!(l.is_multiple_of(2) && l > 0, "modulus must be even");
    assert!(
        (a.len().min(b.len()) as u64) < MODULUS,
        "counts could exceed the transform modulus"
    );
    let half = (l / 2) as usize;
    let n = padded_len(half);
    let mut fa = halved_indicator(a, l, n);
    let mut fb = halved_indicator(b, l, n);
    transform(&mut fa, false);
    transform(&mut fb, false);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x = *x * y % MODULUS;
    }
    transform(&mut fa, true);
    fold(&fa, half)
}

/// `cyclic_pair_counts(set, set, l)` with a single forward transform.
pub fn cyclic_self_counts(set: &[u64], l: u64) -> Vec<u64> {
    assert!(l.is_multiple_of(2) && l > 0, "modulus must be even");
    assert!(
        (set.len() as u64) < MODULUS,
        "counts could exceed the transform modulus"
    );
    let half = (l / 2) as usize;
    let n = padded_len(half);
    let mut f = halved_indicator(set, l, n);
    transform(&mut f, false);
    for v in f.iter_mut() {
        *v = *v * *v % MODULUS;
    }
    transform(&mut f, true);
    fold(&f, half)
}
