//! Representation-count tables over the even residues of `(0, L]`.
//!
//! `RS(p_x)` counts ordered pairs of units, `PRS(p_x)` ordered pairs of
//! presystem elements. Sums are reduced modulo `L` with representative in
//! `(0, L]`, so `L` itself is a key. Pairs with different summands are
//! counted twice.
//!
//! The passage `PRS -> RS` removes every pair touching a canceling summand.
//! Pairs with *both* summands canceling would be subtracted twice by a naive
//! count; those are the `epsilon` sums, and the ledger here reconciles
//! `reduction(e) = 2 * touching(e) - epsilon(e)` for every key.

use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};

use crate::conv::{cyclic_pair_counts, cyclic_self_counts};
use crate::primal::{fantom_direct, fantom_recursive, reduce_into, PrimeBasis};
use crate::{Error, Limits, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TableKind {
    Rs,
    Prs,
}

impl TableKind {
    pub fn label(self) -> &'static str {
        match self {
            TableKind::Rs => "RS",
            TableKind::Prs => "PRS",
        }
    }
}

/// `r(e)` for every even `e` in `[2, L]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepCountTable {
    basis: PrimeBasis,
    kind: TableKind,
    modulus: u64,
    counts: Vec<u64>,
}

impl RepCountTable {
    pub fn basis(&self) -> &PrimeBasis {
        &self.basis
    }

    pub fn kind(&self) -> TableKind {
        self.kind
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Number of even keys, `L / 2`.
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// `r(e)` for even `e` in `[2, L]`.
    pub fn get(&self, e: u64) -> Option<u64> {
        if e == 0 || e % 2 == 1 || e > self.modulus {
            return None;
        }
        Some(self.counts[(e / 2 - 1) as usize])
    }

    /// `r` of the class of `e` modulo `L`, for any even `e >= 2`.
    pub fn get_reduced(&self, e: u64) -> u64 {
        self.counts[(reduce_into(e, self.modulus) / 2 - 1) as usize]
    }

    /// `(e, r(e))` in ascending `e`.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .map(|(k, &r)| (2 * (k as u64 + 1), r))
    }

    pub fn total(&self) -> u128 {
        self.counts.iter().map(|&c| c as u128).sum()
    }

    /// Corrupts `r(2)`; used only to synthesize violating fixtures.
    #[doc(hidden)]
    pub fn inject_fault(&mut self) {
        self.counts[0] += 1;
    }
}

/// `RS(p_x)` by exact cyclic self-convolution of the unit indicator.
pub fn rs_table(x: usize, limits: &Limits) -> Result<RepCountTable> {
    let system = fantom_direct(x, limits)?;
    let counts = cyclic_self_counts(system.residues(), system.modulus());
    Ok(RepCountTable {
        basis: system.basis().clone(),
        kind: TableKind::Rs,
        modulus: system.modulus(),
        counts,
    })
}

fn require_transition(x: usize) -> Result<()> {
    if x < 2 {
        return Err(Error::IndexTooSmall { min: 2, got: x });
    }
    Ok(())
}

/// `PRS(p_x)` by self-convolution over the presystem `PF(p_x)`.
pub fn prs_table(x: usize, limits: &Limits) -> Result<RepCountTable> {
    require_transition(x)?;
    let c = fantom_recursive(x, limits)?;
    let l = c.system.modulus();
    let counts = cyclic_self_counts(&c.presystem, l);
    Ok(RepCountTable {
        basis: c.system.basis().clone(),
        kind: TableKind::Prs,
        modulus: l,
        counts,
    })
}

/// `p_x * r_RS(x-1)(e mod L(p_{x-1}))` for every even key of `(0, L(p_x)]`.
pub fn lifted_prs_counts(x: usize, limits: &Limits) -> Result<Vec<u64>> {
    require_transition(x)?;
    let basis = PrimeBasis::new(x)?;
    let l = basis.materialized_len(limits)?;
    let prev = rs_table(x - 1, limits)?;
    let p = basis.largest();
    Ok((1..=l / 2).map(|k| p * prev.get_reduced(2 * k)).collect())
}

#[derive(Debug, Clone)]
pub struct LiftingReport {
    pub x: usize,
    pub checked: usize,
    /// `(e, direct, lifted)` wherever the two routes disagree.
    pub mismatches: Vec<(u64, u64, u64)>,
}

impl LiftingReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares a PRS table against the lifting identity.
pub fn lifting_check(prs: &RepCountTable, limits: &Limits) -> Result<LiftingReport> {
    let x = prs.basis().x();
    let lifted = lifted_prs_counts(x, limits)?;
    let mismatches = prs
        .iter()
        .zip(&lifted)
        .filter(|((_, direct), lifted)| direct != *lifted)
        .map(|((e, direct), &lifted)| (e, direct, lifted))
        .collect();
    Ok(LiftingReport {
        x,
        checked: lifted.len(),
        mismatches,
    })
}

#[derive(Debug, Clone)]
pub struct SymmetryReport {
    pub keys: usize,
    pub mirror_pairs: usize,
    /// `(e, r(e), r(L - e))` for every broken mirror pair.
    pub mismatches: Vec<(u64, u64, u64)>,
    pub center: u64,
    pub expected_center: BigUint,
}

impl SymmetryReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && BigUint::from(self.center) == self.expected_center
    }

    pub fn evidence(&self) -> String {
        format!(
            "{} even keys, {} mirror pairs + center",
            self.keys, self.mirror_pairs
        )
    }
}

/// Checks `r(e) = r(L - e)` on `[2, L - 2]` and `r(L) = A(p_x)`.
pub fn verify_symmetry(table: &RepCountTable) -> SymmetryReport {
    let l = table.modulus();
    let mut mismatches = Vec::new();
    let mut mirror_pairs = 0;
    let mut e = 2;
    while 2 * e < l {
        mirror_pairs += 1;
        let (a, b) = (table.get(e).unwrap(), table.get(l - e).unwrap());
        if a != b {
            mismatches.push((e, a, b));
        }
        e += 2;
    }
    SymmetryReport {
        keys: table.len(),
        mirror_pairs,
        mismatches,
        center: table.get(l).unwrap(),
        expected_center: table.basis().unit_count().clone(),
    }
}

/// `prod_{i=2}^{x} (p_i - 2)`.
pub fn min_count_bound(basis: &PrimeBasis) -> BigUint {
    basis.primes()[1..]
        .iter()
        .fold(BigUint::from(1u32), |acc, &p| acc * (p - 2))
}

#[derive(Debug, Clone)]
pub struct MinRepReport {
    pub x: usize,
    pub observed_min: u64,
    /// Smallest `e` attaining the minimum.
    pub argmin: u64,
    pub bound: BigUint,
}

impl MinRepReport {
    pub fn passed(&self) -> bool {
        BigUint::from(self.observed_min) >= self.bound
    }
}

pub fn min_rep_of(table: &RepCountTable) -> MinRepReport {
    let (argmin, observed_min) = table
        .iter()
        .min_by_key(|&(e, r)| (r, e))
        .expect("tables are never empty");
    MinRepReport {
        x: table.basis().x(),
        observed_min,
        argmin,
        bound: min_count_bound(table.basis()),
    }
}

pub fn min_rep_check(x: usize, limits: &Limits) -> Result<MinRepReport> {
    Ok(min_rep_of(&rs_table(x, limits)?))
}

#[derive(Debug, Clone)]
pub struct TableTotals {
    pub rs_total: u128,
    pub prs_total: u128,
}

#[derive(Debug, Clone)]
pub struct BalanceReport {
    pub x: usize,
    /// `A(p_x)^2`.
    pub rs_expected: BigInt,
    /// `A(p_{x-1})^2 * p_x^2`.
    pub prs_expected: BigInt,
    /// `A'^2 p^2 - 2 p A'^2 + A'^2`, evaluated term by term.
    pub identity_rhs: BigInt,
    /// Table sums; absent when the tables exceed the guard.
    pub totals: Option<TableTotals>,
}

impl BalanceReport {
    pub fn identity_holds(&self) -> bool {
        self.rs_expected == self.identity_rhs
    }

    pub fn totals_match(&self) -> Option<bool> {
        self.totals.as_ref().map(|t| {
            BigInt::from(t.rs_total) == self.rs_expected
                && BigInt::from(t.prs_total) == self.prs_expected
        })
    }

    pub fn passed(&self) -> bool {
        self.identity_holds() && self.totals_match().unwrap_or(true)
    }
}

/// The balance identity, plus table totals when both tables fit the guard.
pub fn balance_check(x: usize, limits: &Limits) -> Result<BalanceReport> {
    require_transition(x)?;
    let basis = PrimeBasis::new(x)?;
    let prev = PrimeBasis::new(x - 1)?;
    let a = BigInt::from(basis.unit_count().clone());
    let a_prev_sq = BigInt::from(prev.unit_count().clone()).pow(2);
    let p = BigInt::from(basis.largest());
    let identity_rhs = &a_prev_sq * &p * &p - BigInt::from(2) * &p * &a_prev_sq + &a_prev_sq;
    let totals = if basis.materialized_len(limits).is_ok() {
        Some(TableTotals {
            rs_total: rs_table(x, limits)?.total(),
            prs_total: prs_table(x, limits)?.total(),
        })
    } else {
        None
    };
    Ok(BalanceReport {
        x,
        rs_expected: a.pow(2),
        prs_expected: a_prev_sq * &p * &p,
        identity_rhs,
        totals,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LedgerEntry {
    pub e: u64,
    pub prs: u64,
    pub rs: u64,
    /// Ordered pairs `(c, b)` with `c` canceling and `b` in the presystem.
    pub touching: u64,
    pub epsilon: u64,
}

impl LedgerEntry {
    pub fn reduction(&self) -> i64 {
        self.prs as i64 - self.rs as i64
    }

    pub fn reconciles(&self) -> bool {
        self.reduction() >= 0 && self.reduction() == 2 * self.touching as i64 - self.epsilon as i64
    }
}

/// Bookkeeping of the transition `PRS(p_x) -> RS(p_x)`.
#[derive(Debug, Clone)]
pub struct EpsilonLedger {
    pub x: usize,
    pub modulus: u64,
    pub prime: u64,
    pub canceling: Vec<u64>,
    pub entries: Vec<LedgerEntry>,
    /// `A(p_{x-1})`.
    pub prev_unit_count: u64,
}

impl EpsilonLedger {
    pub fn epsilon_total(&self) -> u128 {
        self.entries.iter().map(|e| e.epsilon as u128).sum()
    }

    pub fn reduction_total(&self) -> i128 {
        self.entries.iter().map(|e| e.reduction() as i128).sum()
    }

    /// Keys carrying a nonzero epsilon, ascending.
    pub fn placements(&self) -> Vec<(u64, u64)> {
        self.entries
            .iter()
            .filter(|e| e.epsilon > 0)
            .map(|e| (e.e, e.epsilon))
            .collect()
    }

    pub fn expected_epsilon_total(&self) -> u128 {
        (self.prev_unit_count as u128).pow(2)
    }

    /// `2 p A'^2 - A'^2`.
    pub fn expected_reduction_total(&self) -> i128 {
        let a2 = (self.prev_unit_count as i128).pow(2);
        2 * self.prime as i128 * a2 - a2
    }

    pub fn unreconciled(&self) -> Vec<LedgerEntry> {
        self.entries
            .iter()
            .filter(|e| !e.reconciles())
            .copied()
            .collect()
    }

    pub fn passed(&self) -> bool {
        self.unreconciled().is_empty()
            && self.epsilon_total() == self.expected_epsilon_total()
            && self.reduction_total() == self.expected_reduction_total()
    }
}

pub fn epsilon_ledger(x: usize, limits: &Limits) -> Result<EpsilonLedger> {
    require_transition(x)?;
    let c = fantom_recursive(x, limits)?;
    let l = c.system.modulus();
    let prs = cyclic_self_counts(&c.presystem, l);
    let rs = cyclic_self_counts(c.system.residues(), l);
    let touching = cyclic_pair_counts(&c.canceling, &c.presystem, l);
    let epsilon = cyclic_self_counts(&c.canceling, l);
    let entries = (0..prs.len())
        .map(|k| LedgerEntry {
            e: 2 * (k as u64 + 1),
            prs: prs[k],
            rs: rs[k],
            touching: touching[k],
            epsilon: epsilon[k],
        })
        .collect();
    Ok(EpsilonLedger {
        x,
        modulus: l,
        prime: c.system.basis().largest(),
        prev_unit_count: c.canceling.len() as u64,
        canceling: c.canceling,
        entries,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InductionViolation {
    pub e: u64,
    pub rs: u64,
    pub prev_rs: u64,
}

#[derive(Debug, Clone)]
pub struct InductionReport {
    pub x: usize,
    pub factor: u64,
    pub checked: usize,
    /// Keys where the inequality is tight.
    pub equalities: usize,
    pub violations: Vec<InductionViolation>,
}

impl InductionReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `r_RS(x)(e) >= (p_x - 2) * r_RS(x-1)(e mod L(p_{x-1}))` for every even key.
pub fn induction_from(rs: &RepCountTable, prev: &RepCountTable) -> InductionReport {
    let factor = rs.basis().largest() - 2;
    let mut equalities = 0;
    let mut violations = Vec::new();
    for (e, r) in rs.iter() {
        let prev_rs = prev.get_reduced(e);
        let floor = factor * prev_rs;
        if r < floor {
            violations.push(InductionViolation { e, rs: r, prev_rs });
        } else if r == floor {
            equalities += 1;
        }
    }
    InductionReport {
        x: rs.basis().x(),
        factor,
        checked: rs.len(),
        equalities,
        violations,
    }
}

pub fn induction_check(x: usize, limits: &Limits) -> Result<InductionReport> {
    require_transition(x)?;
    Ok(induction_from(
        &rs_table(x, limits)?,
        &rs_table(x - 1, limits)?,
    ))
}

/// One of the `p_x` consecutive blocks of length `L(p_{x-1})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockRecord {
    pub index: u64,
    pub first_e: u64,
    pub last_e: u64,
    pub reduction: u64,
    /// `2 * A(p_{x-1})^2`.
    pub reduction_cap: u64,
    pub remaining: u64,
    /// `(p_x - 2) * A(p_{x-1})^2`.
    pub remaining_floor: u64,
}

impl BlockRecord {
    pub fn reduction_margin(&self) -> i128 {
        self.reduction_cap as i128 - self.reduction as i128
    }

    pub fn remaining_margin(&self) -> i128 {
        self.remaining as i128 - self.remaining_floor as i128
    }

    pub fn holds(&self) -> bool {
        self.reduction_margin() >= 0 && self.remaining_margin() >= 0
    }
}

#[derive(Debug, Clone)]
pub struct BlockAudit {
    pub x: usize,
    pub blocks: Vec<BlockRecord>,
}

impl BlockAudit {
    pub fn violations(&self) -> Vec<&BlockRecord> {
        self.blocks.iter().filter(|b| !b.holds()).collect()
    }

    pub fn passed(&self) -> bool {
        self.violations().is_empty()
    }

    pub fn total_reduction(&self) -> u64 {
        self.blocks.iter().map(|b| b.reduction).sum()
    }

    pub fn min_reduction_margin(&self) -> i128 {
        self.blocks
            .iter()
            .map(BlockRecord::reduction_margin)
            .min()
            .unwrap_or(0)
    }

    pub fn min_remaining_margin(&self) -> i128 {
        self.blocks
            .iter()
            .map(BlockRecord::remaining_margin)
            .min()
            .unwrap_or(0)
    }
}

pub fn block_audit(x: usize, limits: &Limits) -> Result<BlockAudit> {
    let ledger = epsilon_ledger(x, limits)?;
    let block_len = ledger.modulus / ledger.prime;
    let a2 = ledger.prev_unit_count * ledger.prev_unit_count;
    let per_block = (block_len / 2) as usize;
    let blocks = ledger
        .entries
        .chunks(per_block)
        .enumerate()
        .map(|(i, chunk)| BlockRecord {
            index: i as u64,
            first_e: chunk[0].e,
            last_e: chunk[chunk.len() - 1].e,
            reduction: chunk.iter().map(|e| e.prs - e.rs).sum(),
            reduction_cap: 2 * a2,
            remaining: chunk.iter().map(|e| e.rs).sum(),
            remaining_floor: (ledger.prime - 2) * a2,
        })
        .collect();
    Ok(BlockAudit { x, blocks })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridFormat {
    Text,
    Csv,
}

/// Largest grid side the exporter will render.
pub const MAX_GRID_SIDE: usize = 2048;

/// Addition table of the (pre)system summands, each cell the even
/// representative in `(0, L]`. For PRS grids, rows and columns of canceling
/// summands are flagged `K`; cells where both coordinates cancel are
/// intersections.
pub fn export_grid(
    x: usize,
    kind: TableKind,
    format: GridFormat,
    limits: &Limits,
) -> Result<String> {
    let (summands, canceling, l) = match kind {
        TableKind::Rs => {
            let f = fantom_direct(x, limits)?;
            (f.residues().to_vec(), Vec::new(), f.modulus())
        }
        TableKind::Prs => {
            require_transition(x)?;
            let c = fantom_recursive(x, limits)?;
            let l = c.system.modulus();
            (c.presystem, c.canceling, l)
        }
    };
    if summands.len() > MAX_GRID_SIDE {
        return Err(Error::GridTooLarge {
            side: summands.len(),
            max: MAX_GRID_SIDE,
        });
    }
    let is_k = |v: u64| canceling.binary_search(&v).is_ok();
    let cell = |a: u64, b: u64| reduce_into(a + b, l);

    match format {
        GridFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut header = vec!["+".to_string()];
            header.extend(summands.iter().map(u64::to_string));
            header.push("flags".into());
            w.write_record(&header)?;
            let k_list = canceling
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(" ");
            for &a in &summands {
                let mut rec = vec![a.to_string()];
                rec.extend(summands.iter().map(|&b| cell(a, b).to_string()));
                rec.push(if is_k(a) {
                    format!("K;X={k_list}")
                } else {
                    String::new()
                });
                w.write_record(&rec)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
            Ok(String::from_utf8(bytes).expect("csv output is ascii"))
        }
        GridFormat::Text => {
            let width = l.to_string().len();
            let mut out = String::new();
            let k_text = canceling
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(",");
            writeln!(
                out,
                "{}(p_{}) sums mod {}; K = {{{}}}; '-' canceled sum, '*' intersection",
                kind.label(),
                x,
                l,
                k_text
            )
            .unwrap();
            let mark = |v: u64| if is_k(v) { 'K' } else { ' ' };
            write!(out, "{:>width$}  |", "+").unwrap();
            for &b in &summands {
                write!(out, " {:>width$}{}", b, mark(b)).unwrap();
            }
            out.push('\n');
            writeln!(
                out,
                "{}",
                "-".repeat(width + 3 + summands.len() * (width + 2))
            )
            .unwrap();
            for &a in &summands {
                write!(out, "{:>width$}{} |", a, mark(a)).unwrap();
                for &b in &summands {
                    let flag = match (is_k(a), is_k(b)) {
                        (true, true) => '*',
                        (true, false) | (false, true) => '-',
                        _ => ' ',
                    };
                    write!(out, " {:>width$}{}", cell(a, b), flag).unwrap();
                }
                out.push('\n');
            }
            Ok(out)
        }
    }
}
