//! One function per subcommand. Each returns an optional payload document
//! (listings, grids, tables) and the claim reports of the run.

use std::path::Path;

use num_bigint::BigUint;
use num_rational::BigRational;

use goldlab_core::bound::{
    self, c_canonical, c_of, c_sweep, crossover_scan, density, density_from_counts,
};
use goldlab_core::comb::{comb_battery, CombMode, ScanMode, WindowSpreadReport};
use goldlab_core::goldbach::{
    all_witnesses, bound_audit, conjecture_scan, prime_window_check, stringent_all, stringent_check,
};
use goldlab_core::primal::{
    fantom_direct, fantom_recursive, multiply_residues, unit_count, PrimeBasis,
};
use goldlab_core::report::{ClaimReport, Status};
use goldlab_core::sieve::PrimeSieve;
use goldlab_core::sums::{
    balance_check, block_audit, epsilon_ledger, export_grid, induction_check, lifting_check,
    min_rep_of, prs_table, rs_table, verify_symmetry, GridFormat, TableKind,
};
use goldlab_core::Limits;

use crate::CliError;

#[derive(Debug, Default)]
pub struct CommandOutput {
    pub payload: Option<String>,
    pub reports: Vec<ClaimReport>,
}

impl CommandOutput {
    fn reports(reports: Vec<ClaimReport>) -> Self {
        CommandOutput {
            payload: None,
            reports,
        }
    }

    pub fn extend(&mut self, other: CommandOutput) {
        if let Some(p) = other.payload {
            self.payload.get_or_insert_with(String::new).push_str(&p);
        }
        self.reports.extend(other.reports);
    }
}

/// Listing of at most `max` values, elided in the middle otherwise.
fn listing<T: ToString>(values: &[T], max: usize) -> String {
    if values.len() <= max {
        return values
            .iter()
            .map(T::to_string)
            .collect::<Vec<_>>()
            .join(" ");
    }
    let head = values[..max / 2]
        .iter()
        .map(T::to_string)
        .collect::<Vec<_>>()
        .join(" ");
    let tail = values[values.len() - max / 2..]
        .iter()
        .map(T::to_string)
        .collect::<Vec<_>>()
        .join(" ");
    format!("{head} ... {tail} ({} values)", values.len())
}

fn basis_params(report: ClaimReport, basis: &PrimeBasis) -> ClaimReport {
    report
        .param("x", basis.x())
        .param("p_x", basis.largest())
        .param("L", basis.primorial())
}

const PERMUTATION_CHECK_MAX_UNITS: usize = 10_000;

pub fn fantom(
    x: usize,
    multiplier: Option<u64>,
    limits: &Limits,
    fault: bool,
) -> Result<CommandOutput, CliError> {
    let mut direct = fantom_direct(x, limits)?;
    if fault {
        direct.inject_fault();
    }
    let rec = fantom_recursive(x, limits)?;
    let basis = direct.basis().clone();
    let a = unit_count(x)?;
    let mut reports = Vec::new();

    let agree = direct.residues() == rec.system.residues();
    let mut construction = basis_params(
        ClaimReport::new(
            "fantom.construction",
            Status::verified(agree),
            if agree {
                format!(
                    "direct and recursive constructions agree on {} residues",
                    direct.len()
                )
            } else {
                format!(
                    "direct has {} residues, recursive has {}",
                    direct.len(),
                    rec.system.len()
                )
            },
        ),
        &basis,
    );
    if direct.len() <= 64 {
        construction = construction.param("residues", listing(direct.residues(), 64));
    }
    reports.push(construction);

    let count_ok = BigUint::from(direct.len()) == a;
    reports.push(
        ClaimReport::new(
            "fantom.unit_count",
            Status::verified(count_ok),
            format!("|F| = {}, A(p_x) = {}", direct.len(), a),
        )
        .param("x", x)
        .param("A", a.clone()),
    );

    let broken = direct.symmetry_violations();
    reports.push(
        ClaimReport::new(
            "fantom.symmetry",
            Status::verified(broken.is_empty()),
            if broken.is_empty() {
                format!("r and L - r both units for all {} residues", direct.len())
            } else {
                format!(
                    "{} residues lack their mirror, first {:?}",
                    broken.len(),
                    broken[0]
                )
            },
        )
        .param("x", x),
    );

    if x >= 2 {
        let prev = unit_count(x - 1)?;
        let removed: Vec<u64> = rec
            .presystem
            .iter()
            .copied()
            .filter(|v| !rec.system.contains(*v))
            .collect();
        let ok = removed == rec.canceling && BigUint::from(rec.canceling.len()) == prev;
        reports.push(
            ClaimReport::new(
                "fantom.canceling_set",
                Status::verified(ok),
                format!(
                    "PF has {} elements, K = {{{}}} is exactly PF \\ F",
                    rec.presystem.len(),
                    listing(&rec.canceling, 16)
                ),
            )
            .param("x", x)
            .param("K_size", rec.canceling.len()),
        );
    }

    match multiplier {
        Some(m) => {
            let d = multiply_residues(&direct, m)?;
            let ok = d.is_permutation_of(&direct);
            reports.push(
                ClaimReport::new(
                    "fantom.permutation",
                    Status::verified(ok),
                    format!("residue parts: {}", listing(&d.residue_parts(), 64)),
                )
                .param("x", x)
                .param("m", m),
            );
        }
        None if direct.len() <= PERMUTATION_CHECK_MAX_UNITS => {
            let failing: Vec<u64> = direct
                .residues()
                .iter()
                .copied()
                .filter(|&m| {
                    !multiply_residues(&direct, m)
                        .map(|d| d.is_permutation_of(&direct))
                        .unwrap_or(false)
                })
                .collect();
            reports.push(
                ClaimReport::new(
                    "fantom.permutation",
                    Status::verified(failing.is_empty()),
                    format!(
                        "{} of {} multipliers permute F",
                        direct.len() - failing.len(),
                        direct.len()
                    ),
                )
                .param("x", x),
            );
        }
        None => {}
    }

    let mut payload = listing(direct.residues(), usize::MAX);
    payload.push('\n');
    Ok(CommandOutput {
        payload: Some(payload),
        reports,
    })
}

fn table_payload(table: &goldlab_core::sums::RepCountTable) -> String {
    table.iter().map(|(e, r)| format!("{e} {r}\n")).collect()
}

pub fn rs(
    x: usize,
    with_table: bool,
    limits: &Limits,
    fault: bool,
) -> Result<CommandOutput, CliError> {
    let mut t = rs_table(x, limits)?;
    if fault {
        t.inject_fault();
    }
    let basis = t.basis().clone();
    let a = basis.unit_count().clone();
    let expected = &a * &a;
    let total = BigUint::from(t.total());
    let mut reports = vec![basis_params(
        ClaimReport::new(
            "rs.total",
            Status::verified(total == expected),
            format!("sum of r(e) = {total}, A(p_x)^2 = {expected}"),
        ),
        &basis,
    )];

    let sym = verify_symmetry(&t);
    let mut evidence = sym.evidence();
    if let Some((e, a_, b)) = sym.mismatches.first() {
        evidence.push_str(&format!(
            "; {} broken, first r({e}) = {a_} vs {b}",
            sym.mismatches.len()
        ));
    }
    reports.push(
        ClaimReport::new("rs.symmetry", Status::verified(sym.passed()), evidence)
            .param("x", x)
            .param("r_L", sym.center)
            .param("A", sym.expected_center.clone()),
    );

    let m = min_rep_of(&t);
    reports.push(
        ClaimReport::new(
            "rs.min_count",
            Status::verified(m.passed()),
            format!(
                "min r(e) = {} first at e = {}, bound prod(p_i - 2) = {}",
                m.observed_min, m.argmin, m.bound
            ),
        )
        .param("x", x)
        .param("observed_min", m.observed_min)
        .param("argmin", m.argmin)
        .param("bound", m.bound.clone()),
    );
    Ok(CommandOutput {
        payload: with_table.then(|| table_payload(&t)),
        reports,
    })
}

pub fn prs(
    x: usize,
    with_table: bool,
    limits: &Limits,
    fault: bool,
) -> Result<CommandOutput, CliError> {
    let mut t = prs_table(x, limits)?;
    if fault {
        t.inject_fault();
    }
    let basis = t.basis().clone();
    let lift = lifting_check(&t, limits)?;
    let mut reports = vec![basis_params(
        ClaimReport::new(
            "prs.lifting",
            Status::verified(lift.passed()),
            match lift.mismatches.first() {
                None => format!(
                    "presystem convolution equals p_x * r_RS(x-1) on all {} keys",
                    lift.checked
                ),
                Some((e, d, l)) => format!(
                    "{} keys differ, first e = {e}: direct {d}, lifted {l}",
                    lift.mismatches.len()
                ),
            },
        ),
        &basis,
    )];

    let bal = balance_check(x, limits)?;
    let prs_total = BigUint::from(t.total());
    let prs_ok = num_bigint::BigInt::from(prs_total.clone()) == bal.prs_expected;
    reports.push(
        ClaimReport::new(
            "prs.total",
            Status::verified(prs_ok),
            format!(
                "sum of r_PRS(e) = {prs_total}, A(p_(x-1))^2 p_x^2 = {}",
                bal.prs_expected
            ),
        )
        .param("x", x),
    );
    reports.push(
        ClaimReport::new(
            "balance.identity",
            Status::verified(bal.passed()),
            format!(
                "A(p_x)^2 = {} = A'^2 p^2 - 2p A'^2 + A'^2 = {}; table totals {}",
                bal.rs_expected,
                bal.identity_rhs,
                match bal.totals_match() {
                    Some(true) => "match",
                    Some(false) => "differ",
                    None => "not materialized",
                }
            ),
        )
        .param("x", x)
        .param("rs_total", bal.rs_expected.clone())
        .param("prs_total", bal.prs_expected.clone()),
    );
    Ok(CommandOutput {
        payload: with_table.then(|| table_payload(&t)),
        reports,
    })
}

pub fn epsilon(x: usize, limits: &Limits) -> Result<CommandOutput, CliError> {
    let ledger = epsilon_ledger(x, limits)?;
    let placements = ledger.placements();
    let placed = if placements.len() <= 32 {
        placements
            .iter()
            .map(|(e, n)| format!("{e}:{n}"))
            .collect::<Vec<_>>()
            .join(", ")
    } else {
        format!("{} keys", placements.len())
    };
    let bad = ledger.unreconciled();
    let evidence = format!(
        "epsilon at {{{placed}}}, total {} (expected {}); reduction total {} (expected {}); {} of {} keys reconcile prs - rs = 2 touching - epsilon",
        ledger.epsilon_total(),
        ledger.expected_epsilon_total(),
        ledger.reduction_total(),
        ledger.expected_reduction_total(),
        ledger.entries.len() - bad.len(),
        ledger.entries.len()
    );
    Ok(CommandOutput::reports(vec![ClaimReport::new(
        "epsilon.ledger",
        Status::verified(ledger.passed()),
        evidence,
    )
    .param("x", x)
    .param("K", listing(&ledger.canceling, 16))
    .param("epsilon_total", ledger.epsilon_total())]))
}

pub fn induction(x: usize, limits: &Limits) -> Result<CommandOutput, CliError> {
    let r = induction_check(x, limits)?;
    let mut evidence = format!(
        "r_RS(x)(e) >= {} r_RS(x-1)(e) on {} keys, {} tight, {} violations",
        r.factor,
        r.checked,
        r.equalities,
        r.violations.len()
    );
    if let Some(v) = r.violations.first() {
        evidence.push_str(&format!(
            "; first e = {}: {} < {} * {}",
            v.e, v.rs, r.factor, v.prev_rs
        ));
    }
    Ok(CommandOutput::reports(vec![ClaimReport::new(
        "induction.inequality",
        Status::verified(r.passed()),
        evidence,
    )
    .param("x", x)
    .param("factor", r.factor)]))
}

pub fn blocks(x: usize, limits: &Limits) -> Result<CommandOutput, CliError> {
    let a = block_audit(x, limits)?;
    let evidence = format!(
        "{} blocks; per-block reduction <= 2 A(p_(x-1))^2 with min margin {}; per-block remaining >= (p_x - 2) A(p_(x-1))^2 with min margin {}; total reduction {}",
        a.blocks.len(),
        a.min_reduction_margin(),
        a.min_remaining_margin(),
        a.total_reduction()
    );
    Ok(CommandOutput::reports(vec![ClaimReport::new(
        "blocks.cancellation",
        Status::audited(a.passed()),
        evidence,
    )
    .param("x", x)
    .param("violating_blocks", a.violations().len())]))
}

fn worst(reports: &[&WindowSpreadReport]) -> Option<WindowSpreadReport> {
    reports
        .iter()
        .max_by(|a, b| {
            a.spread()
                .cmp(&b.spread())
                // earliest on ties: reverse order of (window, target)
                .then_with(|| b.window.cmp(&a.window))
        })
        .map(|r| (*r).clone())
}

fn spread_summary(
    claim: &str,
    x: usize,
    bound: u64,
    scan: ScanMode,
    mode: &str,
    rs: &[&WindowSpreadReport],
) -> ClaimReport {
    let failing = rs.iter().filter(|r| !r.claim_holds()).count();
    let w = worst(rs).expect("at least one scan");
    ClaimReport::new(
        claim,
        Status::audited(failing == 0),
        format!(
            "{} window scans, {} exceed bound {}; largest spread {} at W = {} ({}), counts {}..{}",
            rs.len(),
            failing,
            bound,
            w.spread(),
            w.window,
            w.mode.label(),
            w.min_count,
            w.max_count
        ),
    )
    .param("x", x)
    .param("bound", bound)
    .param("scan", scan.label())
    .param("mode", mode)
}

pub fn combs(
    x: usize,
    windows: Option<&[u64]>,
    scans: &[ScanMode],
    limits: &Limits,
) -> Result<CommandOutput, CliError> {
    let b = comb_battery(x, scans, windows, limits)?;
    let mut reports = Vec::new();

    let bad = b.single_rule_violations();
    let max_spread = b
        .single
        .iter()
        .map(WindowSpreadReport::spread)
        .max()
        .unwrap_or(0);
    reports.push(
        ClaimReport::new(
            "comb.single",
            Status::verified(bad.is_empty()),
            format!(
                "{} single-comb scans over period {}, max spread {}, {} break the rule (spread <= 1, = 0 iff p | W)",
                b.single.len(),
                b.period,
                max_spread,
                bad.len()
            ),
        )
        .param("x", x),
    );

    for &scan in scans {
        for mode in [CombMode::Canceled, CombMode::Units] {
            let rs: Vec<&WindowSpreadReport> = b
                .superposed
                .iter()
                .filter(|r| r.scan == scan && r.mode == mode)
                .collect();
            reports.push(spread_summary(
                "comb.superposed",
                x,
                x as u64,
                scan,
                &mode.label(),
                &rs,
            ));
        }
    }
    for &scan in scans {
        let rs: Vec<&WindowSpreadReport> = b.sum.iter().filter(|r| r.scan == scan).collect();
        reports.push(spread_summary(
            "comb.sum",
            x,
            2 * x as u64,
            scan,
            "sum-comb",
            &rs,
        ));
    }
    Ok(CommandOutput::reports(reports))
}

pub fn bound_cmd(x: usize, e: Option<u64>) -> Result<CommandOutput, CliError> {
    let d = density(x)?;
    let d_counts = density_from_counts(x)?;
    let mut reports = vec![ClaimReport::new(
        "bound.density",
        Status::verified(d == d_counts),
        "prod (1 - 2/p_i) equals prod (p_i - 2) / (L/2)",
    )
    .param("x", x)
    .param("density", d.clone())];

    let r = match e {
        Some(e) => c_of(e, x)?,
        None => c_canonical(x)?,
    };
    let recombined =
        r.main_term() + BigRational::from_integer(&r.summand_one + &r.variance + &r.evenness);
    reports.push(
        ClaimReport::new(
            "bound.c",
            Status::verified(recombined == r.c),
            format!(
                "C = 1/2 * density * {} - 1 - {} + 2 = {} ({}); C > 1: {}",
                bound::fraction_string(&r.places),
                2 * x,
                bound::fraction_string(&r.c),
                r.c_decimal(),
                r.crossover()
            ),
        )
        .param("x", x)
        .param("p_x", r.prime)
        .param("e", r.e)
        .param("c", r.c.clone())
        .param("main_term", r.main_term())
        .param("crossover", r.crossover()),
    );

    let s = c_sweep(x)?;
    let step = s.step();
    let expected_step = &d / num_bigint::BigInt::from(2);
    let ok = s.strictly_increasing() && step.as_ref() == Some(&expected_step);
    let (first, last) = (s.rows.first().unwrap(), s.rows.last().unwrap());
    reports.push(
        ClaimReport::new(
            "bound.sweep",
            Status::verified(ok),
            format!(
                "C increases over e = {}..{} in steps of {}",
                first.0,
                last.0,
                step.as_ref().map_or("none".into(), bound::fraction_string)
            ),
        )
        .param("x", x)
        .param("c_first", first.1.clone())
        .param("c_last", last.1.clone()),
    );
    Ok(CommandOutput::reports(reports))
}

pub fn crossover(x_max: usize) -> Result<CommandOutput, CliError> {
    let s = crossover_scan(x_max)?;
    let first = s.first();
    let expected = x_max >= 16;
    let ok = match first {
        Some(r) => (r.x, r.prime, r.e) == (16, 53, 2810),
        None => !expected,
    };
    let mut first_report = ClaimReport::new(
        "crossover.first",
        Status::verified(ok),
        match first {
            Some(r) => format!(
                "first C(p_x^2 + 1, x) > 1 at x = {}, p_x = {}, e = {}, C = {}",
                r.x,
                r.prime,
                r.e,
                r.c_decimal()
            ),
            None => format!("C(p_x^2 + 1, x) <= 1 for every x in 2..={x_max}"),
        },
    )
    .param("x_max", x_max);
    if let Some(r) = first {
        first_report = first_report
            .param("x", r.x)
            .param("p_x", r.prime)
            .param("e", r.e)
            .param("c", r.c.clone());
    }

    let descents = s.descents();
    let persistence = ClaimReport::new(
        "crossover.persistence",
        Status::audited(s.persists()),
        format!(
            "C > 1 at every x from the first crossover through {x_max}: {}; strictly increasing from x = {}; C drops at x = {}",
            s.persists(),
            s.monotone_suffix_start(),
            if descents.is_empty() {
                "none".to_string()
            } else {
                listing(&descents, 32)
            }
        ),
    )
    .param("x_max", x_max)
    .param("monotone_from", s.monotone_suffix_start());
    Ok(CommandOutput::reports(vec![first_report, persistence]))
}

/// Loads the sieve from `cache` when it is large enough, otherwise builds it
/// (and writes the cache when a path was given).
pub fn sieve_for(
    limit: u64,
    cache: Option<&Path>,
    limits: &Limits,
) -> Result<PrimeSieve, CliError> {
    if let Some(path) = cache {
        if path.exists() {
            let s = PrimeSieve::load(path, limits)?;
            if s.limit() >= limit {
                return Ok(s);
            }
        }
        let s = PrimeSieve::new(limit, limits)?;
        s.save(path).map_err(|e| {
            CliError::Resource(format!("cannot write prime cache {}: {e}", path.display()))
        })?;
        return Ok(s);
    }
    Ok(PrimeSieve::new(limit, limits)?)
}

fn next_prime_square(x: usize) -> Result<u64, CliError> {
    let q = PrimeBasis::new(x + 1)?.largest();
    Ok(q * q)
}

pub fn window(
    x: usize,
    cache: Option<&Path>,
    limits: &Limits,
    fault: bool,
) -> Result<CommandOutput, CliError> {
    let mut s = sieve_for(next_prime_square(x)?, cache, limits)?;
    if fault {
        // the next prime becomes a unit the sieve calls composite
        s.inject_fault(PrimeBasis::new(x + 1)?.largest());
    }
    let r = prime_window_check(x, &s)?;
    Ok(CommandOutput::reports(vec![ClaimReport::new(
        "window.prime",
        Status::verified(r.passed()),
        format!(
            "in ({}, {}) units coincide with primes: {} units, {} counterexamples; first composite unit {}",
            r.prime,
            r.next_prime * r.next_prime,
            r.units_checked,
            r.counterexamples.len(),
            r.first_composite_unit.map_or("none".into(), |v| v.to_string())
        ),
    )
    .param("x", x)
    .param("p_x", r.prime)
    .param("p_next", r.next_prime)]))
}

fn witness_text(w: &goldlab_core::goldbach::GoldbachWitness) -> String {
    format!("{}={}+{}", w.e, w.q, w.r)
}

pub fn stringent(
    x: Option<usize>,
    max: u64,
    all: bool,
    cache: Option<&Path>,
    limits: &Limits,
    fault: bool,
) -> Result<CommandOutput, CliError> {
    match x {
        Some(x) => {
            let mut s = sieve_for(next_prime_square(x)?, cache, limits)?;
            let p = PrimeBasis::new(x)?.largest();
            if fault {
                for q in p + 1..=s.limit() {
                    s.inject_fault(q);
                }
            }
            let r = stringent_check(x, &s)?;
            let shown: Vec<String> = r.witnesses.iter().map(witness_text).collect();
            let mut evidence = format!(
                "{} evens in ({}, {}), {} violations; minimal witnesses: {}",
                r.evens_checked(),
                p * p,
                r.next_prime * r.next_prime,
                r.violations.len(),
                listing(&shown, 16)
            );
            if let Some(v) = r.violations.first() {
                evidence.push_str(&format!("; first violation {v}"));
            }
            let payload = all.then(|| {
                r.witnesses
                    .iter()
                    .flat_map(|w| all_witnesses(w.e, p, &s))
                    .map(|w| witness_text(&w) + "\n")
                    .collect()
            });
            Ok(CommandOutput {
                payload,
                reports: vec![ClaimReport::new(
                    "stringent.window",
                    Status::verified(r.passed()),
                    evidence,
                )
                .param("x", x)
                .param("p_x", p)],
            })
        }
        None => {
            let mut s = sieve_for(max, cache, limits)?;
            if fault {
                s.inject_fault(3);
            }
            let reports = stringent_all(&s)?;
            let evens: usize = reports.iter().map(|r| r.evens_checked()).sum();
            let bad: Vec<u64> = reports
                .iter()
                .flat_map(|r| r.violations.iter().copied())
                .collect();
            let top_x = reports.last().map_or(0, |r| r.x);
            Ok(CommandOutput::reports(vec![ClaimReport::new(
                "stringent.window",
                Status::verified(bad.is_empty()),
                format!(
                    "{} windows x = 1..={top_x}, {evens} evens, {} violations{}",
                    reports.len(),
                    bad.len(),
                    if bad.is_empty() {
                        String::new()
                    } else {
                        format!(": {}", listing(&bad, 16))
                    }
                ),
            )
            .param("max", max)
            .param("windows", reports.len())]))
        }
    }
}

pub fn scan(
    max: u64,
    cache: Option<&Path>,
    limits: &Limits,
    fault: bool,
) -> Result<CommandOutput, CliError> {
    let mut s = sieve_for(max.max(2), cache, limits)?;
    if fault {
        s.inject_fault(3);
    }
    let r = conjecture_scan(max, &s)?;
    let mut evidence = format!(
        "{} evens in (4, {max}], each a sum of two primes above the largest P with P^2 < e; {} violations",
        r.checked,
        r.violations.len()
    );
    if !r.violations.is_empty() {
        evidence.push_str(&format!(": {}", listing(&r.violations, 16)));
    }
    if let Some(h) = r.hardest {
        evidence.push_str(&format!(
            "; largest minimal partner {} (threshold {})",
            witness_text(&h),
            h.threshold
        ));
    }
    Ok(CommandOutput::reports(vec![ClaimReport::new(
        "scan.all_evens",
        Status::audited(r.passed()),
        evidence,
    )
    .param("max", max)
    .param("checked", r.checked)
    .param("violations", r.violations.len())]))
}

pub fn audit(
    x: usize,
    e: Option<u64>,
    cache: Option<&Path>,
    limits: &Limits,
) -> Result<CommandOutput, CliError> {
    let sieve = sieve_for(next_prime_square(x)?.max(e.unwrap_or(0)), cache, limits)?;
    let a = bound_audit(x, e, Some(&sieve))?;
    let t = a.tightest().expect("audit has records").clone();
    let holds = a.claim_holds();
    let mut reports = vec![ClaimReport::new(
        "audit.c_lower_bound",
        Status::audited(holds),
        format!(
            "{} evens; tightest e = {}: {} unit pairs vs C = {} ({}), slack {}",
            a.records.len(),
            t.e,
            t.empirical_pairs,
            bound::fraction_string(&t.c_bound),
            bound::render_decimal(&t.c_bound, 6),
            bound::render_decimal(&t.slack(), 6)
        ),
    )
    .param("x", x)
    .param("e", t.e)
    .param("empirical_pairs", t.empirical_pairs)
    .param("c", t.c_bound.clone())
    .param("slack", t.slack())];
    if let Some(bad) = &a.bridge_mismatches {
        let p = PrimeBasis::new(x)?.largest();
        reports.push(
            ClaimReport::new(
                "audit.bridge",
                Status::verified(bad.is_empty()),
                format!(
                    "unit pairs equal prime pairs above {p} for {} of {} evens",
                    a.records.len() - bad.len(),
                    a.records.len()
                ),
            )
            .param("x", x),
        );
    }
    Ok(CommandOutput::reports(reports))
}

pub fn grid(
    x: usize,
    kind: TableKind,
    format: GridFormat,
    limits: &Limits,
) -> Result<CommandOutput, CliError> {
    let doc = export_grid(x, kind, format, limits)?;
    let side = match kind {
        TableKind::Rs => fantom_direct(x, limits)?.len(),
        TableKind::Prs => fantom_recursive(x, limits)?.presystem.len(),
    };
    Ok(CommandOutput {
        payload: Some(doc),
        reports: vec![ClaimReport::new(
            "grid.export",
            Status::Verified,
            format!("{side}x{side} {} addition grid", kind.label()),
        )
        .param("x", x)
        .param("kind", kind.label())],
    })
}
