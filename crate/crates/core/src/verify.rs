//! Three independent exactness checks and the aggregate cover report.
//!
//! * [`verify_scan`] counts, for every residue of `Z/N`, how many classes
//!   contain it.
//! * [`verify_crt`] checks pairwise disjointness through the gcd criterion
//!   together with `sum 1/n_s = 1`.
//! * [`verify_genfun`] checks the polynomial identity
//!   `sum_s z^{a_s} (1 - z^N)/(1 - z^{n_s}) = (1 - z^N)/(1 - z)` coefficient-wise.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use serde::Serialize;

use crate::ecs::Ecs;
use crate::error::{Error, Result};

/// Default bound on `N(A)` for the dense verifiers.
pub const DEFAULT_SCAN_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverReport {
    /// `None` when only the statistics were computed.
    pub is_exact: Option<bool>,
    pub lcm: u64,
    #[serde(serialize_with = "ser_ratio")]
    pub density: BigRational,
    pub uncovered: Vec<u64>,
    pub multiply_covered: Vec<u64>,
    pub greatest_modulus_count: usize,
    pub maximal_moduli: BTreeSet<u64>,
}

fn ser_ratio<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Density, `N(A)`, maximal moduli and greatest-modulus multiplicity, without a scan.
pub fn stats(ecs: &Ecs) -> CoverReport {
    CoverReport {
        is_exact: None,
        lcm: ecs.lcm(),
        density: ecs.density(),
        uncovered: Vec::new(),
        multiply_covered: Vec::new(),
        greatest_modulus_count: ecs.greatest_modulus_count(),
        maximal_moduli: ecs.maximal_moduli(),
    }
}

pub fn verify_scan(ecs: &Ecs) -> Result<CoverReport> {
    verify_scan_with_limit(ecs, DEFAULT_SCAN_LIMIT)
}

/// Checks every residue in `[0, N)` directly against every class.
pub fn verify_scan_with_limit(ecs: &Ecs, limit: u64) -> Result<CoverReport> {
    let n = ecs.lcm();
    if n > limit {
        return Err(Error::ScanLimitExceeded { lcm: n, limit });
    }
    // per modulus, how many classes sit on each residue
    let mut tables: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for c in ecs.classes() {
        tables
            .entry(c.modulus())
            .or_insert_with(|| vec![0; c.modulus() as usize])[c.residue() as usize] += 1;
    }
    let mut uncovered = Vec::new();
    let mut multiply_covered = Vec::new();
    for r in 0..n {
        let hits: u32 = tables.iter().map(|(&m, t)| t[(r % m) as usize]).sum();
        match hits {
            0 => uncovered.push(r),
            1 => {}
            _ => multiply_covered.push(r),
        }
    }
    let mut report = stats(ecs);
    report.is_exact = Some(uncovered.is_empty() && multiply_covered.is_empty());
    report.uncovered = uncovered;
    report.multiply_covered = multiply_covered;
    Ok(report)
}

/// Pairwise disjointness plus unit density. Works for any `N(A)`.
///
/// Classes `a(n)` and `b(m)` meet iff `a = b mod gcd(n, m)`. Classes are
/// grouped by modulus so the gcd is taken once per pair of distinct moduli;
/// the worst case is still `O(k^2)`.
pub fn verify_crt(ecs: &Ecs) -> bool {
    if !ecs.has_unit_density() {
        return false;
    }
    let classes = ecs.classes();
    // equal moduli: residues must be distinct (classes are sorted)
    if classes.windows(2).any(|w| w[0] == w[1]) {
        return false;
    }
    let groups = modulus_groups(classes);
    let residues = |r: &std::ops::Range<usize>| classes[r.clone()].iter().map(|c| c.residue());
    let mut reduced = Vec::new();
    for (i, (ni, ri)) in groups.iter().enumerate() {
        for (nj, rj) in &groups[i + 1..] {
            let g = crate::arith::gcd(*ni, *nj);
            let hit = if g == *ni {
                // already reduced and sorted
                let slice = &classes[ri.clone()];
                residues(rj).any(|r| {
                    slice
                        .binary_search_by(|c| c.residue().cmp(&(r % g)))
                        .is_ok()
                })
            } else {
                reduced.clear();
                reduced.extend(residues(ri).map(|r| r % g));
                reduced.sort_unstable();
                residues(rj).any(|r| reduced.binary_search(&(r % g)).is_ok())
            };
            if hit {
                return false;
            }
        }
    }
    true
}

/// `(modulus, index range)` of each run of equal moduli.
fn modulus_groups(classes: &[crate::ecs::ResidueClass]) -> Vec<(u64, std::ops::Range<usize>)> {
    let mut groups: Vec<(u64, std::ops::Range<usize>)> = Vec::new();
    for (i, c) in classes.iter().enumerate() {
        match groups.last_mut() {
            Some((n, r)) if *n == c.modulus() => r.end = i + 1,
            _ => groups.push((c.modulus(), i..i + 1)),
        }
    }
    groups
}

pub fn verify_genfun(ecs: &Ecs) -> Result<bool> {
    verify_genfun_with_limit(ecs, DEFAULT_SCAN_LIMIT)
}

/// Compares both sides of the cleared generating-function identity as dense
/// integer polynomials of degree `< N`.
pub fn verify_genfun_with_limit(ecs: &Ecs, limit: u64) -> Result<bool> {
    let n = ecs.lcm();
    if n > limit {
        return Err(Error::ScanLimitExceeded { lcm: n, limit });
    }
    let len = n as usize;
    let mut lhs = vec![0i64; len];
    for c in ecs.classes() {
        let quotient = geometric_quotient(n, c.modulus());
        // z^a times the quotient; a < n_s keeps the degree below N
        let shift = c.residue() as usize;
        for (i, &q) in quotient.iter().enumerate() {
            if q != 0 {
                lhs[i + shift] += q;
            }
        }
    }
    let rhs = geometric_quotient(n, 1);
    Ok(lhs == rhs[..len])
}

/// Coefficients of `(1 - z^big)/(1 - z^small) = sum_{i < big/small} z^{i*small}`
/// for `small | big`; length `big - small + 1`.
pub(crate) fn geometric_quotient(big: u64, small: u64) -> Vec<i64> {
    debug_assert!(small >= 1 && big.is_multiple_of(small));
    let mut q = vec![0i64; (big - small + 1) as usize];
    for i in 0..big / small {
        q[(i * small) as usize] = 1;
    }
    q
}
