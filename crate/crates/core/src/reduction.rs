//! Splitting and merging of residue classes, prime-split reduction and
//! naturality.
//!
//! A system `A` primely splits `B` when `A` arises from `B` by replacing one
//! class `a(t)` with the `p` classes `a + j t (p t)`, `p` prime. Reading that
//! backwards, a [`MergeCandidate`] is a full coset `{d + j n/p (n)}` inside
//! `A` that can be consolidated into `d(n/p)`.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{factorize, is_prime};
use crate::cyclotomic::{contained_cosets, find_coset, CosetTerm, CycVector};
use crate::ecs::{Ecs, ResidueClass};
use crate::error::{Error, Result};
use crate::verify::verify_crt;

/// One prime split: `parent` is the class in the coarser system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "StepJson", try_from = "StepJson")]
pub struct SplitStep {
    pub parent: ResidueClass,
    pub prime: u64,
}

#[derive(Serialize, Deserialize)]
struct StepJson {
    residue: u64,
    modulus: u64,
    prime: u64,
}

impl From<SplitStep> for StepJson {
    fn from(s: SplitStep) -> Self {
        StepJson {
            residue: s.parent.residue(),
            modulus: s.parent.modulus(),
            prime: s.prime,
        }
    }
}

impl TryFrom<StepJson> for SplitStep {
    type Error = String;

    fn try_from(j: StepJson) -> std::result::Result<Self, String> {
        if j.modulus == 0 || j.residue >= j.modulus {
            return Err(format!(
                "class {}({}) is not normalized",
                j.residue, j.modulus
            ));
        }
        if !is_prime(j.prime) {
            return Err(format!("{} is not prime", j.prime));
        }
        Ok(SplitStep {
            parent: ResidueClass::new(j.residue, j.modulus),
            prime: j.prime,
        })
    }
}

impl fmt::Display for SplitStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "split {} by {}", self.parent, self.prime)
    }
}

/// Prime splits read coarse-to-fine: replaying them from `{0(1)}` rebuilds the system.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionTrace {
    pub steps: Vec<SplitStep>,
}

impl ReductionTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `sum (p - 1)` over the steps; equals `|A| - 1` for the system it rebuilds.
    pub fn class_growth(&self) -> u64 {
        self.steps.iter().map(|s| s.prime - 1).sum()
    }

    pub fn replay(&self) -> Result<Ecs> {
        self.steps
            .iter()
            .enumerate()
            .try_fold(Ecs::trivial(), |acc, (index, s)| {
                split(&acc, s.parent, s.prime).map_err(|e| match e {
                    Error::TargetNotPresent(_) => Error::InvalidTrace { index },
                    other => other,
                })
            })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// A full coset `{d + j n/p (n) : 0 <= j < p}` present in a system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MergeCandidate {
    pub modulus: u64,
    pub prime: u64,
    pub shift: u64,
}

impl MergeCandidate {
    /// The `p` classes that get consolidated.
    pub fn members(self) -> Vec<ResidueClass> {
        let step = self.modulus / self.prime;
        (0..self.prime)
            .map(|j| ResidueClass::new(self.shift + j * step, self.modulus))
            .collect()
    }

    /// The class `d(n/p)` they consolidate into.
    pub fn parent(self) -> ResidueClass {
        ResidueClass::new(self.shift, self.modulus / self.prime)
    }
}

impl From<CosetTerm> for MergeCandidate {
    fn from(c: CosetTerm) -> Self {
        MergeCandidate {
            modulus: c.modulus(),
            prime: c.prime(),
            shift: c.shift(),
        }
    }
}

impl fmt::Display for MergeCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(n={}, p={}, d={})",
            self.modulus, self.prime, self.shift
        )
    }
}

/// Replace one occurrence of `target = a(t)` with `{a + i t (t n)}`, `0 <= i < n`.
pub fn split(ecs: &Ecs, target: ResidueClass, n: u64) -> Result<Ecs> {
    if n < 2 {
        return Err(Error::InvalidArity(n));
    }
    let t = target.modulus();
    let tn = t.checked_mul(n).ok_or(Error::LcmOverflow)?;
    let children = (0..n).map(|i| ResidueClass::new(target.residue() + i * t, tn));
    ecs.replace(&[target], children)
        .ok_or(Error::TargetNotPresent(target))?
}

/// Consolidate the `p` classes of `c` into `d(n/p)`.
pub fn merge(ecs: &Ecs, c: MergeCandidate) -> Result<Ecs> {
    let missing = Error::CosetNotPresent {
        modulus: c.modulus,
        prime: c.prime,
        shift: c.shift,
    };
    if c.prime == 0 || !c.modulus.is_multiple_of(c.prime) || c.shift >= c.modulus / c.prime {
        return Err(missing);
    }
    ecs.replace(&c.members(), [c.parent()]).ok_or(missing)?
}

/// Every mergeable coset in the system, sorted by `(n, p, d)`.
pub fn merge_candidates(ecs: &Ecs) -> Vec<MergeCandidate> {
    let mut out = Vec::new();
    for n in ecs.moduli() {
        if n == 1 {
            continue;
        }
        let residues: Vec<i64> = ecs.residues_at(n).map(|r| r as i64).collect();
        let v = CycVector::from_exponents(n, &residues).expect("modulus is positive");
        out.extend(contained_cosets(&v).into_iter().map(MergeCandidate::from));
    }
    out.sort_unstable();
    out
}

/// Whether `a` arises from `b` by a single prime split.
pub fn is_prime_split(a: &Ecs, b: &Ecs) -> bool {
    if a.len() <= b.len() {
        return false;
    }
    merge_candidates(a)
        .into_iter()
        .filter(|c| a.len() - b.len() == (c.prime - 1) as usize)
        .any(|c| merge(a, c).as_ref() == Ok(b))
}

fn require_exact(ecs: &Ecs) -> Result<()> {
    if verify_crt(ecs) {
        Ok(())
    } else {
        Err(Error::NotExact)
    }
}

/// A non-trivial exact system with no mergeable coset.
pub fn is_irreducible(ecs: &Ecs) -> Result<bool> {
    require_exact(ecs)?;
    Ok(!ecs.is_trivial() && merge_candidates(ecs).is_empty())
}

/// One constructive reduction step.
///
/// Picks the numerically smallest division-maximal modulus `n_r` with at most
/// two distinct prime factors, locates a prime-order coset inside the
/// residues at `n_r` (which sum to zero at a primitive `n_r`-th root of
/// unity) and consolidates it. Returns the coarser system and the split that
/// undoes the step.
pub fn reduce_step(ecs: &Ecs) -> Result<(Ecs, SplitStep)> {
    require_exact(ecs)?;
    reduce_step_exact(ecs)
}

fn reduce_step_exact(ecs: &Ecs) -> Result<(Ecs, SplitStep)> {
    if ecs.is_trivial() {
        return Err(Error::AlreadyTrivial);
    }
    let n_r = ecs
        .maximal_moduli()
        .into_iter()
        .find(|&n| factorize(n).omega() <= 2)
        .ok_or(Error::NoEligibleMaximalModulus)?;
    let residues: Vec<i64> = ecs.residues_at(n_r).map(|r| r as i64).collect();
    let v = CycVector::from_exponents(n_r, &residues)?;
    let coset = MergeCandidate::from(find_coset(&v)?);
    let coarser = merge(ecs, coset)?;
    Ok((
        coarser,
        SplitStep {
            parent: coset.parent(),
            prime: coset.prime,
        },
    ))
}

/// Iterates [`reduce_step`] down to `{0(1)}`.
///
/// Succeeds whenever every modulus has at most two distinct prime factors;
/// otherwise it may stop with [`Error::NoEligibleMaximalModulus`].
pub fn reduce_to_trivial(ecs: &Ecs) -> Result<ReductionTrace> {
    require_exact(ecs)?;
    reduce_exact(ecs)
}

fn reduce_exact(ecs: &Ecs) -> Result<ReductionTrace> {
    let mut current = ecs.clone();
    let mut steps = Vec::new();
    while !current.is_trivial() {
        let (next, step) = reduce_step_exact(&current)?;
        steps.push(step);
        current = next;
    }
    steps.reverse();
    Ok(ReductionTrace { steps })
}

fn all_moduli_two_prime(ecs: &Ecs) -> bool {
    ecs.moduli().into_iter().all(|n| factorize(n).omega() <= 2)
}

/// A witnessing trace if the system can be merged down to `{0(1)}`, `None` otherwise.
///
/// Systems whose moduli all have at most two distinct prime factors are always
/// natural and go straight through [`reduce_to_trivial`]; everything else is
/// searched depth-first over merge candidates, remembering dead ends.
pub fn is_natural(ecs: &Ecs) -> Result<Option<ReductionTrace>> {
    require_exact(ecs)?;
    if all_moduli_two_prime(ecs) {
        return reduce_exact(ecs).map(Some);
    }
    let mut dead = HashSet::new();
    let mut path = Vec::new();
    if natural_search(ecs, &mut dead, &mut path)? {
        path.reverse();
        Ok(Some(ReductionTrace { steps: path }))
    } else {
        Ok(None)
    }
}

fn natural_search(ecs: &Ecs, dead: &mut HashSet<Ecs>, path: &mut Vec<SplitStep>) -> Result<bool> {
    if ecs.is_trivial() {
        return Ok(true);
    }
    if all_moduli_two_prime(ecs) {
        let rest = reduce_exact(ecs)?;
        // rest is coarse-to-fine; path is collected fine-to-coarse
        path.extend(rest.steps.into_iter().rev());
        return Ok(true);
    }
    for c in merge_candidates(ecs) {
        let next = merge(ecs, c)?;
        if dead.contains(&next) {
            continue;
        }
        path.push(SplitStep {
            parent: c.parent(),
            prime: c.prime,
        });
        if natural_search(&next, dead, path)? {
            return Ok(true);
        }
        path.pop();
        dead.insert(next);
    }
    Ok(false)
}

/// Outcome of checking the three-prime restriction on a system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Corollary2Report {
    pub primes: (u64, u64, u64),
    /// First `(n1, n2, n3)` in lexicographic order satisfying the six
    /// divisibility conditions.
    pub hypothesis_witness: Option<(u64, u64, u64)>,
    /// Smallest modulus divisible by `p1 p2 p3`.
    pub conclusion_modulus: Option<u64>,
}

impl Corollary2Report {
    pub fn hypothesis_holds(&self) -> bool {
        self.hypothesis_witness.is_some()
    }

    pub fn conclusion_holds(&self) -> bool {
        self.conclusion_modulus.is_some()
    }

    /// Hypothesis implies conclusion.
    pub fn consistent(&self) -> bool {
        !self.hypothesis_holds() || self.conclusion_holds()
    }
}

/// Exhaustive search for moduli `n1, n2, n3` with
/// `p1 | n1 n2`, `p2 | n1 n3`, `p3 | n2 n3`, `p1 ∤ n3`, `p2 ∤ n2`, `p3 ∤ n1`,
/// and for a modulus divisible by `p1 p2 p3`.
pub fn check_corollary2(ecs: &Ecs, primes: (u64, u64, u64)) -> Result<Corollary2Report> {
    let (p1, p2, p3) = primes;
    if !(is_prime(p1) && is_prime(p2) && is_prime(p3)) || p1 == p2 || p1 == p3 || p2 == p3 {
        return Err(Error::InvalidPrimes(primes));
    }
    let mut support: Vec<u64> = factorize(ecs.lcm()).primes().collect();
    let mut wanted = vec![p1, p2, p3];
    wanted.sort_unstable();
    support.sort_unstable();
    if support != wanted {
        return Err(Error::WrongPrimeSupport {
            lcm: ecs.lcm(),
            primes,
        });
    }
    require_exact(ecs)?;
    Ok(corollary2_search(ecs, primes))
}

/// The same search as [`check_corollary2`] without its preconditions.
pub fn corollary2_search(ecs: &Ecs, primes: (u64, u64, u64)) -> Corollary2Report {
    let (p1, p2, p3) = primes;
    let moduli = ecs.moduli();
    let div = |p: u64, n: u64| n.is_multiple_of(p);
    let mut witness = None;
    'outer: for &n1 in &moduli {
        if div(p3, n1) {
            continue;
        }
        for &n2 in &moduli {
            if div(p2, n2) || !(div(p1, n1) || div(p1, n2)) {
                continue;
            }
            for &n3 in &moduli {
                if div(p1, n3) {
                    continue;
                }
                if (div(p2, n1) || div(p2, n3)) && (div(p3, n2) || div(p3, n3)) {
                    witness = Some((n1, n2, n3));
                    break 'outer;
                }
            }
        }
    }
    let triple = p1 * p2 * p3;
    Corollary2Report {
        primes,
        hypothesis_witness: witness,
        conclusion_modulus: moduli.into_iter().find(|&n| n % triple == 0),
    }
}
