//! Random natural systems and exhaustive enumeration.

use std::ops::ControlFlow;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arith::{checked_lcm, divisors, factorize, is_prime};
use crate::ecs::{Ecs, ResidueClass};
use crate::error::{Error, Result};
use crate::reduction::{split, ReductionTrace, SplitStep};

/// Default bound on `N` for [`enumerate_ecs`].
pub const DEFAULT_ENUMERATION_LIMIT: u64 = 60;

/// Constraints for [`generate_natural_with`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GenOptions {
    /// Reject splits that would push `N(A)` above this value.
    pub max_lcm: Option<u64>,
    /// Reject splits creating a modulus with more distinct prime factors.
    pub max_prime_factors: Option<usize>,
}

/// Attempts per step before a constrained step is given up.
const MAX_DRAWS: usize = 64;

/// Random iterated prime splitting of `{0(1)}`.
///
/// The generator is ChaCha8 seeded with `seed` through
/// `SeedableRng::seed_from_u64`. Each step draws a class index uniformly
/// from the canonically sorted class list and then a prime uniformly from
/// `primes`, in that order.
pub fn generate_natural(seed: u64, steps: usize, primes: &[u64]) -> Result<(Ecs, ReductionTrace)> {
    generate_natural_with(seed, steps, primes, GenOptions::default())
}

/// As [`generate_natural`], but splits violating `opts` are redrawn (up to 64
/// times per step); a step with no accepted draw is skipped, so the trace may
/// be shorter than `steps`.
pub fn generate_natural_with(
    seed: u64,
    steps: usize,
    primes: &[u64],
    opts: GenOptions,
) -> Result<(Ecs, ReductionTrace)> {
    if primes.is_empty() {
        return Err(Error::InvalidPrimePool("empty".into()));
    }
    if let Some(&p) = primes.iter().find(|&&p| !is_prime(p)) {
        return Err(Error::InvalidPrimePool(format!("{p} is not prime")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ecs = Ecs::trivial();
    let mut trace = ReductionTrace::default();
    for _ in 0..steps {
        for _ in 0..MAX_DRAWS {
            let class = ecs.classes()[rng.random_range(0..ecs.len())];
            let p = primes[rng.random_range(0..primes.len())];
            if !admissible(&ecs, class, p, opts) {
                continue;
            }
            ecs = split(&ecs, class, p)?;
            trace.steps.push(SplitStep {
                parent: class,
                prime: p,
            });
            break;
        }
    }
    Ok((ecs, trace))
}

fn admissible(ecs: &Ecs, class: ResidueClass, p: u64, opts: GenOptions) -> bool {
    let Some(n) = class.modulus().checked_mul(p) else {
        return false;
    };
    if let Some(cap) = opts.max_lcm {
        match checked_lcm(ecs.lcm(), n) {
            Some(l) if l <= cap => {}
            _ => return false,
        }
    }
    if let Some(k) = opts.max_prime_factors {
        if factorize(n).omega() > k {
            return false;
        }
    }
    true
}

pub fn enumerate_ecs(n: u64) -> Result<Vec<Ecs>> {
    enumerate_ecs_with_limit(n, DEFAULT_ENUMERATION_LIMIT)
}

/// Every exact system whose moduli all divide `n`, in canonical sorted order.
///
/// Works on `Z/n` directly: the class containing the smallest uncovered
/// residue is chosen among the progressions `r(d)`, `d | n`, that avoid the
/// residues already covered. Distinct `(r mod d, d)` give distinct subsets of
/// `Z/n`, so every partition is produced exactly once.
pub fn enumerate_ecs_with_limit(n: u64, limit: u64) -> Result<Vec<Ecs>> {
    let mut out = Vec::new();
    for_each_ecs(n, limit, |e| out.push(e))?;
    out.sort_unstable_by(|a, b| a.classes().cmp(b.classes()));
    Ok(out)
}

/// Number of exact systems with all moduli dividing `n`.
pub fn count_ecs(n: u64, limit: u64) -> Result<u64> {
    let space = Space::new(n, limit)?;
    Ok(space
        .top_level()
        .into_par_iter()
        .map(|(covered, first)| {
            let mut count = 0u64;
            let mut chosen = vec![first];
            space.walk(&mut covered.clone(), &mut chosen, &mut |_| count += 1);
            count
        })
        .sum())
}

/// Streams every exact system with moduli dividing `n`; order is
/// deterministic but not sorted. Branches run in parallel and are delivered
/// to `visit` in branch order.
pub fn for_each_ecs(n: u64, limit: u64, mut visit: impl FnMut(Ecs)) -> Result<()> {
    let space = Space::new(n, limit)?;
    let branches: Vec<Vec<Ecs>> = space
        .top_level()
        .into_par_iter()
        .map(|(covered, first)| {
            let mut found = Vec::new();
            let mut chosen = vec![first];
            space.walk(&mut covered.clone(), &mut chosen, &mut |cls| {
                found.push(Ecs::new(cls.iter().copied()).expect("non-empty, bounded lcm"));
            });
            found
        })
        .collect();
    branches.into_iter().flatten().for_each(&mut visit);
    Ok(())
}

/// Parallel map over every exact system with moduli dividing `n`, results
/// concatenated in the deterministic enumeration order.
pub fn par_map_ecs<T: Send>(n: u64, limit: u64, f: impl Fn(&Ecs) -> T + Sync) -> Result<Vec<T>> {
    let space = Space::new(n, limit)?;
    let branches: Vec<Vec<T>> = space
        .top_level()
        .into_par_iter()
        .map(|(covered, first)| {
            let mut found = Vec::new();
            let mut chosen = vec![first];
            space.walk(&mut covered.clone(), &mut chosen, &mut |cls| {
                let e = Ecs::new(cls.iter().copied()).expect("non-empty, bounded lcm");
                found.push(f(&e));
            });
            found
        })
        .collect();
    Ok(branches.into_iter().flatten().collect())
}

/// Sequential streaming enumeration that stops as soon as `visit` breaks.
/// Returns `true` when the whole space was visited.
pub fn try_for_each_ecs(
    n: u64,
    limit: u64,
    mut visit: impl FnMut(&Ecs) -> ControlFlow<()>,
) -> Result<bool> {
    let space = Space::new(n, limit)?;
    let mut covered = vec![0u64; (n as usize).div_ceil(64)];
    let mut chosen = Vec::new();
    let flow = space.walk_until(&mut covered, &mut chosen, &mut |cls| {
        let e = Ecs::new(cls.iter().copied()).expect("non-empty, bounded lcm");
        visit(&e)
    });
    Ok(flow.is_continue())
}

type Bits = Vec<u64>;

struct Space {
    n: u64,
    divisors: Vec<u64>,
    /// `masks[i][r]` is the bitset of `r(divisors[i])` inside `Z/n`.
    masks: Vec<Vec<Bits>>,
}

impl Space {
    fn new(n: u64, limit: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidModulus(0));
        }
        if n > limit {
            return Err(Error::EnumerationLimitExceeded { n, limit });
        }
        let words = (n as usize).div_ceil(64);
        let divisors = divisors(n);
        let masks = divisors
            .iter()
            .map(|&d| {
                (0..d)
                    .map(|r| {
                        let mut b = vec![0u64; words];
                        let mut x = r;
                        while x < n {
                            b[(x / 64) as usize] |= 1 << (x % 64);
                            x += d;
                        }
                        b
                    })
                    .collect()
            })
            .collect();
        Ok(Space { n, divisors, masks })
    }

    /// The choices for the class through 0.
    fn top_level(&self) -> Vec<(Bits, ResidueClass)> {
        self.divisors
            .iter()
            .enumerate()
            .map(|(i, &d)| (self.masks[i][0].clone(), ResidueClass::new(0, d)))
            .collect()
    }

    fn first_uncovered(&self, covered: &Bits) -> Option<u64> {
        covered.iter().enumerate().find_map(|(w, &bits)| {
            let free = !bits;
            let r = w as u64 * 64 + free.trailing_zeros() as u64;
            (free != 0 && r < self.n).then_some(r)
        })
    }

    fn walk(
        &self,
        covered: &mut Bits,
        chosen: &mut Vec<ResidueClass>,
        visit: &mut impl FnMut(&[ResidueClass]),
    ) {
        let _ = self.walk_until(covered, chosen, &mut |cls| {
            visit(cls);
            ControlFlow::Continue(())
        });
    }

    fn walk_until(
        &self,
        covered: &mut Bits,
        chosen: &mut Vec<ResidueClass>,
        visit: &mut impl FnMut(&[ResidueClass]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let Some(r) = self.first_uncovered(covered) else {
            return visit(chosen);
        };
        for (i, &d) in self.divisors.iter().enumerate() {
            let mask = &self.masks[i][(r % d) as usize];
            if mask.iter().zip(covered.iter()).any(|(m, c)| m & c != 0) {
                continue;
            }
            covered.iter_mut().zip(mask).for_each(|(c, m)| *c |= m);
            chosen.push(ResidueClass::new(r % d, d));
            let flow = self.walk_until(covered, chosen, visit);
            chosen.pop();
            covered.iter_mut().zip(mask).for_each(|(c, m)| *c &= !m);
            flow?;
        }
        ControlFlow::Continue(())
    }
}
