//! Residue classes and finite systems of them.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::arith::checked_lcm;
use crate::error::{Error, Result};

/// The arithmetic progression `residue + modulus * Z`, kept in normalized
/// form `0 <= residue < modulus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "(i64, i64)", into = "(u64, u64)")]
pub struct ResidueClass {
    residue: u64,
    modulus: u64,
}

impl ResidueClass {
    /// Builds a class from an already reduced pair.
    ///
    /// Panics if `modulus == 0` or `residue >= modulus`.
    pub fn new(residue: u64, modulus: u64) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        assert!(
            residue < modulus,
            "residue {residue} not reduced mod {modulus}"
        );
        ResidueClass { residue, modulus }
    }

    pub fn residue(self) -> u64 {
        self.residue
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn contains(self, x: i128) -> bool {
        x.rem_euclid(self.modulus as i128) as u64 == self.residue
    }

    /// Two progressions meet iff their residues agree modulo the gcd of the moduli.
    pub fn intersects(self, other: ResidueClass) -> bool {
        let g = crate::arith::gcd(self.modulus, other.modulus);
        self.residue % g == other.residue % g
    }
}

impl PartialOrd for ResidueClass {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

// canonical order: modulus first, then residue
impl Ord for ResidueClass {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.modulus, self.residue).cmp(&(other.modulus, other.residue))
    }
}

impl fmt::Display for ResidueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.residue, self.modulus)
    }
}

impl TryFrom<(i64, i64)> for ResidueClass {
    type Error = Error;

    fn try_from((residue, modulus): (i64, i64)) -> Result<Self> {
        normalize(residue, modulus)
    }
}

impl From<ResidueClass> for (u64, u64) {
    fn from(c: ResidueClass) -> Self {
        (c.residue, c.modulus)
    }
}

/// Reduce an arbitrary integer residue into `[0, modulus)`.
pub fn normalize(residue: i64, modulus: i64) -> Result<ResidueClass> {
    if modulus < 1 {
        return Err(Error::InvalidModulus(modulus));
    }
    Ok(ResidueClass {
        residue: residue.rem_euclid(modulus) as u64,
        modulus: modulus as u64,
    })
}

/// A finite multiset of residue classes, stored sorted by `(modulus, residue)`.
///
/// Construction only checks that the system is non-empty and that `N(A)`
/// fits in a `u64`; exactness is a property checked by the verifiers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ecs {
    classes: Vec<ResidueClass>,
    lcm: u64,
}

impl Ecs {
    pub fn new(classes: impl IntoIterator<Item = ResidueClass>) -> Result<Self> {
        let mut classes: Vec<_> = classes.into_iter().collect();
        if classes.is_empty() {
            return Err(Error::EmptySystem);
        }
        classes.sort_unstable();
        Ecs::from_sorted(classes)
    }

    fn from_sorted(classes: Vec<ResidueClass>) -> Result<Self> {
        debug_assert!(classes.windows(2).all(|w| w[0] <= w[1]));
        let mut lcm = 1u64;
        let mut last = 0u64;
        for c in &classes {
            if c.modulus != last {
                lcm = checked_lcm(lcm, c.modulus).ok_or(Error::LcmOverflow)?;
                last = c.modulus;
            }
        }
        Ok(Ecs { classes, lcm })
    }

    /// Builds a system from raw `(residue, modulus)` pairs, normalizing each.
    pub fn from_pairs(pairs: &[(i64, i64)]) -> Result<Self> {
        let classes = pairs
            .iter()
            .map(|&(a, n)| normalize(a, n))
            .collect::<Result<Vec<_>>>()?;
        Ecs::new(classes)
    }

    /// The trivial system `{0(1)}`.
    pub fn trivial() -> Self {
        Ecs {
            classes: vec![ResidueClass::new(0, 1)],
            lcm: 1,
        }
    }

    /// The basic system `{0(n), 1(n), ..., n-1(n)}`.
    pub fn basic(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidModulus(0));
        }
        Ecs::new((0..n).map(|i| ResidueClass::new(i, n)))
    }

    pub fn classes(&self) -> &[ResidueClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_trivial(&self) -> bool {
        self.classes.len() == 1 && self.classes[0].modulus == 1
    }

    /// `N(A)`, the lcm of all moduli.
    pub fn lcm(&self) -> u64 {
        self.lcm
    }

    /// Number of occurrences of `class` in the multiset.
    pub fn multiplicity(&self, class: ResidueClass) -> usize {
        let lo = self.classes.partition_point(|c| *c < class);
        let hi = self.classes.partition_point(|c| *c <= class);
        hi - lo
    }

    pub fn contains(&self, class: ResidueClass) -> bool {
        self.classes.binary_search(&class).is_ok()
    }

    /// Distinct moduli in ascending order.
    pub fn moduli(&self) -> Vec<u64> {
        let mut m: Vec<u64> = self.classes.iter().map(|c| c.modulus).collect();
        m.dedup();
        m
    }

    /// Residues of the classes whose modulus is exactly `n`, with repetition.
    pub fn residues_at(&self, n: u64) -> impl Iterator<Item = u64> + '_ {
        self.classes
            .iter()
            .filter(move |c| c.modulus == n)
            .map(|c| c.residue)
    }

    /// `sum 1/n_s`, exactly.
    pub fn density(&self) -> BigRational {
        // every n_s divides N, so the sum is (sum N/n_s) / N
        let lcm = self.lcm as u128;
        let num: BigInt = self
            .classes
            .iter()
            .map(|c| BigInt::from(lcm / c.modulus as u128))
            .sum();
        BigRational::new(num, BigInt::from(self.lcm))
    }

    /// `sum 1/n_s == 1`, decided on the integer numerator `sum N/n_s`.
    pub fn has_unit_density(&self) -> bool {
        let lcm = self.lcm as u128;
        let num: u128 = self.classes.iter().map(|c| lcm / c.modulus as u128).sum();
        num == lcm
    }

    /// Moduli not dividing any other modulus of the system.
    pub fn maximal_moduli(&self) -> BTreeSet<u64> {
        let moduli = self.moduli();
        moduli
            .iter()
            .copied()
            .filter(|&n| !moduli.iter().any(|&m| m != n && m % n == 0))
            .collect()
    }

    /// Numerically largest modulus.
    pub fn greatest_modulus(&self) -> u64 {
        self.classes.last().map(|c| c.modulus).unwrap_or(1)
    }

    /// How many classes carry the numerically largest modulus.
    pub fn greatest_modulus_count(&self) -> usize {
        let g = self.greatest_modulus();
        self.classes
            .iter()
            .rev()
            .take_while(|c| c.modulus == g)
            .count()
    }

    /// Removes one occurrence of each class in `remove` and adds `add`.
    pub(crate) fn replace(
        &self,
        remove: &[ResidueClass],
        add: impl IntoIterator<Item = ResidueClass>,
    ) -> Option<Result<Ecs>> {
        let mut classes = self.classes.clone();
        for r in remove {
            let pos = classes.binary_search(r).ok()?;
            classes.remove(pos);
        }
        for a in add {
            let pos = classes.partition_point(|c| *c < a);
            classes.insert(pos, a);
        }
        if classes.is_empty() {
            return Some(Err(Error::EmptySystem));
        }
        Some(Ecs::from_sorted(classes))
    }
}

impl fmt::Display for Ecs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, c) in self.classes.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("}")
    }
}

/// The thirteen-class irreducible system with maximal modulus 30.
pub fn irreducible_example() -> Ecs {
    Ecs::from_pairs(&[
        (2, 6),
        (4, 6),
        (1, 10),
        (3, 10),
        (7, 10),
        (9, 10),
        (0, 15),
        (5, 30),
        (6, 30),
        (12, 30),
        (18, 30),
        (24, 30),
        (25, 30),
    ])
    .expect("fixture is well formed")
}
