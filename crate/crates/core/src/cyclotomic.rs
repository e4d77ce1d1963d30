//! Exact arithmetic in the group ring `Z C_m` and its image under evaluation
//! at a primitive `m`-th root of unity.
//!
//! An element of `Z C_m` is a [`CycVector`]: the coefficient of `z^i` sits at
//! index `i`. Evaluation at a primitive root kills the element exactly when the
//! representing polynomial of degree `< m` is divisible by the cyclotomic
//! polynomial `Phi_m`, which is decided with integer division only.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::arith::{divisors, factorize, is_prime};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CycVector {
    modulus: u64,
    coeffs: Vec<i64>,
}

impl CycVector {
    /// Panics if `coeffs.len() != m` or `m == 0`.
    pub fn new(m: u64, coeffs: Vec<i64>) -> Self {
        assert!(m >= 1, "modulus must be positive");
        assert_eq!(
            coeffs.len() as u64,
            m,
            "coefficient vector must have length m"
        );
        CycVector { modulus: m, coeffs }
    }

    pub fn zero(m: u64) -> Self {
        CycVector::new(m, vec![0; m as usize])
    }

    /// Image of `sum z^e` over `exponents`, each reduced mod `m`.
    pub fn from_exponents(m: u64, exponents: &[i64]) -> Result<Self> {
        if m == 0 {
            return Err(Error::ZeroModulus);
        }
        let mut v = CycVector::zero(m);
        for &e in exponents {
            v.coeffs[e.rem_euclid(m as i64) as usize] += 1;
        }
        Ok(v)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Sum of all coefficients.
    pub fn mass(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    /// Multiply by `z^shift`: a cyclic rotation of the coefficients.
    pub fn rotate(&self, shift: u64) -> CycVector {
        let m = self.modulus as usize;
        let s = (shift % self.modulus) as usize;
        let mut coeffs = vec![0; m];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[(i + s) % m] = c;
        }
        CycVector {
            modulus: self.modulus,
            coeffs,
        }
    }

    /// Whether every coefficient of `self` is at least the matching one of `other`.
    pub fn dominates(&self, other: &CycVector) -> bool {
        self.modulus == other.modulus && self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a >= b)
    }

    pub fn checked_sub(&self, other: &CycVector) -> Option<CycVector> {
        (self.modulus == other.modulus).then(|| CycVector {
            modulus: self.modulus,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn checked_add(&self, other: &CycVector) -> Option<CycVector> {
        (self.modulus == other.modulus).then(|| CycVector {
            modulus: self.modulus,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }
}

/// A translate `z^d * sigma(P)` of the sum over the order-`p` subgroup of `C_m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CosetTerm {
    modulus: u64,
    prime: u64,
    shift: u64,
}

impl CosetTerm {
    pub fn new(modulus: u64, prime: u64, shift: u64) -> Result<Self> {
        if modulus == 0 || !is_prime(prime) || !modulus.is_multiple_of(prime) || shift >= modulus / prime {
            return Err(Error::InvalidCoset {
                modulus,
                prime,
                shift,
            });
        }
        Ok(CosetTerm {
            modulus,
            prime,
            shift,
        })
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn prime(self) -> u64 {
        self.prime
    }

    pub fn shift(self) -> u64 {
        self.shift
    }

    /// Indices `d + j*m/p` for `j` in `[0, p)`.
    pub fn positions(self) -> impl Iterator<Item = u64> {
        let step = self.modulus / self.prime;
        (0..self.prime).map(move |j| self.shift + j * step)
    }
}

/// The 0/1 vector of the coset.
pub fn coset_vector(c: CosetTerm) -> CycVector {
    let mut v = CycVector::zero(c.modulus);
    for i in c.positions() {
        v.coeffs[i as usize] = 1;
    }
    v
}

type PhiCache = RwLock<HashMap<u64, Arc<Vec<i64>>>>;

fn phi_cache() -> &'static PhiCache {
    static CACHE: OnceLock<PhiCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Coefficients of `Phi_m`, lowest degree first.
pub fn cyclotomic_polynomial(m: u64) -> Result<Vec<i64>> {
    if m == 0 {
        return Err(Error::ZeroModulus);
    }
    Ok(phi(m).as_ref().clone())
}

fn phi(m: u64) -> Arc<Vec<i64>> {
    if let Some(p) = phi_cache().read().expect("phi cache poisoned").get(&m) {
        return Arc::clone(p);
    }
    let computed = if m == 1 {
        vec![-1, 1]
    } else {
        // x^m - 1 divided by Phi_d for every proper divisor d
        let mut num = vec![0i128; m as usize + 1];
        num[0] = -1;
        num[m as usize] = 1;
        for d in divisors(m) {
            if d == m {
                continue;
            }
            let (q, r) = div_monic(&num, &phi(d));
            debug_assert!(r.iter().all(|&c| c == 0), "Phi_{d} must divide x^{m} - 1");
            num = q;
        }
        num.into_iter()
            .map(|c| i64::try_from(c).expect("cyclotomic coefficient fits in i64"))
            .collect()
    };
    let computed = Arc::new(computed);
    phi_cache()
        .write()
        .expect("phi cache poisoned")
        .entry(m)
        .or_insert(computed)
        .clone()
}

/// Quotient and remainder of `num / den` for a monic `den`.
fn div_monic(num: &[i128], den: &[i64]) -> (Vec<i128>, Vec<i128>) {
    let dd = den.len() - 1;
    debug_assert_eq!(den[dd], 1);
    let mut rem = num.to_vec();
    if num.len() <= dd {
        return (vec![0], rem);
    }
    let mut quot = vec![0i128; num.len() - dd];
    for k in (0..quot.len()).rev() {
        let lead = rem[k + dd];
        if lead == 0 {
            continue;
        }
        quot[k] = lead;
        for (j, &c) in den.iter().enumerate() {
            if c != 0 {
                rem[k + j] = rem[k + j]
                    .checked_sub(lead.checked_mul(c as i128).expect("overflow in reduction"))
                    .expect("overflow in reduction");
            }
        }
    }
    rem.truncate(dd);
    (quot, rem)
}

/// Remainder of the vector's polynomial modulo `Phi_m`.
fn reduce(v: &CycVector) -> Vec<i128> {
    let num: Vec<i128> = v.coeffs.iter().map(|&c| c as i128).collect();
    div_monic(&num, &phi(v.modulus)).1
}

/// Whether the element lies in the kernel of evaluation at a primitive `m`-th root.
pub fn vanishes(v: &CycVector) -> bool {
    reduce(v).iter().all(|&c| c == 0)
}

/// The image of `(1 - z^N)/(1 - z^t)` at a primitive `n_r`-th root of unity.
///
/// Returns `N/t` when `n_r | t` and `0` otherwise.
pub fn lemma1_quotient(n: u64, t: u64, n_r: u64) -> Result<u64> {
    if t == 0 || !n.is_multiple_of(t) {
        return Err(Error::NotADivisor {
            divisor: t,
            value: n,
        });
    }
    if n_r == 0 || !n.is_multiple_of(n_r) {
        return Err(Error::NotADivisor {
            divisor: n_r,
            value: n,
        });
    }
    // sum_{i < N/t} z^{i t}, pushed into Z C_{n_r}
    let mut v = CycVector::zero(n_r);
    for i in 0..n / t {
        v.coeffs[(i as u128 * t as u128 % n_r as u128) as usize] += 1;
    }
    let rem = reduce(&v);
    match rem.split_first() {
        Some((&c, rest)) if rest.iter().all(|&x| x == 0) && c >= 0 => Ok(c as u64),
        None => Ok(0),
        _ => unreachable!("image of a geometric quotient is 0 or a positive integer"),
    }
}

/// Every prime-order coset fully contained (pointwise) in `v`, sorted by
/// `(p, d)`. Works for any modulus.
pub fn contained_cosets(v: &CycVector) -> Vec<CosetTerm> {
    let m = v.modulus;
    let mut out = Vec::new();
    for p in factorize(m).primes() {
        let step = m / p;
        for d in 0..step {
            if (0..p).all(|j| v.coeffs[(d + j * step) as usize] >= 1) {
                out.push(CosetTerm {
                    modulus: m,
                    prime: p,
                    shift: d,
                });
            }
        }
    }
    out
}

fn check_decomposable(v: &CycVector) -> Result<()> {
    if let Some(i) = v.coeffs.iter().position(|&c| c < 0) {
        return Err(Error::NegativeCoefficient(i));
    }
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    if factorize(v.modulus).omega() > 2 {
        return Err(Error::TooManyPrimeFactors(v.modulus));
    }
    if !vanishes(v) {
        return Err(Error::NotVanishing);
    }
    Ok(())
}

/// A coset contained in a non-negative, nonzero vanishing vector whose modulus
/// has at most two distinct prime factors. Ties go to the smallest prime, then
/// the smallest shift.
pub fn find_coset(v: &CycVector) -> Result<CosetTerm> {
    check_decomposable(v)?;
    first_coset(v)
}

fn first_coset(v: &CycVector) -> Result<CosetTerm> {
    let m = v.modulus;
    for p in factorize(m).primes() {
        let step = m / p;
        for d in 0..step {
            if (0..p).all(|j| v.coeffs[(d + j * step) as usize] >= 1) {
                return Ok(CosetTerm {
                    modulus: m,
                    prime: p,
                    shift: d,
                });
            }
        }
    }
    Err(Error::NoCosetFound(m))
}

/// Writes `v` as a sum of coset vectors by peeling off [`find_coset`] greedily.
pub fn decompose(v: &CycVector) -> Result<Vec<CosetTerm>> {
    if v.is_zero() {
        return Ok(Vec::new());
    }
    check_decomposable(v)?;
    let mut rest = v.clone();
    let mut terms = Vec::new();
    while !rest.is_zero() {
        let c = first_coset(&rest)?;
        for i in c.positions() {
            rest.coeffs[i as usize] -= 1;
        }
        terms.push(c);
    }
    Ok(terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cv(m: u64, e: &[i64]) -> CycVector {
        CycVector::from_exponents(m, e).unwrap()
    }

    fn ones_at(v: &CycVector) -> Vec<usize> {
        v.coeffs()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == 1)
            .map(|(i, _)| i)
            .collect()
    }

    #[test]
    fn from_exponents_examples() {
        assert_eq!(cv(6, &[0, 3]).coeffs(), &[1, 0, 0, 1, 0, 0]);
        assert_eq!(
            ones_at(&cv(30, &[5, 6, 12, 18, 24, 25])),
            vec![5, 6, 12, 18, 24, 25]
        );
        assert_eq!(cv(4, &[5]).coeffs(), &[0, 1, 0, 0]);
        assert_eq!(cv(4, &[-1, 3]).coeffs(), &[0, 0, 0, 2]);
        assert_eq!(CycVector::from_exponents(0, &[1]), Err(Error::ZeroModulus));
    }

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic_polynomial(1).unwrap(), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2).unwrap(), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(3).unwrap(), vec![1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(12).unwrap(), vec![1, 0, -1, 0, 1]);
        assert!(cyclotomic_polynomial(0).is_err());
    }

    #[test]
    fn vanishes_examples() {
        assert!(vanishes(&cv(6, &[0, 3])));
        assert!(vanishes(&cv(30, &[5, 6, 12, 18, 24, 25])));
        assert!(!vanishes(&cv(3, &[0, 1])));
        assert!(vanishes(&CycVector::zero(7)));
        assert!(!vanishes(&cv(1, &[0])));
    }

    #[test]
    fn lemma1_examples() {
        assert_eq!(lemma1_quotient(12, 6, 6).unwrap(), 2);
        assert_eq!(lemma1_quotient(12, 4, 6).unwrap(), 0);
        assert_eq!(lemma1_quotient(12, 3, 6).unwrap(), 0);
        assert_eq!(lemma1_quotient(12, 12, 6).unwrap(), 1);
        assert_eq!(
            lemma1_quotient(12, 5, 6),
            Err(Error::NotADivisor {
                divisor: 5,
                value: 12
            })
        );
    }

    #[test]
    fn coset_vectors() {
        let c = |m, p, d| coset_vector(CosetTerm::new(m, p, d).unwrap());
        assert_eq!(ones_at(&c(4, 2, 1)), vec![1, 3]);
        assert_eq!(ones_at(&c(12, 3, 0)), vec![0, 4, 8]);
        assert_eq!(ones_at(&c(30, 5, 0)), vec![0, 6, 12, 18, 24]);
        assert!(CosetTerm::new(12, 5, 0).is_err());
        assert!(CosetTerm::new(12, 4, 0).is_err());
        assert!(CosetTerm::new(12, 3, 4).is_err());
    }

    #[test]
    fn find_coset_examples() {
        let t = find_coset(&cv(12, &[3, 9, 0, 4, 8])).unwrap();
        assert_eq!((t.prime(), t.shift()), (2, 3));
        let t = find_coset(&cv(4, &[1, 3])).unwrap();
        assert_eq!((t.prime(), t.shift()), (2, 1));
        assert_eq!(find_coset(&cv(12, &[0, 1, 2])), Err(Error::NotVanishing));
        assert_eq!(find_coset(&CycVector::zero(12)), Err(Error::ZeroVector));
        assert_eq!(
            find_coset(&cv(30, &[5, 6, 12, 18, 24, 25])),
            Err(Error::TooManyPrimeFactors(30))
        );
        let neg = CycVector::new(2, vec![1, -1]);
        assert_eq!(find_coset(&neg), Err(Error::NegativeCoefficient(1)));
    }

    #[test]
    fn decompose_examples() {
        let terms = |m, e: &[i64]| -> Vec<(u64, u64)> {
            decompose(&cv(m, e))
                .unwrap()
                .iter()
                .map(|t| (t.prime(), t.shift()))
                .collect()
        };
        assert_eq!(terms(12, &[3, 9, 0, 4, 8]), vec![(2, 3), (3, 0)]);
        assert_eq!(terms(2, &[0, 1]), vec![(2, 0)]);
        assert_eq!(terms(6, &[0, 3, 1, 4]), vec![(2, 0), (2, 1)]);
        assert!(decompose(&CycVector::zero(30)).unwrap().is_empty());
    }

    #[test]
    fn example_sum_has_no_coset() {
        let v = cv(30, &[5, 6, 12, 18, 24, 25]);
        assert!(vanishes(&v));
        assert!(contained_cosets(&v).is_empty());
    }

    #[test]
    fn rotation_preserves_vanishing() {
        let v = cv(12, &[3, 9, 0, 4, 8]);
        for s in 0..12 {
            assert!(vanishes(&v.rotate(s)));
        }
        let w = cv(12, &[0, 1, 2]);
        for s in 0..12 {
            assert!(!vanishes(&w.rotate(s)));
        }
    }
}
