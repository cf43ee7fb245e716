//! Exact residue arithmetic and explicit products of cyclic groups.
//!
//! Moduli are capped at 2^31 - 1 so that every product of two residues fits
//! in a `u64` without wrapping.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_MODULUS: u64 = (1 << 31) - 1;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Reduces a signed integer into `[0, m)`.
pub fn reduce(x: i64, m: u64) -> u64 {
    debug_assert!(m >= 1);
    x.rem_euclid(m as i64) as u64
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inverse_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn check_modulus(m: u64) -> Result<()> {
    if m == 0 {
        return Err(Error::invalid("modulus must be positive"));
    }
    if m > MAX_MODULUS {
        return Err(Error::invalid(format!("modulus {m} exceeds 2^31-1")));
    }
    Ok(())
}

/// A residue class `value mod modulus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ZModElement {
    value: u64,
    modulus: u64,
}

impl ZModElement {
    pub fn new(value: i64, modulus: u64) -> Result<Self> {
        check_modulus(modulus)?;
        Ok(ZModElement {
            value: reduce(value, modulus),
            modulus,
        })
    }

    pub fn zero(modulus: u64) -> Result<Self> {
        Self::new(0, modulus)
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    fn same_modulus(&self, other: &Self) -> Result<()> {
        if self.modulus != other.modulus {
            Err(Error::ModulusMismatch(self.modulus, other.modulus))
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_modulus(other)?;
        Ok(ZModElement {
            value: (self.value + other.value) % self.modulus,
            modulus: self.modulus,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_modulus(other)?;
        Ok(ZModElement {
            value: (self.value + self.modulus - other.value) % self.modulus,
            modulus: self.modulus,
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_modulus(other)?;
        Ok(ZModElement {
            value: mul_mod(self.value, other.value, self.modulus),
            modulus: self.modulus,
        })
    }

    pub fn neg(&self) -> Self {
        ZModElement {
            value: (self.modulus - self.value) % self.modulus,
            modulus: self.modulus,
        }
    }

    /// Integer multiple `k * self`.
    pub fn scale(&self, k: i64) -> Self {
        let k = reduce(k, self.modulus);
        ZModElement {
            value: mul_mod(k, self.value, self.modulus),
            modulus: self.modulus,
        }
    }

    pub fn is_unit(&self) -> bool {
        gcd(self.value, self.modulus) == 1
    }

    pub fn inverse(&self) -> Option<Self> {
        inverse_mod(self.value, self.modulus).map(|value| ZModElement {
            value,
            modulus: self.modulus,
        })
    }

    pub fn order(&self) -> u64 {
        element_order(self)
    }
}

impl fmt::Display for ZModElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus)
    }
}

/// The units of `Z/m`, in increasing order. For `m = 1` the single residue 0
/// is returned as the trivial unit.
pub fn unit_group(m: u64) -> Result<Vec<u64>> {
    check_modulus(m)?;
    if m == 1 {
        return Ok(vec![0]);
    }
    Ok((1..m).filter(|&u| gcd(u, m) == 1).collect())
}

/// Additive order of a residue: `m / gcd(x, m)`.
pub fn element_order(x: &ZModElement) -> u64 {
    x.modulus / gcd(x.value, x.modulus)
}

/// Additive order of `x` in `Z/m` from raw integers.
pub fn additive_order(x: u64, m: u64) -> u64 {
    m / gcd(x % m, m)
}

/// A finite abelian group stored as an explicit product `Z/n_1 x ... x Z/n_k`.
///
/// Equality is positional: `Z/2 x Z/3` and `Z/6` are different values. An
/// empty list of orders is the trivial group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteAbelianGroup {
    cyclic_orders: Vec<u64>,
}

impl FiniteAbelianGroup {
    pub fn new(cyclic_orders: Vec<u64>) -> Result<Self> {
        let mut total: u64 = 1;
        for &n in &cyclic_orders {
            check_modulus(n)?;
            total = total
                .checked_mul(n)
                .ok_or_else(|| Error::invalid("group order overflows u64"))?;
        }
        Ok(FiniteAbelianGroup { cyclic_orders })
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn trivial() -> Self {
        FiniteAbelianGroup {
            cyclic_orders: Vec::new(),
        }
    }

    pub fn cyclic_orders(&self) -> &[u64] {
        &self.cyclic_orders
    }

    pub fn rank(&self) -> usize {
        self.cyclic_orders.len()
    }

    pub fn order(&self) -> u64 {
        self.cyclic_orders.iter().product()
    }

    /// Least common multiple of the cyclic orders.
    pub fn exponent(&self) -> u64 {
        self.cyclic_orders.iter().fold(1, |acc, &n| lcm(acc, n))
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.rank()]
    }

    pub fn contains(&self, x: &[u64]) -> bool {
        x.len() == self.rank() && x.iter().zip(&self.cyclic_orders).all(|(v, n)| v < n)
    }

    pub fn validate(&self, x: &[u64]) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "{x:?} is not a reduced element of {self}"
            )))
        }
    }

    /// Reduces arbitrary signed coordinates into an element.
    pub fn element(&self, coords: &[i64]) -> Result<Vec<u64>> {
        if coords.len() != self.rank() {
            return Err(Error::invalid(format!(
                "expected {} coordinates, got {}",
                self.rank(),
                coords.len()
            )));
        }
        Ok(coords
            .iter()
            .zip(&self.cyclic_orders)
            .map(|(&c, &n)| reduce(c, n))
            .collect())
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        x.iter()
            .zip(y)
            .zip(&self.cyclic_orders)
            .map(|((a, b), n)| (a + b) % n)
            .collect()
    }

    pub fn neg(&self, x: &[u64]) -> Vec<u64> {
        x.iter()
            .zip(&self.cyclic_orders)
            .map(|(a, n)| (n - a) % n)
            .collect()
    }

    pub fn sub(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        self.add(x, &self.neg(y))
    }

    pub fn scale(&self, k: i64, x: &[u64]) -> Vec<u64> {
        x.iter()
            .zip(&self.cyclic_orders)
            .map(|(&a, &n)| mul_mod(reduce(k, n), a, n))
            .collect()
    }

    /// Additive order of `x`: lcm of the componentwise orders.
    pub fn order_of(&self, x: &[u64]) -> u64 {
        x.iter()
            .zip(&self.cyclic_orders)
            .fold(1, |acc, (&a, &n)| lcm(acc, additive_order(a, n)))
    }

    /// Mixed-radix index; increasing index is lexicographic order on tuples.
    pub fn index_of(&self, x: &[u64]) -> usize {
        x.iter()
            .zip(&self.cyclic_orders)
            .fold(0usize, |acc, (&a, &n)| acc * n as usize + a as usize)
    }

    pub fn element_at(&self, mut index: usize) -> Vec<u64> {
        let mut out = vec![0; self.rank()];
        for (slot, &n) in out.iter_mut().zip(&self.cyclic_orders).rev() {
            *slot = (index % n as usize) as u64;
            index /= n as usize;
        }
        out
    }

    /// All elements in lexicographic order.
    pub fn elements(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        (0..self.order() as usize).map(move |i| self.element_at(i))
    }

    /// The cyclic subgroup `{0, x, 2x, ...}`, sorted lexicographically.
    pub fn subgroup_generated(&self, x: &[u64]) -> BTreeSet<Vec<u64>> {
        let mut out = BTreeSet::new();
        let mut cur = self.zero();
        loop {
            if !out.insert(cur.clone()) {
                break;
            }
            cur = self.add(&cur, x);
        }
        out
    }

    /// Subgroup generated by an arbitrary list of elements.
    pub fn span(&self, generators: &[Vec<u64>]) -> BTreeSet<Vec<u64>> {
        let mut out = BTreeSet::new();
        out.insert(self.zero());
        let mut frontier = vec![self.zero()];
        while let Some(cur) = frontier.pop() {
            for g in generators {
                let next = self.add(&cur, g);
                if out.insert(next.clone()) {
                    frontier.push(next);
                }
            }
        }
        out
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cyclic_orders.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.cyclic_orders.iter().map(|n| format!("Z/{n}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}
