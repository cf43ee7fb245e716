//! Orbits of congruence images acting on pairs of classes.
//!
//! A matrix `[[a, b], [c, d]]` over `Z/m` sends a pair `(x, y)` with
//! `x` in `H^1(k, A)` and `y` in `H^1(k, A^)` to
//! `(a x + b psi(y), c phi(x) + d y)`, where `phi` and `psi` are multipliers
//! standing in for the polarization and a map back. When `psi * phi = 1` this
//! is the linear action conjugated by `diag(1, phi)`, so orbits can be grown
//! from a generating set; otherwise every matrix is applied.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::guards::Guards;
use crate::modarith::{additive_order, gcd, inverse_mod, mul_mod, reduce};

/// Row-major `[a, b, c, d]`.
pub type Mat2 = [u64; 4];

pub fn mat2_identity(m: u64) -> Mat2 {
    [1 % m, 0, 0, 1 % m]
}

pub fn mat2_mul(x: &Mat2, y: &Mat2, m: u64) -> Mat2 {
    let e = |i: usize, j: usize| {
        (mul_mod(x[2 * i], y[j], m) + mul_mod(x[2 * i + 1], y[2 + j], m)) % m
    };
    [e(0, 0), e(0, 1), e(1, 0), e(1, 1)]
}

pub fn mat2_det(x: &Mat2, m: u64) -> u64 {
    (mul_mod(x[0], x[3], m) + m - mul_mod(x[1], x[2], m)) % m
}

/// Inverse of a determinant-one matrix.
pub fn mat2_inverse_sl(x: &Mat2, m: u64) -> Mat2 {
    [x[3], (m - x[1]) % m, (m - x[2]) % m, x[0]]
}

fn check_modulus(m: u64, limit: u64) -> Result<()> {
    if m == 0 {
        return Err(Error::invalid("modulus must be >= 1"));
    }
    if m > limit {
        return Err(Error::GuardExceeded {
            what: "matrix modulus",
            requested: m as u128,
            limit: limit as u128,
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CongruenceImage {
    level: u64,
    modulus: u64,
    matrices: Vec<Mat2>,
    generators: Vec<Mat2>,
}

impl CongruenceImage {
    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Sorted lexicographically.
    pub fn matrices(&self) -> &[Mat2] {
        &self.matrices
    }

    /// A generating set found while verifying closure.
    pub fn generators(&self) -> &[Mat2] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn contains(&self, g: &Mat2) -> bool {
        self.matrices.binary_search(g).is_ok()
    }

    /// Direct check over all pairs.
    pub fn is_closed(&self) -> bool {
        let m = self.modulus;
        self.matrices
            .iter()
            .all(|x| self.matrices.iter().all(|y| self.contains(&mat2_mul(x, y, m))))
    }

    pub fn contains_inverses(&self) -> bool {
        self.matrices
            .iter()
            .all(|x| self.contains(&mat2_inverse_sl(x, self.modulus)))
    }

    pub fn contains_identity(&self) -> bool {
        self.contains(&mat2_identity(self.modulus))
    }
}

/// `{ g in SL_2(Z/m) : c = 0 mod gcd(N, m) }`.
pub fn gamma0_image(level: u64, m: u64) -> Result<CongruenceImage> {
    gamma0_image_with(level, m, &Guards::default())
}

pub fn gamma0_image_with(level: u64, m: u64, guards: &Guards) -> Result<CongruenceImage> {
    if level == 0 {
        return Err(Error::invalid("level must be >= 1"));
    }
    check_modulus(m, guards.matrix_modulus())?;
    let step = gcd(level, m);
    let mut matrices = Vec::new();
    for a in 0..m {
        for b in 0..m {
            for c in (0..m).step_by(step as usize) {
                for d in 0..m {
                    let g = [a, b, c, d];
                    if mat2_det(&g, m) == 1 % m {
                        matrices.push(g);
                    }
                }
            }
        }
    }
    matrices.sort();
    let generators = verify_closure(&matrices, |x, y| mat2_mul(x, y, m), guards)?;
    Ok(CongruenceImage {
        level,
        modulus: m,
        matrices,
        generators,
    })
}

/// Grows `<T>` greedily from the sorted set `set`, failing if a product
/// leaves the set. Returns the generators picked.
fn verify_closure<M, F>(set: &[M], mul: F, guards: &Guards) -> Result<Vec<M>>
where
    M: Clone + Ord + std::hash::Hash,
    F: Fn(&M, &M) -> M,
{
    let mut generators: Vec<M> = Vec::new();
    let mut reached: HashSet<M> = HashSet::new();
    for g in set {
        if reached.contains(g) {
            continue;
        }
        generators.push(g.clone());
        reached = closure(&generators, &mul, guards)?;
        if reached.iter().any(|h| set.binary_search(h).is_err()) {
            return Err(Error::invariant("matrix set is not closed under multiplication"));
        }
    }
    if reached.len() != set.len() {
        return Err(Error::invariant("generator closure does not reach the matrix set"));
    }
    Ok(generators)
}

/// Multiplicative closure of a nonempty generating set of a finite group.
fn closure<M, F>(generators: &[M], mul: &F, guards: &Guards) -> Result<HashSet<M>>
where
    M: Clone + Eq + std::hash::Hash,
    F: Fn(&M, &M) -> M,
{
    let limit = guards.closure_size();
    let mut seen: HashSet<M> = generators.iter().cloned().collect();
    let mut queue: VecDeque<M> = seen.iter().cloned().collect();
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = mul(&x, g);
            if !seen.contains(&y) {
                if seen.len() as u64 >= limit {
                    return Err(Error::GuardExceeded {
                        what: "generator closure size",
                        requested: seen.len() as u128 + 1,
                        limit: limit as u128,
                    });
                }
                seen.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(seen)
}

/// Closure mod `m` of the reductions of `T`, `L_N = [[1,0],[N,1]]` and `-I`,
/// the group generated by reductions of these elements of `Gamma_0(N)`.
pub fn lifted_generator_closure(level: u64, m: u64) -> Result<BTreeSet<Mat2>> {
    if level == 0 {
        return Err(Error::invalid("level must be >= 1"));
    }
    let guards = Guards::default();
    check_modulus(m, guards.matrix_modulus())?;
    let gens = [
        [1 % m, 1 % m, 0, 1 % m],
        [1 % m, 0, level % m, 1 % m],
        [(m - 1) % m, 0, 0, (m - 1) % m],
    ];
    Ok(closure(&gens, &|x, y| mat2_mul(x, y, m), &guards)?
        .into_iter()
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PairClass {
    pub x: u64,
    pub y: u64,
}

impl PairClass {
    pub fn new(x: i64, y: i64, m: u64) -> Self {
        PairClass {
            x: reduce(x, m),
            y: reduce(y, m),
        }
    }
}

impl fmt::Display for PairClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PolarizationModel {
    modulus: u64,
    phi: u64,
    psi: u64,
}

impl PolarizationModel {
    /// `psi` defaults to the inverse of `phi` when `phi` is a unit, else 0.
    pub fn new(m: u64, phi: i64, psi: Option<i64>) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid("modulus must be >= 1"));
        }
        let phi = reduce(phi, m);
        let psi = match psi {
            Some(v) => reduce(v, m),
            None => inverse_mod(phi, m).unwrap_or(0),
        };
        Ok(PolarizationModel {
            modulus: m,
            phi,
            psi,
        })
    }

    pub fn unit(m: u64) -> Result<Self> {
        Self::new(m, 1, None)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn phi(&self) -> u64 {
        self.phi
    }

    pub fn psi(&self) -> u64 {
        self.psi
    }

    /// `psi * phi = 1`, in which case the action is a group action.
    pub fn is_invertible(&self) -> bool {
        mul_mod(self.psi, self.phi, self.modulus) == 1 % self.modulus
    }

    pub fn act(&self, g: &Mat2, p: &PairClass) -> PairClass {
        let m = self.modulus;
        PairClass {
            x: (mul_mod(g[0], p.x, m) + mul_mod(g[1], mul_mod(self.psi, p.y, m), m)) % m,
            y: (mul_mod(g[2], mul_mod(self.phi, p.x, m), m) + mul_mod(g[3], p.y, m)) % m,
        }
    }
}

fn same_modulus(group: &CongruenceImage, pol: &PolarizationModel, p: &PairClass) -> Result<()> {
    if group.modulus != pol.modulus {
        return Err(Error::ModulusMismatch(group.modulus, pol.modulus));
    }
    if p.x >= group.modulus || p.y >= group.modulus {
        return Err(Error::invalid(format!(
            "pair {p} is not reduced mod {}",
            group.modulus
        )));
    }
    Ok(())
}

/// Sorted orbit of `start`.
pub fn orbit(
    start: &PairClass,
    group: &CongruenceImage,
    pol: &PolarizationModel,
) -> Result<Vec<PairClass>> {
    same_modulus(group, pol, start)?;
    let moves = if pol.is_invertible() {
        group.generators()
    } else {
        group.matrices()
    };
    let mut seen = BTreeSet::from([*start]);
    let mut queue = VecDeque::from([*start]);
    while let Some(p) = queue.pop_front() {
        for g in moves {
            let q = pol.act(g, &p);
            if seen.insert(q) {
                queue.push_back(q);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// Number of matrices fixing `p`.
pub fn stabilizer_size(
    p: &PairClass,
    group: &CongruenceImage,
    pol: &PolarizationModel,
) -> Result<usize> {
    same_modulus(group, pol, p)?;
    Ok(group.matrices().iter().filter(|g| pol.act(g, p) == *p).count())
}

/// A pair `(y, 0)` reached from `(x, 0)`, with `y = a x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolarizedWitness {
    pub x: u64,
    pub y: u64,
    pub a: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolarizedReport {
    pub level: u64,
    pub modulus: u64,
    pub phi: u64,
    pub psi: u64,
    pub passed: bool,
    pub witnesses: Vec<PolarizedWitness>,
}

impl PolarizedReport {
    pub fn failures(&self) -> impl Iterator<Item = &PolarizedWitness> {
        self.witnesses.iter().filter(|w| w.a.is_none())
    }
}

/// Smallest `a` in `1..=ord(x)` prime to `ord(x)` with `a x = y`.
pub fn coprime_multiplier(x: u64, y: u64, m: u64) -> Option<u64> {
    let ord = additive_order(x, m);
    (1..=ord).find(|&a| gcd(a, ord) == 1 && mul_mod(a, x, m) == y % m)
}

/// For every `x`, each `(y, 0)` in the orbit of `(x, 0)` must satisfy
/// `y = a x` with `a` prime to the order of `x`.
pub fn polarized_conclusion_check(
    level: u64,
    m: u64,
    pol: &PolarizationModel,
) -> Result<PolarizedReport> {
    polarized_conclusion_check_with(level, m, pol, &Guards::default())
}

pub fn polarized_conclusion_check_with(
    level: u64,
    m: u64,
    pol: &PolarizationModel,
    guards: &Guards,
) -> Result<PolarizedReport> {
    let group = gamma0_image_with(level, m, guards)?;
    let mut witnesses = Vec::new();
    for x in 0..m {
        let start = PairClass { x, y: 0 };
        for p in orbit(&start, &group, pol)? {
            if p.y == 0 {
                witnesses.push(PolarizedWitness {
                    x,
                    y: p.x,
                    a: coprime_multiplier(x, p.x, m),
                });
            }
        }
    }
    Ok(PolarizedReport {
        level,
        modulus: m,
        phi: pol.phi,
        psi: pol.psi,
        passed: witnesses.iter().all(|w| w.a.is_some()),
        witnesses,
    })
}

/// Square matrix over `Z/m` of size `2 * genus`, row-major.
pub type SpMatrix = Vec<u64>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymplecticImage {
    genus: usize,
    modulus: u64,
    matrices: Vec<SpMatrix>,
}

impl SymplecticImage {
    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Sorted lexicographically.
    pub fn matrices(&self) -> &[SpMatrix] {
        &self.matrices
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    /// Every member preserves the standard form `J`.
    pub fn is_symplectic(&self) -> bool {
        let k = 2 * self.genus;
        let j = standard_form(self.genus, self.modulus);
        self.matrices.iter().all(|g| {
            let gt = transpose(g, k);
            sq_mul(&sq_mul(&gt, &j, k, self.modulus), g, k, self.modulus) == j
        })
    }
}

fn sq_mul(x: &[u64], y: &[u64], k: usize, m: u64) -> SpMatrix {
    let mut out = vec![0; k * k];
    for i in 0..k {
        for l in 0..k {
            let xil = x[i * k + l];
            if xil == 0 {
                continue;
            }
            for j in 0..k {
                out[i * k + j] = (out[i * k + j] + mul_mod(xil, y[l * k + j], m)) % m;
            }
        }
    }
    out
}

fn transpose(x: &[u64], k: usize) -> SpMatrix {
    let mut out = vec![0; k * k];
    for i in 0..k {
        for j in 0..k {
            out[j * k + i] = x[i * k + j];
        }
    }
    out
}

fn sq_identity(k: usize, m: u64) -> SpMatrix {
    let mut out = vec![0; k * k];
    for i in 0..k {
        out[i * k + i] = 1 % m;
    }
    out
}

/// `[[0, I], [-I, 0]]`.
pub fn standard_form(genus: usize, m: u64) -> SpMatrix {
    let k = 2 * genus;
    let mut out = vec![0; k * k];
    for i in 0..genus {
        out[i * k + genus + i] = 1 % m;
        out[(genus + i) * k + i] = (m - 1) % m;
    }
    out
}

/// `[[I, B], [0, I]]` for the elementary symmetric `B`, their transposes, and
/// the rotation `J`.
pub fn symplectic_generators(genus: usize, m: u64) -> Vec<SpMatrix> {
    let k = 2 * genus;
    let mut gens = Vec::new();
    for i in 0..genus {
        for j in i..genus {
            let mut t = sq_identity(k, m);
            t[i * k + genus + j] = (t[i * k + genus + j] + 1) % m;
            if i != j {
                t[j * k + genus + i] = (t[j * k + genus + i] + 1) % m;
            }
            gens.push(transpose(&t, k));
            gens.push(t);
        }
    }
    if genus > 1 {
        gens.push(standard_form(genus, m));
    }
    gens
}

/// Closure of the reduced standard generators of `Sp_{2g}(Z)`.
pub fn sp_image(genus: usize, m: u64) -> Result<SymplecticImage> {
    sp_image_with(genus, m, &Guards::default())
}

pub fn sp_image_with(genus: usize, m: u64, guards: &Guards) -> Result<SymplecticImage> {
    let limit = match genus {
        1 => guards.matrix_modulus(),
        2 => guards.symplectic_genus2_modulus(),
        _ => return Err(Error::invalid(format!("genus {genus} not supported"))),
    };
    check_modulus(m, limit)?;
    let k = 2 * genus;
    let gens = symplectic_generators(genus, m);
    let mut matrices: Vec<SpMatrix> = closure(&gens, &|x, y| sq_mul(x, y, k, m), guards)?
        .into_iter()
        .collect();
    matrices.sort();
    Ok(SymplecticImage {
        genus,
        modulus: m,
        matrices,
    })
}

/// `SL_2(Z/m)` by direct enumeration, flattened like [`SpMatrix`].
pub fn sl2_enumeration(m: u64) -> Result<Vec<SpMatrix>> {
    Ok(gamma0_image(1, m)?
        .matrices()
        .iter()
        .map(|g| g.to_vec())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma0_examples() {
        let g = gamma0_image(1, 5).unwrap();
        assert_eq!(g.len(), 120);
        let g = gamma0_image(2, 2).unwrap();
        assert_eq!(g.matrices(), &[[1, 0, 0, 1], [1, 1, 0, 1]]);
        let g = gamma0_image(7, 1).unwrap();
        assert_eq!(g.len(), 1);
        assert!(g.is_closed() && g.contains_inverses());
    }

    #[test]
    fn gamma0_guard_and_level() {
        assert!(matches!(gamma0_image(1, 65), Err(Error::GuardExceeded { .. })));
        assert!(gamma0_image(0, 5).is_err());
    }

    #[test]
    fn lifted_generators_land_inside() {
        for n in 1..=6 {
            for m in 1..=8 {
                let img = gamma0_image(n, m).unwrap();
                for g in lifted_generator_closure(n, m).unwrap() {
                    assert!(img.contains(&g));
                }
            }
        }
    }

    #[test]
    fn orbit_examples() {
        let pol = PolarizationModel::unit(5).unwrap();
        let sl = gamma0_image(1, 5).unwrap();
        let o = orbit(&PairClass::new(1, 0, 5), &sl, &pol).unwrap();
        assert_eq!(o.len(), 24);
        let o = orbit(&PairClass::new(0, 0, 5), &sl, &pol).unwrap();
        assert_eq!(o, vec![PairClass { x: 0, y: 0 }]);

        let pol = PolarizationModel::unit(2).unwrap();
        let g = gamma0_image(2, 2).unwrap();
        let o = orbit(&PairClass::new(1, 0, 2), &g, &pol).unwrap();
        assert_eq!(o, vec![PairClass { x: 1, y: 0 }]);
    }

    #[test]
    fn orbit_modulus_mismatch() {
        let pol = PolarizationModel::unit(3).unwrap();
        let sl = gamma0_image(1, 5).unwrap();
        assert!(matches!(
            orbit(&PairClass::new(1, 0, 5), &sl, &pol),
            Err(Error::ModulusMismatch(5, 3))
        ));
    }

    #[test]
    fn generator_orbit_matches_full_orbit() {
        let g = gamma0_image(3, 9).unwrap();
        let pol = PolarizationModel::new(9, 2, None).unwrap();
        let all = PolarizationModel::new(9, 2, Some(5)).unwrap();
        assert_eq!(pol, all);
        for x in 0..9 {
            for y in 0..9 {
                let p = PairClass { x, y };
                let fast = orbit(&p, &g, &pol).unwrap();
                for q in &fast {
                    for h in g.matrices() {
                        assert!(fast.binary_search(&pol.act(h, q)).is_ok());
                    }
                }
                let stab = stabilizer_size(&p, &g, &pol).unwrap();
                assert_eq!(fast.len() * stab, g.len());
            }
        }
    }

    #[test]
    fn polarized_examples() {
        let r = polarized_conclusion_check(1, 5, &PolarizationModel::unit(5).unwrap()).unwrap();
        assert!(r.passed);
        let ys: Vec<u64> = r.witnesses.iter().filter(|w| w.x == 1).map(|w| w.y).collect();
        assert_eq!(ys, vec![1, 2, 3, 4]);

        let r = polarized_conclusion_check(3, 9, &PolarizationModel::unit(9).unwrap()).unwrap();
        assert!(r.passed);
        assert!(!r.witnesses.is_empty());

        let r = polarized_conclusion_check(4, 1, &PolarizationModel::unit(1).unwrap()).unwrap();
        assert!(r.passed);
    }

    #[test]
    fn sp_examples() {
        assert_eq!(sp_image(1, 5).unwrap().len(), 120);
        assert_eq!(sp_image(1, 2).unwrap().len(), 6);
        let s = sp_image(2, 2).unwrap();
        assert_eq!(s.len(), 720);
        assert!(s.is_symplectic());
        assert_eq!(sp_image(2, 3).unwrap().len(), 51_840);
        assert!(sp_image(2, 17).is_err());
        assert!(sp_image(3, 2).is_err());
    }

    #[test]
    fn sp_genus1_is_sl2() {
        for m in 1..=8 {
            assert_eq!(sp_image(1, m).unwrap().matrices(), sl2_enumeration(m).unwrap());
        }
    }
}
