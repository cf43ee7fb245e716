//! Elliptic curves and plane cubics over prime fields `F_p`, `p > 3`.
//!
//! Point counts are naive enumeration against a table of square roots.
//! Plane cubics are checked for smoothness over `F_p`, `F_p^2` and `F_p^3`:
//! a singular point of a plane cubic is defined over an extension of degree
//! at most 3 (an irreducible cubic has at most one, the others are
//! intersections of components).
//!
//! A pointed smooth cubic is reduced to short Weierstrass form by projecting
//! from the point. Lines through `P` meet the cubic in two further points,
//! which are real over the field exactly when a binary quartic `D(s, t)` in
//! the slope is a square, so the cubic is birational to `w^2 = D(s, t)`. The
//! Jacobian of that quartic is `y^2 = x^3 - 27 I x - 27 J` with `I`, `J`
//! the classical invariants, and a genus-1 curve with a rational point is
//! isomorphic to its Jacobian.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::guards::Guards;
use crate::modarith::{gcd, inverse_mod, is_prime, mul_mod, pow_mod, reduce};

fn check_prime(p: u64, cap: u64) -> Result<()> {
    if p <= 3 {
        return Err(Error::invalid(format!(
            "characteristic {p} not supported (need p > 3)"
        )));
    }
    if p > cap {
        return Err(Error::GuardExceeded {
            what: "field prime",
            requested: p as u128,
            limit: cap as u128,
        });
    }
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    Ok(())
}

/// `y^2 = x^3 + ax + b` over `F_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct WeierstrassCurve {
    p: u64,
    a: u64,
    b: u64,
}

impl WeierstrassCurve {
    pub fn new(p: u64, a: i64, b: i64) -> Result<Self> {
        Self::new_with(p, a, b, &Guards::default())
    }

    pub fn new_with(p: u64, a: i64, b: i64, guards: &Guards) -> Result<Self> {
        check_prime(p, guards.curve_prime())?;
        let c = WeierstrassCurve {
            p,
            a: reduce(a, p),
            b: reduce(b, p),
        };
        if c.discriminant() == 0 {
            return Err(Error::Singular(format!("{c} has zero discriminant")));
        }
        Ok(c)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    /// `-16 (4a^3 + 27b^2) mod p`.
    pub fn discriminant(&self) -> u64 {
        let p = self.p;
        let inner = (4 * pow_mod(self.a, 3, p) + 27 * mul_mod(self.b, self.b, p)) % p;
        mul_mod(p - 16 % p, inner, p)
    }

    /// `1728 * 4a^3 / (4a^3 + 27b^2) mod p`.
    pub fn j_invariant(&self) -> u64 {
        let p = self.p;
        let a3 = mul_mod(4, pow_mod(self.a, 3, p), p);
        let den = (a3 + mul_mod(27, mul_mod(self.b, self.b, p), p)) % p;
        let inv = inverse_mod(den, p).expect("nonsingular");
        mul_mod(mul_mod(1728 % p, a3, p), inv, p)
    }

    pub fn contains(&self, x: u64, y: u64) -> bool {
        let p = self.p;
        mul_mod(y, y, p) == (pow_mod(x, 3, p) + mul_mod(self.a, x, p) + self.b) % p
    }
}

impl fmt::Display for WeierstrassCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "wcurve {} {} {}", self.p, self.a, self.b)
    }
}

/// Parses `wcurve p a b`.
impl FromStr for WeierstrassCurve {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let toks: Vec<&str> = s.split_whitespace().collect();
        if toks.len() != 4 || toks[0] != "wcurve" {
            return Err(Error::parse("expected `wcurve p a b`"));
        }
        let p = parse_int(toks[1])?;
        if p < 0 {
            return Err(Error::parse("p must be positive"));
        }
        WeierstrassCurve::new(p as u64, parse_int(toks[2])?, parse_int(toks[3])?)
    }
}

fn parse_int(s: &str) -> Result<i64> {
    s.parse().map_err(|_| Error::parse(format!("not an integer: {s:?}")))
}

/// Number of square roots of each residue mod `p`.
fn sqrt_counts(p: u64) -> Vec<u8> {
    let mut counts = vec![0u8; p as usize];
    for y in 0..p {
        counts[mul_mod(y, y, p) as usize] += 1;
    }
    counts
}

/// `#E(F_p)`, including the point at infinity.
pub fn curve_group_order(curve: &WeierstrassCurve) -> u64 {
    let p = curve.p;
    let roots = sqrt_counts(p);
    let mut count = 1u64;
    for x in 0..p {
        let rhs = (pow_mod(x, 3, p) + mul_mod(curve.a, x, p) + curve.b) % p;
        count += roots[rhs as usize] as u64;
    }
    count
}

/// `|#E(F_p) - p - 1| <= 2 sqrt(p)`, tested exactly as `(#E - p - 1)^2 <= 4p`.
pub fn satisfies_hasse(curve: &WeierstrassCurve, order: u64) -> bool {
    let t = order as i128 - curve.p as i128 - 1;
    t * t <= 4 * curve.p as i128
}

/// Order of `Aut(E)` over `F_p`: the `u` with `u^4 = 1` when `j = 1728`,
/// `u^6 = 1` when `j = 0`, and `{+-1}` otherwise.
pub fn aut_group_order(curve: &WeierstrassCurve) -> u64 {
    let p = curve.p;
    match curve.j_invariant() {
        0 => gcd(6, p - 1),
        j if j == 1728 % p => gcd(4, p - 1),
        _ => 2,
    }
}

/// Monomials of a ternary cubic as `(i, j, k)` exponents of `x, y, z`.
pub const CUBIC_MONOMIALS: [(usize, usize, usize); 10] = [
    (3, 0, 0),
    (2, 1, 0),
    (2, 0, 1),
    (1, 2, 0),
    (1, 1, 1),
    (1, 0, 2),
    (0, 3, 0),
    (0, 2, 1),
    (0, 1, 2),
    (0, 0, 3),
];

/// A ternary cubic form over `F_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PlaneCubic {
    p: u64,
    coeffs: [u64; 10],
}

impl PlaneCubic {
    /// Coefficients in the order of [`CUBIC_MONOMIALS`]. Rejects singular cubics.
    pub fn new(p: u64, coeffs: [i64; 10]) -> Result<Self> {
        Self::new_with(p, coeffs, &Guards::default())
    }

    pub fn new_with(p: u64, coeffs: [i64; 10], guards: &Guards) -> Result<Self> {
        let c = Self::unchecked(p, coeffs, guards)?;
        if let Some(pt) = c.singular_point() {
            return Err(Error::Singular(format!("{c} is singular ({pt})")));
        }
        Ok(c)
    }

    /// Builds the form without the smoothness check.
    pub fn unchecked(p: u64, coeffs: [i64; 10], guards: &Guards) -> Result<Self> {
        check_prime(p, guards.cubic_prime())?;
        let coeffs = coeffs.map(|c| reduce(c, p));
        Ok(PlaneCubic { p, coeffs })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64; 10] {
        &self.coeffs
    }

    pub fn eval(&self, pt: [u64; 3]) -> u64 {
        let p = self.p;
        CUBIC_MONOMIALS
            .iter()
            .zip(&self.coeffs)
            .fold(0, |acc, (&(i, j, k), &c)| {
                let m = mul_mod(
                    mul_mod(pow_mod(pt[0], i as u64, p), pow_mod(pt[1], j as u64, p), p),
                    pow_mod(pt[2], k as u64, p),
                    p,
                );
                (acc + mul_mod(c, m, p)) % p
            })
    }

    pub fn is_smooth(&self) -> bool {
        self.singular_point().is_none()
    }

    /// Searches for a singular point over `F_p`, `F_p^2`, `F_p^3`; returns a
    /// description of the first one found.
    pub fn singular_point(&self) -> Option<String> {
        let grads = self.gradient();
        for k in 1..=3 {
            let field = ExtField::new(self.p, k);
            if let Some(desc) = singular_in(&field, &grads) {
                return Some(desc);
            }
        }
        None
    }

    /// Partial derivatives as quadratic forms, coefficients over
    /// `x^2, xy, xz, y^2, yz, z^2`.
    fn gradient(&self) -> [[u64; 6]; 3] {
        let p = self.p;
        let mut out = [[0u64; 6]; 3];
        for (&(i, j, k), &c) in CUBIC_MONOMIALS.iter().zip(&self.coeffs) {
            let e = [i, j, k];
            for (var, grad) in out.iter_mut().enumerate() {
                if e[var] == 0 {
                    continue;
                }
                let mut d = e;
                d[var] -= 1;
                let slot = QUADRATIC_MONOMIALS
                    .iter()
                    .position(|&m| m == (d[0], d[1], d[2]))
                    .expect("degree 2");
                grad[slot] = (grad[slot] + mul_mod(c, e[var] as u64, p)) % p;
            }
        }
        out
    }

    /// Projective points over `F_p`, normalized so the last nonzero
    /// coordinate is 1, in enumeration order `(x:y:1)`, `(x:1:0)`, `(1:0:0)`.
    pub fn points(&self) -> impl Iterator<Item = [u64; 3]> + '_ {
        let p = self.p;
        let affine = (0..p).flat_map(move |x| (0..p).map(move |y| [x, y, 1]));
        let line = (0..p).map(|x| [x, 1, 0]);
        affine
            .chain(line)
            .chain(std::iter::once([1, 0, 0]))
            .filter(move |&pt| self.eval(pt) == 0)
    }

    pub fn point_count(&self) -> u64 {
        self.points().count() as u64
    }
}

impl fmt::Display for PlaneCubic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cubic {}", self.p)?;
        for c in &self.coeffs {
            write!(f, " {c}")?;
        }
        Ok(())
    }
}

/// Parses `cubic p c1 ... c10` in the order of [`CUBIC_MONOMIALS`].
impl FromStr for PlaneCubic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let toks: Vec<&str> = s.split_whitespace().collect();
        if toks.len() != 12 || toks[0] != "cubic" {
            return Err(Error::parse("expected `cubic p` followed by 10 coefficients"));
        }
        let p = parse_int(toks[1])?;
        if p < 0 {
            return Err(Error::parse("p must be positive"));
        }
        let mut coeffs = [0i64; 10];
        for (slot, t) in coeffs.iter_mut().zip(&toks[2..]) {
            *slot = parse_int(t)?;
        }
        PlaneCubic::new(p as u64, coeffs)
    }
}

const QUADRATIC_MONOMIALS: [(usize, usize, usize); 6] = [
    (2, 0, 0),
    (1, 1, 0),
    (1, 0, 1),
    (0, 2, 0),
    (0, 1, 1),
    (0, 0, 2),
];

/// First rational point in enumeration order; `None` only if `C(F_p)` is empty.
pub fn cubic_rational_point(cubic: &PlaneCubic) -> Option<[u64; 3]> {
    cubic.points().next()
}

// ---------------------------------------------------------------------------
// Extension fields F_{p^k}, k <= 3, as F_p[t] / (monic irreducible).

type Fe = [u64; 3];

#[derive(Debug, Clone)]
struct ExtField {
    p: u64,
    k: usize,
    /// `t^k = -(m[0] + m[1] t + ... )`; only the first `k` entries are used.
    modulus: [u64; 3],
}

impl ExtField {
    fn new(p: u64, k: usize) -> Self {
        assert!((1..=3).contains(&k));
        let mut modulus = [0u64; 3];
        if k > 1 {
            // a monic polynomial of degree 2 or 3 without roots is irreducible
            let mut found = false;
            'search: for c0 in 1..p {
                for c1 in 0..p {
                    for c2 in 0..if k == 3 { p } else { 1 } {
                        let m = [c0, c1, c2];
                        let has_root = (0..p).any(|x| {
                            let mut v = pow_mod(x, k as u64, p);
                            for (i, &c) in m.iter().take(k).enumerate() {
                                v = (v + mul_mod(c, pow_mod(x, i as u64, p), p)) % p;
                            }
                            v == 0
                        });
                        if !has_root {
                            modulus = m;
                            found = true;
                            break 'search;
                        }
                    }
                }
            }
            assert!(found, "no irreducible polynomial of degree {k} mod {p}");
        }
        ExtField { p, k, modulus }
    }

    fn size(&self) -> u64 {
        self.p.pow(self.k as u32)
    }

    fn element(&self, mut idx: u64) -> Fe {
        let mut e = [0u64; 3];
        for slot in e.iter_mut().take(self.k) {
            *slot = idx % self.p;
            idx /= self.p;
        }
        e
    }

    fn from_base(&self, c: u64) -> Fe {
        [c % self.p, 0, 0]
    }

    fn zero(&self) -> Fe {
        [0; 3]
    }

    fn is_zero(&self, a: &Fe) -> bool {
        a.iter().all(|&c| c == 0)
    }

    fn add(&self, a: &Fe, b: &Fe) -> Fe {
        [0, 1, 2].map(|i| (a[i] + b[i]) % self.p)
    }

    fn sub(&self, a: &Fe, b: &Fe) -> Fe {
        [0, 1, 2].map(|i| (a[i] + self.p - b[i]) % self.p)
    }

    fn mul(&self, a: &Fe, b: &Fe) -> Fe {
        let p = self.p;
        let k = self.k;
        let mut prod = [0u64; 5];
        for i in 0..k {
            for j in 0..k {
                prod[i + j] = (prod[i + j] + mul_mod(a[i], b[j], p)) % p;
            }
        }
        for deg in (k..2 * k - 1).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            prod[deg] = 0;
            for i in 0..k {
                let sub = mul_mod(c, self.modulus[i], p);
                prod[deg - k + i] = (prod[deg - k + i] + p - sub) % p;
            }
        }
        [prod[0], prod[1], prod[2]]
    }

    fn pow(&self, a: &Fe, mut e: u64) -> Fe {
        let mut acc = self.from_base(1);
        let mut base = *a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn inv(&self, a: &Fe) -> Fe {
        self.pow(a, self.size() - 2)
    }
}

/// Polynomial in one variable over an extension field, increasing degree.
fn trim(field: &ExtField, mut f: Vec<Fe>) -> Vec<Fe> {
    while f.last().is_some_and(|c| field.is_zero(c)) {
        f.pop();
    }
    f
}

fn poly_rem(field: &ExtField, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    let mut r = a.to_vec();
    let lead_inv = field.inv(b.last().expect("nonzero divisor"));
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let factor = field.mul(r.last().expect("nonempty"), &lead_inv);
        for (i, c) in b.iter().enumerate() {
            r[shift + i] = field.sub(&r[shift + i], &field.mul(&factor, c));
        }
        r.pop();
        r = trim(field, r);
    }
    r
}

fn poly_gcd(field: &ExtField, a: Vec<Fe>, b: Vec<Fe>) -> Vec<Fe> {
    let (mut a, mut b) = (trim(field, a), trim(field, b));
    while !b.is_empty() {
        let r = poly_rem(field, &a, &b);
        a = b;
        b = r;
    }
    a
}

/// Evaluates the quadratic forms on `(u, v, z)` with `u, v` fixed field
/// elements and `z` free, returning polynomials in `z`.
fn restrict(field: &ExtField, grads: &[[u64; 6]; 3], u: &Fe, v: &Fe) -> [Vec<Fe>; 3] {
    let uu = field.mul(u, u);
    let uv = field.mul(u, v);
    let vv = field.mul(v, v);
    grads.map(|g| {
        let c = |i: usize| field.from_base(g[i]);
        // x^2, xy, xz, y^2, yz, z^2
        let z0 = field.add(
            &field.add(&field.mul(&c(0), &uu), &field.mul(&c(1), &uv)),
            &field.mul(&c(3), &vv),
        );
        let z1 = field.add(&field.mul(&c(2), u), &field.mul(&c(4), v));
        let z2 = c(5);
        trim(field, vec![z0, z1, z2])
    })
}

fn common_zero(field: &ExtField, polys: [Vec<Fe>; 3]) -> bool {
    let [f, g, h] = polys;
    let d = poly_gcd(field, poly_gcd(field, f, g), h);
    // the zero polynomial vanishes for every z; a nonconstant gcd has a root
    // in some extension
    d.len() != 1
}

fn singular_in(field: &ExtField, grads: &[[u64; 6]; 3]) -> Option<String> {
    let one = field.from_base(1);
    let zero = field.zero();
    for idx in 0..field.size() {
        let t = field.element(idx);
        if common_zero(field, restrict(field, grads, &one, &t)) {
            return Some(format!("x != 0, y/x = {t:?} in F_{}^{}", field.p, field.k));
        }
    }
    if field.k == 1 {
        if common_zero(field, restrict(field, grads, &zero, &one)) {
            return Some("x = 0, y != 0".into());
        }
        let at_z = grads.iter().all(|g| g[5] == 0);
        if at_z {
            return Some("(0:0:1)".into());
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Reduction to Weierstrass form.

/// Dense homogeneous polynomial in three variables, degree <= 3.
#[derive(Clone)]
struct Ternary {
    p: u64,
    c: [[[u64; 4]; 4]; 4],
}

impl Ternary {
    fn constant(p: u64, v: u64) -> Self {
        let mut c = [[[0u64; 4]; 4]; 4];
        c[0][0][0] = v % p;
        Ternary { p, c }
    }

    fn times_linear(&self, l: [u64; 3]) -> Self {
        let p = self.p;
        let mut c = [[[0u64; 4]; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    let v = self.c[i][j][k];
                    if v == 0 {
                        continue;
                    }
                    for (var, &lv) in l.iter().enumerate() {
                        let mut e = [i, j, k];
                        e[var] += 1;
                        assert!(e[var] < 4, "degree overflow");
                        let slot = &mut c[e[0]][e[1]][e[2]];
                        *slot = (*slot + mul_mod(v, lv, p)) % p;
                    }
                }
            }
        }
        Ternary { p, c }
    }

    fn add_assign(&mut self, other: &Ternary) {
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    self.c[i][j][k] = (self.c[i][j][k] + other.c[i][j][k]) % self.p;
                }
            }
        }
    }
}

/// `F(M v)` for a 3x3 matrix `M` (rows give x, y, z as linear forms).
fn substitute(cubic: &PlaneCubic, m: [[u64; 3]; 3]) -> Ternary {
    let p = cubic.p;
    let mut out = Ternary::constant(p, 0);
    for (&(i, j, k), &c) in CUBIC_MONOMIALS.iter().zip(&cubic.coeffs) {
        if c == 0 {
            continue;
        }
        let mut term = Ternary::constant(p, c);
        for _ in 0..i {
            term = term.times_linear(m[0]);
        }
        for _ in 0..j {
            term = term.times_linear(m[1]);
        }
        for _ in 0..k {
            term = term.times_linear(m[2]);
        }
        out.add_assign(&term);
    }
    out
}

fn det3(m: &[[u64; 3]; 3], p: u64) -> u64 {
    let t = |a: u64, b: u64| mul_mod(a, b, p);
    let pos = t(m[0][0], t(m[1][1], m[2][2])) + t(m[0][1], t(m[1][2], m[2][0])) + t(m[0][2], t(m[1][0], m[2][1]));
    let neg = t(m[0][2], t(m[1][1], m[2][0])) + t(m[0][0], t(m[1][2], m[2][1])) + t(m[0][1], t(m[1][0], m[2][2]));
    (pos % p + p - neg % p) % p
}

/// How a Weierstrass model was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReductionMethod {
    /// The cubic already was `y^2 z = x^3 + a x z^2 + b z^3` with `P = (0:1:0)`.
    Identity,
    /// Projection from `P` and the invariants of the branch quartic.
    QuarticInvariants,
    /// Exhaustive search for a short Weierstrass curve with the same count.
    CountSearch,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeierstrassReduction {
    pub curve: WeierstrassCurve,
    pub method: ReductionMethod,
    pub cubic_points: u64,
    pub curve_points: u64,
}

/// Largest prime for which the count-matching fallback is attempted.
pub const FALLBACK_PRIME_LIMIT: u64 = 97;

pub fn weierstrass_from_cubic(cubic: &PlaneCubic, point: [u64; 3]) -> Result<WeierstrassCurve> {
    weierstrass_reduction(cubic, point).map(|r| r.curve)
}

/// Short Weierstrass model of a smooth cubic with a rational point, with the
/// point counts of both sides.
pub fn weierstrass_reduction(cubic: &PlaneCubic, point: [u64; 3]) -> Result<WeierstrassReduction> {
    let p = cubic.p;
    let point = point.map(|c| c % p);
    if point == [0, 0, 0] {
        return Err(Error::invalid("(0:0:0) is not a projective point"));
    }
    if cubic.eval(point) != 0 {
        return Err(Error::invalid(format!("{point:?} is not on the cubic")));
    }
    if let Some(desc) = cubic.singular_point() {
        return Err(Error::Singular(format!("{cubic} is singular ({desc})")));
    }
    let cubic_points = cubic.point_count();

    let finish = |curve: WeierstrassCurve, method| WeierstrassReduction {
        curve,
        method,
        cubic_points,
        curve_points: curve_group_order(&curve),
    };

    if let Some(curve) = as_short_weierstrass(cubic, point) {
        let r = finish(curve, ReductionMethod::Identity);
        if r.curve_points == cubic_points {
            return Ok(r);
        }
    }
    if let Some(curve) = quartic_route(cubic, point) {
        let r = finish(curve, ReductionMethod::QuarticInvariants);
        if r.curve_points == cubic_points {
            return Ok(r);
        }
    }
    if p <= FALLBACK_PRIME_LIMIT {
        for a in 0..p {
            for b in 0..p {
                if let Ok(curve) = WeierstrassCurve::new(p, a as i64, b as i64) {
                    if curve_group_order(&curve) == cubic_points {
                        return Ok(finish(curve, ReductionMethod::CountSearch));
                    }
                }
            }
        }
    }
    Err(Error::invariant(format!(
        "no Weierstrass model with {cubic_points} points found for {cubic}"
    )))
}

/// Recognizes `lambda (y^2 z - x^3 - a x z^2 - b z^3)` with `P = (0:1:0)`.
fn as_short_weierstrass(cubic: &PlaneCubic, point: [u64; 3]) -> Option<WeierstrassCurve> {
    let p = cubic.p;
    if point[0] != 0 || point[2] != 0 {
        return None;
    }
    let c = &cubic.coeffs;
    let lambda = c[7];
    let allowed = [0usize, 5, 7, 9];
    if lambda == 0 || (0..10).any(|i| !allowed.contains(&i) && c[i] != 0) {
        return None;
    }
    if (c[0] + lambda) % p != 0 {
        return None;
    }
    let inv = inverse_mod(lambda, p)?;
    let a = mul_mod(p - c[5], inv, p);
    let b = mul_mod(p - c[9], inv, p);
    WeierstrassCurve::new(p, a as i64, b as i64).ok()
}

fn quartic_route(cubic: &PlaneCubic, point: [u64; 3]) -> Option<WeierstrassCurve> {
    let p = cubic.p;
    // columns: e_a, e_b, P with det != 0, so (0:0:1) maps to P
    let basis = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    let mut m = None;
    'outer: for (i, u) in basis.iter().enumerate() {
        for v in basis.iter().skip(i + 1) {
            let cand = [
                [u[0], v[0], point[0]],
                [u[1], v[1], point[1]],
                [u[2], v[2], point[2]],
            ];
            if det3(&cand, p) != 0 {
                m = Some(cand);
                break 'outer;
            }
        }
    }
    let g = substitute(cubic, m?);
    if g.c[0][0][3] != 0 {
        return None;
    }
    // G = z^2 F1(x, y) + z F2(x, y) + F3(x, y)
    let f1 = [g.c[1][0][2], g.c[0][1][2]];
    let f2 = [g.c[2][0][1], g.c[1][1][1], g.c[0][2][1]];
    let f3 = [g.c[3][0][0], g.c[2][1][0], g.c[1][2][0], g.c[0][3][0]];
    // D = F2^2 - 4 F1 F3 as a binary quartic in (x, y), coefficients of x^4 .. y^4
    let mut q = [0u64; 5];
    for (i, &a) in f2.iter().enumerate() {
        for (j, &b) in f2.iter().enumerate() {
            q[i + j] = (q[i + j] + mul_mod(a, b, p)) % p;
        }
    }
    for (i, &a) in f1.iter().enumerate() {
        for (j, &b) in f3.iter().enumerate() {
            let t = mul_mod(4, mul_mod(a, b, p), p);
            q[i + j] = (q[i + j] + p - t) % p;
        }
    }
    let [a, b, c, d, e] = q;
    let m = |x: u64, y: u64| mul_mod(x, y, p);
    let i_inv = (m(12, m(a, e)) + p - m(3, m(b, d)) + m(c, c)) % p;
    let j_pos = (m(72, m(a, m(c, e))) + m(9, m(b, m(c, d)))) % p;
    let j_neg = (m(27, m(a, m(d, d))) + m(27, m(e, m(b, b))) + m(2, m(c, m(c, c)))) % p;
    let j_inv = (j_pos + p - j_neg) % p;
    let ca = (p - m(27, i_inv)) % p;
    let cb = (p - m(27, j_inv)) % p;
    WeierstrassCurve::new(p, ca as i64, cb as i64).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_order_examples() {
        assert_eq!(curve_group_order(&WeierstrassCurve::new(5, 1, 0).unwrap()), 4);
        assert_eq!(curve_group_order(&WeierstrassCurve::new(5, 0, 1).unwrap()), 6);
        assert!(matches!(WeierstrassCurve::new(5, 0, 0), Err(Error::Singular(_))));
    }

    #[test]
    fn rejects_small_and_composite_characteristic() {
        assert!(WeierstrassCurve::new(3, 1, 1).is_err());
        assert!(WeierstrassCurve::new(2, 1, 1).is_err());
        assert!(WeierstrassCurve::new(9, 1, 1).is_err());
        assert!(matches!(
            WeierstrassCurve::new(1_000_003, 1, 1),
            Err(Error::GuardExceeded { .. })
        ));
    }

    #[test]
    fn aut_examples() {
        assert_eq!(aut_group_order(&WeierstrassCurve::new(5, 1, 0).unwrap()), 4);
        assert_eq!(aut_group_order(&WeierstrassCurve::new(7, 0, 1).unwrap()), 6);
        assert_eq!(aut_group_order(&WeierstrassCurve::new(5, 1, 1).unwrap()), 2);
        // p = 7: u^4 = 1 has only +-1
        assert_eq!(aut_group_order(&WeierstrassCurve::new(7, 1, 0).unwrap()), 2);
    }

    #[test]
    fn j_invariant_special_values() {
        assert_eq!(WeierstrassCurve::new(7, 0, 3).unwrap().j_invariant(), 0);
        assert_eq!(WeierstrassCurve::new(11, 2, 0).unwrap().j_invariant(), 1728 % 11);
    }

    #[test]
    fn fermat_cubic_point() {
        let c = PlaneCubic::new(5, [1, 0, 0, 0, 0, 0, 1, 0, 0, 1]).unwrap();
        let pt = cubic_rational_point(&c).unwrap();
        assert_eq!(c.eval(pt), 0);
        // (1 : -1 : 0) is on it as well
        assert_eq!(c.eval([1, 4, 0]), 0);
    }

    #[test]
    fn diagonal_cubic_over_f7_has_points() {
        let c = PlaneCubic::new(7, [1, 0, 0, 0, 0, 0, 2, 0, 0, 3]).unwrap();
        assert!(cubic_rational_point(&c).is_some());
        assert!(c.point_count() > 0);
    }

    #[test]
    fn singular_cubics_rejected() {
        // nodal: y^2 z - x^3 - x^2 z
        assert!(matches!(
            PlaneCubic::new(7, [-1, 0, -1, 0, 0, 0, 0, 1, 0, 0]),
            Err(Error::Singular(_))
        ));
        // xyz: three lines
        assert!(PlaneCubic::new(5, [0, 0, 0, 0, 1, 0, 0, 0, 0, 0]).is_err());
        // the zero form
        assert!(PlaneCubic::new(5, [0; 10]).is_err());
    }

    #[test]
    fn singular_point_only_over_extension() {
        // The norm form of F_{7^3}/F_7 is a product of three lines conjugate
        // over F_{7^3}; its singular points are not defined over F_7 or F_{7^2}.
        let f = ExtField::new(7, 3);
        let mut coeffs = [0i64; 10];
        let norm = |x: u64, y: u64, z: u64| -> u64 {
            let e = [x, y, z];
            let e1 = f.pow(&e, 7);
            let e2 = f.pow(&e1, 7);
            f.mul(&f.mul(&e, &e1), &e2)[0]
        };
        // interpolate the coefficients from values on F_7^3
        let pts: Vec<[u64; 3]> = (0..7u64)
            .flat_map(|x| (0..7u64).flat_map(move |y| (0..7u64).map(move |z| [x, y, z])))
            .collect();
        let mut rows: Vec<Vec<u64>> = pts
            .iter()
            .map(|pt| {
                let mut r: Vec<u64> = CUBIC_MONOMIALS
                    .iter()
                    .map(|&(i, j, k)| {
                        pow_mod(pt[0], i as u64, 7) * pow_mod(pt[1], j as u64, 7) % 7
                            * pow_mod(pt[2], k as u64, 7)
                            % 7
                    })
                    .collect();
                r.push(norm(pt[0], pt[1], pt[2]));
                r
            })
            .collect();
        let mut row = 0;
        for col in 0..10 {
            let Some(piv) = (row..rows.len()).find(|&r| rows[r][col] != 0) else { continue };
            rows.swap(row, piv);
            let inv = inverse_mod(rows[row][col], 7).unwrap();
            for v in rows[row].iter_mut() {
                *v = *v * inv % 7;
            }
            for r in 0..rows.len() {
                if r != row && rows[r][col] != 0 {
                    let factor = rows[r][col];
                    for c in 0..11 {
                        rows[r][c] = (rows[r][c] + 7 * 7 - factor * rows[row][c]) % 7;
                    }
                }
            }
            row += 1;
        }
        for col in 0..10 {
            coeffs[col] = rows[col][10] as i64;
        }
        let c = PlaneCubic::unchecked(7, coeffs, &Guards::default()).unwrap();
        // the norm form vanishes only at (0:0:0) over F_7
        assert_eq!(c.point_count(), 0);
        let desc = c.singular_point().expect("three conjugate lines are singular");
        assert!(desc.contains("^3"), "{desc}");
    }

    #[test]
    fn identity_reduction() {
        let c = PlaneCubic::new(5, [-1, 0, 0, 0, 0, -1, 0, 1, 0, 0]).unwrap();
        let r = weierstrass_reduction(&c, [0, 1, 0]).unwrap();
        assert_eq!(r.curve, WeierstrassCurve::new(5, 1, 0).unwrap());
        assert_eq!(r.method, ReductionMethod::Identity);
    }

    #[test]
    fn fermat_reduction_preserves_count() {
        let c = PlaneCubic::new(5, [1, 0, 0, 0, 0, 0, 1, 0, 0, 1]).unwrap();
        let r = weierstrass_reduction(&c, [1, 4, 0]).unwrap();
        assert_eq!(r.cubic_points, r.curve_points);
        assert_eq!(r.method, ReductionMethod::QuarticInvariants);
    }

    #[test]
    fn reduction_rejects_point_off_curve() {
        let c = PlaneCubic::new(5, [1, 0, 0, 0, 0, 0, 1, 0, 0, 1]).unwrap();
        assert!(weierstrass_from_cubic(&c, [1, 1, 1]).is_err());
        assert!(weierstrass_from_cubic(&c, [0, 0, 0]).is_err());
    }

    #[test]
    fn parse_forms() {
        let e: WeierstrassCurve = "wcurve 5 1 0".parse().unwrap();
        assert_eq!(e.to_string(), "wcurve 5 1 0");
        let c: PlaneCubic = "cubic 5 1 0 0 0 0 0 1 0 0 1".parse().unwrap();
        assert_eq!(c.to_string(), "cubic 5 1 0 0 0 0 0 1 0 0 1");
        assert!("cubic 5 1 0".parse::<PlaneCubic>().is_err());
        assert!("wcurve 5 0 0".parse::<WeierstrassCurve>().is_err());
    }

    #[test]
    fn extension_field_inverse() {
        for k in 1..=3 {
            let f = ExtField::new(5, k);
            for idx in 1..f.size() {
                let a = f.element(idx);
                assert_eq!(f.mul(&a, &f.inv(&a)), f.from_base(1));
            }
        }
    }
}
