//! Real points and `H^1(R, E)` for curves `y^2 = x^3 + ax + b` over `Q`.
//!
//! All sign decisions are exact: coefficients are arbitrary-precision
//! rationals and roots are counted with Sturm sequences.
//!
//! `|H^1(R, E)|` comes from the Kummer sequence for multiplication by 2,
//!
//! ```text
//! 0 -> E(R)/2E(R) -> H^1(R, E[2]) -> H^1(R, E) -> 0
//! ```
//!
//! which is exact on the right because `H^1(R, E)` is killed by 2. The middle
//! term is computed by brute force in [`crate::cohomology`] from the Galois
//! action on `E[2]` (trivial when all three 2-torsion points are real, a swap
//! of the two complex ones otherwise). `E(R)/2E(R)` has order 2 when `E(R)`
//! has two components (`disc > 0`) and order 1 when it is connected, since
//! the identity component is a circle and therefore 2-divisible. With full
//! real 2-torsion this gives exactly `4 / 2 = 2`, a classical sharpening of
//! the bound `|H^1(R, E)| <= 2`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::cohomology::{h1, FiniteGroup, GModule};
use crate::error::{Error, Result};
use crate::guards::Guards;
use crate::modarith::FiniteAbelianGroup;

/// Dense univariate polynomial over `Q`, coefficients in increasing degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPolynomial {
    coeffs: Vec<BigRational>,
}

impl RationalPolynomial {
    /// Trailing zeros are dropped; the zero polynomial has no coefficients.
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RationalPolynomial { coeffs }
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Remainder of Euclidean division by a nonzero `divisor`.
    pub fn rem(&self, divisor: &Self) -> Self {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead = divisor.leading().expect("nonzero").clone();
        let mut r = self.coeffs.clone();
        while r.len() > dd && !r.is_empty() {
            let shift = r.len() - 1 - dd;
            let factor = r.last().expect("nonempty") / &lead;
            for (i, c) in divisor.coeffs.iter().enumerate() {
                r[shift + i] = &r[shift + i] - &factor * c;
            }
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        Self::new(r)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree().unwrap_or(0) == 0
    }

    /// Canonical Sturm chain `f, f', -rem(f, f'), ...`.
    pub fn sturm_chain(&self) -> Vec<Self> {
        let mut chain = vec![self.clone(), self.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let r = chain[n - 2].rem(&chain[n - 1]).neg();
            if r.is_zero() {
                break;
            }
            chain.push(r);
        }
        chain
    }
}

fn sign_changes(signs: impl Iterator<Item = i32>) -> usize {
    let nonzero: Vec<i32> = signs.filter(|&s| s != 0).collect();
    nonzero.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Sign of `p(x)` as `x -> +inf` (or `-inf` when `at_neg_inf`).
fn sign_at_infinity(p: &RationalPolynomial, at_neg_inf: bool) -> i32 {
    match (p.leading(), p.degree()) {
        (None, _) => 0,
        (Some(l), Some(d)) => {
            let s = if l.is_positive() { 1 } else { -1 };
            if at_neg_inf && d % 2 == 1 {
                -s
            } else {
                s
            }
        }
        _ => unreachable!(),
    }
}

/// Number of distinct real roots of a squarefree polynomial of degree >= 1.
pub fn sturm_real_roots(f: &RationalPolynomial) -> Result<usize> {
    match f.degree() {
        None | Some(0) => return Err(Error::invalid("polynomial must have degree >= 1")),
        _ => {}
    }
    if !f.is_squarefree() {
        return Err(Error::invalid("polynomial is not squarefree"));
    }
    let chain = f.sturm_chain();
    let at_neg = sign_changes(chain.iter().map(|p| sign_at_infinity(p, true)));
    let at_pos = sign_changes(chain.iter().map(|p| sign_at_infinity(p, false)));
    Ok(at_neg - at_pos)
}

/// `y^2 = x^3 + ax + b` with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalCurve {
    a: BigRational,
    b: BigRational,
}

impl RationalCurve {
    pub fn new(a: BigRational, b: BigRational) -> Result<Self> {
        let c = RationalCurve { a, b };
        if c.discriminant().is_zero() {
            return Err(Error::Singular(format!("{c} has zero discriminant")));
        }
        Ok(c)
    }

    pub fn from_integers(a: i64, b: i64) -> Result<Self> {
        Self::new(BigRational::from_integer(a.into()), BigRational::from_integer(b.into()))
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    /// `-16 (4a^3 + 27b^2)`.
    pub fn discriminant(&self) -> BigRational {
        let four = BigRational::from_integer(4.into());
        let tw7 = BigRational::from_integer(27.into());
        let inner = four * &self.a * &self.a * &self.a + tw7 * &self.b * &self.b;
        BigRational::from_integer((-16).into()) * inner
    }

    /// `x^3 + ax + b`.
    pub fn cubic(&self) -> RationalPolynomial {
        RationalPolynomial::new(vec![
            self.b.clone(),
            self.a.clone(),
            BigRational::zero(),
            BigRational::one(),
        ])
    }
}

impl fmt::Display for RationalCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rcurve a={} b={}", fmt_rational(&self.a), fmt_rational(&self.b))
    }
}

/// Always `num/den`, including integers.
pub fn fmt_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Accepts `num/den` or a bare integer.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num
        .trim()
        .parse()
        .map_err(|_| Error::parse(format!("bad numerator in {s:?}")))?;
    let den: BigInt = den
        .trim()
        .parse()
        .map_err(|_| Error::parse(format!("bad denominator in {s:?}")))?;
    if den.is_zero() {
        return Err(Error::parse(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(num, den))
}

/// Parses `rcurve a=<q> b=<q>`.
impl FromStr for RationalCurve {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut a = None;
        let mut b = None;
        for tok in s.split_whitespace() {
            if tok == "rcurve" {
                continue;
            }
            match tok.split_once('=') {
                Some(("a", v)) => a = Some(parse_rational(v)?),
                Some(("b", v)) => b = Some(parse_rational(v)?),
                _ => return Err(Error::parse(format!("unexpected token {tok:?}"))),
            }
        }
        RationalCurve::new(
            a.ok_or_else(|| Error::parse("missing a="))?,
            b.ok_or_else(|| Error::parse("missing b="))?,
        )
    }
}

/// Structure of the real 2-torsion subgroup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TwoTorsion {
    /// `(Z/2)^2`: three real roots.
    Full,
    /// `Z/2`: one real root.
    Half,
}

pub fn real_two_torsion(curve: &RationalCurve) -> Result<TwoTorsion> {
    match sturm_real_roots(&curve.cubic())? {
        3 => Ok(TwoTorsion::Full),
        1 => Ok(TwoTorsion::Half),
        k => Err(Error::invariant(format!("monic real cubic with {k} real roots"))),
    }
}

/// The complex-conjugation module `E[2]` for the given 2-torsion type.
///
/// Basis: two of the nonzero 2-torsion points. In the `Half` case these are
/// the complex conjugate pair, which conjugation swaps.
pub fn two_torsion_module(kind: TwoTorsion) -> Result<GModule> {
    let g = FiniteGroup::cyclic(2)?;
    let m = FiniteAbelianGroup::new(vec![2, 2])?;
    let id = vec![vec![1, 0], vec![0, 1]];
    let sigma = match kind {
        TwoTorsion::Full => id.clone(),
        TwoTorsion::Half => vec![vec![0, 1], vec![1, 0]],
    };
    GModule::new(g, m, vec![id, sigma], &Guards::default())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RealH1 {
    pub two_torsion: TwoTorsion,
    pub h1_two_torsion: usize,
    pub real_components: usize,
    pub size: usize,
}

pub fn h1_real(curve: &RationalCurve) -> Result<RealH1> {
    let kind = real_two_torsion(curve)?;
    let h1_e2 = h1(&two_torsion_module(kind)?)?.size();
    let components = if curve.discriminant().is_positive() { 2 } else { 1 };
    if h1_e2 % components != 0 {
        return Err(Error::invariant("E(R)/2E(R) does not embed in H^1(R, E[2])"));
    }
    Ok(RealH1 {
        two_torsion: kind,
        h1_two_torsion: h1_e2,
        real_components: components,
        size: h1_e2 / components,
    })
}

/// `|H^1(R, E)|`, always 1 or 2.
pub fn h1_real_size(curve: &RationalCurve) -> Result<usize> {
    h1_real(curve).map(|r| r.size)
}
