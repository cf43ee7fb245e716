//! Split Brauer groups of an elliptic fibration with a section.
//!
//! `Br(J_eta)` is modelled as `Z/n + Br(k)` with `Z/n` standing for a cyclic
//! piece of `H^1(k, J_eta)`, and `Br(S)` as a subgroup of `Br(k)`. The groups
//! are opaque: only the group law and the splitting enter.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::modarith::{additive_order, gcd, lcm, mul_mod, reduce, FiniteAbelianGroup, MAX_MODULUS};
use crate::torsor_model::{parse_i64_list, parse_u64};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitBrauerModel {
    n: u64,
    brauer: FiniteAbelianGroup,
    base: BTreeSet<Vec<u64>>,
    base_generators: Vec<Vec<u64>>,
}

impl SplitBrauerModel {
    /// `base_generators` span the subgroup standing for `Br(S)`.
    pub fn new(n: u64, brauer: FiniteAbelianGroup, base_generators: &[Vec<i64>]) -> Result<Self> {
        if n == 0 || n > MAX_MODULUS {
            return Err(Error::invalid(format!("torsor order {n} out of range")));
        }
        let gens = base_generators
            .iter()
            .map(|g| brauer.element(g))
            .collect::<Result<Vec<_>>>()?;
        let base = brauer.span(&gens);
        n.checked_mul(brauer.order())
            .ok_or_else(|| Error::invalid("model order overflows u64"))?;
        Ok(SplitBrauerModel {
            n,
            brauer,
            base,
            base_generators: gens,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn brauer(&self) -> &FiniteAbelianGroup {
        &self.brauer
    }

    /// Elements of the base subgroup, sorted.
    pub fn base(&self) -> &BTreeSet<Vec<u64>> {
        &self.base
    }

    pub fn base_generators(&self) -> &[Vec<u64>] {
        &self.base_generators
    }

    pub fn class(&self, x: i64, gamma: &[i64]) -> Result<BrauerClass> {
        Ok(BrauerClass {
            x: reduce(x, self.n),
            gamma: self.brauer.element(gamma)?,
        })
    }

    /// All `n * |Br|` classes in lexicographic order.
    pub fn classes(&self) -> impl Iterator<Item = BrauerClass> + '_ {
        (0..self.n).flat_map(move |x| {
            self.brauer
                .elements()
                .map(move |gamma| BrauerClass { x, gamma })
        })
    }

    fn check(&self, c: &BrauerClass) -> Result<()> {
        if c.x >= self.n || !self.brauer.contains(&c.gamma) {
            return Err(Error::ModelMismatch(format!("class {c} does not belong to {self}")));
        }
        Ok(())
    }

    /// `Z/n + Br(k)` as one finite abelian group, torsor coordinate first.
    pub fn total_group(&self) -> FiniteAbelianGroup {
        let mut orders = vec![self.n];
        orders.extend_from_slice(self.brauer.cyclic_orders());
        FiniteAbelianGroup::new(orders).expect("orders already validated")
    }
}

impl fmt::Display for SplitBrauerModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let br: Vec<String> = self
            .brauer
            .cyclic_orders()
            .iter()
            .map(|o| o.to_string())
            .collect();
        let brs: Vec<String> = self
            .base_generators
            .iter()
            .map(|g| g.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "brmodel n={} br={} brs={}", self.n, br.join(","), brs.join(";"))
    }
}

/// Parses `brmodel n=<n> br=<o1,o2,...> brs=<g1;g2;...>` where each generator
/// is a comma-separated coordinate list. `br` and `brs` may be empty or
/// omitted (trivial group, trivial subgroup).
impl FromStr for SplitBrauerModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut n = None;
        let mut br = Vec::new();
        let mut brs = Vec::new();
        for tok in s.split_whitespace() {
            if tok == "brmodel" {
                continue;
            }
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| Error::parse(format!("expected key=value, got {tok:?}")))?;
            match k {
                "n" => n = Some(parse_u64(v)?),
                "br" => {
                    br = parse_i64_list(v)?
                        .into_iter()
                        .map(|o| {
                            u64::try_from(o)
                                .map_err(|_| Error::parse(format!("negative order {o}")))
                        })
                        .collect::<Result<_>>()?
                }
                "brs" => {
                    brs = v
                        .split(';')
                        .filter(|g| !g.trim().is_empty())
                        .map(parse_i64_list)
                        .collect::<Result<_>>()?
                }
                _ => return Err(Error::parse(format!("unknown key {k:?}"))),
            }
        }
        let n = n.ok_or_else(|| Error::parse("missing n="))?;
        SplitBrauerModel::new(n, FiniteAbelianGroup::new(br)?, &brs)
    }
}

/// `(x, gamma)` with `x` in `Z/n` and `gamma` in `Br(k)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct BrauerClass {
    pub x: u64,
    pub gamma: Vec<u64>,
}

impl fmt::Display for BrauerClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g: Vec<String> = self.gamma.iter().map(|c| c.to_string()).collect();
        write!(f, "({};{})", self.x, g.join(","))
    }
}

/// Integer `a` prime to `ord(x)` with `a x = y` and `a gamma - epsilon` in
/// the base subgroup. Only `a mod lcm(n, exp Br(k))` matters, so the search
/// runs over `1..=lcm` and returns the smallest witness.
pub fn fiber_derived_witness(
    alpha: &BrauerClass,
    beta: &BrauerClass,
    model: &SplitBrauerModel,
) -> Result<Option<u64>> {
    model.check(alpha)?;
    model.check(beta)?;
    let n = model.n;
    let ord = additive_order(alpha.x, n);
    let period = lcm(n, model.brauer.exponent());
    let br = &model.brauer;
    for a in 1..=period {
        if gcd(a, ord) != 1 || mul_mod(a, alpha.x, n) != beta.x {
            continue;
        }
        let diff = br.sub(&br.scale(a as i64, &alpha.gamma), &beta.gamma);
        if model.base.contains(&diff) {
            return Ok(Some(a));
        }
    }
    Ok(None)
}

pub fn fiber_derived_related(
    alpha: &BrauerClass,
    beta: &BrauerClass,
    model: &SplitBrauerModel,
) -> Result<bool> {
    Ok(fiber_derived_witness(alpha, beta, model)?.is_some())
}

/// Related in both directions.
pub fn fiber_derived_equivalent(
    alpha: &BrauerClass,
    beta: &BrauerClass,
    model: &SplitBrauerModel,
) -> Result<bool> {
    Ok(fiber_derived_related(alpha, beta, model)? && fiber_derived_related(beta, alpha, model)?)
}

/// The subgroup `<c> + Br(S)` of `Z/n + Br(k)`, the preimage of the cyclic
/// subgroup generated by the image of `c` in the quotient.
pub fn cyclic_preimage(c: &BrauerClass, model: &SplitBrauerModel) -> Result<BTreeSet<Vec<u64>>> {
    model.check(c)?;
    let total = model.total_group();
    let lift = |x: u64, g: &[u64]| {
        let mut v = vec![x];
        v.extend_from_slice(g);
        v
    };
    let mut gens = vec![lift(c.x, &c.gamma)];
    gens.extend(model.base_generators.iter().map(|g| lift(0, g)));
    Ok(total.span(&gens))
}

/// Images in `(Z/n + Br(k)) / Br(S)` generate the same cyclic subgroup.
pub fn same_cyclic_in_quotient(
    alpha: &BrauerClass,
    beta: &BrauerClass,
    model: &SplitBrauerModel,
) -> Result<bool> {
    Ok(cyclic_preimage(alpha, model)? == cyclic_preimage(beta, model)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torsor_model::{derived_related, WCModel};

    fn model(n: u64, br: &[u64], brs: &[Vec<i64>]) -> SplitBrauerModel {
        SplitBrauerModel::new(n, FiniteAbelianGroup::new(br.to_vec()).unwrap(), brs).unwrap()
    }

    #[test]
    fn vanishing_brauer_part_matches_torsor_relation() {
        for n in 1..=12 {
            let m = model(n, &[2], &[]);
            let wc = WCModel::new(n, &[1]).unwrap();
            for x in 0..n as i64 {
                for y in 0..n as i64 {
                    let a = m.class(x, &[0]).unwrap();
                    let b = m.class(y, &[0]).unwrap();
                    assert_eq!(
                        fiber_derived_related(&a, &b, &m).unwrap(),
                        derived_related(&wc.class(y), &wc.class(x)).unwrap(),
                        "n={n} x={x} y={y}"
                    );
                }
            }
        }
    }

    #[test]
    fn full_base_ignores_brauer_coordinates() {
        let m = model(6, &[2, 2], &[vec![1, 0], vec![0, 1]]);
        for a in m.classes() {
            for b in m.classes() {
                let plain_a = BrauerClass { x: a.x, gamma: vec![0, 0] };
                let plain_b = BrauerClass { x: b.x, gamma: vec![0, 0] };
                assert_eq!(
                    fiber_derived_related(&a, &b, &m).unwrap(),
                    fiber_derived_related(&plain_a, &plain_b, &m).unwrap()
                );
            }
        }
    }

    #[test]
    fn witness_may_exceed_torsor_order() {
        // a = 2 fails on the Brauer side, a = 5 works on both.
        let m = model(3, &[2], &[]);
        let a = m.class(1, &[1]).unwrap();
        let b = m.class(2, &[1]).unwrap();
        assert_eq!(fiber_derived_witness(&a, &b, &m).unwrap(), Some(5));
        assert!(same_cyclic_in_quotient(&a, &b, &m).unwrap());
    }

    #[test]
    fn quotient_examples() {
        let m = model(5, &[2], &[]);
        let a = m.class(1, &[0]).unwrap();
        assert!(same_cyclic_in_quotient(&a, &a, &m).unwrap());
        let b = m.class(2, &[0]).unwrap();
        assert!(same_cyclic_in_quotient(&a, &b, &m).unwrap());

        let m = model(2, &[2], &[]);
        let a = m.class(1, &[0]).unwrap();
        let b = m.class(1, &[1]).unwrap();
        assert!(!same_cyclic_in_quotient(&a, &b, &m).unwrap());
    }

    #[test]
    fn mismatch_is_reported() {
        let m = model(3, &[2], &[]);
        let bad = BrauerClass { x: 4, gamma: vec![0] };
        let ok = m.class(1, &[0]).unwrap();
        assert!(matches!(
            fiber_derived_related(&bad, &ok, &m),
            Err(Error::ModelMismatch(_))
        ));
    }

    #[test]
    fn parse_round_trip() {
        let m: SplitBrauerModel = "brmodel n=4 br=2,4 brs=1,2".parse().unwrap();
        assert_eq!(m.base().len(), 2);
        assert_eq!(m.to_string(), "brmodel n=4 br=2,4 brs=1,2");
        let again: SplitBrauerModel = m.to_string().parse().unwrap();
        assert_eq!(again, m);
        let t: SplitBrauerModel = "n=3".parse().unwrap();
        assert_eq!(t.brauer().order(), 1);
        assert!("n=3 br=2 brs=1;x".parse::<SplitBrauerModel>().is_err());
    }
}
