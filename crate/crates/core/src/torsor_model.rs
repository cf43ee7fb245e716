//! Cyclic models of a subgroup of the Weil-Chatelet group.
//!
//! A [`WCModel`] stands for the cyclic subgroup `<Y>` of `H^1(k, E)` of order
//! `n`, together with the multipliers by which `Aut_k(E)` acts on it. Two
//! classes are isomorphic as curves when they lie in one multiplier orbit,
//! and derived equivalent when `x = phi * d * y` for a multiplier `phi` and
//! an integer `d` prime to the order of `y`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::modarith::{additive_order, gcd, mul_mod, reduce, unit_group, MAX_MODULUS};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WCModel {
    n: u64,
    aut_multipliers: Vec<u64>,
}

impl WCModel {
    /// `aut` must be a subgroup of `(Z/n)^x` containing 1; it is stored
    /// reduced, deduplicated and sorted.
    pub fn new(n: u64, aut: &[i64]) -> Result<Self> {
        if n == 0 || n > MAX_MODULUS {
            return Err(Error::invalid(format!("model order {n} out of range")));
        }
        let units: BTreeSet<u64> = unit_group(n)?.into_iter().collect();
        let set: BTreeSet<u64> = aut.iter().map(|&a| reduce(a, n)).collect();
        let one = 1 % n;
        if !set.contains(&one) {
            return Err(Error::invalid("automorphism multipliers must contain 1"));
        }
        for &a in &set {
            if !units.contains(&a) {
                return Err(Error::invalid(format!("multiplier {a} is not a unit mod {n}")));
            }
        }
        for &a in &set {
            for &b in &set {
                if !set.contains(&mul_mod(a, b, n)) {
                    return Err(Error::invalid(format!(
                        "multipliers not closed: {a}*{b} mod {n}"
                    )));
                }
            }
        }
        Ok(WCModel {
            n,
            aut_multipliers: set.into_iter().collect(),
        })
    }

    /// The generic case `Aut(E) = {+-1}`.
    pub fn generic(n: u64) -> Result<Self> {
        Self::new(n, &[1, -1])
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn aut_multipliers(&self) -> &[u64] {
        &self.aut_multipliers
    }

    pub fn class(&self, value: i64) -> TorsorClass {
        TorsorClass {
            model: self.clone(),
            value: reduce(value, self.n),
        }
    }

    /// All classes `0..n`.
    pub fn classes(&self) -> impl Iterator<Item = TorsorClass> + '_ {
        (0..self.n).map(move |v| TorsorClass {
            model: self.clone(),
            value: v,
        })
    }
}

impl fmt::Display for WCModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let aut: Vec<String> = self.aut_multipliers.iter().map(|a| a.to_string()).collect();
        write!(f, "wc n={} aut={}", self.n, aut.join(","))
    }
}

/// Parses `wc n=<n> aut=<a1,a2,...>`; the leading `wc` is optional and
/// `aut` defaults to `{+-1}`.
impl FromStr for WCModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut n = None;
        let mut aut = None;
        for tok in s.split_whitespace() {
            if tok == "wc" {
                continue;
            }
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| Error::parse(format!("expected key=value, got {tok:?}")))?;
            match k {
                "n" => n = Some(parse_u64(v)?),
                "aut" => aut = Some(parse_i64_list(v)?),
                _ => return Err(Error::parse(format!("unknown key {k:?}"))),
            }
        }
        let n = n.ok_or_else(|| Error::parse("missing n="))?;
        match aut {
            Some(a) => WCModel::new(n, &a),
            None => WCModel::generic(n),
        }
    }
}

pub(crate) fn parse_u64(v: &str) -> Result<u64> {
    v.trim()
        .parse()
        .map_err(|_| Error::parse(format!("not a nonnegative integer: {v:?}")))
}

pub(crate) fn parse_i64_list(v: &str) -> Result<Vec<i64>> {
    if v.trim().is_empty() {
        return Ok(Vec::new());
    }
    v.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::parse(format!("not an integer: {t:?}")))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TorsorClass {
    model: WCModel,
    value: u64,
}

impl TorsorClass {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn model(&self) -> &WCModel {
        &self.model
    }

    /// Period of the torsor: its order in the cyclic group.
    pub fn order(&self) -> u64 {
        additive_order(self.value, self.model.n)
    }
}

fn same_model(x: &TorsorClass, y: &TorsorClass) -> Result<()> {
    if x.model != y.model {
        Err(Error::ModelMismatch(format!("{} vs {}", x.model, y.model)))
    } else {
        Ok(())
    }
}

/// Isomorphism as curves: `x = phi * y` for some automorphism multiplier.
pub fn iso_related(x: &TorsorClass, y: &TorsorClass) -> Result<bool> {
    same_model(x, y)?;
    Ok(iso_witness(x, y).is_some())
}

pub fn iso_witness(x: &TorsorClass, y: &TorsorClass) -> Option<u64> {
    let n = x.model.n;
    x.model
        .aut_multipliers
        .iter()
        .copied()
        .find(|&phi| mul_mod(phi, y.value, n) == x.value)
}

/// Derived equivalence: `x = phi * d * y` with `gcd(d, ord(y)) = 1`.
pub fn derived_related(x: &TorsorClass, y: &TorsorClass) -> Result<bool> {
    same_model(x, y)?;
    Ok(derived_witness(x, y).is_some())
}

/// Smallest witness `(phi, d)` with `0 <= d < ord(y)`.
pub fn derived_witness(x: &TorsorClass, y: &TorsorClass) -> Option<(u64, u64)> {
    let n = x.model.n;
    let ord = y.order();
    for &phi in &x.model.aut_multipliers {
        for d in 0..ord {
            if gcd(d, ord) != 1 {
                continue;
            }
            if mul_mod(phi, mul_mod(d, y.value, n), n) == x.value {
                return Some((phi, d));
            }
        }
    }
    None
}

/// `J_y(1, d)`, the torsor of degree-`d` line bundles on `y`, which is `d*y`.
pub fn moduli_label(y: &TorsorClass, d: u64) -> TorsorClass {
    let n = y.model.n;
    TorsorClass {
        model: y.model.clone(),
        value: mul_mod(d % n, y.value, n),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderSummary {
    pub order: u64,
    pub elements: u64,
    pub iso_classes: u64,
    pub derived_classes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub n: u64,
    pub aut_multipliers: Vec<u64>,
    /// Multiplier orbits, each sorted, listed by minimal representative.
    pub iso_classes: Vec<Vec<u64>>,
    pub derived_classes: Vec<Vec<u64>>,
    pub by_order: Vec<OrderSummary>,
    pub generator_iso_classes: u64,
    pub generator_derived_classes: u64,
    /// Every iso class lies inside a derived class.
    pub iso_refines_derived: bool,
    /// Derived classes coincide with "generates the same cyclic subgroup".
    pub derived_matches_cyclic_subgroups: bool,
}

/// Partitions `Z/n` into isomorphism and derived-equivalence classes.
pub fn classify(model: &WCModel) -> Classification {
    let n = model.n;
    let iso_classes = partition(n, |x| {
        model
            .aut_multipliers
            .iter()
            .map(|&phi| mul_mod(phi, x, n))
            .collect()
    });
    let derived_classes = orbits(n, |x| {
        let ord = additive_order(x, n);
        let mut out = BTreeSet::new();
        for &phi in &model.aut_multipliers {
            for d in (0..ord).filter(|&d| gcd(d, ord) == 1) {
                out.insert(mul_mod(phi, mul_mod(d, x, n), n));
            }
        }
        out
    });
    let cyclic_classes = orbits(n, |x| {
        let mut out = BTreeSet::new();
        let mut cur = 0;
        loop {
            if !out.insert(cur) {
                break;
            }
            cur = (cur + x) % n;
        }
        // elements generating the same subgroup as x
        out.into_iter()
            .filter(|&y| additive_order(y, n) == additive_order(x, n))
            .collect()
    });

    let class_of = |classes: &[Vec<u64>]| {
        let mut map = vec![0usize; n as usize];
        for (i, c) in classes.iter().enumerate() {
            for &v in c {
                map[v as usize] = i;
            }
        }
        map
    };
    let derived_of = class_of(&derived_classes);
    let iso_refines_derived = iso_classes
        .iter()
        .all(|c| c.iter().all(|&v| derived_of[v as usize] == derived_of[c[0] as usize]));

    let mut by_order: BTreeMap<u64, OrderSummary> = BTreeMap::new();
    for x in 0..n {
        let o = additive_order(x, n);
        by_order
            .entry(o)
            .or_insert(OrderSummary {
                order: o,
                elements: 0,
                iso_classes: 0,
                derived_classes: 0,
            })
            .elements += 1;
    }
    for c in &iso_classes {
        by_order.get_mut(&additive_order(c[0], n)).expect("order").iso_classes += 1;
    }
    for c in &derived_classes {
        by_order.get_mut(&additive_order(c[0], n)).expect("order").derived_classes += 1;
    }
    let generators = by_order.get(&n).cloned();

    Classification {
        n,
        aut_multipliers: model.aut_multipliers.clone(),
        derived_matches_cyclic_subgroups: derived_classes == cyclic_classes,
        iso_classes,
        derived_classes,
        generator_iso_classes: generators.as_ref().map_or(0, |s| s.iso_classes),
        generator_derived_classes: generators.as_ref().map_or(0, |s| s.derived_classes),
        by_order: by_order.into_values().collect(),
        iso_refines_derived,
    }
}

/// Orbits of the relation generated by `neighbours`, sorted by minimal element.
/// For relations where the image of `x` is already its whole class (both
/// derived and cyclic classes are the generators of `<x>`).
fn orbits(n: u64, class_of: impl Fn(u64) -> BTreeSet<u64>) -> Vec<Vec<u64>> {
    let mut seen = vec![false; n as usize];
    let mut out = Vec::new();
    for x in 0..n {
        if seen[x as usize] {
            continue;
        }
        let class: Vec<u64> = class_of(x).into_iter().collect();
        for &v in &class {
            debug_assert!(!seen[v as usize]);
            seen[v as usize] = true;
        }
        out.push(class);
    }
    out
}

fn partition(n: u64, neighbours: impl Fn(u64) -> BTreeSet<u64>) -> Vec<Vec<u64>> {
    let mut seen = vec![false; n as usize];
    let mut out = Vec::new();
    for x in 0..n {
        if seen[x as usize] {
            continue;
        }
        let mut class = BTreeSet::new();
        let mut stack = vec![x];
        while let Some(v) = stack.pop() {
            if !class.insert(v) {
                continue;
            }
            seen[v as usize] = true;
            stack.extend(neighbours(v).into_iter().filter(|w| !class.contains(w)));
        }
        out.push(class.into_iter().collect());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iso_examples() {
        let m = WCModel::new(5, &[1, 4]).unwrap();
        assert!(iso_related(&m.class(1), &m.class(4)).unwrap());
        assert!(!iso_related(&m.class(1), &m.class(2)).unwrap());
        for x in m.classes() {
            assert!(iso_related(&x, &x).unwrap());
        }
    }

    #[test]
    fn derived_examples() {
        let m5 = WCModel::new(5, &[1, 4]).unwrap();
        assert_eq!(derived_witness(&m5.class(2), &m5.class(1)), Some((1, 2)));
        let m6 = WCModel::new(6, &[1, 5]).unwrap();
        assert!(!derived_related(&m6.class(2), &m6.class(1)).unwrap());
        assert!(derived_related(&m6.class(0), &m6.class(0)).unwrap());
        assert!(derived_related(&m5.class(0), &m5.class(0)).unwrap());
    }

    #[test]
    fn model_mismatch_is_an_error() {
        let a = WCModel::new(5, &[1, 4]).unwrap();
        let b = WCModel::new(5, &[1]).unwrap();
        assert!(matches!(
            derived_related(&a.class(1), &b.class(1)),
            Err(Error::ModelMismatch(_))
        ));
        assert!(iso_related(&a.class(1), &b.class(1)).is_err());
    }

    #[test]
    fn classify_examples() {
        let c = classify(&WCModel::new(5, &[1, 4]).unwrap());
        assert_eq!(c.iso_classes, vec![vec![0], vec![1, 4], vec![2, 3]]);
        assert_eq!(c.derived_classes, vec![vec![0], vec![1, 2, 3, 4]]);
        assert_eq!(c.generator_iso_classes, 2);
        assert_eq!(c.generator_derived_classes, 1);
        assert!(c.iso_refines_derived && c.derived_matches_cyclic_subgroups);

        let c = classify(&WCModel::new(7, &[1, 6]).unwrap());
        assert_eq!(c.iso_classes.len(), 4);
        assert_eq!(c.derived_classes.len(), 2);

        let c = classify(&WCModel::new(1, &[0]).unwrap());
        assert_eq!(c.iso_classes.len(), 1);
        assert_eq!(c.derived_classes.len(), 1);
    }

    #[test]
    fn moduli_label_examples() {
        let m5 = WCModel::generic(5).unwrap();
        assert_eq!(moduli_label(&m5.class(1), 3).value(), 3);
        assert_eq!(moduli_label(&m5.class(4), 0).value(), 0);
        assert_eq!(moduli_label(&m5.class(4), 1).value(), 4);
        let m6 = WCModel::generic(6).unwrap();
        assert_eq!(moduli_label(&m6.class(2), 4).value(), 2);
    }

    #[test]
    fn model_validation() {
        assert!(WCModel::new(5, &[2]).is_err());
        assert!(WCModel::new(6, &[1, 2]).is_err());
        assert!(WCModel::new(5, &[1, 2]).is_err()); // not closed: 2*2 = 4
        assert!(WCModel::new(0, &[1]).is_err());
        assert_eq!(WCModel::new(5, &[1, -1]).unwrap().aut_multipliers(), &[1, 4]);
    }

    #[test]
    fn parse_model() {
        let m: WCModel = "wc n=5 aut=1,4".parse().unwrap();
        assert_eq!(m, WCModel::new(5, &[1, 4]).unwrap());
        assert_eq!(m.to_string(), "wc n=5 aut=1,4");
        let g: WCModel = "n=7".parse().unwrap();
        assert_eq!(g.aut_multipliers(), &[1, 6]);
        assert!("wc n=5 foo=1".parse::<WCModel>().is_err());
        assert!("wc aut=1".parse::<WCModel>().is_err());
    }
}
