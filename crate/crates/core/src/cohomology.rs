//! Brute-force first cohomology of finite groups with coefficients in finite
//! abelian groups.
//!
//! Conventions: cocycles are normalized (`rho(e) = 0`) and satisfy
//! `rho(gh) = g.rho(h) + rho(g)`. A cocycle written as `alpha(g) = g.p - p`
//! for a base point `p` is a coboundary; the twisted action attached to a
//! cocycle is `g * y = g.y + alpha(g)`.
//!
//! # Divisor model for `Pic^d`
//!
//! [`picd_cocycle`] models the torsor of degree-`d` line-bundle classes on a
//! twisted torsor `Y`. Points of `Y` are module elements carrying the twisted
//! action. A degree-`d` divisor is a multiset of `d` points, and its linear
//! equivalence class is the sum of its points; this is the Abel-Jacobi map
//! for genus-1 curves, and it is the only geometric input of the model.
//! Galois acts on a divisor pointwise, so on classes
//!
//! ```text
//! g * [y_1 + ... + y_d] = sum (g.y_i + alpha(g)) = g.(sum y_i) + d.alpha(g)
//! ```
//!
//! The routine does not use this formula. It enumerates divisors, checks that
//! the induced map on classes is well defined and of twisted-translation
//! form, and reads the cocycle off the image of the class of `0`. For
//! `d = 0` the divisors are the differences `y_1 - y_2`, since the only
//! effective divisor of degree zero is empty.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::guards::Guards;
use crate::modarith::{unit_group, FiniteAbelianGroup};

/// A finite group given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    size: usize,
    table: Vec<usize>,
    identity: usize,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    /// Builds a group from a full multiplication table, checking the group axioms.
    pub fn from_table(rows: Vec<Vec<usize>>) -> Result<Self> {
        let size = rows.len();
        if size == 0 {
            return Err(Error::invalid("group table is empty"));
        }
        if rows.iter().any(|r| r.len() != size) {
            return Err(Error::invalid("group table is not square"));
        }
        if rows.iter().flatten().any(|&v| v >= size) {
            return Err(Error::invalid("group table entry out of range"));
        }
        let table: Vec<usize> = rows.into_iter().flatten().collect();
        let mul = |a: usize, b: usize| table[a * size + b];

        let identity = (0..size)
            .find(|&e| (0..size).all(|g| mul(e, g) == g && mul(g, e) == g))
            .ok_or_else(|| Error::invalid("group table has no identity"))?;

        for a in 0..size {
            for b in 0..size {
                for c in 0..size {
                    if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                        return Err(Error::invalid(format!(
                            "group table is not associative at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }

        let mut inverses = Vec::with_capacity(size);
        for g in 0..size {
            let inv = (0..size)
                .find(|&h| mul(g, h) == identity && mul(h, g) == identity)
                .ok_or_else(|| Error::invalid(format!("element {g} has no inverse")))?;
            inverses.push(inv);
        }

        Ok(FiniteGroup {
            size,
            table,
            identity,
            inverses,
        })
    }

    /// `Z/n` with elements `0..n` and identity 0.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("cyclic group order must be positive"));
        }
        Self::from_table(
            (0..n)
                .map(|a| (0..n).map(|b| (a + b) % n).collect())
                .collect(),
        )
    }

    pub fn trivial() -> Self {
        Self::cyclic(1).expect("trivial group")
    }

    /// Direct product; element `(a, b)` has index `a * |H| + b`.
    pub fn product(&self, other: &FiniteGroup) -> Result<Self> {
        let (m, n) = (self.size, other.size);
        let rows = (0..m * n)
            .map(|x| {
                (0..m * n)
                    .map(|y| self.mul(x / n, y / n) * n + other.mul(x % n, y % n))
                    .collect()
            })
            .collect();
        Self::from_table(rows)
    }

    /// Symmetric group on `k` letters; permutations in lexicographic order,
    /// composed as `(s t)(i) = s(t(i))`.
    pub fn symmetric(k: usize) -> Result<Self> {
        if k == 0 || k > 5 {
            return Err(Error::invalid("symmetric group supported for 1 <= k <= 5"));
        }
        let mut perms: Vec<Vec<usize>> = Vec::new();
        permutations(&mut (0..k).collect(), 0, &mut perms);
        perms.sort();
        let index = |p: &Vec<usize>| perms.binary_search(p).expect("closed");
        let rows = perms
            .iter()
            .map(|s| {
                perms
                    .iter()
                    .map(|t| index(&(0..k).map(|i| s[t[i]]).collect()))
                    .collect()
            })
            .collect();
        Self::from_table(rows)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.size + b]
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverses[g]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.size).map(|r| r.to_vec()).collect()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.size).all(|a| (0..self.size).all(|b| self.mul(a, b) == self.mul(b, a)))
    }
}

fn permutations(cur: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == cur.len() {
        out.push(cur.clone());
        return;
    }
    for i in k..cur.len() {
        cur.swap(k, i);
        permutations(cur, k + 1, out);
        cur.swap(k, i);
    }
}

/// A finite abelian group with an action of a finite group by automorphisms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GModule {
    group: FiniteGroup,
    module: FiniteAbelianGroup,
    /// Per group element, the images of the standard basis vectors.
    images: Vec<Vec<Vec<u64>>>,
    /// Per group element, the induced permutation of module indices.
    act: Vec<Vec<usize>>,
    add: Vec<usize>,
    neg: Vec<usize>,
}

impl GModule {
    /// Builds a G-module from basis images for every group element.
    pub fn new(
        group: FiniteGroup,
        module: FiniteAbelianGroup,
        images: Vec<Vec<Vec<u64>>>,
        guards: &Guards,
    ) -> Result<Self> {
        guards.check("module order", module.order() as u128, guards.module_size())?;
        guards.check("group order", group.size() as u128, guards.group_size())?;
        if images.len() != group.size() {
            return Err(Error::invalid(format!(
                "need an action for each of the {} group elements",
                group.size()
            )));
        }
        let k = module.rank();
        for (g, imgs) in images.iter().enumerate() {
            if imgs.len() != k {
                return Err(Error::invalid(format!(
                    "action of {g} must give {k} basis images"
                )));
            }
            for (i, img) in imgs.iter().enumerate() {
                module.validate(img)?;
                let n = module.cyclic_orders()[i];
                if module.scale(n as i64, img) != module.zero() {
                    return Err(Error::invalid(format!(
                        "action of {g}: image of basis vector {i} is not killed by {n}"
                    )));
                }
            }
        }

        let size = module.order() as usize;
        let elems: Vec<Vec<u64>> = module.elements().collect();
        let mut add = vec![0; size * size];
        for (i, x) in elems.iter().enumerate() {
            for (j, y) in elems.iter().enumerate() {
                add[i * size + j] = module.index_of(&module.add(x, y));
            }
        }
        let neg = elems.iter().map(|x| module.index_of(&module.neg(x))).collect();

        let act: Vec<Vec<usize>> = images
            .iter()
            .map(|imgs| {
                elems
                    .iter()
                    .map(|x| module.index_of(&apply_images(&module, imgs, x)))
                    .collect()
            })
            .collect();

        for (g, perm) in act.iter().enumerate() {
            let distinct: BTreeSet<_> = perm.iter().collect();
            if distinct.len() != size {
                return Err(Error::invalid(format!("action of {g} is not bijective")));
            }
        }
        let e = group.identity();
        if act[e].iter().enumerate().any(|(i, &j)| i != j) {
            return Err(Error::invalid("identity does not act trivially"));
        }
        for g in 0..group.size() {
            for h in 0..group.size() {
                let gh = group.mul(g, h);
                if (0..size).any(|x| act[gh][x] != act[g][act[h][x]]) {
                    return Err(Error::invalid(format!(
                        "action is not a homomorphism at ({g},{h})"
                    )));
                }
            }
        }

        Ok(GModule {
            group,
            module,
            images,
            act,
            add,
            neg,
        })
    }

    pub fn trivial(group: FiniteGroup, module: FiniteAbelianGroup, guards: &Guards) -> Result<Self> {
        let k = module.rank();
        let ident: Vec<Vec<u64>> = (0..k)
            .map(|i| (0..k).map(|j| u64::from(i == j) % module.cyclic_orders()[j]).collect())
            .collect();
        let images = vec![ident; group.size()];
        Self::new(group, module, images, guards)
    }

    /// Builds a module from the action of a few elements, extending to the
    /// rest of the group by composition. With no elements given the action
    /// is trivial.
    pub fn from_partial_action(
        group: FiniteGroup,
        module: FiniteAbelianGroup,
        given: Vec<(usize, Vec<Vec<u64>>)>,
        guards: &Guards,
    ) -> Result<Self> {
        if given.is_empty() {
            return Self::trivial(group, module, guards);
        }
        let k = module.rank();
        let ident: Vec<Vec<u64>> = (0..k)
            .map(|i| (0..k).map(|j| u64::from(i == j) % module.cyclic_orders()[j]).collect())
            .collect();
        let mut known: Vec<Option<Vec<Vec<u64>>>> = vec![None; group.size()];
        known[group.identity()] = Some(ident);
        for (g, imgs) in &given {
            if *g >= group.size() {
                return Err(Error::invalid(format!("group element {g} out of range")));
            }
            if imgs.len() != k {
                return Err(Error::invalid(format!("action of {g} needs {k} basis images")));
            }
            for img in imgs {
                module.validate(img)?;
            }
            known[*g] = Some(imgs.clone());
        }
        // close under products with the given elements
        let mut frontier: Vec<usize> = (0..group.size()).filter(|&g| known[g].is_some()).collect();
        while let Some(h) = frontier.pop() {
            for (g, gimgs) in &given {
                let gh = group.mul(*g, h);
                if known[gh].is_none() {
                    let himgs = known[h].clone().expect("known");
                    let composed = himgs
                        .iter()
                        .map(|img| apply_images(&module, gimgs, img))
                        .collect();
                    known[gh] = Some(composed);
                    frontier.push(gh);
                }
            }
        }
        let images: Option<Vec<_>> = known.into_iter().collect();
        let images =
            images.ok_or_else(|| Error::invalid("given elements do not generate the group"))?;
        Self::new(group, module, images, guards)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn module(&self) -> &FiniteAbelianGroup {
        &self.module
    }

    pub fn images(&self) -> &[Vec<Vec<u64>>] {
        &self.images
    }

    pub fn act(&self, g: usize, x: &[u64]) -> Vec<u64> {
        apply_images(&self.module, &self.images[g], x)
    }

    pub fn is_trivial_action(&self) -> bool {
        self.act
            .iter()
            .all(|perm| perm.iter().enumerate().all(|(i, &j)| i == j))
    }

    fn module_size(&self) -> usize {
        self.neg.len()
    }

    fn add_idx(&self, a: usize, b: usize) -> usize {
        self.add[a * self.module_size() + b]
    }

    fn sub_idx(&self, a: usize, b: usize) -> usize {
        self.add_idx(a, self.neg[b])
    }

    fn to_indices(&self, c: &Cocycle) -> Vec<usize> {
        c.values.iter().map(|v| self.module.index_of(v)).collect()
    }

    fn from_indices(&self, idx: &[usize]) -> Cocycle {
        Cocycle {
            values: idx.iter().map(|&i| self.module.element_at(i)).collect(),
        }
    }

    fn satisfies_cocycle_law(&self, vals: &[usize]) -> bool {
        let n = self.group.size();
        if vals[self.group.identity()] != 0 {
            return false;
        }
        (0..n).all(|g| {
            (0..n).all(|h| {
                vals[self.group.mul(g, h)] == self.add_idx(self.act[g][vals[h]], vals[g])
            })
        })
    }
}

fn apply_images(module: &FiniteAbelianGroup, imgs: &[Vec<u64>], x: &[u64]) -> Vec<u64> {
    let mut acc = module.zero();
    for (xi, img) in x.iter().zip(imgs) {
        acc = module.add(&acc, &module.scale(*xi as i64, img));
    }
    acc
}

/// All actions of `group` on `Z/n`, i.e. homomorphisms into `(Z/n)^x`,
/// in lexicographic order of the multiplier tuple.
pub fn cyclic_module_actions(group: &FiniteGroup, n: u64, guards: &Guards) -> Result<Vec<GModule>> {
    let units = unit_group(n)?;
    let size = group.size();
    let mut out = Vec::new();
    let mut assign = vec![None::<u64>; size];
    fn rec(
        k: usize,
        group: &FiniteGroup,
        units: &[u64],
        n: u64,
        assign: &mut Vec<Option<u64>>,
        out: &mut Vec<Vec<u64>>,
    ) {
        let size = group.size();
        if k == size {
            out.push(assign.iter().map(|u| u.expect("assigned")).collect());
            return;
        }
        let candidates: Vec<u64> = if k == group.identity() { vec![1 % n] } else { units.to_vec() };
        for u in candidates {
            assign[k] = Some(u);
            let ok = (0..=k).all(|g| {
                (0..=k).all(|h| {
                    let gh = group.mul(g, h);
                    match (assign[g], assign[h], assign[gh]) {
                        (Some(a), Some(b), Some(c)) if gh <= k => (a * b) % n == c,
                        _ => true,
                    }
                })
            });
            if ok {
                rec(k + 1, group, units, n, assign, out);
            }
            assign[k] = None;
        }
    }
    let mut tuples = Vec::new();
    rec(0, group, &units, n, &mut assign, &mut tuples);
    let module = FiniteAbelianGroup::cyclic(n)?;
    for t in tuples {
        let images = t.iter().map(|&u| vec![vec![u % n]]).collect();
        out.push(GModule::new(group.clone(), module.clone(), images, guards)?);
    }
    Ok(out)
}

/// A normalized crossed homomorphism, stored as its value at every group element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cocycle {
    values: Vec<Vec<u64>>,
}

impl Cocycle {
    /// Validates `values` against the cocycle law for `module`.
    pub fn new(module: &GModule, values: Vec<Vec<u64>>) -> Result<Self> {
        if values.len() != module.group.size() {
            return Err(Error::invalid(format!(
                "cocycle needs {} values, got {}",
                module.group.size(),
                values.len()
            )));
        }
        for v in &values {
            module.module.validate(v)?;
        }
        let c = Cocycle { values };
        if !module.satisfies_cocycle_law(&module.to_indices(&c)) {
            return Err(Error::invalid(
                "values are not a normalized crossed homomorphism",
            ));
        }
        Ok(c)
    }

    pub fn zero(module: &GModule) -> Self {
        Cocycle {
            values: vec![module.module.zero(); module.group.size()],
        }
    }

    /// The coboundary `g -> g.m - m`.
    pub fn coboundary_of(module: &GModule, m: &[u64]) -> Result<Self> {
        module.module.validate(m)?;
        Ok(Cocycle {
            values: (0..module.group.size())
                .map(|g| module.module.sub(&module.act(g, m), m))
                .collect(),
        })
    }

    pub fn values(&self) -> &[Vec<u64>] {
        &self.values
    }

    pub fn value(&self, g: usize) -> &[u64] {
        &self.values[g]
    }

    pub fn add(&self, module: &GModule, other: &Cocycle) -> Cocycle {
        Cocycle {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| module.module.add(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, module: &GModule, k: i64) -> Cocycle {
        Cocycle {
            values: self.values.iter().map(|a| module.module.scale(k, a)).collect(),
        }
    }
}

/// True when `values` is a normalized crossed homomorphism.
pub fn is_cocycle(module: &GModule, values: &[Vec<u64>]) -> bool {
    values.len() == module.group.size()
        && values.iter().all(|v| module.module.contains(v))
        && module.satisfies_cocycle_law(
            &values.iter().map(|v| module.module.index_of(v)).collect::<Vec<_>>(),
        )
}

/// All cocycles, sorted lexicographically by their value tuples.
pub fn cocycles(module: &GModule) -> Result<Vec<Cocycle>> {
    cocycles_with(module, &Guards::default())
}

pub fn cocycles_with(module: &GModule, guards: &Guards) -> Result<Vec<Cocycle>> {
    let n = module.group.size();
    let msize = module.module_size();
    let candidates = (msize as u128).checked_pow((n - 1) as u32).unwrap_or(u128::MAX);
    guards.check("normalized cochains", candidates, guards.cocycle_candidates())?;

    let e = module.group.identity();
    // Visit the identity first; every other element in index order. Each
    // constraint (g, h) is checked as soon as g, h and gh all have values.
    let order: Vec<usize> = std::iter::once(e).chain((0..n).filter(|&g| g != e)).collect();
    let mut pos = vec![0; n];
    for (i, &g) in order.iter().enumerate() {
        pos[g] = i;
    }
    let mut checks: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for g in 0..n {
        for h in 0..n {
            let gh = module.group.mul(g, h);
            let last = pos[g].max(pos[h]).max(pos[gh]);
            checks[last].push((g, h));
        }
    }

    let mut vals = vec![0usize; n];
    let mut out = Vec::new();
    fn rec(
        step: usize,
        order: &[usize],
        checks: &[Vec<(usize, usize)>],
        module: &GModule,
        vals: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if step == order.len() {
            out.push(vals.clone());
            return;
        }
        let g0 = order[step];
        let range = if step == 0 { 0..1 } else { 0..module.module_size() };
        for v in range {
            vals[g0] = v;
            let ok = checks[step].iter().all(|&(g, h)| {
                vals[module.group.mul(g, h)] == module.add_idx(module.act[g][vals[h]], vals[g])
            });
            if ok {
                rec(step + 1, order, checks, module, vals, out);
            }
        }
        vals[g0] = 0;
    }
    rec(0, &order, &checks, module, &mut vals, &mut out);
    out.sort();
    Ok(out.iter().map(|v| module.from_indices(v)).collect())
}

/// The coboundaries `{g -> g.m - m}`, deduplicated and sorted.
pub fn coboundaries(module: &GModule) -> Vec<Cocycle> {
    coboundary_indices(module)
        .iter()
        .map(|v| module.from_indices(v))
        .collect()
}

fn coboundary_indices(module: &GModule) -> Vec<Vec<usize>> {
    let n = module.group.size();
    let set: BTreeSet<Vec<usize>> = (0..module.module_size())
        .map(|m| (0..n).map(|g| module.sub_idx(module.act[g][m], m)).collect())
        .collect();
    set.into_iter().collect()
}

pub fn is_coboundary(module: &GModule, c: &Cocycle) -> bool {
    let idx = module.to_indices(c);
    coboundary_indices(module).binary_search(&idx).is_ok()
}

/// `Z^1 / B^1` with one representative per class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct H1 {
    pub cocycle_count: usize,
    pub coboundary_count: usize,
    /// Lexicographically minimal member of each class, in increasing order.
    pub representatives: Vec<Cocycle>,
}

impl H1 {
    pub fn size(&self) -> usize {
        self.representatives.len()
    }
}

pub fn h1(module: &GModule) -> Result<H1> {
    h1_with(module, &Guards::default())
}

pub fn h1_with(module: &GModule, guards: &Guards) -> Result<H1> {
    let z1 = cocycles_with(module, guards)?;
    let b1 = coboundary_indices(module);
    let z1_idx: Vec<Vec<usize>> = z1.iter().map(|c| module.to_indices(c)).collect();
    let mut covered: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut reps = Vec::new();
    for z in &z1_idx {
        if covered.contains(z) {
            continue;
        }
        reps.push(module.from_indices(z));
        for b in &b1 {
            let shifted: Vec<usize> = z.iter().zip(b).map(|(&x, &y)| module.add_idx(x, y)).collect();
            covered.insert(shifted);
        }
    }
    if covered.len() != z1_idx.len() {
        return Err(Error::invariant("coboundary translates left Z^1"));
    }
    Ok(H1 {
        cocycle_count: z1.len(),
        coboundary_count: b1.len(),
        representatives: reps,
    })
}

/// The action `g * y = g.y + alpha(g)` on the underlying set of the module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedAction {
    module: FiniteAbelianGroup,
    table: Vec<Vec<usize>>,
}

impl TwistedAction {
    pub fn act(&self, g: usize, y: &[u64]) -> Vec<u64> {
        self.module
            .element_at(self.table[g][self.module.index_of(y)])
    }

    /// Permutation of module indices for each group element.
    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }
}

/// The torsor attached to `alpha`; the action law is verified before return.
pub fn torsor_from_cocycle(module: &GModule, alpha: &Cocycle) -> Result<TwistedAction> {
    let a = module.to_indices(alpha);
    let n = module.group.size();
    let table: Vec<Vec<usize>> = (0..n)
        .map(|g| {
            (0..module.module_size())
                .map(|y| module.add_idx(module.act[g][y], a[g]))
                .collect()
        })
        .collect();
    for g in 0..n {
        for h in 0..n {
            let gh = module.group.mul(g, h);
            if (0..module.module_size()).any(|y| table[gh][y] != table[g][table[h][y]]) {
                return Err(Error::invariant(format!(
                    "twisted action fails (gh)*y = g*(h*y) at ({g},{h})"
                )));
            }
        }
    }
    Ok(TwistedAction {
        module: module.module.clone(),
        table,
    })
}

/// Cocycle of the degree-`d` class torsor of the twist by `alpha`, derived
/// from the pointwise action on divisors (see the module docs).
pub fn picd_cocycle(module: &GModule, alpha: &Cocycle, d: u64) -> Result<Cocycle> {
    picd_cocycle_with(module, alpha, d, &Guards::default())
}

pub fn picd_cocycle_with(
    module: &GModule,
    alpha: &Cocycle,
    d: u64,
    guards: &Guards,
) -> Result<Cocycle> {
    guards.check("divisor degree", d as u128, guards.divisor_degree())?;
    let msize = module.module_size();
    let divisor_count = if d == 0 {
        (msize * msize) as u128
    } else {
        binomial((msize as u128) + d as u128 - 1, d as u128)
    };
    guards.check("divisors", divisor_count, guards.divisor_count())?;

    let twisted = torsor_from_cocycle(module, alpha)?;
    let n = module.group.size();
    // class_map[g][c] = class of g * D for any divisor D of class c
    let mut class_map: Vec<Vec<Option<usize>>> = vec![vec![None; msize]; n];

    let mut record = |g: usize, class: usize, image: usize| -> Result<()> {
        match class_map[g][class] {
            None => {
                class_map[g][class] = Some(image);
                Ok(())
            }
            Some(prev) if prev == image => Ok(()),
            Some(_) => Err(Error::invariant(format!(
                "divisor action of {g} is not well defined on class {class}"
            ))),
        }
    };

    if d == 0 {
        for y1 in 0..msize {
            for y2 in 0..msize {
                let class = module.sub_idx(y1, y2);
                for g in 0..n {
                    let t = &twisted.table[g];
                    record(g, class, module.sub_idx(t[y1], t[y2]))?;
                }
            }
        }
    } else {
        // nondecreasing index sequences = multisets of size d
        struct Walk<'a> {
            module: &'a GModule,
            twisted: &'a TwistedAction,
            sums: Vec<usize>,
            images: Vec<Vec<usize>>,
        }
        fn walk(
            w: &mut Walk<'_>,
            depth: usize,
            start: usize,
            record: &mut dyn FnMut(usize, usize, usize) -> Result<()>,
        ) -> Result<()> {
            let d = w.sums.len() - 1;
            if depth == d {
                for g in 0..w.images.len() {
                    record(g, w.sums[d], w.images[g][d])?;
                }
                return Ok(());
            }
            for y in start..w.module.module_size() {
                w.sums[depth + 1] = w.module.add_idx(w.sums[depth], y);
                for g in 0..w.images.len() {
                    w.images[g][depth + 1] =
                        w.module.add_idx(w.images[g][depth], w.twisted.table[g][y]);
                }
                walk(w, depth + 1, y, record)?;
            }
            Ok(())
        }
        let d = d as usize;
        let mut w = Walk {
            module,
            twisted: &twisted,
            sums: vec![0; d + 1],
            images: vec![vec![0; d + 1]; n],
        };
        walk(&mut w, 0, 0, &mut record)?;
    }

    let mut beta = vec![0usize; n];
    for g in 0..n {
        let row: Option<Vec<usize>> = class_map[g].iter().copied().collect();
        let row = row.ok_or_else(|| Error::invariant("some divisor class was never reached"))?;
        beta[g] = row[0];
        for (c, &img) in row.iter().enumerate() {
            if img != module.add_idx(module.act[g][c], beta[g]) {
                return Err(Error::invariant(format!(
                    "induced action of {g} on classes is not a twisted translation"
                )));
            }
        }
    }
    if !module.satisfies_cocycle_law(&beta) {
        return Err(Error::invariant("derived class cocycle fails the cocycle law"));
    }
    Ok(module.from_indices(&beta))
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n.saturating_sub(k));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}
