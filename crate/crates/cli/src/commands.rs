use serde_json::json;

use torsorkit::brauer_fibration::{
    fiber_derived_witness, same_cyclic_in_quotient, BrauerClass, SplitBrauerModel,
};
use torsorkit::cohomology::{
    coboundaries, h1_with, is_coboundary, is_cocycle, picd_cocycle_with, Cocycle,
};
use torsorkit::elliptic_ff::{
    aut_group_order, cubic_rational_point, curve_group_order, satisfies_hasse,
    weierstrass_reduction, PlaneCubic, WeierstrassCurve,
};
use torsorkit::modarith::FiniteAbelianGroup;
use torsorkit::real_curves::{fmt_rational, h1_real, parse_rational, sturm_real_roots, RationalCurve};
use torsorkit::torsor_model::{classify, WCModel};
use torsorkit::unitary_orbits::{
    gamma0_image_with, orbit, polarized_conclusion_check_with, sl2_enumeration, sp_image_with,
    stabilizer_size, PairClass, PolarizationModel,
};
use torsorkit::{Error, Guards, Result};

use crate::args::{parse_list, Args, Invocation};
use crate::modules::{format_values, parse_cocycle, parse_module, parse_values, MODULE_KEYS};
use crate::report::Report;

pub fn classify_cmd(inv: &Invocation, guards: &Guards) -> Result<Report> {
    let args = &inv.args;
    args.allow(&["n", "aut"])?;
    let n = args.u64("n")?;
    guards.check("torsor order", n as u128, guards.torsor_order())?;
    let model = match args.get("aut") {
        Some(a) => WCModel::new(n, &parse_list("aut", a)?)?,
        None => WCModel::generic(n)?,
    };
    let c = classify(&model);
    let mut r = Report::new("classify", args.inputs());
    r.set("model", model.to_string())
        .set("iso_class_count", c.iso_classes.len())
        .set("derived_class_count", c.derived_classes.len())
        .set("iso_classes", &c.iso_classes)
        .set("derived_classes", &c.derived_classes)
        .set("by_order", &c.by_order)
        .set("generator_iso_classes", c.generator_iso_classes)
        .set("generator_derived_classes", c.generator_derived_classes)
        .check("iso_refines_derived", c.iso_refines_derived)
        .check("derived_matches_cyclic_subgroups", c.derived_matches_cyclic_subgroups);
    Ok(r)
}

pub fn h1_cmd(inv: &Invocation, guards: &Guards) -> Result<Report> {
    let args = &inv.args;
    args.allow(&MODULE_KEYS)?;
    let m = parse_module(args, guards)?;
    let h = h1_with(&m, guards)?;
    let order = m.group().size() as i64;
    let b1 = coboundaries(&m);
    let mut r = Report::new("h1", args.inputs());
    r.set("cocycle_count", h.cocycle_count)
        .set("coboundary_count", h.coboundary_count)
        .set("size", h.size())
        .set(
            "representatives",
            h.representatives.iter().map(|c| format_values(c.values())).collect::<Vec<_>>(),
        )
        .check("coboundaries_are_cocycles", b1.iter().all(|b| is_cocycle(&m, b.values())))
        .check("lagrange", h.cocycle_count == h.size() * h.coboundary_count)
        .check(
            "group_order_kills_classes",
            h.representatives.iter().all(|c| is_coboundary(&m, &c.scale(&m, order))),
        );
    Ok(r)
}

pub fn cocycle_check_cmd(inv: &Invocation, guards: &Guards) -> Result<Report> {
    let args = &inv.args;
    let mut keys = MODULE_KEYS.to_vec();
    keys.push("values");
    args.allow(&keys)?;
    let m = parse_module(args, guards)?;
    let values = parse_values(&m, args.require("values")?)?;
    let cocycle = is_cocycle(&m, &values);
    let coboundary = cocycle && is_coboundary(&m, &Cocycle::new(&m, values.clone())?);
    let mut r = Report::new("cocycle-check", args.inputs());
    r.set("values", format_values(&values))
        .set("is_cocycle", cocycle)
        .set("is_coboundary", coboundary);
    Ok(r)
}

pub fn picd_cmd(inv: &Invocation, guards: &Guards) -> Result<Report> {
    let args = &inv.args;
    let mut keys = MODULE_KEYS.to_vec();
    keys.extend(["alpha", "d"]);
    args.allow(&keys)?;
    let m = parse_module(args, guards)?;
    let alpha = parse_cocycle(&m, args.require("alpha")?)?;
    let d = args.u64("d")?;
    let beta = picd_cocycle_with(&m, &alpha, d, guards)?;
    let expected = alpha.scale(&m, d as i64);
    let mut r = Report::new("picd", args.inputs());
    r.set("alpha", format_values(alpha.values()))
        .set("d", d)
        .set("beta", format_values(beta.values()))
        .set("d_alpha", format_values(expected.values()))
        .check("picd_equals_d_alpha", beta == expected);
    Ok(r)
}

pub fn h1_real_cmd(inv: &Invocation) -> Result<Report> {
    let args = &inv.args;
    args.allow(&["a", "b"])?;
    let curve = RationalCurve::new(parse_rational(args.require("a")?)?, parse_rational(args.require("b")?)?)?;
    let h = h1_real(&curve)?;
    let roots = sturm_real_roots(&curve.cubic())?;
    let disc = curve.discriminant();
    let expected_roots = if num_traits::Signed::is_positive(&disc) { 3 } else { 1 };
    let mut r = Report::new("h1-real", args.inputs());
    r.set("curve", curve.to_string())
        .set("discriminant", fmt_rational(&disc))
        .set("real_roots", roots)
        .set("two_torsion", h.two_torsion)
        .set("h1_two_torsion", h.h1_two_torsion)
        .set("real_components", h.real_components)
        .set("size", h.size)
        .check("sturm_matches_discriminant", roots == expected_roots)
        .check("size_is_one_or_two", h.size == 1 || h.size == 2);
    Ok(r)
}

pub fn ffcurve_cmd(inv: &Invocation, guards: &Guards) -> Result<Report> {
    let args = &inv.args;
    args.allow(&["p", "a", "b"])?;
    let e = WeierstrassCurve::new_with(args.u64("p")?, args.i64("a")?, args.i64("b")?, guards)?;
    let order = curve_group_order(&e);
    let mut r = Report::new("ffcurve", args.inputs());
    r.set("curve", e.to_string())
        .set("discriminant", e.discriminant())
        .set("j_invariant", e.j_invariant())
        .set("order", order)
        .set("trace", e.p() as i64 + 1 - order as i64)
        .set("aut_order", aut_group_order(&e))
        .check("hasse", satisfies_hasse(&e, order));
    Ok(r)
}

fn parse_point(s: &str) -> Result<[u64; 3]> {
    let v: Vec<u64> = parse_list("point", s)?;
    v.try_into()
        .map_err(|_| Error::parse("point= needs three coordinates x,y,z"))
}

pub fn cubic_cmd(inv: &Invocation, guards: &Guards) -> Result<Report> {
    let args = &inv.args;
    args.allow(&["p", "coeffs", "point"])?;
    let coeffs: Vec<i64> = parse_list("coeffs", args.require("coeffs")?)?;
    let coeffs: [i64; 10] = coeffs
        .try_into()
        .map_err(|_| Error::parse("coeffs= needs 10 comma-separated coefficients"))?;
    let cubic = PlaneCubic::new_with(args.u64("p")?, coeffs, guards)?;
    let point = match args.get("point") {
        Some(s) => Some(parse_point(s)?),
        None => cubic_rational_point(&cubic),
    };
    let mut r = Report::new("cubic", args.inputs());
    r.set("cubic", cubic.to_string())
        .set("point_count", cubic.point_count())
        .set("point", point)
        .check("has_rational_point", point.is_some());
    if let Some(pt) = point {
        let red = weierstrass_reduction(&cubic, pt)?;
        r.set("weierstrass", red.curve.to_string())
            .set("method", red.method)
            .set("curve_points", red.curve_points)
            .check("counts_preserved", red.cubic_points == red.curve_points)
            .check("hasse", satisfies_hasse(&red.curve, red.curve_points));
    }
    Ok(r)
}

fn polarization(args: &Args, m: u64) -> Result<PolarizationModel> {
    PolarizationModel::new(m, args.opt_i64("phi")?.unwrap_or(1), args.opt_i64("psi")?)
}

pub fn orbit_cmd(inv: &Invocation, guards: &Guards) -> Result<Report> {
    let args = &inv.args;
    args.allow(&["N", "m", "phi", "psi", "start"])?;
    let m = args.u64("m")?;
    let group = gamma0_image_with(args.u64("N")?, m, guards)?;
    let pol = polarization(args, m)?;
    let start: Vec<i64> = parse_list("start", args.require("start")?)?;
    let [x, y]: [i64; 2] = start
        .try_into()
        .map_err(|_| Error::parse("start= needs two coordinates x,y"))?;
    let start = PairClass::new(x, y, m);
    let o = orbit(&start, &group, &pol)?;
    let stab = stabilizer_size(&start, &group, &pol)?;
    let closed = o.iter().all(|p| {
        group
            .matrices()
            .iter()
            .all(|g| o.binary_search(&pol.act(g, p)).is_ok())
    });
    let mut r = Report::new("orbit", args.inputs());
    r.set("phi", pol.phi())
        .set("psi", pol.psi())
        .set("group_order", group.len())
        .set("group_action", pol.is_invertible())
        .set("orbit", o.iter().map(|p| [p.x, p.y]).collect::<Vec<_>>())
        .set("size", o.len())
        .set("stabilizer", stab)
        .check("orbit_closed", closed);
    if pol.is_invertible() {
        r.check("orbit_stabilizer", o.len() * stab == group.len());
    }
    Ok(r)
}

pub fn polarized_cmd(inv: &Invocation, guards: &Guards) -> Result<Report> {
    let args = &inv.args;
    args.allow(&["N", "m", "phi", "psi"])?;
    let m = args.u64("m")?;
    let pol = polarization(args, m)?;
    let rep = polarized_conclusion_check_with(args.u64("N")?, m, &pol, guards)?;
    let mut r = Report::new("polarized-check", args.inputs());
    r.set("phi", rep.phi)
        .set("psi", rep.psi)
        .set("witnesses", &rep.witnesses)
        .set("failures", rep.failures().count())
        .check("coprime_multiple", rep.passed);
    Ok(r)
}

pub fn sp_cmd(inv: &Invocation, guards: &Guards) -> Result<Report> {
    let args = &inv.args;
    args.allow(&["genus", "m"])?;
    let genus = args.u64("genus")? as usize;
    let m = args.u64("m")?;
    let sp = sp_image_with(genus, m, guards)?;
    let mut r = Report::new("sp", args.inputs());
    r.set("genus", genus)
        .set("modulus", m)
        .set("size", sp.len())
        .check("symplectic", sp.is_symplectic());
    if genus == 1 {
        let sl2 = sl2_enumeration(m)?;
        r.set("sl2_size", sl2.len())
            .check("equals_sl2", sp.matrices() == sl2.as_slice());
    }
    Ok(r)
}

/// `x` or `x:g1,g2,...`.
fn parse_brauer_class(model: &SplitBrauerModel, key: &str, s: &str) -> Result<BrauerClass> {
    let (x, g) = s.split_once(':').unwrap_or((s, ""));
    let x: i64 = crate::args::parse_num(key, x)?;
    let mut gamma: Vec<i64> = parse_list(key, g)?;
    if gamma.is_empty() {
        gamma = vec![0; model.brauer().rank()];
    }
    model.class(x, &gamma)
}

pub fn brauer_cmd(inv: &Invocation, _guards: &Guards) -> Result<Report> {
    let args = &inv.args;
    args.allow(&["n", "br", "brs", "alpha", "beta"])?;
    let n = args.u64("n")?;
    let br = FiniteAbelianGroup::new(parse_list("br", args.get("br").unwrap_or(""))?)?;
    let brs = args
        .get("brs")
        .unwrap_or("")
        .split(';')
        .filter(|g| !g.trim().is_empty())
        .map(|g| parse_list("brs", g))
        .collect::<Result<Vec<Vec<i64>>>>()?;
    let model = SplitBrauerModel::new(n, br, &brs)?;
    let alpha = parse_brauer_class(&model, "alpha", args.require("alpha")?)?;
    let beta = parse_brauer_class(&model, "beta", args.require("beta")?)?;
    let forward = fiber_derived_witness(&alpha, &beta, &model)?;
    let backward = fiber_derived_witness(&beta, &alpha, &model)?;
    let same = same_cyclic_in_quotient(&alpha, &beta, &model)?;
    let equivalent = forward.is_some() && backward.is_some();
    let mut r = Report::new("brauer", args.inputs());
    r.set("model", model.to_string())
        .set("alpha", alpha.to_string())
        .set("beta", beta.to_string())
        .set("witness", json!({ "alpha_to_beta": forward, "beta_to_alpha": backward }))
        .set("equivalent", equivalent)
        .set("same_cyclic_in_quotient", same)
        .check("equivalence_implies_same_cyclic", !equivalent || same);
    Ok(r)
}
