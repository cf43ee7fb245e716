//! Text formats for finite groups, G-modules and cocycles.
//!
//! ```text
//! group=cyclic:4 | product:2,2 | symmetric:3 | trivial
//! group=table:0,1;1,0             explicit multiplication table, rows by ';'
//! module=2,2                      cyclic orders of the underlying group
//! action=1:0,1;1,0                element 1 sends e1 -> (0,1), e2 -> (1,0)
//! action=1:3/2:1                  several elements, separated by '/'
//! values=0;1;0;1                  one module element per group element
//! ```
//!
//! A module file holds the same keys one per line (`group cyclic:2`), with
//! `#` comments and any number of `action` lines.

use torsorkit::cohomology::{Cocycle, FiniteGroup, GModule};
use torsorkit::modarith::FiniteAbelianGroup;
use torsorkit::{Error, Guards, Result};

use crate::args::{parse_list, parse_num, Args};

pub const MODULE_KEYS: [&str; 4] = ["group", "module", "action", "file"];

pub fn parse_group(spec: &str, guards: &Guards) -> Result<FiniteGroup> {
    let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let group = match kind {
        "trivial" => FiniteGroup::trivial(),
        "cyclic" => FiniteGroup::cyclic(small(parse_num("group", rest)?, guards)?)?,
        "product" => {
            let orders: Vec<usize> = parse_list("group", rest)?;
            let total: usize = orders.iter().try_fold(1usize, |acc, &o| acc.checked_mul(o)).unwrap_or(usize::MAX);
            small(total, guards)?;
            orders.iter().try_fold(FiniteGroup::trivial(), |acc, &o| {
                acc.product(&FiniteGroup::cyclic(o)?)
            })?
        }
        "symmetric" => FiniteGroup::symmetric(parse_num("group", rest)?)?,
        "table" => {
            let rows = rest
                .split(';')
                .map(|r| parse_list("group", r))
                .collect::<Result<Vec<Vec<usize>>>>()?;
            small(rows.len(), guards)?;
            FiniteGroup::from_table(rows)?
        }
        _ => {
            return Err(Error::parse(format!(
                "unknown group {spec:?} (cyclic:n, product:a,b,.., symmetric:k, table:rows, trivial)"
            )))
        }
    };
    guards.check("group order", group.size() as u128, guards.group_size())?;
    Ok(group)
}

fn small(n: usize, guards: &Guards) -> Result<usize> {
    guards.check("group order", n as u128, guards.group_size())?;
    Ok(n)
}

/// `g:row;row;...` entries separated by `/`.
fn parse_action(
    spec: &str,
    module: &FiniteAbelianGroup,
) -> Result<Vec<(usize, Vec<Vec<u64>>)>> {
    let mut out = Vec::new();
    for entry in spec.split('/').filter(|e| !e.trim().is_empty()) {
        let (g, rows) = entry
            .split_once(':')
            .ok_or_else(|| Error::parse(format!("action entry {entry:?} needs g:images")))?;
        let g: usize = parse_num("action", g)?;
        let images = rows
            .split(';')
            .map(|r| module.element(&parse_list::<i64>("action", r)?))
            .collect::<Result<Vec<_>>>()?;
        out.push((g, images));
    }
    Ok(out)
}

#[derive(Debug, Default)]
struct ModuleSpec {
    group: Option<String>,
    module: Option<String>,
    actions: Vec<String>,
}

fn read_file(path: &str) -> Result<ModuleSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("cannot read {path}: {e}")))?;
    let mut spec = ModuleSpec::default();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| Error::parse(format!("bad line {line:?}")))?;
        let v = v.trim().to_string();
        match k {
            "group" => spec.group = Some(v),
            "module" => spec.module = Some(v),
            "action" => spec.actions.push(v),
            _ => return Err(Error::parse(format!("unknown key {k:?} in {path}"))),
        }
    }
    Ok(spec)
}

pub fn parse_module(args: &Args, guards: &Guards) -> Result<GModule> {
    let spec = match args.get("file") {
        Some(path) => {
            if ["group", "module", "action"].iter().any(|k| args.get(k).is_some()) {
                return Err(Error::parse("file= cannot be combined with group=/module=/action="));
            }
            read_file(path)?
        }
        None => ModuleSpec {
            group: args.get("group").map(String::from),
            module: args.get("module").map(String::from),
            actions: args.get("action").map(String::from).into_iter().collect(),
        },
    };
    let group = parse_group(
        spec.group.as_deref().ok_or_else(|| Error::parse("missing group="))?,
        guards,
    )?;
    let orders: Vec<u64> = parse_list(
        "module",
        spec.module.as_deref().ok_or_else(|| Error::parse("missing module="))?,
    )?;
    let module = FiniteAbelianGroup::new(orders)?;
    guards.check("module order", module.order() as u128, guards.module_size())?;
    let mut given = Vec::new();
    for a in &spec.actions {
        given.extend(parse_action(a, &module)?);
    }
    GModule::from_partial_action(group, module, given, guards)
}

/// `v_0;v_1;...`, one module element per group element.
pub fn parse_values(module: &GModule, spec: &str) -> Result<Vec<Vec<u64>>> {
    let values = spec
        .split(';')
        .map(|v| module.module().element(&parse_list::<i64>("values", v)?))
        .collect::<Result<Vec<_>>>()?;
    if values.len() != module.group().size() {
        return Err(Error::invalid(format!(
            "expected {} values, got {}",
            module.group().size(),
            values.len()
        )));
    }
    Ok(values)
}

pub fn parse_cocycle(module: &GModule, spec: &str) -> Result<Cocycle> {
    Cocycle::new(module, parse_values(module, spec)?)
}

pub fn format_values(values: &[Vec<u64>]) -> String {
    values
        .iter()
        .map(|v| v.iter().map(u64::to_string).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join(";")
}
