use std::collections::BTreeMap;

use torsorkit::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Clone)]
pub struct Invocation {
    pub command: String,
    pub positional: Vec<String>,
    pub args: Args,
    pub format: Format,
    pub seed: u64,
}

/// `key=value` arguments of one command.
#[derive(Debug, Clone, Default)]
pub struct Args {
    map: BTreeMap<String, String>,
}

impl Args {
    pub fn inputs(&self) -> &BTreeMap<String, String> {
        &self.map
    }

    /// Rejects keys outside `allowed`.
    pub fn allow(&self, allowed: &[&str]) -> Result<()> {
        for k in self.map.keys() {
            if !allowed.contains(&k.as_str()) {
                return Err(Error::parse(format!(
                    "unknown key {k:?} (expected one of: {})",
                    allowed.join(", ")
                )));
            }
        }
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(String::as_str)
    }

    pub fn require(&self, key: &str) -> Result<&str> {
        self.get(key)
            .ok_or_else(|| Error::parse(format!("missing {key}=")))
    }

    pub fn u64(&self, key: &str) -> Result<u64> {
        parse_num(key, self.require(key)?)
    }

    pub fn u64_or(&self, key: &str, default: u64) -> Result<u64> {
        self.get(key).map_or(Ok(default), |v| parse_num(key, v))
    }

    pub fn i64(&self, key: &str) -> Result<i64> {
        parse_num(key, self.require(key)?)
    }

    pub fn opt_i64(&self, key: &str) -> Result<Option<i64>> {
        self.get(key).map(|v| parse_num(key, v)).transpose()
    }
}

pub fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| Error::parse(format!("{key}={v:?} is not a valid number")))
}

pub fn parse_list<T: std::str::FromStr>(key: &str, v: &str) -> Result<Vec<T>> {
    if v.trim().is_empty() {
        return Ok(Vec::new());
    }
    v.split(',').map(|t| parse_num(key, t)).collect()
}

pub fn parse_invocation(argv: &[String]) -> Result<Invocation> {
    let mut format = Format::Table;
    let mut seed = 0;
    let mut command = None;
    let mut positional = Vec::new();
    let mut map = BTreeMap::new();
    let mut it = argv.iter();
    while let Some(a) = it.next() {
        match a.as_str() {
            "--json" => format = Format::Json,
            "--table" => format = Format::Table,
            "--seed" => {
                let v = it
                    .next()
                    .ok_or_else(|| Error::parse("--seed needs a value"))?;
                seed = parse_num("--seed", v)?;
            }
            s if s.starts_with("--seed=") => seed = parse_num("--seed", &s[7..])?,
            s if s.starts_with("--") => return Err(Error::parse(format!("unknown flag {s}"))),
            s if command.is_none() => command = Some(s.to_string()),
            s => match s.split_once('=') {
                Some((k, v)) => {
                    if map.insert(k.to_string(), v.to_string()).is_some() {
                        return Err(Error::parse(format!("{k}= given twice")));
                    }
                }
                None => positional.push(s.to_string()),
            },
        }
    }
    let command = command.ok_or_else(|| Error::parse("no subcommand given"))?;
    Ok(Invocation {
        command,
        positional,
        args: Args { map },
        format,
        seed,
    })
}
