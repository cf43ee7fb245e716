//! Front end for `torsorkit`: argument parsing, dispatch and report output.

pub mod args;
pub mod commands;
pub mod modules;
pub mod report;
pub mod reproduce;

use torsorkit::{Error, Guards, Result};

use args::{parse_invocation, Format, Invocation};
use report::Report;

pub const USAGE: &str = "\
usage: torsorkit <command> [key=value ...] [--json | --table] [--seed N]

commands:
  classify         n=<n> [aut=<a1,a2,..>]
  h1               group=<spec> module=<orders> [action=<spec>] | file=<path>
  cocycle-check    <module args> values=<v0;v1;..>
  picd             <module args> alpha=<v0;v1;..> d=<d>
  h1-real          a=<num/den> b=<num/den>
  ffcurve          p=<p> a=<a> b=<b>
  cubic            p=<p> coeffs=<c1,..,c10> [point=<x,y,z>]
  orbit            N=<N> m=<m> [phi=<u>] [psi=<u>] start=<x,y>
  polarized-check  N=<N> m=<m> [phi=<u>] [psi=<u>]
  sp               genus=<1|2> m=<m>
  brauer           n=<n> [br=<orders>] [brs=<g1;g2>] alpha=<x:g> beta=<y:e>
  reproduce        finite-field | real | existence | moduli-spaces [N=<N>] | polarized | fibration

groups: cyclic:n, product:a,b,.., symmetric:k, table:<row;row;..>, trivial
environment: WC_GUARD_SCALE=<k> multiplies every enumeration limit by k
exit codes: 0 success, 1 failed check or internal error, 2 invalid input
";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn failure(code: i32, msg: String) -> Outcome {
    Outcome {
        code,
        stdout: String::new(),
        stderr: msg,
    }
}

fn exit_code(e: &Error) -> i32 {
    if e.is_internal() {
        1
    } else {
        2
    }
}

pub fn guards_from_env(scale: Option<&str>) -> Result<Guards> {
    match scale {
        None => Ok(Guards::default()),
        Some(s) => {
            let k: u64 = s
                .trim()
                .parse()
                .map_err(|_| Error::invalid(format!("WC_GUARD_SCALE={s:?} is not an integer")))?;
            Guards::scaled(k)
        }
    }
}

fn dispatch(inv: &Invocation, guards: &Guards) -> Result<Report> {
    if inv.command != "reproduce" && !inv.positional.is_empty() {
        return Err(Error::parse(format!(
            "unexpected argument {:?} (arguments are key=value)",
            inv.positional[0]
        )));
    }
    match inv.command.as_str() {
        "classify" => commands::classify_cmd(inv, guards),
        "h1" => commands::h1_cmd(inv, guards),
        "cocycle-check" => commands::cocycle_check_cmd(inv, guards),
        "picd" => commands::picd_cmd(inv, guards),
        "h1-real" => commands::h1_real_cmd(inv),
        "ffcurve" => commands::ffcurve_cmd(inv, guards),
        "cubic" => commands::cubic_cmd(inv, guards),
        "orbit" => commands::orbit_cmd(inv, guards),
        "polarized-check" => commands::polarized_cmd(inv, guards),
        "sp" => commands::sp_cmd(inv, guards),
        "brauer" => commands::brauer_cmd(inv, guards),
        "reproduce" => reproduce::reproduce_cmd(inv, guards),
        other => Err(Error::parse(format!("unknown command {other:?}"))),
    }
}

/// Runs one command line (without the program name).
pub fn run(argv: &[String], guard_scale: Option<&str>) -> Outcome {
    if argv.is_empty() || argv.iter().any(|a| a == "--help" || a == "-h") {
        let code = if argv.is_empty() { 2 } else { 0 };
        return Outcome {
            code,
            stdout: if code == 0 { USAGE.into() } else { String::new() },
            stderr: if code == 0 { String::new() } else { USAGE.into() },
        };
    }
    let inv = match parse_invocation(argv) {
        Ok(inv) => inv,
        Err(e) => return failure(2, format!("error: {e}\n\n{USAGE}")),
    };
    let guards = match guards_from_env(guard_scale) {
        Ok(g) => g,
        Err(e) => return failure(2, format!("error: {e}\n")),
    };
    match dispatch(&inv, &guards) {
        Ok(report) => Outcome {
            code: if report.passed() { 0 } else { 1 },
            stdout: match inv.format {
                Format::Json => report.to_json(),
                Format::Table => report.to_table(),
            },
            stderr: String::new(),
        },
        Err(e) => failure(exit_code(&e), format!("error: {e}\n")),
    }
}
