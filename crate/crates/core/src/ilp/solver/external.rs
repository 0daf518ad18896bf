//! Bridge to an external MIP solver through an LP file.
//!
//! The command is run through `sh -c` with the LP path appended. Its standard output
//! must contain a status line (`OPTIMAL`, `INFEASIBLE` or `TIME_LIMIT`) optionally
//! followed by `<variable> <value>` lines; unlisted variables are 0.

use std::collections::HashMap;
use std::io::Read;
use std::process::{Command, Stdio};
use std::thread;
use std::time::Duration;

use super::{write_lp, Problem, SolveStatus};
use crate::budget::Stop;
use crate::ilp::IlpError;

pub fn solve_external(p: &Problem, cmd: &str, stop: &Stop) -> Result<SolveStatus, IlpError> {
    let err = |m: String| IlpError::Solver(m);
    let mut file = tempfile::Builder::new()
        .suffix(".lp")
        .tempfile()
        .map_err(|e| err(e.to_string()))?;
    std::io::Write::write_all(&mut file, write_lp(p).as_bytes()).map_err(|e| err(e.to_string()))?;
    let path = file.path().to_string_lossy().into_owned();

    let mut child = Command::new("sh")
        .arg("-c")
        .arg(format!("{cmd} '{path}'"))
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .map_err(|e| err(format!("cannot start `{cmd}`: {e}")))?;
    let mut stdout = child.stdout.take().expect("piped");
    let reader = thread::spawn(move || {
        let mut s = String::new();
        let _ = stdout.read_to_string(&mut s);
        s
    });
    loop {
        match child.try_wait().map_err(|e| err(e.to_string()))? {
            Some(_) => break,
            None if stop.should_stop() => {
                let _ = child.kill();
                let _ = child.wait();
                return Ok(SolveStatus::Unknown);
            }
            None => thread::sleep(Duration::from_millis(5)),
        }
    }
    let out = reader.join().map_err(|_| err("reader thread panicked".into()))?;
    parse_solution(p, &out)
}

fn parse_solution(p: &Problem, out: &str) -> Result<SolveStatus, IlpError> {
    let index: HashMap<&str, usize> = p.names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let mut status = None;
    let mut values = vec![false; p.num_vars()];
    for line in out.lines() {
        let mut it = line.split_whitespace();
        let Some(first) = it.next() else { continue };
        match first {
            "OPTIMAL" | "INFEASIBLE" | "TIME_LIMIT" if status.is_none() => status = Some(first.to_string()),
            name => {
                if let (Some(&v), Some(val)) = (index.get(name), it.next()) {
                    let x: f64 = val
                        .parse()
                        .map_err(|_| IlpError::Solver(format!("bad value for {name}")))?;
                    values[v] = x > 0.5;
                }
            }
        }
    }
    match status.as_deref() {
        Some("INFEASIBLE") => Ok(SolveStatus::Infeasible),
        Some("OPTIMAL") if p.rows.iter().all(|r| r.holds(&values)) => {
            Ok(SolveStatus::Feasible { values, optimal: true })
        }
        Some("OPTIMAL") => Err(IlpError::Solver("reported assignment violates the model".into())),
        Some("TIME_LIMIT") => {
            if p.rows.iter().all(|r| r.holds(&values)) && values.iter().any(|&b| b) {
                Ok(SolveStatus::Feasible { values, optimal: false })
            } else {
                Ok(SolveStatus::Unknown)
            }
        }
        _ => Err(IlpError::Solver("no status keyword in solver output".into())),
    }
}
