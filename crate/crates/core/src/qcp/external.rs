//! Text exchange with an external nonconvex QCP solver.
//!
//! The system file has a header `qcp <m> <n> <eps> <x_max> <y_max>` and one
//! `row <voter> <a> <b>` line per constraint (zero-based ids). The command gets the file
//! path as its last argument and prints `FEASIBLE` followed by
//! `<kind> <id> <x> <y>` lines, or `INFEASIBLE` / `TIME_LIMIT`.

use std::fmt::Write as _;
use std::io::Read;
use std::process::{Command, Stdio};
use std::thread;
use std::time::Duration;

use super::{Embedding, QcpError, QcpRow, QcpSystem};
use crate::budget::Stop;
use crate::election::Candidate;

pub fn write_qcp_system(sys: &QcpSystem) -> String {
    let mut out = format!("qcp {} {} {} {} {}\n", sys.m, sys.n, sys.eps_star, sys.x_max, sys.y_max);
    for r in &sys.rows {
        let _ = writeln!(out, "row {} {} {}", r.voter, r.a.0, r.b.0);
    }
    out
}

pub fn parse_qcp_system(text: &str) -> Result<QcpSystem, QcpError> {
    let mut sys: Option<QcpSystem> = None;
    for line in text.lines() {
        let p: Vec<&str> = line.split_whitespace().collect();
        let bad = || QcpError::Malformed(line.to_string());
        match p.first().copied() {
            Some("qcp") if p.len() == 6 => {
                sys = Some(QcpSystem {
                    m: p[1].parse().map_err(|_| bad())?,
                    n: p[2].parse().map_err(|_| bad())?,
                    rows: Vec::new(),
                    eps_star: p[3].parse().map_err(|_| bad())?,
                    x_max: p[4].parse().map_err(|_| bad())?,
                    y_max: p[5].parse().map_err(|_| bad())?,
                })
            }
            Some("row") if p.len() == 4 => {
                let s = sys.as_mut().ok_or_else(bad)?;
                let row = QcpRow {
                    voter: p[1].parse().map_err(|_| bad())?,
                    a: Candidate(p[2].parse().map_err(|_| bad())?),
                    b: Candidate(p[3].parse().map_err(|_| bad())?),
                };
                if row.voter >= s.n || row.a.index() >= s.m || row.b.index() >= s.m {
                    return Err(bad());
                }
                s.rows.push(row);
            }
            None => {}
            _ => return Err(bad()),
        }
    }
    sys.ok_or_else(|| QcpError::Malformed("missing header".into()))
}

pub(crate) fn solve_external_qcp(sys: &QcpSystem, cmd: &str, stop: &Stop) -> Option<Embedding> {
    let mut file = tempfile::Builder::new().suffix(".qcp").tempfile().ok()?;
    std::io::Write::write_all(&mut file, write_qcp_system(sys).as_bytes()).ok()?;
    let path = file.path().to_string_lossy().into_owned();
    let mut child = Command::new("sh")
        .arg("-c")
        .arg(format!("{cmd} '{path}'"))
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .ok()?;
    let mut stdout = child.stdout.take()?;
    let reader = thread::spawn(move || {
        let mut s = String::new();
        let _ = stdout.read_to_string(&mut s);
        s
    });
    loop {
        match child.try_wait().ok()? {
            Some(_) => break,
            None if stop.should_stop() => {
                let _ = child.kill();
                let _ = child.wait();
                return None;
            }
            None => thread::sleep(Duration::from_millis(5)),
        }
    }
    let out = reader.join().ok()?;
    if out.lines().next().map(str::trim) != Some("FEASIBLE") {
        return None;
    }
    Embedding::from_lines(&out, sys.m, sys.n).ok()
}
