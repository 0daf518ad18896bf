//! Reader and writer for the PrefLib `.soc` format (strict orders, complete lists).

use std::fmt::Write as _;

use thiserror::Error;

use super::{Candidate, Election, ElectionError, Vote};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SocError {
    #[error("line {line}: ranking has ties or is incomplete")]
    TieOrIncomplete { line: usize },
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
}

fn malformed(line: usize, msg: impl Into<String>) -> SocError {
    SocError::Malformed {
        line,
        msg: msg.into(),
    }
}

fn header_value<'a>(body: &'a str, key: &str) -> Option<&'a str> {
    let rest = body.strip_prefix(key)?;
    Some(rest.trim_start().strip_prefix(':')?.trim())
}

pub fn parse_soc(text: &str) -> Result<Election, SocError> {
    let mut declared_m: Option<usize> = None;
    let mut names: Vec<(usize, String)> = Vec::new();
    let mut rows: Vec<(usize, u64, Vec<u32>)> = Vec::new();

    for (k, raw) in text.lines().enumerate() {
        let lineno = k + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(body) = line.strip_prefix('#') {
            let body = body.trim();
            if let Some(v) = header_value(body, "NUMBER ALTERNATIVES") {
                let m = v
                    .parse()
                    .map_err(|_| malformed(lineno, "bad NUMBER ALTERNATIVES"))?;
                declared_m = Some(m);
            } else if let Some(rest) = body.strip_prefix("ALTERNATIVE NAME") {
                let (id, name) = rest
                    .split_once(':')
                    .ok_or_else(|| malformed(lineno, "bad ALTERNATIVE NAME"))?;
                let id: usize = id
                    .trim()
                    .parse()
                    .map_err(|_| malformed(lineno, "bad alternative id"))?;
                names.push((id, name.trim().to_string()));
            }
            // NUMBER VOTERS and every other comment are informational only.
            continue;
        }
        if line.contains('{') || line.contains('}') {
            return Err(SocError::TieOrIncomplete { line: lineno });
        }
        let (count, ranking) = line
            .split_once(':')
            .ok_or_else(|| malformed(lineno, "expected `<count>: <ranking>`"))?;
        let count: u64 = count
            .trim()
            .parse()
            .map_err(|_| malformed(lineno, "bad multiplicity"))?;
        if count == 0 {
            return Err(malformed(lineno, "multiplicity must be positive"));
        }
        let ids = ranking
            .split(',')
            .map(|t| t.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| malformed(lineno, "bad candidate id"))?;
        rows.push((lineno, count, ids));
    }

    let m = match declared_m {
        Some(m) => m,
        None => match rows.first() {
            Some((_, _, ids)) => ids.len(),
            None => return Err(malformed(0, "no alternatives declared and no rankings")),
        },
    };

    let mut labels: Vec<String> = (1..=m).map(|i| i.to_string()).collect();
    for (id, name) in names {
        if id == 0 || id > m {
            return Err(malformed(0, format!("alternative name for unknown id {id}")));
        }
        labels[id - 1] = name;
    }

    let mut votes = Vec::with_capacity(rows.len());
    for (lineno, count, ids) in rows {
        if ids.iter().any(|&i| i == 0 || i as usize > m) {
            return Err(malformed(lineno, "candidate id out of range"));
        }
        if ids.len() != m {
            return Err(SocError::TieOrIncomplete { line: lineno });
        }
        let vote = Vote::new(ids.iter().map(|&i| Candidate(i - 1)).collect())
            .map_err(|_| SocError::TieOrIncomplete { line: lineno })?;
        votes.push((vote, count));
    }
    Election::new(labels, votes).map_err(|e: ElectionError| malformed(0, e.to_string()))
}

pub fn write_soc(e: &Election) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# DATA TYPE: soc");
    let _ = writeln!(out, "# NUMBER ALTERNATIVES: {}", e.num_candidates());
    for c in e.candidates() {
        let _ = writeln!(out, "# ALTERNATIVE NAME {}: {}", c.0 + 1, e.label(c));
    }
    let _ = writeln!(out, "# NUMBER VOTERS: {}", e.num_voters());
    let _ = writeln!(out, "# NUMBER UNIQUE ORDERS: {}", e.num_votes());
    for (i, v) in e.votes().iter().enumerate() {
        let _ = writeln!(out, "{}: {}", e.multiplicity(i), v.to_soc_line());
    }
    out
}
