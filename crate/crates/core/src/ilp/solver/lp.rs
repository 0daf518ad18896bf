//! CPLEX-style LP text: `Minimize`, `Subject To`, `Binary`, `End`.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::{LinRow, Problem, Sense};
use crate::ilp::IlpError;

fn write_terms(out: &mut String, terms: &[(i64, usize)], names: &[String]) {
    for &(c, v) in terms {
        let sign = if c < 0 { '-' } else { '+' };
        let _ = write!(out, " {sign} {} {}", c.abs(), names[v]);
    }
}

pub fn write_lp(p: &Problem) -> String {
    let mut out = String::from("Minimize\n obj:");
    if p.objective.is_empty() && !p.names.is_empty() {
        let _ = write!(out, " 0 {}", p.names[0]);
    }
    write_terms(&mut out, &p.objective, &p.names);
    out.push_str("\nSubject To\n");
    for (i, r) in p.rows.iter().enumerate() {
        if r.terms.is_empty() {
            if p.names.is_empty() {
                continue;
            }
            let _ = write!(out, " r{i}: 0 {}", p.names[0]);
        } else {
            let _ = write!(out, " r{i}:");
            write_terms(&mut out, &r.terms, &p.names);
        }
        let op = match r.sense {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        };
        let _ = writeln!(out, " {op} {}", r.rhs);
    }
    out.push_str("Binary\n");
    for n in &p.names {
        let _ = writeln!(out, " {n}");
    }
    out.push_str("End\n");
    out
}

#[derive(PartialEq)]
enum Section {
    None,
    Objective,
    Constraints,
    Binary,
}

struct RowBuilder {
    terms: Vec<(i64, String)>,
    sign: i64,
    coef: Option<i64>,
    sense: Option<Sense>,
    rhs_sign: i64,
}

impl RowBuilder {
    fn new() -> Self {
        RowBuilder {
            terms: Vec::new(),
            sign: 1,
            coef: None,
            sense: None,
            rhs_sign: 1,
        }
    }
}

fn is_name(tok: &str) -> bool {
    tok.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
}

pub fn parse_lp(text: &str) -> Result<Problem, IlpError> {
    let err = |m: String| IlpError::Solver(format!("LP parse: {m}"));
    let mut section = Section::None;
    let mut objective: Vec<(i64, String)> = Vec::new();
    let mut rows: Vec<(Vec<(i64, String)>, Sense, i64)> = Vec::new();
    let mut binaries: Vec<String> = Vec::new();
    let mut cur = RowBuilder::new();

    for raw in text.lines() {
        let line = raw.split('\\').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let lower = line.to_ascii_lowercase();
        match lower.as_str() {
            "minimize" | "minimise" | "min" => {
                section = Section::Objective;
                continue;
            }
            "subject to" | "st" | "s.t." | "such that" => {
                section = Section::Constraints;
                cur = RowBuilder::new();
                continue;
            }
            "binary" | "binaries" | "bin" => {
                section = Section::Binary;
                continue;
            }
            "end" => break,
            _ => {}
        }
        match section {
            Section::None => return Err(err(format!("text before a section: {line}"))),
            Section::Binary => binaries.extend(line.split_whitespace().map(str::to_string)),
            Section::Objective | Section::Constraints => {
                let body = match line.split_once(':') {
                    Some((_, rest)) => rest,
                    None => line,
                };
                let toks: Vec<&str> = body.split_whitespace().collect();
                for tok in toks {
                    match tok {
                        "+" => cur.sign = 1,
                        "-" if cur.sense.is_some() => cur.rhs_sign = -1,
                        "-" => cur.sign = -1,
                        "<=" | "=<" => cur.sense = Some(Sense::Le),
                        ">=" | "=>" => cur.sense = Some(Sense::Ge),
                        "=" => cur.sense = Some(Sense::Eq),
                        t if is_name(t) => {
                            let c = cur.sign * cur.coef.take().unwrap_or(1);
                            cur.terms.push((c, t.to_string()));
                            cur.sign = 1;
                        }
                        t => {
                            let v: i64 = t.parse().map_err(|_| err(format!("bad token `{t}`")))?;
                            if let Some(sense) = cur.sense {
                                if section != Section::Constraints {
                                    return Err(err("comparison in the objective".into()));
                                }
                                let terms = std::mem::take(&mut cur.terms);
                                rows.push((terms, sense, cur.rhs_sign * v));
                                cur = RowBuilder::new();
                            } else {
                                cur.coef = Some(v);
                            }
                        }
                    }
                }
                if section == Section::Objective {
                    objective.append(&mut cur.terms);
                    cur = RowBuilder::new();
                }
            }
        }
    }

    let mut index: HashMap<String, usize> = HashMap::new();
    let mut names = Vec::new();
    let all_names = binaries
        .iter()
        .cloned()
        .chain(objective.iter().map(|t| t.1.clone()))
        .chain(rows.iter().flat_map(|r| r.0.iter().map(|t| t.1.clone())));
    for n in all_names {
        if !index.contains_key(&n) {
            index.insert(n.clone(), names.len());
            names.push(n);
        }
    }
    let map = |ts: Vec<(i64, String)>| -> Vec<(i64, usize)> {
        ts.into_iter()
            .filter(|t| t.0 != 0)
            .map(|(c, n)| (c, index[&n]))
            .collect()
    };
    Ok(Problem {
        objective: map(objective),
        rows: rows
            .into_iter()
            .map(|(t, sense, rhs)| LinRow {
                terms: map(t),
                sense,
                rhs,
            })
            .collect(),
        names,
    })
}
