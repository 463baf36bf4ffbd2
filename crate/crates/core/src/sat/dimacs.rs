//! DIMACS CNF reading and writing.
//!
//! Two comment extensions are understood: `c seed <s>` (generator seed) and
//! `c ns <k>` (known solution count). Other comments are dropped. Pinned
//! variables are written as trailing unit clauses.

use std::fmt::Write;

use super::{Clause, Literal, SatError, SatInstance};

pub fn emit_dimacs(instance: &SatInstance) -> String {
    let checks = instance.check_clauses();
    let mut out = String::new();
    if let Some(seed) = instance.seed() {
        let _ = writeln!(out, "c seed {seed}");
    }
    if let Some(ns) = instance.solution_count() {
        let _ = writeln!(out, "c ns {ns}");
    }
    let _ = writeln!(out, "p cnf {} {}", instance.n(), checks.len());
    for c in &checks {
        for l in &c.literals {
            let _ = write!(out, "{} ", l.to_dimacs());
        }
        out.push_str("0\n");
    }
    out
}

pub fn parse_dimacs(text: &str) -> Result<SatInstance, SatError> {
    let err = |line: usize, msg: String| SatError::Parse { line, msg };
    let mut header: Option<(usize, usize)> = None;
    let mut seed = None;
    let mut ns = None;
    let mut clauses = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('c') {
            if !(rest.is_empty() || rest.starts_with(char::is_whitespace)) {
                return Err(err(line_no, format!("unexpected token {line:?}")));
            }
            let mut words = rest.split_whitespace();
            match (words.next(), words.next(), words.next()) {
                (Some("seed"), Some(v), None) => {
                    seed = Some(v.parse().map_err(|_| err(line_no, format!("bad seed {v:?}")))?)
                }
                (Some("ns"), Some(v), None) => {
                    ns = Some(
                        v.parse()
                            .map_err(|_| err(line_no, format!("bad solution count {v:?}")))?,
                    )
                }
                _ => {}
            }
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(err(line_no, "duplicate header".into()));
            }
            let words: Vec<&str> = line.split_whitespace().collect();
            let parsed = match words.as_slice() {
                ["p", "cnf", n, m] => n.parse::<usize>().ok().zip(m.parse::<usize>().ok()),
                _ => None,
            };
            header = Some(parsed.ok_or_else(|| err(line_no, format!("malformed header {line:?}")))?);
            continue;
        }
        let Some((n, _)) = header else {
            return Err(err(line_no, "clause before `p cnf` header".into()));
        };
        for tok in line.split_whitespace() {
            let v: i64 = tok.parse().map_err(|_| err(line_no, format!("bad literal {tok:?}")))?;
            if v == 0 {
                if current.is_empty() || current.len() > 3 {
                    return Err(err(
                        line_no,
                        format!("clause of length {} (must be 1 to 3)", current.len()),
                    ));
                }
                clauses.push(Clause::new(std::mem::take(&mut current)));
                continue;
            }
            let var = v.unsigned_abs() as usize;
            if var > n {
                return Err(err(line_no, format!("literal {v} out of range for n = {n}")));
            }
            current.push(Literal {
                var: var - 1,
                negated: v < 0,
            });
            if current.len() > 3 {
                return Err(err(line_no, "clause longer than 3 literals".into()));
            }
        }
    }

    let Some((n, m)) = header else {
        return Err(err(last_line.max(1), "missing `p cnf` header".into()));
    };
    if !current.is_empty() {
        return Err(err(last_line, "unterminated clause".into()));
    }
    if clauses.len() != m {
        return Err(err(
            last_line,
            format!("header declares {m} clauses, found {}", clauses.len()),
        ));
    }
    Ok(SatInstance::new(n, clauses)?.with_seed(seed).with_solution_count(ns))
}
