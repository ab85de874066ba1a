//! DIMACS CNF and WCNF reading and writing.
//!
//! The accepted dialect:
//! - comment lines start with `c`;
//! - one header, `p cnf <vars> <clauses>` or `p wcnf <vars> <clauses> [top]`;
//! - clauses are whitespace separated integers terminated by `0` and may span lines;
//!   in WCNF the first integer of every clause is its weight;
//! - a `%` line ends the clause section, and a lone `0` line after the final clause
//!   is ignored (the SATLIB trailer).

use std::fmt::Write as _;

use crate::error::ParseError;
use crate::formula::{Clause, Formula, Literal};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Dialect {
    Cnf,
    Wcnf,
}

#[derive(Debug, Clone, Copy)]
struct Header {
    dialect: Dialect,
    num_vars: usize,
    num_clauses: usize,
    top: Option<u64>,
}

/// Parses a `p cnf` instance. All clauses are soft with weight 1.
pub fn parse_cnf(text: &str) -> Result<Formula, ParseError> {
    parse_with(text, Some(Dialect::Cnf))
}

/// Parses a `p wcnf` instance. Clauses whose weight equals `top` are hard.
pub fn parse_wcnf(text: &str) -> Result<Formula, ParseError> {
    parse_with(text, Some(Dialect::Wcnf))
}

/// Parses either dialect, chosen by the header.
pub fn parse_dimacs(text: &str) -> Result<Formula, ParseError> {
    parse_with(text, None)
}

fn parse_header(line_no: usize, line: &str) -> Result<Header, ParseError> {
    let malformed = || ParseError::MalformedHeader {
        line: line_no,
        text: line.to_string(),
    };
    let tokens: Vec<&str> = line.split_whitespace().collect();
    let num = |i: usize| -> Result<u64, ParseError> {
        tokens
            .get(i)
            .and_then(|t| t.parse::<u64>().ok())
            .ok_or_else(malformed)
    };
    if tokens.first() != Some(&"p") {
        return Err(malformed());
    }
    match (tokens.get(1).copied(), tokens.len()) {
        (Some("cnf"), 4) => Ok(Header {
            dialect: Dialect::Cnf,
            num_vars: num(2)? as usize,
            num_clauses: num(3)? as usize,
            top: None,
        }),
        (Some("wcnf"), 4 | 5) => Ok(Header {
            dialect: Dialect::Wcnf,
            num_vars: num(2)? as usize,
            num_clauses: num(3)? as usize,
            top: if tokens.len() == 5 { Some(num(4)?) } else { None },
        }),
        _ => Err(malformed()),
    }
}

struct ClauseBuilder {
    header: Header,
    clauses: Vec<Clause>,
    literals: Vec<Literal>,
    weight: Option<u64>,
}

impl ClauseBuilder {
    fn in_clause(&self) -> bool {
        !self.literals.is_empty() || self.weight.is_some()
    }

    fn token(&mut self, line: usize, token: &str) -> Result<(), ParseError> {
        let value: i64 = token.parse().map_err(|_| ParseError::InvalidToken {
            line,
            token: token.to_string(),
        })?;

        if self.header.dialect == Dialect::Wcnf && self.weight.is_none() {
            if value < 0 {
                return Err(ParseError::NegativeWeight {
                    line,
                    weight: value,
                });
            }
            let weight = value as u64;
            if let Some(top) = self.header.top {
                if weight > top {
                    return Err(ParseError::WeightExceedsTop { line, weight, top });
                }
            }
            self.weight = Some(weight);
            return Ok(());
        }

        match Literal::from_dimacs(value) {
            Some(lit) => {
                if lit.var > self.header.num_vars {
                    return Err(ParseError::VarOutOfRange {
                        line,
                        var: value.unsigned_abs(),
                        num_vars: self.header.num_vars,
                    });
                }
                self.literals.push(lit);
            }
            None => self.finish_clause(line)?,
        }
        Ok(())
    }

    fn finish_clause(&mut self, line: usize) -> Result<(), ParseError> {
        if self.literals.is_empty() {
            return Err(ParseError::EmptyClause { line });
        }
        if self.clauses.len() == self.header.num_clauses {
            return Err(ParseError::ClauseCountMismatch {
                line,
                expected: self.header.num_clauses,
                found: self.clauses.len() + 1,
            });
        }
        let weight = self.weight.take().unwrap_or(1);
        let hard = self.header.top == Some(weight);
        self.clauses.push(Clause {
            literals: std::mem::take(&mut self.literals),
            weight,
            hard,
        });
        Ok(())
    }
}

fn parse_with(text: &str, expect: Option<Dialect>) -> Result<Formula, ParseError> {
    let mut builder: Option<ClauseBuilder> = None;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('p') {
            if builder.is_some() {
                return Err(ParseError::DuplicateHeader { line: line_no });
            }
            let header = parse_header(line_no, line)?;
            if expect.is_some_and(|d| d != header.dialect) {
                return Err(ParseError::MalformedHeader {
                    line: line_no,
                    text: line.to_string(),
                });
            }
            builder = Some(ClauseBuilder {
                header,
                clauses: Vec::with_capacity(header.num_clauses),
                literals: Vec::new(),
                weight: None,
            });
            continue;
        }
        let b = builder
            .as_mut()
            .ok_or(ParseError::MissingHeader { line: line_no })?;
        if line.starts_with('%') {
            break;
        }
        if line == "0" && !b.in_clause() && b.clauses.len() == b.header.num_clauses {
            continue;
        }
        for token in line.split_whitespace() {
            b.token(line_no, token)?;
        }
    }

    let b = builder.ok_or(ParseError::MissingHeader {
        line: last_line.max(1),
    })?;
    if b.in_clause() {
        return Err(ParseError::UnterminatedClause { line: last_line });
    }
    if b.clauses.len() != b.header.num_clauses {
        return Err(ParseError::ClauseCountMismatch {
            line: last_line,
            expected: b.header.num_clauses,
            found: b.clauses.len(),
        });
    }
    Ok(Formula {
        num_vars: b.header.num_vars,
        clauses: b.clauses,
        top_weight: b.header.top,
        declared_class: None,
    })
}

fn write_literals(out: &mut String, clause: &Clause) {
    for lit in &clause.literals {
        let _ = write!(out, "{} ", lit.to_dimacs());
    }
    out.push_str("0\n");
}

/// Canonical `p cnf` text, one clause per line. Weights and hard marks are dropped.
pub fn write_cnf(f: &Formula) -> String {
    let mut out = format!("p cnf {} {}\n", f.num_vars, f.clauses.len());
    for clause in &f.clauses {
        write_literals(&mut out, clause);
    }
    out
}

/// Canonical `p wcnf` text, one weighted clause per line.
///
/// Hard clauses are written at the top weight. Without a recorded top, the
/// largest hard weight serves as one.
pub fn write_wcnf(f: &Formula) -> String {
    let hard_max = f.clauses.iter().filter(|c| c.hard).map(|c| c.weight).max();
    let top = f.top_weight.or(hard_max);
    let mut out = match top {
        Some(top) => format!("p wcnf {} {} {}\n", f.num_vars, f.clauses.len(), top),
        None => format!("p wcnf {} {}\n", f.num_vars, f.clauses.len()),
    };
    for clause in &f.clauses {
        let weight = match top {
            Some(top) if clause.hard => top,
            _ => clause.weight,
        };
        let _ = write!(out, "{weight} ");
        write_literals(&mut out, clause);
    }
    out
}

/// Writes CNF when the formula is plain unweighted, WCNF otherwise.
pub fn write_dimacs(f: &Formula) -> String {
    let plain = f.top_weight.is_none() && f.clauses.iter().all(|c| c.weight == 1 && !c.hard);
    if plain {
        write_cnf(f)
    } else {
        write_wcnf(f)
    }
}
