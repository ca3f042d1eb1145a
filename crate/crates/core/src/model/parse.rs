//! Text format for networks.
//!
//! One line per variable:
//!
//! ```text
//! # comment
//! X1 = X2 & X3
//! X2 = ?
//! X3 = X3
//! ```
//!
//! `?` marks a controlled variable. `#` starts a comment, blank lines are
//! skipped, and definitions may appear in any order. When every name has the
//! form `X<i>` the number is the variable index; otherwise names are opaque
//! identifiers and indices follow definition order (the reduction emits such
//! files with `E<u>_<v>` / `V<u>` names).

use thiserror::Error;

use super::{Cbcn, UpdateRule};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: syntax error: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: update of {name} is constant; every variable needs a non-constant update (add a control instead)")]
    ConstantUpdate { line: usize, name: String },
    #[error("line {line}: variable index {index} out of range 1..={n}")]
    IndexOutOfRange { line: usize, index: usize, n: usize },
    #[error("line {line}: duplicate definition of {name}")]
    DuplicateDefinition { line: usize, name: String },
    #[error("variable {name} has no definition")]
    MissingDefinition { name: String },
    #[error("line {line}: {name} is used but never defined")]
    UndefinedVariable { line: usize, name: String },
    #[error("line {line}: expected only '{expected}' between operands")]
    MixedOperators { line: usize, expected: char },
    #[error("no variable definitions found")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum RawRhs {
    Controlled,
    Operands(Vec<String>),
}

struct RawDef {
    line: usize,
    name: String,
    rhs: RawRhs,
}

fn is_ident(token: &str) -> bool {
    let mut chars = token.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// `X<i>` with a decimal index, the canonical naming scheme.
fn canonical_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('X')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

fn split_line(line_no: usize, text: &str, separator: char) -> Result<Option<RawDef>, ParseError> {
    let text = match text.find('#') {
        Some(pos) => &text[..pos],
        None => text,
    };
    let text = text.trim();
    if text.is_empty() {
        return Ok(None);
    }
    let (lhs, rhs) = text.split_once('=').ok_or_else(|| ParseError::Syntax {
        line: line_no,
        msg: "expected `NAME = ...`".into(),
    })?;
    let name = lhs.trim();
    if !is_ident(name) {
        return Err(ParseError::Syntax {
            line: line_no,
            msg: format!("invalid variable name {name:?}"),
        });
    }
    let rhs = rhs.trim();
    if rhs == "?" {
        return Ok(Some(RawDef {
            line: line_no,
            name: name.to_string(),
            rhs: RawRhs::Controlled,
        }));
    }
    if rhs.is_empty() {
        return Err(ParseError::ConstantUpdate {
            line: line_no,
            name: name.to_string(),
        });
    }
    let other = if separator == '&' { '|' } else { '&' };
    if rhs.contains(other) {
        return Err(ParseError::MixedOperators {
            line: line_no,
            expected: separator,
        });
    }
    let mut operands = Vec::new();
    for token in rhs.split(separator) {
        let token = token.trim();
        if token == "0" || token == "1" {
            return Err(ParseError::ConstantUpdate {
                line: line_no,
                name: name.to_string(),
            });
        }
        if !is_ident(token) {
            return Err(ParseError::Syntax {
                line: line_no,
                msg: format!("invalid operand {token:?}"),
            });
        }
        operands.push(token.to_string());
    }
    Ok(Some(RawDef {
        line: line_no,
        name: name.to_string(),
        rhs: RawRhs::Operands(operands),
    }))
}

fn assemble(defs: Vec<RawDef>) -> Result<Cbcn, ParseError> {
    if defs.is_empty() {
        return Err(ParseError::Empty);
    }

    let canonical = defs.iter().all(|d| canonical_index(&d.name).is_some());

    // Variable index per definition, plus the total count.
    let mut indices = Vec::with_capacity(defs.len());
    let n;
    if canonical {
        let mut seen: Vec<Option<usize>> = Vec::new();
        let mut max = 0usize;
        for def in &defs {
            let idx = canonical_index(&def.name).unwrap();
            if idx == 0 {
                return Err(ParseError::IndexOutOfRange {
                    line: def.line,
                    index: 0,
                    n: defs.len(),
                });
            }
            max = max.max(idx);
            indices.push(idx);
        }
        n = max;
        seen.resize(n, None);
        for (def, &idx) in defs.iter().zip(&indices) {
            if seen[idx - 1].is_some() {
                return Err(ParseError::DuplicateDefinition {
                    line: def.line,
                    name: def.name.clone(),
                });
            }
            seen[idx - 1] = Some(def.line);
        }
        if let Some(gap) = seen.iter().position(|s| s.is_none()) {
            return Err(ParseError::MissingDefinition {
                name: format!("X{}", gap + 1),
            });
        }
    } else {
        n = defs.len();
        for (pos, def) in defs.iter().enumerate() {
            if defs[..pos].iter().any(|d| d.name == def.name) {
                return Err(ParseError::DuplicateDefinition {
                    line: def.line,
                    name: def.name.clone(),
                });
            }
            indices.push(pos + 1);
        }
    }

    let resolve = |line: usize, name: &str| -> Result<usize, ParseError> {
        if canonical {
            let idx = canonical_index(name).ok_or_else(|| ParseError::UndefinedVariable {
                line,
                name: name.to_string(),
            })?;
            if idx == 0 || idx > n {
                return Err(ParseError::IndexOutOfRange {
                    line,
                    index: idx,
                    n,
                });
            }
            Ok(idx)
        } else {
            defs.iter()
                .position(|d| d.name == name)
                .map(|pos| indices[pos])
                .ok_or_else(|| ParseError::UndefinedVariable {
                    line,
                    name: name.to_string(),
                })
        }
    };

    let mut rules = vec![None; n];
    for (def, &idx) in defs.iter().zip(&indices) {
        let rule = match &def.rhs {
            RawRhs::Controlled => UpdateRule::Controlled,
            RawRhs::Operands(names) => {
                let mut set = Vec::with_capacity(names.len());
                for name in names {
                    set.push(resolve(def.line, name)?);
                }
                UpdateRule::Conjunction(set)
            }
        };
        rules[idx - 1] = Some(rule);
    }
    let rules = rules.into_iter().map(Option::unwrap).collect();
    Ok(Cbcn::new(rules).expect("assembled rules are validated during parsing"))
}

/// Parses a conjunctive network description. The result carries the controlled
/// set `I`; it is empty when no `?` line appears.
pub fn parse_cbn(text: &str) -> Result<Cbcn, ParseError> {
    let mut defs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if let Some(def) = split_line(i + 1, line, '&')? {
            defs.push(def);
        }
    }
    assemble(defs)
}

/// Parses a disjunctive network (`|` between operands) and returns the
/// conjunctive network with the same update sets.
///
/// The two systems correspond through component-wise complement: a trajectory
/// of the OR network from state `s` is the complement of the AND network's
/// trajectory from `!s` (inputs complemented likewise). Controllability is
/// therefore decided by the returned network as-is.
pub fn dbn_to_cbn(text: &str) -> Result<Cbcn, ParseError> {
    let mut defs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if let Some(def) = split_line(i + 1, line, '|')? {
            defs.push(def);
        }
    }
    assemble(defs)
}

/// Writes a network in the canonical text format, one variable per line in
/// ascending order. The output parses back to an identical network.
pub fn write_cbn(net: &Cbcn) -> String {
    let mut out = String::new();
    for v in net.vars() {
        match net.rule(v) {
            UpdateRule::Controlled => out.push_str(&format!("X{v} = ?\n")),
            UpdateRule::Conjunction(set) => {
                let rhs: Vec<String> = set.iter().map(|j| format!("X{j}")).collect();
                out.push_str(&format!("X{v} = {}\n", rhs.join(" & ")));
            }
        }
    }
    out
}
