//! A strict QDIMACS subset: one `a` line, then one `e` line, then one
//! 0-terminated clause per line.

use std::fmt::{self, Write as _};

use crate::formula::{Clause, Formula, Lit, Prefix, Var};

/// A parse error or warning anchored to a 1-based input line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseDiagnostic {
    pub line: usize,
    pub message: String,
}

impl ParseDiagnostic {
    fn new(line: usize, message: impl Into<String>) -> ParseDiagnostic {
        ParseDiagnostic {
            line: line.max(1),
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseDiagnostic {}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ParseMode {
    /// Every clause must have one universal and two existential literals.
    #[default]
    Strict,
    /// Clauses of 1 to 3 literals with at most one universal literal.
    Lax,
}

#[derive(Clone, Debug)]
pub struct Parsed {
    pub formula: Formula,
    pub warnings: Vec<ParseDiagnostic>,
}

/// Parses QDIMACS from raw bytes. Never panics; malformed input yields a
/// diagnostic.
pub fn parse(bytes: &[u8], mode: ParseMode) -> Result<Parsed, ParseDiagnostic> {
    let text = std::str::from_utf8(bytes).map_err(|e| {
        let line = bytes[..e.valid_up_to()]
            .iter()
            .filter(|&&b| b == b'\n')
            .count()
            + 1;
        ParseDiagnostic::new(line, "input is not valid UTF-8")
    })?;
    parse_str(text, mode)
}

pub fn parse_str(text: &str, mode: ParseMode) -> Result<Parsed, ParseDiagnostic> {
    Parser::default().run(text, mode)
}

#[derive(Default)]
struct Parser {
    header: Option<(usize, usize)>,
    universals: Option<Vec<Var>>,
    existentials: Option<Vec<Var>>,
    clauses: Vec<Vec<i32>>,
    header_line: usize,
    last_line: usize,
}

impl Parser {
    fn run(mut self, text: &str, mode: ParseMode) -> Result<Parsed, ParseDiagnostic> {
        for (i, raw) in text.split('\n').enumerate() {
            let lineno = i + 1;
            let line = raw.strip_suffix('\r').unwrap_or(raw).trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            self.last_line = lineno;
            self.line(lineno, line, mode)?;
        }
        self.finish()
    }

    fn line(&mut self, lineno: usize, line: &str, mode: ParseMode) -> Result<(), ParseDiagnostic> {
        let err = |msg: String| Err(ParseDiagnostic::new(lineno, msg));
        let mut tokens = line.split_whitespace();
        let first = tokens.next().unwrap_or_default();

        let Some((nvars, _)) = self.header else {
            if first != "p" {
                return err(format!(
                    "expected header `p cnf <vars> <clauses>`, found `{line}`"
                ));
            }
            let fields: Vec<&str> = tokens.collect();
            let [fmt, vars, clauses] = fields[..] else {
                return err("header must be `p cnf <vars> <clauses>`".into());
            };
            if fmt != "cnf" {
                return err(format!("unsupported format `{fmt}`, expected `cnf`"));
            }
            let (Ok(vars), Ok(clauses)) = (vars.parse::<usize>(), clauses.parse::<usize>()) else {
                return err("header counts must be non-negative integers".into());
            };
            if vars > i32::MAX as usize {
                return err("too many variables".into());
            }
            self.header = Some((vars, clauses));
            self.header_line = lineno;
            return Ok(());
        };

        match first {
            "p" => return err("duplicate header".into()),
            "a" | "e" => return self.block(lineno, first, tokens, nvars),
            _ => {}
        }

        if self.existentials.is_none() {
            let missing = if self.universals.is_none() {
                "`a`"
            } else {
                "`e`"
            };
            return err(format!("missing {missing} quantifier line before clauses"));
        }
        let nums = integers(lineno, line.split_whitespace())?;
        let Some((&0, lits)) = nums.split_last() else {
            return err("clause is not terminated by 0".into());
        };
        if lits.contains(&0) {
            return err("one clause per line: 0 appears before the end of the line".into());
        }
        if let Some(&l) = lits.iter().find(|l| l.unsigned_abs() as usize > nvars) {
            return err(format!(
                "variable {} is undeclared (header declares {nvars})",
                l.unsigned_abs()
            ));
        }
        self.check_shape(lineno, lits, mode)?;
        self.clauses.push(lits.to_vec());
        Ok(())
    }

    fn block<'a>(
        &mut self,
        lineno: usize,
        kind: &str,
        tokens: impl Iterator<Item = &'a str>,
        nvars: usize,
    ) -> Result<(), ParseDiagnostic> {
        let err = |msg: String| Err(ParseDiagnostic::new(lineno, msg));
        if !self.clauses.is_empty() {
            return err(format!("`{kind}` line after clauses"));
        }
        match (kind, &self.universals, &self.existentials) {
            ("a", None, _) | ("e", Some(_), None) => {}
            ("a", Some(_), _) => return err("only one `a` block is supported".into()),
            ("e", None, _) => return err("the `a` line must precede the `e` line".into()),
            _ => return err("only one `e` block is supported".into()),
        }
        let nums = integers(lineno, tokens)?;
        let Some((&0, vars)) = nums.split_last() else {
            return err(format!("`{kind}` line is not terminated by 0"));
        };
        let mut block = Vec::with_capacity(vars.len());
        for &v in vars {
            if v <= 0 {
                return err(format!("quantified variable must be positive, found {v}"));
            }
            if v as usize > nvars {
                return err(format!(
                    "variable {v} exceeds the header's {nvars} variables"
                ));
            }
            let var = Var::new(v as u32);
            let seen =
                block.contains(&var) || self.universals.as_ref().is_some_and(|u| u.contains(&var));
            if seen {
                return err(format!("variable {v} is quantified twice"));
            }
            block.push(var);
        }
        if kind == "a" {
            self.universals = Some(block);
        } else {
            self.existentials = Some(block);
        }
        Ok(())
    }

    fn check_shape(
        &self,
        lineno: usize,
        lits: &[i32],
        mode: ParseMode,
    ) -> Result<(), ParseDiagnostic> {
        let universals = self.universals.as_deref().unwrap_or_default();
        let n_univ = lits
            .iter()
            .filter(|l| universals.contains(&Var::new(l.unsigned_abs())))
            .count();
        let mut vars: Vec<u32> = lits.iter().map(|l| l.unsigned_abs()).collect();
        vars.sort_unstable();
        vars.dedup();
        let distinct = vars.len() == lits.len();
        let ok = match mode {
            ParseMode::Strict => lits.len() == 3 && n_univ == 1 && distinct,
            ParseMode::Lax => (1..=3).contains(&lits.len()) && n_univ <= 1,
        };
        if ok {
            return Ok(());
        }
        let msg = match mode {
            ParseMode::Strict => format!(
                "clause must have exactly one universal and two existential literals on distinct variables \
                 (found {} literals, {n_univ} universal)",
                lits.len()
            ),
            ParseMode::Lax => format!(
                "clause must have 1 to 3 literals with at most one universal (found {} literals, {n_univ} universal)",
                lits.len()
            ),
        };
        Err(ParseDiagnostic::new(lineno, msg))
    }

    fn finish(self) -> Result<Parsed, ParseDiagnostic> {
        let end = self.last_line.max(1);
        let Some((nvars, nclauses)) = self.header else {
            return Err(ParseDiagnostic::new(
                end,
                "missing header `p cnf <vars> <clauses>`",
            ));
        };
        let universals = self
            .universals
            .ok_or_else(|| ParseDiagnostic::new(end, "missing `a` quantifier line"))?;
        let mut existentials = self
            .existentials
            .ok_or_else(|| ParseDiagnostic::new(end, "missing `e` quantifier line"))?;
        if self.clauses.len() != nclauses {
            return Err(ParseDiagnostic::new(
                end,
                format!(
                    "header declares {nclauses} clauses but {} were found",
                    self.clauses.len()
                ),
            ));
        }

        let mut warnings = Vec::new();
        let mut declared = vec![false; nvars];
        for v in universals.iter().chain(&existentials) {
            declared[v.index()] = true;
        }
        let free: Vec<Var> = (1..=nvars as u32)
            .map(Var::new)
            .filter(|v| !declared[v.index()])
            .collect();
        if !free.is_empty() {
            let list: Vec<String> = free.iter().map(Var::to_string).collect();
            warnings.push(ParseDiagnostic::new(
                self.header_line,
                format!(
                    "unquantified variables {} treated as existential",
                    list.join(" ")
                ),
            ));
            existentials.extend(free);
        }

        let prefix = Prefix::new(universals, existentials)
            .map_err(|e| ParseDiagnostic::new(end, e.to_string()))?;
        let clauses = self
            .clauses
            .iter()
            .filter_map(|c| Clause::new(c.iter().map(|&l| Lit::from_dimacs(l)).collect()))
            .collect();
        let formula =
            Formula::new(prefix, clauses).map_err(|e| ParseDiagnostic::new(end, e.to_string()))?;
        Ok(Parsed { formula, warnings })
    }
}

fn integers<'a>(
    lineno: usize,
    tokens: impl Iterator<Item = &'a str>,
) -> Result<Vec<i32>, ParseDiagnostic> {
    tokens
        .map(|t| {
            t.parse::<i32>()
                .ok()
                .filter(|&v| v != i32::MIN)
                .ok_or_else(|| {
                    ParseDiagnostic::new(lineno, format!("`{t}` is not an integer literal"))
                })
        })
        .collect()
}

/// Canonical QDIMACS text. Clauses keep their stored order.
pub fn serialize(formula: &Formula) -> String {
    let prefix = formula.prefix();
    let mut out = String::new();
    writeln!(out, "p cnf {} {}", prefix.num_vars(), formula.m()).unwrap();
    for (tag, block) in [("a", prefix.universals()), ("e", prefix.existentials())] {
        out.push_str(tag);
        for v in block {
            write!(out, " {v}").unwrap();
        }
        out.push_str(" 0\n");
    }
    for c in formula.clauses() {
        for l in c.lits() {
            write!(out, "{l} ").unwrap();
        }
        out.push_str("0\n");
    }
    out
}
