//! Line-oriented text formats.
//!
//! Board (`.odg`):
//!
//! ```text
//! # comment
//! rows 4
//! cols 4
//! circle 1 1 0
//! circle 1 2
//! skewer 1 2 1 3
//! ```
//!
//! Coloring (`.sol`): one line per grid row, one character per cell, `B`
//! or `W` on circles and `.` on empty cells.
//!
//! 1-in-3SAT (`.c13`): header `p 1in3 <nvars> <nclauses>`, then one clause
//! per line as three nonzero literals terminated by `0`.
//!
//! All parsers accept `#` comment lines, blank lines, surplus whitespace
//! and CRLF endings. Writers emit LF.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::board::{Board, CellCoord, Color, Coloring};
use crate::reduction::{Literal, OneInThreeInstance, ReducedPuzzle};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagnosticKind {
    /// Malformed or misplaced text.
    Syntax,
    /// Well-formed text describing an invalid board.
    Structure,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseDiagnostic {
    /// 1-based; 0 when the problem concerns the input as a whole.
    pub line: usize,
    /// 1-based character column; 0 when not tied to a token.
    pub column: usize,
    pub message: String,
    pub severity: Severity,
    pub kind: DiagnosticKind,
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}:{}: {sev}: {}", self.line, self.column, self.message)
    }
}

/// Parse failure carrying every diagnostic gathered (errors and warnings).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}", render(.diagnostics))]
pub struct ParseError {
    pub diagnostics: Vec<ParseDiagnostic>,
}

fn render(diags: &[ParseDiagnostic]) -> String {
    diags.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("\n")
}

impl ParseError {
    pub fn errors(&self) -> impl Iterator<Item = &ParseDiagnostic> {
        self.diagnostics.iter().filter(|d| d.severity == Severity::Error)
    }

    /// True when the text parsed but the board it describes is invalid.
    pub fn is_structural(&self) -> bool {
        self.errors().all(|d| d.kind == DiagnosticKind::Structure)
    }
}

struct Diags(Vec<ParseDiagnostic>);

impl Diags {
    fn error(&mut self, line: usize, column: usize, message: impl Into<String>) {
        self.push(line, column, message, Severity::Error, DiagnosticKind::Syntax);
    }

    fn push(&mut self, line: usize, column: usize, message: impl Into<String>, severity: Severity, kind: DiagnosticKind) {
        self.0.push(ParseDiagnostic {
            line,
            column,
            message: message.into(),
            severity,
            kind,
        });
    }

    fn has_errors(&self) -> bool {
        self.0.iter().any(|d| d.severity == Severity::Error)
    }

    fn finish<T>(self, value: impl FnOnce() -> T) -> Result<T, ParseError> {
        if self.has_errors() {
            Err(ParseError { diagnostics: self.0 })
        } else {
            Ok(value())
        }
    }
}

/// Content lines with their 1-based numbers; comments and blanks dropped.
fn content_lines<'a>(text: &'a str, diags: &mut Diags, comment: &'a [&'a str]) -> Vec<(usize, &'a str)> {
    let mut warned = false;
    let mut out = Vec::new();
    for (i, raw) in text.split('\n').enumerate() {
        let line = match raw.strip_suffix('\r') {
            Some(l) => {
                if !warned {
                    diags.push(i + 1, 0, "CRLF line endings normalized", Severity::Warning, DiagnosticKind::Syntax);
                    warned = true;
                }
                l
            }
            None => raw,
        };
        let trimmed = line.trim();
        if trimmed.is_empty() || comment.iter().any(|c| trimmed.starts_with(c)) {
            continue;
        }
        out.push((i + 1, line));
    }
    out
}

/// Whitespace-separated tokens with their 1-based character columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    let mut col = 0;
    let mut start_col = 0;
    for (byte, ch) in line.char_indices() {
        col += 1;
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((start_col, &line[s..byte]));
            }
        } else if start.is_none() {
            start = Some(byte);
            start_col = col;
        }
    }
    if let Some(s) = start {
        out.push((start_col, &line[s..]));
    }
    out
}

fn number<T: std::str::FromStr>(tok: (usize, &str), line: usize, what: &str, diags: &mut Diags) -> Option<T> {
    match tok.1.parse::<T>() {
        Ok(v) if tok.1.bytes().all(|b| b.is_ascii_digit() || b == b'-') => Some(v),
        _ => {
            diags.error(line, tok.0, format!("expected {what}, found `{}`", tok.1));
            None
        }
    }
}

pub fn parse_board(text: &str) -> Result<Board, ParseError> {
    let mut diags = Diags(Vec::new());
    let lines = content_lines(text, &mut diags, &["#"]);
    let mut rows: Option<usize> = None;
    let mut cols: Option<usize> = None;
    let mut circles: Vec<(CellCoord, Option<u32>)> = Vec::new();
    let mut declared: BTreeMap<CellCoord, usize> = BTreeMap::new();
    let mut skewers: Vec<Vec<CellCoord>> = Vec::new();
    let mut skewer_lines: Vec<usize> = Vec::new();

    for &(ln, line) in &lines {
        let toks = tokens(line);
        let (kcol, keyword) = toks[0];
        let args = &toks[1..];
        match keyword {
            "rows" | "cols" => {
                let expected = if rows.is_none() { "rows" } else { "cols" };
                if keyword != expected || (rows.is_some() && cols.is_some()) || !circles.is_empty() || !skewers.is_empty() {
                    diags.error(ln, kcol, format!("unexpected `{keyword}` header; headers are `rows` then `cols`, once each, before any circle"));
                    continue;
                }
                if args.len() != 1 {
                    diags.error(ln, kcol, format!("`{keyword}` takes exactly one value"));
                    continue;
                }
                let Some(v) = number::<usize>(args[0], ln, "a positive integer", &mut diags) else { continue };
                if v == 0 {
                    diags.error(ln, args[0].0, "grid dimension must be positive");
                    continue;
                }
                if keyword == "rows" {
                    rows = Some(v);
                } else {
                    cols = Some(v);
                }
            }
            "circle" => {
                let (Some(m), Some(n)) = (rows, cols) else {
                    diags.error(ln, kcol, "`circle` before the `rows`/`cols` headers");
                    continue;
                };
                if args.len() != 2 && args.len() != 3 {
                    diags.error(ln, kcol, "expected `circle <row> <col> [clue]`");
                    continue;
                }
                let r = number::<usize>(args[0], ln, "a row number", &mut diags);
                let c = number::<usize>(args[1], ln, "a column number", &mut diags);
                let clue = match args.get(2) {
                    Some(&t) => number::<u32>(t, ln, "a nonnegative clue", &mut diags).map(Some),
                    None => Some(None),
                };
                let (Some(r), Some(c), Some(clue)) = (r, c, clue) else { continue };
                let cell = CellCoord::new(r, c);
                if r == 0 || c == 0 || r > m || c > n {
                    diags.error(ln, args[0].0, format!("circle {cell} lies outside the {m}x{n} grid"));
                    continue;
                }
                if let Some(prev) = declared.get(&cell) {
                    diags.error(ln, args[0].0, format!("circle {cell} already declared on line {prev}"));
                    continue;
                }
                declared.insert(cell, ln);
                circles.push((cell, clue));
            }
            "skewer" => {
                if rows.is_none() || cols.is_none() {
                    diags.error(ln, kcol, "`skewer` before the `rows`/`cols` headers");
                    continue;
                }
                if args.len() < 4 || !args.len().is_multiple_of(2) {
                    diags.error(ln, kcol, "expected `skewer <r1> <c1> <r2> <c2> ...` with at least two cells");
                    continue;
                }
                let mut path = Vec::new();
                let mut ok = true;
                for pair in args.chunks(2) {
                    let r = number::<usize>(pair[0], ln, "a row number", &mut diags);
                    let c = number::<usize>(pair[1], ln, "a column number", &mut diags);
                    let (Some(r), Some(c)) = (r, c) else {
                        ok = false;
                        break;
                    };
                    let cell = CellCoord::new(r, c);
                    if !declared.contains_key(&cell) {
                        diags.error(ln, pair[0].0, format!("skewer cell {cell} is not a previously declared circle"));
                        ok = false;
                        break;
                    }
                    path.push(cell);
                }
                if ok {
                    skewers.push(path);
                    skewer_lines.push(ln);
                }
            }
            other => diags.error(ln, kcol, format!("unknown directive `{other}`")),
        }
    }

    if rows.is_none() {
        diags.error(0, 0, "missing `rows` header");
    } else if cols.is_none() {
        diags.error(0, 0, "missing `cols` header");
    }
    if diags.has_errors() {
        return Err(ParseError { diagnostics: diags.0 });
    }

    match Board::new(rows.unwrap_or(1), cols.unwrap_or(1), circles, skewers.iter().cloned()) {
        Ok(b) => diags.finish(|| b),
        Err(e) => {
            let line = blame_line(&e, &declared, &skewers, &skewer_lines);
            diags.push(line, 0, e.to_string(), Severity::Error, DiagnosticKind::Structure);
            Err(ParseError { diagnostics: diags.0 })
        }
    }
}

/// Line to blame for a structural error: the skewer line for path
/// problems, else the declaration of the circle involved.
fn blame_line(
    e: &crate::board::BoardError,
    declared: &BTreeMap<CellCoord, usize>,
    skewers: &[Vec<CellCoord>],
    skewer_lines: &[usize],
) -> usize {
    use crate::board::BoardError::*;
    let skewer_line = |pred: &dyn Fn(&[CellCoord]) -> bool, last: bool| {
        let mut hits = skewers.iter().zip(skewer_lines).filter(|(p, _)| pred(p)).map(|(_, &l)| l);
        if last {
            hits.last()
        } else {
            hits.next()
        }
    };
    let found = match e {
        NonAdjacent { from, to } => skewer_line(&|p| p.windows(2).any(|w| w[0] == *from && w[1] == *to), false),
        RepeatedInSkewer(cell) => skewer_line(&|p| p.iter().filter(|c| *c == cell).count() > 1, false),
        SharedCircle(cell) => skewer_line(&|p| p.contains(cell), true),
        TwoClues { first, second } => skewer_line(&|p| p.contains(first) && p.contains(second), false),
        _ => None,
    };
    let cell = match e {
        OutOfBounds { cell, .. } | DuplicateCircle(cell) | NotACircle(cell) | ClueTooLarge { cell, .. } => Some(*cell),
        _ => None,
    };
    found.or_else(|| cell.and_then(|c| declared.get(&c).copied())).unwrap_or(0)
}

/// Canonical board text: headers, circles row-major, explicit skewers in
/// stored order.
pub fn write_board(board: &Board) -> String {
    let mut out = String::new();
    writeln!(out, "rows {}", board.rows()).unwrap();
    writeln!(out, "cols {}", board.cols()).unwrap();
    for (cell, circle) in board.circles() {
        match circle.clue {
            Some(k) => writeln!(out, "circle {} {} {k}", cell.row, cell.col),
            None => writeln!(out, "circle {} {}", cell.row, cell.col),
        }
        .unwrap();
    }
    for skewer in board.explicit_skewers() {
        out.push_str("skewer");
        for c in skewer.path() {
            write!(out, " {} {}", c.row, c.col).unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn parse_coloring(text: &str, board: &Board) -> Result<Coloring, ParseError> {
    let mut diags = Diags(Vec::new());
    let lines = content_lines(text, &mut diags, &["#"]);
    if lines.len() != board.rows() {
        diags.error(0, 0, format!("expected {} grid lines, found {}", board.rows(), lines.len()));
        return Err(ParseError { diagnostics: diags.0 });
    }
    let mut colors = BTreeMap::new();
    for (r, &(ln, line)) in lines.iter().enumerate() {
        let row: Vec<char> = line.trim().chars().collect();
        if row.len() != board.cols() {
            diags.error(ln, 1, format!("expected {} cells, found {}", board.cols(), row.len()));
            continue;
        }
        for (c, &ch) in row.iter().enumerate() {
            let cell = CellCoord::new(r + 1, c + 1);
            let has_circle = board.circle(cell).is_some();
            let color = match ch {
                'B' => Color::Black,
                'W' => Color::White,
                '.' => {
                    if has_circle {
                        diags.error(ln, c + 1, format!("`.` on circle cell {cell}"));
                    }
                    continue;
                }
                other => {
                    diags.error(ln, c + 1, format!("unexpected character `{other}`"));
                    continue;
                }
            };
            if !has_circle {
                diags.error(ln, c + 1, format!("`{ch}` on empty cell {cell}"));
                continue;
            }
            colors.insert(cell, color);
        }
    }
    diags.finish(|| Coloring::new(colors))
}

pub fn write_coloring(board: &Board, coloring: &Coloring) -> String {
    let mut out = String::with_capacity(board.rows() * (board.cols() + 1));
    for r in 1..=board.rows() {
        for c in 1..=board.cols() {
            let cell = CellCoord::new(r, c);
            out.push(match (board.circle(cell), coloring.get(cell)) {
                (Some(_), Some(Color::Black)) => 'B',
                (Some(_), Some(Color::White)) => 'W',
                // never reparses
                (Some(_), None) => '?',
                (None, _) => '.',
            });
        }
        out.push('\n');
    }
    out
}

pub fn parse_one_in_three(text: &str) -> Result<OneInThreeInstance, ParseError> {
    let mut diags = Diags(Vec::new());
    let lines = content_lines(text, &mut diags, &["#", "c ", "c\t"]);
    let lines: Vec<_> = lines.into_iter().filter(|(_, l)| l.trim() != "c").collect();
    let Some(&(hl, header)) = lines.first() else {
        diags.error(0, 0, "missing `p 1in3 <nvars> <nclauses>` header");
        return Err(ParseError { diagnostics: diags.0 });
    };
    let htoks = tokens(header);
    if htoks.len() != 4 || htoks[0].1 != "p" || htoks[1].1 != "1in3" {
        diags.error(hl, 1, "expected header `p 1in3 <nvars> <nclauses>`");
        return Err(ParseError { diagnostics: diags.0 });
    }
    let nvars = number::<usize>(htoks[2], hl, "a variable count", &mut diags);
    let nclauses = number::<usize>(htoks[3], hl, "a clause count", &mut diags);
    let (Some(nvars), Some(nclauses)) = (nvars, nclauses) else {
        return Err(ParseError { diagnostics: diags.0 });
    };

    let mut clauses = Vec::new();
    for &(ln, line) in &lines[1..] {
        let toks = tokens(line);
        let mut lits = Vec::new();
        let mut terminated = false;
        let mut bad = false;
        for &(col, tok) in &toks {
            if terminated {
                diags.error(ln, col, "tokens after the terminating `0`");
                bad = true;
                break;
            }
            let Some(v) = number::<i64>((col, tok), ln, "an integer literal", &mut diags) else {
                bad = true;
                break;
            };
            if v == 0 {
                if lits.len() != 3 {
                    diags.error(ln, col, format!("clause has {} literals, expected 3", lits.len()));
                    bad = true;
                    break;
                }
                terminated = true;
                continue;
            }
            if lits.len() == 3 {
                diags.error(ln, col, "clause has more than 3 literals");
                bad = true;
                break;
            }
            let var = v.unsigned_abs() as usize;
            if var > nvars {
                diags.error(ln, col, format!("literal {v} exceeds the {nvars} declared variables"));
                bad = true;
                break;
            }
            let lit = Literal::new(var, v < 0);
            if lits.iter().any(|l: &Literal| l.var == var) {
                diags.error(ln, col, format!("variable {var} appears twice in one clause"));
                bad = true;
                break;
            }
            lits.push(lit);
        }
        if bad {
            continue;
        }
        if !terminated {
            diags.error(ln, line.len().max(1), "clause must end with `0`");
            continue;
        }
        clauses.push([lits[0], lits[1], lits[2]]);
    }
    if !diags.has_errors() && clauses.len() != nclauses {
        diags.error(hl, htoks[3].0, format!("header declares {nclauses} clauses, found {}", clauses.len()));
    }
    if diags.has_errors() {
        return Err(ParseError { diagnostics: diags.0 });
    }
    match OneInThreeInstance::new(nvars, clauses) {
        Ok(inst) => diags.finish(|| inst),
        Err(e) => {
            diags.error(0, 0, e.to_string());
            Err(ParseError { diagnostics: diags.0 })
        }
    }
}

pub fn write_one_in_three(instance: &OneInThreeInstance) -> String {
    let mut out = String::new();
    writeln!(out, "p 1in3 {} {}", instance.nvars(), instance.clauses().len()).unwrap();
    for clause in instance.clauses() {
        let lits: Vec<String> = clause.iter().map(|l| l.to_dimacs().to_string()).collect();
        writeln!(out, "{} 0", lits.join(" ")).unwrap();
    }
    out
}

/// Map file for a reduced board: one `lit <clause> <literal> <row> <col>`
/// line per literal circle, then one `var <variable> <row> <col>` line per
/// readout circle (black means true).
pub fn write_map(reduced: &ReducedPuzzle) -> String {
    let mut out = String::from("# lit <clause> <literal> <row> <col>\n");
    for (ci, clause) in reduced.instance.clauses().iter().enumerate() {
        for lit in clause {
            let cell = reduced.literal_cells[&(ci + 1, *lit)];
            writeln!(out, "lit {} {} {} {}", ci + 1, lit.to_dimacs(), cell.row, cell.col).unwrap();
        }
    }
    out.push_str("# var <variable> <row> <col>\n");
    for (v, cell) in &reduced.variable_readout {
        writeln!(out, "var {v} {} {}", cell.row, cell.col).unwrap();
    }
    out
}
