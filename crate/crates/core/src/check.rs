//! Rule checker for complete colorings.

use std::fmt;

use crate::board::{Board, CellCoord, Coloring, ColoringError};
use crate::triples::TripleIndex;

/// The four puzzle rules: clue count (A), and no monochromatic run of three
/// along a skewer (B), a row (C) or a column (D).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    A,
    B,
    C,
    D,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::A => "A",
            Rule::B => "B",
            Rule::C => "C",
            Rule::D => "D",
        };
        f.write_str(s)
    }
}

/// Where a violation sits. Indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Locus {
    Skewer(usize),
    Row(usize),
    Column(usize),
}

impl fmt::Display for Locus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Locus::Skewer(i) => write!(f, "skewer {i}"),
            Locus::Row(i) => write!(f, "row {i}"),
            Locus::Column(i) => write!(f, "column {i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Violation {
    pub rule: Rule,
    pub locus: Locus,
    /// 1-based window number for rules B/C/D; `None` for rule A.
    pub window: Option<usize>,
    pub cells: Vec<CellCoord>,
    /// Black circles observed among `cells`.
    pub black: usize,
    /// Inclusive bounds the black count should have met.
    pub required: (usize, usize),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.rule, self.locus)?;
        if let Some(w) = self.window {
            write!(f, " window {w}")?;
        }
        f.write_str(" [")?;
        for (i, c) in self.cells.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        let (lo, hi) = self.required;
        if lo == hi {
            write!(f, "] black={} required={}", self.black, lo)
        } else {
            write!(f, "] black={} required={}..{}", self.black, lo, hi)
        }
    }
}

/// All rule violations of a coloring, ordered: rule A by skewer, then B by
/// (skewer, window), C by (row, window), D by (column, window).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ViolationReport {
    pub violations: Vec<Violation>,
}

impl ViolationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    pub fn by_rule(&self, rule: Rule) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(move |v| v.rule == rule)
    }
}

impl fmt::Display for ViolationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

pub fn check_coloring(board: &Board, coloring: &Coloring) -> Result<ViolationReport, ColoringError> {
    check_with_index(board, &TripleIndex::new(board), coloring)
}

/// As [`check_coloring`], reusing a prebuilt index for `board`.
pub fn check_with_index(
    board: &Board,
    index: &TripleIndex,
    coloring: &Coloring,
) -> Result<ViolationReport, ColoringError> {
    coloring.validate_domain(board)?;
    let black = |cells: &[CellCoord]| {
        cells
            .iter()
            .filter(|c| coloring.get(**c).is_some_and(|col| col.is_black()))
            .count()
    };

    let mut violations = Vec::new();
    for (s, skewer) in board.skewers().iter().enumerate() {
        if let Some(clue) = board.skewer_clue(s) {
            let n = black(skewer.path());
            if n != clue as usize {
                violations.push(Violation {
                    rule: Rule::A,
                    locus: Locus::Skewer(s + 1),
                    window: None,
                    cells: skewer.path().to_vec(),
                    black: n,
                    required: (clue as usize, clue as usize),
                });
            }
        }
    }

    let families = [
        (Rule::B, &index.skewer_triples, Locus::Skewer as fn(usize) -> Locus),
        (Rule::C, &index.row_triples, Locus::Row),
        (Rule::D, &index.col_triples, Locus::Column),
    ];
    for (rule, family, locus) in families {
        for (i, triples) in family.iter().enumerate() {
            for (w, t) in triples.iter().enumerate() {
                let n = black(t);
                if n == 0 || n == 3 {
                    violations.push(Violation {
                        rule,
                        locus: locus(i + 1),
                        window: Some(w + 1),
                        cells: t.to_vec(),
                        black: n,
                        required: (1, 2),
                    });
                }
            }
        }
    }
    Ok(ViolationReport { violations })
}

/// Fast validity test on circle-indexed black flags; no report is built.
pub fn is_solution_bits(board: &Board, index: &TripleIndex, black: &[bool]) -> bool {
    let is_black = |c: &CellCoord| black[board.circle_index(*c).expect("circle")];
    for (s, skewer) in board.skewers().iter().enumerate() {
        if let Some(clue) = board.skewer_clue(s) {
            if skewer.path().iter().filter(|c| is_black(c)).count() != clue as usize {
                return false;
            }
        }
    }
    index.all().all(|t| {
        let n = t.iter().filter(|c| is_black(c)).count();
        n == 1 || n == 2
    })
}
