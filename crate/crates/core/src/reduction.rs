//! Reduction from 1-in-3SAT to Oredango with a one-to-one correspondence
//! between satisfying assignments and puzzle solutions.
//!
//! Every produced board uses only skewers of length 0 or 1 and clues 0 or 1.
//!
//! # Layout
//!
//! Columns, for `n` variables: column 1 and column `4n+1` are anchors; each
//! variable `v` owns `P(v) = 4v-2` (positive literal), `N(v) = 4v-1`
//! (negative literal), `T(v) = 4v` (support) and, except for the last
//! variable, `U(v) = 4v+1` (buffer).
//!
//! Rows, for `m` clauses: each clause `i` gets a clause row holding its three
//! literal circles between two clue-1 anchors, followed by a guard row
//! with clue-0 anchors. Consecutive clause strips are separated by a band
//! of two pair rows; strips `2..m-1` also get one auxiliary row per
//! variable just above the next band. That gives `4m - 2 + n*max(0, m-2)`
//! rows.
//!
//! In each band and for each variable the four circles at
//! `{top, bottom} x {P, N}` are joined crosswise by two clue-1 skewers
//! (clue on the `P` circle), `T` holds two clue-1 circles and `U` two clue-0
//! circles. This block admits exactly two colorings: `P` column uniform,
//! `N` column its complement.
//!
//! Between two bands every `P`/`N` column carries exactly one circle: the
//! literal circle if the clause uses that column, else a support lifted into
//! the guard row, else a plain support in the variable's auxiliary row. A
//! single circle sandwiched between two equal pairs must take the opposite
//! color, so all bands agree and every literal circle reads the same truth
//! value. The auxiliary row also puts a clue-0 circle under `T` and a
//! clue-1 circle under `U` so those columns alternate.
//!
//! In the guard row of clause `i`, the supports for the complements of its
//! first and third literal (by column) sit between two white anchors. They
//! carry `!l1` and `!l3`, so the row forbids `l1 = l3 = 1`; the clause row
//! itself forbids two adjacent trues and the all-equal patterns. Only the
//! three exactly-one patterns survive.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::board::{Board, BoardError, CellCoord, Color, Coloring};
use crate::check::check_coloring;
use crate::solver::Solver;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    /// 1-based variable index.
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    pub const fn new(var: usize, negated: bool) -> Self {
        Self { var, negated }
    }

    pub const fn pos(var: usize) -> Self {
        Self::new(var, false)
    }

    pub const fn neg(var: usize) -> Self {
        Self::new(var, true)
    }

    pub fn complement(self) -> Self {
        Self::new(self.var, !self.negated)
    }

    /// Truth value under `assignment` (index 0 is variable 1).
    pub fn eval(self, assignment: &[bool]) -> bool {
        assignment[self.var - 1] != self.negated
    }

    /// Signed integer form: `v` or `-v`.
    pub fn to_dimacs(self) -> i64 {
        let v = self.var as i64;
        if self.negated {
            -v
        } else {
            v
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "!x{}", self.var)
        } else {
            write!(f, "x{}", self.var)
        }
    }
}

pub type Clause = [Literal; 3];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("clause {clause}: literal {literal} is outside variables 1..={nvars}")]
    VariableRange {
        clause: usize,
        literal: i64,
        nvars: usize,
    },
    #[error("clause {clause} mentions variable {var} more than once")]
    RepeatedVariable { clause: usize, var: usize },
}

/// A 1-in-3SAT instance: clauses of three literals over three distinct
/// variables; a clause is satisfied when exactly one literal is true.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneInThreeInstance {
    nvars: usize,
    clauses: Vec<Clause>,
}

impl OneInThreeInstance {
    pub fn new(nvars: usize, clauses: Vec<Clause>) -> Result<Self, InstanceError> {
        for (i, clause) in clauses.iter().enumerate() {
            for (k, lit) in clause.iter().enumerate() {
                if lit.var == 0 || lit.var > nvars {
                    return Err(InstanceError::VariableRange {
                        clause: i + 1,
                        literal: lit.to_dimacs(),
                        nvars,
                    });
                }
                if clause[..k].iter().any(|l| l.var == lit.var) {
                    return Err(InstanceError::RepeatedVariable {
                        clause: i + 1,
                        var: lit.var,
                    });
                }
            }
        }
        Ok(Self { nvars, clauses })
    }

    /// Parses signed-integer clauses, e.g. `[[1, 2, 3], [-1, 3, 4]]`.
    pub fn from_dimacs(nvars: usize, clauses: &[[i64; 3]]) -> Result<Self, InstanceError> {
        let lits = clauses
            .iter()
            .map(|c| c.map(|l| Literal::new(l.unsigned_abs() as usize, l < 0)))
            .collect();
        Self::new(nvars, lits)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn is_satisfied(&self, assignment: &[bool]) -> bool {
        assignment.len() == self.nvars
            && self
                .clauses
                .iter()
                .all(|c| c.iter().filter(|l| l.eval(assignment)).count() == 1)
    }

    fn occurs(&self, var: usize) -> bool {
        self.clauses.iter().flatten().any(|l| l.var == var)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("instance has no variables")]
    NoVariables,
    #[error("variable x{0} occurs in no clause")]
    UnusedVariable(usize),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error("{nvars} variables is too many to enumerate (limit {limit})")]
    TooManyVariables { nvars: usize, limit: usize },
    #[error("instance with {nvars} variables and {nclauses} clauses exceeds the verification limit of {max_vars} and {max_clauses}")]
    BeyondDeskScale {
        nvars: usize,
        nclauses: usize,
        max_vars: usize,
        max_clauses: usize,
    },
    #[error("assignment has {got} values for {expected} variables")]
    AssignmentLength { expected: usize, got: usize },
    #[error("coloring is not a solution of the reduced board")]
    InvalidColoring,
    #[error("reduced board failed validation: {0}")]
    Board(#[from] BoardError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowRole {
    /// Holds clause `i`'s literal circles.
    Clause(usize),
    /// Guard row below clause `i`, holding lifted supports.
    Guard(usize),
    /// Auxiliary row of variable `var` in the strip of clause `strip`.
    Auxiliary { strip: usize, var: usize },
    PairTop(usize),
    PairBottom(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnRole {
    LeftAnchor,
    Positive(usize),
    Negative(usize),
    Support(usize),
    Buffer(usize),
    RightAnchor,
}

/// Row and column tags of a reduced board, indexed by `row - 1` / `col - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayoutMeta {
    pub rows: Vec<RowRole>,
    pub cols: Vec<ColumnRole>,
}

impl LayoutMeta {
    pub fn row(&self, row: usize) -> RowRole {
        self.rows[row - 1]
    }

    pub fn col(&self, col: usize) -> ColumnRole {
        self.cols[col - 1]
    }

    /// Rows of band `b` (1-based), top first.
    pub fn band(&self, b: usize) -> Option<(usize, usize)> {
        let top = self.rows.iter().position(|r| *r == RowRole::PairTop(b))?;
        Some((top + 1, top + 2))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedPuzzle {
    pub board: Board,
    /// The clauses the board encodes. Equal to the input, except that a
    /// single clause is duplicated.
    pub instance: OneInThreeInstance,
    /// `(clause, literal)` (clause 1-based) to its literal circle.
    pub literal_cells: BTreeMap<(usize, Literal), CellCoord>,
    /// Per variable (1-based), a circle that is black iff the variable is true.
    pub variable_readout: BTreeMap<usize, CellCoord>,
    pub layout: LayoutMeta,
}

pub fn positive_column(var: usize) -> usize {
    4 * var - 2
}

pub fn negative_column(var: usize) -> usize {
    4 * var - 1
}

fn literal_column(lit: Literal) -> usize {
    if lit.negated {
        negative_column(lit.var)
    } else {
        positive_column(lit.var)
    }
}

/// `(rows, cols)` of the board [`reduce`] builds for `nvars` variables and
/// `nclauses >= 2` clauses.
pub fn reduced_dimensions(nvars: usize, nclauses: usize) -> (usize, usize) {
    (4 * nclauses - 2 + nvars * nclauses.saturating_sub(2), 4 * nvars + 1)
}

pub fn reduce(instance: &OneInThreeInstance) -> Result<ReducedPuzzle, ReductionError> {
    let n = instance.nvars();
    if n == 0 {
        return Err(ReductionError::NoVariables);
    }
    if let Some(v) = (1..=n).find(|&v| !instance.occurs(v)) {
        return Err(ReductionError::UnusedVariable(v));
    }
    let mut clauses = instance.clauses().to_vec();
    if clauses.len() == 1 {
        clauses.push(clauses[0]);
    }
    for c in &mut clauses {
        c.sort_by_key(|l| literal_column(*l));
    }
    let inst = OneInThreeInstance::new(n, clauses)?;
    let m = inst.clauses().len();

    let ncols = 4 * n + 1;
    let mut cols = vec![ColumnRole::LeftAnchor];
    for v in 1..=n {
        cols.extend([ColumnRole::Positive(v), ColumnRole::Negative(v), ColumnRole::Support(v)]);
        if v < n {
            cols.push(ColumnRole::Buffer(v));
        }
    }
    cols.push(ColumnRole::RightAnchor);
    debug_assert_eq!(cols.len(), ncols);

    let mut rows = Vec::new();
    for i in 1..=m {
        rows.push(RowRole::Clause(i));
        rows.push(RowRole::Guard(i));
        if i < m {
            if i >= 2 {
                rows.extend((1..=n).map(|var| RowRole::Auxiliary { strip: i, var }));
            }
            rows.push(RowRole::PairTop(i));
            rows.push(RowRole::PairBottom(i));
        }
    }
    let row_of = |role: RowRole| rows.iter().position(|r| *r == role).expect("row") + 1;

    let mut circles: Vec<(CellCoord, Option<u32>)> = Vec::new();
    let mut skewers: Vec<Vec<CellCoord>> = Vec::new();
    let mut literal_cells = BTreeMap::new();
    let at = CellCoord::new;

    for (ci, clause) in inst.clauses().iter().enumerate() {
        let i = ci + 1;
        let rc = row_of(RowRole::Clause(i));
        let rg = row_of(RowRole::Guard(i));
        circles.extend([
            (at(rc, 1), Some(1)),
            (at(rc, ncols), Some(1)),
            (at(rg, 1), Some(0)),
            (at(rg, ncols), Some(0)),
        ]);
        let mut used = Vec::new();
        for lit in clause {
            let cell = at(rc, literal_column(*lit));
            circles.push((cell, None));
            literal_cells.insert((i, *lit), cell);
            used.push(cell.col);
        }
        for lit in [clause[0], clause[2]] {
            let col = literal_column(lit.complement());
            circles.push((at(rg, col), None));
            used.push(col);
        }
        if (2..m).contains(&i) {
            for v in 1..=n {
                let ra = row_of(RowRole::Auxiliary { strip: i, var: v });
                for col in [positive_column(v), negative_column(v)] {
                    if !used.contains(&col) {
                        circles.push((at(ra, col), None));
                    }
                }
                circles.push((at(ra, 4 * v), Some(0)));
                if v < n {
                    circles.push((at(ra, 4 * v + 1), Some(1)));
                }
            }
        }
    }

    for b in 1..m {
        let top = row_of(RowRole::PairTop(b));
        let bot = top + 1;
        for v in 1..=n {
            let (p, q) = (positive_column(v), negative_column(v));
            circles.extend([
                (at(top, p), Some(1)),
                (at(top, q), None),
                (at(bot, p), Some(1)),
                (at(bot, q), None),
                (at(top, 4 * v), Some(1)),
                (at(bot, 4 * v), Some(1)),
            ]);
            if v < n {
                circles.extend([(at(top, 4 * v + 1), Some(0)), (at(bot, 4 * v + 1), Some(0))]);
            }
            skewers.push(vec![at(top, p), at(bot, q)]);
            skewers.push(vec![at(bot, p), at(top, q)]);
        }
    }

    let board = Board::new(rows.len(), ncols, circles, skewers)?;

    let band1_top = row_of(RowRole::PairTop(1));
    let variable_readout = (1..=n)
        .map(|v| {
            let cell = literal_cells
                .iter()
                .find(|((_, l), _)| *l == Literal::pos(v))
                .map(|(_, &c)| c)
                .unwrap_or(at(band1_top, negative_column(v)));
            (v, cell)
        })
        .collect();

    Ok(ReducedPuzzle {
        board,
        instance: inst,
        literal_cells,
        variable_readout,
        layout: LayoutMeta { rows, cols },
    })
}

impl ReducedPuzzle {
    /// True when every skewer has at most one link and every clue is 0 or 1.
    pub fn meets_restrictions(&self) -> bool {
        self.board.skewers().iter().all(|s| s.length() <= 1)
            && self
                .board
                .circles()
                .values()
                .all(|c| c.clue.is_none_or(|k| k <= 1))
    }
}

/// The coloring an assignment induces. For satisfying assignments this is
/// the board's unique solution with those literal colors; otherwise some
/// clause strip breaks a rule.
pub fn assignment_to_coloring(reduced: &ReducedPuzzle, assignment: &[bool]) -> Result<Coloring, ReductionError> {
    let n = reduced.instance.nvars();
    if assignment.len() != n {
        return Err(ReductionError::AssignmentLength {
            expected: n,
            got: assignment.len(),
        });
    }
    let board = &reduced.board;
    let coloring = board
        .cells()
        .iter()
        .map(|&cell| {
            let in_band = matches!(
                reduced.layout.row(cell.row),
                RowRole::PairTop(_) | RowRole::PairBottom(_)
            );
            let black = match reduced.layout.col(cell.col) {
                ColumnRole::Positive(v) => assignment[v - 1] != in_band,
                ColumnRole::Negative(v) => assignment[v - 1] == in_band,
                _ => {
                    let clue = board.circle(cell).and_then(|c| c.clue);
                    clue == Some(1)
                }
            };
            (cell, Color::from_black(black))
        })
        .collect();
    Ok(coloring)
}

/// Reads the assignment off a solution of the reduced board.
pub fn coloring_to_assignment(reduced: &ReducedPuzzle, coloring: &Coloring) -> Result<Vec<bool>, ReductionError> {
    let report = check_coloring(&reduced.board, coloring).map_err(|_| ReductionError::InvalidColoring)?;
    if !report.is_empty() {
        return Err(ReductionError::InvalidColoring);
    }
    Ok(reduced
        .variable_readout
        .values()
        .map(|c| coloring.get(*c) == Some(Color::Black))
        .collect())
}

pub const MAX_ENUMERATION_VARS: usize = 24;

/// All satisfying assignments, lexicographic with `x1` most significant.
pub fn enumerate_assignments(instance: &OneInThreeInstance) -> Result<Vec<Vec<bool>>, ReductionError> {
    let n = instance.nvars();
    if n > MAX_ENUMERATION_VARS {
        return Err(ReductionError::TooManyVariables {
            nvars: n,
            limit: MAX_ENUMERATION_VARS,
        });
    }
    let mut out = Vec::new();
    let mut a = vec![false; n];
    for k in 0u32..(1u32 << n) {
        for (v, slot) in a.iter_mut().enumerate() {
            *slot = (k >> (n - 1 - v)) & 1 == 1;
        }
        if instance.is_satisfied(&a) {
            out.push(a.clone());
        }
    }
    Ok(out)
}

pub const DESK_SCALE_VARS: usize = 6;
pub const DESK_SCALE_CLAUSES: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub puzzle_solutions: usize,
    pub assignments: usize,
    pub rows: usize,
    pub cols: usize,
    /// One entry per mismatch found; empty on success.
    pub failures: Vec<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} puzzle={} assignments={}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.puzzle_solutions,
            self.assignments
        )
    }
}

fn bits(a: &[bool]) -> String {
    a.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Reduces `instance`, enumerates both solution sets exhaustively and
/// checks that the two maps are mutually inverse bijections between them.
pub fn verify_reduction(instance: &OneInThreeInstance) -> Result<VerificationReport, ReductionError> {
    if instance.nvars() > DESK_SCALE_VARS || instance.clauses().len() > DESK_SCALE_CLAUSES {
        return Err(ReductionError::BeyondDeskScale {
            nvars: instance.nvars(),
            nclauses: instance.clauses().len(),
            max_vars: DESK_SCALE_VARS,
            max_clauses: DESK_SCALE_CLAUSES,
        });
    }
    let reduced = reduce(instance)?;
    let (solutions, assignments) = std::thread::scope(|s| {
        let puzzle = s.spawn(|| Solver::new(&reduced.board).enumerate(usize::MAX));
        let sat = enumerate_assignments(instance);
        (puzzle.join().expect("solver thread"), sat)
    });
    let solutions = solutions.expect("cap is positive").solutions;
    let assignments = assignments?;

    let mut failures = Vec::new();
    if !reduced.meets_restrictions() {
        failures.push("board uses a skewer longer than 1 or a clue above 1".to_string());
    }
    if solutions.len() != assignments.len() {
        failures.push(format!(
            "count mismatch: {} puzzle solutions vs {} assignments",
            solutions.len(),
            assignments.len()
        ));
    }
    for a in &assignments {
        let coloring = assignment_to_coloring(&reduced, a)?;
        if !solutions.contains(&coloring) {
            failures.push(format!("assignment {} maps to a non-solution", bits(a)));
            continue;
        }
        match coloring_to_assignment(&reduced, &coloring) {
            Ok(back) if back == *a => {}
            Ok(back) => failures.push(format!("assignment {} reads back as {}", bits(a), bits(&back))),
            Err(e) => failures.push(format!("assignment {}: {e}", bits(a))),
        }
    }
    for (k, s) in solutions.iter().enumerate() {
        let Ok(a) = coloring_to_assignment(&reduced, s) else {
            failures.push(format!("puzzle solution #{} is rejected by the checker", k + 1));
            continue;
        };
        if !instance.is_satisfied(&a) {
            failures.push(format!("puzzle solution #{} reads as unsatisfying {}", k + 1, bits(&a)));
        } else if assignment_to_coloring(&reduced, &a)? != *s {
            failures.push(format!("puzzle solution #{} is not the image of {}", k + 1, bits(&a)));
        }
        for (&(ci, lit), &cell) in &reduced.literal_cells {
            let black = s.get(cell) == Some(Color::Black);
            if black != lit.eval(&a) {
                failures.push(format!("puzzle solution #{}: literal {lit} of clause {ci} disagrees", k + 1));
            }
        }
    }
    Ok(VerificationReport {
        puzzle_solutions: solutions.len(),
        assignments: assignments.len(),
        rows: reduced.board.rows(),
        cols: reduced.board.cols(),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> OneInThreeInstance {
        OneInThreeInstance::from_dimacs(4, &[[1, 2, 3], [-1, 3, 4], [2, -3, -4]]).unwrap()
    }

    #[test]
    fn instance_validation() {
        assert!(matches!(
            OneInThreeInstance::from_dimacs(3, &[[1, 1, 2]]),
            Err(InstanceError::RepeatedVariable { .. })
        ));
        assert!(matches!(
            OneInThreeInstance::from_dimacs(3, &[[1, -1, 2]]),
            Err(InstanceError::RepeatedVariable { .. })
        ));
        assert!(matches!(
            OneInThreeInstance::from_dimacs(3, &[[1, 2, 4]]),
            Err(InstanceError::VariableRange { .. })
        ));
        assert!(matches!(
            OneInThreeInstance::from_dimacs(3, &[[0, 1, 2]]),
            Err(InstanceError::VariableRange { .. })
        ));
    }

    #[test]
    fn reduce_rejects_degenerate_instances() {
        let none = OneInThreeInstance::new(0, vec![]).unwrap();
        assert_eq!(reduce(&none), Err(ReductionError::NoVariables));
        let unused = OneInThreeInstance::from_dimacs(4, &[[1, 2, 3]]).unwrap();
        assert_eq!(reduce(&unused), Err(ReductionError::UnusedVariable(4)));
    }

    #[test]
    fn example_dimensions_and_restrictions() {
        let r = reduce(&example()).unwrap();
        assert_eq!((r.board.rows(), r.board.cols()), (14, 17));
        assert_eq!(reduced_dimensions(4, 3), (14, 17));
        assert!(r.meets_restrictions());
    }

    #[test]
    fn literal_columns_are_adjacent() {
        for v in 1..=6 {
            assert_eq!(negative_column(v), positive_column(v) + 1);
        }
    }

    #[test]
    fn clause_literals_share_a_row_in_column_order() {
        let r = reduce(&example()).unwrap();
        for (ci, clause) in r.instance.clauses().iter().enumerate() {
            let cells: Vec<CellCoord> = clause.iter().map(|l| r.literal_cells[&(ci + 1, *l)]).collect();
            assert!(cells.iter().all(|c| c.row == cells[0].row));
            assert!(cells.windows(2).all(|w| w[0].col < w[1].col));
            assert_eq!(r.layout.row(cells[0].row), RowRole::Clause(ci + 1));
        }
    }

    #[test]
    fn single_clause_is_duplicated() {
        let inst = OneInThreeInstance::from_dimacs(3, &[[1, 2, 3]]).unwrap();
        let r = reduce(&inst).unwrap();
        assert_eq!(r.instance.clauses().len(), 2);
        assert_eq!((r.board.rows(), r.board.cols()), reduced_dimensions(3, 2));
    }

    #[test]
    fn enumerate_assignments_small_cases() {
        let one = OneInThreeInstance::from_dimacs(3, &[[1, 2, 3]]).unwrap();
        let expected = vec![
            vec![false, false, true],
            vec![false, true, false],
            vec![true, false, false],
        ];
        assert_eq!(enumerate_assignments(&one).unwrap(), expected);
        let twice = OneInThreeInstance::from_dimacs(3, &[[1, 2, 3], [1, 2, 3]]).unwrap();
        assert_eq!(enumerate_assignments(&twice).unwrap(), expected);
        let big = OneInThreeInstance::new(25, vec![]).unwrap();
        assert!(matches!(
            enumerate_assignments(&big),
            Err(ReductionError::TooManyVariables { .. })
        ));
    }

    #[test]
    fn verify_rejects_beyond_desk_scale() {
        let inst = OneInThreeInstance::from_dimacs(7, &[[1, 2, 3], [4, 5, 6], [7, 1, 2]]).unwrap();
        assert!(matches!(
            verify_reduction(&inst),
            Err(ReductionError::BeyondDeskScale { .. })
        ));
    }

    #[test]
    fn assignment_length_is_checked() {
        let r = reduce(&example()).unwrap();
        assert!(matches!(
            assignment_to_coloring(&r, &[true]),
            Err(ReductionError::AssignmentLength { .. })
        ));
    }
}
