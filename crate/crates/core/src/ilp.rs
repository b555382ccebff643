//! 0-1 linear model of a board, LP-file export, and an internal
//! feasibility search.
//!
//! One binary `x_<row>_<col>` per circle (1 = black). Constraints:
//!
//! * `sk<r>`: black count of clued skewer `r` equals its clue;
//! * `tb<r>_<t>`: window `t` of skewer `r` holds 1 or 2 blacks;
//! * `tr<i>_<s>`: window `s` of row `i` holds 1 or 2 blacks;
//! * `tc<j>_<t>`: window `t` of column `j` holds 1 or 2 blacks.
//!
//! The objective is the sum of all variables. Only feasibility matters to
//! the puzzle; the objective is carried so exported files are complete.

use std::fmt::Write as _;
use std::ops::ControlFlow;

use thiserror::Error;

use crate::board::{Board, CellCoord, Color, Coloring};
use crate::solver::{CountConstraint, Network};
use crate::triples::TripleIndex;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub cell: CellCoord,
}

/// `lower <= sum(terms) <= upper`, every coefficient 1. Terms index
/// [`LinearModel::variables`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearConstraint {
    pub name: String,
    pub terms: Vec<usize>,
    pub lower: Option<i64>,
    pub upper: Option<i64>,
}

impl LinearConstraint {
    pub fn is_equality(&self) -> bool {
        self.lower.is_some() && self.lower == self.upper
    }

    pub fn is_satisfied(&self, assignment: &[bool]) -> bool {
        let sum = self.terms.iter().filter(|&&v| assignment[v]).count() as i64;
        self.lower.is_none_or(|lo| sum >= lo) && self.upper.is_none_or(|hi| sum <= hi)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LinearModel {
    pub variables: Vec<Variable>,
    pub constraints: Vec<LinearConstraint>,
    /// Objective coefficient per variable.
    pub objective: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("assignment has {got} values for {expected} variables")]
    AssignmentLength { expected: usize, got: usize },
    #[error("model variable {0} is not a circle of the board")]
    NotACircle(CellCoord),
    #[error("model has {model} variables but the board has {board} circles")]
    CircleCount { model: usize, board: usize },
}

pub fn variable_name(cell: CellCoord) -> String {
    format!("x_{}_{}", cell.row, cell.col)
}

impl LinearModel {
    pub fn equalities(&self) -> impl Iterator<Item = &LinearConstraint> {
        self.constraints.iter().filter(|c| c.is_equality())
    }

    pub fn ranges(&self) -> impl Iterator<Item = &LinearConstraint> {
        self.constraints.iter().filter(|c| !c.is_equality())
    }

    pub fn is_feasible(&self, assignment: &[bool]) -> bool {
        assignment.len() == self.variables.len()
            && self.constraints.iter().all(|c| c.is_satisfied(assignment))
    }

    fn network(&self) -> Network {
        let constraints = self
            .constraints
            .iter()
            .map(|c| {
                let n = c.terms.len() as i64;
                let lo = c.lower.unwrap_or(0).max(0);
                let hi = c.upper.unwrap_or(n).min(n);
                // an upper bound below zero can never hold
                let (lo, hi) = if hi < 0 { (1, 0) } else { (lo, hi) };
                CountConstraint {
                    vars: c.terms.clone(),
                    lo: lo as usize,
                    hi: hi as usize,
                }
            })
            .collect();
        Network::new(self.variables.len(), constraints)
    }
}

pub fn build_model(board: &Board) -> LinearModel {
    let index = TripleIndex::new(board);
    let var = |c: &CellCoord| board.circle_index(*c).expect("circle");
    let variables: Vec<Variable> = board
        .cells()
        .iter()
        .map(|&cell| Variable {
            name: variable_name(cell),
            cell,
        })
        .collect();

    let mut constraints = Vec::new();
    for (r, skewer) in board.skewers().iter().enumerate() {
        if let Some(clue) = board.skewer_clue(r) {
            constraints.push(LinearConstraint {
                name: format!("sk{}", r + 1),
                terms: skewer.path().iter().map(var).collect(),
                lower: Some(clue as i64),
                upper: Some(clue as i64),
            });
        }
    }
    let families = [
        ("tb", &index.skewer_triples),
        ("tr", &index.row_triples),
        ("tc", &index.col_triples),
    ];
    for (prefix, family) in families {
        for (i, windows) in family.iter().enumerate() {
            for (t, w) in windows.iter().enumerate() {
                constraints.push(LinearConstraint {
                    name: format!("{prefix}{}_{}", i + 1, t + 1),
                    terms: w.iter().map(var).collect(),
                    lower: Some(1),
                    upper: Some(2),
                });
            }
        }
    }
    LinearModel {
        objective: vec![1; variables.len()],
        variables,
        constraints,
    }
}

const TERMS_PER_LINE: usize = 8;

fn write_expr(out: &mut String, terms: impl Iterator<Item = (i64, usize)>, model: &LinearModel) {
    let mut first = true;
    for (n, (coef, v)) in terms.enumerate() {
        if n > 0 && n % TERMS_PER_LINE == 0 {
            out.push_str("\n   ");
        }
        let name = &model.variables[v].name;
        let sign = if coef < 0 { "-" } else { "+" };
        let mag = coef.unsigned_abs();
        match (first, mag) {
            (true, 1) if coef > 0 => write!(out, " {name}"),
            (true, _) if coef > 0 => write!(out, " {mag} {name}"),
            (_, 1) => write!(out, " {sign} {name}"),
            _ => write!(out, " {sign} {mag} {name}"),
        }
        .expect("write to string");
        first = false;
    }
}

/// LP-format text: `Minimize`, `Subject To`, `Binaries`, `End`. Ranges are
/// split into `<name>_lo` (>=) and `<name>_hi` (<=) rows.
pub fn export_lp(model: &LinearModel) -> String {
    let mut out = String::from("\\ Oredango 0-1 model\nMinimize\n obj:");
    write_expr(
        &mut out,
        model
            .objective
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(v, &c)| (c, v)),
        model,
    );
    out.push('\n');

    if !model.constraints.is_empty() {
        out.push_str("Subject To\n");
    }
    for c in &model.constraints {
        let row = |out: &mut String, name: &str, op: &str, rhs: i64| {
            write!(out, " {name}:").expect("write to string");
            write_expr(out, c.terms.iter().map(|&v| (1, v)), model);
            writeln!(out, " {op} {rhs}").expect("write to string");
        };
        match (c.lower, c.upper) {
            (Some(lo), Some(hi)) if lo == hi => row(&mut out, &c.name, "=", lo),
            (lo, hi) => {
                if let Some(lo) = lo {
                    row(&mut out, &format!("{}_lo", c.name), ">=", lo);
                }
                if let Some(hi) = hi {
                    row(&mut out, &format!("{}_hi", c.name), "<=", hi);
                }
            }
        }
    }

    if !model.variables.is_empty() {
        out.push_str("Binaries\n");
        for chunk in model.variables.chunks(TERMS_PER_LINE) {
            let names: Vec<&str> = chunk.iter().map(|v| v.name.as_str()).collect();
            writeln!(out, " {}", names.join(" ")).expect("write to string");
        }
    }
    out.push_str("End\n");
    out
}

/// Any feasible 0/1 assignment, found by the solver's count propagation
/// and row-major search (1 tried first).
pub fn solve_model(model: &LinearModel) -> Option<Vec<bool>> {
    let net = model.network();
    let mut found = None;
    net.search(vec![None; net.nvars()], &mut |bits| {
        found = Some(bits.to_vec());
        ControlFlow::Break(())
    });
    found
}

/// Every feasible assignment, in search order.
pub fn enumerate_model(model: &LinearModel) -> Vec<Vec<bool>> {
    let net = model.network();
    let mut all = Vec::new();
    net.search(vec![None; net.nvars()], &mut |bits| {
        all.push(bits.to_vec());
        ControlFlow::Continue(())
    });
    all
}

/// Black where the variable is 1, White where it is 0.
pub fn model_to_coloring(
    model: &LinearModel,
    assignment: &[bool],
    board: &Board,
) -> Result<Coloring, ModelError> {
    if assignment.len() != model.variables.len() {
        return Err(ModelError::AssignmentLength {
            expected: model.variables.len(),
            got: assignment.len(),
        });
    }
    if model.variables.len() != board.num_circles() {
        return Err(ModelError::CircleCount {
            model: model.variables.len(),
            board: board.num_circles(),
        });
    }
    model
        .variables
        .iter()
        .zip(assignment)
        .map(|(v, &x)| {
            if board.circle(v.cell).is_none() {
                Err(ModelError::NotACircle(v.cell))
            } else {
                Ok((v.cell, Color::from_black(x)))
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(row: usize, col: usize) -> CellCoord {
        CellCoord::new(row, col)
    }

    #[test]
    fn empty_board_gives_empty_model() {
        let b = Board::new(1, 1, [], []).unwrap();
        let m = build_model(&b);
        assert!(m.variables.is_empty());
        assert!(m.constraints.is_empty());
        assert_eq!(export_lp(&m), "\\ Oredango 0-1 model\nMinimize\n obj:\nEnd\n");
        assert_eq!(solve_model(&m), Some(vec![]));
        assert_eq!(model_to_coloring(&m, &[], &b).unwrap(), Coloring::default());
    }

    #[test]
    fn clue_zero_singleton() {
        let b = Board::new(2, 3, [(c(2, 3), Some(0))], []).unwrap();
        let m = build_model(&b);
        assert_eq!(m.constraints.len(), 1);
        assert!(m.constraints[0].is_equality());
        let lp = export_lp(&m);
        assert!(lp.contains("Subject To\n sk1: x_2_3 = 0\n"), "{lp}");
        assert!(lp.contains("Binaries\n x_2_3\n"));
        assert_eq!(solve_model(&m), Some(vec![false]));
    }

    #[test]
    fn three_clued_singletons_infeasible() {
        let cells = [(c(1, 1), Some(1)), (c(1, 2), Some(1)), (c(1, 3), Some(1))];
        let b = Board::new(1, 3, cells, []).unwrap();
        let m = build_model(&b);
        assert_eq!(solve_model(&m), None);
        assert!(enumerate_model(&m).is_empty());
    }

    #[test]
    fn long_rows_wrap() {
        let cells: Vec<_> = (1..=20).map(|j| (c(1, j), None)).collect();
        let b = Board::new(1, 20, cells, []).unwrap();
        let lp = export_lp(&build_model(&b));
        assert!(lp.lines().all(|l| l.len() < 120));
        assert_eq!(lp.matches("_lo:").count(), 18);
    }

    #[test]
    fn one_sided_and_negative_bounds() {
        let m = LinearModel {
            variables: vec![Variable {
                name: "x_1_1".into(),
                cell: c(1, 1),
            }],
            constraints: vec![LinearConstraint {
                name: "neg".into(),
                terms: vec![0],
                lower: None,
                upper: Some(-1),
            }],
            objective: vec![1],
        };
        assert_eq!(solve_model(&m), None);
        assert!(export_lp(&m).contains(" neg_hi: x_1_1 <= -1\n"));
    }

    #[test]
    fn model_to_coloring_rejects_bad_length() {
        let b = Board::new(1, 1, [(c(1, 1), None)], []).unwrap();
        let m = build_model(&b);
        assert!(matches!(
            model_to_coloring(&m, &[], &b),
            Err(ModelError::AssignmentLength { .. })
        ));
    }
}
