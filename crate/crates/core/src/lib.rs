//! Checker, solver, 0-1 model exporter and 1-in-3SAT reduction for the
//! Oredango pencil puzzle.
//!
//! A board is a grid with circles, optional clues and skewers (chains of
//! adjacent circles). A coloring paints every circle black or white and
//! solves the board when:
//!
//! * (A) each clued skewer holds exactly as many black circles as its clue;
//! * (B) no skewer has three consecutive circles of one color;
//! * (C) no row has three consecutive circles of one color, skipping empty cells;
//! * (D) likewise for columns.

pub mod board;
pub mod check;
pub mod cli;
pub mod ilp;
pub mod reduction;
pub mod solver;
pub mod textio;
pub mod triples;

pub use board::{Board, BoardError, CellCoord, Circle, Color, Coloring, ColoringError, Skewer};
pub use check::{check_coloring, Locus, Rule, Violation, ViolationReport};
pub use solver::{another_solution, enumerate, propagate, solve, PartialColoring, SolveOutcome, SolveStatus, Solver};
pub use triples::TripleIndex;
