//! Windows of three consecutive circles along rows, columns and skewers.
//!
//! Rows and columns skip empty cells, so a window may straddle a gap.

use crate::board::{Board, CellCoord};

pub type Triple = [CellCoord; 3];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleIndex {
    /// `row_triples[i - 1]` holds the windows of row `i`, left to right.
    pub row_triples: Vec<Vec<Triple>>,
    /// `col_triples[j - 1]` holds the windows of column `j`, top to bottom.
    pub col_triples: Vec<Vec<Triple>>,
    /// Windows along each skewer path, parallel to [`Board::skewers`].
    pub skewer_triples: Vec<Vec<Triple>>,
}

fn windows(cells: &[CellCoord]) -> Vec<Triple> {
    cells.windows(3).map(|w| [w[0], w[1], w[2]]).collect()
}

impl TripleIndex {
    pub fn new(board: &Board) -> TripleIndex {
        let mut rows: Vec<Vec<CellCoord>> = vec![Vec::new(); board.rows()];
        let mut cols: Vec<Vec<CellCoord>> = vec![Vec::new(); board.cols()];
        // cells() is row-major, so both lists come out in scan order
        for &cell in board.cells() {
            rows[cell.row - 1].push(cell);
            cols[cell.col - 1].push(cell);
        }
        TripleIndex {
            row_triples: rows.iter().map(|r| windows(r)).collect(),
            col_triples: cols.iter().map(|c| windows(c)).collect(),
            skewer_triples: board.skewers().iter().map(|s| windows(s.path())).collect(),
        }
    }

    /// Every window in the index, skewers first, then rows, then columns.
    pub fn all(&self) -> impl Iterator<Item = &Triple> {
        self.skewer_triples
            .iter()
            .chain(&self.row_triples)
            .chain(&self.col_triples)
            .flatten()
    }

    pub fn len(&self) -> usize {
        self.all().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
