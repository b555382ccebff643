//! Puzzle instance model: grid, circles, clues and skewers.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

/// A 1-based grid cell, row 1 at the top and column 1 at the left.
///
/// The derived ordering is row-major, which is the canonical circle order
/// used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellCoord {
    pub row: usize,
    pub col: usize,
}

impl CellCoord {
    pub const fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }

    /// Orthogonal or diagonal neighbour (Chebyshev distance 1).
    pub fn is_adjacent(self, other: CellCoord) -> bool {
        let dr = self.row.abs_diff(other.row);
        let dc = self.col.abs_diff(other.col);
        dr.max(dc) == 1
    }
}

impl fmt::Display for CellCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    Black,
    White,
}

impl Color {
    pub fn flipped(self) -> Color {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }

    pub fn is_black(self) -> bool {
        self == Color::Black
    }

    pub fn from_black(black: bool) -> Color {
        if black {
            Color::Black
        } else {
            Color::White
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Circle {
    pub clue: Option<u32>,
}

/// An ordered chain of adjacent circles. A single-cell path is the
/// length-zero skewer of an isolated circle.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Skewer {
    path: Vec<CellCoord>,
}

impl Skewer {
    pub fn path(&self) -> &[CellCoord] {
        &self.path
    }

    /// Number of circles on the skewer.
    pub fn size(&self) -> usize {
        self.path.len()
    }

    /// Number of links, i.e. `size() - 1`.
    pub fn length(&self) -> usize {
        self.path.len() - 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoardError {
    #[error("grid dimensions must be positive, got {rows}x{cols}")]
    EmptyGrid { rows: usize, cols: usize },
    #[error("cell {cell} lies outside the {rows}x{cols} grid")]
    OutOfBounds {
        cell: CellCoord,
        rows: usize,
        cols: usize,
    },
    #[error("duplicate circle at {0}")]
    DuplicateCircle(CellCoord),
    #[error("skewer references {0}, which holds no circle")]
    NotACircle(CellCoord),
    #[error("skewer path is empty")]
    EmptySkewer,
    #[error("circle {0} appears twice in one skewer")]
    RepeatedInSkewer(CellCoord),
    #[error("circle {0} belongs to more than one skewer")]
    SharedCircle(CellCoord),
    #[error("skewer step {from} -> {to} joins non-adjacent cells")]
    NonAdjacent { from: CellCoord, to: CellCoord },
    #[error("skewer carries two clues, at {first} and {second}")]
    TwoClues { first: CellCoord, second: CellCoord },
    #[error("clue {clue} at {cell} exceeds the {size} circles of its skewer")]
    ClueTooLarge {
        cell: CellCoord,
        clue: u32,
        size: usize,
    },
}

/// A validated Oredango instance.
///
/// Skewers are stored with multi-circle skewers first, in input order and
/// oriented so the lexicographically smaller endpoint comes first, followed
/// by every single-circle skewer in row-major order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Board {
    rows: usize,
    cols: usize,
    circles: BTreeMap<CellCoord, Circle>,
    skewers: Vec<Skewer>,
    order: Vec<CellCoord>,
    index: HashMap<CellCoord, usize>,
    skewer_of: Vec<usize>,
}

impl Board {
    /// Builds a board from circles `(cell, clue)` and explicit skewer paths.
    /// Circles that no path mentions become length-zero skewers.
    pub fn new<C, S>(rows: usize, cols: usize, circles: C, skewers: S) -> Result<Board, BoardError>
    where
        C: IntoIterator<Item = (CellCoord, Option<u32>)>,
        S: IntoIterator<Item = Vec<CellCoord>>,
    {
        if rows == 0 || cols == 0 {
            return Err(BoardError::EmptyGrid { rows, cols });
        }
        let mut map = BTreeMap::new();
        for (cell, clue) in circles {
            if cell.row == 0 || cell.col == 0 || cell.row > rows || cell.col > cols {
                return Err(BoardError::OutOfBounds { cell, rows, cols });
            }
            if map.insert(cell, Circle { clue }).is_some() {
                return Err(BoardError::DuplicateCircle(cell));
            }
        }

        let order: Vec<CellCoord> = map.keys().copied().collect();
        let index: HashMap<CellCoord, usize> =
            order.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut owner: Vec<Option<usize>> = vec![None; order.len()];

        let mut multi = Vec::new();
        let mut singles = Vec::new();
        for path in skewers {
            if path.is_empty() {
                return Err(BoardError::EmptySkewer);
            }
            for (pos, &cell) in path.iter().enumerate() {
                if !map.contains_key(&cell) {
                    return Err(BoardError::NotACircle(cell));
                }
                if path[..pos].contains(&cell) {
                    return Err(BoardError::RepeatedInSkewer(cell));
                }
            }
            for step in path.windows(2) {
                if !step[0].is_adjacent(step[1]) {
                    return Err(BoardError::NonAdjacent {
                        from: step[0],
                        to: step[1],
                    });
                }
            }
            let id = multi.len() + singles.len();
            for cell in &path {
                let slot = &mut owner[index[cell]];
                if slot.is_some() {
                    return Err(BoardError::SharedCircle(*cell));
                }
                *slot = Some(id);
            }
            let mut path = path;
            if path.len() > 1 && path[path.len() - 1] < path[0] {
                path.reverse();
            }
            if path.len() == 1 {
                singles.push(path[0]);
            } else {
                multi.push(path);
            }
        }
        for (i, cell) in order.iter().enumerate() {
            if owner[i].is_none() {
                singles.push(*cell);
            }
        }
        singles.sort();

        let skewers: Vec<Skewer> = multi
            .into_iter()
            .chain(singles.into_iter().map(|c| vec![c]))
            .map(|path| Skewer { path })
            .collect();

        let mut skewer_of = vec![0; order.len()];
        for (s, skewer) in skewers.iter().enumerate() {
            let mut clued: Option<(CellCoord, u32)> = None;
            for cell in &skewer.path {
                skewer_of[index[cell]] = s;
                if let Some(clue) = map[cell].clue {
                    if let Some((first, _)) = clued {
                        return Err(BoardError::TwoClues {
                            first,
                            second: *cell,
                        });
                    }
                    clued = Some((*cell, clue));
                }
            }
            if let Some((cell, clue)) = clued {
                if clue as usize > skewer.size() {
                    return Err(BoardError::ClueTooLarge {
                        cell,
                        clue,
                        size: skewer.size(),
                    });
                }
            }
        }

        Ok(Board {
            rows,
            cols,
            circles: map,
            skewers,
            order,
            index,
            skewer_of,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn circles(&self) -> &BTreeMap<CellCoord, Circle> {
        &self.circles
    }

    pub fn circle(&self, cell: CellCoord) -> Option<&Circle> {
        self.circles.get(&cell)
    }

    pub fn num_circles(&self) -> usize {
        self.order.len()
    }

    /// Circle cells in row-major order; a cell's position is its circle index.
    pub fn cells(&self) -> &[CellCoord] {
        &self.order
    }

    pub fn circle_index(&self, cell: CellCoord) -> Option<usize> {
        self.index.get(&cell).copied()
    }

    pub fn skewers(&self) -> &[Skewer] {
        &self.skewers
    }

    /// Index into [`Board::skewers`] of the skewer holding `cell`.
    pub fn skewer_of(&self, cell: CellCoord) -> Option<usize> {
        self.circle_index(cell).map(|i| self.skewer_of[i])
    }

    /// The clue of a skewer, if one of its circles carries one.
    pub fn skewer_clue(&self, skewer: usize) -> Option<u32> {
        self.skewers[skewer]
            .path
            .iter()
            .find_map(|c| self.circles[c].clue)
    }

    /// Skewers with more than one circle, as given to [`Board::new`].
    pub fn explicit_skewers(&self) -> impl Iterator<Item = &Skewer> {
        self.skewers.iter().filter(|s| s.size() > 1)
    }
}

/// A total black/white assignment over the circles of a board.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Coloring {
    colors: BTreeMap<CellCoord, Color>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColoringError {
    #[error("no color given for circle {0}")]
    Missing(CellCoord),
    #[error("color given for {0}, which holds no circle")]
    NotACircle(CellCoord),
}

impl Coloring {
    pub fn new(colors: BTreeMap<CellCoord, Color>) -> Self {
        Self { colors }
    }

    /// Colors circle `i` of `board` (row-major) black iff `black[i]`.
    pub fn from_bits(board: &Board, black: &[bool]) -> Self {
        debug_assert_eq!(board.num_circles(), black.len());
        let colors = board
            .cells()
            .iter()
            .zip(black)
            .map(|(&c, &b)| (c, Color::from_black(b)))
            .collect();
        Self { colors }
    }

    pub fn get(&self, cell: CellCoord) -> Option<Color> {
        self.colors.get(&cell).copied()
    }

    pub fn colors(&self) -> &BTreeMap<CellCoord, Color> {
        &self.colors
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn flipped(&self) -> Coloring {
        Coloring {
            colors: self.colors.iter().map(|(&k, &c)| (k, c.flipped())).collect(),
        }
    }

    /// Fails unless the domain is exactly the board's circle set.
    pub fn validate_domain(&self, board: &Board) -> Result<(), ColoringError> {
        for cell in board.cells() {
            if !self.colors.contains_key(cell) {
                return Err(ColoringError::Missing(*cell));
            }
        }
        for cell in self.colors.keys() {
            if board.circle(*cell).is_none() {
                return Err(ColoringError::NotACircle(*cell));
            }
        }
        Ok(())
    }

    /// Black flags in the board's circle order. Assumes a validated domain.
    pub fn to_bits(&self, board: &Board) -> Vec<bool> {
        board
            .cells()
            .iter()
            .map(|c| self.colors[c].is_black())
            .collect()
    }
}

impl FromIterator<(CellCoord, Color)> for Coloring {
    fn from_iter<I: IntoIterator<Item = (CellCoord, Color)>>(iter: I) -> Self {
        Coloring {
            colors: iter.into_iter().collect(),
        }
    }
}
