//! Shared helpers: fixture loading, a random board generator and a bitmask
//! brute-force oracle written directly from the rules.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use oredango::textio::{parse_board, parse_coloring, parse_one_in_three};
use oredango::reduction::OneInThreeInstance;
use oredango::{Board, CellCoord, Coloring};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn board(name: &str) -> Board {
    parse_board(&fixture(name)).unwrap()
}

pub fn coloring(board: &Board, name: &str) -> Coloring {
    parse_coloring(&fixture(name), board).unwrap()
}

pub fn instance(name: &str) -> OneInThreeInstance {
    parse_one_in_three(&fixture(name)).unwrap()
}

pub fn c(row: usize, col: usize) -> CellCoord {
    CellCoord::new(row, col)
}

/// Circles in row-major order; bit `i` of a mask is circle `i`.
pub struct Oracle {
    pub cells: Vec<CellCoord>,
    windows: Vec<u32>,
    clued: Vec<(u32, u32)>,
}

impl Oracle {
    pub fn new(board: &Board) -> Oracle {
        let mut cells: Vec<CellCoord> = Vec::new();
        for r in 1..=board.rows() {
            for col in 1..=board.cols() {
                if board.circle(c(r, col)).is_some() {
                    cells.push(c(r, col));
                }
            }
        }
        assert!(cells.len() <= 24);
        let bit = |x: &CellCoord| 1u32 << cells.iter().position(|y| y == x).unwrap();
        let mut lines: Vec<Vec<CellCoord>> = Vec::new();
        for r in 1..=board.rows() {
            lines.push(cells.iter().copied().filter(|x| x.row == r).collect());
        }
        for col in 1..=board.cols() {
            lines.push(cells.iter().copied().filter(|x| x.col == col).collect());
        }
        let mut clued = Vec::new();
        let mut covered = BTreeSet::new();
        for s in board.skewers() {
            lines.push(s.path().to_vec());
            covered.extend(s.path().iter().copied());
            let clues: Vec<u32> = s.path().iter().filter_map(|x| board.circle(*x).unwrap().clue).collect();
            if let Some(&k) = clues.first() {
                clued.push((s.path().iter().map(bit).fold(0, |a, b| a | b), k));
            }
        }
        assert_eq!(covered.len(), cells.len(), "every circle sits on one skewer");
        let windows = lines
            .iter()
            .flat_map(|l| l.windows(3).map(|w| w.iter().map(bit).fold(0, |a, b| a | b)).collect::<Vec<_>>())
            .collect();
        Oracle { cells, windows, clued }
    }

    pub fn accepts(&self, mask: u32) -> bool {
        self.windows.iter().all(|w| matches!((w & mask).count_ones(), 1 | 2))
            && self.clued.iter().all(|&(s, k)| (s & mask).count_ones() == k)
    }

    pub fn solutions(&self) -> Vec<u32> {
        (0..1u32 << self.cells.len()).filter(|&m| self.accepts(m)).collect()
    }

    pub fn to_coloring(&self, mask: u32) -> Coloring {
        self.cells
            .iter()
            .enumerate()
            .map(|(i, &x)| (x, oredango::Color::from_black(mask >> i & 1 == 1)))
            .collect()
    }

    pub fn to_mask(&self, coloring: &Coloring) -> u32 {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, x)| coloring.get(**x) == Some(oredango::Color::Black))
            .map(|(i, _)| 1u32 << i)
            .fold(0, |a, b| a | b)
    }

    pub fn solution_set(&self) -> BTreeSet<Coloring> {
        self.solutions().into_iter().map(|m| self.to_coloring(m)).collect()
    }
}

/// Parts of a random board, kept so tests can rebuild variants.
#[derive(Debug, Clone)]
pub struct BoardSpec {
    pub rows: usize,
    pub cols: usize,
    pub circles: Vec<(CellCoord, Option<u32>)>,
    pub skewers: Vec<Vec<CellCoord>>,
}

impl BoardSpec {
    pub fn build(&self) -> Board {
        Board::new(self.rows, self.cols, self.circles.clone(), self.skewers.clone()).unwrap()
    }
}

/// A random board of at most `max_circles` circles. Skewers are random
/// walks; clues come from a hidden coloring so many boards are solvable.
pub fn random_board<R: Rng>(rng: &mut R, max_circles: usize) -> BoardSpec {
    let rows = rng.gen_range(1..=5);
    let cols = rng.gen_range(1..=5);
    let mut all: Vec<CellCoord> = (1..=rows).flat_map(|r| (1..=cols).map(move |k| c(r, k))).collect();
    all.shuffle(rng);
    let count = rng.gen_range(0..=max_circles.min(all.len()));
    let mut cells: Vec<CellCoord> = all[..count].to_vec();
    cells.sort();
    let hidden: Vec<bool> = cells.iter().map(|_| rng.gen_bool(0.5)).collect();
    let black = |x: &CellCoord| hidden[cells.iter().position(|y| y == x).unwrap()];

    let mut free: BTreeSet<CellCoord> = cells.iter().copied().collect();
    let mut paths: Vec<Vec<CellCoord>> = Vec::new();
    let mut order = cells.clone();
    order.shuffle(rng);
    for start in order {
        if !free.contains(&start) || rng.gen_bool(0.4) {
            continue;
        }
        free.remove(&start);
        let mut path = vec![start];
        let want = rng.gen_range(2..=6);
        while path.len() < want {
            let last = *path.last().unwrap();
            let next: Vec<CellCoord> = free.iter().copied().filter(|x| x.is_adjacent(last)).collect();
            let Some(&n) = next.choose(rng) else { break };
            free.remove(&n);
            path.push(n);
        }
        if path.len() == 1 {
            free.insert(start);
        } else {
            paths.push(path);
        }
    }

    let mut clue_at: Vec<(CellCoord, u32)> = Vec::new();
    let singles: Vec<Vec<CellCoord>> = free.iter().map(|x| vec![*x]).collect();
    for path in paths.iter().chain(&singles) {
        if rng.gen_bool(0.5) {
            let mut k = path.iter().filter(|x| black(x)).count() as u32;
            if rng.gen_bool(0.15) {
                k = rng.gen_range(0..=path.len() as u32);
            }
            clue_at.push((*path.choose(rng).unwrap(), k));
        }
    }
    let circles = cells
        .iter()
        .map(|&x| (x, clue_at.iter().find(|(y, _)| *y == x).map(|&(_, k)| k)))
        .collect();
    BoardSpec {
        rows,
        cols,
        circles,
        skewers: paths,
    }
}

/// A random instance over `nvars` variables, each used at least once.
pub fn random_instance<R: Rng>(rng: &mut R, nvars: usize, nclauses: usize) -> OneInThreeInstance {
    use oredango::reduction::Literal;
    assert!(nvars >= 3 && nclauses * 3 >= nvars);
    loop {
        let clauses: Vec<[Literal; 3]> = (0..nclauses)
            .map(|_| {
                let mut vars: Vec<usize> = (1..=nvars).collect();
                vars.shuffle(rng);
                let lit = |v: usize, rng: &mut R| Literal::new(v, rng.gen_bool(0.5));
                [lit(vars[0], rng), lit(vars[1], rng), lit(vars[2], rng)]
            })
            .collect();
        let inst = OneInThreeInstance::new(nvars, clauses).unwrap();
        if (1..=nvars).all(|v| inst.clauses().iter().flatten().any(|l| l.var == v)) {
            return inst;
        }
    }
}
