//! Complete search over colorings: propagation to a fixpoint, then
//! row-major branching with Black tried before White.
//!
//! Every puzzle rule is a cardinality constraint over a set of circles:
//! a clue pins the black count of its skewer, and each triple window must
//! hold one or two blacks. The engine below works on that form only, which
//! lets the 0-1 model in [`crate::ilp`] run on the same search.

use std::collections::{BTreeMap, HashSet};
use std::ops::ControlFlow;

use thiserror::Error;

use crate::board::{Board, CellCoord, Color, Coloring, ColoringError};
use crate::check::{check_with_index, Rule, ViolationReport};
use crate::triples::TripleIndex;

/// `lo <= #black(vars) <= hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct CountConstraint {
    pub vars: Vec<usize>,
    pub lo: usize,
    pub hi: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct Network {
    nvars: usize,
    constraints: Vec<CountConstraint>,
    watches: Vec<Vec<usize>>,
    infeasible: bool,
}

type State = Vec<Option<bool>>;

impl Network {
    pub fn new(nvars: usize, constraints: Vec<CountConstraint>) -> Network {
        let mut watches = vec![Vec::new(); nvars];
        let mut infeasible = false;
        for (i, k) in constraints.iter().enumerate() {
            infeasible |= k.lo > k.hi || k.lo > k.vars.len();
            for &v in &k.vars {
                watches[v].push(i);
            }
        }
        Network {
            nvars,
            constraints,
            watches,
            infeasible,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Runs count propagation to a fixpoint. `seed` lists the constraints to
    /// revisit first; `None` revisits all of them. On conflict returns the
    /// index of the failing constraint.
    pub fn propagate(&self, state: &mut State, seed: Option<&[usize]>) -> Result<(), usize> {
        let mut queue: Vec<usize> = match seed {
            Some(s) => s.to_vec(),
            None => (0..self.constraints.len()).rev().collect(),
        };
        let mut queued = vec![false; self.constraints.len()];
        for &k in &queue {
            queued[k] = true;
        }
        while let Some(k) = queue.pop() {
            queued[k] = false;
            let con = &self.constraints[k];
            let mut black = 0;
            let mut open = 0;
            for &v in &con.vars {
                match state[v] {
                    Some(true) => black += 1,
                    Some(false) => {}
                    None => open += 1,
                }
            }
            if black > con.hi || black + open < con.lo {
                return Err(k);
            }
            if open == 0 {
                continue;
            }
            let forced = if black == con.hi {
                false
            } else if black + open == con.lo {
                true
            } else {
                continue;
            };
            for &v in &con.vars {
                if state[v].is_none() {
                    state[v] = Some(forced);
                    for &w in &self.watches[v] {
                        if !queued[w] {
                            queued[w] = true;
                            queue.push(w);
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Depth-first search from `state`, calling `visit` on every complete
    /// assignment in lexicographic order (true before false, variable 0
    /// most significant). Returns the number of search nodes.
    pub fn search(
        &self,
        state: State,
        visit: &mut dyn FnMut(&[bool]) -> ControlFlow<()>,
    ) -> u64 {
        let mut nodes = 0;
        if !self.infeasible {
            let _ = self.descend(state, None, 0, &mut nodes, visit);
        }
        nodes
    }

    fn descend(
        &self,
        mut state: State,
        branched: Option<usize>,
        from: usize,
        nodes: &mut u64,
        visit: &mut dyn FnMut(&[bool]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        *nodes += 1;
        let seed = branched.map(|v| self.watches[v].as_slice());
        if self.propagate(&mut state, seed).is_err() {
            return ControlFlow::Continue(());
        }
        let Some(next) = (from..self.nvars).find(|&v| state[v].is_none()) else {
            let full: Vec<bool> = state.iter().map(|s| s.expect("complete")).collect();
            return visit(&full);
        };
        for value in [true, false] {
            let mut child = state.clone();
            child[next] = Some(value);
            self.descend(child, Some(next), next + 1, nodes, visit)?;
        }
        ControlFlow::Continue(())
    }
}

/// Network for a board; variables are circle indices (row-major).
/// The second vector names the rule behind each constraint.
pub(crate) fn board_network(board: &Board, index: &TripleIndex) -> (Network, Vec<Rule>) {
    let idx = |c: &CellCoord| board.circle_index(*c).expect("circle");
    let mut constraints = Vec::new();
    let mut rules = Vec::new();
    for (s, skewer) in board.skewers().iter().enumerate() {
        if let Some(clue) = board.skewer_clue(s) {
            constraints.push(CountConstraint {
                vars: skewer.path().iter().map(idx).collect(),
                lo: clue as usize,
                hi: clue as usize,
            });
            rules.push(Rule::A);
        }
    }
    let families = [
        (Rule::B, &index.skewer_triples),
        (Rule::C, &index.row_triples),
        (Rule::D, &index.col_triples),
    ];
    for (rule, family) in families {
        for t in family.iter().flatten() {
            constraints.push(CountConstraint {
                vars: t.iter().map(idx).collect(),
                lo: 1,
                hi: 2,
            });
            rules.push(rule);
        }
    }
    (Network::new(board.num_circles(), constraints), rules)
}

/// A coloring in progress: every circle is Black, White or unassigned.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialColoring {
    cells: BTreeMap<CellCoord, Option<Color>>,
}

impl PartialColoring {
    /// All circles of `board` unassigned.
    pub fn new(board: &Board) -> Self {
        Self {
            cells: board.cells().iter().map(|&c| (c, None)).collect(),
        }
    }

    pub fn from_coloring(coloring: &Coloring) -> Self {
        Self {
            cells: coloring.colors().iter().map(|(&k, &c)| (k, Some(c))).collect(),
        }
    }

    pub fn get(&self, cell: CellCoord) -> Option<Color> {
        self.cells.get(&cell).copied().flatten()
    }

    pub fn set(&mut self, cell: CellCoord, color: Option<Color>) -> Result<(), ColoringError> {
        match self.cells.get_mut(&cell) {
            Some(slot) => {
                *slot = color;
                Ok(())
            }
            None => Err(ColoringError::NotACircle(cell)),
        }
    }

    pub fn cells(&self) -> &BTreeMap<CellCoord, Option<Color>> {
        &self.cells
    }

    pub fn assigned(&self) -> usize {
        self.cells.values().filter(|c| c.is_some()).count()
    }

    pub fn is_complete(&self) -> bool {
        self.cells.values().all(Option::is_some)
    }

    pub fn to_coloring(&self) -> Option<Coloring> {
        self.cells
            .iter()
            .map(|(&k, c)| c.map(|c| (k, c)))
            .collect::<Option<_>>()
            .map(Coloring::new)
    }

    fn to_state(&self, board: &Board) -> Result<State, ColoringError> {
        if let Some(extra) = self.cells.keys().find(|c| board.circle(**c).is_none()) {
            return Err(ColoringError::NotACircle(*extra));
        }
        board
            .cells()
            .iter()
            .map(|c| match self.cells.get(c) {
                Some(v) => Ok(v.map(Color::is_black)),
                None => Err(ColoringError::Missing(*c)),
            })
            .collect()
    }
}

/// A rule that can no longer be met under the current partial coloring.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("rule {rule} cannot be satisfied on {cells:?}")]
pub struct Conflict {
    pub rule: Rule,
    pub cells: Vec<CellCoord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PropagateError {
    #[error(transparent)]
    Conflict(#[from] Conflict),
    #[error(transparent)]
    Domain(#[from] ColoringError),
}

/// Applies every sound count deduction until nothing changes.
pub fn propagate(board: &Board, partial: &PartialColoring) -> Result<PartialColoring, PropagateError> {
    let index = TripleIndex::new(board);
    let (net, rules) = board_network(board, &index);
    let mut state = partial.to_state(board)?;
    if let Err(k) = net.propagate(&mut state, None) {
        let cells = net.constraints[k]
            .vars
            .iter()
            .map(|&v| board.cells()[v])
            .collect();
        return Err(Conflict {
            rule: rules[k],
            cells,
        }
        .into());
    }
    Ok(PartialColoring {
        cells: board.cells().iter().copied().zip(state.into_iter().map(|s| s.map(Color::from_black))).collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Sat,
    Unsat,
    /// More solutions exist than were requested.
    CapReached,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    pub solutions: Vec<Coloring>,
    pub nodes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("solution limit must be at least 1")]
    ZeroCap,
    #[error("known coloring #{index} does not fit the board: {source}")]
    KnownDomain {
        index: usize,
        #[source]
        source: ColoringError,
    },
    #[error("known coloring #{index} breaks {} rule(s)", .report.len())]
    KnownInvalid {
        index: usize,
        report: ViolationReport,
    },
}

/// Reusable search context for one board.
pub struct Solver<'a> {
    board: &'a Board,
    index: TripleIndex,
    net: Network,
}

impl<'a> Solver<'a> {
    pub fn new(board: &'a Board) -> Self {
        let index = TripleIndex::new(board);
        let (net, _) = board_network(board, &index);
        Self { board, index, net }
    }

    fn root(&self) -> State {
        vec![None; self.board.num_circles()]
    }

    /// First solution in search order, if any.
    pub fn solve(&self) -> SolveOutcome {
        let mut found = None;
        let nodes = self.net.search(self.root(), &mut |bits| {
            found = Some(bits.to_vec());
            ControlFlow::Break(())
        });
        let solutions: Vec<Coloring> = found.iter().map(|b| Coloring::from_bits(self.board, b)).collect();
        SolveOutcome {
            status: if solutions.is_empty() {
                SolveStatus::Unsat
            } else {
                SolveStatus::Sat
            },
            solutions,
            nodes,
        }
    }

    /// Up to `cap` solutions in search order. The search looks one solution
    /// past the cap so that `CapReached` always means "more exist".
    pub fn enumerate(&self, cap: usize) -> Result<SolveOutcome, SolveError> {
        if cap == 0 {
            return Err(SolveError::ZeroCap);
        }
        let mut found: Vec<Vec<bool>> = Vec::new();
        let mut overflow = false;
        let nodes = self.net.search(self.root(), &mut |bits| {
            if found.len() == cap {
                overflow = true;
                return ControlFlow::Break(());
            }
            found.push(bits.to_vec());
            ControlFlow::Continue(())
        });
        let status = if overflow {
            SolveStatus::CapReached
        } else if found.is_empty() {
            SolveStatus::Unsat
        } else {
            SolveStatus::Sat
        };
        Ok(SolveOutcome {
            status,
            solutions: found.iter().map(|b| Coloring::from_bits(self.board, b)).collect(),
            nodes,
        })
    }

    /// A solution outside `known`, or `None` when `known` already holds them all.
    pub fn another_solution(&self, known: &[Coloring]) -> Result<Option<Coloring>, SolveError> {
        let mut seen = HashSet::new();
        for (i, k) in known.iter().enumerate() {
            let report = check_with_index(self.board, &self.index, k)
                .map_err(|source| SolveError::KnownDomain { index: i + 1, source })?;
            if !report.is_empty() {
                return Err(SolveError::KnownInvalid {
                    index: i + 1,
                    report,
                });
            }
            seen.insert(k.to_bits(self.board));
        }
        let mut fresh = None;
        self.net.search(self.root(), &mut |bits| {
            if seen.contains(bits) {
                ControlFlow::Continue(())
            } else {
                fresh = Some(bits.to_vec());
                ControlFlow::Break(())
            }
        });
        Ok(fresh.map(|b| Coloring::from_bits(self.board, &b)))
    }
}

pub fn solve(board: &Board) -> SolveOutcome {
    Solver::new(board).solve()
}

pub fn enumerate(board: &Board, cap: usize) -> Result<SolveOutcome, SolveError> {
    Solver::new(board).enumerate(cap)
}

pub fn another_solution(board: &Board, known: &[Coloring]) -> Result<Option<Coloring>, SolveError> {
    Solver::new(board).another_solution(known)
}
