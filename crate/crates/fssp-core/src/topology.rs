//! The six network shapes: lines, rings and squares with two-way or one-way
//! links, plus the per-cell neighborhood and word-routing tables.
//!
//! Cells are indexed 0-based. Two-dimensional models use row-major flat
//! indices; `(i, j)` maps to `i * n + j`.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::TopologyError;

/// The network model of a cellular automaton.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelKind {
    /// Two-way non-circular 1-D array.
    Line,
    /// Two-way circular 1-D array.
    Ring,
    /// One-way circular 1-D array: cell `i` receives only from `i-1`.
    ORing,
    /// Two-way non-circular n×n array.
    Square,
    /// Two-way n×n torus: every row and column is a ring.
    SquareOfRings,
    /// One-way n×n torus: cell `(i,j)` receives from `(i-1,j)` and `(i,j-1)`.
    SquareOfORings,
}

impl ModelKind {
    pub fn is_two_dimensional(self) -> bool {
        matches!(
            self,
            ModelKind::Square | ModelKind::SquareOfRings | ModelKind::SquareOfORings
        )
    }

    pub fn is_one_way(self) -> bool {
        matches!(self, ModelKind::ORing | ModelKind::SquareOfORings)
    }

    pub fn is_circular(self) -> bool {
        matches!(
            self,
            ModelKind::Ring | ModelKind::ORing | ModelKind::SquareOfRings | ModelKind::SquareOfORings
        )
    }

    /// Smallest supported cell count per dimension.
    pub fn min_size(self) -> usize {
        match self {
            ModelKind::Line | ModelKind::Square => 2,
            ModelKind::Ring | ModelKind::ORing => 3,
            ModelKind::SquareOfRings | ModelKind::SquareOfORings => 2,
        }
    }

    pub fn id(self) -> &'static str {
        match self {
            ModelKind::Line => "line",
            ModelKind::Ring => "ring",
            ModelKind::ORing => "oring",
            ModelKind::Square => "square",
            ModelKind::SquareOfRings => "square-of-rings",
            ModelKind::SquareOfORings => "square-of-orings",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// A communication direction. One-dimensional models use `Left`/`Right`;
/// two-dimensional models use all four.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[repr(u8)]
pub enum Port {
    Up = 0,
    Left = 1,
    Down = 2,
    Right = 3,
}

impl Port {
    pub const ALL: [Port; 4] = [Port::Up, Port::Left, Port::Down, Port::Right];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn opposite(self) -> Port {
        match self {
            Port::Up => Port::Down,
            Port::Down => Port::Up,
            Port::Left => Port::Right,
            Port::Right => Port::Left,
        }
    }

    pub fn mask(self) -> u8 {
        1 << self.index()
    }
}

/// Which ports a cell can receive on and send on. Boundary cells of the
/// non-circular models have fewer ports; one-way models receive and send on
/// disjoint port sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct PortSig {
    pub inputs: u8,
    pub outputs: u8,
}

impl PortSig {
    pub fn has_input(&self, p: Port) -> bool {
        self.inputs & p.mask() != 0
    }

    pub fn has_output(&self, p: Port) -> bool {
        self.outputs & p.mask() != 0
    }
}

/// A topology instance: model kind, size, neighbor function and the routing
/// table that wires each input port to the emitting cell's output port.
#[derive(Debug, Clone)]
pub struct Topology {
    kind: ModelKind,
    n: usize,
    cells: usize,
    sigs: Vec<PortSig>,
    /// For each cell and input port: the source cell and its output port.
    routes: Vec<[Option<(usize, Port)>; 4]>,
    max_neighbors: usize,
}

impl Topology {
    /// Builds the neighborhood for `kind` with `n` cells per dimension.
    pub fn new(kind: ModelKind, n: usize) -> Result<Topology, TopologyError> {
        if n < kind.min_size() {
            return Err(TopologyError::TooSmall {
                kind,
                n,
                min: kind.min_size(),
            });
        }
        let cells = if kind.is_two_dimensional() { n * n } else { n };
        let mut sigs = vec![PortSig::default(); cells];
        let mut routes = vec![[None; 4]; cells];

        let mut link = |dst: usize, port: Port, src: usize| {
            sigs[dst].inputs |= port.mask();
            sigs[src].outputs |= port.opposite().mask();
            routes[dst][port.index()] = Some((src, port.opposite()));
        };

        match kind {
            ModelKind::Line => {
                for i in 0..n {
                    if i > 0 {
                        link(i, Port::Left, i - 1);
                    }
                    if i + 1 < n {
                        link(i, Port::Right, i + 1);
                    }
                }
            }
            ModelKind::Ring => {
                for i in 0..n {
                    link(i, Port::Left, (i + n - 1) % n);
                    link(i, Port::Right, (i + 1) % n);
                }
            }
            ModelKind::ORing => {
                for i in 0..n {
                    link(i, Port::Left, (i + n - 1) % n);
                }
            }
            ModelKind::Square | ModelKind::SquareOfRings => {
                let wrap = kind == ModelKind::SquareOfRings;
                for i in 0..n {
                    for j in 0..n {
                        let c = i * n + j;
                        if i > 0 || wrap {
                            link(c, Port::Up, ((i + n - 1) % n) * n + j);
                        }
                        if j > 0 || wrap {
                            link(c, Port::Left, i * n + (j + n - 1) % n);
                        }
                        if i + 1 < n || wrap {
                            link(c, Port::Down, ((i + 1) % n) * n + j);
                        }
                        if j + 1 < n || wrap {
                            link(c, Port::Right, i * n + (j + 1) % n);
                        }
                    }
                }
            }
            ModelKind::SquareOfORings => {
                for i in 0..n {
                    for j in 0..n {
                        let c = i * n + j;
                        link(c, Port::Up, ((i + n - 1) % n) * n + j);
                        link(c, Port::Left, i * n + (j + n - 1) % n);
                    }
                }
            }
        }

        let max_neighbors = sigs
            .iter()
            .map(|s| s.inputs.count_ones() as usize)
            .max()
            .unwrap_or(0);

        Ok(Topology {
            kind,
            n,
            cells,
            sigs,
            routes,
            max_neighbors,
        })
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    /// Cells per dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Total cell count (`n` or `n*n`).
    pub fn cells(&self) -> usize {
        self.cells
    }

    /// Maximum neighbor-list length over all cells.
    pub fn max_neighbors(&self) -> usize {
        self.max_neighbors
    }

    pub fn sig(&self, cell: usize) -> PortSig {
        self.sigs[cell]
    }

    /// Source cell and source output port feeding `cell`'s input `port`.
    pub fn route(&self, cell: usize, port: Port) -> Option<(usize, Port)> {
        self.routes[cell][port.index()]
    }

    /// Ordered neighbor list of a cell (input sources, in port order).
    pub fn neighbors(&self, cell: usize) -> Vec<usize> {
        Port::ALL
            .iter()
            .filter_map(|&p| self.routes[cell][p.index()].map(|(src, _)| src))
            .collect()
    }

    pub fn flat(&self, i: usize, j: usize) -> usize {
        debug_assert!(self.kind.is_two_dimensional());
        i * self.n + j
    }

    pub fn coords(&self, cell: usize) -> (usize, usize) {
        if self.kind.is_two_dimensional() {
            (cell / self.n, cell % self.n)
        } else {
            (0, cell)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_neighborhoods() {
        let t = Topology::new(ModelKind::Line, 4).unwrap();
        assert_eq!(t.neighbors(0), vec![1]);
        assert_eq!(t.neighbors(1), vec![0, 2]);
        assert_eq!(t.neighbors(2), vec![1, 3]);
        assert_eq!(t.neighbors(3), vec![2]);
        assert_eq!(t.max_neighbors(), 2);
    }

    #[test]
    fn oring_neighborhoods() {
        let t = Topology::new(ModelKind::ORing, 5).unwrap();
        assert_eq!(t.neighbors(0), vec![4]);
        for k in 1..5 {
            assert_eq!(t.neighbors(k), vec![k - 1]);
        }
        assert_eq!(t.max_neighbors(), 1);
    }

    #[test]
    fn ring_is_cyclic_with_two_neighbors() {
        let t = Topology::new(ModelKind::Ring, 6).unwrap();
        for i in 0..6 {
            assert_eq!(t.neighbors(i).len(), 2);
        }
        assert_eq!(t.neighbors(0), vec![5, 1]);
    }

    #[test]
    fn square_two_corners() {
        // All four cells of a 2x2 square are corners with exactly 2 neighbors.
        let t = Topology::new(ModelKind::Square, 2).unwrap();
        for c in 0..4 {
            assert_eq!(t.neighbors(c).len(), 2);
        }
    }

    #[test]
    fn square_interior_neighborhood_order() {
        let t = Topology::new(ModelKind::Square, 3).unwrap();
        // (1,1) -> up (0,1), left (1,0), down (2,1), right (1,2)
        assert_eq!(t.neighbors(4), vec![1, 3, 7, 5]);
    }

    #[test]
    fn square_of_orings_receives_from_up_and_left() {
        let t = Topology::new(ModelKind::SquareOfORings, 3).unwrap();
        assert_eq!(t.neighbors(0), vec![6, 2]); // wraps
        assert_eq!(t.neighbors(4), vec![1, 3]);
        assert_eq!(t.max_neighbors(), 2);
    }

    #[test]
    fn too_small_is_rejected_with_minimum() {
        let err = Topology::new(ModelKind::Ring, 2).unwrap_err();
        match err {
            TopologyError::TooSmall { min, .. } => assert_eq!(min, 3),
        }
    }
}
