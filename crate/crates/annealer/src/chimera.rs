/// Position of a qubit inside the Chimera grid.
///
/// `side == 0` qubits couple vertically to the cell below, `side == 1`
/// qubits couple horizontally to the cell to the right. Inside a cell every
/// side-0 qubit couples to every side-1 qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QubitCoord {
    pub row: usize,
    pub col: usize,
    pub side: usize,
    pub track: usize,
}

/// `C_m` hardware graph with shore size 4: `8 m^2` qubits, degree at most 6.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chimera {
    m: usize,
    adjacency: Vec<Vec<usize>>,
    num_edges: usize,
}

pub const SHORE: usize = 4;

impl Chimera {
    pub fn new(m: usize) -> Self {
        let n = 8 * m * m;
        let mut adjacency = vec![Vec::new(); n];
        let mut num_edges = 0;
        let mut link = |a: usize, b: usize, adj: &mut Vec<Vec<usize>>| {
            adj[a].push(b);
            adj[b].push(a);
            num_edges += 1;
        };
        for row in 0..m {
            for col in 0..m {
                for k in 0..SHORE {
                    let v = qubit_index(m, row, col, 0, k);
                    for k2 in 0..SHORE {
                        link(v, qubit_index(m, row, col, 1, k2), &mut adjacency);
                    }
                    if row + 1 < m {
                        link(v, qubit_index(m, row + 1, col, 0, k), &mut adjacency);
                    }
                    let h = qubit_index(m, row, col, 1, k);
                    if col + 1 < m {
                        link(h, qubit_index(m, row, col + 1, 1, k), &mut adjacency);
                    }
                }
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Self {
            m,
            adjacency,
            num_edges,
        }
    }

    /// The 2048-qubit `C_16` graph.
    pub fn c16() -> Self {
        Self::new(16)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn num_qubits(&self) -> usize {
        self.adjacency.len()
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    /// Largest complete graph with a minor in this topology.
    pub fn max_clique_size(&self) -> usize {
        if self.m == 0 {
            0
        } else {
            SHORE * self.m + 1
        }
    }

    pub fn neighbors(&self, q: usize) -> &[usize] {
        &self.adjacency[q]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.num_qubits() && self.adjacency[a].binary_search(&b).is_ok()
    }

    pub fn qubit(&self, row: usize, col: usize, side: usize, track: usize) -> usize {
        debug_assert!(row < self.m && col < self.m && side < 2 && track < SHORE);
        qubit_index(self.m, row, col, side, track)
    }

    pub fn coord(&self, q: usize) -> QubitCoord {
        let cell = q / 8;
        QubitCoord {
            row: cell / self.m,
            col: cell % self.m,
            side: (q % 8) / SHORE,
            track: q % SHORE,
        }
    }

    /// All edges as `(a, b)` with `a < b`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(a, list)| list.iter().filter(move |&&b| b > a).map(move |&b| (a, b)))
    }
}

fn qubit_index(m: usize, row: usize, col: usize, side: usize, track: usize) -> usize {
    8 * (row * m + col) + SHORE * side + track
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c16_has_2048_qubits_and_bounded_degree() {
        let g = Chimera::c16();
        assert_eq!(g.num_qubits(), 2048);
        assert!((0..2048).all(|q| g.neighbors(q).len() <= 6));
        // 16 intra-cell edges per cell plus 4 per vertical and horizontal cell boundary
        assert_eq!(g.num_edges(), 16 * 256 + 2 * 4 * 16 * 15);
        assert_eq!(g.max_clique_size(), 65);
    }

    #[test]
    fn coordinates_round_trip() {
        let g = Chimera::new(3);
        for q in 0..g.num_qubits() {
            let c = g.coord(q);
            assert_eq!(g.qubit(c.row, c.col, c.side, c.track), q);
        }
    }

    #[test]
    fn edge_structure() {
        let g = Chimera::new(2);
        let v = g.qubit(0, 1, 0, 2);
        assert!(g.has_edge(v, g.qubit(0, 1, 1, 3)));
        assert!(g.has_edge(v, g.qubit(1, 1, 0, 2)));
        assert!(!g.has_edge(v, g.qubit(1, 1, 0, 3)));
        assert!(!g.has_edge(v, g.qubit(0, 1, 0, 3)));
        let h = g.qubit(1, 0, 1, 1);
        assert!(g.has_edge(h, g.qubit(1, 1, 1, 1)));
        assert_eq!(g.edges().count(), g.num_edges());
    }
}
