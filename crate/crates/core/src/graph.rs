//! Small dense simple graphs and brute-force strongly-regular checks.

use crate::error::GraphError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adjacency: Vec<bool>,
    neighbours: Vec<Vec<usize>>,
}

/// `(v, k, lambda, mu)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct SrgParameters {
    pub v: usize,
    pub k: usize,
    pub lambda: usize,
    pub mu: usize,
}

impl std::fmt::Display for SrgParameters {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{},{})", self.v, self.k, self.lambda, self.mu)
    }
}

impl Graph {
    /// Builds a graph from an edge list; loops are ignored and duplicates merged.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut adjacency = vec![false; n * n];
        for (a, b) in edges {
            assert!(a < n && b < n, "edge ({a},{b}) out of range for {n} vertices");
            if a != b {
                adjacency[a * n + b] = true;
                adjacency[b * n + a] = true;
            }
        }
        let neighbours = (0..n).map(|v| (0..n).filter(|&w| adjacency[v * n + w]).collect()).collect();
        Self { n, adjacency, neighbours }
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.neighbours.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn is_adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a * self.n + b]
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.neighbours[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbours[v].len()
    }

    fn common_neighbours(&self, a: usize, b: usize) -> usize {
        self.neighbours[a].iter().filter(|&&w| self.is_adjacent(w, b)).count()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &self.neighbours[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|x| x)
    }

    /// Brute-force strongly-regular parameters. `lambda` (`mu`) is reported as 0
    /// when no adjacent (non-adjacent distinct) pair exists.
    pub fn srg_parameters(&self) -> Result<SrgParameters, GraphError> {
        let n = self.n;
        let k = if n == 0 { 0 } else { self.degree(0) };
        for v in 0..n {
            if self.degree(v) != k {
                return Err(GraphError::NotRegular { vertex: v, degree: self.degree(v), expected: k });
            }
        }
        let mut lambda = None;
        let mut mu = None;
        for a in 0..n {
            for b in a + 1..n {
                let c = self.common_neighbours(a, b);
                let (slot, adjacent) = if self.is_adjacent(a, b) { (&mut lambda, true) } else { (&mut mu, false) };
                match *slot {
                    None => *slot = Some(c),
                    Some(expected) if expected != c => {
                        return Err(if adjacent {
                            GraphError::LambdaMismatch(a, b, c, expected)
                        } else {
                            GraphError::MuMismatch(a, b, c, expected)
                        });
                    }
                    Some(_) => {}
                }
            }
        }
        Ok(SrgParameters { v: n, k, lambda: lambda.unwrap_or(0), mu: mu.unwrap_or(0) })
    }
}
