//! Weighted digraph representation, edge-list parsing, and the Q/D/S bundle.
//!
//! Orientation convention: `Q[i][j] > 0` iff the edge (j, i) exists — row i
//! collects what vertex i "sees". Vertices with no incoming edge get a unit
//! convention loop so the in-degree matrix D stays invertible.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Real;
use std::collections::BTreeSet;

/// One weighted directed edge; vertex ids are 1-based.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge<T> {
    pub tail: usize,
    pub head: usize,
    pub weight: T,
}

/// Immutable weighted digraph on vertices `1..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Digraph<T> {
    n: usize,
    edges: Vec<Edge<T>>,
}

impl<T: Real> Digraph<T> {
    /// Validates ids, weights, and duplicate (tail, head) pairs.
    pub fn new(n: usize, edges: Vec<Edge<T>>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for e in &edges {
            for id in [e.tail, e.head] {
                if id < 1 || id > n {
                    return Err(Error::VertexOutOfRange { id, n });
                }
            }
            let weight_ok = e.weight.is_finite() && e.weight > T::zero();
            if !weight_ok {
                return Err(Error::NonPositiveWeight {
                    tail: e.tail,
                    head: e.head,
                });
            }
            if !seen.insert((e.tail, e.head)) {
                return Err(Error::DuplicateEdge {
                    tail: e.tail,
                    head: e.head,
                });
            }
        }
        Ok(Digraph { n, edges })
    }

    /// Parse the edge-list format: the first non-comment line is the vertex
    /// count, each following non-empty line is `tail head [weight]`, and `#`
    /// starts a comment to end-of-line. Weight defaults to 1.
    pub fn parse(text: &str) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut edges: Vec<Edge<T>> = Vec::new();
        let mut seen = BTreeSet::new();

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();

            let Some(count) = n else {
                if fields.len() != 1 {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("expected the vertex count, found {:?}", line),
                    });
                }
                let parsed = fields[0].parse::<usize>().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("invalid vertex count {:?}", fields[0]),
                })?;
                if parsed == 0 {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: "vertex count must be positive".into(),
                    });
                }
                n = Some(parsed);
                continue;
            };

            if fields.len() < 2 || fields.len() > 3 {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("expected `tail head [weight]`, found {:?}", line),
                });
            }
            let mut ids = [0usize; 2];
            for (slot, field) in ids.iter_mut().zip(&fields) {
                let id = field.parse::<usize>().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("invalid vertex id {:?}", field),
                })?;
                if id < 1 || id > count {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("vertex id {} out of range 1..={}", id, count),
                    });
                }
                *slot = id;
            }
            let weight = match fields.get(2) {
                None => T::one(),
                Some(field) => {
                    let w = field.parse::<f64>().map_err(|_| Error::Parse {
                        line: line_no,
                        msg: format!("invalid weight {:?}", field),
                    })?;
                    let weight_ok = w.is_finite() && w > 0.0;
                    if !weight_ok {
                        return Err(Error::Parse {
                            line: line_no,
                            msg: format!("weight must be a positive finite number, found {}", w),
                        });
                    }
                    T::from_f64(w).ok_or_else(|| Error::Parse {
                        line: line_no,
                        msg: format!("weight {} not representable", w),
                    })?
                }
            };
            let (tail, head) = (ids[0], ids[1]);
            if !seen.insert((tail, head)) {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("duplicate edge ({}, {})", tail, head),
                });
            }
            edges.push(Edge { tail, head, weight });
        }

        match n {
            Some(n) => Ok(Digraph { n, edges }),
            None => Err(Error::Parse {
                line: 1,
                msg: "empty document: missing vertex count".into(),
            }),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge<T>] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// The graph with every edge orientation reversed.
    pub fn reversed(&self) -> Digraph<T> {
        Digraph {
            n: self.n,
            edges: self
                .edges
                .iter()
                .map(|e| Edge {
                    tail: e.head,
                    head: e.tail,
                    weight: e.weight,
                })
                .collect(),
        }
    }

    /// Out-neighbor lists, 0-based, unweighted (for traversals).
    pub(crate) fn out_neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.tail - 1].push(e.head - 1);
        }
        adj
    }
}

/// The adjacency matrix Q, in-degree diagonal D, and row-stochastic S = D⁻¹Q
/// for a digraph, with convention loops recorded in `loop_added`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjacencyBundle<T> {
    graph: Digraph<T>,
    q: Matrix<T>,
    d: Vec<T>,
    s: Matrix<T>,
    loop_added: BTreeSet<usize>,
}

/// Build Q, D, S from a digraph. `Q[i][j]` is the weight of edge (j, i);
/// a vertex with in-degree zero gets `Q[i][i] = 1` and joins `loop_added`.
pub fn build_adjacency<T: Real>(g: &Digraph<T>) -> AdjacencyBundle<T> {
    let n = g.n();
    let mut q = Matrix::zeros(n, n);
    for e in g.edges() {
        q[(e.head - 1, e.tail - 1)] = e.weight;
    }
    let mut loop_added = BTreeSet::new();
    for i in 0..n {
        if q.row(i).iter().all(|&w| w == T::zero()) {
            q[(i, i)] = T::one();
            loop_added.insert(i + 1);
        }
    }
    let d: Vec<T> = q.row_sums();
    let mut s = q.clone();
    for (i, &di) in d.iter().enumerate() {
        for v in s.row_mut(i) {
            *v = *v / di;
        }
    }
    AdjacencyBundle {
        graph: g.clone(),
        q,
        d,
        s,
        loop_added,
    }
}

impl<T: Real> AdjacencyBundle<T> {
    pub fn graph(&self) -> &Digraph<T> {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn q(&self) -> &Matrix<T> {
        &self.q
    }

    /// In-degree diagonal (always strictly positive).
    pub fn d(&self) -> &[T] {
        &self.d
    }

    pub fn s(&self) -> &Matrix<T> {
        &self.s
    }

    /// Vertices (1-based) that received the convention loop.
    pub fn loop_added(&self) -> &BTreeSet<usize> {
        &self.loop_added
    }
}
