//! The parabola graph over `F_p^2`: `(x, y) ~ (z, w)` iff `(x + z)^2 = y + w`.
//!
//! Vertices are numbered row-major, `id = x * p + y`. The relation has
//! exactly one self-solution per `x` (at `y = 2x^2`); those loop vertices
//! are recorded separately and kept out of the adjacency rows.

use std::fmt;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{add_raw, mul_raw, sub_raw, FieldElement, Prime};
use crate::bits::{ones, set_bit, BitGraph};

/// Default cap on adjacency storage (512 MiB).
pub const DEFAULT_MEMORY_BUDGET: u128 = 512 << 20;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("adjacency for p = {p} needs {needed} bytes, over the budget of {budget} bytes")]
    OverBudget { p: u64, needed: u128, budget: u128 },
    #[error("vertex id {id} out of range for {n} vertices")]
    VertexOutOfRange { id: usize, n: usize },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// A point `(x, y)` of `F_p^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Vertex {
    x: FieldElement,
    y: FieldElement,
}

impl Vertex {
    pub fn new(p: Prime, x: u64, y: u64) -> Self {
        Self {
            x: p.element(x),
            y: p.element(y),
        }
    }

    pub fn from_id(p: Prime, id: usize) -> Self {
        let q = p.get() as usize;
        Self::new(p, (id / q) as u64, (id % q) as u64)
    }

    #[inline]
    pub fn x(self) -> u64 {
        self.x.residue()
    }

    #[inline]
    pub fn y(self) -> u64 {
        self.y.residue()
    }

    #[inline]
    pub fn prime(self) -> Prime {
        self.x.modulus()
    }

    #[inline]
    pub fn id(self) -> usize {
        (self.x() * self.prime().get() + self.y()) as usize
    }

    pub fn coords(self) -> [u64; 2] {
        [self.x(), self.y()]
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x(), self.y())
    }
}

/// `(x_u + x_v)^2 == y_u + y_v (mod p)` on raw residues, loops included.
#[inline]
pub fn relation_holds(p: u64, xu: u64, yu: u64, xv: u64, yv: u64) -> bool {
    let s = add_raw(xu, xv, p);
    mul_raw(s, s, p) == add_raw(yu, yv, p)
}

/// The unique `w` with `(x + z)^2 = y + w`.
#[inline]
pub fn partner_w(p: u64, x: u64, y: u64, z: u64) -> u64 {
    let s = add_raw(x, z, p);
    sub_raw(mul_raw(s, s, p), y, p)
}

/// Read-only edge queries shared by stored and implicit graphs.
pub trait Adjacency {
    fn vertex_count(&self) -> usize;
    fn is_edge(&self, u: usize, v: usize) -> bool;
    /// Calls `f` on every neighbour of `v` (any order).
    fn for_each_neighbor(&self, v: usize, f: &mut dyn FnMut(usize));
}

impl Adjacency for BitGraph {
    fn vertex_count(&self) -> usize {
        BitGraph::vertex_count(self)
    }

    fn is_edge(&self, u: usize, v: usize) -> bool {
        self.has_edge(u, v)
    }

    fn for_each_neighbor(&self, v: usize, f: &mut dyn FnMut(usize)) {
        for u in self.neighbors(v) {
            f(u);
        }
    }
}

/// The parabola relation evaluated on demand, without adjacency storage.
///
/// Used where `p^2` bit rows would not fit, e.g. grid checks at large `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParabolaRelation {
    pub p: Prime,
}

impl Adjacency for ParabolaRelation {
    fn vertex_count(&self) -> usize {
        self.p.square()
    }

    fn is_edge(&self, u: usize, v: usize) -> bool {
        if u == v {
            return false;
        }
        let q = self.p.get() as usize;
        relation_holds(
            self.p.get(),
            (u / q) as u64,
            (u % q) as u64,
            (v / q) as u64,
            (v % q) as u64,
        )
    }

    fn for_each_neighbor(&self, v: usize, f: &mut dyn FnMut(usize)) {
        let p = self.p.get();
        let q = p as usize;
        let (x, y) = ((v / q) as u64, (v % q) as u64);
        for z in 0..p {
            let id = (z * p + partner_w(p, x, y, z)) as usize;
            if id != v {
                f(id);
            }
        }
    }
}

/// `Π_p` as a simple graph.
#[derive(Clone, Debug)]
pub struct ParabolaGraph {
    p: Prime,
    adjacency: BitGraph,
    loop_vertices: Vec<usize>,
    edge_count: usize,
}

impl ParabolaGraph {
    pub fn build(p: Prime) -> Result<Self, GraphError> {
        Self::build_with_budget(p, DEFAULT_MEMORY_BUDGET)
    }

    /// Builds the graph unless its bit rows would exceed `budget` bytes.
    pub fn build_with_budget(p: Prime, budget: u128) -> Result<Self, GraphError> {
        let n = p.square();
        let needed = BitGraph::storage_bytes(n);
        if needed > budget {
            return Err(GraphError::OverBudget {
                p: p.get(),
                needed,
                budget,
            });
        }
        let q = p.get();
        let mut adjacency = BitGraph::empty(n);
        let mut loop_vertices = Vec::with_capacity(q as usize);
        let mut degree_sum = 0usize;
        // The relation is symmetric, so each row can be filled independently.
        for x in 0..q {
            for y in 0..q {
                let id = (x * q + y) as usize;
                let row = adjacency.row_mut(id);
                for z in 0..q {
                    let nb = (z * q + partner_w(q, x, y, z)) as usize;
                    if nb == id {
                        loop_vertices.push(id);
                    } else {
                        set_bit(row, nb);
                        degree_sum += 1;
                    }
                }
            }
        }
        Ok(Self {
            p,
            adjacency,
            loop_vertices,
            edge_count: degree_sum / 2,
        })
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.p
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.adjacency.vertex_count()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn bits(&self) -> &BitGraph {
        &self.adjacency
    }

    /// Loop-vertex ids, ascending.
    pub fn loop_vertices(&self) -> &[usize] {
        &self.loop_vertices
    }

    pub fn is_loop_vertex(&self, v: Vertex) -> bool {
        self.loop_vertices.binary_search(&v.id()).is_ok()
    }

    pub fn vertex(&self, id: usize) -> Vertex {
        Vertex::from_id(self.p, id)
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.vertex_count()).map(|id| self.vertex(id))
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency.degree(v.id())
    }

    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.adjacency.neighbors(v.id()).map(|id| self.vertex(id))
    }

    /// Stored-edge test.
    pub fn adjacent(&self, u: Vertex, v: Vertex) -> bool {
        self.adjacency.has_edge(u.id(), v.id())
    }

    /// `(degree, multiplicity)` pairs, ascending by degree.
    pub fn degree_profile(&self) -> Vec<(usize, usize)> {
        let mut counts = std::collections::BTreeMap::new();
        for v in 0..self.vertex_count() {
            *counts.entry(self.adjacency.degree(v)).or_insert(0usize) += 1;
        }
        counts.into_iter().collect()
    }

    /// Writes the DIMACS edge format with 1-based ids.
    pub fn export_dimacs<W: Write>(&self, mut sink: W) -> Result<(), GraphError> {
        writeln!(sink, "p edge {} {}", self.vertex_count(), self.edge_count)?;
        for (u, v) in self.adjacency.edges() {
            writeln!(sink, "e {} {}", u + 1, v + 1)?;
        }
        sink.flush()?;
        Ok(())
    }

    /// Writes `u,v` pairs (0-based ids, `u < v`) in the DIMACS order.
    pub fn export_csv<W: Write>(&self, mut sink: W) -> Result<(), GraphError> {
        writeln!(sink, "u,v")?;
        for (u, v) in self.adjacency.edges() {
            writeln!(sink, "{u},{v}")?;
        }
        sink.flush()?;
        Ok(())
    }
}

impl Adjacency for ParabolaGraph {
    fn vertex_count(&self) -> usize {
        ParabolaGraph::vertex_count(self)
    }

    fn is_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency.has_edge(u, v)
    }

    fn for_each_neighbor(&self, v: usize, f: &mut dyn FnMut(usize)) {
        for u in ones(self.adjacency.row(v)) {
            f(u);
        }
    }
}

/// Free-function form of [`ParabolaGraph::adjacent`].
pub fn adjacent(g: &ParabolaGraph, u: Vertex, v: Vertex) -> bool {
    g.adjacent(u, v)
}

/// A vertex written as `[x, y]`, the witness format used in JSON reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Point(pub [u64; 2]);

impl Point {
    pub fn to_vertex(self, p: Prime) -> Result<Vertex, GraphError> {
        let [x, y] = self.0;
        let n = p.square();
        if x >= p.get() || y >= p.get() {
            return Err(GraphError::VertexOutOfRange {
                id: (x.saturating_mul(p.get()).saturating_add(y)) as usize,
                n,
            });
        }
        Ok(Vertex::new(p, x, y))
    }
}

impl From<Vertex> for Point {
    fn from(v: Vertex) -> Self {
        Point(v.coords())
    }
}
