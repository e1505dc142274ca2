//! Independent sets: exhaustive oracle, min-degree greedy, and an exact
//! branch-and-bound solver on bitset residuals.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::Prime;
use crate::bits::{clear_bit, count_ones, first_one, full_set, intersection_count, ones, BitGraph};
use crate::graph::{
    Adjacency, GraphError, ParabolaGraph, ParabolaRelation, Point, Vertex, DEFAULT_MEMORY_BUDGET,
};
use crate::structure::{tait_grid, verify_independent, Independence, StructureError};

/// Largest graph the exhaustive oracle accepts.
pub const ORACLE_CAP: usize = 25;

/// Largest vertex count for which greedy runs on the implicit relation
/// when the bit rows do not fit.
pub const IMPLICIT_GREEDY_CAP: usize = 1 << 18;

#[derive(Debug, Error)]
pub enum IndepError {
    #[error("oracle accepts at most {ORACLE_CAP} vertices, got {0}")]
    OracleCap(usize),
    #[error("witness for p = {p} is not independent: {u:?} ~ {v:?}")]
    NotIndependent { p: u64, u: Point, v: Point },
    #[error("witness size {claimed} does not match {actual} listed vertices")]
    SizeMismatch { claimed: usize, actual: usize },
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("invalid prime in witness: {0}")]
    Prime(#[from] crate::arith::ArithError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Oracle,
    Greedy,
    Exact,
    Grid,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Oracle => "oracle",
            Provenance::Greedy => "greedy",
            Provenance::Exact => "exact",
            Provenance::Grid => "grid",
        }
    }
}

/// Search limits for [`exact_mis`]. The search order never depends on the
/// budget; hitting a limit only truncates it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Budget {
    pub time: Option<Duration>,
    pub nodes: Option<u64>,
}

impl Budget {
    pub const UNLIMITED: Budget = Budget {
        time: None,
        nodes: None,
    };

    pub fn time(limit: Duration) -> Self {
        Budget {
            time: Some(limit),
            nodes: None,
        }
    }

    pub fn nodes(limit: u64) -> Self {
        Budget {
            time: None,
            nodes: Some(limit),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependenceResult {
    /// Vertex ids, ascending.
    pub set: Vec<usize>,
    pub provenance: Provenance,
    pub optimal: bool,
    pub budget_exhausted: bool,
    pub elapsed: Duration,
}

impl IndependenceResult {
    fn new<A: Adjacency + ?Sized>(
        g: &A,
        mut set: Vec<usize>,
        provenance: Provenance,
        optimal: bool,
        budget_exhausted: bool,
        elapsed: Duration,
    ) -> Self {
        set.sort_unstable();
        debug_assert!(
            verify_independent(g, &set).map(Independence::holds) == Ok(true),
            "{provenance:?} returned a dependent set"
        );
        debug_assert!(!optimal || matches!(provenance, Provenance::Oracle | Provenance::Exact));
        debug_assert!(!(optimal && budget_exhausted));
        Self {
            set,
            provenance,
            optimal,
            budget_exhausted,
            elapsed,
        }
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.set.len()
    }

    pub fn report(&self, p: Prime) -> MisReport {
        MisReport {
            p: p.get(),
            method: self.provenance,
            size: self.size(),
            optimal: self.optimal,
            budget_exhausted: self.budget_exhausted,
            witness: self
                .set
                .iter()
                .map(|&id| Point::from(Vertex::from_id(p, id)))
                .collect(),
            elapsed_ms: self.elapsed.as_millis() as u64,
        }
    }
}

/// JSON form of an [`IndependenceResult`] on `Π_p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MisReport {
    pub p: u64,
    pub method: Provenance,
    pub size: usize,
    pub optimal: bool,
    pub budget_exhausted: bool,
    pub witness: Vec<Point>,
    pub elapsed_ms: u64,
}

impl MisReport {
    /// Re-checks the witness against the parabola relation.
    pub fn verify(&self) -> Result<(), IndepError> {
        let p = Prime::new(self.p)?;
        if self.size != self.witness.len() {
            return Err(IndepError::SizeMismatch {
                claimed: self.size,
                actual: self.witness.len(),
            });
        }
        let ids = self
            .witness
            .iter()
            .map(|pt| pt.to_vertex(p).map(Vertex::id))
            .collect::<Result<Vec<_>, _>>()?;
        match verify_independent(&ParabolaRelation { p }, &ids)? {
            Independence::Independent => Ok(()),
            Independence::Edge(u, v) => Err(IndepError::NotIndependent {
                p: p.get(),
                u: Vertex::from_id(p, u).into(),
                v: Vertex::from_id(p, v).into(),
            }),
        }
    }
}

/// Exhaustive maximum independent set for at most [`ORACLE_CAP`] vertices.
///
/// Include-first enumeration in id order, replacing the incumbent only on a
/// strict improvement, so the witness is the lexicographically smallest
/// maximum set.
pub fn oracle_mis(g: &BitGraph) -> Result<IndependenceResult, IndepError> {
    let start = Instant::now();
    let n = g.vertex_count();
    if n > ORACLE_CAP {
        return Err(IndepError::OracleCap(n));
    }
    let nbr: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).fold(0u32, |m, u| m | (1 << u)))
        .collect();

    struct Search<'a> {
        nbr: &'a [u32],
        found: bool,
        best: u32,
        best_size: u32,
    }

    impl Search<'_> {
        fn rec(&mut self, allowed: u32, cur: u32, size: u32) {
            if self.found && size + allowed.count_ones() <= self.best_size {
                return;
            }
            if allowed == 0 {
                self.found = true;
                self.best = cur;
                self.best_size = size;
                return;
            }
            let v = allowed.trailing_zeros() as usize;
            let rest = allowed & !(1 << v);
            self.rec(rest & !self.nbr[v], cur | (1 << v), size + 1);
            self.rec(rest, cur, size);
        }
    }

    let mut s = Search {
        nbr: &nbr,
        found: false,
        best: 0,
        best_size: 0,
    };
    s.rec(((1u64 << n) - 1) as u32, 0, 0);
    let set = (0..n).filter(|&v| s.best >> v & 1 == 1).collect();
    Ok(IndependenceResult::new(
        g,
        set,
        Provenance::Oracle,
        true,
        false,
        start.elapsed(),
    ))
}

/// Min-degree greedy: take the vertex of least residual degree (smallest id
/// on ties), then delete its closed neighbourhood.
pub fn greedy_mis<A: Adjacency + ?Sized>(g: &A) -> IndependenceResult {
    let start = Instant::now();
    let n = g.vertex_count();
    let mut degree = vec![0usize; n];
    for (v, d) in degree.iter_mut().enumerate() {
        g.for_each_neighbor(v, &mut |_| *d += 1);
    }
    let mut alive = vec![true; n];
    let mut queue: BTreeSet<(usize, usize)> = degree.iter().enumerate().map(|(v, &d)| (d, v)).collect();
    let mut set = Vec::new();
    let mut closed = Vec::new();
    while let Some((_, v)) = queue.pop_first() {
        set.push(v);
        closed.clear();
        closed.push(v);
        g.for_each_neighbor(v, &mut |u| {
            if alive[u] {
                closed.push(u);
            }
        });
        for &u in &closed {
            alive[u] = false;
            queue.remove(&(degree[u], u));
        }
        for &u in &closed[1..] {
            g.for_each_neighbor(u, &mut |w| {
                if alive[w] {
                    queue.remove(&(degree[w], w));
                    degree[w] -= 1;
                    queue.insert((degree[w], w));
                }
            });
        }
    }
    IndependenceResult::new(g, set, Provenance::Greedy, false, false, start.elapsed())
}

struct BranchAndBound<'a> {
    g: &'a BitGraph,
    stride: usize,
    budget: Budget,
    start: Instant,
    nodes: u64,
    exhausted: bool,
    current: Vec<usize>,
    best: Vec<usize>,
    scratch: Vec<u64>,
}

impl BranchAndBound<'_> {
    fn out_of_budget(&mut self) -> bool {
        if self.exhausted {
            return true;
        }
        self.nodes += 1;
        if let Some(limit) = self.budget.nodes {
            if self.nodes > limit {
                self.exhausted = true;
            }
        }
        if let Some(limit) = self.budget.time {
            if self.nodes.is_multiple_of(256) && self.start.elapsed() >= limit {
                self.exhausted = true;
            }
        }
        self.exhausted
    }

    /// Number of cliques in a greedy clique cover of `cand`; bounds α from above.
    fn clique_cover_bound(&mut self, cand: &[u64], stop_at: usize) -> usize {
        let scratch = &mut self.scratch;
        scratch.clear();
        scratch.extend_from_slice(cand);
        let mut clique = vec![0u64; self.stride];
        let mut cliques = 0;
        while let Some(u) = first_one(scratch) {
            cliques += 1;
            if cliques > stop_at {
                return cliques;
            }
            clear_bit(scratch, u);
            for (c, (s, r)) in clique.iter_mut().zip(scratch.iter().zip(self.g.row(u))) {
                *c = s & r;
            }
            while let Some(w) = first_one(&clique) {
                clear_bit(scratch, w);
                for (c, r) in clique.iter_mut().zip(self.g.row(w)) {
                    *c &= r;
                }
            }
        }
        cliques
    }

    fn expand(&mut self, cand: Vec<u64>) {
        if self.out_of_budget() {
            return;
        }
        let size = self.current.len();
        let best = self.best.len();
        let remaining = count_ones(&cand);
        if remaining == 0 {
            if size > best {
                self.best = self.current.clone();
            }
            return;
        }
        if size + remaining <= best {
            return;
        }
        if size + self.clique_cover_bound(&cand, best.saturating_sub(size)) <= best {
            return;
        }
        // Branch vertex: maximum residual degree, smallest id on ties.
        let mut pivot = None;
        let mut pivot_deg = 0;
        for v in ones(&cand) {
            let d = intersection_count(self.g.row(v), &cand);
            if pivot.is_none() || d > pivot_deg {
                pivot = Some(v);
                pivot_deg = d;
            }
        }
        let Some(v) = pivot else {
            return;
        };
        if pivot_deg == 0 {
            // Residual is edgeless.
            self.best = self.current.iter().copied().chain(ones(&cand)).collect();
            return;
        }
        let mut with_v: Vec<u64> = cand
            .iter()
            .zip(self.g.row(v))
            .map(|(c, r)| c & !r)
            .collect();
        clear_bit(&mut with_v, v);
        self.current.push(v);
        self.expand(with_v);
        self.current.pop();

        let mut without_v = cand;
        clear_bit(&mut without_v, v);
        self.expand(without_v);
    }
}

/// Exact maximum independent set by branch and bound.
///
/// Branches on a maximum-degree residual vertex (take it / drop it) and
/// prunes with a greedy clique cover of the residual. The incumbent starts
/// from [`greedy_mis`]. If the budget runs out the best set found so far is
/// returned with `budget_exhausted` set.
pub fn exact_mis(g: &BitGraph, budget: Budget) -> IndependenceResult {
    let start = Instant::now();
    let seed = greedy_mis(g);
    let mut bb = BranchAndBound {
        g,
        stride: g.stride(),
        budget,
        start,
        nodes: 0,
        exhausted: false,
        current: Vec::new(),
        best: seed.set,
        scratch: Vec::with_capacity(g.stride()),
    };
    bb.expand(full_set(g.vertex_count()));
    let exhausted = bb.exhausted;
    IndependenceResult::new(
        g,
        bb.best,
        Provenance::Exact,
        !exhausted,
        exhausted,
        start.elapsed(),
    )
}

/// Largest of the grid, greedy, and budgeted exact sets for `Π_p`.
///
/// Greedy and exact run on stored bit rows when they fit in the default
/// memory budget; greedy falls back to the implicit relation up to
/// [`IMPLICIT_GREEDY_CAP`] vertices. Ties go to exact, then greedy, then grid.
pub fn best_lower_bound(p: Prime, budget: Budget) -> IndependenceResult {
    let start = Instant::now();
    let rel = ParabolaRelation { p };
    let grid = IndependenceResult::new(
        &rel,
        tait_grid(p).ids(),
        Provenance::Grid,
        false,
        false,
        start.elapsed(),
    );
    let mut candidates = Vec::new();
    match ParabolaGraph::build_with_budget(p, DEFAULT_MEMORY_BUDGET) {
        Ok(g) => {
            candidates.push(exact_mis(g.bits(), budget));
            candidates.push(greedy_mis(g.bits()));
        }
        Err(_) if p.square() <= IMPLICIT_GREEDY_CAP => candidates.push(greedy_mis(&rel)),
        Err(_) => {}
    }
    candidates.push(grid);
    let best_size = candidates.iter().map(|r| r.size()).max().unwrap_or(0);
    let mut winner = candidates
        .into_iter()
        .find(|r| r.size() == best_size)
        .expect("grid candidate is always present");
    winner.elapsed = start.elapsed();
    winner
}
