//! Exact maximization of the net weight over admissible triangle sets.
//!
//! The search fixes the first triangle of `K` in branch order (ascending
//! perimeter), then grows `K` one edge-adjacent triangle at a time,
//! branching on include/exclude of the first frontier triangle. Every
//! admissible set is reached exactly once this way:
//!
//! * its incidence graph is a tree, so it can be grown from any of its
//!   triangles through shared edges, and
//! * a triangle glued to a partial disk along one boundary edge must bring
//!   a city not yet covered; otherwise the fan around that city would not
//!   be a path.
//!
//! The partial state is therefore always a disk whose boundary is a cycle
//! through the covered cities, and any completion only subdivides edges of
//! that cycle. This makes the per-city two-cheapest-edges bound sharper as
//! the disk grows.

mod oracle;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use oracle::{tsp_oracle_bruteforce, tsp_oracle_held_karp, BRUTEFORCE_MAX_N, HELD_KARP_MAX_N};

use crate::admissibility::{check_admissible, decode_tour, induce_selection, Constraint};
use crate::complex::{Complex, Edge, Triangle};
use crate::encode::Tour;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::objective::net_weight;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveOptions {
    /// Prune with the boundary-length lower bound.
    pub use_bound: bool,
    /// Stop after this many search nodes.
    pub node_limit: Option<u64>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { use_bound: true, node_limit: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    NodeLimitReached,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveReport {
    pub status: SolveStatus,
    #[serde(rename = "best_K")]
    pub best_k: Vec<Triangle>,
    pub best_tour: Option<Tour>,
    /// `W(B')` of the best selection.
    pub objective: Option<i64>,
    pub tour_length: Option<i64>,
    pub nodes_explored: u64,
    /// Subtrees cut, keyed by the constraint (or `bound`) that cut them.
    pub prunes: BTreeMap<String, u64>,
}

const BOUND: usize = 6;

fn slot(c: Constraint) -> usize {
    Constraint::ALL.iter().position(|&x| x == c).unwrap()
}

/// Maximizes `W(B')` over canonical selections `K ⊆ candidates` that pass
/// C1-C5. Among optimal sets the lexicographically smallest sorted `K` wins.
pub fn solve_exact(inst: &Instance, complex: &Complex, opts: SolveOptions) -> Result<SolveReport> {
    let n = inst.n();
    if complex.n() != n {
        return Err(Error::SizeMismatch { complex: complex.n(), instance: n });
    }
    if opts.node_limit == Some(0) {
        return Err(Error::UnsupportedSize { what: "node limit", n: 0, min: 1, max: usize::MAX });
    }
    let mut search = Search::new(inst, complex, opts);
    search.run();

    let mut prunes: BTreeMap<String, u64> =
        Constraint::ALL.iter().map(|c| (c.to_string(), search.prunes[slot(*c)])).collect();
    prunes.insert("bound".into(), search.prunes[BOUND]);

    let Some((length, best_k)) = search.best else {
        let status = if search.stopped { SolveStatus::NodeLimitReached } else { SolveStatus::Infeasible };
        return Ok(SolveReport {
            status,
            best_k: vec![],
            best_tour: None,
            objective: None,
            tour_length: None,
            nodes_explored: search.nodes,
            prunes,
        });
    };
    let sel = induce_selection(complex, best_k.iter().copied())?;
    let tour = decode_tour(&sel)?;
    let objective = net_weight(&sel, inst)?.net;
    debug_assert_eq!(objective, -length);
    Ok(SolveReport {
        status: if search.stopped { SolveStatus::NodeLimitReached } else { SolveStatus::Optimal },
        best_k,
        best_tour: Some(tour),
        objective: Some(objective),
        tour_length: Some(length),
        nodes_explored: search.nodes,
        prunes,
    })
}

struct Search<'a> {
    inst: &'a Instance,
    complex: &'a Complex,
    opts: SolveOptions,
    n: usize,
    /// Branch position of each local triangle index.
    pos: Vec<usize>,
    order: Vec<usize>,
    root_pos: usize,
    in_k: Vec<bool>,
    excluded: Vec<bool>,
    covered: Vec<bool>,
    /// Boundary cycle of the partial disk over covered cities.
    succ: Vec<usize>,
    pred: Vec<usize>,
    k: Vec<usize>,
    /// Per edge rank: non-excluded candidates at or after the root position.
    avail: Vec<u32>,
    best: Option<(i64, Vec<Triangle>)>,
    nodes: u64,
    prunes: [u64; 7],
    stopped: bool,
}

impl<'a> Search<'a> {
    fn new(inst: &'a Instance, complex: &'a Complex, opts: SolveOptions) -> Self {
        let n = inst.n();
        let tris = complex.triangles();
        let mut order: Vec<usize> = (0..tris.len()).collect();
        order.sort_by_key(|&i| (tris[i].perimeter(inst), tris[i]));
        let mut pos = vec![0; tris.len()];
        for (p, &i) in order.iter().enumerate() {
            pos[i] = p;
        }
        Search {
            inst,
            complex,
            opts,
            n,
            pos,
            order,
            root_pos: 0,
            in_k: vec![false; tris.len()],
            excluded: vec![false; tris.len()],
            covered: vec![false; n],
            succ: vec![usize::MAX; n],
            pred: vec![usize::MAX; n],
            k: Vec::with_capacity(n),
            avail: vec![0; Edge::count(n)],
            best: None,
            nodes: 0,
            prunes: [0; 7],
            stopped: false,
        }
    }

    fn run(&mut self) {
        let m = self.order.len();
        let need = self.n - 2;
        for root_pos in 0..m {
            if self.stopped {
                return;
            }
            if m - root_pos < need {
                self.prunes[slot(Constraint::C3a)] += 1;
                return;
            }
            self.root_pos = root_pos;
            self.avail.iter_mut().for_each(|a| *a = 0);
            for &ti in &self.order[root_pos..] {
                for e in self.complex.triangles()[ti].edges() {
                    self.avail[e.rank()] += 1;
                }
            }
            let root = self.order[root_pos];
            let [a, b, c] = self.complex.triangles()[root].cities();
            self.in_k[root] = true;
            self.k.push(root);
            for (v, s) in [(a, b), (b, c), (c, a)] {
                self.covered[v] = true;
                self.succ[v] = s;
                self.pred[s] = v;
            }
            self.dfs();
            self.k.pop();
            self.in_k[root] = false;
            for v in [a, b, c] {
                self.covered[v] = false;
            }
        }
        if m < need {
            self.prunes[slot(Constraint::C3a)] += 1;
        }
    }

    fn dfs(&mut self) {
        if self.stopped {
            return;
        }
        if self.opts.node_limit.is_some_and(|limit| self.nodes >= limit) {
            self.stopped = true;
            return;
        }
        self.nodes += 1;
        if self.k.len() == self.n - 2 {
            self.leaf();
            return;
        }
        if !self.viable() {
            return;
        }
        let Some((ti, a, b, x)) = self.next_frontier() else {
            self.prunes[slot(Constraint::C4)] += 1;
            return;
        };

        // include
        self.in_k[ti] = true;
        self.k.push(ti);
        self.covered[x] = true;
        self.succ[a] = x;
        self.pred[x] = a;
        self.succ[x] = b;
        self.pred[b] = x;
        self.dfs();
        self.succ[a] = b;
        self.pred[b] = a;
        self.covered[x] = false;
        self.k.pop();
        self.in_k[ti] = false;

        // exclude
        self.excluded[ti] = true;
        for e in self.complex.triangles()[ti].edges() {
            self.avail[e.rank()] -= 1;
        }
        self.dfs();
        for e in self.complex.triangles()[ti].edges() {
            self.avail[e.rank()] += 1;
        }
        self.excluded[ti] = false;
    }

    /// Earliest triangle in branch order that glues a new city onto a
    /// boundary edge `a -> b`. Returns `(triangle, a, b, new city)`.
    fn next_frontier(&self) -> Option<(usize, usize, usize, usize)> {
        let tris = self.complex.triangles();
        let mut best: Option<(usize, usize, usize, usize)> = None;
        for a in 0..self.n {
            if !self.covered[a] {
                continue;
            }
            let b = self.succ[a];
            let e = Edge::of(a, b);
            for &ti in self.complex.tris_on_edge(e) {
                if self.excluded[ti] || self.in_k[ti] || self.pos[ti] < self.root_pos {
                    continue;
                }
                let x = tris[ti].opposite(e);
                if self.covered[x] {
                    continue;
                }
                if best.is_none_or(|(bt, ..)| self.pos[ti] < self.pos[bt]) {
                    best = Some((ti, a, b, x));
                }
            }
        }
        best
    }

    #[inline]
    fn usable(&self, u: usize, v: usize) -> bool {
        self.avail[Edge::of(u, v).rank()] > 0
    }

    /// Coverage check for every uncovered city, then the lower bound.
    fn viable(&mut self) -> bool {
        let n = self.n;
        let inst = self.inst;
        let mut sum = 0i64;
        for r in 0..n {
            if self.covered[r] {
                continue;
            }
            let (mut m1, mut m2) = (i64::MAX, i64::MAX);
            for x in 0..n {
                if x != r && self.usable(r, x) {
                    let l = inst.length(r, x);
                    if l < m1 {
                        m2 = m1;
                        m1 = l;
                    } else if l < m2 {
                        m2 = l;
                    }
                }
            }
            if m2 == i64::MAX {
                // the group of r can no longer be reached by a tour through r
                self.prunes[slot(Constraint::C5)] += 1;
                return false;
            }
            sum += m1 + m2;
        }
        let Some((best_len, _)) = &self.best else { return true };
        if !self.opts.use_bound {
            return true;
        }
        for u in 0..n {
            if !self.covered[u] {
                continue;
            }
            let mut m1 = inst.length(u, self.succ[u]);
            let mut m2 = inst.length(u, self.pred[u]);
            if m2 < m1 {
                std::mem::swap(&mut m1, &mut m2);
            }
            for r in 0..n {
                if !self.covered[r] && self.usable(u, r) {
                    let l = inst.length(u, r);
                    if l < m1 {
                        m2 = m1;
                        m1 = l;
                    } else if l < m2 {
                        m2 = l;
                    }
                }
            }
            sum += m1 + m2;
        }
        // strict: equal-length completions may still win the tie-break
        if (sum + 1) / 2 > *best_len {
            self.prunes[BOUND] += 1;
            return false;
        }
        true
    }

    fn leaf(&mut self) {
        let length: i64 = (0..self.n).map(|v| self.inst.length(v, self.succ[v])).sum();
        if let Some((best_len, _)) = &self.best {
            if self.opts.use_bound && length > *best_len {
                self.prunes[BOUND] += 1;
                return;
            }
        }
        let tris = self.complex.triangles();
        let mut k: Vec<Triangle> = self.k.iter().map(|&i| tris[i]).collect();
        k.sort_unstable();
        let sel = induce_selection(self.complex, k.iter().copied()).expect("search only selects candidates");
        let verdict = check_admissible(&sel);
        if !verdict.admissible {
            for c in verdict.violated() {
                self.prunes[slot(c)] += 1;
            }
            return;
        }
        let better = match &self.best {
            None => true,
            Some((bl, bk)) => length < *bl || (length == *bl && k < *bk),
        };
        if better {
            self.best = Some((length, k));
        }
    }
}
