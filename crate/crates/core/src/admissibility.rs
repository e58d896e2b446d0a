//! Triangle selections over a complex, the admissibility constraints C1-C5,
//! boundary extraction and tour decoding.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::complex::{Complex, Edge, Triangle};
use crate::encode::Tour;
use crate::error::{Error, Result};

/// An assignment `(x, y, z)`: selected triangles, selected edges and
/// selected triangle-edge incidences. Need not be canonical.
#[derive(Debug, Clone)]
pub struct Selection<'c> {
    complex: &'c Complex,
    triangles: BTreeSet<Triangle>,
    edges: BTreeSet<Edge>,
    incidences: BTreeSet<(Triangle, Edge)>,
}

impl PartialEq for Selection<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.triangles == other.triangles && self.edges == other.edges && self.incidences == other.incidences
    }
}

impl<'c> Selection<'c> {
    /// Arbitrary assignment. Every selected triangle must be a candidate,
    /// every selected edge an edge of some candidate, and every incidence
    /// a structural `(t, e)` pair with `e` an edge of candidate `t`.
    pub fn from_parts(
        complex: &'c Complex,
        triangles: impl IntoIterator<Item = Triangle>,
        edges: impl IntoIterator<Item = Edge>,
        incidences: impl IntoIterator<Item = (Triangle, Edge)>,
    ) -> Result<Self> {
        let triangles: BTreeSet<Triangle> = triangles.into_iter().collect();
        let edges: BTreeSet<Edge> = edges.into_iter().collect();
        let incidences: BTreeSet<(Triangle, Edge)> = incidences.into_iter().collect();
        if let Some(&t) = triangles.iter().find(|&&t| !complex.contains(t)) {
            return Err(Error::NotCandidate(t));
        }
        if let Some(&e) = edges.iter().find(|&&e| complex.tris_on_edge(e).is_empty()) {
            return Err(Error::NotComplexEdge(e));
        }
        if let Some(&(t, e)) = incidences.iter().find(|&&(t, e)| !complex.contains(t) || !t.edges().contains(&e)) {
            return Err(Error::NotIncidence(t, e));
        }
        Ok(Selection { complex, triangles, edges, incidences })
    }

    pub fn complex(&self) -> &'c Complex {
        self.complex
    }

    pub fn n(&self) -> usize {
        self.complex.n()
    }

    /// The selected triangle set `K`.
    pub fn triangles(&self) -> &BTreeSet<Triangle> {
        &self.triangles
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn incidences(&self) -> &BTreeSet<(Triangle, Edge)> {
        &self.incidences
    }

    /// True when `(y, z)` is exactly what `K` induces.
    pub fn is_canonical(&self) -> bool {
        induce_selection(self.complex, self.triangles.iter().copied()).is_ok_and(|c| c == *self)
    }

    /// Number of selected incidences on each edge that has any.
    pub fn incidence_counts(&self) -> BTreeMap<Edge, usize> {
        let mut counts = BTreeMap::new();
        for &(_, e) in &self.incidences {
            *counts.entry(e).or_insert(0) += 1;
        }
        counts
    }

    /// Node and arc counts of the active subgraph `B'`.
    pub fn b_prime_size(&self) -> (usize, usize) {
        (self.triangles.len() + self.edges.len(), self.incidences.len())
    }
}

/// The canonical selection of `K`: every incidence of a selected triangle
/// and every edge it touches.
pub fn induce_selection<'c>(complex: &'c Complex, k: impl IntoIterator<Item = Triangle>) -> Result<Selection<'c>> {
    let mut sel =
        Selection { complex, triangles: BTreeSet::new(), edges: BTreeSet::new(), incidences: BTreeSet::new() };
    for t in k {
        if !complex.contains(t) {
            return Err(Error::NotCandidate(t));
        }
        sel.triangles.insert(t);
        for e in t.edges() {
            sel.edges.insert(e);
            sel.incidences.insert((t, e));
        }
    }
    Ok(sel)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Constraint {
    C1,
    C2,
    C3a,
    C3b,
    C4,
    C5,
}

impl Constraint {
    pub const ALL: [Constraint; 6] =
        [Constraint::C1, Constraint::C2, Constraint::C3a, Constraint::C3b, Constraint::C4, Constraint::C5];
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub triangles: Vec<Triangle>,
    pub edges: Vec<Edge>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    Triangle(Triangle),
    Incidence(Triangle, Edge),
    Edge {
        edge: Edge,
        incidences: usize,
    },
    Count {
        expected: usize,
        actual: usize,
    },
    /// The connected components of a disconnected `B'`.
    Components(Vec<Component>),
    /// An arc that closes a cycle in `B'`.
    Cycle(Triangle, Edge),
    Vertex {
        city: usize,
        chi: i64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub constraint: Constraint,
    pub witness: Witness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub admissible: bool,
    pub violations: Vec<Violation>,
}

impl Verdict {
    pub fn violates(&self, c: Constraint) -> bool {
        self.violations.iter().any(|v| v.constraint == c)
    }

    pub fn violated(&self) -> BTreeSet<Constraint> {
        self.violations.iter().map(|v| v.constraint).collect()
    }
}

/// Evaluates C1-C5 and reports every violation.
///
/// C1 and C2 are checked literally on `(x, y, z)`; C4 treats an empty `B'`
/// as vacuously a tree. The C5 arc count of `H_v` is the number of
/// selected incidences `(t, e)` with `v` on `e`.
pub fn check_admissible(sel: &Selection) -> Verdict {
    let n = sel.n();
    let mut violations = Vec::new();
    let mut push = |constraint, witness| violations.push(Violation { constraint, witness });

    // C1: z <= x, z <= y, sum_e z = 3x
    let mut per_triangle: BTreeMap<Triangle, usize> = sel.triangles.iter().map(|&t| (t, 0)).collect();
    for &(t, e) in &sel.incidences {
        if !sel.triangles.contains(&t) || !sel.edges.contains(&e) {
            push(Constraint::C1, Witness::Incidence(t, e));
        }
        *per_triangle.entry(t).or_insert(0) += 1;
    }
    for (&t, &count) in &per_triangle {
        let expected = if sel.triangles.contains(&t) { 3 } else { 0 };
        if count != expected {
            push(Constraint::C1, Witness::Triangle(t));
        }
    }

    // C2: y <= sum_t z <= 2y
    let counts = sel.incidence_counts();
    let touched: BTreeSet<Edge> = sel.edges.iter().chain(counts.keys()).copied().collect();
    for e in touched {
        let s = counts.get(&e).copied().unwrap_or(0);
        let y = usize::from(sel.edges.contains(&e));
        if s < y || s > 2 * y {
            push(Constraint::C2, Witness::Edge { edge: e, incidences: s });
        }
    }

    // C3
    if sel.triangles.len() != n - 2 {
        push(Constraint::C3a, Witness::Count { expected: n - 2, actual: sel.triangles.len() });
    }
    if sel.edges.len() != 2 * n - 3 {
        push(Constraint::C3b, Witness::Count { expected: 2 * n - 3, actual: sel.edges.len() });
    }

    // C4
    let forest = b_prime_components(sel);
    if forest.components.len() > 1 {
        push(Constraint::C4, Witness::Components(forest.components.clone()));
    }
    if let Some((t, e)) = forest.cycle_arc {
        push(Constraint::C4, Witness::Cycle(t, e));
    }
    debug_assert_eq!(
        forest.components.len() <= 1 && forest.cycle_arc.is_none(),
        forest.nodes == 0 || (forest.components.len() == 1 && forest.arcs + 1 == forest.nodes)
    );

    // C5
    for v in 0..n {
        let chi = star_euler(sel, v);
        if chi != 1 {
            push(Constraint::C5, Witness::Vertex { city: v, chi });
        }
    }

    Verdict { admissible: violations.is_empty(), violations }
}

pub(crate) struct BPrimeForest {
    pub nodes: usize,
    pub arcs: usize,
    pub components: Vec<Component>,
    pub cycle_arc: Option<(Triangle, Edge)>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// False when already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Components of `B'` (nodes `K ∪ y`, arcs `z` with both ends present) by
/// union-find, plus the first arc found closing a cycle.
pub(crate) fn b_prime_components(sel: &Selection) -> BPrimeForest {
    let tris: Vec<Triangle> = sel.triangles.iter().copied().collect();
    let edges: Vec<Edge> = sel.edges.iter().copied().collect();
    let t_idx = |t: &Triangle| tris.binary_search(t).ok();
    let e_idx = |e: &Edge| edges.binary_search(e).ok().map(|i| i + tris.len());
    let nodes = tris.len() + edges.len();
    let mut uf = UnionFind::new(nodes);
    let mut arcs = 0;
    let mut cycle_arc = None;
    for (t, e) in &sel.incidences {
        let (Some(a), Some(b)) = (t_idx(t), e_idx(e)) else { continue };
        arcs += 1;
        if !uf.union(a, b) && cycle_arc.is_none() {
            cycle_arc = Some((*t, *e));
        }
    }
    let mut by_root: BTreeMap<usize, Component> = BTreeMap::new();
    for (i, &t) in tris.iter().enumerate() {
        let r = uf.find(i);
        by_root.entry(r).or_insert_with(|| Component { triangles: vec![], edges: vec![] }).triangles.push(t);
    }
    for (i, &e) in edges.iter().enumerate() {
        let r = uf.find(i + tris.len());
        by_root.entry(r).or_insert_with(|| Component { triangles: vec![], edges: vec![] }).edges.push(e);
    }
    BPrimeForest { nodes, arcs, components: by_root.into_values().collect(), cycle_arc }
}

fn star_euler(sel: &Selection, v: usize) -> i64 {
    let nodes =
        sel.triangles.iter().filter(|t| t.contains(v)).count() + sel.edges.iter().filter(|e| e.contains(v)).count();
    let arcs = sel.incidences.iter().filter(|(_, e)| e.contains(v)).count();
    nodes as i64 - arcs as i64
}

/// `χ(H_v) = |V(H_v)| - |E(H_v)|` for the star of city `v`.
pub fn vertex_star_euler(sel: &Selection, v: usize) -> Result<i64> {
    if v >= sel.n() {
        return Err(Error::CityOutOfRange { city: v, n: sel.n() });
    }
    Ok(star_euler(sel, v))
}

/// Selected edges carrying exactly one selected incidence.
pub fn boundary(sel: &Selection) -> BTreeSet<Edge> {
    sel.incidence_counts().into_iter().filter(|&(e, c)| c == 1 && sel.edges.contains(&e)).map(|(e, _)| e).collect()
}

/// Walks the boundary into a canonical tour. Fails unless the boundary is
/// a single simple cycle through every city.
pub fn decode_tour(sel: &Selection) -> Result<Tour> {
    let n = sel.n();
    let bd = boundary(sel);
    if bd.len() != n {
        return Err(Error::NotHamiltonian(format!("{} boundary edges for {n} cities", bd.len())));
    }
    let mut adj = vec![Vec::with_capacity(2); n];
    for e in &bd {
        let (a, b) = e.cities();
        adj[a].push(b);
        adj[b].push(a);
    }
    if let Some(v) = (0..n).find(|&v| adj[v].len() != 2) {
        return Err(Error::NotHamiltonian(format!("city {v} has boundary degree {}", adj[v].len())));
    }
    let mut order = Vec::with_capacity(n);
    let (mut prev, mut cur) = (usize::MAX, 0);
    loop {
        order.push(cur);
        let next = if adj[cur][0] != prev { adj[cur][0] } else { adj[cur][1] };
        prev = cur;
        cur = next;
        if cur == 0 {
            break;
        }
        if order.len() == n {
            return Err(Error::NotHamiltonian("boundary walk does not close".into()));
        }
    }
    if order.len() != n {
        return Err(Error::NotHamiltonian(format!("boundary cycle through 0 has {} of {n} cities", order.len())));
    }
    Ok(Tour::new(order)?.canonical())
}

/// On-disk selection: `{"K": [[i,j,k],...], "canonical": true}`. When
/// `canonical` is false the explicit `edges` and `incidences` are used.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectionFile {
    #[serde(rename = "K")]
    pub triangles: Vec<Triangle>,
    pub canonical: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<Edge>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub incidences: Option<Vec<(Triangle, Edge)>>,
}

impl SelectionFile {
    pub fn from_selection(sel: &Selection) -> Self {
        let triangles = sel.triangles.iter().copied().collect();
        if sel.is_canonical() {
            SelectionFile { triangles, canonical: true, edges: None, incidences: None }
        } else {
            SelectionFile {
                triangles,
                canonical: false,
                edges: Some(sel.edges.iter().copied().collect()),
                incidences: Some(sel.incidences.iter().copied().collect()),
            }
        }
    }

    pub fn to_selection<'c>(&self, complex: &'c Complex) -> Result<Selection<'c>> {
        if self.canonical {
            induce_selection(complex, self.triangles.iter().copied())
        } else {
            Selection::from_parts(
                complex,
                self.triangles.iter().copied(),
                self.edges.iter().flatten().copied(),
                self.incidences.iter().flatten().copied(),
            )
        }
    }
}
