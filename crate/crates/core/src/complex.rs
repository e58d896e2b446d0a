//! Triangle and edge index spaces and the bipartite triangle-edge incidence
//! graph over a candidate triangle set.
//!
//! Edges and triangles are stored with sorted city indices. Their dense
//! ranks use colex order, so a rank does not depend on the city count:
//! `rank({i<j}) = C(j,2) + i` and `rank({i<j<k}) = C(k,3) + C(j,2) + i`.
//! `Ord` on both types is lexicographic on the sorted indices.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::Instance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "[usize; 2]", try_from = "[usize; 2]")]
pub struct Edge {
    a: usize,
    b: usize,
}

impl Edge {
    pub fn new(i: usize, j: usize) -> Result<Self> {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => Ok(Edge { a: i, b: j }),
            std::cmp::Ordering::Greater => Ok(Edge { a: j, b: i }),
            std::cmp::Ordering::Equal => Err(Error::RepeatedCity(i)),
        }
    }

    /// Caller guarantees `i != j`.
    #[inline]
    pub(crate) fn of(i: usize, j: usize) -> Self {
        debug_assert_ne!(i, j);
        if i < j {
            Edge { a: i, b: j }
        } else {
            Edge { a: j, b: i }
        }
    }

    #[inline]
    pub fn cities(self) -> (usize, usize) {
        (self.a, self.b)
    }

    #[inline]
    pub fn contains(self, v: usize) -> bool {
        self.a == v || self.b == v
    }

    #[inline]
    pub fn rank(self) -> usize {
        self.b * (self.b - 1) / 2 + self.a
    }

    pub fn from_rank(rank: usize) -> Self {
        let mut b = 1;
        while (b + 1) * b / 2 <= rank {
            b += 1;
        }
        Edge { a: rank - b * (b - 1) / 2, b }
    }

    pub fn count(n: usize) -> usize {
        n * n.saturating_sub(1) / 2
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.a, self.b)
    }
}

impl From<Edge> for [usize; 2] {
    fn from(e: Edge) -> Self {
        [e.a, e.b]
    }
}

impl TryFrom<[usize; 2]> for Edge {
    type Error = Error;
    fn try_from([i, j]: [usize; 2]) -> Result<Self> {
        Edge::new(i, j)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "[usize; 3]", try_from = "[usize; 3]")]
pub struct Triangle {
    a: usize,
    b: usize,
    c: usize,
}

impl Triangle {
    pub fn new(i: usize, j: usize, k: usize) -> Result<Self> {
        let mut v = [i, j, k];
        v.sort_unstable();
        if v[0] == v[1] || v[1] == v[2] {
            return Err(Error::RepeatedCity(v[1]));
        }
        Ok(Triangle { a: v[0], b: v[1], c: v[2] })
    }

    #[inline]
    pub fn cities(self) -> [usize; 3] {
        [self.a, self.b, self.c]
    }

    #[inline]
    pub fn contains(self, v: usize) -> bool {
        self.a == v || self.b == v || self.c == v
    }

    /// The three edges `{a,b}, {a,c}, {b,c}`.
    #[inline]
    pub fn edges(self) -> [Edge; 3] {
        [Edge { a: self.a, b: self.b }, Edge { a: self.a, b: self.c }, Edge { a: self.b, b: self.c }]
    }

    /// The vertex not on `e`. Caller guarantees `e` is an edge of `self`.
    #[inline]
    pub fn opposite(self, e: Edge) -> usize {
        self.a + self.b + self.c - e.a - e.b
    }

    pub fn rank(self) -> usize {
        binom3(self.c) + self.b * (self.b - 1) / 2 + self.a
    }

    pub fn count(n: usize) -> usize {
        binom3(n)
    }

    pub fn perimeter(self, inst: &Instance) -> i64 {
        inst.length(self.a, self.b) + inst.length(self.a, self.c) + inst.length(self.b, self.c)
    }
}

/// The three edges of `t`, canonically ordered.
pub fn triangle_edges(t: Triangle) -> [Edge; 3] {
    t.edges()
}

fn binom3(k: usize) -> usize {
    if k < 3 {
        0
    } else {
        k * (k - 1) * (k - 2) / 6
    }
}

impl fmt::Display for Triangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

impl From<Triangle> for [usize; 3] {
    fn from(t: Triangle) -> Self {
        t.cities()
    }
}

impl TryFrom<[usize; 3]> for Triangle {
    type Error = Error;
    fn try_from([i, j, k]: [usize; 3]) -> Result<Self> {
        Triangle::new(i, j, k)
    }
}

/// A candidate triangle set together with its incidence structure.
///
/// Candidates are addressed by a local index into [`Complex::triangles`]
/// (sorted ascending). `tris_on_edge` and `group` return local indices.
#[derive(Debug, Clone)]
pub struct Complex {
    n: usize,
    triangles: Vec<Triangle>,
    index: HashMap<Triangle, usize>,
    edge_tris: Vec<Vec<usize>>,
    groups: Vec<Vec<usize>>,
    edges: Vec<Edge>,
}

impl Complex {
    /// All `C(n,3)` triangles.
    pub fn full(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooFewCities(n));
        }
        let mut tris = Vec::with_capacity(Triangle::count(n));
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    tris.push(Triangle { a: i, b: j, c: k });
                }
            }
        }
        Ok(Self::build(n, tris))
    }

    /// The given candidates, deduplicated.
    pub fn restricted(n: usize, triangles: &[Triangle]) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooFewCities(n));
        }
        for t in triangles {
            if t.c >= n {
                return Err(Error::CityOutOfRange { city: t.c, n });
            }
        }
        let mut tris = triangles.to_vec();
        tris.sort_unstable();
        tris.dedup();
        Ok(Self::build(n, tris))
    }

    fn build(n: usize, triangles: Vec<Triangle>) -> Self {
        let mut edge_tris = vec![Vec::new(); Edge::count(n)];
        let mut groups = vec![Vec::new(); n];
        let mut index = HashMap::with_capacity(triangles.len());
        for (ti, t) in triangles.iter().enumerate() {
            index.insert(*t, ti);
            for e in t.edges() {
                edge_tris[e.rank()].push(ti);
            }
            for v in t.cities() {
                groups[v].push(ti);
            }
        }
        let mut edges: Vec<Edge> =
            (0..edge_tris.len()).filter(|&r| !edge_tris[r].is_empty()).map(Edge::from_rank).collect();
        edges.sort_unstable();
        Complex { n, triangles, index, edge_tris, groups, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn index_of(&self, t: Triangle) -> Option<usize> {
        self.index.get(&t).copied()
    }

    pub fn contains(&self, t: Triangle) -> bool {
        self.index.contains_key(&t)
    }

    /// Edges incident to at least one candidate, sorted.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Local indices of the candidates containing `e`.
    pub fn tris_on_edge(&self, e: Edge) -> &[usize] {
        self.edge_tris.get(e.rank()).map_or(&[], Vec::as_slice)
    }

    /// The group `U(v)`: local indices of the candidates containing `v`.
    pub fn group(&self, v: usize) -> &[usize] {
        &self.groups[v]
    }

    pub fn incidence_count(&self) -> usize {
        3 * self.triangles.len()
    }
}

pub fn full_complex(n: usize) -> Result<Complex> {
    Complex::full(n)
}

pub fn restricted_complex(n: usize, triangles: &[Triangle]) -> Result<Complex> {
    Complex::restricted(n, triangles)
}

fn orient(a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> i128 {
    let (ax, ay) = (a.0 as i128, a.1 as i128);
    (b.0 as i128 - ax) * (c.1 as i128 - ay) - (b.1 as i128 - ay) * (c.0 as i128 - ax)
}

/// Positive when `d` lies strictly inside the circle through `a, b, c`
/// given counter-clockwise `a, b, c`.
fn incircle(a: (i64, i64), b: (i64, i64), c: (i64, i64), d: (i64, i64)) -> i128 {
    let row = |p: (i64, i64)| {
        let x = (p.0 - d.0) as i128;
        let y = (p.1 - d.1) as i128;
        (x, y, x * x + y * y)
    };
    let (ax, ay, al) = row(a);
    let (bx, by, bl) = row(b);
    let (cx, cy, cl) = row(c);
    ax * (by * cl - bl * cy) - ay * (bx * cl - bl * cx) + al * (bx * cy - by * cx)
}

/// Delaunay triangles by the brute-force empty-circumcircle test.
///
/// A triangle whose circumcircle is empty in its interior but passes
/// through a fourth input point makes the triangulation ambiguous; that
/// case is returned as [`Error::Cocircular`].
pub fn delaunay_candidates(inst: &Instance) -> Result<Vec<Triangle>> {
    let pts = inst.coords().ok_or(Error::MissingCoordinates)?;
    let n = pts.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let o = orient(pts[i], pts[j], pts[k]);
                if o == 0 {
                    continue;
                }
                let sign = o.signum();
                let mut inside = false;
                let mut on_circle = None;
                for d in 0..n {
                    if d == i || d == j || d == k {
                        continue;
                    }
                    let s = incircle(pts[i], pts[j], pts[k], pts[d]) * sign;
                    if s > 0 {
                        inside = true;
                        break;
                    }
                    if s == 0 && on_circle.is_none() {
                        on_circle = Some(d);
                    }
                }
                if inside {
                    continue;
                }
                if let Some(d) = on_circle {
                    return Err(Error::Cocircular { points: [i, j, k, d] });
                }
                out.push(Triangle { a: i, b: j, c: k });
            }
        }
    }
    Ok(out)
}

/// Candidate list file: one `i j k` triple per line, 0-based. Blank lines
/// and `#` comments are skipped.
pub fn parse_candidates(text: &str) -> Result<Vec<Triangle>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line: lineno + 1, msg };
        let toks: Vec<usize> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| err(format!("bad city index '{t}'"))))
            .collect::<Result<_>>()?;
        let [i, j, k] = toks[..] else {
            return Err(err(format!("expected 3 indices, got {}", toks.len())));
        };
        out.push(Triangle::new(i, j, k).map_err(|e| err(e.to_string()))?);
    }
    Ok(out)
}

pub fn write_candidates(triangles: &[Triangle]) -> String {
    triangles.iter().map(|t| format!("{} {} {}\n", t.a, t.b, t.c)).collect()
}
