//! Tours and the fan triangulation that turns any tour into an admissible
//! triangle selection whose boundary is that tour.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::admissibility::{induce_selection, Selection};
use crate::complex::{Complex, Edge, Triangle};
use crate::error::{Error, Result};

/// A Hamiltonian cycle as a cyclic sequence of all cities.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Tour(Vec<usize>);

impl Tour {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        if n < 3 {
            return Err(Error::InvalidTour(format!("a tour needs at least 3 cities, got {n}")));
        }
        let mut seen = vec![false; n];
        for &v in &order {
            if v >= n {
                return Err(Error::InvalidTour(format!("city {v} out of range for n={n}")));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidTour(format!("city {v} repeated")));
            }
        }
        Ok(Tour(order))
    }

    /// Like [`Tour::new`], additionally checking the city count.
    pub fn with_n(order: Vec<usize>, n: usize) -> Result<Self> {
        if order.len() != n {
            return Err(Error::InvalidTour(format!("expected {n} cities, got {}", order.len())));
        }
        Tour::new(order)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn order(&self) -> &[usize] {
        &self.0
    }

    /// Rotated to start at city 0, oriented so the smaller neighbour of 0 comes second.
    pub fn canonical(&self) -> Tour {
        let n = self.0.len();
        let start = self.0.iter().position(|&v| v == 0).unwrap();
        let mut out: Vec<usize> = (0..n).map(|i| self.0[(start + i) % n]).collect();
        if out[1] > out[n - 1] {
            out[1..].reverse();
        }
        Tour(out)
    }

    pub fn is_canonical(&self) -> bool {
        self.0[0] == 0 && self.0[1] < self.0[self.0.len() - 1]
    }

    /// Equality as cyclic sequences up to rotation and reflection.
    pub fn same_cycle(&self, other: &Tour) -> bool {
        self.n() == other.n() && self.canonical() == other.canonical()
    }

    /// Consecutive pairs including the closing edge.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        let n = self.0.len();
        (0..n).map(move |i| Edge::of(self.0[i], self.0[(i + 1) % n]))
    }
}

impl fmt::Display for Tour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for Tour {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let order = s
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::InvalidTour(format!("bad city index '{t}'"))))
            .collect::<Result<Vec<usize>>>()?;
        Tour::new(order)
    }
}

impl TryFrom<Vec<usize>> for Tour {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Tour::new(v)
    }
}

impl From<Tour> for Vec<usize> {
    fn from(t: Tour) -> Self {
        t.0
    }
}

/// The `n - 2` fan triangles `{v1, v_i, v_{i+1}}` with `v1` the city at
/// `apex_position` of the tour.
pub fn fan_triangles(tour: &Tour, apex_position: usize) -> Vec<Triangle> {
    let n = tour.n();
    let at = |i: usize| tour.0[(apex_position + i) % n];
    (1..n - 1).map(|i| Triangle::new(at(0), at(i), at(i + 1)).expect("tour cities are distinct")).collect()
}

/// First apex position (in tour order) whose fan lies inside the candidate set.
pub fn contained_fan_apex(tour: &Tour, complex: &Complex) -> Option<usize> {
    if tour.n() != complex.n() {
        return None;
    }
    (0..tour.n()).find(|&a| fan_triangles(tour, a).iter().all(|&t| complex.contains(t)))
}

/// Fan triangulation of `tour` from the city at `apex_position`.
///
/// When that fan is not fully inside a restricted complex every other apex
/// is tried in tour order; the error lists the triangles missing for the
/// requested apex.
pub fn fan_encode<'c>(tour: &Tour, apex_position: usize, complex: &'c Complex) -> Result<Selection<'c>> {
    let n = tour.n();
    if n != complex.n() {
        return Err(Error::SizeMismatch { complex: complex.n(), instance: n });
    }
    if apex_position >= n {
        return Err(Error::InvalidTour(format!("apex position {apex_position} out of range for n={n}")));
    }
    let requested = fan_triangles(tour, apex_position);
    let missing: Vec<Triangle> = requested.iter().copied().filter(|&t| !complex.contains(t)).collect();
    if missing.is_empty() {
        return induce_selection(complex, requested);
    }
    for step in 1..n {
        let fan = fan_triangles(tour, (apex_position + step) % n);
        if fan.iter().all(|&t| complex.contains(t)) {
            return induce_selection(complex, fan);
        }
    }
    Err(Error::FanNotContained(missing))
}
