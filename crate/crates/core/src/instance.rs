//! Symmetric TSP instances: integer edge lengths, optionally backed by
//! integer coordinates with TSPLIB `EUC_2D` rounding.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::Edge;
use crate::error::{Error, Result};

/// Largest accepted coordinate magnitude. Keeps squared distances inside
/// `i64` and the incircle determinant inside `i128`.
pub const MAX_COORD: i64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "InstanceJson", try_from = "InstanceJson")]
pub struct Instance {
    n: usize,
    lengths: Vec<i64>,
    coords: Option<Vec<(i64, i64)>>,
}

/// Nearest-integer Euclidean distance, computed exactly.
pub fn euc_2d(a: (i64, i64), b: (i64, i64)) -> i64 {
    let dx = (a.0 - b.0).unsigned_abs();
    let dy = (a.1 - b.1).unsigned_abs();
    let d2 = dx * dx + dy * dy;
    let r = isqrt(d2);
    // sqrt(d2) >= r + 1/2  <=>  d2 >= r^2 + r + 1/4  <=>  d2 - r^2 > r
    if d2 - r * r > r {
        (r + 1) as i64
    } else {
        r as i64
    }
}

fn isqrt(v: u64) -> u64 {
    let mut r = (v as f64).sqrt() as u64;
    while r * r > v {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= v {
        r += 1;
    }
    r
}

impl Instance {
    /// Builds an instance from a full symmetric matrix. The diagonal is ignored.
    pub fn from_matrix(matrix: &[Vec<i64>]) -> Result<Self> {
        let n = matrix.len();
        if n < 3 {
            return Err(Error::TooFewCities(n));
        }
        let mut lengths = vec![0; n * n];
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Tsplib(format!("matrix row {i} has {} entries, expected {n}", row.len())));
            }
            for j in 0..n {
                if i == j {
                    continue;
                }
                if matrix[i][j] != matrix[j][i] {
                    return Err(Error::Asymmetric { i: i.min(j), j: i.max(j) });
                }
                if row[j] <= 0 {
                    return Err(Error::NonPositiveLength { i: i.min(j), j: i.max(j), length: row[j] });
                }
                lengths[i * n + j] = row[j];
            }
        }
        Ok(Self { n, lengths, coords: None })
    }

    /// Builds an instance from the upper triangle, row-major, without the diagonal.
    pub fn from_upper(n: usize, upper: &[i64]) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooFewCities(n));
        }
        if upper.len() != n * (n - 1) / 2 {
            return Err(Error::Tsplib(format!(
                "upper triangle has {} entries, expected {}",
                upper.len(),
                n * (n - 1) / 2
            )));
        }
        let mut lengths = vec![0; n * n];
        let mut it = upper.iter();
        for i in 0..n {
            for j in i + 1..n {
                let l = *it.next().unwrap();
                if l <= 0 {
                    return Err(Error::NonPositiveLength { i, j, length: l });
                }
                lengths[i * n + j] = l;
                lengths[j * n + i] = l;
            }
        }
        Ok(Self { n, lengths, coords: None })
    }

    pub fn from_coords(coords: Vec<(i64, i64)>) -> Result<Self> {
        let n = coords.len();
        if n < 3 {
            return Err(Error::TooFewCities(n));
        }
        for &(x, y) in &coords {
            for c in [x, y] {
                if c.abs() > MAX_COORD {
                    return Err(Error::CoordinateRange(c));
                }
            }
        }
        let mut lengths = vec![0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let l = euc_2d(coords[i], coords[j]);
                if l <= 0 {
                    return Err(Error::NonPositiveLength { i, j, length: l });
                }
                lengths[i * n + j] = l;
                lengths[j * n + i] = l;
            }
        }
        Ok(Self { n, lengths, coords: Some(coords) })
    }

    /// `n` distinct integer points drawn uniformly from `[0, coord_range]^2`.
    /// Deterministic in `seed` across platforms.
    pub fn random_euclidean(n: usize, seed: u64, coord_range: i64) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooFewCities(n));
        }
        if coord_range < n as i64 || coord_range > MAX_COORD {
            return Err(Error::CoordinateRange(coord_range));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut seen = BTreeSet::new();
        let mut coords = Vec::with_capacity(n);
        while coords.len() < n {
            let p = (rng.gen_range(0..=coord_range), rng.gen_range(0..=coord_range));
            if seen.insert(p) {
                coords.push(p);
            }
        }
        // distinct integer points are at least 1 apart, so no length rounds to 0
        Self::from_coords(coords)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> Option<&[(i64, i64)]> {
        self.coords.as_deref()
    }

    /// Length between two distinct cities. Panics on out-of-range indices.
    #[inline]
    pub fn length(&self, i: usize, j: usize) -> i64 {
        self.lengths[i * self.n + j]
    }

    pub fn edge_length(&self, e: Edge) -> Result<i64> {
        let (i, j) = e.cities();
        if j >= self.n {
            return Err(Error::CityOutOfRange { city: j, n: self.n });
        }
        Ok(self.length(i, j))
    }

    /// Upper triangle, row-major.
    pub fn upper(&self) -> Vec<i64> {
        let n = self.n;
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| self.length(i, j)).collect()
    }

    /// Returns a copy with every length multiplied by `factor`. Drops coordinates.
    pub fn scaled(&self, factor: i64) -> Result<Self> {
        let upper = self
            .upper()
            .into_iter()
            .map(|l| l.checked_mul(factor).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        Self::from_upper(self.n, &upper)
    }

    /// TSPLIB text: `EUC_2D` when coordinates are present, else `EXPLICIT`/`UPPER_ROW`.
    pub fn to_tsplib(&self, name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "NAME : {name}");
        let _ = writeln!(out, "TYPE : TSP");
        let _ = writeln!(out, "DIMENSION : {}", self.n);
        match &self.coords {
            Some(coords) => {
                let _ = writeln!(out, "EDGE_WEIGHT_TYPE : EUC_2D");
                let _ = writeln!(out, "NODE_COORD_SECTION");
                for (i, (x, y)) in coords.iter().enumerate() {
                    let _ = writeln!(out, "{} {x} {y}", i + 1);
                }
            }
            None => {
                let _ = writeln!(out, "EDGE_WEIGHT_TYPE : EXPLICIT");
                let _ = writeln!(out, "EDGE_WEIGHT_FORMAT : UPPER_ROW");
                let _ = writeln!(out, "EDGE_WEIGHT_SECTION");
                for i in 0..self.n - 1 {
                    let row: Vec<String> = (i + 1..self.n).map(|j| self.length(i, j).to_string()).collect();
                    let _ = writeln!(out, "{}", row.join(" "));
                }
            }
        }
        out.push_str("EOF\n");
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum WeightFormat {
    FullMatrix,
    UpperRow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Coords,
    Weights,
    Skip,
}

/// Parses the TSPLIB subset: `TYPE: TSP` with `EUC_2D` or `EXPLICIT`
/// (`FULL_MATRIX` / `UPPER_ROW`) weights.
pub fn parse_tsplib(text: &str) -> Result<Instance> {
    let mut dimension: Option<usize> = None;
    let mut weight_type: Option<String> = None;
    let mut format: Option<WeightFormat> = None;
    let mut coords: Vec<Option<(i64, i64)>> = Vec::new();
    let mut weights: Vec<i64> = Vec::new();
    let mut section = Section::None;

    let err = |line: usize, msg: String| Error::Parse { line: line + 1, msg };

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line == "EOF" {
            break;
        }
        let first = line.split(|c: char| c == ':' || c.is_whitespace()).next().unwrap_or("");
        let is_keyword = first.chars().next().is_some_and(|c| c.is_ascii_alphabetic());
        if is_keyword {
            match first {
                "NODE_COORD_SECTION" => {
                    let n = dimension.ok_or_else(|| err(lineno, "DIMENSION must precede NODE_COORD_SECTION".into()))?;
                    coords = vec![None; n];
                    section = Section::Coords;
                    continue;
                }
                "EDGE_WEIGHT_SECTION" => {
                    section = Section::Weights;
                    continue;
                }
                "DISPLAY_DATA_SECTION" => {
                    section = Section::Skip;
                    continue;
                }
                _ => {}
            }
            section = Section::None;
            let (key, value) = match line.split_once(':') {
                Some((k, v)) => (k.trim(), v.trim()),
                None => return Err(err(lineno, format!("expected 'KEY : VALUE', got '{line}'"))),
            };
            match key {
                "NAME" | "COMMENT" | "NODE_COORD_TYPE" | "DISPLAY_DATA_TYPE" => {}
                "TYPE" => {
                    if value != "TSP" {
                        return Err(Error::Tsplib(format!("unsupported TYPE {value}")));
                    }
                }
                "DIMENSION" => {
                    let n: usize = value.parse().map_err(|_| err(lineno, format!("bad DIMENSION '{value}'")))?;
                    if n < 3 {
                        return Err(Error::TooFewCities(n));
                    }
                    dimension = Some(n);
                }
                "EDGE_WEIGHT_TYPE" => match value {
                    "EUC_2D" | "EXPLICIT" => weight_type = Some(value.to_string()),
                    other => return Err(Error::UnsupportedWeightType(other.to_string())),
                },
                "EDGE_WEIGHT_FORMAT" => {
                    format = Some(match value {
                        "FULL_MATRIX" => WeightFormat::FullMatrix,
                        "UPPER_ROW" => WeightFormat::UpperRow,
                        other => return Err(Error::UnsupportedWeightType(format!("EXPLICIT({other})"))),
                    })
                }
                other => return Err(err(lineno, format!("unknown keyword {other}"))),
            }
            continue;
        }
        match section {
            Section::Coords => {
                let toks: Vec<&str> = line.split_whitespace().collect();
                if toks.len() != 3 {
                    return Err(err(lineno, format!("expected 'id x y', got '{line}'")));
                }
                let id: usize = toks[0].parse().map_err(|_| err(lineno, format!("bad node id '{}'", toks[0])))?;
                if id == 0 || id > coords.len() {
                    return Err(err(lineno, format!("node id {id} out of range")));
                }
                let x = parse_integral(toks[1])
                    .ok_or_else(|| err(lineno, format!("non-integer coordinate '{}'", toks[1])))?;
                let y = parse_integral(toks[2])
                    .ok_or_else(|| err(lineno, format!("non-integer coordinate '{}'", toks[2])))?;
                if coords[id - 1].replace((x, y)).is_some() {
                    return Err(err(lineno, format!("duplicate node id {id}")));
                }
            }
            Section::Weights => {
                for tok in line.split_whitespace() {
                    weights.push(tok.parse().map_err(|_| err(lineno, format!("bad weight '{tok}'")))?);
                }
            }
            Section::Skip => {}
            Section::None => return Err(err(lineno, format!("data outside of a section: '{line}'"))),
        }
    }

    let n = dimension.ok_or_else(|| Error::Tsplib("missing DIMENSION".into()))?;
    match weight_type.as_deref() {
        Some("EUC_2D") => {
            let coords = coords
                .into_iter()
                .enumerate()
                .map(|(i, c)| c.ok_or_else(|| Error::Tsplib(format!("missing coordinates for node {}", i + 1))))
                .collect::<Result<Vec<_>>>()?;
            if coords.len() != n {
                return Err(Error::Tsplib("missing NODE_COORD_SECTION".into()));
            }
            Instance::from_coords(coords)
        }
        Some(_) => match format {
            Some(WeightFormat::FullMatrix) => {
                if weights.len() != n * n {
                    return Err(Error::Tsplib(format!("FULL_MATRIX needs {} weights, got {}", n * n, weights.len())));
                }
                let matrix: Vec<Vec<i64>> = weights.chunks(n).map(<[i64]>::to_vec).collect();
                Instance::from_matrix(&matrix)
            }
            Some(WeightFormat::UpperRow) => Instance::from_upper(n, &weights),
            None => Err(Error::Tsplib("EXPLICIT weights need EDGE_WEIGHT_FORMAT".into())),
        },
        None => Err(Error::Tsplib("missing EDGE_WEIGHT_TYPE".into())),
    }
}

fn parse_integral(tok: &str) -> Option<i64> {
    if let Ok(v) = tok.parse::<i64>() {
        return Some(v);
    }
    let f: f64 = tok.parse().ok()?;
    (f.fract() == 0.0 && f.abs() <= MAX_COORD as f64).then_some(f as i64)
}

#[derive(Serialize, Deserialize)]
struct InstanceJson {
    n: usize,
    coords: Option<Vec<[i64; 2]>>,
    lengths: Vec<i64>,
}

impl From<Instance> for InstanceJson {
    fn from(inst: Instance) -> Self {
        InstanceJson {
            n: inst.n,
            lengths: inst.upper(),
            coords: inst.coords.map(|c| c.into_iter().map(|(x, y)| [x, y]).collect()),
        }
    }
}

impl TryFrom<InstanceJson> for Instance {
    type Error = Error;

    fn try_from(j: InstanceJson) -> Result<Self> {
        let mut inst = Instance::from_upper(j.n, &j.lengths)?;
        if let Some(coords) = j.coords {
            let from_coords = Instance::from_coords(coords.into_iter().map(|[x, y]| (x, y)).collect())?;
            if from_coords.lengths != inst.lengths {
                return Err(Error::Json("lengths disagree with EUC_2D distances of coords".into()));
            }
            inst = from_coords;
        }
        Ok(inst)
    }
}
