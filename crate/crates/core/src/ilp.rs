//! The 0/1 program over `(x, y, z)` in CPLEX LP text form, a row evaluator,
//! and validation of externally solved assignments.
//!
//! C1, C2, C3 and C5 are emitted as linear rows. C5 uses the linear form
//! `sum_{t∋v} x_t + sum_{e∋v} y_e - sum_{(t,e): v∈e⊂t} z_te = 1`. C4 is
//! not expressible as a fixed set of rows and is left to the consumer;
//! [`validate_external`] audits it.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::admissibility::{check_admissible, decode_tour, Constraint, Selection, Verdict};
use crate::complex::{Complex, Edge, Triangle};
use crate::encode::Tour;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::objective::{net_weight, ObjectiveBreakdown};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    X(Triangle),
    Y(Edge),
    Z(Triangle, Edge),
}

impl Var {
    pub fn name(&self) -> String {
        let t = |t: &Triangle| {
            let [i, j, k] = t.cities();
            format!("{i}_{j}_{k}")
        };
        let e = |e: &Edge| {
            let (i, j) = e.cities();
            format!("{i}_{j}")
        };
        match self {
            Var::X(tr) => format!("x_{}", t(tr)),
            Var::Y(ed) => format!("y_{}", e(ed)),
            Var::Z(tr, ed) => format!("z_{}__{}", t(tr), e(ed)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        }
    }

    fn holds(self, lhs: i64, rhs: i64) -> bool {
        match self {
            Sense::Le => lhs <= rhs,
            Sense::Ge => lhs >= rhs,
            Sense::Eq => lhs == rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub name: String,
    pub family: Constraint,
    /// `(coefficient, variable index)`.
    pub terms: Vec<(i64, usize)>,
    pub sense: Sense,
    pub rhs: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IlpModel {
    pub n: usize,
    pub variables: Vec<String>,
    /// Maximized.
    pub objective: Vec<(i64, usize)>,
    pub rows: Vec<Row>,
    kinds: Vec<Var>,
    index: HashMap<String, usize>,
}

impl IlpModel {
    /// Variables in order: all `x_t`, all `y_e`, then `z_{t,e}` per triangle.
    pub fn build(inst: &Instance, complex: &Complex) -> Result<Self> {
        let n = inst.n();
        if complex.n() != n {
            return Err(Error::SizeMismatch { complex: complex.n(), instance: n });
        }
        let mut kinds: Vec<Var> = complex.triangles().iter().map(|&t| Var::X(t)).collect();
        kinds.extend(complex.edges().iter().map(|&e| Var::Y(e)));
        for &t in complex.triangles() {
            kinds.extend(t.edges().iter().map(|&e| Var::Z(t, e)));
        }
        let variables: Vec<String> = kinds.iter().map(Var::name).collect();
        let index: HashMap<String, usize> = variables.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let at: HashMap<Var, usize> = kinds.iter().copied().enumerate().map(|(i, v)| (v, i)).collect();

        let mut objective = Vec::new();
        for (i, kind) in kinds.iter().enumerate() {
            match kind {
                Var::Z(_, e) => objective.push((inst.edge_length(*e)?, i)),
                Var::Y(e) => objective.push((-2 * inst.edge_length(*e)?, i)),
                Var::X(_) => {}
            }
        }

        let mut rows = Vec::new();
        let tname = |t: Triangle| Var::X(t).name()[2..].to_string();
        let ename = |e: Edge| Var::Y(e).name()[2..].to_string();
        for &t in complex.triangles() {
            let x = at[&Var::X(t)];
            for e in t.edges() {
                let z = at[&Var::Z(t, e)];
                let y = at[&Var::Y(e)];
                let suffix = format!("{}__{}", tname(t), ename(e));
                rows.push(Row {
                    name: format!("c1_zy_{suffix}"),
                    family: Constraint::C1,
                    terms: vec![(1, z), (-1, y)],
                    sense: Sense::Le,
                    rhs: 0,
                });
                rows.push(Row {
                    name: format!("c1_zx_{suffix}"),
                    family: Constraint::C1,
                    terms: vec![(1, z), (-1, x)],
                    sense: Sense::Le,
                    rhs: 0,
                });
            }
            let mut terms: Vec<(i64, usize)> = t.edges().iter().map(|&e| (1, at[&Var::Z(t, e)])).collect();
            terms.push((-3, x));
            rows.push(Row {
                name: format!("c1_sum_{}", tname(t)),
                family: Constraint::C1,
                terms,
                sense: Sense::Eq,
                rhs: 0,
            });
        }
        for &e in complex.edges() {
            let y = at[&Var::Y(e)];
            let zs: Vec<(i64, usize)> =
                complex.tris_on_edge(e).iter().map(|&ti| (1, at[&Var::Z(complex.triangles()[ti], e)])).collect();
            let mut lo = zs.clone();
            lo.push((-1, y));
            rows.push(Row {
                name: format!("c2_lo_{}", ename(e)),
                family: Constraint::C2,
                terms: lo,
                sense: Sense::Ge,
                rhs: 0,
            });
            let mut hi = zs;
            hi.push((-2, y));
            rows.push(Row {
                name: format!("c2_hi_{}", ename(e)),
                family: Constraint::C2,
                terms: hi,
                sense: Sense::Le,
                rhs: 0,
            });
        }
        rows.push(Row {
            name: "c3_triangles".into(),
            family: Constraint::C3a,
            terms: complex.triangles().iter().map(|&t| (1, at[&Var::X(t)])).collect(),
            sense: Sense::Eq,
            rhs: n as i64 - 2,
        });
        rows.push(Row {
            name: "c3_edges".into(),
            family: Constraint::C3b,
            terms: complex.edges().iter().map(|&e| (1, at[&Var::Y(e)])).collect(),
            sense: Sense::Eq,
            rhs: 2 * n as i64 - 3,
        });
        for v in 0..n {
            let mut terms = Vec::new();
            for &ti in complex.group(v) {
                terms.push((1, at[&Var::X(complex.triangles()[ti])]));
            }
            for &e in complex.edges().iter().filter(|e| e.contains(v)) {
                terms.push((1, at[&Var::Y(e)]));
            }
            for &ti in complex.group(v) {
                let t = complex.triangles()[ti];
                for e in t.edges().into_iter().filter(|e| e.contains(v)) {
                    terms.push((-1, at[&Var::Z(t, e)]));
                }
            }
            rows.push(Row { name: format!("c5_{v}"), family: Constraint::C5, terms, sense: Sense::Eq, rhs: 1 });
        }
        Ok(IlpModel { n, variables, objective, rows, kinds, index })
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// The 0/1 vector of a selection, in variable order.
    pub fn values_of(&self, sel: &Selection) -> Vec<i64> {
        self.kinds
            .iter()
            .map(|k| {
                i64::from(match k {
                    Var::X(t) => sel.triangles().contains(t),
                    Var::Y(e) => sel.edges().contains(e),
                    Var::Z(t, e) => sel.incidences().contains(&(*t, *e)),
                })
            })
            .collect()
    }

    pub fn assignment_of(&self, sel: &Selection) -> BTreeMap<String, i64> {
        self.variables.iter().cloned().zip(self.values_of(sel)).collect()
    }

    pub fn objective_value(&self, values: &[i64]) -> i64 {
        self.objective.iter().map(|&(c, i)| c * values[i]).sum()
    }

    /// Indices of rows that `values` violates.
    pub fn violated_rows(&self, values: &[i64]) -> Vec<usize> {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.sense.holds(r.terms.iter().map(|&(c, i)| c * values[i]).sum(), r.rhs))
            .map(|(i, _)| i)
            .collect()
    }

    fn selection_of<'c>(&self, complex: &'c Complex, values: &[i64]) -> Result<Selection<'c>> {
        let (mut x, mut y, mut z) = (vec![], vec![], vec![]);
        for (k, &v) in self.kinds.iter().zip(values) {
            if v == 0 {
                continue;
            }
            match *k {
                Var::X(t) => x.push(t),
                Var::Y(e) => y.push(e),
                Var::Z(t, e) => z.push((t, e)),
            }
        }
        Selection::from_parts(complex, x, y, z)
    }

    /// CPLEX LP text.
    pub fn to_lp(&self) -> String {
        let mut out = String::new();
        let _ =
            writeln!(out, "\\ cGSTP model: n={} variables={} rows={}", self.n, self.variables.len(), self.rows.len());
        out.push_str("\\ C4 (the active incidence subgraph must be a tree) is NOT encoded as rows.\n");
        out.push_str("\\ Enforce it in the consumer, e.g. with lazy connectivity cuts, and audit\n");
        out.push_str("\\ solutions with `validate`. Under C1 and C3 the subgraph has 3n-5 nodes\n");
        out.push_str("\\ and 3n-6 arcs, so connected is equivalent to tree.\n");
        out.push_str("MAXIMIZE\n obj:");
        self.write_terms(&mut out, &self.objective);
        out.push_str("\nSUBJECT TO\n");
        for r in &self.rows {
            let _ = write!(out, " {}:", r.name);
            self.write_terms(&mut out, &r.terms);
            let _ = writeln!(out, " {} {}", r.sense.symbol(), r.rhs);
        }
        out.push_str("BINARY\n");
        for chunk in self.variables.chunks(8) {
            let _ = writeln!(out, " {}", chunk.join(" "));
        }
        out.push_str("END\n");
        out
    }

    fn write_terms(&self, out: &mut String, terms: &[(i64, usize)]) {
        if terms.is_empty() {
            // LP readers reject an empty left-hand side
            match self.variables.first() {
                Some(v) => {
                    let _ = write!(out, " 0 {v}");
                }
                None => out.push_str(" 0"),
            }
            return;
        }
        for (k, &(c, i)) in terms.iter().enumerate() {
            if k > 0 && k % 8 == 0 {
                out.push_str("\n  ");
            }
            let sign = if c < 0 { '-' } else { '+' };
            match c.abs() {
                1 => {
                    let _ = write!(out, " {sign} {}", self.variables[i]);
                }
                a => {
                    let _ = write!(out, " {sign} {a} {}", self.variables[i]);
                }
            }
        }
    }
}

pub fn emit_lp(inst: &Instance, complex: &Complex) -> Result<String> {
    Ok(IlpModel::build(inst, complex)?.to_lp())
}

/// Minimal reader for the LP text written by [`IlpModel::to_lp`]: section
/// names, objective terms, named rows and binary declarations.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ParsedLp {
    pub maximize: bool,
    pub objective_terms: usize,
    pub rows: Vec<(String, usize, String, i64)>,
    pub binaries: Vec<String>,
}

pub fn parse_lp(text: &str) -> Result<ParsedLp> {
    #[derive(PartialEq)]
    enum Sec {
        Head,
        Obj,
        Rows,
        Bin,
        End,
    }
    let mut sec = Sec::Head;
    let mut obj_toks = Vec::new();
    let mut row_toks = Vec::new();
    let mut out = ParsedLp::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('\\') {
            continue;
        }
        match line.to_ascii_uppercase().as_str() {
            "MAXIMIZE" | "MAXIMISE" | "MAX" => {
                out.maximize = true;
                sec = Sec::Obj;
                continue;
            }
            "SUBJECT TO" | "ST" | "S.T." => {
                sec = Sec::Rows;
                continue;
            }
            "BINARY" | "BINARIES" | "BIN" => {
                sec = Sec::Bin;
                continue;
            }
            "END" => {
                sec = Sec::End;
                continue;
            }
            _ => {}
        }
        let toks = line.split_whitespace().map(|t| (lineno + 1, t.to_string()));
        match sec {
            Sec::Obj => obj_toks.extend(toks),
            Sec::Rows => row_toks.extend(toks),
            Sec::Bin => out.binaries.extend(toks.map(|(_, t)| t)),
            Sec::Head | Sec::End => return Err(Error::Parse { line: lineno + 1, msg: format!("unexpected '{line}'") }),
        }
    }
    let is_var = |t: &str| t.starts_with(|c: char| c.is_ascii_alphabetic());
    out.objective_terms = obj_toks.iter().skip(1).filter(|(_, t)| is_var(t)).count();
    let mut it = row_toks.into_iter().peekable();
    while let Some((line, name)) = it.next() {
        let Some(name) = name.strip_suffix(':') else {
            return Err(Error::Parse { line, msg: format!("expected row name, got '{name}'") });
        };
        let mut terms = 0;
        let sense = loop {
            let Some((_, t)) = it.next() else {
                return Err(Error::Parse { line, msg: format!("row {name} has no sense") });
            };
            match t.as_str() {
                "<=" | ">=" | "=" => break t,
                t if is_var(t) => terms += 1,
                _ => {}
            }
        };
        let (line, rhs) = it.next().ok_or(Error::Parse { line, msg: format!("row {name} has no rhs") })?;
        let rhs = rhs.parse().map_err(|_| Error::Parse { line, msg: format!("bad rhs '{rhs}'") })?;
        out.rows.push((name.to_string(), terms, sense, rhs));
    }
    Ok(out)
}

/// Reads `name value` lines (blank lines and `#` comments skipped) or a
/// JSON object. Values within 1e-6 of 0 or 1 are rounded.
pub fn parse_assignment(text: &str) -> Result<BTreeMap<String, i64>> {
    let raw: Vec<(String, String)> = if text.trim_start().starts_with('{') {
        let map: BTreeMap<String, serde_json::Value> = serde_json::from_str(text)?;
        map.into_iter().map(|(k, v)| (k, v.to_string())).collect()
    } else {
        let mut pairs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let [name, value] = toks[..] else {
                return Err(Error::Parse { line: lineno + 1, msg: format!("expected 'name value', got '{line}'") });
            };
            pairs.push((name.to_string(), value.to_string()));
        }
        pairs
    };
    let mut out = BTreeMap::new();
    for (name, value) in raw {
        let f: f64 = value.parse().map_err(|_| Error::NonBinary { name: name.clone(), value: value.clone() })?;
        let b = if (f - 0.0).abs() <= 1e-6 {
            0
        } else if (f - 1.0).abs() <= 1e-6 {
            1
        } else {
            return Err(Error::NonBinary { name, value });
        };
        out.insert(name, b);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExternalReport {
    pub verdict: Verdict,
    pub tour: Option<Tour>,
    pub objective: ObjectiveBreakdown,
    /// The LP objective at the assignment; equals `objective.net`.
    pub lp_objective: i64,
}

/// Audits an external 0/1 assignment against every constraint, C4 included.
/// On a C4 failure the verdict carries the component structure.
pub fn validate_external(
    assignment: &BTreeMap<String, i64>,
    inst: &Instance,
    complex: &Complex,
) -> Result<ExternalReport> {
    let model = IlpModel::build(inst, complex)?;
    if let Some(name) = assignment.keys().find(|k| model.var_index(k).is_none()) {
        return Err(Error::UnknownVariable(name.clone()));
    }
    let mut values = Vec::with_capacity(model.variables.len());
    for name in &model.variables {
        match assignment.get(name) {
            None => return Err(Error::MissingVariable(name.clone())),
            Some(&v) if v == 0 || v == 1 => values.push(v),
            Some(v) => return Err(Error::NonBinary { name: name.clone(), value: v.to_string() }),
        }
    }
    let sel = model.selection_of(complex, &values)?;
    let verdict = check_admissible(&sel);
    let tour = if verdict.admissible { Some(decode_tour(&sel)?) } else { None };
    Ok(ExternalReport {
        verdict,
        tour,
        objective: net_weight(&sel, inst)?,
        lp_objective: model.objective_value(&values),
    })
}
