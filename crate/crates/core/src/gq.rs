//! Finite incidence structures and generalized quadrangles.
//!
//! Points and lines are dense 0-based indices. Labels, when present, only
//! decorate reports and files.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GqError, GqWitness};
use crate::graph::Graph;

/// The order `(s, t)`: lines carry `s + 1` points, points lie on `t + 1` lines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GqOrder {
    pub s: u64,
    pub t: u64,
}

impl GqOrder {
    pub fn new(s: u64, t: u64) -> Self {
        Self { s, t }
    }

    pub fn num_points(&self) -> u64 {
        (self.s + 1) * (self.s * self.t + 1)
    }

    pub fn num_lines(&self) -> u64 {
        (self.t + 1) * (self.s * self.t + 1)
    }

    pub fn num_flags(&self) -> u64 {
        (self.s + 1) * (self.t + 1) * (self.s * self.t + 1)
    }

    pub fn dual(&self) -> Self {
        Self { s: self.t, t: self.s }
    }
}

impl fmt::Display for GqOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.s, self.t)
    }
}

/// Points, lines and a sorted, duplicate-free incidence set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceStructure {
    num_points: usize,
    num_lines: usize,
    incidence: Vec<(usize, usize)>,
    point_labels: Option<Vec<String>>,
    line_labels: Option<Vec<String>>,
    lines_on_point: Vec<Vec<usize>>,
    points_on_line: Vec<Vec<usize>>,
}

impl IncidenceStructure {
    pub fn new(
        num_points: usize,
        num_lines: usize,
        incidence: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GqError> {
        let mut pairs: Vec<(usize, usize)> = incidence.into_iter().collect();
        for (n, &(p, l)) in pairs.iter().enumerate() {
            if p >= num_points || l >= num_lines {
                return Err(GqError::InvalidIncidence(format!(
                    "incidence[{n}] = [{p}, {l}] out of range ({num_points} points, {num_lines} lines)"
                )));
            }
        }
        pairs.sort_unstable();
        if let Some(w) = pairs.windows(2).find(|w| w[0] == w[1]) {
            return Err(GqError::InvalidIncidence(format!("duplicate incidence [{}, {}]", w[0].0, w[0].1)));
        }
        let mut lines_on_point = vec![Vec::new(); num_points];
        let mut points_on_line = vec![Vec::new(); num_lines];
        for &(p, l) in &pairs {
            lines_on_point[p].push(l);
            points_on_line[l].push(p);
        }
        Ok(Self {
            num_points,
            num_lines,
            incidence: pairs,
            point_labels: None,
            line_labels: None,
            lines_on_point,
            points_on_line,
        })
    }

    pub fn with_labels(mut self, point_labels: Vec<String>, line_labels: Vec<String>) -> Result<Self, GqError> {
        if point_labels.len() != self.num_points || line_labels.len() != self.num_lines {
            return Err(GqError::InvalidIncidence("label count mismatch".into()));
        }
        self.point_labels = Some(point_labels);
        self.line_labels = Some(line_labels);
        Ok(self)
    }

    pub fn num_points(&self) -> usize {
        self.num_points
    }

    pub fn num_lines(&self) -> usize {
        self.num_lines
    }

    /// Incident `(point, line)` pairs, sorted lexicographically.
    pub fn incidence(&self) -> &[(usize, usize)] {
        &self.incidence
    }

    pub fn point_labels(&self) -> Option<&[String]> {
        self.point_labels.as_deref()
    }

    pub fn line_labels(&self) -> Option<&[String]> {
        self.line_labels.as_deref()
    }

    /// Sorted lines through `point`.
    pub fn lines_on(&self, point: usize) -> &[usize] {
        &self.lines_on_point[point]
    }

    /// Sorted points on `line`.
    pub fn points_on(&self, line: usize) -> &[usize] {
        &self.points_on_line[line]
    }

    pub fn is_incident(&self, point: usize, line: usize) -> bool {
        self.lines_on_point[point].binary_search(&line).is_ok()
    }

    /// Same structure with one incident pair removed.
    pub fn without_incidence(&self, point: usize, line: usize) -> Result<Self, GqError> {
        let pairs = self.incidence.iter().copied().filter(|&pair| pair != (point, line));
        Self::new(self.num_points, self.num_lines, pairs)
    }
}

/// The `(s+1) x (s+1)` grid: rows are lines `0..=s`, columns are lines `s+1..=2s+1`.
/// Point `(r, c)` has index `r * (s + 1) + c`.
pub fn build_grid(s: u64) -> Result<IncidenceStructure, GqError> {
    if s < 1 {
        return Err(GqError::ParameterTooSmall { got: s, min: 1 });
    }
    let side = (s + 1) as usize;
    let mut incidence = Vec::with_capacity(2 * side * side);
    for r in 0..side {
        for c in 0..side {
            let p = r * side + c;
            incidence.push((p, r));
            incidence.push((p, side + c));
        }
    }
    let points = (0..side * side).map(|p| format!("({},{})", p / side, p % side)).collect();
    let lines = (0..side).map(|r| format!("row{r}")).chain((0..side).map(|c| format!("col{c}"))).collect();
    IncidenceStructure::new(side * side, 2 * side, incidence)?.with_labels(points, lines)
}

pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    (2..).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d))
}

/// Projective points of PG(3, q) in normalised form (first non-zero entry 1).
fn projective_points(q: u64) -> Vec<[u64; 4]> {
    let mut points = Vec::new();
    for lead in 0..4 {
        let free = 3 - lead;
        for code in 0..q.pow(free as u32) {
            let mut v = [0u64; 4];
            v[lead] = 1;
            let mut c = code;
            for slot in v.iter_mut().skip(lead + 1) {
                *slot = c % q;
                c /= q;
            }
            points.push(v);
        }
    }
    points.sort_unstable();
    points
}

fn normalise(mut v: [u64; 4], q: u64) -> [u64; 4] {
    let lead = v.iter().copied().find(|&x| x != 0).expect("zero vector");
    // inverse by Fermat, q prime
    let inv = mod_pow(lead, q - 2, q);
    for x in v.iter_mut() {
        *x = *x * inv % q;
    }
    v
}

fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// `x0*y1 - x1*y0 + x2*y3 - x3*y2 (mod q)`.
fn symplectic_form(x: &[u64; 4], y: &[u64; 4], q: u64) -> u64 {
    let pos = (x[0] * y[1] + x[2] * y[3]) % q;
    let neg = (x[1] * y[0] + x[3] * y[2]) % q;
    (pos + q - neg) % q
}

/// The symplectic quadrangle W(q) of order `(q, q)` for prime `q`: all points of
/// PG(3, q) and the totally isotropic lines of the standard alternating form.
pub fn build_symplectic(q: u64) -> Result<IncidenceStructure, GqError> {
    if !is_prime(q) {
        return Err(GqError::CompositeParameter(q));
    }
    let points = projective_points(q);
    let index: HashMap<[u64; 4], usize> = points.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut lines: BTreeSet<Vec<usize>> = BTreeSet::new();
    for (a, va) in points.iter().enumerate() {
        for (b, vb) in points.iter().enumerate().skip(a + 1) {
            if symplectic_form(va, vb, q) != 0 {
                continue;
            }
            let mut members = vec![b];
            for lambda in 0..q {
                let mut v = [0u64; 4];
                for k in 0..4 {
                    v[k] = (va[k] + lambda * vb[k]) % q;
                }
                members.push(index[&normalise(v, q)]);
            }
            members.sort_unstable();
            members.dedup();
            lines.insert(members);
        }
    }
    let incidence: Vec<(usize, usize)> =
        lines.iter().enumerate().flat_map(|(l, members)| members.iter().map(move |&p| (p, l))).collect();
    let point_labels = points.iter().map(|v| format!("({},{},{},{})", v[0], v[1], v[2], v[3])).collect();
    let line_labels = (0..lines.len()).map(|l| format!("L{l}")).collect();
    IncidenceStructure::new(points.len(), lines.len(), incidence)?.with_labels(point_labels, line_labels)
}

/// Swaps points and lines.
pub fn dualize(structure: &IncidenceStructure) -> IncidenceStructure {
    let pairs = structure.incidence.iter().map(|&(p, l)| (l, p));
    let dual = IncidenceStructure::new(structure.num_lines, structure.num_points, pairs)
        .expect("transpose of a valid structure is valid");
    match (&structure.point_labels, &structure.line_labels) {
        (Some(p), Some(l)) => dual.with_labels(l.clone(), p.clone()).expect("label counts"),
        _ => dual,
    }
}

/// Degree shared by most elements (ties towards the smaller degree), then the
/// first element that deviates from it.
fn check_degrees(adjacency: &[Vec<usize>]) -> Result<usize, GqWitness> {
    let mut counts: HashMap<usize, usize> = HashMap::new();
    for a in adjacency {
        *counts.entry(a.len()).or_default() += 1;
    }
    let expected = counts.iter().max_by(|x, y| x.1.cmp(y.1).then(y.0.cmp(x.0))).map(|(&d, _)| d).unwrap_or(0);
    if let Some((element, a)) = adjacency.iter().enumerate().find(|(_, a)| a.len() != expected) {
        return Err(GqWitness::Degree { element, degree: a.len(), expected });
    }
    if expected < 2 {
        return Err(GqWitness::Degenerate { degree: expected });
    }
    Ok(expected)
}

/// For each pair of elements on a common block, records the block; fails if a
/// pair shares two blocks. Returns the dense `n x n` "joining block" table.
fn joining_table(n: usize, blocks: &[Vec<usize>]) -> Result<Vec<Option<u32>>, GqWitness> {
    let mut join = vec![None; n * n];
    for (block, members) in blocks.iter().enumerate() {
        for (k, &a) in members.iter().enumerate() {
            for &b in &members[k + 1..] {
                if let Some(prev) = join[a * n + b] {
                    return Err(GqWitness::DoubleMeet { pair: (a, b), shared: (prev as usize, block) });
                }
                join[a * n + b] = Some(block as u32);
                join[b * n + a] = Some(block as u32);
            }
        }
    }
    Ok(join)
}

/// Checks GQ1, GQ2, GQ3 in that order and returns the order `(s, t)`.
pub fn verify_gq(structure: &IncidenceStructure) -> Result<GqOrder, GqError> {
    let np = structure.num_points;
    let point_degree = check_degrees(&structure.lines_on_point).map_err(GqError::Gq1Violation)?;
    let collinear = joining_table(np, &structure.points_on_line).map_err(GqError::Gq1Violation)?;
    let line_degree = check_degrees(&structure.points_on_line).map_err(GqError::Gq2Violation)?;
    joining_table(structure.num_lines, &structure.lines_on_point).map_err(GqError::Gq2Violation)?;

    let witness = (0..np).into_par_iter().find_map_first(|p| {
        (0..structure.num_lines).find_map(|line| {
            if structure.is_incident(p, line) {
                return None;
            }
            let count = structure.points_on_line[line].iter().filter(|&&q| collinear[p * np + q].is_some()).count();
            (count != 1).then_some(GqWitness::AntiFlag { point: p, line, count })
        })
    });
    if let Some(w) = witness {
        return Err(GqError::Gq3Violation(w));
    }
    Ok(GqOrder { s: line_degree as u64 - 1, t: point_degree as u64 - 1 })
}

/// Collinearity graph on the points.
pub fn point_graph(structure: &IncidenceStructure) -> Graph {
    let edges = structure.points_on_line.iter().flat_map(|members| {
        members.iter().enumerate().flat_map(move |(k, &a)| members[k + 1..].iter().map(move |&b| (a, b)))
    });
    Graph::from_edges(structure.num_points, edges)
}

#[derive(Serialize, Deserialize)]
struct StructureFile {
    num_points: usize,
    num_lines: usize,
    incidence: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    point_labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    line_labels: Option<Vec<String>>,
}

/// Parses the JSON structure format from a string; `origin` names the source in errors.
pub fn parse_structure(text: &str, origin: &Path) -> Result<IncidenceStructure, GqError> {
    let file: StructureFile = serde_json::from_str(text).map_err(|e| GqError::Parse {
        path: origin.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let structure =
        IncidenceStructure::new(file.num_points, file.num_lines, file.incidence.iter().map(|&[p, l]| (p, l)))?;
    match (file.point_labels, file.line_labels) {
        (Some(p), Some(l)) => structure.with_labels(p, l),
        (None, None) => Ok(structure),
        _ => Err(GqError::InvalidIncidence("point_labels and line_labels must be given together".into())),
    }
}

pub fn load_structure(path: &Path) -> Result<IncidenceStructure, GqError> {
    let text = fs::read_to_string(path).map_err(|source| GqError::Io { path: path.to_path_buf(), source })?;
    parse_structure(&text, path)
}

/// JSON text with one incidence pair per line, pairs sorted lexicographically.
pub fn structure_to_json(structure: &IncidenceStructure) -> String {
    let mut out = String::new();
    out.push_str("{\n");
    out.push_str(&format!("  \"num_points\": {},\n", structure.num_points));
    out.push_str(&format!("  \"num_lines\": {},\n", structure.num_lines));
    out.push_str("  \"incidence\": [\n");
    let rows: Vec<String> = structure.incidence.iter().map(|(p, l)| format!("    [{p}, {l}]")).collect();
    out.push_str(&rows.join(",\n"));
    out.push_str("\n  ]");
    if let (Some(p), Some(l)) = (&structure.point_labels, &structure.line_labels) {
        let enc = |v: &Vec<String>| serde_json::to_string(v).expect("strings serialise");
        out.push_str(&format!(",\n  \"point_labels\": {}", enc(p)));
        out.push_str(&format!(",\n  \"line_labels\": {}", enc(l)));
    }
    out.push_str("\n}\n");
    out
}

pub fn save_structure(structure: &IncidenceStructure, path: &Path) -> Result<(), GqError> {
    fs::write(path, structure_to_json(structure)).map_err(|source| GqError::Io { path: path.to_path_buf(), source })
}
