//! Fusions: coarsenings of a scheme obtained by merging classes.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::FusionError;
use crate::flags::flag_delta;
use crate::poly::BivariatePoly;
use crate::scheme::{IntersectionTensor, SchemeMatrix};
use crate::tables::{flag_table, PolyTable};

/// A partition of the classes `1..=d`; class 0 is always alone.
///
/// Blocks are sorted internally and ordered by least element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct IndexPartition {
    d: usize,
    blocks: Vec<Vec<usize>>,
}

impl IndexPartition {
    pub fn new(d: usize, blocks: Vec<Vec<usize>>) -> Result<Self, FusionError> {
        let mut seen = vec![false; d + 1];
        for block in &blocks {
            if block.is_empty() {
                return Err(FusionError::InvalidPartition("empty block".into()));
            }
            for &c in block {
                if c == 0 || c > d {
                    return Err(FusionError::InvalidPartition(format!("class {c} outside 1..={d}")));
                }
                if std::mem::replace(&mut seen[c], true) {
                    return Err(FusionError::InvalidPartition(format!("class {c} repeated")));
                }
            }
        }
        if let Some(c) = (1..=d).find(|&c| !seen[c]) {
            return Err(FusionError::InvalidPartition(format!("class {c} missing")));
        }
        let mut blocks: Vec<Vec<usize>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(Self { d, blocks })
    }

    /// Every class in its own block.
    pub fn singletons(d: usize) -> Self {
        Self { d, blocks: (1..=d).map(|c| vec![c]).collect() }
    }

    pub fn num_classes(&self) -> usize {
        self.d
    }

    /// Non-zero blocks, i.e. the classes of the fused scheme after 0.
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// `map[c]` is the fused class of `c`; `map[0] = 0`.
    pub fn class_map(&self) -> Vec<usize> {
        let mut map = vec![0; self.d + 1];
        for (b, block) in self.blocks.iter().enumerate() {
            block.iter().for_each(|&c| map[c] = b + 1);
        }
        map
    }

    /// All blocks including `{0}`.
    fn blocks_with_zero(&self) -> impl Iterator<Item = &[usize]> + '_ {
        std::iter::once(&[0usize][..]).chain(self.blocks.iter().map(Vec::as_slice))
    }

    /// Whether `star` maps every block onto a block.
    pub fn respects_involution(&self, star: impl Fn(usize) -> usize) -> bool {
        let map = self.class_map();
        self.blocks.iter().all(|block| {
            let image = map[star(block[0])];
            block.iter().all(|&c| map[star(c)] == image) && self.blocks[image - 1].len() == block.len()
        })
    }

    /// Image under a class permutation applied blockwise.
    pub fn map_classes(&self, f: impl Fn(usize) -> usize) -> Self {
        Self::new(self.d, self.blocks.iter().map(|b| b.iter().map(|&c| f(c)).collect()).collect())
            .expect("a permutation of classes maps partitions to partitions")
    }

    /// Parses `{1,2}|{3,4}|{5,6}|{7}` (separators `|` or whitespace optional).
    pub fn parse(d: usize, text: &str) -> Result<Self, FusionError> {
        let bad = || FusionError::InvalidPartition(format!("cannot parse {text:?}"));
        let mut blocks = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            rest = rest.trim_start_matches(|c: char| c == '|' || c.is_whitespace());
            if rest.is_empty() {
                break;
            }
            let body = rest.strip_prefix('{').ok_or_else(bad)?;
            let end = body.find('}').ok_or_else(bad)?;
            let block = body[..end]
                .split(',')
                .map(|x| x.trim().parse::<usize>().map_err(|_| bad()))
                .collect::<Result<Vec<_>, _>>()?;
            blocks.push(block);
            rest = &body[end + 1..];
        }
        Self::new(d, blocks)
    }
}

impl fmt::Display for IndexPartition {
    /// `{1,2}|{3,4}|{5,6}|{7}`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rendered: Vec<String> = self
            .blocks
            .iter()
            .map(|b| format!("{{{}}}", b.iter().map(usize::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "{}", rendered.join("|"))
    }
}

/// All set partitions of `1..=d` in restricted-growth-string order.
pub fn set_partitions(d: usize) -> Vec<IndexPartition> {
    let mut out = Vec::new();
    if d == 0 {
        out.push(IndexPartition { d, blocks: Vec::new() });
        return out;
    }
    // growth[c] is the block of class c + 1; growth[c] <= 1 + max(growth[..c])
    let mut growth = vec![0usize; d];
    loop {
        let count = growth.iter().max().map_or(0, |m| m + 1);
        let mut blocks = vec![Vec::new(); count];
        for (c, &b) in growth.iter().enumerate() {
            blocks[b].push(c + 1);
        }
        out.push(IndexPartition { d, blocks });

        let mut pos = d;
        loop {
            if pos == 1 {
                return out;
            }
            pos -= 1;
            let bound = growth[..pos].iter().max().map_or(0, |m| m + 1);
            if growth[pos] < bound {
                growth[pos] += 1;
                growth[pos + 1..].iter_mut().for_each(|g| *g = 0);
                break;
            }
        }
    }
}

fn block_sum(t: &IntersectionTensor, k: usize, a: &[usize], b: &[usize]) -> i64 {
    a.iter().flat_map(|&i| b.iter().map(move |&j| t.get(k, i, j))).sum()
}

/// Whether the merged classes form a scheme: every block is mapped to a block
/// by transposition, and within each block all classes give the same block
/// sums of intersection numbers.
pub fn check_fusion(t: &IntersectionTensor, part: &IndexPartition) -> bool {
    if part.d != t.num_classes() || !part.respects_involution(|c| t.star(c)) {
        return false;
    }
    let all: Vec<&[usize]> = part.blocks_with_zero().collect();
    all.iter().all(|block| {
        block[1..]
            .iter()
            .all(|&k| all.iter().all(|a| all.iter().all(|b| block_sum(t, k, a, b) == block_sum(t, block[0], a, b))))
    })
}

/// Intersection numbers of the fused scheme, summed from block representatives.
pub fn fused_tensor(t: &IntersectionTensor, part: &IndexPartition) -> Result<IntersectionTensor, FusionError> {
    if !check_fusion(t, part) {
        return Err(FusionError::NotAFusion(part.to_string()));
    }
    let all: Vec<&[usize]> = part.blocks_with_zero().collect();
    let m = all.len();
    let mut p = vec![0; m * m * m];
    for (k, bk) in all.iter().enumerate() {
        for (i, bi) in all.iter().enumerate() {
            for (j, bj) in all.iter().enumerate() {
                p[(k * m + i) * m + j] = block_sum(t, bk[0], bi, bj);
            }
        }
    }
    Ok(IntersectionTensor::from_numbers(m - 1, p)?)
}

/// Relation matrix of the fused scheme; classes renumbered by block.
pub fn fuse(m: &SchemeMatrix, t: &IntersectionTensor, part: &IndexPartition) -> Result<SchemeMatrix, FusionError> {
    if !check_fusion(t, part) {
        return Err(FusionError::NotAFusion(part.to_string()));
    }
    Ok(m.merge_classes(&part.class_map(), part.num_blocks())?)
}

/// All non-trivial fusions (between 2 and `d - 1` blocks), in
/// restricted-growth-string order.
pub fn enumerate_fusions(t: &IntersectionTensor) -> Vec<IndexPartition> {
    let d = t.num_classes();
    set_partitions(d).into_par_iter().filter(|p| (2..d).contains(&p.num_blocks()) && check_fusion(t, p)).collect()
}

/// Swaps points and lines in every block of a flag-class partition.
pub fn dual_partition(part: &IndexPartition) -> IndexPartition {
    part.map_classes(flag_delta)
}

/// One-parameter families on which a polynomial condition may hold identically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Curve {
    SEqualsT,
    TEqualsOne,
    SEqualsOne,
}

impl Curve {
    pub fn contains(self, s: i64, t: i64) -> bool {
        match self {
            Curve::SEqualsT => s == t,
            Curve::TEqualsOne => t == 1,
            Curve::SEqualsOne => s == 1,
        }
    }

    fn dual(self) -> Self {
        match self {
            Curve::SEqualsT => Curve::SEqualsT,
            Curve::TEqualsOne => Curve::SEqualsOne,
            Curve::SEqualsOne => Curve::TEqualsOne,
        }
    }

    fn vanishes(self, f: &BivariatePoly) -> bool {
        match self {
            Curve::SEqualsT => f.with_t_eq_s().is_zero(),
            Curve::TEqualsOne => f.with_t(1).is_zero(),
            Curve::SEqualsOne => f.with_s(1).is_zero(),
        }
    }

    fn tag(self) -> &'static str {
        match self {
            Curve::SEqualsT => "S_EQ_T",
            Curve::TEqualsOne => "T_EQ_1",
            Curve::SEqualsOne => "S_EQ_1",
        }
    }
}

/// Where in the `(s, t)` plane a partition defines a fusion of the flag scheme.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum FeasibilityCondition {
    All,
    SEqualsT,
    TEqualsOne,
    SEqualsOne,
    /// Finitely many parameter points, all inside the scan grid.
    Points(Vec<(i64, i64)>),
    Never,
    /// A zero set matching no single lattice element: a union of curves and points.
    Mixed {
        curves: Vec<Curve>,
        points: Vec<(i64, i64)>,
    },
}

/// Largest `s` and `t` probed for isolated solutions.
pub const SCAN_BOUND: i64 = 5;

/// Parameter points probed for isolated solutions: `1..=SCAN_BOUND` squared
/// without `(1, 1)`.
pub fn scan_grid() -> impl Iterator<Item = (i64, i64)> {
    (1..=SCAN_BOUND).flat_map(|s| (1..=SCAN_BOUND).map(move |t| (s, t))).filter(|&p| p != (1, 1))
}

impl FeasibilityCondition {
    pub fn holds_at(&self, s: i64, t: i64) -> bool {
        match self {
            Self::All => true,
            Self::SEqualsT => s == t,
            Self::TEqualsOne => t == 1,
            Self::SEqualsOne => s == 1,
            Self::Points(points) => points.contains(&(s, t)),
            Self::Never => false,
            Self::Mixed { curves, points } => curves.iter().any(|c| c.contains(s, t)) || points.contains(&(s, t)),
        }
    }

    /// Condition for the dual partition.
    pub fn swap_st(&self) -> Self {
        let swap_points = |points: &[(i64, i64)]| {
            let mut out: Vec<(i64, i64)> = points.iter().map(|&(s, t)| (t, s)).collect();
            out.sort_unstable();
            out
        };
        match self {
            Self::TEqualsOne => Self::SEqualsOne,
            Self::SEqualsOne => Self::TEqualsOne,
            Self::Points(points) => Self::Points(swap_points(points)),
            Self::Mixed { curves, points } => {
                let mut curves: Vec<Curve> = curves.iter().map(|c| c.dual()).collect();
                curves.sort_unstable();
                Self::Mixed { curves, points: swap_points(points) }
            }
            other => other.clone(),
        }
    }
}

impl fmt::Display for FeasibilityCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let points =
            |points: &[(i64, i64)]| points.iter().map(|(s, t)| format!("POINT({s},{t})")).collect::<Vec<_>>().join(";");
        match self {
            Self::All => write!(f, "ALL"),
            Self::SEqualsT => write!(f, "S_EQ_T"),
            Self::TEqualsOne => write!(f, "T_EQ_1"),
            Self::SEqualsOne => write!(f, "S_EQ_1"),
            Self::Points(p) => write!(f, "{}", points(p)),
            Self::Never => write!(f, "NEVER"),
            Self::Mixed { curves, points: p } => {
                let mut parts: Vec<String> = curves.iter().map(|c| c.tag().to_string()).collect();
                if !p.is_empty() {
                    parts.push(points(p));
                }
                write!(f, "MIXED({})", parts.join(";"))
            }
        }
    }
}

/// Difference polynomials whose common zero set is where `part` is a fusion.
fn criterion_differences(table: &PolyTable, part: &IndexPartition) -> Vec<BivariatePoly> {
    let all: Vec<&[usize]> = part.blocks_with_zero().collect();
    let sum = |k: usize, a: &[usize], b: &[usize]| -> BivariatePoly {
        a.iter().flat_map(|&i| b.iter().map(move |&j| table.get(k, i, j))).sum()
    };
    let mut out = Vec::new();
    for block in &all {
        for &k in &block[1..] {
            for a in &all {
                for b in &all {
                    let f = &sum(k, a, b) - &sum(block[0], a, b);
                    if !f.is_zero() && !out.contains(&f) {
                        out.push(f);
                    }
                }
            }
        }
    }
    out
}

/// Symbolic feasibility of a flag-class partition. Partitions not respecting
/// transposition are `Never`.
pub fn classify_partition(part: &IndexPartition) -> FeasibilityCondition {
    let table = flag_table();
    if part.d != table.num_classes() || !part.respects_involution(|c| table.star(c)) {
        return FeasibilityCondition::Never;
    }
    let diffs = criterion_differences(table, part);
    if diffs.is_empty() {
        return FeasibilityCondition::All;
    }
    let curves: Vec<Curve> = [Curve::SEqualsT, Curve::TEqualsOne, Curve::SEqualsOne]
        .into_iter()
        .filter(|c| diffs.iter().all(|f| c.vanishes(f)))
        .collect();
    let points: Vec<(i64, i64)> = scan_grid()
        .filter(|&(s, t)| !curves.iter().any(|c| c.contains(s, t)))
        .filter(|&(s, t)| diffs.iter().all(|f| f.eval(s, t) == 0))
        .collect();
    match (curves.as_slice(), points.is_empty()) {
        ([], true) => FeasibilityCondition::Never,
        ([], false) => FeasibilityCondition::Points(points),
        ([Curve::SEqualsT], true) => FeasibilityCondition::SEqualsT,
        ([Curve::TEqualsOne], true) => FeasibilityCondition::TEqualsOne,
        ([Curve::SEqualsOne], true) => FeasibilityCondition::SEqualsOne,
        _ => FeasibilityCondition::Mixed { curves, points },
    }
}

/// Classification of every partition of the seven flag classes, in
/// restricted-growth-string order, trivial ones included.
pub fn classify_all() -> Vec<(IndexPartition, FeasibilityCondition)> {
    set_partitions(flag_table().num_classes())
        .into_par_iter()
        .map(|p| {
            let c = classify_partition(&p);
            (p, c)
        })
        .collect()
}

/// CSV `partition,condition` with a header. Partitions contain commas, so
/// fields are quoted.
pub fn fusion_csv<'a>(
    rows: impl IntoIterator<Item = (&'a IndexPartition, Option<&'a FeasibilityCondition>)>,
) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["partition", "condition"]).expect("in-memory write");
    for (p, c) in rows {
        let c = c.map(|c| c.to_string()).unwrap_or_default();
        w.write_record([p.to_string(), c]).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}
