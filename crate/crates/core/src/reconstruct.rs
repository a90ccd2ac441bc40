//! Rebuilding a generalized quadrangle from anonymous scheme data.
//!
//! Seven classes: points and lines are the blocks of the parabolics `{0,1}`
//! and `{0,2}`. Four classes: every vertex lies on exactly two maximal
//! cliques of class 1; the clique-intersection graph is bipartite and its two
//! sides are the points and the lines.

use std::collections::{BTreeSet, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{QmError, ReconstructError};
use crate::flags::FLAG_CLASSES;
use crate::gq::{verify_gq, GqOrder, IncidenceStructure};
use crate::scheme::{equivalence_blocks, find_algebraic_isomorphisms, verify_scheme, IntersectionTensor, SchemeMatrix};
use crate::tables::{fused_tensor_at, tensor_at};

pub const FUSED_CLASSES: usize = 4;

fn mismatch(found: &IntersectionTensor, expected: &IntersectionTensor, at: &str) -> Option<ReconstructError> {
    found.first_difference(expected).map(|(k, i, j)| {
        ReconstructError::ParameterMismatch(format!(
            "{at}: p[{k}][{i}][{j}] is {}, table gives {}",
            found.get(k, i, j),
            expected.get(k, i, j)
        ))
    })
}

fn require_classes(m: &SchemeMatrix, expected: usize) -> Result<(), ReconstructError> {
    if m.num_classes() != expected {
        return Err(ReconstructError::WrongClassCount { expected, found: m.num_classes() });
    }
    Ok(())
}

/// A quadrangle rebuilt from flag-scheme data. Vertex `x` is the flag
/// `vertex_flags[x] = (point, line)`.
#[derive(Clone, Debug)]
pub struct Reconstruction7 {
    pub structure: IncidenceStructure,
    pub order: GqOrder,
    pub vertex_flags: Vec<(usize, usize)>,
}

/// Parameters are read off the valencies (`eta_1 = t`, `eta_2 = s`), and the
/// counted intersection numbers must equal the table at `(s, t)`.
pub fn reconstruct_from_7class(m: &SchemeMatrix) -> Result<Reconstruction7, ReconstructError> {
    require_classes(m, FLAG_CLASSES)?;
    let tensor = verify_scheme(m)?;
    let (s, t) = (tensor.valency(2), tensor.valency(1));
    if let Some(err) = mismatch(&tensor, &tensor_at(s, t), &format!("({s},{t})")) {
        return Err(err);
    }
    let points = equivalence_blocks(m, &[0, 1])?;
    let lines = equivalence_blocks(m, &[0, 2])?;
    let mut vertex_flags = vec![(0, 0); m.order()];
    for (p, block) in points.iter().enumerate() {
        block.iter().for_each(|&x| vertex_flags[x].0 = p);
    }
    for (l, block) in lines.iter().enumerate() {
        block.iter().for_each(|&x| vertex_flags[x].1 = l);
    }
    let mut seen = std::collections::HashMap::new();
    for (x, &flag) in vertex_flags.iter().enumerate() {
        if let Some(y) = seen.insert(flag, x) {
            return Err(ReconstructError::CoverViolation {
                vertex: x,
                detail: format!("same point- and line-block as vertex {y}"),
            });
        }
    }
    let structure = IncidenceStructure::new(points.len(), lines.len(), vertex_flags.iter().copied())?;
    let order = verify_gq(&structure)?;
    let expected = GqOrder::new(s as u64, t as u64);
    if order != expected {
        return Err(ReconstructError::OrderMismatch { expected, found: order });
    }
    Ok(Reconstruction7 { structure, order, vertex_flags })
}

/// Data relabeled so its classes match a reference table.
#[derive(Clone, Debug)]
pub struct Relabeling {
    pub matrix: SchemeMatrix,
    /// Class `k` of the input became class `class_map[k]`.
    pub class_map: Vec<usize>,
    pub order: GqOrder,
    /// Number of class maps onto the chosen table; more than one means the choice was not forced.
    pub alternatives: usize,
    /// Other orders whose table the data also matches (the dual order, when `s != t`).
    pub other_orders: Vec<GqOrder>,
}

fn relabel_against(
    m: &SchemeMatrix,
    tensor: &IntersectionTensor,
    candidates: Vec<(GqOrder, IntersectionTensor)>,
    target: Option<GqOrder>,
) -> Result<Relabeling, ReconstructError> {
    let matching: Vec<(GqOrder, Vec<Vec<usize>>)> = candidates
        .into_iter()
        .map(|(order, reference)| (order, find_algebraic_isomorphisms(tensor, &reference)))
        .filter(|(_, isos)| !isos.is_empty())
        .collect();
    let chosen = match target {
        Some(order) => matching.iter().find(|(o, _)| *o == order),
        None => matching.first(),
    }
    .ok_or(ReconstructError::NoIsomorphism)?;
    let class_map = chosen.1.iter().min().cloned().expect("non-empty");
    let matrix = m.relabel_classes(&class_map)?;
    let other_orders = matching.iter().map(|(o, _)| *o).filter(|o| *o != chosen.0).collect();
    Ok(Relabeling { matrix, class_map, order: chosen.0, alternatives: chosen.1.len(), other_orders })
}

/// Renames the classes of a seven-class scheme so that its intersection
/// numbers equal the flag table. Candidate orders come from pairs of
/// valencies consistent with the number of vertices. Without a target, the
/// least candidate order is used; the lexicographically least matching class
/// map is taken in either case.
///
/// Class data cannot tell `(s, t)` from `(t, s)`: the point-line swap maps
/// one table onto the other. `target` selects the orientation.
pub fn relabel_to_canonical(m: &SchemeMatrix, target: Option<GqOrder>) -> Result<Relabeling, ReconstructError> {
    if m.num_classes() != FLAG_CLASSES {
        return Err(ReconstructError::NoIsomorphism);
    }
    let tensor = verify_scheme(m)?;
    let n = m.order() as i64;
    let eta = tensor.valencies();
    let candidates: BTreeSet<(i64, i64)> = (1..eta.len())
        .flat_map(|a| (1..eta.len()).map(move |b| (eta[b], eta[a])))
        .filter(|&(s, t)| (s + 1) * (t + 1) * (s * t + 1) == n)
        .collect();
    let candidates = candidates.into_iter().map(|(s, t)| (GqOrder::new(s as u64, t as u64), tensor_at(s, t))).collect();
    relabel_against(m, &tensor, candidates, target)
}

/// Same as [`relabel_to_canonical`] for the four-class fusion table.
pub fn relabel_fused_to_canonical(m: &SchemeMatrix) -> Result<Relabeling, ReconstructError> {
    if m.num_classes() != FUSED_CLASSES {
        return Err(ReconstructError::NoIsomorphism);
    }
    let tensor = verify_scheme(m)?;
    let n = m.order() as i64;
    let s = (1..).find(|s: &i64| (s + 1) * (s + 1) * (s * s + 1) >= n).expect("n is finite");
    if (s + 1) * (s + 1) * (s * s + 1) != n {
        return Err(ReconstructError::NoIsomorphism);
    }
    relabel_against(m, &tensor, vec![(GqOrder::new(s as u64, s as u64), fused_tensor_at(s))], None)
}

/// Maximal cliques of one relation and the cliques through each vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CliqueCover {
    pub cliques: Vec<Vec<usize>>,
    pub vertex_to_cliques: Vec<Vec<usize>>,
}

impl CliqueCover {
    /// Each component of the class-`class` neighbourhood of `x`, together with
    /// `x`, must be a clique; those cliques are then maximal. Cliques are
    /// sorted lexicographically.
    pub fn from_relation(m: &SchemeMatrix, class: usize) -> Result<Self, ReconstructError> {
        let n = m.order();
        let per_vertex: Vec<Vec<Vec<usize>>> = (0..n)
            .into_par_iter()
            .map(|x| {
                let neighbours: Vec<usize> = (0..n).filter(|&y| m.get(x, y) == class).collect();
                let mut done = vec![false; neighbours.len()];
                let mut found = Vec::new();
                for start in 0..neighbours.len() {
                    if done[start] {
                        continue;
                    }
                    done[start] = true;
                    let mut component = vec![neighbours[start]];
                    let mut queue = VecDeque::from([start]);
                    while let Some(a) = queue.pop_front() {
                        for b in 0..neighbours.len() {
                            if !done[b] && m.get(neighbours[a], neighbours[b]) == class {
                                done[b] = true;
                                component.push(neighbours[b]);
                                queue.push_back(b);
                            }
                        }
                    }
                    component.push(x);
                    component.sort_unstable();
                    found.push(component);
                }
                found
            })
            .collect();
        for (x, cliques) in per_vertex.iter().enumerate() {
            for clique in cliques {
                let broken = clique
                    .iter()
                    .enumerate()
                    .find_map(|(i, &a)| clique[i + 1..].iter().find(|&&b| m.get(a, b) != class).map(|&b| (a, b)));
                if let Some((a, b)) = broken {
                    return Err(ReconstructError::CoverViolation {
                        vertex: x,
                        detail: format!("neighbourhood component contains non-adjacent {a} and {b}"),
                    });
                }
            }
        }
        let cliques: Vec<Vec<usize>> = per_vertex.into_iter().flatten().collect::<BTreeSet<_>>().into_iter().collect();
        let mut vertex_to_cliques = vec![Vec::new(); n];
        for (c, clique) in cliques.iter().enumerate() {
            clique.iter().for_each(|&x| vertex_to_cliques[x].push(c));
        }
        Ok(Self { cliques, vertex_to_cliques })
    }
}

/// Class-1 clique cover of a four-class fused scheme: every vertex on exactly
/// two cliques of size `s + 1`, `2(s+1)(s^2+1)` cliques in all. `s` is half
/// the class-1 valency of vertex 0. Does not verify the scheme axioms.
pub fn compute_clique_cover_4class(m: &SchemeMatrix) -> Result<CliqueCover, ReconstructError> {
    require_classes(m, FUSED_CLASSES)?;
    let degree = m.row_class_sizes(0)[1];
    if degree == 0 || !degree.is_multiple_of(2) {
        return Err(ReconstructError::CoverViolation {
            vertex: 0,
            detail: format!("class-1 valency {degree} is not 2s"),
        });
    }
    let s = degree / 2;
    let cover = CliqueCover::from_relation(m, 1)?;
    if let Some((x, through)) = cover.vertex_to_cliques.iter().enumerate().find(|(_, c)| c.len() != 2) {
        return Err(ReconstructError::CoverViolation {
            vertex: x,
            detail: format!("lies in {} cliques, expected 2", through.len()),
        });
    }
    if let Some(clique) = cover.cliques.iter().find(|c| c.len() != s + 1) {
        return Err(ReconstructError::CoverViolation {
            vertex: clique[0],
            detail: format!("clique of size {}, expected {}", clique.len(), s + 1),
        });
    }
    let expected = 2 * (s + 1) * (s * s + 1);
    if cover.cliques.len() != expected {
        return Err(ReconstructError::CoverViolation {
            vertex: 0,
            detail: format!("{} cliques, expected {expected}", cover.cliques.len()),
        });
    }
    Ok(cover)
}

/// Distance layers of the class-1 graph around a base vertex, and the
/// point/line labels the layers induce on the cliques.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelDecomposition {
    pub base: usize,
    pub levels: Vec<Vec<usize>>,
    /// `true` for a point-clique. The lower-numbered clique through the base is a point.
    pub clique_is_point: Vec<bool>,
}

impl LevelDecomposition {
    pub fn sizes(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    /// Layers must have sizes `1, 2s, 2s^2, 2s^3, s^4` and layer `i` must be
    /// exactly the class-`i` neighbourhood of the base.
    pub fn from_base(m: &SchemeMatrix, cover: &CliqueCover, base: usize, s: usize) -> Result<Self, ReconstructError> {
        let n = m.order();
        let fail = |detail: String| ReconstructError::LevelMismatch { base, detail };
        let mut level = vec![usize::MAX; n];
        level[base] = 0;
        let mut order = vec![base];
        let mut head = 0;
        while head < order.len() {
            let x = order[head];
            head += 1;
            for y in 0..n {
                if m.get(x, y) == 1 && level[y] == usize::MAX {
                    level[y] = level[x] + 1;
                    order.push(y);
                }
            }
        }
        if order.len() != n {
            return Err(fail(format!("{} of {n} vertices reachable", order.len())));
        }
        let depth = level.iter().max().copied().unwrap_or(0);
        let mut levels = vec![Vec::new(); depth + 1];
        for (x, &l) in level.iter().enumerate() {
            levels[l].push(x);
        }
        let expected = [1, 2 * s, 2 * s * s, 2 * s * s * s, s * s * s * s];
        let sizes: Vec<usize> = levels.iter().map(Vec::len).collect();
        if sizes != expected {
            return Err(fail(format!("level sizes {sizes:?}, expected {expected:?}")));
        }
        if let Some(y) = (0..n).find(|&y| m.get(base, y) != level[y]) {
            return Err(fail(format!("vertex {y} at level {} but in class {}", level[y], m.get(base, y))));
        }

        let mut label: Vec<Option<bool>> = vec![None; cover.cliques.len()];
        label[cover.vertex_to_cliques[base][0]] = Some(true);
        for &x in &order {
            let (a, b) = (cover.vertex_to_cliques[x][0], cover.vertex_to_cliques[x][1]);
            match (label[a], label[b]) {
                (Some(la), Some(lb)) if la == lb => {
                    return Err(fail(format!("both cliques through vertex {x} get the same label")));
                }
                (Some(la), None) => label[b] = Some(!la),
                (None, Some(lb)) => label[a] = Some(!lb),
                (None, None) => return Err(fail(format!("vertex {x} reached before its cliques"))),
                _ => {}
            }
        }
        let clique_is_point = label.into_iter().map(|l| l.expect("every clique meets a reached vertex")).collect();
        Ok(Self { base, levels, clique_is_point })
    }
}

/// A quadrangle rebuilt from four-class fused data.
#[derive(Clone, Debug)]
pub struct Reconstruction4 {
    pub structure: IncidenceStructure,
    pub order: GqOrder,
    pub cover: CliqueCover,
    /// `true` for cliques that became points.
    pub clique_is_point: Vec<bool>,
    /// Clique index of each point and of each line.
    pub point_cliques: Vec<usize>,
    pub line_cliques: Vec<usize>,
    /// Vertex `x` is the flag `(point, line)`.
    pub vertex_flags: Vec<(usize, usize)>,
    pub levels: LevelDecomposition,
}

/// Two-colouring of the clique-intersection graph, breadth first from the
/// lowest-numbered uncoloured clique, which becomes a point.
pub fn two_colour_cliques(cover: &CliqueCover) -> Result<Vec<bool>, ReconstructError> {
    let mut colour: Vec<Option<bool>> = vec![None; cover.cliques.len()];
    for start in 0..cover.cliques.len() {
        if colour[start].is_some() {
            continue;
        }
        colour[start] = Some(true);
        let mut queue = VecDeque::from([start]);
        while let Some(c) = queue.pop_front() {
            let here = colour[c].expect("queued cliques are coloured");
            for &x in &cover.cliques[c] {
                for &other in &cover.vertex_to_cliques[x] {
                    if other == c {
                        continue;
                    }
                    match colour[other] {
                        None => {
                            colour[other] = Some(!here);
                            queue.push_back(other);
                        }
                        Some(there) if there == here => return Err(ReconstructError::NotBipartite(c, other)),
                        Some(_) => {}
                    }
                }
            }
        }
    }
    Ok(colour.into_iter().map(|c| c.expect("all cliques visited")).collect())
}

/// Verifies the scheme, matches it against the fused table at `s = eta_1 / 2`,
/// colours the clique cover and checks the result is a quadrangle of order
/// `(s, s)`. The level decomposition from vertex 0 must agree with the
/// colouring.
pub fn reconstruct_from_4class(m: &SchemeMatrix) -> Result<Reconstruction4, ReconstructError> {
    require_classes(m, FUSED_CLASSES)?;
    let tensor = verify_scheme(m)?;
    let s = tensor.valency(1) / 2;
    if let Some(err) = mismatch(&tensor, &fused_tensor_at(s), &format!("s = {s}")) {
        return Err(err);
    }
    let cover = compute_clique_cover_4class(m)?;
    let clique_is_point = two_colour_cliques(&cover)?;

    let mut index = vec![0; cover.cliques.len()];
    let (mut point_cliques, mut line_cliques) = (Vec::new(), Vec::new());
    for (c, &is_point) in clique_is_point.iter().enumerate() {
        let side = if is_point { &mut point_cliques } else { &mut line_cliques };
        index[c] = side.len();
        side.push(c);
    }
    let vertex_flags: Vec<(usize, usize)> = cover
        .vertex_to_cliques
        .iter()
        .map(|through| {
            let (p, l) = if clique_is_point[through[0]] { (through[0], through[1]) } else { (through[1], through[0]) };
            (index[p], index[l])
        })
        .collect();
    let structure = IncidenceStructure::new(point_cliques.len(), line_cliques.len(), vertex_flags.iter().copied())?;
    let order = verify_gq(&structure)?;
    let expected = GqOrder::new(s as u64, s as u64);
    if order != expected {
        return Err(ReconstructError::OrderMismatch { expected, found: order });
    }

    let levels = LevelDecomposition::from_base(m, &cover, 0, s as usize)?;
    if !same_split(&levels.clique_is_point, &clique_is_point) {
        return Err(ReconstructError::LevelMismatch {
            base: 0,
            detail: "level labels disagree with the colouring".into(),
        });
    }
    Ok(Reconstruction4 { structure, order, cover, clique_is_point, point_cliques, line_cliques, vertex_flags, levels })
}

/// Equal, or equal after exchanging the two labels.
pub fn same_split(a: &[bool], b: &[bool]) -> bool {
    a == b || a.iter().zip(b).all(|(x, y)| x != y)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QmReport {
    pub anti_flags: usize,
    pub far_pairs: usize,
}

/// Every non-incident point and line of the reconstruction have exactly one
/// connecting (point, line) pair; and for every class-4 pair `(x, y)` the two
/// vertices `z` with `(x,z)` in class 3 and `(z,y)` in class 1 lie one on the
/// point-clique of `y` and one on its line-clique.
pub fn check_unique_qm(m: &SchemeMatrix, rec: &Reconstruction4) -> Result<QmReport, QmError> {
    let st = &rec.structure;
    let mut anti_flags = 0;
    for point in 0..st.num_points() {
        for line in 0..st.num_lines() {
            if st.is_incident(point, line) {
                continue;
            }
            anti_flags += 1;
            let count = st
                .points_on(line)
                .iter()
                .filter(|&&q| st.lines_on(point).iter().any(|&mline| st.is_incident(q, mline)))
                .count();
            if count != 1 {
                return Err(QmError::AntiFlag { point, line, count });
            }
        }
    }

    let n = m.order();
    let far: Vec<(usize, usize)> =
        (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).filter(|&(x, y)| m.get(x, y) == 4).collect();
    let failure = far.par_iter().find_map_first(|&(x, y)| {
        let middle: Vec<usize> = (0..n).filter(|&z| m.get(x, z) == 3 && m.get(z, y) == 1).collect();
        let detail = match middle.as_slice() {
            [a, b] => {
                let on_point = |z: usize| rec.vertex_flags[z].0 == rec.vertex_flags[y].0;
                let on_line = |z: usize| rec.vertex_flags[z].1 == rec.vertex_flags[y].1;
                if (on_point(*a) && on_line(*b)) || (on_line(*a) && on_point(*b)) {
                    return None;
                }
                format!("middle vertices {a} and {b} do not split between point and line of {y}")
            }
            other => format!("{} middle vertices, expected 2", other.len()),
        };
        Some(QmError::MiddlemanSplit { x, y, detail })
    });
    match failure {
        Some(err) => Err(err),
        None => Ok(QmReport { anti_flags, far_pairs: far.len() }),
    }
}
