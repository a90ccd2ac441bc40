//! Association schemes given by a dense relation matrix: axiom checks,
//! intersection numbers, parabolics, quotients, algebraic isomorphisms and
//! the group of a thin scheme.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::SchemeError;

/// `n x n` matrix of relation indices in `0..=d`, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeMatrix {
    n: usize,
    d: usize,
    data: Vec<u8>,
}

impl SchemeMatrix {
    /// Requires entries in `0..=d` and relation 0 exactly on the diagonal.
    pub fn new(n: usize, d: usize, data: Vec<u8>) -> Result<Self, SchemeError> {
        if d > u8::MAX as usize {
            return Err(SchemeError::InvalidMatrix(format!("too many classes ({d})")));
        }
        if data.len() != n * n {
            return Err(SchemeError::InvalidMatrix(format!("expected {} entries, got {}", n * n, data.len())));
        }
        for x in 0..n {
            for y in 0..n {
                let r = data[x * n + y] as usize;
                if r > d {
                    return Err(SchemeError::InvalidMatrix(format!("entry ({x},{y}) = {r} exceeds d = {d}")));
                }
                if (r == 0) != (x == y) {
                    return Err(SchemeError::InvalidMatrix(format!(
                        "relation 0 must be the diagonal; entry ({x},{y}) = {r}"
                    )));
                }
            }
        }
        Ok(Self { n, d, data })
    }

    pub fn from_fn(n: usize, d: usize, f: impl Fn(usize, usize) -> usize + Sync) -> Result<Self, SchemeError> {
        let data: Vec<u8> =
            (0..n * n).into_par_iter().map(|idx| u8::try_from(f(idx / n, idx % n)).unwrap_or(u8::MAX)).collect();
        Self::new(n, d, data)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn num_classes(&self) -> usize {
        self.d
    }

    pub fn get(&self, x: usize, y: usize) -> usize {
        self.data[x * self.n + y] as usize
    }

    pub fn row(&self, x: usize) -> &[u8] {
        &self.data[x * self.n..(x + 1) * self.n]
    }

    /// Per-class counts in row `x`.
    pub fn row_class_sizes(&self, x: usize) -> Vec<usize> {
        let mut sizes = vec![0; self.d + 1];
        for &r in self.row(x) {
            sizes[r as usize] += 1;
        }
        sizes
    }

    /// Moves vertex `x` to `perm[x]`.
    pub fn permute_vertices(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n);
        let mut data = vec![0u8; self.n * self.n];
        for x in 0..self.n {
            for y in 0..self.n {
                data[perm[x] * self.n + perm[y]] = self.data[x * self.n + y];
            }
        }
        Self { n: self.n, d: self.d, data }
    }

    /// Renames class `k` to `map[k]`; `map` must be a permutation fixing 0.
    pub fn relabel_classes(&self, map: &[usize]) -> Result<Self, SchemeError> {
        check_class_map(map, self.d)?;
        let data = self.data.iter().map(|&r| map[r as usize] as u8).collect();
        Ok(Self { n: self.n, d: self.d, data })
    }

    /// Merges classes by `map` (a surjection onto `0..=new_d` with only 0 mapping to 0).
    pub fn merge_classes(&self, map: &[usize], new_d: usize) -> Result<Self, SchemeError> {
        let data = self.data.iter().map(|&r| map[r as usize] as u8).collect();
        Self::new(self.n, new_d, data)
    }

    /// Flips `(x, y)` to class `r`; used to build corrupted inputs.
    pub fn with_entry(&self, x: usize, y: usize, r: usize) -> Result<Self, SchemeError> {
        let mut data = self.data.clone();
        data[x * self.n + y] =
            u8::try_from(r).map_err(|_| SchemeError::InvalidMatrix(format!("class {r} out of range")))?;
        Self::new(self.n, self.d, data)
    }
}

fn check_class_map(map: &[usize], d: usize) -> Result<(), SchemeError> {
    let mut seen = vec![false; d + 1];
    let ok = map.len() == d + 1
        && map.first() == Some(&0)
        && map.iter().all(|&k| k <= d && !std::mem::replace(&mut seen[k], true));
    if ok {
        Ok(())
    } else {
        Err(SchemeError::InvalidMatrix(format!("{map:?} is not a class permutation fixing 0")))
    }
}

/// Intersection numbers `p[k][i][j]`, valencies and the transpose involution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntersectionTensor {
    d: usize,
    p: Vec<i64>,
    eta: Vec<i64>,
    star: Vec<usize>,
}

impl IntersectionTensor {
    /// Builds from a flat `(d+1)^3` array. Valencies and `star` are read off
    /// the `k = 0` slice, which must have exactly one non-zero per row.
    pub fn from_numbers(d: usize, p: Vec<i64>) -> Result<Self, SchemeError> {
        let m = d + 1;
        if p.len() != m * m * m {
            return Err(SchemeError::InvalidMatrix(format!("tensor needs {} entries", m * m * m)));
        }
        let mut eta = Vec::with_capacity(m);
        let mut star = Vec::with_capacity(m);
        for i in 0..m {
            let nonzero: Vec<usize> = (0..m).filter(|&j| p[i * m + j] != 0).collect();
            match nonzero.as_slice() {
                [j] => {
                    star.push(*j);
                    eta.push(p[i * m + j]);
                }
                _ => return Err(SchemeError::MissingClass(i)),
            }
        }
        Ok(Self { d, p, eta, star })
    }

    pub fn num_classes(&self) -> usize {
        self.d
    }

    pub fn get(&self, k: usize, i: usize, j: usize) -> i64 {
        let m = self.d + 1;
        self.p[(k * m + i) * m + j]
    }

    pub fn valency(&self, i: usize) -> i64 {
        self.eta[i]
    }

    pub fn valencies(&self) -> &[i64] {
        &self.eta
    }

    pub fn star(&self, i: usize) -> usize {
        self.star[i]
    }

    /// Number of vertices, the sum of the valencies.
    pub fn order(&self) -> i64 {
        self.eta.iter().sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.star.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn is_commutative(&self) -> bool {
        self.noncommutativity_witness().is_none()
    }

    /// First `(k, i, j)` with `p[k][i][j] != p[k][j][i]`.
    pub fn noncommutativity_witness(&self) -> Option<(usize, usize, usize)> {
        let m = self.d + 1;
        (0..m)
            .flat_map(|k| (0..m).flat_map(move |i| (i + 1..m).map(move |j| (k, i, j))))
            .find(|&(k, i, j)| self.get(k, i, j) != self.get(k, j, i))
    }

    /// Tensor after renaming class `k` to `map[k]`.
    pub fn relabel(&self, map: &[usize]) -> Result<Self, SchemeError> {
        check_class_map(map, self.d)?;
        let m = self.d + 1;
        let mut p = vec![0; m * m * m];
        for k in 0..m {
            for i in 0..m {
                for j in 0..m {
                    p[(map[k] * m + map[i]) * m + map[j]] = self.get(k, i, j);
                }
            }
        }
        Self::from_numbers(self.d, p)
    }

    /// First `(k, i, j)` where the two tensors differ, or `None` if equal.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, usize, usize)> {
        if self.d != other.d {
            return Some((0, 0, 0));
        }
        let m = self.d + 1;
        (0..m * m * m).find(|&idx| self.p[idx] != other.p[idx]).map(|idx| (idx / (m * m), (idx / m) % m, idx % m))
    }

    /// CSV `k,i,j,p` over all entries, header included.
    pub fn to_csv(&self) -> String {
        let m = self.d + 1;
        let mut out = String::from("k,i,j,p\n");
        for k in 0..m {
            for i in 0..m {
                for j in 0..m {
                    let _ = writeln!(out, "{k},{i},{j},{}", self.get(k, i, j));
                }
            }
        }
        out
    }

    /// CSV `i,eta`, header included.
    pub fn valencies_csv(&self) -> String {
        let mut out = String::from("i,eta\n");
        for (i, eta) in self.eta.iter().enumerate() {
            let _ = writeln!(out, "{i},{eta}");
        }
        out
    }
}

/// Counts `c[i][j] = |{z : (x,z) in R_i, (z,y) in R_j}|` into `buf`.
fn pair_counts(m: &SchemeMatrix, transpose: &[u8], x: usize, y: usize, buf: &mut [i64]) {
    let width = m.d + 1;
    buf.iter_mut().for_each(|c| *c = 0);
    let row = m.row(x);
    let col = &transpose[y * m.n..(y + 1) * m.n];
    for (&a, &b) in row.iter().zip(col) {
        buf[a as usize * width + b as usize] += 1;
    }
}

/// Verifies the scheme axioms exhaustively and returns the intersection numbers.
pub fn verify_scheme(m: &SchemeMatrix) -> Result<IntersectionTensor, SchemeError> {
    let n = m.n;
    let width = m.d + 1;

    let mut representative = vec![None; width];
    for x in 0..n {
        for y in 0..n {
            representative[m.get(x, y)].get_or_insert((x, y));
        }
    }
    let representative: Vec<(usize, usize)> = representative
        .into_iter()
        .enumerate()
        .map(|(k, r)| r.ok_or(SchemeError::MissingClass(k)))
        .collect::<Result<_, _>>()?;

    let star: Vec<usize> = representative.iter().map(|&(x, y)| m.get(y, x)).collect();
    for x in 0..n {
        for y in 0..n {
            let k = m.get(x, y);
            if m.get(y, x) != star[k] {
                return Err(SchemeError::NotClosedUnderTranspose { class: k, x, y });
            }
        }
    }

    let mut transpose = vec![0u8; n * n];
    for x in 0..n {
        for y in 0..n {
            transpose[y * n + x] = m.data[x * n + y];
        }
    }

    let mut p = vec![0i64; width * width * width];
    for (k, &(x, y)) in representative.iter().enumerate() {
        pair_counts(m, &transpose, x, y, &mut p[k * width * width..(k + 1) * width * width]);
    }

    let failure = (0..n).into_par_iter().find_map_first(|x| {
        let mut buf = vec![0i64; width * width];
        (0..n).find_map(|y| {
            let k = m.get(x, y);
            pair_counts(m, &transpose, x, y, &mut buf);
            let expected = &p[k * width * width..(k + 1) * width * width];
            buf.iter().zip(expected).position(|(a, b)| a != b).map(|idx| SchemeError::NotAScheme {
                k,
                i: idx / width,
                j: idx % width,
                x,
                y,
                expected: expected[idx],
                found: buf[idx],
            })
        })
    });
    if let Some(err) = failure {
        return Err(err);
    }
    IntersectionTensor::from_numbers(m.d, p)
}

/// Which of the three standard identities failed, at which indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdentityViolation {
    /// `p[k][i][j] = p[k*][j*][i*]`
    Transpose { k: usize, i: usize, j: usize },
    /// `eta_k p[k][i][j] = eta_i p[i*][j][k*]`
    Rotation { k: usize, i: usize, j: usize },
    /// `sum_j p[k][i][j] = eta_i`
    RowSum { k: usize, i: usize },
}

/// Post-hoc check of the transpose, rotation and row-sum identities.
pub fn check_identities(t: &IntersectionTensor) -> Result<(), IdentityViolation> {
    let m = t.d + 1;
    for k in 0..m {
        for i in 0..m {
            for j in 0..m {
                if t.get(k, i, j) != t.get(t.star(k), t.star(j), t.star(i)) {
                    return Err(IdentityViolation::Transpose { k, i, j });
                }
                if t.valency(k) * t.get(k, i, j) != t.valency(i) * t.get(t.star(i), j, t.star(k)) {
                    return Err(IdentityViolation::Rotation { k, i, j });
                }
            }
            if (0..m).map(|j| t.get(k, i, j)).sum::<i64>() != t.valency(i) {
                return Err(IdentityViolation::RowSum { k, i });
            }
        }
    }
    Ok(())
}

/// A union of classes that is an equivalence relation, with its blocks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Parabolic {
    pub classes: Vec<usize>,
    pub blocks: Vec<Vec<usize>>,
    pub trivial: bool,
}

/// Whether the class union is closed under transpose and composition, read
/// from the intersection numbers alone.
pub fn is_parabolic_subset(t: &IntersectionTensor, classes: &[usize]) -> bool {
    let m = t.d + 1;
    let mut member = vec![false; m];
    classes.iter().for_each(|&c| member[c] = true);
    if !member[0] || classes.iter().any(|&c| !member[t.star(c)]) {
        return false;
    }
    classes.iter().all(|&i| classes.iter().all(|&j| (0..m).all(|k| member[k] || t.get(k, i, j) == 0)))
}

/// Connected components of the class union, each sorted, ordered by least
/// member. Fails unless the union is an equivalence relation on the data.
pub fn equivalence_blocks(m: &SchemeMatrix, classes: &[usize]) -> Result<Vec<Vec<usize>>, SchemeError> {
    let mut member = vec![false; m.d + 1];
    classes.iter().filter(|&&c| c <= m.d).for_each(|&c| member[c] = true);
    let not_parabolic = || SchemeError::NotParabolic(classes.to_vec());
    if !member[0] {
        return Err(not_parabolic());
    }
    let mut block_of = vec![usize::MAX; m.n];
    let mut blocks = Vec::new();
    for start in 0..m.n {
        if block_of[start] != usize::MAX {
            continue;
        }
        let id = blocks.len();
        let mut block = vec![start];
        block_of[start] = id;
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for y in 0..m.n {
                if member[m.get(x, y)] && block_of[y] == usize::MAX {
                    block_of[y] = id;
                    block.push(y);
                    queue.push_back(y);
                }
            }
        }
        block.sort_unstable();
        blocks.push(block);
    }
    for x in 0..m.n {
        for y in 0..m.n {
            if member[m.get(x, y)] != (block_of[x] == block_of[y]) {
                return Err(not_parabolic());
            }
        }
    }
    Ok(blocks)
}

/// All parabolics, by exhaustive search over the `2^d` class subsets that
/// contain 0. Each candidate is confirmed on the data.
pub fn find_parabolics(t: &IntersectionTensor, m: &SchemeMatrix) -> Result<Vec<Parabolic>, SchemeError> {
    let d = t.d;
    let mut found = Vec::new();
    for mask in 0u32..(1 << d) {
        let classes: Vec<usize> = std::iter::once(0).chain((1..=d).filter(|c| mask >> (c - 1) & 1 == 1)).collect();
        let by_numbers = is_parabolic_subset(t, &classes);
        let by_data = equivalence_blocks(m, &classes);
        match (by_numbers, by_data) {
            (true, Ok(blocks)) => {
                let trivial = classes.len() == 1 || classes.len() == d + 1;
                found.push(Parabolic { classes, blocks, trivial });
            }
            (false, Err(_)) => {}
            _ => return Err(SchemeError::NotParabolic(classes)),
        }
    }
    found.sort_by(|a, b| a.classes.len().cmp(&b.classes.len()).then_with(|| a.classes.cmp(&b.classes)));
    Ok(found)
}

/// Scheme on the blocks of a parabolic. Class `c` of the quotient collects
/// the original classes `relations[c]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientScheme {
    pub matrix: SchemeMatrix,
    pub relations: Vec<Vec<usize>>,
    pub blocks: Vec<Vec<usize>>,
}

/// Groups block pairs by the set of original classes joining their members.
/// Those sets must partition the classes.
pub fn quotient_scheme(m: &SchemeMatrix, e: &Parabolic) -> Result<QuotientScheme, SchemeError> {
    let blocks = &e.blocks;
    let nb = blocks.len();
    let mut signature = vec![0u64; nb * nb];
    for (a, ba) in blocks.iter().enumerate() {
        for (b, bb) in blocks.iter().enumerate() {
            let mut sig = 0u64;
            for &x in ba {
                for &y in bb {
                    sig |= 1 << m.get(x, y);
                }
            }
            signature[a * nb + b] = sig;
        }
    }
    // first block pair carrying each distinct signature
    let mut witness: BTreeMap<u64, (usize, usize)> = BTreeMap::new();
    for a in 0..nb {
        for b in 0..nb {
            witness.entry(signature[a * nb + b]).or_insert((a, b));
        }
    }
    let sigs: Vec<u64> = witness.keys().copied().collect();
    for (idx, &s1) in sigs.iter().enumerate() {
        if let Some(&s2) = sigs[idx + 1..].iter().find(|&&s2| s1 & s2 != 0) {
            let (a, b) = witness[&s1].max(witness[&s2]);
            return Err(SchemeError::QuotientIllDefined(a, b));
        }
    }
    let mut ordered = sigs;
    ordered.sort_by_key(|s| s.trailing_zeros());
    let class_of: BTreeMap<u64, usize> = ordered.iter().enumerate().map(|(c, &s)| (s, c)).collect();
    let relations = ordered.iter().map(|&s| (0..64).filter(|c| s >> c & 1 == 1).collect()).collect();
    let matrix = SchemeMatrix::from_fn(nb, ordered.len() - 1, |a, b| class_of[&signature[a * nb + b]])?;
    Ok(QuotientScheme { matrix, relations, blocks: blocks.clone() })
}

/// All permutations `sigma` of the classes, fixing 0, with
/// `b[sigma k][sigma i][sigma j] = a[k][i][j]` for all indices.
pub fn find_algebraic_isomorphisms(a: &IntersectionTensor, b: &IntersectionTensor) -> Vec<Vec<usize>> {
    let d = a.d;
    if b.d != d {
        return Vec::new();
    }
    let fingerprint = |t: &IntersectionTensor, i: usize| (t.valency(i), t.star(i) == i);
    let mut a_prints: Vec<_> = (0..=d).map(|i| fingerprint(a, i)).collect();
    let mut b_prints: Vec<_> = (0..=d).map(|i| fingerprint(b, i)).collect();
    a_prints.sort_unstable();
    b_prints.sort_unstable();
    if a_prints != b_prints {
        return Vec::new();
    }
    let mut sigma = vec![usize::MAX; d + 1];
    let mut used = vec![false; d + 1];
    sigma[0] = 0;
    used[0] = true;
    let mut out = Vec::new();
    extend_isomorphism(a, b, 1, &mut sigma, &mut used, &mut out);
    out
}

fn extend_isomorphism(
    a: &IntersectionTensor,
    b: &IntersectionTensor,
    next: usize,
    sigma: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Vec<Vec<usize>>,
) {
    let d = a.d;
    if next > d {
        out.push(sigma.clone());
        return;
    }
    for image in 1..=d {
        if used[image] || a.valency(next) != b.valency(image) || (a.star(next) == next) != (b.star(image) == image) {
            continue;
        }
        sigma[next] = image;
        used[image] = true;
        // every triple among assigned classes that involves `next`
        let consistent = (0..=next).all(|x| {
            (0..=next).all(|y| {
                [(next, x, y), (x, next, y), (x, y, next)]
                    .iter()
                    .all(|&(k, i, j)| a.get(k, i, j) == b.get(sigma[k], sigma[i], sigma[j]))
            })
        });
        if consistent {
            extend_isomorphism(a, b, next + 1, sigma, used, out);
        }
        used[image] = false;
        sigma[next] = usize::MAX;
    }
}

/// Multiplication table of a thin scheme: `R_i R_j = R_{product(i, j)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThinGroup {
    table: Vec<usize>,
    size: usize,
}

impl ThinGroup {
    pub fn order(&self) -> usize {
        self.size
    }

    pub fn product(&self, i: usize, j: usize) -> usize {
        self.table[i * self.size + j]
    }

    pub fn inverse(&self, i: usize) -> usize {
        (0..self.size).find(|&j| self.product(i, j) == 0).expect("group element has an inverse")
    }

    pub fn element_order(&self, i: usize) -> usize {
        let mut x = i;
        let mut k = 1;
        while x != 0 {
            x = self.product(x, i);
            k += 1;
        }
        k
    }

    /// Some `(r, f)` with `r` of order 4, `f` an involution outside `<r>` and
    /// `f r f = r^-1`, when the group has order 8. The search is over
    /// ascending `r` then ascending `f`.
    pub fn dihedral_generators(&self) -> Option<(usize, usize)> {
        if self.size != 8 {
            return None;
        }
        (1..8).filter(|&r| self.element_order(r) == 4).find_map(|r| {
            let r2 = self.product(r, r);
            let r3 = self.product(r2, r);
            (1..8)
                .filter(|&f| self.element_order(f) == 2 && ![r, r2, r3].contains(&f))
                .find(|&f| self.product(self.product(f, r), f) == self.inverse(r))
                .map(|f| (r, f))
        })
    }

    pub fn is_dihedral_of_order_8(&self) -> bool {
        self.dihedral_generators().is_some()
    }
}

/// The complex-product group of a thin scheme.
pub fn thin_group_table(t: &IntersectionTensor) -> Result<ThinGroup, SchemeError> {
    if let Some(class) = (0..=t.d).find(|&i| t.valency(i) != 1) {
        return Err(SchemeError::NotThin { class, valency: t.valency(class) });
    }
    let size = t.d + 1;
    let mut table = vec![0; size * size];
    for i in 0..size {
        for j in 0..size {
            // exactly one k has p[k][i][j] = 1 in a thin scheme
            table[i * size + j] = (0..size)
                .find(|&k| t.get(k, i, j) == 1)
                .ok_or(SchemeError::NotThin { class: i, valency: t.valency(i) })?;
        }
    }
    Ok(ThinGroup { table, size })
}
