//! Closed-form intersection numbers of the flag scheme and of its symmetric
//! four-class fusion, plus the order-12 symmetry group on index triplets.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::TableError;
use crate::flags::{flag_delta, flag_star};
use crate::poly::BivariatePoly;
use crate::scheme::IntersectionTensor;

/// Valencies `eta_0..eta_7` of the flag scheme.
const FLAG_VALENCIES: [&str; 8] = ["1", "t", "s", "st", "st", "st^2", "s^2t", "s^2t^2"];

/// `FLAG_NUMBERS[k-1][i][j]` is `p[k][i][j]` for `k = 1..=7`.
#[rustfmt::skip]
const FLAG_NUMBERS: [[[&str; 8]; 8]; 7] = [
    [
        ["0", "1", "0", "0", "0", "0", "0", "0"],
        ["1", "t-1", "0", "0", "0", "0", "0", "0"],
        ["0", "0", "0", "s", "0", "0", "0", "0"],
        ["0", "0", "0", "0", "0", "st", "0", "0"],
        ["0", "0", "s", "s(t-1)", "0", "0", "0", "0"],
        ["0", "0", "0", "0", "st", "st(t-1)", "0", "0"],
        ["0", "0", "0", "0", "0", "0", "0", "s^2t"],
        ["0", "0", "0", "0", "0", "0", "s^2t", "s^2t(t-1)"],
    ],
    [
        ["0", "0", "1", "0", "0", "0", "0", "0"],
        ["0", "0", "0", "0", "t", "0", "0", "0"],
        ["1", "0", "s-1", "0", "0", "0", "0", "0"],
        ["0", "t", "0", "0", "t(s-1)", "0", "0", "0"],
        ["0", "0", "0", "0", "0", "0", "st", "0"],
        ["0", "0", "0", "0", "0", "0", "0", "st^2"],
        ["0", "0", "0", "st", "0", "0", "st(s-1)", "0"],
        ["0", "0", "0", "0", "0", "st^2", "0", "st^2(s-1)"],
    ],
    [
        ["0", "0", "0", "1", "0", "0", "0", "0"],
        ["0", "0", "0", "0", "0", "t", "0", "0"],
        ["0", "1", "0", "s-1", "0", "0", "0", "0"],
        ["1", "t-1", "0", "0", "0", "t(s-1)", "0", "0"],
        ["0", "0", "0", "0", "0", "0", "0", "st"],
        ["0", "0", "0", "0", "0", "0", "st", "st(t-1)"],
        ["0", "0", "s", "s(t-1)", "0", "0", "0", "st(s-1)"],
        ["0", "0", "0", "0", "st", "st(t-1)", "st(s-1)", "st(s-1)(t-1)"],
    ],
    [
        ["0", "0", "0", "0", "1", "0", "0", "0"],
        ["0", "0", "1", "0", "t-1", "0", "0", "0"],
        ["0", "0", "0", "0", "0", "0", "s", "0"],
        ["0", "0", "0", "0", "0", "0", "0", "st"],
        ["1", "0", "s-1", "0", "0", "0", "s(t-1)", "0"],
        ["0", "t", "0", "0", "t(s-1)", "0", "0", "st(t-1)"],
        ["0", "0", "0", "0", "0", "st", "0", "st(s-1)"],
        ["0", "0", "0", "st", "0", "st(t-1)", "st(s-1)", "st(s-1)(t-1)"],
    ],
    [
        ["0", "0", "0", "0", "0", "1", "0", "0"],
        ["0", "0", "0", "1", "0", "t-1", "0", "0"],
        ["0", "0", "0", "0", "0", "0", "0", "s"],
        ["0", "0", "0", "0", "0", "0", "s", "s(t-1)"],
        ["0", "1", "0", "s-1", "0", "0", "0", "s(t-1)"],
        ["1", "t-1", "0", "0", "0", "t(s-1)", "s(t-1)", "s(t-1)^2"],
        ["0", "0", "0", "0", "s", "s(t-1)", "s(s-1)", "s(s-1)(t-1)"],
        ["0", "0", "s", "s(t-1)", "s(t-1)", "s(t-1)^2", "s(s-1)(t-1)", "s(s-1)(t^2-t+1)"],
    ],
    [
        ["0", "0", "0", "0", "0", "0", "1", "0"],
        ["0", "0", "0", "0", "0", "0", "0", "t"],
        ["0", "0", "0", "0", "1", "0", "s-1", "0"],
        ["0", "0", "1", "0", "t-1", "0", "0", "t(s-1)"],
        ["0", "0", "0", "0", "0", "t", "0", "t(s-1)"],
        ["0", "0", "0", "t", "0", "t(t-1)", "t(s-1)", "t(s-1)(t-1)"],
        ["1", "0", "s-1", "0", "0", "t(s-1)", "s(t-1)", "t(s-1)^2"],
        ["0", "t", "0", "t(s-1)", "t(s-1)", "t(s-1)(t-1)", "t(s-1)^2", "t(t-1)(s^2-s+1)"],
    ],
    [
        ["0", "0", "0", "0", "0", "0", "0", "1"],
        ["0", "0", "0", "0", "0", "0", "1", "t-1"],
        ["0", "0", "0", "0", "0", "1", "0", "s-1"],
        ["0", "0", "0", "1", "0", "t-1", "s-1", "(s-1)(t-1)"],
        ["0", "0", "0", "0", "1", "t-1", "s-1", "(s-1)(t-1)"],
        ["0", "0", "1", "t-1", "t-1", "(t-1)^2", "(s-1)(t-1)", "(s-1)(t^2-t+1)"],
        ["0", "1", "0", "s-1", "s-1", "(s-1)(t-1)", "(s-1)^2", "(s^2-s+1)(t-1)"],
        ["1", "t-1", "s-1", "(s-1)(t-1)", "(s-1)(t-1)", "(s-1)(t^2-t+1)", "(s^2-s+1)(t-1)",
         "1 - s + s^2 - t - s^2t + t^2 - st^2 + s^2t^2"],
    ],
];

/// Valencies of the four-class fusion, in `s` only.
const FUSED_VALENCIES: [&str; 5] = ["1", "2s", "2s^2", "2s^3", "s^4"];

/// `FUSED_NUMBERS[k-1][i][j]` is the fused `p[k][i][j]` for `k = 1..=4`.
#[rustfmt::skip]
const FUSED_NUMBERS: [[[&str; 5]; 5]; 4] = [
    [
        ["0", "1", "0", "0", "0"],
        ["1", "s-1", "s", "0", "0"],
        ["0", "s", "s(s-1)", "s^2", "0"],
        ["0", "0", "s^2", "s^2(s-1)", "s^3"],
        ["0", "0", "0", "s^3", "s^3(s-1)"],
    ],
    [
        ["0", "0", "1", "0", "0"],
        ["0", "1", "s-1", "s", "0"],
        ["1", "s-1", "0", "s(s-1)", "s^2"],
        ["0", "s", "s(s-1)", "s^2", "2s^2(s-1)"],
        ["0", "0", "s^2", "2s^2(s-1)", "s^2(s-1)^2"],
    ],
    [
        ["0", "0", "0", "1", "0"],
        ["0", "0", "1", "s-1", "s"],
        ["0", "1", "s-1", "s", "2s(s-1)"],
        ["1", "s-1", "s", "4s(s-1)", "2s(s-1)^2"],
        ["0", "s", "2s(s-1)", "2s(s-1)^2", "s(s-1)(s^2-s+1)"],
    ],
    [
        ["0", "0", "0", "0", "1"],
        ["0", "0", "0", "2", "2(s-1)"],
        ["0", "0", "2", "4(s-1)", "2(s-1)^2"],
        ["0", "2", "4(s-1)", "4(s-1)^2", "2(s-1)(s^2-s+1)"],
        ["1", "2(s-1)", "2(s-1)^2", "2(s-1)(s^2-s+1)", "s^4-2s^3+2s^2-2s+1"],
    ],
];

/// Flag classes merged into each class of the four-class fusion.
pub const FOUR_CLASS_BLOCKS: [&[usize]; 5] = [&[0], &[1, 2], &[3, 4], &[5, 6], &[7]];

/// Exact table of intersection numbers with polynomial entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyTable {
    d: usize,
    eta: Vec<BivariatePoly>,
    star: Vec<usize>,
    p: Vec<BivariatePoly>,
}

fn parse_entry(text: &str) -> Result<BivariatePoly, TableError> {
    text.parse().map_err(|source| TableError::BadEntry { entry: text.to_string(), source })
}

impl PolyTable {
    fn from_strings<const W: usize>(
        valencies: &[&str; W],
        numbers: &[[[&str; W]; W]],
        star: impl Fn(usize) -> usize,
    ) -> Result<Self, TableError> {
        let eta: Vec<BivariatePoly> = valencies.iter().map(|e| parse_entry(e)).collect::<Result<_, _>>()?;
        let star: Vec<usize> = (0..W).map(star).collect();
        let mut p = Vec::with_capacity(W * W * W);
        for i in 0..W {
            for j in 0..W {
                p.push(if j == star[i] { eta[i].clone() } else { BivariatePoly::zero() });
            }
        }
        for slice in numbers {
            for row in slice {
                for entry in row {
                    p.push(parse_entry(entry)?);
                }
            }
        }
        Ok(Self { d: W - 1, eta, star, p })
    }

    pub fn num_classes(&self) -> usize {
        self.d
    }

    pub fn get(&self, k: usize, i: usize, j: usize) -> &BivariatePoly {
        let m = self.d + 1;
        &self.p[(k * m + i) * m + j]
    }

    pub fn valency(&self, i: usize) -> &BivariatePoly {
        &self.eta[i]
    }

    pub fn star(&self, i: usize) -> usize {
        self.star[i]
    }

    /// Numeric tensor at `(s, t)`.
    pub fn evaluate(&self, s: i64, t: i64) -> IntersectionTensor {
        let p = self.p.iter().map(|f| f.eval(s, t)).collect();
        IntersectionTensor::from_numbers(self.d, p).expect("tables have positive valencies for s, t >= 1")
    }
}

/// The flag-scheme table, parsed once.
pub fn flag_table() -> &'static PolyTable {
    static TABLE: OnceLock<PolyTable> = OnceLock::new();
    TABLE.get_or_init(|| PolyTable::from_strings(&FLAG_VALENCIES, &FLAG_NUMBERS, flag_star).expect("flag table parses"))
}

/// The four-class fusion table (`t = s`), parsed once.
pub fn fused_table() -> &'static PolyTable {
    static TABLE: OnceLock<PolyTable> = OnceLock::new();
    TABLE.get_or_init(|| PolyTable::from_strings(&FUSED_VALENCIES, &FUSED_NUMBERS, |i| i).expect("fused table parses"))
}

pub fn eta_poly(i: usize) -> BivariatePoly {
    flag_table().valency(i).clone()
}

pub fn p_poly(k: usize, i: usize, j: usize) -> BivariatePoly {
    flag_table().get(k, i, j).clone()
}

pub fn fused_p_poly(k: usize, i: usize, j: usize) -> BivariatePoly {
    fused_table().get(k, i, j).clone()
}

/// Numeric flag-scheme tensor at `(s, t)`.
pub fn tensor_at(s: i64, t: i64) -> IntersectionTensor {
    flag_table().evaluate(s, t)
}

/// Numeric four-class tensor at `s`.
pub fn fused_tensor_at(s: i64) -> IntersectionTensor {
    fused_table().evaluate(s, s)
}

/// `(k, i, j)`, each in `1..=7`.
pub type Triplet = (usize, usize, usize);

/// Elements of the group generated by the rotation `I`, the reversal `S` and
/// the point-line swap `D`, written as words applied right to left.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum TripletMap {
    Id,
    I,
    I2,
    S,
    IS,
    I2S,
    D,
    ID,
    I2D,
    SD,
    ISD,
    I2SD,
}

/// Which valency ratio a map multiplies by: `eta_num / eta_den`, both taken
/// at indices of the source triplet.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Ratio {
    One,
    KOverI,
    KOverJ,
}

impl TripletMap {
    pub const ALL: [TripletMap; 12] = [
        Self::Id,
        Self::I,
        Self::I2,
        Self::S,
        Self::IS,
        Self::I2S,
        Self::D,
        Self::ID,
        Self::I2D,
        Self::SD,
        Self::ISD,
        Self::I2SD,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Id => "id",
            Self::I => "I",
            Self::I2 => "I^2",
            Self::S => "S",
            Self::IS => "IS",
            Self::I2S => "I^2S",
            Self::D => "D",
            Self::ID => "ID",
            Self::I2D => "I^2D",
            Self::SD => "SD",
            Self::ISD => "ISD",
            Self::I2SD => "I^2SD",
        }
    }

    /// The word over `I`, `S`, `D`, leftmost letter applied last.
    pub fn word(self) -> &'static str {
        match self {
            Self::Id => "",
            Self::I => "I",
            Self::I2 => "II",
            Self::S => "S",
            Self::IS => "IS",
            Self::I2S => "IIS",
            Self::D => "D",
            Self::ID => "ID",
            Self::I2D => "IID",
            Self::SD => "SD",
            Self::ISD => "ISD",
            Self::I2SD => "IISD",
        }
    }

    fn swaps_points_and_lines(self) -> bool {
        matches!(self, Self::D | Self::ID | Self::I2D | Self::SD | Self::ISD | Self::I2SD)
    }

    fn without_swap(self) -> Self {
        match self {
            Self::D => Self::Id,
            Self::ID => Self::I,
            Self::I2D => Self::I2,
            Self::SD => Self::S,
            Self::ISD => Self::IS,
            Self::I2SD => Self::I2S,
            other => other,
        }
    }

    fn ratio(self) -> Ratio {
        match self.without_swap() {
            Self::I | Self::I2S => Ratio::KOverI,
            Self::I2 | Self::IS => Ratio::KOverJ,
            _ => Ratio::One,
        }
    }

    /// Image of a triplet under this element.
    pub fn apply(self, (k, i, j): Triplet) -> Triplet {
        let (k, i, j) =
            if self.swaps_points_and_lines() { (flag_delta(k), flag_delta(i), flag_delta(j)) } else { (k, i, j) };
        let st = flag_star;
        match self.without_swap() {
            Self::Id => (k, i, j),
            Self::I => (st(i), j, st(k)),
            Self::I2 => (st(j), st(k), i),
            Self::S => (st(k), st(j), st(i)),
            Self::IS => (j, st(i), k),
            Self::I2S => (i, k, st(j)),
            _ => unreachable!("without_swap returns a swap-free element"),
        }
    }

    /// Checks `eta_den * p(image) = eta_num * f`, where `f` is `p(tr)` with
    /// `s` and `t` exchanged for the swapping elements.
    pub fn scaling_holds(self, table: &PolyTable, tr: Triplet) -> bool {
        let swap = self.swaps_points_and_lines();
        let idx = |x: usize| if swap { flag_delta(x) } else { x };
        let (k, i, j) = tr;
        let source = table.get(k, i, j);
        let f = if swap { source.swap_st() } else { source.clone() };
        let image = self.apply(tr);
        let lhs_p = table.get(image.0, image.1, image.2);
        let (num, den) = match self.ratio() {
            Ratio::One => return *lhs_p == f,
            Ratio::KOverI => (table.valency(idx(k)), table.valency(idx(i))),
            Ratio::KOverJ => (table.valency(idx(k)), table.valency(idx(j))),
        };
        den * lhs_p == num * &f
    }
}

/// Applies a word over `I`, `S`, `D` right to left using the generator rules alone.
pub fn apply_word(word: &str, tr: Triplet) -> Triplet {
    word.chars().rev().fold(tr, |(k, i, j), letter| match letter {
        'I' => (flag_star(i), j, flag_star(k)),
        'S' => (flag_star(k), flag_star(j), flag_star(i)),
        'D' => (flag_delta(k), flag_delta(i), flag_delta(j)),
        other => panic!("unknown generator {other}"),
    })
}

/// Orbit representatives, one per orbit of the group on `{1..7}^3`.
pub const ORBIT_REPRESENTATIVES: [Triplet; 44] = [
    (1, 1, 1),
    (1, 1, 2),
    (1, 1, 3),
    (1, 1, 5),
    (1, 1, 6),
    (1, 1, 7),
    (1, 2, 3),
    (1, 2, 4),
    (1, 2, 5),
    (1, 2, 7),
    (1, 3, 3),
    (1, 3, 4),
    (1, 3, 5),
    (1, 3, 6),
    (1, 3, 7),
    (1, 4, 3),
    (1, 4, 5),
    (1, 4, 6),
    (1, 4, 7),
    (1, 5, 5),
    (1, 5, 6),
    (1, 5, 7),
    (1, 6, 6),
    (1, 6, 7),
    (1, 7, 7),
    (3, 3, 3),
    (3, 3, 5),
    (3, 3, 6),
    (3, 3, 7),
    (3, 4, 4),
    (3, 4, 5),
    (3, 4, 7),
    (3, 5, 5),
    (3, 5, 6),
    (3, 5, 7),
    (3, 6, 5),
    (3, 6, 7),
    (3, 7, 7),
    (5, 5, 5),
    (5, 5, 6),
    (5, 5, 7),
    (5, 6, 7),
    (5, 7, 7),
    (7, 7, 7),
];

fn all_triplets() -> impl Iterator<Item = Triplet> {
    (1..=7).flat_map(|k| (1..=7).flat_map(move |i| (1..=7).map(move |j| (k, i, j))))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitReport {
    pub group_order: usize,
    pub orbits: usize,
    pub triplets_covered: usize,
    pub scaling_checks: usize,
}

/// Confirms that the twelve maps form a group generated by `I`, `S`, `D`,
/// that the orbits of the representatives tile all triplets, and that every
/// map transforms intersection numbers as prescribed.
pub fn verify_triplet_orbits() -> Result<OrbitReport, TableError> {
    let as_vector = |f: &dyn Fn(Triplet) -> Triplet| all_triplets().map(f).collect::<Vec<_>>();

    for g in TripletMap::ALL {
        if as_vector(&|tr| g.apply(tr)) != as_vector(&|tr| apply_word(g.word(), tr)) {
            return Err(TableError::OrbitMismatch(format!("{} differs from its word", g.name())));
        }
    }
    // closure of the generators under composition
    let mut group: BTreeSet<Vec<Triplet>> = BTreeSet::new();
    let mut frontier = vec![as_vector(&|tr| tr)];
    while let Some(element) = frontier.pop() {
        if !group.insert(element.clone()) {
            continue;
        }
        for letter in ["I", "S", "D"] {
            frontier.push(element.iter().map(|&tr| apply_word(letter, tr)).collect());
        }
    }
    let listed: BTreeSet<Vec<Triplet>> = TripletMap::ALL.iter().map(|&g| as_vector(&|tr| g.apply(tr))).collect();
    if group != listed {
        return Err(TableError::OrbitMismatch(format!(
            "generated group has {} elements, listed maps give {}",
            group.len(),
            listed.len()
        )));
    }

    let mut covered = BTreeSet::new();
    for &rep in &ORBIT_REPRESENTATIVES {
        let orbit: BTreeSet<Triplet> = TripletMap::ALL.iter().map(|g| g.apply(rep)).collect();
        if let Some(tr) = orbit.iter().find(|tr| covered.contains(*tr)) {
            return Err(TableError::OrbitMismatch(format!("{tr:?} lies in two orbits (via {rep:?})")));
        }
        covered.extend(orbit);
    }
    if let Some(tr) = all_triplets().find(|tr| !covered.contains(tr)) {
        return Err(TableError::OrbitMismatch(format!("{tr:?} is in no orbit")));
    }

    let table = flag_table();
    let mut checks = 0;
    for g in TripletMap::ALL {
        for tr in all_triplets() {
            if !g.scaling_holds(table, tr) {
                return Err(TableError::ScalingMismatch { element: g.name(), triplet: tr });
            }
            checks += 1;
        }
    }
    Ok(OrbitReport {
        group_order: group.len(),
        orbits: ORBIT_REPRESENTATIVES.len(),
        triplets_covered: covered.len(),
        scaling_checks: checks,
    })
}

/// Transpose, rotation and row-sum identities as exact polynomial equalities.
pub fn verify_identities(table: &PolyTable) -> Result<usize, TableError> {
    let m = table.num_classes() + 1;
    let st = |x| table.star(x);
    let mut checks = 0;
    for k in 0..m {
        for i in 0..m {
            for j in 0..m {
                if table.get(k, i, j) != table.get(st(k), st(j), st(i)) {
                    return Err(TableError::IdentityFailure { identity: "transpose", indices: (k, i, j) });
                }
                if table.valency(k) * table.get(k, i, j) != table.valency(i) * table.get(st(i), j, st(k)) {
                    return Err(TableError::IdentityFailure { identity: "rotation", indices: (k, i, j) });
                }
                checks += 2;
            }
            let row: BivariatePoly = (0..m).map(|j| table.get(k, i, j)).sum();
            if row != *table.valency(i) {
                return Err(TableError::IdentityFailure { identity: "row-sum", indices: (k, i, 0) });
            }
            checks += 1;
        }
    }
    Ok(checks)
}

/// Every fused entry equals the block sum of flag entries (with `t = s`)
/// from each representative of its class; the fused valencies are the block
/// sums of the flag valencies.
pub fn verify_fused_table() -> Result<usize, TableError> {
    let flag = flag_table();
    let fused = fused_table();
    let mut checks = 0;
    for (k, block_k) in FOUR_CLASS_BLOCKS.iter().enumerate() {
        let eta: BivariatePoly = block_k.iter().map(|&c| flag.valency(c)).sum();
        if eta.with_t_eq_s() != *fused.valency(k) {
            return Err(TableError::FusedMismatch { k, i: 0, j: 0, representative: block_k[0] });
        }
        for &representative in block_k.iter() {
            for (i, block_i) in FOUR_CLASS_BLOCKS.iter().enumerate() {
                for (j, block_j) in FOUR_CLASS_BLOCKS.iter().enumerate() {
                    let sum: BivariatePoly = block_i
                        .iter()
                        .flat_map(|&a| block_j.iter().map(move |&b| flag.get(representative, a, b)))
                        .sum();
                    if sum.with_t_eq_s() != *fused.get(k, i, j) {
                        return Err(TableError::FusedMismatch { k, i, j, representative });
                    }
                    checks += 1;
                }
            }
        }
    }
    Ok(checks)
}
