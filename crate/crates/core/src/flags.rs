//! The seven-class relation on the flags of a generalized quadrangle.

use serde::Serialize;

use crate::error::GqError;
use crate::gq::{dualize, verify_gq, GqOrder, IncidenceStructure};
use crate::scheme::SchemeMatrix;

pub const FLAG_CLASSES: usize = 7;

/// An incident `(point, line)` pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Flag {
    pub point: usize,
    pub line: usize,
}

/// Transpose involution on flag classes: 3 and 4 swap, all others fixed.
pub fn flag_star(class: usize) -> usize {
    match class {
        3 => 4,
        4 => 3,
        c => c,
    }
}

/// Point/line interchange on flag classes: 1-2, 3-4, 5-6 swap; 0 and 7 fixed.
pub fn flag_delta(class: usize) -> usize {
    match class {
        0 | 7 => class,
        c if c % 2 == 1 => c + 1,
        c => c - 1,
    }
}

pub fn enumerate_flags(structure: &IncidenceStructure) -> Vec<Flag> {
    structure.incidence().iter().map(|&(point, line)| Flag { point, line }).collect()
}

/// Joining line of two points and meeting point of two lines, as dense tables.
pub struct FlagClassifier<'a> {
    structure: &'a IncidenceStructure,
    join: Vec<Option<u32>>,
    meet: Vec<Option<u32>>,
}

impl<'a> FlagClassifier<'a> {
    pub fn new(structure: &'a IncidenceStructure) -> Self {
        let np = structure.num_points();
        let nl = structure.num_lines();
        let mut join = vec![None; np * np];
        for line in 0..nl {
            for &p in structure.points_on(line) {
                for &q in structure.points_on(line) {
                    join[p * np + q] = Some(line as u32);
                }
            }
        }
        let mut meet = vec![None; nl * nl];
        for p in 0..np {
            for &a in structure.lines_on(p) {
                for &b in structure.lines_on(p) {
                    meet[a * nl + b] = Some(p as u32);
                }
            }
        }
        Self { structure, join, meet }
    }

    /// First match in the order: equal, same point, same line, points
    /// collinear on the first line, on the second line, on a third line,
    /// lines meeting, neither.
    pub fn classify(&self, f1: Flag, f2: Flag) -> usize {
        if f1 == f2 {
            return 0;
        }
        if f1.point == f2.point {
            return 1;
        }
        if f1.line == f2.line {
            return 2;
        }
        let np = self.structure.num_points();
        match self.join[f1.point * np + f2.point] {
            Some(x) if x as usize == f1.line => 3,
            Some(x) if x as usize == f2.line => 4,
            Some(_) => 5,
            None if self.meet[f1.line * self.structure.num_lines() + f2.line].is_some() => 6,
            None => 7,
        }
    }
}

pub fn classify_pair(structure: &IncidenceStructure, f1: Flag, f2: Flag) -> usize {
    FlagClassifier::new(structure).classify(f1, f2)
}

/// Flags, their relation matrix and the order of the underlying quadrangle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagSchemeData {
    pub flags: Vec<Flag>,
    pub matrix: SchemeMatrix,
    pub order: GqOrder,
}

/// Verifies the quadrangle, then classifies all ordered flag pairs.
pub fn build_flag_scheme(structure: &IncidenceStructure) -> Result<FlagSchemeData, GqError> {
    let order = verify_gq(structure)?;
    let flags = enumerate_flags(structure);
    let classifier = FlagClassifier::new(structure);
    let matrix = SchemeMatrix::from_fn(flags.len(), FLAG_CLASSES, |x, y| classifier.classify(flags[x], flags[y]))
        .expect("classification puts 0 exactly on the diagonal");
    Ok(FlagSchemeData { flags, matrix, order })
}

/// Outcome of comparing a flag scheme with the scheme of the dual.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityReport {
    pub pairs_checked: usize,
    /// `(x, y, class on the original, class on the dual)` of the first mismatch.
    pub counterexample: Option<(usize, usize, usize, usize)>,
}

impl DualityReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Maps `(p, L)` to `(L, p)` and checks that class `i` becomes `flag_delta(i)`.
pub fn check_duality_map(structure: &IncidenceStructure) -> Result<DualityReport, GqError> {
    let original = build_flag_scheme(structure)?;
    let dual = build_flag_scheme(&dualize(structure))?;
    let position: std::collections::HashMap<Flag, usize> =
        dual.flags.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let image: Vec<usize> = original.flags.iter().map(|f| position[&Flag { point: f.line, line: f.point }]).collect();
    let n = original.flags.len();
    let counterexample = (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .map(|(x, y)| (x, y, original.matrix.get(x, y), dual.matrix.get(image[x], image[y])))
        .find(|&(_, _, a, b)| flag_delta(a) != b);
    Ok(DualityReport { pairs_checked: n * n, counterexample })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gq::{build_grid, build_symplectic};

    /// Classification straight from the geometric definitions, without lookup tables.
    fn classify_by_definition(s: &IncidenceStructure, f1: Flag, f2: Flag) -> usize {
        let collinear_on = |p: usize, q: usize, line: usize| s.is_incident(p, line) && s.is_incident(q, line);
        let lines_through_both: Vec<usize> =
            (0..s.num_lines()).filter(|&x| collinear_on(f1.point, f2.point, x)).collect();
        let lines_meet = (0..s.num_points()).any(|r| s.is_incident(r, f1.line) && s.is_incident(r, f2.line));
        if f1 == f2 {
            0
        } else if f1.point == f2.point {
            1
        } else if f1.line == f2.line {
            2
        } else if lines_through_both.contains(&f1.line) {
            3
        } else if lines_through_both.contains(&f2.line) {
            4
        } else if !lines_through_both.is_empty() {
            5
        } else if lines_meet {
            6
        } else {
            7
        }
    }

    #[test]
    fn flag_counts() {
        assert_eq!(enumerate_flags(&build_symplectic(2).unwrap()).len(), 45);
        assert_eq!(enumerate_flags(&build_grid(3).unwrap()).len(), 32);
        assert_eq!(enumerate_flags(&build_grid(1).unwrap()).len(), 8);
    }

    #[test]
    fn lookup_matches_definition() {
        for s in [build_grid(2).unwrap(), build_symplectic(2).unwrap(), dualize(&build_grid(2).unwrap())] {
            let flags = enumerate_flags(&s);
            let c = FlagClassifier::new(&s);
            for &a in &flags {
                for &b in &flags {
                    assert_eq!(c.classify(a, b), classify_by_definition(&s, a, b));
                }
            }
        }
    }

    #[test]
    fn grid_examples() {
        let g = build_grid(2).unwrap();
        // point (0,0) is index 0; row 0 is line 0; column 0 is line 3
        let f = |point, line| Flag { point, line };
        assert_eq!(classify_pair(&g, f(0, 0), f(0, 3)), 1);
        assert_eq!(classify_pair(&g, f(0, 0), f(1, 0)), 2);
        assert_eq!(classify_pair(&g, f(0, 0), f(1, 4)), 3);
        assert_eq!(classify_pair(&g, f(1, 4), f(0, 0)), 4);
    }

    #[test]
    fn row_class_sizes() {
        let w2 = build_flag_scheme(&build_symplectic(2).unwrap()).unwrap();
        for x in 0..45 {
            assert_eq!(w2.matrix.row_class_sizes(x), vec![1, 2, 2, 4, 4, 8, 8, 16]);
        }
        let g2 = build_flag_scheme(&build_grid(2).unwrap()).unwrap();
        for x in 0..18 {
            assert_eq!(g2.matrix.row_class_sizes(x), vec![1, 1, 2, 2, 2, 2, 4, 4]);
        }
        let g1 = build_flag_scheme(&build_grid(1).unwrap()).unwrap();
        assert!((0..8).all(|x| g1.matrix.row_class_sizes(x) == vec![1; 8]));
    }

    #[test]
    fn transpose_is_star() {
        let w2 = build_flag_scheme(&build_symplectic(2).unwrap()).unwrap();
        for x in 0..45 {
            for y in 0..45 {
                assert_eq!(w2.matrix.get(y, x), flag_star(w2.matrix.get(x, y)));
            }
        }
    }

    #[test]
    fn duality_map() {
        for s in [build_grid(2).unwrap(), build_symplectic(2).unwrap(), build_grid(1).unwrap()] {
            let report = check_duality_map(&s).unwrap();
            assert!(report.passed(), "{report:?}");
        }
    }

    #[test]
    fn delta_and_star_are_involutions() {
        for c in 0..=7 {
            assert_eq!(flag_delta(flag_delta(c)), c);
            assert_eq!(flag_star(flag_star(c)), c);
        }
        assert_eq!((1..=7).map(flag_delta).collect::<Vec<_>>(), vec![2, 1, 4, 3, 6, 5, 7]);
    }
}
