//! Acceptance suite: one PASS/FAIL line per criterion, exit status nonzero
//! if any fails. Runs without the libtest harness so the lines always show.
//!
//! All comparisons are exact; the only tolerances are the wall-clock budgets
//! below.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use gqflag::flags::{build_flag_scheme, enumerate_flags, FlagSchemeData};
use gqflag::fusion::{
    classify_all, dual_partition, enumerate_fusions, fuse, fusion_csv, set_partitions, FeasibilityCondition,
    IndexPartition,
};
use gqflag::gq::{build_grid, build_symplectic, dualize, point_graph, verify_gq, GqOrder, IncidenceStructure};
use gqflag::graph::{Graph, SrgParameters};
use gqflag::reconstruct::{
    compute_clique_cover_4class, reconstruct_from_4class, reconstruct_from_7class, relabel_fused_to_canonical,
    relabel_to_canonical,
};
use gqflag::scheme::{find_parabolics, quotient_scheme, thin_group_table, verify_scheme, SchemeMatrix};
use gqflag::scramble::Scramble;
use gqflag::tables::{
    flag_table, fused_tensor_at, tensor_at, verify_identities, verify_triplet_orbits, FOUR_CLASS_BLOCKS,
};
use gqflag::ReconstructError;

const FLAG_COUNT_BUDGET: Duration = Duration::from_secs(1);
const TENSOR_BUDGET: Duration = Duration::from_secs(10);
const TENSOR_EXTENDED_BUDGET: Duration = Duration::from_secs(300);
const IDENTITY_BUDGET: Duration = Duration::from_secs(1);
const FUSION_BUDGET: Duration = Duration::from_secs(30);
const RECONSTRUCTION_BUDGET: Duration = Duration::from_secs(30);

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, budget: Duration) -> Result<Duration, String> {
    let took = start.elapsed();
    ensure(took <= budget, || format!("took {took:.2?}, budget {budget:?}"))?;
    Ok(took)
}

fn scheme(structure: &IncidenceStructure) -> FlagSchemeData {
    build_flag_scheme(structure).expect("constructions are quadrangles")
}

fn w(q: u64) -> IncidenceStructure {
    build_symplectic(q).unwrap()
}

fn grid(s: u64) -> IncidenceStructure {
    build_grid(s).unwrap()
}

fn four_class(m: &SchemeMatrix) -> SchemeMatrix {
    let mut map = vec![0; 8];
    for (block, classes) in FOUR_CLASS_BLOCKS.iter().enumerate() {
        classes.iter().for_each(|&c| map[c] = block);
    }
    m.merge_classes(&map, 4).unwrap()
}

fn flag_counts() -> Outcome {
    let start = Instant::now();
    for (name, s, expected) in [("W(2)", w(2), 45), ("grid(3)", grid(3), 32), ("W(3)", w(3), 160)] {
        let n = enumerate_flags(&s).len();
        ensure(n == expected, || format!("{name}: {n} flags, expected {expected}"))?;
    }
    let took = within(start, FLAG_COUNT_BUDGET)?;
    Ok(format!("45/32/160 in {took:.2?}"))
}

fn tensor_equals_table() -> Outcome {
    let start = Instant::now();
    let cases = [
        ((1, 1), grid(1)),
        ((2, 1), grid(2)),
        ((3, 1), grid(3)),
        ((4, 1), grid(4)),
        ((1, 2), dualize(&grid(2))),
        ((1, 3), dualize(&grid(3))),
        ((2, 2), w(2)),
        ((3, 3), w(3)),
    ];
    let mut entries = 0;
    for ((s, t), structure) in &cases {
        let data = scheme(structure);
        ensure(data.order == GqOrder::new(*s, *t), || format!("built order {} for ({s},{t})", data.order))?;
        let counted = verify_scheme(&data.matrix).map_err(|e| format!("({s},{t}): {e}"))?;
        let table = tensor_at(*s as i64, *t as i64);
        for k in 0..8 {
            for i in 0..8 {
                for j in 0..8 {
                    ensure(counted.get(k, i, j) == table.get(k, i, j), || {
                        format!(
                            "({s},{t}) p[{k}][{i}][{j}]: counted {}, table {}",
                            counted.get(k, i, j),
                            table.get(k, i, j)
                        )
                    })?;
                    entries += 1;
                }
            }
        }
    }
    let took = within(start, TENSOR_BUDGET)?;

    let start = Instant::now();
    let w5 = scheme(&w(5));
    ensure(w5.matrix.order() == 936, || format!("W(5) has {} flags", w5.matrix.order()))?;
    let counted = verify_scheme(&w5.matrix).map_err(|e| format!("W(5): {e}"))?;
    if let Some((k, i, j)) = counted.first_difference(&tensor_at(5, 5)) {
        return Err(format!("W(5) p[{k}][{i}][{j}] differs"));
    }
    let took_w5 = within(start, TENSOR_EXTENDED_BUDGET)?;
    Ok(format!("{entries} entries over 8 orders in {took:.2?}; W(5) 936 flags in {took_w5:.2?}"))
}

fn identity_sweep() -> Outcome {
    let start = Instant::now();
    let identities = verify_identities(flag_table()).map_err(|e| e.to_string())?;
    let orbits = verify_triplet_orbits().map_err(|e| e.to_string())?;
    ensure(orbits.group_order == 12, || format!("group order {}", orbits.group_order))?;
    ensure(orbits.triplets_covered == 343, || format!("{} triplets covered", orbits.triplets_covered))?;
    ensure(orbits.scaling_checks == 343 * 12, || format!("{} scaling checks", orbits.scaling_checks))?;
    let took = within(start, IDENTITY_BUDGET)?;
    Ok(format!("{identities} polynomial identities; {} orbits, 343 triplets x 12 maps in {took:.2?}", orbits.orbits))
}

fn noncommutative_imprimitive() -> Outcome {
    let data = scheme(&w(2));
    let t = verify_scheme(&data.matrix).map_err(|e| e.to_string())?;
    let (a, b) = (t.get(1, 4, 5), t.get(1, 5, 4));
    ensure(a != b, || format!("p[1][4][5] = p[1][5][4] = {a}"))?;
    let found = find_parabolics(&t, &data.matrix).map_err(|e| e.to_string())?;
    let classes: Vec<&[usize]> = found.iter().filter(|p| !p.trivial).map(|p| p.classes.as_slice()).collect();
    ensure(classes.contains(&&[0, 1][..]) && classes.contains(&&[0, 2][..]), || format!("parabolics {classes:?}"))?;
    Ok(format!("p[1][4][5]={a}, p[1][5][4]={b}; non-trivial parabolics {classes:?}"))
}

fn quotient_point_graph() -> Outcome {
    let structure = w(2);
    let data = scheme(&structure);
    let t = verify_scheme(&data.matrix).map_err(|e| e.to_string())?;
    let parabolics = find_parabolics(&t, &data.matrix).map_err(|e| e.to_string())?;
    let e = parabolics.iter().find(|p| p.classes == [0, 1]).ok_or("no parabolic {0,1}")?;
    let q = quotient_scheme(&data.matrix, e).map_err(|e| e.to_string())?;
    let nb = q.blocks.len();
    let edges = (0..nb).flat_map(|a| (a + 1..nb).map(move |b| (a, b)));
    let quotient = Graph::from_edges(nb, edges.filter(|&(a, b)| q.matrix.get(a, b) == 1));
    let srg = quotient.srg_parameters().map_err(|e| e.to_string())?;
    let expected = SrgParameters { v: 15, k: 6, lambda: 1, mu: 3 };
    ensure(srg == expected, || format!("quotient is SRG{srg}"))?;
    // blocks are the points; adjacency must be collinearity exactly
    let point_of: Vec<usize> = q.blocks.iter().map(|b| data.flags[b[0]].point).collect();
    let collinear = point_graph(&structure);
    for a in 0..nb {
        for b in 0..nb {
            if a != b {
                ensure(quotient.is_adjacent(a, b) == collinear.is_adjacent(point_of[a], point_of[b]), || {
                    format!("blocks {a},{b} disagree with the point graph")
                })?;
            }
        }
    }
    Ok(format!("SRG{srg}, equal to the point graph"))
}

fn thin_case() -> Outcome {
    let data = scheme(&grid(1));
    let t = verify_scheme(&data.matrix).map_err(|e| e.to_string())?;
    let g = thin_group_table(&t).map_err(|e| e.to_string())?;
    ensure(g.order() == 8, || format!("group order {}", g.order()))?;
    let (r, f) = g.dihedral_generators().ok_or("no dihedral generators")?;
    // class 0 is the identity
    let power = |x: usize, n: usize| (0..n).fold(0, |acc, _| g.product(acc, x));
    ensure(power(r, 4) == 0 && power(r, 2) != 0, || format!("r = {r} does not have order 4"))?;
    ensure(g.product(f, f) == 0 && f != 0, || format!("f = {f} does not have order 2"))?;
    ensure(g.product(g.product(f, r), f) == g.inverse(r), || "f r f != r^-1".into())?;
    let generated: BTreeSet<usize> =
        (0..4).flat_map(|a| (0..2).map(move |b| (a, b))).map(|(a, b)| g.product(power(r, a), power(f, b))).collect();
    ensure(generated.len() == 8, || format!("<r, f> has {} elements", generated.len()))?;
    Ok(format!("thin, order 8, r = R{r}, f = R{f}: r^4 = f^2 = 1, f r f = r^-1"))
}

fn partition(text: &str) -> IndexPartition {
    IndexPartition::parse(7, text).unwrap()
}

fn fusion_enumeration() -> Outcome {
    use FeasibilityCondition as C;
    let start = Instant::now();
    // rows of the published fusion table, up to point-line duality
    let table: Vec<(IndexPartition, C)> = [
        ("{1,2,3,4,7}|{5,6}", C::Points(vec![(2, 2)])),
        ("{1,3,4,6}|{2,5,7}", C::TEqualsOne),
        ("{1,2,3,4,6,7}|{5}", C::TEqualsOne),
        ("{1}|{2,3,4,5,6,7}", C::All),
        ("{1,2,7}|{3,4}|{5,6}", C::Points(vec![(2, 2)])),
        ("{1}|{2,5,6}|{3,4,7}", C::Points(vec![(3, 1)])),
        ("{1,6}|{2,5,7}|{3,4}", C::Points(vec![(3, 1)])),
        ("{1}|{2,5,7}|{3,4,6}", C::TEqualsOne),
        ("{1,3,4,6}|{2,5}|{7}", C::TEqualsOne),
        ("{1,3,4,6}|{2,7}|{5}", C::TEqualsOne),
        ("{1}|{2,3,4,5}|{6,7}", C::All),
        ("{1,2}|{3,4}|{5,6}|{7}", C::SEqualsT),
        ("{1,3,4,6}|{2}|{5}|{7}", C::TEqualsOne),
        ("{1}|{2,5}|{3,4}|{6}|{7}", C::TEqualsOne),
    ]
    .into_iter()
    .map(|(p, c)| (partition(p), c))
    .collect();
    let mut expected: BTreeMap<String, String> = BTreeMap::new();
    for (p, c) in &table {
        expected.insert(p.to_string(), c.to_string());
        expected.insert(dual_partition(p).to_string(), c.swap_st().to_string());
    }
    let classified: BTreeMap<String, String> = classify_all()
        .into_iter()
        .filter(|(p, c)| p.num_blocks() > 1 && p.num_blocks() < 7 && *c != C::Never)
        .map(|(p, c)| (p.to_string(), c.to_string()))
        .collect();
    if classified != expected {
        let extra: Vec<_> = classified.iter().filter(|(k, v)| expected.get(*k) != Some(v)).collect();
        let missing: Vec<_> = expected.iter().filter(|(k, v)| classified.get(*k) != Some(v)).collect();
        return Err(format!("symbolic table differs: unexpected {extra:?}, missing {missing:?}"));
    }

    // numeric enumeration at (2,2) against merging classes of the W(2) data
    let numeric = enumerate_fusions(&tensor_at(2, 2));
    ensure(numeric.len() == 7, || format!("{} fusions at (2,2)", numeric.len()))?;
    ensure(numeric.iter().all(|p| numeric.contains(&dual_partition(p))), || "not closed under duality".into())?;
    let m = scheme(&w(2)).matrix;
    let by_data: BTreeSet<String> = set_partitions(7)
        .into_iter()
        .filter(|p| p.num_blocks() > 1 && p.num_blocks() < 7)
        .filter(|p| verify_scheme(&m.merge_classes(&p.class_map(), p.num_blocks()).unwrap()).is_ok())
        .map(|p| p.to_string())
        .collect();
    let by_tensor: BTreeSet<String> = numeric.iter().map(|p| p.to_string()).collect();
    ensure(by_data == by_tensor, || format!("data {by_data:?} vs tensor {by_tensor:?}"))?;
    let feasible_here: BTreeSet<String> = table
        .iter()
        .flat_map(|(p, c)| [(p.clone(), c.clone()), (dual_partition(p), c.swap_st())])
        .filter(|(_, c)| c.holds_at(2, 2))
        .map(|(p, _)| p.to_string())
        .collect();
    ensure(by_tensor == feasible_here, || "(2,2) fusions differ from the feasible table rows".into())?;

    let golden =
        std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/fusions_numeric_2_2.csv"))
            .map_err(|e| e.to_string())?;
    let conditions: HashMap<String, FeasibilityCondition> =
        classify_all().into_iter().map(|(p, c)| (p.to_string(), c)).collect();
    let body = fusion_csv(numeric.iter().map(|p| (p, conditions.get(&p.to_string()))));
    ensure(golden.lines().skip(1).eq(body.lines()), || "golden file for (2,2) differs".into())?;
    let took = within(start, FUSION_BUDGET)?;
    Ok(format!(
        "{} table rows + duals = {} feasible partitions; 7 fusions at (2,2) match data, table and golden file in {took:.2?}",
        table.len(),
        expected.len()
    ))
}

fn four_class_fusion() -> Outcome {
    let mut notes = Vec::new();
    for q in [2u64, 3] {
        let data = scheme(&w(q));
        let t = verify_scheme(&data.matrix).map_err(|e| e.to_string())?;
        let blocks = FOUR_CLASS_BLOCKS[1..].iter().map(|b| b.to_vec()).collect();
        let part = IndexPartition::new(7, blocks).unwrap();
        let fused = fuse(&data.matrix, &t, &part).map_err(|e| e.to_string())?;
        let ft = verify_scheme(&fused).map_err(|e| format!("W({q}) fused: {e}"))?;
        if let Some((k, i, j)) = ft.first_difference(&fused_tensor_at(q as i64)) {
            return Err(format!(
                "W({q}) fused p[{k}][{i}][{j}] = {}, table {}",
                ft.get(k, i, j),
                fused_tensor_at(q as i64).get(k, i, j)
            ));
        }
        ensure(ft.is_symmetric(), || format!("W({q}) fused scheme not symmetric"))?;
        let parabolics = find_parabolics(&ft, &fused).map_err(|e| e.to_string())?;
        ensure(parabolics.iter().all(|p| p.trivial), || format!("W({q}) fused has non-trivial parabolics"))?;
        let n = (q + 1).pow(2) * (q * q + 1);
        ensure(fused.order() as u64 == n, || format!("order {}", fused.order()))?;
        notes.push(format!("s={q}: n={n}, 125 entries, symmetric, primitive"));
    }
    Ok(notes.join("; "))
}

/// Whether rebuilt vertex flags induce bijections on points and lines
/// (possibly swapped when `allow_swap`), compared with the source flags.
fn flags_correspond(original: &[(usize, usize)], rebuilt: &[(usize, usize)], allow_swap: bool) -> bool {
    let consistent = |pick: &dyn Fn((usize, usize)) -> (usize, usize)| {
        let mut points = HashMap::new();
        let mut lines = HashMap::new();
        original.iter().zip(rebuilt).all(|(&o, &r)| {
            let r = pick(r);
            *points.entry(o.0).or_insert(r.0) == r.0 && *lines.entry(o.1).or_insert(r.1) == r.1
        }) && {
            let ps: BTreeSet<_> = points.values().collect();
            let ls: BTreeSet<_> = lines.values().collect();
            ps.len() == points.len() && ls.len() == lines.len()
        }
    };
    consistent(&|r| r) || (allow_swap && consistent(&|(p, l)| (l, p)))
}

fn reconstruction_round_trips() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    // (a) seven classes; the target orientation plays the role of the given
    // isomorphism, which class data alone cannot fix when s != t
    for (name, structure, order, seed) in
        [("W(2)", w(2), GqOrder::new(2, 2), 11u64), ("grid(3)", grid(3), GqOrder::new(3, 1), 12)]
    {
        let data = scheme(&structure);
        let scramble = Scramble::new(seed, data.matrix.order(), 7);
        let mixed = scramble.apply(&data.matrix);
        let relabel = relabel_to_canonical(&mixed, Some(order)).map_err(|e| format!("{name}: {e}"))?;
        let rec = reconstruct_from_7class(&relabel.matrix).map_err(|e| format!("{name}: {e}"))?;
        ensure(rec.order == order, || format!("{name}: rebuilt order {}", rec.order))?;
        ensure(verify_gq(&rec.structure).ok() == Some(order), || format!("{name}: rebuilt structure fails GQ axioms"))?;
        let original: Vec<(usize, usize)> = (0..data.flags.len())
            .map(|x| {
                let f = data.flags[x];
                (scramble.vertex_perm[x], (f.point, f.line))
            })
            .fold(vec![(0, 0); data.flags.len()], |mut v, (y, f)| {
                v[y] = f;
                v
            });
        ensure(flags_correspond(&original, &rec.vertex_flags, order.s == order.t), || {
            format!("{name}: rebuilt flags do not match the source incidence")
        })?;
        notes.push(format!("{name} -> {order}"));
    }
    // (b) four classes
    for q in [2u64, 3] {
        let s = q as usize;
        let data = scheme(&w(q));
        let fused = four_class(&data.matrix);
        let scramble = Scramble::new(100 + q, fused.order(), 4);
        let relabel = relabel_fused_to_canonical(&scramble.apply(&fused)).map_err(|e| e.to_string())?;
        let rec = reconstruct_from_4class(&relabel.matrix).map_err(|e| format!("W({q}) fused: {e}"))?;
        let order = GqOrder::new(q, q);
        ensure(rec.order == order && verify_gq(&rec.structure).ok() == Some(order), || {
            format!("W({q}): order {}", rec.order)
        })?;
        let cliques = 2 * (s + 1) * (s * s + 1);
        ensure(rec.cover.cliques.len() == cliques, || format!("W({q}): {} cliques", rec.cover.cliques.len()))?;
        let levels = vec![1, 2 * s, 2 * s * s, 2 * s.pow(3), s.pow(4)];
        ensure(rec.levels.sizes() == levels, || format!("W({q}): levels {:?}", rec.levels.sizes()))?;
        notes.push(format!("W({q}) fused -> {order}, {cliques} cliques, levels {levels:?}"));
    }
    let took = within(start, RECONSTRUCTION_BUDGET)?;
    Ok(format!("{} in {took:.2?}", notes.join("; ")))
}

fn mutations() -> Outcome {
    let data = scheme(&w(2));
    let (x, y) = (0, 44);
    let r = data.matrix.get(x, y) % 7 + 1;
    let corrupted = data.matrix.with_entry(x, y, r).unwrap();
    let scheme_witness = match verify_scheme(&corrupted) {
        Ok(_) => return Err("corrupted matrix accepted".into()),
        Err(e) => e.to_string(),
    };

    let structure = w(2);
    let (p, l) = structure.incidence()[0];
    let gq_witness = match verify_gq(&structure.without_incidence(p, l).unwrap()) {
        Ok(_) => return Err("structure with a deleted incidence accepted".into()),
        Err(e) => e.to_string(),
    };

    let fused = four_class(&data.matrix);
    let b = (0..45).find(|&b| fused.get(0, b) == 1).unwrap();
    let broken = fused.with_entry(0, b, 2).unwrap().with_entry(b, 0, 2).unwrap();
    let cover_witness = match compute_clique_cover_4class(&broken) {
        Err(e @ ReconstructError::CoverViolation { .. }) => e.to_string(),
        Err(e) => return Err(format!("clique violation reported as {e}")),
        Ok(_) => return Err("broken clique cover accepted".into()),
    };
    Ok(format!("[{scheme_witness}] [{gq_witness}] [{cover_witness}]"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("flag counts", flag_counts),
        ("tensor equals table", tensor_equals_table),
        ("identity sweep and triplet action", identity_sweep),
        ("noncommutative and imprimitive", noncommutative_imprimitive),
        ("quotient is the point graph", quotient_point_graph),
        ("thin case is dihedral of order 8", thin_case),
        ("fusion enumeration and classification", fusion_enumeration),
        ("four-class fusion", four_class_fusion),
        ("reconstruction round trips", reconstruction_round_trips),
        ("mutations are caught", mutations),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
