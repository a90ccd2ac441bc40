//! Command-line front end. Each command produces a [`Report`]; the binary
//! prints it and maps the outcome to an exit code.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::error::{FormatError, GqError, ReconstructError};
use crate::flags::{build_flag_scheme, check_duality_map, FLAG_CLASSES};
use crate::format::{load_scheme, save_scheme};
use crate::fusion::{
    classify_all, classify_partition, dual_partition, enumerate_fusions, fuse, FeasibilityCondition, IndexPartition,
};
use crate::gq::{
    build_grid, build_symplectic, dualize, load_structure, save_structure, verify_gq, GqOrder, IncidenceStructure,
};
use crate::graph::{Graph, SrgParameters};
use crate::reconstruct::{
    check_unique_qm, reconstruct_from_4class, reconstruct_from_7class, relabel_fused_to_canonical,
    relabel_to_canonical, FUSED_CLASSES,
};
use crate::report::{Report, ReportFormat, Table};
use crate::scheme::{
    check_identities, find_parabolics, quotient_scheme, thin_group_table, verify_scheme, SchemeMatrix,
};
use crate::scramble::Scramble;
use crate::tables::{
    flag_table, tensor_at, verify_fused_table, verify_identities, verify_triplet_orbits, FOUR_CLASS_BLOCKS,
};

/// Everything that determines a run; identical configs give identical reports.
#[derive(Debug, Parser)]
#[command(name = "gqflag", version, about = "Flag association schemes of generalized quadrangles")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text, global = true)]
    pub format: ReportFormat,
    /// Seed for random scrambles; recorded in every report.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BuildKind {
    /// `(s+1) x (s+1)` grid, order `(s, 1)`.
    Grid,
    /// Dual grid, order `(1, t)`.
    DualGrid,
    /// Symplectic quadrangle over a prime field, order `(q, q)`.
    Symplectic,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Construct a quadrangle and write it as JSON.
    Build {
        kind: BuildKind,
        param: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build and verify the flag scheme of a quadrangle file.
    Scheme {
        structure: PathBuf,
        /// Relation-matrix file to write.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Intersection numbers as `k,i,j,p` rows.
        #[arg(long)]
        tensor_csv: Option<PathBuf>,
        /// Valencies as `i,eta` rows.
        #[arg(long)]
        valency_csv: Option<PathBuf>,
    },
    /// Fusions at one parameter pair, or the symbolic feasibility table.
    Fusions(FusionsArgs),
    /// Merge classes of a seven-class scheme file (default: the four-class fusion).
    Fuse {
        scheme: PathBuf,
        #[arg(long)]
        partition: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Rebuild the quadrangle from a scheme file.
    Reconstruct {
        scheme: PathBuf,
        #[arg(long, value_parser = ["7", "4"])]
        classes: String,
        /// Shuffle vertices and class names with this seed first.
        #[arg(long, value_name = "SEED")]
        scramble: Option<u64>,
        /// Orientation `S,T` to relabel against; scrambled seven-class data
        /// cannot tell an order from its dual.
        #[arg(long, value_name = "S,T")]
        order: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Consistency checks of the closed-form tables.
    Selftest,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct FusionsArgs {
    #[arg(long, num_args = 2, value_names = ["S", "T"])]
    pub numeric: Option<Vec<i64>>,
    #[arg(long)]
    pub symbolic: bool,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 2,
            Self::Verification(_) => 1,
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        Self::Usage(e.to_string())
    }
}

/// Input and parameter problems are usage errors; axiom failures are verification failures.
impl From<GqError> for CliError {
    fn from(e: GqError) -> Self {
        match e {
            GqError::Gq1Violation(_) | GqError::Gq2Violation(_) | GqError::Gq3Violation(_) => {
                Self::Verification(e.to_string())
            }
            _ => Self::Usage(e.to_string()),
        }
    }
}

impl From<ReconstructError> for CliError {
    fn from(e: ReconstructError) -> Self {
        Self::Verification(e.to_string())
    }
}

pub fn run(config: &RunConfig) -> Result<Report, CliError> {
    let seed = config.seed;
    match &config.command {
        Command::Build { kind, param, output } => cmd_build(*kind, *param, output.as_deref(), seed),
        Command::Scheme { structure, output, tensor_csv, valency_csv } => {
            cmd_scheme(structure, output.as_deref(), tensor_csv.as_deref(), valency_csv.as_deref(), seed)
        }
        Command::Fusions(args) => match &args.numeric {
            Some(st) => cmd_fusions_numeric(st[0], st[1], seed),
            None => Ok(cmd_fusions_symbolic(seed)),
        },
        Command::Fuse { scheme, partition, output } => cmd_fuse(scheme, partition.as_deref(), output.as_deref(), seed),
        Command::Reconstruct { scheme, classes, scramble, order, output } => {
            let classes = classes.parse().expect("restricted by clap");
            let order = order.as_deref().map(parse_order).transpose()?;
            cmd_reconstruct(scheme, classes, *scramble, order, output.as_deref(), seed)
        }
        Command::Selftest => Ok(cmd_selftest(seed)),
    }
}

fn parse_order(text: &str) -> Result<GqOrder, CliError> {
    let bad = || CliError::Usage(format!("order must be `S,T` with positive integers, got `{text}`"));
    let (s, t) = text.split_once(',').ok_or_else(bad)?;
    let s: u64 = s.trim().parse().map_err(|_| bad())?;
    let t: u64 = t.trim().parse().map_err(|_| bad())?;
    if s == 0 || t == 0 {
        return Err(bad());
    }
    Ok(GqOrder::new(s, t))
}

fn put_structure(report: &mut Report, structure: &IncidenceStructure, order: GqOrder) {
    report.put("order", order.to_string());
    report.put("points", structure.num_points());
    report.put("lines", structure.num_lines());
    report.put("flags", structure.incidence().len());
}

pub fn cmd_build(kind: BuildKind, param: u64, output: Option<&Path>, seed: u64) -> Result<Report, CliError> {
    let structure = match kind {
        BuildKind::Grid => build_grid(param)?,
        BuildKind::DualGrid => dualize(&build_grid(param)?),
        BuildKind::Symplectic => build_symplectic(param)?,
    };
    let mut report = Report::new("build", seed);
    report.put("kind", kind.to_possible_value().expect("no skipped variants").get_name());
    report.put("param", param);
    let order = verify_gq(&structure)?;
    put_structure(&mut report, &structure, order);
    report.check("gq_axioms", true, "");
    if let Some(path) = output {
        save_structure(&structure, path)?;
        report.put("output", path.display().to_string());
    }
    Ok(report)
}

fn relation_graph(m: &SchemeMatrix, class: usize) -> Graph {
    let n = m.order();
    Graph::from_edges(n, (0..n).flat_map(|x| (x + 1..n).map(move |y| (x, y))).filter(|&(x, y)| m.get(x, y) == class))
}

pub fn cmd_scheme(
    path: &Path,
    output: Option<&Path>,
    tensor_csv: Option<&Path>,
    valency_csv: Option<&Path>,
    seed: u64,
) -> Result<Report, CliError> {
    let structure = load_structure(path)?;
    let data = build_flag_scheme(&structure)?;
    let order = data.order;
    let mut report = Report::new("scheme", seed);
    put_structure(&mut report, &structure, order);
    report.put("n", data.matrix.order());
    report.put("d", data.matrix.num_classes());
    report.check("gq_axioms", true, "");

    let tensor = match verify_scheme(&data.matrix) {
        Ok(t) => t,
        Err(e) => {
            report.check("association_scheme", false, e);
            return Ok(report);
        }
    };
    report.check("association_scheme", true, "");
    report.put("valencies", tensor.valencies());
    let (s, t) = (order.s as i64, order.t as i64);
    let expected = tensor_at(s, t);
    match tensor.first_difference(&expected) {
        None => report.check("tensor_matches_table", true, format!("{} entries", (FLAG_CLASSES + 1).pow(3))),
        Some((k, i, j)) => report.check(
            "tensor_matches_table",
            false,
            format!("p[{k}][{i}][{j}] is {}, table gives {}", tensor.get(k, i, j), expected.get(k, i, j)),
        ),
    }
    match check_identities(&tensor) {
        Ok(()) => report.check("identities", true, ""),
        Err(v) => report.check("identities", false, format!("{v:?}")),
    }
    report.put("symmetric", tensor.is_symmetric());
    match tensor.noncommutativity_witness() {
        Some((k, i, j)) => report.put(
            "noncommutative",
            format!("p[{k}][{i}][{j}]={} p[{k}][{j}][{i}]={}", tensor.get(k, i, j), tensor.get(k, j, i)),
        ),
        None => report.put("noncommutative", false),
    }
    match check_duality_map(&structure) {
        Ok(d) if d.passed() => report.check("duality_map", true, format!("{} pairs", d.pairs_checked)),
        Ok(d) => report.check("duality_map", false, format!("{:?}", d.counterexample)),
        Err(e) => report.check("duality_map", false, e),
    }

    let parabolics = find_parabolics(&tensor, &data.matrix);
    match &parabolics {
        Ok(list) => {
            let nontrivial: Vec<String> = list
                .iter()
                .filter(|p| !p.trivial)
                .map(|p| format!("{{{}}}", p.classes.iter().map(usize::to_string).collect::<Vec<_>>().join(",")))
                .collect();
            let has = |c: &[usize]| list.iter().any(|p| p.classes == c);
            report.put("parabolics", &nontrivial);
            report.check("parabolics_include_points_and_lines", has(&[0, 1]) && has(&[0, 2]), nontrivial.join(" "));
        }
        Err(e) => report.check("parabolics_include_points_and_lines", false, e),
    }
    if let Some(points) = parabolics.as_ref().ok().and_then(|l| l.iter().find(|p| p.classes == [0, 1])) {
        let expected = SrgParameters {
            v: ((s + 1) * (s * t + 1)) as usize,
            k: (s * (t + 1)) as usize,
            lambda: (s - 1) as usize,
            mu: (t + 1) as usize,
        };
        match quotient_scheme(&data.matrix, points) {
            Ok(q) => {
                report.put("quotient_classes", q.matrix.num_classes());
                match relation_graph(&q.matrix, 1).srg_parameters() {
                    Ok(found) => {
                        report.put("quotient_srg", found.to_string());
                        report.check("quotient_is_point_graph", found == expected, format!("expected {expected}"));
                    }
                    Err(e) => report.check("quotient_is_point_graph", false, e),
                }
            }
            Err(e) => report.check("quotient_is_point_graph", false, e),
        }
    }
    report.put("thin", tensor.valencies().iter().all(|&v| v == 1));
    if let Ok(group) = thin_group_table(&tensor) {
        report.put("group_order", group.order());
        report.check(
            "group_dihedral_order_8",
            group.is_dihedral_of_order_8(),
            format!("{:?}", group.dihedral_generators()),
        );
    }

    if let Some(p) = output {
        save_scheme(&data.matrix, Some(&data.flags), p)?;
        report.put("output", p.display().to_string());
    }
    let write = |p: &Path, text: String| {
        std::fs::write(p, text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display())))
    };
    if let Some(p) = tensor_csv {
        write(p, tensor.to_csv())?;
    }
    if let Some(p) = valency_csv {
        write(p, tensor.valencies_csv())?;
    }
    Ok(report)
}

fn fusion_table(rows: impl IntoIterator<Item = (IndexPartition, Option<FeasibilityCondition>)>) -> Table {
    Table {
        header: vec!["partition".into(), "condition".into()],
        rows: rows
            .into_iter()
            .map(|(p, c)| vec![p.to_string(), c.map(|c| c.to_string()).unwrap_or_default()])
            .collect(),
    }
}

pub fn cmd_fusions_numeric(s: i64, t: i64, seed: u64) -> Result<Report, CliError> {
    if s < 1 || t < 1 {
        return Err(CliError::Usage(format!("parameters must be positive, got ({s},{t})")));
    }
    if (s, t) == (1, 1) {
        return Err(CliError::Usage(
            "(1,1) is excluded: the scheme is thin and every class partition closed under transposition fuses".into(),
        ));
    }
    let tensor = tensor_at(s, t);
    let fusions = enumerate_fusions(&tensor);
    let mut report = Report::new("fusions", seed);
    report.put("mode", "numeric");
    report.put("order", format!("({s},{t})"));
    report.put("fusions", fusions.len());
    // the symbolic classification predicts exactly the numeric fusions
    let predicted: Vec<IndexPartition> = classify_all()
        .into_iter()
        .filter(|(p, c)| p.num_blocks() > 1 && p.num_blocks() < FLAG_CLASSES && c.holds_at(s, t))
        .map(|(p, _)| p)
        .collect();
    let mut found_sorted = fusions.clone();
    found_sorted.sort_by_key(|p| p.to_string());
    let mut predicted_sorted = predicted;
    predicted_sorted.sort_by_key(|p| p.to_string());
    report.check(
        "matches_symbolic_table",
        found_sorted == predicted_sorted,
        format!("{} predicted", predicted_sorted.len()),
    );
    if s == t {
        let closed = fusions.iter().all(|p| fusions.contains(&dual_partition(p)));
        report.check("closed_under_duality", closed, "");
    }
    report.table = Some(fusion_table(fusions.into_iter().map(|p| {
        let c = classify_partition(&p);
        (p, Some(c))
    })));
    Ok(report)
}

/// Non-trivial partitions with a feasibility condition other than `NEVER`.
pub fn cmd_fusions_symbolic(seed: u64) -> Report {
    let all = classify_all();
    let total = all.len();
    let feasible: Vec<_> = all
        .into_iter()
        .filter(|(p, c)| p.num_blocks() > 1 && p.num_blocks() < FLAG_CLASSES && *c != FeasibilityCondition::Never)
        .collect();
    let mut report = Report::new("fusions", seed);
    report.put("mode", "symbolic");
    report.put("partitions", total);
    report.put("feasible", feasible.len());
    let closed = feasible.iter().all(|(p, c)| {
        let dual = dual_partition(p);
        feasible.iter().any(|(q, d)| *q == dual && *d == c.swap_st())
    });
    report.check("closed_under_duality", closed, "");
    report.check(
        "no_mixed_conditions",
        !feasible.iter().any(|(_, c)| matches!(c, FeasibilityCondition::Mixed { .. })),
        "",
    );
    report.table = Some(fusion_table(feasible.into_iter().map(|(p, c)| (p, Some(c)))));
    report
}

pub fn cmd_fuse(path: &Path, partition: Option<&str>, output: Option<&Path>, seed: u64) -> Result<Report, CliError> {
    let file = load_scheme(path)?;
    let d = file.matrix.num_classes();
    let part = match partition {
        Some(text) => IndexPartition::parse(d, text).map_err(|e| CliError::Usage(e.to_string()))?,
        None if d == FLAG_CLASSES => {
            let blocks = FOUR_CLASS_BLOCKS[1..].iter().map(|b| b.to_vec()).collect();
            IndexPartition::new(d, blocks).expect("fixed partition is valid")
        }
        None => return Err(CliError::Usage(format!("default partition needs {FLAG_CLASSES} classes, file has {d}"))),
    };
    let mut report = Report::new("fuse", seed);
    report.put("partition", part.to_string());
    let tensor = verify_scheme(&file.matrix).map_err(|e| CliError::Verification(e.to_string()))?;
    let fused = fuse(&file.matrix, &tensor, &part).map_err(|e| CliError::Verification(e.to_string()))?;
    let fused_tensor = verify_scheme(&fused).map_err(|e| CliError::Verification(e.to_string()))?;
    report.put("n", fused.order());
    report.put("d", fused.num_classes());
    report.put("valencies", fused_tensor.valencies());
    report.put("symmetric", fused_tensor.is_symmetric());
    report.check("association_scheme", true, "");
    if let Some(p) = output {
        save_scheme(&fused, None, p)?;
        report.put("output", p.display().to_string());
    }
    Ok(report)
}

pub fn cmd_reconstruct(
    path: &Path,
    classes: usize,
    scramble: Option<u64>,
    target: Option<GqOrder>,
    output: Option<&Path>,
    seed: u64,
) -> Result<Report, CliError> {
    let file = load_scheme(path)?;
    let d = file.matrix.num_classes();
    if d != classes {
        return Err(CliError::Usage(format!("--classes {classes} given but the file header has d = {d}")));
    }
    let seed = scramble.unwrap_or(seed);
    let mut report = Report::new("reconstruct", seed);
    report.put("classes", classes);
    report.put("n", file.matrix.order());
    let matrix = match scramble {
        Some(seed) => {
            let s = Scramble::new(seed, file.matrix.order(), d);
            report.put("scrambled", true);
            report.put("class_permutation", &s.class_perm);
            s.apply(&file.matrix)
        }
        None => {
            report.put("scrambled", false);
            file.matrix
        }
    };
    let structure = if classes == FLAG_CLASSES {
        let rec = match reconstruct_from_7class(&matrix) {
            Ok(rec) if target.is_none_or(|o| o == rec.order) => rec,
            Ok(_) | Err(ReconstructError::ParameterMismatch(_)) => {
                let relabel = relabel_to_canonical(&matrix, target)?;
                report.put("class_map", &relabel.class_map);
                report.put("other_orders", relabel.other_orders.iter().map(|o| o.to_string()).collect::<Vec<_>>());
                reconstruct_from_7class(&relabel.matrix)?
            }
            Err(e) => return Err(e.into()),
        };
        put_structure(&mut report, &rec.structure, rec.order);
        report.put("point_cliques", rec.structure.num_points());
        report.put("line_cliques", rec.structure.num_lines());
        report.check("gq_axioms", true, format!("order {}", rec.order));
        rec.structure
    } else {
        debug_assert_eq!(classes, FUSED_CLASSES);
        let relabel = relabel_fused_to_canonical(&matrix)?;
        report.put("class_map", &relabel.class_map);
        let rec = reconstruct_from_4class(&relabel.matrix)?;
        put_structure(&mut report, &rec.structure, rec.order);
        let sizes: Vec<usize> = rec.cover.cliques.iter().map(Vec::len).collect();
        report.put("cliques", rec.cover.cliques.len());
        report.put("clique_size", sizes.first().copied().unwrap_or(0));
        report.put("point_cliques", rec.point_cliques.len());
        report.put("line_cliques", rec.line_cliques.len());
        report.put("level_base", rec.levels.base);
        report.put("levels", rec.levels.sizes());
        report.check("gq_axioms", true, format!("order {}", rec.order));
        match check_unique_qm(&relabel.matrix, &rec) {
            Ok(qm) => report.check(
                "unique_connecting_pairs",
                true,
                format!("{} anti-flags, {} far pairs", qm.anti_flags, qm.far_pairs),
            ),
            Err(e) => report.check("unique_connecting_pairs", false, e),
        }
        rec.structure
    };
    if let Some(p) = output {
        save_structure(&structure, p)?;
        report.put("output", p.display().to_string());
    }
    Ok(report)
}

pub fn cmd_selftest(seed: u64) -> Report {
    let mut report = Report::new("selftest", seed);
    report.check_result(
        "table_identities",
        &verify_identities(flag_table()).map(|n| format!("{n} polynomial identities")),
    );
    report.check_result(
        "triplet_orbits",
        &verify_triplet_orbits().map(|r| {
            format!(
                "group order {}, {} orbits cover {} triplets, {} scaling checks",
                r.group_order, r.orbits, r.triplets_covered, r.scaling_checks
            )
        }),
    );
    report.check_result("fused_table_cross_check", &verify_fused_table().map(|n| format!("{n} entries")));
    report
}
