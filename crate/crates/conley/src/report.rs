//! Assembly of the machine-readable analysis report.
//!
//! Reports are plain JSON with every number rendered as an exact fraction.
//! Serialization order is fixed (struct fields plus sorted maps), so the
//! same configuration and seed always produce byte-identical output.

use crate::config::{parse_neighbourhood, NeighbourhoodSpec, RunConfig};
use crate::conley::{compute_bundle, ConleyIndexBundle};
use crate::dynamics::image;
use crate::error::{ConleyError, Result};
use crate::grid::{CubicalSet, GridSpec};
use crate::homology::FieldSpec;
use crate::isolation::{check_isolation, grow_isolating_neighbourhood, IsolationReport};
use crate::pairs::{check_pair, construct_weak_index_pair, find_strict_pair, PairAxiomReport};
use crate::sampling::{read_samples, MvMap, SampleSet};
use serde::Serialize;
use std::sync::Arc;

pub const SCHEMA_ID: &str = "conley-report/1";

/// Exit code category of an error, matching the CLI contract:
/// 2 configuration, 3 isolation, 4 pair construction, 5 excision,
/// 1 anything else.
pub fn exit_code(e: &ConleyError) -> i32 {
    match e {
        ConleyError::Config(_) | ConleyError::Parse(_) | ConleyError::Io(_) => 2,
        ConleyError::IsolationFailure(_) | ConleyError::NoIsolatingCollar { .. } => 3,
        ConleyError::ResolutionTooCoarse(_)
        | ConleyError::NotWeakPair(_)
        | ConleyError::NoStrictPairFound
        | ConleyError::EmptyHull
        | ConleyError::HullAmbiguous { .. } => 4,
        ConleyError::ExcisionFailure { .. } => 5,
        _ => 1,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorObject {
    pub code: String,
    pub exit: i32,
    pub message: String,
}

impl ErrorObject {
    pub fn from_error(e: &ConleyError) -> ErrorObject {
        let code = match e {
            ConleyError::Config(_) | ConleyError::Parse(_) | ConleyError::Io(_) => "config",
            ConleyError::IsolationFailure(_) | ConleyError::NoIsolatingCollar { .. } => {
                "isolation"
            }
            ConleyError::ExcisionFailure { .. } => "excision",
            ConleyError::ResolutionTooCoarse(_)
            | ConleyError::NotWeakPair(_)
            | ConleyError::NoStrictPairFound => "pair",
            _ => "internal",
        };
        ErrorObject { code: code.into(), exit: exit_code(e), message: e.to_string() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GridSummary {
    pub dimension: usize,
    pub axes: Vec<String>,
    pub cell_width: String,
    pub offset: String,
    pub refinement: u32,
    pub unit: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SampleSummary {
    pub count: usize,
    pub domain_top_cells: usize,
}

/// The strict (classical) pair search outcome, reported alongside the weak
/// pair for strong-consistency checks.
#[derive(Debug, Clone, Serialize)]
pub struct StrictPairReport {
    pub found: bool,
    pub p1: Vec<String>,
    pub p2: Vec<String>,
    /// When no strict pair exists: why the obstruction is genuine, e.g.
    /// the image of the weak core escaping the neighbourhood.
    pub witnesses: Vec<String>,
    /// Index computed through the strict pair, when found.
    pub index: Option<ConleyIndexBundle>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairReport {
    pub p1: Vec<String>,
    pub p2: Vec<String>,
    pub axioms: PairAxiomReport,
    /// Image of the core `P1 \ P2`, as a coordinate span per axis.
    pub core_image_span: Vec<String>,
    pub core_image_within_n: bool,
    pub index: ConleyIndexBundle,
}

#[derive(Debug, Clone, Serialize)]
pub struct NeighbourhoodReport {
    pub name: String,
    pub top_cells: Vec<String>,
    pub isolation: Option<IsolationReport>,
    pub invariant_part: Vec<String>,
    pub pair: Option<PairReport>,
    pub strict: Option<StrictPairReport>,
    pub error: Option<ErrorObject>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: String,
    pub grid: GridSummary,
    pub samples: SampleSummary,
    pub coefficients: String,
    pub neighbourhoods: Vec<NeighbourhoodReport>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// First error in the report, for the process exit code.
    pub fn first_error(&self) -> Option<&ErrorObject> {
        self.neighbourhoods.iter().find_map(|n| n.error.as_ref())
    }
}

pub fn grid_summary(grid: &GridSpec) -> GridSummary {
    GridSummary {
        dimension: grid.dim(),
        axes: grid
            .axes
            .iter()
            .map(|a| match a {
                crate::grid::Axis::Periodic { period } => format!("periodic({period})"),
                crate::grid::Axis::Bounded { lo, hi } => format!("bounded[{lo}, {hi}]"),
            })
            .collect(),
        cell_width: grid.cell_width.to_string(),
        offset: grid.offset.to_string(),
        refinement: grid.refinement,
        unit: grid.unit().to_string(),
    }
}

pub fn top_cell_labels(grid: &GridSpec, set: &CubicalSet) -> Vec<String> {
    set.maximal_cells().into_iter().map(|c| grid.cube_label(c)).collect()
}

/// Coordinate span of a set, one `[lo, hi]` string per axis. On periodic
/// axes the minimal covering arc is used whenever the uncovered gap is
/// unique (even past half the period); a full or ambiguous cover renders
/// as `(whole axis)`.
pub fn span_labels(grid: &GridSpec, set: &CubicalSet) -> Vec<String> {
    if set.is_empty() {
        return vec!["(empty)".into(); grid.dim()];
    }
    (0..grid.dim())
        .map(|axis| {
            let spans: Vec<(i64, i64)> = set
                .cells
                .iter()
                .map(|c| {
                    (c.axes[axis].lo, c.axes[axis].lo + c.axes[axis].ext as i64)
                })
                .collect();
            match grid.period_units(axis) {
                None => {
                    let lo = spans.iter().map(|s| s.0).min().unwrap();
                    let hi = spans.iter().map(|s| s.1).max().unwrap();
                    format!("[{}, {}]", grid.from_units(lo), grid.from_units(hi))
                }
                Some(p) => match circular_span(&spans, p) {
                    Some((lo, hi)) => {
                        format!("[{}, {}]", grid.from_units(lo), grid.from_units(hi))
                    }
                    None => "(whole axis)".into(),
                },
            }
        })
        .collect()
}

/// Minimal covering arc of unit spans on a circle of `p` units, when the
/// largest uncovered gap is unique and nonempty.
fn circular_span(spans: &[(i64, i64)], p: i64) -> Option<(i64, i64)> {
    // half-unit marking so vertex-only inputs leave exact gaps
    let n = (2 * p) as usize;
    let mut marked = vec![false; n];
    for &(a, b) in spans {
        for h in 2 * a..=2 * b {
            marked[(h.rem_euclid(2 * p)) as usize] = true;
        }
    }
    let anchor = (0..n).find(|&j| marked[j])?;
    if marked.iter().all(|&m| m) {
        return None;
    }
    // collect circular runs of unmarked half-positions
    let mut runs: Vec<(usize, usize)> = Vec::new(); // (start, len)
    let mut run = 0usize;
    let mut run_start = 0usize;
    for k in 1..=n {
        let j = (anchor + k) % n;
        if !marked[j] {
            if run == 0 {
                run_start = j;
            }
            run += 1;
        } else if run > 0 {
            runs.push((run_start, run));
            run = 0;
        }
    }
    let best = runs.iter().map(|r| r.1).max()?;
    let winners: Vec<_> = runs.iter().filter(|r| r.1 == best).collect();
    if winners.len() != 1 {
        return None;
    }
    let (start, len) = *winners[0];
    let start_half = (start as i64 + len as i64).rem_euclid(2 * p);
    if start_half % 2 != 0 {
        return None;
    }
    let covered_half = 2 * p - len as i64 - 1;
    let lo = start_half / 2;
    Some((lo, lo + (covered_half + 1) / 2))
}

/// Analyze one neighbourhood into its report entry. Never panics: failures
/// are recorded as error objects.
pub fn analyze_neighbourhood(
    map: &MvMap,
    name: &str,
    spec: &NeighbourhoodSpec,
    field: FieldSpec,
) -> NeighbourhoodReport {
    let grid = map.grid.clone();
    let mut rep = NeighbourhoodReport {
        name: name.into(),
        top_cells: Vec::new(),
        isolation: None,
        invariant_part: Vec::new(),
        pair: None,
        strict: None,
        error: None,
    };
    let fail = |rep: &mut NeighbourhoodReport, e: &ConleyError| {
        rep.error = Some(ErrorObject::from_error(e));
    };

    // resolve the neighbourhood
    let n_set = match spec {
        NeighbourhoodSpec::Explicit(set) => set.clone(),
        NeighbourhoodSpec::Auto { seed, max_k } => {
            let seed_set = match pick_seed_cell(map, *seed) {
                Ok(s) => s,
                Err(e) => {
                    fail(&mut rep, &e);
                    return rep;
                }
            };
            match grow_isolating_neighbourhood(map, &seed_set, *max_k) {
                Ok((n, _, _)) => n,
                Err(e) => {
                    fail(&mut rep, &e);
                    return rep;
                }
            }
        }
    };
    rep.top_cells = top_cell_labels(&grid, &n_set);

    // isolation
    let (iso, parts) = match check_isolation(map, &n_set) {
        Ok(v) => v,
        Err(e) => {
            fail(&mut rep, &e);
            return rep;
        }
    };
    rep.invariant_part = top_cell_labels(&grid, &parts.inv);
    let weak_ok = iso.weak;
    rep.isolation = Some(iso);
    if !weak_ok {
        fail(&mut rep, &ConleyError::IsolationFailure(
            "invariant part not interior to the neighbourhood".into(),
        ));
        return rep;
    }

    // weak pair and index
    let pair = match construct_weak_index_pair(map, &n_set, &parts, None, 0) {
        Ok(p) => p,
        Err(e) => {
            fail(&mut rep, &e);
            return rep;
        }
    };
    let axioms = match check_pair(map, &n_set, &parts, &pair) {
        Ok(a) => a,
        Err(e) => {
            fail(&mut rep, &e);
            return rep;
        }
    };
    let bundle = match compute_bundle(map, &n_set, &pair, field) {
        Ok(b) => b,
        Err(e) => {
            fail(&mut rep, &e);
            return rep;
        }
    };
    let core = pair.relative_cells().closure();
    let (core_image_span, core_within) = match image(map, &core) {
        Ok(img) => (span_labels(&grid, &img), img.is_subset(&n_set)),
        Err(_) => (Vec::new(), false),
    };
    rep.pair = Some(PairReport {
        p1: top_cell_labels(&grid, &pair.p1),
        p2: top_cell_labels(&grid, &pair.p2),
        axioms,
        core_image_span: core_image_span.clone(),
        core_image_within_n: core_within,
        index: bundle,
    });

    // strict pair: success feeds the strong-consistency comparison,
    // failure is reported with the image-escape witness
    rep.strict = Some(match find_strict_pair(map, &n_set, &parts) {
        Ok(sp) => {
            let index = compute_bundle(map, &n_set, &sp, field).ok();
            StrictPairReport {
                found: true,
                p1: top_cell_labels(&grid, &sp.p1),
                p2: top_cell_labels(&grid, &sp.p2),
                witnesses: Vec::new(),
                index,
            }
        }
        Err(_) => StrictPairReport {
            found: false,
            p1: Vec::new(),
            p2: Vec::new(),
            witnesses: vec![format!(
                "image of the weak core spans {} which is not contained in the neighbourhood",
                core_image_span.join(" x ")
            )],
            index: None,
        },
    });
    rep
}

/// Deterministically pick one top cell of the domain as a growth seed.
fn pick_seed_cell(map: &MvMap, seed: u64) -> Result<CubicalSet> {
    use rand::Rng;
    use rand::SeedableRng;
    let tops: Vec<_> = map.domain.top_cells().cloned().collect();
    if tops.is_empty() {
        return Err(ConleyError::EmptyCover);
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let pick = tops[rng.gen_range(0..tops.len())].clone();
    Ok(CubicalSet::from_cells(map.grid.clone(), [pick]))
}

/// Build the full report for a configuration and an already-ingested map.
pub fn build_report(
    config: &RunConfig,
    grid: &Arc<GridSpec>,
    samples: &SampleSet,
    map: &MvMap,
    field: FieldSpec,
) -> Report {
    let mut neighbourhoods = Vec::new();
    for (name, literal) in &config.neighbourhoods {
        match parse_neighbourhood(grid, literal) {
            Ok(spec) => neighbourhoods.push(analyze_neighbourhood(map, name, &spec, field)),
            Err(e) => neighbourhoods.push(NeighbourhoodReport {
                name: name.clone(),
                top_cells: Vec::new(),
                isolation: None,
                invariant_part: Vec::new(),
                pair: None,
                strict: None,
                error: Some(ErrorObject::from_error(&e)),
            }),
        }
    }
    Report {
        schema: SCHEMA_ID.into(),
        grid: grid_summary(grid),
        samples: SampleSummary {
            count: samples.points.len(),
            domain_top_cells: map.domain.top_cells().count(),
        },
        coefficients: field.to_string(),
        neighbourhoods,
    }
}

/// Ingest samples and build the grid map for a configuration.
pub fn ingest(config: &RunConfig) -> Result<(Arc<GridSpec>, SampleSet, MvMap)> {
    let grid = config.grid_spec()?;
    let samples = read_samples(&config.samples.path, config.sample_format()?)?;
    if samples.dim != grid.dim() {
        return Err(ConleyError::Config(format!(
            "samples have dimension {}, grid has {}",
            samples.dim,
            grid.dim()
        )));
    }
    let map = crate::testgen::map_from_samples(&samples, grid.clone())?;
    Ok((grid, samples, map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testgen;

    #[test]
    fn report_is_deterministic_and_tagged() {
        let map = testgen::doubling_map().unwrap();
        let n = testgen::doubling_fixed_point_neighbourhood(&map.grid);
        let spec = NeighbourhoodSpec::Explicit(n);
        let a = analyze_neighbourhood(&map, "fp", &spec, FieldSpec::Rational);
        let b = analyze_neighbourhood(&map, "fp", &spec, FieldSpec::Rational);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert!(a.error.is_none());
        let json = serde_json::to_string(&a).unwrap();
        // exact fractions, never decimals
        assert!(json.contains("15/16"));
        assert!(!json.contains("0.9375"));
    }

    #[test]
    fn whole_circle_fails_isolation() {
        let map = testgen::doubling_map().unwrap();
        let n = crate::pairs::full_domain(&map.grid);
        let rep = analyze_neighbourhood(
            &map,
            "all",
            &NeighbourhoodSpec::Explicit(n),
            FieldSpec::Rational,
        );
        let err = rep.error.expect("whole circle cannot isolate");
        assert_eq!(err.exit, 3);
        assert_eq!(err.code, "isolation");
    }

    #[test]
    fn period_two_strict_pair_reported_missing() {
        let map = testgen::doubling_map().unwrap();
        let n = testgen::doubling_period_two_neighbourhood(&map.grid);
        let rep = analyze_neighbourhood(
            &map,
            "p2",
            &NeighbourhoodSpec::Explicit(n),
            FieldSpec::Rational,
        );
        assert!(rep.error.is_none());
        let strict = rep.strict.unwrap();
        assert!(!strict.found);
        assert!(strict.witnesses[0].contains("[3/32, 29/32]"));
        let pair = rep.pair.unwrap();
        assert!(!pair.core_image_within_n);
        assert_eq!(pair.core_image_span, vec!["[3/32, 29/32]"]);
    }
}
