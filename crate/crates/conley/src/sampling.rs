//! From sample pairs `(x, g(x))` to the combinatorial enclosure.
//!
//! The combinatorial map sends each coarse cell `Q` meeting the sample set
//! to the coarse cells hit by images of samples in `Q`. The multivalued map
//! stores, for every elementary cube of the refined grid, the acyclic hull
//! of the images of all coarse cells containing that cube. Point fibers are
//! recovered exactly: for `x` interior to cube `t`, `F(x)` is the polyhedron
//! of the stored hull box of `t`.

use crate::dyadic::Dyadic;
use crate::error::{ConleyError, Result};
use crate::grid::{box_set, Cube, CubicalSet, GridSpec, UnitBox};
use serde::Deserialize;
use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct SampleSet {
    pub dim: usize,
    pub points: Vec<(Vec<Dyadic>, Vec<Dyadic>)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleFormat {
    Csv,
    Json,
}

/// The combinatorial multivalued map on coarse cells: `entries[Q]` is the
/// set of coarse cells hit by images of samples lying in the closed cell `Q`.
#[derive(Debug, Clone)]
pub struct ComboMap {
    pub entries: BTreeMap<Vec<i64>, BTreeSet<Vec<i64>>>,
}

#[derive(Debug, Clone)]
pub struct MvValue {
    pub bbox: UnitBox,
    pub set: CubicalSet,
}

/// The multivalued map realised on the representation grid: every
/// elementary cube of the closure of the sampled region maps to a
/// face-closed hull box. Antitone under the face relation, so point fibers
/// are exact.
#[derive(Debug, Clone)]
pub struct MvMap {
    pub grid: Arc<GridSpec>,
    pub table: BTreeMap<Cube, MvValue>,
    /// Derived preimage table: `reverse[t]` = cubes whose value contains `t`.
    pub reverse: BTreeMap<Cube, BTreeSet<Cube>>,
    pub domain: CubicalSet,
}

pub fn read_samples(path: &Path, format: SampleFormat) -> Result<SampleSet> {
    let text = std::fs::read_to_string(path)?;
    match format {
        SampleFormat::Csv => parse_csv(&text),
        SampleFormat::Json => parse_json(&text),
    }
}

pub fn parse_csv(text: &str) -> Result<SampleSet> {
    let mut points = Vec::new();
    let mut dim: Option<usize> = None;
    let mut seen_data_or_header = false;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        // an optional header row: the first non-comment line, when any of
        // its fields is not a number
        if !seen_data_or_header && fields.iter().any(|f| Dyadic::parse(f).is_err()) {
            seen_data_or_header = true;
            continue;
        }
        seen_data_or_header = true;
        if fields.len() % 2 != 0 || fields.is_empty() {
            return Err(ConleyError::Parse(format!(
                "line {}: expected 2d columns, got {}",
                lineno + 1,
                fields.len()
            )));
        }
        let d = fields.len() / 2;
        match dim {
            None => dim = Some(d),
            Some(prev) if prev != d => {
                return Err(ConleyError::Parse(format!(
                    "line {}: row width {} does not match earlier width {}",
                    lineno + 1,
                    fields.len(),
                    2 * prev
                )))
            }
            _ => {}
        }
        let vals: Vec<Dyadic> = fields
            .iter()
            .map(|f| {
                Dyadic::parse(f).map_err(|e| {
                    ConleyError::Parse(format!("line {}: {}", lineno + 1, e))
                })
            })
            .collect::<Result<_>>()?;
        points.push((vals[..d].to_vec(), vals[d..].to_vec()));
    }
    Ok(SampleSet { dim: dim.unwrap_or(0), points })
}

pub fn parse_json(text: &str) -> Result<SampleSet> {
    #[derive(Deserialize)]
    struct Raw {
        dimension: usize,
        samples: Vec<(Vec<Dyadic>, Vec<Dyadic>)>,
    }
    let raw: Raw =
        serde_json::from_str(text).map_err(|e| ConleyError::Parse(format!("sample json: {e}")))?;
    for (i, (x, y)) in raw.samples.iter().enumerate() {
        if x.len() != raw.dimension || y.len() != raw.dimension {
            return Err(ConleyError::Parse(format!(
                "sample {i}: arity {}+{} does not match dimension {}",
                x.len(),
                y.len(),
                raw.dimension
            )));
        }
    }
    Ok(SampleSet { dim: raw.dimension, points: raw.samples })
}

/// The combinatorial map of the sampling: coarse cells are closed, so a
/// sample on a cell boundary contributes to all incident cells.
pub fn build_combo_map(samples: &SampleSet, grid: &GridSpec) -> Result<ComboMap> {
    let d = grid.dim();
    if samples.dim != d && !samples.points.is_empty() {
        return Err(ConleyError::Parse(format!(
            "sample dimension {} does not match grid dimension {}",
            samples.dim, d
        )));
    }
    // coarse cells containing a point, as index vectors
    let locate = |p: &[Dyadic]| -> Vec<Vec<i64>> {
        let mut per_axis: Vec<Vec<i64>> = Vec::with_capacity(d);
        for axis in 0..d {
            per_axis.push(grid.coarse_cells_containing_point(axis, p[axis]));
        }
        let mut out: Vec<Vec<i64>> = vec![Vec::new()];
        for choices in &per_axis {
            let mut next = Vec::new();
            for prefix in &out {
                for &c in choices {
                    let mut v = prefix.clone();
                    v.push(c);
                    next.push(v);
                }
            }
            out = next;
        }
        out
    };

    let mut domain: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut located: Vec<(Vec<Vec<i64>>, Vec<Vec<i64>>)> = Vec::new();
    for (x, y) in &samples.points {
        let qs = locate(x);
        if qs.is_empty() {
            return Err(ConleyError::Parse(format!(
                "sample point outside the grid domain: ({})",
                x.iter().map(Dyadic::to_string).collect::<Vec<_>>().join(", ")
            )));
        }
        let ps = locate(y);
        domain.extend(qs.iter().cloned());
        domain.extend(ps.iter().cloned());
        located.push((qs, ps));
    }
    if domain.is_empty() {
        return Err(ConleyError::EmptyCover);
    }
    let mut entries: BTreeMap<Vec<i64>, BTreeSet<Vec<i64>>> = BTreeMap::new();
    for (qs, ps) in &located {
        for q in qs {
            let entry = entries.entry(q.clone()).or_default();
            for p in ps {
                if domain.contains(p) {
                    entry.insert(p.clone());
                }
            }
        }
    }
    for (q, v) in &entries {
        if v.is_empty() {
            return Err(ConleyError::PreconditionViolated(format!(
                "coarse cell {q:?} has no image inside the sampled region"
            )));
        }
    }
    Ok(ComboMap { entries })
}

fn coarse_box(grid: &GridSpec, idx: &[i64]) -> UnitBox {
    let r = grid.refinement as i64;
    UnitBox {
        lo: idx.iter().map(|i| i * r).collect(),
        hi: idx.iter().map(|i| (i + 1) * r).collect(),
    }
}

pub fn build_mv_map(cmap: &ComboMap, grid: Arc<GridSpec>) -> Result<MvMap> {
    let d = grid.dim();
    let r = grid.refinement as i64;
    // closure of the union of all coarse cells with a table entry or image
    let mut all_idx: BTreeSet<Vec<i64>> = cmap.entries.keys().cloned().collect();
    for v in cmap.entries.values() {
        all_idx.extend(v.iter().cloned());
    }
    let mut dom = CubicalSet::empty(grid.clone());
    for idx in &all_idx {
        dom = dom.union(&box_set(grid.clone(), &coarse_box(&grid, idx)))?;
    }

    let mut table: BTreeMap<Cube, MvValue> = BTreeMap::new();
    for cube in &dom.cells {
        // coarse cells of the table domain containing this cube
        let mut per_axis: Vec<Vec<i64>> = Vec::with_capacity(d);
        for axis in 0..d {
            let (a, b) = (cube.axes[axis].lo, cube.axes[axis].lo + cube.axes[axis].ext as i64);
            // coarse cells whose closed interval contains the span [a, b]
            let holders: Vec<i64> = grid
                .coarse_cells_containing(axis, a)
                .into_iter()
                .filter(|&i| match grid.period_units(axis) {
                    Some(p) => (a - i * r).rem_euclid(p) + (b - a) <= r,
                    None => a >= i * r && b <= (i + 1) * r,
                })
                .collect();
            per_axis.push(holders);
        }
        // cartesian product of per-axis candidates, filtered to table entries
        let mut holders: Vec<Vec<i64>> = vec![Vec::new()];
        for choices in &per_axis {
            let mut next = Vec::new();
            for prefix in &holders {
                for &c in choices {
                    let mut v = prefix.clone();
                    v.push(c);
                    next.push(v);
                }
            }
            holders = next;
        }
        let mut targets = CubicalSet::empty(grid.clone());
        for q in holders.iter().filter(|q| cmap.entries.contains_key(*q)) {
            for p in &cmap.entries[q] {
                targets = targets.union(&box_set(grid.clone(), &coarse_box(&grid, p)))?;
            }
        }
        if targets.is_empty() {
            continue; // cube lies only in image cells outside the map's domain
        }
        let bbox = targets.hull_box().map_err(|e| match e {
            ConleyError::HullAmbiguous { axis } => ConleyError::ResolutionTooCoarse(format!(
                "hull ambiguous on axis {axis} for cube {}",
                grid.cube_label(cube)
            )),
            other => other,
        })?;
        let set = box_set(grid.clone(), &bbox);
        table.insert(cube.clone(), MvValue { bbox, set });
    }

    let mut reverse: BTreeMap<Cube, BTreeSet<Cube>> = BTreeMap::new();
    for (src, val) in &table {
        for dst in &val.set.cells {
            reverse.entry(dst.clone()).or_default().insert(src.clone());
        }
    }

    Ok(MvMap { grid, table, reverse, domain: dom })
}

impl MvMap {
    pub fn value(&self, cube: &Cube) -> Option<&MvValue> {
        self.table.get(cube)
    }

    /// Exact point fiber `F(x)`: the hull box stored for the carrier cube.
    pub fn point_value(&self, x: &[Dyadic]) -> Option<&MvValue> {
        let carrier = self.grid.carrier(x)?;
        self.table.get(&carrier)
    }

    pub fn effective_domain(&self) -> CubicalSet {
        CubicalSet::from_cells_raw(self.grid.clone(), self.table.keys().cloned())
    }

    /// Exhaustive antitonicity check: values shrink along cofaces.
    pub fn verify_antitone(&self) -> bool {
        self.table.iter().all(|(cube, val)| {
            cube.faces(&self.grid).iter().all(|f| match self.table.get(f) {
                Some(fv) => val.set.is_subset(&fv.set),
                None => false,
            })
        })
    }

    /// Fiber fidelity: every sample image lies in the fiber over its point.
    pub fn verify_fibers(&self, samples: &SampleSet) -> std::result::Result<(), String> {
        for (x, y) in &samples.points {
            let val = self
                .point_value(x)
                .ok_or_else(|| format!("no fiber over sample x"))?;
            let carrier_y = self
                .grid
                .carrier(y)
                .ok_or_else(|| "sample image outside domain".to_string())?;
            if !val.set.contains(&carrier_y) {
                return Err(format!(
                    "g(x) not in F(x) for x carrier {}",
                    self.grid.cube_label(&carrier_y)
                ));
            }
        }
        Ok(())
    }

    /// Remove one cube from one stored value set without touching the
    /// reverse table: used by the audit command to demonstrate that the
    /// dmds axiom check detects asymmetric tables.
    pub fn inject_table_fault(&mut self) -> Option<(Cube, Cube)> {
        for (src, val) in self.table.iter_mut() {
            if let Some(dst) = val.set.cells.iter().next().cloned() {
                val.set.cells.remove(&dst);
                return Some((src.clone(), dst));
            }
        }
        None
    }
}

/// Cell-level dmds axiom report. Failures carry witness cube labels.
#[derive(Debug, Clone, serde::Serialize)]
pub struct DmdsReport {
    pub identity_ok: bool,
    pub semigroup_ok: bool,
    pub symmetry_ok: bool,
    pub trials: u32,
    pub witnesses: Vec<String>,
}

impl DmdsReport {
    pub fn all_ok(&self) -> bool {
        self.identity_ok && self.semigroup_ok && self.symmetry_ok
    }
}

/// `n`-step cell relation: successors for `n > 0`, predecessors for `n < 0`.
fn iterate_cells(map: &MvMap, start: &BTreeSet<Cube>, n: i64) -> BTreeSet<Cube> {
    let mut cur = start.clone();
    for _ in 0..n.abs() {
        let mut next = BTreeSet::new();
        for c in &cur {
            if n > 0 {
                if let Some(v) = map.table.get(c) {
                    next.extend(v.set.cells.iter().cloned());
                }
            } else if let Some(pre) = map.reverse.get(c) {
                next.extend(pre.iter().cloned());
            }
        }
        cur = next;
    }
    cur
}

/// Check the dmds axioms on randomly chosen cubes: identity at time zero,
/// the semigroup property for small step counts of equal sign, and the
/// preimage symmetry between the forward and reverse tables.
pub fn verify_dmds_axioms(map: &MvMap, trials: u32, seed: u64) -> DmdsReport {
    use rand::seq::IteratorRandom;
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let cubes: Vec<&Cube> = map.table.keys().collect();
    let mut report = DmdsReport {
        identity_ok: true,
        semigroup_ok: true,
        symmetry_ok: true,
        trials,
        witnesses: Vec::new(),
    };
    if cubes.is_empty() {
        return report;
    }
    for _ in 0..trials {
        let c = *cubes.iter().choose(&mut rng).unwrap();
        let single: BTreeSet<Cube> = [c.clone()].into();

        // (i) time zero is the identity
        if iterate_cells(map, &single, 0) != single {
            report.identity_ok = false;
            report.witnesses.push(format!("identity at {}", map.grid.cube_label(c)));
        }

        // (ii) F(F(x,n),m) = F(x,n+m) for n*m >= 0
        let n: i64 = rng.gen_range(0..=2);
        let m: i64 = rng.gen_range(0..=2);
        let sign: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
        let (n, m) = (sign * n, sign * m);
        let lhs = iterate_cells(map, &iterate_cells(map, &single, n), m);
        let rhs = iterate_cells(map, &single, n + m);
        if lhs != rhs {
            report.semigroup_ok = false;
            report
                .witnesses
                .push(format!("semigroup n={n} m={m} at {}", map.grid.cube_label(c)));
        }

        // (iii) y in F(x,-1) iff x in F(y,1), via the reverse table
        let other = *cubes.iter().choose(&mut rng).unwrap();
        let fwd = map.table.get(c).map_or(false, |v| v.set.contains(other));
        let bwd = map.reverse.get(other).map_or(false, |p| p.contains(c));
        if fwd != bwd {
            report.symmetry_ok = false;
            report.witnesses.push(format!(
                "symmetry between {} and {}",
                map.grid.cube_label(c),
                map.grid.cube_label(other)
            ));
        }
    }
    // (iii) continued: a deterministic sweep of the two tables, so any
    // forward/reverse disagreement is caught whenever checks run at all
    if trials > 0 {
        for (c, v) in &map.table {
            for s in &v.set.cells {
                if !map.reverse.get(s).map_or(false, |p| p.contains(c)) {
                    report.symmetry_ok = false;
                    report.witnesses.push(format!(
                        "symmetry sweep: {} maps to {} but the reverse table disagrees",
                        map.grid.cube_label(c),
                        map.grid.cube_label(s)
                    ));
                }
            }
        }
        for (s, pre) in &map.reverse {
            for c in pre {
                if !map.table.get(c).map_or(false, |v| v.set.contains(s)) {
                    report.symmetry_ok = false;
                    report.witnesses.push(format!(
                        "symmetry sweep: reverse table sends {} to {} but the value disagrees",
                        map.grid.cube_label(s),
                        map.grid.cube_label(c)
                    ));
                }
            }
        }
    }
    report
}
