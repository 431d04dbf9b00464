//! Exact cubical geometry on uniform grids.
//!
//! A `GridSpec` fixes, per axis, either a periodic circle or a bounded
//! interval, a coarse sampling cell width, and a power-of-two refinement.
//! All compact sets are `CubicalSet`s: finite collections of elementary
//! cubes with integer coordinates at the representation scale
//! (`cell_width / refinement`). Coarse cell `i` spans representation units
//! `[i*r, (i+1)*r]`, so both the sampling grid and finer sets like vertex
//! pairs are exactly representable.

use crate::dyadic::Dyadic;
use crate::error::{ConleyError, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Axis {
    Periodic { period: Dyadic },
    Bounded { lo: Dyadic, hi: Dyadic },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub axes: Vec<Axis>,
    /// Coarse cell width `w`; coarse cell `i` spans `[o + i*w - w/2, o + i*w + w/2]`.
    pub cell_width: Dyadic,
    /// Coarse offset `o` (the centre of coarse cell 0).
    pub offset: Dyadic,
    /// Power-of-two refinement factor; representation unit = `w / refinement`.
    pub refinement: u32,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.axes.is_empty() {
            return Err(ConleyError::Config("grid dimension must be positive".into()));
        }
        if self.refinement == 0 || !self.refinement.is_power_of_two() {
            return Err(ConleyError::Config("refinement must be a positive power of two".into()));
        }
        if self.cell_width <= Dyadic::ZERO {
            return Err(ConleyError::Config("cell width must be positive".into()));
        }
        for (i, ax) in self.axes.iter().enumerate() {
            match ax {
                Axis::Periodic { period } => {
                    if period.div_exact_int(&self.cell_width).filter(|n| *n > 0).is_none() {
                        return Err(ConleyError::Config(format!(
                            "axis {i}: cell width must divide the period"
                        )));
                    }
                }
                Axis::Bounded { lo, hi } => {
                    if hi <= lo {
                        return Err(ConleyError::Config(format!("axis {i}: empty domain")));
                    }
                    if self.to_units(*lo) != Some(0) {
                        return Err(ConleyError::Config(format!(
                            "axis {i}: domain must start at offset - cell_width/2"
                        )));
                    }
                    if (*hi - *lo).div_exact_int(&self.cell_width).filter(|n| *n > 0).is_none() {
                        return Err(ConleyError::Config(format!(
                            "axis {i}: cell width must divide the domain length"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    /// Representation unit length `w / r`.
    pub fn unit(&self) -> Dyadic {
        let r = self.refinement as i64;
        // w / r with r a power of two: exact
        Dyadic::new(self.cell_width.numerator(), self.cell_width.scale() + r.trailing_zeros())
    }

    /// Left edge of coarse cell 0: `o - w/2`.
    pub fn base(&self) -> Dyadic {
        self.offset - self.cell_width.half()
    }

    /// Exact conversion of a coordinate to representation units, if aligned.
    pub fn to_units(&self, x: Dyadic) -> Option<i64> {
        (x - self.base()).div_exact_int(&self.unit())
    }

    pub fn from_units(&self, u: i64) -> Dyadic {
        self.base() + self.unit() * Dyadic::from_int(u)
    }

    /// Period of a periodic axis in representation units.
    pub fn period_units(&self, axis: usize) -> Option<i64> {
        match &self.axes[axis] {
            Axis::Periodic { period } => period.div_exact_int(&self.unit()),
            Axis::Bounded { .. } => None,
        }
    }

    /// Domain range of a bounded axis in representation units.
    pub fn bounds_units(&self, axis: usize) -> Option<(i64, i64)> {
        match &self.axes[axis] {
            Axis::Bounded { lo, hi } => Some((self.to_units(*lo)?, self.to_units(*hi)?)),
            Axis::Periodic { .. } => None,
        }
    }

    pub fn reduce(&self, axis: usize, u: i64) -> i64 {
        match self.period_units(axis) {
            Some(p) => u.rem_euclid(p),
            None => u,
        }
    }

    /// Number of coarse cells along an axis.
    pub fn coarse_cells(&self, axis: usize) -> i64 {
        let r = self.refinement as i64;
        match &self.axes[axis] {
            Axis::Periodic { .. } => self.period_units(axis).unwrap() / r,
            Axis::Bounded { .. } => {
                let (lo, hi) = self.bounds_units(axis).unwrap();
                (hi - lo) / r // coarse cells fully inside the domain
            }
        }
    }

    /// Coarse cell indices (per axis) whose closed cell contains unit coordinate `u`.
    pub fn coarse_cells_containing(&self, axis: usize, u: i64) -> Vec<i64> {
        let r = self.refinement as i64;
        let mut out = Vec::new();
        match &self.axes[axis] {
            Axis::Periodic { .. } => {
                let p = self.period_units(axis).unwrap();
                let u = u.rem_euclid(p);
                let n = p / r;
                for i in 0..n {
                    let (a, b) = (i * r, (i + 1) * r);
                    if (u - a).rem_euclid(p) <= b - a {
                        out.push(i);
                    }
                }
            }
            Axis::Bounded { .. } => {
                let (lo, hi) = self.bounds_units(axis).unwrap();
                if u < lo || u > hi {
                    return out;
                }
                let q = (u - lo).div_euclid(r);
                for i in [q - 1, q] {
                    if i >= 0 && (i + 1) * r + lo <= hi && i * r + lo <= u && u <= (i + 1) * r + lo {
                        out.push(i);
                    }
                }
            }
        }
        out
    }

    /// Coarse cell indices whose *closed* cell contains the coordinate `x`
    /// (exact dyadic comparisons; `x` need not be grid-aligned). On a
    /// periodic axis the index is reduced; on a bounded axis, out-of-domain
    /// coordinates yield no cells.
    pub fn coarse_cells_containing_point(&self, axis: usize, x: Dyadic) -> Vec<i64> {
        let w = self.cell_width;
        let b = self.base();
        let n = self.coarse_cells(axis);
        let mut out = Vec::new();
        match &self.axes[axis] {
            Axis::Periodic { period } => {
                // reduce x into [b, b + period)
                let k = (x - b).div_floor(period);
                let xr = x - *period * Dyadic::from_int(k);
                let q = (xr - b).div_floor(&w);
                for i in [q - 1, q, q + 1] {
                    let lo = b + w * Dyadic::from_int(i);
                    if lo <= xr && xr <= lo + w {
                        out.push(i.rem_euclid(n));
                    }
                }
                out.sort_unstable();
                out.dedup();
            }
            Axis::Bounded { lo: dlo, hi: dhi } => {
                if x < *dlo || x > *dhi {
                    return out;
                }
                let q = (x - b).div_floor(&w);
                for i in [q - 1, q] {
                    let lo = b + w * Dyadic::from_int(i);
                    if i >= 0 && i < n && lo <= x && x <= lo + w {
                        out.push(i);
                    }
                }
            }
        }
        out
    }

    /// The carrier elementary cube of a point: the unique cube whose
    /// relative interior contains it. `None` if outside a bounded domain.
    pub fn carrier(&self, x: &[Dyadic]) -> Option<Cube> {
        assert_eq!(x.len(), self.dim());
        let unit = self.unit();
        let b = self.base();
        let mut axes = Vec::with_capacity(x.len());
        for (i, &xi) in x.iter().enumerate() {
            let q = xi - b;
            let k = q.div_floor(&unit);
            let aligned = q == unit * Dyadic::from_int(k);
            match &self.axes[i] {
                Axis::Periodic { .. } => {
                    let p = self.period_units(i).unwrap();
                    axes.push(CubeAxis { lo: k.rem_euclid(p), ext: !aligned });
                }
                Axis::Bounded { lo, hi } => {
                    if xi < *lo || xi > *hi {
                        return None;
                    }
                    let (_, bhi) = self.bounds_units(i).unwrap();
                    if aligned {
                        axes.push(CubeAxis { lo: k, ext: false });
                    } else if k + 1 <= bhi {
                        axes.push(CubeAxis { lo: k, ext: true });
                    } else {
                        return None;
                    }
                }
            }
        }
        Some(Cube { axes })
    }

    pub fn cube_label(&self, c: &Cube) -> String {
        let parts: Vec<String> = c
            .axes
            .iter()
            .map(|ca| {
                let lo = self.from_units(ca.lo);
                if ca.ext {
                    format!("[{},{}]", lo, self.from_units(ca.lo + 1))
                } else {
                    format!("{{{}}}", lo)
                }
            })
            .collect();
        parts.join("x")
    }
}

/// One axis of an elementary cube: the interval `[lo, lo]` (degenerate) or
/// `[lo, lo+1]` in representation units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CubeAxis {
    pub lo: i64,
    pub ext: bool,
}

/// An elementary cube: a product of unit or degenerate intervals at the
/// representation scale. On periodic axes `lo` is reduced modulo the period.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cube {
    pub axes: Vec<CubeAxis>,
}

impl Cube {
    pub fn new(grid: &GridSpec, axes: Vec<CubeAxis>) -> Cube {
        assert_eq!(axes.len(), grid.dim());
        let axes = axes
            .into_iter()
            .enumerate()
            .map(|(i, a)| CubeAxis { lo: grid.reduce(i, a.lo), ext: a.ext })
            .collect();
        Cube { axes }
    }

    pub fn dim(&self) -> usize {
        self.axes.iter().filter(|a| a.ext).count()
    }

    pub fn is_top(&self) -> bool {
        self.axes.iter().all(|a| a.ext)
    }

    /// Proper faces of codimension one.
    pub fn faces(&self, grid: &GridSpec) -> Vec<Cube> {
        let mut out = Vec::new();
        for (i, a) in self.axes.iter().enumerate() {
            if a.ext {
                for lo in [a.lo, a.lo + 1] {
                    let mut axes = self.axes.clone();
                    axes[i] = CubeAxis { lo: grid.reduce(i, lo), ext: false };
                    out.push(Cube { axes });
                }
            }
        }
        out
    }

    /// All cells of the ambient grid that contain this cube as a face
    /// (including the cube itself), restricted to the grid domain.
    pub fn cofaces(&self, grid: &GridSpec) -> Vec<Cube> {
        let mut choices: Vec<Vec<CubeAxis>> = Vec::with_capacity(self.axes.len());
        for (i, a) in self.axes.iter().enumerate() {
            let mut c = Vec::new();
            if a.ext {
                c.push(*a);
            } else {
                c.push(*a);
                for lo in [a.lo - 1, a.lo] {
                    if let Some(p) = grid.period_units(i) {
                        c.push(CubeAxis { lo: lo.rem_euclid(p), ext: true });
                    } else {
                        let (blo, bhi) = grid.bounds_units(i).unwrap();
                        if lo >= blo && lo + 1 <= bhi {
                            c.push(CubeAxis { lo, ext: true });
                        }
                    }
                }
            }
            choices.push(c);
        }
        cartesian(&choices).into_iter().map(|axes| Cube { axes }).collect()
    }

    /// Top-dimensional cofaces only.
    pub fn top_cofaces(&self, grid: &GridSpec) -> Vec<Cube> {
        self.cofaces(grid).into_iter().filter(Cube::is_top).collect()
    }

    /// Unit-coordinate span `[lo, hi]` per axis (hi unreduced: `lo + ext`).
    pub fn span(&self) -> Vec<(i64, i64)> {
        self.axes.iter().map(|a| (a.lo, a.lo + a.ext as i64)).collect()
    }
}

fn cartesian<T: Clone>(choices: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = vec![Vec::new()];
    for c in choices {
        let mut next = Vec::with_capacity(out.len() * c.len());
        for prefix in &out {
            for item in c {
                let mut v = prefix.clone();
                v.push(item.clone());
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// An axis-aligned hypercuboid in unit coordinates. On periodic axes
/// `hi` may exceed the period (a wrapping arc); cells are reduced when
/// the box is materialised.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitBox {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl UnitBox {
    pub fn width(&self, axis: usize) -> i64 {
        self.hi[axis] - self.lo[axis]
    }
}

/// A finite collection of elementary cubes over a shared grid.
///
/// Most constructors return face-closed sets. `interior` and `open_in`
/// return open cell collections (star criterion) used for containment
/// checks; they are not face-closed in general.
#[derive(Debug, Clone)]
pub struct CubicalSet {
    pub grid: Arc<GridSpec>,
    pub cells: BTreeSet<Cube>,
}

impl PartialEq for CubicalSet {
    fn eq(&self, other: &CubicalSet) -> bool {
        self.grid == other.grid && self.cells == other.cells
    }
}
impl Eq for CubicalSet {}

impl CubicalSet {
    pub fn empty(grid: Arc<GridSpec>) -> CubicalSet {
        CubicalSet { grid, cells: BTreeSet::new() }
    }

    pub fn from_cells<I: IntoIterator<Item = Cube>>(grid: Arc<GridSpec>, cells: I) -> CubicalSet {
        let mut s = CubicalSet { grid, cells: cells.into_iter().collect() };
        s.close();
        s
    }

    /// Collection without taking the face closure.
    pub fn from_cells_raw<I: IntoIterator<Item = Cube>>(grid: Arc<GridSpec>, cells: I) -> CubicalSet {
        CubicalSet { grid, cells: cells.into_iter().collect() }
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn contains(&self, c: &Cube) -> bool {
        self.cells.contains(c)
    }

    pub fn is_subset(&self, other: &CubicalSet) -> bool {
        self.cells.is_subset(&other.cells)
    }

    pub fn top_cells(&self) -> impl Iterator<Item = &Cube> {
        self.cells.iter().filter(|c| c.is_top())
    }

    /// Cells not properly contained in any other cell of the set.
    pub fn maximal_cells(&self) -> Vec<&Cube> {
        self.cells
            .iter()
            .filter(|c| {
                c.is_top()
                    || !c
                        .cofaces(&self.grid)
                        .iter()
                        .any(|cf| cf.dim() > c.dim() && self.cells.contains(cf))
            })
            .collect()
    }

    fn check_grid(&self, other: &CubicalSet) -> Result<()> {
        if self.grid != other.grid {
            return Err(ConleyError::GridMismatch("sets built over different grids".into()));
        }
        Ok(())
    }

    fn close(&mut self) {
        let mut stack: Vec<Cube> = self.cells.iter().cloned().collect();
        while let Some(c) = stack.pop() {
            for f in c.faces(&self.grid) {
                if self.cells.insert(f.clone()) {
                    stack.push(f);
                }
            }
        }
    }

    pub fn closure(&self) -> CubicalSet {
        let mut s = self.clone();
        s.close();
        s
    }

    pub fn is_closed(&self) -> bool {
        self.cells
            .iter()
            .all(|c| c.faces(&self.grid).iter().all(|f| self.cells.contains(f)))
    }

    pub fn union(&self, other: &CubicalSet) -> Result<CubicalSet> {
        self.check_grid(other)?;
        let mut cells = self.cells.clone();
        cells.extend(other.cells.iter().cloned());
        Ok(CubicalSet { grid: self.grid.clone(), cells })
    }

    pub fn intersection(&self, other: &CubicalSet) -> Result<CubicalSet> {
        self.check_grid(other)?;
        Ok(CubicalSet {
            grid: self.grid.clone(),
            cells: self.cells.intersection(&other.cells).cloned().collect(),
        })
    }

    /// Plain cell difference (no closure). The pointwise set `|A| \ |B|`
    /// equals the union of interiors of exactly these cells when `B` is
    /// face-closed.
    pub fn difference(&self, other: &CubicalSet) -> Result<CubicalSet> {
        self.check_grid(other)?;
        Ok(CubicalSet {
            grid: self.grid.clone(),
            cells: self.cells.difference(&other.cells).cloned().collect(),
        })
    }

    /// Closed difference `cl(A \ B)`.
    pub fn closed_difference(&self, other: &CubicalSet) -> Result<CubicalSet> {
        Ok(self.difference(other)?.closure())
    }

    /// Cells whose every containing top-dimensional ambient cell lies in
    /// the set (open star criterion). The result underlies the point-set
    /// interior of the polyhedron relative to the grid domain; it is an
    /// open cell collection, not face-closed in general.
    pub fn interior(&self) -> CubicalSet {
        let cells = self
            .cells
            .iter()
            .filter(|c| c.top_cofaces(&self.grid).iter().all(|t| self.cells.contains(t)))
            .cloned()
            .collect();
        CubicalSet { grid: self.grid.clone(), cells }
    }

    /// Relative interior within `ambient`: cells whose every top coface
    /// *belonging to `ambient`* lies in the set. Open in `|ambient|`.
    pub fn open_in(&self, ambient: &CubicalSet) -> Result<CubicalSet> {
        self.check_grid(ambient)?;
        let cells = self
            .cells
            .iter()
            .filter(|c| {
                c.top_cofaces(&self.grid)
                    .iter()
                    .filter(|t| ambient.cells.contains(t))
                    .all(|t| self.cells.contains(t))
            })
            .cloned()
            .collect();
        Ok(CubicalSet { grid: self.grid.clone(), cells })
    }

    /// Topological boundary `bd A = cl(A \ int A)` in the grid domain.
    pub fn boundary(&self) -> CubicalSet {
        let int = self.interior();
        self.closed_difference(&int).expect("same grid")
    }

    /// Face closure of all top cells within combinatorial distance `k`.
    /// `collar(S, 0) = S`.
    pub fn collar(&self, k: u32) -> CubicalSet {
        let mut cur = self.clone();
        for _ in 0..k {
            let mut add: BTreeSet<Cube> = BTreeSet::new();
            for c in &cur.cells {
                for t in c.top_cofaces(&self.grid) {
                    add.insert(t);
                }
            }
            cur.cells.extend(add);
            cur.close();
        }
        cur
    }

    /// The smallest hypercuboid containing the set, as per-axis unit
    /// intervals. On periodic axes: the unique minimal covering arc, or
    /// `HullAmbiguous` when the input spreads over at least half the period.
    pub fn hull_box(&self) -> Result<UnitBox> {
        if self.is_empty() {
            return Err(ConleyError::EmptyHull);
        }
        let d = self.grid.dim();
        let mut lo = vec![0i64; d];
        let mut hi = vec![0i64; d];
        for axis in 0..d {
            let spans: Vec<(i64, i64)> =
                self.cells.iter().map(|c| (c.axes[axis].lo, c.axes[axis].lo + c.axes[axis].ext as i64)).collect();
            match self.grid.period_units(axis) {
                None => {
                    lo[axis] = spans.iter().map(|s| s.0).min().unwrap();
                    hi[axis] = spans.iter().map(|s| s.1).max().unwrap();
                }
                Some(p) => {
                    let (a, b) = minimal_arc(&spans, p, axis)?;
                    lo[axis] = a;
                    hi[axis] = b;
                }
            }
        }
        Ok(UnitBox { lo, hi })
    }

    /// Face closure of the minimal hypercuboid containing the set.
    pub fn hull(&self) -> Result<CubicalSet> {
        let b = self.hull_box()?;
        Ok(box_set(self.grid.clone(), &b))
    }

    /// Exact distance between the polyhedra of two nonempty sets in the
    /// sup metric, in representation units (dyadic-exact once multiplied
    /// by the unit length).
    pub fn distance_units(&self, other: &CubicalSet) -> Result<Option<i64>> {
        self.check_grid(other)?;
        if self.is_empty() || other.is_empty() {
            return Ok(None);
        }
        let d = self.grid.dim();
        let mut best: Option<i64> = None;
        for a in &self.cells {
            for b in &other.cells {
                let mut sup = 0i64;
                for axis in 0..d {
                    let (a0, a1) = (a.axes[axis].lo, a.axes[axis].lo + a.axes[axis].ext as i64);
                    let (b0, b1) = (b.axes[axis].lo, b.axes[axis].lo + b.axes[axis].ext as i64);
                    let dist = match self.grid.period_units(axis) {
                        None => (b0 - a1).max(a0 - b1).max(0),
                        Some(p) => {
                            // arcs on a circle: try both relative placements
                            let direct = (b0 - a1).max(a0 - b1).max(0);
                            let shifted1 = (b0 + p - a1).max(a0 - (b1 + p)).max(0);
                            let shifted2 = (b0 - (a1 + p)).max(a0 + p - b1).max(0);
                            direct.min(shifted1).min(shifted2)
                        }
                    };
                    sup = sup.max(dist);
                }
                best = Some(best.map_or(sup, |b: i64| b.min(sup)));
            }
        }
        Ok(best)
    }
}

/// Minimal covering arc of a family of unit spans on a circle of `p` units.
/// Works at half-unit resolution so vertex-only inputs get exact gaps.
fn minimal_arc(spans: &[(i64, i64)], p: i64, axis: usize) -> Result<(i64, i64)> {
    let n = (2 * p) as usize;
    let mut marked = vec![false; n];
    for &(a, b) in spans {
        for h in 2 * a..=2 * b {
            marked[(h.rem_euclid(2 * p)) as usize] = true;
        }
    }
    if marked.iter().all(|&m| m) {
        return Err(ConleyError::HullAmbiguous { axis });
    }
    // largest circular run of unmarked half-positions, scanned from a
    // marked anchor so no run wraps past the scan start
    let mut best_len = 0usize;
    let mut best_start = 0usize;
    let anchor = (0..n).find(|&j| marked[j]).unwrap();
    let mut run = 0usize;
    let mut run_start = 0usize;
    for k in 1..=n {
        let j = (anchor + k) % n;
        if !marked[j] {
            if run == 0 {
                run_start = j;
            }
            run += 1;
        } else {
            if run > best_len {
                best_len = run;
                best_start = run_start;
            }
            run = 0;
        }
    }
    let gap = best_len as i64; // in half units
    let arc_half = 2 * p - gap - 1; // covered span endpoints inclusive
    if arc_half >= p {
        return Err(ConleyError::HullAmbiguous { axis });
    }
    // arc runs from the half-position after the gap to the one before it
    let start_half = (best_start as i64 + gap).rem_euclid(2 * p);
    debug_assert_eq!(start_half % 2, 0);
    let lo = start_half / 2;
    let hi = lo + (arc_half + 1) / 2;
    Ok((lo, hi))
}

/// Face closure of the hypercuboid `[lo, hi]` (unit coordinates; on periodic
/// axes `hi` may exceed the period, and a span of at least the period fills
/// the whole circle).
pub fn box_set(grid: Arc<GridSpec>, b: &UnitBox) -> CubicalSet {
    let d = grid.dim();
    let mut choices: Vec<Vec<CubeAxis>> = Vec::with_capacity(d);
    for axis in 0..d {
        let (lo, hi) = (b.lo[axis], b.hi[axis]);
        let mut c = Vec::new();
        match grid.period_units(axis) {
            Some(p) if hi - lo >= p => {
                for k in 0..p {
                    c.push(CubeAxis { lo: k, ext: false });
                    c.push(CubeAxis { lo: k, ext: true });
                }
            }
            _ => {
                for k in lo..=hi {
                    c.push(CubeAxis { lo: grid.reduce(axis, k), ext: false });
                    if k < hi {
                        c.push(CubeAxis { lo: grid.reduce(axis, k), ext: true });
                    }
                }
            }
        }
        choices.push(c);
    }
    let cells = cartesian(&choices).into_iter().map(|axes| Cube { axes });
    CubicalSet::from_cells_raw(grid, cells)
}

/// Whether every cell of the (face-closed) box `b` lies in `s`.
pub fn box_subset(grid: &Arc<GridSpec>, b: &UnitBox, s: &CubicalSet) -> bool {
    box_set(grid.clone(), b).cells.iter().all(|c| s.contains(c))
}

impl fmt::Display for CubicalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.cells.iter().map(|c| self.grid.cube_label(c)).collect();
        write!(f, "{{{}}}", labels.join(", "))
    }
}
