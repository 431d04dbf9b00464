//! Isolation of invariant sets inside candidate neighbourhoods.
//!
//! Two notions are checked. The weak one only requires the invariant part
//! to sit in the interior of the neighbourhood. The strong ones additionally
//! demand either a metric margin — the distance from the invariant part to
//! the boundary must exceed the largest image diameter — or that the image
//! of the invariant part stays interior as well. All comparisons are exact.

use crate::dyadic::Dyadic;
use crate::dynamics::{image, invariant_parts, InvariantParts};
use crate::error::{ConleyError, Result};
use crate::grid::CubicalSet;
use crate::sampling::MvMap;
use serde::Serialize;

/// The part of `cl A` accumulated by points of `F(A)` escaping `A`:
/// `cl(A) /\ cl(F(A) \ A)`.
pub fn f_boundary(map: &MvMap, a: &CubicalSet) -> Result<CubicalSet> {
    let cl_a = a.closure();
    let escaped = image(map, &cl_a)?.closed_difference(&cl_a)?;
    cl_a.intersection(&escaped)
}

/// Exact isolation diagnostics for a candidate neighbourhood.
#[derive(Debug, Clone, Serialize)]
pub struct IsolationReport {
    /// Invariant part interior to the neighbourhood.
    pub weak: bool,
    /// Distance margin beats every image diameter.
    pub strong_metric: bool,
    /// Image of the invariant part also interior.
    pub strong_setwise: bool,
    /// Distance from the invariant part to the neighbourhood boundary.
    pub dist_inv_to_boundary: Option<Dyadic>,
    /// Largest diameter of a single image `F(x)`, over `x` in the
    /// neighbourhood (sup metric).
    pub max_image_diameter: Option<Dyadic>,
    pub inv_cells: usize,
    pub witnesses: Vec<String>,
}

impl IsolationReport {
    pub fn is_isolating(&self) -> bool {
        self.weak
    }
}

/// Largest per-axis extent of a value box, as an exact length. On a
/// periodic axis an arc of length `L` has diameter `min(L, p/2)`.
fn box_diameter(map: &MvMap, lo: &[i64], hi: &[i64]) -> Dyadic {
    let unit = map.grid.unit();
    let mut best = Dyadic::ZERO;
    for axis in 0..map.grid.dim() {
        let len = hi[axis] - lo[axis];
        let d = match map.grid.period_units(axis) {
            Some(p) if 2 * len > p => (unit * Dyadic::from_int(p)).half(),
            _ => unit * Dyadic::from_int(len),
        };
        if d > best {
            best = d;
        }
    }
    best
}

/// Full isolation check of a face-closed neighbourhood. Errors if the
/// neighbourhood leaves the domain of the map.
pub fn check_isolation(map: &MvMap, n_set: &CubicalSet) -> Result<(IsolationReport, InvariantParts)> {
    for c in &n_set.cells {
        if !map.table.contains_key(c) {
            return Err(ConleyError::IsolationFailure(format!(
                "neighbourhood cell {} outside the domain of the map",
                map.grid.cube_label(c)
            )));
        }
    }
    let parts = invariant_parts(map, n_set);
    let interior = n_set.interior();
    let mut witnesses = Vec::new();

    // on a boundaryless (all-periodic) grid the whole space invariant
    // leaves no room for an exit set; bounded grids keep a genuine
    // topological boundary, so their full domain can still isolate
    let boundaryless = (0..map.grid.dim()).all(|a| map.grid.period_units(a).is_some());
    let full = crate::pairs::full_domain(&map.grid);
    let whole_space = boundaryless && parts.inv.cells == full.cells;
    let weak = parts.inv.is_subset(&interior) && !whole_space;
    if whole_space {
        // the whole phase space is invariant: nothing is left over to act
        // as an exit set, so no neighbourhood data can isolate
        witnesses.push("invariant part is the whole phase space".into());
    } else if !weak {
        if let Some(c) = parts.inv.cells.difference(&interior.cells).next() {
            witnesses.push(format!(
                "invariant cell {} touches the boundary",
                map.grid.cube_label(c)
            ));
        }
    }

    // metric margin: dist(Inv, bd N) > max diam F(x)
    let boundary = n_set.boundary();
    let unit = map.grid.unit();
    let dist = if parts.inv.is_empty() || boundary.is_empty() {
        None
    } else {
        parts
            .inv
            .distance_units(&boundary)?
            .map(|u| unit * Dyadic::from_int(u))
    };
    let mut max_diam: Option<Dyadic> = None;
    for c in &n_set.cells {
        let val = &map.table[c];
        let d = box_diameter(map, &val.bbox.lo, &val.bbox.hi);
        if max_diam.map_or(true, |m| d > m) {
            max_diam = Some(d);
        }
    }
    let strong_metric = match (dist, max_diam) {
        (Some(d), Some(m)) => d > m,
        // empty invariant part or empty boundary: the margin is vacuous
        (None, _) => parts.inv.is_empty() || boundary.is_empty(),
        (_, None) => false,
    };
    if !strong_metric {
        if let (Some(d), Some(m)) = (dist, max_diam) {
            witnesses.push(format!(
                "distance to boundary {d} does not exceed max image diameter {m}"
            ));
        }
    }

    // setwise variant: Inv N and F(Inv N) both interior
    let strong_setwise = if parts.inv.is_empty() {
        true
    } else {
        let f_inv = image(map, &parts.inv)?;
        let inside = f_inv.is_subset(&interior);
        if !inside {
            if let Some(c) = f_inv.cells.difference(&interior.cells).next() {
                witnesses.push(format!(
                    "image cell {} of the invariant part escapes the interior",
                    map.grid.cube_label(c)
                ));
            }
        }
        weak && inside
    };

    let report = IsolationReport {
        weak,
        strong_metric,
        strong_setwise,
        dist_inv_to_boundary: dist,
        max_image_diameter: max_diam,
        inv_cells: parts.inv.len(),
        witnesses,
    };
    Ok((report, parts))
}

/// Grow an isolating neighbourhood around a seed set: take combinatorial
/// collars of increasing width, clipped to the domain of the map, and
/// return the first that isolates its invariant part.
pub fn grow_isolating_neighbourhood(
    map: &MvMap,
    seed: &CubicalSet,
    max_k: u32,
) -> Result<(CubicalSet, IsolationReport, InvariantParts)> {
    let dom = map.effective_domain();
    let closed_seed = seed.closure();
    for k in 0..=max_k {
        let candidate = closed_seed.collar(k).intersection(&dom)?;
        if candidate.is_empty() {
            continue;
        }
        if let Ok((report, parts)) = check_isolation(map, &candidate) {
            if report.weak && !parts.inv.is_empty() {
                return Ok((candidate, report, parts));
            }
        }
    }
    Err(ConleyError::NoIsolatingCollar { max_k })
}
