//! Cell-level dynamics of a multivalued map: images, preimages, in-set
//! reachability, and invariant parts of a neighbourhood.
//!
//! Everything works on the cell transition relation `t -> t'` iff
//! `t'` is a cell of the value box of `t`. Because the stored map is
//! antitone under the face relation, this relation captures the point-level
//! dynamics exactly: a point interior to `t` steps precisely into the
//! polyhedron of the value box of `t`.

use crate::error::{ConleyError, Result};
use crate::grid::{Cube, CubicalSet};
use crate::sampling::MvMap;
use std::collections::BTreeSet;

/// Image `F(A)`: the union of value boxes over the cells of `A`. Errors if
/// some cell of `A` lies outside the domain of the map.
pub fn image(map: &MvMap, set: &CubicalSet) -> Result<CubicalSet> {
    let mut cells: BTreeSet<Cube> = BTreeSet::new();
    for c in &set.cells {
        let val = map.table.get(c).ok_or_else(|| {
            ConleyError::PreconditionViolated(format!(
                "cell {} outside the domain of the map",
                map.grid.cube_label(c)
            ))
        })?;
        cells.extend(val.set.cells.iter().cloned());
    }
    Ok(CubicalSet::from_cells_raw(map.grid.clone(), cells))
}

/// Preimage `F^{-1}(A) = {x : F(x) meets A}` intersected with the domain of
/// the map. Face-closed because values grow along faces.
pub fn preimage(map: &MvMap, set: &CubicalSet) -> CubicalSet {
    let mut cells: BTreeSet<Cube> = BTreeSet::new();
    for c in &set.cells {
        if let Some(pre) = map.reverse.get(c) {
            cells.extend(pre.iter().cloned());
        }
    }
    CubicalSet::from_cells_raw(map.grid.clone(), cells)
}

/// Successor cells of `cube` within `within`: cells of the value box that
/// belong to `within`. Cells outside the map's domain have no successors.
pub fn successors_in<'a>(map: &'a MvMap, cube: &Cube, within: &CubicalSet) -> Vec<Cube> {
    match map.table.get(cube) {
        Some(val) => val
            .set
            .cells
            .iter()
            .filter(|c| within.contains(c))
            .cloned()
            .collect(),
        None => Vec::new(),
    }
}

/// Predecessor cells of `cube` within `within`.
pub fn predecessors_in(map: &MvMap, cube: &Cube, within: &CubicalSet) -> Vec<Cube> {
    match map.reverse.get(cube) {
        Some(pre) => pre.iter().filter(|c| within.contains(c)).cloned().collect(),
        None => Vec::new(),
    }
}

/// Forward reachability closure within `within`: the set of cells reachable
/// from `seed` by solutions staying in `within`, including `seed` itself.
/// Face-closed whenever `seed` and `within` are.
pub fn reach_forward(map: &MvMap, seed: &CubicalSet, within: &CubicalSet) -> CubicalSet {
    let mut cells: BTreeSet<Cube> = seed
        .cells
        .iter()
        .filter(|c| within.contains(c))
        .cloned()
        .collect();
    let mut stack: Vec<Cube> = cells.iter().cloned().collect();
    while let Some(c) = stack.pop() {
        for s in successors_in(map, &c, within) {
            if cells.insert(s.clone()) {
                stack.push(s);
            }
        }
    }
    CubicalSet::from_cells_raw(map.grid.clone(), cells)
}

/// Cells of `n_set` from which an in-set solution segment of length `|n|`
/// departs (`n > 0`), arrives (`n < 0`), or trivially exists (`n = 0`,
/// restricted to the domain of the map).
pub fn constrained_domain(map: &MvMap, n_set: &CubicalSet, n: i64) -> CubicalSet {
    let mut alive: BTreeSet<Cube> = n_set
        .cells
        .iter()
        .filter(|c| map.table.contains_key(c))
        .cloned()
        .collect();
    for _ in 0..n.abs() {
        alive = alive
            .iter()
            .filter(|c| {
                let step = if n > 0 {
                    successors_in(map, c, n_set)
                } else {
                    predecessors_in(map, c, n_set)
                };
                step.iter().any(|s| alive.contains(s))
            })
            .cloned()
            .collect();
    }
    CubicalSet::from_cells_raw(map.grid.clone(), alive)
}

/// The three invariant parts of a neighbourhood: cells admitting an
/// infinite forward orbit, an infinite backward orbit, and both.
#[derive(Debug, Clone)]
pub struct InvariantParts {
    pub inv_plus: CubicalSet,
    pub inv_minus: CubicalSet,
    pub inv: CubicalSet,
}

/// Invariant parts by iterated trimming: repeatedly delete cells with no
/// successor (forward part) or no predecessor (backward part) inside the
/// current set; the fixpoints are the maximal sets in which every cell has
/// an infinite orbit of the respective direction. Their intersection is
/// the invariant part, since a forward and a backward orbit through the
/// same cell concatenate to a full solution.
pub fn invariant_parts(map: &MvMap, n_set: &CubicalSet) -> InvariantParts {
    let trim = |forward: bool| -> CubicalSet {
        let mut cur = CubicalSet::from_cells_raw(map.grid.clone(), n_set.cells.iter().cloned());
        loop {
            let dead: Vec<Cube> = cur
                .cells
                .iter()
                .filter(|c| {
                    if forward {
                        successors_in(map, c, &cur).is_empty()
                    } else {
                        predecessors_in(map, c, &cur).is_empty()
                    }
                })
                .cloned()
                .collect();
            if dead.is_empty() {
                break;
            }
            for c in dead {
                cur.cells.remove(&c);
            }
        }
        cur
    };
    let inv_plus = trim(true);
    let inv_minus = trim(false);
    let inv = inv_plus.intersection(&inv_minus).expect("same grid");
    InvariantParts { inv_plus, inv_minus, inv }
}

/// Result of the brute-force oracle: the parts plus a flag telling whether
/// the requested horizon was long enough to be conclusive.
#[derive(Debug, Clone)]
pub struct OracleOutcome {
    pub parts: InvariantParts,
    /// `false` when the horizon was below the sound bound (the cell count
    /// of the neighbourhood) and the fixpoint was not reached early.
    pub horizon_sound: bool,
}

/// Independent computation of the invariant parts by bounded-horizon
/// dynamic programming: a cell survives `h` forward steps if some successor
/// survives `h - 1`. A path of length `|cells of N|` must revisit a cell,
/// hence closes to an infinite orbit, so that horizon is exact.
pub fn oracle_invariant(map: &MvMap, n_set: &CubicalSet, horizon: usize) -> OracleOutcome {
    let sound_bound = n_set.cells.len();
    let mut converged = [true, true];
    let mut survive = |forward: bool| -> BTreeSet<Cube> {
        let mut alive: BTreeSet<Cube> = n_set.cells.iter().cloned().collect();
        let mut fixed = false;
        for _ in 0..horizon {
            let next: BTreeSet<Cube> = alive
                .iter()
                .filter(|c| {
                    let neighbours = if forward {
                        successors_in(map, c, n_set)
                    } else {
                        predecessors_in(map, c, n_set)
                    };
                    neighbours.iter().any(|s| alive.contains(s))
                })
                .cloned()
                .collect();
            if next == alive {
                fixed = true;
                break;
            }
            alive = next;
        }
        converged[forward as usize] = fixed || horizon >= sound_bound;
        alive
    };
    let plus_cells = survive(true);
    let minus_cells = survive(false);
    drop(survive);
    let inv_plus = CubicalSet::from_cells_raw(map.grid.clone(), plus_cells);
    let inv_minus = CubicalSet::from_cells_raw(map.grid.clone(), minus_cells);
    let inv = inv_plus.intersection(&inv_minus).expect("same grid");
    OracleOutcome {
        parts: InvariantParts { inv_plus, inv_minus, inv },
        horizon_sound: converged[0] && converged[1],
    }
}
