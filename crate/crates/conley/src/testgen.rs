//! Deterministic fixture and random-system generators used by tests and
//! the audit subcommand.
//!
//! Fixtures are sampled versions of simple circle and interval maps with
//! hand-checkable invariant sets. Random systems are seeded sampled maps
//! on small periodic grids, built so that the grid representation is
//! always well defined (images concentrated enough that hulls are
//! unambiguous).

use crate::dyadic::Dyadic;
use crate::error::Result;
use crate::grid::{Axis, CubicalSet, GridSpec, UnitBox};
use crate::sampling::{build_combo_map, build_mv_map, MvMap, SampleSet};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// Build a map straight from in-memory samples.
pub fn map_from_samples(samples: &SampleSet, grid: Arc<GridSpec>) -> Result<MvMap> {
    let cmap = build_combo_map(samples, &grid)?;
    build_mv_map(&cmap, grid)
}

/// Grid of the circle fixtures: period 1, sixteen coarse cells of width
/// 1/16 centred on the multiples of 1/16, refined four-fold (unit 1/64).
pub fn circle_grid() -> Arc<GridSpec> {
    Arc::new(GridSpec {
        axes: vec![Axis::Periodic { period: Dyadic::ONE }],
        cell_width: Dyadic::new(1, 4),
        offset: Dyadic::ZERO,
        refinement: 4,
    })
}

/// Samples of the angle-doubling circle map, one per coarse cell centre.
pub fn doubling_samples() -> SampleSet {
    let points = (0..16)
        .map(|i| {
            let x = Dyadic::new(i, 4);
            (vec![x], vec![x + x])
        })
        .collect();
    SampleSet { dim: 1, points }
}

/// The sampled angle-doubling map on the circle grid.
pub fn doubling_map() -> Result<MvMap> {
    map_from_samples(&doubling_samples(), circle_grid())
}

/// Neighbourhood of the fixed point 0 ~ 1 of the doubling map: the
/// interval `[15/16, 17/16]`, i.e. grid units `[62, 70]`.
pub fn doubling_fixed_point_neighbourhood(grid: &Arc<GridSpec>) -> CubicalSet {
    crate::grid::box_set(grid.clone(), &UnitBox { lo: vec![62], hi: vec![70] })
}

/// Neighbourhood of the period-two orbit {1/3, 2/3} of the doubling map,
/// thickened to the dyadic intervals `[17/64, 27/64] u [37/64, 47/64]`
/// (grid units `[19, 29] u [39, 49]`).
pub fn doubling_period_two_neighbourhood(grid: &Arc<GridSpec>) -> CubicalSet {
    let a = crate::grid::box_set(grid.clone(), &UnitBox { lo: vec![19], hi: vec![29] });
    let b = crate::grid::box_set(grid.clone(), &UnitBox { lo: vec![39], hi: vec![49] });
    a.union(&b).expect("same grid")
}

/// Grid of the contracting fixture: the interval `[-1/2, 1/2]` cut into
/// four coarse cells of width 1/4, refined four-fold.
pub fn interval_grid() -> Arc<GridSpec> {
    Arc::new(GridSpec {
        axes: vec![Axis::Bounded { lo: Dyadic::new(-1, 1), hi: Dyadic::new(1, 1) }],
        cell_width: Dyadic::new(1, 2),
        offset: Dyadic::new(-3, 3),
        refinement: 4,
    })
}

/// Samples of the halving map `x -> x/2` on the interval.
pub fn contracting_samples() -> SampleSet {
    let points = (-4..=4)
        .map(|k| (vec![Dyadic::new(k, 3)], vec![Dyadic::new(k, 4)]))
        .collect();
    SampleSet { dim: 1, points }
}

/// The sampled halving map on the interval grid.
pub fn contracting_map() -> Result<MvMap> {
    map_from_samples(&contracting_samples(), interval_grid())
}

/// A random sampled system on a small periodic grid. The underlying map is
/// a cellwise affine torus map `i_a -> m_a * i_{s(a)} + c_a (mod n)` with
/// small slopes, sampled at every coarse-cell centre, optionally widened by
/// a second sample one cell over. Adjacent cells then have adjacent images,
/// so hull boxes at shared faces stay unambiguous.
pub fn random_system(seed: u64, dim: usize) -> MvMap {
    // a draw can still produce an ambiguous hull at a shared face (tied
    // minimal covering arcs); deterministically redraw until it does not
    for attempt in 0u64..100 {
        if let Ok(map) = random_system_once(seed.wrapping_add(attempt.wrapping_mul(0x9e37)), dim) {
            return map;
        }
    }
    panic!("no representable random system after 100 draws");
}

fn random_system_once(seed: u64, dim: usize) -> Result<MvMap> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cells_per_axis: i64 = match dim {
        1 => [8, 12, 16][rng.gen_range(0..3)],
        _ => [5, 6][rng.gen_range(0..2)],
    };
    let refinement: u32 = [2, 4][rng.gen_range(0..2)];
    let width = Dyadic::new(1, 4); // 1/16
    let period = width * Dyadic::from_int(cells_per_axis);
    let grid = Arc::new(GridSpec {
        axes: (0..dim).map(|_| Axis::Periodic { period }).collect(),
        cell_width: width,
        offset: Dyadic::ZERO,
        refinement,
    });
    let centre = |idx: &[i64]| -> Vec<Dyadic> {
        idx.iter()
            .map(|&i| width * Dyadic::from_int(i.rem_euclid(cells_per_axis)))
            .collect()
    };
    // slopes kept small enough that a widened image still spans fewer
    // cells than the whole circle
    let slopes: Vec<i64> = (0..dim)
        .map(|_| [-1, 0, 1, 2][rng.gen_range(0..4)])
        .collect();
    let shifts: Vec<i64> = (0..dim).map(|_| rng.gen_range(0..cells_per_axis)).collect();
    let source: Vec<usize> = if dim == 2 && rng.gen_bool(0.5) {
        vec![1, 0] // swap the input axes
    } else {
        (0..dim).collect()
    };
    let mut points = Vec::new();
    let total = cells_per_axis.pow(dim as u32);
    for flat in 0..total {
        let mut idx = Vec::with_capacity(dim);
        let mut rest = flat;
        for _ in 0..dim {
            idx.push(rest % cells_per_axis);
            rest /= cells_per_axis;
        }
        let target: Vec<i64> = (0..dim)
            .map(|a| slopes[a] * idx[source[a]] + shifts[a])
            .collect();
        points.push((centre(&idx), centre(&target)));
        if rng.gen_bool(0.3) {
            let mut t2 = target.clone();
            let a = rng.gen_range(0..dim);
            t2[a] += 1;
            points.push((centre(&idx), centre(&t2)));
        }
    }
    let samples = SampleSet { dim, points };
    map_from_samples(&samples, grid)
}

/// A random face-closed nonempty subset of the domain of a map.
pub fn random_neighbourhood(map: &MvMap, seed: u64) -> CubicalSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tops: Vec<_> = map.domain.top_cells().cloned().collect();
    let picked: Vec<_> = tops
        .iter()
        .filter(|_| rng.gen_bool(0.5))
        .cloned()
        .collect();
    let cells = if picked.is_empty() { tops } else { picked };
    CubicalSet::from_cells(map.grid.clone(), cells)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doubling_map_cell_images() {
        let map = doubling_map().unwrap();
        let grid = map.grid.clone();
        // interior of coarse cell i maps onto coarse cell 2i mod 16
        for i in 0..16i64 {
            let x = Dyadic::new(i, 4); // centre of cell i
            let v = map.point_value(&[x]).unwrap();
            assert_eq!(v.bbox.lo, vec![(8 * i).rem_euclid(64)]);
            assert_eq!(v.bbox.hi[0] - v.bbox.lo[0], 4);
        }
        // a shared vertex maps into the hull of both neighbour images
        let vertex = map
            .table
            .iter()
            .find(|(c, _)| c.dim() == 0 && c.axes[0].lo == 4)
            .unwrap();
        let b = &vertex.1.bbox;
        assert_eq!((b.hi[0] - b.lo[0]), 12);
        assert!(map.verify_antitone());
        let _ = grid;
    }

    #[test]
    fn contracting_map_covers_domain() {
        let map = contracting_map().unwrap();
        assert_eq!(map.domain.top_cells().count(), 16); // 4 coarse cells x 4 units
        assert!(map.verify_antitone());
    }

    #[test]
    fn random_systems_are_reproducible() {
        let a = random_system(7, 1);
        let b = random_system(7, 1);
        assert_eq!(a.domain.cells, b.domain.cells);
        let c = random_system(8, 2);
        let coarse: i64 = (0..c.grid.dim()).map(|a| c.grid.coarse_cells(a)).product();
        assert!(coarse <= 40);
    }
}
