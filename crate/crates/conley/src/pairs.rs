//! Weak index pairs: construction, axiom checking, and the algebra of
//! pairs used to compare indices across different choices.
//!
//! A weak index pair `(P1, P2)` in a neighbourhood `N` consists of closed
//! sets `P2 <= P1 <= N` such that
//! (a) both components are positively invariant in `N`,
//! (b) the escape boundary of `P1` lies in `P2`,
//! (c) the invariant part of `N` is interior to `P1 \ P2`,
//! (d) `P1 \ P2` is interior to `N`.
//! The strict (classical) variant replaces (b) and (d) by
//! (b') the image of `P1 \ P2` stays inside `N`.

use crate::dynamics::{image, reach_forward, InvariantParts};
use crate::error::{ConleyError, Result};
use crate::grid::{Cube, CubicalSet, GridSpec};
use crate::isolation::f_boundary;
use crate::sampling::MvMap;
use serde::Serialize;
use std::collections::BTreeSet;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicalPair {
    pub p1: CubicalSet,
    pub p2: CubicalSet,
}

impl CubicalPair {
    pub fn new(p1: CubicalSet, p2: CubicalSet) -> Result<CubicalPair> {
        if !p2.is_subset(&p1) {
            return Err(ConleyError::PreconditionViolated(
                "second component not contained in the first".into(),
            ));
        }
        if !p1.is_closed() || !p2.is_closed() {
            return Err(ConleyError::PreconditionViolated(
                "pair components must be face-closed".into(),
            ));
        }
        Ok(CubicalPair { p1, p2 })
    }

    /// Cells of `p1` not in `p2` (the relative chain basis).
    pub fn relative_cells(&self) -> CubicalSet {
        self.p1.difference(&self.p2).expect("same grid")
    }

    pub fn grid(&self) -> &Arc<GridSpec> {
        &self.p1.grid
    }
}

/// Outcome of checking the axioms on a candidate pair.
#[derive(Debug, Clone, Serialize)]
pub struct PairAxiomReport {
    pub positive_invariance: bool,
    pub escape_boundary: bool,
    pub invariant_interior: bool,
    pub difference_interior: bool,
    pub image_inside: bool,
    pub witnesses: Vec<String>,
}

impl PairAxiomReport {
    pub fn is_weak_pair(&self) -> bool {
        self.positive_invariance
            && self.escape_boundary
            && self.invariant_interior
            && self.difference_interior
    }

    pub fn is_strict_pair(&self) -> bool {
        self.positive_invariance && self.image_inside && self.invariant_interior
    }
}

/// Check all pair axioms of `pair` in `n_set` against precomputed
/// invariant parts.
pub fn check_pair(
    map: &MvMap,
    n_set: &CubicalSet,
    parts: &InvariantParts,
    pair: &CubicalPair,
) -> Result<PairAxiomReport> {
    let mut witnesses = Vec::new();
    let label = |c: &Cube| map.grid.cube_label(c);

    // (a) F(P_i) /\ N <= P_i
    let mut positive_invariance = true;
    for (name, p) in [("first", &pair.p1), ("second", &pair.p2)] {
        let img_in_n = image(map, p)?.intersection(n_set)?;
        if let Some(c) = img_in_n.cells.difference(&p.cells).next() {
            positive_invariance = false;
            witnesses.push(format!("{name} component loses image cell {}", label(c)));
        }
    }

    // (b) bd_F(P1) <= P2
    let escape = f_boundary(map, &pair.p1)?;
    let escape_boundary = escape.is_subset(&pair.p2);
    if !escape_boundary {
        if let Some(c) = escape.cells.difference(&pair.p2.cells).next() {
            witnesses.push(format!("escape boundary cell {} not excised", label(c)));
        }
    }

    // (c) Inv N <= int cl(P1 \ P2)
    let core_interior = pair.p1.closed_difference(&pair.p2)?.interior();
    let invariant_interior = parts.inv.is_subset(&core_interior);
    if !invariant_interior {
        if let Some(c) = parts.inv.cells.difference(&core_interior.cells).next() {
            witnesses.push(format!("invariant cell {} not interior to the core", label(c)));
        }
    }

    // (d) P1 \ P2 <= int N
    let relative = pair.relative_cells();
    let n_interior = n_set.interior();
    let difference_interior = relative.is_subset(&n_interior);
    if !difference_interior {
        if let Some(c) = relative.cells.difference(&n_interior.cells).next() {
            witnesses.push(format!("core cell {} touches the boundary of N", label(c)));
        }
    }

    // (b') F(P1 \ P2) <= N
    let core_image = image(map, &relative)?;
    let image_inside = core_image.is_subset(n_set);
    if !image_inside {
        if let Some(c) = core_image.cells.difference(&n_set.cells).next() {
            witnesses.push(format!("core image cell {} escapes N", label(c)));
        }
    }

    Ok(PairAxiomReport {
        positive_invariance,
        escape_boundary,
        invariant_interior,
        difference_interior,
        image_inside,
        witnesses,
    })
}

/// Construct a weak index pair in `n_set` whose core `P1 \ P2` lies in
/// `w_target` (when given). The construction mirrors why such pairs exist:
/// `P1` is the forward closure of a compact neighbourhood `A` of the
/// backward-invariant part, `P2` the forward closure of `P1` minus an open
/// neighbourhood `U` of the forward-invariant part. The search sweeps the
/// collar widths of `A` upward and of `U` downward, accepting the first
/// candidate that satisfies all axioms; `variant` skips that many passing
/// candidates to obtain genuinely different pairs for cross-checks.
pub fn construct_weak_index_pair(
    map: &MvMap,
    n_set: &CubicalSet,
    parts: &InvariantParts,
    w_target: Option<&CubicalSet>,
    variant: usize,
) -> Result<CubicalPair> {
    if parts.inv.is_empty() {
        return Err(ConleyError::PreconditionViolated(
            "empty invariant part admits no index pair".into(),
        ));
    }
    // saturation width: collars stop growing once they fill N
    let saturation = |seed: &CubicalSet| -> u32 {
        let mut k = 0u32;
        let mut prev = seed.collar(0).intersection(n_set).expect("same grid");
        loop {
            let next = seed.collar(k + 1).intersection(n_set).expect("same grid");
            if next == prev {
                return k;
            }
            prev = next;
            k += 1;
        }
    };
    let ka_max = saturation(&parts.inv_minus);
    let ku_max = saturation(&parts.inv_plus);

    let mut skipped = 0usize;
    for ka in 0..=ka_max {
        let a = parts.inv_minus.collar(ka).intersection(n_set)?;
        let p1 = reach_forward(map, &a, n_set);
        for ku in (0..=ku_max).rev() {
            let u_base = parts.inv_plus.collar(ku).intersection(n_set)?;
            // two readings of "open neighbourhood": interior in the ambient
            // space, and interior relative to N
            let candidates = [u_base.interior(), u_base.open_in(n_set)?];
            for u in candidates {
                if !parts.inv_plus.is_subset(&u) {
                    continue;
                }
                let seed2 = p1.difference(&u)?.closure();
                let p2 = reach_forward(map, &seed2, n_set);
                if !p2.is_subset(&p1) {
                    continue;
                }
                let pair = CubicalPair { p1: p1.clone(), p2 };
                let report = check_pair(map, n_set, parts, &pair)?;
                let in_window = w_target
                    .map_or(true, |w| pair.relative_cells().is_subset(w));
                if report.is_weak_pair() && in_window {
                    if skipped == variant {
                        return Ok(pair);
                    }
                    skipped += 1;
                }
            }
        }
    }
    Err(ConleyError::ResolutionTooCoarse(format!(
        "no admissible pair among collar widths a<={ka_max}, u<={ku_max}"
    )))
}

/// Restrict a weak index pair in `N` to a smaller isolating neighbourhood
/// `M` with the same invariant part: the componentwise intersection, valid
/// whenever the core stays interior to `M`.
pub fn restrict_pair(pair: &CubicalPair, m_set: &CubicalSet) -> Result<CubicalPair> {
    let core = pair.relative_cells();
    if !core.is_subset(&m_set.interior()) {
        return Err(ConleyError::PreconditionViolated(
            "pair core not interior to the smaller neighbourhood".into(),
        ));
    }
    CubicalPair::new(pair.p1.intersection(m_set)?, pair.p2.intersection(m_set)?)
}

/// Componentwise intersection of two pairs in the same neighbourhood.
pub fn pair_intersection(p: &CubicalPair, q: &CubicalPair) -> Result<CubicalPair> {
    CubicalPair::new(p.p1.intersection(&q.p1)?, p.p2.intersection(&q.p2)?)
}

/// For nested pairs `P <= Q`, the two mixed pairs `(P1, P1 /\ Q2)` and
/// `(P1 \/ Q2, Q2)` interpolating between them.
pub fn mixed_pairs(p: &CubicalPair, q: &CubicalPair) -> Result<(CubicalPair, CubicalPair)> {
    if !p.p1.is_subset(&q.p1) || !p.p2.is_subset(&q.p2) {
        return Err(ConleyError::PreconditionViolated("pairs not nested".into()));
    }
    let lower = CubicalPair::new(p.p1.clone(), p.p1.intersection(&q.p2)?)?;
    let upper = CubicalPair::new(p.p1.union(&q.p2)?, q.p2.clone())?;
    Ok((lower, upper))
}

/// One interpolation step between nested pairs:
/// `G_i = P_i \/ (F(Q_i) /\ N)`.
pub fn g_step(
    map: &MvMap,
    n_set: &CubicalSet,
    p: &CubicalPair,
    q: &CubicalPair,
) -> Result<CubicalPair> {
    let g1 = p.p1.union(&image(map, &q.p1)?.intersection(n_set)?)?;
    let g2 = p.p2.union(&image(map, &q.p2)?.intersection(n_set)?)?;
    CubicalPair::new(g1, g2)
}

/// Squeeze a nested pair `P <= Q` sharing a component down to `P` through
/// a decreasing sequence of weak index pairs, returning the whole chain
/// `Q = Q^0 >= Q^1 >= ... >= Q^n = P`.
pub fn squeeze(
    map: &MvMap,
    n_set: &CubicalSet,
    p: &CubicalPair,
    q: &CubicalPair,
) -> Result<Vec<CubicalPair>> {
    if p.p1 != q.p1 && p.p2 != q.p2 {
        return Err(ConleyError::ShapeMismatch);
    }
    let cap = 2 * n_set.len() + 2;
    let mut chain = vec![q.clone()];
    for _ in 0..cap {
        let cur = chain.last().unwrap();
        if *cur == *p {
            return Ok(chain);
        }
        let next = g_step(map, n_set, p, cur)?;
        if next == *cur {
            // stalled strictly above P: the inputs were not admissible
            return Err(ConleyError::PreconditionViolated(
                "interpolation stalled above the lower pair".into(),
            ));
        }
        chain.push(next);
    }
    Err(ConleyError::NoTermination)
}

/// The whole grid domain as a cubical set.
pub fn full_domain(grid: &Arc<GridSpec>) -> CubicalSet {
    let d = grid.dim();
    let mut lo = vec![0i64; d];
    let mut hi = vec![0i64; d];
    for axis in 0..d {
        match grid.period_units(axis) {
            Some(p) => hi[axis] = p,
            None => {
                let (a, b) = grid.bounds_units(axis).unwrap();
                lo[axis] = a;
                hi[axis] = b;
            }
        }
    }
    crate::grid::box_set(grid.clone(), &crate::grid::UnitBox { lo, hi })
}

/// The excision extension `T(P) = (P1 \/ C, P2 \/ C)` with
/// `C = X \ int N`: both components absorb the complement of the interior
/// of the neighbourhood, so the image of `P` under the map lands in `T(P)`
/// while the relative part `T1 \ T2` still equals `P1 \ P2`.
pub fn make_t(pair: &CubicalPair, n_set: &CubicalSet) -> Result<CubicalPair> {
    let grid = pair.grid().clone();
    let x = full_domain(&grid);
    let n_interior = n_set.interior();
    // cells not interior to N form a face-closed family
    let complement = x.difference(&n_interior)?;
    debug_assert!(complement.is_closed());
    let t1 = pair.p1.union(&complement)?;
    let t2 = pair.p2.union(&complement)?;
    let t = CubicalPair::new(t1, t2)?;
    // the relative bases agree cell by cell: excision is built in
    debug_assert_eq!(t.relative_cells().cells, pair.relative_cells().cells);
    Ok(t)
}

const STRICT_SEARCH_CAP: usize = 12;

/// Exhaustive search for a strict (classical) index pair in `n_set`.
///
/// The candidate space is sound and complete up to the enumeration cap:
/// the first component of any strict pair must contain the closed star of
/// the invariant part (otherwise the invariant part cannot be interior to
/// the core) together with its forward closure in `N` (positive
/// invariance); the remaining freedom is a subset of the leftover cells of
/// `N`, enumerated exhaustively. Given the first component, the second is
/// forced from below: it must contain every cell whose image leaves `N`,
/// closed forwardly and under faces — and enlarging it further only
/// shrinks the interior of the core, so checking the minimal choice
/// decides the question.
pub fn find_strict_pair(
    map: &MvMap,
    n_set: &CubicalSet,
    parts: &InvariantParts,
) -> Result<CubicalPair> {
    let grid = map.grid.clone();
    // closed star of the invariant part
    let mut star_cells: BTreeSet<Cube> = BTreeSet::new();
    for c in &parts.inv.cells {
        star_cells.extend(c.top_cofaces(&grid));
    }
    let star = CubicalSet::from_cells(grid.clone(), star_cells);
    if !star.is_subset(n_set) {
        return Err(ConleyError::NoStrictPairFound);
    }
    let base1 = reach_forward(map, &star, n_set);

    // cells that may optionally join the first component
    let free1: Vec<Cube> = n_set
        .cells
        .iter()
        .filter(|c| !base1.contains(c))
        .cloned()
        .collect();
    if free1.len() > STRICT_SEARCH_CAP {
        return Err(ConleyError::PreconditionViolated(format!(
            "strict-pair search space too large: {} free cells",
            free1.len()
        )));
    }
    let mut seen: BTreeSet<Vec<Cube>> = BTreeSet::new();
    for mask1 in 0u32..(1u32 << free1.len()) {
        let extra: Vec<Cube> = free1
            .iter()
            .enumerate()
            .filter(|(i, _)| mask1 & (1 << i) != 0)
            .map(|(_, c)| c.clone())
            .collect();
        let seed = base1.union(&CubicalSet::from_cells(grid.clone(), extra))?;
        let p1 = reach_forward(map, &seed, n_set);
        if !seen.insert(p1.cells.iter().cloned().collect()) {
            continue;
        }

        // minimal second component: cells of P1 whose image leaves N,
        // face-closed automatically, then forwardly closed in N
        let escaping: BTreeSet<Cube> = p1
            .cells
            .iter()
            .filter(|c| {
                map.table
                    .get(c)
                    .map_or(true, |v| !v.set.is_subset(n_set))
            })
            .cloned()
            .collect();
        let p2 = reach_forward(
            map,
            &CubicalSet::from_cells(grid.clone(), escaping),
            n_set,
        );
        if !p2.is_subset(&p1) {
            continue;
        }
        let pair = CubicalPair { p1: p1.clone(), p2 };
        if check_pair(map, n_set, parts, &pair)?.is_strict_pair() {
            return Ok(pair);
        }
    }
    Err(ConleyError::NoStrictPairFound)
}
