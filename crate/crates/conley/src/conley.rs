//! The Conley index of an isolated invariant set, computed from a weak
//! index pair.
//!
//! Pipeline per pair `P = (P1, P2)` inside a neighbourhood `N`:
//! 1. extend to `T(P)` by absorbing the complement of `int N` into both
//!    components; the inclusion `P -> T(P)` induces an isomorphism on
//!    relative homology (checked at runtime, never assumed);
//! 2. realize the map as the pair of projections from its graph; the first
//!    projection must induce an isomorphism;
//! 3. the index map is `incl^{-1} o q o p^{-1}` on the homology of `P`;
//! 4. Leray reduction: restrict to the eventual image, where the index map
//!    becomes an automorphism; its characteristic polynomial together with
//!    the reduced dimension is the reported invariant. The cohomological
//!    index map is the transpose and shares both invariants.

use crate::dynamics::InvariantParts;
use crate::error::{ConleyError, Result};
use crate::grid::CubicalSet;
use crate::homology::{
    char_poly, graph_pair, homology_z, induced_map, poly_display, project_first,
    project_second, FieldSpec, Homology, Mat, RelComplex, Scalar,
};
use crate::isolation::{check_isolation, IsolationReport};
use crate::pairs::{construct_weak_index_pair, make_t, CubicalPair};
use crate::sampling::MvMap;
use serde::Serialize;

/// Per-degree slice of the computed index.
#[derive(Debug, Clone, Serialize)]
pub struct DegreeIndex {
    pub degree: usize,
    /// Dimension of the relative homology of the pair.
    pub homology_dim: usize,
    /// Index map on that homology, row-major exact entries.
    pub index_matrix: Vec<Vec<String>>,
    /// Dimension of the eventual image (the reduced index module).
    pub reduced_dim: usize,
    /// The induced automorphism of the eventual image.
    pub reduced_matrix: Vec<Vec<String>>,
    /// Transpose of the reduced map: the action on cohomology.
    pub reduced_matrix_cohomology: Vec<Vec<String>>,
    /// Characteristic polynomial of the reduced map (same for homology
    /// and cohomology).
    pub char_poly: String,
    /// Ascending coefficients of the characteristic polynomial.
    pub char_poly_coeffs: Vec<String>,
}

/// The full computed index of one pair.
#[derive(Debug, Clone, Serialize)]
pub struct ConleyIndexBundle {
    pub field: FieldSpec,
    pub p1_cells: usize,
    pub p2_cells: usize,
    pub degrees: Vec<DegreeIndex>,
    /// Integer homology of the pair (rank, torsion coefficients) per
    /// degree, reported for reference; index maps are field-only.
    pub homology_z: Vec<(usize, Vec<i64>)>,
}

impl ConleyIndexBundle {
    /// Degrees with nontrivial reduced index.
    pub fn nontrivial_degrees(&self) -> Vec<usize> {
        self.degrees
            .iter()
            .filter(|d| d.reduced_dim > 0)
            .map(|d| d.degree)
            .collect()
    }

    /// The reduced invariant: (reduced dimension, characteristic
    /// polynomial) per degree. Two bundles with equal invariants present
    /// the same index.
    pub fn invariant(&self) -> Vec<(usize, String)> {
        self.degrees
            .iter()
            .map(|d| (d.reduced_dim, d.char_poly.clone()))
            .collect()
    }
}

/// Column-space basis of a matrix, as columns.
fn column_space(m: &Mat) -> Mat {
    let (_, pivots) = m.rref();
    m.select_columns(&pivots)
}

/// Leray reduction of an endomorphism: the eventual image `im(A^n)`
/// (stabilized), the automorphism `A` induces on it, and its
/// characteristic polynomial.
pub fn leray_reduce(a: &Mat) -> Result<(usize, Mat, Vec<Scalar>)> {
    assert!(a.is_square());
    let n = a.rows;
    // iterate until the image rank stabilizes (at most n steps)
    let mut power = Mat::identity(a.field, n);
    let mut rank = n;
    for _ in 0..=n {
        let next = a.mul(&power);
        let r = next.rank();
        power = next;
        if r == rank {
            break;
        }
        rank = r;
    }
    let basis = column_space(&power); // n x r
    // A maps the eventual image into itself: solve basis * R = A * basis
    let restricted = basis.solve(&a.mul(&basis)).ok_or_else(|| {
        ConleyError::PreconditionViolated(
            "eventual image not invariant under the index map".into(),
        )
    })?;
    if restricted.inverse().is_none() {
        return Err(ConleyError::PreconditionViolated(
            "index map not an automorphism of its eventual image".into(),
        ));
    }
    let cp = char_poly(&restricted);
    Ok((basis.cols, restricted, cp))
}

/// The index map of a weak index pair, degree by degree, on the homology
/// of the pair. Errors with `ExcisionFailure` when the inclusion
/// `P -> T(P)` fails to be an isomorphism, and with `ProjectionNotIso`
/// when the graph projection onto the domain fails to be one.
pub fn index_maps(
    map: &MvMap,
    n_set: &CubicalSet,
    pair: &CubicalPair,
    field: FieldSpec,
) -> Result<(Vec<Mat>, Vec<usize>)> {
    let t_pair = make_t(pair, n_set)?;
    let cx_p = RelComplex::new(pair, field);
    let cx_t = RelComplex::new(&t_pair, field);
    let h_p = Homology::new(&cx_p);
    let h_t = Homology::new(&cx_t);

    // excision: the inclusion-induced map must be invertible in every degree
    let incl = induced_map(&cx_p, &h_p, &cx_t, &h_t, |c| vec![(c.clone(), 1)])?;
    let mut incl_inv = Vec::with_capacity(incl.len());
    for (q, m) in incl.iter().enumerate() {
        match (m.is_square()).then(|| m.inverse()).flatten() {
            Some(inv) => incl_inv.push(inv),
            None => {
                return Err(ConleyError::ExcisionFailure {
                    degree: q,
                    src: h_p.dims[q],
                    dst: h_t.dims[q],
                })
            }
        }
    }

    // graph of the map over the pair, with fiber fidelity checked inside
    let (gamma, pgrid) = graph_pair(map, pair)?;
    let d = map.grid.dim();
    let cx_g = RelComplex::new(&gamma, field);
    let h_g = Homology::new(&cx_g);
    let _ = pgrid;

    let proj_p = induced_map(&cx_g, &h_g, &cx_p, &h_p, |c| project_first(d, c))?;
    let proj_q = induced_map(&cx_g, &h_g, &cx_t, &h_t, |c| project_second(d, c))?;

    let maxdim = d; // homology of the pair vanishes above the grid dimension
    let mut out = Vec::with_capacity(maxdim + 1);
    for q in 0..=maxdim {
        let p_inv = match proj_p
            .get(q)
            .and_then(|m| m.is_square().then(|| m.inverse()).flatten())
        {
            Some(inv) => inv,
            None => {
                return Err(ConleyError::ProjectionNotIso {
                    degree: q,
                    src: h_g.dims.get(q).copied().unwrap_or(0),
                    dst: h_p.dims[q],
                })
            }
        };
        out.push(incl_inv[q].mul(&proj_q[q]).mul(&p_inv));
    }
    Ok((out, h_p.dims))
}

/// Compute the full index bundle of a pair: homology, index maps, Leray
/// reduction and integer homology for reference.
pub fn compute_bundle(
    map: &MvMap,
    n_set: &CubicalSet,
    pair: &CubicalPair,
    field: FieldSpec,
) -> Result<ConleyIndexBundle> {
    let (maps, dims) = index_maps(map, n_set, pair, field)?;
    let mut degrees = Vec::with_capacity(maps.len());
    for (q, m) in maps.iter().enumerate() {
        let (rdim, rmat, cp) = leray_reduce(m)?;
        degrees.push(DegreeIndex {
            degree: q,
            homology_dim: dims[q],
            index_matrix: m.entries_display(),
            reduced_dim: rdim,
            reduced_matrix: rmat.entries_display(),
            reduced_matrix_cohomology: rmat.transpose().entries_display(),
            char_poly: poly_display(&cp),
            char_poly_coeffs: cp.iter().map(|c| c.to_string()).collect(),
        });
    }
    Ok(ConleyIndexBundle {
        field,
        p1_cells: pair.p1.len(),
        p2_cells: pair.p2.len(),
        degrees,
        homology_z: homology_z(pair),
    })
}

/// One fully analyzed neighbourhood.
#[derive(Debug, Clone, Serialize)]
pub struct Analysis {
    pub isolation: IsolationReport,
    pub pair_p1: Vec<String>,
    pub pair_p2: Vec<String>,
    pub bundle: ConleyIndexBundle,
}

/// Analyze a neighbourhood end to end: isolation, weak index pair, index.
/// Errors with `IsolationFailure` when the neighbourhood does not isolate
/// its invariant part.
pub fn analyze(
    map: &MvMap,
    n_set: &CubicalSet,
    field: FieldSpec,
    variant: usize,
) -> Result<(Analysis, InvariantParts, CubicalPair)> {
    let (isolation, parts) = check_isolation(map, n_set)?;
    if !isolation.weak {
        return Err(ConleyError::IsolationFailure(
            isolation
                .witnesses
                .first()
                .cloned()
                .unwrap_or_else(|| "invariant part not interior".into()),
        ));
    }
    let pair = construct_weak_index_pair(map, n_set, &parts, None, variant)?;
    let bundle = compute_bundle(map, n_set, &pair, field)?;
    let label = |s: &CubicalSet| -> Vec<String> {
        s.top_cells().map(|c| map.grid.cube_label(c)).collect()
    };
    let analysis = Analysis {
        isolation,
        pair_p1: label(&pair.p1),
        pair_p2: label(&pair.p2),
        bundle,
    };
    Ok((analysis, parts, pair))
}

/// Compare reduced invariants of several bundles; returns the distinct
/// invariants found (a singleton means all agree).
pub fn distinct_invariants(bundles: &[ConleyIndexBundle]) -> Vec<Vec<(usize, String)>> {
    let mut seen: Vec<Vec<(usize, String)>> = Vec::new();
    for b in bundles {
        let inv = b.invariant();
        if !seen.contains(&inv) {
            seen.push(inv);
        }
    }
    seen
}

/// Independence audit: compute the index from several admissible
/// (neighbourhood, pair) combinations and require a single invariant.
/// Uses the given neighbourhood with two pair variants, plus its one-cell
/// collar (clipped to the domain of the map) with two variants when that
/// collar still isolates the same invariant part.
pub fn audit_independence(
    map: &MvMap,
    n_set: &CubicalSet,
    field: FieldSpec,
) -> Result<Vec<(String, ConleyIndexBundle)>> {
    let mut out: Vec<(String, ConleyIndexBundle)> = Vec::new();
    let push_variants =
        |out: &mut Vec<(String, ConleyIndexBundle)>, tag: &str, n: &CubicalSet| -> Result<()> {
            let (report, parts) = check_isolation(map, n)?;
            if !report.weak || parts.inv.is_empty() {
                return Ok(());
            }
            for variant in 0..2 {
                match construct_weak_index_pair(map, n, &parts, None, variant) {
                    Ok(pair) => {
                        let bundle = compute_bundle(map, n, &pair, field)?;
                        out.push((format!("{tag}/variant{variant}"), bundle));
                    }
                    Err(ConleyError::ResolutionTooCoarse(_)) => break,
                    Err(e) => return Err(e),
                }
            }
            Ok(())
        };
    push_variants(&mut out, "given", n_set)?;
    let dom = map.effective_domain();
    let base_inv = check_isolation(map, n_set)?.1.inv;
    for width in 1..=2u32 {
        let enlarged = n_set.collar(width).intersection(&dom)?;
        if enlarged == *n_set {
            break;
        }
        // only admissible when the invariant part is unchanged
        if let Ok((rep, parts)) = check_isolation(map, &enlarged) {
            if rep.weak && parts.inv == base_inv {
                push_variants(&mut out, &format!("enlarged{width}"), &enlarged)?;
            }
        }
    }
    if out.len() < 2 {
        return Err(ConleyError::PreconditionViolated(
            "fewer than two admissible pair constructions".into(),
        ));
    }
    let distinct = distinct_invariants(
        &out.iter().map(|(_, b)| b.clone()).collect::<Vec<_>>(),
    );
    if distinct.len() != 1 {
        return Err(ConleyError::PreconditionViolated(format!(
            "index depends on the construction: {} distinct invariants over {} combos",
            distinct.len(),
            out.len()
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testgen;

    #[test]
    fn repelling_fixed_point_index() {
        let map = testgen::doubling_map().unwrap();
        let n = testgen::doubling_fixed_point_neighbourhood(&map.grid);
        let (analysis, _, _) = analyze(&map, &n, FieldSpec::Rational, 0).unwrap();
        let d = &analysis.bundle.degrees;
        assert_eq!(d[0].reduced_dim, 0);
        assert_eq!(d[1].homology_dim, 1);
        assert_eq!(d[1].reduced_dim, 1);
        assert_eq!(d[1].char_poly, "x + -1");
    }

    #[test]
    fn period_two_orbit_index() {
        let map = testgen::doubling_map().unwrap();
        let n = testgen::doubling_period_two_neighbourhood(&map.grid);
        let (analysis, _, _) = analyze(&map, &n, FieldSpec::Rational, 0).unwrap();
        let d = &analysis.bundle.degrees;
        assert_eq!(d[0].reduced_dim, 0);
        assert_eq!(d[1].homology_dim, 2);
        assert_eq!(d[1].reduced_dim, 2);
        // conjugate to the swap: char poly x^2 - 1
        assert_eq!(d[1].char_poly, "x^2 + -1");
    }

    #[test]
    fn attracting_fixed_point_index() {
        let map = testgen::contracting_map().unwrap();
        let n = map.effective_domain();
        let (analysis, _, _) = analyze(&map, &n, FieldSpec::Rational, 0).unwrap();
        let d = &analysis.bundle.degrees;
        assert!(analysis.isolation.strong_setwise);
        assert_eq!(d[0].reduced_dim, 1);
        assert_eq!(d[0].char_poly, "x + -1");
        assert_eq!(d[1].reduced_dim, 0);
    }

    #[test]
    fn independence_across_constructions() {
        let map = testgen::doubling_map().unwrap();
        let n = testgen::doubling_fixed_point_neighbourhood(&map.grid);
        let combos = audit_independence(&map, &n, FieldSpec::Rational).unwrap();
        assert!(combos.len() >= 2);
    }

    #[test]
    fn leray_of_nilpotent_is_trivial() {
        let f = FieldSpec::Rational;
        let mut a = Mat::zero(f, 2, 2);
        a.set(0, 1, f.one());
        let (dim, _, cp) = leray_reduce(&a).unwrap();
        assert_eq!(dim, 0);
        assert_eq!(poly_display(&cp), "1");
    }

    #[test]
    fn leray_of_swap_is_swap() {
        let f = FieldSpec::Rational;
        let mut a = Mat::zero(f, 2, 2);
        a.set(0, 1, f.one());
        a.set(1, 0, f.one());
        let (dim, _, cp) = leray_reduce(&a).unwrap();
        assert_eq!(dim, 2);
        assert_eq!(poly_display(&cp), "x^2 + -1");
    }

    #[test]
    fn leray_strips_nilpotent_block() {
        // block diag(identity 1x1, nilpotent 1x1 zero)
        let f = FieldSpec::Rational;
        let mut a = Mat::zero(f, 2, 2);
        a.set(0, 0, f.one());
        let (dim, _, cp) = leray_reduce(&a).unwrap();
        assert_eq!(dim, 1);
        assert_eq!(poly_display(&cp), "x + -1");
    }
}
