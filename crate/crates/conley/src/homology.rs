//! Relative cubical homology with exact coefficients.
//!
//! Chain complexes are built from the cells of a pair `(P1, P2)`: the basis
//! in degree `q` is the set of `q`-cells of `P1` not in `P2`, and boundary
//! faces falling into `P2` are dropped. Homology is computed over the
//! integers (Smith normal form: Betti numbers and torsion) or over a field
//! (rationals or a prime field), where explicit generator cycles support
//! maps induced by inclusions and by the multivalued map through its graph.

use crate::error::{ConleyError, Result};
use crate::grid::{Cube, CubeAxis, CubicalSet, GridSpec};
use crate::pairs::CubicalPair;
use crate::sampling::MvMap;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

// ---------------------------------------------------------------------------
// coefficients

/// Coefficient field: the rationals or a prime field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FieldSpec {
    Rational,
    Prime(u64),
}

impl FieldSpec {
    pub fn validate(&self) -> Result<()> {
        if let FieldSpec::Prime(p) = self {
            if *p < 2 || (2..*p).take_while(|d| d * d <= *p).any(|d| p % d == 0) {
                return Err(ConleyError::Config(format!("{p} is not prime")));
            }
        }
        Ok(())
    }

    pub fn zero(&self) -> Scalar {
        self.from_int(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar::Q(BigRational::from(BigInt::from(n))),
            FieldSpec::Prime(p) => Scalar::P { v: n.rem_euclid(*p as i64) as u64, p: *p },
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "Z_{p}"),
        }
    }
}

/// An exact field element.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Q(BigRational),
    P { v: u64, p: u64 },
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(x) => x.is_zero(),
            Scalar::P { v, .. } => *v == 0,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::P { v: a, p }, Scalar::P { v: b, p: p2 }) => {
                assert_eq!(p, p2, "mixed prime fields");
                Scalar::P { v: (a + b) % p, p: *p }
            }
            _ => panic!("mixed coefficient fields"),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::P { v, p } => Scalar::P { v: (p - v) % p, p: *p },
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::P { v: a, p }, Scalar::P { v: b, p: p2 }) => {
                assert_eq!(p, p2, "mixed prime fields");
                Scalar::P { v: a.checked_mul(*b).expect("prime too large") % p, p: *p }
            }
            _ => panic!("mixed coefficient fields"),
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Q(a) => Scalar::Q(a.recip()),
            Scalar::P { v, p } => {
                // Fermat inverse: v^(p-2) mod p
                let mut acc: u64 = 1;
                let mut base = *v % p;
                let mut e = p - 2;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = acc * base % p;
                    }
                    base = base * base % p;
                    e >>= 1;
                }
                Scalar::P { v: acc, p: *p }
            }
        })
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(a) => {
                if a.denom().is_one() {
                    write!(f, "{}", a.numer())
                } else {
                    write!(f, "{}/{}", a.numer(), a.denom())
                }
            }
            Scalar::P { v, .. } => write!(f, "{v}"),
        }
    }
}

// ---------------------------------------------------------------------------
// exact dense matrices

#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    pub field: FieldSpec,
    pub rows: usize,
    pub cols: usize,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zero(field: FieldSpec, rows: usize, cols: usize) -> Mat {
        Mat { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Mat {
        let mut m = Mat::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zero(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j).add(&a.mul(b));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        let mut out = Mat::zero(self.field, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Mat {
        let mut out = Mat::zero(self.field, self.rows, 1);
        for i in 0..self.rows {
            out.set(i, 0, self.get(i, j).clone());
        }
        out
    }

    pub fn select_columns(&self, idx: &[usize]) -> Mat {
        let mut out = Mat::zero(self.field, self.rows, idx.len());
        for (jj, &j) in idx.iter().enumerate() {
            for i in 0..self.rows {
                out.set(i, jj, self.get(i, j).clone());
            }
        }
        out
    }

    /// Reduced row echelon form; returns (rref, pivot columns).
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            // find a pivot row
            let Some(pr) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            // swap rows pr <-> r
            if pr != r {
                for j in 0..m.cols {
                    let a = m.get(pr, j).clone();
                    let b = m.get(r, j).clone();
                    m.set(pr, j, b);
                    m.set(r, j, a);
                }
            }
            let inv = m.get(r, c).inv().unwrap();
            for j in 0..m.cols {
                let v = m.get(r, j).mul(&inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i != r && !m.get(i, c).is_zero() {
                    let f = m.get(i, c).clone();
                    for j in 0..m.cols {
                        let v = m.get(i, j).sub(&f.mul(m.get(r, j)));
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the kernel, as columns.
    pub fn nullspace(&self) -> Mat {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Mat::zero(self.field, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out.set(fc, k, self.field.one());
            for (pi, &pc) in pivots.iter().enumerate() {
                out.set(pc, k, r.get(pi, fc).neg());
            }
        }
        out
    }

    /// Solve `self * x = rhs` for every column of `rhs`; `None` when any
    /// system is inconsistent.
    pub fn solve(&self, rhs: &Mat) -> Option<Mat> {
        assert_eq!(self.rows, rhs.rows);
        let (r, pivots) = self.hstack(rhs).rref();
        // consistency: no pivot may fall in the rhs block
        if pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = Mat::zero(self.field, self.cols, rhs.cols);
        for (pi, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(pc, j, r.get(pi, self.cols + j).clone());
            }
        }
        Some(x)
    }

    /// Inverse of a square matrix; `None` when singular.
    pub fn inverse(&self) -> Option<Mat> {
        if !self.is_square() {
            return None;
        }
        let sol = self.solve(&Mat::identity(self.field, self.rows))?;
        if self.rank() < self.rows {
            return None;
        }
        Some(sol)
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zero(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn entries_display(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect()
    }
}

// ---------------------------------------------------------------------------
// chain complexes

/// Signed codimension-one faces of a cube: the `j`-th nondegenerate axis
/// contributes `(-1)^j (upper - lower)`.
pub fn boundary_terms(grid: &GridSpec, c: &Cube) -> Vec<(Cube, i64)> {
    let mut out = Vec::new();
    let mut j = 0u32;
    for (i, a) in c.axes.iter().enumerate() {
        if a.ext {
            let sign: i64 = if j % 2 == 0 { 1 } else { -1 };
            for (lo, s) in [(a.lo + 1, sign), (a.lo, -sign)] {
                let mut axes = c.axes.clone();
                axes[i] = CubeAxis { lo: grid.reduce(i, lo), ext: false };
                out.push((Cube { axes }, s));
            }
            j += 1;
        }
    }
    out
}

/// Relative chain complex of a cubical pair over a field.
pub struct RelComplex {
    pub grid: Arc<GridSpec>,
    pub field: FieldSpec,
    /// Per-degree ordered basis (cells of `P1` not in `P2`).
    pub basis: Vec<Vec<Cube>>,
    index: Vec<BTreeMap<Cube, usize>>,
    /// `bnd[q]`: matrix of the boundary from degree `q` to `q - 1`
    /// (`bnd[0]` has zero rows).
    pub bnd: Vec<Mat>,
}

impl RelComplex {
    pub fn new(pair: &CubicalPair, field: FieldSpec) -> RelComplex {
        let grid = pair.grid().clone();
        let maxdim = grid.dim();
        let rel = pair.relative_cells();
        let mut basis: Vec<Vec<Cube>> = vec![Vec::new(); maxdim + 1];
        for c in &rel.cells {
            basis[c.dim()].push(c.clone());
        }
        let index: Vec<BTreeMap<Cube, usize>> = basis
            .iter()
            .map(|b| b.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect())
            .collect();
        let mut bnd = Vec::with_capacity(maxdim + 1);
        for q in 0..=maxdim {
            let rows = if q == 0 { 0 } else { basis[q - 1].len() };
            let mut m = Mat::zero(field, rows, basis[q].len());
            if q > 0 {
                for (j, c) in basis[q].iter().enumerate() {
                    for (f, s) in boundary_terms(&grid, c) {
                        if let Some(&i) = index[q - 1].get(&f) {
                            let v = m.get(i, j).add(&field.from_int(s));
                            m.set(i, j, v);
                        }
                    }
                }
            }
            bnd.push(m);
        }
        let cx = RelComplex { grid, field, basis, index, bnd };
        debug_assert!(cx.boundary_squares_to_zero());
        cx
    }

    pub fn maxdim(&self) -> usize {
        self.basis.len() - 1
    }

    pub fn boundary_squares_to_zero(&self) -> bool {
        (2..self.bnd.len()).all(|q| {
            let m = self.bnd[q - 1].mul(&self.bnd[q]);
            (0..m.rows).all(|i| (0..m.cols).all(|j| m.get(i, j).is_zero()))
        })
    }

    pub fn cell_index(&self, q: usize, c: &Cube) -> Option<usize> {
        self.index[q].get(c).copied()
    }
}

/// Homology of a relative complex with explicit generator cycles.
pub struct Homology {
    pub field: FieldSpec,
    /// Per-degree dimension of the homology space.
    pub dims: Vec<usize>,
    /// Per degree: chain-coordinate matrix whose first columns span the
    /// boundary space and whose last `dims[q]` columns are generator
    /// cycles; class coordinates are read off against this basis.
    basis_mat: Vec<Mat>,
}

impl Homology {
    pub fn new(cx: &RelComplex) -> Homology {
        let field = cx.field;
        let maxdim = cx.maxdim();
        let mut dims = Vec::with_capacity(maxdim + 1);
        let mut basis_mat = Vec::with_capacity(maxdim + 1);
        for q in 0..=maxdim {
            let n = cx.basis[q].len();
            let cycles = cx.bnd[q].nullspace(); // n x z
            let bdries = if q < maxdim {
                cx.bnd[q + 1].clone() // n x (cells above)
            } else {
                Mat::zero(field, n, 0)
            };
            // greedily extend an independent set: boundary columns first,
            // then cycle columns; the added cycle columns represent
            // homology. Independence is tracked incrementally: each kept
            // column is reduced to echelon form once, and candidates are
            // reduced against the kept set.
            let mut echelon: Vec<(usize, Vec<Scalar>)> = Vec::new(); // (pivot row, reduced col)
            let mut kept: Vec<Vec<Scalar>> = Vec::new();
            let mut h = 0usize;
            for (mat, counts) in [(&bdries, false), (&cycles, true)] {
                for j in 0..mat.cols {
                    let mut col: Vec<Scalar> =
                        (0..n).map(|i| mat.get(i, j).clone()).collect();
                    for (pr, e) in &echelon {
                        if !col[*pr].is_zero() {
                            let f = col[*pr].clone();
                            for i in 0..n {
                                col[i] = col[i].sub(&f.mul(&e[i]));
                            }
                        }
                    }
                    if let Some(pr) = (0..n).find(|&i| !col[i].is_zero()) {
                        let inv = col[pr].inv().unwrap();
                        for x in col.iter_mut() {
                            *x = x.mul(&inv);
                        }
                        echelon.push((pr, col));
                        kept.push((0..n).map(|i| mat.get(i, j).clone()).collect());
                        if counts {
                            h += 1;
                        }
                    }
                }
            }
            let mut chosen = Mat::zero(field, n, kept.len());
            for (jj, col) in kept.iter().enumerate() {
                for i in 0..n {
                    chosen.set(i, jj, col[i].clone());
                }
            }
            dims.push(h);
            basis_mat.push(chosen);
        }
        Homology { field, dims, basis_mat }
    }

    /// Coordinates of the homology class of a cycle given in chain
    /// coordinates (`n x k` matrix of cycles -> `dims[q] x k`).
    pub fn class_coords(&self, q: usize, cycles: &Mat) -> Result<Mat> {
        let basis = &self.basis_mat[q];
        let sol = basis.solve(cycles).ok_or_else(|| {
            ConleyError::PreconditionViolated(format!(
                "chain in degree {q} is not a cycle of the target complex"
            ))
        })?;
        let h = self.dims[q];
        let mut out = Mat::zero(self.field, h, cycles.cols);
        for i in 0..h {
            for j in 0..cycles.cols {
                out.set(i, j, sol.get(basis.cols - h + i, j).clone());
            }
        }
        Ok(out)
    }

    /// Generator cycles of degree `q` in chain coordinates.
    pub fn generators(&self, q: usize) -> Mat {
        let basis = &self.basis_mat[q];
        let h = self.dims[q];
        let idx: Vec<usize> = (basis.cols - h..basis.cols).collect();
        basis.select_columns(&idx)
    }
}

/// The map on homology induced by a degree-preserving chain map given
/// cell-by-cell. Cells mapping outside the target basis are dropped
/// (relative projection). Returns one matrix per shared degree,
/// `dst.dims[q] x src.dims[q]`.
pub fn induced_map<F>(
    src_cx: &RelComplex,
    src_h: &Homology,
    dst_cx: &RelComplex,
    dst_h: &Homology,
    f: F,
) -> Result<Vec<Mat>>
where
    F: Fn(&Cube) -> Vec<(Cube, i64)>,
{
    let field = src_cx.field;
    let maxdim = src_cx.maxdim().min(dst_cx.maxdim());
    let mut out = Vec::with_capacity(maxdim + 1);
    for q in 0..=maxdim {
        // chain-level matrix in degree q
        let mut chain = Mat::zero(field, dst_cx.basis[q].len(), src_cx.basis[q].len());
        for (j, c) in src_cx.basis[q].iter().enumerate() {
            for (img, s) in f(c) {
                if img.dim() != q {
                    continue;
                }
                if let Some(i) = dst_cx.cell_index(q, &img) {
                    let v = chain.get(i, j).add(&field.from_int(s));
                    chain.set(i, j, v);
                }
            }
        }
        let mapped = chain.mul(&src_h.generators(q));
        out.push(dst_h.class_coords(q, &mapped)?);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// integer homology (Smith normal form)

/// Diagonal of the Smith normal form of an integer matrix.
pub fn smith_diagonal(mut m: Vec<Vec<i64>>) -> Vec<i64> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut diag = Vec::new();
    let mut r = 0;
    let mut c = 0;
    while r < rows && c < cols {
        // locate the entry of least nonzero magnitude
        let mut best: Option<(usize, usize)> = None;
        for i in r..rows {
            for j in c..cols {
                if m[i][j] != 0
                    && best.map_or(true, |(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        m.swap(r, bi);
        for row in m.iter_mut() {
            row.swap(c, bj);
        }
        // clear the row and column by Euclidean steps
        let mut dirty = true;
        while dirty {
            dirty = false;
            for i in r + 1..rows {
                if m[i][c] != 0 {
                    let f = m[i][c].div_euclid(m[r][c]);
                    for j in c..cols {
                        m[i][j] -= f * m[r][j];
                    }
                    if m[i][c] != 0 {
                        m.swap(r, i);
                        dirty = true;
                    }
                }
            }
            for j in c + 1..cols {
                if m[r][j] != 0 {
                    let f = m[r][j].div_euclid(m[r][c]);
                    for i in r..rows {
                        m[i][j] -= f * m[i][c];
                    }
                    if m[r][j] != 0 {
                        for i in 0..rows {
                            let t = m[i][c];
                            m[i][c] = m[i][j];
                            m[i][j] = t;
                        }
                        dirty = true;
                    }
                }
            }
        }
        // divisibility fix-up: fold any non-multiple into the pivot block
        let d = m[r][c].abs();
        if let Some((i, j)) = (r + 1..rows)
            .flat_map(|i| (c + 1..cols).map(move |j| (i, j)))
            .find(|&(i, j)| m[i][j] % d != 0)
        {
            let _ = j;
            for jj in c..cols {
                m[r][jj] += m[i][jj];
            }
            continue;
        }
        diag.push(d);
        r += 1;
        c += 1;
    }
    diag
}

/// Per-degree integer homology of a pair: `(rank, torsion coefficients)`.
pub fn homology_z(pair: &CubicalPair) -> Vec<(usize, Vec<i64>)> {
    // integer boundary matrices of the relative complex
    let cx = RelComplex::new(pair, FieldSpec::Rational);
    let int_bnd = |q: usize| -> Vec<Vec<i64>> {
        let m = &cx.bnd[q];
        (0..m.rows)
            .map(|i| {
                (0..m.cols)
                    .map(|j| match m.get(i, j) {
                        Scalar::Q(x) => {
                            use num_traits::ToPrimitive;
                            x.to_integer().to_i64().expect("boundary entry overflow")
                        }
                        Scalar::P { .. } => unreachable!(),
                    })
                    .collect()
            })
            .collect()
    };
    let maxdim = cx.maxdim();
    let mut out = Vec::with_capacity(maxdim + 1);
    for q in 0..=maxdim {
        let n = cx.basis[q].len();
        let rank_down = if q == 0 { 0 } else { smith_diagonal(int_bnd(q)).len() };
        let (rank_up, torsion) = if q < maxdim {
            let d = smith_diagonal(int_bnd(q + 1));
            let t: Vec<i64> = d.iter().copied().filter(|x| x.abs() > 1).collect();
            (d.len(), t)
        } else {
            (0, Vec::new())
        };
        out.push((n - rank_down - rank_up, torsion));
    }
    out
}

// ---------------------------------------------------------------------------
// graph of the multivalued map and its projections

/// The product of a grid with itself (domain and codomain copies share the
/// cell width, offset and refinement).
pub fn product_grid(g: &GridSpec) -> Arc<GridSpec> {
    let mut axes = g.axes.clone();
    axes.extend(g.axes.iter().cloned());
    Arc::new(GridSpec {
        axes,
        cell_width: g.cell_width,
        offset: g.offset,
        refinement: g.refinement,
    })
}

fn product_cube(tau: &Cube, sigma: &Cube) -> Cube {
    let mut axes = tau.axes.clone();
    axes.extend(sigma.axes.iter().cloned());
    Cube { axes }
}

/// The graph pair of the map over a cubical pair: each component collects
/// `tau x sigma` for `tau` in the component and `sigma` in the value box
/// of `tau`. Face-closed because values grow along faces. The fibers are
/// checked against the stored table cell by cell.
pub fn graph_pair(map: &MvMap, pair: &CubicalPair) -> Result<(CubicalPair, Arc<GridSpec>)> {
    let pgrid = product_grid(&map.grid);
    let build = |p: &CubicalSet| -> Result<CubicalSet> {
        let mut cells = std::collections::BTreeSet::new();
        for tau in &p.cells {
            let val = map.table.get(tau).ok_or_else(|| {
                ConleyError::PreconditionViolated(format!(
                    "pair cell {} outside the domain of the map",
                    map.grid.cube_label(tau)
                ))
            })?;
            for sigma in &val.set.cells {
                cells.insert(product_cube(tau, sigma));
            }
        }
        Ok(CubicalSet::from_cells_raw(pgrid.clone(), cells))
    };
    let g1 = build(&pair.p1)?;
    let g2 = build(&pair.p2)?;
    if !g1.is_closed() || !g2.is_closed() {
        return Err(ConleyError::PreconditionViolated(
            "graph not face-closed (map not antitone)".into(),
        ));
    }
    // fiber fidelity: the slice of the graph over tau is exactly the value
    let d = map.grid.dim();
    for tau in &pair.p1.cells {
        let expected = &map.table[tau].set;
        let fiber: std::collections::BTreeSet<Cube> = g1
            .cells
            .iter()
            .filter(|c| c.axes[..d] == tau.axes[..])
            .map(|c| Cube { axes: c.axes[d..].to_vec() })
            .collect();
        if fiber != expected.cells {
            return Err(ConleyError::FiberMismatch(map.grid.cube_label(tau)));
        }
    }
    Ok((CubicalPair { p1: g1, p2: g2 }, pgrid))
}

/// Chain-level first-factor projection of a product cube: the domain cell
/// when the codomain part is a vertex, zero otherwise (the augmentation on
/// the second factor).
pub fn project_first(d: usize, c: &Cube) -> Vec<(Cube, i64)> {
    if c.axes[d..].iter().any(|a| a.ext) {
        Vec::new()
    } else {
        vec![(Cube { axes: c.axes[..d].to_vec() }, 1)]
    }
}

/// Chain-level second-factor projection: the codomain cell when the domain
/// part is a vertex, zero otherwise.
pub fn project_second(d: usize, c: &Cube) -> Vec<(Cube, i64)> {
    if c.axes[..d].iter().any(|a| a.ext) {
        Vec::new()
    } else {
        vec![(Cube { axes: c.axes[d..].to_vec() }, 1)]
    }
}

// ---------------------------------------------------------------------------
// characteristic polynomials

/// Coefficients (ascending, leading coefficient 1) of `det(x I - A)`.
pub fn char_poly(a: &Mat) -> Vec<Scalar> {
    assert!(a.is_square());
    let n = a.rows;
    let field = a.field;
    // polynomial entries of xI - A, each a coefficient vector
    let entry = |i: usize, j: usize| -> Vec<Scalar> {
        let mut p = vec![a.get(i, j).neg()];
        if i == j {
            p.push(field.one());
        }
        p
    };
    fn poly_add(f: FieldSpec, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![f.zero(); a.len().max(b.len())];
        for (i, x) in a.iter().enumerate() {
            out[i] = out[i].add(x);
        }
        for (i, x) in b.iter().enumerate() {
            out[i] = out[i].add(x);
        }
        out
    }
    fn poly_mul(f: FieldSpec, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        if a.is_empty() || b.is_empty() {
            return vec![f.zero()];
        }
        let mut out = vec![f.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = out[i + j].add(&x.mul(y));
            }
        }
        out
    }
    // Laplace expansion along the first active column
    fn det(
        f: FieldSpec,
        entry: &dyn Fn(usize, usize) -> Vec<Scalar>,
        rows: &[usize],
        cols: &[usize],
    ) -> Vec<Scalar> {
        if rows.is_empty() {
            return vec![f.one()];
        }
        let c = cols[0];
        let rest_cols: Vec<usize> = cols[1..].to_vec();
        let mut acc = vec![f.zero()];
        for (k, &r) in rows.iter().enumerate() {
            let e = entry(r, c);
            if e.iter().all(Scalar::is_zero) {
                continue;
            }
            let rest_rows: Vec<usize> =
                rows.iter().copied().filter(|&x| x != r).collect();
            let minor = det(f, entry, &rest_rows, &rest_cols);
            let mut term = poly_mul(f, &e, &minor);
            if k % 2 == 1 {
                for t in term.iter_mut() {
                    *t = t.neg();
                }
            }
            acc = poly_add(f, &acc, &term);
        }
        acc
    }
    let all: Vec<usize> = (0..n).collect();
    let mut p = det(field, &entry, &all, &all);
    p.truncate(n + 1);
    while p.len() < n + 1 {
        p.push(field.zero());
    }
    p
}

/// Render a polynomial with ascending coefficients as a readable string in
/// the indeterminate `x`.
pub fn poly_display(coeffs: &[Scalar]) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let cs = c.to_string();
        let term = match i {
            0 => cs,
            1 if cs == "1" => "x".into(),
            1 => format!("{cs}*x"),
            _ if cs == "1" => format!("x^{i}"),
            _ => format!("{cs}*x^{i}"),
        };
        parts.push(term);
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::Dyadic;
    use crate::grid::{box_set, Axis, UnitBox};

    fn circle_grid() -> Arc<GridSpec> {
        Arc::new(GridSpec {
            axes: vec![Axis::Periodic { period: Dyadic::ONE }],
            cell_width: Dyadic::new(1, 4),
            offset: Dyadic::ZERO,
            refinement: 4,
        })
    }

    fn pair(p1: CubicalSet, p2: CubicalSet) -> CubicalPair {
        CubicalPair::new(p1, p2).unwrap()
    }

    #[test]
    fn circle_has_one_loop() {
        let g = circle_grid();
        let all = crate::pairs::full_domain(&g);
        let p = pair(all, CubicalSet::empty(g));
        let cx = RelComplex::new(&p, FieldSpec::Rational);
        assert!(cx.boundary_squares_to_zero());
        let h = Homology::new(&cx);
        assert_eq!(h.dims, vec![1, 1]);
        assert_eq!(homology_z(&p), vec![(1, vec![]), (1, vec![])]);
    }

    #[test]
    fn arc_relative_to_endpoints() {
        let g = circle_grid();
        let arc = box_set(g.clone(), &UnitBox { lo: vec![3], hi: vec![9] });
        let ends = CubicalSet::from_cells(
            g.clone(),
            [
                Cube { axes: vec![CubeAxis { lo: 3, ext: false }] },
                Cube { axes: vec![CubeAxis { lo: 9, ext: false }] },
            ],
        );
        let p = pair(arc, ends);
        let h = Homology::new(&RelComplex::new(&p, FieldSpec::Rational));
        assert_eq!(h.dims, vec![0, 1]);
        let hz = homology_z(&p);
        assert_eq!(hz[1], (1, vec![]));
    }

    #[test]
    fn single_vertex_module() {
        let g = circle_grid();
        let v = CubicalSet::from_cells(
            g.clone(),
            [Cube { axes: vec![CubeAxis { lo: 5, ext: false }] }],
        );
        let p = pair(v, CubicalSet::empty(g));
        let h = Homology::new(&RelComplex::new(&p, FieldSpec::Rational));
        assert_eq!(h.dims, vec![1, 0]);
    }

    #[test]
    fn identical_pair_is_trivial() {
        let g = circle_grid();
        let arc = box_set(g.clone(), &UnitBox { lo: vec![0], hi: vec![4] });
        let p = pair(arc.clone(), arc);
        let h = Homology::new(&RelComplex::new(&p, FieldSpec::Rational));
        assert_eq!(h.dims, vec![0, 0]);
    }

    #[test]
    fn smith_diagonal_examples() {
        assert_eq!(smith_diagonal(vec![vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(smith_diagonal(vec![vec![1, 0], vec![0, 0]]), vec![1]);
        assert_eq!(smith_diagonal(vec![vec![0, 0], vec![0, 0]]), Vec::<i64>::new());
    }

    #[test]
    fn rref_solve_inverse() {
        let f = FieldSpec::Rational;
        let mut a = Mat::zero(f, 2, 2);
        a.set(0, 0, f.from_int(0));
        a.set(0, 1, f.from_int(1));
        a.set(1, 0, f.from_int(1));
        a.set(1, 1, f.from_int(0));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Mat::identity(f, 2));
        let cp = char_poly(&a);
        // x^2 - 1
        assert_eq!(poly_display(&cp), "x^2 + -1");
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = FieldSpec::Prime(7);
        assert!(f.validate().is_ok());
        assert!(FieldSpec::Prime(6).validate().is_err());
        let a = f.from_int(3);
        let b = a.inv().unwrap();
        assert_eq!(a.mul(&b), f.one());
    }
}
