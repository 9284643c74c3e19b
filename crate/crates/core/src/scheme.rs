//! The association scheme on non-square-type non-isotropic projective
//! points of `F_q^{2m+1}` and its first relation graph.
//!
//! With `Q(x) = 2(x_1 x_{m+1} + ... + x_m x_{2m}) + x_{2m+1}^2` and `g` the
//! fixed generator of `F_q^*`, the vertex set is
//! `V = { [x] : eta(Q(x, x)) = -1 }`, of size `q^m (q^m - 1) / 2`.
//!
//! Relations are classified by the scaling-invariant
//! `u = Q(x, y)^2 / (Q(x, x) Q(y, y))`: the diagonal is `R_0`, `u = 0` is
//! `R_{(q+1)/2}`, and `u = g^{2-2i}` is `R_i` for `1 <= i <= (q-1)/2`. This
//! reproduces the normalized Gram matrices `(g, 1; 1, g^{2i-3})` while
//! removing the residual choice of line representative.

use crate::error::{Error, Result};
use crate::field::{FiniteField, Fq};
use crate::geometry::{self, PointSet};
use nalgebra::DMatrix;
use rayon::prelude::*;

/// Vertex count cap for the dense eigensolve.
const EIGEN_LIMIT: usize = 2000;

#[derive(Debug, Clone)]
pub struct SchemeGraph {
    pub q: u32,
    pub m: usize,
    /// Canonical representative encodings (smallest on each line), sorted.
    verts: Vec<u64>,
    /// Relation index for each ordered vertex pair, row-major.
    rel: Vec<u8>,
    /// `R_1` degree, constant over vertices.
    degree: u32,
}

/// `Q(x, y) = sum_i (x_i y_{m+i} + x_{m+i} y_i) + x_{2m} y_{2m}` (0-based),
/// the symmetric bilinear form with `Q(x, x) = 2 sum x_i x_{m+i} + x_{2m}^2`.
pub fn scheme_form(f: &FiniteField, m: usize, x: &[Fq], y: &[Fq]) -> Fq {
    let mut acc = Fq::ZERO;
    for i in 0..m {
        acc = f.add(acc, f.mul(x[i], y[m + i]));
        acc = f.add(acc, f.mul(x[m + i], y[i]));
    }
    f.add(acc, f.mul(x[2 * m], y[2 * m]))
}

impl SchemeGraph {
    pub fn vertex_count(&self) -> usize {
        self.verts.len()
    }

    pub fn vertices(&self) -> &[u64] {
        &self.verts
    }

    pub fn relation_classes(&self) -> usize {
        (self.q as usize + 1) / 2 + 1
    }

    pub fn relation(&self, i: usize, j: usize) -> u8 {
        self.rel[i * self.verts.len() + j]
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Index of a vertex given any point on its line.
    pub fn vertex_index(&self, f: &FiniteField, point: &[Fq]) -> Option<usize> {
        let rep = (1..f.q())
            .map(|t| geometry::encode_point(f, &geometry::scale_point(f, Fq(t), point)))
            .min()?;
        self.verts.binary_search(&rep).ok()
    }

    /// Formula degree `(q^{m-1} - 1)(q^m + 1)` from the character table.
    pub fn expected_degree(q: u32, m: usize) -> u64 {
        let q = q as u64;
        (q.pow(m as u32 - 1) - 1) * (q.pow(m as u32) + 1)
    }

    /// Formula vertex count `q^m (q^m - 1) / 2`.
    pub fn expected_vertex_count(q: u32, m: usize) -> u64 {
        let qm = (q as u64).pow(m as u32);
        qm * (qm - 1) / 2
    }

    /// The three distinct eigenvalues of `(V, R_1)` from the character
    /// table: degree, `-(q-2) q^{m-1} - 1`, `q^{m-1} - 1`. When the degree
    /// is zero the graph is empty and the spectrum collapses to `{0}`.
    pub fn expected_eigenvalues(q: u32, m: usize) -> Vec<i64> {
        let degree = Self::expected_degree(q, m) as i64;
        if degree == 0 {
            return vec![0];
        }
        let qi = q as i64;
        let qm1 = qi.pow(m as u32 - 1);
        let mut eigs = vec![degree, -(qi - 2) * qm1 - 1, qm1 - 1];
        eigs.sort_unstable();
        eigs.dedup();
        eigs
    }
}

/// Builds the scheme for ambient dimension `d = 2m + 1`.
pub fn build_scheme(f: &FiniteField, m: usize) -> Result<SchemeGraph> {
    assert!(m >= 1);
    let d = 2 * m + 1;
    let n_space = geometry::space_size(f, d)?;
    let q = f.q();
    let g = f.primitive();

    // canonical line representatives with non-square Q(x, x)
    let mut verts: Vec<u64> = Vec::new();
    let mut seen = vec![false; n_space as usize];
    for code in 1..n_space {
        if seen[code as usize] {
            continue;
        }
        let x = geometry::decode_point(f, code, d);
        for t in f.units() {
            seen[geometry::encode_point(f, &geometry::scale_point(f, t, &x)) as usize] = true;
        }
        if f.quad_char(scheme_form(f, m, &x, &x)) == -1 {
            verts.push(code);
        }
    }

    let n = verts.len();
    let coords: Vec<Vec<Fq>> = verts.iter().map(|&c| geometry::decode_point(f, c, d)).collect();
    let norms: Vec<Fq> = coords.iter().map(|x| scheme_form(f, m, x, x)).collect();

    // log base g of the squares, for u = g^{2-2i} classification
    let qm1 = q - 1;
    let mut log_g = vec![0u32; q as usize];
    let mut acc = Fq::ONE;
    for k in 0..qm1 {
        log_g[acc.0 as usize] = k;
        acc = f.mul(acc, g);
    }
    let far = (q + 1) / 2; // relation of Q(x, y) = 0
    let half = qm1 / 2;

    let rel: Vec<u8> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let coords = &coords;
            let norms = &norms;
            let log_g = &log_g;
            (0..n).map(move |j| {
                if i == j {
                    return 0u8;
                }
                let qxy = scheme_form(f, m, &coords[i], &coords[j]);
                if qxy.is_zero() {
                    return far as u8;
                }
                let u = f.div(f.square(qxy), f.mul(norms[i], norms[j]));
                let e = log_g[u.0 as usize];
                debug_assert_eq!(e % 2, 0, "u is a ratio of squares");
                // solve 2 - 2i = e mod (q-1), i in [1, (q-1)/2]
                let i_rel = ((half + 1 - (e / 2) % half) - 1) % half + 1;
                i_rel as u8
            })
        })
        .collect();

    // R_1 degree, verified constant
    let mut degree = None;
    for i in 0..n {
        let deg = (0..n).filter(|&j| rel[i * n + j] == 1).count() as u32;
        match degree {
            None => degree = Some(deg),
            Some(d0) if d0 != deg => {
                return Err(Error::NotRegular(format!(
                    "vertex {i} has R_1 degree {deg}, expected {d0}"
                )))
            }
            _ => {}
        }
    }

    Ok(SchemeGraph { q, m, verts, rel, degree: degree.unwrap_or(0) })
}

/// `R_1` degree with the regularity check already enforced at build time.
pub fn r1_degree(gph: &SchemeGraph) -> u32 {
    gph.degree
}

#[derive(Debug, Clone)]
pub struct SpectrumReport {
    pub n: usize,
    pub degree: u32,
    /// Distinct eigenvalues (integer-snapped) with multiplicities, descending.
    pub eigenvalues: Vec<(i64, usize)>,
    /// Largest snapping error.
    pub snap_error: f64,
}

/// Dense symmetric eigensolve of the `R_1` adjacency matrix with
/// integer snapping at 1e-6.
pub fn r1_spectrum(gph: &SchemeGraph) -> Result<SpectrumReport> {
    let n = gph.vertex_count();
    if n > EIGEN_LIMIT {
        return Err(Error::SizeLimitExceeded(format!("|V| = {n} > {EIGEN_LIMIT} for eigensolve")));
    }
    let a = DMatrix::<f64>::from_fn(n, n, |i, j| if gph.relation(i, j) == 1 { 1.0 } else { 0.0 });
    let eig = a.symmetric_eigenvalues();
    let mut snapped: Vec<i64> = Vec::with_capacity(n);
    let mut snap_error = 0.0f64;
    for &ev in eig.iter() {
        let r = ev.round();
        snap_error = snap_error.max((ev - r).abs());
        snapped.push(r as i64);
    }
    if snap_error > 1e-6 {
        return Err(Error::NotRegular(format!(
            "eigenvalues failed integer snapping (error {snap_error:e})"
        )));
    }
    snapped.sort_unstable();
    let mut eigenvalues: Vec<(i64, usize)> = Vec::new();
    for v in snapped {
        match eigenvalues.last_mut() {
            Some((e, c)) if *e == v => *c += 1,
            _ => eigenvalues.push((v, 1)),
        }
    }
    eigenvalues.reverse();
    Ok(SpectrumReport { n, degree: gph.degree, eigenvalues, snap_error })
}

#[derive(Debug, Clone)]
pub struct EdgeBoundReport {
    pub subset_size: usize,
    /// `1_W A 1_W`: ordered adjacent pairs inside `W`.
    pub edges: u64,
    /// `(lambda_1 / n) |W|^2 + (q^{m-1} - 1) |W|`.
    pub bound: f64,
    pub slack: f64,
    pub pass: bool,
}

/// Spectral edge bound `e(W, W) <= (lambda_1/n)|W|^2 + (q^{m-1}-1)|W|`,
/// asserted exactly as `n e <= lambda_1 |W|^2 + (q^{m-1}-1) |W| n`.
pub fn edge_bound_check(gph: &SchemeGraph, w: &[usize]) -> EdgeBoundReport {
    let n = gph.vertex_count() as u128;
    let mut sorted: Vec<usize> = w.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let edges: u64 = sorted
        .par_iter()
        .map(|&i| sorted.iter().filter(|&&j| gph.relation(i, j) == 1).count() as u64)
        .sum();
    let wlen = sorted.len() as u128;
    let lambda1 = gph.degree as u128;
    let qpow = (gph.q as u128).pow(gph.m as u32 - 1) - 1;
    let pass = n * edges as u128 <= lambda1 * wlen * wlen + qpow * wlen * n;
    let bound = (lambda1 * wlen * wlen) as f64 / n as f64 + (qpow * wlen) as f64;
    EdgeBoundReport {
        subset_size: sorted.len(),
        edges,
        bound,
        slack: bound - edges as f64,
        pass,
    }
}

/// Exhaustive check of the scheme axioms: partition with symmetric
/// relations and intersection numbers `p^v_{mn}` constant over each
/// relation `v`, with `p^v_{mn} = p^v_{nm}`. Feasible only at tiny sizes.
pub fn check_scheme_axioms(gph: &SchemeGraph) -> Result<()> {
    let n = gph.vertex_count();
    let classes = gph.relation_classes();
    if n > 200 {
        return Err(Error::SizeLimitExceeded(format!("axiom check on |V| = {n} > 200")));
    }
    // R_0 is the diagonal; relations partition by construction, so check
    // symmetry and the range of indices
    for i in 0..n {
        if gph.relation(i, i) != 0 {
            return Err(Error::NotRegular(format!("diagonal of vertex {i} not in R_0")));
        }
        for j in 0..n {
            let r = gph.relation(i, j);
            if i != j && r == 0 {
                return Err(Error::NotRegular(format!("off-diagonal pair ({i},{j}) in R_0")));
            }
            if (r as usize) >= classes {
                return Err(Error::NotRegular(format!("relation index {r} out of range")));
            }
            if r != gph.relation(j, i) {
                return Err(Error::NotRegular(format!("relation not symmetric at ({i},{j})")));
            }
        }
    }
    // intersection numbers
    let mut table = vec![vec![-1i64; classes * classes]; classes];
    for x in 0..n {
        for y in 0..n {
            let v = gph.relation(x, y) as usize;
            for mm in 0..classes {
                for nn in 0..classes {
                    let count = (0..n)
                        .filter(|&z| gph.relation(x, z) == mm as u8 && gph.relation(z, y) == nn as u8)
                        .count() as i64;
                    let slot = &mut table[v][mm * classes + nn];
                    if *slot < 0 {
                        *slot = count;
                    } else if *slot != count {
                        return Err(Error::NotRegular(format!(
                            "p^{v}_{{{mm},{nn}}} not constant: {} vs {count}",
                            *slot
                        )));
                    }
                }
            }
        }
    }
    for v in 0..classes {
        for mm in 0..classes {
            for nn in 0..classes {
                if table[v][mm * classes + nn] != table[v][nn * classes + mm] {
                    return Err(Error::NotRegular(format!("p^{v}_{{{mm},{nn}}} not commutative")));
                }
            }
        }
    }
    Ok(())
}

/// Spectral decomposition cross-check: `e(W, W) = sum_i lambda_i alpha_i^2`
/// where `alpha_i = <1_W, v_i>`; returns the absolute defect.
pub fn edge_spectral_defect(gph: &SchemeGraph, w: &[usize]) -> Result<f64> {
    let n = gph.vertex_count();
    if n > EIGEN_LIMIT {
        return Err(Error::SizeLimitExceeded(format!("|V| = {n}")));
    }
    let a = DMatrix::<f64>::from_fn(n, n, |i, j| if gph.relation(i, j) == 1 { 1.0 } else { 0.0 });
    let se = a.clone().symmetric_eigen();
    let mut indicator = DMatrix::<f64>::zeros(n, 1);
    let mut sorted: Vec<usize> = w.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    for &i in &sorted {
        indicator[(i, 0)] = 1.0;
    }
    let alphas = se.eigenvectors.transpose() * &indicator;
    let recon: f64 = (0..n).map(|i| se.eigenvalues[i] * alphas[(i, 0)] * alphas[(i, 0)]).sum();
    let exact = edge_bound_check(gph, &sorted).edges as f64;
    Ok((recon - exact).abs())
}

/// Bridge between sphere zero-distance pairs and `R_1` edges.
///
/// `points` must satisfy `Q(a, a) = g` and hold at most one point per line;
/// `zero_pairs` counts ordered pairs `a != b` with `Q(a-b, a-b) = 0`, and
/// `r1_edges` counts ordered `R_1` pairs among the corresponding vertices.
/// Every zero pair is an `R_1` edge (the pair `(a, b/g)` realizes the `R_1`
/// Gram matrix), while an edge accounts for up to two sign choices, so
/// `zero_pairs <= r1_edges <= 2 * max(zero_pairs, opposite_pairs)`.
#[derive(Debug, Clone)]
pub struct BridgeReport {
    pub zero_pairs: u64,
    /// Pairs with `Q(a, b) = -g` (the other sign class on the same edges).
    pub opposite_pairs: u64,
    pub r1_edges: u64,
    /// `zero_pairs / r1_edges` when edges exist.
    pub ratio: f64,
}

pub fn sphere_graph_bridge(
    f: &FiniteField,
    gph: &SchemeGraph,
    points: &PointSet,
) -> Result<BridgeReport> {
    let m = gph.m;
    let g = f.primitive();
    let coords = points.coords(f);
    let mut indices = Vec::with_capacity(coords.len());
    for x in &coords {
        if scheme_form(f, m, x, x) != g {
            return Err(Error::HypothesisViolation("points must satisfy Q(a, a) = g".into()));
        }
        let idx = gph
            .vertex_index(f, x)
            .ok_or_else(|| Error::HypothesisViolation("point line is not a vertex".into()))?;
        indices.push(idx);
    }
    {
        let mut dedup = indices.clone();
        dedup.sort_unstable();
        dedup.dedup();
        if dedup.len() != indices.len() {
            return Err(Error::HypothesisViolation("two points share a projective line".into()));
        }
    }

    let (mut zero, mut opp) = (0u64, 0u64);
    for (i, a) in coords.iter().enumerate() {
        for (j, b) in coords.iter().enumerate() {
            if i == j {
                continue;
            }
            // Q(a-b, a-b) = 2g - 2Q(a, b): zero distance means Q(a, b) = g
            let qab = scheme_form(f, m, a, b);
            if qab == g {
                zero += 1;
            } else if qab == f.neg(g) {
                opp += 1;
            }
        }
    }
    let edges: u64 = indices
        .iter()
        .map(|&i| indices.iter().filter(|&&j| gph.relation(i, j) == 1).count() as u64)
        .sum();
    Ok(BridgeReport {
        zero_pairs: zero,
        opposite_pairs: opp,
        r1_edges: edges,
        ratio: if edges > 0 { zero as f64 / edges as f64 } else { 0.0 },
    })
}
