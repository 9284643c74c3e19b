//! Points of `F_q^d`, the distance form `||x|| = x_1^2 + ... + x_d^2`,
//! paraboloids and spheres, quadratic-form equivalence, affine subspaces
//! lying on spheres, and mutually orthogonal vector systems.
//!
//! Points are encoded as integers in `[0, q^d)` with coordinate 0 least
//! significant. Every search scans encodings in increasing order, so all
//! outputs are deterministic.

use crate::error::{Error, Result};
use crate::field::{FiniteField, Fq};

/// Enumeration budget for full-space scans.
pub const SPACE_LIMIT: u64 = 4_000_000;

/// `q^d`, failing when the space exceeds the enumeration budget.
pub fn space_size(f: &FiniteField, d: usize) -> Result<u64> {
    let mut n = 1u64;
    for _ in 0..d {
        n = n
            .checked_mul(f.q() as u64)
            .filter(|&n| n <= SPACE_LIMIT)
            .ok_or_else(|| Error::SizeLimitExceeded(format!("q^d = {}^{} too large", f.q(), d)))?;
    }
    Ok(n)
}

pub fn encode_point(f: &FiniteField, coords: &[Fq]) -> u64 {
    let q = f.q() as u64;
    coords.iter().rev().fold(0u64, |acc, c| acc * q + c.0 as u64)
}

pub fn decode_point(f: &FiniteField, code: u64, d: usize) -> Vec<Fq> {
    let q = f.q() as u64;
    let mut c = code;
    (0..d)
        .map(|_| {
            let v = Fq((c % q) as u32);
            c /= q;
            v
        })
        .collect()
}

/// `||x|| = sum x_i^2`.
pub fn norm(f: &FiniteField, coords: &[Fq]) -> Fq {
    coords
        .iter()
        .fold(Fq::ZERO, |acc, &c| f.add(acc, f.square(c)))
}

pub fn dot(f: &FiniteField, x: &[Fq], y: &[Fq]) -> Fq {
    x.iter()
        .zip(y)
        .fold(Fq::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
}

/// `||x - y||` without allocating the difference.
#[inline]
pub fn norm_diff(f: &FiniteField, x: &[Fq], y: &[Fq]) -> Fq {
    x.iter().zip(y).fold(Fq::ZERO, |acc, (&a, &b)| {
        f.add(acc, f.square(f.sub(a, b)))
    })
}

pub fn add_points(f: &FiniteField, x: &[Fq], y: &[Fq]) -> Vec<Fq> {
    x.iter().zip(y).map(|(&a, &b)| f.add(a, b)).collect()
}

pub fn sub_points(f: &FiniteField, x: &[Fq], y: &[Fq]) -> Vec<Fq> {
    x.iter().zip(y).map(|(&a, &b)| f.sub(a, b)).collect()
}

pub fn scale_point(f: &FiniteField, t: Fq, x: &[Fq]) -> Vec<Fq> {
    x.iter().map(|&a| f.mul(t, a)).collect()
}

/// A finite subset of `F_q^d`: sorted, deduplicated point encodings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    pub d: usize,
    codes: Vec<u64>,
}

impl PointSet {
    pub fn from_codes(d: usize, mut codes: Vec<u64>) -> PointSet {
        codes.sort_unstable();
        codes.dedup();
        PointSet { d, codes }
    }

    pub fn from_points(f: &FiniteField, d: usize, pts: &[Vec<Fq>]) -> PointSet {
        Self::from_codes(d, pts.iter().map(|p| encode_point(f, p)).collect())
    }

    pub fn empty(d: usize) -> PointSet {
        PointSet { d, codes: Vec::new() }
    }

    /// The whole space `F_q^d`.
    pub fn full_space(f: &FiniteField, d: usize) -> Result<PointSet> {
        let n = space_size(f, d)?;
        Ok(PointSet { d, codes: (0..n).collect() })
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn codes(&self) -> &[u64] {
        &self.codes
    }

    pub fn contains(&self, code: u64) -> bool {
        self.codes.binary_search(&code).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.codes.iter().copied()
    }

    /// Decoded coordinates for every member, in encoding order.
    pub fn coords(&self, f: &FiniteField) -> Vec<Vec<Fq>> {
        self.codes.iter().map(|&c| decode_point(f, c, self.d)).collect()
    }

    /// Dense membership mask over `[0, q^d)`.
    pub fn mask(&self, f: &FiniteField) -> Result<Vec<bool>> {
        let n = space_size(f, self.d)? as usize;
        let mut m = vec![false; n];
        for &c in &self.codes {
            m[c as usize] = true;
        }
        Ok(m)
    }

    pub fn translate(&self, f: &FiniteField, v: &[Fq]) -> PointSet {
        let pts: Vec<Vec<Fq>> = self
            .coords(f)
            .into_iter()
            .map(|p| add_points(f, &p, v))
            .collect();
        PointSet::from_points(f, self.d, &pts)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarietyKind {
    /// `x_d = x_1^2 + ... + x_{d-1}^2`.
    Paraboloid,
    /// `||x|| = j`.
    Sphere(Fq),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Variety {
    pub kind: VarietyKind,
    pub d: usize,
}

impl Variety {
    pub fn paraboloid(d: usize) -> Variety {
        assert!(d >= 2);
        Variety { kind: VarietyKind::Paraboloid, d }
    }

    pub fn sphere(d: usize, j: Fq) -> Variety {
        assert!(d >= 1);
        Variety { kind: VarietyKind::Sphere(j), d }
    }

    pub fn contains(&self, f: &FiniteField, coords: &[Fq]) -> bool {
        debug_assert_eq!(coords.len(), self.d);
        match self.kind {
            VarietyKind::Paraboloid => norm(f, &coords[..self.d - 1]) == coords[self.d - 1],
            VarietyKind::Sphere(j) => norm(f, coords) == j,
        }
    }

    /// Exact solution set by full enumeration.
    pub fn enumerate(&self, f: &FiniteField) -> Result<PointSet> {
        match self.kind {
            VarietyKind::Paraboloid => {
                // graph of the norm over F_q^{d-1}
                let base = space_size(f, self.d - 1)?;
                space_size(f, self.d)?;
                let mut codes = Vec::with_capacity(base as usize);
                for b in 0..base {
                    let under = decode_point(f, b, self.d - 1);
                    let last = norm(f, &under);
                    codes.push(b + last.0 as u64 * base);
                }
                Ok(PointSet::from_codes(self.d, codes))
            }
            VarietyKind::Sphere(j) => {
                let n = space_size(f, self.d)?;
                let mut codes = Vec::new();
                let mut coords = vec![Fq::ZERO; self.d];
                // odometer scan keeps the per-point decode cost amortized O(1)
                for code in 0..n {
                    if norm(f, &coords) == j {
                        codes.push(code);
                    }
                    for c in coords.iter_mut() {
                        if c.0 + 1 < f.q() {
                            c.0 += 1;
                            break;
                        }
                        c.0 = 0;
                    }
                }
                Ok(PointSet::from_codes(self.d, codes))
            }
        }
    }
}

/// `base + span(basis)` with linearly independent basis vectors.
#[derive(Debug, Clone)]
pub struct AffineSubspace {
    pub base: Vec<Fq>,
    pub basis: Vec<Vec<Fq>>,
}

impl AffineSubspace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// All `q^k` points of the subspace.
    pub fn enumerate(&self, f: &FiniteField) -> PointSet {
        let k = self.basis.len();
        let d = self.base.len();
        let q = f.q() as u64;
        let total = q.pow(k as u32);
        let mut pts = Vec::with_capacity(total as usize);
        for idx in 0..total {
            let mut p = self.base.clone();
            let mut t = idx;
            for b in &self.basis {
                let c = Fq((t % q) as u32);
                t /= q;
                for i in 0..d {
                    p[i] = f.add(p[i], f.mul(c, b[i]));
                }
            }
            pts.push(p);
        }
        PointSet::from_points(f, d, &pts)
    }
}

/// Row-major invertible matrix `T` with `||T x|| = N(x)` for the diagonal
/// normal form `N` described by `alpha` (hyperbolic pairs then the residual
/// `alpha` term).
#[derive(Debug, Clone)]
pub struct FormTransform {
    pub matrix: Vec<Vec<Fq>>,
    pub alpha: Fq,
    pub d: usize,
}

impl FormTransform {
    pub fn apply(&self, f: &FiniteField, x: &[Fq]) -> Vec<Fq> {
        (0..self.d).map(|r| dot(f, &self.matrix[r], x)).collect()
    }

    /// Diagonal coefficients of the normal form: `1, -1, ..., 1, -alpha`
    /// (even `d`) or `1, -1, ..., -1, alpha` (odd `d`).
    pub fn normal_coeffs(&self, f: &FiniteField) -> Vec<Fq> {
        let mut coeffs: Vec<Fq> = (0..self.d - 1)
            .map(|i| if i % 2 == 0 { Fq::ONE } else { f.neg(Fq::ONE) })
            .collect();
        if self.d % 2 == 0 {
            coeffs.push(f.neg(self.alpha));
        } else {
            coeffs.push(self.alpha);
        }
        coeffs
    }

    pub fn normal_form_eval(&self, f: &FiniteField, x: &[Fq]) -> Fq {
        self.normal_coeffs(f)
            .iter()
            .zip(x)
            .fold(Fq::ZERO, |acc, (&c, &xi)| {
                f.add(acc, f.mul(c, f.square(xi)))
            })
    }
}

/// Finds `v` in the span of `basis` with `||v|| = target != 0`.
///
/// Single vectors are tried first (scaled into the right square class),
/// then all basis pairs. If every pair restriction were degenerate with all
/// basis vectors isotropic the whole form would vanish, so on a
/// nondegenerate complement the pair scan cannot fail.
fn represent_in_span(f: &FiniteField, basis: &[Vec<Fq>], target: Fq) -> Option<Vec<Fq>> {
    debug_assert!(!target.is_zero());
    for b in basis {
        let nb = norm(f, b);
        if nb.is_zero() {
            continue;
        }
        if let Some(s) = f.sqrt(f.div(target, nb)) {
            if !s.is_zero() {
                return Some(scale_point(f, s, b));
            }
        }
    }
    for i in 0..basis.len() {
        for k in (i + 1)..basis.len() {
            let (bi, bk) = (&basis[i], &basis[k]);
            let (nii, nik, nkk) = (norm(f, bi), dot(f, bi, bk), norm(f, bk));
            let det = f.sub(f.mul(nii, nkk), f.square(nik));
            if det.is_zero() {
                continue;
            }
            for x in f.elements() {
                for y in f.elements() {
                    let val = f.add(
                        f.add(f.mul(f.square(x), nii), f.mul(f.square(y), nkk)),
                        f.mul(f.int(2), f.mul(f.mul(x, y), nik)),
                    );
                    if val == target {
                        let mut v = scale_point(f, x, bi);
                        for t in 0..v.len() {
                            v[t] = f.add(v[t], f.mul(y, bk[t]));
                        }
                        return Some(v);
                    }
                }
            }
        }
    }
    None
}

/// Basis of `{ w in span(basis) : w . v = 0 }` for `||v|| != 0`.
fn orthogonal_complement(f: &FiniteField, basis: &[Vec<Fq>], v: &[Fq]) -> Vec<Vec<Fq>> {
    let nv = norm(f, v);
    debug_assert!(!nv.is_zero());
    let projected: Vec<Vec<Fq>> = basis
        .iter()
        .map(|b| {
            let c = f.div(dot(f, b, v), nv);
            b.iter().zip(v).map(|(&bi, &vi)| f.sub(bi, f.mul(c, vi))).collect()
        })
        .collect();
    row_reduce(f, projected)
}

/// Gaussian elimination; returns an independent spanning subset.
pub fn row_reduce(f: &FiniteField, rows: Vec<Vec<Fq>>) -> Vec<Vec<Fq>> {
    let mut out: Vec<Vec<Fq>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for mut r in rows {
        for (&p, prev) in pivots.iter().zip(&out) {
            if !r[p].is_zero() {
                let c = f.div(r[p], prev[p]);
                for i in 0..r.len() {
                    r[i] = f.sub(r[i], f.mul(c, prev[i]));
                }
            }
        }
        if let Some(p) = r.iter().position(|c| !c.is_zero()) {
            pivots.push(p);
            out.push(r);
        }
    }
    out
}

/// Builds an invertible `T` carrying `||.||` to the classification normal
/// form: the columns of `T` realize the normal form's Gram matrix under the
/// standard dot product, so `||T x|| = N(x)` for every `x`.
pub fn form_equivalence(f: &FiniteField, d: usize) -> FormTransform {
    assert!(d >= 2);
    let lambda = f.primitive(); // a fixed non-square
    let mut columns: Vec<Vec<Fq>> = Vec::with_capacity(d);
    let mut complement: Vec<Vec<Fq>> = (0..d)
        .map(|i| {
            let mut e = vec![Fq::ZERO; d];
            e[i] = Fq::ONE;
            e
        })
        .collect();

    for i in 0..d - 1 {
        let target = if i % 2 == 0 { Fq::ONE } else { f.neg(Fq::ONE) };
        let v = represent_in_span(f, &complement, target)
            .expect("a nondegenerate form of rank >= 2 represents every nonzero value");
        complement = orthogonal_complement(f, &complement, &v);
        columns.push(v);
    }

    debug_assert_eq!(complement.len(), 1);
    let z = complement.pop().unwrap();
    let gamma = norm(f, &z);
    debug_assert!(!gamma.is_zero(), "residual line of a nondegenerate form");
    // residual target is -alpha (even d) or alpha (odd d), alpha in {1, lambda};
    // exactly one choice lands in the square class of gamma
    let want_sign = if d % 2 == 0 { f.neg(Fq::ONE) } else { Fq::ONE };
    let alpha = if f.is_square(f.div(gamma, want_sign)) { Fq::ONE } else { lambda };
    let target = f.mul(want_sign, alpha);
    let s = f
        .sqrt(f.div(target, gamma))
        .expect("alpha was chosen to land in the square class of the residual");
    columns.push(scale_point(f, s, &z));

    // discriminant consistency forced by the construction
    let disc_exp = if d % 2 == 0 { d / 2 } else { (d - 1) / 2 };
    let minus_one_pow = f.pow(f.neg(Fq::ONE), disc_exp as i64);
    debug_assert_eq!(f.quad_char(minus_one_pow) * f.quad_char(alpha), 1);

    let matrix: Vec<Vec<Fq>> = (0..d)
        .map(|r| (0..d).map(|c| columns[c][r]).collect())
        .collect();
    FormTransform { matrix, alpha, d }
}

fn sphere_subspace_dim(f: &FiniteField, d: usize, j: Fq) -> Result<usize> {
    if j.is_zero() || d < 2 {
        return Err(Error::CaseMismatch(format!(
            "need d >= 2 and j != 0, got d = {d}, j = {}",
            j.0
        )));
    }
    if d % 2 == 0 {
        return Ok((d - 2) / 2);
    }
    let square = |x: Fq| f.quad_char(x) == 1;
    match d % 4 {
        1 => Ok(if square(j) { (d - 1) / 2 } else { (d - 3) / 2 }),
        3 => Ok(if square(f.neg(j)) { (d - 1) / 2 } else { (d - 3) / 2 }),
        _ => unreachable!(),
    }
}

/// An affine subspace `H` of classified size lying on the sphere `S_j`,
/// `j != 0`: `|H| = q^k` with `k = (d-2)/2` for even `d`, `(d-1)/2` for odd
/// `d` when the residual equation has a one-variable solution, `(d-3)/2`
/// otherwise.
///
/// `H` is built in normal-form coordinates from the `(t, t, ...)` diagonal
/// pattern and pulled back through [`form_equivalence`].
pub fn subspace_on_sphere(f: &FiniteField, d: usize, j: Fq) -> Result<AffineSubspace> {
    let k = sphere_subspace_dim(f, d, j)?;
    let tf = form_equivalence(f, d);
    let alpha = tf.alpha;

    let mut nf_basis: Vec<Vec<Fq>> = (0..k)
        .map(|i| {
            let mut b = vec![Fq::ZERO; d];
            b[2 * i] = Fq::ONE;
            b[2 * i + 1] = Fq::ONE;
            b
        })
        .collect();

    let mut base = vec![Fq::ZERO; d];
    if d % 2 == 0 {
        // a^2 - alpha b^2 = j in the last two coordinates
        let mut found = None;
        'outer: for a in f.elements() {
            let rhs = f.div(f.sub(f.square(a), j), alpha);
            if let Some(b) = f.sqrt(rhs) {
                found = Some((a, b));
                break 'outer;
            }
        }
        let (a, b) = found.expect("x^2 - alpha y^2 represents every j != 0");
        base[d - 2] = a;
        base[d - 1] = b;
    } else if k == (d - 1) / 2 {
        // alpha a^2 = j
        let a = f
            .sqrt(f.div(j, alpha))
            .expect("case selection guarantees eta(alpha j) = 1");
        base[d - 1] = a;
    } else {
        // a^2 - b^2 + alpha c^2 = j via the hyperbolic pair: c = 0,
        // a - b = 1, a + b = j
        let inv2 = f.inv(f.int(2));
        base[d - 3] = f.mul(f.add(j, Fq::ONE), inv2);
        base[d - 2] = f.mul(f.sub(j, Fq::ONE), inv2);
    }

    debug_assert_eq!(tf.normal_form_eval(f, &base), j);

    let pulled_base = tf.apply(f, &base);
    let pulled_basis: Vec<Vec<Fq>> = nf_basis.drain(..).map(|b| tf.apply(f, &b)).collect();
    Ok(AffineSubspace { base: pulled_base, basis: pulled_basis })
}

/// `d/2` mutually orthogonal (including self-orthogonal) linearly
/// independent vectors in `F_q^d`; exists for `d = 4k` over any odd `q` and
/// for `d = 4k + 2` only when `q = 1 mod 4`.
pub fn mutually_orthogonal(f: &FiniteField, d: usize) -> Result<Vec<Vec<Fq>>> {
    if d % 2 != 0 || d == 0 {
        return Err(Error::ImpossibleCase(format!(
            "d/2 mutually orthogonal vectors need positive even d, got {d}"
        )));
    }
    if d % 4 == 2 && f.q() % 4 == 3 {
        return Err(Error::ImpossibleCase(format!(
            "d = {d} = 2 mod 4 with q = {} = 3 mod 4",
            f.q()
        )));
    }
    let mut vs: Vec<Vec<Fq>> = Vec::with_capacity(d / 2);
    let blocks = d / 4;
    if blocks > 0 {
        // a^2 + b^2 = -1, first solution in encoding order
        let m1 = f.neg(Fq::ONE);
        let (a, b) = f
            .elements()
            .find_map(|x| f.sqrt(f.sub(m1, f.square(x))).map(|y| (x, y)))
            .expect("-1 is a sum of two squares in every finite field");
        for blk in 0..blocks {
            let off = 4 * blk;
            let mut v1 = vec![Fq::ZERO; d];
            v1[off] = Fq::ONE;
            v1[off + 2] = a;
            v1[off + 3] = b;
            let mut v2 = vec![Fq::ZERO; d];
            v2[off + 1] = Fq::ONE;
            v2[off + 2] = b;
            v2[off + 3] = f.neg(a);
            vs.push(v1);
            vs.push(v2);
        }
    }
    if d % 4 == 2 {
        let i = f.sqrt(f.neg(Fq::ONE)).expect("q = 1 mod 4 was checked above");
        let mut v = vec![Fq::ZERO; d];
        v[d - 2] = Fq::ONE;
        v[d - 1] = i;
        vs.push(v);
    }
    Ok(vs)
}

/// Largest `k` such that some `k`-dimensional affine subspace lies inside
/// the variety, by exhaustive search over direction spans. Only feasible at
/// tiny sizes; the budget is `q^d <= 4000`.
pub fn max_affine_subspace_dim(f: &FiniteField, v: &Variety) -> Result<usize> {
    let mut n = 1u64;
    for _ in 0..v.d {
        n = n.checked_mul(f.q() as u64).unwrap_or(u64::MAX);
    }
    if n > 4000 {
        return Err(Error::SizeLimitExceeded(format!(
            "exhaustive subspace search budget is q^d <= 4000, got {n}"
        )));
    }
    let pts = v.enumerate(f)?;
    let mask = pts.mask(f)?;

    // canonical projective representatives: smallest encoding on each line
    let mut dirs: Vec<u64> = Vec::new();
    let mut seen = vec![false; n as usize];
    for code in 1..n {
        if seen[code as usize] {
            continue;
        }
        let coords = decode_point(f, code, v.d);
        for t in f.units() {
            seen[encode_point(f, &scale_point(f, t, &coords)) as usize] = true;
        }
        dirs.push(code);
    }
    let dir_coords: Vec<Vec<Fq>> = dirs.iter().map(|&c| decode_point(f, c, v.d)).collect();

    let mut best = 0usize;
    for &base_code in pts.codes() {
        let base = decode_point(f, base_code, v.d);
        // translated membership: w such that base + w lies on the variety
        let mut diff_mask = vec![false; n as usize];
        for (code, &inside) in mask.iter().enumerate() {
            if inside {
                let w = sub_points(f, &decode_point(f, code as u64, v.d), &base);
                diff_mask[encode_point(f, &w) as usize] = true;
            }
        }
        // directions whose whole line stays inside
        let good: Vec<usize> = (0..dirs.len())
            .filter(|&i| {
                f.units().all(|t| {
                    diff_mask[encode_point(f, &scale_point(f, t, &dir_coords[i])) as usize]
                })
            })
            .collect();
        let mut span: Vec<u64> = vec![0];
        extend_subspace(f, &diff_mask, &dir_coords, &good, 0, &mut span, &mut best, v.d);
    }
    Ok(best)
}

#[allow(clippy::too_many_arguments)]
fn extend_subspace(
    f: &FiniteField,
    diff_mask: &[bool],
    dir_coords: &[Vec<Fq>],
    good: &[usize],
    from: usize,
    span: &mut Vec<u64>,
    best: &mut usize,
    d: usize,
) {
    for (gi, &di) in good.iter().enumerate().skip(from) {
        let u = &dir_coords[di];
        // skip directions already inside the current span
        if span.contains(&encode_point(f, u)) {
            continue;
        }
        let mut ok = true;
        let mut added: Vec<u64> = Vec::new();
        'check: for &w in span.iter() {
            let wc = decode_point(f, w, d);
            for t in f.units() {
                let code = encode_point(f, &add_points(f, &wc, &scale_point(f, t, u)));
                if !diff_mask[code as usize] {
                    ok = false;
                    break 'check;
                }
                added.push(code);
            }
        }
        if !ok {
            continue;
        }
        let old_len = span.len();
        span.extend(added);
        let dim = {
            // span size q^dim
            let mut k = 0;
            let mut s = span.len() as u64;
            while s > 1 {
                s /= f.q() as u64;
                k += 1;
            }
            k
        };
        if dim > *best {
            *best = dim;
        }
        extend_subspace(f, diff_mask, dir_coords, good, gi + 1, span, best, d);
        span.truncate(old_len);
    }
}

/// First point of `F_q^c` in encoding order with `||w|| = j`.
pub fn first_point_with_norm(f: &FiniteField, c: usize, j: Fq) -> Option<Vec<Fq>> {
    let mut n = 1u64;
    for _ in 0..c {
        n *= f.q() as u64;
    }
    (0..n)
        .map(|code| decode_point(f, code, c))
        .find(|p| norm(f, p) == j)
}
