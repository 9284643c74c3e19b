//! Additive energy, zero-distance pair counts, point–hyperplane incidences,
//! and the explicit-constant energy bounds for sets on varieties.
//!
//! Counts are exact integers. Energy uses the sum-representation function
//! `r(x) = #{(a, b) in A^2 : a + b = x}` accumulated densely over `F_q^d`,
//! so `E(A) = sum_x r(x)^2` with no floating point anywhere.

use crate::error::{Error, Result};
use crate::field::{FiniteField, Fq};
use crate::fourier::{self, ComplexGrid, LpExponent, MeasureKind};
use crate::geometry::{self, PointSet, Variety};
use rayon::prelude::*;

/// Size guard for the quadratic pair loops.
const SET_LIMIT: usize = 100_000;

/// Exact additive energy `E(A) = #{(a,b,c,d) in A^4 : a + b = c + d}`.
pub fn additive_energy(f: &FiniteField, a: &PointSet) -> Result<u64> {
    if a.len() > SET_LIMIT {
        return Err(Error::SizeLimitExceeded(format!("|A| = {} > {SET_LIMIT}", a.len())));
    }
    let n = geometry::space_size(f, a.d)? as usize;
    let coords = a.coords(f);
    let m = coords.len();
    if m == 0 {
        return Ok(0);
    }

    let counts = (0..m)
        .into_par_iter()
        .fold(
            || vec![0u32; n],
            |mut acc, i| {
                let ai = &coords[i];
                for aj in &coords {
                    let sum: Vec<Fq> = ai.iter().zip(aj).map(|(&x, &y)| f.add(x, y)).collect();
                    acc[geometry::encode_point(f, &sum) as usize] += 1;
                }
                acc
            },
        )
        .reduce(
            || vec![0u32; n],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    Ok(counts.iter().map(|&r| (r as u64) * (r as u64)).sum())
}

/// `N(A) = #{(a, b) in A^2 : ||a - b|| = 0}`, diagonal included.
pub fn zero_distance_pairs(f: &FiniteField, a: &PointSet) -> u64 {
    let coords = a.coords(f);
    let m = coords.len();
    let off_diag: u64 = (0..m)
        .into_par_iter()
        .map(|i| {
            let mut c = 0u64;
            for j in (i + 1)..m {
                if geometry::norm_diff(f, &coords[i], &coords[j]).is_zero() {
                    c += 1;
                }
            }
            c
        })
        .sum();
    2 * off_diag + m as u64
}

/// Both sides of the `L^4`–energy identity for `A` on a variety `V`:
/// `||(A dsigma)^vee||^4_{L^4(dc)} = q^d E(A) / |V|^4`
/// (which is `q^{4-3d} E(A)` for the paraboloid).
pub fn l4_energy_identity(f: &FiniteField, a: &PointSet, v: &Variety) -> Result<(f64, f64)> {
    let grid = ComplexGrid::indicator(f, a)?;
    let ext = fourier::extension_inverse(f, &grid, v)?;
    let l4 = fourier::lr_norm(f, &ext, LpExponent::from_int(4), &MeasureKind::CountingDC)?;
    let lhs = l4.powi(4);
    let vsize = v.enumerate(f)?.len() as f64;
    let e = additive_energy(f, a)? as f64;
    let rhs = (f.q() as f64).powi(a.d as i32) * e / vsize.powi(4);
    Ok((lhs, rhs))
}

/// Report for one `E(A) <= C (|A|^3/q + q^{(d-2)/2} |A|^2)`-type check.
#[derive(Debug, Clone)]
pub struct EnergyReport {
    pub size: u64,
    pub energy: u64,
    /// `|A|^3 / q`.
    pub bound_main: f64,
    /// `q^{(d-2)/2} |A|^2`.
    pub bound_second: f64,
    pub c_test: f64,
    /// `E(A) / (bound_main + bound_second)`.
    pub ratio: f64,
    pub pass: bool,
}

fn energy_report(size: u64, energy: u64, q: u32, d: usize, c_test: f64) -> EnergyReport {
    let bound_main = (size as f64).powi(3) / q as f64;
    let bound_second = (q as f64).powf((d as f64 - 2.0) / 2.0) * (size as f64).powi(2);
    let denom = bound_main + bound_second;
    let ratio = if denom > 0.0 { energy as f64 / denom } else { 0.0 };
    EnergyReport {
        size,
        energy,
        bound_main,
        bound_second,
        c_test,
        ratio,
        pass: energy as f64 <= c_test * denom || size == 0,
    }
}

fn require_subset(f: &FiniteField, a: &PointSet, v: &Variety) -> Result<()> {
    for c in a.coords(f) {
        if !v.contains(f, &c) {
            return Err(Error::HypothesisViolation("A is not a subset of the variety".into()));
        }
    }
    Ok(())
}

/// Energy bound for `A` on the paraboloid: needs `d = 4k + 3` (`k >= 1`) and
/// `q = 3 mod 4`; asserts `E(A) <= C (|A|^3/q + q^{(d-2)/2}|A|^2)`.
pub fn paraboloid_energy_check(
    f: &FiniteField,
    a: &PointSet,
    c_test: f64,
) -> Result<EnergyReport> {
    let d = a.d;
    if d % 4 != 3 || d < 7 {
        return Err(Error::HypothesisViolation(format!("need d = 4k + 3, k >= 1, got d = {d}")));
    }
    if f.q() % 4 != 3 {
        return Err(Error::HypothesisViolation(format!("need q = 3 mod 4, got q = {}", f.q())));
    }
    require_subset(f, a, &Variety::paraboloid(d))?;
    let e = additive_energy(f, a)?;
    Ok(energy_report(a.len() as u64, e, f.q(), d, c_test))
}

fn sphere_case_hypotheses(f: &FiniteField, d: usize) -> Result<()> {
    let ok = (d % 4 == 1 && d >= 5) || (d % 4 == 3 && f.q() % 4 == 1);
    if !ok {
        return Err(Error::HypothesisViolation(format!(
            "need d = 4k+1 or (d = 4k-1 with q = 1 mod 4), got d = {d}, q = {}",
            f.q()
        )));
    }
    Ok(())
}

fn require_primitive(f: &FiniteField, radius: Fq) -> Result<()> {
    if radius.is_zero() || !f.is_primitive(radius) {
        return Err(Error::HypothesisViolation(format!(
            "radius {} must generate the multiplicative group",
            radius.0
        )));
    }
    Ok(())
}

/// Energy bound for `A` on a sphere of primitive radius: needs `d = 4k + 1`,
/// or `d = 4k - 1` with `q = 1 mod 4`; asserts the same bound shape as the
/// paraboloid check.
pub fn sphere_energy_check(
    f: &FiniteField,
    a: &PointSet,
    radius: Fq,
    c_test: f64,
) -> Result<EnergyReport> {
    let d = a.d;
    sphere_case_hypotheses(f, d)?;
    require_primitive(f, radius)?;
    require_subset(f, a, &Variety::sphere(d, radius))?;
    let e = additive_energy(f, a)?;
    Ok(energy_report(a.len() as u64, e, f.q(), d, c_test))
}

/// Zero-distance pair report against `C (|A|^2/q + q^e |A|)`.
#[derive(Debug, Clone)]
pub struct ZeroPairReport {
    pub size: u64,
    pub pairs: u64,
    pub bound_main: f64,
    pub bound_second: f64,
    pub c_test: f64,
    pub ratio: f64,
    pub pass: bool,
}

fn zero_pair_report(size: u64, pairs: u64, q: u32, exp_num: i64, c_test: f64) -> ZeroPairReport {
    // bound_second = q^{exp_num / 2} |A|
    let bound_main = (size as f64).powi(2) / q as f64;
    let bound_second = (q as f64).powf(exp_num as f64 / 2.0) * size as f64;
    let denom = bound_main + bound_second;
    ZeroPairReport {
        size,
        pairs,
        bound_main,
        bound_second,
        c_test,
        ratio: if denom > 0.0 { pairs as f64 / denom } else { 0.0 },
        pass: pairs as f64 <= c_test * denom || size == 0,
    }
}

/// Unit-constant zero-pair bound for arbitrary `A` in `F_q^d` with
/// `d = 4k + 2`, `q = 3 mod 4`:
/// `N(A) <= |A|^2/q + q^{(d-2)/2} |A|` with constant exactly 1,
/// asserted in exact integer arithmetic (`q N <= |A|^2 + q^{d/2} |A|`).
pub fn zero_pair_unit_bound(f: &FiniteField, a: &PointSet) -> Result<ZeroPairReport> {
    let d = a.d;
    if d % 4 != 2 || f.q() % 4 != 3 {
        return Err(Error::HypothesisViolation(format!(
            "need d = 4k + 2 and q = 3 mod 4, got d = {d}, q = {}",
            f.q()
        )));
    }
    let n = zero_distance_pairs(f, a);
    let size = a.len() as u64;
    let q = f.q() as u128;
    let exact_pass =
        q * n as u128 <= (size as u128) * (size as u128) + q.pow((d / 2) as u32) * size as u128;
    let mut rep = zero_pair_report(size, n, f.q(), d as i64 - 2, 1.0);
    rep.pass = exact_pass;
    Ok(rep)
}

/// Zero-pair bound for `A` on a sphere of primitive radius (hypotheses as in
/// [`sphere_energy_check`]): asserts
/// `#{(a,b) : ||a-b|| = 0} <= C (|A|^2/q + q^{(d-3)/2}|A|)`.
pub fn sphere_zero_pairs_check(
    f: &FiniteField,
    a: &PointSet,
    radius: Fq,
    c_test: f64,
) -> Result<ZeroPairReport> {
    let d = a.d;
    sphere_case_hypotheses(f, d)?;
    require_primitive(f, radius)?;
    require_subset(f, a, &Variety::sphere(d, radius))?;
    let n = zero_distance_pairs(f, a);
    Ok(zero_pair_report(a.len() as u64, n, f.q(), d as i64 - 3, c_test))
}

/// Splits `E(A)` for `A` on the paraboloid into the zero/nonzero
/// base-distance classes: quadruples `a + b = c + d` with
/// `||a_under - b_under|| = 0` or `||d_under - b_under|| = 0` versus both
/// nonzero. Counted by an independent `O(|A|^3)` loop over `(a, b, d)` with
/// membership of `c = a + b - d`, so `E1 + E2` cross-checks the
/// representation-function count.
pub fn paraboloid_energy_split(f: &FiniteField, a: &PointSet) -> Result<(u64, u64)> {
    let d = a.d;
    require_subset(f, a, &Variety::paraboloid(d))?;
    let mask = a.mask(f)?;
    let coords = a.coords(f);
    let m = coords.len();
    let counts: Vec<(u64, u64)> = (0..m)
        .into_par_iter()
        .map(|ai| {
            let (mut e1, mut e2) = (0u64, 0u64);
            for bi in 0..m {
                let ab_zero = geometry::norm_diff(
                    f,
                    &coords[ai][..d - 1],
                    &coords[bi][..d - 1],
                )
                .is_zero();
                let sum: Vec<Fq> = coords[ai]
                    .iter()
                    .zip(&coords[bi])
                    .map(|(&x, &y)| f.add(x, y))
                    .collect();
                for di in 0..m {
                    let c: Vec<Fq> = sum
                        .iter()
                        .zip(&coords[di])
                        .map(|(&s, &t)| f.sub(s, t))
                        .collect();
                    if !mask[geometry::encode_point(f, &c) as usize] {
                        continue;
                    }
                    let db_zero = geometry::norm_diff(
                        f,
                        &coords[di][..d - 1],
                        &coords[bi][..d - 1],
                    )
                    .is_zero();
                    if ab_zero || db_zero {
                        e1 += 1;
                    } else {
                        e2 += 1;
                    }
                }
            }
            (e1, e2)
        })
        .collect();
    let e1: u64 = counts.iter().map(|c| c.0).sum();
    let e2: u64 = counts.iter().map(|c| c.1).sum();
    Ok((e1, e2))
}

/// Report for the incidence mixing bound
/// `|I(U, V) - |U||V|/q| <= q^{(d-1)/2} sqrt(|U||V|)`.
#[derive(Debug, Clone)]
pub struct IncidenceReport {
    pub points: u64,
    pub planes: u64,
    pub incidences: u64,
    /// `|U||V|/q`.
    pub main_term: f64,
    /// `|I - |U||V|/q|`.
    pub deviation: f64,
    pub pass: bool,
}

/// Exact point–hyperplane incidence count with the two-sided mixing bound,
/// asserted in exact integer arithmetic: `(qI - UV)^2 <= q^{d+1} UV`.
/// Hyperplanes are `(normal, offset)` pairs with nonzero normal; duplicates
/// are removed after canonical rescaling.
pub fn point_hyperplane_incidences(
    f: &FiniteField,
    points: &PointSet,
    planes: &[(Vec<Fq>, Fq)],
) -> Result<IncidenceReport> {
    let d = points.d;
    let mut canon: Vec<(Vec<Fq>, Fq)> = Vec::with_capacity(planes.len());
    for (normal, offset) in planes {
        if normal.iter().all(|c| c.is_zero()) {
            return Err(Error::DegeneratePlane);
        }
        // scale so the first nonzero coordinate is 1
        let lead = normal.iter().find(|c| !c.is_zero()).copied().unwrap();
        let s = f.inv(lead);
        canon.push((geometry::scale_point(f, s, normal), f.mul(s, *offset)));
    }
    canon.sort_by_key(|(n, off)| (geometry::encode_point(f, n), off.0));
    canon.dedup();

    let coords = points.coords(f);
    let incidences: u64 = canon
        .par_iter()
        .map(|(normal, offset)| {
            coords
                .iter()
                .filter(|p| geometry::dot(f, p, normal) == *offset)
                .count() as u64
        })
        .sum();

    let u = coords.len() as u128;
    let v = canon.len() as u128;
    let q = f.q() as u128;
    let qi = q * incidences as u128;
    let uv = u * v;
    let diff = qi.abs_diff(uv);
    let pass = diff * diff <= q.pow(d as u32 + 1) * uv;
    let main_term = uv as f64 / f.q() as f64;
    Ok(IncidenceReport {
        points: u as u64,
        planes: v as u64,
        incidences,
        main_term,
        deviation: (incidences as f64 - main_term).abs(),
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{encode_point, mutually_orthogonal, AffineSubspace};
    use crate::numeric::close;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn field(p: u64) -> FiniteField {
        FiniteField::new(p, 1).unwrap()
    }

    fn random_subset(codes: &[u64], size: usize, rng: &mut ChaCha8Rng) -> Vec<u64> {
        let mut v = codes.to_vec();
        v.shuffle(rng);
        v.truncate(size);
        v
    }

    /// Independent cubic oracle: count (a, b, d) with a + b - d in A.
    fn energy_oracle(f: &FiniteField, a: &PointSet) -> u64 {
        let mask = a.mask(f).unwrap();
        let coords = a.coords(f);
        let mut e = 0u64;
        for x in &coords {
            for y in &coords {
                let s: Vec<Fq> = x.iter().zip(y).map(|(&u, &v)| f.add(u, v)).collect();
                for z in &coords {
                    let w: Vec<Fq> = s.iter().zip(z).map(|(&u, &v)| f.sub(u, v)).collect();
                    if mask[encode_point(f, &w) as usize] {
                        e += 1;
                    }
                }
            }
        }
        e
    }

    #[test]
    fn energy_small_cases() {
        let f = field(5);
        let a = PointSet::from_codes(2, vec![7]);
        assert_eq!(additive_energy(&f, &a).unwrap(), 1);
        // |A| = 2 in odd characteristic -> 6 (r-values 1, 2, 1)
        let a = PointSet::from_codes(2, vec![3, 9]);
        assert_eq!(additive_energy(&f, &a).unwrap(), 6);
        assert_eq!(additive_energy(&f, &PointSet::empty(2)).unwrap(), 0);
    }

    #[test]
    fn energy_matches_cubic_oracle_on_random_sets() {
        for p in [3u64, 5, 7] {
            let f = field(p);
            let n = geometry::space_size(&f, 2).unwrap();
            let all: Vec<u64> = (0..n).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(p);
            for _ in 0..10 {
                let size = rng.random_range(1..=n as usize / 2);
                let a = PointSet::from_codes(2, random_subset(&all, size, &mut rng));
                assert_eq!(additive_energy(&f, &a).unwrap(), energy_oracle(&f, &a));
            }
        }
    }

    #[test]
    fn subgroup_has_full_energy() {
        // span of mutually orthogonal vectors is a group under addition,
        // so r = |A| on A + A and E = |A|^3
        let f = field(3);
        let vs = mutually_orthogonal(&f, 4).unwrap();
        let span = AffineSubspace { base: vec![Fq::ZERO; 4], basis: vs }.enumerate(&f);
        let e = additive_energy(&f, &span).unwrap();
        assert_eq!(e, (span.len() as u64).pow(3));
    }

    #[test]
    fn energy_invariance_under_symmetries() {
        let f = field(7);
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let n = geometry::space_size(&f, 3).unwrap();
        let all: Vec<u64> = (0..n).collect();
        for _ in 0..5 {
            let a = PointSet::from_codes(3, random_subset(&all, 40, &mut rng));
            let e = additive_energy(&f, &a).unwrap();
            let v = vec![Fq(2), Fq(0), Fq(6)];
            assert_eq!(additive_energy(&f, &a.translate(&f, &v)).unwrap(), e);
            let flipped: Vec<Vec<Fq>> = a
                .coords(&f)
                .into_iter()
                .map(|c| vec![f.neg(c[2]), c[0], c[1]])
                .collect();
            let b = PointSet::from_points(&f, 3, &flipped);
            assert_eq!(additive_energy(&f, &b).unwrap(), e);
        }
    }

    #[test]
    fn zero_pairs_basics() {
        let f = field(3);
        let a = PointSet::from_codes(2, vec![0, 1]);
        assert!(zero_distance_pairs(&f, &a) >= a.len() as u64);
        // isotropic span: all pairs have zero distance
        let vs = mutually_orthogonal(&f, 4).unwrap();
        let span = AffineSubspace { base: vec![Fq::ZERO; 4], basis: vs }.enumerate(&f);
        assert_eq!(zero_distance_pairs(&f, &span), (span.len() as u64).pow(2));
    }

    #[test]
    fn unit_constant_zero_pair_bound_random_sets() {
        let f = field(3);
        let n = geometry::space_size(&f, 6).unwrap();
        let all: Vec<u64> = (0..n).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let size = rng.random_range(1..=400usize);
            let a = PointSet::from_codes(6, random_subset(&all, size, &mut rng));
            let rep = zero_pair_unit_bound(&f, &a).unwrap();
            assert!(rep.pass, "unit-constant bound failed: {rep:?}");
        }
        let bad_d = PointSet::from_codes(5, vec![0]);
        assert!(zero_pair_unit_bound(&f, &bad_d).is_err());
        let f5 = field(5);
        let a = PointSet::from_codes(6, vec![0]);
        assert!(zero_pair_unit_bound(&f5, &a).is_err());
    }

    #[test]
    fn l4_energy_identity_exhaustive_small() {
        // all nonempty subsets of the parabola at q = 3
        let f = field(3);
        let v = Variety::paraboloid(2);
        let pts = v.enumerate(&f).unwrap();
        let codes = pts.codes().to_vec();
        for mask in 1u32..(1 << codes.len()) {
            let chosen: Vec<u64> = codes
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &c)| c)
                .collect();
            let a = PointSet::from_codes(2, chosen);
            let (lhs, rhs) = l4_energy_identity(&f, &a, &v).unwrap();
            assert!(close(lhs, rhs, lhs.max(1.0)), "mask {mask}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn l4_energy_identity_on_spheres() {
        let f = field(5);
        let g = f.primitive();
        let v = Variety::sphere(3, g);
        let pts = v.enumerate(&f).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let size = rng.random_range(1..=pts.len());
            let a = PointSet::from_codes(3, random_subset(pts.codes(), size, &mut rng));
            let (lhs, rhs) = l4_energy_identity(&f, &a, &v).unwrap();
            assert!(close(lhs, rhs, lhs.max(1.0)));
        }
        // single point on P in d = 3: both sides q^{4-3d}
        let v = Variety::paraboloid(3);
        let p0 = PointSet::from_codes(3, vec![0]);
        let (lhs, rhs) = l4_energy_identity(&f, &p0, &v).unwrap();
        let expect = (f.q() as f64).powi(4 - 9);
        assert!(close(lhs, expect, 1.0) && close(rhs, expect, 1.0));
        // support violation
        let off = PointSet::from_codes(3, vec![1]);
        assert!(l4_energy_identity(&f, &off, &Variety::sphere(3, g)).is_err());
    }

    #[test]
    fn paraboloid_energy_check_hypotheses_and_sharpness() {
        let f = field(3);
        // d = 7, q = 3: sharpness set V x {0}^3 achieves E = |A|^3
        let vs = mutually_orthogonal(&f, 4).unwrap();
        let span4 = AffineSubspace { base: vec![Fq::ZERO; 4], basis: vs }.enumerate(&f);
        let lifted: Vec<Vec<Fq>> = span4
            .coords(&f)
            .into_iter()
            .map(|mut c| {
                c.extend([Fq::ZERO, Fq::ZERO, Fq::ZERO]);
                c
            })
            .collect();
        let a = PointSet::from_points(&f, 7, &lifted);
        assert_eq!(a.len(), 9); // q^{(d-3)/2}
        let rep = paraboloid_energy_check(&f, &a, 8.0).unwrap();
        assert_eq!(rep.energy, (a.len() as u64).pow(3));
        assert!(rep.pass);

        let f5 = field(5);
        let one = PointSet::from_codes(7, vec![0]);
        assert!(paraboloid_energy_check(&f5, &one, 8.0).is_err()); // q = 1 mod 4
        let bad = PointSet::from_codes(5, vec![0]);
        assert!(paraboloid_energy_check(&f, &bad, 8.0).is_err()); // d = 5

        let rep = paraboloid_energy_check(&f, &one, 8.0).unwrap();
        assert_eq!(rep.energy, 1);
        assert!(rep.pass);
    }

    #[test]
    fn sphere_energy_check_on_whole_sphere() {
        let f = field(5);
        let g = f.primitive();
        let v = Variety::sphere(5, g);
        let pts = v.enumerate(&f).unwrap();
        let rep = sphere_energy_check(&f, &pts, g, 8.0).unwrap();
        assert!(rep.pass, "whole-sphere energy: {rep:?}");
        let zp = sphere_zero_pairs_check(&f, &pts, g, 8.0).unwrap();
        assert!(zp.pass, "whole-sphere zero pairs: {zp:?}");
        // non-primitive radius rejected
        assert!(sphere_energy_check(&f, &pts, Fq(1), 8.0).is_err());
        // wrong dimension class rejected
        let f3 = field(3);
        let p3 = PointSet::from_codes(3, vec![0]);
        assert!(sphere_energy_check(&f3, &p3, f3.primitive(), 8.0).is_err());
    }

    #[test]
    fn energy_split_sums_to_total() {
        let f = field(3);
        let v = Variety::paraboloid(3);
        let pts = v.enumerate(&f).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let size = rng.random_range(1..=pts.len());
            let a = PointSet::from_codes(3, random_subset(pts.codes(), size, &mut rng));
            let (e1, e2) = paraboloid_energy_split(&f, &a).unwrap();
            assert_eq!(e1 + e2, additive_energy(&f, &a).unwrap());
        }
    }

    #[test]
    fn incidence_exact_cases() {
        let f = field(7);
        let d = 3;
        let full = PointSet::full_space(&f, d).unwrap();
        let plane = vec![(vec![Fq(1), Fq(2), Fq(0)], Fq(3))];
        let rep = point_hyperplane_incidences(&f, &full, &plane).unwrap();
        assert_eq!(rep.incidences, 49); // q^{d-1}, deviation 0
        assert!(rep.deviation <= 1e-9);
        assert!(rep.pass);
        let rep = point_hyperplane_incidences(&f, &PointSet::empty(d), &plane).unwrap();
        assert_eq!(rep.incidences, 0);
        assert!(point_hyperplane_incidences(&f, &full, &[(vec![Fq(0); 3], Fq(1))]).is_err());
    }

    #[test]
    fn incidence_mixing_bound_random() {
        let f = field(7);
        let d = 3;
        let n = geometry::space_size(&f, d).unwrap();
        let all: Vec<u64> = (0..n).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..50 {
            let m = rng.random_range(1..=n as usize);
            let points = PointSet::from_codes(d, random_subset(&all, m, &mut rng));
            let nplanes = rng.random_range(1..=80usize);
            let planes: Vec<(Vec<Fq>, Fq)> = (0..nplanes)
                .map(|_| loop {
                    let normal: Vec<Fq> =
                        (0..d).map(|_| Fq(rng.random_range(0..f.q()))).collect();
                    if normal.iter().any(|c| !c.is_zero()) {
                        break (normal, Fq(rng.random_range(0..f.q())));
                    }
                })
                .collect();
            let rep = point_hyperplane_incidences(&f, &points, &planes).unwrap();
            assert!(rep.pass, "mixing bound failed: {rep:?}");
        }
    }
}
