//! Distance-set machinery between two point sets.
//!
//! `mu(t) = #{(a, b) in A x B : ||a - b|| = t}` drives everything: the
//! Cauchy–Schwarz floor `|D(A,B)| >= |A|^2|B|^2 / sum mu^2`, the
//! second-moment bounds, the Mattila functional, the four distance
//! theorems with their explicit proof constants, and the sharpness
//! constructions built from isotropic spans and shells.

use crate::error::{Error, Result};
use crate::field::{FiniteField, Fq};
use crate::fourier::{self, ComplexGrid};
use crate::geometry::{self, AffineSubspace, PointSet, Variety};
use crate::numeric::TOL;
use num_complex::Complex64;
use rayon::prelude::*;

/// Pair budget for the exact profile.
const PAIR_LIMIT: u128 = 100_000_000;

/// Exact distance profile of a pair of sets.
#[derive(Debug, Clone)]
pub struct DistanceProfile {
    /// `mu[t] = #{(a, b) : ||a - b|| = t}`, indexed by encoding.
    pub mu: Vec<u64>,
    /// Attained distances, ascending.
    pub delta: Vec<Fq>,
    /// `sum_t mu(t)^2`.
    pub mu_square_sum: u128,
    /// `|A|^2 |B|^2 / sum mu^2`, the Cauchy–Schwarz floor on `|delta|`.
    pub cs_lower_bound: f64,
}

impl DistanceProfile {
    pub fn delta_size(&self) -> u64 {
        self.delta.len() as u64
    }
}

/// Exact `mu` and `Delta(A, B)` by the pair loop.
pub fn distance_profile(f: &FiniteField, a: &PointSet, b: &PointSet) -> Result<DistanceProfile> {
    let pairs = a.len() as u128 * b.len() as u128;
    if pairs > PAIR_LIMIT {
        return Err(Error::SizeLimitExceeded(format!("|A||B| = {pairs} > {PAIR_LIMIT}")));
    }
    let q = f.q() as usize;
    let ac = a.coords(f);
    let bc = b.coords(f);
    let mu = ac
        .par_iter()
        .fold(
            || vec![0u64; q],
            |mut acc, x| {
                for y in &bc {
                    acc[geometry::norm_diff(f, x, y).0 as usize] += 1;
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; q],
            |mut u, v| {
                for (x, y) in u.iter_mut().zip(v) {
                    *x += y;
                }
                u
            },
        );
    let delta: Vec<Fq> = (0..q as u32).filter(|&t| mu[t as usize] > 0).map(Fq).collect();
    let mu_square_sum: u128 = mu.iter().map(|&m| m as u128 * m as u128).sum();
    let cs_lower_bound = if mu_square_sum > 0 {
        (pairs * pairs) as f64 / mu_square_sum as f64
    } else {
        0.0
    };
    Ok(DistanceProfile { mu, delta, mu_square_sum, cs_lower_bound })
}

/// Second-moment bounds report: the exact `sum mu^2` against the direct
/// character-sum bound and, when a covering set is supplied, the
/// transform-side bound.
#[derive(Debug, Clone)]
pub struct MuSquareReport {
    pub exact: u128,
    /// `|A|^2|B|^2/q + (|A|/q) sum_{a, s != 0} |sum_b chi(2sa.b - s||b||)|^2`.
    pub bound_direct: f64,
    /// `|A|^2|B|^2/q + q^{d-1}|A| sum_{b, b', s != 0} hat(Omega)(2s(b'-b))
    /// chi(s(||b'|| - ||b||))`, for `Omega` containing `A`.
    pub bound_omega: Option<f64>,
    pub pass: bool,
}

/// Evaluates both second-moment bounds. `omega`, when given, must contain
/// `A`; the chain `exact <= bound_direct <= bound_omega` is asserted.
pub fn mu_square_bounds(
    f: &FiniteField,
    a: &PointSet,
    b: &PointSet,
    omega: Option<&PointSet>,
) -> Result<MuSquareReport> {
    let d = a.d;
    let exact = distance_profile(f, a, b)?.mu_square_sum;
    let ac = a.coords(f);
    let bc = b.coords(f);
    let norms_b: Vec<Fq> = bc.iter().map(|y| geometry::norm(f, y)).collect();

    let sizes = (a.len() as f64).powi(2) * (b.len() as f64).powi(2) / f.q() as f64;
    // per-row partials collected in order, then summed sequentially so the
    // result is bitwise reproducible
    let partials: Vec<f64> = ac
        .par_iter()
        .map(|x| {
            let mut total = 0.0;
            for s in f.units() {
                let two_s = f.mul(f.int(2), s);
                let mut z = Complex64::ZERO;
                for (y, &ny) in bc.iter().zip(&norms_b) {
                    let arg = f.sub(f.mul(two_s, geometry::dot(f, x, y)), f.mul(s, ny));
                    z += f.add_char(arg);
                }
                total += z.norm_sqr();
            }
            total
        })
        .collect();
    let inner: f64 = partials.iter().sum();
    let bound_direct = sizes + a.len() as f64 / f.q() as f64 * inner;

    let bound_omega = match omega {
        None => None,
        Some(om) => {
            if a.iter().any(|c| !om.contains(c)) {
                return Err(Error::OmegaNotCovering);
            }
            let om_hat = fourier::fourier_hat(f, &ComplexGrid::indicator(f, om)?);
            let mut z = Complex64::ZERO;
            for (y1, &n1) in bc.iter().zip(&norms_b) {
                for (y2, &n2) in bc.iter().zip(&norms_b) {
                    let diff = geometry::sub_points(f, y2, y1);
                    for s in f.units() {
                        let m = geometry::scale_point(f, f.mul(f.int(2), s), &diff);
                        let code = geometry::encode_point(f, &m) as usize;
                        z += om_hat.values[code] * f.add_char(f.mul(s, f.sub(n2, n1)));
                    }
                }
            }
            let qd1 = (f.q() as f64).powi(d as i32 - 1);
            Some(sizes + qd1 * a.len() as f64 * z.re)
        }
    };

    let scale = exact as f64;
    let mut pass = (exact as f64) <= bound_direct + TOL * scale.max(1.0);
    if let Some(bo) = bound_omega {
        pass = pass && bound_direct <= bo + TOL * bo.abs().max(scale).max(1.0);
    }
    Ok(MuSquareReport { exact, bound_direct, bound_omega, pass })
}

/// Sphere-restricted second-moment bound: exact `sum mu^2` against
/// `|A|^2|B|^2/q + q^{d-1}|A||B| + |T|` where `T` is the Kloosterman-type
/// double character sum evaluated directly.
#[derive(Debug, Clone)]
pub struct SphereMomentReport {
    pub exact: u128,
    pub term_main: f64,
    pub term_surface: f64,
    pub third_term_abs: f64,
    pub pass: bool,
}

pub fn sform_bound(
    f: &FiniteField,
    a: &PointSet,
    b: &PointSet,
    j: Fq,
) -> Result<SphereMomentReport> {
    let d = a.d;
    let sphere = Variety::sphere(d, j);
    for c in a.coords(f) {
        if !sphere.contains(f, &c) {
            return Err(Error::SupportViolation);
        }
    }
    let exact = distance_profile(f, a, b)?.mu_square_sum;
    let term_main = (a.len() as f64).powi(2) * (b.len() as f64).powi(2) / f.q() as f64;
    let term_surface = (f.q() as f64).powi(d as i32 - 1) * a.len() as f64 * b.len() as f64;

    // T = q^{-2} eta^d(-1) G_1^d |A| sum_{b,b',s,r != 0} eta^d(r)
    //     chi(jr + s^2 ||b'-b|| / r) chi(s(||b'|| - ||b||))
    let bc = b.coords(f);
    let norms_b: Vec<Fq> = bc.iter().map(|y| geometry::norm(f, y)).collect();
    let row_sums: Vec<Complex64> = bc
        .par_iter()
        .enumerate()
        .map(|(i1, y1)| {
            let mut acc = Complex64::ZERO;
            for (i2, y2) in bc.iter().enumerate() {
                let nd = geometry::norm_diff(f, y2, y1);
                let dn = f.sub(norms_b[i2], norms_b[i1]);
                for s in f.units() {
                    let s2nd = f.mul(f.square(s), nd);
                    for r in f.units() {
                        let arg = f.add(f.mul(j, r), f.div(s2nd, r));
                        let eta_pow = if d % 2 == 0 { 1.0 } else { f.quad_char(r) as f64 };
                        acc += eta_pow * f.add_char(arg) * f.add_char(f.mul(s, dn));
                    }
                }
            }
            acc
        })
        .collect();
    let third: Complex64 = row_sums.iter().sum();
    let g1 = f.gauss_sum();
    let eta_m1 = if d % 2 == 0 { 1.0 } else { f.quad_char(f.neg(Fq::ONE)) as f64 };
    let third_full =
        (f.q() as f64).powi(-2) * eta_m1 * g1.powu(d as u32) * a.len() as f64 * third;
    let third_term_abs = third_full.norm();
    let rhs = term_main + term_surface + third_term_abs;
    Ok(SphereMomentReport {
        exact,
        term_main,
        term_surface,
        third_term_abs,
        pass: exact as f64 <= rhs + TOL * rhs.max(1.0),
    })
}

/// Mattila-type fourth moment
/// `M_A(q) = (q^{3d+1} / |A|^4) sum_{j != 0} (sum_{m in S_j} |hat A(m)|^2)^2`,
/// reported with `min(q, q / M)` and the exact distance count.
#[derive(Debug, Clone)]
pub struct MattilaReport {
    pub m_value: f64,
    /// `min(q, q / M)` — reported, not asserted (implicit constant).
    pub reported_floor: f64,
    pub delta_size: u64,
}

pub fn mattila(f: &FiniteField, a: &PointSet) -> Result<MattilaReport> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let d = a.d;
    let hat = fourier::fourier_hat(f, &ComplexGrid::indicator(f, a)?);
    // bucket |hat A|^2 by the norm of m
    let mut by_radius = vec![0.0f64; f.q() as usize];
    for (code, z) in hat.values.iter().enumerate() {
        let m = geometry::decode_point(f, code as u64, d);
        by_radius[geometry::norm(f, &m).0 as usize] += z.norm_sqr();
    }
    let sum4: f64 = by_radius[1..].iter().map(|w| w * w).sum();
    let m_value = (f.q() as f64).powi(3 * d as i32 + 1) / (a.len() as f64).powi(4) * sum4;
    let reported_floor = if m_value > 0.0 {
        (f.q() as f64).min(f.q() as f64 / m_value)
    } else {
        f.q() as f64
    };
    let profile = distance_profile(f, a, a)?;
    Ok(MattilaReport { m_value, reported_floor, delta_size: profile.delta_size() })
}

/// Which explicit-constant distance theorem applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceCase {
    /// `A` on the paraboloid, `d = 4k - 1`, `q = 3 mod 4`: constant 1/3,
    /// exponent `(d-3)/2`.
    ParaboloidOdd,
    /// `A` on the paraboloid, even `d >= 4`: constant 1/3, exponent `(d-2)/2`.
    ParaboloidEven,
    /// `A` on a sphere of nonzero radius, odd `d`: constant 1/4, exponent
    /// `(d-3)/2`; requires (`j` square, `d = 4k-1`, `q = 3 mod 4`) or
    /// (`j` non-square and either `d = 4k+1` or `d = 4k-1` with `q = 1 mod 4`).
    SphereOdd,
    /// `A` on a sphere of nonzero radius, even `d >= 4`: constant 1/4,
    /// exponent `(d-2)/2`.
    SphereEven,
    /// `A` on the zero sphere, `d = 4k+2`, `q = 3 mod 4`: constant 1/3,
    /// exponent `(d-2)/2`.
    ZeroSphere,
}

/// Verdict of one unconditional proof inequality
/// `|Delta(A,B)| >= (1/c) min(q, |A||B|/q^{d-1}, |A|/q^e)`.
#[derive(Debug, Clone)]
pub struct TheoremVerdict {
    pub case: DistanceCase,
    pub delta_size: u64,
    pub constant_recip: u32,
    /// The right-hand side, as a float, for reporting.
    pub threshold: f64,
    pub pass: bool,
}

fn case_parameters(case: DistanceCase, d: usize) -> (u32, u32) {
    // (reciprocal constant, exponent e in the branch |A| / q^e)
    match case {
        DistanceCase::ParaboloidOdd => (3, (d as u32 - 3) / 2),
        DistanceCase::ParaboloidEven => (3, (d as u32 - 2) / 2),
        DistanceCase::SphereOdd => (4, (d as u32 - 3) / 2),
        DistanceCase::SphereEven => (4, (d as u32 - 2) / 2),
        DistanceCase::ZeroSphere => (3, (d as u32 - 2) / 2),
    }
}

fn check_case_hypotheses(
    f: &FiniteField,
    case: DistanceCase,
    d: usize,
    j: Option<Fq>,
) -> Result<()> {
    let q = f.q();
    let ok = match case {
        DistanceCase::ParaboloidOdd => d % 4 == 3 && q % 4 == 3,
        DistanceCase::ParaboloidEven => d % 2 == 0 && d >= 4,
        DistanceCase::SphereOdd => {
            let j = j.ok_or_else(|| Error::HypothesisViolation("sphere case needs j".into()))?;
            if j.is_zero() {
                false
            } else if f.quad_char(j) == 1 {
                d % 4 == 3 && q % 4 == 3
            } else {
                d % 4 == 1 || (d % 4 == 3 && q % 4 == 1)
            }
        }
        DistanceCase::SphereEven => {
            let j = j.ok_or_else(|| Error::HypothesisViolation("sphere case needs j".into()))?;
            !j.is_zero() && d % 2 == 0 && d >= 4
        }
        DistanceCase::ZeroSphere => d % 4 == 2 && q % 4 == 3,
    };
    if !ok {
        return Err(Error::HypothesisViolation(format!(
            "{case:?} does not apply at d = {d}, q = {q}, j = {j:?}"
        )));
    }
    Ok(())
}

/// Exact-integer check of
/// `c |Delta| >= min(q, |A||B|/q^{d-1}, |A|/q^e)`: at least one of
/// `c|Delta| >= q`, `c|Delta| q^{d-1} >= |A||B|`, `c|Delta| q^e >= |A|`.
fn explicit_verdict(
    f: &FiniteField,
    case: DistanceCase,
    d: usize,
    delta: u64,
    asize: u64,
    bsize: u64,
) -> TheoremVerdict {
    let (c, e) = case_parameters(case, d);
    let q = f.q() as u128;
    let cd = c as u128 * delta as u128;
    let ab = asize as u128 * bsize as u128;
    let pass = cd >= q || cd * q.pow(d as u32 - 1) >= ab || cd * q.pow(e) >= asize as u128;
    let qf = f.q() as f64;
    let threshold = qf
        .min(ab as f64 / qf.powi(d as i32 - 1))
        .min(asize as f64 / qf.powi(e as i32))
        / c as f64;
    TheoremVerdict { case, delta_size: delta, constant_recip: c, threshold, pass }
}

fn verify_on_variety(f: &FiniteField, a: &PointSet, v: &Variety) -> Result<()> {
    for c in a.coords(f) {
        if !v.contains(f, &c) {
            return Err(Error::HypothesisViolation("A is not on the stated variety".into()));
        }
    }
    Ok(())
}

/// Distance lower bound for `A` on the paraboloid against arbitrary `B`.
pub fn theorem_paraboloid_distance(
    f: &FiniteField,
    a: &PointSet,
    b: &PointSet,
) -> Result<TheoremVerdict> {
    let d = a.d;
    let case =
        if d % 2 == 1 { DistanceCase::ParaboloidOdd } else { DistanceCase::ParaboloidEven };
    check_case_hypotheses(f, case, d, None)?;
    verify_on_variety(f, a, &Variety::paraboloid(d))?;
    let profile = distance_profile(f, a, b)?;
    Ok(explicit_verdict(f, case, d, profile.delta_size(), a.len() as u64, b.len() as u64))
}

/// Distance lower bound for `A` on the sphere `S_j`, `j != 0`.
pub fn theorem_sphere_distance(
    f: &FiniteField,
    a: &PointSet,
    b: &PointSet,
    j: Fq,
) -> Result<TheoremVerdict> {
    let d = a.d;
    let case = if d % 2 == 1 { DistanceCase::SphereOdd } else { DistanceCase::SphereEven };
    check_case_hypotheses(f, case, d, Some(j))?;
    verify_on_variety(f, a, &Variety::sphere(d, j))?;
    let profile = distance_profile(f, a, b)?;
    Ok(explicit_verdict(f, case, d, profile.delta_size(), a.len() as u64, b.len() as u64))
}

/// Distance lower bound for `A` on the zero sphere.
pub fn theorem_zero_sphere_distance(
    f: &FiniteField,
    a: &PointSet,
    b: &PointSet,
) -> Result<TheoremVerdict> {
    let d = a.d;
    check_case_hypotheses(f, DistanceCase::ZeroSphere, d, None)?;
    verify_on_variety(f, a, &Variety::sphere(d, Fq::ZERO))?;
    let profile = distance_profile(f, a, b)?;
    Ok(explicit_verdict(
        f,
        DistanceCase::ZeroSphere,
        d,
        profile.delta_size(),
        a.len() as u64,
        b.len() as u64,
    ))
}

/// Which sharpness construction to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SharpKind {
    /// `A` on the paraboloid, `B` a span-plus-shells set.
    Paraboloid,
    /// `A` on the sphere of the given nonzero radius.
    Sphere(Fq),
    /// `A` an isotropic span on the zero sphere.
    ZeroSphere,
}

/// A built sharpness pair with its exact distance set.
#[derive(Debug, Clone)]
pub struct SharpConstruction {
    pub a: PointSet,
    pub b: PointSet,
    /// The radius set `R`; equals `Delta(A, B)` exactly.
    pub radii: Vec<Fq>,
    /// Span dimension `k` (`|A| = q^k`).
    pub span_dim: usize,
    /// Section dimension `c` holding the shells.
    pub section_dim: usize,
    /// `1 - log_q(|R|)`.
    pub epsilon_implied: f64,
}

/// Smallest section dimension `c >= c_min` leaving an isotropic span of
/// dimension `(d - c)/2` available in `F_q^{d-c}`.
fn pick_section_dim(f: &FiniteField, d: usize, c_min: usize) -> Result<usize> {
    for c in c_min..=d {
        let rem = d - c;
        if rem % 2 != 0 {
            continue;
        }
        if rem == 0 || rem % 4 == 0 || f.q() % 4 == 1 {
            return Ok(c);
        }
    }
    Err(Error::ImpossibleCase(format!(
        "no isotropic span of dimension (d-c)/2 exists for d = {d}, q = {}",
        f.q()
    )))
}

/// Builds the sharpness pair: `A = Span (+ shift)` on the variety and
/// `B = Span + shells` over the first `r_size` nonzero radii, so that
/// `Delta(A, B) = R` exactly with `|A| = q^k` and
/// `|B| = q^k sum_r |shell_r|`.
pub fn sharp_construction(
    f: &FiniteField,
    kind: SharpKind,
    d: usize,
    r_size: usize,
) -> Result<SharpConstruction> {
    if r_size == 0 || r_size > f.q() as usize - 1 {
        return Err(Error::BadRange(format!(
            "r_size must be in [1, q-1] = [1, {}], got {r_size}",
            f.q() - 1
        )));
    }
    let q = f.q();
    let (c, shift_tail): (usize, Vec<Fq>) = match kind {
        SharpKind::Paraboloid => {
            // odd case at d = 4k-1 with q = 3 mod 4; even cases split on q
            let c = match (d % 4, q % 4) {
                (3, 3) => 3,
                (0, 1) | (2, _) => 2,
                _ => {
                    return Err(Error::ImpossibleCase(format!(
                        "no paraboloid sharpness case at d = {d}, q = {q}"
                    )))
                }
            };
            (c, vec![Fq::ZERO; c])
        }
        SharpKind::Sphere(j) => {
            if j.is_zero() {
                return Err(Error::ImpossibleCase("use the zero-sphere kind for j = 0".into()));
            }
            let c_min = if d % 2 == 1 { 3 } else { 2 };
            let c = pick_section_dim(f, d, c_min)?;
            // shell center: a point of norm j in the section
            let w = if f.quad_char(j) == 1 {
                // the classical shift (0, ..., 0, sqrt(j))
                let mut w = vec![Fq::ZERO; c];
                w[c - 1] = f.sqrt(j).expect("j is a square");
                w
            } else {
                geometry::first_point_with_norm(f, c, j).ok_or(Error::EmptyShell)?
            };
            (c, w)
        }
        SharpKind::ZeroSphere => {
            if d % 4 != 2 || q % 4 != 3 {
                return Err(Error::ImpossibleCase(format!(
                    "zero-sphere sharpness needs d = 4k+2, q = 3 mod 4, got d = {d}, q = {q}"
                )));
            }
            (2, vec![Fq::ZERO; 2])
        }
    };

    let span_dim = (d - c) / 2;
    let span_basis: Vec<Vec<Fq>> = if span_dim > 0 {
        geometry::mutually_orthogonal(f, d - c)?
            .into_iter()
            .map(|mut v| {
                v.extend(vec![Fq::ZERO; c]);
                v
            })
            .collect()
    } else {
        Vec::new()
    };
    debug_assert_eq!(span_basis.len(), span_dim);

    let mut shift = vec![Fq::ZERO; d - c];
    shift.extend(shift_tail.iter().copied());
    let a = AffineSubspace { base: shift.clone(), basis: span_basis.clone() }.enumerate(f);

    let variety = sharp_variety(kind, d);
    for p in a.coords(f) {
        debug_assert!(variety.contains(f, &p), "construction left the variety");
    }

    // first r_size nonzero radii with nonempty shells around the center
    let center = &shift[d - c..];
    let mut radii: Vec<Fq> = Vec::with_capacity(r_size);
    let mut shells: Vec<Vec<Vec<Fq>>> = Vec::with_capacity(r_size);
    for t in 1..q {
        if radii.len() == r_size {
            break;
        }
        let r = Fq(t);
        let shell: Vec<Vec<Fq>> = Variety::sphere(c, r)
            .enumerate(f)?
            .coords(f)
            .into_iter()
            .map(|p| geometry::add_points(f, &p, center))
            .collect();
        if shell.is_empty() {
            continue; // degenerate section, take the next radius
        }
        radii.push(r);
        shells.push(shell);
    }
    if radii.len() < r_size {
        return Err(Error::EmptyShell);
    }

    let span_pts = AffineSubspace { base: vec![Fq::ZERO; d], basis: span_basis }.enumerate(f);
    let mut b_points: Vec<Vec<Fq>> = Vec::new();
    for s in span_pts.coords(f) {
        for shell in &shells {
            for tail in shell {
                let mut p = s[..d - c].to_vec();
                p.extend(tail.iter().copied());
                b_points.push(p);
            }
        }
    }
    let b = PointSet::from_points(f, d, &b_points);

    Ok(SharpConstruction {
        a,
        b,
        radii,
        span_dim,
        section_dim: c,
        epsilon_implied: 1.0 - (r_size as f64).ln() / (q as f64).ln(),
    })
}

/// Checks `Delta(A, B) = R` exactly and the cardinality formulas; returns
/// the profile for reporting.
pub fn verify_sharp_construction(
    f: &FiniteField,
    built: &SharpConstruction,
) -> Result<DistanceProfile> {
    let profile = distance_profile(f, &built.a, &built.b)?;
    if profile.delta != built.radii {
        return Err(Error::HypothesisViolation(format!(
            "Delta(A,B) = {:?} differs from R = {:?}",
            profile.delta, built.radii
        )));
    }
    let qk = (f.q() as u64).pow(built.span_dim as u32);
    if built.a.len() as u64 != qk {
        return Err(Error::HypothesisViolation(format!(
            "|A| = {} but q^k = {qk}",
            built.a.len()
        )));
    }
    let shell_total: u64 = built
        .radii
        .iter()
        .map(|&r| Variety::sphere(built.section_dim, r).enumerate(f).map(|s| s.len() as u64))
        .collect::<Result<Vec<u64>>>()?
        .iter()
        .sum();
    if built.b.len() as u64 != qk * shell_total {
        return Err(Error::HypothesisViolation(format!(
            "|B| = {} but q^k * shells = {}",
            built.b.len(),
            qk * shell_total
        )));
    }
    Ok(profile)
}

/// The variety a sharpness kind lives on.
pub fn sharp_variety(kind: SharpKind, d: usize) -> Variety {
    match kind {
        SharpKind::Paraboloid => Variety::paraboloid(d),
        SharpKind::Sphere(j) => Variety::sphere(d, j),
        SharpKind::ZeroSphere => Variety::sphere(d, Fq::ZERO),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::close;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn field(p: u64) -> FiniteField {
        FiniteField::new(p, 1).unwrap()
    }

    fn random_set(f: &FiniteField, d: usize, size: usize, rng: &mut ChaCha8Rng) -> PointSet {
        let n = geometry::space_size(f, d).unwrap();
        let mut all: Vec<u64> = (0..n).collect();
        all.shuffle(rng);
        all.truncate(size.max(1));
        PointSet::from_codes(d, all)
    }

    fn random_subset_of(pts: &PointSet, size: usize, rng: &mut ChaCha8Rng) -> PointSet {
        let mut codes = pts.codes().to_vec();
        codes.shuffle(rng);
        codes.truncate(size.max(1));
        PointSet::from_codes(pts.d, codes)
    }

    #[test]
    fn profile_basics() {
        let f = field(5);
        let full = PointSet::full_space(&f, 2).unwrap();
        let p = distance_profile(&f, &full, &full).unwrap();
        assert_eq!(p.delta.len(), 5);
        assert_eq!(p.mu.iter().sum::<u64>(), 625);
        let one = PointSet::from_codes(2, vec![7]);
        let p = distance_profile(&f, &one, &one).unwrap();
        assert_eq!(p.delta, vec![Fq(0)]);
        assert_eq!(p.mu[0], 1);
    }

    #[test]
    fn profile_invariances() {
        let f = field(7);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let a = random_set(&f, 2, rng.random_range(1..20), &mut rng);
            let b = random_set(&f, 2, rng.random_range(1..20), &mut rng);
            let pab = distance_profile(&f, &a, &b).unwrap();
            let pba = distance_profile(&f, &b, &a).unwrap();
            assert_eq!(pab.delta, pba.delta);
            assert_eq!(pab.mu, pba.mu);
            let v = vec![Fq(3), Fq(5)];
            let pt = distance_profile(&f, &a.translate(&f, &v), &b.translate(&f, &v)).unwrap();
            assert_eq!(pt.mu, pab.mu);
            let sig = |s: &PointSet| {
                let pts: Vec<Vec<Fq>> = s
                    .coords(&f)
                    .into_iter()
                    .map(|c| vec![f.neg(c[1]), c[0]])
                    .collect();
                PointSet::from_points(&f, 2, &pts)
            };
            let ps = distance_profile(&f, &sig(&a), &sig(&b)).unwrap();
            assert_eq!(ps.mu, pab.mu);
            assert!(pab.delta_size() as f64 >= pab.cs_lower_bound - 1e-9);
            assert_eq!(pab.mu.iter().sum::<u64>(), (a.len() * b.len()) as u64);
        }
    }

    #[test]
    fn mu_square_bounds_chain() {
        let f = field(5);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let a = random_set(&f, 2, rng.random_range(1..12), &mut rng);
            let b = random_set(&f, 2, rng.random_range(1..12), &mut rng);
            let rep = mu_square_bounds(&f, &a, &b, Some(&a)).unwrap();
            assert!(rep.pass, "bound chain failed: {rep:?}");
        }
        // singleton B with all distances distinct: sum mu^2 = |A| exactly
        // (points (0,0),(1,0),(2,0),(1,1),(2,2) have norms 0,1,4,2,3)
        let a = PointSet::from_codes(2, vec![0, 1, 2, 6, 12]);
        let b = PointSet::from_codes(2, vec![0]);
        let rep = mu_square_bounds(&f, &a, &b, None).unwrap();
        assert_eq!(rep.exact, a.len() as u128);
        assert!(rep.pass);
        // omega not covering
        let omega = PointSet::from_codes(2, vec![0]);
        let big = PointSet::from_codes(2, vec![1, 2]);
        assert!(matches!(
            mu_square_bounds(&f, &big, &b, Some(&omega)),
            Err(Error::OmegaNotCovering)
        ));
    }

    #[test]
    fn omega_bound_specializes_on_spheres() {
        let f = field(5);
        let j = Fq(2);
        let sphere = Variety::sphere(3, j).enumerate(&f).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..5 {
            let a = random_subset_of(&sphere, rng.random_range(1..=sphere.len()), &mut rng);
            let b = random_set(&f, 3, rng.random_range(1..30), &mut rng);
            let rep = mu_square_bounds(&f, &a, &b, Some(&sphere)).unwrap();
            assert!(rep.pass);
            let srep = sform_bound(&f, &a, &b, j).unwrap();
            assert!(srep.pass, "sphere moment bound failed: {srep:?}");
        }
    }

    #[test]
    fn sform_bound_edges() {
        let f = field(5);
        let j = Fq(2);
        let sphere = Variety::sphere(3, j).enumerate(&f).unwrap();
        let a = PointSet::from_codes(3, sphere.codes().to_vec());
        let rep = sform_bound(&f, &a, &PointSet::empty(3), j).unwrap();
        assert_eq!(rep.exact, 0);
        assert!(rep.pass);
        let full = PointSet::full_space(&f, 3).unwrap();
        let rep = sform_bound(&f, &a, &full, j).unwrap();
        assert!(rep.pass);
        let off = PointSet::from_codes(3, vec![0]);
        assert!(matches!(sform_bound(&f, &off, &full, j), Err(Error::SupportViolation)));
    }

    #[test]
    fn mattila_cases() {
        let f = field(5);
        // full space: transform supported at 0, M = 0
        let full = PointSet::full_space(&f, 2).unwrap();
        let rep = mattila(&f, &full).unwrap();
        assert!(rep.m_value.abs() <= 1e-9);
        assert_eq!(rep.delta_size, 5);
        // singleton: sum_{m in S_j} |hat A|^2 = |S_j| q^{-2d}
        let one = PointSet::from_codes(2, vec![0]);
        let rep = mattila(&f, &one).unwrap();
        let expect: f64 = f
            .units()
            .map(|j| {
                let s = Variety::sphere(2, j).enumerate(&f).unwrap().len() as f64;
                (s * 5f64.powi(-4)).powi(2)
            })
            .sum::<f64>()
            * 5f64.powi(7);
        assert!(close(rep.m_value, expect, expect));
        assert!(mattila(&f, &PointSet::empty(2)).is_err());
    }

    #[test]
    fn paraboloid_theorem_exhaustive_small() {
        // every nonempty subset of P at (q, d) = (3, 3), random B each
        let f = field(3);
        let pts = Variety::paraboloid(3).enumerate(&f).unwrap();
        let codes = pts.codes().to_vec();
        let mut rng = ChaCha8Rng::seed_from_u64(123);
        let n = geometry::space_size(&f, 3).unwrap() as usize;
        for mask in 1u32..(1 << codes.len()) {
            let chosen: Vec<u64> = codes
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &c)| c)
                .collect();
            let a = PointSet::from_codes(3, chosen);
            let b = random_set(&f, 3, rng.random_range(1..=n), &mut rng);
            let verdict = theorem_paraboloid_distance(&f, &a, &b).unwrap();
            assert!(verdict.pass, "mask {mask}: {verdict:?}");
        }
    }

    #[test]
    fn distance_theorem_hypothesis_checks() {
        let f5 = field(5);
        let a = PointSet::from_codes(3, vec![0]);
        let b = PointSet::from_codes(3, vec![0]);
        assert!(theorem_paraboloid_distance(&f5, &a, &b).is_err()); // q = 1 mod 4
        assert!(theorem_sphere_distance(&f5, &a, &b, Fq(1)).is_err()); // j square needs q = 3 mod 4
        assert!(theorem_zero_sphere_distance(&f5, &a, &b).is_err()); // d odd
        let f7 = field(7);
        let off = PointSet::from_codes(3, vec![1]); // (1,0,0) not on P
        let b7 = PointSet::from_codes(3, vec![0]);
        assert!(theorem_paraboloid_distance(&f7, &off, &b7).is_err());
    }

    #[test]
    fn sphere_theorems_on_random_sets() {
        let f = field(7);
        // odd case, j square: d = 3, q = 7 = 3 mod 4
        let j = Fq(1);
        let sphere = Variety::sphere(3, j).enumerate(&f).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let n = geometry::space_size(&f, 3).unwrap() as usize;
        for _ in 0..200 {
            let a = random_subset_of(&sphere, rng.random_range(1..=sphere.len()), &mut rng);
            let b = random_set(&f, 3, rng.random_range(1..=n), &mut rng);
            let verdict = theorem_sphere_distance(&f, &a, &b, j).unwrap();
            assert!(verdict.pass, "{verdict:?}");
        }
        // even case at (5, 4)
        let f5 = field(5);
        let sphere = Variety::sphere(4, Fq(1)).enumerate(&f5).unwrap();
        let n = geometry::space_size(&f5, 4).unwrap() as usize;
        for _ in 0..100 {
            let a = random_subset_of(&sphere, rng.random_range(1..=sphere.len()), &mut rng);
            let b = random_set(&f5, 4, rng.random_range(1..=n), &mut rng);
            let verdict = theorem_sphere_distance(&f5, &a, &b, Fq(1)).unwrap();
            assert!(verdict.pass, "{verdict:?}");
        }
    }

    #[test]
    fn zero_sphere_theorem_on_random_sets() {
        let f = field(3);
        let sphere = Variety::sphere(6, Fq(0)).enumerate(&f).unwrap();
        let n = geometry::space_size(&f, 6).unwrap() as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let a = random_subset_of(&sphere, rng.random_range(1..=sphere.len()), &mut rng);
            let b = random_set(&f, 6, rng.random_range(1..=n), &mut rng);
            let verdict = theorem_zero_sphere_distance(&f, &a, &b).unwrap();
            assert!(verdict.pass, "{verdict:?}");
        }
    }

    #[test]
    fn sharp_constructions_all_kinds() {
        let f7 = field(7);
        // paraboloid, d = 3, q = 7, r_size = 3: |A| = 1
        let built = sharp_construction(&f7, SharpKind::Paraboloid, 3, 3).unwrap();
        let profile = verify_sharp_construction(&f7, &built).unwrap();
        assert_eq!(profile.delta_size(), 3);
        assert_eq!(built.a.len(), 1);

        // sphere, d = 3, q = 7, j = 1 square, r_size = 2: shift (0,0,1)
        let built = sharp_construction(&f7, SharpKind::Sphere(Fq(1)), 3, 2).unwrap();
        verify_sharp_construction(&f7, &built).unwrap();
        assert_eq!(built.a.len(), 1);
        assert_eq!(built.a.coords(&f7)[0], vec![Fq(0), Fq(0), Fq(1)]);

        // zero sphere, d = 6, q = 3, r_size = 2: |A| = q^2 = 9
        let f3 = field(3);
        let built = sharp_construction(&f3, SharpKind::ZeroSphere, 6, 2).unwrap();
        verify_sharp_construction(&f3, &built).unwrap();
        assert_eq!(built.a.len(), 9);

        // even sphere, d = 4, q = 5, j = 1, r_size = 3: |A| = q^{(d-2)/2}
        let f5 = field(5);
        let built = sharp_construction(&f5, SharpKind::Sphere(Fq(1)), 4, 3).unwrap();
        verify_sharp_construction(&f5, &built).unwrap();
        assert_eq!(built.a.len(), 5);

        // paraboloid at d = 7, q = 3 with a 2-dim span
        let built = sharp_construction(&f3, SharpKind::Paraboloid, 7, 2).unwrap();
        verify_sharp_construction(&f3, &built).unwrap();
        assert_eq!(built.a.len(), 9);
        let verdict = theorem_paraboloid_distance(&f3, &built.a, &built.b).unwrap();
        assert!(verdict.pass);

        // impossible paraboloid case: d = 4k, q = 3 mod 4
        assert!(matches!(
            sharp_construction(&f3, SharpKind::Paraboloid, 4, 1),
            Err(Error::ImpossibleCase(_))
        ));
        // r_size out of range at q = 3
        assert!(matches!(
            sharp_construction(&f3, SharpKind::Paraboloid, 3, 3),
            Err(Error::BadRange(_))
        ));
    }

    #[test]
    fn sphere_sharpness_nonsquare_radius_needs_wider_section() {
        // d = 5 = 4k+1, q = 7 = 3 mod 4, j non-square: a 3-dim section
        // leaves d - c = 2 mod 4, impossible at q = 3 mod 4, so the builder
        // widens to c = 5
        let f = field(7);
        let g = f.primitive();
        let built = sharp_construction(&f, SharpKind::Sphere(g), 5, 2).unwrap();
        assert_eq!(built.section_dim, 5);
        verify_sharp_construction(&f, &built).unwrap();
    }
}
