//! Empirical probes of extension/restriction estimates.
//!
//! `R*_V(p -> r)` is a supremum over all functions on `V` and cannot be
//! computed exactly; sweeps over test-function families report maxima as
//! lower bounds and assert only configured-constant ceilings. Exponent
//! arithmetic stays in exact rationals; only norms are floating point.

use crate::error::{Error, Result};
use crate::field::{FiniteField, Fq};
use crate::fourier::{self, ComplexGrid, MeasureKind};
pub use crate::fourier::LpExponent;
use crate::geometry::{self, PointSet, Variety, VarietyKind};
use crate::numeric::TOL;
use num_complex::Complex64;
use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Critical exponent `r_2 = 2(d^2 - d k - d + k) / ((d-1)(d-1-k))` for a
/// variety of size `~ q^{d-1}` containing a `k`-dimensional subspace.
pub fn critical_r2(d: u32, k_star: u32) -> Result<Ratio<i64>> {
    if d < 2 || k_star > d - 2 {
        return Err(Error::BadRange(format!("need 0 <= k* <= d-2, got d = {d}, k* = {k_star}")));
    }
    let (d, k) = (d as i64, k_star as i64);
    Ok(Ratio::new(2 * (d * d - d * k - d + k), (d - 1) * (d - 1 - k)))
}

/// Maximal-subspace dimension on the paraboloid per the exponent
/// classification: `(d-2)/2` for even `d`, `(d-1)/2` for odd `d` when `-1`
/// is a square or `d = 4k+1`, else `(d-3)/2`.
pub fn paraboloid_k_star(d: u32, minus_one_is_square: bool) -> u32 {
    if d % 2 == 0 {
        (d - 2) / 2
    } else if d % 4 == 3 && !minus_one_is_square {
        (d - 3) / 2
    } else {
        (d - 1) / 2
    }
}

/// Membership in the necessary-condition region for `R*_V(p -> r) << 1`,
/// in reciprocal coordinates: `1/r <= (d-1)/(2d)` and
/// `1/r <= (1 - 1/p)(d-1-k)/(d-k)`. Exact rational arithmetic.
pub fn necessary_region(d: u32, k: u32, p: LpExponent, r: LpExponent) -> bool {
    let (d, k) = (d as i64, k as i64);
    let u = match p {
        LpExponent::Infinity => Ratio::from_integer(0),
        LpExponent::Finite(p) => p.recip(),
    };
    let v = match r {
        LpExponent::Infinity => Ratio::from_integer(0),
        LpExponent::Finite(r) => r.recip(),
    };
    let st = Ratio::new(d - 1, 2 * d);
    let slope = (Ratio::from_integer(1) - u) * Ratio::new(d - 1 - k, d - k);
    v <= st && v <= slope
}

/// The four corner points `(1/p, 1/r)` of the necessary-condition region.
pub fn necessary_region_corners(d: u32, k: u32) -> [(Ratio<i64>, Ratio<i64>); 4] {
    let (di, ki) = (d as i64, k as i64);
    let zero = Ratio::from_integer(0);
    let one = Ratio::from_integer(1);
    let st = Ratio::new(di - 1, 2 * di);
    let corner_u = Ratio::new(di * di - di * ki - di - ki, 2 * di * (di - 1 - ki));
    [(zero, zero), (zero, st), (corner_u, st), (one, zero)]
}

/// Test-function families for the ratio sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Indicators of random subsets of the variety.
    RandomSubsets,
    /// Indicators of the constructed subspaces/spans on the variety.
    ConstructedSubspaces,
    /// Random complex-valued functions on the variety.
    RandomComplex,
    /// Indicators of single points.
    SinglePoints,
    /// The constant function 1 on the variety.
    FullVariety,
}

/// Result of one sweep: the maximal observed ratio
/// `||(f dsigma)^vee||_{L^r(dc)} / ||f||_{L^p(V, dsigma)}`.
#[derive(Debug, Clone)]
pub struct RatioReport {
    pub p: LpExponent,
    pub r: LpExponent,
    pub family: Family,
    pub max_ratio: f64,
    /// Member index attaining the max (lowest index on ties).
    pub argmax: usize,
    pub members: usize,
}

fn surface_norm_indicator(vsize: usize, asize: usize, p: LpExponent) -> f64 {
    // || 1_A ||_{L^p(V, dsigma)} = (|A| / |V|)^{1/p}
    match p {
        LpExponent::Infinity => 1.0,
        LpExponent::Finite(_) => (asize as f64 / vsize as f64).powf(1.0 / p.as_f64()),
    }
}

/// Extension ratio of an indicator function, routed through the energy
/// identity when `r = 4`: `||(A dsigma)^vee||_4 = (q^d E(A))^{1/4} / |V|`.
pub fn indicator_ratio_via_energy(
    f: &FiniteField,
    a: &PointSet,
    v: &Variety,
    p: LpExponent,
) -> Result<f64> {
    let vsize = v.enumerate(f)?.len();
    let e = crate::energy::additive_energy(f, a)? as f64;
    let l4 = ((f.q() as f64).powi(a.d as i32) * e).powf(0.25) / vsize as f64;
    Ok(l4 / surface_norm_indicator(vsize, a.len(), p))
}

/// Extension ratio computed through the transform.
pub fn extension_ratio(
    f: &FiniteField,
    grid: &ComplexGrid,
    v: &Variety,
    p: LpExponent,
    r: LpExponent,
) -> Result<f64> {
    let ext = fourier::extension_inverse(f, grid, v)?;
    let num = fourier::lr_norm(f, &ext, r, &MeasureKind::CountingDC)?;
    let den = fourier::lr_norm(f, grid, p, &MeasureKind::SurfaceSigma(*v))?;
    if den == 0.0 {
        return Err(Error::EmptySet);
    }
    Ok(num / den)
}

/// Restriction-side ratio `||tilde g||_{L^{p'}(V, dsigma)} / ||g||_{L^{r'}(dc)}`.
pub fn dual_restriction_ratio(
    f: &FiniteField,
    g: &ComplexGrid,
    v: &Variety,
    p_prime: LpExponent,
    r_prime: LpExponent,
) -> Result<f64> {
    let tilde = fourier::fourier_tilde(f, g);
    let num = fourier::lr_norm(f, &tilde, p_prime, &MeasureKind::SurfaceSigma(*v))?;
    let den = fourier::lr_norm(f, g, r_prime, &MeasureKind::CountingDC)?;
    if den == 0.0 {
        return Err(Error::EmptySet);
    }
    Ok(num / den)
}

/// The extension-side Hölder witness of `g`: the function on `V` pairing
/// optimally with `tilde g` in `L^{p'}(V, dsigma)`, so that
/// `dual_restriction_ratio(g) <= extension_ratio(witness)`.
pub fn dual_witness_on_variety(
    f: &FiniteField,
    g: &ComplexGrid,
    v: &Variety,
    p: LpExponent,
) -> Result<ComplexGrid> {
    let tilde = fourier::fourier_tilde(f, g);
    let pts = v.enumerate(f)?;
    let mut w = ComplexGrid::zeros(f, g.d)?;
    let pf = p.as_f64();
    for code in pts.iter() {
        let z = tilde.values[code as usize];
        let m = z.norm();
        if m <= 1e-300 {
            continue;
        }
        // |tilde g|^{p'-1} with the conjugate phase; for p = oo use the
        // plain conjugate phase (an L^1 witness)
        let mag = if pf.is_infinite() { 1.0 } else { m.powf(1.0 / (pf - 1.0)) };
        w.values[code as usize] = mag * z.conj() / m;
    }
    Ok(w)
}

/// Subspace-style members for a sweep: the classified subspace on spheres,
/// the isotropic span (extended by zeros) on paraboloids.
pub fn constructed_subspace_sets(f: &FiniteField, v: &Variety) -> Vec<PointSet> {
    let d = v.d;
    let mut out = Vec::new();
    match v.kind {
        VarietyKind::Sphere(j) if !j.is_zero() => {
            if let Ok(h) = geometry::subspace_on_sphere(f, d, j) {
                out.push(h.enumerate(f));
            }
        }
        VarietyKind::Sphere(_) | VarietyKind::Paraboloid => {
            // largest isotropic span in the base coordinates
            let base_dim = if v.kind == VarietyKind::Paraboloid { d - 1 } else { d };
            let mut span_dim = base_dim - base_dim % 2;
            while span_dim >= 2 {
                if span_dim % 4 == 0 || f.q() % 4 == 1 {
                    break;
                }
                span_dim -= 2;
            }
            if span_dim >= 2 {
                if let Ok(vs) = geometry::mutually_orthogonal(f, span_dim) {
                    let basis: Vec<Vec<Fq>> = vs
                        .into_iter()
                        .map(|mut b| {
                            b.extend(vec![Fq::ZERO; d - span_dim]);
                            b
                        })
                        .collect();
                    let span = geometry::AffineSubspace { base: vec![Fq::ZERO; d], basis };
                    out.push(span.enumerate(f));
                }
            }
        }
    }
    out
}

/// Sweeps one family and reports the maximal ratio. For `r = 4` and
/// indicator members the ratio goes through the energy identity; the
/// transform route is asserted to agree within tolerance.
pub fn ratio_sweep(
    f: &FiniteField,
    v: &Variety,
    p: LpExponent,
    r: LpExponent,
    family: Family,
    trials: usize,
    seed: u64,
) -> Result<RatioReport> {
    p.validate()?;
    r.validate()?;
    let pts = v.enumerate(f)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let four = LpExponent::from_int(4);

    let mut best = (0.0f64, 0usize);
    let members: usize;
    let mut consider = |ratio: f64, idx: usize| {
        if ratio > best.0 {
            best = (ratio, idx);
        }
    };

    let mut indicator_member = |a: &PointSet, idx: usize| -> Result<f64> {
        let ratio = if r == four {
            let via_energy = indicator_ratio_via_energy(f, a, v, p)?;
            let grid = ComplexGrid::indicator(f, a)?;
            let via_transform = extension_ratio(f, &grid, v, p, r)?;
            if (via_energy - via_transform).abs()
                > TOL * via_energy.abs().max(via_transform.abs()).max(1.0)
            {
                return Err(Error::HypothesisViolation(format!(
                    "energy route {via_energy} disagrees with transform route {via_transform}"
                )));
            }
            via_energy
        } else {
            let grid = ComplexGrid::indicator(f, a)?;
            extension_ratio(f, &grid, v, p, r)?
        };
        consider(ratio, idx);
        Ok(ratio)
    };

    match family {
        Family::FullVariety => {
            members = 1;
            indicator_member(&pts, 0)?;
        }
        Family::SinglePoints => {
            let codes = pts.codes();
            let take = trials.clamp(1, codes.len());
            members = take;
            for (idx, &code) in codes.iter().take(take).enumerate() {
                let a = PointSet::from_codes(v.d, vec![code]);
                indicator_member(&a, idx)?;
            }
        }
        Family::ConstructedSubspaces => {
            let sets = constructed_subspace_sets(f, v);
            members = sets.len();
            for (idx, a) in sets.iter().enumerate() {
                // spans on the zero sphere / paraboloid are genuine members;
                // skip sets that stray off the variety (sphere subspace with
                // mismatched class returns dim 0 sets that still lie on it)
                indicator_member(a, idx)?;
            }
        }
        Family::RandomSubsets => {
            members = trials;
            for idx in 0..trials {
                let size = rng.random_range(1..=pts.len());
                let mut codes = pts.codes().to_vec();
                codes.shuffle(&mut rng);
                codes.truncate(size);
                let a = PointSet::from_codes(v.d, codes);
                indicator_member(&a, idx)?;
            }
        }
        Family::RandomComplex => {
            members = trials;
            for idx in 0..trials {
                let mut grid = ComplexGrid::zeros(f, v.d)?;
                for code in pts.iter() {
                    grid.values[code as usize] = Complex64::new(
                        rng.random::<f64>() * 2.0 - 1.0,
                        rng.random::<f64>() * 2.0 - 1.0,
                    );
                }
                let ratio = extension_ratio(f, &grid, v, p, r)?;
                consider(ratio, idx);
            }
        }
    }

    Ok(RatioReport { p, r, family, max_ratio: best.0, argmax: best.1, members })
}

/// Stein–Tomas pair `(2, (2d+2)/(d-1))`.
pub fn stein_tomas_pair(d: u32) -> (LpExponent, LpExponent) {
    (LpExponent::from_int(2), LpExponent::from_ratio(2 * d as i64 + 2, d as i64 - 1))
}

/// The `L^2` pair `(2, (2d+4)/d)` targeted by the paraboloid estimate in
/// dimensions `d = 4k+3`, `q = 3 mod 4`.
pub fn l2_probe_pair(d: u32) -> (LpExponent, LpExponent) {
    (LpExponent::from_int(2), LpExponent::from_ratio(2 * d as i64 + 4, d as i64))
}

/// The `L^4` pair `((4d-4)/(3d-5), 4)` (the interpolated endpoint).
pub fn l4_interpolation_pair(d: u32) -> (LpExponent, LpExponent) {
    (LpExponent::from_ratio(4 * d as i64 - 4, 3 * d as i64 - 5), LpExponent::from_int(4))
}

/// The sphere `L^4` pair `(4d/(3d-2), 4)`.
pub fn sphere_l4_pair(d: u32) -> (LpExponent, LpExponent) {
    (LpExponent::from_ratio(4 * d as i64, 3 * d as i64 - 2), LpExponent::from_int(4))
}
