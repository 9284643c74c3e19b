//! Discrete Fourier analysis on `F_q^d`.
//!
//! Conventions, with `chi` the fixed additive character:
//!
//! * `hat(f)(m)   = q^{-d} sum_x chi(-x.m) f(x)`   (normalized transform)
//! * `tilde(f)(x) = sum_m chi(-m.x) f(m)`          (no normalizing factor)
//! * `vee(f)(m)   = q^{-d} sum_x chi(x.m) f(x)`    (inverse transform)
//! * `(f dsigma)^vee(m) = |V|^{-1} sum_{x in V} chi(m.x) f(x)`
//!
//! Transforms are axis-separable: `d` passes of cost `q^{d+1}` each. No
//! fast sub-`q` factorization is attempted; `q` stays tiny at desk scale.

use crate::error::{Error, Result};
use crate::field::{FiniteField, Fq};
use crate::geometry::{self, PointSet, Variety, VarietyKind};
use crate::numeric::TOL;
use num_complex::Complex64;
use num_rational::Ratio;
use rayon::prelude::*;

/// An exponent in `[1, oo]`, kept exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpExponent {
    Finite(Ratio<i64>),
    Infinity,
}

impl LpExponent {
    pub fn from_int(r: i64) -> LpExponent {
        LpExponent::Finite(Ratio::from_integer(r))
    }

    pub fn from_ratio(num: i64, den: i64) -> LpExponent {
        LpExponent::Finite(Ratio::new(num, den))
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            LpExponent::Finite(r) => *r.numer() as f64 / *r.denom() as f64,
            LpExponent::Infinity => f64::INFINITY,
        }
    }

    /// Hölder conjugate `p'` with `1/p + 1/p' = 1`.
    pub fn conjugate(&self) -> LpExponent {
        match self {
            LpExponent::Infinity => LpExponent::from_int(1),
            LpExponent::Finite(r) if *r == Ratio::from_integer(1) => LpExponent::Infinity,
            LpExponent::Finite(r) => LpExponent::Finite(*r / (*r - Ratio::from_integer(1))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            LpExponent::Finite(r) if *r < Ratio::from_integer(1) => {
                Err(Error::BadExponent(format!("need r >= 1, got {r}")))
            }
            _ => Ok(()),
        }
    }
}

/// Which measure an `L^r` norm is taken against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureKind {
    /// Counting measure `dc` on `F_q^d`.
    CountingDC,
    /// Normalized counting measure `dn` (mass `q^{-d}` per point).
    NormalizedDN,
    /// Normalized surface measure on a variety (mass `1/|V|` per point of `V`).
    SurfaceSigma(Variety),
}

/// A function `F_q^d -> C` stored densely by point encoding.
#[derive(Debug, Clone)]
pub struct ComplexGrid {
    pub d: usize,
    pub values: Vec<Complex64>,
}

impl ComplexGrid {
    pub fn zeros(f: &FiniteField, d: usize) -> Result<ComplexGrid> {
        let n = geometry::space_size(f, d)? as usize;
        Ok(ComplexGrid { d, values: vec![Complex64::ZERO; n] })
    }

    pub fn constant(f: &FiniteField, d: usize, c: Complex64) -> Result<ComplexGrid> {
        let n = geometry::space_size(f, d)? as usize;
        Ok(ComplexGrid { d, values: vec![c; n] })
    }

    pub fn indicator(f: &FiniteField, set: &PointSet) -> Result<ComplexGrid> {
        let mut g = ComplexGrid::zeros(f, set.d)?;
        for code in set.iter() {
            g.values[code as usize] = Complex64::ONE;
        }
        Ok(g)
    }

    pub fn delta(f: &FiniteField, d: usize, point: u64) -> Result<ComplexGrid> {
        let mut g = ComplexGrid::zeros(f, d)?;
        g.values[point as usize] = Complex64::ONE;
        Ok(g)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Support restricted to a variety? Used by the extension transform.
    pub fn supported_on(&self, f: &FiniteField, v: &Variety) -> bool {
        self.values.iter().enumerate().all(|(code, &z)| {
            z == Complex64::ZERO || v.contains(f, &geometry::decode_point(f, code as u64, self.d))
        })
    }
}

/// Character kernel `K[a][b] = chi(sign * a * b)` as a dense `q x q` table.
fn kernel(f: &FiniteField, negate: bool) -> Vec<Complex64> {
    let q = f.q() as usize;
    let mut k = vec![Complex64::ZERO; q * q];
    for a in 0..q {
        for b in 0..q {
            let prod = f.mul(Fq(a as u32), Fq(b as u32));
            let arg = if negate { f.neg(prod) } else { prod };
            k[a * q + b] = f.add_char(arg);
        }
    }
    k
}

/// One separable pass along `axis`: `out[.., m, ..] = sum_t K[t][m] in[.., t, ..]`.
fn axis_pass(f: &FiniteField, grid: &mut ComplexGrid, axis: usize, ker: &[Complex64]) {
    let q = f.q() as usize;
    let n = grid.values.len();
    let stride = q.pow(axis as u32);
    let block = stride * q;
    let src = std::mem::take(&mut grid.values);
    let mut dst = vec![Complex64::ZERO; n];
    dst.par_chunks_mut(block)
        .zip(src.par_chunks(block))
        .for_each(|(out_blk, in_blk)| {
            for lo in 0..stride {
                for (m, out) in (0..q).map(|m| (m, lo + m * stride)) {
                    let mut acc = Complex64::ZERO;
                    for t in 0..q {
                        acc += ker[t * q + m] * in_blk[lo + t * stride];
                    }
                    out_blk[out] = acc;
                }
            }
        });
    grid.values = dst;
}

fn full_transform(f: &FiniteField, g: &ComplexGrid, negate: bool) -> ComplexGrid {
    let mut out = g.clone();
    let ker = kernel(f, negate);
    for axis in 0..g.d {
        axis_pass(f, &mut out, axis, &ker);
    }
    out
}

/// Normalized transform `hat(f)(m) = q^{-d} sum_x chi(-x.m) f(x)`.
pub fn fourier_hat(f: &FiniteField, g: &ComplexGrid) -> ComplexGrid {
    let mut out = full_transform(f, g, true);
    let scale = (f.q() as f64).powi(-(g.d as i32));
    out.values.iter_mut().for_each(|z| *z *= scale);
    out
}

/// Unnormalized transform `tilde(f)(x) = sum_m chi(-m.x) f(m)`.
pub fn fourier_tilde(f: &FiniteField, g: &ComplexGrid) -> ComplexGrid {
    full_transform(f, g, true)
}

/// Inverse transform `vee(f)(m) = q^{-d} sum_x chi(x.m) f(x)`.
pub fn fourier_vee(f: &FiniteField, g: &ComplexGrid) -> ComplexGrid {
    let mut out = full_transform(f, g, false);
    let scale = (f.q() as f64).powi(-(g.d as i32));
    out.values.iter_mut().for_each(|z| *z *= scale);
    out
}

/// Synthesis `f(x) = sum_m chi(m.x) g(m)`; inverse of [`fourier_hat`].
pub fn fourier_synth(f: &FiniteField, g: &ComplexGrid) -> ComplexGrid {
    full_transform(f, g, false)
}

/// `(f dsigma)^vee(m) = |V|^{-1} sum_{x in V} chi(m.x) f(x)` for `f`
/// supported on the variety.
pub fn extension_inverse(f: &FiniteField, g: &ComplexGrid, v: &Variety) -> Result<ComplexGrid> {
    if g.d != v.d || !g.supported_on(f, v) {
        return Err(Error::SupportViolation);
    }
    let vsize = v.enumerate(f)?.len() as f64;
    let mut out = full_transform(f, g, false);
    let scale = 1.0 / vsize;
    out.values.iter_mut().for_each(|z| *z *= scale);
    Ok(out)
}

/// `L^r` norm of `g` with respect to the chosen measure; `r = oo` is the max.
pub fn lr_norm(f: &FiniteField, g: &ComplexGrid, r: LpExponent, measure: &MeasureKind) -> Result<f64> {
    r.validate()?;
    let (moduli, mass): (Vec<f64>, f64) = match measure {
        MeasureKind::CountingDC => (g.values.iter().map(|z| z.norm()).collect(), 1.0),
        MeasureKind::NormalizedDN => (
            g.values.iter().map(|z| z.norm()).collect(),
            (f.q() as f64).powi(-(g.d as i32)),
        ),
        MeasureKind::SurfaceSigma(v) => {
            if v.d != g.d {
                return Err(Error::SupportViolation);
            }
            let pts = v.enumerate(f)?;
            let mass = 1.0 / pts.len() as f64;
            (pts.iter().map(|c| g.values[c as usize].norm()).collect(), mass)
        }
    };
    match r {
        LpExponent::Infinity => Ok(moduli.into_iter().fold(0.0, f64::max)),
        LpExponent::Finite(_) => {
            let rr = r.as_f64();
            let total: f64 = moduli.into_iter().map(|m| m.powf(rr)).sum();
            Ok((total * mass).powf(1.0 / rr))
        }
    }
}

/// Closed form for the paraboloid transform `hat(P)(m)`:
/// `q^{-d} chi(||m_under|| / (4 m_d)) eta^{d-1}(-m_d) G_1^{d-1}` when
/// `m_d != 0`, zero when `m_d = 0` but `m != 0`, and `q^{-1}` at `m = 0`.
///
/// Completing the square per coordinate gives the factor `eta(-m_d)` (not
/// `eta(m_d)`); the two agree whenever `d` is odd.
pub fn paraboloid_hat_closed(f: &FiniteField, d: usize, m: &[Fq]) -> Complex64 {
    debug_assert_eq!(m.len(), d);
    let m_under = &m[..d - 1];
    let m_d = m[d - 1];
    if m_d.is_zero() {
        return if m_under.iter().all(|c| c.is_zero()) {
            Complex64::new(1.0 / f.q() as f64, 0.0)
        } else {
            Complex64::ZERO
        };
    }
    let g1 = f.gauss_sum();
    let arg = f.div(geometry::norm(f, m_under), f.mul(f.int(4), m_d));
    let eta_pow = if (d - 1) % 2 == 0 {
        1.0
    } else {
        f.quad_char(f.neg(m_d)) as f64
    };
    (f.q() as f64).powi(-(d as i32)) * f.add_char(arg) * eta_pow * g1.powu(d as u32 - 1)
}

/// Kloosterman-type closed form for the sphere transform `hat(S_j)(m)`:
/// `delta_0(m)/q + q^{-d-1} eta^d(-1) G_1^d sum_{r != 0} eta^d(r)
/// chi(j r + ||m|| / (4r))`.
pub fn sphere_hat_closed(f: &FiniteField, d: usize, j: Fq, m: &[Fq]) -> Complex64 {
    debug_assert_eq!(m.len(), d);
    let g1 = f.gauss_sum();
    let norm_m = geometry::norm(f, m);
    let inv4 = f.inv(f.int(4));
    let mut sum = Complex64::ZERO;
    for r in f.units() {
        let arg = f.add(f.mul(j, r), f.mul(norm_m, f.mul(inv4, f.inv(r))));
        let eta_pow = if d % 2 == 0 { 1.0 } else { f.quad_char(r) as f64 };
        sum += eta_pow * f.add_char(arg);
    }
    let eta_m1 = if d % 2 == 0 { 1.0 } else { f.quad_char(f.neg(Fq::ONE)) as f64 };
    let delta = if m.iter().all(|c| c.is_zero()) { 1.0 / f.q() as f64 } else { 0.0 };
    Complex64::new(delta, 0.0)
        + (f.q() as f64).powi(-(d as i32) - 1) * eta_m1 * g1.powu(d as u32) * sum
}

/// Special zero-sphere form valid for `d = 4k + 2` and `q = 3 mod 4`:
/// `hat(S_0)(alpha) = delta_0(alpha)/q - q^{-(d+2)/2} sum_{r != 0}
/// chi(r ||alpha||)`.
pub fn zero_sphere_hat_closed(f: &FiniteField, d: usize, alpha: &[Fq]) -> Result<Complex64> {
    if d % 4 != 2 || f.q() % 4 != 3 {
        return Err(Error::HypothesisViolation(format!(
            "zero-sphere form needs d = 2 mod 4 and q = 3 mod 4, got d = {d}, q = {}",
            f.q()
        )));
    }
    let norm_a = geometry::norm(f, alpha);
    let sum: Complex64 = f.units().map(|r| f.add_char(f.mul(r, norm_a))).sum();
    let delta = if alpha.iter().all(|c| c.is_zero()) { 1.0 / f.q() as f64 } else { 0.0 };
    let scale = (f.q() as f64).powi(-((d as i32 + 2) / 2));
    Ok(Complex64::new(delta, 0.0) - scale * sum)
}

/// Both sides of the spherical-average / paraboloid-restriction identity:
/// `sum_{m in S_t} |hat(A)(m)|^2 = q^{-d-2} ||tilde(A (x) chi_t)||^2_{L^2(P,
/// dsigma)}` with `P` the paraboloid in `F_q^{d+1}`.
pub fn restriction_distance_identity(
    f: &FiniteField,
    a: &PointSet,
    t: Fq,
) -> Result<(f64, f64)> {
    if t.is_zero() {
        return Err(Error::BadRange("t must be nonzero".into()));
    }
    let d = a.d;
    let grid = ComplexGrid::indicator(f, a)?;
    let a_hat = fourier_hat(f, &grid);
    let sphere = Variety::sphere(d, t).enumerate(f)?;
    let lhs: f64 = sphere.iter().map(|c| a_hat.values[c as usize].norm_sqr()).sum();

    // tensor grid on F_q^{d+1}: G(x, s) = A(x) chi(t s)
    let n_d = geometry::space_size(f, d)?;
    let mut big = ComplexGrid::zeros(f, d + 1)?;
    for code in a.iter() {
        for s in f.elements() {
            big.values[(code + s.0 as u64 * n_d) as usize] = f.add_char(f.mul(t, s));
        }
    }
    let big_tilde = fourier_tilde(f, &big);
    let parab = Variety::paraboloid(d + 1).enumerate(f)?;
    let mean_sq: f64 = parab
        .iter()
        .map(|c| big_tilde.values[c as usize].norm_sqr())
        .sum::<f64>()
        / parab.len() as f64;
    let rhs = (f.q() as f64).powi(-(d as i32) - 2) * mean_sq;
    Ok((lhs, rhs))
}

/// Exhaustively verifies one closed-form transform against the separable
/// brute-force transform; returns the maximum absolute deviation over `m`.
pub fn max_closed_form_deviation(f: &FiniteField, v: &Variety) -> Result<f64> {
    let pts = v.enumerate(f)?;
    let hat = fourier_hat(f, &ComplexGrid::indicator(f, &pts)?);
    let max_dev = (0..hat.len())
        .into_par_iter()
        .map(|code| {
            let m = geometry::decode_point(f, code as u64, v.d);
            let closed = match v.kind {
                VarietyKind::Paraboloid => paraboloid_hat_closed(f, v.d, &m),
                VarietyKind::Sphere(j) => sphere_hat_closed(f, v.d, j, &m),
            };
            (closed - hat.values[code]).norm()
        })
        .reduce(|| 0.0, f64::max);
    Ok(max_dev)
}

/// Maximum deviation of the special zero-sphere form from brute force.
pub fn max_zero_sphere_deviation(f: &FiniteField, d: usize) -> Result<f64> {
    let v = Variety::sphere(d, Fq::ZERO);
    let pts = v.enumerate(f)?;
    let hat = fourier_hat(f, &ComplexGrid::indicator(f, &pts)?);
    let n = hat.len();
    let max_dev = (0..n)
        .into_par_iter()
        .map(|code| {
            let m = geometry::decode_point(f, code as u64, d);
            let closed = zero_sphere_hat_closed(f, d, &m).expect("hypotheses checked by caller");
            (closed - hat.values[code]).norm()
        })
        .reduce(|| 0.0, f64::max);
    // surface the hypothesis error eagerly for bad parameters
    zero_sphere_hat_closed(f, d, &vec![Fq::ZERO; d])?;
    Ok(max_dev)
}

/// Relative Plancherel defect `|sum_m |hat f|^2 - q^{-d} sum_x |f|^2|`,
/// scaled by the right-hand side.
pub fn plancherel_defect(f: &FiniteField, g: &ComplexGrid) -> f64 {
    let hat = fourier_hat(f, g);
    let lhs: f64 = hat.values.iter().map(|z| z.norm_sqr()).sum();
    let rhs: f64 = g.values.iter().map(|z| z.norm_sqr()).sum::<f64>()
        * (f.q() as f64).powi(-(g.d as i32));
    (lhs - rhs).abs() / rhs.max(TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{cclose, close};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn field(p: u64, ell: u32) -> FiniteField {
        FiniteField::new(p, ell).unwrap()
    }

    fn random_grid(f: &FiniteField, d: usize, rng: &mut ChaCha8Rng) -> ComplexGrid {
        let n = geometry::space_size(f, d).unwrap() as usize;
        ComplexGrid {
            d,
            values: (0..n)
                .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                .collect(),
        }
    }

    #[test]
    fn delta_and_constant_transforms() {
        let f = field(3, 1);
        let d = 2;
        // indicator of {0} -> constant q^{-d}
        let delta = ComplexGrid::delta(&f, d, 0).unwrap();
        let hat = fourier_hat(&f, &delta);
        for &z in &hat.values {
            assert!(cclose(z, Complex64::new(1.0 / 9.0, 0.0), 1.0));
        }
        // constant 1 -> q^{-d} q^d [m = 0]
        let one = ComplexGrid::constant(&f, d, Complex64::ONE).unwrap();
        let hat = fourier_hat(&f, &one);
        assert!(cclose(hat.values[0], Complex64::ONE, 1.0));
        for &z in &hat.values[1..] {
            assert!(z.norm() <= TOL);
        }
    }

    #[test]
    fn inversion_and_plancherel_on_random_grids() {
        for (p, ell, d) in [(3, 1, 2), (5, 1, 2), (3, 2, 2), (7, 1, 3), (3, 1, 4)] {
            let f = field(p, ell);
            let mut rng = ChaCha8Rng::seed_from_u64(p ^ (d as u64) << 8);
            for _ in 0..20 {
                let g = random_grid(&f, d, &mut rng);
                // vee(tilde(f)) = f
                let round = fourier_vee(&f, &fourier_tilde(&f, &g));
                for (a, b) in round.values.iter().zip(&g.values) {
                    assert!(cclose(*a, *b, 1.0));
                }
                // synthesis of hat(f) = f
                let round2 = fourier_synth(&f, &fourier_hat(&f, &g));
                for (a, b) in round2.values.iter().zip(&g.values) {
                    assert!(cclose(*a, *b, 1.0));
                }
                // tilde(f)(x) = q^d vee(f)(-x)
                let tilde = fourier_tilde(&f, &g);
                let vee = fourier_vee(&f, &g);
                let qd = (f.q() as f64).powi(d as i32);
                for code in 0..g.len() {
                    let x = geometry::decode_point(&f, code as u64, d);
                    let neg: Vec<Fq> = x.iter().map(|&c| f.neg(c)).collect();
                    let nc = geometry::encode_point(&f, &neg) as usize;
                    assert!(cclose(tilde.values[code], qd * vee.values[nc], qd));
                }
                assert!(plancherel_defect(&f, &g) <= TOL);
            }
        }
    }

    #[test]
    fn paraboloid_closed_form_matches_brute_force() {
        for (p, ell, d) in [
            (3, 1, 2),
            (3, 1, 3),
            (5, 1, 2),
            (5, 1, 3),
            (7, 1, 2),
            (7, 1, 3),
            (3, 1, 4),
            (3, 2, 2),
            (9, 1, 2), // will fail NonPrime -> skipped below
        ] {
            if FiniteField::new(p, ell).is_err() {
                continue;
            }
            let f = field(p, ell);
            let v = Variety::paraboloid(d);
            let dev = max_closed_form_deviation(&f, &v).unwrap();
            assert!(dev <= TOL, "q={} d={} dev={dev:e}", f.q(), d);
        }
    }

    #[test]
    fn paraboloid_closed_form_special_values() {
        let f = field(5, 1);
        let d = 3;
        // m = 0 -> 1/q
        assert!(cclose(
            paraboloid_hat_closed(&f, d, &[Fq(0), Fq(0), Fq(0)]),
            Complex64::new(0.2, 0.0),
            1.0
        ));
        // m_d = 0, m_under != 0 -> 0
        assert_eq!(paraboloid_hat_closed(&f, d, &[Fq(1), Fq(0), Fq(0)]), Complex64::ZERO);
        // q = 5, d = 3, m = (1,0,1): q^{-3} chi(1/4) eta^2(1) G_1^2
        let g1 = f.gauss_sum();
        let expect = 5f64.powi(-3) * f.add_char(f.div(Fq(1), Fq(4))) * g1 * g1;
        assert!(cclose(paraboloid_hat_closed(&f, d, &[Fq(1), Fq(0), Fq(1)]), expect, 1.0));
    }

    #[test]
    fn sphere_closed_form_matches_brute_force_all_radii() {
        for (p, ell, d) in [(3, 1, 2), (3, 1, 3), (5, 1, 2), (7, 1, 2), (3, 2, 2), (5, 1, 3)] {
            let f = field(p, ell);
            for j in f.elements() {
                let v = Variety::sphere(d, j);
                let dev = max_closed_form_deviation(&f, &v).unwrap();
                assert!(dev <= TOL, "q={} d={} j={} dev={dev:e}", f.q(), d, j.0);
            }
        }
    }

    #[test]
    fn sphere_closed_form_at_zero_is_density() {
        let f = field(5, 1);
        for d in [2usize, 3] {
            for j in f.elements() {
                let size = Variety::sphere(d, j).enumerate(&f).unwrap().len() as f64;
                let qd = (f.q() as f64).powi(d as i32);
                let got = sphere_hat_closed(&f, d, j, &vec![Fq(0); d]);
                assert!(cclose(got, Complex64::new(size / qd, 0.0), 1.0));
            }
        }
    }

    #[test]
    fn zero_sphere_form_and_hypotheses() {
        let f = field(3, 1);
        // |S_0| = q^d hat(S_0)(0) = 225 at (3,6): 1/3 - 2/81 = 25/81
        let at_zero = zero_sphere_hat_closed(&f, 6, &vec![Fq(0); 6]).unwrap();
        assert!(cclose(at_zero, Complex64::new(25.0 / 81.0, 0.0), 1.0));
        assert_eq!(
            (at_zero.re * 3f64.powi(6)).round() as u64,
            Variety::sphere(6, Fq(0)).enumerate(&f).unwrap().len() as u64
        );
        // nonzero norm: 1/q * 0 + q^{-(d+2)/2}
        let alpha = [Fq(1), Fq(0), Fq(0), Fq(0), Fq(0), Fq(0)];
        let got = zero_sphere_hat_closed(&f, 6, &alpha).unwrap();
        assert!(cclose(got, Complex64::new(3f64.powi(-4), 0.0), 1.0));
        // wrong dimension class
        assert!(matches!(
            zero_sphere_hat_closed(&f, 5, &vec![Fq(0); 5]),
            Err(Error::HypothesisViolation(_))
        ));
        // wrong q class
        let f5 = field(5, 1);
        assert!(matches!(
            zero_sphere_hat_closed(&f5, 6, &vec![Fq(0); 6]),
            Err(Error::HypothesisViolation(_))
        ));
        // full agreement with brute force at (3,6)
        assert!(max_zero_sphere_deviation(&f, 6).unwrap() <= TOL);
    }

    #[test]
    fn extension_inverse_basics() {
        let f = field(5, 1);
        let v = Variety::sphere(2, Fq(1));
        let pts = v.enumerate(&f).unwrap();
        // single point a: grid m -> chi(m.a)/|V|
        let a_code = pts.codes()[1];
        let g = ComplexGrid::delta(&f, 2, a_code).unwrap();
        let ext = extension_inverse(&f, &g, &v).unwrap();
        let a = geometry::decode_point(&f, a_code, 2);
        for code in 0..ext.len() {
            let m = geometry::decode_point(&f, code as u64, 2);
            let expect = f.add_char(geometry::dot(&f, &m, &a)) / pts.len() as f64;
            assert!(cclose(ext.values[code], expect, 1.0));
        }
        // support violation
        let bad = ComplexGrid::constant(&f, 2, Complex64::ONE).unwrap();
        assert!(matches!(extension_inverse(&f, &bad, &v), Err(Error::SupportViolation)));
        // f = 1 on V: (dsigma)^vee = (q^d / |V|) vee(1_V)
        let ind = ComplexGrid::indicator(&f, &pts).unwrap();
        let ext = extension_inverse(&f, &ind, &v).unwrap();
        let vee = fourier_vee(&f, &ind);
        let qd = (f.q() as f64).powi(2);
        for code in 0..ext.len() {
            assert!(cclose(ext.values[code], qd / pts.len() as f64 * vee.values[code], 1.0));
        }
    }

    #[test]
    fn lr_norm_basics_and_monotonicity() {
        let f = field(3, 1);
        let d = 2;
        let one = ComplexGrid::constant(&f, d, Complex64::ONE).unwrap();
        // constant 1, dc, r = 2 -> q^{d/2}
        let n = lr_norm(&f, &one, LpExponent::from_int(2), &MeasureKind::CountingDC).unwrap();
        assert!(close(n, 3.0, 1.0));
        // constant 1 under dsigma: 1 for every r
        let v = Variety::paraboloid(d);
        for r in [1i64, 2, 4, 7] {
            let n = lr_norm(&f, &one, LpExponent::from_int(r), &MeasureKind::SurfaceSigma(v)).unwrap();
            assert!(close(n, 1.0, 1.0));
        }
        assert!(close(
            lr_norm(&f, &one, LpExponent::Infinity, &MeasureKind::CountingDC).unwrap(),
            1.0,
            1.0
        ));
        // surface-measure norms grow with the exponent; counting norms shrink
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let g = random_grid(&f, d, &mut rng);
            let ps = [1i64, 2, 3, 4, 8];
            let sig: Vec<f64> = ps
                .iter()
                .map(|&p| lr_norm(&f, &g, LpExponent::from_int(p), &MeasureKind::SurfaceSigma(v)).unwrap())
                .collect();
            for w in sig.windows(2) {
                assert!(w[0] <= w[1] + TOL);
            }
            let dc: Vec<f64> = ps
                .iter()
                .map(|&p| lr_norm(&f, &g, LpExponent::from_int(p), &MeasureKind::CountingDC).unwrap())
                .collect();
            for w in dc.windows(2) {
                assert!(w[0] >= w[1] - TOL);
            }
        }
        // bad exponent
        assert!(matches!(
            lr_norm(&f, &one, LpExponent::from_ratio(1, 2), &MeasureKind::CountingDC),
            Err(Error::BadExponent(_))
        ));
    }

    #[test]
    fn restriction_distance_identity_cases() {
        let f = field(5, 1);
        let d = 2;
        // A = {0}: lhs = q^{-2d} |S_t|
        let a = PointSet::from_codes(d, vec![0]);
        let (lhs, rhs) = restriction_distance_identity(&f, &a, Fq(1)).unwrap();
        let st = Variety::sphere(d, Fq(1)).enumerate(&f).unwrap().len() as f64;
        assert!(close(lhs, st * 5f64.powi(-4), 1.0));
        assert!(close(lhs, rhs, 1.0));

        // A = F_q^d: hat A supported at 0, lhs = 0 for t != 0
        let full = PointSet::full_space(&f, d).unwrap();
        let (lhs, rhs) = restriction_distance_identity(&f, &full, Fq(2)).unwrap();
        assert!(lhs.abs() <= TOL && rhs.abs() <= TOL);

        // random sets at (5,2) and (5,3), (3,2)
        for (p, d) in [(5u64, 2usize), (3, 2), (5, 3)] {
            let f = field(p, 1);
            let n = geometry::space_size(&f, d).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(p + d as u64);
            for trial in 0..25 {
                let codes: Vec<u64> = (0..n).filter(|_| rng.random::<bool>()).collect();
                let a = PointSet::from_codes(d, codes);
                let t = Fq(rng.random_range(1..f.q()));
                let (lhs, rhs) = restriction_distance_identity(&f, &a, t).unwrap();
                assert!(
                    close(lhs, rhs, lhs.abs().max(1e-15)),
                    "q={p} d={d} trial={trial}: {lhs} vs {rhs}"
                );
            }
        }
        // t = 0 rejected
        assert!(restriction_distance_identity(&f, &a, Fq(0)).is_err());
    }

    #[test]
    fn indicator_transform_example_against_closed_form() {
        // indicator of P at q = 3, d = 2, checked at m = (1,1)
        let f = field(3, 1);
        let v = Variety::paraboloid(2);
        let pts = v.enumerate(&f).unwrap();
        let hat = fourier_hat(&f, &ComplexGrid::indicator(&f, &pts).unwrap());
        let m = [Fq(1), Fq(1)];
        let code = geometry::encode_point(&f, &m) as usize;
        assert!(cclose(hat.values[code], paraboloid_hat_closed(&f, 2, &m), 1.0));
    }
}
