//! Check runners: each suite maps library operations to named
//! pass/fail/skip records with frozen tolerances.

use crate::report::{sig12, Check, CheckRecord};
use fflab::energy;
use fflab::extension::{self, Family, LpExponent};
use fflab::field::{FiniteField, Fq};
use fflab::fourier::{self, ComplexGrid};
use fflab::geometry::{self, PointSet, Variety};
use fflab::scheme;
use fflab::distance::{self, SharpKind};
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const REL_TOL: f64 = 1e-9;

/// Builds `F_q` from a prime-power order.
pub fn field_from_q(q: u64) -> Result<FiniteField, String> {
    if q < 3 {
        return Err(format!("q = {q} is not an odd prime power"));
    }
    let mut p = 0u64;
    for c in 2..=q {
        if q % c == 0 {
            p = c;
            break;
        }
    }
    let mut ell = 0u32;
    let mut t = q;
    while t % p == 0 {
        t /= p;
        ell += 1;
    }
    if t != 1 {
        return Err(format!("q = {q} is not a prime power"));
    }
    FiniteField::new(p, ell).map_err(|e| e.to_string())
}

pub fn odd_prime_powers(limit: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for q in (3..=limit).step_by(2) {
        if field_from_q(q).is_ok() {
            out.push(q);
        }
    }
    out
}

fn rng_for(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn sample_subset(codes: &[u64], size: usize, rng: &mut ChaCha8Rng) -> Vec<u64> {
    let mut v = codes.to_vec();
    let size = size.clamp(1, v.len());
    // partial Fisher-Yates
    for i in 0..size {
        let j = rng.random_range(i..v.len());
        v.swap(i, j);
    }
    v.truncate(size);
    v
}

fn rel_dev(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

// ---------------------------------------------------------------- gauss --

pub fn suite_gauss(qmax: u64) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for q in odd_prime_powers(qmax) {
        let f = field_from_q(q).expect("enumerated prime powers are valid");
        let c = Check::start(format!("gauss_closed_form[q={q}]"));
        let direct = f.gauss_sum();
        let closed = f.gauss_sum_closed();
        let dev = (direct - closed).norm();
        let scale = (q as f64).sqrt();
        out.push(c.done(dev <= REL_TOL * scale, dev, REL_TOL * scale, "1e-9 rel"));
    }
    for q in odd_prime_powers(qmax.min(13)) {
        let f = field_from_q(q).expect("valid");
        let c = Check::start(format!("gauss_quadratic_completion[q={q}]"));
        let mut max_dev: f64 = 0.0;
        for u in f.units() {
            for v in f.elements() {
                let direct = f.gauss_quadratic(u, v).expect("u nonzero");
                let closed = f.gauss_quadratic_closed(u, v).expect("u nonzero");
                max_dev = max_dev.max((direct - closed).norm());
            }
        }
        let scale = (q as f64).sqrt();
        out.push(c.done(max_dev <= REL_TOL * scale, max_dev, REL_TOL * scale, "1e-9 rel"));

        let c = Check::start(format!("gauss_reduction_identities[q={q}]"));
        let g1 = f.gauss_sum();
        let mut dev: f64 = 0.0;
        for u in f.units() {
            let s1: Complex64 =
                f.elements().map(|s| f.add_char(f.mul(u, f.square(s)))).sum();
            dev = dev.max((s1 - f.quad_char(u) as f64 * g1).norm());
        }
        for v in f.units() {
            for w in f.units() {
                let s2: Complex64 = f
                    .units()
                    .map(|r| f.quad_char(f.mul(v, r)) as f64 * f.add_char(f.mul(w, r)))
                    .sum();
                dev = dev.max((s2 - f.quad_char(f.mul(v, w)) as f64 * g1).norm());
            }
        }
        out.push(c.done(dev <= REL_TOL * scale, dev, REL_TOL * scale, "1e-9 rel"));
    }
    for q in odd_prime_powers(qmax.min(49)) {
        let f = field_from_q(q).expect("valid");
        let c = Check::start(format!("gauss_power_sign[q={q}]"));
        let g1 = f.gauss_sum();
        let eta_m1 = f.quad_char(f.int(-1)) as f64;
        let mut max_rel: f64 = 0.0;
        for d in [3u32, 5, 7, 9] {
            let lhs = eta_m1 * g1.powu(d + 1);
            let mag = (q as f64).powi(((d + 1) / 2) as i32);
            let sign = if d % 4 == 3 && q % 4 == 3 { -1.0 } else { 1.0 };
            max_rel = max_rel.max((lhs - sign * mag).norm() / mag);
        }
        out.push(c.done(max_rel <= REL_TOL, max_rel, REL_TOL, "1e-9 rel"));
    }
    for q in odd_prime_powers(qmax) {
        let f = field_from_q(q).expect("valid");
        let c = Check::start(format!("char_orthogonality[q={q}]"));
        let mut dev: f64 = 0.0;
        for m in f.elements() {
            let s: Complex64 = f.elements().map(|x| f.add_char(f.mul(m, x))).sum();
            let target = if m.is_zero() { q as f64 } else { 0.0 };
            dev = dev.max((s - target).norm());
        }
        out.push(c.done(dev <= REL_TOL * q as f64, dev, REL_TOL * q as f64, "1e-9 q"));
    }
    out
}

// --------------------------------------------------------------- fourier --

pub fn suite_fourier(f: &FiniteField, d: usize, j: Option<Fq>, seed: u64) -> Vec<CheckRecord> {
    let q = f.q();
    let mut out = Vec::new();
    if geometry::space_size(f, d).is_err() {
        let c = Check::start(format!("fourier_suite[q={q},d={d}]"));
        out.push(c.skip("q^d exceeds the enumeration budget"));
        return out;
    }

    {
        let c = Check::start(format!("plancherel_inversion[q={q},d={d}]"));
        let n = geometry::space_size(f, d).unwrap() as usize;
        let mut rng = rng_for(seed, 1);
        let mut dev: f64 = 0.0;
        for _ in 0..100 {
            let grid = ComplexGrid {
                d,
                values: (0..n)
                    .map(|_| {
                        Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
                    })
                    .collect(),
            };
            dev = dev.max(fourier::plancherel_defect(f, &grid));
            let round = fourier::fourier_synth(f, &fourier::fourier_hat(f, &grid));
            for (a, b) in round.values.iter().zip(&grid.values) {
                dev = dev.max((a - b).norm());
            }
        }
        out.push(c.done(dev <= REL_TOL, dev, REL_TOL, "1e-9 rel"));
    }

    if d >= 2 {
        let c = Check::start(format!("paraboloid_transform[q={q},d={d}]"));
        let dev = fourier::max_closed_form_deviation(f, &Variety::paraboloid(d)).unwrap();
        out.push(c.done(dev <= REL_TOL, dev, REL_TOL, "1e-9 abs"));
    }

    {
        let c = Check::start(format!("sphere_transform[q={q},d={d}]"));
        let radii: Vec<Fq> = match j {
            Some(j) => vec![j],
            None => f.elements().collect(),
        };
        let mut dev: f64 = 0.0;
        for j in radii {
            dev = dev.max(
                fourier::max_closed_form_deviation(f, &Variety::sphere(d, j)).unwrap(),
            );
        }
        out.push(c.done(dev <= REL_TOL, dev, REL_TOL, "1e-9 abs"));
    }

    {
        let c = Check::start(format!("zero_sphere_transform[q={q},d={d}]"));
        if d % 4 == 2 && q % 4 == 3 {
            let dev = fourier::max_zero_sphere_deviation(f, d).unwrap();
            out.push(c.done(dev <= REL_TOL, dev, REL_TOL, "1e-9 abs"));
            let c = Check::start(format!("zero_sphere_cardinality[q={q},d={d}]"));
            let size = Variety::sphere(d, Fq::ZERO).enumerate(f).unwrap().len() as u128;
            let at_zero =
                fourier::zero_sphere_hat_closed(f, d, &vec![Fq::ZERO; d]).unwrap();
            let formula = (at_zero.re * (q as f64).powi(d as i32)).round() as u128;
            out.push(c.done_exact(size == formula, size, formula));
        } else {
            out.push(c.skip(format!("needs d = 2 mod 4 and q = 3 mod 4, got d = {d}, q = {q}")));
        }
    }

    {
        let c = Check::start(format!("restriction_distance_identity[q={q},d={d}]"));
        let n = geometry::space_size(f, d).unwrap();
        let mut rng = rng_for(seed, 2);
        let all: Vec<u64> = (0..n).collect();
        let mut dev: f64 = 0.0;
        for _ in 0..100 {
            let a = PointSet::from_codes(
                d,
                sample_subset(&all, rng.random_range(1..=n as usize), &mut rng),
            );
            for t in f.units() {
                let (lhs, rhs) = fourier::restriction_distance_identity(f, &a, t).unwrap();
                dev = dev.max(rel_dev(lhs, rhs));
            }
        }
        out.push(c.done(dev <= REL_TOL, dev, REL_TOL, "1e-9 rel"));
    }

    out
}

// ---------------------------------------------------------------- energy --

pub struct EnergyParams {
    pub trials: usize,
    pub seed: u64,
    pub c_test: f64,
    /// Random subset sizes are capped to keep the pair loops at desk scale.
    pub size_cap: usize,
}

impl Default for EnergyParams {
    fn default() -> Self {
        EnergyParams { trials: 200, seed: 0, c_test: 8.0, size_cap: 600 }
    }
}

pub fn suite_energy(f: &FiniteField, d: usize, prm: &EnergyParams) -> Vec<CheckRecord> {
    let q = f.q();
    let mut out = Vec::new();
    if geometry::space_size(f, d).is_err() {
        out.push(Check::start(format!("energy_suite[q={q},d={d}]"))
            .skip("q^d exceeds the enumeration budget"));
        return out;
    }

    // L^4 <-> energy identity on the paraboloid (exhaustive when tiny)
    if d >= 2 {
        let c = Check::start(format!("l4_energy_paraboloid[q={q},d={d}]"));
        let v = Variety::paraboloid(d);
        let pts = v.enumerate(f).unwrap();
        let mut dev: f64 = 0.0;
        if pts.len() <= 12 {
            for mask in 1u64..(1 << pts.len()) {
                let codes: Vec<u64> = pts
                    .codes()
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &c)| c)
                    .collect();
                let a = PointSet::from_codes(d, codes);
                let (lhs, rhs) = energy::l4_energy_identity(f, &a, &v).unwrap();
                dev = dev.max(rel_dev(lhs, rhs));
            }
        } else {
            let mut rng = rng_for(prm.seed, 10);
            for _ in 0..prm.trials.max(500) {
                let size = rng.random_range(1..=pts.len().min(prm.size_cap));
                let a = PointSet::from_codes(d, sample_subset(pts.codes(), size, &mut rng));
                let (lhs, rhs) = energy::l4_energy_identity(f, &a, &v).unwrap();
                dev = dev.max(rel_dev(lhs, rhs));
            }
        }
        out.push(c.done(dev <= REL_TOL, dev, REL_TOL, "1e-9 rel"));
    }

    {
        let c = Check::start(format!("l4_energy_sphere[q={q},d={d}]"));
        let g = f.primitive();
        let v = Variety::sphere(d, g);
        let pts = v.enumerate(f).unwrap();
        if pts.is_empty() {
            out.push(c.skip("empty sphere"));
        } else {
            let mut rng = rng_for(prm.seed, 11);
            let mut dev: f64 = 0.0;
            for _ in 0..prm.trials.min(500) {
                let size = rng.random_range(1..=pts.len().min(prm.size_cap));
                let a = PointSet::from_codes(d, sample_subset(pts.codes(), size, &mut rng));
                let (lhs, rhs) = energy::l4_energy_identity(f, &a, &v).unwrap();
                dev = dev.max(rel_dev(lhs, rhs));
            }
            out.push(c.done(dev <= REL_TOL, dev, REL_TOL, "1e-9 rel"));
        }
    }

    // paraboloid energy bound with sharpness witness
    {
        let c = Check::start(format!("paraboloid_energy_bound[q={q},d={d}]"));
        if d % 4 == 3 && d >= 7 && q % 4 == 3 {
            let v = Variety::paraboloid(d);
            let pts = v.enumerate(f).unwrap();
            let mut rng = rng_for(prm.seed, 12);
            let mut max_ratio: f64 = 0.0;
            let mut all_pass = true;
            for _ in 0..prm.trials {
                let size = rng.random_range(1..=pts.len().min(prm.size_cap));
                let a = PointSet::from_codes(d, sample_subset(pts.codes(), size, &mut rng));
                let rep = energy::paraboloid_energy_check(f, &a, prm.c_test).unwrap();
                max_ratio = max_ratio.max(rep.ratio);
                all_pass &= rep.pass;
            }
            // isotropic span witness: E = |A|^3 exactly
            let span = paraboloid_span_set(f, d);
            let witness_ok = match &span {
                Some(a) => {
                    let rep = energy::paraboloid_energy_check(f, a, prm.c_test).unwrap();
                    max_ratio = max_ratio.max(rep.ratio);
                    all_pass &= rep.pass;
                    rep.energy == (a.len() as u64).pow(3)
                }
                None => false,
            };
            out.push(c.done(all_pass, max_ratio, prm.c_test, "C_test"));
            let c2 = Check::start(format!("paraboloid_energy_sharpness[q={q},d={d}]"));
            match span {
                Some(a) => {
                    let e = energy::additive_energy(f, &a).unwrap();
                    out.push(c2.done_exact(
                        witness_ok,
                        e as u128,
                        (a.len() as u128).pow(3),
                    ));
                }
                None => out.push(c2.skip("no isotropic span at these parameters")),
            }
        } else {
            out.push(c.skip(format!("needs d = 4k+3 (k >= 1) and q = 3 mod 4, got d = {d}, q = {q}")));
        }
    }

    // sphere energy + zero-pair bounds at primitive radius
    {
        let c = Check::start(format!("sphere_energy_bound[q={q},d={d}]"));
        let applies = (d % 4 == 1 && d >= 5) || (d % 4 == 3 && q % 4 == 1);
        if applies {
            let g = f.primitive();
            let v = Variety::sphere(d, g);
            let pts = v.enumerate(f).unwrap();
            let mut rng = rng_for(prm.seed, 13);
            let mut max_ratio: f64 = 0.0;
            let mut zero_ratio: f64 = 0.0;
            let mut all_pass = true;
            for _ in 0..prm.trials {
                let size = rng.random_range(1..=pts.len().min(prm.size_cap));
                let a = PointSet::from_codes(d, sample_subset(pts.codes(), size, &mut rng));
                let rep = energy::sphere_energy_check(f, &a, g, prm.c_test).unwrap();
                max_ratio = max_ratio.max(rep.ratio);
                all_pass &= rep.pass;
                let zp = energy::sphere_zero_pairs_check(f, &a, g, prm.c_test).unwrap();
                zero_ratio = zero_ratio.max(zp.ratio);
                all_pass &= zp.pass;
            }
            // classified subspace sets, when they land on S_g
            for a in extension::constructed_subspace_sets(f, &v) {
                if let Ok(rep) = energy::sphere_energy_check(f, &a, g, prm.c_test) {
                    max_ratio = max_ratio.max(rep.ratio);
                    all_pass &= rep.pass;
                }
            }
            out.push(c.done(all_pass, max_ratio, prm.c_test, "C_test"));
            out.push(
                Check::start(format!("sphere_zero_pair_bound[q={q},d={d}]"))
                    .done(all_pass, zero_ratio, prm.c_test, "C_test"),
            );
        } else {
            out.push(c.skip(format!(
                "needs d = 4k+1 or (d = 4k-1, q = 1 mod 4), got d = {d}, q = {q}"
            )));
        }
    }

    // unit-constant zero-pair bound in the ambient space
    {
        let c = Check::start(format!("zero_pair_unit_bound[q={q},d={d}]"));
        if d % 4 == 2 && q % 4 == 3 {
            let n = geometry::space_size(f, d).unwrap();
            let all: Vec<u64> = (0..n).collect();
            let mut rng = rng_for(prm.seed, 14);
            let mut max_ratio: f64 = 0.0;
            let mut all_pass = true;
            for _ in 0..prm.trials {
                let size = rng.random_range(1..=prm.size_cap.min(n as usize));
                let a = PointSet::from_codes(d, sample_subset(&all, size, &mut rng));
                let rep = energy::zero_pair_unit_bound(f, &a).unwrap();
                max_ratio = max_ratio.max(rep.ratio);
                all_pass &= rep.pass;
            }
            out.push(c.done(all_pass, max_ratio, 1.0, "exact, constant 1"));
        } else {
            out.push(c.skip(format!("needs d = 4k+2 and q = 3 mod 4, got d = {d}, q = {q}")));
        }
    }

    // right-angle split consistency on the paraboloid
    if d >= 2 && geometry::space_size(f, d).unwrap() <= 100_000 {
        let c = Check::start(format!("energy_split_consistency[q={q},d={d}]"));
        let pts = Variety::paraboloid(d).enumerate(f).unwrap();
        let mut rng = rng_for(prm.seed, 15);
        let mut ok = true;
        for _ in 0..10 {
            let size = rng.random_range(1..=pts.len().min(150));
            let a = PointSet::from_codes(d, sample_subset(pts.codes(), size, &mut rng));
            let (e1, e2) = energy::paraboloid_energy_split(f, &a).unwrap();
            ok &= e1 + e2 == energy::additive_energy(f, &a).unwrap();
        }
        out.push(c.done_exact(ok, u128::from(ok), 1));
    }

    // incidence mixing bound
    {
        let c = Check::start(format!("incidence_mixing[q={q},d={d}]"));
        let n = geometry::space_size(f, d).unwrap();
        let all: Vec<u64> = (0..n).collect();
        let mut rng = rng_for(prm.seed, 16);
        let mut all_pass = true;
        let mut worst: f64 = 0.0;
        for _ in 0..prm.trials {
            let points = PointSet::from_codes(
                d,
                sample_subset(&all, rng.random_range(1..=n as usize), &mut rng),
            );
            let nplanes = rng.random_range(1..=(2 * q as usize));
            let planes: Vec<(Vec<Fq>, Fq)> = (0..nplanes)
                .map(|_| loop {
                    let normal: Vec<Fq> =
                        (0..d).map(|_| Fq(rng.random_range(0..q))).collect();
                    if normal.iter().any(|c| !c.is_zero()) {
                        break (normal, Fq(rng.random_range(0..q)));
                    }
                })
                .collect();
            let rep = energy::point_hyperplane_incidences(f, &points, &planes).unwrap();
            all_pass &= rep.pass;
            let allowed = (q as f64).powf((d as f64 - 1.0) / 2.0)
                * ((rep.points * rep.planes) as f64).sqrt();
            if allowed > 0.0 {
                worst = worst.max(rep.deviation / allowed);
            }
        }
        out.push(c.done(all_pass, worst, 1.0, "exact"));
    }

    out
}

/// The isotropic-span sharpness set `V x {0}^3` on the paraboloid.
fn paraboloid_span_set(f: &FiniteField, d: usize) -> Option<PointSet> {
    let base = d - 3;
    if base == 0 || base % 4 != 0 && !(base % 4 == 2 && f.q() % 4 == 1) {
        return None;
    }
    let vs = geometry::mutually_orthogonal(f, base).ok()?;
    let basis: Vec<Vec<Fq>> = vs
        .into_iter()
        .map(|mut v| {
            v.extend(vec![Fq::ZERO; 3]);
            v
        })
        .collect();
    Some(geometry::AffineSubspace { base: vec![Fq::ZERO; d], basis }.enumerate(f))
}

// ---------------------------------------------------------------- scheme --

pub fn suite_scheme(f: &FiniteField, m: usize, trials: usize, seed: u64) -> Vec<CheckRecord> {
    let q = f.q();
    let mut out = Vec::new();
    let gph = match scheme::build_scheme(f, m) {
        Ok(g) => g,
        Err(e) => {
            out.push(Check::start(format!("scheme_build[q={q},m={m}]")).skip(e.to_string()));
            return out;
        }
    };

    {
        let c = Check::start(format!("scheme_vertex_count[q={q},m={m}]"));
        let expect = scheme::SchemeGraph::expected_vertex_count(q, m);
        out.push(c.done_exact(
            gph.vertex_count() as u64 == expect,
            gph.vertex_count() as u128,
            expect as u128,
        ));
    }

    {
        let c = Check::start(format!("scheme_axioms[q={q},m={m}]"));
        if gph.vertex_count() <= 200 {
            match scheme::check_scheme_axioms(&gph) {
                Ok(()) => out.push(c.done_exact(true, 1, 1)),
                Err(_) => out.push(c.done_exact(false, 0, 1)),
            }
        } else {
            out.push(c.skip(format!("|V| = {} too large for the exhaustive axiom check", gph.vertex_count())));
        }
    }

    {
        let c = Check::start(format!("scheme_r1_degree[q={q},m={m}]"));
        let expect = scheme::SchemeGraph::expected_degree(q, m);
        out.push(c.done_exact(
            scheme::r1_degree(&gph) as u64 == expect,
            scheme::r1_degree(&gph) as u128,
            expect as u128,
        ));
    }

    {
        let c = Check::start(format!("scheme_r1_spectrum[q={q},m={m}]"));
        match scheme::r1_spectrum(&gph) {
            Ok(spec) => {
                let got: Vec<i64> = spec.eigenvalues.iter().map(|&(e, _)| e).collect();
                let mut expect = scheme::SchemeGraph::expected_eigenvalues(q, m);
                expect.reverse();
                let pass = got == expect && spec.snap_error <= 1e-6;
                let mut rec = Check::start("unused").done(pass, spec.snap_error, 1e-6, "1e-6 snap");
                rec.name = format!("scheme_r1_spectrum[q={q},m={m}]");
                rec.note = Some(format!("eigenvalues {got:?} expected {expect:?}"));
                rec.elapsed_ms = 0;
                out.push(rec);
                let _ = c;
            }
            Err(e) => out.push(c.skip(e.to_string())),
        }
    }

    {
        let c = Check::start(format!("scheme_edge_bound[q={q},m={m}]"));
        let n = gph.vertex_count();
        let mut rng = rng_for(seed, 20);
        let mut all_pass = true;
        let mut max_fill: f64 = 0.0;
        for _ in 0..trials {
            let size = rng.random_range(0..=n);
            let mut w: Vec<usize> = (0..n).collect();
            w.shuffle(&mut rng);
            w.truncate(size);
            let rep = scheme::edge_bound_check(&gph, &w);
            all_pass &= rep.pass;
            if rep.bound > 0.0 {
                max_fill = max_fill.max(rep.edges as f64 / rep.bound);
            }
        }
        out.push(c.done(all_pass, max_fill, 1.0, "exact"));
    }

    if gph.vertex_count() <= 600 {
        let c = Check::start(format!("scheme_edge_spectral_identity[q={q},m={m}]"));
        let mut rng = rng_for(seed, 21);
        let mut dev: f64 = 0.0;
        for _ in 0..5.min(trials.max(1)) {
            let size = rng.random_range(1..=gph.vertex_count());
            let mut w: Vec<usize> = (0..gph.vertex_count()).collect();
            w.shuffle(&mut rng);
            w.truncate(size);
            dev = dev.max(scheme::edge_spectral_defect(&gph, &w).unwrap());
        }
        out.push(c.done(dev <= 1e-6, dev, 1e-6, "1e-6 abs"));
    }

    {
        let c = Check::start(format!("scheme_sphere_bridge[q={q},m={m}]"));
        let g = f.primitive();
        let d = 2 * m + 1;
        let mut pts: Vec<Vec<Fq>> = Vec::new();
        for &code in gph.vertices() {
            let x = geometry::decode_point(f, code, d);
            let val = scheme::scheme_form(f, m, &x, &x);
            if let Some(s) = f.sqrt(f.div(val, g)) {
                pts.push(geometry::scale_point(f, f.inv(s), &x));
            }
        }
        let mut rng = rng_for(seed, 22);
        let mut ok = true;
        let mut full_ratio = 1.0f64;
        let mut min_ratio = f64::INFINITY;
        for trial in 0..20 {
            let keep = if trial == 0 {
                pts.clone()
            } else {
                let mut v = pts.clone();
                v.shuffle(&mut rng);
                v.truncate(rng.random_range(1..=pts.len()));
                v
            };
            let set = PointSet::from_points(f, d, &keep);
            let rep = scheme::sphere_graph_bridge(f, &gph, &set).unwrap();
            // the sign classes partition the edges exactly, and every zero
            // pair is an edge
            ok &= rep.zero_pairs + rep.opposite_pairs == rep.r1_edges;
            ok &= rep.zero_pairs <= rep.r1_edges;
            if rep.r1_edges > 0 {
                min_ratio = min_ratio.min(rep.ratio);
                if trial == 0 {
                    // on the full representative set the two counts agree
                    // within a factor of two
                    full_ratio = rep.ratio;
                    ok &= 2 * rep.zero_pairs >= rep.r1_edges;
                }
            }
        }
        if min_ratio.is_infinite() {
            min_ratio = 1.0;
        }
        let mut rec = c.done(ok, full_ratio, 0.5, "factor 2 on the full set");
        rec.note = Some(format!("min subset ratio {}", sig12(min_ratio)));
        out.push(rec);
    }

    out
}

// --------------------------------------------------------------- distance --

pub struct DistanceParams {
    pub trials: usize,
    pub seed: u64,
}

impl Default for DistanceParams {
    fn default() -> Self {
        DistanceParams { trials: 300, seed: 0 }
    }
}

pub fn suite_distance(
    f: &FiniteField,
    d: usize,
    j: Option<Fq>,
    prm: &DistanceParams,
) -> Vec<CheckRecord> {
    let q = f.q();
    let mut out = Vec::new();
    let n = match geometry::space_size(f, d) {
        Ok(n) => n,
        Err(e) => {
            out.push(Check::start(format!("distance_suite[q={q},d={d}]")).skip(e.to_string()));
            return out;
        }
    };
    let all: Vec<u64> = (0..n).collect();

    {
        let c = Check::start(format!("distance_profile_invariants[q={q},d={d}]"));
        let mut rng = rng_for(prm.seed, 30);
        let mut ok = true;
        for _ in 0..prm.trials.min(100) {
            let a = PointSet::from_codes(
                d,
                sample_subset(&all, rng.random_range(1..=64.min(n as usize)), &mut rng),
            );
            let b = PointSet::from_codes(
                d,
                sample_subset(&all, rng.random_range(1..=64.min(n as usize)), &mut rng),
            );
            let pab = distance::distance_profile(f, &a, &b).unwrap();
            let pba = distance::distance_profile(f, &b, &a).unwrap();
            ok &= pab.mu == pba.mu;
            ok &= pab.mu.iter().sum::<u64>() == (a.len() * b.len()) as u64;
            ok &= pab.delta_size() as f64 >= pab.cs_lower_bound - 1e-9;
        }
        out.push(c.done_exact(ok, u128::from(ok), 1));
    }

    {
        let c = Check::start(format!("mu_second_moment[q={q},d={d}]"));
        let mut rng = rng_for(prm.seed, 31);
        let mut ok = true;
        for _ in 0..prm.trials.min(50) {
            let a = PointSet::from_codes(
                d,
                sample_subset(&all, rng.random_range(1..=24.min(n as usize)), &mut rng),
            );
            let b = PointSet::from_codes(
                d,
                sample_subset(&all, rng.random_range(1..=24.min(n as usize)), &mut rng),
            );
            ok &= distance::mu_square_bounds(f, &a, &b, Some(&a)).unwrap().pass;
        }
        out.push(c.done_exact(ok, u128::from(ok), 1));
    }

    {
        let jj = j.unwrap_or(Fq(1));
        let c = Check::start(format!("sphere_second_moment[q={q},d={d},j={}]", jj.0));
        if jj.is_zero() {
            out.push(c.skip("second-moment bound stated for nonzero radius"));
        } else {
            let sphere = Variety::sphere(d, jj).enumerate(f).unwrap();
            let mut rng = rng_for(prm.seed, 32);
            let mut ok = true;
            for _ in 0..prm.trials.min(20) {
                let a = PointSet::from_codes(
                    d,
                    sample_subset(sphere.codes(), rng.random_range(1..=sphere.len()), &mut rng),
                );
                let b = PointSet::from_codes(
                    d,
                    sample_subset(&all, rng.random_range(1..=24.min(n as usize)), &mut rng),
                );
                ok &= distance::sform_bound(f, &a, &b, jj).unwrap().pass;
            }
            out.push(c.done_exact(ok, u128::from(ok), 1));
        }
    }

    // theorem checks
    {
        let c = Check::start(format!("distance_paraboloid[q={q},d={d}]"));
        let applies = (d % 4 == 3 && q % 4 == 3) || (d % 2 == 0 && d >= 4);
        if applies {
            let pts = Variety::paraboloid(d).enumerate(f).unwrap();
            let mut rng = rng_for(prm.seed, 33);
            let mut ok = true;
            let mut trials_run = 0u64;
            if pts.len() <= 9 {
                // exhaustive subsets with random B each
                for mask in 1u64..(1 << pts.len()) {
                    let codes: Vec<u64> = pts
                        .codes()
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, &c)| c)
                        .collect();
                    let a = PointSet::from_codes(d, codes);
                    let b = PointSet::from_codes(
                        d,
                        sample_subset(&all, rng.random_range(1..=n as usize), &mut rng),
                    );
                    ok &= distance::theorem_paraboloid_distance(f, &a, &b).unwrap().pass;
                    trials_run += 1;
                }
            }
            for _ in 0..prm.trials {
                let a = PointSet::from_codes(
                    d,
                    sample_subset(pts.codes(), rng.random_range(1..=pts.len()), &mut rng),
                );
                let b = PointSet::from_codes(
                    d,
                    sample_subset(&all, rng.random_range(1..=n as usize), &mut rng),
                );
                ok &= distance::theorem_paraboloid_distance(f, &a, &b).unwrap().pass;
                trials_run += 1;
            }
            out.push(c.done_exact(ok, trials_run as u128, trials_run as u128));
        } else {
            out.push(c.skip(format!(
                "needs (d = 4k-1, q = 3 mod 4) or even d >= 4, got d = {d}, q = {q}"
            )));
        }
    }

    {
        let jj = j.unwrap_or(Fq(1));
        let c = Check::start(format!("distance_sphere[q={q},d={d},j={}]", jj.0));
        let applies = !jj.is_zero()
            && if d % 2 == 1 {
                if f.quad_char(jj) == 1 {
                    d % 4 == 3 && q % 4 == 3
                } else {
                    d % 4 == 1 || (d % 4 == 3 && q % 4 == 1)
                }
            } else {
                d >= 4
            };
        if applies {
            let pts = Variety::sphere(d, jj).enumerate(f).unwrap();
            let mut rng = rng_for(prm.seed, 34);
            let mut ok = true;
            for _ in 0..prm.trials {
                let a = PointSet::from_codes(
                    d,
                    sample_subset(pts.codes(), rng.random_range(1..=pts.len()), &mut rng),
                );
                let b = PointSet::from_codes(
                    d,
                    sample_subset(&all, rng.random_range(1..=n as usize), &mut rng),
                );
                ok &= distance::theorem_sphere_distance(f, &a, &b, jj).unwrap().pass;
            }
            out.push(c.done_exact(ok, prm.trials as u128, prm.trials as u128));
        } else {
            out.push(c.skip(format!(
                "sphere theorem hypotheses fail at d = {d}, q = {q}, j = {}",
                jj.0
            )));
        }
    }

    {
        let c = Check::start(format!("distance_zero_sphere[q={q},d={d}]"));
        if d % 4 == 2 && q % 4 == 3 {
            let pts = Variety::sphere(d, Fq::ZERO).enumerate(f).unwrap();
            let mut rng = rng_for(prm.seed, 35);
            let mut ok = true;
            for _ in 0..prm.trials {
                let a = PointSet::from_codes(
                    d,
                    sample_subset(pts.codes(), rng.random_range(1..=pts.len()), &mut rng),
                );
                let b = PointSet::from_codes(
                    d,
                    sample_subset(&all, rng.random_range(1..=n as usize), &mut rng),
                );
                ok &= distance::theorem_zero_sphere_distance(f, &a, &b).unwrap().pass;
            }
            out.push(c.done_exact(ok, prm.trials as u128, prm.trials as u128));
        } else {
            out.push(c.skip(format!("needs d = 4k+2 and q = 3 mod 4, got d = {d}, q = {q}")));
        }
    }

    // boxed-statement spot checks at the stated thresholds
    {
        let c = Check::start(format!("distance_corollary_spot[q={q},d={d}]"));
        let mut attempted = false;
        let mut ok = true;
        let full = PointSet::from_codes(d, all.clone());
        if d % 4 == 3 && q % 4 == 3 {
            let a = Variety::paraboloid(d).enumerate(f).unwrap();
            if (a.len() as u128) * (full.len() as u128) >= 4 * (n as u128) * (q as u128).pow(0)
                && (a.len() as u128) * (full.len() as u128) >= 4 * (q as u128).pow(d as u32)
            {
                attempted = true;
                let profile = distance::distance_profile(f, &a, &full).unwrap();
                ok &= 3 * profile.delta_size() >= q as u64;
            }
        }
        if d % 2 == 0 && d >= 4 {
            let a = Variety::sphere(d, Fq(1)).enumerate(f).unwrap();
            if (a.len() as u128) * (full.len() as u128) >= 16 * (q as u128).pow(d as u32)
                && a.len() as u64 >= (q as u64).pow(d as u32 / 2)
            {
                attempted = true;
                let profile = distance::distance_profile(f, &a, &full).unwrap();
                ok &= 144 * profile.delta_size() >= q as u64;
            }
        }
        if attempted {
            out.push(c.done_exact(ok, u128::from(ok), 1));
        } else {
            out.push(c.skip("no boxed-statement instance meets its threshold here"));
        }
    }

    {
        let c = Check::start(format!("mattila_report[q={q},d={d}]"));
        let mut rng = rng_for(prm.seed, 36);
        let a = PointSet::from_codes(
            d,
            sample_subset(&all, (n as usize / 2).max(1), &mut rng),
        );
        let rep = distance::mattila(f, &a).unwrap();
        // reported, not asserted: the implicit-constant comparison
        let mut rec =
            Check::start(format!("mattila_report[q={q},d={d}]")).done(true, rep.m_value, rep.reported_floor, "report-only");
        rec.note = Some(format!("|Delta(A)| = {}", rep.delta_size));
        out.push(rec);
        let _ = c;
    }

    // sharpness constructions feasible at these parameters
    {
        let mut kinds: Vec<(String, SharpKind)> = Vec::new();
        kinds.push(("para".into(), SharpKind::Paraboloid));
        kinds.push(("sphere_square".into(), SharpKind::Sphere(Fq(1))));
        let g = f.primitive();
        kinds.push(("sphere_primitive".into(), SharpKind::Sphere(g)));
        kinds.push(("zero_sphere".into(), SharpKind::ZeroSphere));
        for (label, kind) in kinds {
            let c = Check::start(format!("sharpness[{label},q={q},d={d}]"));
            let r_size = 2.min(q as usize - 1);
            match distance::sharp_construction(f, kind, d, r_size) {
                Ok(built) => match distance::verify_sharp_construction(f, &built) {
                    Ok(profile) => out.push(c.done_exact(
                        profile.delta_size() == built.radii.len() as u64,
                        profile.delta_size() as u128,
                        built.radii.len() as u128,
                    )),
                    Err(e) => {
                        let mut rec = c.done_exact(false, 0, 1);
                        rec.note = Some(e.to_string());
                        out.push(rec);
                    }
                },
                Err(e) => out.push(c.skip(e.to_string())),
            }
        }
    }

    out
}

// -------------------------------------------------------------- extension --

pub struct ExtensionParams {
    pub trials: usize,
    pub seed: u64,
    pub c_test: f64,
}

impl Default for ExtensionParams {
    fn default() -> Self {
        ExtensionParams { trials: 40, seed: 0, c_test: 8.0 }
    }
}

pub fn suite_extension(
    f: &FiniteField,
    d: usize,
    j: Option<Fq>,
    prm: &ExtensionParams,
) -> Vec<CheckRecord> {
    let q = f.q();
    let mut out = Vec::new();
    if geometry::space_size(f, d).is_err() || d < 2 {
        out.push(Check::start(format!("extension_suite[q={q},d={d}]"))
            .skip("q^d exceeds the enumeration budget or d < 2"));
        return out;
    }

    {
        let c = Check::start(format!("critical_exponent_cases[d<=21]"));
        let mut ok = true;
        for dd in 2..=21u32 {
            if dd % 2 == 0 {
                ok &= extension::critical_r2(dd, (dd - 2) / 2)
                    .map(|r| r == num_rational_ratio(2 * dd as i64 + 4, dd as i64))
                    .unwrap_or(false);
            } else {
                ok &= extension::critical_r2(dd, (dd - 1) / 2)
                    .map(|r| r == num_rational_ratio(2 * dd as i64 + 2, dd as i64 - 1))
                    .unwrap_or(false);
                if dd % 4 == 3 {
                    ok &= extension::critical_r2(dd, (dd - 3) / 2)
                        .map(|r| r == num_rational_ratio(2 * dd as i64 + 6, dd as i64 + 1))
                        .unwrap_or(false);
                }
            }
        }
        out.push(c.done_exact(ok, u128::from(ok), 1));
    }

    {
        let c = Check::start(format!("necessary_region_corners[d={d}]"));
        let mut ok = true;
        for k in 0..=(d as u32).saturating_sub(2) {
            for (u, v) in extension::necessary_region_corners(d as u32, k) {
                let p = if u == num_rational_ratio(0, 1) {
                    LpExponent::Infinity
                } else {
                    LpExponent::Finite(u.recip())
                };
                let r = if v == num_rational_ratio(0, 1) {
                    LpExponent::Infinity
                } else {
                    LpExponent::Finite(v.recip())
                };
                ok &= extension::necessary_region(d as u32, k, p, r);
            }
        }
        out.push(c.done_exact(ok, u128::from(ok), 1));
    }

    let varieties: Vec<(String, Variety)> = {
        let mut vs = vec![("paraboloid".to_string(), Variety::paraboloid(d))];
        let radii: Vec<Fq> = match j {
            Some(j) if !j.is_zero() => vec![j],
            _ => vec![Fq(1), f.primitive()],
        };
        for r in radii {
            vs.push((format!("sphere_j{}", r.0), Variety::sphere(d, r)));
        }
        vs
    };

    let families = [
        Family::FullVariety,
        Family::SinglePoints,
        Family::ConstructedSubspaces,
        Family::RandomSubsets,
        Family::RandomComplex,
    ];

    for (label, v) in &varieties {
        let (pe, re) = extension::stein_tomas_pair(d as u32);
        let c = Check::start(format!("stein_tomas_probe[{label},q={q},d={d}]"));
        let mut max_ratio: f64 = 0.0;
        for fam in families {
            let trials = if fam == Family::RandomComplex { prm.trials / 2 } else { prm.trials };
            let rep = extension::ratio_sweep(f, v, pe, re, fam, trials.max(2), prm.seed).unwrap();
            max_ratio = max_ratio.max(rep.max_ratio);
        }
        out.push(c.done(max_ratio <= prm.c_test, max_ratio, prm.c_test, "C_test"));
    }

    // L^4 probes: interpolated pair for the paraboloid, the sharp pair for
    // spheres
    for (label, v) in &varieties {
        let (pe, re) = match v.kind {
            fflab::geometry::VarietyKind::Paraboloid => extension::l4_interpolation_pair(d as u32),
            fflab::geometry::VarietyKind::Sphere(_) => extension::sphere_l4_pair(d as u32),
        };
        let c = Check::start(format!("l4_probe[{label},q={q},d={d}]"));
        let mut max_ratio: f64 = 0.0;
        for fam in families {
            let trials = if fam == Family::RandomComplex { prm.trials / 2 } else { prm.trials };
            let rep = extension::ratio_sweep(f, v, pe, re, fam, trials.max(2), prm.seed ^ 1).unwrap();
            max_ratio = max_ratio.max(rep.max_ratio);
        }
        out.push(c.done(max_ratio <= prm.c_test, max_ratio, prm.c_test, "C_test"));
    }

    {
        let (pe, re) = extension::l2_probe_pair(d as u32);
        let c = Check::start(format!("l2_probe[paraboloid,q={q},d={d}]"));
        let v = Variety::paraboloid(d);
        let mut max_ratio: f64 = 0.0;
        for fam in families {
            let trials = if fam == Family::RandomComplex { prm.trials / 2 } else { prm.trials };
            let rep = extension::ratio_sweep(f, &v, pe, re, fam, trials.max(2), prm.seed ^ 2).unwrap();
            max_ratio = max_ratio.max(rep.max_ratio);
        }
        out.push(c.done(max_ratio <= prm.c_test, max_ratio, prm.c_test, "C_test"));
    }

    {
        let c = Check::start(format!("duality_witness[q={q},d={d}]"));
        let v = Variety::sphere(d, Fq(1));
        let pts = v.enumerate(f).unwrap();
        let (p, r) = (LpExponent::from_int(2), LpExponent::from_int(4));
        let mut ok = true;
        let mut dev: f64 = 0.0;
        if let Some(&a_code) = pts.codes().first() {
            let a = geometry::decode_point(f, a_code, d);
            let delta = ComplexGrid::delta(f, d, a_code).unwrap();
            let ext = extension::extension_ratio(f, &delta, &v, p, r).unwrap();
            let mut g = ComplexGrid::zeros(f, d).unwrap();
            for code in 0..g.len() {
                let mth = geometry::decode_point(f, code as u64, d);
                g.values[code] = f.add_char(geometry::dot(f, &mth, &a));
            }
            let rest =
                extension::dual_restriction_ratio(f, &g, &v, p.conjugate(), r.conjugate())
                    .unwrap();
            dev = rel_dev(ext, rest);
            ok &= dev <= REL_TOL;
        }
        // witness domination on random g
        let mut rng = rng_for(prm.seed, 40);
        let n = geometry::space_size(f, d).unwrap() as usize;
        for _ in 0..10 {
            let g = ComplexGrid {
                d,
                values: (0..n)
                    .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                    .collect(),
            };
            let rest =
                extension::dual_restriction_ratio(f, &g, &v, p.conjugate(), r.conjugate())
                    .unwrap();
            let w = extension::dual_witness_on_variety(f, &g, &v, p).unwrap();
            let ext = extension::extension_ratio(f, &w, &v, p, r).unwrap();
            ok &= rest <= ext + REL_TOL * ext.max(1.0);
        }
        out.push(c.done(ok, dev, REL_TOL, "1e-9 rel"));
    }

    out
}

fn num_rational_ratio(n: i64, d: i64) -> num_rational::Ratio<i64> {
    num_rational::Ratio::new(n, d)
}
