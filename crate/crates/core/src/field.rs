//! Arithmetic context for `F_q`, `q = p^ell` an odd prime power.
//!
//! Elements are encoded as integers in `[0, q)`: the base-`p` digits of the
//! encoding are the coefficients of the polynomial representative, so the
//! prime subfield occupies encodings `0..p`. Multiplication goes through
//! log/antilog tables keyed on a fixed primitive element; addition is a
//! single modular reduction on prime fields and digit-wise otherwise.
//!
//! Construction is deterministic: the modulus is the lexicographically-first
//! monic irreducible polynomial of degree `ell` (ordered by the encoding of
//! its non-leading coefficients) and the primitive element is the smallest
//! encoding of multiplicative order `q - 1`.

use crate::error::{Error, Result};
use crate::numeric;
use num_complex::Complex64;
use std::f64::consts::TAU;

/// Element of `F_q`, stored as its integer encoding in `[0, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fq(pub u32);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Immutable arithmetic context for one finite field.
pub struct FiniteField {
    p: u32,
    ell: u32,
    q: u32,
    /// Monic irreducible modulus, coefficients `c_0 .. c_ell` with `c_ell = 1`.
    /// For prime fields this is the linear polynomial `x`.
    modulus: Vec<u32>,
    primitive: Fq,
    /// `exp[k] = g^k` for `k in [0, 2(q-1))` so products need no reduction.
    exp: Vec<u32>,
    /// `log[a]` for `a != 0`; `log[0]` is unused.
    log: Vec<u32>,
    neg: Vec<u32>,
    sq: Vec<u32>,
    /// `Tr(x) = x + x^p + ... + x^{p^(ell-1)}` as an element of the prime subfield.
    trace: Vec<u32>,
    /// Quadratic character: 0 at 0, +1 on nonzero squares, -1 on non-squares.
    eta: Vec<i8>,
    /// `chi[x] = exp(2*pi*i*Tr(x)/p)`.
    chi: Vec<Complex64>,
}

impl std::fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteField")
            .field("p", &self.p)
            .field("ell", &self.ell)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .field("primitive", &self.primitive)
            .finish_non_exhaustive()
    }
}

const Q_LIMIT: u32 = 4096;

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// -- dense polynomial helpers over F_p (coefficient vectors, c[0] constant) --

fn poly_trim(c: &mut Vec<u32>) {
    while c.len() > 1 && *c.last().unwrap() == 0 {
        c.pop();
    }
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    poly_trim(&mut out);
    out
}

/// Remainder of `a` modulo monic `m`.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    while r.len() - 1 >= dm && !(r.len() == 1 && r[0] == 0) {
        let shift = r.len() - 1 - dm;
        let lead = *r.last().unwrap();
        for i in 0..m.len() {
            let t = (lead * m[i]) % p;
            let idx = i + shift;
            r[idx] = (r[idx] + p - t) % p;
        }
        poly_trim(&mut r);
        if r.len() - 1 < dm {
            break;
        }
    }
    r
}

fn poly_is_zero(a: &[u32]) -> bool {
    a.iter().all(|&c| c == 0)
}

/// Irreducibility by trial division: `f` monic of degree `n >= 2` is
/// irreducible over `F_p` iff no monic polynomial of degree `1..=n/2`
/// divides it. Degrees here never exceed 12, so the scan is trivial.
fn poly_irreducible(f: &[u32], p: u32) -> bool {
    let n = f.len() - 1;
    for deg in 1..=(n / 2) {
        let count = (p as u64).pow(deg as u32);
        for enc in 0..count {
            let mut g = vec![0u32; deg + 1];
            let mut e = enc;
            for c in g.iter_mut().take(deg) {
                *c = (e % p as u64) as u32;
                e /= p as u64;
            }
            g[deg] = 1;
            if poly_is_zero(&poly_rem(f, &g, p)) {
                return false;
            }
        }
    }
    true
}

impl FiniteField {
    /// Builds the field `F_{p^ell}`.
    ///
    /// Fails with `EvenCharacteristic` for `p = 2`, `NonPrime` for composite
    /// `p`, and `SizeLimitExceeded` for `p^ell > 4096`.
    pub fn new(p: u64, ell: u32) -> Result<FiniteField> {
        if p == 2 {
            return Err(Error::EvenCharacteristic);
        }
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        if ell == 0 {
            return Err(Error::BadRange("extension degree must be >= 1".into()));
        }
        let q = p
            .checked_pow(ell)
            .filter(|&q| q <= Q_LIMIT as u64)
            .ok_or_else(|| Error::SizeLimitExceeded(format!("{p}^{ell} > {Q_LIMIT}")))?;
        let p = p as u32;
        let q = q as u32;

        let modulus = if ell == 1 {
            vec![0, 1]
        } else {
            Self::first_irreducible(p, ell)
        };

        let mut field = FiniteField {
            p,
            ell,
            q,
            modulus,
            primitive: Fq(0),
            exp: Vec::new(),
            log: Vec::new(),
            neg: Vec::new(),
            sq: Vec::new(),
            trace: Vec::new(),
            eta: Vec::new(),
            chi: Vec::new(),
        };
        field.build_tables();
        Ok(field)
    }

    fn first_irreducible(p: u32, ell: u32) -> Vec<u32> {
        let count = (p as u64).pow(ell);
        for enc in 0..count {
            let mut f = vec![0u32; ell as usize + 1];
            let mut e = enc;
            for c in f.iter_mut().take(ell as usize) {
                *c = (e % p as u64) as u32;
                e /= p as u64;
            }
            f[ell as usize] = 1;
            if poly_irreducible(&f, p) {
                return f;
            }
        }
        unreachable!("an irreducible polynomial of every degree exists over F_p")
    }

    fn digits(&self, a: u32) -> Vec<u32> {
        let mut out = vec![0u32; self.ell as usize];
        let mut a = a;
        for d in out.iter_mut() {
            *d = a % self.p;
            a /= self.p;
        }
        out
    }

    fn from_poly(&self, c: &[u32]) -> u32 {
        let mut acc = 0u32;
        for &d in c.iter().rev() {
            acc = acc * self.p + d % self.p;
        }
        acc
    }

    /// Product computed directly from the polynomial representatives; used
    /// only while bootstrapping the log tables.
    fn raw_mul(&self, a: u32, b: u32) -> u32 {
        let pa = self.digits(a);
        let pb = self.digits(b);
        let prod = poly_mul(&pa, &pb, self.p);
        let rem = poly_rem(&prod, &self.modulus, self.p);
        let mut c = rem;
        c.resize(self.ell as usize, 0);
        self.from_poly(&c)
    }

    fn raw_pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.raw_mul(acc, base);
            }
            base = self.raw_mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn build_tables(&mut self) {
        let q = self.q;
        let qm1 = q - 1;

        // Smallest encoding whose multiplicative order is exactly q - 1.
        let factors = prime_factors(qm1);
        let mut primitive = 0;
        for cand in 2..q {
            if factors.iter().all(|&r| self.raw_pow(cand, (qm1 / r) as u64) != 1) {
                primitive = cand;
                break;
            }
        }
        assert!(primitive != 0 || q == 2, "multiplicative group is cyclic");
        self.primitive = Fq(primitive);

        let mut exp = vec![0u32; 2 * qm1 as usize];
        let mut log = vec![0u32; q as usize];
        let mut acc = 1u32;
        for k in 0..qm1 {
            exp[k as usize] = acc;
            exp[(k + qm1) as usize] = acc;
            log[acc as usize] = k;
            acc = self.raw_mul(acc, primitive);
        }
        debug_assert_eq!(acc, 1, "primitive element must have order q - 1");
        self.exp = exp;
        self.log = log;

        self.neg = (0..q)
            .map(|a| {
                let mut d = self.digits(a);
                for c in d.iter_mut() {
                    *c = (self.p - *c) % self.p;
                }
                self.from_poly(&d)
            })
            .collect();

        self.trace = (0..q)
            .map(|a| {
                let mut t = 0u32;
                let mut frob = a;
                for _ in 0..self.ell {
                    t = self.add_raw(t, frob);
                    frob = self.raw_pow(frob, self.p as u64);
                }
                debug_assert!(t < self.p, "trace lands in the prime subfield");
                t
            })
            .collect();

        let mut eta = vec![0i8; q as usize];
        for k in 0..qm1 {
            eta[self.exp[k as usize] as usize] = if k % 2 == 0 { 1 } else { -1 };
        }
        self.eta = eta;

        let roots: Vec<Complex64> = (0..self.p)
            .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / self.p as f64))
            .collect();
        self.chi = (0..q).map(|a| roots[self.trace[a as usize] as usize]).collect();

        self.sq = (0..q).map(|a| self.raw_mul(a, a)).collect();
    }

    fn add_raw(&self, a: u32, b: u32) -> u32 {
        if self.ell == 1 {
            let s = a + b;
            return if s >= self.q { s - self.q } else { s };
        }
        let mut out = 0u32;
        let mut pw = 1u32;
        let (mut a, mut b) = (a, b);
        for _ in 0..self.ell {
            let s = (a % self.p + b % self.p) % self.p;
            out += s * pw;
            pw *= self.p;
            a /= self.p;
            b /= self.p;
        }
        out
    }

    // -- accessors ---------------------------------------------------------

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients `c_0 .. c_ell` (monic). `x` itself for prime fields.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The fixed generator of `F_q^*` (smallest encoding of order `q - 1`).
    pub fn primitive(&self) -> Fq {
        self.primitive
    }

    pub fn elem(&self, k: u32) -> Fq {
        assert!(k < self.q, "encoding {k} out of range for q = {}", self.q);
        Fq(k)
    }

    /// Embeds an integer via the prime subfield.
    pub fn int(&self, n: i64) -> Fq {
        Fq((n.rem_euclid(self.p as i64)) as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.q).map(Fq)
    }

    pub fn units(&self) -> impl Iterator<Item = Fq> {
        (1..self.q).map(Fq)
    }

    // -- arithmetic --------------------------------------------------------

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        if self.ell == 1 {
            let s = a.0 + b.0;
            Fq(if s >= self.q { s - self.q } else { s })
        } else {
            Fq(self.add_raw(a.0, b.0))
        }
    }

    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        Fq(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if a.0 == 0 || b.0 == 0 {
            return Fq(0);
        }
        Fq(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    #[inline]
    pub fn square(&self, a: Fq) -> Fq {
        Fq(self.sq[a.0 as usize])
    }

    /// Multiplicative inverse; panics on zero.
    #[inline]
    pub fn inv(&self, a: Fq) -> Fq {
        assert!(a.0 != 0, "inverse of zero");
        let qm1 = self.q - 1;
        let l = self.log[a.0 as usize];
        Fq(self.exp[((qm1 - l) % qm1) as usize])
    }

    #[inline]
    pub fn div(&self, a: Fq, b: Fq) -> Fq {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Fq, e: i64) -> Fq {
        if a.0 == 0 {
            assert!(e > 0, "0 to a non-positive power");
            return Fq(0);
        }
        let qm1 = (self.q - 1) as i64;
        let k = (self.log[a.0 as usize] as i64 * e).rem_euclid(qm1);
        Fq(self.exp[k as usize])
    }

    /// Smallest square root by exhaustive scan, `None` for non-squares.
    pub fn sqrt(&self, a: Fq) -> Option<Fq> {
        (0..self.q).map(Fq).find(|&s| self.square(s) == a)
    }

    pub fn mult_order(&self, a: Fq) -> u32 {
        assert!(a.0 != 0);
        let qm1 = self.q - 1;
        let l = self.log[a.0 as usize];
        qm1 / num_integer_gcd(l, qm1)
    }

    pub fn is_primitive(&self, a: Fq) -> bool {
        !a.is_zero() && self.mult_order(a) == self.q - 1
    }

    // -- characters and Gauss sums ------------------------------------------

    /// Trace into the prime subfield.
    pub fn trace(&self, a: Fq) -> Fq {
        Fq(self.trace[a.0 as usize])
    }

    /// Additive character `chi(x) = exp(2*pi*i*Tr(x)/p)`.
    #[inline]
    pub fn add_char(&self, a: Fq) -> Complex64 {
        self.chi[a.0 as usize]
    }

    /// Quadratic character: 0, +1 on nonzero squares, -1 otherwise.
    #[inline]
    pub fn quad_char(&self, a: Fq) -> i32 {
        self.eta[a.0 as usize] as i32
    }

    /// True for zero and for nonzero squares.
    pub fn is_square(&self, a: Fq) -> bool {
        self.eta[a.0 as usize] >= 0
    }

    /// `G_1 = sum_{s != 0} eta(s) chi(s)` by direct summation.
    pub fn gauss_sum(&self) -> Complex64 {
        numeric::par_sum_c64(self.q as usize - 1, |i| {
            let s = Fq(i as u32 + 1);
            self.quad_char(s) as f64 * self.add_char(s)
        })
    }

    /// Closed form of the standard Gauss sum:
    /// `(-1)^(ell-1) sqrt(q)` for `p = 1 mod 4`,
    /// `(-1)^(ell-1) i^ell sqrt(q)` for `p = 3 mod 4`.
    pub fn gauss_sum_closed(&self) -> Complex64 {
        let sq = (self.q as f64).sqrt();
        let sign = if self.ell % 2 == 1 { 1.0 } else { -1.0 };
        if self.p % 4 == 1 {
            Complex64::new(sign * sq, 0.0)
        } else {
            let i_pow = match self.ell % 4 {
                0 => Complex64::new(1.0, 0.0),
                1 => Complex64::new(0.0, 1.0),
                2 => Complex64::new(-1.0, 0.0),
                _ => Complex64::new(0.0, -1.0),
            };
            sign * sq * i_pow
        }
    }

    /// `sum_s chi(u s^2 + v s)` by direct summation; requires `u != 0`.
    pub fn gauss_quadratic(&self, u: Fq, v: Fq) -> Result<Complex64> {
        if u.is_zero() {
            return Err(Error::ZeroLeadingCoefficient);
        }
        Ok(numeric::par_sum_c64(self.q as usize, |i| {
            let s = Fq(i as u32);
            self.add_char(self.add(self.mul(u, self.square(s)), self.mul(v, s)))
        }))
    }

    /// Completion-of-the-square closed form `eta(u) G_1 chi(v^2 / (-4u))`.
    pub fn gauss_quadratic_closed(&self, u: Fq, v: Fq) -> Result<Complex64> {
        if u.is_zero() {
            return Err(Error::ZeroLeadingCoefficient);
        }
        let m4u = self.neg(self.mul(self.int(4), u));
        let arg = self.div(self.square(v), m4u);
        Ok(self.quad_char(u) as f64 * self.gauss_sum() * self.add_char(arg))
    }
}

fn num_integer_gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::cclose;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn odd_prime_powers(limit: u32) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        for p in (3..=limit as u64).step_by(2) {
            if !is_prime(p) {
                continue;
            }
            let mut ell = 1;
            while p.pow(ell) <= limit as u64 {
                out.push((p, ell));
                ell += 1;
            }
        }
        out.sort_by_key(|&(p, ell)| p.pow(ell));
        out
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(FiniteField::new(2, 1).unwrap_err(), Error::EvenCharacteristic);
        assert_eq!(FiniteField::new(9, 1).unwrap_err(), Error::NonPrime(9));
        assert!(matches!(
            FiniteField::new(3, 9).unwrap_err(),
            Error::SizeLimitExceeded(_)
        ));
    }

    #[test]
    fn small_prime_field() {
        let f = FiniteField::new(3, 1).unwrap();
        assert_eq!(f.q(), 3);
        assert_eq!(f.trace(Fq(2)), Fq(2)); // identity on the prime field
    }

    #[test]
    fn f9_construction_is_deterministic() {
        let f = FiniteField::new(3, 2).unwrap();
        assert_eq!(f.q(), 9);
        // First irreducible quadratic over F_3 in encoding order: x^2 + 1.
        assert_eq!(f.modulus(), &[1, 0, 1]);
        // x + 1 (encoding 4) is the smallest generator of F_9^*.
        assert_eq!(f.primitive(), Fq(4));
        assert_eq!(f.trace(Fq(0)), Fq(0));
        // Tr(1) = 1 + 1^3 = 2 over F_3.
        assert_eq!(f.trace(Fq(1)), Fq(2));
    }

    #[test]
    fn field_axioms_on_random_pairs() {
        for (p, ell) in [(3, 1), (3, 2), (5, 1), (7, 2), (3, 4)] {
            let f = FiniteField::new(p, ell).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(7 * p + ell as u64);
            for _ in 0..200 {
                let a = Fq(rng.random_range(0..f.q()));
                let b = Fq(rng.random_range(0..f.q()));
                let c = Fq(rng.random_range(0..f.q()));
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                assert_eq!(f.add(a, f.neg(a)), Fq::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a)), Fq::ONE);
                    assert_eq!(f.pow(a, (f.q() - 2) as i64), f.inv(a));
                }
            }
        }
    }

    #[test]
    fn additive_character_orthogonality() {
        for (p, ell) in [(3, 1), (5, 1), (3, 2), (7, 1), (11, 1)] {
            let f = FiniteField::new(p, ell).unwrap();
            for m in f.elements() {
                let s: Complex64 = f.elements().map(|x| f.add_char(f.mul(m, x))).sum();
                let expect = if m.is_zero() { f.q() as f64 } else { 0.0 };
                assert!(
                    cclose(s, Complex64::new(expect, 0.0), f.q() as f64),
                    "orthogonality failed at q={} m={:?}: {s}",
                    f.q(),
                    m
                );
            }
        }
    }

    #[test]
    fn characters_are_multiplicative_homomorphisms() {
        for (p, ell) in [(5, 1), (3, 2), (7, 1), (13, 1)] {
            let f = FiniteField::new(p, ell).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(p + 100 * ell as u64);
            for _ in 0..100 {
                let a = Fq(rng.random_range(0..f.q()));
                let b = Fq(rng.random_range(0..f.q()));
                // chi(a + b) = chi(a) chi(b), |chi| = 1
                let lhs = f.add_char(f.add(a, b));
                let rhs = f.add_char(a) * f.add_char(b);
                assert!((lhs - rhs).norm() <= 1e-12);
                assert!((f.add_char(a).norm() - 1.0).abs() <= 1e-12);
                // eta multiplicative (exactly), eta(x) = eta(1/x)
                assert_eq!(f.quad_char(f.mul(a, b)), f.quad_char(a) * f.quad_char(b));
                if !a.is_zero() {
                    assert_eq!(f.quad_char(a), f.quad_char(f.inv(a)));
                }
            }
        }
    }

    #[test]
    fn quad_char_at_minus_one_tracks_q_mod_4() {
        for (p, ell) in odd_prime_powers(121) {
            let f = FiniteField::new(p, ell).unwrap();
            let expected = if f.q() % 4 == 1 { 1 } else { -1 };
            assert_eq!(f.quad_char(f.int(-1)), expected, "q = {}", f.q());
        }
    }

    #[test]
    fn frozen_small_gauss_sums() {
        // q = 5: sqrt(5); q = 3: i*sqrt(3); q = 9: +3 (real).
        let f5 = FiniteField::new(5, 1).unwrap();
        assert!(cclose(f5.gauss_sum(), Complex64::new(5f64.sqrt(), 0.0), 3.0));
        let f3 = FiniteField::new(3, 1).unwrap();
        assert!(cclose(f3.gauss_sum(), Complex64::new(0.0, 3f64.sqrt()), 3.0));
        let f9 = FiniteField::new(3, 2).unwrap();
        assert!(cclose(f9.gauss_sum(), Complex64::new(3.0, 0.0), 3.0));
    }

    #[test]
    fn gauss_sum_matches_closed_form_up_to_121() {
        for (p, ell) in odd_prime_powers(121) {
            let f = FiniteField::new(p, ell).unwrap();
            let direct = f.gauss_sum();
            let closed = f.gauss_sum_closed();
            assert!(
                cclose(direct, closed, (f.q() as f64).sqrt()),
                "q = {}: direct {direct} closed {closed}",
                f.q()
            );
        }
    }

    #[test]
    fn gauss_quadratic_matches_completion_of_square() {
        for (p, ell) in [(3, 1), (5, 1), (7, 1), (3, 2), (13, 1)] {
            let f = FiniteField::new(p, ell).unwrap();
            for u in f.units() {
                for v in f.elements() {
                    let direct = f.gauss_quadratic(u, v).unwrap();
                    let closed = f.gauss_quadratic_closed(u, v).unwrap();
                    assert!(
                        cclose(direct, closed, (f.q() as f64).sqrt()),
                        "q={} u={u:?} v={v:?}",
                        f.q()
                    );
                }
            }
        }
        let f = FiniteField::new(5, 1).unwrap();
        assert_eq!(f.gauss_quadratic(Fq::ZERO, Fq::ONE).unwrap_err(), Error::ZeroLeadingCoefficient);
        // u = 1, v = 0 reduces to eta(1) G_1 = sqrt(5).
        assert!(cclose(
            f.gauss_quadratic(Fq::ONE, Fq::ZERO).unwrap(),
            Complex64::new(5f64.sqrt(), 0.0),
            3.0
        ));
    }

    #[test]
    fn gauss_power_sign_identity() {
        // eta(-1) G_1^{d+1} = -q^{(d+1)/2} for d = 4k-1 with q = 3 mod 4,
        // and +q^{(d+1)/2} for d = 4k+1 or (d = 4k-1, q = 1 mod 4).
        for (p, ell) in odd_prime_powers(49) {
            let f = FiniteField::new(p, ell).unwrap();
            let g = f.gauss_sum();
            let eta_m1 = f.quad_char(f.int(-1)) as f64;
            for d in [3u32, 5, 7, 9] {
                let lhs = eta_m1 * g.powu(d + 1);
                let mag = (f.q() as f64).powi(((d + 1) / 2) as i32);
                let sign = if d % 4 == 3 && f.q() % 4 == 3 { -1.0 } else { 1.0 };
                assert!(
                    cclose(lhs, Complex64::new(sign * mag, 0.0), mag),
                    "q={} d={d}: {lhs} vs {}",
                    f.q(),
                    sign * mag
                );
            }
        }
    }

    #[test]
    fn basic_gauss_reductions() {
        // sum_s chi(u s^2) = eta(u) G_1 and sum_{r!=0} eta(v r) chi(w r) = eta(v w) G_1.
        for (p, ell) in [(3, 1), (5, 1), (7, 1), (3, 2), (11, 1), (13, 1)] {
            let f = FiniteField::new(p, ell).unwrap();
            let g = f.gauss_sum();
            let scale = (f.q() as f64).sqrt();
            for u in f.units() {
                let s1: Complex64 = f
                    .elements()
                    .map(|s| f.add_char(f.mul(u, f.square(s))))
                    .sum();
                assert!(cclose(s1, f.quad_char(u) as f64 * g, scale));
            }
            for v in f.units() {
                for w in f.units() {
                    let s2: Complex64 = f
                        .units()
                        .map(|r| f.quad_char(f.mul(v, r)) as f64 * f.add_char(f.mul(w, r)))
                        .sum();
                    assert!(cclose(s2, f.quad_char(f.mul(v, w)) as f64 * g, scale));
                }
            }
        }
    }

    #[test]
    fn sqrt_finds_smallest_root() {
        let f = FiniteField::new(13, 1).unwrap();
        for a in f.elements() {
            match f.sqrt(a) {
                Some(r) => {
                    assert_eq!(f.square(r), a);
                    // no smaller root
                    assert!((0..r.0).all(|s| f.square(Fq(s)) != a));
                }
                None => assert_eq!(f.quad_char(a), -1),
            }
        }
    }

    #[test]
    fn primitive_element_is_smallest_nonsquare_generator() {
        for (p, ell) in odd_prime_powers(121) {
            let f = FiniteField::new(p, ell).unwrap();
            let g = f.primitive();
            assert_eq!(f.mult_order(g), f.q() - 1);
            assert_eq!(f.quad_char(g), -1, "a generator is never a square");
            assert!((1..g.0).all(|c| f.mult_order(Fq(c)) != f.q() - 1));
        }
    }

    #[test]
    fn trace_is_additive_and_into_prime_field() {
        let f = FiniteField::new(3, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let a = Fq(rng.random_range(0..f.q()));
            let b = Fq(rng.random_range(0..f.q()));
            assert!(f.trace(a).0 < f.p());
            assert_eq!(f.trace(f.add(a, b)), f.add(f.trace(a), f.trace(b)));
        }
    }

    #[test]
    fn orthogonality_scaled_bound() {
        // |sum_x chi(m x) - q [m = 0]| <= 1e-9 q for every m.
        for q in [3u64, 9, 25, 49, 121] {
            let (p, ell) = match q {
                9 => (3, 2),
                25 => (5, 2),
                49 => (7, 2),
                121 => (11, 2),
                _ => (q, 1),
            };
            let f = FiniteField::new(p, ell).unwrap();
            for m in f.elements() {
                let s: Complex64 = f.elements().map(|x| f.add_char(f.mul(m, x))).sum();
                let target = if m.is_zero() { f.q() as f64 } else { 0.0 };
                assert!((s - target).norm() <= 1e-9 * f.q() as f64);
            }
        }
        let f = FiniteField::new(5, 1).unwrap();
        let s: Complex64 = f.elements().map(|x| f.add_char(f.mul(Fq(2), x))).sum();
        assert!(s.norm() <= 1e-9);
    }
}
