//! Univariate polynomials over a field, as coefficient vectors from the
//! constant term upwards, plus the root finding used by the idempotent
//! splitters.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::field::{Field, PrimeField, Rationals};

/// Largest integer magnitude whose divisors are enumerated for the rational
/// root test.
const DIVISOR_BOUND: u64 = 1 << 40;

pub type Poly<F> = Vec<<F as Field>::Elem>;

pub fn trim<F: Field>(f: &F, p: &mut Poly<F>) {
    while p.last().is_some_and(|c| f.is_zero(c)) {
        p.pop();
    }
}

/// Degree, with `None` for the zero polynomial.
pub fn degree<F: Field>(f: &F, p: &[F::Elem]) -> Option<usize> {
    p.iter().rposition(|c| !f.is_zero(c))
}

pub fn add<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F> {
    let n = a.len().max(b.len());
    let mut out: Poly<F> = (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => f.add(x, y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => f.zero(),
        })
        .collect();
    trim(f, &mut out);
    out
}

pub fn sub<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F> {
    let nb: Poly<F> = b.iter().map(|x| f.neg(x)).collect();
    add(f, a, &nb)
}

pub fn mul<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            f.mul_add_assign(&mut out[i + j], x, y);
        }
    }
    trim(f, &mut out);
    out
}

/// Quotient and remainder; panics on division by zero.
pub fn divrem<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> (Poly<F>, Poly<F>) {
    let db = degree(f, b).expect("division by zero polynomial");
    let lead_inv = f.inv(&b[db]).expect("nonzero leading coefficient");
    let mut r: Poly<F> = a.to_vec();
    trim(f, &mut r);
    let mut qt = vec![f.zero(); r.len().saturating_sub(db).max(1)];
    while let Some(dr) = degree(f, &r) {
        if dr < db {
            break;
        }
        let c = f.mul(&r[dr], &lead_inv);
        let shift = dr - db;
        for (i, y) in b.iter().enumerate().take(db + 1) {
            let t = f.mul(&c, y);
            r[i + shift] = f.sub(&r[i + shift], &t);
        }
        qt[shift] = c;
        trim(f, &mut r);
    }
    trim(f, &mut qt);
    (qt, r)
}

pub fn monic<F: Field>(f: &F, p: &[F::Elem]) -> Poly<F> {
    match degree(f, p) {
        None => Vec::new(),
        Some(d) => {
            let inv = f.inv(&p[d]).expect("nonzero");
            p[..=d].iter().map(|c| f.mul(c, &inv)).collect()
        }
    }
}

pub fn gcd<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(f, &mut x);
    trim(f, &mut y);
    while !y.is_empty() {
        let (_, r) = divrem(f, &x, &y);
        x = y;
        y = r;
    }
    monic(f, &x)
}

/// `(g, s, t)` with `s a + t b = g = gcd(a, b)` monic.
pub fn ext_gcd<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> (Poly<F>, Poly<F>, Poly<F>) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    trim(f, &mut r0);
    trim(f, &mut r1);
    let (mut s0, mut s1) = (vec![f.one()], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![f.one()]);
    while !r1.is_empty() {
        let (qt, r) = divrem(f, &r0, &r1);
        let s = sub(f, &s0, &mul(f, &qt, &s1));
        let t = sub(f, &t0, &mul(f, &qt, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    let Some(d) = degree(f, &r0) else {
        return (Vec::new(), s0, t0);
    };
    let inv = f.inv(&r0[d]).expect("nonzero");
    let sc = |p: &[F::Elem]| -> Poly<F> {
        let mut out: Poly<F> = p.iter().map(|c| f.mul(c, &inv)).collect();
        trim(f, &mut out);
        out
    };
    (sc(&r0), sc(&s0), sc(&t0))
}

pub fn eval<F: Field>(f: &F, p: &[F::Elem], x: &F::Elem) -> F::Elem {
    p.iter().rev().fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
}

pub fn derivative<F: Field>(f: &F, p: &[F::Elem]) -> Poly<F> {
    let mut out: Poly<F> = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| f.mul(&f.from_i64(i as i64), c))
        .collect();
    trim(f, &mut out);
    out
}

/// `x - a`
pub fn linear<F: Field>(f: &F, a: &F::Elem) -> Poly<F> {
    vec![f.neg(a), f.one()]
}

/// Multiplicity of the root `a` in `p`, and the cofactor.
pub fn split_root<F: Field>(f: &F, p: &[F::Elem], a: &F::Elem) -> (usize, Poly<F>) {
    let lin = linear(f, a);
    let mut rest = p.to_vec();
    trim(f, &mut rest);
    let mut k = 0;
    loop {
        let (qt, r) = divrem(f, &rest, &lin);
        if !r.is_empty() || degree(f, &rest).unwrap_or(0) == 0 {
            return (k, rest);
        }
        rest = qt;
        k += 1;
    }
}

/// Root finding in the ground field, implemented per field.
pub trait RootFinder: Field {
    /// Distinct roots of `p` in the field (possibly incomplete if a
    /// coefficient is too large to factor), in canonical order.
    fn roots<R: Rng + ?Sized>(&self, p: &[Self::Elem], rng: &mut R) -> Vec<Self::Elem>;
}

impl RootFinder for Rationals {
    fn roots<R: Rng + ?Sized>(&self, p: &[BigRational], _rng: &mut R) -> Vec<BigRational> {
        let f = *self;
        let mut p = p.to_vec();
        trim(&f, &mut p);
        let mut out = Vec::new();
        if p.len() <= 1 {
            return out;
        }
        // Strip the zero root first so the constant term is nonzero.
        if p[0].is_zero() {
            out.push(BigRational::zero());
            let k = p.iter().position(|c| !c.is_zero()).unwrap();
            p.drain(..k);
        }
        if p.len() <= 1 {
            return out;
        }
        // Clear denominators.
        let lcm = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = p.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
        let (Some(lead), Some(constant)) = (small_divisors(ints.last().unwrap()), small_divisors(&ints[0])) else {
            return out;
        };
        for d in &constant {
            for c in &lead {
                for sign in [1i64, -1] {
                    let cand = BigRational::new(BigInt::from(sign) * BigInt::from(*d), BigInt::from(*c));
                    if eval(&f, &p, &cand).is_zero() && !out.contains(&cand) {
                        out.push(cand);
                    }
                }
            }
        }
        out.sort();
        out
    }
}

fn small_divisors(n: &BigInt) -> Option<Vec<u64>> {
    let m = n.abs().to_u64()?;
    if m == 0 || m > DIVISOR_BOUND {
        return None;
    }
    let mut ds = Vec::new();
    let mut d = 1u64;
    while d * d <= m {
        if m % d == 0 {
            ds.push(d);
            if d != m / d {
                ds.push(m / d);
            }
        }
        d += 1;
    }
    ds.sort_unstable();
    Some(ds)
}

impl RootFinder for PrimeField {
    fn roots<R: Rng + ?Sized>(&self, p: &[u64], rng: &mut R) -> Vec<u64> {
        let f = *self;
        let m = f.modulus();
        let mut p = p.to_vec();
        trim(&f, &mut p);
        if p.len() <= 1 {
            return Vec::new();
        }
        if m <= 1024 {
            return (0..m).filter(|a| eval(&f, &p, a) == 0).collect();
        }
        // g = gcd(p, x^m - x) is the product of the distinct linear factors.
        let xm = powmod(&f, &[0, 1], m, &p);
        let g = gcd(&f, &p, &sub(&f, &xm, &[0, 1]));
        let mut out = Vec::new();
        equal_degree_roots(&f, &g, rng, &mut out);
        out.sort_unstable();
        out
    }
}

fn equal_degree_roots<R: Rng + ?Sized>(f: &PrimeField, g: &[u64], rng: &mut R, out: &mut Vec<u64>) {
    match degree(f, g) {
        None | Some(0) => {}
        Some(1) => {
            let g = monic(f, g);
            out.push(f.neg(&g[0]));
        }
        Some(_) => loop {
            // gcd(g, (x + delta)^((p-1)/2) - 1) splits g with probability ~1/2.
            let delta = rng.gen_range(0..f.modulus());
            let h = powmod(f, &[delta, 1], (f.modulus() - 1) / 2, g);
            let d = gcd(f, g, &sub(f, &h, &[1]));
            let dd = degree(f, &d).unwrap_or(0);
            if dd > 0 && dd < degree(f, g).unwrap() {
                let (other, _) = divrem(f, g, &d);
                equal_degree_roots(f, &d, rng, out);
                equal_degree_roots(f, &other, rng, out);
                return;
            }
        },
    }
}

/// `base^e mod modulus`
pub fn powmod<F: Field>(f: &F, base: &[F::Elem], mut e: u64, modulus: &[F::Elem]) -> Poly<F> {
    let mut acc = vec![f.one()];
    let (_, mut b) = divrem(f, base, modulus);
    while e > 0 {
        if e & 1 == 1 {
            acc = divrem(f, &mul(f, &acc, &b), modulus).1;
        }
        b = divrem(f, &mul(f, &b, &b), modulus).1;
        e >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn rational_roots_of_product() {
        // (x - 1/2)(x + 3) x^2 (x^2 + 1)
        let f = Rationals;
        let p = mul(&f, &linear(&f, &BigRational::new(1.into(), 2.into())), &linear(&f, &q(-3)));
        let p = mul(&f, &p, &[q(0), q(0), q(1)]);
        let p = mul(&f, &p, &[q(1), q(0), q(1)]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = f.roots(&p, &mut rng);
        assert_eq!(r, vec![q(-3), q(0), BigRational::new(1.into(), 2.into())]);
        assert_eq!(split_root(&f, &p, &q(0)).0, 2);
    }

    #[test]
    fn prime_field_roots_large_modulus() {
        let f = PrimeField::new(1_000_003).unwrap();
        let mut p = vec![1];
        for a in [5u64, 17, 999_999] {
            p = mul(&f, &p, &linear(&f, &a));
        }
        p = mul(&f, &p, &[1, 0, 1]); // x^2 + 1 has no roots since p = 3 mod 4
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert_eq!(f.roots(&p, &mut rng), vec![5, 17, 999_999]);
    }

    #[test]
    fn ext_gcd_bezout() {
        let f = Rationals;
        let a = mul(&f, &linear(&f, &q(1)), &linear(&f, &q(2)));
        let b = linear(&f, &q(3));
        let (g, s, t) = ext_gcd(&f, &a, &b);
        assert_eq!(g, vec![q(1)]);
        let lhs = add(&f, &mul(&f, &s, &a), &mul(&f, &t, &b));
        assert_eq!(lhs, vec![q(1)]);
    }
}
