//! Exact arithmetic with roots of unity and cyclotomic numbers.
//!
//! Root numbers and Gauss sums in this crate are computed exactly. Two
//! representations cooperate:
//!
//! * [`Rotation`] — an element of Q/Z, i.e. the root of unity `exp(2πi·q)`
//!   itself. Character values are rotations; multiplying values adds
//!   rotations.
//! * [`CycElem`] — an element of the cyclotomic field Q(ζ_n) in the power
//!   basis `1, ζ, …, ζ^{φ(n)−1}`, reduced modulo the n-th cyclotomic
//!   polynomial. Gauss sums are accumulated in the group ring Z[μ_n] and
//!   collapsed into this basis, so equality tests are exact.
//!
//! Floating-point embeddings exist only for report output.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::fmt;

/// A root of unity written additively: the class of `num/den` in Q/Z.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rotation {
    num: u64,
    den: u64,
}

impl Rotation {
    pub fn new(num: i64, den: u64) -> Rotation {
        assert!(den > 0);
        let d = den as i64;
        let mut n = num % d;
        if n < 0 {
            n += d;
        }
        let g = (n as u64).gcd(&den);
        Rotation {
            num: n as u64 / g,
            den: den / g,
        }
    }

    pub fn zero() -> Rotation {
        Rotation { num: 0, den: 1 }
    }

    /// exp(2πi/2) = −1.
    pub fn half() -> Rotation {
        Rotation { num: 1, den: 2 }
    }

    pub fn num(&self) -> u64 {
        self.num
    }
    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// Multiplicative order of the root of unity.
    pub fn order(&self) -> u64 {
        self.den
    }

    pub fn add(&self, other: &Rotation) -> Rotation {
        let den = self.den.lcm(&other.den);
        let num = self.num * (den / self.den) + other.num * (den / other.den);
        Rotation::new((num % den) as i64, den)
    }

    pub fn neg(&self) -> Rotation {
        Rotation::new(-(self.num as i64), self.den)
    }

    pub fn mul_int(&self, k: i64) -> Rotation {
        let m = ((k % self.den as i64) + self.den as i64) as u64 % self.den;
        Rotation::new((self.num as i128 * m as i128 % self.den as i128) as i64, self.den)
    }

    pub fn to_complex(&self) -> (f64, f64) {
        let t = 2.0 * std::f64::consts::PI * (self.num as f64) / (self.den as f64);
        (t.cos(), t.sin())
    }
}

impl fmt::Debug for Rotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e(2πi·{}/{})", self.num, self.den)
    }
}

/// Coefficients of the n-th cyclotomic polynomial, computed by dividing
/// x^n − 1 by the product of Φ_d over proper divisors d of n.
fn cyclotomic_poly(n: u64, memo: &mut HashMap<u64, Vec<BigInt>>) -> Vec<BigInt> {
    if let Some(p) = memo.get(&n) {
        return p.clone();
    }
    // x^n - 1
    let mut num: Vec<BigInt> = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_poly(d, memo);
            num = poly_div_exact(&num, &phi_d);
        }
    }
    memo.insert(n, num.clone());
    num
}

/// Exact division of integer polynomials (assumes divisibility, monic divisor).
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let nd = rem.len() - 1;
    assert!(den[dd].is_one());
    let mut quot = vec![BigInt::zero(); nd - dd + 1];
    for i in (0..=(nd - dd)).rev() {
        let c = rem[i + dd].clone();
        quot[i] = c.clone();
        if !c.is_zero() {
            for j in 0..=dd {
                rem[i + j] -= &c * &den[j];
            }
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "non-exact polynomial division");
    quot
}

/// The field Q(ζ_n), fixed modulus n.
#[derive(Clone)]
pub struct CyclotomicRing {
    n: u64,
    phi: usize,
    /// Monic Φ_n as integer coefficients, length phi+1.
    minpoly: Vec<BigInt>,
}

impl CyclotomicRing {
    pub fn new(n: u64) -> CyclotomicRing {
        assert!(n >= 1);
        let mut memo = HashMap::new();
        let minpoly = cyclotomic_poly(n, &mut memo);
        let phi = minpoly.len() - 1;
        CyclotomicRing { n, phi, minpoly }
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }
    pub fn degree(&self) -> usize {
        self.phi
    }

    pub fn zero(&self) -> CycElem {
        CycElem {
            n: self.n,
            num: vec![BigInt::zero(); self.phi.max(1)],
            den: BigInt::one(),
        }
    }

    pub fn from_int(&self, k: i64) -> CycElem {
        let mut e = self.zero();
        e.num[0] = BigInt::from(k);
        e
    }

    /// The basis image of ζ_n^m (m arbitrary).
    pub fn root_power(&self, m: i64) -> CycElem {
        let mut counts = vec![BigInt::zero(); self.n as usize];
        let mm = ((m % self.n as i64) + self.n as i64) as u64 % self.n;
        counts[mm as usize] = BigInt::one();
        self.from_group_ring(&counts)
    }

    /// Embed a rotation; its denominator must divide n.
    pub fn from_rotation(&self, r: &Rotation) -> Result<CycElem> {
        if self.n % r.den() != 0 {
            return Err(Error::invalid(format!(
                "root of unity of order {} does not lie in Q(zeta_{})",
                r.den(),
                self.n
            )));
        }
        Ok(self.root_power((r.num() * (self.n / r.den())) as i64))
    }

    /// Collapse a group-ring vector Σ counts[m]·ζ^m into the power basis.
    pub fn from_group_ring(&self, counts: &[BigInt]) -> CycElem {
        assert_eq!(counts.len(), self.n as usize);
        let mut poly = counts.to_vec();
        self.reduce(&mut poly);
        poly.resize(self.phi.max(1), BigInt::zero());
        CycElem {
            n: self.n,
            num: poly,
            den: BigInt::one(),
        }
    }

    fn reduce(&self, poly: &mut Vec<BigInt>) {
        if self.phi == 0 {
            return;
        }
        while poly.len() > self.phi {
            let d = poly.len() - 1;
            let c = poly.pop().unwrap();
            if c.is_zero() {
                continue;
            }
            // x^d = x^{d-phi} · (x^phi) and x^phi = -(Φ_n - x^phi)
            for j in 0..self.phi {
                let t = &c * &self.minpoly[j];
                poly[d - self.phi + j] -= t;
            }
        }
    }

    pub fn add(&self, a: &CycElem, b: &CycElem) -> CycElem {
        self.check(a);
        self.check(b);
        let den = a.den.clone() * &b.den;
        let mut num = vec![BigInt::zero(); self.phi.max(1)];
        for i in 0..num.len() {
            num[i] = &a.num[i] * &b.den + &b.num[i] * &a.den;
        }
        normalize(CycElem { n: self.n, num, den })
    }

    pub fn sub(&self, a: &CycElem, b: &CycElem) -> CycElem {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &CycElem) -> CycElem {
        CycElem {
            n: a.n,
            num: a.num.iter().map(|c| -c).collect(),
            den: a.den.clone(),
        }
    }

    pub fn mul(&self, a: &CycElem, b: &CycElem) -> CycElem {
        self.check(a);
        self.check(b);
        if self.phi == 0 {
            return self.zero();
        }
        let mut prod = vec![BigInt::zero(); 2 * self.phi];
        for (i, ca) in a.num.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (j, cb) in b.num.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                prod[i + j] += ca * cb;
            }
        }
        self.reduce(&mut prod);
        prod.resize(self.phi.max(1), BigInt::zero());
        normalize(CycElem {
            n: self.n,
            num: prod,
            den: a.den.clone() * &b.den,
        })
    }

    pub fn scale(&self, a: &CycElem, num: i64, den: u64) -> CycElem {
        assert!(den > 0);
        normalize(CycElem {
            n: a.n,
            num: a.num.iter().map(|c| c * num).collect(),
            den: a.den.clone() * den,
        })
    }

    /// Complex conjugation ζ ↦ ζ^{-1}.
    pub fn conj(&self, a: &CycElem) -> CycElem {
        let mut counts = vec![BigInt::zero(); self.n as usize];
        counts[0] = a.num[0].clone();
        for i in 1..self.phi {
            counts[(self.n as usize - i) % self.n as usize] += &a.num[i];
        }
        let mut e = self.from_group_ring(&counts);
        e.den = a.den.clone();
        normalize(e)
    }

    pub fn is_zero(&self, a: &CycElem) -> bool {
        a.num.iter().all(|c| c.is_zero())
    }

    pub fn eq(&self, a: &CycElem, b: &CycElem) -> bool {
        self.is_zero(&self.sub(a, b))
    }

    /// Some(r) when the element is a rational number in lowest terms r = p/q.
    pub fn as_rational(&self, a: &CycElem) -> Option<(BigInt, BigInt)> {
        if a.num[1..].iter().all(|c| c.is_zero()) {
            Some((a.num[0].clone(), a.den.clone()))
        } else {
            None
        }
    }

    /// |a|² = a·ā, as a ring element.
    pub fn norm_sq(&self, a: &CycElem) -> CycElem {
        self.mul(a, &self.conj(a))
    }

    /// √2 = ζ₈ + ζ₈⁻¹; requires 8 | n.
    pub fn sqrt2(&self) -> Result<CycElem> {
        if self.n % 8 != 0 {
            return Err(Error::invalid("sqrt(2) needs 8 | n".to_string()));
        }
        let z8 = self.root_power((self.n / 8) as i64);
        let z8inv = self.root_power(-((self.n / 8) as i64));
        Ok(self.add(&z8, &z8inv))
    }

    /// Divide by √(2^k). Exact in Q(ζ_n) whenever 8 | n.
    pub fn div_by_sqrt_pow2(&self, a: &CycElem, k: u32) -> Result<CycElem> {
        let half_steps = k / 2;
        let mut out = a.clone();
        if half_steps > 0 {
            let mut den = BigInt::one();
            for _ in 0..half_steps {
                den *= 2;
            }
            out = normalize(CycElem {
                n: out.n,
                num: out.num,
                den: out.den * den,
            });
        }
        if k % 2 == 1 {
            // 1/√2 = √2 / 2
            let s = self.sqrt2()?;
            out = self.mul(&out, &s);
            out = self.scale(&out, 1, 2);
        }
        Ok(out)
    }

    pub fn to_complex(&self, a: &CycElem) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        let denf = bigint_to_f64(&a.den);
        for (i, c) in a.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let t = 2.0 * std::f64::consts::PI * (i as f64) / (self.n as f64);
            let cf = bigint_to_f64(c) / denf;
            re += cf * t.cos();
            im += cf * t.sin();
        }
        (re, im)
    }

    fn check(&self, a: &CycElem) {
        assert_eq!(a.n, self.n, "cyclotomic modulus mismatch");
    }
}

fn bigint_to_f64(x: &BigInt) -> f64 {
    let s = x.to_string();
    s.parse::<f64>().unwrap_or(f64::NAN)
}

fn normalize(mut e: CycElem) -> CycElem {
    if e.den.is_negative() {
        e.den = -e.den;
        for c in e.num.iter_mut() {
            *c = -c.clone();
        }
    }
    let mut g = e.den.clone();
    for c in &e.num {
        g = g.gcd(c);
        if g.is_one() {
            return e;
        }
    }
    if !g.is_one() && !g.is_zero() {
        e.den /= &g;
        for c in e.num.iter_mut() {
            *c /= &g;
        }
    }
    e
}

/// An element of Q(ζ_n): (Σ num[i]·ζ^i) / den.
#[derive(Clone, PartialEq, Eq)]
pub struct CycElem {
    n: u64,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycElem {
    pub fn modulus(&self) -> u64 {
        self.n
    }
    pub fn coeffs(&self) -> &[BigInt] {
        &self.num
    }
    pub fn den(&self) -> &BigInt {
        &self.den
    }
}

impl fmt::Debug for CycElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if i == 0 {
                write!(f, "{}", c)?;
            } else {
                write!(f, "{}·z{}^{}", c, self.n, i)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        if !self.den.is_one() {
            write!(f, " / {}", self.den)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotations_add_like_roots_multiply() {
        let a = Rotation::new(1, 3);
        let b = Rotation::new(1, 2);
        let c = a.add(&b);
        assert_eq!((c.num(), c.den()), (5, 6));
        assert!(a.add(&a.neg()).is_zero());
    }

    #[test]
    fn phi_24_closed_form() {
        let r = CyclotomicRing::new(24);
        assert_eq!(r.degree(), 8);
        // Φ24 = x^8 - x^4 + 1
        let z = r.root_power(1);
        let mut p = r.from_int(1);
        for _ in 0..8 {
            p = r.mul(&p, &z);
        }
        let z4 = r.root_power(4);
        let expect = r.sub(&z4, &r.from_int(1));
        assert!(r.eq(&p, &expect));
    }

    #[test]
    fn zeta3_sums_to_minus_one() {
        let r = CyclotomicRing::new(24);
        let z3 = r.root_power(8);
        let z3sq = r.root_power(16);
        let s = r.add(&z3, &z3sq);
        assert!(r.eq(&s, &r.from_int(-1)));
    }

    #[test]
    fn sqrt2_squares_to_two() {
        let r = CyclotomicRing::new(24);
        let s = r.sqrt2().unwrap();
        let sq = r.mul(&s, &s);
        assert!(r.eq(&sq, &r.from_int(2)));
        // and division by sqrt(2) is exact
        let one = r.div_by_sqrt_pow2(&r.mul(&s, &r.from_int(1)), 1).unwrap();
        assert!(r.eq(&one, &r.from_int(1)));
    }

    #[test]
    fn conjugation_inverts_roots() {
        let r = CyclotomicRing::new(24);
        let z = r.root_power(5);
        let prod = r.mul(&z, &r.conj(&z));
        assert!(r.eq(&prod, &r.from_int(1)));
    }

    #[test]
    fn group_ring_collapse_matches_powers() {
        let r = CyclotomicRing::new(12);
        let mut counts = vec![BigInt::zero(); 12];
        counts[7] = BigInt::from(3);
        counts[2] = BigInt::from(-1);
        let e = r.from_group_ring(&counts);
        let direct = r.add(
            &r.scale(&r.root_power(7), 3, 1),
            &r.scale(&r.root_power(2), -1, 1),
        );
        assert!(r.eq(&e, &direct));
    }
}
