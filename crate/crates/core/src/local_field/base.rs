//! The unramified floor of every tower: W = (unramified degree-f extension of
//! the 2-adics, truncated at 2^nb) or W = F_{2^f}[[t]] truncated at t^nb.
//!
//! Only integral elements live here; negative powers of the uniformizer are
//! handled by the element-level shift in `local_field::Elem`. Mixed-
//! characteristic elements are coordinate vectors over Z/2^nb in the
//! polynomial basis of the canonical residue modulus (lifted with 0/1
//! coefficients); equal-characteristic elements are truncated power series
//! with F_{2^f} coefficients.
//!
//! For windows of at most 120 bits the mixed coordinates live in `u128`
//! words (wrapping products are exact mod 2^nb since nb < 128); wider
//! windows, reached only by the precision-doubling retries, fall back to
//! `BigUint`.

use crate::error::{Error, Result};
use crate::finite_field::{FqElem, FqField};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FieldKind {
    /// Finite extensions of the 2-adic numbers.
    Mixed,
    /// Laurent series over F_{2^f}.
    Equal,
}

#[derive(Clone, Debug)]
pub struct BaseRing {
    pub kind: FieldKind,
    pub fq: FqField,
    /// Storage window: W-coefficients are known modulo uniformizer^nb.
    pub nb: u32,
}

/// An integral element of W.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum WElem {
    /// Coordinates over Z/2^nb (nb ≤ 120), length f.
    Small(Vec<u128>),
    /// Coordinates over Z/2^nb, arbitrary nb.
    Mixed(Vec<BigUint>),
    /// Power-series coefficients from t^0, length ≤ nb.
    Equal(Vec<FqElem>),
}

impl BaseRing {
    pub fn new(kind: FieldKind, f: u32, nb: u32) -> Result<BaseRing> {
        Ok(BaseRing {
            kind,
            fq: FqField::new(f)?,
            nb,
        })
    }

    pub fn f(&self) -> u32 {
        self.fq.degree()
    }

    fn small(&self) -> bool {
        self.kind == FieldKind::Mixed && self.nb <= 120
    }

    fn mask128(&self) -> u128 {
        (1u128 << self.nb) - 1
    }

    fn mask(&self, x: BigUint) -> BigUint {
        x & ((BigUint::one() << self.nb) - BigUint::one())
    }

    pub fn zero(&self) -> WElem {
        match self.kind {
            FieldKind::Mixed => {
                if self.small() {
                    WElem::Small(vec![0; self.f() as usize])
                } else {
                    WElem::Mixed(vec![BigUint::zero(); self.f() as usize])
                }
            }
            FieldKind::Equal => WElem::Equal(vec![]),
        }
    }

    pub fn one(&self) -> WElem {
        match self.kind {
            FieldKind::Mixed => {
                if self.small() {
                    let mut v = vec![0u128; self.f() as usize];
                    v[0] = 1;
                    WElem::Small(v)
                } else {
                    let mut v = vec![BigUint::zero(); self.f() as usize];
                    v[0] = BigUint::one();
                    WElem::Mixed(v)
                }
            }
            FieldKind::Equal => WElem::Equal(vec![1]),
        }
    }

    /// The class of the residue-field generator (the polynomial variable).
    pub fn gen(&self) -> WElem {
        self.lift(self.fq.gen())
    }

    /// Lift a residue to W (0/1 coordinates resp. constant term).
    pub fn lift(&self, r: FqElem) -> WElem {
        match self.kind {
            FieldKind::Mixed => {
                if self.small() {
                    let mut v = vec![0u128; self.f() as usize];
                    for (i, item) in v.iter_mut().enumerate() {
                        if (r >> i) & 1 == 1 {
                            *item = 1;
                        }
                    }
                    WElem::Small(v)
                } else {
                    let mut v = vec![BigUint::zero(); self.f() as usize];
                    for (i, item) in v.iter_mut().enumerate() {
                        if (r >> i) & 1 == 1 {
                            *item = BigUint::one();
                        }
                    }
                    WElem::Mixed(v)
                }
            }
            FieldKind::Equal => {
                if r == 0 {
                    WElem::Equal(vec![])
                } else {
                    WElem::Equal(vec![r])
                }
            }
        }
    }

    pub fn from_i64(&self, n: i64) -> WElem {
        match self.kind {
            FieldKind::Mixed => {
                if self.small() {
                    let mask = self.mask128();
                    let reduced = if n >= 0 {
                        n as u128 & mask
                    } else {
                        ((1u128 << self.nb) - ((n.unsigned_abs() as u128) & mask)) & mask
                    };
                    let mut v = vec![0u128; self.f() as usize];
                    v[0] = reduced;
                    WElem::Small(v)
                } else {
                    let modulus = BigUint::one() << self.nb;
                    let reduced = if n >= 0 {
                        BigUint::from(n as u64) % &modulus
                    } else {
                        (&modulus - BigUint::from(n.unsigned_abs()) % &modulus) % &modulus
                    };
                    let mut v = vec![BigUint::zero(); self.f() as usize];
                    v[0] = reduced;
                    WElem::Mixed(v)
                }
            }
            FieldKind::Equal => {
                if n.rem_euclid(2) == 0 {
                    WElem::Equal(vec![])
                } else {
                    WElem::Equal(vec![1])
                }
            }
        }
    }

    pub fn is_zero_stored(&self, a: &WElem) -> bool {
        match a {
            WElem::Small(v) => v.iter().all(|&c| c == 0),
            WElem::Mixed(v) => v.iter().all(|c| c.is_zero()),
            WElem::Equal(v) => v.iter().all(|&c| c == 0),
        }
    }

    pub fn add(&self, a: &WElem, b: &WElem) -> WElem {
        match (a, b) {
            (WElem::Small(x), WElem::Small(y)) => {
                let mask = self.mask128();
                WElem::Small(
                    x.iter()
                        .zip(y.iter())
                        .map(|(p, q)| (p + q) & mask)
                        .collect(),
                )
            }
            (WElem::Mixed(x), WElem::Mixed(y)) => WElem::Mixed(
                x.iter()
                    .zip(y.iter())
                    .map(|(p, q)| self.mask(p + q))
                    .collect(),
            ),
            (WElem::Equal(x), WElem::Equal(y)) => {
                let n = x.len().max(y.len());
                let mut v = vec![0u64; n];
                for (i, item) in v.iter_mut().enumerate() {
                    let p = x.get(i).copied().unwrap_or(0);
                    let q = y.get(i).copied().unwrap_or(0);
                    *item = p ^ q;
                }
                WElem::Equal(trim(v))
            }
            _ => unreachable!("mismatched W representations"),
        }
    }

    pub fn neg(&self, a: &WElem) -> WElem {
        match a {
            WElem::Small(x) => {
                let modulus = 1u128 << self.nb;
                WElem::Small(
                    x.iter()
                        .map(|&c| if c == 0 { 0 } else { modulus - c })
                        .collect(),
                )
            }
            WElem::Mixed(x) => {
                let modulus = BigUint::one() << self.nb;
                WElem::Mixed(
                    x.iter()
                        .map(|c| {
                            if c.is_zero() {
                                BigUint::zero()
                            } else {
                                &modulus - c
                            }
                        })
                        .collect(),
                )
            }
            WElem::Equal(_) => a.clone(),
        }
    }

    pub fn sub(&self, a: &WElem, b: &WElem) -> WElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &WElem, b: &WElem) -> WElem {
        match (a, b) {
            (WElem::Small(x), WElem::Small(y)) => {
                let f = self.f() as usize;
                let mask = self.mask128();
                let mut prod = vec![0u128; 2 * f - 1];
                for (i, &p) in x.iter().enumerate() {
                    if p == 0 {
                        continue;
                    }
                    for (j, &q) in y.iter().enumerate() {
                        if q == 0 {
                            continue;
                        }
                        prod[i + j] = (prod[i + j] + (p.wrapping_mul(q) & mask)) & mask;
                    }
                }
                let m = self.fq.modulus();
                let modulus = 1u128 << self.nb;
                for d in (f..2 * f - 1).rev() {
                    let c = std::mem::take(&mut prod[d]);
                    if c == 0 {
                        continue;
                    }
                    for i in 0..f {
                        if (m >> i) & 1 == 1 {
                            let slot = &mut prod[d - f + i];
                            *slot = if *slot >= c { *slot - c } else { *slot + modulus - c };
                        }
                    }
                }
                prod.truncate(f);
                WElem::Small(prod)
            }
            (WElem::Mixed(x), WElem::Mixed(y)) => {
                let f = self.f() as usize;
                let mut prod = vec![BigUint::zero(); 2 * f - 1];
                for (i, p) in x.iter().enumerate() {
                    if p.is_zero() {
                        continue;
                    }
                    for (j, q) in y.iter().enumerate() {
                        if q.is_zero() {
                            continue;
                        }
                        prod[i + j] += p * q;
                    }
                }
                let m = self.fq.modulus();
                let modulus_big = BigUint::one() << self.nb;
                for d in (f..2 * f - 1).rev() {
                    let c = std::mem::replace(&mut prod[d], BigUint::zero());
                    if c.is_zero() {
                        continue;
                    }
                    for i in 0..f {
                        if (m >> i) & 1 == 1 {
                            let slot = &mut prod[d - f + i];
                            let cc = &c % &modulus_big;
                            if *slot >= cc {
                                *slot -= cc;
                            } else {
                                *slot += &modulus_big - cc;
                            }
                        }
                    }
                }
                prod.truncate(f);
                WElem::Mixed(prod.into_iter().map(|c| self.mask(c)).collect())
            }
            (WElem::Equal(x), WElem::Equal(y)) => {
                if x.is_empty() || y.is_empty() {
                    return self.zero();
                }
                let n = (x.len() + y.len() - 1).min(self.nb as usize);
                let mut v = vec![0u64; n];
                for (i, &p) in x.iter().enumerate() {
                    if p == 0 || i >= n {
                        continue;
                    }
                    for (j, &q) in y.iter().enumerate() {
                        if q == 0 || i + j >= n {
                            continue;
                        }
                        v[i + j] ^= self.fq.mul(p, q);
                    }
                }
                WElem::Equal(trim(v))
            }
            _ => unreachable!("mismatched W representations"),
        }
    }

    /// Valuation of the stored value; None when every stored digit vanishes.
    pub fn val(&self, a: &WElem) -> Option<i64> {
        match a {
            WElem::Small(x) => x
                .iter()
                .filter(|&&c| c != 0)
                .map(|c| c.trailing_zeros() as i64)
                .min(),
            WElem::Mixed(x) => x
                .iter()
                .filter_map(|c| c.trailing_zeros())
                .min()
                .map(|v| v as i64),
            WElem::Equal(x) => x.iter().position(|&c| c != 0).map(|v| v as i64),
        }
    }

    /// Image in the residue field.
    pub fn residue(&self, a: &WElem) -> FqElem {
        match a {
            WElem::Small(x) => {
                let mut r = 0u64;
                for (i, &c) in x.iter().enumerate() {
                    if c & 1 == 1 {
                        r |= 1 << i;
                    }
                }
                r
            }
            WElem::Mixed(x) => {
                let mut r = 0u64;
                for (i, c) in x.iter().enumerate() {
                    if c.bit(0) {
                        r |= 1 << i;
                    }
                }
                r
            }
            WElem::Equal(x) => x.first().copied().unwrap_or(0),
        }
    }

    /// Exact division by the uniformizer (2 resp. t); caller certifies val ≥ 1.
    pub fn div_uniformizer(&self, a: &WElem) -> WElem {
        match a {
            WElem::Small(x) => WElem::Small(x.iter().map(|&c| c >> 1).collect()),
            WElem::Mixed(x) => WElem::Mixed(x.iter().map(|c| c >> 1).collect()),
            WElem::Equal(x) => {
                if x.is_empty() {
                    self.zero()
                } else {
                    WElem::Equal(x[1..].to_vec())
                }
            }
        }
    }

    pub fn mul_uniformizer(&self, a: &WElem) -> WElem {
        match a {
            WElem::Small(x) => {
                let mask = self.mask128();
                WElem::Small(x.iter().map(|&c| (c << 1) & mask).collect())
            }
            WElem::Mixed(x) => WElem::Mixed(x.iter().map(|c| self.mask(c << 1)).collect()),
            WElem::Equal(x) => {
                if x.is_empty() {
                    self.zero()
                } else {
                    let mut v = vec![0u64];
                    v.extend_from_slice(x);
                    v.truncate(self.nb as usize);
                    WElem::Equal(trim(v))
                }
            }
        }
    }

    /// Truncate stored digits beyond uniformizer^k.
    pub fn truncate_at(&self, a: &WElem, k: u32) -> WElem {
        let k = k.min(self.nb);
        match a {
            WElem::Small(x) => {
                let mask = if k >= 128 { u128::MAX } else { (1u128 << k) - 1 };
                WElem::Small(x.iter().map(|&c| c & mask).collect())
            }
            WElem::Mixed(x) => WElem::Mixed(
                x.iter()
                    .map(|c| c & ((BigUint::one() << k) - BigUint::one()))
                    .collect(),
            ),
            WElem::Equal(x) => {
                let mut v = x.clone();
                v.truncate(k as usize);
                WElem::Equal(trim(v))
            }
        }
    }

    /// Mixed coordinates as big integers, for the rare exact-linear-algebra
    /// paths.
    pub fn mixed_as_biguints(&self, a: &WElem) -> Option<Vec<BigUint>> {
        match a {
            WElem::Small(x) => Some(x.iter().map(|&c| biguint_from_u128(c)).collect()),
            WElem::Mixed(x) => Some(x.clone()),
            WElem::Equal(_) => None,
        }
    }

    pub fn equal_coeffs<'a>(&self, a: &'a WElem) -> Option<&'a [FqElem]> {
        match a {
            WElem::Equal(x) => Some(x),
            _ => None,
        }
    }

    pub fn from_mixed_coords(&self, coords: Vec<BigUint>) -> Result<WElem> {
        if coords.len() != self.f() as usize {
            return Err(Error::invalid(format!(
                "expected {} coordinates, got {}",
                self.f(),
                coords.len()
            )));
        }
        let masked: Vec<BigUint> = coords.into_iter().map(|c| self.mask(c)).collect();
        if self.small() {
            Ok(WElem::Small(
                masked
                    .iter()
                    .map(|c| c.to_u128().expect("masked coordinate fits u128"))
                    .collect(),
            ))
        } else {
            Ok(WElem::Mixed(masked))
        }
    }

    pub fn from_equal_coeffs(&self, coeffs: Vec<(u32, FqElem)>) -> Result<WElem> {
        let mut v = vec![0u64; self.nb as usize];
        for (e, c) in coeffs {
            if e >= self.nb {
                continue;
            }
            if c >= self.fq.order() {
                return Err(Error::invalid("residue coefficient out of range".to_string()));
            }
            v[e as usize] ^= c;
        }
        Ok(WElem::Equal(trim(v)))
    }
}

fn biguint_from_u128(c: u128) -> BigUint {
    let lo = (c & (u64::MAX as u128)) as u64;
    let hi = (c >> 64) as u64;
    (BigUint::from(hi) << 64) | BigUint::from(lo)
}

fn trim(mut v: Vec<FqElem>) -> Vec<FqElem> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_ring_ops() {
        for nb in [32u32, 150] {
            let w = BaseRing::new(FieldKind::Mixed, 2, nb).unwrap();
            let a = w.from_i64(7);
            let b = w.from_i64(-3);
            let s = w.add(&a, &b);
            assert_eq!(s, w.from_i64(4));
            let p = w.mul(&a, &b);
            assert_eq!(p, w.from_i64(-21));
            assert_eq!(w.val(&w.from_i64(12)), Some(2));
            assert_eq!(w.val(&w.zero()), None);
            // ω·ω uses the lifted modulus x² + x + 1: ω² = −ω − 1 exactly,
            // which reduces to ω + 1 in the residue field
            let om = w.gen();
            let sq = w.mul(&om, &om);
            assert_eq!(sq, w.neg(&w.add(&om, &w.one())));
            assert_eq!(w.residue(&sq), w.fq.add(w.fq.gen(), 1));
        }
    }

    #[test]
    fn small_and_big_representations_agree() {
        let ws = BaseRing::new(FieldKind::Mixed, 3, 64).unwrap();
        let wb = BaseRing::new(FieldKind::Mixed, 3, 200).unwrap();
        for (x, y) in [(12345i64, -9876i64), (7, 3), (-1, -1)] {
            let ps = ws.mul(&ws.from_i64(x), &ws.from_i64(y));
            let pb = wb.mul(&wb.from_i64(x), &wb.from_i64(y));
            let ps_big = ws.mixed_as_biguints(&ps).unwrap();
            let pb_big = wb.mixed_as_biguints(&pb).unwrap();
            for (a, b) in ps_big.iter().zip(pb_big.iter()) {
                let mask = (BigUint::one() << 64) - BigUint::one();
                assert_eq!(a & &mask, b & &mask);
            }
        }
    }

    #[test]
    fn equal_ring_ops() {
        let w = BaseRing::new(FieldKind::Equal, 1, 32).unwrap();
        let t = w.mul_uniformizer(&w.one());
        let a = w.add(&w.one(), &t); // 1 + t
        let sq = w.mul(&a, &a); // 1 + t²
        let expect = w.add(&w.one(), &w.mul_uniformizer(&t));
        assert_eq!(sq, expect);
        assert_eq!(w.val(&t), Some(1));
        assert_eq!(w.div_uniformizer(&t), w.one());
    }
}
