//! Arithmetic in F_{2^f}, with the counting and Gauss-sum routines that feed
//! the root-number machinery.
//!
//! Field presentation: for each degree f we fix, once and for all, the
//! lexicographically smallest primitive polynomial over F₂ of degree f
//! (coefficient bitmask order; "primitive" means the class of x generates the
//! multiplicative group). This makes every example in the crate reproducible
//! and gives ζ₃ ∈ F₄ ⊆ F_{2^{2f}} a canonical coordinate. Elements are
//! polynomial-basis bit vectors packed into a `u64`.

use crate::cyclotomic::{CycElem, CyclotomicRing};
use crate::error::{Error, Result};

/// The field F_{2^f}, f ≤ 48.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FqField {
    f: u32,
    /// Modulus bitmask, bit i = coefficient of x^i, bit f set.
    modulus: u64,
}

/// An element of F_{2^f}: bit i = coefficient of x^i in the polynomial basis.
pub type FqElem = u64;

impl FqField {
    /// The canonical presentation of F_{2^f}.
    pub fn new(f: u32) -> Result<FqField> {
        if f == 0 || f > 48 {
            return Err(Error::invalid(format!("residue degree {} out of range", f)));
        }
        Ok(FqField {
            f,
            modulus: canonical_modulus(f)?,
        })
    }

    pub fn degree(&self) -> u32 {
        self.f
    }
    pub fn modulus(&self) -> u64 {
        self.modulus
    }
    pub fn order(&self) -> u64 {
        1u64 << self.f
    }
    pub fn zero(&self) -> FqElem {
        0
    }
    pub fn one(&self) -> FqElem {
        1
    }
    /// The class of x; a generator of the multiplicative group.
    pub fn gen(&self) -> FqElem {
        if self.f == 1 {
            1
        } else {
            2
        }
    }

    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        a ^ b
    }

    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        let mut acc: u128 = 0;
        let mut aa = a as u128;
        let mut bb = b;
        while bb != 0 {
            if bb & 1 == 1 {
                acc ^= aa;
            }
            aa <<= 1;
            bb >>= 1;
        }
        self.reduce(acc)
    }

    fn reduce(&self, mut acc: u128) -> FqElem {
        let m = self.modulus as u128;
        let f = self.f;
        while acc != 0 {
            let bit = 127 - acc.leading_zeros();
            if bit < f {
                break;
            }
            acc ^= m << (bit - f);
        }
        acc as u64
    }

    pub fn square(&self, a: FqElem) -> FqElem {
        self.mul(a, a)
    }

    pub fn pow(&self, a: FqElem, mut e: u64) -> FqElem {
        let mut base = a;
        let mut out = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                out = self.mul(out, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        out
    }

    pub fn inv(&self, a: FqElem) -> Result<FqElem> {
        if a == 0 {
            return Err(Error::invalid("inverse of zero in finite field"));
        }
        Ok(self.pow(a, self.order() - 2))
    }

    /// Frobenius x ↦ x².
    pub fn frobenius(&self, a: FqElem) -> FqElem {
        self.square(a)
    }

    /// Inverse Frobenius, i.e. the square root (always exists).
    pub fn sqrt(&self, a: FqElem) -> FqElem {
        self.pow(a, 1u64 << (self.f - 1))
    }

    /// Tr_{F/F₂}(x) = Σ x^{2^i} as a bit.
    pub fn trace(&self, a: FqElem) -> u64 {
        let mut t = 0u64;
        let mut cur = a;
        for _ in 0..self.f {
            t ^= cur;
            cur = self.square(cur);
        }
        debug_assert!(t <= 1);
        t
    }

    /// Solve z² + z = a; exists iff trace(a) = 0. Brute force — the residue
    /// fields in play are tiny.
    pub fn artin_schreier_root(&self, a: FqElem) -> Option<FqElem> {
        if self.trace(a) != 0 {
            return None;
        }
        for z in 0..self.order() {
            if self.add(self.square(z), z) == a {
                return Some(z);
            }
        }
        None
    }

    /// x ∈ (F^×)³? Always true when 3 ∤ 2^f − 1.
    pub fn is_cube(&self, a: FqElem) -> Result<bool> {
        if a == 0 {
            return Err(Error::invalid("cube test of zero"));
        }
        let q1 = self.order() - 1;
        if q1 % 3 != 0 {
            return Ok(true);
        }
        Ok(self.pow(a, q1 / 3) == 1)
    }

    pub fn cube_root(&self, a: FqElem) -> Option<FqElem> {
        if a == 0 {
            return Some(0);
        }
        if !self.is_cube(a).ok()? {
            return None;
        }
        let q1 = self.order() - 1;
        if q1 % 3 != 0 {
            // cubing is a bijection
            let inv3 = mod_inverse(3, q1)?;
            return Some(self.pow(a, inv3));
        }
        // small fields: scan
        (0..self.order()).find(|&r| self.pow(r, 3) == a)
    }

    /// Discrete log base gen(); brute force, fine for f ≤ 24-ish group scans.
    pub fn dlog(&self, a: FqElem) -> Result<u64> {
        if a == 0 {
            return Err(Error::invalid("dlog of zero"));
        }
        let g = self.gen();
        let mut cur = 1u64;
        for k in 0..self.order() - 1 {
            if cur == a {
                return Ok(k);
            }
            cur = self.mul(cur, g);
        }
        Err(Error::internal("generator is not primitive".to_string()))
    }

    /// A root of the canonical degree-d modulus inside this field (d | f),
    /// smallest by bitmask. This pins the embedding F_{2^d} ↪ F_{2^f}.
    pub fn subfield_gen_image(&self, d: u32) -> Result<FqElem> {
        if self.f % d != 0 {
            return Err(Error::invalid("not a subfield degree"));
        }
        let m = canonical_modulus(d)?;
        for c in 0..self.order() {
            if self.eval_f2_poly(m, c) == 0 {
                return Ok(c);
            }
        }
        Err(Error::internal("subfield modulus has no root".to_string()))
    }

    /// Evaluate an F₂[x] polynomial (bitmask) at a field element.
    pub fn eval_f2_poly(&self, poly: u64, at: FqElem) -> FqElem {
        let mut acc = 0u64;
        for bit in (0..64).rev() {
            acc = self.mul(acc, at);
            if (poly >> bit) & 1 == 1 {
                acc ^= 1;
            }
        }
        acc
    }
}

/// Smallest-bitmask primitive polynomial of degree f over F₂.
fn canonical_modulus(f: u32) -> Result<u64> {
    if f == 1 {
        return Ok(0b11); // x + 1, the class of x is 1
    }
    let order = (1u64 << f) - 1;
    let factors = factorize(order);
    let lo = 1u64 << f;
    for mask in (lo | 1)..(lo << 1) {
        if mask & 1 == 0 {
            continue; // x | mask would make it reducible
        }
        if !is_irreducible_f2(mask, f) {
            continue;
        }
        let field = FqField { f, modulus: mask };
        let x = 2u64;
        if factors.iter().all(|&p| field.pow(x, order / p) != 1) {
            return Ok(mask);
        }
    }
    Err(Error::internal(format!("no primitive polynomial of degree {}", f)))
}

/// Rabin irreducibility test over F₂ on bitmask polynomials.
fn is_irreducible_f2(mask: u64, f: u32) -> bool {
    if f == 1 {
        return true;
    }
    // x^{2^f} ≡ x mod mask, and gcd(x^{2^{f/p}} − x, mask) = 1 for prime p | f
    let sq = |a: u64| -> u64 { polymul_mod(a, a, mask, f) };
    let mut xq = 2u64;
    for _ in 0..f {
        xq = sq(xq);
    }
    if xq != 2 {
        return false;
    }
    let mut ps = vec![];
    let mut n = f;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            ps.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        ps.push(n);
    }
    for p in ps {
        let mut xe = 2u64;
        for _ in 0..(f / p) {
            xe = sq(xe);
        }
        if poly_gcd_f2(xe ^ 2, mask) != 1 {
            return false;
        }
    }
    true
}

fn polymul_mod(a: u64, b: u64, modulus: u64, f: u32) -> u64 {
    let mut acc: u128 = 0;
    let mut aa = a as u128;
    let mut bb = b;
    while bb != 0 {
        if bb & 1 == 1 {
            acc ^= aa;
        }
        aa <<= 1;
        bb >>= 1;
    }
    let m = modulus as u128;
    while acc >> f != 0 {
        let bit = 127 - acc.leading_zeros();
        acc ^= m << (bit - f);
    }
    acc as u64
}

fn poly_gcd_f2(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let da = 63i32 - a.leading_zeros() as i32;
        let db = 63i32 - b.leading_zeros() as i32;
        if da < db {
            std::mem::swap(&mut a, &mut b);
            continue;
        }
        if a == 0 {
            break;
        }
        a ^= b << (da - db) as u32;
    }
    a
}

/// Trial division + deterministic Miller–Rabin for the cofactor.
fn factorize(mut n: u64) -> Vec<u64> {
    let mut out = vec![];
    let mut d = 2u64;
    while d * d <= n && d < (1 << 21) {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        if is_prime_u64(n) {
            out.push(n);
        } else {
            // split by Pollard rho
            let mut stack = vec![n];
            while let Some(m) = stack.pop() {
                if is_prime_u64(m) {
                    if !out.contains(&m) {
                        out.push(m);
                    }
                    continue;
                }
                let f = pollard_rho(m);
                stack.push(f);
                stack.push(m / f);
            }
        }
    }
    out
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    r
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        while d == 1 {
            x = (mulmod(x, x, n) + c) % n;
            y = (mulmod(y, y, n) + c) % n;
            y = (mulmod(y, y, n) + c) % n;
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut t, mut newt) = (0i128, 1i128);
    let (mut r, mut newr) = (m as i128, a as i128);
    while newr != 0 {
        let q = r / newr;
        (t, newt) = (newt, t - q * newt);
        (r, newr) = (newr, r - q * newr);
    }
    if r > 1 {
        return None;
    }
    Some(((t % m as i128 + m as i128) % m as i128) as u64)
}

// ---------------------------------------------------------------------------
// Counting on the supersingular curve x³ = y² + y and the tame Gauss sums.
// ---------------------------------------------------------------------------

/// Projective point count of x³ = y² + y over F_{2^m}, brute forced, checked
/// against the closed form 2^m + 1 − λ^m − λ̄^m with λ = √2·i (λ² = −2).
pub fn count_script_e(m: u32) -> Result<u64> {
    if m == 0 || m > 16 {
        return Err(Error::BoundExceeded(format!(
            "point-count degree {} outside 1..=16",
            m
        )));
    }
    let field = FqField::new(m)?;
    // affine solutions: for each x, y²+y = x³ has 2 roots iff trace(x³) = 0
    let mut count = 1u64; // point at infinity
    for x in 0..field.order() {
        let c = field.mul(field.mul(x, x), x);
        if field.trace(c) == 0 {
            count += 2;
        }
    }
    Ok(count)
}

/// Closed form 2^m + 1 − λ^m − λ̄^m via the integer recurrence
/// a_m = λ^m + λ̄^m, a₀ = 2, a₁ = 0, a_m = −2·a_{m−2}.
pub fn count_script_e_closed_form(m: u32) -> i128 {
    let mut a_prev: i128 = 2; // a_0
    let mut a_cur: i128 = 0; // a_1
    if m == 0 {
        return 1 + 1 - 2;
    }
    for _ in 1..m {
        let next = -2 * a_prev;
        a_prev = a_cur;
        a_cur = next;
    }
    (1i128 << m) + 1 - a_cur
}

/// N₁ = #{y ∈ F_{q²} : y+y² is a nonzero cube}, N₂ the ζ₃-coset count,
/// brute forced over k₂ = F_{2^{2f}}; q = 2^f, f odd.
pub fn count_n1_n2(f: u32) -> Result<(u64, u64)> {
    if f % 2 == 0 {
        return Err(Error::invalid("f must be odd".to_string()));
    }
    if f > 8 {
        return Err(Error::BoundExceeded(format!("f = {} above N1/N2 bound", f)));
    }
    let k2 = FqField::new(2 * f)?;
    let q1 = k2.order() - 1;
    assert_eq!(q1 % 3, 0);
    let mut n1 = 0u64;
    let mut n2 = 0u64;
    for y in 0..k2.order() {
        let v = k2.add(y, k2.square(y));
        if v == 0 {
            continue;
        }
        match k2.dlog(v)? % 3 {
            0 => n1 += 1,
            1 => n2 += 1,
            _ => {}
        }
    }
    Ok((n1, n2))
}

/// Which ζ₃-coset convention `count_n1_n2` and `gauss_sum_tau` share: the
/// coset labels are dlog classes mod 3 for the canonical generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CubicCharacter {
    /// χ(g^j) = ζ₃^j
    Primary,
    /// χ(g^j) = ζ₃^{2j}
    Conjugate,
}

/// Exact value of the normalized tame sum
/// q^{-1} Σ_{x ∈ k₂^×} χ_τ(x)^{-1} φ(Tr_{k₂/F₂}(x))
/// in Z[ζ₃] ⊆ Q(ζ₂₄), together with the two coset partial sums
/// (Σ over cubes, Σ over ζ₃·cubes) of φ(Tr·).
pub fn gauss_sum_tau(f: u32, chi: CubicCharacter) -> Result<(CycElem, i64, i64)> {
    if f % 2 == 0 {
        return Err(Error::invalid("f must be odd".to_string()));
    }
    if f > 8 {
        return Err(Error::BoundExceeded(format!("f = {} above Gauss-sum bound", f)));
    }
    let k2 = FqField::new(2 * f)?;
    let ring = CyclotomicRing::new(24);
    let q1 = k2.order() - 1;
    let mut counts = vec![num_bigint::BigInt::from(0); 24];
    let mut part = [0i64; 3];
    let g = k2.gen();
    let mut x = k2.one();
    for j in 0..q1 {
        let phi: i64 = if k2.trace(x) == 0 { 1 } else { -1 };
        let coset = (j % 3) as usize;
        part[coset] += phi;
        // χ^{-1}(x) = ζ₃^{-cj}, ζ₃ = ζ₂₄^8
        let c = match chi {
            CubicCharacter::Primary => 1i64,
            CubicCharacter::Conjugate => 2i64,
        };
        let mut expo = (-(c * j as i64)).rem_euclid(3) * 8;
        if phi < 0 {
            expo = (expo + 12) % 24; // multiply by −1 = ζ₂₄^{12}
        }
        counts[expo as usize] += 1;
        x = k2.mul(x, g);
    }
    let sum = ring.from_group_ring(&counts);
    let q = 1i64 << f;
    let normalized = ring.scale(&sum, 1, q as u64);
    Ok((normalized, part[0], part[1]))
}

/// Cardinality check: squaring maps {x ∈ ζ₃·cubes : Tr x = 0} bijectively
/// onto {x ∈ ζ₃²·cubes : Tr x = 0}. Returns the two cardinalities.
pub fn cube_coset_trace_counts(f: u32) -> Result<(u64, u64)> {
    if f % 2 == 0 {
        return Err(Error::invalid("f must be odd".to_string()));
    }
    let k2 = FqField::new(2 * f)?;
    let q1 = k2.order() - 1;
    let g = k2.gen();
    let mut c1 = 0u64;
    let mut c2 = 0u64;
    let mut x = k2.one();
    for j in 0..q1 {
        if k2.trace(x) == 0 {
            match j % 3 {
                1 => c1 += 1,
                2 => c2 += 1,
                _ => {}
            }
        }
        x = k2.mul(x, g);
    }
    Ok((c1, c2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_moduli_are_primitive() {
        for f in 1..=12 {
            let field = FqField::new(f).unwrap();
            let order = field.order() - 1;
            if f > 1 {
                // x generates the unit group
                for p in factorize(order) {
                    assert_ne!(field.pow(field.gen(), order / p), 1, "f={}", f);
                }
            }
            // Frobenius fixes exactly F₂: x^{2^f} = x for a few elements
            for a in [0u64, 1, 2, 3, (1 << (f.min(4))) - 1] {
                let a = a & (field.order() - 1);
                assert_eq!(field.pow(a, field.order()), a);
            }
        }
    }

    #[test]
    fn trace_examples() {
        let f4 = FqField::new(2).unwrap();
        assert_eq!(f4.trace(1), 0); // 1 + 1 = 0
        assert_eq!(f4.trace(f4.gen()), 1); // ω + ω² = 1
        let f2 = FqField::new(1).unwrap();
        assert_eq!(f2.trace(1), 1);
    }

    #[test]
    fn trace_is_linear_and_frobenius_invariant() {
        let field = FqField::new(5).unwrap();
        for a in 0..32u64 {
            for b in 0..32u64 {
                assert_eq!(
                    field.trace(field.add(a, b)),
                    field.trace(a) ^ field.trace(b)
                );
            }
            assert_eq!(field.trace(a), field.trace(field.square(a)));
        }
    }

    #[test]
    fn cube_tests() {
        let f4 = FqField::new(2).unwrap();
        assert!(f4.is_cube(1).unwrap());
        assert!(!f4.is_cube(f4.gen()).unwrap()); // (F₄^×)³ = {1}
        let f2 = FqField::new(1).unwrap();
        assert!(f2.is_cube(1).unwrap());
        assert!(f2.is_cube(0).is_err());
    }

    #[test]
    fn script_e_counts_match_closed_form() {
        let expect = [3u64, 9, 9, 9, 33, 81];
        for m in 1..=6 {
            let c = count_script_e(m).unwrap();
            assert_eq!(c as i128, count_script_e_closed_form(m));
            assert_eq!(c, expect[(m - 1) as usize]);
        }
    }

    #[test]
    fn n1_n2_formulas() {
        for f in [1u32, 3, 5] {
            let q = 1u64 << f;
            let (n1, n2) = count_n1_n2(f).unwrap();
            assert_eq!(3 * n1, q * q + 2 * q - 2, "f={}", f);
            assert_eq!(2 * n2, q * q - 2 - n1, "f={}", f);
        }
        assert_eq!(count_n1_n2(1).unwrap(), (2, 0));
        assert_eq!(count_n1_n2(3).unwrap().0, 26);
        assert!(count_n1_n2(2).is_err());
    }

    #[test]
    fn gauss_sum_is_one_for_both_characters() {
        let ring = CyclotomicRing::new(24);
        for f in [1u32, 3] {
            for chi in [CubicCharacter::Primary, CubicCharacter::Conjugate] {
                let (w, _, _) = gauss_sum_tau(f, chi).unwrap();
                assert!(ring.eq(&w, &ring.from_int(1)), "f={} chi={:?}", f, chi);
            }
        }
        let (_, cubes, zeta_cubes) = gauss_sum_tau(1, CubicCharacter::Primary).unwrap();
        assert_eq!((cubes, zeta_cubes), (1, -1));
    }

    #[test]
    fn coset_trace_bijection() {
        for f in [1u32, 3, 5] {
            let (c1, c2) = cube_coset_trace_counts(f).unwrap();
            assert_eq!(c1, c2, "f={}", f);
        }
    }

    #[test]
    fn artin_schreier_solutions() {
        let field = FqField::new(3).unwrap();
        for a in 0..8u64 {
            match field.artin_schreier_root(a) {
                Some(z) => assert_eq!(field.add(field.square(z), z), a),
                None => assert_eq!(field.trace(a), 1),
            }
        }
    }

    #[test]
    fn subfield_embedding_root() {
        let f6 = FqField::new(6).unwrap();
        let img = f6.subfield_gen_image(2).unwrap();
        // image satisfies the degree-2 modulus: x² + x + 1 = 0
        assert_eq!(f6.add(f6.add(f6.square(img), img), 1), 0);
    }
}
