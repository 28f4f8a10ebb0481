//! Tiny odd-characteristic fields F_p and F_{p²} used only by verification
//! oracles: brute-force splitting of the 3-torsion quartic and brute-force
//! 3-torsion enumeration live over these, independent of the dyadic path
//! they check.

/// Arithmetic mod an odd prime p (p < 2^31).
#[derive(Clone, Copy, Debug)]
pub struct PrimeField {
    pub p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> PrimeField {
        PrimeField { p }
    }
    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b % self.p) % self.p
    }
    pub fn neg(&self, a: u64) -> u64 {
        (self.p - a % self.p) % self.p
    }
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }
    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1u64;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }
    pub fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }
    pub fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
    /// Some cube root, scanning; None if a is not a cube.
    pub fn cube_root(&self, a: u64) -> Option<u64> {
        (0..self.p).find(|&r| self.pow(r, 3) == a % self.p)
    }
    /// A quadratic nonresidue.
    pub fn nonresidue(&self) -> u64 {
        (2..self.p)
            .find(|&n| self.pow(n, (self.p - 1) / 2) != 1)
            .expect("odd prime has a nonresidue")
    }
}

/// F_{p²} = F_p[w]/(w² − nr); elements (a, b) = a + b·w.
#[derive(Clone, Copy, Debug)]
pub struct Fp2 {
    pub fp: PrimeField,
    pub nr: u64,
}

pub type Fp2Elem = (u64, u64);

impl Fp2 {
    pub fn new(p: u64) -> Fp2 {
        let fp = PrimeField::new(p);
        Fp2 {
            fp,
            nr: fp.nonresidue(),
        }
    }
    pub fn from_base(&self, a: u64) -> Fp2Elem {
        (a % self.fp.p, 0)
    }
    pub fn add(&self, a: Fp2Elem, b: Fp2Elem) -> Fp2Elem {
        (self.fp.add(a.0, b.0), self.fp.add(a.1, b.1))
    }
    pub fn sub(&self, a: Fp2Elem, b: Fp2Elem) -> Fp2Elem {
        (self.fp.sub(a.0, b.0), self.fp.sub(a.1, b.1))
    }
    pub fn neg(&self, a: Fp2Elem) -> Fp2Elem {
        (self.fp.neg(a.0), self.fp.neg(a.1))
    }
    pub fn mul(&self, a: Fp2Elem, b: Fp2Elem) -> Fp2Elem {
        let f = &self.fp;
        (
            f.add(f.mul(a.0, b.0), f.mul(self.nr, f.mul(a.1, b.1))),
            f.add(f.mul(a.0, b.1), f.mul(a.1, b.0)),
        )
    }
    pub fn pow(&self, a: Fp2Elem, mut e: u64) -> Fp2Elem {
        let mut r = self.from_base(1);
        let mut cur = a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, cur);
            }
            cur = self.mul(cur, cur);
            e >>= 1;
        }
        r
    }
    pub fn inv(&self, a: Fp2Elem) -> Fp2Elem {
        // (a + bw)⁻¹ = (a − bw)/(a² − nr·b²)
        let f = &self.fp;
        let den = f.sub(f.mul(a.0, a.0), f.mul(self.nr, f.mul(a.1, a.1)));
        let d = f.inv(den);
        (f.mul(a.0, d), f.mul(f.neg(a.1), d))
    }
    pub fn is_zero(&self, a: Fp2Elem) -> bool {
        a.0 == 0 && a.1 == 0
    }
    /// A primitive cube root of unity (p ≠ 3).
    pub fn zeta3(&self) -> Option<Fp2Elem> {
        let q = self.fp.p * self.fp.p;
        // scan small elements for order 3
        for a in 0..self.fp.p.min(64) {
            for b in 0..self.fp.p.min(64) {
                let z = (a, b);
                if self.is_zero(z) {
                    continue;
                }
                if self.pow(z, 3) == self.from_base(1) && z != self.from_base(1) {
                    return Some(z);
                }
                let _ = q;
            }
        }
        None
    }
    /// All roots of Σ c_i x^i by scanning the p² elements.
    pub fn poly_roots(&self, coeffs: &[Fp2Elem]) -> Vec<Fp2Elem> {
        let mut out = vec![];
        for a in 0..self.fp.p {
            for b in 0..self.fp.p {
                let x = (a, b);
                let mut acc = self.from_base(0);
                for c in coeffs.iter().rev() {
                    acc = self.add(self.mul(acc, x), *c);
                }
                if self.is_zero(acc) {
                    out.push(x);
                }
            }
        }
        out
    }
}

/// A Weierstrass curve over F_p with its affine group law; only what the
/// 3-torsion oracle needs.
#[derive(Clone, Copy, Debug)]
pub struct SmallCurve {
    pub fp: PrimeField,
    pub a: [u64; 5], // a1, a2, a3, a4, a6
}

pub type SmallPoint = Option<(u64, u64)>; // None = point at infinity

impl SmallCurve {
    pub fn on_curve(&self, x: u64, y: u64) -> bool {
        let f = &self.fp;
        let [a1, a2, a3, a4, a6] = self.a;
        let lhs = f.add(f.add(f.mul(y, y), f.mul(a1, f.mul(x, y))), f.mul(a3, y));
        let rhs = f.add(
            f.add(f.mul(f.mul(x, x), x), f.mul(a2, f.mul(x, x))),
            f.add(f.mul(a4, x), a6),
        );
        lhs == rhs
    }

    pub fn neg_point(&self, p: SmallPoint) -> SmallPoint {
        let f = &self.fp;
        let [a1, _, a3, _, _] = self.a;
        p.map(|(x, y)| (x, f.sub(f.neg(y), f.add(f.mul(a1, x), a3))))
    }

    pub fn add_points(&self, p: SmallPoint, q: SmallPoint) -> SmallPoint {
        let f = &self.fp;
        let [a1, a2, a3, a4, _] = self.a;
        let (x1, y1) = match p {
            None => return q,
            Some(t) => t,
        };
        let (x2, y2) = match q {
            None => return p,
            Some(t) => t,
        };
        let lambda = if x1 != x2 {
            f.mul(f.sub(y2, y1), f.inv(f.sub(x2, x1)))
        } else {
            let denom = f.add(f.add(y1, y1), f.add(f.mul(a1, x1), a3));
            if denom == 0 {
                return None; // q = −p
            }
            if y1 != y2 {
                return None;
            }
            let num = f.sub(
                f.add(f.add(f.mul(3, f.mul(x1, x1)), f.mul(2, f.mul(a2, x1))), a4),
                f.mul(a1, y1),
            );
            f.mul(num, f.inv(denom))
        };
        let x3 = f.sub(
            f.sub(f.sub(f.add(f.mul(lambda, lambda), f.mul(a1, lambda)), a2), x1),
            x2,
        );
        let y3 = f.sub(
            f.sub(f.mul(lambda, f.sub(x1, x3)), y1),
            f.add(f.mul(a1, x3), a3),
        );
        Some((x3, y3))
    }

    /// x-coordinates of the nontrivial 3-torsion points (over F_p only).
    pub fn three_torsion_x(&self) -> Vec<u64> {
        let mut out = vec![];
        for x in 0..self.fp.p {
            for y in 0..self.fp.p {
                if !self.on_curve(x, y) {
                    continue;
                }
                let p = Some((x, y));
                let two_p = self.add_points(p, p);
                if two_p == self.neg_point(p) && !out.contains(&x) {
                    out.push(x);
                }
            }
        }
        out.sort();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fp2_basics() {
        let f = Fp2::new(101);
        let z = f.zeta3().expect("zeta3 in F_{101^2}");
        assert_eq!(f.pow(z, 3), f.from_base(1));
        let a = (17, 3);
        let inv = f.inv(a);
        assert_eq!(f.mul(a, inv), f.from_base(1));
    }

    #[test]
    fn three_torsion_matches_division_polynomial() {
        // y² = x³ + 1 over F₇
        let curve = SmallCurve {
            fp: PrimeField::new(7),
            a: [0, 0, 0, 0, 1],
        };
        let xs = curve.three_torsion_x();
        // ψ₃ = 3x⁴ + 12x = 3x(x³ + 4) over F₇; roots in F₇: x = 0 and roots
        // of x³ = 3: 3 ≡ 3: cubes mod 7 are {1,6}: no root. So {0}.
        assert_eq!(xs, vec![0]);
    }
}
