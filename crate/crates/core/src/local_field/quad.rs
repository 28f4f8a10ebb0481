//! Constructing the quadratic and cubic extensions the classifier walks
//! through, and re-presenting primitive quartic extensions in tower normal
//! form.
//!
//! Quadratic extensions come out of failed root searches: the square-root
//! and Artin–Schreier obstructions carry exactly the data needed to write
//! down an Eisenstein polynomial (ramified case) or to recognize the
//! unramified quadratic. Cube roots are tame. The quartic case (needed for
//! the field generated by a root of an irreducible 3-torsion quartic in the
//! full-image case) hunts for an odd-valuation element to exhibit a
//! uniformizer, then changes presentation via its minimal polynomial.

use super::base::FieldKind;
use super::roots::{
    artin_schreier_solve, cube_root, poly_eval, sqrt_unit, sqrt_with_certificate,
    ArtinSchreierOutcome, SqrtOutcome,
};
use super::{Certificate, Elem, LocalField};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadExtKind {
    InField,
    Unramified,
    Ramified,
}

/// Result of adjoining a root of y² + b·y + c.
pub struct QuadAdjoin {
    pub field: LocalField,
    /// Roots of the original quadratic inside `field` (two when separable;
    /// one entry for a double root).
    pub roots: Vec<Elem>,
    pub kind: QuadExtKind,
    /// A generator of field over the base with its quadratic minimal
    /// polynomial X² + b·X + c (only set when kind ≠ InField).
    pub gen: Option<(Elem, Elem, Elem)>,
}

/// Solve y² + b·y + c, building the quadratic extension when the roots lie
/// outside the field. Inseparable inputs (equal characteristic, b = 0,
/// non-square c) are an error: the callers only ever pass separable data.
pub fn adjoin_quadratic_root(field: &LocalField, b: &Elem, c: &Elem) -> Result<QuadAdjoin> {
    match field.kind() {
        FieldKind::Mixed => adjoin_quadratic_mixed(field, b, c),
        FieldKind::Equal => adjoin_quadratic_equal(field, b, c),
    }
}

fn adjoin_quadratic_mixed(field: &LocalField, b: &Elem, c: &Elem) -> Result<QuadAdjoin> {
    let half = field.inv(&field.from_i64(2))?;
    let quarter = field.mul(&half, &half);
    let half_b = field.mul(b, &half);
    // z² = D, y = z − b/2
    let d = field.sub(&field.mul(&field.mul(b, b), &quarter), c);
    let finish = |f2: &LocalField, z: &Elem| -> Result<Vec<Elem>> {
        let hb = f2.embed_from(field, &half_b)?;
        Ok(vec![f2.sub(z, &hb), f2.sub(&f2.neg(z), &hb)])
    };
    let v = match field.val(&d) {
        None => {
            // double root at precision
            return Ok(QuadAdjoin {
                field: field.clone(),
                roots: vec![field.neg(&half_b)],
                kind: QuadExtKind::InField,
                gen: None,
            });
        }
        Some(v) => v,
    };
    if v.rem_euclid(2) != 0 {
        // ramified: θ'² = D/π^{v−1}
        let w = v.div_euclid(2);
        let c0 = field.neg(&field.shift_uniformizer(&d, -(v - 1)));
        let poly = vec![c0.clone(), field.zero(), field.one()];
        let ext = field.extend_eisenstein(&poly)?;
        let theta = ext.uniformizer();
        let piw = ext.pow(&ext.embed_from(field, &field.uniformizer())?, w)?;
        let z = ext.mul(&theta, &piw);
        let roots = finish(&ext, &z)?;
        return Ok(QuadAdjoin {
            field: ext.clone(),
            roots,
            kind: QuadExtKind::Ramified,
            gen: Some((
                theta,
                ext.embed_from(field, &field.zero())?,
                ext.embed_from(field, &c0)?,
            )),
        });
    }
    let w = v / 2;
    let (_, u) = field.strip(&d)?;
    match sqrt_unit(field, &u)? {
        SqrtOutcome::Root(r, _) => {
            let z = field.shift_uniformizer(&r, w);
            let roots = finish(field, &z)?;
            Ok(QuadAdjoin {
                field: field.clone(),
                roots,
                kind: QuadExtKind::InField,
                gen: None,
            })
        }
        SqrtOutcome::OddObstruction { approx: a, level: m } => {
            // ξ² − (2a/π^h)ξ + (a²−u)/π^{2h} = 0, h = (m−1)/2; z' = ξπ^h − a
            let h = (m - 1) / 2;
            let diff = field.sub(&field.mul(&a, &a), &u);
            let c0 = field.shift_uniformizer(&diff, -2 * h);
            let c1 = field.neg(&field.shift_uniformizer(&field.mul(&field.from_i64(2), &a), -h));
            let poly = vec![c0.clone(), c1.clone(), field.one()];
            let ext = field.extend_eisenstein(&poly)?;
            let theta = ext.uniformizer();
            let pih = ext.pow(&ext.embed_from(field, &field.uniformizer())?, h)?;
            let a_up = ext.embed_from(field, &a)?;
            let zu = ext.sub(&ext.mul(&theta, &pih), &a_up); // √u
            let piw = ext.pow(&ext.embed_from(field, &field.uniformizer())?, w)?;
            let z = ext.mul(&zu, &piw);
            let roots = finish(&ext, &z)?;
            Ok(QuadAdjoin {
                field: ext.clone(),
                roots,
                kind: QuadExtKind::Ramified,
                gen: Some((
                    theta,
                    ext.embed_from(field, &c1)?,
                    ext.embed_from(field, &c0)?,
                )),
            })
        }
        SqrtOutcome::UnramifiedObstruction { .. } => {
            let ext = field.extend_unramified(2)?;
            let u_up = ext.embed_from(field, &u)?;
            let r = match sqrt_unit(&ext, &u_up)? {
                SqrtOutcome::Root(r, _) => r,
                _ => {
                    return Err(Error::internal(
                        "unit not square in the unramified quadratic extension".to_string(),
                    ))
                }
            };
            let piw = ext.pow(&ext.embed_from(field, &field.uniformizer())?, w)?;
            let z = ext.mul(&r, &piw);
            let roots = finish(&ext, &z)?;
            let (gen, gb, gc) = unramified_generator_minpoly(&ext, field)?;
            Ok(QuadAdjoin {
                field: ext,
                roots,
                kind: QuadExtKind::Unramified,
                gen: Some((gen, gb, gc)),
            })
        }
    }
}

fn adjoin_quadratic_equal(field: &LocalField, b: &Elem, c: &Elem) -> Result<QuadAdjoin> {
    if field.is_zero_at_prec(b) {
        // y² = c (characteristic 2): inseparable unless c is a square
        let (root, _, _) = sqrt_with_certificate(field, c)?;
        return match root {
            Some(r) => Ok(QuadAdjoin {
                field: field.clone(),
                roots: vec![r],
                kind: QuadExtKind::InField,
                gen: None,
            }),
            None => Err(Error::internal(
                "inseparable quadratic: y² = non-square in characteristic 2".to_string(),
            )),
        };
    }
    // y = b·z, z² + z = d with d = c/b²
    let d = field.div(c, &field.mul(b, b))?;
    match artin_schreier_solve(field, &d)? {
        ArtinSchreierOutcome::Roots(z1, z2) => Ok(QuadAdjoin {
            field: field.clone(),
            roots: vec![field.mul(b, &z1), field.mul(b, &z2)],
            kind: QuadExtKind::InField,
            gen: None,
        }),
        ArtinSchreierOutcome::OddObstruction {
            reduced,
            partial,
            level,
        } => {
            // ξ² + π^h ξ + d_red·π^{2h} = 0, h = (−level+1)/2; z = ξ/π^h + partial
            let m = -level;
            let h = (m + 1) / 2;
            let pi = field.uniformizer();
            let c0 = field.shift_uniformizer(&reduced, 2 * h);
            let c1 = field.shift_uniformizer(&field.one(), h);
            let poly = vec![c0.clone(), c1.clone(), field.one()];
            let ext = field.extend_eisenstein(&poly)?;
            let theta = ext.uniformizer();
            let pih_inv = ext.inv(&ext.pow(&ext.embed_from(field, &pi)?, h)?)?;
            let z_red = ext.mul(&theta, &pih_inv);
            let z = ext.add(&z_red, &ext.embed_from(field, &partial)?);
            let b_up = ext.embed_from(field, b)?;
            let y1 = ext.mul(&b_up, &z);
            let y2 = ext.add(&y1, &b_up);
            Ok(QuadAdjoin {
                field: ext.clone(),
                roots: vec![y1, y2],
                kind: QuadExtKind::Ramified,
                gen: Some((
                    theta,
                    ext.embed_from(field, &c1)?,
                    ext.embed_from(field, &c0)?,
                )),
            })
        }
        ArtinSchreierOutcome::TraceObstruction { .. } => {
            let ext = field.extend_unramified(2)?;
            let d_up = ext.embed_from(field, &d)?;
            let (z1, z2) = match artin_schreier_solve(&ext, &d_up)? {
                ArtinSchreierOutcome::Roots(z1, z2) => (z1, z2),
                _ => {
                    return Err(Error::internal(
                        "Artin–Schreier class survives the unramified quadratic".to_string(),
                    ))
                }
            };
            let b_up = ext.embed_from(field, b)?;
            let roots = vec![ext.mul(&b_up, &z1), ext.mul(&b_up, &z2)];
            let (gen, gb, gc) = unramified_generator_minpoly(&ext, field)?;
            Ok(QuadAdjoin {
                field: ext,
                roots,
                kind: QuadExtKind::Unramified,
                gen: Some((gen, gb, gc)),
            })
        }
    }
}

/// The floor generator of an unramified quadratic extension together with
/// its quadratic minimal polynomial X² + B·X + C over the base.
fn unramified_generator_minpoly(
    ext: &LocalField,
    base: &LocalField,
) -> Result<(Elem, Elem, Elem)> {
    // ω' generates; its conjugate is the f-th Frobenius power
    let teich = ext.teichmuller()?;
    let mut conj = teich.clone();
    for _ in 0..base.f() {
        conj = ext.frobenius_floor(&conj)?;
    }
    let sum = ext.add(&teich, &conj);
    let prod = ext.mul(&teich, &conj);
    let b = ext.neg(&sum);
    // both are base-field elements; verify membership and keep them upstairs
    for x in [&b, &prod] {
        let (ok, _) = ext.subfield_membership(x, base)?;
        if !ok {
            return Err(Error::internal(
                "unramified generator trace/norm not in the base".to_string(),
            ));
        }
    }
    Ok((teich, b, prod))
}

/// Adjoin a cube root of x (tame: either already present, or a ramified
/// Eisenstein cubic, or the unramified cubic when the residue is a non-cube).
pub struct CubeAdjoin {
    pub field: LocalField,
    pub root: Elem,
    pub kind: QuadExtKind, // InField / Unramified / Ramified, degree 3
}

pub fn adjoin_cube_root(field: &LocalField, x: &Elem) -> Result<CubeAdjoin> {
    let v = field.certified_val(x)?;
    let r = v.rem_euclid(3);
    if r == 0 {
        if let Some((root, _)) = cube_root(field, x)? {
            return Ok(CubeAdjoin {
                field: field.clone(),
                root,
                kind: QuadExtKind::InField,
            });
        }
        // unit-part residue is a non-cube: unramified cubic extension
        let ext = field.extend_unramified(3)?;
        let x_up = ext.embed_from(field, x)?;
        let (root, _) = cube_root(&ext, &x_up)?.ok_or_else(|| {
            Error::internal("residue still non-cube in the unramified cubic".to_string())
        })?;
        return Ok(CubeAdjoin {
            field: ext,
            root,
            kind: QuadExtKind::Unramified,
        });
    }
    let a = v.div_euclid(3);
    let (_, u) = field.strip(x)?;
    let pi = field.uniformizer();
    if r == 1 {
        // θ'³ = u·π, root = θ'·π^a
        let c0 = field.neg(&field.shift_uniformizer(&u, 1));
        let poly = vec![c0, field.zero(), field.zero(), field.one()];
        let ext = field.extend_eisenstein(&poly)?;
        let theta = ext.uniformizer();
        let pia = ext.pow(&ext.embed_from(field, &pi)?, a)?;
        let root = ext.mul(&theta, &pia);
        Ok(CubeAdjoin {
            field: ext,
            root,
            kind: QuadExtKind::Ramified,
        })
    } else {
        // θ'³ = u²·π, root = π^a·θ'²/u
        let u2 = field.mul(&u, &u);
        let c0 = field.neg(&field.shift_uniformizer(&u2, 1));
        let poly = vec![c0, field.zero(), field.zero(), field.one()];
        let ext = field.extend_eisenstein(&poly)?;
        let theta = ext.uniformizer();
        let th2 = ext.mul(&theta, &theta);
        let pia = ext.pow(&ext.embed_from(field, &pi)?, a)?;
        let u_up = ext.embed_from(field, &u)?;
        let root = ext.div(&ext.mul(&th2, &pia), &u_up)?;
        Ok(CubeAdjoin {
            field: ext,
            root,
            kind: QuadExtKind::Ramified,
        })
    }
}

// ---------------------------------------------------------------------------
// element-level linear algebra
// ---------------------------------------------------------------------------

/// Solve M·x = rhs over the field (M row-major, square). None when M is
/// singular at the working precision.
pub fn solve_linear(
    field: &LocalField,
    rows: &[Vec<Elem>],
    rhs: &[Elem],
) -> Result<Option<Vec<Elem>>> {
    let n = rows.len();
    let mut m: Vec<Vec<Elem>> = rows.to_vec();
    let mut b: Vec<Elem> = rhs.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    for col in 0..n {
        // pivot: minimal certified valuation in this column
        let mut best: Option<(usize, i64)> = None;
        for (r, _) in perm.iter().enumerate().take(n).skip(col) {
            if let Some(v) = field.val(&m[r][col]) {
                if best.map(|(_, bv)| v < bv).unwrap_or(true) {
                    best = Some((r, v));
                }
            }
        }
        let (prow, _) = match best {
            Some(p) => p,
            None => return Ok(None),
        };
        m.swap(col, prow);
        b.swap(col, prow);
        perm.swap(col, prow);
        let pivot = m[col][col].clone();
        for r in 0..n {
            if r == col {
                continue;
            }
            if field.val(&m[r][col]).is_none() {
                continue;
            }
            let factor = field.div(&m[r][col], &pivot)?;
            for cc in col..n {
                let t = field.mul(&factor, &m[col][cc]);
                m[r][cc] = field.sub(&m[r][cc], &t);
            }
            let t = field.mul(&factor, &b[col]);
            b[r] = field.sub(&b[r], &t);
        }
    }
    let mut x = vec![field.zero(); n];
    for i in 0..n {
        x[i] = field.div(&b[i], &m[i][i])?;
    }
    Ok(Some(x))
}

/// Determinant by valuation-pivoted elimination.
pub fn det(field: &LocalField, rows: &[Vec<Elem>]) -> Result<Elem> {
    let n = rows.len();
    let mut m: Vec<Vec<Elem>> = rows.to_vec();
    let mut sign = false;
    let mut acc = field.one();
    for col in 0..n {
        let mut best: Option<(usize, i64)> = None;
        for (r, row) in m.iter().enumerate().take(n).skip(col) {
            if let Some(v) = field.val(&row[col]) {
                if best.map(|(_, bv)| v < bv).unwrap_or(true) {
                    best = Some((r, v));
                }
            }
        }
        let (prow, _) = match best {
            Some(p) => p,
            None => return Ok(field.zero()), // singular at precision
        };
        if prow != col {
            m.swap(col, prow);
            sign = !sign;
        }
        let pivot = m[col][col].clone();
        acc = field.mul(&acc, &pivot);
        for r in col + 1..n {
            if field.val(&m[r][col]).is_none() {
                continue;
            }
            let factor = field.div(&m[r][col], &pivot)?;
            for cc in col..n {
                let t = field.mul(&factor, &m[col][cc]);
                m[r][cc] = field.sub(&m[r][cc], &t);
            }
        }
    }
    if sign {
        acc = field.neg(&acc);
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// quotient ring F[x]/(h) and the quartic normal form
// ---------------------------------------------------------------------------

/// F[x]/(h) for monic h; elements are coefficient vectors of length deg h.
pub struct QuotientRing {
    pub field: LocalField,
    pub modulus: Vec<Elem>,
    pub degree: usize,
}

impl QuotientRing {
    pub fn new(field: &LocalField, modulus: Vec<Elem>) -> QuotientRing {
        let degree = modulus.len() - 1;
        QuotientRing {
            field: field.clone(),
            modulus,
            degree,
        }
    }

    pub fn zero(&self) -> Vec<Elem> {
        vec![self.field.zero(); self.degree]
    }

    pub fn one(&self) -> Vec<Elem> {
        let mut v = self.zero();
        v[0] = self.field.one();
        v
    }

    pub fn gen(&self) -> Vec<Elem> {
        let mut v = self.zero();
        v[1] = self.field.one();
        v
    }

    pub fn scalar(&self, c: &Elem) -> Vec<Elem> {
        let mut v = self.zero();
        v[0] = c.clone();
        v
    }

    pub fn add(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        a.iter()
            .zip(b.iter())
            .map(|(p, q)| self.field.add(p, q))
            .collect()
    }

    pub fn sub(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        a.iter()
            .zip(b.iter())
            .map(|(p, q)| self.field.sub(p, q))
            .collect()
    }

    pub fn mul(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        let f = &self.field;
        let d = self.degree;
        let mut prod = vec![f.zero(); 2 * d - 1];
        for (i, p) in a.iter().enumerate() {
            if f.is_zero_at_prec(p) {
                continue;
            }
            for (j, q) in b.iter().enumerate() {
                let t = f.mul(p, q);
                prod[i + j] = f.add(&prod[i + j], &t);
            }
        }
        // reduce by the monic modulus
        for top in (d..2 * d - 1).rev() {
            let c = prod[top].clone();
            if f.is_zero_at_prec(&c) {
                continue;
            }
            for i in 0..d {
                let t = f.mul(&c, &self.modulus[i]);
                prod[top - d + i] = f.sub(&prod[top - d + i], &t);
            }
            prod[top] = f.zero();
        }
        prod.truncate(d);
        prod
    }

    pub fn pow(&self, a: &[Elem], mut e: u64) -> Vec<Elem> {
        let mut acc = self.one();
        let mut cur = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &cur);
            }
            e >>= 1;
            if e > 0 {
                cur = self.mul(&cur, &cur);
            }
        }
        acc
    }

    /// Matrix of multiplication by a, columns = a·x^j.
    pub fn mult_matrix(&self, a: &[Elem]) -> Vec<Vec<Elem>> {
        let d = self.degree;
        let mut cols = Vec::with_capacity(d);
        let mut cur = a.to_vec();
        cols.push(cur.clone());
        for _ in 1..d {
            cur = self.mul(&cur, &self.gen());
            cols.push(cur.clone());
        }
        // transpose to row-major
        (0..d)
            .map(|r| (0..d).map(|c| cols[c][r].clone()).collect())
            .collect()
    }

    pub fn norm(&self, a: &[Elem]) -> Result<Elem> {
        det(&self.field, &self.mult_matrix(a))
    }

    /// Valuation of the norm; None when indistinguishable from zero.
    pub fn norm_val(&self, a: &[Elem]) -> Result<Option<i64>> {
        Ok(self.field.val(&self.norm(a)?))
    }

    pub fn inv(&self, a: &[Elem]) -> Result<Vec<Elem>> {
        let m = self.mult_matrix(a);
        let mut rhs = vec![self.field.zero(); self.degree];
        rhs[0] = self.field.one();
        solve_linear(&self.field, &m, &rhs)?
            .ok_or_else(|| Error::precision("quotient-ring inverse: singular at precision".to_string()))
    }
}

/// Re-present a totally ramified quartic F[x]/(h) in tower normal form.
/// Returns the Eisenstein extension and the image of x in it. The input must
/// be monic, integral, irreducible with trivial residue extension; both are
/// certified as the hunt proceeds (failure surfaces as an error).
pub fn normalize_totally_ramified_quartic(
    field: &LocalField,
    h: &[Elem],
) -> Result<(LocalField, Elem)> {
    let d = h.len() - 1;
    if d != 4 {
        return Err(Error::invalid("expected a quartic".to_string()));
    }
    let ring = QuotientRing::new(field, h.to_vec());
    let xbar = ring.gen();
    let pi = field.uniformizer();
    // val'(ξ) := v_F(N(ξ)), the valuation normalized to v'(uniformizer) = 1
    // when the extension is totally ramified (e = d).
    let val_of = |a: &[Elem]| -> Result<Option<i64>> { ring.norm_val(a) };
    let a_val = val_of(&xbar)?
        .ok_or_else(|| Error::precision("norm of the quartic generator uncertified".to_string()))?;

    // produce an element of odd valuation
    let odd_elem: (Vec<Elem>, i64) = if a_val.rem_euclid(2) == 1 {
        (xbar.clone(), a_val)
    } else {
        hunt_odd_valuation(&ring, &xbar, a_val)?
    };
    // combine to valuation exactly 1: ξ^p · π^q with p·v + 4q = 1
    let (xi, v) = odd_elem;
    let (p, q) = bezout(v, 4).ok_or_else(|| {
        Error::internal("odd valuation not coprime to 4".to_string())
    })?;
    let xi_p = if p >= 0 {
        ring.pow(&xi, p as u64)
    } else {
        ring.pow(&ring.inv(&xi)?, (-p) as u64)
    };
    let piq = ring.scalar(&field.pow(&pi, q)?);
    let mu = ring.mul(&xi_p, &piq);
    debug_assert_eq!(val_of(&mu)?, Some(1));

    // minimal polynomial of μ: solve μ⁴ = Σ c_i μ^i
    let mut pows = Vec::with_capacity(5);
    let mut cur = ring.one();
    for _ in 0..5 {
        pows.push(cur.clone());
        cur = ring.mul(&cur, &mu);
    }
    let mat: Vec<Vec<Elem>> = (0..4)
        .map(|r| (0..4).map(|c| pows[c][r].clone()).collect())
        .collect();
    let rhs: Vec<Elem> = (0..4).map(|r| pows[4][r].clone()).collect();
    let sol = solve_linear(field, &mat, &rhs)?
        .ok_or_else(|| Error::internal("uniformizer generates a proper subfield".to_string()))?;
    // minpoly = X⁴ − c₃X³ − c₂X² − c₁X − c₀
    let minpoly: Vec<Elem> = sol
        .iter()
        .map(|c| field.neg(c))
        .chain(std::iter::once(field.one()))
        .collect();
    let ext = field.extend_eisenstein(&minpoly)?;

    // express x̄ in powers of μ: solve with the same matrix
    let xrhs: Vec<Elem> = (0..4).map(|r| xbar[r].clone()).collect();
    let xc = solve_linear(field, &mat, &xrhs)?
        .ok_or_else(|| Error::internal("cannot express the generator in the new basis".to_string()))?;
    let theta = ext.uniformizer();
    let mut alpha = ext.zero();
    for (i, c) in xc.iter().enumerate() {
        let c_up = ext.embed_from(field, c)?;
        let term = ext.mul(&c_up, &ext.pow(&theta, i as i64)?);
        alpha = ext.add(&alpha, &term);
    }
    // sanity: h(α) ≈ 0
    let h_up: Vec<Elem> = h
        .iter()
        .map(|c| ext.embed_from(field, c))
        .collect::<Result<Vec<_>>>()?;
    let resid = poly_eval(&ext, &h_up, &alpha);
    if let Some(v) = ext.val(&resid) {
        if v < ext.precision() / 2 {
            return Err(Error::internal(format!(
                "quartic re-presentation failed: residual valuation {}",
                v
            )));
        }
    }
    Ok((ext, alpha))
}

/// Two-level greedy for an odd-valuation element of a primitive totally
/// ramified quartic.
///
/// Level 1 maximizes v'(x̄ − c) over c ∈ K: base subtractions can only kill
/// valuation levels ≡ 0 (mod 4), and since x̄ ∉ K the supremum is finite and
/// lands outside 4Z. If it is odd we are done. If it is ≡ 2 (mod 4), level 2
/// maximizes v'(ξ² − b·ξ − z) over b, z ∈ K: levels ≡ 0 are killed by z,
/// levels ≡ 2 by b (they differ from v'(ξ) by a multiple of 4), so the
/// finite supremum — finite because ξ satisfies no quadratic over K, the
/// extension being primitive — is necessarily odd.
fn hunt_odd_valuation(
    ring: &QuotientRing,
    xbar: &[Elem],
    a_val: i64,
) -> Result<(Vec<Elem>, i64)> {
    let field = &ring.field;
    let pi = field.uniformizer();
    let cap = 4 * field.precision().max(64);
    // the unique residue approximation of a valuation-0 element
    let residue_of = |u: &[Elem]| -> Result<Option<u64>> {
        let fq = field.residue_field();
        for r in 0..fq.order() {
            let cand = ring.sub(u, &ring.scalar(&field.lift_residue(r)));
            match ring.norm_val(&cand)? {
                None => {
                    return Err(Error::precision(
                        "quartic residue peeling hit the precision floor".to_string(),
                    ))
                }
                Some(v) if v > 0 => return Ok(Some(r)),
                _ => {}
            }
        }
        Ok(None)
    };

    // level 1
    let mut xi = xbar.to_vec();
    let mut v = a_val;
    for _ in 0..cap {
        if v.rem_euclid(2) == 1 {
            return Ok((xi, v));
        }
        if v.rem_euclid(4) != 0 {
            break; // ≡ 2 (mod 4): base subtractions cannot reach this level
        }
        let unit = ring.mul(&xi, &ring.scalar(&field.pow(&pi, -v / 4)?));
        let r = residue_of(&unit)?.ok_or_else(|| {
            Error::internal("valuation-0 element without residue approximation".to_string())
        })?;
        let corr = ring.scalar(&field.mul(
            &field.lift_residue(r),
            &field.pow(&pi, v / 4)?,
        ));
        xi = ring.sub(&xi, &corr);
        v = ring
            .norm_val(&xi)?
            .ok_or_else(|| Error::precision("level-1 greedy lost the element".to_string()))?;
    }
    let p1 = v; // ≡ 2 (mod 4)

    // level 2: ρ = ξ² − b·ξ − z
    let mut rho = ring.mul(&xi, &xi);
    for _ in 0..cap {
        let vr = ring
            .norm_val(&rho)?
            .ok_or_else(|| Error::precision("level-2 greedy lost the element".to_string()))?;
        if vr.rem_euclid(2) == 1 {
            return Ok((rho, vr));
        }
        if vr.rem_euclid(4) == 0 {
            let unit = ring.mul(&rho, &ring.scalar(&field.pow(&pi, -vr / 4)?));
            let r = residue_of(&unit)?.ok_or_else(|| {
                Error::internal("valuation-0 element without residue approximation".to_string())
            })?;
            let corr = ring.scalar(&field.mul(
                &field.lift_residue(r),
                &field.pow(&pi, vr / 4)?,
            ));
            rho = ring.sub(&rho, &corr);
        } else {
            // vr ≡ 2 (mod 4): match against π^j·ξ with 4j + p₁ = vr
            let j = (vr - p1) / 4;
            if j < 0 {
                return Err(Error::internal("level-2 valuation below the seed".to_string()));
            }
            let scaled_xi = ring.mul(&xi, &ring.scalar(&field.pow(&pi, j)?));
            let unit = ring.mul(&rho, &ring.inv(&scaled_xi)?);
            let r = residue_of(&unit)?.ok_or_else(|| {
                Error::internal("valuation-0 element without residue approximation".to_string())
            })?;
            let corr = ring.mul(&scaled_xi, &ring.scalar(&field.lift_residue(r)));
            rho = ring.sub(&rho, &corr);
        }
    }
    Err(Error::precision("odd-valuation hunt exceeded its budget".to_string()))
}

fn bezout(a: i64, b: i64) -> Option<(i64, i64)> {
    // p·a + q·b = gcd(a,b); return scaled to = 1 when coprime
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i64, 0i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 == 1 {
        Some((s0, t0))
    } else if r0 == -1 {
        Some((-s0, -t0))
    } else {
        None
    }
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
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
    use crate::local_field::base::FieldKind;
    use crate::local_field::roots::poly_eval;

    fn q2(prec: i64) -> LocalField {
        LocalField::make_base(FieldKind::Mixed, 1, prec).unwrap()
    }
    fn f2t(prec: i64) -> LocalField {
        LocalField::make_base(FieldKind::Equal, 1, prec).unwrap()
    }

    fn check_roots(adj: &QuadAdjoin, base: &LocalField, b: &Elem, c: &Elem) {
        let f = &adj.field;
        let b_up = f.embed_from(base, b).unwrap();
        let c_up = f.embed_from(base, c).unwrap();
        for y in &adj.roots {
            let lhs = f.add(&f.add(&f.mul(y, y), &f.mul(&b_up, y)), &c_up);
            assert!(
                f.is_zero_at_prec(&lhs) || f.val(&lhs).unwrap() > f.precision() / 2,
                "root fails: residual {:?}",
                f.val(&lhs)
            );
        }
    }

    #[test]
    fn quadratic_in_field_mixed() {
        let k = q2(64);
        // y² − 17: roots in Q₂
        let adj = adjoin_quadratic_root(&k, &k.zero(), &k.from_i64(-17)).unwrap();
        assert_eq!(adj.kind, QuadExtKind::InField);
        assert_eq!(adj.roots.len(), 2);
        check_roots(&adj, &k, &k.zero(), &k.from_i64(-17));
    }

    #[test]
    fn quadratic_ramified_odd_valuation() {
        let k = q2(64);
        // y² = 2
        let adj = adjoin_quadratic_root(&k, &k.zero(), &k.from_i64(-2)).unwrap();
        assert_eq!(adj.kind, QuadExtKind::Ramified);
        assert_eq!(adj.field.e(), 2);
        check_roots(&adj, &k, &k.zero(), &k.from_i64(-2));
    }

    #[test]
    fn quadratic_ramified_unit_mixed() {
        let k = q2(64);
        // y² = 3: ramified with unit discriminant (3 ≡ 3 mod 8)
        let adj = adjoin_quadratic_root(&k, &k.zero(), &k.from_i64(-3)).unwrap();
        assert_eq!(adj.kind, QuadExtKind::Ramified);
        check_roots(&adj, &k, &k.zero(), &k.from_i64(-3));
    }

    #[test]
    fn quadratic_unramified_mixed() {
        let k = q2(64);
        // y² = 5: 5 ≡ 5 mod 8, unramified quadratic
        let adj = adjoin_quadratic_root(&k, &k.zero(), &k.from_i64(-5)).unwrap();
        assert_eq!(adj.kind, QuadExtKind::Unramified);
        assert_eq!(adj.field.f(), 2);
        assert_eq!(adj.field.e(), 1);
        check_roots(&adj, &k, &k.zero(), &k.from_i64(-5));
    }

    #[test]
    fn quadratic_equal_char_cases() {
        let k = f2t(64);
        let t = k.uniformizer();
        // y² + y = t: in field
        let adj = adjoin_quadratic_root(&k, &k.one(), &t).unwrap();
        assert_eq!(adj.kind, QuadExtKind::InField);
        check_roots(&adj, &k, &k.one(), &t);
        // y² + y = t⁻¹: ramified
        let tinv = k.inv(&t).unwrap();
        let adj = adjoin_quadratic_root(&k, &k.one(), &tinv).unwrap();
        assert_eq!(adj.kind, QuadExtKind::Ramified);
        check_roots(&adj, &k, &k.one(), &tinv);
        // y² + y = 1: unramified (trace obstruction over F₂)
        let adj = adjoin_quadratic_root(&k, &k.one(), &k.one()).unwrap();
        assert_eq!(adj.kind, QuadExtKind::Unramified);
        check_roots(&adj, &k, &k.one(), &k.one());
    }

    #[test]
    fn cube_root_adjoin_cases() {
        let k = q2(64);
        // −1728 is a cube already
        let adj = adjoin_cube_root(&k, &k.from_i64(-1728)).unwrap();
        assert_eq!(adj.kind, QuadExtKind::InField);
        // 2: ramified cubic
        let adj = adjoin_cube_root(&k, &k.from_i64(2)).unwrap();
        assert_eq!(adj.kind, QuadExtKind::Ramified);
        assert_eq!(adj.field.e(), 3);
        let cube = adj.field.pow(&adj.root, 3).unwrap();
        let two = adj.field.embed_from(&k, &k.from_i64(2)).unwrap();
        assert!(adj.field.eq_at_prec(&cube, &two));
        // t⁴ over F₂((t)): ramified, root t·t^{1/3}
        let kt = f2t(48);
        let t4 = kt.pow(&kt.uniformizer(), 4).unwrap();
        let adj = adjoin_cube_root(&kt, &t4).unwrap();
        assert_eq!(adj.kind, QuadExtKind::Ramified);
        let cube = adj.field.pow(&adj.root, 3).unwrap();
        let t4_up = adj.field.embed_from(&kt, &t4).unwrap();
        assert!(adj.field.eq_at_prec(&cube, &t4_up));
        // non-cube residue: ω over the unramified quadratic (f = 2)
        let k2 = LocalField::make_base(FieldKind::Mixed, 2, 48).unwrap();
        let om = k2.teichmuller().unwrap();
        let adj = adjoin_cube_root(&k2, &om).unwrap();
        assert_eq!(adj.kind, QuadExtKind::Unramified);
        assert_eq!(adj.field.f(), 6);
        let cube = adj.field.pow(&adj.root, 3).unwrap();
        let om_up = adj.field.embed_from(&k2, &om).unwrap();
        assert!(adj.field.eq_at_prec(&cube, &om_up));
    }

    #[test]
    fn linear_algebra_small() {
        let k = q2(64);
        let rows = vec![
            vec![k.from_i64(2), k.from_i64(1)],
            vec![k.from_i64(3), k.from_i64(5)],
        ];
        let rhs = vec![k.from_i64(5), k.from_i64(18)];
        let x = solve_linear(&k, &rows, &rhs).unwrap().unwrap();
        assert!(k.eq_at_prec(&x[0], &k.from_i64(1)));
        assert!(k.eq_at_prec(&x[1], &k.from_i64(3)));
        let d = det(&k, &rows).unwrap();
        assert!(k.eq_at_prec(&d, &k.from_i64(7)));
    }

    #[test]
    fn quartic_normal_form() {
        let k = q2(64);
        // x⁴ − 2: totally ramified quartic, already Eisenstein
        let h = vec![k.from_i64(-2), k.zero(), k.zero(), k.zero(), k.one()];
        let (ext, alpha) = normalize_totally_ramified_quartic(&k, &h).unwrap();
        assert_eq!(ext.e(), 4);
        let a4 = ext.pow(&alpha, 4).unwrap();
        let two = ext.embed_from(&k, &k.from_i64(2)).unwrap();
        assert!(ext.eq_at_prec(&a4, &two));
        // x⁴ + 2x + 2 (Eisenstein) but enter via a non-uniformizer generator:
        // substitute x ← x + 2 so the generator has even-looking norms
        let h0 = vec![k.from_i64(2), k.from_i64(2), k.zero(), k.zero(), k.one()];
        let shifted = crate::local_field::roots::taylor_shift(&k, &h0, &k.from_i64(2));
        let (ext2, alpha2) = normalize_totally_ramified_quartic(&k, &shifted).unwrap();
        assert_eq!(ext2.e(), 4);
        let h_up: Vec<Elem> = shifted
            .iter()
            .map(|c| ext2.embed_from(&k, c).unwrap())
            .collect();
        let resid = poly_eval(&ext2, &h_up, &alpha2);
        assert!(ext2.is_zero_at_prec(&resid) || ext2.val(&resid).unwrap() > 20);
    }
}
