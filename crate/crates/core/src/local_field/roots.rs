//! Certified root finding over dyadic towers.
//!
//! `poly_roots` enumerates integer Newton-polygon slopes, reduces each to a
//! unit-root problem and isolates roots Panayi-style: simple residue roots
//! are Hensel-lifted, multiple residue roots are refined recursively. Square
//! roots use digit-greedy algorithms (the wild quadratic case needs an
//! Artin–Schreier step at level 2·v(2) in mixed characteristic; squaring is
//! the Frobenius in equal characteristic), cube roots are tame Hensel.

use super::base::FieldKind;
use super::{Certificate, Elem, LocalField, NoRootReason};
use crate::error::{Error, Result};

/// Evaluate Σ coeffs[i]·x^i.
pub fn poly_eval(field: &LocalField, coeffs: &[Elem], x: &Elem) -> Elem {
    let mut acc = field.zero();
    for c in coeffs.iter().rev() {
        acc = field.mul(&acc, x);
        acc = field.add(&acc, c);
    }
    acc
}

/// Formal derivative.
pub fn poly_derivative(field: &LocalField, coeffs: &[Elem]) -> Vec<Elem> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| field.mul(&field.from_i64(i as i64), c))
        .collect()
}

/// Newton-refine an approximation satisfying the dominance condition
/// v(h(x)) > 2·v(h'(x)). Returns the refined root and its certificate.
///
/// In the ultrametric the distance to the true root is exactly
/// v(h(x)) − v(h'(x)), so the approximation's precision is refreshed from
/// that bound every round; Newton's self-correction makes this sound and it
/// keeps long iterations from eroding the window.
pub fn hensel_refine(field: &LocalField, coeffs: &[Elem], x0: &Elem) -> Result<(Elem, Certificate)> {
    let deriv = poly_derivative(field, coeffs);
    let mut x = x0.clone();
    let done = |x: Elem, residual: i64, dv: i64| -> Result<(Elem, Certificate)> {
        if residual <= 2 * dv {
            return Err(Error::precision(format!(
                "Hensel residual {} not beyond the dominance bound {}",
                residual,
                2 * dv
            )));
        }
        let out = refresh_prec(field, &x, residual - dv);
        Ok((
            out,
            Certificate::RootFound {
                residual_val: residual,
                derivative_val: dv,
            },
        ))
    };
    let dv = field
        .certified_val(&poly_eval(field, &deriv, &x))
        .map_err(|_| Error::precision("derivative indistinguishable from zero".to_string()))?;
    let h0 = poly_eval(field, coeffs, &x);
    let mut last = match field.val(&h0) {
        Some(v) => v,
        None => return done(x, h0.precision(), dv),
    };
    if last <= 2 * dv {
        return Err(Error::precision(format!(
            "Hensel dominance fails: v(h) = {} <= 2 v(h') = {}",
            last,
            2 * dv
        )));
    }
    for _ in 0..64 {
        let dh = poly_eval(field, &deriv, &x);
        let h = poly_eval(field, coeffs, &x);
        let corr = field.div(&h, &dh)?;
        x = field.sub(&x, &corr);
        // the distance to the true root is v(h_new) − dv; restore that much
        // precision on the approximation
        let h2 = poly_eval(field, coeffs, &x);
        match field.val(&h2) {
            None => return done(x, h2.precision(), dv),
            Some(v) => {
                x = refresh_prec(field, &x, v - dv);
                if v <= last {
                    return done(x, v, dv);
                }
                last = v;
            }
        }
    }
    let h = poly_eval(field, coeffs, &x);
    let residual = field.val(&h).unwrap_or(h.precision());
    done(x, residual, dv)
}

/// Adjust the claimed precision of a Newton approximation to `claim`: the
/// stored value is an exact field element, and under Hensel dominance the
/// ultrametric distance to the true root equals v(h(x)) − v(h'(x)), so
/// claiming exactly that many digits is sound.
fn refresh_prec(field: &LocalField, x: &Elem, claim: i64) -> Elem {
    let mut e = x.clone();
    e.prec = field.clamp_prec(claim, e.shift);
    e
}

/// All roots of the polynomial lying in the field, each certified. The input
/// must be separable; coefficients whose valuations cannot be certified
/// below the Newton polygon raise precision errors.
pub fn poly_roots(field: &LocalField, coeffs: &[Elem]) -> Result<Vec<(Elem, Certificate)>> {
    let mut poly: Vec<Elem> = coeffs.to_vec();
    while poly.len() > 1 && field.is_zero_at_prec(poly.last().unwrap()) {
        let lead = poly.last().unwrap();
        if lead.precision() < field.precision() / 2 {
            return Err(Error::precision("leading coefficient uncertifiable".to_string()));
        }
        poly.pop();
    }
    if poly.len() <= 1 {
        return Err(Error::invalid("constant polynomial".to_string()));
    }
    let mut out: Vec<(Elem, Certificate)> = vec![];

    // exact zero root: constant term stored zero
    if field.is_zero_at_prec(&poly[0]) {
        let dv = field
            .certified_val(&poly[1])
            .map_err(|_| Error::precision("cannot certify simple zero root".to_string()))?;
        if poly[0].precision() <= 2 * dv {
            return Err(Error::precision("zero root not Hensel-separated".to_string()));
        }
        out.push((
            field.zero(),
            Certificate::RootFound {
                residual_val: poly[0].precision(),
                derivative_val: dv,
            },
        ));
        poly.remove(0);
        if field.is_zero_at_prec(&poly[0]) {
            return Err(Error::internal("double root at zero: input not separable".to_string()));
        }
    }

    // integralize: subtract the minimal certified valuation
    let mut min_v = i64::MAX;
    for c in &poly {
        if let Some(v) = field.val(c) {
            min_v = min_v.min(v);
        }
    }
    if min_v == i64::MAX {
        return Err(Error::precision("polynomial indistinguishable from zero".to_string()));
    }
    let poly: Vec<Elem> = poly
        .iter()
        .map(|c| field.shift_uniformizer(c, -min_v))
        .collect();

    let deg = poly.len() - 1;
    let mut pts: Vec<(i64, i64)> = vec![];
    for (i, c) in poly.iter().enumerate() {
        if let Some(v) = field.val(c) {
            pts.push((i as i64, v));
        }
    }
    if pts.last().map(|&(i, _)| i) != Some(deg as i64) {
        return Err(Error::precision("leading coefficient valuation uncertified".to_string()));
    }
    let hull = lower_hull(&pts);
    for (i, c) in poly.iter().enumerate() {
        if field.val(c).is_none() {
            let bound = hull_value(&hull, i as i64);
            if c.precision() < bound {
                return Err(Error::precision(format!(
                    "coefficient {} uncertified below the Newton polygon",
                    i
                )));
            }
        }
    }
    let mut slopes: Vec<i64> = vec![];
    for w in hull.windows(2) {
        let (i1, v1) = w[0];
        let (i2, v2) = w[1];
        let num = v1 - v2;
        let den = i2 - i1;
        if num % den == 0 {
            let s = num / den;
            if !slopes.contains(&s) {
                slopes.push(s);
            }
        }
    }
    for s in slopes {
        let mut q: Vec<Elem> = poly
            .iter()
            .enumerate()
            .map(|(i, c)| field.shift_uniformizer(c, s * i as i64))
            .collect();
        let mut mv = i64::MAX;
        for c in &q {
            if let Some(v) = field.val(c) {
                mv = mv.min(v);
            }
        }
        for c in q.iter_mut() {
            *c = field.shift_uniformizer(c, -mv);
        }
        let unit_roots = integral_roots_inner(field, &q, 0, true)?;
        for (r, cert) in unit_roots {
            out.push((field.shift_uniformizer(&r, s), cert));
        }
    }
    Ok(out)
}

fn lower_hull(pts: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut hull: Vec<(i64, i64)> = vec![];
    for &p in pts {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            if (b.1 - a.1) * (p.0 - a.0) <= (p.1 - a.1) * (b.0 - a.0) {
                break;
            }
            hull.pop();
        }
        hull.push(p);
    }
    hull
}

fn hull_value(hull: &[(i64, i64)], x: i64) -> i64 {
    for w in hull.windows(2) {
        let (x1, y1) = w[0];
        let (x2, y2) = w[1];
        if x1 <= x && x <= x2 {
            let num = y1 * (x2 - x1) + (y2 - y1) * (x - x1);
            return num.div_euclid(x2 - x1);
        }
    }
    if let Some(&(x1, y1)) = hull.first() {
        if x <= x1 {
            return y1;
        }
    }
    hull.last().map(|&(_, y)| y).unwrap_or(0)
}

/// Integral (or unit-only) roots of a primitive polynomial, Panayi-style.
fn integral_roots_inner(
    field: &LocalField,
    poly: &[Elem],
    depth: i64,
    units_only: bool,
) -> Result<Vec<(Elem, Certificate)>> {
    if depth > 2 * field.precision() {
        return Err(Error::precision(
            "root isolation recursion exceeded 2·precision".to_string(),
        ));
    }
    let fq = field.residue_field();
    let deg = poly.len() - 1;
    let mut rbar = vec![0u64; deg + 1];
    for (i, c) in poly.iter().enumerate() {
        rbar[i] = field.residue(c).unwrap_or(0);
    }
    let mut out = vec![];
    for r in 0..fq.order() {
        if units_only && r == 0 {
            continue;
        }
        let mut val = 0u64;
        let mut dval = 0u64;
        for i in (0..=deg).rev() {
            dval = fq.add(fq.mul(dval, r), val);
            val = fq.add(fq.mul(val, r), rbar[i]);
        }
        if val != 0 {
            continue;
        }
        let lift = field.lift_residue(r);
        if dval != 0 {
            let (root, cert) = hensel_refine(field, poly, &lift)?;
            out.push((root, cert));
        } else {
            let shifted = taylor_shift(field, poly, &lift);
            let theta = field.uniformizer();
            let mut q: Vec<Elem> = shifted
                .iter()
                .enumerate()
                .map(|(i, c)| field.shift_uniformizer(c, i as i64))
                .collect();
            let mut mv = i64::MAX;
            for c in &q {
                if let Some(v) = field.val(c) {
                    mv = mv.min(v);
                }
            }
            if mv == i64::MAX {
                return Err(Error::precision("refinement lost the polynomial".to_string()));
            }
            for c in q.iter_mut() {
                *c = field.shift_uniformizer(c, -mv);
            }
            let sub = integral_roots_inner(field, &q, depth + 1, false)?;
            for (z, cert) in sub {
                out.push((field.add(&lift, &field.mul(&theta, &z)), cert));
            }
        }
    }
    Ok(out)
}

/// Coefficients of poly(x + a).
pub fn taylor_shift(field: &LocalField, poly: &[Elem], a: &Elem) -> Vec<Elem> {
    let n = poly.len();
    let mut b = poly.to_vec();
    for i in 0..n {
        for j in (i + 1..n).rev() {
            let t = field.mul(&b[j], a);
            b[j - 1] = field.add(&b[j - 1], &t);
        }
    }
    b
}

// ---------------------------------------------------------------------------
// squares
// ---------------------------------------------------------------------------

/// Outcome of the square-root search with extension data on failure.
pub enum SqrtOutcome {
    Root(Elem, Certificate),
    /// v(a² − u) hit an odd level (below 2·v(2) in mixed characteristic).
    OddObstruction { approx: Elem, level: i64 },
    /// Mixed characteristic: the Artin–Schreier equation at level 2·v(2) is
    /// unsolvable, so √u generates the unramified quadratic extension.
    UnramifiedObstruction { approx: Elem },
}

/// Square root of a valuation-0 unit.
pub fn sqrt_unit(field: &LocalField, u: &Elem) -> Result<SqrtOutcome> {
    let fq = field.residue_field();
    let r = field.residue(u)?;
    let mut a = field.lift_residue(fq.sqrt(r));
    match field.kind() {
        FieldKind::Equal => loop {
            let diff = field.sub(&field.mul(&a, &a), u);
            let m = match field.val(&diff) {
                None => {
                    return Ok(SqrtOutcome::Root(
                        a,
                        Certificate::RootFound {
                            residual_val: diff.precision(),
                            derivative_val: i64::MAX / 4,
                        },
                    ))
                }
                Some(m) => m,
            };
            if m % 2 != 0 {
                return Ok(SqrtOutcome::OddObstruction { approx: a, level: m });
            }
            let (_, unit) = field.strip(&diff)?;
            let rm = field.residue(&unit)?;
            let d = fq.sqrt(rm);
            let corr = field.shift_uniformizer(&field.lift_residue(d), m / 2);
            a = field.add(&a, &corr);
        },
        FieldKind::Mixed => {
            let e2 = field.val_of_two();
            if u.precision() <= 2 * e2 {
                return Err(Error::precision(format!(
                    "square test needs precision > {}",
                    2 * e2
                )));
            }
            loop {
                let diff = field.sub(&field.mul(&a, &a), u);
                let m = match field.val(&diff) {
                    None => {
                        if diff.precision() > 2 * e2 {
                            return Ok(SqrtOutcome::Root(
                                a,
                                Certificate::RootFound {
                                    residual_val: diff.precision(),
                                    derivative_val: e2,
                                },
                            ));
                        }
                        return Err(Error::precision(
                            "square test undecided at precision".to_string(),
                        ));
                    }
                    Some(m) => m,
                };
                if m > 2 * e2 {
                    let root = newton_sqrt(field, u, &a)?;
                    let resid = field.sub(&field.mul(&root, &root), u);
                    return Ok(SqrtOutcome::Root(
                        root,
                        Certificate::RootFound {
                            residual_val: field.val(&resid).unwrap_or(resid.precision()),
                            derivative_val: e2,
                        },
                    ));
                }
                if m == 2 * e2 {
                    let (_, du) = field.strip(&diff)?;
                    let r_res = field.residue(&du)?;
                    let eps = field.shift_uniformizer(&field.from_i64(2), -e2);
                    let eps_res = field.residue(&eps)?;
                    let a_res = field.residue(&a)?;
                    let ea = fq.mul(eps_res, a_res);
                    let rhs = fq.mul(r_res, fq.inv(fq.mul(ea, ea))?);
                    match fq.artin_schreier_root(rhs) {
                        None => return Ok(SqrtOutcome::UnramifiedObstruction { approx: a }),
                        Some(w) => {
                            let c = fq.mul(ea, w);
                            let corr = field.shift_uniformizer(&field.lift_residue(c), e2);
                            a = field.add(&a, &corr);
                        }
                    }
                    continue;
                }
                if m % 2 != 0 {
                    return Ok(SqrtOutcome::OddObstruction { approx: a, level: m });
                }
                let (_, du) = field.strip(&diff)?;
                let rm = field.residue(&du)?;
                let d = fq.sqrt(rm);
                let corr = field.shift_uniformizer(&field.lift_residue(d), m / 2);
                a = field.add(&a, &corr);
            }
        }
    }
}

fn newton_sqrt(field: &LocalField, u: &Elem, start: &Elem) -> Result<Elem> {
    let e2 = field.val_of_two();
    let mut x = start.clone();
    let half = field.inv(&field.from_i64(2))?;
    let mut last = match field.val(&field.sub(&field.mul(&x, &x), u)) {
        Some(v) => v,
        None => return Ok(x),
    };
    for _ in 0..64 {
        let ux = field.div(u, &x)?;
        let sum = field.add(&x, &ux);
        let mut next = field.mul(&sum, &half);
        let m = match field.val(&field.sub(&field.mul(&next, &next), u)) {
            None => return Ok(next),
            Some(v) => v,
        };
        if m <= last {
            return Ok(x);
        }
        // v(x − √u) = v(x² − u) − e₂
        next = refresh_prec(field, &next, m - e2);
        x = next;
        last = m;
    }
    Ok(x)
}

/// Full square-root search; the third component carries extension data when
/// the element is not a square.
pub fn sqrt_with_certificate(
    field: &LocalField,
    x: &Elem,
) -> Result<(Option<Elem>, Certificate, Option<SqrtOutcome>)> {
    let v = field.certified_val(x)?;
    if v.rem_euclid(2) != 0 {
        return Ok((None, Certificate::NoRoot(NoRootReason::OddValuation), None));
    }
    let (_, unit) = field.strip(x)?;
    match sqrt_unit(field, &unit)? {
        SqrtOutcome::Root(r, cert) => {
            let root = field.shift_uniformizer(&r, v / 2);
            Ok((Some(root), cert, None))
        }
        o @ SqrtOutcome::OddObstruction { .. } => Ok((
            None,
            Certificate::NoRoot(NoRootReason::OddValuation),
            Some(o),
        )),
        o @ SqrtOutcome::UnramifiedObstruction { .. } => Ok((
            None,
            Certificate::NoRoot(NoRootReason::TraceObstruction),
            Some(o),
        )),
    }
}

/// Squareness per the contract: answer + certificate.
pub fn is_square(field: &LocalField, x: &Elem) -> Result<(bool, Certificate)> {
    let (root, cert, _) = sqrt_with_certificate(field, x)?;
    Ok((root.is_some(), cert))
}

// ---------------------------------------------------------------------------
// cubes (tame)
// ---------------------------------------------------------------------------

pub fn is_cube(field: &LocalField, x: &Elem) -> Result<(bool, Certificate)> {
    Ok(match cube_root(field, x)? {
        Some((_, cert)) => (true, cert),
        None => (false, Certificate::NoRoot(NoRootReason::ResidueObstruction)),
    })
}

/// Certified cube root: 3 is a unit here, simple Hensel from a residue cube
/// root. None when the valuation is not divisible by 3 or the residue is not
/// a cube.
pub fn cube_root(field: &LocalField, x: &Elem) -> Result<Option<(Elem, Certificate)>> {
    let v = field.certified_val(x)?;
    if v.rem_euclid(3) != 0 {
        return Ok(None);
    }
    let (_, unit) = field.strip(x)?;
    let fq = field.residue_field();
    let r = field.residue(&unit)?;
    let r3 = match fq.cube_root(r) {
        Some(c) => c,
        None => return Ok(None),
    };
    let mut y = field.lift_residue(r3);
    let three = field.from_i64(3);
    for _ in 0..64 {
        let y3 = field.mul(&field.mul(&y, &y), &y);
        let fy = field.sub(&y3, &unit);
        if field.val(&fy).is_none() {
            break;
        }
        let dy = field.mul(&three, &field.mul(&y, &y));
        let corr = field.div(&fy, &dy)?;
        y = field.sub(&y, &corr);
    }
    let root = field.shift_uniformizer(&y, v / 3);
    let resid = field.sub(&field.mul(&field.mul(&root, &root), &root), x);
    let cert = Certificate::RootFound {
        residual_val: field.val(&resid).unwrap_or(resid.precision()),
        derivative_val: 0,
    };
    Ok(Some((root, cert)))
}

// ---------------------------------------------------------------------------
// Artin–Schreier (equal characteristic)
// ---------------------------------------------------------------------------

pub enum ArtinSchreierOutcome {
    Roots(Elem, Elem),
    /// The reduction hit an odd negative valuation: any root generates a
    /// ramified quadratic extension.
    OddObstruction {
        reduced: Elem,
        partial: Elem,
        level: i64,
    },
    /// Residue trace 1: the root generates the unramified quadratic
    /// extension.
    TraceObstruction { reduced: Elem, partial: Elem },
}

/// Solve z² + z = d over an equal-characteristic field: reduce negative even
/// levels by subtracting w² + w, then decide by the residue trace.
pub fn artin_schreier_solve(field: &LocalField, d: &Elem) -> Result<ArtinSchreierOutcome> {
    if field.kind() != FieldKind::Equal {
        return Err(Error::invalid(
            "Artin–Schreier reduction is equal-characteristic only".to_string(),
        ));
    }
    let fq = field.residue_field();
    let mut cur = d.clone();
    let mut partial = field.zero();
    loop {
        match field.val(&cur) {
            None => break,
            Some(v) if v >= 0 => break,
            Some(v) => {
                if v % 2 != 0 {
                    return Ok(ArtinSchreierOutcome::OddObstruction {
                        reduced: cur,
                        partial,
                        level: v,
                    });
                }
                let (_, unit) = field.strip(&cur)?;
                let r = field.residue(&unit)?;
                let w = field.shift_uniformizer(&field.lift_residue(fq.sqrt(r)), v / 2);
                let w2w = field.add(&field.mul(&w, &w), &w);
                cur = field.sub(&cur, &w2w);
                partial = field.add(&partial, &w);
            }
        }
    }
    let r = field.residue(&cur)?;
    if fq.trace(r) != 0 {
        return Ok(ArtinSchreierOutcome::TraceObstruction {
            reduced: cur,
            partial,
        });
    }
    let z0 = fq
        .artin_schreier_root(r)
        .ok_or_else(|| Error::internal("trace-0 residue with no AS root".to_string()))?;
    let mut z = field.lift_residue(z0);
    for _ in 0..64 {
        let pz = field.add(&field.add(&field.mul(&z, &z), &z), &cur);
        if field.val(&pz).is_none() {
            break;
        }
        // z ← z² + d squares the residual in characteristic 2
        z = field.add(&field.mul(&z, &z), &cur);
    }
    let root1 = field.add(&z, &partial);
    let root2 = field.add(&root1, &field.one());
    Ok(ArtinSchreierOutcome::Roots(root1, root2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local_field::base::FieldKind;

    fn q2(prec: i64) -> LocalField {
        LocalField::make_base(FieldKind::Mixed, 1, prec).unwrap()
    }
    fn f2t(prec: i64) -> LocalField {
        LocalField::make_base(FieldKind::Equal, 1, prec).unwrap()
    }

    #[test]
    fn square_tests_mixed() {
        let k = q2(64);
        let (ok, _) = is_square(&k, &k.from_i64(17)).unwrap();
        assert!(ok);
        let (r, _, _) = sqrt_with_certificate(&k, &k.from_i64(17)).unwrap();
        let r = r.unwrap();
        assert!(k.eq_at_prec(&k.mul(&r, &r), &k.from_i64(17)));
        for n in [3i64, 5, 2, -1] {
            let (ok, _) = is_square(&k, &k.from_i64(n)).unwrap();
            assert!(!ok, "{} claimed square", n);
        }
        for n in [3i64, 7, 21, -5] {
            let u = k.from_i64(n);
            let (ok, _) = is_square(&k, &k.mul(&u, &u)).unwrap();
            assert!(ok);
        }
    }

    #[test]
    fn square_tests_equal() {
        let k = f2t(64);
        let t = k.uniformizer();
        let sq = k.add(&k.one(), &k.pow(&t, 2).unwrap());
        let (ok, _) = is_square(&k, &sq).unwrap();
        assert!(ok);
        let (ok, cert) = is_square(&k, &t).unwrap();
        assert!(!ok);
        assert!(matches!(
            cert,
            Certificate::NoRoot(NoRootReason::OddValuation)
        ));
        let (ok, _) = is_square(&k, &k.add(&k.one(), &t)).unwrap();
        assert!(!ok);
    }

    #[test]
    fn cube_tests() {
        let k = q2(64);
        for n in [1i64, 3, 5, 7, -1, -3, 17, 111] {
            let (ok, _) = is_cube(&k, &k.from_i64(n)).unwrap();
            assert!(ok, "{} not a cube", n);
        }
        let (ok, _) = is_cube(&k, &k.from_i64(2)).unwrap();
        assert!(!ok);
        let (r, _) = cube_root(&k, &k.from_i64(-1728)).unwrap().unwrap();
        assert!(k.eq_at_prec(&r, &k.from_i64(-12)));
        let kt = f2t(64);
        let t4 = kt.pow(&kt.uniformizer(), 4).unwrap();
        let (ok, _) = is_cube(&kt, &t4).unwrap();
        assert!(!ok);
    }

    #[test]
    fn artin_schreier_cases() {
        let k = f2t(64);
        let t = k.uniformizer();
        match artin_schreier_solve(&k, &t).unwrap() {
            ArtinSchreierOutcome::Roots(z, z2) => {
                let check = k.add(&k.mul(&z, &z), &z);
                assert!(k.eq_at_prec(&check, &t));
                let check2 = k.add(&k.mul(&z2, &z2), &z2);
                assert!(k.eq_at_prec(&check2, &t));
                let digits = k.theta_digits(&z, 0, 5).unwrap();
                // t + t² + t⁴ + … (or its companion root 1 + t + t² + t⁴)
                assert_eq!(digits[1..], [1, 1, 0, 1]);
            }
            _ => panic!("expected roots"),
        }
        let tinv = k.inv(&t).unwrap();
        assert!(matches!(
            artin_schreier_solve(&k, &tinv).unwrap(),
            ArtinSchreierOutcome::OddObstruction { level: -1, .. }
        ));
        let tinv2 = k.pow(&tinv, 2).unwrap();
        assert!(matches!(
            artin_schreier_solve(&k, &tinv2).unwrap(),
            ArtinSchreierOutcome::OddObstruction { level: -1, .. }
        ));
        assert!(matches!(
            artin_schreier_solve(&k, &k.one()).unwrap(),
            ArtinSchreierOutcome::TraceObstruction { .. }
        ));
    }

    #[test]
    fn poly_roots_examples() {
        let k = f2t(64);
        let t = k.uniformizer();
        let t2 = k.pow(&t, 2).unwrap();
        let poly = vec![k.zero(), t2, k.zero(), k.zero(), k.one()];
        let roots = poly_roots(&k, &poly).unwrap();
        assert_eq!(roots.len(), 1);
        assert!(k.is_zero_at_prec(&roots[0].0));

        let k = q2(64);
        let poly = vec![
            k.zero(),
            k.from_i64(24),
            k.zero(),
            k.zero(),
            k.from_i64(3),
        ];
        let mut roots = poly_roots(&k, &poly).unwrap();
        assert_eq!(roots.len(), 2);
        roots.sort_by_key(|(r, _)| k.val(r).unwrap_or(i64::MAX));
        assert!(k.eq_at_prec(&roots[0].0, &k.from_i64(-2)));
        assert!(k.is_zero_at_prec(&roots[1].0));

        let poly = vec![k.from_i64(-7), k.one()];
        let roots = poly_roots(&k, &poly).unwrap();
        assert_eq!(roots.len(), 1);
        assert!(k.eq_at_prec(&roots[0].0, &k.from_i64(7)));
    }

    #[test]
    fn poly_roots_wild_quadratic() {
        let k = q2(64);
        let poly = vec![k.from_i64(-17), k.zero(), k.one()];
        let roots = poly_roots(&k, &poly).unwrap();
        assert_eq!(roots.len(), 2);
        for (r, _) in &roots {
            let sq = k.mul(r, r);
            assert!(k.eq_at_prec(&sq, &k.from_i64(17)));
        }
        let poly = vec![k.from_i64(-3), k.zero(), k.one()];
        assert!(poly_roots(&k, &poly).unwrap().is_empty());
    }

    #[test]
    fn planted_roots_recovered() {
        let k = q2(80);
        // (x − 6)(x − 7)(x + 10) = x³ − 3x² − 88x + 420
        let poly = vec![
            k.from_i64(420),
            k.from_i64(-88),
            k.from_i64(-3),
            k.one(),
        ];
        let roots = poly_roots(&k, &poly).unwrap();
        assert_eq!(roots.len(), 3);
        let mut vals: Vec<i64> = vec![];
        for (r, _) in &roots {
            for target in [6i64, 7, -10] {
                if k.eq_at_prec(r, &k.from_i64(target)) {
                    vals.push(target);
                }
            }
        }
        vals.sort();
        assert_eq!(vals, vec![-10, 6, 7]);
    }
}
