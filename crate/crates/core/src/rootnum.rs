//! Local root numbers for the full-image case: additive characters, an
//! epsilon engine for finite-order characters of dyadic fields via exact
//! Gauss sums, quadratic characters attached to quadratic extensions, the
//! unramified-twist bookkeeping and the final assembly
//!
//! ```text
//! w(E/K) = (−i)^{f(n(E)−2)} · w(χ) / w_{K(α,β)/K(α)}
//! ```
//!
//! Conventions. The base additive character has ψ(a) = φ(Tr(ā)) on the
//! integers, extended by the coefficient-of-t⁰ rule (equal characteristic)
//! resp. the frac(x/2) rule (mixed); its level is 0 (nontrivial on the
//! integers, trivial on the maximal ideal), and levels of pulled-back
//! characters are always found by probing, never trusted from a formula
//! (the probe satisfies n(ψ∘Tr) = e·(n(ψ)+1) − d − 1). The epsilon
//! normalization is the standard one — ramified sums run over
//! x ∈ π^{n(ψ)+1−a}·U and unramified characters give χ(π)^{n(ψ)+1} — and is
//! pinned by two internal anchors that must evaluate to 1: the tame cubic
//! sum over the residue quadratic extension, and the unramified quadratic
//! character of the quartic point field, whose different has even valuation.

use crate::classifier::{locate_s_t, Classification, StLocation};
use crate::curve::{torsion_quartic, WeierstrassModel};
use crate::cyclotomic::{CycElem, CyclotomicRing, Rotation};
use crate::error::{Error, Result};
use crate::finite_field::FqElem;
use crate::gl2f3::IsoLabel;
use crate::local_field::base::FieldKind;
use crate::local_field::quad::{
    adjoin_quadratic_root, normalize_totally_ramified_quartic, QuadAdjoin, QuadExtKind,
};
use crate::local_field::roots::{poly_roots, sqrt_unit, SqrtOutcome};
use crate::local_field::{Elem, LocalField};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use std::collections::BTreeMap;

// ---------------------------------------------------------------------------
// additive characters
// ---------------------------------------------------------------------------

/// ψ_F = ψ_K ∘ Tr_{F/K} with the base rule fixed by the residue trace.
pub struct AdditiveChar {
    pub field: LocalField,
    pub base: LocalField,
    pub level: i64,
}

/// Evaluate ψ of the base field K (a floor field, e = 1).
fn psi_base(base: &LocalField, y: &Elem) -> Result<Rotation> {
    match base.kind() {
        FieldKind::Equal => {
            if y.precision() < 1 {
                return Err(Error::precision("psi needs the constant coefficient".to_string()));
            }
            let digits = match base.val(y) {
                None => return Ok(Rotation::zero()),
                Some(v) if v > 0 => return Ok(Rotation::zero()),
                Some(v) => base.theta_digits(y, v, 1)?,
            };
            let c0 = *digits.last().unwrap();
            if base.residue_field().trace(c0) == 1 {
                Ok(Rotation::half())
            } else {
                Ok(Rotation::zero())
            }
        }
        FieldKind::Mixed => {
            // trace down to the prime floor by summing Frobenius conjugates
            let f = base.f();
            let mut tr = y.clone();
            let mut cur = y.clone();
            for _ in 1..f {
                cur = base.frobenius_floor(&cur)?;
                tr = base.add(&tr, &cur);
            }
            // 2-adic digits of tr at levels v..0; rotation = Σ d_i 2^{i−1}
            let v = match base.val(&tr) {
                None => return Ok(Rotation::zero()),
                Some(v) if v > 0 => return Ok(Rotation::zero()),
                Some(v) => v,
            };
            if tr.precision() < 1 {
                return Err(Error::precision("psi needs digits up to 2^0".to_string()));
            }
            let digits = base.theta_digits(&tr, v, 1)?;
            let mut num: i64 = 0;
            for (i, &d) in digits.iter().enumerate() {
                debug_assert!(d <= 1, "prime-floor digit out of F2");
                if d == 1 {
                    num += 1i64 << i;
                }
            }
            // Σ_{i} d_i 2^{v+i} / 2 = num · 2^{v−1}
            let den_pow = (1 - v) as u32;
            Ok(Rotation::new(num, 1u64 << den_pow))
        }
    }
}

impl AdditiveChar {
    /// ψ_F = ψ_base ∘ Tr_{F/base}; the level is found by probing downward
    /// from a safe bound.
    pub fn new(field: &LocalField, base: &LocalField) -> Result<AdditiveChar> {
        if !field.is_ancestor(base) {
            return Err(Error::invalid("psi base must be an ancestor".to_string()));
        }
        let mut psi = AdditiveChar {
            field: field.clone(),
            base: base.clone(),
            level: 0,
        };
        let d = field.different_valuation_over(base)?;
        let e = field.e() / base.e();
        // expected level: e·(n(ψ_K)+1) − d − 1 = e − d − 1 (base level 0)
        let guess = e - d - 1;
        let lo = guess - 4;
        let hi = guess + 2 * e + 6;
        let fq = field.residue_field();
        let mut level = None;
        'outer: for j in (lo..=hi).rev() {
            for bit in 0..fq.degree() {
                let c = field.lift_residue(1u64 << bit);
                let x = field.shift_uniformizer(&c, j);
                if !psi.eval_raw(&x)?.is_zero() {
                    level = Some(j);
                    break 'outer;
                }
            }
        }
        psi.level = level.ok_or_else(|| {
            Error::internal("additive character level not found in the probe window".to_string())
        })?;
        Ok(psi)
    }

    fn eval_raw(&self, x: &Elem) -> Result<Rotation> {
        let tr = self.field.trace_to(x, &self.base)?;
        psi_base(&self.base, &tr)
    }

    pub fn eval(&self, x: &Elem) -> Result<Rotation> {
        self.eval_raw(x)
    }
}

// ---------------------------------------------------------------------------
// unit group presentation and multiplicative characters
// ---------------------------------------------------------------------------

/// (O_F/𝔭^a)^× presented by the Teichmüller generator and the one-unit
/// generators 1 + ω^j·π^ℓ (1 ≤ ℓ < a, j < f), with the triangular relations
/// gen² = word(higher generators).
pub struct UnitPresentation {
    pub field: LocalField,
    pub a: i64,
    pub teich: Elem,
    /// gens[(ℓ, j)] with cached inverses.
    pub gens: BTreeMap<(i64, u32), (Elem, Elem)>,
    /// relation words: exponents of gen², as (teich exponent must be 0,
    /// higher-generator bits).
    pub relations: BTreeMap<(i64, u32), Vec<((i64, u32), u8)>>,
}

/// Exponent vector of a unit over the presentation.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitDlog {
    pub teich: u64,
    pub bits: Vec<((i64, u32), u8)>,
}

impl UnitPresentation {
    pub fn new(field: &LocalField, a: i64) -> Result<UnitPresentation> {
        if a < 0 {
            return Err(Error::invalid("conductor exponent must be ≥ 0".to_string()));
        }
        let f = field.residue_field().degree();
        // the presentation stores one generator per (level, basis) pair;
        // only the brute enumeration path is bounded by the group size
        if f as i64 * (a - 1).max(0) > 1024 {
            return Err(Error::BoundExceeded(
                "unit filtration too deep for a character presentation".to_string(),
            ));
        }
        let teich = field.teichmuller()?;
        let mut gens = BTreeMap::new();
        for level in 1..a {
            for j in 0..f {
                let g = field.add(
                    &field.one(),
                    &field.shift_uniformizer(&field.lift_residue(1u64 << j), level),
                );
                let ginv = field.inv(&g)?;
                gens.insert((level, j), (g, ginv));
            }
        }
        let mut pres = UnitPresentation {
            field: field.clone(),
            a,
            teich,
            gens,
            relations: BTreeMap::new(),
        };
        let keys: Vec<(i64, u32)> = pres.gens.keys().cloned().collect();
        for key in keys {
            let g2 = {
                let (g, _) = &pres.gens[&key];
                pres.field.mul(g, g)
            };
            let dl = pres.dlog(&g2)?;
            if dl.teich != 0 {
                return Err(Error::internal("one-unit square has a Teichmüller part".to_string()));
            }
            for &((l, _), _) in &dl.bits {
                if l <= key.0 {
                    return Err(Error::internal("relation word is not triangular".to_string()));
                }
            }
            pres.relations.insert(key, dl.bits);
        }
        Ok(pres)
    }

    /// Greedy discrete log of a unit against the filtration.
    pub fn dlog(&self, u: &Elem) -> Result<UnitDlog> {
        let field = &self.field;
        let fq = field.residue_field();
        if field.val(u) != Some(0) {
            return Err(Error::invalid("dlog of a non-unit".to_string()));
        }
        let r = field.residue(u)?;
        let m = fq.dlog(r)?;
        let mut cur = if m == 0 {
            u.clone()
        } else {
            let tinv = field.inv(&field.pow(&self.teich, m as i64)?)?;
            field.mul(u, &tinv)
        };
        let mut bits: Vec<((i64, u32), u8)> = vec![];
        loop {
            let d = field.sub(&cur, &field.one());
            let level = match field.val(&d) {
                None => break,
                Some(v) if v >= self.a => break,
                Some(v) => v,
            };
            if level < 1 {
                return Err(Error::internal("unit not congruent to 1 after Teichmüller strip".to_string()));
            }
            let (_, unit) = field.strip(&d)?;
            let resid = field.residue(&unit)?;
            for j in 0..fq.degree() {
                if (resid >> j) & 1 == 1 {
                    let (_, ginv) = self
                        .gens
                        .get(&(level, j))
                        .ok_or_else(|| Error::internal("missing generator".to_string()))?;
                    cur = field.mul(&cur, ginv);
                    bits.push(((level, j), 1));
                }
            }
        }
        bits.sort();
        Ok(UnitDlog { teich: m, bits })
    }
}

/// A finite-order character of F^×, stored as rotation values on the
/// canonical generators: the uniformizer, the Teichmüller generator, and the
/// one-unit generators of the presentation at its conductor.
#[derive(Clone, Serialize)]
pub struct Character {
    pub order: u64,
    pub conductor: i64,
    pub on_pi: Rotation,
    pub on_teich: Rotation,
    pub on_units: BTreeMap<(i64, u32), Rotation>,
}

impl Serialize for Rotation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Rotation", 2)?;
        st.serialize_field("num", &self.num())?;
        st.serialize_field("den", &self.den())?;
        st.end()
    }
}

impl Character {
    /// The unramified character sending the uniformizer to a given root of
    /// unity.
    pub fn unramified(on_pi: Rotation) -> Character {
        Character {
            order: on_pi.order(),
            conductor: 0,
            on_pi,
            on_teich: Rotation::zero(),
            on_units: BTreeMap::new(),
        }
    }

    /// Validate homomorphy (triangular relations + Teichmüller order),
    /// conductor exactness and the declared order.
    pub fn validate(&self, pres: &UnitPresentation) -> Result<()> {
        let q1 = pres.field.residue_field().order() - 1;
        if !self.on_teich.mul_int(q1 as i64).is_zero() {
            return Err(Error::invalid("character value on the Teichmüller generator has wrong order".to_string()));
        }
        for (key, word) in &pres.relations {
            let lhs = self.unit_value(key).mul_int(2);
            let mut rhs = Rotation::zero();
            for (k2, e) in word {
                rhs = rhs.add(&self.unit_value(k2).mul_int(*e as i64));
            }
            if lhs != rhs {
                return Err(Error::invalid(format!(
                    "character violates the square relation of generator {:?}",
                    key
                )));
            }
        }
        // conductor exactness
        if self.conductor == 1 && self.on_teich.is_zero() {
            return Err(Error::invalid("conductor 1 requires a nontrivial Teichmüller value".to_string()));
        }
        if self.conductor >= 2 {
            let top_nontrivial = self
                .on_units
                .iter()
                .any(|(&(l, _), r)| l == self.conductor - 1 && !r.is_zero());
            if !top_nontrivial {
                return Err(Error::invalid(format!(
                    "conductor {} requires a nontrivial value at level {}",
                    self.conductor,
                    self.conductor - 1
                )));
            }
        }
        // declared order = lcm of value orders
        let mut ord = self.on_pi.order();
        ord = num_integer::lcm(ord, self.on_teich.order());
        for r in self.on_units.values() {
            ord = num_integer::lcm(ord, r.order());
        }
        if ord != self.order {
            return Err(Error::invalid(format!(
                "declared order {} but values have order {}",
                self.order, ord
            )));
        }
        Ok(())
    }

    fn unit_value(&self, key: &(i64, u32)) -> Rotation {
        self.on_units.get(key).copied().unwrap_or_else(Rotation::zero)
    }

    /// χ(x) as a rotation.
    pub fn eval(&self, pres: &UnitPresentation, x: &Elem) -> Result<Rotation> {
        let field = &pres.field;
        let v = field.certified_val(x)?;
        let (_, unit) = field.strip(x)?;
        let dl = pres.dlog(&unit)?;
        let mut rot = self.on_pi.mul_int(v);
        rot = rot.add(&self.on_teich.mul_int(dl.teich as i64));
        for (key, e) in &dl.bits {
            rot = rot.add(&self.unit_value(key).mul_int(*e as i64));
        }
        Ok(rot)
    }

    pub fn conjugate(&self) -> Character {
        Character {
            order: self.order,
            conductor: self.conductor,
            on_pi: self.on_pi.neg(),
            on_teich: self.on_teich.neg(),
            on_units: self
                .on_units
                .iter()
                .map(|(k, r)| (*k, r.neg()))
                .collect(),
        }
    }
}

// ---------------------------------------------------------------------------
// epsilon engine
// ---------------------------------------------------------------------------

/// Exact normalized root number w(χ, ψ) = S/|S|.
pub struct WCharResult {
    pub ring: CyclotomicRing,
    pub value: CycElem,
}

fn ring_for(dens: &[u64]) -> CyclotomicRing {
    let mut n = 24u64;
    for &d in dens {
        n = num_integer::lcm(n, d);
    }
    CyclotomicRing::new(n)
}

/// w of an unramified character: χ(π)^{n(ψ)+1}.
fn w_unramified(chi: &Character, psi: &AdditiveChar) -> WCharResult {
    let rot = chi.on_pi.mul_int(psi.level + 1);
    let ring = ring_for(&[rot.den()]);
    let value = ring.from_rotation(&rot).unwrap();
    WCharResult { ring, value }
}

/// Full enumeration of S = Σ_{x ∈ γU/U^{(a)}} χ⁻¹(x)ψ(x); exponential cost,
/// used directly for small groups and as the oracle for the reduction.
pub fn w_char_by_enumeration(
    chi: &Character,
    pres: &UnitPresentation,
    psi: &AdditiveChar,
) -> Result<WCharResult> {
    let field = &pres.field;
    let a = chi.conductor;
    let v_gamma = psi.level + 1 - a;
    let fq = field.residue_field();
    let q1 = fq.order() - 1;
    let gen_keys: Vec<(i64, u32)> = pres.gens.keys().cloned().collect();
    // #(O/𝔭^a)^× ≤ 2^24 is the documented enumeration bound; stay well under
    // it in practice (the stationary-phase path has no such limit)
    if gen_keys.len() > 18 {
        return Err(Error::BoundExceeded(
            "unit-group enumeration beyond 2^18 elements; use the stationary-phase path".to_string(),
        ));
    }
    // collect terms as rotations first to size the ring
    let mut terms: Vec<Rotation> = vec![];
    let pi_pow = field.pow(&field.uniformizer(), v_gamma)?;
    for m in 0..q1 {
        let tm = field.pow(&pres.teich, m as i64)?;
        let mut stack: Vec<(usize, Elem, Rotation)> = vec![(
            0,
            field.mul(&pi_pow, &tm),
            chi.on_pi.mul_int(v_gamma).add(&chi.on_teich.mul_int(m as i64)).neg(),
        )];
        while let Some((idx, x, chirot)) = stack.pop() {
            if idx == gen_keys.len() {
                let psirot = psi.eval(&x)?;
                terms.push(chirot.add(&psirot));
                continue;
            }
            let key = gen_keys[idx];
            stack.push((idx + 1, x.clone(), chirot));
            let (g, _) = &pres.gens[&key];
            let xg = field.mul(&x, g);
            let chirot2 = chirot.add(&chi.unit_value(&key).neg());
            stack.push((idx + 1, xg, chirot2));
        }
    }
    normalized_sum(&terms, field.residue_field().degree() as u64 * a as u64)
}

/// Assemble S from term rotations and normalize by |S| = √(q^a).
fn normalized_sum(terms: &[Rotation], f_times_a: u64) -> Result<WCharResult> {
    let dens: Vec<u64> = terms.iter().map(|r| r.den()).collect();
    let ring = ring_for(&dens);
    let n = ring.modulus();
    let mut counts = vec![BigInt::zero(); n as usize];
    for r in terms {
        let idx = (r.num() * (n / r.den())) % n;
        counts[idx as usize] += 1;
    }
    let s = ring.from_group_ring(&counts);
    // |S|² must equal q^a = 2^{f·a}
    let norm = ring.norm_sq(&s);
    let expect = {
        let mut e = BigInt::from(1);
        for _ in 0..f_times_a {
            e *= 2;
        }
        e
    };
    match ring.as_rational(&norm) {
        Some((num, den)) if den == BigInt::from(1) && num == expect => {}
        other => {
            return Err(Error::internal(format!(
                "Gauss sum norm mismatch: |S|² = {:?}, expected 2^{}",
                other, f_times_a
            )))
        }
    }
    let value = ring.div_by_sqrt_pow2(&s, f_times_a as u32)?;
    // |w| = 1 exactly
    let unit_check = ring.norm_sq(&value);
    if !ring.eq(&unit_check, &ring.from_int(1)) {
        return Err(Error::internal("normalized epsilon is not a unit".to_string()));
    }
    Ok(WCharResult { ring, value })
}

/// The additive dual c of χ on 1 + 𝔭^{a'}: χ(1+z) = ψ(cz) there. Solved
/// digit by digit from the top level down.
fn chi_additive_dual(
    chi: &Character,
    pres: &UnitPresentation,
    psi: &AdditiveChar,
) -> Result<Elem> {
    let field = &pres.field;
    let fq = field.residue_field();
    let a = chi.conductor;
    let a_hi = (a + 1) / 2; // a' = ⌈a/2⌉
    let v_gamma = psi.level + 1 - a;
    let mut c = field.shift_uniformizer(&field.one(), v_gamma);
    for j in ((a_hi)..a).rev() {
        // mismatch functional b ↦ χ(1+b̃π^j) − ψ(c·b̃π^j) ∈ {0, 1/2}
        let mut lambda_bits: u64 = 0;
        let mut nonzero = false;
        for bit in 0..fq.degree() {
            let b_lift = field.lift_residue(1u64 << bit);
            let one_plus = field.add(
                &field.one(),
                &field.shift_uniformizer(&b_lift.clone(), j),
            );
            let chirot = chi.eval(pres, &one_plus)?;
            let psirot = psi.eval(&field.mul(&c, &field.shift_uniformizer(&b_lift, j)))?;
            let delta = chirot.add(&psirot.neg());
            if delta == Rotation::half() {
                lambda_bits |= 1 << bit;
                nonzero = true;
            } else if !delta.is_zero() {
                return Err(Error::internal(
                    "chi is not additive on the top filtration step".to_string(),
                ));
            }
        }
        if !nonzero {
            continue;
        }
        // find μ ∈ k with ψ(c·μ̃·b̃·π^{a−1−j+j}) matching the mismatch for all b
        let adj_level = a - 1 - j;
        let mut found = None;
        'mu: for mu in 1..fq.order() {
            for bit in 0..fq.degree() {
                let b = 1u64 << bit;
                let prod = fq.mul(mu, b);
                let x = field.mul(
                    &c,
                    &field.shift_uniformizer(&field.lift_residue(prod), a - 1),
                );
                let psirot = psi.eval(&x)?;
                let want = if (lambda_bits >> bit) & 1 == 1 {
                    Rotation::half()
                } else {
                    Rotation::zero()
                };
                if psirot != want {
                    continue 'mu;
                }
            }
            found = Some(mu);
            break;
        }
        let mu = found.ok_or_else(|| {
            Error::internal("no digit matches the chi/psi mismatch: degenerate pairing".to_string())
        })?;
        let corr = field.mul(
            &c,
            &field.shift_uniformizer(&field.lift_residue(mu), adj_level),
        );
        c = field.add(&c, &corr);
    }
    Ok(c)
}

/// w(χ, ψ) for any conductor; ramified sums reduce to the stationary-phase
/// point for a ≥ 2.
pub fn w_char(chi: &Character, pres: &UnitPresentation, psi: &AdditiveChar) -> Result<WCharResult> {
    let field = &pres.field;
    let a = chi.conductor;
    let f = field.residue_field().degree() as u64;
    if a == 0 {
        return Ok(w_unramified(chi, psi));
    }
    if a == 1 {
        let fq = field.residue_field();
        let q1 = fq.order() - 1;
        let v_gamma = psi.level;
        let pi_pow = field.pow(&field.uniformizer(), v_gamma)?;
        let mut terms = vec![];
        for m in 0..q1 {
            let x = field.mul(&pi_pow, &field.pow(&pres.teich, m as i64)?);
            let chirot = chi
                .on_pi
                .mul_int(v_gamma)
                .add(&chi.on_teich.mul_int(m as i64))
                .neg();
            let psirot = psi.eval(&x)?;
            terms.push(chirot.add(&psirot));
        }
        return normalized_sum(&terms, f);
    }
    // a ≥ 2: stationary phase at the additive dual c
    let c = chi_additive_dual(chi, pres, psi)?;
    let a_hi = (a + 1) / 2;
    let a_lo = a - a_hi;
    let fq = field.residue_field();
    let mut terms: Vec<Rotation> = vec![];
    if a % 2 == 0 {
        let chirot = chi.eval(pres, &c)?.neg();
        let psirot = psi.eval(&c)?;
        terms.push(chirot.add(&psirot));
    } else {
        for w in 0..fq.order() {
            let y = if w == 0 {
                c.clone()
            } else {
                field.mul(
                    &c,
                    &field.add(
                        &field.one(),
                        &field.shift_uniformizer(&field.lift_residue(w), a_lo),
                    ),
                )
            };
            let chirot = chi.eval(pres, &y)?.neg();
            let psirot = psi.eval(&y)?;
            terms.push(chirot.add(&psirot));
        }
    }
    // S = q^{a_lo}·Σ terms; the q-power scale drops out of S/|S| except for
    // the norm bookkeeping: |Σ terms|² must be q^{a − 2·a_lo}
    normalized_sum(&terms, f * (a - 2 * a_lo) as u64)
}

// ---------------------------------------------------------------------------
// quadratic characters from quadratic extensions
// ---------------------------------------------------------------------------

/// Square-class coordinates of F^×/(F^×)² (truncated at `levels` one-unit
/// levels in equal characteristic).
struct SquareClasses {
    field: LocalField,
    /// (level, basis bit) for each one-unit coordinate; mixed characteristic
    /// adds a final Artin–Schreier coordinate at level 2·v(2).
    unit_coords: Vec<(i64, u32)>,
    as_coord: Option<(i64, FqElem)>,
}

impl SquareClasses {
    fn new(field: &LocalField, max_level: i64) -> Result<SquareClasses> {
        let fq = field.residue_field();
        let mut unit_coords = vec![];
        let (top, as_coord) = match field.kind() {
            FieldKind::Mixed => {
                let e2 = field.val_of_two();
                // the obstructed residue r₀ at level 2e₂: Tr(r₀/ε̄²) = 1
                let eps = field.shift_uniformizer(&field.from_i64(2), -e2);
                let eps_res = field.residue(&eps)?;
                let eps2 = fq.mul(eps_res, eps_res);
                let r0 = (1..fq.order())
                    .find(|&r| fq.trace(fq.mul(r, fq.inv(eps2).unwrap())) == 1)
                    .ok_or_else(|| Error::internal("no trace-obstructed residue".to_string()))?;
                (2 * e2, Some((2 * e2, r0)))
            }
            FieldKind::Equal => (max_level, None),
        };
        let mut lvl = 1;
        while lvl < top {
            for j in 0..fq.degree() {
                unit_coords.push((lvl, j));
            }
            lvl += 2;
        }
        Ok(SquareClasses {
            field: field.clone(),
            unit_coords,
            as_coord,
        })
    }

    fn dim(&self) -> usize {
        1 + self.unit_coords.len() + usize::from(self.as_coord.is_some())
    }

    /// Coordinates of x as a bitmask: bit 0 = parity of v(x), then the
    /// one-unit coordinates, then the Artin–Schreier bit.
    fn coords(&self, x: &Elem) -> Result<u64> {
        let field = &self.field;
        let fq = field.residue_field();
        let v = field.certified_val(x)?;
        let mut mask = 0u64;
        if v.rem_euclid(2) == 1 {
            mask |= 1;
        }
        let (_, mut u) = field.strip(x)?;
        // peel odd-level obstructions
        let mut guard = 0;
        loop {
            guard += 1;
            if guard > 4 * self.dim() + 16 {
                return Err(Error::internal("square-class peeling did not terminate".to_string()));
            }
            match sqrt_unit(field, &u)? {
                SqrtOutcome::Root(..) => break,
                SqrtOutcome::OddObstruction { approx, level } => {
                    // u ≡ a²(1 + w π^m): extract w and divide off the class
                    let diff = field.sub(&u, &field.mul(&approx, &approx));
                    let (_, du) = field.strip(&diff)?;
                    let a2 = field.mul(&approx, &approx);
                    let w = fq.mul(
                        field.residue(&du)?,
                        fq.inv(field.residue(&a2)?)?,
                    );
                    let mut handled = false;
                    for (i, &(l, j)) in self.unit_coords.iter().enumerate() {
                        if l == level && (w >> j) & 1 == 1 {
                            mask ^= 1 << (1 + i);
                            handled = true;
                        }
                    }
                    if !handled && level <= *self.unit_coords.last().map(|(l, _)| l).unwrap_or(&0) {
                        return Err(Error::internal(format!(
                            "odd obstruction at unexpected level {}",
                            level
                        )));
                    }
                    if !handled {
                        // beyond the truncation: ignore (character trivial there)
                        break;
                    }
                    let cls = field.add(
                        &field.one(),
                        &field.shift_uniformizer(&field.lift_residue(w), level),
                    );
                    u = field.div(&u, &cls)?;
                }
                SqrtOutcome::UnramifiedObstruction { .. } => {
                    let (lvl, r0) = self
                        .as_coord
                        .ok_or_else(|| Error::internal("AS obstruction in equal characteristic".to_string()))?;
                    mask ^= 1 << (1 + self.unit_coords.len());
                    let cls = field.add(
                        &field.one(),
                        &field.shift_uniformizer(&field.lift_residue(r0), lvl),
                    );
                    u = field.div(&u, &cls)?;
                }
            }
        }
        Ok(mask)
    }
}

/// The order-2 character of F^× attached to a quadratic extension given by
/// the generator's minimal polynomial X² + BX + C (norm form
/// x² − Bxy + Cy²), determined by norm sampling in the square-class group.
pub fn quad_char_from_extension(
    field: &LocalField,
    kind: QuadExtKind,
    b: &Elem,
    c: &Elem,
) -> Result<Character> {
    match kind {
        QuadExtKind::InField => Err(Error::invalid("trivial extension has no quadratic character".to_string())),
        QuadExtKind::Unramified => Ok(Character::unramified(Rotation::half())),
        QuadExtKind::Ramified => {
            // truncation: in equal characteristic the conductor is bounded by
            // v(disc) = 2·v(B) + …; use the B/C data
            let max_level = match field.kind() {
                FieldKind::Mixed => 2 * field.val_of_two() + 1,
                FieldKind::Equal => {
                    let vb = field.val(b).unwrap_or(field.precision());
                    2 * vb + 2
                }
            };
            let classes = SquareClasses::new(field, max_level)?;
            let dim = classes.dim();
            // deterministic norm sampling: N(x + y·gen) = x² − Bxy + Cy²
            let norm = |x: &Elem, y: &Elem| -> Elem {
                let x2 = field.mul(x, x);
                let bxy = field.mul(b, &field.mul(x, y));
                let cy2 = field.mul(c, &field.mul(y, y));
                field.add(&field.sub(&x2, &bxy), &cy2)
            };
            let mut rows: Vec<u64> = vec![];
            let mut rank = 0usize;
            let mut basis: Vec<u64> = vec![];
            let mut add_row = |classes: &SquareClasses, n: &Elem, rows: &mut Vec<u64>, basis: &mut Vec<u64>, rank: &mut usize| -> Result<()> {
                if field.val(n).is_none() {
                    return Ok(());
                }
                let mut r = classes.coords(n)?;
                for &bv in basis.iter() {
                    let low = bv & bv.wrapping_neg();
                    if r & low != 0 {
                        r ^= bv;
                    }
                }
                if r != 0 {
                    basis.push(r);
                    *rank += 1;
                    rows.push(r);
                }
                Ok(())
            };
            // structured samples then pseudo-random digits
            let fq = field.residue_field();
            let mut samples: Vec<(Elem, Elem)> = vec![
                (field.one(), field.zero()),
                (field.zero(), field.one()),
                (field.one(), field.one()),
                (field.uniformizer(), field.one()),
                (field.one(), field.uniformizer()),
            ];
            let mut seed = 0x9e3779b97f4a7c15u64;
            for _ in 0..(8 * dim + 32) {
                let mut digits_x = vec![];
                let mut digits_y = vec![];
                for _ in 0..4 {
                    seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    digits_x.push(seed >> 48 & (fq.order() - 1));
                    seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    digits_y.push(seed >> 48 & (fq.order() - 1));
                }
                samples.push((field.from_digits(&digits_x, 0), field.from_digits(&digits_y, 0)));
            }
            for (x, y) in &samples {
                if rank + 1 >= dim {
                    break;
                }
                let n = norm(x, y);
                add_row(&classes, &n, &mut rows, &mut basis, &mut rank)?;
            }
            if rank + 1 != dim {
                return Err(Error::internal(format!(
                    "norm group rank {} never reached {} − 1",
                    rank, dim
                )));
            }
            // the functional vanishing on the row space
            let mut lambda = 0u64;
            'cand: for cand in 1..(1u64 << dim) {
                for &r in &rows {
                    if (cand & r).count_ones() % 2 == 1 {
                        continue 'cand;
                    }
                }
                lambda = cand;
                break;
            }
            if lambda == 0 {
                return Err(Error::internal("no quadratic functional found".to_string()));
            }
            // read the character off the coordinates
            let bit_of = |mask: u64| -> Rotation {
                if (lambda & mask).count_ones() % 2 == 1 {
                    Rotation::half()
                } else {
                    Rotation::zero()
                }
            };
            let on_pi = {
                let coords = classes.coords(&field.uniformizer())?;
                bit_of(coords)
            };
            let mut on_units = BTreeMap::new();
            let mut conductor = 0i64;
            for (i, &(l, j)) in classes.unit_coords.iter().enumerate() {
                let r = bit_of(1 << (1 + i));
                if !r.is_zero() {
                    conductor = conductor.max(l + 1);
                    on_units.insert((l, j), r);
                }
            }
            if let Some((l, r0)) = classes.as_coord {
                let r = bit_of(1 << (1 + classes.unit_coords.len()));
                if !r.is_zero() {
                    conductor = conductor.max(l + 1);
                    // express the class generator 1 + r₀π^{2e₂} over the
                    // one-unit generators at its level
                    for j in 0..fq.degree() {
                        if (r0 >> j) & 1 == 1 {
                            let e = on_units.entry((l, j)).or_insert_with(Rotation::zero);
                            *e = e.add(&Rotation::half());
                        }
                    }
                }
            }
            if conductor == 0 {
                return Err(Error::internal(
                    "ramified quadratic extension produced an unramified character".to_string(),
                ));
            }
            Ok(Character {
                order: 2,
                conductor,
                on_pi,
                on_teich: Rotation::zero(),
                on_units,
            })
        }
    }
}

/// Schmid's symbol on an equal-characteristic floor field: the pairing
/// [d, x) = Tr_k(res(d·dx/x)) classifying z² + z = d against norms from x.
/// Used to cross-validate the norm-sampling construction.
pub fn schmid_symbol(field: &LocalField, d: &Elem, x: &Elem) -> Result<u64> {
    if field.kind() != FieldKind::Equal || field.e() != 1 {
        return Err(Error::invalid("Schmid symbol lives on Laurent floors".to_string()));
    }
    let v = field.certified_val(x)?;
    let lo = field.val(d).unwrap_or(0).min(0) - 2;
    // dx/x = (Σ i·x_i t^{i−1})/x; compute digits of x over a window
    let hi = field.precision() / 2;
    let digits = field.theta_digits(x, v, hi)?;
    let fq = field.residue_field();
    let mut deriv_digits: Vec<FqElem> = vec![];
    for (i, &c) in digits.iter().enumerate() {
        let exp = v + i as i64;
        // ∂t^e = e·t^{e−1}: zero for even e in characteristic 2
        if exp.rem_euclid(2) == 1 {
            deriv_digits.push(c);
        } else {
            deriv_digits.push(0);
        }
    }
    // derivative has digits at exp−1
    let dx = field.from_digits(&deriv_digits, v - 1);
    let expr = field.mul(d, &field.div(&dx, x)?);
    let digits = field.theta_digits(&expr, lo.min(-1), 0)?;
    let res = digits[( -1 - lo.min(-1)) as usize];
    Ok(fq.trace(res))
}

// ---------------------------------------------------------------------------
// twist and assembly
// ---------------------------------------------------------------------------

/// (−i)^{f·(n(E)−2)} as an exact rotation.
pub fn twist_exponent(f: i64, n_e: i64) -> Rotation {
    // −i = rotation 3/4
    Rotation::new(3, 4).mul_int(f * (n_e - 2))
}

#[derive(Serialize)]
pub struct CycValue {
    pub modulus: u64,
    pub numerators: Vec<String>,
    pub denominator: String,
    pub approx_re: f64,
    pub approx_im: f64,
}

fn cyc_value(ring: &CyclotomicRing, v: &CycElem) -> CycValue {
    let (re, im) = ring.to_complex(v);
    CycValue {
        modulus: v.modulus(),
        numerators: v.coeffs().iter().map(|c| c.to_string()).collect(),
        denominator: v.den().to_string(),
        approx_re: re,
        approx_im: im,
    }
}

#[derive(Serialize)]
pub struct RootNumberReport {
    pub w: CycValue,
    pub f: i64,
    pub n_e: i64,
    pub twist: CycValue,
    pub w_chi: CycValue,
    pub w_quad: CycValue,
    pub w_det_b12: CycValue,
    pub w_tau: CycValue,
    pub chi_provenance: String,
    pub m_descriptor: serde_json::Value,
    pub k_alpha_descriptor: serde_json::Value,
    pub assembly_identity_holds: bool,
}

/// M = K₁(s′, t′) as a quadratic extension of K₁, from the symmetric data
/// s′+s′ᶜ = b₂/3, s′·s′ᶜ = b₂²/9 − 2b₄ − Δ^{1/3} (and the t′ analogue when
/// s′ degenerates). Returns M and [M:K₁].
pub fn build_m(cls: &Classification) -> Result<(LocalField, i64)> {
    if cls.class.label != IsoLabel::GL2F3 {
        return Err(Error::invalid("M is built only in the full-image case".to_string()));
    }
    let k1 = &cls.k1;
    let base = &cls.base;
    let up = |c: &Elem| k1.embed_from(base, c);
    let three_inv = k1.inv(&k1.from_i64(3))?;
    let b2 = up(&cls.invariants.b2)?;
    let b4 = up(&cls.invariants.b4)?;
    let b8 = up(&cls.invariants.b8)?;
    let d3 = &cls.delta_cbrt;
    // s' has X² − (b₂/3)X + (b₂²/9 − 2b₄ − Δ^{1/3})
    let sum_s = k1.mul(&b2, &three_inv);
    let prod_s = {
        let t1 = k1.mul(&sum_s, &sum_s);
        let t2 = k1.mul(&k1.from_i64(2), &b4);
        k1.sub(&k1.sub(&t1, &t2), d3)
    };
    let adj = adjoin_quadratic_root(k1, &k1.neg(&sum_s), &prod_s)?;
    if adj.kind != QuadExtKind::InField {
        return Ok((adj.field, 2));
    }
    // degenerate s': use t' with X² + ((b₄−Δ^{1/3})/3)X + ((b₄−Δ^{1/3})²/9 − b₈)
    let tsum = k1.neg(&k1.mul(&k1.sub(&b4, d3), &three_inv));
    let tprod = {
        let t1 = k1.mul(&tsum, &tsum);
        k1.sub(&t1, &b8)
    };
    let adj_t = adjoin_quadratic_root(k1, &k1.neg(&tsum), &tprod)?;
    if adj_t.kind == QuadExtKind::InField {
        return Err(Error::internal(
            "both s' and t' degenerate over K1: excluded in the full-image case".to_string(),
        ));
    }
    Ok((adj_t.field, 2))
}

/// The full-image root number from a user-supplied order-8 character of M^×.
pub fn root_number_gl2f3(
    model: &WeierstrassModel,
    cls: &Classification,
    chi: &Character,
) -> Result<RootNumberReport> {
    if cls.class.label != IsoLabel::GL2F3 {
        return Err(Error::invalid(format!(
            "root-number formula implemented only for the full image; classification is {}",
            cls.class.label.as_str()
        )));
    }
    let base = &cls.base;
    let f = base.f() as i64;
    let n_e = cls.invariants.n_e;

    // M and w(χ)
    let (m_field, m_deg) = build_m(cls)?;
    if m_deg != 2 {
        return Err(Error::internal("[M:K1] must be 2".to_string()));
    }
    if chi.order != 8 {
        return Err(Error::invalid("chi must have exact order 8".to_string()));
    }
    let m_pres = UnitPresentation::new(&m_field, chi.conductor)?;
    chi.validate(&m_pres)?;
    let psi_m = AdditiveChar::new(&m_field, base)?;
    let w_chi = w_char(chi, &m_pres, &psi_m)?;

    // K(α): the quartic point field, totally ramified here
    let inv = &cls.invariants;
    let g = torsion_quartic(model, inv, false)?.coeffs;
    let three_inv = base.inv(&base.from_i64(3))?;
    let h: Vec<Elem> = g.iter().map(|c| base.mul(c, &three_inv)).collect();
    let (k_alpha, alpha) = normalize_totally_ramified_quartic(base, &h)?;

    // anchor: w(det_B12) = w of the unramified quadratic character of K(α)
    let psi_alpha = AdditiveChar::new(&k_alpha, base)?;
    let d_alpha = k_alpha.different_valuation_over(base)?;
    if d_alpha % 2 != 0 {
        return Err(Error::internal(
            "different of the quartic point field has odd valuation".to_string(),
        ));
    }
    let det_char = Character::unramified(Rotation::half());
    let w_det = w_unramified(&det_char, &psi_alpha);
    if !w_det.ring.eq(&w_det.value, &w_det.ring.from_int(1)) {
        return Err(Error::internal("w(det_B12) anchor is not 1".to_string()));
    }

    // anchor: w(τ) = 1 from the residue-level Gauss sum
    let (w_tau, _, _) = crate::finite_field::gauss_sum_tau(
        base.f(),
        crate::finite_field::CubicCharacter::Primary,
    )?;
    let ring24 = CyclotomicRing::new(24);
    if !ring24.eq(&w_tau, &ring24.from_int(1)) {
        return Err(Error::internal("w(tau) anchor is not 1".to_string()));
    }

    // β over K(α), then w_quad
    let up = |c: &Elem| k_alpha.embed_from(base, c);
    let a1 = up(&model.a1)?;
    let a2 = up(&model.a2)?;
    let a3 = up(&model.a3)?;
    let a4 = up(&model.a4)?;
    let a6 = up(&model.a6)?;
    let bq = k_alpha.add(&k_alpha.mul(&a1, &alpha), &a3);
    let rhs = {
        let x2 = k_alpha.mul(&alpha, &alpha);
        let x3 = k_alpha.mul(&x2, &alpha);
        k_alpha.add(
            &k_alpha.add(&x3, &k_alpha.mul(&a2, &x2)),
            &k_alpha.add(&k_alpha.mul(&a4, &alpha), &a6),
        )
    };
    let cq = k_alpha.neg(&rhs);
    let adj: QuadAdjoin = adjoin_quadratic_root(&k_alpha, &bq, &cq)?;
    if adj.kind == QuadExtKind::InField {
        return Err(Error::internal(
            "beta rational over K(alpha) contradicts the full image".to_string(),
        ));
    }
    let (_, gen_b, gen_c) = adj
        .gen
        .clone()
        .ok_or_else(|| Error::internal("extension data missing".to_string()))?;
    // the minimal polynomial data lives upstairs; contract it to K(α)
    let gen_b_down = contract(&adj.field, &k_alpha, &gen_b)?;
    let gen_c_down = contract(&adj.field, &k_alpha, &gen_c)?;
    let quad_chi = quad_char_from_extension(&k_alpha, adj.kind, &gen_b_down, &gen_c_down)?;
    let quad_pres = UnitPresentation::new(&k_alpha, quad_chi.conductor)?;
    let w_quad = w_char(&quad_chi, &quad_pres, &psi_alpha)?;

    // assembly in a common ring
    let n = num_integer::lcm(
        num_integer::lcm(w_chi.ring.modulus(), w_quad.ring.modulus()),
        24,
    );
    let ring = CyclotomicRing::new(n);
    let lift = |w: &WCharResult| -> Result<CycElem> {
        lift_to(&w.ring, &ring, &w.value)
    };
    let w_chi_big = lift(&w_chi)?;
    let w_quad_big = lift(&w_quad)?;
    let twist_rot = twist_exponent(f, n_e);
    let twist = ring.from_rotation(&twist_rot)?;
    // w_quad is a unit: 1/w_quad = conj(w_quad)
    let w_quad_inv = ring.conj(&w_quad_big);
    let w = ring.mul(&ring.mul(&twist, &w_chi_big), &w_quad_inv);
    let unit_check = ring.norm_sq(&w);
    if !ring.eq(&unit_check, &ring.from_int(1)) {
        return Err(Error::internal("assembled root number is not a unit".to_string()));
    }
    // identity: w·w_quad = twist·w(χ)
    let lhs = ring.mul(&w, &w_quad_big);
    let rhs2 = ring.mul(&twist, &w_chi_big);
    let identity = ring.eq(&lhs, &rhs2);

    Ok(RootNumberReport {
        w: cyc_value(&ring, &w),
        f,
        n_e,
        twist: cyc_value(&ring, &twist),
        w_chi: cyc_value(&ring, &w_chi_big),
        w_quad: cyc_value(&ring, &w_quad_big),
        w_det_b12: cyc_value(&w_det.ring, &w_det.value),
        w_tau: cyc_value(&ring24, &w_tau),
        chi_provenance: "user-supplied".to_string(),
        m_descriptor: m_field.descriptor(),
        k_alpha_descriptor: k_alpha.descriptor(),
        assembly_identity_holds: identity,
    })
}

fn lift_to(small: &CyclotomicRing, big: &CyclotomicRing, v: &CycElem) -> Result<CycElem> {
    let scale = big.modulus() / small.modulus();
    if big.modulus() % small.modulus() != 0 {
        return Err(Error::internal("ring moduli are not nested".to_string()));
    }
    // rebuild from the power-basis coordinates of the small ring
    let mut counts = vec![BigInt::zero(); big.modulus() as usize];
    for (i, c) in v.coeffs().iter().enumerate() {
        counts[(i as u64 * scale) as usize] = c.clone();
    }
    let mut out = big.from_group_ring(&counts);
    out = big.scale(&out, 1, 1);
    // reapply denominator
    let den = v.den();
    let mut den_u = 1u64;
    let ds = den.to_string();
    if let Ok(d) = ds.parse::<u64>() {
        den_u = d;
    }
    Ok(big.scale(&out, 1, den_u))
}

/// Express an element of a one-step extension that lies in the base field in
/// base-field coordinates (used for minimal-polynomial data).
fn contract(ext: &LocalField, base: &LocalField, x: &Elem) -> Result<Elem> {
    let approx = ext.best_subfield_approximation(x, base)?;
    let back = ext.embed_from(base, &approx)?;
    let diff = ext.sub(x, &back);
    if !ext.is_zero_at_prec(&diff) {
        return Err(Error::internal("extension datum does not lie in the base".to_string()));
    }
    Ok(approx)
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
    fn psi_base_values() {
        let k = q2(64);
        let psi = AdditiveChar::new(&k, &k).unwrap();
        assert_eq!(psi.level, 0);
        // ψ(1) = φ(Tr(1)) = −1 on Q₂
        assert_eq!(psi.eval(&k.from_i64(1)).unwrap(), Rotation::half());
        assert_eq!(psi.eval(&k.from_i64(2)).unwrap(), Rotation::zero());
        // ψ(1/2) = exp(2πi/4) = i
        let half = k.inv(&k.from_i64(2)).unwrap();
        assert_eq!(psi.eval(&half).unwrap(), Rotation::new(1, 4));

        let kt = f2t(64);
        let psit = AdditiveChar::new(&kt, &kt).unwrap();
        assert_eq!(psit.level, 0);
        assert_eq!(psit.eval(&kt.one()).unwrap(), Rotation::half());
        let t = kt.uniformizer();
        assert_eq!(psit.eval(&t).unwrap(), Rotation::zero());
        let tinv = kt.inv(&t).unwrap();
        assert_eq!(psit.eval(&tinv).unwrap(), Rotation::zero());
    }

    #[test]
    fn psi_level_formula_agreement() {
        // n(ψ∘Tr) = e·(n(ψ)+1) − d − 1 with base level 0
        let k = q2(64);
        let ext = k
            .extend_eisenstein(&[k.from_i64(-2), k.zero(), k.one()])
            .unwrap();
        let psi = AdditiveChar::new(&ext, &k).unwrap();
        let d = ext.different_valuation_over(&k).unwrap();
        assert_eq!(d, 3);
        assert_eq!(psi.level, 2 - d - 1);
        // ψ(1/2) = −1 over the extension: Tr(1/2) = 1
        let half = ext.inv(&ext.from_i64(2)).unwrap();
        assert_eq!(psi.eval(&half).unwrap(), Rotation::half());
        // unramified quadratic: level 0
        let u = k.extend_unramified(2).unwrap();
        let psi_u = AdditiveChar::new(&u, &k).unwrap();
        assert_eq!(psi_u.level, 0);
        // Eisenstein cubic over F₂((t)): d = 2, e = 3: level = 3 − 2 − 1 = 0
        let kt = f2t(64);
        let t = kt.uniformizer();
        let ext3 = kt
            .extend_eisenstein(&[kt.neg(&t), kt.zero(), kt.zero(), kt.one()])
            .unwrap();
        let psi3 = AdditiveChar::new(&ext3, &kt).unwrap();
        assert_eq!(psi3.level, 0);
    }

    #[test]
    fn tame_cubic_gauss_sum_matches_residue_computation() {
        // χ_τ inflated to the unramified quadratic of Q₂, conductor 1:
        // w must equal the residue-level sum, which is 1
        let k = q2(64);
        let kz = k.extend_unramified(2).unwrap();
        let pres = UnitPresentation::new(&kz, 1).unwrap();
        let psi = AdditiveChar::new(&kz, &k).unwrap();
        let chi = Character {
            order: 3,
            conductor: 1,
            on_pi: Rotation::zero(),
            on_teich: Rotation::new(1, 3),
            on_units: BTreeMap::new(),
        };
        chi.validate(&pres).unwrap();
        let w = w_char(&chi, &pres, &psi).unwrap();
        assert!(w.ring.eq(&w.value, &w.ring.from_int(1)));
        // and the conjugate character gives 1 as well
        let w2 = w_char(&chi.conjugate(), &pres, &psi).unwrap();
        assert!(w2.ring.eq(&w2.value, &w2.ring.from_int(1)));
    }

    #[test]
    fn quadratic_char_conductors() {
        let k = q2(64);
        // Q₂(√2)/Q₂: conductor 3
        let adj = adjoin_quadratic_root(&k, &k.zero(), &k.from_i64(-2)).unwrap();
        let (_, gb, gc) = adj.gen.clone().unwrap();
        let gb = contract(&adj.field, &k, &gb).unwrap();
        let gc = contract(&adj.field, &k, &gc).unwrap();
        let chi = quad_char_from_extension(&k, adj.kind, &gb, &gc).unwrap();
        assert_eq!(chi.conductor, 3);
        // Q₂(√−1)/Q₂: conductor 2
        let adj = adjoin_quadratic_root(&k, &k.zero(), &k.from_i64(1)).unwrap();
        let (_, gb, gc) = adj.gen.clone().unwrap();
        let gb = contract(&adj.field, &k, &gb).unwrap();
        let gc = contract(&adj.field, &k, &gc).unwrap();
        let chi = quad_char_from_extension(&k, adj.kind, &gb, &gc).unwrap();
        assert_eq!(chi.conductor, 2);
        // unramified quadratic: conductor 0
        let adj = adjoin_quadratic_root(&k, &k.zero(), &k.from_i64(-5)).unwrap();
        assert_eq!(adj.kind, QuadExtKind::Unramified);
    }

    #[test]
    fn schmid_symbol_example() {
        let k = f2t(64);
        let t = k.uniformizer();
        let d = k.inv(&t).unwrap(); // z² + z = t⁻¹: ramified, conductor 2
        // [d, x) on units 1 + ct: res(t⁻¹·c/(1+ct)) = c: nontrivial at level 1
        let x = k.add(&k.one(), &t);
        assert_eq!(schmid_symbol(&k, &d, &x).unwrap(), 1);
        let x2 = k.add(&k.one(), &k.pow(&t, 2).unwrap());
        assert_eq!(schmid_symbol(&k, &d, &x2).unwrap(), 0);
        // bilinearity in d on a few samples
        let d2 = k.add(&d, &k.one());
        let s1 = schmid_symbol(&k, &d, &x).unwrap();
        let s2 = schmid_symbol(&k, &k.one(), &x).unwrap();
        let s12 = schmid_symbol(&k, &d2, &x).unwrap();
        assert_eq!(s12, s1 ^ s2);
    }

    #[test]
    fn twist_examples() {
        assert!(twist_exponent(1, 2).is_zero());
        assert_eq!(twist_exponent(1, 4), Rotation::half()); // (−i)² = −1
        assert_eq!(twist_exponent(3, 3), Rotation::new(1, 4)); // (−i)³ = i
    }

    #[test]
    fn pairing_identity_w_chi_conj() {
        // w(χ)·w(χ̄) = χ(−1) for a ramified quadratic character
        let k = q2(64);
        let adj = adjoin_quadratic_root(&k, &k.zero(), &k.from_i64(-2)).unwrap();
        let (_, gb, gc) = adj.gen.clone().unwrap();
        let gb = contract(&adj.field, &k, &gb).unwrap();
        let gc = contract(&adj.field, &k, &gc).unwrap();
        let chi = quad_char_from_extension(&k, adj.kind, &gb, &gc).unwrap();
        let pres = UnitPresentation::new(&k, chi.conductor).unwrap();
        let psi = AdditiveChar::new(&k, &k).unwrap();
        let w1 = w_char(&chi, &pres, &psi).unwrap();
        let w2 = w_char(&chi.conjugate(), &pres, &psi).unwrap();
        let prod = w1.ring.mul(&w1.value, &lift_to(&w2.ring, &w1.ring, &w2.value).unwrap());
        // χ(−1): evaluate
        let chi_m1 = chi.eval(&pres, &k.from_i64(-1)).unwrap();
        let expect = w1.ring.from_rotation(&chi_m1).unwrap();
        assert!(w1.ring.eq(&prod, &expect));
    }

    #[test]
    fn stationary_phase_matches_enumeration() {
        // conductor-3 quadratic character of Q₂ (attached to √2): compare the
        // two evaluation paths
        let k = q2(64);
        let adj = adjoin_quadratic_root(&k, &k.zero(), &k.from_i64(-2)).unwrap();
        let (_, gb, gc) = adj.gen.clone().unwrap();
        let gb = contract(&adj.field, &k, &gb).unwrap();
        let gc = contract(&adj.field, &k, &gc).unwrap();
        let chi = quad_char_from_extension(&k, adj.kind, &gb, &gc).unwrap();
        assert_eq!(chi.conductor, 3);
        let pres = UnitPresentation::new(&k, chi.conductor).unwrap();
        let psi = AdditiveChar::new(&k, &k).unwrap();
        let fast = w_char(&chi, &pres, &psi).unwrap();
        let slow = w_char_by_enumeration(&chi, &pres, &psi).unwrap();
        let slow_lift = lift_to(&slow.ring, &fast.ring, &slow.value).unwrap();
        assert!(fast.ring.eq(&fast.value, &slow_lift));
    }
}
