//! The 3-torsion Galois group classifier for additive, potentially good
//! curves over dyadic fields.
//!
//! Two gates (is ζ₃ rational, i.e. is the residue degree even; is Δ a cube)
//! select one of four cases, and inside each case the decision is made by
//! certified root searches for the torsion quartic g, the derived resolvent
//! of its distinguished quadratic factor, and the y-coordinate quadratic.
//! Every membership fact is recorded with its certificate, and combinations
//! excluded by the group theory surface as internal-consistency errors, not
//! as labels.

use crate::curve::{torsion_quartic, InvariantSet, ReductionType, WeierstrassModel};
use crate::error::{Error, Result};
use crate::gl2f3::IsoLabel;
use crate::local_field::quad::{adjoin_cube_root, adjoin_quadratic_root, QuadExtKind};
use crate::local_field::roots::{cube_root, poly_roots};
use crate::local_field::{Certificate, Elem, LocalField, NoRootReason};
use serde::Serialize;

#[derive(Clone, Serialize)]
pub struct EvidenceItem {
    pub fact: String,
    pub field: String,
    pub result: bool,
    pub certificate: Certificate,
}

#[derive(Clone, Serialize)]
pub struct GaloisClass {
    pub label: IsoLabel,
    pub branch: &'static str,
    pub evidence: Vec<EvidenceItem>,
    pub fields_built: Vec<serde_json::Value>,
    /// Set on branch 3e, whose printed hypothesis overlaps 3d; the
    /// complementary condition used here is recorded.
    pub note: Option<String>,
}

/// Everything the classifier carries between steps.
pub struct Classification {
    pub class: GaloisClass,
    pub base: LocalField,
    pub invariants: InvariantSet,
    pub delta_is_cube: bool,
    pub zeta3_in_base: bool,
    /// K₁ = K(Δ^{1/3}) and the cube root inside it (equals K when Δ is a
    /// cube).
    pub k1: LocalField,
    pub delta_cbrt: Elem,
}

struct Ctx {
    base: LocalField,
    g: Vec<Elem>,
    model: WeierstrassModel,
    inv: InvariantSet,
    evidence: Vec<EvidenceItem>,
    fields_built: Vec<serde_json::Value>,
}

impl Ctx {
    fn record(&mut self, fact: &str, field: &LocalField, result: bool, cert: Certificate) {
        self.evidence.push(EvidenceItem {
            fact: fact.to_string(),
            field: field_name(field),
            result,
            certificate: cert,
        });
    }

    fn built(&mut self, field: &LocalField) {
        self.fields_built.push(field.descriptor());
    }

    /// Roots of g inside F (an extension of the base), with the all-roots
    /// assertion applied when the caller says the hypotheses hold.
    fn roots_of_g(&mut self, field: &LocalField, expect_all_or_none: bool) -> Result<Vec<Elem>> {
        let g_up: Vec<Elem> = self
            .g
            .iter()
            .map(|c| field.embed_from(&self.base, c))
            .collect::<Result<Vec<_>>>()?;
        let roots = poly_roots(field, &g_up)?;
        let cert = roots
            .first()
            .map(|(_, c)| c.clone())
            .unwrap_or(Certificate::NoRoot(NoRootReason::ResidueObstruction));
        self.record("root of g", field, !roots.is_empty(), cert);
        if expect_all_or_none && !roots.is_empty() && roots.len() != 4 {
            return Err(Error::internal(format!(
                "a root of g exists over an extension of K1(zeta3) but only {} of 4 roots found",
                roots.len()
            )));
        }
        Ok(roots.into_iter().map(|(r, _)| r).collect())
    }

    /// The y-coordinate quadratic at a root α: y² + (a₁α + a₃)y = α³ + a₂α²
    /// + a₄α + a₆; answers whether it splits over F.
    fn beta_in_field(&mut self, field: &LocalField, alpha: &Elem) -> Result<bool> {
        let up = |c: &Elem| field.embed_from(&self.base, c);
        let a1 = up(&self.model.a1)?;
        let a2 = up(&self.model.a2)?;
        let a3 = up(&self.model.a3)?;
        let a4 = up(&self.model.a4)?;
        let a6 = up(&self.model.a6)?;
        let b = field.add(&field.mul(&a1, alpha), &a3);
        let rhs = {
            let x2 = field.mul(alpha, alpha);
            let x3 = field.mul(&x2, alpha);
            field.add(
                &field.add(&x3, &field.mul(&a2, &x2)),
                &field.add(&field.mul(&a4, alpha), &a6),
            )
        };
        let c = field.neg(&rhs);
        let adj = adjoin_quadratic_root(field, &b, &c)?;
        let in_field = adj.kind == QuadExtKind::InField;
        self.record(
            "beta in field",
            field,
            in_field,
            if in_field {
                Certificate::Verified
            } else {
                Certificate::NoRoot(NoRootReason::TraceObstruction)
            },
        );
        Ok(in_field)
    }
}

fn field_name(field: &LocalField) -> String {
    format!(
        "{}(f={}, e={})",
        match field.kind() {
            crate::local_field::base::FieldKind::Mixed => "mixed",
            crate::local_field::base::FieldKind::Equal => "equal",
        },
        field.f(),
        field.e()
    )
}

/// Where s and t live relative to a field containing Δ^{1/3}.
pub enum StLocation {
    /// Both in the field.
    InField { s: Elem, t: Elem },
    /// K(s,t) is the given quadratic extension, with s and t inside it.
    Quadratic {
        ext: LocalField,
        s: Elem,
        t: Elem,
    },
}

/// Solve the derived s-resolvent X² + (b₂/3)X + (2b₄ + Δ^{1/3})/3 over F and
/// recover t from the linear relations
/// t + t* = (b₄ − Δ^{1/3})/3,  t·s* + t*·s = −b₆,  t·t* = b₈/3.
pub fn locate_s_t(
    ctx_base: &LocalField,
    field: &LocalField,
    inv: &InvariantSet,
    delta_cbrt: &Elem,
) -> Result<StLocation> {
    let up = |c: &Elem| field.embed_from(ctx_base, c);
    let three_inv = field.inv(&field.from_i64(3))?;
    let b2 = up(&inv.b2)?;
    let b4 = up(&inv.b4)?;
    let b6 = up(&inv.b6)?;
    let b8 = up(&inv.b8)?;
    let res_b = field.mul(&b2, &three_inv);
    let res_c = field.mul(
        &field.add(&field.mul(&field.from_i64(2), &b4), delta_cbrt),
        &three_inv,
    );
    let t_sum = field.mul(&field.sub(&b4, delta_cbrt), &three_inv); // t + t*
    let t_prod = field.mul(&b8, &three_inv); // t·t*
    let u_lin = field.neg(&b6); // t·s* + t*·s

    let recover_t = |f: &LocalField, s: &Elem| -> Result<Option<Elem>> {
        // s* = −b₂/3 − s
        let res_b_up = f.embed_from(field, &res_b)?;
        let sstar = f.sub(&f.neg(&res_b_up), s);
        let diff = f.sub(&sstar, s);
        if f.val(&diff).is_some() {
            let t_sum_up = f.embed_from(field, &t_sum)?;
            let u_up = f.embed_from(field, &u_lin)?;
            let num = f.sub(&u_up, &f.mul(s, &t_sum_up));
            Ok(Some(f.div(&num, &diff)?))
        } else {
            Ok(None)
        }
    };

    let adj = adjoin_quadratic_root(field, &res_b, &res_c)?;
    if adj.kind == QuadExtKind::InField {
        let s = adj.roots[0].clone();
        if let Some(t) = recover_t(field, &s)? {
            return Ok(StLocation::InField { s, t });
        }
        // s = s*: t from X² − (t+t*)X + t·t*
        let tb = field.neg(&t_sum);
        let adj_t = adjoin_quadratic_root(field, &tb, &t_prod)?;
        if adj_t.kind == QuadExtKind::InField {
            return Ok(StLocation::InField {
                s,
                t: adj_t.roots[0].clone(),
            });
        }
        let ext = adj_t.field.clone();
        let s_up = ext.embed_from(field, &s)?;
        return Ok(StLocation::Quadratic {
            ext: ext.clone(),
            s: s_up,
            t: adj_t.roots[0].clone(),
        });
    }
    // s generates the quadratic K(s,t)
    let ext = adj.field.clone();
    let s = adj.roots[0].clone();
    let t = recover_t(&ext, &s)?.ok_or_else(|| {
        Error::internal("resolvent roots collide in their own splitting field".to_string())
    })?;
    Ok(StLocation::Quadratic { ext, s, t })
}

/// Choose Δ^{1/3}: inside K when Δ is a cube (`choice` rotates among the
/// three roots when ζ₃ ∈ K), otherwise the canonical generator data of K₁.
pub fn choose_delta_cube_root(
    field: &LocalField,
    delta: &Elem,
    choice: u8,
) -> Result<(LocalField, Elem, QuadExtKind)> {
    if let Some((root, _)) = cube_root(field, delta)? {
        let mut root = root;
        if choice > 0 && field.f() % 2 == 0 {
            let q1 = field.residue_field().order() - 1;
            let zeta3 = field.pow(&field.teichmuller()?, (q1 / 3) as i64 * choice as i64)?;
            root = field.mul(&root, &zeta3);
        }
        return Ok((field.clone(), root, QuadExtKind::InField));
    }
    let adj = adjoin_cube_root(field, delta)?;
    Ok((adj.field, adj.root, adj.kind))
}

/// Classify G = Gal(K(E[3])/K) for an additive potentially good model.
pub fn classify(model: &WeierstrassModel, assume_minimal: bool) -> Result<Classification> {
    classify_with_choice(model, assume_minimal, 0)
}

pub fn classify_with_choice(
    model: &WeierstrassModel,
    assume_minimal: bool,
    cbrt_choice: u8,
) -> Result<Classification> {
    let base = model.field.clone();
    let inv = model.invariants()?;
    model.minimality_gate(&inv, assume_minimal)?;
    if model.reduction_type(&inv)? != ReductionType::AdditivePotentiallyGood {
        return Err(Error::invalid(
            "classification requires additive, potentially good reduction".to_string(),
        ));
    }
    let g = torsion_quartic(model, &inv, false)?.coeffs;
    let mut ctx = Ctx {
        base: base.clone(),
        g,
        model: model.clone(),
        inv: inv.clone(),
        evidence: vec![],
        fields_built: vec![],
    };

    let zeta3_in_base = base.f() % 2 == 0;
    let (k1, delta_cbrt, k1_kind) = choose_delta_cube_root(&base, &inv.delta, cbrt_choice)?;
    let delta_is_cube = k1_kind == QuadExtKind::InField;
    ctx.record(
        "zeta3 in K",
        &base,
        zeta3_in_base,
        Certificate::Verified,
    );
    ctx.record(
        "Delta is a cube in K",
        &base,
        delta_is_cube,
        if delta_is_cube {
            Certificate::Verified
        } else {
            Certificate::NoRoot(NoRootReason::ResidueObstruction)
        },
    );
    if !delta_is_cube {
        ctx.built(&k1);
    }

    let (label, branch, note) = match (zeta3_in_base, delta_is_cube) {
        (true, true) => case_one(&mut ctx, &delta_cbrt)?,
        (true, false) => case_two(&mut ctx, &k1, &delta_cbrt)?,
        (false, true) => case_three(&mut ctx, &delta_cbrt)?,
        (false, false) => case_four(&mut ctx, &k1, &delta_cbrt)?,
    };

    // Prop f3D(3): 3 | |G| iff Δ is not a cube
    if label.divisible_by_3() == delta_is_cube {
        return Err(Error::internal(format!(
            "order of {} contradicts the cube test",
            label.as_str()
        )));
    }
    // det image: order 2 iff ζ₃ ∉ K; realizable (kernel, image) cells are
    // checked against the atlas by the verification suite; here we check the
    // parity constraint the label admits.
    let odd_image_possible = matches!(
        label,
        IsoLabel::C1 | IsoLabel::C2 | IsoLabel::C3 | IsoLabel::C4 | IsoLabel::C6 | IsoLabel::Q8 | IsoLabel::SL2F3
    );
    let even_image_possible = !matches!(label, IsoLabel::C1 | IsoLabel::C3 | IsoLabel::Q8 | IsoLabel::SL2F3);
    if zeta3_in_base && !odd_image_possible {
        return Err(Error::internal(format!(
            "{} cannot have trivial determinant image",
            label.as_str()
        )));
    }
    if !zeta3_in_base && !even_image_possible {
        return Err(Error::internal(format!(
            "{} cannot have determinant image of order 2",
            label.as_str()
        )));
    }

    Ok(Classification {
        class: GaloisClass {
            label,
            branch,
            evidence: ctx.evidence,
            fields_built: ctx.fields_built,
            note,
        },
        base,
        invariants: inv,
        delta_is_cube,
        zeta3_in_base,
        k1,
        delta_cbrt,
    })
}

type CaseOutcome = (IsoLabel, &'static str, Option<String>);

/// ζ₃ ∈ K, Δ ∈ (K^×)³.
fn case_one(ctx: &mut Ctx, delta_cbrt: &Elem) -> Result<CaseOutcome> {
    let k = ctx.base.clone();
    let roots = ctx.roots_of_g(&k, true)?;
    if !roots.is_empty() {
        return Ok((IsoLabel::C2, "1a", None));
    }
    let inv = ctx.inv.clone();
    match locate_s_t(&k, &k, &inv, delta_cbrt)? {
        StLocation::InField { .. } => {
            ctx.record("s,t in K", &k, true, Certificate::Verified);
            Ok((IsoLabel::C4, "1b", None))
        }
        StLocation::Quadratic { ext, .. } => {
            ctx.record("s,t in K", &k, false, Certificate::NoRoot(NoRootReason::TraceObstruction));
            ctx.built(&ext);
            let roots = ctx.roots_of_g(&ext, true)?;
            if !roots.is_empty() {
                Ok((IsoLabel::C4, "1c", None))
            } else {
                Ok((IsoLabel::Q8, "1d", None))
            }
        }
    }
}

/// ζ₃ ∈ K, Δ ∉ (K^×)³.
fn case_two(ctx: &mut Ctx, k1: &LocalField, delta_cbrt: &Elem) -> Result<CaseOutcome> {
    let inv = ctx.inv.clone();
    match locate_s_t(&ctx.base.clone(), k1, &inv, delta_cbrt)? {
        StLocation::Quadratic { .. } => {
            ctx.record("s,t in K1", k1, false, Certificate::NoRoot(NoRootReason::TraceObstruction));
            Ok((IsoLabel::SL2F3, "2c", None))
        }
        StLocation::InField { .. } => {
            ctx.record("s,t in K1", k1, true, Certificate::Verified);
            let roots = ctx.roots_of_g(k1, true)?;
            let alpha = roots.first().cloned().ok_or_else(|| {
                Error::internal(
                    "s,t in K1 but g has no root there: excluded order-12 subgroup".to_string(),
                )
            })?;
            if ctx.beta_in_field(k1, &alpha)? {
                Ok((IsoLabel::C3, "2a", None))
            } else {
                Ok((IsoLabel::C6, "2b", None))
            }
        }
    }
}

/// ζ₃ ∉ K, Δ ∈ (K^×)³.
fn case_three(ctx: &mut Ctx, delta_cbrt: &Elem) -> Result<CaseOutcome> {
    let k = ctx.base.clone();
    let kz = k.extend_unramified(2)?;
    ctx.built(&kz);
    let roots = ctx.roots_of_g(&kz, true)?;
    if !roots.is_empty() {
        return Ok((IsoLabel::C2xC2, "3a", None));
    }
    let inv = ctx.inv.clone();
    let delta_cbrt_up = kz.embed_from(&k, delta_cbrt)?;
    match locate_s_t(&k, &kz, &inv, &delta_cbrt_up)? {
        StLocation::InField { s, t } => {
            let (s_in_k, cert_s) = kz.subfield_membership(&s, &k)?;
            let (t_in_k, cert_t) = kz.subfield_membership(&t, &k)?;
            ctx.record("s in K", &kz, s_in_k, cert_s);
            ctx.record("t in K", &kz, t_in_k, cert_t);
            if s_in_k && t_in_k {
                Ok((IsoLabel::D8, "3c", None))
            } else {
                Ok((IsoLabel::C8, "3b", None))
            }
        }
        StLocation::Quadratic { ext, .. } => {
            ctx.record(
                "s,t in K(zeta3)",
                &kz,
                false,
                Certificate::NoRoot(NoRootReason::TraceObstruction),
            );
            ctx.built(&ext);
            let roots = ctx.roots_of_g(&ext, true)?;
            if !roots.is_empty() {
                Ok((IsoLabel::D8, "3d", None))
            } else {
                Ok((
                    IsoLabel::SD16,
                    "3e",
                    Some(
                        "3e disambiguated per implementation note: requires alpha outside K(zeta3,s,t)"
                            .to_string(),
                    ),
                ))
            }
        }
    }
}

/// ζ₃ ∉ K, Δ ∉ (K^×)³.
fn case_four(ctx: &mut Ctx, k1: &LocalField, delta_cbrt: &Elem) -> Result<CaseOutcome> {
    let k1z = k1.extend_unramified(2)?;
    ctx.built(&k1z);
    let inv = ctx.inv.clone();
    let delta_cbrt_up = k1z.embed_from(k1, delta_cbrt)?;
    match locate_s_t(&ctx.base.clone(), &k1z, &inv, &delta_cbrt_up)? {
        StLocation::Quadratic { .. } => {
            ctx.record(
                "s,t in K1(zeta3)",
                &k1z,
                false,
                Certificate::NoRoot(NoRootReason::TraceObstruction),
            );
            Ok((IsoLabel::GL2F3, "4c", None))
        }
        StLocation::InField { .. } => {
            ctx.record("s,t in K1(zeta3)", &k1z, true, Certificate::Verified);
            let roots = ctx.roots_of_g(&k1z, true)?;
            let alpha = roots.first().cloned().ok_or_else(|| {
                Error::internal(
                    "s,t in K1(zeta3) but g has no root there: excluded order-24 subgroup"
                        .to_string(),
                )
            })?;
            if ctx.beta_in_field(&k1z, &alpha)? {
                Ok((IsoLabel::D6, "4a", None))
            } else {
                Ok((IsoLabel::D12, "4b", None))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// the degree oracle
// ---------------------------------------------------------------------------

/// Construct L = K(E[3]) step by step and report [L:K] with its
/// ramification split. Used to cross-check every classification: the degree
/// must equal the label's order.
pub struct TowerDegree {
    pub degree: i64,
    pub e: i64,
    pub f: i64,
}

pub fn oracle_tower_degree(model: &WeierstrassModel, assume_minimal: bool) -> Result<TowerDegree> {
    let base = model.field.clone();
    let inv = model.invariants()?;
    model.minimality_gate(&inv, assume_minimal)?;
    if model.reduction_type(&inv)? != ReductionType::AdditivePotentiallyGood {
        return Err(Error::invalid("oracle requires additive potentially good reduction".to_string()));
    }
    let g = torsion_quartic(model, &inv, false)?.coeffs;
    // Δ^{1/3}
    let (k1, delta_cbrt, _) = choose_delta_cube_root(&base, &inv.delta, 0)?;
    // ζ₃
    let (kz, delta_cbrt) = if base.f() % 2 == 1 {
        let kz = k1.extend_unramified(2)?;
        let d = kz.embed_from(&k1, &delta_cbrt)?;
        (kz, d)
    } else {
        (k1.clone(), delta_cbrt)
    };
    // s, t
    let (f_st, _s, s_field_has_alpha_data) = match locate_s_t(&base, &kz, &inv, &delta_cbrt)? {
        StLocation::InField { s, t } => (kz.clone(), s, Some(t)),
        StLocation::Quadratic { ext, s, t } => (ext, s, Some(t)),
    };
    let t = s_field_has_alpha_data.unwrap();
    let s = _s;
    // α: a root of g, inside f_st or a quadratic step via x² − s x + t
    let g_up: Vec<Elem> = g
        .iter()
        .map(|c| f_st.embed_from(&base, c))
        .collect::<Result<Vec<_>>>()?;
    let roots = poly_roots(&f_st, &g_up)?;
    let (f_alpha, alpha) = if let Some((r, _)) = roots.into_iter().next() {
        (f_st.clone(), r)
    } else {
        let b = f_st.neg(&s);
        let adj = adjoin_quadratic_root(&f_st, &b, &t)?;
        if adj.kind == QuadExtKind::InField {
            return Err(Error::internal(
                "x² − sx + t split although g had no roots".to_string(),
            ));
        }
        (adj.field.clone(), adj.roots[0].clone())
    };
    // β over K(…)(α)
    let up = |c: &Elem| f_alpha.embed_from(&base, c);
    let a1 = up(&model.a1)?;
    let a2 = up(&model.a2)?;
    let a3 = up(&model.a3)?;
    let a4 = up(&model.a4)?;
    let a6 = up(&model.a6)?;
    let b = f_alpha.add(&f_alpha.mul(&a1, &alpha), &a3);
    let rhs = {
        let x2 = f_alpha.mul(&alpha, &alpha);
        let x3 = f_alpha.mul(&x2, &alpha);
        f_alpha.add(
            &f_alpha.add(&x3, &f_alpha.mul(&a2, &x2)),
            &f_alpha.add(&f_alpha.mul(&a4, &alpha), &a6),
        )
    };
    let c = f_alpha.neg(&rhs);
    let adj = adjoin_quadratic_root(&f_alpha, &b, &c)?;
    let l = adj.field;
    let e_rel = l.e() / base.e();
    let f_rel = (l.f() / base.f()) as i64;
    Ok(TowerDegree {
        degree: e_rel * f_rel,
        e: e_rel,
        f: f_rel,
    })
}

/// Retry a computation with the documented doubling schedule: start at
/// max(64, 8·(v(Δ)+12)) and double up to 4096 on precision failures.
pub fn with_precision_retry<T>(
    start: i64,
    mut attempt: impl FnMut(i64) -> Result<T>,
) -> Result<T> {
    let mut prec = start.clamp(16, 4096);
    loop {
        match attempt(prec) {
            Err(e) if e.is_precision() && prec < 4096 => {
                prec = (prec * 2).min(4096);
            }
            other => return other,
        }
    }
}

/// The documented default working precision for a model with v(Δ) = n.
pub fn default_precision(n_delta: i64) -> i64 {
    64.max(8 * (n_delta + 12)).min(4096)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local_field::base::FieldKind;

    fn curve_equal(a: [i64; 5], t_positions: &[(usize, i64)], prec: i64) -> WeierstrassModel {
        // integer coefficients plus t-power adjustments for equal char
        let k = LocalField::make_base(FieldKind::Equal, 1, prec).unwrap();
        let t = k.uniformizer();
        let mut coeffs: Vec<Elem> = a.iter().map(|&n| k.from_i64(n)).collect();
        for &(idx, pow) in t_positions {
            coeffs[idx] = k.pow(&t, pow).unwrap();
        }
        WeierstrassModel::new(
            &k,
            coeffs[0].clone(),
            coeffs[1].clone(),
            coeffs[2].clone(),
            coeffs[3].clone(),
            coeffs[4].clone(),
        )
        .unwrap()
    }

    #[test]
    fn worked_curve_equal_char_d6() {
        // y² + ty = x³ over F₂((t)) → D6 via 4a, tower degree 6
        let e = curve_equal([0, 0, 0, 0, 0], &[(2, 1)], 96);
        let cls = classify(&e, false).unwrap();
        assert_eq!(cls.class.label, IsoLabel::D6);
        assert_eq!(cls.class.branch, "4a");
        let deg = oracle_tower_degree(&e, false).unwrap();
        assert_eq!(deg.degree, 6);
        assert_eq!((deg.e, deg.f), (3, 2));
    }

    #[test]
    fn worked_curve_c2xc2() {
        // y² = x³ + 2 over Q₂ → C2×C2 via 3a, tower degree 4
        let k = LocalField::make_base(FieldKind::Mixed, 1, 96).unwrap();
        let e = WeierstrassModel::from_i64(&k, [0, 0, 0, 0, 2]).unwrap();
        let cls = classify(&e, false).unwrap();
        assert_eq!(cls.class.label, IsoLabel::C2xC2);
        assert_eq!(cls.class.branch, "3a");
        let deg = oracle_tower_degree(&e, false).unwrap();
        assert_eq!(deg.degree, 4);
    }

    #[test]
    fn worked_curve_mixed_d6() {
        // y² + 2y = x³ over Q₂ → D6 via 4a, tower degree 6
        let k = LocalField::make_base(FieldKind::Mixed, 1, 96).unwrap();
        let e = WeierstrassModel::from_i64(&k, [0, 0, 2, 0, 0]).unwrap();
        let cls = classify(&e, false).unwrap();
        assert_eq!(cls.class.label, IsoLabel::D6);
        assert_eq!(cls.class.branch, "4a");
        let deg = oracle_tower_degree(&e, false).unwrap();
        assert_eq!(deg.degree, 6);
    }
}
