//! Bounded-precision exact arithmetic in dyadic local fields and their
//! towers.
//!
//! A field is presented in normal form as an unramified floor W (degree f
//! over the 2-adics, or F_{2^f}[[t]]-fractions) followed by a chain of
//! Eisenstein steps. Elements are nested coefficient vectors over W together
//! with a power of the top uniformizer and a certified absolute precision:
//!
//! ```text
//! value = θ^shift · Σ cᵢ θ^i,   cᵢ ∈ (subtower below),   known mod θ^prec
//! ```
//!
//! Every valuation returned is certified (strictly below the element's
//! precision) or reported as indistinguishable from zero; the latter is an
//! error state for decisions, never a value. Arithmetic propagates precision
//! pessimistically:
//!
//! * `a + b` : prec = min(prec a, prec b)
//! * `a · b` : prec = min(prec a + v(b), prec b + v(a))
//! * `a⁻¹`   : prec = prec a − 2·v(a)
//!
//! all capped by the storage window of the floor and the field's working
//! precision.

pub mod base;
pub mod literal;
pub mod quad;
pub mod roots;

use crate::error::{Error, Result};
use crate::finite_field::{FqElem, FqField};
use base::{BaseRing, FieldKind, WElem};
use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;
use std::sync::{Arc, OnceLock};

/// Certificates attached to membership and root-finding answers.
#[derive(Clone, Debug, Serialize)]
pub enum Certificate {
    /// A root was found; Hensel data v(h(r)), v(h'(r)) at return time.
    RootFound {
        residual_val: i64,
        derivative_val: i64,
    },
    NoRoot(NoRootReason),
    /// Membership held at the working precision.
    Verified,
    PrecisionInsufficient {
        detail: String,
    },
}

#[derive(Clone, Debug, Serialize)]
pub enum NoRootReason {
    /// The Newton polygon admits no integral slope for the sought roots.
    NewtonSlope,
    /// The residue polynomial has no suitable root.
    ResidueObstruction,
    /// Odd valuation where an even one is required.
    OddValuation,
    /// Artin–Schreier trace obstruction.
    TraceObstruction,
    /// A coordinate outside the subfield is nonzero at this valuation.
    Coordinate {
        distance: i64,
    },
}

/// One construction step, kept for reporting.
#[derive(Clone, Debug, Serialize)]
pub enum StepDesc {
    Base { kind: String, f: u32, precision: i64 },
    Unramified { d: u32 },
    Eisenstein { degree: usize },
}

struct Ancestor {
    field: LocalField,
    /// Image of the ancestor's residue-generator lift ω.
    base_gen_image: Elem,
    /// Images of each of the ancestor's step uniformizers, bottom-up.
    theta_images: Vec<Elem>,
    /// Image of the ancestor's floor uniformizer (2 resp. t).
    base_uniformizer_image: Elem,
}

struct EisStep {
    /// poly[i] = coefficient of X^i (nodes of the subtower below the step);
    /// poly[degree] = 1.
    poly: Vec<Node>,
    degree: usize,
}

pub(crate) struct FieldInner {
    base: BaseRing,
    steps: Arc<Vec<EisStep>>,
    depth: usize,
    e: i64,
    prec: i64,
    history: Vec<StepDesc>,
    ancestors: OnceLock<Vec<Ancestor>>,
    subtowers: OnceLock<Vec<LocalField>>,
    inv_e0: Vec<OnceLock<Elem>>,
    power_sums: Vec<OnceLock<Vec<Node>>>,
    frob_gen: OnceLock<WElem>,
    teich: OnceLock<Elem>,
    uid: u64,
}

/// A dyadic local field in tower normal form. Cheap to clone and share.
#[derive(Clone)]
pub struct LocalField(Arc<FieldInner>);

/// Nested integral coefficient vector over the floor.
#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) enum Node {
    Base(WElem),
    Ext(Vec<Node>),
}

/// A field element at bounded absolute precision.
#[derive(Clone, Debug)]
pub struct Elem {
    node: Node,
    shift: i64,
    prec: i64,
}

impl Elem {
    pub fn precision(&self) -> i64 {
        self.prec
    }
}

static UID: std::sync::atomic::AtomicU64 = std::sync::atomic::AtomicU64::new(1);

fn next_uid() -> u64 {
    UID.fetch_add(1, std::sync::atomic::Ordering::Relaxed)
}

impl LocalField {
    // ------------------------------------------------------------------
    // construction
    // ------------------------------------------------------------------

    /// The unramified degree-f extension of the 2-adics, or F_{2^f}((t)), at
    /// the given absolute working precision (16 ≤ precision ≤ 4096).
    pub fn make_base(kind: FieldKind, f: u32, precision: i64) -> Result<LocalField> {
        if precision < 16 {
            return Err(Error::invalid("precision must be at least 16".to_string()));
        }
        if precision > 4096 {
            return Err(Error::invalid("precision above the 4096 cap".to_string()));
        }
        let nb = precision as u32 + 16;
        let base = BaseRing::new(kind, f, nb)?;
        let field = LocalField(Arc::new(FieldInner {
            base,
            steps: Arc::new(vec![]),
            depth: 0,
            e: 1,
            prec: precision,
            history: vec![StepDesc::Base {
                kind: match kind {
                    FieldKind::Mixed => "mixed".to_string(),
                    FieldKind::Equal => "equal".to_string(),
                },
                f,
                precision,
            }],
            ancestors: OnceLock::new(),
            subtowers: OnceLock::new(),
            inv_e0: vec![],
            power_sums: vec![],
            frob_gen: OnceLock::new(),
            teich: OnceLock::new(),
            uid: next_uid(),
        }));
        let _ = field.0.ancestors.set(vec![]);
        Ok(field)
    }

    pub fn kind(&self) -> FieldKind {
        self.0.base.kind
    }
    pub fn residue_field(&self) -> FqField {
        self.0.base.fq
    }
    pub fn f(&self) -> u32 {
        self.0.base.fq.degree()
    }
    pub fn e(&self) -> i64 {
        self.0.e
    }
    pub fn precision(&self) -> i64 {
        self.0.prec
    }
    pub fn history(&self) -> &[StepDesc] {
        &self.0.history
    }
    pub fn uid(&self) -> u64 {
        self.0.uid
    }
    fn depth(&self) -> usize {
        self.0.depth
    }
    fn steps(&self) -> &[EisStep] {
        &self.0.steps[..self.0.depth]
    }
    fn capacity(&self) -> i64 {
        self.0.e * self.0.base.nb as i64
    }
    /// v_F(2): the ramification index in mixed characteristic, +∞ (i64::MAX)
    /// in equal characteristic.
    pub fn val_of_two(&self) -> i64 {
        match self.kind() {
            FieldKind::Mixed => self.0.e,
            FieldKind::Equal => i64::MAX,
        }
    }

    pub fn same_field(&self, other: &LocalField) -> bool {
        self.0.uid == other.0.uid
    }

    fn ancestors(&self) -> &[Ancestor] {
        self.0.ancestors.get().map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Ramified extension by a monic Eisenstein polynomial (degree ≥ 2) over
    /// this field. The result is kept in single-step normal form: towers of
    /// Eisenstein steps are flattened through the minimal polynomial of the
    /// top uniformizer over the floor, so element arithmetic never nests.
    pub fn extend_eisenstein(&self, poly: &[Elem]) -> Result<LocalField> {
        let nested = self.extend_eisenstein_nested(poly)?;
        if nested.depth() <= 1 {
            return Ok(nested);
        }
        nested.flatten()
    }

    fn extend_eisenstein_nested(&self, poly: &[Elem]) -> Result<LocalField> {
        if poly.len() < 3 {
            return Err(Error::invalid(
                "Eisenstein step must have degree ≥ 2".to_string(),
            ));
        }
        let d = poly.len() - 1;
        let diff = self.sub(&poly[d], &self.one());
        if self.val(&diff).is_some() {
            return Err(Error::invalid("polynomial is not monic".to_string()));
        }
        for (i, c) in poly.iter().enumerate().take(d) {
            let v = match self.val(c) {
                Some(v) => v,
                None if c.prec >= 1 => continue, // O(π^big): valuation ≥ 1 certified
                None => {
                    return Err(Error::precision(format!(
                        "cannot certify Eisenstein coefficient {}",
                        i
                    )))
                }
            };
            if i == 0 && v != 1 {
                return Err(Error::invalid(format!(
                    "constant term has valuation {}, not 1",
                    v
                )));
            }
            if v < 1 {
                return Err(Error::invalid(format!(
                    "coefficient {} has valuation {} < 1",
                    i, v
                )));
            }
        }
        if self.val(&poly[0]).is_none() {
            return Err(Error::precision("constant term indistinguishable from zero".to_string()));
        }
        let mut nodes = Vec::with_capacity(d + 1);
        for c in poly.iter() {
            nodes.push(self.to_integral_node(c)?);
        }
        nodes[d] = self.one_node();

        let mut steps: Vec<EisStep> = self
            .steps()
            .iter()
            .map(|s| EisStep {
                poly: s.poly.clone(),
                degree: s.degree,
            })
            .collect();
        steps.push(EisStep { poly: nodes, degree: d });
        let mut history = self.0.history.clone();
        history.push(StepDesc::Eisenstein { degree: d });
        let e_new = self.0.e * d as i64;
        let prec_new = (self.0.prec * d as i64).min(e_new * self.0.base.nb as i64);
        let n_steps = steps.len();
        let new = LocalField(Arc::new(FieldInner {
            base: self.0.base.clone(),
            steps: Arc::new(steps),
            depth: n_steps,
            e: e_new,
            prec: prec_new,
            history,
            ancestors: OnceLock::new(),
            subtowers: OnceLock::new(),
            inv_e0: (0..n_steps).map(|_| OnceLock::new()).collect(),
            power_sums: (0..n_steps).map(|_| OnceLock::new()).collect(),
            frob_gen: OnceLock::new(),
            teich: OnceLock::new(),
            uid: next_uid(),
        }));
        new.install_lineage_from(self, None)?;
        Ok(new)
    }

    /// Re-present a nested tower as a single Eisenstein step over the floor:
    /// the top uniformizer generates the whole totally ramified part, and its
    /// monic degree-e relation over the floor is Eisenstein. Ancestor images
    /// are carried across by the change of basis.
    fn flatten(&self) -> Result<LocalField> {
        let e = self.0.e;
        let floor = self.subtower_context(0);
        // θ-powers in the flat mixed-radix basis of the nested tower
        let theta = self.uniformizer();
        let mut pow = self.one();
        let mut powers: Vec<Vec<WElem>> = Vec::with_capacity(e as usize + 1);
        for j in 0..=e {
            powers.push(self.flat_coords(&self.to_integral_node(&pow)?));
            if j < e {
                pow = self.mul(&pow, &theta);
            }
        }
        let wrap = |w: &WElem| -> Elem {
            Elem {
                node: Node::Base(w.clone()),
                shift: 0,
                prec: floor.clamp_prec(i64::MAX, 0),
            }
        };
        // minimal polynomial: solve M·c = θ^e over the floor
        let rows: Vec<Vec<Elem>> = (0..e as usize)
            .map(|r| (0..e as usize).map(|c| wrap(&powers[c][r])).collect())
            .collect();
        let rhs: Vec<Elem> = (0..e as usize).map(|r| wrap(&powers[e as usize][r])).collect();
        let sol = quad::solve_linear(&floor, &rows, &rhs)?.ok_or_else(|| {
            Error::internal("top uniformizer does not generate the tower".to_string())
        })?;
        let mut minpoly: Vec<Elem> = sol.iter().map(|c| floor.neg(c)).collect();
        minpoly.push(floor.one());
        let flat = floor.extend_eisenstein_nested(&minpoly)?;
        debug_assert_eq!(flat.depth(), 1);
        // change of basis: image of each old basis vector in the flat field,
        // obtained by solving M·y = unit_r
        let mut basis_images: Vec<Elem> = Vec::with_capacity(e as usize);
        for r in 0..e as usize {
            let unit: Vec<Elem> = (0..e as usize)
                .map(|i| if i == r { floor.one() } else { floor.zero() })
                .collect();
            let y = quad::solve_linear(&floor, &rows, &unit)?.ok_or_else(|| {
                Error::internal("flattening basis change is singular".to_string())
            })?;
            let mut img = flat.zero();
            let th = flat.uniformizer();
            for (i, c) in y.iter().enumerate() {
                let c_up = flat.lift_floor_elem(c)?;
                img = flat.add(&img, &flat.mul(&c_up, &flat.pow(&th, i as i64)?));
            }
            basis_images.push(img);
        }
        let map_elem = |x: &Elem| -> Result<Elem> {
            let node = self.to_integral_node_with_denominator(x)?;
            let (int_node, k) = node;
            let coords = self.flat_coords(&int_node);
            let mut acc = flat.zero();
            for (r, w) in coords.iter().enumerate() {
                if floor.0.base.is_zero_stored(w) {
                    continue;
                }
                let scalar = flat.lift_floor_elem(&wrap(w))?;
                acc = flat.add(&acc, &flat.mul(&scalar, &basis_images[r]));
            }
            if k > 0 {
                let bu = flat.base_uniformizer();
                let inv = flat.inv(&flat.pow(&bu, k)?)?;
                acc = flat.mul(&acc, &inv);
            }
            Ok(Elem {
                node: acc.node,
                shift: acc.shift,
                prec: flat.clamp_prec(x.prec, acc.shift),
            })
        };
        let mut ancestors = Vec::new();
        for anc in self.ancestors() {
            ancestors.push(Ancestor {
                field: anc.field.clone(),
                base_gen_image: map_elem(&anc.base_gen_image)?,
                theta_images: anc
                    .theta_images
                    .iter()
                    .map(&map_elem)
                    .collect::<Result<Vec<_>>>()?,
                base_uniformizer_image: map_elem(&anc.base_uniformizer_image)?,
            });
        }
        let out = LocalField(Arc::new(FieldInner {
            base: flat.0.base.clone(),
            steps: Arc::clone(&flat.0.steps),
            depth: flat.0.depth,
            e: flat.0.e,
            prec: self.0.prec,
            history: self.0.history.clone(),
            ancestors: OnceLock::new(),
            subtowers: OnceLock::new(),
            inv_e0: (0..flat.0.depth).map(|_| OnceLock::new()).collect(),
            power_sums: (0..flat.0.depth).map(|_| OnceLock::new()).collect(),
            frob_gen: OnceLock::new(),
            teich: OnceLock::new(),
            uid: next_uid(),
        }));
        out.0
            .ancestors
            .set(ancestors)
            .map_err(|_| Error::internal("lineage installed twice".to_string()))?;
        Ok(out)
    }

    /// Write a = (floor uniformizer)^{−k} · integral node with k ≥ 0.
    fn to_integral_node_with_denominator(&self, a: &Elem) -> Result<(Node, i64)> {
        if a.shift >= 0 {
            Ok((self.shift_node(&a.node, a.shift as usize), 0))
        } else {
            let e = self.0.e;
            let k = (-a.shift + e - 1) / e;
            let bu = self.base_uniformizer();
            let bp = self.pow(&bu, k)?;
            let b = self.mul(a, &bp);
            Ok((self.to_integral_node(&b)?, k))
        }
    }

    /// Flat mixed-radix coordinates of an integral node over the floor.
    fn flat_coords(&self, n: &Node) -> Vec<WElem> {
        let mut out = Vec::with_capacity(self.0.e as usize);
        fn walk(field: &LocalField, depth: usize, n: &Node, out: &mut Vec<WElem>) {
            match n {
                Node::Base(w) => out.push(w.clone()),
                Node::Ext(v) => {
                    for c in v {
                        walk(field, depth - 1, c, out);
                    }
                }
            }
        }
        // mixed radix: index = Σ aᵢ·(e of the levels below); the recursion
        // above lists coordinates with the *top* index slowest, so reorder:
        // basis Π θᵢ^{aᵢ} with a_top outermost matches θ_top-major order,
        // which is exactly what the θ-power solve uses as long as we are
        // consistent; consistency is all that matters here.
        walk(self, self.depth(), n, &mut out);
        out
    }

    /// Wrap a floor element (depth-0 Elem) into this field.
    fn lift_floor_elem(&self, x: &Elem) -> Result<Elem> {
        match &x.node {
            Node::Base(w) => {
                let mut e = self.wrap_welem(w.clone());
                e = self.shift_uniformizer(&e, x.shift * self.0.e);
                e.prec = self.clamp_prec(x.prec.saturating_mul(self.0.e), e.shift);
                Ok(e)
            }
            _ => Err(Error::internal("expected a floor element".to_string())),
        }
    }

    /// Unramified extension of relative degree d: a new floor of degree f·d,
    /// with every Eisenstein step re-based onto it.
    pub fn extend_unramified(&self, d: u32) -> Result<LocalField> {
        if d < 2 {
            return Err(Error::invalid("unramified degree must be ≥ 2".to_string()));
        }
        let f_new = self.f() * d;
        let base_new = BaseRing::new(self.kind(), f_new, self.0.base.nb)?;
        let gen_res_img = base_new.fq.subfield_gen_image(self.f())?;
        let w_gen_img = match self.kind() {
            FieldKind::Equal => base_new.lift(gen_res_img),
            FieldKind::Mixed => {
                w_hensel_f2poly_root(&base_new, self.0.base.fq.modulus() as u128, gen_res_img)?
            }
        };
        let steps: Vec<EisStep> = self
            .steps()
            .iter()
            .map(|s| {
                Ok(EisStep {
                    poly: s
                        .poly
                        .iter()
                        .map(|n| map_node_floor(&self.0.base, &base_new, &w_gen_img, n))
                        .collect::<Result<Vec<_>>>()?,
                    degree: s.degree,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut history = self.0.history.clone();
        history.push(StepDesc::Unramified { d });
        let n_steps = steps.len();
        let new = LocalField(Arc::new(FieldInner {
            base: base_new,
            steps: Arc::new(steps),
            depth: n_steps,
            e: self.0.e,
            prec: self.0.prec,
            history,
            ancestors: OnceLock::new(),
            subtowers: OnceLock::new(),
            inv_e0: (0..n_steps).map(|_| OnceLock::new()).collect(),
            power_sums: (0..n_steps).map(|_| OnceLock::new()).collect(),
            frob_gen: OnceLock::new(),
            teich: OnceLock::new(),
            uid: next_uid(),
        }));
        new.install_lineage_from(self, Some(w_gen_img))?;
        Ok(new)
    }

    /// Register self's ancestors: the parent and, transitively, the parent's
    /// ancestors with their images lifted through the new step.
    fn install_lineage_from(&self, parent: &LocalField, rebase_gen: Option<WElem>) -> Result<()> {
        let parent_embed = |x: &Elem| -> Result<Elem> {
            match &rebase_gen {
                None => self.lift_through_top_step(parent, x),
                Some(g) => {
                    let node = map_node_floor(&parent.0.base, &self.0.base, g, &x.node)?;
                    Ok(Elem {
                        node,
                        shift: x.shift,
                        prec: self.clamp_prec(x.prec, x.shift),
                    })
                }
            }
        };
        let mut ancestors: Vec<Ancestor> = Vec::new();
        for anc in parent.ancestors() {
            ancestors.push(Ancestor {
                field: anc.field.clone(),
                base_gen_image: parent_embed(&anc.base_gen_image)?,
                theta_images: anc
                    .theta_images
                    .iter()
                    .map(&parent_embed)
                    .collect::<Result<Vec<_>>>()?,
                base_uniformizer_image: parent_embed(&anc.base_uniformizer_image)?,
            });
        }
        let base_gen_image = match &rebase_gen {
            None => self.wrap_welem(self.0.base.gen()),
            Some(g) => self.wrap_welem(g.clone()),
        };
        let theta_images: Vec<Elem> = (0..parent.depth())
            .map(|k| self.step_variable(k))
            .collect();
        let base_u = self.wrap_welem(self.0.base.mul_uniformizer(&self.0.base.one()));
        ancestors.push(Ancestor {
            field: parent.clone(),
            base_gen_image,
            theta_images,
            base_uniformizer_image: base_u,
        });
        self.0
            .ancestors
            .set(ancestors)
            .map_err(|_| Error::internal("lineage installed twice".to_string()))?;
        Ok(())
    }

    /// Embed a parent element when self = parent + one Eisenstein step.
    fn lift_through_top_step(&self, parent: &LocalField, x: &Elem) -> Result<Elem> {
        let d_top = self.steps().last().unwrap().degree;
        let rel = d_top as i64;
        let mut v = vec![self.zero_node_at(self.depth() - 1); d_top];
        v[0] = x.node.clone();
        let base = Elem {
            node: Node::Ext(v),
            shift: 0,
            prec: self.clamp_prec((x.prec - x.shift).saturating_mul(rel), 0),
        };
        let theta_parent = if parent.depth() == 0 {
            self.base_uniformizer()
        } else {
            self.step_variable(parent.depth() - 1)
        };
        let tp = self.pow(&theta_parent, x.shift)?;
        let out = self.mul(&base, &tp);
        Ok(Elem {
            node: out.node,
            shift: out.shift,
            prec: self.clamp_prec(x.prec.saturating_mul(rel), out.shift),
        })
    }

    /// The variable of step k as an element of self.
    fn step_variable(&self, k: usize) -> Elem {
        let deg = self.steps()[k].degree;
        let mut v = vec![self.zero_node_at(k); deg];
        v[1] = self.one_node_at(k);
        let mut node = Node::Ext(v);
        for kk in (k + 1)..self.depth() {
            let deg = self.steps()[kk].degree;
            let mut v = vec![self.zero_node_at(kk); deg];
            v[0] = node;
            node = Node::Ext(v);
        }
        Elem {
            node,
            shift: 0,
            prec: self.clamp_prec(i64::MAX, 0),
        }
    }

    // ------------------------------------------------------------------
    // node helpers
    // ------------------------------------------------------------------

    fn zero_node_at(&self, depth: usize) -> Node {
        if depth == 0 {
            Node::Base(self.0.base.zero())
        } else {
            Node::Ext(vec![
                self.zero_node_at(depth - 1);
                self.steps()[depth - 1].degree
            ])
        }
    }

    fn one_node_at(&self, depth: usize) -> Node {
        if depth == 0 {
            Node::Base(self.0.base.one())
        } else {
            let deg = self.steps()[depth - 1].degree;
            let mut v = vec![self.zero_node_at(depth - 1); deg];
            v[0] = self.one_node_at(depth - 1);
            Node::Ext(v)
        }
    }

    fn zero_node(&self) -> Node {
        self.zero_node_at(self.depth())
    }
    fn one_node(&self) -> Node {
        self.one_node_at(self.depth())
    }

    fn wrap_welem(&self, w: WElem) -> Elem {
        let mut node = Node::Base(w);
        for k in 0..self.depth() {
            let deg = self.steps()[k].degree;
            let mut v = vec![self.zero_node_at(k); deg];
            v[0] = node;
            node = Node::Ext(v);
        }
        Elem {
            node,
            shift: 0,
            prec: self.clamp_prec(i64::MAX, 0),
        }
    }

    fn e_at(&self, depth: usize) -> i64 {
        self.steps()[..depth].iter().map(|s| s.degree as i64).product()
    }

    fn nadd(&self, depth: usize, a: &Node, b: &Node) -> Node {
        match (a, b) {
            (Node::Base(x), Node::Base(y)) => Node::Base(self.0.base.add(x, y)),
            (Node::Ext(x), Node::Ext(y)) => Node::Ext(
                x.iter()
                    .zip(y.iter())
                    .map(|(p, q)| self.nadd(depth - 1, p, q))
                    .collect(),
            ),
            _ => unreachable!(),
        }
    }

    fn nneg(&self, depth: usize, a: &Node) -> Node {
        match a {
            Node::Base(x) => Node::Base(self.0.base.neg(x)),
            Node::Ext(x) => Node::Ext(x.iter().map(|p| self.nneg(depth - 1, p)).collect()),
        }
    }

    fn nsub(&self, depth: usize, a: &Node, b: &Node) -> Node {
        self.nadd(depth, a, &self.nneg(depth, b))
    }

    fn nmul(&self, depth: usize, a: &Node, b: &Node) -> Node {
        match (a, b) {
            (Node::Base(x), Node::Base(y)) => Node::Base(self.0.base.mul(x, y)),
            (Node::Ext(x), Node::Ext(y)) => {
                let deg = self.steps()[depth - 1].degree;
                let mut prod = vec![self.zero_node_at(depth - 1); 2 * deg - 1];
                for (i, p) in x.iter().enumerate() {
                    if self.nis_zero_stored(depth - 1, p) {
                        continue;
                    }
                    for (j, q) in y.iter().enumerate() {
                        if self.nis_zero_stored(depth - 1, q) {
                            continue;
                        }
                        let t = self.nmul(depth - 1, p, q);
                        prod[i + j] = self.nadd(depth - 1, &prod[i + j], &t);
                    }
                }
                self.nreduce(depth, &mut prod);
                prod.resize(deg, self.zero_node_at(depth - 1));
                Node::Ext(prod)
            }
            _ => unreachable!(),
        }
    }

    fn nreduce(&self, depth: usize, prod: &mut Vec<Node>) {
        let deg = self.steps()[depth - 1].degree;
        while prod.len() > deg {
            let top = prod.len() - 1;
            let c = prod.pop().unwrap();
            if self.nis_zero_stored(depth - 1, &c) {
                continue;
            }
            for i in 0..deg {
                let pi = &self.steps()[depth - 1].poly[i];
                if self.nis_zero_stored(depth - 1, pi) {
                    continue;
                }
                let t = self.nmul(depth - 1, &c, pi);
                prod[top - deg + i] = self.nsub(depth - 1, &prod[top - deg + i], &t);
            }
        }
    }

    fn nis_zero_stored(&self, depth: usize, a: &Node) -> bool {
        match a {
            Node::Base(x) => self.0.base.is_zero_stored(x),
            Node::Ext(x) => x.iter().all(|p| self.nis_zero_stored(depth - 1, p)),
        }
    }

    fn nval(&self, depth: usize, a: &Node) -> Option<i64> {
        match a {
            Node::Base(x) => self.0.base.val(x),
            Node::Ext(x) => {
                let deg = self.steps()[depth - 1].degree as i64;
                let mut best: Option<i64> = None;
                for (i, p) in x.iter().enumerate() {
                    if let Some(v) = self.nval(depth - 1, p) {
                        let cand = deg * v + i as i64;
                        best = Some(match best {
                            None => cand,
                            Some(b) => b.min(cand),
                        });
                    }
                }
                best
            }
        }
    }

    fn nresidue(&self, depth: usize, a: &Node) -> FqElem {
        match a {
            Node::Base(x) => self.0.base.residue(x),
            Node::Ext(x) => self.nresidue(depth - 1, &x[0]),
        }
    }

    fn nlift(&self, depth: usize, r: FqElem) -> Node {
        if depth == 0 {
            Node::Base(self.0.base.lift(r))
        } else {
            let deg = self.steps()[depth - 1].degree;
            let mut v = vec![self.zero_node_at(depth - 1); deg];
            v[0] = self.nlift(depth - 1, r);
            Node::Ext(v)
        }
    }

    fn nmul_theta(&self, depth: usize, a: &Node) -> Node {
        match a {
            Node::Base(x) => Node::Base(self.0.base.mul_uniformizer(x)),
            Node::Ext(x) => {
                let mut v = vec![self.zero_node_at(depth - 1)];
                v.extend(x.iter().cloned());
                self.nreduce(depth, &mut v);
                v.resize(self.steps()[depth - 1].degree, self.zero_node_at(depth - 1));
                Node::Ext(v)
            }
        }
    }

    /// A field handle for the subtower of the first k steps (cached).
    fn subtower_context(&self, k: usize) -> LocalField {
        if k == self.depth() {
            return self.clone();
        }
        let subs = self.0.subtowers.get_or_init(|| {
            (0..self.depth())
                .map(|kk| {
                    LocalField(Arc::new(FieldInner {
                        base: self.0.base.clone(),
                        steps: Arc::clone(&self.0.steps),
                        depth: kk,
                        e: self.e_at(kk),
                        prec: self.e_at(kk) * self.0.base.nb as i64,
                        history: vec![],
                        ancestors: OnceLock::new(),
                        subtowers: OnceLock::new(),
                        inv_e0: (0..kk).map(|_| OnceLock::new()).collect(),
                        power_sums: (0..kk).map(|_| OnceLock::new()).collect(),
                        frob_gen: OnceLock::new(),
                        teich: OnceLock::new(),
                        uid: next_uid(),
                    }))
                })
                .collect()
        });
        subs[k].clone()
    }

    /// 1/E₀ for step k, an element of the subtower below the step.
    fn inv_e0(&self, k: usize) -> Result<Elem> {
        if let Some(e) = self.0.inv_e0[k].get() {
            return Ok(e.clone());
        }
        let sub = self.subtower_context(k);
        let e0_elem = Elem {
            node: self.steps()[k].poly[0].clone(),
            shift: 0,
            prec: sub.clamp_prec(i64::MAX, 0),
        };
        let inv = sub.inv(&e0_elem)?;
        let _ = self.0.inv_e0[k].set(inv.clone());
        Ok(inv)
    }

    /// Exact division of an integral node of valuation ≥ 1 by its level's
    /// uniformizer.
    fn ndiv_theta(&self, depth: usize, a: &Node) -> Result<Node> {
        match a {
            Node::Base(x) => Ok(Node::Base(self.0.base.div_uniformizer(x))),
            Node::Ext(x) => {
                let deg = self.steps()[depth - 1].degree;
                let sub = self.subtower_context(depth - 1);
                let c0 = Elem {
                    node: x[0].clone(),
                    shift: 0,
                    prec: sub.clamp_prec(i64::MAX, 0),
                };
                let qnode = if sub.val(&c0).is_none() {
                    sub.zero_node()
                } else {
                    let inv_e0 = self.inv_e0(depth - 1)?;
                    let quot = sub.mul(&c0, &inv_e0);
                    sub.to_integral_node(&quot)?
                };
                let mut out: Vec<Node> = x[1..].to_vec();
                out.push(self.zero_node_at(depth - 1));
                for (idx, item) in out.iter_mut().enumerate() {
                    let i = idx + 1;
                    let pi = if i < deg {
                        self.steps()[depth - 1].poly[i].clone()
                    } else {
                        self.one_node_at(depth - 1)
                    };
                    if self.nis_zero_stored(depth - 1, &qnode) {
                        break;
                    }
                    let t = self.nmul(depth - 1, &qnode, &pi);
                    *item = self.nsub(depth - 1, item, &t);
                }
                Ok(Node::Ext(out))
            }
        }
    }

    // ------------------------------------------------------------------
    // element API
    // ------------------------------------------------------------------

    fn clamp_prec(&self, prec: i64, shift: i64) -> i64 {
        prec.min(shift.saturating_add(self.capacity())).min(self.0.prec)
    }

    pub fn zero(&self) -> Elem {
        Elem {
            node: self.zero_node(),
            shift: 0,
            prec: self.0.prec,
        }
    }

    pub fn one(&self) -> Elem {
        Elem {
            node: self.one_node(),
            shift: 0,
            prec: self.clamp_prec(i64::MAX, 0),
        }
    }

    pub fn from_i64(&self, n: i64) -> Elem {
        self.wrap_welem(self.0.base.from_i64(n))
    }

    pub fn from_biguint(&self, n: &BigUint) -> Elem {
        match self.kind() {
            FieldKind::Mixed => {
                let masked = n % (BigUint::from(1u32) << self.0.base.nb);
                let mut coords = vec![BigUint::zero(); self.f() as usize];
                coords[0] = masked;
                self.wrap_welem(self.0.base.from_mixed_coords(coords).unwrap())
            }
            FieldKind::Equal => {
                if (n % 2u32).is_zero() {
                    self.zero()
                } else {
                    self.one()
                }
            }
        }
    }

    /// The canonical uniformizer (top step variable; 2 resp. t on the floor).
    pub fn uniformizer(&self) -> Elem {
        Elem {
            node: self.one_node(),
            shift: 1,
            prec: self.clamp_prec(i64::MAX, 1),
        }
    }

    /// The floor uniformizer (2 resp. t) as an element of self.
    pub fn base_uniformizer(&self) -> Elem {
        self.wrap_welem(self.0.base.mul_uniformizer(&self.0.base.one()))
    }

    /// 0/1-coordinate lift of a residue-field element.
    pub fn lift_residue(&self, r: FqElem) -> Elem {
        Elem {
            node: self.nlift(self.depth(), r),
            shift: 0,
            prec: self.clamp_prec(i64::MAX, 0),
        }
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        let s = a.shift.min(b.shift);
        let an = self.shift_node(&a.node, (a.shift - s) as usize);
        let bn = self.shift_node(&b.node, (b.shift - s) as usize);
        self.renorm(Elem {
            node: self.nadd(self.depth(), &an, &bn),
            shift: s,
            prec: self.clamp_prec(a.prec.min(b.prec), s),
        })
    }

    /// Keep the representation anchored at the valuation: canonicalize
    /// elements indistinguishable from zero, and strip large positive node
    /// valuations back into the shift so the storage window is not wasted.
    fn renorm(&self, a: Elem) -> Elem {
        let nv = match self.nval(self.depth(), &a.node) {
            None => {
                return Elem {
                    node: self.zero_node(),
                    shift: 0,
                    prec: a.prec,
                }
            }
            Some(nv) => nv,
        };
        if nv < 4 {
            return a;
        }
        let mut node = a.node;
        let mut moved = 0;
        while moved < nv {
            match self.ndiv_theta(self.depth(), &node) {
                Ok(n) => node = n,
                Err(_) => break,
            }
            moved += 1;
        }
        Elem {
            node,
            shift: a.shift + moved,
            prec: self.clamp_prec(a.prec, a.shift + moved),
        }
    }

    fn shift_node(&self, n: &Node, k: usize) -> Node {
        let mut out = n.clone();
        for _ in 0..k {
            out = self.nmul_theta(self.depth(), &out);
        }
        out
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        Elem {
            node: self.nneg(self.depth(), &a.node),
            shift: a.shift,
            prec: a.prec,
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let va = self.val_lower_bound(a);
        let vb = self.val_lower_bound(b);
        let shift = a.shift + b.shift;
        let prec = a
            .prec
            .saturating_add(vb)
            .min(b.prec.saturating_add(va));
        self.renorm(Elem {
            node: self.nmul(self.depth(), &a.node, &b.node),
            shift,
            prec: self.clamp_prec(prec, shift),
        })
    }

    fn val_lower_bound(&self, a: &Elem) -> i64 {
        match self.val(a) {
            Some(v) => v,
            None => a.prec,
        }
    }

    /// Certified valuation: strictly below the precision bound. None means
    /// indistinguishable from zero at this precision.
    pub fn val(&self, a: &Elem) -> Option<i64> {
        let nv = self.nval(self.depth(), &a.node)?;
        let v = nv + a.shift;
        if v < a.prec {
            Some(v)
        } else {
            None
        }
    }

    pub fn certified_val(&self, a: &Elem) -> Result<i64> {
        self.val(a).ok_or_else(|| {
            Error::precision(format!(
                "element indistinguishable from zero at O(pi^{})",
                a.prec
            ))
        })
    }

    pub fn is_zero_at_prec(&self, a: &Elem) -> bool {
        self.val(a).is_none()
    }

    pub fn eq_at_prec(&self, a: &Elem, b: &Elem) -> bool {
        self.is_zero_at_prec(&self.sub(a, b))
    }

    /// Strip to θ^v · unit; returns (v, unit) with the unit integral.
    pub(crate) fn strip(&self, a: &Elem) -> Result<(i64, Elem)> {
        let v = self.certified_val(a)?;
        let nv = v - a.shift;
        let mut node = a.node.clone();
        for _ in 0..nv {
            node = self.ndiv_theta(self.depth(), &node)?;
        }
        Ok((
            v,
            Elem {
                node,
                shift: 0,
                prec: self.clamp_prec(a.prec - v, 0),
            },
        ))
    }

    /// Image in the residue field (integral elements).
    pub fn residue(&self, a: &Elem) -> Result<FqElem> {
        match self.val(a) {
            None => Ok(0),
            Some(v) if v > 0 => Ok(0),
            Some(v) if v < 0 => {
                Err(Error::invalid("residue of a non-integral element".to_string()))
            }
            _ => {
                let (_, unit) = self.strip(a)?;
                Ok(self.nresidue(self.depth(), &unit.node))
            }
        }
    }

    pub fn inv(&self, a: &Elem) -> Result<Elem> {
        let (v, unit) = self.strip(a)?;
        let r = self.nresidue(self.depth(), &unit.node);
        let r_inv = self.residue_field().inv(r)?;
        let mut y = self.lift_residue(r_inv);
        let two = self.from_i64(2);
        let rounds = 64 - (self.capacity() as u64).leading_zeros() + 2;
        for _ in 0..rounds {
            let uy = self.mul(&unit, &y);
            let t = self.sub(&two, &uy);
            y = self.mul(&y, &t);
            y.prec = self.clamp_prec(i64::MAX, y.shift);
        }
        let prec = self.clamp_prec(a.prec - 2 * v, -v);
        Ok(Elem {
            node: self.to_integral_node(&Elem {
                node: y.node,
                shift: y.shift,
                prec: y.prec,
            })?,
            shift: -v,
            prec,
        })
    }

    pub fn div(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Elem, k: i64) -> Result<Elem> {
        if k == 0 {
            return Ok(self.one());
        }
        let base = if k < 0 { self.inv(a)? } else { a.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = self.one();
        let mut cur = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &cur);
            }
            e >>= 1;
            if e > 0 {
                cur = self.mul(&cur, &cur);
            }
        }
        Ok(acc)
    }

    /// Multiply by θ^k (exact; k may be negative).
    pub fn shift_uniformizer(&self, a: &Elem, k: i64) -> Elem {
        Elem {
            node: a.node.clone(),
            shift: a.shift + k,
            prec: self.clamp_prec(a.prec.saturating_add(k), a.shift + k),
        }
    }

    /// Cap the certified precision (models O(π^k) tails).
    pub fn truncate_prec(&self, a: &Elem, k: i64) -> Elem {
        Elem {
            node: a.node.clone(),
            shift: a.shift,
            prec: a.prec.min(k),
        }
    }

    pub(crate) fn to_integral_node(&self, a: &Elem) -> Result<Node> {
        if a.shift >= 0 {
            Ok(self.shift_node(&a.node, a.shift as usize))
        } else {
            let need = -a.shift;
            let nv = self.nval(self.depth(), &a.node).unwrap_or(i64::MAX);
            if nv < need {
                return Err(Error::internal(
                    "to_integral_node on a non-integral element".to_string(),
                ));
            }
            let mut node = a.node.clone();
            for _ in 0..need.min(self.capacity()) {
                node = self.ndiv_theta(self.depth(), &node)?;
            }
            Ok(node)
        }
    }

    /// Canonical digit expansion Σ dᵢ θ^i over lo ≤ i < hi with residue-field
    /// digits.
    pub fn theta_digits(&self, a: &Elem, lo: i64, hi: i64) -> Result<Vec<FqElem>> {
        let mut digits = vec![0; (hi - lo).max(0) as usize];
        let mut cur = a.clone();
        while let Some(v) = self.val(&cur) {
            if v >= hi {
                break;
            }
            let (vv, unit) = self.strip(&cur)?;
            let r = self.nresidue(self.depth(), &unit.node);
            if vv >= lo {
                digits[(vv - lo) as usize] = r;
            }
            let term = self.shift_uniformizer(&self.lift_residue(r), vv);
            cur = self.sub(&cur, &term);
        }
        Ok(digits)
    }

    /// Rebuild from residue digits starting at valuation `start`.
    pub fn from_digits(&self, digits: &[FqElem], start: i64) -> Elem {
        let mut acc = self.zero();
        for (i, &d) in digits.iter().enumerate() {
            if d == 0 {
                continue;
            }
            let term = self.shift_uniformizer(&self.lift_residue(d), start + i as i64);
            acc = self.add(&acc, &term);
        }
        let shift = acc.shift;
        acc.prec = self.clamp_prec(i64::MAX, shift);
        acc
    }

    // ------------------------------------------------------------------
    // Teichmüller, Frobenius, traces, different
    // ------------------------------------------------------------------

    /// Canonical generator of μ_{2^f − 1}: exact in equal characteristic,
    /// Hensel-lifted in mixed characteristic.
    pub fn teichmuller(&self) -> Result<Elem> {
        if let Some(t) = self.0.teich.get() {
            return Ok(t.clone());
        }
        let g = self.residue_field().gen();
        let out = match self.kind() {
            FieldKind::Equal => self.lift_residue(g),
            FieldKind::Mixed => {
                let q1 = (self.residue_field().order() - 1) as i64;
                let mut x = self.lift_residue(g);
                let one = self.one();
                let rounds = 64 - (self.capacity() as u64).leading_zeros() + 2;
                for _ in 0..rounds {
                    let xq1 = self.pow(&x, q1)?;
                    let fx = self.sub(&xq1, &one);
                    if self.is_zero_at_prec(&fx) {
                        break;
                    }
                    let dfx = self.mul(&self.from_i64(q1), &self.pow(&x, q1 - 1)?);
                    let corr = self.div(&fx, &dfx)?;
                    x = self.sub(&x, &corr);
                    x.prec = self.clamp_prec(i64::MAX, x.shift);
                }
                x
            }
        };
        let _ = self.0.teich.set(out.clone());
        Ok(out)
    }

    fn frob_gen_w(&self) -> Result<WElem> {
        if let Some(w) = self.0.frob_gen.get() {
            return Ok(w.clone());
        }
        let fq = self.residue_field();
        let target = fq.square(fq.gen());
        let w = w_hensel_f2poly_root(&self.0.base, fq.modulus() as u128, target)?;
        let _ = self.0.frob_gen.set(w.clone());
        Ok(w)
    }

    /// The floor Frobenius (lift of x ↦ x² on the residue field) applied
    /// coefficient-wise. Valid on towers whose Eisenstein coefficients are
    /// fixed by it, e.g. anything built by `extend_unramified`.
    pub fn frobenius_floor(&self, a: &Elem) -> Result<Elem> {
        let node = match self.kind() {
            FieldKind::Equal => {
                let fq = self.residue_field();
                self.nmap_w(&a.node, &|w| {
                    if let WElem::Equal(coeffs) = w {
                        WElem::Equal(coeffs.iter().map(|&c| fq.square(c)).collect())
                    } else {
                        unreachable!()
                    }
                })
            }
            FieldKind::Mixed => {
                let img = self.frob_gen_w()?;
                map_node_floor(&self.0.base, &self.0.base, &img, &a.node)?
            }
        };
        Ok(Elem {
            node,
            shift: a.shift,
            prec: a.prec,
        })
    }

    fn nmap_w(&self, n: &Node, f: &dyn Fn(&WElem) -> WElem) -> Node {
        match n {
            Node::Base(w) => Node::Base(f(w)),
            Node::Ext(v) => Node::Ext(v.iter().map(|p| self.nmap_w(p, f)).collect()),
        }
    }

    /// Power sums p_j = Σ (roots of step k)^j, j < 2·deg, division-free.
    fn step_power_sums(&self, k: usize) -> Vec<Node> {
        if let Some(ps) = self.0.power_sums[k].get() {
            return ps.clone();
        }
        let deg = self.steps()[k].degree;
        let sd = k;
        let a = |i: usize| -> &Node { &self.steps()[k].poly[i] };
        let mut p: Vec<Node> = Vec::with_capacity(2 * deg);
        let mut deg_node = self.zero_node_at(sd);
        for _ in 0..deg {
            deg_node = self.nadd(sd, &deg_node, &self.one_node_at(sd));
        }
        p.push(deg_node);
        for j in 1..2 * deg {
            let mut acc = self.zero_node_at(sd);
            for i in 1..j.min(deg + 1) {
                if i <= deg && j - i < p.len() {
                    let t = self.nmul(sd, a(deg - i), &p[j - i]);
                    acc = self.nadd(sd, &acc, &t);
                }
            }
            if j <= deg {
                let mut ja = self.zero_node_at(sd);
                for _ in 0..j {
                    ja = self.nadd(sd, &ja, a(deg - j));
                }
                acc = self.nadd(sd, &acc, &ja);
            }
            p.push(self.nneg(sd, &acc));
        }
        let _ = self.0.power_sums[k].set(p.clone());
        p
    }

    /// Trace to the subtower below the top step.
    fn trace_top_step(&self, a: &Elem) -> Result<Elem> {
        let depth = self.depth();
        assert!(depth > 0);
        let deg = self.steps()[depth - 1].degree as i64;
        let sub = self.subtower_context(depth - 1);
        // clear negative shifts with a *floor* power, which is a scalar for
        // the trace
        let (b, k) = if a.shift >= 0 {
            (a.clone(), 0i64)
        } else {
            let e = self.0.e;
            let k = (-a.shift + e - 1) / e;
            let bu = self.base_uniformizer();
            let bp = self.pow(&bu, k)?;
            (self.mul(a, &bp), k)
        };
        let node = self.to_integral_node(&b)?;
        let coeffs = match node {
            Node::Ext(v) => v,
            _ => unreachable!(),
        };
        let ps = self.step_power_sums(depth - 1);
        let mut acc = sub.zero();
        for (i, c) in coeffs.iter().enumerate() {
            if self.nis_zero_stored(depth - 1, c) {
                continue;
            }
            let t = self.nmul(depth - 1, c, &ps[i]);
            acc = sub.add(
                &acc,
                &Elem {
                    node: t,
                    shift: 0,
                    prec: sub.clamp_prec(i64::MAX, 0),
                },
            );
        }
        if k > 0 {
            let bu = sub.base_uniformizer();
            let bp = sub.pow(&bu, k)?;
            acc = sub.div(&acc, &bp)?;
        }
        // d(step) ≥ deg−1 gives Tr(O(θ^p)) ⊆ O(θ_sub^{⌊p/deg⌋})
        acc.prec = acc.prec.min(a.prec.div_euclid(deg));
        Ok(acc)
    }

    /// Trace down to a floor ancestor (or self): descend the Eisenstein
    /// steps via power sums, then sum Galois conjugates across the floor and
    /// contract coordinates.
    pub fn trace_to(&self, a: &Elem, target: &LocalField) -> Result<Elem> {
        if self.same_field(target) {
            return Ok(a.clone());
        }
        if !self.is_ancestor(target) || target.depth() != 0 {
            return Err(Error::invalid(
                "trace target must be a floor ancestor".to_string(),
            ));
        }
        let mut field = self.clone();
        let mut x = a.clone();
        while field.depth() > 0 {
            x = field.trace_top_step(&x)?;
            let next = field.subtower_context(field.depth() - 1);
            field = next;
        }
        let d = field.f() / target.f();
        if d > 1 {
            let mut acc = x.clone();
            let mut cur = x.clone();
            for _ in 1..d {
                for _ in 0..target.f() {
                    cur = field.frobenius_floor(&cur)?;
                }
                acc = field.add(&acc, &cur);
            }
            let anc = self
                .ancestors()
                .iter()
                .find(|an| an.field.same_field(target))
                .ok_or_else(|| Error::internal("missing floor lineage".to_string()))?;
            let gen_w = floor_welem_of(self, &anc.base_gen_image)?;
            let node = contract_node_floor(&field.0.base, &target.0.base, &gen_w, &acc.node)?;
            x = Elem {
                node,
                shift: acc.shift,
                prec: target.clamp_prec(acc.prec, acc.shift),
            };
        } else {
            x = Elem {
                node: x.node,
                shift: x.shift,
                prec: target.clamp_prec(x.prec, x.shift),
            };
        }
        Ok(x)
    }

    // ------------------------------------------------------------------
    // embeddings, membership
    // ------------------------------------------------------------------

    pub fn is_ancestor(&self, other: &LocalField) -> bool {
        self.same_field(other) || self.ancestors().iter().any(|a| a.field.same_field(other))
    }

    /// Embed an element of an ancestor field into self.
    pub fn embed_from(&self, source: &LocalField, x: &Elem) -> Result<Elem> {
        if self.same_field(source) {
            return Ok(x.clone());
        }
        let anc = self
            .ancestors()
            .iter()
            .find(|a| a.field.same_field(source))
            .ok_or_else(|| Error::invalid("embed source is not an ancestor".to_string()))?;
        let node_img = self.embed_node(source, anc, source.depth(), &x.node)?;
        let theta_img = if source.depth() == 0 {
            &anc.base_uniformizer_image
        } else {
            &anc.theta_images[source.depth() - 1]
        };
        let theta_pow = self.pow(theta_img, x.shift)?;
        let scale = self.0.e / source.0.e;
        let out = self.mul(&node_img, &theta_pow);
        Ok(Elem {
            node: out.node,
            shift: out.shift,
            prec: self.clamp_prec(x.prec.saturating_mul(scale), out.shift),
        })
    }

    fn embed_node(
        &self,
        source: &LocalField,
        anc: &Ancestor,
        depth: usize,
        n: &Node,
    ) -> Result<Elem> {
        match n {
            Node::Base(w) => self.embed_welem(source, anc, w),
            Node::Ext(v) => {
                let theta = &anc.theta_images[depth - 1];
                let mut acc = self.zero();
                let mut tpow = self.one();
                for (i, c) in v.iter().enumerate() {
                    if !source.nis_zero_stored(depth - 1, c) {
                        let ce = self.embed_node(source, anc, depth - 1, c)?;
                        acc = self.add(&acc, &self.mul(&ce, &tpow));
                    }
                    if i + 1 < v.len() {
                        tpow = self.mul(&tpow, theta);
                    }
                }
                Ok(acc)
            }
        }
    }

    fn embed_welem(&self, source: &LocalField, anc: &Ancestor, w: &WElem) -> Result<Elem> {
        if let Some(coords) = source.0.base.mixed_as_biguints(w) {
            let mut acc = self.zero();
            let mut gpow = self.one();
            for (j, c) in coords.iter().enumerate() {
                if !c.is_zero() {
                    let scalar = self.from_biguint(c);
                    acc = self.add(&acc, &self.mul(&scalar, &gpow));
                }
                if j + 1 < coords.len() {
                    gpow = self.mul(&gpow, &anc.base_gen_image);
                }
            }
            return Ok(acc);
        }
        match w {
            WElem::Equal(coeffs) => {
                let fq_src = source.residue_field();
                let mut acc = self.zero();
                let mut tpow = self.one();
                for (i, &kappa) in coeffs.iter().enumerate() {
                    if kappa != 0 {
                        let mut kacc = self.zero();
                        let mut gpow = self.one();
                        for bit in 0..fq_src.degree() {
                            if (kappa >> bit) & 1 == 1 {
                                kacc = self.add(&kacc, &gpow);
                            }
                            if bit + 1 < fq_src.degree() {
                                gpow = self.mul(&gpow, &anc.base_gen_image);
                            }
                        }
                        acc = self.add(&acc, &self.mul(&kacc, &tpow));
                    }
                    if i + 1 < coeffs.len() {
                        tpow = self.mul(&tpow, &anc.base_uniformizer_image);
                    }
                }
                Ok(acc)
            }
            _ => unreachable!("mixed elements handled above"),
        }
    }

    /// Membership of x in a registered ancestor, with a distance certificate
    /// on failure.
    pub fn subfield_membership(
        &self,
        x: &Elem,
        sub: &LocalField,
    ) -> Result<(bool, Certificate)> {
        if self.same_field(sub) {
            return Ok((true, Certificate::Verified));
        }
        if !self.is_ancestor(sub) {
            return Err(Error::invalid("membership target is not an ancestor".to_string()));
        }
        let approx = self.best_subfield_approximation(x, sub)?;
        let emb = self.embed_from(sub, &approx)?;
        let diff = self.sub(x, &emb);
        match self.val(&diff) {
            None => Ok((true, Certificate::Verified)),
            Some(d) => Ok((
                false,
                Certificate::NoRoot(NoRootReason::Coordinate { distance: d }),
            )),
        }
    }

    /// Greedy digit projection of x onto the subfield: the θ_S-digit
    /// expansion as long as digits stay in the subfield's residue field and
    /// valuations stay in e(F/S)·Z.
    pub fn best_subfield_approximation(&self, x: &Elem, sub: &LocalField) -> Result<Elem> {
        let rel_e = self.0.e / sub.0.e;
        let f_sub = sub.f();
        let fq = self.residue_field();
        let fq_sub = sub.residue_field();
        let mut cur = x.clone();
        let mut acc = sub.zero();
        let mut guard = 0i64;
        while let Some(v) = self.val(&cur) {
            guard += 1;
            if guard > 4 * self.capacity().max(64) {
                return Err(Error::internal("projection loop did not terminate".to_string()));
            }
            if v.rem_euclid(rel_e) != 0 {
                break;
            }
            let (_, unit) = self.strip(&cur)?;
            let r = self.nresidue(self.depth(), &unit.node);
            let mut rf = r;
            for _ in 0..f_sub {
                rf = fq.square(rf);
            }
            if rf != r {
                break;
            }
            let r_sub = if fq.degree() == fq_sub.degree() {
                r
            } else {
                project_residue(&fq, &fq_sub, r)?
            };
            let term_sub = sub.shift_uniformizer(&sub.lift_residue(r_sub), v / rel_e);
            acc = sub.add(&acc, &term_sub);
            let term_self = self.embed_from(sub, &term_sub)?;
            cur = self.sub(&cur, &term_self);
        }
        Ok(acc)
    }

    // ------------------------------------------------------------------
    // different
    // ------------------------------------------------------------------

    /// v_F(𝔇(F/S)) for a floor ancestor S: additivity over the Eisenstein
    /// steps (each contributes v(E'(θ))), unramified floor growth
    /// contributes 0.
    pub fn different_valuation_over(&self, target: &LocalField) -> Result<i64> {
        if self.same_field(target) {
            return Ok(0);
        }
        if !self.is_ancestor(target) || target.depth() != 0 {
            return Err(Error::invalid(
                "different target must be a floor ancestor".to_string(),
            ));
        }
        let mut total = 0i64;
        for k in 0..self.depth() {
            let sub = self.subtower_context(k + 1);
            let deg = self.steps()[k].degree;
            let theta = sub.uniformizer();
            let mut acc = sub.zero();
            for i in 1..=deg {
                let coeff_node = if i < deg {
                    self.steps()[k].poly[i].clone()
                } else {
                    self.one_node_at(k)
                };
                let c = Elem {
                    node: {
                        let mut v = vec![self.zero_node_at(k); deg];
                        v[0] = coeff_node;
                        Node::Ext(v)
                    },
                    shift: 0,
                    prec: sub.clamp_prec(i64::MAX, 0),
                };
                let term = sub.mul(
                    &sub.mul(&sub.from_i64(i as i64), &c),
                    &sub.pow(&theta, (i - 1) as i64)?,
                );
                acc = sub.add(&acc, &term);
            }
            let v = sub.certified_val(&acc)?;
            total += (self.0.e / sub.0.e) * v;
        }
        Ok(total)
    }

    pub fn descriptor(&self) -> serde_json::Value {
        serde_json::json!({
            "kind": match self.kind() { FieldKind::Mixed => "mixed", FieldKind::Equal => "equal" },
            "f": self.f(),
            "e": self.e(),
            "precision": self.precision(),
            "steps": self.history(),
        })
    }
}

/// Extract the floor WElem of an element that is constant in all tower
/// variables.
fn floor_welem_of(field: &LocalField, x: &Elem) -> Result<WElem> {
    let mut n = &x.node;
    let mut depth = field.depth();
    loop {
        match n {
            Node::Base(w) => return Ok(w.clone()),
            Node::Ext(v) => {
                for c in &v[1..] {
                    if !field.nis_zero_stored(depth - 1, c) {
                        return Err(Error::internal(
                            "expected a floor element, found tower coordinates".to_string(),
                        ));
                    }
                }
                n = &v[0];
                depth -= 1;
            }
        }
    }
}

/// Map a node across a floor embedding W → W' given the image of the W
/// generator.
fn map_node_floor(src: &BaseRing, dst: &BaseRing, w_gen_img: &WElem, n: &Node) -> Result<Node> {
    match n {
        Node::Ext(v) => Ok(Node::Ext(
            v.iter()
                .map(|c| map_node_floor(src, dst, w_gen_img, c))
                .collect::<Result<Vec<_>>>()?,
        )),
        Node::Base(w) => Ok(Node::Base(map_welem_floor(src, dst, w_gen_img, w)?)),
    }
}

fn map_welem_floor(src: &BaseRing, dst: &BaseRing, w_gen_img: &WElem, w: &WElem) -> Result<WElem> {
    if let Some(coords) = src.mixed_as_biguints(w) {
        let mut acc = dst.zero();
        let mut gpow = dst.one();
        for (j, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                let mut coords_c = vec![BigUint::zero(); dst.f() as usize];
                coords_c[0] = c.clone();
                let scalar = dst.from_mixed_coords(coords_c)?;
                acc = dst.add(&acc, &dst.mul(&scalar, &gpow));
            }
            if j + 1 < coords.len() {
                gpow = dst.mul(&gpow, w_gen_img);
            }
        }
        return Ok(acc);
    }
    match w {
        WElem::Equal(coeffs) => {
            let img_res = dst.residue(w_gen_img);
            let fq_src = src.fq;
            let fq_dst = dst.fq;
            let mut out: Vec<(u32, FqElem)> = vec![];
            for (i, &kappa) in coeffs.iter().enumerate() {
                let mut acc = 0u64;
                let mut gpow = 1u64;
                for bit in 0..fq_src.degree() {
                    if (kappa >> bit) & 1 == 1 {
                        acc = fq_dst.add(acc, gpow);
                    }
                    gpow = fq_dst.mul(gpow, img_res);
                }
                if acc != 0 {
                    out.push((i as u32, acc));
                }
            }
            dst.from_equal_coeffs(out)
        }
        _ => unreachable!("mixed elements handled above"),
    }
}

/// Inverse of `map_node_floor` on nodes lying in the embedded subfloor.
fn contract_node_floor(
    big: &BaseRing,
    small: &BaseRing,
    w_gen_img: &WElem,
    n: &Node,
) -> Result<Node> {
    match n {
        Node::Ext(v) => Ok(Node::Ext(
            v.iter()
                .map(|c| contract_node_floor(big, small, w_gen_img, c))
                .collect::<Result<Vec<_>>>()?,
        )),
        Node::Base(w) => Ok(Node::Base(contract_welem_floor(big, small, w_gen_img, w)?)),
    }
}

fn contract_welem_floor(
    big: &BaseRing,
    small: &BaseRing,
    w_gen_img: &WElem,
    w: &WElem,
) -> Result<WElem> {
    match w {
        WElem::Equal(coeffs) => {
            let fq_big = big.fq;
            let img = big.residue(w_gen_img);
            let fs = small.fq.degree() as usize;
            let mut cols = Vec::with_capacity(fs);
            let mut gpow = 1u64;
            for _ in 0..fs {
                cols.push(gpow);
                gpow = fq_big.mul(gpow, img);
            }
            let mut out: Vec<(u32, FqElem)> = vec![];
            for (i, &kappa) in coeffs.iter().enumerate() {
                if kappa == 0 {
                    continue;
                }
                let sol = solve_f2(&cols, kappa, fq_big.degree() as usize)
                    .ok_or_else(|| Error::internal("element not in subfloor".to_string()))?;
                out.push((i as u32, sol));
            }
            small.from_equal_coeffs(out)
        }
        _ => {
            let coords = big
                .mixed_as_biguints(w)
                .ok_or_else(|| Error::internal("mixed element expected".to_string()))?;
            let fs = small.f() as usize;
            let fb = big.f() as usize;
            let mut cols: Vec<Vec<BigUint>> = Vec::with_capacity(fs);
            let mut gpow = big.one();
            for _ in 0..fs {
                cols.push(big.mixed_as_biguints(&gpow).unwrap());
                gpow = big.mul(&gpow, w_gen_img);
            }
            let sol = solve_mod2k(&cols, &coords, fb, big.nb)
                .ok_or_else(|| Error::internal("element not in subfloor".to_string()))?;
            small.from_mixed_coords(sol)
        }
    }
}

/// Solve Σ xⱼ·colⱼ = rhs over F₂ (bitmask column vectors).
pub(crate) fn solve_f2(cols: &[u64], rhs: u64, rows: usize) -> Option<u64> {
    let n = cols.len();
    let mut mat: Vec<u64> = cols.to_vec();
    let mut b = rhs;
    let mut used_rows = 0u64;
    let mut basis: Vec<(usize, u64, u64)> = vec![]; // (pivot row, column, x-mask)
    let mut xmask: Vec<u64> = (0..n).map(|j| 1u64 << j).collect();
    for j in 0..n {
        let mut pr = None;
        for r in 0..rows {
            if (used_rows >> r) & 1 == 1 {
                continue;
            }
            if (mat[j] >> r) & 1 == 1 {
                pr = Some(r);
                break;
            }
        }
        let r = pr?;
        used_rows |= 1 << r;
        for jj in 0..n {
            if jj != j && (mat[jj] >> r) & 1 == 1 {
                mat[jj] ^= mat[j];
                xmask[jj] ^= xmask[j];
            }
        }
        basis.push((r, mat[j], xmask[j]));
    }
    let mut x = 0u64;
    for &(r, col, xm) in &basis {
        if (b >> r) & 1 == 1 {
            b ^= col;
            x ^= xm;
        }
    }
    if b != 0 {
        return None;
    }
    Some(x)
}

/// Solve Σ xⱼ·colⱼ = rhs over Z/2^nb; the columns must span a direct summand.
fn solve_mod2k(
    cols: &[Vec<BigUint>],
    rhs: &[BigUint],
    rows: usize,
    nb: u32,
) -> Option<Vec<BigUint>> {
    let n = cols.len();
    let mask = (BigUint::from(1u32) << nb) - BigUint::from(1u32);
    let modulus = BigUint::from(1u32) << nb;
    let mut mat: Vec<Vec<BigUint>> = cols.to_vec();
    let mut b = rhs.to_vec();
    let mut x = vec![BigUint::zero(); n];
    let mut used = vec![false; rows];
    let mut piv: Vec<(usize, usize)> = vec![];
    for j in 0..n {
        let mut pr = None;
        for (r, u) in used.iter().enumerate().take(rows) {
            if !u && mat[j][r].bit(0) {
                pr = Some(r);
                break;
            }
        }
        let r = pr?;
        used[r] = true;
        let inv = mod2k_inv(&mat[j][r], nb);
        for rr in 0..rows {
            mat[j][rr] = (&mat[j][rr] * &inv) & &mask;
        }
        for jj in 0..n {
            if jj == j {
                continue;
            }
            let c = mat[jj][r].clone();
            if c.is_zero() {
                continue;
            }
            for rr in 0..rows {
                let t = (&c * &mat[j][rr]) % &modulus;
                let cur = mat[jj][rr].clone();
                mat[jj][rr] = if cur >= t { cur - t } else { cur + &modulus - t };
            }
        }
        piv.push((r, j));
    }
    for &(r, j) in &piv {
        let c = b[r].clone();
        x[j] = c.clone();
        if c.is_zero() {
            continue;
        }
        for rr in 0..rows {
            let t = (&c * &mat[j][rr]) % &modulus;
            let cur = b[rr].clone();
            b[rr] = if cur >= t { cur - t } else { cur + &modulus - t };
        }
    }
    if b.iter().any(|c| !c.is_zero()) {
        return None;
    }
    Some(x)
}

fn mod2k_inv(a: &BigUint, nb: u32) -> BigUint {
    let mask = (BigUint::from(1u32) << nb) - BigUint::from(1u32);
    let two = BigUint::from(2u32);
    let modulus = BigUint::from(1u32) << nb;
    let mut x = BigUint::from(1u32);
    let mut bits = 1u32;
    while bits < nb {
        let ax = (a * &x) & &mask;
        let t = if two >= ax {
            &two - &ax
        } else {
            (&two + &modulus) - &ax
        };
        x = (&x * &t) & &mask;
        bits *= 2;
    }
    x
}

/// Hensel root of a 0/1-lifted F₂ polynomial in a mixed floor, from a simple
/// residue root.
fn w_hensel_f2poly_root(base: &BaseRing, f2poly: u128, residue_root: FqElem) -> Result<WElem> {
    let eval = |x: &WElem| -> WElem {
        let mut acc = base.zero();
        for bit in (0..128).rev() {
            acc = base.mul(&acc, x);
            if (f2poly >> bit) & 1 == 1 {
                acc = base.add(&acc, &base.one());
            }
        }
        acc
    };
    let eval_deriv = |x: &WElem| -> WElem {
        let mut acc = base.zero();
        for i in (1..128).rev() {
            if (f2poly >> i) & 1 == 1 {
                let mut term = base.from_i64(i as i64);
                let mut p = base.one();
                for _ in 0..(i - 1) {
                    p = base.mul(&p, x);
                }
                term = base.mul(&term, &p);
                acc = base.add(&acc, &term);
            }
        }
        acc
    };
    let mut x = base.lift(residue_root);
    for _ in 0..(base.nb.ilog2() + 2) {
        let fx = eval(&x);
        if base.is_zero_stored(&fx) {
            break;
        }
        let dfx = eval_deriv(&x);
        if base.val(&dfx) != Some(0) {
            return Err(Error::internal(
                "non-simple residue root in floor Hensel".to_string(),
            ));
        }
        let inv = w_unit_inv(base, &dfx);
        let corr = base.mul(&fx, &inv);
        x = base.sub(&x, &corr);
    }
    Ok(x)
}

fn w_unit_inv(base: &BaseRing, a: &WElem) -> WElem {
    let r = base.residue(a);
    let rinv = base.fq.inv(r).expect("unit has nonzero residue");
    let mut y = base.lift(rinv);
    let two = base.from_i64(2);
    for _ in 0..(base.nb.ilog2() + 2) {
        let ay = base.mul(a, &y);
        let t = base.sub(&two, &ay);
        y = base.mul(&y, &t);
    }
    y
}

/// Express a residue of the big field lying in the embedded small residue
/// field in small-field coordinates.
fn project_residue(fq_big: &FqField, fq_small: &FqField, r: FqElem) -> Result<FqElem> {
    let img = fq_big.subfield_gen_image(fq_small.degree())?;
    let fs = fq_small.degree() as usize;
    let mut cols = Vec::with_capacity(fs);
    let mut gpow = 1u64;
    for _ in 0..fs {
        cols.push(gpow);
        gpow = fq_big.mul(gpow, img);
    }
    solve_f2(&cols, r, fq_big.degree() as usize)
        .ok_or_else(|| Error::internal("residue not in subfield".to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q2(prec: i64) -> LocalField {
        LocalField::make_base(FieldKind::Mixed, 1, prec).unwrap()
    }
    fn f2t(prec: i64) -> LocalField {
        LocalField::make_base(FieldKind::Equal, 1, prec).unwrap()
    }

    #[test]
    fn base_field_arithmetic() {
        let k = q2(64);
        let a = k.from_i64(17);
        let b = k.from_i64(-5);
        assert_eq!(k.val(&k.mul(&a, &b)), Some(0));
        assert_eq!(k.val(&k.from_i64(48)), Some(4));
        let inv = k.inv(&a).unwrap();
        let prod = k.mul(&a, &inv);
        assert!(k.eq_at_prec(&prod, &k.one()));
        // negative valuation
        let half = k.inv(&k.from_i64(2)).unwrap();
        assert_eq!(k.val(&half), Some(-1));
        let one = k.mul(&half, &k.from_i64(2));
        assert!(k.eq_at_prec(&one, &k.one()));
    }

    #[test]
    fn laurent_field_arithmetic() {
        let k = f2t(64);
        let t = k.uniformizer();
        let a = k.add(&k.one(), &t); // 1 + t
        let sq = k.mul(&a, &a);
        let expect = k.add(&k.one(), &k.pow(&t, 2).unwrap());
        assert!(k.eq_at_prec(&sq, &expect));
        let inv = k.inv(&a).unwrap(); // 1 + t + t² + …
        let prod = k.mul(&a, &inv);
        assert!(k.eq_at_prec(&prod, &k.one()));
        let tinv = k.inv(&t).unwrap();
        assert_eq!(k.val(&tinv), Some(-1));
    }

    #[test]
    fn eisenstein_extension_sqrt2() {
        let k = q2(48);
        // X² − 2
        let poly = vec![k.from_i64(-2), k.zero(), k.one()];
        let ext = k.extend_eisenstein(&poly).unwrap();
        assert_eq!(ext.e(), 2);
        let th = ext.uniformizer();
        let th2 = ext.mul(&th, &th);
        let two = ext.embed_from(&k, &k.from_i64(2)).unwrap();
        assert!(ext.eq_at_prec(&th2, &two));
        assert_eq!(ext.val(&two), Some(2));
        // 1/θ has valuation −1 and θ·(1/θ) = 1
        let thinv = ext.inv(&th).unwrap();
        assert_eq!(ext.val(&thinv), Some(-1));
        assert!(ext.eq_at_prec(&ext.mul(&th, &thinv), &ext.one()));
        // different of a wildly ramified quadratic: v(2θ) = 3
        assert_eq!(ext.different_valuation_over(&k).unwrap(), 3);
    }

    #[test]
    fn eisenstein_cubic_over_laurent() {
        let k = f2t(32);
        let t = k.uniformizer();
        // X³ − t
        let poly = vec![k.neg(&t), k.zero(), k.zero(), k.one()];
        let ext = k.extend_eisenstein(&poly).unwrap();
        assert_eq!(ext.e(), 3);
        let th = ext.uniformizer();
        let cube = ext.pow(&th, 3).unwrap();
        let t_up = ext.embed_from(&k, &t).unwrap();
        assert!(ext.eq_at_prec(&cube, &t_up));
        // v(3θ²) = 2 since 3 is a unit here
        assert_eq!(ext.different_valuation_over(&k).unwrap(), 2);
    }

    #[test]
    fn unramified_extension_and_membership() {
        let k = q2(48);
        let k2 = k.extend_unramified(2).unwrap();
        assert_eq!(k2.f(), 2);
        assert_eq!(k2.e(), 1);
        // ζ₃ = Hensel root of x² + x + 1 exists in k2: its residue field is F₄
        let fq = k2.residue_field();
        let om = fq.gen();
        assert_eq!(fq.add(fq.add(fq.square(om), om), 1), 0);
        // the Teichmüller generator ζ of order 3 satisfies ζ²+ζ+1 = 0
        let z = k2.teichmuller().unwrap();
        let lhs = k2.add(&k2.add(&k2.mul(&z, &z), &z), &k2.one());
        assert!(k2.is_zero_at_prec(&lhs));
        // ζ ∉ Q₂
        let (member, cert) = k2.subfield_membership(&z, &k).unwrap();
        assert!(!member, "{:?}", cert);
        // but 7 ∈ Q₂
        let seven = k2.embed_from(&k, &k.from_i64(7)).unwrap();
        let (member, _) = k2.subfield_membership(&seven, &k).unwrap();
        assert!(member);
    }

    #[test]
    fn trace_through_tower() {
        let k = q2(48);
        let k2 = k.extend_unramified(2).unwrap();
        // Tr(ζ₃) = ζ + ζ² = −1
        let z = k2.teichmuller().unwrap();
        let tr = k2.trace_to(&z, &k).unwrap();
        assert!(k.eq_at_prec(&tr, &k.from_i64(-1)));
        // Eisenstein step: Tr(θ) over X² − 2 is 0
        let ext = k.extend_eisenstein(&[k.from_i64(-2), k.zero(), k.one()]).unwrap();
        let tr_th = ext.trace_to(&ext.uniformizer(), &k).unwrap();
        assert!(k.is_zero_at_prec(&tr_th));
        // Tr(1) = 2
        let tr_one = ext.trace_to(&ext.one(), &k).unwrap();
        assert!(k.eq_at_prec(&tr_one, &k.from_i64(2)));
        // and through a composite: unramified over Eisenstein
        let big = ext.extend_unramified(2).unwrap();
        let tr_big = big.trace_to(&big.one(), &k).unwrap();
        assert!(k.eq_at_prec(&tr_big, &k.from_i64(4)));
    }

    #[test]
    fn digits_round_trip() {
        let k = f2t(40);
        let x = k.from_digits(&[1, 0, 1, 1], -2); // t⁻² + 1 + t
        assert_eq!(k.val(&x), Some(-2));
        let digits = k.theta_digits(&x, -2, 4).unwrap();
        assert_eq!(digits, vec![1, 0, 1, 1, 0, 0]);
        let y = k.from_digits(&digits, -2);
        assert!(k.eq_at_prec(&x, &y));
    }
}
