//! Stage-wise mapping spaces, their monoid structure, and the tangent space
//! of the automorphism group.
//!
//! A stage-B point of the self-mapping space of X_A is a morphism
//! g: A -> B ⊔ A. Composition dualizes to
//! (g • h)* = (mu_B ⊗ id_A) ∘ (id_B ⊗ h*) ∘ g*,
//! implemented per canonical monomial: the B ⊔ A representative splits as
//! b ⊗ a with no phase (B generators sort first), h* is substituted into the
//! a slot and the two B slots multiply with braided normalization.
//!
//! The dual-numbers stage D = F_0/(eps^2) detects tangent data: a pointed
//! stage element over D ⊔ B splits as g = iota_2 + eps * g1 where g1 is an
//! equivariant Leibniz map A -> B ⊔ A ([`HDerivation`]). Lifting back uses
//! the eps^2 = 0 inverse with g1 negated. The space of such derivations is
//! computed as an exact kernel, and carries the stage-wise Lie bracket
//! [v,w] = (mu_B ⊗ id) ∘ ((id_B ⊗ v) ∘ w - (id_B ⊗ w) ∘ v).

use crate::algebra::{same_algebra, Element, Monomial};
use crate::catalog;
use crate::error::{Error, Result};
use crate::linsolve::kernel_basis;
use crate::morphism::Morphism;
use crate::presentation::{coproduct, Presentation};
use crate::scalar::Scalar;
use std::collections::BTreeMap;
use std::sync::Arc;

/// The self-mapping space of X_A evaluated at stage B: context object
/// caching B ⊔ A and the two inclusions.
#[derive(Debug)]
pub struct MappingStage {
    space: Arc<Presentation>,
    stage: Arc<Presentation>,
    coprod: Arc<Presentation>,
    incl_stage: Morphism,
    incl_space: Morphism,
}

/// One stage-B self-map: a morphism A -> B ⊔ A with reduced images.
#[derive(Clone, Debug, PartialEq)]
pub struct StageElement {
    space: Arc<Presentation>,
    stage: Arc<Presentation>,
    inner: Morphism,
}

/// Structural match up to generator names: same deformation, degrees,
/// invertible flags and relation data.
pub fn compatible_presentation(a: &Arc<Presentation>, b: &Arc<Presentation>) -> bool {
    if same_algebra(a, b) {
        return true;
    }
    a.deformation() == b.deformation()
        && a.num_gens() == b.num_gens()
        && a.generators()
            .iter()
            .zip(b.generators())
            .all(|(x, y)| x.degree == y.degree && x.invertible == y.invertible)
        && a.num_relations() == b.num_relations()
        && a.relations()
            .iter()
            .zip(b.relations())
            .all(|(x, y)| b.adopt(x).map(|xx| xx == y).unwrap_or(false))
}

impl MappingStage {
    pub fn new(space: &Arc<Presentation>, stage: &Arc<Presentation>) -> Result<MappingStage> {
        let cp = coproduct(stage, space)?;
        Ok(MappingStage {
            space: space.clone(),
            stage: stage.clone(),
            coprod: cp.algebra,
            incl_stage: cp.left,
            incl_space: cp.right,
        })
    }

    pub fn space(&self) -> &Arc<Presentation> {
        &self.space
    }

    pub fn stage(&self) -> &Arc<Presentation> {
        &self.stage
    }

    /// The coproduct presentation B ⊔ A.
    pub fn algebra(&self) -> &Arc<Presentation> {
        &self.coprod
    }

    /// iota_1 : B -> B ⊔ A.
    pub fn stage_inclusion(&self) -> &Morphism {
        &self.incl_stage
    }

    /// iota_2 : A -> B ⊔ A.
    pub fn space_inclusion(&self) -> &Morphism {
        &self.incl_space
    }

    /// The identity point e: a |-> 1_B ⊗ a.
    pub fn identity(&self) -> StageElement {
        StageElement {
            space: self.space.clone(),
            stage: self.stage.clone(),
            inner: Morphism::new_unchecked(
                self.space.clone(),
                self.coprod.clone(),
                self.incl_space.images().to_vec(),
            ),
        }
    }

    /// Validated stage element from generator images in B ⊔ A.
    pub fn element(&self, images: Vec<Element>) -> Result<StageElement> {
        let reduced = images
            .iter()
            .map(|e| self.coprod.reduce(e))
            .collect::<Result<Vec<_>>>()?;
        let inner = Morphism::new(self.space.clone(), self.coprod.clone(), reduced)?;
        Ok(StageElement { space: self.space.clone(), stage: self.stage.clone(), inner })
    }

    /// Stage element from an existing morphism A -> B ⊔ A. The target may be
    /// a presentation of B ⊔ A with different generator names, as long as
    /// degrees, flags and relations coincide.
    pub fn from_morphism(&self, inner: Morphism) -> Result<StageElement> {
        if !same_algebra(inner.source(), &self.space)
            || !compatible_presentation(inner.target(), &self.coprod)
        {
            return Err(Error::StageMismatch);
        }
        let images = inner
            .images()
            .iter()
            .map(|e| self.coprod.adopt(e))
            .collect::<Result<Vec<_>>>()?;
        self.element(images)
    }

    fn check(&self, g: &StageElement) -> Result<()> {
        if !same_algebra(&g.space, &self.space) || !same_algebra(&g.stage, &self.stage) {
            return Err(Error::StageMismatch);
        }
        Ok(())
    }

    /// Split a canonical B ⊔ A monomial into iota_1(b) and the A-part word.
    fn split_monomial(&self, m: &Monomial) -> (Monomial, Monomial) {
        let nb = self.stage.num_gens();
        let b = Monomial(
            m.0[..nb]
                .iter()
                .copied()
                .chain(std::iter::repeat_n(0, self.space.num_gens()))
                .collect(),
        );
        let a = Monomial(m.0[nb..].to_vec());
        (b, a)
    }

    /// Monoid composition (g • h)* = (mu_B ⊗ id) ∘ (id_B ⊗ h*) ∘ g*.
    pub fn compose(&self, g: &StageElement, h: &StageElement) -> Result<StageElement> {
        self.check(g)?;
        self.check(h)?;
        let mut images = Vec::with_capacity(self.space.num_gens());
        for img in g.inner.images() {
            let mut acc = self.coprod.zero();
            for (mono, c) in img.terms() {
                let (b, a) = self.split_monomial(mono);
                let b_elem = self.coprod.monomial_element(b, c.clone())?;
                let a_elem = self.space.monomial_element(a, Scalar::one())?;
                let pushed = h.inner.apply(&a_elem)?;
                acc = acc.add(&b_elem.mul(&pushed)?)?;
            }
            images.push(acc);
        }
        self.element(images)
    }

    /// Both compositions must reduce to the identity, generator-wise.
    pub fn verify_inverse(&self, g: &StageElement, gi: &StageElement) -> Result<bool> {
        let e = self.identity();
        Ok(self.compose(g, gi)? == e && self.compose(gi, g)? == e)
    }
}

impl StageElement {
    pub fn inner(&self) -> &Morphism {
        &self.inner
    }

    pub fn images(&self) -> &[Element] {
        self.inner.images()
    }

    pub fn space(&self) -> &Arc<Presentation> {
        &self.space
    }

    pub fn stage(&self) -> &Arc<Presentation> {
        &self.stage
    }

    /// Apply the underlying morphism A -> B ⊔ A.
    pub fn apply(&self, a: &Element) -> Result<Element> {
        self.inner.apply(a)
    }
}

// ---- equivariant derivations (tangent vectors at the identity) ----

/// An H-equivariant Leibniz map A -> B ⊔ A, stored by generator images.
///
/// Invariants: image i is homogeneous of the degree of generator i, and the
/// Leibniz extension annihilates every relation of A.
#[derive(Clone, Debug)]
pub struct HDerivation {
    space: Arc<Presentation>,
    stage: Arc<Presentation>,
    coprod: Arc<Presentation>,
    images: Vec<Element>,
    cap: Option<usize>,
}

impl PartialEq for HDerivation {
    /// Cap metadata is provenance only; equality compares the maps.
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.space, &other.space)
            && same_algebra(&self.stage, &other.stage)
            && self.images == other.images
    }
}

impl HDerivation {
    pub fn new(
        space: &Arc<Presentation>,
        stage: &Arc<Presentation>,
        images: Vec<Element>,
        cap: Option<usize>,
    ) -> Result<HDerivation> {
        let ctx = MappingStage::new(space, stage)?;
        HDerivation::with_context(&ctx, images, cap)
    }

    fn with_context(ctx: &MappingStage, images: Vec<Element>, cap: Option<usize>) -> Result<HDerivation> {
        if images.len() != ctx.space.num_gens() {
            return Err(Error::DimensionMismatch {
                expected: ctx.space.num_gens(),
                got: images.len(),
            });
        }
        let reduced = images
            .iter()
            .map(|e| ctx.coprod.reduce(e))
            .collect::<Result<Vec<_>>>()?;
        let d = HDerivation {
            space: ctx.space.clone(),
            stage: ctx.stage.clone(),
            coprod: ctx.coprod.clone(),
            images: reduced,
            cap,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn zero(space: &Arc<Presentation>, stage: &Arc<Presentation>) -> Result<HDerivation> {
        let ctx = MappingStage::new(space, stage)?;
        let images = vec![ctx.coprod.zero(); ctx.space.num_gens()];
        HDerivation::with_context(&ctx, images, None)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, img) in self.images.iter().enumerate() {
            if !img.h_degree().is_degree(self.space.generator_degree(i)) {
                return Err(Error::DegreeViolation(i));
            }
        }
        for (k, f) in self.space.relations().iter().enumerate() {
            if !self.eval(f)?.is_zero() {
                return Err(Error::LeibnizViolation(k));
            }
        }
        Ok(())
    }

    pub fn space(&self) -> &Arc<Presentation> {
        &self.space
    }

    pub fn stage(&self) -> &Arc<Presentation> {
        &self.stage
    }

    /// The coproduct presentation B ⊔ A the images live in.
    pub fn algebra(&self) -> &Arc<Presentation> {
        &self.coprod
    }

    pub fn images(&self) -> &[Element] {
        &self.images
    }

    pub fn cap(&self) -> Option<usize> {
        self.cap
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(|e| e.is_zero())
    }

    fn embed_space_monomial(&self, m: &Monomial, c: Scalar) -> Result<Element> {
        let nb = self.stage.num_gens();
        let padded = Monomial(
            std::iter::repeat_n(0, nb)
                .chain(m.0.iter().copied())
                .collect(),
        );
        self.coprod.monomial_element(padded, c)
    }

    /// Leibniz extension: v(a1 a2) = v(a1)(1⊗a2) + (1⊗a1)v(a2), evaluated on
    /// any representative of `a` and reduced in B ⊔ A.
    pub fn eval(&self, a: &Element) -> Result<Element> {
        let mut acc = self.coprod.zero();
        for (mono, c) in a.terms() {
            for (g, e) in mono.0.iter().enumerate() {
                if *e < 0 {
                    return Err(Error::NegativeExponent(
                        self.space.generators()[g].name.clone(),
                    ));
                }
                if *e == 0 {
                    continue;
                }
                for t in 0..*e {
                    let mut prefix = mono.0[..g].to_vec();
                    prefix.extend(std::iter::repeat_n(0, mono.0.len() - g));
                    prefix[g] = t;
                    let mut suffix = vec![0i64; mono.0.len()];
                    suffix[g] = e - 1 - t;
                    for (rest, v) in suffix.iter_mut().enumerate().skip(g + 1) {
                        *v = mono.0[rest];
                    }
                    let left = self.embed_space_monomial(&Monomial(prefix), c.clone())?;
                    let right = self.embed_space_monomial(&Monomial(suffix), Scalar::one())?;
                    let term = left.mul(&self.images[g])?.mul(&right)?;
                    acc = acc.add(&term)?;
                }
            }
        }
        self.coprod.reduce(&acc)
    }

    pub fn add(&self, other: &HDerivation) -> Result<HDerivation> {
        self.check_same(other)?;
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(a, b)| a.add(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(HDerivation {
            space: self.space.clone(),
            stage: self.stage.clone(),
            coprod: self.coprod.clone(),
            images,
            cap: self.cap.max(other.cap),
        })
    }

    pub fn neg(&self) -> HDerivation {
        HDerivation {
            space: self.space.clone(),
            stage: self.stage.clone(),
            coprod: self.coprod.clone(),
            images: self.images.iter().map(|e| e.neg()).collect(),
            cap: self.cap,
        }
    }

    pub fn scale(&self, s: &Scalar) -> HDerivation {
        HDerivation {
            space: self.space.clone(),
            stage: self.stage.clone(),
            coprod: self.coprod.clone(),
            images: self.images.iter().map(|e| e.scale(s)).collect(),
            cap: self.cap,
        }
    }

    fn check_same(&self, other: &HDerivation) -> Result<()> {
        if !same_algebra(&self.space, &other.space) || !same_algebra(&self.stage, &other.stage) {
            return Err(Error::StageMismatch);
        }
        Ok(())
    }

    /// JSON form `{"space", "stage", "images": [...], "cap"}`; the names are
    /// supplied by the caller (typically workspace keys).
    pub fn to_json(&self, space_name: &str, stage_name: &str) -> serde_json::Value {
        let mut obj = serde_json::Map::new();
        obj.insert("space".into(), serde_json::Value::String(space_name.into()));
        obj.insert("stage".into(), serde_json::Value::String(stage_name.into()));
        obj.insert(
            "images".into(),
            serde_json::Value::Array(
                self.images
                    .iter()
                    .map(|e| serde_json::Value::String(e.render()))
                    .collect(),
            ),
        );
        if let Some(cap) = self.cap {
            obj.insert("cap".into(), serde_json::Value::Number(cap.into()));
        }
        serde_json::Value::Object(obj)
    }

    /// Inverse of [`HDerivation::to_json`] given resolved presentations; the
    /// result re-validates in full.
    pub fn from_json(
        v: &serde_json::Value,
        space: &Arc<Presentation>,
        stage: &Arc<Presentation>,
    ) -> Result<HDerivation> {
        let obj = v.as_object().ok_or_else(|| Error::Validation {
            object: "derivation".into(),
            msg: "expected object".into(),
        })?;
        let ctx = MappingStage::new(space, stage)?;
        let images = obj
            .get("images")
            .and_then(|i| i.as_array())
            .ok_or_else(|| Error::Validation {
                object: "derivation".into(),
                msg: "missing images".into(),
            })?
            .iter()
            .map(|t| {
                let text = t.as_str().ok_or_else(|| Error::Validation {
                    object: "derivation".into(),
                    msg: "image must be element text".into(),
                })?;
                ctx.algebra().parse_element(text)
            })
            .collect::<Result<Vec<_>>>()?;
        let cap = obj.get("cap").and_then(|c| c.as_u64()).map(|c| c as usize);
        HDerivation::with_context(&ctx, images, cap)
    }
}

/// Module action of a coinvariant b in B: (b · v)(a) = (b ⊗ 1) v(a).
pub fn hder_scalar_action(b: &Element, v: &HDerivation) -> Result<HDerivation> {
    if !same_algebra(b.algebra(), v.stage()) {
        return Err(Error::AlgebraMismatch);
    }
    let reduced = v.stage().reduce(b)?;
    if !reduced.h_degree().is_coinvariant() {
        return Err(Error::NotCoinvariant);
    }
    let ctx = MappingStage::new(&v.space, &v.stage)?;
    let b_in = ctx.stage_inclusion().apply(&reduced)?;
    let images = v
        .images
        .iter()
        .map(|img| b_in.mul(img))
        .collect::<Result<Vec<_>>>()?;
    HDerivation::with_context(&ctx, images, v.cap)
}

/// Stage-wise Lie bracket [v,w] = (mu_B ⊗ id) ∘ ((id_B ⊗ v) ∘ w − (id_B ⊗ w) ∘ v).
pub fn hder_bracket(v: &HDerivation, w: &HDerivation) -> Result<HDerivation> {
    v.check_same(w)?;
    let ctx = MappingStage::new(&v.space, &v.stage)?;
    let half = |outer: &HDerivation, inner: &HDerivation| -> Result<Vec<Element>> {
        // (id_B ⊗ outer) applied to each image of inner, then mu_B.
        let mut out = Vec::with_capacity(ctx.space.num_gens());
        for img in &inner.images {
            let mut acc = ctx.coprod.zero();
            for (mono, c) in img.terms() {
                let (b, a) = ctx.split_monomial(mono);
                let b_elem = ctx.coprod.monomial_element(b, c.clone())?;
                let a_elem = ctx.space.monomial_element(a, Scalar::one())?;
                let pushed = outer.eval(&a_elem)?;
                acc = acc.add(&b_elem.mul(&pushed)?)?;
            }
            out.push(acc);
        }
        Ok(out)
    };
    let vw = half(v, w)?;
    let wv = half(w, v)?;
    let images = vw
        .iter()
        .zip(&wv)
        .map(|(a, b)| a.sub(b))
        .collect::<Result<Vec<_>>>()?;
    HDerivation::with_context(&ctx, images, v.cap.max(w.cap))
}

/// Basis of the equivariant derivations A -> B ⊔ A supported on standard
/// monomials of total degree <= cap: the exact kernel of the linear map
/// sending candidate images to the Leibniz extensions of the relations.
pub fn te_aut_basis(
    space: &Arc<Presentation>,
    stage: &Arc<Presentation>,
    cap: usize,
) -> Result<Vec<HDerivation>> {
    let ctx = MappingStage::new(space, stage)?;
    // unknowns: (generator, standard monomial at the generator's degree)
    let mut unknowns: Vec<(usize, Monomial)> = Vec::new();
    for i in 0..space.num_gens() {
        for u in ctx.coprod.standard_monomials(space.generator_degree(i), cap) {
            unknowns.push((i, u));
        }
    }
    if unknowns.is_empty() {
        return Ok(Vec::new());
    }
    // columns of the constraint matrix: Leibniz extension of each relation
    let mut columns: Vec<Vec<Element>> = Vec::with_capacity(unknowns.len());
    for (i, u) in &unknowns {
        let mut images = vec![ctx.coprod.zero(); space.num_gens()];
        images[*i] = ctx.coprod.monomial_element(u.clone(), Scalar::one())?;
        let candidate = HDerivation {
            space: space.clone(),
            stage: stage.clone(),
            coprod: ctx.coprod.clone(),
            images,
            cap: Some(cap),
        };
        let evals = space
            .relations()
            .iter()
            .map(|f| candidate.eval(f))
            .collect::<Result<Vec<_>>>()?;
        columns.push(evals);
    }
    let nrel = space.num_relations();
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for k in 0..nrel {
        let mut coords: BTreeMap<Monomial, usize> = BTreeMap::new();
        for col in &columns {
            for (m, _) in col[k].terms() {
                let next = coords.len();
                coords.entry(m.clone()).or_insert(next);
            }
        }
        let base_row = rows.len();
        rows.extend(std::iter::repeat_n(vec![Scalar::zero(); unknowns.len()], coords.len()));
        for (ci, col) in columns.iter().enumerate() {
            for (m, c) in col[k].terms() {
                rows[base_row + coords[m]][ci] = c.clone();
            }
        }
    }
    let kernel = kernel_basis(unknowns.len(), &rows)?;
    let mut basis = Vec::with_capacity(kernel.len());
    for vec in kernel {
        let mut images = vec![ctx.coprod.zero(); space.num_gens()];
        for ((i, u), c) in unknowns.iter().zip(&vec) {
            if !c.is_zero() {
                let term = ctx.coprod.monomial_element(u.clone(), c.clone())?;
                images[*i] = images[*i].add(&term)?;
            }
        }
        basis.push(HDerivation::with_context(&ctx, images, Some(cap))?);
    }
    Ok(basis)
}

// ---- the dual-numbers stage and the tangent correspondence ----

/// Context for tangent computations: the stage D ⊔ B over space A, where
/// D = F_0/(eps^2).
#[derive(Debug)]
pub struct TangentStage {
    space: Arc<Presentation>,
    stage: Arc<Presentation>,
    dual: Arc<Presentation>,
    dstage: Arc<Presentation>,
    /// Mapping space at stage D ⊔ B.
    pub mapping: MappingStage,
    /// Mapping space at the plain stage B.
    pub plain: MappingStage,
}

impl TangentStage {
    pub fn new(space: &Arc<Presentation>, stage: &Arc<Presentation>) -> Result<TangentStage> {
        let dual = catalog::dual_numbers(space.deformation().clone());
        let dstage = coproduct(&dual, stage)?.algebra;
        let mapping = MappingStage::new(space, &dstage)?;
        let plain = MappingStage::new(space, stage)?;
        Ok(TangentStage {
            space: space.clone(),
            stage: stage.clone(),
            dual,
            dstage,
            mapping,
            plain,
        })
    }

    pub fn dual_numbers(&self) -> &Arc<Presentation> {
        &self.dual
    }

    /// The stage algebra D ⊔ B.
    pub fn stage_algebra(&self) -> &Arc<Presentation> {
        &self.dstage
    }

    /// Embed an element of B ⊔ A into (D ⊔ B) ⊔ A at eps-degree `eps`.
    fn embed(&self, e: &Element, eps: i64) -> Result<Element> {
        let big = self.mapping.algebra();
        let mut out = big.zero();
        for (m, c) in e.terms() {
            let mut exps = Vec::with_capacity(m.0.len() + 1);
            exps.push(eps);
            exps.extend_from_slice(&m.0);
            out = out.add(&big.monomial_element(Monomial(exps), c.clone())?)?;
        }
        Ok(out)
    }

    /// Strip the eps slot from a monomial of (D ⊔ B) ⊔ A.
    fn strip(&self, m: &Monomial) -> (i64, Monomial) {
        (m.0[0], Monomial(m.0[1..].to_vec()))
    }

    /// Split a pointed stage element g over D ⊔ B as g = iota_2 + eps * g1;
    /// errors with NotPointed when the eps-free part is not the identity.
    pub fn split(&self, g: &StageElement) -> Result<(Morphism, HDerivation)> {
        if !same_algebra(g.stage(), &self.dstage) || !same_algebra(g.space(), &self.space) {
            return Err(Error::StageMismatch);
        }
        let small = self.plain.algebra();
        let mut zero_parts = Vec::new();
        let mut one_parts = Vec::new();
        for img in g.images() {
            let reduced = self.mapping.algebra().reduce(img)?;
            let mut part0 = small.zero();
            let mut part1 = small.zero();
            for (m, c) in reduced.terms() {
                let (eps, rest) = self.strip(m);
                let piece = small.monomial_element(rest, c.clone())?;
                match eps {
                    0 => part0 = part0.add(&piece)?,
                    1 => part1 = part1.add(&piece)?,
                    _ => {
                        return Err(Error::Internal(
                            "eps^2 survived reduction in the dual stage".into(),
                        ))
                    }
                }
            }
            zero_parts.push(part0);
            one_parts.push(part1);
        }
        for (i, p0) in zero_parts.iter().enumerate() {
            let expect = self.plain.space_inclusion().images()[i].clone();
            if small.reduce(p0)? != small.reduce(&expect)? {
                return Err(Error::NotPointed);
            }
        }
        let g0 = Morphism::new_unchecked(self.space.clone(), small.clone(), zero_parts);
        let g1 = HDerivation::with_context(&self.plain, one_parts, None)?;
        Ok((g0, g1))
    }

    /// Lift a derivation to the invertible stage element
    /// g(a) = 1 ⊗ iota_2(a) + eps ⊗ d(a); returns g and its eps^2 = 0
    /// inverse built from -d.
    pub fn lift(&self, d: &HDerivation) -> Result<(StageElement, StageElement)> {
        if !same_algebra(d.space(), &self.space) || !same_algebra(d.stage(), &self.stage) {
            return Err(Error::StageMismatch);
        }
        d.validate().map_err(|e| match e {
            Error::LeibnizViolation(k) => Error::LeibnizViolation(k),
            other => other,
        })?;
        let build = |der: &HDerivation| -> Result<StageElement> {
            let mut images = Vec::with_capacity(self.space.num_gens());
            for (i, di) in der.images().iter().enumerate() {
                let base = self.plain.space_inclusion().images()[i].clone();
                let img = self.embed(&base, 0)?.add(&self.embed(di, 1)?)?;
                images.push(img);
            }
            self.mapping.element(images)
        };
        Ok((build(d)?, build(&d.neg())?))
    }
}
