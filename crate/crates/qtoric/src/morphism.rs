//! H-equivariant algebra morphisms and cap-bounded Hom parameterizations.
//!
//! A morphism is stored by its generator images; validation checks the two
//! defining conditions: every image is homogeneous of the generator's degree,
//! and every source relation evaluates to zero in the target. Hom-sets are
//! infinite, so beyond verification the module offers a cap-bounded symbolic
//! parameterization: unknowns index target standard monomials of matching
//! degree and the source relations become polynomial constraints in those
//! unknowns. The constraints are returned symbolically; no nonlinear solving
//! is attempted.

use crate::algebra::{same_algebra, Element, Monomial};
use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::scalar::Scalar;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// An H-equivariant algebra map, stored by generator images.
#[derive(Clone, Debug)]
pub struct Morphism {
    source: Arc<Presentation>,
    target: Arc<Presentation>,
    images: Vec<Element>,
}

impl PartialEq for Morphism {
    /// Equality of reduced generator images (generators generate).
    fn eq(&self, other: &Self) -> bool {
        if !same_algebra(&self.source, &other.source) || !same_algebra(&self.target, &other.target)
        {
            return false;
        }
        self.images.iter().zip(&other.images).all(|(a, b)| {
            match (self.target.reduce(a), other.target.reduce(b)) {
                (Ok(x), Ok(y)) => x == y,
                _ => false,
            }
        })
    }
}

impl Morphism {
    /// Validated constructor.
    pub fn new(
        source: Arc<Presentation>,
        target: Arc<Presentation>,
        images: Vec<Element>,
    ) -> Result<Morphism> {
        let m = Morphism::new_unchecked(source, target, images);
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(
        source: Arc<Presentation>,
        target: Arc<Presentation>,
        images: Vec<Element>,
    ) -> Morphism {
        Morphism { source, target, images }
    }

    pub fn identity(p: &Arc<Presentation>) -> Morphism {
        let images = (0..p.num_gens())
            .map(|i| p.generator(i).expect("index in range"))
            .collect();
        Morphism::new_unchecked(p.clone(), p.clone(), images)
    }

    pub fn source(&self) -> &Arc<Presentation> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Presentation> {
        &self.target
    }

    pub fn images(&self) -> &[Element] {
        &self.images
    }

    /// Check equivariance of every image and annihilation of every relation.
    pub fn validate(&self) -> Result<()> {
        if self.images.len() != self.source.num_gens() {
            return Err(Error::DimensionMismatch {
                expected: self.source.num_gens(),
                got: self.images.len(),
            });
        }
        for (i, img) in self.images.iter().enumerate() {
            if !same_algebra(img.algebra(), &self.target) {
                return Err(Error::AlgebraMismatch);
            }
            let reduced = self.target.reduce(img)?;
            if !reduced.h_degree().is_degree(self.source.generator_degree(i)) {
                return Err(Error::DegreeViolation(i));
            }
        }
        for (k, f) in self.source.relations().iter().enumerate() {
            if !self.apply_raw(f)?.is_zero() {
                return Err(Error::RelationViolation(k));
            }
        }
        Ok(())
    }

    fn apply_raw(&self, a: &Element) -> Result<Element> {
        let mut acc = self.target.zero();
        for (mono, c) in a.terms() {
            let mut term = self.target.one();
            for (i, e) in mono.0.iter().enumerate() {
                if *e < 0 {
                    return Err(Error::NegativeExponent(
                        self.source.generators()[i].name.clone(),
                    ));
                }
                if *e > 0 {
                    term = term.mul(&self.images[i].pow(*e as u32)?)?;
                }
            }
            acc = acc.add(&term.scale(c))?;
        }
        self.target.reduce(&acc)
    }

    /// Substitute generator images into `a`, normalize and reduce.
    pub fn apply(&self, a: &Element) -> Result<Element> {
        if !same_algebra(a.algebra(), &self.source) {
            // accept free-word representatives over the same generators
            let adopted = matches_generators(a.algebra(), &self.source);
            if !adopted {
                return Err(Error::AlgebraMismatch);
            }
        }
        self.apply_raw(a)
    }

    /// outer ∘ inner.
    pub fn compose(outer: &Morphism, inner: &Morphism) -> Result<Morphism> {
        if !same_algebra(&inner.target, &outer.source) {
            return Err(Error::CompositionMismatch);
        }
        let images = inner
            .images
            .iter()
            .map(|e| outer.apply(e))
            .collect::<Result<Vec<_>>>()?;
        Ok(Morphism::new_unchecked(inner.source.clone(), outer.target.clone(), images))
    }
}

fn matches_generators(a: &Arc<Presentation>, b: &Arc<Presentation>) -> bool {
    a.deformation() == b.deformation()
        && a.num_gens() == b.num_gens()
        && a.generators()
            .iter()
            .zip(b.generators())
            .all(|(x, y)| x.degree == y.degree)
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, img) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{} -> {}", self.source.generators()[i].name, img.render())?;
        }
        Ok(())
    }
}

// ---- cap-bounded Hom parameterization ----

/// One symbolic unknown: the coefficient of `monomial` in the image of
/// generator `generator`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomUnknown {
    pub generator: usize,
    pub monomial: Monomial,
}

/// Polynomial in the unknowns with Scalar coefficients; keys are exponent
/// vectors over the unknown list.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct UnknownPoly(pub BTreeMap<Vec<u32>, Scalar>);

impl UnknownPoly {
    fn zero() -> Self {
        UnknownPoly(BTreeMap::new())
    }

    fn constant(n: usize, c: Scalar) -> Self {
        let mut p = UnknownPoly::zero();
        if !c.is_zero() {
            p.0.insert(vec![0; n], c);
        }
        p
    }

    fn unknown(n: usize, idx: usize) -> Self {
        let mut e = vec![0u32; n];
        e[idx] = 1;
        let mut p = UnknownPoly::zero();
        p.0.insert(e, Scalar::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Total degree in the unknowns.
    pub fn degree(&self) -> u32 {
        self.0.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    fn add_term(&mut self, e: Vec<u32>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.0.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().add(&c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn add(&self, other: &UnknownPoly) -> UnknownPoly {
        let mut out = self.clone();
        for (e, c) in &other.0 {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    fn mul(&self, other: &UnknownPoly) -> UnknownPoly {
        let mut out = UnknownPoly::zero();
        for (e1, c1) in &self.0 {
            for (e2, c2) in &other.0 {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.mul(c2));
            }
        }
        out
    }

    fn scale(&self, s: &Scalar) -> UnknownPoly {
        if s.is_zero() {
            return UnknownPoly::zero();
        }
        UnknownPoly(self.0.iter().map(|(e, c)| (e.clone(), c.mul(s))).collect())
    }

    /// Evaluate at a concrete coefficient vector.
    pub fn evaluate(&self, values: &[Scalar]) -> Scalar {
        let mut acc = Scalar::zero();
        for (e, c) in &self.0 {
            let mut term = c.clone();
            for (i, k) in e.iter().enumerate() {
                for _ in 0..*k {
                    term = term.mul(&values[i]);
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    pub fn render(&self, unknowns: &[HomUnknown]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (e, c) in &self.0 {
            let mut factors = vec![format!("{c}")];
            for (i, k) in e.iter().enumerate() {
                if *k == 1 {
                    factors.push(format!("c{}", i + 1));
                } else if *k > 1 {
                    factors.push(format!("c{}^{}", i + 1, k));
                }
            }
            let _ = unknowns;
            parts.push(factors.join("*"));
        }
        parts.join(" + ")
    }
}

/// One scalar equation: the coefficient of `monomial` in the image of
/// relation `relation` must vanish.
#[derive(Clone, Debug)]
pub struct HomConstraint {
    pub relation: usize,
    pub monomial: Monomial,
    pub poly: UnknownPoly,
}

/// Cap-bounded symbolic description of Hom(source, target).
#[derive(Clone, Debug)]
pub struct HomConstraintSystem {
    pub source: Arc<Presentation>,
    pub target: Arc<Presentation>,
    pub cap: usize,
    pub unknowns: Vec<HomUnknown>,
    pub constraints: Vec<HomConstraint>,
}

/// Elements with UnknownPoly coefficients (internal to the parameterization).
type UTerms = BTreeMap<Monomial, UnknownPoly>;

fn uadd_term(terms: &mut UTerms, m: Monomial, p: UnknownPoly) {
    if p.is_zero() {
        return;
    }
    match terms.entry(m) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(p);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let sum = o.get().add(&p);
            if sum.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = sum;
            }
        }
    }
}

fn umul(p: &Presentation, a: &UTerms, b: &UTerms) -> UTerms {
    let mut out = UTerms::new();
    for (m1, c1) in a {
        for (m2, c2) in b {
            let phase = Scalar::q_pow(p.reorder_phase(m1, m2));
            uadd_term(&mut out, m1.mul(m2), c1.mul(c2).scale(&phase));
        }
    }
    out
}

/// Normal form with symbolic coefficients; reduction is linear in them.
fn ureduce(p: &Arc<Presentation>, terms: UTerms) -> UTerms {
    let basis = p.gb_data().clone();
    let mut terms = terms;
    loop {
        let mut target: Option<(Monomial, UnknownPoly, usize)> = None;
        for (m, c) in terms.iter().rev() {
            for (bi, b) in basis.basis.iter().enumerate() {
                let lm = b.iter().next_back().expect("nonzero basis").0;
                if lm.divides(m) {
                    target = Some((m.clone(), c.clone(), bi));
                    break;
                }
            }
            if target.is_some() {
                break;
            }
        }
        let Some((m, c, bi)) = target else {
            break;
        };
        let b = &basis.basis[bi];
        let lm = b.iter().next_back().expect("nonzero basis").0.clone();
        let prefix = m.div(&lm);
        let lead_phase = p.reorder_phase(&prefix, &lm);
        let factor = c.scale(&Scalar::q_pow(-lead_phase)).scale(&Scalar::one().neg());
        for (mm, cc) in b {
            let phase = Scalar::q_pow(p.reorder_phase(&prefix, mm));
            uadd_term(&mut terms, prefix.mul(mm), factor.scale(&cc.mul(&phase)));
        }
    }
    terms
}

/// Build the symbolic Hom description of morphisms source -> target whose
/// images are supported on standard monomials of total degree <= cap.
pub fn hom_constraints(
    source: &Arc<Presentation>,
    target: &Arc<Presentation>,
    cap: usize,
) -> Result<HomConstraintSystem> {
    if source.deformation() != target.deformation() {
        return Err(Error::DeformationMismatch);
    }
    let mut unknowns = Vec::new();
    let mut per_gen: Vec<Vec<usize>> = Vec::new();
    for i in 0..source.num_gens() {
        let monos = target.standard_monomials(source.generator_degree(i), cap);
        let mut ids = Vec::new();
        for m in monos {
            ids.push(unknowns.len());
            unknowns.push(HomUnknown { generator: i, monomial: m });
        }
        per_gen.push(ids);
    }
    let n = unknowns.len();
    // symbolic image of each generator
    let images: Vec<UTerms> = per_gen
        .iter()
        .map(|ids| {
            let mut t = UTerms::new();
            for id in ids {
                uadd_term(
                    &mut t,
                    unknowns[*id].monomial.clone(),
                    UnknownPoly::unknown(n, *id),
                );
            }
            t
        })
        .collect();
    let mut constraints = Vec::new();
    for (k, f) in source.relations().iter().enumerate() {
        let mut acc = UTerms::new();
        for (mono, c) in f.terms() {
            let mut term: UTerms = BTreeMap::new();
            uadd_term(
                &mut term,
                Monomial::unit(target.num_gens()),
                UnknownPoly::constant(n, Scalar::one()),
            );
            for (i, e) in mono.0.iter().enumerate() {
                for _ in 0..*e {
                    term = umul(target, &term, &images[i]);
                }
            }
            for (m, pcoeff) in term {
                uadd_term(&mut acc, m, pcoeff.scale(c));
            }
        }
        let reduced = ureduce(target, acc);
        for (m, poly) in reduced {
            constraints.push(HomConstraint { relation: k, monomial: m, poly });
        }
    }
    Ok(HomConstraintSystem {
        source: source.clone(),
        target: target.clone(),
        cap,
        unknowns,
        constraints,
    })
}

impl HomConstraintSystem {
    /// Express a validated morphism as a coefficient vector over the
    /// unknowns; errors when an image monomial lies outside the cap.
    pub fn morphism_coefficients(&self, m: &Morphism) -> Result<Vec<Scalar>> {
        if !same_algebra(m.source(), &self.source) || !same_algebra(m.target(), &self.target) {
            return Err(Error::AlgebraMismatch);
        }
        let mut coeffs = vec![Scalar::zero(); self.unknowns.len()];
        for (i, img) in m.images().iter().enumerate() {
            let reduced = self.target.reduce(img)?;
            for (mono, c) in reduced.terms() {
                let Some(pos) = self
                    .unknowns
                    .iter()
                    .position(|u| u.generator == i && u.monomial == *mono)
                else {
                    return Err(Error::NoSolutionAtCap);
                };
                coeffs[pos] = c.clone();
            }
        }
        Ok(coeffs)
    }

    /// Evaluate every constraint at a coefficient vector.
    pub fn evaluate(&self, values: &[Scalar]) -> Vec<Scalar> {
        self.constraints
            .iter()
            .map(|c| c.poly.evaluate(values))
            .collect()
    }

    /// Largest unknown-degree over all constraints (1 = linear, 2 = quadratic).
    pub fn max_constraint_degree(&self) -> u32 {
        self.constraints.iter().map(|c| c.poly.degree()).max().unwrap_or(0)
    }
}

/// Standard-monomial basis of the target's degree-`hdeg` component; each
/// vector is a valid generator image for a one-generator free source.
pub fn graded_points(
    target: &Arc<Presentation>,
    hdeg: &crate::deformation::DegreeVector,
    cap: usize,
) -> Vec<Element> {
    target
        .standard_monomials(hdeg, cap)
        .iter()
        .map(|m| {
            target
                .monomial_element(m.clone(), Scalar::one())
                .expect("standard monomial is valid")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::deformation::DegreeVector;
    use crate::presentation::coproduct;

    #[test]
    fn identity_validates_and_applies() {
        let t = catalog::nc_torus_rank2();
        let id = Morphism::identity(&t);
        id.validate().unwrap();
        let x = t.generator(0).unwrap();
        let xs = t.generator(1).unwrap();
        let a = xs.mul(&x).unwrap();
        assert_eq!(id.apply(&a).unwrap(), t.one());
    }

    #[test]
    fn scaling_morphisms() {
        let m = DegreeVector(vec![1, 0]);
        let f = catalog::free_line(catalog::theta2(), &m);
        let c = Scalar::rational(5, 3);
        let x = f.generator(0).unwrap();
        let scaling = Morphism::new(f.clone(), f.clone(), vec![x.scale(&c)]).unwrap();
        // x^2 -> c^2 x^2
        let x2 = x.pow(2).unwrap();
        assert_eq!(scaling.apply(&x2).unwrap(), x2.scale(&c.mul(&c)));
        // composition multiplies the scalars
        let c2 = Scalar::from_int(2);
        let scaling2 = Morphism::new(f.clone(), f.clone(), vec![x.scale(&c2)]).unwrap();
        let comp = Morphism::compose(&scaling, &scaling2).unwrap();
        assert_eq!(comp.images()[0], x.scale(&c.mul(&c2)));
    }

    #[test]
    fn degree_violation_detected() {
        let th = catalog::theta2();
        let fa = catalog::free_line(th.clone(), &DegreeVector(vec![1, 0]));
        let fb = catalog::free_line(th, &DegreeVector(vec![0, 1]));
        let err = Morphism::new(fa.clone(), fb.clone(), vec![fb.generator(0).unwrap()]);
        assert_eq!(err.unwrap_err(), Error::DegreeViolation(0));
    }

    #[test]
    fn relation_violation_detected() {
        let t = catalog::nc_torus_rank2();
        let m = DegreeVector(vec![1, 0]);
        let f = catalog::free_line(catalog::theta2(), &m);
        // torus -> free line: xs has nowhere to go but 0; x*xs - 1 then fails
        let err = Morphism::new(
            t.clone(),
            f.clone(),
            vec![f.generator(0).unwrap(), f.zero()],
        );
        assert_eq!(err.unwrap_err(), Error::RelationViolation(0));
    }

    #[test]
    fn compose_with_identity() {
        let t = catalog::nc_torus_rank2();
        let id = Morphism::identity(&t);
        let x = t.generator(0).unwrap();
        let sq = Morphism::new(t.clone(), t.clone(), vec![x.clone(), t.generator(1).unwrap()]).unwrap();
        let c = Morphism::compose(&id, &sq).unwrap();
        assert_eq!(c, sq);
    }

    #[test]
    fn coproduct_leg_then_codiagonal() {
        let t = catalog::nc_torus_rank2();
        let cp = coproduct(&t, &t).unwrap();
        let fold = Morphism::new(
            cp.algebra.clone(),
            t.clone(),
            vec![
                t.generator(0).unwrap(),
                t.generator(1).unwrap(),
                t.generator(0).unwrap(),
                t.generator(1).unwrap(),
            ],
        )
        .unwrap();
        let through = Morphism::compose(&fold, &cp.left).unwrap();
        assert_eq!(through, Morphism::identity(&t));
    }

    #[test]
    fn hom_constraints_free_source() {
        let m = DegreeVector(vec![1, 0]);
        let f = catalog::free_line(catalog::theta2(), &m);
        let sys = hom_constraints(&f, &f, 3).unwrap();
        assert!(sys.constraints.is_empty());
        assert_eq!(sys.unknowns.len(), 1); // only x itself has degree m under cap 3
    }

    #[test]
    fn hom_constraints_torus_quadratic() {
        let t = catalog::nc_torus_rank2();
        let sys = hom_constraints(&t, &t, 1).unwrap();
        // unknowns: c1 for x -> x, c2 for xs -> xs
        assert_eq!(sys.unknowns.len(), 2);
        assert_eq!(sys.max_constraint_degree(), 2);
        // identity morphism satisfies the constraints
        let coeffs = sys.morphism_coefficients(&Morphism::identity(&t)).unwrap();
        for v in sys.evaluate(&coeffs) {
            assert!(v.is_zero());
        }
        // a non-example violates them
        let bad = vec![Scalar::from_int(2), Scalar::from_int(3)];
        assert!(sys.evaluate(&bad).iter().any(|v| !v.is_zero()));
    }

    #[test]
    fn graded_points_are_valid_images() {
        let m = DegreeVector(vec![1, 0]);
        let t = catalog::nc_torus_rank2();
        let pts = graded_points(&t, &m, 3);
        let f = catalog::free_line(catalog::theta2(), &m);
        for p in &pts {
            Morphism::new(f.clone(), t.clone(), vec![p.clone()]).unwrap();
        }
        assert!(!pts.is_empty());
        let empty = graded_points(&t, &DegreeVector(vec![5, 5]), 2);
        assert!(empty.is_empty());
    }
}
