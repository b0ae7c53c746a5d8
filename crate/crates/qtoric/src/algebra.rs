//! Canonical elements of braided-commutative algebras.
//!
//! Generators quasi-commute: x_i x_j = chi(m_j, m_i) x_j x_i, so every word
//! has a unique representative with generator indices in nondecreasing order.
//! A [`Monomial`] is the exponent vector of such a sorted word, ordered by
//! degree-reverse-lexicographic comparison (this fixes Groebner leading terms
//! and all downstream determinism). An [`Element`] is a finite sum of
//! monomials with [`Scalar`] coefficients; zero coefficients are never stored,
//! so equal elements have identical representations.

use crate::deformation::DegreeVector;
use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::scalar::Scalar;
use num::One;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// One generator of a presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: DegreeVector,
    pub invertible: bool,
}

impl GeneratorSpec {
    pub fn new(name: impl Into<String>, degree: DegreeVector) -> Self {
        GeneratorSpec { name: name.into(), degree, invertible: false }
    }

    pub fn invertible(name: impl Into<String>, degree: DegreeVector) -> Self {
        GeneratorSpec { name: name.into(), degree, invertible: true }
    }
}

/// Exponent vector of a sorted word; negative entries only for invertible
/// generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<i64>);

impl Monomial {
    pub fn unit(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn generator(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|e| *e == 0)
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn exponent(&self, i: usize) -> i64 {
        self.0[i]
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise divisibility (both assumed polynomial, i.e. nonnegative).
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn has_negative(&self) -> bool {
        self.0.iter().any(|e| *e < 0)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    /// Degree-reverse-lexicographic: higher total degree wins; on ties, the
    /// monomial with the smaller exponent at the last differing position wins.
    fn cmp(&self, other: &Self) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for (a, b) in self.0.iter().zip(&other.0).rev() {
            match a.cmp(b) {
                Ordering::Equal => {}
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
            }
        }
        Ordering::Equal
    }
}

/// H-degree of an element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HDegree {
    /// The zero element carries every degree; flagged separately.
    ZeroElement,
    Homogeneous(DegreeVector),
    Inhomogeneous,
}

impl HDegree {
    /// Degree vector when homogeneous; the zero element counts as degree 0.
    pub fn as_vector(&self, rank: usize) -> Option<DegreeVector> {
        match self {
            HDegree::ZeroElement => Some(DegreeVector::zero(rank)),
            HDegree::Homogeneous(d) => Some(d.clone()),
            HDegree::Inhomogeneous => None,
        }
    }

    /// True for the zero element or the stated degree.
    pub fn is_degree(&self, d: &DegreeVector) -> bool {
        match self {
            HDegree::ZeroElement => true,
            HDegree::Homogeneous(m) => m == d,
            HDegree::Inhomogeneous => false,
        }
    }

    pub fn is_coinvariant(&self) -> bool {
        match self {
            HDegree::ZeroElement => true,
            HDegree::Homogeneous(m) => m.is_zero(),
            HDegree::Inhomogeneous => false,
        }
    }
}

/// A canonical element of a braided-commutative algebra.
#[derive(Clone, Debug)]
pub struct Element {
    algebra: Arc<Presentation>,
    terms: BTreeMap<Monomial, Scalar>,
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.algebra, &other.algebra) && self.terms == other.terms
    }
}

impl Eq for Element {}

/// Pointer-first structural identity of presentations.
pub fn same_algebra(a: &Arc<Presentation>, b: &Arc<Presentation>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Element {
    pub(crate) fn from_terms(algebra: Arc<Presentation>, terms: BTreeMap<Monomial, Scalar>) -> Element {
        debug_assert!(terms.values().all(|c| !c.is_zero()));
        Element { algebra, terms }
    }

    pub fn algebra(&self) -> &Arc<Presentation> {
        &self.algebra
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .all(|(m, c)| m.is_unit() && c.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Largest monomial and its coefficient in degrevlex order.
    pub fn leading(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub(crate) fn into_terms(self) -> BTreeMap<Monomial, Scalar> {
        self.terms
    }

    fn check_same(&self, other: &Element) -> Result<()> {
        if same_algebra(&self.algebra, &other.algebra) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.check_same(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            add_term(&mut terms, m.clone(), c.clone());
        }
        Ok(Element { algebra: self.algebra.clone(), terms })
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Element {
        Element {
            algebra: self.algebra.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Element {
        if s.is_zero() {
            return self.algebra.zero();
        }
        Element {
            algebra: self.algebra.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.mul(s))).collect(),
        }
    }

    /// Braided product: concatenate words and reorder, accumulating chi phases.
    pub fn mul(&self, other: &Element) -> Result<Element> {
        self.check_same(other)?;
        let mut terms: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let phase = self.algebra.reorder_phase(m1, m2);
                let coeff = c1.mul(c2).mul(&Scalar::q_pow(phase));
                add_term(&mut terms, m1.mul(m2), coeff);
            }
        }
        Ok(Element { algebra: self.algebra.clone(), terms })
    }

    pub fn pow(&self, k: u32) -> Result<Element> {
        let mut acc = self.algebra.one();
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn h_degree(&self) -> HDegree {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return HDegree::ZeroElement;
        };
        let d = self.algebra.monomial_degree(first);
        for m in it {
            if self.algebra.monomial_degree(m) != d {
                return HDegree::Inhomogeneous;
            }
        }
        HDegree::Homogeneous(d)
    }

    /// Partition of the terms by H-degree; the parts re-sum to the element.
    pub fn graded_decompose(&self) -> Vec<(DegreeVector, Element)> {
        let mut parts: BTreeMap<DegreeVector, BTreeMap<Monomial, Scalar>> = BTreeMap::new();
        for (m, c) in &self.terms {
            parts
                .entry(self.algebra.monomial_degree(m))
                .or_default()
                .insert(m.clone(), c.clone());
        }
        parts
            .into_iter()
            .map(|(d, terms)| (d, Element { algebra: self.algebra.clone(), terms }))
            .collect()
    }

    /// Degree-zero graded component.
    pub fn coinvariant_part(&self) -> Element {
        let zero = DegreeVector::zero(self.algebra.deformation().rank());
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| self.algebra.monomial_degree(m) == zero)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Element { algebra: self.algebra.clone(), terms }
    }

    /// Replace every coefficient by its value at q = 1.
    pub fn specialize_q1(&self) -> Result<Element> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let r = c.eval_q1()?;
            let s = Scalar::from_rat(r);
            if !s.is_zero() {
                terms.insert(m.clone(), s);
            }
        }
        Ok(Element { algebra: self.algebra.clone(), terms })
    }

    /// Canonical text form, e.g. `3/2*q^-1*x1^2*x2 + xs`.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let gens = self.algebra.generators();
        let mut out = String::new();
        for (pos, (mono, coeff)) in self.terms.iter().rev().enumerate() {
            let negative = coeff.is_negative();
            let mag = if negative { coeff.neg() } else { coeff.clone() };
            if pos == 0 {
                if negative {
                    out.push('-');
                }
            } else if negative {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || mono.is_unit() {
                factors.push(render_coefficient(&mag));
            }
            for (i, e) in mono.0.iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                if *e == 1 {
                    factors.push(gens[i].name.clone());
                } else {
                    factors.push(format!("{}^{}", gens[i].name, e));
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

fn render_coefficient(mag: &Scalar) -> String {
    match mag.as_laurent() {
        Some(l) if l.is_unit() => {
            let (e, r) = l.terms().next().expect("unit has one term");
            let mut parts = Vec::new();
            if !r.is_one() || *e == 0 {
                parts.push(format!("{r}"));
            }
            if *e == 1 {
                parts.push("q".to_string());
            } else if *e != 0 {
                parts.push(format!("q^{e}"));
            }
            parts.join("*")
        }
        Some(l) => format!("({l})"),
        None => format!("({})/({})", mag.numerator(), mag.denominator()),
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

fn add_term(terms: &mut BTreeMap<Monomial, Scalar>, m: Monomial, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match terms.entry(m) {
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

// ---- element constructors on presentations ----

impl Presentation {
    pub fn zero(self: &Arc<Self>) -> Element {
        Element { algebra: self.clone(), terms: BTreeMap::new() }
    }

    pub fn one(self: &Arc<Self>) -> Element {
        self.scalar_element(Scalar::one())
    }

    pub fn scalar_element(self: &Arc<Self>, c: Scalar) -> Element {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::unit(self.num_gens()), c);
        }
        Element { algebra: self.clone(), terms }
    }

    pub fn generator(self: &Arc<Self>, i: usize) -> Result<Element> {
        if i >= self.num_gens() {
            return Err(Error::InvalidGenerator(i));
        }
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::generator(self.num_gens(), i), Scalar::one());
        Ok(Element { algebra: self.clone(), terms })
    }

    pub fn generator_by_name(self: &Arc<Self>, name: &str) -> Result<Element> {
        let i = self
            .generator_index(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        self.generator(i)
    }

    /// Element from an explicit exponent vector; exponent signs are checked
    /// against the invertible flags.
    pub fn monomial_element(self: &Arc<Self>, mono: Monomial, c: Scalar) -> Result<Element> {
        if mono.0.len() != self.num_gens() {
            return Err(Error::DimensionMismatch { expected: self.num_gens(), got: mono.0.len() });
        }
        for (i, e) in mono.0.iter().enumerate() {
            if *e < 0 && !self.generators()[i].invertible {
                return Err(Error::NegativeExponent(self.generators()[i].name.clone()));
            }
        }
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mono, c);
        }
        Ok(Element { algebra: self.clone(), terms })
    }

    /// Sort a word of generator indices into the canonical monomial,
    /// accumulating one chi phase per adjacent transposition.
    pub fn from_word(self: &Arc<Self>, word: &[usize], c: Scalar) -> Result<Element> {
        let n = self.num_gens();
        let mut exps = vec![0i64; n];
        let mut phase = 0i64;
        for &g in word {
            if g >= n {
                return Err(Error::InvalidGenerator(g));
            }
            for i in g + 1..n {
                if exps[i] != 0 {
                    phase += exps[i] * self.pair_phase(g, i);
                }
            }
            exps[g] += 1;
        }
        let coeff = c.mul(&Scalar::q_pow(phase));
        self.monomial_element(Monomial(exps), coeff)
    }

    /// Transplant an element built over a presentation with the same
    /// generator data (used when adding relations produces a new quotient).
    pub(crate) fn adopt(self: &Arc<Self>, e: &Element) -> Result<Element> {
        if e.algebra.num_gens() != self.num_gens()
            || e.algebra.deformation() != self.deformation()
            || e.algebra
                .generators()
                .iter()
                .zip(self.generators())
                .any(|(a, b)| a.degree != b.degree)
        {
            return Err(Error::AlgebraMismatch);
        }
        Ok(Element { algebra: self.clone(), terms: e.terms.clone() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deformation::DeformationData;

    fn plane() -> Arc<Presentation> {
        // Theta = [[0,1],[-1,0]], generators x1:(1,0), x2:(0,1)
        let d = DeformationData::new(vec![vec![0, 1], vec![-1, 0]]).unwrap();
        Presentation::free(
            d,
            vec![
                GeneratorSpec::new("x1", DegreeVector(vec![1, 0])),
                GeneratorSpec::new("x2", DegreeVector(vec![0, 1])),
            ],
        )
        .unwrap()
    }

    #[test]
    fn degrevlex_order() {
        // x1^2 > x1*x2 > x2^2 and degree dominates
        let a = Monomial(vec![2, 0]);
        let b = Monomial(vec![1, 1]);
        let c = Monomial(vec![0, 2]);
        let d = Monomial(vec![1, 0]);
        assert!(a > b && b > c);
        assert!(c > d);
    }

    #[test]
    fn sorted_word_untouched() {
        let p = plane();
        let e = p.from_word(&[0, 1], Scalar::one()).unwrap();
        let expect = p.monomial_element(Monomial(vec![1, 1]), Scalar::one()).unwrap();
        assert_eq!(e, expect);
    }

    #[test]
    fn single_swap_picks_up_q() {
        // x2*x1 = q * x1*x2 for this Theta
        let p = plane();
        let e = p.from_word(&[1, 0], Scalar::one()).unwrap();
        let expect = p
            .monomial_element(Monomial(vec![1, 1]), Scalar::q_pow(1))
            .unwrap();
        assert_eq!(e, expect);
    }

    #[test]
    fn invalid_generator_index_rejected() {
        let p = plane();
        assert_eq!(
            p.from_word(&[0, 7], Scalar::one()).unwrap_err(),
            crate::error::Error::InvalidGenerator(7)
        );
        assert!(p.generator(2).is_err());
    }

    #[test]
    fn repeated_generator_no_phase() {
        let p = plane();
        let e = p.from_word(&[0, 0, 0], Scalar::one()).unwrap();
        let expect = p.monomial_element(Monomial(vec![3, 0]), Scalar::one()).unwrap();
        assert_eq!(e, expect);
    }

    #[test]
    fn unit_law_and_braided_commutativity() {
        let p = plane();
        let x1 = p.generator(0).unwrap();
        let x2 = p.generator(1).unwrap();
        assert_eq!(p.one().mul(&x1).unwrap(), x1);
        let ab = x2.mul(&x1).unwrap();
        let expect = p
            .monomial_element(Monomial(vec![1, 1]), Scalar::q_pow(1))
            .unwrap();
        assert_eq!(ab, expect);
        // a*b = chi(deg b, deg a) * b*a for homogeneous a = x2, b = x1
        let ba = x1.mul(&x2).unwrap();
        let chi = p
            .deformation()
            .chi_exponent(&DegreeVector(vec![1, 0]), &DegreeVector(vec![0, 1]))
            .unwrap();
        assert_eq!(ab, ba.scale(&Scalar::q_pow(chi)));
    }

    #[test]
    fn degree_bookkeeping() {
        let p = plane();
        let x1 = p.generator(0).unwrap();
        let x2 = p.generator(1).unwrap();
        let prod = x1.mul(&x2).unwrap();
        assert_eq!(prod.h_degree(), HDegree::Homogeneous(DegreeVector(vec![1, 1])));
        assert_eq!(p.zero().h_degree(), HDegree::ZeroElement);
        let sum = x1.add(&x2).unwrap();
        assert_eq!(sum.h_degree(), HDegree::Inhomogeneous);
        let parts = sum.graded_decompose();
        assert_eq!(parts.len(), 2);
        let resum = parts
            .iter()
            .fold(p.zero(), |acc, (_, part)| acc.add(part).unwrap());
        assert_eq!(resum, sum);
        assert_eq!(p.zero().graded_decompose().len(), 0);
    }

    #[test]
    fn coinvariants() {
        let p = plane();
        let x1 = p.generator(0).unwrap();
        let one_plus = p.one().add(&x1).unwrap();
        assert_eq!(one_plus.coinvariant_part(), p.one());
        assert_eq!(x1.coinvariant_part(), p.zero());
        assert_eq!(p.zero().coinvariant_part(), p.zero());
    }

    #[test]
    fn render_basic() {
        let p = plane();
        let x1 = p.generator(0).unwrap();
        let x2 = p.generator(1).unwrap();
        let e = x1
            .pow(2)
            .unwrap()
            .mul(&x2)
            .unwrap()
            .scale(&Scalar::rational(3, 2).mul(&Scalar::q_pow(-1)));
        assert_eq!(e.render(), "3/2*q^-1*x1^2*x2");
        let f = e.sub(&p.one()).unwrap();
        assert_eq!(f.render(), "3/2*q^-1*x1^2*x2 - 1");
        assert_eq!(p.zero().render(), "0");
    }
}
