//! Zariski covering families, matching families and cap-bounded gluing.
//!
//! A cover of X_A is a finite family of localizations A[s_i^-1] at
//! H-coinvariant elements s_i together with witnesses a_i certifying the
//! partition of unity sum a_i s_i = 1. Intersections are iterated
//! localizations, pullbacks transport elements and witnesses along a
//! morphism, and gluing solves the restriction equations exactly over the
//! standard-monomial span up to a visible total-degree cap. Restrictions
//! preserve the H-degree, so all linear algebra runs block-wise per degree.

use crate::algebra::{same_algebra, Element, Monomial};
use crate::deformation::DegreeVector;
use crate::error::{Error, Result};
use crate::linsolve::linsolve;
use crate::morphism::Morphism;
use crate::presentation::{localize, Localization, Presentation};
use crate::scalar::Scalar;
use std::collections::BTreeMap;
use std::sync::Arc;

/// A validated Zariski covering family with cached localizations.
#[derive(Debug)]
pub struct ZariskiCover {
    base: Arc<Presentation>,
    elements: Vec<Element>,
    witnesses: Vec<Element>,
    charts: Vec<Localization>,
}

/// Double localization A[s_i^-1, s_j^-1] with the two restriction maps.
#[derive(Debug)]
pub struct Intersection {
    pub algebra: Arc<Presentation>,
    /// Restriction A[s_i^-1] -> A[s_i^-1, s_j^-1].
    pub from_first: Morphism,
    /// Restriction A[s_j^-1] -> A[s_i^-1, s_j^-1].
    pub from_second: Morphism,
}

impl ZariskiCover {
    /// Validate Def-4.3 style data: coinvariant elements, witness count and
    /// the partition-of-unity identity; localizations are built eagerly.
    pub fn new(
        base: Arc<Presentation>,
        elements: Vec<Element>,
        witnesses: Vec<Element>,
    ) -> Result<ZariskiCover> {
        if elements.is_empty() {
            return Err(Error::EmptyCover);
        }
        if witnesses.len() != elements.len() {
            return Err(Error::WitnessCountMismatch {
                elements: elements.len(),
                witnesses: witnesses.len(),
            });
        }
        for e in elements.iter().chain(&witnesses) {
            if !same_algebra(e.algebra(), &base) {
                return Err(Error::AlgebraMismatch);
            }
        }
        let mut charts = Vec::with_capacity(elements.len());
        for (i, s) in elements.iter().enumerate() {
            let loc = localize(&base, s).map_err(|e| match e {
                Error::NotCoinvariant => Error::CoverElementNotCoinvariant(i),
                other => other,
            })?;
            charts.push(loc);
        }
        let mut sum = base.one().neg();
        for (a, s) in witnesses.iter().zip(&elements) {
            sum = sum.add(&a.mul(s)?)?;
        }
        let residue = base.reduce(&sum)?;
        if !residue.is_zero() {
            return Err(Error::PartitionOfUnityFails { residue: residue.render() });
        }
        Ok(ZariskiCover { base, elements, witnesses, charts })
    }

    pub fn base(&self) -> &Arc<Presentation> {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn witnesses(&self) -> &[Element] {
        &self.witnesses
    }

    pub fn chart(&self, i: usize) -> Result<&Localization> {
        self.charts.get(i).ok_or(Error::IndexOutOfRange(i))
    }

    pub fn charts(&self) -> &[Localization] {
        &self.charts
    }

    /// Re-run the cover checks (used after deserialization).
    pub fn validate(&self) -> Result<()> {
        ZariskiCover::new(self.base.clone(), self.elements.clone(), self.witnesses.clone())
            .map(|_| ())
    }

    /// A[s_i^-1, s_j^-1] as an iterated localization, with both restrictions.
    pub fn intersection(&self, i: usize, j: usize) -> Result<Intersection> {
        let chart_i = self.chart(i)?;
        let _ = self.chart(j)?;
        let sj_in_i = chart_i.map.apply(&self.elements[j])?;
        let second = localize(&chart_i.algebra, &sj_in_i)?;
        let algebra = second.algebra.clone();
        let from_first = second.map.clone();
        // A[s_j^-1] -> A[s_i^-1, s_j^-1]: base generators go to themselves,
        // the inverse of s_j goes to the freshly adjoined inverse.
        let chart_j = self.chart(j)?;
        let mut images: Vec<Element> = (0..self.base.num_gens())
            .map(|g| algebra.generator(g))
            .collect::<Result<_>>()?;
        images.push(algebra.generator(second.inverse_index)?);
        let from_second = Morphism::new(chart_j.algebra.clone(), algebra.clone(), images)?;
        Ok(Intersection { algebra, from_first, from_second })
    }

    /// Transport the cover along g: base -> target (elements and witnesses
    /// map through g); the result is re-validated in full.
    pub fn pullback(&self, g: &Morphism) -> Result<ZariskiCover> {
        if !same_algebra(g.source(), &self.base) {
            return Err(Error::MorphismSourceMismatch);
        }
        let elements = self
            .elements
            .iter()
            .map(|s| g.apply(s))
            .collect::<Result<Vec<_>>>()?;
        let witnesses = self
            .witnesses
            .iter()
            .map(|a| g.apply(a))
            .collect::<Result<Vec<_>>>()?;
        ZariskiCover::new(g.target().clone(), elements, witnesses)
    }

    /// Restrict a base element into chart i.
    pub fn restrict(&self, i: usize, b: &Element) -> Result<Element> {
        self.chart(i)?.map.apply(b)
    }

    /// True iff all pairwise restrictions of the parts agree in the
    /// intersections.
    pub fn check_matching_family(&self, parts: &[Element]) -> Result<bool> {
        if parts.len() != self.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), got: parts.len() });
        }
        for (i, part) in parts.iter().enumerate() {
            if !same_algebra(part.algebra(), &self.charts[i].algebra) {
                return Err(Error::AlgebraMismatch);
            }
        }
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                let inter = self.intersection(i, j)?;
                let left = inter.from_first.apply(&parts[i])?;
                let right = inter.from_second.apply(&parts[j])?;
                if left != right {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Solve for the unique base element restricting to the given matching
    /// family, over standard monomials of total degree <= cap.
    pub fn glue(&self, parts: &[Element], cap: usize) -> Result<Element> {
        if !self.check_matching_family(parts)? {
            return Err(Error::NotMatching);
        }
        // Restriction preserves H-degree: solve block-wise per degree.
        let mut degrees: Vec<DegreeVector> = Vec::new();
        let mut parts_by_degree: Vec<BTreeMap<DegreeVector, Element>> = Vec::new();
        for part in parts {
            let reduced = self.charts[parts_by_degree.len()].algebra.reduce(part)?;
            let mut map = BTreeMap::new();
            for (d, comp) in reduced.graded_decompose() {
                if !degrees.contains(&d) {
                    degrees.push(d.clone());
                }
                map.insert(d, comp);
            }
            parts_by_degree.push(map);
        }
        degrees.sort();
        let mut glued = self.base.zero();
        for d in &degrees {
            let block = self.glue_block(d, &parts_by_degree, cap)?;
            glued = glued.add(&block)?;
        }
        // The glued element must actually restrict to the parts.
        for (i, part) in parts.iter().enumerate() {
            let restricted = self.restrict(i, &glued)?;
            let expect = self.charts[i].algebra.reduce(part)?;
            if restricted != expect {
                return Err(Error::NoSolutionAtCap);
            }
        }
        Ok(glued)
    }

    fn glue_block(
        &self,
        degree: &DegreeVector,
        parts_by_degree: &[BTreeMap<DegreeVector, Element>],
        cap: usize,
    ) -> Result<Element> {
        let columns = self.base.standard_monomials(degree, cap);
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        let mut rhs: Vec<Scalar> = Vec::new();
        for (i, chart) in self.charts.iter().enumerate() {
            let images: Vec<Element> = columns
                .iter()
                .map(|u| {
                    let e = self.base.monomial_element(u.clone(), Scalar::one())?;
                    chart.map.apply(&e)
                })
                .collect::<Result<_>>()?;
            let part = parts_by_degree[i].get(degree);
            let mut coords: BTreeMap<Monomial, usize> = BTreeMap::new();
            for img in images.iter().chain(part) {
                for (m, _) in img.terms() {
                    let next = coords.len();
                    coords.entry(m.clone()).or_insert(next);
                }
            }
            let zero_row = vec![Scalar::zero(); columns.len()];
            let base_row = rows.len();
            rows.extend(std::iter::repeat_n(zero_row, coords.len()));
            rhs.extend(std::iter::repeat_n(Scalar::zero(), coords.len()));
            for (col, img) in images.iter().enumerate() {
                for (m, c) in img.terms() {
                    rows[base_row + coords[m]][col] = c.clone();
                }
            }
            if let Some(p) = part {
                for (m, c) in p.terms() {
                    rhs[base_row + coords[m]] = c.clone();
                }
            }
        }
        let solution = linsolve(columns.len(), &rows, &rhs).map_err(|e| match e {
            Error::Inconsistent => Error::NoSolutionAtCap,
            other => other,
        })?;
        if !solution.is_unique() {
            return Err(Error::AmbiguousAtCap);
        }
        let mut out = self.base.zero();
        for (u, c) in columns.iter().zip(&solution.particular) {
            if !c.is_zero() {
                out = out.add(&self.base.monomial_element(u.clone(), c.clone())?)?;
            }
        }
        Ok(out)
    }

    /// Dimension of the kernel of the stacked restriction map on the
    /// standard-monomial span up to `cap` (0 means the cover separates).
    pub fn restriction_kernel_dim(&self, cap: usize) -> Result<usize> {
        let all = self.base.standard_monomials_all(cap);
        let mut by_degree: BTreeMap<DegreeVector, Vec<Monomial>> = BTreeMap::new();
        for m in all {
            by_degree.entry(self.base.monomial_degree(&m)).or_default().push(m);
        }
        let mut total = 0usize;
        for columns in by_degree.values() {
            let mut rows: Vec<Vec<Scalar>> = Vec::new();
            for chart in &self.charts {
                let images: Vec<Element> = columns
                    .iter()
                    .map(|u| {
                        let e = self.base.monomial_element(u.clone(), Scalar::one())?;
                        chart.map.apply(&e)
                    })
                    .collect::<Result<_>>()?;
                let mut coords: BTreeMap<Monomial, usize> = BTreeMap::new();
                for img in &images {
                    for (m, _) in img.terms() {
                        let next = coords.len();
                        coords.entry(m.clone()).or_insert(next);
                    }
                }
                let base_row = rows.len();
                rows.extend(std::iter::repeat_n(vec![Scalar::zero(); columns.len()], coords.len()));
                for (col, img) in images.iter().enumerate() {
                    for (m, c) in img.terms() {
                        rows[base_row + coords[m]][col] = c.clone();
                    }
                }
            }
            let rhs = vec![Scalar::zero(); rows.len()];
            total += linsolve(columns.len(), &rows, &rhs)?.kernel.len();
        }
        Ok(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn sphere2_cover() -> ZariskiCover {
        // S^2: one conjugate pair plus z; hemispheres s1 = (1-z)/2, s2 = (1+z)/2
        let s2 = catalog::sphere_even(catalog::theta2(), 1);
        let (s1, s2e) = catalog::hemisphere_elements(&s2);
        ZariskiCover::new(s2.clone(), vec![s1, s2e], vec![s2.one(), s2.one()]).unwrap()
    }

    #[test]
    fn hemisphere_cover_validates() {
        let c = sphere2_cover();
        assert_eq!(c.len(), 2);
        c.validate().unwrap();
    }

    #[test]
    fn trivial_cover_validates() {
        let t = catalog::nc_torus_rank2();
        let c = ZariskiCover::new(t.clone(), vec![t.one()], vec![t.one()]).unwrap();
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn bad_witness_reported() {
        let s2 = catalog::sphere_even(catalog::theta2(), 1);
        let z = s2.generator_by_name("z").unwrap();
        let err = ZariskiCover::new(s2.clone(), vec![z], vec![s2.one()]).unwrap_err();
        assert!(matches!(err, Error::PartitionOfUnityFails { .. }));
    }

    #[test]
    fn non_coinvariant_element_reported() {
        let s2 = catalog::sphere_even(catalog::theta2(), 1);
        let x = s2.generator(0).unwrap();
        let err = ZariskiCover::new(s2.clone(), vec![x], vec![s2.one()]).unwrap_err();
        assert_eq!(err, Error::CoverElementNotCoinvariant(0));
    }

    #[test]
    fn empty_cover_rejected() {
        let t = catalog::nc_torus_rank2();
        assert_eq!(
            ZariskiCover::new(t, vec![], vec![]).unwrap_err(),
            Error::EmptyCover
        );
    }

    #[test]
    fn self_intersection_restrictions_agree_on_base() {
        let c = sphere2_cover();
        let inter = c.intersection(0, 0).unwrap();
        for g in 0..c.base().num_gens() {
            let e = c.chart(0).unwrap().algebra.generator(g).unwrap();
            assert_eq!(
                inter.from_first.apply(&e).unwrap(),
                inter.from_second.apply(&e).unwrap()
            );
        }
    }

    #[test]
    fn intersection_dimensions_symmetric() {
        let c = sphere2_cover();
        let ij = c.intersection(0, 1).unwrap();
        let ji = c.intersection(1, 0).unwrap();
        for cap in 0..=3usize {
            let zero = DegreeVector::zero(2);
            assert_eq!(
                ij.algebra.graded_dimension(&zero, cap),
                ji.algebra.graded_dimension(&zero, cap)
            );
            let m = DegreeVector(vec![1, 0]);
            assert_eq!(
                ij.algebra.graded_dimension(&m, cap),
                ji.algebra.graded_dimension(&m, cap)
            );
        }
    }

    #[test]
    fn matching_family_from_global_element() {
        let c = sphere2_cover();
        let z = c.base().generator_by_name("z").unwrap();
        let parts: Vec<Element> = (0..c.len())
            .map(|i| c.restrict(i, &z).unwrap())
            .collect();
        assert!(c.check_matching_family(&parts).unwrap());
        // perturb one chart by the unit
        let mut bad = parts.clone();
        bad[1] = bad[1].add(&c.chart(1).unwrap().algebra.one()).unwrap();
        assert!(!c.check_matching_family(&bad).unwrap());
    }

    #[test]
    fn glue_round_trip() {
        let c = sphere2_cover();
        let x = c.base().generator(0).unwrap();
        let xs = c.base().generator(1).unwrap();
        let b = xs.mul(&x).unwrap().add(&c.base().one()).unwrap();
        let parts: Vec<Element> = (0..c.len())
            .map(|i| c.restrict(i, &b).unwrap())
            .collect();
        let glued = c.glue(&parts, 2).unwrap();
        assert_eq!(glued, c.base().reduce(&b).unwrap());
    }

    #[test]
    fn glue_rejects_non_matching() {
        let c = sphere2_cover();
        let z = c.base().generator_by_name("z").unwrap();
        let mut parts: Vec<Element> = (0..c.len())
            .map(|i| c.restrict(i, &z).unwrap())
            .collect();
        parts[0] = parts[0].add(&c.chart(0).unwrap().algebra.one()).unwrap();
        assert_eq!(c.glue(&parts, 2).unwrap_err(), Error::NotMatching);
    }

    #[test]
    fn separation_small_cap() {
        let c = sphere2_cover();
        assert_eq!(c.restriction_kernel_dim(2).unwrap(), 0);
    }

    #[test]
    fn pullback_along_identity_and_chart() {
        let c = sphere2_cover();
        let id = Morphism::identity(c.base());
        let back = c.pullback(&id).unwrap();
        assert_eq!(back.len(), c.len());
        for (a, b) in back.elements().iter().zip(c.elements()) {
            assert_eq!(
                back.base().reduce(a).unwrap(),
                c.base().reduce(b).unwrap()
            );
        }
        // pull back along the first chart inclusion (Prop 4.6 instance)
        let chart_map = c.chart(0).unwrap().map.clone();
        let pulled = c.pullback(&chart_map).unwrap();
        assert_eq!(pulled.len(), 2);
        pulled.validate().unwrap();
    }
}
