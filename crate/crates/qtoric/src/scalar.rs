//! Exact coefficient arithmetic in the deformation parameter q.
//!
//! [`Laurent`] is the ring Q[q, q^-1]: a finite map from integer q-exponents
//! to nonzero rationals. The empty map is the canonical zero; no zero
//! coefficients are ever stored.
//!
//! [`Scalar`] is the fraction field Q(q), stored as a reduced pair of
//! Laurent polynomials. Canonical form: numerator and denominator coprime,
//! denominator with lowest q-exponent 0, integer coprime coefficients and
//! positive leading rational. All phases arising from the bicharacter are
//! units (single q-power terms), so generic elements keep denominator 1;
//! the full field is needed to run monic reductions and exact solves.

use crate::error::{Error, Result};
use num::{BigInt, BigRational, One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

pub type Rat = BigRational;

// ---- Laurent polynomials ----

/// A Laurent polynomial in q with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Laurent {
    terms: BTreeMap<i64, Rat>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Laurent::term(0, Rat::one())
    }

    /// The monomial `r * q^exp`; collapses to zero when `r` is zero.
    pub fn term(exp: i64, r: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(exp, r);
        }
        Laurent { terms }
    }

    /// The unit phase q^exp.
    pub fn q_pow(exp: i64) -> Self {
        Laurent::term(exp, Rat::one())
    }

    pub fn from_rat(r: Rat) -> Self {
        Laurent::term(0, r)
    }

    pub fn from_int(n: i64) -> Self {
        Laurent::from_rat(Rat::from_integer(BigInt::from(n)))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|r| r.is_one())
    }

    /// True when the polynomial is a single term `r*q^k`, i.e. a unit of the ring.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &Rat)> {
        self.terms.iter()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Coefficient of the highest power of q (zero polynomial has none).
    pub fn leading(&self) -> Option<&Rat> {
        self.terms.values().next_back()
    }

    pub fn add(&self, other: &Laurent) -> Laurent {
        let mut terms = self.terms.clone();
        for (e, r) in &other.terms {
            let entry = terms.entry(*e).or_insert_with(Rat::zero);
            *entry += r;
            if entry.is_zero() {
                terms.remove(e);
            }
        }
        Laurent { terms }
    }

    pub fn neg(&self) -> Laurent {
        Laurent { terms: self.terms.iter().map(|(e, r)| (*e, -r.clone())).collect() }
    }

    pub fn sub(&self, other: &Laurent) -> Laurent {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Laurent) -> Laurent {
        let mut terms: BTreeMap<i64, Rat> = BTreeMap::new();
        for (e1, r1) in &self.terms {
            for (e2, r2) in &other.terms {
                let e = e1 + e2;
                let entry = terms.entry(e).or_insert_with(Rat::zero);
                *entry += r1 * r2;
                if entry.is_zero() {
                    terms.remove(&e);
                }
            }
        }
        Laurent { terms }
    }

    pub fn scale(&self, r: &Rat) -> Laurent {
        if r.is_zero() {
            return Laurent::zero();
        }
        Laurent { terms: self.terms.iter().map(|(e, c)| (*e, c * r)).collect() }
    }

    /// Multiply by the unit q^k.
    pub fn shift(&self, k: i64) -> Laurent {
        Laurent { terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    /// Evaluate at q = 1.
    pub fn eval_q1(&self) -> Rat {
        let mut acc = Rat::zero();
        for r in self.terms.values() {
            acc += r;
        }
        acc
    }

    /// Dense coefficient vector `(coeffs ascending, min_exp)`; zero gives `([], 0)`.
    fn as_poly(&self) -> (Vec<Rat>, i64) {
        if self.is_zero() {
            return (Vec::new(), 0);
        }
        let lo = self.min_exp().unwrap();
        let hi = self.max_exp().unwrap();
        let mut coeffs = vec![Rat::zero(); (hi - lo + 1) as usize];
        for (e, r) in &self.terms {
            coeffs[(e - lo) as usize] = r.clone();
        }
        (coeffs, lo)
    }

    fn from_poly(coeffs: &[Rat], shift: i64) -> Laurent {
        let mut terms = BTreeMap::new();
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                terms.insert(shift + i as i64, c.clone());
            }
        }
        Laurent { terms }
    }

    /// Monic gcd as a plain polynomial (lowest exponent 0); gcd(0,0) = 0.
    pub fn gcd(&self, other: &Laurent) -> Laurent {
        if self.is_zero() {
            let (p, _) = other.as_poly();
            return Laurent::from_poly(&poly_monic(p), 0);
        }
        if other.is_zero() {
            let (p, _) = self.as_poly();
            return Laurent::from_poly(&poly_monic(p), 0);
        }
        let (a, _) = self.as_poly();
        let (b, _) = other.as_poly();
        Laurent::from_poly(&poly_gcd(a, b), 0)
    }

    /// Exact division; `None` when `other` does not divide `self` in Q[q,q^-1].
    pub fn exact_div(&self, other: &Laurent) -> Option<Laurent> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Laurent::zero());
        }
        let (a, sa) = self.as_poly();
        let (b, sb) = other.as_poly();
        let q = poly_exact_div(&a, &b)?;
        Some(Laurent::from_poly(&q, sa - sb))
    }

    /// Content-and-sign normalization: returns `c` such that `self = c * primitive`
    /// where `primitive` has integer coprime coefficients, positive leading
    /// rational and lowest exponent 0. Zero returns `(1, 0)`.
    fn primitive_scale(&self) -> (Rat, i64) {
        if self.is_zero() {
            return (Rat::one(), 0);
        }
        let lo = self.min_exp().unwrap();
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for r in self.terms.values() {
            num_gcd = num::integer::gcd(num_gcd, r.numer().abs());
            den_lcm = num::integer::lcm(den_lcm, r.denom().clone());
        }
        let mut scale = Rat::new(num_gcd, den_lcm);
        if self.leading().unwrap().is_negative() {
            scale = -scale;
        }
        (scale, lo)
    }
}

// ---- dense polynomial helpers over Q ----

fn poly_trim(mut p: Vec<Rat>) -> Vec<Rat> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_monic(p: Vec<Rat>) -> Vec<Rat> {
    let p = poly_trim(p);
    match p.last() {
        None => p,
        Some(lead) => {
            let l = lead.clone();
            p.into_iter().map(|c| c / &l).collect()
        }
    }
}

fn poly_rem(mut a: Vec<Rat>, b: &[Rat]) -> Vec<Rat> {
    let db = b.len() - 1;
    let lb = b[db].clone();
    while a.len() > db {
        let da = a.len() - 1;
        let f = a[da].clone() / &lb;
        for i in 0..=db {
            let v = &b[i] * &f;
            a[da - db + i] -= v;
        }
        a = poly_trim(a);
        if a.is_empty() {
            break;
        }
    }
    a
}

fn poly_gcd(a: Vec<Rat>, b: Vec<Rat>) -> Vec<Rat> {
    let mut a = poly_trim(a);
    let mut b = poly_trim(b);
    while !b.is_empty() {
        let r = poly_rem(a, &b);
        a = b;
        b = r;
    }
    poly_monic(a)
}

fn poly_exact_div(a: &[Rat], b: &[Rat]) -> Option<Vec<Rat>> {
    let mut rem = poly_trim(a.to_vec());
    let db = b.len() - 1;
    let lb = b[db].clone();
    if rem.len() < b.len() {
        return None;
    }
    let mut quot = vec![Rat::zero(); rem.len() - db];
    while rem.len() > db {
        let da = rem.len() - 1;
        let f = rem[da].clone() / &lb;
        quot[da - db] = f.clone();
        for i in 0..=db {
            let v = &b[i] * &f;
            rem[da - db + i] -= v;
        }
        rem = poly_trim(rem);
    }
    if rem.is_empty() {
        Some(poly_trim(quot))
    } else {
        None
    }
}

impl fmt::Display for Laurent {
    /// Canonical text: terms by descending q-exponent, e.g. `q^2 - 3/2*q + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (pos, (e, r)) in self.terms.iter().rev().enumerate() {
            let mag = r.abs();
            if pos == 0 {
                if r.is_negative() {
                    write!(f, "-")?;
                }
            } else if r.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let show_coeff = !mag.is_one() || *e == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            if *e != 0 {
                if show_coeff {
                    write!(f, "*")?;
                }
                if *e == 1 {
                    write!(f, "q")?;
                } else {
                    write!(f, "q^{e}")?;
                }
            }
        }
        Ok(())
    }
}

// ---- Scalars: the fraction field Q(q) ----

/// An element of Q(q) in reduced canonical form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scalar {
    num: Laurent,
    den: Laurent,
}

impl Scalar {
    fn make(num: Laurent, den: Laurent) -> Result<Scalar> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar::canonicalize(num, den))
    }

    fn canonicalize(num: Laurent, den: Laurent) -> Scalar {
        if num.is_zero() {
            return Scalar { num: Laurent::zero(), den: Laurent::one() };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g).expect("gcd divides"), den.exact_div(&g).expect("gcd divides"))
        };
        // Fix the unit ambiguity: denominator primitive with min exponent 0.
        let (scale, lo) = den.primitive_scale();
        let inv = scale.recip();
        let den = den.shift(-lo).scale(&inv);
        let num = num.shift(-lo).scale(&inv);
        Scalar { num, den }
    }

    pub fn zero() -> Scalar {
        Scalar { num: Laurent::zero(), den: Laurent::one() }
    }

    pub fn one() -> Scalar {
        Scalar { num: Laurent::one(), den: Laurent::one() }
    }

    pub fn from_laurent(l: Laurent) -> Scalar {
        Scalar { num: l, den: Laurent::one() }
    }

    pub fn q_pow(exp: i64) -> Scalar {
        Scalar::from_laurent(Laurent::q_pow(exp))
    }

    pub fn from_rat(r: Rat) -> Scalar {
        Scalar::from_laurent(Laurent::from_rat(r))
    }

    pub fn from_int(n: i64) -> Scalar {
        Scalar::from_laurent(Laurent::from_int(n))
    }

    /// Rational p/q as a scalar.
    pub fn rational(p: i64, q: i64) -> Scalar {
        Scalar::from_rat(Rat::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn numerator(&self) -> &Laurent {
        &self.num
    }

    pub fn denominator(&self) -> &Laurent {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The underlying Laurent polynomial when the denominator is trivial.
    pub fn as_laurent(&self) -> Option<&Laurent> {
        if self.den.is_one() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        Scalar::canonicalize(num, den)
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        Scalar { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        Scalar::canonicalize(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Scalar::make(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn inv(&self) -> Result<Scalar> {
        Scalar::one().div(self)
    }

    /// Specialize q to 1; errors when the denominator vanishes there.
    pub fn eval_q1(&self) -> Result<Rat> {
        let d = self.den.eval_q1();
        if d.is_zero() {
            return Err(Error::SingularAtQ1);
        }
        Ok(self.num.eval_q1() / d)
    }

    /// Sign used by the element renderer: sign of the numerator's leading rational.
    pub fn is_negative(&self) -> bool {
        self.num.leading().is_some_and(|r| r.is_negative())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> Laurent {
        Laurent::q_pow(1)
    }

    #[test]
    fn exponent_cancellation() {
        assert!(Laurent::q_pow(2).mul(&Laurent::q_pow(-2)).is_one());
    }

    #[test]
    fn additive_inverse_is_empty_map() {
        let sum = q().add(&q().neg());
        assert!(sum.is_zero());
        assert_eq!(sum.terms.len(), 0);
    }

    #[test]
    fn hand_expansion() {
        // (1 + q)(1 - q) = 1 - q^2
        let a = Laurent::one().add(&q());
        let b = Laurent::one().sub(&q());
        let expect = Laurent::one().sub(&Laurent::q_pow(2));
        assert_eq!(a.mul(&b), expect);
    }

    #[test]
    fn scalar_reduction() {
        // (1 - q^2)/(1 + q) = 1 - q  (canonical: denominator 1)
        let n = Laurent::one().sub(&Laurent::q_pow(2));
        let d = Laurent::one().add(&q());
        let s = Scalar::make(n, d).unwrap();
        assert_eq!(s, Scalar::from_laurent(Laurent::one().sub(&q())));
        assert!(s.as_laurent().is_some());
    }

    #[test]
    fn denominator_canonical_form() {
        // 1/(2*q^3 - 2*q) -> den has min exponent 0, integer coprime, positive lead
        let d = Laurent::term(3, Rat::from_integer(2.into())).sub(&Laurent::term(1, Rat::from_integer(2.into())));
        let s = Scalar::make(Laurent::one(), d).unwrap();
        assert_eq!(s.denominator().min_exp(), Some(0));
        assert!(s.denominator().leading().unwrap().is_positive());
        let back = s.mul(&Scalar::from_laurent(
            Laurent::term(3, Rat::from_integer(2.into())).sub(&Laurent::term(1, Rat::from_integer(2.into()))),
        ));
        assert!(back.is_one());
    }

    #[test]
    fn eval_q1() {
        let s = Scalar::from_laurent(Laurent::one().add(&q()));
        assert_eq!(s.eval_q1().unwrap(), Rat::from_integer(2.into()));
        let bad = Scalar::make(Laurent::one(), Laurent::one().sub(&q())).unwrap();
        assert_eq!(bad.eval_q1(), Err(Error::SingularAtQ1));
    }

    fn arb_laurent() -> impl Strategy<Value = Laurent> {
        proptest::collection::vec((-4i64..5, -6i64..7), 0..5).prop_map(|ts| {
            let mut l = Laurent::zero();
            for (e, c) in ts {
                l = l.add(&Laurent::term(e, Rat::from_integer(c.into())));
            }
            l
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_laurent(), b in arb_laurent(), c in arb_laurent()) {
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        }

        #[test]
        fn scalar_field_axioms(a in arb_laurent(), b in arb_laurent()) {
            let sa = Scalar::from_laurent(a.clone());
            let sb = Scalar::from_laurent(b.clone());
            // canonicalizing twice is a no-op
            let again = Scalar::canonicalize(sa.num.clone(), sa.den.clone());
            prop_assert_eq!(&again, &sa);
            if !sb.is_zero() {
                let d = sa.div(&sb).unwrap();
                prop_assert_eq!(d.mul(&sb), sa);
            }
        }

        #[test]
        fn gcd_divides_both(a in arb_laurent(), b in arb_laurent()) {
            let g = a.gcd(&b);
            if !g.is_zero() {
                prop_assert!(a.exact_div(&g).is_some());
                prop_assert!(b.exact_div(&g).is_some());
            }
        }
    }
}
