use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};

use super::{grevlex_cmp, Field, FieldElement, Monomial, PolyRing, TruncatedSeries};

/// Canonical sparse polynomial: nonzero coefficients, distinct monomials,
/// terms sorted descending in graded reverse lexicographic order.
#[derive(Clone)]
pub struct Polynomial {
    ring: Arc<PolyRing>,
    terms: Vec<(Monomial, FieldElement)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        PolyRing::same(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl Hash for Polynomial {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

/// Merge two descending term lists, `a + factor * b`.
pub(crate) fn merge_terms(
    field: Field,
    a: &[(Monomial, FieldElement)],
    b: &[(Monomial, FieldElement)],
    factor: &FieldElement,
    cmp: impl Fn(&Monomial, &Monomial) -> Ordering,
) -> Vec<(Monomial, FieldElement)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match cmp(&a[i].0, &b[j].0) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push((b[j].0.clone(), field.mul(factor, &b[j].1)));
                j += 1;
            }
            Ordering::Equal => {
                let c = field.add(&a[i].1, &field.mul(factor, &b[j].1));
                if !c.is_zero() {
                    out.push((a[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend(b[j..].iter().map(|(m, c)| (m.clone(), field.mul(factor, c))));
    out
}

impl Polynomial {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        Polynomial { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        Self::constant(ring, ring.field().one())
    }

    pub fn constant(ring: &Arc<PolyRing>, c: FieldElement) -> Self {
        if c.is_zero() {
            return Self::zero(ring);
        }
        Polynomial { ring: ring.clone(), terms: vec![(Monomial::one(ring.nvars()), c)] }
    }

    pub fn from_i64(ring: &Arc<PolyRing>, n: i64) -> Self {
        Self::constant(ring, ring.field().from_i64(n))
    }

    pub fn var(ring: &Arc<PolyRing>, index: usize) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: vec![(Monomial::var(ring.nvars(), index), ring.field().one())],
        }
    }

    pub fn var_named(ring: &Arc<PolyRing>, name: &str) -> Result<Self> {
        Ok(Self::var(ring, ring.table().lookup(name)?))
    }

    /// Normalizes an arbitrary term list: merges duplicates, drops zeros, sorts.
    pub fn from_terms(ring: &Arc<PolyRing>, terms: impl IntoIterator<Item = (Monomial, FieldElement)>) -> Self {
        let field = ring.field();
        let mut acc: HashMap<Monomial, FieldElement> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.nvars(), ring.nvars(), "monomial arity does not match ring");
            assert!(field.contains(&c), "coefficient outside {field:?}");
            match acc.get_mut(&m) {
                Some(v) => *v = field.add(v, &c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| grevlex_cmp(&b.0, &a.0));
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn field(&self) -> Field {
        self.ring.field()
    }

    pub fn terms(&self) -> &[(Monomial, FieldElement)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, FieldElement)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn constant_term(&self) -> FieldElement {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => self.field().zero(),
        }
    }

    pub fn leading_term(&self) -> Option<&(Monomial, FieldElement)> {
        self.terms.first()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| m.degree())
    }

    /// Largest exponent of variable `v` over all terms.
    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exponents()[v]).max().unwrap_or(0)
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        PolyRing::check_same(&self.ring, &other.ring)?;
        let one = self.field().one();
        let terms = merge_terms(self.field(), &self.terms, &other.terms, &one, grevlex_cmp);
        Ok(Polynomial { ring: self.ring.clone(), terms })
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        PolyRing::check_same(&self.ring, &other.ring)?;
        let m1 = self.field().from_i64(-1);
        let terms = merge_terms(self.field(), &self.terms, &other.terms, &m1, grevlex_cmp);
        Ok(Polynomial { ring: self.ring.clone(), terms })
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        PolyRing::check_same(&self.ring, &other.ring)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Polynomial::zero(&self.ring));
        }
        if other.terms.len() == 1 {
            let (m, c) = &other.terms[0];
            return Ok(self.mul_term(m, c));
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return Ok(other.mul_term(m, c));
        }
        let field = self.field();
        let mut acc: HashMap<Monomial, FieldElement> = HashMap::with_capacity(self.len() * other.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = field.mul(ca, cb);
                match acc.get_mut(&m) {
                    Some(v) => *v = field.add(v, &c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| grevlex_cmp(&b.0, &a.0));
        Ok(Polynomial { ring: self.ring.clone(), terms })
    }

    /// Product with `c * m`; keeps the term order since orders are multiplicative.
    pub fn mul_term(&self, m: &Monomial, c: &FieldElement) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        let field = self.field();
        let terms = self.terms.iter().map(|(tm, tc)| (tm.mul(m), field.mul(tc, c))).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    pub fn scale(&self, c: &FieldElement) -> Polynomial {
        self.mul_term(&Monomial::one(self.ring.nvars()), c)
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Polynomial {
        match self.terms.first() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = self.field().inv(c).expect("leading coefficient is nonzero");
                self.scale(&inv)
            }
        }
    }

    /// Formal partial derivative with respect to variable `v`.
    pub fn partial_derivative(&self, v: usize) -> Result<Polynomial> {
        if v >= self.ring.nvars() {
            return Err(Error::UnknownVariable(format!("#{v}")));
        }
        let field = self.field();
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.exponents()[v];
            if e == 0 {
                return None;
            }
            let c = field.mul(c, &field.from_i64(e as i64));
            if c.is_zero() {
                return None;
            }
            let mut exps = m.exponents().to_vec();
            exps[v] -= 1;
            Some((Monomial::from_exponents(exps), c))
        });
        Ok(Polynomial::from_terms(&self.ring, terms))
    }

    pub fn partial_derivative_by(&self, name: &str) -> Result<Polynomial> {
        self.partial_derivative(self.ring.table().lookup(name)?)
    }

    /// Ring-morphism evaluation `x_i ↦ images[i]`; all images share one ring.
    pub fn substitute(&self, images: &[Polynomial]) -> Result<Polynomial> {
        if images.len() != self.ring.nvars() {
            return Err(Error::LengthMismatch { expected: self.ring.nvars(), found: images.len() });
        }
        let target = match images.first() {
            Some(p) => p.ring.clone(),
            None => self.ring.clone(),
        };
        for img in images {
            PolyRing::check_same(&target, &img.ring)?;
        }
        let mut powers: Vec<Vec<Polynomial>> = images.iter().map(|p| vec![Polynomial::one(&target), p.clone()]).collect();
        let mut acc = Polynomial::zero(&target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(&target, c.clone());
            for (v, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pv = &mut powers[v];
                while pv.len() <= e as usize {
                    let next = &pv[pv.len() - 1] * &pv[1];
                    pv.push(next);
                }
                t = &t * &pv[e as usize];
                if t.is_zero() {
                    break;
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Value at a point of the coefficient field.
    pub fn evaluate(&self, point: &[FieldElement]) -> Result<FieldElement> {
        if point.len() != self.ring.nvars() {
            return Err(Error::LengthMismatch { expected: self.ring.nvars(), found: point.len() });
        }
        let field = self.field();
        let mut acc = field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t = field.mul(&t, &field.pow(&point[v], e as u64));
                }
            }
            acc = field.add(&acc, &t);
        }
        Ok(acc)
    }

    /// Evaluates on truncated series, discarding every `t`-degree above `m`.
    pub fn truncated_substitute(&self, images: &[TruncatedSeries], m: usize) -> Result<TruncatedSeries> {
        if images.len() != self.ring.nvars() {
            return Err(Error::LengthMismatch { expected: self.ring.nvars(), found: images.len() });
        }
        for img in images {
            if img.bound() != m {
                return Err(Error::BoundMismatch { expected: m, found: img.bound() });
            }
        }
        let target = match images.first() {
            Some(s) => s.ring().clone(),
            None => self.ring.clone(),
        };
        let mut powers: Vec<Vec<TruncatedSeries>> = images
            .iter()
            .map(|s| vec![TruncatedSeries::constant(Polynomial::one(&target), m), s.clone()])
            .collect();
        let mut acc = TruncatedSeries::constant(Polynomial::zero(&target), m);
        for (mono, c) in &self.terms {
            let mut t = TruncatedSeries::constant(Polynomial::constant(&target, c.clone()), m);
            for (v, &e) in mono.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pv = &mut powers[v];
                while pv.len() <= e as usize {
                    let next = pv[pv.len() - 1].try_mul(&pv[1])?;
                    pv.push(next);
                }
                t = t.try_mul(&pv[e as usize])?;
            }
            acc = acc.try_add(&t)?;
        }
        Ok(acc)
    }

    /// Renames variable `i` to `map[i]` of `target`.
    pub fn map_vars(&self, target: &Arc<PolyRing>, map: &[usize]) -> Polynomial {
        assert_eq!(map.len(), self.ring.nvars());
        let n = target.nvars();
        let terms = self.terms.iter().map(|(m, c)| {
            let mut exps = vec![0; n];
            for (i, &e) in m.exponents().iter().enumerate() {
                exps[map[i]] += e;
            }
            (Monomial::from_exponents(exps), c.clone())
        });
        Polynomial::from_terms(target, terms)
    }

    /// Like [`map_vars`](Self::map_vars) for partial maps; `None` when a
    /// variable without an image occurs.
    pub fn project_vars(&self, target: &Arc<PolyRing>, map: &[Option<usize>]) -> Option<Polynomial> {
        let n = target.nvars();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut exps = vec![0; n];
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    exps[map[i]?] += e;
                }
            }
            terms.push((Monomial::from_exponents(exps), c.clone()));
        }
        Some(Polynomial::from_terms(target, terms))
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Polynomial) -> Option<Polynomial> {
        let (lm, lc) = d.leading_term()?.clone();
        let field = self.field();
        let inv = field.inv(&lc)?;
        let mut rem = self.terms.clone();
        let mut quot = Vec::new();
        let m1 = field.from_i64(-1);
        while let Some((m, c)) = rem.first().cloned() {
            if !lm.divides(&m) {
                return None;
            }
            let qm = lm.quotient_of(&m);
            let qc = field.mul(&c, &inv);
            let sub = d.mul_term(&qm, &field.mul(&qc, &m1));
            rem = merge_terms(field, &rem, &sub.terms, &field.one(), grevlex_cmp);
            quot.push((qm, qc));
        }
        Some(Polynomial::from_terms(&self.ring, quot))
    }

    /// Re-homes the polynomial into an equal ring object.
    pub fn with_ring(&self, ring: &Arc<PolyRing>) -> Result<Polynomial> {
        PolyRing::check_same(&self.ring, ring)?;
        Ok(Polynomial { ring: ring.clone(), terms: self.terms.clone() })
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let table = self.ring.table();
        let field = self.field();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let (neg, mag) = if c.is_negative() { (true, field.neg(c)) } else { (false, c.clone()) };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mut parts: Vec<String> = Vec::new();
            if !mag.is_one() || m.is_one() {
                parts.push(mag.to_string());
            }
            for (v, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => parts.push(table.name(v).to_string()),
                    _ => parts.push(format!("{}^{e}", table.name(v))),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("polynomials over different rings")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("polynomials over different rings")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("polynomials over different rings")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&self.field().from_i64(-1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(field: Field, names: &[&str]) -> Arc<PolyRing> {
        PolyRing::from_names(field, names).unwrap()
    }

    #[test]
    fn addition_cancels_and_respects_characteristic() {
        let r = ring(Field::Rationals, &["x", "y"]);
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        assert_eq!(&(&x + &y) + &(-&x), y);
        assert_eq!(&x + &Polynomial::zero(&r), x);

        let r3 = ring(Field::prime(3).unwrap(), &["x"]);
        let x = Polynomial::var(&r3, 0);
        let x2 = &x * &x;
        assert!((&x2 + &x2.scale(&r3.field().from_i64(2))).is_zero());
    }

    #[test]
    fn products() {
        let r = ring(Field::Rationals, &["x", "y"]);
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        assert_eq!((&(&x + &y) * &(&x - &y)).to_string(), "x^2 - y^2");
        assert_eq!(&x * &Polynomial::one(&r), x);

        let r2 = ring(Field::prime(2).unwrap(), &["x", "y"]);
        let s = &Polynomial::var(&r2, 0) + &Polynomial::var(&r2, 1);
        assert_eq!((&s * &s).to_string(), "x^2 + y^2");
    }

    #[test]
    fn mismatched_rings_are_rejected() {
        let a = ring(Field::Rationals, &["x"]);
        let b = ring(Field::Rationals, &["y"]);
        let c = ring(Field::prime(5).unwrap(), &["x"]);
        assert!(Polynomial::var(&a, 0).try_add(&Polynomial::var(&b, 0)).is_err());
        assert!(Polynomial::var(&a, 0).try_mul(&Polynomial::var(&c, 0)).is_err());
    }

    #[test]
    fn derivatives_in_characteristic_three() {
        let r = ring(Field::prime(3).unwrap(), &["x", "y", "z"]);
        let [x, y, z] = [0, 1, 2].map(|i| Polynomial::var(&r, i));
        let h = &(&x.pow(3) + &y.pow(3)) + &z.pow(2);
        assert!(h.partial_derivative(0).unwrap().is_zero());
        assert_eq!(h.partial_derivative(2).unwrap().to_string(), "2*z");
        assert!(Polynomial::from_i64(&r, 5).partial_derivative(0).unwrap().is_zero());
        assert!(h.partial_derivative(3).is_err());
    }

    #[test]
    fn substitution_examples() {
        let r = ring(Field::Rationals, &["x", "y"]);
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let img = &x + &y.pow(2);
        let out = x.pow(2).substitute(&[img.clone(), y.clone()]).unwrap();
        assert_eq!(out, &img * &img);
        assert_eq!(out.to_string(), "y^4 + 2*x*y^2 + x^2");
        let f = &(&x + &y) + &Polynomial::one(&r);
        assert_eq!(f.substitute(&[x.clone(), y.clone()]).unwrap(), f);
        let z = Polynomial::zero(&r);
        assert!(f.substitute(&[z.clone(), z]).unwrap().is_one());
        assert!(f.substitute(&[x]).is_err());
    }

    #[test]
    fn evaluation() {
        let r = ring(Field::Rationals, &["x", "y"]);
        let f = &Polynomial::var(&r, 0).pow(2) + &Polynomial::var(&r, 1);
        let q = r.field();
        assert_eq!(f.evaluate(&[q.from_i64(1), q.from_i64(2)]).unwrap(), q.from_i64(3));
        let g = &f + &Polynomial::from_i64(&r, 7);
        assert_eq!(g.evaluate(&[q.zero(), q.zero()]).unwrap(), g.constant_term());
        assert!(f.evaluate(&[q.zero()]).is_err());

        let r3 = ring(Field::prime(3).unwrap(), &["x"]);
        let c = Polynomial::var(&r3, 0).pow(3);
        assert_eq!(c.evaluate(&[r3.field().from_i64(2)]).unwrap(), FieldElement::Residue(2));
    }

    #[test]
    fn exact_division() {
        let r = ring(Field::Rationals, &["x", "y"]);
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let d = &x + &y;
        let q = &(&x * &x) - &y;
        assert_eq!((&d * &q).div_exact(&d).unwrap(), q);
        assert!((&q + &Polynomial::one(&r)).div_exact(&x).is_none());
    }

    #[test]
    fn rendering_uses_signs_and_powers() {
        let r = ring(Field::Rationals, &["x", "y"]);
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let f = &(&x.pow(3).scale(&r.field().from_i64(-2)) + &y) - &Polynomial::one(&r);
        assert_eq!(f.to_string(), "-2*x^3 + y - 1");
        let half = r.field().div(&r.field().one(), &r.field().from_i64(2)).unwrap();
        assert_eq!(x.scale(&half).to_string(), "1/2*x");
    }
}
