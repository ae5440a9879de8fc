use std::sync::Arc;

use crate::error::Result;
use crate::polyring::{PolyRing, Polynomial};

use super::{buchberger_reduced, GroebnerBasis, IdealPresentation, MonomialOrder};

/// Remainder of `f` modulo `basis`.
pub fn normal_form(f: &Polynomial, basis: &GroebnerBasis) -> Result<Polynomial> {
    basis.normal_form(f)
}

pub fn ideal_membership(f: &Polynomial, ideal: &IdealPresentation) -> Result<bool> {
    PolyRing::check_same(ideal.ring(), f.ring())?;
    if f.is_zero() {
        return Ok(true);
    }
    if ideal.is_zero() {
        return Ok(false);
    }
    ideal.contains(f)
}

/// All `s`-fold products of generators; the unit ideal for `s = 0`.
pub fn ideal_power(ideal: &IdealPresentation, s: u32) -> IdealPresentation {
    let ring = ideal.ring();
    if s == 0 {
        return IdealPresentation::unit(ring);
    }
    let gens = ideal.generators();
    // products over non-decreasing index sequences
    let mut layer: Vec<(usize, Polynomial)> = (0..gens.len()).map(|i| (i, gens[i].clone())).collect();
    for _ in 1..s {
        let mut next = Vec::new();
        for (last, p) in &layer {
            for (k, g) in gens.iter().enumerate().skip(*last) {
                next.push((k, p * g));
            }
        }
        layer = next;
    }
    IdealPresentation::new(ring, layer.into_iter().map(|(_, p)| p)).expect("same ring")
}

/// `J1 ∩ J2` by eliminating a tag variable `w` from `w·J1 + (1 − w)·J2`.
pub fn ideal_intersection(a: &IdealPresentation, b: &IdealPresentation) -> Result<IdealPresentation> {
    PolyRing::check_same(a.ring(), b.ring())?;
    let ring = a.ring();
    if a.is_zero() || b.is_zero() {
        return Ok(IdealPresentation::zero(ring));
    }
    let tagged: Arc<PolyRing> = ring.with_leading_vars(&["_w"]);
    let lift: Vec<usize> = (1..=ring.nvars()).collect();
    let w = Polynomial::var(&tagged, 0);
    let one_minus_w = &Polynomial::one(&tagged) - &w;
    let gens = a
        .generators()
        .iter()
        .map(|g| &w * &g.map_vars(&tagged, &lift))
        .chain(b.generators().iter().map(|g| &one_minus_w * &g.map_vars(&tagged, &lift)));
    let joint = IdealPresentation::new(&tagged, gens)?;
    let gb = buchberger_reduced(&joint, &MonomialOrder::Elimination(vec![0]))?;
    let mut drop: Vec<Option<usize>> = vec![None];
    drop.extend((0..ring.nvars()).map(Some));
    let kept = gb.polynomials().into_iter().filter_map(|p| p.project_vars(ring, &drop));
    IdealPresentation::new(ring, kept)
}

/// `(J : f)`, computed as `(J ∩ (f)) / f`.
pub fn ideal_quotient(ideal: &IdealPresentation, f: &Polynomial) -> Result<IdealPresentation> {
    PolyRing::check_same(ideal.ring(), f.ring())?;
    assert!(!f.is_zero(), "quotient by the zero polynomial");
    let principal = IdealPresentation::new(ideal.ring(), [f.clone()])?;
    let meet = ideal_intersection(ideal, &principal)?;
    let gens = meet
        .generators()
        .iter()
        .map(|g| g.div_exact(f).expect("intersection with (f) is divisible by f"));
    IdealPresentation::new(ideal.ring(), gens)
}

/// True when the quotient ring is finite-dimensional: every variable has a
/// pure power among the leading monomials of the reduced basis.
pub fn is_zero_dimensional(ideal: &IdealPresentation) -> Result<bool> {
    let n = ideal.ring().nvars();
    if ideal.is_zero() {
        return Ok(n == 0);
    }
    let gb = ideal.basis()?;
    if gb.is_unit() {
        return Ok(true);
    }
    let mut covered = vec![false; n];
    for m in gb.leading_monomials() {
        if let Some(v) = m.pure_power_var() {
            covered[v] = true;
        }
    }
    Ok(covered.into_iter().all(|c| c))
}

/// Ideal equality by mutual membership of generators.
pub fn ideals_equal(a: &IdealPresentation, b: &IdealPresentation) -> Result<bool> {
    PolyRing::check_same(a.ring(), b.ring())?;
    for g in a.generators() {
        if !ideal_membership(g, b)? {
            return Ok(false);
        }
    }
    for g in b.generators() {
        if !ideal_membership(g, a)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::Field;

    fn ring(names: &[&str]) -> (Arc<PolyRing>, Vec<Polynomial>) {
        let r = PolyRing::from_names(Field::Rationals, names).unwrap();
        let v = (0..names.len()).map(|i| Polynomial::var(&r, i)).collect();
        (r, v)
    }

    fn ideal(r: &Arc<PolyRing>, gens: &[Polynomial]) -> IdealPresentation {
        IdealPresentation::new(r, gens.iter().cloned()).unwrap()
    }

    #[test]
    fn membership_examples() {
        let (r, v) = ring(&["x", "y"]);
        let (x, y) = (&v[0], &v[1]);
        let m = ideal(&r, &v);
        assert!(ideal_membership(&(&(x * x) * y), &m).unwrap());
        assert!(!ideal_membership(&(x + &Polynomial::one(&r)), &m).unwrap());
        assert!(!ideal_membership(&(y * y), &ideal_power(&m, 3)).unwrap());
    }

    #[test]
    fn powers() {
        let (r, v) = ring(&["x", "y", "z"]);
        let m2 = ideal_power(&ideal(&r, &v[..2]), 2);
        let expect = [&v[0] * &v[0], &v[0] * &v[1], &v[1] * &v[1]];
        assert_eq!(m2.generators(), &expect);
        assert!(ideal_power(&m2, 0).generators()[0].is_one());
        assert_eq!(ideal_power(&ideal(&r, &v), 2).generators().len(), 6);
        assert_eq!(ideal_power(&ideal(&r, &v), 1).generators(), &v[..]);
    }

    #[test]
    fn intersections() {
        let (r, v) = ring(&["x", "y"]);
        let (x, y) = (&v[0], &v[1]);
        let meet = ideal_intersection(&ideal(&r, &[x.clone()]), &ideal(&r, &[y.clone()])).unwrap();
        assert_eq!(meet.generators(), &[x * y]);
        let j = ideal(&r, &[&(x * x) - y, x * y]);
        assert!(ideals_equal(&ideal_intersection(&j, &j).unwrap(), &j).unwrap());
        let unit = IdealPresentation::unit(&r);
        assert!(ideals_equal(&ideal_intersection(&j, &unit).unwrap(), &j).unwrap());
    }

    #[test]
    fn quotients() {
        let (r, v) = ring(&["x", "y"]);
        let (x, y) = (&v[0], &v[1]);
        let one = Polynomial::one(&r);
        let x2 = x * x;
        assert!(ideals_equal(&ideal_quotient(&ideal(&r, &[x2.clone()]), x).unwrap(), &ideal(&r, &[x.clone()])).unwrap());
        assert!(ideals_equal(&ideal_quotient(&ideal(&r, &[x * y]), x).unwrap(), &ideal(&r, &[y.clone()])).unwrap());
        let j = ideal(&r, &[&x2 * &(&one + y)]);
        let q = ideal_quotient(&j, &x2).unwrap();
        assert!(ideals_equal(&q, &ideal(&r, &[&one + y])).unwrap());
    }

    #[test]
    fn zero_dimensionality() {
        let (r, v) = ring(&["x", "y"]);
        assert!(is_zero_dimensional(&ideal(&r, &v)).unwrap());
        assert!(!is_zero_dimensional(&ideal(&r, &v[..1])).unwrap());
        assert!(is_zero_dimensional(&IdealPresentation::unit(&r)).unwrap());
        assert!(!is_zero_dimensional(&IdealPresentation::zero(&r)).unwrap());
    }
}
