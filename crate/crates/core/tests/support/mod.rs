//! Fixtures, random inputs and an independent membership oracle shared by
//! the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use jetram_core::jets::{AlgebraMorphism, PresentedAlgebra};
use jetram_core::localmem::PrimeSite;
use jetram_core::ramify::GroupAction;
use jetram_core::{Field, FieldElement, Monomial, PolyRing, Polynomial};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn vars(ring: &Arc<PolyRing>) -> Vec<Polynomial> {
    (0..ring.nvars()).map(|i| Polynomial::var(ring, i)).collect()
}

/// Random exponent vector of total degree exactly `d`.
pub fn random_monomial(rng: &mut ChaCha8Rng, n: usize, d: u32) -> Monomial {
    let mut e = vec![0u32; n];
    for _ in 0..d {
        e[rng.gen_range(0..n)] += 1;
    }
    Monomial::from_exponents(e)
}

fn random_coeff(rng: &mut ChaCha8Rng, field: Field) -> FieldElement {
    loop {
        let c = field.from_i64(rng.gen_range(-4..=4));
        if !c.is_zero() {
            return c;
        }
    }
}

/// Random polynomial with at most `terms` terms of degree `<= max_deg`.
pub fn random_poly(rng: &mut ChaCha8Rng, ring: &Arc<PolyRing>, max_deg: u32, terms: usize) -> Polynomial {
    let field = ring.field();
    let k = rng.gen_range(1..=terms);
    let t: Vec<_> = (0..k)
        .map(|_| {
            let d = rng.gen_range(0..=max_deg);
            (random_monomial(rng, ring.nvars(), d), random_coeff(rng, field))
        })
        .collect();
    Polynomial::from_terms(ring, t)
}

/// Random homogeneous polynomial of degree `d`.
pub fn random_form(rng: &mut ChaCha8Rng, ring: &Arc<PolyRing>, d: u32, terms: usize) -> Polynomial {
    let field = ring.field();
    let k = rng.gen_range(1..=terms);
    let t: Vec<_> = (0..k).map(|_| (random_monomial(rng, ring.nvars(), d), random_coeff(rng, field))).collect();
    Polynomial::from_terms(ring, t)
}

/// All monomials in `n` variables of total degree `d`.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Monomial> {
    fn go(i: usize, n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i + 1 == n {
            cur.push(left);
            out.push(Monomial::from_exponents(cur.clone()));
            cur.pop();
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e);
            go(i + 1, n, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Monomial::from_exponents(Vec::new()));
        }
        return out;
    }
    go(0, n, d, &mut Vec::new(), &mut out);
    out
}

/// Row-echelon span membership over the coefficient field. Rows and the
/// target are sparse maps from monomials to coefficients.
fn in_span(field: Field, rows: Vec<BTreeMap<Monomial, FieldElement>>, target: BTreeMap<Monomial, FieldElement>) -> bool {
    let mut pivots: Vec<(Monomial, BTreeMap<Monomial, FieldElement>)> = Vec::new();
    let reduce = |mut v: BTreeMap<Monomial, FieldElement>, pivots: &[(Monomial, BTreeMap<Monomial, FieldElement>)]| {
        for (pm, prow) in pivots {
            if let Some(c) = v.get(pm).cloned() {
                for (m, a) in prow {
                    let entry = v.entry(m.clone()).or_insert_with(|| field.zero());
                    *entry = field.sub(entry, &field.mul(&c, a));
                }
                v.retain(|_, a| !a.is_zero());
            }
        }
        v
    };
    for row in rows {
        let v = reduce(row, &pivots);
        if let Some((pm, pc)) = v.iter().next().map(|(m, c)| (m.clone(), c.clone())) {
            let inv = field.inv(&pc).unwrap();
            let v: BTreeMap<_, _> = v.into_iter().map(|(m, a)| (m, field.mul(&a, &inv))).collect();
            // keep pivots fully reduced against the new one
            for (_, prow) in pivots.iter_mut() {
                if let Some(c) = prow.get(&pm).cloned() {
                    for (m, a) in &v {
                        let entry = prow.entry(m.clone()).or_insert_with(|| field.zero());
                        *entry = field.sub(entry, &field.mul(&c, a));
                    }
                    prow.retain(|_, a| !a.is_zero());
                }
            }
            pivots.push((pm, v));
        }
    }
    reduce(target, &pivots).is_empty()
}

fn sparse(p: &Polynomial) -> BTreeMap<Monomial, FieldElement> {
    p.terms().iter().cloned().collect()
}

/// Whether `f` is a combination `Σ c·m·g` with every product of degree at
/// most `bound`. Sound for membership; complete for homogeneous inputs when
/// `bound = deg f`.
pub fn bounded_membership(f: &Polynomial, gens: &[Polynomial], bound: u32) -> bool {
    let ring = f.ring();
    let n = ring.nvars();
    let mut rows = Vec::new();
    for g in gens {
        let Some(dg) = g.total_degree() else { continue };
        for d in 0..=bound.saturating_sub(dg) {
            if dg + d > bound {
                break;
            }
            for m in monomials_of_degree(n, d) {
                rows.push(sparse(&g.mul_term(&m, &ring.field().one())));
            }
        }
    }
    in_span(ring.field(), rows, sparse(f))
}

pub fn gf(p: u32) -> Field {
    Field::prime(u64::from(p)).unwrap()
}

pub struct Fixture {
    pub action: GroupAction,
    pub site: PrimeSite,
    pub vars: Vec<Polynomial>,
}

fn fixture(field: Field, names: &[&str], relations: &[Polynomial], build: impl Fn(&[Polynomial]) -> Vec<Polynomial>, ring: Arc<PolyRing>) -> Fixture {
    let v = vars(&ring);
    let b = PresentedAlgebra::new(&ring, relations.iter().cloned()).unwrap();
    let sigma = AlgebraMorphism::new(&b, &b, build(&v)).unwrap();
    let action = GroupAction::new(&b, vec![("s".to_string(), sigma)]).unwrap();
    let point = vec![field.zero(); names.len()];
    let site = PrimeSite::new("p", &b, v.clone(), true, Some(point), None).unwrap();
    Fixture { action, site, vars: v }
}

/// `GF(3)[x,y]`, `σ: x ↦ x + y^2`, at the origin.
pub fn plane() -> Fixture {
    let ring = PolyRing::from_names(gf(3), &["x", "y"]).unwrap();
    fixture(gf(3), &["x", "y"], &[], |v| vec![&v[0] + &(&v[1] * &v[1]), v[1].clone()], ring)
}

/// `GF(3)[x,y,z]/(x^3 + y^3 + z^2)`, `σ: x ↦ x + z^2, y ↦ y − z^2`.
pub fn cusp() -> Fixture {
    let ring = PolyRing::from_names(gf(3), &["x", "y", "z"]).unwrap();
    let v = vars(&ring);
    let h = &(&v[0].pow(3) + &v[1].pow(3)) + &v[2].pow(2);
    fixture(
        gf(3),
        &["x", "y", "z"],
        &[h],
        |v| {
            let z2 = &v[2] * &v[2];
            vec![&v[0] + &z2, &v[1] - &z2, v[2].clone()]
        },
        ring,
    )
}

/// The swap of `x` and `y` over `GF(3)`.
pub fn swap() -> Fixture {
    let ring = PolyRing::from_names(gf(3), &["x", "y"]).unwrap();
    fixture(gf(3), &["x", "y"], &[], |v| vec![v[1].clone(), v[0].clone()], ring)
}

/// `GF(2)[x,y]`, `σ: x ↦ x + y^2`.
pub fn plane_gf2() -> Fixture {
    let ring = PolyRing::from_names(gf(2), &["x", "y"]).unwrap();
    fixture(gf(2), &["x", "y"], &[], |v| vec![&v[0] + &(&v[1] * &v[1]), v[1].clone()], ring)
}

pub fn all_fixtures() -> Vec<(&'static str, Fixture)> {
    vec![("plane", plane()), ("cusp", cusp()), ("swap", swap()), ("plane_gf2", plane_gf2())]
}
