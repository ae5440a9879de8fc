//! Thickened quotients `B/𝔭^s`, jet fibers over them and the first-order
//! Taylor morphism `f ↦ [f] + t·Σ_j [∂f/∂x_j]·x_{j,1}`.
//!
//! Everything here works at maximal sites with rational points, where the
//! localized objects coincide with plain quotients.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groebner::{ideal_power, GroebnerBasis, IdealPresentation};
use crate::jets::{jet_morphism_between, jet_presentation, AlgebraMorphism, JetPresentation};
use crate::localmem::{check_characteristic, HypothesisMode, PrimeSite};
use crate::polyring::{Field, FieldElement, Polynomial};

fn require_maximal(site: &PrimeSite) -> Result<()> {
    if !site.is_maximal() {
        return Err(Error::NonMaximalSite(format!("`{}` is not declared maximal", site.name())));
    }
    Ok(())
}

fn require_level(s: u32) -> Result<()> {
    if s == 0 {
        return Err(Error::InvalidArgument("thickening level must be at least 1".into()));
    }
    Ok(())
}

/// `B / 𝔭^s` at a maximal site.
#[derive(Debug, Clone)]
pub struct ThickenedQuotient {
    site: PrimeSite,
    level: u32,
    ideal: IdealPresentation,
    basis: Arc<GroebnerBasis>,
}

pub fn thickened_quotient(site: &PrimeSite, s: u32) -> Result<ThickenedQuotient> {
    require_maximal(site)?;
    require_level(s)?;
    let ideal = site.power(s)?;
    let basis = ideal.basis()?;
    Ok(ThickenedQuotient { site: site.clone(), level: s, ideal, basis })
}

impl ThickenedQuotient {
    pub fn site(&self) -> &PrimeSite {
        &self.site
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn ideal(&self) -> &IdealPresentation {
        &self.ideal
    }

    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        self.basis.normal_form(f)
    }
}

/// `L_s(B) ⊗_B B/𝔭^m`: the jet algebra modulo the level-0 copy of `𝔭^m`.
#[derive(Debug, Clone)]
pub struct FiberPresentation {
    jets: JetPresentation,
    quotient: ThickenedQuotient,
    ideal: IdealPresentation,
    basis: Arc<GroebnerBasis>,
}

pub fn fiber_presentation(site: &PrimeSite, jet_order: usize, thick_level: u32) -> Result<FiberPresentation> {
    if jet_order == 0 {
        return Err(Error::InvalidArgument("fiber jet order must be at least 1".into()));
    }
    let quotient = thickened_quotient(site, thick_level)?;
    let jets = jet_presentation(site.algebra(), jet_order)?;
    let base_power = IdealPresentation::new(site.algebra().ring(), site.generators().iter().cloned())?;
    let lifted = ideal_power(&base_power, thick_level)
        .generators()
        .iter()
        .map(|g| jets.level0(g))
        .collect::<Result<Vec<_>>>()?;
    let ideal = IdealPresentation::new(jets.ring(), lifted)?.sum(jets.jet_ideal())?;
    let basis = ideal.basis()?;
    Ok(FiberPresentation { jets, quotient, ideal, basis })
}

impl FiberPresentation {
    pub fn jets(&self) -> &JetPresentation {
        &self.jets
    }

    pub fn quotient(&self) -> &ThickenedQuotient {
        &self.quotient
    }

    pub fn ideal(&self) -> &IdealPresentation {
        &self.ideal
    }

    pub fn basis(&self) -> &GroebnerBasis {
        &self.basis
    }

    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        self.basis.normal_form(f)
    }
}

/// `a0 + t·a1` with both components reduced in the fiber.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaylorValue {
    pub a0: Polynomial,
    pub a1: Polynomial,
}

impl TaylorValue {
    pub fn is_zero(&self) -> bool {
        self.a0.is_zero() && self.a1.is_zero()
    }
}

impl fmt::Display for TaylorValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + t*({})", self.a0, self.a1)
    }
}

/// `T_{𝔭,s}`, valued in the first jet fiber over `B/𝔭^s`.
#[derive(Debug, Clone)]
pub struct TaylorMap {
    fiber: FiberPresentation,
}

impl TaylorMap {
    pub fn new(site: &PrimeSite, s: u32) -> Result<Self> {
        Ok(TaylorMap { fiber: fiber_presentation(site, 1, s)? })
    }

    pub fn fiber(&self) -> &FiberPresentation {
        &self.fiber
    }

    pub fn order(&self) -> u32 {
        self.fiber.quotient.level
    }

    pub fn image(&self, f: &Polynomial) -> Result<TaylorValue> {
        let jets = &self.fiber.jets;
        let a0 = self.fiber.normal_form(&jets.level0(f)?)?;
        let mut a1 = Polynomial::zero(jets.ring());
        for j in 0..jets.base().nvars() {
            let d = jets.level0(&f.partial_derivative(j)?)?;
            a1 = &a1 + &(&d * &jets.var(j, 1));
        }
        let a1 = self.fiber.normal_form(&a1)?;
        Ok(TaylorValue { a0, a1 })
    }

    /// `L_1(σ) ⊗ id` applied to a value.
    pub fn act(&self, l1_sigma: &AlgebraMorphism, value: &TaylorValue) -> Result<TaylorValue> {
        let a0 = self.fiber.normal_form(&l1_sigma.apply(&value.a0)?)?;
        let a1 = self.fiber.normal_form(&l1_sigma.apply(&value.a1)?)?;
        Ok(TaylorValue { a0, a1 })
    }
}

pub fn taylor_image(f: &Polynomial, site: &PrimeSite, s: u32) -> Result<TaylorValue> {
    TaylorMap::new(site, s)?.image(f)
}

/// Whether `f` lies in the kernel of `T_{𝔭,s}`; the kernel is `𝔭^(s+1)`
/// when the characteristic is zero or exceeds `s`.
pub fn taylor_kernel_member(f: &Polynomial, site: &PrimeSite, s: u32, mode: HypothesisMode) -> Result<bool> {
    check_characteristic(site.algebra().ring().field().characteristic(), s, mode)?;
    Ok(taylor_image(f, site, s)?.is_zero())
}

fn stabilizes(sigma: &AlgebraMorphism, site: &PrimeSite) -> Result<bool> {
    for g in site.generators() {
        if !site.contains(&sigma.apply(g)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `τ(σ)(T(f)) = T(σ(f))`.
pub fn taylor_equivariance(sigma: &AlgebraMorphism, f: &Polynomial, site: &PrimeSite, s: u32) -> Result<bool> {
    if !sigma.is_endomorphism() || sigma.source() != site.algebra() {
        return Err(Error::RingMismatch("the endomorphism does not act on the site's algebra".into()));
    }
    if !stabilizes(sigma, site)? {
        return Err(Error::NotStabilized { element: sigma.to_string(), site: site.name().to_string() });
    }
    let t = TaylorMap::new(site, s)?;
    let jets = &t.fiber.jets;
    let l1 = jet_morphism_between(sigma, jets, jets)?;
    let lhs = t.act(&l1, &t.image(f)?)?;
    let rhs = t.image(&sigma.apply(f)?)?;
    Ok(lhs == rhs)
}

fn rank(field: Field, mut rows: Vec<Vec<FieldElement>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = field.inv(&rows[r][c]).expect("pivot is nonzero");
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = field.mul(&rows[i][c], &inv);
                for k in c..ncols {
                    let sub = field.mul(&factor, &rows[r][k]);
                    rows[i][k] = field.sub(&rows[i][k], &sub);
                }
            }
        }
        r += 1;
    }
    r
}

/// `dim 𝔭/𝔭^2` at a rational point: the number of variables minus the rank
/// of the relation Jacobian there.
pub fn cotangent_dimension(site: &PrimeSite) -> Result<usize> {
    require_maximal(site)?;
    let point = site
        .rational_point()
        .ok_or_else(|| Error::MissingRationalPoint(format!("`{}` has no rational point", site.name())))?;
    let algebra = site.algebra();
    let field = algebra.ring().field();
    let mut rows = Vec::new();
    for h in algebra.relations().generators() {
        let row = (0..algebra.nvars())
            .map(|j| h.partial_derivative(j)?.evaluate(point))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(algebra.nvars() - rank(field, rows))
}

/// Number of free generators of the first jet fiber at a rational point,
/// when its reduced basis is a set of linear forms with distinct leading
/// variables; `None` when that shape is not detected.
pub fn free_fiber_rank(site: &PrimeSite) -> Result<Option<usize>> {
    if site.rational_point().is_none() {
        return Err(Error::MissingRationalPoint(format!("`{}` has no rational point", site.name())));
    }
    let fiber = fiber_presentation(site, 1, 1)?;
    let basis = fiber.basis();
    if basis.is_unit() {
        return Ok(None);
    }
    let mut leads: Vec<usize> = Vec::with_capacity(basis.len());
    for m in basis.leading_monomials() {
        if m.degree() != 1 {
            return Ok(None);
        }
        leads.push(m.pure_power_var().expect("degree-one monomial is a variable"));
    }
    leads.sort_unstable();
    leads.dedup();
    if leads.len() != basis.len() {
        return Ok(None);
    }
    Ok(Some(fiber.jets.ring().nvars() - leads.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jets::PresentedAlgebra;
    use crate::polyring::PolyRing;

    struct Fix {
        site: PrimeSite,
        vars: Vec<Polynomial>,
        sigma: AlgebraMorphism,
    }

    fn plane() -> Fix {
        let field = Field::prime(3).unwrap();
        let r = PolyRing::from_names(field, &["x", "y"]).unwrap();
        let b = PresentedAlgebra::free(&r);
        let vars = vec![b.var(0), b.var(1)];
        let origin = vec![field.zero(), field.zero()];
        let site = PrimeSite::new("p", &b, vars.clone(), true, Some(origin), None).unwrap();
        let sigma = AlgebraMorphism::new(&b, &b, vec![&vars[0] + &(&vars[1] * &vars[1]), vars[1].clone()]).unwrap();
        Fix { site, vars, sigma }
    }

    fn cusp() -> PrimeSite {
        let field = Field::prime(3).unwrap();
        let r = PolyRing::from_names(field, &["x", "y", "z"]).unwrap();
        let v: Vec<Polynomial> = (0..3).map(|i| Polynomial::var(&r, i)).collect();
        let h = &(&v[0].pow(3) + &v[1].pow(3)) + &v[2].pow(2);
        let b = PresentedAlgebra::new(&r, [h]).unwrap();
        PrimeSite::new("p", &b, v, true, Some(vec![field.zero(); 3]), None).unwrap()
    }

    fn parabola() -> PrimeSite {
        let r = PolyRing::from_names(Field::Rationals, &["x", "y"]).unwrap();
        let (x, y) = (Polynomial::var(&r, 0), Polynomial::var(&r, 1));
        let b = PresentedAlgebra::new(&r, [&y - &(&x * &x)]).unwrap();
        PrimeSite::new("p", &b, vec![x, y], true, Some(vec![r.field().zero(); 2]), None).unwrap()
    }

    #[test]
    fn thickened_normal_forms() {
        let fix = plane();
        let (x, one) = (&fix.vars[0], Polynomial::one(fix.vars[0].ring()));
        let q = thickened_quotient(&fix.site, 2).unwrap();
        let f = &(&(x * x) + x) + &one;
        assert_eq!(q.normal_form(&f).unwrap(), x + &one);
        let q1 = thickened_quotient(&fix.site, 1).unwrap();
        assert_eq!(q1.normal_form(&f).unwrap(), one);
        let b = cusp();
        let z = Polynomial::var(b.algebra().ring(), 2);
        assert!(thickened_quotient(&b, 2).unwrap().normal_form(&(&z * &z)).unwrap().is_zero());
    }

    #[test]
    fn fibers_are_free_at_the_origin() {
        let a = fiber_presentation(&plane().site, 1, 1).unwrap();
        let shown: Vec<String> = a.basis().polynomials().iter().map(ToString::to_string).collect();
        assert_eq!(shown, ["y0", "x0"]);
        let b = fiber_presentation(&cusp(), 1, 1).unwrap();
        assert_eq!(b.basis().len(), 3);
        assert!(b.basis().leading_monomials().iter().all(|m| m.degree() == 1));
    }

    #[test]
    fn taylor_images() {
        let fix = plane();
        let x = &fix.vars[0];
        let t1 = taylor_image(x, &fix.site, 1).unwrap();
        assert_eq!(t1.to_string(), "0 + t*(x1)");
        assert!(taylor_image(&(x * x), &fix.site, 1).unwrap().is_zero());
        let t2 = taylor_image(&(x * x), &fix.site, 2).unwrap();
        assert!(t2.a0.is_zero());
        assert_eq!(t2.a1.to_string(), "2*x0*x1");
    }

    #[test]
    fn kernel_examples() {
        let fix = plane();
        let y2 = &fix.vars[1] * &fix.vars[1];
        assert!(taylor_kernel_member(&y2, &fix.site, 1, HypothesisMode::Enforce).unwrap());
        assert!(!taylor_kernel_member(&y2, &fix.site, 2, HypothesisMode::Enforce).unwrap());
        let zero = Polynomial::zero(y2.ring());
        assert!(taylor_kernel_member(&zero, &fix.site, 2, HypothesisMode::Enforce).unwrap());
        assert!(matches!(
            taylor_kernel_member(&y2, &fix.site, 3, HypothesisMode::Enforce),
            Err(Error::CharTooSmall { .. })
        ));
    }

    #[test]
    fn equivariance_square() {
        let fix = plane();
        let x = &fix.vars[0];
        for s in 1..=2 {
            assert!(taylor_equivariance(&fix.sigma, x, &fix.site, s).unwrap());
            let id = AlgebraMorphism::identity(fix.site.algebra());
            assert!(taylor_equivariance(&id, x, &fix.site, s).unwrap());
        }
        let t = TaylorMap::new(&fix.site, 2).unwrap();
        let before = t.image(x).unwrap();
        let after = t.image(&fix.sigma.apply(x).unwrap()).unwrap();
        assert_eq!(before.to_string(), "x0 + t*(x1)");
        assert_eq!(after.to_string(), "x0 + t*(2*y0*y1 + x1)");
    }

    #[test]
    fn cotangent_and_fiber_ranks() {
        let a = plane().site;
        assert_eq!(cotangent_dimension(&a).unwrap(), 2);
        assert_eq!(free_fiber_rank(&a).unwrap(), Some(2));
        let b = cusp();
        assert_eq!(cotangent_dimension(&b).unwrap(), 3);
        assert_eq!(free_fiber_rank(&b).unwrap(), Some(3));
        let c = parabola();
        assert_eq!(cotangent_dimension(&c).unwrap(), 1);
        assert_eq!(free_fiber_rank(&c).unwrap(), Some(1));
    }
}
