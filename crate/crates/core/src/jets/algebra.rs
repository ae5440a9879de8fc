use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groebner::IdealPresentation;
use crate::polyring::{PolyRing, Polynomial};

/// `k[x_1..x_n] / I` given by a ring and relation generators.
#[derive(Debug, Clone)]
pub struct PresentedAlgebra {
    ring: Arc<PolyRing>,
    relations: IdealPresentation,
}

impl PartialEq for PresentedAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.relations.generators() == other.relations.generators()
    }
}

impl Eq for PresentedAlgebra {}

impl PresentedAlgebra {
    pub fn new(ring: &Arc<PolyRing>, relations: impl IntoIterator<Item = Polynomial>) -> Result<Arc<Self>> {
        let relations = IdealPresentation::new(ring, relations)?;
        Ok(Arc::new(PresentedAlgebra { ring: ring.clone(), relations }))
    }

    pub fn free(ring: &Arc<PolyRing>) -> Arc<Self> {
        Arc::new(PresentedAlgebra { ring: ring.clone(), relations: IdealPresentation::zero(ring) })
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn relations(&self) -> &IdealPresentation {
        &self.relations
    }

    pub fn is_free(&self) -> bool {
        self.relations.is_zero()
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn var(&self, i: usize) -> Polynomial {
        Polynomial::var(&self.ring, i)
    }

    /// Canonical representative modulo the relations.
    pub fn reduce(&self, f: &Polynomial) -> Result<Polynomial> {
        PolyRing::check_same(&self.ring, f.ring())?;
        if self.is_free() {
            return Ok(f.clone());
        }
        self.relations.basis()?.normal_form(f)
    }

    /// Whether `f` vanishes in the algebra.
    pub fn is_zero(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.reduce(f)?.is_zero())
    }
}

impl fmt::Display for PresentedAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_free() {
            write!(f, "{}", self.ring)
        } else {
            write!(f, "{}/{}", self.ring, self.relations)
        }
    }
}

/// Algebra morphism given by the images of the source variables, stored as
/// normal forms in the target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraMorphism {
    source: Arc<PresentedAlgebra>,
    target: Arc<PresentedAlgebra>,
    images: Vec<Polynomial>,
}

impl AlgebraMorphism {
    /// Checks arity, rings and that every source relation maps to zero.
    pub fn new(source: &Arc<PresentedAlgebra>, target: &Arc<PresentedAlgebra>, images: Vec<Polynomial>) -> Result<Self> {
        let phi = Self::unchecked(source, target, images)?;
        for h in source.relations.generators() {
            let img = h.substitute(&phi.images)?;
            if !target.is_zero(&img)? {
                return Err(Error::IllFormedMorphism(format!("relation {h} maps to {img}, which is not zero in the target")));
            }
        }
        Ok(phi)
    }

    /// Builds without the relation check; used where preservation holds by
    /// construction.
    pub(crate) fn unchecked(source: &Arc<PresentedAlgebra>, target: &Arc<PresentedAlgebra>, images: Vec<Polynomial>) -> Result<Self> {
        if images.len() != source.nvars() {
            return Err(Error::LengthMismatch { expected: source.nvars(), found: images.len() });
        }
        let images = images.iter().map(|p| target.reduce(p)).collect::<Result<Vec<_>>>()?;
        Ok(AlgebraMorphism { source: source.clone(), target: target.clone(), images })
    }

    pub fn identity(algebra: &Arc<PresentedAlgebra>) -> Self {
        let images = (0..algebra.nvars()).map(|i| algebra.var(i)).collect();
        AlgebraMorphism { source: algebra.clone(), target: algebra.clone(), images }
    }

    pub fn source(&self) -> &Arc<PresentedAlgebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<PresentedAlgebra> {
        &self.target
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    pub fn image(&self, i: usize) -> &Polynomial {
        &self.images[i]
    }

    pub fn is_endomorphism(&self) -> bool {
        self.source == self.target
    }

    pub fn is_identity(&self) -> bool {
        self.is_endomorphism() && self.images.iter().enumerate().all(|(i, p)| *p == self.source.var(i))
    }

    /// Image of a source element, reduced in the target.
    pub fn apply(&self, f: &Polynomial) -> Result<Polynomial> {
        PolyRing::check_same(self.source.ring(), f.ring())?;
        let img = f.substitute(&self.images)?;
        // a constant over a zero-variable source lands in the source ring
        let img = if self.source.nvars() == 0 { Polynomial::constant(self.target.ring(), img.constant_term()) } else { img };
        self.target.reduce(&img)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &AlgebraMorphism) -> Result<AlgebraMorphism> {
        if other.target != self.source {
            return Err(Error::RingMismatch(format!("cannot compose: {} is not {}", other.target, self.source)));
        }
        let images = other.images.iter().map(|p| self.apply(p)).collect::<Result<Vec<_>>>()?;
        Ok(AlgebraMorphism { source: other.source.clone(), target: self.target.clone(), images })
    }
}

impl fmt::Display for AlgebraMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let table = self.source.ring().table();
        let maps: Vec<String> = self.images.iter().enumerate().map(|(i, p)| format!("{} -> {}", table.name(i), p)).collect();
        write!(f, "{{ {} }}", maps.join("; "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::Field;

    #[test]
    fn relation_preservation_is_checked() {
        let r = PolyRing::from_names(Field::Rationals, &["x", "y"]).unwrap();
        let (x, y) = (Polynomial::var(&r, 0), Polynomial::var(&r, 1));
        let b = PresentedAlgebra::new(&r, [&y - &(&x * &x)]).unwrap();
        let neg = AlgebraMorphism::new(&b, &b, vec![-&x, y.clone()]);
        assert!(neg.is_ok());
        let bad = AlgebraMorphism::new(&b, &b, vec![&x + &Polynomial::one(&r), y.clone()]);
        assert!(matches!(bad, Err(Error::IllFormedMorphism(_))));
        // images are canonical: x^2 becomes y
        let sq = AlgebraMorphism::new(&b, &b, vec![x.clone(), &x * &x]).unwrap();
        assert_eq!(sq, AlgebraMorphism::identity(&b));
    }

    #[test]
    fn composition_applies_right_factor_first() {
        let r = PolyRing::from_names(Field::Rationals, &["x", "y"]).unwrap();
        let (x, y) = (Polynomial::var(&r, 0), Polynomial::var(&r, 1));
        let b = PresentedAlgebra::free(&r);
        let a = AlgebraMorphism::new(&b, &b, vec![&x + &(&y * &y), y.clone()]).unwrap();
        let c = AlgebraMorphism::new(&b, &b, vec![y.clone(), x.clone()]).unwrap();
        // (a∘c)(x) = a(y) = y, (a∘c)(y) = a(x) = x + y^2
        let ac = a.compose(&c).unwrap();
        assert_eq!(ac.images(), &[y.clone(), &x + &(&y * &y)]);
        assert_eq!(ac.apply(&x).unwrap(), a.apply(&c.apply(&x).unwrap()).unwrap());
    }
}
