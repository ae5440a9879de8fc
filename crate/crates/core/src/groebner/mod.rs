//! Buchberger-based ideal arithmetic over a [`PolyRing`].
//!
//! Reduced bases are unique for a given ideal and order, so every normal
//! form computed here is canonical and downstream reports are stable.

mod buchberger;
mod ideal;
mod order;

use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::polyring::{PolyRing, Polynomial};

use buchberger::{reduce, sort_terms, Terms};

pub use ideal::{
    ideal_intersection, ideal_membership, ideal_power, ideal_quotient, ideals_equal, is_zero_dimensional, normal_form,
};
pub use order::MonomialOrder;

/// Generators of an ideal of a polynomial ring. Zero and duplicate
/// generators are dropped on construction.
#[derive(Clone)]
pub struct IdealPresentation {
    ring: Arc<PolyRing>,
    generators: Vec<Polynomial>,
    grevlex: OnceLock<Arc<GroebnerBasis>>,
}

impl fmt::Debug for IdealPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IdealPresentation({self})")
    }
}

impl fmt::Display for IdealPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(ToString::to_string).collect();
        write!(f, "({})", gens.join(", "))
    }
}

impl IdealPresentation {
    pub fn new(ring: &Arc<PolyRing>, generators: impl IntoIterator<Item = Polynomial>) -> Result<Self> {
        let mut gens: Vec<Polynomial> = Vec::new();
        for g in generators {
            PolyRing::check_same(ring, g.ring())?;
            if !g.is_zero() && !gens.contains(&g) {
                gens.push(g);
            }
        }
        Ok(IdealPresentation { ring: ring.clone(), generators: gens, grevlex: OnceLock::new() })
    }

    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        IdealPresentation { ring: ring.clone(), generators: Vec::new(), grevlex: OnceLock::new() }
    }

    pub fn unit(ring: &Arc<PolyRing>) -> Self {
        IdealPresentation { ring: ring.clone(), generators: vec![Polynomial::one(ring)], grevlex: OnceLock::new() }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    /// Ideal sum: the concatenated generator lists.
    pub fn sum(&self, other: &IdealPresentation) -> Result<IdealPresentation> {
        PolyRing::check_same(&self.ring, &other.ring)?;
        IdealPresentation::new(&self.ring, self.generators.iter().chain(&other.generators).cloned())
    }

    /// Cached reduced grevlex basis.
    pub fn basis(&self) -> Result<Arc<GroebnerBasis>> {
        if let Some(b) = self.grevlex.get() {
            return Ok(b.clone());
        }
        let b = Arc::new(buchberger_reduced(self, &MonomialOrder::Grevlex)?);
        Ok(self.grevlex.get_or_init(|| b).clone())
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        self.basis()?.contains(f)
    }
}

/// A reduced Gröbner basis: monic, inter-reduced, sorted ascending by
/// leading monomial.
#[derive(Clone)]
pub struct GroebnerBasis {
    ring: Arc<PolyRing>,
    order: MonomialOrder,
    elements: Vec<Terms>,
}

impl fmt::Debug for GroebnerBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.polynomials().iter().map(ToString::to_string).collect();
        write!(f, "GroebnerBasis[{}]", gens.join(", "))
    }
}

/// Reduced basis of `ideal` under `order`.
pub fn buchberger_reduced(ideal: &IdealPresentation, order: &MonomialOrder) -> Result<GroebnerBasis> {
    let ring = ideal.ring.clone();
    let mut gens: Vec<Terms> = ideal
        .generators
        .iter()
        .map(|g| sort_terms(g.terms().to_vec(), order))
        .collect();
    if let Some(seed) = ring.config().shuffle_seed {
        gens.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    let elements = buchberger::groebner(ring.field(), order, gens, ring.config())?;
    Ok(GroebnerBasis { ring, order: order.clone(), elements })
}

impl GroebnerBasis {
    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.elements.len() == 1 && self.elements[0][0].0.is_one()
    }

    /// Basis elements as canonical polynomials, in basis order.
    pub fn polynomials(&self) -> Vec<Polynomial> {
        self.elements.iter().map(|t| Polynomial::from_terms(&self.ring, t.iter().cloned())).collect()
    }

    /// Leading monomials under the basis order.
    pub fn leading_monomials(&self) -> Vec<&crate::polyring::Monomial> {
        self.elements.iter().map(|t| &t[0].0).collect()
    }

    /// Remainder of multivariate division by the basis.
    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        PolyRing::check_same(&self.ring, f.ring())?;
        if f.is_zero() {
            return Ok(f.clone());
        }
        let terms = if self.order == MonomialOrder::Grevlex {
            f.terms().to_vec()
        } else {
            sort_terms(f.terms().to_vec(), &self.order)
        };
        let r = reduce(self.ring.field(), &self.order, terms, &self.elements);
        Ok(Polynomial::from_terms(&self.ring, r))
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }
}
