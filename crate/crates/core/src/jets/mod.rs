//! Jet algebras `L_m(B)` of presented algebras, induced morphisms and the
//! structural maps between jet orders.
//!
//! Each base variable `x_i` of `B` is expanded into `x_{i,0}, …, x_{i,m}`.
//! The jet ideal is generated by the `t`-coefficients of the relations after
//! substituting `x_i ↦ Σ_j x_{i,j} t^j` modulo `t^(m+1)`.

mod algebra;

use std::sync::Arc;

use crate::error::{CapKind, Error, Result};
use crate::groebner::IdealPresentation;
use crate::localmem::{select_jacobian_columns, PrimeSite};
use crate::polyring::{PolyRing, Polynomial, TruncatedSeries, Variable, VariableTable};

pub use algebra::{AlgebraMorphism, PresentedAlgebra};

/// The `m`-th jet algebra of a base algebra, with the position of every
/// jet variable `x_{i,j}` in the jet ring.
#[derive(Debug, Clone)]
pub struct JetPresentation {
    base: Arc<PresentedAlgebra>,
    order: usize,
    algebra: Arc<PresentedAlgebra>,
    slots: Vec<Vec<usize>>,
}

impl JetPresentation {
    pub fn base(&self) -> &Arc<PresentedAlgebra> {
        &self.base
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn algebra(&self) -> &Arc<PresentedAlgebra> {
        &self.algebra
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        self.algebra.ring()
    }

    pub fn jet_ideal(&self) -> &IdealPresentation {
        self.algebra.relations()
    }

    /// Index of `x_{i,j}` in the jet ring.
    pub fn slot(&self, i: usize, j: usize) -> usize {
        self.slots[i][j]
    }

    pub fn var(&self, i: usize, j: usize) -> Polynomial {
        Polynomial::var(self.ring(), self.slots[i][j])
    }

    /// Renames a base polynomial into the level-0 jet variables.
    pub fn level0(&self, h: &Polynomial) -> Result<Polynomial> {
        PolyRing::check_same(self.base.ring(), h.ring())?;
        let map: Vec<usize> = self.slots.iter().map(|s| s[0]).collect();
        Ok(h.map_vars(self.ring(), &map))
    }

    /// The coefficients `g_0, …, g_m` of `h(Σ_j x_{i,j} t^j)`.
    pub fn expand(&self, h: &Polynomial) -> Result<Vec<Polynomial>> {
        PolyRing::check_same(self.base.ring(), h.ring())?;
        let m = self.order;
        let series = (0..self.base.nvars())
            .map(|i| TruncatedSeries::new((0..=m).map(|j| self.var(i, j)).collect()))
            .collect::<Result<Vec<_>>>()?;
        if series.is_empty() {
            let mut out = vec![Polynomial::zero(self.ring()); m + 1];
            out[0] = Polynomial::constant(self.ring(), h.constant_term());
            return Ok(out);
        }
        Ok(h.truncated_substitute(&series, m)?.into_coeffs())
    }
}

/// Jet table: every variable gains one more trailing index coordinate.
fn jet_table(base: &PolyRing, m: usize) -> Result<(VariableTable, Vec<Vec<usize>>)> {
    let mut vars = Vec::with_capacity(base.nvars() * (m + 1));
    for j in 0..=m {
        for v in base.table().vars() {
            let mut index = v.index.clone();
            index.push(j as u32);
            vars.push(Variable { base: v.base.clone(), position: v.position, index });
        }
    }
    let table = VariableTable::new(vars.clone())?;
    let n = base.nvars();
    let mut slots = vec![vec![0; m + 1]; n];
    for (k, v) in vars.iter().enumerate() {
        slots[k % n][k / n] = table.vars().iter().position(|w| w == v).expect("variable is in its table");
    }
    Ok((table, slots))
}

/// `L_m(B)`; for `m = 0` this is `B` itself.
pub fn jet_presentation(base: &Arc<PresentedAlgebra>, m: usize) -> Result<JetPresentation> {
    let n = base.nvars();
    if m == 0 {
        return Ok(JetPresentation { base: base.clone(), order: 0, algebra: base.clone(), slots: (0..n).map(|i| vec![i]).collect() });
    }
    let cfg = base.ring().config();
    if n * (m + 1) > cfg.max_vars {
        return Err(Error::ResourceCap(CapKind::Variables(cfg.max_vars)));
    }
    let (table, slots) = jet_table(base.ring(), m)?;
    let ring = PolyRing::with_config(base.ring().field(), table, cfg.clone());
    let mut jp = JetPresentation { base: base.clone(), order: m, algebra: PresentedAlgebra::free(&ring), slots };
    let mut gens = Vec::new();
    for h in base.relations().generators() {
        gens.extend(jp.expand(h)?);
    }
    jp.algebra = PresentedAlgebra::new(&ring, gens)?;
    Ok(jp)
}

/// The coefficients of `h` jet-expanded to order `m` over its own ring.
pub fn jet_expand(h: &Polynomial, m: usize) -> Result<Vec<Polynomial>> {
    let jp = jet_presentation(&PresentedAlgebra::free(h.ring()), m)?;
    jp.expand(h)
}

/// `L_m(φ)`, sending `y_{i,j}` to the `j`-th coefficient of the jet
/// expansion of `φ(y_i)`.
pub fn jet_morphism(phi: &AlgebraMorphism, m: usize) -> Result<AlgebraMorphism> {
    let source = jet_presentation(phi.source(), m)?;
    if phi.is_endomorphism() {
        return jet_morphism_between(phi, &source, &source);
    }
    let target = jet_presentation(phi.target(), m)?;
    jet_morphism_between(phi, &source, &target)
}

/// [`jet_morphism`] over presentations the caller already holds.
pub fn jet_morphism_between(phi: &AlgebraMorphism, source: &JetPresentation, target: &JetPresentation) -> Result<AlgebraMorphism> {
    if source.base() != phi.source() || target.base() != phi.target() || source.order() != target.order() {
        return Err(Error::RingMismatch("jet presentations do not match the morphism".into()));
    }
    let m = source.order();
    let mut images = vec![Polynomial::zero(target.ring()); source.ring().nvars()];
    for (i, p) in phi.images().iter().enumerate() {
        for (j, g) in target.expand(p)?.into_iter().enumerate() {
            images[source.slot(i, j)] = g;
        }
    }
    debug_assert!(m == 0 || images.len() == phi.source().nvars() * (m + 1));
    AlgebraMorphism::unchecked(source.algebra(), target.algebra(), images)
}

/// `μ_{m,s}: L_m(B) → L_s(B)`, `x_{i,j} ↦ x_{i,j}`.
pub fn jet_extension_mu(base: &Arc<PresentedAlgebra>, m: usize, s: usize) -> Result<AlgebraMorphism> {
    if s < m {
        return Err(Error::InvalidArgument(format!("jet extension needs m <= s, got m = {m}, s = {s}")));
    }
    jet_extension_mu_between(&jet_presentation(base, m)?, &jet_presentation(base, s)?)
}

pub fn jet_extension_mu_between(lower: &JetPresentation, upper: &JetPresentation) -> Result<AlgebraMorphism> {
    if lower.base() != upper.base() || lower.order() > upper.order() {
        return Err(Error::InvalidArgument("jet extension needs a lower and an upper presentation of one base".into()));
    }
    let mut images = vec![Polynomial::zero(upper.ring()); lower.ring().nvars()];
    for i in 0..lower.base().nvars() {
        for j in 0..=lower.order() {
            images[lower.slot(i, j)] = upper.var(i, j);
        }
    }
    AlgebraMorphism::unchecked(lower.algebra(), upper.algebra(), images)
}

/// `σ_m: L_m(B) → B`, `x_{i,0} ↦ x_i` and `x_{i,j} ↦ 0` for `j ≥ 1`.
pub fn jet_section_sigma(base: &Arc<PresentedAlgebra>, m: usize) -> Result<AlgebraMorphism> {
    let jp = jet_presentation(base, m)?;
    let mut images = vec![Polynomial::zero(base.ring()); jp.ring().nvars()];
    for i in 0..base.nvars() {
        images[jp.slot(i, 0)] = base.var(i);
    }
    AlgebraMorphism::unchecked(jp.algebra(), base, images)
}

/// The tower `L_1(B), L_1(L_1(B)), …` of length `t`.
pub fn iterate_first_jet_tower(base: &Arc<PresentedAlgebra>, t: usize) -> Result<Vec<JetPresentation>> {
    if t == 0 {
        return Err(Error::InvalidArgument("iteration count must be at least 1".into()));
    }
    let cap = base.ring().config().max_vars;
    let too_many = t >= usize::BITS as usize || base.nvars().checked_shl(t as u32).is_none_or(|v| v > cap);
    if too_many && base.nvars() > 0 {
        return Err(Error::ResourceCap(CapKind::Variables(cap)));
    }
    let mut tower: Vec<JetPresentation> = Vec::with_capacity(t);
    let mut current = base.clone();
    for _ in 0..t {
        let jp = jet_presentation(&current, 1)?;
        current = jp.algebra().clone();
        tower.push(jp);
    }
    Ok(tower)
}

/// `L_1` applied `t` times.
pub fn iterate_first_jet(base: &Arc<PresentedAlgebra>, t: usize) -> Result<JetPresentation> {
    Ok(iterate_first_jet_tower(base, t)?.pop().expect("nonempty tower"))
}

/// The extension `𝔭 L_m(B)`: level-0 images of the site generators over the
/// jet algebra. Never declared maximal; derivation columns move to level 0.
pub fn extend_prime(site: &PrimeSite, jp: &JetPresentation) -> Result<PrimeSite> {
    if site.algebra() != jp.base() {
        return Err(Error::RingMismatch(format!("site `{}` is not over the jet base", site.name())));
    }
    if jp.order() == 0 {
        return Ok(site.clone());
    }
    let gens = site.generators().iter().map(|g| jp.level0(g)).collect::<Result<Vec<_>>>()?;
    let columns = match site.derivation_columns() {
        Some(c) => Some(c.to_vec()),
        None => select_jacobian_columns(site).ok().map(|d| d.columns().to_vec()),
    };
    let columns = columns.map(|c| c.iter().map(|&i| jp.slot(i, 0)).collect());
    PrimeSite::new(site.name(), jp.algebra(), gens, false, None, columns)
}
