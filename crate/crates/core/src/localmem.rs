//! Membership in localized powers `𝔭^s B_𝔭` of a prime.
//!
//! Two routes are provided. The quotient route uses `f ∈ J B_𝔭` iff
//! `(J : f) ⊄ 𝔭`. The derivation route recurses on `s` using partial
//! derivatives along columns whose Jacobian minor is a unit at `𝔭`; it needs
//! characteristic zero or larger than `s` and a relation-free ambient ring.
//!
//! Primality of a declared site is trusted, not verified.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::groebner::{ideal_membership, ideal_power, ideal_quotient, is_zero_dimensional, IdealPresentation};
use crate::jets::PresentedAlgebra;
use crate::polyring::{FieldElement, Polynomial};

/// Largest generator count for the Jacobian column search.
pub const MAX_SITE_GENERATORS: usize = 8;

/// Whether a violated characteristic hypothesis is an error or is assumed
/// away.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HypothesisMode {
    #[default]
    Enforce,
    Assume,
}

/// A declared prime of a presented algebra.
#[derive(Debug, Clone)]
pub struct PrimeSite {
    name: String,
    algebra: Arc<PresentedAlgebra>,
    generators: Vec<Polynomial>,
    maximal: bool,
    point: Option<Vec<FieldElement>>,
    columns: Option<Vec<usize>>,
    ideal: IdealPresentation,
    powers: Arc<Mutex<BTreeMap<u32, IdealPresentation>>>,
}

impl PrimeSite {
    /// Validates the declaration: a maximal site must have a zero-dimensional
    /// ideal, a rational point must be a zero of generators and relations,
    /// and explicit columns must match the generator count.
    pub fn new(
        name: &str,
        algebra: &Arc<PresentedAlgebra>,
        generators: Vec<Polynomial>,
        maximal: bool,
        point: Option<Vec<FieldElement>>,
        columns: Option<Vec<usize>>,
    ) -> Result<Self> {
        let ring = algebra.ring();
        let ideal = IdealPresentation::new(ring, generators.iter().cloned())?.sum(algebra.relations())?;
        let invalid = |reason: String| Error::InvalidSite { site: name.to_string(), reason };
        if generators.is_empty() {
            return Err(invalid("a site needs at least one generator".into()));
        }
        if ideal.basis()?.is_unit() {
            return Err(invalid("the generators span the unit ideal".into()));
        }
        if let Some(pt) = &point {
            if pt.len() != ring.nvars() {
                return Err(invalid(format!("point has {} coordinates, ring has {} variables", pt.len(), ring.nvars())));
            }
            for g in ideal.generators() {
                if !g.evaluate(pt)?.is_zero() {
                    return Err(invalid(format!("{g} does not vanish at the point")));
                }
            }
        }
        if let Some(c) = &columns {
            if c.len() != generators.len() {
                return Err(invalid(format!("{} derivation columns for {} generators", c.len(), generators.len())));
            }
            if let Some(&bad) = c.iter().find(|&&i| i >= ring.nvars()) {
                return Err(invalid(format!("column {bad} is out of range")));
            }
        }
        if maximal && !is_zero_dimensional(&ideal)? {
            return Err(Error::NonMaximalSite(format!("`{name}` is declared maximal but its quotient is infinite-dimensional")));
        }
        Ok(PrimeSite {
            name: name.to_string(),
            algebra: algebra.clone(),
            generators,
            maximal,
            point,
            columns,
            ideal,
            powers: Arc::default(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn algebra(&self) -> &Arc<PresentedAlgebra> {
        &self.algebra
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn is_maximal(&self) -> bool {
        self.maximal
    }

    pub fn rational_point(&self) -> Option<&[FieldElement]> {
        self.point.as_deref()
    }

    pub fn derivation_columns(&self) -> Option<&[usize]> {
        self.columns.as_deref()
    }

    /// `𝔭` together with the algebra relations.
    pub fn ideal(&self) -> &IdealPresentation {
        &self.ideal
    }

    /// `𝔭^k` plus the algebra relations, cached per `k`.
    pub fn power(&self, k: u32) -> Result<IdealPresentation> {
        if k == 1 {
            return Ok(self.ideal.clone());
        }
        let mut cache = self.powers.lock().expect("power cache poisoned");
        if let Some(p) = cache.get(&k) {
            return Ok(p.clone());
        }
        let gens = IdealPresentation::new(self.algebra.ring(), self.generators.iter().cloned())?;
        let p = ideal_power(&gens, k).sum(self.algebra.relations())?;
        cache.insert(k, p.clone());
        Ok(p)
    }

    /// Membership in `𝔭` modulo the relations.
    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        ideal_membership(f, &self.ideal)
    }
}

/// Derivation columns for a site and their Jacobian minor, which lies
/// outside `𝔭`.
#[derive(Debug, Clone)]
pub struct DerivationConfig {
    site: PrimeSite,
    columns: Vec<usize>,
    determinant: Polynomial,
}

impl DerivationConfig {
    pub fn site(&self) -> &PrimeSite {
        &self.site
    }

    pub fn columns(&self) -> &[usize] {
        &self.columns
    }

    pub fn determinant(&self) -> &Polynomial {
        &self.determinant
    }
}

/// Fraction-free determinant of a square polynomial matrix.
fn determinant(mut a: Vec<Vec<Polynomial>>, zero: &Polynomial) -> Polynomial {
    let n = a.len();
    if n == 0 {
        return Polynomial::one(zero.ring());
    }
    let mut sign = false;
    let mut prev = Polynomial::one(zero.ring());
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = !sign;
                }
                None => return zero.clone(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.div_exact(&prev).expect("Bareiss step divides exactly");
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign {
        -&det
    } else {
        det
    }
}

fn minor(site: &PrimeSite, columns: &[usize]) -> Result<Polynomial> {
    let zero = Polynomial::zero(site.algebra.ring());
    let mut rows = Vec::with_capacity(columns.len());
    for &c in columns {
        rows.push(site.generators.iter().map(|g| g.partial_derivative(c)).collect::<Result<Vec<_>>>()?);
    }
    Ok(determinant(rows, &zero))
}

fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < r - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, r, &mut Vec::with_capacity(r), &mut out);
    out
}

/// Finds `r` variable columns whose Jacobian minor against the `r` site
/// generators is not in `𝔭`. Explicit columns on the site are validated
/// instead of searched. The search visits column subsets lexicographically,
/// first accepting only nonzero constant minors and then any minor outside
/// `𝔭`.
pub fn select_jacobian_columns(site: &PrimeSite) -> Result<DerivationConfig> {
    let r = site.generators.len();
    if r > MAX_SITE_GENERATORS {
        return Err(Error::InvalidArgument(format!(
            "column search supports at most {MAX_SITE_GENERATORS} generators, site has {r}"
        )));
    }
    let found = |columns: Vec<usize>, determinant: Polynomial| DerivationConfig { site: site.clone(), columns, determinant };
    if let Some(cols) = &site.columns {
        let det = minor(site, cols)?;
        if site.contains(&det)? {
            return Err(Error::NoInvertibleMinor(format!("declared columns of `{}` give minor {det} inside the prime", site.name)));
        }
        return Ok(found(cols.clone(), det));
    }
    let candidates = subsets(site.algebra.nvars(), r);
    let mut minors = Vec::with_capacity(candidates.len());
    for cols in &candidates {
        let det = minor(site, cols)?;
        if det.is_constant() && !det.is_zero() {
            return Ok(found(cols.clone(), det));
        }
        minors.push(det);
    }
    for (cols, det) in candidates.into_iter().zip(minors) {
        if !det.is_zero() && !site.contains(&det)? {
            return Ok(found(cols, det));
        }
    }
    Err(Error::NoInvertibleMinor(format!("no {r}-column Jacobian minor of `{}` avoids the prime", site.name)))
}

/// Characteristic check for order `s`: fine in characteristic 0 or above `s`.
pub fn check_characteristic(cfg_char: u32, s: u32, mode: HypothesisMode) -> Result<()> {
    if cfg_char != 0 && cfg_char <= s && mode == HypothesisMode::Enforce {
        return Err(Error::CharTooSmall { characteristic: cfg_char, order: s });
    }
    Ok(())
}

/// Derivation recursion: `f ∈ 𝔭^s` iff `f ∈ 𝔭^(s-1)` and `∂_i f ∈ 𝔭^(s-1)`
/// for every selected column `i`, with plain prime membership at `s = 1`.
pub fn ss1_membership(f: &Polynomial, cfg: &DerivationConfig, s: u32, mode: HypothesisMode) -> Result<bool> {
    let site = &cfg.site;
    if !site.algebra.is_free() {
        return Err(Error::InvalidArgument("the derivation route needs a relation-free ambient ring".into()));
    }
    check_characteristic(site.algebra.ring().field().characteristic(), s, mode)?;
    let mut memo: HashMap<(Polynomial, u32), bool> = HashMap::new();
    ss1_rec(f, cfg, s, &mut memo)
}

fn ss1_rec(f: &Polynomial, cfg: &DerivationConfig, s: u32, memo: &mut HashMap<(Polynomial, u32), bool>) -> Result<bool> {
    if s == 0 || f.is_zero() {
        return Ok(true);
    }
    if let Some(&v) = memo.get(&(f.clone(), s)) {
        return Ok(v);
    }
    let v = if s == 1 {
        cfg.site.contains(f)?
    } else {
        let mut ok = ss1_rec(f, cfg, s - 1, memo)?;
        for &c in &cfg.columns {
            if !ok {
                break;
            }
            ok = ss1_rec(&f.partial_derivative(c)?, cfg, s - 1, memo)?;
        }
        ok
    };
    memo.insert((f.clone(), s), v);
    Ok(v)
}

/// `f ∈ J B_𝔭`, with the algebra relations folded into `J`.
pub fn local_membership(f: &Polynomial, ideal: &IdealPresentation, site: &PrimeSite) -> Result<bool> {
    let j = ideal.sum(site.algebra.relations())?;
    if ideal_membership(f, &j)? {
        return Ok(true);
    }
    let quotient = ideal_quotient(&j, f)?;
    for g in quotient.generators() {
        if !site.contains(g)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `f ∈ 𝔭^s B_𝔭`. At a maximal site `𝔭^s` plus the relations is primary, so
/// global membership decides it.
pub fn local_power_membership(f: &Polynomial, s: u32, site: &PrimeSite) -> Result<bool> {
    if s == 0 || f.is_zero() {
        return Ok(true);
    }
    // a prime is its own contraction
    if s == 1 {
        return site.contains(f);
    }
    let power = site.power(s)?;
    if site.maximal {
        return ideal_membership(f, &power);
    }
    local_membership(f, &power, site)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{Field, PolyRing};

    fn site(field: Field, names: &[&str], gens: impl Fn(&[Polynomial]) -> Vec<Polynomial>, maximal: bool) -> (PrimeSite, Vec<Polynomial>) {
        let r = PolyRing::from_names(field, names).unwrap();
        let b = PresentedAlgebra::free(&r);
        let v: Vec<Polynomial> = (0..names.len()).map(|i| b.var(i)).collect();
        (PrimeSite::new("p", &b, gens(&v), maximal, None, None).unwrap(), v)
    }

    #[test]
    fn column_selection() {
        let (p, _) = site(Field::Rationals, &["x", "y"], |v| v.to_vec(), true);
        let d = select_jacobian_columns(&p).unwrap();
        assert_eq!(d.columns(), &[0, 1]);
        assert!(d.determinant().is_one());

        let (p, v) = site(Field::Rationals, &["x", "y"], |v| vec![&(&v[0] * &v[0]) - &v[1]], false);
        let d = select_jacobian_columns(&p).unwrap();
        assert_eq!(d.columns(), &[1]);
        assert_eq!(d.determinant(), &-&Polynomial::one(v[0].ring()));
    }

    #[test]
    fn no_minor_in_characteristic_p() {
        // d(x^3 - y^3) vanishes identically in characteristic 3
        let (p, _) = site(Field::prime(3).unwrap(), &["x", "y"], |v| vec![&v[0].pow(3) - &v[1].pow(3)], false);
        assert!(matches!(select_jacobian_columns(&p), Err(Error::NoInvertibleMinor(_))));
    }

    #[test]
    fn determinants() {
        let r = PolyRing::from_names(Field::Rationals, &["x", "y"]).unwrap();
        let (x, y) = (Polynomial::var(&r, 0), Polynomial::var(&r, 1));
        let zero = Polynomial::zero(&r);
        let m = vec![vec![zero.clone(), x.clone()], vec![y.clone(), Polynomial::one(&r)]];
        assert_eq!(determinant(m, &zero), -&(&x * &y));
        let one = Polynomial::one(&r);
        let m3 = vec![
            vec![x.clone(), one.clone(), zero.clone()],
            vec![one.clone(), y.clone(), one.clone()],
            vec![zero.clone(), one.clone(), x.clone()],
        ];
        // x(xy - 1) - x
        assert_eq!(determinant(m3, &zero), &(&(&x * &x) * &y) - &(&x + &x));
    }

    #[test]
    fn derivation_route_examples() {
        let (p, v) = site(Field::prime(5).unwrap(), &["x", "y"], |v| v.to_vec(), true);
        let d = select_jacobian_columns(&p).unwrap();
        let (x, y) = (&v[0], &v[1]);
        let f = &(x * x) + &(x * y);
        assert!(ss1_membership(&f, &d, 2, HypothesisMode::Enforce).unwrap());
        assert!(!ss1_membership(x, &d, 2, HypothesisMode::Enforce).unwrap());

        let (p3, v3) = site(Field::prime(3).unwrap(), &["x", "y"], |v| v.to_vec(), true);
        let d3 = select_jacobian_columns(&p3).unwrap();
        let y2 = &v3[1] * &v3[1];
        let err = ss1_membership(&y2, &d3, 3, HypothesisMode::Enforce).unwrap_err();
        assert!(matches!(err, Error::CharTooSmall { characteristic: 3, order: 3 }));
        assert!(!ss1_membership(&y2, &d3, 3, HypothesisMode::Assume).unwrap());
    }

    #[test]
    fn quotient_route_examples() {
        let (p, v) = site(Field::Rationals, &["x", "y"], |v| vec![v[0].clone()], false);
        let r = v[0].ring().clone();
        let (x, y) = (&v[0], &v[1]);
        let x2 = x * x;
        let j = IdealPresentation::new(&r, [&x2 * &(&Polynomial::one(&r) + y)]).unwrap();
        assert!(!ideal_membership(&x2, &j).unwrap());
        assert!(local_membership(&x2, &j, &p).unwrap());
        assert!(local_membership(&(x + y), &IdealPresentation::unit(&r), &p).unwrap());

        let (m, w) = site(Field::Rationals, &["x", "y"], |v| v.to_vec(), true);
        let y2 = &w[1] * &w[1];
        assert!(!local_power_membership(&y2, 3, &m).unwrap());
        assert!(!local_membership(&y2, &m.power(3).unwrap(), &m).unwrap());
        assert!(local_power_membership(&y2, 2, &m).unwrap());
    }

    #[test]
    fn site_validation() {
        let r = PolyRing::from_names(Field::Rationals, &["x", "y"]).unwrap();
        let b = PresentedAlgebra::free(&r);
        let x = b.var(0);
        let nonmax = PrimeSite::new("p", &b, vec![x.clone()], true, None, None);
        assert!(matches!(nonmax, Err(Error::NonMaximalSite(_))));
        let one = r.field().one();
        let off = PrimeSite::new("p", &b, vec![x.clone()], false, Some(vec![one.clone(), one]), None);
        assert!(matches!(off, Err(Error::InvalidSite { .. })));
        let cols = PrimeSite::new("p", &b, vec![x], false, None, Some(vec![0, 1]));
        assert!(matches!(cols, Err(Error::InvalidSite { .. })));
    }
}
