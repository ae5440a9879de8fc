//! Finite group actions on presented algebras, higher ramification groups
//! and the comparison with inertia groups of induced jet actions.
//!
//! Words compose right to left: the element `a.b` applies `b` first.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{CapKind, Error, Result};
use crate::groebner::{ideal_membership, ideal_power, IdealPresentation};
use crate::jets::{
    extend_prime, iterate_first_jet_tower, jet_morphism_between, jet_presentation, AlgebraMorphism, JetPresentation,
    PresentedAlgebra,
};
use crate::localmem::{
    local_power_membership, select_jacobian_columns, ss1_membership, DerivationConfig, HypothesisMode, PrimeSite,
};
use crate::polyring::{FieldElement, Polynomial};

/// Named generator endomorphisms of one algebra.
#[derive(Debug, Clone)]
pub struct GroupAction {
    algebra: Arc<PresentedAlgebra>,
    generators: Vec<(String, AlgebraMorphism)>,
    cap: usize,
}

impl GroupAction {
    pub fn new(algebra: &Arc<PresentedAlgebra>, generators: Vec<(String, AlgebraMorphism)>) -> Result<Self> {
        for (name, g) in &generators {
            if g.source() != algebra || g.target() != algebra {
                return Err(Error::IllFormedMorphism(format!("`{name}` is not an endomorphism of {algebra}")));
            }
        }
        for (k, (name, _)) in generators.iter().enumerate() {
            if generators[..k].iter().any(|(n, _)| n == name) {
                return Err(Error::InvalidArgument(format!("generator `{name}` is declared twice")));
            }
        }
        let cap = algebra.ring().config().max_group;
        Ok(GroupAction { algebra: algebra.clone(), generators, cap })
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn algebra(&self) -> &Arc<PresentedAlgebra> {
        &self.algebra
    }

    pub fn generators(&self) -> &[(String, AlgebraMorphism)] {
        &self.generators
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement { word: Vec::new(), map: AlgebraMorphism::identity(&self.algebra) }
    }

    pub fn generator(&self, name: &str) -> Option<GroupElement> {
        self.generators
            .iter()
            .find(|(n, _)| n == name)
            .map(|(n, g)| GroupElement { word: vec![n.clone()], map: g.clone() })
    }
}

/// A word in the generators together with its canonical images.
#[derive(Debug, Clone)]
pub struct GroupElement {
    word: Vec<String>,
    map: AlgebraMorphism,
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.map == other.map
    }
}

impl Eq for GroupElement {}

impl GroupElement {
    pub fn word(&self) -> &[String] {
        &self.word
    }

    pub fn map(&self) -> &AlgebraMorphism {
        &self.map
    }

    pub fn is_identity(&self) -> bool {
        self.map.is_identity()
    }

    /// `e` for the empty word, otherwise the generator names joined by `.`.
    pub fn label(&self) -> String {
        if self.word.is_empty() {
            "e".to_string()
        } else {
            self.word.join(".")
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// `a·b`: apply `b`, then `a`.
pub fn endo_compose(a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
    let map = a.map.compose(&b.map)?;
    let word = a.word.iter().chain(&b.word).cloned().collect();
    Ok(GroupElement { word, map })
}

/// Breadth-first closure under right multiplication by generators, starting
/// from the identity. Every generator must have an inverse in the result.
pub fn group_closure(action: &GroupAction) -> Result<Vec<GroupElement>> {
    let max_degree = action.algebra.ring().config().max_degree;
    let identity = action.identity();
    let mut seen: HashMap<Vec<Polynomial>, usize> = HashMap::new();
    seen.insert(identity.map.images().to_vec(), 0);
    let mut elements = vec![identity];
    let mut next = 0;
    while next < elements.len() {
        for (name, g) in &action.generators {
            let gen = GroupElement { word: vec![name.clone()], map: g.clone() };
            let candidate = endo_compose(&elements[next], &gen)?;
            if seen.contains_key(candidate.map.images()) {
                continue;
            }
            if candidate.map.images().iter().any(|p| p.total_degree().unwrap_or(0) > max_degree) {
                return Err(Error::ResourceCap(CapKind::Degree(max_degree)));
            }
            if elements.len() >= action.cap {
                return Err(Error::ResourceCap(CapKind::GroupOrder(action.cap)));
            }
            seen.insert(candidate.map.images().to_vec(), elements.len());
            elements.push(candidate);
        }
        next += 1;
    }
    for (name, g) in &action.generators {
        let invertible = elements.iter().any(|h| h.map.compose(g).map(|c| c.is_identity()).unwrap_or(false));
        if !invertible {
            return Err(Error::IllFormedMorphism(format!("generator `{name}` has no inverse in its closure")));
        }
    }
    Ok(elements)
}

/// Whether `g(𝔭) ⊆ 𝔭`; for elements of finite order this is equality.
pub fn stabilizes_prime(g: &GroupElement, site: &PrimeSite) -> Result<bool> {
    if g.map.source() != site.algebra() {
        return Err(Error::RingMismatch(format!("site `{}` is not over the acting algebra", site.name())));
    }
    for p in site.generators() {
        if !site.contains(&g.map.apply(p)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Membership oracle for one site, cross-checking non-maximal sites with
/// the derivation route where its hypotheses hold.
struct Oracle<'a> {
    site: &'a PrimeSite,
    derivations: Option<DerivationConfig>,
    skipped: Vec<u32>,
}

impl<'a> Oracle<'a> {
    fn new(site: &'a PrimeSite) -> Self {
        let derivations = if !site.is_maximal() && site.algebra().is_free() {
            select_jacobian_columns(site).ok()
        } else {
            None
        };
        Oracle { site, derivations, skipped: Vec::new() }
    }

    fn power_member(&mut self, f: &Polynomial, k: u32, label: &str) -> Result<bool> {
        let direct = local_power_membership(f, k, self.site)?;
        if let Some(d) = &self.derivations {
            let p = self.site.algebra().ring().field().characteristic();
            if p != 0 && p <= k {
                if !self.skipped.contains(&k) {
                    self.skipped.push(k);
                }
            } else {
                let other = ss1_membership(f, d, k, HypothesisMode::Enforce)?;
                if other != direct {
                    return Err(Error::RouteDisagreement(format!(
                        "element {label}, power {k} of `{}`: quotient route {direct}, derivation route {other} on {f}",
                        self.site.name()
                    )));
                }
            }
        }
        Ok(direct)
    }

    fn member(&mut self, g: &GroupElement, s: i64) -> Result<bool> {
        if s < -1 {
            return Err(Error::InvalidArgument(format!("ramification index must be at least -1, got {s}")));
        }
        if !stabilizes_prime(g, self.site)? {
            return Ok(false);
        }
        if s == -1 {
            return Ok(true);
        }
        let label = g.label();
        let algebra = self.site.algebra();
        for (i, img) in g.map.images().iter().enumerate() {
            let diff = img - &algebra.var(i);
            if !self.power_member(&diff, (s + 1) as u32, &label)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn warnings(&self) -> Vec<String> {
        let p = self.site.algebra().ring().field().characteristic();
        self.skipped
            .iter()
            .map(|k| {
                format!(
                    "CharTooSmall: derivation cross-check skipped for power {k} of `{}` in characteristic {p}",
                    self.site.name()
                )
            })
            .collect()
    }
}

/// `g ∈ G_s(𝔭)`: `g` stabilizes `𝔭` and, for `s ≥ 0`, moves every
/// generator by an element of `𝔭^(s+1) B_𝔭`.
pub fn ramification_member(g: &GroupElement, site: &PrimeSite, s: i64) -> Result<bool> {
    Oracle::new(site).member(g, s)
}

/// `G_0 ⊇ G_1 ⊇ … ⊇ G_{s_max}` over the closure of an action.
#[derive(Debug, Clone)]
pub struct RamificationFiltration {
    site: String,
    elements: Vec<GroupElement>,
    levels: Vec<Vec<usize>>,
    warnings: Vec<String>,
}

impl RamificationFiltration {
    pub fn site(&self) -> &str {
        &self.site
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    /// Positions in [`elements`](Self::elements) of the members of `G_s`.
    pub fn level(&self, s: usize) -> &[usize] {
        &self.levels[s]
    }

    pub fn max_level(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    pub fn words(&self, s: usize) -> Vec<String> {
        self.levels[s].iter().map(|&i| self.elements[i].label()).collect()
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }
}

impl fmt::Display for RamificationFiltration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in 0..self.levels.len() {
            writeln!(f, "G_{s} = {{ {} }}", self.words(s).join(", "))?;
        }
        Ok(())
    }
}

fn is_subgroup(elements: &[GroupElement], members: &[usize]) -> Result<bool> {
    for &a in members {
        for &b in members {
            let c = elements[a].map.compose(&elements[b].map)?;
            if !members.iter().any(|&m| elements[m].map == c) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn ramification_filtration(action: &GroupAction, site: &PrimeSite, s_max: usize) -> Result<RamificationFiltration> {
    if site.algebra() != action.algebra() {
        return Err(Error::RingMismatch(format!("site `{}` is not over the acting algebra", site.name())));
    }
    let elements = group_closure(action)?;
    let mut oracle = Oracle::new(site);
    let mut levels: Vec<Vec<usize>> = Vec::with_capacity(s_max + 1);
    for s in 0..=s_max {
        let candidates: Vec<usize> = match levels.last() {
            Some(prev) => prev.clone(),
            None => (0..elements.len()).collect(),
        };
        let mut members = Vec::new();
        for i in candidates {
            if oracle.member(&elements[i], s as i64)? {
                members.push(i);
            }
        }
        debug_assert!(is_subgroup(&elements, &members)?, "G_{s} is not closed under composition");
        levels.push(members);
    }
    Ok(RamificationFiltration { site: site.name().to_string(), elements, levels, warnings: oracle.warnings() })
}

/// An action transported to a jet algebra by the jet functor.
#[derive(Debug, Clone)]
pub struct InducedAction {
    pub jets: JetPresentation,
    pub action: GroupAction,
}

/// `L_m` applied to every generator.
pub fn induced_jet_action(action: &GroupAction, m: usize) -> Result<InducedAction> {
    if m == 0 {
        return Err(Error::InvalidArgument("jet order of an induced action must be at least 1".into()));
    }
    let jets = jet_presentation(action.algebra(), m)?;
    let generators = action
        .generators
        .iter()
        .map(|(n, g)| Ok((n.clone(), jet_morphism_between(g, &jets, &jets)?)))
        .collect::<Result<Vec<_>>>()?;
    let induced = GroupAction::new(jets.algebra(), generators)?.with_cap(action.cap);
    Ok(InducedAction { jets, action: induced })
}

/// Whether `L_m(g)` is trivial modulo the level-0 copy of `𝔭^(s-m+1)` plus
/// the jet ideal.
pub fn thickened_triviality(g: &GroupElement, site: &PrimeSite, m: usize, s: usize) -> Result<bool> {
    if m > s {
        return Err(Error::InvalidArgument(format!("thickened triviality needs m <= s, got m = {m}, s = {s}")));
    }
    if !site.is_maximal() {
        return Err(Error::NonMaximalSite(format!("`{}` is not declared maximal", site.name())));
    }
    let jets = jet_presentation(site.algebra(), m)?;
    let lifted = jet_morphism_between(&g.map, &jets, &jets)?;
    let gens = IdealPresentation::new(site.algebra().ring(), site.generators().iter().cloned())?;
    let level0 = ideal_power(&gens, (s - m + 1) as u32)
        .generators()
        .iter()
        .map(|p| jets.level0(p))
        .collect::<Result<Vec<_>>>()?;
    let ideal = IdealPresentation::new(jets.ring(), level0)?.sum(jets.jet_ideal())?;
    for (i, img) in lifted.images().iter().enumerate() {
        let diff = img - &Polynomial::var(jets.ring(), i);
        if !ideal_membership(&diff, &ideal)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A hypothesis of the jet identification and whether it holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypothesis {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

/// Non-fixed generator images of one induced generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedImages {
    pub generator: String,
    pub images: Vec<(String, Polynomial)>,
}

/// `G_{s-k}` of the extended prime on the `k`-fold first jet algebra.
#[derive(Debug, Clone)]
pub struct VerifyLevel {
    pub depth: usize,
    pub index: usize,
    pub site: Vec<Polynomial>,
    pub words: Vec<String>,
    pub equal: bool,
    pub closure_size: usize,
    pub induced: Vec<InducedImages>,
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub s: usize,
    pub depth: usize,
    pub group_order: usize,
    pub base_words: Vec<String>,
    pub levels: Vec<VerifyLevel>,
    pub hypotheses: Vec<Hypothesis>,
    pub warnings: Vec<String>,
}

impl VerifyReport {
    pub fn all_equal(&self) -> bool {
        self.levels.iter().all(|l| l.equal)
    }
}

fn moved_images(name: &str, g: &AlgebraMorphism) -> InducedImages {
    let table = g.source().ring().table();
    let images = g
        .images()
        .iter()
        .enumerate()
        .filter(|(i, p)| **p != g.source().var(*i))
        .map(|(i, p)| (table.name(i).to_string(), p.clone()))
        .collect();
    InducedImages { generator: name.to_string(), images }
}

/// Compares `G_s(𝔭)` with `G_{s-k}(𝔭 L_1^k(B))` for `k = 1..=depth`, matching
/// elements through `σ ↦ L_1^k(σ)`. A characteristic in `1..=s` is an error
/// under [`HypothesisMode::Enforce`] and a warning otherwise.
pub fn verify_jet_theorem(
    action: &GroupAction,
    site: &PrimeSite,
    s: usize,
    depth: usize,
    mode: HypothesisMode,
) -> Result<VerifyReport> {
    if depth == 0 || depth > s {
        return Err(Error::InvalidArgument(format!("verification needs 1 <= depth <= s, got depth = {depth}, s = {s}")));
    }
    if !site.is_maximal() {
        return Err(Error::NonMaximalSite(format!("`{}` is not declared maximal", site.name())));
    }
    if site.algebra() != action.algebra() {
        return Err(Error::RingMismatch(format!("site `{}` is not over the acting algebra", site.name())));
    }
    let p = site.algebra().ring().field().characteristic();
    let char_ok = p == 0 || p as usize > s;
    let mut warnings = Vec::new();
    if !char_ok {
        if mode == HypothesisMode::Enforce {
            return Err(Error::CharTooSmall { characteristic: p, order: s as u32 });
        }
        warnings.push(format!("CharTooSmall: characteristic {p} <= s = {s}; the identification may fail"));
    }
    let mut hypotheses = vec![
        Hypothesis {
            name: "characteristic".into(),
            holds: char_ok,
            detail: if p == 0 { "0".into() } else { format!("{p} vs s = {s}") },
        },
        Hypothesis { name: "maximal".into(), holds: true, detail: format!("`{}` declared maximal", site.name()) },
    ];

    let elements = group_closure(action)?;
    let mut oracle = Oracle::new(site);
    let mut base = Vec::new();
    for (i, g) in elements.iter().enumerate() {
        if oracle.member(g, s as i64)? {
            base.push(i);
        }
    }
    warnings.extend(oracle.warnings());

    let tower = iterate_first_jet_tower(action.algebra(), depth)?;
    let mut maps: Vec<AlgebraMorphism> = elements.iter().map(|g| g.map.clone()).collect();
    let mut gen_maps: Vec<AlgebraMorphism> = action.generators.iter().map(|(_, g)| g.clone()).collect();
    let mut current = site.clone();
    let mut levels = Vec::with_capacity(depth);
    for (k, jets) in tower.iter().enumerate() {
        let k = k + 1;
        current = extend_prime(&current, jets)?;
        maps = maps.iter().map(|m| jet_morphism_between(m, jets, jets)).collect::<Result<_>>()?;
        gen_maps = gen_maps.iter().map(|m| jet_morphism_between(m, jets, jets)).collect::<Result<_>>()?;

        let columns = select_jacobian_columns(&current);
        hypotheses.push(Hypothesis {
            name: format!("derivation columns (depth {k})"),
            holds: columns.is_ok(),
            detail: match &columns {
                Ok(d) => {
                    let table = jets.ring().table();
                    let names: Vec<&str> = d.columns().iter().map(|&c| table.name(c)).collect();
                    format!("{} with minor {}", names.join(", "), d.determinant())
                }
                Err(e) => e.to_string(),
            },
        });

        let named: Vec<(String, AlgebraMorphism)> =
            action.generators.iter().map(|(n, _)| n.clone()).zip(gen_maps.iter().cloned()).collect();
        let induced_action = GroupAction::new(jets.algebra(), named.clone())?.with_cap(action.cap);
        let closure_size = group_closure(&induced_action)?.len();
        if closure_size != elements.len() {
            warnings.push(format!(
                "induced action at depth {k} has {closure_size} elements, base action has {}",
                elements.len()
            ));
        }

        let mut oracle = Oracle::new(&current);
        let index = s - k;
        let mut members = Vec::new();
        for (i, m) in maps.iter().enumerate() {
            let lifted = GroupElement { word: elements[i].word.clone(), map: m.clone() };
            if oracle.member(&lifted, index as i64)? {
                members.push(i);
            }
        }
        warnings.extend(oracle.warnings());
        levels.push(VerifyLevel {
            depth: k,
            index,
            site: current.generators().to_vec(),
            words: members.iter().map(|&i| elements[i].label()).collect(),
            equal: members == base,
            closure_size,
            induced: named.iter().map(|(n, g)| moved_images(n, g)).collect(),
        });
    }
    Ok(VerifyReport {
        s,
        depth,
        group_order: elements.len(),
        base_words: base.iter().map(|&i| elements[i].label()).collect(),
        levels,
        hypotheses,
        warnings,
    })
}

/// Checks `G_s(𝔭) ⊆ G_s(𝔪)` for the maximal ideal `𝔪` of each sample point
/// on `V(𝔭)`.
pub fn maximal_sample_inclusion(
    action: &GroupAction,
    site: &PrimeSite,
    s: usize,
    points: &[Vec<FieldElement>],
) -> Result<bool> {
    let filtration = ramification_filtration(action, site, s)?;
    let algebra = site.algebra();
    let ring = algebra.ring();
    for (k, pt) in points.iter().enumerate() {
        if pt.len() != ring.nvars() {
            return Err(Error::LengthMismatch { expected: ring.nvars(), found: pt.len() });
        }
        for g in site.generators() {
            if !g.evaluate(pt)?.is_zero() {
                return Err(Error::InvalidSite {
                    site: site.name().to_string(),
                    reason: format!("sample point {k} is not a zero of {g}"),
                });
            }
        }
        let gens = (0..ring.nvars())
            .map(|i| &algebra.var(i) - &Polynomial::constant(ring, pt[i].clone()))
            .collect();
        let name = format!("{}@{k}", site.name());
        let maximal = PrimeSite::new(&name, algebra, gens, true, Some(pt.clone()), None)?;
        let mut oracle = Oracle::new(&maximal);
        for &i in filtration.level(s) {
            if !oracle.member(&filtration.elements()[i], s as i64)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
