//! Runs a parsed script against the engine.

use std::collections::BTreeMap;
use std::sync::Arc;

use jetram_core::jets::{jet_presentation, AlgebraMorphism, PresentedAlgebra};
use jetram_core::localmem::{local_power_membership, HypothesisMode, PrimeSite};
use jetram_core::polyring::VariableTable;
use jetram_core::ramify::{ramification_filtration, verify_jet_theorem, GroupAction};
use jetram_core::taylor::{cotangent_dimension, free_fiber_rank, taylor_image, taylor_kernel_member};
use jetram_core::{CapKind, Config, Error, Field, PolyRing, Polynomial};
use num_bigint::BigInt;

use crate::parser::{ActionDecl, Expr, ExprKind, FieldDecl, Item, PrimeDecl, Query, WorkspaceScript};
use crate::report::{
    Entry, ErrorBlock, HypothesisLine, Image, Induced, Inputs, Level, Outcome, Report, VerifyLevel,
};

pub const EXIT_PARSE: i32 = 1;
pub const EXIT_HYPOTHESIS: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_ENGINE: i32 = 4;

/// Command-line switches that affect execution.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Flags {
    pub strict: bool,
    pub max_group: Option<usize>,
    pub max_degree: Option<u32>,
    pub max_pairs: Option<usize>,
    pub shuffle_seed: Option<u64>,
}

impl Flags {
    pub fn config(&self) -> Config {
        let mut c = Config::default();
        if let Some(n) = self.max_group {
            c.max_group = n;
        }
        if let Some(d) = self.max_degree {
            c.max_degree = d;
        }
        if let Some(n) = self.max_pairs {
            c.max_pairs = n;
        }
        c.shuffle_seed = self.shuffle_seed;
        c
    }

    pub fn mode(&self) -> HypothesisMode {
        if self.strict {
            HypothesisMode::Enforce
        } else {
            HypothesisMode::Assume
        }
    }
}

pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::RingMismatch(_) => "RingMismatch",
        Error::UnknownVariable(_) => "UnknownVariable",
        Error::InvalidField(_) => "InvalidField",
        Error::LengthMismatch { .. } => "LengthMismatch",
        Error::BoundMismatch { .. } => "BoundMismatch",
        Error::ResourceCap(_) => "ResourceCap",
        Error::CharTooSmall { .. } => "CharTooSmall",
        Error::NoInvertibleMinor(_) => "NoInvertibleMinor",
        Error::NonMaximalSite(_) => "NonMaximalSite",
        Error::MissingRationalPoint(_) => "MissingRationalPoint",
        Error::InvalidSite { .. } => "InvalidSite",
        Error::IllFormedMorphism(_) => "IllFormedMorphism",
        Error::NotStabilized { .. } => "NotStabilized",
        Error::RouteDisagreement(_) => "RouteDisagreement",
        Error::InvalidArgument(_) => "InvalidArgument",
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_hypothesis() {
        EXIT_HYPOTHESIS
    } else if e.is_cap() {
        EXIT_CAP
    } else {
        EXIT_ENGINE
    }
}

fn error_block(e: &Error) -> ErrorBlock {
    ErrorBlock { kind: error_kind(e), message: e.to_string(), exit_code: exit_code(e) }
}

fn degree_guard(p: &Polynomial, max: u32) -> Result<Polynomial, Error> {
    match p.total_degree() {
        Some(d) if d > max => Err(Error::ResourceCap(CapKind::Degree(max))),
        _ => Ok(p.clone()),
    }
}

/// Evaluates a parsed expression in `ring`. Names were resolved by the parser.
pub fn eval(e: &Expr, ring: &Arc<PolyRing>) -> Result<Polynomial, Error> {
    let max = ring.config().max_degree;
    match &e.kind {
        ExprKind::Int(n) => Ok(Polynomial::constant(ring, ring.field().from_bigint(&BigInt::from(n.clone())))),
        ExprKind::Var(name) => Polynomial::var_named(ring, name),
        ExprKind::Neg(a) => Ok(-&eval(a, ring)?),
        ExprKind::Add(a, b) => Ok(&eval(a, ring)? + &eval(b, ring)?),
        ExprKind::Sub(a, b) => Ok(&eval(a, ring)? - &eval(b, ring)?),
        ExprKind::Mul(a, b) => {
            let (a, b) = (eval(a, ring)?, eval(b, ring)?);
            let da = a.total_degree().unwrap_or(0);
            let db = b.total_degree().unwrap_or(0);
            if da + db > max {
                return Err(Error::ResourceCap(CapKind::Degree(max)));
            }
            Ok(&a * &b)
        }
        ExprKind::Pow(a, k) => {
            let a = eval(a, ring)?;
            let d = u64::from(a.total_degree().unwrap_or(0));
            if d * u64::from(*k) > u64::from(max) {
                return Err(Error::ResourceCap(CapKind::Degree(max)));
            }
            degree_guard(&a.pow(*k), max)
        }
    }
}

struct Workspace {
    ring: Arc<PolyRing>,
    algebra: Result<Arc<PresentedAlgebra>, Error>,
    primes: BTreeMap<String, Result<PrimeSite, Error>>,
    actions: BTreeMap<String, Result<GroupAction, Error>>,
}

fn build_prime(decl: &PrimeDecl, ws: &Workspace) -> Result<PrimeSite, Error> {
    let algebra = ws.algebra.clone()?;
    let gens = decl.generators.iter().map(|g| eval(&g.expr, &ws.ring)).collect::<Result<Vec<_>, _>>()?;
    let field = ws.ring.field();
    let point = decl
        .point
        .as_ref()
        .map(|coords| coords.iter().map(|c| field.from_bigint(&BigInt::from(c.node.clone()))).collect());
    PrimeSite::new(&decl.name.node, &algebra, gens, decl.maximal, point, None)
}

fn build_action(decl: &ActionDecl, ws: &Workspace) -> Result<GroupAction, Error> {
    let algebra = ws.algebra.clone()?;
    let mut images: Vec<Polynomial> = (0..ws.ring.nvars()).map(|i| Polynomial::var(&ws.ring, i)).collect();
    for (var, image) in &decl.maps {
        let i = ws.ring.table().lookup(&var.node)?;
        images[i] = eval(&image.expr, &ws.ring)?;
    }
    let map = AlgebraMorphism::new(&algebra, &algebra, images)?;
    GroupAction::new(&algebra, vec![(decl.name.node.clone(), map)])
}

fn render_all(ps: &[Polynomial]) -> Vec<String> {
    ps.iter().map(ToString::to_string).collect()
}

fn characteristic_warning(ring: &PolyRing, s: usize, what: &str) -> Option<String> {
    let p = ring.field().characteristic() as usize;
    (p != 0 && p <= s).then(|| format!("CharTooSmall: characteristic {p} <= s = {s}; {what}"))
}

fn run_query(q: &Query, ws: &Workspace, flags: &Flags, warnings: &mut Vec<String>) -> Result<Outcome, Error> {
    let prime = |name: &str| ws.primes[name].clone();
    let action = |name: &str| ws.actions[name].clone();
    let mode = flags.mode();
    match q {
        Query::Jet { order } => {
            let jp = jet_presentation(&ws.algebra.clone()?, *order)?;
            Ok(Outcome::Jet {
                ring: jp.ring().table().names().to_vec(),
                ideal: render_all(jp.jet_ideal().generators()),
            })
        }
        Query::Ram { action: a, prime: p, upto } => {
            let filtration = ramification_filtration(&action(&a.node)?, &prime(&p.node)?, *upto)?;
            warnings.extend(filtration.warnings().iter().cloned());
            let levels = (0..=*upto).map(|s| Level { s, elements: filtration.words(s) }).collect();
            Ok(Outcome::Ram { levels })
        }
        Query::Taylor { poly, prime: p, order } => {
            let f = eval(&poly.expr, &ws.ring)?;
            let value = taylor_image(&f, &prime(&p.node)?, *order as u32)?;
            Ok(Outcome::Taylor { value: value.to_string(), a0: value.a0.to_string(), a1: value.a1.to_string() })
        }
        Query::Kernel { poly, prime: p, order } => {
            let site = prime(&p.node)?;
            let f = eval(&poly.expr, &ws.ring)?;
            let s = *order as u32;
            let kernel = taylor_kernel_member(&f, &site, s, mode)?;
            warnings.extend(characteristic_warning(&ws.ring, *order, "the kernel may differ from the power"));
            let value = taylor_image(&f, &site, s)?;
            let power_member = local_power_membership(&f, s + 1, &site)?;
            if kernel != power_member {
                warnings.push(format!("kernel membership and membership in {}^{} disagree", p.node, s + 1));
            }
            Ok(Outcome::Kernel {
                value: value.to_string(),
                kernel,
                power: format!("{}^{}", p.node, s + 1),
                power_member,
                agree: kernel == power_member,
            })
        }
        Query::Verify { action: a, prime: p, order, depth } => {
            let report = verify_jet_theorem(&action(&a.node)?, &prime(&p.node)?, *order, *depth, mode)?;
            warnings.extend(report.warnings.iter().cloned());
            let levels = report
                .levels
                .iter()
                .map(|l| VerifyLevel {
                    depth: l.depth,
                    s: l.index,
                    site: render_all(&l.site),
                    elements: l.words.clone(),
                    verdict: if l.equal { "EQUAL" } else { "MISMATCH" },
                    closure_size: l.closure_size,
                    induced: l
                        .induced
                        .iter()
                        .map(|ind| Induced {
                            generator: ind.generator.clone(),
                            images: ind
                                .images
                                .iter()
                                .map(|(v, img)| Image { variable: v.clone(), image: img.to_string() })
                                .collect(),
                        })
                        .collect(),
                })
                .collect();
            Ok(Outcome::Verify {
                group_order: report.group_order,
                base: Level { s: report.s, elements: report.base_words.clone() },
                levels,
                hypotheses: report
                    .hypotheses
                    .iter()
                    .map(|h| HypothesisLine { name: h.name.clone(), holds: h.holds, detail: h.detail.clone() })
                    .collect(),
            })
        }
        Query::Fiber { prime: p } => {
            let site = prime(&p.node)?;
            Ok(Outcome::Fiber { free_fiber_rank: free_fiber_rank(&site)?, cotangent_dimension: cotangent_dimension(&site)? })
        }
    }
}

fn inputs(q: &Query) -> Inputs {
    match q {
        Query::Jet { order } => Inputs::Jet { order: *order },
        Query::Ram { action, prime, upto } => {
            Inputs::Ram { action: action.node.clone(), prime: prime.node.clone(), upto: *upto }
        }
        Query::Taylor { poly, prime, order } | Query::Kernel { poly, prime, order } => {
            Inputs::Poly { poly: poly.text.clone(), prime: prime.node.clone(), order: *order }
        }
        Query::Verify { action, prime, order, depth } => Inputs::Verify {
            action: action.node.clone(),
            prime: prime.node.clone(),
            order: *order,
            depth: *depth,
        },
        Query::Fiber { prime } => Inputs::Fiber { prime: prime.node.clone() },
    }
}

fn failed_declaration(kind: &'static str, name: &str, e: &Error) -> Entry {
    Entry {
        kind,
        inputs: Inputs::Declaration { name: name.to_string() },
        result: None,
        error: Some(error_block(e)),
        warnings: Vec::new(),
        header: format!("{kind} {name}").trim_end().to_string(),
    }
}

/// Runs every query in source order. Declarations that fail to build get
/// their own ERROR block; queries depending on them fail with the same error.
pub fn execute(script: &WorkspaceScript, flags: &Flags) -> Report {
    let field = match script.field.node {
        FieldDecl::Rationals => Field::Rationals,
        FieldDecl::Prime(p) => Field::prime(p).expect("parser validated the modulus"),
    };
    let names: Vec<&str> = script.ring.iter().map(|v| v.node.as_str()).collect();
    let table = VariableTable::from_names(&names).expect("parser rejected duplicate variables");
    let ring = PolyRing::with_config(field, table, flags.config());
    let mut ws = Workspace {
        algebra: Ok(PresentedAlgebra::free(&ring)),
        ring,
        primes: BTreeMap::new(),
        actions: BTreeMap::new(),
    };
    let mut report = Report::default();
    for item in &script.items {
        match &item.node {
            Item::Ideal(gens) => {
                let built = gens
                    .iter()
                    .map(|g| eval(&g.expr, &ws.ring))
                    .collect::<Result<Vec<_>, _>>()
                    .and_then(|gens| PresentedAlgebra::new(&ws.ring, gens));
                if let Err(e) = &built {
                    report.queries.push(failed_declaration("ideal", "", e));
                }
                ws.algebra = built;
            }
            Item::Prime(decl) => {
                let built = build_prime(decl, &ws);
                if let Err(e) = &built {
                    report.queries.push(failed_declaration("prime", &decl.name.node, e));
                }
                ws.primes.insert(decl.name.node.clone(), built);
            }
            Item::Action(decl) => {
                let built = build_action(decl, &ws);
                if let Err(e) = &built {
                    report.queries.push(failed_declaration("action", &decl.name.node, e));
                }
                ws.actions.insert(decl.name.node.clone(), built);
            }
            Item::Query(q) => {
                let mut warnings = Vec::new();
                let outcome = run_query(q, &ws, flags, &mut warnings);
                let (result, error) = match outcome {
                    Ok(o) => (Some(o), None),
                    Err(e) => (None, Some(error_block(&e))),
                };
                report.queries.push(Entry {
                    kind: q.kind(),
                    inputs: inputs(q),
                    result,
                    error,
                    warnings,
                    header: q.to_string(),
                });
            }
        }
    }
    report
}
