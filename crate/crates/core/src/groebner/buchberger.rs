use std::collections::HashSet;

use crate::error::{CapKind, Error, Result};
use crate::polyring::{merge_terms, Config, Field, FieldElement, Monomial};

use super::MonomialOrder;

/// Terms sorted descending by the active order.
pub(crate) type Terms = Vec<(Monomial, FieldElement)>;

pub(crate) fn sort_terms(mut t: Terms, order: &MonomialOrder) -> Terms {
    t.sort_by(|a, b| order.cmp(&b.0, &a.0));
    t
}

fn degree(t: &Terms) -> u32 {
    t.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
}

fn check_degree(t: &Terms, cfg: &Config) -> Result<()> {
    if degree(t) > cfg.max_degree {
        return Err(Error::ResourceCap(CapKind::Degree(cfg.max_degree)));
    }
    Ok(())
}

fn make_monic(field: Field, t: Terms) -> Terms {
    let inv = field.inv(&t[0].1).expect("nonzero leading coefficient");
    t.into_iter().map(|(m, c)| (m, field.mul(&c, &inv))).collect()
}

/// Full reduction of `f` by `basis` (leading and tail terms).
pub(crate) fn reduce(field: Field, order: &MonomialOrder, f: Terms, basis: &[Terms]) -> Terms {
    let mut p = f;
    let mut start = 0;
    let mut rem: Terms = Vec::new();
    let one = field.one();
    while start < p.len() {
        let (lm, lc) = &p[start];
        let divisor = basis.iter().find(|g| !g.is_empty() && g[0].0.divides(lm));
        match divisor {
            Some(g) => {
                let q = g[0].0.quotient_of(lm);
                let c = field.neg(&field.div(lc, &g[0].1).expect("nonzero leading coefficient"));
                let scaled: Terms = g.iter().map(|(m, gc)| (m.mul(&q), field.mul(gc, &c))).collect();
                p = merge_terms(field, &p[start..], &scaled, &one, |a, b| order.cmp(a, b));
                start = 0;
            }
            None => {
                rem.push(p[start].clone());
                start += 1;
            }
        }
    }
    rem
}

fn s_polynomial(field: Field, order: &MonomialOrder, f: &Terms, g: &Terms) -> Terms {
    let lcm = f[0].0.lcm(&g[0].0);
    let qf = f[0].0.quotient_of(&lcm);
    let qg = g[0].0.quotient_of(&lcm);
    // both inputs are monic
    let a: Terms = f.iter().map(|(m, c)| (m.mul(&qf), c.clone())).collect();
    let b: Terms = g.iter().map(|(m, c)| (m.mul(&qg), c.clone())).collect();
    merge_terms(field, &a, &b, &field.from_i64(-1), |x, y| order.cmp(x, y))
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

/// Buchberger's algorithm with the coprime criterion, the chain criterion
/// and normal pair selection. Returns the reduced basis, sorted ascending
/// by leading monomial.
pub(crate) fn groebner(field: Field, order: &MonomialOrder, gens: Vec<Terms>, cfg: &Config) -> Result<Vec<Terms>> {
    let mut basis: Vec<Terms> = Vec::new();
    for g in gens {
        if g.is_empty() {
            continue;
        }
        check_degree(&g, cfg)?;
        basis.push(make_monic(field, g));
    }
    let mut pairs: Vec<Pair> = Vec::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.push(Pair { i, j, lcm: basis[i][0].0.lcm(&basis[j][0].0) });
            pending.insert((i, j));
        }
    }
    let mut treated = 0usize;
    while !pairs.is_empty() {
        let mut best = 0;
        for k in 1..pairs.len() {
            let ord = order
                .cmp(&pairs[k].lcm, &pairs[best].lcm)
                .then((pairs[k].j, pairs[k].i).cmp(&(pairs[best].j, pairs[best].i)));
            if ord.is_lt() {
                best = k;
            }
        }
        let Pair { i, j, lcm } = pairs.swap_remove(best);
        pending.remove(&(i, j));
        treated += 1;
        if treated > cfg.max_pairs {
            return Err(Error::ResourceCap(CapKind::Pairs(cfg.max_pairs)));
        }
        if basis[i][0].0.is_coprime(&basis[j][0].0) {
            continue;
        }
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k][0].0.divides(&lcm)
                && !pending.contains(&(i.min(k), i.max(k)))
                && !pending.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let s = s_polynomial(field, order, &basis[i], &basis[j]);
        check_degree(&s, cfg)?;
        let h = reduce(field, order, s, &basis);
        if h.is_empty() {
            continue;
        }
        check_degree(&h, cfg)?;
        let h = make_monic(field, h);
        let n = basis.len();
        for k in 0..n {
            pairs.push(Pair { i: k, j: n, lcm: basis[k][0].0.lcm(&h[0].0) });
            pending.insert((k, n));
        }
        basis.push(h);
        if basis.last().map(|t| t[0].0.is_one()).unwrap_or(false) {
            // unit ideal
            return Ok(vec![basis.pop().unwrap()]);
        }
    }
    Ok(interreduce(field, order, basis))
}

fn interreduce(field: Field, order: &MonomialOrder, mut basis: Vec<Terms>) -> Vec<Terms> {
    basis.sort_by(|a, b| order.cmp(&a[0].0, &b[0].0));
    let mut minimal: Vec<Terms> = Vec::new();
    for (k, g) in basis.iter().enumerate() {
        let redundant = basis.iter().enumerate().any(|(l, h)| {
            l != k && h[0].0.divides(&g[0].0) && (h[0].0 != g[0].0 || l < k)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<Terms> = minimal.iter().enumerate().filter(|(l, _)| *l != k).map(|(_, g)| g.clone()).collect();
        let lead = minimal[k][0].clone();
        let tail = reduce(field, order, minimal[k][1..].to_vec(), &others);
        let mut g = vec![lead];
        g.extend(tail);
        reduced.push(make_monic(field, g));
    }
    reduced.sort_by(|a, b| order.cmp(&a[0].0, &b[0].0));
    reduced
}
