use std::cmp::Ordering;

use crate::polyring::{grevlex_cmp, lex_cmp, Monomial};

/// Monomial orders used by the Gröbner engine. Variable 0 is largest.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    Grevlex,
    Lex,
    /// Block order: grevlex on the listed variables first, then grevlex on
    /// the rest. Eliminates the listed variables.
    Elimination(Vec<usize>),
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Grevlex => grevlex_cmp(a, b),
            MonomialOrder::Lex => lex_cmp(a, b),
            MonomialOrder::Elimination(block) => {
                block_grevlex(a, b, |i| block.contains(&i)).then_with(|| block_grevlex(a, b, |i| !block.contains(&i)))
            }
        }
    }
}

fn block_grevlex(a: &Monomial, b: &Monomial, in_block: impl Fn(usize) -> bool) -> Ordering {
    let (ea, eb) = (a.exponents(), b.exponents());
    let deg = |e: &[u32]| -> u32 { e.iter().enumerate().filter(|(i, _)| in_block(*i)).map(|(_, x)| x).sum() };
    let (da, db) = (deg(ea), deg(eb));
    if da != db {
        return da.cmp(&db);
    }
    for i in (0..ea.len()).rev() {
        if in_block(i) && ea[i] != eb[i] {
            return eb[i].cmp(&ea[i]);
        }
    }
    Ordering::Equal
}
