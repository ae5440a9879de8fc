use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

use super::Field;

/// Resource limits and test hooks shared by every computation over a ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    /// Maximum number of S-pairs treated in one Buchberger run.
    pub max_pairs: usize,
    /// Maximum total degree of any intermediate polynomial.
    pub max_degree: u32,
    /// Maximum size of a group closure.
    pub max_group: usize,
    /// Maximum number of variables of a jet tower.
    pub max_vars: usize,
    /// When set, Gröbner inputs are permuted with this seed before use.
    /// Results must not depend on it.
    pub shuffle_seed: Option<u64>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_pairs: 200_000,
            max_degree: 64,
            max_group: 1024,
            max_vars: 64,
            shuffle_seed: None,
        }
    }
}

/// A ring variable: base name, declared base position and jet multi-index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Variable {
    pub base: String,
    pub position: usize,
    pub index: Vec<u32>,
}

impl Variable {
    pub fn base(name: impl Into<String>, position: usize) -> Self {
        Variable { base: name.into(), position, index: Vec::new() }
    }

    /// Surface name: `x` for base variables, `x0`/`x1` at depth one and
    /// `x.0.1` from depth two on. A base name ending in a digit always uses
    /// the dotted form so that names stay unique.
    pub fn name(&self) -> String {
        match self.index.len() {
            0 => self.base.clone(),
            1 if !self.base.ends_with(|c: char| c.is_ascii_digit()) => {
                format!("{}{}", self.base, self.index[0])
            }
            _ => {
                let mut s = self.base.clone();
                for j in &self.index {
                    s.push('.');
                    s.push_str(&j.to_string());
                }
                s
            }
        }
    }
}

/// Ordered variables of a polynomial ring. Order: jet multi-index
/// (lexicographic), then declared base position.
#[derive(Debug, Clone)]
pub struct VariableTable {
    vars: Vec<Variable>,
    names: Vec<String>,
    by_name: HashMap<String, usize>,
}

impl PartialEq for VariableTable {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars
    }
}

impl Eq for VariableTable {}

impl VariableTable {
    pub fn new(mut vars: Vec<Variable>) -> Result<Self> {
        vars.sort_by(|a, b| a.index.cmp(&b.index).then(a.position.cmp(&b.position)));
        Self::from_ordered(vars)
    }

    /// Base table from declared names, in declaration order.
    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let vars = names
            .iter()
            .enumerate()
            .map(|(i, n)| Variable::base(n.as_ref(), i))
            .collect();
        Self::new(vars)
    }

    /// Keeps the given order; used for internal auxiliary rings.
    pub(crate) fn from_ordered(vars: Vec<Variable>) -> Result<Self> {
        let names: Vec<String> = vars.iter().map(Variable::name).collect();
        let mut by_name = HashMap::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            if by_name.insert(n.clone(), i).is_some() {
                return Err(Error::InvalidArgument(format!("duplicate variable name `{n}`")));
            }
        }
        Ok(VariableTable { vars, names, by_name })
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    pub fn lookup(&self, name: &str) -> Result<usize> {
        self.index_of(name).ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }
}

/// Coefficient field plus variable table. Rings compare equal when field and
/// table agree; the configuration is carried along but not compared.
#[derive(Debug, Clone)]
pub struct PolyRing {
    field: Field,
    table: VariableTable,
    config: Config,
}

impl PartialEq for PolyRing {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.table == other.table
    }
}

impl Eq for PolyRing {}

impl PolyRing {
    pub fn new(field: Field, table: VariableTable) -> Arc<Self> {
        Self::with_config(field, table, Config::default())
    }

    pub fn with_config(field: Field, table: VariableTable, config: Config) -> Arc<Self> {
        Arc::new(PolyRing { field, table, config })
    }

    /// Convenience constructor for a base ring on the given names.
    pub fn from_names<S: AsRef<str>>(field: Field, names: &[S]) -> Result<Arc<Self>> {
        Ok(Self::new(field, VariableTable::from_names(names)?))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn table(&self) -> &VariableTable {
        &self.table
    }

    pub fn nvars(&self) -> usize {
        self.table.len()
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    /// Same field, table and config with `extra` prepended as new variables.
    pub(crate) fn with_leading_vars(&self, extra: &[&str]) -> Arc<Self> {
        let mut vars: Vec<Variable> = extra.iter().map(|n| Variable::base(*n, usize::MAX)).collect();
        vars.extend(self.table.vars.iter().cloned());
        let table = VariableTable::from_ordered(vars).expect("auxiliary names are reserved");
        Arc::new(PolyRing { field: self.field, table, config: self.config.clone() })
    }

    pub(crate) fn same(a: &Arc<PolyRing>, b: &Arc<PolyRing>) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }

    pub(crate) fn check_same(a: &Arc<PolyRing>, b: &Arc<PolyRing>) -> Result<()> {
        if Self::same(a, b) {
            Ok(())
        } else {
            Err(Error::RingMismatch(format!("{a} vs {b}")))
        }
    }
}

impl fmt::Display for PolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.field {
            Field::Rationals => write!(f, "QQ")?,
            Field::Prime(p) => write!(f, "GF({p})")?,
        }
        write!(f, "[{}]", self.table.names.join(", "))
    }
}
