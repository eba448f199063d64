//! Monomials, monomial orderings, polynomials and free-module vectors over an
//! exact coefficient field, together with derivatives, jets, substitution,
//! coefficient collection and a text parser.

mod parse;
mod poly;

pub use parse::parse_poly;
pub use poly::{Poly, Term, Vect};

use crate::field::FieldSpec;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("syntax error at offset {pos}: {msg}")]
    SyntaxError { pos: usize, msg: String },
    #[error("unknown variable `{name}` at offset {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("invalid variable name `{0}`")]
    InvalidVariableName(String),
    #[error("duplicate variable name `{0}`")]
    DuplicateVariableName(String),
    #[error("ring needs at least one variable")]
    NoVariables,
}

/// Comparison rule for the monomial part of a module monomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderKind {
    /// 1 > x_i: smaller total degree is larger, ties reverse-lexicographic
    /// from the last variable.
    LocalDeg,
    /// x_i > 1: larger total degree is larger, ties reverse-lexicographic
    /// from the last variable.
    GlobalDeg,
    /// The first `e` variables, compared by GlobalDeg among themselves,
    /// dominate; ties fall through to GlobalDeg on the rest.
    Block(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModuleRule {
    None,
    /// Monomial parts first; equal monomials compare by component, lower
    /// component being larger.
    TermOverComponent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ordering {
    pub kind: OrderKind,
    pub module_rule: ModuleRule,
}

impl Ordering {
    pub fn local() -> Self {
        Ordering {
            kind: OrderKind::LocalDeg,
            module_rule: ModuleRule::TermOverComponent,
        }
    }

    pub fn global() -> Self {
        Ordering {
            kind: OrderKind::GlobalDeg,
            module_rule: ModuleRule::None,
        }
    }

    pub fn block(elim_count: usize) -> Self {
        Ordering {
            kind: OrderKind::Block(elim_count),
            module_rule: ModuleRule::None,
        }
    }

    /// True when leading terms are the maximal-degree terms, i.e. the ordering
    /// is a well-ordering and plain division terminates without unit tricks.
    pub fn is_global(&self) -> bool {
        !matches!(self.kind, OrderKind::LocalDeg)
    }

    pub fn cmp_exps(&self, a: &[u32], b: &[u32]) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        match self.kind {
            OrderKind::GlobalDeg => cmp_deg_revlex(a, b),
            OrderKind::LocalDeg => {
                let (da, db) = (total(a), total(b));
                match da.cmp(&db) {
                    Less => Greater,
                    Greater => Less,
                    Equal => revlex_tie(a, b),
                }
            }
            OrderKind::Block(e) => {
                cmp_deg_revlex(&a[..e], &b[..e]).then_with(|| cmp_deg_revlex(&a[e..], &b[e..]))
            }
        }
    }

    pub fn cmp(&self, a: &ModMonomial, b: &ModMonomial) -> std::cmp::Ordering {
        self.cmp_exps(&a.exps, &b.exps)
            .then_with(|| b.comp.cmp(&a.comp))
    }
}

fn total(a: &[u32]) -> u64 {
    a.iter().map(|&e| e as u64).sum()
}

fn revlex_tie(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    for i in (0..a.len()).rev() {
        if a[i] != b[i] {
            // smaller exponent at the first differing position from the right is larger
            return b[i].cmp(&a[i]);
        }
    }
    std::cmp::Ordering::Equal
}

fn cmp_deg_revlex(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    total(a).cmp(&total(b)).then_with(|| revlex_tie(a, b))
}

/// Exponent vector plus free-module component; the atom of all orderings.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModMonomial {
    pub exps: Vec<u32>,
    pub comp: usize,
}

impl ModMonomial {
    pub fn one(nvars: usize) -> Self {
        ModMonomial {
            exps: vec![0; nvars],
            comp: 0,
        }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        m.exps[i] = 1;
        m
    }

    pub fn unit(nvars: usize, comp: usize) -> Self {
        ModMonomial {
            exps: vec![0; nvars],
            comp,
        }
    }

    pub fn total_degree(&self) -> u64 {
        total(&self.exps)
    }

    pub fn degree_in(&self, vars: &[usize]) -> u64 {
        vars.iter().map(|&i| self.exps[i] as u64).sum()
    }

    pub fn is_constant(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Divisibility within the free module: equal components and
    /// componentwise smaller exponents.
    pub fn divides(&self, other: &ModMonomial) -> bool {
        self.comp == other.comp
            && self
                .exps
                .iter()
                .zip(&other.exps)
                .all(|(a, b)| a <= b)
    }

    /// `self * other` where at most one factor carries a nonzero component.
    pub fn mul(&self, other: &ModMonomial) -> ModMonomial {
        debug_assert!(self.comp == 0 || other.comp == 0);
        ModMonomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
            comp: self.comp + other.comp,
        }
    }

    /// `other / self`; caller guarantees divisibility. The quotient is a ring
    /// monomial (component 0).
    pub fn quotient_to(&self, other: &ModMonomial) -> ModMonomial {
        debug_assert!(self.divides(other));
        ModMonomial {
            exps: other
                .exps
                .iter()
                .zip(&self.exps)
                .map(|(b, a)| b - a)
                .collect(),
            comp: 0,
        }
    }

    pub fn lcm(&self, other: &ModMonomial) -> ModMonomial {
        debug_assert_eq!(self.comp, other.comp);
        ModMonomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| *a.max(b))
                .collect(),
            comp: self.comp,
        }
    }

    pub fn coprime(&self, other: &ModMonomial) -> bool {
        self.exps
            .iter()
            .zip(&other.exps)
            .all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn support(&self) -> Vec<usize> {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
            .collect()
    }
}

fn valid_var_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '(' || c == ')')
}

/// A polynomial ring context: coefficient field, ordered variable names and
/// the ambient monomial ordering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingCtx {
    pub field: FieldSpec,
    pub vars: Vec<String>,
    pub ordering: Ordering,
}

impl RingCtx {
    pub fn new(field: FieldSpec, vars: Vec<String>, ordering: Ordering) -> Result<Self, RingError> {
        if vars.is_empty() {
            return Err(RingError::NoVariables);
        }
        for (i, v) in vars.iter().enumerate() {
            if !valid_var_name(v) {
                return Err(RingError::InvalidVariableName(v.clone()));
            }
            if vars[..i].contains(v) {
                return Err(RingError::DuplicateVariableName(v.clone()));
            }
        }
        Ok(RingCtx {
            field,
            vars,
            ordering,
        })
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Same field and variables, different ordering.
    pub fn with_ordering(&self, ordering: Ordering) -> RingCtx {
        RingCtx {
            field: self.field,
            vars: self.vars.clone(),
            ordering,
        }
    }
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

/// Dimension of the jet space `M_{m,n}^{(k)}`: `mn * C(s+k, k)`.
pub fn jet_space_dim(m: usize, n: usize, s: usize, k: u32) -> usize {
    (m as u128 * n as u128 * binomial(s as u64 + k as u64, k as u64)) as usize
}

/// All exponent vectors over `s` variables of total degree at most `k`,
/// sorted descending under the local degree ordering: 1 first, then the
/// degree-1 monomials, and so on.
pub fn monomials_up_to(s: usize, k: u32) -> Vec<ModMonomial> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; s];
    gen_monomials(s, k, 0, &mut cur, &mut out);
    let ord = Ordering::local();
    out.sort_by(|a, b| ord.cmp(b, a));
    out
}

/// Exponent vectors of total degree exactly `d`.
pub fn monomials_of_degree(s: usize, d: u32) -> Vec<ModMonomial> {
    monomials_up_to(s, d)
        .into_iter()
        .filter(|m| m.total_degree() == d as u64)
        .collect()
}

fn gen_monomials(s: usize, k: u32, i: usize, cur: &mut Vec<u32>, out: &mut Vec<ModMonomial>) {
    if i == s {
        out.push(ModMonomial {
            exps: cur.clone(),
            comp: 0,
        });
        return;
    }
    let used: u32 = cur[..i].iter().sum();
    for e in 0..=(k - used) {
        cur[i] = e;
        gen_monomials(s, k, i + 1, cur, out);
    }
    cur[i] = 0;
}
