//! Polynomials and free-module vectors as sorted term lists, with arithmetic,
//! derivatives, jets, substitution and coefficient collection.

use super::{ModMonomial, RingCtx, RingError};
use crate::field::Coef;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coef: Coef,
    pub mon: ModMonomial,
}

/// An element of the free module `K[x]^r`: a term list strictly decreasing
/// under the ambient ordering, with no zero coefficients. `Poly` is the rank-1
/// case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vect {
    pub terms: Vec<Term>,
    pub rank: usize,
}

pub type Poly = Vect;

impl Vect {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&Term> {
        self.terms.first()
    }

    /// Minimal total degree over all terms (the order of the series).
    pub fn min_degree(&self) -> Option<u64> {
        self.terms.iter().map(|t| t.mon.total_degree()).min()
    }

    /// Maximal total degree over all terms.
    pub fn max_degree(&self) -> Option<u64> {
        self.terms.iter().map(|t| t.mon.total_degree()).max()
    }

    /// Degree spread between the polynomial and its leading term.
    pub fn ecart(&self) -> u64 {
        match (self.max_degree(), self.lead()) {
            (Some(d), Some(l)) => d - l.mon.total_degree(),
            _ => 0,
        }
    }

    pub fn has_constant_term(&self) -> bool {
        self.terms.iter().any(|t| t.mon.is_constant())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
    ScalarMul,
    MonomialMul,
}

#[derive(Debug, Clone)]
pub enum PolyArg<'a> {
    Vect(&'a Vect),
    Coef(&'a Coef),
    Mono(&'a ModMonomial),
}

impl RingCtx {
    pub fn zero_vect(&self, rank: usize) -> Vect {
        Vect {
            terms: Vec::new(),
            rank,
        }
    }

    pub fn zero_poly(&self) -> Poly {
        self.zero_vect(1)
    }

    pub fn constant(&self, c: Coef) -> Poly {
        self.from_terms(
            vec![Term {
                coef: c,
                mon: ModMonomial::one(self.nvars()),
            }],
            1,
        )
    }

    pub fn var_poly(&self, i: usize) -> Poly {
        self.from_terms(
            vec![Term {
                coef: self.field.one(),
                mon: ModMonomial::var(self.nvars(), i),
            }],
            1,
        )
    }

    pub fn monomial_poly(&self, mon: ModMonomial, rank: usize) -> Vect {
        self.from_terms(
            vec![Term {
                coef: self.field.one(),
                mon,
            }],
            rank,
        )
    }

    /// Sorts descending, merges duplicate monomials, drops zero coefficients.
    pub fn from_terms(&self, mut terms: Vec<Term>, rank: usize) -> Vect {
        let ord = self.ordering;
        terms.sort_by(|a, b| ord.cmp(&b.mon, &a.mon));
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            if let Some(last) = out.last_mut() {
                if last.mon == t.mon {
                    last.coef = last.coef.add(&t.coef);
                    if last.coef.is_zero() {
                        out.pop();
                    }
                    continue;
                }
            }
            if !t.coef.is_zero() {
                out.push(t);
            }
        }
        Vect { terms: out, rank }
    }

    pub fn add(&self, f: &Vect, g: &Vect) -> Vect {
        assert_eq!(f.rank, g.rank, "rank mismatch");
        let ord = self.ordering;
        let mut out = Vec::with_capacity(f.terms.len() + g.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < f.terms.len() && j < g.terms.len() {
            match ord.cmp(&f.terms[i].mon, &g.terms[j].mon) {
                std::cmp::Ordering::Greater => {
                    out.push(f.terms[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push(g.terms[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = f.terms[i].coef.add(&g.terms[j].coef);
                    if !c.is_zero() {
                        out.push(Term {
                            coef: c,
                            mon: f.terms[i].mon.clone(),
                        });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&f.terms[i..]);
        out.extend_from_slice(&g.terms[j..]);
        Vect {
            terms: out,
            rank: f.rank,
        }
    }

    pub fn neg(&self, f: &Vect) -> Vect {
        Vect {
            terms: f
                .terms
                .iter()
                .map(|t| Term {
                    coef: t.coef.neg(),
                    mon: t.mon.clone(),
                })
                .collect(),
            rank: f.rank,
        }
    }

    pub fn sub(&self, f: &Vect, g: &Vect) -> Vect {
        self.add(f, &self.neg(g))
    }

    pub fn scalar_mul(&self, c: &Coef, f: &Vect) -> Vect {
        if c.is_zero() {
            return self.zero_vect(f.rank);
        }
        Vect {
            terms: f
                .terms
                .iter()
                .map(|t| Term {
                    coef: t.coef.mul(c),
                    mon: t.mon.clone(),
                })
                .collect(),
            rank: f.rank,
        }
    }

    /// Multiplies by `c * mono` where `mono` is a ring monomial (component 0).
    /// The ordering is multiplicative, so sortedness is preserved.
    pub fn term_mul(&self, c: &Coef, mono: &ModMonomial, f: &Vect) -> Vect {
        if c.is_zero() {
            return self.zero_vect(f.rank);
        }
        Vect {
            terms: f
                .terms
                .iter()
                .map(|t| Term {
                    coef: t.coef.mul(c),
                    mon: mono.mul(&t.mon),
                })
                .collect(),
            rank: f.rank,
        }
    }

    pub fn monomial_mul(&self, mono: &ModMonomial, f: &Vect) -> Vect {
        self.term_mul(&self.field.one(), mono, f)
    }

    /// Ring element times module element (rank 1 times rank r).
    pub fn mul(&self, f: &Poly, g: &Vect) -> Vect {
        assert_eq!(f.rank, 1, "left factor must have rank 1");
        let mut acc = self.zero_vect(g.rank);
        for t in &f.terms {
            acc = self.add(&acc, &self.term_mul(&t.coef, &t.mon, g));
        }
        acc
    }

    /// Checked dispatch mirroring the public arithmetic contract.
    pub fn poly_arith(&self, op: PolyOp, f: &Vect, g: PolyArg) -> Result<Vect, RingError> {
        self.check_vect(f)?;
        match (op, g) {
            (PolyOp::Add, PolyArg::Vect(g)) | (PolyOp::Sub, PolyArg::Vect(g)) => {
                self.check_vect(g)?;
                if f.rank != g.rank {
                    return Err(RingError::RankMismatch(f.rank, g.rank));
                }
                Ok(if op == PolyOp::Add {
                    self.add(f, g)
                } else {
                    self.sub(f, g)
                })
            }
            (PolyOp::Mul, PolyArg::Vect(g)) => {
                self.check_vect(g)?;
                if f.rank != 1 {
                    return Err(RingError::RankMismatch(f.rank, 1));
                }
                Ok(self.mul(f, g))
            }
            (PolyOp::ScalarMul, PolyArg::Coef(c)) => {
                if c.field() != self.field {
                    return Err(RingError::RingMismatch("scalar from another field".into()));
                }
                Ok(self.scalar_mul(c, f))
            }
            (PolyOp::MonomialMul, PolyArg::Mono(m)) => {
                if m.exps.len() != self.nvars() || m.comp != 0 {
                    return Err(RingError::RingMismatch("monomial from another ring".into()));
                }
                Ok(self.monomial_mul(m, f))
            }
            _ => Err(RingError::RingMismatch("operand kind mismatch".into())),
        }
    }

    fn check_vect(&self, f: &Vect) -> Result<(), RingError> {
        for t in &f.terms {
            if t.mon.exps.len() != self.nvars() {
                return Err(RingError::RingMismatch(
                    "exponent vector length differs from ring".into(),
                ));
            }
            if t.coef.field() != self.field {
                return Err(RingError::RingMismatch("coefficient field differs".into()));
            }
        }
        Ok(())
    }

    /// Formal partial derivative with respect to variable `i`; in
    /// characteristic p the term `x_i^p` differentiates to zero.
    pub fn partial_derivative(&self, f: &Vect, i: usize) -> Vect {
        let mut terms = Vec::new();
        for t in &f.terms {
            let e = t.mon.exps[i];
            if e == 0 {
                continue;
            }
            let c = t.coef.mul(&self.field.from_i64(e as i64));
            if c.is_zero() {
                continue;
            }
            let mut mon = t.mon.clone();
            mon.exps[i] = e - 1;
            terms.push(Term { coef: c, mon });
        }
        self.from_terms(terms, f.rank)
    }

    /// Drops every term of total degree (in `deg_vars`, default all variables)
    /// exceeding `k`.
    pub fn jet(&self, f: &Vect, k: u32, deg_vars: Option<&[usize]>) -> Vect {
        let terms = f
            .terms
            .iter()
            .filter(|t| {
                let d = match deg_vars {
                    Some(vs) => t.mon.degree_in(vs),
                    None => t.mon.total_degree(),
                };
                d <= k as u64
            })
            .cloned()
            .collect();
        Vect {
            terms,
            rank: f.rank,
        }
    }

    /// Evaluates `f` at `images` (one per variable of `self`), truncating to
    /// jet `trunc_k` in `trunc_vars` of the target ring after every product.
    /// The result lives in `dst`, the ring of the images.
    pub fn substitute(
        &self,
        f: &Poly,
        images: &[Poly],
        dst: &RingCtx,
        trunc_k: u32,
        trunc_vars: Option<&[usize]>,
    ) -> Result<Poly, RingError> {
        if images.len() != self.nvars() {
            return Err(RingError::RingMismatch(format!(
                "expected {} images, got {}",
                self.nvars(),
                images.len()
            )));
        }
        if self.field != dst.field {
            return Err(RingError::RingMismatch(
                "source and target fields differ".into(),
            ));
        }
        let mut acc = dst.zero_poly();
        for t in &f.terms {
            let mut val = dst.constant(t.coef.clone());
            for (i, img) in images.iter().enumerate() {
                for _ in 0..t.mon.exps[i] {
                    val = dst.jet(&dst.mul(&val, img), trunc_k, trunc_vars);
                }
            }
            acc = dst.add(&acc, &val);
        }
        Ok(dst.jet(&acc, trunc_k, trunc_vars))
    }

    /// Splits `f` (a polynomial in this joint ring) by its monomials in the
    /// variables `x_idx`. Each pair is the x-part (exponents in the order of
    /// `x_idx`, as a monomial of the `x_idx.len()`-variable ring) together
    /// with its coefficient, a polynomial in `param_ctx`; `param_map[j]` is
    /// the index in this ring of the j-th variable of `param_ctx`.
    ///
    /// With `full_up_to = Some(k)` the result lists every x-monomial of
    /// degree at most `k`, absent ones with zero coefficient, in descending
    /// local-degree order.
    pub fn collect_coefficients(
        &self,
        f: &Poly,
        x_idx: &[usize],
        param_ctx: &RingCtx,
        param_map: &[usize],
        full_up_to: Option<u32>,
    ) -> Result<Vec<(ModMonomial, Poly)>, RingError> {
        assert_eq!(param_map.len(), param_ctx.nvars());
        let mut groups: Vec<(ModMonomial, Vec<Term>)> = Vec::new();
        for t in &f.terms {
            let x_part = ModMonomial {
                exps: x_idx.iter().map(|&i| t.mon.exps[i]).collect(),
                comp: 0,
            };
            let mut pexps = vec![0u32; param_ctx.nvars()];
            let mut seen: u64 = x_part.total_degree();
            for (j, &src) in param_map.iter().enumerate() {
                pexps[j] = t.mon.exps[src];
                seen += pexps[j] as u64;
            }
            if seen != t.mon.total_degree() {
                return Err(RingError::RingMismatch(
                    "term involves a variable that is neither collected nor a parameter".into(),
                ));
            }
            let pterm = Term {
                coef: t.coef.clone(),
                mon: ModMonomial {
                    exps: pexps,
                    comp: 0,
                },
            };
            match groups.iter_mut().find(|(m, _)| *m == x_part) {
                Some((_, ts)) => ts.push(pterm),
                None => groups.push((x_part, vec![pterm])),
            }
        }
        let mut out: Vec<(ModMonomial, Poly)> = groups
            .into_iter()
            .map(|(m, ts)| (m, param_ctx.from_terms(ts, 1)))
            .collect();
        let local = super::Ordering::local();
        out.sort_by(|a, b| local.cmp(&b.0, &a.0));
        if let Some(k) = full_up_to {
            let all = super::monomials_up_to(x_idx.len(), k);
            let mut full = Vec::with_capacity(all.len());
            for m in all {
                match out.iter().find(|(g, _)| *g == m) {
                    Some((_, p)) => full.push((m, p.clone())),
                    None => full.push((m, param_ctx.zero_poly())),
                }
            }
            out = full;
        }
        Ok(out)
    }

    /// Transports `f` into `dst`, sending variable `i` of this ring to
    /// variable `var_map[i]` of `dst`, and re-sorts under the target ordering.
    pub fn map_to(
        &self,
        f: &Vect,
        dst: &RingCtx,
        var_map: &[usize],
    ) -> Result<Vect, RingError> {
        if self.field != dst.field {
            return Err(RingError::RingMismatch("fields differ".into()));
        }
        let mut terms = Vec::with_capacity(f.terms.len());
        for t in &f.terms {
            let mut exps = vec![0u32; dst.nvars()];
            for (i, &e) in t.mon.exps.iter().enumerate() {
                if e > 0 {
                    exps[var_map[i]] = e;
                }
            }
            terms.push(Term {
                coef: t.coef.clone(),
                mon: ModMonomial {
                    exps,
                    comp: t.mon.comp,
                },
            });
        }
        Ok(dst.from_terms(terms, f.rank))
    }

    /// Extracts component `c` of a module element as a rank-1 polynomial.
    pub fn component(&self, f: &Vect, c: usize) -> Poly {
        let terms = f
            .terms
            .iter()
            .filter(|t| t.mon.comp == c)
            .map(|t| Term {
                coef: t.coef.clone(),
                mon: ModMonomial {
                    exps: t.mon.exps.clone(),
                    comp: 0,
                },
            })
            .collect();
        self.from_terms(terms, 1)
    }

    /// Embeds a rank-1 polynomial into component `c` of a rank-`r` module.
    pub fn into_component(&self, f: &Poly, c: usize, rank: usize) -> Vect {
        let terms = f
            .terms
            .iter()
            .map(|t| Term {
                coef: t.coef.clone(),
                mon: ModMonomial {
                    exps: t.mon.exps.clone(),
                    comp: c,
                },
            })
            .collect();
        self.from_terms(terms, rank)
    }

    fn render_mono(&self, mon: &ModMonomial) -> String {
        let mut parts = Vec::new();
        for (i, &e) in mon.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.vars[i].clone()),
                _ => parts.push(format!("{}^{}", self.vars[i], e)),
            }
        }
        parts.join("*")
    }

    /// Canonical rendering in the polynomial grammar, terms in descending
    /// ambient order.
    pub fn render_poly(&self, f: &Poly) -> String {
        if f.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, t) in f.terms.iter().enumerate() {
            let (coef, negative) = if t.coef.is_negative() {
                (t.coef.neg(), true)
            } else {
                (t.coef.clone(), false)
            };
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { "-" } else { "+" });
            }
            let m = self.render_mono(&t.mon);
            if m.is_empty() {
                out.push_str(&coef.render());
            } else if coef.is_one() {
                out.push_str(&m);
            } else {
                out.push_str(&coef.render());
                out.push('*');
                out.push_str(&m);
            }
        }
        out
    }

    /// Renders a module element as a bracketed component list; rank 1 renders
    /// as a bare polynomial.
    pub fn render_vect(&self, f: &Vect) -> String {
        if f.rank == 1 {
            return self.render_poly(&self.component(f, 0));
        }
        let comps: Vec<String> = (0..f.rank)
            .map(|c| self.render_poly(&self.component(f, c)))
            .collect();
        format!("[{}]", comps.join(", "))
    }
}
