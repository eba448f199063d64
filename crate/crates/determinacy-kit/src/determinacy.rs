//! Tangent images of jet-group orbits, quotient K-basis and codimension,
//! pre-determinacy and determinacy bounds.

use crate::ring::{monomials_of_degree, ModMonomial, Ordering, Poly, RingCtx, Vect};
use crate::sbasis::{self, StdBasis};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DetError {
    #[error("matrix is not in the maximal-ideal slice (an entry has a constant term)")]
    NotInMaximalIdeal,
    #[error("tangent image has infinite codimension")]
    InfiniteCodimension,
    #[error("contact group is only defined for 1x1 matrices")]
    ContactNeedsScalar,
    #[error(transparent)]
    Sbasis(#[from] sbasis::SbasisError),
    #[error(transparent)]
    Ring(#[from] crate::ring::RingError),
}

/// The acting group. The contact group is the `m = n = 1` case of `Gl`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupKind {
    /// Coordinate changes only.
    RightR,
    /// Invertible left factor plus coordinate changes.
    Gl,
    /// Invertible right factor plus coordinate changes.
    Gr,
    /// Invertible factors on both sides plus coordinate changes.
    Glr,
}

impl GroupKind {
    pub fn has_left(&self) -> bool {
        matches!(self, GroupKind::Gl | GroupKind::Glr)
    }

    pub fn has_right(&self) -> bool {
        matches!(self, GroupKind::Gr | GroupKind::Glr)
    }

    pub fn name(&self) -> &'static str {
        match self {
            GroupKind::RightR => "right",
            GroupKind::Gl => "left",
            GroupKind::Gr => "rightside",
            GroupKind::Glr => "leftright",
        }
    }
}

/// An m-by-n matrix of polynomial truncations of power series over a common
/// ring, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixSeries {
    pub m: usize,
    pub n: usize,
    pub entries: Vec<Poly>,
}

impl MatrixSeries {
    pub fn new(m: usize, n: usize, entries: Vec<Poly>) -> Self {
        assert_eq!(entries.len(), m * n);
        MatrixSeries { m, n, entries }
    }

    pub fn scalar(f: Poly) -> Self {
        MatrixSeries::new(1, 1, vec![f])
    }

    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.n + j]
    }

    /// Minimum order over the nonzero entries.
    pub fn order(&self) -> Option<u64> {
        self.entries.iter().filter_map(|e| e.min_degree()).min()
    }

    pub fn in_max_ideal(&self) -> bool {
        self.entries.iter().all(|e| !e.has_constant_term())
    }

    /// Row-major flattening into a rank-mn module element.
    pub fn flatten(&self, ctx: &RingCtx) -> Vect {
        let rank = self.m * self.n;
        let mut terms = Vec::new();
        for (c, e) in self.entries.iter().enumerate() {
            terms.extend(ctx.into_component(e, c, rank).terms);
        }
        ctx.from_terms(terms, rank)
    }
}

/// Standard basis of the tangent image at `A` of the orbit under `group`.
#[derive(Debug, Clone)]
pub struct TangentImage {
    pub basis: StdBasis,
    pub group: GroupKind,
    pub m: usize,
    pub n: usize,
}

/// Codimension, pre-determinacy and determinacy bound. `None` bounds encode
/// the infinite-codimension case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetermResult {
    pub codim: Option<usize>,
    pub pre_bound: Option<u32>,
    pub determ_bound: Option<i64>,
    pub order: u64,
}

fn local_ctx(ctx: &RingCtx) -> RingCtx {
    ctx.with_ordering(Ordering::local())
}

/// The generating set of the tangent image before completion: left
/// matrix-unit multiples, right matrix-unit multiples and maximal-ideal
/// multiples of the partials, per group.
pub fn tangent_image_generators(
    a: &MatrixSeries,
    group: GroupKind,
    ctx: &RingCtx,
) -> Result<Vec<Vect>, DetError> {
    if !a.in_max_ideal() {
        return Err(DetError::NotInMaximalIdeal);
    }
    let ctx = local_ctx(ctx);
    let (m, n, s) = (a.m, a.n, ctx.nvars());
    let mut gens = Vec::new();
    if group.has_left() {
        // E_{m,pq} * A places row q of A into row p
        for p in 0..m {
            for q in 0..m {
                let mut entries = vec![ctx.zero_poly(); m * n];
                for j in 0..n {
                    entries[p * n + j] = a.entry(q, j).clone();
                }
                gens.push(MatrixSeries::new(m, n, entries).flatten(&ctx));
            }
        }
    }
    if group.has_right() {
        // A * E_{n,hl} places column h of A into column l
        for h in 0..n {
            for l in 0..n {
                let mut entries = vec![ctx.zero_poly(); m * n];
                for i in 0..m {
                    entries[i * n + l] = a.entry(i, h).clone();
                }
                gens.push(MatrixSeries::new(m, n, entries).flatten(&ctx));
            }
        }
    }
    for mu in 0..s {
        for nu in 0..s {
            let x_mu = ModMonomial::var(s, mu);
            let entries: Vec<Poly> = a
                .entries
                .iter()
                .map(|e| ctx.monomial_mul(&x_mu, &ctx.partial_derivative(e, nu)))
                .collect();
            gens.push(MatrixSeries::new(m, n, entries).flatten(&ctx));
        }
    }
    Ok(gens.into_iter().filter(|g| !g.is_zero()).collect())
}

/// Standard basis of the tangent image under the fixed local module ordering.
pub fn tangent_image(
    a: &MatrixSeries,
    group: GroupKind,
    ctx: &RingCtx,
) -> Result<TangentImage, DetError> {
    let lctx = local_ctx(ctx);
    let gens = tangent_image_generators(a, group, &lctx)?;
    let mut basis = sbasis::std_saturating(&gens, &lctx);
    basis.rank = a.m * a.n;
    Ok(TangentImage {
        basis,
        group,
        m: a.m,
        n: a.n,
    })
}

/// Monomial K-basis of the quotient by the tangent image together with the
/// codimension; `None` when the codimension is infinite.
pub fn basis_codim(t: &TangentImage, ctx: &RingCtx) -> Option<(Vec<ModMonomial>, usize)> {
    let st = t.basis.staircase();
    let v = sbasis::vdim(&st, ctx.nvars())?;
    if v == 0 {
        return Some((Vec::new(), 0));
    }
    let kb = sbasis::kbase(&t.basis).ok()?;
    Some((kb, v))
}

/// The smallest `p` with every monomial of degree p+1 (times every unit
/// vector) weakly reducing to zero, i.e. the p-th power of the maximal ideal
/// times the module sits inside the tangent image. `None` when the
/// codimension is infinite.
pub fn predeterminacy(
    a: &MatrixSeries,
    group: GroupKind,
    ctx: &RingCtx,
) -> Result<Option<u32>, DetError> {
    let t = tangent_image(a, group, ctx)?;
    predeterminacy_of(&t, ctx)
}

pub fn predeterminacy_of(t: &TangentImage, ctx: &RingCtx) -> Result<Option<u32>, DetError> {
    let lctx = local_ctx(ctx);
    let st = t.basis.staircase();
    if sbasis::vdim(&st, lctx.nvars()).is_none() {
        return Ok(None);
    }
    let rank = t.m * t.n;
    let s = lctx.nvars();
    let mut p: u32 = 0;
    loop {
        let mut all_zero = true;
        'outer: for mono in monomials_of_degree(s, p + 1) {
            for c in 0..rank {
                let m = ModMonomial {
                    exps: mono.exps.clone(),
                    comp: c,
                };
                let f = lctx.monomial_poly(m, rank);
                if !sbasis::mora_nf(&f, &t.basis.gens, &lctx).nf.is_zero() {
                    all_zero = false;
                    break 'outer;
                }
            }
        }
        if all_zero {
            return Ok(Some(p));
        }
        p += 1;
    }
}

/// Codimension, pre-determinacy bound and the determinacy bound
/// `d = 2p - ord(A) + 2`.
pub fn determinacy_bound(
    a: &MatrixSeries,
    group: GroupKind,
    ctx: &RingCtx,
) -> Result<DetermResult, DetError> {
    let t = tangent_image(a, group, ctx)?;
    let codim = basis_codim(&t, ctx).map(|(_, c)| c);
    let order = a.order().unwrap_or(0);
    if codim.is_none() {
        return Ok(DetermResult {
            codim: None,
            pre_bound: None,
            determ_bound: None,
            order,
        });
    }
    let p = predeterminacy_of(&t, ctx)?.expect("finite codimension");
    Ok(DetermResult {
        codim,
        pre_bound: Some(p),
        determ_bound: Some(2 * p as i64 - order as i64 + 2),
        order,
    })
}

/// Verdict for an infinite-codimension instance: for column matrices under
/// the left-side groups, infinite codimension certifies that the matrix is
/// not finitely determined; otherwise the question is left open.
pub fn infinite_verdict(group: GroupKind, n: usize) -> &'static str {
    if n == 1 && matches!(group, GroupKind::Gl | GroupKind::Glr) {
        "not-finitely-determined"
    } else {
        "undecided"
    }
}
