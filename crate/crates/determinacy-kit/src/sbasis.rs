//! Standard-basis engine: Mora weak normal form for local (and block/global)
//! orderings on ideals and submodules, Buchberger-style completion, staircase
//! queries (vdim, kbase), Krull dimension and elimination.

use crate::field::{Coef, FieldSpec};
use crate::ring::{ModMonomial, OrderKind, Ordering, RingCtx, RingError, Vect};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SbasisError {
    #[error("inputs computed under different orderings")]
    OrderingMismatch,
    #[error("operation requires rank 1 (an ideal), got rank {0}")]
    RankError(usize),
    #[error("quotient has infinite dimension")]
    InfiniteDimension,
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Result of a weak normal form computation: `unit_is_one` records whether
/// the division used only the original reducers, in which case `u = 1` in
/// `u*f = sum h_i g_i + nf`.
#[derive(Debug, Clone)]
pub struct MoraResult {
    pub nf: Vect,
    pub unit_is_one: bool,
}

/// Mora's weak normal form. For local orderings the candidate set grows with
/// intermediate results and the division proves `u*f` in the module for a
/// power series unit `u`; for global orderings this is plain division with
/// `u = 1`. Terminates for every input by the ecart bound.
pub fn mora_nf(f: &Vect, basis: &[Vect], ctx: &RingCtx) -> MoraResult {
    let mut t: Vec<Vect> = basis.iter().filter(|g| !g.is_zero()).cloned().collect();
    // High-corner truncation: when the reducer leads cover every monomial of
    // degree >= N, anything supported in degree >= N lies in the generated
    // submodule and can be dropped during the division. This keeps the tails
    // from exploding under the local ordering and leaves the normal form
    // unchanged modulo the submodule (in particular `nf == 0` is preserved).
    let trunc = division_truncation(&t, ctx, f.rank);
    let clip = |h: Vect| match trunc {
        Some(n) => ctx.jet(&h, n.saturating_sub(1), None),
        None => h,
    };
    let mut h = clip(f.clone());
    let original = t.len();
    let mut unit_is_one = true;
    loop {
        let Some(lh) = h.lead().cloned() else {
            return MoraResult { nf: h, unit_is_one };
        };
        let mut best: Option<usize> = None;
        for (i, g) in t.iter().enumerate() {
            if g.lead().unwrap().mon.divides(&lh.mon)
                && best.map(|b| g.ecart() < t[b].ecart()).unwrap_or(true)
            {
                best = Some(i);
            }
        }
        let Some(bi) = best else {
            return MoraResult { nf: h, unit_is_one };
        };
        if bi >= original {
            unit_is_one = false;
        }
        if !ctx.ordering.is_global() && t[bi].ecart() > h.ecart() {
            t.push(h.clone());
        }
        let g = t[bi].clone();
        let lg = g.lead().unwrap();
        let q = lg.mon.quotient_to(&lh.mon);
        let c = lh.coef.div(&lg.coef).expect("nonzero lead coefficient");
        h = clip(ctx.sub(&h, &ctx.term_mul(&c, &q, &g)));
        if matches!(ctx.field, FieldSpec::Rationals) && !h.is_zero() {
            h = content_normalize(&h, ctx);
        }
    }
}

/// The smallest degree `N` (if any) such that every monomial of degree at
/// least `N`, in every component, is divisible by a lead of `t`: derived from
/// the pure-power leads. Only meaningful for the local degree ordering.
fn division_truncation(t: &[Vect], ctx: &RingCtx, rank: usize) -> Option<u32> {
    if ctx.ordering.kind != OrderKind::LocalDeg {
        return None;
    }
    let leads: Vec<ModMonomial> = t
        .iter()
        .filter_map(|g| g.lead().map(|l| l.mon.clone()))
        .collect();
    if leads.is_empty() {
        return None;
    }
    let st = Staircase {
        lead_monomials: leads,
        rank,
    };
    let bounds = pure_power_bounds(&st, ctx.nvars())?;
    let crude = bounds
        .iter()
        .map(|comp| comp.iter().map(|&b| b.saturating_sub(1)).sum::<u32>() + 1)
        .max()?;
    // the smallest fully covered degree; cover propagates upward
    for d in 0..crude {
        if covers_degree(&st, ctx.nvars(), d) {
            return Some(d);
        }
    }
    Some(crude)
}

/// Whether every monomial of total degree `d`, in every component, is
/// divisible by some lead monomial of the staircase.
fn covers_degree(st: &Staircase, nvars: usize, d: u32) -> bool {
    for c in 0..st.rank {
        for m in crate::ring::monomials_of_degree(nvars, d) {
            let mm = ModMonomial {
                exps: m.exps,
                comp: c,
            };
            if !st.lead_monomials.iter().any(|l| l.divides(&mm)) {
                return false;
            }
        }
    }
    true
}

/// Standard basis tuned for submodules of finite codimension in the power
/// series module. The generators are augmented with every monomial of a
/// cutoff degree `K`, which bounds all intermediate reductions by `K`; if the
/// resulting leads cover every monomial of degree `K - 1`, Nakayama's lemma
/// gives `m^{K-1} M` inside the original submodule, so the cutoff monomials
/// were already members and the computed basis is a standard basis of the
/// original submodule. Otherwise `K` grows; past a fixed cap (infinite
/// codimension) this falls back to the plain completion.
pub fn std_saturating(gens: &[Vect], ctx: &RingCtx) -> StdBasis {
    const CAP: u32 = 32;
    if ctx.ordering.kind == OrderKind::LocalDeg && !gens.is_empty() {
        let rank = gens.iter().map(|g| g.rank).max().unwrap_or(1);
        let mindeg = gens
            .iter()
            .filter_map(|g| g.lead().map(|l| l.mon.total_degree() as u32))
            .max()
            .unwrap_or(0);
        let mut k = (mindeg + 1).max(2);
        while k <= CAP {
            let mut aug = gens.to_vec();
            for c in 0..rank {
                for m in crate::ring::monomials_of_degree(ctx.nvars(), k) {
                    aug.push(ctx.monomial_poly(
                        ModMonomial {
                            exps: m.exps,
                            comp: c,
                        },
                        rank,
                    ));
                }
            }
            let basis = std(&aug, ctx);
            if covers_degree(&basis.staircase(), ctx.nvars(), k - 1) {
                return basis;
            }
            k *= 2;
        }
    }
    std(gens, ctx)
}

/// S-vector of two module elements whose leads share a component.
pub fn spoly(f: &Vect, g: &Vect, ctx: &RingCtx) -> Vect {
    let lf = f.lead().unwrap();
    let lg = g.lead().unwrap();
    debug_assert_eq!(lf.mon.comp, lg.mon.comp);
    let lcm = lf.mon.lcm(&lg.mon);
    let qf = lf.mon.quotient_to(&lcm);
    let qg = lg.mon.quotient_to(&lcm);
    let cf = lg.coef.clone();
    let cg = lf.coef.clone();
    ctx.sub(
        &ctx.term_mul(&cf, &qf, f),
        &ctx.term_mul(&cg, &qg, g),
    )
}

/// A completed, minimalized standard basis.
#[derive(Debug, Clone)]
pub struct StdBasis {
    pub gens: Vec<Vect>,
    pub ordering: Ordering,
    pub rank: usize,
}

/// Leading monomials of a standard basis; the monomials outside the module
/// they generate form the staircase.
#[derive(Debug, Clone)]
pub struct Staircase {
    pub lead_monomials: Vec<ModMonomial>,
    pub rank: usize,
}

impl StdBasis {
    pub fn staircase(&self) -> Staircase {
        Staircase {
            lead_monomials: self
                .gens
                .iter()
                .map(|g| g.lead().unwrap().mon.clone())
                .collect(),
            rank: self.rank,
        }
    }
}

/// Scales to the cheapest representative: monic over GF(p); over the
/// rationals, primitive integer coefficients with a positive lead. Keeping
/// intermediate results primitive prevents big-rational coefficient swell.
fn content_normalize(f: &Vect, ctx: &RingCtx) -> Vect {
    if f.is_zero() {
        return f.clone();
    }
    match ctx.field {
        FieldSpec::PrimeField(_) => make_monic(f, ctx),
        FieldSpec::Rationals => {
            let mut den_lcm = BigInt::one();
            let mut num_gcd = BigInt::zero();
            for t in &f.terms {
                let Coef::Rat(r) = &t.coef else { unreachable!() };
                den_lcm = den_lcm.lcm(r.denom());
                num_gcd = num_gcd.gcd(r.numer());
            }
            let scale = Coef::Rat(BigRational::new(den_lcm, num_gcd));
            let g = ctx.scalar_mul(&scale, f);
            if g.lead().unwrap().coef.is_negative() {
                ctx.neg(&g)
            } else {
                g
            }
        }
    }
}

fn make_monic(f: &Vect, ctx: &RingCtx) -> Vect {
    match f.lead() {
        Some(l) => {
            let inv = l.coef.inv().unwrap();
            ctx.scalar_mul(&inv, f)
        }
        None => f.clone(),
    }
}

/// Full reduction for global orderings: every term of the result is
/// divisible by no lead of the basis. Not used under local orderings, where
/// tail reduction need not terminate.
fn reduce_fully(f: &Vect, basis: &[Vect], ctx: &RingCtx) -> Vect {
    debug_assert!(ctx.ordering.is_global());
    let mut h = f.clone();
    let mut done = ctx.zero_vect(f.rank);
    while let Some(lh) = h.lead().cloned() {
        let mut reduced = false;
        for g in basis {
            if let Some(lg) = g.lead() {
                if lg.mon.divides(&lh.mon) {
                    let q = lg.mon.quotient_to(&lh.mon);
                    let c = lh.coef.div(&lg.coef).unwrap();
                    h = ctx.sub(&h, &ctx.term_mul(&c, &q, g));
                    reduced = true;
                    break;
                }
            }
        }
        if !reduced {
            let lead = ctx.from_terms(vec![lh.clone()], f.rank);
            done = ctx.add(&done, &lead);
            h = ctx.sub(&h, &lead);
        }
    }
    done
}

/// Buchberger-style completion with Mora normal form. Pair selection follows
/// the normal strategy (lcm degree ascending) with product-criterion (ideals
/// only) and chain-criterion pruning. The output is lead-minimalized, monic,
/// and for global orderings fully interreduced.
pub fn std(gens_in: &[Vect], ctx: &RingCtx) -> StdBasis {
    let rank = gens_in.iter().map(|g| g.rank).max().unwrap_or(1);
    let mut basis: Vec<Vect> = gens_in
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| content_normalize(g, ctx))
        .collect();

    let mut pending: BTreeSet<(u64, usize, usize)> = BTreeSet::new();
    let mut considered: BTreeSet<(usize, usize)> = BTreeSet::new();
    let pair_key = |basis: &[Vect], i: usize, j: usize| {
        let li = &basis[i].lead().unwrap().mon;
        let lj = &basis[j].lead().unwrap().mon;
        (li.lcm(lj).total_degree(), i, j)
    };
    for j in 1..basis.len() {
        for i in 0..j {
            if basis[i].lead().unwrap().mon.comp == basis[j].lead().unwrap().mon.comp {
                pending.insert(pair_key(&basis, i, j));
            }
        }
    }

    while let Some(&(deg, i, j)) = pending.iter().next() {
        pending.remove(&(deg, i, j));
        considered.insert((i, j));
        let li = basis[i].lead().unwrap().mon.clone();
        let lj = basis[j].lead().unwrap().mon.clone();
        // product criterion (valid for ideals)
        if rank == 1 && li.coprime(&lj) {
            continue;
        }
        // chain criterion: some k with lead(k) | lcm(i,j) and both (i,k), (j,k) done
        let lcm = li.lcm(&lj);
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].lead().unwrap().mon.divides(&lcm)
                && considered.contains(&(i.min(k), i.max(k)))
                && considered.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let s = spoly(&basis[i], &basis[j], ctx);
        let nf = mora_nf(&s, &basis, ctx).nf;
        if !nf.is_zero() {
            let nf = content_normalize(&nf, ctx);
            let new = basis.len();
            basis.push(nf);
            for k in 0..new {
                if basis[k].lead().unwrap().mon.comp == basis[new].lead().unwrap().mon.comp {
                    pending.insert(pair_key(&basis, k, new));
                }
            }
        }
    }

    // lead-minimalization: drop generators whose lead another lead divides
    let mut keep = vec![true; basis.len()];
    for i in 0..basis.len() {
        if !keep[i] {
            continue;
        }
        for j in 0..basis.len() {
            if i == j || !keep[j] {
                continue;
            }
            let li = &basis[i].lead().unwrap().mon;
            let lj = &basis[j].lead().unwrap().mon;
            if li.divides(lj) && (lj != li || i < j) {
                keep[j] = false;
            }
        }
    }
    let mut minimal: Vec<Vect> = basis
        .into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(g, _)| g)
        .collect();

    if ctx.ordering.is_global() {
        for i in 0..minimal.len() {
            let mut others = minimal.clone();
            others.remove(i);
            minimal[i] = make_monic(&reduce_fully(&minimal[i], &others, ctx), ctx);
        }
    }

    let ord = ctx.ordering;
    minimal.sort_by(|a, b| ord.cmp(&b.lead().unwrap().mon, &a.lead().unwrap().mon));
    StdBasis {
        gens: minimal,
        ordering: ctx.ordering,
        rank,
    }
}

/// Checks the Buchberger criterion: every S-vector of two generators weakly
/// reduces to zero by the basis.
pub fn buchberger_holds(basis: &StdBasis, ctx: &RingCtx) -> bool {
    for i in 0..basis.gens.len() {
        for j in (i + 1)..basis.gens.len() {
            let (f, g) = (&basis.gens[i], &basis.gens[j]);
            if f.lead().unwrap().mon.comp != g.lead().unwrap().mon.comp {
                continue;
            }
            let s = spoly(f, g, ctx);
            if !mora_nf(&s, &basis.gens, ctx).nf.is_zero() {
                return false;
            }
        }
    }
    true
}

/// For each component, the minimal exponent `d` such that `x_i^d e_c` lies in
/// the leading module, for every variable; `None` when some pure power is
/// missing, i.e. the quotient is infinite-dimensional.
fn pure_power_bounds(st: &Staircase, nvars: usize) -> Option<Vec<Vec<u32>>> {
    let mut bounds = vec![vec![u32::MAX; nvars]; st.rank];
    for l in &st.lead_monomials {
        let sup = l.support();
        if sup.is_empty() {
            // a unit kills the whole component
            for b in bounds[l.comp].iter_mut() {
                *b = 0;
            }
        } else if sup.len() == 1 {
            let i = sup[0];
            bounds[l.comp][i] = bounds[l.comp][i].min(l.exps[i]);
        }
    }
    if bounds.iter().flatten().any(|&b| b == u32::MAX) {
        None
    } else {
        Some(bounds)
    }
}

fn monomials_in_box(bounds: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &b in bounds {
        let mut next = Vec::new();
        for prefix in &out {
            for e in 0..b {
                let mut v = prefix.clone();
                v.push(e);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// Number of monomials (with component) outside the leading module, or `None`
/// when the staircase criterion fails and the quotient is infinite.
pub fn vdim(st: &Staircase, nvars: usize) -> Option<usize> {
    kbase_raw(st, nvars).map(|v| v.len())
}

fn kbase_raw(st: &Staircase, nvars: usize) -> Option<Vec<ModMonomial>> {
    let bounds = pure_power_bounds(st, nvars)?;
    let mut out = Vec::new();
    for c in 0..st.rank {
        for exps in monomials_in_box(&bounds[c]) {
            let m = ModMonomial { exps, comp: c };
            if !st.lead_monomials.iter().any(|l| l.divides(&m)) {
                out.push(m);
            }
        }
    }
    Some(out)
}

/// The monomial K-basis of the quotient by the leading module, sorted
/// descending under the basis ordering.
pub fn kbase(basis: &StdBasis) -> Result<Vec<ModMonomial>, SbasisError> {
    let st = basis.staircase();
    let nvars = st
        .lead_monomials
        .first()
        .map(|m| m.exps.len())
        .unwrap_or(0);
    if st.lead_monomials.is_empty() {
        return Err(SbasisError::InfiniteDimension);
    }
    let mut out = kbase_raw(&st, nvars).ok_or(SbasisError::InfiniteDimension)?;
    let ord = basis.ordering;
    out.sort_by(|a, b| ord.cmp(b, a));
    Ok(out)
}

/// K-basis of the quotient by the leading module plus all monomials of degree
/// greater than `cap` (the quotient modulo the (cap+1)-st power of the
/// maximal ideal).
pub fn kbase_capped(st: &Staircase, nvars: usize, cap: u32, ord: Ordering) -> Vec<ModMonomial> {
    let mut out = Vec::new();
    for c in 0..st.rank {
        for m in crate::ring::monomials_up_to(nvars, cap) {
            let m = ModMonomial {
                exps: m.exps,
                comp: c,
            };
            if !st.lead_monomials.iter().any(|l| l.divides(&m)) {
                out.push(m);
            }
        }
    }
    out.sort_by(|a, b| ord.cmp(b, a));
    out
}

/// Krull dimension of `K[x]/L` for the monomial ideal `L`: the maximum
/// cardinality of a variable subset meeting no leading monomial's support,
/// computed as `nvars` minus a minimum hitting set of the supports. Returns
/// -1 for the unit ideal (empty variety).
pub fn krull_dim_leads(leads: &[ModMonomial], nvars: usize) -> i64 {
    if leads.iter().any(|l| l.is_constant()) {
        return -1;
    }
    let mut supports: Vec<Vec<usize>> = leads.iter().map(|l| l.support()).collect();
    supports.sort_by_key(|s| s.len());
    let mut minimal: Vec<Vec<usize>> = Vec::new();
    for s in supports {
        if !minimal
            .iter()
            .any(|m| m.iter().all(|v| s.contains(v)))
        {
            minimal.push(s);
        }
    }
    let mut best = minimal.len().min(nvars);
    let mut chosen: Vec<usize> = Vec::new();
    hitting_rec(&minimal, &mut chosen, &mut best);
    nvars as i64 - best as i64
}

fn hitting_rec(supports: &[Vec<usize>], chosen: &mut Vec<usize>, best: &mut usize) {
    let uncovered = supports
        .iter()
        .find(|s| !s.iter().any(|v| chosen.contains(v)));
    match uncovered {
        None => {
            if chosen.len() < *best {
                *best = chosen.len();
            }
        }
        Some(s) => {
            if chosen.len() + 1 > *best {
                return;
            }
            for &v in s {
                chosen.push(v);
                hitting_rec(supports, chosen, best);
                chosen.pop();
            }
        }
    }
}

/// Krull dimension of the quotient by a rank-1 standard basis; for local
/// orderings this is the dimension of the germ at the origin, for global
/// orderings the dimension of the affine variety.
pub fn krull_dim(basis: &StdBasis, ctx: &RingCtx) -> Result<i64, SbasisError> {
    if basis.rank != 1 {
        return Err(SbasisError::RankError(basis.rank));
    }
    let leads: Vec<ModMonomial> = basis
        .gens
        .iter()
        .map(|g| g.lead().unwrap().mon.clone())
        .collect();
    Ok(krull_dim_leads(&leads, ctx.nvars()))
}

/// Generators of the intersection of the ideal with the subring in the
/// non-eliminated variables, computed with a block (elimination) ordering.
/// Returns the generators together with the ring of remaining variables.
pub fn eliminate(
    gens: &[Vect],
    ctx: &RingCtx,
    elim_vars: &[usize],
) -> Result<(Vec<Vect>, RingCtx), SbasisError> {
    let e = elim_vars.len();
    let remaining: Vec<usize> = (0..ctx.nvars())
        .filter(|i| !elim_vars.contains(i))
        .collect();
    let mut names: Vec<String> = elim_vars.iter().map(|&i| ctx.vars[i].clone()).collect();
    names.extend(remaining.iter().map(|&i| ctx.vars[i].clone()));
    let elim_ctx = RingCtx::new(ctx.field, names, Ordering::block(e))?;
    // position of each source variable in the elimination ring
    let mut var_map = vec![0usize; ctx.nvars()];
    for (pos, &i) in elim_vars.iter().chain(remaining.iter()).enumerate() {
        var_map[i] = pos;
    }
    let mapped: Vec<Vect> = gens
        .iter()
        .map(|g| ctx.map_to(g, &elim_ctx, &var_map))
        .collect::<Result<_, _>>()?;
    let basis = std(&mapped, &elim_ctx);

    let rem_names: Vec<String> = remaining.iter().map(|&i| ctx.vars[i].clone()).collect();
    let rem_ctx = RingCtx::new(ctx.field, rem_names, Ordering::global())?;
    let mut out = Vec::new();
    for g in &basis.gens {
        let lead = g.lead().unwrap();
        if lead.mon.exps[..e].iter().all(|&x| x == 0) {
            // a lead free of the eliminated block certifies the whole
            // polynomial is, by the block ordering
            assert!(g
                .terms
                .iter()
                .all(|t| t.mon.exps[..e].iter().all(|&x| x == 0)));
            let mut back = vec![0usize; elim_ctx.nvars()];
            for (pos, _) in elim_vars.iter().enumerate() {
                back[pos] = 0; // never used: exponents are zero
            }
            for (j, _) in remaining.iter().enumerate() {
                back[e + j] = j;
            }
            out.push(elim_ctx.map_to(g, &rem_ctx, &back)?);
        }
    }
    Ok((out, rem_ctx))
}
