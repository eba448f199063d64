//! Independent cross-check routines: truncated linear algebra over the exact
//! coefficient field and an exhaustive dimension search. These never go
//! through the normal-form or completion code paths they are used to verify.

use crate::field::Coef;
use crate::ring::{monomials_up_to, ModMonomial, RingCtx, Vect};

/// Row-reduction rank of an exact matrix.
pub fn matrix_rank(mut rows: Vec<Vec<Coef>>) -> usize {
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut rank = 0;
    for col in 0..ncols {
        let pivot = (rank..rows.len()).find(|&r| !rows[r][col].is_zero());
        let Some(p) = pivot else { continue };
        rows.swap(rank, p);
        let inv = rows[rank][col].inv().unwrap();
        for c in col..ncols {
            rows[rank][c] = rows[rank][c].mul(&inv);
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in col..ncols {
                    let delta = rows[rank][c].mul(&factor);
                    rows[r][c] = rows[r][c].sub(&delta);
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Basis of the jet space `M^{(k)}` for a rank-`r` module: monomials of
/// degree at most k crossed with components.
pub fn jet_basis(s: usize, rank: usize, k: u32) -> Vec<ModMonomial> {
    let mut out = Vec::new();
    for c in 0..rank {
        for m in monomials_up_to(s, k) {
            out.push(ModMonomial {
                exps: m.exps,
                comp: c,
            });
        }
    }
    out
}

fn coordinate_row(v: &Vect, basis: &[ModMonomial], ctx: &RingCtx, k: u32) -> Vec<Coef> {
    let trunc = ctx.jet(v, k, None);
    basis
        .iter()
        .map(|m| {
            trunc
                .terms
                .iter()
                .find(|t| t.mon == *m)
                .map(|t| t.coef.clone())
                .unwrap_or_else(|| ctx.field.zero())
        })
        .collect()
}

/// All rows `jet_k(x^a * g)` for the given generators, spanning the k-jet of
/// the generated submodule.
pub fn truncated_span_rows(
    gens: &[Vect],
    ctx: &RingCtx,
    rank: usize,
    k: u32,
) -> (Vec<Vec<Coef>>, Vec<ModMonomial>) {
    let basis = jet_basis(ctx.nvars(), rank, k);
    let mut rows = Vec::new();
    for g in gens {
        if g.is_zero() {
            continue;
        }
        for mult in monomials_up_to(ctx.nvars(), k) {
            let shifted = ctx.monomial_mul(&mult, g);
            let row = coordinate_row(&shifted, &basis, ctx, k);
            if row.iter().any(|c| !c.is_zero()) {
                rows.push(row);
            }
        }
    }
    (rows, basis)
}

/// Codimension of the k-jet of the submodule generated by `gens` inside the
/// k-jet space, by exact row reduction.
pub fn truncated_codim(gens: &[Vect], ctx: &RingCtx, rank: usize, k: u32) -> usize {
    let (rows, basis) = truncated_span_rows(gens, ctx, rank, k);
    basis.len() - matrix_rank(rows)
}

/// Whether `jet_k(f)` lies in the k-jet of the span of the monomial multiples
/// of the generators; a necessary condition for membership up to a unit.
pub fn truncated_member(f: &Vect, gens: &[Vect], ctx: &RingCtx, rank: usize, k: u32) -> bool {
    let (mut rows, basis) = truncated_span_rows(gens, ctx, rank, k);
    let base_rank = matrix_rank(rows.clone());
    rows.push(coordinate_row(f, &basis, ctx, k));
    matrix_rank(rows) == base_rank
}

/// Krull dimension of a monomial-ideal quotient by exhaustive subset search:
/// the largest variable subset meeting no leading monomial's support. Only
/// for small variable counts.
pub fn krull_dim_exhaustive(leads: &[ModMonomial], nvars: usize) -> i64 {
    assert!(nvars <= 20, "exhaustive search limited to 20 variables");
    if leads.iter().any(|l| l.is_constant()) {
        return -1;
    }
    let supports: Vec<Vec<usize>> = leads.iter().map(|l| l.support()).collect();
    let mut best: i64 = 0;
    for mask in 0u32..(1u32 << nvars) {
        let subset: Vec<usize> = (0..nvars).filter(|&i| mask & (1 << i) != 0).collect();
        let ok = supports
            .iter()
            .all(|sup| !sup.iter().all(|v| subset.contains(v)));
        if ok {
            best = best.max(subset.len() as i64);
        }
    }
    best
}
