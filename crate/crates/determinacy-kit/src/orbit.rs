//! Jet-group parametrization, orbit and stabilizer equations, orbit
//! codimension and the separability verdict.

use crate::determinacy::{self, DetError, GroupKind, MatrixSeries};
use crate::field::Coef;
use crate::ring::{
    binomial, jet_space_dim, monomials_up_to, ModMonomial, Ordering, Poly, RingCtx, RingError,
};
use crate::sbasis::{self, SbasisError};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrbitError {
    #[error("tangent image has infinite codimension; orbit computations require finiteness")]
    InfiniteCodimension,
    #[error("jet group needs {needed} parameters, exceeding the cap of {cap}")]
    ParamCapExceeded { needed: usize, cap: usize },
    #[error("jet level {given} is below the pre-determinacy bound {p}")]
    JetLevelTooSmall { given: u32, p: u32 },
    #[error(transparent)]
    Det(#[from] DetError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Sbasis(#[from] SbasisError),
}

/// Dimension of the k-jet group: `(m^2 [left] + n^2 [right] + s) * C(s+k,k) - s`.
pub fn group_dim(group: GroupKind, m: usize, n: usize, s: usize, k: u32) -> usize {
    let c = binomial(s as u64 + k as u64, k as u64) as usize;
    let mut blocks = s;
    if group.has_left() {
        blocks += m * m;
    }
    if group.has_right() {
        blocks += n * n;
    }
    blocks * c - s
}

/// The symbolic generic element of the k-jet group: the parameter inventory
/// plus the coordinate-change and matrix-factor polynomials over the joint
/// ring `K[x, params]`.
#[derive(Debug, Clone)]
pub struct JetGroupPresentation {
    pub k: u32,
    pub group: GroupKind,
    pub m: usize,
    pub n: usize,
    pub s: usize,
    /// `K[x, params]`, x variables first.
    pub joint: RingCtx,
    pub x_idx: Vec<usize>,
    pub param_names: Vec<String>,
    /// `K[params]` under a global ordering.
    pub param_ctx: RingCtx,
    /// Joint-ring index of each parameter.
    pub param_map: Vec<usize>,
    pub coord_change: Vec<Poly>,
    pub left: Option<Vec<Poly>>,
    pub right: Option<Vec<Poly>>,
}

fn multi_index_suffix(m: &ModMonomial) -> String {
    m.exps
        .iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join("_")
}

/// The generic group element and the substituted,
/// x-truncated matrix `B = jet_k(U * A(G) * V)`.
pub fn generic_element(
    k: u32,
    group: GroupKind,
    a: &MatrixSeries,
    ctx: &RingCtx,
) -> Result<(JetGroupPresentation, Vec<Poly>), OrbitError> {
    if !a.in_max_ideal() {
        return Err(DetError::NotInMaximalIdeal.into());
    }
    let (m, n, s) = (a.m, a.n, ctx.nvars());
    let monos = monomials_up_to(s, k); // 1 first, then by degree
    let mut param_names: Vec<String> = Vec::new();
    if group.has_left() {
        for i in 1..=m {
            for j in 1..=m {
                for mono in &monos {
                    param_names.push(format!("u_{i}_{j}_{}", multi_index_suffix(mono)));
                }
            }
        }
    }
    if group.has_right() {
        for i in 1..=n {
            for j in 1..=n {
                for mono in &monos {
                    param_names.push(format!("v_{i}_{j}_{}", multi_index_suffix(mono)));
                }
            }
        }
    }
    if k >= 1 {
        for i in 1..=s {
            for j in 1..=s {
                param_names.push(format!("g_{i}_{j}"));
            }
        }
        for i in 1..=s {
            for mono in &monos {
                if mono.total_degree() >= 2 {
                    param_names.push(format!("h_{i}_{}", multi_index_suffix(mono)));
                }
            }
        }
    }
    assert_eq!(param_names.len(), group_dim(group, m, n, s, k));

    let mut joint_vars = ctx.vars.clone();
    joint_vars.extend(param_names.iter().cloned());
    let joint = RingCtx::new(ctx.field, joint_vars, Ordering::global())?;
    let param_ctx = RingCtx::new(ctx.field, param_names.clone(), Ordering::global())?;
    let x_idx: Vec<usize> = (0..s).collect();
    let param_map: Vec<usize> = (0..param_names.len()).map(|i| s + i).collect();
    let pvar = |name: &str| joint.var_poly(joint.var_index(name).expect("parameter present"));

    // monomial in the x block of the joint ring
    let x_mono = |mono: &ModMonomial| {
        let mut exps = vec![0u32; joint.nvars()];
        exps[..s].copy_from_slice(&mono.exps);
        joint.monomial_poly(ModMonomial { exps, comp: 0 }, 1)
    };

    let mut coord_change = Vec::with_capacity(s);
    for i in 1..=s {
        let mut g = joint.var_poly(i - 1); // x_i
        if k >= 1 {
            for j in 1..=s {
                let gij = pvar(&format!("g_{i}_{j}"));
                g = joint.add(&g, &joint.mul(&gij, &joint.var_poly(j - 1)));
            }
            for mono in &monos {
                if mono.total_degree() >= 2 {
                    let hia = pvar(&format!("h_{i}_{}", multi_index_suffix(mono)));
                    g = joint.add(&g, &joint.mul(&hia, &x_mono(mono)));
                }
            }
        }
        coord_change.push(g);
    }

    let matrix_block = |prefix: &str, dim: usize| -> Vec<Poly> {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 1..=dim {
            for j in 1..=dim {
                let mut e = if i == j {
                    joint.constant(joint.field.one())
                } else {
                    joint.zero_poly()
                };
                for mono in &monos {
                    let p = pvar(&format!("{prefix}_{i}_{j}_{}", multi_index_suffix(mono)));
                    e = joint.add(&e, &joint.mul(&p, &x_mono(mono)));
                }
                entries.push(e);
            }
        }
        entries
    };
    let left = group.has_left().then(|| matrix_block("u", m));
    let right = group.has_right().then(|| matrix_block("v", n));

    // substitute the coordinate change into the (k-jet of the) entries
    let mut phi: Vec<Poly> = Vec::with_capacity(m * n);
    for e in &a.entries {
        let truncated = ctx.jet(e, k, None);
        phi.push(ctx.substitute(&truncated, &coord_change, &joint, k, Some(&x_idx))?);
    }

    let jet_mul = |p: &[Poly], pm: usize, pn: usize, q: &[Poly], qn: usize| -> Vec<Poly> {
        let mut out = Vec::with_capacity(pm * qn);
        for i in 0..pm {
            for j in 0..qn {
                let mut acc = joint.zero_poly();
                for l in 0..pn {
                    acc = joint.add(&acc, &joint.mul(&p[i * pn + l], &q[l * qn + j]));
                }
                out.push(joint.jet(&acc, k, Some(&x_idx)));
            }
        }
        out
    };
    let mut b = phi;
    if let Some(u) = &left {
        b = jet_mul(u, m, m, &b, n);
    }
    if let Some(v) = &right {
        b = jet_mul(&b, m, n, v, n);
    }

    Ok((
        JetGroupPresentation {
            k,
            group,
            m,
            n,
            s,
            joint,
            x_idx,
            param_names,
            param_ctx,
            param_map,
            coord_change,
            left,
            right,
        },
        b,
    ))
}

/// The orbit-coordinate polynomials `c_1, ..., c_t` of `B`: coefficients with
/// respect to all x-monomials of degree at most k (descending local-degree
/// order) crossed with matrix positions row-major.
pub fn orbit_coordinates(
    pres: &JetGroupPresentation,
    b: &[Poly],
) -> Result<Vec<Poly>, OrbitError> {
    let mut out = Vec::new();
    for entry in b {
        let pairs = pres.joint.collect_coefficients(
            entry,
            &pres.x_idx,
            &pres.param_ctx,
            &pres.param_map,
            Some(pres.k),
        )?;
        out.extend(pairs.into_iter().map(|(_, c)| c));
    }
    Ok(out)
}

/// Polynomials in `K[u(1),...,u(t)]` cutting out the closure of
/// the jet-orbit of `A`, obtained by eliminating the group parameters from
/// the graph ideal of the orbit map.
pub fn orbit_equations(
    pres: &JetGroupPresentation,
    b: &[Poly],
) -> Result<(Vec<Poly>, RingCtx), OrbitError> {
    let coords = orbit_coordinates(pres, b)?;
    let t = coords.len();
    debug_assert_eq!(t, jet_space_dim(pres.m, pres.n, pres.s, pres.k));
    let nparams = pres.param_names.len();
    let mut vars = pres.param_names.clone();
    for i in 1..=t {
        vars.push(format!("u({i})"));
    }
    let graph_ctx = RingCtx::new(pres.param_ctx.field, vars, Ordering::global())?;
    let param_to_graph: Vec<usize> = (0..nparams).collect();
    let mut gens = Vec::with_capacity(t);
    for (i, c) in coords.iter().enumerate() {
        let u_i = graph_ctx.var_poly(nparams + i);
        let c_in_graph = pres.param_ctx.map_to(c, &graph_ctx, &param_to_graph)?;
        gens.push(graph_ctx.sub(&u_i, &c_in_graph));
    }
    let elim: Vec<usize> = (0..nparams).collect();
    let (fs, u_ctx) = sbasis::eliminate(&gens, &graph_ctx, &elim)?;
    Ok((fs, u_ctx))
}

/// Generators of the stabilizer ideal in `K[params]`, the
/// coefficients of `B - jet_k(A)` with respect to the x-monomials.
pub fn stabilizer_equations(
    pres: &JetGroupPresentation,
    b: &[Poly],
    a: &MatrixSeries,
    ctx: &RingCtx,
) -> Result<Vec<Poly>, OrbitError> {
    let x_map: Vec<usize> = (0..pres.s).collect();
    let mut out = Vec::new();
    for (entry, a_entry) in b.iter().zip(&a.entries) {
        let a_in_joint = ctx.map_to(&ctx.jet(a_entry, pres.k, None), &pres.joint, &x_map)?;
        let diff = pres.joint.sub(entry, &a_in_joint);
        let pairs = pres.joint.collect_coefficients(
            &diff,
            &pres.x_idx,
            &pres.param_ctx,
            &pres.param_map,
            Some(pres.k),
        )?;
        out.extend(pairs.into_iter().map(|(_, d)| d));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitMethod {
    Eliminate,
    Stabilizer,
}

#[derive(Debug, Clone)]
pub struct OrbitOptions {
    pub jet_level_override: Option<u32>,
    pub param_cap: usize,
    /// Dimension of the stabilizer ideal at the identity germ (local
    /// ordering, the default) or of the affine stabilizer variety.
    pub stab_ordering_global: bool,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        OrbitOptions {
            jet_level_override: None,
            param_cap: 64,
            stab_ordering_global: false,
        }
    }
}

/// Full orbit diagnostics at jet level `k`.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct OrbitReport {
    pub k_used: u32,
    pub t: usize,
    pub dim_group: i64,
    pub dim_orbit: i64,
    pub dim_stab: i64,
    pub c_tangent_space: i64,
    pub c_tangent_image: usize,
    pub separable: bool,
    pub equations: Vec<String>,
}

/// Computes the
/// codimension of the tangent space at jet level `k = p` (or an override
/// at least p) by the chosen method and compares it with the tangent-image
/// codimension.
pub fn codim_tangent_space(
    a: &MatrixSeries,
    group: GroupKind,
    ctx: &RingCtx,
    method: OrbitMethod,
    opts: &OrbitOptions,
) -> Result<OrbitReport, OrbitError> {
    let t_img = determinacy::tangent_image(a, group, ctx)?;
    let (_, c_image) =
        determinacy::basis_codim(&t_img, ctx).ok_or(OrbitError::InfiniteCodimension)?;
    let p = determinacy::predeterminacy_of(&t_img, ctx)?
        .ok_or(OrbitError::InfiniteCodimension)?;
    let k = match opts.jet_level_override {
        Some(k) if k < p => return Err(OrbitError::JetLevelTooSmall { given: k, p }),
        Some(k) => k,
        None => p,
    };
    let (m, n, s) = (a.m, a.n, ctx.nvars());
    let needed = group_dim(group, m, n, s, k);
    if needed > opts.param_cap {
        return Err(OrbitError::ParamCapExceeded {
            needed,
            cap: opts.param_cap,
        });
    }
    let t = jet_space_dim(m, n, s, k);
    let dim_group = needed as i64;
    if needed == 0 {
        // trivial jet group (no matrix factors at jet level 0): the orbit is
        // the single point jet_k(A)
        return Ok(OrbitReport {
            k_used: k,
            t,
            dim_group: 0,
            dim_orbit: 0,
            dim_stab: 0,
            c_tangent_space: t as i64,
            c_tangent_image: c_image,
            separable: c_image == t,
            equations: Vec::new(),
        });
    }
    let (pres, b) = generic_element(k, group, a, ctx)?;

    let (dim_orbit, dim_stab, equations) = match method {
        OrbitMethod::Eliminate => {
            let (fs, u_ctx) = orbit_equations(&pres, &b)?;
            let basis = sbasis::std(&fs, &u_ctx);
            let dim_orbit = sbasis::krull_dim(&basis, &u_ctx)?;
            let eqs = fs.iter().map(|f| u_ctx.render_poly(f)).collect();
            (dim_orbit, dim_group - dim_orbit, eqs)
        }
        OrbitMethod::Stabilizer => {
            let d = stabilizer_equations(&pres, &b, a, ctx)?;
            let stab_ctx = pres.param_ctx.with_ordering(if opts.stab_ordering_global {
                Ordering::global()
            } else {
                Ordering {
                    kind: crate::ring::OrderKind::LocalDeg,
                    module_rule: crate::ring::ModuleRule::None,
                }
            });
            let mapped: Vec<Poly> = d
                .iter()
                .map(|f| pres.param_ctx.map_to(f, &stab_ctx, &(0..stab_ctx.nvars()).collect::<Vec<_>>()))
                .collect::<Result<_, _>>()?;
            let basis = sbasis::std(&mapped, &stab_ctx);
            let dim_stab = sbasis::krull_dim(&basis, &stab_ctx)?;
            let eqs = d
                .iter()
                .filter(|f| !f.is_zero())
                .map(|f| pres.param_ctx.render_poly(f))
                .collect();
            (dim_group - dim_stab, dim_stab, eqs)
        }
    };

    let c_space = match method {
        OrbitMethod::Eliminate => t as i64 - dim_orbit,
        OrbitMethod::Stabilizer => t as i64 - dim_group + dim_stab,
    };

    Ok(OrbitReport {
        k_used: k,
        t,
        dim_group,
        dim_orbit,
        dim_stab,
        c_tangent_space: c_space,
        c_tangent_image: c_image,
        separable: c_image as i64 == c_space,
        equations,
    })
}

/// Corollary-style verdict: the orbit map is separable exactly when the
/// tangent-image and tangent-space codimensions agree.
pub fn separability_verdict(
    a: &MatrixSeries,
    group: GroupKind,
    ctx: &RingCtx,
    method: OrbitMethod,
    opts: &OrbitOptions,
) -> Result<OrbitReport, OrbitError> {
    codim_tangent_space(a, group, ctx, method, opts)
}

/// Constant term of a parameter polynomial: its value at the parameter
/// origin, the identity of the group.
pub fn eval_at_origin(f: &Poly, ctx: &RingCtx) -> Coef {
    f.terms
        .iter()
        .find(|t| t.mon.is_constant())
        .map(|t| t.coef.clone())
        .unwrap_or_else(|| ctx.field.zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::ring::parse_poly;

    fn ctx(chr: u64) -> RingCtx {
        let field = if chr == 0 {
            FieldSpec::Rationals
        } else {
            FieldSpec::prime(chr).unwrap()
        };
        RingCtx::new(field, vec!["x".into(), "y".into()], Ordering::local()).unwrap()
    }

    #[test]
    fn group_dims() {
        // contact group for a plane-curve germ: (1 + 2) * C(4,2) - 2 = 16
        assert_eq!(group_dim(GroupKind::Gl, 1, 1, 2, 2), 16);
        assert_eq!(group_dim(GroupKind::RightR, 1, 1, 2, 1), 4);
        assert_eq!(group_dim(GroupKind::Glr, 1, 1, 2, 2), 22);
        // at k = 0 the coordinate-change part is trivial
        assert_eq!(group_dim(GroupKind::RightR, 1, 1, 2, 0), 0);
        assert_eq!(group_dim(GroupKind::Gl, 1, 1, 2, 0), 1);
    }

    #[test]
    fn identity_substitution_recovers_jet() {
        let ctx = ctx(2);
        let a = MatrixSeries::scalar(parse_poly("x^2+y^3", &ctx).unwrap());
        let (pres, b) = generic_element(2, GroupKind::Gl, &a, &ctx).unwrap();
        assert_eq!(pres.param_names.len(), 16);
        // at the parameter origin every coefficient equals that of jet_2(A)
        let coords = orbit_coordinates(&pres, &b).unwrap();
        let aj = ctx.jet(&a.entries[0], 2, None);
        let monos = monomials_up_to(2, 2);
        for (c, mono) in coords.iter().zip(&monos) {
            let v = eval_at_origin(c, &pres.param_ctx);
            let expect = aj
                .terms
                .iter()
                .find(|t| t.mon.exps == mono.exps)
                .map(|t| t.coef.clone())
                .unwrap_or_else(|| ctx.field.zero());
            assert_eq!(v, expect);
        }
    }

    #[test]
    fn stabilizer_vanishes_at_identity() {
        let ctx = ctx(2);
        let a = MatrixSeries::scalar(parse_poly("x^2+y^3", &ctx).unwrap());
        let (pres, b) = generic_element(2, GroupKind::Gl, &a, &ctx).unwrap();
        let d = stabilizer_equations(&pres, &b, &a, &ctx).unwrap();
        for f in &d {
            assert!(eval_at_origin(f, &pres.param_ctx).is_zero());
        }
    }

    #[test]
    fn right_group_line_k1() {
        // A = [x], R, k=1, s=1: stabilizer ideal <g_1_1>, orbit ideal <u(1)>
        let c1 = RingCtx::new(
            FieldSpec::Rationals,
            vec!["x".into()],
            Ordering::local(),
        )
        .unwrap();
        let a = MatrixSeries::scalar(parse_poly("x", &c1).unwrap());
        let (pres, b) = generic_element(1, GroupKind::RightR, &a, &c1).unwrap();
        assert_eq!(pres.param_names, vec!["g_1_1"]);
        let d = stabilizer_equations(&pres, &b, &a, &c1).unwrap();
        let nonzero: Vec<String> = d
            .iter()
            .filter(|f| !f.is_zero())
            .map(|f| pres.param_ctx.render_poly(f))
            .collect();
        assert_eq!(nonzero, vec!["g_1_1"]);
        let (fs, u_ctx) = orbit_equations(&pres, &b).unwrap();
        let rendered: Vec<String> = fs.iter().map(|f| u_ctx.render_poly(f)).collect();
        assert_eq!(rendered, vec!["u(1)"]);
    }

    #[test]
    fn example_contact_cusp_both_methods() {
        let ctx = ctx(2);
        let a = MatrixSeries::scalar(parse_poly("x^2+y^3", &ctx).unwrap());
        let opts = OrbitOptions::default();
        let r8 = codim_tangent_space(&a, GroupKind::Gl, &ctx, OrbitMethod::Stabilizer, &opts)
            .unwrap();
        assert_eq!(r8.k_used, 2);
        assert_eq!(r8.t, 6);
        assert_eq!(r8.dim_group, 16);
        assert_eq!(r8.dim_stab, 14);
        assert_eq!(r8.dim_orbit, 2);
        assert_eq!(r8.c_tangent_space, 4);
        assert_eq!(r8.c_tangent_image, 5);
        assert!(!r8.separable);
        let r7 = codim_tangent_space(&a, GroupKind::Gl, &ctx, OrbitMethod::Eliminate, &opts)
            .unwrap();
        assert_eq!(r7.c_tangent_space, 4);
        assert_eq!(r7.dim_orbit, 2);
        assert_eq!(r7.dim_stab, 14);
    }

    #[test]
    fn smooth_germ_is_separable() {
        let ctx = ctx(0);
        let a = MatrixSeries::scalar(parse_poly("x", &ctx).unwrap());
        let opts = OrbitOptions::default();
        for method in [OrbitMethod::Stabilizer, OrbitMethod::Eliminate] {
            let r = codim_tangent_space(&a, GroupKind::Gl, &ctx, method, &opts).unwrap();
            assert_eq!(r.k_used, 0);
            assert_eq!(r.t, 1);
            assert_eq!(r.c_tangent_space, 1);
            assert_eq!(r.c_tangent_image, 1);
            assert!(r.separable);
        }
    }

    #[test]
    fn infinite_codimension_rejected() {
        let ctx = ctx(2);
        let a = MatrixSeries::scalar(parse_poly("x^2+y^3", &ctx).unwrap());
        let r = codim_tangent_space(
            &a,
            GroupKind::RightR,
            &ctx,
            OrbitMethod::Stabilizer,
            &OrbitOptions::default(),
        );
        assert_eq!(r.unwrap_err(), OrbitError::InfiniteCodimension);
    }

    #[test]
    fn param_cap_enforced() {
        let ctx = ctx(2);
        let a = MatrixSeries::scalar(parse_poly("x^2+y^3", &ctx).unwrap());
        let opts = OrbitOptions {
            param_cap: 10,
            ..Default::default()
        };
        let r = codim_tangent_space(&a, GroupKind::Gl, &ctx, OrbitMethod::Stabilizer, &opts);
        assert_eq!(
            r.unwrap_err(),
            OrbitError::ParamCapExceeded {
                needed: 16,
                cap: 10
            }
        );
    }
}
