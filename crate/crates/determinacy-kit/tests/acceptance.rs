//! Acceptance suite: one test per criterion, each printing a single
//! `criterion N (<label>): PASS` line on success. Run with `--nocapture` to
//! see the lines on a passing run.

use determinacy_kit::determinacy::{
    basis_codim, determinacy_bound, predeterminacy, tangent_image, tangent_image_generators,
    GroupKind, MatrixSeries,
};
use determinacy_kit::field::FieldSpec;
use determinacy_kit::oracle;
use determinacy_kit::orbit::{
    codim_tangent_space, group_dim, OrbitMethod, OrbitOptions,
};
use determinacy_kit::ring::{
    binomial, jet_space_dim, monomials_up_to, parse_poly, Ordering, RingCtx, Vect,
};
use determinacy_kit::sbasis::{self, buchberger_holds, mora_nf};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ctx2(p: u64) -> RingCtx {
    let field = if p == 0 {
        FieldSpec::Rationals
    } else {
        FieldSpec::prime(p).unwrap()
    };
    RingCtx::new(field, vec!["x".into(), "y".into()], Ordering::local()).unwrap()
}

fn pass(n: u32, label: &str) {
    println!("criterion {n} ({label}): PASS");
}

#[test]
fn criterion_1_char2_contact_cusp() {
    let start = std::time::Instant::now();
    let ctx = ctx2(2);
    let a = MatrixSeries::scalar(parse_poly("x^2+y^3", &ctx).unwrap());
    let group = GroupKind::Gl; // contact group at m = n = 1

    let t = tangent_image(&a, group, &ctx).unwrap();
    let mut leads: Vec<String> = t
        .basis
        .staircase()
        .lead_monomials
        .iter()
        .map(|l| ctx.render_vect(&ctx.monomial_poly(l.clone(), 1)))
        .collect();
    leads.sort();
    assert_eq!(leads, vec!["x*y^2", "x^2", "y^3"]);

    let (_, c_image) = basis_codim(&t, &ctx).unwrap();
    assert_eq!(c_image, 5);

    let det = determinacy_bound(&a, group, &ctx).unwrap();
    assert_eq!(det.pre_bound, Some(2));
    assert_eq!(det.determ_bound, Some(4));

    let opts = OrbitOptions::default();
    for method in [OrbitMethod::Stabilizer, OrbitMethod::Eliminate] {
        let r = codim_tangent_space(&a, group, &ctx, method, &opts).unwrap();
        assert_eq!(r.k_used, 2);
        assert_eq!(r.t, 6);
        assert_eq!(r.dim_group, 16);
        assert_eq!(r.dim_stab, 14);
        assert_eq!(r.dim_orbit, 2);
        assert_eq!(r.c_tangent_space, 4);
        assert_eq!(r.c_tangent_image, 5);
        assert!(!r.separable);
    }
    assert!(start.elapsed().as_secs() < 60, "pipeline exceeded 60 s");
    pass(1, "char-2 contact cusp exact values");
}

#[test]
fn criterion_2_char0_control() {
    let start = std::time::Instant::now();
    let ctx = ctx2(0);
    let a = MatrixSeries::scalar(parse_poly("x^2+y^3", &ctx).unwrap());
    let group = GroupKind::Gl;

    let t = tangent_image(&a, group, &ctx).unwrap();
    let (_, c_image) = basis_codim(&t, &ctx).unwrap();
    assert_eq!(c_image, 4);

    // cross-check codimension by exact truncated row reduction
    let gens = t.basis.gens.clone();
    let p = predeterminacy(&a, group, &ctx).unwrap().unwrap();
    let k = p.max(3);
    let jet_codim = oracle::truncated_codim(&gens, &ctx, 1, k);
    assert_eq!(jet_codim, 4);

    let opts = OrbitOptions::default();
    for method in [OrbitMethod::Stabilizer, OrbitMethod::Eliminate] {
        let r = codim_tangent_space(&a, group, &ctx, method, &opts).unwrap();
        assert_eq!(r.c_tangent_space, 4);
        assert_eq!(r.c_tangent_image, 4);
        assert!(r.separable);
    }
    assert!(start.elapsed().as_secs() < 60, "pipeline exceeded 60 s");
    pass(2, "char-0 control is separable");
}

#[test]
fn criterion_3_right_group_infinite() {
    let ctx = ctx2(2);
    let a = MatrixSeries::scalar(parse_poly("x^2+y^3", &ctx).unwrap());
    let t = tangent_image(&a, GroupKind::RightR, &ctx).unwrap();
    assert!(basis_codim(&t, &ctx).is_none(), "codim should be infinite");
    assert_eq!(predeterminacy(&a, GroupKind::RightR, &ctx).unwrap(), None);
    let det = determinacy_bound(&a, GroupKind::RightR, &ctx).unwrap();
    assert_eq!(det.pre_bound, None);
    assert_eq!(det.determ_bound, None);
    pass(3, "right-group char-2 cusp has infinite codimension");
}

// ---------------------------------------------------------------------------
// randomized instances shared by criteria 4, 5 and 7

struct Instance {
    ctx: RingCtx,
    a: MatrixSeries,
    group: GroupKind,
}

fn random_poly(ctx: &RingCtx, rng: &mut ChaCha8Rng, max_deg: u32) -> Vect {
    loop {
        let mut f = ctx.zero_poly();
        for mono in monomials_up_to(ctx.nvars(), max_deg) {
            if mono.is_constant() {
                continue;
            }
            // bias toward sparse low-degree entries to keep instances tractable
            let keep = match mono.total_degree() {
                1 => rng.gen_bool(0.7),
                2 => rng.gen_bool(0.4),
                _ => rng.gen_bool(0.2),
            };
            if !keep {
                continue;
            }
            let c = ctx.field.from_i64(rng.gen_range(-3i64..=3));
            if c.is_zero() {
                continue;
            }
            let term = ctx.scalar_mul(&c, &ctx.monomial_poly(mono, 1));
            f = ctx.add(&f, &term);
        }
        if !f.is_zero() {
            return f;
        }
    }
}

/// Draws instances until `want` of them have finite tangent-image codimension
/// and stay under the size limits that keep both orbit methods tractable.
fn sample_instances(seed: u64, want: usize) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chars = [0u64, 2, 3, 5];
    let groups = [
        GroupKind::RightR,
        GroupKind::Gl,
        GroupKind::Gr,
        GroupKind::Glr,
    ];
    let mut out = Vec::new();
    while out.len() < want {
        let p = chars[rng.gen_range(0..chars.len())];
        let s = rng.gen_range(1..=2usize);
        let m = rng.gen_range(1..=2usize);
        let n = rng.gen_range(1..=2usize);
        let group = groups[rng.gen_range(0..groups.len())];
        let field = if p == 0 {
            FieldSpec::Rationals
        } else {
            FieldSpec::prime(p).unwrap()
        };
        let vars: Vec<String> = ["x", "y"][..s].iter().map(|v| v.to_string()).collect();
        let ctx = RingCtx::new(field, vars, Ordering::local()).unwrap();
        let entries: Vec<Vect> = (0..m * n).map(|_| random_poly(&ctx, &mut rng, 3)).collect();
        let a = MatrixSeries::new(m, n, entries);

        // cheap oracle pre-filter: skip instances whose codimension has not
        // stabilized at a small jet level, so the exact computation below
        // only runs on (very likely) finite, small instances
        let Ok(gens) = tangent_image_generators(&a, group, &ctx) else {
            continue;
        };
        let rank = m * n;
        let c5 = oracle::truncated_codim(&gens, &ctx, rank, 5);
        let c6 = oracle::truncated_codim(&gens, &ctx, rank, 6);
        if c5 != c6 || c6 > 12 {
            continue;
        }

        let Ok(t) = tangent_image(&a, group, &ctx) else {
            continue;
        };
        let Some((_, codim)) = basis_codim(&t, &ctx) else {
            continue;
        };
        if codim > 12 {
            continue;
        }
        let Ok(Some(pre)) = predeterminacy(&a, group, &ctx) else {
            continue;
        };
        // keep the joint elimination ring small enough for both orbit methods
        let dim_g = group_dim(group, m, n, s, pre);
        let t_dim = jet_space_dim(m, n, s, pre);
        if pre > 2 || dim_g > 40 || s + dim_g + t_dim > 34 {
            continue;
        }
        out.push(Instance { ctx, a, group });
    }
    out
}

#[test]
fn criterion_4_oracle_equivalence() {
    let start = std::time::Instant::now();
    let instances = sample_instances(0xdecaf, 50);
    for (i, inst) in instances.iter().enumerate() {
        let ctx = &inst.ctx;
        let t = tangent_image(&inst.a, inst.group, ctx).unwrap();
        let (_, codim) = basis_codim(&t, ctx).unwrap();
        let pre = predeterminacy(&inst.a, inst.group, ctx).unwrap().unwrap();

        // vdim against the exact jet-truncation rank oracle
        let rank = inst.a.m * inst.a.n;
        let top = t
            .basis
            .staircase()
            .lead_monomials
            .iter()
            .map(|l| l.total_degree())
            .max()
            .unwrap_or(0);
        let k = pre.max(top as u32);
        let jet_codim = oracle::truncated_codim(&t.basis.gens, ctx, rank, k);
        assert_eq!(jet_codim, codim, "instance {i}: oracle codim mismatch");

        // tangent-space codimension: elimination and stabilizer methods agree
        let opts = OrbitOptions {
            param_cap: 64,
            ..Default::default()
        };
        let re = codim_tangent_space(&inst.a, inst.group, ctx, OrbitMethod::Eliminate, &opts)
            .unwrap();
        let rs = codim_tangent_space(&inst.a, inst.group, ctx, OrbitMethod::Stabilizer, &opts)
            .unwrap();
        assert_eq!(
            re.c_tangent_space, rs.c_tangent_space,
            "instance {i}: methods disagree"
        );
        assert_eq!(re.dim_orbit, rs.dim_orbit, "instance {i}: orbit dims differ");
    }
    assert!(start.elapsed().as_secs() < 600, "suite exceeded 10 min");
    pass(4, "50 randomized instances: vdim oracle + both orbit methods agree");
}

#[test]
fn criterion_5_standard_basis_properties() {
    let start = std::time::Instant::now();
    let instances = sample_instances(0xfeed, 30);
    let mut rng = ChaCha8Rng::seed_from_u64(0xbead);
    for (i, inst) in instances.iter().enumerate() {
        let ctx = &inst.ctx;
        let t = tangent_image(&inst.a, inst.group, ctx).unwrap();
        let basis = &t.basis;
        assert!(
            buchberger_holds(basis, ctx),
            "instance {i}: S-vector failed to reduce"
        );

        // positive membership: random monomial combinations reduce to zero
        let multipliers = monomials_up_to(ctx.nvars(), 2);
        let mut h = ctx.zero_vect(basis.rank);
        for g in &basis.gens {
            let mult = &multipliers[rng.gen_range(0..multipliers.len())];
            h = ctx.add(&h, &ctx.monomial_mul(mult, g));
        }
        let nf = mora_nf(&h, &basis.gens, ctx);
        assert!(nf.nf.is_zero(), "instance {i}: member did not reduce to 0");

        // negative membership: a staircase monomial is not in the submodule
        let pre = predeterminacy(&inst.a, inst.group, ctx).unwrap().unwrap();
        if let Ok(kb) = sbasis::kbase(basis) {
            if let Some(mono) = kb.first() {
                let f = ctx.monomial_poly(mono.clone(), basis.rank);
                let nf = mora_nf(&f, &basis.gens, ctx);
                assert!(!nf.nf.is_zero(), "instance {i}: staircase monomial reduced");
                let top = basis
                    .staircase()
                    .lead_monomials
                    .iter()
                    .map(|l| l.total_degree())
                    .max()
                    .unwrap_or(0);
                assert!(
                    !oracle::truncated_member(&f, &basis.gens, ctx, basis.rank, pre.max(top as u32)),
                    "instance {i}: oracle says staircase monomial is a member"
                );
            }
        }

        // Krull dimension of the leading module vs exhaustive subset search
        if ctx.nvars() <= 12 && basis.rank == 1 {
            let leads = basis.staircase().lead_monomials;
            assert_eq!(
                sbasis::krull_dim_leads(&leads, ctx.nvars()),
                oracle::krull_dim_exhaustive(&leads, ctx.nvars()),
                "instance {i}: Krull dimension mismatch"
            );
        }
    }
    assert!(start.elapsed().as_secs() < 300, "suite exceeded 5 min");
    pass(5, "Buchberger + membership + Krull dimension cross-checks");
}

#[test]
fn criterion_6_elimination() {
    let ctx = RingCtx::new(
        FieldSpec::Rationals,
        vec!["t".into(), "u1".into(), "u2".into()],
        Ordering::global(),
    )
    .unwrap();
    let gens = vec![
        parse_poly("u1-t^2", &ctx).unwrap(),
        parse_poly("u2-t^3", &ctx).unwrap(),
    ];
    let (elim, u_ctx) = sbasis::eliminate(&gens, &ctx, &[0]).unwrap();
    assert_eq!(elim.len(), 1);
    let rendered = u_ctx.render_poly(&elim[0]);
    assert!(
        rendered == "u1^3-u2^2" || rendered == "-u1^3+u2^2" || rendered == "u2^2-u1^3",
        "unexpected eliminant {rendered}"
    );
    pass(6, "eliminating t from (t^2, t^3) yields u1^3 - u2^2");
}

#[test]
fn criterion_7_structural_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xace);

    // dim of the jet group matches the parameter-count formula
    for _ in 0..100 {
        let m = rng.gen_range(1..=3usize);
        let n = rng.gen_range(1..=3usize);
        let s = rng.gen_range(1..=3usize);
        let k = rng.gen_range(0..=4u32);
        if binomial(s as u64 + k as u64, k as u64) > 20 {
            continue;
        }
        for group in [
            GroupKind::RightR,
            GroupKind::Gl,
            GroupKind::Gr,
            GroupKind::Glr,
        ] {
            let c = binomial(s as u64 + k as u64, k as u64) as usize;
            let mut blocks = s;
            if group.has_left() {
                blocks += m * m;
            }
            if group.has_right() {
                blocks += n * n;
            }
            assert_eq!(group_dim(group, m, n, s, k), blocks * c - s);
        }
    }

    // c_image >= c_space and d = 2p - ord + 2 on finite instances
    let instances = sample_instances(0xbeef, 25);
    for (i, inst) in instances.iter().enumerate() {
        let ctx = &inst.ctx;
        let det = determinacy_bound(&inst.a, inst.group, ctx).unwrap();
        let p = det.pre_bound.unwrap() as i64;
        assert_eq!(
            det.determ_bound.unwrap(),
            2 * p - det.order as i64 + 2,
            "instance {i}: determinacy bound formula"
        );
        let opts = OrbitOptions::default();
        let r = codim_tangent_space(&inst.a, inst.group, ctx, OrbitMethod::Stabilizer, &opts)
            .unwrap();
        assert!(
            r.c_tangent_image as i64 >= r.c_tangent_space,
            "instance {i}: tangent image codim below tangent space codim"
        );
    }
    pass(7, "structural invariants hold on random instances");
}
