//! One line per acceptance criterion. Run with `cargo test --test acceptance`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use crforge::fixtures::{bundled, run_case, CASES, MANIFOLDS, MAPS};
use crforge::format::{canonicalize, parse_manifold, parse_map};
use crforge::Config;
use crforge_core::geometry::{
    essential_finiteness_nf, finite_type_test, segre_map, verify_segre_identity, FiniteType, FormalVectorField,
    GenericSubmanifoldNF,
};
use crforge_core::ideal::{eliminate_pair, membership_bounded, monicize_system, verify_curve, SeriesIdeal};
use crforge_core::mapping::{check_sends, segre_injectivity_test, FormalMapNF, SegreHomReport};
use crforge_core::rank::Deficiency;
use crforge_core::reflection::{
    chain_agreement, convergence_ledger, derived_polynomial, reflection_identities, verify_reflection, Conclusion,
    FieldPowers, LeibnizContext, ReflectionOptions, RungVerdict,
};
use crforge_core::{MultiIndex, PolyInX, Series, SeriesTuple, C};

type Check = Result<String, String>;

fn ensure(ok: bool, what: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn manifold(name: &str) -> GenericSubmanifoldNF {
    parse_manifold(&bundled(name).unwrap().text).unwrap().normal_form().unwrap()
}

fn map(name: &str) -> FormalMapNF {
    parse_map(&bundled(name).unwrap().text).unwrap().map
}

fn s(n: usize, p: u32, t: &[(&[u32], i64)]) -> Series {
    Series::from_terms(n, p, t.iter().map(|(e, c)| (e.to_vec(), C::int(*c))))
}

fn criterion_1() -> Check {
    let flat = manifold("flat_direction.json");
    let ft = finite_type_test(&flat, 3, 17).map_err(|e| e.to_string())?;
    ensure(ft.verdict == FiniteType::NoUpTo { k: 3 }, format!("flat direction finite type: {:?}", ft.verdict))?;
    let last = ft.ranks.last().unwrap();
    ensure(matches!(last.deficiency, Deficiency::Certified { .. }), "no symbolic deficiency certificate at k = d + 1")?;
    ensure(essential_finiteness_nf(&flat, 5, 8).is_finite(), "flat direction not essentially finite")?;

    let prod = manifold("product_type.json");
    let ft = finite_type_test(&prod, 3, 17).map_err(|e| e.to_string())?;
    ensure(matches!(ft.verdict, FiniteType::Yes { .. }), format!("product type finite type: {:?}", ft.verdict))?;
    let ess = essential_finiteness_nf(&prod, 5, 12);
    ensure(!ess.is_finite(), "product type should be undetermined")?;
    let curve = ess.curve.as_ref().ok_or("no curve witness")?;
    ensure(curve.components[0] == Series::var(1, curve.order, 0) && curve.components[1].is_zero(), "curve is not (s, 0)")?;
    ensure(verify_curve(&ess.generators, curve, curve.order), "curve witness does not verify")?;

    let split = manifold("split_quartic.json");
    let ft = finite_type_test(&split, 3, 17).map_err(|e| e.to_string())?;
    ensure(matches!(ft.verdict, FiniteType::Yes { .. }), "split quartic not of finite type")?;
    ensure(essential_finiteness_nf(&split, 5, 8).is_finite(), "split quartic not essentially finite")?;
    let rep = segre_injectivity_test(&split, &split, &map("split_quartic_map.json"), 4, 17).map_err(|e| e.to_string())?;
    let SegreHomReport::NotInjective { relation, .. } = rep else { return Err(format!("segre homomorphism: {rep:?}")) };
    let z1_minus_z2 = s(2, relation.prec(), &[(&[1, 0], 1), (&[0, 1], -1)]);
    let c = relation.coeff_of(&[1, 0]);
    ensure(!c.is_zero() && relation == z1_minus_z2.scale(&c), "relation is not a multiple of z1′ − z2′")?;
    Ok("three example manifolds give the stated verdicts; relation z1′ − z2′".into())
}

fn criterion_2() -> Check {
    for (m, h) in [
        ("flat_direction.json", "flat_direction_map.json"),
        ("product_type.json", "product_type_map.json"),
        ("split_quartic.json", "split_quartic_map.json"),
    ] {
        let mm = manifold(m);
        let r = check_sends(&mm, &mm, &map(h)).map_err(|e| e.to_string())?;
        ensure(r.sends, format!("{h} does not send {m}"))?;
    }
    let heis = manifold("heisenberg.json");
    let bad = check_sends(&heis, &heis, &map("heisenberg_bad.json")).map_err(|e| e.to_string())?;
    ensure(!bad.sends, "(z, w + w²) accepted on the Heisenberg hypersurface")?;
    Ok("three example maps send, the negative control fails".into())
}

fn criterion_3() -> Check {
    let mut count = 0;
    for (name, _) in MANIFOLDS {
        let m = manifold(name);
        for k in 0..=4 {
            ensure(verify_segre_identity(&m, k).map_err(|e| e.to_string())?, format!("{name}, k = {k}"))?;
            count += 1;
        }
        // a non-real perturbation of Q
        let ly = m.layout();
        let mut e = vec![0u32; 2 * ly.n + ly.d];
        e[0] = 2;
        e[ly.n] = 1;
        let mut q = m.q().clone().into_vec();
        q[0] = &q[0] + &Series::monomial(q[0].nvars(), q[0].prec(), &e, C::one());
        let bad = GenericSubmanifoldNF::new_unchecked(ly.n, ly.d, SeriesTuple::new(q).unwrap()).unwrap();
        let fails = (1..=4).filter(|&k| !verify_segre_identity(&bad, k).unwrap_or(false)).count();
        ensure(fails == 4, format!("corrupted {name}: only {fails} of 4 levels fail"))?;
    }
    Ok(format!("{count} identities hold; every corrupted level fails"))
}

fn criterion_4() -> Check {
    let m = manifold("heisenberg.json");
    let rep = finite_type_test(&m, 2, 17).map_err(|e| e.to_string())?;
    let ranks: Vec<usize> = rep.ranks.iter().map(|r| r.rank).collect();
    ensure(ranks == vec![1, 2], format!("ranks {ranks:?}"))?;
    ensure(rep.verdict == FiniteType::Yes { k1: 2 }, format!("{:?}", rep.verdict))?;
    let minor = rep.exact_minor.ok_or("no exact minor")?;
    ensure(!minor.coeff.is_zero() && minor.rows.len() == 2, "exact minor is not a nonzero 2 × 2 minor")?;
    let rp = rep.rank_point.ok_or("no rank point")?;
    let v = segre_map(&m, rp.k).map_err(|e| e.to_string())?;
    ensure(v.eval(&rp.point).iter().all(|c| c.is_zero()), "rank point not in the zero fibre")?;
    ensure(rp.rows.len() == 2 && !rp.minor.is_zero(), "Jacobian rank at the point is not full")?;
    Ok(format!("ranks 1, 2; k1 = 2; minor coefficient {}; rank point on v^{}", minor.coeff, rp.k))
}

fn criterion_5() -> Check {
    // variables (X, Y, Z1′, Z″): p1 = X² − Y Z1′, p2 = Y² + X Z″
    let p1 = PolyInX::monic(vec![s(4, 8, &[(&[0, 1, 1, 0], -1)]), Series::zero(4, 8)]).unwrap();
    let p2 = s(4, 8, &[(&[0, 2, 0, 0], 1), (&[1, 0, 0, 1], 1)]);
    let e = eliminate_pair(&p1, 0, &p2, 1, &[3]).map_err(|e| e.to_string())?;
    let expect = s(4, 8, &[(&[0, 8, 0, 0], 1), (&[0, 5, 1, 2], -2), (&[0, 2, 2, 4], 1)]);
    ensure(e.r == expect, "eliminant differs from Y⁸ − 2Y⁵Z1′Z″² + Y²Z1′²Z″⁴")?;
    ensure(e.degree == e.m * e.n * e.n, "leading degree is not M N²")?;
    ensure(e.r.set_zero(&[3]) == s(4, 8, &[(&[0, 8, 0, 0], 1)]), "K′(Y, Z′, 0) does not vanish")?;
    let ideal = SeriesIdeal::new(SeriesTuple::new(vec![p1.to_series(0), p2]).unwrap()).unwrap();
    let w = membership_bounded(&e.r, &ideal, 6);
    ensure(w.witness().map(|w| w.verify(&e.r, &ideal)).unwrap_or(false), "membership of the eliminant not certified")?;

    // (u, v1, v2): (v1² + u v2, v2² + u v1)
    let f = SeriesTuple::new(vec![s(3, 8, &[(&[0, 2, 0], 1), (&[1, 0, 1], 1)]), s(3, 8, &[(&[0, 0, 2], 1), (&[1, 1, 0], 1)])]).unwrap();
    let out = monicize_system(&f, 1, 2, 6).map_err(|e| e.to_string())?;
    let ideal = SeriesIdeal::new(f).unwrap();
    for r in &out {
        let p = r.poly.to_series(r.var);
        ensure(r.poly.is_monic() && r.witness.verify(&p, &ideal), "monic relation fails its witness")?;
        let fresh = membership_bounded(&p, &ideal, 6);
        ensure(fresh.witness().map(|w| w.verify(&p, &ideal)).unwrap_or(false), "monic relation fails a fresh membership search")?;
    }
    Ok(format!("eliminant matches with degree {}; {} monic relations certified", e.degree, out.len()))
}

fn exact(m: &GenericSubmanifoldNF, p: u32) -> GenericSubmanifoldNF {
    let q: Vec<Series> = m.q().iter().map(|s| s.exact_to(p)).collect();
    GenericSubmanifoldNF::new(m.n(), m.d(), SeriesTuple::new(q).unwrap()).unwrap()
}

fn exact_map(h: &FormalMapNF, p: u32) -> FormalMapNF {
    let (n, d) = h.source_dims();
    let f = SeriesTuple::new(h.f().iter().map(|s| s.exact_to(p)).collect()).unwrap();
    let g = SeriesTuple::new(h.g().iter().map(|s| s.exact_to(p)).collect()).unwrap();
    FormalMapNF::new(n, d, f, g).unwrap()
}

fn criterion_6() -> Check {
    const D: u32 = 8;
    let opts = ReflectionOptions::default();
    let heis = manifold("heisenberg.json");
    let mut base = None;
    for name in ["identity.json", "dilate2.json"] {
        let probe = reflection_identities(&heis, &heis, &map(name), &opts).map_err(|e| e.to_string())?;
        // the identities lose r orders to the jets of H̄; these inputs are polynomial, so extend them by r
        let p = D + probe.r;
        let (m, h) = (exact(&heis, p), exact_map(&map(name), p));
        let id = reflection_identities(&m, &m, &h, &opts).map_err(|e| e.to_string())?;
        ensure(id.polys.iter().all(|q| q.is_monic()), format!("{name}: identity not monic"))?;
        ensure(id.polys.iter().all(|q| q.prec() >= D), format!("{name}: identities known only through {}", id.polys[0].prec()))?;
        ensure(verify_reflection(&m, &id, &h).map_err(|e| e.to_string())?, format!("{name}: verification fails"))?;
        if name == "identity.json" {
            base = Some(reflection_identities(&heis, &heis, &map(name), &opts).map_err(|e| e.to_string())?);
        }
    }
    let base = base.unwrap();
    for name in ["chern_moser_1.json", "chern_moser_minus_half.json"] {
        let other = reflection_identities(&heis, &heis, &map(name), &opts).map_err(|e| e.to_string())?;
        ensure(other.polys == base.polys, format!("{name}: identities differ from those of a map with the same jets"))?;
    }
    Ok(format!("identity and dilation verify through order {D}; jet stability holds (r = {})", base.r))
}

fn fields(c: i64, p: u32) -> Vec<FormalVectorField> {
    let x = &Series::var(2, p, 0) * &Series::var(2, p, 1).scale(&C::int(c));
    vec![
        FormalVectorField { coeffs: vec![Series::one(2, p), x.clone()] },
        FormalVectorField { coeffs: vec![Series::var(2, p, 1), &Series::one(2, p) + &x] },
    ]
}

fn fact(m: &MultiIndex) -> i64 {
    m.0.iter().map(|&e| (1..=e as i64).product::<i64>()).product()
}

/// The unregrouped product rule for `S^γ P(h)`.
fn plain_leibniz(poly: &PolyInX, h: &Series, s: &[FormalVectorField], gamma: &MultiIndex, p: u32) -> Series {
    let mut hp = FieldPowers::new(s, h);
    let mut acc = Series::zero(2, p);
    let boxed = MultiIndex::in_box(&MultiIndex::zero(2), gamma);
    for (k, a) in poly.coeffs().iter().enumerate() {
        let mut ap = FieldPowers::new(s, a);
        let mut stack: Vec<(Vec<MultiIndex>, MultiIndex)> = vec![(vec![], gamma.clone())];
        while let Some((nus, left)) = stack.pop() {
            if nus.len() == k {
                let den = fact(&left) * nus.iter().map(fact).product::<i64>();
                let mut t = ap.get(&left).scale(&C::ratio(fact(gamma), den));
                for nu in &nus {
                    t = &t * &hp.get(nu);
                }
                acc = &acc + &t;
                continue;
            }
            for nu in &boxed {
                if let Some(rest) = left.checked_sub(nu) {
                    let mut next = nus.clone();
                    next.push(nu.clone());
                    stack.push((next, rest));
                }
            }
        }
    }
    acc
}

fn criterion_7() -> Check {
    const P: u32 = 7;
    let mut seed = 17u64;
    let mut next = move |m: i64| {
        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((seed >> 33) as i64) % m
    };
    let mut derived = 0;
    for i in 0..100 {
        let mut rnd = |lo: i64, span: i64| lo + next(span);
        let h = s(2, P, &[(&[1, 0], rnd(-2, 5)), (&[0, 1], rnd(-2, 5)), (&[1, 1], rnd(-1, 3))]);
        let other = s(2, P, &[(&[1, 0], rnd(-2, 5)), (&[0, 2], rnd(-2, 5))]);
        // P = (X − h)(X − other)
        let poly = PolyInX::linear(&h).mul(&PolyInX::linear(&other));
        let sf = fields(rnd(-1, 3), P);
        let gamma = MultiIndex::from_slice(&[rnd(0, 3) as u32, rnd(0, 2) as u32]);
        let direct = FieldPowers::new(&sf, &poly.eval(&h)).get(&gamma);
        ensure(plain_leibniz(&poly, &h, &sf, &gamma, P) == direct, format!("instance {i}: product rule oracle disagrees"))?;
        let alpha = MultiIndex::from_slice(&[gamma.0[0].min(1), gamma.0[1].min(1)]);
        let mut ctx = LeibnizContext::new(&poly, &h, &sf);
        let t = ctx.terms(&alpha, &gamma);
        let mut sum = t.a0.clone();
        for (nus, a) in &t.terms {
            let mut term = a.clone();
            for nu in nus {
                term = &term * &ctx.derived_h(nu);
            }
            sum = &sum + &term;
        }
        ensure(sum == direct, format!("instance {i}: regrouped sum differs from S^γ P(h)"))?;
        let a = if alpha.is_zero() { MultiIndex::from_slice(&[1, 0]) } else { alpha.clone() };
        let ja = a.scale(2);
        let lead = ctx.coefficient(&ja, &a, &[a.clone(), a.clone()]);
        ensure(lead == Series::constant(2, lead.prec(), C::ratio(fact(&ja), fact(&a) * fact(&a))), format!("instance {i}: leading constant"))?;
        let v = SeriesTuple::identity(2, P);
        if let Ok(dp) = derived_polynomial(&poly, &h, &sf, &v, &a) {
            let root = FieldPowers::new(&sf, &h).get(&a).compose(&v).map_err(|e| e.to_string())?;
            ensure(dp.root.eq_through(&root, dp.order), format!("instance {i}: derived root is not S^α h"))?;
            ensure(dp.along.eval(&dp.root).is_zero_through(dp.order), format!("instance {i}: R(root) ≠ 0"))?;
            derived += 1;
        }
    }
    ensure(derived == 100, format!("derived polynomial failed on {} of 100 instances", 100 - derived))?;
    Ok("100 instances: re-summation, leading constant and derived polynomials verify".into())
}

fn criterion_8() -> Check {
    let heis = manifold("heisenberg.json");
    let opts = ReflectionOptions::default();
    let (a, b) = (map("chern_moser_1.json"), map("chern_moser_minus_half.json"));
    let rep = chain_agreement(&heis, &heis, &a, &b, 1, 2, 1, &opts).map_err(|e| e.to_string())?;
    ensure(rep.jets_agree_through == Some(1), format!("jets agree through {:?}", rep.jets_agree_through))?;
    ensure(matches!(rep.conclusion, Conclusion::Differ { .. }), format!("1-jet pair: {:?}", rep.conclusion))?;
    let same = chain_agreement(&heis, &heis, &b, &b, 2, 2, 1, &opts).map_err(|e| e.to_string())?;
    ensure(same.conclusion == Conclusion::Identical { order: 8 }, format!("2-jet pair: {:?}", same.conclusion))?;
    let id = map("identity.json");
    let ids = chain_agreement(&heis, &heis, &id, &id, 2, 4, 2, &opts).map_err(|e| e.to_string())?;
    ensure(ids.rungs.iter().all(|r| r.verdict == RungVerdict::Agree), "identity against itself disagrees somewhere")?;
    Ok(format!("divergence at {:?}; 2-jet pair identical through 8; {} identity rungs agree", rep.first_disagreement, ids.rungs.len()))
}

fn criterion_9() -> Check {
    let m = manifold("flat_direction.json");
    let h = map("flat_direction_map.json");
    let l = convergence_ledger(&m, &m, &h, 3, 2, &ReflectionOptions::default()).map_err(|e| e.to_string())?;
    ensure(l.entries.len() == 3 * 10 * 3, format!("{} rungs", l.entries.len()))?;
    ensure(l.entries.iter().all(|e| e.nontrivial), "a rung polynomial vanishes identically")?;
    ensure(l.recheck(&m, &h).map_err(|e| e.to_string())?, "a rung fails its recheck")?;
    Ok(format!("{} rungs verify exactly", l.entries.len()))
}

fn criterion_10() -> Check {
    let config = Config::default();
    for case in CASES {
        let a = run_case(case, &config).map_err(|e| e.message)?;
        let b = run_case(case, &config).map_err(|e| e.message)?;
        ensure(a.report == b.report, format!("{}: two runs differ", case.name))?;
        ensure(a.report == case.golden && a.code == case.exit, format!("{}: golden mismatch", case.name))?;
    }
    for (name, text) in MANIFOLDS.iter().chain(MAPS.iter()) {
        let c = canonicalize(text).map_err(|e| e.message)?;
        ensure(c == *text, format!("{name} is not canonical"))?;
        ensure(canonicalize(&c).map_err(|e| e.message)? == c, format!("{name}: round trip changes the text"))?;
    }
    Ok(format!("{} cases reproduce their golden reports; {} files round-trip", CASES.len(), MANIFOLDS.len() + MAPS.len()))
}

fn main() {
    let criteria: [(u32, u64, fn() -> Check); 10] = [
        (1, 60, criterion_1),
        (2, 30, criterion_2),
        (3, 30, criterion_3),
        (4, 10, criterion_4),
        (5, 60, criterion_5),
        (6, 120, criterion_6),
        (7, 60, criterion_7),
        (8, 120, criterion_8),
        (9, 120, criterion_9),
        (10, 120, criterion_10),
    ];
    let mut failed = 0;
    for (n, limit, f) in criteria {
        let start = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let out = match out {
            Ok(msg) if took > Duration::from_secs(limit) => Err(format!("{msg}, but took longer than {limit} s")),
            other => other,
        };
        match out {
            Ok(msg) => println!("criterion {n}: PASS ({:.2} s) {msg}", took.as_secs_f64()),
            Err(msg) => {
                failed += 1;
                println!("criterion {n}: FAIL ({:.2} s) {msg}", took.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
