//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{brute_hom_dim, random_elem, random_int_elem, theta7};
use tfmodlab::algebra::LocalityVerdict;
use tfmodlab::exactfield::{ExtElem, Field, Poly, Rational};
use tfmodlab::linalg::{k_rank, Matrix};
use tfmodlab::pairs::{
    bass_pair, decompose, direct_sum_all, endo_algebra, free_pair, hom_pairs, is_indecomposable,
    is_isomorphic, make_pair, psi_default, random_invertible, PairModule,
};
use tfmodlab::polymat::{column_hermite, solve_scaled, LPoly};
use tfmodlab::ringop::{
    comaximal_factorization, coprime_obstruction, crt_idempotents, embed_pair, factor_element,
    genus_realizable, glue_submodule, iso_from_genus, localize_check, min_generators,
    validate_trace_chain, CountClass, FreeRankLaw, GenusDescriptor, IdealOfR, LocalAssignment,
    LocalDecomposition, LocalInvariant, MaximalIdealDesc, RModule, RankClass, SymbolicFamily,
};
use tfmodlab::semigroup::{NumericalSemigroup, SemigroupError};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn main() {
    let criteria: Vec<(&str, fn() -> Check)> = vec![
        ("psi family", psi_family),
        ("krull-schmidt round trip", krull_schmidt),
        ("freeness criterion", freeness),
        ("bass construction", bass),
        ("package deal", package_deal),
        ("trace chains", trace_chains),
        ("semigroups", semigroups),
        ("coprime obstruction", coprime),
        ("genus realizability", genus),
        ("invariant suites", invariants),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({secs:.2}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.2}s): {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

fn psi_family() -> Check {
    let t = theta7();
    let start = Instant::now();
    let mut checked = 0;
    for n in 2..=4 {
        let family: Vec<PairModule> = (0..4)
            .map(|s| psi_default(t.clone(), n, s).unwrap())
            .collect();
        for (i, p) in family.iter().enumerate() {
            let v = is_indecomposable(p, i as u64).unwrap();
            ensure(v == LocalityVerdict::LocalCertified, || {
                format!("n={n} t={i}: verdict {}", v.tag())
            })?;
            for (j, q) in family.iter().enumerate() {
                let dim = hom_pairs(p, q).unwrap().len();
                let oracle = brute_hom_dim(p, q);
                let expect = if i == j { n } else { 0 };
                ensure(dim == oracle && dim == expect, || {
                    format!("n={n} ({i},{j}): hom dim {dim}, oracle {oracle}, expected {expect}")
                })?;
                if i != j {
                    ensure(!is_isomorphic(p, q).unwrap().isomorphic, || {
                        format!("n={n}: Ψ_{i} ≅ Ψ_{j} reported")
                    })?;
                }
                checked += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(30), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "{checked} (t, u) comparisons over n = 2, 3, 4 in {elapsed:.2?}"
    ))
}

fn krull_schmidt() -> Check {
    let t = theta7();
    let l = t.as_ref();
    let one = free_pair(t.clone(), 1).unwrap();
    for seed in 0..20u64 {
        let t1 = (seed % 4) as i64;
        let t2 = (t1 + 1 + (seed / 4) as i64 % 3) % 4;
        let a = psi_default(t.clone(), 2, t1).unwrap();
        let b = psi_default(t.clone(), 2, t2).unwrap();
        let inputs = [a, one.clone(), b];
        let sum = direct_sum_all(&inputs).unwrap();
        let moved = sum.transform(&random_invertible(l, sum.n(), seed)).unwrap();
        let rep = decompose(&moved, seed).unwrap();
        ensure(rep.factors.len() == 3, || {
            format!("seed {seed}: {} factors", rep.factors.len())
        })?;
        // Perfect matching between inputs and factors under isomorphism.
        let mut used = [false; 3];
        for (k, input) in inputs.iter().enumerate() {
            let hit = (0..3)
                .find(|&j| !used[j] && is_isomorphic(&rep.factors[j], input).unwrap().isomorphic);
            let j = hit.ok_or_else(|| format!("seed {seed}: input {k} unmatched"))?;
            used[j] = true;
        }
    }
    Ok("20 seeds, every input matched to exactly one factor".into())
}

fn freeness() -> Check {
    let t = theta7();
    let l = t.as_ref();
    let mut rng = ChaCha8Rng::seed_from_u64(0xf1ee);
    let (mut free, mut nonfree) = (0, 0);
    for i in 0..50u64 {
        let n = rng.gen_range(1..=4);
        let a = random_invertible(l, n, 1000 + i);
        let mut cols = a.col_vecs();
        let want_free = i % 2 == 0;
        if !want_free {
            // θ^s times a basis column is K-independent of the basis columns.
            let extra = rng.gen_range(1..=3);
            for e in 0..extra {
                let s = rng.gen_range(1..l.degree()) as u32;
                let j = (e + rng.gen_range(0..n)) % n;
                let v: Vec<ExtElem> = cols[j].iter().map(|c| l.mul(&l.theta_pow(s), c)).collect();
                if k_rank(l, &[cols.clone(), vec![v.clone()]].concat(), n) > cols.len() {
                    cols.push(v);
                }
            }
            if cols.len() == n {
                let v: Vec<ExtElem> = cols[0].iter().map(|c| l.mul(&l.theta(), c)).collect();
                cols.push(v);
            }
        }
        let p = make_pair(t.clone(), n, cols.clone()).unwrap();
        let truth = cols.len() == n;
        ensure(truth == want_free, || {
            format!("sample {i}: construction broke")
        })?;
        ensure(p.is_free() == truth, || {
            format!(
                "sample {i}: is_free {} but constructed {}",
                p.is_free(),
                truth
            )
        })?;
        if truth {
            free += 1;
        } else {
            nonfree += 1;
        }
    }
    Ok(format!(
        "{free} free and {nonfree} non-free samples classified correctly"
    ))
}

fn bass() -> Check {
    let t = theta7();
    let l = t.as_ref();
    let p = bass_pair(t.clone(), &l.one(), &l.theta(), &l.theta_pow(2)).unwrap();
    ensure(p.n() == 2, || format!("rank {}", p.n()))?;
    let x = Poly::x(l);
    let gens: Vec<LPoly> = [l.one(), l.theta(), l.theta_pow(2)]
        .iter()
        .map(|c| x.scale(l, c))
        .collect();
    let ideal = IdealOfR::from_gens(t.clone(), &gens).unwrap();
    let mu = min_generators(&ideal, &MaximalIdealDesc::M0).unwrap();
    ensure(mu == 3, || format!("min_generators {mu}"))?;
    let search = endo_algebra(&p).unwrap().split_search(0, 200);
    ensure(search.idempotent.is_none(), || "idempotent found".into())?;
    ensure(search.all_primary, || {
        "non-primary minimal polynomial sampled".into()
    })?;
    let v = is_indecomposable(&p, 0).unwrap();
    ensure(v.is_local(), || format!("verdict {}", v.tag()))?;
    Ok(format!(
        "rank 2, μ = 3, {} draws all primary, verdict {}",
        search.draws,
        v.tag()
    ))
}

/// Check `Φ(M) = N` for `Φ = B_N·A·B_M⁻¹` by clearing the denominator of
/// `B_M⁻¹`: `span(B_N·A·s) = P·N` where `B_M·s = P·g` for each generator `g`.
fn verify_global_iso(m: &RModule, n: &RModule, a: &Matrix<ExtElem>) -> bool {
    let t = m.tower().clone();
    let l = t.as_ref();
    let (bm, piv) = column_hermite(l, m.hull());
    let (bn, _) = column_hermite(l, n.hull());
    let lifted: Vec<Vec<LPoly>> = a
        .row_vecs()
        .iter()
        .map(|r| r.iter().map(|c| Poly::constant(c.clone())).collect())
        .collect();
    let mut images = Vec::new();
    let mut scale = Poly::one(l);
    for g in m.generators() {
        let Some((s, p)) = solve_scaled(l, &bm, &piv, &g) else {
            return false;
        };
        scale = p;
        let as_: Vec<LPoly> = lifted
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&s)
                    .fold(Poly::zero(), |acc, (c, y)| acc.add(l, &c.mul(l, y)))
            })
            .collect();
        images.push(bn.mul_vec(l, &as_));
    }
    RModule::span(t.clone(), m.n(), &images) == n.scale(&scale)
}

fn package_deal() -> Check {
    let t = theta7();
    let l = t.as_ref();
    let probes = [
        MaximalIdealDesc::linear(l, 2),
        MaximalIdealDesc::linear(l, 3),
        MaximalIdealDesc::linear(l, -1),
    ];
    let mut cases = 0;
    for n in 2..=3 {
        let ambient = RModule::free(t.clone(), n);
        for s in 0..4 {
            let psi = psi_default(t.clone(), n, s).unwrap();
            let asg = vec![(
                MaximalIdealDesc::M0,
                LocalAssignment::Submodule(embed_pair(&psi)),
            )];
            let g0 = glue_submodule(&ambient, &asg, 0).unwrap();
            let g1 = glue_submodule(&ambient, &asg, 1).unwrap();
            ensure(g0.crt.b != g1.crt.b, || {
                "variants used the same CRT elements".into()
            })?;
            for g in [&g0, &g1] {
                let LocalInvariant::Pair(Some(p)) =
                    localize_check(&g.module, &MaximalIdealDesc::M0)
                else {
                    return Err(format!("n={n} t={s}: no pair at M0"));
                };
                ensure(is_isomorphic(&p, &psi).unwrap().isomorphic, || {
                    format!("n={n} t={s}: pair at M0 is not Ψ_t")
                })?;
                for q in &probes {
                    let inv = localize_check(&g.module, q);
                    ensure(
                        matches!(&inv, LocalInvariant::Free { rank, valuations } if *rank == n && valuations.iter().all(|&v| v == 0)),
                        || format!("n={n} t={s}: localization at {q} is {inv:?}"),
                    )?;
                }
            }
            let a = iso_from_genus(&g0.module, &g1.module)
                .unwrap()
                .ok_or_else(|| format!("n={n} t={s}: variants not in one genus"))?;
            ensure(verify_global_iso(&g0.module, &g1.module, &a), || {
                format!("n={n} t={s}: isomorphism does not carry one variant onto the other")
            })?;
            cases += 1;
        }
    }
    // CRT example: modulus x(1 + x), target (1 + x) gives b₁ = −x.
    let x = Poly::x(l);
    let q = Poly::from_coeffs(vec![l.one(), l.one()]);
    let modulus = IdealOfR::principal(t.clone(), x.mul(l, &q)).unwrap();
    let crt = crt_idempotents(&[MaximalIdealDesc::Poly(q)], &modulus).unwrap();
    ensure(crt.b == vec![x.neg(l)], || format!("b₁ = {:?}", crt.b))?;
    Ok(format!(
        "{cases} glued modules, variants isomorphic, b₁ = −x"
    ))
}

fn trace_chains() -> Check {
    let t = theta7();
    let l = t.as_ref();
    let r = IdealOfR::unit(t.clone());
    let m = IdealOfR::maximal_m0(t.clone());
    let xi = IdealOfR::principal(t.clone(), Poly::x(l)).unwrap();
    let constant = validate_trace_chain(&[r.clone(), r.clone(), r.clone()]).unwrap();
    ensure(constant.valid, || "constant chain R rejected".into())?;
    let mr = validate_trace_chain(&[m, r]).unwrap();
    ensure(mr.valid, || "(𝔪, R) rejected".into())?;
    let xx = validate_trace_chain(&[xi.clone(), xi.clone()]).unwrap();
    ensure(!xx.valid && xx.first_violation == Some(1), || {
        format!("((x),(x)) gave {xx:?}")
    })?;
    let x2 = IdealOfR::principal(t.clone(), Poly::x(l).pow(l, 2)).unwrap();
    ensure(xi.mul(&xi) == x2 && x2 != xi, || "(x)(x) ≠ (x²)".into())?;
    Ok("R and (𝔪, R) pass; ((x),(x)) fails at 1 with product (x²)".into())
}

/// Largest non-member below a generous bound, by enumerating sums.
fn frobenius_oracle(gens: &[u64]) -> i64 {
    let limit = gens.iter().product::<u64>() as usize + 1;
    let mut member = vec![false; limit + 1];
    member[0] = true;
    for k in 1..=limit {
        member[k] = gens
            .iter()
            .any(|&g| g as usize <= k && member[k - g as usize]);
    }
    member.iter().rposition(|&m| !m).map_or(-1, |k| k as i64)
}

fn semigroups() -> Check {
    let s37 = NumericalSemigroup::new(&[3, 7]).unwrap();
    let over = s37.overmodule_min_gens().unwrap();
    ensure(over.count == 2 && over.witnesses == vec![4, 5], || {
        format!("⟨3,7⟩ overmodule {over:?}")
    })?;
    let f = s37.frobenius().unwrap();
    ensure(f == 11 && f == frobenius_oracle(&[3, 7]), || {
        format!("⟨3,7⟩ frobenius {f}")
    })?;
    ensure(!s37.dr_check().unwrap().dr2, || "⟨3,7⟩ passes dr2".into())?;
    let s23 = NumericalSemigroup::new(&[2, 3]).unwrap();
    ensure(s23.overmodule_min_gens().unwrap().count == 0, || {
        "⟨2,3⟩ overmodule nonzero".into()
    })?;
    ensure(s23.dr_check().unwrap().passes, || "⟨2,3⟩ fails".into())?;
    let s46 = NumericalSemigroup::new(&[4, 6]).unwrap();
    let err = SemigroupError::NotCoprime(2);
    ensure(
        s46.frobenius() == Err(err.clone())
            && s46.overmodule_min_gens() == Err(err.clone())
            && s46.dr_check() == Err(err),
        || "⟨4,6⟩ not rejected".into(),
    )?;
    Ok("⟨3,7⟩: μ = 2 via t^4, t^5, F = 11, dr2 fails; ⟨2,3⟩ passes; ⟨4,6⟩ NotCoprime".into())
}

fn coprime() -> Check {
    for (a, b, expect) in [(2, 2, true), (4, 6, true), (2, 3, false)] {
        let r = coprime_obstruction(a, b).unwrap();
        ensure(r.closure_fails == expect, || {
            format!("({a},{b}) gave {r:?}")
        })?;
    }
    for k in 1..=12 {
        ensure(!coprime_obstruction(1, k).unwrap().closure_fails, || {
            format!("(1,{k}) fails")
        })?;
    }
    Ok("(2,2), (4,6) fail; (1,k), (2,3) close".into())
}

fn genus() -> Check {
    let t = theta7();
    let psi = psi_default(t.clone(), 2, 1).unwrap();
    let finite = GenusDescriptor {
        rank: RankClass::Finite(2),
        local: vec![(
            MaximalIdealDesc::M0,
            LocalDecomposition {
                nonfree: vec![psi.to_json()],
                free_rank: 0,
            },
        )],
        free_elsewhere: true,
        families: vec![],
    };
    ensure(genus_realizable(&finite).unwrap(), || {
        "finite descriptor unrealizable".into()
    })?;
    let family = |count, free_rank| GenusDescriptor {
        rank: RankClass::Countable,
        local: vec![],
        free_elsewhere: true,
        families: vec![SymbolicFamily {
            predicate: "1 + c·x for every integer c".into(),
            count,
            free_rank,
        }],
    };
    ensure(
        !genus_realizable(&family(CountClass::Countable, FreeRankLaw::Constant(1))).unwrap(),
        || "constant r = 1 family realizable".into(),
    )?;
    ensure(
        !genus_realizable(&family(CountClass::Uncountable, FreeRankLaw::Unbounded)).unwrap(),
        || "uncountable support realizable".into(),
    )?;
    Ok("finite → true, constant r = 1 → false, uncountable → false".into())
}

const SAMPLES: usize = 200;

fn invariants() -> Check {
    let start = Instant::now();
    let t = theta7();
    let l = t.as_ref();
    let mut rng = ChaCha8Rng::seed_from_u64(0x1a7);

    let mut laps: Vec<(&str, Duration)> = Vec::new();
    let mut lap = Instant::now();
    for i in 0..SAMPLES {
        let (a, b, c) = (
            random_elem(l, &mut rng),
            random_elem(l, &mut rng),
            random_elem(l, &mut rng),
        );
        let ok = l.mul(&l.mul(&a, &b), &c) == l.mul(&a, &l.mul(&b, &c))
            && l.mul(&a, &b) == l.mul(&b, &a)
            && l.mul(&a, &l.add(&b, &c)) == l.add(&l.mul(&a, &b), &l.mul(&a, &c))
            && l.add(&a, &l.neg(&a)) == l.zero()
            && (a.coords().iter().all(Rational::is_zero)
                || l.mul(&a, &l.inv(&a).unwrap()) == l.one());
        ensure(ok, || format!("field axioms, sample {i}"))?;
    }

    laps.push(("field axioms", lap.elapsed()));
    lap = Instant::now();
    for i in 0..SAMPLES {
        let (r, c) = (rng.gen_range(1..=4), rng.gen_range(1..=5));
        let rows: Vec<Vec<ExtElem>> = (0..r)
            .map(|_| {
                (0..c)
                    .map(|_| {
                        if rng.gen_bool(0.3) {
                            l.zero()
                        } else {
                            random_int_elem(l, &mut rng, 2)
                        }
                    })
                    .collect()
            })
            .collect();
        let m = Matrix::from_rows(rows, c).unwrap();
        let once = m.rref(l);
        let twice = once.matrix.rref(l);
        ensure(
            once.matrix == twice.matrix && once.rank == twice.rank,
            || format!("rref idempotence, sample {i}"),
        )?;
    }

    laps.push(("rref", lap.elapsed()));
    lap = Instant::now();
    for i in 0..SAMPLES {
        // Half the samples are products of two pieces, so they really split.
        let pieces = if i % 2 == 0 { 1 } else { 2 };
        let mut r = Poly::one(l);
        for _ in 0..pieces {
            let deg = rng.gen_range(0..=6 / pieces);
            let mut coeffs = vec![l.from_int(rng.gen_range(-3..=3))];
            for _ in 0..deg {
                coeffs.push(random_int_elem(l, &mut rng, 2));
            }
            r = r.mul(l, &Poly::from_coeffs(coeffs));
        }
        if r.is_zero() {
            continue;
        }
        let f = factor_element(l, &r).unwrap();
        ensure(f.expand(l) == r, || {
            format!("factorization round trip, sample {i}")
        })?;
    }

    laps.push(("factorization", lap.elapsed()));
    lap = Instant::now();
    for i in 0..SAMPLES {
        let x = Poly::x(l);
        let e = rng.gen_range(0..=2);
        let mut m = x.pow(l, e);
        let mut primes = Vec::new();
        for c in [2i64, -3, 5] {
            if rng.gen_bool(0.5) {
                let q = MaximalIdealDesc::linear(l, c);
                let MaximalIdealDesc::Poly(qp) = &q else {
                    unreachable!()
                };
                m = m.mul(l, &qp.pow(l, rng.gen_range(1..=2)));
                primes.push(q);
            }
        }
        if e > 0 {
            primes.push(MaximalIdealDesc::M0);
        }
        if primes.is_empty() {
            continue;
        }
        let modulus = IdealOfR::principal(t.clone(), m).unwrap();
        let targets: Vec<MaximalIdealDesc> = primes
            .iter()
            .filter(|_| rng.gen_bool(0.6))
            .cloned()
            .collect();
        if targets.is_empty() {
            continue;
        }
        let crt = crt_idempotents(&targets, &modulus).unwrap();
        let comps = comaximal_factorization(&modulus).unwrap();
        let one = Poly::one(l);
        for (p, comp) in &comps {
            for (tgt, b) in targets.iter().zip(&crt.b) {
                let want = if tgt == p { b.sub(l, &one) } else { b.clone() };
                ensure(comp.contains(&want), || {
                    format!("CRT congruence, sample {i}")
                })?;
            }
            let in_target = targets.contains(p);
            let want = if in_target {
                crt.complement.clone()
            } else {
                crt.complement.sub(l, &one)
            };
            ensure(comp.contains(&want), || {
                format!("CRT complement, sample {i}")
            })?;
        }
    }

    let pool: Vec<PairModule> = vec![
        psi_default(t.clone(), 2, 0).unwrap(),
        psi_default(t.clone(), 3, 1).unwrap(),
        direct_sum_all(&[
            psi_default(t.clone(), 2, 2).unwrap(),
            free_pair(t.clone(), 1).unwrap(),
        ])
        .unwrap(),
        bass_pair(t.clone(), &l.one(), &l.theta(), &l.theta_pow(2)).unwrap(),
    ];
    let bases: Vec<Vec<Matrix<ExtElem>>> = pool.iter().map(|p| hom_pairs(p, p).unwrap()).collect();
    let mut surjective = 0;
    laps.push(("crt", lap.elapsed()));
    lap = Instant::now();
    for i in 0..SAMPLES {
        let k = i % pool.len();
        let (p, basis) = (&pool[k], &bases[k]);
        let a = basis.iter().fold(Matrix::zeros(l, p.n(), p.n()), |acc, b| {
            let c = l.from_int(rng.gen_range(-1..=1));
            acc.add(l, &b.scale(l, &c))
        });
        let image: Vec<Vec<ExtElem>> = p.v_basis().iter().map(|v| a.mul_vec(l, v)).collect();
        if k_rank(l, &image, p.n()) == p.dim_k() {
            surjective += 1;
            let inv = a
                .inverse(l)
                .ok_or_else(|| format!("surjective endomorphism not injective, sample {i}"))?;
            ensure(p.maps_into(&inv, p), || {
                format!("inverse leaves V, sample {i}")
            })?;
        } else {
            // An invertible A keeps dim_K(A·V), so a non-surjective one is singular.
            ensure(l.is_zero(&a.det(l)), || {
                format!("non-surjective endomorphism is invertible, sample {i}")
            })?;
        }
    }
    laps.push(("endomorphisms", lap.elapsed()));
    let elapsed = start.elapsed();
    let laps: Vec<String> = laps
        .iter()
        .map(|(n, d)| format!("{n} {:.1}s", d.as_secs_f64()))
        .collect();
    ensure(elapsed < Duration::from_secs(60), || {
        format!("took {elapsed:.2?} [{}]", laps.join(", "))
    })?;
    Ok(format!(
        "5 suites × {SAMPLES} samples ({surjective} surjective endomorphisms) in {elapsed:.2?} [{}]",
        laps.join(", ")
    ))
}
