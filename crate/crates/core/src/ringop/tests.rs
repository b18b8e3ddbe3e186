use super::*;
use crate::exactfield::Rational;
use crate::pairs::{free_pair, is_isomorphic, psi_default};

fn tower() -> Arc<FieldTower> {
    Arc::new(FieldTower::theta7())
}

fn lp(l: &FieldTower, c: &[i64]) -> LPoly {
    Poly::from_coeffs(c.iter().map(|&v| l.from_int(v)).collect())
}

fn ideal(t: &Arc<FieldTower>, gens: &[LPoly]) -> IdealOfR {
    IdealOfR::from_gens(t.clone(), gens).unwrap()
}

#[test]
fn factor_examples() {
    let t = tower();
    let l = t.as_ref();
    let r = Poly::monomial(l, l.theta(), 2);
    let f = factor_element(l, &r).unwrap();
    assert_eq!((f.unit.clone(), f.e, f.factors.len()), (l.theta(), 2, 0));

    let f = factor_element(l, &lp(l, &[1, 1])).unwrap();
    assert_eq!(f.unit, l.one());
    assert_eq!(f.factors, vec![(lp(l, &[1, 1]), 1)]);

    let r = lp(l, &[3]).mul(l, &lp(l, &[1, 1])).mul(l, &lp(l, &[1, 2]));
    let f = factor_element(l, &r).unwrap();
    assert_eq!(f.unit, l.from_int(3));
    assert_eq!(f.factors, vec![(lp(l, &[1, 1]), 1), (lp(l, &[1, 2]), 1)]);
    assert_eq!(f.expand(l), r);

    assert_eq!(
        factor_element(l, &Poly::zero()).unwrap_err(),
        RingError::ZeroElement
    );
    assert_eq!(
        factor_element(l, &Poly::constant(l.theta())).unwrap_err(),
        RingError::NotInR
    );
}

#[test]
fn supports() {
    let t = tower();
    let l = t.as_ref();
    assert_eq!(
        support(&ideal(&t, &[Poly::x(l)])).unwrap(),
        vec![MaximalIdealDesc::M0]
    );
    assert_eq!(
        support(&ideal(&t, &[lp(l, &[1, 1])])).unwrap(),
        vec![MaximalIdealDesc::linear(l, 1)]
    );
    assert!(support(&IdealOfR::unit(t.clone())).unwrap().is_empty());
    assert_eq!(
        support(&IdealOfR::zero(t.clone())).unwrap_err(),
        RingError::ZeroIdeal
    );
}

#[test]
fn hull_of_maximal_ideal() {
    let t = tower();
    let m = IdealOfR::maximal_m0(t.clone());
    let (e, h, w) = m.hull().unwrap();
    assert_eq!(e, 1);
    assert!(h.is_one(t.as_ref()));
    assert_eq!(w.len(), 7);
    assert_eq!(RingR::new(t.clone()).conductor(), m);
}

#[test]
fn comaximal_split_of_x_times_one_plus_x() {
    let t = tower();
    let l = t.as_ref();
    let i = ideal(&t, &[Poly::x(l).mul(l, &lp(l, &[1, 1]))]);
    let parts = comaximal_factorization(&i).unwrap();
    assert_eq!(parts.len(), 2);
    let prod = parts
        .iter()
        .fold(IdealOfR::unit(t.clone()), |acc, (_, c)| acc.mul(c));
    assert_eq!(prod, i);
    assert!(parts[0].1.add(&parts[1].1).is_unit());

    let x2 = ideal(&t, &[Poly::monomial(l, l.one(), 2)]);
    let parts = comaximal_factorization(&x2).unwrap();
    assert_eq!(parts.len(), 1);
    assert_eq!(parts[0].1, x2);

    let two = ideal(&t, &[lp(l, &[1, 1]).mul(l, &lp(l, &[1, 2]))]);
    let parts = comaximal_factorization(&two).unwrap();
    assert_eq!(parts.len(), 2);
    assert!(parts[0].1.add(&parts[1].1).is_unit());
    assert_eq!(
        comaximal_factorization(&IdealOfR::unit(t.clone())).unwrap_err(),
        RingError::UnitIdeal
    );
}

#[test]
fn crt_examples() {
    let t = tower();
    let l = t.as_ref();
    let modulus = ideal(&t, &[Poly::x(l).mul(l, &lp(l, &[1, 1]))]);
    let q = MaximalIdealDesc::linear(l, 1);
    let c = crt_idempotents(std::slice::from_ref(&q), &modulus).unwrap();
    assert_eq!(c.b, vec![lp(l, &[0, -1])]);
    assert!(c.verify());

    let c = crt_idempotents(&[MaximalIdealDesc::M0], &modulus).unwrap();
    assert_eq!(c.b, vec![lp(l, &[1, 1])]);
    assert!(c.verify());

    let single = ideal(&t, &[lp(l, &[1, 1]).pow(l, 2)]);
    let c = crt_idempotents(std::slice::from_ref(&q), &single).unwrap();
    assert_eq!(c.b, vec![Poly::one(l)]);
    assert!(c.complement.is_zero());

    let other = MaximalIdealDesc::linear(l, 5);
    assert_eq!(
        crt_idempotents(&[other], &modulus).unwrap_err(),
        RingError::SupportMismatch
    );
}

#[test]
fn crt_with_nontrivial_coefficient_space() {
    // I = x(K + Kθ + xS)·(1+x)(1+2x)
    let t = tower();
    let l = t.as_ref();
    let h = lp(l, &[1, 1]).mul(l, &lp(l, &[1, 2]));
    let gens: Vec<LPoly> = [l.one(), l.theta()]
        .iter()
        .map(|c| Poly::monomial(l, c.clone(), 1).mul(l, &h))
        .chain((0..7).map(|a| Poly::monomial(l, l.theta_pow(a), 2).mul(l, &h)))
        .collect();
    let i = ideal(&t, &gens);
    let targets = support(&i).unwrap();
    assert_eq!(targets.len(), 3);
    for k in 0..targets.len() {
        let c = crt_idempotents(&targets[k..=k], &i).unwrap();
        assert!(c.verify(), "target {k}");
    }
}

#[test]
fn minimal_generators() {
    let t = tower();
    let l = t.as_ref();
    let principal = ideal(&t, &[lp(l, &[0, 1, 1])]);
    assert_eq!(
        min_generators(&principal, &MaximalIdealDesc::M0).unwrap(),
        1
    );
    let m = IdealOfR::maximal_m0(t.clone());
    assert_eq!(min_generators(&m, &MaximalIdealDesc::M0).unwrap(), 7);
    let w = [l.one(), l.theta(), l.theta_pow(2)];
    let bass = IdealOfR::from_coeffspace(t.clone(), 1, &w).unwrap();
    assert_eq!(min_generators(&bass, &MaximalIdealDesc::M0).unwrap(), 3);
    assert_eq!(
        min_generators(&bass, &MaximalIdealDesc::linear(l, 1)).unwrap(),
        1
    );
}

#[test]
fn trace_chains() {
    let t = tower();
    let l = t.as_ref();
    let r = IdealOfR::unit(t.clone());
    let m = IdealOfR::maximal_m0(t.clone());
    let x = ideal(&t, &[Poly::x(l)]);
    assert!(
        validate_trace_chain(&[r.clone(), r.clone(), r.clone()])
            .unwrap()
            .valid
    );
    assert!(validate_trace_chain(&[m.clone(), r.clone()]).unwrap().valid);
    let bad = validate_trace_chain(&[x.clone(), x.clone()]).unwrap();
    assert_eq!(bad.first_violation, Some(1));
    assert_eq!(x.mul(&x), ideal(&t, &[Poly::monomial(l, l.one(), 2)]));
    assert!(!validate_trace_chain(&[r, m]).unwrap().valid);
}

#[test]
fn coprime_reports() {
    assert!(coprime_obstruction(2, 2).unwrap().closure_fails);
    assert!(coprime_obstruction(4, 6).unwrap().closure_fails);
    assert_eq!(coprime_obstruction(4, 6).unwrap().gcd, 2);
    assert!(!coprime_obstruction(2, 3).unwrap().closure_fails);
    assert!(!coprime_obstruction(1, 9).unwrap().closure_fails);
    assert_eq!(coprime_obstruction(0, 1).unwrap_err(), RingError::ZeroRank);
}

#[test]
fn module_membership_and_localization() {
    let t = tower();
    let l = t.as_ref();
    let free = RModule::free(t.clone(), 2);
    assert!(free.contains(&[Poly::one(l), lp(l, &[3, 1])]));
    assert!(!free.contains(&[Poly::constant(l.theta()), Poly::zero()]));
    let q = MaximalIdealDesc::linear(l, 1);
    assert_eq!(
        localize_check(&free, &q),
        LocalInvariant::Free {
            rank: 2,
            valuations: vec![0, 0]
        }
    );
    assert_eq!(
        localize_check(&free, &MaximalIdealDesc::M0),
        LocalInvariant::Pair(Some(free_pair(t.clone(), 2).unwrap()))
    );
    // 1/(1+x)·e₁ is local at M0 but not at (1+x)
    let scaled = free.scale(&lp(l, &[1, 1]));
    let y = [Poly::one(l), Poly::zero()];
    assert!(scaled.local_contains(&y, &MaximalIdealDesc::M0));
    assert!(!scaled.local_contains(&y, &q));
}

#[test]
fn glue_psi_and_localize() {
    let t = tower();
    let l = t.as_ref();
    let probes = [
        MaximalIdealDesc::linear(l, 2),
        MaximalIdealDesc::linear(l, 3),
        MaximalIdealDesc::linear(l, -1),
    ];
    for n in 2..=3 {
        let psi = psi_default(t.clone(), n, 1).unwrap();
        let ambient = RModule::free(t.clone(), n);
        let asg = vec![(
            MaximalIdealDesc::M0,
            LocalAssignment::Submodule(embed_pair(&psi)),
        )];
        let g0 = glue_submodule(&ambient, &asg, 0).unwrap();
        let g1 = glue_submodule(&ambient, &asg, 1).unwrap();
        assert!(g0.crt.verify());
        assert!(verify_glue(&ambient, &asg, &g0.module, &probes));
        let LocalInvariant::Pair(Some(p)) = localize_check(&g0.module, &MaximalIdealDesc::M0)
        else {
            panic!("rank-n pair expected")
        };
        assert!(is_isomorphic(&p, &psi).unwrap().isomorphic);
        for q in &probes {
            assert!(
                matches!(localize_check(&g0.module, q), LocalInvariant::Free { rank, .. } if rank == n)
            );
        }
        assert!(same_genus(&g0.module, &g1.module).unwrap());
        assert!(iso_from_genus(&g0.module, &g1.module).unwrap().is_some());
    }
}

#[test]
fn glue_distinguishes_parameters() {
    let t = tower();
    let ambient = RModule::free(t.clone(), 2);
    let mk = |s| {
        let psi = psi_default(t.clone(), 2, s).unwrap();
        let asg = vec![(
            MaximalIdealDesc::M0,
            LocalAssignment::Submodule(embed_pair(&psi)),
        )];
        glue_submodule(&ambient, &asg, 0).unwrap().module
    };
    assert!(!same_genus(&mk(0), &mk(1)).unwrap());
}

#[test]
fn glue_nothing_is_ambient() {
    let t = tower();
    let ambient = RModule::free(t.clone(), 2);
    assert_eq!(glue_submodule(&ambient, &[], 0).unwrap().module, ambient);
}

#[test]
fn glue_ideal_case() {
    let t = tower();
    let l = t.as_ref();
    let q = MaximalIdealDesc::linear(l, 1);
    let ambient = RModule::free(t.clone(), 1);
    let m = IdealOfR::maximal_m0(t.clone());
    let asg = vec![
        (
            MaximalIdealDesc::M0,
            LocalAssignment::Submodule(m.module().clone()),
        ),
        (q.clone(), LocalAssignment::Power(2)),
    ];
    let g = glue_submodule(&ambient, &asg, 0).unwrap();
    let target = m.mul(&ideal(&t, &[lp(l, &[1, 1]).pow(l, 2)]));
    assert_eq!(&g.module, target.module());
    assert_eq!(
        localize_check(&g.module, &q),
        LocalInvariant::Free {
            rank: 1,
            valuations: vec![2]
        }
    );
}

#[test]
fn glue_rejects_bad_input() {
    let t = tower();
    let ambient = RModule::free(t.clone(), 2);
    let small = RModule::free(t.clone(), 1);
    let asg = vec![(MaximalIdealDesc::M0, LocalAssignment::Submodule(small))];
    assert!(matches!(
        glue_submodule(&ambient, &asg, 0),
        Err(RingError::RankMismatch { .. })
    ));
}

#[test]
fn genus_of_free() {
    let t = tower();
    let g = genus_of(&RModule::free(t.clone(), 3), 0).unwrap();
    assert_eq!(g.rank, RankClass::Finite(3));
    assert!(g.local.is_empty());
    assert!(g.free_elsewhere);
}

#[test]
fn realizability() {
    let finite = GenusDescriptor {
        rank: RankClass::Countable,
        local: Vec::new(),
        free_elsewhere: true,
        families: vec![SymbolicFamily {
            predicate: "q of degree 1".into(),
            count: CountClass::Finite(4),
            free_rank: FreeRankLaw::Constant(1),
        }],
    };
    assert!(genus_realizable(&finite).unwrap());
    let mut constant = finite.clone();
    constant.families[0].count = CountClass::Countable;
    assert!(!genus_realizable(&constant).unwrap());
    let mut growing = constant.clone();
    growing.families[0].free_rank = FreeRankLaw::Unbounded;
    assert!(genus_realizable(&growing).unwrap());
    let mut unc = finite.clone();
    unc.families[0].count = CountClass::Uncountable;
    assert!(!genus_realizable(&unc).unwrap());
    let mut unknown = constant.clone();
    unknown.families[0].free_rank = FreeRankLaw::Unknown;
    assert!(matches!(
        genus_realizable(&unknown),
        Err(RingError::UnrepresentableDescriptor(_))
    ));
}

#[test]
fn matching_decompositions() {
    let t = tower();
    let psi = psi_default(t.clone(), 2, 1).unwrap();
    let one = free_pair(t.clone(), 1).unwrap();
    let m =
        match_decompositions(&[psi.clone(), one.clone()], &[one.clone(), psi.clone()], 0).unwrap();
    let pairs: Vec<(Vec<usize>, Vec<usize>)> =
        m.iter().map(|b| (b.a.clone(), b.b.clone())).collect();
    assert_eq!(pairs, vec![(vec![0], vec![1]), (vec![1], vec![0])]);
    let same = match_decompositions(&[psi.clone()], &[psi.clone()], 0).unwrap();
    assert_eq!((same[0].a.clone(), same[0].b.clone()), (vec![0], vec![0]));
    let other = psi_default(t.clone(), 2, 2).unwrap();
    assert_eq!(
        match_decompositions(&[psi], &[other], 0).unwrap_err(),
        RingError::GenusMismatch
    );
}

#[test]
fn ideal_json_round_trip() {
    let t = tower();
    let l = t.as_ref();
    let i = ideal(&t, &[Poly::x(l).mul(l, &lp(l, &[1, 1]))]);
    let j = i.to_json();
    assert_eq!(j.e, 1);
    let s = serde_json::to_string(&j).unwrap();
    let back: IdealJson = serde_json::from_str(&s).unwrap();
    assert_eq!(IdealOfR::from_json(t.clone(), &back).unwrap(), i);
    let _ = Rational::zero();
}
