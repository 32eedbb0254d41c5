use grass::gen::Gen;
use grass::grass::{regularize_pair, IdempotentPair};
use grass::regular::*;
use grass::{IndexSet, Pos, Ring, Scalar, StructuredMatrix};

fn q() -> Ring {
    Ring::rationals()
}

fn all_hold(u: &RegularIdempotent) -> bool {
    u.core().identities().iter().all(|(_, ok)| *ok)
}

#[test]
fn assemble_round_trip() {
    let mut g = Gen::new(31);
    for _ in 0..20 {
        let p = g.pair(3, &q()).unwrap();
        let u = assemble(h_components(&p).unwrap()).unwrap();
        assert_eq!(u.matrix(), regularize_pair(&p).unwrap().b());
        assert!(all_hold(&u));
    }
    let d = IdempotentPair::diagonal(&g.idempotent(&IndexSet::range(2), &q()).unwrap());
    let c = h_components(&d).unwrap();
    assert!(c.h.iter().flatten().all(StructuredMatrix::is_zero));
    let one = h_components(&IdempotentPair::one(&q())).unwrap();
    assert_eq!(one.h[0][0].entry(Pos::point(0), Pos::point(0)), Scalar::int(1));
    assert!(one.h[0][1].is_zero() && one.h[1][0].is_zero() && one.h[1][1].is_zero());
}

#[test]
fn assemble_rejects_non_idempotent_cores() {
    let omega = IndexSet::range(1);
    let two = StructuredMatrix::scalar_identity(&omega, &q(), &Scalar::int(2));
    let z = StructuredMatrix::zero(&omega, &omega, &q());
    let core = CoreInfo { omega, h: [[two, z.clone()], [z.clone(), z]] };
    assert!(assemble(core).is_err());
}

#[test]
fn operations_are_coherent_with_regularization() {
    let mut g = Gen::new(32);
    for _ in 0..20 {
        let p = g.pair(2, &q()).unwrap();
        let s = g.pair(2, &q()).unwrap();
        let u = RegularIdempotent::of_pair(&p).unwrap();
        let v = RegularIdempotent::of_pair(&s).unwrap();
        let inv = u.inv().unwrap();
        assert_eq!(inv.matrix(), regularize_pair(&p.inv()).unwrap().b());
        let prime = u.prime().unwrap();
        assert_eq!(prime.matrix(), regularize_pair(&p.prime()).unwrap().b());
        assert!(u.prime_by_switches().unwrap().approx_eq(prime.matrix()));
        let tl = u.tensor_left(&v).unwrap();
        assert!(tl.matrix().approx_eq(regularize_pair(&p.tensor_left(&s).unwrap()).unwrap().b()));
        let tr = u.tensor_right(&v).unwrap();
        assert!(tr.matrix().approx_eq(regularize_pair(&p.tensor_right(&s).unwrap()).unwrap().b()));
        let sum = u.sum(&v).unwrap();
        assert!(sum.matrix().approx_eq(
            &regularize_pair(&p.sum(&s).unwrap()).unwrap().b().with_sets(sum.matrix().rows(), sum.matrix().rows()).unwrap()
        ));
        for x in [&inv, &prime, &tl, &tr, &sum] {
            assert!(all_hold(x));
        }
    }
    let d = IdempotentPair::diagonal(&g.idempotent(&IndexSet::range(2), &q()).unwrap());
    let u = RegularIdempotent::of_pair(&d).unwrap();
    assert_eq!(u.inv().unwrap().matrix(), IdempotentPair::r_zero(&IndexSet::range(2), &q()).a());
}

#[test]
fn dimension_bound_laws() {
    let mut g = Gen::new(33);
    let z = dim_upper(&IdempotentPair::zero_on(&IndexSet::range(3), &q())).unwrap();
    assert_eq!(z.dim, 0);
    z.check().unwrap();
    let one = dim_upper(&IdempotentPair::one(&q())).unwrap();
    assert_eq!(one.dim, 1);
    one.check().unwrap();
    for _ in 0..15 {
        let p = g.pair(3, &q()).unwrap();
        let s = g.pair(2, &q()).unwrap();
        let dp = dim_upper(&p).unwrap();
        dp.check().unwrap();
        let ds = dim_upper(&s).unwrap();
        if dp.dim == 0 {
            assert!(p.b().approx_eq(p.a()));
        }
        assert_eq!(dim_upper(&p.inv()).unwrap().dim, dp.dim);
        assert!(dim_upper(&p.sum(&s).unwrap()).unwrap().dim <= dp.dim + ds.dim);
        assert!(dim_upper(&p.tensor_left(&s).unwrap()).unwrap().dim <= dp.dim * ds.dim);
        let chi = p.chi().unwrap().as_rational().unwrap();
        assert_eq!(Scalar::int(dp.rank_chi().unwrap()), Scalar::Rat(chi.clone()));
        assert!(dp.rank_chi().unwrap().unsigned_abs() as usize <= dp.dim);
    }
}

#[test]
fn dimension_on_a_tail() {
    // ⟨e₁ + e₃, 0⟩ on ℕ: two base indices, certificate shifts the tail
    let n = IndexSet::tail_n("n");
    let mut b = StructuredMatrix::zero(&n, &n, &q());
    b.add_entry(Pos::new(0, 1), Pos::new(0, 1), Scalar::int(1)).unwrap();
    b.add_entry(Pos::new(0, 3), Pos::new(0, 3), Scalar::int(1)).unwrap();
    let p = IdempotentPair::new(b, StructuredMatrix::zero(&n, &n, &q())).unwrap();
    let c = dim_upper(&p).unwrap();
    assert_eq!(c.dim, 2);
    c.check().unwrap();
    let zt = IndexSet::tail_z("z");
    let mut bz = StructuredMatrix::zero(&zt, &zt, &q());
    bz.add_entry(Pos::new(0, 0), Pos::new(0, 0), Scalar::int(1)).unwrap();
    let pz = IdempotentPair::new(bz, StructuredMatrix::zero(&zt, &zt, &q())).unwrap();
    assert!(dim_upper(&pz).is_err());
}
