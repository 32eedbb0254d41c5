use grass::gen::Gen;
use grass::grass::*;
use grass::mat::dense;
use grass::shape::{Relabeling, TreeIso};
use grass::{IndexSet, Pos, Ring, Scalar, StructuredMatrix};

fn q() -> Ring {
    Ring::rationals()
}

fn m2() -> Ring {
    Ring::matrix(Ring::rationals(), 2).unwrap()
}

fn dense_of(m: &StructuredMatrix) -> dense::Dense {
    let pts = m.rows().points();
    m.window(&pts, &m.cols().points())
}

fn trace_oracle(p: &IdempotentPair) -> Scalar {
    let ring = p.ring();
    ring.scalar_trace(&dense::trace(&dense::sub(&dense_of(p.b()), &dense_of(p.a())), ring))
}

#[test]
fn chi_basic_values() {
    assert_eq!(IdempotentPair::one(&q()).chi().unwrap(), Scalar::int(1));
    assert_eq!(IdempotentPair::zero_on(&IndexSet::range(3), &q()).chi().unwrap(), Scalar::int(0));
}

#[test]
fn chi_is_additive_negated_and_multiplicative() {
    let mut g = Gen::new(7);
    for _ in 0..20 {
        let p = g.pair(4, &q()).unwrap();
        let r = g.pair(3, &q()).unwrap();
        let s = g.pair(3, &q()).unwrap();
        assert_eq!(p.chi().unwrap(), trace_oracle(&p));
        let sum = p.sum(&r).unwrap();
        assert_eq!(sum.chi().unwrap(), trace_oracle(&p).add(&trace_oracle(&r)));
        assert_eq!(p.inv().chi().unwrap(), trace_oracle(&p).neg());
        let t = r.tensor_left(&s).unwrap();
        assert_eq!(t.chi().unwrap(), trace_oracle(&r).mul(&trace_oracle(&s)));
        assert_eq!(r.tensor_right(&s).unwrap().chi().unwrap(), t.chi().unwrap());
        t.validate().unwrap();
    }
}

#[test]
fn involutions_of_pairs() {
    let mut g = Gen::new(8);
    let p = g.pair(3, &q()).unwrap();
    assert!(p.inv().inv().approx_eq(&p));
    assert!(p.prime().prime().approx_eq(&p));
    assert!(p.inv_prime().inv_prime().approx_eq(&p));
    let d = IdempotentPair::diagonal(p.a());
    assert!(d.prime().approx_eq(&IdempotentPair::diagonal(&bar(p.a()))));
}

#[test]
fn sum_neutral_and_pads() {
    let mut g = Gen::new(9);
    let p = g.pair(3, &q()).unwrap();
    let s = p.sum(&IdempotentPair::empty(&q())).unwrap();
    let r = Relabeling::tree(s.space(), TreeIso::DropEmptyR).unwrap();
    assert_eq!(s.b().transport(&r).unwrap(), p.b().with_sets(r.target(), r.target()).unwrap());
    let xi = IndexSet::range(2);
    let z = IdempotentPair::zero_on(&xi, &q()).sum(&IdempotentPair::one_on(&xi, &q())).unwrap();
    assert_eq!(z.b(), z.a());
    assert!(z.b().approx_eq(&block_diag(&[&StructuredMatrix::zero(&xi, &xi, &q()), &StructuredMatrix::identity(&xi, &q())]).unwrap()));
}

#[test]
fn tensor_with_unit_and_commutation() {
    let mut g = Gen::new(10);
    let p = g.pair(3, &q()).unwrap();
    let one = IdempotentPair::one(&q());
    let t = p.tensor_left(&one).unwrap();
    let r = Relabeling::tree(t.space(), TreeIso::DropUnitR).unwrap();
    assert!(t.b().transport(&r).unwrap().approx_eq(&p.b().with_sets(r.target(), r.target()).unwrap()));
    assert!(t.a().transport(&r).unwrap().approx_eq(&p.a().with_sets(r.target(), r.target()).unwrap()));

    let s = g.pair(2, &q()).unwrap();
    let left = p.tensor_left(&s).unwrap();
    let right = s.tensor_right(&p).unwrap();
    let swap = Relabeling::tree(right.space(), TreeIso::ProdSwap).unwrap();
    assert!(right.b().transport(&swap).unwrap().approx_eq(left.b()));
    assert!(right.a().transport(&swap).unwrap().approx_eq(left.a()));
}

#[test]
fn switch_degenerations_and_involution() {
    let omega = IndexSet::range(2);
    let zero = StructuredMatrix::zero(&omega, &omega, &q());
    let one = StructuredMatrix::identity(&omega, &q());
    let s0 = sw(3, 0, 2, &zero).unwrap();
    assert!(s0.approx_eq(&StructuredMatrix::identity(s0.rows(), &q())));
    let s1 = sw(2, 0, 1, &one).unwrap();
    assert_eq!(s1.entry(Pos::point(0), Pos::point(2)), Scalar::int(1));
    assert_eq!(s1.entry(Pos::point(0), Pos::point(0)), Scalar::int(0));
    let mut g = Gen::new(11);
    for ring in [q(), m2()] {
        let a = g.idempotent(&IndexSet::range(3), &ring).unwrap();
        let s = sw(3, 0, 2, &a).unwrap();
        assert!(s.mul(&s).unwrap().approx_eq(&StructuredMatrix::identity(s.rows(), &ring)));
    }
}

#[test]
fn regularization_values() {
    let mut g = Gen::new(12);
    let p = g.pair(3, &q()).unwrap();
    let d = IdempotentPair::diagonal(p.a());
    let rd = regularize_pair(&d).unwrap();
    assert_eq!(rd.b(), rd.a());
    let r = regularize_pair(&p).unwrap();
    r.validate().unwrap();
    // block (0,0) is ā(b−a)ā
    let omega = p.space();
    let abar = bar(p.a());
    let corner = abar.mul(&p.b().sub(p.a()).unwrap()).unwrap().mul(&abar).unwrap();
    assert!(r.b().grid_block(omega, 0, 0).unwrap().approx_eq(&corner));
    // ⟨1, 0⟩ on a point regularizes to the 2×2 identity
    let r1 = regularize_pair(&IdempotentPair::one(&q())).unwrap();
    assert!(r1.b().approx_eq(&StructuredMatrix::identity(r1.space(), &q())));
    assert!(regularize_witness(&p).unwrap().verify());
}

#[test]
fn regularized_morphisms() {
    let mut g = Gen::new(13);
    for _ in 0..10 {
        let p = g.pair(3, &q()).unwrap();
        let m = g.morphism(p.space(), &q()).unwrap();
        let rm = regularize_morphism(&m, p.a()).unwrap();
        rm.validate().unwrap();
        let lhs = rm.apply(&regularize_pair(&p).unwrap()).unwrap();
        let rhs = regularize_pair(&m.apply(&p).unwrap()).unwrap();
        assert!(lhs.approx_eq(&rhs));
        let uni = Morphism::uniform(m.phi.clone(), m.phi_inv.clone());
        let ru = regularize_morphism(&uni, p.a()).unwrap();
        assert!(ru.psi.approx_eq(&block_diag(&[&m.phi, &m.phi]).unwrap()));
    }
    let p = g.pair(2, &q()).unwrap();
    let id = Morphism::identity(p.space(), &q());
    let r = regularize_morphism(&id, p.a()).unwrap();
    assert!(r.psi.approx_eq(&StructuredMatrix::identity(r.psi.rows(), &q())));
}

#[test]
fn translations() {
    let mut g = Gen::new(14);
    for ring in [q(), m2()] {
        let p = g.pair(3, &ring).unwrap();
        let omega = p.space();
        let abar = bar(p.a());
        let h = translation_h(&p).unwrap();
        h.validate().unwrap();
        let src = IdempotentPair::new_unchecked(
            StructuredMatrix::direct_sum_all(&[p.a(), &abar, p.b()]).unwrap(),
            StructuredMatrix::direct_sum_all(&[p.a(), &abar, p.a()]).unwrap(),
        )
        .unwrap();
        let dst = IdempotentPair::new_unchecked(
            StructuredMatrix::direct_sum_all(&[p.b(), &abar, p.a()]).unwrap(),
            StructuredMatrix::direct_sum_all(&[p.a(), &abar, p.a()]).unwrap(),
        )
        .unwrap();
        assert!(h.apply(&src).unwrap().approx_eq(&dst));

        let hr = translation_hr(&p).unwrap();
        hr.validate().unwrap();
        let r0 = IdempotentPair::r_zero(omega, &ring);
        let rp = regularize_pair(&p).unwrap();
        let src = IdempotentPair::sum_all(&[&r0, &r0, &rp]).unwrap();
        let dst = IdempotentPair::sum_all(&[&rp, &r0, &r0]).unwrap();
        assert!(hr.apply(&src).unwrap().approx_eq(&dst));

        let d = IdempotentPair::diagonal(p.a());
        let hd = translation_h(&d).unwrap();
        assert!(hd.psi.approx_eq(&StructuredMatrix::identity(hd.psi.rows(), &ring)));
        let hrd = translation_hr(&d).unwrap();
        assert!(hrd.psi.approx_eq(&StructuredMatrix::identity(hrd.psi.rows(), &ring)));
    }
}

#[test]
fn taming() {
    let mut g = Gen::new(15);
    for ring in [q(), m2()] {
        let omega = IndexSet::range(3);
        let (a, phi, phi_inv) = g.idempotent_with_commutant(&omega, &ring).unwrap();
        let b = g.idempotent(&omega, &ring).unwrap();
        let p = IdempotentPair::new(b, a).unwrap();
        let (psi, psi_inv) = g.unit(&omega, &ring).unwrap();
        let m = Morphism::new(psi, psi_inv, phi, phi_inv);
        let w = stable_taming_witness(&m, &p).unwrap();
        w.check().unwrap();

        let t = tame_t(&m, &p).unwrap();
        t.validate().unwrap();
        let abar = bar(p.a());
        let src = IdempotentPair::new_unchecked(
            StructuredMatrix::direct_sum_all(&[p.b(), &abar, p.a()]).unwrap(),
            StructuredMatrix::direct_sum_all(&[p.a(), &abar, p.a()]).unwrap(),
        )
        .unwrap();
        let image = t.apply(&src).unwrap();
        let bpsi = m.apply(&p).unwrap();
        assert!(image.b().approx_eq(&StructuredMatrix::direct_sum_all(&[bpsi.b(), &abar, p.a()]).unwrap()));

        // no commutation needed after regularization
        let p2 = g.pair(3, &ring).unwrap();
        let m2 = g.morphism(p2.space(), &ring).unwrap();
        let tr = tame_tr(&m2, &p2).unwrap();
        tr.validate().unwrap();
        let r0 = IdempotentPair::r_zero(p2.space(), &ring);
        let src = IdempotentPair::sum_all(&[&regularize_pair(&p2).unwrap(), &r0, &r0]).unwrap();
        let dst = IdempotentPair::sum_all(&[&regularize_pair(&m2.apply(&p2).unwrap()).unwrap(), &r0, &r0]).unwrap();
        assert!(tr.apply(&src).unwrap().approx_eq(&dst));
    }
    // ⟨φ, φ⟩ on ⟨a, a⟩ tames to the identity
    let omega = IndexSet::range(2);
    let (a, phi, phi_inv) = g.idempotent_with_commutant(&omega, &q()).unwrap();
    let t = tame_t(&Morphism::uniform(phi, phi_inv), &IdempotentPair::diagonal(&a)).unwrap();
    assert!(t.psi.approx_eq(&StructuredMatrix::identity(t.psi.rows(), &q())));
}

#[test]
fn virtual_cancellation() {
    let mut g = Gen::new(16);
    let omega = IndexSet::range(2);
    let mut cases = vec![StructuredMatrix::zero(&omega, &omega, &q()), StructuredMatrix::identity(&omega, &q())];
    for _ in 0..5 {
        cases.push(g.idempotent(&omega, &q()).unwrap());
    }
    for a in cases {
        let b = cancel_b(&a).unwrap();
        b.validate().unwrap();
        assert!(cancellation_step_check(&a, 6).unwrap());
    }
}

#[test]
fn commutativity_conjugator() {
    let mut g = Gen::new(17);
    for _ in 0..5 {
        let p = g.pair(2, &q()).unwrap();
        let s = g.pair(2, &q()).unwrap();
        let c = comm_c(&p, &s).unwrap();
        c.validate().unwrap();
        let prod = IndexSet::product(p.space(), s.space()).unwrap();
        let r0 = IdempotentPair::r_zero(&prod, &q());
        let src = regularize_pair(&p.tensor_left(&s).unwrap()).unwrap().sum(&r0).unwrap();
        let dst = regularize_pair(&p.tensor_right(&s).unwrap()).unwrap().sum(&r0).unwrap();
        assert!(c.apply(&src).unwrap().approx_eq(&dst));
    }
    let p = g.pair(2, &q()).unwrap();
    let s = g.pair(2, &q()).unwrap();
    let c = comm_c(&IdempotentPair::diagonal(p.a()), &IdempotentPair::diagonal(s.a())).unwrap();
    assert!(c.psi.approx_eq(&c.phi));
    let one = IdempotentPair::one(&q());
    let c1 = comm_c(&one, &one).unwrap();
    c1.validate().unwrap();
    assert!(comm_c(&g.pair(1, &m2()).unwrap(), &g.pair(1, &m2()).unwrap()).is_err());
}

#[test]
fn additive_inverse_and_variant() {
    let mut g = Gen::new(18);
    for ring in [q(), m2()] {
        for n in [1, 4] {
            let p = g.pair(n, &ring).unwrap();
            let w = additive_inverse_witness(&p).unwrap();
            w.check().unwrap();
            assert!(ring.trace_ring().is_zero(&w.lhs.chi().unwrap()));
            inv_prime_witness(&p).unwrap().check().unwrap();
        }
    }
    let w = additive_inverse_witness(&IdempotentPair::one(&q())).unwrap();
    w.check().unwrap();
    let z = IdempotentPair::zero_on(&IndexSet::range(2), &q());
    let wz = additive_inverse_witness(&z).unwrap();
    assert!(wz.conjugator.psi.approx_eq(&StructuredMatrix::identity(wz.conjugator.psi.rows(), &q())));
}

#[test]
fn product_compatibility() {
    let mut g = Gen::new(19);
    let p = g.pair(2, &q()).unwrap();
    assert!(product_stabilization_check(&p, &IndexSet::range(2), &IndexSet::range(1)).unwrap());
    let s = g.pair(2, &q()).unwrap();
    let m = g.morphism(s.space(), &q()).unwrap();
    product_conjugation_witness(&p, &s, &m).unwrap().check().unwrap();
}

#[test]
fn difference_chain() {
    let mut g = Gen::new(20);
    let omega = IndexSet::range(3);
    for ring in [q(), m2()] {
        let b = g.idempotent(&omega, &ring).unwrap();
        let bp = g.idempotent(&omega, &ring).unwrap();
        let a = g.idempotent(&omega, &ring).unwrap();
        let steps = diff_decomposition(&b, &bp, &a).unwrap();
        verify_chain(&steps).unwrap();
        let last = steps.last().unwrap();
        let expect = IdempotentPair::new(b.clone(), a.clone())
            .unwrap()
            .sum(&IdempotentPair::new(bp.clone(), a.clone()).unwrap().inv())
            .unwrap();
        assert!(last.rhs.approx_eq(&expect));
        let composed = steps.iter().skip(1).try_fold(steps[0].clone(), |acc, w| acc.then(w)).unwrap();
        composed.check().unwrap();
        assert!(ring.trace_ring().approx_eq(&composed.lhs.chi().unwrap(), &composed.rhs.chi().unwrap()));
    }
    let a = g.idempotent(&omega, &q()).unwrap();
    let b = g.idempotent(&omega, &q()).unwrap();
    verify_chain(&diff_decomposition(&b, &b, &a).unwrap()).unwrap();
    verify_chain(&diff_decomposition(&b, &a, &a).unwrap()).unwrap();
}

#[test]
fn witness_json_round_trip() {
    let mut g = Gen::new(21);
    let p = g.pair(2, &q()).unwrap();
    let w = regularize_witness(&p).unwrap();
    let back = HomotopyWitness::from_json(&w.to_json()).unwrap();
    assert!(back.verify());
    let pb = IdempotentPair::from_json(&p.to_json()).unwrap();
    assert!(pb.approx_eq(&p));
}

#[test]
fn single_space_operations() {
    let mut g = Gen::new(22);
    let z = SingleSpace::zero(&q());
    assert_eq!(z.add(&z).unwrap(), z);
    let one = SingleSpace::one(&q());
    assert_eq!(one.chi().unwrap(), Scalar::int(1));
    for _ in 0..10 {
        let x = g.single_space(3).unwrap();
        let y = g.single_space(2).unwrap();
        x.pair().validate().unwrap();
        let s = x.add(&y).unwrap();
        s.pair().validate().unwrap();
        assert_eq!(s.chi().unwrap(), x.chi().unwrap().add(&y.chi().unwrap()));
        let n = x.neg().unwrap();
        n.pair().validate().unwrap();
        assert_eq!(n.chi().unwrap(), x.chi().unwrap().neg());
        let m = x.mul(&y).unwrap();
        m.pair().validate().unwrap();
        assert_eq!(m.chi().unwrap(), x.chi().unwrap().mul(&y.chi().unwrap()));
        assert_eq!(SingleSpace::from_pair(&x.pair()).unwrap(), x);
    }
}

#[test]
fn witnesses_reject_wrong_data() {
    let mut g = Gen::new(23);
    let p = loop {
        let p = g.pair(3, &q()).unwrap();
        if !p.b().approx_eq(p.a()) {
            break p;
        }
    };
    let mut w = additive_inverse_witness(&p).unwrap();
    w.pads_rhs.reverse();
    assert!(!w.verify());
    let mut r = regularize_witness(&p).unwrap();
    r.rhs = regularize_pair(&p.inv()).unwrap();
    assert!(!r.verify());
    // the switch conjugator in the other order does not produce the variant
    let sb = sw(2, 0, 1, p.b()).unwrap();
    let sa = sw(2, 0, 1, p.a()).unwrap();
    let mut v = inv_prime_witness(&p).unwrap();
    v.conjugator = Morphism::leading(sa.mul(&sb).unwrap(), sb.mul(&sa).unwrap());
    assert!(!v.verify());
}
