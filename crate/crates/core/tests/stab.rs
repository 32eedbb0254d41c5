use grass::gen::Gen;
use grass::grass::SingleSpace;
use grass::mat::dense;
use grass::shape::Relabeling;
use grass::stab::*;
use grass::{IndexSet, Pos, Ring, Scalar, StructuredMatrix, TrigPoly};

fn n() -> IndexSet {
    IndexSet::tail_n("n")
}

fn at(i: i64) -> Pos {
    Pos::new(0, i)
}

fn trig(p: TrigPoly) -> Scalar {
    Scalar::Trig(p)
}

fn s() -> TrigPoly {
    TrigPoly::s()
}

fn t() -> TrigPoly {
    TrigPoly::t()
}

/// A random rational matrix supported on `{0..size}²` inside ℕ, moved into `ring`.
fn random_k(g: &mut Gen, size: i64, ring: &Ring) -> StructuredMatrix {
    let mut k = StructuredMatrix::zero(&n(), &n(), ring);
    for r in 0..size {
        for c in 0..size {
            let v = g.small_int();
            if v != 0 {
                k.add_entry(at(r), at(c), ring.from_i64(v)).unwrap();
            }
        }
    }
    k
}

fn pythagorean(a: i64, b: i64, c: i64) -> TrigAngle {
    let q = Ring::rationals();
    TrigAngle::new(&q, Scalar::rat(a, c), Scalar::rat(b, c)).unwrap()
}

#[test]
fn angle_relation_is_enforced() {
    assert!(TrigAngle::new(&Ring::rationals(), Scalar::rat(1, 2), Scalar::rat(1, 2)).is_err());
    pythagorean(3, 4, 5);
}

#[test]
fn cstab_columns_follow_the_display() {
    let c = cstab(&TrigAngle::symbolic());
    assert_eq!(c.entry(at(0), at(0)), trig(s()));
    assert_eq!(c.entry(at(1), at(0)), trig(t().neg()));
    // column 3: t³s, t²s², ts², s², −t
    assert_eq!(c.entry(at(0), at(3)), trig(t().mul(&t()).mul(&t()).mul(&s())));
    assert_eq!(c.entry(at(1), at(3)), trig(t().mul(&t()).mul(&s()).mul(&s())));
    assert_eq!(c.entry(at(2), at(3)), trig(t().mul(&s()).mul(&s())));
    assert_eq!(c.entry(at(3), at(3)), trig(s().mul(&s())));
    assert_eq!(c.entry(at(4), at(3)), trig(t().neg()));
    assert_eq!(c.entry(at(5), at(3)), trig(TrigPoly::zero()));
}

#[test]
fn cstab_is_an_isometry_on_a_window() {
    let ring = Ring::trig();
    let c = cstab(&TrigAngle::symbolic());
    let cols: Vec<Pos> = (0..40).map(at).collect();
    let rows: Vec<Pos> = (0..41).map(at).collect();
    let w: Vec<Vec<Scalar>> = rows.iter().map(|&r| cols.iter().map(|&k| c.entry(r, k)).collect()).collect();
    let wt: Vec<Vec<Scalar>> = (0..40).map(|j| (0..41).map(|i| w[i][j].clone()).collect()).collect();
    assert_eq!(dense::mul(&wt, &w, &ring), dense::identity(40, &ring));
    assert_eq!(c.gram_window(&cols), dense::identity(40, &ring));
}

#[test]
fn cstab_endpoints() {
    let q = Ring::rationals();
    let mut g = Gen::new(41);
    let k = random_k(&mut g, 4, &q);
    assert_eq!(cstab(&TrigAngle::zero(&q)).sandwich(&k).unwrap(), k);
    let right = cstab(&TrigAngle::right(&q));
    for (r, c) in [(0, 0), (2, 5), (7, 1)] {
        let mut e = StructuredMatrix::zero(&n(), &n(), &q);
        e.add_entry(at(r), at(c), q.one()).unwrap();
        let mut shifted = StructuredMatrix::zero(&n(), &n(), &q);
        shifted.add_entry(at(r + 1), at(c + 1), q.one()).unwrap();
        assert_eq!(right.sandwich(&e).unwrap(), shifted);
    }
}

#[test]
fn sandwich_is_multiplicative() {
    let ring = Ring::trig();
    let c = cstab(&TrigAngle::symbolic());
    let mut g = Gen::new(42);
    for _ in 0..100 {
        let size = g.range(1, 4) as i64;
        let k = random_k(&mut g, size, &ring);
        let l = random_k(&mut g, size, &ring);
        let lhs = c.sandwich(&k.mul(&l).unwrap()).unwrap();
        let rhs = c.sandwich(&k).unwrap().mul(&c.sandwich(&l).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn worked_wedge_example() {
    let ring = Ring::trig();
    let c = cstab(&TrigAngle::symbolic());
    let w = qu1_apply(&c, &WedgeVector::basis(&ring, &[0, 1]).unwrap()).unwrap();
    assert_eq!(w.terms().len(), 3);
    assert_eq!(w.coeff(&[0, 1]), trig(s()));
    assert_eq!(w.coeff(&[0, 2]), trig(s().mul(&t()).neg()));
    assert_eq!(w.coeff(&[1, 2]), trig(t().mul(&t())));
    let v = v_map(&w);
    let expected: Vec<(u64, Scalar)> =
        vec![(3, trig(s())), (5, trig(s().mul(&t()).neg())), (6, trig(t().mul(&t())))];
    assert_eq!(v.into_iter().collect::<Vec<_>>(), expected);
    let col = hv_operator(&TrigAngle::symbolic()).column(at(3));
    assert_eq!(col, expected.iter().map(|(m, x)| (at(*m as i64), x.clone())).collect::<Vec<_>>());
}

#[test]
fn qu1_identity_angle_and_functoriality() {
    let q = Ring::rationals();
    let id = cstab(&TrigAngle::zero(&q));
    let a = cstab(&pythagorean(3, 4, 5));
    let b = cstab(&pythagorean(5, 12, 13));
    let ab = a.compose(&b).unwrap();
    let mut wedges = vec![vec![]];
    for i in 0..8u64 {
        wedges.push(vec![i]);
        for j in i + 1..8 {
            wedges.push(vec![i, j]);
            for k in j + 1..8 {
                wedges.push(vec![i, j, k]);
            }
        }
    }
    for idx in wedges {
        let w = WedgeVector::basis(&q, &idx).unwrap();
        assert_eq!(qu1_apply(&id, &w).unwrap(), w);
        let two_steps = qu1_apply(&a, &qu1_apply(&b, &w).unwrap()).unwrap();
        assert_eq!(two_steps, qu1_apply(&ab, &w).unwrap());
    }
}

#[test]
fn v_is_injective_on_supports() {
    let q = Ring::rationals();
    let mut seen = std::collections::BTreeSet::new();
    for mask in 0u64..1024 {
        let idx = v_inverse(mask);
        let w = WedgeVector::basis(&q, &idx).unwrap();
        let image: Vec<u64> = v_map(&w).keys().copied().collect();
        assert_eq!(image, vec![mask]);
        assert!(seen.insert(image[0]));
    }
    let mut w = WedgeVector::zero(&q);
    w.add_term(&[2, 0], q.one());
    assert_eq!(w.coeff(&[0, 2]), Scalar::int(-1));
    w.add_term(&[1, 1], q.one());
    assert_eq!(w.terms().len(), 1);
}

#[test]
fn hv_endpoint_relabels_by_doubling() {
    let q = Ring::rationals();
    let op = hv_operator(&TrigAngle::right(&q).reflect());
    for m in 0..32 {
        assert_eq!(op.column(at(m)), vec![(at(2 * m), q.one())]);
    }
    // the unreflected angle adds the signs (−1)^popcount
    let signed = hv_operator(&TrigAngle::right(&q));
    for m in 0..32i64 {
        let sign = if m.count_ones() % 2 == 0 { 1 } else { -1 };
        assert_eq!(signed.column(at(m)), vec![(at(2 * m), Scalar::int(sign))]);
    }
    let mut g = Gen::new(43);
    let k = random_k(&mut g, 4, &q);
    let doubled = hv_conjugation(&k).unwrap();
    assert_eq!(op.sandwich(&k).unwrap(), doubled);
    // in the split view ĥv is the inclusion into the even copy
    let embed = Relabeling::tail_embed("n", 2, 0).unwrap();
    let hv = StructuredMatrix::relabel_matrix(&embed, &q).unwrap();
    assert_eq!(hv.transpose().mul(&hv).unwrap(), StructuredMatrix::identity(&n(), &q));
    assert_eq!(hv.entry(Pos::new(0, 3), at(3)), q.one());
    assert_eq!(hv.entry(Pos::new(1, 3), at(3)), q.zero());
}

#[test]
fn stabilization_endpoints_are_exact() {
    let mut g = Gen::new(44);
    let zero = SingleSpace::zero(&Ring::rationals());
    let (e0, _) = stabilize_idempotent(&zero).unwrap();
    assert_eq!(e0, zero);
    for _ in 0..10 {
        let b = g.single_space(3).unwrap();
        let (end, h) = stabilize_idempotent(&b).unwrap();
        for ring in [Ring::rationals(), Ring::trig()] {
            let lift = |m: &StructuredMatrix| {
                m.map_scalars(&ring, |x| ring.from_rational(&x.as_rational().unwrap())).unwrap()
            };
            assert_eq!(h.value(&TrigAngle::zero(&ring)).unwrap(), lift(b.pair().b()));
            assert_eq!(h.value(&TrigAngle::right(&ring)).unwrap(), lift(end.pair().b()));
        }
        // corners sit on the even labels, the odd labels carry 𝐑𝟎
        for (r, c) in end.core().finite().keys() {
            assert!(r.at % 2 == 0 && c.at % 2 == 0);
        }
        assert_eq!(end.chi().unwrap(), b.chi().unwrap());
        let sym = h.value(&TrigAngle::symbolic()).unwrap();
        assert_eq!(sym.mul(&sym).unwrap(), sym);
        for theta in [0.3, 0.7, 1.2] {
            let v = h.value(&TrigAngle::float(theta)).unwrap();
            assert!(v.mul(&v).unwrap().approx_eq(&v));
        }
    }
}

#[test]
fn make_room_rotation() {
    let ring = Ring::trig();
    let alpha = TrigAngle::symbolic();
    let m = room_rotation(&n(), &alpha).unwrap();
    let m_inv = room_rotation(&n(), &alpha.reflect()).unwrap();
    let three = IndexSet::blocks(3, &n());
    let prod = m.mul(&m_inv).unwrap();
    assert_eq!(prod, StructuredMatrix::identity(&three, &ring));
    let pts: Vec<Pos> = (0..3).flat_map(|b| (0..8).map(move |i| Pos::new(b, i))).collect();
    assert_eq!(pts.len(), 24);
    assert_eq!(prod.window(&pts, &pts), dense::identity(24, &ring));

    let q = Ring::rationals();
    let one = StructuredMatrix::identity(&n(), &q);
    let trivial = make_room(&one, &one, &alpha).unwrap();
    assert_eq!(trivial.psi, StructuredMatrix::identity(&three, &ring));

    let mut g = Gen::new(45);
    let (u, u_inv) = g.unit(&IndexSet::range(3), &q).unwrap();
    let embed = |x: &StructuredMatrix| {
        let mut out = one.clone();
        for i in 0..3 {
            for j in 0..3 {
                let v = x.entry(Pos::point(i), Pos::point(j));
                let cur = out.entry(at(i as i64), at(j as i64));
                out.add_entry(at(i as i64), at(j as i64), v.sub(&cur)).unwrap();
            }
        }
        out
    };
    let (phi, phi_inv) = (embed(&u), embed(&u_inv));
    let pad = |a: &StructuredMatrix, b: &StructuredMatrix, c: &StructuredMatrix| {
        StructuredMatrix::direct_sum_all(&[a, b, c]).unwrap().with_sets(&three, &three).unwrap()
    };
    let start = make_room(&phi, &phi_inv, &TrigAngle::zero(&q)).unwrap();
    assert_eq!(start.psi, pad(&phi, &one, &one));
    let end = make_room(&phi, &phi_inv, &TrigAngle::right(&q)).unwrap();
    assert_eq!(end.psi, pad(&one, &phi, &one));
    // the endpoint moves the conjugation by φ from the first copy to the second
    let b = embed(&g.idempotent(&IndexSet::range(3), &q).unwrap());
    let lhs = StructuredMatrix::product(&[&end.psi, &pad(&b, &b, &one), &end.psi_inv]).unwrap();
    let b_phi = StructuredMatrix::product(&[&phi, &b, &phi_inv]).unwrap();
    assert_eq!(lhs, pad(&b, &b_phi, &one));
    let sym = make_room(&phi, &phi_inv, &alpha).unwrap();
    assert_eq!(sym.psi.mul(&sym.psi_inv).unwrap(), StructuredMatrix::identity(&three, &ring));
    assert!(make_room(&phi, &one, &alpha).is_err());
}
