use grass::fred::*;
use grass::gen::Gen;
use grass::grass::{bar, verify_chain, IdempotentPair};
use grass::mat::dense::{self, Dense};
use grass::{Error, IndexSet, Pos, Ring, Scalar, StructuredMatrix};

type M = StructuredMatrix;

fn q() -> Ring {
    Ring::rationals()
}

fn chi(p: &IdempotentPair) -> i64 {
    chi_integer(&p.chi().unwrap()).unwrap()
}

fn rect(g: &mut Gen, rows: usize, cols: usize) -> M {
    let table: Vec<Vec<Scalar>> =
        (0..rows).map(|_| (0..cols).map(|_| Scalar::int(g.small_int())).collect()).collect();
    M::from_dense(&IndexSet::range(rows), &IndexSet::range(cols), &q(), &table).unwrap()
}

fn random_connector(g: &mut Gen, n: usize) -> Connector {
    let omega = IndexSet::range(n);
    let a = g.idempotent(&omega, &q()).unwrap();
    let (xi, xi_inv) = g.unit(&omega, &q()).unwrap();
    Connector::new(xi, xi_inv, a).unwrap()
}

/// A random connector `[ξ, a⟩` on `range(2k)` with `ξ` an involution and
/// `ξa = āξ`: `g·[[0, u], [u⁻¹, 0]]·g⁻¹` with base `g·(1 ⊕ 0)·g⁻¹`.
fn anticommuting(g: &mut Gen, k: usize) -> (M, M, M) {
    let n = 2 * k;
    let (u, u_inv) = g.unit_dense(k);
    let (c, c_inv) = g.unit_dense(n);
    let qq = q();
    let mut x: Dense = dense::zeros(n, n, &qq);
    let mut x_inv: Dense = dense::zeros(n, n, &qq);
    let mut base: Dense = dense::zeros(n, n, &qq);
    for i in 0..k {
        base[i][i] = qq.one();
        for j in 0..k {
            x[i][k + j] = u[i][j].clone();
            x[k + i][j] = u_inv[i][j].clone();
            x_inv[i][k + j] = u[i][j].clone();
            x_inv[k + i][j] = u_inv[i][j].clone();
        }
    }
    let conj = |m: &Dense| dense::mul(&dense::mul(&c, m, &qq), &c_inv, &qq);
    let omega = IndexSet::range(n);
    let pack = |m: &Dense| M::from_dense(&omega, &omega, &qq, m).unwrap();
    (pack(&conj(&x)), pack(&conj(&x_inv)), pack(&conj(&base)))
}

#[test]
fn connector_index_basics() {
    let mut g = Gen::new(91);
    // ξ ā ξ⁻¹ = a exactly: χ = 0
    let omega = IndexSet::range(2);
    let a = M::from_dense(&omega, &omega, &q(), &[vec![Scalar::int(1), Scalar::int(0)], vec![Scalar::int(0), Scalar::int(0)]])
        .unwrap();
    let flip = M::from_dense(&omega, &omega, &q(), &[vec![Scalar::int(0), Scalar::int(1)], vec![Scalar::int(1), Scalar::int(0)]])
        .unwrap();
    let c = Connector::involution(flip, a.clone()).unwrap();
    let ind = index_of(&c).unwrap();
    assert_eq!(ind.b(), &a);
    assert_eq!(chi(&ind), 0);
    for _ in 0..30 {
        let n1 = g.range(1, 3);
        let n2 = g.range(1, 3);
        let c1 = random_connector(&mut g, n1);
        let c2 = random_connector(&mut g, n2);
        let (i1, i2) = (c1.index().unwrap(), c2.index().unwrap());
        // on a finite set χ(⟨ξāξ⁻¹, a⟩) = rank ā − rank a
        let rank = |x: &M| dense::rank(&x.window(&x.rows().points(), &x.cols().points()), &q()).unwrap() as i64;
        assert_eq!(chi(&i1), rank(&bar(&c1.a)) - rank(&c1.a));
        assert_eq!(chi(&c1.sum(&c2).unwrap().index().unwrap()), chi(&i1) + chi(&i2));
        assert_eq!(chi(&c1.inv().index().unwrap()), -chi(&i1));
        assert_eq!(c1.inv().inv(), c1);
        let tw = c1.tensor_witness(&c2).unwrap();
        tw.check().unwrap();
        assert_eq!(chi(&tw.lhs), chi(&i1) * chi(&i2));
    }
}

#[test]
fn tensor_of_involutive_connectors() {
    let mut g = Gen::new(92);
    for _ in 0..10 {
        let (x1, _, a1) = anticommuting(&mut g, 2);
        let (x2, _, a2) = anticommuting(&mut g, 1);
        let c1 = Connector::involution(x1, a1).unwrap();
        let c2 = Connector::involution(x2, a2).unwrap();
        let t = c1.tensor_left(&c2).unwrap();
        let one = M::identity(t.xi.rows(), &q());
        assert_eq!(t.xi.mul(&t.xi).unwrap(), one);
        assert_eq!(t.xi, t.xi_inv);
        c1.tensor_witness(&c2).unwrap().check().unwrap();
    }
}

#[test]
fn perturbation_and_base_change_witnesses() {
    let mut g = Gen::new(93);
    for _ in 0..20 {
        let n = g.range(1, 3);
        let omega = IndexSet::range(n);
        let a = g.idempotent(&omega, &q()).unwrap();
        let (x1, x1_inv) = g.unit(&omega, &q()).unwrap();
        let (x2, x2_inv) = g.unit(&omega, &q()).unwrap();
        let c1 = Connector::new(x1.clone(), x1_inv.clone(), a.clone()).unwrap();
        let c2 = Connector::new(x2, x2_inv, a.clone()).unwrap();
        perturbation_witness(&c1, &c2).unwrap().check().unwrap();
        let a2 = g.idempotent(&omega, &q()).unwrap();
        let steps = base_change_steps(&x1, &x1_inv, &a, &a2).unwrap();
        verify_chain(&steps).unwrap();
        // ⟨ξ²aξ⁻², a⟩ ≃ ⟨a, a⟩
        let sq = x1.mul(&x1).unwrap();
        let sq_inv = x1_inv.mul(&x1_inv).unwrap();
        let w = conjugate_pair_witness(&sq, &sq_inv, &a).unwrap();
        w.check().unwrap();
        assert_eq!(chi(&w.lhs), 0);
    }
}

#[test]
fn tilde_correction_on_dense_instances() {
    let mut g = Gen::new(94);
    for _ in 0..20 {
        let k = g.range(1, 2);
        let (xi, xi_inv, a) = anticommuting(&mut g, k);
        // an arbitrary parametrix: every matrix on a finite set is ≈ any other
        let eta = if g.range(0, 1) == 0 { xi_inv.clone() } else { rect(&mut g, 2 * k, 2 * k) };
        let t = tilde_correction(&xi, &eta, &a).unwrap();
        let one = M::identity(a.rows(), &q());
        assert_eq!(t.mul(&t).unwrap(), one);
        let c = Connector::involution(t, a.clone()).unwrap();
        let w = tilde_witness(&xi, &xi_inv, &eta, &a).unwrap();
        w.check().unwrap();
        assert!(w.lhs.approx_eq(&c.index().unwrap()));
        let orig = Connector::new(xi.clone(), xi_inv.clone(), a.clone()).unwrap();
        assert_eq!(chi(&orig.index().unwrap()), chi(&c.index().unwrap()));
    }
    // an involution with η = ξ: ξ̃ is again an involution
    let (xi, _, a) = anticommuting(&mut g, 2);
    let t = tilde_correction(&xi, &xi, &a).unwrap();
    assert_eq!(t.mul(&t).unwrap(), M::identity(a.rows(), &q()));
    // a = 0 forces ξ = 0 on a finite set, and ξ̃ = −1
    let z = M::zero(a.rows(), a.rows(), &q());
    let t0 = tilde_correction(&z, &z, &z).unwrap();
    assert_eq!(t0, M::identity(a.rows(), &q()).neg());
    assert!(tilde_correction(&M::identity(a.rows(), &q()), &xi, &a).is_err());
}

/// `[[0, S], [S, 0]]` with parametrix `[[0, Sᵀ], [Sᵀ, 0]]` and base `1 ⊕ 0`
/// on two copies of ℕ, `S` the forward shift.
fn doubled_shift() -> (M, M, M) {
    let n = IndexSet::tail_n("n");
    let mut s = M::zero(&n, &n, &q());
    s.add_symbol_term(0, 0, 1, Scalar::int(1)).unwrap();
    let st = s.transpose();
    let grid = |x: &M| M::from_grid(&n, &q(), &[vec![None, Some(x)], vec![Some(x), None]]).unwrap();
    let one = M::identity(&n, &q());
    let a = M::from_grid(&n, &q(), &[vec![Some(&one), None], vec![None, None]]).unwrap();
    (grid(&s), grid(&st), a)
}

#[test]
fn tilde_correction_on_the_shift() {
    let (xi, eta, a) = doubled_shift();
    let t = tilde_correction(&xi, &eta, &a).unwrap();
    let one = M::identity(a.rows(), &q());
    let sq = t.mul(&t).unwrap();
    assert!(sq.sub(&one).unwrap().is_k());
    assert_eq!(sq, one);
    let c = Connector::involution(t, a).unwrap();
    // the same pattern as F(Sᵀ, S) with the base reversed
    assert_eq!(chi(&c.index().unwrap()), -1);
}

fn backward() -> FredholmPair {
    FredholmPair::backward_shift(&q())
}

/// `χ(Ind_F)` from dense windows of `ψ, φ` on `{0,…,w−1}`: the diagonal of
/// `F ē F − e` summed over the first `w/2` indices of each part, where the
/// truncation of the window does not reach.
fn window_chi(fp: &FredholmPair, w: i64) -> Scalar {
    let qq = q();
    let pts = |s: &IndexSet| -> Vec<Pos> {
        (0..s.block_count())
            .flat_map(|b| if s.layout()[b].is_tail() { (0..w).map(|i| Pos::new(b, i)).collect::<Vec<_>>() } else { vec![Pos::point(b)] })
            .collect()
    };
    let (p0, p1) = (pts(fp.omega0()), pts(fp.omega1()));
    let psi = fp.psi.window(&p1, &p0);
    let phi = fp.phi.window(&p0, &p1);
    let n0 = p0.len();
    let i0 = dense::identity(n0, &qq);
    let phipsi = dense::mul(&phi, &psi, &qq);
    let tl = dense::sub(&i0, &phipsi);
    let two_phi: Dense = phi.iter().map(|r| r.iter().map(|x| x.add(x)).collect()).collect();
    let tr = dense::sub(&two_phi, &dense::mul(&phipsi, &phi, &qq));
    // F ē F with ē = 1 ⊕ 0: blocks [[tl·tl, tl·tr], [ψ·tl, ψ·tr]]
    let d0 = dense::mul(&tl, &tl, &qq);
    let d1 = dense::mul(&psi, &tr, &qq);
    let inner = |p: &Pos| p.at < w / 2;
    let mut acc = qq.zero();
    for (i, p) in p0.iter().enumerate() {
        if inner(p) {
            acc = acc.add(&d0[i][i]);
        }
    }
    for (i, p) in p1.iter().enumerate() {
        if inner(p) {
            acc = acc.add(&d1[i][i]).sub(&qq.one());
        }
    }
    acc
}

#[test]
fn shift_index_and_window_oracle() {
    let s = backward();
    assert_eq!(s.chi().unwrap(), Scalar::int(1));
    assert_eq!(window_chi(&s, 16), Scalar::int(1));
    assert_eq!(s.inv().chi().unwrap(), Scalar::int(-1));
    assert_eq!(window_chi(&s.inv(), 16), Scalar::int(-1));
    let ss = s.then(&s).unwrap();
    assert_eq!(ss.chi().unwrap(), Scalar::int(2));
    assert_eq!(window_chi(&ss, 16), Scalar::int(2));
    assert_eq!(s.sum(&s).unwrap().chi().unwrap(), Scalar::int(2));
    // a finitely supported change of ψ keeps χ
    let mut psi = s.psi.clone();
    psi.add_entry(Pos::new(0, 0), Pos::new(0, 2), Scalar::int(3)).unwrap();
    let perturbed = FredholmPair::new(psi, s.phi.clone()).unwrap();
    assert_eq!(perturbed.chi().unwrap(), Scalar::int(1));
    assert_eq!(window_chi(&perturbed, 16), Scalar::int(1));
}

#[test]
fn f_is_an_exact_involution() {
    let mut g = Gen::new(95);
    let check = |fp: &FredholmPair| {
        let f = fp.f_matrix().unwrap();
        assert_eq!(f, fp.f_factored().unwrap());
        assert_eq!(f.mul(&f).unwrap(), M::identity(f.rows(), &q()));
        fp.connector().unwrap();
    };
    for _ in 0..100 {
        let (m, n) = (g.range(1, 3), g.range(1, 3));
        // φ is an arbitrary matrix of the transposed shape: far from a parametrix
        let fp = FredholmPair::new(rect(&mut g, m, n), rect(&mut g, n, m)).unwrap();
        check(&fp);
        assert_eq!(chi(&fp.index().unwrap()), n as i64 - m as i64);
    }
    let mut sloppy = backward();
    sloppy.phi.add_entry(Pos::new(0, 1), Pos::new(0, 0), Scalar::int(5)).unwrap();
    sloppy.validate().unwrap();
    check(&sloppy);
    check(&backward());
    assert_eq!(chi(&sloppy.index().unwrap()), 1);
    let trivial = FredholmPair::unit(M::identity(&IndexSet::range(2), &q()), M::identity(&IndexSet::range(2), &q())).unwrap();
    assert_eq!(chi(&trivial.index().unwrap()), 0);
}

#[test]
fn surjection_with_right_inverse() {
    // ψ = [1 2], φ = [1 0]ᵀ: ψφ = 1, kernel of dimension one
    let (o0, o1) = (IndexSet::range(2), IndexSet::range(1));
    let psi = M::from_dense(&o1, &o0, &q(), &[vec![Scalar::int(1), Scalar::int(2)]]).unwrap();
    let phi = M::from_dense(&o0, &o1, &q(), &[vec![Scalar::int(1)], vec![Scalar::int(0)]]).unwrap();
    let fp = FredholmPair::new(psi, phi).unwrap();
    assert_eq!(chi(&fp.index().unwrap()), 1);
    assert_eq!(window_chi(&fp, 2), Scalar::int(1));
}

#[test]
fn index_laws_and_witnesses() {
    let mut g = Gen::new(96);
    let mut pairs = vec![backward(), backward().inv()];
    for _ in 0..6 {
        let (m, n) = (g.range(1, 3), g.range(1, 3));
        pairs.push(FredholmPair::new(rect(&mut g, m, n), rect(&mut g, n, m)).unwrap());
    }
    for fp in &pairs {
        let c = chi(&fp.index().unwrap());
        assert_eq!(chi(&fp.inv().index().unwrap()), -c);
        fp.inv_witness().unwrap().check().unwrap();
        // invertible (u, u⁻¹) after fp: unchanged χ
        let (u, u_inv) = if fp.omega1().is_finite() {
            g.unit(fp.omega1(), &q()).unwrap()
        } else {
            let n = fp.omega1().clone();
            let mut u = M::identity(&n, &q());
            u.add_entry(Pos::new(0, 0), Pos::new(0, 1), Scalar::int(2)).unwrap();
            let mut u_inv = M::identity(&n, &q());
            u_inv.add_entry(Pos::new(0, 0), Pos::new(0, 1), Scalar::int(-2)).unwrap();
            (u, u_inv)
        };
        let w = fp.unit_composition_witness(&u, &u_inv).unwrap();
        w.check().unwrap();
        assert_eq!(chi(&w.rhs), c);
        for other in &pairs {
            let w = fp.sum_witness(other).unwrap();
            w.check().unwrap();
            assert_eq!(chi(&w.lhs), c + chi(&other.index().unwrap()));
            if fp.omega1().compatible(other.omega0()) {
                let comp = fp.then(other).unwrap();
                assert_eq!(chi(&comp.index().unwrap()), c + chi(&other.index().unwrap()));
            }
        }
    }
}

#[test]
fn tensor_variants() {
    let mut g = Gen::new(97);
    let mut finite = Vec::new();
    for _ in 0..6 {
        let (m, n) = (g.range(1, 3), g.range(1, 3));
        finite.push(FredholmPair::new(rect(&mut g, m, n), rect(&mut g, n, m)).unwrap());
    }
    let shifts = [backward(), backward().inv()];
    for x in &finite {
        let cx = chi(&x.index().unwrap());
        for y in finite.iter().chain(shifts.iter()) {
            let cy = chi(&y.index().unwrap());
            let raw = x.tensor_left(y, TensorVariant::Raw).unwrap();
            let red = x.tensor_left(y, TensorVariant::Reduced).unwrap();
            assert_eq!(chi(&raw.index().unwrap()), cx * cy);
            assert_eq!(chi(&red.index().unwrap()), cx * cy);
            let flipped = y.tensor_left(x, TensorVariant::Raw).unwrap();
            assert_eq!(chi(&flipped.index().unwrap()), cx * cy);
            let flipped = y.tensor_left(x, TensorVariant::Reduced).unwrap();
            assert_eq!(chi(&flipped.index().unwrap()), cx * cy);
        }
    }
    // two infinite factors have no structured Kronecker product
    assert!(matches!(
        backward().tensor_left(&backward(), TensorVariant::Raw),
        Err(Error::InfiniteProduct)
    ));
}

#[test]
fn bilateral_shift_with_reflection() {
    let c = bilateral_shift_connector(&q()).unwrap();
    let one = M::identity(c.xi.rows(), &q());
    assert_eq!(c.xi.mul(&c.xi_inv).unwrap(), one);
    assert_eq!(c.xi_inv.mul(&c.xi).unwrap(), one);
    let ind = c.index().unwrap();
    // ⟨1_{n ≥ 1}, 1_{n ≥ 0}⟩ differs from the base only at e_0
    let d = ind.b().sub(ind.a()).unwrap();
    assert_eq!(d.finite().len(), 1);
    assert_eq!(d.entry(Pos::new(0, 0), Pos::new(0, 0)), Scalar::int(-1));
    assert_eq!(chi(&ind), -1);
    assert_eq!(chi(&c.inv().index().unwrap()), 1);
}
