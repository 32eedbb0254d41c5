use grass::analytic::*;
use grass::gen::Gen;
use grass::grass::{bar, conj, IdempotentPair};
use grass::{IndexSet, Pos, Ring, Scalar, StructuredMatrix};

type M = StructuredMatrix;

fn fl() -> Ring {
    Ring::float()
}

fn dense(rows: &[&[f64]]) -> M {
    let n = rows.len();
    let set = IndexSet::range(n);
    let table: Vec<Vec<Scalar>> = rows.iter().map(|r| r.iter().map(|&x| Scalar::Float(x)).collect()).collect();
    M::from_dense(&set, &set, &fl(), &table).unwrap()
}

fn rot(theta: f64) -> M {
    let (s, c) = theta.sin_cos();
    dense(&[&[c, -s], &[s, c]])
}

/// `R(θ) diag(1, 0) R(θ)ᵀ`.
fn rotated_projection(theta: f64) -> M {
    let (s, c) = theta.sin_cos();
    dense(&[&[c * c, c * s], &[c * s, s * s]])
}

fn dist(a: &M, b: &M) -> f64 {
    window_norm(&a.sub(b).unwrap())
}

const OMEGA: f64 = 30.0;

fn rotation_path(step: f64) -> IdempotentPath {
    IdempotentPath::new(|t| Ok(rotated_projection(OMEGA * t)), step).with_derivative(|t| {
        let (s, c) = (OMEGA * t).sin_cos();
        let (s2, c2) = (2.0 * s * c, c * c - s * s);
        Ok(dense(&[&[-OMEGA * s2, OMEGA * c2], &[OMEGA * c2, OMEGA * s2]]))
    })
}

#[test]
fn transport_on_the_rotation_family() {
    // for a rank one projection in the plane the generator is ω·J, so A(0, T) = R(ωT)
    let path = rotation_path(1e-3);
    let a = transport(&path, 0.0, 1.0).unwrap();
    assert!(dist(&a, &rot(OMEGA)) < 1e-6);
    let r = transport_residual(&path, 0.0, 1.0).unwrap();
    assert!(r < 1e-6, "residual {r:e}");

    let coarse = dist(&transport(&rotation_path(1e-3), 0.0, 1.0).unwrap(), &rot(OMEGA));
    let fine = dist(&transport(&rotation_path(5e-4), 0.0, 1.0).unwrap(), &rot(OMEGA));
    assert!(coarse / fine >= 8.0, "ratio {}", coarse / fine);

    // finite differences give the same result to within the integration error
    let fd = IdempotentPath::new(|t| Ok(rotated_projection(OMEGA * t)), 1e-3);
    let d = dist(&transport(&fd, 0.0, 1.0).unwrap(), &a);
    assert!(d < 1e-6, "{d:e}");
}

#[test]
fn transport_cocycle_and_reversal() {
    let path = rotation_path(1e-3);
    let a12 = transport(&path, 0.0, 0.4).unwrap();
    let a23 = transport(&path, 0.4, 1.0).unwrap();
    let a13 = transport(&path, 0.0, 1.0).unwrap();
    assert!(dist(&a23.mul(&a12).unwrap(), &a13) < 1e-6);
    let back = transport(&path.reversed(0.0, 1.0), 0.0, 1.0).unwrap();
    assert!(dist(&back.mul(&a13).unwrap(), &M::identity(&IndexSet::range(2), &fl())) < 1e-6);
    let constant = IdempotentPath::new(|_| Ok(rotated_projection(0.3)), 1e-2);
    assert!(dist(&transport(&constant, 0.0, 1.0).unwrap(), &M::identity(&IndexSet::range(2), &fl())) < 1e-12);
    let broken = IdempotentPath::new(|t| Ok(rotated_projection(t).scale_left(&Scalar::Float(1.5))), 1e-2);
    assert!(transport(&broken, 0.0, 1.0).is_err());
    assert!(transport(&path, 1.0, 0.0).is_err());
}

fn near(p_tilde: M, reference: M) -> NearIdempotent {
    NearIdempotent::new(p_tilde, reference).unwrap()
}

#[test]
fn idem_on_two_by_two_instances() {
    let p0 = dense(&[&[1.0, 0.0], &[0.0, 0.0]]);
    // already idempotent: returned unchanged
    let exact = dense(&[&[1.0, 0.01], &[0.0, 0.0]]);
    for m in [IdemMethod::Newton, IdemMethod::Series(8)] {
        let q = idem(&near(exact.clone(), p0.clone()), m).unwrap();
        assert!(dist(&q, &exact) < 1e-14);
    }
    // symmetric perturbation: the spectral projection for the eigenvalue near 1
    let x = 0.01;
    let tilde = dense(&[&[1.0, x], &[x, 0.0]]);
    let root = (1.0 + 4.0 * x * x).sqrt();
    let (l1, l2) = ((1.0 + root) / 2.0, (1.0 - root) / 2.0);
    let oracle = dense(&[&[(1.0 - l2) / (l1 - l2), x / (l1 - l2)], &[x / (l1 - l2), -l2 / (l1 - l2)]]);
    let inst = near(tilde.clone(), p0.clone());
    for m in [IdemMethod::Newton, IdemMethod::Series(8)] {
        let q = idem(&inst, m).unwrap();
        assert!(idempotency_defect(&q).unwrap() < 1e-10);
        assert!(dist(&q, &oracle) < 1e-10, "{m:?}");
        assert!(dist(&q, &tilde) <= 4.0 * inst.defect);
    }
    let bad = near(dense(&[&[0.7, 0.0], &[0.0, 0.0]]), p0);
    assert!(bad.defect > 0.2);
    assert!(idem(&bad, IdemMethod::Newton).is_err());
    assert!(idem(&bad, IdemMethod::Series(8)).is_err());
    assert!(idem(&inst, IdemMethod::Series(MAX_SERIES_ORDER + 1)).is_err());
}

fn random_instances(seed: u64, count: usize) -> Vec<NearIdempotent> {
    let mut g = Gen::new(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let n = g.range(2, 4);
        let omega = IndexSet::range(n);
        let p = to_float(&g.idempotent(&omega, &Ring::rationals()).unwrap()).unwrap();
        if window_norm(&p) > 4.0 {
            continue;
        }
        let mut noise = M::zero(&omega, &omega, &fl());
        for i in 0..n {
            for j in 0..n {
                let v = g.small_int() as f64 * 1e-3 * (1 + g.range(0, 4)) as f64;
                noise.add_entry(Pos::point(i), Pos::point(j), Scalar::Float(v)).unwrap();
            }
        }
        let inst = near(p.add(&noise).unwrap(), p);
        if inst.defect <= MAX_DEFECT && inst.defect > 0.0 {
            out.push(inst);
        }
    }
    out
}

#[test]
fn idem_methods_agree_on_random_instances() {
    for inst in random_instances(81, 50) {
        let newton = idem(&inst, IdemMethod::Newton).unwrap();
        let series = idem(&inst, IdemMethod::Series(8)).unwrap();
        assert!(idempotency_defect(&newton).unwrap() <= 1e-10);
        assert!(idempotency_defect(&series).unwrap() <= 1e-10);
        assert!(dist(&newton, &series) <= 1e-8, "{:e}", dist(&newton, &series));
        assert!(dist(&newton, &inst.p_tilde) <= 4.0 * inst.defect);
        let again = idem(&near(newton.clone(), inst.reference.clone()), IdemMethod::Newton).unwrap();
        assert!(dist(&again, &newton) <= 1e-12);
    }
}

#[test]
fn factorization_identity_is_exact() {
    let q = Ring::rationals();
    let mut g = Gen::new(82);
    let two = Scalar::int(2);
    for _ in 0..50 {
        let n = g.range(1, 4);
        let omega = IndexSet::range(n);
        let p = g.idempotent(&omega, &q).unwrap();
        let r = g.idempotent(&omega, &q).unwrap();
        let one = M::identity(&omega, &q);
        let plain = one.sub(&p).unwrap().sub(&r).unwrap();
        let corrected = plain.add(&r.mul(&p).unwrap().scale_left(&two)).unwrap();
        let refl = one.sub(&r.scale_left(&two)).unwrap();
        assert_eq!(refl.mul(&corrected).unwrap(), plain);
    }
}

#[test]
fn connectors_on_a_rotated_pair() {
    let p = rotated_projection(0.0);
    let q = rotated_projection(0.1);
    for form in [ConnectForm::Plain, ConnectForm::Corrected, ConnectForm::Sign] {
        let m = connect(&p, &q, form).unwrap();
        let moved = conj(&m.psi, &p, &m.psi_inv).unwrap();
        assert!(dist(&moved, &q) < 1e-10, "{form:?}");
    }
    let s = sign_connector(&p, &q).unwrap();
    let one = M::identity(&IndexSet::range(2), &fl());
    assert!(dist(&s.mul(&s).unwrap(), &one) < 1e-9);
    assert!(dist(&s.mul(&p).unwrap(), &q.mul(&s).unwrap()) < 1e-9);
    assert!(dist(&s.mul(&q).unwrap(), &p.mul(&s).unwrap()) < 1e-9);
    // the reflection in the normal of the bisecting line
    let (sn, cs) = 0.1f64.sin_cos();
    assert!(dist(&s, &dense(&[&[-cs, -sn], &[-sn, cs]])) < 1e-9);

    // Q = P: the plain connector is the involution 1 − 2P
    let same = connect(&p, &p, ConnectForm::Plain).unwrap();
    assert!(dist(&same.psi.mul(&same.psi).unwrap(), &one) < 1e-12);
    assert!(sign_connector(&p, &rotated_projection(std::f64::consts::FRAC_PI_2)).is_err());
    assert!(connect(&p, &bar(&p), ConnectForm::Plain).is_err());
}

/// `∫ (A − Bz)(A + Bz)⁻¹ |dz|/2π` with `A = (2 − P − Q)/2`, `B = (P + Q)/2`,
/// by the trapezoid rule on the unit circle, for 2 × 2 real inputs.
fn sign_by_quadrature(p: [[f64; 2]; 2], q: [[f64; 2]; 2], nodes: usize) -> [[f64; 2]; 2] {
    type C = (f64, f64);
    let cm = |a: C, b: C| (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
    let cs = |a: C, b: C| (a.0 - b.0, a.1 - b.1);
    let ca = |a: C, b: C| (a.0 + b.0, a.1 + b.1);
    let cdiv = |a: C, b: C| {
        let d = b.0 * b.0 + b.1 * b.1;
        ((a.0 * b.0 + a.1 * b.1) / d, (a.1 * b.0 - a.0 * b.1) / d)
    };
    let mut acc = [[0.0; 2]; 2];
    for k in 0..nodes {
        let phi = 2.0 * std::f64::consts::PI * k as f64 / nodes as f64;
        let z: C = (phi.cos(), phi.sin());
        let mut minus = [[(0.0, 0.0); 2]; 2];
        let mut plus = [[(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                let id = if i == j { 1.0 } else { 0.0 };
                let a = (id - (p[i][j] + q[i][j]) / 2.0, 0.0);
                let b = cm(((p[i][j] + q[i][j]) / 2.0, 0.0), z);
                minus[i][j] = cs(a, b);
                plus[i][j] = ca(a, b);
            }
        }
        let det = cs(cm(plus[0][0], plus[1][1]), cm(plus[0][1], plus[1][0]));
        let inv = [
            [cdiv(plus[1][1], det), cdiv((-plus[0][1].0, -plus[0][1].1), det)],
            [cdiv((-plus[1][0].0, -plus[1][0].1), det), cdiv(plus[0][0], det)],
        ];
        for i in 0..2 {
            for j in 0..2 {
                let v = ca(cm(minus[i][0], inv[0][j]), cm(minus[i][1], inv[1][j]));
                acc[i][j] += v.0 / nodes as f64;
            }
        }
    }
    acc
}

#[test]
fn sign_connector_matches_contour_quadrature() {
    for (t1, t2) in [(0.0, 0.1), (0.2, 0.9), (-0.4, 0.3)] {
        let p = rotated_projection(t1);
        let q = rotated_projection(t2);
        let arr = |m: &M| {
            let mut out = [[0.0; 2]; 2];
            for (i, row) in out.iter_mut().enumerate() {
                for (j, x) in row.iter_mut().enumerate() {
                    *x = m.entry(Pos::point(i), Pos::point(j)).as_f64().unwrap();
                }
            }
            out
        };
        let oracle = sign_by_quadrature(arr(&p), arr(&q), 512);
        let s = arr(&sign_connector(&p, &q).unwrap());
        for i in 0..2 {
            for j in 0..2 {
                assert!((s[i][j] - oracle[i][j]).abs() < 1e-9, "{t1} {t2}");
            }
        }
    }
}

#[test]
fn connectors_on_random_near_pairs() {
    for inst in random_instances(83, 20) {
        let p = &inst.reference;
        let q = idem(&inst, IdemMethod::Newton).unwrap();
        let one = M::identity(p.rows(), &fl());
        for form in [ConnectForm::Plain, ConnectForm::Corrected, ConnectForm::Sign] {
            let m = connect(p, &q, form).unwrap();
            assert!(dist(&conj(&m.psi, p, &m.psi_inv).unwrap(), &q) < 1e-9);
        }
        let s = sign_connector(p, &q).unwrap();
        assert!(dist(&s.mul(&s).unwrap(), &one) < 1e-9);
    }
}

/// `R0 − N₂ + N₁ − N₁N₂ + N₂N₁ + N₁N₂N₁ = (1 + N₁)(1 + N₂) R0 (1 − N₂)(1 − N₁)` on
/// `{0, 1} × ℕ`, with `N₁` from the second copy to the first and `N₂` back,
/// both with entries `scale · ratio^{i+j}` for `i, j < size`.
fn decaying_pair(scale: f64, ratio: f64, size: i64) -> IdempotentPair {
    let omega = IndexSet::tail_n("n");
    let base = IdempotentPair::r_zero(&omega, &fl());
    let space = base.space().clone();
    let mut n1 = M::zero(&space, &space, &fl());
    let mut n2 = M::zero(&space, &space, &fl());
    for i in 0..size {
        for j in 0..size {
            let v = scale * ratio.powi((i + j) as i32);
            n1.add_entry(Pos::new(0, i), Pos::new(1, j), Scalar::Float(v)).unwrap();
            n2.add_entry(Pos::new(1, i), Pos::new(0, j), Scalar::Float(-v)).unwrap();
        }
    }
    let one = M::identity(&space, &fl());
    let g = one.add(&n1).unwrap().mul(&one.add(&n2).unwrap()).unwrap();
    let g_inv = one.sub(&n2).unwrap().mul(&one.sub(&n1).unwrap()).unwrap();
    let b = conj(&g, base.a(), &g_inv).unwrap();
    IdempotentPair::new(b, base.a().clone()).unwrap()
}

#[test]
fn finite_reduction() {
    let pair = decaying_pair(0.02, 0.3, 20);
    assert!(idempotency_defect(pair.b()).unwrap() < 1e-14);
    let red = finite_reduce(&pair, 1e-6).unwrap();
    assert!(red.bound < 0.5);
    assert!(red.residual <= 1e-8);
    assert!(idempotency_defect(&red.p_eps).unwrap() < 1e-10);
    assert!(red.support_radius < pair.b().sub(pair.a()).unwrap().support_radius());
    assert!(red.support_radius > 0);
    let m = &red.connector;
    assert!(dist(&conj(&m.psi, pair.b(), &m.psi_inv).unwrap(), &red.p_eps) <= 1e-8);
    assert!(dist(&m.phi, &M::identity(pair.space(), &fl())) == 0.0);

    // nothing below the cutoff: P comes back with the identity connector
    let same = finite_reduce(&pair, 1e-30).unwrap();
    assert!(dist(&same.p_eps, pair.b()) < 1e-14);
    assert!(dist(&same.connector.psi, &M::identity(pair.space(), &fl())) < 1e-14);

    // a large perturbation cut away entirely violates ‖Pε‖ + ‖(1 − P)ε‖ < 1/2
    let big = decaying_pair(0.4, 0.3, 20);
    assert!(finite_reduce(&big, 1.0).is_err());
    assert!(finite_reduce(&decaying_pair(0.02, 0.3, 20), 1.0).is_ok());
}

#[test]
fn window_inverse_reports_singularity() {
    let z = IndexSet::tail_z("z");
    let mut m = M::identity(&z, &fl());
    m.add_entry(Pos::new(0, 0), Pos::new(0, 0), Scalar::Float(-1.0)).unwrap();
    match invert(&m) {
        Err(grass::Error::Singular { size, det }) => {
            assert_eq!(size, 1);
            assert_eq!(det, 0.0);
        }
        other => panic!("{other:?}"),
    }
    let mut u = M::scalar_identity(&z, &fl(), &Scalar::Float(2.0));
    u.add_entry(Pos::new(0, 0), Pos::new(0, 3), Scalar::Float(1.0)).unwrap();
    let inv = invert(&u).unwrap();
    assert!(dist(&u.mul(&inv).unwrap(), &M::identity(&z, &fl())) < 1e-14);
    assert!(dist(&inv.mul(&u).unwrap(), &M::identity(&z, &fl())) < 1e-14);
}
