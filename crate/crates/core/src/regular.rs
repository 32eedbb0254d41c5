//! Core information of pairs: the corners `h_ij` of the regularized matrix,
//! regular idempotents, their operations, and a certified dimension bound.

use std::collections::BTreeSet;

use crate::coeff::Ring;
use crate::error::{Error, Result};
use crate::grass::{bar, regularize_witness, sw, HomotopyWitness, IdempotentPair, Morphism, Pad};
use crate::mat::{dense, StructuredMatrix};
use crate::shape::{BlockKind, IndexSet, Pos, Relabeling, TreeIso};

/// The corners `h_ij = a^[i](b − a)a^[j]`, with `a^[1] = a` and `a^[0] = ā`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoreInfo {
    pub omega: IndexSet,
    pub h: [[StructuredMatrix; 2]; 2],
}

/// `H = [[h00, h01], [h10, 1 + h11]]` on `{0,1} × Ω` satisfying `H² = H` and
/// the regularity identities.
#[derive(Clone, Debug, PartialEq)]
pub struct RegularIdempotent {
    core: CoreInfo,
    matrix: StructuredMatrix,
}

pub fn h_components(p: &IdempotentPair) -> Result<CoreInfo> {
    let delta = p.b().sub(p.a())?;
    let parts = [bar(p.a()), p.a().clone()];
    let corner = |i: usize, j: usize| -> Result<StructuredMatrix> { parts[i].mul(&delta)?.mul(&parts[j]) };
    Ok(CoreInfo {
        omega: p.space().clone(),
        h: [[corner(0, 0)?, corner(0, 1)?], [corner(1, 0)?, corner(1, 1)?]],
    })
}

impl CoreInfo {
    pub fn ring(&self) -> &Ring {
        self.h[0][0].ring()
    }

    fn prod(&self, x: (usize, usize), y: (usize, usize)) -> StructuredMatrix {
        self.h[x.0][x.1].mul(&self.h[y.0][y.1]).expect("same shape")
    }

    /// The four identities equivalent to `H² = H`, as defects that must vanish.
    pub fn idempotency_defects(&self) -> [(&'static str, StructuredMatrix); 4] {
        let add = |x: StructuredMatrix, y: StructuredMatrix| x.add(&y).expect("same shape");
        let sub = |x: StructuredMatrix, y: &StructuredMatrix| x.sub(y).expect("same shape");
        [
            ("h00h00+h01h10=h00", sub(add(self.prod((0, 0), (0, 0)), self.prod((0, 1), (1, 0))), &self.h[0][0])),
            ("h00h01+h01h11=0", add(self.prod((0, 0), (0, 1)), self.prod((0, 1), (1, 1)))),
            ("h10h00+h11h10=0", add(self.prod((1, 0), (0, 0)), self.prod((1, 1), (1, 0)))),
            ("h10h01+h11h11=-h11", add(add(self.prod((1, 0), (0, 1)), self.prod((1, 1), (1, 1))), self.h[1][1].clone())),
        ]
    }

    /// The eight regularity identities, as products that must vanish.
    pub fn regularity_defects(&self) -> [(&'static str, StructuredMatrix); 8] {
        [
            ("h00h10=0", self.prod((0, 0), (1, 0))),
            ("h01h00=0", self.prod((0, 1), (0, 0))),
            ("h00h11=0", self.prod((0, 0), (1, 1))),
            ("h01h01=0", self.prod((0, 1), (0, 1))),
            ("h10h10=0", self.prod((1, 0), (1, 0))),
            ("h11h00=0", self.prod((1, 1), (0, 0))),
            ("h10h11=0", self.prod((1, 0), (1, 1))),
            ("h11h01=0", self.prod((1, 1), (0, 1))),
        ]
    }

    /// Names and outcomes of all twelve identities.
    pub fn identities(&self) -> Vec<(&'static str, bool)> {
        let ring = self.ring().clone();
        let zero = |m: &StructuredMatrix| m.finite().values().all(|v| ring.is_zero(v)) && m.symbols().is_empty();
        self.idempotency_defects()
            .iter()
            .chain(self.regularity_defects().iter())
            .map(|(name, m)| (*name, zero(m)))
            .collect()
    }
}

pub fn assemble(core: CoreInfo) -> Result<RegularIdempotent> {
    for (name, ok) in core.identities() {
        if !ok {
            return Err(Error::Precondition(format!("core violates {name}")));
        }
    }
    let one = StructuredMatrix::identity(&core.omega, core.ring());
    let h11 = one.add(&core.h[1][1])?;
    let grid = vec![vec![Some(&core.h[0][0]), Some(&core.h[0][1])], vec![Some(&core.h[1][0]), Some(&h11)]];
    let matrix = StructuredMatrix::from_grid(&core.omega, core.ring(), &grid)?;
    Ok(RegularIdempotent { core, matrix })
}

impl RegularIdempotent {
    /// Reads the corners off a matrix on `{0,1} × Ω`.
    pub fn from_matrix(omega: &IndexSet, m: &StructuredMatrix) -> Result<Self> {
        let one = StructuredMatrix::identity(omega, m.ring());
        let block = |i, j| m.grid_block(omega, i, j);
        let h = [[block(0, 0)?, block(0, 1)?], [block(1, 0)?, block(1, 1)?.sub(&one)?]];
        if h.iter().flatten().any(|x| !x.is_k()) {
            return Err(Error::NotFinite("corners must be finitely supported".into()));
        }
        assemble(CoreInfo { omega: omega.clone(), h })
    }

    pub fn of_pair(p: &IdempotentPair) -> Result<Self> {
        assemble(h_components(p)?)
    }

    pub fn core(&self) -> &CoreInfo {
        &self.core
    }

    pub fn h(&self, i: usize, j: usize) -> &StructuredMatrix {
        &self.core.h[i][j]
    }

    pub fn matrix(&self) -> &StructuredMatrix {
        &self.matrix
    }

    pub fn omega(&self) -> &IndexSet {
        &self.core.omega
    }

    pub fn ring(&self) -> &Ring {
        self.core.ring()
    }

    /// `⟨H, 0 ⊕ 1⟩`.
    pub fn pair(&self) -> IdempotentPair {
        let base = IdempotentPair::r_zero(self.omega(), self.ring());
        IdempotentPair::new_unchecked(self.matrix.clone(), base.a().clone()).expect("same shape")
    }

    fn from_corners(omega: &IndexSet, h: [[StructuredMatrix; 2]; 2]) -> Result<Self> {
        assemble(CoreInfo { omega: omega.clone(), h })
    }

    /// Regular direct sum: the corners add blockwise.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        let omega = IndexSet::union(self.omega(), other.omega());
        let c = |i: usize, j: usize| -> Result<StructuredMatrix> {
            self.h(i, j).direct_sum(other.h(i, j))?.with_sets(&omega, &omega)
        };
        Self::from_corners(&omega, [[c(0, 0)?, c(0, 1)?], [c(1, 0)?, c(1, 1)?]])
    }

    /// `R(p^inv) = [[−h11, −h10], [−h01, 1 − h00]]`.
    pub fn inv(&self) -> Result<Self> {
        let n = |i, j| self.h(i, j).neg();
        Self::from_corners(self.omega(), [[n(1, 1), n(1, 0)], [n(0, 1), n(0, 0)]])
    }

    /// `X = h01h10 + h01h11 + h11h10 − h10h01`.
    fn prime_correction(&self) -> Result<StructuredMatrix> {
        let m = |x: (usize, usize), y: (usize, usize)| self.h(x.0, x.1).mul(self.h(y.0, y.1));
        m((0, 1), (1, 0))?.add(&m((0, 1), (1, 1))?)?.add(&m((1, 1), (1, 0))?)?.sub(&m((1, 0), (0, 1))?)
    }

    /// `R(p′) = [[h00, h10], [h01, 1 + h11]] − [[X, −X], [−X, X]]`.
    pub fn prime(&self) -> Result<Self> {
        let x = self.prime_correction()?;
        let h = [
            [self.h(0, 0).sub(&x)?, self.h(1, 0).add(&x)?],
            [self.h(0, 1).add(&x)?, self.h(1, 1).sub(&x)?],
        ];
        Self::from_corners(self.omega(), h)
    }

    /// The same value as [`prime`](Self::prime), computed as
    /// `sw₀₁(h00 − h01 + h10 − h11) H sw₀₁(h00 + h01 − h10 − h11)`.
    pub fn prime_by_switches(&self) -> Result<StructuredMatrix> {
        let (h00, h01, h10, h11) = (self.h(0, 0), self.h(0, 1), self.h(1, 0), self.h(1, 1));
        let left = h00.sub(h01)?.add(h10)?.sub(h11)?;
        let right = h00.add(h01)?.sub(h10)?.sub(h11)?;
        StructuredMatrix::product(&[&sw(2, 0, 1, &left)?, &self.matrix, &sw(2, 0, 1, &right)?])
    }

    /// `R(p ⊗← q)` from the corners of `R(p)`, `R(q)` and `R(q′)`.
    ///
    /// The difference of `p ⊗← q = ⟨B, A⟩` is `δ_p ⊗ δ_q` and
    /// `A = a ⊗ d + ā ⊗ c`, so each corner is a sum of `h ⊗ (f δ_q g)` with
    /// `f, g ∈ {c, c̄, d, d̄}`; those factors are read off `k` and `k′`.
    pub fn tensor_left(&self, other: &Self) -> Result<Self> {
        let kp = other.prime()?;
        let omega = IndexSet::product(self.omega(), other.omega())?;
        let sum = |terms: &[(usize, usize)], prime: bool| -> Result<StructuredMatrix> {
            let src = if prime { &kp } else { other };
            let mut out = StructuredMatrix::zero(other.omega(), other.omega(), self.ring());
            for &(i, j) in terms {
                out = out.add(src.h(i, j))?;
            }
            Ok(out)
        };
        // f δ g for f, g indexed as c = 0, c̄ = 1, d = 2, d̄ = 3
        let factor = |f: usize, g: usize| -> Result<StructuredMatrix> {
            match (f, g) {
                (0, 0) => sum(&[(1, 1)], false),
                (0, 1) => sum(&[(1, 0)], false),
                (1, 0) => sum(&[(0, 1)], false),
                (1, 1) => sum(&[(0, 0)], false),
                (2, 2) => sum(&[(0, 0)], true),
                (2, 3) => sum(&[(0, 1)], true),
                (3, 2) => sum(&[(1, 0)], true),
                (3, 3) => sum(&[(1, 1)], true),
                (2, 1) => sum(&[(1, 0), (0, 0)], false),
                (1, 2) => sum(&[(0, 1), (0, 0)], false),
                (0, 3) => sum(&[(1, 1), (1, 0)], false),
                (3, 0) => sum(&[(1, 1), (0, 1)], false),
                _ => Ok(StructuredMatrix::zero(other.omega(), other.omega(), self.ring())),
            }
        };
        // A^[i] = a ⊗ f_i(a) + ā ⊗ f_i(ā), indexed by s = 1 for a and s = 0 for ā
        let f = |i: usize, s: usize| match (i, s) {
            (1, 1) => 2,
            (1, _) => 0,
            (_, 1) => 3,
            _ => 1,
        };
        let corner = |i: usize, j: usize| -> Result<StructuredMatrix> {
            let mut out = StructuredMatrix::zero(&omega, &omega, self.ring());
            for s in 0..2 {
                for t in 0..2 {
                    let part = self.h(s, t).kronecker(&factor(f(i, s), f(j, t))?)?;
                    out = out.add(&part.with_sets(&omega, &omega)?)?;
                }
            }
            Ok(out)
        };
        Self::from_corners(&omega, [[corner(0, 0)?, corner(0, 1)?], [corner(1, 0)?, corner(1, 1)?]])
    }

    /// `R(p ⊗→ q)`: `p ⊗→ q` is `q ⊗← p` with the tensor factors exchanged.
    pub fn tensor_right(&self, other: &Self) -> Result<Self> {
        let flipped = other.tensor_left(self)?;
        let swap = Relabeling::tree(flipped.omega(), TreeIso::ProdSwap)?;
        let c = |i, j| flipped.h(i, j).transport(&swap);
        let omega = IndexSet::product(self.omega(), other.omega())?;
        let fit = |m: StructuredMatrix| m.with_sets(&omega, &omega);
        Self::from_corners(&omega, [[fit(c(0, 0)?)?, fit(c(0, 1)?)?], [fit(c(1, 0)?)?, fit(c(1, 1)?)?]])
    }
}

/// A dimension bound with its certificate: the pair is homotopic to
/// `⟨U, 𝐑𝟎_Ξ⟩` with `|Ξ| = dim`.
#[derive(Clone, Debug)]
pub struct DimCertificate {
    pub dim: usize,
    pub trimmed: RegularIdempotent,
    pub witnesses: Vec<HomotopyWitness>,
}

impl DimCertificate {
    /// Verifies the witness chain and that it ends in the trimmed pair.
    pub fn check(&self) -> Result<()> {
        crate::grass::verify_chain(&self.witnesses)?;
        let last = self.witnesses.last().ok_or_else(|| Error::Precondition("empty certificate".into()))?;
        if !last.rhs.approx_eq(&self.trimmed.pair()) {
            return Err(Error::Precondition("certificate does not end in the trimmed pair".into()));
        }
        if self.trimmed.omega().block_count() != self.dim {
            return Err(Error::Precondition("trimmed index set has the wrong size".into()));
        }
        Ok(())
    }

    /// `rank(U) − |Ξ|`, which equals χ of the pair over a field.
    pub fn rank_chi(&self) -> Result<i64> {
        let m = self.trimmed.matrix();
        let pts = m.rows().points();
        let r = dense::rank(&m.window(&pts, &pts), m.ring())?;
        Ok(r as i64 - self.dim as i64)
    }
}

/// Positions of `Ω` where some corner has a nonzero row or column.
fn used_positions(core: &CoreInfo) -> BTreeSet<Pos> {
    let mut used = BTreeSet::new();
    for h in core.h.iter().flatten() {
        for ((r, c), v) in h.finite() {
            if !core.ring().is_zero(v) {
                used.insert(*r);
                used.insert(*c);
            }
        }
    }
    used
}

/// Permutation of `Ω` sending the used positions to a finite set `Ξ` in
/// front and the rest onto a set `Ω′` of the same kinds; ℕ-tails shift down
/// by the number of removed positions. Returns `(P, Ξ, Ω′)` with `P` on
/// `(Ξ ∪ Ω′) × Ω`.
fn trim_permutation(omega: &IndexSet, used: &BTreeSet<Pos>, ring: &Ring) -> Result<(StructuredMatrix, IndexSet, IndexSet)> {
    let xi = IndexSet::range(used.len());
    let layout = omega.layout();
    let free_points: Vec<usize> = (0..layout.len())
        .filter(|&b| layout[b] == BlockKind::Point && !used.contains(&Pos::point(b)))
        .collect();
    let tails: Vec<usize> = (0..layout.len()).filter(|&b| layout[b].is_tail()).collect();
    let mut parts = vec![IndexSet::range(free_points.len())];
    for (i, &b) in tails.iter().enumerate() {
        if layout[b] == BlockKind::TailZ {
            if used.iter().any(|p| p.block == b) {
                return Err(Error::Unsupported("trimming a ℤ-tail has no finite certificate".into()));
            }
            parts.push(IndexSet::tail_z(&format!("t{i}")));
        } else {
            parts.push(IndexSet::tail_n(&format!("t{i}")));
        }
    }
    let rest = IndexSet::union_all(&parts);
    let target = IndexSet::union(&xi, &rest);
    let nx = xi.block_count();
    let mut p = StructuredMatrix::zero(&target, omega, ring);
    for (k, pos) in used.iter().enumerate() {
        p.add_entry(Pos::point(k), *pos, ring.one())?;
    }
    for (k, &b) in free_points.iter().enumerate() {
        p.add_entry(Pos::point(nx + k), Pos::point(b), ring.one())?;
    }
    for (i, &b) in tails.iter().enumerate() {
        let tb = nx + free_points.len() + i;
        let removed: Vec<i64> = used.iter().filter(|q| q.block == b).map(|q| q.at).collect();
        let shift = removed.len() as i64;
        p.add_symbol_term(tb, b, -shift, ring.one())?;
        if shift > 0 {
            let top = removed.iter().copied().max().unwrap_or(0) + 1;
            // undo the symbol below `top` and place the survivors explicitly
            for n in shift..top {
                p.add_entry(Pos::new(tb, n - shift), Pos::new(b, n), ring.one().neg())?;
            }
            let mut next = 0;
            for n in 0..top {
                if !removed.contains(&n) {
                    p.add_entry(Pos::new(tb, next), Pos::new(b, n), ring.one())?;
                    next += 1;
                }
            }
        }
    }
    Ok((p, xi, rest))
}

/// Certified upper bound for the regular dimension: regularize, then remove
/// every base index whose rows and columns of `H − (0 ⊕ 1)` vanish.
pub fn dim_upper(p: &IdempotentPair) -> Result<DimCertificate> {
    let ring = p.ring().clone();
    let core = h_components(p)?;
    let used = used_positions(&core);
    let (perm, xi, rest) = trim_permutation(p.space(), &used, &ring)?;
    let perm_t = perm.transpose();
    let omega2 = IndexSet::blocks(2, p.space());
    let big = perm.direct_sum(&perm)?;
    let big_t = perm_t.direct_sum(&perm_t)?;
    // reorder {0,1} × (Ξ ∪ Ω′) into ({0,1} × Ξ) ∪ ({0,1} × Ω′)
    let nx = xi.block_count();
    let nr = rest.block_count();
    let mid = IndexSet::blocks(2, &IndexSet::union(&xi, &rest));
    let target = IndexSet::union(&IndexSet::blocks(2, &xi), &IndexSet::blocks(2, &rest));
    let order: Vec<usize> = (0..nx)
        .chain(2 * nx..2 * nx + nr)
        .chain(nx..2 * nx)
        .chain(2 * nx + nr..2 * (nx + nr))
        .collect();
    let group = crate::grass::block_permutation(&mid, &target, &order, &ring)?;
    let conj = group.mul(&big.with_sets(&mid, &omega2)?)?;
    let conj_inv = big_t.with_sets(&omega2, &mid)?.mul(&group.transpose())?;

    let reg = regularize_witness(p)?;
    let h = [
        [trim(&core.h[0][0], &perm, &perm_t, &xi)?, trim(&core.h[0][1], &perm, &perm_t, &xi)?],
        [trim(&core.h[1][0], &perm, &perm_t, &xi)?, trim(&core.h[1][1], &perm, &perm_t, &xi)?],
    ];
    let trimmed = assemble(CoreInfo { omega: xi.clone(), h })?;
    let pad = IdempotentPair::r_zero(&rest, &ring);
    let step = HomotopyWitness {
        lhs: reg.rhs.clone(),
        rhs: trimmed.pair(),
        pads_lhs: vec![],
        pads_rhs: vec![Pad::Diag(pad.a().clone())],
        conjugator: Morphism::uniform(conj, conj_inv),
    };
    Ok(DimCertificate { dim: used.len(), trimmed, witnesses: vec![reg, step] })
}

fn trim(h: &StructuredMatrix, perm: &StructuredMatrix, perm_t: &StructuredMatrix, xi: &IndexSet) -> Result<StructuredMatrix> {
    let moved = perm.mul(h)?.mul(perm_t)?;
    moved.sub_block(xi, xi, 0, 0)
}
