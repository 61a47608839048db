//! *-homomorphisms between multi-matrix algebras in canonical form.
//!
//! Every *-homomorphism `φ: ⊕_k M_{n_k} → ⊕_l M_{N_l}` is unitarily
//! equivalent to a multiplicity embedding: it is determined by a
//! non-negative integer matrix `m` (target blocks × source blocks) with
//! `Σ_k m_{lk} n_k ≤ N_l`, together with one unitary per target block.
//! `φ(x)_l` places `m_{lk}` diagonal copies of each `x_k` (source blocks in
//! ascending order), zero-pads the rest, and conjugates by `unitaries[l]`.
//!
//! Raw linear maps (e.g. read from files, or produced as compositions of
//! other machinery) are factored back into this canonical form by
//! [`StarHom::recognize`]: multiplicities are read off the images of the
//! minimal central projections, and the block unitaries are solved for via
//! an intertwiner-averaging trick plus a polar decomposition.

use super::{Element, FdCStarAlgebra};
use crate::linalg::{
    hermitian_eigen, op_norm_mat, polar_unitary, random_complex_matrix, unitary_defect, CMat,
};
use crate::report::Report;
use crate::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Loose structural gate for unitaries supplied to [`StarHom::new`]; the
/// precise defect is reported by [`StarHom::check`].
const UNITARY_GATE: f64 = 1e-6;

/// A *-homomorphism in canonical (multiplicity + block unitaries) form.
#[derive(Debug, Clone, PartialEq)]
pub struct StarHom {
    source: FdCStarAlgebra,
    target: FdCStarAlgebra,
    /// `multiplicity[l][k]`: copies of source block `k` inside target block `l`.
    multiplicity: Vec<Vec<usize>>,
    /// One `N_l × N_l` unitary per target block.
    unitaries: Vec<CMat>,
}

impl StarHom {
    pub fn new(
        source: FdCStarAlgebra,
        target: FdCStarAlgebra,
        multiplicity: Vec<Vec<usize>>,
        unitaries: Vec<CMat>,
    ) -> Result<Self> {
        let (ks, kt) = (source.num_blocks(), target.num_blocks());
        if multiplicity.len() != kt || multiplicity.iter().any(|row| row.len() != ks) {
            return Err(Error::Shape(format!(
                "multiplicity must be {kt}x{ks} (target blocks x source blocks)"
            )));
        }
        if unitaries.len() != kt {
            return Err(Error::Shape(format!("need {kt} block unitaries, got {}", unitaries.len())));
        }
        for (l, row) in multiplicity.iter().enumerate() {
            let need: usize =
                row.iter().zip(source.block_dims()).map(|(&m, &n)| m * n).sum();
            let cap = target.block_dims()[l];
            if need > cap {
                return Err(Error::Shape(format!(
                    "target block {l} has capacity {cap} but multiplicities require {need}"
                )));
            }
            let u = &unitaries[l];
            if u.nrows() != cap || u.ncols() != cap {
                return Err(Error::Shape(format!(
                    "unitary for target block {l} is {}x{}, expected {cap}x{cap}",
                    u.nrows(),
                    u.ncols()
                )));
            }
            if unitary_defect(u) > UNITARY_GATE {
                return Err(Error::Shape(format!(
                    "matrix for target block {l} is not unitary (defect {:.3e})",
                    unitary_defect(u)
                )));
            }
        }
        Ok(StarHom { source, target, multiplicity, unitaries })
    }

    pub fn identity(algebra: &FdCStarAlgebra) -> StarHom {
        let k = algebra.num_blocks();
        let mut mult = vec![vec![0usize; k]; k];
        for (i, row) in mult.iter_mut().enumerate() {
            row[i] = 1;
        }
        let unitaries = algebra.block_dims().iter().map(|&n| CMat::identity(n, n)).collect();
        StarHom { source: algebra.clone(), target: algebra.clone(), multiplicity: mult, unitaries }
    }

    pub fn source(&self) -> &FdCStarAlgebra {
        &self.source
    }

    pub fn target(&self) -> &FdCStarAlgebra {
        &self.target
    }

    pub fn multiplicity(&self) -> &[Vec<usize>] {
        &self.multiplicity
    }

    pub fn unitaries(&self) -> &[CMat] {
        &self.unitaries
    }

    /// `Σ_k m_{lk} n_k = N_l` for every target block.
    pub fn is_unital(&self) -> bool {
        self.multiplicity.iter().enumerate().all(|(l, row)| {
            let filled: usize =
                row.iter().zip(self.source.block_dims()).map(|(&m, &n)| m * n).sum();
            filled == self.target.block_dims()[l]
        })
    }

    /// No source block is killed (no zero column), i.e. the map is injective.
    pub fn is_injective(&self) -> bool {
        (0..self.source.num_blocks())
            .all(|k| self.multiplicity.iter().any(|row| row[k] > 0))
    }

    /// A *-isomorphism: permutation multiplicity matrix, unital.
    pub fn is_iso(&self) -> bool {
        let (ks, kt) = (self.source.num_blocks(), self.target.num_blocks());
        if ks != kt {
            return false;
        }
        let rows_ok = self.multiplicity.iter().all(|row| row.iter().sum::<usize>() == 1);
        let cols_ok =
            (0..ks).all(|k| self.multiplicity.iter().map(|row| row[k]).sum::<usize>() == 1);
        rows_ok && cols_ok && self.is_unital()
    }

    /// Filled dimension `Σ_k m_{lk} n_k` of target block `l`.
    fn filled(&self, l: usize) -> usize {
        self.multiplicity[l]
            .iter()
            .zip(self.source.block_dims())
            .map(|(&m, &n)| m * n)
            .sum()
    }

    /// The diagonal-copies layout of `x` in target block `l` (before the
    /// unitary conjugation).
    fn layout(&self, x: &Element, l: usize) -> CMat {
        let cap = self.target.block_dims()[l];
        let mut out = CMat::zeros(cap, cap);
        let mut off = 0;
        for (k, &n) in self.source.block_dims().iter().enumerate() {
            for _ in 0..self.multiplicity[l][k] {
                out.view_mut((off, off), (n, n)).copy_from(x.block(k));
                off += n;
            }
        }
        out
    }

    pub fn apply(&self, x: &Element) -> Result<Element> {
        if x.algebra() != &self.source {
            return Err(Error::Shape("apply: element is not in the source algebra".into()));
        }
        let mut blocks = Vec::with_capacity(self.target.num_blocks());
        for l in 0..self.target.num_blocks() {
            let u = &self.unitaries[l];
            blocks.push(u * self.layout(x, l) * u.adjoint());
        }
        self.target.element(blocks)
    }

    /// Matrix of the map on coordinate vectors (canonical matrix-unit order),
    /// `dim(target) × dim(source)`.
    pub fn coord_matrix(&self) -> Result<CMat> {
        let units = self.source.matrix_units();
        let mut m = CMat::zeros(self.target.dim(), self.source.dim());
        for (j, u) in units.iter().enumerate() {
            let img = self.apply(u)?;
            for (i, z) in img.coords().into_iter().enumerate() {
                m[(i, j)] = z;
            }
        }
        Ok(m)
    }

    /// Numerical law report: unitarity of the block conjugators and
    /// multiplicativity / adjoint-preservation on all matrix-unit pairs.
    pub fn check(&self, tol: f64) -> Report {
        let mut rep = Report::new();
        for (l, u) in self.unitaries.iter().enumerate() {
            rep.push(format!("unitary[{l}]"), unitary_defect(u), tol);
        }
        let units = self.source.matrix_units();
        let images: Vec<Element> =
            units.iter().map(|u| self.apply(u).expect("source units")).collect();
        // Index bookkeeping so u_a ⋅ u_b can be looked up instead of re-applied:
        // units are ordered blocks ascending, row-major.
        let dims = self.source.block_dims().to_vec();
        let mut block_of = Vec::new();
        let mut rc_of = Vec::new();
        let mut offset = vec![0usize; dims.len()];
        let mut acc = 0usize;
        for (k, &n) in dims.iter().enumerate() {
            offset[k] = acc;
            for r in 0..n {
                for cc in 0..n {
                    block_of.push(k);
                    rc_of.push((r, cc));
                }
            }
            acc += n * n;
        }
        let mut mult_defect: f64 = 0.0;
        let mut adj_defect: f64 = 0.0;
        for a in 0..units.len() {
            let (ka, (ra, ca)) = (block_of[a], rc_of[a]);
            // adjoint: (e^k_{rc})* = e^k_{cr}
            let a_star = offset[ka] + ca * dims[ka] + ra;
            adj_defect =
                adj_defect.max(images[a].adjoint().distance(&images[a_star]));
            for b in 0..units.len() {
                let (kb, (rb, cb)) = (block_of[b], rc_of[b]);
                let prod = images[a].mul(&images[b]).expect("same target");
                if ka == kb && ca == rb {
                    let ab = offset[ka] + ra * dims[ka] + cb;
                    mult_defect = mult_defect.max(prod.distance(&images[ab]));
                } else {
                    mult_defect = mult_defect.max(prod.op_norm());
                }
            }
        }
        rep.push("multiplicative", mult_defect, tol);
        rep.push("adjoint", adj_defect, tol);
        rep
    }

    /// Largest difference `‖φ(u) − ψ(u)‖` over source matrix units
    /// (`∞` if the algebras disagree).
    pub fn distance(&self, other: &StarHom) -> f64 {
        if self.source != other.source || self.target != other.target {
            return f64::INFINITY;
        }
        self.source
            .matrix_units()
            .iter()
            .map(|u| self.apply(u).unwrap().distance(&other.apply(u).unwrap()))
            .fold(0.0, f64::max)
    }

    /// Composition `self ∘ inner` in canonical form, computed exactly
    /// (multiplicities multiply; the block unitaries absorb the copy-slot
    /// permutation between nested and canonical layouts).
    pub fn compose(&self, inner: &StarHom) -> Result<StarHom> {
        if inner.target != self.source {
            return Err(Error::Shape(
                "compose: inner target algebra does not match outer source".into(),
            ));
        }
        let src = &inner.source;
        let mid = &self.source;
        let tgt = &self.target;
        let (ks, km) = (src.num_blocks(), mid.num_blocks());
        let mut mult = vec![vec![0usize; ks]; tgt.num_blocks()];
        for (l, row) in mult.iter_mut().enumerate() {
            for (k, entry) in row.iter_mut().enumerate() {
                *entry = (0..km).map(|j| self.multiplicity[l][j] * inner.multiplicity[j][k]).sum();
            }
        }
        let mut unitaries = Vec::with_capacity(tgt.num_blocks());
        for l in 0..tgt.num_blocks() {
            let cap = tgt.block_dims()[l];
            // Block-diagonal of the inner unitaries, one copy per (j, c2) slot,
            // identity on the outer pad.
            let mut b = CMat::zeros(cap, cap);
            let mut off = 0usize;
            for (j, &nj) in mid.block_dims().iter().enumerate() {
                for _ in 0..self.multiplicity[l][j] {
                    b.view_mut((off, off), (nj, nj)).copy_from(&inner.unitaries[j]);
                    off += nj;
                }
            }
            for i in off..cap {
                b[(i, i)] = crate::linalg::ONE;
            }
            // Permutation: canonical coordinates of the composite layout ->
            // nested coordinates (inner layouts stacked per (j, c2)).
            let mut perm = vec![usize::MAX; cap]; // canonical index -> nested index
            let mut used = vec![false; cap];
            let outer_off = |j: usize, c2: usize| -> usize {
                let mut o = 0;
                for (jj, &njj) in mid.block_dims().iter().enumerate().take(j) {
                    o += self.multiplicity[l][jj] * njj;
                }
                o + c2 * mid.block_dims()[j]
            };
            let mut can_off = 0usize;
            for (k, &nk) in src.block_dims().iter().enumerate() {
                for j in 0..km {
                    for c2 in 0..self.multiplicity[l][j] {
                        // inner offset of copies of source block k inside middle block j
                        let mut inner_off = 0;
                        for (kk, &nkk) in src.block_dims().iter().enumerate().take(k) {
                            inner_off += inner.multiplicity[j][kk] * nkk;
                        }
                        for c1 in 0..inner.multiplicity[j][k] {
                            let nested = outer_off(j, c2) + inner_off + c1 * nk;
                            for s in 0..nk {
                                perm[can_off + s] = nested + s;
                                used[nested + s] = true;
                            }
                            can_off += nk;
                        }
                    }
                }
            }
            // Route the canonical trailing pad through the unused nested slots.
            let mut spare: Vec<usize> = (0..cap).filter(|&i| !used[i]).collect();
            spare.reverse();
            for p in perm.iter_mut().skip(can_off) {
                *p = spare.pop().expect("pad slot available");
            }
            let mut pmat = CMat::zeros(cap, cap);
            for (can, &nested) in perm.iter().enumerate() {
                pmat[(nested, can)] = crate::linalg::ONE;
            }
            unitaries.push(&self.unitaries[l] * b * pmat);
        }
        StarHom::new(src.clone(), tgt.clone(), mult, unitaries)
    }

    /// Inverse of a *-isomorphism.
    pub fn invert(&self) -> Result<StarHom> {
        if !self.is_iso() {
            return Err(Error::Precondition(
                "invert: the homomorphism is not an isomorphism (multiplicity is not a unital permutation)"
                    .into(),
            ));
        }
        let ks = self.source.num_blocks();
        let mut mult = vec![vec![0usize; ks]; ks];
        let mut unitaries = vec![CMat::zeros(0, 0); ks];
        for l in 0..ks {
            let k = self.multiplicity[l].iter().position(|&m| m == 1).unwrap();
            mult[k][l] = 1;
            unitaries[k] = self.unitaries[l].adjoint();
        }
        StarHom::new(self.target.clone(), self.source.clone(), mult, unitaries)
    }

    /// Factor a raw linear map into canonical form.
    ///
    /// `raw` must act as a *-homomorphism on the source (to tolerance `tol`);
    /// multiplicities are read off the traces of the images of the minimal
    /// central projections, and each block unitary is recovered from a random
    /// intertwiner (`T = Σ raw(e_{p1}) X C(e_{1p})` intertwines the raw and
    /// canonical representations for every `X`) via its polar part.
    pub fn recognize(
        source: &FdCStarAlgebra,
        target: &FdCStarAlgebra,
        raw: &dyn Fn(&Element) -> Result<Element>,
        seed: u64,
        tol: f64,
    ) -> Result<StarHom> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let units = source.matrix_units();
        let mut images = Vec::with_capacity(units.len());
        for u in &units {
            let img = raw(u)?;
            if img.algebra() != target {
                return Err(Error::Shape("recognize: raw image in the wrong algebra".into()));
            }
            images.push(img);
        }
        // Multiplicities from images of minimal central projections.
        let (ks, kt) = (source.num_blocks(), target.num_blocks());
        let mut mult = vec![vec![0usize; ks]; kt];
        for k in 0..ks {
            let z = raw(&source.central_projection(k)?)?;
            for l in 0..kt {
                let t = z.block(l).trace();
                if t.im.abs() > 1e-6 || (t.re - t.re.round()).abs() > 1e-6 || t.re < -1e-6 {
                    return Err(Error::Precondition(format!(
                        "recognize: image of central projection {k} has non-integral trace {t} in target block {l}"
                    )));
                }
                let r = t.re.round() as usize;
                let n = source.block_dims()[k];
                if r % n != 0 {
                    return Err(Error::Precondition(format!(
                        "recognize: rank {r} of projected block is not a multiple of source dimension {n}"
                    )));
                }
                mult[l][k] = r / n;
            }
        }
        for (l, row) in mult.iter().enumerate() {
            let need: usize = row.iter().zip(source.block_dims()).map(|(&m, &n)| m * n).sum();
            if need > target.block_dims()[l] {
                return Err(Error::Precondition(format!(
                    "recognize: multiplicities overflow target block {l}"
                )));
            }
        }
        // Canonical reference hom with identity conjugators.
        let canon = StarHom::new(
            source.clone(),
            target.clone(),
            mult.clone(),
            target.block_dims().iter().map(|&n| CMat::identity(n, n)).collect(),
        )?;
        let canon_images: Vec<Element> =
            units.iter().map(|u| canon.apply(u).expect("unit")).collect();
        let unit_image = raw(&source.unit())?;

        let mut unitaries = Vec::with_capacity(kt);
        for l in 0..kt {
            let cap = target.block_dims()[l];
            let filled = canon.filled(l);
            if filled == 0 {
                unitaries.push(CMat::identity(cap, cap));
                continue;
            }
            // Orthonormal basis of the complement of the raw support
            // (eigenvectors of the image of 1 with eigenvalue ~ 0).
            let supp = unit_image.block(l);
            let tr = supp.trace().re;
            if (tr - filled as f64).abs() > 1e-6 {
                return Err(Error::Precondition(format!(
                    "recognize: support rank {tr:.3} in target block {l} does not match multiplicities ({filled})"
                )));
            }
            let (vals, vecs) = hermitian_eigen(supp);
            let comp_cols: Vec<usize> = (0..cap).filter(|&i| vals[i] < 0.5).collect();
            if comp_cols.len() != cap - filled {
                return Err(Error::Precondition(format!(
                    "recognize: image of 1 in target block {l} is not a projection"
                )));
            }
            let mut q_l = CMat::zeros(cap, cap - filled);
            for (j, &i) in comp_cols.iter().enumerate() {
                q_l.set_column(j, &vecs.column(i));
            }
            // Canonical complement: the trailing pad coordinates.
            let mut q_c = CMat::zeros(cap, cap - filled);
            for j in 0..(cap - filled) {
                q_c[(filled + j, j)] = crate::linalg::ONE;
            }
            let mut found = None;
            for _ in 0..20 {
                let x = random_complex_matrix(&mut rng, cap, cap);
                let mut t = CMat::zeros(cap, cap);
                for (k, &n) in source.block_dims().iter().enumerate() {
                    if mult[l][k] == 0 {
                        continue;
                    }
                    // offset bookkeeping for unit indices of block k
                    let base: usize =
                        source.block_dims().iter().take(k).map(|&m| m * m).sum();
                    for p in 0..n {
                        let e_p1 = base + p * n; // e^k_{p,0}
                        let e_1p = base + p; // e^k_{0,p}
                        t += images[e_p1].block(l) * &x * canon_images[e_1p].block(l);
                    }
                }
                t += &q_l * q_c.adjoint();
                if let Some(u) = polar_unitary(&t, 1e-10) {
                    let defect = units
                        .iter()
                        .enumerate()
                        .map(|(i, _)| {
                            op_norm_mat(&(
                                &u * canon_images[i].block(l) * u.adjoint() - images[i].block(l)
                            ))
                        })
                        .fold(0.0, f64::max);
                    if defect <= tol.max(1e-8) {
                        found = Some(u);
                        break;
                    }
                }
            }
            match found {
                Some(u) => unitaries.push(u),
                None => {
                    return Err(Error::Precondition(format!(
                        "recognize: no intertwining unitary found for target block {l}; raw map is not a *-homomorphism to tolerance"
                    )))
                }
            }
        }
        let hom = StarHom::new(source.clone(), target.clone(), mult, unitaries)?;
        // Full functional verification against the raw map.
        let defect = units
            .iter()
            .enumerate()
            .map(|(i, u)| hom.apply(u).unwrap().distance(&images[i]))
            .fold(0.0, f64::max);
        if defect > tol.max(1e-8) {
            return Err(Error::Precondition(format!(
                "recognize: canonical form deviates from the raw map by {defect:.3e}"
            )));
        }
        Ok(hom)
    }
}
