//! Finite-dimensional C*-algebras as multi-matrix algebras `⊕_k M_{n_k}(ℂ)`.
//!
//! An algebra is described by its block dimension vector; an element carries
//! one dense complex matrix per block; a (closed two-sided) ideal is a subset
//! of the blocks.  *-homomorphisms live in [`hom`] and the numerical
//! Wedderburn decomposition in [`wedderburn`].

mod hom;
mod wedderburn;

pub use hom::StarHom;
pub use wedderburn::{wedderburn, WedderburnConfig, WedderburnData};

use crate::linalg::{c, op_norm_mat, CMat, C64};
use crate::report::Report;
use crate::{Error, Result};

/// A multi-matrix algebra `⊕_k M_{n_k}(ℂ)`, `K ≥ 1` blocks, every `n_k ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FdCStarAlgebra {
    block_dims: Vec<usize>,
}

impl FdCStarAlgebra {
    pub fn new(block_dims: Vec<usize>) -> Result<Self> {
        if block_dims.is_empty() {
            return Err(Error::Shape("algebra needs at least one block".into()));
        }
        if block_dims.iter().any(|&n| n == 0) {
            return Err(Error::Shape("every block dimension must be >= 1".into()));
        }
        Ok(FdCStarAlgebra { block_dims })
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.block_dims
    }

    /// Number of blocks `K`.
    pub fn num_blocks(&self) -> usize {
        self.block_dims.len()
    }

    /// Linear dimension `Σ_k n_k²`.
    pub fn dim(&self) -> usize {
        self.block_dims.iter().map(|n| n * n).sum()
    }

    /// Dimension `Σ_k n_k` of the direct-sum representation space.
    pub fn rep_dim(&self) -> usize {
        self.block_dims.iter().sum()
    }

    pub fn zero(&self) -> Element {
        Element {
            algebra: self.clone(),
            blocks: self.block_dims.iter().map(|&n| CMat::zeros(n, n)).collect(),
        }
    }

    pub fn unit(&self) -> Element {
        Element {
            algebra: self.clone(),
            blocks: self.block_dims.iter().map(|&n| CMat::identity(n, n)).collect(),
        }
    }

    /// The identity of block `k`: a minimal central projection.
    pub fn central_projection(&self, k: usize) -> Result<Element> {
        if k >= self.num_blocks() {
            return Err(Error::Shape(format!("central_projection: no block {k}")));
        }
        let mut e = self.zero();
        e.blocks[k] = CMat::identity(self.block_dims[k], self.block_dims[k]);
        Ok(e)
    }

    /// Matrix units in canonical order: blocks ascending, row-major inside
    /// each block.  This order also fixes coordinate vectors ([`Element::coords`]).
    pub fn matrix_units(&self) -> Vec<Element> {
        let mut out = Vec::with_capacity(self.dim());
        for (k, &n) in self.block_dims.iter().enumerate() {
            for r in 0..n {
                for cix in 0..n {
                    let mut e = self.zero();
                    e.blocks[k][(r, cix)] = c(1.0, 0.0);
                    out.push(e);
                }
            }
        }
        out
    }

    /// Build an element from per-block matrices.
    pub fn element(&self, blocks: Vec<CMat>) -> Result<Element> {
        if blocks.len() != self.num_blocks() {
            return Err(Error::Shape(format!(
                "element: got {} blocks, algebra has {}",
                blocks.len(),
                self.num_blocks()
            )));
        }
        for (k, (b, &n)) in blocks.iter().zip(&self.block_dims).enumerate() {
            if b.nrows() != n || b.ncols() != n {
                return Err(Error::Shape(format!(
                    "element: block {k} is {}x{}, expected {n}x{n}",
                    b.nrows(),
                    b.ncols()
                )));
            }
        }
        Ok(Element { algebra: self.clone(), blocks })
    }

    /// Element with the given diagonal entries, one scalar per 1-dimensional
    /// block; handy for commutative fixtures like `ℂ ⊕ ℂ`.
    pub fn diagonal_element(&self, entries: &[C64]) -> Result<Element> {
        if entries.len() != self.num_blocks() || self.block_dims.iter().any(|&n| n != 1) {
            return Err(Error::Shape(
                "diagonal_element requires one entry per 1-dimensional block".into(),
            ));
        }
        self.element(entries.iter().map(|&z| CMat::from_element(1, 1, z)).collect())
    }

    pub fn ideal(&self, block_set: Vec<usize>) -> Result<Ideal> {
        Ideal::new(self.clone(), block_set)
    }

    pub fn full_ideal(&self) -> Ideal {
        Ideal { algebra: self.clone(), block_set: (0..self.num_blocks()).collect() }
    }

    pub fn zero_ideal(&self) -> Ideal {
        Ideal { algebra: self.clone(), block_set: Vec::new() }
    }

    /// Reconstruct an element from its coordinate vector (canonical
    /// matrix-unit order).
    pub fn from_coords(&self, coords: &[C64]) -> Result<Element> {
        if coords.len() != self.dim() {
            return Err(Error::Shape(format!(
                "from_coords: got {} coordinates, algebra dimension is {}",
                coords.len(),
                self.dim()
            )));
        }
        let mut e = self.zero();
        let mut i = 0;
        for (k, &n) in self.block_dims.iter().enumerate() {
            for r in 0..n {
                for cix in 0..n {
                    e.blocks[k][(r, cix)] = coords[i];
                    i += 1;
                }
            }
        }
        Ok(e)
    }
}

/// An element of a multi-matrix algebra: one matrix per block.
#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    algebra: FdCStarAlgebra,
    blocks: Vec<CMat>,
}

impl Element {
    pub fn algebra(&self) -> &FdCStarAlgebra {
        &self.algebra
    }

    pub fn blocks(&self) -> &[CMat] {
        &self.blocks
    }

    pub fn block(&self, k: usize) -> &CMat {
        &self.blocks[k]
    }

    pub fn block_mut(&mut self, k: usize) -> &mut CMat {
        &mut self.blocks[k]
    }

    fn same_algebra(&self, other: &Element, what: &str) -> Result<()> {
        if self.algebra != other.algebra {
            return Err(Error::Shape(format!(
                "{what}: elements of different algebras {:?} vs {:?}",
                self.algebra.block_dims, other.algebra.block_dims
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.same_algebra(other, "add")?;
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| a + b).collect();
        Ok(Element { algebra: self.algebra.clone(), blocks })
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.same_algebra(other, "sub")?;
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| a - b).collect();
        Ok(Element { algebra: self.algebra.clone(), blocks })
    }

    pub fn mul(&self, other: &Element) -> Result<Element> {
        self.same_algebra(other, "mul")?;
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| a * b).collect();
        Ok(Element { algebra: self.algebra.clone(), blocks })
    }

    pub fn scale(&self, z: C64) -> Element {
        Element {
            algebra: self.algebra.clone(),
            blocks: self.blocks.iter().map(|b| b * z).collect(),
        }
    }

    pub fn adjoint(&self) -> Element {
        Element {
            algebra: self.algebra.clone(),
            blocks: self.blocks.iter().map(|b| b.adjoint()).collect(),
        }
    }

    /// C*-norm: the largest singular value over the blocks.
    pub fn op_norm(&self) -> f64 {
        self.blocks.iter().map(op_norm_mat).fold(0.0, f64::max)
    }

    /// `Σ_k tr(x_k)` (unweighted trace).
    pub fn trace(&self) -> C64 {
        self.blocks.iter().map(|b| b.trace()).sum()
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.op_norm() <= tol
    }

    pub fn approx_eq(&self, other: &Element, tol: f64) -> bool {
        match self.sub(other) {
            Ok(d) => d.op_norm() <= tol,
            Err(_) => false,
        }
    }

    /// Distance in the C*-norm; infinite for algebra mismatches.
    pub fn distance(&self, other: &Element) -> f64 {
        match self.sub(other) {
            Ok(d) => d.op_norm(),
            Err(_) => f64::INFINITY,
        }
    }

    pub fn is_self_adjoint(&self, tol: f64) -> bool {
        self.distance(&self.adjoint()) <= tol
    }

    /// Coordinates in canonical matrix-unit order (blocks ascending,
    /// row-major within each block).
    pub fn coords(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.algebra.dim());
        for b in &self.blocks {
            for r in 0..b.nrows() {
                for cix in 0..b.ncols() {
                    out.push(b[(r, cix)]);
                }
            }
        }
        out
    }

    /// Eigenvalue range over all blocks (self-adjoint elements).
    pub fn spectrum_bounds(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for b in &self.blocks {
            if b.nrows() == 0 {
                continue;
            }
            let (vals, _) = crate::linalg::hermitian_eigen(b);
            lo = lo.min(vals[0]);
            hi = hi.max(*vals.last().unwrap());
        }
        if lo > hi {
            (0.0, 0.0)
        } else {
            (lo, hi)
        }
    }
}

/// A two-sided ideal: the direct sum of the blocks in `block_set`
/// (strictly increasing indices).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ideal {
    algebra: FdCStarAlgebra,
    block_set: Vec<usize>,
}

impl Ideal {
    pub fn new(algebra: FdCStarAlgebra, block_set: Vec<usize>) -> Result<Self> {
        if block_set.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Shape("ideal block set must be strictly increasing".into()));
        }
        if let Some(&b) = block_set.last() {
            if b >= algebra.num_blocks() {
                return Err(Error::Shape(format!(
                    "ideal block {b} out of range (algebra has {} blocks)",
                    algebra.num_blocks()
                )));
            }
        }
        Ok(Ideal { algebra, block_set })
    }

    pub fn algebra(&self) -> &FdCStarAlgebra {
        &self.algebra
    }

    pub fn block_set(&self) -> &[usize] {
        &self.block_set
    }

    pub fn num_blocks(&self) -> usize {
        self.block_set.len()
    }

    /// Linear dimension `Σ_{k ∈ block_set} n_k²`.
    pub fn dim(&self) -> usize {
        self.block_set.iter().map(|&k| self.algebra.block_dims[k].pow(2)).sum()
    }

    pub fn is_full(&self) -> bool {
        self.block_set.len() == self.algebra.num_blocks()
    }

    pub fn is_zero(&self) -> bool {
        self.block_set.is_empty()
    }

    pub fn contains_block(&self, k: usize) -> bool {
        self.block_set.binary_search(&k).is_ok()
    }

    /// Membership to tolerance: blocks outside `block_set` vanish in norm.
    pub fn contains(&self, x: &Element, tol: f64) -> bool {
        self.membership_defect(x).map(|d| d <= tol).unwrap_or(false)
    }

    /// Largest norm of a block of `x` outside the ideal (`None` on algebra
    /// mismatch).
    pub fn membership_defect(&self, x: &Element) -> Option<f64> {
        if x.algebra != self.algebra {
            return None;
        }
        let mut worst: f64 = 0.0;
        for (k, b) in x.blocks.iter().enumerate() {
            if !self.contains_block(k) {
                worst = worst.max(op_norm_mat(b));
            }
        }
        Some(worst)
    }

    /// Unit of the ideal: identity on the member blocks, zero elsewhere.
    pub fn unit(&self) -> Element {
        let mut e = self.algebra.zero();
        for &k in &self.block_set {
            let n = self.algebra.block_dims[k];
            e.blocks[k] = CMat::identity(n, n);
        }
        e
    }

    /// Cut an element down to the ideal (zero all blocks outside).
    pub fn project(&self, x: &Element) -> Result<Element> {
        if x.algebra != self.algebra {
            return Err(Error::Shape("project: element of a different algebra".into()));
        }
        let mut y = x.clone();
        for (k, b) in y.blocks.iter_mut().enumerate() {
            if !self.contains_block(k) {
                *b = CMat::zeros(b.nrows(), b.ncols());
            }
        }
        Ok(y)
    }

    /// Matrix units of the member blocks (canonical order).
    pub fn matrix_units(&self) -> Vec<Element> {
        let mut out = Vec::with_capacity(self.dim());
        for &k in &self.block_set {
            let n = self.algebra.block_dims[k];
            for r in 0..n {
                for cix in 0..n {
                    let mut e = self.algebra.zero();
                    e.blocks[k][(r, cix)] = c(1.0, 0.0);
                    out.push(e);
                }
            }
        }
        out
    }

    pub fn intersect(&self, other: &Ideal) -> Result<Ideal> {
        if self.algebra != other.algebra {
            return Err(Error::Shape("intersect: ideals of different algebras".into()));
        }
        let set: Vec<usize> =
            self.block_set.iter().copied().filter(|&k| other.contains_block(k)).collect();
        Ideal::new(self.algebra.clone(), set)
    }

    pub fn union(&self, other: &Ideal) -> Result<Ideal> {
        if self.algebra != other.algebra {
            return Err(Error::Shape("union: ideals of different algebras".into()));
        }
        let mut set = self.block_set.clone();
        for &k in &other.block_set {
            if !set.contains(&k) {
                set.push(k);
            }
        }
        set.sort_unstable();
        Ideal::new(self.algebra.clone(), set)
    }

    /// View the ideal as a multi-matrix algebra in its own right, together
    /// with the map `position in the sub-algebra -> parent block index`.
    pub fn as_algebra(&self) -> Result<(FdCStarAlgebra, Vec<usize>)> {
        if self.block_set.is_empty() {
            return Err(Error::Shape("zero ideal has no algebra presentation".into()));
        }
        let dims = self.block_set.iter().map(|&k| self.algebra.block_dims[k]).collect();
        Ok((FdCStarAlgebra::new(dims)?, self.block_set.clone()))
    }

    /// Inject an element of the sub-algebra presentation back into the parent.
    pub fn inject(&self, sub: &Element) -> Result<Element> {
        let (alg, map) = self.as_algebra()?;
        if sub.algebra != alg {
            return Err(Error::Shape("inject: element not in the ideal's sub-algebra".into()));
        }
        let mut out = self.algebra.zero();
        for (pos, &k) in map.iter().enumerate() {
            out.blocks[k] = sub.blocks[pos].clone();
        }
        Ok(out)
    }

    /// Extract the sub-algebra presentation of a member element.
    pub fn extract(&self, x: &Element, tol: f64) -> Result<Element> {
        let defect = self
            .membership_defect(x)
            .ok_or_else(|| Error::Shape("extract: element of a different algebra".into()))?;
        if defect > tol {
            return Err(Error::Domain(format!(
                "extract: element has norm {defect:.3e} outside the ideal"
            )));
        }
        let (alg, map) = self.as_algebra()?;
        let blocks = map.iter().map(|&k| x.blocks[k].clone()).collect();
        alg.element(blocks)
    }

    /// The inclusion of the ideal's sub-algebra presentation into the parent,
    /// as a canonical *-homomorphism.
    pub fn inclusion_hom(&self) -> Result<StarHom> {
        let (sub, map) = self.as_algebra()?;
        let kt = self.algebra.num_blocks();
        let ks = sub.num_blocks();
        let mut mult = vec![vec![0usize; ks]; kt];
        for (pos, &k) in map.iter().enumerate() {
            mult[k][pos] = 1;
        }
        let unitaries = self
            .algebra
            .block_dims
            .iter()
            .map(|&n| CMat::identity(n, n))
            .collect();
        StarHom::new(sub, self.algebra.clone(), mult, unitaries)
    }
}

/// The *-homomorphism `A → A` that zeroes every block outside the ideal.
///
/// Its image is the ideal, viewed inside the same algebra.
pub fn ideal_projection(ideal: &Ideal) -> StarHom {
    let alg = ideal.algebra().clone();
    let k = alg.num_blocks();
    let mut mult = vec![vec![0usize; k]; k];
    for &b in ideal.block_set() {
        mult[b][b] = 1;
    }
    let unitaries = alg.block_dims().iter().map(|&n| CMat::identity(n, n)).collect();
    StarHom::new(alg.clone(), alg, mult, unitaries).expect("ideal projection is always well-formed")
}

/// Numerical sanity report for an element claimed to be a positive
/// contraction: self-adjointness and spectrum within `[0, 1]`.
pub fn positive_contraction_report(x: &Element, tol: f64) -> Report {
    let mut r = Report::new();
    r.push("self_adjoint", x.distance(&x.adjoint()), tol);
    let (lo, hi) = x.spectrum_bounds();
    r.push("spectrum_above_zero", (-lo).max(0.0), tol);
    r.push("spectrum_below_one", (hi - 1.0).max(0.0), tol);
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{cr, random_complex_matrix, ZERO};
    use crate::DEFAULT_TOL;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn m2_plus_c() -> FdCStarAlgebra {
        FdCStarAlgebra::new(vec![2, 1]).unwrap()
    }

    fn random_element<R: rand::Rng>(rng: &mut R, a: &FdCStarAlgebra) -> Element {
        a.element(a.block_dims().iter().map(|&n| random_complex_matrix(rng, n, n)).collect())
            .unwrap()
    }

    #[test]
    fn algebra_validation() {
        assert!(FdCStarAlgebra::new(vec![]).is_err());
        assert!(FdCStarAlgebra::new(vec![2, 0]).is_err());
        let a = m2_plus_c();
        assert_eq!(a.dim(), 5);
        assert_eq!(a.rep_dim(), 3);
        assert_eq!(a.matrix_units().len(), 5);
    }

    #[test]
    fn op_norm_on_m2_plus_c() {
        // x = ([[0,2],[0,0]], [3]) has op_norm 3.
        let a = m2_plus_c();
        let x = a
            .element(vec![
                CMat::from_row_slice(2, 2, &[ZERO, cr(2.0), ZERO, ZERO]),
                CMat::from_element(1, 1, cr(3.0)),
            ])
            .unwrap();
        assert!((x.op_norm() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn arithmetic_respects_blocks_and_rejects_mismatch() {
        let a = m2_plus_c();
        let b = FdCStarAlgebra::new(vec![2]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let x = random_element(&mut rng, &a);
        let y = random_element(&mut rng, &a);
        let z = b.unit();
        assert!(matches!(x.mul(&z), Err(Error::Shape(_))));
        assert!(matches!(x.add(&z), Err(Error::Shape(_))));
        let xy = x.mul(&y).unwrap();
        for k in 0..2 {
            assert!((xy.block(k) - x.block(k) * y.block(k)).norm() < 1e-12);
        }
        // adjoint is an anti-homomorphism
        let lhs = xy.adjoint();
        let rhs = y.adjoint().mul(&x.adjoint()).unwrap();
        assert!(lhs.approx_eq(&rhs, 1e-12));
    }

    #[test]
    fn cstar_identity_on_random_elements() {
        let a = FdCStarAlgebra::new(vec![3, 1, 2]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let x = random_element(&mut rng, &a);
            let n1 = x.adjoint().mul(&x).unwrap().op_norm();
            let n2 = x.op_norm().powi(2);
            assert!((n1 - n2).abs() <= 1e-9 * n2.max(1.0), "C* identity violated: {n1} vs {n2}");
        }
    }

    #[test]
    fn coords_round_trip() {
        let a = FdCStarAlgebra::new(vec![2, 3]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let x = random_element(&mut rng, &a);
        let back = a.from_coords(&x.coords()).unwrap();
        assert_eq!(x, back);
    }

    #[test]
    fn ideal_membership_and_absorption() {
        let a = m2_plus_c();
        let ideal = a.ideal(vec![0]).unwrap();
        assert_eq!(ideal.dim(), 4);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..25 {
            let x = random_element(&mut rng, &a);
            let d = ideal.project(&x).unwrap();
            assert!(ideal.contains(&d, 1e-12));
            // absorption: A·D and D·A stay in D
            assert!(ideal.contains(&x.mul(&d).unwrap(), 1e-12));
            assert!(ideal.contains(&d.mul(&x).unwrap(), 1e-12));
        }
        // the unit of A is not in the proper ideal
        assert!(!ideal.contains(&a.unit(), 0.5));
        assert_eq!(ideal.membership_defect(&a.unit()), Some(1.0));
    }

    #[test]
    fn ideal_validation_rules() {
        let a = m2_plus_c();
        assert!(a.ideal(vec![1, 0]).is_err());
        assert!(a.ideal(vec![0, 0]).is_err());
        assert!(a.ideal(vec![2]).is_err());
        assert!(a.ideal(vec![]).unwrap().is_zero());
        assert!(a.full_ideal().is_full());
    }

    #[test]
    fn ideal_sub_algebra_round_trip() {
        let a = FdCStarAlgebra::new(vec![2, 1, 3]).unwrap();
        let ideal = a.ideal(vec![0, 2]).unwrap();
        let (sub, map) = ideal.as_algebra().unwrap();
        assert_eq!(sub.block_dims(), &[2, 3]);
        assert_eq!(map, vec![0, 2]);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let s = sub
            .element(vec![random_complex_matrix(&mut rng, 2, 2), random_complex_matrix(&mut rng, 3, 3)])
            .unwrap();
        let parent = ideal.inject(&s).unwrap();
        assert!(ideal.contains(&parent, 0.0));
        let back = ideal.extract(&parent, 1e-12).unwrap();
        assert_eq!(back, s);
        // extraction of a non-member fails with a domain error
        assert!(matches!(ideal.extract(&a.unit(), 1e-9), Err(Error::Domain(_))));
    }

    #[test]
    fn ideal_projection_zeroes_outside_blocks() {
        let a = m2_plus_c();
        let ideal = a.ideal(vec![1]).unwrap();
        let proj = ideal_projection(&ideal);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let x = random_element(&mut rng, &a);
        let y = proj.apply(&x).unwrap();
        assert!(y.block(0).norm() < 1e-15);
        assert_eq!(y.block(1), x.block(1));
        // surjective onto the ideal: the image of the ideal's units spans it
        let units = ideal.matrix_units();
        for u in &units {
            assert!(proj.apply(u).unwrap().approx_eq(u, 1e-15));
        }
        assert!(!proj.is_unital());
        assert!(ideal_projection(&a.full_ideal()).is_unital());
    }

    #[test]
    fn positive_contraction_checks() {
        let a = FdCStarAlgebra::new(vec![1, 1]).unwrap();
        let good = a.diagonal_element(&[cr(0.3), cr(1.0)]).unwrap();
        assert!(positive_contraction_report(&good, DEFAULT_TOL).passed());
        let bad = a.diagonal_element(&[cr(-0.2), cr(0.5)]).unwrap();
        let rep = positive_contraction_report(&bad, DEFAULT_TOL);
        assert!(!rep.passed());
        assert!((rep.defect_of("spectrum_above_zero").unwrap() - 0.2).abs() < 1e-12);
    }
}
