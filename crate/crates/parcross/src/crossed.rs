//! The partial crossed product `A ⋊_α G` as a concrete multi-matrix algebra.
//!
//! Elements are formal sums `Σ_g a_g δ_g` with `a_g ∈ D_g`, multiplied by
//! `(aδ_g)(bδ_h) = α_g(α_{g⁻¹}(a)·b) δ_{gh}` and starred by
//! `(aδ_g)* = α_{g⁻¹}(a*) δ_{g⁻¹}`.  The conditional expectation `E` reads
//! off the coefficient at the identity.
//!
//! For a finite group the maximal C*-norm is computed through a single
//! faithful representation: the left-regular action on the inner-product
//! space `⟨x,y⟩ = τ(E(x*y))` for any faithful trace `τ` (then `τ∘E` is
//! faithful and positive, so the GNS representation is faithful and the
//! full and reduced completions agree).  A Wedderburn decomposition of the
//! represented algebra exhibits the crossed product's own multi-matrix
//! shape, which downstream modules use as its canonical coordinates.

use crate::fdalg::{wedderburn, Element, FdCStarAlgebra, StarHom, WedderburnConfig, WedderburnData};
use crate::groups::{check_partial_rep, PartialRep};
use crate::linalg::{cr, hermitian_eigen, op_norm_mat, CMat, CVec, C64};
use crate::partial_action::{check_equivariant, validate_partial_action, PartialAction};
use crate::report::Report;
use crate::traces::TraceWeights;
use crate::{Error, Result};
use std::sync::Arc;

/// Structural gate for action laws and internal representation consistency.
const BUILD_GATE: f64 = 1e-7;

/// A formal sum `Σ_g a_g δ_g` with `a_g ∈ D_g` (coefficients are validated
/// to a tolerance and then cut exactly to their ideal).
#[derive(Debug, Clone)]
pub struct CrossedElement {
    system: Arc<PartialAction>,
    coeffs: Vec<Element>,
}

impl CrossedElement {
    pub fn new(
        system: Arc<PartialAction>,
        coeffs: Vec<Element>,
        tol: f64,
    ) -> Result<CrossedElement> {
        if coeffs.len() != system.group().order() {
            return Err(Error::Shape(format!(
                "crossed element: group order {}, got {} coefficients",
                system.group().order(),
                coeffs.len()
            )));
        }
        let mut clean = Vec::with_capacity(coeffs.len());
        for (g, a) in coeffs.into_iter().enumerate() {
            let defect = system.ideal(g).membership_defect(&a).ok_or_else(|| {
                Error::Shape(format!("crossed element: coefficient {g} has the wrong algebra"))
            })?;
            if defect > tol {
                return Err(Error::Domain(format!(
                    "coefficient at {} lies outside its domain ideal: \
                     off-ideal norm {defect:.3e} (tol {tol:.1e})",
                    system.group().name(g)
                )));
            }
            clean.push(system.ideal(g).project(&a)?);
        }
        Ok(CrossedElement { system, coeffs: clean })
    }

    /// Internal constructor for arithmetic results: tolerates (and removes)
    /// numerical dust outside the ideals, relative to the coefficient scale.
    fn sanitized(system: Arc<PartialAction>, coeffs: Vec<Element>) -> Result<CrossedElement> {
        let scale = coeffs.iter().map(Element::op_norm).fold(0.0, f64::max);
        CrossedElement::new(system, coeffs, BUILD_GATE * (1.0 + scale))
    }

    pub fn zero(system: Arc<PartialAction>) -> CrossedElement {
        let coeffs = (0..system.group().order()).map(|_| system.algebra().zero()).collect();
        CrossedElement { system, coeffs }
    }

    pub fn system(&self) -> &Arc<PartialAction> {
        &self.system
    }

    pub fn coeff(&self, g: usize) -> &Element {
        &self.coeffs[g]
    }

    pub fn coeffs(&self) -> &[Element] {
        &self.coeffs
    }

    pub fn add(&self, other: &CrossedElement) -> Result<CrossedElement> {
        same_system(self, other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        Ok(CrossedElement { system: self.system.clone(), coeffs })
    }

    pub fn sub(&self, other: &CrossedElement) -> Result<CrossedElement> {
        same_system(self, other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.sub(b))
            .collect::<Result<_>>()?;
        Ok(CrossedElement { system: self.system.clone(), coeffs })
    }

    pub fn scale(&self, z: C64) -> CrossedElement {
        CrossedElement {
            system: self.system.clone(),
            coeffs: self.coeffs.iter().map(|a| a.scale(z)).collect(),
        }
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|a| a.is_zero(tol))
    }

    /// Max over group elements of the coefficient distance.
    pub fn distance(&self, other: &CrossedElement) -> f64 {
        if same_system(self, other).is_err() {
            return f64::INFINITY;
        }
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.distance(b))
            .fold(0.0, f64::max)
    }

    /// Sum of coefficient operator norms (the formal-sum bound on the norm).
    pub fn coeff_norm_sum(&self) -> f64 {
        self.coeffs.iter().map(Element::op_norm).sum()
    }
}

fn same_system(x: &CrossedElement, y: &CrossedElement) -> Result<()> {
    if Arc::ptr_eq(&x.system, &y.system) || *x.system == *y.system {
        Ok(())
    } else {
        Err(Error::Shape("crossed elements belong to different systems".into()))
    }
}

/// `(aδ_g)(bδ_h) = α_g(α_{g⁻¹}(a)·b) δ_{gh}`, extended bilinearly.  (The
/// inner pull-back makes the product well-defined for all `b`; when
/// `b ∈ D_{g⁻¹}` it agrees with `a·α_g(b) δ_{gh}`.)
pub fn cp_multiply(x: &CrossedElement, y: &CrossedElement) -> Result<CrossedElement> {
    same_system(x, y)?;
    let sys = x.system.clone();
    let grp = sys.group().clone();
    let mut out: Vec<Element> = (0..grp.order()).map(|_| sys.algebra().zero()).collect();
    for g in grp.elements() {
        if x.coeff(g).is_zero(0.0) {
            continue;
        }
        let pulled = sys.iso(grp.inv(g)).apply_unchecked(x.coeff(g));
        for h in grp.elements() {
            if y.coeff(h).is_zero(0.0) {
                continue;
            }
            let prod = pulled.mul(y.coeff(h))?;
            let term = sys.iso(g).apply_unchecked(&prod);
            let gh = grp.mul(g, h);
            out[gh] = out[gh].add(&term)?;
        }
    }
    CrossedElement::sanitized(sys, out)
}

/// `(aδ_g)* = α_{g⁻¹}(a*) δ_{g⁻¹}`, extended conjugate-linearly.
pub fn cp_adjoint(x: &CrossedElement) -> Result<CrossedElement> {
    let sys = x.system.clone();
    let grp = sys.group().clone();
    let mut out: Vec<Element> = (0..grp.order()).map(|_| sys.algebra().zero()).collect();
    for g in grp.elements() {
        let ginv = grp.inv(g);
        out[ginv] = sys.iso(ginv).apply_unchecked(&x.coeff(g).adjoint());
    }
    CrossedElement::sanitized(sys, out)
}

/// The conditional expectation `E(Σ a_g δ_g) = a_e`.
pub fn conditional_expectation(x: &CrossedElement) -> Element {
    x.coeff(x.system.group().identity()).clone()
}

/// The crossed product, concretely: enumerated basis, structure constants,
/// a faithful representation, and its Wedderburn shape.
#[derive(Debug, Clone)]
pub struct CrossedProductAlgebra {
    system: Arc<PartialAction>,
    /// Basis `(g, matrix unit of D_g)`: group elements ascending, ideal
    /// blocks in block-set order, row-major within each block.
    basis: Vec<(usize, Element)>,
    dim: usize,
    /// `left_mult[i]` has `coords(b_i·b_j)` as column `j`; these are the
    /// structure constants and simultaneously the left-regular matrices.
    left_mult: Vec<CMat>,
    /// Faithful *-representation matrices, one per basis element.
    rep: Vec<CMat>,
    /// Recovers coordinates from a represented matrix (left pseudo-inverse
    /// of the column-stacked rep basis).
    coord_pinv: CMat,
    wedderburn: WedderburnData,
}

impl CrossedProductAlgebra {
    pub fn system(&self) -> &Arc<PartialAction> {
        &self.system
    }

    /// Linear dimension `Σ_g dim D_g`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[(usize, Element)] {
        &self.basis
    }

    /// The basis as crossed elements.
    pub fn basis_elements(&self) -> Vec<CrossedElement> {
        self.basis
            .iter()
            .map(|(g, m)| {
                self.term(*g, m, 0.0).expect("basis units lie in their ideals exactly")
            })
            .collect()
    }

    /// The crossed product's own multi-matrix shape (blocks sorted
    /// descending).
    pub fn algebra(&self) -> FdCStarAlgebra {
        self.wedderburn.algebra()
    }

    pub fn block_dims(&self) -> &[usize] {
        self.wedderburn.block_dims()
    }

    pub fn wedderburn(&self) -> &WedderburnData {
        &self.wedderburn
    }

    pub fn rep(&self, i: usize) -> &CMat {
        &self.rep[i]
    }

    /// Structure constants: coordinates of `b_i · b_j`.
    pub fn structure_constants(&self, i: usize, j: usize) -> CVec {
        self.left_mult[i].column(j).into_owned()
    }

    pub fn zero(&self) -> CrossedElement {
        CrossedElement::zero(self.system.clone())
    }

    /// `a δ_g` (validated against `D_g` to `tol`).
    pub fn term(&self, g: usize, a: &Element, tol: f64) -> Result<CrossedElement> {
        let mut coeffs: Vec<Element> =
            (0..self.system.group().order()).map(|_| self.system.algebra().zero()).collect();
        coeffs[g] = a.clone();
        CrossedElement::new(self.system.clone(), coeffs, tol)
    }

    /// The embedding `a ↦ a δ_e`.
    pub fn embed(&self, a: &Element) -> Result<CrossedElement> {
        self.term(self.system.group().identity(), a, f64::INFINITY)
    }

    /// `1 δ_e`.
    pub fn unit(&self) -> Result<CrossedElement> {
        self.embed(&self.system.algebra().unit())
    }

    pub fn element(&self, coeffs: Vec<Element>, tol: f64) -> Result<CrossedElement> {
        CrossedElement::new(self.system.clone(), coeffs, tol)
    }

    /// Coordinates of `x` over the enumerated basis.
    pub fn to_coords(&self, x: &CrossedElement) -> Result<CVec> {
        if same_system(x, &self.zero()).is_err() {
            return Err(Error::Shape("element of a different crossed product".into()));
        }
        let mut v = CVec::zeros(self.dim);
        let mut off = 0;
        for g in self.system.group().elements() {
            for &blk in self.system.ideal(g).block_set() {
                let b = x.coeff(g).block(blk);
                for r in 0..b.nrows() {
                    for c in 0..b.ncols() {
                        v[off] = b[(r, c)];
                        off += 1;
                    }
                }
            }
        }
        debug_assert_eq!(off, self.dim);
        Ok(v)
    }

    pub fn from_coords(&self, v: &CVec) -> Result<CrossedElement> {
        if v.len() != self.dim {
            return Err(Error::Shape(format!(
                "crossed coordinates: expected length {}, got {}",
                self.dim,
                v.len()
            )));
        }
        let mut coeffs: Vec<Element> =
            (0..self.system.group().order()).map(|_| self.system.algebra().zero()).collect();
        let mut off = 0;
        for g in self.system.group().elements() {
            for &blk in self.system.ideal(g).block_set() {
                let n = self.system.algebra().block_dims()[blk];
                for r in 0..n {
                    for c in 0..n {
                        coeffs[g].block_mut(blk)[(r, c)] = v[off];
                        off += 1;
                    }
                }
            }
        }
        Ok(CrossedElement { system: self.system.clone(), coeffs })
    }

    /// Image of `x` in the faithful representation.
    pub fn rep_of(&self, x: &CrossedElement) -> Result<CMat> {
        Ok(self.rep_of_coords(&self.to_coords(x)?))
    }

    fn rep_of_coords(&self, v: &CVec) -> CMat {
        let mut m = CMat::zeros(self.dim, self.dim);
        for (i, mat) in self.rep.iter().enumerate() {
            m += mat * v[i];
        }
        m
    }

    /// Multi-matrix coordinates of `x` in the crossed product's own shape.
    pub fn abstract_of(&self, x: &CrossedElement) -> Result<Element> {
        self.wedderburn.to_blocks(&self.rep_of(x)?)
    }

    /// Inverse of [`Self::abstract_of`]: the crossed element with the given
    /// multi-matrix coordinates.
    pub fn element_from_abstract(&self, e: &Element) -> Result<CrossedElement> {
        let ambient = self.wedderburn.from_blocks(e)?;
        let mut stacked = CVec::zeros(self.dim * self.dim);
        for (t, z) in ambient.iter().enumerate() {
            stacked[t] = *z;
        }
        let v = &self.coord_pinv * stacked;
        self.from_coords(&v)
    }
}

/// Build the crossed product of a validated partial action, using a faithful
/// trace `τ` on the base algebra to induce the faithful representation.
pub fn build_crossed_product(
    action: &PartialAction,
    tau: &TraceWeights,
) -> Result<CrossedProductAlgebra> {
    if tau.algebra() != action.algebra() {
        return Err(Error::Shape(
            "crossed product: trace lives on a different algebra".into(),
        ));
    }
    if !tau.is_faithful() {
        return Err(Error::Precondition(
            "crossed product: the trace must be faithful (all block weights positive)".into(),
        ));
    }
    let laws = validate_partial_action(action, BUILD_GATE);
    if !laws.passed() {
        return Err(Error::Precondition(format!(
            "crossed product: partial-action laws violated: {}",
            laws.worst().expect("non-empty report")
        )));
    }

    let system = Arc::new(action.clone());
    let grp = system.group().clone();
    let mut basis = Vec::new();
    for g in grp.elements() {
        for m in system.ideal(g).matrix_units() {
            basis.push((g, m));
        }
    }
    let dim = basis.len();

    let shell = CrossedProductAlgebra {
        system: system.clone(),
        basis,
        dim,
        left_mult: Vec::new(),
        rep: Vec::new(),
        coord_pinv: CMat::zeros(0, 0),
        wedderburn: wedderburn(&[CMat::identity(1, 1)], &WedderburnConfig::default())
            .expect("trivial"),
    };
    let basis_els = shell.basis_elements();

    let mut left_mult = Vec::with_capacity(dim);
    for bi in &basis_els {
        let mut l = CMat::zeros(dim, dim);
        for (j, bj) in basis_els.iter().enumerate() {
            l.set_column(j, &shell.to_coords(&cp_multiply(bi, bj)?)?);
        }
        left_mult.push(l);
    }

    // Gram matrix of ⟨x,y⟩ = τ(E(x*y)); positive definite for faithful τ.
    let adjoints: Vec<CrossedElement> =
        basis_els.iter().map(cp_adjoint).collect::<Result<_>>()?;
    let mut gram = CMat::zeros(dim, dim);
    for (i, ai) in adjoints.iter().enumerate() {
        for (j, bj) in basis_els.iter().enumerate() {
            gram[(i, j)] = tau.eval(&conditional_expectation(&cp_multiply(ai, bj)?))?;
        }
    }
    let (gvals, gvecs) = hermitian_eigen(&gram);
    let gmax = gvals.last().copied().unwrap_or(0.0);
    if gvals.iter().any(|&v| v <= 1e-12 * gmax.max(1.0)) {
        return Err(Error::Numerical(
            "crossed product: the induced inner product is numerically degenerate".into(),
        ));
    }
    let diag = |f: &dyn Fn(f64) -> f64| {
        let mut d = CMat::zeros(dim, dim);
        for (t, &v) in gvals.iter().enumerate() {
            d[(t, t)] = cr(f(v));
        }
        &gvecs * d * gvecs.adjoint()
    };
    let sqrt = diag(&f64::sqrt);
    let sqrt_inv = diag(&|v: f64| 1.0 / v.sqrt());

    // M_i = G^{1/2} L_i G^{-1/2} orthonormalizes the left-regular action;
    // because L_{x*} = G⁻¹ L_x* G, the result is a *-representation.
    let rep: Vec<CMat> = left_mult.iter().map(|l| &sqrt * l * &sqrt_inv).collect();

    let scale = rep.iter().map(op_norm_mat).fold(0.0, f64::max);
    let mut star_defect: f64 = 0.0;
    for (i, m) in rep.iter().enumerate() {
        let adj_coords = shell.to_coords(&adjoints[i])?;
        let mut expected = CMat::zeros(dim, dim);
        for (k, r) in rep.iter().enumerate() {
            expected += r * adj_coords[k];
        }
        star_defect = star_defect.max(op_norm_mat(&(m.adjoint() - expected)));
    }
    let mut mult_defect: f64 = 0.0;
    for (i, mi) in rep.iter().enumerate() {
        for (j, mj) in rep.iter().enumerate() {
            let prod_coords = left_mult[i].column(j);
            let mut expected = CMat::zeros(dim, dim);
            for (k, r) in rep.iter().enumerate() {
                expected += r * prod_coords[k];
            }
            mult_defect = mult_defect.max(op_norm_mat(&(mi * mj - expected)));
        }
    }
    if star_defect.max(mult_defect) > BUILD_GATE * (1.0 + scale * scale) {
        return Err(Error::Numerical(format!(
            "crossed product: representation inconsistent with structure constants \
             (adjoint defect {star_defect:.3e}, product defect {mult_defect:.3e})"
        )));
    }

    let mut stacked = CMat::zeros(dim * dim, dim);
    for (i, m) in rep.iter().enumerate() {
        for (t, z) in m.iter().enumerate() {
            stacked[(t, i)] = *z;
        }
    }
    let normal = stacked.adjoint() * &stacked;
    let inv = normal.lu().try_inverse().ok_or_else(|| {
        Error::Numerical("crossed product: represented basis is linearly dependent".into())
    })?;
    let coord_pinv = inv * stacked.adjoint();

    let wed = wedderburn(&rep, &WedderburnConfig::default())?;

    Ok(CrossedProductAlgebra {
        system,
        basis: shell.basis,
        dim,
        left_mult,
        rep,
        coord_pinv,
        wedderburn: wed,
    })
}

/// The maximal C*-norm of `x`: the operator norm of its image in the stored
/// faithful representation.
pub fn universal_norm(cp: &CrossedProductAlgebra, x: &CrossedElement) -> Result<f64> {
    Ok(op_norm_mat(&cp.rep_of(x)?))
}

/// Transport an equivariant `φ: (A,α) → (B,β)` to the crossed products:
/// `a δ_g ↦ φ(a) δ_g`, returned in canonical form over the two crossed
/// products' multi-matrix coordinates.
pub fn induce_crossed_hom(
    phi: &StarHom,
    cpa: &CrossedProductAlgebra,
    cpb: &CrossedProductAlgebra,
    tol: f64,
) -> Result<StarHom> {
    let equiv = check_equivariant(phi, cpa.system(), cpb.system(), tol)?;
    if !equiv.passed() {
        return Err(Error::Precondition(format!(
            "induce_crossed_hom: φ is not equivariant: {}",
            equiv.worst().expect("non-empty report")
        )));
    }

    let induce = |x: &CrossedElement| -> Result<CrossedElement> {
        let coeffs = x
            .coeffs()
            .iter()
            .map(|a| phi.apply(a))
            .collect::<Result<Vec<_>>>()?;
        CrossedElement::sanitized(cpb.system().clone(), coeffs)
    };

    // Certify that the formal rule is a *-homomorphism on the source basis
    // before recognizing its canonical form.
    let basis = cpa.basis_elements();
    let images: Vec<CrossedElement> = basis.iter().map(&induce).collect::<Result<_>>()?;
    let mut defect: f64 = 0.0;
    for (i, bi) in basis.iter().enumerate() {
        defect = defect.max(cp_adjoint(&images[i])?.distance(&induce(&cp_adjoint(bi)?)?));
        for (j, bj) in basis.iter().enumerate() {
            let lhs = cp_multiply(&images[i], &images[j])?;
            let rhs = induce(&cp_multiply(bi, bj)?)?;
            defect = defect.max(lhs.distance(&rhs));
        }
    }
    if defect > BUILD_GATE {
        return Err(Error::Numerical(format!(
            "induce_crossed_hom: the induced map is not a *-homomorphism \
             (defect {defect:.3e})"
        )));
    }

    let raw = |x: &Element| -> Result<Element> {
        let xe = cpa.element_from_abstract(x)?;
        cpb.abstract_of(&induce(&xe)?)
    };
    StarHom::recognize(&cpa.algebra(), &cpb.algebra(), &raw, 0xC0FFEE, tol)
}

/// A covariant pair: a representation `π` of the base algebra (one matrix
/// block) and a partial representation `u` of the group on the same space.
#[derive(Debug, Clone)]
pub struct CovariantRep {
    pi: StarHom,
    u: PartialRep,
}

impl CovariantRep {
    pub fn new(pi: StarHom, u: PartialRep) -> Result<CovariantRep> {
        if pi.target().num_blocks() != 1 {
            return Err(Error::Shape(
                "covariant pair: π must represent on a single matrix block".into(),
            ));
        }
        if pi.target().block_dims()[0] != u.dim() {
            return Err(Error::Shape(format!(
                "covariant pair: π acts on dimension {}, u on {}",
                pi.target().block_dims()[0],
                u.dim()
            )));
        }
        Ok(CovariantRep { pi, u })
    }

    pub fn pi(&self) -> &StarHom {
        &self.pi
    }

    pub fn u(&self) -> &PartialRep {
        &self.u
    }

    pub fn apply_pi(&self, a: &Element) -> Result<CMat> {
        Ok(self.pi.apply(a)?.block(0).clone())
    }
}

/// Covariance of the pair w.r.t. an action: `π` is a *-homomorphism, `u` a
/// partial representation, and `u_g π(a) u_{g⁻¹} = π(α_g(a))` on `D_{g⁻¹}`.
pub fn check_covariance(
    cr_pair: &CovariantRep,
    action: &PartialAction,
    tol: f64,
) -> Result<Report> {
    if cr_pair.pi.source() != action.algebra() {
        return Err(Error::Shape(
            "covariance check: π does not represent the acted-on algebra".into(),
        ));
    }
    if !cr_pair.u.group().same_table(action.group()) {
        return Err(Error::Shape("covariance check: wrong group".into()));
    }
    let mut report = Report::new();
    report.merge("pi", cr_pair.pi.check(tol));
    report.merge("u", check_partial_rep(&cr_pair.u, tol));
    report.push("covariance", 0.0, tol);
    let grp = action.group();
    for g in grp.elements() {
        let ginv = grp.inv(g);
        for a in action.ideal(ginv).matrix_units() {
            let lhs = cr_pair.u.mat(g) * cr_pair.apply_pi(&a)? * cr_pair.u.mat(ginv);
            let rhs = cr_pair.apply_pi(&action.iso(g).apply_unchecked(&a))?;
            report.push_max("covariance", op_norm_mat(&(lhs - rhs)), tol);
        }
    }
    Ok(report)
}

/// The integrated form `π⋊u`: basis element `(g, m) ↦ π(m)·u_g`, extended
/// linearly; returns one matrix per crossed-product basis element, verified
/// against the structure constants.
pub fn integrated_form(
    cr_pair: &CovariantRep,
    cp: &CrossedProductAlgebra,
    tol: f64,
) -> Result<Vec<CMat>> {
    let cov = check_covariance(cr_pair, cp.system(), tol)?;
    if !cov.passed() {
        return Err(Error::Precondition(format!(
            "integrated form: covariance fails: {}",
            cov.worst().expect("non-empty report")
        )));
    }
    let images: Vec<CMat> = cp
        .basis()
        .iter()
        .map(|(g, m)| Ok(cr_pair.apply_pi(m)? * cr_pair.u.mat(*g)))
        .collect::<Result<_>>()?;

    let scale = images.iter().map(op_norm_mat).fold(0.0, f64::max);
    let d = cr_pair.u.dim();
    let mut defect: f64 = 0.0;
    for (i, pi_i) in images.iter().enumerate() {
        let adj_coords = cp.to_coords(&cp_adjoint(&cp.basis_elements()[i])?)?;
        let mut expected = CMat::zeros(d, d);
        for (k, im) in images.iter().enumerate() {
            expected += im * adj_coords[k];
        }
        defect = defect.max(op_norm_mat(&(pi_i.adjoint() - expected)));
        for (j, pi_j) in images.iter().enumerate() {
            let prod_coords = cp.structure_constants(i, j);
            let mut expected = CMat::zeros(d, d);
            for (k, im) in images.iter().enumerate() {
                expected += im * prod_coords[k];
            }
            defect = defect.max(op_norm_mat(&(pi_i * pi_j - expected)));
        }
    }
    if defect > (tol.max(BUILD_GATE)) * (1.0 + scale * scale) {
        return Err(Error::Numerical(format!(
            "integrated form: not a *-homomorphism (defect {defect:.3e})"
        )));
    }
    Ok(images)
}

/// The covariant pair carried by the stored faithful representation:
/// `π(a) = rep(aδ_e)` and `u_g = rep(1_{D_g} δ_g)`.  Its integrated form
/// reproduces the representation itself.
pub fn canonical_covariant_rep(cp: &CrossedProductAlgebra, tol: f64) -> Result<CovariantRep> {
    let base = cp.system().algebra().clone();
    let ambient = FdCStarAlgebra::new(vec![cp.dim()])?;
    let raw = |a: &Element| -> Result<Element> {
        let m = cp.rep_of(&cp.embed(a)?)?;
        ambient.element(vec![m])
    };
    let pi = StarHom::recognize(&base, &ambient, &raw, 0x9A7, tol)?;
    let mats = cp
        .system()
        .group()
        .elements()
        .map(|g| {
            let unit = cp.system().ideal(g).unit();
            cp.rep_of(&cp.term(g, &unit, 0.0)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let u = PartialRep::new(cp.system().group().clone(), mats)?;
    CovariantRep::new(pi, u)
}
