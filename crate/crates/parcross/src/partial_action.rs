//! Partial actions of a finite group on a multi-matrix algebra.
//!
//! A partial action `α` assigns to each group element `g` an ideal `D_g`
//! and a *-isomorphism `α_g: D_{g⁻¹} → D_g`, such that `D_e` is the whole
//! algebra, `α_e` is the identity, and `α_g ∘ α_h` agrees with `α_{gh}` on
//! its natural domain.  A global action is the special case where every
//! `D_g` is the whole algebra; restricting a global action to an ideal
//! yields a partial action, which is the main source of examples.
//!
//! Every *-isomorphism between ideals of multi-matrix algebras matches
//! blocks of equal dimension and conjugates each matched block by a
//! unitary; [`PartialIso`] stores exactly that data, which keeps domains
//! exact and inversion loss-free.

use crate::fdalg::{Element, FdCStarAlgebra, Ideal, StarHom};
use crate::groups::FiniteGroup;
use crate::linalg::{op_norm_mat, unitary_defect, CMat};
use crate::report::Report;
use crate::{Error, Result};

/// A *-isomorphism between two ideals of the same multi-matrix algebra:
/// a bijection of equal-dimension blocks plus one unitary per matched pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialIso {
    domain: Ideal,
    range: Ideal,
    /// `matching[i] = j`: the `i`-th domain block maps onto the `j`-th
    /// range block (positions within the respective block sets).
    matching: Vec<usize>,
    /// One unitary per domain position; block `x_b` maps to `U x_b U*`.
    unitaries: Vec<CMat>,
}

impl PartialIso {
    /// Structural gate for the stored unitaries.
    const UNITARY_GATE: f64 = 1e-6;

    pub fn new(
        domain: Ideal,
        range: Ideal,
        matching: Vec<usize>,
        unitaries: Vec<CMat>,
    ) -> Result<PartialIso> {
        if domain.algebra() != range.algebra() {
            return Err(Error::Shape(
                "partial iso: domain and range must be ideals of the same algebra".into(),
            ));
        }
        let n = domain.num_blocks();
        if range.num_blocks() != n || matching.len() != n || unitaries.len() != n {
            return Err(Error::Shape(format!(
                "partial iso: {} domain blocks, {} range blocks, {} matches, {} unitaries",
                n,
                range.num_blocks(),
                matching.len(),
                unitaries.len()
            )));
        }
        let mut hit = vec![false; n];
        for (i, &j) in matching.iter().enumerate() {
            if j >= n || hit[j] {
                return Err(Error::Shape("partial iso: matching is not a bijection".into()));
            }
            hit[j] = true;
            let dd = domain.algebra().block_dims()[domain.block_set()[i]];
            let rd = range.algebra().block_dims()[range.block_set()[j]];
            if dd != rd {
                return Err(Error::Shape(format!(
                    "partial iso: matched blocks have dimensions {dd} and {rd}"
                )));
            }
            let u = &unitaries[i];
            if u.nrows() != dd || u.ncols() != dd {
                return Err(Error::Shape(format!(
                    "partial iso: unitary {i} is {}×{}, block dimension is {dd}",
                    u.nrows(),
                    u.ncols()
                )));
            }
            if unitary_defect(u) > Self::UNITARY_GATE {
                return Err(Error::Precondition(format!(
                    "partial iso: matrix {i} is not unitary (defect {:.3e})",
                    unitary_defect(u)
                )));
            }
        }
        Ok(PartialIso { domain, range, matching, unitaries })
    }

    /// The identity map on an ideal.
    pub fn identity_on(ideal: &Ideal) -> PartialIso {
        let n = ideal.num_blocks();
        let unitaries = ideal
            .block_set()
            .iter()
            .map(|&k| {
                let d = ideal.algebra().block_dims()[k];
                CMat::identity(d, d)
            })
            .collect();
        PartialIso {
            domain: ideal.clone(),
            range: ideal.clone(),
            matching: (0..n).collect(),
            unitaries,
        }
    }

    pub fn domain(&self) -> &Ideal {
        &self.domain
    }

    pub fn range(&self) -> &Ideal {
        &self.range
    }

    pub fn matching(&self) -> &[usize] {
        &self.matching
    }

    pub fn unitaries(&self) -> &[CMat] {
        &self.unitaries
    }

    /// Parent-algebra block index the given parent block maps to, if it is
    /// in the domain.
    pub fn image_block(&self, parent_block: usize) -> Option<usize> {
        let pos = self.domain.block_set().iter().position(|&b| b == parent_block)?;
        Some(self.range.block_set()[self.matching[pos]])
    }

    /// Apply the map.  `x` must lie in the domain ideal to `tol`; the error
    /// names the worst offending block.
    pub fn apply(&self, x: &Element, tol: f64) -> Result<Element> {
        match self.domain.membership_defect(x) {
            None => Err(Error::Shape("partial iso: element of a different algebra".into())),
            Some(d) if d > tol => {
                let offender = (0..x.algebra().num_blocks())
                    .filter(|&k| !self.domain.contains_block(k))
                    .max_by(|&a, &b| {
                        op_norm_mat(x.block(a)).total_cmp(&op_norm_mat(x.block(b)))
                    })
                    .expect("a block outside the domain produced the defect");
                Err(Error::Domain(format!(
                    "element outside the domain ideal: block {offender} has norm {d:.3e} \
                     (tol {tol:.1e})"
                )))
            }
            Some(_) => Ok(self.apply_unchecked(x)),
        }
    }

    /// Apply the map, implicitly cutting `x` down to the domain first.
    pub fn apply_unchecked(&self, x: &Element) -> Element {
        let mut y = x.algebra().zero();
        for (i, &db) in self.domain.block_set().iter().enumerate() {
            let rb = self.range.block_set()[self.matching[i]];
            let u = &self.unitaries[i];
            *y.block_mut(rb) = u * x.block(db) * u.adjoint();
        }
        y
    }

    /// The inverse *-isomorphism (exact: inverted matching, adjoint
    /// unitaries).
    pub fn inverse(&self) -> PartialIso {
        let n = self.matching.len();
        let mut matching = vec![0usize; n];
        let mut unitaries = vec![CMat::zeros(0, 0); n];
        for (i, &j) in self.matching.iter().enumerate() {
            matching[j] = i;
            unitaries[j] = self.unitaries[i].adjoint();
        }
        PartialIso { domain: self.range.clone(), range: self.domain.clone(), matching, unitaries }
    }

    /// Pointwise difference from another map on the domain's matrix units
    /// (∞ on structural mismatch).
    pub fn map_distance(&self, other: &PartialIso) -> f64 {
        if self.domain != other.domain || self.range != other.range {
            return f64::INFINITY;
        }
        self.domain
            .matrix_units()
            .iter()
            .map(|m| self.apply_unchecked(m).distance(&other.apply_unchecked(m)))
            .fold(0.0, f64::max)
    }
}

/// A partial action: one ideal and one partial isomorphism per group
/// element, with `α_g: D_{g⁻¹} → D_g`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialAction {
    algebra: FdCStarAlgebra,
    group: FiniteGroup,
    ideals: Vec<Ideal>,
    isos: Vec<PartialIso>,
}

impl PartialAction {
    /// Assemble and structurally validate (shapes and domain/range wiring;
    /// the algebraic laws are measured by [`validate_partial_action`]).
    pub fn new(
        algebra: FdCStarAlgebra,
        group: FiniteGroup,
        ideals: Vec<Ideal>,
        isos: Vec<PartialIso>,
    ) -> Result<PartialAction> {
        let n = group.order();
        if ideals.len() != n || isos.len() != n {
            return Err(Error::Shape(format!(
                "partial action: group order {n}, got {} ideals and {} maps",
                ideals.len(),
                isos.len()
            )));
        }
        for (g, ideal) in ideals.iter().enumerate() {
            if ideal.algebra() != &algebra || isos[g].domain().algebra() != &algebra {
                return Err(Error::Shape(format!(
                    "partial action: ideal or map {g} belongs to a different algebra"
                )));
            }
        }
        // Whether each map really goes D_{g⁻¹} → D_g is a law measured by
        // `validate_partial_action` (`map_endpoints`), so that miswired
        // systems can be represented and reported rather than unbuildable.
        Ok(PartialAction { algebra, group, ideals, isos })
    }

    pub fn algebra(&self) -> &FdCStarAlgebra {
        &self.algebra
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn ideal(&self, g: usize) -> &Ideal {
        &self.ideals[g]
    }

    pub fn iso(&self, g: usize) -> &PartialIso {
        &self.isos[g]
    }

    pub fn is_global(&self) -> bool {
        self.ideals.iter().all(|d| d.is_full())
    }
}

/// Apply `α_g` to an element of `D_{g⁻¹}` (domain-checked to `tol`).
pub fn apply_partial(action: &PartialAction, g: usize, x: &Element, tol: f64) -> Result<Element> {
    action.iso(g).apply(x, tol)
}

/// Measure the partial-action laws:
///
/// - `map_endpoints`: each stored map goes `D_{g⁻¹} → D_g` (block-set
///   conditions report defect 1 when violated; the remaining law checks are
///   skipped when this one fails, since they presuppose the wiring);
/// - `identity_domain_full` / `identity_map`: `D_e` is everything and `α_e`
///   is the identity;
/// - `inverse_compatibility`: `α_{g⁻¹}` equals the inverse of `α_g` as a map;
/// - `composition_domain_containment`: `dom(α_g∘α_h) = α_h⁻¹(D_h ∩ D_{g⁻¹})`
///   is contained in `D_{(gh)⁻¹}`;
/// - `composition`: `α_g(α_h(x)) = α_{gh}(x)` on matrix units of that domain;
/// - `domain_translation`: `α_g(D_{g⁻¹} ∩ D_h) = D_g ∩ D_{gh}` as block sets.
pub fn validate_partial_action(action: &PartialAction, tol: f64) -> Report {
    let grp = action.group();
    let e = grp.identity();
    let mut report = Report::new();

    let miswired = grp.elements().any(|g| {
        action.iso(g).domain() != action.ideal(grp.inv(g))
            || action.iso(g).range() != action.ideal(g)
    });
    report.push("map_endpoints", if miswired { 1.0 } else { 0.0 }, tol);
    if miswired {
        return report;
    }

    report.push(
        "identity_domain_full",
        if action.ideal(e).is_full() { 0.0 } else { 1.0 },
        tol,
    );
    let mut id_defect: f64 = 0.0;
    for m in action.ideal(e).matrix_units() {
        id_defect = id_defect.max(action.iso(e).apply_unchecked(&m).distance(&m));
    }
    report.push("identity_map", id_defect, tol);

    for g in grp.elements() {
        report.push_max(
            "inverse_compatibility",
            action.iso(grp.inv(g)).map_distance(&action.iso(g).inverse()),
            tol,
        );
    }

    for g in grp.elements() {
        for h in grp.elements() {
            let gh = grp.mul(g, h);
            // dom(α_g∘α_h) = α_h⁻¹(D_h ∩ D_{g⁻¹}), as a set of parent blocks.
            let mid = action
                .ideal(h)
                .intersect(action.ideal(grp.inv(g)))
                .expect("ideals of one algebra");
            let inv_h = action.iso(h).inverse();
            let dom_blocks: Vec<usize> = mid
                .block_set()
                .iter()
                .map(|&b| inv_h.image_block(b).expect("block of D_h is in range of α_h"))
                .collect();
            let contained = dom_blocks
                .iter()
                .all(|&b| action.ideal(grp.inv(gh)).contains_block(b));
            report.push_max(
                "composition_domain_containment",
                if contained { 0.0 } else { 1.0 },
                tol,
            );
            if !contained {
                continue;
            }
            let mut sorted = dom_blocks.clone();
            sorted.sort_unstable();
            let dom = action
                .algebra()
                .ideal(sorted)
                .expect("image blocks are valid and distinct");
            for m in dom.matrix_units() {
                let via_h = action.iso(g).apply_unchecked(&action.iso(h).apply_unchecked(&m));
                let direct = action.iso(gh).apply_unchecked(&m);
                report.push_max("composition", via_h.distance(&direct), tol);
            }

            // α_g(D_{g⁻¹} ∩ D_h) = D_g ∩ D_{gh} as block sets.
            let lhs_src = action
                .ideal(grp.inv(g))
                .intersect(action.ideal(h))
                .expect("ideals of one algebra");
            let mut lhs: Vec<usize> = lhs_src
                .block_set()
                .iter()
                .map(|&b| action.iso(g).image_block(b).expect("block of D_{g⁻¹} maps"))
                .collect();
            lhs.sort_unstable();
            let rhs = action
                .ideal(g)
                .intersect(action.ideal(gh))
                .expect("ideals of one algebra");
            report.push_max(
                "domain_translation",
                if lhs == rhs.block_set() { 0.0 } else { 1.0 },
                tol,
            );
        }
    }
    report
}

/// A validated global action: every ideal is the whole algebra and the
/// partial-action laws hold (so `η_g ∘ η_h = η_{gh}` as total maps).
#[derive(Debug, Clone)]
pub struct GlobalAction {
    action: PartialAction,
}

impl GlobalAction {
    pub fn new(action: PartialAction, tol: f64) -> Result<GlobalAction> {
        if !action.is_global() {
            return Err(Error::Precondition(
                "global action: every domain ideal must be the whole algebra".into(),
            ));
        }
        let report = validate_partial_action(&action, tol);
        if !report.passed() {
            return Err(Error::Precondition(format!(
                "global action: action laws violated: {}",
                report.worst().expect("non-empty report")
            )));
        }
        Ok(GlobalAction { action })
    }

    pub fn action(&self) -> &PartialAction {
        &self.action
    }

    pub fn algebra(&self) -> &FdCStarAlgebra {
        self.action.algebra()
    }

    pub fn group(&self) -> &FiniteGroup {
        self.action.group()
    }

    /// Apply `η_g` (total, no domain check needed).
    pub fn apply(&self, g: usize, x: &Element) -> Element {
        self.action.iso(g).apply_unchecked(x)
    }

    /// Parent block reached from `block` under `η_g`.
    pub fn block_image(&self, g: usize, block: usize) -> usize {
        self.action.iso(g).image_block(block).expect("global maps are total")
    }
}

/// Restrict a global action on `B` to an ideal `A ⊆ B`: the partial action
/// on `A` (as an algebra in its own right) with `D_g = A ∩ η_g(A)` and
/// `α_g` the restriction of `η_g`.
pub fn restrict_global(eta: &GlobalAction, sub: &Ideal) -> Result<PartialAction> {
    if sub.algebra() != eta.algebra() {
        return Err(Error::Shape(
            "restrict_global: the ideal must belong to the acted-on algebra".into(),
        ));
    }
    let grp = eta.group().clone();
    let (small, parent_blocks) = sub.as_algebra()?;

    // Parent block set of D_g = A ∩ η_g(A), for each g.
    let domain_parent: Vec<Vec<usize>> = grp
        .elements()
        .map(|g| {
            let mut blocks: Vec<usize> = parent_blocks
                .iter()
                .map(|&b| eta.block_image(g, b))
                .filter(|&b| sub.contains_block(b))
                .collect();
            blocks.sort_unstable();
            blocks
        })
        .collect();
    let ideals: Vec<Ideal> = domain_parent
        .iter()
        .map(|blocks| {
            let local: Vec<usize> = blocks
                .iter()
                .map(|&b| parent_blocks.iter().position(|&p| p == b).expect("b ∈ A"))
                .collect();
            small.ideal(local)
        })
        .collect::<Result<_>>()?;

    let mut isos = Vec::with_capacity(grp.order());
    for g in grp.elements() {
        let domain = ideals[grp.inv(g)].clone();
        let range = ideals[g].clone();
        let mut matching = Vec::with_capacity(domain.num_blocks());
        let mut unitaries = Vec::with_capacity(domain.num_blocks());
        for (i, &db) in domain_parent[grp.inv(g)].iter().enumerate() {
            let rb = eta.block_image(g, db);
            let pos = domain_parent[g]
                .iter()
                .position(|&b| b == rb)
                .expect("η_g maps A ∩ η_{g⁻¹}(A) onto η_g(A) ∩ A");
            matching.push(pos);
            let dpos = eta
                .action()
                .iso(g)
                .domain()
                .block_set()
                .iter()
                .position(|&b| b == db)
                .expect("global domain is full");
            unitaries.push(eta.action().iso(g).unitaries()[dpos].clone());
            debug_assert_eq!(i, matching.len() - 1);
        }
        isos.push(PartialIso::new(domain, range, matching, unitaries)?);
    }
    PartialAction::new(small, grp, ideals, isos)
}

/// Measure equivariance of a *-homomorphism `φ` between the algebras of two
/// partial systems over the same group:
///
/// - `ideal_containment`: `φ(A_g) ⊆ B_g` for every `g`;
/// - `intertwining`: `φ(α_g(x)) = β_g(φ(x))` on matrix units of `A_{g⁻¹}`.
pub fn check_equivariant(
    phi: &StarHom,
    alpha: &PartialAction,
    beta: &PartialAction,
    tol: f64,
) -> Result<Report> {
    if !alpha.group().same_table(beta.group()) {
        return Err(Error::Shape("check_equivariant: different groups".into()));
    }
    if phi.source() != alpha.algebra() || phi.target() != beta.algebra() {
        return Err(Error::Shape(
            "check_equivariant: the homomorphism must map the first system's algebra \
             to the second's"
                .into(),
        ));
    }
    let mut report = Report::new();
    report.push("ideal_containment", 0.0, tol);
    report.push("intertwining", 0.0, tol);
    for g in alpha.group().elements() {
        for m in alpha.ideal(g).matrix_units() {
            let img = phi.apply(&m)?;
            let defect = beta
                .ideal(g)
                .membership_defect(&img)
                .expect("image lies in the target algebra");
            report.push_max("ideal_containment", defect, tol);
        }
        for m in alpha.ideal(alpha.group().inv(g)).matrix_units() {
            let lhs = phi.apply(&alpha.iso(g).apply_unchecked(&m))?;
            let rhs = beta.iso(g).apply_unchecked(&phi.apply(&m)?);
            report.push_max("intertwining", lhs.distance(&rhs), tol);
        }
    }
    Ok(report)
}
