//! Inductive sequences of partial dynamical systems, their stage-wise
//! limits, and Bratteli bookkeeping.
//!
//! Everything here uses finite truncation semantics: a sequence is a finite
//! list of stages and connecting maps, and "the limit" always means a
//! concrete stage.  When the tail is marked stabilized — every connecting
//! map from some index on is an isomorphism — the stabilized stage is an
//! exact finite surrogate for the limit, and the limit statements (the
//! coherence equations of the limit action, the crossed-product limit
//! theorem) become finitely checkable identities.  Without that marker only
//! diagram-level bookkeeping is offered.

use crate::crossed::{build_crossed_product, induce_crossed_hom, CrossedElement, CrossedProductAlgebra};
use crate::fdalg::StarHom;
use crate::partial_action::{check_equivariant, validate_partial_action, PartialAction};
use crate::report::Report;
use crate::traces::TraceWeights;
use crate::{Error, Result};
use std::sync::Arc;

/// What the sequence asserts about its end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tail {
    /// Every connecting map with index `≥ from` is an isomorphism, so the
    /// stage at `from` (and any later stage) realizes the limit exactly.
    Stabilized { from: usize },
    /// A plain finite truncation; no limit claims are certified.
    Truncated,
}

/// A finite inductive sequence of partial dynamical systems over one group:
/// stages `(A⁽ⁱ⁾, G, α⁽ⁱ⁾)` and connecting *-homomorphisms
/// `φ_i: A⁽ⁱ⁾ → A⁽ⁱ⁺¹⁾`, each expected to be equivariant.
#[derive(Debug, Clone)]
pub struct InductiveSystem {
    stages: Vec<PartialAction>,
    maps: Vec<StarHom>,
    tail: Tail,
}

impl InductiveSystem {
    /// Shape-validates the chain (algebra endpoints, shared group, index
    /// bounds); the algebraic laws are the business of
    /// [`validate_inductive_system`].
    pub fn new(stages: Vec<PartialAction>, maps: Vec<StarHom>, tail: Tail) -> Result<Self> {
        if stages.len() < 2 {
            return Err(Error::Shape(format!(
                "inductive system needs at least 2 stages, got {}",
                stages.len()
            )));
        }
        if maps.len() + 1 != stages.len() {
            return Err(Error::Shape(format!(
                "inductive system: {} stages need {} connecting maps, got {}",
                stages.len(),
                stages.len() - 1,
                maps.len()
            )));
        }
        for (i, stage) in stages.iter().enumerate().skip(1) {
            if !stage.group().same_table(stages[0].group()) {
                return Err(Error::Shape(format!(
                    "inductive system: stage {i} acts by a different group"
                )));
            }
        }
        for (i, map) in maps.iter().enumerate() {
            if map.source() != stages[i].algebra() || map.target() != stages[i + 1].algebra() {
                return Err(Error::Shape(format!(
                    "inductive system: map {i} does not connect stage {i} to stage {}",
                    i + 1
                )));
            }
        }
        if let Tail::Stabilized { from } = tail {
            if from >= stages.len() {
                return Err(Error::Shape(format!(
                    "inductive system: stabilization index {from} exceeds the last stage {}",
                    stages.len() - 1
                )));
            }
        }
        Ok(InductiveSystem { stages, maps, tail })
    }

    pub fn num_stages(&self) -> usize {
        self.stages.len()
    }

    pub fn stage(&self, i: usize) -> &PartialAction {
        &self.stages[i]
    }

    pub fn stages(&self) -> &[PartialAction] {
        &self.stages
    }

    /// The connecting map `φ_i: A⁽ⁱ⁾ → A⁽ⁱ⁺¹⁾`.
    pub fn map(&self, i: usize) -> &StarHom {
        &self.maps[i]
    }

    pub fn maps(&self) -> &[StarHom] {
        &self.maps
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    pub fn stabilized_from(&self) -> Option<usize> {
        match self.tail {
            Tail::Stabilized { from } => Some(from),
            Tail::Truncated => None,
        }
    }

    /// Errs unless stage `n` exists and sits in the stabilized range, i.e.
    /// stage `n` is certified to realize the limit.
    pub fn require_stabilized_by(&self, n: usize) -> Result<()> {
        if n >= self.num_stages() {
            return Err(Error::Shape(format!(
                "stage {n} out of range: {} stages",
                self.num_stages()
            )));
        }
        match self.tail {
            Tail::Stabilized { from } if n >= from => Ok(()),
            Tail::Stabilized { from } => Err(Error::Precondition(format!(
                "stage {n} precedes the stabilization index {from}"
            ))),
            Tail::Truncated => Err(Error::Precondition(
                "the sequence is a plain truncation; no stage realizes the limit".into(),
            )),
        }
    }

    /// The composite `μ_{i,j} = φ_{j−1}∘…∘φ_i` in canonical form
    /// (`μ_{i,i} = id`).
    pub fn stage_map(&self, i: usize, j: usize) -> Result<StarHom> {
        if i > j || j >= self.num_stages() {
            return Err(Error::Shape(format!(
                "stage_map: need i ≤ j < {}, got i = {i}, j = {j}",
                self.num_stages()
            )));
        }
        let mut mu = StarHom::identity(self.stages[i].algebra());
        for k in i..j {
            mu = self.maps[k].compose(&mu)?;
        }
        Ok(mu)
    }

    /// The crossed product of stage `i` (built with the normalized trace;
    /// the shape is trace-independent).
    pub fn crossed_stage(&self, i: usize) -> Result<CrossedProductAlgebra> {
        if i >= self.num_stages() {
            return Err(Error::Shape(format!(
                "stage {i} out of range: {} stages",
                self.num_stages()
            )));
        }
        let tau = TraceWeights::uniform(self.stages[i].algebra());
        build_crossed_product(&self.stages[i], &tau)
    }

    /// The images in the stage-`n` crossed product of the stage-`i` crossed
    /// basis under the transported map `a δ_g ↦ μ_{i,n}(a) δ_g` (same basis
    /// order as [`Self::crossed_stage`]`(i)`).
    pub fn crossed_map_elements(&self, i: usize, n: usize) -> Result<Vec<CrossedElement>> {
        let mu = self.stage_map(i, n)?;
        let source = &self.stages[i];
        let target = Arc::new(self.stages[n].clone());
        let order = source.group().order();
        let mut out = Vec::new();
        for g in source.group().elements() {
            for m in source.ideal(g).matrix_units() {
                let mut coeffs: Vec<_> =
                    (0..order).map(|_| self.stages[n].algebra().zero()).collect();
                coeffs[g] = mu.apply(&m)?;
                out.push(CrossedElement::new(target.clone(), coeffs, 1e-7)?);
            }
        }
        Ok(out)
    }
}

/// Stage actions obey the partial-action laws, every connecting map is a
/// *-homomorphism and equivariant, and (for a stabilized tail) the asserted
/// maps are isomorphisms.
pub fn validate_inductive_system(sys: &InductiveSystem, tol: f64) -> Report {
    let mut report = Report::new();
    for (i, stage) in sys.stages().iter().enumerate() {
        report.merge(&format!("stage{i}"), validate_partial_action(stage, tol));
    }
    for (i, map) in sys.maps().iter().enumerate() {
        report.merge(&format!("map{i}"), map.check(tol));
        let equiv = check_equivariant(map, sys.stage(i), sys.stage(i + 1), tol)
            .expect("endpoints were shape-checked at construction");
        report.merge(&format!("map{i}_equivariance"), equiv);
    }
    if let Tail::Stabilized { from } = sys.tail() {
        for i in from..sys.maps().len() {
            report.push(
                format!("map{i}_iso"),
                if sys.map(i).is_iso() { 0.0 } else { 1.0 },
                tol,
            );
        }
    }
    report
}

/// The stage-`n` action as the truncation surrogate for the limit, with the
/// defining coherence report:
///
/// - `stage{i}_ideal_containment`: `μ_{i,n}(D_g⁽ⁱ⁾) ⊆ D_g⁽ⁿ⁾`;
/// - `stage{i}_coherence`: `α_g⁽ⁿ⁾(μ_{i,n}(a)) = μ_{i,n}(α_g⁽ⁱ⁾(a))` on the
///   matrix units of each `D_{g⁻¹}⁽ⁱ⁾`;
/// - `stage{i}_ideal_spans` (stabilized range only): the transported ideals
///   span `D_g⁽ⁿ⁾`, i.e. their dimensions agree;
/// - `uniqueness` (when the previous map is an asserted isomorphism): the
///   action transported from stage `n−1` agrees with stage `n`'s action on
///   matrix units — any two actions satisfying the coherence equations
///   coincide.
pub fn limit_stage_system(
    sys: &InductiveSystem,
    n: usize,
    tol: f64,
) -> Result<(PartialAction, Report)> {
    if n >= sys.num_stages() {
        return Err(Error::Shape(format!(
            "stage {n} out of range: {} stages",
            sys.num_stages()
        )));
    }
    let limit = sys.stage(n).clone();
    let grp = limit.group().clone();
    let mut report = Report::new();
    for i in 0..=n {
        let mu = sys.stage_map(i, n)?;
        let stage = sys.stage(i);
        let mut containment: f64 = 0.0;
        let mut coherence: f64 = 0.0;
        for g in grp.elements() {
            for u in stage.ideal(g).matrix_units() {
                let image = mu.apply(&u)?;
                let defect = limit
                    .ideal(g)
                    .membership_defect(&image)
                    .expect("map lands in the stage-n algebra");
                containment = containment.max(defect);
            }
            let ginv = grp.inv(g);
            for a in stage.ideal(ginv).matrix_units() {
                let via_limit = limit
                    .iso(g)
                    .apply_unchecked(&limit.ideal(ginv).project(&mu.apply(&a)?)?);
                let via_stage = mu.apply(&stage.iso(g).apply_unchecked(&a))?;
                coherence = coherence.max(via_limit.distance(&via_stage));
            }
        }
        report.push(format!("stage{i}_ideal_containment"), containment, tol);
        report.push(format!("stage{i}_coherence"), coherence, tol);
    }
    if let Tail::Stabilized { from } = sys.tail() {
        if n >= from {
            for i in from..=n {
                let spans = grp
                    .elements()
                    .map(|g| {
                        (sys.stage(i).ideal(g).dim() as f64 - limit.ideal(g).dim() as f64).abs()
                    })
                    .fold(0.0, f64::max);
                report.push(format!("stage{i}_ideal_spans"), spans, tol);
            }
            if n > from {
                let phi = sys.map(n - 1);
                let inv = phi.invert()?;
                let prev = sys.stage(n - 1);
                let mut uniqueness: f64 = 0.0;
                for g in grp.elements() {
                    let ginv = grp.inv(g);
                    for a in limit.ideal(ginv).matrix_units() {
                        let pulled = prev.ideal(ginv).project(&inv.apply(&a)?)?;
                        let transported = phi.apply(&prev.iso(g).apply_unchecked(&pulled))?;
                        let direct = limit.iso(g).apply_unchecked(&a);
                        uniqueness = uniqueness.max(transported.distance(&direct));
                    }
                }
                report.push("uniqueness", uniqueness, tol);
            }
        }
    }
    Ok((limit, report))
}

/// Levels of block-dimension vectors chained by nonnegative-integer
/// multiplicity matrices: the combinatorial skeleton of an inductive limit
/// of multi-matrix algebras.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BratteliDiagram {
    levels: Vec<Vec<usize>>,
    edges: Vec<Vec<Vec<usize>>>,
}

impl BratteliDiagram {
    /// Validates the chain: `edges[i]` must be a `levels[i+1] × levels[i]`
    /// matrix.
    pub fn new(levels: Vec<Vec<usize>>, edges: Vec<Vec<Vec<usize>>>) -> Result<BratteliDiagram> {
        if levels.is_empty() {
            return Err(Error::Shape("Bratteli diagram needs at least one level".into()));
        }
        if edges.len() + 1 != levels.len() {
            return Err(Error::Shape(format!(
                "Bratteli diagram: {} levels need {} edge matrices, got {}",
                levels.len(),
                levels.len() - 1,
                edges.len()
            )));
        }
        for (i, e) in edges.iter().enumerate() {
            if e.len() != levels[i + 1].len()
                || e.iter().any(|row| row.len() != levels[i].len())
            {
                return Err(Error::Shape(format!(
                    "Bratteli diagram: edge matrix {i} must be {}×{}",
                    levels[i + 1].len(),
                    levels[i].len()
                )));
            }
        }
        Ok(BratteliDiagram { levels, edges })
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[Vec<usize>] {
        &self.levels
    }

    pub fn level(&self, i: usize) -> &[usize] {
        &self.levels[i]
    }

    pub fn edges(&self) -> &[Vec<Vec<usize>>] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> &[Vec<usize>] {
        &self.edges[i]
    }
}

/// The diagram of the base sequence: levels are the stage block dimensions,
/// edges the multiplicity matrices of the connecting maps.  With a selector
/// `g`, both are restricted to the ideals `D_g` (the skeleton of
/// `D_g = lim D_g⁽ⁱ⁾`); equivariance keeps the restricted matrices total.
pub fn bratteli_of_system(
    sys: &InductiveSystem,
    selector: Option<usize>,
) -> Result<BratteliDiagram> {
    let block_set = |stage: &PartialAction| -> Vec<usize> {
        match selector {
            Some(g) => stage.ideal(g).block_set().to_vec(),
            None => (0..stage.algebra().num_blocks()).collect(),
        }
    };
    if let Some(g) = selector {
        if g >= sys.stage(0).group().order() {
            return Err(Error::Shape(format!("selector {g} is not a group element")));
        }
    }
    let levels = sys
        .stages()
        .iter()
        .map(|stage| {
            let dims = stage.algebra().block_dims();
            block_set(stage).iter().map(|&k| dims[k]).collect()
        })
        .collect();
    let edges = sys
        .maps()
        .iter()
        .enumerate()
        .map(|(i, map)| {
            let rows = block_set(sys.stage(i + 1));
            let cols = block_set(sys.stage(i));
            rows.iter()
                .map(|&l| cols.iter().map(|&k| map.multiplicity()[l][k]).collect())
                .collect()
        })
        .collect();
    BratteliDiagram::new(levels, edges)
}

/// The diagram of the crossed-product sequence `A⁽ⁱ⁾⋊G` chained by the
/// induced maps `ψ_i(aδ_g) = φ_i(a)δ_g` (in canonical form over the crossed
/// products' block coordinates).
pub fn bratteli_of_crossed_sequence(sys: &InductiveSystem, tol: f64) -> Result<BratteliDiagram> {
    let cps: Vec<CrossedProductAlgebra> =
        (0..sys.num_stages()).map(|i| sys.crossed_stage(i)).collect::<Result<_>>()?;
    let levels = cps.iter().map(|cp| cp.block_dims().to_vec()).collect();
    let edges = sys
        .maps()
        .iter()
        .enumerate()
        .map(|(i, map)| {
            let psi = induce_crossed_hom(map, &cps[i], &cps[i + 1], tol)?;
            Ok(psi.multiplicity().to_vec())
        })
        .collect::<Result<_>>()?;
    BratteliDiagram::new(levels, edges)
}

/// Stage-wise verification that the crossed product of the limit is the
/// limit of the crossed products:
///
/// - `lambda{i}_commutes`: with `Λ_i: A⁽ⁱ⁾⋊G → A⁽ⁿ⁾⋊G` induced by
///   `μ_{i,n}` and `Ψ_i` induced by `φ_i`, the triangle `Λ_{i+1}∘Ψ_i = Λ_i`
///   closes on every basis element;
/// - `level{i}_trace_independent`: the crossed-sequence diagram level equals
///   the shape of a fresh crossed product of `limit_stage_system(sys, i)`
///   built with a different faithful trace;
/// - for a stabilized tail with `n` past the index: `terminus_iso` (the last
///   induced map is an isomorphism) and `terminus_matches` (the crossed
///   product of the limit stage is canonically isomorphic to the sequence
///   terminus, equal shapes included).
pub fn verify_limit_theorem(sys: &InductiveSystem, n: usize, tol: f64) -> Result<Report> {
    if n >= sys.num_stages() {
        return Err(Error::Shape(format!(
            "stage {n} out of range: {} stages",
            sys.num_stages()
        )));
    }
    let valid = validate_inductive_system(sys, tol);
    if !valid.passed() {
        return Err(Error::Precondition(format!(
            "verify_limit_theorem: invalid system: {}",
            valid.worst().expect("non-empty report")
        )));
    }
    let mut report = Report::new();

    let cps: Vec<CrossedProductAlgebra> =
        (0..=n).map(|i| sys.crossed_stage(i)).collect::<Result<_>>()?;
    let lambdas: Vec<StarHom> = (0..=n)
        .map(|i| induce_crossed_hom(&sys.stage_map(i, n)?, &cps[i], &cps[n], tol))
        .collect::<Result<_>>()?;
    let mut psis = Vec::new();
    for i in 0..n {
        let psi = induce_crossed_hom(sys.map(i), &cps[i], &cps[i + 1], tol)?;
        report.push(
            format!("lambda{i}_commutes"),
            lambdas[i + 1].compose(&psi)?.distance(&lambdas[i]),
            tol,
        );
        psis.push(psi);
    }

    // Shape comparison against fresh builds of the limit surrogates with a
    // skewed (still faithful) trace: levels must agree and be independent of
    // the trace used.
    let fresh = |action: &PartialAction| -> Result<CrossedProductAlgebra> {
        let dims = action.algebra().block_dims();
        let raw: Vec<f64> = (0..dims.len()).map(|k| 1.0 + k as f64).collect();
        let tau = TraceWeights::normalized(action.algebra().clone(), raw)?;
        build_crossed_product(action, &tau)
    };
    for (i, cp) in cps.iter().enumerate() {
        let (limit_i, coherence) = limit_stage_system(sys, i, tol)?;
        report.merge(&format!("limit_stage{i}"), coherence);
        let other = fresh(&limit_i)?;
        report.push(
            format!("level{i}_trace_independent"),
            if other.block_dims() == cp.block_dims() { 0.0 } else { 1.0 },
            tol,
        );
    }

    if let Tail::Stabilized { from } = sys.tail() {
        if n > from {
            report.push(
                "terminus_iso",
                if psis[n - 1].is_iso() { 0.0 } else { 1.0 },
                tol,
            );
        }
        if n >= from {
            let (limit, _) = limit_stage_system(sys, n, tol)?;
            let other = fresh(&limit)?;
            let canonical = induce_crossed_hom(
                &StarHom::identity(limit.algebra()),
                &cps[n],
                &other,
                tol,
            )?;
            report.push(
                "terminus_matches",
                if canonical.is_iso() && other.block_dims() == cps[n].block_dims() {
                    0.0
                } else {
                    1.0
                },
                tol,
            );
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::DEFAULT_TOL;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn constant_sequences_validate() {
        for action in [fixtures::s1(), fixtures::s2()] {
            let sys = fixtures::constant_system(&action, 4).unwrap();
            let report = validate_inductive_system(&sys, DEFAULT_TOL);
            assert!(report.passed(), "{report}");
        }
    }

    #[test]
    fn non_equivariant_map_fails_at_its_index() {
        // stage 0 is S2, later stages S1; the identity on ℂ⊕ℂ is a perfectly
        // good *-homomorphism but not equivariant from S2 to S1.
        let s1 = fixtures::s1();
        let s2 = fixtures::s2();
        let id = StarHom::identity(s2.algebra());
        let sys = InductiveSystem::new(
            vec![s2, s1.clone(), s1],
            vec![id.clone(), id],
            Tail::Truncated,
        )
        .unwrap();
        let report = validate_inductive_system(&sys, DEFAULT_TOL);
        assert!(!report.passed());
        let failures: Vec<&str> =
            report.failures().map(|c| c.name.as_str()).collect();
        assert!(failures.iter().all(|n| n.starts_with("map0_equivariance")));
    }

    #[test]
    fn shape_errors_are_rejected_at_construction() {
        let s2 = fixtures::s2();
        let id = StarHom::identity(s2.algebra());
        assert!(InductiveSystem::new(vec![s2.clone()], vec![], Tail::Truncated).is_err());
        assert!(InductiveSystem::new(
            vec![s2.clone(), s2.clone()],
            vec![id.clone(), id.clone()],
            Tail::Truncated
        )
        .is_err());
        assert!(InductiveSystem::new(
            vec![s2.clone(), s2],
            vec![id],
            Tail::Stabilized { from: 2 }
        )
        .is_err());
    }

    #[test]
    fn stage_maps_compose_and_multiply_multiplicities() {
        // doubling chain ℂ → M₂ → M₄ over the trivial group
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let stages = vec![
            fixtures::trivial_action(&[1]),
            fixtures::trivial_action(&[2]),
            fixtures::trivial_action(&[4]),
        ];
        let maps = vec![
            fixtures::random_canonical_hom(&mut rng, &[1], &[2], true).unwrap(),
            fixtures::random_canonical_hom(&mut rng, &[2], &[4], true).unwrap(),
        ];
        let sys = InductiveSystem::new(stages, maps, Tail::Truncated).unwrap();
        assert!(validate_inductive_system(&sys, DEFAULT_TOL).passed());

        let mu = sys.stage_map(0, 2).unwrap();
        assert_eq!(mu.multiplicity(), &[vec![4]]);
        let id = sys.stage_map(1, 1).unwrap();
        assert!(id.distance(&StarHom::identity(sys.stage(1).algebra())) < 1e-12);

        // μ_{j,N}∘μ_{i,j} = μ_{i,N}
        let lhs = sys.stage_map(1, 2).unwrap().compose(&sys.stage_map(0, 1).unwrap()).unwrap();
        assert!(lhs.distance(&mu) < 1e-12);
    }

    #[test]
    fn constant_limit_stage_reproduces_the_action_with_zero_defects() {
        for action in [fixtures::s1(), fixtures::s2()] {
            let sys = fixtures::constant_system(&action, 4).unwrap();
            let (limit, report) = limit_stage_system(&sys, 3, DEFAULT_TOL).unwrap();
            assert_eq!(limit, action);
            assert!(report.passed(), "{report}");
            assert!(report.max_defect() < 1e-14);
        }
    }

    #[test]
    fn random_systems_cohere() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let sys = fixtures::random_inductive_system(&mut rng).unwrap();
            let report = validate_inductive_system(&sys, DEFAULT_TOL);
            assert!(report.passed(), "{report}");
            let (_, coherence) =
                limit_stage_system(&sys, sys.num_stages() - 1, DEFAULT_TOL).unwrap();
            assert!(coherence.passed(), "{coherence}");
        }
    }

    #[test]
    fn bratteli_of_constant_system_with_and_without_selector() {
        let sys = fixtures::constant_system(&fixtures::s2(), 4).unwrap();
        let full = bratteli_of_system(&sys, None).unwrap();
        assert_eq!(full.num_levels(), 4);
        assert!(full.levels().iter().all(|l| l == &vec![1, 1]));
        assert!(full.edges().iter().all(|e| e == &vec![vec![1, 0], vec![0, 1]]));

        let at_s = bratteli_of_system(&sys, Some(1)).unwrap();
        assert!(at_s.levels().iter().all(|l| l == &vec![1]));
        assert!(at_s.edges().iter().all(|e| e == &vec![vec![1]]));

        let crossed = bratteli_of_crossed_sequence(&sys, DEFAULT_TOL).unwrap();
        assert!(crossed.levels().iter().all(|l| l == &vec![1, 1, 1]));
        for e in crossed.edges() {
            for (l, row) in e.iter().enumerate() {
                for (k, &m) in row.iter().enumerate() {
                    assert_eq!(m, usize::from(l == k), "edge {e:?}");
                }
            }
        }
    }

    #[test]
    fn diagram_shape_chain_is_enforced() {
        assert!(BratteliDiagram::new(vec![vec![1], vec![2]], vec![]).is_err());
        assert!(
            BratteliDiagram::new(vec![vec![1], vec![2]], vec![vec![vec![1, 1]]]).is_err()
        );
        assert!(BratteliDiagram::new(vec![vec![1], vec![2]], vec![vec![vec![2]]]).is_ok());
    }

    #[test]
    fn limit_theorem_holds_on_constant_sequences() {
        for (action, dims) in [
            (fixtures::s1(), vec![2usize]),
            (fixtures::s2(), vec![1, 1, 1]),
        ] {
            let sys = fixtures::constant_system(&action, 4).unwrap();
            let report = verify_limit_theorem(&sys, 3, DEFAULT_TOL).unwrap();
            assert!(report.passed(), "{report}");
            let diagram = bratteli_of_crossed_sequence(&sys, DEFAULT_TOL).unwrap();
            assert!(diagram.levels().iter().all(|l| l == &dims));
        }
    }

    #[test]
    fn limit_theorem_reduces_to_bookkeeping_for_the_trivial_group() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let stages = vec![
            fixtures::trivial_action(&[1, 1]),
            fixtures::trivial_action(&[2, 1]),
            fixtures::trivial_action(&[2, 1]),
        ];
        let maps = vec![
            fixtures::random_canonical_hom(&mut rng, &[1, 1], &[2, 1], true).unwrap(),
            StarHom::identity(stages[1].algebra()),
        ];
        let sys = InductiveSystem::new(stages, maps, Tail::Stabilized { from: 1 }).unwrap();
        let report = verify_limit_theorem(&sys, 2, DEFAULT_TOL).unwrap();
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn stabilization_gatekeeping() {
        let sys = fixtures::constant_system(&fixtures::s2(), 3).unwrap();
        assert!(sys.require_stabilized_by(2).is_ok());
        assert!(sys.require_stabilized_by(5).is_err());

        let s2 = fixtures::s2();
        let truncated = InductiveSystem::new(
            vec![s2.clone(), s2.clone()],
            vec![StarHom::identity(s2.algebra())],
            Tail::Truncated,
        )
        .unwrap();
        assert!(matches!(
            truncated.require_stabilized_by(1),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn transported_crossed_basis_preserves_expectation_coefficients() {
        let sys = fixtures::constant_system(&fixtures::s2(), 3).unwrap();
        let cp0 = sys.crossed_stage(0).unwrap();
        let forward = sys.crossed_map_elements(0, 2).unwrap();
        assert_eq!(forward.len(), cp0.dim());
        for (x, fx) in cp0.basis_elements().iter().zip(&forward) {
            assert!(x.distance(fx) < 1e-12);
        }
    }
}
