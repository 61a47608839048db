//! Canonical example systems and seeded random generators.
//!
//! Three tiny partial dynamical systems recur throughout the tests and the
//! CLI bundle:
//!
//! - **S1**: ℤ/2 acting globally on ℂ⊕ℂ by the flip `(a,b) ↦ (b,a)`;
//! - **S2**: ℤ/2 on ℂ⊕ℂ with `D_s` the first block and `α_s` the identity
//!   on it;
//! - **S3**: ℤ/2 on ℂ with `D_s = 0`.
//!
//! Random instances come from one recipe: a group acting on `|G|` labelled
//! copies of a base multi-matrix algebra by translating the label, with
//! every block conjugated by its own random unitary (the group law then
//! holds exactly), restricted to a random ideal.  Restrictions of global
//! actions are always valid partial actions, which makes this a generator
//! of arbitrarily many well-formed test systems.

use crate::fdalg::{Element, FdCStarAlgebra, Ideal, StarHom};
use crate::groups::FiniteGroup;
use crate::linalg::{random_complex_matrix, random_unitary, CMat};
use crate::partial_action::{GlobalAction, PartialAction, PartialIso};
use crate::{Error, Result, DEFAULT_TOL};
use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// ℤ/2 with elements named `e`, `s`.
pub fn z2() -> FiniteGroup {
    FiniteGroup::cyclic(2)
        .expect("order 2 is positive")
        .with_names(vec!["e", "s"])
        .expect("two names for two elements")
}

/// S1: the flip action of ℤ/2 on ℂ⊕ℂ (global).
pub fn s1() -> PartialAction {
    let a = FdCStarAlgebra::new(vec![1, 1]).expect("valid dims");
    let full = a.full_ideal();
    let flip = PartialIso::new(
        full.clone(),
        full.clone(),
        vec![1, 0],
        vec![CMat::identity(1, 1), CMat::identity(1, 1)],
    )
    .expect("valid swap");
    PartialAction::new(
        a,
        z2(),
        vec![full.clone(), full.clone()],
        vec![PartialIso::identity_on(&full), flip],
    )
    .expect("valid fixture")
}

/// S1 wrapped as a validated global action.
pub fn s1_global() -> GlobalAction {
    GlobalAction::new(s1(), DEFAULT_TOL).expect("S1 is global")
}

/// S2: ℤ/2 on ℂ⊕ℂ with `D_s` = first block, `α_s` = identity on it.
pub fn s2() -> PartialAction {
    let a = FdCStarAlgebra::new(vec![1, 1]).expect("valid dims");
    let d = a.ideal(vec![0]).expect("block 0 exists");
    PartialAction::new(
        a.clone(),
        z2(),
        vec![a.full_ideal(), d.clone()],
        vec![PartialIso::identity_on(&a.full_ideal()), PartialIso::identity_on(&d)],
    )
    .expect("valid fixture")
}

/// S3: ℤ/2 on ℂ with the zero ideal as domain of `s`.
pub fn s3() -> PartialAction {
    let a = FdCStarAlgebra::new(vec![1]).expect("valid dims");
    let zero = a.zero_ideal();
    let nothing =
        PartialIso::new(zero.clone(), zero.clone(), vec![], vec![]).expect("empty iso");
    PartialAction::new(
        a.clone(),
        z2(),
        vec![a.full_ideal(), zero],
        vec![PartialIso::identity_on(&a.full_ideal()), nothing],
    )
    .expect("valid fixture")
}

/// The two-copies system `α ⊕ α` on `A ⊕ A` together with the equivariant
/// diagonal embedding `x ↦ (x, x)`.
pub fn double_system(action: &PartialAction) -> Result<(PartialAction, StarHom)> {
    let a = action.algebra();
    let k = a.num_blocks();
    let mut dims = a.block_dims().to_vec();
    dims.extend_from_slice(a.block_dims());
    let big = FdCStarAlgebra::new(dims)?;

    let doubled_ideal = |d: &Ideal| -> Result<Ideal> {
        let mut blocks: Vec<usize> = d.block_set().to_vec();
        blocks.extend(d.block_set().iter().map(|&b| b + k));
        big.ideal(blocks)
    };
    let grp = action.group().clone();
    let ideals: Vec<Ideal> = grp
        .elements()
        .map(|g| doubled_ideal(action.ideal(g)))
        .collect::<Result<_>>()?;
    let mut isos = Vec::with_capacity(grp.order());
    for g in grp.elements() {
        let small_iso = action.iso(g);
        let nd = small_iso.domain().num_blocks();
        let mut matching = Vec::with_capacity(2 * nd);
        let mut unitaries = Vec::with_capacity(2 * nd);
        for copy in 0..2 {
            for (i, &m) in small_iso.matching().iter().enumerate() {
                matching.push(m + copy * nd);
                unitaries.push(small_iso.unitaries()[i].clone());
                debug_assert!(i < nd);
            }
        }
        isos.push(PartialIso::new(
            ideals[grp.inv(g)].clone(),
            ideals[g].clone(),
            matching,
            unitaries,
        )?);
    }
    let doubled = PartialAction::new(big.clone(), grp, ideals, isos)?;

    let mut multiplicity = vec![vec![0usize; k]; 2 * k];
    let mut unitaries = Vec::with_capacity(2 * k);
    for l in 0..2 * k {
        multiplicity[l][l % k] = 1;
        let d = a.block_dims()[l % k];
        unitaries.push(CMat::identity(d, d));
    }
    let phi = StarHom::new(a.clone(), big, multiplicity, unitaries)?;
    Ok((doubled, phi))
}

/// A global action of `group` on `|G|` copies of the base algebra
/// `⊕_j M_{base_dims[j]}`, translating the copy label and conjugating every
/// block by its own random unitary.  The group law holds exactly.
pub fn random_global_system(
    rng: &mut ChaCha8Rng,
    group: &FiniteGroup,
    base_dims: &[usize],
) -> Result<GlobalAction> {
    let n = group.order();
    let j = base_dims.len();
    let mut dims = Vec::with_capacity(n * j);
    for _ in 0..n {
        dims.extend_from_slice(base_dims);
    }
    let big = FdCStarAlgebra::new(dims)?;
    let scramble: Vec<CMat> =
        big.block_dims().iter().map(|&d| random_unitary(rng, d)).collect();

    let full = big.full_ideal();
    let mut isos = Vec::with_capacity(n);
    for h in group.elements() {
        let mut matching = Vec::with_capacity(n * j);
        let mut unitaries = Vec::with_capacity(n * j);
        for g in 0..n {
            for b in 0..j {
                let src = g * j + b;
                let dst = group.mul(h, g) * j + b;
                matching.push(dst);
                unitaries.push(&scramble[dst] * scramble[src].adjoint());
            }
        }
        isos.push(PartialIso::new(full.clone(), full.clone(), matching, unitaries)?);
    }
    let action = PartialAction::new(
        big,
        group.clone(),
        vec![full; n],
        isos,
    )?;
    GlobalAction::new(action, DEFAULT_TOL)
}

/// A random valid partial action: a random translation-type global system
/// restricted to a random nonempty ideal.
pub fn random_restricted_action(
    rng: &mut ChaCha8Rng,
    max_group_order: usize,
    max_block_dim: usize,
) -> PartialAction {
    let order = rng.random_range(1..=max_group_order.max(1));
    let group = FiniteGroup::cyclic(order).expect("positive order");
    let num_base = rng.random_range(1..=2);
    let base_dims: Vec<usize> =
        (0..num_base).map(|_| rng.random_range(1..=max_block_dim.max(1))).collect();
    let eta = random_global_system(rng, &group, &base_dims)
        .expect("translation systems are valid");
    let total = eta.algebra().num_blocks();
    let mut blocks: Vec<usize> = (0..total).filter(|_| rng.random_bool(0.6)).collect();
    if blocks.is_empty() {
        blocks.push(rng.random_range(0..total));
    }
    let sub = eta.algebra().ideal(blocks).expect("valid subset");
    crate::partial_action::restrict_global(&eta, &sub)
        .expect("restriction of a valid global action")
}

/// A random faithful tracial state (every block weight strictly positive).
pub fn random_faithful_trace(
    rng: &mut ChaCha8Rng,
    algebra: &FdCStarAlgebra,
) -> crate::traces::TraceWeights {
    let raw: Vec<f64> = (0..algebra.num_blocks())
        .map(|_| rng.random_range(0.1..1.0))
        .collect();
    crate::traces::TraceWeights::normalized(algebra.clone(), raw)
        .expect("positive weights normalize")
}

/// A random element with independent Gaussian entries in every block.
pub fn random_element(rng: &mut ChaCha8Rng, algebra: &FdCStarAlgebra) -> Element {
    let blocks = algebra
        .block_dims()
        .iter()
        .map(|&d| random_complex_matrix(rng, d, d))
        .collect();
    algebra.element(blocks).expect("matching shapes")
}

/// A random element of an ideal (zero outside the member blocks).
pub fn random_ideal_element(rng: &mut ChaCha8Rng, ideal: &Ideal) -> Element {
    ideal
        .project(&random_element(rng, ideal.algebra()))
        .expect("element of the same algebra")
}

/// The one-element group acting (trivially) on `⊕_j M_{dims[j]}`.
pub fn trivial_action(dims: &[usize]) -> PartialAction {
    let a = FdCStarAlgebra::new(dims.to_vec()).expect("positive dims");
    let full = a.full_ideal();
    PartialAction::new(
        a,
        FiniteGroup::trivial(),
        vec![full.clone()],
        vec![PartialIso::identity_on(&full)],
    )
    .expect("the trivial action is well-formed")
}

/// Conjugate a system by a random block unitary: returns the conjugated
/// system together with the conjugation as an equivariant isomorphism.
pub fn scrambled_iso(
    rng: &mut ChaCha8Rng,
    action: &PartialAction,
) -> Result<(PartialAction, StarHom)> {
    let a = action.algebra();
    let v: Vec<CMat> = a.block_dims().iter().map(|&d| random_unitary(rng, d)).collect();
    let mut isos = Vec::with_capacity(action.group().order());
    for g in action.group().elements() {
        let iso = action.iso(g);
        let unitaries = iso
            .matching()
            .iter()
            .zip(iso.unitaries())
            .zip(iso.domain().block_set())
            .map(|((&dst_pos, u), &src)| {
                // matching holds positions into the range block list, not
                // parent-block indices
                let dst = iso.range().block_set()[dst_pos];
                &v[dst] * u * v[src].adjoint()
            })
            .collect();
        isos.push(PartialIso::new(
            iso.domain().clone(),
            iso.range().clone(),
            iso.matching().to_vec(),
            unitaries,
        )?);
    }
    let conjugated = PartialAction::new(
        a.clone(),
        action.group().clone(),
        (0..action.group().order()).map(|g| action.ideal(g).clone()).collect(),
        isos,
    )?;
    let multiplicity = (0..a.num_blocks())
        .map(|l| (0..a.num_blocks()).map(|k| usize::from(k == l)).collect())
        .collect();
    let phi = StarHom::new(a.clone(), a.clone(), multiplicity, v)?;
    Ok((conjugated, phi))
}

/// The constant sequence on one action (identity maps, stabilized from the
/// start).
pub fn constant_system(
    action: &PartialAction,
    len: usize,
) -> Result<crate::inductive::InductiveSystem> {
    let stages = vec![action.clone(); len];
    let maps = vec![StarHom::identity(action.algebra()); len.saturating_sub(1)];
    crate::inductive::InductiveSystem::new(
        stages,
        maps,
        crate::inductive::Tail::Stabilized { from: 0 },
    )
}

/// The flip system diagonally embedded into two copies of itself
/// (`x ↦ (x, x)` into `α ⊕ α`), then held constant: a three-stage sequence
/// stabilized from stage 1.
pub fn diag_embed_seq() -> Result<crate::inductive::InductiveSystem> {
    let base = s1();
    let (doubled, phi) = double_system(&base)?;
    let id = StarHom::identity(doubled.algebra());
    crate::inductive::InductiveSystem::new(
        vec![base, doubled.clone(), doubled],
        vec![phi, id],
        crate::inductive::Tail::Stabilized { from: 1 },
    )
}

/// A random valid inductive sequence: a random restricted action, grown by
/// at most one doubling embedding (kept small enough for crossed-product
/// work downstream), then padded with random conjugation isomorphisms; the
/// tail is stabilized right after the last doubling.
pub fn random_inductive_system(rng: &mut ChaCha8Rng) -> Result<crate::inductive::InductiveSystem> {
    let crossed_dim = |action: &PartialAction| -> usize {
        action.group().elements().map(|g| action.ideal(g).dim()).sum()
    };
    // Every stage must keep its crossed product small: the verification
    // harnesses build one per stage, at a steep polynomial cost in its
    // dimension.  Doubling doubles the crossed dimension, so it is only
    // offered to bases half the budget.
    let base = loop {
        let candidate = random_restricted_action(rng, 3, 2);
        if crossed_dim(&candidate) <= 20 {
            break candidate;
        }
    };
    let total = rng.random_range(3..=5usize);
    let mut wants_doubling = rng.random_bool(0.5) && crossed_dim(&base) <= 10;
    let mut stages = vec![base];
    let mut maps = Vec::new();
    let mut stabilized_from = 0;
    for i in 1..total {
        let prev = stages.last().expect("non-empty").clone();
        if wants_doubling {
            wants_doubling = false;
            let (next, phi) = double_system(&prev)?;
            stages.push(next);
            maps.push(phi);
            stabilized_from = i;
        } else {
            let (next, phi) = scrambled_iso(rng, &prev)?;
            stages.push(next);
            maps.push(phi);
        }
    }
    crate::inductive::InductiveSystem::new(
        stages,
        maps,
        crate::inductive::Tail::Stabilized { from: stabilized_from },
    )
}

/// A random *-homomorphism in canonical form with the requested unitality,
/// between freshly drawn algebras (useful for exercising recognition and
/// composition).  Returns `None` when the multiplicity draw has a zero
/// column (then re-draw upstream if injectivity is required).
pub fn random_canonical_hom(
    rng: &mut ChaCha8Rng,
    source_dims: &[usize],
    target_dims: &[usize],
    unital: bool,
) -> Result<StarHom> {
    let source = FdCStarAlgebra::new(source_dims.to_vec())?;
    let target = FdCStarAlgebra::new(target_dims.to_vec())?;
    let ks = source_dims.len();
    let mut multiplicity = vec![vec![0usize; ks]; target_dims.len()];
    for (l, &nl) in target_dims.iter().enumerate() {
        // greedily fill capacity with random source copies
        let mut remaining = nl;
        let mut order: Vec<usize> = (0..ks).collect();
        for _ in 0..ks {
            let Some(&k) = order
                .iter()
                .filter(|&&k| source_dims[k] <= remaining)
                .collect::<Vec<_>>()
                .choose(rng)
                .copied()
            else {
                break;
            };
            let cap = remaining / source_dims[k];
            let copies = if unital {
                cap
            } else {
                rng.random_range(0..=cap)
            };
            multiplicity[l][k] += copies;
            remaining -= copies * source_dims[k];
            if unital && remaining == 0 {
                break;
            }
            order.retain(|&x| x != k);
        }
        if unital && remaining != 0 {
            // fall back: fill with 1-dim blocks if any, else give up
            if let Some(k1) = source_dims.iter().position(|&d| d == 1) {
                multiplicity[l][k1] += remaining;
            } else {
                return Err(Error::Precondition(format!(
                    "cannot fill target block of size {nl} exactly with blocks {source_dims:?}"
                )));
            }
        }
    }
    let unitaries = target_dims.iter().map(|&n| random_unitary(rng, n)).collect();
    StarHom::new(source, target, multiplicity, unitaries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partial_action::validate_partial_action;
    use rand::SeedableRng;

    #[test]
    fn canonical_fixtures_are_wellformed() {
        for action in [s1(), s2(), s3()] {
            assert!(validate_partial_action(&action, DEFAULT_TOL).passed());
        }
        assert_eq!(s1().algebra().dim(), 2);
        assert_eq!(s3().ideal(1).dim(), 0);
    }

    #[test]
    fn random_global_systems_hold_the_group_law_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for order in [1usize, 2, 3] {
            let group = FiniteGroup::cyclic(order).unwrap();
            let eta = random_global_system(&mut rng, &group, &[1, 2]).unwrap();
            let report = validate_partial_action(eta.action(), 1e-12);
            assert!(report.passed(), "{report}");
        }
    }

    #[test]
    fn doubling_respects_validation() {
        let (doubled, phi) = double_system(&s2()).unwrap();
        assert!(validate_partial_action(&doubled, DEFAULT_TOL).passed());
        assert!(phi.is_injective());
        assert!(phi.is_unital());
        assert!(phi.check(DEFAULT_TOL).passed());
    }

    #[test]
    fn random_canonical_homs_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let phi = random_canonical_hom(&mut rng, &[1, 2], &[3, 2], true).unwrap();
            assert!(phi.is_unital());
            assert!(phi.check(1e-9).passed());
        }
    }
}
