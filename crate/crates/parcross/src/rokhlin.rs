//! Rokhlin towers for partial actions: defect evaluation, a numerical
//! feasibility search, and the pushforward harness along unital inductive
//! sequences.
//!
//! A tower of height `k` is a family of positive contractions
//! `f_{j,g} ∈ D_g` (`j = 0..=k`, `g ∈ G`).  Against a finite test set `F`
//! and a threshold `ε` the five defining conditions are measured as
//! operator-norm defects:
//!
//! 1. `‖α_g(f_{j,h}·x) − f_{j,gh}·α_g(x)‖` for `x ∈ F ∩ D_{g⁻¹}`;
//! 2. `‖f_{j,g}·f_{j,h}‖` for `g ≠ h`;
//! 3. `‖Σ_{j,g} f_{j,g} − 1‖`;
//! 4. `‖f_{j,g}·a − a·f_{j,g}‖` for `a ∈ F`;
//! 5. (commuting-tower variant) `‖[f_{j,g}, f_{l,h}]‖`.
//!
//! The search minimizes the max defect by projected subgradient descent:
//! the active term's top singular pair yields the gradient on the member
//! blocks, and each step is followed by projection back to the feasible
//! set (zero outside the domain ideal, self-adjoint part, eigenvalues
//! clipped to `[0, 1]`).  A returned tower is always re-certified by the
//! defect evaluation; a failed search is evidence, not a certificate, that
//! no tower exists.

use crate::fdalg::{Element, FdCStarAlgebra};
use crate::inductive::InductiveSystem;
use crate::linalg::{clip_spectrum, op_norm_mat, random_hermitian, CMat};
use crate::partial_action::{validate_partial_action, PartialAction};
use crate::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Structural gate for ideal membership and positivity of tower members.
const TOWER_GATE: f64 = 1e-7;
/// Initial relaxation of the Polyak-normalized subgradient step (the
/// provably convergent range for convex pieces is `(0, 2)`).
const LEARNING_RATE: f64 = 1.0;
/// Decay schedule: multiply the rate by [`DECAY_FACTOR`] every this many
/// iterations.
const DECAY_EVERY: usize = 100;
const DECAY_FACTOR: f64 = 0.5;
/// Two active terms closer than this are a tie; ties switch the step to a
/// finite-difference subgradient of the whole objective.
const TIE_THRESHOLD: f64 = 1e-12;
/// Default search budget used by the dimension estimator.
pub const DEFAULT_RESTARTS: usize = 16;
pub const DEFAULT_ITERS: usize = 500;

/// `members[j][g]` is the positive contraction `f_{j,g} ∈ D_g`; `j` ranges
/// over the `k+1` tower levels.
#[derive(Debug, Clone)]
pub struct RokhlinTower {
    members: Vec<Vec<Element>>,
}

impl RokhlinTower {
    pub fn new(members: Vec<Vec<Element>>) -> Result<RokhlinTower> {
        if members.is_empty() || members[0].is_empty() {
            return Err(Error::Shape("a tower needs at least one member".into()));
        }
        let algebra = members[0][0].algebra().clone();
        let width = members[0].len();
        for row in &members {
            if row.len() != width {
                return Err(Error::Shape("tower rows must have equal length".into()));
            }
            for m in row {
                if m.algebra() != &algebra {
                    return Err(Error::Shape(
                        "tower members must share one algebra".into(),
                    ));
                }
            }
        }
        Ok(RokhlinTower { members })
    }

    /// The tower height parameter: number of levels minus one.
    pub fn k(&self) -> usize {
        self.members.len() - 1
    }

    pub fn num_levels(&self) -> usize {
        self.members.len()
    }

    pub fn member(&self, j: usize, g: usize) -> &Element {
        &self.members[j][g]
    }

    pub fn members(&self) -> &[Vec<Element>] {
        &self.members
    }

    pub fn algebra(&self) -> &FdCStarAlgebra {
        self.members[0][0].algebra()
    }
}

/// Max defect per condition, with the threshold the report was asked about.
#[derive(Debug, Clone, PartialEq)]
pub struct DefectReport {
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub d4: f64,
    /// Present exactly when the commuting-tower variant was requested.
    pub d5: Option<f64>,
    pub epsilon: f64,
}

impl DefectReport {
    pub fn commuting(&self) -> bool {
        self.d5.is_some()
    }

    pub fn max_defect(&self) -> f64 {
        self.d1
            .max(self.d2)
            .max(self.d3)
            .max(self.d4)
            .max(self.d5.unwrap_or(0.0))
    }

    pub fn passes_at(&self, epsilon: f64) -> bool {
        self.max_defect() < epsilon
    }

    pub fn passed(&self) -> bool {
        self.passes_at(self.epsilon)
    }
}

impl std::fmt::Display for DefectReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "d1 {:.3e}  d2 {:.3e}  d3 {:.3e}  d4 {:.3e}",
            self.d1, self.d2, self.d3, self.d4
        )?;
        if let Some(d5) = self.d5 {
            write!(f, "  d5 {d5:.3e}")?;
        }
        write!(
            f,
            "  [{} at ε = {:.1e}]",
            if self.passed() { "pass" } else { "fail" },
            self.epsilon
        )
    }
}

/// One measured instance of a tower condition.
#[derive(Debug, Clone, Copy)]
enum Cond {
    /// `α_g(f_{j,h}·x) − f_{j,gh}·α_g(x)`, `x = F[xi] ∈ D_{g⁻¹}`.
    Cocycle { g: usize, h: usize, j: usize, xi: usize },
    /// `f_{j,g}·f_{j,h}`, `g ≠ h`.
    Orthogonal { j: usize, g: usize, h: usize },
    /// `Σ_{j,g} f_{j,g} − 1`.
    Partition,
    /// `[f_{j,g}, F[ai]]`.
    Commute { j: usize, g: usize, ai: usize },
    /// `[f_{j,g}, f_{l,h}]`.
    TowersCommute { j: usize, g: usize, l: usize, h: usize },
}

impl Cond {
    fn condition(&self) -> usize {
        match self {
            Cond::Cocycle { .. } => 1,
            Cond::Orthogonal { .. } => 2,
            Cond::Partition => 3,
            Cond::Commute { .. } => 4,
            Cond::TowersCommute { .. } => 5,
        }
    }
}

fn build_instances(
    action: &PartialAction,
    f_set: &[Element],
    levels: usize,
    commuting: bool,
) -> Vec<Cond> {
    let grp = action.group();
    let order = grp.order();
    let mut instances = Vec::new();
    // F ∩ D_{g⁻¹}, decided by exact ideal membership (near-members excluded).
    let admissible: Vec<Vec<usize>> = grp
        .elements()
        .map(|g| {
            f_set
                .iter()
                .enumerate()
                .filter(|(_, x)| {
                    action
                        .ideal(grp.inv(g))
                        .membership_defect(x)
                        .is_some_and(|d| d <= TOWER_GATE)
                })
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    for g in 0..order {
        for h in 0..order {
            for j in 0..levels {
                for &xi in &admissible[g] {
                    instances.push(Cond::Cocycle { g, h, j, xi });
                }
            }
        }
    }
    for j in 0..levels {
        for g in 0..order {
            for h in 0..order {
                if g != h {
                    instances.push(Cond::Orthogonal { j, g, h });
                }
            }
        }
    }
    instances.push(Cond::Partition);
    for j in 0..levels {
        for g in 0..order {
            for ai in 0..f_set.len() {
                instances.push(Cond::Commute { j, g, ai });
            }
        }
    }
    if commuting {
        for j in 0..levels {
            for g in 0..order {
                for l in j..levels {
                    for h in 0..order {
                        if (l, h) > (j, g) {
                            instances.push(Cond::TowersCommute { j, g, l, h });
                        }
                    }
                }
            }
        }
    }
    instances
}

fn instance_element(
    action: &PartialAction,
    members: &[Vec<Element>],
    f_set: &[Element],
    cond: &Cond,
) -> Result<Element> {
    let grp = action.group();
    match *cond {
        Cond::Cocycle { g, h, j, xi } => {
            let ginv = grp.inv(g);
            let x = action.ideal(ginv).project(&f_set[xi])?;
            let fx = action.ideal(ginv).project(&members[j][h].mul(&x)?)?;
            let lhs = action.iso(g).apply_unchecked(&fx);
            let ax = action.iso(g).apply_unchecked(&x);
            let rhs = members[j][grp.mul(g, h)].mul(&ax)?;
            lhs.sub(&rhs)
        }
        Cond::Orthogonal { j, g, h } => members[j][g].mul(&members[j][h]),
        Cond::Partition => {
            let mut sum = members[0][0].algebra().zero();
            for row in members {
                for m in row {
                    sum = sum.add(m)?;
                }
            }
            sum.sub(&members[0][0].algebra().unit())
        }
        Cond::Commute { j, g, ai } => {
            let a = &f_set[ai];
            members[j][g].mul(a)?.sub(&a.mul(&members[j][g])?)
        }
        Cond::TowersCommute { j, g, l, h } => {
            let f = &members[j][g];
            let e = &members[l][h];
            f.mul(e)?.sub(&e.mul(f)?)
        }
    }
}

/// Positive contractions in the right ideals, to the structural gate.
fn validate_members(action: &PartialAction, tower: &RokhlinTower) -> Result<()> {
    for (j, row) in tower.members().iter().enumerate() {
        for (g, m) in row.iter().enumerate() {
            let defect = action.ideal(g).membership_defect(m).ok_or_else(|| {
                Error::Shape("tower members live on a different algebra".into())
            })?;
            if defect > TOWER_GATE {
                return Err(Error::Precondition(format!(
                    "tower member f[{j},{}] lies outside its ideal (defect {defect:.3e})",
                    action.group().name(g)
                )));
            }
            if !m.is_self_adjoint(TOWER_GATE) {
                return Err(Error::Precondition(format!(
                    "tower member f[{j},{}] is not self-adjoint",
                    action.group().name(g)
                )));
            }
            let (lo, hi) = m.spectrum_bounds();
            if lo < -TOWER_GATE || hi > 1.0 + TOWER_GATE {
                return Err(Error::Precondition(format!(
                    "tower member f[{j},{}] is not a positive contraction \
                     (spectrum [{lo:.3e}, {hi:.3e}])",
                    action.group().name(g)
                )));
            }
        }
    }
    Ok(())
}

/// Measure all tower conditions against the test set `F` at threshold `ε`.
pub fn check_tower(
    action: &PartialAction,
    tower: &RokhlinTower,
    f_set: &[Element],
    epsilon: f64,
    commuting: bool,
) -> Result<DefectReport> {
    if tower.algebra() != action.algebra() {
        return Err(Error::Shape("tower and action live on different algebras".into()));
    }
    if tower.members()[0].len() != action.group().order() {
        return Err(Error::Shape(format!(
            "tower rows must index the group: {} members vs order {}",
            tower.members()[0].len(),
            action.group().order()
        )));
    }
    if f_set.iter().any(|x| x.algebra() != action.algebra()) {
        return Err(Error::Shape("test-set element of a different algebra".into()));
    }
    validate_members(action, tower)?;

    let instances = build_instances(action, f_set, tower.num_levels(), commuting);
    let mut defects = [0.0f64; 6];
    for cond in &instances {
        let value = instance_element(action, tower.members(), f_set, cond)?.op_norm();
        let c = cond.condition();
        defects[c] = defects[c].max(value);
    }
    Ok(DefectReport {
        d1: defects[1],
        d2: defects[2],
        d3: defects[3],
        d4: defects[4],
        d5: commuting.then_some(defects[5]),
        epsilon,
    })
}

/// A single affine dependence of one block of an instance matrix on one
/// member block: `T_block` contains the summand `a · X_{(j,g),src} · b`.
struct Contribution {
    j: usize,
    g: usize,
    src: usize,
    a: CMat,
    b: CMat,
}

/// All affine dependencies of block `blk` of the given instance.
fn contributions(
    action: &PartialAction,
    members: &[Vec<Element>],
    f_set: &[Element],
    cond: &Cond,
    blk: usize,
) -> Result<Vec<Contribution>> {
    let grp = action.group();
    let dims = action.algebra().block_dims();
    let eye = |b: usize| CMat::identity(dims[b], dims[b]);
    let mut out = Vec::new();
    match *cond {
        Cond::Cocycle { g, h, j, xi } => {
            let ginv = grp.inv(g);
            let x = action.ideal(ginv).project(&f_set[xi])?;
            let iso = action.iso(g);
            // lhs = α_g(f_{j,h}·x): source block src maps onto blk with the
            // iso's unitary U; the dependence is U·X_{(j,h),src}·(x_src·U†).
            for (pos, &src) in iso.domain().block_set().iter().enumerate() {
                if iso.image_block(src) == Some(blk) && action.ideal(h).contains_block(src) {
                    let u = &iso.unitaries()[pos];
                    out.push(Contribution {
                        j,
                        g: h,
                        src,
                        a: u.clone(),
                        b: x.block(src) * u.adjoint(),
                    });
                }
            }
            // rhs = −f_{j,gh}·α_g(x)
            let gh = grp.mul(g, h);
            if action.ideal(gh).contains_block(blk) {
                let ax = iso.apply_unchecked(&x);
                out.push(Contribution {
                    j,
                    g: gh,
                    src: blk,
                    a: -eye(blk),
                    b: ax.block(blk).clone(),
                });
            }
        }
        Cond::Orthogonal { j, g, h } => {
            if action.ideal(g).contains_block(blk) && action.ideal(h).contains_block(blk) {
                out.push(Contribution {
                    j,
                    g,
                    src: blk,
                    a: eye(blk),
                    b: members[j][h].block(blk).clone(),
                });
                out.push(Contribution {
                    j,
                    g: h,
                    src: blk,
                    a: members[j][g].block(blk).clone(),
                    b: eye(blk),
                });
            }
        }
        Cond::Partition => {
            for (j, row) in members.iter().enumerate() {
                for (g, _) in row.iter().enumerate() {
                    if action.ideal(g).contains_block(blk) {
                        out.push(Contribution { j, g, src: blk, a: eye(blk), b: eye(blk) });
                    }
                }
            }
        }
        Cond::Commute { j, g, ai } => {
            if action.ideal(g).contains_block(blk) {
                let a_blk = f_set[ai].block(blk);
                out.push(Contribution { j, g, src: blk, a: eye(blk), b: a_blk.clone() });
                out.push(Contribution { j, g, src: blk, a: -a_blk, b: eye(blk) });
            }
        }
        Cond::TowersCommute { j, g, l, h } => {
            if action.ideal(g).contains_block(blk) && action.ideal(h).contains_block(blk) {
                let f_blk = members[j][g].block(blk).clone();
                let e_blk = members[l][h].block(blk).clone();
                out.push(Contribution { j, g, src: blk, a: eye(blk), b: e_blk.clone() });
                out.push(Contribution { j, g: h, src: blk, a: f_blk.clone(), b: eye(blk) });
                out.push(Contribution { j, g: h, src: blk, a: -eye(blk), b: f_blk });
                out.push(Contribution { j, g, src: blk, a: -e_blk, b: eye(blk) });
            }
        }
    }
    Ok(out)
}

/// Objective value plus the argmax (instance, block) terms within the tie
/// threshold.
fn evaluate(
    action: &PartialAction,
    members: &[Vec<Element>],
    f_set: &[Element],
    instances: &[Cond],
) -> Result<(f64, Vec<(usize, usize)>)> {
    let mut best = 0.0f64;
    let mut sigmas: Vec<(usize, usize, f64)> = Vec::new();
    for (i, cond) in instances.iter().enumerate() {
        let t = instance_element(action, members, f_set, cond)?;
        for (blk, m) in t.blocks().iter().enumerate() {
            let s = op_norm_mat(m);
            best = best.max(s);
            sigmas.push((i, blk, s));
        }
    }
    let ties = sigmas
        .into_iter()
        .filter(|&(_, _, s)| s >= best - TIE_THRESHOLD)
        .map(|(i, b, _)| (i, b))
        .collect();
    Ok((best, ties))
}

/// Analytic subgradient of `σ_max` of one (instance, block) term: with top
/// singular pair `(u, v)` and each affine dependence `A·X·B`, the gradient
/// on `X` is `(A†u)(Bv)†`.
fn analytic_gradient(
    action: &PartialAction,
    members: &[Vec<Element>],
    f_set: &[Element],
    cond: &Cond,
    blk: usize,
    grad: &mut [Vec<Element>],
) -> Result<()> {
    let t = instance_element(action, members, f_set, cond)?;
    let m = t.block(blk);
    if m.nrows() == 0 {
        return Ok(());
    }
    let svd = m.clone().svd(true, true);
    let (mut top, mut top_s) = (0usize, f64::NEG_INFINITY);
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s > top_s {
            top_s = s;
            top = i;
        }
    }
    if top_s <= 0.0 {
        return Ok(());
    }
    let u = svd.u.as_ref().expect("requested").column(top).into_owned();
    let v = svd.v_t.as_ref().expect("requested").row(top).adjoint();
    for c in contributions(action, members, f_set, cond, blk)? {
        let gu = c.a.adjoint() * &u;
        let gv = (&c.b * &v).adjoint();
        let g_mat = gu * gv;
        *grad[c.j][c.g].block_mut(c.src) += g_mat;
    }
    Ok(())
}

/// Central finite differences of the full objective; used when the active
/// terms tie and the analytic subgradient is ambiguous.
fn fd_gradient(
    action: &PartialAction,
    members: &mut [Vec<Element>],
    f_set: &[Element],
    instances: &[Cond],
    grad: &mut [Vec<Element>],
) -> Result<()> {
    const H: f64 = 1e-6;
    let objective = |members: &[Vec<Element>]| -> Result<f64> {
        Ok(evaluate(action, members, f_set, instances)?.0)
    };
    let levels = members.len();
    let order = members[0].len();
    for j in 0..levels {
        for g in 0..order {
            for blk in 0..action.algebra().num_blocks() {
                if !action.ideal(g).contains_block(blk) {
                    continue;
                }
                let d = action.algebra().block_dims()[blk];
                for p in 0..d {
                    for q in 0..d {
                        let base = members[j][g].block(blk)[(p, q)];
                        let mut diff = |delta: crate::linalg::C64| -> Result<f64> {
                            members[j][g].block_mut(blk)[(p, q)] = base + delta;
                            objective(members)
                        };
                        let re =
                            (diff(crate::linalg::cr(H))? - diff(crate::linalg::cr(-H))?) / (2.0 * H);
                        let im = (diff(crate::linalg::c(0.0, H))?
                            - diff(crate::linalg::c(0.0, -H))?)
                            / (2.0 * H);
                        members[j][g].block_mut(blk)[(p, q)] = base;
                        grad[j][g].block_mut(blk)[(p, q)] += crate::linalg::c(re, im);
                    }
                }
            }
        }
    }
    Ok(())
}

/// Project a member onto the feasible set: zero outside `D_g`, self-adjoint
/// part, eigenvalues clipped to `[0, 1]`.
fn project_member(action: &PartialAction, g: usize, x: &mut Element) {
    for blk in 0..action.algebra().num_blocks() {
        if !action.ideal(g).contains_block(blk) {
            x.block_mut(blk).fill(crate::linalg::cr(0.0));
            continue;
        }
        let m = x.block(blk);
        let herm = (m + m.adjoint()) * crate::linalg::cr(0.5);
        *x.block_mut(blk) = clip_spectrum(&herm, 0.0, 1.0);
    }
}

/// Minimize the max tower defect by projected subgradient descent with
/// random restarts.  Deterministic given `seed`; the best tower across
/// restarts is returned (ties keep the earliest restart) together with its
/// certified defect report.  Failure to reach `ε` returns the best found —
/// this is evidence, never a lower-bound certificate.
pub fn search_tower(
    action: &PartialAction,
    k: usize,
    f_set: &[Element],
    epsilon: f64,
    seed: u64,
    restarts: usize,
    iters: usize,
    commuting: bool,
) -> Result<(RokhlinTower, DefectReport)> {
    let laws = validate_partial_action(action, TOWER_GATE);
    if !laws.passed() {
        return Err(Error::Precondition(format!(
            "search_tower: partial-action laws violated: {}",
            laws.worst().expect("non-empty report")
        )));
    }
    if f_set.iter().any(|x| x.algebra() != action.algebra()) {
        return Err(Error::Shape("test-set element of a different algebra".into()));
    }
    let grp = action.group();
    let levels = k + 1;
    let instances = build_instances(action, f_set, levels, commuting);

    let mut best: Option<(f64, Vec<Vec<Element>>)> = None;
    for restart in 0..restarts.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(
            seed.wrapping_add((restart as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)),
        );
        let mut members: Vec<Vec<Element>> = (0..levels)
            .map(|_| {
                grp.elements()
                    .map(|g| {
                        let mut x = action.algebra().zero();
                        for &blk in action.ideal(g).block_set() {
                            let d = action.algebra().block_dims()[blk];
                            *x.block_mut(blk) =
                                clip_spectrum(&random_hermitian(&mut rng, d), 0.0, 1.0);
                        }
                        x
                    })
                    .collect()
            })
            .collect();

        let mut lr = LEARNING_RATE;
        let mut local_best: Option<(f64, Vec<Vec<Element>>)> = None;
        for it in 0..=iters {
            let (obj, ties) = evaluate(action, &members, f_set, &instances)?;
            if local_best.as_ref().is_none_or(|(b, _)| obj < *b) {
                local_best = Some((obj, members.clone()));
            }
            if it == iters || obj < 1e-15 {
                break;
            }
            if it > 0 && it % DECAY_EVERY == 0 {
                lr *= DECAY_FACTOR;
            }

            let mut grad: Vec<Vec<Element>> = (0..levels)
                .map(|_| (0..grp.order()).map(|_| action.algebra().zero()).collect())
                .collect();
            if ties.len() == 1 {
                let (i, blk) = ties[0];
                analytic_gradient(action, &members, f_set, &instances[i], blk, &mut grad)?;
            } else {
                fd_gradient(action, &mut members, f_set, &instances, &mut grad)?;
            }
            // Polyak-normalized step towards objective 0: the step length
            // shrinks with the objective, so the iterates contract onto an
            // exact tower when one exists instead of orbiting it at a
            // radius set by the learning rate.
            let norm2: f64 = grad
                .iter()
                .flatten()
                .flat_map(|e| e.blocks())
                .map(|b| b.norm_squared())
                .sum();
            if norm2 < 1e-18 {
                continue;
            }
            let step_scale = -lr * obj / norm2;
            for j in 0..levels {
                for g in grp.elements() {
                    let step = grad[j][g].scale(crate::linalg::cr(step_scale));
                    members[j][g] = members[j][g].add(&step)?;
                    project_member(action, g, &mut members[j][g]);
                }
            }
        }
        let (obj, tower) = local_best.expect("at least one evaluation");
        if best.as_ref().is_none_or(|(b, _)| obj < *b) {
            best = Some((obj, tower));
        }
    }
    let (_, members) = best.expect("at least one restart");
    let tower = RokhlinTower::new(members)?;
    let report = check_tower(action, &tower, f_set, epsilon, commuting)?;
    Ok((tower, report))
}

/// The smallest `k ≤ k_max` whose searched tower certifies all defects
/// below `ε`, using the default search budget.  `None` means the search
/// found no tower — an upper bound failed to materialize, not a lower
/// bound.
pub fn estimate_rokhlin_dim(
    action: &PartialAction,
    k_max: usize,
    epsilon: f64,
    f_set: &[Element],
    seed: u64,
) -> Result<Option<usize>> {
    for k in 0..=k_max {
        let (_, report) = search_tower(
            action,
            k,
            f_set,
            epsilon,
            seed,
            DEFAULT_RESTARTS,
            DEFAULT_ITERS,
            false,
        )?;
        if report.passed() {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// Transport a tower along the (unital) composite `μ_{n,target}` of an
/// inductive sequence.  Unital *-homomorphisms preserve positivity,
/// contractivity and (by equivariance) ideal membership, so the image is a
/// valid tower at the target stage.
pub fn pushforward_tower(
    sys: &InductiveSystem,
    n: usize,
    tower: &RokhlinTower,
    target: usize,
) -> Result<RokhlinTower> {
    if tower.algebra() != sys.stage(n).algebra() {
        return Err(Error::Shape("tower does not live on stage n".into()));
    }
    if tower.members()[0].len() != sys.stage(n).group().order() {
        return Err(Error::Shape("tower width does not match the group".into()));
    }
    for i in n..target.min(sys.num_stages() - 1) {
        if !sys.map(i).is_unital() {
            return Err(Error::Precondition(format!(
                "pushforward requires unital connecting maps; map {i} is not unital"
            )));
        }
    }
    let mu = sys.stage_map(n, target)?;
    let members = tower
        .members()
        .iter()
        .map(|row| row.iter().map(|m| mu.apply(m)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    RokhlinTower::new(members)
}

/// The canonical test set: the unit, the minimal central projections, and
/// the units of the domain ideals (duplicates removed).
pub fn canonical_test_set(action: &PartialAction) -> Vec<Element> {
    let a = action.algebra();
    let mut out: Vec<Element> = vec![a.unit()];
    let push_unique = |out: &mut Vec<Element>, x: Element| {
        if out.iter().all(|y| y.distance(&x) > 1e-12) {
            out.push(x);
        }
    };
    for k in 0..a.num_blocks() {
        push_unique(&mut out, a.central_projection(k).expect("valid block"));
    }
    for g in action.group().elements() {
        let u = action.ideal(g).unit();
        if !u.is_zero(0.0) {
            push_unique(&mut out, u);
        }
    }
    out
}

/// The lower-bound oracle for single-level towers on the half-domain
/// two-block system.  Both blocks are 1×1, so any candidate is
/// `f_{0,e} = diag(a, b)`, `f_{0,s} = diag(c, 0)` with `a, b, c ∈ [0, 1]`,
/// and every defect is explicit: `d1 = |a−c|`, `d2 = ac`,
/// `d3 = max(|a+c−1|, |b−1|)`, `d4 = 0`.  Taking the free variable `b = 1`,
/// the best possible max defect is the minimum of
/// `max(|a+c−1|, |a−c|, ac)` over the unit square, scanned here on a grid
/// with the given step.  The true minimum is `1/6`, attained off the
/// diagonal at `(a, c) = (1/2, 1/3)` where all three terms agree.
pub fn half_domain_grid_oracle(step: f64) -> f64 {
    let mut best = f64::INFINITY;
    let mut a = 0.0f64;
    while a <= 1.0 {
        let mut c = 0.0f64;
        while c <= 1.0 {
            best = best.min((a + c - 1.0).abs().max((a - c).abs()).max(a * c));
            c += step;
        }
        a += step;
    }
    best
}
