//! Tracial states on multi-matrix algebras and their interaction with
//! partial actions, crossed products, and inductive sequences.
//!
//! Every tracial state on `⊕_k M_{n_k}` is `τ(x) = Σ_k w_k·Tr(x_k)` for
//! nonnegative block weights with `Σ_k w_k·n_k = 1`, so traces are stored as
//! weight vectors and all trace conditions become exact linear algebra.
//! The central fact exercised here: `τ∘E` is a tracial state on the crossed
//! product exactly when `τ` is invariant under the partial action, and for
//! inductive sequences of invariant traces the limit trace composed with the
//! limit expectation agrees with the limit of the stage functionals.

use crate::crossed::{cp_adjoint, cp_multiply, CrossedProductAlgebra};
use crate::fdalg::{Element, FdCStarAlgebra, StarHom};
use crate::inductive::InductiveSystem;
use crate::linalg::cr;
use crate::partial_action::PartialAction;
use crate::report::Report;
use crate::{Error, Result};
use num_complex::Complex;

/// A tracial state `τ(x) = Σ_k w_k·Tr(x_k)`, stored as block weights.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceWeights {
    algebra: FdCStarAlgebra,
    weights: Vec<f64>,
}

impl TraceWeights {
    /// Gate on the state normalization `Σ_k w_k·n_k = 1` at construction.
    const NORMALIZATION_GATE: f64 = 1e-9;

    pub fn new(algebra: FdCStarAlgebra, weights: Vec<f64>) -> Result<TraceWeights> {
        if weights.len() != algebra.num_blocks() {
            return Err(Error::Shape(format!(
                "trace weights: {} blocks, {} weights",
                algebra.num_blocks(),
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|&&w| !(w >= 0.0)) {
            return Err(Error::Precondition(format!(
                "trace weights must be nonnegative, got {w}"
            )));
        }
        let mass: f64 = weights
            .iter()
            .zip(algebra.block_dims())
            .map(|(&w, &n)| w * n as f64)
            .sum();
        if (mass - 1.0).abs() > Self::NORMALIZATION_GATE {
            return Err(Error::Precondition(format!(
                "trace weights not normalized: Σ w_k·n_k = {mass}, expected 1"
            )));
        }
        Ok(TraceWeights { algebra, weights })
    }

    /// Rescale raw nonnegative weights to a state.
    pub fn normalized(algebra: FdCStarAlgebra, raw: Vec<f64>) -> Result<TraceWeights> {
        let mass: f64 = raw
            .iter()
            .zip(algebra.block_dims())
            .map(|(&w, &n)| w * n as f64)
            .sum();
        if !(mass > 0.0) {
            return Err(Error::Precondition(
                "trace weights: total mass must be positive".into(),
            ));
        }
        TraceWeights::new(algebra, raw.into_iter().map(|w| w / mass).collect())
    }

    /// The normalized trace `Tr/N` (equal weight on every coordinate).
    pub fn uniform(algebra: &FdCStarAlgebra) -> TraceWeights {
        let n = algebra.rep_dim() as f64;
        TraceWeights::new(algebra.clone(), vec![1.0 / n; algebra.num_blocks()])
            .expect("uniform weights are normalized")
    }

    pub fn algebra(&self) -> &FdCStarAlgebra {
        &self.algebra
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn is_faithful(&self) -> bool {
        self.weights.iter().all(|&w| w > 0.0)
    }

    pub fn eval(&self, x: &Element) -> Result<Complex<f64>> {
        if x.algebra() != &self.algebra {
            return Err(Error::Shape("trace: element of a different algebra".into()));
        }
        Ok(x.blocks()
            .iter()
            .zip(&self.weights)
            .map(|(b, &w)| b.trace() * cr(w))
            .sum())
    }

    /// Pull back along a *-homomorphism into this algebra: the trace of the
    /// image, as weights on the source (`w_k ← Σ_l m_{lk}·w_l`).
    pub fn pullback(&self, phi: &StarHom) -> Result<TraceWeights> {
        if phi.target() != &self.algebra {
            return Err(Error::Shape(
                "trace pullback: homomorphism must land in the trace's algebra".into(),
            ));
        }
        let ks = phi.source().num_blocks();
        let mut weights = vec![0.0; ks];
        for (l, row) in phi.multiplicity().iter().enumerate() {
            for (k, &m) in row.iter().enumerate() {
                weights[k] += m as f64 * self.weights[l];
            }
        }
        // The pullback of a state is a state only when φ is unital; callers
        // that feed non-unital maps get the honest (sub-normalized) weights
        // rejected here.
        TraceWeights::new(phi.source().clone(), weights)
    }
}

/// Invariance of a trace under a partial action: `τ(a) = τ(α_{g⁻¹}(a))` for
/// `a ∈ D_g` (measured on matrix units, reported as `invariance`).
pub fn check_invariance(tau: &TraceWeights, action: &PartialAction, tol: f64) -> Result<Report> {
    if tau.algebra() != action.algebra() {
        return Err(Error::Shape(
            "invariance check: trace and action live on different algebras".into(),
        ));
    }
    let mut report = Report::new();
    report.push("invariance", 0.0, tol);
    for g in action.group().elements() {
        let back = action.iso(action.group().inv(g));
        for a in action.ideal(g).matrix_units() {
            let defect = (tau.eval(&a)? - tau.eval(&back.apply_unchecked(&a))?).norm();
            report.push_max("invariance", defect, tol);
        }
    }
    Ok(report)
}

/// The functional `τ∘E` on a crossed product, with its trace-property
/// report:
///
/// - `trace_property`: max over basis pairs of `|τE(xy) − τE(yx)|`;
/// - `positivity`: `τE(x*x) ≥ 0` on the basis and on random-ish sums;
/// - `normalization`: `τE(1δ_e) = 1`;
/// - `equivalence_forward` / `equivalence_backward`: the trace defect is
///   small iff the invariance defect is small (both implications measured).
pub fn trace_on_crossed(
    tau: &TraceWeights,
    cp: &CrossedProductAlgebra,
    tol: f64,
) -> Result<Report> {
    if tau.algebra() != cp.system().algebra() {
        return Err(Error::Shape(
            "trace on crossed product: trace lives on a different algebra".into(),
        ));
    }
    let te = |x: &crate::crossed::CrossedElement| -> Result<Complex<f64>> {
        tau.eval(&crate::crossed::conditional_expectation(x))
    };
    let mut report = Report::new();
    let basis = cp.basis_elements();
    let mut trace_defect: f64 = 0.0;
    for x in &basis {
        for y in &basis {
            let xy = te(&cp_multiply(x, y)?)?;
            let yx = te(&cp_multiply(y, x)?)?;
            trace_defect = trace_defect.max((xy - yx).norm());
        }
    }
    report.push("trace_property", trace_defect, tol);

    let mut positivity: f64 = 0.0;
    for x in &basis {
        let val = te(&cp_multiply(&cp_adjoint(x)?, x)?)?;
        positivity = positivity.max((-val.re).max(val.im.abs()));
    }
    report.push("positivity", positivity, tol);

    let unit = cp.unit()?;
    report.push("normalization", (te(&unit)? - cr(1.0)).norm(), tol);

    let invariance = check_invariance(tau, cp.system(), tol)?
        .defect_of("invariance")
        .expect("invariance check always records its defect");
    report.push(
        "equivalence_forward",
        if invariance <= tol && trace_defect > tol { 1.0 } else { 0.0 },
        tol,
    );
    report.push(
        "equivalence_backward",
        if trace_defect <= tol && invariance > tol { 1.0 } else { 0.0 },
        tol,
    );
    Ok(report)
}

/// Stage-wise compatibility (`τ_{i+1}∘φ_i = τ_i`, via the exact weight
/// pullback rule) and G-invariance of every stage trace.
pub fn validate_trace_sequence(
    sys: &InductiveSystem,
    taus: &[TraceWeights],
    tol: f64,
) -> Result<Report> {
    if taus.len() != sys.num_stages() {
        return Err(Error::Shape(format!(
            "trace sequence: {} stages, {} traces",
            sys.num_stages(),
            taus.len()
        )));
    }
    let mut report = Report::new();
    for (i, tau) in taus.iter().enumerate() {
        if tau.algebra() != sys.stage(i).algebra() {
            return Err(Error::Shape(format!(
                "trace sequence: trace {i} lives on a different algebra than stage {i}"
            )));
        }
        let inv = check_invariance(tau, sys.stage(i), tol)?;
        report.merge(&format!("stage{i}"), inv);
        if i + 1 < taus.len() {
            let pulled = taus[i + 1].pullback(sys.map(i))?;
            let defect = pulled
                .weights()
                .iter()
                .zip(tau.weights())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            report.push(format!("compatibility{i}"), defect, tol);
        }
    }
    Ok(report)
}

/// The limit-trace identity on a stabilized system: realizing `lim τ_i` as
/// `τ_N`, the functional `τ_N∘E_N` on the `N`-th crossed product agrees with
/// every stage functional `τ_i∘E_i` transported along the induced maps
/// (checked on the full basis of each stage crossed product), and is itself
/// a trace.
pub fn verify_trace_limit_identity(
    sys: &InductiveSystem,
    taus: &[TraceWeights],
    n: usize,
    tol: f64,
) -> Result<Report> {
    let seq = validate_trace_sequence(sys, taus, tol)?;
    if !seq.passed() {
        return Err(Error::Precondition(format!(
            "trace sequence invalid: {}",
            seq.worst().expect("non-empty report")
        )));
    }
    sys.require_stabilized_by(n)?;
    let mut report = Report::new();
    let cp_n = sys.crossed_stage(n)?;
    let tau_n = &taus[n];
    report.merge("limit", trace_on_crossed(tau_n, &cp_n, tol)?);

    for i in 0..=n {
        let cp_i = sys.crossed_stage(i)?;
        let forward = sys.crossed_map_elements(i, n)?;
        let mut defect: f64 = 0.0;
        for (x, fx) in cp_i.basis_elements().iter().zip(&forward) {
            let lhs = taus[i].eval(&crate::crossed::conditional_expectation(x))?;
            let rhs = tau_n.eval(&crate::crossed::conditional_expectation(fx))?;
            defect = defect.max((lhs - rhs).norm());
        }
        report.push(format!("stage{i}_functional_agrees"), defect, tol);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::DEFAULT_TOL;

    #[test]
    fn weights_validate_normalization_and_faithfulness() {
        let a = FdCStarAlgebra::new(vec![2, 1]).unwrap();
        // Σ w·n = 0.25·2 + 0.5·1 = 1
        let tau = TraceWeights::new(a.clone(), vec![0.25, 0.5]).unwrap();
        assert!(tau.is_faithful());
        assert!(!TraceWeights::new(a.clone(), vec![0.5, 0.0]).unwrap().is_faithful());
        assert!(TraceWeights::new(a.clone(), vec![0.5, 0.5]).is_err());
        assert!(TraceWeights::new(a.clone(), vec![-0.25, 1.5]).is_err());
        let uni = TraceWeights::uniform(&a);
        assert_eq!(uni.weights(), &[1.0 / 3.0, 1.0 / 3.0]);
        let e = a.unit();
        assert!((uni.eval(&e).unwrap().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn invariance_of_flip_balanced_vs_skewed() {
        let s1 = fixtures::s1();
        let a = s1.algebra().clone();
        let balanced = TraceWeights::new(a.clone(), vec![0.5, 0.5]).unwrap();
        assert!(check_invariance(&balanced, &s1, DEFAULT_TOL).unwrap().passed());

        let skewed = TraceWeights::new(a, vec![0.7, 0.3]).unwrap();
        let report = check_invariance(&skewed, &s1, DEFAULT_TOL).unwrap();
        assert!(!report.passed());
        let defect = report.defect_of("invariance").unwrap();
        assert!((defect - 0.4).abs() < 1e-12, "defect {defect}");
    }

    #[test]
    fn zero_domain_is_vacuously_invariant() {
        let s3 = fixtures::s3();
        let tau = TraceWeights::uniform(s3.algebra());
        assert!(check_invariance(&tau, &s3, DEFAULT_TOL).unwrap().passed());
    }

    #[test]
    fn pullback_matches_functional_composition() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for _ in 0..25 {
            let phi = fixtures::random_canonical_hom(&mut rng, &[1, 2], &[3, 2], true).unwrap();
            let tau = fixtures::random_faithful_trace(&mut rng, phi.target());
            let pulled = tau.pullback(&phi).unwrap();
            for _ in 0..4 {
                let x = fixtures::random_element(&mut rng, phi.source());
                let lhs = tau.eval(&phi.apply(&x).unwrap()).unwrap();
                let rhs = pulled.eval(&x).unwrap();
                assert!((lhs - rhs).norm() < 1e-9, "pullback mismatch");
            }
        }
    }
}
