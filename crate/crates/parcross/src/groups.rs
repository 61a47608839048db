//! Finite groups given by Cayley tables, and partial representations.
//!
//! A partial representation of a group `G` in a unital algebra assigns to
//! each `g` an element `u_g` with `u_e = 1`, `u_{g⁻¹} = u_g*`, and the two
//! one-sided multiplicativity laws `u_g u_h u_{h⁻¹} = u_{gh} u_{h⁻¹}` and
//! `u_{g⁻¹} u_g u_h = u_{g⁻¹} u_{gh}`.  Unlike a unitary representation the
//! `u_g` may be partial isometries.  Nested families of partial
//! representations (each stage acting on a leading coordinate subspace of
//! the next) extend to a single partial representation on the union.

use crate::linalg::{op_norm_mat, CMat};
use crate::report::Report;
use crate::{Error, Result};

/// First violated group axiom, in validation order.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GroupError {
    #[error("table is not square: {rows} rows, row {row} has {cols} entries")]
    NotSquare { rows: usize, row: usize, cols: usize },
    #[error("entry table[{row}][{col}] = {value} is out of range for order {order}")]
    EntryOutOfRange { row: usize, col: usize, value: usize, order: usize },
    #[error("row {index} is not a permutation (table is not a Latin square)")]
    RowNotPermutation { index: usize },
    #[error("column {index} is not a permutation (table is not a Latin square)")]
    ColumnNotPermutation { index: usize },
    #[error("not associative: ({i}·{j})·{k} ≠ {i}·({j}·{k})")]
    NotAssociative { i: usize, j: usize, k: usize },
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("element {element} has no two-sided inverse")]
    NoInverse { element: usize },
}

impl From<GroupError> for Error {
    fn from(e: GroupError) -> Error {
        Error::Precondition(format!("invalid group table: {e}"))
    }
}

/// A finite group with elements `0..order`, multiplication by table lookup.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
    names: Option<Vec<String>>,
}

impl FiniteGroup {
    /// Validate a Cayley table.  Checks, in order: squareness, entry range,
    /// Latin-square rows and columns, associativity of every triple, a
    /// two-sided identity, and two-sided inverses; reports the first
    /// violation found.
    pub fn from_table(table: Vec<Vec<usize>>) -> std::result::Result<FiniteGroup, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::NotSquare { rows: 0, row: 0, cols: 0 });
        }
        for (r, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::NotSquare { rows: n, row: r, cols: row.len() });
            }
            for (c, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(GroupError::EntryOutOfRange { row: r, col: c, value: v, order: n });
                }
            }
        }
        for i in 0..n {
            let mut seen_row = vec![false; n];
            let mut seen_col = vec![false; n];
            for j in 0..n {
                seen_row[table[i][j]] = true;
                seen_col[table[j][i]] = true;
            }
            if seen_row.iter().any(|s| !s) {
                return Err(GroupError::RowNotPermutation { index: i });
            }
            if seen_col.iter().any(|s| !s) {
                return Err(GroupError::ColumnNotPermutation { index: i });
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if table[table[i][j]][k] != table[i][table[j][k]] {
                        return Err(GroupError::NotAssociative { i, j, k });
                    }
                }
            }
        }
        // A finite associative Latin square is always a group, so the two
        // remaining checks are defensive.
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or(GroupError::NoIdentity)?;
        let mut inverses = vec![0usize; n];
        for g in 0..n {
            inverses[g] = (0..n)
                .find(|&h| table[g][h] == identity && table[h][g] == identity)
                .ok_or(GroupError::NoInverse { element: g })?;
        }
        Ok(FiniteGroup { table, identity, inverses, names: None })
    }

    /// The cyclic group ℤ/n, elements `0..n`, addition mod n.
    pub fn cyclic(n: usize) -> Result<FiniteGroup> {
        if n == 0 {
            return Err(Error::Precondition("cyclic group order must be positive".into()));
        }
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        Ok(FiniteGroup::from_table(table)?)
    }

    /// The one-element group.
    pub fn trivial() -> FiniteGroup {
        FiniteGroup::cyclic(1).expect("order 1 is positive")
    }

    /// Attach display labels, one per element.
    pub fn with_names<S: Into<String>>(mut self, names: Vec<S>) -> Result<FiniteGroup> {
        if names.len() != self.order() {
            return Err(Error::Shape(format!(
                "expected {} names, got {}",
                self.order(),
                names.len()
            )));
        }
        self.names = Some(names.into_iter().map(Into::into).collect());
        Ok(self)
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g][h]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inverses[g]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    /// Display label of an element (`g{index}` when unnamed).
    pub fn name(&self, g: usize) -> String {
        match &self.names {
            Some(names) => names[g].clone(),
            None => format!("g{g}"),
        }
    }

    /// Same underlying Cayley table (names ignored).
    pub fn same_table(&self, other: &FiniteGroup) -> bool {
        self.table == other.table
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }
}

/// A family of square matrices `u_g`, one per group element, intended to be
/// a partial representation.  Construction checks shapes only; the algebraic
/// laws are measured by [`check_partial_rep`].
#[derive(Debug, Clone)]
pub struct PartialRep {
    group: FiniteGroup,
    mats: Vec<CMat>,
}

impl PartialRep {
    pub fn new(group: FiniteGroup, mats: Vec<CMat>) -> Result<PartialRep> {
        if mats.len() != group.order() {
            return Err(Error::Shape(format!(
                "expected {} matrices (one per group element), got {}",
                group.order(),
                mats.len()
            )));
        }
        let d = mats[0].nrows();
        if d == 0 || mats.iter().any(|m| m.nrows() != d || m.ncols() != d) {
            return Err(Error::Shape(
                "partial representation matrices must be square, same-sized, nonempty".into(),
            ));
        }
        Ok(PartialRep { group, mats })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.mats[0].nrows()
    }

    pub fn mat(&self, g: usize) -> &CMat {
        &self.mats[g]
    }

    pub fn mats(&self) -> &[CMat] {
        &self.mats
    }
}

/// Measure the four partial-representation laws; passes iff every defect is
/// within `tol`.
pub fn check_partial_rep(u: &PartialRep, tol: f64) -> Report {
    let grp = u.group();
    let d = u.dim();
    let mut report = Report::new();
    report.push(
        "identity_element",
        op_norm_mat(&(u.mat(grp.identity()) - CMat::identity(d, d))),
        tol,
    );
    for g in grp.elements() {
        report.push_max(
            "adjoint_matches_inverse",
            op_norm_mat(&(u.mat(grp.inv(g)) - u.mat(g).adjoint())),
            tol,
        );
        for h in grp.elements() {
            let hinv = grp.inv(h);
            let left = u.mat(g) * u.mat(h) * u.mat(hinv) - u.mat(grp.mul(g, h)) * u.mat(hinv);
            report.push_max("left_partial_multiplicativity", op_norm_mat(&left), tol);
            let ginv = grp.inv(g);
            let right = u.mat(ginv) * u.mat(g) * u.mat(h) - u.mat(ginv) * u.mat(grp.mul(g, h));
            report.push_max("right_partial_multiplicativity", op_norm_mat(&right), tol);
        }
    }
    report
}

/// Extend a nested family of partial representations to one on the largest
/// space.
///
/// Stage `i` must act on a leading coordinate subspace of stage `j` for every
/// `i ≤ j`: the top-left `d_i×d_i` corner of `u^{(j)}_g` must equal
/// `u^{(i)}_g`, and the leading subspace must be invariant under every
/// `u^{(j)}_g`.  Because `u_{g⁻¹} = u_g*`, invariance under all the `u_g`
/// forces the off-corner blocks on *both* sides to vanish, so the defect
/// measures the lower-left and upper-right blocks together.  On the union of
/// the leading subspaces the stages then agree, so the last representation
/// *is* the extension; it is returned together with a certificate report
/// covering every pair of stages.  A violated nesting fails with the
/// offending stage pair and group element.
pub fn extend_nested_partial_reps(
    reps: &[PartialRep],
    tol: f64,
) -> Result<(PartialRep, Report)> {
    if reps.is_empty() {
        return Err(Error::Precondition("no representations to extend".into()));
    }
    for w in reps.windows(2) {
        if !w[0].group().same_table(w[1].group()) {
            return Err(Error::Precondition(
                "all stages must represent the same group".into(),
            ));
        }
        if w[0].dim() > w[1].dim() {
            return Err(Error::Precondition(
                "stage dimensions must be non-decreasing".into(),
            ));
        }
    }
    let mut report = Report::new();
    for i in 0..reps.len() {
        for j in i + 1..reps.len() {
            let di = reps[i].dim();
            let dj = reps[j].dim();
            let mut worst = 0.0f64;
            let mut worst_g = 0;
            for g in reps[i].group().elements() {
                let big = reps[j].mat(g);
                let corner = big.view((0, 0), (di, di)).into_owned();
                let corner_defect = op_norm_mat(&(corner - reps[i].mat(g)));
                let leak_in = op_norm_mat(&big.view((di, 0), (dj - di, di)).into_owned());
                let leak_out = op_norm_mat(&big.view((0, di), (di, dj - di)).into_owned());
                let defect = corner_defect.max(leak_in).max(leak_out);
                if defect > worst {
                    worst = defect;
                    worst_g = g;
                }
            }
            if worst > tol {
                return Err(Error::Precondition(format!(
                    "stage {i} is not a sub-partial representation of stage {j}: \
                     defect {worst:.3e} at group element {} exceeds tol {tol:.1e}",
                    reps[i].group().name(worst_g)
                )));
            }
            report.push(format!("stage{i}_within_stage{j}"), worst, tol);
        }
    }
    Ok((reps[reps.len() - 1].clone(), report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{cr, random_unitary, C64, ONE, ZERO};
    use crate::DEFAULT_TOL;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn z2_table_is_valid() {
        let g = FiniteGroup::from_table(vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.identity(), 0);
        assert_eq!(g.inv(1), 1);
        assert_eq!(g.mul(1, 1), 0);
    }

    #[test]
    fn non_latin_square_rejected() {
        let err = FiniteGroup::from_table(vec![vec![0, 1], vec![0, 1]]).unwrap_err();
        assert_eq!(err, GroupError::ColumnNotPermutation { index: 0 });
    }

    #[test]
    fn non_associative_latin_square_rejected() {
        // A quasigroup of order 3 with a left identity only.
        let err = FiniteGroup::from_table(vec![
            vec![0, 1, 2],
            vec![2, 0, 1],
            vec![1, 2, 0],
        ])
        .unwrap_err();
        assert!(matches!(err, GroupError::NotAssociative { .. }));
    }

    #[test]
    fn out_of_range_and_ragged_tables_rejected() {
        assert!(matches!(
            FiniteGroup::from_table(vec![vec![0, 5], vec![1, 0]]).unwrap_err(),
            GroupError::EntryOutOfRange { .. }
        ));
        assert!(matches!(
            FiniteGroup::from_table(vec![vec![0, 1], vec![1]]).unwrap_err(),
            GroupError::NotSquare { .. }
        ));
    }

    #[test]
    fn all_small_cyclic_groups_validate() {
        for n in 1..=12 {
            let g = FiniteGroup::cyclic(n).unwrap();
            assert_eq!(g.order(), n);
            assert_eq!(g.identity(), 0);
            for k in 0..n {
                assert_eq!(g.mul(k, g.inv(k)), 0);
            }
        }
    }

    #[test]
    fn symmetric_group_from_permutation_composition() {
        // All 6 permutations of three points, composed as functions.
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [1, 2, 0],
            [2, 0, 1],
            [0, 2, 1],
            [2, 1, 0],
            [1, 0, 2],
        ];
        let index_of = |p: &[usize; 3]| perms.iter().position(|q| q == p).unwrap();
        let table: Vec<Vec<usize>> = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| {
                        // (p ∘ q)(x) = p[q[x]]
                        let composed = [p[q[0]], p[q[1]], p[q[2]]];
                        index_of(&composed)
                    })
                    .collect()
            })
            .collect();
        let g = FiniteGroup::from_table(table).unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(g.identity(), 0);
        // non-abelian: a 3-cycle and a transposition do not commute
        assert_ne!(g.mul(1, 3), g.mul(3, 1));
    }

    fn z2() -> FiniteGroup {
        FiniteGroup::cyclic(2).unwrap()
    }

    #[test]
    fn projection_valued_rep_of_z2_passes() {
        let p = CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, ZERO]);
        let u = PartialRep::new(z2(), vec![CMat::identity(2, 2), p]).unwrap();
        let report = check_partial_rep(&u, DEFAULT_TOL);
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn nilpotent_rep_of_z2_fails_adjoint_law() {
        let n = CMat::from_row_slice(2, 2, &[ZERO, ONE, ZERO, ZERO]);
        let u = PartialRep::new(z2(), vec![CMat::identity(2, 2), n]).unwrap();
        let report = check_partial_rep(&u, DEFAULT_TOL);
        assert!(!report.passed());
        assert!(report.defect_of("adjoint_matches_inverse").unwrap() > 0.5);
    }

    #[test]
    fn unitary_representations_are_partial_representations() {
        // ℤ/3 acting by rotation unitaries on ℂ².
        let g = FiniteGroup::cyclic(3).unwrap();
        let theta = 2.0 * std::f64::consts::PI / 3.0;
        let rot = |t: f64| {
            CMat::from_row_slice(
                2,
                2,
                &[
                    cr(t.cos()),
                    cr(-t.sin()),
                    cr(t.sin()),
                    cr(t.cos()),
                ],
            )
        };
        let u = PartialRep::new(g, vec![rot(0.0), rot(theta), rot(2.0 * theta)]).unwrap();
        assert!(check_partial_rep(&u, DEFAULT_TOL).passed());
    }

    #[test]
    fn u_g_u_ginv_is_selfadjoint_idempotent_for_random_projection_reps() {
        // For ℤ/2 any self-adjoint projection p gives a partial
        // representation u_s = p; verify the general consequence
        // e_g = u_g u_{g⁻¹} is a self-adjoint idempotent.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let w = random_unitary(&mut rng, 3);
            let mut p = CMat::zeros(3, 3);
            for j in 0..2 {
                let col = w.column(j).into_owned();
                p += &col * col.adjoint();
            }
            let u = PartialRep::new(z2(), vec![CMat::identity(3, 3), p]).unwrap();
            assert!(check_partial_rep(&u, 1e-9).passed());
            for g in u.group().elements() {
                let e: CMat = u.mat(g) * u.mat(u.group().inv(g));
                assert!(op_norm_mat(&(&e - e.adjoint())) < 1e-9);
                assert!(op_norm_mat(&(&e * &e - &e)) < 1e-9);
            }
        }
    }

    #[test]
    fn nested_extension_accepts_corner_nesting() {
        let small = PartialRep::new(z2(), vec![CMat::identity(1, 1), CMat::identity(1, 1)])
            .unwrap();
        let p = CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, ZERO]);
        let big = PartialRep::new(z2(), vec![CMat::identity(2, 2), p]).unwrap();
        let (ext, cert) =
            extend_nested_partial_reps(&[small.clone(), big.clone()], DEFAULT_TOL).unwrap();
        assert_eq!(ext.dim(), 2);
        assert!(cert.passed());
        assert!(cert.defect_of("stage0_within_stage1").is_some());

        // A constant sequence extends to itself.
        let (same, cert2) = extend_nested_partial_reps(&[big.clone(), big], DEFAULT_TOL).unwrap();
        assert_eq!(same.dim(), 2);
        assert!(cert2.passed());
    }

    #[test]
    fn nested_extension_rejects_corner_mismatch() {
        let small = PartialRep::new(z2(), vec![CMat::identity(1, 1), CMat::identity(1, 1)])
            .unwrap();
        let bad = CMat::from_row_slice(2, 2, &[ONE, ONE, ZERO, ZERO]);
        let big = PartialRep::new(z2(), vec![CMat::identity(2, 2), bad]).unwrap();
        let err = extend_nested_partial_reps(&[small, big], DEFAULT_TOL).unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains("stage 0"), "{msg}");
        assert!(msg.contains("stage 1"), "{msg}");
    }

    #[test]
    fn nested_extension_rejects_subspace_leak() {
        // Corner matches but the leading subspace is not invariant.
        let small = PartialRep::new(z2(), vec![CMat::identity(1, 1), CMat::zeros(1, 1)])
            .unwrap();
        let mut leak = CMat::zeros(2, 2);
        leak[(1, 0)] = C64::new(1.0, 0.0);
        let big = PartialRep::new(z2(), vec![CMat::identity(2, 2), leak]).unwrap();
        assert!(extend_nested_partial_reps(&[small, big], DEFAULT_TOL).is_err());
    }
}
