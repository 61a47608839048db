//! On-disk JSON schema for systems, sequences, towers, and traces, plus the
//! conversions to and from the library types.
//!
//! Conventions:
//! - A complex matrix is a two-element array `[re, im]` of real matrices
//!   (row-major `Vec<Vec<f64>>`), both with the same shape.
//! - An element of a multi-matrix algebra is an array of complex matrices,
//!   one per block, in block order.
//! - Group elements are referred to by name everywhere.  The identity never
//!   appears in an `action` map (it always acts as the identity); every
//!   other element must appear, either as a map description or as the
//!   explicit marker string `"zero"` for an empty domain.  Nothing is
//!   defaulted silently.
//! - Every parse or shape error names the offending field path, e.g.
//!   `system.action.s.unitaries[0]` or `group.table`.

use std::collections::BTreeMap;
use std::fmt;

use parcross::fdalg::{Element, FdCStarAlgebra, StarHom};
use parcross::groups::FiniteGroup;
use parcross::inductive::{InductiveSystem, Tail};
use parcross::linalg::{c, CMat};
use parcross::partial_action::{PartialAction, PartialIso};
use parcross::rokhlin::RokhlinTower;
use parcross::traces::TraceWeights;
use serde::{Deserialize, Serialize};

/// Any error the CLI reports to the user before (or instead of) producing a
/// report: unreadable files, malformed JSON, schema violations, or library
/// preconditions.  All of them exit with code 2.
#[derive(Debug)]
pub struct CliError(pub String);

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for CliError {}

pub fn input(msg: impl fmt::Display) -> CliError {
    CliError(msg.to_string())
}

/// `at("system.action.s", err)` → `CliError("system.action.s: <err>")`.
pub fn at(path: &str, err: impl fmt::Display) -> CliError {
    CliError(format!("{path}: {err}"))
}

// ---------------------------------------------------------------------------
// Serde surface
// ---------------------------------------------------------------------------

/// A complex matrix as a `[re, im]` pair of equal-shape real matrices.
pub type CMatDesc = (Vec<Vec<f64>>, Vec<Vec<f64>>);

/// An algebra element: one complex matrix per block.
pub type ElementDesc = Vec<CMatDesc>;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub group: GroupDesc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<SystemDesc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequence: Option<SequenceDesc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tower: Option<TowerDesc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<TraceDesc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub traces: Option<Vec<TraceDesc>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDesc {
    /// Cayley table: `table[g][h]` is the index of `g·h`.
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDesc {
    pub algebra: AlgebraDesc,
    /// One entry per non-identity group element, keyed by element name.
    pub action: BTreeMap<String, ActionEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDesc {
    pub block_dims: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ActionEntry {
    Iso(IsoDesc),
    /// Must be the string `"zero"`: the element acts on the zero ideal.
    Marker(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsoDesc {
    /// Blocks of the domain ideal `D_{g⁻¹}` (parent-algebra indices).
    pub domain_blocks: Vec<usize>,
    /// Blocks of the range ideal `D_g` (parent-algebra indices).
    pub range_blocks: Vec<usize>,
    /// `matching[i]` is the position in `range_blocks` of the image of
    /// `domain_blocks[i]`.
    pub matching: Vec<usize>,
    /// One unitary per domain block, in `domain_blocks` order.
    pub unitaries: Vec<CMatDesc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceDesc {
    pub stages: Vec<SystemDesc>,
    pub maps: Vec<HomDesc>,
    pub tail: TailDesc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomDesc {
    /// `multiplicity[l][k]`: copies of source block `k` inside target block `l`.
    pub multiplicity: Vec<Vec<usize>>,
    /// One unitary per target block (basis alignment inside that block).
    pub unitaries: Vec<CMatDesc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TailDesc {
    Stabilized { stabilized_from: usize },
    /// Must be the string `"truncated"`.
    Marker(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerDesc {
    /// For sequence files: the stage the tower lives on.  Defaults to 0.
    #[serde(default)]
    pub stage: usize,
    /// `members[j]` maps each group element name (including the identity)
    /// to the element `f_{j,g}`.
    pub members: Vec<BTreeMap<String, ElementDesc>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceDesc {
    /// One weight per block; must satisfy `Σ w_k·n_k = 1` with `w_k ≥ 0`.
    pub weights: Vec<f64>,
}

// ---------------------------------------------------------------------------
// Matrices and elements
// ---------------------------------------------------------------------------

/// Normalize `-0.0` to `0.0` so emitted JSON has no sign noise on zeros.
fn clean(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

pub fn mat_to_desc(m: &CMat) -> CMatDesc {
    let grab = |part: fn(&parcross::linalg::C64) -> f64| -> Vec<Vec<f64>> {
        (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| clean(part(&m[(i, j)]))).collect())
            .collect()
    };
    (grab(|z| z.re), grab(|z| z.im))
}

pub fn desc_to_mat(d: &CMatDesc, path: &str) -> Result<CMat, CliError> {
    let (re, im) = d;
    let rows = re.len();
    let cols = re.first().map_or(0, |r| r.len());
    if re.iter().any(|r| r.len() != cols) {
        return Err(at(path, "ragged real part: all rows must have the same length"));
    }
    if im.len() != rows || im.iter().any(|r| r.len() != cols) {
        return Err(at(
            path,
            format!("imaginary part must have the same shape as the real part ({rows}x{cols})"),
        ));
    }
    Ok(CMat::from_fn(rows, cols, |i, j| c(re[i][j], im[i][j])))
}

pub fn element_to_desc(e: &Element) -> ElementDesc {
    e.blocks().iter().map(mat_to_desc).collect()
}

pub fn desc_to_element(
    algebra: &FdCStarAlgebra,
    d: &ElementDesc,
    path: &str,
) -> Result<Element, CliError> {
    if d.len() != algebra.num_blocks() {
        return Err(at(
            path,
            format!("expected {} blocks, got {}", algebra.num_blocks(), d.len()),
        ));
    }
    let blocks = d
        .iter()
        .enumerate()
        .map(|(k, m)| desc_to_mat(m, &format!("{path}[{k}]")))
        .collect::<Result<Vec<_>, _>>()?;
    algebra.element(blocks).map_err(|e| at(path, e))
}

// ---------------------------------------------------------------------------
// Groups
// ---------------------------------------------------------------------------

pub fn build_group(desc: &GroupDesc) -> Result<FiniteGroup, CliError> {
    let g = FiniteGroup::from_table(desc.table.clone()).map_err(|e| at("group.table", e))?;
    match &desc.names {
        Some(names) => g.with_names(names.clone()).map_err(|e| at("group.names", e)),
        None => Ok(g),
    }
}

pub fn group_to_desc(group: &FiniteGroup) -> GroupDesc {
    GroupDesc {
        table: group.table().to_vec(),
        names: Some(group.elements().map(|g| group.name(g)).collect()),
    }
}

// ---------------------------------------------------------------------------
// Systems
// ---------------------------------------------------------------------------

pub fn build_system(
    group: &FiniteGroup,
    desc: &SystemDesc,
    path: &str,
) -> Result<PartialAction, CliError> {
    let algebra = FdCStarAlgebra::new(desc.algebra.block_dims.clone())
        .map_err(|e| at(&format!("{path}.algebra.block_dims"), e))?;
    let names: Vec<String> = group.elements().map(|g| group.name(g)).collect();
    let index_of: BTreeMap<&str, usize> =
        names.iter().enumerate().map(|(g, n)| (n.as_str(), g)).collect();
    let identity = group.identity();

    for key in desc.action.keys() {
        match index_of.get(key.as_str()) {
            None => {
                return Err(at(
                    &format!("{path}.action.{key}"),
                    format!("unknown group element (known: {})", names.join(", ")),
                ))
            }
            Some(&g) if g == identity => {
                return Err(at(
                    &format!("{path}.action.{key}"),
                    "the identity always acts as the identity map; omit it",
                ))
            }
            Some(_) => {}
        }
    }

    let full = algebra.full_ideal();
    let mut ideals = vec![full.clone(); group.order()];
    let mut isos = vec![PartialIso::identity_on(&full); group.order()];

    for g in group.elements().filter(|&g| g != identity) {
        let name = &names[g];
        let epath = format!("{path}.action.{name}");
        let entry = desc.action.get(name).ok_or_else(|| {
            at(
                &format!("{path}.action"),
                format!("missing entry for group element \"{name}\" (use \"zero\" for an empty domain)"),
            )
        })?;
        match entry {
            ActionEntry::Marker(s) if s == "zero" => {
                let zero = algebra.zero_ideal();
                ideals[g] = zero.clone();
                isos[g] = PartialIso::identity_on(&zero);
            }
            ActionEntry::Marker(s) => {
                return Err(at(&epath, format!("unknown marker \"{s}\" (only \"zero\" is allowed)")));
            }
            ActionEntry::Iso(iso) => {
                let domain = algebra
                    .ideal(iso.domain_blocks.clone())
                    .map_err(|e| at(&format!("{epath}.domain_blocks"), e))?;
                let range = algebra
                    .ideal(iso.range_blocks.clone())
                    .map_err(|e| at(&format!("{epath}.range_blocks"), e))?;
                let unitaries = iso
                    .unitaries
                    .iter()
                    .enumerate()
                    .map(|(i, u)| desc_to_mat(u, &format!("{epath}.unitaries[{i}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                let built = PartialIso::new(domain, range, iso.matching.clone(), unitaries)
                    .map_err(|e| at(&epath, e))?;
                ideals[g] = built.range().clone();
                isos[g] = built;
            }
        }
    }

    PartialAction::new(algebra, group.clone(), ideals, isos).map_err(|e| at(path, e))
}

pub fn system_to_desc(action: &PartialAction) -> SystemDesc {
    let group = action.group();
    let mut map = BTreeMap::new();
    for g in group.elements().filter(|&g| g != group.identity()) {
        let entry = if action.ideal(g).is_zero() {
            ActionEntry::Marker("zero".into())
        } else {
            let iso = action.iso(g);
            ActionEntry::Iso(IsoDesc {
                domain_blocks: iso.domain().block_set().to_vec(),
                range_blocks: iso.range().block_set().to_vec(),
                matching: iso.matching().to_vec(),
                unitaries: iso.unitaries().iter().map(mat_to_desc).collect(),
            })
        };
        map.insert(group.name(g), entry);
    }
    SystemDesc {
        algebra: AlgebraDesc { block_dims: action.algebra().block_dims().to_vec() },
        action: map,
    }
}

// ---------------------------------------------------------------------------
// Sequences
// ---------------------------------------------------------------------------

pub fn build_sequence(
    group: &FiniteGroup,
    desc: &SequenceDesc,
    path: &str,
) -> Result<InductiveSystem, CliError> {
    if desc.stages.is_empty() {
        return Err(at(&format!("{path}.stages"), "a sequence needs at least one stage"));
    }
    if desc.maps.len() + 1 != desc.stages.len() {
        return Err(at(
            &format!("{path}.maps"),
            format!("{} stages need {} maps, got {}", desc.stages.len(), desc.stages.len() - 1, desc.maps.len()),
        ));
    }
    let stages = desc
        .stages
        .iter()
        .enumerate()
        .map(|(i, s)| build_system(group, s, &format!("{path}.stages[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let maps = desc
        .maps
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let mpath = format!("{path}.maps[{i}]");
            let unitaries = m
                .unitaries
                .iter()
                .enumerate()
                .map(|(l, u)| desc_to_mat(u, &format!("{mpath}.unitaries[{l}]")))
                .collect::<Result<Vec<_>, _>>()?;
            StarHom::new(
                stages[i].algebra().clone(),
                stages[i + 1].algebra().clone(),
                m.multiplicity.clone(),
                unitaries,
            )
            .map_err(|e| at(&mpath, e))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let tail = match &desc.tail {
        TailDesc::Stabilized { stabilized_from } => Tail::Stabilized { from: *stabilized_from },
        TailDesc::Marker(s) if s == "truncated" => Tail::Truncated,
        TailDesc::Marker(s) => {
            return Err(at(
                &format!("{path}.tail"),
                format!("expected \"truncated\" or {{\"stabilized_from\": n}}, got \"{s}\""),
            ))
        }
    };
    InductiveSystem::new(stages, maps, tail).map_err(|e| at(path, e))
}

pub fn sequence_to_desc(sys: &InductiveSystem) -> SequenceDesc {
    SequenceDesc {
        stages: sys.stages().iter().map(system_to_desc).collect(),
        maps: sys
            .maps()
            .iter()
            .map(|m| HomDesc {
                multiplicity: m.multiplicity().to_vec(),
                unitaries: m.unitaries().iter().map(mat_to_desc).collect(),
            })
            .collect(),
        tail: match sys.tail() {
            Tail::Stabilized { from } => TailDesc::Stabilized { stabilized_from: from },
            Tail::Truncated => TailDesc::Marker("truncated".into()),
        },
    }
}

// ---------------------------------------------------------------------------
// Towers
// ---------------------------------------------------------------------------

pub fn build_tower(
    group: &FiniteGroup,
    algebra: &FdCStarAlgebra,
    desc: &TowerDesc,
) -> Result<RokhlinTower, CliError> {
    if desc.members.is_empty() {
        return Err(at("tower.members", "a tower needs at least one level"));
    }
    let names: Vec<String> = group.elements().map(|g| group.name(g)).collect();
    let mut members = Vec::with_capacity(desc.members.len());
    for (j, row) in desc.members.iter().enumerate() {
        for key in row.keys() {
            if !names.iter().any(|n| n == key) {
                return Err(at(
                    &format!("tower.members[{j}].{key}"),
                    format!("unknown group element (known: {})", names.join(", ")),
                ));
            }
        }
        let mut level = Vec::with_capacity(names.len());
        for name in &names {
            let epath = format!("tower.members[{j}].{name}");
            let d = row.get(name).ok_or_else(|| {
                at(
                    &format!("tower.members[{j}]"),
                    format!("missing entry for group element \"{name}\""),
                )
            })?;
            level.push(desc_to_element(algebra, d, &epath)?);
        }
        members.push(level);
    }
    RokhlinTower::new(members).map_err(|e| at("tower", e))
}

pub fn tower_to_desc(tower: &RokhlinTower, group: &FiniteGroup, stage: usize) -> TowerDesc {
    TowerDesc {
        stage,
        members: tower
            .members()
            .iter()
            .map(|level| {
                level
                    .iter()
                    .enumerate()
                    .map(|(g, f)| (group.name(g), element_to_desc(f)))
                    .collect()
            })
            .collect(),
    }
}

// ---------------------------------------------------------------------------
// Traces
// ---------------------------------------------------------------------------

pub fn build_trace(
    algebra: &FdCStarAlgebra,
    desc: &TraceDesc,
    path: &str,
) -> Result<TraceWeights, CliError> {
    TraceWeights::new(algebra.clone(), desc.weights.clone())
        .map_err(|e| at(&format!("{path}.weights"), e))
}

pub fn trace_to_desc(tau: &TraceWeights) -> TraceDesc {
    TraceDesc { weights: tau.weights().iter().map(|&w| clean(w)).collect() }
}

// ---------------------------------------------------------------------------
// Whole files
// ---------------------------------------------------------------------------

pub fn to_canonical_json(file: &SystemFile) -> String {
    let mut s = serde_json::to_string_pretty(file).expect("schema types always serialize");
    s.push('\n');
    s
}

pub fn parse_file(bytes: &[u8]) -> Result<SystemFile, CliError> {
    serde_json::from_slice(bytes).map_err(|e| input(format!("parse error: {e}")))
}
