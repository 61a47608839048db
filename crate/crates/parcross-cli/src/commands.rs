//! One handler per subcommand.  Every handler loads and converts the input
//! file (any failure is an input error, exit 2), runs the corresponding
//! library verification, and assembles a [`ReportFile`] whose verdict drives
//! the exit code (0 = all checks pass, 1 = some check failed).

use std::fs;
use std::path::Path;

use parcross::crossed::{
    build_crossed_product, conditional_expectation, cp_multiply, universal_norm,
};
use parcross::fdalg::FdCStarAlgebra;
use parcross::globalization::{construct_enveloping, verify_globalization_limit, BasisOrder};
use parcross::groups::FiniteGroup;
use parcross::inductive::{
    bratteli_of_crossed_sequence, bratteli_of_system, validate_inductive_system,
    verify_limit_theorem, BratteliDiagram, InductiveSystem, Tail,
};
use parcross::partial_action::{validate_partial_action, PartialAction};
use parcross::report::Report;
use parcross::rokhlin::{
    canonical_test_set, check_tower, pushforward_tower, search_tower, DefectReport, RokhlinTower,
};
use parcross::traces::{
    check_invariance, trace_on_crossed, validate_trace_sequence, verify_trace_limit_identity,
    TraceWeights,
};

use crate::fixture_files;
use crate::reportfile::{inputs_digest, ReportFile};
use crate::schema::{
    at, build_group, build_sequence, build_system, build_tower, build_trace, input, parse_file,
    to_canonical_json, CliError, SystemFile, TowerDesc,
};

// ---------------------------------------------------------------------------
// Loading
// ---------------------------------------------------------------------------

struct Loaded {
    bytes: Vec<u8>,
    file: SystemFile,
    group: FiniteGroup,
}

fn load(path: &Path) -> Result<Loaded, CliError> {
    let bytes = fs::read(path)
        .map_err(|e| input(format!("cannot read {}: {e}", path.display())))?;
    let file = parse_file(&bytes)?;
    let group = build_group(&file.group)?;
    Ok(Loaded { bytes, file, group })
}

impl Loaded {
    fn system(&self) -> Result<PartialAction, CliError> {
        let desc = self
            .file
            .system
            .as_ref()
            .ok_or_else(|| input("this command needs a \"system\" section"))?;
        build_system(&self.group, desc, "system")
    }

    fn sequence(&self) -> Result<InductiveSystem, CliError> {
        let desc = self
            .file
            .sequence
            .as_ref()
            .ok_or_else(|| input("this command needs a \"sequence\" section"))?;
        build_sequence(&self.group, desc, "sequence")
    }

    fn trace(&self, algebra: &FdCStarAlgebra) -> Result<TraceWeights, CliError> {
        let desc = self
            .file
            .trace
            .as_ref()
            .ok_or_else(|| input("this command needs a \"trace\" section"))?;
        build_trace(algebra, desc, "trace")
    }

    fn trace_list(&self, sys: &InductiveSystem) -> Result<Vec<TraceWeights>, CliError> {
        let descs = self
            .file
            .traces
            .as_ref()
            .ok_or_else(|| input("this command needs a \"traces\" section (one trace per stage)"))?;
        if descs.len() != sys.num_stages() {
            return Err(at(
                "traces",
                format!("expected {} entries (one per stage), got {}", sys.num_stages(), descs.len()),
            ));
        }
        descs
            .iter()
            .enumerate()
            .map(|(i, d)| build_trace(sys.stage(i).algebra(), d, &format!("traces[{i}]")))
            .collect()
    }

    fn tower_desc(&self) -> Result<&TowerDesc, CliError> {
        self.file
            .tower
            .as_ref()
            .ok_or_else(|| input("this command needs a \"tower\" section"))
    }

    /// The stage index and the partial action the file's tower lives on:
    /// the `system` section for single-system files (stage must be 0), or
    /// `sequence.stages[tower.stage]` for sequence files.
    fn tower_context(&self) -> Result<(usize, PartialAction), CliError> {
        let desc = self.tower_desc()?;
        if self.file.system.is_some() {
            if desc.stage != 0 {
                return Err(at("tower.stage", "must be 0 for a single-system file"));
            }
            Ok((0, self.system()?))
        } else {
            let sys = self.sequence()?;
            if desc.stage >= sys.num_stages() {
                return Err(at(
                    "tower.stage",
                    format!("stage {} out of range: {} stages", desc.stage, sys.num_stages()),
                ));
            }
            Ok((desc.stage, sys.stage(desc.stage).clone()))
        }
    }

    fn tower_on(&self, algebra: &FdCStarAlgebra) -> Result<RokhlinTower, CliError> {
        build_tower(&self.group, algebra, self.tower_desc()?)
    }

    fn report(
        &self,
        command: String,
        tol: f64,
        seed: Option<u64>,
        rep: &Report,
        notes: Vec<String>,
    ) -> ReportFile {
        let digest = inputs_digest(&self.bytes, &command);
        ReportFile::from_report(command, tol, seed, digest, rep, notes)
    }
}

fn tail_note(sys: &InductiveSystem) -> String {
    match sys.tail() {
        Tail::Stabilized { from } => format!("stabilized from stage {from}"),
        Tail::Truncated => "truncated".into(),
    }
}

fn resolve_stage(sys: &InductiveSystem, stage: Option<usize>) -> Result<usize, CliError> {
    let n = stage.unwrap_or(sys.num_stages() - 1);
    if n >= sys.num_stages() {
        return Err(input(format!("--stage {n} out of range: {} stages", sys.num_stages())));
    }
    Ok(n)
}

/// The five tower defects as named check lines, thresholded at the tower's ε.
fn defect_checks(dr: &DefectReport) -> Report {
    let mut rep = Report::new();
    rep.push("d1_cocycle", dr.d1, dr.epsilon);
    rep.push("d2_orthogonality", dr.d2, dr.epsilon);
    rep.push("d3_partition_of_unity", dr.d3, dr.epsilon);
    rep.push("d4_centrality", dr.d4, dr.epsilon);
    if let Some(d5) = dr.d5 {
        rep.push("d5_tower_commutation", d5, dr.epsilon);
    }
    rep.push("max_defect", dr.max_defect(), dr.epsilon);
    rep
}

// ---------------------------------------------------------------------------
// Plain verification commands
// ---------------------------------------------------------------------------

pub fn validate(path: &Path, tol: f64) -> Result<ReportFile, CliError> {
    let loaded = load(path)?;
    let mut rep = Report::new();
    let mut notes = vec![format!("group of order {}", loaded.group.order())];
    if loaded.file.system.is_none() && loaded.file.sequence.is_none() {
        return Err(input("file has neither a \"system\" nor a \"sequence\" section"));
    }
    if loaded.file.system.is_some() {
        let action = loaded.system()?;
        notes.push(format!("system on blocks {:?}", action.algebra().block_dims()));
        rep.merge("system", validate_partial_action(&action, tol));
    }
    if loaded.file.sequence.is_some() {
        let sys = loaded.sequence()?;
        notes.push(format!("sequence of {} stages, {}", sys.num_stages(), tail_note(&sys)));
        rep.merge("sequence", validate_inductive_system(&sys, tol));
    }
    if loaded.file.tower.is_some() {
        let (stage, action) = loaded.tower_context()?;
        let tower = loaded.tower_on(action.algebra())?;
        notes.push(format!("tower of height k = {} on stage {stage}", tower.k()));
    }
    if loaded.file.trace.is_some() {
        if loaded.file.system.is_none() {
            return Err(at("trace", "a single trace needs a \"system\" section (sequences take \"traces\")"));
        }
        let action = loaded.system()?;
        let tau = loaded.trace(action.algebra())?;
        notes.push(format!("trace weights {:?}", tau.weights()));
    }
    if loaded.file.traces.is_some() {
        if loaded.file.sequence.is_none() {
            return Err(at("traces", "a trace sequence needs a \"sequence\" section"));
        }
        let sys = loaded.sequence()?;
        let taus = loaded.trace_list(&sys)?;
        notes.push(format!("{} stage traces", taus.len()));
    }
    Ok(loaded.report(format!("validate --tol {tol:e}"), tol, None, &rep, notes))
}

pub fn crossed(path: &Path, tol: f64) -> Result<ReportFile, CliError> {
    let loaded = load(path)?;
    let action = loaded.system()?;
    // The GNS representation needs some faithful reference functional; the
    // canonical uniform one serves every input.  A `trace` section in the
    // file is the business of the `trace` subcommands, not of construction.
    let reference = TraceWeights::uniform(action.algebra());
    let cp = build_crossed_product(&action, &reference).map_err(input)?;

    let mut rep = Report::new();
    let one = cp.unit().map_err(input)?;
    let one_sq = cp_multiply(&one, &one).map_err(input)?;
    rep.push("unit_idempotent", one_sq.distance(&one), tol);
    rep.push(
        "expectation_of_unit",
        conditional_expectation(&one).distance(&action.algebra().unit()),
        tol,
    );
    let mut iso_defect = 0.0f64;
    for a in canonical_test_set(&action) {
        let emb = cp.embed(&a).map_err(input)?;
        let n = universal_norm(&cp, &emb).map_err(input)?;
        iso_defect = iso_defect.max((n - a.op_norm()).abs());
    }
    rep.push("embedding_isometric", iso_defect, tol);

    let notes = vec![
        format!("crossed product dimension {}", cp.dim()),
        format!("wedderburn blocks {:?}", cp.block_dims()),
    ];
    Ok(loaded.report(format!("crossed --tol {tol:e}"), tol, None, &rep, notes))
}

fn push_diagram(notes: &mut Vec<String>, diagram: &BratteliDiagram) {
    for (i, level) in diagram.levels().iter().enumerate() {
        notes.push(format!("  level {i}: {level:?}"));
        if i < diagram.edges().len() {
            notes.push(format!("  edges {i} -> {}: {:?}", i + 1, diagram.edge(i)));
        }
    }
}

pub fn bratteli(path: &Path, tol: f64) -> Result<ReportFile, CliError> {
    let loaded = load(path)?;
    let sys = loaded.sequence()?;
    let mut rep = Report::new();
    rep.merge("sequence", validate_inductive_system(&sys, tol));

    let mut notes = vec![format!("{} stages, {}", sys.num_stages(), tail_note(&sys))];
    notes.push("full-algebra diagram:".into());
    push_diagram(&mut notes, &bratteli_of_system(&sys, None).map_err(input)?);
    let group = &loaded.group;
    for g in group.elements().filter(|&g| g != group.identity()) {
        notes.push(format!("ideal diagram for element \"{}\":", group.name(g)));
        push_diagram(&mut notes, &bratteli_of_system(&sys, Some(g)).map_err(input)?);
    }
    notes.push("crossed-product diagram:".into());
    push_diagram(&mut notes, &bratteli_of_crossed_sequence(&sys, tol).map_err(input)?);

    Ok(loaded.report(format!("bratteli --tol {tol:e}"), tol, None, &rep, notes))
}

pub fn limit_verify(path: &Path, stage: Option<usize>, tol: f64) -> Result<ReportFile, CliError> {
    let loaded = load(path)?;
    let sys = loaded.sequence()?;
    let n = resolve_stage(&sys, stage)?;
    let rep = verify_limit_theorem(&sys, n, tol).map_err(input)?;
    let notes = vec![
        format!("verified at stage {n} of {} ({})", sys.num_stages(), tail_note(&sys)),
        format!("stage algebra blocks {:?}", sys.stage(n).algebra().block_dims()),
    ];
    Ok(loaded.report(format!("limit-verify --stage {n} --tol {tol:e}"), tol, None, &rep, notes))
}

pub fn globalize(path: &Path, tol: f64) -> Result<ReportFile, CliError> {
    let loaded = load(path)?;
    let action = loaded.system()?;
    let (gs, rep) = construct_enveloping(&action, BasisOrder::Forward, tol).map_err(input)?;
    let notes = vec![
        format!("system blocks {:?}", action.algebra().block_dims()),
        format!("envelope blocks {:?}", gs.algebra().block_dims()),
        format!("image blocks {:?}", gs.embedded_blocks().map_err(input)?),
    ];
    Ok(loaded.report(format!("globalize --tol {tol:e}"), tol, None, &rep, notes))
}

pub fn globalize_limit(path: &Path, stage: Option<usize>, tol: f64) -> Result<ReportFile, CliError> {
    let loaded = load(path)?;
    let sys = loaded.sequence()?;
    let n = resolve_stage(&sys, stage)?;
    let rep = verify_globalization_limit(&sys, n, tol).map_err(input)?;
    let notes = vec![format!("verified at stage {n} of {} ({})", sys.num_stages(), tail_note(&sys))];
    Ok(loaded.report(format!("globalize-limit --stage {n} --tol {tol:e}"), tol, None, &rep, notes))
}

// ---------------------------------------------------------------------------
// Rokhlin commands
// ---------------------------------------------------------------------------

pub fn rokhlin_check(path: &Path, eps: f64, commuting: bool, tol: f64) -> Result<ReportFile, CliError> {
    let loaded = load(path)?;
    let (stage, action) = loaded.tower_context()?;
    let tower = loaded.tower_on(action.algebra())?;
    let f_set = canonical_test_set(&action);
    let dr = check_tower(&action, &tower, &f_set, eps, commuting).map_err(input)?;
    let rep = defect_checks(&dr);
    let notes = vec![
        format!("tower of height k = {} on stage {stage}", tower.k()),
        format!("test set of {} elements", f_set.len()),
    ];
    Ok(loaded.report(
        format!("rokhlin check --eps {eps:e} --commuting {commuting} --tol {tol:e}"),
        tol,
        None,
        &rep,
        notes,
    ))
}

#[allow(clippy::too_many_arguments)]
pub fn rokhlin_search(
    path: &Path,
    k: usize,
    eps: f64,
    seed: u64,
    restarts: usize,
    iters: usize,
    commuting: bool,
    tol: f64,
) -> Result<ReportFile, CliError> {
    let loaded = load(path)?;
    let action = loaded.system()?;
    let f_set = canonical_test_set(&action);
    let (tower, dr) =
        search_tower(&action, k, &f_set, eps, seed, restarts, iters, commuting).map_err(input)?;
    let rep = defect_checks(&dr);
    let notes = vec![
        format!("searched for a tower of height k = {k}"),
        format!("{restarts} restarts, {iters} iterations each"),
        format!("best tower has {} levels", tower.num_levels()),
    ];
    Ok(loaded.report(
        format!(
            "rokhlin search --k {k} --eps {eps:e} --seed {seed} --restarts {restarts} \
             --iters {iters} --commuting {commuting} --tol {tol:e}"
        ),
        tol,
        Some(seed),
        &rep,
        notes,
    ))
}

pub fn rokhlin_pushforward(
    path: &Path,
    stage: Option<usize>,
    eps: f64,
    commuting: bool,
    tol: f64,
) -> Result<ReportFile, CliError> {
    let loaded = load(path)?;
    let sys = loaded.sequence()?;
    let src = loaded.tower_desc()?.stage;
    if src >= sys.num_stages() {
        return Err(at(
            "tower.stage",
            format!("stage {src} out of range: {} stages", sys.num_stages()),
        ));
    }
    let target = resolve_stage(&sys, stage)?;
    if target < src {
        return Err(input(format!(
            "--stage {target} precedes the tower's stage {src}; towers only push forward"
        )));
    }
    let tower = loaded.tower_on(sys.stage(src).algebra())?;
    let before =
        check_tower(sys.stage(src), &tower, &canonical_test_set(sys.stage(src)), eps, commuting)
            .map_err(input)?;
    let pushed = pushforward_tower(&sys, src, &tower, target).map_err(input)?;
    let after = check_tower(
        sys.stage(target),
        &pushed,
        &canonical_test_set(sys.stage(target)),
        eps,
        commuting,
    )
    .map_err(input)?;

    let mut rep = Report::new();
    rep.merge(&format!("stage{src}"), defect_checks(&before));
    rep.merge(&format!("stage{target}"), defect_checks(&after));
    rep.push("defect_inflation", (after.max_defect() - before.max_defect()).max(0.0), tol);
    let notes = vec![
        format!("tower pushed from stage {src} to stage {target}"),
        format!("source blocks {:?}", sys.stage(src).algebra().block_dims()),
        format!("target blocks {:?}", sys.stage(target).algebra().block_dims()),
    ];
    Ok(loaded.report(
        format!("rokhlin pushforward --stage {target} --eps {eps:e} --commuting {commuting} --tol {tol:e}"),
        tol,
        None,
        &rep,
        notes,
    ))
}

// ---------------------------------------------------------------------------
// Trace commands
// ---------------------------------------------------------------------------

pub fn trace_check(path: &Path, tol: f64) -> Result<ReportFile, CliError> {
    let loaded = load(path)?;
    let action = loaded.system()?;
    let tau = loaded.trace(action.algebra())?;
    let rep = check_invariance(&tau, &action, tol).map_err(input)?;
    let notes = vec![format!("trace weights {:?}", tau.weights())];
    Ok(loaded.report(format!("trace check --tol {tol:e}"), tol, None, &rep, notes))
}

pub fn trace_crossed(path: &Path, tol: f64) -> Result<ReportFile, CliError> {
    let loaded = load(path)?;
    let action = loaded.system()?;
    let tau = loaded.trace(action.algebra())?;
    let reference = TraceWeights::uniform(action.algebra());
    let cp = build_crossed_product(&action, &reference).map_err(input)?;
    let rep = trace_on_crossed(&tau, &cp, tol).map_err(input)?;
    let notes = vec![
        format!("trace weights {:?}", tau.weights()),
        format!("crossed product dimension {}", cp.dim()),
    ];
    Ok(loaded.report(format!("trace crossed --tol {tol:e}"), tol, None, &rep, notes))
}

pub fn trace_sequence(path: &Path, tol: f64) -> Result<ReportFile, CliError> {
    let loaded = load(path)?;
    let sys = loaded.sequence()?;
    let taus = loaded.trace_list(&sys)?;
    let rep = validate_trace_sequence(&sys, &taus, tol).map_err(input)?;
    let notes = vec![format!("{} stages with one trace each", sys.num_stages())];
    Ok(loaded.report(format!("trace sequence --tol {tol:e}"), tol, None, &rep, notes))
}

pub fn trace_limit(path: &Path, stage: Option<usize>, tol: f64) -> Result<ReportFile, CliError> {
    let loaded = load(path)?;
    let sys = loaded.sequence()?;
    let taus = loaded.trace_list(&sys)?;
    let n = resolve_stage(&sys, stage)?;
    let rep = verify_trace_limit_identity(&sys, &taus, n, tol).map_err(input)?;
    let notes = vec![format!("verified at stage {n} of {}", sys.num_stages())];
    Ok(loaded.report(format!("trace limit --stage {n} --tol {tol:e}"), tol, None, &rep, notes))
}

// ---------------------------------------------------------------------------
// Fixtures
// ---------------------------------------------------------------------------

pub fn fixtures_list() -> String {
    let mut s = String::new();
    for name in fixture_files::NAMES {
        s.push_str(name);
        s.push('\n');
    }
    s
}

pub fn fixtures_emit(name: &str) -> Result<String, CliError> {
    let file = fixture_files::build(name).ok_or_else(|| {
        input(format!("unknown fixture \"{name}\" (known: {})", fixture_files::NAMES.join(", ")))
    })?;
    Ok(to_canonical_json(&file))
}
