//! Bundled example files: the small named systems and sequences the library
//! ships, rendered into the JSON schema so every subcommand has a ready-made
//! input.  `fixtures list` prints the names, `fixtures emit <name>` prints
//! the JSON.

use parcross::fixtures;
use parcross::linalg::CMat;
use parcross::rokhlin::RokhlinTower;
use parcross::traces::TraceWeights;

use crate::schema::{
    group_to_desc, sequence_to_desc, system_to_desc, tower_to_desc, trace_to_desc, SystemFile,
    TraceDesc,
};

pub const NAMES: &[&str] = &[
    "s1",
    "s2",
    "s3",
    "constant-s1-seq",
    "constant-s2-seq",
    "constant-s3-seq",
    "diag-embed-seq",
];

/// The exact height-zero tower for the flip system: `f_{0,e} = (1,0)`,
/// `f_{0,s} = (0,1)` — a partition of unity by central projections that the
/// flip permutes along the group law.
fn s1_tower() -> RokhlinTower {
    let a = fixtures::s1().algebra().clone();
    let one = CMat::identity(1, 1);
    let zero = CMat::zeros(1, 1);
    let fe = a.element(vec![one.clone(), zero.clone()]).expect("dims match");
    let fs = a.element(vec![zero, one]).expect("dims match");
    RokhlinTower::new(vec![vec![fe, fs]]).expect("valid tower")
}

fn uniform_trace_desc(algebra: &parcross::fdalg::FdCStarAlgebra) -> TraceDesc {
    trace_to_desc(&TraceWeights::uniform(algebra))
}

pub fn build(name: &str) -> Option<SystemFile> {
    let file = match name {
        "s1" => {
            let action = fixtures::s1();
            SystemFile {
                group: group_to_desc(action.group()),
                system: Some(system_to_desc(&action)),
                sequence: None,
                tower: Some(tower_to_desc(&s1_tower(), action.group(), 0)),
                trace: Some(uniform_trace_desc(action.algebra())),
                traces: None,
            }
        }
        "s2" => {
            let action = fixtures::s2();
            SystemFile {
                group: group_to_desc(action.group()),
                system: Some(system_to_desc(&action)),
                sequence: None,
                tower: None,
                trace: Some(uniform_trace_desc(action.algebra())),
                traces: None,
            }
        }
        "s3" => {
            let action = fixtures::s3();
            SystemFile {
                group: group_to_desc(action.group()),
                system: Some(system_to_desc(&action)),
                sequence: None,
                tower: None,
                trace: Some(uniform_trace_desc(action.algebra())),
                traces: None,
            }
        }
        "constant-s1-seq" => {
            let action = fixtures::s1();
            let sys = fixtures::constant_system(&action, 4).expect("valid sequence");
            SystemFile {
                group: group_to_desc(action.group()),
                system: None,
                sequence: Some(sequence_to_desc(&sys)),
                tower: Some(tower_to_desc(&s1_tower(), action.group(), 0)),
                trace: None,
                traces: Some(vec![uniform_trace_desc(action.algebra()); 4]),
            }
        }
        "constant-s2-seq" => {
            let action = fixtures::s2();
            let sys = fixtures::constant_system(&action, 4).expect("valid sequence");
            SystemFile {
                group: group_to_desc(action.group()),
                system: None,
                sequence: Some(sequence_to_desc(&sys)),
                tower: None,
                trace: None,
                traces: Some(vec![uniform_trace_desc(action.algebra()); 4]),
            }
        }
        "constant-s3-seq" => {
            let action = fixtures::s3();
            let sys = fixtures::constant_system(&action, 4).expect("valid sequence");
            SystemFile {
                group: group_to_desc(action.group()),
                system: None,
                sequence: Some(sequence_to_desc(&sys)),
                tower: None,
                trace: None,
                traces: Some(vec![uniform_trace_desc(action.algebra()); 4]),
            }
        }
        "diag-embed-seq" => {
            let sys = fixtures::diag_embed_seq().expect("valid sequence");
            // Compatible trace sequence: pull the terminal uniform trace back
            // through the chain so every stage agrees with its successor.
            let t2 = TraceWeights::uniform(sys.stage(2).algebra());
            let t1 = t2.pullback(sys.map(1)).expect("identity map is unital");
            let t0 = t1.pullback(sys.map(0)).expect("diagonal embedding is unital");
            SystemFile {
                group: group_to_desc(sys.stage(0).group()),
                system: None,
                sequence: Some(sequence_to_desc(&sys)),
                tower: Some(tower_to_desc(&s1_tower(), sys.stage(0).group(), 0)),
                trace: None,
                traces: Some(vec![
                    trace_to_desc(&t0),
                    trace_to_desc(&t1),
                    trace_to_desc(&t2),
                ]),
            }
        }
        _ => return None,
    };
    Some(file)
}
