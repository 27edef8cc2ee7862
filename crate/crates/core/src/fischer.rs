//! Fischer's mutual exclusion protocol for any number of processes.
//!
//! One token per process. A process in a daggered place owns the shared
//! variable; the `udf` token stands for the variable being unset. Exactly
//! one of the two exists at any time.

use crate::ezone::Multiplicity;
use crate::model::{ArcSpec, Count, InitSpec, TokenSpec, TpnFile, TransitionSpec, ZoneSpec};

pub const PLACES: [&str; 9] = ["A", "B", "C", "CS", "Ad", "Bd", "Cd", "CSd", "udf"];

fn any(place: &str) -> ArcSpec {
    ArcSpec::new(place, 0, None)
}

fn transition(name: &str, inputs: Vec<ArcSpec>, outputs: Vec<ArcSpec>) -> TransitionSpec {
    TransitionSpec {
        name: name.to_string(),
        inputs,
        outputs,
    }
}

fn pair(name: &str, a: &str, b: &str) -> ZoneSpec {
    ZoneSpec {
        name: name.to_string(),
        tokens: vec![TokenSpec { place: a.into() }, TokenSpec { place: b.into() }],
        bounds: Default::default(),
    }
}

/// The protocol net with the three mutual-exclusion targets. With
/// `mutate_enter` the entering process no longer waits, which breaks
/// safety.
pub fn fischer_model(mutate_enter: bool) -> TpnFile {
    let wait = if mutate_enter { 0 } else { 2 };
    let mut transitions = vec![
        transition(
            "try",
            vec![any("A"), any("udf")],
            vec![ArcSpec::new("B", 0, Some(0)), any("udf")],
        ),
        transition(
            "setFromUdf",
            vec![ArcSpec::new("B", 0, Some(1)), any("udf")],
            vec![ArcSpec::new("Cd", 0, Some(0))],
        ),
    ];
    transitions.extend(["A", "B", "C", "CS"].map(overwrite));
    transitions.extend([
        transition(
            "enter",
            vec![ArcSpec::new("Cd", wait, None)],
            vec![any("CSd")],
        ),
        transition("fail", vec![any("C")], vec![any("A")]),
        transition("exitD", vec![any("CSd")], vec![any("A"), any("udf")]),
        transition("exit", vec![any("CS")], vec![any("A")]),
    ]);
    TpnFile {
        places: PLACES.iter().map(|p| p.to_string()).collect(),
        transitions,
        init: vec![
            InitSpec {
                place: "A".into(),
                count: Count(Multiplicity::Omega),
                age: 0,
            },
            InitSpec {
                place: "udf".into(),
                count: Count(Multiplicity::Finite(1)),
                age: 0,
            },
        ],
        targets: vec![
            pair("Z1", "CS", "CS"),
            pair("Z2", "CS", "CSd"),
            pair("Z3", "CSd", "CSd"),
        ],
    }
}

// A process in B overwrites the variable owned by a process in `s`.
fn overwrite(s: &str) -> TransitionSpec {
    transition(
        &format!("setOverwrite_{s}"),
        vec![ArcSpec::new("B", 0, Some(1)), any(&format!("{s}d"))],
        vec![ArcSpec::new("Cd", 0, Some(0)), any(s)],
    )
}
