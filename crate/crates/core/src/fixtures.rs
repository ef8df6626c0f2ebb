//! The bundled example systems.

use std::collections::BTreeMap;

use crate::dynsys::DynSys;
use crate::space::{Space, SpaceSpec};

fn discrete(labels: &[&str], image: impl Fn(usize) -> usize) -> SpaceSpec {
    SpaceSpec::Finite {
        points: labels.iter().map(|s| s.to_string()).collect(),
        min_open_nbhd: labels.iter().map(|s| (s.to_string(), vec![s.to_string()])).collect(),
        sigma: labels
            .iter()
            .enumerate()
            .map(|(i, s)| (s.to_string(), labels[image(i)].to_string()))
            .collect::<BTreeMap<_, _>>(),
    }
}

pub fn one_point_spec() -> SpaceSpec {
    discrete(&["pt"], |_| 0)
}

pub fn swap2_spec() -> SpaceSpec {
    discrete(&["a", "b"], |i| 1 - i)
}

pub fn cycle3_spec() -> SpaceSpec {
    discrete(&["0", "1", "2"], |i| (i + 1) % 3)
}

fn sys(spec: SpaceSpec) -> DynSys {
    DynSys::new(Space::build(&spec).expect("bundled fixture is valid"))
}

pub fn one_point() -> DynSys {
    sys(one_point_spec())
}

pub fn swap2() -> DynSys {
    sys(swap2_spec())
}

pub fn cycle3() -> DynSys {
    sys(cycle3_spec())
}

pub fn int_shift(window: u64) -> DynSys {
    sys(SpaceSpec::IntShift { window })
}

pub fn pair_swap_tails(window: u64) -> DynSys {
    sys(SpaceSpec::PairSwapTails { window })
}

/// All five canonical systems with their names.
pub fn all() -> Vec<(&'static str, DynSys)> {
    vec![
        ("one_point", one_point()),
        ("swap2", swap2()),
        ("cycle3", cycle3()),
        ("int_shift", int_shift(8)),
        ("pair_swap_tails", pair_swap_tails(8)),
    ]
}
