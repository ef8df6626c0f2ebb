#![allow(dead_code)]

use std::collections::BTreeMap;

use crossprod_core::dynsys::DynSys;
use crossprod_core::{Space, SpaceSpec};
use proptest::prelude::*;

/// `copies` disjoint copies of a random preorder on `base` points, with σ
/// rotating the copies. Every such σ is a homeomorphism.
pub fn rotated_copies(base: usize, relation: &[bool], copies: usize) -> Space {
    let mut reach = vec![vec![false; base]; base];
    for x in 0..base {
        reach[x][x] = true;
        for y in 0..base {
            reach[x][y] |= relation[x * base + y];
        }
    }
    for k in 0..base {
        for x in 0..base {
            for y in 0..base {
                if reach[x][k] && reach[k][y] {
                    reach[x][y] = true;
                }
            }
        }
    }
    let label = |c: usize, x: usize| format!("p{c}_{x}");
    let mut points = Vec::new();
    let mut nbhd = BTreeMap::new();
    let mut sigma = BTreeMap::new();
    for c in 0..copies {
        for x in 0..base {
            points.push(label(c, x));
            let u = (0..base).filter(|&y| reach[x][y]).map(|y| label(c, y)).collect();
            nbhd.insert(label(c, x), u);
            sigma.insert(label(c, x), label((c + 1) % copies, x));
        }
    }
    Space::build(&SpaceSpec::Finite { points, min_open_nbhd: nbhd, sigma }).expect("valid construction")
}

pub fn finite_space() -> impl Strategy<Value = Space> {
    (1usize..=3, 1usize..=3)
        .prop_flat_map(|(base, copies)| (Just(base), proptest::collection::vec(any::<bool>(), base * base), Just(copies)))
        .prop_map(|(base, rel, copies)| rotated_copies(base, &rel, copies))
}

/// A discrete space with a random permutation.
pub fn discrete_system() -> impl Strategy<Value = DynSys> {
    (1usize..=6).prop_flat_map(|n| Just((0..n).collect::<Vec<usize>>()).prop_shuffle()).prop_map(|perm| {
        let labels: Vec<String> = (0..perm.len()).map(|i| format!("q{i}")).collect();
        let spec = SpaceSpec::Finite {
            points: labels.clone(),
            min_open_nbhd: labels.iter().map(|l| (l.clone(), vec![l.clone()])).collect(),
            sigma: labels.iter().enumerate().map(|(i, l)| (l.clone(), labels[perm[i]].clone())).collect(),
        };
        DynSys::new(Space::build(&spec).unwrap())
    })
}

pub fn infinite_space() -> impl Strategy<Value = Space> {
    (1u64..=6, any::<bool>()).prop_map(|(w, z)| {
        let spec = if z { SpaceSpec::IntShift { window: w } } else { SpaceSpec::PairSwapTails { window: 2 * w } };
        Space::build(&spec).unwrap()
    })
}

pub fn any_space() -> impl Strategy<Value = Space> {
    prop_oneof![finite_space(), infinite_space()]
}

/// A random subset given by membership flags.
pub fn subset(space: &Space, bits: &[bool]) -> crossprod_core::SetRep {
    let n = space.rep_count();
    let members: Vec<bool> = (0..n).map(|i| bits[i % bits.len()]).collect();
    let tails: Vec<bool> = (0..space.tail_count()).map(|t| bits[(n + t) % bits.len()]).collect();
    space.set_from_flags(members, tails).unwrap()
}
