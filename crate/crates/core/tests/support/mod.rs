//! Oracles and loaders shared by the integration tests.
#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};
use std::path::PathBuf;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use tml2::ast::Model;
use tml2::interp::{Detail, EventKind, InstanceSnapshot, TraceEvent};
use tml2::parse;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn models_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("models")
}

pub fn load(path: PathBuf) -> Model {
    let src = std::fs::read_to_string(&path).unwrap();
    parse(&src, &path.to_string_lossy()).unwrap()
}

pub fn bundled(name: &str) -> Model {
    load(models_dir().join(name))
}

/// `(step, instance, kind)` triples, hand-executed from the scheduler rules.
pub fn pingpong_oracle(max_steps: u64) -> Vec<(u64, &'static str, EventKind)> {
    use EventKind::*;
    let mut out = vec![(0, "client", Send)];
    for step in 1..=max_steps {
        if step % 2 == 1 {
            out.extend([(step, "server", Dispatch), (step, "server", Send)]);
        } else {
            out.extend([
                (step, "client", Dispatch),
                (step, "client", Transition),
                (step, "client", Send),
            ]);
        }
    }
    out
}

/// Replays the trace and checks causality, conservation, state validity and
/// argument typing. Returns the number of envelopes left in flight.
pub fn check_invariants(
    m: &Model,
    config: &str,
    trace: &[TraceEvent],
    final_states: &[InstanceSnapshot],
) {
    let cfg = m.configuration(config).unwrap();
    let thing_of: HashMap<&str, &tml2::ast::Thing> = cfg
        .instances
        .iter()
        .map(|i| (i.name.as_str(), m.thing(i.thing.as_str()).unwrap()))
        .collect();
    let mut in_flight: HashMap<String, VecDeque<u64>> = HashMap::new();
    let mut state: HashMap<&str, String> = HashMap::new();
    for inst in &cfg.instances {
        if let Some(sc) = &thing_of[inst.name.as_str()].statechart {
            state.insert(inst.name.as_str(), sc.initial.name.clone());
        }
    }
    let (mut sends, mut dispatches) = (0usize, 0usize);
    let mut last_step = 0;
    for e in trace {
        assert!(e.step >= last_step, "steps decrease");
        last_step = e.step;
        let thing = thing_of[e.instance.as_str()];
        match &e.detail {
            Detail::Send {
                message, args, to, ..
            } => {
                let decl = thing.message(message).unwrap();
                assert_eq!(decl.params.len(), args.len());
                for (p, a) in decl.params.iter().zip(args) {
                    assert_eq!(a.ty(), p.ty);
                }
                for target in to {
                    let inst = target.split('.').next().unwrap().to_string();
                    in_flight.entry(inst).or_default().push_back(e.step);
                    sends += 1;
                }
            }
            Detail::Dispatch { .. } => {
                dispatches += 1;
                let sent = in_flight
                    .get_mut(&e.instance)
                    .and_then(VecDeque::pop_front)
                    .expect("dispatch without send");
                assert!(
                    e.step > sent,
                    "causality: dispatched at {} but sent at {sent}",
                    e.step
                );
            }
            Detail::Transition { from, to } | Detail::EventlessTransition { from, to, .. } => {
                let sc = thing.statechart.as_ref().unwrap();
                let cur = state.get_mut(e.instance.as_str()).unwrap();
                assert_eq!(cur, from);
                assert!(sc.state(to).is_some(), "unknown state {to}");
                *cur = to.clone();
            }
            _ => {}
        }
    }
    let queued: usize = final_states.iter().map(|s| s.queued).sum();
    assert_eq!(sends, dispatches + queued, "conservation");
    for s in final_states {
        let thing = thing_of[s.name.as_str()];
        assert_eq!(s.state.as_ref(), state.get(s.name.as_str()));
        for ((name, v), p) in s.properties.iter().zip(&thing.properties) {
            assert_eq!(name, &p.name.name);
            assert_eq!(v.ty(), p.ty, "type of {}.{name}", s.name);
        }
    }
}

pub fn rational(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite")
}

/// Exact solve of the unregularized normal equations over the rationals.
pub fn exact_ols(x: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    let p = x[0].len() + 1;
    let a: Vec<Vec<BigRational>> = x
        .iter()
        .map(|r| {
            r.iter()
                .map(|&v| rational(v))
                .chain([BigRational::one()])
                .collect()
        })
        .collect();
    let mut m = vec![vec![BigRational::zero(); p + 1]; p];
    for (row, &t) in a.iter().zip(y) {
        for i in 0..p {
            for j in 0..p {
                m[i][j] += &row[i] * &row[j];
            }
            m[i][p] += &row[i] * rational(t);
        }
    }
    // Gauss-Jordan; exact arithmetic needs no pivot strategy beyond nonzero
    for c in 0..p {
        let r = (c..p).find(|&r| !m[r][c].is_zero()).expect("nonsingular");
        m.swap(c, r);
        let pivot = m[c][c].clone();
        for v in &mut m[c] {
            *v = &*v / &pivot;
        }
        for r in 0..p {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                let pivot_row = m[c].clone();
                for (v, q) in m[r].iter_mut().zip(&pivot_row) {
                    *v -= &f * q;
                }
            }
        }
    }
    m.iter().map(|r| r[p].to_f64().unwrap()).collect()
}

pub fn knn_oracle(points: &[Vec<f64>], labels: &[i64], k: usize, q: &[f64]) -> i64 {
    let mut all: Vec<(f64, usize)> = points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let d = p
                .iter()
                .zip(q)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            (d, i)
        })
        .collect();
    // stable sort keeps index order among equal distances
    all.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut counts = [0usize; 3];
    for &(_, i) in &all[..k] {
        counts[labels[i] as usize] += 1;
    }
    let top = *counts.iter().max().unwrap();
    counts.iter().position(|&c| c == top).unwrap() as i64
}
