mod support;

use std::path::PathBuf;

use proptest::prelude::*;
use support::{bundled, check_invariants, load, pingpong_oracle};
use tml2::ast::ValueType;
use tml2::interp::*;
use tml2::{parse, simulate, validate};

#[test]
fn pingpong_alternates() {
    let r = simulate(&bundled("pingpong.tml2"), "main", 6).unwrap();
    let got: Vec<(u64, &str, EventKind)> = r
        .trace
        .iter()
        .map(|e| (e.step, e.instance.as_str(), e.kind))
        .collect();
    assert_eq!(got, pingpong_oracle(6));
    assert_eq!(
        r.trace[1].detail,
        Detail::Dispatch {
            port: "clients".into(),
            message: "ping".into(),
            args: vec![]
        }
    );
    assert_eq!(r.steps, 6);
    assert_eq!(r.final_states[1].queued, 1);
}

#[test]
fn pingpong_trace_is_byte_identical_across_runs() {
    let m = bundled("pingpong.tml2");
    let render = || {
        let mut buf = Vec::new();
        write_trace(&simulate(&m, "main", 1000).unwrap().trace, &mut buf).unwrap();
        buf
    };
    let a = render();
    assert_eq!(a, render());
    assert_eq!(
        String::from_utf8(a).unwrap().lines().count(),
        pingpong_oracle(1000).len()
    );
}

#[test]
fn unmatched_event_is_discarded_once() {
    let src = r#"
        thing A {
            message hello()
            required port p { sends hello }
            statechart init S { state S { entry { p!hello(); } } }
        }
        thing B {
            message hello()
            message other()
            provided port q { receives hello, other }
            statechart init Idle {
                state Idle { transition event q?other -> Idle }
            }
        }
        configuration c {
            instance a : A
            instance b : B
            connector a.p => b.q
        }
    "#;
    let m = parse(src, "t").unwrap();
    let r = simulate(&m, "c", 5).unwrap();
    let discards: Vec<&TraceEvent> = r
        .trace
        .iter()
        .filter(|e| e.kind == EventKind::Discard)
        .collect();
    assert_eq!(discards.len(), 1);
    assert_eq!(
        discards[0].detail,
        Detail::Discard {
            reason: DiscardReason::NoTransition,
            port: "q".into(),
            message: "hello".into()
        }
    );
    assert_eq!(r.final_states[1].state.as_deref(), Some("Idle"));
    assert!(!r.trace.iter().any(|e| e.kind == EventKind::Transition));
}

#[test]
fn unconnected_send_is_a_discard() {
    let src = "thing A { message m() required port p { sends m } statechart init S { state S { entry { p!m(); } } } } configuration c { instance a : A }";
    let r = simulate(&parse(src, "t").unwrap(), "c", 3).unwrap();
    assert_eq!(r.trace.len(), 1);
    assert_eq!(
        r.trace[0].detail,
        Detail::Discard {
            reason: DiscardReason::UnconnectedPort,
            port: "p".into(),
            message: "m".into()
        }
    );
}

#[test]
fn livelock_at_chain_length_1001() {
    let m = load(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/livelock.tml2"));
    assert!(validate(&m).ok);
    let mut sim = Simulator::new(&m, "main").unwrap();
    let err = sim.run(10).unwrap_err();
    assert_eq!(err.code(), "E-LIVELOCK");
    assert_eq!(
        err.kind,
        ErrorKind::Livelock {
            state: "Spin".into(),
            chain: 1001
        }
    );
    assert_eq!(err.step, 0);
    assert_eq!(sim.trace().len(), MAX_EVENTLESS_CHAIN);
    assert!(sim
        .trace()
        .iter()
        .all(|e| e.kind == EventKind::EventlessTransition));
}

#[test]
fn chain_of_exactly_1000_is_allowed() {
    let src = "thing T { property n : Int statechart init S { state S { transition guard n < 1000 internal action { n = n + 1; } } } } configuration c { instance t : T }";
    let r = simulate(&parse(src, "t").unwrap(), "c", 3).unwrap();
    assert_eq!(r.trace.len(), 1000);
    assert_eq!(r.final_states[0].properties[0].1, Value::Int(1000));
}

#[test]
fn predict_before_train() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("d.csv"), "x,y\n0,0\n1,1\n").unwrap();
    let src = r#"
        thing T {
            property x : Int
            property y : Int
            statechart init S { state S { entry { da_predict(d); } } }
            data_analytics d {
                features: x
                label: y
                dataset: "d.csv"
                algorithm: KNN(k = 1)
                prediction: y
            }
        }
        configuration c { instance t : T }
    "#;
    let path = dir.path().join("m.tml2");
    let m = parse(src, &path.to_string_lossy()).unwrap();
    assert!(validate(&m).ok);
    let err = Simulator::new(&m, "c").unwrap().run(1).unwrap_err();
    assert_eq!(err.code(), "E-DA-ORDER");

    let saved = src.replace("da_predict(d);", "da_save(d, \"out.json\");");
    let m = parse(&saved, &path.to_string_lossy()).unwrap();
    assert_eq!(
        Simulator::new(&m, "c").unwrap().run(1).unwrap_err().code(),
        "E-DA-ORDER"
    );

    let trained = src.replace(
        "da_predict(d);",
        "da_train(d); x = 1; da_predict(d); da_save(d, \"out.json\");",
    );
    let m = parse(&trained, &path.to_string_lossy()).unwrap();
    let r = simulate(&m, "c", 1).unwrap();
    assert_eq!(r.final_states[0].properties[1].1, Value::Int(1));
    let saved = tml2::ml::load_model(&dir.path().join("out.json")).unwrap();
    assert_eq!(saved.feature_names, vec!["x".to_string()]);
}

#[test]
fn dataset_problems_are_io_errors() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.csv"), "x,z\n0,0\n").unwrap();
    let src = r#"
        thing T {
            property x : Real
            property y : Real
            statechart init S { state S { entry { da_train(d); } } }
            data_analytics d {
                features: x
                label: y
                dataset: "DATASET"
                algorithm: LinearRegression
                prediction: y
            }
        }
        configuration c { instance t : T }
    "#;
    let path = dir.path().join("m.tml2").to_string_lossy().into_owned();
    for dataset in ["missing.csv", "bad.csv"] {
        let m = parse(&src.replace("DATASET", dataset), &path).unwrap();
        let err = Simulator::new(&m, "c").unwrap().run(1).unwrap_err();
        assert_eq!(err.code(), "E-IO", "{dataset}");
    }
}

#[test]
fn smart_pingpong_scenarios() {
    let m = bundled("smart_pingpong.tml2");
    let r = simulate(&m, "attack", 200).unwrap();
    let server = r.final_states.iter().find(|s| s.name == "server").unwrap();
    assert_eq!(server.state.as_deref(), Some("Blocked"));

    let r = simulate(&m, "normal", 1000).unwrap();
    assert_eq!(r.steps, 1000);
    assert!(!r
        .trace
        .iter()
        .any(|e| e.instance == "server" && e.kind == EventKind::Transition));
    assert!(r.trace.iter().any(|e| matches!(
        &e.detail,
        Detail::Predict {
            prediction: Value::Int(0),
            ..
        }
    )));
}

#[test]
fn invariants_on_bundled_models() {
    for (file, config, steps) in [
        ("pingpong.tml2", "main", 1000),
        ("smart_pingpong.tml2", "attack", 300),
        ("smart_pingpong.tml2", "normal", 300),
        ("smart_pingpong_gnb.tml2", "attack", 300),
        ("smart_pingpong_knn.tml2", "attack", 300),
        ("thermostat.tml2", "main", 300),
    ] {
        let m = bundled(file);
        let r = simulate(&m, config, steps).unwrap();
        check_invariants(&m, config, &r.trace, &r.final_states);
    }
}

/// A random network of token-passing nodes. Each node emits a token when
/// `Now()` hits its period, forwards tokens with a hop budget, and toggles
/// between two states.
fn network_source(periods: &[i64], budgets: &[i64], links: &[(usize, usize)]) -> String {
    let mut src = String::new();
    for (i, (p, h)) in periods.iter().zip(budgets).enumerate() {
        src.push_str(&format!(
            r#"thing Node{i} {{
    property last : Int = -1
    property forwarded : Int
    property load : Real
    message tok(hops : Int, w : Real)
    provided port inp {{ receives tok }}
    required port out {{ sends tok }}
    statechart init A {{
        state A {{
            transition guard Now() % {p} == 0 and Now() > last internal action {{
                last = Now();
                out!tok(0, 1);
            }}
            transition event inp?tok guard hops < {h} -> B action {{
                forwarded = forwarded + 1;
                load = load + w / 2;
                out!tok(hops + 1, w * 0.5);
            }}
        }}
        state B {{
            exit {{ load = load - 0.25; }}
            transition event inp?tok guard hops % 2 == 0 -> A
            transition guard forwarded % 3 == 0 -> A
        }}
    }}
}}
"#
        ));
    }
    src.push_str("configuration net {\n");
    for i in 0..periods.len() {
        src.push_str(&format!("    instance n{i} : Node{i}\n"));
    }
    for (a, b) in links {
        src.push_str(&format!("    connector n{a}.out => n{b}.inp\n"));
    }
    src.push_str("}\n");
    src
}

/// Periods, hop budgets, links and step count.
type Network = (Vec<i64>, Vec<i64>, Vec<(usize, usize)>, u64);

fn network() -> impl Strategy<Value = Network> {
    (1usize..5).prop_flat_map(|n| {
        (
            prop::collection::vec(1i64..7, n),
            prop::collection::vec(0i64..4, n),
            prop::collection::vec((0..n, 0..n), 0..8),
            1u64..60,
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scheduler_invariants((periods, budgets, links, steps) in network()) {
        let src = network_source(&periods, &budgets, &links);
        let m = parse(&src, "net.tml2").unwrap();
        let report = validate(&m);
        prop_assert!(report.ok, "{:?}", report.diagnostics);
        let r = simulate(&m, "net", steps).unwrap();
        check_invariants(&m, "net", &r.trace, &r.final_states);
        // determinism
        let again = simulate(&m, "net", steps).unwrap();
        prop_assert_eq!(r, again);
    }
}

#[test]
fn real_arguments_keep_their_type() {
    let m = parse(&network_source(&[1], &[3], &[(0, 0)]), "net.tml2").unwrap();
    let r = simulate(&m, "net", 10).unwrap();
    let tok = r.trace.iter().find(|e| e.kind == EventKind::Send).unwrap();
    let Detail::Send { args, .. } = &tok.detail else {
        unreachable!()
    };
    assert_eq!(args[1].ty(), ValueType::Real);
    check_invariants(&m, "net", &r.trace, &r.final_states);
}
