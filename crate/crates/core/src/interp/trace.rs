use std::io::{self, Write};

use serde::Serialize;

use super::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum EventKind {
    Dispatch,
    Send,
    Transition,
    EventlessTransition,
    Discard,
    Train,
    Predict,
    Print,
}

/// Kind-specific payload; each variant serializes as a flat JSON object
/// with keys in field order.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Detail {
    Dispatch {
        port: String,
        message: String,
        args: Vec<Value>,
    },
    Send {
        port: String,
        message: String,
        args: Vec<Value>,
        /// Receiving endpoints as `instance.port`.
        to: Vec<String>,
    },
    Transition {
        from: String,
        to: String,
    },
    EventlessTransition {
        from: String,
        to: String,
        internal: bool,
    },
    Discard {
        reason: DiscardReason,
        port: String,
        message: String,
    },
    Train {
        da: String,
        algorithm: String,
        rows: usize,
        metric: String,
        value: f64,
    },
    Predict {
        da: String,
        features: Vec<f64>,
        prediction: Value,
    },
    Print {
        value: Value,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscardReason {
    /// No transition of the current state accepted the message.
    NoTransition,
    /// The sending port has no connected peer receiving the message.
    UnconnectedPort,
}

impl Detail {
    pub fn kind(&self) -> EventKind {
        match self {
            Detail::Dispatch { .. } => EventKind::Dispatch,
            Detail::Send { .. } => EventKind::Send,
            Detail::Transition { .. } => EventKind::Transition,
            Detail::EventlessTransition { .. } => EventKind::EventlessTransition,
            Detail::Discard { .. } => EventKind::Discard,
            Detail::Train { .. } => EventKind::Train,
            Detail::Predict { .. } => EventKind::Predict,
            Detail::Print { .. } => EventKind::Print,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceEvent {
    pub step: u64,
    pub instance: String,
    pub kind: EventKind,
    pub detail: Detail,
}

impl TraceEvent {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("trace events are serializable")
    }
}

/// Writes one JSON object per line.
pub fn write_trace<W: Write>(events: &[TraceEvent], mut out: W) -> io::Result<()> {
    for e in events {
        out.write_all(e.to_json_line().as_bytes())?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_order() {
        let e = TraceEvent {
            step: 2,
            instance: "client".into(),
            kind: EventKind::Transition,
            detail: Detail::Transition {
                from: "Ping".into(),
                to: "Ping".into(),
            },
        };
        assert_eq!(
            e.to_json_line(),
            r#"{"step":2,"instance":"client","kind":"Transition","detail":{"from":"Ping","to":"Ping"}}"#
        );
        let d = Detail::Discard {
            reason: DiscardReason::UnconnectedPort,
            port: "p".into(),
            message: "m".into(),
        };
        assert_eq!(
            serde_json::to_string(&d).unwrap(),
            r#"{"reason":"unconnected_port","port":"p","message":"m"}"#
        );
    }
}
