//! Construction traces as JSON Lines: one object per event with sorted keys
//! and no floating-point values.

use serde_json::{Map, Value};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEvent {
    pub seq: u64,
    pub stage: u64,
    pub module: String,
    pub event: String,
    pub payload: Map<String, Value>,
}

impl TraceEvent {
    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("seq".into(), self.seq.into());
        obj.insert("stage".into(), self.stage.into());
        obj.insert("module".into(), self.module.clone().into());
        obj.insert("event".into(), self.event.clone().into());
        obj.insert("payload".into(), Value::Object(self.payload.clone()));
        Value::Object(obj)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Trace {
    events: Vec<TraceEvent>,
}

fn plain(v: &Value) -> bool {
    match v {
        Value::Bool(_) | Value::String(_) => true,
        Value::Number(n) => n.is_u64() || n.is_i64(),
        _ => false,
    }
}

impl Trace {
    pub fn new() -> Self {
        Trace::default()
    }

    /// Append an event; `payload` must be an object of integers, strings and booleans.
    pub fn push(&mut self, stage: u64, module: &str, event: &str, payload: Value) {
        let Value::Object(payload) = payload else {
            panic!("trace payload must be an object");
        };
        assert!(
            payload.values().all(plain),
            "trace payload values must be integers, strings or booleans"
        );
        let seq = self.events.len() as u64;
        self.events.push(TraceEvent {
            seq,
            stage,
            module: module.to_string(),
            event: event.to_string(),
            payload,
        });
    }

    pub fn events(&self) -> &[TraceEvent] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            out.push_str(
                &serde_json::to_string(&e.to_json()).expect("plain JSON values serialize"),
            );
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn lines_are_sorted_and_numbered() {
        let mut t = Trace::new();
        t.push(1, "fe", "stage", json!({"z": 1, "a": "x", "m": true}));
        t.push(2, "fe", "stage", json!({}));
        assert_eq!(
            t.to_jsonl(),
            "{\"event\":\"stage\",\"module\":\"fe\",\"payload\":{\"a\":\"x\",\"m\":true,\"z\":1},\"seq\":0,\"stage\":1}\n\
             {\"event\":\"stage\",\"module\":\"fe\",\"payload\":{},\"seq\":1,\"stage\":2}\n"
        );
    }

    #[test]
    #[should_panic(expected = "integers, strings or booleans")]
    fn floats_are_rejected() {
        Trace::new().push(0, "fe", "stage", json!({"x": 0.5}));
    }
}
