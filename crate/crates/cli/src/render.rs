//! Number formatting shared by the text and CSV emitters.
//!
//! Text output formats every number exactly as the JSON emitter does, so
//! each value printed in text mode appears verbatim in JSON mode.

use serde_json::Value;
use tamedet::C64;

pub const SCHEMA: &str = "tamedet/1";

pub fn num(x: f64) -> String {
    if x.is_finite() {
        Value::from(x).to_string()
    } else {
        "null".into()
    }
}

pub fn cx(z: C64) -> String {
    format!("({}, {})", num(z.re), num(z.im))
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}
