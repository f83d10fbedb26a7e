//! Deterministic serialization: fixed 17-significant-digit float
//! formatting for CSV, and whole-file writes so failed runs never leave
//! partial output behind.

use dicentra::orbit::{OrbitSpec, SphereSample};
use serde::Serialize;
use std::io::Write;
use std::path::Path;

/// 17 significant digits: enough to round-trip any f64, byte-stable
/// across runs.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Write to a path, or to stdout when the path is "-". The content is
/// fully assembled beforehand.
pub fn emit(path: &str, content: &str) -> std::io::Result<()> {
    if path == "-" {
        std::io::stdout().write_all(content.as_bytes())
    } else {
        std::fs::write(Path::new(path), content)
    }
}

pub fn samples_to_csv(samples: &[SphereSample]) -> String {
    let mut out = String::with_capacity(samples.len() * 160 + 32);
    out.push_str("zeta,t,X,Y,Z,U,V\n");
    for s in samples {
        out.push_str(&fmt17(s.zeta));
        for value in [s.t, s.point.x, s.point.y, s.point.z, s.u, s.v] {
            out.push(',');
            out.push_str(&fmt17(value));
        }
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct SampleRecord {
    zeta: f64,
    t: f64,
    x: f64,
    y: f64,
    z: f64,
    u: f64,
    v: f64,
}

#[derive(Serialize)]
struct OrbitDocument<'a> {
    spec: &'a OrbitSpec,
    samples: Vec<SampleRecord>,
}

pub fn samples_to_json(spec: &OrbitSpec, samples: &[SphereSample]) -> String {
    let doc = OrbitDocument {
        spec,
        samples: samples
            .iter()
            .map(|s| SampleRecord {
                zeta: s.zeta,
                t: s.t,
                x: s.point.x,
                y: s.point.y,
                z: s.point.z,
                u: s.u,
                v: s.v,
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("serializable");
    text.push('\n');
    text
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    text
}
