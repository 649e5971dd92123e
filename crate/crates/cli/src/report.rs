use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::{Formatter, Serializer};
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Compact JSON with every float written as `{:.16e}` (17 significant digits).
pub struct FullPrecision;

impl Formatter for FullPrecision {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

pub fn to_json_string<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut buf = Vec::new();
    let mut ser = Serializer::with_formatter(&mut buf, FullPrecision);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

/// SHA-256 over labelled input blobs.
#[derive(Default)]
pub struct InputDigest {
    hasher: Sha256,
}

impl InputDigest {
    pub fn add(&mut self, label: &str, bytes: &[u8]) {
        self.hasher.update((label.len() as u64).to_le_bytes());
        self.hasher.update(label.as_bytes());
        self.hasher.update((bytes.len() as u64).to_le_bytes());
        self.hasher.update(bytes);
    }

    pub fn hex(self) -> String {
        hex::encode(self.hasher.finalize())
    }
}

#[derive(Serialize)]
pub struct Report {
    pub command: String,
    pub version: &'static str,
    pub inputs_digest: String,
    pub result: Value,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_seventeen_digits() {
        let v = serde_json::json!({"x": 0.1, "y": [1.0, -2.5e-300], "n": 3, "bad": f64::NAN});
        let s = to_json_string(&v).unwrap();
        assert!(s.contains("1.0000000000000001e-1"));
        assert!(s.contains("\"n\":3"));
        assert!(s.contains("\"bad\":null"));
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["x"].as_f64(), Some(0.1));
        assert_eq!(back["y"][1].as_f64(), Some(-2.5e-300));
    }

    #[test]
    fn digest_separates_labels() {
        let mut a = InputDigest::default();
        a.add("ab", b"c");
        let mut b = InputDigest::default();
        b.add("a", b"bc");
        assert_ne!(a.hex(), b.hex());
    }
}
