use std::io;

use serde::Serialize;
use serde_json::ser::Formatter;

/// Writes every float with 17 significant digits so values round-trip.
struct SeventeenDigits;

impl Formatter for SeventeenDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(extremal_copula::fmt17(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SeventeenDigits);
    value.serialize(&mut ser).expect("in-memory serialization cannot fail");
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

/// The deterministic payload plus an optional sidecar holding wall-clock
/// data, which comparisons ignore.
#[derive(Serialize)]
pub struct Envelope<'a> {
    pub command: &'a str,
    pub result: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sidecar: Option<serde_json::Value>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_seventeen_digits() {
        let s = to_json(&serde_json::json!({ "v": 0.1, "n": 3 }));
        assert_eq!(s, r#"{"n":3,"v":1.0000000000000001e-1}"#);
        let back: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["v"].as_f64().unwrap(), 0.1);
    }
}
