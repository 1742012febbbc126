//! Word file formats.
//!
//! Hard words are hex strings of the LSB-first byte packing: coordinate `z`
//! is bit `z mod 8` of byte `z / 8`. LLR words are one decimal value per
//! line.

use rpa_core::BitWord;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FormatError {
    #[error("invalid hex: {0}")]
    Hex(#[from] hex::FromHexError),
    #[error("expected {expected} hex digits for {bits} bits, found {found}")]
    HexLength {
        bits: usize,
        expected: usize,
        found: usize,
    },
    #[error("bits beyond position {0} must be zero")]
    TrailingBits(usize),
    #[error("line {line}: {msg}")]
    Llr { line: usize, msg: String },
}

pub fn word_to_hex(w: &BitWord) -> String {
    hex::encode(w.to_bytes())
}

/// Parses a hex word of `bits` coordinates; surrounding whitespace is
/// ignored.
pub fn word_from_hex(text: &str, bits: usize) -> Result<BitWord, FormatError> {
    let text = text.trim();
    let expected = 2 * bits.div_ceil(8);
    if text.len() != expected {
        return Err(FormatError::HexLength {
            bits,
            expected,
            found: text.len(),
        });
    }
    let bytes = hex::decode(text)?;
    BitWord::from_bytes(bits, &bytes).ok_or(FormatError::TrailingBits(bits))
}

/// One value per line, in shortest round-trip form.
pub fn llr_to_text(l: &[f64]) -> String {
    let mut out = String::with_capacity(l.len() * 8);
    for v in l {
        out.push_str(&v.to_string());
        out.push('\n');
    }
    out
}

/// Blank lines are skipped; every other line must hold one finite number.
pub fn llr_from_text(text: &str) -> Result<Vec<f64>, FormatError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let v: f64 = line.parse().map_err(|e| FormatError::Llr {
            line: i + 1,
            msg: format!("{e}"),
        })?;
        if !v.is_finite() {
            return Err(FormatError::Llr {
                line: i + 1,
                msg: "value is not finite".into(),
            });
        }
        out.push(v);
    }
    Ok(out)
}
