//! On-disk formats for string sets.
//!
//! Text: newline-delimited byte strings without embedded NUL or newline,
//! lifted symbol-wise by `b -> b + 1`. Binary: little-endian header
//! (`magic "DPSS"`, `u64 k`, `u64 N`, `u32 sigma`), `k` string lengths as
//! `u64`, then `N` symbols as `u32`. Binary files round-trip any set; text
//! only represents sets over the lifted byte alphabet.

use std::io::Write;

use thiserror::Error;

use crate::strings::{StringSet, Symbol};

pub const BINARY_MAGIC: [u8; 4] = *b"DPSS";

#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("set is not text-representable: string {index} holds symbol {symbol}")]
    NotTextRepresentable { index: usize, symbol: Symbol },
}

/// Parses either format, telling them apart by the binary magic.
pub fn parse(bytes: &[u8]) -> Result<StringSet, IoError> {
    if bytes.starts_with(&BINARY_MAGIC) {
        parse_binary(bytes)
    } else {
        parse_text(bytes)
    }
}

/// Newline-delimited byte strings; a trailing newline does not add an empty
/// string, interior empty lines do.
pub fn parse_text(bytes: &[u8]) -> Result<StringSet, IoError> {
    if bytes.contains(&0) {
        return Err(IoError::Malformed("text input contains a NUL byte".into()));
    }
    let mut lines: Vec<&[u8]> = bytes.split(|&b| b == b'\n').collect();
    if bytes.is_empty() || bytes.ends_with(b"\n") {
        lines.pop();
    }
    Ok(StringSet::from_byte_strings(lines))
}

pub fn parse_binary(bytes: &[u8]) -> Result<StringSet, IoError> {
    let mut at = 0usize;
    let mut take = |n: usize| -> Result<&[u8], IoError> {
        if at + n > bytes.len() {
            return Err(IoError::Malformed(format!(
                "expected {n} more bytes at offset {at}, file holds {}",
                bytes.len()
            )));
        }
        let slice = &bytes[at..at + n];
        at += n;
        Ok(slice)
    };

    if take(4)? != BINARY_MAGIC {
        return Err(IoError::Malformed("bad magic".into()));
    }
    let k = u64::from_le_bytes(take(8)?.try_into().unwrap()) as usize;
    let n = u64::from_le_bytes(take(8)?.try_into().unwrap()) as usize;
    let sigma = u32::from_le_bytes(take(4)?.try_into().unwrap());

    let mut lengths = Vec::with_capacity(k);
    for _ in 0..k {
        lengths.push(u64::from_le_bytes(take(8)?.try_into().unwrap()) as usize);
    }
    let mut buffer = Vec::with_capacity(n);
    for _ in 0..n {
        buffer.push(u32::from_le_bytes(take(4)?.try_into().unwrap()));
    }
    if at != bytes.len() {
        return Err(IoError::Malformed(format!("{} trailing bytes", bytes.len() - at)));
    }
    if buffer.iter().any(|&c| c > sigma) {
        return Err(IoError::Malformed("symbol exceeds declared sigma".into()));
    }
    StringSet::from_parts(buffer, lengths, sigma)
        .map_err(|e| IoError::Malformed(e.to_string()))
}

/// Writes format A. Every symbol must be a lifted byte (in `[2, 256]` after
/// excluding NUL) other than the newline byte.
pub fn write_text(set: &StringSet, out: &mut impl Write) -> Result<(), IoError> {
    for (index, row) in set.strings().enumerate() {
        let mut line = Vec::with_capacity(row.len() + 1);
        for &symbol in row {
            let byte = symbol
                .checked_sub(1)
                .filter(|&b| b <= 255 && b != 0 && b != b'\n' as u32)
                .ok_or(IoError::NotTextRepresentable { index, symbol })?;
            line.push(byte as u8);
        }
        line.push(b'\n');
        out.write_all(&line)?;
    }
    Ok(())
}

pub fn write_binary(set: &StringSet, out: &mut impl Write) -> Result<(), IoError> {
    out.write_all(&BINARY_MAGIC)?;
    out.write_all(&(set.k() as u64).to_le_bytes())?;
    out.write_all(&(set.total_len() as u64).to_le_bytes())?;
    out.write_all(&set.sigma().to_le_bytes())?;
    for i in 0..set.k() {
        out.write_all(&(set.len_of(i) as u64).to_le_bytes())?;
    }
    for row in set.strings() {
        for &symbol in row {
            out.write_all(&symbol.to_le_bytes())?;
        }
    }
    Ok(())
}
