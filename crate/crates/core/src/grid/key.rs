use std::fmt;

use super::domain::Domain;
use super::generator::{Generator, MAX_N};
use super::GridError;

/// Byte encoding of a basis element. Domains encode as
/// `b'D', n, from rows, to rows, n*n multiplicities (row-major, bottom first)`;
/// partition triples append their N-vector and parts (see `cdp`).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(pub Vec<u8>);

impl CanonicalKey {
    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }

    pub fn from_hex(s: &str) -> Result<Self, GridError> {
        hex::decode(s.trim()).map(CanonicalKey).map_err(|e| GridError::Parse(format!("hex key: {e}")))
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl Domain {
    pub(crate) fn write_key(&self, out: &mut Vec<u8>) {
        let n = self.n();
        out.push(n as u8);
        out.extend_from_slice(self.from().rows());
        out.extend_from_slice(self.to().rows());
        out.extend_from_slice(self.mult_slice());
    }

    pub fn key(&self) -> CanonicalKey {
        let mut v = vec![b'D'];
        self.write_key(&mut v);
        CanonicalKey(v)
    }

    /// Reads a domain encoding from the front of `bytes`, returning the rest.
    pub(crate) fn read_key(bytes: &[u8]) -> Result<(Domain, &[u8]), GridError> {
        let bad = || GridError::Parse("truncated domain key".into());
        let n = *bytes.first().ok_or_else(bad)? as usize;
        if !(2..=MAX_N).contains(&n) || bytes.len() < 1 + 2 * n + n * n {
            return Err(bad());
        }
        let rows = |s: &[u8]| Generator::from_rows(&s.iter().map(|&r| r as usize).collect::<Vec<_>>());
        let from = rows(&bytes[1..1 + n])?;
        let to = rows(&bytes[1 + n..1 + 2 * n])?;
        let mult: Vec<i64> = bytes[1 + 2 * n..1 + 2 * n + n * n].iter().map(|&v| v as i64).collect();
        Ok((Domain::new(from, to, &mult)?, &bytes[1 + 2 * n + n * n..]))
    }

    pub fn from_key(key: &CanonicalKey) -> Result<Domain, GridError> {
        match key.0.split_first() {
            Some((b'D', rest)) => {
                let (d, tail) = Domain::read_key(rest)?;
                if !tail.is_empty() {
                    return Err(GridError::Parse("trailing bytes in domain key".into()));
                }
                Ok(d)
            }
            _ => Err(GridError::Parse("not a domain key".into())),
        }
    }
}
