//! Binary snapshots.
//!
//! Layout, all integers and floats little-endian:
//!
//! ```text
//! "RLAB"  version:u32  n:u32  L:f64  count:u32
//! count × name[16]        ASCII, NUL padded
//! count × n² × f64        row-major samples, field after field
//! ```

use std::io::{self, Read, Write};

use thiserror::Error;

use super::{FieldError, Grid2, ScalarField};

pub const MAGIC: &[u8; 4] = b"RLAB";
pub const VERSION: u32 = 1;
pub const NAME_LEN: usize = 16;

#[derive(Debug, Error)]
pub enum SnapshotError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("not a snapshot (bad magic {0:?})")]
    Magic([u8; 4]),
    #[error("unsupported snapshot version {0}")]
    Version(u32),
    #[error("field name {0:?} must be non-empty ASCII of at most 16 bytes")]
    Name(String),
    #[error("snapshot holds no fields")]
    Empty,
}

/// Named fields on one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub fields: Vec<(String, ScalarField)>,
}

impl Snapshot {
    pub fn new(fields: Vec<(String, ScalarField)>) -> Result<Self, SnapshotError> {
        let Some((_, first)) = fields.first() else {
            return Err(SnapshotError::Empty);
        };
        let grid = *first.grid();
        for (name, f) in &fields {
            if name.is_empty() || name.len() > NAME_LEN || !name.is_ascii() || name.contains('\0') {
                return Err(SnapshotError::Name(name.clone()));
            }
            grid.same_as(f.grid())?;
        }
        Ok(Self { fields })
    }

    pub fn grid(&self) -> &Grid2 {
        self.fields[0].1.grid()
    }

    pub fn get(&self, name: &str) -> Option<&ScalarField> {
        self.fields.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }

    pub fn write_to(&self, mut out: impl Write) -> Result<(), SnapshotError> {
        let grid = self.grid();
        out.write_all(MAGIC)?;
        out.write_all(&VERSION.to_le_bytes())?;
        out.write_all(&(grid.n() as u32).to_le_bytes())?;
        out.write_all(&grid.length().to_le_bytes())?;
        out.write_all(&(self.fields.len() as u32).to_le_bytes())?;
        for (name, _) in &self.fields {
            let mut buf = [0u8; NAME_LEN];
            buf[..name.len()].copy_from_slice(name.as_bytes());
            out.write_all(&buf)?;
        }
        for (_, f) in &self.fields {
            let mut bytes = Vec::with_capacity(f.values().len() * 8);
            for v in f.values() {
                bytes.extend_from_slice(&v.to_le_bytes());
            }
            out.write_all(&bytes)?;
        }
        Ok(())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to a Vec cannot fail");
        buf
    }

    pub fn read_from(mut input: impl Read) -> Result<Self, SnapshotError> {
        let mut magic = [0u8; 4];
        input.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(SnapshotError::Magic(magic));
        }
        let version = read_u32(&mut input)?;
        if version != VERSION {
            return Err(SnapshotError::Version(version));
        }
        let n = read_u32(&mut input)? as usize;
        let mut l = [0u8; 8];
        input.read_exact(&mut l)?;
        let grid = Grid2::new(n, f64::from_le_bytes(l))?;
        let count = read_u32(&mut input)? as usize;
        if count == 0 {
            return Err(SnapshotError::Empty);
        }
        let mut names = Vec::with_capacity(count);
        for _ in 0..count {
            let mut buf = [0u8; NAME_LEN];
            input.read_exact(&mut buf)?;
            let end = buf.iter().position(|&b| b == 0).unwrap_or(NAME_LEN);
            let name = std::str::from_utf8(&buf[..end])
                .ok()
                .filter(|s| s.is_ascii() && !s.is_empty())
                .ok_or_else(|| SnapshotError::Name(String::from_utf8_lossy(&buf).into_owned()))?;
            names.push(name.to_string());
        }
        let mut fields = Vec::with_capacity(count);
        let mut bytes = vec![0u8; grid.len() * 8];
        for name in names {
            input.read_exact(&mut bytes)?;
            let values = bytes
                .chunks_exact(8)
                .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
                .collect();
            fields.push((name, ScalarField::from_values(grid, values)?));
        }
        Self::new(fields)
    }
}

fn read_u32(input: &mut impl Read) -> io::Result<u32> {
    let mut b = [0u8; 4];
    input.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}
