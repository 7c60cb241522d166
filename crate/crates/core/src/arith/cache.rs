//! On-disk table cache.
//!
//! Layout, all integers little-endian:
//!
//! | offset | size | field                                  |
//! |--------|------|----------------------------------------|
//! | 0      | 4    | magic `ZMAT`                           |
//! | 4      | 1    | format version (1)                     |
//! | 5      | 1    | element width in bytes (8)             |
//! | 6      | 1    | flags, bit 0 = multiplicative          |
//! | 7      | 1    | reserved, 0                            |
//! | 8      | 4    | parameter k (u32, 0 if unused)         |
//! | 12     | 8    | N (u64)                                |
//! | 20     | 2    | label length L (u16)                   |
//! | 22     | L    | label, UTF-8                           |
//! | 22+L   | 8N   | f(1), …, f(N) as i64                   |

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::{check_capacity, ArithTable};
use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"ZMAT";
const VERSION: u8 = 1;
const WIDTH: u8 = 8;

fn io_err(e: std::io::Error) -> Error {
    Error::Cache(e.to_string())
}

pub fn write_table<W: Write>(table: &ArithTable, mut out: W) -> Result<()> {
    let label = table.label.as_bytes();
    let label_len = u16::try_from(label.len()).map_err(|_| Error::Cache("label too long".into()))?;
    out.write_all(MAGIC).map_err(io_err)?;
    out.write_all(&[VERSION, WIDTH, table.multiplicative as u8, 0]).map_err(io_err)?;
    out.write_all(&table.param.to_le_bytes()).map_err(io_err)?;
    out.write_all(&(table.len() as u64).to_le_bytes()).map_err(io_err)?;
    out.write_all(&label_len.to_le_bytes()).map_err(io_err)?;
    out.write_all(label).map_err(io_err)?;
    for v in table.values() {
        out.write_all(&v.to_le_bytes()).map_err(io_err)?;
    }
    out.flush().map_err(io_err)
}

pub fn read_table<R: Read>(mut input: R) -> Result<ArithTable> {
    let mut head = [0u8; 22];
    input.read_exact(&mut head).map_err(io_err)?;
    if &head[0..4] != MAGIC {
        return Err(Error::Cache("bad magic".into()));
    }
    if head[4] != VERSION || head[5] != WIDTH {
        return Err(Error::Cache(format!("unsupported version {} / width {}", head[4], head[5])));
    }
    let multiplicative = head[6] & 1 == 1;
    let param = u32::from_le_bytes(head[8..12].try_into().unwrap());
    let n = u64::from_le_bytes(head[12..20].try_into().unwrap()) as usize;
    let label_len = u16::from_le_bytes(head[20..22].try_into().unwrap()) as usize;
    check_capacity(n)?;

    let mut label = vec![0u8; label_len];
    input.read_exact(&mut label).map_err(io_err)?;
    let label = String::from_utf8(label).map_err(|e| Error::Cache(e.to_string()))?;

    let mut values = Vec::with_capacity(n + 1);
    values.push(0);
    let mut buf = [0u8; 8];
    for _ in 0..n {
        input.read_exact(&mut buf).map_err(io_err)?;
        values.push(i64::from_le_bytes(buf));
    }
    Ok(ArithTable { label, param, multiplicative, values })
}

/// Loads `dir/name.zmat` if present and of length `n`, otherwise builds the
/// table and writes it there.
pub fn load_or_build(
    dir: &Path,
    name: &str,
    n: usize,
    build: impl FnOnce() -> Result<ArithTable>,
) -> Result<ArithTable> {
    let path = dir.join(format!("{name}-{n}.zmat"));
    if let Ok(file) = File::open(&path) {
        if let Ok(table) = read_table(BufReader::new(file)) {
            if table.len() == n {
                return Ok(table);
            }
        }
    }
    let table = build()?;
    std::fs::create_dir_all(dir).map_err(io_err)?;
    let file = File::create(&path).map_err(io_err)?;
    write_table(&table, BufWriter::new(file))?;
    Ok(table)
}
