//! Parallelism files: compact JSON with colors and lines in sorted order, so
//! that equal parallelisms give identical bytes.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ColorClass, Line, Parallelism, Point};
use crate::gf2::{parse_hex, FieldElem};

pub const POINT_ENCODING: &str = "x1<<n|x";

#[derive(Serialize, Deserialize)]
struct ParallelismFile {
    n: u32,
    point_encoding: String,
    modulus: String,
    colors: Vec<ClassFile>,
}

#[derive(Serialize, Deserialize)]
struct ClassFile {
    color: String,
    lines: Vec<[Point; 3]>,
}

/// Serializes `par`; the modulus records which field the colors live in.
pub fn parallelism_to_json(par: &Parallelism, modulus: u32) -> String {
    let mut par = par.clone();
    par.normalize();
    let file = ParallelismFile {
        n: par.n,
        point_encoding: POINT_ENCODING.into(),
        modulus: format!("{modulus:#x}"),
        colors: par
            .classes
            .iter()
            .map(|c| ClassFile {
                color: format!("{:#x}", c.color),
                lines: c.lines.iter().map(|l| l.points()).collect(),
            })
            .collect(),
    };
    let mut s = serde_json::to_string(&file).expect("parallelism serializes");
    s.push('\n');
    s
}

/// Parses a parallelism file into the parallelism and its modulus. Lines
/// must be well formed; whether they form a parallelism is left to the
/// caller.
pub fn parallelism_from_json(text: &str) -> Result<(Parallelism, u32)> {
    let file: ParallelismFile =
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    if file.point_encoding != POINT_ENCODING {
        return Err(Error::Malformed(format!(
            "unsupported point encoding {:?}",
            file.point_encoding
        )));
    }
    if file.n == 0 || file.n > crate::gf2::MAX_DEGREE {
        return Err(Error::DegreeOutOfRange(file.n));
    }
    let modulus = parse_hex(&file.modulus)
        .filter(|&m| m <= u32::MAX as u64)
        .ok_or_else(|| Error::Malformed(format!("bad modulus {:?}", file.modulus)))?
        as u32;
    let top = 1u32 << (file.n + 1);
    let mut classes = Vec::with_capacity(file.colors.len());
    for c in file.colors {
        let color = parse_hex(&c.color)
            .filter(|&v| v < 1 << file.n)
            .ok_or_else(|| Error::Malformed(format!("bad color {:?}", c.color)))?
            as FieldElem;
        let lines = c
            .lines
            .into_iter()
            .map(|pts| {
                if pts.iter().any(|&p| p >= top) {
                    return Err(Error::Malformed(format!("{pts:?} lies outside PG({}, 2)", file.n)));
                }
                Line::try_from(pts)
            })
            .collect::<Result<Vec<_>>>()?;
        classes.push(ColorClass { color, lines });
    }
    Ok((Parallelism { n: file.n, classes }, modulus))
}

pub fn store_parallelism(par: &Parallelism, modulus: u32, path: &Path) -> Result<()> {
    std::fs::write(path, parallelism_to_json(par, modulus))?;
    Ok(())
}

pub fn load_parallelism(path: &Path) -> Result<(Parallelism, u32)> {
    parallelism_from_json(&std::fs::read_to_string(path)?)
}
