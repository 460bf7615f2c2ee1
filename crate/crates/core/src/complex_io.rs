//! Text serialization of chain complexes.
//!
//! ```text
//! chaincomplex <torus|xq> m=<m> ring=<z2|z>
//! dim <d> cells=<count>
//! cell <d> <index> <comma-joined symbols>
//! ...
//! bnd <d> <row> <col> <coeff>
//! ```
//!
//! Output ordering is deterministic: dimensions ascending, cells by
//! index, boundary triples by (dimension, column, row).

use std::fmt::Write as _;

use thiserror::Error;

use crate::homology::SparseMat;
use crate::torus::{ChainComplexData, Ring, Space, TorusCell};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct ComplexIoError {
    pub line: usize,
    pub msg: String,
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, ComplexIoError> {
    Err(ComplexIoError {
        line,
        msg: msg.into(),
    })
}

pub fn space_name(space: Space) -> &'static str {
    match space {
        Space::Torus => "torus",
        Space::Quotient => "xq",
    }
}

pub fn ring_name(ring: Ring) -> &'static str {
    match ring {
        Ring::Z2 => "z2",
        Ring::Z => "z",
    }
}

/// Renders a chain complex in the text format.
pub fn write_chain_complex(cx: &ChainComplexData) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "chaincomplex {} m={} ring={}",
        space_name(cx.space),
        cx.m,
        ring_name(cx.ring)
    );
    for (d, cells) in cx.cells.iter().enumerate() {
        let _ = writeln!(out, "dim {d} cells={}", cells.len());
        for (i, c) in cells.iter().enumerate() {
            let _ = writeln!(out, "cell {d} {i} {c}");
        }
    }
    for (d, b) in cx.boundaries.iter().enumerate() {
        let mut entries = b.entries.clone();
        entries.sort_unstable_by_key(|&(r, c, _)| (c, r));
        for (r, c, a) in entries {
            let _ = writeln!(out, "bnd {d} {r} {c} {a}");
        }
    }
    out
}

/// Parses the text format back into a chain complex.
pub fn parse_chain_complex(text: &str) -> Result<ChainComplexData, ComplexIoError> {
    let mut space: Option<Space> = None;
    let mut ring: Option<Ring> = None;
    let mut m: Option<usize> = None;
    let mut cells: Vec<Vec<TorusCell>> = Vec::new();
    let mut declared: Vec<usize> = Vec::new();
    let mut triples: Vec<(usize, u32, u32, i64)> = Vec::new();

    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw_line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens[0] {
            "chaincomplex" => {
                if tokens.len() != 4 {
                    return err(line, "expected: chaincomplex <torus|xq> m=<m> ring=<z2|z>");
                }
                space = Some(match tokens[1] {
                    "torus" => Space::Torus,
                    "xq" => Space::Quotient,
                    other => return err(line, format!("unknown space '{other}'")),
                });
                let m_str = tokens[2]
                    .strip_prefix("m=")
                    .ok_or_else(|| ComplexIoError {
                        line,
                        msg: "expected m=<m>".into(),
                    })?;
                m = Some(m_str.parse().map_err(|_| ComplexIoError {
                    line,
                    msg: format!("bad m '{m_str}'"),
                })?);
                ring = Some(match tokens[3].strip_prefix("ring=") {
                    Some("z2") => Ring::Z2,
                    Some("z") => Ring::Z,
                    _ => return err(line, "expected ring=z2 or ring=z"),
                });
            }
            "dim" => {
                if tokens.len() != 3 {
                    return err(line, "expected: dim <d> cells=<count>");
                }
                let d: usize = tokens[1].parse().map_err(|_| ComplexIoError {
                    line,
                    msg: format!("bad dimension '{}'", tokens[1]),
                })?;
                if d != cells.len() {
                    return err(line, format!("dimension blocks must ascend; got {d}"));
                }
                let count: usize = tokens[2]
                    .strip_prefix("cells=")
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| ComplexIoError {
                        line,
                        msg: "expected cells=<count>".into(),
                    })?;
                cells.push(Vec::with_capacity(count));
                declared.push(count);
            }
            "cell" => {
                if tokens.len() != 4 && tokens.len() != 3 {
                    return err(line, "expected: cell <d> <index> <symbols>");
                }
                let d: usize = tokens[1].parse().map_err(|_| ComplexIoError {
                    line,
                    msg: format!("bad dimension '{}'", tokens[1]),
                })?;
                let i: usize = tokens[2].parse().map_err(|_| ComplexIoError {
                    line,
                    msg: format!("bad index '{}'", tokens[2]),
                })?;
                if d >= cells.len() || i != cells[d].len() {
                    return err(line, "cells must follow their dim block in index order");
                }
                let symbols = if tokens.len() == 4 { tokens[3] } else { "" };
                let cell = TorusCell::parse(symbols).ok_or_else(|| ComplexIoError {
                    line,
                    msg: format!("bad cell '{symbols}'"),
                })?;
                cells[d].push(cell);
            }
            "bnd" => {
                if tokens.len() != 5 {
                    return err(line, "expected: bnd <d> <row> <col> <coeff>");
                }
                let parse_num = |s: &str| -> Result<i64, ComplexIoError> {
                    s.parse().map_err(|_| ComplexIoError {
                        line,
                        msg: format!("bad number '{s}'"),
                    })
                };
                let d = parse_num(tokens[1])? as usize;
                let r = parse_num(tokens[2])? as u32;
                let c = parse_num(tokens[3])? as u32;
                let a = parse_num(tokens[4])?;
                triples.push((d, r, c, a));
            }
            other => return err(line, format!("unknown directive '{other}'")),
        }
    }

    let (Some(space), Some(ring), Some(m)) = (space, ring, m) else {
        return err(0, "missing chaincomplex header");
    };
    for (d, &count) in declared.iter().enumerate() {
        if cells[d].len() != count {
            return err(
                0,
                format!("dim {d} declares {count} cells, found {}", cells[d].len()),
            );
        }
    }

    let mut boundaries: Vec<SparseMat> = (0..cells.len())
        .map(|d| {
            let rows = if d == 0 { 0 } else { cells[d - 1].len() };
            SparseMat::zero(rows, cells[d].len())
        })
        .collect();
    for (d, r, c, a) in triples {
        if d == 0 || d >= boundaries.len() {
            return err(0, format!("boundary dimension {d} out of range"));
        }
        let b = &mut boundaries[d];
        if r as usize >= b.rows || c as usize >= b.cols {
            return err(0, format!("boundary entry ({r},{c}) out of range in dim {d}"));
        }
        b.entries.push((r, c, a));
    }
    Ok(ChainComplexData {
        m,
        space,
        ring,
        cells,
        boundaries,
    })
}
