//! Text formats for complexes, norms, maps and pairings.
//!
//! All formats are line-based UTF-8: `#` starts a comment, blank lines are
//! ignored, rationals are written "p/q" (or "p"), identifiers match
//! `[A-Za-z0-9_]+`. Parse errors carry 1-based line numbers.
//!
//! Complex files hold either a single `maximal_simplices:` entry or explicit
//! `cells{k}:` / `incidence{k}:` blocks (optionally `intersects:` pairs).
//! Map files name a target (`R d` or `S1`) and one `vertex:` line per
//! vertex; circle maps may add `edge:` polylines and a `triangulation:`.
//! Pairing files serialize a chain-cochain map as per-k 0/1 matrix blocks.

use std::collections::HashMap;

use thiserror::Error;

use crate::complex::{ComplexError, ComplexSkeleton};
use crate::geometry::GeometryError;
use crate::gf2::{Gf2Matrix, Gf2Vec};
use crate::overlap::{AffineMap, OverlapError};
use crate::pairing::{ChainCochainMap, CircleMap, CircleTriangulation, PairingError};
use crate::rational::parse_rat;
use crate::Rat;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Pairing(#[from] PairingError),
    #[error(transparent)]
    Overlap(#[from] OverlapError),
}

fn err(line: usize, message: impl Into<String>) -> IoError {
    IoError::Parse { line, message: message.into() }
}

fn valid_ident(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Strips comments and yields (1-based line number, content) pairs.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            None
        } else {
            Some((i + 1, content))
        }
    })
}

// ---------------------------------------------------------------------------
// Complex files
// ---------------------------------------------------------------------------

pub fn parse_complex(text: &str) -> Result<ComplexSkeleton, IoError> {
    let mut maximal: Option<(usize, Vec<Vec<String>>)> = None;
    let mut cells: Vec<(usize, usize, Vec<String>)> = Vec::new();
    let mut incidences: HashMap<(usize, String), Vec<String>> = HashMap::new();
    let mut intersections: Vec<((usize, String), (usize, String))> = Vec::new();

    for (lineno, content) in lines(text) {
        let Some((key, rest)) = content.split_once(':') else {
            return Err(err(lineno, format!("expected 'key: value', got {content:?}")));
        };
        let key = key.trim();
        let rest = rest.trim();
        if key == "maximal_simplices" {
            if maximal.is_some() {
                return Err(err(lineno, "duplicate maximal_simplices entry"));
            }
            maximal = Some((lineno, parse_list_of_lists(rest, lineno)?));
        } else if let Some(k) = key.strip_prefix("cells") {
            let k: usize =
                k.parse().map_err(|_| err(lineno, format!("bad dimension in {key:?}")))?;
            let names: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
            for n in &names {
                if !valid_ident(n) {
                    return Err(err(lineno, format!("invalid cell identifier {n:?}")));
                }
            }
            cells.push((lineno, k, names));
        } else if let Some(k) = key.strip_prefix("incidence") {
            let k: usize =
                k.parse().map_err(|_| err(lineno, format!("bad dimension in {key:?}")))?;
            let Some((cell, faces)) = rest.split_once(':') else {
                return Err(err(lineno, "expected 'incidence{k}: cell: face face ...'"));
            };
            let cell = cell.trim().to_string();
            let faces: Vec<String> = faces.split_whitespace().map(str::to_string).collect();
            if incidences.insert((k, cell.clone()), faces).is_some() {
                return Err(err(lineno, format!("duplicate incidence entry for {cell:?}")));
            }
        } else if key == "intersects" {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(err(lineno, "expected 'intersects: k/name k/name'"));
            }
            let mut pair = Vec::new();
            for p in parts {
                let Some((k, name)) = p.split_once('/') else {
                    return Err(err(lineno, format!("expected k/name, got {p:?}")));
                };
                let k: usize =
                    k.parse().map_err(|_| err(lineno, format!("bad dimension in {p:?}")))?;
                pair.push((k, name.to_string()));
            }
            intersections.push((pair[0].clone(), pair[1].clone()));
        } else {
            return Err(err(lineno, format!("unknown entry {key:?} in complex file")));
        }
    }

    match (maximal, cells.is_empty()) {
        (Some((_, simplices)), true) => Ok(ComplexSkeleton::from_maximal_simplices(&simplices)?),
        (Some((line, _)), false) => {
            Err(err(line, "complex file mixes maximal_simplices with explicit cells"))
        }
        (None, false) => {
            let max_dim = cells.iter().map(|(_, k, _)| *k).max().unwrap();
            let mut per_dim: Vec<Vec<String>> = vec![Vec::new(); max_dim + 1];
            for (_, k, names) in cells {
                per_dim[k].extend(names);
            }
            Ok(ComplexSkeleton::from_polyhedral(&per_dim, &incidences, &intersections)?)
        }
        (None, true) => Err(err(1, "empty complex file")),
    }
}

/// Parses `[[a, b], [c], ...]` with identifier atoms.
fn parse_list_of_lists(s: &str, lineno: usize) -> Result<Vec<Vec<String>>, IoError> {
    let s = s.trim();
    let inner = s
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| err(lineno, "expected [[...], [...]]"))?;
    let mut out = Vec::new();
    let mut current: Option<Vec<String>> = None;
    let mut atom = String::new();
    for c in inner.chars() {
        match c {
            '[' => {
                if current.is_some() {
                    return Err(err(lineno, "nested '[' inside a simplex"));
                }
                current = Some(Vec::new());
            }
            ']' => {
                let mut group = current.take().ok_or_else(|| err(lineno, "unmatched ']'"))?;
                if !atom.trim().is_empty() {
                    group.push(atom.trim().to_string());
                }
                atom.clear();
                out.push(group);
            }
            ',' => {
                if let Some(group) = current.as_mut() {
                    if !atom.trim().is_empty() {
                        group.push(atom.trim().to_string());
                    }
                    atom.clear();
                }
                // Commas between simplices are separators.
            }
            c if c.is_whitespace() => {}
            c => atom.push(c),
        }
    }
    if current.is_some() {
        return Err(err(lineno, "unterminated simplex list"));
    }
    for group in &out {
        for v in group {
            if !valid_ident(v) {
                return Err(err(lineno, format!("invalid vertex identifier {v:?}")));
            }
        }
    }
    Ok(out)
}

/// Renders a simplicial complex as a maximal_simplices file.
pub fn write_simplices(simplices: &[Vec<String>], header: &str) -> String {
    let body = simplices
        .iter()
        .map(|s| format!("[{}]", s.join(",")))
        .collect::<Vec<_>>()
        .join(", ");
    let mut out = String::new();
    for line in header.lines() {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    out.push_str(&format!("maximal_simplices: [{body}]\n"));
    out
}

// ---------------------------------------------------------------------------
// Weight files
// ---------------------------------------------------------------------------

/// Parses `weights{k}: cell p/q` lines into raw per-dimension weight tables
/// (normalization happens in `WeightedNorm::from_weights`). Every cell of
/// every dimension must be covered exactly once.
pub fn parse_weights(text: &str, x: &ComplexSkeleton) -> Result<Vec<Vec<Rat>>, IoError> {
    let mut raw: Vec<Vec<Option<Rat>>> =
        (0..=x.dim() as isize).map(|k| vec![None; x.n_cells(k)]).collect();
    for (lineno, content) in lines(text) {
        let Some((key, rest)) = content.split_once(':') else {
            return Err(err(lineno, "expected 'weights{k}: cell p/q'"));
        };
        let Some(k) = key.trim().strip_prefix("weights") else {
            return Err(err(lineno, format!("unknown entry {key:?} in weights file")));
        };
        let k: isize = k.parse().map_err(|_| err(lineno, format!("bad dimension {k:?}")))?;
        if k < 0 || k > x.dim() as isize {
            return Err(err(lineno, format!("dimension {k} out of range")));
        }
        let parts: Vec<&str> = rest.split_whitespace().collect();
        if parts.len() != 2 {
            return Err(err(lineno, "expected 'weights{k}: cell p/q'"));
        }
        let idx = x.cell_index(k, parts[0]).map_err(|e| err(lineno, e.to_string()))?;
        let w = parse_rat(parts[1]).map_err(|m| err(lineno, m))?;
        if raw[k as usize][idx].replace(w).is_some() {
            return Err(err(lineno, format!("duplicate weight for cell {:?}", parts[0])));
        }
    }
    let mut out = Vec::new();
    for (k, level) in raw.into_iter().enumerate() {
        let mut dense = Vec::with_capacity(level.len());
        for (i, w) in level.into_iter().enumerate() {
            match w {
                Some(w) => dense.push(w),
                None => {
                    return Err(err(
                        0,
                        format!("missing weight for cell {:?} (dim {k})", x.cell_name(k as isize, i)),
                    ))
                }
            }
        }
        out.push(dense);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Map files
// ---------------------------------------------------------------------------

/// A parsed map file: affine into R^d, or PL into the circle.
#[derive(Debug)]
pub enum MapFile {
    Affine(AffineMap),
    Circle { map: CircleMap, triangulation: Option<CircleTriangulation> },
}

pub fn parse_map(text: &str, x: &ComplexSkeleton) -> Result<MapFile, IoError> {
    enum Target {
        Euclidean(usize),
        Circle,
    }
    let mut target: Option<Target> = None;
    let mut vertex_images: HashMap<usize, Vec<Rat>> = HashMap::new();
    let mut edge_paths: HashMap<usize, Vec<Rat>> = HashMap::new();
    let mut triangulation: Option<Vec<Rat>> = None;

    for (lineno, content) in lines(text) {
        let Some((key, rest)) = content.split_once(':') else {
            return Err(err(lineno, format!("expected 'key: value', got {content:?}")));
        };
        let key = key.trim();
        let rest = rest.trim();
        match key {
            "target" => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                target = Some(match parts.as_slice() {
                    ["S1"] => Target::Circle,
                    ["R", d] => Target::Euclidean(
                        d.parse().map_err(|_| err(lineno, format!("bad dimension {d:?}")))?,
                    ),
                    _ => return Err(err(lineno, "expected 'target: R d' or 'target: S1'")),
                });
            }
            "vertex" => {
                let Some((name, coords)) = rest.split_once("->") else {
                    return Err(err(lineno, "expected 'vertex: name -> coords'"));
                };
                let idx = x
                    .cell_index(0, name.trim())
                    .map_err(|e| err(lineno, e.to_string()))?;
                let coords: Vec<Rat> = coords
                    .split_whitespace()
                    .map(|t| parse_rat(t).map_err(|m| err(lineno, m)))
                    .collect::<Result<_, _>>()?;
                if vertex_images.insert(idx, coords).is_some() {
                    return Err(err(lineno, format!("duplicate image for vertex {name:?}")));
                }
            }
            "edge" => {
                let Some((name, pts)) = rest.split_once("->") else {
                    return Err(err(lineno, "expected 'edge: name -> points'"));
                };
                let idx = x
                    .cell_index(1, name.trim())
                    .map_err(|e| err(lineno, e.to_string()))?;
                let pts: Vec<Rat> = pts
                    .split_whitespace()
                    .map(|t| parse_rat(t).map_err(|m| err(lineno, m)))
                    .collect::<Result<_, _>>()?;
                edge_paths.insert(idx, pts);
            }
            "triangulation" => {
                let pts: Vec<Rat> = rest
                    .split_whitespace()
                    .map(|t| parse_rat(t).map_err(|m| err(lineno, m)))
                    .collect::<Result<_, _>>()?;
                triangulation = Some(pts);
            }
            other => return Err(err(lineno, format!("unknown entry {other:?} in map file"))),
        }
    }

    let Some(target) = target else {
        return Err(err(1, "map file misses a 'target:' line"));
    };
    let mut images = Vec::with_capacity(x.n_cells(0));
    for v in 0..x.n_cells(0) {
        match vertex_images.remove(&v) {
            Some(c) => images.push(c),
            None => {
                return Err(err(
                    0,
                    format!("missing image for vertex {:?}", x.cell_name(0, v)),
                ))
            }
        }
    }
    match target {
        Target::Euclidean(d) => {
            for c in &images {
                if c.len() != d {
                    return Err(err(0, format!("vertex image {c:?} is not {d}-dimensional")));
                }
            }
            if !edge_paths.is_empty() {
                return Err(err(0, "edge polylines are only meaningful for circle targets"));
            }
            Ok(MapFile::Affine(AffineMap::new(x, images)?))
        }
        Target::Circle => {
            for c in &images {
                if c.len() != 1 {
                    return Err(err(0, format!("circle image {c:?} must be one rational")));
                }
            }
            let flat: Vec<Rat> = images.into_iter().map(|mut c| c.remove(0)).collect();
            let map = CircleMap::new(x, flat, edge_paths)?;
            let triangulation = match triangulation {
                None => None,
                Some(verts) => Some(CircleTriangulation::new(verts)?),
            };
            Ok(MapFile::Circle { map, triangulation })
        }
    }
}

// ---------------------------------------------------------------------------
// Pairing files
// ---------------------------------------------------------------------------

pub fn write_pairing(f: &ChainCochainMap) -> String {
    let mut out = format!("d: {}\n", f.d);
    for (k, m) in f.mats.iter().enumerate() {
        out.push_str(&format!("k: {k} rows: {} cols: {}\n", m.rows(), m.cols()));
        out.push_str(&m.rows_as_text());
    }
    out
}

pub fn parse_pairing(text: &str) -> Result<ChainCochainMap, IoError> {
    let mut d: Option<usize> = None;
    let mut blocks: Vec<(usize, usize, usize, Vec<Gf2Vec>)> = Vec::new();
    for (lineno, content) in lines(text) {
        if let Some(rest) = content.strip_prefix("d:") {
            if d.replace(
                rest.trim().parse().map_err(|_| err(lineno, "bad dimension after 'd:'"))?,
            )
            .is_some()
            {
                return Err(err(lineno, "duplicate 'd:' entry"));
            }
        } else if content.starts_with("k:") {
            let parts: Vec<&str> = content.split_whitespace().collect();
            if parts.len() != 6 || parts[0] != "k:" || parts[2] != "rows:" || parts[4] != "cols:" {
                return Err(err(lineno, "expected 'k: <k> rows: <r> cols: <c>'"));
            }
            let parse = |s: &str| -> Result<usize, IoError> {
                s.parse().map_err(|_| err(lineno, format!("bad number {s:?}")))
            };
            blocks.push((parse(parts[1])?, parse(parts[3])?, parse(parts[5])?, Vec::new()));
        } else {
            let Some((_, _, cols, rows)) = blocks.last_mut() else {
                return Err(err(lineno, "matrix row before any 'k:' header"));
            };
            let bits: Vec<u8> = content
                .split_whitespace()
                .map(|t| match t {
                    "0" => Ok(0u8),
                    "1" => Ok(1u8),
                    other => Err(err(lineno, format!("expected 0 or 1, got {other:?}"))),
                })
                .collect::<Result<_, _>>()?;
            if bits.len() != *cols {
                return Err(err(
                    lineno,
                    format!("row has {} entries, block declares {} columns", bits.len(), cols),
                ));
            }
            rows.push(Gf2Vec::from_bits(&bits));
        }
    }
    let Some(d) = d else {
        return Err(err(1, "pairing file misses a 'd:' entry"));
    };
    let mut mats: Vec<Option<Gf2Matrix>> = vec![None; d + 1];
    for (k, want_rows, cols, rows) in blocks {
        if k > d {
            return Err(err(0, format!("block k={k} exceeds dimension {d}")));
        }
        if rows.len() != want_rows {
            return Err(err(
                0,
                format!("block k={k} has {} rows, declared {}", rows.len(), want_rows),
            ));
        }
        if mats[k].replace(Gf2Matrix::from_rows(cols, rows)).is_some() {
            return Err(err(0, format!("duplicate block k={k}")));
        }
    }
    let mats: Vec<Gf2Matrix> = mats
        .into_iter()
        .enumerate()
        .map(|(k, m)| m.ok_or_else(|| err(0, format!("missing block k={k}"))))
        .collect::<Result<_, _>>()?;
    Ok(ChainCochainMap::new(d, mats))
}
