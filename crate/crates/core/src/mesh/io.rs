//! ASCII OFF / OBJ meshes and per-vertex CSV fields.

use std::fmt::Write as _;
use std::path::Path;

use super::{Point, ScalarField, TriangulatedSurface};
use crate::error::{io_error, Error, Result};
use crate::util::write_atomic;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFormat {
    Off,
    Obj,
}

impl MeshFormat {
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "off" => Some(Self::Off),
            "obj" => Some(Self::Obj),
            _ => None,
        }
    }
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

/// Loads an OFF or OBJ file (by extension) and validates it.
pub fn load_mesh(path: &Path) -> Result<TriangulatedSurface> {
    let format = MeshFormat::from_path(path)
        .ok_or_else(|| parse_err(path, 0, "unknown mesh extension (expected .off or .obj)"))?;
    let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    let (vertices, faces) = match format {
        MeshFormat::Off => parse_off(path, &text)?,
        MeshFormat::Obj => parse_obj(path, &text)?,
    };
    TriangulatedSurface::new(vertices, faces)
}

fn parse_off(path: &Path, text: &str) -> Result<(Vec<Point>, Vec<[usize; 3]>)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (ln, header) = lines.next().ok_or_else(|| parse_err(path, 1, "empty file"))?;
    let mut counts_line = None;
    if header != "OFF" {
        if let Some(rest) = header.strip_prefix("OFF") {
            counts_line = Some((ln, rest.trim()));
        } else {
            return Err(parse_err(path, ln, format!("expected OFF header, found {header:?}")));
        }
    }
    let (ln, counts) = match counts_line {
        Some(c) => c,
        None => lines
            .next()
            .ok_or_else(|| parse_err(path, ln + 1, "missing element counts"))?,
    };
    let nums: Vec<usize> = counts
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| parse_err(path, ln, format!("bad element counts: {e}")))?;
    if nums.len() < 2 {
        return Err(parse_err(path, ln, "expected vertex and face counts"));
    }
    let (nv, nf) = (nums[0], nums[1]);
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (ln, l) = lines
            .next()
            .ok_or_else(|| parse_err(path, ln, "unexpected end of file in vertex list"))?;
        let xs: Vec<f64> = l
            .split_whitespace()
            .take(3)
            .map(|t| t.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| parse_err(path, ln, format!("bad coordinate: {e}")))?;
        if xs.len() != 3 {
            return Err(parse_err(path, ln, "vertex needs three coordinates"));
        }
        vertices.push(Point::new(xs[0], xs[1], xs[2]));
    }
    let mut faces = Vec::with_capacity(nf);
    for _ in 0..nf {
        let (ln, l) = lines
            .next()
            .ok_or_else(|| parse_err(path, ln, "unexpected end of file in face list"))?;
        let xs: Vec<usize> = l
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| parse_err(path, ln, format!("bad face index: {e}")))?;
        if xs.first() != Some(&3) || xs.len() < 4 {
            return Err(parse_err(path, ln, "only triangular faces are supported"));
        }
        if xs[1..4].iter().any(|&i| i >= nv) {
            return Err(parse_err(
                path,
                ln,
                format!("face index out of range (have {nv} vertices)"),
            ));
        }
        faces.push([xs[1], xs[2], xs[3]]);
    }
    Ok((vertices, faces))
}

fn parse_obj(path: &Path, text: &str) -> Result<(Vec<Point>, Vec<[usize; 3]>)> {
    let mut vertices = Vec::new();
    let mut faces = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        let mut toks = line.split_whitespace();
        match toks.next() {
            Some("v") => {
                let xs: Vec<f64> = toks
                    .take(3)
                    .map(|t| t.parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| parse_err(path, ln, format!("bad coordinate: {e}")))?;
                if xs.len() != 3 {
                    return Err(parse_err(path, ln, "vertex needs three coordinates"));
                }
                vertices.push(Point::new(xs[0], xs[1], xs[2]));
            }
            Some("f") => {
                let idx: Vec<usize> = toks
                    .map(|t| {
                        let first = t.split('/').next().unwrap_or("");
                        let k: i64 = first
                            .parse()
                            .map_err(|e| parse_err(path, ln, format!("bad face index {t:?}: {e}")))?;
                        let resolved = if k > 0 { k - 1 } else { vertices.len() as i64 + k };
                        if resolved < 0 || resolved as usize >= vertices.len() {
                            return Err(parse_err(path, ln, format!("face index {k} out of range")));
                        }
                        Ok(resolved as usize)
                    })
                    .collect::<Result<_>>()?;
                if idx.len() != 3 {
                    return Err(parse_err(path, ln, "only triangular faces are supported"));
                }
                faces.push([idx[0], idx[1], idx[2]]);
            }
            _ => {}
        }
    }
    Ok((vertices, faces))
}

/// Writes the mesh as OFF or OBJ (by extension). Coordinates use the shortest
/// round-trip representation, so OFF output reloads bit-identically.
pub fn save_mesh(surface: &TriangulatedSurface, path: &Path) -> Result<()> {
    let format = MeshFormat::from_path(path)
        .ok_or_else(|| parse_err(path, 0, "unknown mesh extension (expected .off or .obj)"))?;
    write_atomic(path, mesh_to_string(surface, format).as_bytes())
}

pub fn mesh_to_string(surface: &TriangulatedSurface, format: MeshFormat) -> String {
    let mut out = String::new();
    match format {
        MeshFormat::Off => {
            out.push_str("OFF\n");
            let _ = writeln!(out, "{} {} 0", surface.vertex_count(), surface.face_count());
            for p in surface.vertices() {
                let _ = writeln!(out, "{:?} {:?} {:?}", p.x, p.y, p.z);
            }
            for f in surface.faces() {
                let _ = writeln!(out, "3 {} {} {}", f[0], f[1], f[2]);
            }
        }
        MeshFormat::Obj => {
            for p in surface.vertices() {
                let _ = writeln!(out, "v {:?} {:?} {:?}", p.x, p.y, p.z);
            }
            for f in surface.faces() {
                let _ = writeln!(out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1);
            }
        }
    }
    out
}

/// Writes `vertex_id,value` rows with a header.
pub fn save_field_csv(field: &ScalarField, path: &Path) -> Result<()> {
    let mut out = String::from("vertex_id,value\n");
    for (i, v) in field.values().iter().enumerate() {
        let _ = writeln!(out, "{i},{v:?}");
    }
    write_atomic(path, out.as_bytes())
}

/// Reads a field written by [`save_field_csv`]; every vertex must appear once.
pub fn load_field_csv(path: &Path, vertex_count: usize) -> Result<ScalarField> {
    let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    let mut values = vec![None; vertex_count];
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.trim();
        if line.is_empty() || (i == 0 && line.starts_with("vertex_id")) {
            continue;
        }
        let mut cols = line.split(',');
        let (Some(id), Some(val), None) = (cols.next(), cols.next(), cols.next()) else {
            return Err(parse_err(path, ln, "expected two columns vertex_id,value"));
        };
        let id: usize = id
            .trim()
            .parse()
            .map_err(|e| parse_err(path, ln, format!("bad vertex id: {e}")))?;
        let val: f64 = val
            .trim()
            .parse()
            .map_err(|e| parse_err(path, ln, format!("bad value: {e}")))?;
        if id >= vertex_count {
            return Err(parse_err(path, ln, format!("vertex id {id} out of range")));
        }
        if !val.is_finite() {
            return Err(parse_err(path, ln, "field values must be finite"));
        }
        if values[id].replace(val).is_some() {
            return Err(parse_err(path, ln, format!("vertex id {id} repeated")));
        }
    }
    let values: Option<Vec<f64>> = values.into_iter().collect();
    values
        .map(ScalarField)
        .ok_or_else(|| parse_err(path, 0, "field does not cover every vertex"))
}
