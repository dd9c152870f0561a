//! Bit-exact file formats.
//!
//! Matrix text: line 1 = "d k", then d lines of d space-separated entries
//! from {-1,0,1}. Family: JSON {"params":{"d","k","l","a"},"matrices":[...]}.
//! Code file: line 1 = "n N count", one vector per line. Decomposition:
//! JSON `{"frame_size":r,"parts":[[indices]]}` referencing code-file line
//! order. Binary dump: "binary n dim" + 0/1 rows. Z4 dump: "z4 n k1 k2" +
//! digit rows.

use serde::{Deserialize, Serialize};

use crate::binary::BinaryCode;
use crate::error::Error;
use crate::matrix::{FamilyParams, MatrixFamily, WeighingMatrix};
use crate::spherical::{CrossPolytopeDecomposition, SphericalCode};
use crate::z4::Z4Code;

fn format_err(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

// declared sizes are cross-checked against the actual line count before any
// allocation, so a hostile header cannot force a huge preallocation
fn checked_count(declared: usize, lines_available: usize, what: &str) -> Result<usize, Error> {
    if declared > lines_available {
        return Err(format_err(format!(
            "{what} declares {declared} rows but only {lines_available} lines follow"
        )));
    }
    Ok(declared)
}

pub fn write_matrix(w: &WeighingMatrix) -> String {
    let mut out = format!("{} {}\n", w.order(), w.weight());
    for row in w.rows() {
        let line: Vec<String> = row.iter().map(|e| e.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn read_matrix(text: &str) -> Result<WeighingMatrix, Error> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| format_err("empty matrix file"))?;
    let mut it = header.split_whitespace();
    let d: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| format_err("matrix header must be 'd k'"))?;
    let k: u64 = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| format_err("matrix header must be 'd k'"))?;
    let d = checked_count(d, lines.clone().count(), "matrix")?;
    let mut rows = Vec::with_capacity(d);
    for _ in 0..d {
        let line = lines.next().ok_or_else(|| format_err("truncated matrix file"))?;
        let row: Vec<i64> = line
            .split_whitespace()
            .map(|t| match t {
                "-1" => Ok(-1),
                "0" => Ok(0),
                "1" => Ok(1),
                other => Err(format_err(format!("entry '{other}' is outside {{-1,0,1}}"))),
            })
            .collect::<Result<_, _>>()?;
        if row.len() != d {
            return Err(format_err(format!("row has {} entries, expected {d}", row.len())));
        }
        rows.push(row);
    }
    let w = WeighingMatrix::verify(&rows)?;
    if w.weight() != k {
        return Err(format_err(format!("declared weight {k} but verified weight {}", w.weight())));
    }
    Ok(w)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FamilyFile {
    pub params: FamilyParams,
    pub matrices: Vec<Vec<Vec<i64>>>,
}

pub fn write_family(family: &MatrixFamily) -> String {
    let file = FamilyFile {
        params: family.params,
        matrices: family.members.iter().map(|w| w.to_rows()).collect(),
    };
    serde_json::to_string_pretty(&file).expect("family serialization")
}

/// Parses and fully verifies a family file.
pub fn read_family(text: &str) -> Result<MatrixFamily, Error> {
    let file: FamilyFile =
        serde_json::from_str(text).map_err(|e| format_err(format!("family JSON: {e}")))?;
    let params = FamilyParams::new(file.params.d, file.params.k, file.params.l, file.params.a)?;
    let members = file
        .matrices
        .iter()
        .map(|rows| WeighingMatrix::verify(rows))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MatrixFamily::verify(params, members)?)
}

/// Parses without verifying; used by `verify` so the failure is reported by
/// the verifier, not the reader.
pub fn read_family_raw(text: &str) -> Result<FamilyFile, Error> {
    serde_json::from_str(text).map_err(|e| format_err(format!("family JSON: {e}")))
}

pub fn write_code(code: &SphericalCode) -> String {
    let mut out = format!("{} {} {}\n", code.dimension(), code.norm_sq(), code.len());
    for v in code.vectors() {
        let line: Vec<String> = v.iter().map(|e| e.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn read_code(text: &str) -> Result<SphericalCode, Error> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| format_err("empty code file"))?;
    let mut it = header.split_whitespace();
    let n: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| format_err("code header must be 'n N count'"))?;
    let norm: i64 = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| format_err("code header must be 'n N count'"))?;
    let count: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| format_err("code header must be 'n N count'"))?;
    let count = checked_count(count, lines.clone().count(), "code file")?;
    let mut vectors = Vec::with_capacity(count);
    for _ in 0..count {
        let line = lines.next().ok_or_else(|| format_err("truncated code file"))?;
        let v: Vec<i64> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| format_err(format!("bad coordinate '{t}'"))))
            .collect::<Result<_, _>>()?;
        if v.len() != n {
            return Err(format_err(format!("vector has {} coordinates, expected {n}", v.len())));
        }
        vectors.push(v);
    }
    let code = SphericalCode::new(vectors)?;
    if code.norm_sq() != norm {
        return Err(format_err(format!(
            "declared norm {norm} but vectors have norm {}",
            code.norm_sq()
        )));
    }
    Ok(code)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DecompositionFile {
    pub frame_size: usize,
    pub parts: Vec<Vec<usize>>,
}

pub fn write_decomposition(d: &CrossPolytopeDecomposition) -> String {
    let file = DecompositionFile { frame_size: d.frame_size, parts: d.parts.clone() };
    serde_json::to_string_pretty(&file).expect("decomposition serialization")
}

pub fn read_decomposition(text: &str) -> Result<CrossPolytopeDecomposition, Error> {
    let file: DecompositionFile =
        serde_json::from_str(text).map_err(|e| format_err(format!("decomposition JSON: {e}")))?;
    Ok(CrossPolytopeDecomposition::new(file.frame_size, file.parts))
}

pub fn write_binary_code(code: &BinaryCode) -> String {
    let mut out = format!("binary {} {}\n", code.length(), code.dimension());
    for &g in code.generators() {
        let row: String =
            (0..code.length()).map(|i| if (g >> i) & 1 == 1 { '1' } else { '0' }).collect();
        out.push_str(&row);
        out.push('\n');
    }
    out
}

pub fn write_z4_code(code: &Z4Code) -> String {
    let mut out = format!("z4 {} {} {}\n", code.length(), code.k1(), code.k2());
    for row in code.generators() {
        let line: String = row.iter().map(|&c| char::from(b'0' + c)).collect();
        out.push_str(&line);
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_round_trip_is_byte_identical() {
        let w = WeighingMatrix::verify(&[vec![1, 1], vec![1, -1]]).unwrap();
        let text = write_matrix(&w);
        assert_eq!(text, "2 2\n1 1\n1 -1\n");
        let again = write_matrix(&read_matrix(&text).unwrap());
        assert_eq!(text, again);
    }

    #[test]
    fn matrix_reader_rejects_bad_entries() {
        assert!(read_matrix("2 2\n1 2\n1 -1\n").is_err());
        assert!(read_matrix("2 1\n1 1\n1 -1\n").is_err()); // wrong declared weight
    }

    #[test]
    fn readers_reject_oversized_declared_counts() {
        assert!(read_matrix("999999999999 1\n1\n").is_err());
        assert!(read_code("2 4 999999999999\n2 0\n").is_err());
    }

    #[test]
    fn family_round_trip() {
        let params = FamilyParams::new(2, 2, 1, 4).unwrap();
        let w = WeighingMatrix::verify(&[vec![1, 1], vec![1, -1]]).unwrap();
        let fam = MatrixFamily::verify(params, vec![w]).unwrap();
        let text = write_family(&fam);
        let back = read_family(&text).unwrap();
        assert_eq!(back, fam);
        assert_eq!(write_family(&back), text);
    }

    #[test]
    fn code_round_trip() {
        let code = SphericalCode::new(vec![vec![2, 0], vec![-2, 0], vec![0, 2], vec![0, -2]])
            .unwrap();
        let text = write_code(&code);
        let back = read_code(&text).unwrap();
        assert_eq!(write_code(&back), text);
    }

    #[test]
    fn decomposition_round_trip() {
        let d = CrossPolytopeDecomposition::new(2, vec![vec![0, 1, 2, 3]]);
        let text = write_decomposition(&d);
        let back = read_decomposition(&text).unwrap();
        assert_eq!(write_decomposition(&back), text);
    }
}
