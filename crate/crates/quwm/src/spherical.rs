//! Antipodal spherical codes with cross-polytope decompositions, and the
//! lossless conversions between matrix families and codes.
//!
//! Vectors are exact integer coordinates in a canonical lexicographic order;
//! the canonical representative of an antipodal pair has its first nonzero
//! coordinate positive. Inner-product sets are accepted as subsets of the
//! admissible values by default ("lenient"); strict mode requires every
//! admissible value to be attained.

use std::collections::BTreeSet;

use crate::error::{Error, MatrixError, SphericalError};
use crate::matrix::{exact_sqrt, FamilyParams, MatrixFamily, WeighingMatrix};
use crate::search::{ClassGraph, DEFAULT_NODE_BUDGET};

/// A finite set of integer vectors of one common squared norm, sorted
/// lexicographically, duplicates rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphericalCode {
    dimension: usize,
    norm_sq: i64,
    vectors: Vec<Vec<i64>>,
    antipodal: bool,
}

impl SphericalCode {
    pub fn new(mut vectors: Vec<Vec<i64>>) -> Result<Self, SphericalError> {
        if vectors.is_empty() {
            return Err(SphericalError::Empty);
        }
        let dimension = vectors[0].len();
        let norm_sq: i64 = vectors[0].iter().map(|x| x * x).sum();
        for (index, v) in vectors.iter().enumerate() {
            let n: i64 = v.iter().map(|x| x * x).sum();
            if v.len() != dimension || n != norm_sq {
                return Err(SphericalError::NormMismatch { index, found: n, expected: norm_sq });
            }
        }
        vectors.sort();
        for index in 1..vectors.len() {
            if vectors[index] == vectors[index - 1] {
                return Err(SphericalError::DuplicateVector { index });
            }
        }
        let antipodal = vectors.iter().all(|v| {
            let neg: Vec<i64> = v.iter().map(|x| -x).collect();
            vectors.binary_search(&neg).is_ok()
        });
        Ok(SphericalCode { dimension, norm_sq, vectors, antipodal })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn norm_sq(&self) -> i64 {
        self.norm_sq
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn is_antipodal(&self) -> bool {
        self.antipodal
    }

    pub fn vectors(&self) -> &[Vec<i64>] {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> &[i64] {
        &self.vectors[i]
    }

    pub fn index_of(&self, v: &[i64]) -> Option<usize> {
        self.vectors.binary_search_by(|probe| probe.as_slice().cmp(v)).ok()
    }

    pub fn inner(&self, i: usize, j: usize) -> i64 {
        self.vectors[i].iter().zip(&self.vectors[j]).map(|(a, b)| a * b).sum()
    }

    /// Antipodal classes as (representative index, negated index) pairs, in
    /// lexicographic order of the representative.
    pub fn antipodal_classes(&self) -> Result<Vec<(usize, usize)>, SphericalError> {
        let mut classes = Vec::with_capacity(self.len() / 2);
        for (i, v) in self.vectors.iter().enumerate() {
            if !is_canonical(v) {
                continue;
            }
            let neg: Vec<i64> = v.iter().map(|x| -x).collect();
            match self.index_of(&neg) {
                Some(j) => classes.push((i, j)),
                None => return Err(SphericalError::NotAntipodal { index: i }),
            }
        }
        if classes.len() * 2 != self.len() {
            // some vector has no canonical representative pair (e.g. zero)
            let index = self
                .vectors
                .iter()
                .position(|v| {
                    let neg: Vec<i64> = v.iter().map(|x| -x).collect();
                    self.index_of(&neg).is_none()
                })
                .unwrap_or(0);
            return Err(SphericalError::NotAntipodal { index });
        }
        Ok(classes)
    }
}

/// First nonzero coordinate positive.
pub fn is_canonical(v: &[i64]) -> bool {
    v.iter().find(|&&x| x != 0).map(|&x| x > 0).unwrap_or(true)
}

pub fn canonicalize(v: &[i64]) -> Vec<i64> {
    if is_canonical(v) {
        v.to_vec()
    } else {
        v.iter().map(|x| -x).collect()
    }
}

/// The exact set of inner products over unordered distinct pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InnerProductSet {
    pub values: BTreeSet<i64>,
}

pub fn inner_product_set(code: &SphericalCode) -> InnerProductSet {
    let mut values = BTreeSet::new();
    for i in 0..code.len() {
        for j in i + 1..code.len() {
            values.insert(code.inner(i, j));
        }
    }
    InnerProductSet { values }
}

/// A partition of a code's vectors into cross polytopes: each part consists
/// of `frame_size` antipodal pairs that are pairwise orthogonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossPolytopeDecomposition {
    pub frame_size: usize,
    pub parts: Vec<Vec<usize>>,
}

impl CrossPolytopeDecomposition {
    pub fn new(frame_size: usize, parts: Vec<Vec<usize>>) -> Self {
        CrossPolytopeDecomposition { frame_size, parts }
    }

    /// Checks the structural invariants against a code: parts disjointly
    /// cover all vectors, and every part is r antipodal pairs with Gram
    /// matrix N·I on its canonical representatives.
    pub fn validate(&self, code: &SphericalCode) -> Result<(), SphericalError> {
        let r = self.frame_size;
        let mut seen = vec![false; code.len()];
        let mut covered = 0usize;
        for (p, part) in self.parts.iter().enumerate() {
            if part.len() != 2 * r {
                return Err(SphericalError::BadDecomposition(format!(
                    "part {p} has {} vectors, expected {}",
                    part.len(),
                    2 * r
                )));
            }
            for &i in part {
                if i >= code.len() || seen[i] {
                    return Err(SphericalError::BadDecomposition(format!(
                        "part {p} reuses or exceeds vector index {i}"
                    )));
                }
                seen[i] = true;
                covered += 1;
            }
            let reps: Vec<usize> =
                part.iter().copied().filter(|&i| is_canonical(code.vector(i))).collect();
            if reps.len() != r {
                return Err(SphericalError::BadDecomposition(format!(
                    "part {p} is not a union of antipodal pairs"
                )));
            }
            for &i in &reps {
                let neg: Vec<i64> = code.vector(i).iter().map(|x| -x).collect();
                let j = code.index_of(&neg).ok_or(SphericalError::NotAntipodal { index: i })?;
                if !part.contains(&j) {
                    return Err(SphericalError::BadDecomposition(format!(
                        "part {p} lacks the antipode of vector {i}"
                    )));
                }
            }
            for a in 0..reps.len() {
                for b in a + 1..reps.len() {
                    let ip = code.inner(reps[a], reps[b]);
                    if ip != 0 {
                        return Err(SphericalError::BadDecomposition(format!(
                            "part {p}: representatives {} and {} have inner product {ip}",
                            reps[a], reps[b]
                        )));
                    }
                }
            }
        }
        if covered != code.len() {
            return Err(SphericalError::BadDecomposition(format!(
                "parts cover {covered} of {} vectors",
                code.len()
            )));
        }
        Ok(())
    }
}

/// Finds a cross-polytope decomposition with frames of `frame_size`
/// antipodal classes by exact-cover search over the orthogonality graph.
/// Deterministic: the lexicographically first decomposition is returned.
pub fn find_decomposition(
    code: &SphericalCode,
    frame_size: usize,
    budget: u64,
) -> Result<CrossPolytopeDecomposition, SphericalError> {
    let classes = code.antipodal_classes()?;
    if !code.len().is_multiple_of(2 * frame_size) {
        return Err(SphericalError::NoDecomposition { frame_size, nodes: 0 });
    }
    let reps: Vec<Vec<i64>> = classes.iter().map(|&(i, _)| code.vector(i).to_vec()).collect();
    let graph = ClassGraph::new(&reps, frame_size);
    let outcome = graph
        .partition_frames(budget)
        .map_err(|b| SphericalError::BudgetExceeded { budget: b.budget, nodes: b.nodes })?;
    let nodes = outcome.nodes;
    match outcome.parts {
        Some(class_parts) => {
            let parts = class_parts
                .into_iter()
                .map(|cp| {
                    let mut idx: Vec<usize> =
                        cp.iter().flat_map(|&c| [classes[c].0, classes[c].1]).collect();
                    idx.sort_unstable();
                    idx
                })
                .collect();
            Ok(CrossPolytopeDecomposition::new(frame_size, parts))
        }
        None => Err(SphericalError::NoDecomposition { frame_size, nodes }),
    }
}

/// Convenience wrapper with the default node budget.
pub fn find_decomposition_default(
    code: &SphericalCode,
    frame_size: usize,
) -> Result<CrossPolytopeDecomposition, SphericalError> {
    find_decomposition(code, frame_size, DEFAULT_NODE_BUDGET)
}

/// The code of a family: union of the rows and negated rows of all members,
/// with one decomposition part per member.
pub fn family_to_code(
    family: &MatrixFamily,
) -> Result<(SphericalCode, CrossPolytopeDecomposition), SphericalError> {
    let mut vectors: Vec<Vec<i64>> = Vec::new();
    let mut member_rows: Vec<Vec<Vec<i64>>> = Vec::new();
    for w in &family.members {
        let mut rows = Vec::with_capacity(2 * w.order());
        for row in w.rows() {
            rows.push(row.to_vec());
            rows.push(row.iter().map(|x| -x).collect());
        }
        vectors.extend(rows.iter().cloned());
        member_rows.push(rows);
    }
    let code = SphericalCode::new(vectors)?;
    let parts = member_rows
        .iter()
        .map(|rows| {
            let mut idx: Vec<usize> =
                rows.iter().map(|r| code.index_of(r).expect("row present")).collect();
            idx.sort_unstable();
            idx
        })
        .collect();
    let d = family.params.d as usize;
    let decomp = CrossPolytopeDecomposition::new(d, parts);
    Ok((code, decomp))
}

fn measure_scale(
    code: &SphericalCode,
    allowed_extra: i64,
    strict: bool,
) -> Result<Option<i64>, SphericalError> {
    let ips = inner_product_set(code);
    let mut magnitudes: BTreeSet<i64> = BTreeSet::new();
    for &v in &ips.values {
        if v != 0 && v != allowed_extra {
            magnitudes.insert(v.abs());
        }
    }
    if magnitudes.len() > 1 {
        let value = *magnitudes.iter().last().unwrap();
        return Err(SphericalError::BadInnerProducts {
            value,
            expected: format!("{{±s, 0, {allowed_extra}}} for a single s"),
        });
    }
    let s = magnitudes.into_iter().next();
    if strict {
        if let Some(s) = s {
            let required: BTreeSet<i64> = [s, -s, 0, allowed_extra].into_iter().collect();
            if ips.values != required {
                let missing = required.difference(&ips.values).next().copied().unwrap_or(0);
                return Err(SphericalError::BadInnerProducts {
                    value: missing,
                    expected: format!("strict mode: every value of {required:?} must be attained"),
                });
            }
        } else {
            return Err(SphericalError::BadInnerProducts {
                value: 0,
                expected: "strict mode: ±s values must be attained".into(),
            });
        }
    }
    Ok(s)
}

/// One weighing matrix per part: rows are the canonical representatives of
/// each antipodal pair. Requires entries in {−1,0,+1} and inner products in
/// {±√a, 0, −k}; the result passes family verification for (d, k, k²/a, a).
pub fn code_to_family(
    code: &SphericalCode,
    decomp: &CrossPolytopeDecomposition,
    a: u64,
    strict: bool,
) -> Result<MatrixFamily, Error> {
    for (index, v) in code.vectors().iter().enumerate() {
        if v.iter().any(|&x| !(-1..=1).contains(&x)) {
            return Err(SphericalError::BadAlphabet { index }.into());
        }
    }
    decomp.validate(code).map_err(Error::from)?;
    if decomp.frame_size != code.dimension() {
        return Err(SphericalError::BadDecomposition(format!(
            "matrix extraction needs frame size {} equal to ambient dimension {}",
            decomp.frame_size,
            code.dimension()
        ))
        .into());
    }
    let k = code.norm_sq() as u64;
    let s_expected = exact_sqrt(a).ok_or(MatrixError::NonSquareScale { a })? as i64;
    let s = measure_scale(code, -(k as i64), strict)?;
    if let Some(s) = s {
        if s != s_expected {
            return Err(SphericalError::BadInnerProducts {
                value: s,
                expected: format!("±{s_expected} (= ±sqrt(a))"),
            }
            .into());
        }
    }
    if a > k * k || !(k * k).is_multiple_of(a) {
        return Err(MatrixError::BadParams(format!("a = {a} does not divide k^2 = {}", k * k)).into());
    }
    let d = code.dimension() as u64;
    let params = FamilyParams::new(d, k, k * k / a, a)?;
    let members = decomp
        .parts
        .iter()
        .map(|part| {
            let mut rows: Vec<Vec<i64>> = part
                .iter()
                .filter(|&&i| is_canonical(code.vector(i)))
                .map(|&i| code.vector(i).to_vec())
                .collect();
            rows.sort();
            WeighingMatrix::verify(&rows)
        })
        .collect::<Result<Vec<_>, _>>()?;
    MatrixFamily::verify(params, members).map_err(Error::from)
}

/// Re-expresses every non-reference vector in the coordinates of the first
/// frame (X_0) and emits one matrix per remaining part: a MUWM family of
/// weight k = N²/s², where N is the squared norm and ±s the cross-frame
/// inner products. Entries are exact integer quotients ⟨x, v_j⟩ / s.
///
/// Vectors may live in an ambient dimension larger than the frame rank
/// (e.g. E7 roots in 8 coordinates); the output order is the rank.
pub fn muwm_code_conversion(
    code: &SphericalCode,
    decomp: &CrossPolytopeDecomposition,
    strict: bool,
) -> Result<MatrixFamily, Error> {
    decomp.validate(code).map_err(Error::from)?;
    if decomp.parts.is_empty() {
        return Err(SphericalError::WrongPartCount { found: 0, expected: 1 }.into());
    }
    let d = decomp.frame_size as u64;
    let n = code.norm_sq();
    if decomp.parts.len() == 1 {
        // nothing besides the reference frame: empty family
        let k = n as u64;
        let params = FamilyParams::unbiased(d, k)?;
        return Ok(MatrixFamily { params, members: Vec::new() });
    }
    let s = measure_scale(code, -n, strict)?.ok_or_else(|| SphericalError::BadInnerProducts {
        value: 0,
        expected: "some nonzero cross-frame inner product".into(),
    })?;
    if (n * n) % (s * s) != 0 {
        return Err(SphericalError::BadInnerProducts {
            value: s,
            expected: format!("s² dividing N² = {}", n * n),
        }
        .into());
    }
    let k = ((n * n) / (s * s)) as u64;
    let params = FamilyParams::unbiased(d, k)?;
    // v_j ordered so that a scaled identity frame {±s·e_i} maps to the
    // identity coordinate map (descending lex puts s·e_1 first)
    let mut reference: Vec<Vec<i64>> = decomp.parts[0]
        .iter()
        .filter(|&&i| is_canonical(code.vector(i)))
        .map(|&i| code.vector(i).to_vec())
        .collect();
    reference.sort_by(|a, b| b.cmp(a));
    let mut members = Vec::with_capacity(decomp.parts.len() - 1);
    for part in &decomp.parts[1..] {
        let mut rows: Vec<Vec<i64>> = Vec::with_capacity(decomp.frame_size);
        for &i in part.iter().filter(|&&i| is_canonical(code.vector(i))) {
            let x = code.vector(i);
            let mut coords = Vec::with_capacity(reference.len());
            for (j, v) in reference.iter().enumerate() {
                let ip: i64 = x.iter().zip(v).map(|(a, b)| a * b).sum();
                if ip % s != 0 {
                    return Err(SphericalError::InexactFrameCoordinates { value: ip, j, s }.into());
                }
                coords.push(ip / s);
            }
            rows.push(canonicalize(&coords));
        }
        rows.sort();
        members.push(WeighingMatrix::verify(&rows)?);
    }
    MatrixFamily::verify(params, members).map_err(Error::from)
}

/// Inverse of `muwm_code_conversion`: the family's code with the scaled
/// identity frame {±√k·e_i} adjoined as X_0.
pub fn muwm_family_to_code(
    family: &MatrixFamily,
) -> Result<(SphericalCode, CrossPolytopeDecomposition), Error> {
    if !family.params.is_unbiased() {
        return Err(MatrixError::NotMuwmParams { a: family.params.a, k: family.params.k }.into());
    }
    let s = exact_sqrt(family.params.k)
        .ok_or(MatrixError::BadParams(format!("weight {} is not a perfect square", family.params.k)))?
        as i64;
    let d = family.params.d as usize;
    let mut vectors: Vec<Vec<i64>> = Vec::new();
    let mut frame0: Vec<Vec<i64>> = Vec::new();
    for i in 0..d {
        let mut v = vec![0i64; d];
        v[i] = s;
        frame0.push(v.clone());
        vectors.push(v.clone());
        vectors.push(v.iter().map(|x| -x).collect());
        frame0.push(vectors.last().unwrap().clone());
    }
    let mut member_rows: Vec<Vec<Vec<i64>>> = Vec::new();
    for w in &family.members {
        let mut rows = Vec::with_capacity(2 * d);
        for row in w.rows() {
            rows.push(row.to_vec());
            rows.push(row.iter().map(|x| -x).collect());
        }
        vectors.extend(rows.iter().cloned());
        member_rows.push(rows);
    }
    let code = SphericalCode::new(vectors)?;
    let mut parts = Vec::with_capacity(1 + member_rows.len());
    let mut p0: Vec<usize> =
        frame0.iter().map(|v| code.index_of(v).expect("frame vector present")).collect();
    p0.sort_unstable();
    parts.push(p0);
    for rows in &member_rows {
        let mut idx: Vec<usize> =
            rows.iter().map(|r| code.index_of(r).expect("row present")).collect();
        idx.sort_unstable();
        parts.push(idx);
    }
    Ok((code, CrossPolytopeDecomposition::new(d, parts)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scaled_cross_polytope(d: usize, s: i64) -> SphericalCode {
        let mut vectors = Vec::new();
        for i in 0..d {
            let mut v = vec![0i64; d];
            v[i] = s;
            vectors.push(v.clone());
            v[i] = -s;
            vectors.push(v);
        }
        SphericalCode::new(vectors).unwrap()
    }

    #[test]
    fn cross_polytope_inner_products() {
        let code = scaled_cross_polytope(6, 2);
        let ips = inner_product_set(&code);
        assert_eq!(ips.values, BTreeSet::from([0, -4]));
        assert!(code.is_antipodal());
    }

    #[test]
    fn duplicates_rejected() {
        let err = SphericalCode::new(vec![vec![1, 0], vec![1, 0]]).unwrap_err();
        assert!(matches!(err, SphericalError::DuplicateVector { .. }));
    }

    #[test]
    fn norm_mismatch_rejected() {
        let err = SphericalCode::new(vec![vec![1, 0], vec![1, 1]]).unwrap_err();
        assert!(matches!(err, SphericalError::NormMismatch { .. }));
    }

    #[test]
    fn single_cross_polytope_decomposes_into_one_part() {
        let code = scaled_cross_polytope(5, 2);
        let decomp = find_decomposition_default(&code, 5).unwrap();
        assert_eq!(decomp.parts.len(), 1);
        decomp.validate(&code).unwrap();
    }

    #[test]
    fn non_antipodal_code_rejected() {
        let code = SphericalCode::new(vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert!(matches!(
            find_decomposition_default(&code, 2),
            Err(SphericalError::NotAntipodal { .. })
        ));
    }

    #[test]
    fn family_round_trip_on_identity() {
        let params = FamilyParams::new(3, 1, 1, 1).unwrap();
        let family =
            MatrixFamily::verify(params, vec![WeighingMatrix::identity(3)]).unwrap();
        let (code, decomp) = family_to_code(&family).unwrap();
        assert_eq!(code.len(), 6);
        decomp.validate(&code).unwrap();
        let back = code_to_family(&code, &decomp, 1, false).unwrap();
        assert_eq!(back.params, params);
        // rows come back canonicalized: lex-sorted with leading sign positive
        let mut expected = WeighingMatrix::identity(3).to_rows();
        expected.sort();
        assert_eq!(back.members[0].to_rows(), expected);
    }

    #[test]
    fn conversion_with_lone_reference_frame_is_empty() {
        let code = scaled_cross_polytope(5, 2);
        let decomp = find_decomposition_default(&code, 5).unwrap();
        let family = muwm_code_conversion(&code, &decomp, false).unwrap();
        assert_eq!(family.size(), 0);
        assert_eq!(family.params.d, 5);
    }

    #[test]
    fn canonical_representative_sign() {
        assert!(is_canonical(&[0, 2, -1]));
        assert!(!is_canonical(&[-1, 2, 0]));
        assert_eq!(canonicalize(&[-1, 2, 0]), vec![1, -2, 0]);
    }
}
