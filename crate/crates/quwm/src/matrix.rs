//! Exact-integer weighing-matrix algebra: verification, (quasi-)unbiasedness
//! predicates, family validation, and derivation of unbiased families.
//!
//! All arithmetic is exact integer; the scale factors sqrt(a) and sqrt(k)
//! never materialize. Predicates work with squared entries instead.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::MatrixError;

/// Returns `Some(sqrt(n))` when `n` is a perfect square.
pub fn exact_sqrt(n: u64) -> Option<u64> {
    let r = (n as f64).sqrt().round() as u64;
    (r.saturating_sub(1)..=r + 1).find(|&c| c * c == n)
}

/// A square (±1,0)-matrix W of order d with W·Wᵀ = k·I.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeighingMatrix {
    order: usize,
    weight: u64,
    entries: Vec<i64>, // row-major, length order²
}

impl WeighingMatrix {
    /// Validates a square integer matrix and infers its weight.
    ///
    /// Checks the alphabet, computes M·Mᵀ exactly, and requires it to equal
    /// k·I where k is the common diagonal value. Mᵀ·M = k·I and the per-row /
    /// per-column nonzero counts are checked independently.
    pub fn verify(rows: &[Vec<i64>]) -> Result<Self, MatrixError> {
        let d = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != d {
                return Err(MatrixError::NotSquare { rows: d, cols: row.len() });
            }
            for (j, &v) in row.iter().enumerate() {
                if !(-1..=1).contains(&v) {
                    return Err(MatrixError::BadEntry { row: i, col: j, value: v });
                }
            }
        }
        if d == 0 {
            return Err(MatrixError::NotSquare { rows: 0, cols: 0 });
        }
        let k = rows[0].iter().map(|&v| v * v).sum::<i64>();
        for i in 0..d {
            for j in i..d {
                let p: i64 = (0..d).map(|t| rows[i][t] * rows[j][t]).sum();
                if i == j {
                    if p != k {
                        return Err(MatrixError::UnequalDiagonal { row: i, found: p, expected: k });
                    }
                } else if p != 0 {
                    return Err(MatrixError::NonDiagonalProduct { row: i, col: j, value: p });
                }
            }
        }
        // column check: Wᵀ·W = k·I follows for square W, verified anyway
        for i in 0..d {
            for j in i..d {
                let p: i64 = (0..d).map(|t| rows[t][i] * rows[t][j]).sum();
                if i == j {
                    if p != k {
                        return Err(MatrixError::UnequalDiagonal { row: i, found: p, expected: k });
                    }
                } else if p != 0 {
                    return Err(MatrixError::NonDiagonalProduct { row: i, col: j, value: p });
                }
            }
        }
        if k < 1 || k as usize > d {
            return Err(MatrixError::BadParams(format!("weight {k} out of range 1..={d}")));
        }
        Ok(WeighingMatrix {
            order: d,
            weight: k as u64,
            entries: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn identity(d: usize) -> Self {
        let mut entries = vec![0; d * d];
        for i in 0..d {
            entries[i * d + i] = 1;
        }
        WeighingMatrix { order: d, weight: 1, entries }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn weight(&self) -> u64 {
        self.weight
    }

    pub fn entry(&self, row: usize, col: usize) -> i64 {
        self.entries[row * self.order + col]
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.entries[i * self.order..(i + 1) * self.order]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[i64]> {
        self.entries.chunks(self.order)
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        self.rows().map(|r| r.to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let d = self.order;
        let mut entries = vec![0; d * d];
        for i in 0..d {
            for j in 0..d {
                entries[j * d + i] = self.entries[i * d + j];
            }
        }
        WeighingMatrix { order: d, weight: self.weight, entries }
    }

    /// W1·W2ᵀ as raw rows (not necessarily a weighing matrix).
    pub fn product_transpose(&self, other: &Self) -> Result<Vec<Vec<i64>>, MatrixError> {
        if self.order != other.order {
            return Err(MatrixError::DimensionMismatch { left: self.order, right: other.order });
        }
        let d = self.order;
        let out = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| (0..d).map(|t| self.entry(i, t) * other.entry(j, t)).sum())
                    .collect()
            })
            .collect();
        Ok(out)
    }
}

/// Parameters (d, k, l, a) of a quasi-unbiased family: l·a = k², a a perfect
/// square, and k, l ≤ d.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilyParams {
    pub d: u64,
    pub k: u64,
    pub l: u64,
    pub a: u64,
}

impl FamilyParams {
    pub fn new(d: u64, k: u64, l: u64, a: u64) -> Result<Self, MatrixError> {
        if d == 0 || k == 0 || l == 0 || a == 0 {
            return Err(MatrixError::BadParams("parameters must be positive".into()));
        }
        if l * a != k * k {
            return Err(MatrixError::BadParams(format!("l*a = {} but k^2 = {}", l * a, k * k)));
        }
        if exact_sqrt(a).is_none() {
            return Err(MatrixError::BadParams(format!("a = {a} is not a perfect square")));
        }
        if k > d || l > d {
            return Err(MatrixError::BadParams(format!(
                "weights k = {k}, l = {l} must not exceed the order d = {d}"
            )));
        }
        Ok(FamilyParams { d, k, l, a })
    }

    /// MUWM parameters (d, k, k, k).
    pub fn unbiased(d: u64, k: u64) -> Result<Self, MatrixError> {
        Self::new(d, k, k, k)
    }

    pub fn is_unbiased(&self) -> bool {
        self.a == self.k && self.l == self.k
    }

    pub fn scale_root(&self) -> u64 {
        exact_sqrt(self.a).expect("validated at construction")
    }
}

/// True iff every entry e of W1·W2ᵀ satisfies e² ∈ {0, a}.
///
/// No further product-orthogonality check is needed: for two weighing
/// matrices of equal order and weight k, (W1·W2ᵀ)(W1·W2ᵀ)ᵀ = k²·I holds
/// identically (it equals W1·(W2ᵀW2)·W1ᵀ = k·W1·W1ᵀ). Debug builds recompute
/// the identity as a self-check.
pub fn quasi_unbiased_check(
    w1: &WeighingMatrix,
    w2: &WeighingMatrix,
    a: u64,
) -> Result<bool, MatrixError> {
    if w1.weight() != w2.weight() {
        return Err(MatrixError::BadParams(format!(
            "quasi-unbiasedness needs equal weights, got {} and {}",
            w1.weight(),
            w2.weight()
        )));
    }
    let prod = w1.product_transpose(w2)?;
    let mut any_nonzero = false;
    for row in &prod {
        for &e in row {
            if e != 0 {
                any_nonzero = true;
                if (e * e) as u64 != a {
                    return Ok(false);
                }
            }
        }
    }
    if any_nonzero && exact_sqrt(a).is_none() {
        return Err(MatrixError::NonSquareScale { a });
    }
    #[cfg(debug_assertions)]
    {
        let d = prod.len();
        let k = w1.weight() as i64;
        for i in 0..d {
            for j in 0..d {
                let p: i64 = (0..d).map(|t| prod[i][t] * prod[j][t]).sum();
                let expect = if i == j { k * k } else { 0 };
                debug_assert_eq!(p, expect, "(W1 W2^T)(W1 W2^T)^T != k^2 I at ({i},{j})");
            }
        }
    }
    Ok(true)
}

/// An ordered family of weighing matrices, pairwise quasi-unbiased for its
/// parameters. Families of size 0 or 1 are trivially valid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixFamily {
    pub params: FamilyParams,
    pub members: Vec<WeighingMatrix>,
}

impl MatrixFamily {
    /// Full verification: every member a valid W(d,k), every pair
    /// quasi-unbiased at scale a. Pair checks run in parallel; the reported
    /// failure is deterministic (least pair index).
    pub fn verify(params: FamilyParams, members: Vec<WeighingMatrix>) -> Result<Self, MatrixError> {
        for (index, w) in members.iter().enumerate() {
            let revalidated = WeighingMatrix::verify(&w.to_rows())
                .map_err(|e| MatrixError::Member { index, source: Box::new(e) })?;
            if revalidated.order() as u64 != params.d || revalidated.weight() != params.k {
                return Err(MatrixError::Member {
                    index,
                    source: Box::new(MatrixError::BadParams(format!(
                        "member is W({},{}) but family parameters need W({},{})",
                        revalidated.order(),
                        revalidated.weight(),
                        params.d,
                        params.k
                    ))),
                });
            }
        }
        if members.len() >= 2 {
            // nonzero product entries are ±sqrt(a): a must be a perfect square
            if exact_sqrt(params.a).is_none() {
                return Err(MatrixError::NonSquareScale { a: params.a });
            }
            if params.is_unbiased() && exact_sqrt(params.k).is_none() {
                return Err(MatrixError::BadParams(format!(
                    "unbiased family with f >= 2 needs square weight, got k = {}",
                    params.k
                )));
            }
            let pairs: Vec<(usize, usize)> = (0..members.len())
                .flat_map(|i| (i + 1..members.len()).map(move |j| (i, j)))
                .collect();
            let failure = pairs
                .par_iter()
                .filter_map(|&(i, j)| {
                    match quasi_unbiased_check(&members[i], &members[j], params.a) {
                        Ok(true) => None,
                        Ok(false) => {
                            let prod = members[i].product_transpose(&members[j]).unwrap();
                            let bad = prod
                                .iter()
                                .flatten()
                                .find(|&&e| e != 0 && (e * e) as u64 != params.a)
                                .copied()
                                .unwrap_or(0);
                            Some(((i, j), MatrixError::NotQuasiUnbiased { i, j, value: bad, a: params.a }))
                        }
                        Err(e) => Some(((i, j), e)),
                    }
                })
                .min_by_key(|(pair, _)| *pair);
            if let Some((_, err)) = failure {
                return Err(err);
            }
        }
        Ok(MatrixFamily { params, members })
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// From MQUWM {W_1,…,W_f} for (d,k,l,a), the matrices (1/√a)·W_i·W_1ᵀ
/// for i = 2..f form MUWM of weight l.
///
/// Division by √a is exact on every entry; a remainder signals a corrupted
/// input family.
pub fn derive_muwm(family: &MatrixFamily) -> Result<MatrixFamily, MatrixError> {
    if family.size() < 2 {
        return Err(MatrixError::TooFewMembers { f: family.size() });
    }
    let s = family.params.scale_root() as i64;
    let first = &family.members[0];
    let mut derived = Vec::with_capacity(family.size() - 1);
    for (i, w) in family.members.iter().enumerate().skip(1) {
        let prod = w.product_transpose(first)?;
        let mut rows = Vec::with_capacity(prod.len());
        for r in prod {
            let mut row = Vec::with_capacity(r.len());
            for e in r {
                if e % s != 0 {
                    return Err(MatrixError::InexactDivision { i, value: e, s });
                }
                row.push(e / s);
            }
            rows.push(row);
        }
        derived.push(WeighingMatrix::verify(&rows)?);
    }
    let params = FamilyParams::unbiased(family.params.d, family.params.l)?;
    MatrixFamily::verify(params, derived)
}

/// From MUWM {W_1,…,W_f} of weight k, prepending W_1ᵀ to the derived
/// family gives MUWM of weight k with the same size f.
pub fn derive_muwm_with_transpose(family: &MatrixFamily) -> Result<MatrixFamily, MatrixError> {
    if !family.params.is_unbiased() {
        return Err(MatrixError::NotMuwmParams { a: family.params.a, k: family.params.k });
    }
    if family.size() < 2 {
        return Err(MatrixError::TooFewMembers { f: family.size() });
    }
    let derived = derive_muwm(family)?;
    let mut members = vec![family.members[0].transpose()];
    members.extend(derived.members);
    MatrixFamily::verify(derived.params, members)
}

/// Feasibility verdict of a parameter screen.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Screening {
    Infeasible { rule: ScreenRule },
    Unknown,
}

/// The screening rules implemented, in the order they are reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ScreenRule {
    /// No weighing matrix of non-square weight exists for odd order.
    OddOrderNonSquareWeight,
    /// Parameters (d,2,4,1): at most d−1 matrices (counting bound).
    CountingBound,
    /// Parameters (d,d,d/2,2d): at most d matrices (LP bound).
    LpBound,
    /// a not a perfect square: impossible for families of size >= 2.
    NonSquareScale,
}

impl ScreenRule {
    pub fn describe(self) -> &'static str {
        match self {
            ScreenRule::OddOrderNonSquareWeight => {
                "odd order with non-square weight: no weighing matrix exists"
            }
            ScreenRule::CountingBound => {
                "counting bound for (d,2,4,1): family size cannot exceed d-1"
            }
            ScreenRule::LpBound => {
                "linear programming bound for (d,d,d/2,2d): family size cannot exceed d"
            }
            ScreenRule::NonSquareScale => {
                "a is not a perfect square: impossible for family size >= 2"
            }
        }
    }
}

/// Screens parameters (d, k, a) and an optional requested family size.
///
/// Size-dependent bounds are checked first when a size is requested, so a
/// query like (7,2,1) with size 9 reports the counting bound even though the
/// odd-order rule also applies. Total function: never errors.
pub fn screen_parameters(d: u64, k: u64, a: u64, size: Option<u64>) -> Screening {
    if let Some(f) = size {
        if k == 2 && a == 1 && f > d.saturating_sub(1) {
            return Screening::Infeasible { rule: ScreenRule::CountingBound };
        }
        if k == d && a == 2 * d && 2 * (k * k / a.max(1)) == d && f > d {
            return Screening::Infeasible { rule: ScreenRule::LpBound };
        }
    }
    if d % 2 == 1 && exact_sqrt(k).is_none() {
        return Screening::Infeasible { rule: ScreenRule::OddOrderNonSquareWeight };
    }
    if exact_sqrt(a).is_none() && size.unwrap_or(2) >= 2 {
        return Screening::Infeasible { rule: ScreenRule::NonSquareScale };
    }
    Screening::Unknown
}
