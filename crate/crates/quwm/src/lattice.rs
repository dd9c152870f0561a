//! Root systems in doubled integer coordinates (all squared norms 8),
//! disjoint 2-frame search and construction, and the weight-4 MUWM maximum
//! table.
//!
//! Doubling makes the half-integer roots of E7/E8 exact integers; the factor
//! disappears in the frame-coordinate division of the spherical conversion.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, LatticeError};
use crate::matrix::MatrixFamily;
use crate::search::{ClassGraph, DEFAULT_NODE_BUDGET};
use crate::spherical::{muwm_code_conversion, CrossPolytopeDecomposition, SphericalCode};

/// An irreducible root-lattice family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum LatticeFamily {
    A(usize),
    D(usize),
    E6,
    E7,
    E8,
}

impl LatticeFamily {
    pub fn rank(&self) -> usize {
        match self {
            LatticeFamily::A(d) | LatticeFamily::D(d) => *d,
            LatticeFamily::E6 => 6,
            LatticeFamily::E7 => 7,
            LatticeFamily::E8 => 8,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            LatticeFamily::A(d) => d + 1,
            LatticeFamily::D(d) => *d,
            LatticeFamily::E6 | LatticeFamily::E7 | LatticeFamily::E8 => 8,
        }
    }

    pub fn root_count(&self) -> usize {
        match self {
            LatticeFamily::A(d) => d * (d + 1),
            LatticeFamily::D(d) => 2 * d * (d - 1),
            LatticeFamily::E6 => 72,
            LatticeFamily::E7 => 126,
            LatticeFamily::E8 => 240,
        }
    }

    fn validate(&self) -> Result<(), LatticeError> {
        match self {
            LatticeFamily::A(d) if *d < 2 => {
                Err(LatticeError::BadSpec(format!("A_d requires d >= 2, got {d}")))
            }
            LatticeFamily::D(d) if *d < 4 => {
                Err(LatticeError::BadSpec(format!("D_d requires d >= 4, got {d}")))
            }
            _ => Ok(()),
        }
    }

    fn generate(&self) -> Vec<Vec<i64>> {
        match self {
            LatticeFamily::A(d) => {
                let n = d + 1;
                let mut roots = Vec::with_capacity(d * (d + 1));
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            let mut v = vec![0i64; n];
                            v[i] = 2;
                            v[j] = -2;
                            roots.push(v);
                        }
                    }
                }
                roots
            }
            LatticeFamily::D(d) => d_type_roots(*d),
            LatticeFamily::E8 => e8_roots(),
            LatticeFamily::E7 => {
                e8_roots().into_iter().filter(|v| dot(v, &E7_PIN) == 0).collect()
            }
            LatticeFamily::E6 => e8_roots()
                .into_iter()
                .filter(|v| dot(v, &E7_PIN) == 0 && dot(v, &E6_PIN) == 0)
                .collect(),
        }
    }
}

/// E7 is pinned inside E8 as the roots orthogonal to e7+e8 (doubled); E6
/// additionally orthogonal to e6−e7 (doubled), which spans an A2 with the
/// first pin.
const E7_PIN: [i64; 8] = [0, 0, 0, 0, 0, 0, 2, 2];
const E6_PIN: [i64; 8] = [0, 0, 0, 0, 0, 2, -2, 0];

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn d_type_roots(d: usize) -> Vec<Vec<i64>> {
    let mut roots = Vec::with_capacity(2 * d * (d - 1));
    for i in 0..d {
        for j in i + 1..d {
            for si in [2i64, -2] {
                for sj in [2i64, -2] {
                    let mut v = vec![0i64; d];
                    v[i] = si;
                    v[j] = sj;
                    roots.push(v);
                }
            }
        }
    }
    roots
}

fn e8_roots() -> Vec<Vec<i64>> {
    let mut roots = d_type_roots(8);
    for mask in 0u32..256 {
        if mask.count_ones() % 2 == 0 {
            roots.push((0..8).map(|i| if (mask >> i) & 1 == 1 { -1 } else { 1 }).collect());
        }
    }
    roots
}

impl fmt::Display for LatticeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeFamily::A(d) => write!(f, "A{d}"),
            LatticeFamily::D(d) => write!(f, "D{d}"),
            LatticeFamily::E6 => write!(f, "E6"),
            LatticeFamily::E7 => write!(f, "E7"),
            LatticeFamily::E8 => write!(f, "E8"),
        }
    }
}

impl FromStr for LatticeFamily {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, LatticeError> {
        let s = s.trim();
        let bad = || LatticeError::BadSpec(format!("unknown lattice family '{s}'"));
        let (head, num) = s.split_at(1.min(s.len()));
        let fam = match head {
            "A" | "a" => LatticeFamily::A(num.parse().map_err(|_| bad())?),
            "D" | "d" => LatticeFamily::D(num.parse().map_err(|_| bad())?),
            "E" | "e" => match num {
                "6" => LatticeFamily::E6,
                "7" => LatticeFamily::E7,
                "8" => LatticeFamily::E8,
                _ => return Err(bad()),
            },
            _ => return Err(bad()),
        };
        fam.validate()?;
        Ok(fam)
    }
}

/// An orthogonal direct sum of irreducible root lattices, e.g. "E7+D10".
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeSpec {
    pub components: Vec<LatticeFamily>,
}

impl LatticeSpec {
    pub fn single(family: LatticeFamily) -> Self {
        LatticeSpec { components: vec![family] }
    }

    pub fn rank(&self) -> usize {
        self.components.iter().map(|c| c.rank()).sum()
    }

    pub fn ambient_dim(&self) -> usize {
        self.components.iter().map(|c| c.ambient_dim()).sum()
    }

    pub fn root_count(&self) -> usize {
        self.components.iter().map(|c| c.root_count()).sum()
    }
}

impl fmt::Display for LatticeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for LatticeSpec {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, LatticeError> {
        let components = s
            .split('+')
            .map(|part| part.parse::<LatticeFamily>())
            .collect::<Result<Vec<_>, _>>()?;
        if components.is_empty() {
            return Err(LatticeError::BadSpec("empty lattice spec".into()));
        }
        Ok(LatticeSpec { components })
    }
}

/// The roots of a (sum of) root lattice(s) in doubled coordinates, sorted
/// lexicographically, with the owning component recorded per root.
#[derive(Debug, Clone)]
pub struct RootSystem {
    pub spec: LatticeSpec,
    pub ambient: usize,
    roots: Vec<Vec<i64>>,
    root_component: Vec<usize>,
}

pub fn generate_roots(spec: &LatticeSpec) -> Result<RootSystem, LatticeError> {
    for c in &spec.components {
        c.validate()?;
    }
    let ambient = spec.ambient_dim();
    let mut tagged: Vec<(Vec<i64>, usize)> = Vec::with_capacity(spec.root_count());
    let mut offset = 0;
    for (ci, fam) in spec.components.iter().enumerate() {
        for r in fam.generate() {
            let mut v = vec![0i64; ambient];
            v[offset..offset + r.len()].copy_from_slice(&r);
            tagged.push((v, ci));
        }
        offset += fam.ambient_dim();
    }
    tagged.sort();
    let (roots, root_component): (Vec<_>, Vec<_>) = tagged.into_iter().unzip();
    Ok(RootSystem { spec: spec.clone(), ambient, roots, root_component })
}

impl RootSystem {
    pub fn roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    pub fn rank(&self) -> usize {
        self.spec.rank()
    }

    pub fn index_of(&self, v: &[i64]) -> Option<usize> {
        self.roots.binary_search_by(|probe| probe.as_slice().cmp(v)).ok()
    }

    /// Antipodal classes: (representative index, negated index, component),
    /// representative = first nonzero coordinate positive, in root order.
    pub fn classes(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::with_capacity(self.roots.len() / 2);
        for (i, v) in self.roots.iter().enumerate() {
            if !crate::spherical::is_canonical(v) {
                continue;
            }
            let neg: Vec<i64> = v.iter().map(|x| -x).collect();
            let j = self.index_of(&neg).expect("root systems are negation-closed");
            out.push((i, j, self.root_component[i]));
        }
        out
    }

    fn class_graph(&self) -> (Vec<(usize, usize, usize)>, ClassGraph) {
        let classes = self.classes();
        let reps: Vec<Vec<i64>> = classes.iter().map(|&(i, _, _)| self.roots[i].clone()).collect();
        let component: Vec<usize> = classes.iter().map(|&(_, _, c)| c).collect();
        let comp_rank: Vec<usize> = self.spec.components.iter().map(|c| c.rank()).collect();
        let graph = ClassGraph::with_components(&reps, self.rank(), component, comp_rank);
        (classes, graph)
    }
}

/// The largest number of mutually orthogonal roots (antipodal classes).
pub fn max_orthogonal_roots(system: &RootSystem) -> usize {
    let (_, graph) = system.class_graph();
    graph.max_clique()
}

/// Disjoint 2-frames of a root system, as lists of root indices (2·rank
/// indices per frame). `leftover` lists the uncovered roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameDecomposition {
    pub frame_size: usize,
    pub frames: Vec<Vec<usize>>,
}

impl FrameDecomposition {
    pub fn covered(&self) -> usize {
        self.frames.iter().map(|f| f.len()).sum()
    }

    pub fn leftover(&self, total_roots: usize) -> Vec<usize> {
        let mut used = vec![false; total_roots];
        for f in &self.frames {
            for &i in f {
                used[i] = true;
            }
        }
        (0..total_roots).filter(|&i| !used[i]).collect()
    }
}

fn class_frames_to_roots(
    classes: &[(usize, usize, usize)],
    frames: Vec<Vec<usize>>,
) -> Vec<Vec<usize>> {
    frames
        .into_iter()
        .map(|frame| {
            let mut idx: Vec<usize> =
                frame.iter().flat_map(|&c| [classes[c].0, classes[c].1]).collect();
            idx.sort_unstable();
            idx
        })
        .collect()
}

/// The pinned round-robin (circle method) 1-factorization of K_d, as the
/// d−1 disjoint 2-frames of the D_d root system. Covers every root.
pub fn d_lattice_decomposition(d: usize) -> Result<(RootSystem, FrameDecomposition), LatticeError> {
    if d < 4 || !d.is_multiple_of(2) {
        return Err(LatticeError::OddD { d });
    }
    let spec = LatticeSpec::single(LatticeFamily::D(d));
    let system = generate_roots(&spec)?;
    let n = d - 1;
    let mut frames = Vec::with_capacity(n);
    for round in 0..n {
        let mut pairs = vec![(d - 1, round)];
        for i in 1..d / 2 {
            let a = (round + i) % n;
            let b = (round + n - i) % n;
            pairs.push((a.max(b), a.min(b)));
        }
        let mut idx = Vec::with_capacity(2 * d);
        for (i, j) in pairs {
            for si in [2i64, -2] {
                for sj in [2i64, -2] {
                    let mut v = vec![0i64; d];
                    v[i] = si;
                    v[j] = sj;
                    idx.push(system.index_of(&v).expect("D_d root"));
                }
            }
        }
        idx.sort_unstable();
        frames.push(idx);
    }
    Ok((system, FrameDecomposition { frame_size: d, frames }))
}

/// Why a frame count is known to be the exact maximum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Optimality {
    /// No single frame exists: the largest orthogonal set is below the rank.
    CliqueBelowRank,
    /// A full partition was found; disjointness caps the count at
    /// (classes / rank).
    CountingCeiling,
    /// Branch-and-bound packing exhausted the space.
    ExhaustedPacking,
}

#[derive(Debug, Clone)]
pub struct FrameSearch {
    pub count: usize,
    pub decomposition: FrameDecomposition,
    pub nodes: u64,
    pub optimality: Optimality,
    /// Largest orthogonal class set; only computed when the count is 0.
    pub clique_bound: Option<usize>,
}

/// Exact maximum number of disjoint 2-frames with a lexicographically first
/// witness, by exact-cover / branch-and-bound search over the orthogonality
/// graph. Exceeding the node budget is a hard error.
pub fn max_disjoint_frames(system: &RootSystem, budget: u64) -> Result<FrameSearch, LatticeError> {
    let (classes, graph) = system.class_graph();
    let rank = system.rank();
    let mut nodes_total = 0u64;
    if classes.len() % rank == 0 {
        let outcome = graph
            .partition_frames(budget)
            .map_err(|b| LatticeError::Timeout { budget: b.budget, nodes: b.nodes })?;
        nodes_total += outcome.nodes;
        if let Some(parts) = outcome.parts {
            let count = parts.len();
            return Ok(FrameSearch {
                count,
                decomposition: FrameDecomposition {
                    frame_size: rank,
                    frames: class_frames_to_roots(&classes, parts),
                },
                nodes: nodes_total,
                optimality: Optimality::CountingCeiling,
                clique_bound: None,
            });
        }
    }
    let packing = graph
        .max_packing(budget.saturating_sub(nodes_total))
        .map_err(|b| LatticeError::Timeout { budget, nodes: nodes_total + b.nodes })?;
    nodes_total += packing.nodes;
    let clique_bound = if packing.count == 0 { Some(graph.max_clique()) } else { None };
    let optimality = if packing.count == 0 && clique_bound.map(|c| c < rank).unwrap_or(false) {
        Optimality::CliqueBelowRank
    } else {
        Optimality::ExhaustedPacking
    };
    Ok(FrameSearch {
        count: packing.count,
        decomposition: FrameDecomposition {
            frame_size: rank,
            frames: class_frames_to_roots(&classes, packing.frames),
        },
        nodes: nodes_total,
        optimality,
        clique_bound,
    })
}

/// Composes per-component decompositions into the direct sum: the number of
/// disjoint frames of ⊥L_i is min_i m(L_i), witnessed by pairing the first
/// min count of frames across components block-diagonally.
pub fn direct_sum_frames(
    parts: &[(RootSystem, FrameDecomposition)],
) -> Result<(RootSystem, FrameDecomposition), LatticeError> {
    if parts.is_empty() {
        return Err(LatticeError::BadSpec("direct sum of zero components".into()));
    }
    let spec = LatticeSpec {
        components: parts.iter().flat_map(|(s, _)| s.spec.components.clone()).collect(),
    };
    let sum = generate_roots(&spec)?;
    let count = parts.iter().map(|(_, d)| d.frames.len()).min().unwrap_or(0);
    let frame_size = parts.iter().map(|(_, d)| d.frame_size).sum();
    let mut frames = Vec::with_capacity(count);
    for fi in 0..count {
        let mut idx = Vec::with_capacity(2 * frame_size);
        let mut offset = 0usize;
        for (system, decomp) in parts {
            for &ri in &decomp.frames[fi] {
                let mut v = vec![0i64; sum.ambient];
                let root = &system.roots()[ri];
                v[offset..offset + root.len()].copy_from_slice(root);
                idx.push(sum.index_of(&v).expect("embedded root"));
            }
            offset += system.ambient;
        }
        idx.sort_unstable();
        frames.push(idx);
    }
    Ok((sum, FrameDecomposition { frame_size, frames }))
}

/// Frames of one irreducible component: constructive for even D (round
/// robin), search for E7/E8, empty for the frameless families.
pub fn component_frames(
    family: LatticeFamily,
    budget: u64,
) -> Result<(RootSystem, FrameDecomposition), Error> {
    family.validate()?;
    match family {
        LatticeFamily::D(d) if d % 2 == 0 => Ok(d_lattice_decomposition(d)?),
        LatticeFamily::E7 | LatticeFamily::E8 => {
            let system = generate_roots(&LatticeSpec::single(family))?;
            let search = max_disjoint_frames(&system, budget)?;
            Ok((system, search.decomposition))
        }
        _ => {
            // A_d, odd D_d, E6: no 2-frame exists
            let system = generate_roots(&LatticeSpec::single(family))?;
            let rank = system.rank();
            Ok((system, FrameDecomposition { frame_size: rank, frames: Vec::new() }))
        }
    }
}

/// The maximum number of weight-4 MUWM of order d: 0 for d < 4 and
/// d ∈ {5, 9}; 14 for d = 8; 2 for d = 11; 4 for d = 13; d−2 for even
/// d ≥ 4, d ≠ 8; 8 for d = 7 and odd d ≥ 15.
pub fn weight4_table_value(d: u64) -> u64 {
    match d {
        0..=3 | 5 | 9 => 0,
        7 => 8,
        8 => 14,
        11 => 2,
        13 => 4,
        d if d % 2 == 0 => d - 2,
        _ => 8, // odd d >= 15
    }
}

/// The table's named witness lattice per order, when one exists.
pub fn default_weight4_witness(d: u64) -> Option<LatticeSpec> {
    let d = d as usize;
    match d {
        0..=3 | 5 | 9 => None,
        7 => Some(LatticeSpec::single(LatticeFamily::E7)),
        8 => Some(LatticeSpec::single(LatticeFamily::E8)),
        11 => Some(LatticeSpec { components: vec![LatticeFamily::D(4), LatticeFamily::E7] }),
        13 => Some(LatticeSpec { components: vec![LatticeFamily::D(6), LatticeFamily::E7] }),
        15 => Some(LatticeSpec { components: vec![LatticeFamily::E7, LatticeFamily::E8] }),
        d if d % 2 == 0 => Some(LatticeSpec::single(LatticeFamily::D(d))),
        d => Some(LatticeSpec { components: vec![LatticeFamily::E7, LatticeFamily::D(d - 7)] }),
    }
}

/// Validates a user-requested witness against the odd-order menu
/// 7a + 8b + Σ t_i·d_i (even d_i ≥ 10, a ≠ 0) or, for even orders, any
/// decomposition of matching rank.
pub fn validate_weight4_witness(spec: &LatticeSpec, d: u64) -> Result<(), LatticeError> {
    if spec.rank() as u64 != d {
        return Err(LatticeError::BadSpec(format!(
            "witness rank {} does not match order {d}",
            spec.rank()
        )));
    }
    if d % 2 == 1 && d >= 15 {
        let mut has_e7 = false;
        for c in &spec.components {
            match c {
                LatticeFamily::E7 => has_e7 = true,
                LatticeFamily::E8 => {}
                LatticeFamily::D(di) if di % 2 == 0 && *di >= 10 => {}
                other => {
                    return Err(LatticeError::BadSpec(format!(
                        "component {other} is outside the odd-order menu (E7, E8, even D >= 10)"
                    )))
                }
            }
        }
        if !has_e7 {
            return Err(LatticeError::BadSpec("the odd-order menu requires at least one E7".into()));
        }
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct Weight4Witness {
    pub spec: LatticeSpec,
    pub system: RootSystem,
    pub decomposition: FrameDecomposition,
    pub family: MatrixFamily,
}

#[derive(Debug, Clone)]
pub struct Weight4Row {
    pub d: u64,
    pub m: u64,
    pub witness: Option<Weight4Witness>,
}

/// Builds the table row for order d: the maximum m, and for m > 0 a witness
/// family of m MUWM of weight 4 obtained from the lattice decomposition via
/// the reference-frame conversion.
pub fn weight4_maximum(
    d: u64,
    witness_spec: Option<LatticeSpec>,
    budget: u64,
    strict: bool,
) -> Result<Weight4Row, Error> {
    let m = weight4_table_value(d);
    let spec = match witness_spec {
        Some(s) => {
            validate_weight4_witness(&s, d)?;
            Some(s)
        }
        None => default_weight4_witness(d),
    };
    let spec = match spec {
        None => return Ok(Weight4Row { d, m, witness: None }),
        Some(s) => s,
    };
    let mut parts = Vec::with_capacity(spec.components.len());
    for &fam in &spec.components {
        parts.push(component_frames(fam, budget)?);
    }
    let (system, decomposition) = direct_sum_frames(&parts)?;
    if decomposition.frames.len() < 2 {
        // fewer than two frames: no MUWM after consuming the reference frame
        return Ok(Weight4Row {
            d,
            m,
            witness: Some(Weight4Witness {
                spec,
                system,
                decomposition,
                family: MatrixFamily {
                    params: crate::matrix::FamilyParams::unbiased(d, 4)?,
                    members: Vec::new(),
                },
            }),
        });
    }
    let used: Vec<Vec<i64>> = decomposition
        .frames
        .iter()
        .flatten()
        .map(|&i| system.roots()[i].clone())
        .collect();
    let code = SphericalCode::new(used)?;
    let parts_idx: Vec<Vec<usize>> = decomposition
        .frames
        .iter()
        .map(|frame| {
            let mut idx: Vec<usize> = frame
                .iter()
                .map(|&i| code.index_of(&system.roots()[i]).expect("used root"))
                .collect();
            idx.sort_unstable();
            idx
        })
        .collect();
    let code_decomp = CrossPolytopeDecomposition::new(decomposition.frame_size, parts_idx);
    let family = muwm_code_conversion(&code, &code_decomp, strict)?;
    Ok(Weight4Row {
        d,
        m,
        witness: Some(Weight4Witness { spec, system, decomposition, family }),
    })
}

/// Independent confirmation of a witness's frame count: per-component
/// exhaustive search composed by the direct-sum minimum.
pub fn confirm_frames_by_search(spec: &LatticeSpec, budget: u64) -> Result<usize, LatticeError> {
    let mut min_frames = usize::MAX;
    for &fam in &spec.components {
        let system = generate_roots(&LatticeSpec::single(fam))?;
        let search = max_disjoint_frames(&system, budget)?;
        min_frames = min_frames.min(search.count);
    }
    Ok(if min_frames == usize::MAX { 0 } else { min_frames })
}

pub fn default_budget() -> u64 {
    DEFAULT_NODE_BUDGET
}
