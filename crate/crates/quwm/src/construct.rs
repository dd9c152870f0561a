//! The construction registry: every family-building pipeline implements
//! `Construction` and is registered by name, so the CLI (or any embedder)
//! selects one at runtime by string.

use serde_json::json;

use crate::binary::build_mquwm_binary;
use crate::error::Error;
use crate::io;
use crate::lattice::{d_lattice_decomposition, weight4_maximum, LatticeSpec};
use crate::matrix::MatrixFamily;
use crate::search::DEFAULT_NODE_BUDGET;
use crate::spherical::{code_to_family, CrossPolytopeDecomposition, SphericalCode};
use crate::z4::build_mquwm_z4;

#[derive(Debug, Clone)]
pub struct ConstructOptions {
    pub m: Option<u32>,
    pub d: Option<u64>,
    pub lattice: Option<String>,
    pub strict: bool,
    pub node_budget: u64,
}

impl Default for ConstructOptions {
    fn default() -> Self {
        ConstructOptions {
            m: None,
            d: None,
            lattice: None,
            strict: false,
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

/// A side file a construction wants written next to the family.
#[derive(Debug, Clone)]
pub struct AuxFile {
    pub suffix: String,
    pub contents: String,
}

#[derive(Debug)]
pub struct ConstructOutcome {
    /// Stem used for output file names, e.g. "binary-mquwm-m3".
    pub label: String,
    pub family: MatrixFamily,
    /// Pipeline certificate payload: every hypothesis check performed.
    pub payload: serde_json::Value,
    pub aux: Vec<AuxFile>,
}

pub trait Construction: Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn build(&self, opts: &ConstructOptions) -> Result<ConstructOutcome, Error>;
}

fn require_m(opts: &ConstructOptions, name: &str) -> Result<u32, Error> {
    opts.m.ok_or_else(|| Error::Usage(format!("construction '{name}' requires --m")))
}

fn require_d(opts: &ConstructOptions, name: &str) -> Result<u64, Error> {
    opts.d.ok_or_else(|| Error::Usage(format!("construction '{name}' requires --d")))
}

struct BinaryMquwm;

impl Construction for BinaryMquwm {
    fn name(&self) -> &'static str {
        "binary-mquwm"
    }

    fn summary(&self) -> &'static str {
        "MQUWM (d,d,d/2,2d) with f = d from the augmented extended dual of the BCH code, odd m >= 3"
    }

    fn build(&self, opts: &ConstructOptions) -> Result<ConstructOutcome, Error> {
        let m = require_m(opts, self.name())?;
        let (family, report) = build_mquwm_binary(m)?;
        let code = crate::binary::pipeline_code(m)?;
        Ok(ConstructOutcome {
            label: format!("binary-mquwm-m{m}"),
            family,
            payload: serde_json::to_value(&report).expect("report serialization"),
            aux: vec![AuxFile { suffix: "code.txt".into(), contents: io::write_binary_code(&code) }],
        })
    }
}

struct Z4Mquwm;

impl Construction for Z4Mquwm {
    fn name(&self) -> &'static str {
        "z4-mquwm"
    }

    fn summary(&self) -> &'static str {
        "MQUWM from the cosets of ZRM(1,m) in the Z4-Kerdock code; parameters measured, m >= 2"
    }

    fn build(&self, opts: &ConstructOptions) -> Result<ConstructOutcome, Error> {
        let m = require_m(opts, self.name())?;
        let (family, report) = build_mquwm_z4(m)?;
        let kerdock = crate::z4::kerdock(m)?;
        let zrm = crate::z4::zrm1(m)?;
        Ok(ConstructOutcome {
            label: format!("z4-mquwm-m{m}"),
            family,
            payload: serde_json::to_value(&report).expect("report serialization"),
            aux: vec![
                AuxFile { suffix: "kerdock.txt".into(), contents: io::write_z4_code(&kerdock) },
                AuxFile { suffix: "zrm.txt".into(), contents: io::write_z4_code(&zrm) },
            ],
        })
    }
}

struct DFrames;

impl Construction for DFrames {
    fn name(&self) -> &'static str {
        "d-frames"
    }

    fn summary(&self) -> &'static str {
        "d-1 MQUWM (d,2,4,1) from the round-robin 2-frame decomposition of the D_d roots, even d"
    }

    fn build(&self, opts: &ConstructOptions) -> Result<ConstructOutcome, Error> {
        let d = require_d(opts, self.name())?;
        let (system, decomp) = d_lattice_decomposition(d as usize)?;
        // D_d roots halve exactly to the weight-2 vectors of Ω_{d,2}
        let halved: Vec<Vec<i64>> = system
            .roots()
            .iter()
            .map(|v| v.iter().map(|x| x / 2).collect())
            .collect();
        let code = SphericalCode::new(halved.clone())?;
        let parts: Vec<Vec<usize>> = decomp
            .frames
            .iter()
            .map(|frame| {
                let mut idx: Vec<usize> = frame
                    .iter()
                    .map(|&i| code.index_of(&halved[i]).expect("halved root present"))
                    .collect();
                idx.sort_unstable();
                idx
            })
            .collect();
        let code_decomp = CrossPolytopeDecomposition::new(d as usize, parts);
        let family = code_to_family(&code, &code_decomp, 1, opts.strict)?;
        let payload = json!({
            "d": d,
            "frames": decomp.frames.len(),
            "roots_covered": decomp.covered(),
            "factorization": "round-robin (circle method), pinned",
            "params": family.params,
            "family_size": family.size(),
            "counting_bound": crate::bounds::counting_bound(d),
        });
        let aux = vec![
            AuxFile { suffix: "roots.txt".into(), contents: io::write_code(&code) },
            AuxFile { suffix: "decomposition.json".into(), contents: io::write_decomposition(&code_decomp) },
        ];
        Ok(ConstructOutcome { label: format!("d-frames-d{d}"), family, payload, aux })
    }
}

struct Weight4;

impl Construction for Weight4 {
    fn name(&self) -> &'static str {
        "weight4"
    }

    fn summary(&self) -> &'static str {
        "maximum family of weight-4 MUWM of order d from root-lattice 2-frame decompositions"
    }

    fn build(&self, opts: &ConstructOptions) -> Result<ConstructOutcome, Error> {
        let d = require_d(opts, self.name())?;
        if d < 4 {
            return Err(Error::Usage(format!("weight-4 matrices need order d >= 4, got {d}")));
        }
        let witness_spec = match &opts.lattice {
            Some(s) => Some(s.parse::<LatticeSpec>()?),
            None => None,
        };
        let row = weight4_maximum(d, witness_spec, opts.node_budget, opts.strict)?;
        let (family, payload, aux) = match &row.witness {
            None => (
                MatrixFamily {
                    params: crate::matrix::FamilyParams::unbiased(d, 4)?,
                    members: Vec::new(),
                },
                json!({
                    "d": d,
                    "m": row.m,
                    "witness": serde_json::Value::Null,
                    "note": "no rank-d root lattice admits two disjoint 2-frames",
                }),
                Vec::new(),
            ),
            Some(w) => {
                let code = SphericalCode::new(
                    w.decomposition
                        .frames
                        .iter()
                        .flatten()
                        .map(|&i| w.system.roots()[i].clone())
                        .collect(),
                )?;
                let parts: Vec<Vec<usize>> = w
                    .decomposition
                    .frames
                    .iter()
                    .map(|frame| {
                        let mut idx: Vec<usize> = frame
                            .iter()
                            .map(|&i| code.index_of(&w.system.roots()[i]).expect("used root"))
                            .collect();
                        idx.sort_unstable();
                        idx
                    })
                    .collect();
                let code_decomp =
                    CrossPolytopeDecomposition::new(w.decomposition.frame_size, parts);
                let payload = json!({
                    "d": d,
                    "m": row.m,
                    "witness": w.spec.to_string(),
                    "frames": w.decomposition.frames.len(),
                    "achieved": w.family.size(),
                    "params": w.family.params,
                });
                let aux = vec![
                    AuxFile { suffix: "roots.txt".into(), contents: io::write_code(&code) },
                    AuxFile {
                        suffix: "decomposition.json".into(),
                        contents: io::write_decomposition(&code_decomp),
                    },
                ];
                (w.family.clone(), payload, aux)
            }
        };
        Ok(ConstructOutcome { label: format!("weight4-d{d}"), family, payload, aux })
    }
}

/// Every registered construction, in registration order.
pub fn registry() -> &'static [&'static dyn Construction] {
    static REGISTRY: &[&dyn Construction] = &[&BinaryMquwm, &Z4Mquwm, &DFrames, &Weight4];
    REGISTRY
}

pub fn lookup(name: &str) -> Option<&'static dyn Construction> {
    registry().iter().copied().find(|c| c.name() == name)
}
