//! JSON wire formats for instances, solutions, strategies and embeddings.
//!
//! Bit vectors travel as hex strings (nibble `k` holds bits `4k..4k+3`,
//! least significant first); their lengths come from the enclosing
//! instance, so solutions are decoded against one.

use serde::{Deserialize, Serialize};

use crate::classical::{AffineStrategy, LocalStrategy};
use crate::error::{Error, Result};
use crate::f2lin::{F2Matrix, F2Vector, Z4Vector};
use crate::graphs::Graph;
use crate::problems::{
    mod3_weight, verify_hlf, verify_parallel, verify_pbp, verify_php, verify_rphp, HlfInstance, ParallelInstance,
    PbpInput, PhpInstance, RphpInstance, TritVector, WeightedInput, WinFraction,
};
use crate::reductions::HlfEmbedding;

/// Any problem instance the toolkit can generate, solve or verify.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    Php(PhpInstance),
    Rphp(RphpInstance),
    Hlf(HlfInstance),
    Pbp(PbpInput),
    Parallel(ParallelInstance<Instance>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Php { y: F2Vector },
    Rphp { y: F2Vector, d: F2Vector },
    Hlf { p: F2Vector },
    Pbp { y: F2Vector },
    /// A claimed value of `|x| mod 3` for a parity bending input.
    Mod3 { value: u8 },
    Parallel { outputs: Vec<Solution> },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum InstanceWire {
    Php {
        n: usize,
        m: usize,
        x: String,
    },
    Rphp {
        graph: Graph,
        x: String,
    },
    Hlf {
        n: usize,
        a_upper: Vec<(usize, usize)>,
        diagonal: Vec<u8>,
        b: Vec<u8>,
    },
    Pbp {
        alphabet: String,
        x: Vec<u8>,
    },
    Parallel {
        win_fraction: String,
        instances: Vec<InstanceWire>,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum SolutionWire {
    Php { y: String },
    Rphp { y: String, d: String },
    Hlf { p: String },
    Pbp { y: String },
    Mod3 { value: u8 },
    Parallel { outputs: Vec<SolutionWire> },
}

fn bits_to_u8(v: &F2Vector) -> Vec<u8> {
    v.iter().map(u8::from).collect()
}

fn u8_to_bits(v: &[u8], what: &str) -> Result<F2Vector> {
    if let Some(bad) = v.iter().find(|&&b| b > 1) {
        return Err(Error::Format(format!("{what} entry {bad} is not a bit")));
    }
    Ok(F2Vector::from_bits(v.iter().map(|&b| b == 1)))
}

impl Instance {
    fn to_wire(&self) -> InstanceWire {
        match self {
            Instance::Php(p) => InstanceWire::Php {
                n: p.n(),
                m: p.m(),
                x: p.x().to_hex(),
            },
            Instance::Rphp(r) => InstanceWire::Rphp {
                graph: r.graph().clone(),
                x: r.x().to_hex(),
            },
            Instance::Hlf(h) => {
                let a = h.a();
                let a_upper = (0..h.n())
                    .flat_map(|i| (i + 1..h.n()).map(move |j| (i, j)))
                    .filter(|&(i, j)| a.get(i, j))
                    .collect();
                InstanceWire::Hlf {
                    n: h.n(),
                    a_upper,
                    diagonal: bits_to_u8(&a.diagonal()),
                    b: h.b().entries().to_vec(),
                }
            }
            Instance::Pbp(PbpInput::Bits(x)) => InstanceWire::Pbp {
                alphabet: "binary".into(),
                x: bits_to_u8(x),
            },
            Instance::Pbp(PbpInput::Trits(t)) => InstanceWire::Pbp {
                alphabet: "ternary".into(),
                x: t.entries().to_vec(),
            },
            Instance::Parallel(p) => InstanceWire::Parallel {
                win_fraction: p.win_fraction().to_string(),
                instances: p.instances().iter().map(Instance::to_wire).collect(),
            },
        }
    }

    fn from_wire(w: InstanceWire) -> Result<Self> {
        Ok(match w {
            InstanceWire::Php { n, m, x } => Instance::Php(PhpInstance::new(F2Vector::from_hex(&x, n)?, m)?),
            InstanceWire::Rphp { graph, x } => {
                let x = F2Vector::from_hex(&x, graph.vertex_count())?;
                Instance::Rphp(RphpInstance::new(graph, x)?)
            }
            InstanceWire::Hlf {
                n,
                a_upper,
                diagonal,
                b,
            } => {
                if diagonal.len() != n {
                    return Err(Error::Format(format!("diagonal has {} entries, n = {n}", diagonal.len())));
                }
                let mut a = F2Matrix::zeros(n, n);
                for (i, &bit) in diagonal.iter().enumerate() {
                    a.set(i, i, u8_to_bits(&[bit], "diagonal")?.get(0));
                }
                for (i, j) in a_upper {
                    if i >= j || j >= n {
                        return Err(Error::Format(format!("({i}, {j}) is not an upper-triangle pair for n = {n}")));
                    }
                    a.set(i, j, true);
                    a.set(j, i, true);
                }
                Instance::Hlf(HlfInstance::new(a, Z4Vector::new(b)?)?)
            }
            InstanceWire::Pbp { alphabet, x } => match alphabet.as_str() {
                "binary" => Instance::Pbp(PbpInput::Bits(u8_to_bits(&x, "input")?)),
                "ternary" => Instance::Pbp(PbpInput::Trits(TritVector::new(x)?)),
                other => return Err(Error::Format(format!("unknown alphabet {other:?}"))),
            },
            InstanceWire::Parallel {
                win_fraction,
                instances,
            } => {
                let parts = instances.into_iter().map(Instance::from_wire).collect::<Result<Vec<_>>>()?;
                if parts.iter().any(|p| matches!(p, Instance::Parallel(_))) {
                    return Err(Error::Format("parallel instances do not nest".into()));
                }
                Instance::Parallel(ParallelInstance::new(parts, win_fraction.parse()?)?)
            }
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_wire()).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let w: InstanceWire = serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))?;
        Self::from_wire(w)
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Instance::Php(_) => "php",
            Instance::Rphp(_) => "rphp",
            Instance::Hlf(_) => "hlf",
            Instance::Pbp(_) => "pbp",
            Instance::Parallel(_) => "parallel",
        }
    }

    /// Wraps `k` copies under one success threshold.
    pub fn parallel(copies: Vec<Instance>, win_fraction: WinFraction) -> Result<Self> {
        Ok(Instance::Parallel(ParallelInstance::new(copies, win_fraction)?))
    }
}

impl Solution {
    fn to_wire(&self) -> SolutionWire {
        match self {
            Solution::Php { y } => SolutionWire::Php { y: y.to_hex() },
            Solution::Rphp { y, d } => SolutionWire::Rphp {
                y: y.to_hex(),
                d: d.to_hex(),
            },
            Solution::Hlf { p } => SolutionWire::Hlf { p: p.to_hex() },
            Solution::Pbp { y } => SolutionWire::Pbp { y: y.to_hex() },
            Solution::Mod3 { value } => SolutionWire::Mod3 { value: *value },
            Solution::Parallel { outputs } => SolutionWire::Parallel {
                outputs: outputs.iter().map(Solution::to_wire).collect(),
            },
        }
    }

    fn from_wire(w: SolutionWire, inst: &Instance) -> Result<Self> {
        let mismatch = |kind: &str| Error::Format(format!("{kind} solution for a {} instance", inst.kind()));
        Ok(match (w, inst) {
            (SolutionWire::Php { y }, Instance::Php(p)) => Solution::Php {
                y: F2Vector::from_hex(&y, p.m())?,
            },
            (SolutionWire::Rphp { y, d }, Instance::Rphp(r)) => Solution::Rphp {
                y: F2Vector::from_hex(&y, r.graph().vertex_count())?,
                d: F2Vector::from_hex(&d, r.graph().edge_count())?,
            },
            (SolutionWire::Hlf { p }, Instance::Hlf(h)) => Solution::Hlf {
                p: F2Vector::from_hex(&p, h.n())?,
            },
            (SolutionWire::Pbp { y }, Instance::Pbp(x)) => Solution::Pbp {
                y: F2Vector::from_hex(&y, x.len())?,
            },
            (SolutionWire::Mod3 { value }, Instance::Pbp(_)) => {
                if value > 2 {
                    return Err(Error::Format(format!("mod 3 value {value}")));
                }
                Solution::Mod3 { value }
            }
            (SolutionWire::Parallel { outputs }, Instance::Parallel(p)) => {
                if outputs.len() != p.k() {
                    return Err(Error::Format(format!("{} outputs for {} copies", outputs.len(), p.k())));
                }
                Solution::Parallel {
                    outputs: outputs
                        .into_iter()
                        .zip(p.instances())
                        .map(|(o, i)| Solution::from_wire(o, i))
                        .collect::<Result<_>>()?,
                }
            }
            (w, _) => return Err(mismatch(w.kind())),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_wire()).expect("serializable")
    }

    pub fn from_json(s: &str, inst: &Instance) -> Result<Self> {
        let w: SolutionWire = serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))?;
        Self::from_wire(w, inst)
    }

    /// One stream record: hex `y`, then hex `d` for relaxed outputs.
    pub fn record(&self) -> String {
        match self {
            Solution::Php { y } | Solution::Pbp { y } => y.to_hex(),
            Solution::Rphp { y, d } => format!("{} {}", y.to_hex(), d.to_hex()),
            Solution::Hlf { p } => p.to_hex(),
            Solution::Mod3 { value } => value.to_string(),
            Solution::Parallel { outputs } => outputs.iter().map(Solution::record).collect::<Vec<_>>().join(","),
        }
    }
}

impl SolutionWire {
    fn kind(&self) -> &'static str {
        match self {
            SolutionWire::Php { .. } => "php",
            SolutionWire::Rphp { .. } => "rphp",
            SolutionWire::Hlf { .. } => "hlf",
            SolutionWire::Pbp { .. } => "pbp",
            SolutionWire::Mod3 { .. } => "mod3",
            SolutionWire::Parallel { .. } => "parallel",
        }
    }
}

/// Checks `sol` against `inst` with the matching verifier.
pub fn verify(inst: &Instance, sol: &Solution) -> Result<bool> {
    match (inst, sol) {
        (Instance::Php(p), Solution::Php { y }) => verify_php(p, y),
        (Instance::Rphp(r), Solution::Rphp { y, d }) => verify_rphp(r, y, d),
        (Instance::Hlf(h), Solution::Hlf { p }) => verify_hlf(h, p),
        (Instance::Pbp(x), Solution::Pbp { y }) => {
            if y.len() != x.len() {
                return Err(Error::Shape(format!("{} output bits for {} inputs", y.len(), x.len())));
            }
            Ok(verify_pbp(x, y))
        }
        (Instance::Pbp(x), Solution::Mod3 { value }) => Ok(*value == mod3_weight(x)),
        (Instance::Parallel(p), Solution::Parallel { outputs }) => verify_parallel(p, outputs, verify),
        _ => Err(Error::Format(format!("solution does not match a {} instance", inst.kind()))),
    }
}

/// Classical strategies in their JSON form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Strategy {
    Affine(AffineStrategy),
    Local(LocalStrategy),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum StrategyWire {
    Affine {
        n: usize,
        a: bool,
        b: String,
    },
    Local {
        inputs: usize,
        supports: Vec<Vec<usize>>,
        tables: Vec<String>,
    },
}

impl Strategy {
    pub fn to_json(&self) -> String {
        let w = match self {
            Strategy::Affine(s) => StrategyWire::Affine {
                n: s.n(),
                a: s.a,
                b: s.b.to_hex(),
            },
            Strategy::Local(s) => StrategyWire::Local {
                inputs: s.inputs(),
                supports: s.supports().to_vec(),
                tables: s.tables().iter().map(F2Vector::to_hex).collect(),
            },
        };
        serde_json::to_string(&w).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let w: StrategyWire = serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))?;
        Ok(match w {
            StrategyWire::Affine { n, a, b } => Strategy::Affine(AffineStrategy::new(a, F2Vector::from_hex(&b, n)?)),
            StrategyWire::Local {
                inputs,
                supports,
                tables,
            } => {
                if supports.len() != tables.len() {
                    return Err(Error::Format(format!("{} supports, {} tables", supports.len(), tables.len())));
                }
                let tables = supports
                    .iter()
                    .zip(&tables)
                    .map(|(sup, t)| {
                        if sup.len() >= usize::BITS as usize {
                            return Err(Error::Format(format!("support of size {}", sup.len())));
                        }
                        F2Vector::from_hex(t, 1 << sup.len())
                    })
                    .collect::<Result<_>>()?;
                Strategy::Local(LocalStrategy::new(inputs, supports, tables)?)
            }
        })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EmbeddingWire {
    graph: Graph,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coordinates: Option<Vec<(usize, usize)>>,
}

pub fn embedding_to_json(e: &HlfEmbedding) -> String {
    serde_json::to_string(&EmbeddingWire {
        graph: e.graph().clone(),
        coordinates: e.coordinates().map(<[_]>::to_vec),
    })
    .expect("serializable")
}

pub fn embedding_from_json(s: &str) -> Result<HlfEmbedding> {
    let w: EmbeddingWire = serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))?;
    match w.coordinates {
        Some(c) => HlfEmbedding::with_coordinates(w.graph, c),
        None => Ok(HlfEmbedding::new(w.graph)),
    }
}
