//! Exact samplers for the output laws of the constant-depth quantum circuits,
//! and a small statevector simulator used to cross-check them.

mod statevector;

pub use statevector::{total_variation, StateVector, MAX_QUBITS};

use std::f64::consts::PI;

use rand::Rng;

use crate::error::{shape, Error, Result};
use crate::f2lin::F2Vector;
use crate::graphs::{cnot_layers, Graph};
use crate::problems::{half_weight_parity, PbpInput, WeightedInput};

/// One run of a quantum circuit. `z` is the hidden cat-state representative,
/// kept for tests only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantumSample {
    pub y: F2Vector,
    pub d: Option<F2Vector>,
    pub z: Option<F2Vector>,
}

/// Largest number of output bits an exact law is tabulated for.
pub const MAX_LAW_BITS: usize = 20;

fn check_law_bits(bits: usize) -> Result<()> {
    if bits > MAX_LAW_BITS {
        return Err(Error::Capacity {
            what: "bits in a tabulated law",
            got: bits,
            limit: MAX_LAW_BITS,
        });
    }
    Ok(())
}

fn require_even(x: &F2Vector) -> Result<()> {
    if x.parity() {
        return Err(Error::Promise(format!("input {x} has odd parity")));
    }
    Ok(())
}

/// Uniform over the `2^(m-1)` strings of length `m` with the given parity.
pub fn sample_uniform_parity<R: Rng + ?Sized>(m: usize, parity: bool, rng: &mut R) -> Result<F2Vector> {
    if m == 0 {
        return Err(Error::Argument("output length must be at least 1".into()));
    }
    let mut y = F2Vector::random(m, rng);
    if y.parity() != parity {
        y.flip(m - 1);
    }
    Ok(y)
}

/// Cat state, `S` on each qubit whose input bit is set, Hadamards, measure.
pub fn sample_php_cat<R: Rng + ?Sized>(x: &F2Vector, m: usize, rng: &mut R) -> Result<F2Vector> {
    require_even(x)?;
    sample_uniform_parity(m, half_weight_parity(x), rng)
}

/// Measured cat state on a connected graph: a uniform representative `z` and
/// the edge parities `d_uv = z_u ^ z_v`.
pub fn sample_poor_mans_cat<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> Result<(F2Vector, F2Vector)> {
    g.require_connected()?;
    let z = F2Vector::random(g.vertex_count(), rng);
    let d = edge_parities(g, &z);
    Ok((z, d))
}

fn edge_parities(g: &Graph, z: &F2Vector) -> F2Vector {
    F2Vector::from_bits(g.edges().iter().map(|&(u, v)| z.get(u) ^ z.get(v)))
}

pub fn sample_rphp<R: Rng + ?Sized>(g: &Graph, x: &F2Vector, rng: &mut R) -> Result<QuantumSample> {
    if x.len() != g.vertex_count() {
        return Err(shape(format!("input has {} bits for {} vertices", x.len(), g.vertex_count())));
    }
    require_even(x)?;
    let (z, d) = sample_poor_mans_cat(g, rng)?;
    let y = sample_uniform_parity(x.len(), half_weight_parity(x) ^ z.dot(x), rng)?;
    Ok(QuantumSample {
        y,
        d: Some(d),
        z: Some(z),
    })
}

/// Rotated cat state: always correct when `|x| = 0 (mod 3)`, correct with
/// probability exactly 3/4 otherwise.
pub fn sample_pbp<X, R>(x: &X, rng: &mut R) -> Result<F2Vector>
where
    X: WeightedInput + ?Sized,
    R: Rng + ?Sized,
{
    let odd = x.weight() % 3 != 0 && rng.gen_ratio(3, 4);
    sample_uniform_parity(x.len(), odd, rng)
}

/// Exact law of [`sample_php_cat`], indexed by the output as a bit mask.
pub fn php_law(x: &F2Vector, m: usize) -> Result<Vec<f64>> {
    require_even(x)?;
    check_law_bits(m)?;
    if m == 0 {
        return Err(Error::Argument("output length must be at least 1".into()));
    }
    let target = half_weight_parity(x);
    let p = 1.0 / (1u64 << (m - 1)) as f64;
    Ok((0..1u64 << m)
        .map(|y| if (y.count_ones() % 2 == 1) == target { p } else { 0.0 })
        .collect())
}

/// Exact joint law of `(y, d)` from [`sample_rphp`], indexed by
/// `y | d << |V|` (the statevector's qubit order).
pub fn rphp_law(g: &Graph, x: &F2Vector) -> Result<Vec<f64>> {
    g.require_connected()?;
    require_even(x)?;
    let (nv, ne) = (g.vertex_count(), g.edge_count());
    if x.len() != nv {
        return Err(shape(format!("input has {} bits for {nv} vertices", x.len())));
    }
    check_law_bits(nv + ne)?;
    let mut law = vec![0.0; 1 << (nv + ne)];
    let weight = 1.0 / (1u64 << nv) as f64 / (1u64 << (nv - 1)) as f64;
    for zm in 0..1u64 << nv {
        let z = F2Vector::from_u64(zm, nv);
        let d = edge_parities(g, &z).as_u64();
        let target = half_weight_parity(x) ^ z.dot(x);
        for y in 0..1u64 << nv {
            if (y.count_ones() % 2 == 1) == target {
                law[(y | d << nv) as usize] += weight;
            }
        }
    }
    Ok(law)
}

/// Exact law of [`sample_pbp`], indexed by the output mask.
pub fn pbp_law<X: WeightedInput + ?Sized>(x: &X) -> Result<Vec<f64>> {
    let n = x.len();
    check_law_bits(n)?;
    if n == 0 {
        return Err(Error::Argument("input length must be at least 1".into()));
    }
    let per = 1.0 / (1u64 << (n - 1)) as f64;
    let (p_odd, p_even) = if x.weight() % 3 == 0 { (0.0, 1.0) } else { (0.75, 0.25) };
    Ok((0..1u64 << n)
        .map(|y| per * if y.count_ones() % 2 == 1 { p_odd } else { p_even })
        .collect())
}

/// Output law of the literal parity-halving circuit on `n = |x|` qubits.
pub fn statevector_php(x: &F2Vector) -> Result<Vec<f64>> {
    let mut s = StateVector::cat(x.len())?;
    for q in x.ones_indices() {
        s.s(q);
    }
    for q in 0..x.len() {
        s.h(q);
    }
    Ok(s.probabilities())
}

fn pbp_phases(x: &PbpInput) -> Vec<u8> {
    match x {
        PbpInput::Bits(b) => b.iter().map(u8::from).collect(),
        PbpInput::Trits(t) => t.entries().to_vec(),
    }
}

/// Output law of the rotated-cat circuit: phase `omega^{x_i}` on qubit `i`,
/// `omega = e^{2 pi i / 3}`, then Hadamards.
pub fn statevector_pbp_law(x: &PbpInput) -> Result<Vec<f64>> {
    let phases = pbp_phases(x);
    let mut s = StateVector::cat(phases.len())?;
    for (q, &k) in phases.iter().enumerate() {
        if k != 0 {
            s.phase(q, 2.0 * PI * f64::from(k) / 3.0);
        }
    }
    for q in 0..phases.len() {
        s.h(q);
    }
    Ok(s.probabilities())
}

/// Probability that the rotated-cat circuit's output passes `verify_pbp`.
pub fn statevector_pbp(x: &PbpInput) -> Result<f64> {
    let want_odd = x.weight() % 3 != 0;
    Ok(statevector_pbp_law(x)?
        .iter()
        .enumerate()
        .filter(|(y, _)| (y.count_ones() % 2 == 1) == want_odd)
        .map(|(_, p)| p)
        .sum())
}

/// Joint `(y, d)` law of the literal relaxed-parity-halving circuit: vertex
/// qubits `0..|V|`, edge qubit `e` at `|V| + e`.
pub fn statevector_rphp(g: &Graph, x: &F2Vector) -> Result<Vec<f64>> {
    let nv = g.vertex_count();
    if x.len() != nv {
        return Err(shape(format!("input has {} bits for {nv} vertices", x.len())));
    }
    let mut s = StateVector::zero(nv + g.edge_count())?;
    for v in 0..nv {
        s.h(v);
    }
    for layer in &cnot_layers(g).layers {
        for c in layer {
            s.cnot(c.vertex, nv + c.edge);
        }
    }
    for v in x.ones_indices() {
        s.s(v);
    }
    for v in 0..nv {
        s.h(v);
    }
    Ok(s.probabilities())
}
