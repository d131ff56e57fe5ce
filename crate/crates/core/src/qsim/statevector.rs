use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest register the simulator will allocate.
pub const MAX_QUBITS: usize = 14;

/// Dense state of up to [`MAX_QUBITS`] qubits. Qubit `q` is bit `q` of the
/// basis-state index.
#[derive(Clone, Debug)]
pub struct StateVector {
    qubits: usize,
    amps: Vec<Complex64>,
}

fn check_capacity(qubits: usize) -> Result<()> {
    if qubits > MAX_QUBITS {
        return Err(Error::Capacity {
            what: "statevector qubits",
            got: qubits,
            limit: MAX_QUBITS,
        });
    }
    Ok(())
}

impl StateVector {
    /// `|0...0>`.
    pub fn zero(qubits: usize) -> Result<Self> {
        check_capacity(qubits)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { qubits, amps })
    }

    /// `(|0...0> + |1...1>) / sqrt(2)`.
    pub fn cat(qubits: usize) -> Result<Self> {
        if qubits == 0 {
            return Err(Error::Argument("cat state needs at least one qubit".into()));
        }
        let mut s = Self::zero(qubits)?;
        s.amps[0] = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let last = s.amps.len() - 1;
        s.amps[last] = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Ok(s)
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if !amps.len().is_power_of_two() {
            return Err(Error::Argument(format!("{} amplitudes is not a power of two", amps.len())));
        }
        let qubits = amps.len().trailing_zeros() as usize;
        check_capacity(qubits)?;
        let s = Self { qubits, amps };
        if (s.norm_sqr() - 1.0).abs() > 1e-10 {
            return Err(Error::Argument(format!("state has squared norm {}", s.norm_sqr())));
        }
        Ok(s)
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn check_qubit(&self, q: usize) {
        assert!(q < self.qubits, "qubit {q} out of range ({} qubits)", self.qubits);
    }

    pub fn h(&mut self, q: usize) {
        self.check_qubit(q);
        let bit = 1 << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a, b) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = (a + b) * FRAC_1_SQRT_2;
                self.amps[i | bit] = (a - b) * FRAC_1_SQRT_2;
            }
        }
    }

    /// `diag(1, e^{i theta})` on qubit `q`.
    pub fn phase(&mut self, q: usize, theta: f64) {
        self.check_qubit(q);
        let bit = 1 << q;
        let w = Complex64::from_polar(1.0, theta);
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & bit != 0 {
                *a *= w;
            }
        }
    }

    /// `diag(1, i)` on qubit `q`.
    pub fn s(&mut self, q: usize) {
        self.check_qubit(q);
        let bit = 1 << q;
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & bit != 0 {
                *a *= Complex64::i();
            }
        }
    }

    pub fn cnot(&mut self, control: usize, target: usize) {
        self.check_qubit(control);
        self.check_qubit(target);
        assert_ne!(control, target, "CNOT control and target coincide");
        let (c, t) = (1 << control, 1 << target);
        for i in 0..self.amps.len() {
            if i & c != 0 && i & t == 0 {
                self.amps.swap(i, i | t);
            }
        }
    }

    /// Born-rule probabilities of measuring every qubit.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }
}

/// `0.5 * sum |p_i - q_i|`.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    assert_eq!(p.len(), q.len(), "distributions over different supports");
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}
