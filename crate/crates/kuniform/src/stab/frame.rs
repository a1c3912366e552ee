use super::gates::Clifford;
use super::pauli::PauliString;

/// An accumulated Pauli error relative to the noiseless reference run,
/// together with the measurement outcomes it has flipped so far.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PauliFrame {
    pub error: PauliString,
    /// Outcome flips indexed by measurement number.
    pub flipped_measurements: Vec<bool>,
}

impl PauliFrame {
    pub fn new(n: usize) -> Self {
        PauliFrame {
            error: PauliString::identity(n),
            flipped_measurements: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.error.n()
    }

    /// Conjugates the error through a Clifford gate.
    #[inline]
    pub fn apply(&mut self, gate: &Clifford) {
        gate.conjugate(&mut self.error);
    }

    /// Multiplies a fault into the frame.
    pub fn inject(&mut self, fault: &PauliString) {
        let (_, p) = fault.mul_with_phase(&self.error);
        self.error = p;
    }

    /// Flips a single qubit's component by a Pauli letter.
    #[inline]
    pub fn inject_single(&mut self, qubit: usize, p: char) {
        match p {
            'X' => self.error.x.flip(qubit),
            'Z' => self.error.z.flip(qubit),
            'Y' => {
                self.error.x.flip(qubit);
                self.error.z.flip(qubit);
            }
            _ => {}
        }
    }

    /// Records a Z-basis measurement of `qubit`; returns whether it flipped.
    pub fn measure_z(&mut self, qubit: usize) -> bool {
        let f = self.error.x.get(qubit);
        self.flipped_measurements.push(f);
        f
    }

    /// Records an X-basis measurement of `qubit`; returns whether it flipped.
    pub fn measure_x(&mut self, qubit: usize) -> bool {
        let f = self.error.z.get(qubit);
        self.flipped_measurements.push(f);
        f
    }

    /// Parity of the recorded flips at the given measurement indices.
    pub fn parity(&self, measurements: &[usize]) -> bool {
        measurements
            .iter()
            .fold(false, |acc, &m| acc ^ self.flipped_measurements[m])
    }
}
