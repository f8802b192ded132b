use nalgebra::{DMatrix, DVector};

use super::{DensityMatrix, Subsystem, C64};
use crate::error::{Error, Result};

/// Pure state of the bipartite system, amplitudes over the product basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: DVector<C64>,
    dim_g: usize,
    dim_c: usize,
}

impl StateVector {
    /// Wraps amplitudes without rescaling them. Use [`StateVector::normalized`]
    /// for unnormalized input.
    pub fn new(amplitudes: DVector<C64>, dim_g: usize, dim_c: usize) -> Result<Self> {
        if dim_g == 0 || dim_c == 0 {
            return Err(Error::Validation("subsystem dimensions must be positive".into()));
        }
        if amplitudes.len() != dim_g * dim_c {
            return Err(Error::Dimension {
                expected: dim_g * dim_c,
                got: amplitudes.len(),
            });
        }
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::Validation("amplitudes must be finite".into()));
        }
        Ok(Self {
            amplitudes,
            dim_g,
            dim_c,
        })
    }

    pub fn normalized(amplitudes: DVector<C64>, dim_g: usize, dim_c: usize) -> Result<Self> {
        let mut state = Self::new(amplitudes, dim_g, dim_c)?;
        let norm = state.norm_sqr().sqrt();
        if norm == 0.0 {
            return Err(Error::Validation("cannot normalize the zero vector".into()));
        }
        state.amplitudes.unscale_mut(norm);
        Ok(state)
    }

    pub fn from_slice(amplitudes: &[C64], dim_g: usize, dim_c: usize) -> Result<Self> {
        Self::new(DVector::from_column_slice(amplitudes), dim_g, dim_c)
    }

    pub fn basis(index: usize, dim_g: usize, dim_c: usize) -> Result<Self> {
        let n = dim_g * dim_c;
        if index >= n {
            return Err(Error::Validation(format!("basis index {index} out of range 0..{n}")));
        }
        let mut amps = DVector::zeros(n);
        amps[index] = C64::new(1.0, 0.0);
        Self::new(amps, dim_g, dim_c)
    }

    /// Tensor product `gas ⊗ container`.
    pub fn product(gas: &[C64], container: &[C64]) -> Result<Self> {
        let (dg, dc) = (gas.len(), container.len());
        let amps = DVector::from_fn(dg * dc, |k, _| gas[k / dc.max(1)] * container[k % dc.max(1)]);
        Self::new(amps, dg, dc)
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> DVector<C64> {
        self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn dim_g(&self) -> usize {
        self.dim_g
    }

    pub fn dim_c(&self) -> usize {
        self.dim_c
    }

    /// Amplitude of `|i⟩_gas ⊗ |j⟩_container`.
    pub fn amplitude(&self, i: usize, j: usize) -> C64 {
        self.amplitudes[i * self.dim_c + j]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr().sqrt() - 1.0).abs() <= super::NORM_TOLERANCE
    }

    /// Reduced density matrix of one subsystem, computed directly from the
    /// amplitudes without forming the full projector.
    pub fn reduced(&self, keep: Subsystem) -> DensityMatrix {
        let (dg, dc) = (self.dim_g, self.dim_c);
        let psi = &self.amplitudes;
        let m = match keep {
            Subsystem::Gas => {
                let mut m = DMatrix::<C64>::zeros(dg, dg);
                for i in 0..dg {
                    let row_i = &psi.as_slice()[i * dc..(i + 1) * dc];
                    for k in i..dg {
                        let row_k = &psi.as_slice()[k * dc..(k + 1) * dc];
                        let v: C64 = row_i.iter().zip(row_k).map(|(a, b)| a * b.conj()).sum();
                        m[(i, k)] = v;
                        m[(k, i)] = v.conj();
                    }
                }
                m
            }
            Subsystem::Container => {
                let mut m = DMatrix::<C64>::zeros(dc, dc);
                for i in 0..dg {
                    let row = &psi.as_slice()[i * dc..(i + 1) * dc];
                    for j in 0..dc {
                        let a = row[j];
                        for l in j..dc {
                            m[(j, l)] += a * row[l].conj();
                        }
                    }
                }
                for j in 0..dc {
                    m[(j, j)].im = 0.0;
                    for l in (j + 1)..dc {
                        m[(l, j)] = m[(j, l)].conj();
                    }
                }
                m
            }
        };
        DensityMatrix::from_raw(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::testutil::*;
    use crate::qcore::{density_from_state, partial_trace};

    #[test]
    fn rejects_bad_dimensions() {
        let amps = DVector::from_element(5, C64::new(1.0, 0.0));
        assert!(matches!(
            StateVector::new(amps, 2, 3),
            Err(Error::Dimension { expected: 6, got: 5 })
        ));
        assert!(StateVector::new(DVector::zeros(0), 0, 3).is_err());
    }

    #[test]
    fn normalized_has_unit_norm() {
        let mut r = rng(1);
        for _ in 0..20 {
            let s = random_state(&mut r, 3, 5);
            assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        }
        assert!(StateVector::normalized(DVector::zeros(4), 2, 2).is_err());
    }

    #[test]
    fn product_layout_is_gas_major() {
        let g = [C64::new(0.6, 0.0), C64::new(0.0, 0.8)];
        let c = [C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)];
        let s = StateVector::product(&g, &c).unwrap();
        assert_eq!(s.dim_g(), 2);
        assert_eq!(s.dim_c(), 3);
        assert_eq!(s.amplitude(1, 0), C64::new(0.0, 0.8));
        assert_eq!(s.amplitude(0, 2), C64::new(0.0, 0.0));
    }

    #[test]
    fn direct_reduction_matches_partial_trace() {
        let mut r = rng(7);
        for &(dg, dc) in &[(2, 3), (3, 4), (4, 2), (1, 5)] {
            let s = random_state(&mut r, dg, dc);
            let rho = density_from_state(&s).unwrap();
            for keep in [Subsystem::Gas, Subsystem::Container] {
                let a = s.reduced(keep);
                let b = partial_trace(&rho, dg, dc, keep).unwrap();
                assert!(max_abs_diff(a.entries(), b.entries()) < 1e-14);
            }
        }
    }
}
