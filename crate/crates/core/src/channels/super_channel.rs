use super::KrausChannel;
use crate::error::{QgravError, Result};
use crate::qmat::{ComplexMatrix, DensityOperator};

/// `ρ ↦ ½ N₀(ρ) ⊗ |0⟩⟨0|_flag + ½ N₁(ρ) ⊗ |1⟩⟨1|_flag`.
#[derive(Debug, Clone)]
pub struct SuperChannel {
    pub branch0: KrausChannel,
    pub branch1: KrausChannel,
    pub flag_slot: String,
}

impl SuperChannel {
    pub fn new(branch0: KrausChannel, branch1: KrausChannel, flag_slot: &str) -> Result<Self> {
        if branch0.d_in() != branch1.d_in() || branch0.d_out() != branch1.d_out() {
            return Err(QgravError::DimensionMismatch(
                "branches must share dimensions".into(),
            ));
        }
        Ok(Self {
            branch0,
            branch1,
            flag_slot: flag_slot.to_owned(),
        })
    }

    /// Kraus form: `(1/√2) K ⊗ |b⟩` for every Kraus operator `K` of branch `b`.
    pub fn to_kraus(&self) -> KrausChannel {
        let flag = |bit: usize| {
            let mut col = ComplexMatrix::zeros(2, 1);
            col[(bit, 0)] = num_complex::Complex64::new(1.0, 0.0);
            col
        };
        let ops = [(&self.branch0, 0), (&self.branch1, 1)]
            .into_iter()
            .flat_map(|(branch, bit)| {
                let f = flag(bit);
                branch
                    .kraus_ops()
                    .iter()
                    .map(move |k| k.kron(&f).scale_real(std::f64::consts::FRAC_1_SQRT_2))
            })
            .collect();
        KrausChannel::new(ops).expect("branch weights sum to one")
    }

    /// Output on the input slots followed by the flag slot. Requires a
    /// dimension-preserving branch.
    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        if self.branch0.d_out() != rho.dim() {
            return Err(QgravError::DimensionMismatch(
                "super channel apply needs matching input and output slots".into(),
            ));
        }
        let out = self.to_kraus().apply_matrix(rho.matrix())?;
        let mut slots = rho.slots().to_vec();
        slots.push(self.flag_slot.clone());
        DensityOperator::new_unit_trace(out, &slots, rho.tolerance().max(super::COMPLETENESS_TOL))
    }

    /// Discarding the flag leaves `½ N₀ + ½ N₁`.
    pub fn trace_flag(&self) -> KrausChannel {
        KrausChannel::mixture(&[(0.5, &self.branch0), (0.5, &self.branch1)]).expect("equal weights")
    }
}

/// Post-composes `d0` on branch 0 and `d1` on branch 1.
pub fn super_channel_compose(
    s: &SuperChannel,
    d0: &KrausChannel,
    d1: &KrausChannel,
) -> Result<SuperChannel> {
    SuperChannel::new(s.branch0.then(d0)?, s.branch1.then(d1)?, &s.flag_slot)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{anti_degradable_channel, degrading_map, AntiDegradableParams};
    use crate::qmat::partial_trace;
    use crate::random::random_density;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn flag_marginal_is_uniform() {
        let a = anti_degradable_channel(&AntiDegradableParams::new(0.3, 1.2)).unwrap();
        let b = degrading_map();
        let s = SuperChannel::new(a, b, "F").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let rho = random_density(&mut rng, &["A"]);
        let out = s.apply(&rho).unwrap();
        assert_eq!(out.slots(), ["A", "F"]);
        let flag = partial_trace(&out, &["A"]).unwrap();
        assert!(flag
            .matrix()
            .approx_eq(&ComplexMatrix::identity(2).scale_real(0.5), 1e-14));
    }

    #[test]
    fn composing_the_complement_side_reproduces_direct_construction() {
        let n1 = anti_degradable_channel(&AntiDegradableParams::new(0.7, 2.1)).unwrap();
        let n2 = anti_degradable_channel(&AntiDegradableParams::new(1.9, 0.2)).unwrap();
        let d = degrading_map();
        let env_side = SuperChannel::new(n1.clone(), n2.clone(), "G").unwrap();
        let composed = super_channel_compose(&env_side, &d, &d).unwrap();
        let direct = SuperChannel::new(n1.then(&d).unwrap(), n2.then(&d).unwrap(), "G").unwrap();
        assert!(composed.to_kraus().action_distance(&direct.to_kraus()) < 1e-12);
    }

    #[test]
    fn tracing_flag_gives_mixture() {
        let n1 = anti_degradable_channel(&AntiDegradableParams::new(0.4, 0.9)).unwrap();
        let n2 = degrading_map();
        let s = SuperChannel::new(n1.clone(), n2.clone(), "F").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let rho = random_density(&mut rng, &["A"]);
        let reduced = partial_trace(&s.apply(&rho).unwrap(), &["F"]).unwrap();
        let expected = &n1.apply_matrix(rho.matrix()).unwrap().scale_real(0.5)
            + &n2.apply_matrix(rho.matrix()).unwrap().scale_real(0.5);
        assert!(reduced.matrix().approx_eq(&expected, 1e-14));
        assert!(
            s.trace_flag()
                .action_distance(&KrausChannel::mixture(&[(0.5, &n1), (0.5, &n2)]).unwrap())
                < 1e-15
        );
    }
}
