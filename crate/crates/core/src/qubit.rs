//! Real-amplitude qubit genes and the quantum chromosomes built from them.

use rand::Rng;

use crate::chromosome::BinaryChromosome;
use crate::error::{Error, Result};

/// Tolerance on `α² + β² = 1` accepted by constructors.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Largest chromosome length for which a full sampling distribution is built.
pub const SAMPLING_BITS_CAP: usize = 20;

/// A qubit gene `α|0⟩ + β|1⟩` with real amplitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitGene {
    alpha: f64,
    beta: f64,
}

impl QubitGene {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let norm = alpha * alpha + beta * beta;
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { alpha, beta });
        }
        Ok(Self { alpha, beta })
    }

    /// Gene at angle `phi` from the `|0⟩` axis: `(cos φ, sin φ)`.
    pub fn from_angle(phi: f64) -> Self {
        let (s, c) = phi.sin_cos();
        Self { alpha: c, beta: s }
    }

    /// `(√2/2)|0⟩ + (√2/2)|1⟩`
    pub fn superposition() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self { alpha: h, beta: h }
    }

    pub fn zero() -> Self {
        Self {
            alpha: 1.0,
            beta: 0.0,
        }
    }

    pub fn one() -> Self {
        Self {
            alpha: 0.0,
            beta: 1.0,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn prob_zero(&self) -> f64 {
        self.alpha * self.alpha
    }

    pub fn prob_one(&self) -> f64 {
        self.beta * self.beta
    }

    pub fn norm_sqr(&self) -> f64 {
        self.alpha * self.alpha + self.beta * self.beta
    }

    /// Applies the rotation gate `U(θ)`.
    pub fn rotate(&self, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self {
            alpha: self.alpha * c - self.beta * s,
            beta: self.alpha * s + self.beta * c,
        }
    }

    /// Samples a bit: 1 with probability β².
    pub fn observe<R: Rng + ?Sized>(&self, rng: &mut R) -> bool {
        rng.random::<f64>() < self.prob_one()
    }
}

/// Free-function form of [`QubitGene::rotate`].
pub fn rotate(g: QubitGene, theta: f64) -> QubitGene {
    g.rotate(theta)
}

/// An ordered row of qubit genes; encodes a product distribution over bitstrings.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumChromosome {
    genes: Vec<QubitGene>,
}

impl QuantumChromosome {
    pub fn new(genes: Vec<QubitGene>) -> Self {
        Self { genes }
    }

    pub fn superposition(m: usize) -> Self {
        Self {
            genes: vec![QubitGene::superposition(); m],
        }
    }

    /// The deterministic chromosome that always observes `c`.
    pub fn classical(c: &BinaryChromosome) -> Self {
        Self {
            genes: c
                .bits()
                .iter()
                .map(|&b| {
                    if b {
                        QubitGene::one()
                    } else {
                        QubitGene::zero()
                    }
                })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.genes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.genes.is_empty()
    }

    pub fn genes(&self) -> &[QubitGene] {
        &self.genes
    }

    pub fn genes_mut(&mut self) -> &mut [QubitGene] {
        &mut self.genes
    }

    pub fn observe<R: Rng + ?Sized>(&self, rng: &mut R) -> BinaryChromosome {
        BinaryChromosome::new(self.genes.iter().map(|g| g.observe(rng)).collect())
    }

    /// Probability of observing exactly `c`.
    pub fn probability_of(&self, c: &BinaryChromosome) -> Result<f64> {
        if c.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                actual: c.len(),
            });
        }
        Ok(self
            .genes
            .iter()
            .zip(c.bits())
            .map(|(g, &b)| if b { g.prob_one() } else { g.prob_zero() })
            .product())
    }

    /// Probabilities of all `2^m` bitstrings, indexed by their big-endian value.
    pub fn sampling_distribution(&self) -> Result<Vec<f64>> {
        let m = self.len();
        if m > SAMPLING_BITS_CAP {
            return Err(Error::TooLarge {
                what: "sampling distribution bit length",
                size: m,
                cap: SAMPLING_BITS_CAP,
            });
        }
        // Grow the table one gene at a time; appending a gene doubles the index space
        // with the new bit in the least significant position.
        let mut dist = Vec::with_capacity(1 << m);
        dist.push(1.0);
        for g in &self.genes {
            let (p0, p1) = (g.prob_zero(), g.prob_one());
            dist = dist.iter().flat_map(|&p| [p * p0, p * p1]).collect();
        }
        Ok(dist)
    }
}

/// Free-function form of [`QuantumChromosome::observe`].
pub fn observe<R: Rng + ?Sized>(q: &QuantumChromosome, rng: &mut R) -> BinaryChromosome {
    q.observe(rng)
}

/// Free-function form of [`QuantumChromosome::sampling_distribution`].
pub fn sampling_distribution(q: &QuantumChromosome) -> Result<Vec<f64>> {
    q.sampling_distribution()
}

/// `Q = {q₁, …, q_N}` with a shared chromosome length.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumPopulation {
    chromosomes: Vec<QuantumChromosome>,
}

impl QuantumPopulation {
    pub fn new(chromosomes: Vec<QuantumChromosome>) -> Result<Self> {
        if let Some(first) = chromosomes.first() {
            let m = first.len();
            if let Some(bad) = chromosomes.iter().find(|q| q.len() != m) {
                return Err(Error::LengthMismatch {
                    expected: m,
                    actual: bad.len(),
                });
            }
        }
        Ok(Self { chromosomes })
    }

    /// `n` chromosomes of `m` genes, every gene in uniform superposition.
    pub fn superposition(n: usize, m: usize) -> Self {
        Self {
            chromosomes: vec![QuantumChromosome::superposition(m); n],
        }
    }

    pub fn len(&self) -> usize {
        self.chromosomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chromosomes.is_empty()
    }

    pub fn chromosome_length(&self) -> usize {
        self.chromosomes.first().map_or(0, |q| q.len())
    }

    pub fn chromosomes(&self) -> &[QuantumChromosome] {
        &self.chromosomes
    }

    pub fn chromosomes_mut(&mut self) -> &mut [QuantumChromosome] {
        &mut self.chromosomes
    }

    pub fn observe<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<BinaryChromosome> {
        self.chromosomes.iter().map(|q| q.observe(rng)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn rotation_examples() {
        let g = QubitGene::zero().rotate(FRAC_PI_2);
        assert!(g.alpha().abs() < 1e-12 && (g.beta() - 1.0).abs() < 1e-12);
        let g = QubitGene::superposition().rotate(FRAC_PI_4);
        assert!(g.alpha().abs() < 1e-12 && (g.beta() - 1.0).abs() < 1e-12);
        let h = QubitGene::from_angle(0.3);
        assert_eq!(h.rotate(0.0), h);
    }

    #[test]
    fn constructor_checks_norm() {
        assert!(QubitGene::new(0.5, 0.75f64.sqrt()).is_ok());
        assert!(matches!(
            QubitGene::new(0.5, 0.5),
            Err(Error::NotNormalized { .. })
        ));
        assert!(QubitGene::new(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn deterministic_genes_observe_deterministically() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            assert!(!QubitGene::zero().observe(&mut rng));
            assert!(QubitGene::one().observe(&mut rng));
        }
    }

    #[test]
    fn biased_gene_frequency() {
        let g = QubitGene::new(0.5, 0.75f64.sqrt()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let ones = (0..10_000).filter(|_| g.observe(&mut rng)).count();
        let freq = ones as f64 / 10_000.0;
        assert!((freq - 0.75).abs() < 0.02, "{freq}");
    }

    #[test]
    fn superposition_distribution_is_uniform() {
        let d = QuantumChromosome::superposition(5)
            .sampling_distribution()
            .unwrap();
        assert_eq!(d.len(), 32);
        for p in d {
            assert!((p - 1.0 / 32.0).abs() < 1e-15);
        }
    }

    #[test]
    fn first_gene_zero_covers_lower_half() {
        let mut q = QuantumChromosome::superposition(5);
        q.genes_mut()[0] = QubitGene::zero();
        let d = q.sampling_distribution().unwrap();
        assert!(d[..16].iter().all(|&p| (p - 1.0 / 16.0).abs() < 1e-15));
        assert!(d[16..].iter().all(|&p| p == 0.0));
    }

    #[test]
    fn last_gene_zero_gives_even_comb() {
        let mut q = QuantumChromosome::superposition(5);
        q.genes_mut()[4] = QubitGene::zero();
        let d = q.sampling_distribution().unwrap();
        for (v, p) in d.iter().enumerate() {
            if v % 2 == 0 {
                assert!((p - 1.0 / 16.0).abs() < 1e-15);
            } else {
                assert_eq!(*p, 0.0);
            }
        }
    }

    #[test]
    fn distribution_matches_probability_of() {
        let q = QuantumChromosome::new(
            (0..6)
                .map(|i| QubitGene::from_angle(0.2 * i as f64))
                .collect(),
        );
        let d = q.sampling_distribution().unwrap();
        for (v, p) in d.iter().enumerate() {
            let c = BinaryChromosome::from_value(v as u64, 6);
            assert!((q.probability_of(&c).unwrap() - p).abs() < 1e-15);
        }
    }

    #[test]
    fn sampling_cap() {
        assert!(matches!(
            QuantumChromosome::superposition(21).sampling_distribution(),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn population_requires_uniform_length() {
        let r = QuantumPopulation::new(vec![
            QuantumChromosome::superposition(3),
            QuantumChromosome::superposition(4),
        ]);
        assert!(matches!(
            r,
            Err(Error::LengthMismatch {
                expected: 3,
                actual: 4
            })
        ));
    }
}
