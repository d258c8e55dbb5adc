//! Matter and gauge-field configurations and the fields derived from them.

use super::expr::{FieldExpr, VectorField};

/// Complex matter field `ψ`.
#[derive(Debug, Clone)]
pub struct MatterConfig {
    pub psi: FieldExpr,
}

impl MatterConfig {
    pub fn new(psi: FieldExpr) -> Self {
        Self { psi }
    }

    pub fn vacuum() -> Self {
        Self::new(FieldExpr::zero())
    }
}

/// Real gauge potentials `(A₀, A)`.
#[derive(Debug, Clone)]
pub struct GaugeConfig {
    pub a0: FieldExpr,
    pub avec: VectorField,
}

impl GaugeConfig {
    pub fn new(a0: FieldExpr, avec: VectorField) -> Self {
        Self { a0, avec }
    }

    pub fn zero() -> Self {
        Self::new(FieldExpr::zero(), FieldExpr::zero_vector())
    }
}

/// `E = ∇A₀ − ∂₀A`.
pub fn derive_e(a: &GaugeConfig) -> VectorField {
    std::array::from_fn(|i| a.a0.derivative(i + 1) - a.avec[i].derivative(0))
}

/// `B = (1/c) ∇×A`.
pub fn derive_b(a: &GaugeConfig, c: f64) -> VectorField {
    std::array::from_fn(|i| {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        (a.avec[k].derivative(j + 1) - a.avec[j].derivative(k + 1)).scale_re(1.0 / c)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::polynomial::Polynomial;

    fn poly(terms: &[([u8; 4], f64)]) -> FieldExpr {
        FieldExpr::polynomial(Polynomial::from_terms(terms.iter().copied())).unwrap()
    }

    fn values(v: &VectorField, x: &[f64; 4]) -> [f64; 3] {
        std::array::from_fn(|i| v[i].value(x).unwrap().re)
    }

    #[test]
    fn uniform_electric_field() {
        let a = GaugeConfig::new(poly(&[([0, 1, 0, 0], 1.0)]), FieldExpr::zero_vector());
        let x = [0.3, 1.0, -2.0, 0.5];
        assert_eq!(values(&derive_e(&a), &x), [1.0, 0.0, 0.0]);
        assert_eq!(values(&derive_b(&a, 1.0), &x), [0.0, 0.0, 0.0]);
    }

    #[test]
    fn uniform_magnetic_field() {
        let a = GaugeConfig::new(
            FieldExpr::zero(),
            [
                poly(&[([0, 0, 1, 0], -1.0)]),
                poly(&[([0, 1, 0, 0], 1.0)]),
                FieldExpr::zero(),
            ],
        );
        let x = [0.0, 0.4, 0.9, -1.0];
        assert_eq!(values(&derive_b(&a, 1.0), &x), [0.0, 0.0, 2.0]);
        assert_eq!(values(&derive_e(&a), &x), [0.0, 0.0, 0.0]);
    }

    #[test]
    fn time_dependent_vector_potential() {
        let a = GaugeConfig::new(
            FieldExpr::zero(),
            [poly(&[([1, 0, 0, 0], 1.0)]), FieldExpr::zero(), FieldExpr::zero()],
        );
        assert_eq!(values(&derive_e(&a), &[2.0, 0.0, 0.0, 0.0]), [-1.0, 0.0, 0.0]);
    }
}
