use crate::error::{Error, Result};
use crate::scalar::Real;

/// A homogeneous bar segment: thermal conductivity `k` in W/(m C) and
/// thermal diffusivity `alpha2` (the squared diffusion coefficient) in m^2/s.
#[derive(Debug, Clone, PartialEq)]
pub struct Material<R: Real> {
    name: String,
    k: R,
    alpha2: R,
}

impl<R: Real> Material<R> {
    pub fn new(name: impl Into<String>, k: R, alpha2: R) -> Result<Self> {
        let name = name.into();
        if !(k.is_finite() && k > R::zero()) {
            return Err(Error::InvalidConductivity {
                name,
                value: k.as_f64(),
            });
        }
        if !(alpha2.is_finite() && alpha2 > R::zero()) {
            return Err(Error::InvalidDiffusivity {
                name,
                value: alpha2.as_f64(),
            });
        }
        Ok(Self { name, k, alpha2 })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Thermal conductivity, W/(m C).
    pub fn k(&self) -> R {
        self.k
    }

    /// Thermal diffusivity alpha^2, m^2/s.
    pub fn alpha2(&self) -> R {
        self.alpha2
    }
}

/// (symbol, k, alpha2) for the built-in metals.
const BUILTINS: [(&str, f64, f64); 7] = [
    ("Pb", 35.0, 0.23673e-4),
    ("Ni", 70.0, 0.22660e-4),
    ("Fe", 73.0, 0.20451e-4),
    ("Mg", 156.0, 0.88300e-4),
    ("Al", 204.0, 0.84010e-4),
    ("Cu", 386.0, 1.12530e-4),
    ("Ag", 419.0, 1.70140e-4),
];

/// The built-in material table: seven common metals at room temperature.
pub fn builtin_materials<R: Real>() -> Vec<Material<R>> {
    BUILTINS
        .iter()
        .map(|&(name, k, a2)| {
            Material::new(name, R::lit(k), R::lit(a2)).expect("built-in table entries are valid")
        })
        .collect()
}

/// Looks up a built-in material by its case-sensitive chemical symbol.
pub fn builtin<R: Real>(name: &str) -> Option<Material<R>> {
    BUILTINS
        .iter()
        .find(|&&(n, _, _)| n == name)
        .map(|&(n, k, a2)| {
            Material::new(n, R::lit(k), R::lit(a2)).expect("built-in table entries are valid")
        })
}
