use crate::error::{Error, Result};
use crate::materials::Material;
use crate::scalar::Real;

/// The full boundary-value problem for a two-material bar.
///
/// A bar of length `L` occupies `[0, L]` with the left material on `(0, l)`
/// and the right material on `(l, L)`. The left end is held at the source
/// temperature `F`, the right end loses heat to the surroundings through a
/// film with coefficient `h` (Robin condition), and the bar starts at the
/// ambient temperature `Ta`. Temperature and heat flux are continuous across
/// the interface at `x = l`.
#[derive(Debug, Clone, PartialEq)]
pub struct BarProblem<R: Real> {
    length: R,
    interface: R,
    left: Material<R>,
    right: Material<R>,
    h: R,
    source: R,
    ambient: R,
}

/// The two dimensionless groups the eigenvalue problem runs on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedRatios<R: Real> {
    /// alpha = sqrt(alpha2_right / alpha2_left), the diffusivity ratio.
    pub alpha: R,
    /// k = k_left / k_right, the conductivity ratio.
    pub k_ratio: R,
}

impl<R: Real> BarProblem<R> {
    /// Validates and assembles a problem description.
    ///
    /// Requires `L > 0`, `0 < l < L`, `h > 0`, and `F > Ta`, all finite.
    pub fn new(
        length: R,
        interface: R,
        left: Material<R>,
        right: Material<R>,
        h: R,
        source: R,
        ambient: R,
    ) -> Result<Self> {
        if !(length.is_finite() && length > R::zero()) {
            return Err(Error::InvalidLength(length.as_f64()));
        }
        if !(interface.is_finite() && interface > R::zero() && interface < length) {
            return Err(Error::InterfaceOutOfRange {
                interface: interface.as_f64(),
                length: length.as_f64(),
            });
        }
        if !(h.is_finite() && h > R::zero()) {
            return Err(Error::InvalidFilmCoefficient(h.as_f64()));
        }
        if !(source.is_finite() && ambient.is_finite() && source > ambient) {
            return Err(Error::SourceNotAboveAmbient {
                source_temperature: source.as_f64(),
                ambient: ambient.as_f64(),
            });
        }
        Ok(Self {
            length,
            interface,
            left,
            right,
            h,
            source,
            ambient,
        })
    }

    /// Builds a problem without validating the temperature ordering.
    ///
    /// Degenerate setups such as `F = Ta` (a bar that stays put) are useful
    /// as fixed-point checks; geometry and material validity are still
    /// enforced.
    pub fn new_allowing_equal_temperatures(
        length: R,
        interface: R,
        left: Material<R>,
        right: Material<R>,
        h: R,
        source: R,
        ambient: R,
    ) -> Result<Self> {
        if source > ambient {
            return Self::new(length, interface, left, right, h, source, ambient);
        }
        if !(source.is_finite() && ambient.is_finite() && source >= ambient) {
            return Err(Error::SourceNotAboveAmbient {
                source_temperature: source.as_f64(),
                ambient: ambient.as_f64(),
            });
        }
        let mut p = Self::new(
            length,
            interface,
            left,
            right,
            h,
            ambient + R::one(),
            ambient,
        )?;
        p.source = source;
        Ok(p)
    }

    /// Bar length `L`, m.
    pub fn length(&self) -> R {
        self.length
    }

    /// Interface position `l`, m.
    pub fn interface(&self) -> R {
        self.interface
    }

    pub fn left(&self) -> &Material<R> {
        &self.left
    }

    pub fn right(&self) -> &Material<R> {
        &self.right
    }

    /// Film coefficient `h` at the right end, W/(m^2 C).
    pub fn h(&self) -> R {
        self.h
    }

    /// Source temperature `F` held at `x = 0`, C.
    pub fn source(&self) -> R {
        self.source
    }

    /// Ambient (and initial) temperature `Ta`, C.
    pub fn ambient(&self) -> R {
        self.ambient
    }

    /// The same bar with the two materials exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            length: self.length,
            interface: self.interface,
            left: self.right.clone(),
            right: self.left.clone(),
            h: self.h,
            source: self.source,
            ambient: self.ambient,
        }
    }

    /// Dimensionless ratios driving the eigenvalue problem.
    pub fn ratios(&self) -> DerivedRatios<R> {
        DerivedRatios {
            alpha: (self.right.alpha2() / self.left.alpha2()).sqrt(),
            k_ratio: self.left.k() / self.right.k(),
        }
    }
}
