//! Spatial antenna correlation (Kronecker model) for linear and
//! rectangular arrays.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::linalg::{kron, psd_sqrt, to_complex, CMatrix, RMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum ArrayKind {
    Ula,
    Ura { nx: usize, ny: usize },
}

impl ArrayKind {
    pub fn label(&self) -> &'static str {
        match self {
            ArrayKind::Ula => "ULA",
            ArrayKind::Ura { .. } => "URA",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationSpec {
    pub array: ArrayKind,
    pub rho: f64,
}

impl CorrelationSpec {
    /// Correlation matrix for an array of `n` antennas.
    pub fn matrix(&self, n: usize) -> Result<SpatialCorrelationMatrix> {
        match self.array {
            ArrayKind::Ula => ula_correlation(self.rho, n),
            ArrayKind::Ura { nx, ny } => {
                if nx * ny != n {
                    return Err(SimError::invalid(
                        "geometry",
                        format!("URA {nx}x{ny} has {} elements, array has {n}", nx * ny),
                    ));
                }
                ura_correlation(self)
            }
        }
    }
}

/// Real symmetric correlation matrix with unit diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialCorrelationMatrix(pub RMatrix);

impl SpatialCorrelationMatrix {
    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &RMatrix {
        &self.0
    }

    /// Principal square root (negative eigenvalues within tolerance clipped).
    pub fn sqrt(&self) -> Result<RMatrix> {
        psd_sqrt(&self.0)
    }

    pub fn is_identity(&self) -> bool {
        self.0 == RMatrix::identity(self.dim(), self.dim())
    }

    pub fn mean_off_diagonal(&self) -> f64 {
        let n = self.dim();
        if n < 2 {
            return 0.0;
        }
        let sum: f64 = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .map(|(i, j)| self.0[(i, j)].abs())
            .sum();
        sum / (n * (n - 1)) as f64
    }
}

fn check_rho(rho: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(SimError::invalid("rho", format!("{rho} is outside [0, 1]")));
    }
    Ok(())
}

/// Toeplitz ULA correlation: entry `(i, j)` is `rho^((i - j)^2)`.
pub fn ula_correlation(rho: f64, n: usize) -> Result<SpatialCorrelationMatrix> {
    check_rho(rho)?;
    if n == 0 {
        return Err(SimError::invalid("n", "need at least one antenna"));
    }
    Ok(SpatialCorrelationMatrix(DMatrix::from_fn(n, n, |i, j| {
        let d = i.abs_diff(j) as i32;
        rho.powi(d * d)
    })))
}

/// URA correlation `R_x (x) R_y` for an `nx` by `ny` planar array.
pub fn ura_correlation(spec: &CorrelationSpec) -> Result<SpatialCorrelationMatrix> {
    let ArrayKind::Ura { nx, ny } = spec.array else {
        return Err(SimError::invalid("array_kind", "URA correlation requested for a linear array"));
    };
    let rx = ula_correlation(spec.rho, nx)?;
    let ry = ula_correlation(spec.rho, ny)?;
    Ok(SpatialCorrelationMatrix(kron(&rx.0, &ry.0)))
}

/// Per-subcarrier channel matrices (`N_r x N_t` each).
#[derive(Debug, Clone, PartialEq)]
pub struct MimoChannelRealization {
    pub per_subcarrier: Vec<CMatrix>,
    pub correlated: bool,
}

impl MimoChannelRealization {
    pub fn num_subcarriers(&self) -> usize {
        self.per_subcarrier.len()
    }
}

/// Precomputed square roots of the transmit and receive correlation
/// matrices; `apply` maps an i.i.d. matrix `G` to `sqrt(R_r) G sqrt(R_t)^H`.
#[derive(Debug, Clone)]
pub struct CorrelationRoots {
    rx_sqrt: Option<CMatrix>,
    tx_sqrt_h: Option<CMatrix>,
}

impl CorrelationRoots {
    pub fn new(rt: &SpatialCorrelationMatrix, rr: &SpatialCorrelationMatrix) -> Result<Self> {
        let root = |r: &SpatialCorrelationMatrix| -> Result<Option<CMatrix>> {
            if r.is_identity() {
                Ok(None)
            } else {
                Ok(Some(to_complex(&r.sqrt()?)))
            }
        };
        Ok(CorrelationRoots {
            rx_sqrt: root(rr)?,
            tx_sqrt_h: root(rt)?.map(|m| m.adjoint()),
        })
    }

    pub fn identity() -> Self {
        CorrelationRoots { rx_sqrt: None, tx_sqrt_h: None }
    }

    pub fn is_identity(&self) -> bool {
        self.rx_sqrt.is_none() && self.tx_sqrt_h.is_none()
    }

    pub fn apply(&self, g: &CMatrix) -> CMatrix {
        let left = match &self.rx_sqrt {
            Some(r) => r * g,
            None => g.clone(),
        };
        match &self.tx_sqrt_h {
            Some(t) => left * t,
            None => left,
        }
    }
}

/// Impose transmit/receive correlation on every subcarrier matrix.
pub fn apply_spatial_correlation(
    g: &[CMatrix],
    rt: &SpatialCorrelationMatrix,
    rr: &SpatialCorrelationMatrix,
) -> Result<MimoChannelRealization> {
    for m in g {
        if m.nrows() != rr.dim() {
            return Err(SimError::DimensionMismatch { expected: rr.dim(), actual: m.nrows() });
        }
        if m.ncols() != rt.dim() {
            return Err(SimError::DimensionMismatch { expected: rt.dim(), actual: m.ncols() });
        }
    }
    let roots = CorrelationRoots::new(rt, rr)?;
    Ok(MimoChannelRealization {
        per_subcarrier: g.iter().map(|m| roots.apply(m)).collect(),
        correlated: !roots.is_identity(),
    })
}
