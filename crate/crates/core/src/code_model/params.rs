use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameters `(γ, κ, z, L, m, M)` of an MD-SC code family, plus an optional depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CodeParams {
    /// Rows of the base matrix (VN degree).
    pub gamma: usize,
    /// Columns of the base matrix (CN degree).
    pub kappa: usize,
    /// Circulant size.
    pub z: usize,
    /// Coupling length (number of replicas).
    #[serde(rename = "L")]
    pub coupling: usize,
    /// Memory; there are `m + 1` component matrices.
    pub m: usize,
    /// Number of auxiliary matrices including the diagonal one.
    #[serde(rename = "M")]
    pub aux: usize,
    /// Relocations restricted to auxiliary indices `0..depth`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
}

impl CodeParams {
    pub fn new(gamma: usize, kappa: usize, z: usize, coupling: usize, m: usize, aux: usize) -> Result<Self> {
        let p = Self::permissive(gamma, kappa, z, coupling, m, aux)?;
        p.validate()?;
        Ok(p)
    }

    /// Only checks positivity. Used for toy constructions (tiny base matrices)
    /// that fall outside the code-design regime.
    pub fn permissive(gamma: usize, kappa: usize, z: usize, coupling: usize, m: usize, aux: usize) -> Result<Self> {
        if gamma == 0 || kappa == 0 || z == 0 || coupling == 0 || aux == 0 {
            return Err(Error::InvalidParams(format!(
                "gamma={gamma}, kappa={kappa}, z={z}, L={coupling}, M={aux} must all be positive"
            )));
        }
        Ok(CodeParams { gamma, kappa, z, coupling, m, aux, depth: None })
    }

    pub fn with_depth(mut self, depth: usize) -> Result<Self> {
        if depth == 0 || depth > self.aux {
            return Err(Error::InvalidParams(format!("depth {depth} not in 1..={}", self.aux)));
        }
        self.depth = Some(depth);
        Ok(self)
    }

    /// Checks the design-regime invariants.
    pub fn validate(&self) -> Result<()> {
        if self.gamma < 3 {
            return Err(Error::InvalidParams(format!("gamma={} must be at least 3", self.gamma)));
        }
        if self.kappa <= self.gamma {
            return Err(Error::InvalidParams(format!("kappa={} must exceed gamma={}", self.kappa, self.gamma)));
        }
        if self.z < 2 {
            return Err(Error::InvalidParams(format!("z={} must be at least 2", self.z)));
        }
        if self.coupling == 0 || self.aux == 0 {
            return Err(Error::InvalidParams("L and M must be positive".into()));
        }
        if let Some(d) = self.depth {
            if d == 0 || d > self.aux {
                return Err(Error::InvalidParams(format!("depth {d} not in 1..={}", self.aux)));
            }
        }
        Ok(())
    }

    /// Auxiliary indices usable by relocations.
    pub fn relocation_bound(&self) -> usize {
        self.depth.unwrap_or(self.aux)
    }

    /// Number of columns of the lifted MD parity-check matrix.
    pub fn length(&self) -> usize {
        self.aux * self.coupling * self.kappa * self.z
    }

    /// Number of rows of the lifted MD parity-check matrix.
    pub fn check_count(&self) -> usize {
        self.aux * (self.coupling + self.m) * self.gamma * self.z
    }

    pub fn design_rate(&self) -> Rational {
        design_rate(self)
    }

    /// Whether `L` is large enough for the cycle-count forecast to be meaningful.
    pub fn forecast_valid(&self) -> bool {
        self.coupling > 2 * self.m + 1
    }
}

/// An exact fraction `num / den` with `den > 0`, in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rational {
    pub num: i64,
    pub den: i64,
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()).max(1) as i64;
        let s = if den < 0 { -1 } else { 1 };
        Rational { num: s * num / g, den: s * den / g }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl std::fmt::Display for Rational {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// `1 − (L+m)γ / (Lκ)`; the number of auxiliary matrices cancels.
pub fn design_rate(p: &CodeParams) -> Rational {
    let cols = (p.coupling * p.kappa) as i64;
    let rows = ((p.coupling + p.m) * p.gamma) as i64;
    Rational::new(cols - rows, cols)
}
