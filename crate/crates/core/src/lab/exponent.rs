//! Exponents of `H` in the known bounds for each counted quantity, and the
//! reference density of the scalar multiplication table.

use crate::error::{Error, Result};
use num_rational::Ratio;
use std::fmt;
use std::str::FromStr;

/// Slope slack standing in for the unspecified `o(1)` terms.
pub const DEFAULT_SLACK: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quantity {
    /// `#T_m(M, C)` for nonsingular `C`.
    TmNonsingularC,
    /// `#T_2(M, C)` for singular `C != 0`.
    TmSingularCM2,
    /// `#T_m(M, C)` for singular `C != 0`, `m >= 3`.
    TmSingularCM3Plus,
    /// `#T_m(M, 0)`.
    TmZeroC,
    /// `#T_m(M*)`.
    PairsNonsingular,
    /// `#T_2(M)`.
    PairsAllM2,
    /// `#T_m(M)`, `m >= 3`.
    PairsAllM3Plus,
    /// `#W_{m,n}` (lower bound).
    WLower,
    /// The box itself, `(2H+1)^(n^2)`.
    Box,
    /// Singular box members.
    DetZero,
    /// Box members of rank exactly `k`.
    RankK,
}

impl Quantity {
    pub const ALL: [Quantity; 11] = [
        Quantity::TmNonsingularC,
        Quantity::TmSingularCM2,
        Quantity::TmSingularCM3Plus,
        Quantity::TmZeroC,
        Quantity::PairsNonsingular,
        Quantity::PairsAllM2,
        Quantity::PairsAllM3Plus,
        Quantity::WLower,
        Quantity::Box,
        Quantity::DetZero,
        Quantity::RankK,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Quantity::TmNonsingularC => "T_m_nonsingular_C",
            Quantity::TmSingularCM2 => "T_m_singular_C_m2",
            Quantity::TmSingularCM3Plus => "T_m_singular_C_m3plus",
            Quantity::TmZeroC => "T_m_zero_C",
            Quantity::PairsNonsingular => "pairs_nonsingular",
            Quantity::PairsAllM2 => "pairs_all_m2",
            Quantity::PairsAllM3Plus => "pairs_all_m3plus",
            Quantity::WLower => "W_lower",
            Quantity::Box => "box",
            Quantity::DetZero => "det_zero",
            Quantity::RankK => "rank_k",
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Quantity::ALL
            .into_iter()
            .find(|q| q.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown quantity {s:?}")))
    }
}

/// Which side of the count the exponent constrains.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Upper,
    Lower,
    /// Matching upper and lower exponents (up to `o(1)` or a log factor).
    TwoSided,
    /// Exact power law.
    Exact,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogCorrection {
    None,
    /// An extra `log H` factor.
    Log,
    /// The multiplication-table density correction.
    Kou,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReferenceBound {
    pub quantity: Quantity,
    pub m: u32,
    pub n: u32,
    pub k: Option<u32>,
}

impl ReferenceBound {
    pub fn new(quantity: Quantity, m: u32, n: u32, k: Option<u32>) -> Self {
        ReferenceBound { quantity, m, n, k }
    }

    pub fn exponent(&self) -> Result<Ratio<i64>> {
        theoretical_exponent(self)
    }

    pub fn direction(&self) -> Direction {
        match self.quantity {
            Quantity::TmNonsingularC
            | Quantity::TmSingularCM2
            | Quantity::TmSingularCM3Plus
            | Quantity::PairsNonsingular
            | Quantity::PairsAllM2
            | Quantity::PairsAllM3Plus => Direction::Upper,
            Quantity::WLower => Direction::Lower,
            Quantity::TmZeroC | Quantity::DetZero | Quantity::RankK => Direction::TwoSided,
            Quantity::Box => Direction::Exact,
        }
    }

    pub fn log_correction(&self) -> LogCorrection {
        match self.quantity {
            Quantity::DetZero => LogCorrection::Log,
            _ => LogCorrection::None,
        }
    }

    /// Set for the singular-target cases, which are displayed under a
    /// standing "C nonsingular" hypothesis.
    pub fn hypothesis_note(&self) -> Option<&'static str> {
        match self.quantity {
            Quantity::TmSingularCM2 | Quantity::TmSingularCM3Plus => {
                Some("singular-C case stated under a nonsingular-C hypothesis")
            }
            _ => None,
        }
    }

    /// Whether a fitted slope is consistent with the bound given `slack`.
    pub fn slope_ok(&self, slope: f64, slack: f64) -> Result<bool> {
        let e = *self.exponent()?.numer() as f64 / *self.exponent()?.denom() as f64;
        Ok(match self.direction() {
            Direction::Upper => slope <= e + slack,
            Direction::Lower => slope >= e - slack,
            Direction::TwoSided | Direction::Exact => (slope - e).abs() <= slack,
        })
    }
}

/// The exponent of `H` in the bound for `r.quantity`, as an exact rational.
pub fn theoretical_exponent(r: &ReferenceBound) -> Result<Ratio<i64>> {
    let (m, n) = (r.m as i64, r.n as i64);
    let unsupported = |why: &str| Err(Error::Unsupported(format!("{} {why}", r.quantity)));
    if n < 1 {
        return unsupported("needs n >= 1");
    }
    let e = match r.quantity {
        Quantity::TmNonsingularC | Quantity::TmZeroC if m < 1 => return unsupported("needs m >= 1"),
        Quantity::TmNonsingularC => (m - 1) * (n * n - n),
        Quantity::TmSingularCM2 if m != 2 => return unsupported("needs m = 2"),
        Quantity::TmSingularCM2 => n * n,
        Quantity::TmSingularCM3Plus if m < 3 => return unsupported("needs m >= 3"),
        Quantity::TmSingularCM3Plus => m * n * n - n,
        Quantity::TmZeroC => (m - 1) * n * n,
        Quantity::PairsNonsingular if m < 2 || n < 2 => return unsupported("needs m, n >= 2"),
        Quantity::PairsNonsingular => (2 * m - 1) * n * n - (m - 1) * n,
        Quantity::PairsAllM2 if m != 2 => return unsupported("needs m = 2"),
        Quantity::PairsAllM2 => 3 * n * n - n,
        Quantity::PairsAllM3Plus if m < 3 => return unsupported("needs m >= 3"),
        Quantity::PairsAllM3Plus => 4 * m * n * n - 2 * n,
        Quantity::WLower if m < 2 || n < 2 => return unsupported("needs m, n >= 2"),
        Quantity::WLower => n * n + m * n - n,
        Quantity::Box => n * n,
        Quantity::DetZero => n * n - n,
        Quantity::RankK => match r.k {
            Some(k) if k >= 1 && (k as i64) < n => n * k as i64,
            _ => return unsupported("needs 1 <= k < n"),
        },
    };
    Ok(Ratio::from_integer(e))
}

/// Choice of the constant `rho` in the density correction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RhoVariant {
    /// `rho = (m+1)^(1/m)`, the scalar multiplication-table constant.
    MPlusOne,
    /// `rho = m^(1/(m-1))`, the constant used for the product-set bound.
    M,
}

pub fn rho(m: u32, variant: RhoVariant) -> Result<f64> {
    if m < 2 {
        return Err(Error::OutOfRange(format!("rho needs m >= 2, got {m}")));
    }
    let m = m as f64;
    Ok(match variant {
        RhoVariant::MPlusOne => (m + 1.0).powf(1.0 / m),
        RhoVariant::M => m.powf(1.0 / (m - 1.0)),
    })
}

/// `Q(u) = u log u - u + 1`.
pub fn q_fn(u: f64) -> f64 {
    u * u.ln() - u + 1.0
}

/// The power of `log H` in the density denominator, `Q(1/log rho)`.
pub fn density_log_exponent(m: u32, variant: RhoVariant) -> Result<f64> {
    Ok(q_fn(1.0 / rho(m, variant)?.ln()))
}

/// `H^m / ((log H)^Q(1/log rho) (log log H)^(3/2))`.
pub fn reference_density(m: u32, h: f64, variant: RhoVariant) -> Result<f64> {
    if !h.is_finite() || h < 16.0 {
        return Err(Error::OutOfRange(format!("reference density needs H >= 16, got {h}")));
    }
    let r = rho(m, variant)?;
    let l = h.ln();
    Ok(h.powi(m as i32) / (l.powf(q_fn(1.0 / r.ln())) * l.ln().powf(1.5)))
}
