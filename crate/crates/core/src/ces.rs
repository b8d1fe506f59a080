//! Two-input CES production function
//!
//! ```text
//! Y = [α·F^(−ρ) + (1−α)·R^(−ρ)]^(−1/ρ),   σ = 1/(1+ρ)
//! ```
//!
//! `F` is the fossil input, `R` the renewable input. Every function here is a
//! pure function of its arguments.

use crate::math::{ln, powf};

/// Below this |ρ| the Cobb-Douglas limit `F^α·R^(1−α)` is evaluated instead
/// of the CES form.
pub const COBB_DOUGLAS_THRESHOLD: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum CesError {
    #[error("share parameter alpha = {0} must lie in (0, 1)")]
    InvalidAlpha(f64),
    #[error("substitution parameter rho = {0} must be finite and > -1")]
    InvalidRho(f64),
    #[error("elasticity sigma = {0} must be finite and > 0")]
    InvalidSigma(f64),
    #[error("{name} = {value} must be strictly positive")]
    NonPositive { name: &'static str, value: f64 },
    #[error(
        "no renewable quantity reaches output {output} with fossil {fossil} \
         (isoquant residual {residual} <= 0)"
    )]
    InfeasibleIsoquant {
        fossil: f64,
        output: f64,
        residual: f64,
    },
    #[error("1 + rho = {0} is too close to zero")]
    SingularElasticity(f64),
}

fn positive(name: &'static str, value: f64) -> Result<f64, CesError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(CesError::NonPositive { name, value })
    }
}

/// Share parameter `alpha` and substitution parameter `rho` of one CES pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CesParams {
    alpha: f64,
    rho: f64,
}

impl CesParams {
    pub fn new(alpha: f64, rho: f64) -> Result<Self, CesError> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(CesError::InvalidAlpha(alpha));
        }
        if !(rho > -1.0 && rho.is_finite()) {
            return Err(CesError::InvalidRho(rho));
        }
        Ok(Self { alpha, rho })
    }

    /// Builds the pair from an elasticity of substitution, `ρ = 1/σ − 1`.
    pub fn from_sigma(alpha: f64, sigma: f64) -> Result<Self, CesError> {
        Self::new(alpha, rho_from_sigma(sigma)?)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Elasticity of substitution `1/(1+ρ)`.
    pub fn sigma(&self) -> f64 {
        sigma_from_rho(self.rho)
    }

    /// `α/(1−α)`.
    pub fn share_ratio(&self) -> f64 {
        self.alpha / (1.0 - self.alpha)
    }

    fn is_cobb_douglas(&self) -> bool {
        self.rho.abs() < COBB_DOUGLAS_THRESHOLD
    }
}

pub fn rho_from_sigma(sigma: f64) -> Result<f64, CesError> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(CesError::InvalidSigma(sigma));
    }
    Ok(1.0 / sigma - 1.0)
}

pub fn sigma_from_rho(rho: f64) -> f64 {
    1.0 / (1.0 + rho)
}

/// Fossil and renewable input quantities in a common energy unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorPoint {
    pub fossil: f64,
    pub renewable: f64,
}

impl FactorPoint {
    pub fn new(fossil: f64, renewable: f64) -> Self {
        Self { fossil, renewable }
    }

    /// Fossil share `F/(F+R)`.
    pub fn fossil_share(&self) -> f64 {
        self.fossil / (self.fossil + self.renewable)
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self::new(k * self.fossil, k * self.renewable)
    }

    fn checked(&self) -> Result<(f64, f64), CesError> {
        Ok((
            positive("fossil", self.fossil)?,
            positive("renewable", self.renewable)?,
        ))
    }
}

/// Unit prices of the fossil and renewable inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PricePair {
    pub p_fossil: f64,
    pub p_renewable: f64,
}

impl PricePair {
    pub fn new(p_fossil: f64, p_renewable: f64) -> Self {
        Self {
            p_fossil,
            p_renewable,
        }
    }

    pub fn ratio(&self) -> Result<f64, CesError> {
        Ok(positive("p_fossil", self.p_fossil)? / positive("p_renewable", self.p_renewable)?)
    }
}

/// Output `Y` produced by `point`.
pub fn ces_output(params: CesParams, point: FactorPoint) -> Result<f64, CesError> {
    let (f, r) = point.checked()?;
    let a = params.alpha;
    if params.is_cobb_douglas() {
        return Ok(powf(f, a) * powf(r, 1.0 - a));
    }
    let rho = params.rho;
    let inner = a * powf(f, -rho) + (1.0 - a) * powf(r, -rho);
    Ok(powf(inner, -1.0 / rho))
}

/// Renewable input that, together with `fossil`, produces exactly `output`.
///
/// Fails with [`CesError::InfeasibleIsoquant`] when fossil alone already
/// fixes the output beyond reach: for ρ > 0 this happens once
/// `F ≤ α^(1/ρ)·Y`, for ρ < 0 once `α·F^(−ρ) ≥ Y^(−ρ)`.
pub fn invert_renewable(params: CesParams, output: f64, fossil: f64) -> Result<f64, CesError> {
    let y = positive("output", output)?;
    let f = positive("fossil", fossil)?;
    let a = params.alpha;
    if params.is_cobb_douglas() {
        return Ok(powf(y / powf(f, a), 1.0 / (1.0 - a)));
    }
    let rho = params.rho;
    let residual = (powf(y, -rho) - a * powf(f, -rho)) / (1.0 - a);
    if residual.is_nan() || residual <= 0.0 {
        return Err(CesError::InfeasibleIsoquant {
            fossil: f,
            output: y,
            residual,
        });
    }
    let r = powf(residual, -1.0 / rho);
    if !r.is_finite() {
        return Err(CesError::InfeasibleIsoquant {
            fossil: f,
            output: y,
            residual,
        });
    }
    Ok(r)
}

/// Marginal rate of technical substitution `(α/(1−α))·(R/F)^(1+ρ)`.
///
/// Returned as a positive magnitude: the isoquant slope `dR/dF` is its
/// negative.
pub fn mrts(params: CesParams, point: FactorPoint) -> Result<f64, CesError> {
    let (f, r) = point.checked()?;
    Ok(params.share_ratio() * powf(r / f, 1.0 + params.rho))
}

/// First-order-condition price ratio `P_F/P_R = (α/(1−α))·(F/R)^(−ρ−1)`.
pub fn relative_price(params: CesParams, point: FactorPoint) -> Result<f64, CesError> {
    let (f, r) = point.checked()?;
    Ok(params.share_ratio() * powf(f / r, -params.rho - 1.0))
}

/// Quantity ratio `F/R = ((1−α)/α · P_F/P_R)^(−1/(1+ρ))`, the inverse of
/// [`relative_price`].
pub fn quantity_ratio_from_prices(params: CesParams, prices: PricePair) -> Result<f64, CesError> {
    let ratio = prices.ratio()?;
    let denom = singular_guard(params.rho)?;
    Ok(powf(ratio / params.share_ratio(), -1.0 / denom))
}

/// Price elasticity of the quantity ratio, `−1/(1+ρ) = −σ`.
pub fn price_elasticity(params: CesParams) -> Result<f64, CesError> {
    Ok(-1.0 / singular_guard(params.rho)?)
}

fn singular_guard(rho: f64) -> Result<f64, CesError> {
    let d = 1.0 + rho;
    if d.abs() < 1e-12 {
        Err(CesError::SingularElasticity(d))
    } else {
        Ok(d)
    }
}

/// Initial inputs with fossil share exactly `alpha` and output exactly `y0`.
///
/// With `s = F₀ + R₀`, homogeneity gives
/// `s = y0·[α^(1−ρ) + (1−α)^(1−ρ)]^(1/ρ)`; the Cobb-Douglas limit is
/// `s = y0/(α^α·(1−α)^(1−α))`.
pub fn calibrate_initial(alpha: f64, rho: f64, y0: f64) -> Result<FactorPoint, CesError> {
    let params = CesParams::new(alpha, rho)?;
    let y0 = positive("y0", y0)?;
    let a = alpha;
    let total = if params.is_cobb_douglas() {
        y0 / (powf(a, a) * powf(1.0 - a, 1.0 - a))
    } else {
        y0 * powf(powf(a, 1.0 - rho) + powf(1.0 - a, 1.0 - rho), 1.0 / rho)
    };
    Ok(FactorPoint::new(a * total, (1.0 - a) * total))
}

/// Point on the `output` isoquant whose fossil share is `share`.
pub fn point_at_share(params: CesParams, output: f64, share: f64) -> Result<FactorPoint, CesError> {
    if !(share > 0.0 && share < 1.0) {
        return Err(CesError::NonPositive {
            name: "share",
            value: share,
        });
    }
    let unit = FactorPoint::new(share, 1.0 - share);
    let y_unit = ces_output(params, unit)?;
    Ok(unit.scaled(positive("output", output)? / y_unit))
}

/// Log-derivative `d ln(F/R) / d ln(P_F/P_R)` by central difference, used to
/// cross-check [`price_elasticity`].
pub fn elasticity_by_difference(
    params: CesParams,
    price_ratio: f64,
    h: f64,
) -> Result<f64, CesError> {
    let up = quantity_ratio_from_prices(params, PricePair::new(price_ratio * (1.0 + h), 1.0))?;
    let dn = quantity_ratio_from_prices(params, PricePair::new(price_ratio * (1.0 - h), 1.0))?;
    Ok((ln(up) - ln(dn)) / (ln(1.0 + h) - ln(1.0 - h)))
}
