//! Least-squares fitting of per-stage cost series.
//!
//! Three closed-form families are supported: linear, quadratic, and
//! exponential. The exponential family is fitted by linear least squares on
//! (x, ln y) and back-transformed; goodness of fit is always reported on the
//! original scale so families compete fairly. Difference analysis over an
//! equally spaced series suggests a family before fitting.

use thiserror::Error;

/// Default coefficient-of-variation threshold for difference analysis.
pub const DEFAULT_CV_THRESHOLD: f64 = 0.15;

/// R-squared ties closer than this are broken by parsimony.
const R_SQUARED_TIE: f64 = 1e-9;

/// Pivot ratios below this mark the normal equations as numerically singular.
const PIVOT_RATIO_FLOOR: f64 = 1e-12;

/// Errors raised while constructing series or fitting curves.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FitError {
    #[error("cost series needs at least 3 points, got {found}")]
    TooFewPoints { found: usize },
    #[error("x values must be strictly increasing (violated at point {index})")]
    NonIncreasingX { index: usize },
    #[error("point {index} is not finite")]
    NonFinite { index: usize },
    #[error("difference analysis requires equally spaced x values (violated at point {index})")]
    UnequalSpacing { index: usize },
    #[error("exponential fit requires positive y values (y[{index}] = {value})")]
    NonPositiveData { index: usize, value: f64 },
    #[error("normal equations are numerically singular (pivot ratio below {PIVOT_RATIO_FLOOR:e})")]
    SingularSystem,
    #[error("series has zero variance but the curve leaves nonzero residuals")]
    DegenerateVariance,
}

/// Candidate function families, in tie-break declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelFamily {
    /// y = a·x + b
    Linear,
    /// y = a·x² + b·x + c
    Quadratic,
    /// y = a·e^(b·x), a > 0
    Exponential,
}

impl ModelFamily {
    /// Number of free coefficients; the parsimony tie-break key.
    pub fn coefficient_count(self) -> usize {
        match self {
            ModelFamily::Linear | ModelFamily::Exponential => 2,
            ModelFamily::Quadratic => 3,
        }
    }

    fn declaration_rank(self) -> usize {
        match self {
            ModelFamily::Linear => 0,
            ModelFamily::Quadratic => 1,
            ModelFamily::Exponential => 2,
        }
    }
}

impl std::fmt::Display for ModelFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            ModelFamily::Linear => "linear",
            ModelFamily::Quadratic => "quadratic",
            ModelFamily::Exponential => "exponential",
        };
        f.write_str(name)
    }
}

/// A discrete cost series over strictly increasing positions.
#[derive(Debug, Clone, PartialEq)]
pub struct CostSeries {
    points: Vec<(f64, f64)>,
}

impl CostSeries {
    /// At least 3 points; x strictly increasing; everything finite.
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self, FitError> {
        if points.len() < 3 {
            return Err(FitError::TooFewPoints {
                found: points.len(),
            });
        }
        for (i, &(x, y)) in points.iter().enumerate() {
            if !x.is_finite() || !y.is_finite() {
                return Err(FitError::NonFinite { index: i });
            }
            if i > 0 && x <= points[i - 1].0 {
                return Err(FitError::NonIncreasingX { index: i });
            }
        }
        Ok(CostSeries { points })
    }

    /// Convenience constructor for a series indexed 1, 2, ... n.
    pub fn from_values(values: &[f64]) -> Result<Self, FitError> {
        Self::new(
            values
                .iter()
                .enumerate()
                .map(|(i, &y)| ((i + 1) as f64, y))
                .collect(),
        )
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn ys(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|&(_, y)| y)
    }
}

/// A fitted curve with its original-scale goodness of fit.
#[derive(Debug, Clone, PartialEq)]
pub struct FittedCurve {
    pub family: ModelFamily,
    /// Layout per family: Linear [a, b]; Quadratic [a, b, c]; Exponential [a, b].
    pub coefficients: Vec<f64>,
    /// R² on the original scale; ≤ 1, negative when the curve is worse than ȳ.
    pub r_squared: f64,
}

impl FittedCurve {
    pub fn eval(&self, x: f64) -> f64 {
        match self.family {
            ModelFamily::Linear => self.coefficients[0] * x + self.coefficients[1],
            ModelFamily::Quadratic => {
                (self.coefficients[0] * x + self.coefficients[1]) * x + self.coefficients[2]
            }
            ModelFamily::Exponential => self.coefficients[0] * (self.coefficients[1] * x).exp(),
        }
    }

    /// Analytic first derivative at x.
    pub fn derivative(&self, x: f64) -> f64 {
        match self.family {
            ModelFamily::Linear => self.coefficients[0],
            ModelFamily::Quadratic => 2.0 * self.coefficients[0] * x + self.coefficients[1],
            ModelFamily::Exponential => {
                self.coefficients[0] * self.coefficients[1] * (self.coefficients[1] * x).exp()
            }
        }
    }
}

/// Suggested family plus the raw difference diagnostics behind the call.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferenceReport {
    pub first_differences: Vec<f64>,
    pub second_differences: Vec<f64>,
    /// None when any y ≤ 0 (ratios uninterpretable, omitted without failing).
    pub successive_ratios: Option<Vec<f64>>,
    pub suggested_family: ModelFamily,
}

/// Computes first/second differences and successive ratios over an equally
/// spaced series and suggests a family by coefficient-of-variation stability:
/// stable first differences mean linear growth, stable second differences
/// quadratic, stable ratios exponential. Quadratic is the fallback.
pub fn difference_profile(
    series: &CostSeries,
    cv_threshold: f64,
) -> Result<DifferenceReport, FitError> {
    let pts = series.points();
    let dx0 = pts[1].0 - pts[0].0;
    for i in 2..pts.len() {
        let dx = pts[i].0 - pts[i - 1].0;
        if (dx / dx0 - 1.0).abs() > 1e-9 {
            return Err(FitError::UnequalSpacing { index: i });
        }
    }

    let ys: Vec<f64> = series.ys().collect();
    let first: Vec<f64> = ys.windows(2).map(|w| w[1] - w[0]).collect();
    let second: Vec<f64> = first.windows(2).map(|w| w[1] - w[0]).collect();
    let ratios = if ys.iter().all(|&y| y > 0.0) {
        Some(ys.windows(2).map(|w| w[1] / w[0]).collect::<Vec<f64>>())
    } else {
        None
    };

    let suggested_family = if coefficient_of_variation(&first) < cv_threshold {
        ModelFamily::Linear
    } else if coefficient_of_variation(&second) < cv_threshold {
        ModelFamily::Quadratic
    } else if ratios
        .as_deref()
        .is_some_and(|r| coefficient_of_variation(r) < cv_threshold)
    {
        ModelFamily::Exponential
    } else {
        ModelFamily::Quadratic
    };

    Ok(DifferenceReport {
        first_differences: first,
        second_differences: second,
        successive_ratios: ratios,
        suggested_family,
    })
}

/// Population CV: std/|mean|. Zero spread gives 0 even at zero mean; nonzero
/// spread around a zero mean gives infinity (never "stable").
fn coefficient_of_variation(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::INFINITY;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let std = var.sqrt();
    if std == 0.0 {
        0.0
    } else if mean == 0.0 {
        f64::INFINITY
    } else {
        std / mean.abs()
    }
}

/// Least-squares fit of one family. Linear and quadratic solve the normal
/// equations exactly; exponential solves them on (x, ln y) and back-transforms.
/// R² is evaluated on the original scale in every case.
pub fn fit_model(series: &CostSeries, family: ModelFamily) -> Result<FittedCurve, FitError> {
    let coefficients = match family {
        ModelFamily::Linear => fit_polynomial(series.points(), 1)?,
        ModelFamily::Quadratic => fit_polynomial(series.points(), 2)?,
        ModelFamily::Exponential => {
            let mut logged = Vec::with_capacity(series.len());
            for (i, &(x, y)) in series.points().iter().enumerate() {
                if y <= 0.0 {
                    return Err(FitError::NonPositiveData { index: i, value: y });
                }
                logged.push((x, y.ln()));
            }
            let line = fit_polynomial(&logged, 1)?;
            // line = [b, ln a]
            vec![line[1].exp(), line[0]]
        }
    };
    let mut curve = FittedCurve {
        family,
        coefficients,
        r_squared: 0.0,
    };
    curve.r_squared = goodness_of_fit(&curve, series)?;
    Ok(curve)
}

/// R² = 1 − SS_res/SS_tot on the original scale. A zero-variance series scores
/// 1 when the curve reproduces it and is otherwise an error, since the ratio
/// is undefined.
pub fn goodness_of_fit(curve: &FittedCurve, series: &CostSeries) -> Result<f64, FitError> {
    let n = series.len() as f64;
    let mean = series.ys().sum::<f64>() / n;
    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    let mut y_scale = 0.0f64;
    for &(x, y) in series.points() {
        let r = y - curve.eval(x);
        ss_res += r * r;
        let d = y - mean;
        ss_tot += d * d;
        y_scale = y_scale.max(y.abs());
    }
    if ss_tot == 0.0 {
        // rounding in the solver may leave residuals at the last few ulps
        let zero_floor = (y_scale * 1e-12).powi(2) * n;
        if ss_res <= zero_floor {
            return Ok(1.0);
        }
        return Err(FitError::DegenerateVariance);
    }
    Ok(1.0 - ss_res / ss_tot)
}

/// Fits every applicable family and returns the best by R², breaking ties
/// within 1e-9 by fewest coefficients, then by declaration order. Errors only
/// when every family fails.
pub fn select_model(series: &CostSeries) -> Result<FittedCurve, FitError> {
    select_among(
        series,
        &[
            ModelFamily::Linear,
            ModelFamily::Quadratic,
            ModelFamily::Exponential,
        ],
    )
}

/// [`select_model`] restricted to the given families. The tie-break is
/// independent of the order families are listed in.
///
/// # Panics
///
/// Panics when `families` is empty.
pub fn select_among(series: &CostSeries, families: &[ModelFamily]) -> Result<FittedCurve, FitError> {
    assert!(!families.is_empty(), "select_among requires at least one family");
    let mut best: Option<FittedCurve> = None;
    let mut first_error: Option<FitError> = None;
    for &family in families {
        match fit_model(series, family) {
            Ok(curve) => {
                let replace = match &best {
                    None => true,
                    Some(b) => {
                        if curve.r_squared > b.r_squared + R_SQUARED_TIE {
                            true
                        } else if b.r_squared > curve.r_squared + R_SQUARED_TIE {
                            false
                        } else {
                            // tie: parsimony first, then declaration order
                            let (cn, bn) = (
                                curve.family.coefficient_count(),
                                b.family.coefficient_count(),
                            );
                            cn < bn
                                || (cn == bn
                                    && curve.family.declaration_rank()
                                        < b.family.declaration_rank())
                        }
                    }
                };
                if replace {
                    best = Some(curve);
                }
            }
            Err(e) => {
                first_error.get_or_insert(e);
            }
        }
    }
    best.ok_or_else(|| first_error.expect("no fit attempted"))
}

/// Least-squares polynomial of the given degree via normal equations with
/// partial pivoting. Returns coefficients highest power first.
fn fit_polynomial(points: &[(f64, f64)], degree: usize) -> Result<Vec<f64>, FitError> {
    let k = degree + 1;
    // moments[m] = Σ x^m, cross[j] = Σ x^j·y
    let mut moments = vec![0.0f64; 2 * degree + 1];
    let mut cross = vec![0.0f64; k];
    for &(x, y) in points {
        let mut pow = 1.0;
        for m in moments.iter_mut() {
            *m += pow;
            pow *= x;
        }
        let mut pow = 1.0;
        for c in cross.iter_mut() {
            *c += pow * y;
            pow *= x;
        }
    }
    // a[r][c] pairs the coefficient of x^(degree−c) with Σ x^(2·degree−r−c)
    let mut a = vec![vec![0.0f64; k]; k];
    let mut b = vec![0.0f64; k];
    for r in 0..k {
        for c in 0..k {
            a[r][c] = moments[2 * degree - r - c];
        }
        b[r] = cross[degree - r];
    }
    solve_linear(a, b)
}

/// Gaussian elimination with partial pivoting on a small dense system.
// the elimination loop reads row `col` while writing row `row`, so indexing stays
#[allow(clippy::needless_range_loop)]
fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>, FitError> {
    let k = b.len();
    let scale = a
        .iter()
        .flatten()
        .fold(0.0f64, |acc, &v| acc.max(v.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return Err(FitError::SingularSystem);
    }
    for col in 0..k {
        let pivot_row = (col..k)
            .max_by(|&r1, &r2| a[r1][col].abs().total_cmp(&a[r2][col].abs()))
            .expect("non-empty pivot range");
        if a[pivot_row][col].abs() < PIVOT_RATIO_FLOOR * scale {
            return Err(FitError::SingularSystem);
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for row in col + 1..k {
            let factor = a[row][col] / a[col][col];
            for c in col..k {
                a[row][c] -= factor * a[col][c];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0f64; k];
    for row in (0..k).rev() {
        let mut acc = b[row];
        for c in row + 1..k {
            acc -= a[row][c] * x[c];
        }
        x[row] = acc / a[row][row];
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(FitError::SingularSystem);
    }
    Ok(x)
}
