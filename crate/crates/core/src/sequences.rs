//! Coefficient sequences `(a_n, b_n, c_n, d_n)` and approximation functions `ψ`.
//!
//! Every valid sequence satisfies `1 ≤ a_n ≤ b_n`; evaluation raises
//! [`Error::InvariantViolation`] when a table row breaks that.

use std::f64::consts::E;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shape of the `(a_n, b_n)` pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SequenceKind {
    /// `a_n = a[n-1]`, `b_n = b[n-1]`.
    ExplicitTable { a: Vec<f64>, b: Vec<f64> },
    /// `a_n = aⁿ`, `b_n = bⁿ` with `1 < a < b`.
    Exponential { a: f64, b: f64 },
    /// `a_n = α·n`, `b_n = β·n`.
    Linear { alpha: f64, beta: f64 },
    /// Natural-number table; unlocks the gcd refinement.
    IntegerTable { a: Vec<u64>, b: Vec<u64> },
}

/// Inhomogeneous shift sequence `c_n` or `d_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Shift {
    Constant(f64),
    Table(Vec<f64>),
}

impl Default for Shift {
    fn default() -> Self {
        Shift::Constant(0.0)
    }
}

impl Shift {
    fn at(&self, n: u64) -> Result<f64> {
        match self {
            Shift::Constant(v) => Ok(*v),
            Shift::Table(values) => table_entry(values, n).copied(),
        }
    }

    fn len(&self) -> Option<usize> {
        match self {
            Shift::Constant(_) => None,
            Shift::Table(values) => Some(values.len()),
        }
    }
}

/// Generator for the four coefficient sequences.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceSpec {
    #[serde(flatten)]
    pub kind: SequenceKind,
    #[serde(default)]
    pub c: Shift,
    #[serde(default)]
    pub d: Shift,
}

/// The coefficients at a single index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

/// Per-index constants derived from the coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedConstants {
    /// `L_n = max{1, log b_n / a_n}`.
    pub l_n: f64,
    /// `gcd(a_n, b_n)`, only for integer tables.
    pub gcd_n: Option<u64>,
}

fn table_entry<T>(values: &[T], n: u64) -> Result<&T> {
    if n == 0 {
        return Err(Error::Domain("sequence index must be ≥ 1".into()));
    }
    usize::try_from(n - 1)
        .ok()
        .and_then(|i| values.get(i))
        .ok_or(Error::IndexOutOfRange {
            index: n,
            len: values.len(),
        })
}

fn is_integral(x: f64) -> bool {
    x.is_finite() && x.fract() == 0.0 && x >= 1.0 && x < 2f64.powi(53)
}

impl SequenceSpec {
    pub fn new(kind: SequenceKind) -> Result<Self> {
        let spec = SequenceSpec {
            kind,
            c: Shift::default(),
            d: Shift::default(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn exponential(a: f64, b: f64) -> Result<Self> {
        Self::new(SequenceKind::Exponential { a, b })
    }

    pub fn linear(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(SequenceKind::Linear { alpha, beta })
    }

    pub fn with_shifts(mut self, c: Shift, d: Shift) -> Result<Self> {
        self.c = c;
        self.d = d;
        self.validate()?;
        Ok(self)
    }

    /// Checks the kind-level invariants. Table rows are checked lazily on access.
    pub fn validate(&self) -> Result<()> {
        match &self.kind {
            SequenceKind::Exponential { a, b } => {
                if !(a.is_finite() && b.is_finite() && 1.0 < *a && a < b) {
                    return Err(Error::InvariantViolation(format!(
                        "exponential sequences need 1 < a < b, got a = {a}, b = {b}"
                    )));
                }
            }
            SequenceKind::Linear { alpha, beta } => {
                if !(alpha.is_finite() && beta.is_finite() && 1.0 <= *alpha && alpha <= beta) {
                    return Err(Error::InvariantViolation(format!(
                        "linear sequences need 1 ≤ α ≤ β, got α = {alpha}, β = {beta}"
                    )));
                }
            }
            SequenceKind::ExplicitTable { a, b } => {
                if a.len() != b.len() {
                    return Err(Error::InvariantViolation(format!(
                        "table columns differ in length ({} vs {})",
                        a.len(),
                        b.len()
                    )));
                }
            }
            SequenceKind::IntegerTable { a, b } => {
                if a.len() != b.len() {
                    return Err(Error::InvariantViolation(format!(
                        "table columns differ in length ({} vs {})",
                        a.len(),
                        b.len()
                    )));
                }
            }
        }
        for shift in [&self.c, &self.d] {
            if let Shift::Constant(v) = shift {
                if !v.is_finite() {
                    return Err(Error::InvariantViolation("shift must be finite".into()));
                }
            }
        }
        Ok(())
    }

    /// Largest valid index, or `None` for unbounded sequences.
    pub fn len(&self) -> Option<usize> {
        let base = match &self.kind {
            SequenceKind::ExplicitTable { a, .. } => Some(a.len()),
            SequenceKind::IntegerTable { a, .. } => Some(a.len()),
            _ => None,
        };
        [base, self.c.len(), self.d.len()].into_iter().flatten().min()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// Whether `a_n` and `b_n` are guaranteed to be natural numbers.
    pub fn is_integer(&self) -> bool {
        match &self.kind {
            SequenceKind::IntegerTable { .. } => true,
            SequenceKind::Exponential { a, b } => is_integral(*a) && is_integral(*b),
            SequenceKind::Linear { alpha, beta } => is_integral(*alpha) && is_integral(*beta),
            SequenceKind::ExplicitTable { .. } => false,
        }
    }

    /// `(a_n, b_n, c_n, d_n)`.
    pub fn eval(&self, n: u64) -> Result<Coefficients> {
        if n == 0 {
            return Err(Error::Domain("sequence index must be ≥ 1".into()));
        }
        let (a, b) = match &self.kind {
            SequenceKind::ExplicitTable { a, b } => (*table_entry(a, n)?, *table_entry(b, n)?),
            SequenceKind::IntegerTable { a, b } => {
                (*table_entry(a, n)? as f64, *table_entry(b, n)? as f64)
            }
            SequenceKind::Exponential { a, b } => match i32::try_from(n) {
                Ok(k) => (a.powi(k), b.powi(k)),
                Err(_) => (a.powf(n as f64), b.powf(n as f64)),
            },
            SequenceKind::Linear { alpha, beta } => (alpha * n as f64, beta * n as f64),
        };
        if !(1.0 <= a && a <= b) {
            return Err(Error::InvariantViolation(format!(
                "row {n} needs 1 ≤ a_n ≤ b_n, got a_n = {a}, b_n = {b}"
            )));
        }
        Ok(Coefficients {
            a,
            b,
            c: self.c.at(n)?,
            d: self.d.at(n)?,
        })
    }

    /// `(ln a_n, ln b_n)`, finite even where `a_n`, `b_n` overflow a double.
    pub fn ln_ab(&self, n: u64) -> Result<(f64, f64)> {
        match &self.kind {
            SequenceKind::Exponential { a, b } => {
                if n == 0 {
                    return Err(Error::Domain("sequence index must be ≥ 1".into()));
                }
                Ok((n as f64 * a.ln(), n as f64 * b.ln()))
            }
            _ => {
                let co = self.eval(n)?;
                Ok((co.a.ln(), co.b.ln()))
            }
        }
    }

    /// `gcd(a_n, b_n)` for integer sequences, as a double.
    pub fn gcd_n(&self, n: u64) -> Result<f64> {
        Ok(self.ln_gcd_n(n)?.exp())
    }

    /// `ln gcd(a_n, b_n)`; finite for exponential kinds at any index.
    pub fn ln_gcd_n(&self, n: u64) -> Result<f64> {
        if n == 0 {
            return Err(Error::Domain("sequence index must be ≥ 1".into()));
        }
        match &self.kind {
            SequenceKind::IntegerTable { a, b } => {
                let g = table_entry(a, n)?.gcd(table_entry(b, n)?);
                Ok((g as f64).ln())
            }
            SequenceKind::Exponential { a, b } if self.is_integer() => {
                let g = (*a as u64).gcd(&(*b as u64));
                Ok(n as f64 * (g as f64).ln())
            }
            SequenceKind::Linear { alpha, beta } if self.is_integer() => {
                let g = (*alpha as u64).gcd(&(*beta as u64));
                Ok((n as f64 * g as f64).ln())
            }
            _ => Err(Error::Domain(
                "gcd(a_n, b_n) needs integer-valued a_n and b_n".into(),
            )),
        }
    }

    pub fn derived(&self, n: u64) -> Result<DerivedConstants> {
        let co = self.eval(n)?;
        let gcd_n = match &self.kind {
            SequenceKind::IntegerTable { a, b } => Some(table_entry(a, n)?.gcd(table_entry(b, n)?)),
            _ => None,
        };
        Ok(DerivedConstants {
            l_n: compute_l(co.a, co.b)?,
            gcd_n,
        })
    }
}

/// Approximation function `ψ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PsiSpec {
    /// `ψ(n) = n^{-t}`.
    Power { t: f64 },
    /// `ψ(n) = e^{-λn}`.
    Exponential { lambda: f64 },
    /// `ψ(n) = b_n^{-t}`.
    ScaledBase { t: f64 },
    ExplicitTable { values: Vec<f64> },
}

impl PsiSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            PsiSpec::Power { t } | PsiSpec::ScaledBase { t } => t.is_finite() && *t >= 0.0,
            PsiSpec::Exponential { lambda } => lambda.is_finite() && *lambda >= 0.0,
            PsiSpec::ExplicitTable { values } => values.iter().all(|v| v.is_finite() && *v >= 0.0),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvariantViolation(format!(
                "ψ parameters must be finite and nonnegative: {self:?}"
            )))
        }
    }

    pub fn len(&self) -> Option<usize> {
        match self {
            PsiSpec::ExplicitTable { values } => Some(values.len()),
            _ => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// `ψ(n)`; `seq` is consulted only by [`PsiSpec::ScaledBase`].
    pub fn eval(&self, n: u64, seq: &SequenceSpec) -> Result<f64> {
        if let PsiSpec::ExplicitTable { values } = self {
            return table_entry(values, n).copied();
        }
        Ok(self.ln_eval(n, seq)?.exp())
    }

    /// `ln ψ(n)`, `-∞` where `ψ(n) = 0`.
    pub fn ln_eval(&self, n: u64, seq: &SequenceSpec) -> Result<f64> {
        if n == 0 {
            return Err(Error::Domain("ψ index must be ≥ 1".into()));
        }
        match self {
            PsiSpec::Power { t } => Ok(-t * (n as f64).ln()),
            PsiSpec::Exponential { lambda } => Ok(-lambda * n as f64),
            PsiSpec::ScaledBase { t } => {
                let (_, ln_b) = seq.ln_ab(n)?;
                Ok(-t * ln_b)
            }
            PsiSpec::ExplicitTable { values } => Ok(table_entry(values, n)?.ln()),
        }
    }
}

/// Natural log with `log x := 1` for `x ≤ e`.
pub fn log_refined(x: f64) -> f64 {
    if x <= E {
        1.0
    } else {
        x.ln()
    }
}

/// `L = max{1, log b / a}` with the refined logarithm.
pub fn compute_l(a: f64, b: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite() && 1.0 <= a && a <= b) {
        return Err(Error::Domain(format!("L needs 1 ≤ a ≤ b, got a = {a}, b = {b}")));
    }
    Ok((log_refined(b) / a).max(1.0))
}

/// `ψ̃(n) = max{ψ(n), (a_n/b_n)^{(2−s)/s}}`.
pub fn psi_tilde(psi: &PsiSpec, seq: &SequenceSpec, s: f64, n: u64) -> Result<f64> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::Domain(format!("ψ̃ needs s ∈ (0,1), got {s}")));
    }
    let (ln_a, ln_b) = seq.ln_ab(n)?;
    let floor = ((ln_a - ln_b) * (2.0 - s) / s).exp();
    Ok(psi.eval(n, seq)?.max(floor))
}
