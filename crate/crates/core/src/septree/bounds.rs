//! Closed-form bounds of the separation-tree analysis, in exact arithmetic.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundError {
    #[error("size budget is not positive at {x}")]
    NonPositiveBudget { x: u64 },
    #[error("argument {x} is below f(n) = {fn_value}")]
    BelowThreshold { x: u64, fn_value: u64 },
    #[error("n must be at least 1")]
    EmptyGraph,
}

/// Separator size budget `f: N+ -> N+`. Every variant evaluates to 0 at 0,
/// which is how zero-size levels drop out of the cop bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SizeBudget {
    /// `c`
    Const { c: u64 },
    /// `ceil(sqrt(scale_sq * x))`, i.e. `ceil(sqrt(scale_sq) * sqrt(x))`.
    Sqrt { scale_sq: u64 },
    /// `ceil(log2(x + 1))`
    Log2,
    /// `x`
    Identity,
    /// `ceil(coef * x^exp)`
    Power { coef: f64, exp: f64 },
}

impl SizeBudget {
    pub const SQRT: SizeBudget = SizeBudget::Sqrt { scale_sq: 1 };
    /// `ceil(2 sqrt(2) sqrt(x))`, the planar separator guarantee.
    pub const PLANAR: SizeBudget = SizeBudget::Sqrt { scale_sq: 8 };

    pub fn eval(&self, x: u64) -> u64 {
        if x == 0 {
            return 0;
        }
        match *self {
            SizeBudget::Const { c } => c,
            SizeBudget::Sqrt { scale_sq } => ceil_sqrt(scale_sq * x),
            SizeBudget::Log2 => u64::from(64 - x.leading_zeros()),
            SizeBudget::Identity => x,
            SizeBudget::Power { coef, exp } => (coef * (x as f64).powf(exp)).ceil().max(0.0) as u64,
        }
    }

    /// Checks `f(x) >= 1` for every `x` in `1..=upto`.
    pub fn check_positive(&self, upto: u64) -> Result<(), BoundError> {
        match *self {
            SizeBudget::Const { c: 0 } => Err(BoundError::NonPositiveBudget { x: 1 }),
            SizeBudget::Const { .. } | SizeBudget::Log2 | SizeBudget::Identity => Ok(()),
            SizeBudget::Sqrt { scale_sq } if scale_sq == 0 && upto > 0 => {
                Err(BoundError::NonPositiveBudget { x: 1 })
            }
            SizeBudget::Sqrt { .. } => Ok(()),
            SizeBudget::Power { .. } => match (1..=upto).find(|&x| self.eval(x) == 0) {
                Some(x) => Err(BoundError::NonPositiveBudget { x }),
                None => Ok(()),
            },
        }
    }
}

impl fmt::Display for SizeBudget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SizeBudget::Const { c } => write!(f, "const:{c}"),
            SizeBudget::Sqrt { scale_sq: 1 } => f.write_str("sqrt"),
            SizeBudget::Sqrt { scale_sq } => write!(f, "sqrt:{scale_sq}"),
            SizeBudget::Log2 => f.write_str("log"),
            SizeBudget::Identity => f.write_str("identity"),
            SizeBudget::Power { coef, exp } => write!(f, "power:{coef}:{exp}"),
        }
    }
}

impl FromStr for SizeBudget {
    type Err = String;

    /// `const:C`, `sqrt`, `sqrt:S` (scale squared), `log`, `identity`, `power:COEF:EXP`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| t.parse::<u64>().map_err(|e| format!("{s:?}: {e}"));
        let float = |t: &str| t.parse::<f64>().map_err(|e| format!("{s:?}: {e}"));
        match parts[..] {
            ["const", c] => Ok(SizeBudget::Const { c: num(c)? }),
            ["sqrt"] => Ok(SizeBudget::SQRT),
            ["sqrt", k] => Ok(SizeBudget::Sqrt { scale_sq: num(k)? }),
            ["log"] => Ok(SizeBudget::Log2),
            ["identity"] => Ok(SizeBudget::Identity),
            ["power", coef, exp] => Ok(SizeBudget::Power {
                coef: float(coef)?,
                exp: float(exp)?,
            }),
            _ => Err(format!("unknown size budget {s:?}")),
        }
    }
}

/// Smallest `r` with `r * r >= x`.
pub fn ceil_sqrt(x: u64) -> u64 {
    let mut r = (x as f64).sqrt() as u64;
    while r * r > x {
        r -= 1;
    }
    while r * r < x {
        r += 1;
    }
    r
}

/// Table of `phi_{f,n}(x)` for `x = 0..=x_max`:
///
/// ```text
/// phi(x) = 0                                              x < 1
///        = 1                                              1 <= x <= f(n)
///        = 1 + max_{ceil(x/3) <= y <= floor(2x/3)} phi(y) + phi(x - f(x) - y)   otherwise
/// ```
///
/// with `phi` of a negative argument read as 0.
#[derive(Debug, Clone)]
pub struct PhiTable {
    fn_value: u64,
    values: Vec<u64>,
}

impl PhiTable {
    pub fn new(f: &SizeBudget, n: u64, x_max: u64) -> Result<Self, BoundError> {
        f.check_positive(x_max.max(n))?;
        let fn_value = f.eval(n);
        let mut values = vec![0u64; x_max as usize + 1];
        let at = |values: &[u64], arg: i64| -> u64 {
            if arg < 1 {
                0
            } else {
                values[arg as usize]
            }
        };
        for x in 1..=x_max {
            values[x as usize] = if x <= fn_value {
                1
            } else {
                let fx = f.eval(x) as i64;
                let xi = x as i64;
                let best = ((xi + 2) / 3..=(2 * xi) / 3)
                    .map(|y| at(&values, y) + at(&values, xi - fx - y))
                    .max()
                    .unwrap_or(0);
                1 + best
            };
        }
        Ok(Self { fn_value, values })
    }

    pub fn get(&self, x: u64) -> u64 {
        self.values[x as usize]
    }

    /// `f(n)` of the table.
    pub fn threshold(&self) -> u64 {
        self.fn_value
    }
}

/// `phi_{f,n}(x)`.
pub fn phi(f: &SizeBudget, n: u64, x: u64) -> Result<u64, BoundError> {
    Ok(PhiTable::new(f, n, x)?.get(x))
}

/// `6x / f(n) - 1`, valid for `x >= f(n)`.
pub fn phi_bound(f: &SizeBudget, n: u64, x: u64) -> Result<Ratio<i64>, BoundError> {
    let fn_value = f.eval(n);
    if fn_value == 0 {
        return Err(BoundError::NonPositiveBudget { x: n });
    }
    if x < fn_value {
        return Err(BoundError::BelowThreshold { x, fn_value });
    }
    Ok(Ratio::new(6 * x as i64, fn_value as i64) - 1)
}

/// Node-count bound `6n/f(n) - 1` of the separation tree.
pub fn node_bound(f: &SizeBudget, n: u64) -> Ratio<i64> {
    Ratio::new(6 * n as i64, f.eval(n).max(1) as i64) - 1
}

/// `ceil(log_{3/2} n) + 1`: one more than the smallest `k` with `3^k >= 2^k n`.
pub fn ell(n: u64) -> Result<u32, BoundError> {
    if n == 0 {
        return Err(BoundError::EmptyGraph);
    }
    let n_big = BigUint::from(n);
    let mut three = BigUint::one();
    let mut two = BigUint::one();
    let mut k = 0u32;
    while three < &two * &n_big {
        three *= 3u32;
        two *= 2u32;
        k += 1;
    }
    Ok(k + 1)
}

/// `floor((2/3)^i n)`.
pub fn shrink_floor(n: u64, i: u32) -> u64 {
    let num = BigUint::from(2u32).pow(i) * n;
    let den = BigUint::from(3u32).pow(i);
    (num / den).to_u64().expect("at most n")
}

/// Cop bound `f(n) + sum_{i=0}^{ell(n)} f(floor((2/3)^i n))`; zero-size terms contribute 0.
pub fn cop_bound(f: &SizeBudget, n: u64) -> Result<u64, BoundError> {
    let levels = ell(n)?;
    let mut total = f.eval(n);
    for i in 0..=levels {
        let arg = shrink_floor(n, i);
        if arg.is_zero() {
            break;
        }
        total += f.eval(arg);
    }
    Ok(total)
}

/// Capture-time bound `D * n / f(n)` without its hidden constant.
pub fn capture_time_bound(diameter: u64, n: u64, f: &SizeBudget) -> Ratio<u64> {
    Ratio::new(diameter * n, f.eval(n).max(1))
}

/// All bounds for one graph size and budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundProfile {
    pub f: SizeBudget,
    pub n: u64,
    pub f_n: u64,
    pub ell: u32,
    pub cop_bound: u64,
    pub node_bound: f64,
}

impl BoundProfile {
    pub fn new(f: SizeBudget, n: u64) -> Result<Self, BoundError> {
        f.check_positive(n)?;
        Ok(Self {
            f,
            n,
            f_n: f.eval(n),
            ell: ell(n)?,
            cop_bound: cop_bound(&f, n)?,
            node_bound: node_bound(&f, n).to_f64().unwrap_or(f64::NAN),
        })
    }

    pub fn capture_time_bound(&self, diameter: u64) -> f64 {
        capture_time_bound(diameter, self.n, &self.f)
            .to_f64()
            .unwrap_or(f64::NAN)
    }
}
