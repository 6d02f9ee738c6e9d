//! Kernels `f` applied to squared distances.
//!
//! A [`Kernel`] stores exactly the local data the limit law consumes: the
//! value at 0 and the value and first three derivatives at 2. Derivatives are
//! stored, never computed numerically. Built-in kernels also carry an exact
//! derivative map so that expansions around points other than 2 are possible.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Kernel description as it appears in configuration files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum KernelSpec {
    Identity,
    Constant {
        #[serde(default = "one")]
        value: f64,
    },
    Exponential,
    Sqrt,
    Poly {
        coeffs: Vec<f64>,
    },
    Custom {
        f0: f64,
        f2: f64,
        df2: f64,
        #[serde(default)]
        d2f2: Option<f64>,
        #[serde(default)]
        d3f2: Option<f64>,
        samples: Vec<[f64; 2]>,
    },
}

fn one() -> f64 {
    1.0
}

/// Short command-line form: `identity`, `exponential`, `sqrt`, `constant`,
/// `constant:<c>` or `poly:<a0>,<a1>,...`.
impl std::str::FromStr for KernelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        let number = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidConfig(format!("bad number `{t}` in kernel `{s}`")))
        };
        match (head, arg) {
            ("identity", None) => Ok(KernelSpec::Identity),
            ("exponential" | "exp", None) => Ok(KernelSpec::Exponential),
            ("sqrt", None) => Ok(KernelSpec::Sqrt),
            ("constant", None) => Ok(KernelSpec::Constant { value: 1.0 }),
            ("constant", Some(v)) => Ok(KernelSpec::Constant { value: number(v)? }),
            ("poly", Some(list)) => Ok(KernelSpec::Poly {
                coeffs: list.split(',').map(number).collect::<Result<_>>()?,
            }),
            _ => Err(Error::InvalidConfig(format!("unknown kernel `{s}`"))),
        }
    }
}

#[derive(Clone)]
pub struct Kernel {
    name: String,
    eval: ScalarFn,
    derivative: Option<ScalarFn>,
    f0: f64,
    f2: f64,
    df2: f64,
    d2f2: f64,
    d3f2: f64,
    order: u8,
}

impl fmt::Debug for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Kernel")
            .field("name", &self.name)
            .field("f0", &self.f0)
            .field("f2", &self.f2)
            .field("df2", &self.df2)
            .field("d2f2", &self.d2f2)
            .field("d3f2", &self.d3f2)
            .field("order", &self.order)
            .finish()
    }
}

impl Kernel {
    /// `f(x) = x`
    pub fn identity() -> Self {
        Kernel::smooth("identity", Arc::new(|x| x), Arc::new(|_| 1.0), [0.0, 2.0, 1.0, 0.0, 0.0])
    }

    /// `f(x) = c`
    pub fn constant(c: f64) -> Self {
        Kernel::smooth("constant", Arc::new(move |_| c), Arc::new(|_| 0.0), [c, c, 0.0, 0.0, 0.0])
    }

    /// `f(x) = exp(-x)`
    pub fn exponential() -> Self {
        let e2 = (-2.0f64).exp();
        Kernel::smooth(
            "exponential",
            Arc::new(|x: f64| (-x).exp()),
            Arc::new(|x: f64| -(-x).exp()),
            [1.0, e2, -e2, e2, -e2],
        )
    }

    /// `f(x) = sqrt(x)`, i.e. the plain Euclidean distance.
    pub fn sqrt() -> Self {
        let s2 = 2.0f64.sqrt();
        Kernel::smooth(
            "sqrt",
            Arc::new(|x: f64| x.sqrt()),
            Arc::new(|x: f64| 0.5 / x.sqrt()),
            [
                0.0,
                s2,
                0.5 / s2,
                -0.25 / (2.0 * s2),
                0.375 / (4.0 * s2),
            ],
        )
    }

    /// `f(x) = a_0 + a_1 x + a_2 x^2 + ...`
    pub fn polynomial(coeffs: &[f64]) -> Result<Self> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("polynomial coefficient".into()));
        }
        let c: Vec<f64> = coeffs.to_vec();
        let d1 = differentiate(&c);
        let d2 = differentiate(&d1);
        let d3 = differentiate(&d2);
        let local = [horner(&c, 0.0), horner(&c, 2.0), horner(&d1, 2.0), horner(&d2, 2.0), horner(&d3, 2.0)];
        let d1_map = d1.clone();
        Ok(Kernel::smooth(
            "poly",
            Arc::new(move |x| horner(&c, x)),
            Arc::new(move |x| horner(&d1_map, x)),
            local,
        ))
    }

    /// A user kernel given by explicit local values and a table of samples.
    ///
    /// The evaluate map interpolates linearly between samples and is
    /// undefined (NaN) outside the sampled range. The smoothness order is 3
    /// when both higher derivatives are given, 2 with only `f''(2)`, else 1.
    /// Custom kernels have no derivative map.
    pub fn custom(
        f0: f64,
        f2: f64,
        df2: f64,
        d2f2: Option<f64>,
        d3f2: Option<f64>,
        samples: &[[f64; 2]],
    ) -> Result<Self> {
        let mut pts: Vec<[f64; 2]> = samples.to_vec();
        if pts.is_empty() {
            return Err(Error::InvalidConfig("custom kernel needs at least one sample".into()));
        }
        if pts.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("custom kernel sample".into()));
        }
        if [Some(f0), Some(f2), Some(df2), d2f2, d3f2].iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("custom kernel local value".into()));
        }
        pts.sort_by(|a, b| a[0].total_cmp(&b[0]));
        if pts.windows(2).any(|w| w[0][0] == w[1][0]) {
            return Err(Error::InvalidConfig("custom kernel samples repeat an abscissa".into()));
        }
        let order = match (d2f2, d3f2) {
            (Some(_), Some(_)) => 3,
            (Some(_), None) => 2,
            _ => 1,
        };
        Ok(Kernel {
            name: "custom".into(),
            eval: Arc::new(move |x| interpolate(&pts, x)),
            derivative: None,
            f0,
            f2,
            df2,
            d2f2: d2f2.unwrap_or(0.0),
            d3f2: d3f2.unwrap_or(0.0),
            order,
        })
    }

    pub fn from_spec(spec: &KernelSpec) -> Result<Self> {
        match spec {
            KernelSpec::Identity => Ok(Kernel::identity()),
            KernelSpec::Constant { value } => {
                if !value.is_finite() {
                    return Err(Error::NonFinite("constant kernel value".into()));
                }
                Ok(Kernel::constant(*value))
            }
            KernelSpec::Exponential => Ok(Kernel::exponential()),
            KernelSpec::Sqrt => Ok(Kernel::sqrt()),
            KernelSpec::Poly { coeffs } => Kernel::polynomial(coeffs),
            KernelSpec::Custom { f0, f2, df2, d2f2, d3f2, samples } => {
                Kernel::custom(*f0, *f2, *df2, *d2f2, *d3f2, samples)
            }
        }
    }

    fn smooth(name: &str, eval: ScalarFn, derivative: ScalarFn, local: [f64; 5]) -> Self {
        let [f0, f2, df2, d2f2, d3f2] = local;
        Kernel {
            name: name.into(),
            eval,
            derivative: Some(derivative),
            f0,
            f2,
            df2,
            d2f2,
            d3f2,
            order: 3,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    /// `f'(x)` where a derivative map is available.
    pub fn derivative(&self, x: f64) -> Option<f64> {
        self.derivative.as_ref().map(|d| d(x))
    }

    pub fn has_derivative_map(&self) -> bool {
        self.derivative.is_some()
    }

    pub fn f0(&self) -> f64 {
        self.f0
    }

    pub fn f2(&self) -> f64 {
        self.f2
    }

    pub fn df2(&self) -> f64 {
        self.df2
    }

    pub fn d2f2(&self) -> f64 {
        self.d2f2
    }

    pub fn d3f2(&self) -> f64 {
        self.d3f2
    }

    pub fn smoothness_order(&self) -> u8 {
        self.order
    }
}

fn differentiate(c: &[f64]) -> Vec<f64> {
    c.iter().enumerate().skip(1).map(|(k, a)| k as f64 * a).collect()
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, a| acc * x + a)
}

fn interpolate(pts: &[[f64; 2]], x: f64) -> f64 {
    let (lo, hi) = (pts[0][0], pts[pts.len() - 1][0]);
    if !(lo..=hi).contains(&x) {
        return f64::NAN;
    }
    let k = pts.partition_point(|p| p[0] <= x);
    if k == pts.len() {
        return pts[k - 1][1];
    }
    if k == 0 {
        return pts[0][1];
    }
    let ([x0, y0], [x1, y1]) = (pts[k - 1], pts[k]);
    if x == x0 {
        return y0;
    }
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

/// The limit law is `shift + scale * S` with `S` Marchenko-Pastur.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineCoefficients {
    pub shift: f64,
    pub scale: f64,
}

/// `shift = f(0) - f(2) + 2 f'(2)`, `scale = -2 f'(2)`.
pub fn limit_coefficients(kernel: &Kernel) -> AffineCoefficients {
    AffineCoefficients {
        shift: kernel.f0 - kernel.f2 + 2.0 * kernel.df2,
        scale: -2.0 * kernel.df2,
    }
}

/// Coefficients `c_kl`, `1 <= k + l <= 3`, of the expansion
/// `f(2 + z_i + z_j) ~ f(2) + sum c_kl z_i^k z_j^l`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaylorCoefficients {
    c: [[f64; 4]; 4],
}

impl TaylorCoefficients {
    /// `c_kl`; zero outside `1 <= k + l <= 3`.
    pub fn get(&self, k: usize, l: usize) -> f64 {
        if k + l == 0 || k + l > 3 {
            0.0
        } else {
            self.c[k][l]
        }
    }

    /// `sum_{1 <= k+l <= 3} c_kl a^k b^l`, always summed in the same order.
    #[allow(clippy::needless_range_loop)]
    pub fn expansion(&self, a: f64, b: f64) -> f64 {
        let pa = [1.0, a, a * a, a * a * a];
        let pb = [1.0, b, b * b, b * b * b];
        let mut s = 0.0;
        for k in 0..=3 {
            for l in 0..=3 - k {
                if k + l > 0 {
                    s += self.c[k][l] * pa[k] * pb[l];
                }
            }
        }
        s
    }
}

pub fn taylor_coefficients(kernel: &Kernel) -> Result<TaylorCoefficients> {
    if kernel.order < 3 {
        return Err(Error::UnsupportedOrder {
            required: 3,
            available: kernel.order,
        });
    }
    let (d1, d2, d3) = (kernel.df2, kernel.d2f2, kernel.d3f2);
    let mut c = [[0.0; 4]; 4];
    c[1][0] = d1;
    c[0][1] = d1;
    c[2][0] = d2 / 2.0;
    c[0][2] = d2 / 2.0;
    c[1][1] = d2;
    c[3][0] = d3 / 6.0;
    c[0][3] = d3 / 6.0;
    c[2][1] = d3 / 2.0;
    c[1][2] = d3 / 2.0;
    Ok(TaylorCoefficients { c })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_spec_short_forms() {
        assert_eq!("exp".parse::<KernelSpec>().unwrap(), KernelSpec::Exponential);
        assert_eq!("constant:2.5".parse::<KernelSpec>().unwrap(), KernelSpec::Constant { value: 2.5 });
        assert_eq!(
            "poly:1,0,-0.5".parse::<KernelSpec>().unwrap(),
            KernelSpec::Poly { coeffs: vec![1.0, 0.0, -0.5] }
        );
        assert!("poly".parse::<KernelSpec>().is_err());
        assert!("constant:x".parse::<KernelSpec>().is_err());
    }

    fn builtins() -> Vec<Kernel> {
        vec![
            Kernel::identity(),
            Kernel::constant(2.5),
            Kernel::exponential(),
            Kernel::sqrt(),
            Kernel::polynomial(&[1.0, -0.5, 0.25, 0.125]).unwrap(),
        ]
    }

    #[test]
    fn stored_values_match_evaluate() {
        for k in builtins() {
            assert!((k.evaluate(0.0) - k.f0()).abs() <= 1e-12, "{}", k.name());
            assert!((k.evaluate(2.0) - k.f2()).abs() <= 1e-12, "{}", k.name());
        }
    }

    #[test]
    fn stored_derivatives_match_finite_differences() {
        for k in builtins() {
            let f = |x: f64| k.evaluate(x);
            let h = 1e-4;
            let d1 = (f(2.0 + h) - f(2.0 - h)) / (2.0 * h);
            let d2 = (f(2.0 + h) - 2.0 * f(2.0) + f(2.0 - h)) / (h * h);
            // A 1e-4 step drowns the third difference in rounding error; use 1e-2.
            let h3 = 1e-2;
            let d3 = (f(2.0 + 2.0 * h3) - 2.0 * f(2.0 + h3) + 2.0 * f(2.0 - h3) - f(2.0 - 2.0 * h3))
                / (2.0 * h3 * h3 * h3);
            assert!((d1 - k.df2()).abs() <= 1e-5, "{} f'", k.name());
            assert!((d2 - k.d2f2()).abs() <= 1e-5, "{} f''", k.name());
            assert!((d3 - k.d3f2()).abs() <= 1e-5, "{} f''' {d3} vs {}", k.name(), k.d3f2());
            let dmap = k.derivative(2.0).unwrap();
            assert!((dmap - k.df2()).abs() <= 1e-12);
        }
    }

    #[test]
    fn limit_coefficients_examples() {
        let id = limit_coefficients(&Kernel::identity());
        assert_eq!((id.shift, id.scale), (0.0, -2.0));
        let c = limit_coefficients(&Kernel::constant(3.0));
        assert_eq!((c.shift, c.scale), (0.0, 0.0));
        let e = limit_coefficients(&Kernel::exponential());
        let e2 = (-2.0f64).exp();
        assert!((e.shift - (1.0 - 3.0 * e2)).abs() <= 1e-15);
        assert!((e.scale - 2.0 * e2).abs() <= 1e-15);
    }

    #[test]
    fn taylor_identity_and_square() {
        let t = taylor_coefficients(&Kernel::identity()).unwrap();
        for k in 0..=3 {
            for l in 0..=3 {
                let expect = if k + l == 1 { 1.0 } else { 0.0 };
                assert_eq!(t.get(k, l), expect, "c_{k}{l}");
            }
        }
        // (2 + a + b)^2 = 4 + 4a + 4b + a^2 + 2ab + b^2
        let t = taylor_coefficients(&Kernel::polynomial(&[0.0, 0.0, 1.0]).unwrap()).unwrap();
        assert_eq!((t.get(1, 0), t.get(0, 1)), (4.0, 4.0));
        assert_eq!((t.get(2, 0), t.get(0, 2), t.get(1, 1)), (1.0, 1.0, 2.0));
        assert_eq!((t.get(3, 0), t.get(2, 1), t.get(1, 2), t.get(0, 3)), (0.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn taylor_matches_one_variable_expansion() {
        // With z_i = z_j = z the terms of total degree m must equal
        // f^(m)(2) (2z)^m / m!.
        for kern in builtins() {
            let t = taylor_coefficients(&kern).unwrap();
            let derivs = [kern.df2(), kern.d2f2(), kern.d3f2()];
            for m in 1..=3usize {
                let by_table: f64 = (0..=m).map(|k| t.get(k, m - k)).sum();
                let fact = [1.0, 1.0, 2.0, 6.0][m];
                let direct = derivs[m - 1] * 2f64.powi(m as i32) / fact;
                assert!((by_table - direct).abs() <= 1e-14, "{} m={m}", kern.name());
            }
            for k in 0..=3 {
                for l in 0..=3 {
                    assert_eq!(t.get(k, l), t.get(l, k));
                }
            }
        }
    }

    #[test]
    fn low_order_custom_kernel_refuses_taylor_table() {
        let k = Kernel::custom(1.0, 0.5, -0.2, None, None, &[[0.0, 1.0], [4.0, 0.0]]).unwrap();
        assert_eq!(k.smoothness_order(), 1);
        assert!(matches!(
            taylor_coefficients(&k),
            Err(Error::UnsupportedOrder { required: 3, available: 1 })
        ));
        assert!(!k.has_derivative_map());
        assert_eq!(k.evaluate(1.0), 0.75);
        assert!(k.evaluate(5.0).is_nan());
    }

    #[test]
    fn spec_parsing() {
        let spec: KernelSpec = toml::from_str("name = \"poly\"\ncoeffs = [1.0, 2.0]").unwrap();
        assert_eq!(spec, KernelSpec::Poly { coeffs: vec![1.0, 2.0] });
        let spec: KernelSpec = serde_json::from_str(r#"{"name":"constant"}"#).unwrap();
        assert_eq!(spec, KernelSpec::Constant { value: 1.0 });
        let spec: KernelSpec = serde_json::from_str(
            r#"{"name":"custom","f0":1,"f2":0.5,"df2":-0.25,"d2f2":0.1,"d3f2":0.0,"samples":[[0,1],[4,0]]}"#,
        )
        .unwrap();
        let k = Kernel::from_spec(&spec).unwrap();
        assert_eq!(k.smoothness_order(), 3);
    }
}
