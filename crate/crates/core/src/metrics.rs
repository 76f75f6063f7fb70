//! Decoding latency and per-output-bit complexity of block BP and
//! sliding-window decoding, and improvement ratios against reference codes.
//!
//! Latency is counted in received bits the decoder must buffer before it can
//! output. Complexity is the per-output-bit operation count
//! `I_avg f(x, R)` with `f(x, R) = 8 (8x + 12R - 11) + x`, scaled by the
//! window length for sliding-window decoding.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

fn check_rate<T: Scalar>(r: T) -> Result<()> {
    if !(r > T::zero() && r < T::one()) {
        return Err(Error::param(format!("rate must lie in (0, 1), got {r:?}")));
    }
    Ok(())
}

fn check_iters<T: Scalar>(i_avg: T) -> Result<()> {
    if !(i_avg >= T::one()) {
        return Err(Error::param(format!("average iterations must be at least 1, got {i_avg:?}")));
    }
    Ok(())
}

/// `8 (8x + 12R - 11) + x`.
pub fn f_complexity<T: Scalar>(x: u64, rate: T) -> Result<T> {
    if x == 0 {
        return Err(Error::param("x must be at least 1"));
    }
    check_rate(rate)?;
    let x = T::from_int(x as i64);
    let k = |v: i64| T::from_int(v);
    Ok(k(8) * (k(8) * x + k(12) * rate - k(11)) + x)
}

/// `nN`.
pub fn latency_bp(n: u64, lifting: u64) -> u64 {
    n * lifting
}

/// `I_avg f(m, R)`.
pub fn complexity_bp<T: Scalar>(i_avg: T, m: u64, rate: T) -> Result<T> {
    check_iters(i_avg)?;
    Ok(i_avg * f_complexity(m, rate)?)
}

/// `alpha (m_h + 1) a`.
pub fn latency_sw<T: Scalar>(alpha: T, memory: u64, a: u64) -> Result<T> {
    if !(alpha > T::zero()) {
        return Err(Error::param("alpha must be positive"));
    }
    Ok(alpha * T::from_int((memory + 1) as i64) * T::from_int(a as i64))
}

/// `alpha (m_h + 1) I_avg f(c, R)`.
pub fn complexity_sw<T: Scalar>(alpha: T, memory: u64, i_avg: T, c: u64, rate: T) -> Result<T> {
    if !(alpha > T::zero()) {
        return Err(Error::param("alpha must be positive"));
    }
    check_iters(i_avg)?;
    Ok(alpha * T::from_int((memory + 1) as i64) * i_avg * f_complexity(c, rate)?)
}

/// Constraint length `(m_h + 1) a`.
pub fn constraint_length(memory: u64, a: u64) -> u64 {
    (memory + 1) * a
}

/// `N_new / N_ref`.
pub fn theta_n<T: Scalar>(n_new: u64, n_ref: u64) -> Result<T> {
    if n_new == 0 || n_ref == 0 {
        return Err(Error::param("lifting degrees must be positive"));
    }
    Ok(T::from_ratio(n_new as i64, n_ref as i64))
}

/// `(m_h,new + 1) / (m_h,ref + 1)`.
pub fn theta_mh<T: Scalar>(mh_new: u64, mh_ref: u64) -> T {
    T::from_ratio(mh_new as i64 + 1, mh_ref as i64 + 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    Bp,
    Sw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RateKind {
    /// `(cols - rank) / cols` of the expanded matrix.
    Effective,
    /// `(n - m) / n` of the base matrix.
    Design,
}

/// What an `I_avg` figure counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IavgSource {
    UserSupplied,
    /// Iterations per codeword of early-stopped block BP.
    PerCodeword,
    /// Iterations per window position of sliding-window decoding.
    PerWindowPosition,
    /// Iterations per committed output block of `a` symbols.
    PerOutputBlock,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportInputs<T> {
    /// `n` for block codes, `a` for convolutional codes.
    pub cols: u64,
    /// `m` for block codes, `c` for convolutional codes.
    pub rows: u64,
    pub lifting: Option<u64>,
    pub memory: Option<u64>,
    pub rate: T,
    pub rate_kind: RateKind,
    pub alpha: Option<T>,
    pub i_avg: Option<T>,
    pub i_avg_source: Option<IavgSource>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatencyReport<T> {
    pub scheme: Scheme,
    pub latency_bits: T,
    /// Present when an iteration count was available.
    pub per_bit_complexity: Option<T>,
    pub inputs: ReportInputs<T>,
}

impl<T: Scalar> LatencyReport<T> {
    /// Block BP on an `m x n` code lifted by `N`.
    pub fn bp(
        m: u64,
        n: u64,
        lifting: u64,
        rate: T,
        rate_kind: RateKind,
        i_avg: Option<(T, IavgSource)>,
    ) -> Result<Self> {
        check_rate(rate)?;
        let per_bit_complexity = i_avg.map(|(i, _)| complexity_bp(i, m, rate)).transpose()?;
        Ok(Self {
            scheme: Scheme::Bp,
            latency_bits: T::from_int(latency_bp(n, lifting) as i64),
            per_bit_complexity,
            inputs: ReportInputs {
                cols: n,
                rows: m,
                lifting: Some(lifting),
                memory: None,
                rate,
                rate_kind,
                alpha: None,
                i_avg: i_avg.map(|x| x.0),
                i_avg_source: i_avg.map(|x| x.1),
            },
        })
    }

    /// Sliding-window decoding of a `c x a` code with memory `m_h`.
    pub fn sw(
        c: u64,
        a: u64,
        memory: u64,
        alpha: T,
        rate: T,
        rate_kind: RateKind,
        i_avg: Option<(T, IavgSource)>,
    ) -> Result<Self> {
        check_rate(rate)?;
        let per_bit_complexity = i_avg.map(|(i, _)| complexity_sw(alpha, memory, i, c, rate)).transpose()?;
        Ok(Self {
            scheme: Scheme::Sw,
            latency_bits: latency_sw(alpha, memory, a)?,
            per_bit_complexity,
            inputs: ReportInputs {
                cols: a,
                rows: c,
                lifting: None,
                memory: Some(memory),
                rate,
                rate_kind,
                alpha: Some(alpha),
                i_avg: i_avg.map(|x| x.0),
                i_avg_source: i_avg.map(|x| x.1),
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    #[test]
    fn f_spot_values() {
        assert!((f_complexity(3, 0.263f64).unwrap() - 132.248).abs() < 1e-12);
        assert_eq!(f_complexity(1, Rational64::new(11, 12)).unwrap(), Rational64::from_integer(65));
        assert_eq!(f_complexity(4, 0.5f64).unwrap(), 220.0);
        assert!(f_complexity(0, 0.5f64).is_err());
        assert!(f_complexity(3, 1.0f64).is_err());
    }

    #[test]
    fn latencies() {
        assert_eq!(latency_bp(4, 37), 148);
        assert_eq!(latency_bp(8, 409), 3272);
        assert_eq!(latency_sw(5.0f64, 297, 8).unwrap(), 11920.0);
        assert_eq!(latency_sw(Rational64::from_integer(5), 0, 1).unwrap(), Rational64::from_integer(5));
        assert_eq!(constraint_length(297, 8), 2384);
        assert_eq!(constraint_length(652, 8), 5224);
    }

    #[test]
    fn zero_iterations_rejected() {
        assert!(complexity_bp(0.0f64, 3, 0.5).is_err());
        assert!(complexity_sw(5.0f64, 3, 0.0, 3, 0.5).is_err());
    }

    #[test]
    fn thetas() {
        assert!((theta_mh::<f64>(297, 652) - 0.4563).abs() < 1e-4);
        assert_eq!(theta_n::<Rational64>(139, 145).unwrap(), Rational64::new(139, 145));
        assert_eq!(theta_mh::<Rational64>(7, 7), Rational64::from_integer(1));
        assert!(theta_n::<f64>(1, 0).is_err());
    }

    #[test]
    fn bp_complexity_ignores_lifting() {
        let a = LatencyReport::bp(3, 4, 37, 0.25f64, RateKind::Design, Some((5.0, IavgSource::UserSupplied))).unwrap();
        let b = LatencyReport::bp(3, 4, 1000, 0.25f64, RateKind::Design, Some((5.0, IavgSource::UserSupplied))).unwrap();
        assert_eq!(a.per_bit_complexity, b.per_bit_complexity);
        assert!(a.latency_bits < b.latency_bits);
    }
}
