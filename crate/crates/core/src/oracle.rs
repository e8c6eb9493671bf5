//! Brute-force reference solvers.
//!
//! Nothing here calls the closed-form modules. The test suite and the
//! `verify` command compare both sides.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Linear input-output network of `n` damped modes driven through one port.
///
/// In the frequency domain (convention `e^{−iωt}`) the mode amplitudes obey
/// `Σ_k [(κ_j/2 − i(ω − ω_j)) δ_jk + i G_jk] a_k = √κ_p δ_jp a_in`, and the
/// output is `a_out = √κ_p a_p − a_in`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearNetwork {
    pub frequencies: Vec<f64>,
    pub decay_rates: Vec<f64>,
    /// Row-major `n × n` Hermitian coupling matrix; the diagonal is ignored.
    pub couplings: Vec<Complex64>,
    pub port: usize,
}

impl LinearNetwork {
    pub fn new(frequencies: Vec<f64>, decay_rates: Vec<f64>, couplings: Vec<Complex64>, port: usize) -> Result<Self> {
        let net = Self { frequencies, decay_rates, couplings, port };
        net.validate()?;
        Ok(net)
    }

    /// Network with real symmetric couplings given as `(i, j, g)` triples.
    pub fn with_real_couplings(
        frequencies: Vec<f64>,
        decay_rates: Vec<f64>,
        edges: &[(usize, usize, f64)],
        port: usize,
    ) -> Result<Self> {
        let n = frequencies.len();
        let mut couplings = vec![Complex64::new(0.0, 0.0); n * n];
        for &(i, j, g) in edges {
            if i >= n || j >= n || i == j {
                return Err(Error::Precondition(format!("bad coupling edge ({i}, {j})")));
            }
            couplings[i * n + j] = Complex64::new(g, 0.0);
            couplings[j * n + i] = Complex64::new(g, 0.0);
        }
        Self::new(frequencies, decay_rates, couplings, port)
    }

    pub fn modes(&self) -> usize {
        self.frequencies.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.modes();
        if n == 0 || self.decay_rates.len() != n || self.couplings.len() != n * n {
            return Err(Error::Precondition("inconsistent network dimensions".into()));
        }
        if self.port >= n {
            return Err(Error::Precondition(format!("port {} out of range for {n} modes", self.port)));
        }
        if self.decay_rates.iter().any(|&k| !(k >= 0.0)) {
            return Err(Error::Precondition("decay rates must be >= 0".into()));
        }
        for i in 0..n {
            for j in 0..n {
                let a = self.couplings[i * n + j];
                let b = self.couplings[j * n + i].conj();
                if (a - b).norm() > 1e-12 * (1.0 + a.norm()) {
                    return Err(Error::Precondition(format!("coupling matrix not Hermitian at ({i}, {j})")));
                }
            }
        }
        Ok(())
    }
}

/// Reflection at the port, `r = κ_p a_p / a_in − 1`, by direct linear solve.
pub fn scattering_response(net: &LinearNetwork, omega: f64) -> Result<Complex64> {
    let kp = net.decay_rates[net.port];
    Ok(kp * port_resolvent(net, omega)? - 1.0)
}

/// Diagonal port entry of the inverse system matrix: the port-mode response
/// to a unit drive on the port mode.
pub fn port_resolvent(net: &LinearNetwork, omega: f64) -> Result<Complex64> {
    let n = net.modes();
    let i = Complex64::i();
    let mut m = vec![Complex64::new(0.0, 0.0); n * n];
    for j in 0..n {
        for k in 0..n {
            m[j * n + k] = if j == k {
                Complex64::new(0.5 * net.decay_rates[j], -(omega - net.frequencies[j]))
            } else {
                i * net.couplings[j * n + k]
            };
        }
    }
    let mut rhs = vec![Complex64::new(0.0, 0.0); n];
    rhs[net.port] = Complex64::new(1.0, 0.0);
    let x = solve(&mut m, &mut rhs, n)?;
    Ok(x[net.port])
}

/// Gaussian elimination with partial pivoting on a row-major `n × n` system.
pub fn solve(m: &mut [Complex64], rhs: &mut [Complex64], n: usize) -> Result<Vec<Complex64>> {
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut min_pivot = f64::INFINITY;
    let mut max_pivot: f64 = 0.0;
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&a, &b| m[a * n + col].norm().total_cmp(&m[b * n + col].norm()))
            .expect("non-empty range");
        let p = m[piv * n + col].norm();
        min_pivot = min_pivot.min(p);
        max_pivot = max_pivot.max(p);
        if p == 0.0 || p <= 1e-300 * scale.max(1e-300) {
            return Err(Error::SingularMatrix { condition: f64::INFINITY });
        }
        if piv != col {
            for k in 0..n {
                m.swap(col * n + k, piv * n + k);
            }
            rhs.swap(col, piv);
        }
        let inv = m[col * n + col].inv();
        for row in col + 1..n {
            let factor = m[row * n + col] * inv;
            if factor == Complex64::new(0.0, 0.0) {
                continue;
            }
            for k in col..n {
                let v = m[col * n + k];
                m[row * n + k] -= factor * v;
            }
            let v = rhs[col];
            rhs[row] -= factor * v;
        }
    }
    let condition = max_pivot / min_pivot;
    if condition > 1e15 {
        return Err(Error::SingularMatrix { condition });
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for row in (0..n).rev() {
        let mut acc = rhs[row];
        for k in row + 1..n {
            acc -= m[row * n + k] * x[k];
        }
        x[row] = acc / m[row * n + row];
    }
    Ok(x)
}

/// Complex roots of `(κ/2 − i(ω − ω_c))(γ/2 − i(ω − ω_m)) + g² = 0` in `ω`.
///
/// Equivalent to `(ω − p_c)(ω − p_m) = g²` with `p_c = ω_c − iκ/2`,
/// `p_m = ω_m − iγ/2`. Real parts are the pole frequencies, `−Im` the
/// half-linewidths. Returned with ascending real part.
pub fn d_poles(omega_c: f64, omega_m: f64, g: f64, kappa: f64, gamma: f64) -> [Complex64; 2] {
    let pc = Complex64::new(omega_c, -0.5 * kappa);
    let pm = Complex64::new(omega_m, -0.5 * gamma);
    // ω² + bω + c = 0
    let b = -(pc + pm);
    let c = pc * pm - g * g;
    let disc = (b * b - 4.0 * c).sqrt();
    // pick the sign that avoids cancellation in b ± disc
    let s = if (b.conj() * disc).re >= 0.0 { disc } else { -disc };
    let q = -0.5 * (b + s);
    let mut roots = if q == Complex64::new(0.0, 0.0) {
        [Complex64::new(0.0, 0.0); 2]
    } else {
        [q, c / q]
    };
    roots.sort_by(|a, b| a.re.total_cmp(&b.re));
    roots
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations, ascending.
///
/// `matrix` is row-major `n × n`, `n ≤ 8`.
pub fn dense_symmetric_eigenvalues(matrix: &[f64], n: usize) -> Result<Vec<f64>> {
    if n == 0 || n > 8 || matrix.len() != n * n {
        return Err(Error::Precondition(format!("need a square matrix of size 1..=8, got n = {n}")));
    }
    let norm = matrix.iter().map(|v| v * v).sum::<f64>().sqrt();
    for i in 0..n {
        for j in i + 1..n {
            if (matrix[i * n + j] - matrix[j * n + i]).abs() > 1e-12 * norm.max(1.0) {
                return Err(Error::Precondition(format!("matrix not symmetric at ({i}, {j})")));
            }
        }
    }
    let mut a = matrix.to_vec();
    let off = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j] * a[i * n + j];
                }
            }
        }
        s.sqrt()
    };
    let target = 1e-14 * norm;
    for _sweep in 0..100 {
        if off(&a) <= target {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}
