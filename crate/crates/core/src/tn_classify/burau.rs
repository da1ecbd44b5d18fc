//! Reduced Burau representation at `t = −1` and its spectral radius.
//!
//! On the unit circle the Burau spectral radius bounds the dilation from
//! below. At `t = −1` the matrices are integral, so the whole product and its
//! characteristic polynomial are computed exactly. The characteristic
//! polynomial is monic with integer coefficients. By Kronecker's theorem its
//! roots are either all roots of unity or some root has modulus bounded away
//! from one, so a radius within [`UNIT_RADIUS_SLACK`] of one is exactly one.

use nalgebra::{Complex, DMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::braid::{BraidWord, Letter, Sign};

/// Radii within this distance of 1 are treated as exactly 1.
pub const UNIT_RADIUS_SLACK: f64 = 1e-6;

/// Dense square integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    dim: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![BigInt::zero(); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = BigInt::one();
        }
        IntMatrix { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.dim + c]
    }

    fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.dim + c] = BigInt::from(v);
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        let d = self.dim;
        let mut data = vec![BigInt::zero(); d * d];
        for r in 0..d {
            for k in 0..d {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..d {
                    data[r * d + c] += a * other.get(k, c);
                }
            }
        }
        IntMatrix { dim: d, data }
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        (0..self.dim)
            .map(|r| (0..self.dim).map(|c| self.get(r, c) * &v[c]).sum())
            .collect()
    }

    pub fn trace(&self) -> BigInt {
        (0..self.dim).map(|i| self.get(i, i).clone()).sum()
    }

    /// Characteristic polynomial `det(xI − A)`, coefficients lowest degree
    /// first, by Faddeev–LeVerrier (all divisions are exact).
    pub fn char_poly(&self) -> Vec<BigInt> {
        let n = self.dim;
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        let mut m = IntMatrix {
            dim: n,
            data: vec![BigInt::zero(); n * n],
        };
        for k in 1..=n {
            m = self.mul(&m);
            for i in 0..n {
                m.data[i * n + i] += &coeffs[n - k + 1];
            }
            let (q, r) = (-self.mul(&m).trace()).div_rem(&BigInt::from(k));
            debug_assert!(r.is_zero());
            coeffs[n - k] = q;
        }
        coeffs
    }
}

/// Reduced Burau matrix of one generator at `t = −1`, size `(n−1)×(n−1)`.
///
/// With general `t`, `σᵢ` acts by the block `[[1, t, 0], [0, −t, 0], [0, 1, 1]]`
/// on rows/columns `i−1, i, i+1`, truncated at the edges.
pub fn generator_matrix(n: usize, letter: Letter) -> IntMatrix {
    let d = n - 1;
    let i = letter.index - 1;
    let mut m = IntMatrix::identity(d);
    match letter.sign {
        Sign::Pos => {
            if i >= 1 {
                m.set(i - 1, i, -1);
            }
            if i + 1 < d {
                m.set(i + 1, i, 1);
            }
        }
        Sign::Neg => {
            if i >= 1 {
                m.set(i - 1, i, 1);
            }
            if i + 1 < d {
                m.set(i + 1, i, -1);
            }
        }
    }
    m
}

/// Product of generator matrices in letter order.
pub fn burau_matrix(braid: &BraidWord) -> IntMatrix {
    braid
        .letters()
        .iter()
        .fold(IntMatrix::identity(braid.strands() - 1), |acc, &l| {
            acc.mul(&generator_matrix(braid.strands(), l))
        })
}

type RatPoly = Vec<BigRational>;

fn trim(p: &mut RatPoly) {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn poly_divmod(num: &RatPoly, den: &RatPoly) -> (RatPoly, RatPoly) {
    let mut rem = num.clone();
    trim(&mut rem);
    let dd = den.len() - 1;
    let lead = den[dd].clone();
    if rem.len() < den.len() {
        return (vec![BigRational::zero()], rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + dd] / &lead;
        for (j, d) in den.iter().enumerate() {
            let t = &c * d;
            rem[k + j] -= t;
        }
        quot[k] = c;
    }
    rem.truncate(dd.max(1));
    trim(&mut rem);
    (quot, rem)
}

fn is_zero_poly(p: &RatPoly) -> bool {
    p.iter().all(Zero::is_zero)
}

fn poly_gcd(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    trim(&mut a);
    trim(&mut b);
    while !is_zero_poly(&b) {
        let (_, r) = poly_divmod(&a, &b);
        a = b;
        b = r;
    }
    let lead = a.last().unwrap().clone();
    a.iter().map(|c| c / &lead).collect()
}

/// Squarefree part of an integer polynomial, made monic.
fn squarefree(p: &[BigInt]) -> Vec<f64> {
    let p: RatPoly = p.iter().map(|c| BigRational::from_integer(c.clone())).collect();
    let dp: RatPoly = if p.len() > 1 {
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
            .collect()
    } else {
        vec![BigRational::zero()]
    };
    let g = poly_gcd(&p, &dp);
    let (q, _) = poly_divmod(&p, &g);
    let lead = q.last().unwrap().clone();
    q.iter().map(|c| (c / &lead).to_f64().unwrap_or(f64::NAN)).collect()
}

fn horner(p: &[f64], z: Complex<f64>) -> (Complex<f64>, Complex<f64>) {
    let mut val = Complex::new(0.0, 0.0);
    let mut der = Complex::new(0.0, 0.0);
    for &c in p.iter().rev() {
        der = der * z + val;
        val = val * z + c;
    }
    (val, der)
}

/// Largest root modulus of a monic polynomial with simple roots.
fn max_root_modulus(p: &[f64]) -> f64 {
    let deg = p.len() - 1;
    if deg == 0 {
        return 0.0;
    }
    let companion = DMatrix::from_fn(deg, deg, |r, c| {
        if r == 0 {
            -p[deg - 1 - c]
        } else if r == c + 1 {
            1.0
        } else {
            0.0
        }
    });
    companion
        .complex_eigenvalues()
        .iter()
        .map(|&z0| {
            let mut z = z0;
            for _ in 0..50 {
                let (v, d) = horner(p, z);
                if d.norm() == 0.0 {
                    break;
                }
                let step = v / d;
                z -= step;
                if step.norm() <= 1e-17 * z.norm().max(1.0) {
                    break;
                }
            }
            z.norm()
        })
        .fold(0.0, f64::max)
}

/// Spectral radius of an integer matrix with unit determinant, exact to
/// floating-point precision.
pub fn spectral_radius(m: &IntMatrix) -> f64 {
    let radius = max_root_modulus(&squarefree(&m.char_poly()));
    if (radius - 1.0).abs() <= UNIT_RADIUS_SLACK {
        1.0
    } else {
        radius
    }
}

/// `ln` of the Burau spectral radius at `t = −1`; zero when the radius is at most one.
pub fn burau_lower_bound(braid: &BraidWord) -> f64 {
    if braid.strands() < 2 {
        return 0.0;
    }
    let radius = spectral_radius(&burau_matrix(braid));
    if radius <= 1.0 {
        0.0
    } else {
        radius.ln()
    }
}

/// Power iteration on exact integer iterates `Mᵏv`, reporting `ln |ρ|` from
/// the floating-point Rayleigh quotient of the last two iterates. Only
/// meaningful when the dominant eigenvalue is real and simple.
pub fn rayleigh_log_radius(m: &IntMatrix, steps: usize) -> f64 {
    let mut v: Vec<BigInt> = (0..m.dim()).map(|k| BigInt::from(k as i64 + 1)).collect();
    let mut prev = v.clone();
    for _ in 0..steps {
        prev = v;
        v = m.mul_vec(&prev);
    }
    // Rescale both vectors by a common power of two before leaving the integers.
    let bits = prev.iter().chain(&v).map(|x| x.bits()).max().unwrap_or(0);
    let shift = bits.saturating_sub(400);
    let f = |x: &BigInt| (x >> shift).to_f64().unwrap();
    let num: f64 = prev.iter().zip(&v).map(|(a, b)| f(a) * f(b)).sum();
    let den: f64 = prev.iter().map(|a| f(a) * f(a)).sum();
    (num / den).abs().ln()
}
