//! Fixed-width integer arithmetic for roots with coordinates in `Z[lambda]`.
//!
//! Every root of the geometric representation has integral coordinates, so
//! the hot loops (reflections, depth, signs) run on `i64` vectors and only
//! drop to exact big-integer arithmetic on overflow or near-zero values.

use num_bigint::BigInt;

use super::{CoxeterSystem, Gen, Root};
use crate::field::{AlgebraicField, FieldScalar};

/// Root coordinates, `rank * degree` integers: coordinate `t` occupies
/// `[t * degree, (t + 1) * degree)` in the power basis of `lambda`.
pub type IntRoot = Vec<i64>;

#[derive(Debug)]
pub(crate) struct IntArith {
    degree: usize,
    /// Row-major `degree x degree` matrix of multiplication by `2cos(pi/m_st)`,
    /// `None` when that scalar is zero (and on the diagonal).
    mult: Vec<Vec<Option<Vec<i64>>>>,
    lambda_pows: Vec<f64>,
}

impl IntArith {
    pub(crate) fn new(field: &AlgebraicField, two_cos: &[Vec<FieldScalar>]) -> Self {
        let d = field.degree();
        let n = two_cos.len();
        let mut basis = Vec::with_capacity(d);
        let mut p = field.one();
        for _ in 0..d {
            basis.push(p.clone());
            p = field.mul(&p, &field.lambda());
        }
        let mult = (0..n)
            .map(|s| {
                (0..n)
                    .map(|t| {
                        let c = &two_cos[s][t];
                        if s == t || c.is_zero() {
                            return None;
                        }
                        let mut m = vec![0i64; d * d];
                        for (j, b) in basis.iter().enumerate() {
                            let prod = field.mul(c, b);
                            assert!(prod.is_integral(), "2cos(pi/m) is an algebraic integer");
                            for (i, v) in prod.numerators().iter().enumerate() {
                                m[i * d + j] = i64::try_from(v).expect("small structure constant");
                            }
                        }
                        Some(m)
                    })
                    .collect()
            })
            .collect();
        let lambda = if field.is_rational() {
            1.0
        } else {
            2.0 * (std::f64::consts::PI / field.conductor() as f64).cos()
        };
        let lambda_pows = (0..d).map(|i| lambda.powi(i as i32)).collect();
        IntArith {
            degree: d,
            mult,
            lambda_pows,
        }
    }
}

impl CoxeterSystem {
    pub(crate) fn degree(&self) -> usize {
        self.arith.degree
    }

    /// Integer coordinates of a root, `None` if some coordinate is not
    /// integral or does not fit.
    pub fn int_root(&self, beta: &Root) -> Option<IntRoot> {
        let mut out = Vec::with_capacity(self.rank() * self.degree());
        for c in &beta.0 {
            if !c.is_integral() {
                return None;
            }
            for v in c.numerators() {
                out.push(i64::try_from(v).ok()?);
            }
        }
        Some(out)
    }

    pub fn int_to_root(&self, x: &[i64]) -> Root {
        let d = self.degree();
        Root(
            x.chunks(d)
                .map(|c| FieldScalar::from_integers(c.iter().map(|&v| BigInt::from(v)).collect()))
                .collect(),
        )
    }

    pub fn int_simple_root(&self, s: Gen) -> IntRoot {
        let mut v = vec![0; self.rank() * self.degree()];
        v[s * self.degree()] = 1;
        v
    }

    pub fn int_is_simple(&self, x: &[i64], s: Gen) -> bool {
        let d = self.degree();
        x.iter().enumerate().all(|(i, &v)| {
            if i == s * d {
                v == 1
            } else {
                v == 0
            }
        })
    }

    /// `sum_t 2cos(pi/m_st) x_t` over `t != s`, accumulated into `acc`.
    fn int_accumulate(&self, s: Gen, x: &[i64], sign: i128, acc: &mut [i128]) {
        let d = self.degree();
        for t in 0..self.rank() {
            let Some(m) = &self.arith.mult[s][t] else { continue };
            let xt = &x[t * d..(t + 1) * d];
            if xt.iter().all(|&v| v == 0) {
                continue;
            }
            for i in 0..d {
                let mut sum = 0i128;
                for j in 0..d {
                    sum += m[i * d + j] as i128 * xt[j] as i128;
                }
                acc[i] += sign * sum;
            }
        }
    }

    /// In-place `sigma_s`. Returns `false` (leaving `x` untouched) on overflow.
    pub fn int_reflect(&self, s: Gen, x: &mut [i64]) -> bool {
        let d = self.degree();
        let mut acc = [0i128; 32];
        let acc = if d <= 32 { &mut acc[..d] } else { return self.int_reflect_slow(s, x) };
        for i in 0..d {
            acc[i] = -(x[s * d + i] as i128);
        }
        self.int_accumulate(s, x, 1, acc);
        let mut out = [0i64; 32];
        for i in 0..d {
            match i64::try_from(acc[i]) {
                Ok(v) if v.unsigned_abs() < (1u64 << 62) => out[i] = v,
                _ => return false,
            }
        }
        x[s * d..(s + 1) * d].copy_from_slice(&out[..d]);
        true
    }

    fn int_reflect_slow(&self, s: Gen, x: &mut [i64]) -> bool {
        let r = self.reflect(s, &self.int_to_root(x));
        match self.int_root(&r) {
            Some(v) => {
                x.copy_from_slice(&v);
                true
            }
            None => false,
        }
    }

    /// Sign of `2 B(alpha_s, x)`.
    pub fn int_two_b_sign(&self, s: Gen, x: &[i64]) -> i8 {
        let d = self.degree();
        if d > 32 {
            return self.field().sign(&self.two_b(s, &self.int_to_root(x)));
        }
        let mut acc = [0i128; 32];
        let acc = &mut acc[..d];
        for i in 0..d {
            acc[i] = 2 * x[s * d + i] as i128;
        }
        self.int_accumulate(s, x, -1, acc);
        self.scalar_sign_i128(acc)
    }

    /// Sign of `sum a_i lambda^i`, by a guarded float evaluation with an exact fallback.
    pub(crate) fn scalar_sign_i128(&self, a: &[i128]) -> i8 {
        let mut v = 0.0f64;
        let mut mag = 0.0f64;
        let mut nonzero = false;
        for (i, &c) in a.iter().enumerate() {
            if c != 0 {
                nonzero = true;
                let t = c as f64 * self.arith.lambda_pows[i];
                v += t;
                mag += t.abs();
            }
        }
        if !nonzero {
            return 0;
        }
        if v.abs() > mag * 1e-12 {
            return if v > 0.0 { 1 } else { -1 };
        }
        let exact = FieldScalar::from_integers(a.iter().map(|&c| BigInt::from(c)).collect());
        self.field().sign(&exact)
    }

    pub fn int_scalar_sign(&self, a: &[i64]) -> i8 {
        let wide: Vec<i128> = a.iter().map(|&v| v as i128).collect();
        self.scalar_sign_i128(&wide)
    }

    pub fn int_root_sign(&self, x: &[i64]) -> i8 {
        for c in x.chunks(self.degree()) {
            if c.iter().any(|&v| v != 0) {
                return self.int_scalar_sign(c);
            }
        }
        0
    }

    /// Depth of a positive root, capped: `min(dp(beta), cap)`, where
    /// `dp(alpha_s) = 1` and `dp(sigma_s beta) = dp(beta) - 1` whenever
    /// `B(alpha_s, beta) > 0`.
    pub fn root_depth(&self, beta: &Root, cap: usize) -> usize {
        if let Some(x) = self.int_root(beta) {
            return self.int_root_depth(&x, cap);
        }
        self.root_depth_exact(beta.clone(), 0, cap)
    }

    pub fn int_root_depth(&self, x: &[i64], cap: usize) -> usize {
        let mut g = x.to_vec();
        let mut steps = 0;
        loop {
            if steps + 1 >= cap {
                return cap;
            }
            if (0..self.rank()).any(|s| self.int_is_simple(&g, s)) {
                return steps + 1;
            }
            let Some(s) = (0..self.rank()).find(|&s| self.int_two_b_sign(s, &g) > 0) else {
                unreachable!("a non-simple positive root has a descent");
            };
            if !self.int_reflect(s, &mut g) {
                let mut r = self.int_to_root(&g);
                self.reflect_in_place(s, &mut r);
                return self.root_depth_exact(r, steps + 1, cap);
            }
            steps += 1;
        }
    }

    fn root_depth_exact(&self, mut beta: Root, mut steps: usize, cap: usize) -> usize {
        loop {
            if steps + 1 >= cap {
                return cap;
            }
            if (0..self.rank()).any(|s| self.is_simple_root(&beta, s)) {
                return steps + 1;
            }
            let s = (0..self.rank())
                .find(|&s| self.field().sign(&self.two_b(s, &beta)) > 0)
                .expect("a non-simple positive root has a descent");
            self.reflect_in_place(s, &mut beta);
            steps += 1;
        }
    }
}
