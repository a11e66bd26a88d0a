//! Exact arithmetic in the real cyclotomic field `Q(2cos(pi/N))`.
//!
//! Every quantity `cos(pi/m)` appearing in a Coxeter matrix lives in
//! `Q(lambda)` with `lambda = 2cos(pi/N)` and `N` the least common multiple
//! of the finite entries. Scalars are stored as reduced residues modulo the
//! minimal polynomial of `lambda`, so equality is a coefficient comparison and
//! the sign is decided by interval evaluation over a dyadic enclosure of
//! `lambda`. No floating point is involved in any decision.

use std::cmp::Ordering;
use std::fmt;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Entry of a Coxeter matrix: a finite order or infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<u32> {
        match self {
            Order::Finite(m) => Some(m),
            Order::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Order::Infinite)
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(m) => write!(f, "{m}"),
            Order::Infinite => write!(f, "inf"),
        }
    }
}

// ---------------------------------------------------------------------------
// Integer and rational polynomial helpers (coefficients low to high).

fn trim_int(p: &mut Vec<BigInt>) {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn trim_rat(p: &mut Vec<BigRational>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

/// Exact division of integer polynomials; panics if `den` does not divide `num`.
fn int_poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    trim_int(&mut rem);
    let dd = den.len() - 1;
    let lead = &den[dd];
    if rem.len() < den.len() {
        return vec![BigInt::zero()];
    }
    let qd = rem.len() - den.len();
    let mut quot = vec![BigInt::zero(); qd + 1];
    for k in (0..=qd).rev() {
        let c = &rem[k + dd];
        if c.is_zero() {
            continue;
        }
        let (q, r) = c.div_rem(lead);
        assert!(r.is_zero(), "non-exact polynomial division");
        for (j, dj) in den.iter().enumerate() {
            rem[k + j] -= &q * dj;
        }
        quot[k] = q;
    }
    assert!(rem.iter().all(Zero::is_zero), "non-exact polynomial division");
    quot
}

/// Cyclotomic polynomial `Phi_n` by dividing `z^n - 1` by `Phi_d` for all
/// proper divisors `d` of `n`.
pub fn cyclotomic(n: u32) -> Vec<BigInt> {
    let mut cache: Vec<(u32, Vec<BigInt>)> = Vec::new();
    for d in 1..=n {
        if n % d != 0 {
            continue;
        }
        let mut p = vec![BigInt::zero(); d as usize + 1];
        p[0] = BigInt::from(-1);
        p[d as usize] = BigInt::one();
        for (e, phi_e) in &cache {
            if d % e == 0 {
                p = int_poly_div_exact(&p, phi_e);
            }
        }
        cache.push((d, p));
    }
    cache.pop().expect("n >= 1").1
}

/// Folds a palindromic polynomial `P(z)` of degree `2d` into `psi` of degree
/// `d` with `P(z) = z^d psi(z + 1/z)`.
fn fold_palindromic(p: &[BigInt]) -> Vec<BigInt> {
    let deg = p.len() - 1;
    assert!(deg % 2 == 0, "palindromic polynomial of odd degree");
    let d = deg / 2;
    // Laurent coefficients a_j for j = -d..=d, stored at index j + d.
    let mut a = p.to_vec();
    let mut psi = vec![BigInt::zero(); d + 1];
    for k in (0..=d).rev() {
        let c = a[k + d].clone();
        if c.is_zero() {
            continue;
        }
        // subtract c * (z + 1/z)^k = c * sum_i binom(k, i) z^(k - 2i)
        let mut binom = BigInt::one();
        for i in 0..=k {
            let exp = k as isize - 2 * i as isize;
            let idx = (exp + d as isize) as usize;
            a[idx] -= &c * &binom;
            binom = binom * BigInt::from(k - i) / BigInt::from(i + 1);
        }
        psi[k] = c;
    }
    debug_assert!(a.iter().all(Zero::is_zero));
    psi
}

fn euler_phi(mut n: u32) -> u32 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Minimal polynomial of `2cos(pi/n)` over the rationals (monic, integer,
/// low to high). For `n <= 2` this is the linear polynomial of the rational
/// value.
pub fn min_poly_two_cos(n: u32) -> Vec<BigInt> {
    match n {
        0 => panic!("order must be positive"),
        1 => vec![BigInt::from(2), BigInt::one()],
        2 => vec![BigInt::zero(), BigInt::one()],
        _ => {
            let phi = cyclotomic(2 * n);
            let psi = fold_palindromic(&phi);
            debug_assert_eq!(psi.len() - 1, euler_phi(2 * n) as usize / 2);
            psi
        }
    }
}

fn rat_poly_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    trim_rat(&mut r);
    let db = b.len() - 1;
    let lead = &b[db];
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let q = &r[r.len() - 1] / lead;
        for (j, bj) in b.iter().enumerate() {
            r[k + j] -= &q * bj;
        }
        r.pop();
        trim_rat(&mut r);
    }
    r
}

fn rat_poly_eval(p: &[BigRational], x: &BigRational) -> BigRational {
    p.iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * x + c)
}

/// Sturm chain of a squarefree polynomial.
fn sturm_chain(p: &[BigInt]) -> Vec<Vec<BigRational>> {
    let p0: Vec<BigRational> = p.iter().map(|c| BigRational::from(c.clone())).collect();
    let p1: Vec<BigRational> = p0
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from(BigInt::from(i)))
        .collect();
    let mut chain = vec![p0, p1];
    loop {
        let n = chain.len();
        let rem = rat_poly_rem(&chain[n - 2], &chain[n - 1]);
        if rem.is_empty() {
            break;
        }
        chain.push(rem.into_iter().map(|c| -c).collect());
    }
    chain
}

fn sign_changes(chain: &[Vec<BigRational>], x: &BigRational) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for p in chain {
        let v = rat_poly_eval(p, x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Integer sign of `p(m / 2^k)`.
fn sign_at_dyadic(p: &[BigInt], m: &BigInt, k: u32) -> Ordering {
    let d = p.len() - 1;
    let mut acc = BigInt::zero();
    let mut mpow = BigInt::one();
    for (i, c) in p.iter().enumerate() {
        acc += c * &mpow << (k as usize * (d - i));
        mpow *= m;
    }
    acc.sign_ord()
}

trait SignOrd {
    fn sign_ord(&self) -> Ordering;
}

impl SignOrd for BigInt {
    fn sign_ord(&self) -> Ordering {
        if self.is_positive() {
            Ordering::Greater
        } else if self.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
}

/// Dyadic enclosure `a / 2^k <= lambda <= (a + 1) / 2^k` with scaled powers.
#[derive(Debug)]
struct Enclosure {
    bits: u32,
    #[cfg_attr(not(test), allow(dead_code))]
    a: BigInt,
    lo_pows: Vec<BigInt>,
    hi_pows: Vec<BigInt>,
}

impl Enclosure {
    fn new(bits: u32, a: BigInt, degree: usize) -> Self {
        let b = &a + 1u32;
        let mut lo_pows = Vec::with_capacity(degree);
        let mut hi_pows = Vec::with_capacity(degree);
        let mut lp = BigInt::one();
        let mut hp = BigInt::one();
        for i in 0..degree {
            let shift = bits as usize * (degree - 1 - i);
            lo_pows.push(&lp << shift);
            hi_pows.push(&hp << shift);
            lp *= &a;
            hp *= &b;
        }
        Enclosure {
            bits,
            a,
            lo_pows,
            hi_pows,
        }
    }

    /// Sign of `sum c_i lambda^i` if the enclosure decides it.
    fn decide(&self, coeffs: &[BigInt]) -> Option<Ordering> {
        let mut lower = BigInt::zero();
        let mut upper = BigInt::zero();
        for (i, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if c.is_positive() {
                lower += c * &self.lo_pows[i];
                upper += c * &self.hi_pows[i];
            } else {
                lower += c * &self.hi_pows[i];
                upper += c * &self.lo_pows[i];
            }
        }
        if lower.is_positive() {
            Some(Ordering::Greater)
        } else if upper.is_negative() {
            Some(Ordering::Less)
        } else {
            None
        }
    }
}

/// The real cyclotomic field containing every `2cos(pi/m)` of a Coxeter matrix.
#[derive(Debug)]
pub struct AlgebraicField {
    conductor: u32,
    min_poly: Vec<BigInt>,
    root_bracket: (BigRational, BigRational),
    /// `reduce[j]` expresses `lambda^(d + j)` in the power basis.
    reduce: Vec<Vec<BigInt>>,
    enclosures: RwLock<Vec<Enclosure>>,
}

const FIRST_ENCLOSURE_BITS: u32 = 64;

impl AlgebraicField {
    /// The field of rationals (conductor 1).
    pub fn rationals() -> Self {
        Self::with_conductor(1)
    }

    /// Field generated by `lambda = 2cos(pi/n)`; `n <= 2` gives the rationals.
    pub fn with_conductor(n: u32) -> Self {
        let n = if n <= 2 { 1 } else { n };
        let min_poly = if n == 1 {
            // Degree one; the generator is 1 and every scalar is a constant.
            vec![BigInt::from(-1), BigInt::one()]
        } else {
            min_poly_two_cos(n)
        };
        let degree = min_poly.len() - 1;
        let root_bracket = if n == 1 {
            (BigRational::from_integer(0.into()), BigRational::from_integer(1.into()))
        } else {
            isolate_largest_root(&min_poly, n)
        };
        let reduce = reduction_table(&min_poly);
        let field = AlgebraicField {
            conductor: n,
            min_poly,
            root_bracket,
            reduce,
            enclosures: RwLock::new(Vec::new()),
        };
        if degree > 1 {
            let first = field.compute_enclosure(FIRST_ENCLOSURE_BITS);
            field.enclosures.write().expect("enclosure lock").push(first);
        }
        field
    }

    /// Field for a Coxeter matrix: conductor is the lcm of the finite entries,
    /// short-circuiting to the rationals when every finite entry is 2 or 3.
    pub fn for_matrix(m: &[Vec<Order>]) -> Result<Self> {
        validate_matrix(m)?;
        let mut all_rational = true;
        let mut lcm = 1u32;
        for (i, row) in m.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                if i == j {
                    continue;
                }
                if let Order::Finite(v) = entry {
                    if *v > 3 {
                        all_rational = false;
                    }
                    lcm = lcm.lcm(v);
                }
            }
        }
        if all_rational {
            return Ok(Self::rationals());
        }
        Ok(Self::with_conductor(lcm))
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn degree(&self) -> usize {
        self.min_poly.len() - 1
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }

    pub fn min_poly(&self) -> &[BigInt] {
        &self.min_poly
    }

    pub fn root_bracket(&self) -> &(BigRational, BigRational) {
        &self.root_bracket
    }

    pub fn zero(&self) -> FieldScalar {
        FieldScalar::zero(self.degree())
    }

    pub fn one(&self) -> FieldScalar {
        FieldScalar::from_int(self.degree(), 1)
    }

    pub fn from_int(&self, v: i64) -> FieldScalar {
        FieldScalar::from_int(self.degree(), v)
    }

    pub fn from_rational(&self, v: &BigRational) -> FieldScalar {
        let mut num = vec![BigInt::zero(); self.degree()];
        num[0] = v.numer().clone();
        FieldScalar::normalized(num, v.denom().clone())
    }

    /// The generator `lambda = 2cos(pi/N)`.
    pub fn lambda(&self) -> FieldScalar {
        if self.is_rational() {
            return self.one();
        }
        let mut num = vec![BigInt::zero(); self.degree()];
        num[1] = BigInt::one();
        FieldScalar {
            num,
            den: BigInt::one(),
        }
    }

    /// `2cos(pi/m)` as a field element; `m = inf` gives 2.
    pub fn embed_two_cos(&self, m: Order) -> Result<FieldScalar> {
        let m = match m {
            Order::Infinite => return Ok(self.from_int(2)),
            Order::Finite(m) => m,
        };
        if m == 0 {
            return Err(Error::InvalidInput("order 0 in Coxeter matrix".into()));
        }
        if self.is_rational() {
            return match m {
                1 => Ok(self.from_int(-2)),
                2 => Ok(self.zero()),
                3 => Ok(self.one()),
                _ => Err(Error::NotInField { m, conductor: 1 }),
            };
        }
        if self.conductor % m != 0 {
            return Err(Error::NotInField {
                m,
                conductor: self.conductor,
            });
        }
        // 2cos(k theta) with theta = pi/N, k = N/m, via c_{k+1} = lambda c_k - c_{k-1}.
        let k = self.conductor / m;
        let lambda = self.lambda();
        let mut prev = self.from_int(2);
        let mut cur = lambda.clone();
        for _ in 1..k {
            let next = &self.mul(&lambda, &cur) - &prev;
            prev = cur;
            cur = next;
        }
        Ok(cur)
    }

    /// `cos(pi/m)`; `m = inf` gives 1 (bilinear-form value -1).
    pub fn embed_cos(&self, m: Order) -> Result<FieldScalar> {
        Ok(self.embed_two_cos(m)?.scale_rational(&BigRational::new(1.into(), 2.into())))
    }

    pub fn mul(&self, a: &FieldScalar, b: &FieldScalar) -> FieldScalar {
        let d = self.degree();
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        if d == 1 {
            return FieldScalar::normalized(vec![&a.num[0] * &b.num[0]], &a.den * &b.den);
        }
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, ai) in a.num.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.num.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                prod[i + j] += ai * bj;
            }
        }
        let mut out: Vec<BigInt> = prod[..d].to_vec();
        for (j, c) in prod[d..].iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, r) in out.iter_mut().zip(&self.reduce[j]) {
                if !r.is_zero() {
                    *o += c * r;
                }
            }
        }
        let den = &a.den * &b.den;
        if den.is_one() {
            FieldScalar { num: out, den }
        } else {
            FieldScalar::normalized(out, den)
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm over `Q[x]`.
    pub fn inv(&self, a: &FieldScalar) -> Result<FieldScalar> {
        if a.is_zero() {
            return Err(Error::InvalidInput("inverse of zero".into()));
        }
        let den = BigRational::from(a.den.clone());
        let mut r0: Vec<BigRational> = self.min_poly.iter().map(|c| BigRational::from(c.clone())).collect();
        let mut r1: Vec<BigRational> = a.num.iter().map(|c| BigRational::from(c.clone()) / &den).collect();
        trim_rat(&mut r1);
        let mut t0: Vec<BigRational> = Vec::new();
        let mut t1: Vec<BigRational> = vec![BigRational::one()];
        while r1.len() > 1 {
            let (q, r) = rat_poly_divmod(&r0, &r1);
            let qt = rat_poly_mul(&q, &t1);
            let t2 = rat_poly_sub(&t0, &qt);
            r0 = std::mem::replace(&mut r1, r);
            t0 = std::mem::replace(&mut t1, t2);
        }
        // r1 is a nonzero constant c with t1 * a = c (mod min_poly).
        let c = r1[0].clone();
        let inv: Vec<BigRational> = t1.iter().map(|t| t / &c).collect();
        Ok(self.from_rat_coeffs(&inv))
    }

    fn from_rat_coeffs(&self, coeffs: &[BigRational]) -> FieldScalar {
        let d = self.degree();
        let mut reduced = coeffs.to_vec();
        let mp: Vec<BigRational> = self.min_poly.iter().map(|c| BigRational::from(c.clone())).collect();
        if reduced.len() > d {
            reduced = rat_poly_rem(&reduced, &mp);
        }
        let mut lcm = BigInt::one();
        for c in &reduced {
            lcm = lcm.lcm(c.denom());
        }
        let mut num = vec![BigInt::zero(); d];
        for (i, c) in reduced.iter().enumerate() {
            num[i] = c.numer() * (&lcm / c.denom());
        }
        FieldScalar::normalized(num, lcm)
    }

    pub fn div(&self, a: &FieldScalar, b: &FieldScalar) -> Result<FieldScalar> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Exact sign: 0 iff the scalar is zero, otherwise decided by refining the
    /// dyadic enclosure of `lambda` until the interval value excludes zero.
    pub fn sign(&self, x: &FieldScalar) -> i8 {
        if x.is_zero() {
            return 0;
        }
        let ord = if self.is_rational() {
            x.num[0].sign_ord()
        } else {
            self.sign_numerator(&x.num)
        };
        match ord {
            Ordering::Greater => 1,
            Ordering::Less => -1,
            Ordering::Equal => 0,
        }
    }

    fn sign_numerator(&self, coeffs: &[BigInt]) -> Ordering {
        let mut level = 0;
        loop {
            {
                let encl = self.enclosures.read().expect("enclosure lock");
                while level < encl.len() {
                    if let Some(s) = encl[level].decide(coeffs) {
                        return s;
                    }
                    level += 1;
                }
            }
            let mut encl = self.enclosures.write().expect("enclosure lock");
            if encl.len() == level {
                let bits = encl.last().map_or(FIRST_ENCLOSURE_BITS, |e| e.bits * 2);
                let next = self.compute_enclosure(bits);
                encl.push(next);
            }
        }
    }

    /// Bisection of the isolating bracket down to a dyadic cell of `2^-bits`.
    fn compute_enclosure(&self, bits: u32) -> Enclosure {
        let (lo, hi) = &self.root_bracket;
        let p = &self.min_poly;
        // Work with integers m representing m / 2^bits.
        let scale = BigInt::one() << bits as usize;
        let mut lo_m = (lo.numer() * &scale).div_floor(lo.denom());
        let mut hi_m = (hi.numer() * &scale).div_ceil(hi.denom());
        let lo_rat = lo.clone();
        let hi_rat = hi.clone();
        let s_lo = {
            let v = rat_poly_eval(
                &p.iter().map(|c| BigRational::from(c.clone())).collect::<Vec<_>>(),
                &hi_rat,
            );
            // sign just below the root equals minus the sign at the upper end
            if v.is_positive() {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        };
        let dyadic = |m: &BigInt| BigRational::new(m.clone(), scale.clone());
        while &hi_m - &lo_m > BigInt::one() {
            let mid: BigInt = (&lo_m + &hi_m) >> 1usize;
            let x = dyadic(&mid);
            let below = if x <= lo_rat {
                true
            } else if x >= hi_rat {
                false
            } else {
                let s = sign_at_dyadic(p, &mid, bits);
                if s == Ordering::Equal {
                    // lambda is irrational for degree > 1
                    unreachable!("dyadic root of an irreducible polynomial of degree > 1");
                }
                s == s_lo
            };
            if below {
                lo_m = mid;
            } else {
                hi_m = mid;
            }
        }
        Enclosure::new(bits, lo_m, self.degree())
    }

    pub fn to_f64(&self, x: &FieldScalar) -> f64 {
        let lambda = if self.is_rational() {
            1.0
        } else {
            2.0 * (std::f64::consts::PI / self.conductor as f64).cos()
        };
        let den = bigint_to_f64(&x.den);
        x.num
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * lambda + bigint_to_f64(c))
            / den
    }

    pub fn cmp(&self, a: &FieldScalar, b: &FieldScalar) -> Ordering {
        match self.sign(&(a - b)) {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        }
    }
}

pub(crate) fn bigint_to_f64(x: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(if x.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

fn rat_poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = a.to_vec();
    trim_rat(&mut r);
    let db = b.len() - 1;
    let lead = &b[db];
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    while r.len() > db {
        let k = r.len() - 1 - db;
        let c = &r[r.len() - 1] / lead;
        for (j, bj) in b.iter().enumerate() {
            r[k + j] -= &c * bj;
        }
        q[k] = c;
        r.pop();
        trim_rat(&mut r);
    }
    trim_rat(&mut q);
    (q, r)
}

fn rat_poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim_rat(&mut out);
    out
}

fn rat_poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim_rat(&mut out);
    out
}

fn reduction_table(min_poly: &[BigInt]) -> Vec<Vec<BigInt>> {
    let d = min_poly.len() - 1;
    if d <= 1 {
        return Vec::new();
    }
    // lambda^d = -sum_{i<d} p_i lambda^i
    let mut cur: Vec<BigInt> = min_poly[..d].iter().map(|c| -c).collect();
    let mut table = Vec::with_capacity(d - 1);
    for _ in 0..d - 1 {
        table.push(cur.clone());
        // multiply by lambda
        let top = cur[d - 1].clone();
        let mut next = vec![BigInt::zero(); d];
        for i in (1..d).rev() {
            next[i] = cur[i - 1].clone();
        }
        if !top.is_zero() {
            for i in 0..d {
                next[i] -= &top * &min_poly[i];
            }
        }
        cur = next;
    }
    table
}

/// Isolates `2cos(pi/n)`, the largest real root, inside `(1.8, 2)` for
/// `n >= 7` and `(0, 2)` otherwise, by Sturm counting and bisection.
fn isolate_largest_root(p: &[BigInt], n: u32) -> (BigRational, BigRational) {
    let chain = sturm_chain(p);
    let mut lo = if n >= 7 {
        BigRational::new(9.into(), 5.into())
    } else {
        BigRational::zero()
    };
    let mut hi = BigRational::from_integer(2.into());
    let count = |a: &BigRational, b: &BigRational| sign_changes(&chain, a) - sign_changes(&chain, b);
    assert!(count(&lo, &hi) >= 1, "no root of the minimal polynomial in the search interval");
    while count(&lo, &hi) > 1 {
        let mid = (&lo + &hi) / BigRational::from_integer(2.into());
        if count(&mid, &hi) >= 1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

pub(crate) fn validate_matrix(m: &[Vec<Order>]) -> Result<()> {
    let n = m.len();
    for (i, row) in m.iter().enumerate() {
        if row.len() != n {
            return Err(Error::InvalidMatrix(format!("row {i} has length {} (expected {n})", row.len())));
        }
        if row[i] != Order::Finite(1) {
            return Err(Error::InvalidMatrix(format!("diagonal entry ({i},{i}) must be 1")));
        }
        for (j, entry) in row.iter().enumerate() {
            if *entry != m[j][i] {
                return Err(Error::InvalidMatrix(format!("matrix not symmetric at ({i},{j})")));
            }
            if i != j {
                if let Order::Finite(v) = entry {
                    if *v < 2 {
                        return Err(Error::InvalidMatrix(format!("off-diagonal entry ({i},{j}) = {v} < 2")));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Residue modulo the minimal polynomial with rational coefficients, stored
/// as integer numerators over a common positive denominator in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldScalar {
    num: Vec<BigInt>,
    den: BigInt,
}

impl FieldScalar {
    pub fn zero(degree: usize) -> Self {
        FieldScalar {
            num: vec![BigInt::zero(); degree],
            den: BigInt::one(),
        }
    }

    pub fn from_int(degree: usize, v: i64) -> Self {
        let mut s = Self::zero(degree);
        s.num[0] = BigInt::from(v);
        s
    }

    /// Integral element with the given power-basis coefficients.
    pub fn from_integers(num: Vec<BigInt>) -> Self {
        FieldScalar {
            num,
            den: BigInt::one(),
        }
    }

    fn normalized(mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        if den.is_negative() {
            den = -den;
            for c in &mut num {
                *c = -&*c;
            }
        }
        if num.iter().all(Zero::is_zero) {
            return FieldScalar {
                num,
                den: BigInt::one(),
            };
        }
        if !den.is_one() {
            let mut g = den.clone();
            for c in &num {
                if g.is_one() {
                    break;
                }
                g = g.gcd(c);
            }
            if !g.is_one() {
                den /= &g;
                for c in &mut num {
                    *c /= &g;
                }
            }
        }
        FieldScalar { num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    /// Coefficients in the power basis of `lambda`.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    /// Rational value when the scalar lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num[1..].iter().all(Zero::is_zero) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    pub fn scale_int(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero(self.num.len());
        }
        let num = self.num.iter().map(|c| c * k).collect();
        if self.den.is_one() {
            FieldScalar {
                num,
                den: BigInt::one(),
            }
        } else {
            Self::normalized(num, self.den.clone())
        }
    }

    pub fn scale_rational(&self, k: &BigRational) -> Self {
        let num = self.num.iter().map(|c| c * k.numer()).collect();
        Self::normalized(num, &self.den * k.denom())
    }

    /// `self + k * other` for an integer `k`, the inner loop of reflections.
    pub fn add_scaled_int(&self, other: &Self, k: &BigInt) -> Self {
        if self.den.is_one() && other.den.is_one() {
            let num = self.num.iter().zip(&other.num).map(|(a, b)| a + b * k).collect();
            return FieldScalar {
                num,
                den: BigInt::one(),
            };
        }
        self + &other.scale_int(k)
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        if self.den == other.den {
            let num = self
                .num
                .iter()
                .zip(&other.num)
                .map(|(a, b)| if negate { a - b } else { a + b })
                .collect();
            if self.den.is_one() {
                return FieldScalar {
                    num,
                    den: BigInt::one(),
                };
            }
            return Self::normalized(num, self.den.clone());
        }
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| {
                let l = a * &other.den;
                let r = b * &self.den;
                if negate {
                    l - r
                } else {
                    l + r
                }
            })
            .collect();
        Self::normalized(num, &self.den * &other.den)
    }
}

impl<'a> std::ops::Add<&'a FieldScalar> for &'a FieldScalar {
    type Output = FieldScalar;
    fn add(self, rhs: &'a FieldScalar) -> FieldScalar {
        self.combine(rhs, false)
    }
}

impl<'a> std::ops::Sub<&'a FieldScalar> for &'a FieldScalar {
    type Output = FieldScalar;
    fn sub(self, rhs: &'a FieldScalar) -> FieldScalar {
        self.combine(rhs, true)
    }
}

impl std::ops::Neg for &FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        FieldScalar {
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl fmt::Debug for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            terms.push(match i {
                0 => format!("{c}"),
                1 => format!("{c}*L"),
                _ => format!("{c}*L^{i}"),
            });
        }
        let body = if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        };
        if self.den.is_one() {
            write!(f, "{body}")
        } else {
            write!(f, "({body})/{}", self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn cyclotomic_small() {
        assert_eq!(cyclotomic(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), ints(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn two_cos_pi_over_8_min_poly() {
        // x^4 - 4x^2 + 2
        assert_eq!(min_poly_two_cos(8), ints(&[2, 0, -4, 0, 1]));
        assert_eq!(min_poly_two_cos(4), ints(&[-2, 0, 1]));
        assert_eq!(min_poly_two_cos(5), ints(&[-1, -1, 1]));
        assert_eq!(min_poly_two_cos(3), ints(&[-1, 1]));
    }

    #[test]
    fn two_three_short_circuits_to_rationals() {
        let f = AlgebraicField::for_matrix(&[
            vec![Order::Finite(1), Order::Finite(3), Order::Finite(2)],
            vec![Order::Finite(3), Order::Finite(1), Order::Infinite],
            vec![Order::Finite(2), Order::Infinite, Order::Finite(1)],
        ])
        .unwrap();
        assert!(f.is_rational());
        assert_eq!(f.embed_cos(Order::Finite(3)).unwrap().as_rational().unwrap(), BigRational::new(1.into(), 2.into()));
        assert!(f.embed_cos(Order::Finite(2)).unwrap().is_zero());
        assert_eq!(f.embed_cos(Order::Infinite).unwrap(), f.one());
    }

    #[test]
    fn conductor_twelve_has_degree_four_and_sqrt_two() {
        let f = AlgebraicField::with_conductor(12);
        assert_eq!(f.degree(), 4);
        let c4 = f.embed_two_cos(Order::Finite(4)).unwrap();
        assert_eq!(f.mul(&c4, &c4), f.from_int(2));
        let cos4 = f.embed_cos(Order::Finite(4)).unwrap();
        assert_eq!(f.mul(&cos4, &cos4).as_rational().unwrap(), BigRational::new(1.into(), 2.into()));
    }

    #[test]
    fn embedded_two_cos_eight_satisfies_its_min_poly() {
        let f = AlgebraicField::with_conductor(24);
        let x = f.embed_two_cos(Order::Finite(8)).unwrap();
        let x2 = f.mul(&x, &x);
        let x4 = f.mul(&x2, &x2);
        let val = &(&x4 - &x2.scale_int(&4.into())) + &f.from_int(2);
        assert!(val.is_zero());
    }

    #[test]
    fn sign_examples() {
        let f = AlgebraicField::with_conductor(12);
        let l = f.lambda();
        assert_eq!(f.sign(&f.zero()), 0);
        assert_eq!(f.sign(&(&l - &f.one())), 1);
        let l2 = f.mul(&l, &l);
        assert_eq!(f.sign(&(&l2 - &f.from_int(4))), -1);
    }

    #[test]
    fn sign_refines_for_tiny_differences() {
        // (lambda - a/2^200) with a = floor(lambda 2^200) is positive but tiny.
        let f = AlgebraicField::with_conductor(7);
        let bits = 200u32;
        let e = f.compute_enclosure(bits);
        let l = f.lambda();
        let below = f.from_rational(&BigRational::new(e.a.clone(), BigInt::one() << bits as usize));
        let above = f.from_rational(&BigRational::new(&e.a + 1u32, BigInt::one() << bits as usize));
        assert_eq!(f.sign(&(&l - &below)), 1);
        assert_eq!(f.sign(&(&l - &above)), -1);
    }

    #[test]
    fn inverse_roundtrip() {
        let f = AlgebraicField::with_conductor(20);
        let l = f.lambda();
        let x = &f.mul(&l, &l) - &f.from_int(3);
        let y = f.inv(&x).unwrap();
        assert_eq!(f.mul(&x, &y), f.one());
    }

    #[test]
    fn rejects_bad_matrices() {
        let bad = vec![vec![Order::Finite(1), Order::Finite(3)], vec![Order::Finite(4), Order::Finite(1)]];
        assert!(AlgebraicField::for_matrix(&bad).is_err());
        let bad = vec![vec![Order::Finite(2), Order::Finite(3)], vec![Order::Finite(3), Order::Finite(1)]];
        assert!(AlgebraicField::for_matrix(&bad).is_err());
        let bad = vec![vec![Order::Finite(1), Order::Finite(1)], vec![Order::Finite(1), Order::Finite(1)]];
        assert!(AlgebraicField::for_matrix(&bad).is_err());
    }

    #[test]
    fn not_in_field() {
        let f = AlgebraicField::with_conductor(12);
        assert!(f.embed_cos(Order::Finite(5)).is_err());
    }
}
