//! Coxeter systems, their geometric representation and exact group elements.

mod arith;
mod classify;
mod element;

use std::fmt;

use num_bigint::BigInt;

pub use arith::IntRoot;
pub use classify::{Classification, TriangleClass};
pub use element::GroupElement;

use crate::error::{Error, Result};
use crate::field::{validate_matrix, AlgebraicField, FieldScalar, Order};

/// Generator index into [`CoxeterSystem::labels`].
pub type Gen = usize;
/// A word in the generators, read left to right.
pub type Word = Vec<Gen>;

/// A vector in the root space, in coordinates over the simple roots.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Root(pub Vec<FieldScalar>);

/// A Coxeter system with its exact geometric representation.
///
/// The generator order is the ShortLex order.
#[derive(Debug)]
pub struct CoxeterSystem {
    labels: Vec<String>,
    matrix: Vec<Vec<Order>>,
    field: AlgebraicField,
    /// `two_cos[s][t] = 2cos(pi/m_st)` (2 for `m_st = inf`), so that
    /// `sigma_s(alpha_t) = alpha_t + two_cos[s][t] alpha_s` for `t != s`.
    two_cos: Vec<Vec<FieldScalar>>,
    /// Same values when they are integers (0, 1, 2), for the fast path.
    two_cos_int: Vec<Vec<Option<BigInt>>>,
    arith: arith::IntArith,
}

impl CoxeterSystem {
    pub fn new(labels: Vec<String>, matrix: Vec<Vec<Order>>) -> Result<Self> {
        if labels.len() != matrix.len() {
            return Err(Error::InvalidMatrix(format!(
                "{} labels for a {}x{} matrix",
                labels.len(),
                matrix.len(),
                matrix.len()
            )));
        }
        if labels.is_empty() {
            return Err(Error::InvalidMatrix("no generators".into()));
        }
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() || l.chars().any(char::is_whitespace) {
                return Err(Error::InvalidInput(format!("bad generator label {l:?}")));
            }
            if labels[..i].contains(l) {
                return Err(Error::InvalidInput(format!("duplicate generator label {l:?}")));
            }
        }
        validate_matrix(&matrix)?;
        let field = AlgebraicField::for_matrix(&matrix)?;
        let n = labels.len();
        let mut two_cos = vec![vec![field.zero(); n]; n];
        let mut two_cos_int = vec![vec![None; n]; n];
        for s in 0..n {
            for t in 0..n {
                if s == t {
                    two_cos[s][t] = field.from_int(-2);
                    two_cos_int[s][t] = Some(BigInt::from(-2));
                    continue;
                }
                let c = field.embed_two_cos(matrix[s][t])?;
                two_cos_int[s][t] = c
                    .as_rational()
                    .filter(|r| r.is_integer())
                    .map(|r| r.to_integer());
                two_cos[s][t] = c;
            }
        }
        let arith = arith::IntArith::new(&field, &two_cos);
        Ok(CoxeterSystem {
            labels,
            matrix,
            field,
            two_cos,
            two_cos_int,
            arith,
        })
    }

    /// Generators labelled `1..=n` with the given matrix.
    pub fn numbered(matrix: Vec<Vec<Order>>) -> Result<Self> {
        let labels = (1..=matrix.len()).map(|i| i.to_string()).collect();
        Self::new(labels, matrix)
    }

    /// Triangle group with `m_12 = a`, `m_23 = b`, `m_13 = c`.
    pub fn triangle(a: u32, b: u32, c: u32) -> Result<Self> {
        let f = Order::Finite;
        Self::numbered(vec![
            vec![f(1), f(a), f(c)],
            vec![f(a), f(1), f(b)],
            vec![f(c), f(b), f(1)],
        ])
    }

    /// Polygon group: `m_{i,i+1} = k_i` cyclically, `inf` otherwise.
    pub fn polygon(k: &[u32]) -> Result<Self> {
        let n = k.len();
        if n < 3 {
            return Err(Error::InvalidInput("a polygon needs at least three sides".into()));
        }
        let mut m = vec![vec![Order::Infinite; n]; n];
        for i in 0..n {
            m[i][i] = Order::Finite(1);
            let j = (i + 1) % n;
            m[i][j] = Order::Finite(k[i]);
            m[j][i] = Order::Finite(k[i]);
        }
        Self::numbered(m)
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn matrix(&self) -> &[Vec<Order>] {
        &self.matrix
    }

    pub fn m(&self, s: Gen, t: Gen) -> Order {
        self.matrix[s][t]
    }

    pub fn field(&self) -> &AlgebraicField {
        &self.field
    }

    /// Largest finite off-diagonal entry of the Coxeter matrix.
    pub fn max_finite_order(&self) -> u32 {
        let mut best = 1;
        for s in 0..self.rank() {
            for t in 0..self.rank() {
                if s != t {
                    if let Order::Finite(m) = self.matrix[s][t] {
                        best = best.max(m);
                    }
                }
            }
        }
        best
    }

    pub fn generator_index(&self, label: &str) -> Result<Gen> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownGenerator(label.to_string()))
    }

    fn single_char_labels(&self) -> bool {
        self.labels.iter().all(|l| l.chars().count() == 1)
    }

    /// Parses a word: whitespace-separated labels, or concatenated labels
    /// when every label is a single character. `e`, `()` and the empty
    /// string denote the identity.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() || text == "()" || (text == "e" && !self.labels.iter().any(|l| l == "e")) {
            return Ok(Vec::new());
        }
        if text.contains(char::is_whitespace) {
            return text.split_whitespace().map(|t| self.generator_index(t)).collect();
        }
        if self.single_char_labels() {
            return text.chars().map(|c| self.generator_index(&c.to_string())).collect();
        }
        Ok(vec![self.generator_index(text)?])
    }

    pub fn format_word(&self, word: &[Gen]) -> String {
        if word.is_empty() {
            return "e".to_string();
        }
        let sep = if self.single_char_labels() { "" } else { " " };
        word.iter()
            .map(|&g| self.labels[g].as_str())
            .collect::<Vec<_>>()
            .join(sep)
    }

    pub fn simple_root(&self, s: Gen) -> Root {
        let mut v = vec![self.field.zero(); self.rank()];
        v[s] = self.field.one();
        Root(v)
    }

    /// `sigma_s(beta)`: only the `s` coordinate changes.
    pub fn reflect(&self, s: Gen, beta: &Root) -> Root {
        let mut out = beta.clone();
        out.0[s] = self.reflected_coord(s, beta);
        out
    }

    pub fn reflect_in_place(&self, s: Gen, beta: &mut Root) {
        let c = self.reflected_coord(s, beta);
        beta.0[s] = c;
    }

    fn reflected_coord(&self, s: Gen, beta: &Root) -> FieldScalar {
        // beta_s' = -beta_s + sum_{t != s} 2cos(pi/m_st) beta_t
        let mut acc = -&beta.0[s];
        for t in 0..self.rank() {
            if t == s || beta.0[t].is_zero() {
                continue;
            }
            acc = self.add_two_cos_times(&acc, s, t, &beta.0[t]);
        }
        acc
    }

    /// `acc + 2cos(pi/m_st) * x`.
    fn add_two_cos_times(&self, acc: &FieldScalar, s: Gen, t: Gen, x: &FieldScalar) -> FieldScalar {
        match &self.two_cos_int[s][t] {
            Some(k) if num_traits::Zero::is_zero(k) => acc.clone(),
            Some(k) => acc.add_scaled_int(x, k),
            None => acc + &self.field.mul(&self.two_cos[s][t], x),
        }
    }

    /// `2 B(alpha_s, beta)` for the canonical bilinear form
    /// `B(alpha_s, alpha_t) = -cos(pi/m_st)`.
    pub fn two_b(&self, s: Gen, beta: &Root) -> FieldScalar {
        let mut acc = beta.0[s].scale_int(&BigInt::from(2));
        for t in 0..self.rank() {
            if t == s || beta.0[t].is_zero() {
                continue;
            }
            let neg = -&beta.0[t];
            acc = self.add_two_cos_times(&acc, s, t, &neg);
        }
        acc
    }

    /// Sign of a root: +1 positive, -1 negative, 0 for the zero vector.
    pub fn root_sign(&self, beta: &Root) -> i8 {
        let mut found = 0i8;
        for c in &beta.0 {
            if c.is_zero() {
                continue;
            }
            let s = self.field.sign(c);
            if !cfg!(debug_assertions) {
                return s;
            }
            if found == 0 {
                found = s;
            } else {
                debug_assert_eq!(found, s, "root with mixed signs");
            }
        }
        found
    }

    pub fn is_simple_root(&self, beta: &Root, s: Gen) -> bool {
        beta.0.iter().enumerate().all(|(t, c)| {
            if t == s {
                c == &self.field.one()
            } else {
                c.is_zero()
            }
        })
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::identity(self)
    }

    pub fn generator(&self, s: Gen) -> GroupElement {
        let mut g = GroupElement::identity(self);
        g.right_mul_gen(self, s);
        g
    }

    pub fn word_to_element(&self, word: &[Gen]) -> GroupElement {
        let mut g = GroupElement::identity(self);
        for &s in word {
            g.right_mul_gen(self, s);
        }
        g
    }

    /// `true` iff the word is a reduced expression. Each prefix must have the
    /// next letter as a right ascent: `l(ws) = l(w) + 1` iff `w(alpha_s) > 0`.
    pub fn is_reduced(&self, word: &[Gen]) -> bool {
        let mut g = GroupElement::identity(self);
        for &s in word {
            if !g.is_right_ascent(self, s) {
                return false;
            }
            g.right_mul_gen(self, s);
        }
        true
    }

    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        a.multiply(self, b)
    }

    pub fn inverse(&self, a: &GroupElement) -> GroupElement {
        a.inverse()
    }

    pub fn length(&self, g: &GroupElement) -> usize {
        g.length(self)
    }

    pub fn shortlex_nf(&self, g: &GroupElement) -> Word {
        g.shortlex_nf(self).to_vec()
    }

    /// `d(u, v) = l(u^-1 v)`.
    pub fn distance(&self, u: &GroupElement, v: &GroupElement) -> usize {
        u.inverse().multiply(self, v).length(self)
    }

    /// Whether the parabolic subgroup `W_I` is finite: the restriction of the
    /// bilinear form to `I` is positive definite, tested by exact pivots.
    pub fn is_finite_parabolic(&self, subset: &[Gen]) -> bool {
        let k = subset.len();
        if k == 0 {
            return true;
        }
        let f = &self.field;
        let half = num_rational::BigRational::new(1.into(), 2.into());
        let mut a: Vec<Vec<FieldScalar>> = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        if i == j {
                            f.one()
                        } else {
                            -&self.two_cos[subset[i]][subset[j]].scale_rational(&half)
                        }
                    })
                    .collect()
            })
            .collect();
        for p in 0..k {
            if f.sign(&a[p][p]) <= 0 {
                return false;
            }
            let inv = f.inv(&a[p][p]).expect("positive pivot");
            for i in p + 1..k {
                if a[i][p].is_zero() {
                    continue;
                }
                let factor = f.mul(&a[i][p], &inv);
                for j in p..k {
                    let delta = f.mul(&factor, &a[p][j]);
                    a[i][j] = &a[i][j] - &delta;
                }
            }
        }
        true
    }

    /// All subsets `I` of `S` with `W_I` finite, as sorted index lists.
    pub fn finite_parabolics(&self) -> Vec<Vec<Gen>> {
        let n = self.rank();
        (0u32..(1 << n))
            .map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).collect::<Vec<_>>())
            .filter(|subset| self.is_finite_parabolic(subset))
            .collect()
    }

    pub fn classify(&self) -> Classification {
        classify::classify_system(self)
    }

    /// All elements of the ball of radius `r`, grouped by sphere, found by
    /// breadth-first search over the Cayley graph with exact equality.
    pub fn spheres(&self, r: usize) -> Vec<Vec<GroupElement>> {
        use std::collections::HashSet;
        let mut seen: HashSet<GroupElement> = HashSet::new();
        let id = self.identity();
        seen.insert(id.clone());
        let mut spheres = vec![vec![id]];
        for _ in 0..r {
            let mut next = Vec::new();
            for g in spheres.last().expect("nonempty") {
                for s in 0..self.rank() {
                    let h = g.right_mul_gen_cloned(self, s);
                    if seen.insert(h.clone()) {
                        next.push(h);
                    }
                }
            }
            spheres.push(next);
        }
        spheres
    }
}

impl fmt::Display for CoxeterSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for s in 0..self.rank() {
            for t in s + 1..self.rank() {
                parts.push(format!("m({},{})={}", self.labels[s], self.labels[t], self.matrix[s][t]));
            }
        }
        write!(f, "W[{}]", parts.join(", "))
    }
}
