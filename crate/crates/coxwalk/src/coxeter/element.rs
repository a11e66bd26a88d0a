use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use super::{CoxeterSystem, Gen, Root, Word};

/// A group element stored as its matrix in the geometric representation
/// together with the matrix of its inverse. Column `t` of `mat` is
/// `g(alpha_t)`.
///
/// Equality and hashing use the matrix only, so two words for the same
/// element compare equal.
#[derive(Clone, Debug)]
pub struct GroupElement {
    mat: Vec<Root>,
    inv: Vec<Root>,
    nf: OnceLock<Word>,
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.mat == other.mat
    }
}

impl Eq for GroupElement {}

impl Hash for GroupElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.mat.hash(state);
    }
}

impl GroupElement {
    pub fn identity(sys: &CoxeterSystem) -> Self {
        let cols: Vec<Root> = (0..sys.rank()).map(|t| sys.simple_root(t)).collect();
        let nf = OnceLock::new();
        let _ = nf.set(Vec::new());
        GroupElement {
            mat: cols.clone(),
            inv: cols,
            nf,
        }
    }

    /// Column `t`, i.e. `g(alpha_t)`.
    pub fn column(&self, t: Gen) -> &Root {
        &self.mat[t]
    }

    pub fn columns(&self) -> &[Root] {
        &self.mat
    }

    /// `g <- g s`.
    pub fn right_mul_gen(&mut self, sys: &CoxeterSystem, s: Gen) {
        // g sigma_s(alpha_t) = g(alpha_t) + c_st g(alpha_s), and alpha_s maps to -alpha_s
        let col_s = self.mat[s].clone();
        for t in 0..sys.rank() {
            if t == s {
                continue;
            }
            let c = &sys.two_cos[s][t];
            if c.is_zero() {
                continue;
            }
            for (k, x) in col_s.0.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let add = sys.add_two_cos_times(&self.mat[t].0[k], s, t, x);
                self.mat[t].0[k] = add;
            }
        }
        for x in self.mat[s].0.iter_mut() {
            *x = -&*x;
        }
        for col in self.inv.iter_mut() {
            sys.reflect_in_place(s, col);
        }
        self.nf = OnceLock::new();
    }

    pub fn right_mul_gen_cloned(&self, sys: &CoxeterSystem, s: Gen) -> Self {
        let mut g = self.clone();
        g.right_mul_gen(sys, s);
        g
    }

    /// `g <- s g`.
    pub fn left_mul_gen(&mut self, sys: &CoxeterSystem, s: Gen) {
        std::mem::swap(&mut self.mat, &mut self.inv);
        self.right_mul_gen(sys, s);
        std::mem::swap(&mut self.mat, &mut self.inv);
    }

    /// `g(beta)`.
    pub fn apply(&self, sys: &CoxeterSystem, beta: &Root) -> Root {
        apply_cols(sys, &self.mat, beta)
    }

    /// `g^-1(beta)`.
    pub fn apply_inverse(&self, sys: &CoxeterSystem, beta: &Root) -> Root {
        apply_cols(sys, &self.inv, beta)
    }

    pub fn multiply(&self, sys: &CoxeterSystem, other: &GroupElement) -> GroupElement {
        let mat = other.mat.iter().map(|c| apply_cols(sys, &self.mat, c)).collect();
        let inv = self.inv.iter().map(|c| apply_cols(sys, &other.inv, c)).collect();
        GroupElement {
            mat,
            inv,
            nf: OnceLock::new(),
        }
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            mat: self.inv.clone(),
            inv: self.mat.clone(),
            nf: OnceLock::new(),
        }
    }

    /// `l(gs) = l(g) + 1`.
    pub fn is_right_ascent(&self, sys: &CoxeterSystem, s: Gen) -> bool {
        sys.root_sign(&self.mat[s]) > 0
    }

    /// `l(sg) = l(g) - 1`.
    pub fn is_left_descent(&self, sys: &CoxeterSystem, s: Gen) -> bool {
        sys.root_sign(&self.inv[s]) < 0
    }

    pub fn right_descents(&self, sys: &CoxeterSystem) -> Vec<Gen> {
        (0..sys.rank()).filter(|&s| !self.is_right_ascent(sys, s)).collect()
    }

    pub fn is_identity(&self, sys: &CoxeterSystem) -> bool {
        self.mat.iter().enumerate().all(|(t, c)| sys.is_simple_root(c, t))
    }

    /// ShortLex normal form, found by repeatedly stripping the smallest left
    /// descent. Cached.
    pub fn shortlex_nf(&self, sys: &CoxeterSystem) -> &[Gen] {
        self.nf.get_or_init(|| {
            let mut g = self.clone();
            let mut word = Vec::new();
            'outer: loop {
                for s in 0..sys.rank() {
                    if g.is_left_descent(sys, s) {
                        word.push(s);
                        g.left_mul_gen(sys, s);
                        continue 'outer;
                    }
                }
                break;
            }
            word
        })
    }

    pub fn length(&self, sys: &CoxeterSystem) -> usize {
        self.shortlex_nf(sys).len()
    }
}

fn apply_cols(sys: &CoxeterSystem, cols: &[Root], beta: &Root) -> Root {
    let f = sys.field();
    let mut out = vec![f.zero(); sys.rank()];
    for (u, b) in beta.0.iter().enumerate() {
        if b.is_zero() {
            continue;
        }
        let one = b == &f.one();
        for (k, x) in cols[u].0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            out[k] = if one { &out[k] + x } else { &out[k] + &f.mul(b, x) };
        }
    }
    Root(out)
}
