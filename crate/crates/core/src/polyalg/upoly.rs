use crate::fields::{BaseField, Field, FqElem};

/// Univariate polynomial; `coeffs[i]` is the coefficient of `X^i`.
/// The leading coefficient is nonzero unless the polynomial is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniPoly<E> {
    coeffs: Vec<E>,
}

impl<E> UniPoly<E>
where
    E: Copy + Default + Eq + std::ops::Add<Output = E>,
{
    pub fn new(mut coeffs: Vec<E>) -> UniPoly<E> {
        while coeffs.last().is_some_and(|c| *c == E::default()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> UniPoly<E> {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: E) -> UniPoly<E> {
        UniPoly::new(vec![c])
    }

    /// `X + r` (equal to `X - r` in characteristic 2).
    pub fn linear(r: E, one: E) -> UniPoly<E> {
        UniPoly::new(vec![r, one])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> E {
        self.coeffs.get(i).copied().unwrap_or_default()
    }

    pub fn lead(&self) -> E {
        self.coeffs.last().copied().unwrap_or_default()
    }

    pub fn add(&self, rhs: &UniPoly<E>) -> UniPoly<E> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }

    pub fn mul<K: Field<Elem = E>>(&self, k: &K, rhs: &UniPoly<E>) -> UniPoly<E> {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![E::default(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == E::default() {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j] + k.mul(a, b);
            }
        }
        UniPoly::new(out)
    }

    pub fn scale<K: Field<Elem = E>>(&self, k: &K, s: E) -> UniPoly<E> {
        UniPoly::new(self.coeffs.iter().map(|&c| k.mul(c, s)).collect())
    }

    /// Horner evaluation.
    pub fn eval<K: Field<Elem = E>>(&self, k: &K, x: E) -> E {
        self.coeffs
            .iter()
            .rev()
            .fold(E::default(), |acc, &c| k.mul(acc, x) + c)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem<K: Field<Elem = E>>(&self, k: &K, d: &UniPoly<E>) -> (UniPoly<E>, UniPoly<E>) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = k.inv(d.lead()).expect("leading coefficient is nonzero");
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (UniPoly::zero(), self.clone());
        }
        let mut q = vec![E::default(); r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = r[i];
            if c == E::default() {
                continue;
            }
            let f = k.mul(c, lead_inv);
            q[i - dd] = f;
            for (j, &dc) in d.coeffs.iter().enumerate() {
                r[i - dd + j] = r[i - dd + j] + k.mul(f, dc);
            }
        }
        r.truncate(dd);
        (UniPoly::new(q), UniPoly::new(r))
    }

    pub fn rem<K: Field<Elem = E>>(&self, k: &K, d: &UniPoly<E>) -> UniPoly<E> {
        self.divrem(k, d).1
    }

    pub fn monic<K: Field<Elem = E>>(&self, k: &K) -> UniPoly<E> {
        if self.is_zero() {
            return UniPoly::zero();
        }
        let inv = k.inv(self.lead()).expect("leading coefficient is nonzero");
        self.scale(k, inv)
    }

    /// `self^2 mod m`, using that squaring is additive in characteristic 2.
    fn square_mod<K: Field<Elem = E>>(&self, k: &K, m: &UniPoly<E>) -> UniPoly<E> {
        let mut sq = vec![E::default(); (2 * self.coeffs.len()).saturating_sub(1)];
        for (i, &c) in self.coeffs.iter().enumerate() {
            sq[2 * i] = k.square(c);
        }
        UniPoly::new(sq).rem(k, m)
    }
}

/// Monic gcd; `gcd(0, 0) = 0`.
pub fn upoly_gcd<K: Field>(k: &K, f: &UniPoly<K::Elem>, g: &UniPoly<K::Elem>) -> UniPoly<K::Elem> {
    let (mut a, mut b) = (f.clone(), g.clone());
    while !b.is_zero() {
        let r = a.rem(k, &b);
        a = b;
        b = r;
    }
    a.monic(k)
}

/// `X^(2^n) mod m`.
fn x_pow_2n_mod<K: Field>(k: &K, m: &UniPoly<K::Elem>, n: u32) -> UniPoly<K::Elem> {
    let x = UniPoly::new(vec![k.zero(), k.one()]).rem(k, m);
    (0..n).fold(x, |acc, _| acc.square_mod(k, m))
}

/// The distinct roots of `f` lying in the field `k`, sorted.
pub fn upoly_roots<K: Field>(k: &K, f: &UniPoly<K::Elem>) -> Vec<K::Elem> {
    assert!(
        !f.is_zero(),
        "the zero polynomial has every element as a root"
    );
    let g = f.monic(k);
    if g.degree() == Some(0) {
        return Vec::new();
    }
    let xq = x_pow_2n_mod(k, &g, k.degree());
    let x = UniPoly::new(vec![k.zero(), k.one()]);
    let split = upoly_gcd(k, &g, &xq.add(&x));
    let mut roots = Vec::new();
    split_linear(k, &split, &mut roots);
    roots.sort();
    roots
}

/// Splits a monic product of distinct linear factors using absolute-trace
/// polynomials `Tr(beta X) mod h` for `beta` running over a GF(2)-basis.
fn split_linear<K: Field>(k: &K, h: &UniPoly<K::Elem>, out: &mut Vec<K::Elem>) {
    match h.degree() {
        None | Some(0) => return,
        Some(1) => {
            out.push(h.coeff(0));
            return;
        }
        _ => {}
    }
    for i in 0..k.degree() {
        let beta = k.f2_basis(i);
        let bx = UniPoly::new(vec![k.zero(), beta]).rem(k, h);
        let mut term = bx.clone();
        let mut tr = bx;
        for _ in 1..k.degree() {
            term = term.square_mod(k, h);
            tr = tr.add(&term);
        }
        let d = upoly_gcd(k, h, &tr);
        let dd = d.degree().unwrap_or(0);
        if dd > 0 && Some(dd) < h.degree() {
            let (rest, _) = h.divrem(k, &d);
            split_linear(k, &d, out);
            split_linear(k, &rest.monic(k), out);
            return;
        }
    }
    // Distinct roots always differ in the trace of some beta*r.
    unreachable!("trace splitting failed on a squarefree split polynomial");
}

/// Whether the polynomial with ascending coefficients `coeffs` has a root in `F_q`.
pub fn has_root(base: &BaseField, coeffs: &[FqElem]) -> bool {
    let f = UniPoly::new(coeffs.to_vec());
    match f.degree() {
        None => true,
        Some(0) => false,
        Some(_) => {
            let g = f.monic(base);
            let xq = x_pow_2n_mod(base, &g, base.degree());
            let x = UniPoly::new(vec![FqElem::ZERO, FqElem::ONE]);
            upoly_gcd(base, &g, &xq.add(&x)).degree() != Some(0)
        }
    }
}
