//! Multivariate truncated Taylor jets.
//!
//! A [`TaylorJet`] stores the value and all scaled partial derivatives
//! ∂^α f / α! of a scalar function at a base point, for every multi-index
//! |α| ≤ k. Arithmetic on jets is truncated-Taylor arithmetic: it is exact
//! for polynomial data of degree ≤ k, and exact to machine precision for
//! the composition semantics of the supported elementary functions.
//!
//! Dimensions are small by construction (d ≤ 8 coordinates, order k ≤ 4),
//! so coefficients live in a dense table indexed by graded-lexicographic
//! multi-index position. The index bookkeeping for a given (d, k) pair is
//! computed once and shared globally through [`jet_space`].
//!
//! Within a graded block the enumeration is independent of the order cap,
//! so the table of an order-(k−1) jet is literally a prefix of the
//! order-k table. Truncation is a prefix copy, which keeps the identity
//! "order-k jet truncated to k−1 == order-(k−1) jet" exact bit for bit.

use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// Largest supported number of coordinates.
pub const MAX_DIM: usize = 8;
/// Largest supported truncation order.
pub const MAX_ORDER: usize = 4;

/// Smallest magnitude allowed for a jet value in the denominator of a
/// division. Anything below this is treated as a domain error rather than
/// letting the coefficients blow up into infinities.
pub const DIV_FLOOR: f64 = 1e-300;

/// Errors produced by jet arithmetic.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum JetError {
    /// A function left its domain: log/sqrt of a non-positive value,
    /// or division by a jet whose value part is (numerically) zero.
    #[error("domain error: {0}")]
    Domain(String),
    /// A non-finite coefficient appeared.
    #[error("non-finite value in jet arithmetic")]
    NonFinite,
}

/// Index bookkeeping shared by all jets of a given dimension and order.
pub struct JetSpace {
    dim: usize,
    order: usize,
    /// Multi-indices in graded-lexicographic order.
    indices: Vec<Vec<u8>>,
    /// Position of each multi-index in `indices`.
    position: HashMap<Vec<u8>, usize>,
    /// All (i, j, target) triples with |α_i| + |α_j| ≤ order and
    /// α_i + α_j at position `target`.
    products: Vec<(u32, u32, u32)>,
    /// Number of indices of degree ≤ s, for s = 0..=order.
    graded_len: Vec<usize>,
}

impl JetSpace {
    fn new(dim: usize, order: usize) -> Self {
        assert!(dim >= 1 && dim <= MAX_DIM, "jet dimension out of range");
        assert!(order <= MAX_ORDER, "jet order out of range");
        let mut indices = Vec::new();
        let mut graded_len = Vec::with_capacity(order + 1);
        for degree in 0..=order {
            enumerate_degree(dim, degree, &mut indices);
            graded_len.push(indices.len());
        }
        let position: HashMap<Vec<u8>, usize> = indices
            .iter()
            .enumerate()
            .map(|(pos, idx)| (idx.clone(), pos))
            .collect();
        let mut products = Vec::new();
        for (i, a) in indices.iter().enumerate() {
            let da: usize = a.iter().map(|&e| e as usize).sum();
            for (j, b) in indices.iter().enumerate() {
                let db: usize = b.iter().map(|&e| e as usize).sum();
                if da + db > order {
                    continue;
                }
                let sum: Vec<u8> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                let target = position[&sum];
                products.push((i as u32, j as u32, target as u32));
            }
        }
        JetSpace {
            dim,
            order,
            indices,
            position,
            products,
            graded_len,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of stored coefficients, C(dim + order, order).
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Multi-index at a table position.
    pub fn index_at(&self, pos: usize) -> &[u8] {
        &self.indices[pos]
    }

    /// Table position of a multi-index, if |α| ≤ order.
    pub fn position_of(&self, alpha: &[u8]) -> Option<usize> {
        self.position.get(alpha).copied()
    }
}

/// Enumerate all multi-indices of the given total degree, appending to
/// `out` in lexicographic order (largest leading exponent first).
fn enumerate_degree(dim: usize, degree: usize, out: &mut Vec<Vec<u8>>) {
    fn rec(prefix: &mut Vec<u8>, remaining: usize, slots: usize, out: &mut Vec<Vec<u8>>) {
        if slots == 1 {
            prefix.push(remaining as u8);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=remaining).rev() {
            prefix.push(e as u8);
            rec(prefix, remaining - e, slots - 1, out);
            prefix.pop();
        }
    }
    let mut prefix = Vec::with_capacity(dim);
    rec(&mut prefix, degree, dim, out);
}

static SPACES: Lazy<Mutex<HashMap<(usize, usize), &'static JetSpace>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Shared bookkeeping for jets of `dim` coordinates truncated at `order`.
///
/// Spaces are built on first use and cached for the life of the process;
/// there are at most `MAX_DIM * (MAX_ORDER + 1)` of them.
pub fn jet_space(dim: usize, order: usize) -> &'static JetSpace {
    let mut map = SPACES.lock().expect("jet space registry poisoned");
    map.entry((dim, order))
        .or_insert_with(|| Box::leak(Box::new(JetSpace::new(dim, order))))
}

/// A multivariate truncated Taylor expansion of a scalar at a point.
///
/// Coefficient `alpha` stores ∂^α f(base) / α!. The order-0 coefficient is
/// the function value itself.
#[derive(Clone)]
pub struct TaylorJet {
    space: &'static JetSpace,
    base: Arc<[f64]>,
    coeffs: Vec<f64>,
}

impl std::fmt::Debug for TaylorJet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TaylorJet")
            .field("dim", &self.space.dim)
            .field("order", &self.space.order)
            .field("base", &&self.base[..])
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

impl TaylorJet {
    /// The jet of a constant.
    pub fn constant(space: &'static JetSpace, base: Arc<[f64]>, value: f64) -> Self {
        debug_assert_eq!(base.len(), space.dim);
        let mut coeffs = vec![0.0; space.len()];
        coeffs[0] = value;
        TaylorJet { space, base, coeffs }
    }

    /// The jet of the coordinate function `x_coord`.
    pub fn variable(space: &'static JetSpace, base: Arc<[f64]>, coord: usize) -> Self {
        debug_assert!(coord < space.dim);
        let mut coeffs = vec![0.0; space.len()];
        coeffs[0] = base[coord];
        if space.order >= 1 {
            coeffs[1 + coord] = 1.0;
        }
        TaylorJet { space, base, coeffs }
    }

    pub fn space(&self) -> &'static JetSpace {
        self.space
    }

    pub fn base(&self) -> &[f64] {
        &self.base
    }

    pub fn base_arc(&self) -> Arc<[f64]> {
        self.base.clone()
    }

    pub fn order(&self) -> usize {
        self.space.order
    }

    pub fn dim(&self) -> usize {
        self.space.dim
    }

    /// The value part (order-0 coefficient).
    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// Raw coefficient table, graded-lexicographic.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Taylor coefficient for a multi-index: ∂^α f / α!.
    pub fn coeff(&self, alpha: &[u8]) -> f64 {
        match self.space.position_of(alpha) {
            Some(pos) => self.coeffs[pos],
            None => 0.0,
        }
    }

    /// Plain partial derivative ∂^α f (coefficient times α!).
    pub fn partial(&self, alpha: &[u8]) -> f64 {
        let mut fact = 1.0;
        for &e in alpha {
            for i in 1..=e as u64 {
                fact *= i as f64;
            }
        }
        self.coeff(alpha) * fact
    }

    fn check_compatible(&self, rhs: &TaylorJet) {
        debug_assert!(
            std::ptr::eq(self.space, rhs.space),
            "jet spaces differ (dim/order mismatch)"
        );
        debug_assert!(
            Arc::ptr_eq(&self.base, &rhs.base) || self.base[..] == rhs.base[..],
            "jet base points differ"
        );
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    /// Same jet with every coefficient scaled.
    pub fn scale(&self, s: f64) -> Self {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c *= s;
        }
        out
    }

    /// Truncate to a lower (or equal) order. Prefix copy: exact.
    pub fn truncated(&self, order: usize) -> Self {
        assert!(order <= self.space.order, "cannot truncate upwards");
        let space = jet_space(self.space.dim, order);
        let coeffs = self.coeffs[..space.len()].to_vec();
        TaylorJet {
            space,
            base: self.base.clone(),
            coeffs,
        }
    }

    /// Jet of ∂f/∂x_coord, one order lower.
    ///
    /// Coefficient of β in the derivative is (β_coord + 1) · coeff(β + e_coord).
    pub fn derivative(&self, coord: usize) -> Self {
        assert!(self.space.order >= 1, "cannot differentiate an order-0 jet");
        assert!(coord < self.space.dim);
        let space = jet_space(self.space.dim, self.space.order - 1);
        let mut coeffs = vec![0.0; space.len()];
        let mut shifted = vec![0u8; self.space.dim];
        for (pos, beta) in space.indices.iter().enumerate() {
            shifted.copy_from_slice(beta);
            shifted[coord] += 1;
            let src = self
                .space
                .position_of(&shifted)
                .expect("shifted index in range");
            coeffs[pos] = self.coeffs[src] * f64::from(beta[coord] + 1);
        }
        TaylorJet {
            space,
            base: self.base.clone(),
            coeffs,
        }
    }

    /// Truncated product.
    pub fn mul(&self, rhs: &TaylorJet) -> TaylorJet {
        self.check_compatible(rhs);
        let mut coeffs = vec![0.0; self.space.len()];
        for &(i, j, k) in &self.space.products {
            coeffs[k as usize] += self.coeffs[i as usize] * rhs.coeffs[j as usize];
        }
        TaylorJet {
            space: self.space,
            base: self.base.clone(),
            coeffs,
        }
    }

    /// Composition with a univariate Taylor polynomial: Σ_j c_j (f − f₀)^j,
    /// where c_j = g^{(j)}(f₀)/j!. Exact for the truncated semantics since
    /// f − f₀ is nilpotent.
    fn compose_scalar(&self, c: &[f64]) -> TaylorJet {
        let mut dev = self.clone();
        dev.coeffs[0] = 0.0;
        let mut acc = TaylorJet::constant(self.space, self.base.clone(), c[0]);
        let mut power = TaylorJet::constant(self.space, self.base.clone(), 1.0);
        for &cj in c.iter().take(self.space.order + 1).skip(1) {
            power = power.mul(&dev);
            let mut term = power.clone();
            for t in &mut term.coeffs {
                *t *= cj;
            }
            acc = acc.add(&term);
        }
        acc
    }

    pub fn add(&self, rhs: &TaylorJet) -> TaylorJet {
        self.check_compatible(rhs);
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, rhs: &TaylorJet) -> TaylorJet {
        self.check_compatible(rhs);
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
        out
    }

    pub fn neg(&self) -> TaylorJet {
        self.scale(-1.0)
    }

    /// 1/f. Fails when the value part is numerically zero.
    pub fn try_recip(&self) -> Result<TaylorJet, JetError> {
        let v = self.value();
        if !v.is_finite() {
            return Err(JetError::NonFinite);
        }
        if v.abs() < DIV_FLOOR {
            return Err(JetError::Domain(format!(
                "division by jet with value {v:e}"
            )));
        }
        let k = self.space.order;
        let mut c = [0.0; MAX_ORDER + 1];
        let mut p = 1.0 / v;
        for (j, slot) in c.iter_mut().take(k + 1).enumerate() {
            *slot = if j % 2 == 0 { p } else { -p };
            p /= v;
        }
        // c_j = (−1)^j / v^{j+1}
        Ok(self.compose_scalar(&c[..=k]))
    }

    pub fn try_div(&self, rhs: &TaylorJet) -> Result<TaylorJet, JetError> {
        Ok(self.mul(&rhs.try_recip()?))
    }

    pub fn exp(&self) -> TaylorJet {
        let v = self.value().exp();
        let k = self.space.order;
        let mut c = [0.0; MAX_ORDER + 1];
        let mut fact = 1.0;
        for (j, slot) in c.iter_mut().take(k + 1).enumerate() {
            if j > 0 {
                fact *= j as f64;
            }
            *slot = v / fact;
        }
        self.compose_scalar(&c[..=k])
    }

    pub fn try_ln(&self) -> Result<TaylorJet, JetError> {
        let v = self.value();
        if !v.is_finite() {
            return Err(JetError::NonFinite);
        }
        if v <= 0.0 {
            return Err(JetError::Domain(format!("log of non-positive value {v}")));
        }
        let k = self.space.order;
        let mut c = [0.0; MAX_ORDER + 1];
        c[0] = v.ln();
        let mut p = v;
        for j in 1..=k {
            let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
            c[j] = sign / (j as f64 * p);
            p *= v;
        }
        Ok(self.compose_scalar(&c[..=k]))
    }

    pub fn try_sqrt(&self) -> Result<TaylorJet, JetError> {
        let v = self.value();
        if !v.is_finite() {
            return Err(JetError::NonFinite);
        }
        if v <= 0.0 {
            return Err(JetError::Domain(format!(
                "sqrt of non-positive value {v}"
            )));
        }
        let k = self.space.order;
        let r = v.sqrt();
        // binom(1/2, j) · v^{1/2 − j}
        let mut c = [0.0; MAX_ORDER + 1];
        c[0] = r;
        let mut binom = 1.0;
        let mut p = r;
        for (j, slot) in c.iter_mut().enumerate().take(k + 1).skip(1) {
            binom *= (0.5 - (j as f64 - 1.0)) / j as f64;
            p /= v;
            *slot = binom * p;
        }
        Ok(self.compose_scalar(&c[..=k]))
    }

    pub fn sin(&self) -> TaylorJet {
        let (s, co) = self.value().sin_cos();
        let cycle = [s, co, -s, -co, s];
        let k = self.space.order;
        let mut c = [0.0; MAX_ORDER + 1];
        let mut fact = 1.0;
        for (j, slot) in c.iter_mut().take(k + 1).enumerate() {
            if j > 0 {
                fact *= j as f64;
            }
            *slot = cycle[j] / fact;
        }
        self.compose_scalar(&c[..=k])
    }

    pub fn cos(&self) -> TaylorJet {
        let (s, co) = self.value().sin_cos();
        let cycle = [co, -s, -co, s, co];
        let k = self.space.order;
        let mut c = [0.0; MAX_ORDER + 1];
        let mut fact = 1.0;
        for (j, slot) in c.iter_mut().take(k + 1).enumerate() {
            if j > 0 {
                fact *= j as f64;
            }
            *slot = cycle[j] / fact;
        }
        self.compose_scalar(&c[..=k])
    }

    pub fn tanh(&self) -> TaylorJet {
        let t = self.value().tanh();
        let f1 = 1.0 - t * t;
        let f2 = -2.0 * t * f1;
        let f3 = -2.0 * (f1 * f1 + t * f2);
        let f4 = -2.0 * (3.0 * f1 * f2 + t * f3);
        let c = [t, f1, f2 / 2.0, f3 / 6.0, f4 / 24.0];
        self.compose_scalar(&c[..=self.space.order])
    }

    pub fn atan(&self) -> TaylorJet {
        let v = self.value();
        let w = 1.0 / (1.0 + v * v);
        let f1 = w;
        let f2 = -2.0 * v * w * w;
        let f3 = (6.0 * v * v - 2.0) * w * w * w;
        let f4 = (24.0 * v - 24.0 * v * v * v) * w * w * w * w;
        let c = [v.atan(), f1, f2 / 2.0, f3 / 6.0, f4 / 24.0];
        self.compose_scalar(&c[..=self.space.order])
    }

    /// Integer power by repeated truncated multiplication. Negative
    /// exponents take a reciprocal at the end.
    pub fn powi(&self, n: i64) -> Result<TaylorJet, JetError> {
        let mut acc = TaylorJet::constant(self.space, self.base.clone(), 1.0);
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul(self);
        }
        if n < 0 {
            acc = acc.try_recip()?;
        }
        Ok(acc)
    }

    /// Non-integer constant power, rewritten as exp(c · log f).
    pub fn try_powf(&self, c: f64) -> Result<TaylorJet, JetError> {
        Ok(self.try_ln()?.scale(c).exp())
    }

    /// Plug inner jets into an outer jet: (g ∘ u)(z) where `self` is the
    /// jet of g at q = (u_1(p), …, u_D(p)) and `inners[c]` is the jet of
    /// u_c at p. Inner value parts must equal the outer base point.
    pub fn compose(&self, inners: &[TaylorJet]) -> TaylorJet {
        assert_eq!(inners.len(), self.space.dim, "inner jet count mismatch");
        let inner_space = inners[0].space;
        assert_eq!(inner_space.order, self.space.order, "order mismatch");
        for u in inners {
            debug_assert!(std::ptr::eq(u.space, inner_space));
        }
        let base = inners[0].base.clone();
        let k = self.space.order;
        // Powers of the deviations (u_c − u_c(p)), each nilpotent.
        let mut powers: Vec<Vec<TaylorJet>> = Vec::with_capacity(self.space.dim);
        for (c, u) in inners.iter().enumerate() {
            debug_assert!(
                (u.value() - self.base[c]).abs() <= 1e-9 * (1.0 + self.base[c].abs()),
                "inner jet value does not match outer base point"
            );
            let mut dev = u.clone();
            dev.coeffs[0] = 0.0;
            let mut ps = Vec::with_capacity(k + 1);
            ps.push(TaylorJet::constant(inner_space, base.clone(), 1.0));
            for e in 1..=k {
                let next = ps[e - 1].mul(&dev);
                ps.push(next);
            }
            powers.push(ps);
        }
        let mut acc = TaylorJet::constant(inner_space, base.clone(), 0.0);
        for (pos, alpha) in self.space.indices.iter().enumerate() {
            let coeff = self.coeffs[pos];
            if coeff == 0.0 {
                continue;
            }
            let mut term = TaylorJet::constant(inner_space, base.clone(), coeff);
            for (c, &e) in alpha.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&powers[c][e as usize]);
                }
            }
            acc = acc.add(&term);
        }
        acc
    }
}

impl std::ops::Add for &TaylorJet {
    type Output = TaylorJet;
    fn add(self, rhs: Self) -> TaylorJet {
        TaylorJet::add(self, rhs)
    }
}

impl std::ops::Sub for &TaylorJet {
    type Output = TaylorJet;
    fn sub(self, rhs: Self) -> TaylorJet {
        TaylorJet::sub(self, rhs)
    }
}

impl std::ops::Mul for &TaylorJet {
    type Output = TaylorJet;
    fn mul(self, rhs: Self) -> TaylorJet {
        TaylorJet::mul(self, rhs)
    }
}

impl std::ops::Neg for &TaylorJet {
    type Output = TaylorJet;
    fn neg(self) -> TaylorJet {
        TaylorJet::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base(coords: &[f64]) -> Arc<[f64]> {
        coords.to_vec().into()
    }

    #[test]
    fn coefficient_count_is_binomial() {
        assert_eq!(jet_space(3, 2).len(), 10); // C(5,2)
        assert_eq!(jet_space(2, 4).len(), 15); // C(6,4)
        assert_eq!(jet_space(8, 4).len(), 495); // C(12,4)
        assert_eq!(jet_space(1, 0).len(), 1);
    }

    #[test]
    fn bilinear_product() {
        // x*y at (2,3), order 2: value 6, ∂x=3, ∂y=2, mixed coeff 1.
        let sp = jet_space(2, 2);
        let b = base(&[2.0, 3.0]);
        let x = TaylorJet::variable(sp, b.clone(), 0);
        let y = TaylorJet::variable(sp, b, 1);
        let f = &x * &y;
        assert_eq!(f.value(), 6.0);
        assert_eq!(f.coeff(&[1, 0]), 3.0);
        assert_eq!(f.coeff(&[0, 1]), 2.0);
        assert_eq!(f.coeff(&[1, 1]), 1.0);
        assert_eq!(f.coeff(&[2, 0]), 0.0);
        assert_eq!(f.coeff(&[0, 2]), 0.0);
    }

    #[test]
    fn exp_series_at_zero() {
        let sp = jet_space(1, 4);
        let x = TaylorJet::variable(sp, base(&[0.0]), 0);
        let f = x.exp();
        let expect = [1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0];
        for (pos, e) in expect.iter().enumerate() {
            assert!((f.coeffs()[pos] - e).abs() < 1e-15);
        }
    }

    #[test]
    fn reciprocal_is_geometric_series() {
        // 1/(1−x) at 0: coefficients all 1.
        let sp = jet_space(1, 4);
        let b = base(&[0.0]);
        let x = TaylorJet::variable(sp, b.clone(), 0);
        let one = TaylorJet::constant(sp, b, 1.0);
        let f = (&one - &x).try_recip().unwrap();
        for pos in 0..5 {
            assert!((f.coeffs()[pos] - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn truncation_is_prefix() {
        let sp = jet_space(3, 4);
        let b = base(&[0.3, -0.2, 0.7]);
        let x = TaylorJet::variable(sp, b.clone(), 0);
        let y = TaylorJet::variable(sp, b.clone(), 1);
        let z = TaylorJet::variable(sp, b, 2);
        let f = (&(&x * &y) + &z).sin().mul(&x.exp());
        let t = f.truncated(2);
        for (pos, c) in t.coeffs().iter().enumerate() {
            assert_eq!(*c, f.coeffs()[pos]);
        }
    }

    #[test]
    fn derivative_shifts_indices() {
        // f = x^2 y at (1,1): ∂x f = 2xy has value 2, ∂x = 2, ∂y = 2.
        let sp = jet_space(2, 3);
        let b = base(&[1.0, 1.0]);
        let x = TaylorJet::variable(sp, b.clone(), 0);
        let y = TaylorJet::variable(sp, b, 1);
        let f = (&(&x * &x) * &y).derivative(0);
        assert_eq!(f.order(), 2);
        assert!((f.value() - 2.0).abs() < 1e-15);
        assert!((f.partial(&[1, 0]) - 2.0).abs() < 1e-15);
        assert!((f.partial(&[0, 1]) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn division_by_zero_value_is_domain_error() {
        let sp = jet_space(1, 2);
        let x = TaylorJet::variable(sp, base(&[0.0]), 0);
        assert!(matches!(x.try_recip(), Err(JetError::Domain(_))));
    }

    #[test]
    fn compose_matches_direct_evaluation() {
        // g(u, v) = u·exp(v) with u = x+y², v = x·y at (0.5, −0.3).
        let inner_sp = jet_space(2, 3);
        let b = base(&[0.5, -0.3]);
        let x = TaylorJet::variable(inner_sp, b.clone(), 0);
        let y = TaylorJet::variable(inner_sp, b, 1);
        let u = &x + &(&y * &y);
        let v = &x * &y;

        let outer_sp = jet_space(2, 3);
        let q = base(&[u.value(), v.value()]);
        let gu = TaylorJet::variable(outer_sp, q.clone(), 0);
        let gv = TaylorJet::variable(outer_sp, q, 1);
        let g = gu.mul(&gv.exp());

        let composed = g.compose(&[u.clone(), v.clone()]);
        let direct = u.mul(&v.exp());
        for (c1, c2) in composed.coeffs().iter().zip(direct.coeffs()) {
            assert!((c1 - c2).abs() < 1e-13);
        }
    }
}
