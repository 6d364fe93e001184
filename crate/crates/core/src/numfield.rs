//! Exact arithmetic in cyclotomic fields Q(ζ_n).
//!
//! An element is stored as rational coefficients on the power basis
//! `1, ζ, …, ζ^(φ(n)−1)`, i.e. reduced modulo the n-th cyclotomic polynomial.
//! With that reduction the representation is unique, so structural equality
//! is field equality for elements of the same conductor. Binary operations on
//! elements of different conductors first lift both operands to the lcm.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Per-conductor tables, built once and shared.
struct FieldData {
    n: u32,
    degree: usize,
    phi: Vec<i64>,
    /// `powers[k]` is ζ^k reduced modulo Φ_n, for k in 0..n.
    powers: Vec<Vec<i64>>,
}

fn field_cache() -> &'static Mutex<HashMap<u32, Arc<FieldData>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<FieldData>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn field(n: u32) -> Arc<FieldData> {
    assert!(n > 0, "conductor must be positive");
    if let Some(f) = field_cache().lock().unwrap().get(&n) {
        return f.clone();
    }
    // Built outside the lock: Φ_n recursion looks up the divisors' fields.
    let phi = cyclotomic_poly(n);
    let degree = phi.len() - 1;
    let mut powers = Vec::with_capacity(n as usize);
    let mut cur = vec![0i64; degree];
    cur[0] = 1;
    for _ in 0..n {
        powers.push(cur.clone());
        // multiply by x and reduce with the monic Φ_n
        let top = cur[degree - 1];
        for i in (1..degree).rev() {
            cur[i] = cur[i - 1] - top * phi[i];
        }
        cur[0] = -top * phi[0];
    }
    let data = Arc::new(FieldData { n, degree, phi, powers });
    field_cache().lock().unwrap().entry(n).or_insert(data).clone()
}

pub(crate) fn divisors(n: u32) -> Vec<u32> {
    let mut out: Vec<u32> = (1..=n).filter(|d| n % d == 0).collect();
    out.sort_unstable();
    out
}

/// Coefficients of Φ_n, lowest degree first.
pub fn cyclotomic_poly(n: u32) -> Vec<i64> {
    if n == 1 {
        return vec![-1, 1];
    }
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in divisors(n) {
        if d == n {
            continue;
        }
        p = exact_div_monic(&p, &field(d).phi);
    }
    p
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut q = vec![0i64; qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd];
        q[i] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[i + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "inexact cyclotomic division");
    q
}

/// Euler's totient, i.e. the degree of Q(ζ_n).
pub fn totient(n: u32) -> usize {
    field(n).degree
}

/// An exact element of the cyclotomic field Q(ζ_n).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycNumber {
    conductor: u32,
    coeffs: Vec<BigRational>,
}

impl CycNumber {
    pub fn zero(n: u32) -> Self {
        CycNumber { conductor: n, coeffs: vec![BigRational::zero(); field(n).degree] }
    }

    pub fn one(n: u32) -> Self {
        Self::from_rational(n, BigRational::one())
    }

    pub fn from_int(n: u32, v: i64) -> Self {
        Self::from_rational(n, BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_rational(n: u32, v: BigRational) -> Self {
        let mut z = Self::zero(n);
        z.coeffs[0] = v;
        z
    }

    /// The root of unity ζ_n^k.
    pub fn root(n: u32, k: i64) -> Self {
        let k = k.rem_euclid(n as i64) as usize;
        let f = field(n);
        CycNumber {
            conductor: n,
            coeffs: f.powers[k].iter().map(|&c| BigRational::from_integer(c.into())).collect(),
        }
    }

    /// Σ q·ζ_n^p over the given (power, coefficient) terms; powers may exceed φ(n).
    pub fn from_terms(n: u32, terms: &[(i64, BigRational)]) -> Self {
        let mut full = vec![BigRational::zero(); n as usize];
        for (p, q) in terms {
            let k = p.rem_euclid(n as i64) as usize;
            full[k] += q;
        }
        reduce_full(n, &full)
    }

    /// Parses the data-file form: a list of `(power, numerator, denominator)` triples.
    pub fn from_triples(n: u32, triples: &[(i64, i64, i64)]) -> Option<Self> {
        let mut terms = Vec::with_capacity(triples.len());
        for &(p, num, den) in triples {
            if den == 0 {
                return None;
            }
            terms.push((p, BigRational::new(num.into(), den.into())));
        }
        Some(Self::from_terms(n, &terms))
    }

    /// Nonzero reduced coefficients as `(power, numerator, denominator)`.
    pub fn to_triples(&self) -> Vec<(i64, BigInt, BigInt)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i as i64, c.numer().clone(), c.denom().clone()))
            .collect()
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The value as a rational, when it lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Complex conjugation, ζ ↦ ζ^(n−1).
    pub fn conj(&self) -> Self {
        let n = self.conductor as usize;
        let mut full = vec![BigRational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            full[(n - i) % n] = c.clone();
        }
        reduce_full(self.conductor, &full)
    }

    /// `self · conj(self)`, a nonnegative real.
    pub fn abs_sq(&self) -> Self {
        self * &self.conj()
    }

    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }

    /// Lifts to Q(ζ_m); `m` must be a multiple of the conductor.
    pub fn coerce(&self, m: u32) -> Self {
        assert!(m % self.conductor == 0, "cannot lift Q(ζ_{}) into Q(ζ_{m})", self.conductor);
        if m == self.conductor {
            return self.clone();
        }
        let step = (m / self.conductor) as usize;
        let mut full = vec![BigRational::zero(); m as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            full[i * step] = c.clone();
        }
        reduce_full(m, &full)
    }

    /// Rewrites the element over the subfield Q(ζ_d), if it lies there.
    pub fn restrict(&self, d: u32) -> Option<Self> {
        if self.conductor % d != 0 {
            return None;
        }
        if d == self.conductor {
            return Some(self.clone());
        }
        if d <= 2 {
            return self.as_rational().map(|q| Self::from_rational(d, q));
        }
        let sub_degree = field(d).degree;
        let columns: Vec<Vec<BigRational>> = (0..sub_degree)
            .map(|j| Self::root(d, j as i64).coerce(self.conductor).coeffs)
            .collect();
        solve(&columns, &self.coeffs).map(|coeffs| CycNumber { conductor: d, coeffs })
    }

    /// The same element over the smallest cyclotomic field that contains it.
    pub fn lower(&self) -> Self {
        for d in divisors(self.conductor) {
            if let Some(r) = self.restrict(d) {
                return r;
            }
        }
        self.clone()
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.conductor;
        let columns: Vec<Vec<BigRational>> = (0..field(n).degree)
            .map(|j| (self * &Self::root(n, j as i64)).coeffs)
            .collect();
        let mut rhs = vec![BigRational::zero(); columns.len()];
        rhs[0] = BigRational::one();
        solve(&columns, &rhs).map(|coeffs| CycNumber { conductor: n, coeffs })
    }

    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        rhs.inverse().map(|inv| self * &inv)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        CycNumber { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    /// Numerical value at ζ_n = e^{2πi/n}.
    pub fn to_complex(&self) -> Complex64 {
        let n = self.conductor as f64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / n;
                Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), theta)
            })
            .sum()
    }

    fn align(a: &Self, b: &Self) -> (Self, Self) {
        if a.conductor == b.conductor {
            return (a.clone(), b.clone());
        }
        let m = a.conductor.lcm(&b.conductor);
        (a.coerce(m), b.coerce(m))
    }

    fn display_terms(&self) -> Vec<(BigRational, String)> {
        let n = self.conductor;
        let atom = |k: usize| -> String {
            match (n, k) {
                (_, 0) => String::new(),
                (3, 1) => "ω".into(),
                (3, 2) => "ω²".into(),
                (4, 1) => "i".into(),
                (_, 1) => format!("ζ{n}"),
                _ => format!("ζ{n}^{k}"),
            }
        };
        let c = &self.coeffs;
        if n == 3 {
            // a + bω = (a−c) + (b−c)ω − cω² for any c; pick the sparsest form.
            let options = [BigRational::zero(), c[0].clone(), c[1].clone()];
            let best = options
                .iter()
                .map(|t| [&c[0] - t, &c[1] - t, -t.clone()])
                .min_by_key(|v| {
                    let nz = v.iter().filter(|x| !x.is_zero()).count();
                    let weight: BigRational = v.iter().map(|x| x.abs()).sum();
                    (nz, weight)
                })
                .unwrap();
            return best.into_iter().enumerate().map(|(k, q)| (q, atom(k))).collect();
        }
        if n == 8 && c[2].is_zero() && c[3] == -c[1].clone() {
            return vec![(c[0].clone(), String::new()), (c[1].clone(), "√2".into())];
        }
        c.iter().enumerate().map(|(k, q)| (q.clone(), atom(k))).collect()
    }
}

impl fmt::Display for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<_> = self.display_terms().into_iter().filter(|(q, _)| !q.is_zero()).collect();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (q, atom)) in terms.iter().enumerate() {
            let neg = q.is_negative();
            if neg {
                write!(f, "-")?;
            } else if i > 0 {
                write!(f, "+")?;
            }
            let mag = q.abs();
            if atom.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{atom}")?;
            } else {
                write!(f, "{mag}{atom}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [Q(ζ{})]", self, self.conductor)
    }
}

fn reduce_full(n: u32, full: &[BigRational]) -> CycNumber {
    let f = field(n);
    debug_assert_eq!(f.n, n);
    let mut coeffs = vec![BigRational::zero(); f.degree];
    for (k, c) in full.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for (i, &p) in f.powers[k].iter().enumerate() {
            match p {
                0 => {}
                1 => coeffs[i] += c,
                -1 => coeffs[i] -= c,
                _ => coeffs[i] += c * BigRational::from_integer(p.into()),
            }
        }
    }
    CycNumber { conductor: n, coeffs }
}

/// Solves `Σ_j x_j · columns[j] = rhs` exactly, assuming independent columns.
fn solve(columns: &[Vec<BigRational>], rhs: &[BigRational]) -> Option<Vec<BigRational>> {
    let rows = rhs.len();
    let cols = columns.len();
    let mut m: Vec<Vec<BigRational>> = (0..rows)
        .map(|r| {
            let mut row: Vec<BigRational> = columns.iter().map(|c| c[r].clone()).collect();
            row.push(rhs[r].clone());
            row
        })
        .collect();
    let mut pivot_row = 0;
    let mut pivots = Vec::with_capacity(cols);
    for col in 0..cols {
        let Some(p) = (pivot_row..rows).find(|&r| !m[r][col].is_zero()) else {
            return None;
        };
        m.swap(pivot_row, p);
        let inv = m[pivot_row][col].recip();
        for v in m[pivot_row].iter_mut() {
            *v *= &inv;
        }
        for r in 0..rows {
            if r != pivot_row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..=cols {
                    let delta = &m[pivot_row][c] * &factor;
                    m[r][c] -= delta;
                }
            }
        }
        pivots.push(pivot_row);
        pivot_row += 1;
    }
    if m[pivot_row..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    Some(pivots.iter().map(|&r| m[r][cols].clone()).collect())
}

impl Add for &CycNumber {
    type Output = CycNumber;
    fn add(self, rhs: &CycNumber) -> CycNumber {
        let (a, b) = CycNumber::align(self, rhs);
        CycNumber { conductor: a.conductor, coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect() }
    }
}

impl Sub for &CycNumber {
    type Output = CycNumber;
    fn sub(self, rhs: &CycNumber) -> CycNumber {
        let (a, b) = CycNumber::align(self, rhs);
        CycNumber { conductor: a.conductor, coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect() }
    }
}

impl Mul for &CycNumber {
    type Output = CycNumber;
    fn mul(self, rhs: &CycNumber) -> CycNumber {
        let (a, b) = CycNumber::align(self, rhs);
        let n = a.conductor as usize;
        let mut full = vec![BigRational::zero(); n];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    full[(i + j) % n] += x * y;
                }
            }
        }
        reduce_full(a.conductor, &full)
    }
}

impl Neg for &CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        CycNumber { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for CycNumber {
            type Output = CycNumber;
            fn $m(self, rhs: CycNumber) -> CycNumber {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        -&self
    }
}

impl std::iter::Sum for CycNumber {
    fn sum<I: Iterator<Item = CycNumber>>(iter: I) -> CycNumber {
        iter.fold(CycNumber::zero(1), |acc, x| &acc + &x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w() -> CycNumber {
        CycNumber::root(3, 1)
    }

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(totient(24), 8);
    }

    #[test]
    fn omega_relations() {
        let one = CycNumber::one(3);
        let w2 = &w() * &w();
        assert!((&(&one + &w()) + &w2).is_zero());
        assert_eq!(w().conj(), w2);
        assert_eq!(w2.conj(), w());
        assert_eq!((-w()).conj(), -w2.clone());
        assert_eq!(one.conj(), one);
        assert!(!(&w() - &w2).is_zero());
        assert!((&(&w2 * &w()) - &one).is_zero());
    }

    #[test]
    fn one_plus_omega_times_conjugate() {
        let one = CycNumber::one(3);
        let a = &one + &w();
        let b = &one + &CycNumber::root(3, 2);
        let p = &a * &b;
        assert!(p.is_one());
        // floating-point oracle at ω = e^{2πi/3}
        let wf = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        let expect = (1.0 + wf) * (1.0 + wf * wf);
        assert!((p.to_complex() - expect).norm() < 1e-12);
    }

    #[test]
    fn mixed_conductor_and_lowering() {
        let w24 = CycNumber::root(24, 8);
        assert_eq!(w24.lower(), w());
        let sum = &w() + &CycNumber::root(8, 1);
        assert_eq!(sum.conductor(), 24);
        let sqrt2 = &CycNumber::root(8, 1) + &CycNumber::root(8, 7);
        assert!(sqrt2.is_real());
        assert_eq!((&sqrt2 * &sqrt2).as_rational(), Some(BigRational::from_integer(2.into())));
        assert_eq!(sqrt2.lower().conductor(), 8);
        assert_eq!(format!("{sqrt2}"), "√2");
        // ζ_6 = −ω²
        assert_eq!(CycNumber::root(6, 1).lower(), -CycNumber::root(3, 2));
    }

    #[test]
    fn inverse_and_display() {
        let a = &CycNumber::from_int(3, 2) - &w();
        let inv = a.inverse().unwrap();
        assert!((&a * &inv).is_one());
        assert!(CycNumber::zero(3).inverse().is_none());
        assert_eq!(format!("{}", CycNumber::root(3, 2)), "ω²");
        assert_eq!(format!("{}", -CycNumber::root(3, 2)), "-ω²");
        assert_eq!(format!("{}", &CycNumber::one(3) + &w()), "-ω²");
        assert_eq!(format!("{}", CycNumber::from_int(3, -2)), "-2");
    }

    #[test]
    fn triples_round_trip() {
        let v = CycNumber::from_triples(3, &[(2, 1, 1)]).unwrap();
        assert_eq!(v, CycNumber::root(3, 2));
        let back: Vec<(i64, i64, i64)> = v
            .to_triples()
            .into_iter()
            .map(|(p, a, b)| (p, a.to_i64().unwrap(), b.to_i64().unwrap()))
            .collect();
        assert_eq!(CycNumber::from_triples(3, &back).unwrap(), v);
        assert!(CycNumber::from_triples(3, &[(0, 1, 0)]).is_none());
    }
}
