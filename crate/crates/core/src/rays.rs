//! Projective vectors in C³, their canonical forms and Hermitian geometry.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::numfield::CycNumber;

/// A ray of C³: a nonzero vector up to a nonzero scalar.
///
/// The stored components are kept as given (vectors are unnormalized).
/// Equality, ordering and hashing go through the canonical key, which is the
/// vector rescaled so its first nonzero component is 1, expressed over the
/// smallest cyclotomic field containing it.
#[derive(Clone)]
pub struct Ray {
    components: [CycNumber; 3],
    key: [CycNumber; 3],
}

impl Ray {
    pub fn new(components: [CycNumber; 3]) -> Result<Self> {
        let key = canonical_key(&components)?;
        Ok(Ray { components, key })
    }

    pub fn from_ints(v: [i64; 3]) -> Result<Self> {
        Self::new(v.map(|x| CycNumber::from_int(1, x)))
    }

    /// Parses a literal such as `(1,-ω,ω^2)` or `(0,1,√2)`.
    ///
    /// Each component is a sum of terms `[±][integer[/integer]][atom[^k]]`, where
    /// the atom is `ω`/`w` (cube root of unity), `i`, or `√2`/`s2`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("ray literal must be parenthesised: {text:?}")))?;
        let parts: Vec<&str> = inner.split(',').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("expected 3 components in {text:?}")));
        }
        let comps = [parse_component(parts[0])?, parse_component(parts[1])?, parse_component(parts[2])?];
        Self::new(comps)
    }

    pub fn components(&self) -> &[CycNumber; 3] {
        &self.components
    }

    pub fn canonical(&self) -> &[CycNumber; 3] {
        &self.key
    }

    /// Conductor of the field holding the canonical key.
    pub fn conductor(&self) -> u32 {
        self.key[0].conductor()
    }

    /// Same ray with every stored component multiplied by `s` (nonzero).
    pub fn scaled(&self, s: &CycNumber) -> Result<Self> {
        Self::new(self.components.clone().map(|c| &c * s))
    }

    /// Componentwise complex conjugate.
    pub fn conj(&self) -> Self {
        Self::new(self.components.clone().map(|c| c.conj())).expect("conjugate of a nonzero ray")
    }

    pub fn norm_sq(&self) -> CycNumber {
        inner(self, self)
    }

    /// Writes the canonical key with the same conventions as `Display`.
    pub fn canonical_string(&self) -> String {
        format!("({},{},{})", self.key[0], self.key[1], self.key[2])
    }
}

fn canonical_key(components: &[CycNumber; 3]) -> Result<[CycNumber; 3]> {
    let lead = components.iter().find(|c| !c.is_zero()).ok_or(Error::ZeroRay)?;
    let inv = lead.inverse().expect("nonzero");
    let lowered: Vec<CycNumber> = components.iter().map(|c| (c * &inv).lower()).collect();
    let m = lowered.iter().fold(1u32, |acc, c| acc.lcm(&c.conductor()));
    Ok([lowered[0].coerce(m), lowered[1].coerce(m), lowered[2].coerce(m)])
}

impl PartialEq for Ray {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for Ray {}

impl Hash for Ray {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key.hash(state);
    }
}

impl PartialOrd for Ray {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ray {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key)
    }
}

impl fmt::Display for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = &self.components;
        write!(f, "({a},{b},{c})")
    }
}

impl fmt::Debug for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ray{self}")
    }
}

/// Hermitian inner product ⟨v|u⟩ = Σ conj(v_j)·u_j on the stored components.
pub fn inner(v: &Ray, u: &Ray) -> CycNumber {
    let mut acc = &v.components[0].conj() * &u.components[0];
    for j in 1..3 {
        acc = &acc + &(&v.components[j].conj() * &u.components[j]);
    }
    acc
}

pub fn is_orthogonal(u: &Ray, v: &Ray) -> bool {
    inner(v, u).is_zero()
}

/// Canonicalizes a component triple into a [`Ray`].
pub fn canonicalize(components: [CycNumber; 3]) -> Result<Ray> {
    Ray::new(components)
}

/// The unique ray orthogonal to both `u` and `v`: the conjugate of their
/// bilinear cross product.
pub fn complete_basis_third(u: &Ray, v: &Ray) -> Result<Ray> {
    if !is_orthogonal(u, v) {
        return Err(Error::NotOrthogonal(u.to_string(), v.to_string()));
    }
    let [u0, u1, u2] = &u.components;
    let [v0, v1, v2] = &v.components;
    let cross = [&(u1 * v2) - &(u2 * v1), &(u2 * v0) - &(u0 * v2), &(u0 * v1) - &(u1 * v0)];
    Ray::new(cross.map(|c| c.conj()))
}

/// Non-orthogonal pairs found in a would-be basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisViolation {
    pub pairs: Vec<(usize, usize, CycNumber)>,
}

impl fmt::Display for BasisViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.pairs.iter().map(|(i, j, ip)| format!("members {i},{j} have inner product {ip}")).collect();
        write!(f, "{}", parts.join("; "))
    }
}

pub fn validate_basis(rays: &[Ray; 3]) -> Result<(), BasisViolation> {
    let mut pairs = Vec::new();
    for i in 0..3 {
        for j in i + 1..3 {
            let ip = inner(&rays[i], &rays[j]);
            if !ip.is_zero() {
                pairs.push((i, j, ip));
            }
        }
    }
    if pairs.is_empty() {
        Ok(())
    } else {
        Err(BasisViolation { pairs })
    }
}

/// An ordered triple of pairwise orthogonal rays.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Basis {
    rays: [Ray; 3],
}

impl Basis {
    pub fn new(rays: [Ray; 3]) -> Result<Self> {
        validate_basis(&rays).map_err(|v| Error::InvalidBasis(v.to_string()))?;
        Ok(Basis { rays })
    }

    pub fn parse(members: [&str; 3]) -> Result<Self> {
        Self::new([Ray::parse(members[0])?, Ray::parse(members[1])?, Ray::parse(members[2])?])
    }

    pub fn rays(&self) -> &[Ray; 3] {
        &self.rays
    }

    pub fn contains(&self, r: &Ray) -> bool {
        self.rays.contains(r)
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{},{}}}", self.rays[0], self.rays[1], self.rays[2])
    }
}

fn parse_component(text: &str) -> Result<CycNumber> {
    let err = |msg: &str| Error::Parse(format!("{msg} in component {text:?}"));
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err(err("empty term"));
    }
    // (conductor, power of the root, coefficient) per term
    let mut terms: Vec<(u32, i64, BigRational)> = Vec::new();
    let mut pos = 0;
    while pos < chars.len() {
        let mut sign = BigRational::one();
        while pos < chars.len() && (chars[pos] == '+' || chars[pos] == '-') {
            if chars[pos] == '-' {
                sign = -sign;
            }
            pos += 1;
        }
        let read_int = |pos: &mut usize| -> Option<i64> {
            let start = *pos;
            while *pos < chars.len() && chars[*pos].is_ascii_digit() {
                *pos += 1;
            }
            (start < *pos).then(|| chars[start..*pos].iter().collect::<String>().parse().ok()).flatten()
        };
        let mut coeff = BigRational::one();
        let mut saw_number = false;
        if let Some(num) = read_int(&mut pos) {
            saw_number = true;
            let mut q = BigRational::from_integer(num.into());
            if pos < chars.len() && chars[pos] == '/' {
                pos += 1;
                let den = read_int(&mut pos).ok_or_else(|| err("missing denominator"))?;
                if den == 0 {
                    return Err(err("zero denominator"));
                }
                q /= BigRational::from_integer(den.into());
            }
            coeff = q;
            if pos < chars.len() && chars[pos] == '*' {
                pos += 1;
            }
        }
        let mut conductor = 1u32;
        let mut power = 0i64;
        if pos < chars.len() && !matches!(chars[pos], '+' | '-') {
            let (n, k, len) = match chars[pos] {
                'ω' | 'w' => (3, 1, 1),
                'i' => (4, 1, 1),
                '√' if chars.get(pos + 1) == Some(&'2') => (8, 0, 2),
                's' if chars.get(pos + 1) == Some(&'2') => (8, 0, 2),
                _ => return Err(err("unexpected character")),
            };
            pos += len;
            conductor = n;
            power = k;
            if n == 8 {
                // √2 = ζ8 + ζ8^7
                terms.push((8, 1, &sign * &coeff));
                terms.push((8, 7, &sign * &coeff));
                continue;
            }
            if pos < chars.len() && chars[pos] == '²' {
                power = 2;
                pos += 1;
            } else if pos < chars.len() && chars[pos] == '^' {
                pos += 1;
                power = read_int(&mut pos).ok_or_else(|| err("missing exponent"))?;
            }
        } else if !saw_number {
            return Err(err("dangling sign"));
        }
        terms.push((conductor, power, sign * coeff));
    }
    let m = terms.iter().fold(1u32, |acc, (n, _, _)| acc.lcm(n));
    let mut acc = CycNumber::zero(m);
    for (n, k, q) in terms {
        let t = CycNumber::root(n, k).scale(&q).coerce(m);
        acc = &acc + &t;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Ray {
        Ray::parse(s).unwrap()
    }

    #[test]
    fn inner_products() {
        assert!(inner(&r("(0,0,1)"), &r("(0,1,0)")).is_zero());
        assert!(inner(&r("(1,ω,ω²)"), &r("(1,1,1)")).is_zero());
        assert!(inner(&r("(0,1,-ω)"), &r("(1,ω,ω²)")).is_zero());
        let a = r("(1,2ω,-ω^2)");
        let b = r("(ω,1,3)");
        assert_eq!(inner(&a, &b), inner(&b, &a).conj());
    }

    #[test]
    fn orthogonality_examples() {
        assert!(is_orthogonal(&r("(0,0,1)"), &r("(1,0,0)")));
        assert!(!is_orthogonal(&r("(1,1,1)"), &r("(1,1,-1)")));
        let u = r("(1,-1,1)");
        let v = r("(ω²,ω,1)");
        assert!(!is_orthogonal(&u, &v));
        assert_eq!(inner(&u, &v), CycNumber::root(3, 1).scale(&BigRational::from_integer((-2).into())));
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(r("(ω,ω,0)"), r("(1,1,0)"));
        assert_eq!(r("(2,2,0)"), r("(1,1,0)"));
        assert_eq!(r("(-2,-2,0)"), r("(1,1,0)"));
        assert_eq!(r("(ω²,ω,1)"), r("(1,ω²,ω)"));
        let v = r("(ω²,ω,1)");
        assert_eq!(v.scaled(&CycNumber::root(3, 1)).unwrap(), v);
        assert!(matches!(Ray::parse("(0,0,0)"), Err(Error::ZeroRay)));
        assert!(Ray::parse("(1,1)").is_err());
        assert!(Ray::parse("(1,x,0)").is_err());
        // a √2 ray, mixed with ω, still canonicalizes consistently
        assert_eq!(r("(√2,√2,0)"), r("(1,1,0)"));
        assert_eq!(r("(1,√2,0)").conductor(), 8);
    }

    #[test]
    fn third_vector_completion() {
        assert_eq!(complete_basis_third(&r("(0,0,1)"), &r("(0,1,0)")).unwrap(), r("(1,0,0)"));
        assert_eq!(complete_basis_third(&r("(1,ω,ω²)"), &r("(1,1,1)")).unwrap(), r("(ω²,ω,1)"));
        let third = complete_basis_third(&r("(1,-ω,ω²)"), &r("(1,-1,1)")).unwrap();
        assert_eq!(third, r("(ω²,-ω,1)"));
        assert_ne!(third, r("(ω²,ω,1)"));
        assert!(matches!(complete_basis_third(&r("(1,1,1)"), &r("(1,0,0)")), Err(Error::NotOrthogonal(..))));
    }

    #[test]
    fn basis_validation() {
        assert!(validate_basis(&[r("(0,0,1)"), r("(0,1,0)"), r("(1,0,0)")]).is_ok());
        let v = validate_basis(&[r("(1,1,0)"), r("(1,-1,0)"), r("(1,0,0)")]).unwrap_err();
        assert_eq!(v.pairs.len(), 2);
        assert_eq!((v.pairs[0].0, v.pairs[0].1), (0, 2));
        assert!(v.pairs[0].2.is_one());
        let printed = validate_basis(&[r("(1,-ω,ω²)"), r("(1,-1,1)"), r("(ω²,ω,1)")]).unwrap_err();
        let ips: Vec<String> = printed.pairs.iter().map(|p| p.2.to_string()).collect();
        assert_eq!(printed.pairs.len(), 2);
        assert!(ips.contains(&"-2".to_string()));
        assert!(ips.contains(&"-2ω".to_string()));
        assert!(Basis::parse(["(1,1,0)", "(1,-1,0)", "(1,0,0)"]).is_err());
    }
}
