//! Exact scalars over Q, Q(√d) or Q(i), vectors over them, and the small linear
//! algebra needed for coordinatizations: inner products, projective
//! normalization, completion of contexts and tensor decomposability.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::hypergraph::{AtomId, Hypergraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("zero vector")]
    ZeroVector,
    #[error("division by zero")]
    DivisionByZero,
    #[error("vectors {0} and {1} are not orthogonal")]
    NotOrthogonal(usize, usize),
    #[error("{given} vectors given for dimension {dim}")]
    TooManyVectors { given: usize, dim: usize },
    #[error("operation needs dimension {expected}, got {found}")]
    WrongDimension { expected: usize, found: usize },
    #[error("input vectors {0} and {1} are collinear")]
    CollinearInput(&'static str, &'static str),
    #[error("cannot parse scalar {0:?}")]
    BadScalar(String),
    #[error("√{0} is not a quadratic extension (need squarefree d ≥ 2)")]
    BadRadicand(u32),
    #[error("representation: {0}")]
    BadRepresentation(String),
}

/// The scalar field of a computation. `Rational` embeds into the other two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    /// Q(√d), d squarefree and at least 2.
    Quadratic(u32),
    /// Q(i).
    Gaussian,
}

impl Field {
    pub fn quadratic(d: u32) -> Result<Self, ExactError> {
        let squarefree = d >= 2 && (2..=d).take_while(|k| k * k <= d).all(|k| d % (k * k) != 0);
        if squarefree {
            Ok(Field::Quadratic(d))
        } else {
            Err(ExactError::BadRadicand(d))
        }
    }

    /// Smallest field containing both, if any.
    pub fn join(self, other: Field) -> Result<Field, ExactError> {
        match (self, other) {
            (a, b) if a == b => Ok(a),
            (Field::Rational, b) => Ok(b),
            (a, Field::Rational) => Ok(a),
            (a, b) => Err(ExactError::FieldMismatch(a, b)),
        }
    }

    // ω² for the adjoined element ω
    fn omega_sq(self) -> BigRational {
        match self {
            Field::Rational => BigRational::zero(),
            Field::Quadratic(d) => BigRational::from_integer(BigInt::from(d)),
            Field::Gaussian => -BigRational::one(),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Quadratic(d) => write!(f, "Q(r{d})"),
            Field::Gaussian => write!(f, "Q(i)"),
        }
    }
}

impl FromStr for Field {
    type Err = ExactError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s {
            "Q" | "q" | "rational" => Ok(Field::Rational),
            "Q(i)" | "i" | "gaussian" => Ok(Field::Gaussian),
            _ => {
                let inner = s
                    .strip_prefix("Q(")
                    .and_then(|r| r.strip_suffix(')'))
                    .unwrap_or(s);
                let digits = inner
                    .strip_prefix('r')
                    .ok_or_else(|| ExactError::BadScalar(s.to_owned()))?;
                let d: u32 = digits.parse().map_err(|_| ExactError::BadScalar(s.to_owned()))?;
                Field::quadratic(d)
            }
        }
    }
}

/// `a + b·ω` with ω = √d or i. Kept canonical: `b = 0` implies `Field::Rational`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    a: BigRational,
    b: BigRational,
    field: Field,
}

impl Scalar {
    pub fn new(a: BigRational, b: BigRational, field: Field) -> Self {
        if b.is_zero() || field == Field::Rational {
            Scalar { a, b: BigRational::zero(), field: Field::Rational }
        } else {
            Scalar { a, b, field }
        }
    }

    pub fn rational(q: BigRational) -> Self {
        Self::new(q, BigRational::zero(), Field::Rational)
    }

    pub fn int(n: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn frac(p: i64, q: i64) -> Self {
        Self::rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn sqrt(d: u32) -> Self {
        Self::new(BigRational::zero(), BigRational::one(), Field::Quadratic(d))
    }

    pub fn i() -> Self {
        Self::new(BigRational::zero(), BigRational::one(), Field::Gaussian)
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn omega_part(&self) -> &BigRational {
        &self.b
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.b.is_zero().then_some(&self.a)
    }

    /// Complex conjugate (identity outside Q(i)).
    pub fn conj(&self) -> Scalar {
        match self.field {
            Field::Gaussian => Scalar::new(self.a.clone(), -self.b.clone(), Field::Gaussian),
            _ => self.clone(),
        }
    }

    pub fn try_add(&self, rhs: &Scalar) -> Result<Scalar, ExactError> {
        let f = self.field.join(rhs.field)?;
        Ok(Scalar::new(&self.a + &rhs.a, &self.b + &rhs.b, f))
    }

    pub fn try_sub(&self, rhs: &Scalar) -> Result<Scalar, ExactError> {
        let f = self.field.join(rhs.field)?;
        Ok(Scalar::new(&self.a - &rhs.a, &self.b - &rhs.b, f))
    }

    pub fn try_mul(&self, rhs: &Scalar) -> Result<Scalar, ExactError> {
        let f = self.field.join(rhs.field)?;
        let w = f.omega_sq();
        let a = &self.a * &rhs.a + &self.b * &rhs.b * w;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        Ok(Scalar::new(a, b, f))
    }

    pub fn inverse(&self) -> Result<Scalar, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        // (a - bω) / (a² - b²ω²)
        let norm = &self.a * &self.a - &self.b * &self.b * self.field.omega_sq();
        Ok(Scalar::new(&self.a / &norm, -&self.b / &norm, self.field))
    }

    pub fn try_div(&self, rhs: &Scalar) -> Result<Scalar, ExactError> {
        self.try_mul(&rhs.inverse()?)
    }

    /// `|z|²`. Rational for Q and Q(i); in Q(√d) this is just `z²`.
    pub fn abs_sq(&self) -> Scalar {
        self * &self.conj()
    }

    pub fn to_complex(&self) -> Complex64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        match self.field {
            Field::Rational => Complex64::new(a, 0.0),
            Field::Quadratic(d) => Complex64::new(a + b * f64::from(d).sqrt(), 0.0),
            Field::Gaussian => Complex64::new(a, b),
        }
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            /// Panics on a field mismatch; public vector operations check fields first.
            fn $m(self, rhs: &Scalar) -> Scalar {
                self.$checked(rhs).expect("scalar field mismatch")
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
    };
}
binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.a.clone(), -self.b.clone(), self.field)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

fn fmt_coeff(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let suffix = match self.field {
            Field::Rational => return f.write_str(&fmt_coeff(&self.a)),
            Field::Quadratic(d) => format!("r{d}"),
            Field::Gaussian => "i".to_owned(),
        };
        let mag = self.b.abs();
        let coeff = if mag.is_one() { String::new() } else { fmt_coeff(&mag) };
        let sign = if self.b.is_negative() { "-" } else { "+" };
        if self.a.is_zero() {
            let sign = if self.b.is_negative() { "-" } else { "" };
            write!(f, "{sign}{coeff}{suffix}")
        } else {
            write!(f, "{}{sign}{coeff}{suffix}", fmt_coeff(&self.a))
        }
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    if s.is_empty() || s.starts_with("+-") || s.starts_with("--") {
        return None;
    }
    let s = s.strip_prefix('+').unwrap_or(s);
    let q = BigRational::from_str(s).ok()?;
    Some(q)
}

impl FromStr for Scalar {
    type Err = ExactError;

    /// Accepts `p/q`, `a+br<d>` and `a+bi` with optional parts: `r2`, `-i`,
    /// `1/2r2`, `1+1/2r2`, `3-2i`. Whitespace is ignored.
    fn from_str(raw: &str) -> Result<Self, Self::Err> {
        let bad = || ExactError::BadScalar(raw.to_owned());
        let s: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(bad());
        }
        let (body, field) = if let Some(body) = s.strip_suffix('i') {
            (body.to_owned(), Field::Gaussian)
        } else if let Some(pos) = s.rfind('r') {
            let d: u32 = s[pos + 1..].parse().map_err(|_| bad())?;
            (s[..pos].to_owned(), Field::quadratic(d)?)
        } else {
            let q = parse_rational(&s).ok_or_else(bad)?;
            return Ok(Scalar::rational(q));
        };
        // split body into rational part and coefficient at the last interior sign
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .last();
        let (a_str, b_str) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("", body.as_str()),
        };
        let a = if a_str.is_empty() {
            BigRational::zero()
        } else {
            parse_rational(a_str).ok_or_else(bad)?
        };
        let b = match b_str {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            other => parse_rational(other).ok_or_else(bad)?,
        };
        Ok(Scalar::new(a, b, field))
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(n) => Ok(Scalar::int(n)),
            Raw::Text(t) => t.parse().map_err(de::Error::custom),
        }
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

/// A column vector of exact scalars.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector(pub Vec<Scalar>);

impl Vector {
    pub fn new(components: Vec<Scalar>) -> Self {
        Vector(components)
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        Vector(xs.iter().map(|&x| Scalar::int(x)).collect())
    }

    /// Parses each component with the scalar text encoding.
    pub fn parse(components: &[&str]) -> Result<Self, ExactError> {
        components.iter().map(|c| c.parse()).collect::<Result<_, _>>().map(Vector)
    }

    pub fn unit(dim: usize, k: usize) -> Self {
        Vector((0..dim).map(|i| if i == k { Scalar::one() } else { Scalar::zero() }).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[Scalar] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Scalar::is_zero)
    }

    /// Field spanned by the components.
    pub fn field(&self) -> Result<Field, ExactError> {
        self.0.iter().try_fold(Field::Rational, |f, c| f.join(c.field()))
    }

    pub fn conj(&self) -> Vector {
        Vector(self.0.iter().map(Scalar::conj).collect())
    }

    pub fn scale(&self, k: &Scalar) -> Result<Vector, ExactError> {
        self.0.iter().map(|c| k.try_mul(c)).collect::<Result<_, _>>().map(Vector)
    }

    pub fn try_add(&self, other: &Vector) -> Result<Vector, ExactError> {
        check_dim(self, other)?;
        self.0.iter().zip(&other.0).map(|(x, y)| x.try_add(y)).collect::<Result<_, _>>().map(Vector)
    }

    pub fn try_sub(&self, other: &Vector) -> Result<Vector, ExactError> {
        check_dim(self, other)?;
        self.0.iter().zip(&other.0).map(|(x, y)| x.try_sub(y)).collect::<Result<_, _>>().map(Vector)
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.0.iter().map(Scalar::to_complex).collect()
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn check_dim(u: &Vector, v: &Vector) -> Result<(), ExactError> {
    if u.dim() != v.dim() {
        Err(ExactError::DimensionMismatch(u.dim(), v.dim()))
    } else {
        Ok(())
    }
}

/// Hermitian inner product `Σ conj(u_k) v_k`, conjugate-linear in `u`.
pub fn inner(u: &Vector, v: &Vector) -> Result<Scalar, ExactError> {
    check_dim(u, v)?;
    u.field()?.join(v.field()?)?;
    let mut acc = Scalar::zero();
    for (x, y) in u.0.iter().zip(&v.0) {
        acc = &acc + &(&x.conj() * y);
    }
    Ok(acc)
}

pub fn norm_sq(v: &Vector) -> Result<Scalar, ExactError> {
    inner(v, v)
}

/// Scales `v` so its first nonzero component is 1.
pub fn normalize_projective(v: &Vector) -> Result<Vector, ExactError> {
    v.field()?;
    let lead = v.0.iter().find(|c| !c.is_zero()).ok_or(ExactError::ZeroVector)?;
    v.scale(&lead.inverse()?)
}

pub fn collinear(u: &Vector, v: &Vector) -> Result<bool, ExactError> {
    check_dim(u, v)?;
    Ok(normalize_projective(u)? == normalize_projective(v)?)
}

/// Flattened Kronecker product, row-major.
pub fn tensor(a: &Vector, b: &Vector) -> Result<Vector, ExactError> {
    a.field()?.join(b.field()?)?;
    Ok(Vector(a.0.iter().flat_map(|x| b.0.iter().map(move |y| x * y)).collect()))
}

fn common_field(vs: &[&Vector]) -> Result<Field, ExactError> {
    vs.iter().try_fold(Field::Rational, |f, v| f.join(v.field()?))
}

fn determinant(mut m: Vec<Vec<Scalar>>) -> Scalar {
    let n = m.len();
    let mut det = Scalar::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Scalar::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        det = &det * &m[col][col];
        let inv = m[col][col].inverse().expect("nonzero pivot");
        for r in (col + 1)..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] * &inv;
            for c in col..n {
                let t = &factor * &m[col][c];
                m[r][c] = &m[r][c] - &t;
            }
        }
    }
    det
}

/// Generalized cross product: the cofactor expansion of the determinant whose
/// first `n-1` rows are `rows` and whose last row holds the unit vectors.
fn cross_product(rows: &[Vector], n: usize) -> Vector {
    Vector(
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<Scalar>> = rows
                    .iter()
                    .map(|r| r.0.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, x)| x.clone()).collect())
                    .collect();
                let d = determinant(minor);
                if (n - 1 + j) % 2 == 0 { d } else { -d }
            })
            .collect(),
    )
}

/// Basis of the nullspace of `rows` (as a matrix acting by `Σ r_k x_k`), via RREF.
fn nullspace(rows: &[Vector], n: usize) -> Vec<Vector> {
    let mut m: Vec<Vec<Scalar>> = rows.iter().map(|r| r.0.clone()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        let inv = m[r][col].inverse().expect("nonzero pivot");
        for c in 0..n {
            m[r][c] = &m[r][c] * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][col].is_zero() {
                let factor = m[i][col].clone();
                for c in 0..n {
                    let t = &factor * &m[r][c];
                    m[i][c] = &m[i][c] - &t;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut x = vec![Scalar::zero(); n];
            x[free] = Scalar::one();
            for (row, &pc) in pivots.iter().enumerate() {
                x[pc] = -&m[row][free];
            }
            Vector(x)
        })
        .collect()
}

/// Orthogonal basis (unnormalized) of the span of `xs`, in order.
pub fn gram_schmidt(xs: &[Vector]) -> Result<Vec<Vector>, ExactError> {
    let mut out: Vec<Vector> = Vec::new();
    for x in xs {
        let mut w = x.clone();
        for b in &out {
            let coeff = inner(b, x)?.try_div(&norm_sq(b)?)?;
            w = w.try_sub(&b.scale(&coeff)?)?;
        }
        if !w.is_zero() {
            out.push(w);
        }
    }
    Ok(out)
}

/// Orthogonal complement of a set of mutually orthogonal vectors in dimension `dim`.
///
/// With `n-1` inputs the single completing direction is the generalized cross
/// product. With fewer, the complement is found by exact elimination and then
/// orthogonalized; for inputs spanned by unit vectors this yields the remaining
/// unit vectors. Outputs are projectively normalized.
pub fn complete_context(vs: &[Vector], dim: usize) -> Result<Vec<Vector>, ExactError> {
    if vs.len() > dim {
        return Err(ExactError::TooManyVectors { given: vs.len(), dim });
    }
    for v in vs {
        if v.dim() != dim {
            return Err(ExactError::DimensionMismatch(v.dim(), dim));
        }
        if v.is_zero() {
            return Err(ExactError::ZeroVector);
        }
    }
    common_field(&vs.iter().collect::<Vec<_>>())?;
    for i in 0..vs.len() {
        for j in (i + 1)..vs.len() {
            if !inner(&vs[i], &vs[j])?.is_zero() {
                return Err(ExactError::NotOrthogonal(i, j));
            }
        }
    }
    if vs.len() == dim {
        return Ok(Vec::new());
    }
    // ⟨v, x⟩ = Σ conj(v_k) x_k, so the constraint rows are the conjugates
    let rows: Vec<Vector> = vs.iter().map(Vector::conj).collect();
    let basis = if vs.len() + 1 == dim {
        vec![cross_product(&rows, dim)]
    } else {
        gram_schmidt(&nullspace(&rows, dim))?
    };
    basis.iter().map(normalize_projective).collect()
}

/// `v₁v₄ − v₂v₃` for a 4-vector.
pub fn decomposability_determinant(v: &Vector) -> Result<Scalar, ExactError> {
    if v.dim() != 4 {
        return Err(ExactError::WrongDimension { expected: 4, found: v.dim() });
    }
    v.field()?;
    Ok(&(&v.0[0] * &v.0[3]) - &(&v.0[1] * &v.0[2]))
}

/// Whether a 4-vector is a tensor product of two 2-vectors.
pub fn is_decomposable(v: &Vector) -> Result<bool, ExactError> {
    Ok(decomposability_determinant(v)?.is_zero())
}

fn two(v: &Vector) -> Result<(Scalar, Scalar), ExactError> {
    if v.dim() != 2 {
        return Err(ExactError::WrongDimension { expected: 2, found: v.dim() });
    }
    v.field()?;
    Ok((v.0[0].clone(), v.0[1].clone()))
}

/// `(d₂u₁ − d₁u₂)(u₁v₂ − u₂v₁)`: nonzero iff [`psi_orthogonal_to`] is entangled.
pub fn entanglement_constraint(u: &Vector, v: &Vector, d: &Vector) -> Result<Scalar, ExactError> {
    common_field(&[u, v, d])?;
    let (u1, u2) = two(u)?;
    let (v1, v2) = two(v)?;
    let (d1, d2) = two(d)?;
    Ok(&(&(&d2 * &u1) - &(&d1 * &u2)) * &(&(&u1 * &v2) - &(&u2 * &v1)))
}

/// The 4-vector orthogonal to `u⊗u`, `v⊗d` and `d⊗v`. Its middle two components
/// coincide for every input.
pub fn psi_orthogonal_to(u: &Vector, v: &Vector, d: &Vector) -> Result<Vector, ExactError> {
    common_field(&[u, v, d])?;
    let (u1, u2) = two(u)?;
    let (v1, v2) = two(v)?;
    let (d1, d2) = two(d)?;
    let det = |a1: &Scalar, a2: &Scalar, b1: &Scalar, b2: &Scalar| &(a1 * b2) - &(a2 * b1);
    if det(&u1, &u2, &v1, &v2).is_zero() {
        return Err(ExactError::CollinearInput("u", "v"));
    }
    if det(&u1, &u2, &d1, &d2).is_zero() {
        return Err(ExactError::CollinearInput("u", "d"));
    }
    if det(&v1, &v2, &d1, &d2).is_zero() {
        return Err(ExactError::CollinearInput("v", "d"));
    }
    let two = Scalar::int(2);
    let p = |xs: &[&Scalar]| xs.iter().skip(1).fold(xs[0].clone(), |acc, x| &acc * x);
    let c1 = &(&p(&[&d2, &u2, &u2, &v1]) - &p(&[&two, &d2, &u1, &u2, &v2])) + &p(&[&d1, &u2, &u2, &v2]);
    let c2 = &p(&[&d2, &u1, &u1, &v2]) - &p(&[&d1, &u2, &u2, &v1]);
    let c4 = &(&p(&[&two, &d1, &u1, &u2, &v1]) - &p(&[&d2, &u1, &u1, &v1])) - &p(&[&d1, &u1, &u1, &v2]);
    // the formula is bilinear-orthogonal; conjugate for the Hermitian product
    Ok(Vector(vec![c1, c2.clone(), c2, c4]).conj())
}

/// `|⟨a|b⟩|² / (‖a‖²‖b‖²)`, exact. Rational whenever the field is Q or Q(i).
pub fn probability_exact(a: &Vector, b: &Vector) -> Result<Scalar, ExactError> {
    if a.is_zero() || b.is_zero() {
        return Err(ExactError::ZeroVector);
    }
    let ab = inner(a, b)?;
    ab.abs_sq().try_div(&(&norm_sq(a)? * &norm_sq(b)?))
}

/// Hermitian inner product of floating-point vectors.
pub fn inner_float(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(x, y)| x.conj() * y).sum()
}

/// `|⟨a|b⟩|² / (‖a‖²‖b‖²)` in floating point.
pub fn probability_float(a: &[Complex64], b: &[Complex64]) -> Result<f64, ExactError> {
    if a.len() != b.len() {
        return Err(ExactError::DimensionMismatch(a.len(), b.len()));
    }
    let (na, nb) = (inner_float(a, a).re, inner_float(b, b).re);
    if na == 0.0 || nb == 0.0 {
        return Err(ExactError::ZeroVector);
    }
    Ok(inner_float(a, b).norm_sqr() / (na * nb))
}

/// Partial map atom → exact vector over one field and dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    field: Field,
    dim: usize,
    vectors: BTreeMap<AtomId, Vector>,
}

impl Representation {
    pub fn new(field: Field, dim: usize) -> Self {
        Representation { field, dim, vectors: BTreeMap::new() }
    }

    /// Builds from `(label, vector)` pairs, inferring the field.
    pub fn from_labeled<L: AsRef<str>>(
        h: &Hypergraph,
        pairs: impl IntoIterator<Item = (L, Vector)>,
    ) -> Result<Self, ExactError> {
        let mut rep = Representation::new(Field::Rational, h.rank());
        for (label, v) in pairs {
            let label = label.as_ref();
            let atom = h
                .atom(label)
                .ok_or_else(|| ExactError::BadRepresentation(format!("unknown atom {label:?}")))?;
            rep.field = rep.field.join(v.field()?)?;
            rep.insert(atom, v)?;
        }
        Ok(rep)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn insert(&mut self, atom: AtomId, v: Vector) -> Result<(), ExactError> {
        if v.dim() != self.dim {
            return Err(ExactError::DimensionMismatch(v.dim(), self.dim));
        }
        if v.is_zero() {
            return Err(ExactError::ZeroVector);
        }
        self.field = self.field.join(v.field()?)?;
        self.vectors.insert(atom, v);
        Ok(())
    }

    pub fn get(&self, atom: AtomId) -> Option<&Vector> {
        self.vectors.get(&atom)
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (AtomId, &Vector)> {
        self.vectors.iter().map(|(&a, v)| (a, v))
    }

    pub fn to_float(&self) -> FloatRepresentation {
        FloatRepresentation {
            dim: self.dim,
            vectors: self.vectors.iter().map(|(&a, v)| (a, v.to_complex())).collect(),
        }
    }

    pub fn to_json(&self, h: &Hypergraph) -> String {
        let vectors: BTreeMap<&str, &Vector> =
            self.vectors.iter().map(|(&a, v)| (h.label(a), v)).collect();
        serde_json::to_string(&RepJson {
            field: Some(self.field.to_string()),
            dim: Some(self.dim),
            vectors: vectors.into_iter().map(|(k, v)| (k.to_owned(), v.clone())).collect(),
        })
        .expect("representation JSON")
    }

    pub fn from_json(h: &Hypergraph, text: &str) -> Result<Self, ExactError> {
        let raw: RepJson =
            serde_json::from_str(text).map_err(|e| ExactError::BadRepresentation(e.to_string()))?;
        let mut rep = Representation::from_labeled(h, raw.vectors)?;
        if let Some(f) = raw.field {
            let declared: Field = f.parse()?;
            rep.field = declared.join(rep.field)?;
            if rep.field != declared {
                return Err(ExactError::FieldMismatch(declared, rep.field));
            }
        }
        if let Some(d) = raw.dim {
            if d != rep.dim {
                return Err(ExactError::DimensionMismatch(d, rep.dim));
            }
        }
        Ok(rep)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RepJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    field: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dim: Option<usize>,
    vectors: BTreeMap<String, Vector>,
}

/// Partial map atom → double-precision complex vector, for coordinatizations
/// whose entries leave every single quadratic field (e.g. `cos θ`).
#[derive(Debug, Clone, PartialEq)]
pub struct FloatRepresentation {
    pub dim: usize,
    pub vectors: BTreeMap<AtomId, Vec<Complex64>>,
}

impl FloatRepresentation {
    pub fn from_labeled<L: AsRef<str>>(
        h: &Hypergraph,
        pairs: impl IntoIterator<Item = (L, Vec<f64>)>,
    ) -> Result<Self, ExactError> {
        let mut vectors = BTreeMap::new();
        for (label, v) in pairs {
            let label = label.as_ref();
            let atom = h
                .atom(label)
                .ok_or_else(|| ExactError::BadRepresentation(format!("unknown atom {label:?}")))?;
            if v.len() != h.rank() {
                return Err(ExactError::DimensionMismatch(v.len(), h.rank()));
            }
            vectors.insert(atom, v.into_iter().map(|x| Complex64::new(x, 0.0)).collect());
        }
        Ok(FloatRepresentation { dim: h.rank(), vectors })
    }

    pub fn from_json(h: &Hypergraph, text: &str) -> Result<Self, ExactError> {
        #[derive(Deserialize)]
        struct Raw {
            vectors: BTreeMap<String, Vec<f64>>,
        }
        let raw: Raw =
            serde_json::from_str(text).map_err(|e| ExactError::BadRepresentation(e.to_string()))?;
        Self::from_labeled(h, raw.vectors)
    }
}

/// Either kind of coordinatization.
#[derive(Debug, Clone, PartialEq)]
pub enum Coordinatization {
    Exact(Representation),
    Float(FloatRepresentation),
}

impl Coordinatization {
    pub fn to_float(&self) -> FloatRepresentation {
        match self {
            Coordinatization::Exact(r) => r.to_float(),
            Coordinatization::Float(f) => f.clone(),
        }
    }

    pub fn covers(&self, atom: AtomId) -> bool {
        match self {
            Coordinatization::Exact(r) => r.get(atom).is_some(),
            Coordinatization::Float(f) => f.vectors.contains_key(&atom),
        }
    }

    /// Reads JSON; entries that all parse as exact scalars give an exact
    /// representation, plain JSON floats give a float one.
    pub fn from_json(h: &Hypergraph, text: &str) -> Result<Self, ExactError> {
        match Representation::from_json(h, text) {
            Ok(r) => Ok(Coordinatization::Exact(r)),
            Err(exact_err) => FloatRepresentation::from_json(h, text)
                .map(Coordinatization::Float)
                .map_err(|_| exact_err),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> Scalar {
        x.parse().unwrap()
    }

    fn v(xs: &[&str]) -> Vector {
        Vector::parse(xs).unwrap()
    }

    #[test]
    fn scalar_text_round_trip() {
        for text in ["0", "3", "-7/2", "r2", "-r2", "1+1/2r2", "1/3-2r5", "i", "-i", "1+2i", "-1/2-i", "3/4i"] {
            assert_eq!(s(text).to_string(), text, "{text}");
        }
        assert_eq!(s(" 1 + 1/2 r2 "), s("1+1/2r2"));
        assert_eq!(s("+3"), Scalar::int(3));
        assert_eq!(s("0r2"), Scalar::zero());
        for bad in ["", "x", "1/0", "r4", "r", "1+", "--1", "1++2i", "2r1"] {
            assert!(bad.parse::<Scalar>().is_err(), "{bad:?} parsed");
        }
    }

    #[test]
    fn field_arithmetic() {
        assert_eq!(&s("r2") * &s("r2"), Scalar::int(2));
        assert_eq!(&s("i") * &s("i"), Scalar::int(-1));
        assert_eq!(s("1+r2").inverse().unwrap(), s("-1+r2"));
        assert_eq!(s("1+i").inverse().unwrap(), s("1/2-1/2i"));
        assert_eq!(s("r2").try_mul(&s("i")), Err(ExactError::FieldMismatch(Field::Quadratic(2), Field::Gaussian)));
        assert!(s("r2").try_add(&s("r3")).is_err());
        assert_eq!(Scalar::zero().inverse(), Err(ExactError::DivisionByZero));
        assert_eq!(s("2+3i").abs_sq(), Scalar::int(13));
        assert_eq!(s("2+i").conj(), s("2-i"));
        assert_eq!(s("2+r2").conj(), s("2+r2"));
    }

    #[test]
    fn inner_products() {
        assert_eq!(inner(&Vector::from_ints(&[1, -1, -1, 0]), &Vector::from_ints(&[0, 0, 0, 1])).unwrap(), Scalar::zero());
        let u = Vector::from_ints(&[0, 1, 1, -1]);
        assert_eq!(norm_sq(&u).unwrap(), Scalar::int(3));
        let z = v(&["i", "0"]);
        assert_eq!(inner(&z, &z).unwrap(), Scalar::one());
        assert_eq!(
            inner(&Vector::from_ints(&[1, 0]), &Vector::from_ints(&[1, 0, 0])),
            Err(ExactError::DimensionMismatch(2, 3))
        );
        assert!(matches!(inner(&v(&["r2", "0"]), &v(&["i", "0"])), Err(ExactError::FieldMismatch(..))));
    }

    #[test]
    fn projective_normalization() {
        assert_eq!(normalize_projective(&Vector::from_ints(&[0, 2, -1, 1])).unwrap(), v(&["0", "1", "-1/2", "1/2"]));
        assert_eq!(normalize_projective(&v(&["r2", "2"])).unwrap(), v(&["1", "r2"]));
        assert!(collinear(&Vector::from_ints(&[1, 1, 1, 1]), &Vector::from_ints(&[3, 3, 3, 3])).unwrap());
        assert_eq!(normalize_projective(&Vector::from_ints(&[0, 0])), Err(ExactError::ZeroVector));
    }

    #[test]
    fn completion_cross_product() {
        let out = complete_context(&[Vector::from_ints(&[0, 0, 1]), Vector::from_ints(&[0, 1, 0])], 3).unwrap();
        assert_eq!(out, vec![Vector::from_ints(&[1, 0, 0])]);
        let e = |k| Vector::unit(4, k);
        assert_eq!(complete_context(&[e(0), e(1), e(2)], 4).unwrap(), vec![e(3)]);
        assert_eq!(complete_context(&[e(0), e(1)], 4).unwrap(), vec![e(2), e(3)]);
        assert_eq!(complete_context(&[e(0), e(1), e(2), e(3)], 4).unwrap(), vec![]);
        assert_eq!(
            complete_context(&[Vector::from_ints(&[1, 1, 0]), Vector::from_ints(&[1, 0, 0])], 3),
            Err(ExactError::NotOrthogonal(0, 1))
        );
        assert_eq!(complete_context(&[Vector::from_ints(&[0, 0, 0])], 3), Err(ExactError::ZeroVector));
    }

    #[test]
    fn completion_gaussian() {
        let a = v(&["1", "i", "i", "-i"]);
        let b = v(&["1", "i", "-i", "i"]);
        let out = complete_context(&[a.clone(), b.clone()], 4).unwrap();
        assert_eq!(out.len(), 2);
        for w in &out {
            assert!(inner(&a, w).unwrap().is_zero());
            assert!(inner(&b, w).unwrap().is_zero());
        }
        assert!(inner(&out[0], &out[1]).unwrap().is_zero());
        let c = out[0].clone();
        let last = complete_context(&[a.clone(), b.clone(), c.clone()], 4).unwrap();
        assert_eq!(last.len(), 1);
        assert!(collinear(&last[0], &out[1]).unwrap());
    }

    #[test]
    fn decomposability() {
        assert!(!is_decomposable(&v(&["3/5", "0", "0", "-4/5"])).unwrap());
        assert!(is_decomposable(&Vector::from_ints(&[1, 0, 0, 0])).unwrap());
        let t = tensor(&Vector::from_ints(&[2, -3]), &v(&["1/2", "7"])).unwrap();
        assert!(is_decomposable(&t).unwrap());
        assert!(!is_decomposable(&Vector::from_ints(&[-1, 3, 3, 5])).unwrap());
        assert!(!is_decomposable(&v(&["1", "i", "i", "-i"])).unwrap());
        assert_eq!(
            is_decomposable(&Vector::from_ints(&[1, 0, 0])),
            Err(ExactError::WrongDimension { expected: 4, found: 3 })
        );
    }

    #[test]
    fn tensor_basics() {
        assert_eq!(tensor(&Vector::from_ints(&[1, 0]), &Vector::from_ints(&[1, 0])).unwrap(), Vector::from_ints(&[1, 0, 0, 0]));
        assert_eq!(tensor(&Vector::from_ints(&[1, 0]), &Vector::from_ints(&[0, 1])).unwrap(), Vector::from_ints(&[0, 1, 0, 0]));
    }

    #[test]
    fn entanglement_and_psi() {
        let (u, w, d) = (Vector::from_ints(&[1, 0]), Vector::from_ints(&[0, 1]), Vector::from_ints(&[1, 1]));
        assert_eq!(entanglement_constraint(&u, &w, &d).unwrap(), Scalar::one());
        assert!(entanglement_constraint(&u, &w, &Vector::from_ints(&[3, 0])).unwrap().is_zero());
        assert!(entanglement_constraint(&u, &Vector::from_ints(&[-2, 0]), &d).unwrap().is_zero());
        let psi = psi_orthogonal_to(&u, &w, &d).unwrap();
        assert_eq!(psi, Vector::from_ints(&[0, 1, 1, -1]));
        assert_eq!(psi.0[1], psi.0[2]);
        assert_eq!(
            psi_orthogonal_to(&u, &Vector::from_ints(&[2, 0]), &d),
            Err(ExactError::CollinearInput("u", "v"))
        );
    }

    #[test]
    fn exact_probabilities() {
        let psi = Vector::from_ints(&[0, 1, 1, -1]);
        assert_eq!(probability_exact(&psi, &Vector::from_ints(&[0, 1, 2, -1])).unwrap(), Scalar::frac(8, 9));
        assert_eq!(probability_exact(&psi, &Vector::from_ints(&[0, -1, 1, 1])).unwrap(), Scalar::frac(1, 9));
        assert_eq!(
            probability_exact(&Vector::from_ints(&[1, 0, 0, 0]), &Vector::from_ints(&[-3, -1, 0, 0])).unwrap(),
            Scalar::frac(9, 10)
        );
        assert_eq!(probability_exact(&v(&["1", "i"]), &v(&["1", "0"])).unwrap(), Scalar::frac(1, 2));
    }

    #[test]
    fn field_names() {
        for f in [Field::Rational, Field::Quadratic(2), Field::Gaussian] {
            assert_eq!(f.to_string().parse::<Field>().unwrap(), f);
        }
        assert_eq!("Q(r8)".parse::<Field>(), Err(ExactError::BadRadicand(8)));
    }
}
