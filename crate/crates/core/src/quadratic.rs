//! Exact arithmetic in a real quadratic field `Q(√d)` and quaternions over it.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Rational64;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, Signed, Zero};

fn radd(a: &Rational64, b: &Rational64) -> Rational64 {
    a.checked_add(b).expect("rational overflow in Q(√d)")
}

fn rsub(a: &Rational64, b: &Rational64) -> Rational64 {
    a.checked_sub(b).expect("rational overflow in Q(√d)")
}

fn rmul(a: &Rational64, b: &Rational64) -> Rational64 {
    a.checked_mul(b).expect("rational overflow in Q(√d)")
}

fn is_squarefree(d: i64) -> bool {
    d >= 1 && (2..).take_while(|p| p * p <= d).all(|p| d % (p * p) != 0)
}

/// `a + b√d` with rational `a`, `b` and squarefree `d >= 1`.
///
/// For `d = 1` the value is kept with `b = 0` so equality stays structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadExt {
    a: Rational64,
    b: Rational64,
    d: i64,
}

impl QuadExt {
    pub fn new(a: Rational64, b: Rational64, d: i64) -> Self {
        assert!(is_squarefree(d), "√{d}: d must be a squarefree positive integer");
        if d == 1 {
            Self { a: radd(&a, &b), b: Rational64::zero(), d }
        } else {
            Self { a, b, d }
        }
    }

    pub fn rational(a: Rational64, d: i64) -> Self {
        Self::new(a, Rational64::zero(), d)
    }

    pub fn int(a: i64, d: i64) -> Self {
        Self::rational(Rational64::from_integer(a), d)
    }

    /// `(an/ad) + (bn/bd)√d`.
    pub fn frac(an: i64, ad: i64, bn: i64, bd: i64, d: i64) -> Self {
        Self::new(Rational64::new(an, ad), Rational64::new(bn, bd), d)
    }

    pub fn zero(d: i64) -> Self {
        Self::int(0, d)
    }

    pub fn one(d: i64) -> Self {
        Self::int(1, d)
    }

    pub fn rational_part(&self) -> Rational64 {
        self.a
    }

    pub fn radical_part(&self) -> Rational64 {
        self.b
    }

    pub fn field(&self) -> i64 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// `a^2 - d b^2`.
    pub fn norm(&self) -> Rational64 {
        rsub(&rmul(&self.a, &self.a), &rmul(&rmul(&self.b, &self.b), &Rational64::from_integer(self.d)))
    }

    pub fn inverse(&self) -> Option<QuadExt> {
        if self.is_zero() {
            return None;
        }
        // the norm of a nonzero element is nonzero because √d is irrational
        let n = self.norm();
        Some(Self::new(self.a / n, -self.b / n, self.d))
    }

    /// Exact sign of the real number `a + b√d`.
    pub fn signum(&self) -> i32 {
        let sa = self.a.signum();
        let sb = self.b.signum();
        if sb.is_zero() || sa == sb {
            return if !sa.is_zero() { sign_of(&sa) } else { sign_of(&sb) };
        }
        if sa.is_zero() {
            return sign_of(&sb);
        }
        // opposite signs: compare a^2 with d b^2
        let lhs = rmul(&self.a, &self.a);
        let rhs = rmul(&rmul(&self.b, &self.b), &Rational64::from_integer(self.d));
        match lhs.cmp(&rhs) {
            Ordering::Greater => sign_of(&sa),
            Ordering::Less => sign_of(&sb),
            Ordering::Equal => 0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        let f = |r: &Rational64| *r.numer() as f64 / *r.denom() as f64;
        f(&self.a) + f(&self.b) * (self.d as f64).sqrt()
    }

    fn check_field(&self, other: &Self) {
        assert_eq!(self.d, other.d, "mixed quadratic fields √{} and √{}", self.d, other.d);
    }
}

fn sign_of(r: &Rational64) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

impl PartialOrd for QuadExt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadExt {
    /// Numeric order of the real values.
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum().cmp(&0)
    }
}

impl Add for &QuadExt {
    type Output = QuadExt;
    fn add(self, rhs: &QuadExt) -> QuadExt {
        self.check_field(rhs);
        QuadExt { a: radd(&self.a, &rhs.a), b: radd(&self.b, &rhs.b), d: self.d }
    }
}

impl Sub for &QuadExt {
    type Output = QuadExt;
    fn sub(self, rhs: &QuadExt) -> QuadExt {
        self.check_field(rhs);
        QuadExt { a: rsub(&self.a, &rhs.a), b: rsub(&self.b, &rhs.b), d: self.d }
    }
}

impl Mul for &QuadExt {
    type Output = QuadExt;
    fn mul(self, rhs: &QuadExt) -> QuadExt {
        self.check_field(rhs);
        let d = Rational64::from_integer(self.d);
        let a = radd(&rmul(&self.a, &rhs.a), &rmul(&rmul(&self.b, &rhs.b), &d));
        let b = radd(&rmul(&self.a, &rhs.b), &rmul(&self.b, &rhs.a));
        QuadExt { a, b, d: self.d }
    }
}

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt { a: -self.a, b: -self.b, d: self.d }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for QuadExt {
            type Output = QuadExt;
            fn $m(self, rhs: QuadExt) -> QuadExt {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        -&self
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b_one = self.b.abs().is_one();
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) if b_one => write!(f, "{}√{}", if self.b.is_negative() { "-" } else { "" }, self.d),
            (true, false) => write!(f, "{}√{}", self.b, self.d),
            (false, false) => {
                let sign = if self.b.is_negative() { "-" } else { "+" };
                if b_one {
                    write!(f, "{} {} √{}", self.a, sign, self.d)
                } else {
                    write!(f, "{} {} {}√{}", self.a, sign, self.b.abs(), self.d)
                }
            }
        }
    }
}

impl fmt::Debug for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Quaternion `w + x i + y j + z k` with coordinates in one field `Q(√d)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QQuat {
    pub w: QuadExt,
    pub x: QuadExt,
    pub y: QuadExt,
    pub z: QuadExt,
}

impl QQuat {
    pub fn new(w: QuadExt, x: QuadExt, y: QuadExt, z: QuadExt) -> Self {
        w.check_field(&x);
        w.check_field(&y);
        w.check_field(&z);
        Self { w, x, y, z }
    }

    pub fn one(d: i64) -> Self {
        Self::new(QuadExt::one(d), QuadExt::zero(d), QuadExt::zero(d), QuadExt::zero(d))
    }

    /// Integer coordinates scaled by `1/den`, in the field `Q(√d)`.
    pub fn scaled(coords: [i64; 4], den: i64, d: i64) -> Self {
        let c = |v: i64| QuadExt::rational(Rational64::new(v, den), d);
        Self::new(c(coords[0]), c(coords[1]), c(coords[2]), c(coords[3]))
    }

    pub fn field(&self) -> i64 {
        self.w.field()
    }

    pub fn coords(&self) -> [&QuadExt; 4] {
        [&self.w, &self.x, &self.y, &self.z]
    }

    pub fn norm_squared(&self) -> QuadExt {
        &(&(&self.w * &self.w) + &(&self.x * &self.x)) + &(&(&self.y * &self.y) + &(&self.z * &self.z))
    }

    pub fn is_unit(&self) -> bool {
        self.norm_squared() == QuadExt::one(self.field())
    }

    pub fn conj(&self) -> Self {
        Self { w: self.w.clone(), x: -&self.x, y: -&self.y, z: -&self.z }
    }

    /// Inverse of a unit quaternion.
    pub fn unit_inverse(&self) -> Self {
        debug_assert!(self.is_unit());
        self.conj()
    }

    pub fn neg(&self) -> Self {
        Self { w: -&self.w, x: -&self.x, y: -&self.y, z: -&self.z }
    }
}

impl Mul for &QQuat {
    type Output = QQuat;
    fn mul(self, r: &QQuat) -> QQuat {
        let (a, b) = (self, r);
        let w = &(&(&a.w * &b.w) - &(&a.x * &b.x)) - &(&(&a.y * &b.y) + &(&a.z * &b.z));
        let x = &(&(&a.w * &b.x) + &(&a.x * &b.w)) + &(&(&a.y * &b.z) - &(&a.z * &b.y));
        let y = &(&(&a.w * &b.y) - &(&a.x * &b.z)) + &(&(&a.y * &b.w) + &(&a.z * &b.x));
        let z = &(&(&a.w * &b.z) + &(&a.x * &b.y)) + &(&(&a.z * &b.w) - &(&a.y * &b.x));
        QQuat { w, x, y, z }
    }
}

impl PartialOrd for QQuat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QQuat {
    /// Lexicographic numeric order of `(w, x, y, z)`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.coords().cmp(&other.coords())
    }
}

impl fmt::Display for QQuat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.w, self.x, self.y, self.z)
    }
}

impl fmt::Debug for QQuat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
