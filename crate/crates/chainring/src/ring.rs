//! Exact arithmetic for finite valuation rings of order `q^r`, `q = p^n`.
//!
//! Two families are implemented, enough to realize every `(q, r)` pair the
//! experiments use:
//!
//! * `cyclic`     — the integers modulo `p^r` (requires `n = 1`),
//! * `polynomial` — `F_q[t]/(t^r)` with `F_q = F_p[x]/(f)` for a
//!   deterministically chosen monic irreducible `f` of degree `n`.
//!
//! Both are finite chain rings: the non-units form the unique maximal ideal,
//! generated by the uniformizer (`p` in the cyclic family, `t` in the
//! polynomial one), and every nonzero element is `u * pi^v` with `u` a unit.
//!
//! An element is identified with its canonical index in `[0, q^r)`. The index
//! packs the base-`p` digit vector of length `n*r`, little-endian; index 0 is
//! the additive identity and index 1 the multiplicative identity. The text
//! form of an element is its comma-separated digit vector, e.g. `"2,1"` for
//! `2 + 1*pi` in `Z/9`.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

/// Largest order for which full addition/multiplication tables are kept.
const TABLE_ORDER_LIMIT: u64 = 256;

#[derive(Debug, Error)]
pub enum RingError {
    #[error("p = {0} must be an odd prime")]
    NotAnOddPrime(u64),
    #[error("n and r must be positive")]
    ZeroParameter,
    #[error("the cyclic family requires n = 1 (got n = {0})")]
    FamilyNeedsPrimeField(u32),
    #[error("ring order p^(n*r) does not fit in 64 bits")]
    OrderOverflow,
    #[error("element {0} is not a unit")]
    NotAUnit(String),
    #[error("malformed ring descriptor `{0}` (expected p^n^r:family)")]
    BadDescriptor(String),
}

/// Which realization of the order-`q^r` chain ring is in use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `Z/p^r` (only available for `n = 1`).
    Cyclic,
    /// `F_q[t]/(t^r)` with `F_q = F_p[x]/(f)`.
    Polynomial,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Cyclic => write!(f, "cyclic"),
            Family::Polynomial => write!(f, "polynomial"),
        }
    }
}

#[derive(Debug)]
struct RingInner {
    p: u64,
    n: u32,
    r: u32,
    q: u64,
    order: u64,
    unit_count: u64,
    family: Family,
    /// Monic polynomial defining `F_q` over `F_p`, low coefficient first,
    /// length `n + 1`. For `n = 1` this is `x` itself and never consulted.
    field_poly: Vec<u64>,
    /// `p^0 .. p^(n*r)` for digit packing.
    p_pows: Vec<u64>,
    add_table: Option<Vec<u16>>,
    mul_table: Option<Vec<u16>>,
}

/// A finite valuation ring of order `q^r`. Cheap to clone; immutable after
/// construction, so safe to share across threads.
#[derive(Clone)]
pub struct Ring {
    inner: Arc<RingInner>,
}

/// An element of a [`Ring`], stored as its canonical index.
#[derive(Clone)]
pub struct RingElement {
    ring: Ring,
    index: u64,
}

impl Ring {
    /// Builds the ring, choosing the cyclic family for `n = 1` and the
    /// polynomial family otherwise.
    pub fn make(p: u64, n: u32, r: u32) -> Result<Ring, RingError> {
        let family = if n == 1 { Family::Cyclic } else { Family::Polynomial };
        Ring::new(p, n, r, family)
    }

    pub fn new(p: u64, n: u32, r: u32, family: Family) -> Result<Ring, RingError> {
        if n == 0 || r == 0 {
            return Err(RingError::ZeroParameter);
        }
        if p < 3 || !is_prime(p) {
            return Err(RingError::NotAnOddPrime(p));
        }
        if family == Family::Cyclic && n != 1 {
            return Err(RingError::FamilyNeedsPrimeField(n));
        }
        let digits = (n as u64).checked_mul(r as u64).ok_or(RingError::OrderOverflow)?;
        if digits > 62 {
            return Err(RingError::OrderOverflow);
        }
        let order = checked_pow(p, digits).ok_or(RingError::OrderOverflow)?;
        let q = checked_pow(p, n as u64).ok_or(RingError::OrderOverflow)?;
        let unit_count = order - order / q; // q^r - q^(r-1)

        let field_poly = if n == 1 {
            vec![0, 1]
        } else {
            find_irreducible(p, n)
        };
        let mut p_pows = Vec::with_capacity(digits as usize + 1);
        let mut acc = 1u64;
        for _ in 0..=digits {
            p_pows.push(acc);
            acc = acc.saturating_mul(p);
        }

        let mut inner = RingInner {
            p,
            n,
            r,
            q,
            order,
            unit_count,
            family,
            field_poly,
            p_pows,
            add_table: None,
            mul_table: None,
        };
        if order <= TABLE_ORDER_LIMIT {
            let m = order as usize;
            let mut add = vec![0u16; m * m];
            let mut mul = vec![0u16; m * m];
            for a in 0..order {
                for b in 0..order {
                    add[(a * order + b) as usize] = inner.add_raw(a, b) as u16;
                    mul[(a * order + b) as usize] = inner.mul_raw(a, b) as u16;
                }
            }
            inner.add_table = Some(add);
            inner.mul_table = Some(mul);
        }
        Ok(Ring { inner: Arc::new(inner) })
    }

    /// Parses a descriptor of the form `p^n^r:family`, e.g. `3^1^2:cyclic`.
    pub fn parse_descriptor(s: &str) -> Result<Ring, RingError> {
        let bad = || RingError::BadDescriptor(s.to_string());
        let (params, family) = s.split_once(':').ok_or_else(bad)?;
        let family = match family {
            "cyclic" => Family::Cyclic,
            "polynomial" => Family::Polynomial,
            _ => return Err(bad()),
        };
        let parts: Vec<&str> = params.split('^').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let p: u64 = parts[0].parse().map_err(|_| bad())?;
        let n: u32 = parts[1].parse().map_err(|_| bad())?;
        let r: u32 = parts[2].parse().map_err(|_| bad())?;
        Ring::new(p, n, r, family)
    }

    /// Descriptor string `p^n^r:family`, used in CLI flags and report rows.
    pub fn descriptor(&self) -> String {
        format!("{}^{}^{}:{}", self.p(), self.n(), self.r(), self.family())
    }

    pub fn p(&self) -> u64 {
        self.inner.p
    }

    pub fn n(&self) -> u32 {
        self.inner.n
    }

    pub fn r(&self) -> u32 {
        self.inner.r
    }

    /// Residue field size `q = p^n`.
    pub fn q(&self) -> u64 {
        self.inner.q
    }

    /// `q^r`.
    pub fn order(&self) -> u64 {
        self.inner.order
    }

    pub fn family(&self) -> Family {
        self.inner.family
    }

    /// `|R^*| = q^r - q^(r-1)`.
    pub fn unit_count(&self) -> u64 {
        self.inner.unit_count
    }

    /// `|R^0| = q^(r-1)`, the size of the maximal ideal.
    pub fn nonunit_count(&self) -> u64 {
        self.inner.order - self.inner.unit_count
    }

    /// The defining polynomial of `F_q` over `F_p` (low coefficient first).
    pub fn field_poly(&self) -> &[u64] {
        &self.inner.field_poly
    }

    pub fn zero(&self) -> RingElement {
        self.element(0)
    }

    pub fn one(&self) -> RingElement {
        self.element(1)
    }

    /// The uniformizer `pi`: `p` for the cyclic family, `t` for the
    /// polynomial one.
    pub fn uniformizer(&self) -> RingElement {
        match self.inner.family {
            Family::Cyclic => self.element(self.inner.p % self.inner.order),
            Family::Polynomial => {
                if self.inner.r == 1 {
                    self.zero() // t = 0 in F_q[t]/(t)
                } else {
                    self.element(self.inner.q)
                }
            }
        }
    }

    /// The element with the given canonical index. Panics if out of range.
    pub fn element(&self, index: u64) -> RingElement {
        assert!(index < self.inner.order, "index {index} out of range for {}", self.descriptor());
        RingElement { ring: self.clone(), index }
    }

    /// The image of an ordinary integer under `Z -> R`, `m -> m * 1`.
    pub fn int_embed(&self, m: u64) -> RingElement {
        match self.inner.family {
            Family::Cyclic => self.element(m % self.inner.order),
            Family::Polynomial => self.element(m % self.inner.p),
        }
    }

    /// Element from its little-endian base-`p` digit vector.
    pub fn from_digits(&self, digits: &[u64]) -> RingElement {
        let nd = (self.inner.n * self.inner.r) as usize;
        assert!(digits.len() <= nd, "too many digits for {}", self.descriptor());
        let mut idx = 0u64;
        for (i, &d) in digits.iter().enumerate() {
            assert!(d < self.inner.p, "digit {d} out of range");
            idx += d * self.inner.p_pows[i];
        }
        self.element(idx)
    }

    /// Deterministic enumeration of all elements, ascending by index.
    pub fn elements(&self) -> impl Iterator<Item = RingElement> + '_ {
        (0..self.inner.order).map(move |i| self.element(i))
    }

    /// Deterministic enumeration of the units, ascending by index.
    pub fn units(&self) -> impl Iterator<Item = RingElement> + '_ {
        (0..self.inner.order).filter(move |&i| self.is_unit_idx(i)).map(move |i| self.element(i))
    }

    // ----- index-level arithmetic (hot paths work on raw indices) -----

    #[inline]
    pub fn add_idx(&self, a: u64, b: u64) -> u64 {
        if let Some(t) = &self.inner.add_table {
            t[(a * self.inner.order + b) as usize] as u64
        } else {
            self.inner.add_raw(a, b)
        }
    }

    #[inline]
    pub fn mul_idx(&self, a: u64, b: u64) -> u64 {
        if let Some(t) = &self.inner.mul_table {
            t[(a * self.inner.order + b) as usize] as u64
        } else {
            self.inner.mul_raw(a, b)
        }
    }

    #[inline]
    pub fn neg_idx(&self, a: u64) -> u64 {
        self.inner.neg_raw(a)
    }

    #[inline]
    pub fn sub_idx(&self, a: u64, b: u64) -> u64 {
        self.add_idx(a, self.neg_idx(b))
    }

    /// Largest `v` with `a` in `pi^v * R`; by convention `valuation(0) = r`.
    pub fn val_idx(&self, a: u64) -> u32 {
        self.inner.val_raw(a)
    }

    #[inline]
    pub fn is_unit_idx(&self, a: u64) -> bool {
        self.inner.val_raw(a) == 0
    }

    /// Multiplicative inverse of a unit, or `None` for non-units.
    pub fn inv_idx(&self, a: u64) -> Option<u64> {
        if !self.is_unit_idx(a) {
            return None;
        }
        // The unit group has order q^r - q^(r-1), so a^(|R^*| - 1) inverts a.
        let inv = self.pow_idx(a, self.inner.unit_count - 1);
        debug_assert_eq!(self.mul_idx(a, inv), 1);
        Some(inv)
    }

    pub fn pow_idx(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_idx(acc, base);
            }
            base = self.mul_idx(base, base);
            e >>= 1;
        }
        acc
    }

    /// Little-endian base-`p` digits of an index, length `n*r`.
    pub fn digits_of(&self, index: u64) -> Vec<u64> {
        self.inner.digits_of(index)
    }
}

impl RingInner {
    fn digits_of(&self, index: u64) -> Vec<u64> {
        let nd = (self.n * self.r) as usize;
        let mut out = vec![0u64; nd];
        let mut rest = index;
        for d in out.iter_mut() {
            *d = rest % self.p;
            rest /= self.p;
        }
        out
    }

    fn pack_digits(&self, digits: &[u64]) -> u64 {
        let mut idx = 0u64;
        for (i, &d) in digits.iter().enumerate() {
            idx += d * self.p_pows[i];
        }
        idx
    }

    fn add_raw(&self, a: u64, b: u64) -> u64 {
        match self.family {
            Family::Cyclic => {
                let s = a + b;
                if s >= self.order { s - self.order } else { s }
            }
            Family::Polynomial => {
                let da = self.digits_of(a);
                let db = self.digits_of(b);
                let sum: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
                self.pack_digits(&sum)
            }
        }
    }

    fn neg_raw(&self, a: u64) -> u64 {
        match self.family {
            Family::Cyclic => {
                if a == 0 { 0 } else { self.order - a }
            }
            Family::Polynomial => {
                let da = self.digits_of(a);
                let neg: Vec<u64> = da.iter().map(|x| (self.p - x) % self.p).collect();
                self.pack_digits(&neg)
            }
        }
    }

    fn mul_raw(&self, a: u64, b: u64) -> u64 {
        match self.family {
            Family::Cyclic => ((a as u128 * b as u128) % self.order as u128) as u64,
            Family::Polynomial => {
                let n = self.n as usize;
                let r = self.r as usize;
                let da = self.digits_of(a);
                let db = self.digits_of(b);
                let mut out = vec![0u64; n * r];
                let mut buf = vec![0u64; 2 * n - 1];
                // truncated convolution of F_q coefficients: t^r = 0
                for j in 0..r {
                    if da[j * n..(j + 1) * n].iter().all(|&c| c == 0) {
                        continue;
                    }
                    for k in 0..r - j {
                        self.fq_mul_into(&da[j * n..(j + 1) * n], &db[k * n..(k + 1) * n], &mut buf);
                        let m = j + k;
                        for t in 0..n {
                            out[m * n + t] = (out[m * n + t] + buf[t]) % self.p;
                        }
                    }
                }
                self.pack_digits(&out)
            }
        }
    }

    /// `F_q` product of two length-`n` digit slices into `buf[..n]`
    /// (reduction by the monic `field_poly`).
    fn fq_mul_into(&self, a: &[u64], b: &[u64], buf: &mut [u64]) {
        let n = self.n as usize;
        buf.fill(0);
        for i in 0..n {
            if a[i] == 0 {
                continue;
            }
            for j in 0..n {
                buf[i + j] = (buf[i + j] + a[i] * b[j]) % self.p;
            }
        }
        for i in (n..2 * n - 1).rev() {
            let c = buf[i];
            if c != 0 {
                buf[i] = 0;
                // x^n = -sum_t poly[t] x^t
                for t in 0..n {
                    let sub = (self.p - self.field_poly[t]) % self.p;
                    buf[i - n + t] = (buf[i - n + t] + c * sub) % self.p;
                }
            }
        }
    }

    fn val_raw(&self, a: u64) -> u32 {
        if a == 0 {
            return self.r;
        }
        match self.family {
            Family::Cyclic => {
                let mut v = 0;
                let mut x = a;
                while x.is_multiple_of(self.p) {
                    x /= self.p;
                    v += 1;
                }
                v
            }
            Family::Polynomial => {
                let n = self.n as usize;
                let digits = self.digits_of(a);
                for j in 0..self.r as usize {
                    if digits[j * n..(j + 1) * n].iter().any(|&c| c != 0) {
                        return j as u32;
                    }
                }
                self.r
            }
        }
    }
}

impl PartialEq for Ring {
    fn eq(&self, other: &Ring) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p
                && self.inner.n == other.inner.n
                && self.inner.r == other.inner.r
                && self.inner.family == other.inner.family
                && self.inner.field_poly == other.inner.field_poly)
    }
}

impl Eq for Ring {}

impl Hash for Ring {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.inner.p.hash(state);
        self.inner.n.hash(state);
        self.inner.r.hash(state);
        self.inner.family.hash(state);
    }
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({})", self.descriptor())
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.descriptor())
    }
}

impl RingElement {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn is_zero(&self) -> bool {
        self.index == 0
    }

    pub fn is_unit(&self) -> bool {
        self.ring.is_unit_idx(self.index)
    }

    pub fn valuation(&self) -> u32 {
        self.ring.val_idx(self.index)
    }

    pub fn digits(&self) -> Vec<u64> {
        self.ring.digits_of(self.index)
    }

    fn check_ring(&self, rhs: &RingElement) {
        assert!(
            self.ring == rhs.ring,
            "mixed-ring operands: {} vs {}",
            self.ring.descriptor(),
            rhs.ring.descriptor()
        );
    }

    pub fn add(&self, rhs: &RingElement) -> RingElement {
        self.check_ring(rhs);
        self.ring.element(self.ring.add_idx(self.index, rhs.index))
    }

    pub fn sub(&self, rhs: &RingElement) -> RingElement {
        self.check_ring(rhs);
        self.ring.element(self.ring.sub_idx(self.index, rhs.index))
    }

    pub fn neg(&self) -> RingElement {
        self.ring.element(self.ring.neg_idx(self.index))
    }

    pub fn mul(&self, rhs: &RingElement) -> RingElement {
        self.check_ring(rhs);
        self.ring.element(self.ring.mul_idx(self.index, rhs.index))
    }

    pub fn pow(&self, e: u64) -> RingElement {
        self.ring.element(self.ring.pow_idx(self.index, e))
    }

    pub fn inv(&self) -> Result<RingElement, RingError> {
        self.ring
            .inv_idx(self.index)
            .map(|i| self.ring.element(i))
            .ok_or_else(|| RingError::NotAUnit(self.to_string()))
    }
}

impl PartialEq for RingElement {
    fn eq(&self, other: &RingElement) -> bool {
        self.index == other.index && self.ring == other.ring
    }
}

impl Eq for RingElement {}

impl Hash for RingElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.index.hash(state);
        self.ring.hash(state);
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self, self.ring.descriptor())
    }
}

impl fmt::Display for RingElement {
    /// Comma-separated base-`p` digits, little-endian.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = self.digits();
        let s: Vec<String> = digits.iter().map(|d| d.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn checked_pow(base: u64, exp: u64) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// Finds the monic irreducible polynomial of degree `n` over `F_p` whose
/// packed non-leading coefficient vector has the smallest index. The fixed
/// choice keeps serialized elements reproducible across runs and machines.
fn find_irreducible(p: u64, n: u32) -> Vec<u64> {
    let n = n as usize;
    let total = checked_pow(p, n as u64).expect("field size fits u64");
    for packed in 0..total {
        let mut poly = Vec::with_capacity(n + 1);
        let mut rest = packed;
        for _ in 0..n {
            poly.push(rest % p);
            rest /= p;
        }
        poly.push(1);
        if poly_is_irreducible(p, &poly) {
            return poly;
        }
    }
    unreachable!("an irreducible polynomial of degree {n} exists over F_{p}")
}

/// Trial division by every monic divisor of degree up to `n/2`.
fn poly_is_irreducible(p: u64, poly: &[u64]) -> bool {
    let n = poly.len() - 1;
    for deg in 1..=n / 2 {
        let total = checked_pow(p, deg as u64).expect("divisor space fits u64");
        for packed in 0..total {
            let mut div = Vec::with_capacity(deg + 1);
            let mut rest = packed;
            for _ in 0..deg {
                div.push(rest % p);
                rest /= p;
            }
            div.push(1);
            if poly_divides(p, poly, &div) {
                return false;
            }
        }
    }
    n >= 1
}

/// Whether the monic polynomial `b` divides `a` over `F_p`.
fn poly_divides(p: u64, a: &[u64], b: &[u64]) -> bool {
    let mut rem = a.to_vec();
    while rem.len() >= b.len() {
        let lead = *rem.last().unwrap();
        if lead != 0 {
            let shift = rem.len() - b.len();
            for (t, &bt) in b.iter().enumerate() {
                rem[shift + t] = (rem[shift + t] + (p - bt) % p * lead) % p;
            }
        }
        rem.pop();
    }
    rem.iter().all(|&c| c == 0)
}
