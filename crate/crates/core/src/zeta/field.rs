use super::ZetaError;

/// Largest field that gets Zech-logarithm tables.
pub const TABLE_LIMIT: u64 = 1 << 20;

/// Polynomials over `F_p`, coefficients low to high, no trailing zeros.
mod fp {
    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn inv(a: u64, p: u64) -> u64 {
        pow(a, p - 2, p)
    }

    pub fn pow(mut a: u64, mut e: u64, p: u64) -> u64 {
        let mut r = 1 % p;
        a %= p;
        while e > 0 {
            if e & 1 == 1 {
                r = r * a % p;
            }
            a = a * a % p;
            e >>= 1;
        }
        r
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        trim((0..n).map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p).collect())
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(out)
    }

    /// Remainder of `a` modulo a nonzero `m`.
    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = trim(a.to_vec());
        let lead_inv = inv(*m.last().expect("nonzero modulus"), p);
        while r.len() >= m.len() {
            let shift = r.len() - m.len();
            let c = r.last().copied().unwrap() * lead_inv % p;
            for (i, x) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - c * x % p) % p;
            }
            r = trim(r);
        }
        r
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        rem(&mul(a, b, p), m, p)
    }

    pub fn powmod(a: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut r = vec![1u64];
        let mut base = rem(a, m, p);
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(&r, &base, m, p);
            }
            base = mulmod(&base, &base, m, p);
            e >>= 1;
        }
        r
    }

    /// Ben-Or: `f` of degree `n` is irreducible iff `gcd(x^{p^i} - x, f) = 1` for `i <= n/2`.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let n = f.len() - 1;
        let x = vec![0, 1];
        let mut xp = x.clone();
        for _ in 1..=n / 2 {
            xp = powmod(&xp, p, f, p);
            let g = gcd(f, &sub(&xp, &x, p), p);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Sentinel log of zero.
pub const ZERO: u64 = u64::MAX;

#[derive(Clone, Debug)]
enum Repr {
    /// Elements stored as discrete logs to a fixed generator.
    Zech { exp: Vec<u32>, log: Vec<u32>, zech: Vec<u32> },
    /// Elements stored as base-`p` digit vectors packed into an integer.
    Basis,
}

/// `F_{p^n}`. Element encoding depends on the representation; use the
/// methods of this type to convert.
#[derive(Clone, Debug)]
pub struct FqField {
    p: u64,
    n: u32,
    q: u64,
    modulus: Vec<u64>,
    repr: Repr,
}

/// An element in the field's internal encoding.
pub type Fq = u64;

impl FqField {
    pub fn new(p: u64, n: u32) -> Result<Self, ZetaError> {
        Self::with_limit(p, n, TABLE_LIMIT)
    }

    /// As `new`, with tables only when `p^n <= table_limit`.
    pub fn with_limit(p: u64, n: u32, table_limit: u64) -> Result<Self, ZetaError> {
        if !is_prime(p) {
            return Err(ZetaError::NotPrime(p));
        }
        if n == 0 {
            return Err(ZetaError::TooLarge(format!("extension degree {n}")));
        }
        let q = p.checked_pow(n).filter(|&q| q < (1 << 40)).ok_or_else(|| ZetaError::TooLarge(format!("{p}^{n}")))?;
        let modulus = Self::smallest_irreducible(p, n as usize);
        let mut f = FqField { p, n, q, modulus, repr: Repr::Basis };
        if q <= table_limit {
            f.build_tables();
        }
        Ok(f)
    }

    /// Lexicographically smallest monic irreducible of degree `n`, comparing
    /// coefficients from `x^{n-1}` down to the constant term.
    fn smallest_irreducible(p: u64, n: usize) -> Vec<u64> {
        if n == 1 {
            return vec![0, 1];
        }
        let total = p.pow(n as u32);
        for m in 0..total {
            let mut coeffs = Vec::with_capacity(n + 1);
            let mut v = m;
            for _ in 0..n {
                coeffs.push(v % p);
                v /= p;
            }
            coeffs.push(1);
            if coeffs[0] != 0 && fp::is_irreducible(&coeffs, p) {
                return coeffs;
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    fn digits(&self, mut idx: u64) -> Vec<u64> {
        let mut d = Vec::with_capacity(self.n as usize);
        for _ in 0..self.n {
            d.push(idx % self.p);
            idx /= self.p;
        }
        fp::trim(d)
    }

    fn pack(&self, d: &[u64]) -> u64 {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn basis_mul(&self, a: u64, b: u64) -> u64 {
        self.pack(&fp::mulmod(&self.digits(a), &self.digits(b), &self.modulus, self.p))
    }

    fn basis_add(&self, a: u64, b: u64) -> u64 {
        let (mut a, mut b, mut out, mut scale) = (a, b, 0, 1);
        for _ in 0..self.n {
            out += ((a % self.p + b % self.p) % self.p) * scale;
            a /= self.p;
            b /= self.p;
            scale *= self.p;
        }
        out
    }

    fn basis_pow(&self, a: u64, e: u64) -> u64 {
        self.pack(&fp::powmod(&self.digits(a), e, &self.modulus, self.p))
    }

    fn build_tables(&mut self) {
        let order = self.q - 1;
        let factors = prime_factors(order);
        let g = (2..self.q.max(3))
            .chain(std::iter::once(1))
            .find(|&g| g < self.q && factors.iter().all(|r| self.basis_pow(g, order / r) != 1))
            .expect("cyclic group has a generator");
        let mut exp = vec![0u32; order as usize];
        let mut log = vec![u32::MAX; self.q as usize];
        let mut cur = 1u64;
        for i in 0..order {
            exp[i as usize] = cur as u32;
            log[cur as usize] = i as u32;
            cur = self.basis_mul(cur, g);
        }
        let zech = (0..order)
            .map(|i| {
                let one_plus = self.basis_add(exp[i as usize] as u64, 1);
                log[one_plus as usize]
            })
            .collect();
        self.repr = Repr::Zech { exp, log, zech };
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Modulus coefficients, constant term first.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn has_tables(&self) -> bool {
        matches!(self.repr, Repr::Zech { .. })
    }

    pub fn zero(&self) -> Fq {
        match self.repr {
            Repr::Zech { .. } => ZERO,
            Repr::Basis => 0,
        }
    }

    pub fn one(&self) -> Fq {
        self.from_index(1)
    }

    pub fn is_zero(&self, a: Fq) -> bool {
        a == self.zero()
    }

    /// Element whose base-`p` digits (constant term first) are those of `idx`.
    pub fn from_index(&self, idx: u64) -> Fq {
        match &self.repr {
            Repr::Zech { log, .. } => {
                if idx == 0 {
                    ZERO
                } else {
                    log[idx as usize] as u64
                }
            }
            Repr::Basis => idx,
        }
    }

    pub fn to_index(&self, a: Fq) -> u64 {
        match &self.repr {
            Repr::Zech { exp, .. } => {
                if a == ZERO {
                    0
                } else {
                    exp[a as usize] as u64
                }
            }
            Repr::Basis => a,
        }
    }

    pub fn from_int(&self, c: i64) -> Fq {
        self.from_index(c.rem_euclid(self.p as i64) as u64)
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        match &self.repr {
            Repr::Zech { .. } => {
                if a == ZERO || b == ZERO {
                    return ZERO;
                }
                let s = a + b;
                let m = self.q - 1;
                if s >= m {
                    s - m
                } else {
                    s
                }
            }
            Repr::Basis => self.basis_mul(a, b),
        }
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        match &self.repr {
            Repr::Zech { zech, .. } => {
                if a == ZERO {
                    return b;
                }
                if b == ZERO {
                    return a;
                }
                let m = self.q - 1;
                let d = if b >= a { b - a } else { b + m - a };
                let z = zech[d as usize];
                if z == u32::MAX {
                    return ZERO;
                }
                let s = a + z as u64;
                if s >= m {
                    s - m
                } else {
                    s
                }
            }
            Repr::Basis => self.basis_add(a, b),
        }
    }

    pub fn neg(&self, a: Fq) -> Fq {
        self.mul(a, self.from_int(-1))
    }

    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    pub fn pow(&self, a: Fq, e: u64) -> Fq {
        match &self.repr {
            Repr::Zech { .. } => {
                if a == ZERO {
                    return if e == 0 { self.one() } else { ZERO };
                }
                ((a as u128 * e as u128) % (self.q - 1) as u128) as u64
            }
            Repr::Basis => self.basis_pow(a, e),
        }
    }

    /// `a^p`.
    pub fn frobenius(&self, a: Fq) -> Fq {
        self.pow(a, self.p)
    }

    /// Quadratic character: `0`, `1` on nonzero squares, `-1` otherwise.
    pub fn quad_char(&self, a: Fq) -> Result<i8, ZetaError> {
        if self.p == 2 {
            return Err(ZetaError::EvenCharacteristic);
        }
        Ok(self.quad_char_odd(a))
    }

    #[inline]
    pub(crate) fn quad_char_odd(&self, a: Fq) -> i8 {
        match &self.repr {
            Repr::Zech { .. } => {
                if a == ZERO {
                    0
                } else if a % 2 == 0 {
                    1
                } else {
                    -1
                }
            }
            Repr::Basis => {
                if a == 0 {
                    0
                } else if self.basis_pow(a, (self.q - 1) / 2) == 1 {
                    1
                } else {
                    -1
                }
            }
        }
    }

    /// All elements, zero first, then in the order used by point counts.
    pub fn elements(&self) -> impl Iterator<Item = Fq> + '_ {
        (0..self.q).map(|i| self.from_index(i))
    }
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};

    use super::*;

    #[test]
    fn small_fields() {
        let f3 = FqField::new(3, 1).unwrap();
        assert_eq!(f3.modulus(), &[0, 1]);
        assert_eq!(f3.quad_char(f3.from_int(1)).unwrap(), 1);
        assert_eq!(f3.quad_char(f3.from_int(2)).unwrap(), -1);
        assert_eq!(f3.quad_char(f3.zero()).unwrap(), 0);
        let f9 = FqField::new(3, 2).unwrap();
        assert_eq!(f9.modulus(), &[1, 0, 1]);
        assert!(matches!(FqField::new(4, 1), Err(ZetaError::NotPrime(4))));
        let f2 = FqField::new(2, 3).unwrap();
        assert!(matches!(f2.quad_char(f2.one()), Err(ZetaError::EvenCharacteristic)));
    }

    /// Oracle for the modulus: exhaust monic quadratics, test by roots.
    #[test]
    fn quadratic_modulus_by_root_search() {
        for p in [3u64, 5, 7, 11, 13] {
            let want = (0..p * p)
                .map(|m| (m % p, m / p))
                .find(|&(c0, c1)| (0..p).all(|x| (x * x + c1 * x + c0) % p != 0))
                .unwrap();
            let f = FqField::new(p, 2).unwrap();
            assert_eq!(f.modulus(), &[want.0, want.1, 1], "p = {p}");
        }
    }

    #[test]
    fn tables_agree_with_basis_arithmetic() {
        for (p, n) in [(3, 4), (5, 3), (3, 6)] {
            let t = FqField::new(p, n).unwrap();
            let b = FqField::with_limit(p, n, 0).unwrap();
            assert!(t.has_tables() && !b.has_tables());
            let mut rng = rand::rngs::StdRng::seed_from_u64(7);
            for _ in 0..2000 {
                let (x, y) = (rng.gen_range(0..t.q()), rng.gen_range(0..t.q()));
                let (tx, ty, bx, by) = (t.from_index(x), t.from_index(y), b.from_index(x), b.from_index(y));
                assert_eq!(t.to_index(t.mul(tx, ty)), b.to_index(b.mul(bx, by)));
                assert_eq!(t.to_index(t.add(tx, ty)), b.to_index(b.add(bx, by)));
                assert_eq!(t.quad_char_odd(tx), b.quad_char_odd(bx));
            }
        }
    }

    #[test]
    fn frobenius_is_a_ring_map() {
        let f = FqField::new(3, 5).unwrap();
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for _ in 0..1000 {
            let (a, b) = (f.from_index(rng.gen_range(0..f.q())), f.from_index(rng.gen_range(0..f.q())));
            assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
            assert_eq!(f.frobenius(f.mul(a, b)), f.mul(f.frobenius(a), f.frobenius(b)));
        }
        let order = f.q() - 1;
        for i in [0u64, 1, 17, order - 1] {
            for j in [0u64, 5, order / 2] {
                assert_eq!(f.mul(i, j), (i + j) % order);
            }
        }
    }
}
