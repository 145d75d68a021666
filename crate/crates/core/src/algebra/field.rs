use std::fmt;
use std::sync::Arc;

use rand::Rng;

use super::AlgebraError;

/// A field element. The raw value is a residue for prime fields and a
/// polynomial bitmask for binary fields; arithmetic goes through [`Field`].
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Fe(pub u64);

/// Fixed irreducible polynomials for `F_{2^e}`, `e = 1..=16`, as bitmasks
/// including the leading term.
pub const BINARY_MODULI: [u64; 16] =
    [0x3, 0x7, 0xb, 0x13, 0x25, 0x43, 0x83, 0x11b, 0x211, 0x409, 0x805, 0x1053, 0x201b, 0x4443, 0x8003, 0x1100b];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldKind {
    Prime,
    Binary,
}

#[derive(Debug)]
enum Repr {
    Prime { q: u64 },
    Binary { e: u32, modulus: u64, exp: Vec<u32>, log: Vec<u32> },
}

/// A finite field: either `F_q` for a prime `q < 2^32` or `F_{2^e}` with
/// `e <= 16`. Cloning is cheap.
#[derive(Clone)]
pub struct Field {
    repr: Arc<Repr>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        match (&*self.repr, &*other.repr) {
            (Repr::Prime { q: a }, Repr::Prime { q: b }) => a == b,
            (Repr::Binary { modulus: a, .. }, Repr::Binary { modulus: b, .. }) => a == b,
            _ => false,
        }
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.repr {
            Repr::Prime { q } => write!(f, "F_{q}"),
            Repr::Binary { e, .. } => write!(f, "F_2^{e}"),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut i = 3u64;
    while i * i <= n {
        if n % i == 0 {
            return false;
        }
        i += 2;
    }
    true
}

fn gf2_degree(p: u64) -> u32 {
    63 - p.leading_zeros()
}

fn gf2_mulmod(mut a: u64, mut b: u64, modulus: u64) -> u64 {
    let deg = gf2_degree(modulus);
    let mut r = 0u64;
    while b != 0 {
        if b & 1 == 1 {
            r ^= a;
        }
        b >>= 1;
        a <<= 1;
        if (a >> deg) & 1 == 1 {
            a ^= modulus;
        }
    }
    r
}

fn gf2_rem(mut a: u64, m: u64) -> u64 {
    let dm = gf2_degree(m);
    while a != 0 && gf2_degree(a) >= dm {
        a ^= m << (gf2_degree(a) - dm);
    }
    a
}

fn gf2_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = gf2_rem(a, b);
        a = b;
        b = r;
    }
    a
}

/// Rabin's test: `p` of degree `e` is irreducible over `F_2` iff
/// `x^{2^e} = x mod p` and `gcd(x^{2^{e/r}} - x, p) = 1` for every prime `r | e`.
pub fn gf2_is_irreducible(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let e = gf2_degree(p);
    if e == 0 {
        return false;
    }
    if e == 1 {
        return true;
    }
    let frob = |k: u32| {
        let mut x = 0b10u64;
        for _ in 0..k {
            x = gf2_mulmod(x, x, p);
        }
        x
    };
    if frob(e) != 0b10 {
        return false;
    }
    (2..=e).filter(|r| e % r == 0 && is_prime(u64::from(*r))).all(|r| gf2_gcd(p, frob(e / r) ^ 0b10) == 1)
}

impl Field {
    /// `F_q` for a prime `q < 2^32`.
    pub fn prime(q: u64) -> Result<Field, AlgebraError> {
        if q >= 1 << 32 {
            return Err(AlgebraError::TooLarge(format!("modulus {q} exceeds 2^32")));
        }
        if !is_prime(q) {
            return Err(AlgebraError::NonPrime(q));
        }
        Ok(Field { repr: Arc::new(Repr::Prime { q }) })
    }

    /// `F_{2^e}` using the fixed modulus table.
    pub fn binary(e: u32) -> Result<Field, AlgebraError> {
        if e == 0 {
            return Err(AlgebraError::ZeroDegree);
        }
        if e > 16 {
            return Err(AlgebraError::TooLarge(format!("extension degree {e} exceeds 16")));
        }
        Field::binary_with_modulus(BINARY_MODULI[(e - 1) as usize])
    }

    /// `F_2[x]/(modulus)`; the modulus is a bitmask including its leading term.
    pub fn binary_with_modulus(modulus: u64) -> Result<Field, AlgebraError> {
        if modulus < 2 {
            return Err(AlgebraError::ZeroDegree);
        }
        let e = gf2_degree(modulus);
        if e > 16 {
            return Err(AlgebraError::TooLarge(format!("extension degree {e} exceeds 16")));
        }
        if !gf2_is_irreducible(modulus) {
            return Err(AlgebraError::Reducible(modulus));
        }
        let n = 1usize << e;
        let generator = (2..n as u64)
            .chain(std::iter::once(1))
            .find(|&g| {
                let mut x = 1u64;
                for i in 1..n - 1 {
                    x = gf2_mulmod(x, g, modulus);
                    if x == 1 {
                        return i == n - 1;
                    }
                }
                gf2_mulmod(x, g, modulus) == 1
            })
            .expect("the multiplicative group of a finite field is cyclic");
        let order = n - 1;
        let mut exp = vec![0u32; 2 * order.max(1)];
        let mut log = vec![0u32; n];
        let mut x = 1u64;
        for (i, e) in exp.iter_mut().take(order).enumerate() {
            *e = x as u32;
            log[x as usize] = i as u32;
            x = gf2_mulmod(x, generator, modulus);
        }
        for i in order..exp.len() {
            exp[i] = exp[i - order];
        }
        Ok(Field { repr: Arc::new(Repr::Binary { e, modulus, exp, log }) })
    }

    pub fn kind(&self) -> FieldKind {
        match &*self.repr {
            Repr::Prime { .. } => FieldKind::Prime,
            Repr::Binary { .. } => FieldKind::Binary,
        }
    }

    pub fn is_binary(&self) -> bool {
        self.kind() == FieldKind::Binary
    }

    pub fn order(&self) -> u64 {
        match &*self.repr {
            Repr::Prime { q } => *q,
            Repr::Binary { e, .. } => 1 << e,
        }
    }

    pub fn characteristic(&self) -> u64 {
        match &*self.repr {
            Repr::Prime { q } => *q,
            Repr::Binary { .. } => 2,
        }
    }

    /// Degree over the prime subfield.
    pub fn extension_degree(&self) -> u32 {
        match &*self.repr {
            Repr::Prime { .. } => 1,
            Repr::Binary { e, .. } => *e,
        }
    }

    pub fn modulus(&self) -> u64 {
        match &*self.repr {
            Repr::Prime { q } => *q,
            Repr::Binary { modulus, .. } => *modulus,
        }
    }

    pub fn zero(&self) -> Fe {
        Fe(0)
    }

    pub fn one(&self) -> Fe {
        Fe(1)
    }

    /// The `i`-th element in the canonical enumeration (`0 <= i < |F|`).
    pub fn elem(&self, i: u64) -> Fe {
        debug_assert!(i < self.order());
        Fe(i)
    }

    /// Inverse of [`Field::elem`].
    pub fn index(&self, a: Fe) -> u64 {
        a.0
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.order()).map(Fe)
    }

    /// The image of the integer `n` under `Z -> F`.
    pub fn from_u64(&self, n: u64) -> Fe {
        Fe(n % self.characteristic())
    }

    pub fn from_i64(&self, n: i64) -> Fe {
        let p = self.characteristic() as i64;
        Fe(n.rem_euclid(p) as u64)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        Fe(rng.gen_range(0..self.order()))
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        match &*self.repr {
            Repr::Prime { q } => {
                let s = a.0 + b.0;
                Fe(if s >= *q { s - q } else { s })
            }
            Repr::Binary { .. } => Fe(a.0 ^ b.0),
        }
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        match &*self.repr {
            Repr::Prime { q } => Fe(if a.0 == 0 { 0 } else { q - a.0 }),
            Repr::Binary { .. } => a,
        }
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        match &*self.repr {
            Repr::Prime { q } => Fe(a.0 * b.0 % q),
            Repr::Binary { exp, log, .. } => {
                if a.0 == 0 || b.0 == 0 {
                    Fe(0)
                } else {
                    Fe(u64::from(exp[(log[a.0 as usize] + log[b.0 as usize]) as usize]))
                }
            }
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Fe) -> Option<Fe> {
        if a.0 == 0 {
            return None;
        }
        match &*self.repr {
            Repr::Prime { q } => Some(self.pow(a, q - 2)),
            Repr::Binary { exp, log, .. } => {
                let order = exp.len() / 2;
                let l = log[a.0 as usize] as usize;
                Some(Fe(u64::from(exp[(order - l) % order])))
            }
        }
    }

    /// `a / b`.
    ///
    /// # Panics
    /// Panics when `b` is zero.
    pub fn div(&self, a: Fe, b: Fe) -> Fe {
        self.mul(a, self.inv(b).expect("division by zero"))
    }

    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn sum<I: IntoIterator<Item = Fe>>(&self, it: I) -> Fe {
        it.into_iter().fold(self.zero(), |acc, x| self.add(acc, x))
    }

    pub fn dot(&self, a: &[Fe], b: &[Fe]) -> Fe {
        debug_assert_eq!(a.len(), b.len());
        a.iter().zip(b).fold(self.zero(), |acc, (x, y)| self.add(acc, self.mul(*x, *y)))
    }

    /// Elements of the subfield of order `2^s`, ascending by bitmask.
    pub fn subfield(&self, s: u32) -> Result<Vec<Fe>, AlgebraError> {
        let e = self.extension_degree();
        if !self.is_binary() || s == 0 || e % s != 0 {
            return Err(AlgebraError::NotSubfield { field: self.to_string(), s });
        }
        let frob = |x: Fe| (0..s).fold(x, |y, _| self.mul(y, y));
        Ok(self.elements().filter(|&x| frob(x) == x).collect())
    }

    /// JSON text form: decimal residue or `0x`-prefixed lowercase hex.
    pub fn format(&self, a: Fe) -> String {
        match self.kind() {
            FieldKind::Prime => a.0.to_string(),
            FieldKind::Binary => format!("{:#x}", a.0),
        }
    }

    pub fn parse(&self, s: &str) -> Result<Fe, AlgebraError> {
        let s = s.trim();
        let v = if let Some(hex) = s.strip_prefix("0x") { u64::from_str_radix(hex, 16) } else { s.parse::<u64>() }
            .map_err(|_| AlgebraError::Parse(s.to_string()))?;
        if v >= self.order() {
            return Err(AlgebraError::Parse(format!("{s} is not an element of {self}")));
        }
        Ok(Fe(v))
    }

    /// Parses `5`, `q=5`, `2^4` or `gf2^4`.
    pub fn from_spec(spec: &str) -> Result<Field, AlgebraError> {
        let t = spec.trim().to_ascii_lowercase();
        let t = t.strip_prefix("q=").unwrap_or(&t);
        let t = t.strip_prefix("gf").unwrap_or(t);
        if let Some(e) = t.strip_prefix("2^") {
            let e: u32 = e.parse().map_err(|_| AlgebraError::Parse(spec.to_string()))?;
            return Field::binary(e);
        }
        let q: u64 = t.parse().map_err(|_| AlgebraError::Parse(spec.to_string()))?;
        Field::prime(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn prime_field_examples() {
        let f = Field::prime(5).unwrap();
        assert_eq!(f.add(Fe(2), Fe(4)), Fe(1));
        assert_eq!(f.mul(Fe(3), Fe(4)), Fe(2));
        assert!(matches!(Field::prime(6), Err(AlgebraError::NonPrime(6))));
    }

    #[test]
    fn binary_field_examples() {
        let f = Field::binary_with_modulus(0x13).unwrap();
        // (x+1)^2 = x^2+1
        assert_eq!(f.mul(Fe(0b11), Fe(0b11)), Fe(0b101));
        assert!(matches!(Field::binary_with_modulus(0b101), Err(AlgebraError::Reducible(_))));
        assert!(matches!(Field::binary(0), Err(AlgebraError::ZeroDegree)));
    }

    #[test]
    fn modulus_table_is_irreducible() {
        for (i, &m) in BINARY_MODULI.iter().enumerate() {
            assert_eq!(gf2_degree(m), i as u32 + 1);
            assert!(gf2_is_irreducible(m), "{m:#x}");
        }
    }

    #[test]
    fn irreducibility_matches_root_free_trial_division() {
        // every degree <= 8 polynomial: irreducible iff no factor of degree <= deg/2
        for p in 2u64..512 {
            let d = gf2_degree(p);
            let has_factor = (2u64..p).any(|q| gf2_degree(q) >= 1 && 2 * gf2_degree(q) <= d && gf2_rem(p, q) == 0);
            assert_eq!(gf2_is_irreducible(p), !has_factor, "{p:#b}");
        }
    }

    fn check_axioms(f: &Field, a: Fe, b: Fe, c: Fe) {
        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        assert_eq!(f.add(a, f.neg(a)), f.zero());
        assert_eq!(f.mul(a, b), f.mul(b, a));
        if a != f.zero() {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
        }
    }

    #[test]
    fn axioms_exhaustive_small_fields() {
        let fields: Vec<Field> = [2u64, 3, 5, 7, 11, 13, 17, 31]
            .iter()
            .map(|&q| Field::prime(q).unwrap())
            .chain((1..=5).map(|e| Field::binary(e).unwrap()))
            .collect();
        for f in &fields {
            for a in f.elements() {
                for b in f.elements() {
                    check_axioms(f, a, b, f.add(a, f.one()));
                }
            }
        }
    }

    #[test]
    fn axioms_random_large_fields() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let fields = [
            Field::prime(65537).unwrap(),
            Field::prime(1073741827).unwrap(),
            Field::binary(16).unwrap(),
            Field::binary(8).unwrap(),
        ];
        for f in &fields {
            for _ in 0..10_000 {
                check_axioms(f, f.random(&mut rng), f.random(&mut rng), f.random(&mut rng));
            }
        }
    }

    #[test]
    fn subfields() {
        let f = Field::binary(4).unwrap();
        assert_eq!(f.subfield(1).unwrap(), vec![Fe(0), Fe(1)]);
        assert_eq!(f.subfield(2).unwrap().len(), 4);
        assert_eq!(f.subfield(4).unwrap().len(), 16);
        assert!(f.subfield(3).is_err());
    }

    #[test]
    fn format_round_trip() {
        let f = Field::binary(4).unwrap();
        assert_eq!(f.format(Fe(11)), "0xb");
        assert_eq!(f.parse("0xb").unwrap(), Fe(11));
        assert!(f.parse("0x10").is_err());
        let g = Field::from_spec("17").unwrap();
        assert_eq!(g.format(Fe(11)), "11");
        assert_eq!(Field::from_spec("2^6").unwrap().order(), 64);
    }
}
