//! Binary field arithmetic over GF(2^n), traces, and subspace bases.
//!
//! Elements are words in the polynomial basis {1, x, ..., x^{n-1}}: bit `i`
//! of a word is the coefficient of x^i.

use crate::error::{Error, Result};

pub const MAX_FIELD_BITS: u32 = 32;

/// Carry-less product of two polynomials whose degrees sum to at most 63.
fn clmul(a: u64, b: u64) -> u64 {
    let mut acc = 0u64;
    let mut a = a;
    let mut b = b;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        a <<= 1;
        b >>= 1;
    }
    acc
}

fn poly_degree(p: u64) -> i32 {
    63 - p.leading_zeros() as i32
}

/// Remainder of `a` modulo `m` (m != 0).
fn poly_rem(mut a: u64, m: u64) -> u64 {
    let dm = poly_degree(m);
    while a != 0 && poly_degree(a) >= dm {
        a ^= m << (poly_degree(a) - dm);
    }
    a
}

fn poly_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = poly_rem(a, b);
        a = b;
        b = r;
    }
    a
}

fn poly_mulmod(a: u64, b: u64, m: u64) -> u64 {
    poly_rem(clmul(a, b), m)
}

/// Ben-Or irreducibility test for a polynomial of degree `n` over F_2.
pub fn is_irreducible(poly: u64, n: u32) -> bool {
    if n == 0 || poly_degree(poly) != n as i32 {
        return false;
    }
    if n == 1 {
        return true;
    }
    // x^{2^i} mod poly for i = 1..=n/2; gcd(poly, x^{2^i} - x) must be 1.
    let x = 0b10u64;
    let mut power = x;
    for _ in 1..=n / 2 {
        power = poly_mulmod(power, power, poly);
        if poly_gcd(poly, power ^ x) != 1 {
            return false;
        }
    }
    true
}

/// Renders a polynomial word as "x^3+x+1".
pub fn poly_string(poly: u64) -> String {
    let mut terms = Vec::new();
    for i in (0..64).rev() {
        if poly >> i & 1 == 1 {
            terms.push(match i {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            });
        }
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}

/// Arithmetic context for GF(2^n).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldCtx {
    n: u32,
    modulus: u64,
    generator_checked: bool,
    /// bit i set iff Tr(x^i) = 1
    trace_mask: u32,
}

impl FieldCtx {
    /// Builds GF(2^n). Without a modulus, the smallest irreducible polynomial
    /// of degree `n` with nonzero constant term is used.
    pub fn new(n: u32, modulus: Option<u64>) -> Result<Self> {
        if n == 0 || n > MAX_FIELD_BITS {
            return Err(Error::InvalidArguments(format!("field degree must be in 1..={MAX_FIELD_BITS}, got {n}")));
        }
        let modulus = match modulus {
            Some(m) => {
                if poly_degree(m) != n as i32 {
                    return Err(Error::InvalidModulus { n, modulus: m, reason: "degree differs from n" });
                }
                if !is_irreducible(m, n) {
                    return Err(Error::InvalidModulus { n, modulus: m, reason: "reducible over F_2" });
                }
                m
            }
            None => {
                let start = (1u64 << n) | 1;
                let end = 1u64 << (n + 1);
                (start..end)
                    .step_by(2)
                    .find(|&p| is_irreducible(p, n))
                    .expect("irreducible polynomials exist in every degree")
            }
        };
        let mut ctx = FieldCtx { n, modulus, generator_checked: true, trace_mask: 0 };
        let mut mask = 0u32;
        for i in 0..n {
            if ctx.trace_by_powers(1u32 << i) == 1 {
                mask |= 1 << i;
            }
        }
        ctx.trace_mask = mask;
        Ok(ctx)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn generator_checked(&self) -> bool {
        self.generator_checked
    }

    pub fn modulus_hex(&self) -> String {
        format!("{:#x}", self.modulus)
    }

    pub fn modulus_poly(&self) -> String {
        poly_string(self.modulus)
    }

    /// Number of field elements, 2^n.
    pub fn order(&self) -> u64 {
        1u64 << self.n
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        debug_assert!((a as u64) < self.order() && (b as u64) < self.order());
        poly_mulmod(a as u64, b as u64, self.modulus) as u32
    }

    pub fn square(&self, a: u32) -> u32 {
        self.mul(a, a)
    }

    /// a^e by square-and-multiply. `pow(0, 0) == 1`.
    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e != 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `inv(0)` is 0.
    pub fn inv(&self, a: u32) -> u32 {
        if a == 0 {
            return 0;
        }
        self.pow(a, self.order() - 2)
    }

    fn trace_by_powers(&self, a: u32) -> u32 {
        let mut acc = 0u32;
        let mut p = a;
        for _ in 0..self.n {
            acc ^= p;
            p = self.square(p);
        }
        debug_assert!(acc <= 1);
        acc
    }

    /// Absolute trace Tr_n(a) in {0, 1}.
    pub fn abs_trace(&self, a: u32) -> u32 {
        (a & self.trace_mask).count_ones() & 1
    }

    /// Linear form mask of x -> Tr(alpha * x): bit i set iff Tr(alpha x^i) = 1.
    pub fn trace_form(&self, alpha: u32) -> u32 {
        let mut mask = 0u32;
        for i in 0..self.n {
            if self.abs_trace(self.mul(alpha, 1u32 << i)) == 1 {
                mask |= 1 << i;
            }
        }
        mask
    }

    /// The subfield GF(2^m) of this field, when `m | n`.
    pub fn subfield(&self, m: u32) -> Result<Subfield> {
        if m == 0 || !self.n.is_multiple_of(m) {
            return Err(Error::InvalidArguments(format!("{m} does not divide {}", self.n)));
        }
        let mut images: Vec<u32> = (0..self.n).map(|i| self.rel_trace_element(m, 1u32 << i)).collect();
        let pivots = reduce_echelon(&mut images);
        debug_assert_eq!(pivots.len() as u32, m, "relative trace is onto the subfield");
        Ok(Subfield { m, pivots })
    }

    /// Tr^n_m(a) as an element of GF(2^n).
    pub fn rel_trace_element(&self, m: u32, a: u32) -> u32 {
        let mut acc = 0u32;
        let mut p = a;
        for _ in 0..self.n / m {
            acc ^= p;
            for _ in 0..m {
                p = self.square(p);
            }
        }
        acc
    }

    /// Tr^n_m(a) as an m-bit word in the subfield coordinates of [`Subfield`].
    pub fn rel_trace(&self, m: u32, a: u32) -> Result<u32> {
        let sub = self.subfield(m)?;
        Ok(sub.coords(self.rel_trace_element(m, a)))
    }

    /// Basis of T_0 = {x : Tr(x) = 0}.
    pub fn trace_zero_basis(&self) -> SubspaceBasis {
        kernel_basis(self.n, self.trace_mask)
    }

    /// Basis of H_alpha = {x : Tr(alpha x) = 0}.
    pub fn hyperplane_basis(&self, alpha: u32) -> Result<SubspaceBasis> {
        if alpha == 0 || alpha as u64 >= self.order() {
            return Err(Error::InvalidArguments(format!("hyperplane needs a nonzero field element, got {alpha:#x}")));
        }
        Ok(kernel_basis(self.n, self.trace_form(alpha)))
    }
}

/// GF(2^m) inside GF(2^n), with coordinates over the reduced echelon basis of
/// the subfield: the coordinate of an element is the vector of its bits at the
/// pivot positions, in increasing order. For m = n this is the identity.
#[derive(Debug, Clone)]
pub struct Subfield {
    m: u32,
    pivots: Vec<u32>,
}

impl Subfield {
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn coords(&self, elem: u32) -> u32 {
        self.pivots.iter().enumerate().fold(0u32, |acc, (k, &p)| acc | ((elem >> p) & 1) << k)
    }
}

/// Reduces `rows` in place to a reduced echelon form (pivot = lowest set bit)
/// and returns the sorted pivot positions. Zero rows are dropped.
fn reduce_echelon(rows: &mut Vec<u32>) -> Vec<u32> {
    let mut basis: Vec<u32> = Vec::new();
    for &r in rows.iter() {
        let mut v = r;
        for &b in &basis {
            if v >> b.trailing_zeros() & 1 == 1 {
                v ^= b;
            }
        }
        if v != 0 {
            let p = v.trailing_zeros();
            for b in basis.iter_mut() {
                if *b >> p & 1 == 1 {
                    *b ^= v;
                }
            }
            basis.push(v);
        }
    }
    basis.sort_by_key(|b| b.trailing_zeros());
    let pivots = basis.iter().map(|b| b.trailing_zeros()).collect();
    *rows = basis;
    pivots
}

/// Null space of the linear form x -> parity(x & form), pivot = lowest set bit
/// of the form, basis ordered by increasing free bit index.
fn kernel_basis(n: u32, form: u32) -> SubspaceBasis {
    let vectors = if form == 0 {
        (0..n).map(|i| 1u32 << i).collect()
    } else {
        let pivot = form.trailing_zeros();
        (0..n)
            .filter(|&i| i != pivot)
            .map(|i| if form >> i & 1 == 1 { (1u32 << i) | (1u32 << pivot) } else { 1u32 << i })
            .collect()
    };
    SubspaceBasis { ambient_n: n, vectors }
}

/// An ordered list of linearly independent vectors of F_2^n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceBasis {
    ambient_n: u32,
    vectors: Vec<u32>,
}

impl SubspaceBasis {
    pub fn new(ambient_n: u32, vectors: Vec<u32>) -> Result<Self> {
        if ambient_n > MAX_FIELD_BITS {
            return Err(Error::InvalidBasis(format!("ambient dimension {ambient_n} too large")));
        }
        if let Some(v) = vectors.iter().find(|&&v| ambient_n < 32 && v >> ambient_n != 0) {
            return Err(Error::InvalidBasis(format!("vector {v:#x} outside F_2^{ambient_n}")));
        }
        if rank(&vectors) != vectors.len() {
            return Err(Error::InvalidBasis(format!("{} vectors are linearly dependent", vectors.len())));
        }
        Ok(SubspaceBasis { ambient_n, vectors })
    }

    /// The standard basis e_0, ..., e_{k-1} of F_2^n.
    pub fn standard(ambient_n: u32, k: u32) -> Self {
        SubspaceBasis { ambient_n, vectors: (0..k.min(ambient_n)).map(|i| 1u32 << i).collect() }
    }

    pub fn ambient_n(&self) -> u32 {
        self.ambient_n
    }

    pub fn dim(&self) -> u32 {
        self.vectors.len() as u32
    }

    pub fn vectors(&self) -> &[u32] {
        &self.vectors
    }

    /// The span element with coordinates `y` (bit i selects vector i).
    pub fn element(&self, y: u32) -> u32 {
        let mut acc = 0u32;
        let mut y = y;
        while y != 0 {
            acc ^= self.vectors[y.trailing_zeros() as usize];
            y &= y - 1;
        }
        acc
    }

    /// All 2^k span elements, indexed by coordinate word.
    pub fn span(&self) -> impl Iterator<Item = u32> + '_ {
        (0..1u64 << self.dim()).map(move |y| self.element(y as u32))
    }
}

/// Rank over F_2 of a set of words.
pub fn rank(vectors: &[u32]) -> usize {
    let mut rows = vectors.to_vec();
    reduce_echelon(&mut rows).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    /// Schoolbook irreducibility: no factor of degree 1..=n/2 divides p.
    fn irreducible_by_division(p: u64, n: u32) -> bool {
        (2u64..(1 << (n / 2 + 1))).all(|d| poly_degree(d) < 1 || poly_rem(p, d) != 0)
    }

    #[test]
    fn default_moduli() {
        assert_eq!(FieldCtx::new(3, None).unwrap().modulus(), 0b1011);
        assert_eq!(FieldCtx::new(1, None).unwrap().modulus(), 0b11);
        assert_eq!(FieldCtx::new(3, None).unwrap().modulus_poly(), "x^3+x+1");
        assert!(FieldCtx::new(8, Some(0b1_0001_1011)).is_ok());
    }

    #[test]
    fn smallest_irreducible_matches_division_oracle() {
        for n in 2..=12u32 {
            let expected =
                ((1u64 << n) | 1..1u64 << (n + 1)).step_by(2).find(|&p| irreducible_by_division(p, n)).unwrap();
            assert_eq!(FieldCtx::new(n, None).unwrap().modulus(), expected, "n={n}");
        }
    }

    #[test]
    fn ben_or_agrees_with_division() {
        for n in 1..=10u32 {
            for p in (1u64 << n)..(1u64 << (n + 1)) {
                assert_eq!(is_irreducible(p, n), irreducible_by_division(p, n), "p={p:#b}");
            }
        }
    }

    #[test]
    fn rejects_bad_moduli() {
        assert!(matches!(FieldCtx::new(3, Some(0b1001)), Err(Error::InvalidModulus { .. })));
        assert!(matches!(FieldCtx::new(3, Some(0b111)), Err(Error::InvalidModulus { .. })));
        assert!(FieldCtx::new(0, None).is_err());
        assert!(FieldCtx::new(33, None).is_err());
        assert!(FieldCtx::new(32, None).is_ok());
    }

    #[test]
    fn mul_examples() {
        let f = FieldCtx::new(3, None).unwrap();
        assert_eq!(f.mul(0b010, 0b100), 0b011);
        for a in 0..8 {
            assert_eq!(f.mul(a, 1), a);
            assert_eq!(f.mul(a, 0), 0);
        }
    }

    #[test]
    fn pow_examples() {
        let f = FieldCtx::new(3, None).unwrap();
        assert_eq!(f.pow(0b10, 7), 1);
        assert_eq!(f.pow(0, 3), 0);
        assert_eq!(f.pow(0, 0), 1);
        for a in 0..8 {
            assert_eq!(f.pow(a, 1), a);
        }
    }

    #[test]
    fn lagrange_exhaustive() {
        for n in 1..=12 {
            let f = FieldCtx::new(n, None).unwrap();
            for a in 1..f.order() as u32 {
                assert_eq!(f.pow(a, f.order() - 1), 1);
                assert_eq!(f.mul(a, f.inv(a)), 1);
            }
        }
    }

    #[test]
    fn trace_examples() {
        let f = FieldCtx::new(3, None).unwrap();
        assert_eq!(f.abs_trace(0), 0);
        assert_eq!(f.abs_trace(1), 1);
        for n in 1..=12 {
            let f = FieldCtx::new(n, None).unwrap();
            let zeros = (0..f.order() as u32).filter(|&a| f.abs_trace(a) == 0).count();
            assert_eq!(zeros as u64, f.order() / 2);
            assert_eq!(f.abs_trace(1), n % 2);
            for a in 0..f.order() as u32 {
                assert_eq!(f.abs_trace(a), f.trace_by_powers(a));
            }
        }
    }

    #[test]
    fn relative_trace() {
        let f = FieldCtx::new(4, None).unwrap();
        for a in 0..16 {
            assert_eq!(f.rel_trace(4, a).unwrap(), a);
            assert_eq!(f.rel_trace(1, a).unwrap(), f.abs_trace(a));
        }
        let image: HashSet<u32> = (0..16).map(|a| f.rel_trace(2, a).unwrap()).collect();
        assert_eq!(image, (0..4).collect());
        let image: HashSet<u32> = (0..16).map(|a| f.rel_trace_element(2, a)).collect();
        assert_eq!(image.len(), 4);
        for &t in &image {
            assert_eq!(f.pow(t, 4), t, "image lies in GF(4)");
        }
        assert!(matches!(f.rel_trace(3, 1), Err(Error::InvalidArguments(_))));
    }

    #[test]
    fn trace_zero_basis_properties() {
        let f = FieldCtx::new(3, None).unwrap();
        assert_eq!(f.trace_zero_basis().dim(), 2);
        for n in 2..=12 {
            let f = FieldCtx::new(n, None).unwrap();
            let b = f.trace_zero_basis();
            assert_eq!(b.dim(), n - 1);
            let span: HashSet<u32> = b.span().collect();
            assert_eq!(span.len() as u64, f.order() / 2);
            assert!(span.iter().all(|&x| f.abs_trace(x) == 0));
            assert_eq!(b, f.trace_zero_basis());
        }
    }

    #[test]
    fn hyperplane_bases() {
        for n in 2..=9 {
            let f = FieldCtx::new(n, None).unwrap();
            assert_eq!(f.hyperplane_basis(1).unwrap(), f.trace_zero_basis());
            for alpha in 1..f.order() as u32 {
                let b = f.hyperplane_basis(alpha).unwrap();
                assert_eq!(b.dim(), n - 1);
                let span: HashSet<u32> = b.span().collect();
                assert_eq!(span.len() as u64, f.order() / 2);
                for &x in &span {
                    assert_eq!(f.abs_trace(f.mul(alpha, x)), 0);
                    for &y in &span {
                        assert!(span.contains(&(x ^ y)));
                    }
                }
            }
            assert!(matches!(f.hyperplane_basis(0), Err(Error::InvalidArguments(_))));
        }
    }

    #[test]
    fn basis_validation() {
        assert!(SubspaceBasis::new(3, vec![1, 2, 3]).is_err());
        assert!(SubspaceBasis::new(3, vec![1, 2, 4]).is_ok());
        assert!(SubspaceBasis::new(3, vec![8]).is_err());
        assert_eq!(rank(&[3, 5, 6]), 2);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]
            #[test]
            fn field_axioms(n in 1u32..=16, seeds in proptest::collection::vec(any::<(u32, u32, u32)>(), 160)) {
                // 64 cases x 160 triples = 10240 triples
                let f = FieldCtx::new(n, None).unwrap();
                let mask = (f.order() - 1) as u32;
                for (a, b, c) in seeds {
                    let (a, b, c) = (a & mask, b & mask, c & mask);
                    prop_assert_eq!(f.mul(a, b ^ c), f.mul(a, b) ^ f.mul(a, c));
                    prop_assert_eq!(f.mul(a, b), f.mul(b, a));
                    prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                }
            }

            #[test]
            fn trace_is_linear(n in 1u32..=20, a in any::<u32>(), b in any::<u32>()) {
                let f = FieldCtx::new(n, None).unwrap();
                let mask = (f.order() - 1) as u32;
                let (a, b) = (a & mask, b & mask);
                prop_assert_eq!(f.abs_trace(a ^ b), f.abs_trace(a) ^ f.abs_trace(b));
            }
        }
    }
}
