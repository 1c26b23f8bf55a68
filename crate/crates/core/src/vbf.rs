//! (n,m)-functions: truth tables, univariate and ANF construction,
//! restriction to subspaces, EA transforms and derivatives.
//!
//! Bit `i` of an input word is the ANF variable x_{i+1}. All inner products
//! are the standard dot product (parity of the bitwise AND).

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2n::{rank, FieldCtx, SubspaceBasis};

pub const MAX_INPUT_BITS: u32 = 24;
pub const MAX_OUTPUT_BITS: u32 = 32;

#[inline]
pub fn dot(a: u32, b: u32) -> u32 {
    (a & b).count_ones() & 1
}

/// Where a function came from. Only informational; never consulted by the
/// analysis routines.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub description: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modulus: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<u32>>,
    pub normalized: bool,
}

impl Provenance {
    pub fn described(description: impl Into<String>) -> Self {
        Provenance { description: description.into(), ..Default::default() }
    }
}

/// Truth table of an (n,m)-function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vbf {
    n: u32,
    m: u32,
    table: Vec<u32>,
    provenance: Provenance,
}

fn output_mask(m: u32) -> u64 {
    (1u64 << m) - 1
}

impl Vbf {
    pub fn from_truth_table(n: u32, m: u32, words: Vec<u32>) -> Result<Self> {
        if n == 0 || n > MAX_INPUT_BITS {
            return Err(Error::InvalidTable(format!("n must be in 1..={MAX_INPUT_BITS}, got {n}")));
        }
        if m == 0 || m > MAX_OUTPUT_BITS {
            return Err(Error::InvalidTable(format!("m must be in 1..={MAX_OUTPUT_BITS}, got {m}")));
        }
        if words.len() != 1usize << n {
            return Err(Error::InvalidTable(format!(
                "expected {} entries for n={n}, got {}",
                1usize << n,
                words.len()
            )));
        }
        if let Some((x, w)) = words.iter().enumerate().find(|(_, &w)| w as u64 > output_mask(m)) {
            return Err(Error::InvalidTable(format!("entry {x} = {w:#x} does not fit in {m} bits")));
        }
        Ok(Vbf { n, m, table: words, provenance: Provenance::default() })
    }

    /// (n,n)-function x -> sum of b_i x^i over the field.
    pub fn from_univariate(ctx: &FieldCtx, coeffs: &[(u64, u32)]) -> Result<Self> {
        let n = ctx.n();
        if n > MAX_INPUT_BITS {
            return Err(Error::InvalidArguments(format!("field degree {n} exceeds {MAX_INPUT_BITS}")));
        }
        if let Some(&(e, _)) = coeffs.iter().find(|(e, _)| *e >= ctx.order()) {
            return Err(Error::InvalidArguments(format!("exponent {e} out of range for GF(2^{n})")));
        }
        if let Some(&(_, c)) = coeffs.iter().find(|(_, c)| *c as u64 >= ctx.order()) {
            return Err(Error::InvalidArguments(format!("coefficient {c:#x} is not an element of GF(2^{n})")));
        }
        let table = (0..ctx.order() as u32)
            .map(|x| coeffs.iter().fold(0u32, |acc, &(e, c)| acc ^ ctx.mul(c, ctx.pow(x, e))))
            .collect();
        let terms: Vec<String> = coeffs.iter().map(|(e, c)| format!("{c:#x}*X^{e}")).collect();
        Ok(Vbf {
            n,
            m: n,
            table,
            provenance: Provenance {
                description: format!("univariate {}", terms.join(" + ")),
                modulus: Some(ctx.modulus()),
                ..Default::default()
            },
        })
    }

    pub fn from_anf(anf: &QuadraticAnf) -> Self {
        let table = (0..1u32 << anf.n).map(|x| anf.eval(x)).collect();
        Vbf { n: anf.n, m: anf.m, table, provenance: Provenance::described("quadratic anf") }
    }

    /// Rebuilds a function from a full ANF coefficient table (inverse Möbius).
    pub fn from_anf_table(n: u32, m: u32, mut coeffs: Vec<u32>) -> Result<Self> {
        if coeffs.len() != 1usize << n {
            return Err(Error::InvalidTable(format!("expected {} ANF coefficients", 1usize << n)));
        }
        moebius(&mut coeffs);
        Vbf::from_truth_table(n, m, coeffs)
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn into_table(self) -> Vec<u32> {
        self.table
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn domain_size(&self) -> usize {
        self.table.len()
    }

    /// 2^m as u64.
    pub fn codomain_size(&self) -> u64 {
        1u64 << self.m
    }

    #[inline]
    pub fn eval(&self, x: u32) -> u32 {
        self.table[x as usize]
    }

    pub fn derivative(&self, a: u32, x: u32) -> u32 {
        self.eval(x) ^ self.eval(x ^ a)
    }

    /// D^2_{a,b}F(x) = F(x) + F(x+a) + F(x+b) + F(x+a+b).
    #[inline]
    pub fn second_derivative(&self, a: u32, b: u32, x: u32) -> u32 {
        self.eval(x) ^ self.eval(x ^ a) ^ self.eval(x ^ b) ^ self.eval(x ^ a ^ b)
    }

    /// Möbius transform of the table: entry I is the ANF coefficient a_I.
    pub fn to_anf(&self) -> Vec<u32> {
        let mut coeffs = self.table.clone();
        moebius(&mut coeffs);
        coeffs
    }

    pub fn degree(&self) -> u32 {
        self.to_anf().iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, _)| i.count_ones()).max().unwrap_or(0)
    }

    pub fn is_quadratic(&self) -> bool {
        self.degree() <= 2
    }

    /// Coefficients of the quadratic ANF; fails on higher degree.
    pub fn to_quadratic_anf(&self) -> Result<QuadraticAnf> {
        let coeffs = self.to_anf();
        let mut anf = QuadraticAnf::zero(self.n, self.m)?;
        for (mask, &c) in coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mask = mask as u32;
            match mask.count_ones() {
                0 => anf.a_const = c,
                1 => anf.a_lin[mask.trailing_zeros() as usize] = c,
                2 => {
                    let i = mask.trailing_zeros();
                    let j = 31 - mask.leading_zeros();
                    anf.set_quad(i, j, c)?;
                }
                d => {
                    return Err(Error::Precondition(format!("function has degree {d} > 2")));
                }
            }
        }
        Ok(anf)
    }

    /// (k,m)-function y -> F(sum_i y_i basis_i).
    pub fn restrict(&self, basis: &SubspaceBasis) -> Result<Self> {
        if basis.ambient_n() != self.n {
            return Err(Error::InvalidBasis(format!(
                "basis lives in F_2^{}, function in F_2^{}",
                basis.ambient_n(),
                self.n
            )));
        }
        if basis.dim() == 0 {
            return Err(Error::InvalidBasis("cannot restrict to the zero subspace".into()));
        }
        let table = basis.span().map(|x| self.eval(x)).collect();
        let mut provenance = self.provenance.clone();
        provenance.description = format!("{} restricted to dim-{} subspace", provenance.description, basis.dim());
        provenance.basis = Some(basis.vectors().to_vec());
        provenance.normalized = false;
        Ok(Vbf { n: basis.dim(), m: self.m, table, provenance })
    }

    /// x -> F(x) + F(0).
    pub fn normalize(&self) -> Self {
        let c = self.table[0];
        let mut out = self.clone();
        if c != 0 {
            out.table.iter_mut().for_each(|w| *w ^= c);
        }
        out.provenance.normalized = true;
        out
    }

    pub fn is_normalized(&self) -> bool {
        self.table[0] == 0
    }

    /// x -> A1(F(A2(x))) + A(x).
    pub fn ea_transform(&self, a1: &AffineMap, a2: &AffineMap, add: &AffineMap) -> Result<Self> {
        if a1.dim_in != self.m || a1.dim_out != self.m {
            return Err(Error::InvalidAffine(format!("outer map must act on F_2^{}", self.m)));
        }
        if a2.dim_in != self.n || a2.dim_out != self.n {
            return Err(Error::InvalidAffine(format!("inner map must act on F_2^{}", self.n)));
        }
        if add.dim_in != self.n || add.dim_out != self.m {
            return Err(Error::InvalidAffine(format!("added map must go F_2^{} -> F_2^{}", self.n, self.m)));
        }
        if !a1.is_invertible() || !a2.is_invertible() {
            return Err(Error::InvalidAffine("outer and inner maps must be permutations".into()));
        }
        let table = (0..self.table.len() as u32).map(|x| a1.apply(self.eval(a2.apply(x))) ^ add.apply(x)).collect();
        let mut provenance = self.provenance.clone();
        provenance.description = format!("EA transform of {}", provenance.description);
        provenance.normalized = false;
        Ok(Vbf { n: self.n, m: self.m, table, provenance })
    }

    pub fn image_size(&self) -> usize {
        let mut v = self.table.clone();
        v.sort_unstable();
        v.dedup();
        v.len()
    }
}

/// In-place binary Möbius transform; an involution.
pub fn moebius(t: &mut [u32]) {
    let len = t.len();
    let mut h = 1;
    while h < len {
        for start in (0..len).step_by(2 * h) {
            for x in start..start + h {
                t[x + h] ^= t[x];
            }
        }
        h *= 2;
    }
}

/// F(x) = sum_{i<j} a_{i,j} x_i x_j + sum_k a_k x_k + a_0.
///
/// Indices are 0-based here (variable `i` is bit `i`); the text file format
/// is 1-based. `a_{i,j}` reads symmetrically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticAnf {
    n: u32,
    m: u32,
    /// row-major n*n, only i < j populated
    quad: Vec<u32>,
    a_lin: Vec<u32>,
    a_const: u32,
}

impl QuadraticAnf {
    pub fn zero(n: u32, m: u32) -> Result<Self> {
        if n == 0 || n > MAX_INPUT_BITS || m == 0 || m > MAX_OUTPUT_BITS {
            return Err(Error::InvalidArguments(format!("bad ANF dimensions ({n},{m})")));
        }
        Ok(QuadraticAnf { n, m, quad: vec![0; (n * n) as usize], a_lin: vec![0; n as usize], a_const: 0 })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    fn check_word(&self, w: u32) -> Result<()> {
        if w as u64 > output_mask(self.m) {
            return Err(Error::InvalidArguments(format!("coefficient {w:#x} exceeds {} bits", self.m)));
        }
        Ok(())
    }

    pub fn quad(&self, i: u32, j: u32) -> u32 {
        if i == j {
            return 0;
        }
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        self.quad[(i * self.n + j) as usize]
    }

    pub fn set_quad(&mut self, i: u32, j: u32, w: u32) -> Result<()> {
        if i == j || i >= self.n || j >= self.n {
            return Err(Error::InvalidArguments(format!("bad quadratic index pair ({i},{j})")));
        }
        self.check_word(w)?;
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        self.quad[(i * self.n + j) as usize] = w;
        Ok(())
    }

    pub fn lin(&self, k: u32) -> u32 {
        self.a_lin[k as usize]
    }

    pub fn set_lin(&mut self, k: u32, w: u32) -> Result<()> {
        if k >= self.n {
            return Err(Error::InvalidArguments(format!("linear index {k} out of range")));
        }
        self.check_word(w)?;
        self.a_lin[k as usize] = w;
        Ok(())
    }

    pub fn constant(&self) -> u32 {
        self.a_const
    }

    pub fn set_constant(&mut self, w: u32) -> Result<()> {
        self.check_word(w)?;
        self.a_const = w;
        Ok(())
    }

    /// Nonzero quadratic terms (i, j, a_{i,j}) with i < j.
    pub fn quad_terms(&self) -> impl Iterator<Item = (u32, u32, u32)> + '_ {
        (0..self.n).flat_map(move |i| {
            (i + 1..self.n).filter_map(move |j| {
                let w = self.quad(i, j);
                (w != 0).then_some((i, j, w))
            })
        })
    }

    pub fn eval(&self, x: u32) -> u32 {
        let mut acc = self.a_const;
        let mut bits = x;
        while bits != 0 {
            let i = bits.trailing_zeros();
            bits &= bits - 1;
            acc ^= self.a_lin[i as usize];
            let mut rest = bits;
            while rest != 0 {
                let j = rest.trailing_zeros();
                rest &= rest - 1;
                acc ^= self.quad[(i * self.n + j) as usize];
            }
        }
        acc
    }

    /// D^2_{alpha,beta}F(0) = sum_{i != j} alpha_i beta_j a_{i,j}.
    pub fn second_derivative_at_zero(&self, alpha: u32, beta: u32) -> u32 {
        let mut acc = 0u32;
        let mut a = alpha;
        while a != 0 {
            let i = a.trailing_zeros();
            a &= a - 1;
            let mut b = beta & !(1u32 << i);
            while b != 0 {
                let j = b.trailing_zeros();
                b &= b - 1;
                acc ^= self.quad(i, j);
            }
        }
        acc
    }
}

/// x -> (matrix . x) + offset, where matrix . x is the XOR of the columns
/// selected by the set bits of x (column i is the image of e_i).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineMap {
    pub dim_in: u32,
    pub dim_out: u32,
    pub columns: Vec<u32>,
    pub offset: u32,
}

impl AffineMap {
    pub fn new(dim_in: u32, dim_out: u32, columns: Vec<u32>, offset: u32) -> Result<Self> {
        if columns.len() != dim_in as usize {
            return Err(Error::InvalidAffine(format!("need {dim_in} columns, got {}", columns.len())));
        }
        let mask = output_mask(dim_out);
        if columns.iter().chain(std::iter::once(&offset)).any(|&c| c as u64 > mask) {
            return Err(Error::InvalidAffine(format!("entries must fit in {dim_out} bits")));
        }
        Ok(AffineMap { dim_in, dim_out, columns, offset })
    }

    pub fn identity(dim: u32) -> Self {
        AffineMap { dim_in: dim, dim_out: dim, columns: (0..dim).map(|i| 1u32 << i).collect(), offset: 0 }
    }

    pub fn zero(dim_in: u32, dim_out: u32) -> Self {
        AffineMap { dim_in, dim_out, columns: vec![0; dim_in as usize], offset: 0 }
    }

    pub fn apply(&self, x: u32) -> u32 {
        let mut acc = self.offset;
        let mut bits = x;
        while bits != 0 {
            acc ^= self.columns[bits.trailing_zeros() as usize];
            bits &= bits - 1;
        }
        acc
    }

    pub fn is_invertible(&self) -> bool {
        self.dim_in == self.dim_out && rank(&self.columns) == self.dim_in as usize
    }

    pub fn random<R: Rng + ?Sized>(dim_in: u32, dim_out: u32, rng: &mut R) -> Self {
        let mask = output_mask(dim_out) as u32;
        let columns = (0..dim_in).map(|_| rng.gen::<u32>() & mask).collect();
        AffineMap { dim_in, dim_out, columns, offset: rng.gen::<u32>() & mask }
    }

    pub fn random_invertible<R: Rng + ?Sized>(dim: u32, rng: &mut R) -> Self {
        loop {
            let a = AffineMap::random(dim, dim, rng);
            if a.is_invertible() {
                return a;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_table(n: u32, m: u32, rng: &mut ChaCha8Rng) -> Vbf {
        let mask = output_mask(m) as u32;
        Vbf::from_truth_table(n, m, (0..1u32 << n).map(|_| rng.gen::<u32>() & mask).collect()).unwrap()
    }

    fn random_quadratic(n: u32, m: u32, rng: &mut ChaCha8Rng) -> QuadraticAnf {
        let mask = output_mask(m) as u32;
        let mut anf = QuadraticAnf::zero(n, m).unwrap();
        for i in 0..n {
            anf.set_lin(i, rng.gen::<u32>() & mask).unwrap();
            for j in i + 1..n {
                anf.set_quad(i, j, rng.gen::<u32>() & mask).unwrap();
            }
        }
        anf.set_constant(rng.gen::<u32>() & mask).unwrap();
        anf
    }

    #[test]
    fn truth_table_validation() {
        let id = Vbf::from_truth_table(1, 1, vec![0, 1]).unwrap();
        assert_eq!(id.table(), &[0, 1]);
        let zero = Vbf::from_truth_table(2, 2, vec![0; 4]).unwrap();
        assert_eq!(zero.degree(), 0);
        assert!(matches!(Vbf::from_truth_table(2, 2, vec![0; 3]), Err(Error::InvalidTable(_))));
        assert!(matches!(Vbf::from_truth_table(2, 2, vec![0, 4, 0, 0]), Err(Error::InvalidTable(_))));
        assert!(Vbf::from_truth_table(1, 32, vec![0, u32::MAX]).is_ok());
    }

    #[test]
    fn univariate_examples() {
        let f3 = FieldCtx::new(3, None).unwrap();
        let cube = Vbf::from_univariate(&f3, &[(3, 1)]).unwrap();
        assert_eq!(cube.eval(1), 1);
        for x in 0..8 {
            assert_eq!(cube.eval(x), f3.mul(x, f3.mul(x, x)));
        }
        let id = Vbf::from_univariate(&f3, &[(1, 1)]).unwrap();
        assert_eq!(id.table(), &(0..8).collect::<Vec<_>>()[..]);
        assert!(Vbf::from_univariate(&f3, &[(8, 1)]).is_err());
    }

    #[test]
    fn anf_examples() {
        let zero = Vbf::from_anf(&QuadraticAnf::zero(3, 2).unwrap());
        assert!(zero.table().iter().all(|&w| w == 0));
        let mut anf = QuadraticAnf::zero(2, 3).unwrap();
        anf.set_quad(0, 1, 5).unwrap();
        assert_eq!(Vbf::from_anf(&anf).table(), &[0, 0, 0, 5]);
        assert_eq!(anf.quad(1, 0), 5);
        assert!(anf.set_quad(1, 1, 1).is_err());
    }

    #[test]
    fn gold_degree_and_inverse_degree() {
        for n in 3..=8 {
            let f = FieldCtx::new(n, None).unwrap();
            let g = Vbf::from_univariate(&f, &[(3, 1)]).unwrap();
            assert_eq!(g.degree(), 2);
            assert!(g.is_quadratic());
        }
        let f5 = FieldCtx::new(5, None).unwrap();
        let inv = Vbf::from_univariate(&f5, &[(30, 1)]).unwrap();
        assert_eq!(inv.degree(), 4);
        assert!(!inv.is_quadratic());
        let constant = Vbf::from_truth_table(3, 2, vec![3; 8]).unwrap();
        assert!(constant.is_quadratic());
        assert_eq!(constant.degree(), 0);
        let affine = Vbf::from_truth_table(2, 2, vec![1, 2, 1, 2]).unwrap();
        assert_eq!(affine.degree(), 1);
    }

    #[test]
    fn anf_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let n = rng.gen_range(2..=7);
            let m = rng.gen_range(1..=9);
            let anf = random_quadratic(n, m, &mut rng);
            let f = Vbf::from_anf(&anf);
            assert_eq!(f.to_quadratic_anf().unwrap(), anf);
            assert!(f.is_quadratic());
        }
        for _ in 0..20 {
            let f = random_table(6, 8, &mut rng);
            let mut t = f.to_anf();
            moebius(&mut t);
            assert_eq!(t, f.table());
            assert_eq!(Vbf::from_anf_table(6, 8, f.to_anf()).unwrap(), f);
        }
    }

    #[test]
    fn quadratic_second_derivative_is_constant() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let anf = random_quadratic(6, 7, &mut rng);
            let f = Vbf::from_anf(&anf);
            for _ in 0..20 {
                let (a, b) = (rng.gen_range(0..64), rng.gen_range(0..64));
                let d0 = f.second_derivative(a, b, 0);
                assert_eq!(d0, anf.second_derivative_at_zero(a, b));
                assert!((0..64).all(|x| f.second_derivative(a, b, x) == d0));
            }
        }
    }

    #[test]
    fn second_derivative_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=6 {
            let f = random_table(n, 5, &mut rng);
            let size = 1u32 << n;
            for a in 0..size {
                assert_eq!(f.second_derivative(a, 0, 3 % size), 0);
                assert_eq!(f.second_derivative(0, a, 1 % size), 0);
                assert_eq!(f.second_derivative(a, a, 0), 0);
                for b in 0..size {
                    for x in 0..size {
                        let d = f.second_derivative(a, b, x);
                        assert_eq!(d, f.second_derivative(b, a, x));
                        assert_eq!(d, f.second_derivative(a, b, x ^ a));
                        assert_eq!(d, f.second_derivative(a, b, x ^ b));
                        assert_eq!(d, f.derivative(a, x) ^ f.derivative(a, x ^ b));
                    }
                }
            }
        }
    }

    #[test]
    fn restriction() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = random_table(5, 6, &mut rng);
        assert_eq!(f.restrict(&SubspaceBasis::standard(5, 5)).unwrap().table(), f.table());
        let basis = SubspaceBasis::new(5, vec![0b00011, 0b01100, 0b10001]).unwrap();
        let r = f.restrict(&basis).unwrap();
        assert_eq!((r.n(), r.m()), (3, 6));
        for y in 0..8 {
            assert_eq!(r.eval(y), f.eval(basis.element(y)));
        }
        assert!(r.image_size() <= f.image_size());
        assert!(matches!(f.restrict(&SubspaceBasis::standard(4, 4)), Err(Error::InvalidBasis(_))));
    }

    #[test]
    fn normalization() {
        let f = Vbf::from_truth_table(2, 3, vec![0, 1, 2, 4]).unwrap();
        assert_eq!(f.normalize().table(), f.table());
        let c = Vbf::from_truth_table(2, 3, vec![5; 4]).unwrap();
        assert!(c.normalize().table().iter().all(|&w| w == 0));
        assert!(c.normalize().provenance().normalized);
    }

    #[test]
    fn ea_transform_basics() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let f = random_table(4, 5, &mut rng);
        let same = f.ea_transform(&AffineMap::identity(5), &AffineMap::identity(4), &AffineMap::zero(4, 5)).unwrap();
        assert_eq!(same.table(), f.table());
        let singular = AffineMap::new(4, 4, vec![1, 2, 3, 0], 0).unwrap();
        assert!(matches!(
            f.ea_transform(&AffineMap::identity(5), &singular, &AffineMap::zero(4, 5)),
            Err(Error::InvalidAffine(_))
        ));
        let a = AffineMap::random(4, 5, &mut rng);
        for x in 0..16u32 {
            for y in 0..16u32 {
                // affine: A(x)+A(y)+A(x+y) = A(0)
                assert_eq!(a.apply(x) ^ a.apply(y) ^ a.apply(x ^ y), a.apply(0));
            }
        }
    }
}
