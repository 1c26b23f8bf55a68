//! Naive reference computations shared by the integration tests. They use
//! only the truth table and the definitions, never the library's algorithms.
#![allow(dead_code)]

use std::collections::HashSet;

use dillonlab::vbf::Vbf;

pub fn parity(x: u32) -> i64 {
    (x.count_ones() & 1) as i64
}

/// Values of F_2^m not of the form F(x)+F(y)+F(z)+F(x+y+z) with x, y, z in
/// `points` (a set closed under addition).
pub fn triple_missing(eval: impl Fn(u32) -> u32, points: &[u32], m: u32) -> Vec<u32> {
    let mut seen = vec![false; 1 << m];
    let mut left = 1usize << m;
    'outer: for &x in points {
        for &y in points {
            let fxy = eval(x) ^ eval(y);
            for &z in points {
                let w = (fxy ^ eval(z) ^ eval(x ^ y ^ z)) as usize;
                if !seen[w] {
                    seen[w] = true;
                    left -= 1;
                    if left == 0 {
                        break 'outer;
                    }
                }
            }
        }
    }
    unseen(&seen)
}

/// Same with F(0)+F(a)+F(b)+F(a+b); equals the triple form for quadratic F
/// because every second derivative is constant.
pub fn pair_missing(eval: impl Fn(u32) -> u32, points: &[u32], m: u32) -> Vec<u32> {
    let f0 = eval(0);
    let mut seen = vec![false; 1 << m];
    let mut left = 1usize << m;
    for &a in points {
        let fa = f0 ^ eval(a);
        for &b in points {
            let w = (fa ^ eval(b) ^ eval(a ^ b)) as usize;
            if !seen[w] {
                seen[w] = true;
                left -= 1;
                if left == 0 {
                    return Vec::new();
                }
            }
        }
    }
    unseen(&seen)
}

fn unseen(seen: &[bool]) -> Vec<u32> {
    (0..seen.len() as u32).filter(|&w| !seen[w as usize]).collect()
}

pub fn all_points(n: u32) -> Vec<u32> {
    (0..1u32 << n).collect()
}

/// Missing set of the D-property straight from the definition.
pub fn naive_missing(f: &Vbf) -> Vec<u32> {
    triple_missing(|x| f.eval(x), &all_points(f.n()), f.m())
}

pub fn naive_delta(eval: impl Fn(u32) -> u32, points: &[u32]) -> u32 {
    let mut best = 0;
    for &a in points.iter().filter(|&&a| a != 0) {
        let mut seen = std::collections::HashMap::new();
        for &x in points {
            *seen.entry(eval(x) ^ eval(x ^ a)).or_insert(0u32) += 1;
        }
        best = best.max(*seen.values().max().unwrap());
    }
    best
}

pub fn naive_walsh(f: &Vbf, u: u32, v: u32) -> i64 {
    (0..1u32 << f.n()).map(|x| 1 - 2 * parity((v & f.eval(x)) ^ (u & x))).sum()
}

/// Number of 2-dimensional affine (or, with `vector`, linear) subspaces of
/// F_2^n, by collecting the distinct 4-sets.
pub fn enumerate_planes(n: u32, vector: bool) -> usize {
    let size = 1u32 << n;
    let mut set: HashSet<[u32; 4]> = HashSet::new();
    let xs: Vec<u32> = if vector { vec![0] } else { all_points(n) };
    for &x in &xs {
        for p in 1..size {
            for q in p + 1..size {
                let mut pl = [x, x ^ p, x ^ q, x ^ p ^ q];
                pl.sort_unstable();
                set.insert(pl);
            }
        }
    }
    set.len()
}

/// Elements of the trace-zero hyperplane of GF(2^n1) under `mul`.
pub fn trace_zero_points(n1: u32, mul: impl Fn(u32, u32) -> u32) -> Vec<u32> {
    (0..1u32 << n1)
        .filter(|&x| {
            let mut t = 0;
            let mut y = x;
            for _ in 0..n1 {
                t ^= y;
                y = mul(y, y);
            }
            t == 0
        })
        .collect()
}

/// Shift-and-add multiplication in GF(2)[x] / (modulus), modulus of degree n.
pub fn gf_mul(a: u32, b: u32, modulus: u64, n: u32) -> u32 {
    let (mut a, mut r) = (a as u64, 0u64);
    for i in 0..n {
        if b >> i & 1 == 1 {
            r ^= a;
        }
        a <<= 1;
        if a >> n & 1 == 1 {
            a ^= modulus;
        }
    }
    r as u32
}

pub fn gf_trace(x: u32, modulus: u64, n: u32) -> u32 {
    let (mut t, mut y) = (0, x);
    for _ in 0..n {
        t ^= y;
        y = gf_mul(y, y, modulus, n);
    }
    t
}

/// Table of X^3 (plus Tr(X^9) when `with_trace`) over GF(2^n) built from scratch.
pub fn cube_table(n: u32, modulus: u64, with_trace: bool) -> Vec<u32> {
    (0..1u32 << n)
        .map(|x| {
            let x2 = gf_mul(x, x, modulus, n);
            let x3 = gf_mul(x2, x, modulus, n);
            if with_trace {
                let x8 = (0..2).fold(x2, |y, _| gf_mul(y, y, modulus, n));
                x3 ^ gf_trace(gf_mul(x8, x, modulus, n), modulus, n)
            } else {
                x3
            }
        })
        .collect()
}
