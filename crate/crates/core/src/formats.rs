//! Plain-text file formats.
//!
//! Truth table:
//! ```text
//! vbf n=3 m=3
//! 0 1 3 2 6 7 5 4
//! ```
//! Quadratic ANF (indices are 1-based, as in x_1 .. x_n):
//! ```text
//! anf n=4 m=3
//! const 0
//! lin 2 1
//! quad 1 2 5
//! ```
//! Values are hexadecimal, with or without `0x`. `#` starts a comment.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::vbf::{QuadraticAnf, Vbf};

fn parse_hex(tok: &str) -> Result<u32> {
    let t = tok.trim_start_matches("0x").trim_start_matches("0X");
    u32::from_str_radix(t, 16).map_err(|_| Error::Parse(format!("bad hex value {tok:?}")))
}

fn parse_index(tok: &str) -> Result<u32> {
    tok.parse().map_err(|_| Error::Parse(format!("bad index {tok:?}")))
}

fn content_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).filter(|l| !l.is_empty())
}

fn parse_header(line: Option<&str>, tag: &str) -> Result<(u32, u32)> {
    let line = line.ok_or_else(|| Error::Parse("empty file".into()))?;
    let mut toks = line.split_whitespace();
    if toks.next() != Some(tag) {
        return Err(Error::Parse(format!("expected header \"{tag} n=<n> m=<m>\", got {line:?}")));
    }
    let (mut n, mut m) = (None, None);
    for t in toks {
        match t.split_once('=') {
            Some(("n", v)) => n = Some(parse_index(v)?),
            Some(("m", v)) => m = Some(parse_index(v)?),
            _ => return Err(Error::Parse(format!("unexpected header field {t:?}"))),
        }
    }
    match (n, m) {
        (Some(n), Some(m)) => Ok((n, m)),
        _ => Err(Error::Parse("header needs both n= and m=".into())),
    }
}

pub fn parse_truth_table(text: &str) -> Result<Vbf> {
    let mut lines = content_lines(text);
    let (n, m) = parse_header(lines.next(), "vbf")?;
    let words = lines.flat_map(str::split_whitespace).map(parse_hex).collect::<Result<Vec<_>>>()?;
    Vbf::from_truth_table(n, m, words)
}

pub fn format_truth_table(f: &Vbf) -> String {
    let mut s = format!("vbf n={} m={}\n", f.n(), f.m());
    for chunk in f.table().chunks(16) {
        let line: Vec<String> = chunk.iter().map(|w| format!("{w:x}")).collect();
        let _ = writeln!(s, "{}", line.join(" "));
    }
    s
}

pub fn parse_anf(text: &str) -> Result<QuadraticAnf> {
    let mut lines = content_lines(text);
    let (n, m) = parse_header(lines.next(), "anf")?;
    let mut anf = QuadraticAnf::zero(n, m)?;
    for line in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let one_based = |t: &str| -> Result<u32> {
            let k = parse_index(t)?;
            if k == 0 || k > n {
                return Err(Error::Parse(format!("variable index {k} outside 1..={n}")));
            }
            Ok(k - 1)
        };
        match toks.as_slice() {
            ["const", w] => anf.set_constant(parse_hex(w)?)?,
            ["lin", k, w] => anf.set_lin(one_based(k)?, parse_hex(w)?)?,
            ["quad", i, j, w] => {
                let (i, j) = (one_based(i)?, one_based(j)?);
                if i == j {
                    return Err(Error::Parse(format!("quad term needs distinct indices, got {}", i + 1)));
                }
                let w = parse_hex(w)?;
                anf.set_quad(i, j, anf.quad(i, j) ^ w)?
            }
            _ => return Err(Error::Parse(format!("unrecognized ANF line {line:?}"))),
        }
    }
    Ok(anf)
}

pub fn format_anf(anf: &QuadraticAnf) -> String {
    let mut s = format!("anf n={} m={}\n", anf.n(), anf.m());
    if anf.constant() != 0 {
        let _ = writeln!(s, "const {:x}", anf.constant());
    }
    for k in 0..anf.n() {
        if anf.lin(k) != 0 {
            let _ = writeln!(s, "lin {} {:x}", k + 1, anf.lin(k));
        }
    }
    for (i, j, w) in anf.quad_terms() {
        let _ = writeln!(s, "quad {} {} {:x}", i + 1, j + 1, w);
    }
    s
}

pub fn read_truth_table(path: &Path) -> Result<Vbf> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_truth_table(&text)
}

pub fn read_anf(path: &Path) -> Result<QuadraticAnf> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_anf(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truth_table_round_trip() {
        let f = Vbf::from_truth_table(3, 4, vec![0, 1, 3, 0xf, 6, 7, 5, 4]).unwrap();
        let text = format_truth_table(&f);
        assert!(text.starts_with("vbf n=3 m=4\n"));
        assert_eq!(parse_truth_table(&text).unwrap(), f);
        let commented = "# comment\nvbf n=1 m=1 # header\n0x1\n0\n";
        assert_eq!(parse_truth_table(commented).unwrap().table(), &[1, 0]);
    }

    #[test]
    fn truth_table_errors() {
        assert!(parse_truth_table("").is_err());
        assert!(parse_truth_table("vbf n=2\n0 0 0 0").is_err());
        assert!(parse_truth_table("vbf n=2 m=1\n0 0 0").is_err());
        assert!(parse_truth_table("vbf n=2 m=1\n0 0 0 2").is_err());
        assert!(parse_truth_table("vbf n=2 m=1\n0 0 0 zz").is_err());
        assert!(parse_truth_table("tt n=2 m=1\n0 0 0 0").is_err());
    }

    #[test]
    fn anf_round_trip() {
        let text = "anf n=4 m=3\nconst 1\nlin 2 6\nquad 1 2 5\nquad 4 3 2\n";
        let anf = parse_anf(text).unwrap();
        assert_eq!(anf.quad(0, 1), 5);
        assert_eq!(anf.quad(2, 3), 2);
        assert_eq!(anf.lin(1), 6);
        assert_eq!(anf.constant(), 1);
        assert_eq!(parse_anf(&format_anf(&anf)).unwrap(), anf);
    }

    #[test]
    fn anf_errors() {
        assert!(parse_anf("anf n=4 m=3\nquad 1 1 1").is_err());
        assert!(parse_anf("anf n=4 m=3\nlin 0 1").is_err());
        assert!(parse_anf("anf n=4 m=3\nlin 5 1").is_err());
        assert!(parse_anf("anf n=4 m=3\ncubic 1 2 3 1").is_err());
        assert!(parse_anf("anf n=4 m=3\nlin 1 8").is_err());
    }
}
