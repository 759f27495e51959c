//! The `GFMAT` text format for generator matrices.
//!
//! ```text
//! GFMAT p=3 h=2 poly=2,1,1 n=4 k=2 e=1 alpha=0,1,2,3 v=1,1,1,1
//! 1 1 1 1
//! 0 1 2 3
//! ```
//!
//! The header carries the field, the shape and the Galois parameter `e`.
//! Optional keys record GRS nodes and multipliers (`alpha`, `v`, `gamma`
//! for an infinity column) and a claimed distance bound (`bound`).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use gagc_core::codes::{GrsSpec, LinearCode};
use gagc_core::gf::{make_field, Fe, FieldCtx};
use gagc_core::matrix::GfMatrix;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed matrix file: {0}")]
    Format(String),
}

fn bad<T>(msg: impl Into<String>) -> Result<T, IoError> {
    Err(IoError::Format(msg.into()))
}

#[derive(Debug, Clone)]
pub struct MatrixFile {
    pub ctx: Arc<FieldCtx>,
    pub e: u32,
    pub gen: GfMatrix,
    pub grs: Option<GrsSpec>,
    pub bound: Option<usize>,
}

fn join(xs: impl IntoIterator<Item = u32>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn parse_list(key: &str, s: &str) -> Result<Vec<u32>, IoError> {
    s.split(',')
        .map(|t| {
            t.parse::<u32>()
                .or_else(|_| bad(format!("{key}: {t:?} is not an integer")))
        })
        .collect()
}

impl MatrixFile {
    pub fn from_code(code: &LinearCode, e: u32, bound: Option<usize>) -> Self {
        MatrixFile {
            ctx: code.ctx().clone(),
            e,
            gen: code.generator().clone(),
            grs: code.grs().cloned(),
            bound,
        }
    }

    /// The code, carrying the GRS description when the header has one.
    pub fn code(&self) -> LinearCode {
        let c = LinearCode::from_generator_unchecked(self.gen.clone());
        match &self.grs {
            Some(spec) => c.with_grs(spec.clone()),
            None => c,
        }
    }

    pub fn emit(&self) -> String {
        let f = &self.ctx;
        let mut out = format!(
            "GFMAT p={} h={} poly={} n={} k={} e={}",
            f.p(),
            f.h(),
            join(f.modulus().iter().copied()),
            self.gen.cols(),
            self.gen.rows(),
            self.e
        );
        if let Some(g) = &self.grs {
            let _ = write!(
                out,
                " alpha={} v={}",
                join(g.alpha.iter().map(|x| x.0)),
                join(g.v.iter().map(|x| x.0))
            );
            if let Some(gamma) = g.infinity {
                let _ = write!(out, " gamma={}", gamma.0);
            }
        }
        if let Some(b) = self.bound {
            let _ = write!(out, " bound={b}");
        }
        out.push('\n');
        for r in 0..self.gen.rows() {
            let row: Vec<String> = self.gen.row(r).iter().map(|x| x.0.to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, IoError> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| IoError::Format("empty file".into()))?;
        let mut tokens = header.split_whitespace();
        if tokens.next() != Some("GFMAT") {
            return bad("header must start with GFMAT");
        }
        let mut kv: BTreeMap<&str, &str> = BTreeMap::new();
        for tok in tokens {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| IoError::Format(format!("bad header token {tok:?}")))?;
            if !matches!(
                k,
                "p" | "h" | "poly" | "n" | "k" | "e" | "alpha" | "v" | "gamma" | "bound"
            ) {
                return bad(format!("unknown header key {k:?}"));
            }
            if kv.insert(k, v).is_some() {
                return bad(format!("repeated header key {k:?}"));
            }
        }
        let num = |key: &str| -> Result<u64, IoError> {
            let s = kv
                .get(key)
                .ok_or_else(|| IoError::Format(format!("missing header key {key:?}")))?;
            s.parse::<u64>()
                .or_else(|_| bad(format!("{key}: {s:?} is not an integer")))
        };
        let (p, h) = (num("p")?, num("h")?);
        let (n, k) = (num("n")? as usize, num("k")? as usize);
        let e = num("e")?;
        let ctx = Arc::new(make_field(p, h as u32).map_err(|err| IoError::Format(err.to_string()))?);
        if e >= h {
            return bad(format!("e = {e} must be below h = {h}"));
        }
        let poly = parse_list(
            "poly",
            kv.get("poly")
                .ok_or_else(|| IoError::Format("missing header key \"poly\"".into()))?,
        )?;
        if poly != ctx.modulus() {
            return bad(format!(
                "poly {poly:?} differs from the field modulus {:?}",
                ctx.modulus()
            ));
        }
        let q = ctx.q();
        let elem = |key: &str, x: u32| {
            if x < q {
                Ok(Fe(x))
            } else {
                bad(format!("{key}: entry {x} is not below q = {q}"))
            }
        };
        let mut data = Vec::with_capacity(n * k);
        for r in 0..k {
            let line = lines
                .next()
                .ok_or_else(|| IoError::Format(format!("expected {k} rows, found {r}")))?;
            let before = data.len();
            for t in line.split_whitespace() {
                let x = t
                    .parse::<u32>()
                    .or_else(|_| bad(format!("row {r}: {t:?} is not an integer")))?;
                data.push(elem("matrix", x)?);
            }
            if data.len() - before != n {
                return bad(format!("row {r} has {} entries, expected {n}", data.len() - before));
            }
        }
        if lines.any(|l| !l.trim().is_empty()) {
            return bad("trailing data after the last row");
        }
        let gen = GfMatrix::new(ctx.clone(), k, n, data).map_err(|err| IoError::Format(err.to_string()))?;
        let grs = match (kv.get("alpha"), kv.get("v")) {
            (None, None) if !kv.contains_key("gamma") => None,
            (Some(a), Some(v)) => {
                let alpha = parse_list("alpha", a)?
                    .into_iter()
                    .map(|x| elem("alpha", x))
                    .collect::<Result<Vec<_>, _>>()?;
                let v = parse_list("v", v)?
                    .into_iter()
                    .map(|x| elem("v", x))
                    .collect::<Result<Vec<_>, _>>()?;
                let infinity = match kv.get("gamma") {
                    Some(g) => Some(elem(
                        "gamma",
                        g.parse::<u32>().or_else(|_| bad("gamma is not an integer"))?,
                    )?),
                    None => None,
                };
                let spec = GrsSpec { alpha, v, k, infinity };
                if spec.len() != n {
                    return bad(format!(
                        "GRS description has length {}, matrix has {n} columns",
                        spec.len()
                    ));
                }
                spec.validate(&ctx).map_err(|err| IoError::Format(err.to_string()))?;
                Some(spec)
            }
            _ => return bad("alpha and v must appear together"),
        };
        let bound = match kv.get("bound") {
            Some(_) => Some(num("bound")? as usize),
            None => None,
        };
        Ok(MatrixFile {
            ctx,
            e: e as u32,
            gen,
            grs,
            bound,
        })
    }

    pub fn read(path: &Path) -> Result<Self, IoError> {
        let text = std::fs::read_to_string(path).map_err(|source| IoError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn write(&self, path: &Path) -> Result<(), IoError> {
        write_text(path, &self.emit())
    }
}

pub fn write_text(path: &Path, text: &str) -> Result<(), IoError> {
    std::fs::write(path, text).map_err(|source| IoError::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "GFMAT p=3 h=2 poly=2,1,1 n=4 k=2 e=1\n1 1 1 1\n0 1 2 3\n";

    #[test]
    fn round_trip() {
        let m = MatrixFile::parse(SAMPLE).unwrap();
        assert_eq!(m.emit(), SAMPLE);
        assert_eq!(m.gen.get(1, 3), Fe(3));
    }

    #[test]
    fn rejections() {
        for bad_text in [
            "",
            "GFMAT p=3 h=2 poly=1,0,1 n=4 k=2 e=1\n1 1 1 1\n0 1 2 3\n",
            "GFMAT p=3 h=2 poly=2,1,1 n=4 k=2 e=1\n1 1 1 1\n0 1 2 9\n",
            "GFMAT p=3 h=2 poly=2,1,1 n=4 k=2 e=1\n1 1 1\n0 1 2 3\n",
            "GFMAT p=3 h=2 poly=2,1,1 n=4 k=2 e=1\n1 1 1 1\n",
            "GFMAT p=3 h=2 poly=2,1,1 n=4 k=2 e=2\n1 1 1 1\n0 1 2 3\n",
            "GFMAT p=3 h=2 poly=2,1,1 n=4 k=2 e=1 zz=1\n1 1 1 1\n0 1 2 3\n",
            "GFMAT p=3 h=2 poly=2,1,1 n=4 k=2 e=1 alpha=0,1,2,3\n1 1 1 1\n0 1 2 3\n",
            "MAT p=3 h=2 poly=2,1,1 n=4 k=2 e=1\n1 1 1 1\n0 1 2 3\n",
        ] {
            assert!(MatrixFile::parse(bad_text).is_err(), "{bad_text:?}");
        }
    }
}
