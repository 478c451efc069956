//! Canonical text form of a [`ValuedForm`].
//!
//! ```text
//! form degree 2 rank 3 space so3 3
//! 0 1 : 0 0 1
//! 1 2 : 1/2 0 0
//! ```
//!
//! The header names the degree, coframe rank, value space (`scalar` or a
//! built-in algebra) and value dimension. Each following line is a
//! multi-index, a colon and the value coordinates; `-` is the empty
//! multi-index of a 0-form. Blank lines and `#` comments are ignored.
//! Indices may appear in any order on input and are sign-normalized; the
//! writer emits increasing indices in lexicographic order.

use std::sync::Arc;

use super::blade::MAX_RANK;
use super::form::{ValueSpace, ValuedForm};
use crate::error::{Error, Result};
use crate::lie::{registry, LieAlgebra};
use crate::scalar::Scalar;

impl<S: Scalar> ValuedForm<S> {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "form degree {} rank {} space {} {}\n",
            self.degree(),
            self.rank(),
            self.space().name(),
            self.value_dim()
        );
        let mut lines: Vec<(Vec<usize>, &[S])> = self.terms().map(|(b, v)| (b.indices().collect(), v)).collect();
        lines.sort_by(|a, b| a.0.cmp(&b.0));
        for (idx, v) in lines {
            let idx = if idx.is_empty() {
                "-".to_string()
            } else {
                idx.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
            };
            let vals: Vec<String> = v.iter().map(S::to_text).collect();
            out.push_str(&format!("{idx} : {}\n", vals.join(" ")));
        }
        out
    }

    /// Parses text produced by [`ValuedForm::to_text`], resolving algebra
    /// names through the built-in registry.
    pub fn from_text(text: &str) -> Result<Self> {
        Self::from_text_with(text, registry::algebra)
    }

    pub fn from_text_with(text: &str, resolve: impl Fn(&str) -> Result<Arc<LieAlgebra>>) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
        let tokens: Vec<&str> = header.split_whitespace().collect();
        let [form_kw, "degree", degree, "rank", rank, "space", space, dim] = tokens.as_slice() else {
            return Err(Error::parse(hline, "expected `form degree D rank N space NAME DIM`"));
        };
        if *form_kw != "form" {
            return Err(Error::parse(hline, "header must start with `form`"));
        }
        let number = |s: &str, what: &str| {
            s.parse::<usize>().map_err(|_| Error::parse(hline, format!("invalid {what} `{s}`")))
        };
        let degree = number(degree, "degree")?;
        let rank = number(rank, "rank")?;
        let dim = number(dim, "value dimension")?;
        if rank == 0 || rank > MAX_RANK {
            return Err(Error::parse(hline, format!("rank must be in 1..={MAX_RANK}")));
        }
        if degree > rank {
            return Err(Error::parse(hline, format!("degree {degree} exceeds rank {rank}")));
        }
        let space = match *space {
            "scalar" => ValueSpace::Scalar,
            name => ValueSpace::Algebra(resolve(name).map_err(|e| Error::parse(hline, e.to_string()))?),
        };
        if space.dim() != dim {
            return Err(Error::parse(
                hline,
                format!("space {} has dimension {}, header says {dim}", space.name(), space.dim()),
            ));
        }

        let mut form = Self::zero(rank, degree, space)?;
        for (line, body) in lines {
            let (idx, vals) = body
                .split_once(':')
                .ok_or_else(|| Error::parse(line, "expected `INDICES : VALUES`"))?;
            let idx = idx.trim();
            let indices: Vec<usize> = if idx == "-" {
                Vec::new()
            } else {
                idx.split_whitespace()
                    .map(|t| t.parse::<usize>().map_err(|_| Error::parse(line, format!("invalid index `{t}`"))))
                    .collect::<Result<_>>()?
            };
            if indices.len() != degree {
                return Err(Error::parse(line, format!("expected {degree} indices, found {}", indices.len())));
            }
            if let Some(bad) = indices.iter().find(|&&i| i >= rank) {
                return Err(Error::parse(line, format!("index {bad} out of range for rank {rank}")));
            }
            let values: Vec<S> = vals
                .split_whitespace()
                .map(|t| S::from_text(t).map_err(|_| Error::parse(line, format!("invalid value `{t}`"))))
                .collect::<Result<_>>()?;
            if values.len() != dim {
                return Err(Error::parse(line, format!("expected {dim} values, found {}", values.len())));
            }
            form.add_indexed(&indices, values)?;
        }
        Ok(form)
    }
}
