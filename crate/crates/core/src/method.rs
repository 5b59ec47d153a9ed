use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exact::{realize_exact_with, ExactOptions};
use crate::graph::{validate_matrix, DurationMatrix};
use crate::realization::Realization;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    /// Tree realizer for trees, cycle realizer for single cycles, exact search otherwise.
    #[default]
    Auto,
    Tree,
    Cycle,
    Exact,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Method::Auto),
            "tree" => Ok(Method::Tree),
            "cycle" => Ok(Method::Cycle),
            "exact" => Ok(Method::Exact),
            other => Err(Error::Parse(format!("unknown method {other:?}"))),
        }
    }
}

impl Method {
    /// The concrete method `Auto` resolves to for `d`.
    pub fn resolve(self, d: &DurationMatrix) -> Result<Method> {
        if self != Method::Auto {
            return Ok(self);
        }
        let g = validate_matrix(d)?;
        Ok(if g.is_tree() {
            Method::Tree
        } else if g.cycle_order().is_some() {
            Method::Cycle
        } else {
            Method::Exact
        })
    }
}

pub fn realize(d: &DurationMatrix, delta: u64, method: Method, opts: ExactOptions) -> Result<Realization> {
    match method.resolve(d)? {
        Method::Tree => crate::tree::realize_tree(d, delta),
        Method::Cycle => crate::cycle::realize_cycle(d, delta),
        _ => Ok(realize_exact_with(d, delta, opts)?.result),
    }
}
