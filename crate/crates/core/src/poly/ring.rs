use std::sync::Arc;

use super::monomial::{Monomial, MAX_EXPONENT, MAX_GENERATORS};
use crate::error::{Error, Result};

/// A free graded commutative GF(2)-algebra on named generators.
///
/// Generator order fixes the monomial order, see [`Monomial`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ring {
    name: String,
    names: Vec<String>,
    degrees: Vec<u32>,
}

impl Ring {
    pub fn new<S: Into<String>>(name: S, generators: Vec<(String, u32)>) -> Result<Arc<Ring>> {
        if generators.len() > MAX_GENERATORS {
            return Err(Error::TooManyGenerators {
                count: generators.len(),
                max: MAX_GENERATORS,
            });
        }
        let mut names = Vec::with_capacity(generators.len());
        let mut degrees = Vec::with_capacity(generators.len());
        for (n, d) in generators {
            if d == 0 {
                return Err(Error::Unsupported(format!("generator {n} has degree 0")));
            }
            if names.contains(&n) {
                return Err(Error::Unsupported(format!("duplicate generator {n}")));
            }
            names.push(n);
            degrees.push(d);
        }
        Ok(Arc::new(Ring {
            name: name.into(),
            names,
            degrees,
        }))
    }

    /// Ring on `prefix_i` for `i` in `indices`, generator `prefix_i` in degree `weight * i`.
    pub fn indexed<S: Into<String>>(
        name: S,
        prefix: &str,
        indices: impl IntoIterator<Item = u32>,
        weight: u32,
    ) -> Result<Arc<Ring>> {
        let gens = indices
            .into_iter()
            .map(|i| (format!("{prefix}_{i}"), weight * i))
            .collect();
        Ring::new(name, gens)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn generator_name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn generator_degree(&self, i: usize) -> u32 {
        self.degrees[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn monomial(&self, pairs: &[(usize, u32)]) -> Result<Monomial> {
        for &(i, _) in pairs {
            if i >= self.len() {
                return Err(Error::UnknownGenerator(format!("#{i} in {}", self.name)));
            }
        }
        Monomial::from_exponents(pairs, &self.degrees).ok_or_else(|| Error::ExponentOverflow {
            max: MAX_EXPONENT,
            context: self.name.clone(),
        })
    }

    pub fn var(&self, i: usize) -> Monomial {
        self.monomial(&[(i, 1)]).expect("generator index in range")
    }

    /// Same generators in the same order with the same degrees.
    pub fn same_as(self: &Arc<Self>, other: &Arc<Ring>) -> bool {
        Arc::ptr_eq(self, other) || (self.names == other.names && self.degrees == other.degrees)
    }

    pub fn format_monomial(&self, m: Monomial) -> String {
        if m.is_one() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        for (i, e) in m.support() {
            if e == 1 {
                parts.push(self.names[i].clone());
            } else {
                parts.push(format!("{}^{}", self.names[i], e));
            }
        }
        parts.join("*")
    }
}
