use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Separator used when composing product-basis labels, e.g. `1⊗2'`.
pub const PRODUCT_SEPARATOR: &str = "⊗";

/// Ordered, uniquely labeled set of modes spanning a Hilbert space.
///
/// Product bases remember their factors so reduced states can be formed.
/// Cloning is cheap; the label table is shared.
#[derive(Clone)]
pub struct ModeBasis(Arc<Inner>);

struct Inner {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    factors: Vec<ModeBasis>,
}

impl ModeBasis {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        Self::build(labels, Vec::new())
    }

    fn build(labels: Vec<String>, factors: Vec<ModeBasis>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::EmptyBasis);
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(Self(Arc::new(Inner {
            labels,
            index,
            factors,
        })))
    }

    /// Path basis `1..=4` with `primes` trailing apostrophes on every label.
    pub fn paths(primes: usize) -> Self {
        let tick = "'".repeat(primes);
        Self::new((1..=4).map(|n| format!("{n}{tick}"))).expect("static labels")
    }

    /// Polarization rails `V`, `H` (primed for photons beyond the first).
    pub fn polarization(primes: usize) -> Self {
        let tick = "'".repeat(primes);
        Self::new([format!("V{tick}"), format!("H{tick}")]).expect("static labels")
    }

    /// Ordered Cartesian product of several bases; nested products are flattened.
    pub fn product_of(parts: &[ModeBasis]) -> Result<Self> {
        let mut factors = Vec::new();
        for p in parts {
            if p.is_product() {
                factors.extend(p.factors().iter().cloned());
            } else {
                factors.push(p.clone());
            }
        }
        if factors.is_empty() {
            return Err(Error::EmptyBasis);
        }
        if factors.len() == 1 {
            return Ok(factors.pop().unwrap());
        }
        let mut labels: Vec<String> = vec![String::new()];
        for (k, f) in factors.iter().enumerate() {
            let mut next = Vec::with_capacity(labels.len() * f.dim());
            for prefix in &labels {
                for l in f.labels() {
                    if k == 0 {
                        next.push(l.clone());
                    } else {
                        next.push(format!("{prefix}{PRODUCT_SEPARATOR}{l}"));
                    }
                }
            }
            labels = next;
        }
        Self::build(labels, factors)
    }

    pub fn product(a: &ModeBasis, b: &ModeBasis) -> Result<Self> {
        Self::product_of(&[a.clone(), b.clone()])
    }

    pub fn labels(&self) -> &[String] {
        &self.0.labels
    }

    pub fn dim(&self) -> usize {
        self.0.labels.len()
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.0
            .index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownMode(label.to_string()))
    }

    pub fn contains(&self, label: &str) -> bool {
        self.0.index.contains_key(label)
    }

    pub fn is_product(&self) -> bool {
        !self.0.factors.is_empty()
    }

    /// Tensor factors, empty for an elementary basis.
    pub fn factors(&self) -> &[ModeBasis] {
        &self.0.factors
    }

    /// Number of tensor factors (1 for an elementary basis).
    pub fn factor_count(&self) -> usize {
        self.0.factors.len().max(1)
    }

    /// Returns the basis with factor `k` replaced by `with`.
    pub fn replace_factor(&self, k: usize, with: &ModeBasis) -> Result<Self> {
        if !self.is_product() {
            if k == 0 {
                return Ok(with.clone());
            }
            return Err(Error::SubsystemIndex { index: k, count: 1 });
        }
        let count = self.factors().len();
        if k >= count {
            return Err(Error::SubsystemIndex { index: k, count });
        }
        let mut parts = self.factors().to_vec();
        parts[k] = with.clone();
        Self::product_of(&parts)
    }
}

impl PartialEq for ModeBasis {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.labels == other.0.labels
                && self.0.factors.len() == other.0.factors.len()
                && self
                    .0
                    .factors
                    .iter()
                    .zip(&other.0.factors)
                    .all(|(a, b)| a.dim() == b.dim()))
    }
}

impl fmt::Debug for ModeBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dim() <= 16 {
            f.debug_list().entries(self.labels()).finish()
        } else {
            write!(f, "ModeBasis(dim = {})", self.dim())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_and_empty_rejected() {
        assert_eq!(
            ModeBasis::new(["1", "2", "1"]).unwrap_err(),
            Error::DuplicateLabel("1".into())
        );
        assert_eq!(
            ModeBasis::new(Vec::<String>::new()).unwrap_err(),
            Error::EmptyBasis
        );
    }

    #[test]
    fn product_labels_are_row_major() {
        let a = ModeBasis::new(["1", "3"]).unwrap();
        let b = ModeBasis::new(["1'", "2'"]).unwrap();
        let ab = ModeBasis::product(&a, &b).unwrap();
        assert_eq!(ab.labels(), ["1⊗1'", "1⊗2'", "3⊗1'", "3⊗2'"]);
        assert_eq!(ab.factor_count(), 2);
    }

    #[test]
    fn nested_products_flatten() {
        let a = ModeBasis::paths(0);
        let b = ModeBasis::paths(1);
        let c = ModeBasis::paths(2);
        let left = ModeBasis::product(&ModeBasis::product(&a, &b).unwrap(), &c).unwrap();
        let right = ModeBasis::product(&a, &ModeBasis::product(&b, &c).unwrap()).unwrap();
        assert_eq!(left, right);
        assert_eq!(left.factor_count(), 3);
        assert_eq!(left.dim(), 64);
    }
}
