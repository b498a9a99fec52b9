use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::C64;

/// Largest Majorana count representable by the bit mask.
pub const MAX_SITES: usize = 64;

/// Product of distinct Majoranas `ψ^{a_1} ψ^{a_2} ⋯` in ascending index order.
///
/// Bit `k` of `support` is set when `ψ^{k+1}` is present.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MajoranaString {
    support: u64,
    n_sites: usize,
}

/// A Majorana string with an explicit scalar prefactor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaledString {
    pub prefactor: C64,
    pub string: MajoranaString,
}

fn site_mask(n_sites: usize) -> u64 {
    if n_sites >= 64 {
        u64::MAX
    } else {
        (1u64 << n_sites) - 1
    }
}

impl MajoranaString {
    /// The empty string (identity) on `n_sites` Majoranas.
    pub fn identity(n_sites: usize) -> Result<Self> {
        Self::from_mask(n_sites, 0)
    }

    pub fn from_mask(n_sites: usize, support: u64) -> Result<Self> {
        if n_sites > MAX_SITES {
            return Err(Error::InvalidArgument(format!(
                "{n_sites} Majorana sites exceed the {MAX_SITES}-bit mask"
            )));
        }
        if support & !site_mask(n_sites) != 0 {
            return Err(Error::IndexOutOfRange(format!(
                "support {support:#b} does not fit in {n_sites} sites"
            )));
        }
        Ok(MajoranaString { support, n_sites })
    }

    /// Builds the string from 1-based Majorana indices. Order is irrelevant
    /// (the result is always the ascending product) but indices must be
    /// distinct.
    pub fn from_indices(n_sites: usize, indices: &[usize]) -> Result<Self> {
        let mut support = 0u64;
        for &i in indices {
            if i == 0 || i > n_sites {
                return Err(Error::IndexOutOfRange(format!(
                    "Majorana index {i} outside 1..={n_sites}"
                )));
            }
            let bit = 1u64 << (i - 1);
            if support & bit != 0 {
                return Err(Error::InvalidArgument(format!(
                    "repeated Majorana index {i} in {indices:?}"
                )));
            }
            support |= bit;
        }
        Self::from_mask(n_sites, support)
    }

    /// Single Majorana `ψ^i`.
    pub fn single(n_sites: usize, i: usize) -> Result<Self> {
        Self::from_indices(n_sites, &[i])
    }

    pub fn support(&self) -> u64 {
        self.support
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    /// `|P|`, the number of Majoranas in the string.
    pub fn size(&self) -> usize {
        self.support.count_ones() as usize
    }

    /// 1-based indices in ascending order.
    pub fn indices(&self) -> Vec<usize> {
        (0..self.n_sites)
            .filter(|k| self.support >> k & 1 == 1)
            .map(|k| k + 1)
            .collect()
    }

    pub fn contains(&self, i: usize) -> bool {
        i >= 1 && i <= self.n_sites && self.support >> (i - 1) & 1 == 1
    }

    fn check_same_sites(&self, other: &Self) -> Result<()> {
        if self.n_sites != other.n_sites {
            return Err(Error::Dimension(format!(
                "Majorana strings on {} and {} sites",
                self.n_sites, other.n_sites
            )));
        }
        Ok(())
    }

    /// Sign picked up when reversing the order of the product:
    /// `(ψ^P)† = (-1)^{|P|(|P|-1)/2} ψ^P`.
    pub fn reversal_sign(&self) -> f64 {
        let k = self.size();
        if (k * k.saturating_sub(1) / 2).is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }
}

impl fmt::Display for MajoranaString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.support == 0 {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.indices().iter().map(|i| format!("ψ{i}")).collect();
        write!(f, "{}", parts.join("·"))
    }
}

/// Canonical product `ψ^a ψ^b = prefactor · ψ^{a ⊕ b}`.
///
/// The sign counts the transpositions needed to sort the concatenated
/// product; each repeated index contracts to `(ψ^k)^2 = 1/2`.
pub fn string_product(a: &MajoranaString, b: &MajoranaString) -> Result<ScaledString> {
    a.check_same_sites(b)?;
    let mut inversions = 0u32;
    let mut rest = b.support;
    while rest != 0 {
        let k = rest.trailing_zeros();
        rest &= rest - 1;
        // elements of `a` with a larger index than ψ^{k+1} must hop over it
        let above = if k >= 63 { 0 } else { a.support >> (k + 1) };
        inversions += above.count_ones();
    }
    let overlap = (a.support & b.support).count_ones() as i32;
    let sign = if inversions.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    };
    Ok(ScaledString {
        prefactor: C64::new(sign * 0.5f64.powi(overlap), 0.0),
        string: MajoranaString {
            support: a.support ^ b.support,
            n_sites: a.n_sites,
        },
    })
}

/// Whether `ψ^a` and `ψ^b` commute: `|a||b| - |a∧b|` even.
pub fn strings_commute(a: &MajoranaString, b: &MajoranaString) -> Result<bool> {
    a.check_same_sites(b)?;
    let parity = a.size() * b.size() - (a.support & b.support).count_ones() as usize;
    Ok(parity.is_multiple_of(2))
}

impl ScaledString {
    pub fn new(prefactor: C64, string: MajoranaString) -> Self {
        ScaledString { prefactor, string }
    }

    pub fn times(&self, other: &ScaledString) -> Result<ScaledString> {
        let p = string_product(&self.string, &other.string)?;
        Ok(ScaledString {
            prefactor: self.prefactor * other.prefactor * p.prefactor,
            string: p.string,
        })
    }
}
