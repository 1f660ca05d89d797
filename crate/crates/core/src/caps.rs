//! Work caps for the exhaustive kernels. Defaults are conservative desk-scale
//! values; the `MODSUPP_CAPS` environment variable overrides them with a
//! comma-separated `name=value` list.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Caps {
    /// Largest codeword count accepted when enumerating a code's closure.
    pub enumeration: u64,
    /// Vectors in the ambient space when tabulating a support: `|R|^n`.
    pub support_vectors: u64,
    /// Elementary checks in the modularity sweep: `|R|^(2n+1) * u`.
    pub modular_ops: u64,
    /// Largest code accepted by the exhaustive submodule enumeration.
    pub submodule_words: u64,
    /// Largest code accepted by the exhaustive generating-set search.
    pub genset_words: u64,
    /// Generating-subset size bound in the exhaustive search.
    pub genset_subset: u32,
    /// Search states visited by subset searches before giving up.
    pub search_nodes: u64,
    /// Monomial ideal generators accepted by the Betti computation.
    pub betti_generators: u32,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            enumeration: 1 << 24,
            support_vectors: 1 << 16,
            modular_ops: 1 << 28,
            submodule_words: 256,
            genset_words: 64,
            genset_subset: 6,
            search_nodes: 1 << 24,
            betti_generators: 20,
        }
    }
}

pub const CAPS_ENV_VAR: &str = "MODSUPP_CAPS";

impl Caps {
    /// Defaults overridden by `MODSUPP_CAPS` when it is set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(CAPS_ENV_VAR) {
            Ok(s) => Self::parse_overrides(&s),
            Err(_) => Ok(Self::default()),
        }
    }

    /// Parses `name=value,name=value` on top of the defaults.
    pub fn parse_overrides(s: &str) -> Result<Self> {
        let mut caps = Self::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (name, value) = part.split_once('=').ok_or_else(|| {
                Error::InvalidInput(format!("cap override `{part}` is not name=value"))
            })?;
            let v: u64 = value.trim().parse().map_err(|_| {
                Error::InvalidInput(format!("cap value `{value}` is not an integer"))
            })?;
            match name.trim() {
                "enumeration" => caps.enumeration = v,
                "support_vectors" => caps.support_vectors = v,
                "modular_ops" => caps.modular_ops = v,
                "submodule_words" => caps.submodule_words = v,
                "genset_words" => caps.genset_words = v,
                "genset_subset" => caps.genset_subset = v as u32,
                "search_nodes" => caps.search_nodes = v,
                "betti_generators" => caps.betti_generators = v as u32,
                other => {
                    return Err(Error::InvalidInput(format!("unknown cap `{other}`")));
                }
            }
        }
        Ok(caps)
    }

    pub fn check(&self, what: &'static str, needed: u64, cap: u64) -> Result<()> {
        if needed > cap {
            Err(Error::CapExceeded { what, needed, cap })
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_overrides_applies_named_values() {
        let caps = Caps::parse_overrides("enumeration=1024, genset_subset=4").unwrap();
        assert_eq!(caps.enumeration, 1024);
        assert_eq!(caps.genset_subset, 4);
        assert_eq!(caps.submodule_words, Caps::default().submodule_words);
    }

    #[test]
    fn parse_overrides_rejects_junk() {
        assert!(Caps::parse_overrides("enumeration").is_err());
        assert!(Caps::parse_overrides("bogus=3").is_err());
        assert!(Caps::parse_overrides("enumeration=abc").is_err());
    }
}
