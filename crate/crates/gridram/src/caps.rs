//! Size caps for the exact searches, overridable via `GRIDRAM_CAPS`.
//!
//! The env var takes a comma-separated list of `name=value` pairs, e.g.
//! `GRIDRAM_CAPS=canonical_max=10,mis_line=24`.

use once_cell::sync::Lazy;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Max rows/columns for exhaustive canonicalization.
    pub canonical_max: usize,
    /// Max rows+columns for the backward constructibility search.
    pub constructible_lines: usize,
    /// Max line length for exact maximum-independent-set search.
    pub mis_line: usize,
    /// Max |T|·n for the diversity predicate.
    pub diverse_budget: usize,
    /// Max rows for column colorings (alphabet is 2^rows).
    pub coloring_rows: usize,
    /// Max columns for exact T-avoiding subset search.
    pub color_subset_exact: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            canonical_max: 8,
            constructible_lines: 9,
            mis_line: 20,
            diverse_budget: 12,
            coloring_rows: 6,
            color_subset_exact: 20,
        }
    }
}

impl Caps {
    /// Defaults overridden by any pairs present in `spec`.
    pub fn parse(spec: &str) -> crate::Result<Self> {
        let mut caps = Caps::default();
        for part in spec.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (name, value) = part
                .split_once('=')
                .ok_or_else(|| crate::Error::Parse(format!("bad cap entry {part:?}")))?;
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| crate::Error::Parse(format!("bad cap value in {part:?}")))?;
            match name.trim() {
                "canonical_max" => caps.canonical_max = value,
                "constructible_lines" => caps.constructible_lines = value,
                "mis_line" => caps.mis_line = value,
                "diverse_budget" => caps.diverse_budget = value,
                "coloring_rows" => caps.coloring_rows = value,
                "color_subset_exact" => caps.color_subset_exact = value,
                other => {
                    return Err(crate::Error::Parse(format!("unknown cap {other:?}")));
                }
            }
        }
        Ok(caps)
    }

    pub fn from_env() -> Self {
        match std::env::var("GRIDRAM_CAPS") {
            Ok(spec) => Caps::parse(&spec).unwrap_or_default(),
            Err(_) => Caps::default(),
        }
    }
}

/// Process-wide caps, read from the environment once.
pub static CAPS: Lazy<Caps> = Lazy::new(Caps::from_env);

pub fn caps() -> Caps {
    *CAPS
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_overrides() {
        let caps = Caps::parse("canonical_max=10, mis_line=24").unwrap();
        assert_eq!(caps.canonical_max, 10);
        assert_eq!(caps.mis_line, 24);
        assert_eq!(caps.coloring_rows, 6);
    }

    #[test]
    fn parse_rejects_junk() {
        assert!(Caps::parse("nope=3").is_err());
        assert!(Caps::parse("canonical_max=abc").is_err());
    }
}
