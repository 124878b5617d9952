//! Ranked interval partitions: descending positive components with a
//! known total mass, optionally marking which component is the meander
//! (the incomplete final interval).

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct RankedPartition {
    components: Vec<f64>,
    total: f64,
    meander_index: Option<usize>,
}

impl RankedPartition {
    /// Build from completed jumps plus an optional meander component.
    /// Components are sorted descending (stable, so order among exact
    /// ties is deterministic) and the meander's position is tracked
    /// through the sort.
    pub fn from_parts(jumps: Vec<f64>, meander: Option<f64>, total: f64) -> Result<Self> {
        if total <= 0.0 {
            return Err(Error::domain(format!("total mass must be positive, got {total}")));
        }
        let mut tagged: Vec<(f64, bool)> = jumps.into_iter().map(|x| (x, false)).collect();
        if tagged.iter().any(|&(x, _)| x <= 0.0) {
            return Err(Error::domain("partition components must be strictly positive"));
        }
        // the meander may vanish, e.g. when lattice-valued partial sums
        // land exactly on the passage level
        if let Some(m) = meander {
            if m < 0.0 {
                return Err(Error::domain(format!("meander must be nonnegative, got {m}")));
            }
            tagged.push((m, true));
        }
        tagged.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("non-finite component"));
        let meander_index = tagged.iter().position(|&(_, m)| m);
        let components = tagged.into_iter().map(|(x, _)| x).collect();
        Ok(RankedPartition { components, total, meander_index })
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn meander_index(&self) -> Option<usize> {
        self.meander_index
    }

    pub fn meander(&self) -> Option<f64> {
        self.meander_index.map(|i| self.components[i])
    }

    /// Largest component (D_1); zero for an empty partition.
    pub fn largest(&self) -> f64 {
        self.components.first().copied().unwrap_or(0.0)
    }

    /// First `k` components, zero-padded.
    pub fn top(&self, k: usize) -> Vec<f64> {
        let mut out: Vec<f64> = self.components.iter().copied().take(k).collect();
        out.resize(k, 0.0);
        out
    }

    pub fn mass(&self) -> f64 {
        self.components.iter().sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorts_descending_and_tracks_meander() {
        let p = RankedPartition::from_parts(vec![0.2, 0.5], Some(0.3), 1.0).unwrap();
        assert_eq!(p.components(), &[0.5, 0.3, 0.2]);
        assert_eq!(p.meander_index(), Some(1));
        assert_eq!(p.meander(), Some(0.3));
        assert_eq!(p.largest(), 0.5);
        assert_eq!(p.top(5), vec![0.5, 0.3, 0.2, 0.0, 0.0]);
    }

    #[test]
    fn rejects_nonpositive_components() {
        assert!(RankedPartition::from_parts(vec![0.0], None, 1.0).is_err());
        assert!(RankedPartition::from_parts(vec![0.5], Some(-0.1), 1.0).is_err());
        assert!(RankedPartition::from_parts(vec![0.5], None, 0.0).is_err());
    }
}
