use super::ConvexRegion;
use crate::error::{FaircutError, Result};
use num_rational::Ratio;

/// A weighted point set with exact rational weights summing to one.
///
/// Point measures do not vanish on hyperplanes, so they only feed the
/// brute-force oracles, never the continuous solvers.
#[derive(Debug, Clone, PartialEq)]
pub struct PointMeasure {
    dim: usize,
    atoms: Vec<PointAtom>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointAtom {
    pub point: Vec<f64>,
    pub weight: Ratio<i64>,
}

impl PointMeasure {
    /// Normalizes positive rational weights so that they sum to exactly one.
    pub fn new(dim: usize, atoms: Vec<PointAtom>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(FaircutError::Input("point measure has no atoms".into()));
        }
        let mut total = Ratio::from_integer(0);
        for a in &atoms {
            if a.point.len() != dim {
                return Err(FaircutError::dim(dim, a.point.len()));
            }
            if a.weight <= Ratio::from_integer(0) {
                return Err(FaircutError::Input("point weights must be positive".into()));
            }
            total += a.weight;
        }
        let atoms = atoms
            .into_iter()
            .map(|a| PointAtom { point: a.point, weight: a.weight / total })
            .collect();
        Ok(PointMeasure { dim, atoms })
    }

    /// Uniform weights on the given points.
    pub fn uniform(dim: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        let atoms = points.into_iter().map(|p| PointAtom { point: p, weight: Ratio::from_integer(1) }).collect();
        PointMeasure::new(dim, atoms)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[PointAtom] {
        &self.atoms
    }

    pub fn total(&self) -> Ratio<i64> {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    /// Exact mass of `r`, honouring the open/closed flags of its halfspaces.
    pub fn mass(&self, r: &ConvexRegion) -> Result<Ratio<i64>> {
        if r.dim != self.dim {
            return Err(FaircutError::dim(self.dim, r.dim));
        }
        Ok(self.atoms.iter().filter(|a| r.contains(&a.point)).map(|a| a.weight).sum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::Halfspace;

    #[test]
    fn weights_sum_to_one_exactly() {
        let m = PointMeasure::uniform(1, vec![vec![0.0], vec![1.0], vec![2.0]]).unwrap();
        assert_eq!(m.total(), Ratio::from_integer(1));
        let r = ConvexRegion::full(1).with(Halfspace::below(&[1.0], 1.0));
        assert_eq!(m.mass(&r).unwrap(), Ratio::new(1, 3));
        let closed = ConvexRegion::full(1).with(Halfspace::new(vec![1.0], 1.0));
        assert_eq!(m.mass(&closed).unwrap(), Ratio::new(2, 3));
    }
}
