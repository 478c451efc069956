use serde::Serialize;

use crate::coframe::CoframeComplex;
use crate::poly::standard::{so3_inclusion, su2_coframe};
use crate::poly::PolyForm;
use crate::quadrature::Chart;
use crate::scalar::PiMultiple;

/// A compact Lie group carrying a left-invariant coframe, together with an
/// ambient polynomial realization of that coframe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseManifold {
    /// `SU(2) ≅ S³ ⊂ ℝ⁴` with coframe `(ξ, ρ, κ)`.
    Su2,
    /// `SO(3) ⊂ ℝ⁹` with coframe `(ω₁, ω₂, ψ)`.
    So3,
}

impl BaseManifold {
    pub fn complex(self) -> CoframeComplex {
        match self {
            Self::Su2 => CoframeComplex::su2(),
            Self::So3 => CoframeComplex::so3(),
        }
    }

    pub fn chart(self) -> Chart {
        match self {
            Self::Su2 => Chart::s3(),
            Self::So3 => Chart::so3(),
        }
    }

    /// `∫` of the top coframe monomial in the chart's orientation.
    pub fn volume(self) -> PiMultiple {
        self.chart().volume()
    }

    /// The coframe as polynomial 1-forms on the ambient space. Their
    /// differentials agree with the complex after restriction to the group.
    pub fn ambient_coframe(self) -> Vec<PolyForm> {
        match self {
            Self::Su2 => su2_coframe().to_vec(),
            Self::So3 => {
                let mu = so3_inclusion().mc_pullback();
                vec![mu.get(1, 0).clone(), mu.get(2, 0).clone(), mu.get(2, 1).clone()]
            }
        }
    }
}
