use serde::{Deserialize, Serialize};

/// Numerical tolerances shared by every stage.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Unitarity and det = 1 checks on group elements.
    pub su2: f64,
    /// Grid used to hash floating-point group elements.
    pub dedup_grid: f64,
    /// Cayley-table products against matrix products.
    pub cayley: f64,
    /// Rounding residual allowed for McKay multiplicities.
    pub integrality: f64,
    /// Reconstruction error of the isotypic change of basis.
    pub isotypic: f64,
    /// Invariance equations for matrix pairs.
    pub membership: f64,
    /// Orthonormality of the invariant basis.
    pub orthonormality: f64,
    /// Commutation of gauge elements with the group.
    pub commutation: f64,
    /// Anti-hermiticity and tracelessness of moment values.
    pub moment: f64,
    /// Root pairings below this count as zero.
    pub good_set: f64,
    /// Residual certifying a converged solve.
    pub converged: f64,
    /// Residual at which the solver stops.
    pub solve_target: f64,
    /// Smallest singular value certifying a trivial Lie-algebra stabilizer.
    pub stabilizer: f64,
    /// Relative singular-value cut used for kernels and ranks.
    pub kernel_cut: f64,
    /// Allowed leakage of I, J, K out of the horizontal frame.
    pub projection: f64,
    /// Quaternion relations and metric invariance of the projected structures.
    pub hyperkahler: f64,
    /// Pointwise algebraic identities on sections.
    pub pointwise: f64,
    /// Quadrature identities under exact-moment samples.
    pub quadrature: f64,
    /// Flat-metric agreement of the section metric.
    pub metric: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            su2: 1e-12,
            dedup_grid: 1e-9,
            cayley: 1e-10,
            integrality: 1e-6,
            isotypic: 1e-8,
            membership: 1e-9,
            orthonormality: 1e-10,
            commutation: 1e-10,
            moment: 1e-10,
            good_set: 1e-10,
            converged: 1e-8,
            solve_target: 1e-10,
            stabilizer: 1e-8,
            kernel_cut: 1e-5,
            projection: 1e-5,
            hyperkahler: 1e-6,
            pointwise: 1e-12,
            quadrature: 1e-10,
            metric: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn all_positive(&self) -> bool {
        [
            self.su2,
            self.dedup_grid,
            self.cayley,
            self.integrality,
            self.isotypic,
            self.membership,
            self.orthonormality,
            self.commutation,
            self.moment,
            self.good_set,
            self.converged,
            self.solve_target,
            self.stabilizer,
            self.kernel_cut,
            self.projection,
            self.hyperkahler,
            self.pointwise,
            self.quadrature,
            self.metric,
        ]
        .iter()
        .all(|t| t.is_finite() && *t > 0.0)
    }
}
