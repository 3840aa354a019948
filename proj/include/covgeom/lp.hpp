#pragma once

#include <Eigen/Dense>

namespace covgeom {

// Small dense-tableau simplex solver. Problems at desk scale are tiny
// (tens of rows/columns), so a textbook two-phase method with Bland's rule
// is plenty and keeps results deterministic.

struct LpSolution {
    enum class Status { optimal, infeasible, unbounded };
    Status status = Status::infeasible;
    Eigen::VectorXd x;
    double value = 0.0;

    bool ok() const { return status == Status::optimal; }
};

// max c.x  subject to  A x <= b, x free.
LpSolution lp_maximize(const Eigen::VectorXd& c, const Eigen::MatrixXd& A,
                       const Eigen::VectorXd& b);

// Is p a convex combination of the rows of V (residual tolerance tol)?
bool convex_combination_exists(const Eigen::MatrixXd& V, const Eigen::VectorXd& p,
                               double tol);

// min sum(mu)  subject to  V^T mu = p, mu >= 0; the optimum is the gauge of p
// with respect to conv(rows of V) when the origin is interior. Returns a
// negative value if infeasible (p outside the cone spanned by the vertices).
double min_conic_weight(const Eigen::MatrixXd& V, const Eigen::VectorXd& p);

struct ChebyshevBall {
    Eigen::VectorXd center;
    double radius = 0.0;  // <= 0 means empty interior
};

// Largest inscribed ball of {x : A x <= b}; rows of A must be unit-norm.
ChebyshevBall chebyshev_center(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);

}  // namespace covgeom
