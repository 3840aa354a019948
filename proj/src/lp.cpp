#include "covgeom/lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace covgeom {

namespace {

constexpr double kPivotTol = 1e-10;
constexpr double kFeasTol = 1e-9;

// min c.x  subject to  A x = b, x >= 0, with b >= 0 enforced by row flips
// before the call. Two-phase tableau simplex, Bland's rule throughout.
struct StandardLp {
    LpSolution::Status status;
    Eigen::VectorXd x;
    double value;
};

StandardLp solve_standard(const Eigen::VectorXd& c, Eigen::MatrixXd A, Eigen::VectorXd b) {
    const int m = static_cast<int>(A.rows());
    const int n = static_cast<int>(A.cols());

    for (int i = 0; i < m; ++i) {
        if (b[i] < 0.0) {
            A.row(i) = -A.row(i);
            b[i] = -b[i];
        }
    }

    // Tableau over the structural columns plus m artificials.
    const int ncols = n + m;
    Eigen::MatrixXd T(m, ncols + 1);
    T.leftCols(n) = A;
    T.block(0, n, m, m) = Eigen::MatrixXd::Identity(m, m);
    T.col(ncols) = b;

    std::vector<int> basis(m);
    for (int i = 0; i < m; ++i) basis[i] = n + i;

    auto pivot = [&](int row, int col) {
        T.row(row) /= T(row, col);
        for (int i = 0; i < m; ++i) {
            if (i == row) continue;
            double f = T(i, col);
            if (f != 0.0) T.row(i) -= f * T.row(row);
        }
        basis[row] = col;
    };

    // Runs Bland-rule simplex for the objective row z (reduced costs over
    // columns [0, limit)); returns false on unboundedness.
    auto run_simplex = [&](Eigen::RowVectorXd& z, double& zval, int limit) {
        const int max_iter = 20000;
        for (int iter = 0; iter < max_iter; ++iter) {
            int enter = -1;
            for (int j = 0; j < limit; ++j) {
                if (z[j] < -kPivotTol) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) return true;
            int leave = -1;
            double best = std::numeric_limits<double>::infinity();
            for (int i = 0; i < m; ++i) {
                if (T(i, enter) > kPivotTol) {
                    double ratio = T(i, ncols) / T(i, enter);
                    if (ratio < best - 1e-15 ||
                        (std::abs(ratio - best) <= 1e-15 &&
                         (leave < 0 || basis[i] < basis[leave]))) {
                        best = ratio;
                        leave = i;
                    }
                }
            }
            if (leave < 0) return false;  // unbounded
            double zf = z[enter];
            pivot(leave, enter);
            z -= zf * T.row(leave).head(ncols).eval();
            zval -= zf * T(leave, ncols);
        }
        throw std::runtime_error("simplex: iteration limit exceeded");
    };

    // Phase 1: minimize the sum of artificials.
    Eigen::RowVectorXd z1 = Eigen::RowVectorXd::Zero(ncols);
    double z1val = 0.0;
    for (int i = 0; i < m; ++i) {
        z1 -= T.row(i).head(ncols);
        z1val -= T(i, ncols);
    }
    z1.segment(n, m).setZero();
    if (!run_simplex(z1, z1val, ncols))
        throw std::runtime_error("simplex: phase 1 unbounded");
    if (-z1val > kFeasTol * (1.0 + b.lpNorm<Eigen::Infinity>()))
        return {LpSolution::Status::infeasible, Eigen::VectorXd(), 0.0};

    // Drive remaining artificials out of the basis where possible.
    for (int i = 0; i < m; ++i) {
        if (basis[i] >= n) {
            int col = -1;
            for (int j = 0; j < n; ++j) {
                if (std::abs(T(i, j)) > kPivotTol) {
                    col = j;
                    break;
                }
            }
            if (col >= 0) pivot(i, col);
            // else: redundant row, harmless to leave in place
        }
    }

    // Phase 2 over structural columns only.
    Eigen::RowVectorXd z2 = Eigen::RowVectorXd::Zero(ncols);
    z2.head(n) = c.transpose();
    double z2val = 0.0;
    for (int i = 0; i < m; ++i) {
        if (basis[i] < n && std::abs(z2[basis[i]]) > 0.0) {
            double f = z2[basis[i]];
            z2 -= f * T.row(i).head(ncols).eval();
            z2val -= f * T(i, ncols);
        }
    }
    z2.segment(n, m).setConstant(1.0);  // artificials never re-enter
    if (!run_simplex(z2, z2val, n))
        return {LpSolution::Status::unbounded, Eigen::VectorXd(), 0.0};

    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < m; ++i)
        if (basis[i] < n) x[basis[i]] = T(i, ncols);
    return {LpSolution::Status::optimal, x, c.dot(x)};
}

}  // namespace

LpSolution lp_maximize(const Eigen::VectorXd& c, const Eigen::MatrixXd& A,
                       const Eigen::VectorXd& b) {
    const int m = static_cast<int>(A.rows());
    const int d = static_cast<int>(A.cols());
    // x = u - w with u, w >= 0; slack s >= 0 turns A x <= b into equalities.
    Eigen::MatrixXd Astd(m, 2 * d + m);
    Astd.leftCols(d) = A;
    Astd.middleCols(d, d) = -A;
    Astd.rightCols(m) = Eigen::MatrixXd::Identity(m, m);
    Eigen::VectorXd cstd = Eigen::VectorXd::Zero(2 * d + m);
    cstd.head(d) = -c;
    cstd.segment(d, d) = c;

    StandardLp r = solve_standard(cstd, Astd, b);
    LpSolution out;
    out.status = r.status;
    if (r.status == LpSolution::Status::optimal) {
        out.x = r.x.head(d) - r.x.segment(d, d);
        out.value = c.dot(out.x);
    }
    return out;
}

bool convex_combination_exists(const Eigen::MatrixXd& V, const Eigen::VectorXd& p,
                               double tol) {
    const int n = static_cast<int>(V.rows());
    const int d = static_cast<int>(V.cols());
    if (n == 0) return false;
    // Feasibility of { mu >= 0 : V^T mu = p, 1.mu = 1 } via phase 1 only:
    // minimize total artificial mass and compare against tol.
    Eigen::MatrixXd A(d + 1, n);
    A.topRows(d) = V.transpose();
    A.row(d).setOnes();
    Eigen::VectorXd b(d + 1);
    b.head(d) = p;
    b[d] = 1.0;

    // Scale rows to comparable magnitude so tol acts on geometric residuals.
    for (int i = 0; i < d + 1; ++i) {
        double s = std::max(1.0, A.row(i).cwiseAbs().maxCoeff());
        A.row(i) /= s;
        b[i] /= s;
    }

    Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
    StandardLp r = solve_standard(c, A, b);
    if (r.status != LpSolution::Status::optimal) return false;
    Eigen::VectorXd resid = A * r.x - b;
    return resid.lpNorm<Eigen::Infinity>() <= tol;
}

double min_conic_weight(const Eigen::MatrixXd& V, const Eigen::VectorXd& p) {
    const int n = static_cast<int>(V.rows());
    const int d = static_cast<int>(V.cols());
    Eigen::MatrixXd A = V.transpose();  // d x n
    StandardLp r = solve_standard(Eigen::VectorXd::Ones(n), A, p);
    if (r.status != LpSolution::Status::optimal) return -1.0;
    return r.value;
}

ChebyshevBall chebyshev_center(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
    const int m = static_cast<int>(A.rows());
    const int d = static_cast<int>(A.cols());
    Eigen::MatrixXd Ar(m, d + 1);
    Ar.leftCols(d) = A;
    Ar.col(d).setOnes();
    Eigen::VectorXd c = Eigen::VectorXd::Zero(d + 1);
    c[d] = 1.0;
    LpSolution sol = lp_maximize(c, Ar, b);
    if (sol.status == LpSolution::Status::unbounded)
        throw std::runtime_error("chebyshev_center: unbounded polytope");
    if (!sol.ok()) return {Eigen::VectorXd::Zero(d), -1.0};
    return {sol.x.head(d), sol.x[d]};
}

}  // namespace covgeom
