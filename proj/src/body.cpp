#include "covgeom/body.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <variant>

#include "covgeom/lp.hpp"

namespace covgeom {

namespace {

constexpr double kMergeTol = 1e-9;
constexpr double kVertexFeasTol = 1e-9;

bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    for (int i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return true;
        if (a[i] > b[i]) return false;
    }
    return false;
}

void check_dim(const ConvexBody& body, const Eigen::VectorXd& p) {
    if (p.size() != body.dim())
        throw std::invalid_argument("dimension mismatch: body dim " +
                                    std::to_string(body.dim()) + ", point dim " +
                                    std::to_string(p.size()));
}

// Equal-radius ball lens volume: |B(0,r) cap B(v,r)| with t = |v|, d <= 3.
std::optional<double> lens_volume(int d, double r, double t) {
    if (t >= 2.0 * r) return 0.0;
    switch (d) {
        case 1:
            return 2.0 * r - t;
        case 2:
            return 2.0 * r * r * std::acos(t / (2.0 * r)) -
                   0.5 * t * std::sqrt(4.0 * r * r - t * t);
        case 3: {
            const double pi = 3.14159265358979323846264338327950288;
            return pi / 12.0 * (4.0 * r + t) * (2.0 * r - t) * (2.0 * r - t);
        }
        default:
            return std::nullopt;
    }
}

}  // namespace

struct ConvexBody::Rep {
    std::variant<HPolytope, VPolytope, Ball, Ellipsoid, AffineImage, ReflectIntersect> v;
    int dim;
};

// --- Factories ---------------------------------------------------------------

ConvexBody ConvexBody::hpolytope(Eigen::MatrixXd A, Eigen::VectorXd b) {
    if (A.rows() != b.size() || A.rows() == 0 || A.cols() == 0)
        throw std::invalid_argument("hpolytope: inconsistent A, b shapes");
    for (int i = 0; i < A.rows(); ++i) {
        double n = A.row(i).norm();
        if (n < 1e-14) throw std::invalid_argument("hpolytope: zero constraint row");
        A.row(i) /= n;
        b[i] /= n;
    }
    auto rep = std::make_shared<Rep>();
    rep->dim = static_cast<int>(A.cols());
    rep->v = HPolytope{std::move(A), std::move(b)};
    return ConvexBody(std::move(rep));
}

ConvexBody ConvexBody::vpolytope(Eigen::MatrixXd vertices) {
    if (vertices.rows() == 0 || vertices.cols() == 0)
        throw std::invalid_argument("vpolytope: no vertices");
    auto rep = std::make_shared<Rep>();
    rep->dim = static_cast<int>(vertices.cols());
    rep->v = VPolytope{std::move(vertices)};
    return ConvexBody(std::move(rep));
}

ConvexBody ConvexBody::ball(Eigen::VectorXd center, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("ball: radius must be positive");
    auto rep = std::make_shared<Rep>();
    rep->dim = static_cast<int>(center.size());
    rep->v = Ball{std::move(center), radius};
    return ConvexBody(std::move(rep));
}

ConvexBody ConvexBody::ellipsoid(Eigen::VectorXd center, Eigen::MatrixXd shape) {
    if (shape.rows() != shape.cols() || shape.rows() != center.size())
        throw std::invalid_argument("ellipsoid: shape must be d x d");
    if ((shape - shape.transpose()).cwiseAbs().maxCoeff() > 1e-9)
        throw std::invalid_argument("ellipsoid: shape must be symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(shape);
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw std::invalid_argument("ellipsoid: shape must be positive-definite");
    Eigen::MatrixXd inv = es.eigenvectors() *
                          es.eigenvalues().cwiseInverse().asDiagonal() *
                          es.eigenvectors().transpose();
    double min_axis = std::sqrt(es.eigenvalues().minCoeff());
    auto rep = std::make_shared<Rep>();
    rep->dim = static_cast<int>(center.size());
    rep->v = Ellipsoid{std::move(center), std::move(shape), std::move(inv), min_axis};
    return ConvexBody(std::move(rep));
}

int ConvexBody::dim() const { return rep_->dim; }

ConvexBody::Kind ConvexBody::kind() const {
    switch (rep_->v.index()) {
        case 0: return Kind::hpolytope;
        case 1: return Kind::vpolytope;
        case 2: return Kind::ball;
        case 3: return Kind::ellipsoid;
        case 4: return Kind::affine;
        default: return Kind::reflect;
    }
}

const HPolytope& ConvexBody::hpoly() const { return std::get<HPolytope>(rep_->v); }
const VPolytope& ConvexBody::vpoly() const { return std::get<VPolytope>(rep_->v); }
const Ball& ConvexBody::ball_rep() const { return std::get<Ball>(rep_->v); }
const Ellipsoid& ConvexBody::ellipsoid_rep() const { return std::get<Ellipsoid>(rep_->v); }
const AffineImage& ConvexBody::affine_rep() const { return std::get<AffineImage>(rep_->v); }
const ReflectIntersect& ConvexBody::reflect_rep() const {
    return std::get<ReflectIntersect>(rep_->v);
}

// --- Membership --------------------------------------------------------------

Where contains(const ConvexBody& body, const Eigen::VectorXd& p, double tol) {
    check_dim(body, p);
    switch (body.kind()) {
        case ConvexBody::Kind::hpolytope: {
            const auto& hp = body.hpoly();
            double margin = (hp.A * p - hp.b).maxCoeff();
            if (margin < -tol) return Where::inside;
            if (margin <= tol) return Where::boundary;
            return Where::outside;
        }
        case ConvexBody::Kind::ball: {
            const auto& B = body.ball_rep();
            double margin = (p - B.center).norm() - B.radius;
            if (margin < -tol) return Where::inside;
            if (margin <= tol) return Where::boundary;
            return Where::outside;
        }
        case ConvexBody::Kind::ellipsoid: {
            const auto& E = body.ellipsoid_rep();
            Eigen::VectorXd q = p - E.center;
            double v = std::sqrt(std::max(0.0, q.dot(E.shape_inv * q)));
            // Scale the unit-gauge margin by the shortest semi-axis so tol
            // stays a geometric distance.
            double margin = (v - 1.0) * E.min_axis;
            if (margin < -tol) return Where::inside;
            if (margin <= tol) return Where::boundary;
            return Where::outside;
        }
        case ConvexBody::Kind::vpolytope: {
            const auto& vp = body.vpoly();
            double feas = std::max(tol, 1e-9);
            if (!convex_combination_exists(vp.vertices, p, feas)) return Where::outside;
            // Boundary detection: p inside at a shrunk tolerance but hugging
            // the hull is classified via a small inward probe toward the mean.
            Eigen::VectorXd c = vp.vertices.colwise().mean().transpose();
            double step = std::max(tol, 1e-7);
            Eigen::VectorXd dir = c - p;
            double n = dir.norm();
            if (n < 1e-14) return Where::inside;
            Eigen::VectorXd outward = p + step * (p - c) / n;
            if (!convex_combination_exists(vp.vertices, outward, feas))
                return Where::boundary;
            return Where::inside;
        }
        case ConvexBody::Kind::affine: {
            const auto& a = body.affine_rep();
            return contains(a.inner, a.M_inv * (p - a.t), tol);
        }
        case ConvexBody::Kind::reflect: {
            const auto& r = body.reflect_rep();
            Where w1 = contains(r.inner, p, tol);
            if (w1 == Where::outside) return Where::outside;
            Where w2 = contains(r.inner, r.x - p, tol);
            if (w2 == Where::outside) return Where::outside;
            if (w1 == Where::boundary || w2 == Where::boundary) return Where::boundary;
            return Where::inside;
        }
    }
    throw std::logic_error("contains: unreachable");
}

// --- Gauge -------------------------------------------------------------------

namespace {

double gauge_by_bisection(const ConvexBody& body, const Eigen::VectorXd& p) {
    double pn = p.norm();
    if (pn == 0.0) return 0.0;
    // Bracket: grow t until p/t lands inside, shrink until outside.
    double hi = 1.0;
    int guard = 0;
    while (contains(body, p / hi, 0.0) == Where::outside) {
        hi *= 2.0;
        if (++guard > 200) throw std::runtime_error("gauge: failed to bracket (body unbounded?)");
    }
    double lo = hi;
    guard = 0;
    while (contains(body, p / lo, 0.0) != Where::outside) {
        lo *= 0.5;
        if (lo < 1e-300 || ++guard > 1100) return 0.0;
    }
    for (int it = 0; it < 120; ++it) {
        double mid = 0.5 * (lo + hi);
        if (contains(body, p / mid, 0.0) == Where::outside)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-14 * hi) break;
    }
    return hi;
}

}  // namespace

double gauge(const ConvexBody& body, const Eigen::VectorXd& p) {
    check_dim(body, p);
    if (body.kind() != ConvexBody::Kind::hpolytope &&
        contains(body, Eigen::VectorXd::Zero(body.dim()), 1e-12) == Where::outside)
        throw std::invalid_argument("gauge: origin not interior to the body");
    switch (body.kind()) {
        case ConvexBody::Kind::hpolytope: {
            // 0 interior means b > 0; gauge is the largest facet ratio.
            const auto& hp = body.hpoly();
            double g = 0.0;
            Eigen::VectorXd ap = hp.A * p;
            for (int i = 0; i < hp.b.size(); ++i) {
                if (hp.b[i] <= 0.0)
                    throw std::invalid_argument("gauge: origin not interior to the body");
                g = std::max(g, ap[i] / hp.b[i]);
            }
            return g;
        }
        case ConvexBody::Kind::ball: {
            const auto& B = body.ball_rep();
            if (B.center.norm() == 0.0) return p.norm() / B.radius;
            return gauge_by_bisection(body, p);
        }
        case ConvexBody::Kind::ellipsoid: {
            const auto& E = body.ellipsoid_rep();
            if (E.center.norm() == 0.0)
                return std::sqrt(std::max(0.0, p.dot(E.shape_inv * p)));
            return gauge_by_bisection(body, p);
        }
        case ConvexBody::Kind::vpolytope: {
            double g = min_conic_weight(body.vpoly().vertices, p);
            if (g < 0.0) return gauge_by_bisection(body, p);
            return g;
        }
        case ConvexBody::Kind::affine: {
            const auto& a = body.affine_rep();
            if (a.t.norm() == 0.0) return gauge(a.inner, a.M_inv * p);
            return gauge_by_bisection(body, p);
        }
        case ConvexBody::Kind::reflect: {
            const auto& r = body.reflect_rep();
            // gauge of an intersection is the max of the two gauges; the
            // reflected factor x - K needs the generic path.
            double g1 = gauge(r.inner, p);
            ConvexBody reflected = affine_image(
                r.inner, -Eigen::MatrixXd::Identity(body.dim(), body.dim()), r.x);
            double g2 = gauge(reflected, p);
            return std::max(g1, g2);
        }
    }
    throw std::logic_error("gauge: unreachable");
}

// --- Constructors for derived bodies ------------------------------------------

ConvexBody reflect_intersect(const ConvexBody& body, const Eigen::VectorXd& x) {
    check_dim(body, x);
    if (body.kind() == ConvexBody::Kind::hpolytope) {
        const auto& hp = body.hpoly();
        const int m = static_cast<int>(hp.A.rows());
        Eigen::MatrixXd A(2 * m, body.dim());
        Eigen::VectorXd b(2 * m);
        A.topRows(m) = hp.A;
        b.head(m) = hp.b;
        A.bottomRows(m) = -hp.A;
        b.tail(m) = hp.b - hp.A * x;
        return ConvexBody::hpolytope(std::move(A), std::move(b));
    }
    if (body.kind() == ConvexBody::Kind::ball) {
        const auto& B = body.ball_rep();
        double t = (x - 2.0 * B.center).norm();
        if (t == 0.0) return body;  // x - K == K
    }
    auto rep = std::make_shared<ConvexBody::Rep>();
    rep->dim = body.dim();
    rep->v = ReflectIntersect{body, x};
    return ConvexBody(std::move(rep));
}

ConvexBody affine_image(const ConvexBody& body, const Eigen::MatrixXd& M,
                        const Eigen::VectorXd& t) {
    if (M.rows() != body.dim() || M.cols() != body.dim() || t.size() != body.dim())
        throw std::invalid_argument("affine_image: M must be d x d, t length d");
    Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
    if (!lu.isInvertible())
        throw std::invalid_argument("affine_image: singular transform");
    Eigen::MatrixXd Minv = lu.inverse();
    const int d = body.dim();

    switch (body.kind()) {
        case ConvexBody::Kind::hpolytope: {
            const auto& hp = body.hpoly();
            Eigen::MatrixXd A2 = hp.A * Minv;
            Eigen::VectorXd b2 = hp.b + A2 * t;
            return ConvexBody::hpolytope(std::move(A2), std::move(b2));
        }
        case ConvexBody::Kind::vpolytope: {
            Eigen::MatrixXd V2 =
                (body.vpoly().vertices * M.transpose()).rowwise() + t.transpose();
            return ConvexBody::vpolytope(std::move(V2));
        }
        case ConvexBody::Kind::ball: {
            const auto& B = body.ball_rep();
            Eigen::MatrixXd MMt = M * M.transpose();
            double s2 = MMt(0, 0);
            if ((MMt - s2 * Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff() <
                1e-12 * std::max(1.0, s2)) {
                return ConvexBody::ball(M * B.center + t, std::sqrt(s2) * B.radius);
            }
            return ConvexBody::ellipsoid(M * B.center + t,
                                         B.radius * B.radius * MMt);
        }
        case ConvexBody::Kind::ellipsoid: {
            const auto& E = body.ellipsoid_rep();
            Eigen::MatrixXd S2 = M * E.shape * M.transpose();
            S2 = 0.5 * (S2 + S2.transpose());
            return ConvexBody::ellipsoid(M * E.center + t, std::move(S2));
        }
        case ConvexBody::Kind::affine: {
            const auto& a = body.affine_rep();
            return affine_image(a.inner, M * a.M, M * a.t + t);
        }
        case ConvexBody::Kind::reflect: {
            auto rep = std::make_shared<ConvexBody::Rep>();
            rep->dim = d;
            rep->v = AffineImage{body, M, Minv, t, std::abs(lu.determinant())};
            return ConvexBody(std::move(rep));
        }
    }
    throw std::logic_error("affine_image: unreachable");
}

ConvexBody translate(const ConvexBody& body, const Eigen::VectorXd& v) {
    return affine_image(body, Eigen::MatrixXd::Identity(body.dim(), body.dim()), v);
}

// --- Vertex enumeration and hull volume ---------------------------------------

namespace {

// Next k-subset of {0..n-1} in lexicographic order.
bool next_subset(std::vector<int>& idx, int n) {
    int k = static_cast<int>(idx.size());
    for (int i = k - 1; i >= 0; --i) {
        if (idx[i] < n - k + i) {
            ++idx[i];
            for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

Eigen::MatrixXd dedupe_and_sort(std::vector<Eigen::VectorXd> pts, int d) {
    std::sort(pts.begin(), pts.end(),
              [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
                  return lex_less(a, b);
              });
    std::vector<Eigen::VectorXd> kept;
    for (const auto& p : pts) {
        bool dup = false;
        for (auto it = kept.rbegin(); it != kept.rend(); ++it) {
            if ((*it - p).lpNorm<Eigen::Infinity>() <= kMergeTol) {
                dup = true;
                break;
            }
            if (p[0] - (*it)[0] > kMergeTol) break;  // sorted: no earlier match
        }
        if (!dup) kept.push_back(p);
    }
    Eigen::MatrixXd out(static_cast<int>(kept.size()), d);
    for (int i = 0; i < out.rows(); ++i) out.row(i) = kept[i].transpose();
    return out;
}

}  // namespace

Eigen::MatrixXd enumerate_vertices(const HPolytope& hp) {
    const int d = static_cast<int>(hp.A.cols());
    const int m = static_cast<int>(hp.A.rows());
    if (d > 4)
        throw ExactVolumeUnavailable("vertex enumeration limited to d <= 4; use Monte Carlo volume");
    if (m < d) return Eigen::MatrixXd(0, d);

    std::vector<Eigen::VectorXd> found;
    std::vector<int> idx(d);
    for (int i = 0; i < d; ++i) idx[i] = i;
    Eigen::MatrixXd As(d, d);
    Eigen::VectorXd bs(d);
    do {
        for (int i = 0; i < d; ++i) {
            As.row(i) = hp.A.row(idx[i]);
            bs[i] = hp.b[idx[i]];
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(As);
        if (!lu.isInvertible()) continue;
        Eigen::VectorXd y = lu.solve(bs);
        if ((hp.A * y - hp.b).maxCoeff() <= kVertexFeasTol) found.push_back(y);
    } while (next_subset(idx, m));

    return dedupe_and_sort(std::move(found), d);
}

namespace {

struct Facet {
    Eigen::VectorXd normal;  // unit, outward
    double offset;
    std::vector<int> members;  // indices of points on the facet
};

// Brute-force facet enumeration of a hull: every affinely independent
// d-subset proposes a hyperplane; supporting ones are kept and merged.
std::vector<Facet> find_facets(const Eigen::MatrixXd& P) {
    const int n = static_cast<int>(P.rows());
    const int d = static_cast<int>(P.cols());
    std::vector<Facet> facets;
    if (n < d) return facets;

    std::vector<int> idx(d);
    for (int i = 0; i < d; ++i) idx[i] = i;
    do {
        Eigen::MatrixXd diff(d - 1, d);
        for (int i = 1; i < d; ++i) diff.row(i - 1) = P.row(idx[i]) - P.row(idx[0]);
        // Normal spans the null space of the difference rows.
        Eigen::FullPivLU<Eigen::MatrixXd> lu(diff);
        if (lu.dimensionOfKernel() != 1) continue;
        Eigen::VectorXd g = lu.kernel().col(0);
        double gn = g.norm();
        if (gn < 1e-12) continue;
        g /= gn;
        double h = (P.row(idx[0]) * g).value();

        double lo = (P * g).minCoeff();
        double hi = (P * g).maxCoeff();
        bool support_hi = hi <= h + kMergeTol;
        bool support_lo = lo >= h - kMergeTol;
        if (!support_hi && !support_lo) continue;
        if (support_lo && !support_hi) {
            g = -g;
            h = -h;
        }

        Facet f;
        f.normal = g;
        f.offset = h;
        for (int i = 0; i < n; ++i)
            if (std::abs((P.row(i) * g).value() - h) <= kMergeTol) f.members.push_back(i);
        if (static_cast<int>(f.members.size()) < d) continue;

        bool dup = false;
        for (const auto& other : facets) {
            if (std::abs(other.offset - h) <= kMergeTol &&
                (other.normal - g).lpNorm<Eigen::Infinity>() <= 1e-7) {
                dup = true;
                break;
            }
        }
        if (!dup) facets.push_back(std::move(f));
    } while (next_subset(idx, n));
    return facets;
}

// Orthonormal basis of the hyperplane orthogonal to g (columns).
Eigen::MatrixXd hyperplane_basis(const Eigen::VectorXd& g) {
    const int d = static_cast<int>(g.size());
    Eigen::MatrixXd M(d, d);
    M.col(0) = g;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(M.col(0));
    Eigen::MatrixXd Q = qr.householderQ();
    return Q.rightCols(d - 1);
}

void hull_simplices_rec(const Eigen::MatrixXd& P, std::vector<std::vector<int>>& out,
                        std::vector<int> global_ids);

// Triangulates the hull of P (indices into an original point set carried via
// ids). d = 1 yields segments [min, max]; higher d fans facet simplices from
// the point closest to the mean.
void hull_simplices_rec(const Eigen::MatrixXd& P, std::vector<std::vector<int>>& out,
                        std::vector<int> ids) {
    const int n = static_cast<int>(P.rows());
    const int d = static_cast<int>(P.cols());
    if (n < d + 1) return;
    if (d == 1) {
        int imin = 0, imax = 0;
        for (int i = 1; i < n; ++i) {
            if (P(i, 0) < P(imin, 0)) imin = i;
            if (P(i, 0) > P(imax, 0)) imax = i;
        }
        if (P(imax, 0) - P(imin, 0) <= kMergeTol) return;
        out.push_back({ids[imin], ids[imax]});
        return;
    }

    // Apex: the point nearest the centroid of the cloud.
    Eigen::VectorXd mean = P.colwise().mean().transpose();
    int apex = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        double dist = (P.row(i).transpose() - mean).squaredNorm();
        if (dist < best) {
            best = dist;
            apex = i;
        }
    }

    for (const auto& f : find_facets(P)) {
        // Skip facets through the apex (zero-height pyramids).
        if (std::abs((P.row(apex) * f.normal).value() - f.offset) <= kMergeTol) continue;
        Eigen::MatrixXd B = hyperplane_basis(f.normal);
        Eigen::MatrixXd local(static_cast<int>(f.members.size()), d - 1);
        Eigen::VectorXd p0 = P.row(f.members[0]).transpose();
        std::vector<int> sub_ids(f.members.size());
        for (size_t i = 0; i < f.members.size(); ++i) {
            local.row(static_cast<int>(i)) =
                (B.transpose() * (P.row(f.members[i]).transpose() - p0)).transpose();
            sub_ids[i] = f.members[i];
        }
        std::vector<std::vector<int>> sub;
        hull_simplices_rec(local, sub, sub_ids);
        for (auto& s : sub) {
            std::vector<int> simplex;
            simplex.push_back(ids[apex]);
            for (int v : s) simplex.push_back(ids[v]);
            out.push_back(std::move(simplex));
        }
    }
}

double simplex_volume(const Eigen::MatrixXd& V) {
    const int d = static_cast<int>(V.cols());
    Eigen::MatrixXd E(d, d);
    for (int i = 0; i < d; ++i) E.col(i) = (V.row(i + 1) - V.row(0)).transpose();
    double fact = 1.0;
    for (int i = 2; i <= d; ++i) fact *= i;
    return std::abs(E.determinant()) / fact;
}

}  // namespace

std::vector<Eigen::MatrixXd> hull_simplices(const Eigen::MatrixXd& points) {
    const int d = static_cast<int>(points.cols());
    if (d > 4) throw ExactVolumeUnavailable("hull decomposition limited to d <= 4");
    std::vector<std::vector<int>> tris;
    std::vector<int> ids(points.rows());
    for (int i = 0; i < points.rows(); ++i) ids[i] = i;
    // ids passed locally: the recursion remaps via sub_ids already, so local
    // indices equal global here.
    {
        std::vector<std::vector<int>> raw;
        hull_simplices_rec(points, raw, ids);
        tris = std::move(raw);
    }
    std::vector<Eigen::MatrixXd> out;
    out.reserve(tris.size());
    for (const auto& s : tris) {
        Eigen::MatrixXd V(static_cast<int>(s.size()), d);
        for (size_t i = 0; i < s.size(); ++i) V.row(static_cast<int>(i)) = points.row(s[i]);
        if (static_cast<int>(s.size()) == d + 1 && simplex_volume(V) > 0.0)
            out.push_back(std::move(V));
    }
    return out;
}

double hull_volume(const Eigen::MatrixXd& points) {
    const int d = static_cast<int>(points.cols());
    if (points.rows() < d + 1) return 0.0;
    if (d == 1) {
        return points.col(0).maxCoeff() - points.col(0).minCoeff();
    }
    double vol = 0.0;
    for (const auto& s : hull_simplices(points)) vol += simplex_volume(s);
    return vol;
}

std::pair<Eigen::MatrixXd, Eigen::VectorXd> hull_facets(const Eigen::MatrixXd& points) {
    const int d = static_cast<int>(points.cols());
    if (d == 1) {
        Eigen::MatrixXd A(2, 1);
        A << 1.0, -1.0;
        Eigen::VectorXd b(2);
        b << points.col(0).maxCoeff(), -points.col(0).minCoeff();
        return {A, b};
    }
    auto facets = find_facets(points);
    Eigen::MatrixXd A(static_cast<int>(facets.size()), d);
    Eigen::VectorXd b(static_cast<int>(facets.size()));
    for (size_t i = 0; i < facets.size(); ++i) {
        A.row(static_cast<int>(i)) = facets[i].normal.transpose();
        b[static_cast<int>(i)] = facets[i].offset;
    }
    return {A, b};
}

// --- Volume -------------------------------------------------------------------

double unit_ball_volume(int d) {
    const double pi = 3.14159265358979323846264338327950288;
    return std::pow(pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

std::optional<double> try_exact_volume(const ConvexBody& body) {
    switch (body.kind()) {
        case ConvexBody::Kind::hpolytope: {
            if (body.dim() > 4) return std::nullopt;
            Eigen::MatrixXd V = enumerate_vertices(body.hpoly());
            return hull_volume(V);
        }
        case ConvexBody::Kind::vpolytope: {
            if (body.dim() > 4) return std::nullopt;
            return hull_volume(body.vpoly().vertices);
        }
        case ConvexBody::Kind::ball: {
            const auto& B = body.ball_rep();
            return unit_ball_volume(body.dim()) * std::pow(B.radius, body.dim());
        }
        case ConvexBody::Kind::ellipsoid: {
            const auto& E = body.ellipsoid_rep();
            return unit_ball_volume(body.dim()) * std::sqrt(E.shape.determinant());
        }
        case ConvexBody::Kind::affine: {
            const auto& a = body.affine_rep();
            auto v = try_exact_volume(a.inner);
            if (!v) return std::nullopt;
            return a.abs_det * *v;
        }
        case ConvexBody::Kind::reflect: {
            const auto& r = body.reflect_rep();
            if (r.inner.kind() == ConvexBody::Kind::ball) {
                const auto& B = r.inner.ball_rep();
                double t = (r.x - 2.0 * B.center).norm();
                return lens_volume(body.dim(), B.radius, t);
            }
            if (r.inner.kind() == ConvexBody::Kind::ellipsoid && body.dim() <= 3) {
                // Pull back to a unit-ball lens: E = c + S^{1/2} B.
                const auto& E = r.inner.ellipsoid_rep();
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(E.shape);
                Eigen::MatrixXd root_inv =
                    es.eigenvectors() *
                    es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                    es.eigenvectors().transpose();
                double t = (root_inv * (r.x - 2.0 * E.center)).norm();
                auto lens = lens_volume(body.dim(), 1.0, t);
                if (!lens) return std::nullopt;
                return std::sqrt(E.shape.determinant()) * *lens;
            }
            return std::nullopt;
        }
    }
    return std::nullopt;
}

double exact_volume(const ConvexBody& body) {
    auto v = try_exact_volume(body);
    if (!v)
        throw ExactVolumeUnavailable(
            "exact volume unsupported for this variant/dimension; use Monte Carlo volume");
    return *v;
}

// --- Support, bounding box, interior point -------------------------------------

double support_value(const ConvexBody& body, const Eigen::VectorXd& dir) {
    check_dim(body, dir);
    switch (body.kind()) {
        case ConvexBody::Kind::hpolytope: {
            const auto& hp = body.hpoly();
            LpSolution sol = lp_maximize(dir, hp.A, hp.b);
            if (sol.status == LpSolution::Status::unbounded)
                throw std::runtime_error("support_value: unbounded body");
            if (!sol.ok()) throw std::runtime_error("support_value: empty polytope");
            return sol.value;
        }
        case ConvexBody::Kind::vpolytope:
            return (body.vpoly().vertices * dir).maxCoeff();
        case ConvexBody::Kind::ball: {
            const auto& B = body.ball_rep();
            return B.center.dot(dir) + B.radius * dir.norm();
        }
        case ConvexBody::Kind::ellipsoid: {
            const auto& E = body.ellipsoid_rep();
            return E.center.dot(dir) + std::sqrt(std::max(0.0, dir.dot(E.shape * dir)));
        }
        case ConvexBody::Kind::affine: {
            const auto& a = body.affine_rep();
            return support_value(a.inner, a.M.transpose() * dir) + a.t.dot(dir);
        }
        case ConvexBody::Kind::reflect: {
            // Upper bound: min of the two factor supports encloses the body.
            const auto& r = body.reflect_rep();
            double h1 = support_value(r.inner, dir);
            double h2 = r.x.dot(dir) + support_value(r.inner, -dir);
            return std::min(h1, h2);
        }
    }
    throw std::logic_error("support_value: unreachable");
}

AABB bounding_box(const ConvexBody& body) {
    const int d = body.dim();
    AABB box{Eigen::VectorXd(d), Eigen::VectorXd(d)};
    Eigen::VectorXd e = Eigen::VectorXd::Zero(d);
    for (int i = 0; i < d; ++i) {
        e[i] = 1.0;
        box.upper[i] = support_value(body, e);
        e[i] = -1.0;
        box.lower[i] = -support_value(body, e);
        e[i] = 0.0;
    }
    return box;
}

double AABB::volume() const {
    if (empty()) return 0.0;
    return (upper - lower).prod();
}

Eigen::VectorXd interior_point(const ConvexBody& body) {
    switch (body.kind()) {
        case ConvexBody::Kind::hpolytope: {
            const auto& hp = body.hpoly();
            ChebyshevBall cb = chebyshev_center(hp.A, hp.b);
            if (cb.radius <= 0.0)
                throw std::runtime_error("interior_point: body has empty interior");
            return cb.center;
        }
        case ConvexBody::Kind::vpolytope:
            return body.vpoly().vertices.colwise().mean().transpose();
        case ConvexBody::Kind::ball:
            return body.ball_rep().center;
        case ConvexBody::Kind::ellipsoid:
            return body.ellipsoid_rep().center;
        case ConvexBody::Kind::affine: {
            const auto& a = body.affine_rep();
            return a.M * interior_point(a.inner) + a.t;
        }
        case ConvexBody::Kind::reflect: {
            const auto& r = body.reflect_rep();
            Eigen::VectorXd mid = 0.5 * r.x;
            if (contains(r.inner, mid, 1e-12) != Where::inside)
                throw std::runtime_error("interior_point: reflect-intersect body is empty");
            return mid;
        }
    }
    throw std::logic_error("interior_point: unreachable");
}

// --- Chord ---------------------------------------------------------------------

Chord chord(const ConvexBody& body, const Eigen::VectorXd& p, const Eigen::VectorXd& u) {
    check_dim(body, p);
    switch (body.kind()) {
        case ConvexBody::Kind::hpolytope: {
            const auto& hp = body.hpoly();
            double lo = -std::numeric_limits<double>::infinity();
            double hi = std::numeric_limits<double>::infinity();
            Eigen::VectorXd au = hp.A * u;
            Eigen::VectorXd resid = hp.b - hp.A * p;
            for (int i = 0; i < au.size(); ++i) {
                if (std::abs(au[i]) < 1e-14) {
                    if (resid[i] < 0.0) return {};
                } else if (au[i] > 0.0) {
                    hi = std::min(hi, resid[i] / au[i]);
                } else {
                    lo = std::max(lo, resid[i] / au[i]);
                }
            }
            if (!std::isfinite(lo) || !std::isfinite(hi))
                throw std::runtime_error("chord: unbounded body");
            return {lo, hi};
        }
        case ConvexBody::Kind::ball:
        case ConvexBody::Kind::ellipsoid: {
            Eigen::VectorXd c;
            Eigen::MatrixXd Q;
            if (body.kind() == ConvexBody::Kind::ball) {
                const auto& B = body.ball_rep();
                c = B.center;
                Q = Eigen::MatrixXd::Identity(body.dim(), body.dim()) /
                    (B.radius * B.radius);
            } else {
                const auto& E = body.ellipsoid_rep();
                c = E.center;
                Q = E.shape_inv;
            }
            Eigen::VectorXd w = p - c;
            double a = u.dot(Q * u);
            double bq = 2.0 * w.dot(Q * u);
            double cq = w.dot(Q * w) - 1.0;
            double disc = bq * bq - 4.0 * a * cq;
            if (disc < 0.0 || a <= 0.0) return {};
            double sq = std::sqrt(disc);
            return {(-bq - sq) / (2.0 * a), (-bq + sq) / (2.0 * a)};
        }
        case ConvexBody::Kind::vpolytope: {
            const auto& vp = body.vpoly();
            const int n = static_cast<int>(vp.vertices.rows());
            const int d = body.dim();
            // max/min t with p + t u a convex combination of the vertices.
            Eigen::MatrixXd A(d + 1, n + 1);
            A.topLeftCorner(d, n) = vp.vertices.transpose();
            A.topRightCorner(d, 1) = -u;
            A.row(d).head(n).setOnes();
            A(d, n) = 0.0;
            Eigen::VectorXd rhs(d + 1);
            rhs.head(d) = p;
            rhs[d] = 1.0;
            // Two LPs over mu >= 0 and free t: reuse lp_maximize in (mu, t+, t-).
            Chord out;
            bool any = false;
            for (int sign = 0; sign < 2; ++sign) {
                Eigen::MatrixXd Aeq(d + 1, n + 2);
                Aeq.leftCols(n) = A.leftCols(n);
                Aeq.col(n) = A.col(n);
                Aeq.col(n + 1) = -A.col(n);
                Eigen::VectorXd cost = Eigen::VectorXd::Zero(n + 2);
                cost[n] = (sign == 0) ? 1.0 : -1.0;
                cost[n + 1] = -cost[n];
                // Feasible minimum of -cost over equality constraints with
                // nonnegative variables; reuse the standard-form solver via a
                // thin wrapper below.
                LpSolution sol;
                {
                    // Standard form is what lp_maximize builds internally for
                    // inequalities, so emulate equalities with two-sided rows.
                    Eigen::MatrixXd Aie(2 * (d + 1) + n + 2, n + 2);
                    Eigen::VectorXd bie(2 * (d + 1) + n + 2);
                    Aie.topRows(d + 1) = Aeq;
                    bie.head(d + 1) = rhs;
                    Aie.middleRows(d + 1, d + 1) = -Aeq;
                    bie.segment(d + 1, d + 1) = -rhs;
                    Aie.bottomRows(n + 2) = -Eigen::MatrixXd::Identity(n + 2, n + 2);
                    bie.tail(n + 2).setZero();
                    sol = lp_maximize(cost, Aie, bie);
                }
                if (sol.ok()) {
                    double t = sol.x[n] - sol.x[n + 1];
                    if (sign == 0)
                        out.hi = t;
                    else
                        out.lo = t;
                    any = true;
                }
            }
            if (!any) return {};
            return out;
        }
        case ConvexBody::Kind::affine: {
            const auto& a = body.affine_rep();
            return chord(a.inner, a.M_inv * (p - a.t), a.M_inv * u);
        }
        case ConvexBody::Kind::reflect: {
            const auto& r = body.reflect_rep();
            Chord c1 = chord(r.inner, p, u);
            if (c1.empty()) return {};
            // p + t u in x - K  <=>  (x - p) - t u in K.
            Chord c2 = chord(r.inner, r.x - p, -u);
            if (c2.empty()) return {};
            return {std::max(c1.lo, c2.lo), std::min(c1.hi, c2.hi)};
        }
    }
    throw std::logic_error("chord: unreachable");
}

// --- Inradius, degeneracy -------------------------------------------------------

double inradius(const ConvexBody& body) {
    switch (body.kind()) {
        case ConvexBody::Kind::hpolytope: {
            const auto& hp = body.hpoly();
            return std::max(0.0, chebyshev_center(hp.A, hp.b).radius);
        }
        case ConvexBody::Kind::vpolytope: {
            auto [A, b] = hull_facets(body.vpoly().vertices);
            if (A.rows() == 0) return 0.0;
            return std::max(0.0, chebyshev_center(A, b).radius);
        }
        case ConvexBody::Kind::ball:
            return body.ball_rep().radius;
        case ConvexBody::Kind::ellipsoid: {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(body.ellipsoid_rep().shape);
            return std::sqrt(std::max(0.0, es.eigenvalues().minCoeff()));
        }
        case ConvexBody::Kind::affine: {
            const auto& a = body.affine_rep();
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(a.M);
            return svd.singularValues().minCoeff() * inradius(a.inner);
        }
        case ConvexBody::Kind::reflect: {
            const auto& r = body.reflect_rep();
            if (r.inner.kind() == ConvexBody::Kind::ball) {
                const auto& B = r.inner.ball_rep();
                double t = (r.x - 2.0 * B.center).norm();
                return std::max(0.0, B.radius - 0.5 * t);
            }
            throw std::runtime_error("inradius: unsupported lazy reflect-intersect variant");
        }
    }
    throw std::logic_error("inradius: unreachable");
}

bool is_degenerate(const ConvexBody& body, double tol) {
    switch (body.kind()) {
        case ConvexBody::Kind::hpolytope:
            return chebyshev_center(body.hpoly().A, body.hpoly().b).radius <= tol;
        case ConvexBody::Kind::vpolytope: {
            if (body.dim() <= 4) return hull_volume(body.vpoly().vertices) <= tol;
            return false;
        }
        case ConvexBody::Kind::ball:
        case ConvexBody::Kind::ellipsoid:
            return false;
        case ConvexBody::Kind::affine:
            return is_degenerate(body.affine_rep().inner, tol);
        case ConvexBody::Kind::reflect: {
            const auto& r = body.reflect_rep();
            return contains(r.inner, 0.5 * r.x, tol) != Where::inside;
        }
    }
    return false;
}

// --- Exact moments ---------------------------------------------------------------

namespace {

// E[x x^T] over a simplex with vertex rows V:
// (sum_i v_i v_i^T + (sum_i v_i)(sum_i v_i)^T) / ((d+1)(d+2)).
Eigen::MatrixXd simplex_second_moment(const Eigen::MatrixXd& V) {
    const int d = static_cast<int>(V.cols());
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(d, d);
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(d);
    for (int i = 0; i <= d; ++i) {
        Eigen::VectorXd v = V.row(i).transpose();
        S += v * v.transpose();
        sum += v;
    }
    S += sum * sum.transpose();
    return S / static_cast<double>((d + 1) * (d + 2));
}

std::optional<BodyMoments> polytope_moments(const Eigen::MatrixXd& vertices) {
    const int d = static_cast<int>(vertices.cols());
    if (d > 4) return std::nullopt;
    if (d == 1) {
        double lo = vertices.col(0).minCoeff();
        double hi = vertices.col(0).maxCoeff();
        double vol = hi - lo;
        if (vol <= 0.0) return std::nullopt;
        BodyMoments m;
        m.volume = vol;
        m.mean = Eigen::VectorXd::Constant(1, 0.5 * (lo + hi));
        m.covariance = Eigen::MatrixXd::Constant(1, 1, vol * vol / 12.0);
        return m;
    }
    auto simplices = hull_simplices(vertices);
    if (simplices.empty()) return std::nullopt;
    double vol = 0.0;
    Eigen::VectorXd first = Eigen::VectorXd::Zero(d);
    Eigen::MatrixXd second = Eigen::MatrixXd::Zero(d, d);
    for (const auto& S : simplices) {
        double v = simplex_volume(S);
        vol += v;
        Eigen::VectorXd c = S.colwise().mean().transpose();
        first += v * c;
        second += v * simplex_second_moment(S);
    }
    if (vol <= 0.0) return std::nullopt;
    BodyMoments m;
    m.volume = vol;
    m.mean = first / vol;
    m.covariance = second / vol - m.mean * m.mean.transpose();
    m.covariance = 0.5 * (m.covariance + m.covariance.transpose()).eval();
    return m;
}

}  // namespace

std::optional<BodyMoments> try_exact_moments(const ConvexBody& body) {
    const int d = body.dim();
    switch (body.kind()) {
        case ConvexBody::Kind::hpolytope: {
            if (d > 4) return std::nullopt;
            return polytope_moments(enumerate_vertices(body.hpoly()));
        }
        case ConvexBody::Kind::vpolytope:
            if (d > 4) return std::nullopt;
            return polytope_moments(body.vpoly().vertices);
        case ConvexBody::Kind::ball: {
            const auto& B = body.ball_rep();
            BodyMoments m;
            m.volume = unit_ball_volume(d) * std::pow(B.radius, d);
            m.mean = B.center;
            m.covariance = (B.radius * B.radius / (d + 2)) *
                           Eigen::MatrixXd::Identity(d, d);
            return m;
        }
        case ConvexBody::Kind::ellipsoid: {
            const auto& E = body.ellipsoid_rep();
            BodyMoments m;
            m.volume = unit_ball_volume(d) * std::sqrt(E.shape.determinant());
            m.mean = E.center;
            m.covariance = E.shape / (d + 2);
            return m;
        }
        case ConvexBody::Kind::affine: {
            const auto& a = body.affine_rep();
            auto inner = try_exact_moments(a.inner);
            if (!inner) return std::nullopt;
            BodyMoments m;
            m.volume = a.abs_det * inner->volume;
            m.mean = a.M * inner->mean + a.t;
            m.covariance = a.M * inner->covariance * a.M.transpose();
            return m;
        }
        case ConvexBody::Kind::reflect: {
            const auto& r = body.reflect_rep();
            if (r.inner.kind() == ConvexBody::Kind::ball && d <= 3) {
                // Lens is symmetric about x/2; the covariance has no closed
                // form we rely on, so only volume/mean are exact here.
                return std::nullopt;
            }
            return std::nullopt;
        }
    }
    return std::nullopt;
}

}  // namespace covgeom
