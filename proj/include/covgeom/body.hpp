#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace covgeom {

// Membership classification relative to a tolerance measured as a geometric
// distance (H-polytope rows are unit-norm so facet residuals are distances).
enum class Where { inside, boundary, outside };

struct AABB {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;

    int dim() const { return static_cast<int>(lower.size()); }
    bool empty() const { return (upper - lower).minCoeff() < 0.0; }
    double volume() const;
    Eigen::VectorXd center() const { return 0.5 * (lower + upper); }
    double diameter() const { return empty() ? 0.0 : (upper - lower).norm(); }
};

struct HPolytope {
    Eigen::MatrixXd A;  // m x d, unit-norm rows
    Eigen::VectorXd b;  // m
};

struct VPolytope {
    Eigen::MatrixXd vertices;  // n x d, one vertex per row
};

struct Ball {
    Eigen::VectorXd center;
    double radius;
};

struct Ellipsoid {
    // { y : (y - center)^T shape^{-1} (y - center) <= 1 }, shape SPD.
    Eigen::VectorXd center;
    Eigen::MatrixXd shape;
    Eigen::MatrixXd shape_inv;
    double min_axis;  // sqrt of the smallest shape eigenvalue
};

struct AffineImage;
struct ReflectIntersect;

class ExactVolumeUnavailable : public std::runtime_error {
public:
    explicit ExactVolumeUnavailable(const std::string& what)
        : std::runtime_error(what) {}
};

// Immutable convex-body value. Copies share the representation, so bodies are
// safe to hand to concurrent workers.
class ConvexBody {
public:
    enum class Kind { hpolytope, vpolytope, ball, ellipsoid, affine, reflect };

    static ConvexBody hpolytope(Eigen::MatrixXd A, Eigen::VectorXd b);
    static ConvexBody vpolytope(Eigen::MatrixXd vertices);
    static ConvexBody ball(Eigen::VectorXd center, double radius);
    static ConvexBody ellipsoid(Eigen::VectorXd center, Eigen::MatrixXd shape);

    int dim() const;
    Kind kind() const;

    const HPolytope& hpoly() const;
    const VPolytope& vpoly() const;
    const Ball& ball_rep() const;
    const Ellipsoid& ellipsoid_rep() const;
    const AffineImage& affine_rep() const;
    const ReflectIntersect& reflect_rep() const;

    struct Rep;

private:
    friend ConvexBody affine_image(const ConvexBody&, const Eigen::MatrixXd&,
                                   const Eigen::VectorXd&);
    friend ConvexBody reflect_intersect(const ConvexBody&, const Eigen::VectorXd&);
    explicit ConvexBody(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}
    std::shared_ptr<const Rep> rep_;
};

struct AffineImage {
    ConvexBody inner;
    Eigen::MatrixXd M;
    Eigen::MatrixXd M_inv;
    Eigen::VectorXd t;
    double abs_det;
};

struct ReflectIntersect {
    ConvexBody inner;
    Eigen::VectorXd x;
};

// --- Operations ------------------------------------------------------------

Where contains(const ConvexBody& body, const Eigen::VectorXd& p, double tol);

// Minkowski functional: inf{ t > 0 : p in t*body }. The origin must be
// interior; callers translate first (typically to the centroid).
double gauge(const ConvexBody& body, const Eigen::VectorXd& p);

// K cap (x - K). Materialized to a stacked H-polytope when the body is an
// H-polytope, otherwise kept as a lazy node.
ConvexBody reflect_intersect(const ConvexBody& body, const Eigen::VectorXd& x);

// M*body + t with det(M) != 0. Materialized for polytopes, balls and
// ellipsoids; lazy for reflect-intersect inners.
ConvexBody affine_image(const ConvexBody& body, const Eigen::MatrixXd& M,
                        const Eigen::VectorXd& t);

ConvexBody translate(const ConvexBody& body, const Eigen::VectorXd& v);

// Exact volume where an exact path exists (polytopes d <= 4, balls and
// ellipsoids any d, equal-radius ball lenses d <= 3); throws
// ExactVolumeUnavailable otherwise.
double exact_volume(const ConvexBody& body);
std::optional<double> try_exact_volume(const ConvexBody& body);

// Certified axis-aligned enclosure via per-axis support maximization.
AABB bounding_box(const ConvexBody& body);

// Support function h(dir) = max_{y in K} dir.y.
double support_value(const ConvexBody& body, const Eigen::VectorXd& dir);

// A point strictly inside the body (Chebyshev center for H-polytopes).
Eigen::VectorXd interior_point(const ConvexBody& body);

// Parameter interval {t : p + t*u in body}; empty() if the line misses.
struct Chord {
    double lo = 1.0;
    double hi = -1.0;
    bool empty() const { return hi < lo; }
};
Chord chord(const ConvexBody& body, const Eigen::VectorXd& p, const Eigen::VectorXd& u);

// Radius of the largest inscribed ball (a certified lower bound for affine
// images of non-polytopal bodies).
double inradius(const ConvexBody& body);

// True when the body has no interior (reflect-intersect nodes may be empty).
bool is_degenerate(const ConvexBody& body, double tol = 1e-12);

struct BodyMoments {
    double volume;
    Eigen::VectorXd mean;
    Eigen::MatrixXd covariance;  // central second moment
};

// Closed-form moments for exact-path bodies (simplicial decomposition for
// polytopes, radial formulas for balls/ellipsoids).
std::optional<BodyMoments> try_exact_moments(const ConvexBody& body);

// --- Polytope machinery (exact paths, d <= 4) -------------------------------

// All vertices of {y : A y <= b} via d-subset facet intersection, duplicates
// merged at 1e-9 and rows sorted lexicographically.
Eigen::MatrixXd enumerate_vertices(const HPolytope& hp);

// Convex-hull volume of a point cloud (rows), d <= 4.
double hull_volume(const Eigen::MatrixXd& points);

// Outward facet description (A, b) of the hull of a point cloud, unit rows.
std::pair<Eigen::MatrixXd, Eigen::VectorXd> hull_facets(const Eigen::MatrixXd& points);

// Fan decomposition of the hull into simplices; each element is a
// (d+1) x d matrix of simplex vertices.
std::vector<Eigen::MatrixXd> hull_simplices(const Eigen::MatrixXd& points);

// Volume of the unit ball in dimension d.
double unit_ball_volume(int d);

}  // namespace covgeom
