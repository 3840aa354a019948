#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include <Eigen/Dense>

#include "covgeom/body.hpp"

namespace covgeom {

enum class SampleMethod { automatic, rejection, hit_and_run };

struct SamplerParams {
    SampleMethod method = SampleMethod::automatic;
    // Negative values select the defaults: burn-in 10*d^2, thinning d.
    int burn_in = -1;
    int thinning = -1;
    // Rejection is exact, so it is preferred whenever the box acceptance
    // probe clears this rate.
    double min_acceptance = 0.01;
};

struct SampleBatch {
    Eigen::MatrixXd points;  // n x d
    std::uint64_t seed = 0;
    std::string method;  // "rejection" or "hit-and-run"
    int burn_in = 0;
    int thinning = 1;
    // Accepted fraction over all box trials during generation (rejection
    // only; probe estimate for hit-and-run).
    double acceptance_rate = -1.0;
};

// n i.i.d. uniform points. Point i is generated from counter stream i of
// `seed`, so batches are reproducible and independent of generation order.
SampleBatch sample_uniform(const ConvexBody& body, int n, std::uint64_t seed,
                           const SamplerParams& params = {});

// Rows are arithmetic means of 2^k fresh uniform points (k <= 20); row i
// consumes streams [i*2^k, (i+1)*2^k), so k = 0 reproduces sample_uniform.
SampleBatch sample_sk(const ConvexBody& body, int k, int n, std::uint64_t seed,
                      const SamplerParams& params = {});

// CSV dump: header x1,...,xd, one point per row, 17 significant digits.
void write_points_csv(std::ostream& os, const Eigen::MatrixXd& points);

}  // namespace covgeom
