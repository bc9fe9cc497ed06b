#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

namespace flatnormal::testing {

/// Deterministic uniform sampler for test points.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(rng_() >> 11) * 0x1.0p-53);
    }

private:
    std::mt19937_64 rng_;
};

inline Eigen::VectorXd vec2(double a, double b) {
    Eigen::VectorXd v(2);
    v << a, b;
    return v;
}

inline Eigen::VectorXd vec3(double a, double b, double c) {
    Eigen::VectorXd v(3);
    v << a, b, c;
    return v;
}

}  // namespace flatnormal::testing
