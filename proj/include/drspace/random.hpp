#pragma once

#include "drspace/linalg.hpp"

#include <cstdint>
#include <random>

namespace drspace {

/// Reproducible sampler: std::mt19937_64 (whose output sequence is fixed by the
/// standard) feeding a hand-rolled Box-Muller transform. std::normal_distribution
/// is avoided because its algorithm differs between standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 1) : eng_(seed) {}

    /// Uniform on the open interval (0, 1), 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double gaussian();
    Vec gaussian_vec(int n);
    /// Uniform on the unit sphere S^{n-1}.
    Vec unit_vec(int n);

private:
    std::mt19937_64 eng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace drspace
