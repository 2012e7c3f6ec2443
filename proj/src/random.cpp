#include "drspace/random.hpp"

#include <cmath>
#include <numbers>

namespace drspace {

double Rng::uniform() {
    // (k + 0.5) / 2^53 never hits 0 or 1
    const std::uint64_t k = eng_() >> 11;
    return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
}

double Rng::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(phi);
    has_spare_ = true;
    return r * std::cos(phi);
}

Vec Rng::gaussian_vec(int n) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = gaussian();
    return v;
}

Vec Rng::unit_vec(int n) {
    Vec v;
    double nv = 0.0;
    do {
        v = gaussian_vec(n);
        nv = v.norm();
    } while (nv < 1e-12);
    return v / nv;
}

}  // namespace drspace
