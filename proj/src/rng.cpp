#include "matchsim/rng.hpp"

#include <cmath>
#include <numbers>

namespace matchsim {

double NormalSampler::operator()(Rng& rng) {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform01(rng);
    while (u1 == 0.0) u1 = uniform01(rng);  // keep log finite
    const double u2 = uniform01(rng);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

}  // namespace matchsim
