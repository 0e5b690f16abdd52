#include "packsim/rng.hpp"

#include <cmath>

namespace packsim::rng {

int poisson_draw(double lambda, double u) {
    if (lambda <= 0.0) return 0;
    double p = std::exp(-lambda);
    double cum = p;
    int k = 0;
    // Hard cap keeps a pathological u (numerically ~1) from spinning.
    const int cap = static_cast<int>(lambda + 12.0 * std::sqrt(lambda + 1.0) + 24.0);
    while (u >= cum && k < cap) {
        ++k;
        p *= lambda / static_cast<double>(k);
        cum += p;
    }
    return k;
}

}  // namespace packsim::rng
