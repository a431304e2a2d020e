#include "landauer/polygamma.hpp"

#include <stdexcept>

namespace landauer::special {

namespace {

// The asymptotic series is accurate to ~1e-17 once |z| >= 16.
constexpr double kShiftRadius = 16.0;

void require_right_half_plane(std::complex<double> z) {
    if (!(z.real() > 0.0)) {
        throw std::domain_error("polygamma: argument must satisfy Re(z) > 0");
    }
}

} // namespace

std::complex<double> trigamma(std::complex<double> z) {
    require_right_half_plane(z);
    std::complex<double> acc{0.0, 0.0};
    while (std::abs(z) < kShiftRadius) {
        acc += 1.0 / (z * z);
        z += 1.0;
    }
    const auto w = 1.0 / z;
    const auto w2 = w * w;
    // 1/z + 1/2z^2 + sum B_2k / z^(2k+1)
    std::complex<double> series{7.0 / 6.0, 0.0};
    series = series * w2 - 691.0 / 2730.0;
    series = series * w2 + 5.0 / 66.0;
    series = series * w2 - 1.0 / 30.0;
    series = series * w2 + 1.0 / 42.0;
    series = series * w2 - 1.0 / 30.0;
    series = series * w2 + 1.0 / 6.0;
    return acc + w + 0.5 * w2 + series * w2 * w;
}

std::complex<double> tetragamma(std::complex<double> z) {
    require_right_half_plane(z);
    std::complex<double> acc{0.0, 0.0};
    while (std::abs(z) < kShiftRadius) {
        acc -= 2.0 / (z * z * z);
        z += 1.0;
    }
    const auto w = 1.0 / z;
    const auto w2 = w * w;
    // term-by-term derivative of the trigamma expansion
    std::complex<double> series{-35.0 / 2.0, 0.0};
    series = series * w2 + 691.0 / 210.0;
    series = series * w2 - 5.0 / 6.0;
    series = series * w2 + 3.0 / 10.0;
    series = series * w2 - 1.0 / 6.0;
    series = series * w2 + 1.0 / 6.0;
    series = series * w2 - 0.5;
    return acc - w2 - w2 * w + series * w2 * w2;
}

} // namespace landauer::special
