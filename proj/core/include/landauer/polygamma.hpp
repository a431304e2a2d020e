// polygamma.hpp: Complex trigamma and tetragamma for Re(z) > 0

#pragma once

#include <complex>

namespace landauer::special {

// psi_1(z) = sum_{k>=0} 1/(z+k)^2
std::complex<double> trigamma(std::complex<double> z);

// psi_2(z) = -2 sum_{k>=0} 1/(z+k)^3
std::complex<double> tetragamma(std::complex<double> z);

} // namespace landauer::special
