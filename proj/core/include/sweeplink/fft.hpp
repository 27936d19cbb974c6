#pragma once

#include <complex>
#include <vector>

namespace sweeplink {

// Unnormalized forward DFT, X_k = sum_n x_n exp(-j 2 pi k n / N).
std::vector<std::complex<double>> fft(const std::vector<std::complex<double>>& x);

// Inverse DFT including the 1/N factor, so ifft(fft(x)) == x.
std::vector<std::complex<double>> ifft(const std::vector<std::complex<double>>& x);

} // namespace sweeplink
