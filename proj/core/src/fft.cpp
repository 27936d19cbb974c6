#include "sweeplink/fft.hpp"

#include <fftw3.h>

#include <stdexcept>

namespace sweeplink {

namespace {

std::vector<std::complex<double>> transform(const std::vector<std::complex<double>>& x, int sign)
{
    if (x.empty()) throw std::invalid_argument("fft: empty input");
    const int n = static_cast<int>(x.size());
    fftw_complex* buf = fftw_alloc_complex(x.size());
    if (!buf) throw std::bad_alloc();
    for (int i = 0; i < n; ++i) {
        buf[i][0] = x[i].real();
        buf[i][1] = x[i].imag();
    }
    // FFTW_ESTIMATE keeps planning deterministic and leaves the input intact.
    fftw_plan plan = fftw_plan_dft_1d(n, buf, buf, sign, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    std::vector<std::complex<double>> out(x.size());
    for (int i = 0; i < n; ++i) out[i] = {buf[i][0], buf[i][1]};
    fftw_free(buf);
    return out;
}

} // namespace

std::vector<std::complex<double>> fft(const std::vector<std::complex<double>>& x)
{
    return transform(x, FFTW_FORWARD);
}

std::vector<std::complex<double>> ifft(const std::vector<std::complex<double>>& x)
{
    auto out = transform(x, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(x.size());
    for (auto& v : out) v *= scale;
    return out;
}

} // namespace sweeplink
