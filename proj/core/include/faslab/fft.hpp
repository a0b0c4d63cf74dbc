#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace faslab {

// Smallest power of two >= n (n >= 1).
std::size_t next_pow2(std::size_t n);

// In-place iterative radix-2 transform. Size must be a power of two.
// inverse applies the 1/N scale so fft(fft(x), inverse) == x.
void fft_pow2(std::vector<std::complex<double>>& data, bool inverse);

}  // namespace faslab
