#pragma once

#include <complex>
#include <vector>

namespace scalar_ab::detail {

// In-place radix-2 transform X_k = sum_j x_j exp(sign * 2 pi i j k / N),
// unnormalised. N must be a power of two.
void fft_radix2(std::vector<std::complex<double>>& data, int sign);

bool is_power_of_two(std::size_t n);
std::size_t next_power_of_two(std::size_t n);

}  // namespace scalar_ab::detail
