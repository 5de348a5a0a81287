#pragma once

#include <complex>
#include <vector>

namespace regulab::detail {

// Unnormalized DFT. sign = -1: sum x_j e^{-2 pi i jk/N}; sign = +1: inverse kernel.
void dft(std::vector<std::complex<double>>& data, int n, int sign);
void dft2(std::vector<std::complex<double>>& data, int n0, int n1, int sign);

}  // namespace regulab::detail
