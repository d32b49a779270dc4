#pragma once

#include <complex>
#include <vector>

namespace bf::fft {

// Unnormalised real-to-half-complex transform of length n (n/2+1 outputs).
std::vector<std::complex<double>> forward(const std::vector<double>& x);
void forward(const double* x, std::size_t n, std::complex<double>* out);
// Inverse of forward including the 1/n factor.
std::vector<double> inverse(const std::vector<std::complex<double>>& c, std::size_t n);
void inverse(const std::complex<double>* c, std::size_t n, double* out);

}  // namespace bf::fft
