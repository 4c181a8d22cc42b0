#pragma once

// Internal FFTW3 wrapper. Plans are cached per shape (FFTW_ESTIMATE, so plan
// choice is deterministic) and executed through the new-array interface,
// which is thread-safe for distinct buffers. Not part of the public API.

#include <complex>
#include <cstddef>
#include <vector>

namespace enfsim::fftbk {

// full-length complex spectrum of a real signal (conjugate half filled in)
std::vector<std::complex<double>> real_dft(const double* in, std::size_t n);

// inverse complex DFT, scaled by 1/N
std::vector<std::complex<double>> inverse_cdft(const std::complex<double>* in, std::size_t n);

// 2-D real forward / half-complex inverse, row-major [rows x cols];
// out has rows * (cols/2 + 1) complex values
std::vector<std::complex<double>> real_dft_2d(const double* in, std::size_t rows, std::size_t cols);
std::vector<double> inverse_real_dft_2d(const std::complex<double>* in, std::size_t rows, std::size_t cols);

// smallest size >= n whose factors are all in {2,3,5,7}
std::size_t next_fast_len(std::size_t n);

}  // namespace enfsim::fftbk
