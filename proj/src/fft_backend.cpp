#include "fft_backend.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace enfsim::fftbk {

namespace {

std::mutex plan_mutex;

fftw_plan r2c_plan(std::size_t n) {
  static std::map<std::size_t, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<double> in(n);
  std::vector<std::complex<double>> out(n / 2 + 1);
  fftw_plan p = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(),
                                     reinterpret_cast<fftw_complex*>(out.data()),
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
  cache.emplace(n, p);
  return p;
}

fftw_plan c2c_backward_plan(std::size_t n) {
  static std::map<std::size_t, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<std::complex<double>> in(n), out(n);
  fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n),
                                 reinterpret_cast<fftw_complex*>(in.data()),
                                 reinterpret_cast<fftw_complex*>(out.data()),
                                 FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  cache.emplace(n, p);
  return p;
}

fftw_plan r2c_2d_plan(std::size_t rows, std::size_t cols) {
  static std::map<std::pair<std::size_t, std::size_t>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto key = std::make_pair(rows, cols);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<double> in(rows * cols);
  std::vector<std::complex<double>> out(rows * (cols / 2 + 1));
  fftw_plan p = fftw_plan_dft_r2c_2d(static_cast<int>(rows), static_cast<int>(cols), in.data(),
                                     reinterpret_cast<fftw_complex*>(out.data()),
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
  cache.emplace(key, p);
  return p;
}

fftw_plan c2r_2d_plan(std::size_t rows, std::size_t cols) {
  static std::map<std::pair<std::size_t, std::size_t>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto key = std::make_pair(rows, cols);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<std::complex<double>> in(rows * (cols / 2 + 1));
  std::vector<double> out(rows * cols);
  fftw_plan p = fftw_plan_dft_c2r_2d(static_cast<int>(rows), static_cast<int>(cols),
                                     reinterpret_cast<fftw_complex*>(in.data()), out.data(),
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
  cache.emplace(key, p);
  return p;
}

}  // namespace

std::vector<std::complex<double>> real_dft(const double* in, std::size_t n) {
  if (n == 0) throw std::invalid_argument("real_dft: empty input");
  std::vector<std::complex<double>> half(n / 2 + 1);
  // fftw_execute_dft_r2c wants non-const input; it does not modify it for r2c
  fftw_execute_dft_r2c(r2c_plan(n), const_cast<double*>(in),
                       reinterpret_cast<fftw_complex*>(half.data()));
  std::vector<std::complex<double>> full(n);
  for (std::size_t k = 0; k < half.size(); ++k) full[k] = half[k];
  for (std::size_t k = half.size(); k < n; ++k) full[k] = std::conj(full[n - k]);
  return full;
}

std::vector<std::complex<double>> inverse_cdft(const std::complex<double>* in, std::size_t n) {
  if (n == 0) throw std::invalid_argument("inverse_cdft: empty input");
  std::vector<std::complex<double>> tmp(in, in + n), out(n);
  fftw_execute_dft(c2c_backward_plan(n), reinterpret_cast<fftw_complex*>(tmp.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / static_cast<double>(n);
  for (auto& v : out) v *= scale;
  return out;
}

std::vector<std::complex<double>> real_dft_2d(const double* in, std::size_t rows, std::size_t cols) {
  std::vector<std::complex<double>> out(rows * (cols / 2 + 1));
  fftw_execute_dft_r2c(r2c_2d_plan(rows, cols), const_cast<double*>(in),
                       reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

std::vector<double> inverse_real_dft_2d(const std::complex<double>* in, std::size_t rows, std::size_t cols) {
  // c2r destroys its input, so work on a copy
  std::vector<std::complex<double>> tmp(in, in + rows * (cols / 2 + 1));
  std::vector<double> out(rows * cols);
  fftw_execute_dft_c2r(c2r_2d_plan(rows, cols), reinterpret_cast<fftw_complex*>(tmp.data()),
                       out.data());
  const double scale = 1.0 / static_cast<double>(rows * cols);
  for (auto& v : out) v *= scale;
  return out;
}

std::size_t next_fast_len(std::size_t n) {
  if (n <= 1) return 1;
  for (std::size_t m = n;; ++m) {
    std::size_t r = m;
    for (std::size_t f : {2, 3, 5, 7}) {
      while (r % f == 0) r /= f;
    }
    if (r == 1) return m;
  }
}

}  // namespace enfsim::fftbk
