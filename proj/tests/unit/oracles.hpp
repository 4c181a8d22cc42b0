#pragma once

// Independent reference implementations the production code is checked
// against. Deliberately naive: defining sums and O(n^2) loops only.

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "enfsim/frame.hpp"
#include "enfsim/trigger.hpp"

namespace oracle {

// A_k = sum_n exp(-j*2*pi*k*n/N) * a_n, evaluated literally
inline std::vector<std::complex<double>> naive_dft(std::span<const double> a) {
  const std::size_t n = a.size();
  std::vector<std::complex<double>> out(n);
  const double w = -2.0 * 3.14159265358979323846 / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double ang = w * static_cast<double>(k) * static_cast<double>(i);
      acc += a[i] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  return out;
}

inline std::vector<double> naive_idft(std::span<const std::complex<double>> bins) {
  const std::size_t n = bins.size();
  std::vector<double> out(n);
  const double w = 2.0 * 3.14159265358979323846 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      const double ang = w * static_cast<double>(k) * static_cast<double>(i);
      acc += bins[k] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[i] = acc.real() / static_cast<double>(n);
  }
  return out;
}

// full O(k^2) 2-D Gaussian convolution with edge replication
inline enfsim::Frame direct_gaussian_blur(const enfsim::Frame& f, int kernel, double sigma) {
  const int half = kernel / 2;
  std::vector<double> weights(static_cast<std::size_t>(kernel) * kernel);
  double sum = 0.0;
  for (int dy = -half; dy <= half; ++dy) {
    for (int dx = -half; dx <= half; ++dx) {
      const double g = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
      weights[static_cast<std::size_t>(dy + half) * kernel + (dx + half)] = g;
      sum += g;
    }
  }
  for (auto& w : weights) w /= sum;

  enfsim::Frame out = f;
  for (int r = 0; r < f.height; ++r) {
    for (int c = 0; c < f.width; ++c) {
      double acc = 0.0;
      for (int dy = -half; dy <= half; ++dy) {
        for (int dx = -half; dx <= half; ++dx) {
          const int rr = std::clamp(r + dy, 0, f.height - 1);
          const int cc = std::clamp(c + dx, 0, f.width - 1);
          acc += weights[static_cast<std::size_t>(dy + half) * kernel + (dx + half)] * f.at(rr, cc);
        }
      }
      out.at(r, c) = static_cast<float>(acc);
    }
  }
  return out;
}

// textbook two-pass Pearson
inline double direct_pearson(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double num = 0.0, dx2 = 0.0, dy2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (x[i] - mx) * (y[i] - my);
    dx2 += (x[i] - mx) * (x[i] - mx);
    dy2 += (y[i] - my) * (y[i] - my);
  }
  return num / std::sqrt(dx2 * dy2);
}

// NCC by the definition, one position at a time
inline double direct_ncc_at(const enfsim::Frame& img, const enfsim::Patch& t, int y, int x) {
  const std::size_t n = static_cast<std::size_t>(t.width) * t.height;
  double fm = 0.0, tm = 0.0;
  for (int r = 0; r < t.height; ++r) {
    for (int c = 0; c < t.width; ++c) {
      fm += img.at(y + r, x + c);
      tm += t.pixels[static_cast<std::size_t>(r) * t.width + c];
    }
  }
  fm /= static_cast<double>(n);
  tm /= static_cast<double>(n);
  double num = 0.0, df2 = 0.0, dt2 = 0.0;
  for (int r = 0; r < t.height; ++r) {
    for (int c = 0; c < t.width; ++c) {
      const double df = img.at(y + r, x + c) - fm;
      const double dt = t.pixels[static_cast<std::size_t>(r) * t.width + c] - tm;
      num += df * dt;
      df2 += df * df;
      dt2 += dt * dt;
    }
  }
  if (df2 <= 1e-7 * static_cast<double>(n) || dt2 <= 0.0) return 0.0;
  return num / std::sqrt(df2 * dt2);
}

inline std::vector<double> direct_ncc_map(const enfsim::Frame& img, const enfsim::Patch& t) {
  const int out_h = img.height - t.height + 1;
  const int out_w = img.width - t.width + 1;
  std::vector<double> out(static_cast<std::size_t>(out_h) * out_w);
  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      out[static_cast<std::size_t>(y) * out_w + x] = direct_ncc_at(img, t, y, x);
    }
  }
  return out;
}

}  // namespace oracle
