#pragma once

// Independent reference computations used to freeze expected values.
// They deliberately avoid the library's own kernels.

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace arrowlab::oracle {

using Complex = std::complex<double>;

/// Full amplitude array from product factors; particle 0 most significant.
inline std::vector<Complex> kron(const std::vector<std::vector<Complex>>& factors) {
  std::vector<Complex> out{1.0};
  for (const auto& f : factors) {
    std::vector<Complex> next;
    next.reserve(out.size() * f.size());
    for (const auto& a : out) {
      for (const auto& b : f) next.push_back(a * b);
    }
    out = std::move(next);
  }
  return out;
}

/// Coordinate x_k of flat index `idx` in an (M)^N array.
inline std::size_t coordinate(std::size_t idx, std::size_t n, std::size_t m, std::size_t k) {
  for (std::size_t j = n - 1; j > k; --j) idx /= m;
  return idx % m;
}

inline std::vector<double> marginal(const std::vector<Complex>& amps, std::size_t n, std::size_t m, std::size_t k) {
  std::vector<double> p(m, 0.0);
  for (std::size_t i = 0; i < amps.size(); ++i) p[coordinate(i, n, m, k)] += std::norm(amps[i]);
  double s = 0.0;
  for (double v : p) s += v;
  for (double& v : p) v /= s;
  return p;
}

/// Born weights for hit centers with the Gaussian written as
/// exp(-(x - a)^2 / (2 Delta)), Delta being the squared-length parameter.
/// The library's width w corresponds to Delta = 2 w.
inline std::vector<double> born_weights(const std::vector<Complex>& amps, std::size_t n, std::size_t m, std::size_t k,
                                        double big_delta) {
  std::vector<double> w(m, 0.0);
  for (std::size_t a = 0; a < m; ++a) {
    double s = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
      const double d = static_cast<double>(coordinate(i, n, m, k)) - static_cast<double>(a);
      const double g = std::exp(-d * d / (2.0 * big_delta));
      s += std::norm(g * amps[i]);
    }
    w[a] = s;
  }
  double total = 0.0;
  for (double v : w) total += v;
  for (double& v : w) v /= total;
  return w;
}

/// exp(-i H dt) by a truncated Taylor series with scaling and squaring.
inline Eigen::MatrixXcd expm_taylor(const Eigen::MatrixXd& h, double dt) {
  const Eigen::Index m = h.rows();
  int squarings = 0;
  double scale = dt * h.cwiseAbs().rowwise().sum().maxCoeff();
  while (scale > 0.25) {
    scale /= 2;
    ++squarings;
  }
  const Eigen::MatrixXcd a = h.cast<Complex>() * Complex(0.0, -dt / std::ldexp(1.0, squarings));
  Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(m, m);
  Eigen::MatrixXcd sum = term;
  for (int j = 1; j <= 30; ++j) {
    term = term * a / static_cast<double>(j);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

inline double shannon(const std::vector<double>& p) {
  double s = 0.0;
  for (double v : p) {
    if (v > 0) s -= v * std::log(v);
  }
  return s;
}

}  // namespace arrowlab::oracle
