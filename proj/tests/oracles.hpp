/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The mxbf Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Brute-force reference implementations used only by the tests. They follow the defining
// formulas directly and share no code with the library kernels.

#ifndef MXBF_TESTS_ORACLES_HPP
#define MXBF_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace oracle {

using cd = std::complex<double>;
constexpr double pi = 3.14159265358979323846;

/// Dense row-major complex matrix, rows x cols.
struct Mat {
  std::size_t rows = 0, cols = 0;
  std::vector<cd> a;
  Mat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}
  cd& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  cd operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

inline std::vector<cd> random_complex(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cd> v(n);
  for (auto& x : v) x = {u(g), u(g)};
  return v;
}

/// Gaussian elimination with partial pivoting; solves A x = b.
inline std::vector<cd> solve(Mat A, std::vector<cd> b) {
  const std::size_t n = A.rows;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(A(r, col)) > std::abs(A(piv, col))) piv = r;
    }
    if (std::abs(A(piv, col)) == 0.0) throw std::runtime_error("singular");
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(A(col, j), A(piv, j));
      std::swap(b[col], b[piv]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const cd f = A(r, col) / A(col, col);
      for (std::size_t j = col; j < n; ++j) A(r, j) -= f * A(col, j);
      b[r] -= f * b[col];
    }
  }
  std::vector<cd> x(n);
  for (std::size_t i = n; i-- > 0;) {
    cd s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= A(i, j) * x[j];
    x[i] = s / A(i, i);
  }
  return x;
}

/// Plain double sum over a rows x cols block stored row-major, column-major traversal.
inline cd das(const std::vector<cd>& s, std::size_t rows, std::size_t cols) {
  cd acc = 0.0;
  for (std::size_t c = 0; c < cols; ++c)
    for (std::size_t r = 0; r < rows; ++r) acc += s[r * cols + c];
  return acc;
}

/// Row sums (elevation) and column sums (azimuth) of a square Q x Q block.
inline std::pair<std::vector<cd>, std::vector<cd>> projections(const std::vector<cd>& s,
                                                               std::size_t q) {
  std::vector<cd> az(q, 0.0), el(q, 0.0);
  for (std::size_t c = 0; c < q; ++c)
    for (std::size_t r = 0; r < q; ++r) az[c] += s[r * q + c];
  for (std::size_t r = 0; r < q; ++r)
    for (std::size_t c = 0; c < q; ++c) el[r] += s[r * q + c];
  return {az, el};
}

inline double cf(const std::vector<cd>& p) {
  cd sum = 0.0;
  double pow = 0.0;
  for (const auto& v : p) {
    sum += v;
    pow += std::real(v * std::conj(v));
  }
  if (pow == 0.0) return 0.0;
  return std::real(sum * std::conj(sum)) / (static_cast<double>(p.size()) * pow);
}

inline cd dcf(const std::vector<cd>& s, std::size_t q) {
  const auto [az, el] = projections(s, q);
  return das(s, q, q) * cf(az) * cf(el);
}

/// MV weights from the constrained minimization min w^H R w subject to a^H w = 1,
/// solved as the bordered (KKT) system [R -a; a^H 0][w; mu] = [0; 1].
inline std::vector<cd> mv_weights(const std::vector<cd>& p, std::size_t l, double scale) {
  const std::size_t q = p.size();
  const std::size_t k = q - l + 1;
  Mat r(l, l);
  for (std::size_t s = 0; s < k; ++s)
    for (std::size_t i = 0; i < l; ++i)
      for (std::size_t j = 0; j < l; ++j) r(i, j) += p[s + i] * std::conj(p[s + j]);
  double tr = 0.0;
  for (std::size_t i = 0; i < l; ++i) tr += r(i, i).real() / static_cast<double>(k);
  Mat kkt(l + 1, l + 1);
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t j = 0; j < l; ++j) kkt(i, j) = r(i, j) / static_cast<double>(k);
    kkt(i, i) += scale * tr;
    kkt(i, l) = -1.0;
    kkt(l, i) = 1.0;
  }
  std::vector<cd> rhs(l + 1, 0.0);
  rhs[l] = 1.0;
  auto x = solve(kkt, rhs);
  x.resize(l);
  return x;
}

inline cd mv_direction(const std::vector<cd>& p, std::size_t l, double scale) {
  const auto w = mv_weights(p, l, scale);
  const std::size_t k = p.size() - l + 1;
  cd y = 0.0;
  for (std::size_t s = 0; s < k; ++s)
    for (std::size_t i = 0; i < l; ++i) y += std::conj(w[i]) * p[s + i];
  return y / static_cast<double>(k);
}

inline cd mv(const std::vector<cd>& s, std::size_t q, std::size_t l, double scale) {
  const auto [az, el] = projections(s, q);
  return std::sqrt(mv_direction(az, l, scale) * std::conj(mv_direction(el, l, scale)));
}

/// NSI on an even-sided block via explicit apodization masks and six weighted sums.
inline double nsi(const std::vector<cd>& s, std::size_t rows, std::size_t cols, double dc) {
  cd zr = 0.0, zc = 0.0, d1r = 0.0, d2r = 0.0, d1c = 0.0, d2c = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double mr = r < rows / 2 ? 1.0 : -1.0;
      const double mc = c < cols / 2 ? 1.0 : -1.0;
      const cd v = s[r * cols + c];
      zr += mr * v;
      zc += mc * v;
      d1r += (mr + dc) * v;
      d2r += (mr - dc) * v;
      d1c += (mc + dc) * v;
      d2c += (mc - dc) * v;
    }
  }
  const double e_zm = std::max(std::abs(zr), std::abs(zc));
  const double e_dc = std::max((std::abs(d1r) + std::abs(d2r)) / 2.0,
                               (std::abs(d1c) + std::abs(d2c)) / 2.0);
  return std::abs(e_dc - e_zm);
}

/// |integral of exp(-j 2 pi x u / lambda)| over a union of intervals, normalized by total length.
inline double aperture_ft(const std::vector<std::pair<double, double>>& spans, double u_over_lambda,
                          std::size_t steps = 4000) {
  cd acc = 0.0;
  double len = 0.0;
  for (const auto& [a, b] : spans) {
    const double h = (b - a) / static_cast<double>(steps);
    for (std::size_t i = 0; i < steps; ++i) {
      const double x = a + (static_cast<double>(i) + 0.5) * h;
      acc += h * std::exp(cd(0.0, -2.0 * pi * x * u_over_lambda));
    }
    len += b - a;
  }
  return std::abs(acc) / len;
}

/// Signed version for a symmetric aperture (real transform), sign from the cosine integral.
inline double aperture_ft_signed(const std::vector<std::pair<double, double>>& spans,
                                 double u_over_lambda, std::size_t steps = 4000) {
  double acc = 0.0, len = 0.0;
  for (const auto& [a, b] : spans) {
    const double h = (b - a) / static_cast<double>(steps);
    for (std::size_t i = 0; i < steps; ++i) {
      const double x = a + (static_cast<double>(i) + 0.5) * h;
      acc += h * std::cos(2.0 * pi * x * u_over_lambda);
    }
    len += b - a;
  }
  return acc / len;
}

/// Bisection root of f on [a, b], f(a) and f(b) of opposite sign.
template <typename F>
double bisect(F f, double a, double b, int iters = 200) {
  double fa = f(a);
  for (int i = 0; i < iters; ++i) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if ((fm < 0) == (fa < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

inline double rel_err(cd got, cd want) {
  const double scale = std::max(std::abs(want), 1e-300);
  return std::abs(got - want) / scale;
}

}  // namespace oracle

#endif  // MXBF_TESTS_ORACLES_HPP
