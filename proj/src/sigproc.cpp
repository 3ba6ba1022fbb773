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

#include "mxbf/sigproc.hpp"

#include <cstdint>

namespace mxbf {

std::vector<double> lowpass_fir(std::size_t taps, double cutoff_hz, double sampling_rate) {
  if (taps == 0 || taps % 2 == 0) throw std::invalid_argument("FIR length must be odd");
  if (!(cutoff_hz > 0.0) || !(cutoff_hz < 0.5 * sampling_rate)) {
    throw std::invalid_argument("FIR cutoff must lie in (0, fs/2)");
  }
  const double fc = cutoff_hz / sampling_rate;
  const auto mid = static_cast<double>(taps / 2);
  std::vector<double> h(taps);
  double sum = 0.0;
  for (std::size_t n = 0; n < taps; ++n) {
    const double m = static_cast<double>(n) - mid;
    const double window =
        taps == 1 ? 1.0 : 0.54 - 0.46 * std::cos(2.0 * kPi * static_cast<double>(n) /
                                                  static_cast<double>(taps - 1));
    h[n] = 2.0 * fc * sinc(2.0 * fc * m) * window;
    sum += h[n];
  }
  for (auto& v : h) v /= sum;
  return h;
}

IQData demodulate(const ChannelData& rf, const DemodConfig& config, Exec exec) {
  const double fs = rf.sampling_rate;
  const double f0 = rf.center_frequency;
  if (!(fs > 0.0) || !(f0 > 0.0)) throw std::invalid_argument("sampling rate and f0 must be positive");
  if (f0 >= 0.5 * fs) throw std::invalid_argument("center frequency must be below fs/2");
  std::size_t taps = config.taps;
  if (taps == 0) {
    taps = static_cast<std::size_t>(std::ceil(8.0 * fs / f0));
    if (taps % 2 == 0) ++taps;
  }
  const std::vector<double> h = lowpass_fir(taps, f0, fs);
  const std::size_t half = taps / 2;

  IQData iq;
  iq.n_tx = rf.n_tx;
  iq.n_rx = rf.n_rx;
  iq.n_t = rf.n_t;
  iq.sampling_rate = fs;
  iq.start_time = rf.start_time;
  iq.center_frequency = f0;
  iq.samples.assign(rf.samples.size(), cfloat(0.0f, 0.0f));

  // Mixing phasor per sample, shared by all traces.
  std::vector<cdouble> mix(rf.n_t);
  for (std::size_t n = 0; n < rf.n_t; ++n) {
    const double ph = -2.0 * kPi * f0 * rf.time(n);
    mix[n] = {std::cos(ph), std::sin(ph)};
  }

  const auto traces = static_cast<std::int64_t>(rf.n_tx * rf.n_rx);
  const std::size_t nt = rf.n_t;
  auto run = [&](std::int64_t t, std::vector<cdouble>& mixed) {
    const float* x = rf.samples.data() + static_cast<std::size_t>(t) * nt;
    cfloat* y = iq.samples.data() + static_cast<std::size_t>(t) * nt;
    for (std::size_t n = 0; n < nt; ++n) mixed[n] = static_cast<double>(x[n]) * mix[n];
    for (std::size_t n = 0; n < nt; ++n) {
      cdouble acc(0.0, 0.0);
      const std::size_t m_lo = n < half ? half - n : 0;
      const std::size_t m_hi = std::min(taps, nt + half - n);
      for (std::size_t m = m_lo; m < m_hi; ++m) acc += h[m] * mixed[n + m - half];
      y[n] = cfloat(2.0 * acc);
    }
  };

  if (exec == Exec::serial) {
    std::vector<cdouble> mixed(nt);
    for (std::int64_t t = 0; t < traces; ++t) run(t, mixed);
  } else {
#pragma omp parallel
    {
      std::vector<cdouble> mixed(nt);
#pragma omp for schedule(static)
      for (std::int64_t t = 0; t < traces; ++t) run(t, mixed);
    }
  }
  return iq;
}

NaturalCubicSpline::NaturalCubicSpline(std::vector<double> values) : y_(std::move(values)) {
  const std::size_t n = y_.size();
  if (n < 4) throw std::invalid_argument("spline needs at least four knots");
  m_.assign(n, 0.0);
  // Interior equations m[i-1] + 4 m[i] + m[i+1] = 6 (y[i+1] - 2 y[i] + y[i-1]), m[0] = m[n-1] = 0.
  const std::size_t k = n - 2;
  std::vector<double> c(k), d(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double rhs = 6.0 * (y_[i + 2] - 2.0 * y_[i + 1] + y_[i]);
    const double denom = 4.0 - (i > 0 ? c[i - 1] : 0.0);
    c[i] = 1.0 / denom;
    d[i] = (rhs - (i > 0 ? d[i - 1] : 0.0)) / denom;
  }
  for (std::size_t i = k; i-- > 0;) {
    m_[i + 1] = d[i] - (i + 1 < k ? c[i] * m_[i + 2] : 0.0);
  }
}

double NaturalCubicSpline::operator()(double x) const {
  const std::size_t n = y_.size();
  if (x <= 0.0) x = 0.0;
  if (x >= static_cast<double>(n - 1)) x = static_cast<double>(n - 1);
  std::size_t i = static_cast<std::size_t>(x);
  if (i >= n - 1) i = n - 2;
  const double t = x - static_cast<double>(i);
  const double a = 1.0 - t;
  return a * y_[i] + t * y_[i + 1] +
         ((a * a * a - a) * m_[i] + (t * t * t - t) * m_[i + 1]) / 6.0;
}

std::vector<double> spline_upsample(const std::vector<double>& profile, std::size_t factor) {
  if (profile.size() < 4) throw std::invalid_argument("profile needs at least four samples");
  if (factor == 0) throw std::invalid_argument("upsampling factor must be at least 1");
  if (factor == 1) return profile;
  const NaturalCubicSpline spline(profile);
  const std::size_t n = profile.size();
  std::vector<double> out((n - 1) * factor + 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    out[i * factor] = profile[i];
    for (std::size_t j = 1; j < factor; ++j) {
      out[i * factor + j] =
          spline(static_cast<double>(i) + static_cast<double>(j) / static_cast<double>(factor));
    }
  }
  out.back() = profile.back();
  return out;
}

}  // namespace mxbf
