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

#ifndef MXBF_SIGPROC_HPP
#define MXBF_SIGPROC_HPP

#include <cstddef>
#include <vector>

#include "mxbf/common.hpp"
#include "mxbf/forward.hpp"

namespace mxbf {

/// Complex baseband samples, same layout and time axis as the source ChannelData.
struct IQData {
  std::size_t n_tx = 0;
  std::size_t n_rx = 0;
  std::size_t n_t = 0;
  double sampling_rate = 0.0;
  double start_time = 0.0;
  double center_frequency = 0.0;
  std::vector<cfloat> samples;

  cfloat* trace(std::size_t k, std::size_t i) { return samples.data() + (k * n_rx + i) * n_t; }
  const cfloat* trace(std::size_t k, std::size_t i) const {
    return samples.data() + (k * n_rx + i) * n_t;
  }
};

/// Read-only view of one IQ trace plus its time axis.
struct IQTrace {
  const cfloat* samples = nullptr;
  std::size_t n_t = 0;
  double sampling_rate = 0.0;
  double start_time = 0.0;
};

struct DemodConfig {
  /// Odd FIR length. 0 picks 8 * fs / f0 rounded up to odd.
  std::size_t taps = 0;
};

/// Hamming-windowed sinc low-pass, unit DC gain, cutoff in Hz.
std::vector<double> lowpass_fir(std::size_t taps, double cutoff_hz, double sampling_rate);

/// Mix down by exp(-j 2 pi f0 t) and low-pass at f0 with a centered linear-phase FIR.
/// The output is scaled by 2 so that a carrier of amplitude A maps to magnitude A.
IQData demodulate(const ChannelData& rf, const DemodConfig& config = {},
                  Exec exec = Exec::parallel);

/**
 * IQ value at time tau, linearly interpolated, rotated by exp(+j 2 pi f0 tau).
 *
 * Demodulation leaves an echo arriving at tau with phase exp(-j 2 pi f0 tau), so the positive
 * rotation brings every channel back to a common phase. Times outside the trace give 0.
 */
inline cdouble sample_delayed(const IQTrace& trace, double tau, double f0) {
  const double pos = (tau - trace.start_time) * trace.sampling_rate;
  if (!(pos >= 0.0) || pos > static_cast<double>(trace.n_t - 1)) return {0.0, 0.0};
  const auto i = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(i);
  cdouble v(trace.samples[i]);
  if (frac > 0.0) v += frac * (cdouble(trace.samples[i + 1]) - v);
  const double ph = 2.0 * kPi * f0 * tau;
  return v * cdouble(std::cos(ph), std::sin(ph));
}

/// Natural cubic spline through uniformly spaced knots x = 0, 1, ..., n-1.
class NaturalCubicSpline {
 public:
  explicit NaturalCubicSpline(std::vector<double> values);
  double operator()(double x) const;
  std::size_t size() const { return y_.size(); }

 private:
  std::vector<double> y_;
  std::vector<double> m_;  ///< second derivatives at the knots
};

/// Spline-interpolated profile of length (n - 1) * factor + 1 through the input knots.
std::vector<double> spline_upsample(const std::vector<double>& profile, std::size_t factor);

}  // namespace mxbf

#endif  // MXBF_SIGPROC_HPP
