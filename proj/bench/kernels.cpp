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

// Serial reference path against the OpenMP kernels: synthesis, demodulation, beamforming.

#include <benchmark/benchmark.h>

#include "mxbf/beamform.hpp"
#include "mxbf/forward.hpp"
#include "mxbf/sigproc.hpp"

namespace {

using namespace mxbf;

struct Scene {
  CoupledArray array = couple(build_matrix_array(16, 16, 0.3e-3, 0.3e-3, {0.275e-3, 0.275e-3}, 2), 1);
  MediumSpec medium{1540.0};
  TransmitSequence sequence =
      build_transmit_sequence(array, {{0, 0, 0}}, star_pattern(), 8.29e6, {}, medium);
  Phantom phantom = make_cyst_phantom({{-2e-3, -1e-3, 8e-3}, {2e-3, 1e-3, 12e-3}, 20.0, {}, 0.0, 1});
  ChannelData rf = synthesize_rf(phantom, array, sequence, medium, 33.16e6);
  IQData iq = demodulate(rf);
  ReceiverGrid receivers = receiver_grid(array);
  PixelGrid grid = PixelGrid::covering({-1.6e-3, -0.4e-3, 9e-3}, {1.6e-3, 0.4e-3, 11e-3},
                                       {0.1e-3, 0.2e-3, 0.1e-3});
};

const Scene& scene() {
  static const Scene s;
  return s;
}

Exec mode(const benchmark::State& state) { return state.range(0) ? Exec::parallel : Exec::serial; }

void BM_Synthesis(benchmark::State& state) {
  const auto& s = scene();
  for (auto _ : state) {
    auto d = synthesize_rf(s.phantom, s.array, s.sequence, s.medium, 33.16e6, mode(state));
    benchmark::DoNotOptimize(d.samples.data());
  }
}

void BM_Demodulate(benchmark::State& state) {
  const auto& s = scene();
  for (auto _ : state) {
    auto d = demodulate(s.rf, {}, mode(state));
    benchmark::DoNotOptimize(d.samples.data());
  }
}

void BM_Beamform(benchmark::State& state) {
  const auto& s = scene();
  std::vector<BeamformerConfig> cfg(1);
  cfg[0].kind = static_cast<Beamformer>(state.range(1));
  const BeamformInputs in{&s.iq, &s.receivers, &s.sequence, s.medium, 1.0};
  for (auto _ : state) {
    auto v = beamform(in, s.grid, cfg, mode(state));
    benchmark::DoNotOptimize(v.front().values.data());
  }
  state.SetLabel(to_string(cfg[0].kind));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * s.grid.size()));
}

}  // namespace

BENCHMARK(BM_Synthesis)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Demodulate)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Beamform)
    ->ArgNames({"parallel", "beamformer"})
    ->ArgsProduct({{0, 1}, {0, 1, 2, 3}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

BENCHMARK_MAIN();
