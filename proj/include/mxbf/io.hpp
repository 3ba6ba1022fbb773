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

#ifndef MXBF_IO_HPP
#define MXBF_IO_HPP

#include <string>

#include "mxbf/beamform.hpp"
#include "mxbf/forward.hpp"

namespace mxbf {

/// "MBCD" channel data file, version 1. All fields little-endian.
void write_channel_data(const std::string& path, const ChannelData& data);
ChannelData read_channel_data(const std::string& path);

/// "MBVL" volume file, version 1. Complex volumes store f32 pairs, envelope volumes f32.
void write_volume(const std::string& path, const BeamformedVolume& volume);
BeamformedVolume read_volume(const std::string& path);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::string& path);
std::string sha256_hex(const std::string& bytes);

}  // namespace mxbf

#endif  // MXBF_IO_HPP
