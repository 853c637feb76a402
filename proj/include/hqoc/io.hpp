// Copyright 2026 The hqoc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON documents for systems and pulses, plus the CSV conventions shared by
// every exported table.

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hqoc/model.hpp"

namespace hqoc {

using Json = nlohmann::ordered_json;

// System document: {"n_states", "energies", "dipole_x", "dipole_y",
// "dipole_z", optional "labels"}; dipoles are row-major Q x Q arrays.
MolecularSystem system_from_json(const Json& doc);
Json system_to_json(const MolecularSystem& system);
MolecularSystem load_system(const std::filesystem::path& path);

// Pulse document: {"duration", "n_harmonics", "include_dc", "amplitudes",
// "amplitude_clamp"}; amplitudes are row-major 3 x (M+1) (a flat array or
// three nested rows), amplitude_clamp may be null.
PulseParameters pulse_from_json(const Json& doc);
Json pulse_to_json(const PulseParameters& pulse);
PulseParameters load_pulse(const std::filesystem::path& path);
void save_pulse(const PulseParameters& pulse, const std::filesystem::path& path);

Json load_json(const std::filesystem::path& path);
void save_json(const Json& doc, const std::filesystem::path& path);

/// 64-bit FNV-1a, used to fingerprint configurations in CSV headers.
std::uint64_t fnv1a64(std::string_view text);
std::string hex64(std::uint64_t value);

/// Provenance recorded as the first (comment) line of every CSV.
struct CsvProvenance {
  std::string config_hash;
  std::uint64_t seed = 0;
};

/// Shortest round-trip decimal representation.
std::string format_double(double value);

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const CsvProvenance& provenance,
            const std::vector<std::string>& columns);

  CsvWriter& cell(double value);
  CsvWriter& cell(long long value);
  CsvWriter& cell(int value) { return cell(static_cast<long long>(value)); }
  CsvWriter& cell(std::size_t value) { return cell(static_cast<long long>(value)); }
  CsvWriter& cell(const std::string& value);
  void end_row();

 private:
  std::ofstream out_;
  std::size_t n_columns_;
  std::size_t in_row_ = 0;
};

}  // namespace hqoc
