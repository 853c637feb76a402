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

#include "hqoc/io.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "hqoc/error.hpp"

namespace hqoc {

namespace {

template <typename T>
T require(const Json& doc, const char* key) {
  if (!doc.contains(key)) throw ConfigError(std::string("missing key '") + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

Eigen::MatrixXd square_matrix(const Json& doc, const char* key, Eigen::Index q) {
  const auto flat = [&] {
    const Json& v = doc.at(key);
    std::vector<double> out;
    if (!v.is_array()) throw ConfigError(std::string("'") + key + "' must be an array");
    for (const auto& row : v) {
      if (row.is_array()) {
        for (const auto& x : row) out.push_back(x.get<double>());
      } else {
        out.push_back(row.get<double>());
      }
    }
    return out;
  };
  if (!doc.contains(key)) throw ConfigError(std::string("missing key '") + key + "'");
  std::vector<double> values;
  try {
    values = flat();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
  if (values.size() != static_cast<std::size_t>(q * q)) {
    std::ostringstream msg;
    msg << "'" << key << "' must hold " << q * q << " entries";
    throw ConfigError(msg.str());
  }
  Eigen::MatrixXd m(q, q);
  for (Eigen::Index i = 0; i < q; ++i)
    for (Eigen::Index j = 0; j < q; ++j) m(i, j) = values[static_cast<std::size_t>(i * q + j)];
  return m;
}

Json matrix_rows(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

MolecularSystem system_from_json(const Json& doc) {
  const auto q = require<int>(doc, "n_states");
  const auto e = require<std::vector<double>>(doc, "energies");
  if (q < 2) throw ConfigError("n_states must be at least 2");
  if (e.size() != static_cast<std::size_t>(q)) throw ConfigError("energies must have n_states entries");
  Eigen::VectorXd energies = Eigen::Map<const Eigen::VectorXd>(e.data(), q);
  std::array<Eigen::MatrixXd, kFieldComponents> dipole{
      square_matrix(doc, "dipole_x", q), square_matrix(doc, "dipole_y", q),
      square_matrix(doc, "dipole_z", q)};
  std::vector<std::string> labels;
  if (doc.contains("labels")) labels = require<std::vector<std::string>>(doc, "labels");
  if (doc.contains("units") && doc.at("units") != "atomic") {
    throw ConfigError("only atomic units are supported");
  }
  return MolecularSystem(std::move(energies), std::move(dipole), std::move(labels));
}

Json system_to_json(const MolecularSystem& system) {
  Json doc;
  doc["n_states"] = system.n_states();
  doc["units"] = "atomic";
  doc["energies"] = std::vector<double>(system.energies().data(),
                                        system.energies().data() + system.n_states());
  doc["dipole_x"] = matrix_rows(system.dipole(0));
  doc["dipole_y"] = matrix_rows(system.dipole(1));
  doc["dipole_z"] = matrix_rows(system.dipole(2));
  if (!system.labels().empty()) doc["labels"] = system.labels();
  return doc;
}

MolecularSystem load_system(const std::filesystem::path& path) {
  try {
    return system_from_json(load_json(path));
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

PulseParameters pulse_from_json(const Json& doc) {
  const auto duration = require<double>(doc, "duration");
  const auto m = require<int>(doc, "n_harmonics");
  const bool include_dc = doc.value("include_dc", true);
  std::vector<double> amplitudes;
  if (!doc.contains("amplitudes")) {
    if (m < 1) throw ConfigError("n_harmonics must be at least 1");
    amplitudes.assign(static_cast<std::size_t>(kFieldComponents * (m + 1)), 0.0);
  } else {
    try {
      for (const auto& row : doc.at("amplitudes")) {
        if (row.is_array()) {
          for (const auto& x : row) amplitudes.push_back(x.get<double>());
        } else {
          amplitudes.push_back(row.get<double>());
        }
      }
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("bad value for 'amplitudes': ") + e.what());
    }
  }
  std::optional<double> clamp;
  if (doc.contains("amplitude_clamp") && !doc.at("amplitude_clamp").is_null()) {
    clamp = require<double>(doc, "amplitude_clamp");
  }
  return PulseParameters(duration, m, include_dc, std::move(amplitudes), clamp);
}

Json pulse_to_json(const PulseParameters& pulse) {
  Json doc;
  doc["duration"] = pulse.duration();
  doc["n_harmonics"] = pulse.n_harmonics();
  doc["include_dc"] = pulse.include_dc();
  Json rows = Json::array();
  for (int a = 0; a < kFieldComponents; ++a) {
    Json row = Json::array();
    for (int j = 0; j <= pulse.n_harmonics(); ++j) row.push_back(pulse.amplitude(a, j));
    rows.push_back(std::move(row));
  }
  doc["amplitudes"] = std::move(rows);
  if (pulse.amplitude_clamp()) {
    doc["amplitude_clamp"] = *pulse.amplitude_clamp();
  } else {
    doc["amplitude_clamp"] = nullptr;
  }
  return doc;
}

PulseParameters load_pulse(const std::filesystem::path& path) {
  try {
    return pulse_from_json(load_json(path));
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void save_pulse(const PulseParameters& pulse, const std::filesystem::path& path) {
  save_json(pulse_to_json(pulse), path);
}

Json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return Json::parse(in, nullptr, true, true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void save_json(const Json& doc, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[value & 0xf];
    value >>= 4;
  }
  return out;
}

std::string format_double(double value) {
  if (value == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const CsvProvenance& provenance,
                     const std::vector<std::string>& columns)
    : out_(path), n_columns_(columns.size()) {
  if (!out_) throw ConfigError("cannot write " + path.string());
  out_ << "# hqoc " << HQOC_VERSION << " config_hash=" << provenance.config_hash
       << " seed=" << provenance.seed << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out_ << ',';
    out_ << columns[i];
  }
  out_ << '\n';
}

CsvWriter& CsvWriter::cell(double value) { return cell(format_double(value)); }

CsvWriter& CsvWriter::cell(long long value) { return cell(std::to_string(value)); }

CsvWriter& CsvWriter::cell(const std::string& value) {
  if (in_row_) out_ << ',';
  out_ << value;
  ++in_row_;
  return *this;
}

void CsvWriter::end_row() {
  if (in_row_ != n_columns_) throw StateError("CSV row has the wrong number of cells");
  out_ << '\n';
  in_row_ = 0;
}

}  // namespace hqoc
