// Copyright 2026 The percwalk Authors
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

#include "percwalk/harness/table.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

#include "percwalk/errors.hpp"

namespace percwalk::harness {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), result.ptr);
}

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {
  if (columns_.empty()) throw InvalidArgument("table needs at least one column");
}

void Table::add_row(std::span<const double> values) {
  if (values.size() != columns_.size()) {
    throw InvalidArgument("row has " + std::to_string(values.size()) + " values for " +
                          std::to_string(columns_.size()) + " columns");
  }
  data_.insert(data_.end(), values.begin(), values.end());
}

double Table::at(std::size_t row, std::size_t col) const {
  if (row >= rows() || col >= columns_.size()) throw InvalidArgument("table index out of range");
  return data_[row * columns_.size() + col];
}

std::vector<double> Table::column(std::string_view name) const {
  const auto it = std::find(columns_.begin(), columns_.end(), name);
  if (it == columns_.end()) throw InvalidArgument("no column named '" + std::string(name) + "'");
  const auto col = static_cast<std::size_t>(it - columns_.begin());
  std::vector<double> out(rows());
  for (std::size_t r = 0; r < out.size(); ++r) out[r] = data_[r * columns_.size() + col];
  return out;
}

void Table::set_metadata(std::string key, std::string value) {
  for (auto& [k, v] : metadata_) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  metadata_.emplace_back(std::move(key), std::move(value));
}

std::string Table::metadata_value(std::string_view key) const {
  for (const auto& [k, v] : metadata_) {
    if (k == key) return v;
  }
  return {};
}

void write_csv(std::ostream& out, const Table& table) {
  for (const auto& [key, value] : table.metadata()) out << "# " << key << '=' << value << '\n';
  const auto& cols = table.columns();
  for (std::size_t c = 0; c < cols.size(); ++c) out << (c == 0 ? "" : ",") << cols[c];
  out << '\n';
  for (std::size_t r = 0; r < table.rows(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) out << (c == 0 ? "" : ",") << format_number(table.at(r, c));
    out << '\n';
  }
}

void write_csv_file(const std::filesystem::path& path, const Table& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_csv(out, table);
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace percwalk::harness
