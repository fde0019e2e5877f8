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

#pragma once

#include <cstddef>
#include <filesystem>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace percwalk::harness {

/// Shortest text of at most 17 significant digits that round-trips the double;
/// independent of the global locale.
std::string format_number(double value);

/// Column-named numeric table plus key/value metadata written as '#' lines.
class Table {
 public:
  explicit Table(std::vector<std::string> columns);

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  std::size_t rows() const noexcept { return columns_.empty() ? 0 : data_.size() / columns_.size(); }

  void add_row(std::span<const double> values);
  void add_row(std::initializer_list<double> values) { add_row(std::span<const double>(values.begin(), values.size())); }

  double at(std::size_t row, std::size_t col) const;
  std::vector<double> column(std::string_view name) const;

  void set_metadata(std::string key, std::string value);
  void set_metadata(std::string key, double value) { set_metadata(std::move(key), format_number(value)); }
  const std::vector<std::pair<std::string, std::string>>& metadata() const noexcept { return metadata_; }
  /// Value of a metadata key, or empty when absent.
  std::string metadata_value(std::string_view key) const;

 private:
  std::vector<std::string> columns_;
  std::vector<double> data_;
  std::vector<std::pair<std::string, std::string>> metadata_;
};

/// '#'-prefixed "key=value" header, a column header row, then data rows.
void write_csv(std::ostream& out, const Table& table);
/// Throws IoError naming the path on failure.
void write_csv_file(const std::filesystem::path& path, const Table& table);

}  // namespace percwalk::harness
