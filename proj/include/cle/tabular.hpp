/*
 * Copyright 2026 The CLE Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CLE_TABULAR_HPP_
#define CLE_TABULAR_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "cle/instance.hpp"

namespace cle {

enum class ColumnKind { kNumeric, kCategorical };

struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::kNumeric;
  // Interior bin boundaries. Bin b covers [edges[b-1], edges[b]); the outer
  // bins are open-ended. A value equal to an edge belongs to the upper bin.
  std::vector<double> edges;
  std::vector<std::string> categories;
  // Observed training range; values outside it are flagged OutOfRange.
  std::optional<std::pair<double, double>> range;

  int bin_count() const {
    return kind == ColumnKind::kNumeric ? static_cast<int>(edges.size()) + 1
                                        : static_cast<int>(categories.size());
  }
  std::string bin_label(int bin) const;
};

struct TabularSchema {
  std::vector<ColumnSpec> columns;

  int column_index(const std::string& name) const;  // -1 when absent
};

// Linear-interpolation quantile on a sorted sample: position (n-1)*q.
double quantile_sorted(const std::vector<double>& sorted, double q);

// Quartile boundaries {q25, q50, q75} with duplicates removed.
std::vector<double> quartile_edges(std::vector<double> sample);

struct BinAssignment {
  int bin = 0;
  bool out_of_range = false;
};

// Throws SchemaMismatch when the value's type does not fit the column or the
// category is unknown.
BinAssignment assign_bin(const ColumnSpec& column, const TabularValue& value);

// Numeric columns get quartile edges; a column is numeric when every value
// parses as a number.
TabularSchema infer_schema(const std::vector<std::string>& header,
                           const std::vector<TabularRow>& rows);

nlohmann::json schema_to_json(const TabularSchema& schema);
TabularSchema schema_from_json(const nlohmann::json& doc);
TabularSchema read_schema(const std::filesystem::path& path);

// Minimal RFC 4180 reader; the first row is the header.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
CsvTable parse_csv(std::string_view text);
CsvTable read_csv(const std::filesystem::path& path);

// Converts raw CSV cells to typed values following the schema.
TabularRow typed_row(const TabularSchema& schema,
                     const std::vector<std::string>& header,
                     const std::vector<std::string>& cells);

std::string format_value(const TabularValue& value);

// Training values of every column grouped by bin, used to draw replacement
// values from a different bin when a tabular feature is switched off.
struct TabularContext {
  TabularSchema schema;
  std::vector<std::vector<std::vector<TabularValue>>> values_by_bin;

  TabularContext(TabularSchema schema, const std::vector<TabularRow>& training);
};

}  // namespace cle

#endif  // CLE_TABULAR_HPP_
