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

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "cle/error.hpp"
#include "cle/models.hpp"

namespace cle {

std::vector<std::size_t> SparseDataset::indices(Split split) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < splits.size(); ++i) {
    if (splits[i] == split) out.push_back(i);
  }
  return out;
}

SparseDataset SparseDataset::subset(Split split) const {
  SparseDataset out;
  out.modality = modality;
  out.classes = classes;
  out.schema = schema;
  out.column_names = column_names;
  for (std::size_t i : indices(split)) {
    out.instances.push_back(instances[i]);
    out.labels.push_back(labels[i]);
    out.splits.push_back(split);
  }
  return out;
}

void SparseDataset::validate() const {
  if (instances.size() != labels.size() || instances.size() != splits.size()) {
    throw Error(ErrorCode::kLengthMismatch, "dataset columns disagree in length");
  }
  for (int label : labels) {
    if (label < 0 || label >= static_cast<int>(classes.size())) {
      throw Error(ErrorCode::kConfigError, "label outside class list");
    }
  }
}

void assign_splits(SparseDataset& dataset, std::size_t n_train, std::size_t n_validation) {
  dataset.splits.resize(dataset.instances.size());
  for (std::size_t i = 0; i < dataset.splits.size(); ++i) {
    dataset.splits[i] = i < n_train                  ? Split::kTrain
                        : i < n_train + n_validation ? Split::kValidation
                                                     : Split::kTest;
  }
}

SparseDataset load_text_tsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::vector<std::pair<std::string, std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(ErrorCode::kIoError, "TSV line without a tab in " + path.string());
    }
    rows.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  std::set<std::string> labels;
  for (const auto& row : rows) labels.insert(row.first);
  SparseDataset dataset;
  dataset.modality = Modality::kText;
  dataset.classes.assign(labels.begin(), labels.end());
  for (auto& [label, doc] : rows) {
    dataset.labels.push_back(static_cast<int>(
        std::find(dataset.classes.begin(), dataset.classes.end(), label) -
        dataset.classes.begin()));
    dataset.instances.emplace_back(std::move(doc));
    dataset.splits.push_back(Split::kTrain);
  }
  return dataset;
}

void write_text_tsv(const std::filesystem::path& path, const SparseDataset& dataset) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    out << dataset.classes[dataset.labels[i]] << '\t' << std::get<std::string>(dataset.instances[i])
        << '\n';
  }
}

SparseDataset load_tabular_csv(const std::filesystem::path& path, const std::string& label_column,
                               const std::optional<TabularSchema>& schema) {
  const CsvTable table = read_csv(path);
  const auto label_it = std::find(table.header.begin(), table.header.end(), label_column);
  if (label_it == table.header.end()) {
    throw Error(ErrorCode::kSchemaMismatch, "label column " + label_column + " not in header");
  }
  const auto label_pos = static_cast<std::size_t>(label_it - table.header.begin());
  std::vector<std::string> header;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i != label_pos) header.push_back(table.header[i]);
  }

  SparseDataset dataset;
  dataset.modality = Modality::kTabular;
  dataset.column_names = header;
  std::set<std::string> labels;
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> raw_labels;
  for (const auto& record : table.rows) {
    if (record.size() != table.header.size()) {
      throw Error(ErrorCode::kSchemaMismatch, "CSV record width differs from header");
    }
    std::vector<std::string> row;
    for (std::size_t i = 0; i < record.size(); ++i) {
      if (i != label_pos) row.push_back(record[i]);
    }
    cells.push_back(std::move(row));
    raw_labels.push_back(record[label_pos]);
    labels.insert(record[label_pos]);
  }
  dataset.classes.assign(labels.begin(), labels.end());

  TabularSchema resolved;
  if (schema) {
    resolved = *schema;
  } else {
    // Treat a column as numeric when every cell parses.
    std::vector<TabularRow> typed;
    TabularSchema probe;
    for (const auto& name : header) probe.columns.push_back({name, ColumnKind::kNumeric, {}, {}, {}});
    std::vector<bool> numeric(header.size(), true);
    for (const auto& row : cells) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        try {
          TabularSchema single;
          single.columns.push_back(probe.columns[c]);
          typed_row(single, {header[c]}, {row[c]});
        } catch (const Error&) {
          numeric[c] = false;
        }
      }
    }
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (!numeric[c]) probe.columns[c].kind = ColumnKind::kCategorical;
    }
    for (const auto& row : cells) typed.push_back(typed_row(probe, header, row));
    resolved = infer_schema(header, typed);
  }
  for (std::size_t r = 0; r < cells.size(); ++r) {
    dataset.instances.emplace_back(typed_row(resolved, header, cells[r]));
    dataset.labels.push_back(static_cast<int>(
        std::find(dataset.classes.begin(), dataset.classes.end(), raw_labels[r]) -
        dataset.classes.begin()));
    dataset.splits.push_back(Split::kTrain);
  }
  dataset.schema = std::move(resolved);
  return dataset;
}

}  // namespace cle
