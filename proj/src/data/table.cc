// Copyright 2026 The Fedsyn Authors.
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

#include "fedsyn/data/table.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <unordered_map>

namespace fedsyn::data {
namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<double> ParseNumber(std::string_view s) {
  double value = 0.0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    return std::nullopt;
  }
  return value;
}

// Splits one logical record. Returns false at end of input. Quoted fields may
// span lines.
bool ReadRecord(std::istream& in, std::vector<std::string>& fields,
                size_t line_no) {
  fields.clear();
  std::string line;
  if (!std::getline(in, line)) return false;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  size_t i = 0;
  while (true) {
    if (i == line.size()) {
      if (quoted) {
        std::string next;
        if (!std::getline(in, next)) {
          throw std::runtime_error("unterminated quote near line " +
                                   std::to_string(line_no));
        }
        field.push_back('\n');
        line = std::move(next);
        i = 0;
        continue;
      }
      break;
    }
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(ch);
      }
    } else if (ch == '"' && Trim(field).empty()) {
      field.clear();
      quoted = true;
      was_quoted = true;
    } else if (ch == ',') {
      fields.push_back(was_quoted ? field : std::string(Trim(field)));
      field.clear();
      was_quoted = false;
    } else {
      field.push_back(ch);
    }
    ++i;
  }
  fields.push_back(was_quoted ? field : std::string(Trim(field)));
  return true;
}

}  // namespace

RawTable ParseCsv(std::istream& in, const KindHints& hints) {
  RawTable table;
  std::vector<std::string> fields;
  size_t line_no = 1;
  if (!ReadRecord(in, fields, line_no)) {
    throw std::runtime_error("empty CSV: missing header row");
  }
  table.names = fields;
  const size_t width = table.names.size();
  table.columns.assign(width, {});
  while (ReadRecord(in, fields, ++line_no)) {
    if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
    if (fields.size() != width) {
      throw std::runtime_error("ragged row at line " + std::to_string(line_no) +
                               ": expected " + std::to_string(width) +
                               " fields, got " + std::to_string(fields.size()));
    }
    for (size_t c = 0; c < width; ++c) {
      if (fields[c].empty()) {
        throw std::runtime_error("missing value at line " +
                                 std::to_string(line_no) + ", column '" +
                                 table.names[c] + "'");
      }
      table.columns[c].push_back(std::move(fields[c]));
    }
  }
  if (table.num_rows() == 0) throw std::runtime_error("CSV has no data rows");

  table.kinds.resize(width);
  for (size_t c = 0; c < width; ++c) {
    if (auto it = hints.find(table.names[c]); it != hints.end()) {
      table.kinds[c] = it->second;
      continue;
    }
    const bool numeric =
        std::all_of(table.columns[c].begin(), table.columns[c].end(),
                    [](const std::string& v) {
                      auto x = ParseNumber(v);
                      return x.has_value() && std::isfinite(*x);
                    });
    table.kinds[c] =
        numeric ? AttributeKind::kNumerical : AttributeKind::kCategorical;
  }
  return table;
}

RawTable LoadCsv(const std::filesystem::path& path, const KindHints& hints) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open CSV file: " + path.string());
  return ParseCsv(in, hints);
}

DiscreteDataset Discretize(const RawTable& raw, int num_bins) {
  if (num_bins < 1) throw std::invalid_argument("num_bins must be positive");
  const size_t n = raw.num_rows();
  std::vector<AttributeSpec> specs;
  std::vector<std::vector<Code>> columns;
  for (size_t c = 0; c < raw.names.size(); ++c) {
    const auto& values = raw.columns[c];
    if (values.empty()) {
      throw std::invalid_argument("column '" + raw.names[c] + "' has no rows");
    }
    AttributeSpec spec;
    spec.name = raw.names[c];
    spec.kind = raw.kinds[c];
    std::vector<Code> codes(n);
    if (spec.kind == AttributeKind::kNumerical) {
      std::vector<double> x(n);
      for (size_t r = 0; r < n; ++r) {
        auto parsed = ParseNumber(values[r]);
        if (!parsed || !std::isfinite(*parsed)) {
          throw std::invalid_argument("non-finite or non-numeric value '" +
                                      values[r] + "' in column '" + spec.name +
                                      "'");
        }
        x[r] = *parsed;
      }
      const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
      const double lo = *lo_it;
      const double hi = *hi_it;
      if (!(hi > lo)) {
        // Constant column: a single bin of unit width around the value.
        spec.domain_size = 1;
        spec.bin_edges = {lo - 0.5, lo + 0.5};
      } else {
        spec.domain_size = num_bins;
        spec.bin_edges.resize(num_bins + 1);
        const double width = (hi - lo) / num_bins;
        for (int b = 0; b <= num_bins; ++b) spec.bin_edges[b] = lo + b * width;
        spec.bin_edges[num_bins] = hi;
        for (size_t r = 0; r < n; ++r) {
          const auto bin =
              static_cast<Code>(std::floor((x[r] - lo) / (hi - lo) * num_bins));
          codes[r] = std::clamp<Code>(bin, 0, num_bins - 1);
        }
      }
    } else {
      std::unordered_map<std::string, Code> index;
      for (size_t r = 0; r < n; ++r) {
        auto [it, inserted] =
            index.emplace(values[r], static_cast<Code>(index.size()));
        if (inserted) spec.category_labels.push_back(values[r]);
        codes[r] = it->second;
      }
      spec.domain_size = static_cast<int>(spec.category_labels.size());
    }
    specs.push_back(std::move(spec));
    columns.push_back(std::move(codes));
  }
  return DiscreteDataset(Schema(std::move(specs)), std::move(columns));
}

DiscreteDataset Encode(const RawTable& raw, const Schema& schema) {
  const size_t n = raw.num_rows();
  std::vector<std::vector<Code>> columns;
  for (size_t a = 0; a < schema.size(); ++a) {
    const auto& spec = schema.attribute(a);
    const auto pos = std::find(raw.names.begin(), raw.names.end(), spec.name);
    if (pos == raw.names.end()) {
      throw std::invalid_argument("column '" + spec.name + "' missing from table");
    }
    const auto& values = raw.columns[pos - raw.names.begin()];
    std::vector<Code> codes(n);
    if (spec.kind == AttributeKind::kNumerical) {
      const auto& edges = spec.bin_edges;
      for (size_t r = 0; r < n; ++r) {
        const auto x = ParseNumber(values[r]);
        if (!x || !std::isfinite(*x)) {
          throw std::invalid_argument("non-numeric value '" + values[r] +
                                      "' in column '" + spec.name + "'");
        }
        const auto bin = std::upper_bound(edges.begin(), edges.end(), *x) -
                         edges.begin() - 1;
        codes[r] = static_cast<Code>(
            std::clamp<std::ptrdiff_t>(bin, 0, spec.domain_size - 1));
      }
    } else {
      std::unordered_map<std::string, Code> index;
      for (int v = 0; v < spec.domain_size; ++v) index[spec.category_labels[v]] = v;
      for (size_t r = 0; r < n; ++r) {
        const auto it = index.find(values[r]);
        if (it == index.end()) {
          throw std::invalid_argument("unknown label '" + values[r] +
                                      "' in column '" + spec.name + "'");
        }
        codes[r] = it->second;
      }
    }
    columns.push_back(std::move(codes));
  }
  return DiscreteDataset(schema, std::move(columns));
}

void WriteDecodedCsv(const DiscreteDataset& ds, std::ostream& out) {
  const auto& schema = ds.schema();
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
      if (ch == '"') q.push_back('"');
      q.push_back(ch);
    }
    q.push_back('"');
    return q;
  };
  for (size_t a = 0; a < schema.size(); ++a) {
    if (a) out << ',';
    out << quote(schema.attribute(a).name);
  }
  out << '\n';
  // Decoding is per code, so build the label tables once.
  std::vector<std::vector<std::string>> decoded(schema.size());
  for (size_t a = 0; a < schema.size(); ++a) {
    const auto& spec = schema.attribute(a);
    for (int v = 0; v < spec.domain_size; ++v) {
      decoded[a].push_back(quote(spec.Decode(v)));
    }
  }
  for (size_t r = 0; r < ds.num_rows(); ++r) {
    for (size_t a = 0; a < schema.size(); ++a) {
      if (a) out << ',';
      out << decoded[a][ds.at(r, a)];
    }
    out << '\n';
  }
}

}  // namespace fedsyn::data
