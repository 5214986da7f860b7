// Copyright 2026 The mushra-stereo Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mushra/scores.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "mushra/error.hpp"
#include "mushra/trial_planner.hpp"

namespace mushra::stats {

namespace {

auto key_of(const ScoreRecord& r) { return std::tie(r.listener, r.item, r.series, r.condition); }

std::string describe(const ScoreRecord& r) {
  return "(" + r.listener + ", " + r.item + ", " + r.series + ", " + r.condition + ")";
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

const std::string& alias(const std::map<std::string, std::string>& aliases, const std::string& s) {
  const auto it = aliases.find(s);
  return it == aliases.end() ? s : it->second;
}

}  // namespace

Dataset::Dataset(std::vector<ScoreRecord> records) : records_(std::move(records)) {
  std::sort(records_.begin(), records_.end(),
            [](const ScoreRecord& a, const ScoreRecord& b) { return key_of(a) < key_of(b); });
  for (std::size_t i = 1; i < records_.size(); ++i) {
    if (key_of(records_[i - 1]) == key_of(records_[i])) {
      throw InputError("duplicate score for " + describe(records_[i]));
    }
  }
}

std::set<std::string> Dataset::listeners() const {
  std::set<std::string> out;
  for (const auto& r : records_) out.insert(r.listener);
  return out;
}

ColumnMapping mapping_from_json(const std::string& text) {
  ColumnMapping m;
  try {
    const auto j = nlohmann::json::parse(text);
    const auto str = [&](const char* key, std::string& field) {
      if (j.contains(key)) field = j.at(key).get<std::string>();
    };
    const auto columns = j.value("columns", nlohmann::json::object());
    const auto col = [&](const char* key, std::string& field) {
      if (columns.contains(key)) field = columns.at(key).get<std::string>();
    };
    col("listener", m.listener);
    col("item", m.item);
    col("series", m.series);
    col("condition", m.condition);
    col("score", m.score);
    std::string delim;
    str("delimiter", delim);
    if (delim.size() > 1) throw InputError("delimiter must be a single character");
    if (delim.size() == 1) m.delimiter = delim[0];
    if (j.contains("series_aliases")) m.series_aliases = j["series_aliases"].get<std::map<std::string, std::string>>();
    if (j.contains("condition_aliases")) {
      m.condition_aliases = j["condition_aliases"].get<std::map<std::string, std::string>>();
    }
    if (j.contains("item_aliases")) m.item_aliases = j["item_aliases"].get<std::map<std::string, std::string>>();
    if (j.contains("ignore_series")) m.ignore_series = j["ignore_series"].get<std::set<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed column mapping: ") + e.what());
  }
  return m;
}

std::vector<std::string> split_csv_line(const std::string& line, char delimiter) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delimiter) {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw InputError("unterminated quote");
  fields.push_back(cur);
  return fields;
}

Dataset ingest_scores(std::istream& in, const ColumnMapping& mapping, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  const auto fail = [&](const std::string& msg) -> InputError {
    return InputError(source + ":" + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  if (trim(line).empty()) return Dataset{};

  std::vector<std::string> header;
  try {
    header = split_csv_line(line, mapping.delimiter);
  } catch (const InputError& e) {
    throw fail(e.what());
  }
  for (auto& h : header) h = trim(h);
  if (!header.empty() && header[0].rfind("\xEF\xBB\xBF", 0) == 0) header[0].erase(0, 3);
  const auto column = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw fail("missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t c_listener = column(mapping.listener), c_item = column(mapping.item),
                    c_series = column(mapping.series), c_condition = column(mapping.condition),
                    c_score = column(mapping.score);

  std::vector<ScoreRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> f;
    try {
      f = split_csv_line(line, mapping.delimiter);
    } catch (const InputError& e) {
      throw fail(e.what());
    }
    if (f.size() != header.size()) {
      throw fail("expected " + std::to_string(header.size()) + " fields, found " + std::to_string(f.size()));
    }
    for (auto& x : f) x = trim(x);
    ScoreRecord r;
    r.listener = f[c_listener];
    r.item = alias(mapping.item_aliases, f[c_item]);
    r.series = alias(mapping.series_aliases, f[c_series]);
    r.condition = alias(mapping.condition_aliases, f[c_condition]);
    if (mapping.ignore_series.count(r.series) != 0) continue;
    try {
      plan::series_from_string(r.series);
    } catch (const std::invalid_argument&) {
      throw fail("unknown series '" + f[c_series] + "'");
    }
    const auto& s = f[c_score];
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), r.score);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(r.score)) {
      throw fail("score '" + s + "' is not a number");
    }
    if (r.score < 0.0 || r.score > 100.0) throw fail("score " + s + " outside 0..100");
    if (r.listener.empty() || r.item.empty() || r.condition.empty()) throw fail("empty key field");
    records.push_back(std::move(r));
  }
  try {
    return Dataset(std::move(records));
  } catch (const InputError& e) {
    throw InputError(source + ": " + e.what());
  }
}

Dataset read_scores(const std::string& path, const ColumnMapping& mapping) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open score table " + path);
  return ingest_scores(in, mapping, path);
}

std::string dataset_to_csv(const Dataset& data) {
  std::ostringstream out;
  out << "listener_id,item,series,condition,score\n";
  char buf[32];
  for (const auto& r : data.records()) {
    std::snprintf(buf, sizeof buf, "%.10g", r.score);
    out << r.listener << ',' << r.item << ',' << r.series << ',' << r.condition << ',' << buf << '\n';
  }
  return out.str();
}

}  // namespace mushra::stats
