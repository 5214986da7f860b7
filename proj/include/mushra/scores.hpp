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

#pragma once

#include <istream>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace mushra::stats {

struct ScoreRecord {
  std::string listener;
  std::string item;
  std::string series;
  std::string condition;
  double score = 0.0;

  bool operator==(const ScoreRecord&) const = default;
};

// Maps the columns of a score table onto the canonical fields. The defaults
// read the session-service export; other layouts (such as published score
// files) supply their own column names and label aliases.
struct ColumnMapping {
  std::string listener = "listener_id";
  std::string item = "item";
  std::string series = "series";
  std::string condition = "condition";
  std::string score = "score";
  char delimiter = ',';
  std::map<std::string, std::string> series_aliases;
  std::map<std::string, std::string> condition_aliases;
  std::map<std::string, std::string> item_aliases;
  // Rows whose series (after aliasing) is listed here are dropped, e.g. training.
  std::set<std::string> ignore_series;
};

ColumnMapping mapping_from_json(const std::string& text);

class Dataset {
 public:
  Dataset() = default;
  // Throws InputError on a duplicate (listener, item, series, condition) key.
  explicit Dataset(std::vector<ScoreRecord> records);

  const std::vector<ScoreRecord>& records() const { return records_; }
  std::set<std::string> listeners() const;
  bool empty() const { return records_.empty(); }
  std::size_t size() const { return records_.size(); }

 private:
  std::vector<ScoreRecord> records_;  // sorted by key
};

// RFC 4180 style fields: optional double quotes, "" escapes a quote.
std::vector<std::string> split_csv_line(const std::string& line, char delimiter = ',');

// Errors (InputError) name the source and line: missing columns, scores outside
// 0..100, unknown series labels and duplicate keys.
Dataset ingest_scores(std::istream& in, const ColumnMapping& mapping = {},
                      const std::string& source = "<stream>");
Dataset read_scores(const std::string& path, const ColumnMapping& mapping = {});

std::string dataset_to_csv(const Dataset& data);

}  // namespace mushra::stats
