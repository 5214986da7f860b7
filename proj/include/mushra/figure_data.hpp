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

#include <string>
#include <vector>

#include "mushra/analysis.hpp"

namespace mushra::stats {

// overall: pooled separated-trial series, one panel per artifact kind.
// mixed: pooled XXmix series. itemwise: every item and series.
enum class FigureLayout { kOverall, kMixed, kItemwise };

std::string to_string(FigureLayout l);
FigureLayout figure_layout_from_string(const std::string& s);

struct FigureTables {
  std::string points_csv;
  std::string significance_csv;  // header only when there are no comparisons
  bool operator==(const FigureTables&) const = default;
};

// Expects summaries grouped the way the layout needs: pooled items with
// separate series for overall and mixed, per item and series for itemwise.
// Rows that do not belong to the layout are ignored. The output is a pure
// function of the inputs.
FigureTables export_figure_data(const std::vector<StatsSummary>& summaries,
                                const std::vector<SignificanceResult>& comparisons, FigureLayout layout);

// x position on the quality axis: Q1..Q5 -> 1..5, LP3500 6, LP7000 7, mono 8, ref 0.
int figure_x(const std::string& condition);

}  // namespace mushra::stats
