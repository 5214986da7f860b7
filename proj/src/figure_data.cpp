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

#include "mushra/figure_data.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace mushra::stats {

std::string to_string(FigureLayout l) {
  switch (l) {
    case FigureLayout::kOverall: return "overall";
    case FigureLayout::kMixed: return "mixed";
    case FigureLayout::kItemwise: return "itemwise";
  }
  return "?";
}

FigureLayout figure_layout_from_string(const std::string& s) {
  for (auto l : {FigureLayout::kOverall, FigureLayout::kMixed, FigureLayout::kItemwise}) {
    if (to_string(l) == s) return l;
  }
  throw std::invalid_argument("unknown figure layout '" + s + "'");
}

int figure_x(const std::string& condition) {
  const auto info = parse_condition(condition);
  switch (info.role) {
    case ConditionRole::kArtifact: return static_cast<int>(*info.quality);
    case ConditionRole::kReference: return 0;
    case ConditionRole::kMonoAnchor: return 8;
    case ConditionRole::kLowpassAnchor: return condition == "LP3500" ? 6 : 7;
    case ConditionRole::kOther: break;
  }
  return -1;
}

namespace {

bool is_mixed(const std::string& series) { return series.size() > 3 && series.substr(2) == "mix"; }

bool in_layout(const std::string& item, const std::string& series, FigureLayout layout) {
  if (series == kPooled) return false;
  switch (layout) {
    case FigureLayout::kOverall: return item == kPooled && !is_mixed(series);
    case FigureLayout::kMixed: return item == kPooled && is_mixed(series);
    case FigureLayout::kItemwise: return item != kPooled;
  }
  return false;
}

std::string panel_of(const std::string& item, const std::string& series, FigureLayout layout) {
  switch (layout) {
    case FigureLayout::kOverall: return series.substr(0, 2);
    case FigureLayout::kMixed: return series;
    case FigureLayout::kItemwise: return item;
  }
  return "";
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

FigureTables export_figure_data(const std::vector<StatsSummary>& summaries,
                                const std::vector<SignificanceResult>& comparisons, FigureLayout layout) {
  struct Point {
    std::string panel, series, condition, kind, mode, marker, color;
    int x;
    const StatsSummary* s;
  };
  std::vector<Point> points;
  for (const auto& s : summaries) {
    if (!in_layout(s.key.item, s.key.series, layout)) continue;
    const auto info = parse_condition(s.key.condition);
    Point p{panel_of(s.key.item, s.key.series, layout), s.key.series, s.key.condition, "", "", "", "",
            figure_x(s.key.condition), &s};
    switch (info.role) {
      case ConditionRole::kArtifact:
        p.kind = artifact::to_string(*info.kind);
        p.mode = artifact::to_string(*info.mode);
        p.marker = *info.mode == artifact::StereoMode::kLR ? "open" : "filled";
        p.color = p.kind;
        break;
      case ConditionRole::kReference:
        p.marker = p.color = "reference";
        break;
      default:
        p.marker = p.color = "anchor";
        break;
    }
    points.push_back(p);
  }
  std::sort(points.begin(), points.end(), [](const Point& a, const Point& b) {
    return std::tie(a.panel, a.series, a.x, a.condition) < std::tie(b.panel, b.series, b.x, b.condition);
  });

  std::ostringstream pts;
  pts << "layout,panel,x,series,condition,kind,mode,marker,color,n,mean,ci_low,ci_high\n";
  for (const auto& p : points) {
    pts << to_string(layout) << ',' << p.panel << ',' << p.x << ',' << p.series << ',' << p.condition << ','
        << p.kind << ',' << p.mode << ',' << p.marker << ',' << p.color << ',' << p.s->n << ','
        << fmt(p.s->mean) << ',' << fmt(p.s->ci_low) << ',' << fmt(p.s->ci_high) << '\n';
  }

  std::vector<const SignificanceResult*> sig;
  for (const auto& c : comparisons) {
    const bool wanted = layout == FigureLayout::kItemwise
                            ? c.item != kPooled
                            : c.item == kPooled && (c.context == Context::kMixed) == (layout == FigureLayout::kMixed);
    if (wanted) sig.push_back(&c);
  }
  const auto sig_panel = [&](const SignificanceResult& c) {
    return panel_of(c.item, c.lr.series, layout);
  };
  std::sort(sig.begin(), sig.end(), [&](const SignificanceResult* a, const SignificanceResult* b) {
    return std::make_tuple(sig_panel(*a), a->lr.series, static_cast<int>(a->quality)) <
           std::make_tuple(sig_panel(*b), b->lr.series, static_cast<int>(b->quality));
  });
  std::ostringstream sg;
  sg << "layout,panel,x,kind,context,lr_series,ms_series,lr_condition,ms_condition,p_value,stars,significant\n";
  for (const auto* c : sig) {
    char p[32];
    std::snprintf(p, sizeof p, "%.6g", c->p_value);
    sg << to_string(layout) << ',' << sig_panel(*c) << ',' << static_cast<int>(c->quality) << ','
       << artifact::to_string(c->kind) << ',' << to_string(c->context) << ',' << c->lr.series << ','
       << c->ms.series << ',' << c->lr.condition << ',' << c->ms.condition << ',' << p << ',' << c->stars << ','
       << (c->stars.empty() ? 0 : 1) << '\n';
  }
  return {pts.str(), sg.str()};
}

}  // namespace mushra::stats
