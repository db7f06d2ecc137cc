// Copyright 2026 The persona Authors
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

#include "persona/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "persona/error.hpp"

namespace persona {
namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

constexpr const char* kColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"};

}  // namespace

std::string sampling_chart_svg(const SamplingReport& report) {
  if (report.curves.empty() || report.curves.front().points.empty()) throw DataError("nothing to plot");
  constexpr double W = 640, H = 400, left = 60, right = 170, top = 20, bottom = 50;
  const double pw = W - left - right, ph = H - top - bottom;

  double xmax = 0, ymin = std::numeric_limits<double>::infinity(), ymax = -ymin;
  for (const auto& c : report.curves) {
    for (const auto& p : c.points) {
      xmax = std::max(xmax, static_cast<double>(p.tweet_count));
      if (std::isfinite(p.mean_r)) {
        ymin = std::min(ymin, p.mean_r);
        ymax = std::max(ymax, p.mean_r);
      }
    }
  }
  if (!std::isfinite(ymin)) ymin = ymax = 0;
  ymin = std::floor(std::min(ymin, 0.0) * 10) / 10;
  ymax = std::ceil(std::max(ymax, ymin + 0.1) * 10) / 10;
  auto sx = [&](double x) { return left + pw * x / xmax; };
  auto sy = [&](double y) { return top + ph * (ymax - y) / (ymax - ymin); };

  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" viewBox=\"0 0 640 400\">\n";
  s += "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
  s += "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  s += "<line x1=\"" + num(left) + "\" y1=\"" + num(top + ph) + "\" x2=\"" + num(left + pw) + "\" y2=\"" +
       num(top + ph) + "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + num(left) + "\" y1=\"" + num(top) + "\" x2=\"" + num(left) + "\" y2=\"" + num(top + ph) +
       "\" stroke=\"black\"/>\n";
  for (const auto& p : report.curves.front().points) {
    const double x = sx(static_cast<double>(p.tweet_count));
    s += "<text x=\"" + num(x) + "\" y=\"" + num(top + ph + 15) + "\" text-anchor=\"middle\">" +
         std::to_string(p.tweet_count) + "</text>\n";
  }
  for (int i = 0;; ++i) {
    const double y = ymin + 0.1 * i;
    if (y > ymax + 1e-9) break;
    s += "<line x1=\"" + num(left - 4) + "\" y1=\"" + num(sy(y)) + "\" x2=\"" + num(left) + "\" y2=\"" +
         num(sy(y)) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + num(left - 6) + "\" y=\"" + num(sy(y) + 4) + "\" text-anchor=\"end\">" + num(y).substr(0, 4) +
         "</text>\n";
  }
  s += "<text x=\"" + num(left + pw / 2) + "\" y=\"" + num(H - 12) + "\" text-anchor=\"middle\">tweets per user</text>\n";
  s += "<text x=\"14\" y=\"" + num(top + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 14 " +
       num(top + ph / 2) + ")\">mean Pearson r</text>\n";

  for (std::size_t c = 0; c < report.curves.size(); ++c) {
    const auto& curve = report.curves[c];
    const char* color = kColors[c % std::size(kColors)];
    std::string pts;
    for (const auto& p : curve.points) {
      if (!std::isfinite(p.mean_r)) continue;
      if (!pts.empty()) pts += ' ';
      pts += num(sx(static_cast<double>(p.tweet_count))) + ',' + num(sy(p.mean_r));
    }
    s += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"2\" points=\"" + pts + "\"/>\n";
    const double ly = top + 14 + 16 * static_cast<double>(c);
    s += "<line x1=\"" + num(W - right + 10) + "\" y1=\"" + num(ly) + "\" x2=\"" + num(W - right + 30) + "\" y2=\"" +
         num(ly) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    s += "<text x=\"" + num(W - right + 35) + "\" y=\"" + num(ly + 4) + "\">" + curve.method.label() + "</text>\n";
  }
  s += "</g>\n</svg>\n";
  return s;
}

}  // namespace persona
