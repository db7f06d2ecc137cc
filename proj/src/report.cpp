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

#include "persona/report.hpp"

#include <cstdio>
#include <sstream>

#include "persona/error.hpp"
#include "persona/io.hpp"

namespace persona {
namespace {

bool same_double(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

ReportRow row(std::string setting, const MethodSpec& m, std::string trait, std::string metric, double value,
              std::size_t n, double p = std::nan("")) {
  ReportRow r;
  r.setting = std::move(setting);
  r.method = m.label();
  r.feature = std::string(to_string(m.feature));
  r.trait = std::move(trait);
  r.metric = std::move(metric);
  r.value = value;
  r.n = n;
  r.p_value = p;
  return r;
}

void check_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") != std::string::npos) {
    throw DataError("report field cannot be written as CSV: '" + s + "'");
  }
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::size_t parse_size(std::string_view s, std::size_t line_no) {
  std::size_t v = 0;
  if (s.empty()) throw DataError("line " + std::to_string(line_no) + ": empty integer field");
  for (char c : s) {
    if (c < '0' || c > '9') throw DataError("line " + std::to_string(line_no) + ": bad integer '" + std::string(s) + "'");
    v = v * 10 + static_cast<std::size_t>(c - '0');
  }
  return v;
}

double parse_number(std::string_view s, std::size_t line_no) {
  double v;
  if (!parse_double(s, v)) throw DataError("line " + std::to_string(line_no) + ": bad number '" + std::string(s) + "'");
  return v;
}

constexpr std::string_view kBaseHeader = "setting,method,feature,trait,metric,value,n,p_value";

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

bool operator==(const ReportRow& a, const ReportRow& b) {
  return a.setting == b.setting && a.method == b.method && a.feature == b.feature && a.trait == b.trait &&
         a.metric == b.metric && same_double(a.value, b.value) && a.n == b.n && same_double(a.p_value, b.p_value) &&
         a.tweet_count == b.tweet_count && a.replicate == b.replicate;
}

std::vector<ReportRow> to_rows(const EvalReport& report) {
  std::vector<ReportRow> rows;
  for (const auto& m : report.methods) {
    for (std::size_t t = 0; t < kNumTraits; ++t) {
      const auto key = std::string(trait_key(kTraits[t]));
      const auto& tm = m.traits[t];
      rows.push_back(row("full", m.method, key, "pearson_r", tm.pearson.r, tm.pearson.n, tm.pearson.p_value));
      rows.push_back(row("full", m.method, key, "mae", tm.mae, tm.pearson.n));
    }
    rows.push_back(row("full", m.method, "mean", "pearson_r", m.mean_r, report.n_users));
    rows.push_back(row("full", m.method, "mean", "mae", m.mean_mae, report.n_users));
  }
  for (const auto& c : report.coverage) {
    for (const auto& e : c.entries) {
      ReportRow r;
      r.setting = "full";
      r.feature = c.extractor;
      r.metric = "coverage_" + e.label;
      r.value = e.fraction;
      r.n = static_cast<std::size_t>(e.total);
      rows.push_back(std::move(r));
    }
  }
  return rows;
}

std::vector<ReportRow> to_rows(const SamplingReport& report) {
  std::vector<ReportRow> rows;
  for (const auto& curve : report.curves) {
    for (const auto& pt : curve.points) {
      auto add = [&](std::string trait, double v, std::optional<std::size_t> rep) {
        auto r = row("sampling", curve.method, std::move(trait), "pearson_r", v, report.n_users);
        r.tweet_count = pt.tweet_count;
        r.replicate = rep;
        rows.push_back(std::move(r));
      };
      for (std::size_t t = 0; t < kNumTraits; ++t) add(std::string(trait_key(kTraits[t])), pt.trait_r[t], std::nullopt);
      add("mean", pt.mean_r, std::nullopt);
      for (std::size_t s = 0; s < pt.replicate_r.size(); ++s) {
        for (std::size_t t = 0; t < kNumTraits; ++t) {
          add(std::string(trait_key(kTraits[t])), pt.replicate_trait_r[s][t], s);
        }
        add("mean", pt.replicate_r[s], s);
      }
    }
  }
  return rows;
}

std::vector<ReportRow> to_rows(const RealLifeReport& report) {
  std::vector<ReportRow> rows;
  for (const auto& m : report.methods) {
    for (std::size_t t = 0; t < kNumTraits; ++t) {
      rows.push_back(row("reallife", m.method, std::string(trait_key(kTraits[t])), "mae", m.trait_mae[t], report.n_test));
    }
    rows.push_back(row("reallife", m.method, "mean", "mae", m.mae, report.n_test));
  }
  ReportRow anova;
  anova.setting = "reallife";
  anova.method = "all";
  anova.trait = "mean";
  anova.n = report.n_test;
  for (auto [metric, value] : {std::pair{"anova_f", report.anova.f},
                               std::pair{"anova_df_between", static_cast<double>(report.anova.df_between)},
                               std::pair{"anova_df_within", static_cast<double>(report.anova.df_within)}}) {
    anova.metric = metric;
    anova.value = value;
    anova.p_value = report.anova.p_value;
    rows.push_back(anova);
  }
  if (!report.methods.empty()) {
    const auto& best = report.methods[report.best];
    const auto& second = report.methods[report.second];
    ReportRow t = row("reallife", best.method, "mean", "ttest_t", report.ttest.t, report.n_test, report.ttest.p_value);
    t.method = best.method.label() + " vs " + second.method.label();
    rows.push_back(t);
    t.metric = "ttest_df";
    t.value = static_cast<double>(report.ttest.df);
    rows.push_back(t);
    if (report.ttest.correlation) {
      t.metric = "ttest_pair_r";
      t.value = *report.ttest.correlation;
      rows.push_back(t);
    }
  }
  return rows;
}

std::string format_csv(std::span<const ReportRow> rows) {
  bool extra = false;
  for (const auto& r : rows) extra = extra || r.tweet_count || r.replicate;
  std::string out(kBaseHeader);
  if (extra) out += ",tweet_count,replicate";
  out += '\n';
  for (const auto& r : rows) {
    for (const auto* f : {&r.setting, &r.method, &r.feature, &r.trait, &r.metric}) {
      check_field(*f);
      out += *f;
      out += ',';
    }
    out += format_double(r.value) + ',' + std::to_string(r.n) + ',' + format_double(r.p_value);
    if (extra) {
      out += ',';
      if (r.tweet_count) out += std::to_string(*r.tweet_count);
      out += ',';
      if (r.replicate) out += std::to_string(*r.replicate);
    }
    out += '\n';
  }
  return out;
}

std::vector<ReportRow> parse_csv(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw DataError("empty report CSV");
  bool extra;
  if (lines[0] == kBaseHeader) {
    extra = false;
  } else if (lines[0] == std::string(kBaseHeader) + ",tweet_count,replicate") {
    extra = true;
  } else {
    throw DataError("line 1: unexpected report header");
  }
  const std::size_t width = extra ? 10 : 8;
  std::vector<ReportRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto f = split_commas(lines[i]);
    if (f.size() != width) {
      throw DataError("line " + std::to_string(i + 1) + ": expected " + std::to_string(width) + " fields");
    }
    ReportRow r;
    r.setting = f[0];
    r.method = f[1];
    r.feature = f[2];
    r.trait = f[3];
    r.metric = f[4];
    r.value = parse_number(f[5], i + 1);
    r.n = parse_size(f[6], i + 1);
    r.p_value = parse_number(f[7], i + 1);
    if (extra) {
      if (!f[8].empty()) r.tweet_count = parse_size(f[8], i + 1);
      if (!f[9].empty()) r.replicate = parse_size(f[9], i + 1);
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string format_predictions(std::span<const std::string> user_ids, const Eigen::MatrixXd& predictions) {
  if (predictions.rows() != static_cast<Eigen::Index>(user_ids.size()) ||
      predictions.cols() != static_cast<Eigen::Index>(kNumTraits)) {
    throw DataError("prediction matrix does not match the user list");
  }
  std::string out = "user_id";
  for (auto t : kTraits) out += ',' + std::string(trait_key(t));
  out += '\n';
  for (std::size_t i = 0; i < user_ids.size(); ++i) {
    check_field(user_ids[i]);
    out += user_ids[i];
    for (Eigen::Index t = 0; t < predictions.cols(); ++t) {
      out += ',' + format_double(predictions(static_cast<Eigen::Index>(i), t));
    }
    out += '\n';
  }
  return out;
}

PredictionTable parse_predictions(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty() || lines[0] != "user_id,o,c,e,a,n") throw DataError("line 1: unexpected predictions header");
  PredictionTable table;
  std::vector<std::array<double, kNumTraits>> vals;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto f = split_commas(lines[i]);
    if (f.size() != kNumTraits + 1) throw DataError("line " + std::to_string(i + 1) + ": expected 6 fields");
    table.user_ids.emplace_back(f[0]);
    std::array<double, kNumTraits> v{};
    for (std::size_t t = 0; t < kNumTraits; ++t) v[t] = parse_number(f[t + 1], i + 1);
    vals.push_back(v);
  }
  table.values.resize(static_cast<Eigen::Index>(vals.size()), static_cast<Eigen::Index>(kNumTraits));
  for (std::size_t i = 0; i < vals.size(); ++i) {
    for (std::size_t t = 0; t < kNumTraits; ++t) {
      table.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)) = vals[i][t];
    }
  }
  return table;
}

std::string summarize(const EvalReport& report) {
  std::ostringstream os;
  os << "users: " << report.n_users << "\n";
  os << "method              O      C      E      A      N   mean r  mean MAE\n";
  for (const auto& m : report.methods) {
    std::string label = m.method.label();
    label.resize(16, ' ');
    os << label;
    for (const auto& t : m.traits) os << ' ' << (t.pearson.r < 0 ? "" : " ") << fixed(t.pearson.r, 3);
    os << "   " << fixed(m.mean_r, 3) << "    " << fixed(m.mean_mae, 4) << "\n";
  }
  for (const auto& c : report.coverage) {
    os << "coverage " << c.extractor << ":";
    for (const auto& e : c.entries) os << ' ' << e.label << '=' << fixed(e.fraction, 4);
    os << "\n";
  }
  return os.str();
}

std::string summarize(const SamplingReport& report) {
  std::ostringstream os;
  os << "users: " << report.n_users << ", subsets per size: " << report.n_subsets << "\n";
  for (const auto& curve : report.curves) {
    os << curve.method.label() << "\n";
    for (const auto& pt : curve.points) {
      os << "  " << pt.tweet_count << " tweets: mean r " << fixed(pt.mean_r, 3) << "\n";
    }
  }
  return os.str();
}

std::string summarize(const RealLifeReport& report) {
  std::ostringstream os;
  os << "train users: " << report.n_train << ", test users: " << report.n_test << "\n";
  for (const auto& m : report.methods) {
    std::string label = m.method.label();
    label.resize(16, ' ');
    os << label << " MAE " << fixed(m.mae, 4) << "\n";
  }
  os << "ANOVA F(" << report.anova.df_between << ", " << report.anova.df_within << ") = " << fixed(report.anova.f, 3)
     << ", p = " << fixed(report.anova.p_value, 4) << "\n";
  if (!report.methods.empty()) {
    os << "paired t (" << report.methods[report.best].method.label() << " vs "
       << report.methods[report.second].method.label() << "): t(" << report.ttest.df
       << ") = " << fixed(report.ttest.t, 3) << ", p = " << fixed(report.ttest.p_value, 4) << "\n";
  }
  return os.str();
}

}  // namespace persona
