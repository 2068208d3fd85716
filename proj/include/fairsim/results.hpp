// Copyright 2026 The FairSim Authors.
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

#ifndef FAIRSIM_RESULTS_HPP_
#define FAIRSIM_RESULTS_HPP_

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "fairsim/config.hpp"
#include "fairsim/csv.hpp"
#include "fairsim/experiments.hpp"
#include "fairsim/version.hpp"

namespace fairsim {

inline constexpr const char* kMetricsHeader =
    "config_id,seed,p_bias,eta,lambda,k,skew,precision,ndcs,count_group1";

// Grid coordinates print short; metric values print with full precision.
inline std::string FormatCoord(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

struct MetricsRow {
  std::string config_id;  // "online", "warm" or "round=<r>"
  std::uint64_t seed = 0;
  double p_bias = 0.0;
  double eta = 0.0;
  double lambda = 0.0;
  std::size_t k = 0;
  double skew = 0.0;
  double precision = 0.0;
  double ndcs = 0.0;
  std::size_t count_group1 = 0;
  int series = 0;         // tie-break: online before warm before rounds
  std::size_t round = 0;  // tie-break within evolution rows

  auto SortKey() const { return std::tie(p_bias, eta, lambda, seed, k, series, round, config_id); }

  std::string ToCsv() const {
    std::ostringstream out;
    out << config_id << ',' << seed << ',' << FormatCoord(p_bias) << ',' << FormatCoord(eta) << ','
        << FormatCoord(lambda) << ',' << k << ',' << csv::FormatDouble(skew) << ','
        << csv::FormatDouble(precision) << ',' << csv::FormatDouble(ndcs) << ',' << count_group1;
    return out.str();
  }
};

inline void AppendReport(std::vector<MetricsRow>& rows, const RunResult& r, const std::string& id,
                         int series, std::size_t round, const MetricsReport& report) {
  for (const auto& [k, skew] : report.skew_at) {
    rows.push_back(MetricsRow{id, r.seed, r.p_bias, r.eta, r.lambda, k, skew,
                              report.precision_at.at(k), report.ndcs, report.counts_at.at(k), series,
                              round});
  }
}

inline std::vector<MetricsRow> CollectRows(Experiment experiment, const std::vector<RunResult>& results) {
  std::vector<MetricsRow> rows;
  for (const auto& r : results) {
    if (r.error) continue;
    if (experiment == Experiment::kEvolution) {
      for (const auto& point : r.reports_evolution) {
        AppendReport(rows, r, "round=" + std::to_string(point.round), 2, point.round, point.report);
      }
    } else {
      AppendReport(rows, r, "online", 0, 0, r.report_final);
      AppendReport(rows, r, "warm", 1, 0, r.report_warm);
    }
  }
  std::ranges::sort(rows, [](const MetricsRow& a, const MetricsRow& b) { return a.SortKey() < b.SortKey(); });
  return rows;
}

inline std::string MetricsCsv(const std::vector<MetricsRow>& rows) {
  std::string out = std::string(kMetricsHeader) + "\n";
  for (const auto& row : rows) out += row.ToCsv() + "\n";
  return out;
}

inline double Mean(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return v.empty() ? 0.0 : sum / static_cast<double>(v.size());
}

// Sample standard deviation (n - 1); 0 for fewer than two values.
inline double SampleSd(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double mean = Mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

// Mean and sample sd over seeds per (config_id, p_bias, eta, lambda, k).
inline std::string SummaryCsv(const std::vector<MetricsRow>& rows) {
  using Key = std::tuple<double, double, double, std::size_t, int, std::size_t, std::string>;
  struct Acc {
    std::vector<double> skew, precision, ndcs, count;
  };
  std::map<Key, Acc> groups;
  for (const auto& row : rows) {
    auto& acc = groups[Key{row.p_bias, row.eta, row.lambda, row.k, row.series, row.round, row.config_id}];
    acc.skew.push_back(row.skew);
    acc.precision.push_back(row.precision);
    acc.ndcs.push_back(row.ndcs);
    acc.count.push_back(static_cast<double>(row.count_group1));
  }
  std::ostringstream out;
  out << "config_id,p_bias,eta,lambda,k,n_seeds,skew_mean,skew_sd,precision_mean,precision_sd,"
         "ndcs_mean,ndcs_sd,count_group1_mean\n";
  for (const auto& [key, acc] : groups) {
    const auto& [p_bias, eta, lambda, k, series, round, id] = key;
    out << id << ',' << FormatCoord(p_bias) << ',' << FormatCoord(eta) << ',' << FormatCoord(lambda)
        << ',' << k << ',' << acc.skew.size() << ',' << csv::FormatDouble(Mean(acc.skew)) << ','
        << csv::FormatDouble(SampleSd(acc.skew)) << ',' << csv::FormatDouble(Mean(acc.precision))
        << ',' << csv::FormatDouble(SampleSd(acc.precision)) << ','
        << csv::FormatDouble(Mean(acc.ndcs)) << ',' << csv::FormatDouble(SampleSd(acc.ndcs)) << ','
        << csv::FormatDouble(Mean(acc.count)) << '\n';
  }
  return out.str();
}

inline std::string FailuresCsv(const std::vector<RunResult>& results) {
  std::vector<const RunResult*> failed;
  for (const auto& r : results) {
    if (r.error) failed.push_back(&r);
  }
  std::ranges::sort(failed, [](const RunResult* a, const RunResult* b) {
    return std::tie(a->p_bias, a->eta, a->lambda, a->seed) < std::tie(b->p_bias, b->eta, b->lambda, b->seed);
  });
  std::string out = "seed,p_bias,eta,lambda,error\n";
  for (const auto* r : failed) {
    std::string message = *r->error;
    std::ranges::replace(message, ',', ';');
    std::ranges::replace(message, '\n', ' ');
    out += std::to_string(r->seed) + ',' + FormatCoord(r->p_bias) + ',' + FormatCoord(r->eta) + ',' +
           FormatCoord(r->lambda) + ',' + message + '\n';
  }
  return out;
}

inline std::string CellName(const RunResult& r) {
  return "pbias=" + FormatCoord(r.p_bias) + "_eta=" + FormatCoord(r.eta) +
         "_lambda=" + FormatCoord(r.lambda) + "_seed=" + std::to_string(r.seed);
}

inline std::string UtcTimestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct WrittenFiles {
  std::filesystem::path metrics;
  std::filesystem::path summary;
  std::filesystem::path failures;
  std::filesystem::path manifest;
  std::size_t failed_cells = 0;
};

// Layout under out_dir:
//   <experiment>/metrics.csv, summary.csv, failures.csv, manifest.json
//   models/<experiment>/<cell>.json (final model, or snapshots for evolution)
// Only manifest.json carries a timestamp.
inline WrittenFiles WriteResults(const std::filesystem::path& out_dir, Experiment experiment,
                                 const ExperimentConfig& cfg, const std::vector<RunResult>& results) {
  namespace fs = std::filesystem;
  const std::string name = ExperimentName(experiment);
  const fs::path dir = out_dir / name;
  const fs::path models = out_dir / "models" / name;
  std::error_code ec;
  fs::create_directories(dir, ec);
  Require(!ec, ErrorKind::kIo, "cannot create " + dir.string() + ": " + ec.message());
  fs::create_directories(models, ec);
  Require(!ec, ErrorKind::kIo, "cannot create " + models.string() + ": " + ec.message());

  WrittenFiles files{dir / "metrics.csv", dir / "summary.csv", dir / "failures.csv", dir / "manifest.json", 0};
  const auto rows = CollectRows(experiment, results);
  csv::WriteFile(files.metrics.string(), MetricsCsv(rows));
  csv::WriteFile(files.summary.string(), SummaryCsv(rows));
  csv::WriteFile(files.failures.string(), FailuresCsv(results));

  std::map<std::uint64_t, const LinearModel*> warm_models;
  for (const auto& r : results) {
    if (r.error) {
      ++files.failed_cells;
      continue;
    }
    warm_models.emplace(r.seed, &r.warm_model);
    nlohmann::json j;
    if (experiment == Experiment::kEvolution) {
      j = nlohmann::json::array();
      for (const auto& snapshot : r.trace.snapshots) j.push_back(ModelToJson(snapshot.model, snapshot.round));
    } else {
      j = ModelToJson(r.final_model, r.trace.shown_order.size());
    }
    csv::WriteFile((models / (CellName(r) + ".json")).string(), j.dump(2) + "\n");
  }
  for (const auto& [seed, model] : warm_models) {
    csv::WriteFile((models / ("warm_seed=" + std::to_string(seed) + ".json")).string(),
                   ModelToJson(*model, 0).dump(2) + "\n");
  }

  const nlohmann::json manifest{{"software", "fairsim"},
                                {"version", FAIRSIM_VERSION},
                                {"experiment", name},
                                {"cells", results.size()},
                                {"failed_cells", files.failed_cells},
                                {"config", ConfigToJson(cfg)},
                                {"created_at", UtcTimestamp()}};
  csv::WriteFile(files.manifest.string(), manifest.dump(2) + "\n");
  return files;
}

}  // namespace fairsim

#endif  // FAIRSIM_RESULTS_HPP_
