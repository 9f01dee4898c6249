// Copyright 2026 The linkpred Authors.
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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"
#include "linkpred/bench/config.hpp"
#include "linkpred/bench/registry.hpp"
#include "linkpred/bench/report.hpp"
#include "linkpred/bench/runner.hpp"

namespace linkpred::bench {
namespace {

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("linkpred_bench_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TEST(Grid, ListsAndRanges) {
  EXPECT_EQ(parse_grid("0.5"), std::vector<double>{0.5});
  EXPECT_EQ(parse_grid("0, 0.25,1"), (std::vector<double>{0, 0.25, 1}));
  const auto r = parse_grid("0:0.05:1");
  ASSERT_EQ(r.size(), 21u);
  EXPECT_DOUBLE_EQ(r.back(), 1.0);
  EXPECT_EQ(parse_grid("1:1:3,10"), (std::vector<double>{1, 2, 3, 10}));
  for (const char* bad : {"", "a", "1:0:2", "2:1:1", "1:2", "1,,2", "inf"}) {
    EXPECT_THROW(parse_grid(bad), InvalidArgument) << bad;
  }
}

TEST(IndexSpec, NamesAndGrids) {
  const auto plain = parse_index_spec("CN, RA,SCF_RA");
  ASSERT_EQ(plain.size(), 3u);
  EXPECT_EQ(plain[1].id, IndexId::RA);
  const auto star = parse_index_spec("CLE_STAR alpha=0:0.5:1");
  ASSERT_EQ(star.size(), 1u);
  EXPECT_EQ(star[0].values, (std::vector<double>{0, 0.5, 1}));
  EXPECT_EQ(star[0].expand().size(), 3u);
  EXPECT_THROW(parse_index_spec("NOPE"), InvalidArgument);
  EXPECT_THROW(parse_index_spec("CLE_STAR"), InvalidArgument);
  EXPECT_THROW(parse_index_spec("CLE_STAR beta=1"), InvalidArgument);
  EXPECT_THROW(parse_index_spec("CN alpha=1"), InvalidArgument);
  EXPECT_THROW(parse_index_spec("CN, RA alpha=1"), InvalidArgument);
  EXPECT_THROW(parse_index_spec("LO alpha=0"), InvalidArgument);
  EXPECT_THROW(parse_index_spec("KATZ beta=-1"), InvalidArgument);
}

TEST(Config, DefaultsOverridesAndErrors) {
  const ExperimentConfig d;
  EXPECT_EQ(d.runs, 100u);
  EXPECT_EQ(d.test_fractions, std::vector<double>{0.1});
  EXPECT_EQ(d.index_configs().size(), 9u);
  EXPECT_NO_THROW(d.validate());

  std::istringstream in(
      "# comment\n"
      "datasets = complete:5, ring:8\n"
      "index = CN\n"
      "index = KATZ beta=0.01,0.02   # trailing comment\n"
      "test_fraction = 0.1:0.1:0.3\n"
      "runs = 7\nseed = 42\nauc_mode = sampled\nauc_n = 500\nworkers = 3\n");
  const auto c = parse_config(in);
  EXPECT_EQ(c.datasets, (std::vector<std::string>{"complete:5", "ring:8"}));
  ASSERT_EQ(c.indices.size(), 2u);
  EXPECT_EQ(c.index_configs().size(), 3u);
  EXPECT_EQ(c.test_fractions.size(), 3u);
  EXPECT_EQ(c.runs, 7u);
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.auc_mode, AucMode::Sampled);
  EXPECT_EQ(c.auc_samples, 500u);
  EXPECT_EQ(c.workers, 3u);

  std::istringstream unknown("runs = 3\ncolour = blue\n");
  try {
    parse_config(unknown);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  std::istringstream bad_value("runs = many\n");
  EXPECT_THROW(parse_config(bad_value), ParseError);
  std::istringstream no_eq("runs 3\n");
  EXPECT_THROW(parse_config(no_eq), ParseError);

  ExperimentConfig v;
  v.test_fractions = {1.0};
  EXPECT_THROW(v.validate(), InvalidArgument);
  v = {};
  v.runs = 0;
  EXPECT_THROW(v.validate(), InvalidArgument);
}

TEST(Registry, GeneratorsFilesAndChecksums) {
  const Registry empty;
  EXPECT_EQ(empty.resolve("complete:6").m(), 15u);
  EXPECT_EQ(empty.resolve("star:4").m(), 4u);
  EXPECT_EQ(empty.resolve("path:5").m(), 4u);
  EXPECT_EQ(empty.resolve("ring:7").m(), 7u);
  EXPECT_EQ(empty.resolve("gnm:30:40:1").m(), 40u);
  EXPECT_EQ(empty.resolve("er:30:0.2:5").m(), empty.resolve("er:30:0.2:5").m());
  EXPECT_THROW(empty.resolve("complete:6:1"), InvalidArgument);
  EXPECT_THROW(empty.resolve("er:30:1.5:1"), InvalidArgument);
  EXPECT_THROW(empty.resolve("no-such-dataset"), DataError);

  const auto dir = scratch_dir("registry");
  std::ofstream(dir / "tri.txt") << "a b\nb c\nc a\n";
  std::ofstream(dir / "manifest.txt") << "# name path N M\n"
                                         "tri tri.txt 3 3\n"
                                         "bad tri.txt 3 4\n"
                                         "nochk tri.txt\n"
                                         "missing gone.txt\n";
  const auto reg = Registry::load(dir / "manifest.txt");
  EXPECT_EQ(reg.entries().size(), 4u);
  EXPECT_EQ(reg.resolve("tri").m(), 3u);
  EXPECT_EQ(reg.resolve("nochk").n(), 3u);
  EXPECT_THROW(reg.resolve("bad"), DataError);
  EXPECT_THROW(reg.resolve("missing"), DataError);
  EXPECT_EQ(empty.resolve((dir / "tri.txt").string()).m(), 3u);

  std::ofstream(dir / "broken.txt") << "tri tri.txt 3\n";
  EXPECT_THROW(Registry::load(dir / "broken.txt"), ParseError);
  EXPECT_THROW(Registry::load(dir / "absent.txt"), DataError);
}

std::vector<RunRecord> sample_runs() {
  return {{"A", "CN", "", 0.1, 1, 0.75, 0.5, 0.01},
          {"A", "CN", "", 0.1, 2, 0.25, 0.1, 0.02},
          {"A", "KATZ", "beta=0.01", 0.1, 1, 0.9, 0.3, 0.5},
          {"B", "CN", "", 0.1, 1, 1.0 / 3.0, 0.2, 0.01}};
}

TEST(Report, RunCsvRoundTripIsExact) {
  const auto runs = sample_runs();
  std::stringstream s;
  write_runs_csv(s, runs);
  EXPECT_EQ(read_runs_csv(s), runs);

  std::istringstream bad_header("net,idx\n");
  EXPECT_THROW(read_runs_csv(bad_header), ParseError);
  std::istringstream short_row(std::string(kRunCsvHeader) + "\nA,CN,,0.1,1\n");
  EXPECT_THROW(read_runs_csv(short_row), ParseError);
}

TEST(Report, AggregateMeanAndSampleStd) {
  const auto aggs = aggregate(sample_runs(), {{"B", "CN", "", 0.1, 2, "boom"}});
  ASSERT_EQ(aggs.size(), 3u);
  EXPECT_EQ(aggs[0].network, "A");
  EXPECT_EQ(aggs[0].runs, 2u);
  EXPECT_DOUBLE_EQ(aggs[0].auc_mean, 0.5);
  EXPECT_DOUBLE_EQ(aggs[0].auc_std, std::sqrt(0.125));
  EXPECT_EQ(aggs[1].label(), "KATZ(beta=0.01)");
  EXPECT_EQ(aggs[1].auc_std, 0.0);
  EXPECT_EQ(aggs[2].failed, 1u);
  EXPECT_EQ(aggs[2].runs, 1u);

  const auto only_failed = aggregate({}, {{"C", "CN", "", 0.1, 1, "boom"}});
  ASSERT_EQ(only_failed.size(), 1u);
  EXPECT_TRUE(std::isnan(only_failed[0].auc_mean));
}

TEST(Report, WinningRatesAcrossNetworks) {
  // Two networks, two indices; X wins on n1, tie within tolerance on n2.
  std::vector<Aggregate> aggs(4);
  const char* nets[] = {"n1", "n1", "n2", "n2"};
  const char* idx[] = {"X", "Y", "X", "Y"};
  const double auc[] = {0.9, 0.8, 0.70001, 0.7};
  for (int i = 0; i < 4; ++i) {
    aggs[i].network = nets[i];
    aggs[i].index = idx[i];
    aggs[i].test_fraction = 0.1;
    aggs[i].auc_mean = auc[i];
    aggs[i].aupr_mean = 0.1;
  }
  const auto w = winning_rates(aggs);
  ASSERT_EQ(w.size(), 1u);
  EXPECT_EQ(w[0].labels, (std::vector<std::string>{"X", "Y"}));
  EXPECT_DOUBLE_EQ(w[0].auc[0], 0.75);
  EXPECT_DOUBLE_EQ(w[0].auc[1], 0.25);
  EXPECT_DOUBLE_EQ(w[0].aupr[0] + w[0].aupr[1], 1.0);

  const auto j = to_json({{}, {}, aggs});
  EXPECT_EQ(j["aggregates"].size(), 4u);
  EXPECT_DOUBLE_EQ(j["winning_rate"][0]["auc"]["X"].get<double>(), 0.75);
  EXPECT_FALSE(j.dump().find("seconds") != std::string::npos);
}

TEST(Runner, ParallelForVisitsEachIndexAndRethrowsLowestFirst) {
  std::vector<int> hits(100, 0);
  parallel_for(hits.size(), 8, [&](std::size_t i) { hits[i] += 1; });
  EXPECT_EQ(std::count(hits.begin(), hits.end(), 1), 100);
  try {
    parallel_for(50, 4, [](std::size_t i) {
      if (i == 7 || i == 30) throw std::runtime_error(std::to_string(i));
    });
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "7");
  }
}

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.runs = 4;
  c.seed = 11;
  return c;
}

void strip_seconds(EvalReport& r) {
  for (auto& run : r.runs) run.seconds = 0;
}

TEST(Runner, WorkerCountDoesNotChangeResults) {
  const std::vector<Dataset> ds{{"er", Registry::generate("er:60:0.12:4").value()},
                                {"ring", Registry::generate("ring:20").value()}};
  auto c = small_config();
  c.indices = parse_index_spec("CLE, SCF_CRA, CN");
  auto one = run_experiment(ds, c.index_configs(), c);
  c.workers = 4;
  auto four = run_experiment(ds, c.index_configs(), c);
  strip_seconds(one);
  strip_seconds(four);
  EXPECT_EQ(one.runs, four.runs);
  std::stringstream a, b;
  write_runs_csv(a, one.runs);
  write_runs_csv(b, four.runs);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(to_json(one).dump(), to_json(four).dump());
}

TEST(Runner, SeedsAndSplitsAreSharedAcrossIndices) {
  const std::vector<Dataset> ds{{"er", Registry::generate("er:50:0.15:9").value()}};
  auto c = small_config();
  c.indices = parse_index_spec("CLE_STAR alpha=1");
  const auto report = run_experiment(ds, sweep_configs(c), c);
  ASSERT_EQ(report.failures.size(), 0u);
  // CLE_STAR at alpha = 1 and SCF_CN score identically on the same split.
  std::map<std::uint64_t, double> star, scf;
  for (const auto& r : report.runs) {
    if (r.index == "CLE_STAR") star[r.seed] = r.auc;
    if (r.index == "SCF_CN") scf[r.seed] = r.auc;
  }
  ASSERT_EQ(star.size(), 4u);
  EXPECT_EQ(star, scf);
  EXPECT_EQ(star.begin()->first, 11u);
}

TEST(Runner, FailuresAreRecordedNotFatal) {
  // Katz with beta above 1/lambda_1 fails on every split of a ring.
  const std::vector<Dataset> ds{{"ring", Registry::generate("ring:12").value()}};
  auto c = small_config();
  c.indices = parse_index_spec("KATZ beta=0.9");
  c.indices.push_back({IndexId::CN, {}});
  const auto report = run_experiment(ds, c.index_configs(), c);
  EXPECT_EQ(report.failures.size(), 4u);
  EXPECT_EQ(report.runs.size(), 4u);
  ASSERT_EQ(report.aggregates.size(), 2u);
  // Cells with successful runs come first; fully failed cells follow.
  EXPECT_EQ(report.aggregates[0].index, "CN");
  EXPECT_EQ(report.aggregates[1].failed, 4u);
  EXPECT_EQ(report.aggregates[1].runs, 0u);
  EXPECT_TRUE(winning_rates(report.aggregates).empty());
}

TEST(Runner, SelectOptimaPicksBestPerMetric) {
  std::vector<Aggregate> aggs(3);
  for (int i = 0; i < 3; ++i) {
    aggs[i].network = "n";
    aggs[i].index = "CLE_STAR";
    aggs[i].params = "alpha=" + std::to_string(i);
    aggs[i].test_fraction = 0.1;
    aggs[i].auc_mean = i == 1 ? 0.9 : 0.5;
    aggs[i].aupr_mean = i == 2 ? 0.4 : 0.1;
  }
  const auto opt = select_optima(aggs);
  ASSERT_EQ(opt.size(), 2u);
  EXPECT_EQ(opt[0].metric, "auc");
  EXPECT_EQ(opt[0].params, aggs[1].params);
  EXPECT_EQ(opt[1].params, aggs[2].params);
}

TEST(Runner, LoglogSlopeOfPowerLaw) {
  std::vector<double> n{500, 1000, 2000, 4000}, t;
  for (double x : n) t.push_back(3e-9 * x * x * x);
  EXPECT_NEAR(loglog_slope(n, t), 3.0, 1e-12);
}

TEST(Spectrum, TriangleRowIsFlaggedDegenerate) {
  const auto rows = spectrum_rows(gen::complete(3), 3);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_NEAR(rows[0].lambda, 2.0, 1e-10);
  EXPECT_FALSE(rows[0].r.has_value());
  std::ostringstream out;
  write_spectrum_csv(out, rows);
  std::istringstream lines(out.str());
  std::string header, first;
  std::getline(lines, header);
  std::getline(lines, first);
  EXPECT_EQ(header, "d,lambda,lambda_sq,r,degenerate");
  EXPECT_EQ(first.substr(0, 2), "1,");
  EXPECT_EQ(first.back(), '1');
}

TEST(Stats, RowFormatting) {
  std::ostringstream out;
  write_stats_header(out);
  write_stats_row(out, "k3", network_stats(gen::complete(3)), eigengap(gen::complete(3)));
  std::istringstream lines(out.str());
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  EXPECT_EQ(header,
            "network,n,m,density,avg_degree,avg_clustering,avg_path_length,assortativity,delta,"
            "lcc_size");
  const auto f = detail::split(row, ',');
  ASSERT_EQ(f.size(), 10u);
  EXPECT_EQ(std::vector<std::string>(f.begin(), f.begin() + 8),
            (std::vector<std::string>{"k3", "3", "3", "1", "2", "1", "1", "nan"}));
  EXPECT_NEAR(detail::to_double(f[8]), 0.25, 1e-12);
  EXPECT_EQ(f[9], "3");
}

}  // namespace
}  // namespace linkpred::bench
