#include <gtest/gtest.h>

#include <sstream>
#include <string>
#include <vector>

#include "csg/bench.hpp"

using namespace csg;

namespace {

RunRecord record(std::uint64_t ops, bool success) {
  RunRecord r;
  r.ops.local_search = ops;
  r.success = success;
  return r;
}

ExperimentConfig small_config(Algorithm algo) {
  ExperimentConfig cfg;
  cfg.algorithm = algo;
  cfg.runs = 3;
  cfg.master_seed = 17;
  cfg.grasp.cutoff_ops = 200000;
  return cfg;
}

std::string records_text(const std::vector<RunRecord>& records) {
  std::ostringstream out;
  write_records_csv(records, out);
  return out.str();
}

}  // namespace

TEST(Experiment, RecordCountAndOrder) {
  const auto instances = make_instances(8, Distribution::uniform_scaled, 4, 3);
  ASSERT_EQ(instances.size(), 4u);
  const auto records = run_experiment(small_config(Algorithm::grasp), instances);
  ASSERT_EQ(records.size(), 12u);
  for (std::size_t i = 0; i < records.size(); ++i) {
    EXPECT_EQ(records[i].run_id, i);
    EXPECT_EQ(records[i].instance, i / 3);
    EXPECT_GE(records[i].quality, 1.0);
    if (records[i].success) {
      EXPECT_DOUBLE_EQ(records[i].quality, 1.0);
    }
  }
}

TEST(Experiment, InstancesCarryExactOptimum) {
  for (const auto& bi : make_instances(7, Distribution::normal, 3, 5)) {
    EXPECT_DOUBLE_EQ(bi.optimum, brute_force_optimal(bi.instance).best_value);
  }
  EXPECT_EQ(make_instances(7, Distribution::normal, 3, 5, 3)[2].instance,
            make_instances(7, Distribution::normal, 3, 5, 1)[2].instance);
  EXPECT_THROW(make_instances(7, Distribution::normal, 0, 5), std::invalid_argument);
}

TEST(Experiment, DeterministicAndIndependentOfJobs) {
  const auto instances = make_instances(10, Distribution::normal_scaled, 3, 9);
  for (auto algo : {Algorithm::grasp, Algorithm::grasp_pr, Algorithm::rii}) {
    auto cfg = small_config(algo);
    const auto a = records_text(run_experiment(cfg, instances));
    const auto b = records_text(run_experiment(cfg, instances));
    cfg.jobs = 4;
    const auto c = records_text(run_experiment(cfg, instances));
    EXPECT_EQ(a, b);
    EXPECT_EQ(a, c);
  }
}

TEST(Experiment, RejectsBadConfig) {
  const auto instances = make_instances(4, Distribution::uniform, 1, 1);
  auto cfg = small_config(Algorithm::grasp);
  cfg.runs = 0;
  EXPECT_THROW(run_experiment(cfg, instances), std::invalid_argument);
  cfg = small_config(Algorithm::grasp_pr);
  cfg.max_elite = 0;
  EXPECT_THROW(run_experiment(cfg, instances), std::invalid_argument);
}

TEST(Quality, RatioToOptimum) {
  EXPECT_DOUBLE_EQ(solution_quality(2.0, 1.0), 2.0);
  EXPECT_DOUBLE_EQ(solution_quality(2.0, 2.0), 1.0);
  EXPECT_DOUBLE_EQ(solution_quality(2.0, 2.0 + 1e-15), 1.0);
  EXPECT_DOUBLE_EQ(solution_quality(0.0, 0.0), 1.0);
}

TEST(Rld, Properties) {
  std::vector<RunRecord> all{record(5, true), record(3, true), record(3, true), record(9, true)};
  auto rld = empirical_rld(all, 100);
  EXPECT_DOUBLE_EQ(rld.terminal, 1.0);
  ASSERT_EQ(rld.points.size(), 3u);
  EXPECT_EQ(rld.points[0].ops, 3u);
  EXPECT_DOUBLE_EQ(rld.points[0].probability, 0.5);
  EXPECT_DOUBLE_EQ(rld.points.back().probability, 1.0);

  std::vector<RunRecord> half;
  for (int i = 0; i < 10; ++i) half.push_back(record(10 * (i + 1), i % 2 == 0));
  rld = empirical_rld(half, 1000);
  EXPECT_DOUBLE_EQ(rld.terminal, 0.5);
  for (std::size_t i = 1; i < rld.points.size(); ++i) {
    EXPECT_GT(rld.points[i].ops, rld.points[i - 1].ops);
    EXPECT_GT(rld.points[i].probability, rld.points[i - 1].probability);
  }
  // Runs beyond the cutoff do not count.
  EXPECT_DOUBLE_EQ(empirical_rld(half, 50).terminal, 0.3);

  std::vector<RunRecord> none{record(4, false), record(6, false)};
  rld = empirical_rld(none, 100);
  EXPECT_TRUE(rld.points.empty());
  EXPECT_DOUBLE_EQ(rld.terminal, 0.0);
  EXPECT_THROW(empirical_rld(std::vector<RunRecord>{}, 1), std::invalid_argument);
}

TEST(Describe, VariationCoefficient) {
  EXPECT_NEAR(variation_coefficient(48909.2, 89177.1), 1.82, 0.005);
  EXPECT_EQ(variation_coefficient(0.0, 3.0), 0.0);
  const std::vector<RunRecord> same(6, record(700, true));
  const auto s = describe(same);
  EXPECT_DOUBLE_EQ(s.mean, 700.0);
  EXPECT_DOUBLE_EQ(s.stddev, 0.0);
  EXPECT_DOUBLE_EQ(s.vc, 0.0);
  EXPECT_DOUBLE_EQ(s.quantile_ratio, 1.0);
  EXPECT_EQ(s.opt_count, 6u);
}

TEST(Describe, MomentsAndQuantiles) {
  const std::vector<double> xs{1, 2, 3, 4, 5, 6, 7, 8};
  const auto s = describe_values(xs, 2);
  EXPECT_DOUBLE_EQ(s.mean, 4.5);
  EXPECT_DOUBLE_EQ(s.min, 1.0);
  EXPECT_DOUBLE_EQ(s.max, 8.0);
  EXPECT_NEAR(s.stddev, std::sqrt(5.25), 1e-12);
  EXPECT_DOUBLE_EQ(s.q25, 2.0);
  EXPECT_DOUBLE_EQ(s.q75, 6.0);
  EXPECT_DOUBLE_EQ(s.quantile_ratio, 3.0);
  EXPECT_EQ(s.opt_count, 2u);
  EXPECT_DOUBLE_EQ(nearest_rank({9, 1, 5}, 1.0), 9.0);
  EXPECT_DOUBLE_EQ(nearest_rank({9, 1, 5}, 0.01), 1.0);
  EXPECT_THROW(nearest_rank({}, 0.5), std::invalid_argument);
  EXPECT_THROW(nearest_rank({1.0}, 0.0), std::invalid_argument);
}

TEST(Describe, CensorsUnsuccessfulRuns) {
  const std::vector<RunRecord> rs{record(10, true), record(30, true), record(250, false)};
  EXPECT_DOUBLE_EQ(describe(rs).mean, 290.0 / 3);
  const auto censored = describe(rs, 1000);
  EXPECT_DOUBLE_EQ(censored.mean, 1040.0 / 3);
  EXPECT_DOUBLE_EQ(censored.max, 1000.0);
  EXPECT_EQ(censored.opt_count, 2u);
}

TEST(Csv, RecordsRoundTrip) {
  const auto instances = make_instances(9, Distribution::normally_distributed, 2, 4);
  const auto records = run_experiment(small_config(Algorithm::grasp_pr), instances);
  const auto text = records_text(records);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), static_cast<long>(records.size() + 1));
  EXPECT_EQ(text.substr(0, kRecordsHeader.size()), kRecordsHeader);
  std::istringstream in(text);
  const auto back = read_records_csv(in);
  ASSERT_EQ(back.size(), records.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].run_id, records[i].run_id);
    EXPECT_EQ(back[i].seed, records[i].seed);
    EXPECT_EQ(back[i].ops, records[i].ops);
    EXPECT_EQ(back[i].iterations, records[i].iterations);
    EXPECT_EQ(back[i].best_value, records[i].best_value);
    EXPECT_EQ(back[i].quality, records[i].quality);
    EXPECT_EQ(back[i].success, records[i].success);
  }
  EXPECT_EQ(records_text(back), text);
}

TEST(Csv, RejectsMalformedRecords) {
  const std::string head = std::string(kRecordsHeader) + "\n";
  std::istringstream bad_sum(head + "0,1,10,1,2,3,1,1.5,1,1\n");
  EXPECT_THROW(read_records_csv(bad_sum), std::runtime_error);
  std::istringstream short_row(head + "0,1,6,1,2,3\n");
  EXPECT_THROW(read_records_csv(short_row), std::runtime_error);
  std::istringstream no_header("0,1,6,1,2,3,1,1.5,1,1\n");
  EXPECT_THROW(read_records_csv(no_header), std::runtime_error);
  std::istringstream good(head + "0,1,6,1,2,3,1,1.5,1,1\n");
  EXPECT_EQ(read_records_csv(good).size(), 1u);
}

TEST(Csv, StatsAndRldLayout) {
  const std::vector<RunRecord> rs{record(10, true), record(30, false)};
  std::ostringstream stats, rld;
  write_stats_csv(describe(rs), stats, "U");
  EXPECT_EQ(stats.str(), "label,runs,mean,min,max,stddev,vc,q25,q75,q75_q25,opt_count\nU,2,20,10,30,10,0.5,10,30,3,1\n");
  write_rld_csv(empirical_rld(rs, 100), rld);
  EXPECT_EQ(rld.str(), "ops,cumulative_probability\n10,0.5\n");
}
