#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "ccdrift/pipeline.hpp"
#include "ccdrift/synthetic.hpp"
#include "fixture.hpp"

using namespace ccdrift;
namespace fs = std::filesystem;

namespace {

const MineResult& mined() {
  static const MineResult r = mine_repository(fixture_repo());
  return r;
}

TrainConfig quick() {
  TrainConfig c;
  c.forest.n_trees = 20;
  c.forest.threads = 1;
  c.skipgram.epochs = 2;
  c.skipgram.embedding_dim = 16;
  return c;
}

int run(const std::string& args) {
  const std::string cmd = "'" CCDRIFT_CLI "' " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("mining the fixture history") {
  const auto& r = mined();
  REQUIRE(r.records.size() == 14);
  std::vector<int> labels;
  std::vector<std::string> files;
  for (const auto& rec : r.records) {
    labels.push_back(rec.label);
    files.push_back(rec.file);
    CHECK(rec.label == label_pair(rec.pair_change.old_pair.comment_text, rec.pair_change.new_pair.comment_text));
  }
  CHECK(labels == std::vector<int>{0, 0, 0, 1, 0, 0, 0, 1, 1, 1, 0, 0, 0, 1});
  CHECK(files == std::vector<std::string>{"Serial.java", "Serial.java", "Serial.java", "Serial.java", "Cart.java",
                                          "Cart.java", "Inventory.java", "Inventory.java", "Inventory.java",
                                          "Cart.java", "Cart.java", "Cart.java", "Inventory.java",
                                          "Inventory.java"});
  CHECK(r.stats.commits == 10);
  CHECK(r.stats.method_positive == 2);
  CHECK(r.stats.method_negative == 6);
  CHECK(r.stats.block_positive == 3);
  CHECK(r.stats.block_negative == 3);
  CHECK(r.stats.total() == 14);
  CHECK(r.records[10].pair_change.refactorings.add_parameter);
  CHECK(r.records[4].pair_change.refactorings.inline_temp);
  CHECK(r.records[9].pair_change.ops.empty());

  CHECK(mine_repository(fixture_repo()).records == r.records);

  MineConfig strict;
  strict.include_comment_only = false;
  CHECK(mine_repository(fixture_repo(), strict).records.size() == 13);

  std::ostringstream os;
  print_mine_table(r.stats, os);
  CHECK(os.str().find("method") != std::string::npos);
}

TEST_CASE("training from mined records is deterministic") {
  const auto a = train_from_records(mined().records, quick());
  const auto b = train_from_records(mined().records, quick());
  REQUIRE(a.embedding.has_value());
  CHECK(*a.embedding == *b.embedding);
  CHECK(a.forest == b.forest);
  CHECK(a.train.rows == b.train.rows);
  CHECK(a.test.rows == b.test.rows);
  CHECK(a.train.rows.size() + a.test.rows.size() == 14);
  CHECK(a.feature_names == feature_names());

  auto negatives = mined().records;
  negatives.erase(std::remove_if(negatives.begin(), negatives.end(), [](const auto& r) { return r.label == 1; }),
                  negatives.end());
  CHECK_THROWS_AS(train_from_records(negatives, quick()), std::invalid_argument);
  TrainConfig bad = quick();
  bad.split = 1.5;
  CHECK_THROWS_AS(train_from_records(mined().records, bad), std::invalid_argument);
}

TEST_CASE("bundle persistence, detection and analysis") {
  const auto table = synthetic_table({600, 0.168, 4, PlantedSignal::common_token});
  const auto from_records = train_from_records(mined().records, quick());
  const auto bundle = train_with_embedding(table, *from_records.embedding, quick());

  const fs::path dir = fs::path(CCDRIFT_WORK_DIR) / "bundle";
  save_bundle(bundle, dir);
  const auto loaded = load_bundle(dir);
  CHECK(loaded.forest == bundle.forest);
  CHECK(*loaded.embedding == *bundle.embedding);
  CHECK(loaded.feature_names == bundle.feature_names);
  CHECK(loaded.standardization.mean == bundle.standardization.mean);
  CHECK(loaded.metrics.f1 == bundle.metrics.f1);
  CHECK(loaded.test.rows == bundle.test.rows);

  const auto report = detect_changes(loaded, mined().records);
  CHECK(report.examined == 14);
  for (std::size_t i = 1; i < report.entries.size(); ++i)
    CHECK(report.entries[i - 1].probability >= report.entries[i].probability);
  for (const auto& e : report.entries) {
    CHECK(e.label == 1);
    CHECK(e.top_features.size() <= 5);
  }
  CHECK(detect_changes(loaded, {}).entries.empty());
  std::ostringstream os;
  print_report(report, os);

  const auto no_embedding = train_from_table(table, quick());
  CHECK_THROWS_AS(detect_changes(no_embedding, mined().records), std::invalid_argument);

  const auto a = analyze(bundle, 5, 10);
  CHECK(a.calibration.size() <= 10);
  CHECK(a.top_k == 5);
  for (std::size_t i = 1; i < a.ranking.size(); ++i) CHECK(a.ranking[i - 1].score >= a.ranking[i].score);
  CHECK(a.full_f1 == bundle.metrics.f1);
  write_analysis(a, dir / "analysis");
  for (const char* f : {"importance.tsv", "subset.tsv", "calibration.tsv"}) CHECK(fs::exists(dir / "analysis" / f));
}

TEST_CASE("command-line exit codes") {
  CHECK(run("") == 1);
  CHECK(run("--help") == 0);
  CHECK(run("train --split nope") == 1);
  CHECK(run("mine --repo '" + (fs::path(CCDRIFT_WORK_DIR) / "plain_dir_cli").string() + "' --out x.jsonl") == 2);

  const fs::path empty = fs::path(CCDRIFT_WORK_DIR) / "cli_empty_repo";
  fs::remove_all(empty);
  fs::create_directories(empty);
  REQUIRE(std::system(("git -C '" + empty.string() + "' init -q").c_str()) == 0);
  CHECK(run("mine --repo '" + empty.string() + "' --out '" + (empty / "out.jsonl").string() + "'") == 2);

  const fs::path out = fs::path(CCDRIFT_WORK_DIR) / "cli_mine.jsonl";
  CHECK(run("mine --repo '" + fixture_repo().string() + "' --out '" + out.string() + "'") == 0);
  CHECK(load_dataset(out) == mined().records);
}
