#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "ccdrift/pipeline.hpp"
#include "ccdrift/synthetic.hpp"

namespace {

using namespace ccdrift;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw UsageError("cannot read config " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int no = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(is, line)) {
    ++no;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(no) + ": expected key = value");
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw UsageError("config " + key + ": expected a boolean");
}

void apply_config(const std::map<std::string, std::string>& kv, MineConfig& mine, TrainConfig& train) {
  for (const auto& [k, v] : kv) {
    try {
      if (k == "seed") train.seed = std::stoull(v);
      else if (k == "split") train.split = std::stod(v);
      else if (k == "threshold" || k == "correlation_threshold") train.correlation_threshold = std::stod(v);
      else if (k == "baseline_threshold") train.baseline_threshold = std::stod(v);
      else if (k == "ext") mine.extensions = {v};
      else if (k == "grammar") mine.grammar = v;
      else if (k == "include_comment_only") mine.include_comment_only = parse_bool(k, v);
      else if (k == "binarize_counts") train.features.binarize_counts = parse_bool(k, v);
      else if (k == "return_from_comment_tag") train.features.return_from_comment_tag = parse_bool(k, v);
      else if (k == "grid_search") train.grid_search = parse_bool(k, v);
      else if (k == "folds") train.folds = std::stoi(v);
      else if (k == "window_radius") train.skipgram.window_radius = std::stoi(v);
      else if (k == "embedding_dim") train.skipgram.embedding_dim = std::stoi(v);
      else if (k == "negative_samples") train.skipgram.negative_samples = std::stoi(v);
      else if (k == "epochs") train.skipgram.epochs = std::stoi(v);
      else if (k == "learning_rate") train.skipgram.learning_rate = std::stod(v);
      else if (k == "n_trees") train.forest.n_trees = std::stoi(v);
      else if (k == "max_depth") train.forest.max_depth = v == "none" ? std::nullopt : std::optional<int>(std::stoi(v));
      else if (k == "min_samples_split") train.forest.min_samples_split = std::stoi(v);
      else if (k == "min_samples_leaf") train.forest.min_samples_leaf = std::stoi(v);
      else if (k == "threads") train.forest.threads = std::stoi(v);
      else if (k == "criterion") {
        if (v == "gini") train.forest.criterion = Criterion::gini;
        else if (v == "entropy") train.forest.criterion = Criterion::entropy;
        else throw UsageError("config criterion: expected gini or entropy");
      } else if (k == "max_features") {
        if (v == "sqrt") train.forest.max_features = MaxFeatures::sqrt;
        else if (v == "log2") train.forest.max_features = MaxFeatures::log2;
        else if (v == "all") train.forest.max_features = MaxFeatures::all;
        else throw UsageError("config max_features: expected sqrt, log2 or all");
      } else {
        throw UsageError("unknown config key " + k);
      }
    } catch (const std::logic_error&) {
      throw UsageError("config " + k + ": bad value " + v);
    }
  }
}

bool given(const CLI::App* cmd, const std::string& name) {
  const auto* o = cmd->get_option_no_throw(name);
  return o && o->count() > 0;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Outdated comment detection over version-control history"};
  app.require_subcommand(1);

  std::vector<std::string> repos, exts;
  std::string config_path, out, dataset, model, range, embedding, signal = "token_distance";
  std::uint64_t seed = 1;
  double threshold = 0.8, split = 0.7;
  bool grid = false, no_comment_only = false;
  std::size_t rows = 5000, top_k = 15;

  auto common = [&](CLI::App* c) {
    c->add_option("--config", config_path, "key = value file; flags override it");
    c->add_option("--seed", seed, "seed for every stochastic step");
  };

  auto* mine = app.add_subcommand("mine", "mine labeled code-comment pair changes");
  common(mine);
  mine->add_option("--repo", repos, "repository path")->required();
  mine->add_option("--ext", exts, "file extension filter, e.g. .java");
  mine->add_option("--range", range, "commit range, default HEAD");
  mine->add_flag("--no-comment-only", no_comment_only, "drop pairs where only the comment changed");
  mine->add_option("--out", out, "dataset file (JSON Lines)")->required();

  auto* train = app.add_subcommand("train", "train the embedding and forest");
  common(train);
  train->add_option("--dataset", dataset, "dataset .jsonl or feature table .tsv")->required();
  train->add_option("--out", out, "model bundle directory")->required();
  train->add_option("--threshold", threshold, "Pearson correlation filter threshold");
  train->add_option("--split", split, "training fraction");
  train->add_flag("--grid-search", grid, "cross-validated hyperparameter search");
  train->add_option("--embedding", embedding, "embedding.bin to keep when training on a feature table");

  auto* det = app.add_subcommand("detect", "flag comments a change left outdated");
  common(det);
  det->add_option("--model", model, "model bundle directory")->required();
  det->add_option("--repo", repos, "repository path")->required();
  det->add_option("--ext", exts, "file extension filter");
  det->add_option("--range", range, "commit range, default HEAD");

  auto* rep = app.add_subcommand("report", "importance, subset retrain and calibration");
  rep->add_option("--model", model, "model bundle directory")->required();
  rep->add_option("--out", out, "output directory, default <model>/report");
  rep->add_option("--top", top_k, "subset size for the retrain");

  auto* syn = app.add_subcommand("synth", "write a planted-signal feature table");
  syn->add_option("--seed", seed, "generator seed");
  syn->add_option("--rows", rows, "row count");
  syn->add_option("--signal", signal, "planted signal")->check(CLI::IsMember({"token_distance", "common_token"}));
  syn->add_option("--out", out, "feature table (.tsv)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    MineConfig mc;
    TrainConfig tc;
    if (!config_path.empty()) apply_config(read_config(config_path), mc, tc);
    auto* cmd = app.get_subcommands().front();
    if (given(cmd, "--seed")) tc.seed = seed;
    if (given(cmd, "--threshold")) tc.correlation_threshold = threshold;
    if (given(cmd, "--split")) tc.split = split;
    if (grid) tc.grid_search = true;
    if (!exts.empty()) mc.extensions = exts;
    if (!range.empty()) mc.range = range;
    if (no_comment_only) mc.include_comment_only = false;

    if (cmd == mine) {
      std::vector<DatasetRecord> all;
      MineStats total;
      for (const auto& r : repos) {
        auto res = mine_repository(r, mc);
        for (auto& rec : res.records) all.push_back(std::move(rec));
        total.commits += res.stats.commits;
        total.skipped_commits += res.stats.skipped_commits;
        total.files += res.stats.files;
        total.unparsable_files += res.stats.unparsable_files;
        total.method_positive += res.stats.method_positive;
        total.method_negative += res.stats.method_negative;
        total.block_positive += res.stats.block_positive;
        total.block_negative += res.stats.block_negative;
      }
      print_mine_table(total, std::cout);
      if (all.empty()) {
        std::cerr << "error: no code-comment pair changes found\n";
        return 2;
      }
      persist_dataset(all, out);
    } else if (cmd == train) {
      const bool table = ends_with(dataset, ".tsv");
      if (!embedding.empty() && !table) throw UsageError("--embedding applies to .tsv datasets only");
      ModelBundle b = !table                ? train_from_records(load_dataset(dataset), tc)
                      : embedding.empty() ? train_from_table(read_feature_matrix(dataset), tc)
                                          : train_with_embedding(read_feature_matrix(dataset),
                                                                 EmbeddingModel::load(embedding), tc);
      save_bundle(b, out);
      print_metrics(b, std::cout);
    } else if (cmd == det) {
      const auto b = load_bundle(model);
      DetectionReport total;
      for (const auto& r : repos) {
        auto rep_r = detect(b, r, mc);
        total.examined += rep_r.examined;
        for (auto& e : rep_r.entries) total.entries.push_back(std::move(e));
      }
      std::stable_sort(total.entries.begin(), total.entries.end(),
                       [](const Detection& a, const Detection& c) { return a.probability > c.probability; });
      print_report(total, std::cout);
    } else if (cmd == rep) {
      const auto b = load_bundle(model);
      const auto a = analyze(b, top_k);
      const std::filesystem::path dir = out.empty() ? std::filesystem::path(model) / "report" : std::filesystem::path(out);
      write_analysis(a, dir);
      print_metrics(b, std::cout);
      std::cout << "importance\n";
      for (std::size_t i = 0; i < a.ranking.size() && i < top_k; ++i)
        std::cout << "  " << i + 1 << ' ' << a.ranking[i].feature << ' ' << a.ranking[i].score << '\n';
      std::cout << "f1 all " << a.full_f1 << ", top" << a.top_k << ' ' << a.top_f1 << '\n'
                << "calibration bins " << a.calibration.size() << ", written to " << dir.string() << '\n';
    } else if (cmd == syn) {
      SyntheticConfig sc;
      sc.rows = rows;
      sc.seed = seed;
      sc.signal = signal == "common_token" ? PlantedSignal::common_token : PlantedSignal::token_distance;
      const auto t = synthetic_table(sc);
      write_feature_matrix(out, t.names, t.rows, &t.labels);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
