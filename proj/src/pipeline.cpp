#include "ccdrift/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "ccdrift/random.hpp"
#include "ccdrift/refactor.hpp"

namespace ccdrift {
namespace {

using json = nlohmann::json;

std::optional<std::size_t> method_by_signature(const SyntaxTree& tree, const std::optional<std::string>& sig) {
  if (!sig) return std::nullopt;
  for (auto m : tree.methods())
    if (tree.node(m).method && tree.node(m).method->signature() == *sig) return m;
  return std::nullopt;
}

bool decl_changed(const DeclChange& d) {
  return d.method_name_changed || d.return_type_changed || d.parameters_changed || d.class_attributes_changed;
}

std::vector<bool> continuous_for(const std::vector<std::string>& names) {
  std::vector<bool> mask;
  const auto& types = feature_types();
  for (const auto& n : names) {
    const auto i = feature_index(n);
    mask.push_back(i && types[*i] == FeatureType::continuous);
  }
  return mask;
}

// Seeded Fisher-Yates over record indices; the first `n_train` go to training.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(std::size_t n, double split,
                                                                             std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  Rng rng(derive_seed(seed, 0));
  for (std::size_t i = n; i > 1; --i) std::swap(idx[i - 1], idx[uniform_index(rng, i)]);
  auto n_train = static_cast<std::size_t>(std::llround(split * static_cast<double>(n)));
  n_train = std::clamp<std::size_t>(n_train, 1, n - 1);
  return {{idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train)},
          {idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end()}};
}

void require_both_classes(const std::vector<int>& labels) {
  const bool pos = std::count(labels.begin(), labels.end(), 1) > 0;
  const bool neg = std::count(labels.begin(), labels.end(), 0) > 0;
  if (!pos || !neg) throw std::invalid_argument("dataset has a single class");
  if (labels.size() < 4) throw std::invalid_argument("dataset needs at least four records");
}

Metrics baseline_metrics(const FeatureTable& test, double threshold) {
  const auto it = std::find(test.names.begin(), test.names.end(), "d_cmt_code");
  if (it == test.names.end()) return {};
  const auto j = static_cast<std::size_t>(it - test.names.begin());
  std::vector<int> pred;
  for (const auto& r : test.rows) pred.push_back(r[j] > threshold ? 1 : 0);
  return evaluate(pred, test.labels);
}

std::vector<int> predict_labels(const Forest& f, const Matrix& xs) {
  std::vector<int> out;
  for (const auto& x : xs) out.push_back(predict(f, x).label);
  return out;
}

// Fits preprocessing and the forest on `train`, scores `test`.
ModelBundle fit(FeatureTable train, FeatureTable test, const TrainConfig& cfg) {
  require_both_classes(train.labels);
  ModelBundle b;
  b.config = cfg;
  b.feature_names = train.names;
  b.standardization = fit_standardization(train.rows, continuous_for(train.names));
  const Matrix xs = b.standardization.apply(train.rows);
  std::vector<bool> kept(train.names.size(), false);
  if (train.rows.size() >= 3) {
    for (auto j : filter_correlated(xs, cfg.correlation_threshold)) kept[j] = true;
  } else {
    kept.assign(kept.size(), true);
  }
  Hyperparams hp = cfg.forest;
  hp.seed = derive_seed(cfg.seed, 2);
  if (cfg.grid_search) {
    const auto results = grid_search(xs, train.labels, default_grid(hp), cfg.folds, derive_seed(cfg.seed, 3), kept);
    hp = results.front().hp;
  }
  b.forest = train_forest(xs, train.labels, hp, kept, train.names);
  b.metrics = evaluate(predict_labels(b.forest, b.standardization.apply(test.rows)), test.labels);
  b.baseline = baseline_metrics(test, cfg.baseline_threshold);
  b.train = std::move(train);
  b.test = std::move(test);
  return b;
}

FeatureTable subset(const FeatureTable& t, const std::vector<std::size_t>& idx) {
  FeatureTable out;
  out.names = t.names;
  for (auto i : idx) {
    out.rows.push_back(t.rows[i]);
    out.labels.push_back(t.labels[i]);
  }
  return out;
}

json metrics_json(const Metrics& m) {
  return {{"tp", m.tp}, {"fp", m.fp}, {"tn", m.tn}, {"fn", m.fn},
          {"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
}

Metrics metrics_from(const json& j) {
  Metrics m;
  m.tp = j.at("tp").get<std::size_t>();
  m.fp = j.at("fp").get<std::size_t>();
  m.tn = j.at("tn").get<std::size_t>();
  m.fn = j.at("fn").get<std::size_t>();
  m.precision = j.at("precision").get<double>();
  m.recall = j.at("recall").get<double>();
  m.f1 = j.at("f1").get<double>();
  return m;
}

json config_json(const TrainConfig& c) {
  return {{"split", c.split},
          {"seed", c.seed},
          {"correlation_threshold", c.correlation_threshold},
          {"baseline_threshold", c.baseline_threshold},
          {"binarize_counts", c.features.binarize_counts},
          {"return_from_comment_tag", c.features.return_from_comment_tag},
          {"grid_search", c.grid_search},
          {"folds", c.folds},
          {"window_radius", c.skipgram.window_radius},
          {"embedding_dim", c.skipgram.embedding_dim},
          {"negative_samples", c.skipgram.negative_samples},
          {"epochs", c.skipgram.epochs},
          {"learning_rate", c.skipgram.learning_rate}};
}

TrainConfig config_from(const json& j, const Hyperparams& hp) {
  TrainConfig c;
  c.split = j.at("split").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.correlation_threshold = j.at("correlation_threshold").get<double>();
  c.baseline_threshold = j.at("baseline_threshold").get<double>();
  c.features.binarize_counts = j.at("binarize_counts").get<bool>();
  c.features.return_from_comment_tag = j.at("return_from_comment_tag").get<bool>();
  c.grid_search = j.at("grid_search").get<bool>();
  c.folds = j.at("folds").get<int>();
  c.skipgram.window_radius = j.at("window_radius").get<int>();
  c.skipgram.embedding_dim = j.at("embedding_dim").get<int>();
  c.skipgram.negative_samples = j.at("negative_samples").get<int>();
  c.skipgram.epochs = j.at("epochs").get<int>();
  c.skipgram.learning_rate = j.at("learning_rate").get<double>();
  c.forest = hp;
  return c;
}

std::string excerpt(const std::string& comment) {
  std::string s = normalize_comment_text(comment);
  if (s.size() > 72) s = s.substr(0, 69) + "...";
  return s;
}

}  // namespace

std::vector<PairChange> changes_for_file(std::string_view old_source, std::string_view new_source,
                                         const MineConfig& config) {
  const auto& g = grammar_for(config.grammar);
  const auto ot = g.parse(old_source, ParseMode::compilation_unit);
  const auto nt = g.parse(new_source, ParseMode::compilation_unit);
  auto pairs = [](std::string_view src, const SyntaxTree& t) {
    auto p = extract_method_pairs(src, t);
    auto b = extract_block_pairs(src, t);
    p.insert(p.end(), b.begin(), b.end());
    return p;
  };
  std::vector<PairChange> out;
  for (const auto& a : align_pairs(pairs(old_source, ot), pairs(new_source, nt), config.align)) {
    if (!a.old_pair || !a.new_pair) continue;
    PairChange pc;
    pc.old_pair = *a.old_pair;
    pc.new_pair = *a.new_pair;
    pc.ops = diff(fragment_tree(pc.old_pair, config.grammar), fragment_tree(pc.new_pair, config.grammar),
                  config.diff);
    const auto om = method_by_signature(ot, pc.old_pair.enclosing_method_signature);
    const auto nm = method_by_signature(nt, pc.new_pair.enclosing_method_signature);
    pc.decl = decl_changes(decl_context(ot, om), decl_context(nt, nm), pc.ops);
    pc.refactorings = detect_refactorings(pc.ops, ot, nt, pc.decl, om, nm);
    pc.label = label_pair(pc.old_pair.comment_text, pc.new_pair.comment_text);
    const bool code_changed = !pc.ops.empty() || decl_changed(pc.decl);
    if (!code_changed && !(pc.label == 1 && config.include_comment_only)) continue;
    populate_tokens(pc);
    out.push_back(std::move(pc));
  }
  return out;
}

MineResult mine_repository(const std::filesystem::path& repo, const MineConfig& config) {
  const auto scan = scan_history(repo, config.extensions, config.range);
  MineResult r;
  r.stats.commits = scan.commits.size();
  r.stats.skipped_commits = scan.skipped;
  auto project = std::filesystem::weakly_canonical(std::filesystem::absolute(repo)).filename().string();
  if (project.empty()) project = repo.filename().string();
  for (const auto& c : scan.commits) {
    for (const auto& f : c.changed_files) {
      if (!f.old_source || !f.new_source) continue;
      ++r.stats.files;
      std::vector<PairChange> changes;
      try {
        changes = changes_for_file(*f.old_source, *f.new_source, config);
      } catch (const ParseError&) {
        ++r.stats.unparsable_files;
        continue;
      }
      for (auto& pc : changes) {
        DatasetRecord rec;
        rec.project = project;
        rec.commit_id = c.commit_id;
        rec.file = f.path;
        rec.label = pc.label;
        const bool method = pc.old_pair.kind == PairKind::method;
        auto& slot = method ? (rec.label ? r.stats.method_positive : r.stats.method_negative)
                            : (rec.label ? r.stats.block_positive : r.stats.block_negative);
        ++slot;
        rec.pair_change = std::move(pc);
        r.records.push_back(std::move(rec));
      }
    }
  }
  return r;
}

void print_mine_table(const MineStats& s, std::ostream& os) {
  auto row = [&](const char* name, std::size_t pos, std::size_t neg) {
    os << std::left << std::setw(8) << name << std::right << std::setw(10) << pos << std::setw(10) << neg
       << std::setw(10) << pos + neg << '\n';
  };
  os << std::left << std::setw(8) << "kind" << std::right << std::setw(10) << "positive" << std::setw(10)
     << "negative" << std::setw(10) << "total" << '\n';
  row("method", s.method_positive, s.method_negative);
  row("block", s.block_positive, s.block_negative);
  row("all", s.method_positive + s.block_positive, s.method_negative + s.block_negative);
  os << "commits " << s.commits << ", skipped " << s.skipped_commits << ", files " << s.files << ", unparsable "
     << s.unparsable_files << '\n';
}

void TrainConfig::validate() const {
  if (!(split > 0.0 && split < 1.0)) throw std::invalid_argument("split must lie in (0, 1)");
  if (!(correlation_threshold > 0.0 && correlation_threshold <= 1.0))
    throw std::invalid_argument("correlation threshold must lie in (0, 1]");
  if (folds < 2) throw std::invalid_argument("folds must be at least 2");
  skipgram.validate();
  forest.validate();
}

std::vector<TokenSequence> embedding_corpus(const std::vector<DatasetRecord>& records, std::uint64_t seed) {
  std::vector<TokenSequence> docs;
  std::uint64_t stream = 0;
  for (const auto& r : records)
    for (const auto* p : {&r.pair_change.old_pair, &r.pair_change.new_pair}) {
      auto d = build_documents(*p, derive_seed(seed, stream++));
      if (!d.comment_doc.empty()) docs.push_back(std::move(d.comment_doc));
      if (!d.code_doc.empty()) docs.push_back(std::move(d.code_doc));
    }
  return docs;
}

ModelBundle train_from_records(const std::vector<DatasetRecord>& records, const TrainConfig& config) {
  config.validate();
  std::vector<int> labels;
  for (const auto& r : records) labels.push_back(r.label);
  require_both_classes(labels);
  const auto [tr, te] = split_indices(records.size(), config.split, config.seed);

  std::vector<DatasetRecord> train_records;
  for (auto i : tr) train_records.push_back(records[i]);
  SkipgramConfig sg = config.skipgram;
  sg.seed = derive_seed(config.seed, 1);
  auto corpus = embedding_corpus(train_records, derive_seed(config.seed, 4));
  if (corpus.empty()) throw std::invalid_argument("training pairs carry no words");
  EmbeddingModel emb = train_skipgram(corpus, sg);

  auto table = [&](const std::vector<std::size_t>& idx) {
    FeatureTable t;
    t.names = feature_names();
    for (auto i : idx) {
      t.rows.push_back(extract_features(records[i].pair_change, emb, config.features));
      t.labels.push_back(records[i].label);
    }
    return t;
  };
  auto b = fit(table(tr), table(te), config);
  b.embedding = std::move(emb);
  return b;
}

ModelBundle train_from_table(const FeatureTable& table, const TrainConfig& config) {
  config.validate();
  if (table.labels.size() != table.rows.size()) throw std::invalid_argument("feature table has no labels");
  require_both_classes(table.labels);
  const auto [tr, te] = split_indices(table.rows.size(), config.split, config.seed);
  return fit(subset(table, tr), subset(table, te), config);
}

ModelBundle train_with_embedding(const FeatureTable& table, EmbeddingModel embedding, const TrainConfig& config) {
  auto b = train_from_table(table, config);
  b.embedding = std::move(embedding);
  return b;
}

void save_bundle(const ModelBundle& b, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  if (b.embedding) b.embedding->save(dir / "embedding.bin");
  else std::filesystem::remove(dir / "embedding.bin");
  save_forest(b.forest, dir / "forest.bin");
  write_feature_matrix(dir / "train_features.tsv", b.train.names, b.train.rows, &b.train.labels);
  write_feature_matrix(dir / "test_features.tsv", b.test.names, b.test.rows, &b.test.labels);
  std::vector<bool> applied = b.standardization.applied;
  json j = {{"version", 1},
            {"feature_names", b.feature_names},
            {"standardization",
             {{"mean", b.standardization.mean}, {"std", b.standardization.std}, {"applied", applied}}},
            {"metrics", metrics_json(b.metrics)},
            {"baseline", metrics_json(b.baseline)},
            {"config", config_json(b.config)}};
  std::ofstream os(dir / "bundle.json");
  os << j.dump(1) << '\n';
  if (!os) throw std::runtime_error("cannot write bundle in " + dir.string());
}

ModelBundle load_bundle(const std::filesystem::path& dir) {
  std::ifstream is(dir / "bundle.json");
  if (!is) throw std::runtime_error("no bundle in " + dir.string());
  const json j = json::parse(is);
  if (j.at("version").get<int>() != 1) throw std::runtime_error("unsupported bundle version");
  ModelBundle b;
  b.forest = load_forest(dir / "forest.bin");
  if (std::filesystem::exists(dir / "embedding.bin")) b.embedding = EmbeddingModel::load(dir / "embedding.bin");
  b.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  const auto& s = j.at("standardization");
  b.standardization.mean = s.at("mean").get<std::vector<double>>();
  b.standardization.std = s.at("std").get<std::vector<double>>();
  b.standardization.applied = s.at("applied").get<std::vector<bool>>();
  b.metrics = metrics_from(j.at("metrics"));
  b.baseline = metrics_from(j.at("baseline"));
  b.config = config_from(j.at("config"), b.forest.hp);
  b.train = read_feature_matrix(dir / "train_features.tsv");
  b.test = read_feature_matrix(dir / "test_features.tsv");
  if (b.forest.n_features() != b.feature_names.size()) throw std::runtime_error("bundle parts disagree");
  return b;
}

void print_metrics(const ModelBundle& b, std::ostream& os) {
  auto line = [&](const char* name, const Metrics& m) {
    os << std::left << std::setw(10) << name << std::right << std::fixed << std::setprecision(4)
       << " precision " << m.precision << " recall " << m.recall << " f1 " << m.f1 << "  (tp " << m.tp
       << " fp " << m.fp << " fn " << m.fn << " tn " << m.tn << ")\n";
  };
  line("forest", b.metrics);
  line("baseline", b.baseline);
  os.unsetf(std::ios::fixed);
  std::size_t kept = std::count(b.forest.kept_mask.begin(), b.forest.kept_mask.end(), true);
  os << "features kept " << kept << " of " << b.forest.kept_mask.size() << ", trees " << b.forest.trees.size()
     << ", train " << b.train.rows.size() << ", test " << b.test.rows.size() << '\n';
}

DetectionReport detect_changes(const ModelBundle& bundle, const std::vector<DatasetRecord>& records) {
  if (!bundle.embedding) throw std::invalid_argument("bundle has no embedding to featurize changes");
  if (bundle.feature_names != feature_names())
    throw std::invalid_argument("bundle feature layout does not match the extractor");
  const auto importance = feature_importance(bundle.forest);
  DetectionReport report;
  for (const auto& r : records) {
    ++report.examined;
    const auto xs = bundle.standardization.apply(extract_features(r.pair_change, *bundle.embedding,
                                                                  bundle.config.features));
    const auto p = predict(bundle.forest, xs);
    if (p.label != 1) continue;
    Detection d;
    d.project = r.project;
    d.commit = r.commit_id;
    d.file = r.file;
    d.comment_excerpt = excerpt(r.pair_change.old_pair.comment_text);
    d.comment_span = r.pair_change.old_pair.comment_span;
    d.probability = p.probability;
    d.label = p.label;
    std::vector<Contribution> contrib;
    for (std::size_t j = 0; j < xs.size(); ++j)
      if (importance[j] > 0) contrib.push_back({bundle.feature_names[j], importance[j] * xs[j]});
    std::stable_sort(contrib.begin(), contrib.end(), [](const Contribution& a, const Contribution& b) {
      return std::abs(a.value) > std::abs(b.value);
    });
    if (contrib.size() > 5) contrib.resize(5);
    d.top_features = std::move(contrib);
    report.entries.push_back(std::move(d));
  }
  std::stable_sort(report.entries.begin(), report.entries.end(),
                   [](const Detection& a, const Detection& b) { return a.probability > b.probability; });
  return report;
}

DetectionReport detect(const ModelBundle& bundle, const std::filesystem::path& repo, const MineConfig& config) {
  MineConfig c = config;
  c.include_comment_only = false;
  return detect_changes(bundle, mine_repository(repo, c).records);
}

void print_report(const DetectionReport& report, std::ostream& os) {
  os << "examined " << report.examined << ", flagged " << report.entries.size() << '\n';
  for (const auto& d : report.entries) {
    os << std::fixed << std::setprecision(3) << d.probability << "  " << d.project << "  "
       << d.commit.substr(0, 12) << "  " << d.file << ":" << d.comment_span.first << "  \"" << d.comment_excerpt
       << "\"\n";
    for (const auto& c : d.top_features) os << "        " << c.feature << " " << c.value << '\n';
    os.unsetf(std::ios::fixed);
  }
}

AnalysisReport analyze(const ModelBundle& bundle, std::size_t top_k, int bins) {
  AnalysisReport a;
  a.top_k = top_k;
  const auto imp = feature_importance(bundle.forest);
  std::vector<std::size_t> order(imp.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return imp[x] > imp[y]; });
  for (auto i : order) a.ranking.push_back({bundle.feature_names[i], imp[i]});

  const Matrix train = bundle.standardization.apply(bundle.train.rows);
  const Matrix test = bundle.standardization.apply(bundle.test.rows);
  a.full_f1 = evaluate(predict_labels(bundle.forest, test), bundle.test.labels).f1;
  std::vector<bool> mask(imp.size(), false);
  for (std::size_t r = 0; r < std::min(top_k, order.size()); ++r)
    if (bundle.forest.kept_mask[order[r]]) mask[order[r]] = true;
  const auto top = train_forest(train, bundle.train.labels, bundle.forest.hp, mask, bundle.feature_names);
  a.top_f1 = evaluate(predict_labels(top, test), bundle.test.labels).f1;

  std::vector<double> probs;
  for (const auto& x : test) probs.push_back(predict(bundle.forest, x).probability);
  a.calibration = calibration(probs, bundle.test.labels, bins);
  return a;
}

void write_analysis(const AnalysisReport& a, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream imp(dir / "importance.tsv");
  imp << "rank\tfeature\timportance\n" << std::setprecision(17);
  for (std::size_t i = 0; i < a.ranking.size(); ++i)
    imp << i + 1 << '\t' << a.ranking[i].feature << '\t' << a.ranking[i].score << '\n';
  std::ofstream sub(dir / "subset.tsv");
  sub << "features\tf1\n" << std::setprecision(17) << "all\t" << a.full_f1 << '\n'
      << "top" << a.top_k << '\t' << a.top_f1 << '\n';
  std::ofstream cal(dir / "calibration.tsv");
  cal << "mean_predicted\tobserved\tcount\n" << std::setprecision(17);
  for (const auto& p : a.calibration) cal << p.mean_predicted << '\t' << p.observed << '\t' << p.count << '\n';
  if (!imp || !sub || !cal) throw std::runtime_error("cannot write analysis to " + dir.string());
}

}  // namespace ccdrift
