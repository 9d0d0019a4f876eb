#include "ccdrift/features.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ccdrift {
namespace {

constexpr std::array<ChangeAction, 3> kActions = {ChangeAction::Add, ChangeAction::Delete,
                                                  ChangeAction::Update};

struct Layout {
  std::vector<std::string> names;
  std::vector<FeatureType> types;
  std::vector<FeatureGroup> groups;
};

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

const Layout& layout() {
  static const Layout s = [] {
    Layout x;
    auto add = [&](std::string n, FeatureType t, FeatureGroup g) {
      x.names.push_back(std::move(n));
      x.types.push_back(t);
      x.groups.push_back(g);
    };
    using T = FeatureType;
    using G = FeatureGroup;
    for (const char* n : {"class_attributes_change", "method_name_change", "return_type_change",
                          "parameter_change"})
      add(n, T::binary, G::code);
    add("code_line_proportion", T::continuous, G::code);
    add("changed_line_proportion", T::continuous, G::code);
    for (std::size_t k = 0; k < kFeatureStatementKinds; ++k)
      for (auto a : kActions)
        add(lower(to_string(static_cast<StatementKind>(k))) + "_" + std::string(to_string(a)), T::discrete,
            G::code);
    for (auto n : RefactoringFlags::names()) add(std::string(n), T::binary, G::code);
    for (std::size_t p = 0; p < kPosCount; ++p)
      add("code_" + std::string(pos_name(static_cast<Pos>(p))) + "_distance", T::continuous, G::code);
    add("number_of_changes", T::discrete, G::code);
    add("contains_return", T::binary, G::code);
    for (const char* n : {"todo", "fix", "version", "bug"}) add(n, T::binary, G::comment);
    for (std::size_t p = 0; p < kPosCount; ++p)
      add("comment_" + std::string(pos_name(static_cast<Pos>(p))) + "_proportion", T::continuous, G::comment);
    for (const char* n : {"d_cmt_smt", "d_token_code", "d_cmt_code"}) add(n, T::continuous, G::relation);
    add("common_token_pair_distance", T::discrete, G::relation);
    return x;
  }();
  return s;
}

bool compound(StatementKind k) {
  switch (k) {
    case StatementKind::If:
    case StatementKind::ElseIf:
    case StatementKind::For:
    case StatementKind::While:
    case StatementKind::Catch:
    case StatementKind::Try:
      return true;
    default:
      return false;
  }
}

// Lines touched by the ops; compound statements count their header line.
std::size_t changed_lines(const std::vector<ChangeOp>& ops) {
  std::set<int> old_lines, new_lines;
  for (const auto& op : ops) {
    auto mark = [&](const std::optional<LineSpan>& s, std::set<int>& into) {
      if (!s) return;
      const int last = compound(op.kind) ? s->first : s->last;
      for (int l = s->first; l <= last; ++l) into.insert(l);
    };
    if (op.action == ChangeAction::Add) {
      mark(op.new_span, new_lines);
    } else {
      mark(op.old_span, old_lines);
    }
  }
  return old_lines.size() + new_lines.size();
}

bool has_return(const CodeCommentPair& p) {
  if (p.code_lines.empty()) return false;
  const auto t = fragment_tree(p);
  for (auto s : t.statements())
    if (t.node(s).statement == StatementKind::Return) return true;
  return false;
}

std::size_t shared(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  const std::set<std::string> sa(a.begin(), a.end());
  const std::set<std::string> sb(b.begin(), b.end());
  std::size_t n = 0;
  for (const auto& w : sa) n += sb.count(w);
  return n;
}

void append(TokenSequence& into, const TokenSequence& more) {
  into.tokens.insert(into.tokens.end(), more.tokens.begin(), more.tokens.end());
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void populate_tokens(PairChange& pc) {
  pc.s_cmt = normalize(pc.old_pair.comment_text, Origin::comment);
  pc.s_code = normalize(code_text(pc.old_pair), Origin::code);
  pc.s_code_new = normalize(code_text(pc.new_pair), Origin::code);
  pc.s_smt = TokenSequence{{}, Origin::code};
  pc.s_smt_new = TokenSequence{{}, Origin::code};
  for (const auto& op : pc.ops) {
    if (op.old_text) append(pc.s_smt, normalize(*op.old_text, Origin::code));
    if (op.new_text) append(pc.s_smt_new, normalize(*op.new_text, Origin::code));
  }
}

const std::vector<std::string>& feature_names() { return layout().names; }
const std::vector<FeatureType>& feature_types() { return layout().types; }
const std::vector<FeatureGroup>& feature_groups() { return layout().groups; }

std::optional<std::size_t> feature_index(std::string_view name) {
  const auto& n = feature_names();
  auto it = std::find(n.begin(), n.end(), name);
  if (it == n.end()) return std::nullopt;
  return static_cast<std::size_t>(it - n.begin());
}

std::vector<bool> continuous_mask() {
  std::vector<bool> m;
  for (auto t : feature_types()) m.push_back(t == FeatureType::continuous);
  return m;
}

std::vector<double> code_features(const PairChange& pc, const FeatureConfig& config) {
  std::vector<double> v;
  v.reserve(53);
  v.push_back(pc.decl.class_attributes_changed);
  v.push_back(pc.decl.method_name_changed);
  v.push_back(pc.decl.return_type_changed);
  v.push_back(pc.decl.parameters_changed);

  const double code_lines = static_cast<double>(pc.old_pair.code_lines.size());
  const double comment_lines = pc.old_pair.comment_span.lines();
  const double total = code_lines + comment_lines;
  v.push_back(total > 0 ? code_lines / total : 0.0);
  v.push_back(total > 0 ? std::min(1.0, static_cast<double>(changed_lines(pc.ops)) / total) : 0.0);

  std::array<double, kFeatureStatementKinds * 3> counts{};
  for (const auto& op : pc.ops) {
    const auto k = static_cast<std::size_t>(op.kind);
    if (k >= kFeatureStatementKinds) continue;
    counts[k * 3 + static_cast<std::size_t>(op.action)] += 1;
  }
  for (auto c : counts) v.push_back(config.binarize_counts ? (c > 0 ? 1.0 : 0.0) : c);

  for (bool b : pc.refactorings.values()) v.push_back(b);

  const auto d = pos_distance(pos_distribution(pc.s_code), pos_distribution(pc.s_code_new));
  v.insert(v.end(), d.begin(), d.end());

  v.push_back(static_cast<double>(count_changes(pc.ops)));
  if (config.return_from_comment_tag) {
    v.push_back(pc.old_pair.comment_text.find("@return") != std::string::npos);
  } else {
    v.push_back(has_return(pc.old_pair) || has_return(pc.new_pair));
  }
  return v;
}

std::vector<double> comment_features(std::string_view comment, const PosTagger& tagger) {
  const auto c = lower(comment);
  auto contains = [&](const char* k) { return c.find(k) != std::string::npos; };
  std::vector<double> v;
  v.push_back(contains("todo"));
  v.push_back(contains("fixme") || contains("fixed"));
  v.push_back(contains("version"));
  v.push_back(contains("bug"));
  const auto dist = pos_distribution(normalize(comment, Origin::comment), tagger);
  v.insert(v.end(), dist.proportions.begin(), dist.proportions.end());
  return v;
}

std::vector<double> relation_features(const PairChange& pc, const EmbeddingModel& model) {
  const auto& cmt = pc.s_cmt.tokens;
  double d_smt = 0;
  if (!pc.s_smt.empty() || !pc.s_smt_new.empty())
    d_smt = std::abs(sim_ss(cmt, pc.s_smt.tokens, model) - sim_ss(cmt, pc.s_smt_new.tokens, model));
  double d_token = 0;
  for (const auto& w : cmt)
    d_token += std::abs(sim_ws(w, pc.s_code.tokens, model) - sim_ws(w, pc.s_code_new.tokens, model));
  if (!cmt.empty()) d_token /= static_cast<double>(cmt.size());
  const double d_code =
      std::abs(sim_ss(cmt, pc.s_code.tokens, model) - sim_ss(cmt, pc.s_code_new.tokens, model));
  const double common = static_cast<double>(shared(cmt, pc.s_code.tokens)) -
                        static_cast<double>(shared(cmt, pc.s_code_new.tokens));
  return {d_smt, d_token, d_code, common};
}

std::vector<double> extract_features(const PairChange& pc, const EmbeddingModel& model,
                                     const FeatureConfig& config) {
  auto v = code_features(pc, config);
  const auto c = comment_features(pc.old_pair.comment_text);
  const auto r = relation_features(pc, model);
  v.insert(v.end(), c.begin(), c.end());
  v.insert(v.end(), r.begin(), r.end());
  return v;
}

std::vector<double> Standardization::apply(const std::vector<double>& row) const {
  if (row.size() != mean.size()) throw std::invalid_argument("row width does not match standardization");
  std::vector<double> out = row;
  for (std::size_t j = 0; j < out.size(); ++j)
    if (applied[j]) out[j] = std[j] > 0 ? (row[j] - mean[j]) / std[j] : 0.0;
  return out;
}

Matrix Standardization::apply(const Matrix& m) const {
  Matrix out;
  out.reserve(m.size());
  for (const auto& r : m) out.push_back(apply(r));
  return out;
}

Standardization fit_standardization(const Matrix& m, const std::vector<bool>& continuous) {
  if (m.size() < 2) throw std::invalid_argument("standardization needs at least two rows");
  const std::size_t w = m.front().size();
  if (continuous.size() != w) throw std::invalid_argument("mask width does not match matrix");
  Standardization s;
  s.mean.assign(w, 0.0);
  s.std.assign(w, 0.0);
  s.applied = continuous;
  const double n = static_cast<double>(m.size());
  for (const auto& r : m) {
    if (r.size() != w) throw std::invalid_argument("ragged matrix");
    for (std::size_t j = 0; j < w; ++j) s.mean[j] += r[j];
  }
  for (auto& x : s.mean) x /= n;
  for (const auto& r : m)
    for (std::size_t j = 0; j < w; ++j) s.std[j] += (r[j] - s.mean[j]) * (r[j] - s.mean[j]);
  for (auto& x : s.std) x = std::sqrt(x / n);
  for (std::size_t j = 0; j < w; ++j)
    if (s.std[j] < 1e-12 * std::max(1.0, std::abs(s.mean[j]))) s.std[j] = 0.0;
  return s;
}

Matrix standardize(const Matrix& m, const std::vector<bool>& continuous) {
  return fit_standardization(m, continuous).apply(m);
}

double pearson(const Matrix& m, std::size_t a, std::size_t b) {
  const double n = static_cast<double>(m.size());
  double ma = 0, mb = 0;
  for (const auto& r : m) {
    ma += r[a];
    mb += r[b];
  }
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (const auto& r : m) {
    sab += (r[a] - ma) * (r[b] - mb);
    saa += (r[a] - ma) * (r[a] - ma);
    sbb += (r[b] - mb) * (r[b] - mb);
  }
  if (saa <= 0 || sbb <= 0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

std::vector<std::size_t> filter_correlated(const Matrix& m, double threshold) {
  if (m.size() < 3) throw std::invalid_argument("correlation filter needs at least three rows");
  const std::size_t w = m.front().size();
  std::vector<bool> constant(w, true), dropped(w, false);
  for (std::size_t j = 0; j < w; ++j)
    for (const auto& r : m)
      if (r[j] != m.front()[j]) {
        constant[j] = false;
        break;
      }
  for (std::size_t i = 0; i < w; ++i) {
    if (dropped[i] || constant[i]) continue;
    for (std::size_t j = i + 1; j < w; ++j) {
      if (dropped[j] || constant[j]) continue;
      if (std::abs(pearson(m, i, j)) >= threshold) dropped[j] = true;
    }
  }
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < w; ++j)
    if (!dropped[j]) keep.push_back(j);
  return keep;
}

Matrix select_columns(const Matrix& m, const std::vector<std::size_t>& keep) {
  Matrix out;
  out.reserve(m.size());
  for (const auto& r : m) {
    std::vector<double> row;
    row.reserve(keep.size());
    for (auto j : keep) row.push_back(r.at(j));
    out.push_back(std::move(row));
  }
  return out;
}

void write_feature_matrix(const std::filesystem::path& path, const std::vector<std::string>& names,
                          const Matrix& m, const std::vector<int>* labels) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  if (labels && labels->size() != m.size()) throw std::invalid_argument("label count does not match rows");
  if (labels) os << "label\t";
  for (std::size_t j = 0; j < names.size(); ++j) os << (j ? "\t" : "") << names[j];
  os << '\n';
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (labels) os << (*labels)[i] << '\t';
    for (std::size_t j = 0; j < m[i].size(); ++j) os << (j ? "\t" : "") << fmt(m[i][j]);
    os << '\n';
  }
}

FeatureTable read_feature_matrix(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  FeatureTable t;
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error(path.string() + ": missing header");
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, '\t')) out.push_back(cell);
    return out;
  };
  t.names = split(line);
  const bool labeled = !t.names.empty() && t.names.front() == "label";
  if (labeled) t.names.erase(t.names.begin());
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != t.names.size() + (labeled ? 1 : 0))
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": wrong number of columns");
    std::size_t k = 0;
    if (labeled) t.labels.push_back(std::stoi(cells[k++]));
    std::vector<double> row;
    for (; k < cells.size(); ++k) {
      char* end = nullptr;
      const double v = std::strtod(cells[k].c_str(), &end);
      if (end == cells[k].c_str() || *end != '\0')
        throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": not a number: " + cells[k]);
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace ccdrift
