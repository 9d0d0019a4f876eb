#include "ccdrift/corpus.hpp"

#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ccdrift {
namespace {

using json = nlohmann::json;

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "'\\''";
    else out += c;
  }
  return out + "'";
}

struct GitOutput {
  int status = -1;
  std::string out;
};

GitOutput git(const std::filesystem::path& repo, const std::vector<std::string>& args) {
  std::string cmd = "git -C " + shell_quote(repo.string()) + " -c core.quotepath=off";
  for (const auto& a : args) cmd += " " + shell_quote(a);
  cmd += " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) throw RepositoryError("cannot run git");
  GitOutput r;
  char buf[65536];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

bool wanted(const std::string& path, const std::vector<std::string>& extensions) {
  if (extensions.empty()) return true;
  for (const auto& e : extensions)
    if (path.size() >= e.size() && path.compare(path.size() - e.size(), e.size(), e) == 0) return true;
  return false;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

json span_json(const LineSpan& s) { return json::array({s.first, s.last}); }
LineSpan span_from(const json& j) { return {j.at(0).get<int>(), j.at(1).get<int>()}; }

template <class T>
json opt_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

json pair_json(const CodeCommentPair& p) {
  json code = json::array();
  for (const auto& [line, text] : p.code_lines) code.push_back(json::array({line, text}));
  return {{"kind", std::string(to_string(p.kind))},
          {"comment", p.comment_text},
          {"comment_span", span_json(p.comment_span)},
          {"code_lines", code},
          {"method", opt_json(p.enclosing_method_signature)},
          {"class", opt_json(p.enclosing_class)}};
}

CodeCommentPair pair_from(const json& j) {
  CodeCommentPair p;
  const auto kind = pair_kind_from_string(j.at("kind").get<std::string>());
  if (!kind) throw std::invalid_argument("unknown pair kind");
  p.kind = *kind;
  p.comment_text = j.at("comment").get<std::string>();
  p.comment_span = span_from(j.at("comment_span"));
  for (const auto& c : j.at("code_lines")) p.code_lines.emplace_back(c.at(0).get<int>(), c.at(1).get<std::string>());
  if (!j.at("method").is_null()) p.enclosing_method_signature = j.at("method").get<std::string>();
  if (!j.at("class").is_null()) p.enclosing_class = j.at("class").get<std::string>();
  return p;
}

json op_json(const ChangeOp& op) {
  return {{"action", std::string(to_string(op.action))},
          {"kind", std::string(to_string(op.kind))},
          {"old_text", opt_json(op.old_text)},
          {"new_text", opt_json(op.new_text)},
          {"old_span", op.old_span ? span_json(*op.old_span) : json(nullptr)},
          {"new_span", op.new_span ? span_json(*op.new_span) : json(nullptr)}};
}

ChangeOp op_from(const json& j) {
  ChangeOp op;
  const auto a = change_action_from_string(j.at("action").get<std::string>());
  const auto k = statement_kind_from_string(j.at("kind").get<std::string>());
  if (!a || !k) throw std::invalid_argument("unknown change action or statement kind");
  op.action = *a;
  op.kind = *k;
  if (!j.at("old_text").is_null()) op.old_text = j.at("old_text").get<std::string>();
  if (!j.at("new_text").is_null()) op.new_text = j.at("new_text").get<std::string>();
  if (!j.at("old_span").is_null()) op.old_span = span_from(j.at("old_span"));
  if (!j.at("new_span").is_null()) op.new_span = span_from(j.at("new_span"));
  return op;
}

json record_json(const DatasetRecord& r) {
  const auto& pc = r.pair_change;
  json ops = json::array();
  for (const auto& op : pc.ops) ops.push_back(op_json(op));
  json refs = json::object();
  const auto vals = pc.refactorings.values();
  for (std::size_t i = 0; i < vals.size(); ++i) refs[std::string(RefactoringFlags::names()[i])] = vals[i];
  return {{"project", r.project},
          {"commit", r.commit_id},
          {"file", r.file},
          {"label", r.label},
          {"old", pair_json(pc.old_pair)},
          {"new", pair_json(pc.new_pair)},
          {"ops", ops},
          {"decl",
           {{"class_attributes_changed", pc.decl.class_attributes_changed},
            {"method_name_changed", pc.decl.method_name_changed},
            {"return_type_changed", pc.decl.return_type_changed},
            {"parameters_changed", pc.decl.parameters_changed}}},
          {"refactorings", refs}};
}

DatasetRecord record_from(const json& j) {
  DatasetRecord r;
  r.project = j.at("project").get<std::string>();
  r.commit_id = j.at("commit").get<std::string>();
  r.file = j.at("file").get<std::string>();
  r.label = j.at("label").get<int>();
  if (r.label != 0 && r.label != 1) throw std::invalid_argument("label must be 0 or 1");
  auto& pc = r.pair_change;
  pc.old_pair = pair_from(j.at("old"));
  pc.new_pair = pair_from(j.at("new"));
  for (const auto& o : j.at("ops")) pc.ops.push_back(op_from(o));
  const auto& d = j.at("decl");
  pc.decl.class_attributes_changed = d.at("class_attributes_changed").get<bool>();
  pc.decl.method_name_changed = d.at("method_name_changed").get<bool>();
  pc.decl.return_type_changed = d.at("return_type_changed").get<bool>();
  pc.decl.parameters_changed = d.at("parameters_changed").get<bool>();
  const auto& f = j.at("refactorings");
  auto& rf = pc.refactorings;
  bool* slots[] = {&rf.extract_method, &rf.inline_method, &rf.rename_method, &rf.add_parameter,
                   &rf.remove_parameter, &rf.inline_temp, &rf.encapsulate_field, &rf.introduce_assertion};
  for (std::size_t i = 0; i < RefactoringFlags::size; ++i)
    *slots[i] = f.at(std::string(RefactoringFlags::names()[i])).get<bool>();
  pc.label = r.label;
  populate_tokens(pc);
  return r;
}

}  // namespace

ScanResult scan_history(const std::filesystem::path& repo, const std::vector<std::string>& extensions,
                        const std::optional<std::string>& range) {
  std::error_code ec;
  if (!std::filesystem::is_directory(repo, ec)) throw RepositoryError("not a directory: " + repo.string());
  if (git(repo, {"rev-parse", "--git-dir"}).status != 0)
    throw RepositoryError("not a git repository: " + repo.string());
  ScanResult result;
  if (!range && git(repo, {"rev-parse", "--verify", "-q", "HEAD"}).status != 0) return result;

  const auto list = git(repo, {"rev-list", "--timestamp", "--reverse", "--first-parent", "--no-merges",
                               range.value_or("HEAD")});
  if (list.status != 0) throw RepositoryError("cannot list commits for " + range.value_or("HEAD"));

  std::istringstream lines(list.out);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    CommitRecord c;
    ls >> c.timestamp >> c.commit_id;
    if (c.commit_id.empty()) {
      ++result.skipped;
      continue;
    }
    const auto tree = git(repo, {"diff-tree", "-r", "-z", "--no-commit-id", "--name-status", "--no-renames",
                                 "--root", c.commit_id});
    if (tree.status != 0) {
      ++result.skipped;
      continue;
    }
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i < tree.out.size(); ++i)
      if (tree.out[i] == '\0') {
        fields.push_back(tree.out.substr(start, i - start));
        start = i + 1;
      }
    bool ok = true;
    for (std::size_t i = 0; i + 1 < fields.size() && ok; i += 2) {
      const std::string status = fields[i];
      const std::string& path = fields[i + 1];
      if (!wanted(path, extensions)) continue;
      ChangedFile f;
      f.path = path;
      if (status != "A") {
        auto o = git(repo, {"cat-file", "blob", c.commit_id + "^:" + path});
        if (o.status != 0) ok = false;
        f.old_source = std::move(o.out);
      }
      if (status != "D") {
        auto n = git(repo, {"cat-file", "blob", c.commit_id + ":" + path});
        if (n.status != 0) ok = false;
        f.new_source = std::move(n.out);
      }
      c.changed_files.push_back(std::move(f));
    }
    if (!ok) {
      ++result.skipped;
      continue;
    }
    result.commits.push_back(std::move(c));
  }
  std::stable_sort(result.commits.begin(), result.commits.end(),
                   [](const CommitRecord& a, const CommitRecord& b) { return a.timestamp < b.timestamp; });
  return result;
}

std::string normalize_comment_text(std::string_view comment) {
  std::string joined;
  std::istringstream in{std::string(comment)};
  std::string line;
  while (std::getline(in, line)) {
    std::string l = trim(line);
    if (l.rfind("//", 0) == 0) {
      l.erase(0, l.find_first_not_of('/'));
    } else if (l.rfind("/*", 0) == 0) {
      l.erase(0, 2);
      while (!l.empty() && l.front() == '*') l.erase(0, 1);
    }
    if (l.size() >= 2 && l.compare(l.size() - 2, 2, "*/") == 0) {
      l.erase(l.size() - 2);
      while (!l.empty() && l.back() == '*') l.pop_back();
    }
    l = trim(l);
    while (!l.empty() && l.front() == '*') l.erase(0, 1);
    joined += l;
    joined += ' ';
  }
  std::string out;
  bool space = false;
  for (char c : joined) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = true;
      continue;
    }
    if (space && !out.empty()) out += ' ';
    space = false;
    out += c;
  }
  return out;
}

int label_pair(std::string_view old_comment, std::string_view new_comment) {
  return normalize_comment_text(old_comment) != normalize_comment_text(new_comment) ? 1 : 0;
}

bool operator==(const DatasetRecord& a, const DatasetRecord& b) {
  const auto& x = a.pair_change;
  const auto& y = b.pair_change;
  return a.project == b.project && a.commit_id == b.commit_id && a.file == b.file && a.label == b.label && x.old_pair == y.old_pair &&
         x.new_pair == y.new_pair && x.ops == y.ops && x.decl == y.decl && x.refactorings == y.refactorings &&
         x.label == y.label && x.s_cmt == y.s_cmt && x.s_code == y.s_code && x.s_code_new == y.s_code_new &&
         x.s_smt == y.s_smt && x.s_smt_new == y.s_smt_new;
}

std::string record_to_json(const DatasetRecord& record) {
  return record_json(record).dump(-1, ' ', false, json::error_handler_t::replace);
}

void persist_dataset(const std::vector<DatasetRecord>& records, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  for (const auto& r : records) os << record_to_json(r) << '\n';
  if (!os) throw std::runtime_error("failed writing " + path.string());
}

std::vector<DatasetRecord> load_dataset(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  std::vector<DatasetRecord> out;
  std::string line;
  std::size_t no = 0;
  while (std::getline(is, line)) {
    ++no;
    if (trim(line).empty()) continue;
    try {
      out.push_back(record_from(json::parse(line)));
    } catch (const std::exception& e) {
      throw DatasetError(path.string(), no, e.what());
    }
  }
  return out;
}

}  // namespace ccdrift
