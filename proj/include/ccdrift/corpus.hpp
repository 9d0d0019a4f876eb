#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccdrift/features.hpp"

namespace ccdrift {

struct ChangedFile {
  std::string path;
  std::optional<std::string> old_source;
  std::optional<std::string> new_source;
};

struct CommitRecord {
  std::string commit_id;
  std::int64_t timestamp = 0;
  std::vector<ChangedFile> changed_files;
};

struct ScanResult {
  std::vector<CommitRecord> commits;
  std::size_t skipped = 0;  // commits whose contents could not be read
};

class RepositoryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// First-parent, non-merge commits of `range` (default HEAD) oldest first,
/// each with the files whose extension is in `extensions` (".java" style;
/// empty keeps all). Throws RepositoryError when the path is not a readable
/// repository. A repository without commits yields nothing.
ScanResult scan_history(const std::filesystem::path& repo, const std::vector<std::string>& extensions,
                        const std::optional<std::string>& range = std::nullopt);

/// Comment text with delimiters and leading '*' removed, whitespace runs
/// collapsed, ends trimmed. Case is kept.
std::string normalize_comment_text(std::string_view comment);

/// 1 iff the normalized comments differ.
int label_pair(std::string_view old_comment, std::string_view new_comment);

struct DatasetRecord {
  PairChange pair_change;
  std::string project;
  std::string commit_id;
  std::string file;
  int label = 0;
};

bool operator==(const DatasetRecord& a, const DatasetRecord& b);

class DatasetError : public std::runtime_error {
 public:
  DatasetError(const std::string& path, std::size_t line, const std::string& what)
      : std::runtime_error(path + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// JSON Lines, one record per line, keys in sorted order.
void persist_dataset(const std::vector<DatasetRecord>& records, const std::filesystem::path& path);
std::string record_to_json(const DatasetRecord& record);
/// Token sequences of each pair change are recomputed from its pairs.
std::vector<DatasetRecord> load_dataset(const std::filesystem::path& path);

}  // namespace ccdrift
