#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "twoatom/causality.hpp"

namespace twoatom {

inline constexpr int report_schema_version = 1;

/// Files staged in memory and published together: every file is written to a
/// temporary name in the target directory first and renamed only once all
/// writes succeeded, so a failed run leaves no partial output.
class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path directory) : directory_(std::move(directory)) {}

  void add(std::string name, std::string content);
  /// Returns the final paths.
  std::vector<std::filesystem::path> commit();

 private:
  std::filesystem::path directory_;
  std::vector<std::pair<std::string, std::string>> files_;
};

/// "t,<column>" rows with 17 significant digits.
std::string series_csv(const ProbabilitySeries& series, const std::string& column);

/// 16 lowercase hex digits.
std::string hex_fingerprint(std::uint64_t value);

}  // namespace twoatom
