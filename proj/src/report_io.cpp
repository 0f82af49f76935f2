#include "twoatom/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

namespace twoatom {

void OutputSet::add(std::string name, std::string content) {
  files_.emplace_back(std::move(name), std::move(content));
}

std::vector<std::filesystem::path> OutputSet::commit() {
  namespace fs = std::filesystem;
  fs::create_directories(directory_);
  std::vector<fs::path> temporaries;
  std::vector<fs::path> finals;
  auto cleanup = [&] {
    std::error_code ignored;
    for (const auto& p : temporaries) fs::remove(p, ignored);
  };
  try {
    for (const auto& [name, content] : files_) {
      const fs::path final_path = directory_ / name;
      const fs::path temp = directory_ / ("." + name + ".tmp." + std::to_string(::getpid()));
      {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        temporaries.push_back(temp);
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("cannot write " + temp.string());
      }
      finals.push_back(final_path);
    }
    for (std::size_t i = 0; i < finals.size(); ++i) fs::rename(temporaries[i], finals[i]);
  } catch (...) {
    cleanup();
    throw;
  }
  return finals;
}

std::string series_csv(const ProbabilitySeries& series, const std::string& column) {
  std::ostringstream out;
  out << "t," << column << '\n';
  for (std::size_t i = 0; i < series.size(); ++i) {
    out << format_double(series.times[i]) << ',' << format_double(series.values[i]) << '\n';
  }
  return out.str();
}

std::string hex_fingerprint(std::uint64_t value) {
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(value));
  return buffer;
}

}  // namespace twoatom
