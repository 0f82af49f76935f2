#include "twoatom/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "twoatom/errors.hpp"

namespace twoatom {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view value) {
  if (value == "inf" || value == "+inf") return std::numeric_limits<double>::infinity();
  double out = 0.0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end || std::isnan(out)) {
    throw ConfigError("config key '" + std::string(key) + "': expected a real number, got '" +
                      std::string(value) + "'");
  }
  return out;
}

long long parse_integer(std::string_view key, std::string_view value) {
  long long out = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError("config key '" + std::string(key) + "': expected an integer, got '" +
                      std::string(value) + "'");
  }
  return out;
}

int parse_int(std::string_view key, std::string_view value) {
  const long long v = parse_integer(key, value);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ConfigError("config key '" + std::string(key) + "': integer out of range");
  }
  return static_cast<int>(v);
}

using Setter = std::function<void(ModelConfig&, std::string_view key, std::string_view value)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = [] {
    std::map<std::string, Setter, std::less<>> t;
    auto int_key = [&t](const char* name, int ModelConfig::*field) {
      t[name] = [field](ModelConfig& c, std::string_view k, std::string_view v) {
        c.*field = parse_int(k, v);
      };
    };
    auto real_key = [&t](const char* name, double ModelConfig::*field) {
      t[name] = [field](ModelConfig& c, std::string_view k, std::string_view v) {
        c.*field = parse_double(k, v);
      };
    };
    int_key("levels_A", &ModelConfig::levels_A);
    int_key("levels_B", &ModelConfig::levels_B);
    real_key("omega_A", &ModelConfig::omega_A);
    real_key("omega_B", &ModelConfig::omega_B);
    real_key("x_A", &ModelConfig::x_A);
    real_key("x_B", &ModelConfig::x_B);
    int_key("num_modes", &ModelConfig::num_modes);
    real_key("mode_length", &ModelConfig::mode_length);
    int_key("lattice_sites", &ModelConfig::lattice_sites);
    real_key("lattice_spacing", &ModelConfig::lattice_spacing);
    real_key("lattice_site_frequency", &ModelConfig::lattice_site_frequency);
    real_key("coupling_strength", &ModelConfig::coupling_strength);
    real_key("coupling_scale_A", &ModelConfig::coupling_scale_A);
    real_key("coupling_scale_B", &ModelConfig::coupling_scale_B);
    int_key("max_photons", &ModelConfig::max_photons);
    real_key("cutoff", &ModelConfig::cutoff);
    real_key("photon_region_begin", &ModelConfig::photon_region_begin);
    real_key("photon_region_end", &ModelConfig::photon_region_end);
    t["max_dimension"] = [](ModelConfig& c, std::string_view k, std::string_view v) {
      c.max_dimension = parse_integer(k, v);
    };
    t["coupling_form"] = [](ModelConfig& c, std::string_view k, std::string_view v) {
      if (v == "full") {
        c.coupling_form = CouplingForm::full;
      } else if (v == "rotating_wave") {
        c.coupling_form = CouplingForm::rotating_wave;
      } else {
        throw ConfigError("config key '" + std::string(k) +
                          "': expected 'full' or 'rotating_wave', got '" + std::string(v) + "'");
      }
    };
    t["field_model"] = [](ModelConfig& c, std::string_view k, std::string_view v) {
      if (v == "box_modes") {
        c.field_model = FieldKind::box_modes;
      } else if (v == "lattice_chain") {
        c.field_model = FieldKind::lattice_chain;
      } else {
        throw ConfigError("config key '" + std::string(k) +
                          "': expected 'box_modes' or 'lattice_chain', got '" + std::string(v) +
                          "'");
      }
    };
    // Only the linear dispersion omega = |k| is implemented.
    t["dispersion"] = [](ModelConfig&, std::string_view k, std::string_view v) {
      if (v != "linear") {
        throw ConfigError("config key '" + std::string(k) + "': only 'linear' is supported");
      }
    };
    return t;
  }();
  return table;
}

}  // namespace

std::string format_double(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string_view to_string(CouplingForm form) {
  return form == CouplingForm::full ? "full" : "rotating_wave";
}

std::string_view to_string(FieldKind kind) {
  return kind == FieldKind::box_modes ? "box_modes" : "lattice_chain";
}

void validate(const ModelConfig& c) {
  auto fail = [](const std::string& msg) { throw ConfigError("invalid config: " + msg); };
  if (c.levels_A < 2 || c.levels_B < 2) fail("levels_A and levels_B must be >= 2");
  if (!(c.omega_A > 0.0) || !(c.omega_B > 0.0) || !std::isfinite(c.omega_A) ||
      !std::isfinite(c.omega_B)) {
    fail("omega_A and omega_B must be finite and positive");
  }
  if (!std::isfinite(c.x_A) || !std::isfinite(c.x_B)) fail("positions must be finite");
  if (!(c.separation() > 0.0)) fail("R = |x_B - x_A| must be positive");
  if (c.max_photons < 1) fail("max_photons must be >= 1");
  if (c.max_photons > 255) fail("max_photons must be <= 255");
  if (!(c.cutoff > 0.0)) fail("cutoff must be positive");
  if (!std::isfinite(c.coupling_strength)) fail("coupling_strength must be finite");
  if (!std::isfinite(c.coupling_scale_A) || !std::isfinite(c.coupling_scale_B)) {
    fail("coupling scales must be finite");
  }
  if (c.max_dimension < 1) fail("max_dimension must be >= 1");
  if (!(c.photon_region_end > c.photon_region_begin)) fail("photon region must be non-empty");

  if (c.field_model == FieldKind::box_modes) {
    if (c.num_modes < 2) fail("num_modes must be >= 2");
    if (!(c.mode_length > 0.0) || !std::isfinite(c.mode_length)) {
      fail("mode_length must be finite and positive");
    }
    for (double x : {c.x_A, c.x_B}) {
      if (x < 0.0 || x >= c.mode_length) fail("positions must lie in [0, mode_length)");
    }
    if (c.photon_region_begin < 0.0 || c.photon_region_end > c.mode_length) {
      fail("photon region must lie inside [0, mode_length]");
    }
  } else {
    if (c.lattice_sites < 2) fail("lattice_sites must be >= 2");
    if (!(c.lattice_spacing > 0.0) || !std::isfinite(c.lattice_spacing)) {
      fail("lattice_spacing must be finite and positive");
    }
    if (!std::isfinite(c.lattice_site_frequency)) fail("lattice_site_frequency must be finite");
    for (double x : {c.x_A, c.x_B}) {
      const double site = x / c.lattice_spacing;
      if (std::abs(site - std::round(site)) > 1e-9 || site < -1e-9 ||
          std::round(site) > c.lattice_sites - 1) {
        fail("lattice positions must be site multiples of lattice_spacing inside the chain");
      }
    }
    if (std::lround(c.x_A / c.lattice_spacing) == std::lround(c.x_B / c.lattice_spacing)) {
      fail("atoms must sit on different lattice sites");
    }
  }
}

ModelConfig parse_config(std::string_view text) {
  ModelConfig config;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key or value");
    }
    const auto it = setters().find(key);
    if (it == setters().end()) {
      throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" +
                        std::string(key) + "'");
    }
    if (!seen.emplace(key).second) {
      throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key '" +
                        std::string(key) + "'");
    }
    it->second(config, key, value);
  }
  validate(config);
  return config;
}

ModelConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string to_config_text(const ModelConfig& c) {
  std::ostringstream out;
  auto put = [&out](const char* key, const std::string& value) {
    out << key << " = " << value << '\n';
  };
  put("levels_A", std::to_string(c.levels_A));
  put("levels_B", std::to_string(c.levels_B));
  put("omega_A", format_double(c.omega_A));
  put("omega_B", format_double(c.omega_B));
  put("x_A", format_double(c.x_A));
  put("x_B", format_double(c.x_B));
  put("field_model", std::string(to_string(c.field_model)));
  put("num_modes", std::to_string(c.num_modes));
  put("mode_length", format_double(c.mode_length));
  put("dispersion", "linear");
  put("lattice_sites", std::to_string(c.lattice_sites));
  put("lattice_spacing", format_double(c.lattice_spacing));
  put("lattice_site_frequency", format_double(c.lattice_site_frequency));
  put("coupling_strength", format_double(c.coupling_strength));
  put("coupling_form", std::string(to_string(c.coupling_form)));
  put("coupling_scale_A", format_double(c.coupling_scale_A));
  put("coupling_scale_B", format_double(c.coupling_scale_B));
  put("max_photons", std::to_string(c.max_photons));
  put("cutoff", format_double(c.cutoff));
  put("photon_region_begin", format_double(c.photon_region_begin));
  put("photon_region_end", format_double(c.photon_region_end));
  put("max_dimension", std::to_string(c.max_dimension));
  return out.str();
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t fingerprint(const ModelConfig& config) { return fnv1a(to_config_text(config)); }

}  // namespace twoatom
