#include "twoatom/fock_basis.hpp"

#include <limits>

#include "twoatom/errors.hpp"
#include "twoatom/field_model.hpp"

namespace twoatom {

namespace {

std::string key_of(std::span<const std::uint8_t> occupation) {
  return {occupation.begin(), occupation.end()};
}

// Lexicographic enumeration of all n with sum(n) <= budget.
void enumerate(int mode, int modes, int budget, Occupation& current,
               std::vector<Occupation>& out) {
  if (mode == modes) {
    out.push_back(current);
    return;
  }
  for (int n = 0; n <= budget; ++n) {
    current[static_cast<std::size_t>(mode)] = static_cast<std::uint8_t>(n);
    enumerate(mode + 1, modes, budget - n, current, out);
  }
  current[static_cast<std::size_t>(mode)] = 0;
}

}  // namespace

long long count_occupations(int modes, int max_photons) {
  // C(modes + N, N) built incrementally; every partial product is an integer.
  constexpr long long limit = std::numeric_limits<long long>::max();
  long long result = 1;
  for (int j = 1; j <= max_photons; ++j) {
    const long long factor = modes + j;
    if (result > limit / factor) return limit;
    result = result * factor / j;
  }
  return result;
}

FockBasis::FockBasis(const BasisShape& shape) : shape_(shape) {
  if (shape.levels_A < 1 || shape.levels_B < 1 || shape.modes < 1 || shape.max_photons < 0) {
    throw ConfigError("basis shape must have positive level and mode counts");
  }
  const long long photons = count_occupations(shape.modes, shape.max_photons);
  const long long levels = static_cast<long long>(shape.levels_A) * shape.levels_B;
  const long long total =
      photons > std::numeric_limits<long long>::max() / levels ? std::numeric_limits<long long>::max()
                                                               : photons * levels;
  if (total > shape.max_dimension) {
    throw DimensionOverflow("basis dimension " + std::to_string(total) + " exceeds limit " +
                                std::to_string(shape.max_dimension),
                            total, shape.max_dimension);
  }

  Occupation scratch(static_cast<std::size_t>(shape.modes), 0);
  occupations_.reserve(static_cast<std::size_t>(photons));
  enumerate(0, shape.modes, shape.max_photons, scratch, occupations_);
  dimension_ = static_cast<Index>(total);

  std::uint64_t h = fnv1a("fock-basis");
  for (int v : {shape.levels_A, shape.levels_B, shape.modes, shape.max_photons}) {
    h = fnv1a(std::to_string(v) + ";", h);
  }
  fingerprint_ = h;

  totals_.reserve(occupations_.size());
  photon_lookup_.reserve(occupations_.size());
  for (std::size_t p = 0; p < occupations_.size(); ++p) {
    int sum = 0;
    for (auto n : occupations_[p]) sum += n;
    totals_.push_back(sum);
    photon_lookup_.emplace(key_of(occupations_[p]), static_cast<Index>(p));
  }

  const auto m = static_cast<std::size_t>(shape.modes);
  lower_.assign(occupations_.size() * m, -1);
  raise_.assign(occupations_.size() * m, -1);
  Occupation probe;
  for (std::size_t p = 0; p < occupations_.size(); ++p) {
    for (std::size_t q = 0; q < m; ++q) {
      probe = occupations_[p];
      if (probe[q] > 0) {
        --probe[q];
        lower_[p * m + q] = photon_lookup_.at(key_of(probe));
      }
      if (totals_[p] < shape.max_photons) {
        probe = occupations_[p];
        ++probe[q];
        raise_[p * m + q] = photon_lookup_.at(key_of(probe));
      }
    }
  }
}

BareState FockBasis::state(Index i) const {
  if (i < 0 || i >= dimension_) throw NotInBasis("basis index out of range");
  return {a_level(i), b_level(i), occupations_[static_cast<std::size_t>(photon_index(i))]};
}

std::span<const std::uint8_t> FockBasis::occupation(Index photon) const {
  return occupations_[static_cast<std::size_t>(photon)];
}

Index FockBasis::find_photon(std::span<const std::uint8_t> occupation) const {
  if (static_cast<int>(occupation.size()) != shape_.modes) {
    throw NotInBasis("occupation vector has " + std::to_string(occupation.size()) +
                     " entries, basis has " + std::to_string(shape_.modes) + " modes");
  }
  const auto it = photon_lookup_.find(key_of(occupation));
  if (it == photon_lookup_.end()) {
    int sum = 0;
    for (auto n : occupation) sum += n;
    throw NotInBasis("occupation with " + std::to_string(sum) +
                     " photons is outside the truncation (max " +
                     std::to_string(shape_.max_photons) + ")");
  }
  return it->second;
}

Index FockBasis::index_of(int a_level, int b_level, std::span<const std::uint8_t> occupation) const {
  if (a_level < 0 || a_level >= shape_.levels_A || b_level < 0 || b_level >= shape_.levels_B) {
    throw NotInBasis("atomic level outside the basis");
  }
  return compose(a_level, b_level, find_photon(occupation));
}

FockBasis build_basis(const BasisShape& shape) { return FockBasis(shape); }

FockBasis build_basis(const ModelConfig& config) {
  validate(config);
  const int modes = config.field_model == FieldKind::box_modes
                        ? static_cast<int>(box_mode_numbers(config).size())
                        : config.lattice_sites;
  if (modes == 0) throw ConfigError("cutoff removes every field mode");
  return FockBasis(BasisShape{config.levels_A, config.levels_B, modes, config.max_photons,
                              config.max_dimension});
}

}  // namespace twoatom
