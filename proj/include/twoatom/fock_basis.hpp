#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "twoatom/config.hpp"

namespace twoatom {

using Index = Eigen::Index;
using Occupation = std::vector<std::uint8_t>;

/// Truncation parameters of the product space H_A x H_B x H_F.
struct BasisShape {
  int levels_A = 2;
  int levels_B = 2;
  int modes = 1;
  int max_photons = 1;
  long long max_dimension = 200000;
};

/// One bare product state |a>|b>|n_1 ... n_M>.
struct BareState {
  int a_level = 0;
  int b_level = 0;
  Occupation occupation;

  friend bool operator==(const BareState&, const BareState&) = default;
};

/// Identity of the space an operator or vector lives on.
struct BasisTag {
  std::uint64_t id = 0;
  Index dimension = 0;

  friend bool operator==(const BasisTag&, const BasisTag&) = default;
};

/// Enumerated truncated product basis. States are ordered lexicographically on
/// (a_level, b_level, occupation), so index = (a * levels_B + b) * P + photon
/// index, where P is the number of occupation vectors with total <= max_photons.
/// Immutable after construction.
class FockBasis {
 public:
  explicit FockBasis(const BasisShape& shape);

  const BasisShape& shape() const { return shape_; }
  Index dimension() const { return dimension_; }
  Index photon_states() const { return static_cast<Index>(occupations_.size()); }
  int modes() const { return shape_.modes; }
  BasisTag tag() const { return {fingerprint_, dimension_}; }

  BareState state(Index i) const;
  int a_level(Index i) const { return static_cast<int>(i / photon_states() / shape_.levels_B); }
  int b_level(Index i) const { return static_cast<int>((i / photon_states()) % shape_.levels_B); }
  Index photon_index(Index i) const { return i % photon_states(); }

  std::span<const std::uint8_t> occupation(Index photon) const;
  int photon_number(Index photon) const { return totals_[static_cast<std::size_t>(photon)]; }

  /// Throws NotInBasis for tuples outside the truncation.
  Index index_of(int a_level, int b_level, std::span<const std::uint8_t> occupation) const;
  Index index_of(const BareState& s) const {
    return index_of(s.a_level, s.b_level, s.occupation);
  }
  Index compose(int a_level, int b_level, Index photon) const {
    return (static_cast<Index>(a_level) * shape_.levels_B + b_level) * photon_states() + photon;
  }

  /// Photon index of n - e_mode, or -1 if n_mode == 0.
  Index lowered(Index photon, int mode) const {
    return lower_[static_cast<std::size_t>(photon * shape_.modes + mode)];
  }
  /// Photon index of n + e_mode, or -1 if that exceeds the truncation.
  Index raised(Index photon, int mode) const {
    return raise_[static_cast<std::size_t>(photon * shape_.modes + mode)];
  }

 private:
  Index find_photon(std::span<const std::uint8_t> occupation) const;

  BasisShape shape_;
  Index dimension_ = 0;
  std::uint64_t fingerprint_ = 0;
  std::vector<Occupation> occupations_;
  std::vector<int> totals_;
  std::unordered_map<std::string, Index> photon_lookup_;
  std::vector<Index> lower_;
  std::vector<Index> raise_;
};

/// Number of occupation vectors over `modes` modes with total <= max_photons:
/// C(modes + max_photons, max_photons). Saturates at LLONG_MAX.
long long count_occupations(int modes, int max_photons);

FockBasis build_basis(const BasisShape& shape);

/// Uses the modes retained by the config's field model.
FockBasis build_basis(const ModelConfig& config);

}  // namespace twoatom
