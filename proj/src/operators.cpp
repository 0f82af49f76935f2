#include "twoatom/operators.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <ostream>

#include "twoatom/errors.hpp"
#include "twoatom/linalg.hpp"

namespace twoatom {

namespace {

using Triplet = Eigen::Triplet<cd>;

/// Collects matrix elements as conjugate pairs so the result is Hermitian by construction.
class HermitianAssembler {
 public:
  explicit HermitianAssembler(Index dim) : dim_(dim) {}

  void diagonal(Index i, double value) {
    if (value != 0.0) triplets_.emplace_back(i, i, cd(value, 0.0));
  }
  /// Sets <row|H|col> = value and <col|H|row> = conj(value); row != col.
  void pair(Index row, Index col, cd value) {
    if (value == cd(0.0, 0.0)) return;
    triplets_.emplace_back(row, col, value);
    triplets_.emplace_back(col, row, std::conj(value));
  }

  SparseMatrixXcd finish() {
    SparseMatrixXcd m(dim_, dim_);
    m.setFromTriplets(triplets_.begin(), triplets_.end());
    m.makeCompressed();
    return m;
  }

 private:
  Index dim_;
  std::vector<Triplet> triplets_;
};

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// Permanent by Ryser's formula; fine for the small photon numbers used here.
cd permanent(const Eigen::MatrixXcd& a) {
  const Index n = a.rows();
  if (n == 0) return 1.0;
  if (n == 1) return a(0, 0);
  if (n == 2) return a(0, 0) * a(1, 1) + a(0, 1) * a(1, 0);
  cd total = 0.0;
  const unsigned long long subsets = 1ULL << n;
  for (unsigned long long s = 1; s < subsets; ++s) {
    cd prod = 1.0;
    for (Index i = 0; i < n; ++i) {
      cd row = 0.0;
      for (Index j = 0; j < n; ++j) {
        if (s & (1ULL << j)) row += a(i, j);
      }
      prod *= row;
    }
    const int bits = std::popcount(s);
    total += ((n - bits) % 2 == 0 ? 1.0 : -1.0) * prod;
  }
  return total;
}

std::vector<int> mode_list(std::span<const std::uint8_t> occupation) {
  std::vector<int> out;
  for (std::size_t q = 0; q < occupation.size(); ++q) {
    for (int r = 0; r < occupation[q]; ++r) out.push_back(static_cast<int>(q));
  }
  return out;
}

double occupation_norm(std::span<const std::uint8_t> occupation) {
  double f = 1.0;
  for (auto n : occupation) f *= factorial(n);
  return std::sqrt(f);
}

/// Photon-space matrix of Gamma(T): dense blocks per photon number, stored as triplets.
std::vector<Triplet> photon_space_gamma(const FockBasis& basis, const Eigen::MatrixXcd& t) {
  const Index photons = basis.photon_states();
  std::vector<std::vector<Index>> sectors(static_cast<std::size_t>(basis.shape().max_photons) + 1);
  for (Index p = 0; p < photons; ++p) {
    sectors[static_cast<std::size_t>(basis.photon_number(p))].push_back(p);
  }
  std::vector<Triplet> out;
  std::vector<std::vector<int>> lists(static_cast<std::size_t>(photons));
  std::vector<double> norms(static_cast<std::size_t>(photons));
  for (Index p = 0; p < photons; ++p) {
    lists[static_cast<std::size_t>(p)] = mode_list(basis.occupation(p));
    norms[static_cast<std::size_t>(p)] = occupation_norm(basis.occupation(p));
  }
  for (const auto& sector : sectors) {
    for (Index row : sector) {
      const auto& rl = lists[static_cast<std::size_t>(row)];
      const Index n = static_cast<Index>(rl.size());
      Eigen::MatrixXcd sub(n, n);
      for (Index col : sector) {
        const auto& cl = lists[static_cast<std::size_t>(col)];
        for (Index i = 0; i < n; ++i) {
          for (Index j = 0; j < n; ++j) {
            sub(i, j) = t(rl[static_cast<std::size_t>(i)], cl[static_cast<std::size_t>(j)]);
          }
        }
        const cd value = permanent(sub) / (norms[static_cast<std::size_t>(row)] *
                                          norms[static_cast<std::size_t>(col)]);
        if (value != cd(0.0, 0.0)) out.emplace_back(row, col, value);
      }
    }
  }
  return out;
}

/// Lifts a photon-space operator to the full space (identity on both atoms).
SparseMatrixXcd lift_photon_operator(const FockBasis& basis, const std::vector<Triplet>& photon) {
  std::vector<Triplet> full;
  full.reserve(photon.size() * static_cast<std::size_t>(basis.shape().levels_A) *
               static_cast<std::size_t>(basis.shape().levels_B));
  for (int a = 0; a < basis.shape().levels_A; ++a) {
    for (int b = 0; b < basis.shape().levels_B; ++b) {
      for (const auto& tr : photon) {
        full.emplace_back(basis.compose(a, b, tr.row()), basis.compose(a, b, tr.col()),
                          tr.value());
      }
    }
  }
  SparseMatrixXcd m(basis.dimension(), basis.dimension());
  m.setFromTriplets(full.begin(), full.end());
  m.makeCompressed();
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// HermitianOperator

bool is_exactly_hermitian(const SparseMatrixXcd& m) {
  if (m.rows() != m.cols()) return false;
  const SparseMatrixXcd adj = m.adjoint();
  if (adj.nonZeros() != m.nonZeros()) return false;
  for (Index r = 0; r < m.outerSize(); ++r) {
    SparseMatrixXcd::InnerIterator it(m, r);
    SparseMatrixXcd::InnerIterator jt(adj, r);
    for (; it && jt; ++it, ++jt) {
      if (it.col() != jt.col() || it.value() != jt.value()) return false;
    }
    if (it || jt) return false;
  }
  return true;
}

HermitianOperator::HermitianOperator(BasisTag tag, SparseMatrixXcd matrix)
    : tag_(tag), matrix_(std::move(matrix)) {
  if (!is_exactly_hermitian(matrix_)) {
    throw DomainError("HermitianOperator: matrix is not exactly conjugate-symmetric");
  }
  if (tag_.dimension != matrix_.rows()) {
    throw DomainError("HermitianOperator: dimension does not match basis");
  }
  matrix_.makeCompressed();
  floor_ = gershgorin_bounds().first;
}

HermitianOperator::HermitianOperator(BasisTag tag, SparseMatrixXcd matrix, double spectral_floor)
    : HermitianOperator(tag, std::move(matrix)) {
  floor_ = spectral_floor;
}

HermitianOperator HermitianOperator::from_dense(BasisTag tag, const Eigen::MatrixXcd& dense) {
  const Index n = dense.rows();
  HermitianAssembler acc(n);
  for (Index i = 0; i < n; ++i) {
    acc.diagonal(i, dense(i, i).real());
    for (Index j = i + 1; j < n; ++j) acc.pair(i, j, dense(i, j));
  }
  return HermitianOperator(tag, acc.finish());
}

bool HermitianOperator::is_real() const {
  const cd* values = matrix_.valuePtr();
  return std::all_of(values, values + matrix_.nonZeros(),
                     [](const cd& v) { return v.imag() == 0.0; });
}

bool HermitianOperator::is_diagonal() const {
  for (Index r = 0; r < matrix_.outerSize(); ++r) {
    for (SparseMatrixXcd::InnerIterator it(matrix_, r); it; ++it) {
      if (it.col() != r && it.value() != cd(0.0, 0.0)) return false;
    }
  }
  return true;
}

std::pair<double, double> HermitianOperator::gershgorin_bounds() const {
  if (matrix_.rows() == 0) return {0.0, 0.0};
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (Index r = 0; r < matrix_.outerSize(); ++r) {
    double center = 0.0;
    double radius = 0.0;
    for (SparseMatrixXcd::InnerIterator it(matrix_, r); it; ++it) {
      if (it.col() == r) {
        center = it.value().real();
      } else {
        radius += std::abs(it.value());
      }
    }
    lo = std::min(lo, center - radius);
    hi = std::max(hi, center + radius);
  }
  return {lo, hi};
}

HermitianOperator HermitianOperator::with_spectral_floor(double floor) const {
  HermitianOperator copy = *this;
  copy.floor_ = floor;
  return copy;
}

// ---------------------------------------------------------------------------
// BoundedObservable

BoundedObservable BoundedObservable::diagonal(BasisTag tag, const Eigen::VectorXd& weights,
                                              std::string name) {
  if ((weights.array() < 0.0).any() || (weights.array() > 1.0).any()) {
    throw DomainError("observable weights must lie in [0, 1]");
  }
  HermitianAssembler acc(weights.size());
  for (Index i = 0; i < weights.size(); ++i) acc.diagonal(i, weights(i));
  BoundedObservable o;
  o.op_ = HermitianOperator(tag, acc.finish(), weights.size() ? weights.minCoeff() : 0.0);
  o.weights_ = weights;
  o.is_projector_ = ((weights.array() == 0.0) || (weights.array() == 1.0)).all();
  o.name_ = std::move(name);
  return o;
}

BoundedObservable BoundedObservable::spectral(BasisTag tag, SparseMatrixXcd eigenbasis,
                                              const Eigen::VectorXd& weights,
                                              HermitianOperator assembled, std::string name) {
  if ((weights.array() < 0.0).any() || (weights.array() > 1.0).any()) {
    throw DomainError("observable weights must lie in [0, 1]");
  }
  if (eigenbasis.rows() != weights.size() || eigenbasis.cols() != weights.size() ||
      assembled.dimension() != weights.size() || !(assembled.basis() == tag)) {
    throw DomainError("observable spectral data has inconsistent dimensions");
  }
  BoundedObservable o;
  o.op_ = assembled.with_spectral_floor(0.0);
  o.eigenbasis_ = std::move(eigenbasis);
  o.eigenbasis_.makeCompressed();
  o.weights_ = weights;
  o.is_projector_ = ((weights.array() == 0.0) || (weights.array() == 1.0)).all();
  o.name_ = std::move(name);
  return o;
}

BoundedObservable BoundedObservable::spectral(BasisTag tag, const Eigen::MatrixXcd& eigenbasis,
                                              const Eigen::VectorXd& weights, std::string name) {
  const Eigen::MatrixXcd dense = eigenbasis * weights.asDiagonal() * eigenbasis.adjoint();
  return spectral(tag, SparseMatrixXcd(eigenbasis.sparseView()), weights,
                  HermitianOperator::from_dense(tag, dense), std::move(name));
}

double BoundedObservable::expectation(const Eigen::VectorXcd& psi) const {
  if (psi.size() != dimension()) throw DomainError("state and observable dimensions differ");
  // Same summation order for numerator and denominator and w in [0, 1]
  // guarantee 0 <= num <= den in floating point.
  double num = 0.0;
  double den = 0.0;
  auto accumulate = [&](const Eigen::VectorXcd& y) {
    for (Index i = 0; i < y.size(); ++i) {
      const double p = std::norm(y(i));
      num += weights_(i) * p;
      den += p;
    }
  };
  if (is_diagonal()) {
    accumulate(psi);
  } else {
    accumulate(eigenbasis_.adjoint() * psi);
  }
  return den == 0.0 ? 0.0 : num / den;
}

// ---------------------------------------------------------------------------
// Assembly

HermitianOperator build_hamiltonian(const AtomPair& atoms, const FieldModel& field,
                                    CouplingForm form, const FockBasis& basis) {
  const auto& shape = basis.shape();
  if (shape.levels_A != atoms.levels_A || shape.levels_B != atoms.levels_B ||
      shape.modes != field.modes()) {
    throw DomainError("basis shape does not match the atoms and field model");
  }
  const int modes = field.modes();
  const Index photons = basis.photon_states();
  HermitianAssembler acc(basis.dimension());

  for (int a = 0; a < shape.levels_A; ++a) {
    for (int b = 0; b < shape.levels_B; ++b) {
      for (Index p = 0; p < photons; ++p) {
        const Index i = basis.compose(a, b, p);
        const auto occ = basis.occupation(p);

        double energy = a * atoms.omega_A + b * atoms.omega_B;
        for (int q = 0; q < modes; ++q) energy += field.single_particle(q, q).real() * occ[q];
        acc.diagonal(i, energy);

        // Hopping h_{rq} a_r^dag a_q, r != q: each unordered element once.
        if (!field.is_diagonal()) {
          for (int q = 0; q < modes; ++q) {
            if (occ[q] == 0) continue;
            const Index lowered = basis.lowered(p, q);
            for (int r = 0; r < modes; ++r) {
              if (r == q) continue;
              const cd h = field.single_particle(r, q);
              if (h == cd(0.0, 0.0)) continue;
              const Index target_photon = basis.raised(lowered, r);
              const Index j = basis.compose(a, b, target_photon);
              if (j <= i) continue;
              const double amp = std::sqrt(static_cast<double>(occ[q])) *
                                 std::sqrt(static_cast<double>(occ[r] + 1));
              acc.pair(j, i, h * amp);
            }
          }
        }

        // sigma^+ a_q (rotating) and sigma^+ a_q^dag (counter-rotating) for each system,
        // inserted with their Hermitian conjugates.
        auto couple = [&](bool system_a, const Eigen::VectorXcd& c) {
          const int level = system_a ? a : b;
          const int levels = system_a ? shape.levels_A : shape.levels_B;
          if (level + 1 >= levels) return;
          const int a2 = system_a ? a + 1 : a;
          const int b2 = system_a ? b : b + 1;
          for (int q = 0; q < modes; ++q) {
            if (c(q) == cd(0.0, 0.0)) continue;
            if (occ[q] > 0) {
              const Index j = basis.compose(a2, b2, basis.lowered(p, q));
              acc.pair(j, i, c(q) * std::sqrt(static_cast<double>(occ[q])));
            }
            if (form == CouplingForm::full) {
              const Index raised = basis.raised(p, q);
              if (raised >= 0) {
                const Index j = basis.compose(a2, b2, raised);
                acc.pair(j, i, std::conj(c(q)) * std::sqrt(static_cast<double>(occ[q] + 1)));
              }
            }
          }
        };
        couple(true, field.coupling_A);
        couple(false, field.coupling_B);
      }
    }
  }
  return HermitianOperator(basis.tag(), acc.finish());
}

HermitianOperator build_hamiltonian(const ModelConfig& config, const FockBasis& basis) {
  const FieldModel field = build_field_model(config);
  const AtomPair atoms{config.levels_A, config.levels_B, config.omega_A, config.omega_B};
  return build_hamiltonian(atoms, field, config.coupling_form, basis);
}

HermitianOperator excitation_number(const FockBasis& basis) {
  HermitianAssembler acc(basis.dimension());
  for (Index i = 0; i < basis.dimension(); ++i) {
    acc.diagonal(i, basis.a_level(i) + basis.b_level(i) + basis.photon_number(basis.photon_index(i)));
  }
  return HermitianOperator(basis.tag(), acc.finish());
}

BoundedObservable excitation_observable_B(const FockBasis& basis) {
  Eigen::VectorXd w(basis.dimension());
  for (Index i = 0; i < basis.dimension(); ++i) w(i) = basis.b_level(i) > 0 ? 1.0 : 0.0;
  return BoundedObservable::diagonal(basis.tag(), w, "excitation_B");
}

BoundedObservable exchange_projector(const FockBasis& basis) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(basis.dimension());
  w(basis.compose(0, 1, 0)) = 1.0;
  return BoundedObservable::diagonal(basis.tag(), w, "exchange");
}

SparseMatrixXcd second_quantize(const FockBasis& basis, const Eigen::MatrixXcd& one_particle) {
  if (one_particle.rows() != basis.modes() || one_particle.cols() != basis.modes()) {
    throw DomainError("one-particle operator does not match the number of modes");
  }
  return lift_photon_operator(basis, photon_space_gamma(basis, one_particle));
}

BoundedObservable local_photon_observable(const FockBasis& basis, const FieldModel& field,
                                          double begin, double end) {
  if (field.modes() != basis.modes()) {
    throw DomainError("field model does not match the basis");
  }
  const Eigen::MatrixXcd overlap = field.region_overlap(begin, end);
  const Index m = overlap.rows();

  // Assembled form: 1 - Gamma(1 - S).
  const SparseMatrixXcd no_photon =
      second_quantize(basis, Eigen::MatrixXcd::Identity(m, m) - overlap);
  SparseMatrixXcd identity(basis.dimension(), basis.dimension());
  identity.setIdentity();
  SparseMatrixXcd assembled_matrix = identity - no_photon;
  assembled_matrix.prune(cd(0.0, 0.0), 0.0);
  // Exact conjugate symmetry: rebuild from the upper triangle.
  HermitianAssembler acc(basis.dimension());
  for (Index r = 0; r < assembled_matrix.outerSize(); ++r) {
    for (SparseMatrixXcd::InnerIterator it(assembled_matrix, r); it; ++it) {
      if (it.col() == r) {
        acc.diagonal(r, it.value().real());
      } else if (it.col() > r) {
        acc.pair(r, it.col(), it.value());
      }
    }
  }
  HermitianOperator assembled(basis.tag(), acc.finish());

  // Spectral form: S = U diag(s) U^dag, W = Gamma(U), weight 1 - prod (1 - s_j)^{m_j}.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(overlap);
  // 0 <= S <= 1 holds exactly; clamp eigensolver roundoff only.
  const Eigen::VectorXd s = solver.eigenvalues().cwiseMax(0.0).cwiseMin(1.0);
  SparseMatrixXcd eigenbasis = second_quantize(basis, solver.eigenvectors());

  Eigen::VectorXd weights(basis.dimension());
  for (Index i = 0; i < basis.dimension(); ++i) {
    const auto occ = basis.occupation(basis.photon_index(i));
    double none = 1.0;
    for (Index j = 0; j < m; ++j) {
      for (int r = 0; r < occ[static_cast<std::size_t>(j)]; ++r) none *= 1.0 - s(j);
    }
    weights(i) = 1.0 - none;
  }
  return BoundedObservable::spectral(basis.tag(), std::move(eigenbasis), weights,
                                     std::move(assembled), "photon_region");
}

// ---------------------------------------------------------------------------
// Spectral bounds

SpectralBounds spectral_bounds(const HermitianOperator& h, Index dense_threshold, double tolerance,
                               int max_iterations) {
  SpectralBounds out;
  const Index n = h.dimension();
  if (n == 0) return out;
  const auto [g_lo, g_hi] = h.gershgorin_bounds();
  const double scale = std::max(std::abs(g_lo), std::abs(g_hi));
  if (h.is_diagonal()) {
    const Eigen::VectorXd diag = Eigen::MatrixXcd(h.entries()).diagonal().real();
    out.lower = diag.minCoeff();
    out.upper = diag.maxCoeff();
    return out;
  }
  if (n <= dense_threshold) {
    // Backward-stable solver: eigenvalues accurate to a small multiple of eps ||H||.
    const double margin = 8.0 * std::sqrt(static_cast<double>(n)) *
                          std::numeric_limits<double>::epsilon() * scale;
    Eigen::VectorXd evals;
    if (h.is_real()) {
      evals = linalg::SpectralDecomposition<double>(Eigen::MatrixXd(h.entries().real())).eigenvalues;
    } else {
      evals = linalg::SpectralDecomposition<cd>(Eigen::MatrixXcd(h.entries())).eigenvalues;
    }
    out.lower = evals(0) - margin;
    out.upper = evals(n - 1) + margin;
    out.residual_lower = out.residual_upper = margin;
    return out;
  }
  auto apply = [&h](const auto& x, Eigen::VectorXcd& y) { y.noalias() = h.entries() * x; };
  const auto ext = linalg::lanczos_extremal(apply, n, tolerance, max_iterations, scale);
  out.dense = false;
  out.residual_lower = ext.residual_lowest;
  out.residual_upper = ext.residual_highest;
  // Ritz residuals can underflow at convergence, keep a rounding margin on top.
  const double rounding = 8.0 * std::sqrt(static_cast<double>(n)) *
                          std::numeric_limits<double>::epsilon() * scale;
  out.lower = std::max(ext.lowest - ext.residual_lowest - rounding, g_lo);
  out.upper = std::min(ext.highest + ext.residual_highest + rounding, g_hi);
  return out;
}

void write_triplets(std::ostream& out, const HermitianOperator& h) {
  out << "# twoatom sparse triplets v1 dimension=" << h.dimension()
      << " nonzeros=" << h.entries().nonZeros() << "\n# row col re im\n";
  for (Index r = 0; r < h.entries().outerSize(); ++r) {
    for (SparseMatrixXcd::InnerIterator it(h.entries(), r); it; ++it) {
      out << it.row() << ' ' << it.col() << ' ' << format_double(it.value().real()) << ' '
          << format_double(it.value().imag()) << '\n';
    }
  }
}

}  // namespace twoatom
