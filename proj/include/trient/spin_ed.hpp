// spin_ed.hpp - dense exact diagonalization of small spin-1/2 Heisenberg chains.
//
// Energies are stored as E/k_B in Kelvin and temperatures in Kelvin, so the
// Boltzmann weight of level E at temperature T is exp(-E/T). Site indices are
// 1-based; site 1 is the most significant qubit of the computational basis and
// bit value 0 denotes spin up.
#ifndef TRIENT_SPIN_ED_HPP
#define TRIENT_SPIN_ED_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "trient/two_site_state.hpp"

namespace trient::ed {

template <typename Scalar>
using ComplexMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using RealVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

inline constexpr int kMaxSites = 10;

enum class Boundary { open, periodic };
enum class Axis { x, y, z };

inline constexpr std::array<Axis, 3> kAxes{Axis::x, Axis::y, Axis::z};

/// Raised when a thermal reduced density matrix leaves the zero-field X-form.
class SymmetryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename Scalar = double>
struct SpinChainSpec {
  int n_sites = 3;
  Scalar j_over_kb = Scalar(-1);  // negative: antiferromagnetic
  Boundary boundary = Boundary::open;

  void validate() const {
    if (n_sites < 2 || n_sites > kMaxSites)
      throw std::invalid_argument("SpinChainSpec: n_sites must lie in [2, " +
                                  std::to_string(kMaxSites) + "], got " +
                                  std::to_string(n_sites));
    if (!std::isfinite(static_cast<double>(j_over_kb)))
      throw std::invalid_argument("SpinChainSpec: j_over_kb must be finite");
  }

  int n_bonds() const { return boundary == Boundary::open ? n_sites - 1 : n_sites; }
};

namespace detail {

inline std::size_t dimension(int n_sites) { return std::size_t{1} << n_sites; }

inline int site_bit(std::size_t basis, int n_sites, int site) {
  return static_cast<int>((basis >> (n_sites - site)) & 1U);
}

inline std::size_t site_mask(int n_sites, int site) {
  return std::size_t{1} << (n_sites - site);
}

inline int sites_from_dimension(Eigen::Index dim) {
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim || n < 1 || n > kMaxSites)
    throw std::invalid_argument("matrix dimension " + std::to_string(dim) +
                                " is not 2^n with 1 <= n <= " + std::to_string(kMaxSites));
  return n;
}

inline void check_site(int n_sites, int site) {
  if (site < 1 || site > n_sites)
    throw std::out_of_range("site " + std::to_string(site) + " outside [1, " +
                            std::to_string(n_sites) + "]");
}

/// S^axis acting on a single spin with bit value `bit` maps it to one basis
/// state; returns whether the spin flips and the amplitude.
template <typename Scalar>
std::pair<bool, std::complex<Scalar>> spin_action(Axis axis, int bit) {
  const Scalar half = Scalar(0.5);
  switch (axis) {
    case Axis::x:
      return {true, {half, Scalar(0)}};
    case Axis::y:
      return {true, bit == 0 ? std::complex<Scalar>(Scalar(0), half)
                             : std::complex<Scalar>(Scalar(0), -half)};
    case Axis::z:
    default:
      return {false, {bit == 0 ? half : -half, Scalar(0)}};
  }
}

template <typename Derived>
typename Derived::RealScalar hermiticity_defect(const Eigen::MatrixBase<Derived>& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Scalar>
Scalar relative_tolerance(Scalar tol, Scalar scale) {
  return tol * std::max(Scalar(1), scale);
}

}  // namespace detail

template <typename Scalar = double>
struct SpinOperators {
  ComplexMatrix<Scalar> x;
  ComplexMatrix<Scalar> y;
  ComplexMatrix<Scalar> z;

  const ComplexMatrix<Scalar>& operator[](Axis a) const {
    return a == Axis::x ? x : (a == Axis::y ? y : z);
  }
};

/// Dense spin-1/2 operators S^x, S^y, S^z of `site` embedded in an n-site chain.
template <typename Scalar = double>
SpinOperators<Scalar> spin_operators(int n_sites, int site) {
  if (n_sites < 1 || n_sites > kMaxSites)
    throw std::invalid_argument("spin_operators: n_sites out of range");
  detail::check_site(n_sites, site);
  const auto dim = static_cast<Eigen::Index>(detail::dimension(n_sites));
  SpinOperators<Scalar> ops{ComplexMatrix<Scalar>::Zero(dim, dim),
                            ComplexMatrix<Scalar>::Zero(dim, dim),
                            ComplexMatrix<Scalar>::Zero(dim, dim)};
  const auto mask = detail::site_mask(n_sites, site);
  for (std::size_t b = 0; b < detail::dimension(n_sites); ++b) {
    const int bit = detail::site_bit(b, n_sites, site);
    const auto col = static_cast<Eigen::Index>(b);
    const auto flipped = static_cast<Eigen::Index>(b ^ mask);
    ops.x(flipped, col) = detail::spin_action<Scalar>(Axis::x, bit).second;
    ops.y(flipped, col) = detail::spin_action<Scalar>(Axis::y, bit).second;
    ops.z(col, col) = detail::spin_action<Scalar>(Axis::z, bit).second;
  }
  return ops;
}

/// Hermitian Hamiltonian on 2^n states, entries in Kelvin.
template <typename Scalar = double>
class HamiltonianMatrix {
 public:
  explicit HamiltonianMatrix(ComplexMatrix<Scalar> entries, Scalar tol = Scalar(1e-12))
      : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols())
      throw std::invalid_argument("HamiltonianMatrix: matrix must be square");
    n_sites_ = detail::sites_from_dimension(entries_.rows());
    const Scalar scale = entries_.cwiseAbs().maxCoeff();
    if (detail::hermiticity_defect(entries_) > detail::relative_tolerance(tol, scale))
      throw std::invalid_argument("HamiltonianMatrix: matrix is not Hermitian");
  }

  const ComplexMatrix<Scalar>& matrix() const { return entries_; }
  Eigen::Index dim() const { return entries_.rows(); }
  int n_sites() const { return n_sites_; }

 private:
  ComplexMatrix<Scalar> entries_;
  int n_sites_ = 0;
};

/// H = -J sum_bonds S_i . S_j, assembled directly in the S^z basis:
/// S_i . S_j = S^z_i S^z_j + (S^+_i S^-_j + S^-_i S^+_j) / 2.
template <typename Scalar>
HamiltonianMatrix<Scalar> build_hamiltonian(const SpinChainSpec<Scalar>& spec) {
  spec.validate();
  const int n = spec.n_sites;
  const auto dim = detail::dimension(n);
  ComplexMatrix<Scalar> h =
      ComplexMatrix<Scalar>::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  const Scalar coupling = -spec.j_over_kb;
  for (int bond = 0; bond < spec.n_bonds(); ++bond) {
    const int i = bond + 1;
    const int j = (bond + 1) % n + 1;
    const auto flip = detail::site_mask(n, i) | detail::site_mask(n, j);
    for (std::size_t b = 0; b < dim; ++b) {
      const auto col = static_cast<Eigen::Index>(b);
      const bool aligned = detail::site_bit(b, n, i) == detail::site_bit(b, n, j);
      h(col, col) += coupling * (aligned ? Scalar(0.25) : Scalar(-0.25));
      if (!aligned) h(static_cast<Eigen::Index>(b ^ flip), col) += coupling * Scalar(0.5);
    }
  }
  return HamiltonianMatrix<Scalar>(std::move(h));
}

template <typename Scalar = double>
struct EigenBasis {
  RealVector<Scalar> values;       // ascending, Kelvin
  ComplexMatrix<Scalar> vectors;   // columns are orthonormal eigenvectors
};

/// Dense self-adjoint eigensolve. Rejects non-Hermitian input.
template <typename Derived>
EigenBasis<typename Derived::RealScalar> eigendecompose(
    const Eigen::MatrixBase<Derived>& m,
    typename Derived::RealScalar tol = typename Derived::RealScalar(1e-12)) {
  using Scalar = typename Derived::RealScalar;
  if (m.rows() != m.cols()) throw std::invalid_argument("eigendecompose: matrix must be square");
  const Scalar scale = m.rows() > 0 ? Scalar(m.cwiseAbs().maxCoeff()) : Scalar(0);
  if (detail::hermiticity_defect(m) > detail::relative_tolerance(tol, scale))
    throw std::invalid_argument("eigendecompose: matrix is not Hermitian");
  const ComplexMatrix<Scalar> hermitian = m.template cast<std::complex<Scalar>>();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix<Scalar>> solver(hermitian);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigendecompose: eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

template <typename Scalar>
EigenBasis<Scalar> eigendecompose(const HamiltonianMatrix<Scalar>& h) {
  return eigendecompose(h.matrix());
}

/// Canonical Gibbs state together with the spectrum it was built from.
template <typename Scalar = double>
struct ThermalState {
  Scalar temperature{};  // Kelvin; below the floor the state is the ground projector
  int n_sites = 0;
  ComplexMatrix<Scalar> density;
  EigenBasis<Scalar> eigenbasis;
  bool ground_projector = false;
};

template <typename Scalar = double>
inline constexpr Scalar kDefaultTemperatureFloor = Scalar(1e-6);

/// rho = exp(-H/T)/Z built in the eigenbasis with the ground energy subtracted.
/// T below `floor` gives the normalized projector onto the full ground space.
template <typename Scalar>
ThermalState<Scalar> thermal_state(const HamiltonianMatrix<Scalar>& h, Scalar temperature,
                                   Scalar floor = kDefaultTemperatureFloor<Scalar>) {
  if (!(temperature > Scalar(0)))
    throw std::invalid_argument("thermal_state: temperature must be positive");
  ThermalState<Scalar> state;
  state.temperature = temperature;
  state.n_sites = h.n_sites();
  state.eigenbasis = eigendecompose(h);
  const auto& energies = state.eigenbasis.values;
  const Scalar e0 = energies(0);

  RealVector<Scalar> weights(energies.size());
  if (temperature < floor) {
    state.ground_projector = true;
    const Scalar gap_tol = Scalar(1e-9) * std::max(Scalar(1), std::abs(e0));
    for (Eigen::Index k = 0; k < energies.size(); ++k)
      weights(k) = energies(k) - e0 <= gap_tol ? Scalar(1) : Scalar(0);
  } else {
    weights = (-(energies.array() - e0) / temperature).exp().matrix();
  }
  weights /= weights.sum();

  const auto& v = state.eigenbasis.vectors;
  state.density = v * weights.template cast<std::complex<Scalar>>().asDiagonal() * v.adjoint();
  // Symmetrize away round-off so the Hermiticity invariant is exact.
  state.density = (state.density + state.density.adjoint()).eval() * Scalar(0.5);
  return state;
}

/// Expectation Tr(rho S_i^a S_j^b). Each single-site operator maps a basis
/// state to one basis state, so this runs in O(2^n).
template <typename Scalar>
std::complex<Scalar> pair_expectation(const ComplexMatrix<Scalar>& rho, int n_sites, int i, Axis a,
                                      int j, Axis b) {
  detail::check_site(n_sites, i);
  detail::check_site(n_sites, j);
  std::complex<Scalar> acc{};
  for (std::size_t col = 0; col < detail::dimension(n_sites); ++col) {
    // O|col> where O = S_i^a S_j^b: apply S_j^b first.
    auto [flip_j, amp_j] = detail::spin_action<Scalar>(b, detail::site_bit(col, n_sites, j));
    std::size_t mid = flip_j ? col ^ detail::site_mask(n_sites, j) : col;
    auto [flip_i, amp_i] = detail::spin_action<Scalar>(a, detail::site_bit(mid, n_sites, i));
    std::size_t row = flip_i ? mid ^ detail::site_mask(n_sites, i) : mid;
    // Tr(rho O) = sum_col <col|rho|row> <row|O|col>
    acc += rho(static_cast<Eigen::Index>(col), static_cast<Eigen::Index>(row)) * amp_i * amp_j;
  }
  return acc;
}

template <typename Scalar>
std::complex<Scalar> site_expectation(const ComplexMatrix<Scalar>& rho, int n_sites, int i, Axis a) {
  detail::check_site(n_sites, i);
  std::complex<Scalar> acc{};
  for (std::size_t col = 0; col < detail::dimension(n_sites); ++col) {
    auto [flip, amp] = detail::spin_action<Scalar>(a, detail::site_bit(col, n_sites, i));
    std::size_t row = flip ? col ^ detail::site_mask(n_sites, i) : col;
    acc += rho(static_cast<Eigen::Index>(col), static_cast<Eigen::Index>(row)) * amp;
  }
  return acc;
}

/// Single-component correlator <S_i^a S_j^a>.
template <typename Scalar>
Scalar spin_correlation(const ThermalState<Scalar>& state, int i, int j, Axis a = Axis::z) {
  return pair_expectation(state.density, state.n_sites, i, a, j, a).real();
}

/// Full dot-product correlator <S_i . S_j>.
template <typename Scalar>
Scalar dot_correlation(const ThermalState<Scalar>& state, int i, int j) {
  Scalar acc = 0;
  for (Axis a : kAxes) acc += spin_correlation(state, i, j, a);
  return acc;
}

/// Partial trace of an n-site density matrix onto the ordered pair (i, j);
/// the result is in the basis |s_i s_j> with s_i the leading qubit.
template <typename Derived>
Matrix4c<typename Derived::RealScalar> partial_trace_pair(const Eigen::MatrixBase<Derived>& rho,
                                                           int n_sites, int i, int j) {
  detail::check_site(n_sites, i);
  detail::check_site(n_sites, j);
  if (i == j) throw std::invalid_argument("partial_trace_pair: sites must differ");
  if (rho.rows() != static_cast<Eigen::Index>(detail::dimension(n_sites)) || rho.cols() != rho.rows())
    throw std::invalid_argument("partial_trace_pair: density has wrong dimension");

  const auto mi = detail::site_mask(n_sites, i);
  const auto mj = detail::site_mask(n_sites, j);
  Matrix4c<typename Derived::RealScalar> out = Matrix4c<typename Derived::RealScalar>::Zero();
  for (std::size_t rest = 0; rest < detail::dimension(n_sites); ++rest) {
    if (rest & (mi | mj)) continue;
    for (int r = 0; r < 4; ++r) {
      const std::size_t row = rest | ((r >> 1) ? mi : 0) | ((r & 1) ? mj : 0);
      for (int c = 0; c < 4; ++c) {
        const std::size_t col = rest | ((c >> 1) ? mi : 0) | ((c & 1) ? mj : 0);
        out(r, c) += rho(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
      }
    }
  }
  return out;
}

/// Two-site reduced state of a zero-field thermal state. Throws SymmetryError
/// if the reduced matrix is not of X-form with equal corners and equal
/// central diagonal entries.
template <typename Scalar>
TwoSiteState<Scalar> two_site_rdm(const ThermalState<Scalar>& state, int i, int j,
                                  Scalar tol = Scalar(1e-12)) {
  const auto rho = partial_trace_pair(state.density, state.n_sites, i, j);
  Scalar off_block = 0;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      const bool in_x_form = r == c || (r == 1 && c == 2) || (r == 2 && c == 1);
      if (!in_x_form) off_block = std::max(off_block, std::abs(rho(r, c)));
    }
  if (off_block > tol)
    throw SymmetryError("two_site_rdm: off-X-form entry of magnitude " + std::to_string(off_block));
  const Scalar corner_gap = std::abs(rho(0, 0) - rho(3, 3));
  const Scalar centre_gap = std::abs(rho(1, 1) - rho(2, 2));
  if (corner_gap > tol || centre_gap > tol)
    throw SymmetryError("two_site_rdm: diagonal is not spin-flip symmetric");

  TwoSiteState<Scalar> s;
  s.v = (rho(0, 0).real() + rho(3, 3).real()) / Scalar(2);
  s.w = (rho(1, 1).real() + rho(2, 2).real()) / Scalar(2);
  s.z = rho(1, 2);
  return s;
}

/// Reduced susceptibility chi k_B T / (g mu_B)^2 along one axis:
/// sum_ij <S_i^a S_j^a> - <sum_i S_i^a>^2.
template <typename Scalar>
Scalar fluctuation_chi_reduced(const ThermalState<Scalar>& state, Axis a) {
  const int n = state.n_sites;
  Scalar second = 0;
  Scalar first = 0;
  for (int i = 1; i <= n; ++i) {
    first += site_expectation(state.density, n, i, a).real();
    for (int j = 1; j <= n; ++j) second += pair_expectation(state.density, n, i, a, j, a).real();
  }
  return second - first * first;
}

/// Mean of the three axis susceptibilities.
template <typename Scalar>
Scalar mean_fluctuation_chi_reduced(const ThermalState<Scalar>& state) {
  Scalar acc = 0;
  for (Axis a : kAxes) acc += fluctuation_chi_reduced(state, a);
  return acc / Scalar(3);
}

/// Convenience: thermal state of the open trimer at temperature T.
template <typename Scalar>
ThermalState<Scalar> trimer_thermal_state(Scalar j_over_kb, Scalar temperature) {
  return thermal_state(build_hamiltonian(SpinChainSpec<Scalar>{3, j_over_kb, Boundary::open}),
                       temperature);
}

}  // namespace trient::ed

#endif  // TRIENT_SPIN_ED_HPP
