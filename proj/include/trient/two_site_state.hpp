// two_site_state.hpp - X-form two-qubit density matrices, PPT spectrum and
// the Hilbert-Schmidt distance measure.
#ifndef TRIENT_TWO_SITE_STATE_HPP
#define TRIENT_TWO_SITE_STATE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

#include <Eigen/Dense>

namespace trient {

template <typename Scalar>
using Matrix4c = Eigen::Matrix<std::complex<Scalar>, 4, 4>;

/// Normalization of the Hilbert-Schmidt measure; caps the trimer closed form
/// at 11/32.
template <typename Scalar = double>
inline constexpr Scalar kMeasureNormalization = Scalar(1) / Scalar(4);

/// Zero-field two-site reduced density matrix in the basis
/// |uu>, |ud>, |du>, |dd>:
///
///     [ v  0  0  0 ]
///     [ 0  w  z  0 ]
///     [ 0  z* w  0 ]
///     [ 0  0  0  v ]
///
/// Unit trace means 2v + 2w = 1. States built from the isotropic
/// correlator map (from_correlator) are not required to be positive.
template <typename Scalar = double>
struct TwoSiteState {
  Scalar v{};
  Scalar w{};
  std::complex<Scalar> z{};

  /// v = 1/4 + c, w = 1/4 - c, z = 2c for the isotropic nearest-neighbour
  /// correlator c = <S_i S_{i+1}>.
  static TwoSiteState from_correlator(Scalar correlator) {
    return {Scalar(0.25) + correlator, Scalar(0.25) - correlator,
            std::complex<Scalar>(Scalar(2) * correlator, Scalar(0))};
  }

  Scalar trace() const { return Scalar(2) * v + Scalar(2) * w; }

  /// Positive semidefinite X-form: v >= 0 and w >= |z|.
  bool is_physical(Scalar tol = Scalar(1e-12)) const {
    return v >= -tol && w >= std::abs(z) - tol;
  }

  Matrix4c<Scalar> density() const {
    Matrix4c<Scalar> rho = Matrix4c<Scalar>::Zero();
    rho(0, 0) = v;
    rho(1, 1) = w;
    rho(1, 2) = z;
    rho(2, 1) = std::conj(z);
    rho(2, 2) = w;
    rho(3, 3) = v;
    return rho;
  }
};

/// Transpose on the second qubit: <a b|rho^T_B|c d> = <a d|rho|c b>.
template <typename Derived>
Matrix4c<typename Derived::RealScalar> partial_transpose_second(
    const Eigen::MatrixBase<Derived>& rho) {
  using Scalar = typename Derived::RealScalar;
  Matrix4c<Scalar> out;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d)
          out(2 * a + b, 2 * c + d) = rho(2 * a + d, 2 * c + b);
  return out;
}

/// Eigenvalues of the partial transpose, in the order (w, w, v+|z|, v-|z|).
template <typename Scalar>
std::array<Scalar, 4> ppt_eigenvalues(const TwoSiteState<Scalar>& s) {
  const Scalar mod_z = std::abs(s.z);
  return {s.w, s.w, s.v + mod_z, s.v - mod_z};
}

/// Peres-Horodecki: entangled iff some partial-transpose eigenvalue is negative.
template <typename Scalar>
bool ppt_entangled(const TwoSiteState<Scalar>& s) {
  const auto lambda = ppt_eigenvalues(s);
  return *std::min_element(lambda.begin(), lambda.end()) < Scalar(0);
}

/// Minimal Hilbert-Schmidt distance to the separable X-states,
/// (1/4) max[0, 2(|z| - v)].
template <typename Scalar>
Scalar hs_measure(const TwoSiteState<Scalar>& s) {
  return kMeasureNormalization<Scalar> *
         std::max(Scalar(0), Scalar(2) * (std::abs(s.z) - s.v));
}

/// Frobenius distance sqrt(Tr[(a - b)^2]) between two Hermitian 4x4 states.
template <typename Scalar>
Scalar hilbert_schmidt_distance(const TwoSiteState<Scalar>& a, const TwoSiteState<Scalar>& b) {
  return (a.density() - b.density()).norm();
}

}  // namespace trient

#endif  // TRIENT_TWO_SITE_STATE_HPP
