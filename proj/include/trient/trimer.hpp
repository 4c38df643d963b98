// trimer.hpp - closed-form thermal entanglement of the antiferromagnetic
// spin-1/2 Heisenberg trimer, driven by its Van Vleck susceptibility.
//
// All susceptibilities are reduced: chi_hat = chi k_B T / (g mu_B)^2.
#ifndef TRIENT_TRIMER_HPP
#define TRIENT_TRIMER_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "trient/two_site_state.hpp"

namespace trient::trimer {

/// Reduced susceptibility at which the measure closes: chi_hat = 5/9,
/// i.e. Boltzmann ratio f = 20/9.
template <typename Scalar = double>
inline constexpr Scalar kThresholdChi = Scalar(5) / Scalar(9);
template <typename Scalar = double>
inline constexpr Scalar kThresholdRatio = Scalar(20) / Scalar(9);
/// Zero-temperature limit of the closed-form measure.
template <typename Scalar = double>
inline constexpr Scalar kMaxMeasure = Scalar(11) / Scalar(32);

template <typename Scalar = double>
struct TrimerModel {
  Scalar j_over_kb = Scalar(-1);  // Kelvin, strictly negative
  Scalar g_factor = Scalar(2);

  void validate() const {
    if (!(j_over_kb < Scalar(0)) || !std::isfinite(static_cast<double>(j_over_kb)))
      throw std::invalid_argument("antiferromagnetic J<0 required, got J/k_B = " +
                                  std::to_string(static_cast<double>(j_over_kb)) + " K");
    if (!(g_factor > Scalar(0)))
      throw std::invalid_argument("g-factor must be positive");
  }
};

template <typename Scalar = double>
struct EntanglementPoint {
  Scalar temperature{};  // Kelvin
  Scalar measure{};      // in [0, 11/32]
  bool entangled = false;
};

namespace detail {
template <typename Scalar>
void check_temperature(Scalar t) {
  if (!(t > Scalar(0)) || !std::isfinite(static_cast<double>(t)))
    throw std::invalid_argument("temperature must be positive and finite");
}
}  // namespace detail

/// f(x) = (1 + e^x + 10 e^{3x/2}) / (1 + e^x + 2 e^{3x/2}), x = J/(k_B T) <= 0.
template <typename Scalar>
Scalar boltzmann_ratio(Scalar x) {
  if (x > Scalar(0)) throw std::invalid_argument("boltzmann_ratio: x = J/(k_B T) must be <= 0");
  const Scalar e1 = std::exp(x);
  const Scalar e32 = std::exp(Scalar(1.5) * x);
  return (Scalar(1) + e1 + Scalar(10) * e32) / (Scalar(1) + e1 + Scalar(2) * e32);
}

/// Van Vleck reduced susceptibility of the open trimer, f(J/T)/4.
template <typename Scalar>
Scalar van_vleck_chi_reduced(const TrimerModel<Scalar>& model, Scalar temperature) {
  model.validate();
  detail::check_temperature(temperature);
  return boltzmann_ratio(model.j_over_kb / temperature) / Scalar(4);
}

/// chi_hat_z = 2 (2 c + 1) for the nearest-neighbour correlator c.
template <typename Scalar>
Scalar chi_z_reduced_from_corr(Scalar correlator) {
  return Scalar(2) * (Scalar(2) * correlator + Scalar(1));
}

/// Inverse of chi_hat = (2/3)(2 c + 1): c = (3 chi_hat - 2) / 4.
template <typename Scalar>
Scalar corr_from_chi(Scalar chi_reduced) {
  return (Scalar(3) * chi_reduced - Scalar(2)) / Scalar(4);
}

/// Two-site state implied by a measured reduced susceptibility.
template <typename Scalar>
TwoSiteState<Scalar> two_site_state_from_chi(Scalar chi_reduced) {
  return TwoSiteState<Scalar>::from_correlator(corr_from_chi(chi_reduced));
}

/// E = (1/4) max[0, 2|(3/2) chi_hat - 1| + 1/2 - (3/2) chi_hat].
template <typename Scalar>
Scalar measure_from_chi(Scalar chi_reduced) {
  if (!(chi_reduced >= Scalar(0)))
    throw std::invalid_argument("measure_from_chi: reduced susceptibility must be >= 0");
  const Scalar a = Scalar(1.5) * chi_reduced;
  return kMeasureNormalization<Scalar> *
         std::max(Scalar(0), Scalar(2) * std::abs(a - Scalar(1)) + Scalar(0.5) - a);
}

/// E(J, T) written directly in the Boltzmann ratio f = f(J/(k_B T)).
template <typename Scalar>
EntanglementPoint<Scalar> closed_form_measure(const TrimerModel<Scalar>& model, Scalar temperature) {
  model.validate();
  detail::check_temperature(temperature);
  const Scalar f = boltzmann_ratio(model.j_over_kb / temperature);
  const Scalar a = Scalar(3) / Scalar(8) * f;
  const Scalar measure = kMeasureNormalization<Scalar> *
                         std::max(Scalar(0), Scalar(2) * std::abs(a - Scalar(1)) + Scalar(0.5) - a);
  return {temperature, measure, measure > Scalar(0)};
}

/// Root x* < 0 of f(x) = 20/9 by bisection on [-10, 0].
template <typename Scalar = double>
Scalar critical_coupling_ratio(Scalar tol = Scalar(1e-12)) {
  Scalar lo = Scalar(-10);  // f(lo) < 20/9
  Scalar hi = Scalar(0);    // f(hi) = 3 > 20/9
  while (hi - lo > tol) {
    const Scalar mid = lo + (hi - lo) / Scalar(2);
    if (boltzmann_ratio(mid) < kThresholdRatio<Scalar>)
      lo = mid;
    else
      hi = mid;
  }
  return lo + (hi - lo) / Scalar(2);
}

/// T_c / |J/k_B| = 1/|x*|, independent of J.
template <typename Scalar = double>
Scalar critical_temperature_ratio() {
  return Scalar(-1) / critical_coupling_ratio<Scalar>();
}

/// Decoherence temperature in Kelvin: the closed-form measure vanishes for T >= T_c.
template <typename Scalar>
Scalar critical_temperature(const TrimerModel<Scalar>& model) {
  model.validate();
  return std::abs(model.j_over_kb) * critical_temperature_ratio<Scalar>();
}

template <typename Scalar>
bool entangled_region(const TrimerModel<Scalar>& model, Scalar temperature) {
  return closed_form_measure(model, temperature).entangled;
}

}  // namespace trient::trimer

#endif  // TRIENT_TRIMER_HPP
