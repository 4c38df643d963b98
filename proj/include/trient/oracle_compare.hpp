// oracle_compare.hpp - side-by-side values of the susceptibility-driven trimer
// chain and the exact-diagonalization oracle at one temperature.
#ifndef TRIENT_ORACLE_COMPARE_HPP
#define TRIENT_ORACLE_COMPARE_HPP

#include <cmath>
#include <optional>

#include "trient/spin_ed.hpp"
#include "trient/trimer.hpp"

namespace trient {

template <typename Scalar = double>
struct ComparisonRow {
  Scalar temperature{};
  Scalar chi_closed{};     // Van Vleck
  Scalar chi_oracle{};     // fluctuation, mean over axes
  Scalar corr_chain{};     // correlator recovered from chi_closed
  Scalar corr_oracle{};    // <S1^z S2^z>
  Scalar dot_oracle{};     // <S1 . S2>
  TwoSiteState<Scalar> state_chain;
  TwoSiteState<Scalar> state_oracle;
  Scalar lambda4_chain{};
  Scalar lambda4_oracle{};
  Scalar measure_chain{};
  Scalar measure_oracle{};
};

/// Both routes for the bond (1,2) of the open trimer.
template <typename Scalar>
ComparisonRow<Scalar> compare_trimer(const trimer::TrimerModel<Scalar>& model, Scalar temperature) {
  ComparisonRow<Scalar> row;
  row.temperature = temperature;
  row.chi_closed = trimer::van_vleck_chi_reduced(model, temperature);
  row.measure_chain = trimer::closed_form_measure(model, temperature).measure;
  row.corr_chain = trimer::corr_from_chi(row.chi_closed);
  row.state_chain = TwoSiteState<Scalar>::from_correlator(row.corr_chain);
  row.lambda4_chain = ppt_eigenvalues(row.state_chain)[3];

  const auto state = ed::trimer_thermal_state(model.j_over_kb, temperature);
  row.chi_oracle = ed::mean_fluctuation_chi_reduced(state);
  row.corr_oracle = ed::spin_correlation(state, 1, 2, ed::Axis::z);
  row.dot_oracle = ed::dot_correlation(state, 1, 2);
  row.state_oracle = ed::two_site_rdm(state, 1, 2);
  row.lambda4_oracle = ppt_eigenvalues(row.state_oracle)[3];
  row.measure_oracle = hs_measure(row.state_oracle);
  return row;
}

/// Temperature at which the oracle's smallest partial-transpose eigenvalue of
/// bond (1,2) changes sign, bisected in log T within [t_lo, t_hi]. Returns
/// nullopt if the sign does not change across the bracket.
template <typename Scalar>
std::optional<Scalar> oracle_ppt_sign_change(const trimer::TrimerModel<Scalar>& model, Scalar t_lo,
                                             Scalar t_hi, Scalar rel_tol = Scalar(1e-10)) {
  model.validate();
  auto lambda4 = [&](Scalar t) {
    return ppt_eigenvalues(ed::two_site_rdm(ed::trimer_thermal_state(model.j_over_kb, t), 1, 2))[3];
  };
  if (!(lambda4(t_lo) < Scalar(0)) || lambda4(t_hi) < Scalar(0)) return std::nullopt;
  Scalar lo = std::log(t_lo);
  Scalar hi = std::log(t_hi);
  while (hi - lo > rel_tol) {
    const Scalar mid = (lo + hi) / Scalar(2);
    if (lambda4(std::exp(mid)) < Scalar(0))
      lo = mid;
    else
      hi = mid;
  }
  return std::exp((lo + hi) / Scalar(2));
}

}  // namespace trient

#endif  // TRIENT_ORACLE_COMPARE_HPP
