// data_pipeline.hpp - susceptibility series ingestion and entanglement export.
#ifndef TRIENT_DATA_PIPELINE_HPP
#define TRIENT_DATA_PIPELINE_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "trient/trimer.hpp"

namespace trient::data {

using EntanglementPoint = trimer::EntanglementPoint<double>;

/// Malformed or unphysical input data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// CODATA 2018, exact in the SI.
inline constexpr double kBoltzmann = 1.380649e-23;       // J/K
inline constexpr double kBohrMagneton = 9.2740100783e-24;  // J/T

struct ChiSample {
  double temperature = 0.0;   // Kelvin
  double chi_reduced = 0.0;   // chi k_B T / (g mu_B)^2
};

struct SusceptibilitySeries {
  std::vector<ChiSample> points;  // strictly increasing temperature
  std::string source;             // "synthetic" or the file path
};

struct LoadOptions {
  /// Take the chi column as already reduced.
  bool reduced = false;
  /// Multiplier turning the raw chi column into J/T^2 per trimer.
  double chi_scale = 1.0;
  double g_factor = 2.0;
};

/// chi k_B T / (g mu_B)^2 for chi in J/T^2.
double reduce_chi(double chi_si, double temperature, double g_factor);

/// Parses `T_K,chi` CSV text. `label` names the source in errors and in the
/// returned series. Rows are sorted by temperature and duplicate
/// temperatures are averaged.
SusceptibilitySeries parse_chi_series(std::istream& in, const LoadOptions& options,
                                      const std::string& label);

SusceptibilitySeries load_chi_series(const std::filesystem::path& path,
                                     const LoadOptions& options);

/// Van Vleck series of the trimer on the given temperatures (sorted on output).
SusceptibilitySeries synthesize_van_vleck_series(const trimer::TrimerModel<double>& model,
                                                 std::vector<double> temperatures);

/// Writes a series in the `T_K,chi` input format with round-trip precision.
void write_chi_series(const SusceptibilitySeries& series, std::ostream& out);

std::vector<EntanglementPoint> entanglement_series(const SusceptibilitySeries& series);

/// Temperature at which the measure first closes. Between the last entangled
/// sample and the first separable one the measure is continued linearly
/// through the last two entangled samples; the estimate is clamped into that
/// bracket. Returns nullopt if the data never closes or is never entangled.
std::optional<double> estimate_tc_from_data(std::span<const EntanglementPoint> points);

enum class Format { csv, json };

Format parse_format(const std::string& name);

/// CSV `temperature_K,measure,entangled` or a JSON array of records with the
/// same keys; numbers carry 9 significant digits.
void write_series(std::span<const EntanglementPoint> points, Format format, std::ostream& out);
void export_series(std::span<const EntanglementPoint> points, const std::filesystem::path& path,
                   Format format);

/// Reads back a file written by export_series.
std::vector<EntanglementPoint> read_series(std::istream& in, Format format);

/// Renders a number with 9 significant digits.
std::string format_number(double value);

}  // namespace trient::data

#endif  // TRIENT_DATA_PIPELINE_HPP
