#include "trient/data_pipeline.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace trient::data {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::optional<double> parse_double(const std::string& text) {
  if (text.empty()) return std::nullopt;
  errno = 0;
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(value))
    return std::nullopt;
  return value;
}

bool skippable(const std::string& line) {
  const auto t = trim(line);
  return t.empty() || t.front() == '#';
}

std::size_t find_column(const std::vector<std::string>& header,
                        std::initializer_list<const char*> names) {
  for (std::size_t i = 0; i < header.size(); ++i)
    for (const char* name : names)
      if (header[i] == name) return i;
  return header.size();
}

std::string at_line(const std::string& label, std::size_t line) {
  return label + ":" + std::to_string(line) + ": ";
}

}  // namespace

double reduce_chi(double chi_si, double temperature, double g_factor) {
  const double moment = g_factor * kBohrMagneton;
  return chi_si * kBoltzmann * temperature / (moment * moment);
}

SusceptibilitySeries parse_chi_series(std::istream& in, const LoadOptions& options,
                                      const std::string& label) {
  if (!options.reduced) {
    if (!(options.g_factor > 0.0)) throw DataError("g-factor must be positive");
    if (!(options.chi_scale > 0.0)) throw DataError("chi scale must be positive");
  }

  std::string line;
  std::size_t line_no = 0;
  std::optional<std::pair<std::size_t, std::size_t>> columns;
  std::vector<ChiSample> rows;

  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    const auto fields = split_csv(line);
    if (!columns) {
      const auto t_col = find_column(fields, {"T_K", "temperature_K"});
      const auto chi_col = find_column(fields, {"chi", "chi_reduced"});
      if (t_col == fields.size() || chi_col == fields.size())
        throw DataError(at_line(label, line_no) + "header must name columns T_K and chi");
      columns = {t_col, chi_col};
      continue;
    }
    const auto [t_col, chi_col] = *columns;
    if (fields.size() <= std::max(t_col, chi_col))
      throw DataError(at_line(label, line_no) + "missing column");
    const auto t = parse_double(fields[t_col]);
    const auto raw = parse_double(fields[chi_col]);
    if (!t || !raw) throw DataError(at_line(label, line_no) + "cannot parse row '" + trim(line) + "'");
    if (!(*t > 0.0)) throw DataError(at_line(label, line_no) + "temperature must be positive");
    const double chi =
        options.reduced ? *raw : reduce_chi(*raw * options.chi_scale, *t, options.g_factor);
    if (chi < 0.0)
      throw DataError(at_line(label, line_no) + "negative reduced susceptibility");
    rows.push_back({*t, chi});
  }
  if (in.bad()) throw IoError(label + ": read failure");
  if (!columns) throw DataError(label + ": missing header row");

  std::stable_sort(rows.begin(), rows.end(),
                   [](const ChiSample& a, const ChiSample& b) { return a.temperature < b.temperature; });

  SusceptibilitySeries series;
  series.source = label;
  for (std::size_t i = 0; i < rows.size();) {
    std::size_t j = i;
    double sum = 0.0;
    while (j < rows.size() && rows[j].temperature == rows[i].temperature) sum += rows[j++].chi_reduced;
    series.points.push_back({rows[i].temperature, sum / static_cast<double>(j - i)});
    i = j;
  }
  return series;
}

SusceptibilitySeries load_chi_series(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_chi_series(in, options, path.string());
}

SusceptibilitySeries synthesize_van_vleck_series(const trimer::TrimerModel<double>& model,
                                                 std::vector<double> temperatures) {
  std::sort(temperatures.begin(), temperatures.end());
  temperatures.erase(std::unique(temperatures.begin(), temperatures.end()), temperatures.end());
  SusceptibilitySeries series;
  series.source = "synthetic";
  series.points.reserve(temperatures.size());
  for (double t : temperatures) series.points.push_back({t, trimer::van_vleck_chi_reduced(model, t)});
  return series;
}

void write_chi_series(const SusceptibilitySeries& series, std::ostream& out) {
  out << "# source: " << series.source << '\n';
  out << "T_K,chi\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& p : series.points) out << p.temperature << ',' << p.chi_reduced << '\n';
}

std::vector<EntanglementPoint> entanglement_series(const SusceptibilitySeries& series) {
  if (series.points.empty()) throw DataError("entanglement_series: empty series");
  std::vector<EntanglementPoint> out;
  out.reserve(series.points.size());
  for (const auto& p : series.points) {
    const double m = trimer::measure_from_chi(p.chi_reduced);
    out.push_back({p.temperature, m, m > 0.0});
  }
  return out;
}

std::optional<double> estimate_tc_from_data(std::span<const EntanglementPoint> points) {
  if (points.size() < 2) throw DataError("estimate_tc_from_data: need at least 2 points");
  for (std::size_t i = 1; i < points.size(); ++i)
    if (!(points[i].temperature > points[i - 1].temperature))
      throw DataError("estimate_tc_from_data: temperatures must be strictly increasing");

  const auto first_entangled = std::find_if(points.begin(), points.end(),
                                            [](const EntanglementPoint& p) { return p.measure > 0.0; });
  if (first_entangled == points.end()) return std::nullopt;
  const auto closed = std::find_if(first_entangled, points.end(),
                                   [](const EntanglementPoint& p) { return !(p.measure > 0.0); });
  if (closed == points.end()) return std::nullopt;

  const auto& last = *(closed - 1);
  const double upper = closed->temperature;
  if (closed - 1 == first_entangled) return upper;
  const auto& prev = *(closed - 2);
  const double slope = (last.measure - prev.measure) / (last.temperature - prev.temperature);
  if (!(slope < 0.0)) return upper;
  return std::clamp(last.temperature - last.measure / slope, last.temperature, upper);
}

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  throw std::invalid_argument("unknown format '" + name + "' (expected csv or json)");
}

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

namespace {
double rounded(double value) { return std::strtod(format_number(value).c_str(), nullptr); }
}  // namespace

void write_series(std::span<const EntanglementPoint> points, Format format, std::ostream& out) {
  if (format == Format::csv) {
    out << "temperature_K,measure,entangled\n";
    for (const auto& p : points)
      out << format_number(p.temperature) << ',' << format_number(p.measure) << ','
          << (p.entangled ? "true" : "false") << '\n';
    return;
  }
  nlohmann::json records = nlohmann::json::array();
  for (const auto& p : points)
    records.push_back({{"temperature_K", rounded(p.temperature)},
                       {"measure", rounded(p.measure)},
                       {"entangled", p.entangled}});
  out << records.dump(2) << '\n';
}

void export_series(std::span<const EntanglementPoint> points, const std::filesystem::path& path,
                   Format format) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_series(points, format, out);
  out.flush();
  if (!out) throw IoError("write failure on " + path.string());
}

std::vector<EntanglementPoint> read_series(std::istream& in, Format format) {
  std::vector<EntanglementPoint> points;
  if (format == Format::json) {
    nlohmann::json records;
    try {
      in >> records;
    } catch (const nlohmann::json::exception& e) {
      throw DataError(std::string("read_series: ") + e.what());
    }
    for (const auto& r : records)
      points.push_back({r.at("temperature_K").get<double>(), r.at("measure").get<double>(),
                        r.at("entangled").get<bool>()});
    return points;
  }
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    if (!header) {
      header = true;
      continue;
    }
    const auto fields = split_csv(line);
    const auto t = fields.size() == 3 ? parse_double(fields[0]) : std::nullopt;
    const auto m = fields.size() == 3 ? parse_double(fields[1]) : std::nullopt;
    if (!t || !m || (fields[2] != "true" && fields[2] != "false"))
      throw DataError("read_series: line " + std::to_string(line_no) + ": malformed row");
    points.push_back({*t, *m, fields[2] == "true"});
  }
  return points;
}

}  // namespace trient::data
