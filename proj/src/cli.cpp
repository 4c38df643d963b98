#include "trient/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "trient/data_pipeline.hpp"
#include "trient/oracle_compare.hpp"
#include "trient/spin_ed.hpp"
#include "trient/trimer.hpp"

namespace trient::cli {

namespace {

using data::format_number;
using data::Format;
using Model = trimer::TrimerModel<double>;
using Json = nlohmann::json;

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  double j_over_kb = std::numeric_limits<double>::quiet_NaN();
  std::optional<double> temperature;
  double t_min = 0.1;
  double t_max = 50.0;
  int t_steps = 200;
  bool log_grid = false;
  double g_factor = 2.0;
  double chi_scale = 1.0;
  bool reduced = false;
  bool oracle = false;
  std::string input;
  std::string output;
  std::string format = "csv";
};

Model model_of(const RunConfig& c) {
  Model m{c.j_over_kb, c.g_factor};
  try {
    m.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return m;
}

Format format_of(const RunConfig& c) {
  try {
    return data::parse_format(c.format);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::vector<double> grid_of(const RunConfig& c) {
  if (!(c.t_min > 0.0)) throw ConfigError("--t-min must be positive");
  if (!(c.t_max > c.t_min)) throw ConfigError("--t-max must exceed --t-min");
  if (c.t_steps < 2) throw ConfigError("--t-steps must be at least 2");
  std::vector<double> grid(static_cast<std::size_t>(c.t_steps));
  const double last = static_cast<double>(c.t_steps - 1);
  for (int k = 0; k < c.t_steps; ++k) {
    const double s = static_cast<double>(k) / last;
    grid[static_cast<std::size_t>(k)] =
        c.log_grid ? std::exp(std::log(c.t_min) + s * (std::log(c.t_max) - std::log(c.t_min)))
                   : c.t_min + s * (c.t_max - c.t_min);
  }
  grid.back() = c.t_max;
  return grid;
}

std::vector<double> temperatures_of(const RunConfig& c) {
  if (c.temperature) {
    if (!(*c.temperature > 0.0)) throw ConfigError("--temp must be positive");
    return {*c.temperature};
  }
  return grid_of(c);
}

void emit_table(const std::vector<std::string>& columns,
                const std::vector<std::vector<Json>>& rows, Format format, std::ostream& out) {
  if (format == Format::csv) {
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        out << (i ? "," : "");
        if (row[i].is_boolean())
          out << (row[i].get<bool>() ? "true" : "false");
        else if (row[i].is_null())
          out << "";
        else
          out << format_number(row[i].get<double>());
      }
      out << '\n';
    }
    return;
  }
  Json records = Json::array();
  for (const auto& row : rows) {
    Json record = Json::object();
    for (std::size_t i = 0; i < columns.size(); ++i) {
      record[columns[i]] = row[i].is_number()
                               ? Json(std::strtod(format_number(row[i].get<double>()).c_str(), nullptr))
                               : row[i];
    }
    records.push_back(record);
  }
  out << records.dump(2) << '\n';
}

Json rounded(double v) { return std::strtod(format_number(v).c_str(), nullptr); }

void cmd_entanglement(const RunConfig& c, std::ostream& out) {
  const auto model = model_of(c);
  if (!c.temperature) throw ConfigError("entanglement requires --temp");
  if (!(*c.temperature > 0.0)) throw ConfigError("--temp must be positive");
  const std::vector points{trimer::closed_form_measure(model, *c.temperature)};
  data::write_series(points, format_of(c), out);
}

void cmd_tc(const RunConfig& c, std::ostream& out) {
  const auto model = model_of(c);
  const double tc = trimer::critical_temperature(model);
  const double ratio = trimer::critical_temperature_ratio<double>();
  if (format_of(c) == Format::json) {
    out << Json{{"j_over_kb", c.j_over_kb},
                {"critical_temperature_K", rounded(tc)},
                {"tc_over_abs_j", rounded(ratio)},
                {"x_star", rounded(-1.0 / ratio)}}
               .dump(2)
        << '\n';
    return;
  }
  std::ostringstream line;
  line << std::fixed << std::setprecision(2) << tc;
  out << "T_c = " << line.str() << " K\n";
  out << "T_c/|J/k_B| = " << format_number(ratio) << '\n';
  out << "J/(k_B T_c) = " << format_number(-1.0 / ratio) << '\n';
}

void cmd_sweep(const RunConfig& c, std::ostream& out) {
  const auto model = model_of(c);
  const auto format = format_of(c);
  std::vector<data::EntanglementPoint> points;
  for (double t : grid_of(c)) points.push_back(trimer::closed_form_measure(model, t));
  data::write_series(points, format, out);
}

void cmd_susceptibility(const RunConfig& c, std::ostream& out) {
  const auto model = model_of(c);
  const auto format = format_of(c);
  std::vector<std::string> columns{"temperature_K", "chi_reduced"};
  if (c.oracle) columns.emplace_back("chi_oracle");
  std::vector<std::vector<Json>> rows;
  for (double t : temperatures_of(c)) {
    std::vector<Json> row{t, trimer::van_vleck_chi_reduced(model, t)};
    if (c.oracle)
      row.emplace_back(ed::mean_fluctuation_chi_reduced(ed::trimer_thermal_state(model.j_over_kb, t)));
    rows.push_back(std::move(row));
  }
  emit_table(columns, rows, format, out);
}

void cmd_oracle_compare(const RunConfig& c, std::ostream& out) {
  const auto model = model_of(c);
  const auto format = format_of(c);
  const std::vector<std::string> columns{
      "temperature_K", "chi_closed",    "chi_oracle",     "corr_chain",    "corr_oracle",
      "dot_oracle",    "v_chain",       "z_chain",        "v_oracle",      "z_oracle",
      "lambda4_chain", "lambda4_oracle", "measure_chain", "measure_oracle"};
  std::vector<std::vector<Json>> rows;
  double max_chi_gap = 0.0;
  for (double t : temperatures_of(c)) {
    const auto r = compare_trimer(model, t);
    max_chi_gap = std::max(max_chi_gap, std::abs(r.chi_closed - r.chi_oracle));
    rows.push_back({r.temperature, r.chi_closed, r.chi_oracle, r.corr_chain, r.corr_oracle,
                    r.dot_oracle, r.state_chain.v, r.state_chain.z.real(), r.state_oracle.v,
                    r.state_oracle.z.real(), r.lambda4_chain, r.lambda4_oracle, r.measure_chain,
                    r.measure_oracle});
  }
  const double j = std::abs(model.j_over_kb);
  const auto sign_change = oracle_ppt_sign_change(model, 1e-3 * j, 1e3 * j);
  const double tc = trimer::critical_temperature(model);

  if (format == Format::json) {
    std::ostringstream table;
    emit_table(columns, rows, Format::json, table);
    Json report{{"rows", Json::parse(table.str())},
                {"summary",
                 {{"max_abs_chi_gap", max_chi_gap},
                  {"chain_critical_temperature_K", rounded(tc)},
                  {"oracle_ppt_sign_change_K",
                   sign_change ? Json(rounded(*sign_change)) : Json(nullptr)}}}};
    out << report.dump(2) << '\n';
    return;
  }
  emit_table(columns, rows, Format::csv, out);
  out << "# max_abs_chi_gap: " << format_number(max_chi_gap) << '\n';
  out << "# chain_critical_temperature_K: " << format_number(tc) << '\n';
  out << "# oracle_ppt_sign_change_K: " << (sign_change ? format_number(*sign_change) : "none")
      << '\n';
}

void cmd_from_data(const RunConfig& c, std::ostream& out) {
  if (c.input.empty()) throw ConfigError("from-data requires --input");
  const auto format = format_of(c);
  const data::LoadOptions options{c.reduced, c.chi_scale, c.g_factor};
  const auto series = data::load_chi_series(c.input, options);
  const auto points = data::entanglement_series(series);
  std::optional<double> tc;
  if (points.size() >= 2) tc = data::estimate_tc_from_data(points);
  if (format == Format::json) {
    std::ostringstream table;
    data::write_series(points, Format::json, table);
    out << Json{{"source", series.source},
                {"points", Json::parse(table.str())},
                {"estimated_tc_K", tc ? Json(rounded(*tc)) : Json(nullptr)}}
               .dump(2)
        << '\n';
    return;
  }
  data::write_series(points, Format::csv, out);
  out << "# estimated_tc_K: " << (tc.has_value() ? format_number(tc.value()) : "none") << '\n';
}

void add_common(CLI::App* sub, RunConfig& c, bool needs_j) {
  auto* j = sub->add_option("--j-over-kb,-j", c.j_over_kb, "exchange constant J/k_B in Kelvin (J<0)");
  if (needs_j) j->required();
  sub->add_option("--g", c.g_factor, "Lande g-factor");
  sub->add_option("--format", c.format, "output format: csv or json");
  sub->add_option("--output,-o", c.output, "output path (default stdout)");
}

void add_grid(CLI::App* sub, RunConfig& c) {
  sub->add_option("--t-min", c.t_min, "lowest temperature (K)");
  sub->add_option("--t-max", c.t_max, "highest temperature (K)");
  sub->add_option("--t-steps", c.t_steps, "number of grid points");
  sub->add_flag("--log-grid", c.log_grid, "logarithmic instead of linear grid");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Thermal entanglement of antiferromagnetic spin-1/2 Heisenberg trimers", "trient"};
  app.require_subcommand(1);
  RunConfig c;
  double temp = 0.0;

  auto* ent = app.add_subcommand("entanglement", "closed-form measure at one temperature");
  add_common(ent, c, true);
  auto* ent_temp = ent->add_option("--temp,-t", temp, "temperature (K)")->required();

  auto* tc = app.add_subcommand("tc", "decoherence (critical) temperature");
  add_common(tc, c, true);

  auto* sweep = app.add_subcommand("sweep", "closed-form measure over a temperature grid");
  add_common(sweep, c, true);
  add_grid(sweep, c);

  auto* chi = app.add_subcommand("susceptibility", "Van Vleck reduced susceptibility");
  add_common(chi, c, true);
  add_grid(chi, c);
  auto* chi_temp = chi->add_option("--temp,-t", temp, "single temperature (K)");
  chi->add_flag("--oracle", c.oracle, "add the exact-diagonalization column");

  auto* cmp = app.add_subcommand("oracle-compare", "closed-form chain vs exact diagonalization");
  add_common(cmp, c, true);
  add_grid(cmp, c);
  auto* cmp_temp = cmp->add_option("--temp,-t", temp, "single temperature (K)");

  auto* fd = app.add_subcommand("from-data", "entanglement from a measured susceptibility CSV");
  add_common(fd, c, false);
  fd->add_option("--input,-i", c.input, "CSV with columns T_K,chi")->required();
  fd->add_flag("--reduced", c.reduced, "chi column is already chi k_B T/(g mu_B)^2");
  fd->add_option("--chi-scale", c.chi_scale, "multiplier converting chi to J/T^2 per trimer");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  for (auto* opt : {ent_temp, chi_temp, cmp_temp})
    if (opt->count() > 0) c.temperature = temp;

  std::ostringstream buffer;
  try {
    if (ent->parsed())
      cmd_entanglement(c, buffer);
    else if (tc->parsed())
      cmd_tc(c, buffer);
    else if (sweep->parsed())
      cmd_sweep(c, buffer);
    else if (chi->parsed())
      cmd_susceptibility(c, buffer);
    else if (cmp->parsed())
      cmd_oracle_compare(c, buffer);
    else
      cmd_from_data(c, buffer);

    if (c.output.empty()) {
      out << buffer.str();
    } else {
      std::ofstream file(c.output);
      if (!file) throw data::IoError("cannot open " + c.output + " for writing");
      file << buffer.str();
      file.flush();
      if (!file) throw data::IoError("write failure on " + c.output);
    }
  } catch (const data::IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const data::DataError& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}

}  // namespace trient::cli
