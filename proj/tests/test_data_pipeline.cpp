#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include "trient/data_pipeline.hpp"

namespace {

using namespace trient::data;
namespace fs = std::filesystem;
using Model = trient::trimer::TrimerModel<double>;

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "trient_tests";
  fs::create_directories(dir);
  return dir / name;
}

SusceptibilitySeries parse(const std::string& text, LoadOptions options = {true}) {
  std::istringstream in(text);
  return parse_chi_series(in, options, "mem");
}

std::vector<double> linear_grid(double lo, double hi, double step) {
  std::vector<double> g;
  const auto n = static_cast<long>(std::llround((hi - lo) / step));
  for (long k = 0; k <= n; ++k) g.push_back(lo + static_cast<double>(k) * step);
  return g;
}

TEST(LoadChiSeries, ReducedIdentity) {
  const auto s = parse("T_K,chi\n10,0.5\n20,0.45\n");
  ASSERT_EQ(s.points.size(), 2u);
  EXPECT_DOUBLE_EQ(s.points[0].temperature, 10.0);
  EXPECT_DOUBLE_EQ(s.points[0].chi_reduced, 0.5);
  EXPECT_DOUBLE_EQ(s.points[1].temperature, 20.0);
  EXPECT_DOUBLE_EQ(s.points[1].chi_reduced, 0.45);
  EXPECT_EQ(s.source, "mem");
}

TEST(LoadChiSeries, CommentsExtraColumnsAndWhitespace) {
  const auto s = parse("# measured\nsample, chi ,T_K\n\n a ,0.3, 5\n# skip\nb,0.4,7\n");
  ASSERT_EQ(s.points.size(), 2u);
  EXPECT_DOUBLE_EQ(s.points[0].temperature, 5.0);
  EXPECT_DOUBLE_EQ(s.points[1].chi_reduced, 0.4);
}

TEST(LoadChiSeries, SortsAndAveragesDuplicates) {
  const auto s = parse("T_K,chi\n30,0.6\n10,0.2\n30,0.4\n20,0.5\n");
  ASSERT_EQ(s.points.size(), 3u);
  EXPECT_DOUBLE_EQ(s.points[0].temperature, 10.0);
  EXPECT_DOUBLE_EQ(s.points[2].temperature, 30.0);
  EXPECT_DOUBLE_EQ(s.points[2].chi_reduced, 0.5);
}

TEST(LoadChiSeries, PermutationInvariant) {
  std::vector<std::string> rows;
  for (int k = 1; k <= 40; ++k) rows.push_back(std::to_string(k * 0.7) + "," + std::to_string(1.0 / k));
  std::string ordered = "T_K,chi\n";
  for (const auto& r : rows) ordered += r + "\n";
  const auto reference = parse(ordered);
  std::mt19937 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    std::shuffle(rows.begin(), rows.end(), rng);
    std::string shuffled = "T_K,chi\n";
    for (const auto& r : rows) shuffled += r + "\n";
    const auto s = parse(shuffled);
    ASSERT_EQ(s.points.size(), reference.points.size());
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      EXPECT_EQ(s.points[i].temperature, reference.points[i].temperature);
      EXPECT_EQ(s.points[i].chi_reduced, reference.points[i].chi_reduced);
    }
  }
}

TEST(LoadChiSeries, PhysicalUnitConversion) {
  // A free spin-1/2 Curie susceptibility (g mu_B)^2 / (4 k_B T) reduces to 1/4.
  const double g = 2.1;
  const double t = 12.0;
  const double chi_si = std::pow(g * kBohrMagneton, 2) / (4.0 * kBoltzmann * t);
  std::ostringstream text;
  text << std::setprecision(17) << "T_K,chi\n" << t << ',' << chi_si / 1e-24 << '\n';
  const auto s = parse(text.str(), LoadOptions{false, 1e-24, g});
  EXPECT_NEAR(s.points[0].chi_reduced, 0.25, 1e-14);
}

TEST(LoadChiSeries, ParseErrorNamesLine) {
  try {
    parse("T_K,chi\nabc,1\n");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos) << e.what();
  }
}

TEST(LoadChiSeries, RejectsBadData) {
  EXPECT_THROW(parse("T_K,chi\n0,0.3\n"), DataError);
  EXPECT_THROW(parse("T_K,chi\n-4,0.3\n"), DataError);
  EXPECT_THROW(parse("T_K,chi\n4,-0.3\n"), DataError);
  EXPECT_THROW(parse("temperature,chi\n4,0.3\n"), DataError);
  EXPECT_THROW(parse("T_K,chi\n4\n"), DataError);
  EXPECT_THROW(parse(""), DataError);
}

TEST(LoadChiSeries, MissingFile) {
  EXPECT_THROW(load_chi_series(scratch("does_not_exist.csv"), LoadOptions{true}), IoError);
}

TEST(EntanglementSeries, ReferencePoints) {
  const auto p = entanglement_series(SusceptibilitySeries{{{3.0, 0.25}}, "x"});
  ASSERT_EQ(p.size(), 1u);
  EXPECT_DOUBLE_EQ(p[0].measure, 11.0 / 32.0);
  EXPECT_TRUE(p[0].entangled);
  const auto q = entanglement_series(SusceptibilitySeries{{{3.0, 5.0 / 9.0}}, "x"});
  EXPECT_NEAR(q[0].measure, 0.0, 1e-16);
  EXPECT_THROW(entanglement_series(SusceptibilitySeries{}), DataError);
}

TEST(EntanglementSeries, SyntheticFileRoundTripMatchesClosedForm) {
  const Model m{-20.0};
  std::vector<double> grid;
  for (int k = 1; k <= 100; ++k) grid.push_back(0.4 * k);
  const auto path = scratch("synthetic_20.csv");
  {
    std::ofstream out(path);
    write_chi_series(synthesize_van_vleck_series(m, grid), out);
  }
  const auto series = load_chi_series(path, LoadOptions{true});
  const auto points = entanglement_series(series);
  ASSERT_EQ(points.size(), grid.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    EXPECT_DOUBLE_EQ(points[i].temperature, grid[i]);
    EXPECT_NEAR(points[i].measure, trient::trimer::closed_form_measure(m, grid[i]).measure, 1e-12);
  }
}

TEST(EntanglementSeries, SyntheticFirstZeroForLargerCoupling) {
  const Model m{-30.2};
  const auto points =
      entanglement_series(synthesize_van_vleck_series(m, linear_grid(0.01, 60.0, 0.01)));
  const auto first_zero = std::find_if(points.begin(), points.end(),
                                       [](const EntanglementPoint& p) { return !p.entangled; });
  ASSERT_NE(first_zero, points.end());
  EXPECT_GT(first_zero->temperature, 40.1);
  EXPECT_LT(first_zero->temperature, 40.3);
}

TEST(EstimateTc, DenseSyntheticSeries) {
  const auto points =
      entanglement_series(synthesize_van_vleck_series(Model{-20.0}, linear_grid(0.1, 40.0, 0.1)));
  const auto tc = estimate_tc_from_data(points);
  ASSERT_TRUE(tc.has_value());
  EXPECT_NEAR(*tc, 26.6, 0.1);
}

TEST(EstimateTc, ConvergesWithGridSpacing) {
  const Model m{-20.0};
  const double exact = trient::trimer::critical_temperature(m);
  for (double h : {1.0, 0.1, 0.01}) {
    const auto points = entanglement_series(synthesize_van_vleck_series(m, linear_grid(h, 50.0, h)));
    const auto tc = estimate_tc_from_data(points);
    ASSERT_TRUE(tc.has_value());
    EXPECT_LE(std::abs(*tc - exact), h) << "spacing " << h;
  }
}

TEST(EstimateTc, Undetermined) {
  const auto cold =
      entanglement_series(synthesize_van_vleck_series(Model{-20.0}, linear_grid(1.0, 20.0, 1.0)));
  EXPECT_FALSE(estimate_tc_from_data(cold).has_value());
  const auto hot =
      entanglement_series(synthesize_van_vleck_series(Model{-20.0}, linear_grid(30.0, 50.0, 1.0)));
  EXPECT_FALSE(estimate_tc_from_data(hot).has_value());
}

TEST(EstimateTc, RejectsUnorderedOrShortInput) {
  const std::vector<EntanglementPoint> unordered{{2.0, 0.1, true}, {1.0, 0.0, false}};
  EXPECT_THROW(estimate_tc_from_data(unordered), DataError);
  const std::vector<EntanglementPoint> single{{2.0, 0.1, true}};
  EXPECT_THROW(estimate_tc_from_data(single), DataError);
}

TEST(EstimateTc, SinglePositiveSampleUsesBracketEdge) {
  const std::vector<EntanglementPoint> pts{{1.0, 0.2, true}, {2.0, 0.0, false}};
  EXPECT_EQ(estimate_tc_from_data(pts), 2.0);
}

TEST(ExportSeries, CsvLayout) {
  const std::vector<EntanglementPoint> pts{{1.0, 0.34375, true}, {2.0, 0.1, true}, {30.0, 0.0, false}};
  std::ostringstream out;
  write_series(pts, Format::csv, out);
  EXPECT_EQ(out.str(),
            "temperature_K,measure,entangled\n1,0.34375,true\n2,0.1,true\n30,0,false\n");
  std::ostringstream empty;
  write_series({}, Format::csv, empty);
  EXPECT_EQ(empty.str(), "temperature_K,measure,entangled\n");
}

TEST(ExportSeries, NineSignificantDigits) {
  EXPECT_EQ(format_number(11.0 / 32.0), "0.34375");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333");
  EXPECT_EQ(format_number(26.598805172738098), "26.5988052");
}

TEST(ExportSeries, RoundTripBothFormats) {
  const Model m{-20.0};
  std::vector<EntanglementPoint> pts;
  for (double t = 0.37; t < 35.0; t += 0.71) pts.push_back(trient::trimer::closed_form_measure(m, t));
  for (Format f : {Format::csv, Format::json}) {
    const auto path = scratch(f == Format::csv ? "roundtrip.csv" : "roundtrip.json");
    export_series(pts, path, f);
    std::ifstream in(path);
    const auto back = read_series(in, f);
    ASSERT_EQ(back.size(), pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      // 9 significant digits: half a unit in the ninth digit, relative.
      EXPECT_NEAR(back[i].temperature, pts[i].temperature, 5e-9 * pts[i].temperature);
      EXPECT_NEAR(back[i].measure, pts[i].measure, 1e-9);
      EXPECT_EQ(back[i].entangled, pts[i].entangled);
    }
  }
}

TEST(ExportSeries, JsonKeys) {
  std::ostringstream out;
  const std::vector<EntanglementPoint> pts{{26.0, 0.002, true}};
  write_series(pts, Format::json, out);
  const auto text = out.str();
  for (const char* key : {"\"temperature_K\"", "\"measure\"", "\"entangled\""})
    EXPECT_NE(text.find(key), std::string::npos);
}

TEST(ExportSeries, UnwritablePath) {
  EXPECT_THROW(export_series({}, scratch("no_such_dir") / "x" / "out.csv", Format::csv), IoError);
}

TEST(Format, Parse) {
  EXPECT_EQ(parse_format("csv"), Format::csv);
  EXPECT_EQ(parse_format("json"), Format::json);
  EXPECT_THROW(parse_format("xml"), std::invalid_argument);
}

}  // namespace
