#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lagnet/io.hpp"
#include "support.hpp"

using namespace lagnet;

TEST_SUITE("io") {

TEST_CASE("matrix csv round-trip at full precision") {
  Eigen::MatrixXd m(2, 3);
  m << 1.0 / 3.0, -2.5e-17, 4.0, 1e300, 0.1, -7.25;
  std::ostringstream out;
  write_matrix_csv(out, m);
  std::istringstream in(out.str());
  const Eigen::MatrixXd back = read_matrix_csv(in);
  CHECK(back == m);
}

TEST_CASE("trajectory csv keeps the observed node ids") {
  TimeSeries ts;
  ts.observed = {1, 4};
  ts.samples.resize(3, 2);
  ts.samples << 0.5, -1.0, 2.25, 3.5, -0.125, 9.0;
  std::ostringstream out;
  write_trajectory_csv(out, ts);
  CHECK(out.str().rfind("t,y1,y4\n", 0) == 0);
  std::istringstream in(out.str());
  const TimeSeries back = read_trajectory_csv(in);
  CHECK(back.observed == ts.observed);
  CHECK(back.samples == ts.samples);
}

TEST_CASE("lag moment dump writes one csv per lag") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "lagnet_moments_test";
  LagMoments m;
  m.min_lag = -1;
  m.max_lag = 2;
  m.observed = {0, 1};
  for (int k = -1; k <= 2; ++k) {
    m.matrices.push_back(Eigen::MatrixXd::Constant(2, 2, static_cast<double>(k)));
  }
  write_lag_moments(dir.string(), m);
  for (int k = -1; k <= 2; ++k) {
    const fs::path path = dir / ("R_" + std::to_string(k) + ".csv");
    REQUIRE(fs::exists(path));
    std::ifstream in(path);
    CHECK(read_matrix_csv(in)(0, 0) == static_cast<double>(k));
  }
  fs::remove_all(dir);
}

TEST_CASE("feature csv carries pairs, labels and dimensions") {
  FeatureSet fsx;
  fsx.kind = FeatureKind::k;
  fsx.pairs = {{0, 1}, {1, 0}};
  fsx.features.resize(2, 3);
  fsx.features << 1, 2, 3, 4, 5, 6;
  fsx.labels = {1, 0};
  std::ostringstream out;
  write_features_csv(out, fsx);
  const std::string text = out.str();
  CHECK(text.rfind("pair_i,pair_j,label,k_0,k_1,k_2\n", 0) == 0);
  CHECK(text.find("0,1,1,1,2,3\n") != std::string::npos);
  CHECK(text.find("1,0,0,4,5,6\n") != std::string::npos);
}

TEST_CASE("feasibility record is flat key=value text") {
  FeasibilityReport report;
  report.error_matrix = Eigen::MatrixXd::Zero(2, 2);
  report.lhs = 0.25;
  report.rhs = 0.5;
  report.feasible = true;
  report.osc_error = 0.0;
  report.consistency_bound = 0.125;
  std::ostringstream out;
  write_feasibility_report(out, report);
  const std::string text = out.str();
  CHECK(text.find("lhs=0.25\n") != std::string::npos);
  CHECK(text.find("rhs=0.5\n") != std::string::npos);
  CHECK(text.find("feasible=true\n") != std::string::npos);
  CHECK(text.find("consistency_bound=0.125\n") != std::string::npos);
}

TEST_CASE("svg plot renders one polyline per estimator") {
  AccuracyReport report;
  for (double axis : {0.0, 1.0, 2.0}) {
    for (const char* est : {"nig_gmm", "ffnn_k"}) {
      AccuracyAggregate agg;
      agg.axis_value = axis;
      agg.estimator = est;
      agg.median = 0.5 + 0.1 * axis;
      agg.iqr_low = agg.median - 0.05;
      agg.iqr_high = agg.median + 0.05;
      agg.cells_ok = 3;
      report.aggregates.push_back(agg);
    }
  }
  std::ostringstream out;
  write_report_svg(out, report, "beta");
  const std::string svg = out.str();
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("nig_gmm") != std::string::npos);
  CHECK(svg.find("ffnn_k") != std::string::npos);
  CHECK(std::count(svg.begin(), svg.end(), '\n') > 10);
  size_t polylines = 0;
  for (size_t pos = svg.find("<polyline"); pos != std::string::npos;
       pos = svg.find("<polyline", pos + 1)) {
    ++polylines;
  }
  CHECK(polylines == 2);
}

}  // TEST_SUITE
