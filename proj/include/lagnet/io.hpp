#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>

#include "lagnet/estimators.hpp"
#include "lagnet/experiments.hpp"
#include "lagnet/features.hpp"
#include "lagnet/lag_moments.hpp"
#include "lagnet/simulate.hpp"

namespace lagnet {

constexpr const char* kVersion = "0.1.0";

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_csv(std::istream& in);

/// Trajectory CSV: header "t,y<i>,...", one row per time step. Column names
/// carry the observed node ids, so a restricted series round-trips.
void write_trajectory_csv(std::ostream& out, const TimeSeries& ts);
TimeSeries read_trajectory_csv(std::istream& in);

/// One CSV per lag, named R_<k>.csv, under the given directory.
void write_lag_moments(const std::string& directory, const LagMoments& moments);

/// Feature export: pair_i, pair_j, label (blank when unlabeled), then one
/// column per feature dimension.
void write_features_csv(std::ostream& out, const FeatureSet& fs);

/// Flat key=value record of the scalar feasibility fields.
void write_feasibility_report(std::ostream& out, const FeasibilityReport& report);

void write_report_csv(std::ostream& out, const AccuracyReport& report);
AccuracyReport read_report_csv(std::istream& in);

/// Run manifest: every parameter, derived seeds, failures, toolkit version.
void write_report_meta(std::ostream& out, const SweepConfig& cfg, const AccuracyReport& report);

/// Median-accuracy line plot, one polyline per estimator.
void write_report_svg(std::ostream& out, const AccuracyReport& report,
                      const std::string& axis_label);

}  // namespace lagnet
