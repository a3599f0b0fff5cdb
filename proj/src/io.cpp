#include "lagnet/io.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace lagnet {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::ostream& full_precision(std::ostream& out) {
  out << std::setprecision(17);
  return out;
}

}  // namespace

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m) {
  full_precision(out);
  for (long r = 0; r < m.rows(); ++r) {
    for (long c = 0; c < m.cols(); ++c) {
      if (c > 0) out << ',';
      out << m(r, c);
    }
    out << '\n';
  }
}

Eigen::MatrixXd read_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    for (const std::string& field : split(line, ',')) row.push_back(std::stod(field));
    if (!rows.empty() && rows.front().size() != row.size()) {
      throw std::invalid_argument("matrix csv: ragged rows");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("matrix csv: empty input");
  Eigen::MatrixXd m(static_cast<long>(rows.size()), static_cast<long>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      m(static_cast<long>(r), static_cast<long>(c)) = rows[r][c];
    }
  }
  return m;
}

void write_trajectory_csv(std::ostream& out, const TimeSeries& ts) {
  out << 't';
  for (int node : ts.observed) out << ",y" << node;
  out << '\n';
  full_precision(out);
  for (long r = 0; r < ts.samples.rows(); ++r) {
    out << r;
    for (long c = 0; c < ts.samples.cols(); ++c) out << ',' << ts.samples(r, c);
    out << '\n';
  }
}

TimeSeries read_trajectory_csv(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw std::invalid_argument("trajectory csv: empty input");
  const std::vector<std::string> names = split(header, ',');
  if (names.empty() || names.front() != "t") {
    throw std::invalid_argument("trajectory csv: header must start with t");
  }
  TimeSeries ts;
  for (std::size_t c = 1; c < names.size(); ++c) {
    if (names[c].size() < 2 || names[c][0] != 'y') {
      throw std::invalid_argument("trajectory csv: bad column name " + names[c]);
    }
    ts.observed.push_back(std::stoi(names[c].substr(1)));
  }
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> fields = split(line, ',');
    if (fields.size() != names.size()) {
      throw std::invalid_argument("trajectory csv: ragged row");
    }
    std::vector<double> row;
    for (std::size_t c = 1; c < fields.size(); ++c) row.push_back(std::stod(fields[c]));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("trajectory csv: no samples");
  ts.samples.resize(static_cast<long>(rows.size()), static_cast<long>(ts.observed.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      ts.samples(static_cast<long>(r), static_cast<long>(c)) = rows[r][c];
    }
  }
  ts.validate();
  return ts;
}

void write_lag_moments(const std::string& directory, const LagMoments& moments) {
  std::filesystem::create_directories(directory);
  for (int k = moments.min_lag; k <= moments.max_lag; ++k) {
    const std::filesystem::path path =
        std::filesystem::path(directory) / ("R_" + std::to_string(k) + ".csv");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("lag moments: cannot open " + path.string());
    write_matrix_csv(out, moments.at(k));
  }
}

void write_features_csv(std::ostream& out, const FeatureSet& fs) {
  const char* prefix = fs.kind == FeatureKind::f ? "f" : fs.kind == FeatureKind::t ? "t" : "k";
  out << "pair_i,pair_j,label";
  for (int d = 0; d < fs.feature_dim(); ++d) out << ',' << prefix << '_' << d;
  out << '\n';
  full_precision(out);
  for (long r = 0; r < fs.pair_count(); ++r) {
    out << fs.pairs[static_cast<std::size_t>(r)].first << ','
        << fs.pairs[static_cast<std::size_t>(r)].second << ',';
    if (!fs.labels.empty()) out << static_cast<int>(fs.labels[static_cast<std::size_t>(r)]);
    for (int d = 0; d < fs.feature_dim(); ++d) out << ',' << fs.features(r, d);
    out << '\n';
  }
}

void write_feasibility_report(std::ostream& out, const FeasibilityReport& report) {
  full_precision(out);
  out << "lhs=" << report.lhs << '\n'
      << "rhs=" << report.rhs << '\n'
      << "feasible=" << (report.feasible ? "true" : "false") << '\n'
      << "osc_error=" << report.osc_error << '\n'
      << "consistency_bound=" << report.consistency_bound << '\n'
      << "error_matrix_dim=" << report.error_matrix.rows() << '\n';
}

void write_report_csv(std::ostream& out, const AccuracyReport& report) {
  out << "axis_value,estimator,seed,accuracy\n";
  full_precision(out);
  for (const AccuracyRow& row : report.rows) {
    out << row.axis_value << ',' << row.estimator << ',' << row.seed_index << ',';
    if (row.error.empty()) {
      out << row.accuracy;
    } else {
      out << "nan";
    }
    out << '\n';
  }
}

AccuracyReport read_report_csv(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw std::invalid_argument("report csv: empty input");
  AccuracyReport report;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> fields = split(line, ',');
    if (fields.size() != 4) throw std::invalid_argument("report csv: ragged row");
    AccuracyRow row;
    row.axis_value = std::stod(fields[0]);
    row.estimator = fields[1];
    row.seed_index = std::stoi(fields[2]);
    row.accuracy = std::stod(fields[3]);
    if (std::isnan(row.accuracy)) row.error = "recorded failure";
    report.rows.push_back(std::move(row));
  }
  // Rebuild aggregates from rows.
  std::map<std::pair<double, std::string>, std::vector<double>> groups;
  for (const AccuracyRow& row : report.rows) {
    if (row.error.empty()) groups[{row.axis_value, row.estimator}].push_back(row.accuracy);
  }
  for (auto& [key, values] : groups) {
    std::sort(values.begin(), values.end());
    AccuracyAggregate agg;
    agg.axis_value = key.first;
    agg.estimator = key.second;
    const auto quantile = [&](double q) {
      const double pos = q * static_cast<double>(values.size() - 1);
      const std::size_t lo = static_cast<std::size_t>(pos);
      const std::size_t hi = std::min(lo + 1, values.size() - 1);
      const double frac = pos - static_cast<double>(lo);
      return values[lo] * (1.0 - frac) + values[hi] * frac;
    };
    agg.median = quantile(0.5);
    agg.iqr_low = quantile(0.25);
    agg.iqr_high = quantile(0.75);
    agg.cells_ok = static_cast<int>(values.size());
    report.aggregates.push_back(std::move(agg));
  }
  return report;
}

void write_report_meta(std::ostream& out, const SweepConfig& cfg, const AccuracyReport& report) {
  nlohmann::json meta;
  meta["version"] = kVersion;
  meta["axis"] = to_string(cfg.axis);
  meta["axis_values"] = cfg.axis_values;
  meta["output_path"] = cfg.output_path;
  nlohmann::json frozen;
  frozen["n_nodes"] = cfg.frozen.n_nodes;
  frozen["connection_p"] = cfg.frozen.connection_p;
  frozen["rho"] = cfg.frozen.rho;
  frozen["observed_count"] = cfg.frozen.observed_count;
  frozen["beta"] = cfg.frozen.beta;
  frozen["jitter"] = cfg.frozen.jitter;
  frozen["sigma_gap_sq"] = cfg.frozen.sigma_gap_sq;
  frozen["sample_count"] = cfg.frozen.sample_count;
  frozen["seeds_per_cell"] = cfg.frozen.seeds_per_cell;
  frozen["estimators"] = cfg.frozen.estimators;
  frozen["min_lag"] = cfg.frozen.min_lag;
  frozen["max_lag"] = cfg.frozen.max_lag;
  frozen["burn_in"] = cfg.frozen.burn_in;
  frozen["master_seed"] = cfg.frozen.master_seed;
  frozen["analytic_moments"] = cfg.frozen.analytic_moments;
  frozen["threads"] = cfg.frozen.threads;
  meta["frozen"] = frozen;
  nlohmann::json cells = nlohmann::json::array();
  for (const AccuracyRow& row : report.rows) {
    nlohmann::json cell;
    cell["axis_value"] = row.axis_value;
    cell["estimator"] = row.estimator;
    cell["seed_index"] = row.seed_index;
    cell["derived_seed"] = row.derived_seed;
    if (row.error.empty()) {
      cell["accuracy"] = row.accuracy;
    } else {
      cell["error"] = row.error;
    }
    cells.push_back(std::move(cell));
  }
  meta["cells"] = cells;
  out << meta.dump(2) << '\n';
}

void write_report_svg(std::ostream& out, const AccuracyReport& report,
                      const std::string& axis_label) {
  if (report.aggregates.empty()) throw std::invalid_argument("svg: no aggregates to plot");
  std::vector<std::string> estimators;
  std::vector<double> axis_values;
  for (const AccuracyAggregate& agg : report.aggregates) {
    if (std::find(estimators.begin(), estimators.end(), agg.estimator) == estimators.end()) {
      estimators.push_back(agg.estimator);
    }
    if (std::find(axis_values.begin(), axis_values.end(), agg.axis_value) == axis_values.end()) {
      axis_values.push_back(agg.axis_value);
    }
  }
  std::sort(axis_values.begin(), axis_values.end());
  const double x_min = axis_values.front();
  const double x_max = axis_values.back();
  const double x_span = x_max > x_min ? x_max - x_min : 1.0;

  const int width = 720;
  const int height = 480;
  const int left = 70;
  const int right = 170;  // legend gutter
  const int top = 30;
  const int bottom = 50;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  const auto x_pos = [&](double v) { return left + (v - x_min) / x_span * plot_w; };
  const auto y_pos = [&](double acc) { return top + (1.0 - acc) * plot_h; };

  static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                  "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  out << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // Axes and gridlines at accuracy 0, .25, .5, .75, 1.
  for (int g = 0; g <= 4; ++g) {
    const double acc = g / 4.0;
    const double y = y_pos(acc);
    out << "  <line x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << (left + plot_w)
        << "\" y2=\"" << y << "\" stroke=\"#dddddd\"/>\n";
    out << "  <text x=\"" << (left - 8) << "\" y=\"" << (y + 4)
        << "\" text-anchor=\"end\" font-size=\"12\">" << acc << "</text>\n";
  }
  for (double v : axis_values) {
    const double x = x_pos(v);
    out << "  <line x1=\"" << x << "\" y1=\"" << (top + plot_h) << "\" x2=\"" << x
        << "\" y2=\"" << (top + plot_h + 5) << "\" stroke=\"black\"/>\n";
    out << "  <text x=\"" << x << "\" y=\"" << (top + plot_h + 20)
        << "\" text-anchor=\"middle\" font-size=\"12\">" << v << "</text>\n";
  }
  out << "  <line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
      << (top + plot_h) << "\" stroke=\"black\"/>\n";
  out << "  <line x1=\"" << left << "\" y1=\"" << (top + plot_h) << "\" x2=\""
      << (left + plot_w) << "\" y2=\"" << (top + plot_h) << "\" stroke=\"black\"/>\n";
  out << "  <text x=\"" << (left + plot_w / 2) << "\" y=\"" << (height - 12)
      << "\" text-anchor=\"middle\" font-size=\"13\">" << axis_label << "</text>\n";
  out << "  <text x=\"18\" y=\"" << (top + plot_h / 2)
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
      << (top + plot_h / 2) << ")\">accuracy</text>\n";

  for (std::size_t e = 0; e < estimators.size(); ++e) {
    const std::string& name = estimators[e];
    const char* color = palette[e % 8];
    out << "  <polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (double v : axis_values) {
      for (const AccuracyAggregate& agg : report.aggregates) {
        if (agg.estimator == name && agg.axis_value == v) {
          out << x_pos(v) << ',' << y_pos(agg.median) << ' ';
        }
      }
    }
    out << "\"/>\n";
    const double ly = top + 16 + 18 * static_cast<double>(e);
    out << "  <line x1=\"" << (left + plot_w + 12) << "\" y1=\"" << ly << "\" x2=\""
        << (left + plot_w + 34) << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    out << "  <text x=\"" << (left + plot_w + 40) << "\" y=\"" << (ly + 4)
        << "\" font-size=\"12\">" << name << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace lagnet
