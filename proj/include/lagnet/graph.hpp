#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace lagnet {

using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Undirected simple graph as a dense symmetric adjacency matrix.
struct Graph {
  int node_count = 0;
  BoolMatrix adjacency;  // symmetric, false diagonal

  int degree(int i) const;
  int max_degree() const;
  long edge_count() const;
  bool is_connected() const;
  void validate() const;
};

/// Coupling matrix A = rho * A_bar with A_bar row-stochastic, symmetric and
/// nonnegative, so the spectral radius equals rho < 1 and the system is
/// stable. a_plus_min is the smallest nonzero off-diagonal entry; it is
/// +infinity when the support has no edges. rho = 0 encodes the decoupled
/// (zero-matrix) edge case.
struct InteractionMatrix {
  Eigen::MatrixXd entries;
  double rho = 0.0;
  double a_plus_min = std::numeric_limits<double>::infinity();
  Graph support;

  int dimension() const { return static_cast<int>(entries.rows()); }
  static InteractionMatrix zero(int n_nodes);
  void validate(double tol = 1e-10) const;
};

/// Each unordered pair is connected independently with probability p.
Graph erdos_renyi(int n_nodes, double p, std::uint64_t seed);

/// Ring lattice (ring_degree/2 neighbors per side) with per-edge rewiring.
/// The rewiring variant preserves the edge count n * ring_degree / 2 exactly;
/// connectedness is not guaranteed (query is_connected()).
Graph watts_strogatz(int n_nodes, int ring_degree, double rewire_p, std::uint64_t seed);

/// Parses whitespace-separated "i j" lines with 0-based ids. Blank lines and
/// lines starting with '#' are ignored; duplicate edges collapse. Malformed
/// lines, negative ids, self-loops and edge-free input are errors.
Graph load_edge_list(std::istream& source);
Graph parse_edge_list(const std::string& text);
void write_edge_list(std::ostream& out, const Graph& g);

/// Laplacian rule: A_bar = I - L / (d_max + 1), A = rho * A_bar. Guarantees
/// symmetry, nonnegativity, unit row sums of A_bar and a strictly positive
/// diagonal; isolated nodes get A_bar row e_i.
InteractionMatrix laplacian_weights(const Graph& g, double rho);

}  // namespace lagnet
