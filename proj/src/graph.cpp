#include "lagnet/graph.hpp"

#include <deque>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "lagnet/random.hpp"

namespace lagnet {

int Graph::degree(int i) const {
  int d = 0;
  for (int j = 0; j < node_count; ++j) {
    if (adjacency(i, j)) ++d;
  }
  return d;
}

int Graph::max_degree() const {
  int d = 0;
  for (int i = 0; i < node_count; ++i) d = std::max(d, degree(i));
  return d;
}

long Graph::edge_count() const {
  long e = 0;
  for (int i = 0; i < node_count; ++i) {
    for (int j = i + 1; j < node_count; ++j) {
      if (adjacency(i, j)) ++e;
    }
  }
  return e;
}

bool Graph::is_connected() const {
  if (node_count == 0) return false;
  std::vector<bool> seen(node_count, false);
  std::deque<int> queue{0};
  seen[0] = true;
  int reached = 1;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v = 0; v < node_count; ++v) {
      if (adjacency(u, v) && !seen[v]) {
        seen[v] = true;
        ++reached;
        queue.push_back(v);
      }
    }
  }
  return reached == node_count;
}

void Graph::validate() const {
  if (node_count < 1) throw std::invalid_argument("graph: node_count must be positive");
  if (adjacency.rows() != node_count || adjacency.cols() != node_count) {
    throw std::invalid_argument("graph: adjacency shape mismatch");
  }
  for (int i = 0; i < node_count; ++i) {
    if (adjacency(i, i)) throw std::invalid_argument("graph: self-loop on the diagonal");
    for (int j = i + 1; j < node_count; ++j) {
      if (adjacency(i, j) != adjacency(j, i)) {
        throw std::invalid_argument("graph: adjacency not symmetric");
      }
    }
  }
}

InteractionMatrix InteractionMatrix::zero(int n_nodes) {
  if (n_nodes < 1) throw std::invalid_argument("zero: n_nodes must be positive");
  InteractionMatrix a;
  a.entries = Eigen::MatrixXd::Zero(n_nodes, n_nodes);
  a.rho = 0.0;
  a.a_plus_min = std::numeric_limits<double>::infinity();
  a.support.node_count = n_nodes;
  a.support.adjacency = BoolMatrix::Constant(n_nodes, n_nodes, false);
  return a;
}

void InteractionMatrix::validate(double tol) const {
  const int n = dimension();
  if (n < 1 || entries.cols() != n) throw std::invalid_argument("interaction: not square");
  if (rho < 0.0 || rho >= 1.0) throw std::invalid_argument("interaction: rho outside [0, 1)");
  support.validate();
  if (support.node_count != n) throw std::invalid_argument("interaction: support size mismatch");
  double min_nonzero = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j < n; ++j) {
      const double v = entries(i, j);
      if (v < 0.0) throw std::invalid_argument("interaction: negative entry");
      if (std::abs(v - entries(j, i)) > tol) {
        throw std::invalid_argument("interaction: not symmetric");
      }
      if (i != j) {
        const bool nonzero = v != 0.0;
        if (nonzero != support.adjacency(i, j)) {
          throw std::invalid_argument("interaction: support mismatch");
        }
        if (nonzero) min_nonzero = std::min(min_nonzero, v);
      }
      row_sum += v;
    }
    if (std::abs(row_sum - rho) > tol) {
      throw std::invalid_argument("interaction: row sum differs from rho");
    }
  }
  if (min_nonzero != a_plus_min &&
      !(std::isinf(a_plus_min) && std::isinf(min_nonzero))) {
    throw std::invalid_argument("interaction: a_plus_min mismatch");
  }
}

Graph erdos_renyi(int n_nodes, double p, std::uint64_t seed) {
  if (n_nodes < 2) throw std::invalid_argument("erdos_renyi: need at least 2 nodes");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("erdos_renyi: p outside [0, 1]");
  Graph g;
  g.node_count = n_nodes;
  g.adjacency = BoolMatrix::Constant(n_nodes, n_nodes, false);
  Rng rng(seed);
  for (int i = 0; i < n_nodes; ++i) {
    for (int j = i + 1; j < n_nodes; ++j) {
      if (rng.uniform01() < p) {
        g.adjacency(i, j) = true;
        g.adjacency(j, i) = true;
      }
    }
  }
  return g;
}

Graph watts_strogatz(int n_nodes, int ring_degree, double rewire_p, std::uint64_t seed) {
  if (n_nodes < 2) throw std::invalid_argument("watts_strogatz: need at least 2 nodes");
  if (ring_degree <= 0 || ring_degree % 2 != 0) {
    throw std::invalid_argument("watts_strogatz: ring_degree must be even and positive");
  }
  if (ring_degree >= n_nodes) {
    throw std::invalid_argument("watts_strogatz: ring_degree must be below n_nodes");
  }
  if (!(rewire_p >= 0.0 && rewire_p <= 1.0)) {
    throw std::invalid_argument("watts_strogatz: rewire_p outside [0, 1]");
  }
  Graph g;
  g.node_count = n_nodes;
  g.adjacency = BoolMatrix::Constant(n_nodes, n_nodes, false);
  const int half = ring_degree / 2;
  for (int i = 0; i < n_nodes; ++i) {
    for (int h = 1; h <= half; ++h) {
      const int j = (i + h) % n_nodes;
      g.adjacency(i, j) = true;
      g.adjacency(j, i) = true;
    }
  }
  // Rewire each lattice edge (i, i+h) with probability rewire_p to a fresh
  // target; an edge is kept when no valid target remains, so the edge count
  // stays n * ring_degree / 2.
  Rng rng(seed);
  for (int i = 0; i < n_nodes; ++i) {
    for (int h = 1; h <= half; ++h) {
      const int j = (i + h) % n_nodes;
      if (rng.uniform01() >= rewire_p) continue;
      if (g.degree(i) == n_nodes - 1) continue;  // saturated, keep the edge
      int target;
      do {
        target = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_nodes)));
      } while (target == i || g.adjacency(i, target));
      g.adjacency(i, j) = false;
      g.adjacency(j, i) = false;
      g.adjacency(i, target) = true;
      g.adjacency(target, i) = true;
    }
  }
  return g;
}

Graph load_edge_list(std::istream& source) {
  std::vector<std::pair<int, int>> edges;
  int max_id = -1;
  std::string line;
  long line_no = 0;
  while (std::getline(source, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    long i = 0;
    long j = 0;
    std::string extra;
    if (!(fields >> i >> j) || (fields >> extra)) {
      throw std::invalid_argument("edge list: malformed line " + std::to_string(line_no) +
                                  ": \"" + line + "\"");
    }
    if (i < 0 || j < 0) {
      throw std::invalid_argument("edge list: negative node id on line " +
                                  std::to_string(line_no));
    }
    if (i == j) {
      throw std::invalid_argument("edge list: self-loop " + std::to_string(i) + " " +
                                  std::to_string(j) + " on line " + std::to_string(line_no));
    }
    edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
    max_id = std::max(max_id, static_cast<int>(std::max(i, j)));
  }
  if (edges.empty()) throw std::invalid_argument("edge list: no edges");
  Graph g;
  g.node_count = max_id + 1;
  g.adjacency = BoolMatrix::Constant(g.node_count, g.node_count, false);
  for (const auto& [i, j] : edges) {
    g.adjacency(i, j) = true;
    g.adjacency(j, i) = true;
  }
  return g;
}

Graph parse_edge_list(const std::string& text) {
  std::istringstream in(text);
  return load_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  for (int i = 0; i < g.node_count; ++i) {
    for (int j = i + 1; j < g.node_count; ++j) {
      if (g.adjacency(i, j)) out << i << ' ' << j << '\n';
    }
  }
}

InteractionMatrix laplacian_weights(const Graph& g, double rho) {
  g.validate();
  if (!(rho > 0.0 && rho < 1.0)) {
    throw std::invalid_argument("laplacian_weights: rho outside (0, 1)");
  }
  const int n = g.node_count;
  const double w = rho / (g.max_degree() + 1);
  InteractionMatrix a;
  a.entries = Eigen::MatrixXd::Zero(n, n);
  bool any_edge = false;
  for (int i = 0; i < n; ++i) {
    int deg = 0;
    for (int j = 0; j < n; ++j) {
      if (g.adjacency(i, j)) {
        a.entries(i, j) = w;
        ++deg;
        any_edge = true;
      }
    }
    a.entries(i, i) = rho - deg * w;
  }
  a.rho = rho;
  a.a_plus_min = any_edge ? w : std::numeric_limits<double>::infinity();
  a.support = g;
  return a;
}

}  // namespace lagnet
