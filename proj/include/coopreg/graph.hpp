#pragma once

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace coopreg {

// Directed communication graph. Nodes are 0-based in the API; an edge
// (from, to) means information flows from node `from` to node `to`.
class DiGraph {
 public:
  using Edge = std::pair<int, int>;

  DiGraph(int n_nodes, std::vector<Edge> edges);

  // Path 0-1-...-(n-1) with edges in both directions.
  static DiGraph undirected_path(int n);
  // Cycle with edges in both directions.
  static DiGraph undirected_cycle(int n);
  // Cycle 0 -> 1 -> ... -> n-1 -> 0.
  static DiGraph directed_cycle(int n);
  static DiGraph complete(int n);

  int n_nodes() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  bool has_edge(int from, int to) const;

  // N_k: nodes j with an edge j -> k, ascending.
  std::vector<int> neighbors(int k) const;

  // True when every edge (j,k) has its reverse (k,j).
  bool is_undirected() const;

  bool operator==(const DiGraph& other) const;

 private:
  int n_;
  std::vector<Edge> edges_;  // sorted, unique
};

// A[k][j] = 1 iff (j,k) is an edge.
Eigen::MatrixXd adjacency(const DiGraph& g);

// diag(A 1) - A.
Eigen::MatrixXd laplacian(const DiGraph& g);

// The same nodes without the edges that end at `node`.
DiGraph remove_incoming(const DiGraph& g, int node);

bool has_spanning_tree_rooted_at(const DiGraph& g, int root);
bool is_strongly_connected(const DiGraph& g);
// A spanning tree exists for some root.
bool is_connected(const DiGraph& g);

struct LaplacianSpectrum {
  // eigenvalues[0] is the zero eigenvalue (stored as exactly 0); the rest are
  // ordered by real part, then |imag|, with the positive-imaginary member of
  // each conjugate pair first. Pairs are exact conjugates.
  std::vector<std::complex<double>> eigenvalues;

  std::vector<std::complex<double>> nonzero() const;
  // Nonzero eigenvalues with Im >= 0 only (one representative per pair).
  std::vector<std::complex<double>> nonzero_up_to_conjugation() const;
};

// Throws Error(kNotConnected) or Error(kZeroEigenvalueMultiple). A negative
// tol selects the default 1e-9 * (1 + ||L||).
LaplacianSpectrum laplacian_spectrum(const DiGraph& g, double tol = -1.0);

}  // namespace coopreg
