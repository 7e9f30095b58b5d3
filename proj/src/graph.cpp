#include "coopreg/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include <Eigen/Eigenvalues>

#include "coopreg/error.hpp"

namespace coopreg {

DiGraph::DiGraph(int n_nodes, std::vector<Edge> edges)
    : n_(n_nodes), edges_(std::move(edges)) {
  if (n_ <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "graph needs at least one node");
  }
  for (const auto& [from, to] : edges_) {
    if (from < 0 || from >= n_ || to < 0 || to >= n_) {
      throw Error(ErrorCode::kInvalidArgument,
                  "edge (" + std::to_string(from) + "," + std::to_string(to) +
                      ") references a node outside 0.." +
                      std::to_string(n_ - 1));
    }
    if (from == to) {
      throw Error(ErrorCode::kInvalidArgument,
                  "self-loop on node " + std::to_string(from));
    }
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

DiGraph DiGraph::undirected_path(int n) {
  std::vector<Edge> e;
  for (int k = 0; k + 1 < n; ++k) {
    e.emplace_back(k, k + 1);
    e.emplace_back(k + 1, k);
  }
  return DiGraph(n, std::move(e));
}

DiGraph DiGraph::undirected_cycle(int n) {
  std::vector<Edge> e;
  for (int k = 0; k < n; ++k) {
    const int next = (k + 1) % n;
    if (next == k) continue;
    e.emplace_back(k, next);
    e.emplace_back(next, k);
  }
  return DiGraph(n, std::move(e));
}

DiGraph DiGraph::directed_cycle(int n) {
  std::vector<Edge> e;
  for (int k = 0; k < n; ++k) {
    const int next = (k + 1) % n;
    if (next != k) e.emplace_back(k, next);
  }
  return DiGraph(n, std::move(e));
}

DiGraph DiGraph::complete(int n) {
  std::vector<Edge> e;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      if (j != k) e.emplace_back(j, k);
  return DiGraph(n, std::move(e));
}

bool DiGraph::has_edge(int from, int to) const {
  return std::binary_search(edges_.begin(), edges_.end(), Edge{from, to});
}

std::vector<int> DiGraph::neighbors(int k) const {
  std::vector<int> out;
  for (const auto& [from, to] : edges_)
    if (to == k) out.push_back(from);
  std::sort(out.begin(), out.end());
  return out;
}

bool DiGraph::is_undirected() const {
  return std::all_of(edges_.begin(), edges_.end(), [this](const Edge& e) {
    return has_edge(e.second, e.first);
  });
}

bool DiGraph::operator==(const DiGraph& other) const {
  return n_ == other.n_ && edges_ == other.edges_;
}

Eigen::MatrixXd adjacency(const DiGraph& g) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(g.n_nodes(), g.n_nodes());
  for (const auto& [from, to] : g.edges()) a(to, from) = 1.0;
  return a;
}

Eigen::MatrixXd laplacian(const DiGraph& g) {
  const Eigen::MatrixXd a = adjacency(g);
  Eigen::MatrixXd l = -a;
  l.diagonal() += a.rowwise().sum();
  return l;
}

DiGraph remove_incoming(const DiGraph& g, int node) {
  if (node < 0 || node >= g.n_nodes()) {
    throw Error(ErrorCode::kInvalidArgument, "node out of range");
  }
  std::vector<DiGraph::Edge> kept;
  for (int k = 0; k < g.n_nodes(); ++k) {
    if (k == node) continue;
    for (int j : g.neighbors(k)) kept.emplace_back(j, k);
  }
  return DiGraph(g.n_nodes(), kept);
}

bool has_spanning_tree_rooted_at(const DiGraph& g, int root) {
  if (root < 0 || root >= g.n_nodes()) {
    throw Error(ErrorCode::kInvalidArgument, "root out of range");
  }
  std::vector<std::vector<int>> out(g.n_nodes());
  for (const auto& [from, to] : g.edges()) out[from].push_back(to);
  std::vector<bool> seen(g.n_nodes(), false);
  std::queue<int> frontier;
  frontier.push(root);
  seen[root] = true;
  int reached = 1;
  while (!frontier.empty()) {
    const int v = frontier.front();
    frontier.pop();
    for (int w : out[v]) {
      if (!seen[w]) {
        seen[w] = true;
        ++reached;
        frontier.push(w);
      }
    }
  }
  return reached == g.n_nodes();
}

bool is_strongly_connected(const DiGraph& g) {
  for (int r = 0; r < g.n_nodes(); ++r)
    if (!has_spanning_tree_rooted_at(g, r)) return false;
  return true;
}

bool is_connected(const DiGraph& g) {
  for (int r = 0; r < g.n_nodes(); ++r)
    if (has_spanning_tree_rooted_at(g, r)) return true;
  return false;
}

std::vector<std::complex<double>> LaplacianSpectrum::nonzero() const {
  return {eigenvalues.begin() + 1, eigenvalues.end()};
}

std::vector<std::complex<double>> LaplacianSpectrum::nonzero_up_to_conjugation()
    const {
  std::vector<std::complex<double>> out;
  for (std::size_t i = 1; i < eigenvalues.size(); ++i)
    if (eigenvalues[i].imag() >= 0.0) out.push_back(eigenvalues[i]);
  return out;
}

LaplacianSpectrum laplacian_spectrum(const DiGraph& g, double tol) {
  if (!is_connected(g)) {
    throw Error(ErrorCode::kNotConnected,
                "graph has no directed spanning tree");
  }
  const Eigen::MatrixXd l = laplacian(g);
  if (tol < 0.0) tol = 1e-9 * (1.0 + l.norm());

  Eigen::EigenSolver<Eigen::MatrixXd> es(l, /*computeEigenvectors=*/false);
  std::vector<std::complex<double>> ev(es.eigenvalues().data(),
                                       es.eigenvalues().data() + l.rows());

  const auto zeros = std::count_if(ev.begin(), ev.end(), [tol](auto z) {
    return std::abs(z) <= tol;
  });
  if (zeros > 1) {
    throw Error(ErrorCode::kZeroEigenvalueMultiple,
                std::to_string(zeros) + " eigenvalues within " +
                    std::to_string(tol) + " of zero");
  }
  auto zero_it = std::min_element(ev.begin(), ev.end(), [](auto a, auto b) {
    return std::abs(a) < std::abs(b);
  });
  if (std::abs(*zero_it) > tol) {
    throw Error(ErrorCode::kNumericalFailure,
                "Laplacian has no eigenvalue within tolerance of zero");
  }
  ev.erase(zero_it);

  // Canonicalize: snap tiny imaginary parts, make pairs exact conjugates.
  for (auto& z : ev)
    if (std::abs(z.imag()) <= tol) z = {z.real(), 0.0};
  std::sort(ev.begin(), ev.end(), [](auto a, auto b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return std::abs(a.imag()) < std::abs(b.imag());
  });
  std::vector<std::complex<double>> rest;
  std::vector<bool> used(ev.size(), false);
  for (std::size_t i = 0; i < ev.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    if (ev[i].imag() == 0.0) {
      rest.push_back(ev[i]);
      continue;
    }
    // Find the conjugate partner closest to conj(ev[i]).
    std::size_t best = ev.size();
    double best_d = 0.0;
    for (std::size_t j = i + 1; j < ev.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(ev[j] - std::conj(ev[i]));
      if (best == ev.size() || d < best_d) {
        best = j;
        best_d = d;
      }
    }
    if (best == ev.size() || best_d > 1e3 * tol) {
      throw Error(ErrorCode::kNumericalFailure,
                  "unpaired complex Laplacian eigenvalue");
    }
    used[best] = true;
    const double re = 0.5 * (ev[i].real() + ev[best].real());
    const double im = 0.5 * (std::abs(ev[i].imag()) + std::abs(ev[best].imag()));
    rest.emplace_back(re, im);
    rest.emplace_back(re, -im);
  }
  std::stable_sort(rest.begin(), rest.end(), [](auto a, auto b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return std::abs(a.imag()) < std::abs(b.imag());
  });

  LaplacianSpectrum spec;
  spec.eigenvalues.reserve(rest.size() + 1);
  spec.eigenvalues.emplace_back(0.0, 0.0);
  spec.eigenvalues.insert(spec.eigenvalues.end(), rest.begin(), rest.end());
  return spec;
}

}  // namespace coopreg
