#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "coopreg/state_space.hpp"

// Data-parallel inner loops. Every kernel has an OpenMP version (used by the
// library) and a serial reference with identical semantics, kept for tests
// and the benchmark. Results are deterministic regardless of thread count.
namespace coopreg::kernels {

std::vector<double> logspace(double lo_exp10, double hi_exp10, std::size_t n);

struct PeakGain {
  double value = 0.0;
  double omega = 0.0;
};

// max over the grid of sigma_max(G(j omega)); ties resolved to the smallest
// grid index.
PeakGain peak_gain_serial(const StateSpace& ss, std::span<const double> omegas);
PeakGain peak_gain_omp(const StateSpace& ss, std::span<const double> omegas);

// For a positive definite G = L L^T and symmetric directions D_a, forms the
// whitened W_a = L^-1 D_a L^-T and returns gram(a,b) = <W_a, W_b>_F and
// trace(a) = tr(W_a). This is the Hessian/gradient core of the log-det barrier.
struct WhitenedGram {
  Eigen::MatrixXd gram;
  Eigen::VectorXd trace;
};
WhitenedGram whitened_gram_serial(const Eigen::LLT<Eigen::MatrixXd>& chol,
                                  std::span<const Eigen::MatrixXd> directions);
WhitenedGram whitened_gram_omp(const Eigen::LLT<Eigen::MatrixXd>& chol,
                               std::span<const Eigen::MatrixXd> directions);

}  // namespace coopreg::kernels
