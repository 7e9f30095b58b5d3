#include "coopreg/kernels.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace coopreg::kernels {

std::vector<double> logspace(double lo_exp10, double hi_exp10, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = std::pow(10.0, lo_exp10);
    return out;
  }
  const double step = (hi_exp10 - lo_exp10) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = std::pow(10.0, lo_exp10 + step * static_cast<double>(i));
  return out;
}

PeakGain peak_gain_serial(const StateSpace& ss,
                          std::span<const double> omegas) {
  PeakGain best;
  bool first = true;
  for (double w : omegas) {
    const double s = sigma_max_at(ss, w);
    if (first || s > best.value) {
      best = {s, w};
      first = false;
    }
  }
  return best;
}

PeakGain peak_gain_omp(const StateSpace& ss, std::span<const double> omegas) {
  const auto n = static_cast<std::ptrdiff_t>(omegas.size());
  std::vector<double> values(omegas.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) values[i] = sigma_max_at(ss, omegas[i]);

  // Serial reduction keeps the smallest-index tie rule of the reference.
  PeakGain best;
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    if (i == 0 || values[i] > best.value) best = {values[i], omegas[i]};
  }
  return best;
}

namespace {

Eigen::MatrixXd whiten(const Eigen::LLT<Eigen::MatrixXd>& chol,
                       const Eigen::MatrixXd& d) {
  const auto l = chol.matrixL();
  const Eigen::MatrixXd half = l.solve(d);  // L^-1 D
  return l.solve(half.transpose());          // L^-1 (L^-1 D)^T, D symmetric
}

}  // namespace

WhitenedGram whitened_gram_serial(const Eigen::LLT<Eigen::MatrixXd>& chol,
                                  std::span<const Eigen::MatrixXd> directions) {
  const auto m = static_cast<Eigen::Index>(directions.size());
  std::vector<Eigen::MatrixXd> w(directions.size());
  for (Eigen::Index a = 0; a < m; ++a) w[a] = whiten(chol, directions[a]);

  WhitenedGram out{Eigen::MatrixXd(m, m), Eigen::VectorXd(m)};
  for (Eigen::Index a = 0; a < m; ++a) {
    out.trace(a) = w[a].trace();
    for (Eigen::Index b = 0; b <= a; ++b) {
      const double v = w[a].cwiseProduct(w[b]).sum();
      out.gram(a, b) = v;
      out.gram(b, a) = v;
    }
  }
  return out;
}

WhitenedGram whitened_gram_omp(const Eigen::LLT<Eigen::MatrixXd>& chol,
                               std::span<const Eigen::MatrixXd> directions) {
  const auto m = static_cast<Eigen::Index>(directions.size());
  std::vector<Eigen::MatrixXd> w(directions.size());
#pragma omp parallel for schedule(static)
  for (Eigen::Index a = 0; a < m; ++a) w[a] = whiten(chol, directions[a]);

  WhitenedGram out{Eigen::MatrixXd(m, m), Eigen::VectorXd(m)};
#pragma omp parallel for schedule(dynamic)
  for (Eigen::Index a = 0; a < m; ++a) {
    out.trace(a) = w[a].trace();
    for (Eigen::Index b = 0; b <= a; ++b) {
      const double v = w[a].cwiseProduct(w[b]).sum();
      out.gram(a, b) = v;
      out.gram(b, a) = v;
    }
  }
  return out;
}

}  // namespace coopreg::kernels
