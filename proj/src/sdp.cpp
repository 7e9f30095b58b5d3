#include "coopreg/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>

#include "coopreg/error.hpp"
#include "coopreg/kernels.hpp"

namespace coopreg {

using Eigen::MatrixXd;
using Eigen::VectorXd;

int SdpProblem::add_symmetric(std::string name, int n) {
  if (n <= 0) throw Error(ErrorCode::kInvalidArgument, "variable size must be positive");
  variables_.push_back({std::move(name), true, n, n});
  return static_cast<int>(variables_.size()) - 1;
}

int SdpProblem::add_general(std::string name, int rows, int cols) {
  if (rows < 0 || cols < 0) {
    throw Error(ErrorCode::kInvalidArgument, "variable size must be nonnegative");
  }
  variables_.push_back({std::move(name), false, rows, cols});
  return static_cast<int>(variables_.size()) - 1;
}

void SdpProblem::add_constraint(std::string label, int dim, Expression f) {
  if (dim <= 0) throw Error(ErrorCode::kInvalidArgument, "constraint size must be positive");
  constraints_.push_back({std::move(label), dim, std::move(f)});
}

int SdpProblem::n_scalars() const {
  int total = 0;
  for (const auto& v : variables_)
    total += v.symmetric ? v.rows * (v.rows + 1) / 2 : v.rows * v.cols;
  return total;
}

Assignment SdpProblem::unpack(const VectorXd& x) const {
  std::vector<MatrixXd> values;
  values.reserve(variables_.size());
  Eigen::Index pos = 0;
  for (const auto& v : variables_) {
    MatrixXd m(v.rows, v.cols);
    if (v.symmetric) {
      for (int j = 0; j < v.cols; ++j) {
        for (int i = 0; i <= j; ++i) {
          m(i, j) = x(pos);
          m(j, i) = x(pos);
          ++pos;
        }
      }
    } else {
      for (int j = 0; j < v.cols; ++j)
        for (int i = 0; i < v.rows; ++i) m(i, j) = x(pos++);
    }
    values.push_back(std::move(m));
  }
  return Assignment(std::move(values));
}

const MatrixXd& SdpSolution::value(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return values[i];
  throw Error(ErrorCode::kInvalidArgument, "no variable named " + name);
}

MatrixXd realify(const Eigen::MatrixXcd& h) {
  const auto n = h.rows();
  MatrixXd out(2 * n, 2 * n);
  out << h.real(), -h.imag(), h.imag(), h.real();
  return out;
}

double max_eigenvalue(const MatrixXd& sym) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (sym + sym.transpose()),
                                             Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

namespace {

// Constraint i as F0 + sum_j x_j F_j.
struct AffineMap {
  MatrixXd f0;
  std::vector<MatrixXd> fj;

  MatrixXd at(const VectorXd& x) const {
    MatrixXd out = f0;
    for (std::size_t j = 0; j < fj.size(); ++j) out += x(j) * fj[j];
    return out;
  }
};

std::vector<AffineMap> linearize(const SdpProblem& problem, double* data_norm) {
  const int m = problem.n_scalars();
  std::vector<AffineMap> maps;
  *data_norm = 0.0;
  const VectorXd zero = VectorXd::Zero(m);
  const Assignment at_zero = problem.unpack(zero);
  for (const auto& c : problem.constraints()) {
    AffineMap map;
    map.f0 = c.f(at_zero);
    if (map.f0.rows() != c.dim || map.f0.cols() != c.dim) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "constraint '" + c.label + "' returned a matrix of the wrong size");
    }
    map.fj.reserve(m);
    VectorXd e = zero;
    for (int j = 0; j < m; ++j) {
      e(j) = 1.0;
      map.fj.push_back(c.f(problem.unpack(e)) - map.f0);
      e(j) = 0.0;
    }
    double scale = map.f0.norm();
    for (const auto& f : map.fj) scale = std::max(scale, f.norm());
    *data_norm = std::max(*data_norm, scale);

    // Affinity and symmetry spot check at a random point.
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    VectorXd probe(m);
    for (int j = 0; j < m; ++j) probe(j) = u(rng);
    const MatrixXd direct = c.f(problem.unpack(probe));
    const double tol = 1e-9 * (1.0 + scale * (1.0 + m));
    if ((direct - map.at(probe)).norm() > tol) {
      throw Error(ErrorCode::kInvalidArgument,
                  "constraint '" + c.label + "' is not affine in the variables");
    }
    if ((direct - direct.transpose()).norm() > tol) {
      throw Error(ErrorCode::kInvalidArgument,
                  "constraint '" + c.label + "' is not symmetric");
    }
    for (auto& f : map.fj) f = 0.5 * (f + f.transpose());
    map.f0 = 0.5 * (map.f0 + map.f0.transpose());
    maps.push_back(std::move(map));
  }
  return maps;
}

double worst_eigenvalue(const std::vector<AffineMap>& maps, const VectorXd& x) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& map : maps) worst = std::max(worst, max_eigenvalue(map.at(x)));
  return worst;
}

// Barrier state for the epigraph variable z = (x, t) with slack
// S_i = (t - margin) I - F_i(x).
class Barrier {
 public:
  Barrier(const std::vector<AffineMap>& maps, double margin, double radius,
          bool parallel)
      : maps_(maps), margin_(margin), r2_(radius * radius), parallel_(parallel) {
    for (const auto& m : maps_) total_dim_ += m.f0.rows();
  }

  int total_dim() const { return total_dim_; }

  // Barrier value (without the tau t term); +inf outside the domain.
  double value(const VectorXd& x, double t) const {
    const double s = r2_ - x.squaredNorm();
    if (!(s > 0.0)) return std::numeric_limits<double>::infinity();
    double phi = -std::log(s);
    for (const auto& map : maps_) {
      Eigen::LLT<MatrixXd> llt(slack(map, x, t));
      if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
      phi -= 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    }
    return phi;
  }

  // Gradient and Hessian of the barrier in (x, t).
  void derivatives(const VectorXd& x, double t, VectorXd* grad,
                   MatrixXd* hess) const {
    const auto m = x.size();
    grad->setZero(m + 1);
    hess->setZero(m + 1, m + 1);
    for (const auto& map : maps_) {
      Eigen::LLT<MatrixXd> llt(slack(map, x, t));
      if (llt.info() != Eigen::Success) {
        throw Error(ErrorCode::kNumericalFailure, "barrier left its domain");
      }
      std::vector<MatrixXd> dirs;
      dirs.reserve(m + 1);
      for (const auto& f : map.fj) dirs.push_back(-f);
      dirs.push_back(MatrixXd::Identity(map.f0.rows(), map.f0.cols()));
      const kernels::WhitenedGram wg =
          parallel_ ? kernels::whitened_gram_omp(llt, dirs)
                    : kernels::whitened_gram_serial(llt, dirs);
      *grad -= wg.trace;
      *hess += wg.gram;
    }
    const double s = r2_ - x.squaredNorm();
    grad->head(m) += 2.0 * x / s;
    hess->topLeftCorner(m, m) += (2.0 / s) * MatrixXd::Identity(m, m) +
                                 (4.0 / (s * s)) * x * x.transpose();
  }

 private:
  MatrixXd slack(const AffineMap& map, const VectorXd& x, double t) const {
    MatrixXd s = -map.at(x);
    s.diagonal().array() += t - margin_;
    return s;
  }

  const std::vector<AffineMap>& maps_;
  double margin_;
  double r2_;
  bool parallel_;
  int total_dim_ = 0;
};

}  // namespace

SdpSolution solve_feasibility(const SdpProblem& problem, const SdpOptions& options) {
  if (problem.constraints().empty()) {
    throw Error(ErrorCode::kInvalidArgument, "SDP has no constraints");
  }
  double data_norm = 0.0;
  const std::vector<AffineMap> maps = linearize(problem, &data_norm);
  const double margin =
      problem.margin() > 0.0 ? problem.margin() : 1e-8 * (1.0 + data_norm);
  const int m = problem.n_scalars();

  SdpSolution sol;
  sol.margin = margin;
  for (const auto& v : problem.variables()) sol.names.push_back(v.name);

  auto finish = [&](const VectorXd& x) {
    const Assignment a = problem.unpack(x);
    sol.values = a.values();
    sol.certified_margin = -worst_eigenvalue(maps, x);
    return sol;
  };

  VectorXd x = VectorXd::Zero(m);
  double worst = worst_eigenvalue(maps, x);
  if (worst <= -margin) return finish(x);

  const Barrier barrier(maps, margin, options.ball_radius, options.parallel);
  const double nu = barrier.total_dim() + 1.0;
  // Epigraph variable t bounds every F_i(x) + margin I from above.
  double t = worst + margin + 1.0 + std::abs(worst);
  double tau = nu / (1.0 + std::abs(worst));
  double best = worst;

  VectorXd grad;
  MatrixXd hess;
  for (int outer = 0; outer < options.max_outer; ++outer) {
    bool centered = false;
    for (int it = 0; it < options.max_newton; ++it) {
      barrier.derivatives(x, t, &grad, &hess);
      grad(m) += tau;
      MatrixXd h = hess;
      h.diagonal().array() += 1e-14 * (1.0 + hess.diagonal().cwiseAbs().maxCoeff());
      const Eigen::LDLT<MatrixXd> ldlt(h);
      const VectorXd dz = ldlt.solve(-grad);
      if (!dz.allFinite()) {
        throw Error(ErrorCode::kNumericalFailure, "singular Newton system");
      }
      const double decrement2 = -grad.dot(dz);
      ++sol.newton_steps;
      if (decrement2 < 0.0) {
        throw Error(ErrorCode::kNumericalFailure, "Newton direction is not a descent direction");
      }
      if (decrement2 / 2.0 <= 1e-10) {
        centered = true;
        break;
      }
      const double f0 = tau * t + barrier.value(x, t);
      double alpha = 1.0;
      bool moved = false;
      for (int ls = 0; ls < 60; ++ls, alpha *= 0.5) {
        const VectorXd xn = x + alpha * dz.head(m);
        const double tn = t + alpha * dz(m);
        const double fn = tau * tn + barrier.value(xn, tn);
        if (std::isfinite(fn) && fn <= f0 - 0.25 * alpha * decrement2) {
          x = xn;
          t = tn;
          moved = true;
          break;
        }
      }
      if (!moved) {
        centered = decrement2 / 2.0 <= 1e-6;
        break;
      }
      if (t < 0.0) {
        worst = worst_eigenvalue(maps, x);
        best = std::min(best, worst);
        if (worst <= -margin) return finish(x);
      }
    }
    worst = worst_eigenvalue(maps, x);
    best = std::min(best, worst);
    if (worst <= -margin) return finish(x);

    // On the central path t - t* <= nu / tau.
    if (centered && t - nu / tau >= 0.0) {
      throw InfeasibleError(
          "no point within the search ball satisfies every constraint with margin " +
              std::to_string(margin),
          best);
    }
    tau *= options.tau_growth;
  }
  throw Error(ErrorCode::kNumericalFailure,
              "barrier method did not converge (best max eigenvalue " +
                  std::to_string(best) + ")");
}

}  // namespace coopreg
