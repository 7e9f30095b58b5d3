#pragma once

#include <complex>

#include <Eigen/Dense>

namespace coopreg {

// Continuous-time realization G(s) = C (sI - A)^-1 B + D.
struct StateSpace {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  Eigen::MatrixXd C;
  Eigen::MatrixXd D;

  StateSpace() = default;
  // Throws Error(kDimensionMismatch) on inconsistent shapes.
  StateSpace(Eigen::MatrixXd a, Eigen::MatrixXd b, Eigen::MatrixXd c,
             Eigen::MatrixXd d);

  // Static gain with no states.
  static StateSpace gain(const Eigen::MatrixXd& d);

  Eigen::Index n_states() const { return A.rows(); }
  Eigen::Index n_inputs() const { return D.cols(); }
  Eigen::Index n_outputs() const { return D.rows(); }

  Eigen::MatrixXcd frequency_response(double omega) const;
};

// Largest singular value of G(j omega).
double sigma_max_at(const StateSpace& ss, double omega);

}  // namespace coopreg
