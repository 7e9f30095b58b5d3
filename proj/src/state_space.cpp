#include "coopreg/state_space.hpp"

#include <Eigen/SVD>

#include "coopreg/error.hpp"

namespace coopreg {

StateSpace::StateSpace(Eigen::MatrixXd a, Eigen::MatrixXd b, Eigen::MatrixXd c,
                       Eigen::MatrixXd d)
    : A(std::move(a)), B(std::move(b)), C(std::move(c)), D(std::move(d)) {
  if (A.rows() != A.cols() || B.rows() != A.rows() || C.cols() != A.rows() ||
      D.rows() != C.rows() || D.cols() != B.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "state-space matrices have inconsistent shapes");
  }
}

StateSpace StateSpace::gain(const Eigen::MatrixXd& d) {
  return StateSpace(Eigen::MatrixXd(0, 0), Eigen::MatrixXd(0, d.cols()),
                    Eigen::MatrixXd(d.rows(), 0), d);
}

Eigen::MatrixXcd StateSpace::frequency_response(double omega) const {
  Eigen::MatrixXcd g = D.cast<std::complex<double>>();
  if (A.rows() == 0) return g;
  Eigen::MatrixXcd s_minus_a = -A.cast<std::complex<double>>();
  s_minus_a.diagonal().array() += std::complex<double>(0.0, omega);
  g += C.cast<std::complex<double>>() *
       s_minus_a.partialPivLu().solve(B.cast<std::complex<double>>());
  return g;
}

double sigma_max_at(const StateSpace& ss, double omega) {
  const Eigen::MatrixXcd g = ss.frequency_response(omega);
  if (g.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(g);
  return svd.singularValues()(0);
}

}  // namespace coopreg
