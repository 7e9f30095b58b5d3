#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "coopreg/state_space.hpp"

namespace coopreg {

// Solution (Pi, Gamma) of
//   A Pi + B Gamma - Pi S + Bd  = 0
//   Ce Pi + De Gamma + Ded      = 0
// residual is the larger Frobenius norm of the two left-hand sides.
struct RegulatorSolution {
  Eigen::MatrixXd Pi;
  Eigen::MatrixXd Gamma;
  double residual = 0.0;
};

// Column-stacked Kronecker system solved in the least-squares sense with the
// minimum-norm solution. Throws Error(kNoSolution) when the residual exceeds
// 1e-8 * (1 + ||Pi||_F + ||Gamma||_F), Error(kDimensionMismatch) on shapes.
RegulatorSolution solve_regulator_equation(
    const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
    const Eigen::MatrixXd& Ce, const Eigen::MatrixXd& De,
    const Eigen::MatrixXd& S, const Eigen::MatrixXd& Bd,
    const Eigen::MatrixXd& Ded);

// Residual of a candidate pair against the regulator equations.
double regulator_residual(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                          const Eigen::MatrixXd& Ce, const Eigen::MatrixXd& De,
                          const Eigen::MatrixXd& S, const Eigen::MatrixXd& Bd,
                          const Eigen::MatrixXd& Ded, const Eigen::MatrixXd& Pi,
                          const Eigen::MatrixXd& Gamma);

// Stabilizing solution of A'P + PA - P B R^-1 B' P + Q = 0.
Eigen::MatrixXd solve_care(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                           const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R);

// F = R^-1 B' P, so that A - B F is Hurwitz.
Eigen::MatrixXd lqr_gain(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                         const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R);

// PBH tests on the shifted pairs (A + shift I, B) and (A + shift I, C).
bool is_stabilizable(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                     double shift = 0.0);
bool is_detectable(const Eigen::MatrixXd& A, const Eigen::MatrixXd& C,
                   double shift = 0.0);
bool is_observable(const Eigen::MatrixXd& A, const Eigen::MatrixXd& C);

Eigen::VectorXcd eigenvalues(const Eigen::MatrixXd& A);

// Max real part over the spectrum; -infinity for an empty matrix.
double spectral_abscissa(const Eigen::MatrixXd& A);

// H-infinity norm by Hamiltonian bisection. Throws Error(kNotStable) if A is
// not Hurwitz. The returned value is within rel_tol of the true norm.
double hinf_norm(const StateSpace& ss, double rel_tol = 1e-6);

// Observer gain L with spectral_abscissa(A - L C) < -decay, from the dual
// LQR problem on (A' + decay I, C') with identity weights.
Eigen::MatrixXd place_observer_gain(const Eigen::MatrixXd& A,
                                    const Eigen::MatrixXd& C, double decay);

// Observer gain with sigma(A - L C) equal to `targets` (conjugate-closed,
// one per state). Tries Ackermann for one output, then the parametric
// Sylvester design and finally a random cyclic pre-gain, all drawn from `seed`.
Eigen::MatrixXd place_poles_exact(const Eigen::MatrixXd& A,
                                  const Eigen::MatrixXd& C,
                                  const std::vector<std::complex<double>>& targets,
                                  std::uint64_t seed = 20140301);

// Largest distance from a computed eigenvalue to its matched target,
// relative to (1 + |target|). Greedy nearest matching.
double max_relative_pole_mismatch(
    const Eigen::VectorXcd& actual,
    const std::vector<std::complex<double>>& targets);

}  // namespace coopreg
