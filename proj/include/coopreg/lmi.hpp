#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace coopreg {

// {z : L + z M + conj(z) M^T < 0}. L is symmetrized on construction.
struct LmiRegion {
  Eigen::MatrixXd L;
  Eigen::MatrixXd M;

  LmiRegion() = default;
  LmiRegion(Eigen::MatrixXd l, Eigen::MatrixXd m);

  Eigen::Index order() const { return L.rows(); }
};

// Re z < -gamma.
LmiRegion region_halfplane(double gamma);
// |z| < r.
LmiRegion region_disk(double r);
// Sector around the negative real axis with half-angle theta.
LmiRegion region_cone(double theta);
// Intersection of the three regions above, block-diagonal in that order.
LmiRegion region_s(double gamma, double r, double theta);
LmiRegion region_intersection(const LmiRegion& a, const LmiRegion& b);

bool region_contains(const LmiRegion& region, std::complex<double> z);

// The Hermitian characteristic matrix L + z M + conj(z) M^T.
Eigen::MatrixXcd region_matrix(const LmiRegion& region, std::complex<double> z);

// True iff every eigenvalue of A - lambda B K lies in the region for every
// lambda (and its conjugate).
bool verify_coupling_gain(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                          const std::vector<std::complex<double>>& lambdas,
                          const LmiRegion& region, const Eigen::MatrixXd& K);

struct CouplingGain {
  Eigen::MatrixXd K;
  double certified_margin = 0.0;
};

// Common (Y > 0, Z) for all lambdas; K = Z Y^-1. Conjugate pairs need only
// one representative. Throws InfeasibleError or Error(kPostCheckFailed).
CouplingGain synth_coupling_gain_region(
    const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
    const std::vector<std::complex<double>>& lambdas, const LmiRegion& region);

// Per-lambda a-posteriori numbers for an H-infinity coupling design.
struct HinfCouplingCheck {
  std::complex<double> lambda;
  double hinf_norm = 0.0;
  double spectral_abscissa = 0.0;
  bool in_region = false;
};

struct HinfCoupling {
  Eigen::MatrixXd H;
  double open_loop_norm = 0.0;
  std::vector<HinfCouplingCheck> checks;
  double certified_margin = 0.0;
};

// Feasibility of the open-loop bounded-real LMI at level eta.
bool open_loop_bound_feasible(const Eigen::MatrixXd& A_tilde,
                              const Eigen::MatrixXd& B_omega,
                              const Eigen::MatrixXd& C_zeta, double eta);

// Bounded-real synthesis with decay-rate constraint gamma. Throws
// Error(kEtaBelowOpenLoopBound), InfeasibleError or Error(kPostCheckFailed).
HinfCoupling synth_hinf_coupling(const Eigen::MatrixXd& A_tilde,
                                 const Eigen::MatrixXd& B_tilde,
                                 const Eigen::MatrixXd& B_omega,
                                 const Eigen::MatrixXd& C_zeta,
                                 const Eigen::MatrixXd& D_zeta,
                                 const std::vector<std::complex<double>>& lambdas,
                                 double eta, double gamma);

// Same with the pole constraint replaced by a general region.
HinfCoupling synth_hinf_coupling_region(
    const Eigen::MatrixXd& A_tilde, const Eigen::MatrixXd& B_tilde,
    const Eigen::MatrixXd& B_omega, const Eigen::MatrixXd& C_zeta,
    const Eigen::MatrixXd& D_zeta,
    const std::vector<std::complex<double>>& lambdas, double eta,
    const LmiRegion& region);

// M = M1^T M2 with M1, M2 of full row count r = rank(M) (r x d each).
void factor_region_m(const Eigen::MatrixXd& M, Eigen::MatrixXd* M1,
                     Eigen::MatrixXd* M2);

}  // namespace coopreg
