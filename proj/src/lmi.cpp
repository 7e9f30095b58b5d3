#include "coopreg/lmi.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>

#include "coopreg/error.hpp"
#include "coopreg/numlin.hpp"
#include "coopreg/sdp.hpp"

namespace coopreg {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using cplx = std::complex<double>;

LmiRegion::LmiRegion(MatrixXd l, MatrixXd m) : L(std::move(l)), M(std::move(m)) {
  if (L.rows() != L.cols() || M.rows() != M.cols() || L.rows() != M.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "region L and M must be square and equal size");
  }
  L = 0.5 * (L + L.transpose());
}

LmiRegion region_halfplane(double gamma) {
  return LmiRegion(MatrixXd::Constant(1, 1, 2.0 * gamma), MatrixXd::Ones(1, 1));
}

LmiRegion region_disk(double r) {
  if (!(r > 0.0)) throw Error(ErrorCode::kInvalidArgument, "disk radius must be positive");
  MatrixXd m = MatrixXd::Zero(2, 2);
  m(0, 1) = 1.0;
  return LmiRegion(-r * MatrixXd::Identity(2, 2), m);
}

LmiRegion region_cone(double theta) {
  if (!(theta > 0.0) || theta > M_PI / 2.0) {
    throw Error(ErrorCode::kInvalidArgument, "cone angle must lie in (0, pi/2]");
  }
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  MatrixXd m(2, 2);
  m << s, c, -c, s;
  return LmiRegion(MatrixXd::Zero(2, 2), m);
}

LmiRegion region_intersection(const LmiRegion& a, const LmiRegion& b) {
  const auto na = a.order();
  const auto nb = b.order();
  MatrixXd l = MatrixXd::Zero(na + nb, na + nb);
  MatrixXd m = MatrixXd::Zero(na + nb, na + nb);
  l.topLeftCorner(na, na) = a.L;
  l.bottomRightCorner(nb, nb) = b.L;
  m.topLeftCorner(na, na) = a.M;
  m.bottomRightCorner(nb, nb) = b.M;
  return LmiRegion(l, m);
}

LmiRegion region_s(double gamma, double r, double theta) {
  return region_intersection(region_intersection(region_halfplane(gamma), region_disk(r)),
                             region_cone(theta));
}

MatrixXcd region_matrix(const LmiRegion& region, cplx z) {
  return region.L.cast<cplx>() + z * region.M.cast<cplx>() +
         std::conj(z) * region.M.transpose().cast<cplx>();
}

bool region_contains(const LmiRegion& region, cplx z) {
  return max_eigenvalue(realify(region_matrix(region, z))) < 0.0;
}

bool verify_coupling_gain(const MatrixXd& A, const MatrixXd& B,
                          const std::vector<cplx>& lambdas,
                          const LmiRegion& region, const MatrixXd& K) {
  for (const cplx lam : lambdas) {
    const MatrixXcd acl = A.cast<cplx>() - lam * B.cast<cplx>() * K.cast<cplx>();
    Eigen::ComplexEigenSolver<MatrixXcd> es(acl, false);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      const cplx mu = es.eigenvalues()(i);
      if (!region_contains(region, mu) || !region_contains(region, std::conj(mu))) {
        return false;
      }
    }
  }
  return true;
}

namespace {

bool is_real(cplx z) { return z.imag() == 0.0; }

// Hermitian matrix as a real symmetric one, embedding only when needed.
MatrixXd as_real_constraint(const MatrixXcd& h, bool real) {
  return real ? MatrixXd(h.real()) : realify(h);
}

MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
  return Eigen::kroneckerProduct(a, b);
}

std::vector<cplx> one_per_conjugate_pair(const std::vector<cplx>& lambdas) {
  std::vector<cplx> out;
  for (const cplx lam : lambdas) {
    bool seen = false;
    for (const cplx o : out)
      if (std::abs(o - std::conj(lam)) <= 1e-12 * (1.0 + std::abs(lam))) seen = true;
    if (!seen) out.push_back(lam.imag() < 0.0 ? std::conj(lam) : lam);
  }
  return out;
}

MatrixXd gain_from(const MatrixXd& z, const MatrixXd& y) {
  return y.ldlt().solve(z.transpose()).transpose();
}

}  // namespace

CouplingGain synth_coupling_gain_region(const MatrixXd& A, const MatrixXd& B,
                                        const std::vector<cplx>& lambdas,
                                        const LmiRegion& region) {
  const auto n = A.rows();
  const auto m = B.cols();
  if (A.cols() != n || B.rows() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "A, B shapes");
  }
  if (lambdas.empty()) throw Error(ErrorCode::kInvalidArgument, "no eigenvalues given");
  for (const cplx lam : lambdas) {
    if (!(lam.real() > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "eigenvalues must have positive real part");
    }
  }

  SdpProblem sdp;
  const int y = sdp.add_symmetric("Y", static_cast<int>(n));
  const int z = sdp.add_general("Z", static_cast<int>(m), static_cast<int>(n));
  sdp.add_constraint("Y > 0", static_cast<int>(n),
                     [y](const Assignment& v) { return MatrixXd(-v[y]); });
  const MatrixXcd l = region.L.cast<cplx>();
  const MatrixXcd mm = region.M.cast<cplx>();
  for (const cplx lam : one_per_conjugate_pair(lambdas)) {
    const bool real = is_real(lam);
    const int dim = static_cast<int>(region.order() * n * (real ? 1 : 2));
    sdp.add_constraint(
        "region LMI at lambda " + std::to_string(lam.real()), dim,
        [=](const Assignment& v) {
          const MatrixXcd w = (A * v[y]).cast<cplx>() - lam * (B * v[z]).cast<cplx>();
          const MatrixXcd h = kron(l, v[y].cast<cplx>()) + kron(mm, w) +
                              kron(mm.transpose(), w.adjoint());
          return as_real_constraint(h, real);
        });
  }
  const SdpSolution sol = solve_feasibility(sdp);

  CouplingGain out;
  out.K = gain_from(sol[z], sol[y]);
  out.certified_margin = sol.certified_margin;
  if (!verify_coupling_gain(A, B, lambdas, region, out.K)) {
    throw Error(ErrorCode::kPostCheckFailed,
                "coupling gain from the LMI solution misses the region");
  }
  return out;
}

void factor_region_m(const MatrixXd& M, MatrixXd* M1, MatrixXd* M2) {
  const auto d = M.rows();
  Eigen::JacobiSVD<MatrixXd> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  Eigen::Index r = 0;
  if (s.size() > 0 && s(0) > 0.0) {
    while (r < s.size() && s(r) > 1e-10 * s(0)) ++r;
  }
  const Eigen::VectorXd root = s.head(r).cwiseSqrt();
  *M1 = root.asDiagonal() * svd.matrixU().leftCols(r).transpose();
  *M2 = root.asDiagonal() * svd.matrixV().leftCols(r).transpose();
  M1->conservativeResize(r, d);
  M2->conservativeResize(r, d);
}

bool open_loop_bound_feasible(const MatrixXd& A_tilde, const MatrixXd& B_omega,
                              const MatrixXd& C_zeta, double eta) {
  const auto n = A_tilde.rows();
  const auto nw = B_omega.cols();
  const auto nz = C_zeta.rows();
  SdpProblem sdp;
  const int x = sdp.add_symmetric("X", static_cast<int>(n));
  sdp.add_constraint("X > 0", static_cast<int>(n),
                     [x](const Assignment& v) { return MatrixXd(-v[x]); });
  sdp.add_constraint(
      "open-loop bounded real LMI", static_cast<int>(n + nw + nz),
      [=](const Assignment& v) {
        const MatrixXd& xx = v[x];
        MatrixXd out = MatrixXd::Zero(n + nw + nz, n + nw + nz);
        out.topLeftCorner(n, n) = A_tilde.transpose() * xx + xx * A_tilde;
        out.block(0, n, n, nw) = xx * B_omega;
        out.block(n, 0, nw, n) = B_omega.transpose() * xx;
        out.block(0, n + nw, n, nz) = C_zeta.transpose();
        out.block(n + nw, 0, nz, n) = C_zeta;
        out.block(n, n, nw, nw) = -eta * MatrixXd::Identity(nw, nw);
        out.block(n + nw, n + nw, nz, nz) = -eta * MatrixXd::Identity(nz, nz);
        return out;
      });
  try {
    solve_feasibility(sdp);
    return true;
  } catch (const InfeasibleError&) {
    return false;
  }
}

HinfCoupling synth_hinf_coupling_region(const MatrixXd& A_tilde,
                                        const MatrixXd& B_tilde,
                                        const MatrixXd& B_omega,
                                        const MatrixXd& C_zeta,
                                        const MatrixXd& D_zeta,
                                        const std::vector<cplx>& lambdas,
                                        double eta, const LmiRegion& region) {
  const auto n = A_tilde.rows();
  const auto m = B_tilde.cols();
  const auto nw = B_omega.cols();
  const auto nz = C_zeta.rows();
  if (A_tilde.cols() != n || B_tilde.rows() != n || B_omega.rows() != n ||
      C_zeta.cols() != n || D_zeta.rows() != nz || D_zeta.cols() != m) {
    throw Error(ErrorCode::kDimensionMismatch, "nominal plant shapes");
  }
  if (!(eta > 0.0)) throw Error(ErrorCode::kInvalidArgument, "eta must be positive");
  if (lambdas.empty()) throw Error(ErrorCode::kInvalidArgument, "no eigenvalues given");
  for (const cplx lam : lambdas) {
    if (!is_real(lam) || !(lam.real() > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "H-infinity coupling needs real positive Laplacian eigenvalues");
    }
  }
  if (!(spectral_abscissa(A_tilde) < 0.0)) {
    throw Error(ErrorCode::kNominalNotHurwitz, "nominal closed loop is not Hurwitz");
  }

  HinfCoupling out;
  out.open_loop_norm = hinf_norm(StateSpace(A_tilde, B_omega, C_zeta,
                                            MatrixXd::Zero(nz, nw)));
  if (!open_loop_bound_feasible(A_tilde, B_omega, C_zeta, eta)) {
    throw Error(ErrorCode::kEtaBelowOpenLoopBound,
                "analysis bound violated: eta = " + std::to_string(eta) +
                    " is below the open-loop norm " + std::to_string(out.open_loop_norm));
  }

  MatrixXd m1, m2;
  factor_region_m(region.M, &m1, &m2);
  const auto d = region.order();
  const auto r = m1.rows();
  const auto dim = d * n + r * nw + r * nz;

  SdpProblem sdp;
  const int y = sdp.add_symmetric("Y", static_cast<int>(n));
  const int z = sdp.add_general("Z", static_cast<int>(m), static_cast<int>(n));
  sdp.add_constraint("Y > 0", static_cast<int>(n),
                     [y](const Assignment& v) { return MatrixXd(-v[y]); });
  for (const cplx lam_c : lambdas) {
    const double lam = lam_c.real();
    sdp.add_constraint(
        "bounded real region LMI at lambda " + std::to_string(lam), static_cast<int>(dim),
        [=](const Assignment& v) {
          const MatrixXd w = A_tilde * v[y] - lam * B_tilde * v[z];
          const MatrixXd cz = C_zeta * v[y] - lam * D_zeta * v[z];
          MatrixXd out = MatrixXd::Zero(dim, dim);
          out.topLeftCorner(d * n, d * n) =
              MatrixXd(Eigen::kroneckerProduct(region.L, v[y])) +
              MatrixXd(Eigen::kroneckerProduct(region.M, w)) +
              MatrixXd(Eigen::kroneckerProduct(region.M.transpose(), w.transpose()));
          const MatrixXd b12 = Eigen::kroneckerProduct(m1.transpose(), B_omega);
          const MatrixXd b13 = Eigen::kroneckerProduct(m2.transpose(), cz.transpose());
          out.block(0, d * n, d * n, r * nw) = b12;
          out.block(d * n, 0, r * nw, d * n) = b12.transpose();
          out.block(0, d * n + r * nw, d * n, r * nz) = b13;
          out.block(d * n + r * nw, 0, r * nz, d * n) = b13.transpose();
          out.block(d * n, d * n, r * nw, r * nw) = -eta * MatrixXd::Identity(r * nw, r * nw);
          out.bottomRightCorner(r * nz, r * nz) = -eta * MatrixXd::Identity(r * nz, r * nz);
          return out;
        });
  }
  const SdpSolution sol = solve_feasibility(sdp);
  out.H = gain_from(sol[z], sol[y]);
  out.certified_margin = sol.certified_margin;

  bool ok = out.open_loop_norm < eta;
  for (const cplx lam_c : lambdas) {
    const double lam = lam_c.real();
    HinfCouplingCheck check;
    check.lambda = lam_c;
    const MatrixXd acl = A_tilde - lam * B_tilde * out.H;
    check.spectral_abscissa = spectral_abscissa(acl);
    check.in_region = verify_coupling_gain(A_tilde, B_tilde, {lam_c}, region, out.H);
    if (check.spectral_abscissa < 0.0) {
      check.hinf_norm = hinf_norm(
          StateSpace(acl, B_omega, C_zeta - lam * D_zeta * out.H, MatrixXd::Zero(nz, nw)));
    } else {
      check.hinf_norm = std::numeric_limits<double>::infinity();
    }
    ok = ok && check.in_region && check.hinf_norm < eta;
    out.checks.push_back(check);
  }
  if (!ok) {
    throw Error(ErrorCode::kPostCheckFailed,
                "coupling gain from the LMI solution fails its norm or pole checks");
  }
  return out;
}

HinfCoupling synth_hinf_coupling(const MatrixXd& A_tilde, const MatrixXd& B_tilde,
                                 const MatrixXd& B_omega, const MatrixXd& C_zeta,
                                 const MatrixXd& D_zeta,
                                 const std::vector<cplx>& lambdas, double eta,
                                 double gamma) {
  return synth_hinf_coupling_region(A_tilde, B_tilde, B_omega, C_zeta, D_zeta,
                                    lambdas, eta, region_halfplane(gamma));
}

}  // namespace coopreg
