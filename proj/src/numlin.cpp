#include "coopreg/numlin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>

#include "coopreg/error.hpp"
#include "coopreg/kernels.hpp"

namespace coopreg {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::kDimensionMismatch, what);
}

MatrixXd identity(Eigen::Index n) { return MatrixXd::Identity(n, n); }

Eigen::Map<const VectorXd> vec(const MatrixXd& m) {
  return {m.data(), m.size()};
}

// Solves A' X + X A = -W by column stacking.
MatrixXd solve_lyapunov_kron(const MatrixXd& a, const MatrixXd& w) {
  const auto n = a.rows();
  const MatrixXd op = Eigen::kroneckerProduct(identity(n), a.transpose()) +
                      Eigen::kroneckerProduct(a.transpose(), identity(n));
  const VectorXd x = op.partialPivLu().solve(-vec(w));
  MatrixXd out = Eigen::Map<const MatrixXd>(x.data(), n, n);
  return 0.5 * (out + out.transpose());
}

double care_residual(const MatrixXd& a, const MatrixXd& b, const MatrixXd& q,
                     const MatrixXd& r, const MatrixXd& p) {
  const MatrixXd res = a.transpose() * p + p * a -
                       p * b * r.ldlt().solve(b.transpose()) * p + q;
  return res.norm();
}

// Stable invariant subspace of the Hamiltonian via its eigendecomposition;
// complex pairs contribute their real and imaginary parts as basis vectors.
bool care_by_eigenvectors(const MatrixXd& ham, Eigen::Index n, MatrixXd* p) {
  Eigen::EigenSolver<MatrixXd> es(ham);
  if (es.info() != Eigen::Success) return false;
  const VectorXcd lam = es.eigenvalues();
  const MatrixXcd vecs = es.eigenvectors();
  const double axis_tol = 1e-10 * (1.0 + ham.norm());
  MatrixXd basis(2 * n, n);
  Eigen::Index cols = 0;
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (std::abs(lam(i).real()) <= axis_tol) {
      throw Error(ErrorCode::kHamiltonianEigOnAxis,
                  "Hamiltonian has an eigenvalue on the imaginary axis; no "
                  "stabilizing Riccati solution");
    }
    if (lam(i).real() >= 0.0) continue;
    if (lam(i).imag() < 0.0) continue;  // represented by its conjugate
    if (lam(i).imag() == 0.0) {
      if (cols >= n) return false;
      basis.col(cols++) = vecs.col(i).real();
    } else {
      if (cols + 2 > n) return false;
      basis.col(cols++) = vecs.col(i).real();
      basis.col(cols++) = vecs.col(i).imag();
    }
  }
  if (cols != n) return false;
  const MatrixXd u1 = basis.topRows(n);
  const MatrixXd u2 = basis.bottomRows(n);
  Eigen::FullPivLU<MatrixXd> lu(u1);
  if (!lu.isInvertible()) return false;
  const MatrixXd sol = u2 * lu.inverse();
  *p = 0.5 * (sol + sol.transpose());
  return p->allFinite();
}

// Matrix sign iteration with determinant scaling.
bool care_by_sign_function(const MatrixXd& ham, Eigen::Index n, MatrixXd* p) {
  MatrixXd z = ham;
  const double dim = static_cast<double>(z.rows());
  for (int it = 0; it < 100; ++it) {
    const double det = std::abs(z.determinant());
    if (!(det > 0.0) || !std::isfinite(det)) return false;
    z *= std::pow(det, -1.0 / dim);
    const MatrixXd next = 0.5 * (z + z.inverse());
    const double change = (next - z).norm();
    z = next;
    if (change <= 1e-12 * z.norm()) break;
  }
  const MatrixXd w11 = z.topLeftCorner(n, n);
  const MatrixXd w12 = z.topRightCorner(n, n);
  const MatrixXd w21 = z.bottomLeftCorner(n, n);
  const MatrixXd w22 = z.bottomRightCorner(n, n);
  MatrixXd lhs(2 * n, n), rhs(2 * n, n);
  lhs << w12, w22 + identity(n);
  rhs << w11 + identity(n), w21;
  const MatrixXd sol = lhs.completeOrthogonalDecomposition().solve(rhs);
  *p = 0.5 * (sol + sol.transpose());
  return p->allFinite();
}

}  // namespace

RegulatorSolution solve_regulator_equation(const MatrixXd& A, const MatrixXd& B,
                                           const MatrixXd& Ce,
                                           const MatrixXd& De, const MatrixXd& S,
                                           const MatrixXd& Bd,
                                           const MatrixXd& Ded) {
  const auto n = A.rows();
  const auto m = B.cols();
  const auto q = Ce.rows();
  const auto d = S.rows();
  require(A.cols() == n, "A must be square");
  require(B.rows() == n, "B rows must match A");
  require(Ce.cols() == n, "Ce columns must match A");
  require(De.rows() == q && De.cols() == m, "De must be q x m");
  require(S.cols() == d, "S must be square");
  require(Bd.rows() == n && Bd.cols() == d, "Bd must be n x d");
  require(Ded.rows() == q && Ded.cols() == d, "Ded must be q x d");

  RegulatorSolution sol;
  if (d == 0) {
    sol.Pi = MatrixXd::Zero(n, 0);
    sol.Gamma = MatrixXd::Zero(m, 0);
    return sol;
  }

  const MatrixXd id_d = identity(d);
  MatrixXd sys = MatrixXd::Zero(d * (n + q), d * (n + m));
  sys.topLeftCorner(d * n, d * n) =
      MatrixXd(Eigen::kroneckerProduct(id_d, A)) -
      MatrixXd(Eigen::kroneckerProduct(S.transpose(), identity(n)));
  sys.topRightCorner(d * n, d * m) = Eigen::kroneckerProduct(id_d, B);
  sys.bottomLeftCorner(d * q, d * n) = Eigen::kroneckerProduct(id_d, Ce);
  sys.bottomRightCorner(d * q, d * m) = Eigen::kroneckerProduct(id_d, De);

  VectorXd rhs(d * (n + q));
  rhs << -vec(Bd), -vec(Ded);

  const VectorXd x = sys.completeOrthogonalDecomposition().solve(rhs);
  sol.Pi = Eigen::Map<const MatrixXd>(x.data(), n, d);
  sol.Gamma = Eigen::Map<const MatrixXd>(x.data() + n * d, m, d);
  sol.residual = regulator_residual(A, B, Ce, De, S, Bd, Ded, sol.Pi, sol.Gamma);

  const double tol = 1e-8 * (1.0 + sol.Pi.norm() + sol.Gamma.norm());
  if (!(sol.residual <= tol)) {
    throw Error(ErrorCode::kNoSolution,
                "regulator equations are not solvable (least-squares residual " +
                    std::to_string(sol.residual) + ")");
  }
  return sol;
}

double regulator_residual(const MatrixXd& A, const MatrixXd& B,
                          const MatrixXd& Ce, const MatrixXd& De,
                          const MatrixXd& S, const MatrixXd& Bd,
                          const MatrixXd& Ded, const MatrixXd& Pi,
                          const MatrixXd& Gamma) {
  const double r1 = (A * Pi + B * Gamma - Pi * S + Bd).norm();
  const double r2 = (Ce * Pi + De * Gamma + Ded).norm();
  return std::max(r1, r2);
}

MatrixXd solve_care(const MatrixXd& A, const MatrixXd& B, const MatrixXd& Q,
                    const MatrixXd& R) {
  const auto n = A.rows();
  require(A.cols() == n && B.rows() == n, "A, B shapes");
  require(Q.rows() == n && Q.cols() == n, "Q must be n x n");
  require(R.rows() == B.cols() && R.cols() == B.cols(), "R must be m x m");
  if (!is_stabilizable(A, B)) {
    throw Error(ErrorCode::kNotStabilizable, "(A, B) is not stabilizable");
  }
  const Eigen::LLT<MatrixXd> r_chol(0.5 * (R + R.transpose()));
  if (r_chol.info() != Eigen::Success) {
    throw Error(ErrorCode::kInvalidArgument, "R must be positive definite");
  }
  const MatrixXd qs = 0.5 * (Q + Q.transpose());

  MatrixXd ham(2 * n, 2 * n);
  ham << A, -B * r_chol.solve(B.transpose()), -qs, -A.transpose();

  MatrixXd p;
  bool ok = care_by_eigenvectors(ham, n, &p);
  const double scale = 1.0 + ham.norm();
  if (!ok || care_residual(A, B, qs, R, p) > 1e-6 * scale * (1.0 + p.norm())) {
    ok = care_by_sign_function(ham, n, &p);
  }
  if (!ok) {
    throw Error(ErrorCode::kNumericalFailure,
                "could not extract the stable invariant subspace");
  }

  // Newton-Kleinman polishing.
  double res = care_residual(A, B, qs, R, p);
  for (int it = 0; it < 4 && res > 1e-13 * scale * (1.0 + p.norm()); ++it) {
    const MatrixXd f = r_chol.solve(B.transpose() * p);
    const MatrixXd acl = A - B * f;
    if (spectral_abscissa(acl) >= 0.0) break;
    const MatrixXd next =
        solve_lyapunov_kron(acl, qs + f.transpose() * R * f);
    const double next_res = care_residual(A, B, qs, R, next);
    if (!(next_res < res)) break;
    p = next;
    res = next_res;
  }

  const MatrixXd f = r_chol.solve(B.transpose() * p);
  if (!(spectral_abscissa(A - B * f) < 0.0)) {
    throw Error(ErrorCode::kHamiltonianEigOnAxis,
                "Riccati solution is not stabilizing");
  }
  return p;
}

MatrixXd lqr_gain(const MatrixXd& A, const MatrixXd& B, const MatrixXd& Q,
                  const MatrixXd& R) {
  const MatrixXd p = solve_care(A, B, Q, R);
  return R.ldlt().solve(B.transpose() * p);
}

VectorXcd eigenvalues(const MatrixXd& A) {
  if (A.rows() == 0) return VectorXcd(0);
  Eigen::EigenSolver<MatrixXd> es(A, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::kNumericalFailure, "eigenvalue computation failed");
  }
  return es.eigenvalues();
}

double spectral_abscissa(const MatrixXd& A) {
  if (A.rows() == 0) return -std::numeric_limits<double>::infinity();
  return eigenvalues(A).real().maxCoeff();
}

bool is_stabilizable(const MatrixXd& A, const MatrixXd& B, double shift) {
  const auto n = A.rows();
  require(A.cols() == n && B.rows() == n, "A, B shapes");
  if (n == 0) return true;
  MatrixXd m = A;
  m.diagonal().array() += shift;
  MatrixXd mb(n, n + B.cols());
  mb << m, B;
  const double eig_tol = 1e-9 * (1.0 + m.norm());
  const double rank_tol = 1e-7 * (1.0 + mb.norm());
  const VectorXcd lam = eigenvalues(m);
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam(i).real() < -eig_tol) continue;
    MatrixXcd pbh = mb.cast<std::complex<double>>();
    pbh.leftCols(n).diagonal().array() -= lam(i);
    Eigen::JacobiSVD<MatrixXcd> svd(pbh);
    if (svd.singularValues()(n - 1) <= rank_tol) return false;
  }
  return true;
}

bool is_detectable(const MatrixXd& A, const MatrixXd& C, double shift) {
  require(C.cols() == A.rows(), "C columns must match A");
  return is_stabilizable(A.transpose(), C.transpose(), shift);
}

bool is_observable(const MatrixXd& A, const MatrixXd& C) {
  const auto n = A.rows();
  require(A.cols() == n && C.cols() == n, "A, C shapes");
  if (n == 0) return true;
  const double rank_tol = 1e-7 * (1.0 + A.norm() + C.norm());
  const VectorXcd lam = eigenvalues(A);
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    MatrixXcd pbh(n + C.rows(), n);
    pbh.topRows(n) = A.cast<std::complex<double>>();
    pbh.topRows(n).diagonal().array() -= lam(i);
    pbh.bottomRows(C.rows()) = C.cast<std::complex<double>>();
    Eigen::JacobiSVD<MatrixXcd> svd(pbh);
    if (svd.singularValues()(n - 1) <= rank_tol) return false;
  }
  return true;
}

namespace {

// True when the Hamiltonian at level gamma has eigenvalues on the imaginary
// axis that correspond to a frequency where sigma_max(G) > gamma. On return
// *attained holds the largest sigma_max evaluated at candidate frequencies.
bool level_crossed(const StateSpace& ss, double gamma, double* attained) {
  const auto n = ss.n_states();
  const auto m = ss.n_inputs();
  const auto p = ss.n_outputs();
  const MatrixXd r = gamma * gamma * identity(m) - ss.D.transpose() * ss.D;
  const Eigen::LDLT<MatrixXd> r_ldlt(r);
  const MatrixXd a_bar = ss.A + ss.B * r_ldlt.solve(ss.D.transpose() * ss.C);
  MatrixXd ham(2 * n, 2 * n);
  ham << a_bar, ss.B * r_ldlt.solve(ss.B.transpose()),
      -ss.C.transpose() *
          (identity(p) + ss.D * r_ldlt.solve(ss.D.transpose())) * ss.C,
      -a_bar.transpose();

  const VectorXcd lam = eigenvalues(ham);
  std::vector<double> omegas;
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (std::abs(lam(i).real()) <= 1e-6 * (1.0 + std::abs(lam(i))) &&
        lam(i).imag() >= 0.0) {
      omegas.push_back(lam(i).imag());
    }
  }
  *attained = 0.0;
  if (omegas.empty()) return false;
  std::sort(omegas.begin(), omegas.end());
  std::vector<double> probes = omegas;
  for (std::size_t i = 0; i + 1 < omegas.size(); ++i)
    probes.push_back(0.5 * (omegas[i] + omegas[i + 1]));
  const kernels::PeakGain peak = kernels::peak_gain_serial(ss, probes);
  *attained = peak.value;
  return peak.value > gamma;
}

}  // namespace

double hinf_norm(const StateSpace& ss, double rel_tol) {
  const double d_norm =
      ss.D.size() == 0 ? 0.0 : Eigen::JacobiSVD<MatrixXd>(ss.D).singularValues()(0);
  if (ss.n_states() == 0 || ss.B.size() == 0 || ss.C.size() == 0) {
    if (ss.n_states() > 0 && !(spectral_abscissa(ss.A) < 0.0)) {
      throw Error(ErrorCode::kNotStable, "A is not Hurwitz");
    }
    return d_norm;
  }
  if (!(spectral_abscissa(ss.A) < 0.0)) {
    throw Error(ErrorCode::kNotStable, "A is not Hurwitz");
  }

  // Bracket from a grid spanning the pole magnitudes plus the resonances.
  const VectorXcd poles = eigenvalues(ss.A);
  const double wmin = std::max(poles.cwiseAbs().minCoeff(), 1e-6);
  const double wmax = std::max(poles.cwiseAbs().maxCoeff(), 1e-6);
  std::vector<double> grid = kernels::logspace(std::log10(wmin) - 2.0,
                                               std::log10(wmax) + 2.0, 400);
  grid.push_back(0.0);
  for (Eigen::Index i = 0; i < poles.size(); ++i)
    if (poles(i).imag() > 0.0) grid.push_back(poles(i).imag());
  const kernels::PeakGain peak = kernels::peak_gain_omp(ss, grid);

  double lb = std::max(d_norm, peak.value);
  const double abs_tol =
      1e-14 * (1.0 + ss.B.norm() * ss.C.norm() + d_norm);
  double ub = std::max(2.0 * lb, abs_tol);
  double attained = 0.0;
  for (int guard = 0; level_crossed(ss, ub, &attained); ++guard) {
    lb = std::max(lb, attained);
    ub = 2.0 * std::max(ub, attained);
    if (guard > 200) {
      throw Error(ErrorCode::kNumericalFailure, "H-infinity upper bound search");
    }
  }
  for (int it = 0; it < 200 && ub - lb > rel_tol * ub + abs_tol; ++it) {
    const double gamma = 0.5 * (lb + ub);
    if (gamma <= d_norm) {
      lb = gamma;
      continue;
    }
    if (level_crossed(ss, gamma, &attained)) {
      lb = std::max(gamma, attained);
    } else {
      ub = gamma;
    }
  }
  return 0.5 * (lb + ub);
}

MatrixXd place_observer_gain(const MatrixXd& A, const MatrixXd& C,
                             double decay) {
  require(A.rows() == A.cols() && C.cols() == A.rows(), "A, C shapes");
  if (!is_detectable(A, C, decay)) {
    throw Error(ErrorCode::kNotDetectable,
                "(A + decay I, C) is not detectable");
  }
  MatrixXd at = A.transpose();
  at.diagonal().array() += decay;
  const MatrixXd f = lqr_gain(at, C.transpose(), identity(A.rows()),
                              identity(C.rows()));
  MatrixXd l = f.transpose();
  if (!(spectral_abscissa(A - l * C) < -decay)) {
    throw Error(ErrorCode::kNumericalFailure,
                "observer gain misses the requested decay rate");
  }
  return l;
}

double max_relative_pole_mismatch(
    const VectorXcd& actual, const std::vector<std::complex<double>>& targets) {
  std::vector<bool> used(static_cast<std::size_t>(actual.size()), false);
  double worst = 0.0;
  for (const auto& t : targets) {
    double best = std::numeric_limits<double>::infinity();
    Eigen::Index arg = -1;
    for (Eigen::Index i = 0; i < actual.size(); ++i) {
      if (used[i]) continue;
      const double d = std::abs(actual(i) - t);
      if (d < best) {
        best = d;
        arg = i;
      }
    }
    if (arg < 0) return std::numeric_limits<double>::infinity();
    used[arg] = true;
    worst = std::max(worst, best / (1.0 + std::abs(t)));
  }
  return worst;
}

namespace {

// Real coefficients c_0..c_n (monic, c_n = 1) of prod (s - t_i).
std::vector<double> poly_from_roots(
    const std::vector<std::complex<double>>& roots) {
  std::vector<std::complex<double>> c{1.0};
  for (const auto& r : roots) {
    std::vector<std::complex<double>> next(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= r * c[i];
    }
    c = std::move(next);
  }
  std::vector<double> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = c[i].real();
  return out;
}

// Single-output Ackermann formula for the observer: l = phi(A) O^-1 e_n.
bool ackermann_observer(const MatrixXd& a, const Eigen::RowVectorXd& c,
                        const std::vector<std::complex<double>>& targets,
                        VectorXd* l) {
  const auto n = a.rows();
  MatrixXd obs(n, n);
  Eigen::RowVectorXd row = c;
  for (Eigen::Index i = 0; i < n; ++i) {
    obs.row(i) = row;
    row = row * a;
  }
  Eigen::FullPivLU<MatrixXd> lu(obs);
  if (!lu.isInvertible()) return false;
  const std::vector<double> coeff = poly_from_roots(targets);
  MatrixXd phi = MatrixXd::Zero(n, n);
  for (auto it = coeff.rbegin(); it != coeff.rend(); ++it) {
    phi = phi * a;
    phi.diagonal().array() += *it;
  }
  VectorXd en = VectorXd::Zero(n);
  en(n - 1) = 1.0;
  *l = phi * lu.solve(en);
  return l->allFinite();
}

// Parametric observer design: with G random, solve A' X - X T = C' G for
// the real Schur-like target block T, then L' = G X^-1 gives
// sigma(A - L C) = sigma(T). Returns false when X is singular.
bool sylvester_observer(const MatrixXd& a, const MatrixXd& c,
                        const std::vector<std::complex<double>>& targets,
                        const MatrixXd& g, MatrixXd* l) {
  const auto n = a.rows();
  const MatrixXd at = a.transpose();
  const MatrixXd rhs = c.transpose() * g;
  MatrixXd x(n, n);
  std::vector<bool> used(targets.size(), false);
  Eigen::Index col = 0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    const auto t = targets[i];
    if (std::abs(t.imag()) <= 1e-12 * (1.0 + std::abs(t))) {
      const MatrixXd m = at - t.real() * MatrixXd::Identity(n, n);
      x.col(col) = m.fullPivLu().solve(rhs.col(col));
      ++col;
      continue;
    }
    // Partner of the conjugate pair.
    for (std::size_t j = i + 1; j < targets.size(); ++j) {
      if (!used[j] && std::abs(targets[j] - std::conj(t)) <= 1e-12 * (1.0 + std::abs(t))) {
        used[j] = true;
        break;
      }
    }
    if (col + 1 >= n) return false;
    Eigen::Matrix2d blk;
    blk << t.real(), std::abs(t.imag()), -std::abs(t.imag()), t.real();
    const MatrixXd id = MatrixXd::Identity(n, n);
    const MatrixXd m = Eigen::kroneckerProduct(Eigen::Matrix2d::Identity(), at).eval() -
                       Eigen::kroneckerProduct(blk.transpose(), id).eval();
    VectorXd b(2 * n);
    b << rhs.col(col), rhs.col(col + 1);
    const VectorXd v = m.fullPivLu().solve(b);
    x.col(col) = v.head(n);
    x.col(col + 1) = v.tail(n);
    col += 2;
  }
  if (col != n || !x.allFinite()) return false;
  Eigen::FullPivLU<MatrixXd> lu(x);
  if (!lu.isInvertible()) return false;
  *l = (g * lu.inverse()).transpose();
  return l->allFinite();
}

}  // namespace

MatrixXd place_poles_exact(const MatrixXd& A, const MatrixXd& C,
                           const std::vector<std::complex<double>>& targets,
                           std::uint64_t seed) {
  const auto n = A.rows();
  const auto p = C.rows();
  require(A.cols() == n && C.cols() == n, "A, C shapes");
  if (static_cast<Eigen::Index>(targets.size()) != n) {
    throw Error(ErrorCode::kInvalidArgument,
                "need exactly one target pole per state");
  }
  {
    std::vector<std::complex<double>> conj;
    for (const auto& t : targets) conj.push_back(std::conj(t));
    VectorXcd as_vec(n);
    for (Eigen::Index i = 0; i < n; ++i) as_vec(i) = targets[i];
    if (max_relative_pole_mismatch(as_vec, conj) > 1e-12) {
      throw Error(ErrorCode::kInvalidArgument,
                  "target poles are not closed under conjugation");
    }
  }
  if (!is_observable(A, C)) {
    throw Error(ErrorCode::kNotObservable, "(A, C) is not observable");
  }

  auto accept = [&](const MatrixXd& l) {
    return max_relative_pole_mismatch(eigenvalues(A - l * C), targets) <= 1e-6;
  };

  VectorXd l1;
  if (p == 1 && ackermann_observer(A, C.row(0), targets, &l1) &&
      accept(l1)) {
    return l1;
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int attempt = 0; attempt < 50; ++attempt) {
    MatrixXd g(p, n);
    for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = normal(rng);
    MatrixXd l;
    if (sylvester_observer(A, C, targets, g, &l) && accept(l)) return l;
  }
  const double scale = (1.0 + A.norm()) / (1.0 + C.norm());
  for (int attempt = 0; attempt < 50; ++attempt) {
    MatrixXd k0(n, p);
    for (Eigen::Index i = 0; i < k0.size(); ++i) k0.data()[i] = scale * normal(rng);
    VectorXd w(p);
    for (Eigen::Index i = 0; i < p; ++i) w(i) = normal(rng);
    const MatrixXd a_cyc = A - k0 * C;
    const Eigen::RowVectorXd c = w.transpose() * C;
    if (!ackermann_observer(a_cyc, c, targets, &l1)) continue;
    const MatrixXd l = k0 + l1 * w.transpose();
    if (accept(l)) return l;
  }
  throw Error(ErrorCode::kNumericalFailure,
              "pole placement did not reach the requested accuracy");
}

}  // namespace coopreg
