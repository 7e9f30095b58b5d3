#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace coopreg {

// Values of every decision variable of an SdpProblem, indexed by handle.
class Assignment {
 public:
  explicit Assignment(std::vector<Eigen::MatrixXd> values)
      : values_(std::move(values)) {}
  const Eigen::MatrixXd& operator[](int handle) const { return values_.at(handle); }
  const std::vector<Eigen::MatrixXd>& values() const { return values_; }

 private:
  std::vector<Eigen::MatrixXd> values_;
};

// Small dense feasibility SDP: find variables with every constraint
// F_i(vars) <= -margin I. Constraints are affine callables returning a
// symmetric matrix; Hermitian constraints go through realify().
class SdpProblem {
 public:
  using Expression = std::function<Eigen::MatrixXd(const Assignment&)>;

  // Returns a handle to pass to Assignment::operator[].
  int add_symmetric(std::string name, int n);
  int add_general(std::string name, int rows, int cols);

  // `dim` is the size of the matrix `f` returns.
  void add_constraint(std::string label, int dim, Expression f);

  // A value <= 0 selects the default 1e-8 * (1 + ||data||).
  void set_margin(double margin) { margin_ = margin; }
  double margin() const { return margin_; }

  int n_scalars() const;

  struct Variable {
    std::string name;
    bool symmetric;
    int rows;
    int cols;
  };
  struct Constraint {
    std::string label;
    int dim;
    Expression f;
  };
  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }

  // Maps a flat decision vector onto variable values.
  Assignment unpack(const Eigen::VectorXd& x) const;

 private:
  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  double margin_ = 0.0;
};

struct SdpSolution {
  std::vector<std::string> names;
  std::vector<Eigen::MatrixXd> values;
  // min over constraints of -lambda_max(F_i), from an independent eigensolve.
  double certified_margin = 0.0;
  double margin = 0.0;
  int newton_steps = 0;

  const Eigen::MatrixXd& operator[](int handle) const { return values.at(handle); }
  const Eigen::MatrixXd& value(const std::string& name) const;
};

struct SdpOptions {
  double ball_radius = 1e4;
  double tau_growth = 20.0;
  int max_outer = 60;
  int max_newton = 200;
  bool parallel = true;
};

// Throws InfeasibleError when the barrier lower bound proves no point in the
// ball reaches the margin, Error(kNumericalFailure) otherwise on breakdown.
SdpSolution solve_feasibility(const SdpProblem& problem,
                              const SdpOptions& options = {});

// [[Re H, -Im H], [Im H, Re H]]; negative definite iff H is.
Eigen::MatrixXd realify(const Eigen::MatrixXcd& h);

// Largest eigenvalue of the symmetric part.
double max_eigenvalue(const Eigen::MatrixXd& sym);

}  // namespace coopreg
