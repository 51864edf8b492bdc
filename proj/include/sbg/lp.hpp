#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace sbg::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Feasibility tolerance on rows and bounds, and relative tolerance on the
// objective, used to accept a solution.
inline constexpr double kFeasibilityTolerance = 1e-6;

enum class Sense { Minimize, Maximize };
enum class Relation { LessEqual, Equal, GreaterEqual };
enum class Status { Optimal, Infeasible, Unbounded };

struct Term {
  int var;
  double coeff;
};

struct Row {
  std::vector<Term> terms;  // sorted by var, no duplicates
  Relation relation;
  double rhs;
};

struct Bounds {
  double lower = -kInf;
  double upper = kInf;
};

// Sparse linear program. Variables are free unless bounded explicitly.
class LinearProgram {
 public:
  explicit LinearProgram(Sense sense = Sense::Minimize) : sense_(sense) {}

  int add_variable(double lower = -kInf, double upper = kInf, double objective = 0.0);
  // Adds `count` variables sharing the same bounds; returns the first index.
  int add_variables(int count, double lower = -kInf, double upper = kInf);

  void set_objective(int var, double coeff);
  void set_bounds(int var, double lower, double upper);
  void set_sense(Sense sense) { sense_ = sense; }

  // Duplicate variables within `terms` are accumulated; exact zeros dropped.
  int add_row(std::vector<Term> terms, Relation relation, double rhs);

  Sense sense() const { return sense_; }
  int num_vars() const { return static_cast<int>(bounds_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  const std::vector<double>& objective() const { return objective_; }
  const std::vector<Bounds>& bounds() const { return bounds_; }
  const std::vector<Row>& rows() const { return rows_; }
  std::size_t num_nonzeros() const;

  double evaluate_objective(std::span<const double> point) const;

 private:
  Sense sense_;
  std::vector<double> objective_;
  std::vector<Bounds> bounds_;
  std::vector<Row> rows_;
};

struct LpSolution {
  Status status = Status::Infeasible;
  double objective_value = 0.0;
  std::vector<double> primal;
  std::int64_t iterations = 0;
};

struct SolverOptions {
  // Basis updates between refactorizations.
  int refactor_interval = 100;
  std::int64_t max_iterations = 5'000'000;
  // Random bound perturbation against degenerate stalling; 0 disables it.
  double perturbation = 1e-7;
};

// Bounded primal simplex. Deterministic: identical input yields identical
// output. Throws NumericalError if the final point cannot be verified.
LpSolution solve(const LinearProgram& lp, const SolverOptions& options = {});

struct Violation {
  enum class Kind { Row, LowerBound, UpperBound };
  Kind kind;
  int index;      // row or variable
  double amount;  // positive magnitude of the violation
};

struct FeasibilityReport {
  std::vector<Violation> violations;
  bool feasible() const { return violations.empty(); }
};

FeasibilityReport check_feasibility(const LinearProgram& lp, std::span<const double> point, double tol);

// CPLEX LP text format, for debugging with external solvers.
void write_lp_format(const LinearProgram& lp, std::ostream& out);

std::string to_string(Status status);

}  // namespace sbg::lp
