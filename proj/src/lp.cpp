#include "sbg/lp.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace sbg::lp {

int LinearProgram::add_variable(double lower, double upper, double objective) {
  bounds_.push_back({lower, upper});
  objective_.push_back(objective);
  return static_cast<int>(bounds_.size()) - 1;
}

int LinearProgram::add_variables(int count, double lower, double upper) {
  const int first = num_vars();
  bounds_.insert(bounds_.end(), count, Bounds{lower, upper});
  objective_.insert(objective_.end(), count, 0.0);
  return first;
}

void LinearProgram::set_objective(int var, double coeff) { objective_.at(var) = coeff; }

void LinearProgram::set_bounds(int var, double lower, double upper) { bounds_.at(var) = {lower, upper}; }

int LinearProgram::add_row(std::vector<Term> terms, Relation relation, double rhs) {
  if (!std::isfinite(rhs)) throw std::invalid_argument("LinearProgram::add_row: rhs must be finite");
  std::sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) { return x.var < y.var; });
  std::vector<Term> merged;
  merged.reserve(terms.size());
  for (const Term& t : terms) {
    if (t.var < 0 || t.var >= num_vars()) throw std::out_of_range("LinearProgram::add_row: variable index");
    if (!merged.empty() && merged.back().var == t.var) {
      merged.back().coeff += t.coeff;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const Term& t) { return t.coeff == 0.0; });
  rows_.push_back({std::move(merged), relation, rhs});
  return static_cast<int>(rows_.size()) - 1;
}

std::size_t LinearProgram::num_nonzeros() const {
  std::size_t nnz = 0;
  for (const Row& r : rows_) nnz += r.terms.size();
  return nnz;
}

double LinearProgram::evaluate_objective(std::span<const double> point) const {
  double v = 0.0;
  for (std::size_t j = 0; j < objective_.size(); ++j) v += objective_[j] * point[j];
  return v;
}

FeasibilityReport check_feasibility(const LinearProgram& lp, std::span<const double> point, double tol) {
  if (point.size() != static_cast<std::size_t>(lp.num_vars())) {
    throw std::invalid_argument("check_feasibility: point has wrong length");
  }
  FeasibilityReport report;
  for (int i = 0; i < lp.num_rows(); ++i) {
    const Row& row = lp.rows()[i];
    double activity = 0.0;
    for (const Term& t : row.terms) activity += t.coeff * point[t.var];
    double excess = 0.0;
    switch (row.relation) {
      case Relation::LessEqual: excess = activity - row.rhs; break;
      case Relation::GreaterEqual: excess = row.rhs - activity; break;
      case Relation::Equal: excess = std::abs(activity - row.rhs); break;
    }
    if (excess > tol || std::isnan(activity)) report.violations.push_back({Violation::Kind::Row, i, excess});
  }
  for (int j = 0; j < lp.num_vars(); ++j) {
    const Bounds& b = lp.bounds()[j];
    if (point[j] < b.lower - tol) report.violations.push_back({Violation::Kind::LowerBound, j, b.lower - point[j]});
    if (point[j] > b.upper + tol) report.violations.push_back({Violation::Kind::UpperBound, j, point[j] - b.upper});
  }
  return report;
}

namespace {

void write_terms(std::ostream& out, const std::vector<std::pair<int, double>>& terms) {
  if (terms.empty()) {
    out << " 0 x0";
    return;
  }
  int on_line = 0;
  for (const auto& [var, coeff] : terms) {
    out << (coeff < 0 ? " - " : " + ") << std::abs(coeff) << " x" << var;
    if (++on_line % 8 == 0) out << "\n  ";
  }
}

}  // namespace

void write_lp_format(const LinearProgram& lp, std::ostream& out) {
  const auto old_precision = out.precision(17);
  out << (lp.sense() == Sense::Maximize ? "Maximize\n" : "Minimize\n") << " obj:";
  std::vector<std::pair<int, double>> terms;
  for (int j = 0; j < lp.num_vars(); ++j)
    if (lp.objective()[j] != 0.0) terms.emplace_back(j, lp.objective()[j]);
  write_terms(out, terms);
  out << "\nSubject To\n";
  for (int i = 0; i < lp.num_rows(); ++i) {
    const Row& row = lp.rows()[i];
    terms.clear();
    for (const Term& t : row.terms) terms.emplace_back(t.var, t.coeff);
    out << " c" << i << ":";
    write_terms(out, terms);
    switch (row.relation) {
      case Relation::LessEqual: out << " <= "; break;
      case Relation::GreaterEqual: out << " >= "; break;
      case Relation::Equal: out << " = "; break;
    }
    out << row.rhs << "\n";
  }
  out << "Bounds\n";
  for (int j = 0; j < lp.num_vars(); ++j) {
    const Bounds& b = lp.bounds()[j];
    const bool has_lo = std::isfinite(b.lower);
    const bool has_up = std::isfinite(b.upper);
    if (!has_lo && !has_up) {
      out << " x" << j << " free\n";
    } else if (has_lo && has_up) {
      out << " " << b.lower << " <= x" << j << " <= " << b.upper << "\n";
    } else if (has_lo) {
      if (b.lower != 0.0) out << " x" << j << " >= " << b.lower << "\n";
    } else {
      out << " -inf <= x" << j << " <= " << b.upper << "\n";
    }
  }
  out << "End\n";
  out.precision(old_precision);
}

std::string to_string(Status status) {
  switch (status) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
  }
  return "unknown";
}

}  // namespace sbg::lp
