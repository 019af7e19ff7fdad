#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace ricci {

enum class Relation { LessEqual, GreaterEqual, Equal };

// minimize c.x subject to rows (a.x REL b). Variables are nonnegative unless
// marked free; `fix` pins a variable to a value (gauge fixing).
class LinearProgram {
 public:
  explicit LinearProgram(std::size_t variables);

  std::size_t variables() const { return n_; }
  std::size_t rows() const { return rhs_.size(); }

  void set_objective(std::size_t var, double coeff) { objective_[var] = coeff; }
  void set_objective(std::span<const double> c);
  void set_free(std::size_t var, bool is_free = true) { free_[var] = is_free; }
  void fix(std::size_t var, double value) { fixed_.emplace_back(var, value); }

  void add_row(std::span<const double> coeffs, Relation rel, double rhs);
  // Sparse form: (variable, coefficient) pairs.
  void add_row(std::initializer_list<std::pair<std::size_t, double>> terms, Relation rel, double rhs);

  const std::vector<double>& objective() const { return objective_; }
  const std::vector<bool>& free_vars() const { return free_; }
  const std::vector<std::pair<std::size_t, double>>& fixed() const { return fixed_; }
  std::span<const double> row(std::size_t r) const { return {a_.data() + r * n_, n_}; }
  Relation relation(std::size_t r) const { return rel_[r]; }
  double rhs(std::size_t r) const { return rhs_[r]; }

 private:
  std::size_t n_;
  std::vector<double> objective_;
  std::vector<bool> free_;
  std::vector<std::pair<std::size_t, double>> fixed_;
  std::vector<double> a_;  // row-major, rows() x n_
  std::vector<Relation> rel_;
  std::vector<double> rhs_;
};

struct LpSolution {
  double optimum = 0.0;
  std::vector<double> argmin;
};

namespace lp_tolerance {
inline constexpr double feasibility = 1e-10;
inline constexpr double optimality = 1e-9;
inline constexpr double duality_gap = 1e-7;
}  // namespace lp_tolerance

// Dense two-phase tableau simplex. Entering columns follow Dantzig's rule and
// fall back to Bland's rule on degenerate pivots, which rules out cycling.
// Throws Infeasible or Unbounded.
LpSolution solve_lp(const LinearProgram& lp);

}  // namespace ricci
