#include "ricci/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ricci/error.hpp"

namespace ricci {

LinearProgram::LinearProgram(std::size_t variables)
    : n_(variables), objective_(variables, 0.0), free_(variables, false) {}

void LinearProgram::set_objective(std::span<const double> c) {
  if (c.size() != n_) throw std::invalid_argument("objective size mismatch");
  std::copy(c.begin(), c.end(), objective_.begin());
}

void LinearProgram::add_row(std::span<const double> coeffs, Relation rel, double rhs) {
  if (coeffs.size() != n_) throw std::invalid_argument("row size mismatch");
  for (double c : coeffs)
    if (!std::isfinite(c)) throw std::invalid_argument("non-finite LP coefficient");
  if (!std::isfinite(rhs)) throw std::invalid_argument("non-finite LP bound");
  a_.insert(a_.end(), coeffs.begin(), coeffs.end());
  rel_.push_back(rel);
  rhs_.push_back(rhs);
}

void LinearProgram::add_row(std::initializer_list<std::pair<std::size_t, double>> terms, Relation rel,
                            double rhs) {
  std::vector<double> row(n_, 0.0);
  for (auto [var, c] : terms) row.at(var) += c;
  add_row(row, rel, rhs);
}

namespace {

constexpr double kPivotEps = 1e-12;
constexpr double kCostEps = 1e-12;
constexpr int kMaxIterations = 100000;

// Tableau over m constraint rows plus one cost row. Column `cols` holds the rhs.
class Tableau {
 public:
  Tableau(std::size_t m, std::size_t cols) : m_(m), cols_(cols), t_((m + 1) * (cols + 1), 0.0), basis_(m, 0) {}

  double& at(std::size_t r, std::size_t c) { return t_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return t_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  double& cost(std::size_t c) { return at(m_, c); }
  std::size_t rows() const { return m_; }
  std::size_t cols() const { return cols_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t pr, std::size_t pc) {
    const std::size_t w = cols_ + 1;
    double* prow = &t_[pr * w];
    const double inv = 1.0 / prow[pc];
    for (std::size_t c = 0; c < w; ++c) prow[c] *= inv;
    prow[pc] = 1.0;
    for (std::size_t r = 0; r <= m_; ++r) {
      if (r == pr) continue;
      double* row = &t_[r * w];
      const double f = row[pc];
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < w; ++c) row[c] -= f * prow[c];
      row[pc] = 0.0;
    }
    basis_[pr] = pc;
  }

  // Loads cost vector c and prices out the current basis.
  void price(std::span<const double> c) {
    for (std::size_t j = 0; j < cols_; ++j) cost(j) = c[j];
    at(m_, cols_) = 0.0;
    for (std::size_t r = 0; r < m_; ++r) {
      const double cb = c[basis_[r]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) at(m_, j) -= cb * at(r, j);
    }
  }

  void drop_row(std::size_t r) {
    const std::size_t w = cols_ + 1;
    t_.erase(t_.begin() + static_cast<std::ptrdiff_t>(r * w), t_.begin() + static_cast<std::ptrdiff_t>((r + 1) * w));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
    --m_;
  }

  // Runs primal simplex on the current cost row. `allowed` masks columns that
  // may enter. Returns false if unbounded.
  bool optimize(const std::vector<char>& allowed) {
    bool bland = false;
    for (int iter = 0; iter < kMaxIterations; ++iter) {
      std::size_t enter = cols_;
      double best = -kCostEps;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (!allowed[j]) continue;
        const double r = cost(j);
        if (bland) {
          if (r < -kCostEps) {
            enter = j;
            break;
          }
        } else if (r < best) {
          best = r;
          enter = j;
        }
      }
      if (enter == cols_) return true;

      std::size_t leave = m_;
      double ratio = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < m_; ++r) {
        const double a = at(r, enter);
        if (a <= kPivotEps) continue;
        const double q = std::max(rhs(r), 0.0) / a;
        if (q < ratio - 1e-15 || (std::abs(q - ratio) <= 1e-15 && leave < m_ && basis_[r] < basis_[leave])) {
          ratio = q;
          leave = r;
        }
      }
      if (leave == m_) return false;
      bland = ratio <= 1e-15;
      pivot(leave, enter);
    }
    throw SolverError("simplex iteration limit reached");
  }

 private:
  std::size_t m_;
  std::size_t cols_;
  std::vector<double> t_;
  std::vector<std::size_t> basis_;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) {
  const std::size_t n = lp.variables();

  std::vector<double> fixed_value(n, 0.0);
  std::vector<char> is_fixed(n, 0);
  for (auto [var, value] : lp.fixed()) {
    if (var >= n) throw std::invalid_argument("fixed variable out of range");
    is_fixed[var] = 1;
    fixed_value[var] = value;
  }

  // Structural columns: one per nonnegative variable, two per free variable.
  std::vector<long> col_pos(n, -1), col_neg(n, -1);
  std::size_t ns = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (is_fixed[j]) continue;
    col_pos[j] = static_cast<long>(ns++);
    if (lp.free_vars()[j]) col_neg[j] = static_cast<long>(ns++);
  }

  const std::size_t m = lp.rows();
  std::vector<Relation> rel(m);
  std::vector<double> b(m);
  std::vector<double> a(m * ns, 0.0);
  std::size_t n_slack = 0, n_art = 0;
  for (std::size_t r = 0; r < m; ++r) {
    auto row = lp.row(r);
    double rhs = lp.rhs(r);
    for (std::size_t j = 0; j < n; ++j) {
      if (row[j] == 0.0) continue;
      if (is_fixed[j]) {
        rhs -= row[j] * fixed_value[j];
        continue;
      }
      a[r * ns + col_pos[j]] = row[j];
      if (col_neg[j] >= 0) a[r * ns + col_neg[j]] = -row[j];
    }
    Relation rr = lp.relation(r);
    if (rhs < 0.0) {
      rhs = -rhs;
      for (std::size_t c = 0; c < ns; ++c) a[r * ns + c] = -a[r * ns + c];
      if (rr == Relation::LessEqual)
        rr = Relation::GreaterEqual;
      else if (rr == Relation::GreaterEqual)
        rr = Relation::LessEqual;
    }
    rel[r] = rr;
    b[r] = rhs;
    if (rr != Relation::Equal) ++n_slack;
    if (rr != Relation::LessEqual) ++n_art;
  }

  const std::size_t art0 = ns + n_slack;
  const std::size_t cols = art0 + n_art;
  Tableau tab(m, cols);
  {
    std::size_t s = ns, art = art0;
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < ns; ++c) tab.at(r, c) = a[r * ns + c];
      tab.rhs(r) = b[r];
      switch (rel[r]) {
        case Relation::LessEqual:
          tab.at(r, s) = 1.0;
          tab.basis()[r] = s++;
          break;
        case Relation::GreaterEqual:
          tab.at(r, s++) = -1.0;
          tab.at(r, art) = 1.0;
          tab.basis()[r] = art++;
          break;
        case Relation::Equal:
          tab.at(r, art) = 1.0;
          tab.basis()[r] = art++;
          break;
      }
    }
  }

  double scale = 1.0;
  for (double v : b) scale = std::max(scale, std::abs(v));

  std::vector<char> allowed(cols, 1);
  if (n_art > 0) {
    std::vector<double> phase1(cols, 0.0);
    for (std::size_t c = art0; c < cols; ++c) phase1[c] = 1.0;
    tab.price(phase1);
    tab.optimize(allowed);
    if (-tab.at(tab.rows(), cols) > lp_tolerance::feasibility * scale)
      throw Infeasible("linear program is infeasible");
    // Pivot remaining artificials out of the basis; rows with no other
    // support are redundant and dropped.
    for (std::size_t r = 0; r < tab.rows();) {
      if (tab.basis()[r] < art0) {
        ++r;
        continue;
      }
      std::size_t pc = cols;
      for (std::size_t c = 0; c < art0; ++c)
        if (std::abs(tab.at(r, c)) > 1e-9) {
          pc = c;
          break;
        }
      if (pc == cols) {
        tab.drop_row(r);
        continue;
      }
      tab.pivot(r, pc);
      ++r;
    }
    for (std::size_t c = art0; c < cols; ++c) allowed[c] = 0;
  }

  std::vector<double> cost(cols, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    if (col_pos[j] >= 0) cost[col_pos[j]] = lp.objective()[j];
    if (col_neg[j] >= 0) cost[col_neg[j]] = -lp.objective()[j];
  }
  tab.price(cost);
  if (!tab.optimize(allowed)) throw Unbounded("linear program is unbounded");

  std::vector<double> colval(cols, 0.0);
  for (std::size_t r = 0; r < tab.rows(); ++r) colval[tab.basis()[r]] = std::max(tab.rhs(r), 0.0);

  LpSolution sol;
  sol.argmin.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    if (is_fixed[j])
      sol.argmin[j] = fixed_value[j];
    else
      sol.argmin[j] = colval[col_pos[j]] - (col_neg[j] >= 0 ? colval[col_neg[j]] : 0.0);
  }
  double opt = 0.0;
  for (std::size_t j = 0; j < n; ++j) opt += lp.objective()[j] * sol.argmin[j];
  sol.optimum = opt;
  return sol;
}

}  // namespace ricci
