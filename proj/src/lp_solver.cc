#include "dubins_smooth/lp_solver.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>

#include "dubins_smooth/error.h"

namespace dubins_smooth {
namespace {

constexpr int kStallLimit = 50;
// Smallest pivot, relative to the largest eligible one, that the
// smallest-index rule may choose.
constexpr double kBlandPivotShare = 0.1;
// Objective decrease below which a pivot counts as degenerate.
constexpr double kStallDecrease = 1e-10;

enum class ColumnKind { kShift, kFlip, kSplitPlus, kSplitMinus };

struct ColumnMap {
  int var = 0;
  ColumnKind kind = ColumnKind::kShift;
};

void CheckDimensions(const LinearProgram& lp) {
  const size_t n = static_cast<size_t>(lp.n);
  const size_t m = static_cast<size_t>(lp.m);
  if (lp.n < 0 || lp.m < 0 || lp.c.size() != n || lp.b.size() != m ||
      lp.a.size() != n * m || lp.lower.size() != n || lp.upper.size() != n) {
    throw SmoothingError(ErrorCode::kDimensionMismatch,
                         "linear program dimensions are inconsistent");
  }
  for (double v : lp.c) {
    if (!std::isfinite(v)) {
      throw SmoothingError(ErrorCode::kDimensionMismatch,
                           "cost entries must be finite");
    }
  }
  for (double v : lp.a) {
    if (!std::isfinite(v)) {
      throw SmoothingError(ErrorCode::kDimensionMismatch,
                           "constraint entries must be finite");
    }
  }
  for (double v : lp.b) {
    if (!std::isfinite(v)) {
      throw SmoothingError(ErrorCode::kDimensionMismatch,
                           "right-hand side entries must be finite");
    }
  }
  for (size_t j = 0; j < n; ++j) {
    if (std::isnan(lp.lower[j]) || std::isnan(lp.upper[j]) ||
        lp.lower[j] == kLpInfinity || lp.upper[j] == -kLpInfinity) {
      throw SmoothingError(ErrorCode::kDimensionMismatch,
                           "variable bounds are malformed");
    }
  }
}

// Bounded-variable primal simplex on a dense tableau. All internal columns
// are nonnegative with an optional finite upper bound.
class Tableau {
 public:
  Tableau(const LinearProgram& lp, const SimplexOptions& options)
      : lp_(lp), options_(options) {}

  LpSolution Run() {
    LpSolution solution;
    for (int j = 0; j < lp_.n; ++j) {
      if (lp_.lower[j] > lp_.upper[j]) {
        solution.status = LpStatus::kInfeasible;
        solution.x.assign(lp_.n, 0.0);
        return solution;
      }
    }
    MapColumns();
    const std::vector<double> cost0 = StructuralCosts();
    Build();
    std::vector<double> cost = cost0;
    cost.resize(cols_, 0.0);
    if (num_artificial_ > 0) {
      std::vector<double> phase1(cols_, 0.0);
      for (int j = first_artificial_; j < cols_; ++j) phase1[j] = 1.0;
      const LpStatus status = Optimize(phase1);
      solution.iterations = iterations_;
      if (status == LpStatus::kIterationLimit) {
        solution.status = status;
        solution.x = Recover();
        return solution;
      }
      Refresh();
      double infeasibility = 0.0;
      for (int i = 0; i < m_; ++i) {
        if (basis_[i] >= first_artificial_) infeasibility += beta_[i];
      }
      if (infeasibility > kFeasibilityTolerance * std::max(1.0, scale_)) {
        solution.status = LpStatus::kInfeasible;
        solution.x = Recover();
        return solution;
      }
      RetireArtificials();
    }
    const LpStatus status = Optimize(cost);
    Refresh();
    solution.status = status;
    solution.iterations = iterations_;
    solution.x = Recover();
    for (int j = 0; j < lp_.n; ++j) {
      solution.objective += lp_.c[j] * solution.x[j];
    }
    return solution;
  }

 private:
  double& T(int i, int j) { return t_[static_cast<size_t>(i) * cols_ + j]; }

  void MapColumns() {
    m_ = lp_.m;
    for (int j = 0; j < lp_.n; ++j) {
      const bool lo = std::isfinite(lp_.lower[j]);
      const bool hi = std::isfinite(lp_.upper[j]);
      if (lo) {
        map_.push_back({j, ColumnKind::kShift});
        upper_.push_back(hi ? lp_.upper[j] - lp_.lower[j] : kLpInfinity);
      } else if (hi) {
        map_.push_back({j, ColumnKind::kFlip});
        upper_.push_back(kLpInfinity);
      } else {
        map_.push_back({j, ColumnKind::kSplitPlus});
        upper_.push_back(kLpInfinity);
        map_.push_back({j, ColumnKind::kSplitMinus});
        upper_.push_back(kLpInfinity);
      }
    }
    structural_ = static_cast<int>(map_.size());
    first_slack_ = structural_;
  }

  std::vector<double> StructuralCosts() const {
    std::vector<double> cost(structural_, 0.0);
    for (int j = 0; j < structural_; ++j) {
      const double cj = lp_.c[map_[j].var];
      cost[j] = (map_[j].kind == ColumnKind::kFlip ||
                 map_[j].kind == ColumnKind::kSplitMinus)
                    ? -cj
                    : cj;
    }
    return cost;
  }

  void Build() {
    upper_.resize(structural_);
    // Right-hand side after moving the fixed parts of shifted columns.
    rhs_.assign(m_, 0.0);
    sign_.assign(m_, 1.0);
    scale_ = 0.0;
    for (int i = 0; i < m_; ++i) {
      double r = lp_.b[i];
      for (int j = 0; j < lp_.n; ++j) {
        const double aij = lp_.A(i, j);
        if (aij == 0.0) continue;
        if (std::isfinite(lp_.lower[j])) {
          r -= aij * lp_.lower[j];
        } else if (std::isfinite(lp_.upper[j])) {
          r -= aij * lp_.upper[j];
        }
      }
      rhs_[i] = r;
      scale_ = std::max(scale_, std::fabs(r));
    }
    for (int i = 0; i < m_; ++i) {
      if (rhs_[i] < 0.0) sign_[i] = -1.0;
    }
    num_artificial_ = 0;
    for (int i = 0; i < m_; ++i) {
      if (sign_[i] < 0.0) ++num_artificial_;
    }
    first_artificial_ = first_slack_ + m_;
    cols_ = first_artificial_ + num_artificial_;
    for (int i = 0; i < m_ + num_artificial_; ++i) upper_.push_back(kLpInfinity);
    t_.assign(static_cast<size_t>(m_) * cols_, 0.0);
    basis_.assign(m_, -1);
    beta_.assign(m_, 0.0);
    at_upper_.assign(cols_, false);
    enterable_.assign(cols_, true);
    int art = first_artificial_;
    for (int i = 0; i < m_; ++i) {
      const double s = sign_[i];
      for (int j = 0; j < structural_; ++j) {
        const double aij = lp_.A(i, map_[j].var);
        const ColumnKind kind = map_[j].kind;
        const double v = (kind == ColumnKind::kFlip ||
                          kind == ColumnKind::kSplitMinus)
                             ? -aij
                             : aij;
        T(i, j) = s * v;
      }
      T(i, first_slack_ + i) = s;
      if (s < 0.0) {
        T(i, art) = 1.0;
        basis_[i] = art;
        ++art;
      } else {
        basis_[i] = first_slack_ + i;
      }
      beta_[i] = s * rhs_[i];
    }
    d_.assign(cols_, 0.0);
  }

  double NonbasicValue(int j) const {
    return at_upper_[j] ? upper_[j] : 0.0;
  }

  // Recomputes basic values from the basis inverse held in the slack
  // columns, removing drift accumulated by incremental updates.
  void Refresh() {
    std::vector<double> r = rhs_;
    std::vector<bool> is_basic(cols_, false);
    for (int i = 0; i < m_; ++i) is_basic[basis_[i]] = true;
    for (int j = 0; j < structural_; ++j) {
      if (is_basic[j] || !at_upper_[j]) continue;
      const ColumnMap& cm = map_[j];
      const double sgn = cm.kind == ColumnKind::kFlip ? -1.0 : 1.0;
      for (int i = 0; i < m_; ++i) {
        r[i] -= sgn * lp_.A(i, cm.var) * upper_[j];
      }
    }
    for (int i = 0; i < m_; ++i) {
      double v = 0.0;
      const double* row = &t_[static_cast<size_t>(i) * cols_ + first_slack_];
      for (int k = 0; k < m_; ++k) {
        if (row[k] != 0.0) v += row[k] * r[k];
      }
      beta_[i] = v;
    }
  }

  void RetireArtificials() {
    for (int j = first_artificial_; j < cols_; ++j) {
      enterable_[j] = false;
      upper_[j] = 0.0;
    }
    std::vector<bool> is_basic(cols_, false);
    for (int i = 0; i < m_; ++i) is_basic[basis_[i]] = true;
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < first_artificial_) continue;
      int best = -1;
      double best_abs = kPivotTolerance;
      for (int j = 0; j < first_artificial_; ++j) {
        const double v = std::fabs(T(i, j));
        if (v > best_abs && !is_basic[j]) {
          best_abs = v;
          best = j;
        }
      }
      if (best >= 0) {
        const double value = NonbasicValue(best);
        is_basic[basis_[i]] = false;
        is_basic[best] = true;
        Pivot(i, best);
        beta_[i] = value;
      }
    }
  }

  void Pivot(int r, int q) {
    double* prow = &t_[static_cast<size_t>(r) * cols_];
    const double inv = 1.0 / prow[q];
    nonzero_.clear();
    for (int j = 0; j < cols_; ++j) {
      if (prow[j] != 0.0) {
        prow[j] *= inv;
        nonzero_.push_back(j);
      }
    }
    prow[q] = 1.0;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* row = &t_[static_cast<size_t>(i) * cols_];
      const double f = row[q];
      if (f == 0.0) continue;
      for (int j : nonzero_) row[j] -= f * prow[j];
      row[q] = 0.0;
    }
    const double fd = d_[q];
    if (fd != 0.0) {
      for (int j : nonzero_) d_[j] -= fd * prow[j];
      d_[q] = 0.0;
    }
    basis_[r] = q;
  }

  // Step of the entering column q moving in direction dir at which the
  // basic variable of row i reaches a bound widened by slack, and whether
  // that bound is the upper one.
  std::pair<double, bool> RowLimit(int i, int q, double dir,
                                   double slack = 0.0) {
    const double change = -dir * T(i, q);
    if (change < 0.0) {
      return {(std::max(beta_[i], 0.0) + slack) / -change, false};
    }
    const double ub = upper_[basis_[i]];
    if (!std::isfinite(ub)) return {kLpInfinity, true};
    return {(std::max(ub - beta_[i], 0.0) + slack) / change, true};
  }

  LpStatus Optimize(const std::vector<double>& cost) {
    d_ = cost;
    for (int i = 0; i < m_; ++i) {
      const double cb = cost[basis_[i]];
      if (cb == 0.0) continue;
      const double* row = &t_[static_cast<size_t>(i) * cols_];
      for (int j = 0; j < cols_; ++j) d_[j] -= cb * row[j];
    }
    std::vector<bool> is_basic(cols_, false);
    for (int i = 0; i < m_; ++i) is_basic[basis_[i]] = true;
    double cost_scale = 1.0;
    for (double c : cost) cost_scale = std::max(cost_scale, std::fabs(c));
    const double dual_tol = kOptimalityTolerance * cost_scale;
    int stall = 0;
    while (true) {
      if (iterations_ >= options_.max_iterations) {
        return LpStatus::kIterationLimit;
      }
      const bool bland =
          options_.pricing == PricingRule::kBland || stall >= kStallLimit;
      int q = -1;
      double best = 0.0;
      for (int j = 0; j < cols_; ++j) {
        if (is_basic[j] || !enterable_[j]) continue;
        const double dj = d_[j];
        const bool improves =
            at_upper_[j] ? dj > dual_tol : dj < -dual_tol;
        if (!improves) continue;
        if (bland) {
          q = j;
          break;
        }
        if (std::fabs(dj) > best) {
          best = std::fabs(dj);
          q = j;
        }
      }
      if (q < 0) return LpStatus::kOptimal;
      ++iterations_;
      const double dir = at_upper_[q] ? -1.0 : 1.0;
      // Two-pass ratio test: find the largest step allowed with bounds
      // relaxed by the feasibility tolerance, then take the largest pivot
      // among the rows that block within it.
      double relaxed = upper_[q];
      for (int i = 0; i < m_; ++i) {
        if (std::fabs(T(i, q)) <= kPivotTolerance) continue;
        relaxed = std::min(
            relaxed, RowLimit(i, q, dir, kFeasibilityTolerance).first);
      }
      double max_pivot = 0.0;
      for (int i = 0; i < m_; ++i) {
        if (std::fabs(T(i, q)) > kPivotTolerance &&
            RowLimit(i, q, dir).first <= relaxed) {
          max_pivot = std::max(max_pivot, std::fabs(T(i, q)));
        }
      }
      double step = upper_[q];
      int leave = -1;
      bool leave_to_upper = false;
      double pivot = 0.0;
      for (int i = 0; i < m_; ++i) {
        const double tiq = T(i, q);
        if (std::fabs(tiq) <= kPivotTolerance) continue;
        const auto [limit, to_upper] = RowLimit(i, q, dir);
        if (limit > relaxed) continue;
        bool better;
        if (bland) {
          better = std::fabs(tiq) >= kBlandPivotShare * max_pivot &&
                   (leave < 0 || basis_[i] < basis_[leave]);
        } else {
          better = std::fabs(tiq) > pivot;
        }
        if (better) {
          step = limit;
          leave = i;
          leave_to_upper = to_upper;
          pivot = std::fabs(tiq);
        }
      }
      if (leave >= 0 && upper_[q] < step) {
        leave = -1;
        step = upper_[q];
      }
      if (!std::isfinite(step)) return LpStatus::kUnbounded;
      stall = step * std::fabs(d_[q]) <= kStallDecrease ? stall + 1 : 0;
      for (int i = 0; i < m_; ++i) {
        const double tiq = T(i, q);
        if (tiq != 0.0) beta_[i] -= dir * tiq * step;
      }
      const double entering = NonbasicValue(q) + dir * step;
      if (leave < 0) {
        at_upper_[q] = !at_upper_[q];
        continue;
      }
      const int out = basis_[leave];
      is_basic[out] = false;
      at_upper_[out] = leave_to_upper;
      is_basic[q] = true;
      at_upper_[q] = false;
      Pivot(leave, q);
      beta_[leave] = entering;
      if (out >= first_artificial_) enterable_[out] = false;
    }
  }

  std::vector<double> Recover() const {
    std::vector<double> value(cols_, 0.0);
    for (int j = 0; j < cols_; ++j) value[j] = NonbasicValue(j);
    for (int i = 0; i < m_; ++i) value[basis_[i]] = beta_[i];
    std::vector<double> x(lp_.n, 0.0);
    for (int j = 0; j < structural_; ++j) {
      const double v = std::clamp(value[j], 0.0, upper_[j]);
      const ColumnMap& cm = map_[j];
      switch (cm.kind) {
        case ColumnKind::kShift: x[cm.var] = lp_.lower[cm.var] + v; break;
        case ColumnKind::kFlip: x[cm.var] = lp_.upper[cm.var] - v; break;
        case ColumnKind::kSplitPlus: x[cm.var] += v; break;
        case ColumnKind::kSplitMinus: x[cm.var] -= v; break;
      }
    }
    for (int j = 0; j < lp_.n; ++j) {
      x[j] = std::clamp(x[j], lp_.lower[j], lp_.upper[j]);
    }
    return x;
  }

  const LinearProgram& lp_;
  SimplexOptions options_;
  int m_ = 0;
  int cols_ = 0;
  int structural_ = 0;
  int first_slack_ = 0;
  int first_artificial_ = 0;
  int num_artificial_ = 0;
  int iterations_ = 0;
  double scale_ = 0.0;
  std::vector<ColumnMap> map_;
  std::vector<double> upper_;
  std::vector<double> rhs_;
  std::vector<double> sign_;
  std::vector<double> t_;
  std::vector<int> basis_;
  std::vector<double> beta_;
  std::vector<double> d_;
  std::vector<bool> at_upper_;
  std::vector<bool> enterable_;
  std::vector<int> nonzero_;
};

std::string FormatNumber(double v) {
  if (v == kLpInfinity) return "inf";
  if (v == -kLpInfinity) return "-inf";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

double ParseNumber(const std::string& token) {
  if (token == "inf") return kLpInfinity;
  if (token == "-inf") return -kLpInfinity;
  size_t used = 0;
  const double v = std::stod(token, &used);
  if (used != token.size()) throw std::invalid_argument(token);
  return v;
}

}  // namespace

LinearProgram LinearProgram::Create(int num_vars, int num_rows) {
  LinearProgram lp;
  lp.n = num_vars;
  lp.m = num_rows;
  lp.c.assign(num_vars, 0.0);
  lp.a.assign(static_cast<size_t>(num_vars) * num_rows, 0.0);
  lp.b.assign(num_rows, 0.0);
  lp.lower.assign(num_vars, 0.0);
  lp.upper.assign(num_vars, kLpInfinity);
  return lp;
}

int LinearProgram::AddRow(double rhs) {
  a.resize(a.size() + n, 0.0);
  b.push_back(rhs);
  return m++;
}

const char* LpStatusName(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "Optimal";
    case LpStatus::kInfeasible: return "Infeasible";
    case LpStatus::kUnbounded: return "Unbounded";
    case LpStatus::kIterationLimit: return "IterationLimit";
  }
  return "Unknown";
}

LpSolution Solve(const LinearProgram& lp, int max_iterations) {
  SimplexOptions options;
  options.max_iterations = max_iterations;
  return Solve(lp, options);
}

LpSolution Solve(const LinearProgram& lp, const SimplexOptions& options) {
  CheckDimensions(lp);
  Tableau tableau(lp, options);
  return tableau.Run();
}

double MaxViolation(const LinearProgram& lp, const std::vector<double>& x) {
  double worst = 0.0;
  for (int i = 0; i < lp.m; ++i) {
    double lhs = 0.0;
    for (int j = 0; j < lp.n; ++j) lhs += lp.A(i, j) * x[j];
    worst = std::max(worst, lhs - lp.b[i]);
  }
  for (int j = 0; j < lp.n; ++j) {
    worst = std::max(worst, lp.lower[j] - x[j]);
    worst = std::max(worst, x[j] - lp.upper[j]);
  }
  return worst;
}

void WriteLpDump(const LinearProgram& lp, std::ostream& out) {
  out << "LP " << lp.n << ' ' << lp.m << '\n';
  out << "OBJ";
  for (double v : lp.c) out << ' ' << FormatNumber(v);
  out << '\n';
  for (int i = 0; i < lp.m; ++i) {
    out << "ROW";
    for (int j = 0; j < lp.n; ++j) out << ' ' << FormatNumber(lp.A(i, j));
    out << " <= " << FormatNumber(lp.b[i]) << '\n';
  }
  for (int j = 0; j < lp.n; ++j) {
    out << "BOUND " << j << ' ' << FormatNumber(lp.lower[j]) << ' '
        << FormatNumber(lp.upper[j]) << '\n';
  }
  out << "END\n";
}

LinearProgram ReadLpDump(std::istream& in) {
  auto fail = [](const std::string& what) {
    return SmoothingError(ErrorCode::kIo, "malformed LP dump: " + what);
  };
  std::string tag;
  int n = 0;
  int m = 0;
  if (!(in >> tag >> n >> m) || tag != "LP" || n < 0 || m < 0) {
    throw fail("header");
  }
  LinearProgram lp = LinearProgram::Create(n, m);
  std::string token;
  try {
    if (!(in >> tag) || tag != "OBJ") throw fail("objective");
    for (int j = 0; j < n; ++j) {
      if (!(in >> token)) throw fail("objective");
      lp.c[j] = ParseNumber(token);
    }
    for (int i = 0; i < m; ++i) {
      if (!(in >> tag) || tag != "ROW") throw fail("row");
      for (int j = 0; j < n; ++j) {
        if (!(in >> token)) throw fail("row");
        lp.A(i, j) = ParseNumber(token);
      }
      if (!(in >> token) || token != "<=" || !(in >> token)) throw fail("row");
      lp.b[i] = ParseNumber(token);
    }
    for (int j = 0; j < n; ++j) {
      int index = 0;
      std::string lo;
      std::string hi;
      if (!(in >> tag >> index >> lo >> hi) || tag != "BOUND" || index != j) {
        throw fail("bound");
      }
      lp.lower[j] = ParseNumber(lo);
      lp.upper[j] = ParseNumber(hi);
    }
  } catch (const std::invalid_argument&) {
    throw fail("number");
  } catch (const std::out_of_range&) {
    throw fail("number");
  }
  if (!(in >> tag) || tag != "END") throw fail("trailer");
  return lp;
}

}  // namespace dubins_smooth
