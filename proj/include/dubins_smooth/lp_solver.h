#ifndef DUBINS_SMOOTH_LP_SOLVER_H_
#define DUBINS_SMOOTH_LP_SOLVER_H_

#include <iosfwd>
#include <limits>
#include <vector>

namespace dubins_smooth {

inline constexpr double kLpInfinity = std::numeric_limits<double>::infinity();
inline constexpr double kPivotTolerance = 1e-10;
inline constexpr double kFeasibilityTolerance = 1e-7;
inline constexpr double kOptimalityTolerance = 1e-9;

// minimize c^T x subject to A x <= b, lower <= x <= upper.
struct LinearProgram {
  int n = 0;
  int m = 0;
  std::vector<double> c;
  std::vector<double> a;  // Row-major m x n.
  std::vector<double> b;
  std::vector<double> lower;
  std::vector<double> upper;

  // Zero costs and constraints, bounds [0, +inf).
  static LinearProgram Create(int num_vars, int num_rows);

  double& A(int row, int col) { return a[static_cast<size_t>(row) * n + col]; }
  double A(int row, int col) const {
    return a[static_cast<size_t>(row) * n + col];
  }

  // Appends a zero row with right-hand side rhs and returns its index.
  int AddRow(double rhs);
};

enum class LpStatus {
  kOptimal,
  kInfeasible,
  kUnbounded,
  kIterationLimit,
};

const char* LpStatusName(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> x;
  double objective = 0.0;
  int iterations = 0;
};

enum class PricingRule {
  // Smallest eligible index everywhere.
  kBland,
  // Most negative reduced cost, with Bland's rule during degenerate stalls.
  kDantzig,
};

struct SimplexOptions {
  int max_iterations = 200000;
  PricingRule pricing = PricingRule::kDantzig;
};

// Throws DimensionMismatch for malformed input.
LpSolution Solve(const LinearProgram& lp, int max_iterations);
LpSolution Solve(const LinearProgram& lp, const SimplexOptions& options);

// Largest violation of rows and bounds at x.
double MaxViolation(const LinearProgram& lp, const std::vector<double>& x);

void WriteLpDump(const LinearProgram& lp, std::ostream& out);
LinearProgram ReadLpDump(std::istream& in);

}  // namespace dubins_smooth

#endif  // DUBINS_SMOOTH_LP_SOLVER_H_
