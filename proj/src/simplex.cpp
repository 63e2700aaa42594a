#include "flexnd/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "flexnd/error.hpp"

namespace flexnd {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr int kDegenerateLimit = 1000;
constexpr int kMaxPivots = 200000;

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

bool LinearProgramModel::add_row(LpRow row) {
  std::sort(row.terms.begin(), row.terms.end());
  for (const LpRow& r : rows) {
    if (r.rhs == row.rhs && r.terms == row.terms) return false;
  }
  rows.push_back(std::move(row));
  return true;
}

std::string LinearProgramModel::dump() const {
  std::ostringstream os;
  os << "min";
  for (int j = 0; j < num_vars(); ++j) os << ' ' << format_double(cost[idx(j)]) << "*x" << j;
  os << '\n';
  for (const LpRow& r : rows) {
    os << ">= " << format_double(r.rhs);
    for (const auto& [var, coef] : r.terms) os << ' ' << format_double(coef) << "*x" << var;
    if (!r.tag.empty()) os << "  # " << r.tag;
    os << '\n';
  }
  return os.str();
}

LpSolution solve_lp(const LinearProgramModel& model) {
  const int n = model.num_vars();
  const int rows = static_cast<int>(model.rows.size());

  // Substitute x = 1 - x' for negative costs so every cost is non-negative.
  std::vector<char> flipped(idx(n), 0);
  std::vector<double> c(model.cost);
  for (int j = 0; j < n; ++j) {
    if (c[idx(j)] < 0) {
      flipped[idx(j)] = 1;
      c[idx(j)] = -c[idx(j)];
    }
  }
  std::vector<double> b(idx(rows));
  std::vector<std::vector<std::pair<int, double>>> terms(idx(rows));
  for (int i = 0; i < rows; ++i) {
    const LpRow& r = model.rows[idx(i)];
    b[idx(i)] = r.rhs;
    for (auto [var, coef] : r.terms) {
      if (var < 0 || var >= n) throw Error(ErrorKind::kInvalidArgument, "row variable out of range");
      if (flipped[idx(var)]) {
        b[idx(i)] -= coef;
        coef = -coef;
      }
      terms[idx(i)].emplace_back(var, coef);
    }
  }

  // Dual: max b.y - 1.z  s.t.  A^T y - z + s = c,  y, z, s >= 0.
  // Columns: y_0..y_{rows-1}, z_0..z_{n-1}, s_0..s_{n-1}; last column is rhs.
  const int cols = rows + 2 * n;
  const int width = cols + 1;
  std::vector<double> t(idx(n * width), 0.0);
  auto at = [&](int r, int k) -> double& { return t[idx(r * width + k)]; };
  for (int i = 0; i < rows; ++i) {
    for (auto [var, coef] : terms[idx(i)]) at(var, i) += coef;
  }
  for (int j = 0; j < n; ++j) {
    at(j, rows + j) = -1.0;
    at(j, rows + n + j) = 1.0;
    at(j, cols) = c[idx(j)];
  }
  std::vector<double> obj(idx(cols), 0.0);  // reduced profit per column
  for (int i = 0; i < rows; ++i) obj[idx(i)] = b[idx(i)];
  for (int j = 0; j < n; ++j) obj[idx(rows + j)] = -1.0;
  std::vector<int> basis(idx(n));
  for (int j = 0; j < n; ++j) basis[idx(j)] = rows + n + j;

  int pivots = 0;
  int degenerate_run = 0;
  while (true) {
    const bool bland = degenerate_run >= kDegenerateLimit;
    int enter = -1;
    for (int k = 0; k < cols; ++k) {
      if (obj[idx(k)] <= kPivotTol) continue;
      if (enter < 0 || (!bland && obj[idx(k)] > obj[idx(enter)])) enter = k;
      if (bland) break;
    }
    if (enter < 0) break;
    int leave = -1;
    double best = 0.0;
    for (int r = 0; r < n; ++r) {
      const double a = at(r, enter);
      if (a <= kPivotTol) continue;
      const double ratio = at(r, cols) / a;
      if (leave < 0 || ratio < best - kPivotTol) {
        leave = r;
        best = ratio;
      } else if (ratio <= best + kPivotTol && basis[idx(r)] < basis[idx(leave)]) {
        leave = r;
      }
    }
    if (leave < 0) {
      throw Error(ErrorKind::kLpInfeasible, "rows cannot be satisfied within 0 <= x <= 1");
    }
    degenerate_run = best <= kPivotTol ? degenerate_run + 1 : 0;
    if (++pivots > kMaxPivots) throw Error(ErrorKind::kBudgetExceeded, "simplex pivot limit");

    const double piv = at(leave, enter);
    for (int k = 0; k <= cols; ++k) at(leave, k) /= piv;
    for (int r = 0; r < n; ++r) {
      if (r == leave) continue;
      const double f = at(r, enter);
      if (f == 0.0) continue;
      for (int k = 0; k <= cols; ++k) at(r, k) -= f * at(leave, k);
    }
    const double f = obj[idx(enter)];
    for (int k = 0; k < cols; ++k) obj[idx(k)] -= f * at(leave, k);
    basis[idx(leave)] = enter;
  }

  LpSolution sol;
  sol.pivots = pivots;
  sol.x.assign(idx(n), 0.0);
  for (int j = 0; j < n; ++j) {
    double v = std::clamp(-obj[idx(rows + n + j)], 0.0, 1.0);
    if (flipped[idx(j)]) v = 1.0 - v;
    sol.x[idx(j)] = v;
    sol.objective += model.cost[idx(j)] * v;
  }
  return sol;
}

}  // namespace flexnd
