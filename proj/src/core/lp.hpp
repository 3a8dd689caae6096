#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "core/common.hpp"

namespace olab {

// Dense two-phase primal simplex with Bland's rule, templated on the scalar so
// the identical pivot path runs in double (eps ~ 1e-11) and in exact rationals
// (eps = 0). Problem form:
//
//   minimize    c.x
//   subject to  a_eq x == b_eq,   a_le x <= b_le,   x >= 0.
template <class Real>
struct LpProblem {
  int n = 0;
  std::vector<std::vector<Real>> a_eq;
  std::vector<Real> b_eq;
  std::vector<std::vector<Real>> a_le;
  std::vector<Real> b_le;
  std::vector<Real> c;
};

enum class lp_status { optimal, infeasible, unbounded };

template <class Real>
struct LpResult {
  lp_status status = lp_status::optimal;
  Real objective{};
  std::vector<Real> x;  // structural variables only
};

namespace detail {

// One simplex phase over an explicit tableau. rows[r] has width w+1 (rhs last),
// cost is the reduced-cost row (cost[w] == -objective). basis[r] is the column
// currently basic in row r. Columns with banned[j] never enter.
template <class Real>
lp_status simplex_phase(std::vector<std::vector<Real>>& rows, std::vector<Real>& cost,
                        std::vector<int>& basis, const std::vector<char>& banned,
                        std::size_t w, const Real& eps) {
  const std::size_t m = rows.size();
  const long iter_limit = 50000 + 200 * static_cast<long>(m + w);
  for (long iter = 0; iter <= iter_limit; ++iter) {
    // Bland entering rule: lowest-index improving column.
    std::size_t enter = w;
    for (std::size_t j = 0; j < w; ++j) {
      if (!banned[j] && cost[j] < -eps) { enter = j; break; }
    }
    if (enter == w) return lp_status::optimal;

    // Ratio test; ties broken toward the smallest basic index (Bland leaving rule).
    std::size_t leave = m;
    Real best_ratio{};
    for (std::size_t r = 0; r < m; ++r) {
      if (rows[r][enter] > eps) {
        Real ratio = rows[r][w] / rows[r][enter];
        if (leave == m || ratio < best_ratio ||
            (ratio == best_ratio && basis[r] < basis[leave])) {
          leave = r;
          best_ratio = ratio;
        }
      }
    }
    if (leave == m) return lp_status::unbounded;

    // Pivot on (leave, enter).
    {
      const Real piv = rows[leave][enter];
      for (std::size_t j = 0; j <= w; ++j) rows[leave][j] = rows[leave][j] / piv;
      rows[leave][enter] = Real(1);
    }
    for (std::size_t r = 0; r < m; ++r) {
      if (r == leave) continue;
      const Real f = rows[r][enter];
      if (f == Real(0)) continue;
      for (std::size_t j = 0; j <= w; ++j) rows[r][j] -= f * rows[leave][j];
      rows[r][enter] = Real(0);
    }
    {
      const Real f = cost[enter];
      if (f != Real(0)) {
        for (std::size_t j = 0; j <= w; ++j) cost[j] -= f * rows[leave][j];
        cost[enter] = Real(0);
      }
    }
    basis[leave] = static_cast<int>(enter);
  }
  fail_internal("simplex iteration limit exceeded");
}

}  // namespace detail

template <class Real>
LpResult<Real> lp_solve(const LpProblem<Real>& p, const Real& eps) {
  const std::size_t m_eq = p.a_eq.size(), m_le = p.a_le.size();
  const std::size_t m = m_eq + m_le;
  const std::size_t n = static_cast<std::size_t>(p.n);
  if (p.b_eq.size() != m_eq || p.b_le.size() != m_le || p.c.size() != n)
    fail_internal("lp_solve: inconsistent problem dimensions");

  // Column layout: [structural n][slacks m_le][artificials (assigned on demand)].
  const std::size_t slack0 = n;
  std::vector<std::vector<Real>> rows(m);
  std::vector<Real> rhs(m);
  std::vector<int> basis(m, -1);
  std::vector<std::size_t> needs_artificial;

  for (std::size_t r = 0; r < m; ++r) {
    const bool is_eq = r < m_eq;
    const auto& src = is_eq ? p.a_eq[r] : p.a_le[r - m_eq];
    if (src.size() != n) fail_internal("lp_solve: row width mismatch");
    Real b = is_eq ? p.b_eq[r] : p.b_le[r - m_eq];
    const bool flip = b < Real(0);
    rows[r].assign(n + m_le, Real(0));
    for (std::size_t j = 0; j < n; ++j) rows[r][j] = flip ? -src[j] : src[j];
    if (!is_eq) rows[r][slack0 + (r - m_eq)] = flip ? Real(-1) : Real(1);
    rhs[r] = flip ? -b : b;
    if (!is_eq && !flip)
      basis[r] = static_cast<int>(slack0 + (r - m_eq));
    else
      needs_artificial.push_back(r);
  }

  const std::size_t art0 = n + m_le;
  const std::size_t w = art0 + needs_artificial.size();
  for (auto& row : rows) {
    row.resize(w + 1, Real(0));
    // rhs goes last
  }
  for (std::size_t a = 0; a < needs_artificial.size(); ++a) {
    const std::size_t r = needs_artificial[a];
    rows[r][art0 + a] = Real(1);
    basis[r] = static_cast<int>(art0 + a);
  }
  for (std::size_t r = 0; r < m; ++r) rows[r][w] = rhs[r];

  std::vector<char> banned(w, 0);

  // Phase 1: minimize the artificial sum. Reduced costs: start from unit costs on
  // artificials and price out the rows where an artificial is basic.
  if (!needs_artificial.empty()) {
    std::vector<Real> cost(w + 1, Real(0));
    for (std::size_t a = 0; a < needs_artificial.size(); ++a) cost[art0 + a] = Real(1);
    for (std::size_t r : needs_artificial)
      for (std::size_t j = 0; j <= w; ++j) cost[j] -= rows[r][j];
    const lp_status st = detail::simplex_phase(rows, cost, basis, banned, w, eps);
    if (st == lp_status::unbounded) fail_internal("phase-1 simplex reported unbounded");
    Real p1 = -cost[w];
    const Real feas_tol = eps == Real(0) ? Real(0) : Real(1e-9);
    if (p1 > feas_tol) return {lp_status::infeasible, Real(0), {}};

    // Drive basic artificials out where possible; ban all artificials from phase 2.
    for (std::size_t r = 0; r < m; ++r) {
      if (basis[r] < static_cast<int>(art0)) continue;
      std::size_t piv_col = art0;
      for (std::size_t j = 0; j < art0; ++j) {
        const Real v = rows[r][j] < Real(0) ? -rows[r][j] : rows[r][j];
        if (v > eps) { piv_col = j; break; }
      }
      if (piv_col == art0) continue;  // redundant row; artificial stays basic at zero
      const Real piv = rows[r][piv_col];
      for (std::size_t j = 0; j <= w; ++j) rows[r][j] = rows[r][j] / piv;
      rows[r][piv_col] = Real(1);
      for (std::size_t rr = 0; rr < m; ++rr) {
        if (rr == r) continue;
        const Real f = rows[rr][piv_col];
        if (f == Real(0)) continue;
        for (std::size_t j = 0; j <= w; ++j) rows[rr][j] -= f * rows[r][j];
        rows[rr][piv_col] = Real(0);
      }
      basis[r] = static_cast<int>(piv_col);
    }
    for (std::size_t a = 0; a < needs_artificial.size(); ++a) banned[art0 + a] = 1;
  }

  // Phase 2: original costs priced out against the current basis.
  std::vector<Real> cost(w + 1, Real(0));
  for (std::size_t j = 0; j < n; ++j) cost[j] = p.c[j];
  for (std::size_t r = 0; r < m; ++r) {
    const int jb = basis[r];
    if (jb < 0) fail_internal("simplex basis incomplete");
    const Real f = cost[static_cast<std::size_t>(jb)];
    if (f == Real(0)) continue;
    for (std::size_t j = 0; j <= w; ++j) cost[j] -= f * rows[r][j];
    cost[static_cast<std::size_t>(jb)] = Real(0);
  }
  const lp_status st = detail::simplex_phase(rows, cost, basis, banned, w, eps);
  if (st != lp_status::optimal) return {st, Real(0), {}};

  LpResult<Real> out;
  out.status = lp_status::optimal;
  out.x.assign(n, Real(0));
  for (std::size_t r = 0; r < m; ++r) {
    const std::size_t jb = static_cast<std::size_t>(basis[r]);
    if (jb < n) out.x[jb] = rows[r][w];
  }
  if (eps != Real(0))
    for (auto& v : out.x)
      if (v < Real(0)) v = Real(0);  // scrub pivot noise
  Real obj{};
  for (std::size_t j = 0; j < n; ++j) obj += p.c[j] * out.x[j];
  out.objective = obj;
  return out;
}

// Zero-sum matrix game, row player minimizes / column player maximizes.
// Strategies come from the two player LPs after a positivity shift; a final scan
// replaces a mixed optimum by the earliest optimal pure strategy when one exists.
template <class Real>
struct GameSolT {
  Real value{};
  std::vector<Real> row_mix, col_mix;
};

// Row side only: the minimizing mix and value, skipping the column LP. The
// column LP carries one constraint per row, so for tall matrices solved once
// per round (approachability loops) this path is the cheap one.
template <class Real>
GameSolT<Real> solve_matrix_game_row_t(const std::vector<std::vector<Real>>& M, const Real& eps,
                                       const Real& pure_tol) {
  const std::size_t m = M.size();
  if (m == 0) fail_invalid("matrix game needs at least one row");
  const std::size_t n = M[0].size();
  if (n == 0) fail_invalid("matrix game needs at least one column");
  for (const auto& row : M)
    if (row.size() != n) fail_invalid("matrix game rows must share one width");

  Real lo = M[0][0];
  for (const auto& row : M)
    for (const auto& v : row) lo = std::min(lo, v);
  const Real shift = Real(1) - lo;

  LpProblem<Real> lr;
  lr.n = static_cast<int>(m);
  lr.c.assign(m, Real(-1));
  lr.a_le.assign(n, std::vector<Real>(m));
  lr.b_le.assign(n, Real(1));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < m; ++i) lr.a_le[j][i] = M[i][j] + shift;
  const auto ru = lp_solve(lr, eps);
  if (ru.status != lp_status::optimal) fail_internal("row-player LP not optimal");
  Real usum{};
  for (const auto& v : ru.x) usum += v;
  if (!(usum > Real(0))) fail_internal("row-player LP returned a zero solution");

  GameSolT<Real> out;
  out.value = Real(1) / usum - shift;
  out.row_mix.assign(m, Real(0));
  for (std::size_t i = 0; i < m; ++i) out.row_mix[i] = ru.x[i] / usum;
  for (std::size_t i = 0; i < m; ++i) {
    Real worst = M[i][0];
    for (std::size_t j = 1; j < n; ++j) worst = std::max(worst, M[i][j]);
    if (worst <= out.value + pure_tol) {
      std::fill(out.row_mix.begin(), out.row_mix.end(), Real(0));
      out.row_mix[i] = Real(1);
      break;
    }
  }
  return out;
}

template <class Real>
GameSolT<Real> solve_matrix_game_t(const std::vector<std::vector<Real>>& M, const Real& eps,
                                   const Real& pure_tol) {
  const std::size_t m = M.size();
  if (m == 0) fail_invalid("matrix game needs at least one row");
  const std::size_t n = M[0].size();
  if (n == 0) fail_invalid("matrix game needs at least one column");
  for (const auto& row : M)
    if (row.size() != n) fail_invalid("matrix game rows must share one width");

  Real lo = M[0][0];
  for (const auto& row : M)
    for (const auto& v : row) lo = std::min(lo, v);
  const Real shift = Real(1) - lo;  // entries of M' = M + shift are >= 1

  // Row player: maximize sum(u) subject to M'^T u <= 1, u >= 0.
  LpProblem<Real> lr;
  lr.n = static_cast<int>(m);
  lr.c.assign(m, Real(-1));
  lr.a_le.assign(n, std::vector<Real>(m));
  lr.b_le.assign(n, Real(1));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < m; ++i) lr.a_le[j][i] = M[i][j] + shift;
  const auto ru = lp_solve(lr, eps);
  if (ru.status != lp_status::optimal) fail_internal("row-player LP not optimal");
  Real usum{};
  for (const auto& v : ru.x) usum += v;
  if (!(usum > Real(0))) fail_internal("row-player LP returned a zero solution");
  const Real vshift_row = Real(1) / usum;

  // Column player: minimize sum(w) subject to M' w >= 1, w >= 0.
  LpProblem<Real> lc;
  lc.n = static_cast<int>(n);
  lc.c.assign(n, Real(1));
  lc.a_le.assign(m, std::vector<Real>(n));
  lc.b_le.assign(m, Real(-1));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) lc.a_le[i][j] = -(M[i][j] + shift);
  const auto cw = lp_solve(lc, eps);
  if (cw.status != lp_status::optimal) fail_internal("column-player LP not optimal");
  Real wsum{};
  for (const auto& v : cw.x) wsum += v;
  if (!(wsum > Real(0))) fail_internal("column-player LP returned a zero solution");

  GameSolT<Real> out;
  out.value = vshift_row - shift;
  out.row_mix.assign(m, Real(0));
  out.col_mix.assign(n, Real(0));
  for (std::size_t i = 0; i < m; ++i) out.row_mix[i] = ru.x[i] / usum;
  for (std::size_t j = 0; j < n; ++j) out.col_mix[j] = cw.x[j] / wsum;

  // Prefer the earliest optimal pure strategy on each side.
  for (std::size_t i = 0; i < m; ++i) {
    Real worst = M[i][0];
    for (std::size_t j = 1; j < n; ++j) worst = std::max(worst, M[i][j]);
    if (worst <= out.value + pure_tol) {
      std::fill(out.row_mix.begin(), out.row_mix.end(), Real(0));
      out.row_mix[i] = Real(1);
      break;
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    Real worst = M[0][j];
    for (std::size_t i = 1; i < m; ++i) worst = std::min(worst, M[i][j]);
    if (worst >= out.value - pure_tol) {
      std::fill(out.col_mix.begin(), out.col_mix.end(), Real(0));
      out.col_mix[j] = Real(1);
      break;
    }
  }
  return out;
}

}  // namespace olab
