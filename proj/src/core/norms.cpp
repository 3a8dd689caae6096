#include "core/norms.hpp"

#include <cmath>
#include <limits>

#include "core/lp.hpp"

namespace olab {

void NormSpec::validate() const {
  if (kind == Kind::lq) {
    if (!(q > 1.0) || !std::isfinite(q))
      fail_invalid("norm lq requires q in (1, inf); got q=" + fmt12(q));
  }
}

std::string NormSpec::name() const {
  switch (kind) {
    case Kind::l1: return "l1";
    case Kind::l2: return "l2";
    case Kind::linf: return "linf";
    case Kind::lq: return "lq(" + fmt12(q) + ")";
  }
  return "?";
}

double norm_of(const NormSpec& ns, const Vec& v) {
  switch (ns.kind) {
    case NormSpec::Kind::l1: {
      double s = 0;
      for (double x : v) s += std::fabs(x);
      return s;
    }
    case NormSpec::Kind::l2: {
      double s = 0;
      for (double x : v) s += x * x;
      return std::sqrt(s);
    }
    case NormSpec::Kind::linf: {
      double s = 0;
      for (double x : v) s = std::max(s, std::fabs(x));
      return s;
    }
    case NormSpec::Kind::lq: {
      double s = 0;
      for (double x : v) s += std::pow(std::fabs(x), ns.q);
      return std::pow(s, 1.0 / ns.q);
    }
  }
  return 0;
}

std::optional<Smoothness> smoothness_pair(const NormSpec& ns) {
  switch (ns.kind) {
    case NormSpec::Kind::l2: return Smoothness{2.0, 2.0};
    case NormSpec::Kind::lq:
      if (ns.q <= 2.0) return Smoothness{ns.q, ns.q};
      return Smoothness{2.0 * (ns.q - 1.0), 2.0};
    default: return std::nullopt;
  }
}

namespace {

// Exact LP distance for l1 / linf. Variables: lambda (h hull coefficients)
// followed by either k per-coordinate deviations (l1) or one radius (linf).
DistanceResult lp_distance(const Vec& y, const std::vector<Vec>& V, bool l1) {
  const std::size_t h = V.size(), k = y.size();
  const std::size_t extra = l1 ? k : 1;
  LpProblem<double> p;
  p.n = static_cast<int>(h + extra);
  p.c.assign(h + extra, 0.0);
  for (std::size_t e = 0; e < extra; ++e) p.c[h + e] = 1.0;
  p.a_eq.assign(1, std::vector<double>(h + extra, 0.0));
  for (std::size_t i = 0; i < h; ++i) p.a_eq[0][i] = 1.0;
  p.b_eq = {1.0};
  p.a_le.assign(2 * k, std::vector<double>(h + extra, 0.0));
  p.b_le.assign(2 * k, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    auto& up = p.a_le[2 * j];      //  (V lambda)_j - d_j <= y_j
    auto& dn = p.a_le[2 * j + 1];  // -(V lambda)_j - d_j <= -y_j
    for (std::size_t i = 0; i < h; ++i) {
      up[i] = V[i][j];
      dn[i] = -V[i][j];
    }
    const std::size_t dcol = l1 ? h + j : h;
    up[dcol] = -1.0;
    dn[dcol] = -1.0;
    p.b_le[2 * j] = y[j];
    p.b_le[2 * j + 1] = -y[j];
  }
  const auto r = lp_solve(p, 1e-11);
  if (r.status != lp_status::optimal) fail_internal("hull-distance LP not optimal");
  DistanceResult out;
  out.dist = std::max(0.0, r.objective);
  out.lambda.assign(r.x.begin(), r.x.begin() + static_cast<std::ptrdiff_t>(h));
  out.witness.assign(k, 0.0);
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < k; ++j) out.witness[j] += out.lambda[i] * V[i][j];
  return out;
}

// Away-step Frank-Wolfe on f(lambda) = (1/q) sum_j |y_j - (V lambda)_j|^q.
DistanceResult fw_distance(const Vec& y, const std::vector<Vec>& V, const NormSpec& ns) {
  const std::size_t h = V.size(), k = y.size();
  const double q = ns.kind == NormSpec::Kind::l2 ? 2.0 : ns.q;

  const auto fval = [&](const Vec& point) {
    double s = 0;
    for (std::size_t j = 0; j < k; ++j) s += std::pow(std::fabs(y[j] - point[j]), q);
    return s / q;
  };

  // Start at the single best vertex.
  std::size_t best = 0;
  double bestf = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < h; ++i) {
    const double f = fval(V[i]);
    if (f < bestf) { bestf = f; best = i; }
  }
  Vec lam(h, 0.0);
  lam[best] = 1.0;
  Vec p = V[best];

  Vec psi(k), grad(h), vd(k);
  const int max_iter = 200000;
  for (int iter = 0; iter < max_iter; ++iter) {
    if (iter % 64 == 63) {  // kill accumulated drift
      std::fill(p.begin(), p.end(), 0.0);
      for (std::size_t i = 0; i < h; ++i)
        if (lam[i] != 0.0)
          for (std::size_t j = 0; j < k; ++j) p[j] += lam[i] * V[i][j];
    }
    // psi_j = d/dr (1/q)|r|^q = sign(r)|r|^{q-1} at r = y - p; grad_i = -<psi, V_i>.
    for (std::size_t j = 0; j < k; ++j) {
      const double r = y[j] - p[j];
      psi[j] = q == 2.0 ? r : std::copysign(std::pow(std::fabs(r), q - 1.0), r);
    }
    double gdotlam = 0;
    std::size_t s = 0, a = h;
    for (std::size_t i = 0; i < h; ++i) {
      double g = 0;
      for (std::size_t j = 0; j < k; ++j) g -= psi[j] * V[i][j];
      grad[i] = g;
      gdotlam += lam[i] * g;
      if (g < grad[s]) s = i;
      if (lam[i] > 0 && (a == h || g > grad[a])) a = i;
    }
    const double fw_gap = gdotlam - grad[s];
    if (fw_gap <= 1e-18) break;
    const double away_gap = a == h ? -1.0 : grad[a] - gdotlam;

    bool away = away_gap > fw_gap && lam[a] < 1.0;
    double gmax;
    if (!away) {
      for (std::size_t j = 0; j < k; ++j) vd[j] = V[s][j] - p[j];
      gmax = 1.0;
    } else {
      for (std::size_t j = 0; j < k; ++j) vd[j] = p[j] - V[a][j];
      gmax = lam[a] / (1.0 - lam[a]);
    }

    double gamma;
    if (q == 2.0) {
      double num = 0, den = 0;
      for (std::size_t j = 0; j < k; ++j) {
        num += (y[j] - p[j]) * vd[j];
        den += vd[j] * vd[j];
      }
      if (den <= 0) break;
      gamma = std::clamp(num / den, 0.0, gmax);
    } else {
      // golden-section search over [0, gmax]
      const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
      double lo = 0.0, hi = gmax;
      const auto eval = [&](double g) {
        double sum = 0;
        for (std::size_t j = 0; j < k; ++j)
          sum += std::pow(std::fabs(y[j] - p[j] - g * vd[j]), q);
        return sum / q;
      };
      double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
      double f1 = eval(x1), f2 = eval(x2);
      for (int it2 = 0; it2 < 120; ++it2) {
        if (f1 < f2) {
          hi = x2; x2 = x1; f2 = f1;
          x1 = hi - phi * (hi - lo); f1 = eval(x1);
        } else {
          lo = x1; x1 = x2; f1 = f2;
          x2 = lo + phi * (hi - lo); f2 = eval(x2);
        }
      }
      gamma = 0.5 * (lo + hi);
    }
    if (gamma <= 0) break;

    if (!away) {
      for (std::size_t i = 0; i < h; ++i) lam[i] *= (1.0 - gamma);
      lam[s] += gamma;
    } else {
      for (std::size_t i = 0; i < h; ++i) lam[i] *= (1.0 + gamma);
      lam[a] -= gamma;
      if (lam[a] < 0) lam[a] = 0.0;
    }
    for (std::size_t j = 0; j < k; ++j) p[j] += gamma * vd[j];
    for (auto& l : lam)
      if (l < 1e-15) l = 0.0;
  }

  DistanceResult out;
  Vec diff(k);
  for (std::size_t j = 0; j < k; ++j) diff[j] = y[j] - p[j];
  out.dist = norm_of(ns, diff);
  out.witness = p;
  out.lambda = lam;
  return out;
}

}  // namespace

DistanceResult distance_to_hull(const Vec& y, const std::vector<Vec>& verts, const NormSpec& ns) {
  if (verts.empty()) fail_invalid("distance target needs at least one vertex");
  const std::size_t k = y.size();
  for (const auto& v : verts)
    if (v.size() != k) fail_invalid("distance target vertex dimension mismatch");
  ns.validate();
  if (verts.size() == 1) {
    Vec diff(k);
    for (std::size_t j = 0; j < k; ++j) diff[j] = y[j] - verts[0][j];
    return {norm_of(ns, diff), verts[0], {1.0}};
  }
  switch (ns.kind) {
    case NormSpec::Kind::l1: return lp_distance(y, verts, true);
    case NormSpec::Kind::linf: return lp_distance(y, verts, false);
    default: return fw_distance(y, verts, ns);
  }
}

}  // namespace olab
