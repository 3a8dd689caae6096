#include "core/conc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/rng.hpp"

namespace olab {

double ConcParams::nan_marker() { return std::numeric_limits<double>::quiet_NaN(); }

namespace {

double need(double v, const char* field, const std::string& kind) {
  if (std::isnan(v)) fail_invalid(kind + " requires parameter " + field);
  return v;
}

double need_pos(double v, const char* field, const std::string& kind) {
  need(v, field, kind);
  if (!(v > 0)) fail_invalid(kind + " requires " + field + " > 0; got " + fmt12(v));
  return v;
}

double need_nonneg(double v, const char* field, const std::string& kind) {
  need(v, field, kind);
  if (v < 0) fail_invalid(kind + " requires " + field + " >= 0; got " + fmt12(v));
  return v;
}

double need_T(double v, const std::string& kind) {
  need(v, "T", kind);
  if (v < 1) fail_invalid(kind + " requires T >= 1; got " + fmt12(v));
  return v;
}

// (sigma, p) for a smooth kind: from the norm when one is supplied, otherwise
// from the direct fields. want_p2 restricts to kinds built on (sigma,2)-smooth
// squared norms.
Smoothness smooth_params(const ConcParams& cp, const std::string& kind, bool want_p2) {
  Smoothness sp;
  if (cp.has_norm) {
    const auto got = smoothness_pair(cp.norm);
    if (!got)
      fail_invalid(kind + ": norm " + cp.norm.name() +
                   " carries no smoothness pair; compare it to a smooth norm first (the "
                   "norm-comparison device) and run the bound there");
    sp = *got;
    if (!std::isnan(cp.sigma) && std::abs(cp.sigma - sp.sigma) > 1e-9)
      fail_invalid(kind + ": sigma " + fmt12(cp.sigma) + " conflicts with the norm's table value " +
                   fmt12(sp.sigma));
  } else {
    sp.sigma = need_pos(cp.sigma, "sigma", kind);
    sp.p = want_p2 ? 2.0 : need(cp.p, "p", kind);
  }
  if (want_p2 && sp.p != 2.0)
    fail_invalid(kind + " needs a (sigma,2)-smooth squared norm; " +
                 (cp.has_norm ? "norm " + cp.norm.name() + " gives p = " + fmt12(sp.p)
                              : "got p = " + fmt12(sp.p)) +
                 " (use q >= 2 or compare into such a norm first)");
  if (!(sp.p > 1) || sp.p > 2)
    fail_invalid(kind + " requires 1 < p <= 2; got p = " + fmt12(sp.p));
  if (!(sp.sigma > 0)) fail_invalid(kind + " requires sigma > 0; got " + fmt12(sp.sigma));
  return sp;
}

double pinelis_c(double sigma, double lambda, double B) {
  return 1.0 + sigma * (std::exp(lambda * B) - 1.0 - lambda * B);
}

}  // namespace

double concentration_bound(const std::string& kind, const ConcParams& cp) {
  if (kind == "azuma") {
    const double T = need_T(cp.T, kind);
    const double theta = need_nonneg(cp.theta, "theta", kind);
    const double c = need_pos(cp.c, "c", kind);
    return 2.0 * std::exp(-T * theta * theta / (2.0 * c));
  }
  if (kind == "pinelis_step" || kind == "pinelis_mgf") {
    const double lambda = need_nonneg(cp.lambda, "lambda", kind);
    const double B = need_nonneg(cp.B, "B", kind);
    const Smoothness sp = smooth_params(cp, kind, /*want_p2=*/true);
    const double c = pinelis_c(sp.sigma, lambda, B);
    if (kind == "pinelis_step") return c;
    const double T = need_T(cp.T, kind);
    return 2.0 * std::pow(c, T);
  }
  if (kind == "pinelis_tail") {
    const double T = need_T(cp.T, kind);
    const double B = need_pos(cp.B, "B", kind);
    const double eps = need_nonneg(cp.eps, "eps", kind);
    const Smoothness sp = smooth_params(cp, kind, /*want_p2=*/true);
    if (!(T > eps / (2.0 * sp.sigma * B)))
      fail_invalid("pinelis_tail is valid only for T > eps/(2 sigma B); got T = " + fmt12(T) +
                   ", eps/(2 sigma B) = " + fmt12(eps / (2.0 * sp.sigma * B)));
    return 2.0 * std::exp(-eps * eps / (4.0 * T * sp.sigma * B * B));
  }
  if (kind == "pinelis_max_exp") {
    const double T = need_T(cp.T, kind);
    const double B = need_pos(cp.B, "B", kind);
    const double ng = need(cp.n_gamma, "n_gamma", kind);
    if (ng < 1) fail_invalid(kind + " requires n_gamma >= 1; got " + fmt12(ng));
    const Smoothness sp = smooth_params(cp, kind, /*want_p2=*/true);
    if (!(T >= std::log(2.0 * ng) / sp.sigma))
      fail_invalid("pinelis_max_exp is valid only for T >= log(2 n_gamma)/sigma; got T = " +
                   fmt12(T) + ", log(2 n_gamma)/sigma = " + fmt12(std::log(2.0 * ng) / sp.sigma));
    return 2.0 * B * std::sqrt(sp.sigma * std::log(2.0 * ng) * T);
  }
  if (kind == "prob_to_exp") {
    const double a = need_nonneg(cp.a, "a", kind);
    const double b = need_pos(cp.b, "b", kind);
    const double N = need(cp.N, "N", kind);
    if (N < 1) fail_invalid(kind + " requires N >= 1; got " + fmt12(N));
    return a + (std::sqrt(std::log(2.0 * N)) + 1.0) * std::sqrt(4.0 / b);
  }
  if (kind == "smooth_tail") {
    const double T = need_T(cp.T, kind);
    if (T < 2)
      fail_invalid("smooth_tail requires T >= 2 (log^3 T must be positive); got T = " + fmt12(T));
    const double nu = need_pos(cp.nu, "nu", kind);
    const Smoothness sp = smooth_params(cp, kind, /*want_p2=*/false);
    const double lo = cp.c_abs * 8.0 * std::pow(sp.sigma, 1.0 / sp.p) *
                      std::pow(std::log(T), 1.5) / std::pow(T, 1.0 - 1.0 / sp.p);
    if (!(nu > lo))
      fail_invalid("smooth_tail is valid only for nu > 8 sigma^{1/p} log^{3/2}(T) / T^{1-1/p}"
                   " (times c_abs); got nu = " +
                   fmt12(nu) + ", lower limit = " + fmt12(lo));
    const double logT = std::log(T);
    return 2.0 * std::exp(-nu * nu * std::pow(T, 2.0 - 2.0 / sp.p) /
                          (2.0 * std::pow(sp.sigma, 2.0 / sp.p) * logT * logT * logT));
  }
  if (kind == "gensmooth") {
    const double T = need_T(cp.T, kind);
    const double theta = need_nonneg(cp.theta, "theta", kind);
    const double q = need(cp.q, "q", kind);
    if (q < 1) fail_invalid(kind + " requires q >= 1; got " + fmt12(q));
    const double p = need(cp.p, "p", kind);
    if (!(p > 1) || p > 2) fail_invalid(kind + " requires 1 < p <= 2; got p = " + fmt12(p));
    const double sigma = need_pos(cp.sigma, "sigma", kind);
    const double r = need_pos(cp.r_payoff, "r_payoff", kind);
    const double R = need_pos(cp.R, "R", kind);
    const double drift = sigma * T * std::pow(r, p) / p;
    const double dev = std::pow(theta, q);
    if (dev < drift)
      fail_invalid("gensmooth is valid only for theta^q >= sigma T r_payoff^p / p; got theta^q = " +
                   fmt12(dev) + ", drift = " + fmt12(drift));
    const double gap = dev - drift;
    return std::exp(-gap * gap / (2.0 * r * r * R * R * T));
  }
  fail_invalid("unknown concentration bound kind '" + kind + "'");
}

double smooth_tail_threshold(const ConcParams& cp) {
  const std::string kind = "smooth_tail_threshold";
  const double T = need_T(cp.T, kind);
  const double nu = need_pos(cp.nu, "nu", kind);
  const double R = need_pos(cp.R, "R", kind);
  const Smoothness sp = smooth_params(cp, kind, /*want_p2=*/false);
  return 128.0 * cp.c_abs *
         (std::pow(sp.sigma, 1.0 / sp.p) * R / std::pow(T, 1.0 - 1.0 / sp.p) + nu * R);
}

// ---------------------------------------------------------------------------
// MDS specification and Monte Carlo tail check

void VecTree::validate() const {
  if (T < 1) fail_invalid("vector tree needs depth T >= 1");
  if (k < 1) fail_invalid("vector tree needs dimension k >= 1");
  if (T > 62 || nodes.size() != (1ull << T) - 1)
    fail_invalid("vector tree of depth " + std::to_string(T) + " needs 2^T-1 nodes; got " +
                 std::to_string(nodes.size()));
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (static_cast<int>(nodes[i].size()) != k)
      fail_invalid("vector tree node " + std::to_string(i) + " is not a " + std::to_string(k) +
                   "-vector");
}

void MdsSpec::validate() const {
  const bool dense = !tree.nodes.empty();
  if (dense) {
    if (!palette.empty())
      fail_invalid("mds spec must use either a dense tree or a palette, not both");
    tree.validate();
  } else {
    if (palette.empty()) fail_invalid("mds spec needs a dense tree or a nonempty palette");
    if (T < 1) fail_invalid("mds spec needs depth T >= 1");
    if (T > 200) fail_invalid("mds spec palette mode supports T <= 200; got " + std::to_string(T));
    if (k < 1) fail_invalid("mds spec needs dimension k >= 1");
    for (std::size_t i = 0; i < palette.size(); ++i)
      if (static_cast<int>(palette[i].size()) != k)
        fail_invalid("mds palette entry " + std::to_string(i) + " is not a " + std::to_string(k) +
                     "-vector");
  }
  if (!(B > 0)) fail_invalid("mds spec needs step bound B > 0");
  effective_sigma();  // validates the norm and any supplied sigma
  const auto check_node = [&](const Vec& v, const std::string& where) {
    const double n = norm_of(norm, v);
    if (n > B + 1e-9)
      fail_invalid("mds " + where + " has norm " + fmt12(n) + " > step bound B = " + fmt12(B));
  };
  if (dense)
    for (std::size_t i = 0; i < tree.nodes.size(); ++i)
      check_node(tree.nodes[i], "tree node " + std::to_string(i));
  else
    for (std::size_t i = 0; i < palette.size(); ++i)
      check_node(palette[i], "palette entry " + std::to_string(i));
}

double MdsSpec::effective_sigma() const {
  const auto sp = smoothness_pair(norm);
  if (!sp)
    fail_invalid("mds spec: norm " + norm.name() +
                 " carries no smoothness pair; compare it to a smooth norm first (the "
                 "norm-comparison device) and verify the bound there");
  if (sp->p != 2.0)
    fail_invalid("mds spec needs a (sigma,2)-smooth squared norm; norm " + norm.name() +
                 " gives p = " + fmt12(sp->p) + " (use q >= 2)");
  if (!std::isnan(sigma) && std::abs(sigma - sp->sigma) > 1e-9)
    fail_invalid("mds spec sigma " + fmt12(sigma) + " conflicts with the norm's table value " +
                 fmt12(sp->sigma));
  return sp->sigma;
}

namespace {

// Procedural node pick: depends only on (depth, path prefix), so the values
// form a well-defined tree, reproducible across runs and thread counts. Paths
// deeper than 63 reuse the first 63 signs (still prefix-measurable).
std::size_t palette_pick(std::uint64_t palette_seed, std::size_t psize, int t,
                         std::uint64_t path_bits) {
  const std::uint64_t prefix =
      t <= 0 ? 0 : (t >= 64 ? path_bits : path_bits & ((1ull << t) - 1));
  const std::uint64_t h = mix64(palette_seed ^ mix64(prefix * 2u + 1u) ^
                                (0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(t)));
  return static_cast<std::size_t>(h % psize);
}

}  // namespace

Vec MdsSpec::node_at(int t, std::uint64_t path_bits) const {
  if (!tree.nodes.empty()) {
    std::size_t node = 0;
    for (int s = 0; s < t; ++s) node = 2 * node + ((path_bits >> s) & 1 ? 2 : 1);
    return tree.nodes[node];
  }
  return palette[palette_pick(palette_seed, palette.size(), t, path_bits)];
}

TailReport mc_tail_report(const MdsSpec& m, const Vec& thresholds, long long samples,
                          std::uint64_t seed, int threads) {
  m.validate();
  if (thresholds.empty()) fail_invalid("mc_tail_report needs at least one threshold");
  for (double th : thresholds)
    if (!(th > 0)) fail_invalid("mc_tail_report thresholds must be positive; got " + fmt12(th));
  if (samples < 1) fail_invalid("mc_tail_report needs samples >= 1");
  const int T = m.depth();
  const int k = m.dim();
  const double sigma = m.effective_sigma();

  const std::int64_t chunk = 8192;
  const std::int64_t n_chunks = (samples + chunk - 1) / chunk;
  std::vector<std::vector<long long>> counts(static_cast<std::size_t>(n_chunks),
                                             std::vector<long long>(thresholds.size(), 0));
  const bool dense = !m.tree.nodes.empty();
  parallel_chunks(samples, chunk, threads, [&](std::int64_t ci, std::int64_t lo, std::int64_t hi) {
    Rng rng(seed, 0x6d647300ull + static_cast<std::uint64_t>(ci));
    Vec sum(k);
    auto& row = counts[static_cast<std::size_t>(ci)];
    for (std::int64_t s = lo; s < hi; ++s) {
      std::fill(sum.begin(), sum.end(), 0.0);
      std::uint64_t path = 0;
      std::size_t node = 0;
      for (int t = 0; t < T; ++t) {
        const int eps = rng.next_sign();
        const Vec& x = dense
                           ? m.tree.nodes[node]
                           : m.palette[palette_pick(m.palette_seed, m.palette.size(), t, path)];
        for (int j = 0; j < k; ++j) sum[j] += eps * x[j];
        if (dense) node = 2 * node + (eps > 0 ? 2 : 1);
        if (eps > 0 && t < 63) path |= 1ull << t;
      }
      const double nrm = norm_of(m.norm, sum);
      for (std::size_t i = 0; i < thresholds.size(); ++i)
        if (nrm > thresholds[i]) ++row[i];
    }
  });
  std::vector<long long> total(thresholds.size(), 0);
  for (const auto& row : counts)
    for (std::size_t i = 0; i < row.size(); ++i) total[i] += row[i];

  TailReport rep;
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    TailRow r;
    r.threshold = thresholds[i];
    r.empirical = static_cast<double>(total[i]) / static_cast<double>(samples);
    r.se = std::sqrt(r.empirical * (1.0 - r.empirical) / static_cast<double>(samples));
    r.valid = T > r.threshold / (2.0 * sigma * m.B);
    r.bound =
        2.0 * std::exp(-r.threshold * r.threshold / (4.0 * T * sigma * m.B * m.B));
    r.pass = r.empirical <= r.bound + 3.0 * r.se;
    if (r.valid && !r.pass) rep.holds = false;
    rep.rows.push_back(r);
  }
  return rep;
}

double mds_sup_estimate(const std::vector<Vec>& H, const NormSpec& norm, int T, WpMode mode) {
  return 2.0 * walsh_paley_sup(H, norm, T, mode);
}

}  // namespace olab
