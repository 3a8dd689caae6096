#include "core/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace olab {

using boost::multiprecision::cpp_int;

void RealTree::validate() const {
  if (T < 1) fail_invalid("tree depth must be >= 1; got " + std::to_string(T));
  std::size_t want = (std::size_t{1} << T) - 1;
  if (nodes.size() != want)
    fail_invalid("tree of depth " + std::to_string(T) + " needs " + std::to_string(want) +
                 " nodes; got " + std::to_string(nodes.size()));
}

namespace {

void check_tree_set(const std::vector<RealTree>& V, const char* what) {
  if (V.empty()) fail_invalid(std::string(what) + " requires a nonempty tree set");
  V.front().validate();
  int T = V.front().T;
  for (const RealTree& v : V) {
    v.validate();
    if (v.T != T)
      fail_invalid(std::string(what) + " requires trees of one common depth; got depths " +
                   std::to_string(T) + " and " + std::to_string(v.T));
  }
  double paths = std::ldexp(1.0, T) * static_cast<double>(V.size()) * T;
  if (paths > 1e8)
    fail_budget(std::string(what) + ": 2^T * |V| * T = " + fmt12(paths) +
                " path steps exceed the exhaustive budget 1e8");
}

}  // namespace

double finite_class_bound(const std::vector<RealTree>& V) {
  check_tree_set(V, "finite_class_bound");
  int T = V.front().T;
  double best = 0;
  for (const RealTree& v : V) {
    for (std::uint32_t eps = 0; eps < (1u << T); ++eps) {
      double s = 0;
      std::size_t i = 0;
      for (int t = 0; t < T; ++t) {
        s += v.nodes[i] * v.nodes[i];
        i = (eps >> t) & 1u ? 2 * i + 2 : 2 * i + 1;
      }
      best = std::max(best, s);
    }
  }
  return std::sqrt(2.0 * std::log(static_cast<double>(V.size())) * best);
}

double exact_expected_max(const std::vector<RealTree>& V) {
  check_tree_set(V, "exact_expected_max");
  int T = V.front().T;
  double total = 0;
  for (std::uint32_t eps = 0; eps < (1u << T); ++eps) {
    double best = -std::numeric_limits<double>::infinity();
    for (const RealTree& v : V) {
      double s = 0;
      std::size_t i = 0;
      for (int t = 0; t < T; ++t) {
        double sign = (eps >> t) & 1u ? 1.0 : -1.0;
        s += sign * v.nodes[i];
        i = (eps >> t) & 1u ? 2 * i + 2 : 2 * i + 1;
      }
      best = std::max(best, s);
    }
    total += best;
  }
  return total / std::ldexp(1.0, T);
}

void CoverTable::validate() const {
  if (rows.empty()) fail_invalid("empty cover table");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto [b, v] = rows[i];
    if (!(b > 0) || b > 1)
      fail_invalid("cover table beta values must lie in (0,1]; row " + std::to_string(i) +
                   " has beta " + fmt12(b));
    if (v < 0)
      fail_invalid("cover table log-cover values must be >= 0; row " + std::to_string(i) +
                   " has " + fmt12(v));
    if (i > 0) {
      if (rows[i - 1].first >= b)
        fail_invalid("cover table beta values must be strictly increasing; rows " +
                     std::to_string(i - 1) + " and " + std::to_string(i));
      if (rows[i - 1].second < v - 1e-12)
        fail_invalid("cover table must be nonincreasing in beta; rows " + std::to_string(i - 1) +
                     " and " + std::to_string(i));
    }
  }
}

CoverTable cover_table_from_csv(const std::string& text) {
  CoverTable out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string trimmed = line;
    trimmed.erase(0, trimmed.find_first_not_of(" \t\r"));
    if (!trimmed.empty() && trimmed.back() == '\r') trimmed.pop_back();
    if (trimmed.empty() || trimmed[0] == '#') continue;
    if (lineno == 1 && trimmed.find_first_not_of("0123456789.,+-eE \t") != std::string::npos)
      continue;  // header row
    std::size_t comma = trimmed.find(',');
    if (comma == std::string::npos)
      fail_parse("cover CSV line " + std::to_string(lineno) + ": expected \"beta,log_cover\"");
    try {
      double b = std::stod(trimmed.substr(0, comma));
      double v = std::stod(trimmed.substr(comma + 1));
      out.rows.emplace_back(b, v);
    } catch (const std::exception&) {
      fail_parse("cover CSV line " + std::to_string(lineno) + ": malformed number");
    }
  }
  std::sort(out.rows.begin(), out.rows.end());
  out.validate();
  return out;
}

double cover_log_at(const CoverTable& c, double beta) {
  c.validate();
  for (auto [b, v] : c.rows)
    if (b >= beta) return v;
  return c.rows.back().second;
}

double BoundParams::nan_marker() { return std::numeric_limits<double>::quiet_NaN(); }

namespace {

double need(double v, const char* field, const std::string& kind) {
  if (std::isnan(v)) fail_invalid(kind + " requires parameter " + field);
  return v;
}

void check_common(const std::string& kind, double T, double card) {
  if (T < 1) fail_invalid(kind + " requires T >= 1; got " + fmt12(T));
  if (card < 1) fail_invalid(kind + " requires |Phi_T| >= 1; got " + fmt12(card));
}

void check_p(const std::string& kind, double p) {
  if (!(p > 1) || p > 2) fail_invalid(kind + " requires 1 < p <= 2; got p = " + fmt12(p));
}

void check_q(const std::string& kind, double q) {
  if (q < 1) fail_invalid(kind + " requires q >= 1; got q = " + fmt12(q));
}

}  // namespace

double smoothness_bound(const std::string& kind, const BoundParams& bp) {
  if (kind == "finite_phi") {
    double T = need(bp.T, "T", kind), card = need(bp.card, "card", kind);
    double rb = need(bp.payoff_bound, "payoff_bound", kind);
    double gb = need(bp.grad_bound, "grad_bound", kind);
    double sigma = need(bp.sigma, "sigma", kind);
    double p = need(bp.p, "p", kind), q = need(bp.q, "q", kind);
    check_common(kind, T, card);
    check_p(kind, p);
    check_q(kind, q);
    if (sigma < 0) fail_invalid(kind + " requires sigma >= 0; got " + fmt12(sigma));
    return std::pow(2.0 * rb * rb * gb * gb * std::log(card) * T, 1.0 / (2.0 * q)) +
           std::pow(sigma * std::pow(rb, p) / p, 1.0 / q) * std::pow(T, 1.0 / q);
  }
  if (kind == "avg_smooth") {
    double T = need(bp.T, "T", kind), card = need(bp.card, "card", kind);
    double rb = need(bp.payoff_bound, "payoff_bound", kind);
    double gamma = need(bp.gamma, "gamma", kind);
    double p = need(bp.p, "p", kind), q = need(bp.q, "q", kind);
    check_common(kind, T, card);
    check_p(kind, p);
    check_q(kind, q);
    if (gamma < 0) fail_invalid(kind + " requires gamma >= 0; got " + fmt12(gamma));
    return std::pow(2.0 * rb * rb * std::log(card) / T, 1.0 / (2.0 * q)) +
           std::pow(gamma * std::pow(rb, p) / p, 1.0 / q) * std::pow(T, (1.0 - p) / q);
  }
  if (kind == "two_smooth") {
    double T = need(bp.T, "T", kind), card = need(bp.card, "card", kind);
    double rb = need(bp.payoff_bound, "payoff_bound", kind);
    double gamma = need(bp.gamma, "gamma", kind);
    check_common(kind, T, card);
    if (!(gamma > 0)) fail_invalid(kind + " requires gamma > 0; got " + fmt12(gamma));
    double floor_T = std::log(2.0 * card) / gamma;
    if (T < floor_T)
      fail_invalid("two_smooth is valid only for T >= log(2|Phi_T|)/gamma = " + fmt12(floor_T) +
                   "; got T = " + fmt12(T));
    return 2.0 * std::sqrt(gamma * rb * rb * std::log(2.0 * card) / T);
  }
  if (kind == "p_smooth") {
    double T = need(bp.T, "T", kind), card = need(bp.card, "card", kind);
    double rb = need(bp.payoff_bound, "payoff_bound", kind);
    double gamma = need(bp.gamma, "gamma", kind);
    double p = need(bp.p, "p", kind), c = need(bp.c_abs, "c_abs", kind);
    check_common(kind, T, card);
    check_p(kind, p);
    if (gamma < 0) fail_invalid(kind + " requires gamma >= 0; got " + fmt12(gamma));
    if (!(c > 0)) fail_invalid(kind + " requires c_abs > 0; got " + fmt12(c));
    return 4.0 * c * std::pow(gamma, 1.0 / p) * std::pow(std::log(T), 1.5) *
           std::sqrt(rb * rb * std::log(2.0 * card)) / std::pow(T, 1.0 - 1.0 / p);
  }
  fail_invalid("unknown smoothness_bound kind \"" + kind +
               "\" (expected finite_phi, avg_smooth, two_smooth, or p_smooth)");
}

namespace {

// Trapezoid integral of sqrt(cover) from each grid knot to 1, with constant
// extension past the last knot. integrals[i] = int_{beta_i}^{1}.
std::vector<double> tail_integrals(const CoverTable& c) {
  const auto& r = c.rows;
  std::size_t m = r.size();
  std::vector<double> s(m, 0.0);
  double tail = r.back().first < 1.0 ? (1.0 - r.back().first) * std::sqrt(r.back().second) : 0.0;
  s[m - 1] = tail;
  for (std::size_t i = m - 1; i-- > 0;) {
    double w = r[i + 1].first - r[i].first;
    s[i] = s[i + 1] + 0.5 * w * (std::sqrt(r[i].second) + std::sqrt(r[i + 1].second));
  }
  return s;
}

}  // namespace

double dudley_bound(const std::string& kind, const BoundParams& bp) {
  double scale = 0;
  if (kind == "two_smooth_avg") {
    double T = need(bp.T, "T", kind), gamma = need(bp.gamma, "gamma", kind);
    if (T < 1) fail_invalid(kind + " requires T >= 1; got " + fmt12(T));
    if (gamma < 0) fail_invalid(kind + " requires gamma >= 0; got " + fmt12(gamma));
    scale = 6.0 * std::sqrt(gamma / T);
  } else if (kind == "linear_avg") {
    double T = need(bp.T, "T", kind);
    if (T < 1) fail_invalid(kind + " requires T >= 1; got " + fmt12(T));
    scale = 6.0 * std::sqrt(2.0 / T);
  } else {
    fail_invalid("unknown dudley_bound kind \"" + kind +
                 "\" (expected two_smooth_avg or linear_avg)");
  }
  bp.cover.validate();
  std::vector<double> tails = tail_integrals(bp.cover);
  double best = 4.0 * 1.0;  // alpha = 1 endpoint: the integral vanishes
  for (std::size_t i = 0; i < bp.cover.rows.size(); ++i)
    best = std::min(best, 4.0 * (bp.cover.rows[i].first + scale * tails[i]));
  return best;
}

namespace {

cpp_int binomial(long long n, long long r) {
  if (r < 0 || r > n) return 0;
  r = std::min(r, n - r);
  cpp_int num = 1;
  for (long long i = 0; i < r; ++i) {
    num *= (n - i);
    num /= (i + 1);  // product of i+1 consecutive integers is divisible by (i+1)!
  }
  return num;
}

cpp_int ipow(cpp_int base, long long e) {
  cpp_int out = 1;
  while (e-- > 0) out *= base;
  return out;
}

long long need_ll(long long v, const char* field, const std::string& kind, long long lo) {
  if (v < lo)
    fail_invalid(kind + " requires integer parameter " + field + " >= " + std::to_string(lo) +
                 "; got " + std::to_string(v));
  return v;
}

CombResult integral_result(cpp_int v) {
  CombResult out;
  out.is_integer = true;
  out.integer = v;
  out.approx = v.convert_to<double>();
  out.text = v.str();
  return out;
}

CombResult real_result(double v) {
  CombResult out;
  out.approx = v;
  out.text = fmt12(v);
  return out;
}

}  // namespace

CombResult combinatorial_bound(const std::string& kind, const CombParams& cp) {
  if (kind == "sauer" || kind == "zero_cover_sauer") {
    long long T = need_ll(cp.T, "T", kind, 1);
    long long d = need_ll(cp.d, "d", kind, 0);
    long long k = need_ll(cp.k, "k", kind, 0);
    cpp_int sum = 0;
    for (long long i = 0; i <= std::min(d, T); ++i) sum += binomial(T, i) * ipow(k, i);
    return integral_result(sum);
  }
  if (kind == "fat_cover") {
    long long T = need_ll(cp.T, "T", kind, 1);
    long long fat = need_ll(cp.fat, "fat", kind, 0);
    if (!(cp.alpha > 0)) fail_invalid(kind + " requires alpha > 0; got " + fmt12(cp.alpha));
    double e = std::exp(1.0);
    return real_result(std::pow(2.0 * e * static_cast<double>(T) / cp.alpha,
                                static_cast<double>(fat)));
  }
  if (kind == "tracking" || kind == "accum") {
    long long T = need_ll(cp.T, "T", kind, 1);
    long long ch = need_ll(cp.changes, "changes", kind, 0);
    long long n = need_ll(cp.n, "n", kind, 1);
    if (kind == "accum" && !(cp.alpha > 0))
      fail_invalid(kind + " requires alpha > 0; got " + fmt12(cp.alpha));
    return integral_result(binomial(T, ch) * ipow(n, ch + 1));
  }
  if (kind == "budget") {
    long long T = need_ll(cp.T, "T", kind, 1);
    long long n = need_ll(cp.n, "n", kind, 1);
    if (!(cp.alpha > 0)) fail_invalid(kind + " requires alpha > 0; got " + fmt12(cp.alpha));
    if (!(cp.L > 0)) fail_invalid(kind + " requires L > 0; got " + fmt12(cp.L));
    double ratio = cp.L / cp.alpha;
    return real_result(ratio * std::log(static_cast<double>(T)) +
                       ratio * std::log(static_cast<double>(n)));
  }
  fail_invalid("unknown combinatorial_bound kind \"" + kind +
               "\" (expected sauer, zero_cover_sauer, fat_cover, tracking, accum, or budget)");
}

}  // namespace olab
