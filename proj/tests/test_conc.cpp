// Tests for the closed-form martingale bounds and the Monte Carlo tail check.
// Every numeric expectation is recomputed here from the published closed form,
// so a silent change in a formula shows up as a concrete numeric mismatch.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>

#include "core/conc.hpp"
#include "test_util.hpp"

namespace {

using namespace olab;

NormSpec l1() { return NormSpec{NormSpec::Kind::l1, 2.0}; }
NormSpec l2() { return NormSpec{NormSpec::Kind::l2, 2.0}; }
NormSpec lq(double q) { return NormSpec{NormSpec::Kind::lq, q}; }

ConcParams base() { return ConcParams{}; }

}  // namespace

TEST_CASE("azuma matches its closed form") {
  ConcParams cp = base();
  cp.T = 100;
  cp.theta = 0.3;
  cp.c = 1.0;
  const double want = 2.0 * std::exp(-100.0 * 0.09 / 2.0);
  CHECK(concentration_bound("azuma", cp) == doctest::Approx(want).epsilon(1e-12));
  CHECK(concentration_bound("azuma", cp) ==
        doctest::Approx(0.022217993076484612).epsilon(1e-12));

  ConcParams missing = base();
  missing.T = 100;
  missing.theta = 0.3;
  olab_test::expect_error(errc::invalid, "azuma requires parameter c",
                          [&] { concentration_bound("azuma", missing); });
}

TEST_CASE("pinelis step constant and mgf product") {
  ConcParams cp = base();
  cp.sigma = 2.0;
  cp.B = 1.0;
  cp.lambda = 0.5;
  const double c = 1.0 + 2.0 * (std::exp(0.5) - 1.0 - 0.5);
  CHECK(concentration_bound("pinelis_step", cp) == doctest::Approx(c).epsilon(1e-12));
  CHECK(c == doctest::Approx(1.2974425414).epsilon(1e-9));

  cp.T = 3;
  CHECK(concentration_bound("pinelis_mgf", cp) ==
        doctest::Approx(2.0 * c * c * c).epsilon(1e-12));
  CHECK(concentration_bound("pinelis_mgf", cp) == doctest::Approx(4.36811835298).epsilon(1e-9));
}

TEST_CASE("pinelis tail bound and its validity window") {
  ConcParams cp = base();
  cp.T = 100;
  cp.sigma = 2.0;
  cp.B = 1.0;
  cp.eps = 10.0;
  const double want = 2.0 * std::exp(-100.0 / (4.0 * 100.0 * 2.0));
  CHECK(concentration_bound("pinelis_tail", cp) == doctest::Approx(want).epsilon(1e-12));
  CHECK(concentration_bound("pinelis_tail", cp) == doctest::Approx(1.76499380517).epsilon(1e-9));

  // The bound only holds for T > eps / (2 sigma B) = 2.5.
  cp.T = 2;
  olab_test::expect_error(errc::invalid, "pinelis_tail is valid only for T > eps/(2 sigma B)",
                          [&] { concentration_bound("pinelis_tail", cp); });
}

TEST_CASE("pinelis max-expectation bound over a finite family") {
  ConcParams cp = base();
  cp.T = 100;
  cp.sigma = 2.0;
  cp.B = 1.0;
  cp.n_gamma = 8;
  const double want = 2.0 * 1.0 * std::sqrt(2.0 * std::log(16.0) * 100.0);
  CHECK(concentration_bound("pinelis_max_exp", cp) == doctest::Approx(want).epsilon(1e-12));
  CHECK(concentration_bound("pinelis_max_exp", cp) ==
        doctest::Approx(47.0964009006).epsilon(1e-9));

  // Valid only when T >= log(2 n_gamma) / sigma. With sigma = 0.01 the cutoff
  // is log(16)/0.01 = 277.2 > 100.
  cp.sigma = 0.01;
  olab_test::expect_error(errc::invalid, "pinelis_max_exp is valid only for T >=",
                          [&] { concentration_bound("pinelis_max_exp", cp); });

  cp.sigma = 2.0;
  cp.n_gamma = 0;
  olab_test::expect_error(errc::invalid, "requires n_gamma >= 1",
                          [&] { concentration_bound("pinelis_max_exp", cp); });
}

TEST_CASE("probability-to-expectation conversion") {
  ConcParams cp = base();
  cp.a = 0.1;
  cp.b = 4.0;
  cp.N = 8;
  const double want = 0.1 + (std::sqrt(std::log(16.0)) + 1.0) * std::sqrt(4.0 / 4.0);
  CHECK(concentration_bound("prob_to_exp", cp) == doctest::Approx(want).epsilon(1e-12));
  CHECK(concentration_bound("prob_to_exp", cp) == doctest::Approx(2.76510922232).epsilon(1e-9));

  cp.N = 0;
  olab_test::expect_error(errc::invalid, "requires N >= 1",
                          [&] { concentration_bound("prob_to_exp", cp); });
}

TEST_CASE("smooth tail bound reads (sigma, p) off the norm") {
  ConcParams cp = base();
  cp.T = 1000;
  cp.nu = 7.0;
  cp.has_norm = true;
  cp.norm = l2();  // table value: (sigma, p) = (2, 2)

  const double lt = std::log(1000.0);
  const double want = 2.0 * std::exp(-49.0 * 1000.0 / (2.0 * 2.0 * lt * lt * lt));
  CHECK(concentration_bound("smooth_tail", cp) == doctest::Approx(want).epsilon(1e-9));
  CHECK(concentration_bound("smooth_tail", cp) ==
        doctest::Approx(1.44812332596e-16).epsilon(1e-9));

  // Direct (sigma, p) = (2, 2) must agree with the l2 table entry.
  ConcParams direct = base();
  direct.T = 1000;
  direct.nu = 7.0;
  direct.sigma = 2.0;
  CHECK(concentration_bound("smooth_tail", direct) ==
        doctest::Approx(concentration_bound("smooth_tail", cp)).epsilon(1e-12));

  // Validity cutoff: nu > 8 sigma^{1/2} log^{3/2}(T) / sqrt(T) = 6.4955.
  const double cutoff = 8.0 * std::sqrt(2.0) * std::pow(lt, 1.5) / std::sqrt(1000.0);
  CHECK(cutoff == doctest::Approx(6.49546728802).epsilon(1e-9));
  cp.nu = 6.0;
  olab_test::expect_error(errc::invalid, "smooth_tail is valid only for nu >",
                          [&] { concentration_bound("smooth_tail", cp); });

  cp.nu = 7.0;
  cp.T = 1;
  olab_test::expect_error(errc::invalid, "log^3 T must be positive",
                          [&] { concentration_bound("smooth_tail", cp); });
}

TEST_CASE("smooth-kind norm handling: rejections and the lq table") {
  ConcParams cp = base();
  cp.T = 1000;
  cp.nu = 7.0;
  cp.has_norm = true;

  cp.norm = l1();  // no smoothness pair
  olab_test::expect_error(errc::invalid, "carries no smoothness pair",
                          [&] { concentration_bound("smooth_tail", cp); });

  cp.norm = lq(1.5);  // pair (1.5, 1.5): not a (sigma,2)-smooth squared norm
  olab_test::expect_error(errc::invalid, "needs a (sigma,2)-smooth squared norm",
                          [&] { concentration_bound("smooth_tail", cp); });

  // lq with q = 3 carries (2(q-1), 2) = (4, 2); must agree with sigma = 4 direct.
  cp.norm = lq(3.0);
  ConcParams direct = base();
  direct.T = 1000;
  direct.nu = 7.0;
  direct.sigma = 4.0;
  CHECK(concentration_bound("smooth_tail", cp) ==
        doctest::Approx(concentration_bound("smooth_tail", direct)).epsilon(1e-12));

  // A supplied sigma that disagrees with the norm's table value is an error.
  cp.norm = l2();
  cp.sigma = 1.0;
  olab_test::expect_error(errc::invalid, "conflicts with the norm's table value",
                          [&] { concentration_bound("smooth_tail", cp); });
}

TEST_CASE("smooth tail threshold closed form") {
  ConcParams cp = base();
  cp.T = 1000;
  cp.nu = 7.0;
  cp.R = 1.0;
  cp.has_norm = true;
  cp.norm = l2();
  const double want = 128.0 * (std::sqrt(2.0) / std::sqrt(1000.0) + 7.0);
  CHECK(smooth_tail_threshold(cp) == doctest::Approx(want).epsilon(1e-12));
  CHECK(smooth_tail_threshold(cp) == doctest::Approx(901.724334022).epsilon(1e-9));

  // c_abs scales the whole threshold linearly.
  cp.c_abs = 2.0;
  CHECK(smooth_tail_threshold(cp) == doctest::Approx(2.0 * want).epsilon(1e-12));
}

TEST_CASE("generalized smooth bound") {
  ConcParams cp = base();
  cp.T = 10;
  cp.theta = 2.0;
  cp.q = 2.0;
  cp.p = 2.0;
  cp.sigma = 1.0;
  cp.r_payoff = 0.5;
  cp.R = 1.0;
  // exp(-(theta^q - sigma T r^p / p)^2 / (2 r^2 R^2 T)) = exp(-2.75^2 / 5).
  const double want = std::exp(-(4.0 - 1.25) * (4.0 - 1.25) / 5.0);
  CHECK(concentration_bound("gensmooth", cp) == doctest::Approx(want).epsilon(1e-12));
  CHECK(concentration_bound("gensmooth", cp) == doctest::Approx(0.220358392783).epsilon(1e-9));

  cp.theta = 1.0;  // theta^q = 1 < sigma T r^p / p = 1.25
  olab_test::expect_error(errc::invalid, "gensmooth is valid only for theta^q >=",
                          [&] { concentration_bound("gensmooth", cp); });

  cp.theta = 2.0;
  cp.p = 3.0;
  olab_test::expect_error(errc::invalid, "requires 1 < p <= 2",
                          [&] { concentration_bound("gensmooth", cp); });
}

TEST_CASE("unknown bound kind is rejected by name") {
  olab_test::expect_error(errc::invalid, "unknown concentration bound kind 'hoeffding'",
                          [&] { concentration_bound("hoeffding", base()); });
}

TEST_CASE("vector tree validation") {
  VecTree t;
  t.T = 2;
  t.k = 1;
  t.nodes = {{1.0}, {0.5}, {-0.5}};
  t.validate();  // well formed

  VecTree bad_count = t;
  bad_count.nodes.pop_back();
  olab_test::expect_error(errc::invalid, "needs 2^T-1 nodes", [&] { bad_count.validate(); });

  VecTree bad_dim = t;
  bad_dim.nodes[1] = {0.5, 0.5};
  olab_test::expect_error(errc::invalid, "is not a 1-vector", [&] { bad_dim.validate(); });

  VecTree bad_depth;
  bad_depth.T = 0;
  olab_test::expect_error(errc::invalid, "depth T >= 1", [&] { bad_depth.validate(); });
}

namespace {

MdsSpec ones_mds(int T) {
  // Dense scalar tree with every node equal to +1: the sum is a simple
  // symmetric random walk S_T.
  MdsSpec m;
  m.tree.T = T;
  m.tree.k = 1;
  m.tree.nodes.assign((1ull << T) - 1, Vec{1.0});
  m.B = 1.0;
  m.norm = l2();
  return m;
}

}  // namespace

TEST_CASE("mds spec validation") {
  MdsSpec m = ones_mds(2);
  m.validate();
  CHECK(m.depth() == 2);
  CHECK(m.dim() == 1);
  CHECK(m.effective_sigma() == doctest::Approx(2.0));

  MdsSpec both = m;
  both.palette = {{1.0}};
  olab_test::expect_error(errc::invalid, "not both", [&] { both.validate(); });

  MdsSpec neither;
  neither.norm = l2();
  olab_test::expect_error(errc::invalid, "needs a dense tree or a nonempty palette",
                          [&] { neither.validate(); });

  MdsSpec deep;
  deep.palette = {{1.0}, {-1.0}};
  deep.T = 300;
  deep.norm = l2();
  olab_test::expect_error(errc::invalid, "supports T <= 200", [&] { deep.validate(); });

  MdsSpec wide = m;
  wide.tree.nodes[2] = {3.0};  // norm 3 > B = 1
  olab_test::expect_error(errc::invalid, "> step bound B", [&] { wide.validate(); });

  MdsSpec rough = m;
  rough.norm = l1();
  olab_test::expect_error(errc::invalid, "carries no smoothness pair",
                          [&] { rough.validate(); });

  MdsSpec clash = m;
  clash.sigma = 1.0;
  olab_test::expect_error(errc::invalid, "conflicts with the norm's table value",
                          [&] { clash.validate(); });
}

TEST_CASE("dense node lookup follows heap order") {
  MdsSpec m = ones_mds(2);
  m.tree.nodes = {{0.0}, {-1.0}, {1.0}};  // root, minus-child, plus-child
  m.B = 1.0;
  CHECK(m.node_at(0, 0)[0] == 0.0);
  CHECK(m.node_at(1, 0)[0] == -1.0);  // path bit 0 at depth 0 means sign -1
  CHECK(m.node_at(1, 1)[0] == 1.0);
}

TEST_CASE("palette node lookup is a function of depth and path prefix") {
  MdsSpec m;
  m.palette = {{1.0}, {-1.0}, {0.5}};
  m.palette_seed = 42;
  m.T = 40;
  m.k = 1;
  m.norm = l2();
  m.validate();
  // Prefix-measurable: bits at positions >= t cannot change the value.
  for (int t = 0; t < 6; ++t) {
    const std::uint64_t mask = t == 0 ? 0 : ((1ull << t) - 1);
    const std::uint64_t path = 0b10110ull & mask;
    CHECK(m.node_at(t, path) == m.node_at(t, path | (0xabcdull << t)));
  }
  // Different seeds give a different tree somewhere in the first few levels.
  MdsSpec other = m;
  other.palette_seed = 43;
  bool differs = false;
  for (int t = 0; t < 8 && !differs; ++t)
    for (std::uint64_t path = 0; path < (1ull << t) && !differs; ++path)
      differs = m.node_at(t, path) != other.node_at(t, path);
  CHECK(differs);
}

TEST_CASE("mc tail report on a simple random walk") {
  // S_2 in {-2, 0, 0, 2}; P(|S_2| > 1.5) = 1/2 exactly.
  MdsSpec m = ones_mds(2);
  const TailReport rep = mc_tail_report(m, {1.5}, 20000, 3);
  REQUIRE(rep.rows.size() == 1);
  const TailRow& r = rep.rows[0];
  CHECK(r.threshold == 1.5);
  CHECK(r.valid);  // T = 2 > 1.5 / (2 sigma B) = 0.375
  CHECK(r.bound ==
        doctest::Approx(2.0 * std::exp(-1.5 * 1.5 / (4.0 * 2.0 * 2.0))).epsilon(1e-12));
  CHECK(r.se == doctest::Approx(std::sqrt(r.empirical * (1.0 - r.empirical) / 20000.0))
                    .epsilon(1e-12));
  CHECK(std::abs(r.empirical - 0.5) <= 5.0 * r.se + 1e-12);
  CHECK(r.pass);
  CHECK(rep.holds);
}

TEST_CASE("mc tail report is deterministic and thread-count independent") {
  MdsSpec m = ones_mds(3);
  const Vec thresholds = {1.0, 2.5};
  const TailReport a = mc_tail_report(m, thresholds, 30000, 7, 1);
  const TailReport b = mc_tail_report(m, thresholds, 30000, 7, 5);
  const TailReport c = mc_tail_report(m, thresholds, 30000, 7);
  REQUIRE(a.rows.size() == 2);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].empirical == b.rows[i].empirical);
    CHECK(a.rows[i].empirical == c.rows[i].empirical);
  }
  const TailReport d = mc_tail_report(m, thresholds, 30000, 8, 1);
  CHECK((d.rows[0].empirical != a.rows[0].empirical ||
         d.rows[1].empirical != a.rows[1].empirical));
}

TEST_CASE("mc tail report in palette mode at depth beyond dense reach") {
  MdsSpec m;
  m.palette = {{1.0}, {-1.0}};
  m.palette_seed = 5;
  m.T = 80;  // 2^80 - 1 dense nodes would be unrepresentable
  m.k = 1;
  m.norm = l2();
  // Threshold 2 sqrt(T): P(|S_T| > 2 sqrt(T)) ~ 0.046, bound 2 e^{-1/2} = 1.21.
  const TailReport rep = mc_tail_report(m, {2.0 * std::sqrt(80.0)}, 5000, 11);
  REQUIRE(rep.rows.size() == 1);
  CHECK(rep.rows[0].valid);
  CHECK(rep.rows[0].pass);
  CHECK(rep.holds);
  CHECK(rep.rows[0].empirical < 0.2);
}

TEST_CASE("mc tail report rejects bad inputs") {
  MdsSpec m = ones_mds(2);
  olab_test::expect_error(errc::invalid, "at least one threshold",
                          [&] { mc_tail_report(m, {}, 100, 1); });
  olab_test::expect_error(errc::invalid, "thresholds must be positive",
                          [&] { mc_tail_report(m, {-1.0}, 100, 1); });
  olab_test::expect_error(errc::invalid, "needs samples >= 1",
                          [&] { mc_tail_report(m, {1.0}, 0, 1); });
}

TEST_CASE("mds supremum estimate is twice the sign-tree supremum") {
  const std::vector<Vec> signs = {{1.0}, {-1.0}};
  const double want[] = {2.0, 1.0, 1.0, 0.75};
  for (int T = 1; T <= 4; ++T) {
    const double got = mds_sup_estimate(signs, l2(), T, WpMode::exhaustive);
    CHECK(got == doctest::Approx(want[T - 1]).epsilon(1e-12));
    CHECK(got ==
          doctest::Approx(2.0 * walsh_paley_sup(signs, l2(), T, WpMode::exhaustive))
              .epsilon(1e-12));
  }
}
