#include "doctest.h"

#include <cmath>

#include "fluctlab/environment.hpp"
#include "fluctlab/lattice.hpp"
#include "fluctlab/rng.hpp"
#include "fluctlab/wfunction.hpp"

using namespace fluctlab;

TEST_CASE("lattice indexing and neighbors") {
  const Lattice lat(2, 4);
  CHECK(lat.size() == 16);
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const auto x = lat.coords(i);
    CHECK(lat.index(x) == i);
    for (int j = 0; j < 2; ++j) {
      CHECK(lat.down(j, lat.up(j, i)) == i);
      CHECK(lat.shifted(j, i, 1) == lat.up(j, i));
      CHECK(lat.shifted(j, i, -1) == lat.down(j, i));
      CHECK(lat.shifted(j, i, 4) == i);
      CHECK(lat.shifted(j, i, -5) == lat.down(j, i));
    }
  }
  CHECK_THROWS(Lattice(0, 4));
  CHECK_THROWS(Lattice(1, 1));
}

TEST_CASE("W evaluation: identity, jumps, periodicity") {
  const WProfile identity(1.0, {});
  CHECK(identity.eval(0.5) == doctest::Approx(0.5).epsilon(1e-15));

  const WProfile jumped(1.0, {{0.5, 1.0}});
  CHECK(jumped.eval(0.5) == doctest::Approx(1.5).epsilon(1e-15));   // right continuous
  CHECK(jumped.eval(0.499) == doctest::Approx(0.499).epsilon(1e-15));
  CHECK(jumped.period_increment() == doctest::Approx(2.0));
  // periodicity: W(1.25) = P + W(0.25)
  CHECK(jumped.eval(1.25) == doctest::Approx(2.0 + 0.25).epsilon(1e-15));
  CHECK(jumped.eval(-0.75) == doctest::Approx(jumped.eval(0.25) - 2.0).epsilon(1e-12));
}

TEST_CASE("W profile validation") {
  CHECK_THROWS(WProfile(0.0, {}));
  CHECK_THROWS(WProfile(-1.0, {}));
  CHECK_THROWS(WProfile(1.0, {{0.5, 0.0}}));
  CHECK_THROWS(WProfile(1.0, {{1.0, 1.0}}));
  CHECK_THROWS(WProfile(1.0, {{-0.1, 1.0}}));
}

TEST_CASE("W increments: identity grid, jump-in-cell, telescoping") {
  const WProfile identity(1.0, {});
  for (int i = 0; i < 10; ++i)
    CHECK(identity.increment(10, i) == doctest::Approx(0.1).epsilon(1e-15));

  // jump at 0.5 lands in the cell (0.4, 0.5]
  const WProfile jumped(1.0, {{0.5, 1.0}});
  CHECK(jumped.increment(10, 4) == doctest::Approx(1.1).epsilon(1e-14));
  CHECK(jumped.increment(10, 5) == doctest::Approx(0.1).epsilon(1e-14));
  double total = 0.0;
  for (int i = 0; i < 10; ++i) total += jumped.increment(10, i);
  CHECK(total == doctest::Approx(2.0).epsilon(1e-14));  // telescoping
}

TEST_CASE("W strict monotonicity and telescoping for random profiles") {
  Xoshiro256 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<WJump> jumps;
    const int n_jumps = static_cast<int>(rng.uniform() * 4);
    for (int q = 0; q < n_jumps; ++q)
      jumps.push_back({rng.uniform(), 0.1 + 3.0 * rng.uniform()});
    const WProfile prof(0.2 + 2.0 * rng.uniform(), jumps);
    // monotone within one period
    for (int q = 0; q < 50; ++q) {
      double x = rng.uniform(), y = rng.uniform();
      if (x > y) std::swap(x, y);
      if (x < y) CHECK(prof.eval(x) < prof.eval(y));
    }
    // exact telescoping per axis, 1e-12 relative
    for (int n : {7, 64, 129}) {
      double total = 0.0;
      for (int i = 0; i < n; ++i) total += prof.increment(n, i);
      CHECK(total == doctest::Approx(prof.period_increment()).epsilon(1e-12));
    }
  }
}

TEST_CASE("w_quadrature: total mass, product mass, cos^2 integral") {
  // d=1: g == 1 integrates to P_1
  const WFunction w1(std::vector<WProfile>{WProfile(0.5, {{0.25, 1.5}})});
  const auto lat1 = make_lattice(1, 64);
  LatticeFunction one1(lat1, 1.0);
  CHECK(w_quadrature(w1, 0, one1) == doctest::Approx(2.0).epsilon(1e-12));

  // d=2 with P_1 = P_2 = 1: product-measure mass 1
  const WFunction w2 = WFunction::identity(2);
  const auto lat2 = make_lattice(2, 16);
  LatticeFunction one2(lat2, 1.0);
  CHECK(w_quadrature(w2, 0, one2) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(w_quadrature(w2, 1, one2) == doctest::Approx(1.0).epsilon(1e-12));

  // identity profile: quadrature reduces to the Riemann sum; cos^2 -> 1/2
  const auto lat = make_lattice(1, 256);
  const WFunction id1 = WFunction::identity(1);
  LatticeFunction g(lat);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = static_cast<double>(lat->coord(i, 0)) / 256.0;
    g[i] = std::pow(std::cos(2.0 * 3.14159265358979323846 * x), 2);
  }
  CHECK(w_quadrature(id1, 0, g) == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("environment: constant and periodic tables") {
  const EnvironmentField c = sample_field(EnvironmentSpec::constant(1.0), 2, 4);
  for (int j = 0; j < 2; ++j)
    for (double v : c.a[static_cast<std::size_t>(j)]) CHECK(v == 1.0);

  const EnvironmentField p = sample_field(EnvironmentSpec::periodic({2}, {1.0, 3.0}, 3.0), 1, 8);
  for (int i = 0; i < 8; ++i) CHECK(p.a[0][static_cast<std::size_t>(i)] == (i % 2 ? 3.0 : 1.0));
}

TEST_CASE("environment: iid support, ellipticity, frequency") {
  const auto spec = EnvironmentSpec::iid({1.0, 2.0}, {0.5, 0.5}, 2.0, 42);
  const EnvironmentField f = sample_field(spec, 1, 4096);
  int ones = 0;
  for (double v : f.a[0]) {
    CHECK((v == 1.0 || v == 2.0));
    CHECK(v >= 1.0 / f.theta);
    CHECK(v <= f.theta);
    if (v == 1.0) ++ones;
  }
  // binomial confidence interval: within 3 sigma of 1/2
  const double z = (ones / 4096.0 - 0.5) / std::sqrt(0.25 / 4096.0);
  CHECK(std::abs(z) <= 3.0);
}

TEST_CASE("environment: shift group law and reproducibility") {
  const auto spec = EnvironmentSpec::iid({0.5, 1.0, 2.0}, {0.25, 0.5, 0.25}, 2.0, 7);
  const EnvironmentField f = sample_field(spec, 2, 8);
  const EnvironmentField f2 = sample_field(spec, 2, 8);
  CHECK(f.a == f2.a);  // bit-identical reproduction

  const std::vector<int> y = {3, 5}, z = {6, 2}, yz = {9, 7};
  const EnvironmentField left = shift_field(shift_field(f, y), z);
  const EnvironmentField right = shift_field(f, yz);
  CHECK(left.a == right.a);  // exact group law

  const std::vector<int> zero = {0, 0};
  CHECK(shift_field(f, zero).a == f.a);

  const EnvironmentField p = sample_field(EnvironmentSpec::periodic({2}, {1.0, 3.0}, 3.0), 1, 8);
  const std::vector<int> one = {1};
  const EnvironmentField ps = shift_field(p, one);
  for (int i = 0; i < 8; ++i) CHECK(ps.a[0][static_cast<std::size_t>(i)] == (i % 2 ? 1.0 : 3.0));
}

TEST_CASE("environment: spec validation rejects bad support") {
  // value 3 outside [1/2, 2]
  CHECK_THROWS(sample_field(EnvironmentSpec::iid({1.0, 3.0}, {0.5, 0.5}, 2.0, 1), 1, 8));
  CHECK_THROWS(sample_field(EnvironmentSpec::iid({1.0, 2.0}, {0.7, 0.5}, 2.0, 1), 1, 8));
  CHECK_THROWS(sample_field(EnvironmentSpec::periodic({2}, {1.0}, 3.0), 1, 8));
  auto bad_theta = EnvironmentSpec::constant(1.0);
  bad_theta.theta = 0.5;
  CHECK_THROWS(sample_field(bad_theta, 1, 8));
}

TEST_CASE("rng streams are deterministic and tagged") {
  Xoshiro256 a(123), b(123), c(124);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
  }
  CHECK(a.next_u64() != c.next_u64());
  CHECK(derive_seed(1, seed_tag::kDynamics, 0) != derive_seed(1, seed_tag::kInitialConfig, 0));
  CHECK(derive_seed(1, seed_tag::kDynamics, 0) != derive_seed(1, seed_tag::kDynamics, 1));
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}
