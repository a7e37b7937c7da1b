#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>

#include "fluctlab/homogenize.hpp"
#include "fluctlab/operators.hpp"
#include "fluctlab/rng.hpp"
#include "fluctlab/solver.hpp"
#include "fluctlab/spectral.hpp"

using namespace fluctlab;

namespace {

constexpr double kPi = 3.14159265358979323846;

LatticeFunction random_function(const LatticePtr& lat, std::uint64_t seed) {
  LatticeFunction f(lat);
  Xoshiro256 rng(seed);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = rng.normal();
  return f;
}

LatticeOperator jumpy_operator(int d, int n, std::uint64_t env_seed) {
  std::vector<WProfile> axes;
  axes.emplace_back(1.0, std::vector<WJump>{{0.3, 0.8}, {0.71, 2.5}});
  for (int j = 1; j < d; ++j) axes.emplace_back(1.4, std::vector<WJump>{{0.5, 1.0}});
  const auto spec = EnvironmentSpec::iid({1.0, 2.0}, {0.5, 0.5}, 2.0, env_seed);
  return assemble(WFunction(std::move(axes)), sample_field(spec, d, n));
}

}  // namespace

TEST_CASE("assemble: two-site ring has rate 4 on each bond") {
  // d=1, N=2, a==1, identity W: xi = 1/(2 * 1/2) = 1, rate N^2 xi = 4, and both
  // bonds join the same pair, so L f(0) = 8 (f(1) - f(0))
  const auto op = assemble(WFunction::identity(1),
                           sample_field(EnvironmentSpec::constant(1.0), 1, 2));
  LatticeFunction f(op.lattice_ptr());
  f[0] = 0.0;
  f[1] = 1.0;
  const LatticeFunction lf = op.apply(f);
  CHECK(lf[0] == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(lf[1] == doctest::Approx(-8.0).epsilon(1e-14));
  CHECK(op.bond_conductance(0, 0) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(op.xi(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("constants lie in the kernel") {
  const auto op = jumpy_operator(2, 8, 11);
  LatticeFunction f(op.lattice_ptr(), 3.7);
  const LatticeFunction lf = op.apply(f);
  for (std::size_t i = 0; i < lf.size(); ++i) CHECK(lf[i] == 0.0);
}

TEST_CASE("flat case reduces to the standard discrete Laplacian") {
  const auto op = assemble(WFunction::identity(2),
                           sample_field(EnvironmentSpec::constant(1.0), 2, 8));
  const LatticeFunction f = random_function(op.lattice_ptr(), 5);
  const LatticeFunction lf = op.apply(f);
  const Lattice& lat = op.lattice();
  for (std::size_t i = 0; i < f.size(); ++i) {
    double expected = 0.0;
    for (int j = 0; j < 2; ++j)
      expected += 64.0 * (f[lat.up(j, i)] + f[lat.down(j, i)] - 2.0 * f[i]);
    CHECK(lf[i] == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("operator identity: rate form equals difference form") {
  const auto op = jumpy_operator(2, 8, 23);
  for (int trial = 0; trial < 10; ++trial) {
    const LatticeFunction f = random_function(op.lattice_ptr(), 100 + trial);
    const LatticeFunction a = op.apply_rate_form(f);
    const LatticeFunction b = op.apply_difference_form(f);
    double gap = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      gap = std::max(gap, std::abs(a[i] - b[i]));
      scale = std::max(scale, std::abs(a[i]));
    }
    CHECK(gap <= 1e-10 * scale);
  }
}

TEST_CASE("symmetry and nonpositivity for the counting measure") {
  const auto op = jumpy_operator(1, 64, 31);
  for (int trial = 0; trial < 5; ++trial) {
    const LatticeFunction f = random_function(op.lattice_ptr(), 200 + trial);
    const LatticeFunction g = random_function(op.lattice_ptr(), 300 + trial);
    const LatticeFunction lf = op.apply(f);
    const LatticeFunction lg = op.apply(g);
    double f_lg = 0.0, lf_g = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      f_lg += f[i] * lg[i];
      lf_g += lf[i] * g[i];
      scale += std::abs(f[i] * lg[i]);
    }
    CHECK(std::abs(f_lg - lf_g) <= 1e-10 * std::max(scale, 1.0));

    double dirichlet = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) dirichlet -= f[i] * lf[i];
    dirichlet /= static_cast<double>(f.size());
    CHECK(dirichlet >= -1e-12);
    // the quadrature energy is the same quantity by summation by parts
    CHECK(op.w_gradient_energy(f) == doctest::Approx(dirichlet).epsilon(1e-10));
  }
}

TEST_CASE("resolvent: constants, zero, rejection") {
  const auto op = jumpy_operator(1, 32, 41);
  LatticeFunction f(op.lattice_ptr(), 2.5);
  const LatticeFunction u = solve_resolvent(op, 2.0, f);
  for (std::size_t i = 0; i < u.size(); ++i)
    CHECK(u[i] == doctest::Approx(1.25).epsilon(1e-11));

  LatticeFunction zero(op.lattice_ptr());
  const LatticeFunction uz = solve_resolvent(op, 1.0, zero);
  for (std::size_t i = 0; i < uz.size(); ++i) CHECK(uz[i] == 0.0);

  CHECK_THROWS(solve_resolvent(op, 0.0, f));
  CHECK_THROWS(solve_resolvent(op, -1.0, f));
}

TEST_CASE("resolvent matches the DFT oracle in the flat case") {
  const int n = 64;
  const auto op = assemble(WFunction::identity(1),
                           sample_field(EnvironmentSpec::constant(1.0), 1, n));
  const double lambda = 1.7;
  const LatticeFunction f = random_function(op.lattice_ptr(), 77);

  // independent oracle: diagonalize the circulant Laplacian by real DFT
  LatticeFunction oracle(op.lattice_ptr());
  for (int m = 0; m <= n / 2; ++m) {
    const double alpha = 4.0 * n * n * std::pow(std::sin(kPi * m / n), 2);
    double cc = 0.0, cs = 0.0;
    for (int x = 0; x < n; ++x) {
      cc += f[static_cast<std::size_t>(x)] * std::cos(2.0 * kPi * m * x / n);
      cs += f[static_cast<std::size_t>(x)] * std::sin(2.0 * kPi * m * x / n);
    }
    const double norm = (m == 0 || 2 * m == n) ? 1.0 / n : 2.0 / n;
    for (int x = 0; x < n; ++x) {
      oracle[static_cast<std::size_t>(x)] +=
          norm * (cc * std::cos(2.0 * kPi * m * x / n) + cs * std::sin(2.0 * kPi * m * x / n)) /
          (lambda + alpha);
    }
  }
  const LatticeFunction u = solve_resolvent(op, lambda, f);
  for (std::size_t i = 0; i < u.size(); ++i)
    CHECK(u[i] == doctest::Approx(oracle[i]).epsilon(1e-8));
}

TEST_CASE("resolvent reports non-convergence with residual") {
  const auto op = jumpy_operator(1, 64, 51);
  const LatticeFunction f = random_function(op.lattice_ptr(), 52);
  SolveOptions opts;
  opts.max_iterations = 1;
  CHECK_THROWS_AS(solve_resolvent(op, 1e-6, f, opts), SolverError);
}

TEST_CASE("eigendecompose: flat spectrum, zero mode, orthonormality") {
  const int n = 64;
  const auto op = assemble(WFunction::identity(1),
                           sample_field(EnvironmentSpec::constant(1.0), 1, n));
  const EigenBasis basis = eigendecompose(op, 21);
  CHECK(basis.alpha[0] == doctest::Approx(0.0).epsilon(1e-10));
  for (int k = 1; k <= 20; ++k) {
    const double expected = 4.0 * n * n * std::pow(std::sin(kPi * (k / 2) / n), 2);
    if (expected == 0.0)
      CHECK(std::abs(basis.alpha[static_cast<std::size_t>(k - 1)]) <= 1e-8);
    else
      CHECK(basis.alpha[static_cast<std::size_t>(k - 1)] ==
            doctest::Approx(expected).epsilon(1e-8));
  }
  // constant eigenvector for alpha_1, normalized in <.,.>_N, positive sign
  const LatticeFunction phi1 = basis.mode(0);
  for (std::size_t i = 0; i < phi1.size(); ++i)
    CHECK(phi1[i] == doctest::Approx(1.0).epsilon(1e-9));
  // pairwise orthonormality within 1e-8
  for (int a = 0; a < basis.modes(); ++a) {
    for (int b = a; b < basis.modes(); ++b) {
      const double ip = inner_product(basis.mode(a), basis.mode(b));
      CHECK(std::abs(ip - (a == b ? 1.0 : 0.0)) <= 1e-8);
    }
  }
  CHECK(eigen_residual(basis, op) <= 1e-8);
  CHECK_THROWS(eigendecompose(op, 0));
  CHECK_THROWS(eigendecompose(op, n + 1));
}

TEST_CASE("eigendecompose: tensor path matches a dense solve in d=2") {
  // per-axis constant coefficients, jumpy W: separable operator
  const int n = 6;
  std::vector<WProfile> axes;
  axes.emplace_back(1.0, std::vector<WJump>{{0.4, 1.0}});
  axes.emplace_back(0.7, std::vector<WJump>{{0.6, 0.5}});
  EnvironmentField field;
  field.dim = 2;
  field.n = n;
  field.theta = 2.0;
  field.a = {std::vector<double>(36, 1.3), std::vector<double>(36, 0.7)};
  const auto op = assemble(WFunction(std::move(axes)), field);
  REQUIRE(op.environment().constant_per_axis());
  const EigenBasis basis = eigendecompose(op, 12);

  // independent dense oracle on the assembled matrix
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(36, 36);
  for (std::size_t i = 0; i < 36; ++i) {
    LatticeFunction e(op.lattice_ptr());
    e[i] = 1.0;
    const LatticeFunction le = op.apply(e);
    for (std::size_t r = 0; r < 36; ++r)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) = -le[r];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  for (int k = 0; k < basis.modes(); ++k)
    CHECK(basis.alpha[static_cast<std::size_t>(k)] ==
          doctest::Approx(es.eigenvalues()[k]).epsilon(1e-9));

  // product eigenvector has eigenvalue = sum of per-axis eigenvalues:
  // applying the operator reproduces alpha_k within the residual gate
  CHECK(eigen_residual(basis, op) <= 1e-8);
}

TEST_CASE("sobolev ladder norms") {
  const int n = 16;
  const auto op = assemble(WFunction::identity(1),
                           sample_field(EnvironmentSpec::constant(1.0), 1, n));
  const EigenBasis basis = eigendecompose(op, n);

  const LatticeFunction f = random_function(op.lattice_ptr(), 404);
  // n = 0 reduces to the normalized l2 norm
  CHECK(sobolev_norm(f, 0, basis) == doctest::Approx(norm_l2(f)).epsilon(1e-10));
  // constant function: ||f||_n = |f| for every n since lambda_1 = 1, k = 1
  // (roundoff projections onto high modes pick up the ladder weight
  // (lambda_k k)^{2n}, so the tolerance widens with the order)
  LatticeFunction c(op.lattice_ptr(), -2.5);
  for (int order : {0, 1, 2})
    CHECK(sobolev_norm(c, order, basis) == doctest::Approx(2.5).epsilon(1e-8));
  CHECK(sobolev_norm(c, 3, basis) == doctest::Approx(2.5).epsilon(1e-5));
  // monotone ladder
  double prev = sobolev_norm(f, 0, basis);
  for (int order : {1, 2, 3}) {
    const double cur = sobolev_norm(f, order, basis);
    CHECK(cur >= prev * (1.0 - 1e-12));
    prev = cur;
  }
  // insufficient coverage reported
  const EigenBasis small = eigendecompose(op, 2);
  CHECK_THROWS(sobolev_norm(f, 1, small));
}

TEST_CASE("homogenize: constant field recovers the coefficient exactly") {
  const auto rhs = [](std::span<const double> u) {
    return std::cos(2.0 * kPi * u[0]);
  };
  const HomogenizeResult hom =
      homogenize(WFunction::identity(1), EnvironmentSpec::constant(1.7), 1.0, rhs, {16, 32});
  CHECK(hom.a_eff.diag[0] == doctest::Approx(1.7).epsilon(1e-7));
  CHECK(hom.fit_residual.back() < 1e-9);
  CHECK_THROWS(homogenize(WFunction::identity(1), EnvironmentSpec::constant(1.0), -1.0, rhs,
                          {16}));
  CHECK_THROWS(homogenize(WFunction::identity(1), EnvironmentSpec::constant(1.0), 1.0, rhs,
                          {32, 16}));
}

TEST_CASE("homogenize: d=2 constant field fits both axes") {
  const auto rhs = [](std::span<const double> u) {
    return std::cos(2.0 * kPi * u[0]) + std::sin(2.0 * kPi * u[1]);
  };
  const HomogenizeResult hom =
      homogenize(WFunction::identity(2), EnvironmentSpec::constant(1.3), 1.0, rhs, {8, 16});
  CHECK(hom.a_eff.diag[0] == doctest::Approx(1.3).epsilon(1e-6));
  CHECK(hom.a_eff.diag[1] == doctest::Approx(1.3).epsilon(1e-6));
}

TEST_CASE("homogenize: insensitive fit is rejected as ill-conditioned") {
  const auto rhs = [](std::span<const double> u) {
    return std::cos(2.0 * kPi * u[0]);
  };
  // at lambda ~ 1e14 the resolvent is u = f/lambda for every coefficient
  CHECK_THROWS(homogenize(WFunction::identity(1),
                          EnvironmentSpec::periodic({2}, {1.0, 3.0}, 3.0), 1e14, rhs, {32}));
}

TEST_CASE("energy convergence: constant field has vanishing gaps, f = 0 gives zero") {
  const auto rhs = [](std::span<const double> u) {
    return std::cos(2.0 * kPi * u[0]);
  };
  const EnergyReport r = energy_convergence(WFunction::identity(1),
                                            EnvironmentSpec::constant(2.0), 1.0, rhs, {16, 32});
  for (double gap : r.l2_gap) CHECK(gap <= 1e-8);
  for (double gap : r.energy_gap) CHECK(gap <= 1e-8);

  const auto zero_rhs = [](std::span<const double>) { return 0.0; };
  const EnergyReport rz = energy_convergence(WFunction::identity(1),
                                             EnvironmentSpec::constant(1.0), 1.0, zero_rhs, {16});
  CHECK(rz.l2_random[0] == 0.0);
  CHECK(rz.energy_random[0] == 0.0);
  CHECK(rz.l2_limit[0] == 0.0);
  CHECK(rz.energy_limit[0] == 0.0);
}
