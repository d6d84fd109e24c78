#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "riesz/configuration.hpp"
#include "riesz/errors.hpp"
#include "riesz/gibbs_model.hpp"
#include "riesz/linear_algebra.hpp"
#include "riesz/rng.hpp"
#include "riesz/sampler.hpp"

using namespace riesz;

namespace {

Configuration random_config(std::size_t n, std::uint64_t seed, double jitter = 0.4) {
  Xoshiro256 rng(seed);
  return initial_configuration(n, jitter, rng);
}

}  // namespace

TEST_SUITE("gibbs_model") {
  TEST_CASE("configuration basics") {
    const Configuration c({0.9, 0.1, 1.3});
    CHECK(c[0] == doctest::Approx(0.1));
    CHECK(c[1] == doctest::Approx(0.3));
    CHECK(c.gap(2, 1) == doctest::Approx(3.0 * 0.2));
    CHECK(c.gap(0, 0) == 0.0);
    CHECK_THROWS_AS(c.gap(0, 2), IndexError);
    CHECK(c.count(0.0, 0.15) == 2);
    CHECK(c.count(0.95, 0.2) == 2);
    CHECK_THROWS_AS(Configuration({0.2}), DomainError);
    CHECK_THROWS_AS(Configuration({0.25, 1.25}), DomainError);
    const Configuration lat = Configuration::lattice(8, 0.01);
    for (std::size_t i = 0; i < 8; ++i) CHECK(lat.gap(i, 3) == doctest::Approx(3.0));
    CHECK(lat.block_average(0, 1) == doctest::Approx(0.01));
  }

  TEST_CASE("energy delta matches the energy difference") {
    const KernelModel model = KernelModel::build({0.5, 2.0, 12});
    const Configuration c = random_config(12, 7);
    for (std::size_t i : {0u, 5u, 11u}) {
      const double x_new = wrap_unit(c[i] + 0.013);
      std::vector<double> pos = c.positions();
      pos[i] = x_new;
      const double full = energy(Configuration(pos), model) - energy(c, model);
      CHECK(energy_delta(c, i, x_new, model) == doctest::Approx(full).epsilon(1e-10).scale(1.0));
    }
    CHECK(energy_delta(c, 3, c[3], model) == 0.0);
    CHECK_THROWS_AS(energy_delta(c, 12, 0.1, model), IndexError);
  }

  TEST_CASE("lattice is a critical point and energy is rotation invariant") {
    const KernelModel model = KernelModel::build({0.3, 1.0, 16});
    const Configuration lat = Configuration::lattice(16, 0.2);
    CHECK(gradient(lat, model).cwiseAbs().maxCoeff() < 1e-9);
    const Configuration c = random_config(16, 3);
    CHECK(energy(c.translated(0.377), model) == doctest::Approx(energy(c, model)).epsilon(1e-12));
  }

  TEST_CASE("gradient and Hessian against finite differences") {
    const KernelModel model = KernelModel::build({0.7, 1.0, 10});
    const Configuration c = random_config(10, 11);
    const Eigen::VectorXd grad = gradient(c, model);
    const Eigen::MatrixXd hess = hessian(c, model);
    const double h = 1e-6;
    for (std::size_t i = 0; i < 10; ++i) {
      const double fd = (energy_delta(c, i, c[i] + h, model) - energy_delta(c, i, c[i] - h, model)) / (2 * h);
      CHECK(grad[static_cast<Eigen::Index>(i)] == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
    }
    for (std::size_t i : {0u, 4u}) {
      std::vector<double> p = c.positions();
      std::vector<double> m = c.positions();
      p[i] += h;
      m[i] -= h;
      const Eigen::VectorXd col = (gradient(Configuration(p), model) - gradient(Configuration(m), model)) / (2 * h);
      // Sorting keeps labels because the displacement is tiny.
      for (Eigen::Index j = 0; j < 10; ++j) {
        CHECK(hess(j, static_cast<Eigen::Index>(i)) == doctest::Approx(col[j]).epsilon(1e-5).scale(1.0));
      }
    }
  }

  TEST_CASE("Hessian is PSD with the constant vector in its kernel") {
    for (double s : {0.2, 0.5, 0.9}) {
      const KernelModel model = KernelModel::build({s, 1.0, 16});
      const Eigen::MatrixXd hess = hessian(random_config(16, 5), model);
      CHECK((hess * Eigen::VectorXd::Ones(16)).cwiseAbs().maxCoeff() < 1e-8 * hess.norm());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hess);
      CHECK(es.eigenvalues().minCoeff() > -1e-10 * hess.norm());
      CHECK(es.eigenvalues()[1] > 0.0);
    }
  }

  TEST_CASE("projected CG agrees with the dense solve") {
    const KernelModel model = KernelModel::build({0.5, 1.0, 8});
    const Eigen::MatrixXd hess = hessian(random_config(8, 9), model);
    Eigen::VectorXd b(8);
    b << 1, -2, 0.5, 0, 0, 3, -1, -1.5;
    const CgResult cg = projected_cg(hess, b, 1e-12);
    CHECK((cg.x - dense_mean_zero_solve(hess, b)).norm() < 1e-9 * cg.x.norm());
    CHECK(std::abs(cg.x.sum()) < 1e-10);
    CHECK(cg.residual <= 1e-12);
  }

  TEST_CASE("fluctuation brute force") {
    const Configuration c({0.05, 0.3, 0.6, 0.95});
    const auto ind = TestFunction::indicator(0.1);
    CHECK(fluct(c, ind) == doctest::Approx(2.0 - 4.0 * 0.2));
    const auto cs = TestFunction::cosine(1);
    double ref = 0.0;
    for (double x : {0.05, 0.3, 0.6, 0.95}) ref += std::cos(2.0 * M_PI * x);
    CHECK(fluct(c, cs) == doctest::Approx(ref));
    CHECK(std::abs(fluct(Configuration::lattice(8, 0.1), cs)) < 1e-14);
  }

  TEST_CASE("loop term A: pair sum agrees with the transport identity") {
    for (double s : {0.3, 0.5}) {
      const KernelModel model = KernelModel::build({s, 2.0, 6});
      const Multiplier mu = calibrate_multiplier(model, 4096);
      for (const auto& xi : {TestFunction::cosine(1), TestFunction::cosine(2)}) {
        const LoopPair pair = make_loop_pair(build_transport(xi, mu, 4096), mu);
        for (std::uint64_t seed : {1u, 2u, 3u}) {
          const Configuration c = random_config(6, seed);
          const LoopDiagnostics d = loop_term_A(c, pair, model, false);
          CAPTURE(s);
          CHECK(d.a_value == doctest::Approx(d.a_transport).epsilon(1e-8).scale(1.0));
          CHECK_NOTHROW(loop_term_A(c, pair, model, true));
        }
      }
    }
  }

  TEST_CASE("loop term B") {
    const KernelModel model = KernelModel::build({0.5, 1.0, 6});
    const Multiplier mu = calibrate_multiplier(model, 4096);
    const LoopPair pair = make_loop_pair(build_transport(TestFunction::cosine(1), mu, 4096), mu);
    for (std::uint64_t seed : {4u, 5u}) {
      const Configuration c = random_config(6, seed);
      CHECK(loop_term_B_pairs(c, pair, model) >= 0.0);
      CHECK(std::isfinite(loop_term_B(c, pair, model)));
      // Direct double loop, beta = 1.
      double acc = 0.0;
      for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = 0; j < 6; ++j) {
          if (i == j) continue;
          const double d = pair.psi(c[i]) - pair.psi(c[j]);
          acc += std::pow(6.0, -0.5) * model.g2(c[i] - c[j]) * d * d;
        }
      }
      CHECK(loop_term_B_pairs(c, pair, model) == doctest::Approx(acc).epsilon(1e-12));
    }
  }

  TEST_CASE("energy reference values and exchangeability") {
    const KernelModel model = KernelModel::build({0.5, 1.0, 2});
    // 2^{-1/2} * 2 * g(1/2), g(1/2) from the mpmath oracle.
    CHECK(energy(Configuration({0.0, 0.5}), model) ==
          doctest::Approx(std::sqrt(2.0) * -1.2097972868432607405).epsilon(1e-12));
    const KernelModel m16 = KernelModel::build({0.5, 1.0, 16});
    Configuration c = random_config(16, 21);
    std::vector<double> p = c.positions();
    std::reverse(p.begin(), p.end());
    std::rotate(p.begin(), p.begin() + 5, p.end());
    CHECK(energy(Configuration(p), m16) == energy(c, m16));
    // Two sequential single-site moves add up.
    std::vector<double> q = c.positions();
    const double d1 = energy_delta(c, 3, q[3] + 0.004, m16);
    q[3] += 0.004;
    const Configuration c1(q);
    const double d2 = energy_delta(c1, 9, q[9] - 0.006, m16);
    q[9] -= 0.006;
    CHECK(d1 + d2 == doctest::Approx(energy(Configuration(q), m16) - energy(c, m16)).epsilon(1e-10).scale(1.0));
  }

  TEST_CASE("gaps, block averages and lattice fluctuations") {
    const Configuration c = random_config(32, 22);
    double total = 0.0;
    for (std::size_t i = 0; i < 32; ++i) {
      total += c.gap(i, 1);
      CHECK(c.block_average(i, 0) == c[i]);
    }
    CHECK(total == doctest::Approx(32.0).epsilon(1e-13));
    CHECK_THROWS_AS(c.gap(0, 17), IndexError);
    for (std::size_t n : {16u, 64u, 100u}) {
      const Configuration lat = Configuration::lattice(n, 0.37 / static_cast<double>(n));
      CHECK(std::abs(fluct(lat, TestFunction::indicator(0.125))) <= 1.0);
    }
  }

  TEST_CASE("Hessian off-diagonals are nonpositive") {
    const KernelModel model = KernelModel::build({0.5, 1.0, 16});
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const Eigen::MatrixXd h = hessian(random_config(16, 100 + seed), model);
      for (Eigen::Index i = 0; i < 16; ++i) {
        for (Eigen::Index j = 0; j < 16; ++j) {
          if (i != j) CHECK(h(i, j) <= 0.0);
        }
      }
    }
  }

  TEST_CASE("loop identity on 100 random configurations") {
    for (std::size_t n : {4u, 8u, 16u}) {
      const KernelModel model = KernelModel::build({0.5, 2.0, n});
      const Multiplier mu = calibrate_multiplier(model, 4096);
      const LoopPair pair = make_loop_pair(build_transport(TestFunction::cosine(1), mu, 4096), mu);
      double worst = 0.0;
      for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const LoopDiagnostics d = loop_term_A(random_config(n, 1000 + seed), pair, model, false);
        worst = std::max(worst, std::abs(d.a_value - d.a_transport) / std::max(1.0, std::abs(d.a_value)));
      }
      CAPTURE(n);
      CHECK(worst <= 1e-8);
    }
  }

  TEST_CASE("constant test function gives vanishing loop terms") {
    const KernelModel model = KernelModel::build({0.5, 1.0, 8});
    const Multiplier mu = calibrate_multiplier(model, 1024);
    const LoopPair pair = make_loop_pair(riesz_inverse_spectral(TestFunction::grid(std::vector<double>(64, 2.0)), mu, 1024), mu);
    const Configuration c = random_config(8, 23);
    CHECK(std::abs(loop_term_A(c, pair, model).a_value) < 1e-12);
    CHECK(std::abs(loop_term_B(c, pair, model)) < 1e-12);
    CHECK(fluct(c, TestFunction::grid(std::vector<double>(64, 2.0))) == doctest::Approx(0.0).scale(1.0));
  }
}
