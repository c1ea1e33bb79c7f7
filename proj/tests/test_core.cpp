#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "resolvex/operators.hpp"
#include "resolvex/vector.hpp"
#include "resolvex/zoo.hpp"

using namespace resolvex;

namespace {
Vector vec(std::initializer_list<double> xs) { return Vector::of(xs); }
}  // namespace

TEST_CASE("vector shapes and arithmetic") {
  Vector a = vec({1.0, 2.0});
  Vector b = vec({3.0, -1.0});
  CHECK(norm(a + b - vec({4.0, 1.0})) == doctest::Approx(0.0));
  CHECK(dot(a, b) == doctest::Approx(1.0));

  Vector m(Shape::matrix(2, 3));
  CHECK_THROWS_AS((void)(a + m), std::invalid_argument);

  Vector p = Vector::concat(a, b);
  CHECK(p.shape().kind() == Shape::Kind::pair);
  CHECK(dot(p, p) == doctest::Approx(dot(a, a) + dot(b, b)));
  CHECK(norm(p.first() - a) == 0.0);
  CHECK(norm(p.second() - b) == 0.0);

  CHECK_THROWS_AS(Vector(Shape::vector(2), {1.0, std::nan("")}), std::invalid_argument);
}

TEST_CASE("strengthen transports moduli") {
  StrengtheningParams p;
  p.q = vec({0.0});

  MonotoneOperator zero = zoo::make_zero_operator();
  p.theta = 2.0;
  p.sigma = 0.5;
  CHECK(strengthen(zero, p).alpha == doctest::Approx(0.5));  // theta*alpha + sigma
  MonotoneOperator mono = zoo::make_affine_operator(0.25, vec({0.0}));
  CHECK(strengthen(mono, p).alpha == doctest::Approx(1.0));

  MonotoneOperator id = zoo::make_affine_operator(1.0, vec({0.0}));
  p.theta = 2.0;
  p.sigma = -0.5;
  auto s1 = strengthen(id, p);
  CHECK(*s1.kappa == doctest::Approx(2.5));  // kappa*theta + |sigma|

  MonotoneOperator coco = zoo::make_affine_operator(1.0, vec({0.0}));  // beta = 1
  p.theta = 1.0;
  p.sigma = 1.0;
  auto s2 = strengthen(coco, p);
  REQUIRE(s2.beta.has_value());
  CHECK(*s2.beta == doctest::Approx(0.5));  // (theta/beta + sigma)^{-1}

  p.theta = 0.0;
  CHECK_THROWS_AS(strengthen(zero, p), std::invalid_argument);
}

TEST_CASE("strengthened forward map") {
  StrengtheningParams p;
  p.theta = 2.0;
  p.sigma = 1.0;

  MonotoneOperator zero = zoo::make_zero_operator();
  p.q = vec({0.3, -0.7});
  Vector x = vec({2.0, -4.0});
  CHECK(norm(strengthened_forward(zero, p, x) - 1.0 * x) == doctest::Approx(0.0));

  MonotoneOperator id = zoo::make_affine_operator(1.0, vec({0.0, 0.0}));
  p.q = vec({0.0, 0.0});
  CHECK(norm(strengthened_forward(id, p, vec({1.0, 1.0})) - vec({3.0, 3.0})) ==
        doctest::Approx(0.0));

  p.q = vec({1.0, 0.0});
  CHECK(norm(strengthened_forward(id, p, vec({1.0, 1.0})) - vec({4.0, 3.0})) ==
        doctest::Approx(0.0));

  MonotoneOperator no_fwd = zoo::make_box_operator(0.0, 1.0);
  CHECK_THROWS_AS(strengthened_forward(no_fwd, p, x), std::invalid_argument);
}

TEST_CASE("strengthened resolvent closed forms") {
  StrengtheningParams p;

  // zero operator: J = x / (1 + gamma*sigma)
  MonotoneOperator zero = zoo::make_zero_operator();
  p.theta = 3.0;
  p.sigma = 0.5;
  p.q = vec({0.4});
  Vector x = vec({2.0});
  CHECK(norm(strengthened_resolvent(zero, p, 2.0, x) - (1.0 / 2.0) * x) <= 1e-12);

  // identity: y + gamma((theta + sigma) y + q) = x at q = 0 gives x/(1+gamma(theta+sigma))
  MonotoneOperator id = zoo::make_affine_operator(1.0, vec({0.0}));
  p.theta = 1.0;
  p.sigma = 1.0;
  p.q = vec({0.0});
  CHECK(norm(strengthened_resolvent(id, p, 1.0, vec({3.0})) - vec({1.0})) <= 1e-12);

  // normal cone to [0, inf): 2y + N(y) contains -2 only at y = 0
  MonotoneOperator cone = zoo::make_box_operator(0.0, oracles::kInf);
  CHECK(norm(strengthened_resolvent(cone, p, 1.0, vec({-2.0}))) == doctest::Approx(0.0));

  // parameter degeneracies rejected
  p.sigma = -2.0;
  CHECK_THROWS_AS(strengthened_resolvent(zero, p, 1.0, x), std::invalid_argument);
  MonotoneOperator hypo = zoo::make_affine_operator(-3.0, vec({0.0}));
  p.theta = 1.0;
  p.sigma = 0.5;  // theta*alpha + sigma = -2.5, 1 + gamma*(-2.5) < 0 at gamma = 1
  CHECK_THROWS_AS(strengthened_resolvent(hypo, p, 1.0, x), std::invalid_argument);
}

TEST_CASE("zero point <-> resolvent correspondence maps") {
  CHECK(norm(zero_point_to_resolvent(vec({0.0, 0.0}), 5.0, vec({1.0, 2.0})) - vec({1.0, 2.0})) ==
        0.0);
  CHECK(norm(zero_point_to_resolvent(vec({1.0, 1.0}), 2.0, vec({0.0, 0.0})) - vec({2.0, 2.0})) ==
        0.0);
  Rng rng(7);
  for (int t = 0; t < 10; ++t) {
    Vector x = vec({rng.uniform(-5, 5), rng.uniform(-5, 5)});
    Vector q = vec({rng.uniform(-5, 5), rng.uniform(-5, 5)});
    const double theta = rng.uniform(0.1, 4.0);
    Vector back = resolvent_to_zero_point(zero_point_to_resolvent(x, theta, q), theta, q);
    CHECK(norm(back - x) <= 1e-12 * std::max(1.0, norm(x)));
  }
}

TEST_CASE("assumption check") {
  CHECK(check_assumption({1.0, {0.0, 0.0}, {1.0, 1.0}}));
  // 11 * (-0.5) + 1 = -4.5 < 0
  CHECK_FALSE(check_assumption({11.0, {-0.5, 0.0}, {1.0, 10.0}}));
  // with the weights the other way round both slots clear zero
  CHECK(check_assumption({11.0, {-0.5, 0.0}, {10.0, 1.0}}));
  // saddle-operator parameters used by the denoising runs
  CHECK(check_assumption({10.1, {-0.5, 0.0}, {10.0, 0.1}}));
  CHECK_FALSE(check_assumption({-1.0, {1.0}, {1.0}}));
  CHECK_FALSE(check_assumption({1.0, {0.0}, {1.0, 1.0}}));
}

TEST_CASE("resolvent transport identity vs brute-force inclusion oracle") {
  Rng rng(20240401);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t dim = 1 + static_cast<std::size_t>(rng.uniform01() * 5.0);
    std::vector<oracles::ScalarOpModel> comps;
    for (std::size_t i = 0; i < dim; ++i) comps.push_back(oracles::random_model(rng));

    // single model per vector operator keeps alpha meaningful; use the min
    double alpha = 0.0;
    for (const auto& m : comps) alpha = std::min(alpha, m.alpha());
    MonotoneOperator op;
    op.alpha = alpha;
    op.resolvent = [comps](double gamma, const Vector& z) {
      Vector out(z.shape());
      for (std::size_t i = 0; i < z.size(); ++i)
        out[i] = comps[i].as_operator().resolvent(gamma, Vector::scalar(z[i]))[0];
      return out;
    };

    StrengtheningParams p;
    p.theta = rng.uniform(0.2, 3.0);
    p.sigma = rng.uniform(0.05, 2.0);
    p.q = Vector(Shape::vector(dim));
    Vector x(Shape::vector(dim));
    for (std::size_t i = 0; i < dim; ++i) {
      p.q[i] = rng.uniform(-3.0, 3.0);
      x[i] = rng.uniform(-5.0, 5.0);
    }
    const double gamma = rng.uniform(0.05, 3.0);

    Vector lib = strengthened_resolvent(op, p, gamma, x);
    Vector ref = oracles::solve_inclusion(comps, p.theta, p.sigma, p.q, gamma, x);
    const double rel = norm(lib - ref) / std::max(1.0, norm(ref));
    worst = std::max(worst, rel);
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("resolvent contraction factor 1/(1+gamma*alpha)") {
  Rng rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const double a = rng.uniform(-0.4, 2.0);
    MonotoneOperator op = zoo::make_affine_operator(a, vec({rng.uniform(-1, 1)}));
    const double gamma = rng.uniform(0.05, 1.5);
    if (1.0 + gamma * a <= 0.05) continue;
    Vector x = vec({rng.uniform(-4, 4)});
    Vector y = vec({rng.uniform(-4, 4)});
    const double lhs = norm(op.resolvent(gamma, x) - op.resolvent(gamma, y));
    CHECK(lhs <= (1.0 + 1e-12) * norm(x - y) / (1.0 + gamma * a));
  }

  // after strengthening with theta*alpha + sigma > 0 the resolvent contracts
  Rng rng2(100);
  for (int trial = 0; trial < 40; ++trial) {
    oracles::ScalarOpModel m = oracles::random_model(rng2);
    StrengtheningParams p;
    p.theta = rng2.uniform(0.3, 2.0);
    p.sigma = rng2.uniform(0.1, 1.5);
    p.q = vec({rng2.uniform(-1, 1)});
    const double gamma = rng2.uniform(0.1, 2.0);
    auto op = m.as_operator();
    const double mod = p.theta * m.alpha() + p.sigma;
    REQUIRE(mod > 0.0);
    Vector x = vec({rng2.uniform(-4, 4)});
    Vector y = vec({rng2.uniform(-4, 4)});
    const double lhs =
        norm(strengthened_resolvent(op, p, gamma, x) - strengthened_resolvent(op, p, gamma, y));
    CHECK(lhs <= (1.0 + 1e-12) * norm(x - y) / (1.0 + gamma * mod));
  }
}

TEST_CASE("lipschitz and cocoercivity transport on sampled pairs") {
  Rng rng(4242);
  for (int trial = 0; trial < 30; ++trial) {
    const double a = rng.uniform(0.1, 3.0);
    MonotoneOperator op = zoo::make_affine_operator(a, vec({rng.uniform(-2, 2), 0.0}));
    StrengtheningParams p;
    p.theta = rng.uniform(0.2, 2.5);
    p.sigma = rng.uniform(0.01, 2.0);
    p.q = vec({rng.uniform(-1, 1), rng.uniform(-1, 1)});
    auto s = strengthen(op, p);
    const double kap = *s.kappa;
    const double bet = *s.beta;

    Vector x = vec({rng.uniform(-3, 3), rng.uniform(-3, 3)});
    Vector y = vec({rng.uniform(-3, 3), rng.uniform(-3, 3)});
    Vector fx = s.forward(x), fy = s.forward(y);
    CHECK(norm(fx - fy) <= (1.0 + 1e-12) * kap * norm(x - y));
    CHECK(dot(x - y, fx - fy) >= bet * dot(fx - fy, fx - fy) - 1e-12);
  }
}

TEST_CASE("zero of strengthened affine sum matches closed-form resolvent") {
  Rng rng(555);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n_ops = 2 + (rng.raw() % 2);
    const double theta = rng.uniform(0.2, 3.0);
    std::vector<double> sig, a;
    std::vector<Vector> c;
    double sig_total = 0.0;
    for (std::size_t i = 0; i < n_ops; ++i) {
      sig.push_back(rng.uniform(0.1, 2.0));
      sig_total += sig.back();
      a.push_back(rng.uniform(0.0, 2.0));
      c.push_back(vec({rng.uniform(-2, 2), rng.uniform(-2, 2)}));
    }
    Vector q = vec({rng.uniform(-3, 3), rng.uniform(-3, 3)});
    const double omega = theta / sig_total;

    // zero of sum_i (A_i(theta x + q) + sigma_i x), solved directly:
    // (theta sum a_i + sig_total) x = sum a_i (c_i - q)
    Vector rhs = Vector::zeros(q.shape());
    double slope = sig_total;
    for (std::size_t i = 0; i < n_ops; ++i) {
      rhs += a[i] * (c[i] - q);
      slope += theta * a[i];
    }
    Vector x_star = (1.0 / slope) * rhs;

    // closed-form J_{omega sum A_i}(q)
    double asum = 0.0;
    Vector acsum = Vector::zeros(q.shape());
    for (std::size_t i = 0; i < n_ops; ++i) {
      asum += a[i];
      acsum += a[i] * c[i];
    }
    Vector j = (1.0 / (1.0 + omega * asum)) * (q + omega * acsum);

    CHECK(norm(zero_point_to_resolvent(x_star, theta, q) - j) <=
          1e-8 * std::max(1.0, norm(j)));
  }
}
