#include "catch_amalgamated.hpp"

#include "mcr/pairings.hpp"
#include "mcr/quasifree.hpp"
#include "mcr/random.hpp"

using namespace mcr;

namespace {

ExchangeKernel symmetric_two_component() {
  const PhaseFn q1 = PhaseFn::exp_sign_diff(0.9);
  return make_two_component(q1, q1.swapped());
}

ExchangeKernel generic_two_component() {
  return make_two_component(PhaseFn::exp_sign_diff(0.9), PhaseFn::exp_diff(0.4));
}

Matrix scalar(int s, double c) { return Matrix::Identity(s, s) * c; }

Matrix random_psd(Rng& rng, int s, double scale) {
  const Matrix a = random_matrix(rng, s, s);
  Matrix m = a * a.adjoint();
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  return m * (scale / es.eigenvalues().maxCoeff());
}

std::vector<Letter> word_of(const std::vector<Sign>& signs, const std::vector<Vector>& fs) {
  std::vector<Letter> w;
  for (std::size_t i = 0; i < signs.size(); ++i) w.push_back({signs[i], fs[i]});
  return w;
}

}  // namespace

TEST_CASE("validate_k", "[quasifree]") {
  CHECK_NOTHROW(validate_k(scalar(2, 0.5), -1.0));
  CHECK_THROWS_AS(validate_k(scalar(2, 1.2), -1.0), InvalidOperator);
  Rng rng(1);
  CHECK_NOTHROW(validate_k(random_psd(rng, 3, 40.0), 1.0));
  CHECK_THROWS_AS(validate_k(scalar(2, 0.0), 1.0), InvalidOperator);
  CHECK_THROWS_AS(validate_k(scalar(2, 1.0), -1.0), InvalidOperator);
  CHECK_THROWS_AS(validate_k(scalar(2, -0.1), 1.0), InvalidOperator);
  Matrix nh = scalar(2, 0.5);
  nh(0, 1) = 0.2;
  CHECK_THROWS_AS(validate_k(nh, 1.0), InvalidOperator);
  CHECK_THROWS_AS(validate_k(Matrix::Identity(2, 3), 1.0), InvalidOperator);
}

TEST_CASE("sqrt_psd", "[quasifree]") {
  CHECK(max_abs(Matrix(sqrt_psd(Matrix::Identity(3, 3)) - Matrix::Identity(3, 3))) < 1e-14);
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 4.0;
  d(1, 1) = 9.0;
  const Matrix r = sqrt_psd(d);
  CHECK(std::abs(r(0, 0) - 2.0) < 1e-14);
  CHECK(std::abs(r(1, 1) - 3.0) < 1e-14);
  Rng rng(2);
  for (int t = 0; t < 5; ++t) {
    const Matrix m = random_psd(rng, 4, 3.0);
    const Matrix s = sqrt_psd(m);
    CHECK(max_abs(Matrix(s * s - m)) < 1e-10);
  }
  CHECK_THROWS_AS(sqrt_psd(scalar(2, -1.0)), InvalidOperator);
}

TEST_CASE("context", "[quasifree]") {
  const DiscreteModel model({0.0, 1.0}, 2, 2, 2);
  Rng rng(3);
  const Matrix k = random_psd(rng, 2, 0.6);
  const QuasiFreeContext ctx(symmetric_two_component(), model, k, 2);
  const Matrix id = Matrix::Identity(2, 2);
  CHECK(max_abs(Matrix(ctx.k1() * ctx.k1() - k)) < 1e-10);
  CHECK(max_abs(Matrix(ctx.k2() * ctx.k2() - id - ctx.kappa() * k)) < 1e-10);
  CHECK(ctx.fock().dim() == 2 * model.one_particle_dim());

  SECTION("doubled kernel satisfies the kernel axioms") {
    CHECK(check_table_axioms(ctx.fock().table(), 1e-12).all_pass());
  }
  SECTION("A+ on the vacuum is a copy-2 creation") {
    const Vector f = random_vector(rng, model.one_particle_dim());
    const FockVector out = ctx.fock().apply(ctx.represent(Sign::plus, f), ctx.fock().vacuum());
    REQUIRE(out.has(1));
    CHECK_FALSE(out.has(0));
    const Vector lvl = out.level(1);
    const int d = model.one_particle_dim();
    CHECK(max_abs(Vector(lvl.head(d))) == 0.0);
    CHECK(max_abs(Vector(lvl.tail(d) - ctx.apply_internal(ctx.k2(), f))) < 1e-14);
  }
  SECTION("unsupported kernel is rejected") {
    const PhaseFn off = PhaseFn::exp_sign_diff(0.5);
    const auto lifted = make_lifted({{PhaseFn::exp_sign_diff(0.2), off}, {off, PhaseFn::constant(-1.0)}});
    CHECK_THROWS_AS(QuasiFreeContext(lifted, model, scalar(2, 0.5), 2), ConstraintViolation);
  }
  SECTION("K of the wrong size is rejected") {
    CHECK_THROWS_AS(QuasiFreeContext(symmetric_two_component(), model, scalar(3, 0.5), 2),
                    InvalidOperator);
  }
}

TEST_CASE("represented fields", "[quasifree][property]") {
  SECTION("two-component, r = 2, s = 1") {
    const QuasiFreeContext ctx(generic_two_component(), DiscreteModel({0.0, 1.0}, 2, 1, 4),
                               scalar(1, 0.3), 4);
    CHECK(verify_adjointness(ctx).all_pass());
    const auto rep = verify_represented_mcr(ctx, 2);
    for (const auto& c : rep.checks) {
      INFO(c.name);
      CHECK(c.max_residual <= 1e-10);
    }
  }
  SECTION("abelian, r = 1, s = 2, kappa = -1") {
    Rng rng(4);
    const QuasiFreeContext ctx(make_abelian(PhaseFn::constant(-1.0)), DiscreteModel({0.0, 1.0}, 1, 2, 4),
                               random_psd(rng, 2, 0.8), 4);
    CHECK(ctx.kappa() == -1.0);
    CHECK(verify_adjointness(ctx).all_pass());
    CHECK(verify_represented_mcr(ctx, 2).all_pass());
  }
  SECTION("truncation too small") {
    const QuasiFreeContext ctx(generic_two_component(), DiscreteModel({0.0}, 2, 1, 3), scalar(1, 0.3), 3);
    CHECK_THROWS_AS(verify_represented_mcr(ctx, 2), TruncationOverflow);
  }
}

TEST_CASE("tau", "[quasifree]") {
  const DiscreteModel model({-0.3, 0.8}, 2, 2, 4);
  Rng rng(5);
  const QuasiFreeContext ctx(generic_two_component(), model, random_psd(rng, 2, 0.7), 4);
  const int d = model.one_particle_dim();
  CHECK(tau(ctx, {}) == cplx{1.0, 0.0});

  SECTION("two-point function factorizes through rho2") {
    for (int t = 0; t < 4; ++t) {
      const Matrix p1 = random_matrix(rng, 2, 2), p2 = random_matrix(rng, 2, 2);
      const Vector g1 = random_vector(rng, 2), g2 = random_vector(rng, 2);
      const cplx pair = p1.cwiseProduct(p2).sum();
      const cplx got =
          tau(ctx, {{Sign::plus, product_vector(p1, g1)}, {Sign::minus, product_vector(p2, g2)}});
      CHECK(std::abs(got - pair * rho2(ctx, g1, g2)) < 1e-12);
    }
  }
  SECTION("unequal creation and annihilation counts give 0, length <= 5") {
    std::vector<Vector> fs;
    for (int i = 0; i < 5; ++i) fs.push_back(random_vector(rng, d));
    for (int len = 1; len <= 5; ++len)
      for (int mask = 0; mask < (1 << len); ++mask) {
        std::vector<Sign> signs;
        int plus = 0;
        for (int i = 0; i < len; ++i) {
          const bool p = (mask >> i) & 1;
          plus += p;
          signs.push_back(p ? Sign::plus : Sign::minus);
        }
        if (2 * plus == len) continue;
        INFO("len " << len << " mask " << mask);
        CHECK(std::abs(tau(ctx, word_of(signs, fs))) < 1e-14);
      }
  }
  SECTION("odd field products vanish") {
    std::vector<Vector> fs;
    for (int i = 0; i < 3; ++i) fs.push_back(random_vector(rng, d));
    CHECK(std::abs(tau_fields(ctx, fs)) < 1e-14);
  }
}

TEST_CASE("rho2 and lambda2", "[quasifree]") {
  const DiscreteModel model({0.0, 1.0}, 2, 2, 2);
  Rng rng(6);
  const Vector g1 = random_vector(rng, 2), g2 = random_vector(rng, 2);
  SECTION("K = c 1") {
    const QuasiFreeContext ctx(symmetric_two_component(), model, scalar(2, 0.4), 2);
    CHECK(std::abs(rho2(ctx, g1, g2) - 0.4 * g1.cwiseProduct(g2).sum()) < 1e-14);
    Vector e0 = Vector::Zero(2);
    e0(0) = 1.0;
    CHECK(std::abs(lambda2(ctx, e0, e0) - (1.0 + 0.4 + ctx.kappa() * 0.4)) < 1e-14);
    Vector h(2);
    h << g1(1), -g1(0);  // bilinear orthogonal to K g1 = 0.4 g1
    CHECK(std::abs(rho2(ctx, g1, h)) < 1e-14);
  }
  SECTION("both measures match the represented state") {
    const QuasiFreeContext ctx(symmetric_two_component(), model, random_psd(rng, 2, 0.9), 2);
    for (int t = 0; t < 4; ++t) {
      const Matrix p1 = random_matrix(rng, 2, 2).real().cast<cplx>();
      const Matrix p2 = random_matrix(rng, 2, 2).real().cast<cplx>();
      const Vector a = random_vector(rng, 2), b = random_vector(rng, 2);
      const cplx pair = p1.cwiseProduct(p2).sum();
      const Vector f1 = product_vector(p1, a), f2 = product_vector(p2, b);
      CHECK(std::abs(tau_fields(ctx, {f1, f2}) - pair * lambda2(ctx, a, b)) < 1e-10);
      CHECK(std::abs(tau(ctx, {{Sign::plus, f1}, {Sign::minus, f2}}) - pair * rho2(ctx, a, b)) < 1e-10);
    }
  }
  SECTION("delta identity") {
    const QuasiFreeContext ctx(symmetric_two_component(), model, random_psd(rng, 2, 0.9), 2);
    for (int t = 0; t < 5; ++t)
      CHECK(delta_identity_residual(ctx, random_vector(rng, 2), random_vector(rng, 2)) < 1e-10);
  }
}

TEST_CASE("gauge-invariant quasi-free identities", "[quasifree]") {
  Rng rng(7);
  const QuasiFreeContext ctx(generic_two_component(), DiscreteModel({0.0, 1.0}, 2, 1, 4),
                             scalar(1, 0.3), 4);
  const auto zero = verify_gauge_quasifree(ctx, 2, 1, 4, rng);
  CHECK(zero.all_pass());
  CHECK(zero.checks.front().name == "gauge_quasifree_2_1");
  CHECK(verify_gauge_quasifree(ctx, 1, 1, 4, rng).checks.front().max_residual < 1e-12);
  CHECK(verify_gauge_quasifree(ctx, 2, 2, 4, rng).all_pass());
  CHECK(verify_gauge_quasifree(ctx, 1, 3, 2, rng).all_pass());
  CHECK_THROWS_AS(verify_gauge_quasifree(ctx, 4, 3, 1, rng), Error);
}

TEST_CASE("strongly quasi-free identity", "[quasifree]") {
  Rng rng(8);
  SECTION("holds when the strong condition holds") {
    const QuasiFreeContext ctx(symmetric_two_component(), DiscreteModel({-0.4, 0.6}, 2, 1, 4),
                               scalar(1, 0.3), 4);
    const auto rep = verify_strongly_quasifree(ctx, 4, 3, rng);
    CHECK(rep.find("strong_condition")->pass);
    CHECK(rep.find("strongly_quasifree_4")->pass);
    CHECK(verify_strongly_quasifree(ctx, 2, 3, rng).all_pass());
    CHECK(verify_strongly_quasifree(ctx, 3, 2, rng).all_pass());
  }
  SECTION("fails for a non-symmetric abelian phase") {
    const QuasiFreeContext ctx(make_abelian(PhaseFn::exp_sign_diff(0.7)), DiscreteModel({0.0, 1.0}, 1, 1, 4),
                               scalar(1, 0.3), 4);
    const auto rep = verify_strongly_quasifree(ctx, 4, 3, rng);
    CHECK_FALSE(rep.find("strong_condition")->pass);
    CHECK(rep.find("strongly_quasifree_4")->max_residual > 1e-6);
    // two-point functions still match
    CHECK(verify_strongly_quasifree(ctx, 2, 3, rng).find("strongly_quasifree_2")->pass);
  }
}
