#include "l2inv/bernoulli.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace l2inv;

namespace {

Alphabet binary() { return Alphabet{{Rat(1, 2), Rat(1, 2)}}; }

}  // namespace

TEST_CASE("cylinder functions: values, integrals, shifts, minimal support") {
    const Alphabet a = binary();
    const CylinderFunction one = CylinderFunction::constant(a, 1, 1);
    CHECK(one.integral() == Rat(1));
    CHECK(one.l1_norm() == Rat(1));

    const CylinderFunction chi = CylinderFunction::letter_at(a, 1, {0}, 0);
    CHECK(chi.integral() == Rat(1, 2));
    CHECK(chi.value({0}) == Rat(1));
    CHECK(chi.value({1}) == Rat(0));
    CHECK(chi.mul(chi).equals(chi));
    CHECK(chi.add(CylinderFunction::letter_at(a, 1, {0}, 1)).minimal().support().empty());

    // Shifting moves the support; the integral is shift-invariant.
    const CylinderFunction shifted = chi.shift({3});
    CHECK(shifted.support() == std::vector<GroupElem>{{3}});
    CHECK(shifted.integral() == Rat(1, 2));

    const CylinderFunction eq = CylinderFunction::coords_equal(a, 1, {0}, {1});
    CHECK(eq.integral() == Rat(1, 2));
    CHECK(eq.support().size() == 2);
    CHECK(eq.linf_norm() == Rat(1));

    // A table that secretly ignores a coordinate shrinks under minimal().
    const CylinderFunction padded = chi.add(CylinderFunction::constant(a, 1, 0)
                                                .add(CylinderFunction::letter_at(a, 1, {5}, 0))
                                                .add(CylinderFunction::letter_at(a, 1, {5}, 1)));
    CHECK(padded.minimal().support() == std::vector<GroupElem>{{0}});
}

TEST_CASE("crossed multiplication follows the shift action") {
    const Alphabet a = binary();
    const CylinderFunction chi = CylinderFunction::letter_at(a, 1, {0}, 0);

    // (1.t)(chi.e) = (chi o m_{t^{-1}}).t with support shifted to {1}.
    CrossedCylinderMatrix t(a, 1, 1, 1);
    t.add_term(0, 0, {1}, CylinderFunction::constant(a, 1, 1));
    CrossedCylinderMatrix c(a, 1, 1, 1);
    c.add_term(0, 0, {0}, chi);
    const CrossedCylinderMatrix prod = t.mul(c);
    REQUIRE(prod.at(0, 0).size() == 1);
    const auto& [g, f] = *prod.at(0, 0).begin();
    CHECK(g == GroupElem{1});
    CHECK(f.support() == std::vector<GroupElem>{{1}});

    // (f.t)* (f.t) = (|f|^2 o m_t) . e; trace equals integral of f^2.
    const CrossedCylinderMatrix sq = c.adjoint().mul(c);
    CHECK(sq.trace() == Rat(1, 2));
    CHECK(t.adjoint().mul(t).trace() == Rat(1));
}

TEST_CASE("pushforward to Z/n: unit, projections, group shifts") {
    const Alphabet a = binary();

    CrossedCylinderMatrix unit = CrossedCylinderMatrix::identity(a, 1, 1);
    const VNMorphism u = bernoulli_pushforward(unit, 2);
    CHECK(u.approx_equal(VNMorphism::identity(bernoulli_model(a, 1, 2), 1), 1e-14));
    CHECK(fk_det(u) == doctest::Approx(1.0));

    // chi_{x_0 = a0} . e becomes a diagonal projection of trace 1/2.
    CrossedCylinderMatrix chi(a, 1, 1, 1);
    chi.add_term(0, 0, {0}, CylinderFunction::letter_at(a, 1, {0}, 0));
    const VNMorphism p = bernoulli_pushforward(chi, 2);
    CHECK(p.is_projection());
    CHECK(p.trace().real() == doctest::Approx(0.5).epsilon(1e-14));

    // chi . t has zero trace (off-identity group part).
    CrossedCylinderMatrix chit(a, 1, 1, 1);
    chit.add_term(0, 0, {1}, CylinderFunction::letter_at(a, 1, {0}, 0));
    CHECK(std::abs(bernoulli_pushforward(chit, 2).trace()) < 1e-14);

    // The cap is enforced.
    CHECK_THROWS_AS(bernoulli_pushforward(unit, 12), std::invalid_argument);
}

TEST_CASE("pushforward is a *-homomorphism on generators and seeded samples") {
    const Alphabet a = binary();
    std::mt19937_64 rng(616);
    std::uniform_int_distribution<int> coeff(-2, 2);
    std::uniform_int_distribution<int> letter(0, 1);
    std::uniform_int_distribution<long long> pos(-1, 1);

    auto random_matrix = [&](int d) {
        CrossedCylinderMatrix m(a, 1, d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (int term = 0; term < 2; ++term) {
                    const CylinderFunction f =
                        CylinderFunction::letter_at(a, 1, {pos(rng)}, letter(rng))
                            .scale(coeff(rng));
                    m.add_term(i, j, {pos(rng)}, f);
                }
        return m;
    };

    for (int trial = 0; trial < 8; ++trial) {
        const CrossedCylinderMatrix m1 = random_matrix(2);
        const CrossedCylinderMatrix m2 = random_matrix(2);
        const int n = 3;
        const VNMorphism lhs = bernoulli_pushforward(m1.mul(m2), n);
        const VNMorphism rhs =
            bernoulli_pushforward(m1, n).compose(bernoulli_pushforward(m2, n));
        CHECK(lhs.frobenius_distance(rhs) < 1e-12);
        CHECK(bernoulli_pushforward(m1.adjoint(), n)
                  .frobenius_distance(bernoulli_pushforward(m1, n).adjoint()) < 1e-12);
        CHECK(bernoulli_pushforward(m1.add(m2), n)
                  .frobenius_distance(bernoulli_pushforward(m1, n)
                                          .add(bernoulli_pushforward(m2, n))) < 1e-12);
        // Trace transport is exact for the identity group coefficient.
        CHECK(bernoulli_pushforward(m1, n).trace().real() ==
              doctest::Approx(to_double(m1.trace())).epsilon(1e-12));
    }
}

TEST_CASE("trace identity holds iff the quotient is injective on the support") {
    const Alphabet a = binary();

    const TraceCheck c1 = trace_injectivity_check(CylinderFunction::constant(a, 1, 1), 2);
    CHECK(c1.lhs == Rat(1));
    CHECK(c1.rhs == Rat(1));
    CHECK(c1.injective);

    const TraceCheck c2 =
        trace_injectivity_check(CylinderFunction::letter_at(a, 1, {0}, 0), 3);
    CHECK(c2.lhs == Rat(1, 2));
    CHECK(c2.rhs == Rat(1, 2));
    CHECK(c2.injective);

    // x_0 = x_1 collapses under Z/1: lhs 1 vs rhs 1/2, not injective.
    const TraceCheck c3 =
        trace_injectivity_check(CylinderFunction::coords_equal(a, 1, {0}, {1}), 1);
    CHECK(c3.lhs == Rat(1));
    CHECK(c3.rhs == Rat(1, 2));
    CHECK(!c3.injective);

    // The same function is fine once the two coordinates stay distinct.
    const TraceCheck c4 =
        trace_injectivity_check(CylinderFunction::coords_equal(a, 1, {0}, {1}), 2);
    CHECK(c4.injective);
    CHECK(c4.lhs == c4.rhs);
}

TEST_CASE("integer crossed matrices have pushforward determinant >= 1") {
    const Alphabet a = binary();
    std::mt19937_64 rng(717);
    std::uniform_int_distribution<int> coeff(-2, 2);
    std::uniform_int_distribution<int> letter(0, 1);
    std::uniform_int_distribution<long long> pos(-1, 1);
    for (int trial = 0; trial < 10; ++trial) {
        CrossedCylinderMatrix m(a, 1, 1, 1);
        for (int term = 0; term < 3; ++term)
            m.add_term(0, 0, {pos(rng)},
                       CylinderFunction::letter_at(a, 1, {pos(rng)}, letter(rng))
                           .scale(coeff(rng)));
        CHECK(fk_det(bernoulli_pushforward(m, 3)) >= 1.0 - 1e-9);
    }
}

TEST_CASE("step approximation sequences validate norm budgets") {
    const Alphabet a = binary();
    const CylinderFunction chi = CylinderFunction::letter_at(a, 1, {0}, 0);

    StepApproximation constant{{chi, chi, chi}, Rat(1), {Rat(0), Rat(0), Rat(0)}};
    const std::vector<Rat> dists = validate_step_approximation(constant);
    for (const Rat& d : dists) CHECK(d == Rat(0));

    // A step exceeding the declared sup bound is rejected.
    StepApproximation toobig{{chi.scale(3)}, Rat(1), {Rat(0)}};
    CHECK_THROWS(validate_step_approximation(toobig));

    // Inconsistent deviation budgets are rejected by the triangle inequality.
    const CylinderFunction far = CylinderFunction::letter_at(a, 1, {1}, 1);
    StepApproximation lying{{chi, far}, Rat(1), {Rat(0), Rat(0)}};
    CHECK_THROWS(validate_step_approximation(lying));
}
