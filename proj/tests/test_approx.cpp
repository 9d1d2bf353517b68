#include "l2inv/approx.hpp"
#include "l2inv/harness.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace l2inv;

namespace {

GroupRingMatrix t_minus_2() {
    const Group z = Group::free_abelian(1);
    GroupRingMatrix m(z, 1, 1);
    m.at(0, 0) = GroupRingElement::monomial(z, {1}, 1)
                     .add(GroupRingElement::scalar(z, -2));
    return m;
}

GroupRingMatrix one_plus_t_z2() {
    const Group z2 = Group::cyclic(2);
    GroupRingMatrix m(z2, 1, 1);
    m.at(0, 0) = GroupRingElement::monomial(z2, {0}, 1)
                     .add(GroupRingElement::monomial(z2, {1}, 1));
    return m;
}

}  // namespace

TEST_CASE("regular representation: trace transport and known spectra") {
    const Group z2 = Group::cyclic(2);
    CHECK(fk_det(spectral_density(regular_rep(GroupRingMatrix::identity(z2, 1)))) ==
          doctest::Approx(1.0));

    const GroupRingMatrix a = one_plus_t_z2();
    const SpectralDensity d = spectral_density(regular_rep(a));
    CHECK(fk_det(d) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(betti(d) == doctest::Approx(0.5));

    const Group triv = Group::trivial();
    GroupRingMatrix n5(triv, 1, 1);
    n5.at(0, 0) = GroupRingElement::scalar(triv, 5);
    CHECK(fk_det(spectral_density(regular_rep(n5))) == doctest::Approx(5.0));

    std::mt19937_64 rng(99);
    for (const Group& g : {Group::symmetric(3), Group::quaternion8()}) {
        const GroupRingMatrix m = random_group_ring_matrix(rng, g, 2, 2);
        CHECK(regular_rep(m).trace().real() ==
              doctest::Approx(to_double(m.trace())).epsilon(1e-12));
        CHECK(std::abs(regular_rep(m).trace().imag()) < 1e-12);
    }
}

TEST_CASE("quotient pushforward of t-2: circulant determinants") {
    const GroupRingMatrix a = t_minus_2();
    CHECK(fk_det(spectral_density(quotient_pushforward(a, 1))) == doctest::Approx(1.0));
    // |prod (2 - omega)| over 4th roots = 2^4 - 1 = 15.
    CHECK(fk_det(spectral_density(quotient_pushforward(a, 4))) ==
          doctest::Approx(std::pow(15.0, 0.25)).epsilon(1e-12));
    CHECK(fk_det(quotient_density(a, 4)) ==
          doctest::Approx(std::pow(15.0, 0.25)).epsilon(1e-12));

    const Group z2free = Group::free_abelian(2);
    CHECK(fk_det(spectral_density(quotient_pushforward(
              GroupRingMatrix::identity(z2free, 2), 3))) == doctest::Approx(1.0));
}

TEST_CASE("frequency-wise quotient density matches the circulant model") {
    std::mt19937_64 rng(3131);
    for (int rank : {1, 2}) {
        const Group z = Group::free_abelian(rank);
        const GroupRingMatrix a = random_group_ring_matrix(rng, z, 2, 2);
        const SpectralDensity fast = quotient_density(a, 3);
        const SpectralDensity slow = spectral_density(quotient_pushforward(a, 3));
        CHECK(fast.value(0.0) == doctest::Approx(slow.value(0.0)).epsilon(1e-9));
        CHECK(fast.log_det() == doctest::Approx(slow.log_det()).epsilon(1e-9));
        for (const auto& j : slow.jumps)
            CHECK(fast.value(j.lambda + 1e-9) ==
                  doctest::Approx(slow.value(j.lambda + 1e-9)).epsilon(1e-7));
    }
}

TEST_CASE("Folner box compression of t-2") {
    const GroupRingMatrix a = t_minus_2();
    CHECK(fk_det(spectral_density(folner_compress(a, 1))) == doctest::Approx(2.0));
    // n = 2 gives the bidiagonal [[-2,1],[0,-2]]; |det| = 4, FK det = 2.
    CHECK(fk_det(spectral_density(folner_compress(a, 2))) ==
          doctest::Approx(2.0).epsilon(1e-12));

    const Group z = Group::free_abelian(1);
    CHECK(fk_det(spectral_density(folner_compress(GroupRingMatrix::identity(z, 1), 5))) ==
          doctest::Approx(1.0));

    // Compression norm never exceeds the coefficient bound.
    std::mt19937_64 rng(555);
    for (int n : {1, 2, 3, 5}) {
        const GroupRingMatrix m = random_group_ring_matrix(rng, z, 2, 2);
        CHECK(folner_compress(m, n).operator_norm() <= to_double(m.norm_bound()) + 1e-9);
    }
}

TEST_CASE("finite-kernel transport res_p: trace and determinant scaling") {
    // G = Z/2, K = G, Q trivial, f = (3): trace 3/2, det sqrt(3).
    const Group z2 = Group::cyclic(2);
    const Group triv = Group::trivial();
    GroupRingMatrix f3(triv, 1, 1);
    f3.at(0, 0) = GroupRingElement::scalar(triv, 3);
    const VNMorphism r = res_p(f3, z2, {0, 1}, {0, 0});
    CHECK(r.trace().real() == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(res_p_trace(f3, z2, {0, 1}, {0, 0}) == Rat(3, 2));
    CHECK(fk_det(r) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));

    // K trivial with the identity relabeling: res_p is the regular rep.
    const GroupRingMatrix a = one_plus_t_z2();
    const VNMorphism same = res_p(a, z2, {0}, {0, 1});
    CHECK(same.approx_equal(regular_rep(a), 1e-12));

    // G = Z/4, K = {0,2}, Q = Z/2, f = 1+u: det_Q = sqrt(2), det_G = 2^{1/4}.
    const Group z4 = Group::cyclic(4);
    const QuotientData q = quotient_group(z4, {0, 2});
    GroupRingMatrix fu(q.quotient, 1, 1);
    fu.at(0, 0) = GroupRingElement::scalar(q.quotient, 1)
                      .add(GroupRingElement::monomial(
                          q.quotient, {q.projection[1]}, 1));
    const VNMorphism r4 = res_p(fu, z4, {0, 2}, q.projection);
    CHECK(fk_det(r4) == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-9));
    CHECK(res_p_trace(fu, z4, {0, 2}, q.projection) == fu.trace() / 2);

    // Validation errors: wrong kernel, non-homomorphism.
    CHECK_THROWS_AS(res_p(fu, z4, {0, 1}, q.projection), std::invalid_argument);
    CHECK_THROWS_AS(res_p(fu, z4, {0, 2}, std::vector<int>{0, 0, 1, 1}),
                    std::invalid_argument);
}

TEST_CASE("quotient moments are stationary past the support diameter") {
    const GroupRingMatrix delta = t_minus_2().delta();
    for (int m = 1; m <= 4; ++m) {
        const Rat target = exact_normalized_moment(delta, m);
        for (int n : {2 * m + 1, 2 * m + 2, 2 * m + 7})
            CHECK(exact_quotient_moment(delta, n, m) == target);
    }
    // Below the diameter the wrap-around is visible for this matrix.
    CHECK(exact_quotient_moment(delta, 1, 1) != exact_normalized_moment(delta, 1));
}

TEST_CASE("exact kernel dimensions by rational elimination") {
    CHECK(exact_betti_regular(one_plus_t_z2()) == Rat(1, 2));
    const Group z2 = Group::cyclic(2);
    CHECK(exact_betti_regular(GroupRingMatrix::identity(z2, 3)) == Rat(0));
    CHECK(exact_betti_regular(GroupRingMatrix(z2, 2, 2)) == Rat(2));
    // t - 1 mod n has a one-dimensional kernel (the constant vector).
    const Group z = Group::free_abelian(1);
    GroupRingMatrix tm1(z, 1, 1);
    tm1.at(0, 0) = GroupRingElement::monomial(z, {1}, 1)
                       .add(GroupRingElement::scalar(z, -1));
    CHECK(exact_betti_quotient(tm1, 4) == Rat(1, 4));
}

TEST_CASE("approximation driver: verdicts on identity and t-2") {
    const Group z = Group::free_abelian(1);
    ConvergenceReport rep = run_approximation(GroupRingMatrix::identity(z, 2),
                                              ApproximationScheme::quotient({2, 3, 4, 5}));
    CHECK(rep.norm_bound_ok);
    CHECK(rep.moments_cauchy);
    CHECK(rep.dets_at_least_one);
    CHECK(rep.limiting_betti == doctest::Approx(0.0));
    for (const auto& st : rep.stages) {
        CHECK(st.betti == doctest::Approx(0.0));
        CHECK(st.logdet == doctest::Approx(0.0));
        for (double m : st.moments) CHECK(m == doctest::Approx(1.0));
    }

    std::vector<int> stages;
    for (int n = 2; n <= 2048; n *= 2) stages.push_back(n);
    rep = run_approximation(t_minus_2(), ApproximationScheme::quotient(stages));
    CHECK(rep.norm_bound_ok);
    CHECK(rep.moments_cauchy);
    CHECK(rep.dets_at_least_one);
    // Stage determinants (2^n - 1)^{1/n} increase to the Mahler measure 2.
    const auto& st = rep.stages;
    for (size_t i = 1; i < st.size(); ++i) CHECK(st[i].logdet >= st[i - 1].logdet - 1e-12);
    CHECK(std::exp(st.back().logdet) == doctest::Approx(2.0).epsilon(1e-3));

    CHECK_THROWS_AS(run_approximation(t_minus_2(), ApproximationScheme::regular()),
                    std::invalid_argument);
    CHECK_THROWS_AS(run_approximation(one_plus_t_z2(),
                                      ApproximationScheme::quotient({2})),
                    std::invalid_argument);
}

TEST_CASE("golden ratio limit for t^2 - t - 1") {
    const Group z = Group::free_abelian(1);
    GroupRingMatrix a(z, 1, 1);
    a.at(0, 0) = GroupRingElement::monomial(z, {2}, 1)
                     .add(GroupRingElement::monomial(z, {1}, -1))
                     .add(GroupRingElement::scalar(z, -1));
    const ConvergenceReport rep =
        run_approximation(a, ApproximationScheme::quotient({256, 512, 1024, 2048}));
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    CHECK(std::exp(rep.stages.back().logdet) == doctest::Approx(phi).epsilon(1e-3));
    CHECK(rep.dets_at_least_one);
}
