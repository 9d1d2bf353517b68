#include "l2inv/relations.hpp"

#include "l2inv/harness.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace l2inv;

namespace {

FiniteRelation pair_relation() {
    return FiniteRelation({Rat(1, 2), Rat(1, 2)}, {{0, 1}});
}

}  // namespace

TEST_CASE("relation construction and orbit relations") {
    CHECK_THROWS_AS(FiniteRelation({Rat(1, 2), Rat(1, 2)}, {{0}}), std::invalid_argument);
    CHECK_THROWS_AS(FiniteRelation({Rat(1), Rat(1)}, {{0, 1}}), std::invalid_argument);

    const Group triv = Group::trivial();
    const FiniteRelation singletons =
        orbit_relation(triv, {{0, 1, 2}}, {Rat(1, 3), Rat(1, 3), Rat(1, 3)});
    CHECK(singletons.classes().size() == 3);

    const Group z2 = Group::cyclic(2);
    const FiniteRelation swap2 =
        orbit_relation(z2, {{0, 1}, {1, 0}}, {Rat(1, 2), Rat(1, 2)});
    CHECK(swap2.classes().size() == 1);
    CHECK(swap2.related(0, 1));

    const std::vector<Rat> quarter(4, Rat(1, 4));
    const FiniteRelation dbl =
        orbit_relation(z2, {{0, 1, 2, 3}, {1, 0, 3, 2}}, quarter);
    CHECK(dbl.classes().size() == 2);

    // Non-invariant weights are rejected.
    CHECK_THROWS_AS(orbit_relation(z2, {{0, 1}, {1, 0}}, {Rat(1, 3), Rat(2, 3)}),
                    std::invalid_argument);
}

TEST_CASE("groupoid ring: product, involution, trace") {
    const FiniteRelation r = pair_relation();
    const GroupoidMatrix id = GroupoidMatrix::identity(r, 1);
    CHECK(id.trace() == Rat(1));
    CHECK(fk_det(to_vn_model(id)) == doctest::Approx(1.0));

    GroupoidMatrix two(r, 1, 1);
    two.set(0, 0, 0, 0, 2);
    two.set(1, 1, 0, 0, 2);
    CHECK(fk_det(to_vn_model(two)) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(two.trace() == Rat(2));

    // Off-diagonal partial translation: trace 0, delta diagonal.
    GroupoidMatrix t(r, 1, 1);
    t.set(0, 1, 0, 0, 1);
    t.set(1, 0, 0, 0, 1);
    CHECK(t.trace() == Rat(0));
    CHECK(t.adjoint().equals(t));
    CHECK(t.mul(t).equals(GroupoidMatrix::identity(r, 1)));
}

TEST_CASE("trace property and model agreement on random matrices") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 12; ++trial) {
        const FiniteRelation r = random_relation(rng);
        const GroupoidMatrix f = random_groupoid_matrix(rng, r, 2, 2);
        const GroupoidMatrix g = random_groupoid_matrix(rng, r, 2, 2);
        CHECK(f.mul(g).trace() == g.mul(f).trace());
        CHECK(f.mul(g).mul(f).trace() == f.mul(f.mul(g)).trace());  // associativity
        CHECK(to_vn_model(f).trace().real() ==
              doctest::Approx(to_double(f.trace())).epsilon(1e-12));
        // Moments of the model match exact groupoid power traces.
        const GroupoidMatrix delta = f.delta();
        const VNMorphism vf = to_vn_model(f);
        CHECK(vf.delta_moment(2) ==
              doctest::Approx(to_double(delta.power_trace(2))).epsilon(1e-9));
    }
}

TEST_CASE("crossed product embedding of a Z/2 swap") {
    const Group z2 = Group::cyclic(2);
    const std::vector<std::vector<int>> action{{0, 1}, {1, 0}};
    const std::vector<Rat> w{Rat(1, 2), Rat(1, 2)};

    // 1 . e embeds as the identity.
    CrossedElement unit;
    unit.terms[0] = {Rat(1), Rat(1)};
    const GroupoidMatrix gu = embed_crossed(z2, action, w, 1, 1, {unit});
    CHECK(gu.equals(GroupoidMatrix::identity(orbit_relation(z2, action, w), 1)));

    // 1 . t has zero diagonal and trace 0.
    CrossedElement t;
    t.terms[1] = {Rat(1), Rat(1)};
    const GroupoidMatrix gt = embed_crossed(z2, action, w, 1, 1, {t});
    CHECK(gt.trace() == Rat(0));
    CHECK(gt.get(0, 1, 0, 0) == Rat(1));
    CHECK(gt.get(1, 0, 0, 0) == Rat(1));
    CHECK(gt.get(0, 0, 0, 0) == Rat(0));

    // chi_{a} . e is the diagonal (1, 0) with trace 1/2.
    CrossedElement chi;
    chi.terms[0] = {Rat(1), Rat(0)};
    const GroupoidMatrix gchi = embed_crossed(z2, action, w, 1, 1, {chi});
    CHECK(gchi.trace() == Rat(1, 2));
    CHECK(gchi.get(0, 0, 0, 0) == Rat(1));
    CHECK(gchi.get(1, 1, 0, 0) == Rat(0));

    // The embedding is multiplicative and *-preserving on these generators.
    CrossedElement tchi;  // (1.t)(chi.e) = (chi o t^{-1}) . t
    tchi.terms[1] = {Rat(0), Rat(1)};
    const GroupoidMatrix prod = embed_crossed(z2, action, w, 1, 1, {tchi});
    CHECK(gt.mul(gchi).equals(prod));
    CHECK(gt.adjoint().equals(gt));

    // Non-free actions are rejected.
    CHECK_THROWS_AS(embed_crossed(z2, {{0, 1}, {0, 1}}, w, 1, 1, {unit}),
                    std::invalid_argument);
}

TEST_CASE("restriction renormalizes weights and slices blocks") {
    const FiniteRelation r = pair_relation();
    GroupoidMatrix f(r, 1, 1);
    f.set(0, 0, 0, 0, 2);
    f.set(0, 1, 0, 0, 1);
    f.set(1, 0, 0, 0, 1);
    f.set(1, 1, 0, 0, 3);

    const RestrictedGroupoid all = restrict_relation(f, {0, 1});
    CHECK(all.mu_a == Rat(1));
    CHECK(all.matrix.equals(f));

    const RestrictedGroupoid corner = restrict_relation(f, {0});
    CHECK(corner.mu_a == Rat(1, 2));
    CHECK(corner.matrix.relation().weight(0) == Rat(1));
    CHECK(corner.matrix.get(0, 0, 0, 0) == Rat(2));
    CHECK(corner.matrix.relation().point_count() == 1);

    CHECK_THROWS_AS(restrict_relation(f, {}), std::invalid_argument);
}

TEST_CASE("determinant restriction law for full corners") {
    const FiniteRelation r = pair_relation();
    GroupoidMatrix f(r, 1, 1);
    f.set(0, 0, 0, 0, 2);
    f.set(0, 1, 0, 0, 1);
    f.set(1, 0, 0, 0, 1);
    f.set(1, 1, 0, 0, 3);
    // Corner-supported g = chi_A f chi_A viewed over the full relation.
    GroupoidMatrix g(r, 1, 1);
    g.set(0, 0, 0, 0, 2);

    const RestrictedGroupoid corner = restrict_relation(f, {0});
    const double lhs = log_fk_det(to_vn_model(g));
    const double rhs = log_fk_det(to_vn_model(corner.matrix));
    CHECK(lhs == doctest::Approx(to_double(corner.mu_a) * rhs).epsilon(1e-12));
}

TEST_CASE("fullness certificates reconstruct the identity") {
    const FiniteRelation r = pair_relation();

    const FullnessCertificate whole = is_full(r, {0, 1});
    CHECK(whole.full);
    CHECK(whole.reconstructs_identity);

    const FullnessCertificate half = is_full(r, {0});
    CHECK(half.full);
    CHECK(half.reconstructs_identity);
    CHECK(half.phis.size() == 2);
    // Verify sum phi_i* chi_A phi_i = 1 by direct evaluation.
    GroupoidMatrix chi(r, 1, 1);
    chi.set(0, 0, 0, 0, 1);
    GroupoidMatrix sum(r, 1, 1);
    for (const GroupoidMatrix& phi : half.phis)
        sum = sum.add(phi.adjoint().mul(chi).mul(phi));
    CHECK(sum.equals(GroupoidMatrix::identity(r, 1)));

    const FiniteRelation two_classes(
        {Rat(1, 2), Rat(1, 2)}, {{0}, {1}});
    CHECK(!is_full(two_classes, {0}).full);
}

TEST_CASE("transport along relation isomorphisms preserves invariants") {
    std::mt19937_64 rng(515);
    const FiniteRelation r({Rat(1, 4), Rat(1, 4), Rat(1, 4), Rat(1, 4)},
                           {{0, 1}, {2, 3}});
    const GroupoidMatrix f = random_groupoid_matrix(rng, r, 2, 2);

    // Relabeling within a class: permutation similarity.
    const GroupoidMatrix g = transport(f, r, {1, 0, 2, 3});
    CHECK(g.trace() == f.trace());
    CHECK(g.delta().power_trace(3) == f.delta().power_trace(3));
    CHECK(fk_det(to_vn_model(g)) == doctest::Approx(fk_det(to_vn_model(f))).epsilon(1e-9));

    // Swapping the two isomorphic classes.
    const GroupoidMatrix h = transport(f, r, {2, 3, 0, 1});
    CHECK(h.trace() == f.trace());
    CHECK(h.delta().power_trace(4) == f.delta().power_trace(4));

    // A class-breaking map is rejected.
    CHECK_THROWS_AS(transport(f, r, {0, 2, 1, 3}), std::invalid_argument);
}
