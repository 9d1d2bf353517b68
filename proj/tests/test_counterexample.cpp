#include "l2inv/counterexample.hpp"

#include <doctest.h>

#include <cmath>

using namespace l2inv;

namespace {

/// The projection onto the second summand, as an exact operator.
TwoCopyOperator projection_pr2(const DyadicModel& model, const Rat& eps2) {
    TwoCopyOperator pr2(model, 1, 2, eps2);
    for (int c = 0; c < model.cell_count(); ++c) pr2.at(c, 0, 1) = QuadExt::rational(1);
    return pr2;
}

}  // namespace

TEST_CASE("two-copy projections are exact idempotents") {
    for (int k : {1, 2, 3}) {
        const Rat eps2 = k == 1 ? Rat(1) : collapse_eps2(k);
        const TwoCopyOperator p = build_pk(k, eps2, k + 2);
        CHECK(p.mul(p).equals(p));
        CHECK(p.adjoint().equals(p));
    }
    CHECK_THROWS_AS(build_pk(3, Rat(1), 2), std::invalid_argument);  // depth too small
}

TEST_CASE("dimension of the image matches the closed form and refines exactly") {
    for (int k = 1; k <= 6; ++k) {
        const Rat formula = Rat(2) - Rat(3) / Rat(Int(1) << k);
        CHECK(dim_ak(k, Rat(1), k + 2) == formula);
        // Refinement exactness: one more dyadic level changes nothing.
        CHECK(dim_ak(k, Rat(1), k + 3) == formula);
    }
    // k = 2 evaluates to 1.25, the value of 2(1-2^{1-k}) + 2^{1-k} - 2^{-k}.
    CHECK(dim_ak(2, Rat(7), 4) == Rat(5, 4));
}

TEST_CASE("determinant of pr2 p_k: closed form and float cross-check") {
    // k = 1, eps = 1: det = 2^{-1/4}.
    const DetPr2Pk d1 = det_pr2_pk(1, Rat(1));
    CHECK(d1.base == Rat(2));
    CHECK(d1.exponent == Rat(-1, 4));
    CHECK(d1.value == doctest::Approx(std::pow(2.0, -0.25)).epsilon(1e-12));

    // eps = 0: the projection is coordinate-aligned and the det is 1.
    const DetPr2Pk d0 = det_pr2_pk(3, Rat(0));
    CHECK(d0.exact);
    CHECK(d0.value_exact == Rat(1));

    // Collapse choice: exact value 1/k.
    for (int k = 2; k <= 6; ++k) {
        const DetPr2Pk d = det_pr2_pk(k, collapse_eps2(k));
        CHECK(d.exact);
        CHECK(d.value_exact == Rat(1, k));
        CHECK(d.value == doctest::Approx(1.0 / k).epsilon(1e-12));
    }

    // Float cross-check against the dyadic model for small eps.
    const DyadicModel model{3};
    const TwoCopyOperator p1 = build_pk(1, Rat(1), 3);
    const VNMorphism m = projection_pr2(model, Rat(1)).mul(p1).to_vn(1.0);
    CHECK(fk_det(m) == doctest::Approx(std::pow(2.0, -0.25)).epsilon(1e-12));
}

TEST_CASE("exact trace arithmetic in the quadratic extension") {
    const DyadicModel model{2};
    TwoCopyOperator a(model, 1, 1, Rat(3));
    a.at(0, 0, 0) = QuadExt::eps();
    const TwoCopyOperator sq = a.mul(a);
    CHECK(sq.at(0, 0, 0).a == Rat(3));  // eps^2 = 3
    CHECK(sq.at(0, 0, 0).b == Rat(0));
    CHECK_THROWS(a.trace());  // irrational diagonal
    CHECK(sq.trace() == Rat(3, 4));    // one cell of weight 1/4 carries 3
}

TEST_CASE("determinant convergence along kernel-containing projections") {
    // f = diag(2, 3, 0) on three cells of weight 1/3 each.
    const FiniteVNModel model{{VNCell{Rat(1, 3), 1}, VNCell{Rat(1, 3), 1},
                               VNCell{Rat(1, 3), 1}}};
    VNMorphism f(model, 1, 1);
    f.block(0)(0, 0) = 2.0;
    f.block(1)(0, 0) = 3.0;
    f.block(2)(0, 0) = 0.0;

    // Exhausting projections that always contain ker(f) = third cell.
    auto proj = [&](bool first, bool second) {
        VNMorphism p = VNMorphism::zero(model, 1, 1);
        p.block(0)(0, 0) = first ? 1.0 : 0.0;
        p.block(1)(0, 0) = second ? 1.0 : 0.0;
        p.block(2)(0, 0) = 1.0;
        return p;
    };
    const Theorem51Report rep = verify_det_along_projections(
        f, {proj(true, false), proj(true, true)});
    CHECK(rep.converged);
    CHECK(rep.det_f == doctest::Approx(std::exp((std::log(2.0) + std::log(3.0)) / 3.0)));
    CHECK(rep.final_error <= 1e-9);
    CHECK(rep.stage_dets.back() == doctest::Approx(rep.det_f));

    // Non-nested sequences are rejected.
    CHECK_THROWS_AS(verify_det_along_projections(f, {proj(true, true), proj(true, false)}),
                    std::invalid_argument);

    // The two-copy projections do NOT contain ker(pr2): negative control.
    const DyadicModel dyadic{4};
    const VNMorphism pr2 = projection_pr2(dyadic, Rat(1)).to_vn(1.0);
    const VNMorphism pk = build_pk(2, Rat(1), 4).to_vn(1.0);
    CHECK_THROWS_AS(verify_det_along_projections(pr2, {pk}), std::invalid_argument);
}
