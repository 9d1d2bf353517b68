#include "l2inv/harness.hpp"
#include "l2inv/json_io.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace l2inv;

TEST_CASE("mahler measure by companion roots") {
    CHECK(mahler_measure({Rat(-2), Rat(1)}) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(mahler_measure({Rat(-1), Rat(-1), Rat(1)}) ==
          doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-12));
    CHECK(mahler_measure({Rat(3)}) == doctest::Approx(3.0));
    CHECK(mahler_measure({Rat(0), Rat(1)}) == doctest::Approx(1.0));  // t
    // Cyclotomic t^2 + t + 1 has measure 1.
    CHECK(mahler_measure({Rat(1), Rat(1), Rat(1)}) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("mahler reports compare quotient chains against root oracles") {
    const MahlerReport r = mahler_report({Rat(-2), Rat(1)}, {16, 64, 256});
    CHECK(r.oracle == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r.error < 1e-2);
    CHECK(r.final_det <= r.oracle + 1e-12);  // (2^n - 1)^{1/n} from below
    CHECK(!mahler_report_to_tsv(r).empty());
}

TEST_CASE("fuzz catalog and sampler shapes") {
    const auto catalog = fuzz_group_catalog();
    CHECK(catalog.size() >= 8);
    for (const auto& [name, g] : catalog) {
        CHECK(!name.empty());
        CHECK(g.is_finite());
        CHECK(g.order() <= 24);
    }
    std::mt19937_64 rng(1);
    const GroupRingMatrix m = random_group_ring_matrix(rng, catalog[2].second, 3, 2);
    CHECK(m.rows() == 3);
    CHECK(m.cols() == 2);
}

TEST_CASE("small determinant-conjecture fuzz and transport runs are clean") {
    const FuzzReport fuzz = detconj_fuzz(42, 40, 60);
    CHECK(fuzz.ok());
    CHECK(fuzz.min_det >= 1.0 - 1e-9);
    CHECK(fuzz.min_gram_product >= 1.0 - 1e-9);

    const TransportReport tr = transport_suite(42, 15);
    CHECK(tr.ok());
    CHECK(tr.certificates_checked >= 15);
    CHECK(tr.max_transport_error <= 1e-9);
    CHECK(tr.max_restriction_error <= 1e-9);
}

TEST_CASE("seeded reports are reproducible byte for byte") {
    const Json a = fuzz_report_to_json(detconj_fuzz(1234, 25, 25));
    const Json b = fuzz_report_to_json(detconj_fuzz(1234, 25, 25));
    CHECK(a.dump() == b.dump());
    const Json c = transport_report_to_json(transport_suite(77, 8));
    const Json d = transport_report_to_json(transport_suite(77, 8));
    CHECK(c.dump() == d.dump());
}

TEST_CASE("matrix JSON round trip for both group families") {
    std::mt19937_64 rng(5);
    for (const Group& g : {Group::dihedral(4), Group::free_abelian(2)}) {
        const GroupRingMatrix m = random_group_ring_matrix(rng, g, 2, 3);
        const GroupRingMatrix back = matrix_from_json(matrix_to_json(m));
        CHECK(back.equals(m));
        CHECK(back.group().same_as(m.group()));
    }
}

TEST_CASE("matrix JSON parser rejects malformed documents") {
    const Group z3 = Group::cyclic(3);
    Json doc = matrix_to_json(GroupRingMatrix::identity(z3, 1));

    Json zero_den = doc;
    zero_den["entries"][0][0][0][0][1] = "0";
    CHECK_THROWS(matrix_from_json(zero_den));

    Json bad_id = doc;
    bad_id["entries"][0][0][0][1] = 7;  // element id out of range for Z/3
    CHECK_THROWS(matrix_from_json(bad_id));

    Json bad_shape = doc;
    bad_shape["rows"] = 2;  // entries grid no longer matches
    CHECK_THROWS(matrix_from_json(bad_shape));
}

TEST_CASE("rational and density serialization") {
    CHECK(rat_from_json(rat_to_json(Rat(-22, 7))) == Rat(-22, 7));
    CHECK_THROWS(rat_from_json(Json::array({"1", "0"})));

    SpectralDensity d;
    d.jumps = {{0.0, 0.5}, {2.0, 0.5}};
    d.total_dim = 1.0;
    const std::string tsv = spectral_density_to_tsv(d);
    CHECK(tsv.find('\t') != std::string::npos);
    const Json j = spectral_density_to_json(d);
    CHECK(j["jumps"].size() == 2);
}
