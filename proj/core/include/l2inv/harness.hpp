#pragma once

#include "l2inv/approx.hpp"
#include "l2inv/group_ring.hpp"
#include "l2inv/relations.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace l2inv {

/// Catalog of finite groups used by the fuzz suites (orders <= 24).
std::vector<std::pair<std::string, Group>> fuzz_group_catalog();

/// Random integer matrix over a group ring: coefficients in
/// {-max_coeff..max_coeff}, at most max_support terms per entry.
GroupRingMatrix random_group_ring_matrix(std::mt19937_64& rng, const Group& g,
                                         int rows, int cols, int max_coeff = 3,
                                         int max_support = 4,
                                         int max_exponent = 2);

/// Random finite relation with uniform weights and random classes.
FiniteRelation random_relation(std::mt19937_64& rng, int max_points = 8);

/// Random integer groupoid matrix over a relation.
GroupoidMatrix random_groupoid_matrix(std::mt19937_64& rng, const FiniteRelation& r,
                                      int rows, int cols, int max_coeff = 3);

struct FuzzViolation {
    int sample = 0;
    std::string description;
    double value = 0;
};

struct FuzzReport {
    std::uint64_t seed = 0;
    int samples = 0;
    int gram_samples = 0;
    double min_det = 0;
    double min_gram_product = 0;
    std::vector<FuzzViolation> violations;
    bool ok() const { return violations.empty(); }
};

/// Determinant-conjecture fuzzing: seeded integer samples over finite
/// groups (regular representation) and Z^k (quotient stages); every
/// determinant must be >= 1 - 1e-9. Also checks the integer-Gram
/// invariant: the product of positive eigenvalues of an integer PSD Gram
/// matrix is a positive integer, hence >= 1.
FuzzReport detconj_fuzz(std::uint64_t seed, int samples, int gram_samples = 1000);

/// Mahler measure of an integer/rational polynomial c_0 + c_1 t + ... :
/// |lead| * prod of |roots| exceeding 1, roots by companion eigensolve.
double mahler_measure(const std::vector<Rat>& coeffs);

struct MahlerStage {
    int n = 0;
    double det = 0;
};

struct MahlerReport {
    double oracle = 0;
    std::vector<MahlerStage> stages;
    double final_det = 0;
    double error = 0;  // |final_det - oracle|
};

/// Quotient-chain determinants of the polynomial acting on l^2(Z),
/// compared against the root-based Mahler measure.
MahlerReport mahler_report(const std::vector<Rat>& coeffs,
                           const std::vector<int>& stages);

struct TransportReport {
    std::uint64_t seed = 0;
    int samples = 0;
    double max_transport_error = 0;
    double max_restriction_error = 0;
    int certificates_checked = 0;
    std::vector<FuzzViolation> violations;
    bool ok() const { return violations.empty(); }
};

/// Randomized relation suite: transport invariance of trace/moments/
/// determinant, the mu(A)-scaling law of restriction for full corners,
/// and exact reconstruction of 1 from fullness certificates.
TransportReport transport_suite(std::uint64_t seed, int samples);

}  // namespace l2inv
