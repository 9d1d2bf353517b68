#pragma once

#include "l2inv/finvn.hpp"
#include "l2inv/group_ring.hpp"

namespace l2inv {

/// Finite-dimensional approximation scheme for a group-ring matrix.
struct ApproximationScheme {
    enum class Kind { RegularRep, QuotientChain, FolnerBoxes };
    Kind kind = Kind::RegularRep;
    std::vector<int> stages;  // moduli / box sides (unused for RegularRep)

    static ApproximationScheme regular() { return {Kind::RegularRep, {}}; }
    static ApproximationScheme quotient(std::vector<int> ns) {
        return {Kind::QuotientChain, std::move(ns)};
    }
    static ApproximationScheme folner(std::vector<int> ns) {
        return {Kind::FolnerBoxes, std::move(ns)};
    }
};

/// Regular representation of a matrix over a finite group: single cell of
/// weight 1/|G| and dimension |G|; entries become right-multiplication
/// matrices, so the model trace equals the identity-coefficient trace.
VNMorphism regular_rep(const GroupRingMatrix& a);

/// Push a matrix over Z^k to the group ring of (Z/n)^k (exponents mod n);
/// the representation is the regular representation of the quotient.
VNMorphism quotient_pushforward(const GroupRingMatrix& a, int n);

/// Exact normalized moment tr(Delta_n^m)/d of the stage matrix of
/// quotient_pushforward, computed in exact group-ring arithmetic with
/// exponents reduced mod n.
Rat exact_quotient_moment(const GroupRingMatrix& delta, int n, int m);

/// Spectral density of quotient_pushforward(a, n) computed frequency by
/// frequency (the circulant blocks diagonalize over n-th roots of unity);
/// same jump multiset, much faster for large n.
SpectralDensity quotient_density(const GroupRingMatrix& a, int n,
                                 const SpectralOptions& opts = {});

/// Toeplitz-type compression of a Z^k matrix onto the box [0,n)^k:
/// plain cut-off p_n A p_n assembled blockwise.
VNMorphism folner_compress(const GroupRingMatrix& a, int n);

/// Transport of a matrix over a finite quotient Q = G/K to the
/// von Neumann model of G: lifts via s(u) = sum_g lambda_{p(g)} g scaled
/// by 1/|K| and compresses to the K-fixed subspace, so that traces scale
/// by 1/|K| and determinants by the exponent 1/|K|.
///   projection: element id of G -> element id of Q, a surjective
///   homomorphism with kernel K.
VNMorphism res_p(const GroupRingMatrix& f_over_q, const Group& g,
                 const std::vector<int>& kernel, const std::vector<int>& projection);

/// Exact rational trace of res_p(f): the compressed-model trace computed
/// entirely in rational arithmetic; equals trace(f)/|K| by construction.
Rat res_p_trace(const GroupRingMatrix& f_over_q, const Group& g,
                const std::vector<int>& kernel, const std::vector<int>& projection);

struct ConvergenceStage {
    int index = 0;
    int stage_param = 0;        // modulus / box side (0 for RegularRep)
    long long model_dim = 0;    // d_i
    std::vector<double> moments;        // tr(Delta_i^m)/d_i, m=1..M
    std::vector<Rat> exact_moments;     // exact (when computed)
    double betti = 0;
    double logdet = 0;
    double spectral_radius = 0;
};

struct ConvergenceReport {
    std::vector<ConvergenceStage> stages;
    std::vector<Rat> target_moments;  // exact tr(Delta^m)/d of the input matrix
    Rat norm_bound_k = 0;             // Lemma-3.2 style bound on ||r_Delta||
    bool norm_bound_ok = false;
    bool moments_cauchy = false;
    bool dets_at_least_one = false;
    double limiting_betti = 0;
    double liminf_logdet = 0;
};

struct ApproximationOptions {
    int max_moment = 4;
    int exact_moment_limit = 6;       // exact group-ring moments up to here
    double cauchy_tol = 1e-6;         // successive-difference threshold
    int cauchy_run = 3;               // consecutive stages required
    SpectralOptions spectral;
};

/// Approximation-lemma verification driver: runs the scheme stages,
/// records moments (exact and floating), betti and logdet per stage, and
/// checks the lemma's three conditions.
ConvergenceReport run_approximation(const GroupRingMatrix& a,
                                    const ApproximationScheme& scheme,
                                    const ApproximationOptions& opts = {});

/// Exact normalized moment tr(Delta^m)/d of a group-ring matrix.
Rat exact_normalized_moment(const GroupRingMatrix& delta, int m);

/// Exact kernel dimension of the regular representation (or quotient stage)
/// of a group-ring matrix, by rational Gaussian elimination; returned as
/// the normalized von Neumann dimension.
Rat exact_betti_regular(const GroupRingMatrix& a);
Rat exact_betti_quotient(const GroupRingMatrix& a, int n);

}  // namespace l2inv
