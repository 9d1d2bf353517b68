#pragma once

#include "l2inv/finvn.hpp"

#include <vector>

namespace l2inv {

/// Finite Hilbert chain complex over one FiniteVNModel:
/// degrees 0..N with module multiplicities dims[n] and differentials
/// diff[n]: degree n+1 -> degree n, satisfying c.c = 0.
/// Degrees of multiplicity 0 carry implicit zero differentials.
struct HilbertChainComplex {
    FiniteVNModel model;
    std::vector<int> dims;            // size N+1
    std::vector<VNMorphism> diffs;    // size N; diffs[n]: dims[n+1] -> dims[n]

    int top_degree() const { return static_cast<int>(dims.size()) - 1; }
    void validate(double tol = 1e-10) const;

    /// Laplacian of degree n: c_n* c_n + c_{n+1} c_{n+1}*.
    VNMorphism laplacian(int n) const;
    /// L2-Betti number of degree n (kernel dimension of the Laplacian).
    double betti(int n, const SpectralOptions& opts = {}) const;
};

/// L2-torsion -sum_n (-1)^n ln det(c_n). Throws if some L2-Betti number
/// exceeds the clamp tolerance (reporting the offending degree).
double l2_torsion(const HilbertChainComplex& c, const SpectralOptions& opts = {});

/// Chain map between complexes over the same model.
struct ChainMap {
    HilbertChainComplex source;  // C
    HilbertChainComplex target;  // D
    std::vector<VNMorphism> maps;  // maps[n]: C_n -> D_n, per degree 0..N

    void validate(double tol = 1e-10) const;
};

/// Mapping cone of a chain map: cone_n = C_{n-1} (+) D_n with
/// differential (x, y) |-> (-c(x), d(y) - phi(x)).
HilbertChainComplex mapping_cone(const ChainMap& phi);

/// Torsion via a chain contraction gamma (gamma[n]: C_n -> C_{n+1},
/// c gamma + gamma c = id): returns ln det((c + gamma)_odd) and verifies
/// that (c+gamma)_odd (c+gamma)_even has spectrum {1} (unipotence).
double contraction_torsion(const HilbertChainComplex& c,
                           const std::vector<VNMorphism>& gamma,
                           double tol = 1e-8);

/// Standard contraction of an acyclic complex via Moore-Penrose
/// pseudo-inverses of the differentials.
std::vector<VNMorphism> pseudo_inverse_contraction(const HilbertChainComplex& c);

}  // namespace l2inv
