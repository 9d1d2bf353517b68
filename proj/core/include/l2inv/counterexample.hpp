#pragma once

#include "l2inv/finvn.hpp"
#include "l2inv/rational.hpp"

#include <vector>

namespace l2inv {

/// Element of the quadratic extension Q(eps) with eps^2 = e2 rational:
/// a + b*eps. Enough arithmetic to verify projections exactly.
struct QuadExt {
    Rat a = 0;  // rational part
    Rat b = 0;  // coefficient of eps

    static QuadExt rational(const Rat& r) { return {r, 0}; }
    static QuadExt eps() { return {0, 1}; }

    QuadExt add(const QuadExt& o) const { return {a + o.a, b + o.b}; }
    QuadExt sub(const QuadExt& o) const { return {a - o.a, b - o.b}; }
    QuadExt mul(const QuadExt& o, const Rat& e2) const {
        return {a * o.a + b * o.b * e2, a * o.b + b * o.a};
    }
    bool is_zero() const { return a == 0 && b == 0; }
    bool operator==(const QuadExt& o) const = default;
};

/// Dyadic partition of [0,1] at the given depth: 2^depth cells of equal
/// weight, each of dimension 1.
struct DyadicModel {
    int depth = 0;
    int cell_count() const { return 1 << depth; }
    Rat cell_weight() const { return Rat(1) / Rat(Int(1) << depth); }
    FiniteVNModel vn_model() const;
};

/// Operator between (step-function models of) L^2[0,1] direct sums, with
/// exact entries in Q(eps): one rows x cols matrix of QuadExt per cell.
class TwoCopyOperator {
  public:
    TwoCopyOperator(DyadicModel model, int rows, int cols, Rat eps2);

    const DyadicModel& dyadic() const { return model_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const Rat& eps2() const { return eps2_; }

    QuadExt& at(int cell, int i, int j);
    const QuadExt& at(int cell, int i, int j) const;

    TwoCopyOperator mul(const TwoCopyOperator& other) const;
    TwoCopyOperator adjoint() const;  // entries are real: plain transpose
    bool equals(const TwoCopyOperator& other) const;

    /// Exact weighted trace; throws if any diagonal entry is irrational.
    Rat trace() const;

    /// Floating-point morphism over the dyadic model (eps evaluated
    /// numerically); throws if eps2 is too large for double precision.
    VNMorphism to_vn(double eps_value) const;

  private:
    DyadicModel model_;
    int rows_, cols_;
    Rat eps2_;
    std::vector<QuadExt> entries_;  // cell-major, then row-major
};

/// The projection p_k of the two-copy construction at the given dyadic
/// depth (depth >= k+1): identity on cells of [0, 1-2^{1-k}], the rank-1
/// projection onto (eps, 1)/sqrt(1+eps^2) on cells of [1-2^{1-k}, 1-2^{-k}],
/// zero on cells of [1-2^{-k}, 1]. Verified idempotent and self-adjoint
/// exactly in Q(eps).
TwoCopyOperator build_pk(int k, const Rat& eps2, int depth);

/// Exact von Neumann dimension of im(p_k) (the cellwise trace),
/// with the closed form 2(1-2^{1-k}) + 2^{1-k} - 2^{-k}.
Rat dim_ak(int k, const Rat& eps2, int depth);

/// Determinant of pr2 o p_k: det = (1+eps^2)^{-2^{-k-1}}, reported as the
/// exact pair (base = numerator/denominator of 1+eps^2, exponent) plus a
/// floating evaluation.
struct DetPr2Pk {
    Rat base;         // 1 + eps^2
    Rat exponent;     // -2^{-k-1}
    double log_value; // exponent * ln(base)
    double value;     // exp(log_value)

    /// Exact value of base^(-exponent_denominator-th root) when the root
    /// is an exact integer ratio; nullopt-style: exact == true iff the
    /// root extraction was exact, in which case value_exact holds it.
    bool exact = false;
    Rat value_exact = 0;  // det as an exact rational when representable
};
DetPr2Pk det_pr2_pk(int k, const Rat& eps2);

/// eps_k^2 = k^{2^{k+1}} - 1, the choice making det(pr2 o p_k) = 1/k.
Rat collapse_eps2(int k);

/// Convergence report for det(f p_k) -> det(f) along a nested sequence of
/// projections whose images contain ker(f).
struct Theorem51Report {
    std::vector<double> stage_dets;
    double det_f = 0;
    double final_error = 0;
    bool converged = false;
};

/// Verifies the preconditions (ker f inside im p_k, p_k nested) and the
/// determinant convergence at the final stage. Throws if a kernel vector
/// escapes some p_k or the projections are not nested — feeding the
/// two-copy p_k with pr2 here must trigger that error.
Theorem51Report verify_det_along_projections(const VNMorphism& f,
                                             const std::vector<VNMorphism>& p_seq,
                                             double tol = 1e-6);

}  // namespace l2inv
