#pragma once

#include "l2inv/group.hpp"
#include "l2inv/rational.hpp"

#include <map>

namespace l2inv {

/// Finite formal sum sum_g c_g * g with exact rational coefficients.
/// Zero coefficients are never stored.
class GroupRingElement {
  public:
    using Terms = std::map<GroupElem, Rat>;

    GroupRingElement() = default;
    explicit GroupRingElement(Terms terms);

    static GroupRingElement zero() { return {}; }
    static GroupRingElement scalar(const Group& g, const Rat& c);
    static GroupRingElement monomial(const Group& g, const GroupElem& e, const Rat& c = 1);

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    Rat coeff(const GroupElem& e) const;
    Rat identity_coeff(const Group& g) const { return coeff(g.identity()); }

    GroupRingElement add(const GroupRingElement& other) const;
    GroupRingElement negate() const;
    GroupRingElement mul(const Group& g, const GroupRingElement& other) const;
    GroupRingElement involution(const Group& g) const;

    /// sum_g |c_g|  (the l^1 coefficient norm used by the operator norm bound).
    Rat inf_norm() const;

    /// Largest coordinate magnitude over the support (free abelian groups).
    long long support_radius() const;

  private:
    Terms terms_;
    void insert(const GroupElem& e, const Rat& c);
    friend class GroupRingMatrix;
};

/// Rectangular matrix over a group ring; rows*cols entries, row major.
class GroupRingMatrix {
  public:
    GroupRingMatrix(Group group, int rows, int cols);

    static GroupRingMatrix identity(const Group& g, int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const Group& group() const { return group_; }

    GroupRingElement& at(int i, int j);
    const GroupRingElement& at(int i, int j) const;

    GroupRingMatrix mul(const GroupRingMatrix& other) const;
    GroupRingMatrix add(const GroupRingMatrix& other) const;
    GroupRingMatrix adjoint() const;

    /// Delta = A A*, the positive reduction of Lemma 3.4 style arguments.
    GroupRingMatrix delta() const { return mul(adjoint()); }

    /// d * d' * max_{k,l} ||a_{k,l}||_inf; dominates the operator norm of
    /// right multiplication in every *-representation built here.
    Rat norm_bound() const;

    /// Unnormalized exact trace: sum of identity coefficients on the diagonal.
    Rat trace() const;

    /// Exact power trace of a square matrix: trace(this^m).
    Rat power_trace(int m) const;

    bool is_zero() const;
    bool equals(const GroupRingMatrix& other) const;

    /// Largest support coordinate magnitude over all entries (Z^k only).
    long long support_radius() const;

  private:
    Group group_;
    int rows_, cols_;
    std::vector<GroupRingElement> entries_;
};

inline GroupRingMatrix grmul(const GroupRingMatrix& a, const GroupRingMatrix& b) {
    return a.mul(b);
}
inline GroupRingMatrix adjoint(const GroupRingMatrix& a) { return a.adjoint(); }
inline Rat norm_bound(const GroupRingMatrix& a) { return a.norm_bound(); }
inline GroupRingMatrix positive_reduction(const GroupRingMatrix& b) { return b.delta(); }

}  // namespace l2inv
