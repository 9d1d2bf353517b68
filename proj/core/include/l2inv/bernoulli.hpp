#pragma once

#include "l2inv/finvn.hpp"
#include "l2inv/group.hpp"
#include "l2inv/rational.hpp"

#include <map>
#include <vector>

namespace l2inv {

/// Finite alphabet with rational probability weights (summing to 1).
struct Alphabet {
    std::vector<Rat> weights;
    int size() const { return static_cast<int>(weights.size()); }
    void validate() const;
    bool same_as(const Alphabet& other) const { return weights == other.weights; }
};

/// Function on a shift space A^{Z^k} depending on finitely many
/// coordinates: a dense table over A^S for a finite support S.
class CylinderFunction {
  public:
    CylinderFunction(Alphabet a, int rank, std::vector<GroupElem> support,
                     std::vector<Rat> table);

    static CylinderFunction constant(const Alphabet& a, int rank, const Rat& value);
    /// Indicator of {x : x_coord = letter}.
    static CylinderFunction letter_at(const Alphabet& a, int rank,
                                      const GroupElem& coord, int letter);
    /// Indicator of {x : x_c1 = x_c2}.
    static CylinderFunction coords_equal(const Alphabet& a, int rank,
                                         const GroupElem& c1, const GroupElem& c2);

    const Alphabet& alphabet() const { return alphabet_; }
    int rank() const { return rank_; }
    const std::vector<GroupElem>& support() const { return support_; }
    const std::vector<Rat>& table() const { return table_; }

    /// Value on a configuration given by its restriction to the support.
    Rat value(const std::vector<int>& letters) const;

    CylinderFunction add(const CylinderFunction& other) const;
    CylinderFunction mul(const CylinderFunction& other) const;
    CylinderFunction scale(const Rat& c) const;
    /// f o m_g: shifts the support by -g (the value at x reads x_{s-g}).
    CylinderFunction shift(const GroupElem& g) const;

    /// Exact integral over the product measure.
    Rat integral() const;
    /// Exact L1 and Linf norms (by summation over A^S).
    Rat l1_norm() const;
    Rat linf_norm() const;

    /// Minimal support F(f): drops coordinates the value does not depend on.
    CylinderFunction minimal() const;

    bool is_zero() const;
    bool equals(const CylinderFunction& other) const;

  private:
    Alphabet alphabet_;
    int rank_;
    std::vector<GroupElem> support_;  // sorted, distinct coordinates in Z^k
    std::vector<Rat> table_;          // size |A|^|S|, mixed-radix over support order
    /// Expand both operands to a common support before a pointwise op.
    static std::pair<CylinderFunction, CylinderFunction> align(
        const CylinderFunction& a, const CylinderFunction& b);
};

/// Matrix over the crossed product R * Z^k of the cylinder ring with the
/// shift action: entries are finite sums  sum_g f_g . g.
class CrossedCylinderMatrix {
  public:
    using Entry = std::map<GroupElem, CylinderFunction>;

    CrossedCylinderMatrix(Alphabet a, int rank, int rows, int cols);

    static CrossedCylinderMatrix identity(const Alphabet& a, int rank, int n);

    const Alphabet& alphabet() const { return alphabet_; }
    int rank() const { return rank_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Entry& at(int i, int j);
    const Entry& at(int i, int j) const;
    void add_term(int i, int j, const GroupElem& g, const CylinderFunction& f);

    /// Crossed-product multiplication: (f.g)(f'.g') = f (f' o m_{g^-1}) . gg'.
    CrossedCylinderMatrix mul(const CrossedCylinderMatrix& other) const;
    CrossedCylinderMatrix add(const CrossedCylinderMatrix& other) const;
    /// (f.g)* = (f o m_g) . g^{-1}.
    CrossedCylinderMatrix adjoint() const;
    CrossedCylinderMatrix delta() const { return mul(adjoint()); }

    /// Trace: integral of the coefficient of the identity group element.
    Rat trace() const;

  private:
    Alphabet alphabet_;
    int rank_;
    int rows_, cols_;
    std::vector<Entry> entries_;
};

/// Pushforward of a crossed matrix along Z^k -> (Z/n)^k: a concrete
/// morphism on the model of L^inf(A^{G_n}) x| G_n, with one cell per
/// configuration y in A^{G_n} (weight mu(y)/|G_n|, dimension |G_n|).
/// Throws if |A|^{|G_n|} * |G_n| exceeds the cap.
VNMorphism bernoulli_pushforward(const CrossedCylinderMatrix& m, int n,
                                 long long cap = 4096);

/// The model backing bernoulli_pushforward (for building comparisons).
FiniteVNModel bernoulli_model(const Alphabet& a, int rank, int n);

/// Both sides of the trace identity for a cylinder function under the
/// quotient Z^k -> (Z/n)^k, plus whether the quotient is injective on the
/// minimal support (in which case the two sides agree exactly).
struct TraceCheck {
    Rat lhs;  // integral of f o alpha over A^{G_n}
    Rat rhs;  // integral of f over A^{Z^k}
    bool injective = false;
};
TraceCheck trace_injectivity_check(const CylinderFunction& f, int n);

/// Validation of a user-supplied step-function refinement of a bounded
/// function: checks the sup-norm bound and the declared L1 deviations.
struct StepApproximation {
    std::vector<CylinderFunction> steps;
    Rat linf_bound;                 // declared bound on the limit function
    std::vector<Rat> l1_deviations; // declared ||f - f^{(n)}||_1 budgets
};
/// Returns the exact pairwise L1 distances ||f^{(n)} - f^{(n+1)}||_1 and
/// throws if a step exceeds the sup-norm bound or a declared deviation
/// budget is inconsistent (|deviation_n - deviation_{n+1}| must dominate
/// no more than the pairwise distance allows by triangle inequality).
std::vector<Rat> validate_step_approximation(const StepApproximation& s);

}  // namespace l2inv
