#pragma once

#include "l2inv/finvn.hpp"
#include "l2inv/group.hpp"
#include "l2inv/rational.hpp"

#include <map>
#include <utility>
#include <vector>

namespace l2inv {

/// A finite measured equivalence relation: weighted points partitioned
/// into equivalence classes. Weights are positive and sum to 1.
class FiniteRelation {
  public:
    FiniteRelation(std::vector<Rat> weights, std::vector<std::vector<int>> classes);

    int point_count() const { return static_cast<int>(weights_.size()); }
    const Rat& weight(int x) const { return weights_[x]; }
    const std::vector<std::vector<int>>& classes() const { return classes_; }
    int class_of(int x) const { return class_of_[x]; }
    bool related(int x, int y) const { return class_of_[x] == class_of_[y]; }
    Rat total_weight() const;
    bool same_as(const FiniteRelation& other) const;

  private:
    std::vector<Rat> weights_;
    std::vector<std::vector<int>> classes_;
    std::vector<int> class_of_;
};

/// Orbit relation of a finite group action on weighted points.
/// action[g][x] is the image of point x under the element with id g.
FiniteRelation orbit_relation(const Group& g,
                              const std::vector<std::vector<int>>& action,
                              std::vector<Rat> weights);

/// Matrix over the integral groupoid ring of a finite relation: for each
/// pair (x, y) in the same class, an m x n rational block f(x, y).
/// Product: (fg)(x,y) = sum_{z ~ x} f(x,z) g(z,y).
/// Involution: f*(x,y) = f(y,x)^T.  Trace: sum_x mu(x) tr f(x,x).
class GroupoidMatrix {
  public:
    GroupoidMatrix(FiniteRelation relation, int rows, int cols);

    static GroupoidMatrix identity(const FiniteRelation& r, int n);

    const FiniteRelation& relation() const { return relation_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }

    /// Block accessors; (x, y) must lie in one class. Reading an absent
    /// block yields zeros.
    void set(int x, int y, int i, int j, const Rat& value);
    Rat get(int x, int y, int i, int j) const;
    bool has_block(int x, int y) const;

    GroupoidMatrix mul(const GroupoidMatrix& other) const;
    GroupoidMatrix add(const GroupoidMatrix& other) const;
    GroupoidMatrix adjoint() const;
    GroupoidMatrix delta() const { return mul(adjoint()); }

    Rat trace() const;
    Rat power_trace(int m) const;  // trace of the m-th power (square only)
    bool equals(const GroupoidMatrix& other) const;
    bool is_zero() const;

    const std::map<std::pair<int, int>, std::vector<Rat>>& blocks() const {
        return blocks_;
    }

  private:
    FiniteRelation relation_;
    int rows_, cols_;
    // (x, y) -> row-major rows x cols rational block; zero blocks dropped.
    std::map<std::pair<int, int>, std::vector<Rat>> blocks_;
    void prune(const std::pair<int, int>& key);
};

/// Concrete von Neumann model of a groupoid matrix: one cell per class,
/// cell dimension = class size, cell weight = the (uniform) point weight
/// of the class. The model trace matches the groupoid trace exactly.
VNMorphism to_vn_model(const GroupoidMatrix& f);

/// An element of the crossed product L^inf(X, Q) * G for a finite action:
/// finitely many group terms, each a function on the points.
struct CrossedElement {
    // element id -> per-point values r_g(x)
    std::map<int, std::vector<Rat>> terms;
};

/// Embed a matrix over the crossed product into the groupoid ring of the
/// orbit relation: sum r_g . g  |->  f with f(x, g^{-1} x) = r_g(x).
/// The action must be free (no nonidentity element fixes a point).
GroupoidMatrix embed_crossed(const Group& g,
                             const std::vector<std::vector<int>>& action,
                             const std::vector<Rat>& weights, int rows, int cols,
                             const std::vector<CrossedElement>& entries);

/// Compression chi_A f chi_A over the restricted relation, with weights
/// renormalized by 1/mu(A).
struct RestrictedGroupoid {
    GroupoidMatrix matrix;        // over the restricted relation
    Rat mu_a;                     // mass of A before renormalization
    std::vector<int> point_map;   // restricted index -> original index
};
RestrictedGroupoid restrict_relation(const GroupoidMatrix& f,
                                     const std::vector<int>& subset);

/// Fullness of chi_A: true iff A meets every class; the certificate is a
/// list of partial bijections phi_i (within classes) with
/// 1 = sum_i phi_i* chi_A phi_i, built greedily by point order.
struct FullnessCertificate {
    bool full = false;
    std::vector<GroupoidMatrix> phis;
    bool reconstructs_identity = false;  // verified exactly when full
};
FullnessCertificate is_full(const FiniteRelation& r, const std::vector<int>& subset);

/// Transport of a groupoid matrix along a class- and weight-preserving
/// bijection of point sets: g(iso(x), iso(y)) = f(x, y).
GroupoidMatrix transport(const GroupoidMatrix& f, const FiniteRelation& target,
                         const std::vector<int>& iso);

}  // namespace l2inv
