#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace l2inv {

/// Multiplication table of a finite group over element ids 0..n-1.
struct FiniteGroupTable {
    std::vector<std::vector<int>> mul;
    std::vector<int> inv;
    int identity = 0;

    int order() const { return static_cast<int>(mul.size()); }
    void validate() const;
};

/// A group element. Finite groups use a single id {id}; free abelian
/// groups of rank k use an exponent vector of length k.
using GroupElem = std::vector<long long>;

/// Supported group family: table-driven finite groups and Z^k.
class Group {
  public:
    enum class Kind { Finite, FreeAbelian };

    static Group finite(FiniteGroupTable table);
    static Group free_abelian(int rank);

    // Common finite constructions.
    static Group trivial();
    static Group cyclic(int n);
    static Group dihedral(int n);      // order 2n
    static Group quaternion8();
    static Group symmetric(int n);     // n <= 5
    static Group direct_product(const Group& a, const Group& b);

    Kind kind() const { return kind_; }
    bool is_finite() const { return kind_ == Kind::Finite; }
    int order() const;
    int rank() const { return rank_; }
    const FiniteGroupTable& table() const;

    GroupElem identity() const;
    GroupElem mul(const GroupElem& a, const GroupElem& b) const;
    GroupElem inverse(const GroupElem& a) const;
    bool is_identity(const GroupElem& a) const;
    void check_element(const GroupElem& a) const;

    /// Structural equality (same family and same table / rank).
    bool same_as(const Group& other) const;

    /// All elements of a finite group, as GroupElems.
    std::vector<GroupElem> elements() const;

    std::string describe() const;

  private:
    Group() = default;
    Kind kind_ = Kind::Finite;
    int rank_ = 0;
    std::shared_ptr<const FiniteGroupTable> table_;
};

/// Quotient of a finite group by a normal subgroup: returns the quotient
/// table and the projection map (element id -> quotient id).
struct QuotientData {
    Group quotient;
    std::vector<int> projection;
};
QuotientData quotient_group(const Group& g, const std::vector<int>& normal_subgroup);

/// True iff the given element ids form a normal subgroup of g.
bool is_normal_subgroup(const Group& g, const std::vector<int>& subgroup);

}  // namespace l2inv
