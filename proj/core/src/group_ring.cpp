#include "l2inv/group_ring.hpp"

#include <algorithm>
#include <cstdlib>

namespace l2inv {

GroupRingElement::GroupRingElement(Terms terms) {
    for (auto& [e, c] : terms)
        if (c != 0) terms_.emplace(e, c);
}

GroupRingElement GroupRingElement::scalar(const Group& g, const Rat& c) {
    return monomial(g, g.identity(), c);
}

GroupRingElement GroupRingElement::monomial(const Group& g, const GroupElem& e, const Rat& c) {
    g.check_element(e);
    GroupRingElement r;
    if (c != 0) r.terms_.emplace(e, c);
    return r;
}

Rat GroupRingElement::coeff(const GroupElem& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rat(0) : it->second;
}

void GroupRingElement::insert(const GroupElem& e, const Rat& c) {
    auto [it, fresh] = terms_.try_emplace(e, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

GroupRingElement GroupRingElement::add(const GroupRingElement& other) const {
    GroupRingElement r = *this;
    for (const auto& [e, c] : other.terms_) r.insert(e, c);
    return r;
}

GroupRingElement GroupRingElement::negate() const {
    GroupRingElement r;
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

GroupRingElement GroupRingElement::mul(const Group& g, const GroupRingElement& other) const {
    GroupRingElement r;
    for (const auto& [e1, c1] : terms_)
        for (const auto& [e2, c2] : other.terms_) r.insert(g.mul(e1, e2), c1 * c2);
    return r;
}

GroupRingElement GroupRingElement::involution(const Group& g) const {
    // Coefficients are rational, so conjugation is trivial here.
    GroupRingElement r;
    for (const auto& [e, c] : terms_) r.terms_.emplace(g.inverse(e), c);
    return r;
}

Rat GroupRingElement::inf_norm() const {
    Rat s = 0;
    for (const auto& [e, c] : terms_) s += rat_abs(c);
    return s;
}

long long GroupRingElement::support_radius() const {
    long long r = 0;
    for (const auto& [e, c] : terms_)
        for (long long x : e) r = std::max(r, std::llabs(x));
    return r;
}

GroupRingMatrix::GroupRingMatrix(Group group, int rows, int cols)
    : group_(std::move(group)), rows_(rows), cols_(cols), entries_(rows * cols) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("matrix shape must be positive");
}

GroupRingMatrix GroupRingMatrix::identity(const Group& g, int n) {
    GroupRingMatrix m(g, n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = GroupRingElement::scalar(g, 1);
    return m;
}

GroupRingElement& GroupRingMatrix::at(int i, int j) {
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
        throw std::out_of_range("matrix index");
    return entries_[i * cols_ + j];
}

const GroupRingElement& GroupRingMatrix::at(int i, int j) const {
    return const_cast<GroupRingMatrix*>(this)->at(i, j);
}

GroupRingMatrix GroupRingMatrix::mul(const GroupRingMatrix& other) const {
    if (!group_.same_as(other.group_)) throw std::invalid_argument("group mismatch");
    if (cols_ != other.rows_) throw std::invalid_argument("shape mismatch");
    GroupRingMatrix r(group_, rows_, other.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const auto& a = at(i, k);
            if (a.is_zero()) continue;
            for (int j = 0; j < other.cols_; ++j) {
                const auto& b = other.at(k, j);
                if (b.is_zero()) continue;
                r.at(i, j) = r.at(i, j).add(a.mul(group_, b));
            }
        }
    return r;
}

GroupRingMatrix GroupRingMatrix::add(const GroupRingMatrix& other) const {
    if (!group_.same_as(other.group_)) throw std::invalid_argument("group mismatch");
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw std::invalid_argument("shape mismatch");
    GroupRingMatrix r(group_, rows_, cols_);
    for (int i = 0; i < rows_ * cols_; ++i)
        r.entries_[i] = entries_[i].add(other.entries_[i]);
    return r;
}

GroupRingMatrix GroupRingMatrix::adjoint() const {
    GroupRingMatrix r(group_, cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j).involution(group_);
    return r;
}

Rat GroupRingMatrix::norm_bound() const {
    Rat mx = 0;
    for (const auto& e : entries_) mx = std::max(mx, e.inf_norm());
    return Rat(rows_) * Rat(cols_) * mx;
}

Rat GroupRingMatrix::trace() const {
    if (rows_ != cols_) throw std::invalid_argument("trace of non-square matrix");
    Rat s = 0;
    for (int i = 0; i < rows_; ++i) s += at(i, i).identity_coeff(group_);
    return s;
}

Rat GroupRingMatrix::power_trace(int m) const {
    if (rows_ != cols_) throw std::invalid_argument("power_trace of non-square matrix");
    if (m == 0) return Rat(rows_);
    GroupRingMatrix p = *this;
    for (int i = 1; i < m; ++i) p = p.mul(*this);
    return p.trace();
}

bool GroupRingMatrix::is_zero() const {
    return std::all_of(entries_.begin(), entries_.end(),
                       [](const GroupRingElement& e) { return e.is_zero(); });
}

bool GroupRingMatrix::equals(const GroupRingMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) return false;
    for (int i = 0; i < rows_ * cols_; ++i)
        if (entries_[i].terms() != other.entries_[i].terms()) return false;
    return true;
}

long long GroupRingMatrix::support_radius() const {
    long long r = 0;
    for (const auto& e : entries_) r = std::max(r, e.support_radius());
    return r;
}

}  // namespace l2inv
