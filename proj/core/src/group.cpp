#include "l2inv/group.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace l2inv {

void FiniteGroupTable::validate() const {
    const int n = order();
    if (n == 0) throw std::invalid_argument("empty group table");
    if (static_cast<int>(inv.size()) != n || identity < 0 || identity >= n)
        throw std::invalid_argument("inconsistent group table");
    for (const auto& row : mul) {
        if (static_cast<int>(row.size()) != n)
            throw std::invalid_argument("group table not square");
        for (int v : row)
            if (v < 0 || v >= n) throw std::invalid_argument("group table entry out of range");
    }
    for (int a = 0; a < n; ++a) {
        if (mul[identity][a] != a || mul[a][identity] != a)
            throw std::invalid_argument("identity not neutral");
        if (mul[a][inv[a]] != identity || mul[inv[a]][a] != identity)
            throw std::invalid_argument("inverse table inconsistent");
    }
    // Associativity spot check on all triples for small orders, random
    // coverage would do for larger tables; orders here stay <= 24.
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (mul[mul[a][b]][c] != mul[a][mul[b][c]])
                    throw std::invalid_argument("multiplication table not associative");
}

Group Group::finite(FiniteGroupTable table) {
    table.validate();
    Group g;
    g.kind_ = Kind::Finite;
    g.table_ = std::make_shared<FiniteGroupTable>(std::move(table));
    return g;
}

Group Group::free_abelian(int rank) {
    if (rank < 1) throw std::invalid_argument("free abelian rank must be >= 1");
    Group g;
    g.kind_ = Kind::FreeAbelian;
    g.rank_ = rank;
    return g;
}

Group Group::trivial() { return cyclic(1); }

Group Group::cyclic(int n) {
    if (n < 1) throw std::invalid_argument("cyclic order must be >= 1");
    FiniteGroupTable t;
    t.mul.assign(n, std::vector<int>(n));
    t.inv.resize(n);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) t.mul[a][b] = (a + b) % n;
        t.inv[a] = (n - a) % n;
    }
    t.identity = 0;
    return finite(std::move(t));
}

namespace {

Group group_from_elements(int n, const std::function<int(int, int)>& mulf) {
    FiniteGroupTable t;
    t.mul.assign(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) t.mul[a][b] = mulf(a, b);
    // identity
    t.identity = -1;
    for (int e = 0; e < n; ++e) {
        bool ok = true;
        for (int a = 0; a < n && ok; ++a) ok = t.mul[e][a] == a && t.mul[a][e] == a;
        if (ok) { t.identity = e; break; }
    }
    if (t.identity < 0) throw std::invalid_argument("no identity element");
    t.inv.assign(n, -1);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (t.mul[a][b] == t.identity) t.inv[a] = b;
    return Group::finite(std::move(t));
}

}  // namespace

Group Group::dihedral(int n) {
    if (n < 1) throw std::invalid_argument("dihedral parameter must be >= 1");
    // Elements 0..2n-1: id = r^i for id < n, s r^(id-n) otherwise.
    const int m = 2 * n;
    auto mulf = [n](int a, int b) {
        const bool fa = a >= n, fb = b >= n;
        const int ra = fa ? a - n : a, rb = fb ? b - n : b;
        // (s^fa r^ra)(s^fb r^rb) = s^(fa+fb) r^(rb +- ra)
        int r = fb ? (rb - ra % n + n) % n : (ra + rb) % n;
        const bool f = fa != fb;
        return (f ? n : 0) + r;
    };
    return group_from_elements(m, mulf);
}

Group Group::quaternion8() {
    // 0:1 1:-1 2:i 3:-i 4:j 5:-j 6:k 7:-k
    static const int tab[8][8] = {
        {0, 1, 2, 3, 4, 5, 6, 7},
        {1, 0, 3, 2, 5, 4, 7, 6},
        {2, 3, 1, 0, 6, 7, 5, 4},
        {3, 2, 0, 1, 7, 6, 4, 5},
        {4, 5, 7, 6, 1, 0, 2, 3},
        {5, 4, 6, 7, 0, 1, 3, 2},
        {6, 7, 4, 5, 3, 2, 1, 0},
        {7, 6, 5, 4, 2, 3, 0, 1},
    };
    return group_from_elements(8, [](int a, int b) { return tab[a][b]; });
}

Group Group::symmetric(int n) {
    if (n < 1 || n > 5) throw std::invalid_argument("symmetric group supported for n <= 5");
    std::vector<std::vector<int>> perms;
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    do {
        perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    auto mulf = [&perms, n](int a, int b) {
        std::vector<int> c(n);
        for (int i = 0; i < n; ++i) c[i] = perms[a][perms[b][i]];
        auto it = std::find(perms.begin(), perms.end(), c);
        return static_cast<int>(it - perms.begin());
    };
    return group_from_elements(static_cast<int>(perms.size()), mulf);
}

Group Group::direct_product(const Group& a, const Group& b) {
    if (!a.is_finite() || !b.is_finite())
        throw std::invalid_argument("direct_product requires finite groups");
    const int na = a.order(), nb = b.order();
    auto mulf = [&a, &b, nb](int x, int y) {
        const int xa = x / nb, xb = x % nb, ya = y / nb, yb = y % nb;
        return static_cast<int>(a.table().mul[xa][ya]) * nb + b.table().mul[xb][yb];
    };
    return group_from_elements(na * nb, mulf);
}

int Group::order() const {
    if (!is_finite()) throw std::logic_error("order() on infinite group");
    return table_->order();
}

const FiniteGroupTable& Group::table() const {
    if (!is_finite()) throw std::logic_error("table() on infinite group");
    return *table_;
}

GroupElem Group::identity() const {
    if (is_finite()) return {table_->identity};
    return GroupElem(rank_, 0);
}

void Group::check_element(const GroupElem& a) const {
    if (is_finite()) {
        if (a.size() != 1 || a[0] < 0 || a[0] >= order())
            throw std::invalid_argument("element id out of range");
    } else if (static_cast<int>(a.size()) != rank_) {
        throw std::invalid_argument("exponent vector has wrong rank");
    }
}

GroupElem Group::mul(const GroupElem& a, const GroupElem& b) const {
    check_element(a);
    check_element(b);
    if (is_finite()) return {table_->mul[a[0]][b[0]]};
    GroupElem c(rank_);
    for (int i = 0; i < rank_; ++i) c[i] = a[i] + b[i];
    return c;
}

GroupElem Group::inverse(const GroupElem& a) const {
    check_element(a);
    if (is_finite()) return {table_->inv[a[0]]};
    GroupElem c(rank_);
    for (int i = 0; i < rank_; ++i) c[i] = -a[i];
    return c;
}

bool Group::is_identity(const GroupElem& a) const { return a == identity(); }

bool Group::same_as(const Group& other) const {
    if (kind_ != other.kind_) return false;
    if (kind_ == Kind::FreeAbelian) return rank_ == other.rank_;
    return table_ == other.table_ || table_->mul == other.table_->mul;
}

std::vector<GroupElem> Group::elements() const {
    if (!is_finite()) throw std::logic_error("elements() on infinite group");
    std::vector<GroupElem> out;
    out.reserve(order());
    for (int i = 0; i < order(); ++i) out.push_back({i});
    return out;
}

std::string Group::describe() const {
    if (is_finite()) return "finite group of order " + std::to_string(order());
    return "Z^" + std::to_string(rank_);
}

bool is_normal_subgroup(const Group& g, const std::vector<int>& subgroup) {
    if (!g.is_finite()) return false;
    const auto& t = g.table();
    std::set<int> k(subgroup.begin(), subgroup.end());
    if (!k.count(t.identity)) return false;
    for (int a : k)
        for (int b : k)
            if (!k.count(t.mul[a][b])) return false;
    for (int a : k)
        if (!k.count(t.inv[a])) return false;
    for (int x = 0; x < g.order(); ++x)
        for (int a : k)
            if (!k.count(t.mul[t.mul[x][a]][t.inv[x]])) return false;
    return true;
}

QuotientData quotient_group(const Group& g, const std::vector<int>& normal_subgroup) {
    if (!is_normal_subgroup(g, normal_subgroup))
        throw std::invalid_argument("not a normal subgroup");
    const auto& t = g.table();
    const int n = g.order();
    std::set<int> k(normal_subgroup.begin(), normal_subgroup.end());
    std::vector<int> coset(n, -1);
    int next = 0;
    for (int x = 0; x < n; ++x) {
        if (coset[x] >= 0) continue;
        for (int a : k) coset[t.mul[x][a]] = next;
        ++next;
    }
    const int q = next;
    // Pick a representative for each coset to build the quotient table.
    std::vector<int> rep(q, -1);
    for (int x = 0; x < n; ++x)
        if (rep[coset[x]] < 0) rep[coset[x]] = x;
    FiniteGroupTable qt;
    qt.mul.assign(q, std::vector<int>(q));
    qt.inv.resize(q);
    for (int a = 0; a < q; ++a) {
        for (int b = 0; b < q; ++b) qt.mul[a][b] = coset[t.mul[rep[a]][rep[b]]];
        qt.inv[a] = coset[t.inv[rep[a]]];
    }
    qt.identity = coset[t.identity];
    return {Group::finite(std::move(qt)), coset};
}

}  // namespace l2inv
