#include "l2inv/bernoulli.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace l2inv {

namespace {

long long ipow(long long b, long long e) {
    long long r = 1;
    while (e-- > 0) r *= b;
    return r;
}

// Mixed-radix index of a letters vector (letters[0] most significant).
long long letters_index(const std::vector<int>& letters, int base) {
    long long idx = 0;
    for (int l : letters) idx = idx * base + l;
    return idx;
}

void index_letters(long long idx, int base, std::vector<int>& letters) {
    for (int i = static_cast<int>(letters.size()) - 1; i >= 0; --i) {
        letters[i] = static_cast<int>(idx % base);
        idx /= base;
    }
}

}  // namespace

void Alphabet::validate() const {
    if (weights.empty()) throw std::invalid_argument("empty alphabet");
    Rat s = 0;
    for (const Rat& w : weights) {
        if (w <= 0) throw std::invalid_argument("alphabet weights must be positive");
        s += w;
    }
    if (s != 1) throw std::invalid_argument("alphabet weights must sum to 1");
}

CylinderFunction::CylinderFunction(Alphabet a, int rank,
                                   std::vector<GroupElem> support,
                                   std::vector<Rat> table)
    : alphabet_(std::move(a)), rank_(rank), support_(std::move(support)),
      table_(std::move(table)) {
    alphabet_.validate();
    if (rank_ < 1) throw std::invalid_argument("rank must be >= 1");
    for (const auto& s : support_)
        if (static_cast<int>(s.size()) != rank_)
            throw std::invalid_argument("support coordinate of wrong rank");
    if (!std::is_sorted(support_.begin(), support_.end()))
        throw std::invalid_argument("support must be sorted");
    if (std::adjacent_find(support_.begin(), support_.end()) != support_.end())
        throw std::invalid_argument("support coordinates must be distinct");
    if (static_cast<long long>(table_.size()) !=
        ipow(alphabet_.size(), static_cast<long long>(support_.size())))
        throw std::invalid_argument("table has wrong size");
}

CylinderFunction CylinderFunction::constant(const Alphabet& a, int rank,
                                            const Rat& value) {
    return CylinderFunction(a, rank, {}, {value});
}

CylinderFunction CylinderFunction::letter_at(const Alphabet& a, int rank,
                                             const GroupElem& coord, int letter) {
    std::vector<Rat> table(a.size(), 0);
    table[letter] = 1;
    return CylinderFunction(a, rank, {coord}, std::move(table));
}

CylinderFunction CylinderFunction::coords_equal(const Alphabet& a, int rank,
                                                const GroupElem& c1,
                                                const GroupElem& c2) {
    if (c1 == c2) return constant(a, rank, 1);
    std::vector<GroupElem> support{c1, c2};
    std::sort(support.begin(), support.end());
    std::vector<Rat> table(static_cast<size_t>(a.size()) * a.size(), 0);
    for (int l = 0; l < a.size(); ++l) table[static_cast<size_t>(l) * a.size() + l] = 1;
    return CylinderFunction(a, rank, std::move(support), std::move(table));
}

Rat CylinderFunction::value(const std::vector<int>& letters) const {
    if (letters.size() != support_.size())
        throw std::invalid_argument("letters must match the support");
    return table_[letters_index(letters, alphabet_.size())];
}

std::pair<CylinderFunction, CylinderFunction> CylinderFunction::align(
    const CylinderFunction& a, const CylinderFunction& b) {
    if (!a.alphabet_.same_as(b.alphabet_) || a.rank_ != b.rank_)
        throw std::invalid_argument("alphabet/rank mismatch");
    std::vector<GroupElem> u;
    std::set_union(a.support_.begin(), a.support_.end(), b.support_.begin(),
                   b.support_.end(), std::back_inserter(u));
    auto expand = [&](const CylinderFunction& f) {
        std::vector<int> pos;  // position of each f-coordinate in the union
        for (const auto& s : f.support_)
            pos.push_back(static_cast<int>(
                std::lower_bound(u.begin(), u.end(), s) - u.begin()));
        const long long total = ipow(f.alphabet_.size(), static_cast<long long>(u.size()));
        std::vector<Rat> table(total);
        std::vector<int> letters(u.size()), sub(f.support_.size());
        for (long long idx = 0; idx < total; ++idx) {
            index_letters(idx, f.alphabet_.size(), letters);
            for (size_t i = 0; i < pos.size(); ++i) sub[i] = letters[pos[i]];
            table[idx] = f.table_[letters_index(sub, f.alphabet_.size())];
        }
        return CylinderFunction(f.alphabet_, f.rank_, u, std::move(table));
    };
    return {expand(a), expand(b)};
}

CylinderFunction CylinderFunction::add(const CylinderFunction& other) const {
    auto [a, b] = align(*this, other);
    for (size_t i = 0; i < a.table_.size(); ++i) a.table_[i] += b.table_[i];
    return a;
}

CylinderFunction CylinderFunction::mul(const CylinderFunction& other) const {
    auto [a, b] = align(*this, other);
    for (size_t i = 0; i < a.table_.size(); ++i) a.table_[i] *= b.table_[i];
    return a;
}

CylinderFunction CylinderFunction::scale(const Rat& c) const {
    CylinderFunction r = *this;
    for (Rat& v : r.table_) v *= c;
    return r;
}

CylinderFunction CylinderFunction::shift(const GroupElem& g) const {
    if (static_cast<int>(g.size()) != rank_)
        throw std::invalid_argument("shift vector of wrong rank");
    CylinderFunction r = *this;
    for (auto& s : r.support_)
        for (int i = 0; i < rank_; ++i) s[i] += g[i];
    // Componentwise translation preserves lexicographic order.
    return r;
}

Rat CylinderFunction::integral() const {
    Rat total = 0;
    std::vector<int> letters(support_.size());
    for (long long idx = 0; idx < static_cast<long long>(table_.size()); ++idx) {
        if (table_[idx] == 0) continue;
        index_letters(idx, alphabet_.size(), letters);
        Rat w = 1;
        for (int l : letters) w *= alphabet_.weights[l];
        total += table_[idx] * w;
    }
    return total;
}

Rat CylinderFunction::l1_norm() const {
    Rat total = 0;
    std::vector<int> letters(support_.size());
    for (long long idx = 0; idx < static_cast<long long>(table_.size()); ++idx) {
        if (table_[idx] == 0) continue;
        index_letters(idx, alphabet_.size(), letters);
        Rat w = 1;
        for (int l : letters) w *= alphabet_.weights[l];
        total += rat_abs(table_[idx]) * w;
    }
    return total;
}

Rat CylinderFunction::linf_norm() const {
    Rat mx = 0;
    for (const Rat& v : table_) mx = std::max(mx, rat_abs(v));
    return mx;
}

CylinderFunction CylinderFunction::minimal() const {
    CylinderFunction f = *this;
    bool shrunk = true;
    while (shrunk && !f.support_.empty()) {
        shrunk = false;
        const int base = f.alphabet_.size();
        for (size_t drop = 0; drop < f.support_.size(); ++drop) {
            // Redundant iff the value never depends on coordinate `drop`.
            bool redundant = true;
            std::vector<int> letters(f.support_.size());
            for (long long idx = 0;
                 redundant && idx < static_cast<long long>(f.table_.size()); ++idx) {
                index_letters(idx, base, letters);
                if (letters[drop] != 0) continue;
                const Rat& v0 = f.table_[idx];
                for (int l = 1; l < base; ++l) {
                    letters[drop] = l;
                    if (f.table_[letters_index(letters, base)] != v0) {
                        redundant = false;
                        break;
                    }
                }
                letters[drop] = 0;
            }
            if (!redundant) continue;
            std::vector<GroupElem> support;
            for (size_t i = 0; i < f.support_.size(); ++i)
                if (i != drop) support.push_back(f.support_[i]);
            const long long total =
                ipow(base, static_cast<long long>(support.size()));
            std::vector<Rat> table(total);
            std::vector<int> sub(support.size()), full(f.support_.size(), 0);
            for (long long idx = 0; idx < total; ++idx) {
                index_letters(idx, base, sub);
                for (size_t i = 0, j = 0; i < f.support_.size(); ++i)
                    full[i] = (i == drop) ? 0 : sub[j++];
                table[idx] = f.table_[letters_index(full, base)];
            }
            f = CylinderFunction(f.alphabet_, f.rank_, std::move(support),
                                 std::move(table));
            shrunk = true;
            break;
        }
    }
    return f;
}

bool CylinderFunction::is_zero() const {
    for (const Rat& v : table_)
        if (v != 0) return false;
    return true;
}

bool CylinderFunction::equals(const CylinderFunction& other) const {
    auto [a, b] = align(*this, other);
    return a.table_ == b.table_;
}

CrossedCylinderMatrix::CrossedCylinderMatrix(Alphabet a, int rank, int rows, int cols)
    : alphabet_(std::move(a)), rank_(rank), rows_(rows), cols_(cols),
      entries_(static_cast<size_t>(rows) * cols) {
    alphabet_.validate();
    if (rows < 1 || cols < 1 || rank < 1) throw std::invalid_argument("bad shape");
}

CrossedCylinderMatrix CrossedCylinderMatrix::identity(const Alphabet& a, int rank,
                                                      int n) {
    CrossedCylinderMatrix m(a, rank, n, n);
    const GroupElem e(rank, 0);
    for (int i = 0; i < n; ++i)
        m.add_term(i, i, e, CylinderFunction::constant(a, rank, 1));
    return m;
}

CrossedCylinderMatrix::Entry& CrossedCylinderMatrix::at(int i, int j) {
    return entries_[static_cast<size_t>(i) * cols_ + j];
}
const CrossedCylinderMatrix::Entry& CrossedCylinderMatrix::at(int i, int j) const {
    return entries_[static_cast<size_t>(i) * cols_ + j];
}

void CrossedCylinderMatrix::add_term(int i, int j, const GroupElem& g,
                                     const CylinderFunction& f) {
    if (static_cast<int>(g.size()) != rank_)
        throw std::invalid_argument("group element of wrong rank");
    auto& entry = at(i, j);
    auto it = entry.find(g);
    if (it == entry.end()) {
        if (!f.is_zero()) entry.emplace(g, f);
    } else {
        it->second = it->second.add(f);
        if (it->second.is_zero()) entry.erase(it);
    }
}

CrossedCylinderMatrix CrossedCylinderMatrix::mul(const CrossedCylinderMatrix& other) const {
    if (cols_ != other.rows_ || rank_ != other.rank_ ||
        !alphabet_.same_as(other.alphabet_))
        throw std::invalid_argument("shape/ring mismatch");
    CrossedCylinderMatrix out(alphabet_, rank_, rows_, other.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int t = 0; t < cols_; ++t)
            for (const auto& [g, f] : at(i, t))
                for (int j = 0; j < other.cols_; ++j)
                    for (const auto& [g2, f2] : other.at(t, j)) {
                        GroupElem sum(rank_);
                        for (int q = 0; q < rank_; ++q) sum[q] = g[q] + g2[q];
                        // (f.g)(f2.g2) = f * (f2 o m_{g^-1}) . (g+g2);
                        // f2 o m_{g^-1} shifts the support of f2 by +g.
                        out.add_term(i, j, sum, f.mul(f2.shift(g)));
                    }
    return out;
}

CrossedCylinderMatrix CrossedCylinderMatrix::add(const CrossedCylinderMatrix& other) const {
    if (cols_ != other.cols_ || rows_ != other.rows_ || rank_ != other.rank_ ||
        !alphabet_.same_as(other.alphabet_))
        throw std::invalid_argument("shape/ring mismatch");
    CrossedCylinderMatrix out = *this;
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            for (const auto& [g, f] : other.at(i, j)) out.add_term(i, j, g, f);
    return out;
}

CrossedCylinderMatrix CrossedCylinderMatrix::adjoint() const {
    CrossedCylinderMatrix out(alphabet_, rank_, cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            for (const auto& [g, f] : at(i, j)) {
                GroupElem ginv(rank_);
                for (int q = 0; q < rank_; ++q) ginv[q] = -g[q];
                // (f.g)* = (f o m_g) . g^{-1}; f o m_g shifts support by -g.
                out.add_term(j, i, ginv, f.shift(ginv));
            }
    return out;
}

Rat CrossedCylinderMatrix::trace() const {
    if (rows_ != cols_) throw std::invalid_argument("trace of non-square matrix");
    Rat s = 0;
    const GroupElem e(rank_, 0);
    for (int i = 0; i < rows_; ++i) {
        auto it = at(i, i).find(e);
        if (it != at(i, i).end()) s += it->second.integral();
    }
    return s;
}

FiniteVNModel bernoulli_model(const Alphabet& a, int rank, int n) {
    a.validate();
    const long long gsize = ipow(n, rank);
    const long long points = ipow(a.size(), gsize);
    FiniteVNModel model;
    std::vector<int> letters(gsize);
    for (long long y = 0; y < points; ++y) {
        index_letters(y, a.size(), letters);
        Rat mu = 1;
        for (int l : letters) mu *= a.weights[l];
        model.cells.push_back({mu / Rat(Int(gsize)), static_cast<int>(gsize)});
    }
    return model;
}

VNMorphism bernoulli_pushforward(const CrossedCylinderMatrix& m, int n, long long cap) {
    const int k = m.rank();
    const long long gsize = ipow(n, k);
    const long long points = ipow(m.alphabet().size(), gsize);
    if (points * gsize > cap)
        throw std::invalid_argument("pushforward model exceeds the size cap");

    const FiniteVNModel model = bernoulli_model(m.alphabet(), k, n);
    VNMorphism out(model, m.rows(), m.cols());

    // Group elements of (Z/n)^k in mixed-radix order.
    std::vector<std::vector<int>> elems(gsize, std::vector<int>(k));
    for (long long h = 0; h < gsize; ++h) {
        long long t = h;
        for (int i = k - 1; i >= 0; --i) {
            elems[h][i] = static_cast<int>(t % n);
            t /= n;
        }
    }
    auto elem_index = [&](const std::vector<long long>& v) {
        long long idx = 0;
        for (long long x : v) {
            long long r = x % n;
            if (r < 0) r += n;
            idx = idx * n + r;
        }
        return idx;
    };

    std::vector<int> y_letters(gsize);
    for (long long y = 0; y < points; ++y) {
        index_letters(y, m.alphabet().size(), y_letters);
        auto& block = out.block(static_cast<int>(y));
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j)
                for (const auto& [g, f] : m.at(i, j)) {
                    for (long long h = 0; h < gsize; ++h) {
                        // Row index a = h + g; value f(a . y), reading the
                        // configuration coordinate psi(s) - a for s in S.
                        std::vector<long long> av(k);
                        for (int q = 0; q < k; ++q) av[q] = elems[h][q] + g[q];
                        const long long a = elem_index(av);
                        std::vector<int> sub(f.support().size());
                        for (size_t si = 0; si < f.support().size(); ++si) {
                            std::vector<long long> c(k);
                            for (int q = 0; q < k; ++q)
                                c[q] = f.support()[si][q] - av[q];
                            sub[si] = y_letters[elem_index(c)];
                        }
                        block(i * gsize + a, j * gsize + h) += to_double(f.value(sub));
                    }
                }
    }
    return out;
}

TraceCheck trace_injectivity_check(const CylinderFunction& f, int n) {
    const CylinderFunction fm = f.minimal();
    TraceCheck out;
    out.rhs = fm.integral();

    // Reduce the support mod n and collect distinct reduced coordinates.
    const int k = fm.rank();
    std::vector<long long> reduced;  // index into (Z/n)^k per support coord
    auto reduce_index = [&](const GroupElem& s) {
        long long idx = 0;
        for (long long x : s) {
            long long r = x % n;
            if (r < 0) r += n;
            idx = idx * n + r;
        }
        return idx;
    };
    for (const auto& s : fm.support()) reduced.push_back(reduce_index(s));
    std::set<long long> distinct(reduced.begin(), reduced.end());
    out.injective = distinct.size() == reduced.size();

    // lhs: integrate f o alpha over A^{(Z/n)^k}: sum over assignments to
    // the distinct reduced coordinates only (all others marginalize to 1).
    std::vector<long long> coords(distinct.begin(), distinct.end());
    const int base = fm.alphabet().size();
    const long long total = ipow(base, static_cast<long long>(coords.size()));
    std::vector<int> letters(coords.size()), sub(fm.support().size());
    Rat lhs = 0;
    for (long long idx = 0; idx < total; ++idx) {
        index_letters(idx, base, letters);
        Rat w = 1;
        for (int l : letters) w *= fm.alphabet().weights[l];
        for (size_t i = 0; i < reduced.size(); ++i) {
            const auto pos = std::lower_bound(coords.begin(), coords.end(), reduced[i]) -
                             coords.begin();
            sub[i] = letters[pos];
        }
        lhs += fm.value(sub) * w;
    }
    out.lhs = lhs;
    return out;
}

std::vector<Rat> validate_step_approximation(const StepApproximation& s) {
    if (s.steps.empty()) throw std::invalid_argument("no steps supplied");
    if (s.l1_deviations.size() != s.steps.size())
        throw std::invalid_argument("need one deviation budget per step");
    for (const auto& f : s.steps)
        if (f.linf_norm() > s.linf_bound)
            throw std::invalid_argument("step exceeds the sup-norm bound");
    std::vector<Rat> pairwise;
    for (size_t i = 0; i + 1 < s.steps.size(); ++i) {
        const Rat d = s.steps[i].add(s.steps[i + 1].scale(-1)).l1_norm();
        // ||f^(i) - f^(i+1)||_1 <= dev_i + dev_{i+1} must hold if the
        // declared budgets are consistent with a common limit.
        if (d > s.l1_deviations[i] + s.l1_deviations[i + 1])
            throw std::invalid_argument("declared L1 deviations are inconsistent");
        pairwise.push_back(d);
    }
    return pairwise;
}

}  // namespace l2inv
