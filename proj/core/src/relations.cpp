#include "l2inv/relations.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace l2inv {

FiniteRelation::FiniteRelation(std::vector<Rat> weights,
                               std::vector<std::vector<int>> classes)
    : weights_(std::move(weights)), classes_(std::move(classes)) {
    const int n = point_count();
    for (const Rat& w : weights_)
        if (w <= 0) throw std::invalid_argument("point weights must be positive");
    class_of_.assign(n, -1);
    for (size_t c = 0; c < classes_.size(); ++c) {
        if (classes_[c].empty()) throw std::invalid_argument("empty class");
        for (int x : classes_[c]) {
            if (x < 0 || x >= n) throw std::invalid_argument("class point out of range");
            if (class_of_[x] != -1) throw std::invalid_argument("classes overlap");
            class_of_[x] = static_cast<int>(c);
        }
    }
    for (int x = 0; x < n; ++x)
        if (class_of_[x] == -1) throw std::invalid_argument("classes do not cover points");
    if (total_weight() != 1) throw std::invalid_argument("weights must sum to 1");
}

Rat FiniteRelation::total_weight() const {
    Rat s = 0;
    for (const Rat& w : weights_) s += w;
    return s;
}

bool FiniteRelation::same_as(const FiniteRelation& other) const {
    return weights_ == other.weights_ && classes_ == other.classes_;
}

FiniteRelation orbit_relation(const Group& g,
                              const std::vector<std::vector<int>>& action,
                              std::vector<Rat> weights) {
    if (!g.is_finite()) throw std::invalid_argument("orbit_relation needs a finite group");
    const int ord = g.order();
    const int n = static_cast<int>(weights.size());
    if (static_cast<int>(action.size()) != ord)
        throw std::invalid_argument("action must supply one permutation per element");
    const auto& tab = g.table();
    for (int a = 0; a < ord; ++a) {
        if (static_cast<int>(action[a].size()) != n)
            throw std::invalid_argument("action permutation has wrong size");
        std::vector<bool> seen(n, false);
        for (int x = 0; x < n; ++x) {
            const int y = action[a][x];
            if (y < 0 || y >= n || seen[y])
                throw std::invalid_argument("action is not a permutation");
            seen[y] = true;
            if (weights[y] != weights[x])
                throw std::invalid_argument("weights are not action-invariant");
        }
        for (int b = 0; b < ord; ++b)
            for (int x = 0; x < n; ++x)
                if (action[tab.mul[a][b]][x] != action[a][action[b][x]])
                    throw std::invalid_argument("action is not a homomorphism");
    }
    for (int x = 0; x < n; ++x)
        if (action[tab.identity][x] != x)
            throw std::invalid_argument("identity does not act trivially");

    std::vector<int> orbit_of(n, -1);
    std::vector<std::vector<int>> classes;
    for (int x = 0; x < n; ++x) {
        if (orbit_of[x] != -1) continue;
        std::vector<int> orbit;
        for (int a = 0; a < ord; ++a) {
            const int y = action[a][x];
            if (orbit_of[y] == -1) {
                orbit_of[y] = static_cast<int>(classes.size());
                orbit.push_back(y);
            }
        }
        std::sort(orbit.begin(), orbit.end());
        classes.push_back(std::move(orbit));
    }
    return FiniteRelation(std::move(weights), std::move(classes));
}

GroupoidMatrix::GroupoidMatrix(FiniteRelation relation, int rows, int cols)
    : relation_(std::move(relation)), rows_(rows), cols_(cols) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("bad shape");
}

GroupoidMatrix GroupoidMatrix::identity(const FiniteRelation& r, int n) {
    GroupoidMatrix f(r, n, n);
    for (int x = 0; x < r.point_count(); ++x)
        for (int i = 0; i < n; ++i) f.set(x, x, i, i, 1);
    return f;
}

void GroupoidMatrix::set(int x, int y, int i, int j, const Rat& value) {
    if (!relation_.related(x, y))
        throw std::invalid_argument("points are not in the same class");
    auto& blk = blocks_[{x, y}];
    if (blk.empty()) blk.assign(static_cast<size_t>(rows_) * cols_, 0);
    blk[static_cast<size_t>(i) * cols_ + j] = value;
    prune({x, y});
}

Rat GroupoidMatrix::get(int x, int y, int i, int j) const {
    auto it = blocks_.find({x, y});
    if (it == blocks_.end()) return 0;
    return it->second[static_cast<size_t>(i) * cols_ + j];
}

bool GroupoidMatrix::has_block(int x, int y) const {
    return blocks_.count({x, y}) > 0;
}

void GroupoidMatrix::prune(const std::pair<int, int>& key) {
    auto it = blocks_.find(key);
    if (it == blocks_.end()) return;
    for (const Rat& v : it->second)
        if (v != 0) return;
    blocks_.erase(it);
}

GroupoidMatrix GroupoidMatrix::mul(const GroupoidMatrix& other) const {
    if (!relation_.same_as(other.relation_))
        throw std::invalid_argument("relation mismatch");
    if (cols_ != other.rows_) throw std::invalid_argument("shape mismatch");
    GroupoidMatrix out(relation_, rows_, other.cols_);
    for (const auto& [kf, bf] : blocks_) {
        const auto [x, z] = kf;
        for (int y : relation_.classes()[relation_.class_of(x)]) {
            auto it = other.blocks_.find({z, y});
            if (it == other.blocks_.end()) continue;
            const auto& bg = it->second;
            auto& dst = out.blocks_[{x, y}];
            if (dst.empty()) dst.assign(static_cast<size_t>(rows_) * other.cols_, 0);
            for (int i = 0; i < rows_; ++i)
                for (int t = 0; t < cols_; ++t) {
                    const Rat& a = bf[static_cast<size_t>(i) * cols_ + t];
                    if (a == 0) continue;
                    for (int j = 0; j < other.cols_; ++j)
                        dst[static_cast<size_t>(i) * other.cols_ + j] +=
                            a * bg[static_cast<size_t>(t) * other.cols_ + j];
                }
        }
    }
    std::vector<std::pair<int, int>> keys;
    for (const auto& [k, v] : out.blocks_) keys.push_back(k);
    for (const auto& k : keys) out.prune(k);
    return out;
}

GroupoidMatrix GroupoidMatrix::add(const GroupoidMatrix& other) const {
    if (!relation_.same_as(other.relation_) || rows_ != other.rows_ ||
        cols_ != other.cols_)
        throw std::invalid_argument("shape/relation mismatch");
    GroupoidMatrix out = *this;
    for (const auto& [k, b] : other.blocks_) {
        auto& dst = out.blocks_[k];
        if (dst.empty()) dst = b;
        else
            for (size_t i = 0; i < b.size(); ++i) dst[i] += b[i];
        out.prune(k);
    }
    return out;
}

GroupoidMatrix GroupoidMatrix::adjoint() const {
    GroupoidMatrix out(relation_, cols_, rows_);
    for (const auto& [k, b] : blocks_) {
        auto& dst = out.blocks_[{k.second, k.first}];
        dst.assign(static_cast<size_t>(cols_) * rows_, 0);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j)
                dst[static_cast<size_t>(j) * rows_ + i] =
                    b[static_cast<size_t>(i) * cols_ + j];
    }
    return out;
}

Rat GroupoidMatrix::trace() const {
    if (rows_ != cols_) throw std::invalid_argument("trace needs a square matrix");
    Rat s = 0;
    for (int x = 0; x < relation_.point_count(); ++x) {
        auto it = blocks_.find({x, x});
        if (it == blocks_.end()) continue;
        Rat d = 0;
        for (int i = 0; i < rows_; ++i) d += it->second[static_cast<size_t>(i) * cols_ + i];
        s += relation_.weight(x) * d;
    }
    return s;
}

Rat GroupoidMatrix::power_trace(int m) const {
    if (m < 1) throw std::invalid_argument("power must be >= 1");
    GroupoidMatrix acc = *this;
    for (int i = 1; i < m; ++i) acc = acc.mul(*this);
    return acc.trace();
}

bool GroupoidMatrix::equals(const GroupoidMatrix& other) const {
    return relation_.same_as(other.relation_) && rows_ == other.rows_ &&
           cols_ == other.cols_ && blocks_ == other.blocks_;
}

bool GroupoidMatrix::is_zero() const { return blocks_.empty(); }

VNMorphism to_vn_model(const GroupoidMatrix& f) {
    const FiniteRelation& r = f.relation();
    FiniteVNModel model;
    for (const auto& cls : r.classes()) {
        const Rat w = r.weight(cls[0]);
        for (int x : cls)
            if (r.weight(x) != w)
                throw std::invalid_argument("non-uniform weights within a class");
        model.cells.push_back({w, static_cast<int>(cls.size())});
    }
    VNMorphism out(model, f.rows(), f.cols());
    for (size_t c = 0; c < r.classes().size(); ++c) {
        const auto& cls = r.classes()[c];
        const int s = static_cast<int>(cls.size());
        auto& b = out.block(static_cast<int>(c));
        for (int xi = 0; xi < s; ++xi)
            for (int yi = 0; yi < s; ++yi) {
                if (!f.has_block(cls[xi], cls[yi])) continue;
                for (int i = 0; i < f.rows(); ++i)
                    for (int j = 0; j < f.cols(); ++j)
                        b(i * s + xi, j * s + yi) =
                            to_double(f.get(cls[xi], cls[yi], i, j));
            }
    }
    return out;
}

GroupoidMatrix embed_crossed(const Group& g,
                             const std::vector<std::vector<int>>& action,
                             const std::vector<Rat>& weights, int rows, int cols,
                             const std::vector<CrossedElement>& entries) {
    if (!g.is_finite()) throw std::invalid_argument("embed_crossed needs a finite group");
    const int ord = g.order();
    const int n = static_cast<int>(weights.size());
    if (static_cast<int>(entries.size()) != rows * cols)
        throw std::invalid_argument("entry grid has wrong size");
    FiniteRelation r = orbit_relation(g, action, weights);
    // Freeness: no nonidentity element fixes a point.
    for (int a = 0; a < ord; ++a) {
        if (a == g.table().identity) continue;
        for (int x = 0; x < n; ++x)
            if (action[a][x] == x)
                throw std::invalid_argument("action is not free");
    }
    GroupoidMatrix out(r, rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            for (const auto& [a, values] : entries[i * cols + j].terms) {
                if (a < 0 || a >= ord) throw std::invalid_argument("bad element id");
                if (static_cast<int>(values.size()) != n)
                    throw std::invalid_argument("function has wrong point count");
                const int ainv = g.table().inv[a];
                for (int x = 0; x < n; ++x) {
                    if (values[x] == 0) continue;
                    const int y = action[ainv][x];
                    out.set(x, y, i, j, out.get(x, y, i, j) + values[x]);
                }
            }
    return out;
}

RestrictedGroupoid restrict_relation(const GroupoidMatrix& f,
                                     const std::vector<int>& subset) {
    const FiniteRelation& r = f.relation();
    if (subset.empty()) throw std::invalid_argument("subset must be nonempty");
    std::vector<int> pts = subset;
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    Rat mu_a = 0;
    std::vector<int> new_index(r.point_count(), -1);
    for (size_t i = 0; i < pts.size(); ++i) {
        if (pts[i] < 0 || pts[i] >= r.point_count())
            throw std::invalid_argument("subset point out of range");
        new_index[pts[i]] = static_cast<int>(i);
        mu_a += r.weight(pts[i]);
    }
    std::vector<Rat> weights;
    for (int x : pts) weights.push_back(r.weight(x) / mu_a);
    std::vector<std::vector<int>> classes;
    for (const auto& cls : r.classes()) {
        std::vector<int> kept;
        for (int x : cls)
            if (new_index[x] != -1) kept.push_back(new_index[x]);
        if (!kept.empty()) classes.push_back(std::move(kept));
    }
    FiniteRelation restricted(std::move(weights), std::move(classes));
    GroupoidMatrix out(restricted, f.rows(), f.cols());
    for (const auto& [k, b] : f.blocks()) {
        const int x = new_index[k.first], y = new_index[k.second];
        if (x == -1 || y == -1) continue;
        for (int i = 0; i < f.rows(); ++i)
            for (int j = 0; j < f.cols(); ++j)
                out.set(x, y, i, j, b[static_cast<size_t>(i) * f.cols() + j]);
    }
    return {std::move(out), mu_a, std::move(pts)};
}

FullnessCertificate is_full(const FiniteRelation& r, const std::vector<int>& subset) {
    std::vector<bool> in_a(r.point_count(), false);
    for (int x : subset) {
        if (x < 0 || x >= r.point_count())
            throw std::invalid_argument("subset point out of range");
        in_a[x] = true;
    }
    FullnessCertificate cert;
    size_t max_class = 0;
    std::vector<int> anchor(r.classes().size(), -1);
    for (size_t c = 0; c < r.classes().size(); ++c) {
        max_class = std::max(max_class, r.classes()[c].size());
        for (int x : r.classes()[c])
            if (in_a[x]) {
                anchor[c] = x;
                break;
            }
        if (anchor[c] == -1) return cert;  // a class misses A: not full
    }
    cert.full = true;

    // phi_i has domain = the i-th point of every class (by point order),
    // mapped to that class's first point of A. phi(x, y) = 1 iff x = sigma(y).
    for (size_t i = 0; i < max_class; ++i) {
        GroupoidMatrix phi(r, 1, 1);
        for (size_t c = 0; c < r.classes().size(); ++c) {
            if (i >= r.classes()[c].size()) continue;
            phi.set(anchor[c], r.classes()[c][i], 0, 0, 1);
        }
        cert.phis.push_back(std::move(phi));
    }

    GroupoidMatrix chi_a(r, 1, 1);
    for (int x = 0; x < r.point_count(); ++x)
        if (in_a[x]) chi_a.set(x, x, 0, 0, 1);
    GroupoidMatrix sum(r, 1, 1);
    for (const auto& phi : cert.phis)
        sum = sum.add(phi.adjoint().mul(chi_a).mul(phi));
    cert.reconstructs_identity = sum.equals(GroupoidMatrix::identity(r, 1));
    return cert;
}

GroupoidMatrix transport(const GroupoidMatrix& f, const FiniteRelation& target,
                         const std::vector<int>& iso) {
    const FiniteRelation& src = f.relation();
    if (static_cast<int>(iso.size()) != src.point_count() ||
        src.point_count() != target.point_count())
        throw std::invalid_argument("iso must be a bijection of the point sets");
    std::vector<bool> seen(target.point_count(), false);
    for (int x = 0; x < src.point_count(); ++x) {
        const int y = iso[x];
        if (y < 0 || y >= target.point_count() || seen[y])
            throw std::invalid_argument("iso is not a bijection");
        seen[y] = true;
        if (src.weight(x) != target.weight(y))
            throw std::invalid_argument("iso does not preserve weights");
    }
    for (int x = 0; x < src.point_count(); ++x)
        for (int y = 0; y < src.point_count(); ++y)
            if (src.related(x, y) != target.related(iso[x], iso[y]))
                throw std::invalid_argument("iso does not preserve classes");
    GroupoidMatrix out(target, f.rows(), f.cols());
    for (const auto& [k, b] : f.blocks())
        for (int i = 0; i < f.rows(); ++i)
            for (int j = 0; j < f.cols(); ++j)
                out.set(iso[k.first], iso[k.second], i, j,
                        b[static_cast<size_t>(i) * f.cols() + j]);
    return out;
}

}  // namespace l2inv
