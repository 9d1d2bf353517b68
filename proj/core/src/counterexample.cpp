#include "l2inv/counterexample.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace l2inv {

FiniteVNModel DyadicModel::vn_model() const {
    FiniteVNModel m;
    const Rat w = cell_weight();
    for (int c = 0; c < cell_count(); ++c) m.cells.push_back({w, 1});
    return m;
}

TwoCopyOperator::TwoCopyOperator(DyadicModel model, int rows, int cols, Rat eps2)
    : model_(model), rows_(rows), cols_(cols), eps2_(std::move(eps2)),
      entries_(static_cast<size_t>(model.cell_count()) * rows * cols) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("bad shape");
    if (eps2_ < 0) throw std::invalid_argument("eps^2 must be nonnegative");
}

QuadExt& TwoCopyOperator::at(int cell, int i, int j) {
    return entries_[(static_cast<size_t>(cell) * rows_ + i) * cols_ + j];
}
const QuadExt& TwoCopyOperator::at(int cell, int i, int j) const {
    return entries_[(static_cast<size_t>(cell) * rows_ + i) * cols_ + j];
}

TwoCopyOperator TwoCopyOperator::mul(const TwoCopyOperator& other) const {
    if (cols_ != other.rows_ || model_.depth != other.model_.depth ||
        eps2_ != other.eps2_)
        throw std::invalid_argument("shape/model mismatch");
    TwoCopyOperator out(model_, rows_, other.cols_, eps2_);
    for (int c = 0; c < model_.cell_count(); ++c)
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < other.cols_; ++j) {
                QuadExt s;
                for (int t = 0; t < cols_; ++t)
                    s = s.add(at(c, i, t).mul(other.at(c, t, j), eps2_));
                out.at(c, i, j) = s;
            }
    return out;
}

TwoCopyOperator TwoCopyOperator::adjoint() const {
    TwoCopyOperator out(model_, cols_, rows_, eps2_);
    for (int c = 0; c < model_.cell_count(); ++c)
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) out.at(c, j, i) = at(c, i, j);
    return out;
}

bool TwoCopyOperator::equals(const TwoCopyOperator& other) const {
    return model_.depth == other.model_.depth && rows_ == other.rows_ &&
           cols_ == other.cols_ && eps2_ == other.eps2_ && entries_ == other.entries_;
}

Rat TwoCopyOperator::trace() const {
    if (rows_ != cols_) throw std::invalid_argument("trace of non-square operator");
    Rat rational_part = 0, eps_part = 0;
    for (int c = 0; c < model_.cell_count(); ++c)
        for (int i = 0; i < rows_; ++i) {
            rational_part += at(c, i, i).a;
            eps_part += at(c, i, i).b;
        }
    if (eps_part != 0) throw std::domain_error("trace is irrational");
    return rational_part * model_.cell_weight();
}

VNMorphism TwoCopyOperator::to_vn(double eps_value) const {
    VNMorphism out(model_.vn_model(), rows_, cols_);
    for (int c = 0; c < model_.cell_count(); ++c)
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) {
                const QuadExt& v = at(c, i, j);
                out.block(c)(i, j) = to_double(v.a) + to_double(v.b) * eps_value;
            }
    return out;
}

TwoCopyOperator build_pk(int k, const Rat& eps2, int depth) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (depth < k + 1) throw std::invalid_argument("depth must be at least k+1");
    DyadicModel model{depth};
    TwoCopyOperator p(model, 2, 2, eps2);
    // Cell c covers [c/2^d, (c+1)/2^d). Region boundaries at
    // 1 - 2^{1-k} and 1 - 2^{-k} are exact dyadics of depth <= d.
    const long long cells = model.cell_count();
    const long long left_end = cells - (1LL << (depth - k + 1));
    const long long mid_end = cells - (1LL << (depth - k));
    const Rat denom = 1 + eps2;
    for (long long c = 0; c < cells; ++c) {
        const int ci = static_cast<int>(c);
        if (c < left_end) {
            p.at(ci, 0, 0) = QuadExt::rational(1);
            p.at(ci, 1, 1) = QuadExt::rational(1);
        } else if (c < mid_end) {
            p.at(ci, 0, 0) = QuadExt::rational(eps2 / denom);
            p.at(ci, 0, 1) = QuadExt{0, 1 / denom};
            p.at(ci, 1, 0) = QuadExt{0, 1 / denom};
            p.at(ci, 1, 1) = QuadExt::rational(1 / denom);
        }
        // Cells of [1-2^{-k}, 1] stay zero.
    }
    // Cells repeat one of three blocks; idempotency and self-adjointness
    // are verified exactly on one representative per region.
    TwoCopyOperator reps(DyadicModel{0}, 2, 2, eps2);
    for (long long c : {0LL, left_end, mid_end}) {
        if (c >= cells) continue;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                reps.at(0, i, j) = p.at(static_cast<int>(c), i, j);
        if (!reps.mul(reps).equals(reps))
            throw std::logic_error("p_k is not idempotent");
        if (!reps.adjoint().equals(reps))
            throw std::logic_error("p_k is not self-adjoint");
    }
    return p;
}

Rat dim_ak(int k, const Rat& eps2, int depth) {
    return build_pk(k, eps2, depth).trace();
}

Rat collapse_eps2(int k) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    const unsigned e = 1u << (k + 1);
    return Rat(boost::multiprecision::pow(Int(k), e) - 1);
}

DetPr2Pk det_pr2_pk(int k, const Rat& eps2) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    DetPr2Pk out;
    out.base = 1 + eps2;
    out.exponent = Rat(-1) / Rat(Int(1) << (k + 1));
    out.log_value = to_double(out.exponent) * log_rat(out.base);
    out.value = std::exp(out.log_value);
    // det = base^{-1/2^{k+1}}: exact when both parts of 1/base admit exact
    // 2^{k+1}-th integer roots.
    const Int num = boost::multiprecision::numerator(out.base);
    const Int den = boost::multiprecision::denominator(out.base);
    const unsigned root = 1u << (k + 1);
    auto [rn, en] = exact_nth_root(num, root);
    auto [rd, ed] = exact_nth_root(den, root);
    if (en && ed) {
        out.exact = true;
        out.value_exact = Rat(rd) / Rat(rn);
    }
    return out;
}

Theorem51Report verify_det_along_projections(const VNMorphism& f,
                                             const std::vector<VNMorphism>& p_seq,
                                             double tol) {
    if (p_seq.empty()) throw std::invalid_argument("no projections supplied");
    const auto kernel = kernel_basis(f);
    for (size_t s = 0; s < p_seq.size(); ++s) {
        const VNMorphism& p = p_seq[s];
        if (!p.model().same_as(f.model()) || p.rows() != f.cols() ||
            p.cols() != f.cols())
            throw std::invalid_argument("projection does not act on the domain of f");
        if (!p.is_projection(1e-9))
            throw std::invalid_argument("p_k is not a projection");
        for (int c = 0; c < p.cell_count(); ++c) {
            if (kernel[c].cols() == 0) continue;
            const double escape =
                (kernel[c] - p.block(c) * kernel[c]).norm();
            if (escape > 1e-10) {
                std::ostringstream msg;
                msg << "kernel of f is not contained in im(p_" << s
                    << "): escape norm " << escape;
                throw std::invalid_argument(msg.str());
            }
        }
        if (s + 1 < p_seq.size()) {
            const VNMorphism nested = p_seq[s + 1].compose(p);
            if (nested.frobenius_distance(p) > 1e-9)
                throw std::invalid_argument("projections are not nested");
        }
    }
    Theorem51Report rep;
    rep.det_f = fk_det(f);
    for (const auto& p : p_seq) rep.stage_dets.push_back(fk_det(f.compose(p)));
    rep.final_error = std::abs(rep.stage_dets.back() - rep.det_f);
    rep.converged = rep.final_error <= tol;
    return rep;
}

}  // namespace l2inv
