#include "l2inv/finvn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace l2inv {

Rat FiniteVNModel::trace_identity() const {
    Rat s = 0;
    for (const auto& c : cells) s += c.weight * c.dim;
    return s;
}

bool FiniteVNModel::same_as(const FiniteVNModel& other) const {
    if (cells.size() != other.cells.size()) return false;
    for (size_t i = 0; i < cells.size(); ++i)
        if (cells[i].weight != other.cells[i].weight || cells[i].dim != other.cells[i].dim)
            return false;
    return true;
}

VNMorphism::VNMorphism(FiniteVNModel model, int rows, int cols)
    : model_(std::move(model)), rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("negative multiplicity");
    blocks_.reserve(model_.cells.size());
    for (const auto& c : model_.cells) {
        if (c.weight <= 0 || c.dim <= 0) throw std::invalid_argument("bad cell");
        blocks_.emplace_back(Eigen::MatrixXcd::Zero(rows * c.dim, cols * c.dim));
    }
}

VNMorphism VNMorphism::identity(const FiniteVNModel& model, int n) {
    VNMorphism f(model, n, n);
    for (auto& b : f.blocks_) b.setIdentity();
    return f;
}

VNMorphism VNMorphism::zero(const FiniteVNModel& model, int rows, int cols) {
    return VNMorphism(model, rows, cols);
}

VNMorphism VNMorphism::compose(const VNMorphism& other) const {
    if (!model_.same_as(other.model_)) throw std::invalid_argument("model mismatch");
    if (cols_ != other.rows_) throw std::invalid_argument("multiplicity mismatch");
    VNMorphism r(model_, rows_, other.cols_);
    for (int c = 0; c < cell_count(); ++c) r.blocks_[c] = blocks_[c] * other.blocks_[c];
    return r;
}

VNMorphism VNMorphism::adjoint() const {
    VNMorphism r(model_, cols_, rows_);
    for (int c = 0; c < cell_count(); ++c) r.blocks_[c] = blocks_[c].adjoint();
    return r;
}

VNMorphism VNMorphism::add(const VNMorphism& other) const {
    if (!model_.same_as(other.model_)) throw std::invalid_argument("model mismatch");
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw std::invalid_argument("multiplicity mismatch");
    VNMorphism r(model_, rows_, cols_);
    for (int c = 0; c < cell_count(); ++c) r.blocks_[c] = blocks_[c] + other.blocks_[c];
    return r;
}

VNMorphism VNMorphism::scale(std::complex<double> s) const {
    VNMorphism r = *this;
    for (auto& b : r.blocks_) b *= s;
    return r;
}

std::complex<double> VNMorphism::trace() const {
    if (rows_ != cols_) throw std::invalid_argument("trace of non-square morphism");
    std::complex<double> s = 0;
    for (int c = 0; c < cell_count(); ++c)
        s += to_double(model_.cells[c].weight) * blocks_[c].trace();
    return s;
}

double VNMorphism::delta_moment(int m) const {
    double s = 0;
    for (int c = 0; c < cell_count(); ++c) {
        Eigen::MatrixXcd d = blocks_[c] * blocks_[c].adjoint();
        Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(d.rows(), d.cols());
        for (int i = 0; i < m; ++i) p = p * d;
        s += to_double(model_.cells[c].weight) * p.trace().real();
    }
    return s;
}

VNMorphism VNMorphism::direct_sum(const VNMorphism& other) const {
    if (!model_.same_as(other.model_)) throw std::invalid_argument("model mismatch");
    VNMorphism r(model_, rows_ + other.rows_, cols_ + other.cols_);
    for (int c = 0; c < cell_count(); ++c) {
        const int d = model_.cells[c].dim;
        r.blocks_[c].topLeftCorner(rows_ * d, cols_ * d) = blocks_[c];
        r.blocks_[c].bottomRightCorner(other.rows_ * d, other.cols_ * d) = other.blocks_[c];
    }
    return r;
}

bool VNMorphism::is_projection(double tol) const {
    if (rows_ != cols_) return false;
    for (const auto& b : blocks_) {
        if ((b - b.adjoint()).norm() > tol) return false;
        if ((b * b - b).norm() > tol) return false;
    }
    return true;
}

bool VNMorphism::approx_equal(const VNMorphism& other, double tol) const {
    return frobenius_distance(other) <= tol;
}

double VNMorphism::frobenius_distance(const VNMorphism& other) const {
    if (!model_.same_as(other.model_) || rows_ != other.rows_ || cols_ != other.cols_)
        return std::numeric_limits<double>::infinity();
    double s = 0;
    for (int c = 0; c < cell_count(); ++c) s += (blocks_[c] - other.blocks_[c]).squaredNorm();
    return std::sqrt(s);
}

double VNMorphism::operator_norm() const {
    double mx = 0;
    for (const auto& b : blocks_) {
        if (b.size() == 0) continue;
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(b);
        if (svd.singularValues().size() > 0) mx = std::max(mx, svd.singularValues()(0));
    }
    return mx;
}

double VNMorphism::domain_dim() const {
    double s = 0;
    for (const auto& c : model_.cells) s += to_double(c.weight) * cols_ * c.dim;
    return s;
}

double SpectralDensity::value(double lambda) const {
    double s = 0;
    for (const auto& j : jumps)
        if (j.lambda <= lambda) s += j.weight;
    return s;
}

double SpectralDensity::log_det() const {
    double s = 0;
    for (const auto& j : jumps)
        if (j.lambda > 0) s += j.weight * std::log(j.lambda);
    return s;
}

double SpectralDensity::det() const { return std::exp(log_det()); }

SpectralDensity spectral_density(const VNMorphism& f, const SpectralOptions& opts) {
    SpectralDensity out;
    out.total_dim = f.domain_dim();
    std::vector<std::pair<double, double>> evs;  // (eigenvalue of f*f, weight)
    double max_ev = 0;
    for (int c = 0; c < f.cell_count(); ++c) {
        const auto& b = f.block(c);
        Eigen::MatrixXcd h = b.adjoint() * b;
        if (h.rows() == 0) continue;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("eigensolve failed to converge");
        const double w = to_double(f.model().cells[c].weight);
        for (int i = 0; i < es.eigenvalues().size(); ++i) {
            const double mu = es.eigenvalues()(i);
            evs.emplace_back(mu, w);
            max_ev = std::max(max_ev, std::abs(mu));
        }
    }
    const double clamp = std::max(opts.clamp_abs, opts.clamp_rel * max_ev);
    for (auto& [mu, w] : evs) {
        const double lambda = std::abs(mu) <= clamp ? 0.0 : std::sqrt(std::max(mu, 0.0));
        out.jumps.push_back({lambda, w});
    }
    std::sort(out.jumps.begin(), out.jumps.end(),
              [](const SpectralDensity::Jump& a, const SpectralDensity::Jump& b) {
                  return a.lambda < b.lambda;
              });
    return out;
}

double fk_det(const SpectralDensity& f) { return f.det(); }
double betti(const SpectralDensity& f) { return f.betti(); }

namespace {

// Orthonormal basis of the range of a Hermitian projection block.
Eigen::MatrixXcd projection_range_basis(const Eigen::MatrixXcd& p) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(p);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigensolve failed");
    std::vector<int> idx;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) > 0.5) idx.push_back(i);
    Eigen::MatrixXcd basis(p.rows(), idx.size());
    for (size_t k = 0; k < idx.size(); ++k) basis.col(k) = es.eigenvectors().col(idx[k]);
    return basis;
}

}  // namespace

RestrictedMorphism restrict_by(const VNMorphism& f, const VNMorphism& p) {
    if (!f.model().same_as(p.model())) throw std::invalid_argument("model mismatch");
    if (f.rows() != f.cols()) throw std::invalid_argument("restrict_by needs a square morphism");
    if (p.rows() != f.cols() || p.cols() != f.cols())
        throw std::invalid_argument("projection must act on the domain");
    if (!p.is_projection(1e-9)) throw std::invalid_argument("p is not a projection");

    std::vector<Eigen::MatrixXcd> bases(f.cell_count());
    Rat tr_p = 0;
    bool full = true;
    for (int c = 0; c < f.cell_count(); ++c) {
        bases[c] = projection_range_basis(p.block(c));
        const long rank = bases[c].cols();
        if (rank == 0) full = false;
        tr_p += f.model().cells[c].weight * Rat(static_cast<long long>(rank));
    }
    if (tr_p == 0) throw std::invalid_argument("p = 0");

    FiniteVNModel compressed_model;
    std::vector<int> kept;
    for (int c = 0; c < f.cell_count(); ++c) {
        const long rank = bases[c].cols();
        if (rank == 0) continue;
        compressed_model.cells.push_back(
            {f.model().cells[c].weight / tr_p, static_cast<int>(rank)});
        kept.push_back(c);
    }

    // Multiplicity folds into the cell dimension of the compressed model.
    VNMorphism out(compressed_model, 1, 1);
    for (size_t k = 0; k < kept.size(); ++k) {
        const int c = kept[k];
        out.block(static_cast<int>(k)) = bases[c].adjoint() * f.block(c) * bases[c];
    }
    return {out, tr_p, full};
}

VNMorphism induce(const VNMorphism& f, const TraceEmbedding& embedding,
                  const std::vector<VNMorphism>& generators) {
    for (const auto& g : generators) {
        if (g.rows() != g.cols()) continue;
        const VNMorphism img = embedding.map(g);
        const std::complex<double> a = g.trace(), b = img.trace();
        if (std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(a)))
            throw std::invalid_argument("embedding is not trace-preserving");
    }
    return embedding.map(f);
}

std::vector<Eigen::MatrixXcd> kernel_basis(const VNMorphism& f, const SpectralOptions& opts) {
    std::vector<Eigen::MatrixXcd> out;
    for (int c = 0; c < f.cell_count(); ++c) {
        const auto& b = f.block(c);
        Eigen::MatrixXcd h = b.adjoint() * b;
        if (h.rows() == 0) {
            out.emplace_back(0, 0);
            continue;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
        if (es.info() != Eigen::Success) throw std::runtime_error("eigensolve failed");
        double max_ev = 0;
        for (int i = 0; i < es.eigenvalues().size(); ++i)
            max_ev = std::max(max_ev, std::abs(es.eigenvalues()(i)));
        const double clamp = std::max(opts.clamp_abs, opts.clamp_rel * max_ev);
        std::vector<int> idx;
        for (int i = 0; i < es.eigenvalues().size(); ++i)
            if (std::abs(es.eigenvalues()(i)) <= clamp) idx.push_back(i);
        Eigen::MatrixXcd basis(h.rows(), idx.size());
        for (size_t k = 0; k < idx.size(); ++k) basis.col(k) = es.eigenvectors().col(idx[k]);
        out.push_back(std::move(basis));
    }
    return out;
}

}  // namespace l2inv
