#include "l2inv/torsion.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace l2inv {

namespace {

int dim_at(const std::vector<int>& dims, int n) {
    return (n >= 0 && n < static_cast<int>(dims.size())) ? dims[n] : 0;
}

// Differential c_n: degree n -> n-1, a zero morphism outside the range.
VNMorphism diff_at(const HilbertChainComplex& c, int n) {
    if (n >= 1 && n <= c.top_degree()) return c.diffs[n - 1];
    return VNMorphism::zero(c.model, dim_at(c.dims, n - 1), dim_at(c.dims, n));
}

// Copy a sub-morphism into a big cellwise block at multiplicity offsets.
void embed_block(VNMorphism& big, const VNMorphism& small, int row_off, int col_off) {
    for (int c = 0; c < big.cell_count(); ++c) {
        const int d = big.model().cells[c].dim;
        big.block(c).block(row_off * d, col_off * d, small.rows() * d,
                           small.cols() * d) = small.block(c);
    }
}

}  // namespace

void HilbertChainComplex::validate(double tol) const {
    if (dims.empty()) throw std::invalid_argument("complex has no degrees");
    if (diffs.size() + 1 != dims.size())
        throw std::invalid_argument("need one differential per adjacent degree pair");
    for (int d : dims)
        if (d < 0) throw std::invalid_argument("negative multiplicity");
    for (size_t n = 0; n < diffs.size(); ++n) {
        if (!diffs[n].model().same_as(model))
            throw std::invalid_argument("differential over a different model");
        if (diffs[n].rows() != dims[n] || diffs[n].cols() != dims[n + 1])
            throw std::invalid_argument("differential shape mismatch");
    }
    for (size_t n = 0; n + 1 < diffs.size(); ++n) {
        const VNMorphism comp = diffs[n].compose(diffs[n + 1]);
        if (!comp.approx_equal(VNMorphism::zero(model, comp.rows(), comp.cols()), tol))
            throw std::invalid_argument("c.c != 0");
    }
}

VNMorphism HilbertChainComplex::laplacian(int n) const {
    const VNMorphism cn = diff_at(*this, n);
    const VNMorphism cn1 = diff_at(*this, n + 1);
    return cn.adjoint().compose(cn).add(cn1.compose(cn1.adjoint()));
}

double HilbertChainComplex::betti(int n, const SpectralOptions& opts) const {
    if (dim_at(dims, n) == 0) return 0.0;
    return spectral_density(laplacian(n), opts).betti();
}

double l2_torsion(const HilbertChainComplex& c, const SpectralOptions& opts) {
    c.validate();
    for (int n = 0; n <= c.top_degree(); ++n) {
        const double b = c.betti(n, opts);
        if (b > 1e-8) {
            std::ostringstream msg;
            msg << "complex is not acyclic: b(" << n << ") = " << b;
            throw std::invalid_argument(msg.str());
        }
    }
    double rho = 0;
    for (int n = 1; n <= c.top_degree(); ++n) {
        const double ld = spectral_density(diff_at(c, n), opts).log_det();
        rho -= (n % 2 == 0 ? 1.0 : -1.0) * ld;
    }
    return rho;
}

void ChainMap::validate(double tol) const {
    source.validate(tol);
    target.validate(tol);
    if (!source.model.same_as(target.model))
        throw std::invalid_argument("chain map between different models");
    const int top = std::max(source.top_degree(), target.top_degree());
    if (static_cast<int>(maps.size()) < top + 1)
        throw std::invalid_argument("chain map missing degrees");
    for (int n = 0; n <= top; ++n)
        if (maps[n].rows() != dim_at(target.dims, n) ||
            maps[n].cols() != dim_at(source.dims, n))
            throw std::invalid_argument("chain map shape mismatch");
    for (int n = 1; n <= top; ++n) {
        const VNMorphism lhs = maps[n - 1].compose(diff_at(source, n));
        const VNMorphism rhs = diff_at(target, n).compose(maps[n]);
        if (lhs.frobenius_distance(rhs) > tol)
            throw std::invalid_argument("not a chain map: phi c != d phi");
    }
}

HilbertChainComplex mapping_cone(const ChainMap& phi) {
    phi.validate();
    const HilbertChainComplex& c = phi.source;
    const HilbertChainComplex& d = phi.target;
    const int top = std::max(c.top_degree() + 1, d.top_degree());
    HilbertChainComplex cone;
    cone.model = c.model;
    cone.dims.resize(top + 1);
    for (int n = 0; n <= top; ++n)
        cone.dims[n] = dim_at(c.dims, n - 1) + dim_at(d.dims, n);
    for (int n = 1; n <= top; ++n) {
        VNMorphism del = VNMorphism::zero(cone.model, cone.dims[n - 1], cone.dims[n]);
        // (x, y) |-> (-c(x), d(y) - phi(x)), x in C_{n-1}, y in D_n.
        const int c_rows = dim_at(c.dims, n - 2);
        embed_block(del, diff_at(c, n - 1).scale(-1.0), 0, 0);
        embed_block(del, diff_at(d, n), c_rows, dim_at(c.dims, n - 1));
        const int pn = n - 1;
        const VNMorphism phi_n =
            pn < static_cast<int>(phi.maps.size())
                ? phi.maps[pn]
                : VNMorphism::zero(cone.model, dim_at(d.dims, pn), dim_at(c.dims, pn));
        embed_block(del, phi_n.scale(-1.0), c_rows, 0);
        cone.diffs.push_back(std::move(del));
    }
    return cone;
}

namespace {

// Assemble (c + gamma) restricted to odd (or even) total degree:
// x_n |-> c_n(x_n) + gamma_n(x_n), mapped into the opposite parity sum.
VNMorphism c_plus_gamma(const HilbertChainComplex& c,
                        const std::vector<VNMorphism>& gamma, int parity) {
    const int top = c.top_degree();
    std::vector<int> src_off, dst_off;
    int src_total = 0, dst_total = 0;
    for (int n = 0; n <= top + 1; ++n) {
        if (n % 2 == parity) {
            src_off.push_back(src_total);
            src_total += dim_at(c.dims, n);
        } else {
            dst_off.push_back(dst_total);
            dst_total += dim_at(c.dims, n);
        }
    }
    VNMorphism out = VNMorphism::zero(c.model, dst_total, src_total);
    for (int n = 0; n <= top; ++n) {
        if (n % 2 != parity) continue;
        const int si = n / 2;
        if (dim_at(c.dims, n) == 0) continue;
        if (n >= 1)  // c_n lands in degree n-1
            embed_block(out, diff_at(c, n), dst_off[(n - 1) / 2], src_off[si]);
        if (n < static_cast<int>(gamma.size()) && dim_at(c.dims, n + 1) > 0)
            embed_block(out, gamma[n], dst_off[(n + 1) / 2], src_off[si]);
    }
    return out;
}

}  // namespace

double contraction_torsion(const HilbertChainComplex& c,
                           const std::vector<VNMorphism>& gamma, double tol) {
    c.validate();
    const int top = c.top_degree();
    if (static_cast<int>(gamma.size()) < top)
        throw std::invalid_argument("contraction missing degrees");
    for (int n = 0; n <= top; ++n) {
        if (dim_at(c.dims, n) == 0) continue;
        VNMorphism lhs = VNMorphism::zero(c.model, c.dims[n], c.dims[n]);
        if (n < static_cast<int>(gamma.size()))
            lhs = lhs.add(diff_at(c, n + 1).compose(gamma[n]));
        if (n >= 1) lhs = lhs.add(gamma[n - 1].compose(diff_at(c, n)));
        if (!lhs.approx_equal(VNMorphism::identity(c.model, c.dims[n]), tol))
            throw std::invalid_argument("gamma is not a chain contraction");
    }
    const VNMorphism odd = c_plus_gamma(c, gamma, 1);
    const VNMorphism even = c_plus_gamma(c, gamma, 0);
    // (c+gamma)_odd (c+gamma)_even is unipotent; its spectrum must be {1}.
    const VNMorphism prod = odd.compose(even);
    for (int cell = 0; cell < prod.cell_count(); ++cell) {
        const auto& m = prod.block(cell);
        if (m.rows() == 0) continue;
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m);
        if (es.info() != Eigen::Success) throw std::runtime_error("eigensolve failed");
        for (int i = 0; i < es.eigenvalues().size(); ++i)
            if (std::abs(es.eigenvalues()(i) - 1.0) > tol)
                throw std::invalid_argument(
                    "(c+gamma)_odd (c+gamma)_even is not unipotent");
    }
    return spectral_density(odd).log_det();
}

std::vector<VNMorphism> pseudo_inverse_contraction(const HilbertChainComplex& c) {
    std::vector<VNMorphism> gamma;
    for (int n = 0; n < c.top_degree(); ++n) {
        const VNMorphism cn1 = diff_at(c, n + 1);  // C_{n+1} -> C_n
        VNMorphism g = VNMorphism::zero(c.model, cn1.cols(), cn1.rows());
        for (int cell = 0; cell < g.cell_count(); ++cell) {
            const auto& m = cn1.block(cell);
            if (m.rows() == 0 || m.cols() == 0) continue;
            g.block(cell) = m.completeOrthogonalDecomposition().pseudoInverse();
        }
        gamma.push_back(std::move(g));
    }
    // Top-degree gamma maps to the zero module above.
    gamma.push_back(VNMorphism::zero(c.model, 0, dim_at(c.dims, c.top_degree())));
    return gamma;
}

}  // namespace l2inv
