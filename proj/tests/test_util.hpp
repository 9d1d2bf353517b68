#pragma once

#include "l2inv/finvn.hpp"
#include "l2inv/group_ring.hpp"
#include "l2inv/torsion.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>

namespace testutil {

inline Eigen::MatrixXcd random_complex(std::mt19937_64& rng, int rows, int cols) {
    std::normal_distribution<double> gauss;
    Eigen::MatrixXcd m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = {gauss(rng), gauss(rng)};
    return m;
}

inline Eigen::MatrixXcd random_unitary(std::mt19937_64& rng, int n) {
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(random_complex(rng, n, n));
    return Eigen::MatrixXcd(qr.householderQ());
}

/// Random integer matrix with |det| bounded away from zero.
inline Eigen::MatrixXcd random_invertible(std::mt19937_64& rng, int n) {
    std::uniform_int_distribution<int> coeff(-2, 2);
    while (true) {
        Eigen::MatrixXcd m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = static_cast<double>(coeff(rng));
        if (std::abs(m.determinant()) >= 0.5) return m;
    }
}

struct RandomAcyclic {
    l2inv::HilbertChainComplex complex;
    double oracle_torsion = 0;  // -sum (-1)^n ln|det g_n| from the construction
};

/// Acyclic complex C_n = V_n (+) V_{n+1} with c_n(x, y) = (0, g_n x) for
/// invertible g_n, V_0 = V_{N+1} = 0.  Exactly acyclic by construction and
/// the torsion has the closed form recorded in oracle_torsion.
inline RandomAcyclic random_acyclic_complex(std::mt19937_64& rng, int top_degree,
                                            int max_dim,
                                            const l2inv::FiniteVNModel& model) {
    const int big = top_degree;  // V_1..V_N nonzero
    std::uniform_int_distribution<int> dim_dist(1, max_dim);
    std::vector<int> v(big + 2, 0);  // v[0] = v[N+1] = 0
    for (int n = 1; n <= big; ++n) v[n] = dim_dist(rng);

    RandomAcyclic out;
    out.complex.model = model;
    out.complex.dims.resize(big + 1);
    for (int n = 0; n <= big; ++n) out.complex.dims[n] = v[n] + v[n + 1];

    // Per-cell block dimension of the model (all helper models here are
    // single-cell); differentials act as scalar blocks times the identity
    // of the cell.
    for (int n = 0; n + 1 <= big; ++n) {
        // diffs[n]: degree n+1 -> n carries g_{n+1} from V_{n+1} to the
        // V_{n+1} summand of C_n.
        l2inv::VNMorphism d = l2inv::VNMorphism::zero(
            model, out.complex.dims[n], out.complex.dims[n + 1]);
        const int vn1 = v[n + 1];
        Eigen::MatrixXcd g = random_invertible(rng, vn1);
        out.oracle_torsion -=
            ((n + 1) % 2 == 0 ? 1.0 : -1.0) * std::log(std::abs(g.determinant()));
        for (int c = 0; c < d.cell_count(); ++c) {
            const int dim = model.cells[c].dim;
            for (int i = 0; i < vn1; ++i)
                for (int j = 0; j < vn1; ++j)
                    d.block(c).block((v[n] + i) * dim, j * dim, dim, dim) =
                        g(i, j) * Eigen::MatrixXcd::Identity(dim, dim);
        }
        out.complex.diffs.push_back(std::move(d));
    }
    return out;
}

/// Null-homotopic chain map phi = d sigma + sigma c for random integer
/// sigma[n]: C_n -> D_{n+1} (always a chain map).
inline l2inv::ChainMap random_null_homotopic(std::mt19937_64& rng,
                                             const l2inv::HilbertChainComplex& c,
                                             const l2inv::HilbertChainComplex& d) {
    const int big = c.top_degree();
    std::uniform_int_distribution<int> coeff(-2, 2);
    std::vector<l2inv::VNMorphism> sigma;
    for (int n = 0; n <= big; ++n) {
        const int rows = n + 1 <= big ? d.dims[n + 1] : 0;
        l2inv::VNMorphism s = l2inv::VNMorphism::zero(c.model, rows, c.dims[n]);
        for (int cell = 0; cell < s.cell_count(); ++cell)
            for (int i = 0; i < s.block(cell).rows(); ++i)
                for (int j = 0; j < s.block(cell).cols(); ++j)
                    s.block(cell)(i, j) = static_cast<double>(coeff(rng));
        sigma.push_back(std::move(s));
    }
    l2inv::ChainMap phi{c, d, {}};
    for (int n = 0; n <= big; ++n) {
        l2inv::VNMorphism f = l2inv::VNMorphism::zero(c.model, d.dims[n], c.dims[n]);
        if (n + 1 <= big) f = f.add(d.diffs[n].compose(sigma[n]));
        if (n >= 1) f = f.add(sigma[n - 1].compose(c.diffs[n - 1]));
        phi.maps.push_back(std::move(f));
    }
    return phi;
}

}  // namespace testutil
