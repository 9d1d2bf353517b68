#pragma once

#include "l2inv/rational.hpp"

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <vector>

namespace l2inv {

/// One cell of a finite-dimensional *-algebra with weighted trace:
/// a full matrix block of the given dimension carrying a trace weight.
struct VNCell {
    Rat weight;
    int dim = 1;
};

/// Finite-dimensional model of a finite von Neumann algebra with trace
/// tr(x) = sum_c weight_c * tr(block_c).  Models are built so that
/// tr(1) equals the appropriate normalization for their source (1 for
/// probability-space algebras and group von Neumann algebras).
struct FiniteVNModel {
    std::vector<VNCell> cells;

    Rat trace_identity() const;
    bool same_as(const FiniteVNModel& other) const;

    static FiniteVNModel single_cell(const Rat& weight, int dim) {
        return FiniteVNModel{{VNCell{weight, dim}}};
    }
};

/// Morphism of Hilbert modules over a FiniteVNModel: model^cols -> model^rows.
/// One dense complex block per cell, of size (rows*dim) x (cols*dim),
/// with multiplicity-major index layout (index = mult*dim + inner).
class VNMorphism {
  public:
    VNMorphism(FiniteVNModel model, int rows, int cols);

    static VNMorphism identity(const FiniteVNModel& model, int n);
    static VNMorphism zero(const FiniteVNModel& model, int rows, int cols);

    const FiniteVNModel& model() const { return model_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Eigen::MatrixXcd& block(int c) { return blocks_[c]; }
    const Eigen::MatrixXcd& block(int c) const { return blocks_[c]; }
    int cell_count() const { return static_cast<int>(blocks_.size()); }

    VNMorphism compose(const VNMorphism& other) const;  // this * other
    VNMorphism adjoint() const;
    VNMorphism add(const VNMorphism& other) const;
    VNMorphism scale(std::complex<double> s) const;
    VNMorphism operator*(const VNMorphism& o) const { return compose(o); }

    /// Weighted trace (square morphisms).
    std::complex<double> trace() const;
    /// Weighted trace of (this this*)^m.
    double delta_moment(int m) const;

    /// Direct sum along the multiplicity axis (same model).
    VNMorphism direct_sum(const VNMorphism& other) const;

    bool is_projection(double tol = 1e-10) const;
    bool approx_equal(const VNMorphism& other, double tol = 1e-10) const;
    double frobenius_distance(const VNMorphism& other) const;
    double operator_norm() const;  // largest singular value over all cells

    /// Total von Neumann dimension of the domain: sum_c weight_c*cols*dim_c.
    double domain_dim() const;

  private:
    FiniteVNModel model_;
    int rows_, cols_;
    std::vector<Eigen::MatrixXcd> blocks_;
};

/// Right-continuous step function F(lambda) given by its jumps.
struct SpectralDensity {
    struct Jump {
        double lambda;
        double weight;
    };
    std::vector<Jump> jumps;  // sorted by lambda
    double total_dim = 0;     // F(+infinity)

    double value(double lambda) const;  // F(lambda)
    double betti() const { return value(0.0); }
    double log_det() const;  // sum over positive jumps of w*ln(lambda)
    double det() const;
};

struct SpectralOptions {
    double clamp_abs = 1e-12;
    double clamp_rel = 1e-12;  // relative to the largest eigenvalue of f*f
};

/// Spectral density of a morphism: cellwise Hermitian eigensolve of f*f,
/// jump at sqrt(mu) with weight = cell weight per eigenvalue.
SpectralDensity spectral_density(const VNMorphism& f, const SpectralOptions& opts = {});

double fk_det(const SpectralDensity& f);
double betti(const SpectralDensity& f);

inline double fk_det(const VNMorphism& f) { return fk_det(spectral_density(f)); }
inline double betti_number(const VNMorphism& f) { return betti(spectral_density(f)); }
inline double log_fk_det(const VNMorphism& f) { return spectral_density(f).log_det(); }

/// Result of compressing a morphism by a projection.
struct RestrictedMorphism {
    VNMorphism compressed;  // over the renormalized compressed model
    Rat scaling;            // tr(p); ln det f = scaling * ln det f|_p for full p
    bool full = false;      // p hits every cell
};

/// Compress f by a cellwise orthogonal projection p on its domain.
/// The compressed model renormalizes the trace by 1/tr(p).
RestrictedMorphism restrict_by(const VNMorphism& f, const VNMorphism& p);

/// Trace-preserving embedding of one model into another, applied to
/// morphisms entrywise; used for induction (spectral density is preserved).
struct TraceEmbedding {
    FiniteVNModel target;
    std::function<VNMorphism(const VNMorphism&)> map;
};

/// Push f forward along the embedding after verifying trace preservation
/// on the supplied generators (to 1e-12).
VNMorphism induce(const VNMorphism& f, const TraceEmbedding& embedding,
                  const std::vector<VNMorphism>& generators);

/// Kernel basis (orthonormal columns per cell) of f, via f*f eigensolve.
std::vector<Eigen::MatrixXcd> kernel_basis(const VNMorphism& f,
                                           const SpectralOptions& opts = {});

}  // namespace l2inv
