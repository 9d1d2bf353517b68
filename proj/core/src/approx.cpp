#include "l2inv/approx.hpp"

#include <cmath>
#include <numbers>

namespace l2inv {

namespace {

long long pow_ll(long long b, int e) {
    long long r = 1;
    while (e-- > 0) r *= b;
    return r;
}

// Mixed-radix index of an exponent vector reduced into [0,n)^k.
long long box_index(const GroupElem& e, int n) {
    long long idx = 0;
    for (long long x : e) {
        long long r = x % n;
        if (r < 0) r += n;
        idx = idx * n + r;
    }
    return idx;
}

}  // namespace

VNMorphism regular_rep(const GroupRingMatrix& a) {
    const Group& g = a.group();
    if (!g.is_finite()) throw std::invalid_argument("regular_rep needs a finite group");
    const int ord = g.order();
    const auto& tab = g.table();
    FiniteVNModel model = FiniteVNModel::single_cell(Rat(1) / ord, ord);
    VNMorphism f(model, a.rows(), a.cols());
    auto& b = f.block(0);
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            for (const auto& [e, c] : a.at(i, j).terms()) {
                const int ge = static_cast<int>(e[0]);
                const double cd = to_double(c);
                // Right multiplication by ge: basis h -> h*ge.
                for (int h = 0; h < ord; ++h)
                    b(i * ord + tab.mul[h][ge], j * ord + h) += cd;
            }
    return f;
}

VNMorphism quotient_pushforward(const GroupRingMatrix& a, int n) {
    const Group& g = a.group();
    if (g.is_finite()) throw std::invalid_argument("quotient_pushforward needs Z^k");
    if (n < 1) throw std::invalid_argument("modulus must be >= 1");
    const int k = g.rank();
    const long long ord = pow_ll(n, k);
    FiniteVNModel model = FiniteVNModel::single_cell(Rat(1) / Rat(Int(ord)),
                                                     static_cast<int>(ord));
    VNMorphism f(model, a.rows(), a.cols());
    auto& b = f.block(0);
    // Regular representation of (Z/n)^k: basis h -> h+e (componentwise mod n).
    std::vector<GroupElem> basis(ord, GroupElem(k));
    for (long long h = 0; h < ord; ++h) {
        long long t = h;
        for (int i = k - 1; i >= 0; --i) {
            basis[h][i] = t % n;
            t /= n;
        }
    }
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            for (const auto& [e, c] : a.at(i, j).terms()) {
                const double cd = to_double(c);
                for (long long h = 0; h < ord; ++h) {
                    GroupElem he(k);
                    for (int t = 0; t < k; ++t) he[t] = basis[h][t] + e[t];
                    b(i * ord + box_index(he, n), j * ord + h) += cd;
                }
            }
    return f;
}

SpectralDensity quotient_density(const GroupRingMatrix& a, int n,
                                 const SpectralOptions& opts) {
    const Group& g = a.group();
    if (g.is_finite()) throw std::invalid_argument("quotient_density needs Z^k");
    const int k = g.rank();
    const long long nf = pow_ll(n, k);
    const double w = 1.0 / static_cast<double>(nf);
    const std::complex<double> two_pi_i(0.0, 2.0 * std::numbers::pi / n);

    std::vector<double> evs;
    evs.reserve(nf * a.cols());
    double max_ev = 0;
    std::vector<long long> freq(k, 0);
    for (long long idx = 0; idx < nf; ++idx) {
        long long t = idx;
        for (int i = k - 1; i >= 0; --i) {
            freq[i] = t % n;
            t /= n;
        }
        Eigen::MatrixXcd m(a.rows(), a.cols());
        for (int i = 0; i < a.rows(); ++i)
            for (int j = 0; j < a.cols(); ++j) {
                std::complex<double> v = 0;
                for (const auto& [e, c] : a.at(i, j).terms()) {
                    long long phase = 0;
                    for (int q = 0; q < k; ++q) phase += freq[q] * e[q];
                    v += to_double(c) * std::exp(two_pi_i * static_cast<double>(phase % n));
                }
                m(i, j) = v;
            }
        Eigen::MatrixXcd h = m.adjoint() * m;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) throw std::runtime_error("eigensolve failed");
        for (int i = 0; i < es.eigenvalues().size(); ++i) {
            evs.push_back(es.eigenvalues()(i));
            max_ev = std::max(max_ev, std::abs(es.eigenvalues()(i)));
        }
    }
    SpectralDensity out;
    out.total_dim = a.cols();
    const double clamp = std::max(opts.clamp_abs, opts.clamp_rel * max_ev);
    for (double mu : evs) {
        const double lambda = std::abs(mu) <= clamp ? 0.0 : std::sqrt(std::max(mu, 0.0));
        out.jumps.push_back({lambda, w});
    }
    std::sort(out.jumps.begin(), out.jumps.end(),
              [](const SpectralDensity::Jump& x, const SpectralDensity::Jump& y) {
                  return x.lambda < y.lambda;
              });
    return out;
}

VNMorphism folner_compress(const GroupRingMatrix& a, int n) {
    const Group& g = a.group();
    if (g.is_finite()) throw std::invalid_argument("folner_compress needs Z^k");
    if (n < 1) throw std::invalid_argument("box side must be >= 1");
    const int k = g.rank();
    const long long nf = pow_ll(n, k);
    FiniteVNModel model =
        FiniteVNModel::single_cell(Rat(1) / Rat(Int(nf)), static_cast<int>(nf));
    VNMorphism f(model, a.rows(), a.cols());
    auto& b = f.block(0);
    // Enumerate box points once.
    std::vector<GroupElem> pts(nf, GroupElem(k));
    for (long long h = 0; h < nf; ++h) {
        long long t = h;
        for (int i = k - 1; i >= 0; --i) {
            pts[h][i] = t % n;
            t /= n;
        }
    }
    GroupElem diff(k);
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            const auto& entry = a.at(i, j);
            if (entry.is_zero()) continue;
            for (long long s = 0; s < nf; ++s)
                for (long long t = 0; t < nf; ++t) {
                    for (int q = 0; q < k; ++q) diff[q] = pts[t][q] - pts[s][q];
                    const Rat c = entry.coeff(diff);
                    if (c != 0) b(i * nf + s, j * nf + t) = to_double(c);
                }
        }
    return f;
}

VNMorphism res_p(const GroupRingMatrix& f_over_q, const Group& g,
                 const std::vector<int>& kernel, const std::vector<int>& projection) {
    const Group& q = f_over_q.group();
    if (!g.is_finite() || !q.is_finite())
        throw std::invalid_argument("res_p needs finite groups");
    const int ng = g.order(), nq = q.order();
    if (static_cast<int>(projection.size()) != ng)
        throw std::invalid_argument("projection must be defined on all of G");
    // Projection must be a surjective homomorphism with the given kernel.
    std::vector<bool> hit(nq, false);
    for (int a = 0; a < ng; ++a) {
        if (projection[a] < 0 || projection[a] >= nq)
            throw std::invalid_argument("projection out of range");
        hit[projection[a]] = true;
        for (int b2 = 0; b2 < ng; ++b2)
            if (projection[g.table().mul[a][b2]] !=
                q.table().mul[projection[a]][projection[b2]])
                throw std::invalid_argument("projection is not a homomorphism");
    }
    for (bool h : hit)
        if (!h) throw std::invalid_argument("projection is not surjective (quotient mismatch)");
    std::vector<int> ker_actual;
    for (int a = 0; a < ng; ++a)
        if (projection[a] == q.table().identity) ker_actual.push_back(a);
    std::vector<int> ker_sorted = kernel;
    std::sort(ker_sorted.begin(), ker_sorted.end());
    if (ker_sorted != ker_actual) throw std::invalid_argument("kernel mismatch");
    if (!is_normal_subgroup(g, kernel)) throw std::invalid_argument("K is not normal");
    const int nk = static_cast<int>(kernel.size());
    if (ng != nk * nq) throw std::invalid_argument("|G| != |K|*|Q|");

    // Lift entrywise: s(u) = sum_g lambda_{p(g)} g.
    GroupRingMatrix lifted(g, f_over_q.rows(), f_over_q.cols());
    for (int i = 0; i < f_over_q.rows(); ++i)
        for (int j = 0; j < f_over_q.cols(); ++j) {
            GroupRingElement::Terms terms;
            for (int a = 0; a < ng; ++a) {
                const Rat c = f_over_q.at(i, j).coeff({projection[a]});
                if (c != 0) terms.emplace(GroupElem{a}, c);
            }
            lifted.at(i, j) = GroupRingElement(std::move(terms));
        }
    const VNMorphism rep = regular_rep(lifted).scale(1.0 / nk);

    // Compress to the K-fixed subspace: b_q = |K|^{-1/2} sum_{p(g)=q} g.
    Eigen::MatrixXcd basis = Eigen::MatrixXcd::Zero(ng, nq);
    const double inv_sqrt_k = 1.0 / std::sqrt(static_cast<double>(nk));
    for (int a = 0; a < ng; ++a) basis(a, projection[a]) = inv_sqrt_k;

    FiniteVNModel model = FiniteVNModel::single_cell(Rat(1) / ng, nq);
    VNMorphism out(model, f_over_q.rows(), f_over_q.cols());
    Eigen::MatrixXcd big_basis_rows =
        Eigen::MatrixXcd::Zero(f_over_q.rows() * ng, f_over_q.rows() * nq);
    Eigen::MatrixXcd big_basis_cols =
        Eigen::MatrixXcd::Zero(f_over_q.cols() * ng, f_over_q.cols() * nq);
    for (int i = 0; i < f_over_q.rows(); ++i)
        big_basis_rows.block(i * ng, i * nq, ng, nq) = basis;
    for (int j = 0; j < f_over_q.cols(); ++j)
        big_basis_cols.block(j * ng, j * nq, ng, nq) = basis;
    out.block(0) = big_basis_rows.adjoint() * rep.block(0) * big_basis_cols;
    return out;
}

Rat res_p_trace(const GroupRingMatrix& f_over_q, const Group& g,
                const std::vector<int>& kernel, const std::vector<int>& projection) {
    const Group& q = f_over_q.group();
    if (!g.is_finite() || !q.is_finite())
        throw std::invalid_argument("res_p_trace needs finite groups");
    const int ng = g.order(), nq = q.order();
    const int nk = static_cast<int>(kernel.size());
    if (static_cast<int>(projection.size()) != ng || ng != nk * nq)
        throw std::invalid_argument("projection/kernel sizes inconsistent");
    // Diagonal entry of the compressed operator at (i, q):
    //   (1/|K|^2) sum_{p(a)=q, p(b)=q} coeff_{a b^{-1}} of the lifted entry,
    // where the lift carries coeff(g) = f_ii.coeff(p(g)). All rational.
    std::vector<std::vector<int>> fiber(nq);
    for (int a = 0; a < ng; ++a) fiber[projection[a]].push_back(a);
    Rat tr = 0;
    const Rat cell_weight = Rat(1, ng);
    for (int i = 0; i < f_over_q.rows(); ++i) {
        const GroupRingElement& fii = f_over_q.at(i, i);
        for (int qq = 0; qq < nq; ++qq) {
            Rat diag = 0;
            for (int a : fiber[qq])
                for (int b2 : fiber[qq]) {
                    const int ab_inv = g.table().mul[a][g.table().inv[b2]];
                    diag += fii.coeff({projection[ab_inv]});
                }
            tr += cell_weight * diag / (Rat(nk) * nk);
        }
    }
    return tr;
}

Rat exact_normalized_moment(const GroupRingMatrix& delta, int m) {
    return delta.power_trace(m) / delta.rows();
}

Rat exact_quotient_moment(const GroupRingMatrix& delta, int n, int m) {
    const Group& g = delta.group();
    if (g.is_finite()) throw std::invalid_argument("exact_quotient_moment needs Z^k");
    const int k = g.rank();
    const int d = delta.rows();
    if (delta.cols() != d) throw std::invalid_argument("delta must be square");
    auto reduce = [&](const GroupElem& e) {
        GroupElem r(k);
        for (int i = 0; i < k; ++i) {
            long long x = e[i] % n;
            if (x < 0) x += n;
            r[i] = x;
        }
        return r;
    };
    using Entry = std::map<GroupElem, Rat>;
    auto mat_of = [&](const GroupRingMatrix& a) {
        std::vector<Entry> out(d * d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (const auto& [e, c] : a.at(i, j).terms()) {
                    auto r = reduce(e);
                    auto& slot = out[i * d + j][r];
                    slot += c;
                    if (slot == 0) out[i * d + j].erase(r);
                }
        return out;
    };
    const std::vector<Entry> base = mat_of(delta);
    std::vector<Entry> acc = base;
    for (int step = 1; step < m; ++step) {
        std::vector<Entry> next(d * d);
        for (int i = 0; i < d; ++i)
            for (int t = 0; t < d; ++t) {
                const Entry& a = acc[i * d + t];
                if (a.empty()) continue;
                for (int j = 0; j < d; ++j) {
                    const Entry& b = base[t * d + j];
                    if (b.empty()) continue;
                    Entry& dst = next[i * d + j];
                    for (const auto& [e1, c1] : a)
                        for (const auto& [e2, c2] : b) {
                            GroupElem e(k);
                            for (int qd = 0; qd < k; ++qd)
                                e[qd] = (e1[qd] + e2[qd]) % n;
                            auto& slot = dst[e];
                            slot += c1 * c2;
                            if (slot == 0) dst.erase(e);
                        }
                }
            }
        acc = std::move(next);
    }
    Rat tr = 0;
    const GroupElem zero(k, 0);
    for (int i = 0; i < d; ++i) {
        auto it = acc[i * d + i].find(zero);
        if (it != acc[i * d + i].end()) tr += it->second;
    }
    return tr / d;
}

namespace {

// Rank over Q by fraction-free Gaussian elimination.
long long rational_rank(std::vector<std::vector<Rat>> m) {
    const size_t rows = m.size();
    if (rows == 0) return 0;
    const size_t cols = m[0].size();
    long long rank = 0;
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t pivot = r;
        while (pivot < rows && m[pivot][c] == 0) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[pivot], m[r]);
        for (size_t i = r + 1; i < rows; ++i) {
            if (m[i][c] == 0) continue;
            const Rat factor = m[i][c] / m[r][c];
            for (size_t j = c; j < cols; ++j) m[i][j] -= factor * m[r][j];
        }
        ++r;
        ++rank;
    }
    return rank;
}

std::vector<std::vector<Rat>> regular_rep_exact(const GroupRingMatrix& a) {
    const Group& g = a.group();
    const int ord = g.order();
    const auto& tab = g.table();
    std::vector<std::vector<Rat>> m(a.rows() * ord, std::vector<Rat>(a.cols() * ord, 0));
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            for (const auto& [e, c] : a.at(i, j).terms())
                for (int h = 0; h < ord; ++h)
                    m[i * ord + tab.mul[h][static_cast<int>(e[0])]][j * ord + h] += c;
    return m;
}

}  // namespace

Rat exact_betti_regular(const GroupRingMatrix& a) {
    const Group& g = a.group();
    if (!g.is_finite()) throw std::invalid_argument("exact_betti_regular needs a finite group");
    const int ord = g.order();
    const long long rank = rational_rank(regular_rep_exact(a));
    return (Rat(a.cols()) * ord - rank) / ord;
}

Rat exact_betti_quotient(const GroupRingMatrix& a, int n) {
    const Group& g = a.group();
    if (g.is_finite()) throw std::invalid_argument("exact_betti_quotient needs Z^k");
    const int k = g.rank();
    const long long nf = pow_ll(n, k);
    std::vector<std::vector<Rat>> m(a.rows() * nf, std::vector<Rat>(a.cols() * nf, 0));
    std::vector<GroupElem> pts(nf, GroupElem(k));
    for (long long h = 0; h < nf; ++h) {
        long long t = h;
        for (int i = k - 1; i >= 0; --i) {
            pts[h][i] = t % n;
            t /= n;
        }
    }
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            for (const auto& [e, c] : a.at(i, j).terms())
                for (long long h = 0; h < nf; ++h) {
                    GroupElem he(k);
                    for (int t = 0; t < k; ++t) he[t] = pts[h][t] + e[t];
                    m[i * nf + box_index(he, n)][j * nf + h] += c;
                }
    const long long rank = rational_rank(std::move(m));
    return (Rat(a.cols()) * Rat(Int(nf)) - rank) / Rat(Int(nf));
}

ConvergenceReport run_approximation(const GroupRingMatrix& a,
                                    const ApproximationScheme& scheme,
                                    const ApproximationOptions& opts) {
    using Kind = ApproximationScheme::Kind;
    const Group& g = a.group();
    if (scheme.kind == Kind::RegularRep && !g.is_finite())
        throw std::invalid_argument("RegularRep scheme needs a finite group");
    if (scheme.kind != Kind::RegularRep && g.is_finite())
        throw std::invalid_argument("quotient/folner schemes need Z^k");

    ConvergenceReport rep;
    const GroupRingMatrix delta = a.delta();
    const Rat nb = a.norm_bound();
    rep.norm_bound_k = nb * nb;
    const int m_exact = std::min(opts.max_moment, opts.exact_moment_limit);
    for (int m = 1; m <= m_exact; ++m)
        rep.target_moments.push_back(exact_normalized_moment(delta, m));

    std::vector<int> stages = scheme.stages;
    if (scheme.kind == Kind::RegularRep) stages = {0};

    int index = 0;
    for (int n : stages) {
        ConvergenceStage st;
        st.index = index++;
        st.stage_param = n;
        SpectralDensity dens;
        switch (scheme.kind) {
            case Kind::RegularRep: {
                dens = spectral_density(regular_rep(a), opts.spectral);
                st.model_dim = static_cast<long long>(a.rows()) * g.order();
                for (int m = 1; m <= m_exact; ++m)
                    st.exact_moments.push_back(exact_normalized_moment(delta, m));
                break;
            }
            case Kind::QuotientChain: {
                dens = quotient_density(a, n, opts.spectral);
                st.model_dim = static_cast<long long>(a.rows()) * pow_ll(n, g.rank());
                for (int m = 1; m <= m_exact; ++m)
                    st.exact_moments.push_back(exact_quotient_moment(delta, n, m));
                break;
            }
            case Kind::FolnerBoxes: {
                dens = spectral_density(folner_compress(a, n), opts.spectral);
                st.model_dim = static_cast<long long>(a.rows()) * pow_ll(n, g.rank());
                break;
            }
        }
        const double dnorm = static_cast<double>(a.cols());
        for (int m = 1; m <= opts.max_moment; ++m) {
            double s = 0;
            for (const auto& j : dens.jumps) s += j.weight * std::pow(j.lambda, 2 * m);
            st.moments.push_back(s / dnorm);
        }
        st.betti = dens.betti();
        st.logdet = dens.log_det();
        double sr = 0;
        for (const auto& j : dens.jumps) sr = std::max(sr, j.lambda * j.lambda);
        st.spectral_radius = sr;
        rep.stages.push_back(std::move(st));
    }

    rep.norm_bound_ok = true;
    for (const auto& st : rep.stages)
        if (st.spectral_radius > to_double(rep.norm_bound_k) + 1e-9) rep.norm_bound_ok = false;

    // Moments Cauchy: successive-stage max differences below tolerance for
    // the configured number of consecutive stage pairs.
    int run = 0;
    rep.moments_cauchy = rep.stages.size() == 1;
    for (size_t i = 1; i < rep.stages.size(); ++i) {
        double diff = 0;
        for (size_t m = 0; m < rep.stages[i].moments.size(); ++m)
            diff = std::max(diff,
                            std::abs(rep.stages[i].moments[m] - rep.stages[i - 1].moments[m]));
        run = diff < opts.cauchy_tol ? run + 1 : 0;
        if (run >= opts.cauchy_run || (run > 0 && i + 1 == rep.stages.size() &&
                                       rep.stages.size() <= static_cast<size_t>(opts.cauchy_run)))
            rep.moments_cauchy = true;
    }

    rep.dets_at_least_one = true;
    for (const auto& st : rep.stages)
        if (st.logdet < -1e-9) rep.dets_at_least_one = false;

    if (!rep.stages.empty()) {
        rep.limiting_betti = rep.stages.back().betti;
        double mn = rep.stages.back().logdet;
        const size_t tail = std::min<size_t>(opts.cauchy_run, rep.stages.size());
        for (size_t i = rep.stages.size() - tail; i < rep.stages.size(); ++i)
            mn = std::min(mn, rep.stages[i].logdet);
        rep.liminf_logdet = mn;
    }
    return rep;
}

}  // namespace l2inv
