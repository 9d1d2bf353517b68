#include "l2inv/harness.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace l2inv {

std::vector<std::pair<std::string, Group>> fuzz_group_catalog() {
    std::vector<std::pair<std::string, Group>> out;
    out.emplace_back("trivial", Group::trivial());
    for (int n : {2, 3, 4, 5, 6, 8, 12, 24})
        out.emplace_back("Z/" + std::to_string(n), Group::cyclic(n));
    for (int n : {3, 4, 6})
        out.emplace_back("D" + std::to_string(n), Group::dihedral(n));
    out.emplace_back("Q8", Group::quaternion8());
    out.emplace_back("S3", Group::symmetric(3));
    out.emplace_back("S4", Group::symmetric(4));
    out.emplace_back("Z/2 x Z/2",
                     Group::direct_product(Group::cyclic(2), Group::cyclic(2)));
    out.emplace_back("Z/2 x Z/4",
                     Group::direct_product(Group::cyclic(2), Group::cyclic(4)));
    out.emplace_back("Z/3 x Z/3",
                     Group::direct_product(Group::cyclic(3), Group::cyclic(3)));
    return out;
}

GroupRingMatrix random_group_ring_matrix(std::mt19937_64& rng, const Group& g,
                                         int rows, int cols, int max_coeff,
                                         int max_support, int max_exponent) {
    std::uniform_int_distribution<int> coeff(-max_coeff, max_coeff);
    std::uniform_int_distribution<int> nterms(0, max_support);
    GroupRingMatrix a(g, rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            GroupRingElement e;
            const int terms = nterms(rng);
            for (int t = 0; t < terms; ++t) {
                GroupElem el;
                if (g.is_finite()) {
                    std::uniform_int_distribution<int> pick(0, g.order() - 1);
                    el = {pick(rng)};
                } else {
                    std::uniform_int_distribution<long long> exp(-max_exponent,
                                                                 max_exponent);
                    el.resize(g.rank());
                    for (int q = 0; q < g.rank(); ++q) el[q] = exp(rng);
                }
                const int c = coeff(rng);
                if (c != 0)
                    e = e.add(GroupRingElement::monomial(g, el, Rat(c)));
            }
            a.at(i, j) = e;
        }
    return a;
}

FiniteRelation random_relation(std::mt19937_64& rng, int max_points) {
    std::uniform_int_distribution<int> npoints(2, max_points);
    const int n = npoints(rng);
    std::vector<int> pts(n);
    std::iota(pts.begin(), pts.end(), 0);
    std::shuffle(pts.begin(), pts.end(), rng);
    std::vector<std::vector<int>> classes;
    for (int i = 0; i < n;) {
        std::uniform_int_distribution<int> len(1, n - i);
        const int l = len(rng);
        std::vector<int> cls(pts.begin() + i, pts.begin() + i + l);
        std::sort(cls.begin(), cls.end());
        classes.push_back(std::move(cls));
        i += l;
    }
    return FiniteRelation(std::vector<Rat>(n, Rat(1) / n), std::move(classes));
}

GroupoidMatrix random_groupoid_matrix(std::mt19937_64& rng, const FiniteRelation& r,
                                      int rows, int cols, int max_coeff) {
    std::uniform_int_distribution<int> coeff(-max_coeff, max_coeff);
    std::uniform_int_distribution<int> fill(0, 2);  // keep blocks sparse-ish
    GroupoidMatrix f(r, rows, cols);
    for (const auto& cls : r.classes())
        for (int x : cls)
            for (int y : cls) {
                if (fill(rng) == 0) continue;
                for (int i = 0; i < rows; ++i)
                    for (int j = 0; j < cols; ++j) f.set(x, y, i, j, Rat(coeff(rng)));
            }
    return f;
}

namespace {

// Product of eigenvalues above the clamp, of a PSD real matrix.
double positive_eigenvalue_product(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    double max_ev = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        max_ev = std::max(max_ev, std::abs(es.eigenvalues()(i)));
    const double clamp = std::max(1e-12, 1e-9 * max_ev);
    double prod = 1;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) > clamp) prod *= es.eigenvalues()(i);
    return prod;
}

}  // namespace

FuzzReport detconj_fuzz(std::uint64_t seed, int samples, int gram_samples) {
    FuzzReport rep;
    rep.seed = seed;
    rep.samples = samples;
    rep.gram_samples = gram_samples;
    rep.min_det = std::numeric_limits<double>::infinity();
    rep.min_gram_product = std::numeric_limits<double>::infinity();

    std::mt19937_64 rng(seed);
    const auto catalog = fuzz_group_catalog();
    std::uniform_int_distribution<int> dim(1, 3);
    // 0..catalog-1: finite groups; then Z and Z^2 via quotient stages.
    std::uniform_int_distribution<size_t> pick(0, catalog.size() + 1);

    for (int s = 0; s < samples; ++s) {
        const size_t which = pick(rng);
        const int rows = dim(rng), cols = dim(rng);
        std::string name;
        std::vector<double> dets;
        if (which < catalog.size()) {
            name = catalog[which].first;
            const auto a = random_group_ring_matrix(rng, catalog[which].second,
                                                    rows, cols);
            dets.push_back(fk_det(regular_rep(a)));
        } else {
            const int k = which == catalog.size() ? 1 : 2;
            name = k == 1 ? "Z" : "Z^2";
            const auto a = random_group_ring_matrix(
                rng, Group::free_abelian(k), rows, cols, 3, 4, 2);
            for (int n : (k == 1 ? std::vector<int>{2, 3, 5, 8}
                                 : std::vector<int>{2, 3}))
                dets.push_back(fk_det(quotient_density(a, n)));
        }
        for (double d : dets) {
            rep.min_det = std::min(rep.min_det, d);
            if (d < 1.0 - 1e-9) {
                std::ostringstream msg;
                msg << "det " << d << " < 1 over " << name << " (" << rows << "x"
                    << cols << ")";
                rep.violations.push_back({s, msg.str(), d});
            }
        }
    }

    std::uniform_int_distribution<int> gdim(1, 6), gcoeff(-3, 3);
    for (int s = 0; s < gram_samples; ++s) {
        const int n = gdim(rng), m = gdim(rng);
        Eigen::MatrixXd b(n, m);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < m; ++j) b(i, j) = gcoeff(rng);
        const double prod = positive_eigenvalue_product(b * b.transpose());
        rep.min_gram_product = std::min(rep.min_gram_product, prod);
        if (prod < 1.0 - 1e-9) {
            std::ostringstream msg;
            msg << "integer Gram positive-eigenvalue product " << prod << " < 1";
            rep.violations.push_back({s, msg.str(), prod});
        }
    }
    return rep;
}

double mahler_measure(const std::vector<Rat>& coeffs) {
    // Strip zero leading/trailing coefficients (powers of t do not change
    // the measure).
    size_t lo = 0, hi = coeffs.size();
    while (lo < hi && coeffs[lo] == 0) ++lo;
    while (hi > lo && coeffs[hi - 1] == 0) --hi;
    if (lo == hi) throw std::invalid_argument("zero polynomial");
    const std::vector<Rat> c(coeffs.begin() + lo, coeffs.begin() + hi);
    const int d = static_cast<int>(c.size()) - 1;
    double measure = std::abs(to_double(c[d]));
    if (d == 0) return measure;
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(d, d);
    for (int i = 1; i < d; ++i) companion(i, i - 1) = 1;
    for (int i = 0; i < d; ++i) companion(i, d - 1) = -to_double(c[i] / c[d]);
    Eigen::EigenSolver<Eigen::MatrixXd> es(companion);
    if (es.info() != Eigen::Success) throw std::runtime_error("root solve failed");
    for (int i = 0; i < d; ++i)
        measure *= std::max(1.0, std::abs(es.eigenvalues()(i)));
    return measure;
}

MahlerReport mahler_report(const std::vector<Rat>& coeffs,
                           const std::vector<int>& stages) {
    MahlerReport rep;
    rep.oracle = mahler_measure(coeffs);
    const Group z = Group::free_abelian(1);
    GroupRingMatrix a(z, 1, 1);
    GroupRingElement e;
    for (size_t i = 0; i < coeffs.size(); ++i)
        if (coeffs[i] != 0)
            e = e.add(GroupRingElement::monomial(
                z, {static_cast<long long>(i)}, coeffs[i]));
    a.at(0, 0) = e;
    for (int n : stages)
        rep.stages.push_back({n, fk_det(quotient_density(a, n))});
    rep.final_det = rep.stages.empty() ? 0.0 : rep.stages.back().det;
    rep.error = std::abs(rep.final_det - rep.oracle);
    return rep;
}

TransportReport transport_suite(std::uint64_t seed, int samples) {
    TransportReport rep;
    rep.seed = seed;
    rep.samples = samples;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> dim(1, 2);

    for (int s = 0; s < samples; ++s) {
        const FiniteRelation r = random_relation(rng);
        const int d = dim(rng);
        const GroupoidMatrix f = random_groupoid_matrix(rng, r, d, d);

        // Transport along a random class-preserving relabeling: permute
        // points within the same relation (uniform weights).
        std::vector<int> iso(r.point_count());
        std::iota(iso.begin(), iso.end(), 0);
        // Permute within classes and also swap whole equal-size classes.
        for (const auto& cls : r.classes()) {
            std::vector<int> perm = cls;
            std::shuffle(perm.begin(), perm.end(), rng);
            for (size_t i = 0; i < cls.size(); ++i) iso[cls[i]] = perm[i];
        }
        const GroupoidMatrix g = transport(f, r, iso);

        bool exact_ok = true;
        for (int m = 1; m <= 4 && exact_ok; ++m)
            exact_ok = f.delta().power_trace(m) == g.delta().power_trace(m);
        const double det_f = fk_det(to_vn_model(f));
        const double det_g = fk_det(to_vn_model(g));
        const double terr = std::abs(det_f - det_g);
        rep.max_transport_error = std::max(rep.max_transport_error, terr);
        if (!exact_ok || terr > 1e-9) {
            std::ostringstream msg;
            msg << "transport changed invariants (sample " << s << ")";
            rep.violations.push_back({s, msg.str(), terr});
        }

        // Restriction law: pick a full subset A, corner f to A, and check
        // ln det(f) = mu(A) ln det(f|_A).
        std::vector<int> subset;
        std::uniform_int_distribution<int> keep(0, 1);
        for (const auto& cls : r.classes()) {
            bool any = false;
            for (int x : cls)
                if (keep(rng)) {
                    subset.push_back(x);
                    any = true;
                }
            if (!any) subset.push_back(cls[0]);
        }
        const auto cert = is_full(r, subset);
        ++rep.certificates_checked;
        if (!cert.full || !cert.reconstructs_identity)
            rep.violations.push_back({s, "fullness certificate failed", 0});

        GroupoidMatrix corner(r, d, d);
        std::vector<bool> in_a(r.point_count(), false);
        for (int x : subset) in_a[x] = true;
        for (const auto& [key, blk] : f.blocks()) {
            if (!in_a[key.first] || !in_a[key.second]) continue;
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    corner.set(key.first, key.second, i, j,
                               blk[static_cast<size_t>(i) * d + j]);
        }
        const auto restricted = restrict_relation(corner, subset);
        const double logdet_full = log_fk_det(to_vn_model(corner));
        const double logdet_a = log_fk_det(to_vn_model(restricted.matrix));
        const double rerr =
            std::abs(logdet_full - to_double(restricted.mu_a) * logdet_a);
        rep.max_restriction_error = std::max(rep.max_restriction_error, rerr);
        if (rerr > 1e-9) {
            std::ostringstream msg;
            msg << "restriction scaling law violated (sample " << s << ")";
            rep.violations.push_back({s, msg.str(), rerr});
        }
    }
    return rep;
}

}  // namespace l2inv
