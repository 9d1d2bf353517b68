#include "l2inv/json_io.hpp"

#include <sstream>

namespace l2inv {

Json rat_to_json(const Rat& r) {
    return Json::array({boost::multiprecision::numerator(r).str(),
                        boost::multiprecision::denominator(r).str()});
}

Rat rat_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2)
        throw std::invalid_argument("rational must be a [num, den] pair");
    Int num, den;
    if (j[0].is_number_integer()) num = Int(j[0].get<long long>());
    else num = Int(j[0].get<std::string>());
    if (j[1].is_number_integer()) den = Int(j[1].get<long long>());
    else den = Int(j[1].get<std::string>());
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rat(num, den);
}

Json group_to_json(const Group& g) {
    Json out;
    if (g.is_finite()) {
        out["type"] = "finite";
        out["mul"] = g.table().mul;
        out["inv"] = g.table().inv;
        out["identity"] = g.table().identity;
    } else {
        out["type"] = "free_abelian";
        out["rank"] = g.rank();
    }
    return out;
}

Group group_from_json(const Json& doc) {
    const std::string type = doc.at("type").get<std::string>();
    if (type == "finite") {
        FiniteGroupTable t;
        t.mul = doc.at("mul").get<std::vector<std::vector<int>>>();
        t.inv = doc.at("inv").get<std::vector<int>>();
        t.identity = doc.at("identity").get<int>();
        return Group::finite(std::move(t));
    }
    if (type == "free_abelian")
        return Group::free_abelian(doc.at("rank").get<int>());
    throw std::invalid_argument("unknown group type: " + type);
}

GroupRingMatrix matrix_from_json(const Json& doc) {
    const Group g = group_from_json(doc.at("group"));
    const int rows = doc.at("rows").get<int>();
    const int cols = doc.at("cols").get<int>();
    if (rows < 1 || cols < 1) throw std::invalid_argument("bad shape");
    GroupRingMatrix a(g, rows, cols);
    const Json& entries = doc.at("entries");
    if (static_cast<int>(entries.size()) != rows)
        throw std::invalid_argument("entry grid has wrong row count");
    for (int i = 0; i < rows; ++i) {
        if (static_cast<int>(entries[i].size()) != cols)
            throw std::invalid_argument("entry grid has wrong column count");
        for (int j = 0; j < cols; ++j) {
            GroupRingElement e;
            for (const Json& term : entries[i][j]) {
                if (!term.is_array() || term.size() != 2)
                    throw std::invalid_argument("term must be [coeff, element]");
                const Rat c = rat_from_json(term[0]);
                GroupElem el;
                if (g.is_finite()) {
                    const long long id = term[1].get<long long>();
                    if (id < 0 || id >= g.order())
                        throw std::invalid_argument("element id out of range");
                    el = {id};
                } else {
                    el = term[1].get<std::vector<long long>>();
                    if (static_cast<int>(el.size()) != g.rank())
                        throw std::invalid_argument("exponent vector of wrong rank");
                }
                e = e.add(GroupRingElement::monomial(g, el, c));
            }
            a.at(i, j) = e;
        }
    }
    return a;
}

Json matrix_to_json(const GroupRingMatrix& a) {
    Json out;
    out["group"] = group_to_json(a.group());
    out["rows"] = a.rows();
    out["cols"] = a.cols();
    Json rows = Json::array();
    for (int i = 0; i < a.rows(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < a.cols(); ++j) {
            Json terms = Json::array();
            for (const auto& [el, c] : a.at(i, j).terms()) {
                Json element;
                if (a.group().is_finite()) element = el[0];
                else element = el;
                terms.push_back(Json::array({rat_to_json(c), element}));
            }
            row.push_back(std::move(terms));
        }
        rows.push_back(std::move(row));
    }
    out["entries"] = std::move(rows);
    return out;
}

Json vn_morphism_to_json(const VNMorphism& f) {
    Json out;
    Json cells = Json::array();
    for (const auto& c : f.model().cells)
        cells.push_back({{"weight", rat_to_json(c.weight)}, {"dim", c.dim}});
    out["cells"] = std::move(cells);
    out["rows"] = f.rows();
    out["cols"] = f.cols();
    Json blocks = Json::array();
    for (int c = 0; c < f.cell_count(); ++c) {
        const auto& b = f.block(c);
        Json rows = Json::array();
        for (int i = 0; i < b.rows(); ++i) {
            Json row = Json::array();
            for (int j = 0; j < b.cols(); ++j)
                row.push_back(Json::array({b(i, j).real(), b(i, j).imag()}));
            rows.push_back(std::move(row));
        }
        blocks.push_back(std::move(rows));
    }
    out["blocks"] = std::move(blocks);
    return out;
}

std::string spectral_density_to_tsv(const SpectralDensity& d) {
    std::ostringstream out;
    out << "lambda\tweight\tcumulative\n";
    double cum = 0;
    for (const auto& j : d.jumps) {
        cum += j.weight;
        out << j.lambda << '\t' << j.weight << '\t' << cum << '\n';
    }
    return out.str();
}

Json spectral_density_to_json(const SpectralDensity& d) {
    Json out;
    out["total_dim"] = d.total_dim;
    Json jumps = Json::array();
    for (const auto& j : d.jumps)
        jumps.push_back({{"lambda", j.lambda}, {"weight", j.weight}});
    out["jumps"] = std::move(jumps);
    out["betti"] = d.betti();
    out["log_det"] = d.log_det();
    out["det"] = d.det();
    return out;
}

namespace {

Json stage_to_json(const ConvergenceStage& s) {
    Json out;
    out["index"] = s.index;
    out["stage_param"] = s.stage_param;
    out["model_dim"] = s.model_dim;
    out["moments"] = s.moments;
    Json exact = Json::array();
    for (const auto& m : s.exact_moments) exact.push_back(rat_to_json(m));
    out["exact_moments"] = std::move(exact);
    out["betti"] = s.betti;
    out["logdet"] = s.logdet;
    out["spectral_radius"] = s.spectral_radius;
    return out;
}

}  // namespace

Json convergence_report_to_json(const ConvergenceReport& r) {
    Json out;
    Json stages = Json::array();
    for (const auto& s : r.stages) stages.push_back(stage_to_json(s));
    out["stages"] = std::move(stages);
    Json targets = Json::array();
    for (const auto& m : r.target_moments) targets.push_back(rat_to_json(m));
    out["target_moments"] = std::move(targets);
    out["norm_bound_k"] = rat_to_json(r.norm_bound_k);
    out["norm_bound_ok"] = r.norm_bound_ok;
    out["moments_cauchy"] = r.moments_cauchy;
    out["dets_at_least_one"] = r.dets_at_least_one;
    out["limiting_betti"] = r.limiting_betti;
    out["liminf_logdet"] = r.liminf_logdet;
    return out;
}

std::string convergence_report_to_tsv(const ConvergenceReport& r) {
    std::ostringstream out;
    out << "stage\tparam\tdim\tbetti\tlogdet\tspectral_radius";
    const size_t nm = r.stages.empty() ? 0 : r.stages[0].moments.size();
    for (size_t m = 1; m <= nm; ++m) out << "\tmoment" << m;
    out << '\n';
    for (const auto& s : r.stages) {
        out << s.index << '\t' << s.stage_param << '\t' << s.model_dim << '\t'
            << s.betti << '\t' << s.logdet << '\t' << s.spectral_radius;
        for (double m : s.moments) out << '\t' << m;
        out << '\n';
    }
    return out.str();
}

namespace {

Json violations_to_json(const std::vector<FuzzViolation>& vs) {
    Json out = Json::array();
    for (const auto& v : vs)
        out.push_back({{"sample", v.sample},
                       {"description", v.description},
                       {"value", v.value}});
    return out;
}

}  // namespace

Json fuzz_report_to_json(const FuzzReport& r) {
    Json out;
    out["seed"] = r.seed;
    out["samples"] = r.samples;
    out["gram_samples"] = r.gram_samples;
    out["min_det"] = r.min_det;
    out["min_gram_product"] = r.min_gram_product;
    out["violations"] = violations_to_json(r.violations);
    out["ok"] = r.ok();
    return out;
}

Json mahler_report_to_json(const MahlerReport& r) {
    Json out;
    out["oracle"] = r.oracle;
    Json stages = Json::array();
    for (const auto& s : r.stages)
        stages.push_back({{"n", s.n}, {"det", s.det}});
    out["stages"] = std::move(stages);
    out["final_det"] = r.final_det;
    out["error"] = r.error;
    return out;
}

std::string mahler_report_to_tsv(const MahlerReport& r) {
    std::ostringstream out;
    out << "n\tdet\toracle\terror\n";
    for (const auto& s : r.stages)
        out << s.n << '\t' << s.det << '\t' << r.oracle << '\t'
            << std::abs(s.det - r.oracle) << '\n';
    return out.str();
}

Json transport_report_to_json(const TransportReport& r) {
    Json out;
    out["seed"] = r.seed;
    out["samples"] = r.samples;
    out["max_transport_error"] = r.max_transport_error;
    out["max_restriction_error"] = r.max_restriction_error;
    out["certificates_checked"] = r.certificates_checked;
    out["violations"] = violations_to_json(r.violations);
    out["ok"] = r.ok();
    return out;
}

Json theorem51_report_to_json(const Theorem51Report& r) {
    Json out;
    out["stage_dets"] = r.stage_dets;
    out["det_f"] = r.det_f;
    out["final_error"] = r.final_error;
    out["converged"] = r.converged;
    return out;
}

}  // namespace l2inv
