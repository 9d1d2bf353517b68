#pragma once

#include "l2inv/approx.hpp"
#include "l2inv/counterexample.hpp"
#include "l2inv/finvn.hpp"
#include "l2inv/group_ring.hpp"
#include "l2inv/harness.hpp"

#include <json.hpp>

#include <string>

namespace l2inv {

using Json = nlohmann::json;

/// Matrix document format:
///   { "group": {"type": "finite"|"free_abelian", ...},
///     "rows": m, "cols": n,
///     "entries": [[ [ [[num,den], element], ... ] ... ]] }
/// where element is an id (finite) or an integer vector (Z^k).
/// The parser rejects zero denominators and out-of-range ids.
GroupRingMatrix matrix_from_json(const Json& doc);
Json matrix_to_json(const GroupRingMatrix& a);

Json group_to_json(const Group& g);
Group group_from_json(const Json& doc);

Json vn_morphism_to_json(const VNMorphism& f);

std::string spectral_density_to_tsv(const SpectralDensity& d);
Json spectral_density_to_json(const SpectralDensity& d);

Json convergence_report_to_json(const ConvergenceReport& r);
std::string convergence_report_to_tsv(const ConvergenceReport& r);

Json fuzz_report_to_json(const FuzzReport& r);
Json mahler_report_to_json(const MahlerReport& r);
std::string mahler_report_to_tsv(const MahlerReport& r);
Json transport_report_to_json(const TransportReport& r);
Json theorem51_report_to_json(const Theorem51Report& r);

/// Rational as an exact [num, den] pair of decimal strings.
Json rat_to_json(const Rat& r);
Rat rat_from_json(const Json& j);

}  // namespace l2inv
