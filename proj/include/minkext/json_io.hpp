// JSON (de)serialization for the external interfaces: polyhedra, semigroups,
// extension diagrams, functionals and the machine-readable reports.  All
// rationals travel as "p/q" strings with the denominator omitted when 1, and
// every report uses a fixed key order so byte-stable round trips hold.

#pragma once

#include "minkext/extension.hpp"
#include "minkext/minkowski.hpp"

#include <json.hpp>

namespace minkext {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// primitives

inline Json qvec_to_json(const QVec& v) {
    Json a = Json::array();
    for (const auto& x : v) a.push_back(rat_to_string(x));
    return a;
}

inline Json ivec_to_json(const IVec& v) {
    Json a = Json::array();
    for (const auto& x : v) a.push_back(x.str());
    return a;
}

inline QVec qvec_from_json(const Json& a) {
    QVec v;
    for (const auto& x : a) {
        if (x.is_number_integer()) v.push_back(Rat(Int(x.get<long long>())));
        else if (x.is_string()) v.push_back(rat_from_string(x.get<std::string>()));
        else throw Error(ErrorKind::ParseError, "expected a rational entry");
    }
    return v;
}

inline IVec ivec_from_json(const Json& a) {
    IVec v;
    for (const auto& x : a) {
        if (x.is_number_integer()) v.push_back(Int(x.get<long long>()));
        else if (x.is_string()) v.push_back(Int(x.get<std::string>()));
        else throw Error(ErrorKind::ParseError, "expected an integer entry");
    }
    return v;
}

// ---------------------------------------------------------------------------
// polyhedra

inline Json polyhedron_to_json(const RationalPolyhedron& p) {
    Json j;
    j["dim"] = p.dim;
    Json vs = Json::array();
    for (const auto& v : p.vertices) vs.push_back(qvec_to_json(v));
    j["vertices"] = vs;
    Json rs = Json::array();
    for (const auto& r : p.tail_rays) rs.push_back(ivec_to_json(to_ivec(r)));
    j["tail_rays"] = rs;
    return j;
}

inline RationalPolyhedron polyhedron_from_json(const Json& j) {
    if (!j.contains("dim") || !j.contains("vertices"))
        throw Error(ErrorKind::ParseError, "polyhedron JSON needs 'dim' and 'vertices'");
    size_t d = j["dim"].get<size_t>();
    std::vector<QVec> vs, rs;
    for (const auto& v : j["vertices"]) {
        QVec q = qvec_from_json(v);
        if (q.size() != d) throw Error(ErrorKind::ParseError, "vertex dimension mismatch");
        vs.push_back(std::move(q));
    }
    if (j.contains("tail_rays"))
        for (const auto& r : j["tail_rays"]) {
            QVec q = qvec_from_json(r);
            if (q.size() != d) throw Error(ErrorKind::ParseError, "tail ray dimension mismatch");
            rs.push_back(std::move(q));
        }
    return RationalPolyhedron::from_vrep(d, vs, rs);
}

// ---------------------------------------------------------------------------
// semigroups and diagrams

inline Json semigroup_to_json(const AffineSemigroup& s) {
    Json j;
    j["rank"] = s.rank;
    Json gs = Json::array();
    for (const auto& g : s.generators) gs.push_back(ivec_to_json(g));
    j["generators"] = gs;
    return j;
}

inline AffineSemigroup semigroup_from_json(const Json& j) {
    if (!j.contains("rank") || !j.contains("generators"))
        throw Error(ErrorKind::ParseError, "semigroup JSON needs 'rank' and 'generators'");
    size_t rank = j["rank"].get<size_t>();
    std::vector<IVec> gens;
    for (const auto& g : j["generators"]) {
        IVec v = ivec_from_json(g);
        if (v.size() != rank) throw Error(ErrorKind::ParseError, "generator rank mismatch");
        gens.push_back(std::move(v));
    }
    return AffineSemigroup::from_generators(rank, gens);
}

inline Json diagram_to_json(const ExtensionDiagram& d) {
    Json j;
    j["upper"] = {{"T", semigroup_to_json(d.upper.t)}, {"S", semigroup_to_json(d.upper.s)}};
    j["lower"] = {{"T", semigroup_to_json(d.lower.t)}, {"S", semigroup_to_json(d.lower.s)}};
    Json pi = Json::array();
    for (const auto& row : d.pi.a) pi.push_back(ivec_to_json(row));
    j["pi"] = pi;
    return j;
}

inline ExtensionDiagram diagram_from_json(const Json& j) {
    if (!j.contains("upper") || !j.contains("lower") || !j.contains("pi"))
        throw Error(ErrorKind::ParseError, "diagram JSON needs 'upper', 'lower' and 'pi'");
    auto upper = SemigroupPair::make(semigroup_from_json(j["upper"]["T"]),
                                     semigroup_from_json(j["upper"]["S"]));
    auto lower = SemigroupPair::make(semigroup_from_json(j["lower"]["T"]),
                                     semigroup_from_json(j["lower"]["S"]));
    std::vector<IVec> rows;
    for (const auto& r : j["pi"]) rows.push_back(ivec_from_json(r));
    IMat pi(rows);
    if (pi.rows != lower.s.rank || pi.cols != upper.s.rank)
        throw Error(ErrorKind::ParseError, "pi matrix shape mismatch");
    ExtensionDiagram dia{upper, lower, pi};
    dia.validate();
    return dia;
}

// ---------------------------------------------------------------------------
// functionals

inline Json functional_to_json(const Functional& f) {
    Json j;
    j["basis_values"] = qvec_to_json(f.coords);
    if (f.raw) j["raw"] = qvec_to_json(*f.raw);
    return j;
}

}  // namespace minkext
