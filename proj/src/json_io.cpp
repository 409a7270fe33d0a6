#include "halo/json_io.hpp"

#include <limits>
#include <stdexcept>

namespace halo {

OJson rat_json(const Rat& x) { return rat_str(x); }

OJson val_json(const Valuation& v) { return v.str(); }

Rat parse_rat(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(Int(s));
    Int num(s.substr(0, slash));
    Int den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("parse_rat: zero denominator");
    return Rat(num, den);
}

namespace {

OJson int_json(const Int& x) {
    if (x >= std::numeric_limits<int64_t>::min() && x <= std::numeric_limits<int64_t>::max())
        return x.convert_to<int64_t>();
    return x.str();
}

}  // namespace

OJson polygon_json(const NewtonPolygon& np) {
    OJson j;
    j["vertices"] = OJson::array();
    for (const auto& [x, y] : np.vertices) j["vertices"].push_back({int_json(x), rat_str(y)});
    j["slopes"] = OJson::array();
    for (const auto& [s, m] : np.slopes) j["slopes"].push_back({rat_str(s), int_json(m)});
    return j;
}

OJson weight_json(const WeightCharacter& w) {
    OJson j;
    j["n"] = w.n;
    j["t"] = OJson::array();
    for (const Int& t : w.t) j["t"].push_back(int_json(t));
    j["conductors"] = OJson::array();
    for (const WildChar& c : w.wild) j["conductors"].push_back(c.cond);
    j["tame"] = w.tame.empty() ? std::vector<int>(static_cast<size_t>(w.n), 0) : w.tame;
    OJson ks = OJson::array();
    bool any_k = false;
    for (const WildChar& c : w.wild) {
        ks.push_back(static_cast<int64_t>(c.k));
        if (c.k != 0 && c.k != 1) any_k = true;
    }
    if (any_k) j["wild_k"] = ks;
    return j;
}

WeightCharacter parse_weight(const OJson& j) {
    WeightCharacter w;
    w.n = j.at("n").get<int>();
    for (const auto& t : j.at("t")) {
        if (t.is_string())
            w.t.emplace_back(t.get<std::string>());
        else
            w.t.emplace_back(t.get<int64_t>());
    }
    for (const auto& c : j.at("conductors")) {
        WildChar wc;
        wc.cond = c.get<int>();
        wc.k = wc.cond > 1 ? 1 : 0;
        w.wild.push_back(wc);
    }
    if (j.contains("tame")) w.tame = j.at("tame").get<std::vector<int>>();
    if (j.contains("wild_k")) {
        auto ks = j.at("wild_k").get<std::vector<int64_t>>();
        for (size_t i = 0; i < ks.size() && i < w.wild.size(); ++i) w.wild[i].k = ks[i];
    }
    w.validate();
    return w;
}

OJson global_data_json(const GlobalData& g) {
    OJson j;
    j["h"] = g.h;
    j["gluing"] = OJson::array();
    for (const auto& [key, entry] : g.gluing) {
        OJson e;
        e["rep"] = key.first;
        e["component"] = key.second + 1;
        e["target"] = entry.target + 1;
        if (!entry.twist.empty()) {
            OJson t = OJson::array();
            for (const auto& row : entry.twist) {
                OJson r = OJson::array();
                for (const Int& v : row) r.push_back(int_json(v));
                t.push_back(r);
            }
            e["twist"] = t;
        }
        j["gluing"].push_back(e);
    }
    return j;
}

GlobalData parse_global_data(const OJson& j) {
    GlobalData g;
    g.h = j.at("h").get<int>();
    if (j.contains("gluing")) {
        for (const auto& e : j.at("gluing")) {
            int rep = e.at("rep").get<int>();
            int comp = e.at("component").get<int>() - 1;
            GluingEntry entry;
            entry.target = e.at("target").get<int>() - 1;
            if (e.contains("twist")) {
                for (const auto& row : e.at("twist")) {
                    std::vector<Int> r;
                    for (const auto& v : row) {
                        if (v.is_string())
                            r.emplace_back(v.get<std::string>());
                        else
                            r.emplace_back(v.get<int64_t>());
                    }
                    entry.twist.push_back(std::move(r));
                }
            }
            g.gluing[{rep, comp}] = std::move(entry);
        }
    }
    return g;
}

OJson bound_points_json(const std::vector<BoundPoint>& pts) {
    OJson j = OJson::array();
    for (const BoundPoint& b : pts) j.push_back({rat_str(b.x), rat_str(b.y)});
    return j;
}

OJson certificate_json(const DisconnectCertificate& c) {
    OJson j;
    j["alpha"] = rat_str(c.alpha);
    j["d_alpha"] = rat_str(c.d_alpha);
    j["nu_alpha"] = rat_str(c.nu_alpha);
    j["lattice"] = OJson::array();
    for (const Rat& l : c.lattice) j["lattice"].push_back(rat_str(l));
    j["alpha_in_lattice"] = c.alpha_in_lattice;
    j["gap"] = rat_str(c.gap);
    j["gap_positive"] = c.gap_positive;
    j["scope"] = "slope-lattice trapping certificate; no rigid-geometric claim";
    return j;
}

OJson char_series_json(const CharSeries& cs, bool allow_floors) {
    OJson j;
    j["N_max"] = cs.N_max;
    j["coefficients"] = OJson::array();
    for (const CharCoefficient& c : cs.coeff) {
        if (!c.certified && !allow_floors) continue;
        OJson e;
        e["N"] = c.N;
        e["valuation"] = c.val.str();
        e["valuation_is_floor"] = c.val_is_floor;
        e["certified"] = c.certified;
        j["coefficients"].push_back(e);
    }
    return j;
}

}  // namespace halo
