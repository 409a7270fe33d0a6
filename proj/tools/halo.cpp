// Command-line surface: reproducible experiments with exact-rational JSON
// output. Exit codes: 0 success, 2 precondition violation, 3 certification
// failure, 64 unknown command, 65 malformed config.

#include "halo/bounds.hpp"
#include "halo/geometry.hpp"
#include "halo/json_io.hpp"
#include "halo/newton.hpp"
#include "halo/rep.hpp"
#include "halo/up.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace halo;

namespace {

std::vector<Int> parse_int_list(const std::string& s) {
    std::vector<Int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.emplace_back(item);
    return out;
}

std::vector<int> parse_small_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    return out;
}

struct Common {
    int64_t p = 3;
    int n = 2;
    int h = 1;
    std::string weight, conductors, tame, wild_k;
    std::string out_path, config_path;
    int degree_cap = 6;
    int precision = 16;
    int n_max = 8;
    bool allow_floors = false;
    std::string plot_path;
};

WeightCharacter build_weight(const Common& c) {
    WeightCharacter w;
    w.n = c.n;
    w.t = c.weight.empty() ? std::vector<Int>(static_cast<size_t>(c.n), 0) : parse_int_list(c.weight);
    std::vector<int> conds = c.conductors.empty()
                                 ? std::vector<int>(static_cast<size_t>(c.n), 1)
                                 : parse_small_list(c.conductors);
    if (static_cast<int>(w.t.size()) != c.n || static_cast<int>(conds.size()) != c.n)
        throw std::invalid_argument("weight/conductors must have length n");
    for (int i = 0; i < c.n; ++i) {
        WildChar wc;
        wc.cond = conds[static_cast<size_t>(i)];
        wc.k = wild_exponent(c.p, wc.cond) > 0 ? 1 : 0;
        w.wild.push_back(wc);
    }
    if (!c.tame.empty()) w.tame = parse_small_list(c.tame);
    if (!c.wild_k.empty()) {
        std::vector<int> ks = parse_small_list(c.wild_k);
        for (size_t i = 0; i < ks.size() && i < w.wild.size(); ++i) w.wild[i].k = ks[i];
    }
    w.validate();
    return w;
}

GlobalData load_global(const Common& c) {
    if (c.config_path.empty()) return GlobalData::trivial(c.h);
    std::ifstream in(c.config_path);
    if (!in) throw std::runtime_error("config: cannot open " + c.config_path);
    OJson j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("config: malformed JSON: ") + e.what());
    }
    GlobalData g = parse_global_data(j);
    if (g.h != c.h) throw std::invalid_argument("config: h disagrees with --h");
    return g;
}

void emit(const Common& c, const OJson& j) {
    std::string text = j.dump(2);
    if (c.out_path.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream out(c.out_path);
        out << text << "\n";
    }
}

void emit_plot(const std::string& path, const std::vector<BoundPoint>& pts) {
    std::ofstream out(path);
    for (const BoundPoint& b : pts) out << rat_str(b.x) << " " << rat_str(b.y) << "\n";
}

int ctx_level(const WeightCharacter& w, int64_t p) {
    int lvl = 0;
    for (int i = 0; i < w.n; ++i) lvl = std::max(lvl, wild_exponent(p, w.conductor(i)));
    return lvl;
}

struct CharRun {
    CharSeries cs;
    Rat vTa;
    std::unique_ptr<CycloContext> ctx;
};

CharRun run_charpoly(const Common& c) {
    WeightCharacter w = build_weight(c);
    GlobalData g = load_global(c);
    auto ctx = std::make_unique<CycloContext>(c.p, ctx_level(w, c.p), c.precision);
    std::vector<Int> a;
    for (int i = 0; i < c.n; ++i) a.emplace_back(c.n - 1 - i);
    UpMatrix M = assemble_up(*ctx, w, g, a, c.degree_cap);
    CharRun run;
    run.cs = char_series(M, c.n_max);
    TCoords tc = t_coordinates(w, c.p);
    bool have = false;
    for (int i = 0; i < c.n - 1; ++i) {
        if (tc.vals[static_cast<size_t>(i)].is_inf()) continue;
        Rat v = tc.vals[static_cast<size_t>(i)].finite();
        if (!have || v < run.vTa) {
            run.vTa = v;
            have = true;
        }
    }
    if (!have) run.vTa = 0;
    run.ctx = std::move(ctx);
    return run;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact U_p characteristic-series and Newton-polygon toolkit"};
    app.require_subcommand(1);
    Common c;

    auto add_common = [&](CLI::App* sub, bool with_weight = true) {
        sub->add_option("--p", c.p, "prime");
        sub->add_option("--n", c.n, "rank");
        sub->add_option("--h", c.h, "class-set size");
        if (with_weight) {
            sub->add_option("--weight", c.weight, "t_1,...,t_n");
            sub->add_option("--conductors", c.conductors, "c_1,...,c_n");
            sub->add_option("--tame", c.tame, "tame exponents");
            sub->add_option("--wild-k", c.wild_k, "wild character exponents");
        }
        sub->add_option("--out", c.out_path, "write JSON here instead of stdout");
        sub->add_option("--config", c.config_path, "global-data JSON");
    };

    auto* sc_coords = app.add_subcommand("weight-coords", "T-coordinate valuations");
    add_common(sc_coords);
    auto* sc_roche = app.add_subcommand("roche", "congruence subgroup and index");
    add_common(sc_roche);
    bool assert_c1 = false;
    sc_roche->add_flag("--assert-cond1", assert_c1, "take ratio conductors as maxima");
    auto* sc_dims = app.add_subcommand("dims", "algebraic representation dimension");
    sc_dims->add_option("--n", c.n);
    std::string t_str;
    sc_dims->add_option("--t", t_str, "t_1,...,t_n");
    sc_dims->add_option("--out", c.out_path);
    auto* sc_budget = app.add_subcommand("budget", "companion slope budget");
    std::string a_str, m_str, psi_str;
    sc_budget->add_option("--n", c.n);
    sc_budget->add_option("--a", a_str, "a_1,...,a_n");
    sc_budget->add_option("--m", m_str, "m_1,...,m_n");
    sc_budget->add_option("--psi", psi_str, "optional v(psi_i(p)) list");
    sc_budget->add_option("--out", c.out_path);
    auto* sc_mackey = app.add_subcommand("mackey", "finite-group irreducibility check");
    add_common(sc_mackey);
    auto* sc_charpoly = app.add_subcommand("charpoly", "characteristic series coefficients");
    add_common(sc_charpoly);
    sc_charpoly->add_option("--degree-cap", c.degree_cap);
    sc_charpoly->add_option("--precision", c.precision);
    sc_charpoly->add_option("--Nmax", c.n_max);
    sc_charpoly->add_flag("--allow-floors", c.allow_floors);
    auto* sc_np = app.add_subcommand("np", "Newton polygon with lower-bound verdict");
    add_common(sc_np);
    sc_np->add_option("--degree-cap", c.degree_cap);
    sc_np->add_option("--precision", c.precision);
    sc_np->add_option("--Nmax", c.n_max);
    sc_np->add_flag("--allow-floors", c.allow_floors);
    auto* sc_lower = app.add_subcommand("lower-bound", "exact lower-bound point table");
    std::string vta_str = "1/2";
    int m_max = 10;
    add_common(sc_lower, false);
    sc_lower->add_option("--vTa", vta_str, "v(T_a), rational");
    sc_lower->add_option("--Mmax", m_max);
    sc_lower->add_option("--plot-data", c.plot_path, "write x y columns here");
    auto* sc_upper = app.add_subcommand("upper-bound", "classical upper-bound point");
    add_common(sc_upper);
    std::string eps_str;
    sc_upper->add_option("--eps", eps_str, "regularity ratio for the product form");
    auto* sc_iter = app.add_subcommand("iterate-ubd", "iterated upper-bound points");
    add_common(sc_iter);
    int k_max = 2;
    std::string a1_str;
    sc_iter->add_option("--kmax", k_max);
    sc_iter->add_option("--A1", a1_str, "lower-bound constant (default: fitted)");
    sc_iter->add_option("--plot-data", c.plot_path);
    auto* sc_disc = app.add_subcommand("disconnect", "slope-lattice certificate");
    std::string alpha_str = "2";
    sc_disc->add_option("--alpha", alpha_str);
    sc_disc->add_option("--n", c.n);
    sc_disc->add_option("--A1", a1_str);
    sc_disc->add_option("--out", c.out_path);
    auto* sc_ord = app.add_subcommand("ordinary", "ordinary degree of a coefficient list");
    std::string vals_str;
    sc_ord->add_option("--vals", vals_str, "comma list of v(c_N), 'inf' allowed");
    sc_ord->add_option("--out", c.out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 64;
    }

    try {
        if (sc_coords->parsed()) {
            WeightCharacter w = build_weight(c);
            TCoords tc = t_coordinates(w, c.p);
            OJson j;
            j["p"] = c.p;
            j["weight"] = weight_json(w);
            j["vT"] = OJson::array();
            for (const Valuation& v : tc.vals) j["vT"].push_back(v.str());
            emit(c, j);
        } else if (sc_roche->parsed()) {
            WeightCharacter w = build_weight(c);
            RocheData rd = roche_subgroup(w, c.p, assert_c1);
            OJson j;
            j["c_matrix"] = rd.c_matrix;
            j["j_index"] = rd.j_index.str();
            j["index"] = ipow(Int(c.p), rd.j_index.convert_to<unsigned long>()).str();
            emit(c, j);
        } else if (sc_dims->parsed()) {
            std::vector<Int> t = parse_int_list(t_str);
            OJson j;
            j["d_t"] = weyl_dim(c.n, t).convert_to<int64_t>();
            emit(c, j);
        } else if (sc_budget->parsed()) {
            std::vector<Int> a = parse_int_list(a_str), m = parse_int_list(m_str);
            std::optional<std::vector<Rat>> psi;
            if (!psi_str.empty()) {
                psi.emplace();
                std::stringstream ss(psi_str);
                std::string item;
                while (std::getline(ss, item, ',')) psi->push_back(parse_rat(item));
            }
            SlopeBudget sb = slope_budget(c.n, a, m, psi ? &*psi : nullptr);
            OJson j;
            j["value"] = rat_str(sb.value);
            j["closed_form"] = rat_str(sb.closed_form);
            j["slope_sum"] = rat_str(sb.slope_sum);
            j["mismatch"] = sb.mismatch;
            OJson pw = OJson::array();
            for (const auto& [perm, v] : sb.per_w) {
                OJson e;
                e["w"] = perm;
                e["v"] = rat_str(v);
                pw.push_back(e);
            }
            j["per_w"] = pw;
            emit(c, j);
        } else if (sc_mackey->parsed()) {
            WeightCharacter w = build_weight(c);
            MackeyResult mr = mackey_bruteforce(w, c.p);
            SimpleReport sr = is_simple(w, c.p);
            OJson j;
            j["irreducible"] = mr.irreducible;
            j["intertwiner_dim"] = mr.intertwiner_dim.str();
            j["induced_dim"] = mr.induced_dim.str();
            j["simple"] = sr.simple;
            if (!sr.simple) j["simple_failing"] = sr.failing;
            emit(c, j);
        } else if (sc_charpoly->parsed() || sc_np->parsed()) {
            CharRun run = run_charpoly(c);
            bool all_certified = true;
            for (const CharCoefficient& cc : run.cs.coeff)
                if (!cc.certified) all_certified = false;
            OJson j;
            j["charpoly"] = char_series_json(run.cs, c.allow_floors);
            if (sc_np->parsed()) {
                NewtonPolygon np = lower_hull(run.cs.points(c.allow_floors));
                j["polygon"] = polygon_json(np);
                if (run.vTa > 0 && run.vTa < 1) {
                    int mm = 0;
                    std::vector<BoundPoint> bnd;
                    while (true) {
                        bnd = lower_bound_points(c.n, c.p, c.h, run.vTa, mm);
                        if (bnd.back().x >= Rat(np.extent()) || mm > 4 * c.n_max + 8) break;
                        ++mm;
                    }
                    std::vector<std::pair<Rat, Rat>> bp;
                    for (const BoundPoint& b : bnd) bp.emplace_back(b.x, b.y);
                    AboveResult ar = lies_above(np, bp);
                    j["vTa"] = rat_str(run.vTa);
                    j["lies_above_lower_bound"] = ar.ok;
                    if (!ar.ok) j["violation_x"] = rat_str(ar.witness_x);
                } else {
                    j["lies_above_lower_bound"] = nullptr;
                    j["note"] = "v(T_a) outside (0,1); lower bound not applicable";
                }
            }
            emit(c, j);
            if (!all_certified && !c.allow_floors) {
                std::cerr << "uncertified coefficients below N_max (rerun with --allow-floors to see floors)\n";
                return 3;
            }
        } else if (sc_lower->parsed()) {
            Rat vta = parse_rat(vta_str);
            auto pts = lower_bound_points(c.n, c.p, c.h, vta, m_max);
            OJson j;
            j["points"] = bound_points_json(pts);
            LowerConstants lc = lower_bound_constants(c.n, c.p, c.h);
            j["A1"] = rat_str(lc.A1);
            j["C"] = rat_str(lc.C);
            emit(c, j);
            if (!c.plot_path.empty()) emit_plot(c.plot_path, pts);
        } else if (sc_upper->parsed()) {
            WeightCharacter w = build_weight(c);
            std::optional<Rat> eps;
            if (!eps_str.empty()) eps = parse_rat(eps_str);
            UpperPoint up = upper_bound_point(w, c.p, c.h, eps ? &*eps : nullptr);
            OJson j;
            j["x"] = rat_str(up.pt.x);
            j["y"] = rat_str(up.pt.y);
            j["l_t"] = rat_str(up.l_t);
            if (up.has_product_form) {
                j["product_pow"] = rat_str(up.product_pow);
                j["A2"] = rat_str(up.A2);
                j["product_leq_max_vT"] = up.product_leq_max_vT;
            }
            emit(c, j);
        } else if (sc_iter->parsed()) {
            WeightCharacter w = build_weight(c);
            Rat A1 = a1_str.empty() ? lower_bound_constants(c.n, c.p, c.h).A1 : parse_rat(a1_str);
            IteratedBounds ib = iterated_upper_bounds(w, c.p, c.h, k_max, A1);
            OJson j;
            j["A1"] = rat_str(A1);
            j["points"] = bound_points_json(ib.points);
            j["halted"] = ib.halted;
            if (ib.halted) j["reason"] = ib.reason;
            emit(c, j);
            if (!c.plot_path.empty()) emit_plot(c.plot_path, ib.points);
        } else if (sc_disc->parsed()) {
            Rat alpha = parse_rat(alpha_str);
            Rat A1 = a1_str.empty() ? lower_bound_constants(c.n, c.p, 1).A1 : parse_rat(a1_str);
            DisconnectCertificate cert = disconnect_certificate(alpha, c.n, A1);
            emit(c, certificate_json(cert));
        } else if (sc_ord->parsed()) {
            std::vector<std::pair<Int, Valuation>> vals;
            std::stringstream ss(vals_str);
            std::string item;
            Int idx = 0;
            while (std::getline(ss, item, ',')) {
                vals.emplace_back(idx, item == "inf" ? Valuation::inf() : Valuation::of(parse_rat(item)));
                ++idx;
            }
            OJson j;
            j["ordinary_degree"] = ordinary_degree(vals).str();
            emit(c, j);
        } else {
            std::cerr << "unknown command\n";
            return 64;
        }
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 65;
    } catch (const std::invalid_argument& e) {
        std::cerr << "precondition violation: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "precondition violation: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
