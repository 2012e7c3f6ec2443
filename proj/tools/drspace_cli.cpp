#include "drspace/busemann.hpp"
#include "drspace/checks.hpp"
#include "drspace/geodesics.hpp"
#include "drspace/random.hpp"
#include "drspace/riccati.hpp"
#include "drspace/spectral.hpp"
#include "drspace/visibility.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

using namespace drspace;
using Json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kCheckFailure = 1, kUsage = 2, kIo = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string render(const Json& v) {
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) return num(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_array()) {
        std::string s;
        for (const auto& e : v) s += (s.empty() ? "" : " ") + render(e);
        return s;
    }
    return v.dump();
}

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

Json vec_json(const Vec& v) {
    Json a = Json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

class Sink {
public:
    Sink(std::ostream& os, std::string format) : os_(os), format_(std::move(format)) {}

    void record(const Json& obj) {
        if (format_ == "json-lines") {
            os_ << obj.dump() << '\n';
        } else if (format_ == "csv") {
            os_ << "key,value\n";
            for (const auto& [k, v] : obj.items()) os_ << csv_cell(k) << ',' << csv_cell(render(v)) << '\n';
        } else {
            size_t w = 0;
            for (const auto& [k, v] : obj.items()) w = std::max(w, k.size());
            for (const auto& [k, v] : obj.items()) os_ << k << std::string(w - k.size() + 2, ' ') << render(v) << '\n';
        }
    }

    void table(const std::vector<Json>& rows) {
        if (rows.empty()) return;
        if (format_ == "json-lines") {
            for (const auto& r : rows) os_ << r.dump() << '\n';
            return;
        }
        std::vector<std::string> keys;
        for (const auto& [k, v] : rows.front().items()) keys.push_back(k);
        if (format_ == "csv") {
            for (size_t i = 0; i < keys.size(); ++i) os_ << (i ? "," : "") << csv_cell(keys[i]);
            os_ << '\n';
            for (const auto& r : rows) {
                for (size_t i = 0; i < keys.size(); ++i) os_ << (i ? "," : "") << csv_cell(render(r[keys[i]]));
                os_ << '\n';
            }
            return;
        }
        std::vector<size_t> w(keys.size());
        for (size_t i = 0; i < keys.size(); ++i) {
            w[i] = keys[i].size();
            for (const auto& r : rows) w[i] = std::max(w[i], render(r[keys[i]]).size());
        }
        for (size_t i = 0; i < keys.size(); ++i) os_ << keys[i] << std::string(w[i] - keys[i].size() + 2, ' ');
        os_ << '\n';
        for (const auto& r : rows) {
            for (size_t i = 0; i < keys.size(); ++i) {
                const std::string s = render(r[keys[i]]);
                os_ << s << std::string(w[i] - s.size() + 2, ' ');
            }
            os_ << '\n';
        }
    }

    // returns the number of failed checks
    int checks(const std::vector<CheckResult>& rs) {
        int failed = 0;
        if (format_ == "csv") os_ << csv_header() << '\n';
        for (const auto& r : rs) {
            failed += r.pass ? 0 : 1;
            if (format_ == "csv")
                os_ << format_check_csv(r) << '\n';
            else if (format_ == "json-lines")
                os_ << format_check_json(r) << '\n';
            else
                os_ << format_check_text(r) << '\n';
        }
        if (format_ == "text") os_ << rs.size() << " checks, " << failed << " failed\n";
        return failed;
    }

    const std::string& format() const { return format_; }

private:
    std::ostream& os_;
    std::string format_;
};

struct Globals {
    std::string preset = "heisenberg";
    std::string spec;
    std::uint64_t seed = 1;
    std::vector<std::string> tols;
    std::string format = "text";
    std::string out;
};

CliffordModuleSpec select_spec(const Globals& g) {
    if (!g.spec.empty()) {
        try {
            return load_spec_file(g.spec);
        } catch (const std::ios_base::failure& e) {
            throw IoError(e.what());
        }
    }
    try {
        return parse_preset(g.preset);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

std::string instance_label(const Globals& g) { return g.spec.empty() ? g.preset : g.spec; }

DamekRicciSpace select_space(const Globals& g) { return DamekRicciSpace(build_algebra(select_spec(g))); }

CheckConfig check_config(const Globals& g) {
    CheckConfig cfg;
    cfg.seed = g.seed;
    for (const auto& t : g.tols) {
        const auto eq = t.find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError("--tol expects NAME=VALUE, got '" + t + "'");
        try {
            size_t used = 0;
            const std::string v = t.substr(eq + 1);
            cfg.tol[t.substr(0, eq)] = std::stod(v, &used);
            if (used != v.size()) throw std::invalid_argument(v);
        } catch (const std::exception&) {
            throw UsageError("--tol value is not a number in '" + t + "'");
        }
    }
    return cfg;
}

Vec to_vec(const std::vector<double>& v) { return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size())); }

Vec direction_arg(const DamekRicciSpace& S, const std::vector<double>& v, const char* flag) {
    if (static_cast<int>(v.size()) != S.n())
        throw UsageError(std::string(flag) + " expects " + std::to_string(S.n()) + " numbers (V, Y, s), got " +
                         std::to_string(v.size()));
    Vec d = to_vec(v);
    if (d.norm() == 0.0) throw UsageError(std::string(flag) + " must be nonzero");
    return d / d.norm();
}

GroupPoint point_arg(const DamekRicciSpace& S, const std::vector<double>& v) {
    if (v.empty()) return S.identity();
    if (static_cast<int>(v.size()) != S.n())
        throw UsageError("--point expects " + std::to_string(S.n()) + " numbers (U, X, a), got " +
                         std::to_string(v.size()));
    GroupPoint p{to_vec(v).head(S.m()), to_vec(v).segment(S.m(), S.k()), v.back()};
    if (!(p.a > 0)) throw UsageError("--point: a must be positive");
    return p;
}

Json point_json(const GroupPoint& p) {
    Json j;
    j["U"] = vec_json(p.U);
    j["X"] = vec_json(p.X);
    j["a"] = p.a;
    return j;
}

// ------------------------------------------------------------------ commands

int cmd_space_build(const Globals& g, Sink& out, bool dump) {
    const CliffordModuleSpec spec = select_spec(g);
    validate_generators(spec);
    if (dump) {
        std::cout << spec_to_json_text(spec) << '\n';
        return kOk;
    }
    double rel = 0;
    for (int a = 0; a < spec.k; ++a)
        for (int b = 0; b < spec.k; ++b) {
            const Mat c = spec.generators[a] * spec.generators[b] + spec.generators[b] * spec.generators[a];
            rel = std::max(rel, max_abs(Mat(c + (a == b ? 2.0 : 0.0) * Mat::Identity(spec.m, spec.m))));
        }
    const DamekRicciSpace S(build_algebra(spec));
    Json j;
    j["instance"] = instance_label(g);
    j["m"] = S.m();
    j["k"] = S.k();
    j["n"] = S.n();
    j["Q"] = S.Q();
    j["clifford_residual"] = rel;
    j["status"] = "valid";
    out.record(j);
    return kOk;
}

int cmd_space_info(const Globals& g, Sink& out) {
    const DamekRicciSpace S = select_space(g);
    Json j;
    j["instance"] = instance_label(g);
    j["n"] = S.n();
    j["m"] = S.m();
    j["k"] = S.k();
    j["Q"] = S.Q();
    j["einstein_c"] = S.ricci().trace() / S.n();
    out.record(j);
    return kOk;
}

int run_checks(Sink& out, const std::vector<CheckResult>& rs) { return out.checks(rs) ? kCheckFailure : kOk; }

int cmd_space_check(const Globals& g, Sink& out) {
    const DamekRicciSpace S = select_space(g);
    const CheckConfig cfg = check_config(g);
    auto rs = run_instance_suite(S, cfg, "algebra");
    const auto sp = run_instance_suite(S, cfg, "space");
    rs.insert(rs.end(), sp.begin(), sp.end());
    return run_checks(out, rs);
}

int cmd_geodesic_eval(const Globals& g, Sink& out, const std::vector<double>& dir, double t, bool oracle, double step) {
    const DamekRicciSpace S = select_space(g);
    const Vec d = direction_arg(S, dir, "--dir");
    const GroupPoint p = geodesic_point(S, d, t);
    Json j;
    j["t"] = t;
    j["U"] = vec_json(p.U);
    j["X"] = vec_json(p.X);
    j["a"] = p.a;
    j["velocity"] = vec_json(geodesic_velocity(S, d, t));
    j["h"] = geodesic_scalars(S.apart(d), S.zpart(d).squaredNorm(), t).h;
    j["distance_from_e"] = distance_from_identity(S, p);
    if (oracle) {
        const GroupPoint q = geodesic_ode(S, d, t, step);
        j["oracle_deviation"] = std::max({max_abs(Vec(p.U - q.U)), max_abs(Vec(p.X - q.X)), std::abs(p.a - q.a)});
    }
    out.record(j);
    return kOk;
}

int cmd_volume(const Globals& g, Sink& out, double rmax, int samples) {
    if (!(rmax > 0) || samples < 1) throw UsageError("volume: need --rmax > 0 and --samples >= 1");
    const DamekRicciSpace S = select_space(g);
    std::vector<Json> rows;
    for (int i = 1; i <= samples; ++i) {
        const double r = rmax * i / samples;
        const auto v = volume_density(S, r);
        Json j;
        j["r"] = r;
        j["theta"] = v.theta;
        j["theta_exp_minus_Qr"] = std::exp(v.log_theta - S.Q() * r);
        j["sigma"] = v.sigma;
        rows.push_back(j);
    }
    out.table(rows);
    return kOk;
}

IdealBoundaryPoint boundary_arg(const DamekRicciSpace& S, const std::vector<double>& dir, bool pole) {
    if (pole) return pole_point(S);
    if (dir.empty()) throw UsageError("give --dir or --pole");
    return boundary_coords(S, direction_arg(S, dir, "--dir"));
}

int cmd_busemann(const Globals& g, Sink& out, const std::string& what, const std::vector<double>& dir, bool pole,
                 const std::vector<double>& point, std::optional<double> oracle_T) {
    const DamekRicciSpace S = select_space(g);
    const auto th = boundary_arg(S, dir, pole);
    const GroupPoint p = point_arg(S, point);
    if (what == "eval") {
        Json j = point_json(p);
        const double b = busemann_value(S, p, th);
        j["b"] = b;
        if (oracle_T) {
            const Vec d = pole ? Vec(S.join(Vec::Zero(S.m()), Vec::Zero(S.k()), 1.0)) : direction_arg(S, dir, "--dir");
            const double o = busemann_limit_oracle(S, p, d, *oracle_T);
            j["oracle_T"] = *oracle_T;
            j["oracle"] = o;
            j["oracle_deviation"] = std::abs(b - o);
        }
        out.record(j);
    } else if (what == "grad") {
        Json j = point_json(p);
        const Vec gr = busemann_gradient(S, p, th);
        j["gradient"] = vec_json(gr);
        j["norm"] = gr.norm();
        j["fd_deviation"] = max_abs(Vec(gr - fd_gradient(S, p, th)));
        out.record(j);
    } else {
        const Mat H = busemann_hessian(S, p, th);
        std::vector<Json> rows;
        for (int r = 0; r < S.n(); ++r) {
            Json j;
            j["row"] = r;
            for (int c = 0; c < S.n(); ++c) j["c" + std::to_string(c)] = H(r, c);
            rows.push_back(j);
        }
        out.table(rows);
    }
    return kOk;
}

Json spectrum_row(const DamekRicciSpace& S, const Vec& d) {
    Json j;
    const Vec direct = sym_eigenvalues(hessian_at_identity(S, d));
    if (!is_generic(S, d)) {
        const auto ng = nongeneric_spectrum(S, d);
        const char* names[] = {"Y = 0", "V = 0", "axis A"};
        j["generic"] = false;
        j["case"] = names[static_cast<int>(ng.which)];
        j["assembled"] = vec_json(ng.assembled);
        j["direct"] = vec_json(direct);
        j["union_residual"] = ng.distance;
        return j;
    }
    const auto dec = admissible_decomposition(S, d);
    j["generic"] = true;
    j["dim_p"] = dec.dim_p;
    j["k1"] = dec.k1;
    j["k2"] = dec.k2;
    j["mu"] = dec.spectrum.mu;
    const Vec as = assembled_hessian_spectrum(S, dec);
    j["assembled"] = vec_json(as);
    j["direct"] = vec_json(direct);
    j["union_residual"] = spectrum_distance(as, direct);
    const auto cr = jacobi_cubic_check(S, dec);
    j["cubic_residual"] = cr.root_residual;
    const auto cc = commutation_check(S, d, 0.0);
    j["commutator"] = cc.commutator;
    j["pairing_residual"] = cc.pairing_residual;
    return j;
}

int cmd_spectrum(const Globals& g, Sink& out, const std::vector<double>& dir, int sweep) {
    const DamekRicciSpace S = select_space(g);
    if (sweep > 0) {
        Rng rng(g.seed);
        std::vector<Json> rows;
        for (int i = 0; i < sweep; ++i) {
            const Vec d = rng.unit_vec(S.n());
            const auto dec = admissible_decomposition(S, d);
            const Mat H = hessian_at_identity(S, d);
            const Vec e = sym_eigenvalues(restrict_form(H, orthogonal_complement(Mat(d), S.n())));
            Json j;
            j["index"] = i;
            j["dim_p"] = dec.dim_p;
            j["k1"] = dec.k1;
            j["k2"] = dec.k2;
            j["blocks"] = static_cast<int>(dec.q.size());
            j["union_residual"] = spectrum_distance(assembled_hessian_spectrum(S, dec), sym_eigenvalues(H));
            j["cubic_residual"] = jacobi_cubic_check(S, dec).root_residual;
            j["min_eigenvalue"] = e(0);
            j["max_eigenvalue"] = e(e.size() - 1);
            rows.push_back(j);
        }
        out.table(rows);
        return kOk;
    }
    if (dir.empty()) throw UsageError("spectrum: give --dir or --sweep");
    out.record(spectrum_row(S, direction_arg(S, dir, "--dir")));
    return kOk;
}

int cmd_rank(const Globals& g, Sink& out, const std::vector<double>& dir, int sweep, double tol) {
    const DamekRicciSpace S = select_space(g);
    std::vector<Vec> dirs;
    if (!dir.empty()) dirs.push_back(direction_arg(S, dir, "--dir"));
    Rng rng(g.seed);
    for (int i = 0; i < sweep; ++i) dirs.push_back(rng.unit_vec(S.n()));
    if (dirs.empty()) throw UsageError("rank: give --dir or --sweep");
    std::vector<Json> rows;
    int bad = 0;
    for (size_t i = 0; i < dirs.size(); ++i) {
        const auto rk = rank_of_geodesic(S, dirs[i], tol);
        Json j;
        j["index"] = static_cast<int>(i);
        j["dim_E"] = rk.dim_E;
        j["rank"] = rk.rank;
        j["floor"] = rk.floor;
        j["t_independent"] = rk.t_independent;
        bad += rk.rank == 1 ? 0 : 1;
        rows.push_back(j);
    }
    out.table(rows);
    return bad ? kCheckFailure : kOk;
}

int cmd_riccati(const Globals& g, Sink& out, const std::vector<double>& dir, const std::vector<double>& tspan,
                double dt, int rows_wanted) {
    if (tspan.size() != 2 || !(tspan[1] != tspan[0])) throw UsageError("--tspan expects two distinct numbers");
    if (!(dt > 0)) throw UsageError("--dt must be positive");
    const DamekRicciSpace S = select_space(g);
    const Vec d = direction_arg(S, dir, "--dir");
    const DamekRicciModel model(S, d);
    const int steps = static_cast<int>(std::ceil(std::abs(tspan[1] - tspan[0]) / dt - 1e-9));
    const int every = std::max(1, steps / std::max(1, rows_wanted));
    const auto path = riccati_integrate(model, model.shape(tspan[0]), tspan[0], tspan[1], dt, every);
    std::vector<Json> rows;
    for (size_t i = 0; i < path.t.size(); ++i) {
        const double t = path.t[i];
        const Mat Sh = model.shape(t);
        const Vec e = sym_eigenvalues(Sh);
        Json j;
        j["t"] = t;
        j["integration_deviation"] = max_abs(Mat(path.S[i] - Sh));
        j["residual"] = riccati_residual(model, t, dt);
        j["s_min"] = e(0);
        j["s_max"] = e(e.size() - 1);
        rows.push_back(j);
    }
    out.table(rows);
    return kOk;
}

int cmd_visibility(const Globals& g, Sink& out, const std::vector<double>& theta_dir, bool pole,
                   const std::vector<double>& probe, const std::vector<double>& point, double horizon, double step) {
    if (!(horizon > 0) || !(step > 0)) throw UsageError("--horizon and --step must be positive");
    const DamekRicciSpace S = select_space(g);
    const auto th = boundary_arg(S, theta_dir, pole);
    const auto pr = make_probe(S, th, point_arg(S, point), direction_arg(S, probe, "--probe"));
    std::vector<Json> rows;
    double acc = 0.0, prev = 0.0;
    const int n = static_cast<int>(std::llround(horizon / step));
    for (int i = 0; i <= n; ++i) {
        const double t = i * step;
        if (i > 0) acc += visibility_integral(S, pr, prev, t);
        prev = t;
        const auto s = probe_sample(S, pr, t, false);
        Json j;
        j["t"] = t;
        j["q"] = s.q;
        j["dq"] = s.dq;
        j["d2q"] = s.d2q;
        j["integral"] = acc;
        rows.push_back(j);
    }
    out.table(rows);
    const auto r = find_T_reaching_one(S, pr, 0.0, horizon);
    Json j;
    j["found"] = r.found;
    if (r.found) j["T"] = r.T;
    j["integral_at_horizon"] = r.integral_at_horizon;
    j["dq_start"] = r.dq_start;
    j["dq_horizon"] = r.dq_horizon;
    if (out.format() == "csv")
        std::cerr << "found " << (r.found ? "yes" : "no") << (r.found ? ", T = " + num(r.T) : std::string()) << '\n';
    else
        out.record(j);
    return r.found ? kOk : kCheckFailure;
}

int cmd_verify(const Globals& g, Sink& out, const std::string& module, const std::vector<std::string>& ids,
               bool acceptance) {
    const CheckConfig cfg = check_config(g);
    std::vector<std::string> criteria = ids;
    if (acceptance)
        for (const auto& [id, name] : acceptance_criteria()) criteria.push_back(id);
    std::vector<CheckResult> rs;
    if (criteria.empty()) {
        const DamekRicciSpace S = select_space(g);
        try {
            rs = run_instance_suite(S, cfg, module);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        return run_checks(out, rs);
    }
    for (const auto& id : criteria) {
        bool is_module = false;
        for (const auto& m : suite_modules()) is_module = is_module || m == id;
        if (is_module) {
            const auto part = run_instance_suite(select_space(g), cfg, id);
            rs.insert(rs.end(), part.begin(), part.end());
            continue;
        }
        CriterionResult cr;
        try {
            cr = run_acceptance(id, cfg);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        rs.insert(rs.end(), cr.parts.begin(), cr.parts.end());
        rs.push_back(cr.summary);
    }
    return run_checks(out, rs);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Damek-Ricci space toolkit: geometry, Busemann Hessians, rank and visibility checks"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--preset", g.preset,
                   "catalog instance: heisenberg[=q], quaternionic[=q], quaternionic_mixed[=q], cayley, htype_k2")
        ->capture_default_str();
    app.add_option("--spec", g.spec, "JSON spec file {\"m\", \"k\", \"generators\"}; overrides --preset");
    app.add_option("--seed", g.seed, "seed for std::mt19937_64")->capture_default_str();
    app.add_option("--tol", g.tols, "tolerance override NAME=VALUE, NAME a check id (repeatable)");
    app.add_option("--format", g.format, "output format")
        ->check(CLI::IsMember({"text", "csv", "json-lines"}))
        ->capture_default_str();
    app.add_option("--out", g.out, "write output to PATH instead of stdout");

    std::function<int(Sink&)> action;

    auto* space = app.add_subcommand("space", "build, inspect and check an instance");
    space->require_subcommand(1);
    bool dump = false;
    auto* build = space->add_subcommand("build", "validate the Clifford data and print a report");
    build->add_flag("--dump", dump, "print the spec as JSON instead");
    build->callback([&] { action = [&](Sink& o) { return cmd_space_build(g, o, dump); }; });
    space->add_subcommand("info", "print n, m, k, Q and the Einstein constant")->callback([&] {
        action = [&](Sink& o) { return cmd_space_info(g, o); };
    });
    space->add_subcommand("check", "run the algebra and space invariant suites")->callback([&] {
        action = [&](Sink& o) { return cmd_space_check(g, o); };
    });

    std::vector<double> dir, point, tspan, probe, theta_dir;
    double t = 0.0, step = 1e-3;
    bool oracle = false, pole = false;

    auto* geodesic = app.add_subcommand("geodesic", "closed-form geodesics through e");
    geodesic->require_subcommand(1);
    auto* geval = geodesic->add_subcommand("eval", "point and velocity at time t");
    geval->add_option("--dir", dir, "unit direction V.. Y.. s (normalized if needed)")->required()->expected(1, -1);
    geval->add_option("--t", t, "time")->required();
    geval->add_flag("--oracle", oracle, "also integrate the geodesic ODE and report the deviation");
    geval->add_option("--step", step, "RK4 step for --oracle")->capture_default_str();
    geval->callback([&] { action = [&](Sink& o) { return cmd_geodesic_eval(g, o, dir, t, oracle, step); }; });

    double rmax = 40.0;
    int samples = 400;
    auto* volume = app.add_subcommand("volume", "volume density CSV: r, Theta, Theta e^{-Qr}, sigma");
    volume->add_option("--rmax", rmax)->capture_default_str();
    volume->add_option("--samples", samples)->capture_default_str();
    volume->callback([&] { action = [&](Sink& o) { return cmd_volume(g, o, rmax, samples); }; });

    auto* busemann = app.add_subcommand("busemann", "Busemann function of the endpoint of a geodesic through e");
    busemann->require_subcommand(1);
    double oracle_T = 30.0;
    std::optional<double> oracle_opt;
    for (const char* what : {"eval", "grad", "hess"}) {
        auto* sub = busemann->add_subcommand(what, std::string("Busemann ") + what);
        sub->add_option("--dir", dir, "direction V.. Y.. s of the defining geodesic")->expected(1, -1);
        sub->add_flag("--pole", pole, "use the pole (b = -log a)");
        sub->add_option("--point", point, "point U.. X.. a (default e)")->expected(1, -1);
        CLI::Option* o = nullptr;
        if (std::string(what) == "eval") o = sub->add_option("--oracle", oracle_T, "compare with d(p, gamma(T)) - T");
        const std::string w = what;
        sub->callback([&, w, o] {
            if (o && o->count()) oracle_opt = oracle_T;
            action = [&, w](Sink& s) { return cmd_busemann(g, s, w, dir, pole, point, oracle_opt); };
        });
    }

    int sweep = 0;
    auto* spectrum = app.add_subcommand("spectrum", "block decomposition and Hessian spectrum at e");
    spectrum->add_option("--dir", dir, "direction V.. Y.. s")->expected(1, -1);
    spectrum->add_option("--sweep", sweep, "random directions (uses --seed)");
    spectrum->callback([&] { action = [&](Sink& o) { return cmd_spectrum(g, o, dir, sweep); }; });

    double rank_tol = 1e-6;
    auto* rank = app.add_subcommand("rank", "rank of geodesics from the Busemann Hessian kernel");
    rank->add_option("--dir", dir, "direction V.. Y.. s")->expected(1, -1);
    rank->add_option("--sweep", sweep, "random directions (uses --seed)");
    rank->add_option("--zero-tol", rank_tol, "zero-eigenvalue threshold")->capture_default_str();
    rank->callback([&] { action = [&](Sink& o) { return cmd_rank(g, o, dir, sweep, rank_tol); }; });

    double dt = 1e-3;
    int rows_wanted = 20;
    auto* riccati = app.add_subcommand("riccati", "integrate S' + S^2 + R = 0 along a geodesic");
    riccati->add_option("--dir", dir, "direction V.. Y.. s")->required()->expected(1, -1);
    riccati->add_option("--tspan", tspan, "start and end time")->required()->expected(2);
    riccati->add_option("--dt", dt, "RK4 and finite-difference step")->capture_default_str();
    riccati->add_option("--rows", rows_wanted, "approximate number of output rows")->capture_default_str();
    riccati->callback([&] { action = [&](Sink& o) { return cmd_riccati(g, o, dir, tspan, dt, rows_wanted); }; });

    double horizon = 50.0, vstep = 0.5;
    auto* vis = app.add_subcommand("visibility", "q(t) = b(gamma1(t)) along a transverse probe");
    vis->add_option("--theta-dir", theta_dir, "direction whose endpoint is theta")->expected(1, -1);
    vis->add_flag("--pole", pole, "theta = pole");
    vis->add_option("--probe", probe, "probe velocity at the start point")->required()->expected(1, -1);
    vis->add_option("--point", point, "start point U.. X.. a (default e)")->expected(1, -1);
    vis->add_option("--horizon", horizon)->capture_default_str();
    vis->add_option("--step", vstep, "output spacing")->capture_default_str();
    vis->callback([&] {
        action = [&](Sink& o) { return cmd_visibility(g, o, theta_dir, pole, probe, point, horizon, vstep); };
    });

    std::string module;
    std::vector<std::string> check_ids;
    bool acceptance = false;
    auto* verify = app.add_subcommand("verify", "run the invariant suites (default) or acceptance criteria");
    verify->add_option("--module", module, "restrict the suite to one module");
    verify->add_option("--check", check_ids, "criterion id (AC01..AC12) or module name (repeatable)");
    verify->add_flag("--acceptance", acceptance, "run all acceptance criteria");
    verify->callback([&] { action = [&](Sink& o) { return cmd_verify(g, o, module, check_ids, acceptance); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    std::ofstream file;
    if (!g.out.empty()) {
        file.open(g.out);
        if (!file) {
            std::cerr << "error: cannot open '" << g.out << "' for writing\n";
            return kIo;
        }
    }
    Sink sink(g.out.empty() ? std::cout : file, g.format);
    try {
        const int rc = action(sink);
        if (file.is_open() && !file.good()) {
            std::cerr << "error: write to '" << g.out << "' failed\n";
            return kIo;
        }
        return rc;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kIo;
    } catch (const SpecFormatError& e) {
        std::cerr << "invalid spec: " << e.what() << '\n';
        return kCheckFailure;
    } catch (const CliffordRelationError& e) {
        std::cerr << "invalid spec: " << e.what() << '\n';
        return kCheckFailure;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kCheckFailure;
    }
}
