#pragma once

#include <algorithm>
#include <array>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "rdx/io.hpp"

namespace rdx::cli {

using io::json;
using io::num;

enum class Status { Ok, Warning, Error };

inline const char* to_string(Status s) {
    switch (s) {
        case Status::Ok: return "Ok";
        case Status::Warning: return "Warning";
        case Status::Error: return "Error";
    }
    return "?";
}

struct CommandResult {
    Status status = Status::Ok;
    json payload = json::object();
    std::vector<std::string> artifacts;
    std::string body;  // CSV or table printed in text mode
    int exit_code = 0;
};

struct Globals {
    bool json_mode = false;
    std::string out_dir;
    unsigned long long seed = 0;
};

struct DescOpts {
    double m = 1, p = 1, N = 1, sigma1 = 0, sigma2 = 0;
    EquationDescriptor make() const { return validate(RawParams{m, p, N, sigma1, sigma2}); }
};

inline void add_desc(CLI::App* c, DescOpts& d) {
    c->add_option("--m", d.m, "diffusion exponent")->capture_default_str();
    c->add_option("--p", d.p, "reaction exponent")->capture_default_str();
    c->add_option("--N", d.N, "dimension")->capture_default_str();
    c->add_option("--sigma1", d.sigma1, "weight exponent of u_t")->capture_default_str();
    c->add_option("--sigma2", d.sigma2, "weight exponent of u^p")->capture_default_str();
}

inline std::string out_path(const Globals& g, const std::string& name) {
    std::filesystem::create_directories(g.out_dir);
    return (std::filesystem::path(g.out_dir) / name).string();
}

inline void emit_file(CommandResult& r, const Globals& g, const std::string& name, const std::string& text) {
    auto path = out_path(g, name);
    io::write_text(path, text);
    r.artifacts.push_back(path);
}

// scalar leaves as "a.b = v" lines
inline void flatten(const json& j, const std::string& prefix, std::ostream& o) {
    if (j.is_object()) {
        for (auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, o);
    } else if (j.is_array() && !j.empty() && j.front().is_structured()) {
        for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", o);
    } else {
        o << prefix << " = " << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
    }
}

inline std::string csv_rows(const std::vector<std::array<double, 3>>& rows, const char* header) {
    std::ostringstream o;
    o << header << '\n';
    for (auto& r : rows) o << fmt_num(r[0]) << ',' << fmt_num(r[1]) << ',' << io::csv_num(r[2]) << '\n';
    return o.str();
}

inline std::vector<double> parse_list(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            v.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw UsageError("not a number list: '" + s + "'");
        }
    }
    if (v.empty()) throw UsageError("empty number list");
    return v;
}

// named closed-form solutions shared by `solution` and `verify`
struct SolutionOpts {
    std::string name;
    DescOpts d;
    double T = 1, c = 0;
};

inline ClosedFormSolution make_solution(const SolutionOpts& o) {
    if (o.name == "stationary") {
        auto d = o.d.make();
        return stationary_singular(d);
    }
    if (o.name == "explicit-p1") return explicit_backward_p1(o.d.m, o.d.sigma1, o.T);
    if (o.name == "tw-composed") {
        auto d = o.d.make();
        if (d.m != 1 || d.sigma1 != -2) throw KindMismatch("tw-composed needs --m 1 --sigma1 -2");
        double q = (d.sigma2 + 2) / (d.p - 1);
        double lam = q * (d.N - 2 - q);
        if (!(lam > 0)) throw KindMismatch("tw-composed needs lambda=q(N-2-q)>0, got " + fmt_num(lam));
        double c = o.c > 0 ? o.c : wave_speed_threshold(lam, d.p) * 1.1;
        return traveling_wave_composed(d, traveling_wave_solve(lam, d.p, c));
    }
    throw UsageError("unknown solution '" + o.name + "' (stationary, explicit-p1, tw-composed)");
}

inline CommandResult cmd_exponents(const DescOpts& o, bool csv) {
    CommandResult r;
    auto d = o.make();
    auto t = exponent_table(d);
    r.payload = io::to_json(t);
    r.payload["descriptor"] = io::to_json(d);
    if (csv) {
        r.body = io::to_csv(t);
    } else {
        std::ostringstream s;
        for (auto& e : t.entries) s << e.name << " = " << io::csv_num(e.value) << "    " << e.formula << '\n';
        r.body = s.str();
    }
    if (!d.warnings.empty()) r.status = Status::Warning;
    return r;
}

inline CommandResult cmd_classify(const DescOpts& o) {
    CommandResult r;
    auto d = o.make();
    r.payload = io::to_json(classify_regime(d));
    if (!d.warnings.empty()) r.status = Status::Warning;
    return r;
}

inline CommandResult cmd_transform(const DescOpts& o, const std::string& kind, const std::string& apply, bool inverse,
                                   const Globals& g) {
    CommandResult r;
    auto d = o.make();
    auto M = make_transform(kind, d);
    json mj = io::to_json(M);
    mj["Nbar"] = num(M.target.N);
    mj["sigma"] = num(M.target.sigma2);
    r.payload = {{"map", mj}, {"source", io::to_json(M.source)}, {"target", io::to_json(M.target)}};
    r.payload["theta"] = num(M.theta);
    r.payload["Nbar"] = num(M.target.N);
    r.payload["sigma"] = num(M.target.sigma2);
    if (M.warning) r.status = Status::Warning;
    if (!apply.empty()) {
        auto in = io::read_samples_csv(apply);
        auto outs = inverse ? pull_back_samples(M, in) : push_forward_samples(M, in);
        auto csv = io::samples_csv(outs, inverse ? "r,t,u" : "z,tau,w");
        r.payload["samples"] = outs.size();
        if (!g.out_dir.empty()) emit_file(r, g, "transformed.csv", csv);
        else r.body = csv;
    }
    return r;
}

inline CommandResult cmd_solution(const SolutionOpts& so, const std::string& times, double r_min, double r_max,
                                  std::size_t nr, const Globals& g) {
    CommandResult r;
    auto s = make_solution(so);
    std::vector<double> ts = times.empty() ? std::vector<double>{so.name == "explicit-p1" ? 0.5 * so.T : 0.5}
                                           : parse_list(times);
    if (nr < 2) throw UsageError("--nr must be at least 2");
    std::vector<std::array<double, 3>> rows;
    for (double t : ts) {
        double lo = r_min, hi = r_max;
        if (!(hi > lo)) {
            if (s.has_interface()) lo = 0, hi = 1.1 * s.interface_radius(t);
            else lo = s.singular_at_origin ? 0.1 : 0.0, hi = 5;
        }
        for (double x : num::linspace(lo, hi, nr)) rows.push_back({x, t, s(x, t)});
    }
    r.payload = io::to_json(s);
    r.payload["samples"] = rows.size();
    auto csv = csv_rows(rows, "r,t,u");
    if (!g.out_dir.empty()) emit_file(r, g, "solution.csv", csv);
    else r.body = csv;
    return r;
}

struct ProfileOpts {
    DescOpts d;
    std::string form = "backward", behavior = "Q1", target = "compact-support";
    double T = 1;
    bool wave = false;
    double lambda = 0, c = 0;
    ShootOptions shoot;
};

inline CommandResult cmd_profile(const ProfileOpts& po, const Globals& g) {
    CommandResult r;
    std::ostringstream csv;
    if (po.wave) {
        auto w = traveling_wave_solve(po.lambda, po.d.p, po.c);
        r.payload = io::to_json(w);
        r.payload["speed_threshold"] = num(wave_speed_threshold(po.lambda, po.d.p));
        csv << "y,f,fprime\n";
        for (std::size_t i = 0; i < w.y.size(); ++i)
            csv << fmt_num(w.y[i]) << ',' << fmt_num(w.f[i]) << ',' << fmt_num(w.fprime[i]) << '\n';
    } else {
        auto d = po.d.make();
        auto form = self_similar_exponents(d, form_from_string(po.form), po.T);
        auto P = shoot(d, form, behavior_from_string(po.behavior), target_from_string(po.target), po.shoot);
        r.payload = io::to_json(P);
        if (!P.descriptor.warnings.empty()) r.status = Status::Warning;
        csv << "xi,f,fprime\n";
        for (std::size_t i = 0; i < P.xi.size(); ++i)
            csv << fmt_num(P.xi[i]) << ',' << fmt_num(P.f[i]) << ',' << io::csv_num(P.fprime[i]) << '\n';
    }
    if (!g.out_dir.empty()) emit_file(r, g, "profile.csv", csv.str());
    else r.body = csv.str();
    return r;
}

inline json run_one(const io::RunConfig& rc, const Globals& g, const std::string& sub, std::vector<std::string>& files) {
    RunResult res = integrate(rc.descriptor, rc.initial, rc.grid);
    json rep = io::to_json(res);
    rep["descriptor"] = io::to_json(rc.descriptor);
    rep["grid"] = io::to_json(rc.grid);
    rep["initial"] = io::to_json(rc.initial);
    if (!g.out_dir.empty()) {
        auto dir = sub.empty() ? std::filesystem::path(g.out_dir) : std::filesystem::path(g.out_dir) / sub;
        std::filesystem::create_directories(dir);
        auto w = [&](const char* n, const std::string& text) {
            auto p = (dir / n).string();
            io::write_text(p, text);
            files.push_back(p);
        };
        w("snapshots.csv", io::snapshots_csv(res.solution));
        w("history.csv", io::history_csv(res.solution));
        json full = rep;
        full["schema"] = io::kSchema;
        w("report.json", full.dump(2) + "\n");
    }
    return rep;
}

inline CommandResult cmd_simulate(const std::string& config, unsigned threads, const Globals& g) {
    CommandResult r;
    auto rc = io::read_run_config(config);
    if (rc.sweep_values.empty()) {
        r.payload = run_one(rc, g, "", r.artifacts);
        return r;
    }
    const std::size_t n = rc.sweep_values.size();
    std::vector<json> reps(n);
    std::vector<std::vector<std::string>> files(n);
    std::vector<std::string> errors(n);
    std::size_t next = 0;
    std::mutex mu;
    auto worker = [&] {
        for (;;) {
            std::size_t k;
            {
                std::lock_guard<std::mutex> lk(mu);
                if (next >= n) return;
                k = next++;
            }
            try {
                auto rk = io::with_param(rc, rc.sweep_param, rc.sweep_values[k]);
                reps[k] = run_one(rk, g, "run_" + std::to_string(k), files[k]);
            } catch (const Error& e) {
                errors[k] = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < std::max(1u, std::min<unsigned>(threads, unsigned(n))); ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    json runs = json::array();
    for (std::size_t k = 0; k < n; ++k) {
        json e = {{"param", rc.sweep_param}, {"value", num(rc.sweep_values[k])}};
        if (errors[k].empty()) e["report"] = reps[k];
        else e["error"] = errors[k], r.status = Status::Warning;
        runs.push_back(e);
        for (auto& f : files[k]) r.artifacts.push_back(f);
    }
    r.payload = {{"sweep", runs}};
    return r;
}

struct VerifyOpts {
    SolutionOpts sol;
    std::string samples;
    double h = 1e-3, ht = 0, t = kNaN, r_min = kNaN, r_max = kNaN, tol = 1e-6;
    std::size_t n = 91, random = 0;
    bool one_sided = false;
};

inline CommandResult cmd_verify(const VerifyOpts& v, const Globals& g) {
    CommandResult r;
    ResidualStats st;
    json info;
    if (!v.samples.empty()) {
        auto d = v.sol.d.make();
        auto s = io::read_samples_csv(v.samples);
        std::vector<double> rs, ts;
        for (auto& x : s) {
            if (std::find(rs.begin(), rs.end(), x.x) == rs.end()) rs.push_back(x.x);
            if (std::find(ts.begin(), ts.end(), x.t) == ts.end()) ts.push_back(x.t);
        }
        std::sort(rs.begin(), rs.end());
        std::sort(ts.begin(), ts.end());
        if (rs.size() * ts.size() != s.size()) throw DomainError("samples do not form a full (r,t) grid");
        std::vector<std::vector<double>> u(ts.size(), std::vector<double>(rs.size(), kNaN));
        for (auto& x : s) {
            auto i = std::lower_bound(rs.begin(), rs.end(), x.x) - rs.begin();
            auto k = std::lower_bound(ts.begin(), ts.end(), x.t) - ts.begin();
            u[k][i] = x.v;
        }
        st = residual_on_grid(d, rs, ts, u);
        info = {{"source", v.samples}, {"descriptor", io::to_json(d)}, {"nr", rs.size()}, {"nt", ts.size()}};
    } else {
        auto s = make_solution(v.sol);
        double t = std::isnan(v.t) ? (v.sol.name == "explicit-p1" ? 0.5 * v.sol.T : 0.3) : v.t;
        double lo = v.r_min, hi = v.r_max;
        if (std::isnan(lo) || std::isnan(hi)) {
            if (s.has_interface()) lo = 0.2 * s.interface_radius(t), hi = 0.8 * s.interface_radius(t);
            else lo = 0.5, hi = 5;
        }
        std::vector<PointRT> pts;
        if (v.random > 0) {
            std::mt19937_64 rng(g.seed);
            std::uniform_real_distribution<double> U(lo, hi);
            for (std::size_t i = 0; i < v.random; ++i) pts.push_back({U(rng), t});
        } else {
            for (double x : num::linspace(lo, hi, v.n)) pts.push_back({x, t});
        }
        ResidualOptions o;
        o.h_r = v.h;
        o.h_t = v.ht > 0 ? v.ht : v.h;
        if (v.one_sided) o.r_dir = -1;
        st = residual(s.descriptor, s.evaluate, pts, o);
        info = {{"solution", s.name}, {"descriptor", io::to_json(s.descriptor)}, {"t", num(t)},
                {"r_min", num(lo)},   {"r_max", num(hi)},                     {"h", num(o.h_r)}, {"h_t", num(o.h_t)}};
    }
    r.payload = info;
    r.payload["residual"] = io::to_json(st);
    r.payload["tol"] = num(v.tol);
    r.payload["pass"] = st.max < v.tol;
    if (!(st.max < v.tol)) r.status = Status::Warning;
    return r;
}

// parse argv, dispatch, print; exit code in the result
inline CommandResult run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"radial reaction-diffusion toolkit", "rdx"};
    app.require_subcommand(1);
    Globals g;
    app.add_flag("--json", g.json_mode, "machine-readable JSON output");
    app.add_option("--out", g.out_dir, "output directory for written files");
    app.add_option("--seed", g.seed, "seed for randomized sampling");

    DescOpts dex, dcl, dtr;
    bool csv = false;
    auto* ex = app.add_subcommand("exponents", "critical exponents table")->fallthrough();
    add_desc(ex, dex);
    ex->add_flag("--csv", csv, "one row per entry");

    auto* cl = app.add_subcommand("classify", "regime report")->fallthrough();
    add_desc(cl, dcl);

    std::string kind, apply;
    bool inverse = false;
    auto* tr = app.add_subcommand("transform", "coordinate maps between families")->fallthrough();
    add_desc(tr, dtr);
    tr->add_option("--kind", kind, "main|second|euler|fisher")->required();
    tr->add_option("--apply", apply, "CSV of (r,t,u) samples to map");
    tr->add_flag("--inverse", inverse, "pull (z,tau,w) samples back instead");

    SolutionOpts so;
    std::string times;
    double s_rmin = 0, s_rmax = 0;
    std::size_t s_nr = 101;
    auto* so_c = app.add_subcommand("solution", "sample a closed-form solution")->fallthrough();
    so_c->add_option("--name", so.name, "stationary|explicit-p1|tw-composed")->required();
    add_desc(so_c, so.d);
    so_c->add_option("--T", so.T, "blow-up time");
    so_c->add_option("--c", so.c, "wave speed");
    so_c->add_option("--times", times, "comma-separated times");
    so_c->add_option("--r-min", s_rmin);
    so_c->add_option("--r-max", s_rmax);
    so_c->add_option("--nr", s_nr);

    ProfileOpts po;
    auto* pr = app.add_subcommand("profile", "self-similar profile by shooting, or a traveling wave")->fallthrough();
    add_desc(pr, po.d);
    pr->add_option("--form", po.form, "forward|backward|exponential|separate");
    pr->add_option("--behavior", po.behavior, "origin class");
    pr->add_option("--target", po.target, "compact-support|decay|bounded");
    pr->add_option("--T", po.T);
    pr->add_option("--eps", po.shoot.eps, "start offset from the origin");
    pr->add_option("--xi-max", po.shoot.xi_max);
    pr->add_option("--lo", po.shoot.lo);
    pr->add_option("--hi", po.shoot.hi);
    pr->add_option("--scan-points", po.shoot.scan_points);
    pr->add_flag("--wave", po.wave, "traveling wave of the reversed Fisher equation");
    pr->add_option("--lambda", po.lambda);
    pr->add_option("--c", po.c);

    std::string config;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    auto* si = app.add_subcommand("simulate", "radial finite-volume run from a JSON config")->fallthrough();
    si->add_option("--config", config, "run config")->required();
    si->add_option("--threads", threads, "workers for sweeps");
    si->add_flag("--sweep", "accepted for clarity; sweeps come from the config");

    VerifyOpts vo;
    auto* ve = app.add_subcommand("verify", "residual oracle on a named solution or a CSV grid")->fallthrough();
    ve->add_option("--solution", vo.sol.name);
    ve->add_option("--samples", vo.samples, "CSV of (r,t,u) on a full uniform grid");
    add_desc(ve, vo.sol.d);
    ve->add_option("--T", vo.sol.T);
    ve->add_option("--c", vo.sol.c);
    ve->add_option("--hr", vo.h, "radial step");
    ve->add_option("--ht", vo.ht, "time step (defaults to --hr)");
    ve->add_option("--t", vo.t);
    ve->add_option("--r-min", vo.r_min);
    ve->add_option("--r-max", vo.r_max);
    ve->add_option("--n", vo.n);
    ve->add_option("--random", vo.random, "random sample points (uses --seed)");
    ve->add_option("--tol", vo.tol);
    ve->add_flag("--one-sided", vo.one_sided);

    CommandResult res;
    std::string cmd;
    try {
        try {
            app.parse(argc, argv);
        } catch (const CLI::CallForHelp&) {
            out << app.help();
            return res;
        } catch (const CLI::ParseError& e) {
            throw UsageError(e.what());
        }
        if (ex->parsed()) cmd = "exponents", res = cmd_exponents(dex, csv);
        else if (cl->parsed()) cmd = "classify", res = cmd_classify(dcl);
        else if (tr->parsed()) cmd = "transform", res = cmd_transform(dtr, kind, apply, inverse, g);
        else if (so_c->parsed()) cmd = "solution", res = cmd_solution(so, times, s_rmin, s_rmax, s_nr, g);
        else if (pr->parsed()) cmd = "profile", res = cmd_profile(po, g);
        else if (si->parsed()) cmd = "simulate", res = cmd_simulate(config, threads, g);
        else if (ve->parsed()) {
            cmd = "verify";
            if (vo.sol.name.empty() == vo.samples.empty()) throw UsageError("verify needs exactly one of --solution, --samples");
            res = cmd_verify(vo, g);
        }
    } catch (const Error& e) {
        res = CommandResult{};
        res.status = Status::Error;
        res.exit_code = e.kind() == "UsageError" ? 2 : 1;
        res.payload = {{"error", {{"kind", e.kind()}, {"message", e.what()}}}};
    } catch (const std::exception& e) {
        res = CommandResult{};
        res.status = Status::Error;
        res.exit_code = 1;
        res.payload = {{"error", {{"kind", "InternalError"}, {"message", e.what()}}}};
    }

    json doc = res.payload;
    doc["schema"] = io::kSchema;
    if (!cmd.empty()) doc["command"] = cmd;
    doc["status"] = to_string(res.status);
    doc["artifacts"] = res.artifacts;
    if (g.json_mode) {
        out << doc.dump(2) << '\n';
    } else if (res.status == Status::Error) {
        err << "rdx: " << doc["error"]["message"].get<std::string>() << '\n';
    } else if (!res.body.empty()) {
        out << res.body;
        if (res.status == Status::Warning) err << "rdx: status Warning\n";
    } else {
        flatten(doc, "", out);
    }
    return res;
}

}  // namespace rdx::cli
