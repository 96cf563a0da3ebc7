#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rdx/eqmodel.hpp"
#include "rdx/pde.hpp"
#include "rdx/profiles.hpp"
#include "rdx/solutions.hpp"
#include "rdx/transforms.hpp"

namespace rdx::io {

using json = nlohmann::json;

inline constexpr const char* kSchema = "rdx/1";

// 12 significant digits; infinities as "inf", NaN as null
inline json num(double v) {
    if (std::isnan(v)) return nullptr;
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return std::stod(fmt_num(v));
}

inline json num(const std::optional<double>& v) { return v ? num(*v) : json(nullptr); }

inline double get_num(const json& j, const char* key, double dflt) {
    if (!j.contains(key) || j.at(key).is_null()) return dflt;
    const json& v = j.at(key);
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        if (s == "inf") return kInf;
        if (s == "-inf") return -kInf;
        throw ConfigError(std::string("field '") + key + "' must be a number");
    }
    if (!v.is_number()) throw ConfigError(std::string("field '") + key + "' must be a number");
    return v.get<double>();
}

inline std::string get_str(const json& j, const char* key, const std::string& dflt) {
    if (!j.contains(key)) return dflt;
    if (!j.at(key).is_string()) throw ConfigError(std::string("field '") + key + "' must be a string");
    return j.at(key).get<std::string>();
}

inline json to_json(const EquationDescriptor& d) {
    json c = json::object();
    for (auto& [k, v] : d.coeffs) c[k] = num(v);
    json j = {{"family", to_string(d.family)}, {"m", num(d.m)},           {"p", num(d.p)},
              {"N", num(d.N)},                 {"sigma1", num(d.sigma1)}, {"sigma2", num(d.sigma2)},
              {"coeffs", c}};
    if (!d.warnings.empty()) j["warnings"] = d.warnings;
    return j;
}

inline EquationDescriptor descriptor_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("descriptor must be an object");
    RawParams r;
    r.m = get_num(j, "m", 1), r.p = get_num(j, "p", 1), r.N = get_num(j, "N", 1);
    r.sigma1 = get_num(j, "sigma1", 0), r.sigma2 = get_num(j, "sigma2", 0);
    EquationDescriptor d = validate(r);
    if (j.contains("family")) {
        Family f = family_from_string(j.at("family").get<std::string>());
        if (f == Family::EulerForm || f == Family::FisherForm || f == Family::ConvectionForm) d.family = f;
        else if (f != d.family) d.warnings.push_back("family recomputed from the weights as " + std::string(to_string(d.family)));
    }
    if (j.contains("coeffs")) {
        if (!j.at("coeffs").is_object()) throw ConfigError("coeffs must be an object");
        for (auto& [k, v] : j.at("coeffs").items()) {
            if (!v.is_number()) throw ConfigError("coefficient '" + k + "' must be a number");
            d.coeffs[k] = v.get<double>();
        }
    }
    return d;
}

inline json to_json(const SelfSimilarForm& f) {
    json j = {{"kind", to_string(f.kind)}, {"alpha", num(f.alpha)}, {"beta", num(f.beta)}};
    if (f.T) j["T"] = num(*f.T);
    return j;
}

inline json to_json(const RegimeReport& r) {
    return {{"descriptor", to_json(r.descriptor)},
            {"L_sigma", num(r.L_value)},
            {"L", num(r.L_transformed)},
            {"p_F", num(r.fujita)},
            {"mu", num(r.second_critical)},
            {"expected_form", to_string(r.expected_form)},
            {"separate_variable_status", to_string(r.separate_variable_status)},
            {"complete_blowup", r.complete_blowup ? json(*r.complete_blowup) : json(nullptr)},
            {"type2_possible", r.type2_possible ? json(*r.type2_possible) : json(nullptr)},
            {"notes", r.notes}};
}

inline json to_json(const ExponentTable& t) {
    json entries = json::array(), values = json::object();
    for (auto& e : t.entries) {
        entries.push_back({{"name", e.name},
                           {"value", num(e.value)},
                           {"defined", e.defined},
                           {"formula", e.formula},
                           {"note", e.note}});
        values[e.name] = num(e.value);
    }
    return {{"entries", entries}, {"values", values}};
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string o = "\"";
    for (char c : s) o += c == '"' ? std::string("\"\"") : std::string(1, c);
    return o + "\"";
}

inline std::string csv_num(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    return fmt_num(v);
}

inline std::string to_csv(const ExponentTable& t) {
    std::string s = "name,value,defined,citation\n";
    for (auto& e : t.entries)
        s += e.name + "," + csv_num(e.value) + "," + (e.defined ? "true" : "false") + "," + csv_field(e.formula) + "\n";
    return s;
}

inline json to_json(const CoordinateMap& M) {
    json j = {{"kind", M.kind},
              {"delta", num(M.delta)},
              {"theta", num(M.theta)},
              {"a", num(M.a)},
              {"C", num(M.C)},
              {"log_radial", M.log_radial},
              {"warning", M.warning},
              {"balance_defect", num(M.balance_defect())},
              {"notes", M.notes}};
    if (M.shift_K) j["shift_K"] = num(*M.shift_K);
    return j;
}

inline json to_json(const ClosedFormSolution& s) {
    json c = json::object();
    for (auto& [k, v] : s.constants) c[k] = num(v);
    return {{"name", s.name},
            {"descriptor", to_json(s.descriptor)},
            {"form", to_json(s.form)},
            {"xi0", num(s.xi0)},
            {"has_interface", s.has_interface()},
            {"singular_at_origin", s.singular_at_origin},
            {"constants", c},
            {"notes", s.notes}};
}

inline json to_json(const Profile& P) {
    return {{"descriptor", to_json(P.descriptor)},
            {"form", to_json(P.form)},
            {"behavior", to_string(P.behavior_class)},
            {"shoot_param", num(P.shoot_param)},
            {"xi0", num(P.xi0)},
            {"iterations", P.iterations},
            {"interface_flux", num(P.interface_flux)},
            {"tail_exponent", num(P.tail_exponent)},
            {"samples", P.xi.size()}};
}

inline json to_json(const TravelingWave& w) {
    return {{"lambda", num(w.lambda)}, {"p", num(w.p)},           {"c", num(w.c)},
            {"f_star", num(w.f_star)}, {"decay_rate", num(w.decay_rate)}, {"monotone", w.monotone},
            {"samples", w.y.size()},   {"y_min", num(w.y.front())}, {"y_max", num(w.y.back())}};
}

inline json to_json(const ResidualStats& s) {
    return {{"max", num(s.max)}, {"rms", num(s.rms)}, {"n", s.per_point.size()}};
}

// run configuration

struct InitialData {
    std::string name = "gaussian";
    double amplitude = 1, width = 1, center = 0, power = 2, value = 0;

    double operator()(double r) const {
        if (name == "zero") return 0.0;
        if (name == "constant") return value;
        if (name == "gaussian") return amplitude * std::exp(-std::pow((r - center) / width, 2));
        if (name == "bump") {
            double s = 1 - std::pow((r - center) / width, 2);
            return s > 0 ? amplitude * std::pow(s, power) : 0.0;
        }
        if (name == "front") return amplitude / (1 + std::exp((r - center) / width));
        if (name == "plateau") return value + amplitude * std::exp(-std::pow((r - center) / width, 2));
        throw ConfigError("unknown initial data '" + name + "'");
    }
};

inline InitialData initial_from_json(const json& j) {
    InitialData u;
    u.name = get_str(j, "name", "gaussian");
    u.amplitude = get_num(j, "amplitude", 1);
    u.width = get_num(j, "width", 1);
    u.center = get_num(j, "center", 0);
    u.power = get_num(j, "power", 2);
    u.value = get_num(j, "value", 0);
    if (!(u.width > 0)) throw ConfigError("initial data width must be positive");
    u(1.0);
    return u;
}

inline json to_json(const InitialData& u) {
    return {{"name", u.name},       {"amplitude", num(u.amplitude)}, {"width", num(u.width)},
            {"center", num(u.center)}, {"power", num(u.power)},       {"value", num(u.value)}};
}

inline Grading grading_from_string(const std::string& s) {
    if (s == "Uniform") return Grading::Uniform;
    if (s == "Geometric") return Grading::Geometric;
    if (s == "Power") return Grading::Power;
    throw ConfigError("unknown grading '" + s + "'");
}
inline InnerBC inner_from_string(const std::string& s) {
    if (s == "SymmetryNeumann") return InnerBC::SymmetryNeumann;
    if (s == "TruncatedDirichlet") return InnerBC::TruncatedDirichlet;
    if (s == "TruncatedNeumann") return InnerBC::TruncatedNeumann;
    throw ConfigError("unknown inner_bc '" + s + "'");
}
inline OuterBC outer_from_string(const std::string& s) {
    if (s == "Dirichlet") return OuterBC::Dirichlet;
    if (s == "ZeroFlux") return OuterBC::ZeroFlux;
    throw ConfigError("unknown outer_bc '" + s + "'");
}

// boundary values in configs are constants
inline GridConfig grid_from_json(const json& j) {
    GridConfig c;
    c.r_min = get_num(j, "r_min", c.r_min);
    c.r_max = get_num(j, "r_max", c.r_max);
    c.nr = std::size_t(get_num(j, "nr", double(c.nr)));
    c.grading = grading_from_string(get_str(j, "grading", "Uniform"));
    c.grading_param = get_num(j, "grading_param", c.grading_param);
    c.t_end = get_num(j, "t_end", c.t_end);
    c.dt_init = get_num(j, "dt_init", c.dt_init);
    c.dt_safety = get_num(j, "dt_safety", c.dt_safety);
    c.inner_bc = inner_from_string(get_str(j, "inner_bc", "SymmetryNeumann"));
    c.outer_bc = outer_from_string(get_str(j, "outer_bc", "ZeroFlux"));
    double iv = get_num(j, "inner_value", 0), ov = get_num(j, "outer_value", 0);
    if (c.inner_bc == InnerBC::TruncatedDirichlet) c.inner_value = [iv](double) { return iv; };
    if (c.outer_bc == OuterBC::Dirichlet) c.outer_value = [ov](double) { return ov; };
    c.blowup_threshold = get_num(j, "blowup_threshold", c.blowup_threshold);
    c.dt_min = get_num(j, "dt_min", c.dt_min);
    c.n_snapshots = std::size_t(get_num(j, "n_snapshots", double(c.n_snapshots)));
    c.max_steps = std::size_t(get_num(j, "max_steps", double(c.max_steps)));
    c.history_growth = get_num(j, "history_growth", c.history_growth);
    c.history_points = std::size_t(get_num(j, "history_points", double(c.history_points)));
    if (j.contains("norms")) {
        for (auto& n : j.at("norms")) {
            NormSpec s;
            s.name = get_str(n, "name", "norm");
            s.q = get_num(n, "q", 1);
            s.w = get_num(n, "w", 0);
            c.norms.push_back(s);
        }
    }
    return c;
}

inline json to_json(const GridConfig& c) {
    json norms = json::array();
    for (auto& n : c.norms) norms.push_back({{"name", n.name}, {"q", num(n.q)}, {"w", num(n.w)}});
    json j = {{"r_min", num(c.r_min)},
              {"r_max", num(c.r_max)},
              {"nr", c.nr},
              {"grading", to_string(c.grading)},
              {"grading_param", num(c.grading_param)},
              {"t_end", num(c.t_end)},
              {"dt_init", num(c.dt_init)},
              {"dt_safety", num(c.dt_safety)},
              {"inner_bc", to_string(c.inner_bc)},
              {"outer_bc", to_string(c.outer_bc)},
              {"blowup_threshold", num(c.blowup_threshold)},
              {"dt_min", num(c.dt_min)},
              {"n_snapshots", c.n_snapshots},
              {"max_steps", c.max_steps},
              {"history_growth", num(c.history_growth)},
              {"history_points", c.history_points},
              {"norms", norms}};
    if (c.inner_value) j["inner_value"] = num(c.inner_value(0));
    if (c.outer_value) j["outer_value"] = num(c.outer_value(0));
    return j;
}

struct RunConfig {
    EquationDescriptor descriptor;
    GridConfig grid;
    InitialData initial;
    std::string sweep_param;
    std::vector<double> sweep_values;
};

inline RunConfig run_config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("run config must be a JSON object");
    if (j.contains("schema") && j.at("schema") != kSchema)
        throw ConfigError("unsupported schema " + j.at("schema").dump());
    for (auto k : {"descriptor", "grid", "initial"})
        if (!j.contains(k)) throw ConfigError(std::string("run config lacks '") + k + "'");
    RunConfig rc;
    rc.descriptor = descriptor_from_json(j.at("descriptor"));
    rc.grid = grid_from_json(j.at("grid"));
    rc.initial = initial_from_json(j.at("initial"));
    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        rc.sweep_param = get_str(s, "param", "");
        if (!s.contains("values") || !s.at("values").is_array()) throw ConfigError("sweep needs a 'values' array");
        for (auto& v : s.at("values")) rc.sweep_values.push_back(v.get<double>());
        if (rc.sweep_values.empty()) throw ConfigError("sweep values are empty");
    }
    validate(rc.grid, rc.descriptor);
    return rc;
}

inline RunConfig read_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
    }
    return run_config_from_json(j);
}

// a copy of the run with one descriptor or initial-data field replaced
inline RunConfig with_param(RunConfig rc, const std::string& name, double v) {
    auto& d = rc.descriptor;
    if (name == "m") d.m = v;
    else if (name == "p") d.p = v;
    else if (name == "N") d.N = v;
    else if (name == "sigma1") d.sigma1 = v;
    else if (name == "sigma2") d.sigma2 = v;
    else if (name == "amplitude") rc.initial.amplitude = v;
    else if (name == "width") rc.initial.width = v;
    else throw ConfigError("cannot sweep over '" + name + "'");
    if (d.radial()) d = validate({d.m, d.p, d.N, d.sigma1, d.sigma2});
    return rc;
}

inline json to_json(const RunResult& r) {
    const auto& S = r.solution;
    const auto& B = r.blowup;
    json hist_last = json::object();
    if (!S.history.empty()) {
        hist_last = {{"t", num(S.history.back().t)}, {"sup", num(S.history.back().sup)}};
    }
    return {{"status", to_string(S.status)},
            {"t_detect", num(S.t_detect)},
            {"steps", S.steps},
            {"snapshots", S.t.size()},
            {"history_points", S.history.size()},
            {"final", hist_last},
            {"warnings", S.warnings},
            {"blowup",
             {{"detected", B.detected},
              {"t_detect", num(B.t_detect)},
              {"growth_exponent_fit", num(B.growth_exponent_fit)},
              {"reference_rate", num(B.reference_rate)},
              {"location", num(B.location)}}}};
}

inline void write_text(const std::string& path, const std::string& s) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << s;
}

inline std::string snapshots_csv(const GridSolution& S) {
    std::ostringstream o;
    o << "r,t,u\n";
    for (std::size_t k = 0; k < S.t.size(); ++k)
        for (std::size_t i = 0; i < S.r.size(); ++i)
            o << fmt_num(S.r[i]) << ',' << fmt_num(S.t[k]) << ',' << csv_num(S.u[k][i]) << '\n';
    return o.str();
}

inline std::string history_csv(const GridSolution& S) {
    std::ostringstream o;
    o << "t,sup,argmax";
    for (auto& n : S.norm_names) o << ',' << n;
    o << '\n';
    for (auto& h : S.history) {
        o << fmt_num(h.t) << ',' << csv_num(h.sup) << ',' << fmt_num(h.argmax);
        for (double v : h.norms) o << ',' << csv_num(v);
        o << '\n';
    }
    return o.str();
}

// (x,t,v) triples with a header line
inline std::vector<Sample3> read_samples_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open samples '" + path + "'");
    std::vector<Sample3> out;
    std::string line;
    std::size_t ln = 0;
    while (std::getline(in, line)) {
        ++ln;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string a, b, c;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c, ','))
            throw ConfigError("samples line " + std::to_string(ln) + " needs three columns");
        try {
            out.push_back({std::stod(a), std::stod(b), std::stod(c)});
        } catch (const std::exception&) {
            if (ln == 1) continue;  // header
            throw ConfigError("samples line " + std::to_string(ln) + " is not numeric");
        }
    }
    if (out.empty()) throw InsufficientData("no samples in '" + path + "'");
    return out;
}

inline std::string samples_csv(const std::vector<Sample3>& s, const char* header) {
    std::ostringstream o;
    o << header << '\n';
    for (auto& x : s) o << fmt_num(x.x) << ',' << fmt_num(x.t) << ',' << csv_num(x.v) << '\n';
    return o.str();
}

}  // namespace rdx::io
