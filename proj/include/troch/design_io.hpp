#pragma once

#include <cstdint>
#include <ctime>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "json.hpp"
#include "troch/design.hpp"
#include "troch/errors.hpp"
#include "troch/injection.hpp"

namespace troch {

using json = nlohmann::json;

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

namespace detail {

inline std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

/// UTC timestamp; honours SOURCE_DATE_EPOCH so runs can be reproduced
/// byte for byte.
inline std::string iso_timestamp() {
    std::time_t t = std::time(nullptr);
    if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) {
        char* end = nullptr;
        const long long v = std::strtoll(env, &end, 10);
        if (end != env) t = static_cast<std::time_t>(v);
    }
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

template <typename T>
T field(const json& j, const char* name) {
    if (!j.contains(name)) throw ConfigError(std::string("missing field \"") + name + "\"");
    try {
        return j.at(name).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("field \"") + name + "\": " + e.what());
    }
}

template <typename T>
T field_or(const json& j, const char* name, T fallback) {
    if (!j.contains(name)) return fallback;
    try {
        return j.at(name).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("field \"") + name + "\": " + e.what());
    }
}

}  // namespace detail

inline TrochoidType trochoid_type_from_string(const std::string& s) {
    if (s == "epitrochoid") return TrochoidType::Epitrochoid;
    if (s == "hypotrochoid") return TrochoidType::Hypotrochoid;
    throw ConfigError("field \"type\": expected \"epitrochoid\" or \"hypotrochoid\", got \"" + s +
                      "\"");
}

/// Parsed design configuration: the spec plus the requested design point
/// ("auto" or explicit coordinates).
struct DesignConfig {
    DesignSpec spec;
    bool auto_point = false;
    double R_c = 0.0;
    double d_c = 0.0;
    double delta = 0.0;  // perturbation-hardening margin
};

inline DesignConfig parse_design_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    DesignConfig cfg;
    cfg.spec.k = detail::field<int>(j, "k");
    const auto triple = detail::field<std::array<int, 3>>(j, "triple");
    cfg.spec.triple = triple;
    cfg.spec.type = trochoid_type_from_string(detail::field<std::string>(j, "type"));
    cfg.spec.d0_min = detail::field<double>(j, "d0_min");
    cfg.spec.d_ct = detail::field<double>(j, "d_ct");
    cfg.spec.d_cr = detail::field<double>(j, "d_cr");
    cfg.spec.d0_max = detail::field_or<double>(j, "d0_max", 0.0);
    cfg.spec.robot_radius = detail::field_or<double>(j, "robot_radius", 0.0);
    cfg.spec.sense_radius = detail::field_or<double>(j, "sense_radius", 0.0);
    cfg.spec.cusp_epsilon = detail::field_or<double>(j, "cusp_epsilon", 0.0);
    cfg.delta = detail::field_or<double>(j, "delta", 0.0);
    cfg.spec.finalize();
    cfg.spec.validate();

    if (!j.contains("point")) throw ConfigError("missing field \"point\"");
    const json& pt = j.at("point");
    if (pt.is_string() && pt.get<std::string>() == "auto") {
        cfg.auto_point = true;
    } else if (pt.is_array() && pt.size() == 2) {
        cfg.R_c = pt.at(0).get<double>();
        cfg.d_c = pt.at(1).get<double>();
        if (cfg.R_c < 0.0 || cfg.d_c < 0.0)
            throw ConfigError("field \"point\": coordinates must be nonnegative");
    } else {
        throw ConfigError("field \"point\": expected \"auto\" or [R_c, d_c]");
    }
    return cfg;
}

/// Complete persisted design: inputs, derived structure, and provenance.
struct DesignDocument {
    DesignSpec spec;
    Eigenstructure eig;
    double R_c = 0.0;
    double d_c = 0.0;
    bool auto_selected = false;
    std::array<Vec2, 3> initial_positions{};
    double cor_shift = 0.0;
    std::array<AgentTrochoid, 3> trochoids{};
    std::optional<InjectionPlan> injection;
    std::string tool_version = kToolVersion;
    std::string created;
    std::string input_hash;
};

namespace detail {

inline json to_json(const Vec2& v) { return json::array({v.x, v.y}); }
inline Vec2 vec2_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

inline json to_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }
inline Vec3 vec3_from(const json& j) {
    return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

inline json spec_to_json(const DesignSpec& s) {
    return json{{"k", s.k},
                {"triple", s.triple},
                {"type", to_string(s.type)},
                {"d0_min", s.d0_min},
                {"d0_max", s.d0_max},
                {"d_ct", s.d_ct},
                {"d_cr", s.d_cr},
                {"robot_radius", s.robot_radius},
                {"sense_radius", s.sense_radius},
                {"cusp_epsilon", s.cusp_epsilon}};
}

inline DesignSpec spec_from_json(const json& j) {
    DesignSpec s;
    s.k = field<int>(j, "k");
    s.triple = field<std::array<int, 3>>(j, "triple");
    s.type = trochoid_type_from_string(field<std::string>(j, "type"));
    s.d0_min = field<double>(j, "d0_min");
    s.d0_max = field<double>(j, "d0_max");
    s.d_ct = field<double>(j, "d_ct");
    s.d_cr = field<double>(j, "d_cr");
    s.robot_radius = field<double>(j, "robot_radius");
    s.sense_radius = field<double>(j, "sense_radius");
    s.cusp_epsilon = field<double>(j, "cusp_epsilon");
    return s;
}

inline json eig_to_json(const Eigenstructure& e) {
    return json{{"beta", e.beta},
                {"k", e.k},
                {"type", to_string(e.type)},
                {"a", e.a},
                {"b", e.b},
                {"beta_d", e.beta_d},
                {"lambda_min", e.lambda_min},
                {"lambda_max", e.lambda_max},
                {"alpha_r", to_json(e.alpha_r)},
                {"alpha_d", to_json(e.alpha_d)},
                {"gamma_r", to_json(e.gamma.r)},
                {"gamma_d", to_json(e.gamma.d)},
                {"gamma_phi_r", to_json(e.gamma.phi_r)},
                {"gamma_phi_d", to_json(e.gamma.phi_d)}};
}

inline Eigenstructure eig_from_json(const json& j) {
    Eigenstructure e;
    e.beta = field<std::array<double, 3>>(j, "beta");
    e.k = field<int>(j, "k");
    e.type = trochoid_type_from_string(field<std::string>(j, "type"));
    e.a = field<double>(j, "a");
    e.b = field<double>(j, "b");
    e.beta_d = field<double>(j, "beta_d");
    e.lambda_min = field<double>(j, "lambda_min");
    e.lambda_max = field<double>(j, "lambda_max");
    e.alpha_r = vec3_from(j.at("alpha_r"));
    e.alpha_d = vec3_from(j.at("alpha_d"));
    e.gamma.r = vec3_from(j.at("gamma_r"));
    e.gamma.d = vec3_from(j.at("gamma_d"));
    e.gamma.phi_r = vec3_from(j.at("gamma_phi_r"));
    e.gamma.phi_d = vec3_from(j.at("gamma_phi_d"));
    return e;
}

inline json trochoid_to_json(const AgentTrochoid& t) {
    return json{{"agent_id", t.agent_id},
                {"c_r", t.c_r},
                {"c_d", t.c_d},
                {"phi_r", t.phi_r},
                {"phi_d", t.phi_d},
                {"phi_0", t.phi_0},
                {"c_0", t.c_0},
                {"cor", to_json(t.cor)},
                {"r_param", t.r_param},
                {"d_param", t.d_param},
                {"r_signed", t.r_signed},
                {"d_signed", t.d_signed},
                {"k", t.k},
                {"type", to_string(t.type)},
                {"lambda_min", t.lambda_min},
                {"lambda_max", t.lambda_max}};
}

inline AgentTrochoid trochoid_from_json(const json& j) {
    AgentTrochoid t;
    t.agent_id = field<int>(j, "agent_id");
    t.c_r = field<double>(j, "c_r");
    t.c_d = field<double>(j, "c_d");
    t.phi_r = field<double>(j, "phi_r");
    t.phi_d = field<double>(j, "phi_d");
    t.phi_0 = field<double>(j, "phi_0");
    t.c_0 = field<double>(j, "c_0");
    t.cor = vec2_from(j.at("cor"));
    t.r_param = field<double>(j, "r_param");
    t.d_param = field<double>(j, "d_param");
    t.r_signed = field<double>(j, "r_signed");
    t.d_signed = field<double>(j, "d_signed");
    t.k = field<int>(j, "k");
    t.type = trochoid_type_from_string(field<std::string>(j, "type"));
    t.lambda_min = field<double>(j, "lambda_min");
    t.lambda_max = field<double>(j, "lambda_max");
    return t;
}

inline json plan_to_json(const InjectionPlan& p) {
    json table = json::array();
    for (const auto& e : p.table)
        table.push_back(json{{"path_i", e.path_i},
                             {"path_j", e.path_j},
                             {"phi", e.phi},
                             {"delta_sq_min", e.delta_sq_min}});
    return json{{"table", table},
                {"feasible_offsets", p.feasible_offsets},
                {"refresh_period", p.refresh_period},
                {"total_agents", p.total_agents}};
}

inline InjectionPlan plan_from_json(const json& j) {
    InjectionPlan p;
    for (const auto& e : j.at("table")) {
        p.table.push_back({field<int>(e, "path_i"), field<int>(e, "path_j"),
                           field<double>(e, "phi"), field<double>(e, "delta_sq_min")});
    }
    p.feasible_offsets = j.at("feasible_offsets").get<std::array<std::vector<double>, 3>>();
    p.refresh_period = j.at("refresh_period").get<std::array<double, 3>>();
    p.total_agents = field<int>(j, "total_agents");
    return p;
}

}  // namespace detail

inline json design_document_to_json(const DesignDocument& d) {
    json j{{"schema_version", kSchemaVersion},
           {"spec", detail::spec_to_json(d.spec)},
           {"design_point", json{{"R_c", d.R_c}, {"d_c", d.d_c}, {"auto_selected", d.auto_selected}}},
           {"eigenstructure", detail::eig_to_json(d.eig)},
           {"initial_positions",
            json::array({detail::to_json(d.initial_positions[0]),
                         detail::to_json(d.initial_positions[1]),
                         detail::to_json(d.initial_positions[2])})},
           {"cor_shift", d.cor_shift},
           {"trochoids",
            json::array({detail::trochoid_to_json(d.trochoids[0]),
                         detail::trochoid_to_json(d.trochoids[1]),
                         detail::trochoid_to_json(d.trochoids[2])})},
           {"injection", d.injection ? detail::plan_to_json(*d.injection) : json(nullptr)},
           {"provenance", json{{"tool_version", d.tool_version},
                               {"created", d.created},
                               {"input_hash", d.input_hash}}}};
    return j;
}

inline DesignDocument design_document_from_json(const json& j) {
    if (detail::field<int>(j, "schema_version") != kSchemaVersion)
        throw ConfigError("unsupported schema_version");
    DesignDocument d;
    d.spec = detail::spec_from_json(j.at("spec"));
    d.R_c = detail::field<double>(j.at("design_point"), "R_c");
    d.d_c = detail::field<double>(j.at("design_point"), "d_c");
    d.auto_selected = detail::field<bool>(j.at("design_point"), "auto_selected");
    d.eig = detail::eig_from_json(j.at("eigenstructure"));
    for (int i = 0; i < 3; ++i)
        d.initial_positions[i] = detail::vec2_from(j.at("initial_positions").at(i));
    d.cor_shift = detail::field<double>(j, "cor_shift");
    for (int i = 0; i < 3; ++i)
        d.trochoids[i] = detail::trochoid_from_json(j.at("trochoids").at(i));
    if (!j.at("injection").is_null()) d.injection = detail::plan_from_json(j.at("injection"));
    const json& prov = j.at("provenance");
    d.tool_version = detail::field<std::string>(prov, "tool_version");
    d.created = detail::field<std::string>(prov, "created");
    d.input_hash = detail::field<std::string>(prov, "input_hash");
    return d;
}

inline std::string save_design_document(const DesignDocument& d) {
    return design_document_to_json(d).dump(2) + "\n";
}

inline DesignDocument load_design_document(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("design file parse error: ") + e.what());
    }
    try {
        return design_document_from_json(j);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("design file: ") + e.what());
    }
}

/// Builds the full document for a chosen (R_c, d_c).
inline DesignDocument build_design_document(const DesignSpec& spec, const Eigenstructure& eig,
                                            double R_c, double d_c, bool auto_selected,
                                            const std::string& input_bytes) {
    DesignDocument d;
    d.spec = spec;
    d.eig = eig;
    d.R_c = R_c;
    d.d_c = d_c;
    d.auto_selected = auto_selected;
    const auto place = initial_positions(eig, R_c, d_c);
    d.initial_positions = place.positions;
    d.cor_shift = place.cor_shift;
    d.trochoids = trochoid_coefficients(eig, R_c, d_c);
    d.created = detail::iso_timestamp();
    d.input_hash = detail::fnv1a_hex(input_bytes);
    return d;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write file: " + path);
    out << content;
}

}  // namespace troch
