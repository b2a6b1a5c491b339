#include "rackpinion/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "rackpinion/errors.hpp"

namespace rackpinion {

namespace {

enum class Dim { Length, Density, Friction, Force, Velocity, Inertia };

struct KeySpec {
    std::string_view name;
    Dim dim;
};

constexpr KeySpec kKeys[] = {
    {"R", Dim::Length},         {"L", Dim::Length},       {"lambda", Dim::Length},
    {"a1", Dim::Length},        {"a2", Dim::Length},      {"H", Dim::Length},
    {"rho", Dim::Density},      {"zeta", Dim::Friction},  {"W", Dim::Force},
    {"V_R", Dim::Velocity},     {"F_override", Dim::Force}, {"I_override", Dim::Inertia},
    {"x0_dot", Dim::Velocity},
};

const std::map<std::string_view, double>& units_for(Dim d) {
    static const std::map<std::string_view, double> length{
        {"m", 1.0}, {"mm", 1e-3}, {"um", 1e-6}, {"\xC2\xB5m", 1e-6}, {"nm", 1e-9}};
    static const std::map<std::string_view, double> density{
        {"kg/m3", 1.0}, {"kg/m^3", 1.0}, {"g/cm3", 1e3}, {"g/cm^3", 1e3}};
    static const std::map<std::string_view, double> friction{{"kg*m2/s", 1.0}, {"kg*m^2/s", 1.0}, {"J*s", 1.0}};
    static const std::map<std::string_view, double> force{{"N", 1.0},    {"mN", 1e-3},  {"uN", 1e-6},
                                                          {"nN", 1e-9},  {"pN", 1e-12}, {"fN", 1e-15}};
    static const std::map<std::string_view, double> velocity{
        {"m/s", 1.0}, {"mm/s", 1e-3}, {"um/s", 1e-6}, {"\xC2\xB5m/s", 1e-6}, {"nm/s", 1e-9}};
    static const std::map<std::string_view, double> inertia{{"kg*m2", 1.0}, {"kg*m^2", 1.0}};
    switch (d) {
        case Dim::Length: return length;
        case Dim::Density: return density;
        case Dim::Friction: return friction;
        case Dim::Force: return force;
        case Dim::Velocity: return velocity;
        case Dim::Inertia: return inertia;
    }
    return length;
}

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_value(std::string_view text, const KeySpec& key, int line) {
    const auto space = text.find_first_of(" \t");
    const std::string_view number = text.substr(0, space);
    const std::string_view unit = space == std::string_view::npos ? std::string_view{} : trim(text.substr(space));

    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), value);
    if (ec != std::errc() || ptr != number.data() + number.size())
        throw ConfigError("key '" + std::string(key.name) + "': cannot parse value '" + std::string(text) + "'", line);
    if (unit.empty()) return value;
    const auto& table = units_for(key.dim);
    const auto it = table.find(unit);
    if (it == table.end()) {
        std::string allowed;
        for (const auto& [u, _] : table) allowed += (allowed.empty() ? "" : ", ") + std::string(u);
        throw ConfigError("key '" + std::string(key.name) + "': unknown unit '" + std::string(unit) +
                              "' (allowed: " + allowed + ")",
                          line);
    }
    return value * it->second;
}

void assign(DeviceConfig& cfg, std::string_view key, double v) {
    auto& d = cfg.device;
    if (key == "R") d.pinion_radius = v;
    else if (key == "L") d.pinion_length = v;
    else if (key == "lambda") d.wavelength = v;
    else if (key == "a1") d.amp_pinion = v;
    else if (key == "a2") d.amp_rack = v;
    else if (key == "H") d.gap = v;
    else if (key == "rho") d.density = v;
    else if (key == "zeta") d.friction = v;
    else if (key == "W") d.load = v;
    else if (key == "V_R") d.rack_velocity = v;
    else if (key == "F_override") d.force_override = v;
    else if (key == "I_override") d.inertia_override = v;
    else if (key == "x0_dot") cfg.x0_dot = v;
}

}  // namespace

const std::vector<std::string_view>& config_keys() {
    static const std::vector<std::string_view> keys = [] {
        std::vector<std::string_view> k;
        for (const auto& s : kKeys) k.push_back(s.name);
        return k;
    }();
    return keys;
}

std::vector<std::string> DeviceConfig::missing_keys() const {
    std::vector<std::string> missing;
    auto need = [&](const char* k) {
        if (!present.count(k)) missing.emplace_back(k);
    };
    need("R");
    need("L");
    need("lambda");
    if (!present.count("F_override")) {
        need("a1");
        need("a2");
        need("H");
    }
    if (!present.count("I_override")) need("rho");
    need("zeta");
    need("W");
    need("V_R");
    return missing;
}

DeviceConfig parse_config(std::istream& in) {
    DeviceConfig cfg;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line(raw);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("expected 'key = value', got '" + std::string(line) + "'", line_no);
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        const KeySpec* spec = nullptr;
        for (const auto& k : kKeys)
            if (k.name == key) spec = &k;
        if (!spec) throw ConfigError("unknown key '" + std::string(key) + "'", line_no);
        if (cfg.present.count(std::string(key)))
            throw ConfigError("duplicate key '" + std::string(key) + "'", line_no);
        if (value.empty()) throw ConfigError("key '" + std::string(key) + "' has no value", line_no);
        assign(cfg, key, parse_value(value, *spec, line_no));
        cfg.present.emplace(key);
    }
    return cfg;
}

DeviceConfig parse_config_string(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_config(in);
}

DeviceConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in);
}

void require_complete(const DeviceConfig& cfg) {
    const auto missing = cfg.missing_keys();
    if (missing.empty()) return;
    std::string msg = "missing required keys:";
    for (const auto& k : missing) msg += " " + k;
    throw ConfigError(msg);
}

}  // namespace rackpinion
