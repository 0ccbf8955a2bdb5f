#pragma once

// Text formats: MC run configuration, trajectory records, curve payloads.
// Requires nlohmann/json (json.hpp).

#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>

#include <json.hpp>

#include "analysis.hpp"
#include "mcsim.hpp"

namespace ellipse_contact::io {

using nlohmann::json;

class ParseError : public ContactError {
public:
    using ContactError::ContactError;
};

/// Shortest-safe round-trip formatting: 17 significant digits, '.' separator, any locale.
inline std::string fmt17(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

/// Locale-independent strict number parse; the whole field must be consumed.
inline double parse_double(std::string_view s, const std::string& what)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw ParseError(what + ": not a number: '" + std::string(s) + "'");
    if (!std::isfinite(v)) throw ParseError(what + ": must be finite");
    return v;
}

// ---------------------------------------------------------------- MC config

namespace detail {

inline std::string trim(std::string s)
{
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

// Species list "a:b:fraction, a:b:fraction".
inline std::vector<Species> parse_species_list(const std::string& text)
{
    std::vector<Species> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        std::vector<std::string> parts;
        std::stringstream is(item);
        std::string p;
        while (std::getline(is, p, ':')) parts.push_back(trim(p));
        if (parts.size() < 2 || parts.size() > 3)
            throw ParseError("species: expected a:b or a:b:fraction, got '" + item + "'");
        const double a = parse_double(parts[0], "species a");
        const double b = parse_double(parts[1], "species b");
        const double f = parts.size() == 3 ? parse_double(parts[2], "species fraction") : 1.0;
        out.push_back({EllipseShape(a, b), f});
    }
    return out;
}

inline MCConfig config_from_json(const json& j)
{
    MCConfig c;
    auto num = [&](const char* key, auto& field) {
        if (j.contains(key)) {
            if (!j[key].is_number()) throw ParseError(std::string(key) + ": expected a number");
            field = j[key].get<std::decay_t<decltype(field)>>();
        }
    };
    num("n_particles", c.n_particles);
    num("Lx", c.Lx);
    num("Ly", c.Ly);
    num("max_translation", c.max_translation);
    num("seed", c.seed);
    num("sweeps", c.sweeps);
    num("sample_every", c.sample_every);
    if (j.contains("box")) {
        const auto& b = j["box"];
        if (!b.is_array() || b.size() != 2) throw ParseError("box: expected [Lx, Ly]");
        c.Lx = b[0].get<double>();
        c.Ly = b[1].get<double>();
    }
    if (j.contains("max_rotation_deg")) c.max_rotation = j["max_rotation_deg"].get<double>() * M_PI / 180.0;
    if (j.contains("audit")) c.audit = j["audit"].get<bool>();
    if (!j.contains("species")) throw ParseError("species: required");
    const auto& sp = j["species"];
    if (sp.is_string()) {
        c.species = parse_species_list(sp.get<std::string>());
    } else if (sp.is_array()) {
        for (const auto& s : sp) {
            if (!s.contains("a") || !s.contains("b")) throw ParseError("species: each entry needs a and b");
            c.species.push_back({EllipseShape(s["a"].get<double>(), s["b"].get<double>()),
                                 s.contains("fraction") ? s["fraction"].get<double>() : 1.0});
        }
    } else {
        throw ParseError("species: expected a list");
    }
    if (j.contains("packing_fraction") && !(j.contains("box") || j.contains("Lx"))) {
        const auto [lx, ly] = lattice_box(c, j["packing_fraction"].get<double>());
        c.Lx = lx;
        c.Ly = ly;
    }
    return c;
}

} // namespace detail

/// Run configuration from JSON (when the text starts with '{') or key = value lines.
///
/// Keys: n_particles, species ("a:b:fraction, ..." or JSON [{a, b, fraction}]),
/// box ([Lx, Ly]) or Lx and Ly, or packing_fraction (box chosen to fit a lattice),
/// max_translation, max_rotation_deg, seed, sweeps, sample_every, audit.
inline MCConfig parse_mc_config(const std::string& text)
{
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        try {
            return detail::config_from_json(json::parse(text));
        } catch (const json::exception& e) {
            throw ParseError(std::string("config: ") + e.what());
        }
    }
    json j = json::object();
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string val = detail::trim(line.substr(eq + 1));
        const std::string where = "config line " + std::to_string(lineno) + " (" + key + ")";
        if (key == "species") j[key] = val;
        else if (key == "audit") j[key] = (val == "true" || val == "1" || val == "yes");
        else if (key == "box") {
            std::string v = val;
            std::replace_if(v.begin(), v.end(), [](char ch) { return ch == 'x' || ch == ','; }, ' ');
            std::stringstream vs(v);
            std::string lx, ly, extra;
            if (!(vs >> lx >> ly) || (vs >> extra)) throw ParseError(where + ": expected Lx x Ly");
            j[key] = {parse_double(lx, where), parse_double(ly, where)};
        } else if (key == "n_particles" || key == "sweeps" || key == "sample_every") {
            j[key] = static_cast<long long>(parse_double(val, where));
        } else if (key == "seed") {
            std::uint64_t s = 0;
            const auto res = std::from_chars(val.data(), val.data() + val.size(), s);
            if (res.ec != std::errc{} || res.ptr != val.data() + val.size()) throw ParseError(where + ": bad seed");
            j[key] = s;
        } else if (key == "Lx" || key == "Ly" || key == "max_translation" || key == "max_rotation_deg" ||
                   key == "packing_fraction") {
            j[key] = parse_double(val, where);
        } else {
            throw ParseError(where + ": unknown key");
        }
    }
    return detail::config_from_json(j);
}

inline MCConfig load_mc_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_mc_config(ss.str());
}

// ------------------------------------------------------- trajectory records

inline json snapshot_json(int sweep, const MCState& st, const SweepStats& s)
{
    json pos = json::array(), ori = json::array();
    for (const auto& p : st.positions) pos.push_back({p.x, p.y});
    for (const auto& k : st.orientations) ori.push_back({k.x(), k.y()});
    return {{"sweep", sweep},
            {"positions", pos},
            {"orientations", ori},
            {"species", st.species_index},
            {"S", order_parameter(st)},
            {"acceptance", s.total().ratio()}};
}

inline json summary_json(const RunSummary& r)
{
    return {{"summary", true},
            {"sweeps", r.sweeps},
            {"packing_fraction", r.packing_fraction},
            {"acceptance", r.acceptance()},
            {"translation", {{"attempted", r.translation.attempted}, {"accepted", r.translation.accepted}}},
            {"rotation", {{"attempted", r.rotation.attempted}, {"accepted", r.rotation.accepted}}},
            {"audit_overlaps", r.audit_overlaps},
            {"audit_mismatches", r.audit_mismatches},
            {"S", r.final_order}};
}

// ------------------------------------------------------------- curve output

inline void write_curve_csv(std::ostream& os, const LocusCurve& c, const char* angle_name)
{
    os << angle_name << ",x,y\n";
    for (const auto& s : c.samples)
        os << fmt17(s.angle * 180.0 / M_PI) << ',' << fmt17(s.point.x) << ',' << fmt17(s.point.y) << '\n';
}

inline json curve_json(const LocusCurve& c, const char* angle_name)
{
    json pts = json::array();
    for (const auto& s : c.samples) pts.push_back({{angle_name, s.angle * 180.0 / M_PI}, {"x", s.point.x}, {"y", s.point.y}});
    return {{"closed", c.closed}, {"points", pts}};
}

} // namespace ellipse_contact::io
