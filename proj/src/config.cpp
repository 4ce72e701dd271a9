#include "ioncosmo/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "ioncosmo/errors.hpp"

namespace ioncosmo {

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

const char* scenario_kind_name(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::TrapSingleIon: return "trap_single_ion";
        case ScenarioKind::TrapChain: return "trap_chain";
        case ScenarioKind::Cosmology: return "cosmology";
    }
    return "?";
}

ScenarioKind scenario_kind_from_name(const std::string& name) {
    if (name == "trap_single_ion") return ScenarioKind::TrapSingleIon;
    if (name == "trap_chain") return ScenarioKind::TrapChain;
    if (name == "cosmology") return ScenarioKind::Cosmology;
    fail(ErrorCode::Validation, "unknown scenario kind '" + name + "'");
}

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

bool valid_key_name(const std::string& k) {
    if (k.empty() || !std::islower(static_cast<unsigned char>(k[0]))) return false;
    for (unsigned char c : k)
        if (!std::islower(c) && !std::isdigit(c) && c != '_') return false;
    return true;
}

struct RawValue {
    std::string text;
    int line = 0;
};

[[noreturn]] void parse_fail(int line, const std::string& msg) {
    fail(ErrorCode::Parse, "config line " + std::to_string(line) + ": " + msg);
}

[[noreturn]] void validation_fail(const std::string& msg) {
    fail(ErrorCode::Validation, "config: " + msg);
}

double parse_number(const RawValue& raw) {
    const std::string t = trim(raw.text);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception&) {
        parse_fail(raw.line, "expected a number, got '" + raw.text + "'");
    }
    if (used != t.size()) parse_fail(raw.line, "trailing characters in number '" + raw.text + "'");
    require(std::isfinite(v), ErrorCode::Parse,
            "config line " + std::to_string(raw.line) + ": non-finite number");
    return v;
}

std::int64_t parse_integer(const RawValue& raw) {
    const std::string t = trim(raw.text);
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
        v = std::stoll(t, &used);
    } catch (const std::exception&) {
        parse_fail(raw.line, "expected an integer, got '" + raw.text + "'");
    }
    if (used != t.size())
        parse_fail(raw.line, "trailing characters in integer '" + raw.text + "'");
    return v;
}

bool parse_bool(const RawValue& raw) {
    const std::string t = lower(trim(raw.text));
    if (t == "true") return true;
    if (t == "false") return false;
    parse_fail(raw.line, "expected true or false, got '" + raw.text + "'");
}

enum class Unit { None, Hz, KHz, MHz, GHz, Sec, Ms, Us, Ns };

bool is_frequency_unit(Unit u) {
    return u == Unit::Hz || u == Unit::KHz || u == Unit::MHz || u == Unit::GHz;
}

double unit_in_hz(Unit u) {
    switch (u) {
        case Unit::Hz: return 1.0;
        case Unit::KHz: return 1e3;
        case Unit::MHz: return 1e6;
        case Unit::GHz: return 1e9;
        default: return 0.0;
    }
}

double unit_in_seconds(Unit u) {
    switch (u) {
        case Unit::Sec: return 1.0;
        case Unit::Ms: return 1e-3;
        case Unit::Us: return 1e-6;
        case Unit::Ns: return 1e-9;
        default: return 0.0;
    }
}

struct Quantity {
    double value = 0.0;
    Unit unit = Unit::None;
    std::string original;
    int line = 0;
};

Quantity parse_quantity(const RawValue& raw) {
    const std::string t = trim(raw.text);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception&) {
        parse_fail(raw.line, "expected a number (with optional unit), got '" + raw.text + "'");
    }
    require(std::isfinite(v), ErrorCode::Parse,
            "config line " + std::to_string(raw.line) + ": non-finite number");
    const std::string rest = lower(trim(t.substr(used)));
    Quantity q{v, Unit::None, t, raw.line};
    if (rest.empty()) return q;
    static const std::map<std::string, Unit> units = {
        {"hz", Unit::Hz},  {"khz", Unit::KHz}, {"mhz", Unit::MHz}, {"ghz", Unit::GHz},
        {"s", Unit::Sec},  {"ms", Unit::Ms},   {"us", Unit::Us},   {"ns", Unit::Ns}};
    auto it = units.find(rest);
    if (it == units.end()) parse_fail(raw.line, "unknown unit '" + rest + "'");
    q.unit = it->second;
    return q;
}

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Raw parsed file: section -> key -> value, with duplicate and syntax checks.
class Entries {
public:
    explicit Entries(const std::string& text) {
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        std::string section;
        int section_line = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const std::size_t hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']') parse_fail(lineno, "unterminated section header");
                section = trim(line.substr(1, line.size() - 2));
                if (!valid_key_name(section)) parse_fail(lineno, "bad section name '" + section + "'");
                section_line = lineno;
                if (!sections_.count(section)) section_lines_[section] = section_line;
                sections_[section]; // create
                continue;
            }
            const std::size_t eq = line.find('=');
            if (eq == std::string::npos) parse_fail(lineno, "expected 'key = value'");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (!valid_key_name(key))
                parse_fail(lineno, "bad key '" + key + "' (lowercase snake case required)");
            if (section.empty()) parse_fail(lineno, "key '" + key + "' outside any [section]");
            if (value.empty()) parse_fail(lineno, "empty value for key '" + key + "'");
            auto& sec = sections_[section];
            if (sec.count(key))
                parse_fail(lineno, "duplicate key '" + section + "." + key + "'");
            sec[key] = RawValue{value, lineno};
        }
    }

    std::optional<RawValue> take(const std::string& section, const std::string& key) {
        auto sit = sections_.find(section);
        if (sit == sections_.end()) return std::nullopt;
        auto kit = sit->second.find(key);
        if (kit == sit->second.end()) return std::nullopt;
        RawValue v = kit->second;
        sit->second.erase(kit);
        return v;
    }

    bool has_section(const std::string& section) const { return sections_.count(section) > 0; }

    void forbid_section(const std::string& section, const std::string& why) const {
        auto sit = sections_.find(section);
        if (sit == sections_.end()) return;
        if (sit->second.empty()) return; // empty section header is harmless
        validation_fail("section [" + section + "] " + why + " (line " +
                        std::to_string(sit->second.begin()->second.line) + ")");
    }

    void finish() const {
        for (const auto& [section, keys] : sections_) {
            if (keys.empty()) continue;
            const auto& [key, raw] = *keys.begin();
            validation_fail("unknown key '" + section + "." + key + "' (line " +
                            std::to_string(raw.line) + ")");
        }
    }

private:
    std::map<std::string, std::map<std::string, RawValue>> sections_;
    std::map<std::string, int> section_lines_;
};

// Deferred dimensional value: converted once the unit mode is decided.
struct PendingQuantity {
    std::string name;
    Quantity q;
    bool is_time = false;
    double* target = nullptr;
};

} // namespace

ScenarioConfig parse_config(const std::string& text) {
    ScenarioConfig cfg;
    cfg.config_hash = fnv1a64(text);

    Entries entries(text);

    auto kind_raw = entries.take("scenario", "kind");
    if (!kind_raw) validation_fail("[scenario] kind is required");
    cfg.kind = scenario_kind_from_name(lower(trim(kind_raw->text)));
    const bool is_trap = cfg.kind != ScenarioKind::Cosmology;

    if (auto v = entries.take("scenario", "seed")) {
        const std::int64_t s = parse_integer(*v);
        require(s >= 0, ErrorCode::Validation, "config: seed must be >= 0");
        cfg.seed = static_cast<std::uint64_t>(s);
    }

    // Kind gating before key consumption so misplaced sections name themselves.
    if (!is_trap) {
        entries.forbid_section("ramp", "does not apply to kind cosmology");
        entries.forbid_section("chain", "does not apply to kind cosmology");
        entries.forbid_section("readout", "does not apply to kind cosmology");
        entries.forbid_section("sweep", "does not apply to kind cosmology");
    } else {
        entries.forbid_section("cosmology", std::string("does not apply to kind ") +
                                                scenario_kind_name(cfg.kind));
        if (cfg.kind != ScenarioKind::TrapChain)
            entries.forbid_section("chain", std::string("does not apply to kind ") +
                                                scenario_kind_name(cfg.kind));
        if (cfg.kind != ScenarioKind::TrapSingleIon)
            entries.forbid_section("sweep", "sweeps run on kind trap_single_ion only");
    }

    std::vector<PendingQuantity> pending;
    auto quantity = [&](const char* section, const char* key, bool is_time, double* target,
                        bool* seen = nullptr) {
        if (auto v = entries.take(section, key)) {
            pending.push_back({std::string(section) + "." + key, parse_quantity(*v), is_time,
                               target});
            if (seen) *seen = true;
        }
    };

    bool have_omega_i = false, have_omega_f = false, have_rise = false;
    if (is_trap) {
        if (auto v = entries.take("ramp", "shape"))
            cfg.ramp.shape = ramp_shape_from_name(lower(trim(v->text)));
        quantity("ramp", "omega_initial", false, &cfg.ramp.omega_initial, &have_omega_i);
        quantity("ramp", "omega_final", false, &cfg.ramp.omega_final, &have_omega_f);
        quantity("ramp", "prep_omega", false, &cfg.ramp.prep_omega);
        quantity("ramp", "rise_time", true, &cfg.ramp.rise_time, &have_rise);
        quantity("ramp", "head_hold", true, &cfg.ramp.head_hold);
        quantity("ramp", "tail_hold", true, &cfg.ramp.tail_hold);
        quantity("ramp", "prep_time", true, &cfg.ramp.prep_time);
        quantity("ramp", "prep_hold", true, &cfg.ramp.prep_hold);
        if (!have_omega_i) validation_fail("[ramp] omega_initial is required");
        if (!have_omega_f) validation_fail("[ramp] omega_final is required");
        if (!have_rise) {
            if (cfg.ramp.shape == RampShape::Step)
                cfg.ramp.rise_time = 0.0;
            else
                validation_fail("[ramp] rise_time is required for smooth shapes");
        }
    }

    if (cfg.kind == ScenarioKind::TrapChain) {
        auto v = entries.take("chain", "n_ions");
        if (!v) validation_fail("[chain] n_ions is required for kind trap_chain");
        const std::int64_t n = parse_integer(*v);
        require(n >= 1 && n <= 64, ErrorCode::Validation,
                "config: n_ions must be in [1, 64]");
        cfg.n_ions = static_cast<int>(n);
        if (auto m = entries.take("chain", "modes")) {
            const std::string t = lower(trim(m->text));
            if (t != "all") {
                std::istringstream ss(t);
                std::string item;
                while (std::getline(ss, item, ',')) {
                    const RawValue rv{trim(item), m->line};
                    const std::int64_t idx = parse_integer(rv);
                    require(idx >= 0 && idx < cfg.n_ions, ErrorCode::Validation,
                            "config: mode index " + std::to_string(idx) +
                                " outside [0, n_ions)");
                    cfg.mode_selection.push_back(static_cast<int>(idx));
                }
                require(!cfg.mode_selection.empty(), ErrorCode::Validation,
                        "config: empty mode list");
            }
        }
    }

    if (auto v = entries.take("state", "kind")) {
        const std::string t = lower(trim(v->text));
        if (t == "vacuum")
            cfg.state.thermal = false;
        else if (t == "thermal")
            cfg.state.thermal = true;
        else
            validation_fail("state.kind must be vacuum or thermal, got '" + t + "'");
    }
    if (auto v = entries.take("state", "mean_n")) {
        cfg.state.mean_n = parse_number(*v);
        require(cfg.state.mean_n >= 0.0, ErrorCode::Validation,
                "config: mean_n must be >= 0");
        if (!cfg.state.thermal && cfg.state.mean_n > 0.0)
            validation_fail("state.mean_n > 0 requires state.kind = thermal");
    }
    if (cfg.state.thermal && cfg.state.mean_n == 0.0) cfg.state.thermal = false;

    if (auto v = entries.take("fock", "n_max")) {
        const std::int64_t n = parse_integer(*v);
        require(n >= 8 && n <= 2048, ErrorCode::Validation,
                "config: fock.n_max must be in [8, 2048]");
        cfg.fock.n_max = static_cast<int>(n);
    }
    if (auto v = entries.take("fock", "oracle")) cfg.fock.oracle = parse_bool(*v);

    if (is_trap) {
        if (auto v = entries.take("readout", "enabled")) cfg.readout.enabled = parse_bool(*v);
        if (auto v = entries.take("readout", "sequences")) {
            cfg.readout.sequences.clear();
            std::istringstream ss(lower(trim(v->text)));
            std::string item;
            while (std::getline(ss, item, ',')) {
                const std::string s = trim(item);
                if (s == "acd" || s == "a")
                    cfg.readout.sequences.push_back('a');
                else if (s == "bcd" || s == "b")
                    cfg.readout.sequences.push_back('b');
                else
                    validation_fail("readout.sequences entries must be acd or bcd, got '" +
                                    s + "'");
            }
            require(!cfg.readout.sequences.empty(), ErrorCode::Validation,
                    "config: readout.sequences is empty");
        }
        if (auto v = entries.take("readout", "mode")) {
            const std::string t = lower(trim(v->text));
            if (t == "ideal_pi")
                cfg.readout.mode = PulseMode::IdealPi;
            else if (t == "rabi_dynamics")
                cfg.readout.mode = PulseMode::RabiDynamics;
            else
                validation_fail("readout.mode must be ideal_pi or rabi_dynamics");
        }
        if (auto v = entries.take("readout", "eta")) {
            cfg.readout.eta = parse_number(*v);
            require(cfg.readout.eta > 0.0 && cfg.readout.eta < 1.0, ErrorCode::Validation,
                    "config: readout.eta must be in (0, 1)");
        }
        if (auto v = entries.take("readout", "trials")) {
            const std::int64_t n = parse_integer(*v);
            require(n >= 0, ErrorCode::Validation, "config: readout.trials must be >= 0");
            cfg.readout.trials = static_cast<std::uint64_t>(n);
        }
        if (auto v = entries.take("readout", "detection_efficiency")) {
            cfg.readout.detection_efficiency = parse_number(*v);
            require(cfg.readout.detection_efficiency > 0.0 &&
                        cfg.readout.detection_efficiency <= 1.0,
                    ErrorCode::Validation,
                    "config: detection_efficiency must be in (0, 1]");
        }
        if (auto v = entries.take("readout", "mode_index")) {
            const std::int64_t n = parse_integer(*v);
            require(n >= 0 && n < cfg.n_ions, ErrorCode::Validation,
                    "config: readout.mode_index outside [0, n_ions)");
            cfg.readout.mode_index = static_cast<int>(n);
        }
    }

    if (auto v = entries.take("integration", "tol")) {
        cfg.integration.rtol = parse_number(*v);
        require(cfg.integration.rtol >= 1e-14 && cfg.integration.rtol <= 1e-2,
                ErrorCode::Validation, "config: integration.tol must be in [1e-14, 1e-2]");
    }
    if (auto v = entries.take("integration", "flat_tol")) {
        cfg.integration.flat_tol = parse_number(*v);
        require(cfg.integration.flat_tol > 0.0, ErrorCode::Validation,
                "config: integration.flat_tol must be > 0");
    }
    if (auto v = entries.take("integration", "samples")) {
        const std::int64_t n = parse_integer(*v);
        require(n >= 2 && n <= 1'000'000, ErrorCode::Validation,
                "config: integration.samples must be in [2, 1e6]");
        cfg.integration.n_samples = static_cast<int>(n);
    }

    if (cfg.kind == ScenarioKind::Cosmology) {
        auto number = [&](const char* key, double* target, bool required = false) {
            if (auto v = entries.take("cosmology", key)) {
                const Quantity q = parse_quantity(*v);
                if (q.unit != Unit::None)
                    validation_fail(std::string("cosmology.") + key +
                                    " must be dimensionless");
                *target = q.value;
                return true;
            }
            if (required) validation_fail(std::string("[cosmology] ") + key + " is required");
            return false;
        };
        number("a_initial", &cfg.cosmo.a_initial, true);
        number("a_final", &cfg.cosmo.a_final, true);
        if (auto v = entries.take("cosmology", "shape"))
            cfg.cosmo.shape = ramp_shape_from_name(lower(trim(v->text)));
        if (!number("rise_time", &cfg.cosmo.rise_time) &&
            cfg.cosmo.shape != RampShape::Step)
            validation_fail("[cosmology] rise_time is required for smooth shapes");
        number("head_hold", &cfg.cosmo.head_hold);
        number("tail_hold", &cfg.cosmo.tail_hold);
        if (cfg.cosmo.shape == RampShape::Step &&
            (cfg.cosmo.head_hold <= 0.0 || cfg.cosmo.tail_hold <= 0.0))
            validation_fail("[cosmology] a step needs head_hold and tail_hold > 0 "
                            "to define the in and out states");
        number("zeta", &cfg.cosmo.zeta);
        number("k_min", &cfg.cosmo.k_min);
        number("k_max", &cfg.cosmo.k_max);
        if (auto v = entries.take("cosmology", "k_count")) {
            const std::int64_t n = parse_integer(*v);
            require(n >= 1 && n <= 100'000, ErrorCode::Validation,
                    "config: k_count must be in [1, 1e5]");
            cfg.cosmo.k_count = static_cast<int>(n);
        }
        if (auto v = entries.take("cosmology", "k_scale")) {
            const std::string t = lower(trim(v->text));
            if (t == "log")
                cfg.cosmo.k_log = true;
            else if (t == "linear")
                cfg.cosmo.k_log = false;
            else
                validation_fail("cosmology.k_scale must be log or linear");
        }
        if (auto v = entries.take("cosmology", "ricci_samples")) {
            const std::int64_t n = parse_integer(*v);
            require(n >= 65 && n <= 10'000'000, ErrorCode::Validation,
                    "config: ricci_samples must be in [65, 1e7]");
            cfg.cosmo.ricci_samples = static_cast<int>(n);
        }
        require(cfg.cosmo.a_initial > 0.0 && cfg.cosmo.a_final > 0.0, ErrorCode::Validation,
                "config: scale factor endpoints must be positive");
        require(cfg.cosmo.k_min > 0.0 && cfg.cosmo.k_max >= cfg.cosmo.k_min,
                ErrorCode::Validation, "config: need 0 < k_min <= k_max");
    }

    if (is_trap && entries.has_section("sweep")) {
        auto v = entries.take("sweep", "parameter");
        if (!v) validation_fail("[sweep] parameter is required");
        cfg.sweep.parameter = lower(trim(v->text));
        static const char* allowed[] = {"ramp.rise_time", "ramp.omega_final",
                                        "ramp.head_hold", "ramp.tail_hold"};
        bool ok = false;
        for (const char* a : allowed) ok = ok || cfg.sweep.parameter == a;
        if (!ok)
            validation_fail("sweep.parameter must be one of ramp.rise_time, "
                            "ramp.omega_final, ramp.head_hold, ramp.tail_hold");
        auto mn = entries.take("sweep", "min");
        auto mx = entries.take("sweep", "max");
        if (!mn || !mx) validation_fail("[sweep] min and max are required");
        cfg.sweep.min = parse_number(*mn);
        cfg.sweep.max = parse_number(*mx);
        if (auto c = entries.take("sweep", "count")) {
            const std::int64_t n = parse_integer(*c);
            require(n >= 1 && n <= 100'000, ErrorCode::Validation,
                    "config: sweep.count must be in [1, 1e5]");
            cfg.sweep.count = static_cast<int>(n);
        }
        if (auto s = entries.take("sweep", "scale")) {
            const std::string t = lower(trim(s->text));
            if (t == "log")
                cfg.sweep.log_scale = true;
            else if (t == "linear")
                cfg.sweep.log_scale = false;
            else
                validation_fail("sweep.scale must be log or linear");
        }
        require(cfg.sweep.max >= cfg.sweep.min, ErrorCode::Validation,
                "config: sweep.max must be >= sweep.min");
        if (cfg.sweep.log_scale)
            require(cfg.sweep.min > 0.0, ErrorCode::Validation,
                    "config: log sweep needs min > 0");
        cfg.sweep.enabled = true;
    }

    entries.finish();

    // Unit resolution: either every dimensional value carries a unit or none
    // does. The dimensionless frequency unit is omega_initial, so the
    // conversion is nu / nu(omega_initial) for frequencies (cycles cancel) and
    // t * 2 pi nu(omega_initial) for times.
    bool any_unit = false;
    for (const auto& p : pending) any_unit = any_unit || p.q.unit != Unit::None;
    if (any_unit) {
        double ref_hz = 0.0;
        for (const auto& p : pending) {
            if (p.name != "ramp.omega_initial") continue;
            require(is_frequency_unit(p.q.unit), ErrorCode::Validation,
                    "config: omega_initial needs a frequency unit when units are used");
            ref_hz = p.q.value * unit_in_hz(p.q.unit);
        }
        require(ref_hz > 0.0, ErrorCode::Validation,
                "config: units in use but ramp.omega_initial lacks a frequency unit");
        cfg.frequency_unit = kTwoPi * ref_hz;
        for (const auto& p : pending) {
            if (p.q.unit == Unit::None)
                validation_fail(p.name + " needs a unit because other values carry units");
            double dimensionless = 0.0;
            if (p.is_time) {
                require(!is_frequency_unit(p.q.unit), ErrorCode::Validation,
                        "config: " + p.name + " needs a time unit");
                dimensionless = p.q.value * unit_in_seconds(p.q.unit) * cfg.frequency_unit;
            } else {
                require(is_frequency_unit(p.q.unit), ErrorCode::Validation,
                        "config: " + p.name + " needs a frequency unit");
                dimensionless = p.q.value * unit_in_hz(p.q.unit) / ref_hz;
            }
            *p.target = dimensionless;
            cfg.unit_notes.push_back(p.name + " = " + p.q.original + " -> " +
                                     format_g17(dimensionless));
        }
    } else {
        for (const auto& p : pending) *p.target = p.q.value;
    }

    if (is_trap) {
        cfg.ramp.validate();
        if (cfg.ramp.shape == RampShape::Step &&
            (cfg.ramp.head_hold <= 0.0 || cfg.ramp.tail_hold <= 0.0))
            validation_fail("[ramp] a step needs head_hold and tail_hold > 0 "
                            "to define the in and out states");
        if (cfg.readout.trials > 0 && !cfg.readout.enabled)
            validation_fail("readout.trials > 0 requires readout.enabled = true");
        require(cfg.readout.mode_index < std::max(cfg.n_ions, 1), ErrorCode::Validation,
                "config: readout.mode_index outside the mode range");
    }

    return cfg;
}

ScenarioConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorCode::Io, "cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

} // namespace ioncosmo
