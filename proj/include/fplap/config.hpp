#ifndef FPLAP_CONFIG_HPP
#define FPLAP_CONFIG_HPP

#include <array>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fplap/common.hpp"
#include "fplap/grid.hpp"
#include "fplap/kernel.hpp"
#include "fplap/solver.hpp"

// Run configuration. The carrier is a strict INI-style text file (sections in
// brackets, key = value lines, '#' or ';' comments); a JSON object with the
// same section/key layout is accepted as an alternative. Every key is typed
// and every cross-field constraint of the downstream modules is re-checked
// here, so a bad experiment file fails at parse time with a line number, not
// mid-run. Unknown sections and unknown keys are errors.

namespace fplap {

namespace cfgdetail {

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    std::stringstream ss(s);
    while (std::getline(ss, cur, ',')) {
        cur = trim(cur);
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

// one parsed key: value text plus the source line (0 when the carrier was json)
struct Entry {
    std::string value;
    int line = 0;
};

using RawSection = std::map<std::string, Entry>;
using RawConfig = std::map<std::string, RawSection>;

inline std::string where(const std::string& section, const std::string& key, int line) {
    std::string loc = "key '" + key + "' in [" + section + "]";
    if (line > 0) loc += " (line " + std::to_string(line) + ")";
    return loc;
}

// Typed access to one section. Every get marks the key consumed; finish()
// rejects whatever was never asked for, which is what makes parsing strict.
class SectionView {
  public:
    SectionView(std::string name, const RawSection* raw) : name_(std::move(name)), raw_(raw) {}

    bool has(const std::string& key) const { return raw_ && raw_->count(key) > 0; }

    std::string get_string(const std::string& key) {
        const Entry& e = fetch(key);
        require(!e.value.empty(), where(name_, key, e.line) + ": empty value");
        return e.value;
    }
    std::string get_string_or(const std::string& key, const std::string& fallback) {
        return has(key) ? get_string(key) : fallback;
    }

    double get_double(const std::string& key) {
        const Entry& e = fetch(key);
        return parse_double(e.value, key, e.line);
    }
    double get_double_or(const std::string& key, double fallback) {
        return has(key) ? get_double(key) : fallback;
    }

    std::int64_t get_int(const std::string& key) {
        const Entry& e = fetch(key);
        char* end = nullptr;
        const long long v = std::strtoll(e.value.c_str(), &end, 10);
        require(end && *end == '\0' && !e.value.empty(),
                where(name_, key, e.line) + ": expected an integer, got '" + e.value + "'");
        return static_cast<std::int64_t>(v);
    }
    std::int64_t get_int_or(const std::string& key, std::int64_t fallback) {
        return has(key) ? get_int(key) : fallback;
    }

    std::uint64_t get_u64_or(const std::string& key, std::uint64_t fallback) {
        if (!has(key)) return fallback;
        const Entry& e = fetch(key);
        char* end = nullptr;
        const unsigned long long v = std::strtoull(e.value.c_str(), &end, 10);
        require(end && *end == '\0' && !e.value.empty() && e.value[0] != '-',
                where(name_, key, e.line) + ": expected an unsigned integer, got '" + e.value +
                    "'");
        return static_cast<std::uint64_t>(v);
    }

    bool get_bool_or(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const Entry& e = fetch(key);
        if (e.value == "true") return true;
        if (e.value == "false") return false;
        throw ConfigError(where(name_, key, e.line) + ": expected true or false, got '" +
                          e.value + "'");
    }

    std::vector<double> get_double_list(const std::string& key) {
        const Entry& e = fetch(key);
        std::vector<double> out;
        for (const std::string& tok : split_list(e.value))
            out.push_back(parse_double(tok, key, e.line));
        require(!out.empty(), where(name_, key, e.line) + ": expected a comma separated list");
        return out;
    }

    std::vector<std::string> get_string_list(const std::string& key) {
        const Entry& e = fetch(key);
        std::vector<std::string> out = split_list(e.value);
        require(!out.empty(), where(name_, key, e.line) + ": expected a comma separated list");
        return out;
    }

    int line_of(const std::string& key) const {
        return raw_ && raw_->count(key) ? raw_->at(key).line : 0;
    }

    // every key the caller never consumed is unknown
    void finish() const {
        if (!raw_) return;
        for (const auto& [key, entry] : *raw_)
            if (!consumed_.count(key))
                throw ConfigError("unknown " + where(name_, key, entry.line));
    }

    const std::string& name() const { return name_; }

  private:
    const Entry& fetch(const std::string& key) {
        require(raw_ != nullptr, "[" + name_ + "] is missing required key '" + key + "'");
        auto it = raw_->find(key);
        require(it != raw_->end(), "[" + name_ + "] is missing required key '" + key + "'");
        consumed_.insert(key);
        return it->second;
    }
    double parse_double(const std::string& text, const std::string& key, int line) {
        char* end = nullptr;
        const double v = std::strtod(text.c_str(), &end);
        require(end && *end == '\0' && !text.empty(),
                where(name_, key, line) + ": expected a number, got '" + text + "'");
        return v;
    }

    std::string name_;
    const RawSection* raw_;
    std::set<std::string> consumed_;
};

inline bool known_section(const std::string& s) {
    static const std::set<std::string> names = {
        "kernel",       "grid",       "data",           "solver",  "output",
        "tail",         "verify",     "verify:caccioppoli", "verify:log",
        "verify:poincare", "verify:sup", "degiorgi",      "holder",  "lemma32"};
    return names.count(s) > 0;
}

inline RawConfig parse_ini(const std::string& text) {
    RawConfig raw;
    std::string section;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        // comments start at '#' or ';' at line start or after whitespace
        std::size_t cut = std::string::npos;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if ((line[i] == '#' || line[i] == ';') &&
                (i == 0 || line[i - 1] == ' ' || line[i - 1] == '\t')) {
                cut = i;
                break;
            }
        }
        if (cut != std::string::npos) line.resize(cut);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            require(line.back() == ']',
                    "line " + std::to_string(lineno) + ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            require(known_section(section), "line " + std::to_string(lineno) +
                                                ": unknown section [" + section + "]");
            require(raw.count(section) == 0, "line " + std::to_string(lineno) +
                                                 ": duplicate section [" + section + "]");
            raw[section];
            continue;
        }
        const std::size_t eq = line.find('=');
        require(eq != std::string::npos,
                "line " + std::to_string(lineno) + ": expected key = value, got '" + line + "'");
        require(!section.empty(),
                "line " + std::to_string(lineno) + ": key before any [section]");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        require(!key.empty(), "line " + std::to_string(lineno) + ": empty key");
        require(raw[section].count(key) == 0, "line " + std::to_string(lineno) +
                                                  ": duplicate key '" + key + "' in [" +
                                                  section + "]");
        raw[section][key] = Entry{value, lineno};
    }
    return raw;
}

inline RawConfig parse_json_carrier(const std::string& text) {
    nlohmann::ordered_json doc;
    try {
        doc = nlohmann::ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("json config: ") + e.what());
    }
    require(doc.is_object(), "json config: top level must be an object of sections");
    RawConfig raw;
    for (const auto& [section, body] : doc.items()) {
        require(known_section(section), "json config: unknown section [" + section + "]");
        require(body.is_object(), "json config: section [" + section + "] must be an object");
        for (const auto& [key, value] : body.items()) {
            std::string text_value;
            if (value.is_string())
                text_value = value.get<std::string>();
            else if (value.is_array()) {
                // arrays carry numeric lists; render as the comma form
                std::string joined;
                for (const auto& item : value) {
                    require(item.is_number(), "json config: " + where(section, key, 0) +
                                                  ": list entries must be numbers");
                    if (!joined.empty()) joined += ",";
                    joined += item.dump();
                }
                text_value = joined;
            } else
                text_value = value.is_boolean() ? (value.get<bool>() ? "true" : "false")
                                                : value.dump();
            raw[section][key] = Entry{text_value, 0};
        }
    }
    return raw;
}

inline std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex16(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

} // namespace cfgdetail

// ---------------------------------------------------------------------------
// Typed configuration. Points are carried as fixed 2-arrays; entry 1 is unused
// when n = 1. A missing optional section leaves its std::optional empty.

struct KernelConfig {
    int n = 1;
    double s = 0.0;
    double p = 0.0;
    double lambda = 1.0;
    double Lambda = 1.0;
    CoefficientFamily family = CoefficientFamily::constant;
    double tile = 0.25;
    std::uint64_t seed = 0;
    bool allow_sp_geq_n = false;

    template <std::size_t N>
    KernelSpec<N> spec() const {
        KernelSpec<N> k;
        k.s = s;
        k.p = p;
        k.lambda = lambda;
        k.Lambda = Lambda;
        k.family = family;
        k.tile = tile;
        k.seed = seed;
        k.allow_sp_geq_n = allow_sp_geq_n;
        return k;
    }
};

struct GridConfig {
    double L = 0.0;
    std::int64_t m = 0; // exactly one of m, h is set
    double h = 0.0;
    OmegaSpec<1> omega1;
    OmegaSpec<2> omega2;

    template <std::size_t N>
    std::shared_ptr<const Grid<N>> build() const {
        const auto& omega = [this]() -> const auto& {
            if constexpr (N == 1)
                return omega1;
            else
                return omega2;
        }();
        if (m > 0) return Grid<N>::create(L, m, omega);
        return Grid<N>::from_spacing(L, h, omega);
    }
};

struct DataConfig {
    bool from_csv = false;
    std::string csv_path;
    DataProfile<1> profile1;
    DataProfile<2> profile2;

    template <std::size_t N>
    const DataProfile<N>& profile() const {
        if constexpr (N == 1)
            return profile1;
        else
            return profile2;
    }
};

struct OutputConfig {
    std::string directory = "out";
    bool csv = true;
    bool json = true;
};

struct TailParams {
    std::array<double, 2> x0{{0.0, 0.0}};
    double R = 1.0;
    bool of_data = false; // evaluate on the exterior datum instead of the solution
    std::optional<double> k;
    TruncationSign sign = TruncationSign::plus;
};

struct CaccioppoliParams {
    std::array<double, 2> x0{{0.0, 0.0}};
    double r = 0.0, inner = 0.0, outer = 0.0;
    bool k_median = true;
    double k = 0.0;
    TruncationSign sign = TruncationSign::plus;
    std::optional<double> ceiling;
    bool hard = false;
};

struct LogParams {
    std::array<double, 2> x0{{0.0, 0.0}};
    double R = 0.0, r = 0.0, d = 0.0;
    std::optional<double> ceiling;
    bool hard = false;
};

struct PoincareParams {
    std::array<double, 2> x0{{0.0, 0.0}};
    double R = 0.0, r = 0.0, a = 0.0, b = 0.0, d = 0.0;
    std::optional<double> ceiling;
    bool hard = false;
};

struct SupParams {
    std::array<double, 2> x0{{0.0, 0.0}};
    double r = 0.0;
    std::vector<double> deltas;
    std::optional<double> ceiling;
    bool hard = false;
};

struct DeGiorgiParams {
    std::array<double, 2> x0{{0.0, 0.0}};
    double r = 0.0;
    bool k_median = true;
    double k = 0.0;
    bool k_tilde_recipe = true; // else explicit k_tilde value
    double k_tilde = 0.0;
    double delta = 1.0; // recipe weight
    double H = 1.0;     // recipe multiplier
    int J = 20;
};

struct HolderParams {
    std::array<double, 2> x0{{0.0, 0.0}};
    double r = 0.0;
    int levels = 4;
};

struct Lemma32Params {
    std::int64_t samples = 1000000;
    std::uint64_t seed = 1;
};

struct RunConfig {
    KernelConfig kernel;
    GridConfig grid;
    DataConfig data;
    SolveConfig solver;
    double bound_tol = 1e-7; // comparison-principle slack treated as a defect beyond this
    OutputConfig output;

    std::optional<TailParams> tail;
    std::optional<CaccioppoliParams> caccioppoli;
    std::optional<LogParams> log;
    std::optional<PoincareParams> poincare;
    std::optional<SupParams> sup;
    std::optional<DeGiorgiParams> degiorgi;
    std::optional<HolderParams> holder;
    std::optional<Lemma32Params> lemma32;

    // verifiers `all` executes, in canonical order
    std::vector<std::string> verify_list;

    std::string canonical_text; // exact config bytes, the hash preimage
    std::string hash;           // 16 hex digits naming the run directory
};

namespace cfgdetail {

inline std::array<double, 2> read_x0(SectionView& sec, int n) {
    std::array<double, 2> x0{{0.0, 0.0}};
    x0[0] = sec.get_double("x0_x");
    if (n == 2)
        x0[1] = sec.get_double("x0_y");
    else
        require(!sec.has("x0_y"), "[" + sec.name() + "] has x0_y but the problem is 1d");
    return x0;
}

inline TruncationSign read_sign(SectionView& sec, const std::string& key) {
    const std::string v = sec.get_string_or(key, "plus");
    if (v == "plus") return TruncationSign::plus;
    if (v == "minus") return TruncationSign::minus;
    throw ConfigError(where(sec.name(), key, sec.line_of(key)) +
                      ": expected plus or minus, got '" + v + "'");
}

inline void read_ceiling(SectionView& sec, std::optional<double>& ceiling, bool& hard) {
    if (sec.has("ceiling")) {
        ceiling = sec.get_double("ceiling");
        require(*ceiling > 0.0, "[" + sec.name() + "]: ceiling must be positive");
    }
    hard = sec.get_bool_or("hard", false);
    require(!hard || ceiling.has_value(),
            "[" + sec.name() + "]: hard = true needs a ceiling to enforce");
}

} // namespace cfgdetail

inline const std::vector<std::string>& verifier_names() {
    static const std::vector<std::string> names = {"caccioppoli", "log",    "poincare", "sup",
                                                   "degiorgi",    "holder", "lemma32"};
    return names;
}

inline RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    using namespace cfgdetail;

    std::size_t first = text.find_first_not_of(" \t\r\n");
    require(first != std::string::npos, origin + ": empty config");
    RawConfig raw = text[first] == '{' ? parse_json_carrier(text) : parse_ini(text);

    auto section = [&raw](const std::string& name) -> SectionView {
        auto it = raw.find(name);
        return SectionView(name, it == raw.end() ? nullptr : &it->second);
    };
    auto has_section = [&raw](const std::string& name) { return raw.count(name) > 0; };

    RunConfig cfg;
    cfg.canonical_text = text;
    cfg.hash = hex16(fnv1a64(text));

    // --- kernel ---
    {
        require(has_section("kernel"), origin + ": missing required section [kernel]");
        SectionView sec = section("kernel");
        cfg.kernel.n = static_cast<int>(sec.get_int("n"));
        require(cfg.kernel.n == 1 || cfg.kernel.n == 2, "[kernel]: n must be 1 or 2");
        cfg.kernel.s = sec.get_double("s");
        cfg.kernel.p = sec.get_double("p");
        cfg.kernel.lambda = sec.get_double_or("lambda", 1.0);
        cfg.kernel.Lambda = sec.get_double_or("Lambda", cfg.kernel.lambda);
        const std::string fam = sec.get_string_or("family", "constant");
        if (fam == "constant")
            cfg.kernel.family = CoefficientFamily::constant;
        else if (fam == "checkerboard")
            cfg.kernel.family = CoefficientFamily::checkerboard;
        else if (fam == "smooth_bump")
            cfg.kernel.family = CoefficientFamily::smooth_bump;
        else if (fam == "random_tiles")
            cfg.kernel.family = CoefficientFamily::random_tiles;
        else
            throw ConfigError(where("kernel", "family", sec.line_of("family")) +
                              ": unknown family '" + fam + "'");
        cfg.kernel.tile = sec.get_double_or("tile", 0.25);
        cfg.kernel.seed = sec.get_u64_or("seed", 0);
        cfg.kernel.allow_sp_geq_n = sec.get_bool_or("allow_sp_geq_n", false);
        sec.finish();
        // run the kernel module's own validation now, not at assembly time
        if (cfg.kernel.n == 1)
            cfg.kernel.spec<1>().validate();
        else
            cfg.kernel.spec<2>().validate();
    }

    // --- grid ---
    {
        require(has_section("grid"), origin + ": missing required section [grid]");
        SectionView sec = section("grid");
        cfg.grid.L = sec.get_double("L");
        require(cfg.grid.L > 0.0, "[grid]: L must be positive");
        const bool has_m = sec.has("m"), has_h = sec.has("h");
        require(has_m != has_h, "[grid]: exactly one of m, h must be given");
        if (has_m) {
            cfg.grid.m = sec.get_int("m");
            require(cfg.grid.m >= 3, "[grid]: m must be at least 3");
        } else {
            cfg.grid.h = sec.get_double("h");
            require(cfg.grid.h > 0.0 && cfg.grid.h < cfg.grid.L, "[grid]: need 0 < h < L");
        }
        const std::string omega = sec.get_string("omega");
        if (cfg.kernel.n == 1) {
            require(omega == "interval", "[grid]: omega must be 'interval' when n = 1");
            cfg.grid.omega1.a = sec.get_double("a");
            cfg.grid.omega1.b = sec.get_double("b");
            cfg.grid.omega1.validate();
            require(cfg.grid.omega1.gap_to_box(cfg.grid.L) > 0.0,
                    "[grid]: omega must sit strictly inside the box (-L, L)");
        } else {
            if (omega == "box") {
                cfg.grid.omega2.kind = OmegaSpec<2>::Kind::box;
                cfg.grid.omega2.lo = {{sec.get_double("lo_x"), sec.get_double("lo_y")}};
                cfg.grid.omega2.hi = {{sec.get_double("hi_x"), sec.get_double("hi_y")}};
            } else if (omega == "disc") {
                cfg.grid.omega2.kind = OmegaSpec<2>::Kind::disc;
                cfg.grid.omega2.center = {{sec.get_double("center_x"), sec.get_double("center_y")}};
                cfg.grid.omega2.radius = sec.get_double("radius");
            } else {
                throw ConfigError(where("grid", "omega", sec.line_of("omega")) +
                                  ": expected box or disc when n = 2, got '" + omega + "'");
            }
            cfg.grid.omega2.validate();
            require(cfg.grid.omega2.gap_to_box(cfg.grid.L) > 0.0,
                    "[grid]: omega must sit strictly inside the box (-L, L)^2");
        }
        sec.finish();
    }

    // --- data ---
    {
        require(has_section("data"), origin + ": missing required section [data]");
        SectionView sec = section("data");
        const std::string profile = sec.get_string("profile");
        auto fill = [&](auto& prof) {
            using Prof = std::decay_t<decltype(prof)>;
            if (profile == "constant") {
                prof.kind = Prof::Kind::constant;
                prof.height = sec.get_double("height");
            } else if (profile == "bump") {
                prof.kind = Prof::Kind::bump;
                prof.height = sec.get_double("height");
                prof.width = sec.get_double("width");
                require(prof.width > 0.0, "[data]: bump width must be positive");
                prof.center[0] = sec.get_double("center_x");
                if (cfg.kernel.n == 2) prof.center[1] = sec.get_double("center_y");
            } else if (profile == "step") {
                prof.kind = Prof::Kind::step;
                prof.height = sec.get_double("height");
                prof.edge = sec.get_double("edge");
            } else if (profile == "ramp") {
                prof.kind = Prof::Kind::ramp;
                prof.height = sec.get_double("height");
                prof.slope = sec.get_double("slope");
            } else {
                throw ConfigError(where("data", "profile", sec.line_of("profile")) +
                                  ": unknown profile '" + profile + "'");
            }
        };
        if (profile == "csv") {
            cfg.data.from_csv = true;
            cfg.data.csv_path = sec.get_string("path");
        } else if (cfg.kernel.n == 1) {
            fill(cfg.data.profile1);
        } else {
            fill(cfg.data.profile2);
        }
        sec.finish();
    }

    // --- solver ---
    if (has_section("solver")) {
        SectionView sec = section("solver");
        cfg.solver.grad_tol = sec.get_double_or("grad_tol", cfg.solver.grad_tol);
        require(!sec.has("grad_tol") || cfg.solver.grad_tol > 0.0,
                "[solver]: grad_tol must be positive");
        cfg.solver.max_iters = sec.get_int_or("max_iters", cfg.solver.max_iters);
        require(cfg.solver.max_iters > 0, "[solver]: max_iters must be positive");
        if (sec.has("delta")) {
            cfg.solver.delta = sec.get_double("delta");
            require(cfg.solver.delta >= 0.0, "[solver]: delta must be nonnegative");
        }
        cfg.solver.warm_start = sec.get_bool_or("warm_start", cfg.solver.warm_start);
        cfg.solver.floor_relax = sec.get_bool_or("floor_relax", cfg.solver.floor_relax);
        cfg.solver.armijo = sec.get_double_or("armijo", cfg.solver.armijo);
        require(cfg.solver.armijo > 0.0 && cfg.solver.armijo < 0.5,
                "[solver]: armijo must lie in (0, 0.5)");
        cfg.bound_tol = sec.get_double_or("bound_tol", cfg.bound_tol);
        require(cfg.bound_tol > 0.0, "[solver]: bound_tol must be positive");
        sec.finish();
    }

    // --- output ---
    if (has_section("output")) {
        SectionView sec = section("output");
        cfg.output.directory = sec.get_string_or("directory", cfg.output.directory);
        if (sec.has("formats")) {
            cfg.output.csv = cfg.output.json = false;
            for (const std::string& f : sec.get_string_list("formats")) {
                if (f == "csv")
                    cfg.output.csv = true;
                else if (f == "json")
                    cfg.output.json = true;
                else
                    throw ConfigError(where("output", "formats", sec.line_of("formats")) +
                                      ": unknown format '" + f + "'");
            }
        }
        sec.finish();
    }

    // --- tail ---
    if (has_section("tail")) {
        SectionView sec = section("tail");
        TailParams t;
        t.x0 = read_x0(sec, cfg.kernel.n);
        t.R = sec.get_double("R");
        require(t.R > 0.0, "[tail]: R must be positive");
        const std::string fn = sec.get_string_or("function", "solution");
        if (fn == "data")
            t.of_data = true;
        else
            require(fn == "solution", where("tail", "function", sec.line_of("function")) +
                                          ": expected solution or data, got '" + fn + "'");
        if (sec.has("k")) {
            t.k = sec.get_double("k");
            t.sign = read_sign(sec, "sign");
        } else {
            require(!sec.has("sign"), "[tail]: sign needs a truncation level k");
        }
        sec.finish();
        cfg.tail = t;
    }

    // --- verifiers ---
    if (has_section("verify:caccioppoli")) {
        SectionView sec = section("verify:caccioppoli");
        CaccioppoliParams v;
        v.x0 = read_x0(sec, cfg.kernel.n);
        v.r = sec.get_double("r");
        v.inner = sec.get_double("inner");
        v.outer = sec.get_double("outer");
        require(0.0 < v.inner && v.inner < v.outer && v.outer < v.r,
                "[verify:caccioppoli]: need 0 < inner < outer < r");
        const std::string k = sec.get_string_or("k", "median");
        if (k == "median") {
            v.k_median = true;
        } else {
            v.k_median = false;
            char* end = nullptr;
            v.k = std::strtod(k.c_str(), &end);
            require(end && *end == '\0',
                    where("verify:caccioppoli", "k", sec.line_of("k")) +
                        ": expected a number or 'median', got '" + k + "'");
        }
        v.sign = read_sign(sec, "sign");
        read_ceiling(sec, v.ceiling, v.hard);
        sec.finish();
        cfg.caccioppoli = v;
    }

    if (has_section("verify:log")) {
        SectionView sec = section("verify:log");
        LogParams v;
        v.x0 = read_x0(sec, cfg.kernel.n);
        v.R = sec.get_double("R");
        v.r = sec.get_double("r");
        v.d = sec.get_double("d");
        require(v.d > 0.0, "[verify:log]: d must be positive");
        require(v.r > 0.0 && 2.0 * v.r <= v.R,
                "[verify:log]: need 0 < r and 2r <= R");
        read_ceiling(sec, v.ceiling, v.hard);
        sec.finish();
        cfg.log = v;
    }

    if (has_section("verify:poincare")) {
        SectionView sec = section("verify:poincare");
        PoincareParams v;
        v.x0 = read_x0(sec, cfg.kernel.n);
        v.R = sec.get_double("R");
        v.r = sec.get_double("r");
        v.a = sec.get_double("a");
        v.b = sec.get_double("b");
        v.d = sec.get_double("d");
        require(v.a > 0.0, "[verify:poincare]: a must be positive");
        require(v.b > 1.0, "[verify:poincare]: b must exceed 1");
        require(v.d > 0.0, "[verify:poincare]: d must be positive");
        require(v.r > 0.0 && 2.0 * v.r <= v.R, "[verify:poincare]: need 0 < r and 2r <= R");
        read_ceiling(sec, v.ceiling, v.hard);
        sec.finish();
        cfg.poincare = v;
    }

    if (has_section("verify:sup")) {
        SectionView sec = section("verify:sup");
        SupParams v;
        v.x0 = read_x0(sec, cfg.kernel.n);
        v.r = sec.get_double("r");
        require(v.r > 0.0, "[verify:sup]: r must be positive");
        v.deltas = sec.get_double_list("deltas");
        for (double d : v.deltas)
            require(d > 0.0 && d <= 1.0, "[verify:sup]: every delta must lie in (0,1]");
        require(cfg.kernel.s * cfg.kernel.p < static_cast<double>(cfg.kernel.n),
                "[verify:sup]: the sup bound needs sp < n");
        read_ceiling(sec, v.ceiling, v.hard);
        sec.finish();
        cfg.sup = v;
    }

    if (has_section("degiorgi")) {
        SectionView sec = section("degiorgi");
        DeGiorgiParams v;
        v.x0 = read_x0(sec, cfg.kernel.n);
        v.r = sec.get_double("r");
        require(v.r > 0.0, "[degiorgi]: r must be positive");
        const std::string k = sec.get_string_or("k", "median");
        if (k == "median") {
            v.k_median = true;
        } else {
            v.k_median = false;
            char* end = nullptr;
            v.k = std::strtod(k.c_str(), &end);
            require(end && *end == '\0', where("degiorgi", "k", sec.line_of("k")) +
                                             ": expected a number or 'median', got '" + k + "'");
        }
        const std::string kt = sec.get_string_or("k_tilde", "recipe");
        if (kt == "recipe") {
            v.k_tilde_recipe = true;
            v.delta = sec.get_double_or("delta", 1.0);
            v.H = sec.get_double_or("H", 1.0);
            require(v.delta > 0.0 && v.delta <= 1.0, "[degiorgi]: delta must lie in (0,1]");
            require(v.H > 0.0, "[degiorgi]: H must be positive");
        } else {
            v.k_tilde_recipe = false;
            char* end = nullptr;
            v.k_tilde = std::strtod(kt.c_str(), &end);
            require(end && *end == '\0' && v.k_tilde >= 0.0,
                    where("degiorgi", "k_tilde", sec.line_of("k_tilde")) +
                        ": expected a nonnegative number or 'recipe', got '" + kt + "'");
            require(!sec.has("delta") && !sec.has("H"),
                    "[degiorgi]: delta and H apply only to the recipe");
        }
        v.J = static_cast<int>(sec.get_int_or("J", 20));
        require(v.J >= 1, "[degiorgi]: J must be at least 1");
        sec.finish();
        cfg.degiorgi = v;
    }

    if (has_section("holder")) {
        SectionView sec = section("holder");
        HolderParams v;
        v.x0 = read_x0(sec, cfg.kernel.n);
        v.r = sec.get_double("r");
        require(v.r > 0.0, "[holder]: r must be positive");
        v.levels = static_cast<int>(sec.get_int_or("levels", 4));
        require(v.levels >= 4, "[holder]: need at least 4 levels");
        sec.finish();
        cfg.holder = v;
    }

    if (has_section("lemma32")) {
        SectionView sec = section("lemma32");
        Lemma32Params v;
        v.samples = sec.get_int_or("samples", v.samples);
        require(v.samples >= 1, "[lemma32]: samples must be at least 1");
        v.seed = sec.get_u64_or("seed", v.seed);
        sec.finish();
        cfg.lemma32 = v;
    }

    // --- verify list ---
    auto present = [&cfg](const std::string& name) {
        if (name == "caccioppoli") return cfg.caccioppoli.has_value();
        if (name == "log") return cfg.log.has_value();
        if (name == "poincare") return cfg.poincare.has_value();
        if (name == "sup") return cfg.sup.has_value();
        if (name == "degiorgi") return cfg.degiorgi.has_value();
        if (name == "holder") return cfg.holder.has_value();
        if (name == "lemma32") return cfg.lemma32.has_value();
        return false;
    };
    if (has_section("verify")) {
        SectionView sec = section("verify");
        for (const std::string& name : sec.get_string_list("run")) {
            bool known = false;
            for (const std::string& canon : verifier_names()) known = known || canon == name;
            require(known, "[verify]: unknown verifier '" + name + "'");
            require(present(name),
                    "[verify]: verifier '" + name + "' has no parameter section");
            cfg.verify_list.push_back(name);
        }
        sec.finish();
    } else {
        for (const std::string& name : verifier_names())
            if (present(name)) cfg.verify_list.push_back(name);
    }

    return cfg;
}

inline RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

// A --seed override changes the experiment, so it must move the run directory.
inline void apply_seed_override(RunConfig& cfg, std::uint64_t seed) {
    cfg.kernel.seed = seed;
    if (cfg.lemma32) cfg.lemma32->seed = seed;
    std::uint64_t h = cfgdetail::fnv1a64(cfg.canonical_text);
    h ^= 0x9e3779b97f4a7c15ull + seed + (h << 6) + (h >> 2);
    cfg.hash = cfgdetail::hex16(h);
}

} // namespace fplap

#endif // FPLAP_CONFIG_HPP
