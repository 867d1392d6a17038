#include "lifeins/io/scenario_json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lifeins/errors.hpp"

namespace lifeins::io {

namespace {

using nlohmann::json;

constexpr std::string_view kFigure1 = R"({
  "description": "Reference figure: optimal premium surface for a 40-year working life",
  "market": {
    "r": 0.04,
    "mu": [0.07, 0.11],
    "sigma": [[0.19, 0.15], [0.17, 0.21]]
  },
  "mortality": {
    "form": "gompertz_makeham",
    "base": 0.001,
    "log_scale": -9.5,
    "growth": 0.1
  },
  "insurance": { "loading": 1.05 },
  "income": { "i0": 50000, "growth": 0.03 },
  "preferences": { "gamma": -3, "rho": 0.03, "T": 40 },
  "x0": 100000,
  "grid_steps": 4000
}
)";

class SchemaReader {
public:
    explicit SchemaReader(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(const std::string& path, const std::string& what) const {
        throw InputError(source_ + ": " + (path.empty() ? "(root)" : path) + ": " + what);
    }

    static std::string join(const std::string& path, const std::string& key) {
        return path.empty() ? key : path + "." + key;
    }
    static std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

    void object(const json& j, const std::string& path, std::initializer_list<std::string_view> allowed) const {
        if (!j.is_object()) fail(path, "expected an object");
        for (const auto& [key, value] : j.items()) {
            if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
                std::string list;
                for (auto a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
                fail(join(path, key), "unknown key (allowed: " + list + ")");
            }
        }
    }

    const json& member(const json& j, const std::string& path, const char* key) const {
        const auto it = j.find(key);
        if (it == j.end()) fail(join(path, key), "required key is missing");
        return *it;
    }

    double number(const json& j, const std::string& path) const {
        if (!j.is_number()) fail(path, "expected a number");
        const double v = j.get<double>();
        if (!std::isfinite(v)) fail(path, "expected a finite number");
        return v;
    }

    double number(const json& parent, const std::string& path, const char* key) const {
        return number(member(parent, path, key), join(path, key));
    }

    std::vector<double> numbers(const json& j, const std::string& path) const {
        if (!j.is_array()) fail(path, "expected an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], index(path, i)));
        return out;
    }

    std::size_t count(const json& j, const std::string& path) const {
        if (!j.is_number_integer() && !j.is_number_unsigned()) fail(path, "expected an integer");
        const auto v = j.get<long long>();
        if (v < 0) fail(path, "expected a non-negative integer");
        return static_cast<std::size_t>(v);
    }

    /// A number (constant) or {"t": [...], "values": [...]} interpolated
    /// linearly; curves must cover [0, T].
    numerics::Curve curve(const json& j, const std::string& path, double T) const {
        if (j.is_number()) return numerics::Curve::constant(number(j, path));
        if (!j.is_object()) fail(path, "expected a number or a {\"t\", \"values\"} curve");
        object(j, path, {"t", "values"});
        auto t = numbers(member(j, path, "t"), join(path, "t"));
        auto v = numbers(member(j, path, "values"), join(path, "values"));
        if (t.empty() || t.size() != v.size()) fail(path, "t and values must be non-empty and of equal length");
        if (t.size() == 1) return numerics::Curve::constant(v.front());
        if (t.front() > 0.0 || t.back() < T) fail(path, "curve knots must cover [0, T]");
        try {
            return numerics::Curve::linear(std::move(t), std::move(v));
        } catch (const std::exception& e) {
            fail(path, e.what());
        }
    }

private:
    std::string source_;
};

MortalityModel read_mortality(const SchemaReader& r, const json& j) {
    const std::string path = "mortality";
    if (!j.is_object()) r.fail(path, "expected an object");
    const json& form = r.member(j, path, "form");
    if (!form.is_string()) r.fail("mortality.form", "expected a string");
    const auto name = form.get<std::string>();
    try {
        if (name == "gompertz_makeham") {
            r.object(j, path, {"form", "base", "scale", "log_scale", "growth"});
            const bool has_scale = j.contains("scale"), has_log = j.contains("log_scale");
            if (has_scale == has_log) r.fail(path, "give exactly one of scale, log_scale");
            const double scale =
                has_scale ? r.number(j, path, "scale") : std::exp(r.number(j, path, "log_scale"));
            return MortalityModel::gompertz_makeham(r.number(j, path, "base"), scale, r.number(j, path, "growth"));
        }
        if (name == "piecewise") {
            r.object(j, path, {"form", "knots"});
            const json& knots = r.member(j, path, "knots");
            if (!knots.is_array() || knots.empty()) r.fail("mortality.knots", "expected a non-empty array");
            std::vector<std::pair<double, double>> pairs;
            for (std::size_t i = 0; i < knots.size(); ++i) {
                const std::string kp = SchemaReader::index("mortality.knots", i);
                const auto tl = r.numbers(knots[i], kp);
                if (tl.size() != 2) r.fail(kp, "expected [time, rate]");
                pairs.emplace_back(tl[0], tl[1]);
            }
            return MortalityModel::piecewise_constant(pairs);
        }
    } catch (const InputError&) {
        throw;
    } catch (const std::exception& e) {
        r.fail(path, e.what());
    }
    r.fail("mortality.form", "unknown form '" + name + "' (expected gompertz_makeham or piecewise)");
}

MarketModel read_market(const SchemaReader& r, const json& j, double T) {
    const std::string path = "market";
    r.object(j, path, {"r", "mu", "sigma"});
    const numerics::Curve rate = r.curve(r.member(j, path, "r"), "market.r", T);
    const json& mu = r.member(j, path, "mu");
    if (!mu.is_array() || mu.empty()) r.fail("market.mu", "expected a non-empty array");
    std::vector<numerics::Curve> mus;
    for (std::size_t i = 0; i < mu.size(); ++i) mus.push_back(r.curve(mu[i], SchemaReader::index("market.mu", i), T));
    const json& sigma = r.member(j, path, "sigma");
    if (!sigma.is_array() || sigma.size() != mu.size())
        r.fail("market.sigma", "expected one row per asset (" + std::to_string(mu.size()) + ")");
    std::vector<std::vector<numerics::Curve>> rows;
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        const std::string rp = SchemaReader::index("market.sigma", i);
        if (!sigma[i].is_array() || sigma[i].empty()) r.fail(rp, "expected a non-empty array");
        if (sigma[i].size() != sigma[0].size()) r.fail(rp, "all rows must have the same number of drivers");
        std::vector<numerics::Curve> row;
        for (std::size_t m = 0; m < sigma[i].size(); ++m)
            row.push_back(r.curve(sigma[i][m], SchemaReader::index(rp, m), T));
        rows.push_back(std::move(row));
    }
    try {
        return MarketModel(T, rate, std::move(mus), std::move(rows));
    } catch (const InputError&) {
        throw;
    } catch (const std::exception& e) {
        r.fail(path, e.what());
    }
}

InsuranceModel read_insurance(const SchemaReader& r, const json& j, const MortalityModel& mortality, double T) {
    if (j.is_object() && j.contains("loading")) {
        r.object(j, "insurance", {"loading"});
        try {
            return InsuranceModel::hazard_loading(r.number(j, "insurance", "loading"), mortality);
        } catch (const InputError&) {
            throw;
        } catch (const std::exception& e) {
            r.fail("insurance", e.what());
        }
    }
    if (!j.is_object()) r.fail("insurance", "expected {\"loading\": ...} or a curve object");
    return InsuranceModel::curve(r.curve(j, "insurance", T));
}

IncomeProfile read_income(const SchemaReader& r, const json& j, double T) {
    if (j.is_object() && (j.contains("i0") || j.contains("growth"))) {
        r.object(j, "income", {"i0", "growth"});
        return IncomeProfile::exponential(r.number(j, "income", "i0"), r.number(j, "income", "growth"));
    }
    if (!j.is_object()) r.fail("income", "expected {\"i0\": ..., \"growth\": ...} or a curve object");
    return IncomeProfile::curve(r.curve(j, "income", T));
}

Scenario read_scenario(const SchemaReader& r, const json& doc) {
    r.object(doc, "", {"description", "market", "mortality", "insurance", "income", "preferences", "x0", "grid_steps",
                       "fault_injection"});
    if (doc.contains("description") && !doc["description"].is_string()) r.fail("description", "expected a string");

    const json& pj = r.member(doc, "", "preferences");
    r.object(pj, "preferences", {"gamma", "rho", "T"});
    Preferences prefs{r.number(pj, "preferences", "gamma"), r.number(pj, "preferences", "rho"),
                      r.number(pj, "preferences", "T")};
    try {
        prefs.validate();
    } catch (const std::exception& e) {
        r.fail("preferences", e.what());
    }

    MortalityModel mortality = read_mortality(r, r.member(doc, "", "mortality"));
    MarketModel market = read_market(r, r.member(doc, "", "market"), prefs.T);
    InsuranceModel insurance = read_insurance(r, r.member(doc, "", "insurance"), mortality, prefs.T);
    IncomeProfile income = read_income(r, r.member(doc, "", "income"), prefs.T);

    Scenario s{std::move(market), std::move(mortality), std::move(insurance), std::move(income), prefs, 0.0, 4000, {}};
    if (doc.contains("x0")) s.x0 = r.number(doc["x0"], "x0");
    if (doc.contains("grid_steps")) s.grid_steps = r.count(doc["grid_steps"], "grid_steps");
    if (doc.contains("fault_injection")) {
        const json& f = doc["fault_injection"];
        r.object(f, "fault_injection", {"D_scale"});
        if (f.contains("D_scale")) s.fault.D_scale = r.number(f["D_scale"], "fault_injection.D_scale");
    }
    try {
        s.validate();
    } catch (const std::exception& e) {
        r.fail("", e.what());
    }
    return s;
}

std::string position_of(std::string_view text, std::size_t byte) {
    byte = std::min(byte, text.size());
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < byte; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

void apply_override(json& doc, const std::string& spec, const std::string& source) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0)
        throw InputError(source + ": override '" + spec + "' must look like key.path=value");
    const std::string key = spec.substr(0, eq);
    const std::string raw = spec.substr(eq + 1);
    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded()) value = raw;

    std::vector<std::string> parts;
    std::stringstream ss(key);
    for (std::string part; std::getline(ss, part, '.');) {
        if (part.empty()) throw InputError(source + ": override key '" + key + "' has an empty segment");
        parts.push_back(part);
    }
    json* node = &doc;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const bool last = i + 1 == parts.size();
        const std::string& part = parts[i];
        if (node->is_array()) {
            std::size_t pos = 0;
            std::size_t idx = 0;
            try {
                idx = std::stoul(part, &pos);
            } catch (const std::exception&) {
                pos = 0;
            }
            if (pos != part.size() || pos == 0 || idx >= node->size())
                throw InputError(source + ": override '" + key + "': '" + part + "' is not a valid array index");
            node = &(*node)[idx];
        } else if (node->is_object()) {
            if (!last && !node->contains(part)) (*node)[part] = json::object();
            node = &(*node)[part];
        } else {
            throw InputError(source + ": override '" + key + "': cannot descend into a scalar");
        }
    }
    *node = std::move(value);
}

}  // namespace

ScenarioDocument parse_scenario(std::string_view text, std::span<const std::string> overrides, std::string_view source) {
    const std::string src(source);
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        std::string what = e.what();
        if (const auto p = what.find("parse error at line"); p != std::string::npos) {
            // nlohmann's message already carries the position; keep only the reason.
            if (const auto colon = what.find(": ", p); colon != std::string::npos) what = what.substr(colon + 2);
        }
        throw InputError(src + ": " + position_of(text, e.byte) + ": " + what);
    }
    for (const auto& o : overrides) apply_override(doc, o, src);
    ScenarioDocument out{read_scenario(SchemaReader(src), doc), doc.dump(2) + "\n"};
    return out;
}

ScenarioDocument load_scenario(const std::filesystem::path& path, std::span<const std::string> overrides) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open scenario file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str(), overrides, path.string());
}

std::string_view figure1_json() noexcept { return kFigure1; }

}  // namespace lifeins::io
