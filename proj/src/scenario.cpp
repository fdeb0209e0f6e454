#include "gaslines/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <set>

#include <fmt/format.h>

namespace gaslines {

ScenarioError::ScenarioError(std::size_t line, const std::string& what)
    : std::runtime_error(line > 0 ? fmt::format("line {}: {}", line, what) : what), line_(line) {}

ScenarioError::ScenarioError(const ScenarioError& inner, const std::string& context)
    : std::runtime_error(context + ": " + inner.what()), line_(inner.line()) {}

std::vector<double> RunGrid::times() const {
    std::vector<double> out;
    if (step <= 0.0) return out;
    const auto count = static_cast<long>(std::floor((t_end - t_start) / step + 1e-9));
    for (long k = 0; k <= count; ++k) out.push_back(t_start + static_cast<double>(k) * step);
    return out;
}

namespace {

struct Entry {
    std::string value;
    std::size_t line = 0;
};

struct Section {
    std::size_t line = 0;
    std::map<std::string, Entry> keys;
};

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"pipeline", {"p1", "p2", "length", "g0", "c", "two_a"}},
        {"leak", {"ell2", "g_leak"}},
        {"series", {"n_max", "tail_tol", "variant"}},
        {"valves", {"line", "connectors"}},
        {"run", {"t_start", "t_end", "step"}},
    };
    return keys;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = s.find(',', start);
        auto item = trim(s.substr(start, comma == std::string::npos ? comma : comma - start));
        if (!item.empty()) out.push_back(item);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

double to_number(const std::string& text, std::size_t line, const std::string& where) {
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || !std::isfinite(v)) {
        throw ScenarioError(line, fmt::format("{}: '{}' is not a number", where, text));
    }
    return v;
}

class Reader {
public:
    explicit Reader(std::map<std::string, Section> sections) : sections_(std::move(sections)) {}

    bool has(const std::string& sec) const { return sections_.count(sec) > 0; }
    bool has(const std::string& sec, const std::string& key) const {
        auto it = sections_.find(sec);
        return it != sections_.end() && it->second.keys.count(key) > 0;
    }
    const Entry& entry(const std::string& sec, const std::string& key) const {
        auto it = sections_.find(sec);
        if (it == sections_.end()) throw ScenarioError(0, fmt::format("missing section [{}]", sec));
        auto k = it->second.keys.find(key);
        if (k == it->second.keys.end()) {
            throw ScenarioError(it->second.line, fmt::format("[{}] missing key '{}'", sec, key));
        }
        return k->second;
    }
    std::size_t section_line(const std::string& sec) const { return sections_.at(sec).line; }

    /// Number with a predicate check reported at the key's line.
    template <typename Pred>
    double number(const std::string& sec, const std::string& key, Pred ok, const std::string& rule) const {
        const Entry& e = entry(sec, key);
        const std::string where = fmt::format("[{}] {}", sec, key);
        const double v = to_number(e.value, e.line, where);
        if (!ok(v)) throw ScenarioError(e.line, fmt::format("{} = {}: must be {}", where, e.value, rule));
        return v;
    }

private:
    std::map<std::string, Section> sections_;
};

std::map<std::string, Section> tokenize(std::istream& in) {
    std::map<std::string, Section> sections;
    std::string raw;
    std::size_t line_no = 0;
    Section* current = nullptr;
    std::string current_name;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ScenarioError(line_no, "unterminated section header");
            current_name = trim(line.substr(1, line.size() - 2));
            if (!known_keys().count(current_name)) {
                throw ScenarioError(line_no, fmt::format("unknown section [{}]", current_name));
            }
            if (sections.count(current_name)) {
                throw ScenarioError(line_no, fmt::format("duplicate section [{}]", current_name));
            }
            current = &sections[current_name];
            current->line = line_no;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ScenarioError(line_no, "expected key = value");
        if (!current) throw ScenarioError(line_no, "key outside of any section");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!known_keys().at(current_name).count(key)) {
            throw ScenarioError(line_no, fmt::format("unknown key '{}' in [{}]", key, current_name));
        }
        if (value.empty()) throw ScenarioError(line_no, fmt::format("[{}] {}: empty value", current_name, key));
        if (!current->keys.emplace(key, Entry{value, line_no}).second) {
            throw ScenarioError(line_no, fmt::format("duplicate key '{}' in [{}]", key, current_name));
        }
    }
    return sections;
}

}  // namespace

Scenario parse_scenario(std::istream& in, const std::string& id) {
    const Reader r(tokenize(in));
    const auto positive = [](double v) { return v > 0.0; };
    const auto non_negative = [](double v) { return v >= 0.0; };

    Scenario sc;
    sc.id = id;
    auto& spec = sc.spec;
    spec.p_inlet_0 = r.number("pipeline", "p1", positive, "> 0");
    spec.p_outlet_0 = r.number("pipeline", "p2", positive, "> 0");
    if (!(spec.p_inlet_0 > spec.p_outlet_0)) {
        throw ScenarioError(r.entry("pipeline", "p2").line, "[pipeline] p2: must be below p1");
    }
    spec.length = r.number("pipeline", "length", positive, "> 0");
    spec.g0 = r.number("pipeline", "g0", non_negative, ">= 0");
    spec.sound_speed = r.number("pipeline", "c", positive, "> 0");
    spec.two_a = r.number("pipeline", "two_a", positive, "> 0");
    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        throw ScenarioError(r.entry("pipeline", "p2").line, e.what());
    }

    if (r.has("leak")) {
        LeakScenario leak = leak_at(spec, 0.0);
        const double length = spec.length;
        leak.ell2 = r.number("leak", "ell2", [&](double v) { return v > 0.0 && v < length; },
                             fmt::format("strictly inside (0, {})", length));
        if (r.has("leak", "g_leak")) leak.g_leak = r.number("leak", "g_leak", non_negative, ">= 0");
        sc.leak = leak;
    }

    if (r.has("series", "n_max")) {
        const double n = r.number("series", "n_max", [](double v) { return v >= 1.0 && v == std::floor(v); },
                                  "a positive integer");
        sc.series.n_max = static_cast<int>(n);
    }
    if (r.has("series", "tail_tol")) sc.series.tail_tol = r.number("series", "tail_tol", positive, "> 0");
    if (r.has("series", "variant")) {
        const Entry& e = r.entry("series", "variant");
        try {
            sc.series.variant = parse_variant(e.value);
        } catch (const std::invalid_argument& ex) {
            throw ScenarioError(e.line, std::string("[series] variant: ") + ex.what());
        }
    }

    sc.layout.line_valves = {0.0, spec.length};
    if (r.has("valves", "line")) {
        const Entry& e = r.entry("valves", "line");
        sc.layout.line_valves.clear();
        for (const auto& item : split_list(e.value)) {
            sc.layout.line_valves.push_back(to_number(item, e.line, "[valves] line"));
        }
    }
    if (r.has("valves", "connectors")) {
        const Entry& e = r.entry("valves", "connectors");
        for (const auto& item : split_list(e.value)) {
            const auto at = item.find('@');
            if (at == std::string::npos) {
                throw ScenarioError(e.line, fmt::format("[valves] connectors: '{}' is not id@position", item));
            }
            sc.layout.connectors.push_back(
                {to_number(trim(item.substr(at + 1)), e.line, "[valves] connectors"), trim(item.substr(0, at))});
        }
    }
    try {
        sc.layout.validate(spec.length);
    } catch (const std::invalid_argument& ex) {
        const std::size_t line = r.has("valves") ? r.section_line("valves") : 0;
        throw ScenarioError(line, ex.what());
    }

    if (r.has("run")) {
        RunGrid run;
        run.step = r.number("run", "step", positive, "> 0");
        run.t_end = r.number("run", "t_end", non_negative, ">= 0");
        if (r.has("run", "t_start")) {
            const double t_end = run.t_end;
            run.t_start = r.number("run", "t_start", [&](double v) { return v >= 0.0 && v <= t_end; },
                                   "within [0, t_end]");
        }
        sc.run = run;
    }
    return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError(0, "cannot open scenario file '" + path.string() + "'");
    try {
        return parse_scenario(in, path.stem().string());
    } catch (const ScenarioError& e) {
        throw ScenarioError(e, path.string());
    }
}

}  // namespace gaslines
