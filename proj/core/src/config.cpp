#include "sidefd/config.hpp"

#include "sidefd/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace sidefd {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string strip_comment(const std::string& line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_string = !in_string;
        if (line[i] == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

double parse_number(const std::string& tok, int line_no) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config line " + std::to_string(line_no) + ": bad number '" + tok +
                          "'");
    }
}

TomlTable::Value parse_value(const std::string& raw, int line_no) {
    const std::string tok = trim(raw);
    if (tok.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty value");
    if (tok == "true") return true;
    if (tok == "false") return false;
    if (tok.front() == '"') {
        if (tok.size() < 2 || tok.back() != '"') {
            throw ConfigError("config line " + std::to_string(line_no) + ": unterminated string");
        }
        return tok.substr(1, tok.size() - 2);
    }
    if (tok.front() == '[') {
        if (tok.back() != ']') {
            throw ConfigError("config line " + std::to_string(line_no) + ": unterminated array");
        }
        const std::string inner = trim(tok.substr(1, tok.size() - 2));
        std::vector<std::string> items;
        std::string cur;
        bool in_string = false;
        for (char ch : inner) {
            if (ch == '"') in_string = !in_string;
            if (ch == ',' && !in_string) {
                items.push_back(trim(cur));
                cur.clear();
            } else {
                cur += ch;
            }
        }
        if (!trim(cur).empty()) items.push_back(trim(cur));
        if (items.empty()) return std::vector<double>{};
        if (items.front().front() == '"') {
            std::vector<std::string> out;
            for (const auto& it : items) {
                if (it.size() < 2 || it.front() != '"' || it.back() != '"') {
                    throw ConfigError("config line " + std::to_string(line_no) +
                                      ": bad string array element '" + it + "'");
                }
                out.push_back(it.substr(1, it.size() - 2));
            }
            return out;
        }
        std::vector<double> out;
        for (const auto& it : items) out.push_back(parse_number(it, line_no));
        return out;
    }
    return parse_number(tok, line_no);
}

} // namespace

TomlTable TomlTable::parse(const std::string& text) {
    TomlTable table;
    std::istringstream is(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const std::string body = trim(strip_comment(line));
        if (body.empty()) continue;
        if (body.front() == '[') {
            if (body.back() != ']') {
                throw ConfigError("config line " + std::to_string(line_no) +
                                  ": malformed section header");
            }
            section = trim(body.substr(1, body.size() - 2));
            table.sections_[section];
            continue;
        }
        const std::size_t eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(body.substr(0, eq));
        if (key.empty()) {
            throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
        }
        table.sections_[section][key] = parse_value(body.substr(eq + 1), line_no);
    }
    return table;
}

TomlTable TomlTable::parse_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("config: cannot open " + path);
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse(buf.str());
}

const TomlTable::Value& TomlTable::get(const std::string& section, const std::string& key) const {
    auto sit = sections_.find(section);
    if (sit == sections_.end()) throw ConfigError("config: no section [" + section + "]");
    auto kit = sit->second.find(key);
    if (kit == sit->second.end()) {
        throw ConfigError("config: no key '" + key + "' in [" + section + "]");
    }
    return kit->second;
}

bool TomlTable::has(const std::string& section, const std::string& key) const {
    auto sit = sections_.find(section);
    return sit != sections_.end() && sit->second.count(key) != 0;
}

double TomlTable::number(const std::string& section, const std::string& key) const {
    const Value& v = get(section, key);
    if (const double* d = std::get_if<double>(&v)) return *d;
    throw ConfigError("config: [" + section + "] " + key + " must be a number");
}

bool TomlTable::boolean(const std::string& section, const std::string& key) const {
    const Value& v = get(section, key);
    if (const bool* b = std::get_if<bool>(&v)) return *b;
    throw ConfigError("config: [" + section + "] " + key + " must be a boolean");
}

std::string TomlTable::str(const std::string& section, const std::string& key) const {
    const Value& v = get(section, key);
    if (const std::string* s = std::get_if<std::string>(&v)) return *s;
    throw ConfigError("config: [" + section + "] " + key + " must be a string");
}

std::vector<double> TomlTable::numbers(const std::string& section, const std::string& key) const {
    const Value& v = get(section, key);
    if (const auto* a = std::get_if<std::vector<double>>(&v)) return *a;
    throw ConfigError("config: [" + section + "] " + key + " must be a number array");
}

std::vector<std::string> TomlTable::strings(const std::string& section,
                                            const std::string& key) const {
    const Value& v = get(section, key);
    if (const auto* a = std::get_if<std::vector<std::string>>(&v)) return *a;
    if (const auto* s = std::get_if<std::string>(&v)) return {*s};
    throw ConfigError("config: [" + section + "] " + key + " must be a string array");
}

std::vector<SchemeKind> parse_scheme_list(const std::string& text) {
    std::vector<SchemeKind> out;
    std::string cur;
    auto flush = [&]() {
        const std::string name = trim(cur);
        cur.clear();
        if (name.empty()) return;
        if (name == "explicit") out.push_back(SchemeKind::Explicit);
        else if (name == "imex") out.push_back(SchemeKind::Imex);
        else throw ConfigError("unknown scheme '" + name + "' (expected explicit or imex)");
    };
    for (char ch : text) {
        if (ch == ',') flush();
        else cur += ch;
    }
    flush();
    return out;
}

void apply_config_text(StudyConfig& cfg, const std::string& text) {
    const TomlTable t = TomlTable::parse(text);

    static const std::map<std::string, std::vector<std::string>> known = {
        {"measure",
         {"c_minus", "c_plus", "beta_minus", "beta_plus", "alpha_minus", "alpha_plus",
          "support_radius"}},
        {"coefficients", {"sigma1", "sigma2", "sigma0"}},
        {"study",
         {"T", "domain_radius", "delta", "eps", "h_list", "tau_rule", "tau_list", "mc",
          "seed", "schemes", "threads", "out", "inner_region", "compensator_cancellation"}},
    };
    for (const auto& [section, keys] : t.sections()) {
        auto it = known.find(section);
        if (it == known.end()) throw ConfigError("config: unknown section [" + section + "]");
        for (const auto& [key, value] : keys) {
            if (std::find(it->second.begin(), it->second.end(), key) == it->second.end()) {
                throw ConfigError("config: unknown key '" + key + "' in [" + section + "]");
            }
        }
    }

    auto num = [&](const char* sec, const char* key, double& dst) {
        if (t.has(sec, key)) dst = t.number(sec, key);
    };
    num("measure", "c_minus", cfg.params.c_minus);
    num("measure", "c_plus", cfg.params.c_plus);
    num("measure", "beta_minus", cfg.params.beta_minus);
    num("measure", "beta_plus", cfg.params.beta_plus);
    num("measure", "alpha_minus", cfg.params.alpha_minus);
    num("measure", "alpha_plus", cfg.params.alpha_plus);
    num("measure", "support_radius", cfg.params.support_radius);
    num("coefficients", "sigma1", cfg.params.sigma1);
    num("coefficients", "sigma2", cfg.params.sigma2);
    num("coefficients", "sigma0", cfg.params.sigma0);
    num("study", "T", cfg.params.T);
    num("study", "domain_radius", cfg.params.domain_radius);
    num("study", "delta", cfg.params.delta);
    num("study", "eps", cfg.params.eps);

    if (t.has("study", "h_list")) cfg.h_list = t.numbers("study", "h_list");
    if (t.has("study", "tau_rule")) {
        const std::string rule = t.str("study", "tau_rule");
        if (rule == "h2") {
            cfg.tau_rule = StudyConfig::TauRule::HSquared;
        } else if (rule == "list") {
            cfg.tau_rule = StudyConfig::TauRule::List;
        } else {
            throw ConfigError("config: tau_rule must be 'h2' or 'list'");
        }
    }
    if (t.has("study", "tau_list")) {
        cfg.tau_list = t.numbers("study", "tau_list");
        cfg.tau_rule = StudyConfig::TauRule::List;
    }
    if (t.has("study", "mc")) cfg.replications = static_cast<int>(t.number("study", "mc"));
    if (t.has("study", "seed")) {
        cfg.base_seed = static_cast<std::uint64_t>(t.number("study", "seed"));
    }
    if (t.has("study", "schemes")) {
        cfg.schemes.clear();
        for (const std::string& name : t.strings("study", "schemes")) {
            const auto parsed = parse_scheme_list(name);
            cfg.schemes.insert(cfg.schemes.end(), parsed.begin(), parsed.end());
        }
    }
    if (t.has("study", "threads")) cfg.threads = static_cast<int>(t.number("study", "threads"));
    if (t.has("study", "out")) cfg.output_dir = t.str("study", "out");
    if (t.has("study", "inner_region")) {
        const TomlTable::Value& v = t.sections().at("study").at("inner_region");
        if (const std::string* s = std::get_if<std::string>(&v)) {
            if (*s != "full") throw ConfigError("config: inner_region must be 'full' or a radius");
            cfg.error_region = ErrorRegion::full_grid();
        } else {
            cfg.error_region = ErrorRegion::inner(t.number("study", "inner_region"));
        }
    }
    if (t.has("study", "compensator_cancellation")) {
        cfg.compensator_cancellation = t.boolean("study", "compensator_cancellation");
    }
}

void apply_config_file(StudyConfig& cfg, const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("config: cannot open " + path);
    std::ostringstream buf;
    buf << is.rdbuf();
    apply_config_text(cfg, buf.str());
}

} // namespace sidefd
