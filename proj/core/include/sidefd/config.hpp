#pragma once

#include "sidefd/study.hpp"

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace sidefd {

/// Minimal TOML reader covering the config surface: [section] headers,
/// key = value lines with numbers, booleans, quoted strings, and flat arrays,
/// plus # comments. Unknown keys are rejected by apply_config_file.
class TomlTable {
public:
    using Value = std::variant<double, bool, std::string, std::vector<double>,
                               std::vector<std::string>>;

    static TomlTable parse(const std::string& text);
    static TomlTable parse_file(const std::string& path);

    bool has(const std::string& section, const std::string& key) const;
    double number(const std::string& section, const std::string& key) const;
    bool boolean(const std::string& section, const std::string& key) const;
    std::string str(const std::string& section, const std::string& key) const;
    std::vector<double> numbers(const std::string& section, const std::string& key) const;
    std::vector<std::string> strings(const std::string& section, const std::string& key) const;

    const std::map<std::string, std::map<std::string, Value>>& sections() const {
        return sections_;
    }

private:
    const Value& get(const std::string& section, const std::string& key) const;
    std::map<std::string, std::map<std::string, Value>> sections_;
};

/// Overlay a config file onto a StudyConfig. Sections: [measure] (density
/// parameters), [coefficients] (sigma1, sigma2, sigma0), [study] (everything
/// else). Throws ConfigError on unknown keys or malformed values.
void apply_config_file(StudyConfig& cfg, const std::string& path);
void apply_config_text(StudyConfig& cfg, const std::string& text);

/// Parse "explicit,imex" style scheme lists.
std::vector<SchemeKind> parse_scheme_list(const std::string& text);

} // namespace sidefd
