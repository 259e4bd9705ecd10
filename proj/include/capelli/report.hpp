#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace capelli {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportSchema = 1;

struct CheckEntry {
    std::string id;
    std::string group;  // which family of identities the check belongs to
    bool pass = false;
    std::string detail;
};

struct RunReport {
    std::string command;
    std::vector<std::pair<std::string, std::string>> config;
    std::vector<CheckEntry> checks;
    long wall_ms = 0;

    void conf(const std::string& key, const std::string& value) { config.emplace_back(key, value); }
    void add(const std::string& id, const std::string& group, bool pass, const std::string& detail) {
        checks.push_back({id, group, pass, detail});
    }

    int passed() const {
        int n = 0;
        for (const auto& c : checks) n += c.pass ? 1 : 0;
        return n;
    }
    bool all_pass() const { return passed() == static_cast<int>(checks.size()); }

    std::string text() const {
        std::string out = "capelli " + command + " (version " + kToolVersion + ")\n";
        for (const auto& [k, v] : config) out += "  " + k + ": " + v + "\n";
        for (const auto& c : checks) {
            out += c.pass ? "PASS  " : "FAIL  ";
            out += c.id;
            if (!c.detail.empty()) out += "  " + c.detail;
            out += "\n";
        }
        out += "result: " + std::to_string(passed()) + "/" + std::to_string(checks.size()) + " checks passed, " +
               std::to_string(wall_ms) + " ms\n";
        return out;
    }

    std::string json() const {
        nlohmann::ordered_json j;
        j["schema"] = kReportSchema;
        j["version"] = kToolVersion;
        j["command"] = command;
        nlohmann::ordered_json conf = nlohmann::ordered_json::object();
        for (const auto& [k, v] : config) conf[k] = v;
        j["config"] = conf;
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& c : checks)
            arr.push_back({{"id", c.id}, {"group", c.group}, {"pass", c.pass}, {"detail", c.detail}});
        j["checks"] = arr;
        j["passed"] = passed();
        j["total"] = checks.size();
        j["all_pass"] = all_pass();
        j["wall_ms"] = wall_ms;
        return j.dump(2) + "\n";
    }
};

}  // namespace capelli
