#pragma once

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace purepairs {

inline constexpr const char * report_version = "purepairs-report/1";

struct Property {
    std::string name;
    bool pass = true;
    std::string tolerance;  // "exact", ">= 90%", ...
    nlohmann::json detail = nlohmann::json::object();
};

struct Report {
    std::string kind;
    std::uint64_t seed = 0;
    nlohmann::json params = nlohmann::json::object();
    nlohmann::json trials = nlohmann::json::array();
    std::vector<Property> properties;

    bool pass() const
    {
        for (const auto & p : properties)
            if (!p.pass)
                return false;
        return true;
    }

    Property & add(std::string name, bool pass, std::string tolerance, nlohmann::json detail = nlohmann::json::object())
    {
        properties.push_back({std::move(name), pass, std::move(tolerance), std::move(detail)});
        return properties.back();
    }

    nlohmann::json to_json() const
    {
        nlohmann::json props = nlohmann::json::array();
        for (const auto & p : properties)
            props.push_back({{"name", p.name}, {"pass", p.pass}, {"tolerance", p.tolerance}, {"detail", p.detail}});
        return {{"version", report_version},
                {"kind", kind},
                {"seed", seed},
                {"params", params},
                {"trials", trials},
                {"properties", props},
                {"pass", pass()}};
    }

    /// One row per trial over the union of scalar trial fields, then one row
    /// per property.
    std::string to_csv() const
    {
        std::vector<std::string> cols;
        for (const auto & t : trials)
            for (auto it = t.begin(); it != t.end(); ++it)
                if (!it->is_structured() && std::find(cols.begin(), cols.end(), it.key()) == cols.end())
                    cols.push_back(it.key());
        std::ostringstream out;
        out << "section";
        for (const auto & c : cols)
            out << ',' << c;
        out << '\n';
        auto cell = [](const nlohmann::json & v) {
            std::string s = v.is_string() ? v.get<std::string>() : v.dump();
            if (s.find_first_of(",\"\n") != std::string::npos) {
                std::string q = "\"";
                for (char ch : s)
                    q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
                return q + "\"";
            }
            return s;
        };
        for (const auto & t : trials) {
            out << "trial";
            for (const auto & c : cols)
                out << ',' << (t.contains(c) ? cell(t[c]) : std::string());
            out << '\n';
        }
        out << "property,name,pass,tolerance\n";
        for (const auto & p : properties)
            out << "property," << cell(p.name) << ',' << (p.pass ? "true" : "false") << ',' << cell(p.tolerance)
                << '\n';
        return out.str();
    }
};

}  // namespace purepairs
