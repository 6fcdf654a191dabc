// Copyright (c) 2026 storelens contributors
// SPDX-License-Identifier: Apache-2.0

#include "storelens/log_template.hpp"

#include <fstream>

#include "storelens/errors.hpp"

namespace storelens {

std::vector<RewriteRule> LogNormalizer::default_rules() {
    // Order matters: composite tokens (timestamps, IPs, hex, node names)
    // must be swallowed before the bare-number rule sees their digits.
    return {
        {R"(\d{4}-\d{2}-\d{2}[T ]\d{2}:\d{2}:\d{2}(\.\d+)?)", "<ts>"},
        {R"(\d{4}-\d{2}-\d{2})", "<date>"},
        {R"(\d{1,2}:\d{2}:\d{2}(\.\d+)?)", "<time>"},
        {R"(\d{1,3}\.\d{1,3}\.\d{1,3}\.\d{1,3})", "<ip>"},
        {R"(0[xX][0-9a-fA-F]+)", "<hex>"},
        {R"(\b[A-Za-z][A-Za-z_-]*\d+\b)", "<node>"},
        {R"(\d+(\.\d+)?)", "<num>"},
    };
}

LogNormalizer::LogNormalizer() : LogNormalizer(default_rules()) {}

LogNormalizer::LogNormalizer(std::vector<RewriteRule> rules) : rules_(std::move(rules)) {
    compiled_.reserve(rules_.size());
    for (const auto& r : rules_) {
        try {
            compiled_.emplace_back(r.pattern, std::regex::ECMAScript | std::regex::optimize);
        } catch (const std::regex_error& e) {
            throw ConfigError("bad rewrite rule '" + r.pattern + "': " + e.what());
        }
    }
}

LogNormalizer LogNormalizer::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open rewrite-rule file: " + path);
    std::vector<RewriteRule> rules;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r')) {
            line.pop_back();
        }
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        const auto arrow = line.find(" -> ", start);
        if (arrow == std::string::npos) {
            throw ConfigError("rewrite rule line lacks ' -> ': " + line);
        }
        rules.push_back({line.substr(start, arrow - start), line.substr(arrow + 4)});
    }
    return LogNormalizer(std::move(rules));
}

std::string LogNormalizer::normalize(const std::string& raw) const {
    std::string text = raw;
    for (std::size_t i = 0; i < compiled_.size(); ++i) {
        text = std::regex_replace(text, compiled_[i], rules_[i].placeholder);
    }
    return text;
}

std::map<ComponentId, std::set<std::string>> template_logs(const std::vector<LogRecord>& records,
                                                           const LogNormalizer& normalizer) {
    std::map<ComponentId, std::set<std::string>> out;
    for (const auto& r : records) out[r.component].insert(normalizer.normalize(r.raw_text));
    return out;
}

std::set<std::string> log_delta(const std::set<std::string>& unhealthy_templates,
                                const std::vector<std::set<std::string>>& healthy_template_sets) {
    if (healthy_template_sets.empty()) {
        throw ConfigError("log differencing needs at least one healthy peer");
    }
    std::set<std::string> healthy_union;
    for (const auto& s : healthy_template_sets) healthy_union.insert(s.begin(), s.end());
    std::set<std::string> delta;
    for (const auto& t : unhealthy_templates) {
        if (!healthy_union.count(t)) delta.insert(t);
    }
    return delta;
}

}  // namespace storelens
