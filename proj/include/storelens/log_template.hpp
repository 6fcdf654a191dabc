// Copyright (c) 2026 storelens contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include "storelens/trace.hpp"

namespace storelens {

/// One ordered rewrite rule: everything the pattern matches becomes the
/// placeholder.
struct RewriteRule {
    std::string pattern;
    std::string placeholder;
};

/// Normalizes raw log text into templates by stripping time- and
/// node-specific metadata through ordered regex rewrites. Normalization is
/// idempotent: placeholders never re-match any rule.
class LogNormalizer {
  public:
    /// Built-in rules: timestamps, IPs, hex ids, node names, numbers.
    LogNormalizer();
    explicit LogNormalizer(std::vector<RewriteRule> rules);

    /// Parses a rule file, one `pattern -> placeholder` per line; '#' starts
    /// a comment.
    static LogNormalizer from_file(const std::string& path);
    static std::vector<RewriteRule> default_rules();

    const std::vector<RewriteRule>& rules() const { return rules_; }

    std::string normalize(const std::string& raw) const;

  private:
    std::vector<RewriteRule> rules_;
    std::vector<std::regex> compiled_;
};

/// Per-component deduplicated template sets.
std::map<ComponentId, std::set<std::string>> template_logs(const std::vector<LogRecord>& records,
                                                           const LogNormalizer& normalizer);

/// delta = unhealthy templates minus the union of the healthy sets. Throws
/// ConfigError when there is no healthy baseline to compare against.
std::set<std::string> log_delta(const std::set<std::string>& unhealthy_templates,
                                const std::vector<std::set<std::string>>& healthy_template_sets);

}  // namespace storelens
