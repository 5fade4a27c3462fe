#pragma once

#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "minidyn/access_path.hpp"
#include "minidyn/value.hpp"

namespace minidyn::query {

/// Parses the CLI access-path syntax: `$name[idx]...` where each idx is an
/// integer, a quoted string, `*` (unknown value), or `•`/`@unknown` (the
/// unknown field). Returns nullopt on malformed input.
inline std::optional<AccessPath> parsePath(std::string_view text) {
    size_t i = 0;
    auto skipWs = [&] {
        while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    };
    skipWs();
    if (i >= text.size() || text[i] != '$') return std::nullopt;
    ++i;
    size_t start = i;
    while (i < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[i])) ||
            text[i] == '_'))
        ++i;
    if (i == start) return std::nullopt;
    std::vector<AccessPath> elems;
    elems.push_back(
        AccessPath::mkAtom(Value::ofStr(std::string(text.substr(start, i - start)))));

    auto parseAtom = [&](std::string_view tok) -> std::optional<Value> {
        if (tok == "*") return Value::star();
        if (tok == "@unknown" || tok == "\xe2\x80\xa2") return Value::bullet();
        if (tok == "undef") return Value::undef();
        if (tok.size() >= 2 && (tok.front() == '\'' || tok.front() == '"') &&
            tok.back() == tok.front())
            return Value::ofStr(std::string(tok.substr(1, tok.size() - 2)));
        if (tok.empty()) return std::nullopt;
        size_t j = tok[0] == '-' ? 1 : 0;
        if (j >= tok.size()) return std::nullopt;
        bool numeric = true;
        for (size_t k = j; k < tok.size(); ++k)
            if (!std::isdigit(static_cast<unsigned char>(tok[k])))
                numeric = false;
        if (numeric) return Value::ofInt(std::stoll(std::string(tok)));
        // bare identifiers read as string keys
        for (char c : tok)
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
                return std::nullopt;
        return Value::ofStr(std::string(tok));
    };

    skipWs();
    while (i < text.size()) {
        if (text[i] != '[') return std::nullopt;
        ++i;
        size_t close = text.find(']', i);
        if (close == std::string_view::npos) return std::nullopt;
        std::string_view tok = text.substr(i, close - i);
        // trim
        while (!tok.empty() && (tok.front() == ' ')) tok.remove_prefix(1);
        while (!tok.empty() && (tok.back() == ' ')) tok.remove_suffix(1);
        auto v = parseAtom(tok);
        if (!v) return std::nullopt;
        elems.push_back(AccessPath::mkAtom(*v));
        i = close + 1;
        skipWs();
    }
    return AccessPath::mkSeq(std::move(elems));
}

/// Renders a value set as the CLI's sorted space-separated list.
inline std::string renderValues(const ValueSet& vs) {
    std::string out;
    for (const Value& v : vs) {
        if (!out.empty()) out += ' ';
        out += v.toString();
    }
    return out;
}

} // namespace minidyn::query
