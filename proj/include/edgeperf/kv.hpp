#pragma once

// Flat `key = value` text files, one pair per line. '#' starts a comment line.

#include <istream>
#include <map>
#include <string>
#include <string_view>

#include "edgeperf/error.hpp"
#include "edgeperf/format.hpp"

namespace edgeperf {

struct KvEntry {
    std::string value;
    std::size_t line = 0;
};

class KvFile {
public:
    static KvFile parse(std::istream& in, std::string source = "<input>") {
        KvFile kv;
        kv.source_ = std::move(source);
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto t = trim(line);
            if (t.empty() || t.front() == '#') continue;
            auto eq = t.find('=');
            if (eq == std::string_view::npos)
                throw ParseError(kv.where(lineno) + "expected 'key = value'");
            auto key = std::string(trim(t.substr(0, eq)));
            auto value = std::string(trim(t.substr(eq + 1)));
            if (key.empty()) throw ParseError(kv.where(lineno) + "empty key");
            if (kv.entries_.count(key))
                throw ParseError(kv.where(lineno) + "duplicate key '" + key + "'");
            kv.entries_.emplace(std::move(key), KvEntry{std::move(value), lineno});
        }
        return kv;
    }

    const std::map<std::string, KvEntry>& entries() const noexcept { return entries_; }
    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    const KvEntry& require(const std::string& key) const {
        auto it = entries_.find(key);
        if (it == entries_.end()) throw ParseError(source_ + ": missing key '" + key + "'");
        return it->second;
    }

    double real(const std::string& key) const {
        const auto& e = require(key);
        auto v = parse_double(e.value);
        if (!v) throw ParseError(where(e.line) + "'" + key + "' is not a number: '" + e.value + "'");
        return *v;
    }

    template <typename Int>
    Int integer(const std::string& key) const {
        const auto& e = require(key);
        auto v = parse_int<Int>(e.value);
        if (!v)
            throw ParseError(where(e.line) + "'" + key + "' is not an integer: '" + e.value + "'");
        return *v;
    }

    std::string where(std::size_t line) const {
        return source_ + ":" + std::to_string(line) + ": ";
    }
    const std::string& source() const noexcept { return source_; }

private:
    std::string source_;
    std::map<std::string, KvEntry> entries_;
};

}  // namespace edgeperf
