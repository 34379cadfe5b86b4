#pragma once

// Versioned golden-vector files:
//
//   {"schema_version": 1, "precision_digits": 30,
//    "entries": [{"op": "...", "inputs": {"name": "decimal"}, "value": "decimal"}]}
//
// Numbers are decimal strings so every reader parses them exactly.

#include <map>
#include <string>
#include <vector>

namespace ixt::golden {

inline constexpr int kSchemaVersion = 1;

struct GoldenEntry {
    std::string op;
    std::map<std::string, std::string> inputs;
    std::string value;
};

struct GoldenFile {
    int schema_version = kSchemaVersion;
    int precision_digits = 30;
    std::vector<GoldenEntry> entries;
};

/// Throws IoError on malformed JSON or schema violations.
GoldenFile parse(const std::string& text);
std::string serialize(const GoldenFile& file);

/// Throws IoError if the file is missing or unreadable.
GoldenFile load(const std::string& path);

/// Library value for an entry; DomainError for an unknown op or input name.
double evaluate(const GoldenEntry& entry);

/// Absolute tolerance: 1e-12 for special functions, 1e-10 otherwise.
double tolerance(const std::string& op);

struct GoldenCheck {
    GoldenEntry entry;
    double expected = 0.0;
    double computed = 0.0;
    double abs_error = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    /// Set when evaluation threw; pass is then false.
    std::string error;
};

std::vector<GoldenCheck> check(const GoldenFile& file);

}  // namespace ixt::golden
